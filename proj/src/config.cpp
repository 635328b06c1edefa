#include "bubble/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace bubble {

namespace {

std::string trim(const std::string& s) {
    size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    size_t e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double parse_number(const std::string& v, const std::string& key, int line) {
    try {
        size_t pos = 0;
        double x = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument("trailing characters");
        return x;
    } catch (const std::exception&) {
        throw ParseError("config line " + std::to_string(line) + ": malformed number for key '" +
                         key + "': " + v);
    }
}

std::string fmt(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

}  // namespace

ScalarField FieldSpec::make(Grid1D g) const {
    switch (kind) {
        case Kind::Constant:
            return ScalarField(g, p0);
        case Kind::Affine:
            return ScalarField::from(g, [&](double x) { return p0 + p1 * x; });
        case Kind::Cosine:
            return ScalarField::from(
                g, [&](double x) { return p0 + p1 * std::cos(2.0 * M_PI * p2 * x); });
        case Kind::Csv: {
            ScalarField u = read_csv(path);
            if (u.grid != g)
                throw ParseError("csv field " + path + " has " + std::to_string(u.n()) +
                                 " nodes, expected " + std::to_string(g.n));
            return u;
        }
    }
    throw ParseError("FieldSpec: bad kind");
}

std::string FieldSpec::to_string() const {
    switch (kind) {
        case Kind::Constant:
            return "constant(" + fmt(p0) + ")";
        case Kind::Affine:
            return "affine(" + fmt(p0) + "," + fmt(p1) + ")";
        case Kind::Cosine:
            return "cosine(" + fmt(p0) + "," + fmt(p1) + "," + fmt(p2) + ")";
        case Kind::Csv:
            return "csv(" + path + ")";
    }
    return "?";
}

FieldSpec FieldSpec::parse(const std::string& text) {
    std::string t = trim(text);
    size_t open = t.find('(');
    if (open == std::string::npos || t.back() != ')')
        throw ParseError("field spec must look like name(args): " + text);
    std::string name = t.substr(0, open);
    std::string args = t.substr(open + 1, t.size() - open - 2);
    std::vector<std::string> parts;
    std::istringstream as(args);
    std::string piece;
    while (std::getline(as, piece, ',')) parts.push_back(trim(piece));

    auto num = [&](size_t i) {
        try {
            return std::stod(parts.at(i));
        } catch (const std::exception&) {
            throw ParseError("bad argument in field spec: " + text);
        }
    };
    if (name == "constant" && parts.size() == 1) return constant(num(0));
    if (name == "affine" && parts.size() == 2) return affine(num(0), num(1));
    if (name == "cosine" && parts.size() == 3) return cosine(num(0), num(1), num(2));
    if (name == "csv" && parts.size() == 1) {
        FieldSpec s;
        s.kind = Kind::Csv;
        s.path = parts[0];
        return s;
    }
    throw ParseError("unknown field family or wrong arity: " + text);
}

Scenario RunConfig::scenario(Grid1D g) const {
    if (kind == ProblemKind::Crypto) {
        CryptoScenario s{nu, cara_c, K_asset, N_agents, r1, r0.make(g)};
        s.validate();
        return s;
    }
    if (kind == ProblemKind::RealEstate) {
        RealEstateScenario s{nu, crra_gamma, K_asset, Q_wealth, r1, r0.make(g), f.make(g)};
        s.validate();
        return s;
    }
    throw ParseError("config: a scenario command needs kind = crypto or realestate");
}

EllipticProblem RunConfig::problem(Grid1D g) const {
    if (kind == ProblemKind::Generic) {
        EllipticProblem p{nu, eps, b.make(g), a.make(g), f.make(g)};
        p.validate();
        return p;
    }
    return build_problem(scenario(g));
}

RunConfig parse_config(const std::string& text) {
    RunConfig cfg;
    std::istringstream in(text);
    std::string raw;
    std::string section = "problem";
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        std::string line = raw;
        size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ParseError("config line " + std::to_string(line_no) + ": bad section");
            section = line.substr(1, line.size() - 2);
            if (section != "problem" && section != "solver" && section != "mc" &&
                section != "branch" && section != "output")
                throw ParseError("config line " + std::to_string(line_no) +
                                 ": unknown section [" + section + "]");
            continue;
        }
        size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ParseError("config line " + std::to_string(line_no) + ": expected key = value");
        std::string key = trim(line.substr(0, eq));
        std::string val = trim(line.substr(eq + 1));
        auto number = [&] { return parse_number(val, key, line_no); };
        auto positive = [&](const char* what) {
            double x = number();
            if (x <= 0.0)
                throw ParseError("config line " + std::to_string(line_no) + ": " + what +
                                 " must be > 0");
            return x;
        };

        bool ok = true;
        if (section == "problem") {
            if (key == "kind") {
                if (val == "generic")
                    cfg.kind = ProblemKind::Generic;
                else if (val == "crypto")
                    cfg.kind = ProblemKind::Crypto;
                else if (val == "realestate")
                    cfg.kind = ProblemKind::RealEstate;
                else
                    throw ParseError("config line " + std::to_string(line_no) +
                                     ": kind must be generic|crypto|realestate");
            } else if (key == "n") {
                cfg.n = static_cast<int>(number());
                if (cfg.n < 3)
                    throw ParseError("config line " + std::to_string(line_no) + ": n must be >= 3");
            } else if (key == "nu")
                cfg.nu = positive("nu");
            else if (key == "epsilon")
                cfg.eps = positive("eps");
            else if (key == "a")
                cfg.a = FieldSpec::parse(val);
            else if (key == "b")
                cfg.b = FieldSpec::parse(val);
            else if (key == "f")
                cfg.f = FieldSpec::parse(val);
            else if (key == "u0")
                cfg.u0 = FieldSpec::parse(val);
            else if (key == "r")
                cfg.r = FieldSpec::parse(val);
            else if (key == "c")
                cfg.cara_c = positive("c");
            else if (key == "gamma")
                cfg.crra_gamma = positive("gamma");
            else if (key == "K")
                cfg.K_asset = positive("K");
            else if (key == "N")
                cfg.N_agents = positive("N");
            else if (key == "Q")
                cfg.Q_wealth = positive("Q");
            else if (key == "r1")
                cfg.r1 = number();
            else if (key == "r0")
                cfg.r0 = FieldSpec::parse(val);
            else
                ok = false;
        } else if (section == "solver") {
            if (key == "tol")
                cfg.tol = positive("tol");
            else if (key == "dt")
                cfg.dt = positive("dt");
            else if (key == "t_max")
                cfg.t_max = positive("t_max");
            else
                ok = false;
        } else if (section == "mc") {
            if (key == "paths") {
                cfg.paths = static_cast<long long>(number());
                if (cfg.paths < 1)
                    throw ParseError("config line " + std::to_string(line_no) +
                                     ": paths must be >= 1");
            } else if (key == "dt")
                cfg.mc_dt = positive("mc dt");
            else if (key == "horizon")
                cfg.horizon = positive("horizon");
            else if (key == "seed")
                cfg.seed = static_cast<std::uint64_t>(number());
            else if (key == "x0") {
                cfg.x0 = number();
                if (cfg.x0 < 0.0 || cfg.x0 > 1.0)
                    throw ParseError("config line " + std::to_string(line_no) +
                                     ": x0 must be in [0,1]");
            } else if (key == "weight_floor") {
                cfg.weight_floor = number();
                if (cfg.weight_floor < 0.0)
                    throw ParseError("config line " + std::to_string(line_no) +
                                     ": weight_floor must be >= 0");
            } else if (key == "epsilon")
                cfg.mc_eps = positive("mc epsilon");
            else
                ok = false;
        } else if (section == "branch") {
            if (key == "eps_list") {
                cfg.eps_list.clear();
                std::istringstream es(val);
                std::string piece;
                while (std::getline(es, piece, ','))
                    cfg.eps_list.push_back(parse_number(trim(piece), key, line_no));
                if (cfg.eps_list.empty())
                    throw ParseError("config line " + std::to_string(line_no) +
                                     ": eps_list is empty");
            } else if (key == "lambda_count") {
                cfg.lambda_count = static_cast<int>(number());
                if (cfg.lambda_count < 2)
                    throw ParseError("config line " + std::to_string(line_no) +
                                     ": lambda_count must be >= 2");
            } else if (key == "lambda_span")
                cfg.lambda_span = positive("lambda_span");
            else
                ok = false;
        } else if (section == "output") {
            if (key == "dir")
                cfg.out_dir = val;
            else
                ok = false;
        }
        if (!ok)
            throw ParseError("config line " + std::to_string(line_no) + ": unknown key '" + key +
                             "' in section [" + section + "]");
    }
    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open config file " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

std::string emit_config(const RunConfig& c) {
    std::ostringstream out;
    const char* kind = c.kind == ProblemKind::Generic    ? "generic"
                       : c.kind == ProblemKind::Crypto   ? "crypto"
                                                         : "realestate";
    out << "[problem]\n";
    out << "kind = " << kind << "\n";
    out << "n = " << c.n << "\n";
    out << "nu = " << fmt(c.nu) << "\n";
    out << "epsilon = " << fmt(c.eps) << "\n";
    out << "a = " << c.a.to_string() << "\n";
    out << "b = " << c.b.to_string() << "\n";
    out << "f = " << c.f.to_string() << "\n";
    out << "u0 = " << c.u0.to_string() << "\n";
    out << "r = " << c.r.to_string() << "\n";
    out << "c = " << fmt(c.cara_c) << "\n";
    out << "gamma = " << fmt(c.crra_gamma) << "\n";
    out << "K = " << fmt(c.K_asset) << "\n";
    out << "N = " << fmt(c.N_agents) << "\n";
    out << "Q = " << fmt(c.Q_wealth) << "\n";
    out << "r1 = " << fmt(c.r1) << "\n";
    out << "r0 = " << c.r0.to_string() << "\n";
    out << "[solver]\n";
    out << "tol = " << fmt(c.tol) << "\n";
    out << "dt = " << fmt(c.dt) << "\n";
    out << "t_max = " << fmt(c.t_max) << "\n";
    out << "[mc]\n";
    out << "paths = " << c.paths << "\n";
    out << "dt = " << fmt(c.mc_dt) << "\n";
    out << "horizon = " << fmt(c.horizon) << "\n";
    out << "seed = " << c.seed << "\n";
    out << "x0 = " << fmt(c.x0) << "\n";
    out << "weight_floor = " << fmt(c.weight_floor) << "\n";
    out << "epsilon = " << fmt(c.mc_eps) << "\n";
    out << "[branch]\n";
    out << "eps_list = ";
    for (size_t i = 0; i < c.eps_list.size(); ++i)
        out << (i ? "," : "") << fmt(c.eps_list[i]);
    out << "\n";
    out << "lambda_count = " << c.lambda_count << "\n";
    out << "lambda_span = " << fmt(c.lambda_span) << "\n";
    out << "[output]\n";
    out << "dir = " << c.out_dir << "\n";
    return out.str();
}

}  // namespace bubble
