#include "sbvp/problem_io.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "sbvp/errors.hpp"

namespace sbvp {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

double parse_number(const std::string& field, const std::string& text) {
    try {
        std::size_t used = 0;
        double v = std::stod(text, &used);
        if (trim(text.substr(used)).empty() && std::isfinite(v)) return v;
    } catch (...) {
    }
    throw SchemaError(field, "expected a finite number, got '" + text + "'");
}

}  // namespace

ProblemSpec parse_problem_text(const std::string& text) {
    std::map<std::string, std::string> problem;
    expr::Env params;
    std::string section;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        std::size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw SchemaError(line, "malformed section header");
            section = trim(line.substr(1, line.size() - 2));
            if (section != "problem" && section != "params")
                throw SchemaError(section, "unknown section");
            continue;
        }
        std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw SchemaError(line, "expected 'key = value'");
        std::string key = trim(line.substr(0, eq));
        std::string val = trim(line.substr(eq + 1));
        if (key.empty()) throw SchemaError(line, "empty key");
        if (section == "problem") {
            if (problem.count(key)) throw SchemaError(key, "duplicate key");
            problem[key] = val;
        } else if (section == "params") {
            if (params.has(key)) throw SchemaError(key, "duplicate parameter");
            params.bind(key, parse_number(key, val));
        } else {
            throw SchemaError(key, "key outside any section");
        }
    }

    for (const char* req : {"mu", "R", "f", "q", "u", "v", "gamma_r"})
        if (!problem.count(req)) throw SchemaError(req, "missing required key");

    double mu_val = parse_number("mu", problem["mu"]);
    if (!(mu_val > 1.0) || !(mu_val <= 2.0))
        throw SchemaError("mu", "mu out of (1,2]");
    double R = parse_number("R", problem["R"]);
    if (!(R > 0.0)) throw SchemaError("R", "R must be positive");

    if (!params.has("R")) params.bind("R", R);

    auto parse_field = [&](const char* key) {
        try {
            return expr::parse(problem[key]);
        } catch (const ParseError& e) {
            throw SchemaError(key, e.what());
        }
    };
    expr::Ast f = parse_field("f");
    expr::Ast q = parse_field("q");
    expr::Ast u = parse_field("u");
    expr::Ast v = parse_field("v");
    expr::Ast g = parse_field("gamma_r");

    // every variable must be t/x/r as appropriate or a bound parameter
    auto check_vars = [&](const char* key, const expr::Ast& a,
                          std::initializer_list<const char*> allowed) {
        for (const auto& name : expr::variables(a)) {
            bool ok = params.has(name);
            for (const char* al : allowed) ok = ok || name == al;
            if (!ok) throw SchemaError(key, "unbound identifier '" + name + "'");
        }
    };
    check_vars("f", f, {"t", "x"});
    check_vars("q", q, {"t"});
    check_vars("u", u, {"x"});
    check_vars("v", v, {"x"});
    check_vars("gamma_r", g, {"r"});

    try {
        return ProblemSpec(FracOrder(mu_val), f, q, u, v, g, R, params);
    } catch (const ConfigError& e) {
        throw SchemaError("problem", e.what());
    }
}

ProblemSpec load_problem_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw SchemaError("file", "cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_problem_text(ss.str());
}

std::string serialize_problem(const ProblemSpec& p) {
    std::ostringstream out;
    char buf[64];
    out << "[problem]\n";
    std::snprintf(buf, sizeof buf, "%.17g", p.mu.mu);
    out << "mu = " << buf << "\n";
    std::snprintf(buf, sizeof buf, "%.17g", p.R);
    out << "R = " << buf << "\n";
    out << "f = " << expr::print(p.f) << "\n";
    out << "q = " << expr::print(p.q) << "\n";
    out << "u = " << expr::print(p.u) << "\n";
    out << "v = " << expr::print(p.v) << "\n";
    out << "gamma_r = " << expr::print(p.gamma_r) << "\n";
    out << "[params]\n";
    for (const auto& [name, value] : p.params.entries()) {
        std::snprintf(buf, sizeof buf, "%.17g", value);
        out << name << " = " << buf << "\n";
    }
    return out.str();
}

std::string example_problem_text(double lambda, double R) {
    std::ostringstream out;
    char buf[64];
    out << "# Worked example: bilateral Caputo SBVP with endpoint- and\n"
           "# value-singular forcing.\n"
           "[problem]\n"
           "mu = 1.9\n";
    std::snprintf(buf, sizeof buf, "%.17g", R);
    out << "R = " << buf << "\n";
    out << "f = lambda/(1-abs(t)^0.9)^0.9 * (1/x^0.9 - x + R)\n"
           "q = lambda/(1-abs(t)^0.9)^0.9\n"
           "u = 1/x^0.9\n"
           "v = x + R\n"
           "gamma_r = lambda/r^0.9\n"
           "[params]\n";
    std::snprintf(buf, sizeof buf, "%.17g", lambda);
    out << "lambda = " << buf << "\n";
    return out.str();
}

ProblemSpec example_problem(double lambda, double R) {
    return parse_problem_text(example_problem_text(lambda, R));
}

}  // namespace sbvp
