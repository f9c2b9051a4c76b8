#include "ugks/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "ugks/errors.hpp"

namespace ugks {
namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

double parse_double(const std::string& key, const std::string& text) {
    const std::string t = trim(text);
    double v = 0.0;
    const char* first = t.data();
    if (!t.empty() && t[0] == '+') ++first;
    const auto [ptr, ec] = std::from_chars(first, t.data() + t.size(), v);
    if (t.empty() || ec != std::errc() || ptr != t.data() + t.size() || !std::isfinite(v))
        throw ConfigError(key + ": expected a number, got '" + text + "'");
    return v;
}

int parse_int(const std::string& key, const std::string& text) {
    const std::string t = trim(text);
    int v = 0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (t.empty() || ec != std::errc() || ptr != t.data() + t.size())
        throw ConfigError(key + ": expected an integer, got '" + text + "'");
    return v;
}

bool parse_bool(const std::string& key, const std::string& text) {
    const std::string t = trim(text);
    if (t == "true" || t == "1" || t == "on" || t == "yes") return true;
    if (t == "false" || t == "0" || t == "off" || t == "no") return false;
    throw ConfigError(key + ": expected true or false, got '" + text + "'");
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream is(s);
    while (std::getline(is, cur, sep)) out.push_back(trim(cur));
    return out;
}

// "name(a,b)" -> {name, {a, b}}; a bare "name" has no arguments.
std::pair<std::string, std::vector<std::string>> parse_call(const std::string& key,
                                                             const std::string& text) {
    const std::string t = trim(text);
    const auto open = t.find('(');
    if (open == std::string::npos) return {t, {}};
    if (t.back() != ')') throw ConfigError(key + ": unbalanced parentheses in '" + text + "'");
    const std::string inner = t.substr(open + 1, t.size() - open - 2);
    return {trim(t.substr(0, open)), trim(inner).empty() ? std::vector<std::string>{} : split(inner, ',')};
}

void expect_args(const std::string& key, const std::string& name, std::size_t got, std::size_t want) {
    if (got != want)
        throw ConfigError(key + ": " + name + " takes " + std::to_string(want) + " argument(s)");
}

BoundarySpec parse_boundary(const std::string& key, const std::string& text) {
    const auto [name, args] = parse_call(key, text);
    BoundarySpec b;
    if (name == "zero") {
        expect_args(key, name, args.size(), 0);
    } else if (name == "isotropic") {
        expect_args(key, name, args.size(), 1);
        b.kind = BoundarySpec::Kind::isotropic;
        b.value = parse_double(key, args[0]);
    } else if (name == "half_indicator") {
        expect_args(key, name, args.size(), 2);
        b.kind = BoundarySpec::Kind::half_indicator;
        const double s = parse_double(key, args[0]);
        if (s != 1.0 && s != -1.0) throw ConfigError(key + ": half_indicator sign must be +1 or -1");
        b.sign = s > 0 ? 1 : -1;
        b.value = parse_double(key, args[1]);
    } else {
        throw ConfigError(key + ": unknown boundary '" + name +
                          "' (zero, isotropic(c), half_indicator(sign,c))");
    }
    return b;
}

InitialSpec parse_initial(const std::string& key, const std::string& text) {
    const auto [name, args] = parse_call(key, text);
    InitialSpec s;
    if (name == "zero") {
        expect_args(key, name, args.size(), 0);
    } else if (name == "sine") {
        expect_args(key, name, args.size(), 3);
        s.kind = InitialSpec::Kind::sine;
        s.rho0 = parse_double(key, args[0]);
        s.amp = parse_double(key, args[1]);
        s.u0 = parse_double(key, args[2]);
    } else if (name == "constant") {
        expect_args(key, name, args.size(), 2);
        s.kind = InitialSpec::Kind::constant;
        s.rho0 = parse_double(key, args[0]);
        s.u0 = parse_double(key, args[1]);
    } else {
        throw ConfigError(key + ": unknown initial data '" + name +
                          "' (zero, sine(rho0,amp,u0), constant(rho,u))");
    }
    return s;
}

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

const std::vector<std::string>& case_names() {
    static const std::vector<std::string> names{"convergence", "transport", "intermediate",
                                                "diffusion"};
    return names;
}

const std::vector<std::string>& scheme_names() {
    static const std::vector<std::string> names{"ugks", "ugks-m1", "ugks-m1-o2", "ugks-m2",
                                                "diffusion-ref"};
    return names;
}

CaseConfig preset(const std::string& name) {
    CaseConfig c;
    c.name = name;
    BoundarySpec in_from_right{BoundarySpec::Kind::half_indicator, 1.0, -1};
    BoundarySpec in_from_left{BoundarySpec::Kind::half_indicator, 1.0, 1};
    if (name == "convergence") {
        c.initial = {InitialSpec::Kind::sine, 0.5, 0.25, 0.4};
        c.t_end = 1.0;
        c.output_times = {1.0};
    } else if (name == "transport" || name == "intermediate") {
        if (name == "intermediate") c.eta = c.epsilon = 0.1;
        c.periodic = false;
        c.right = in_from_right;
        c.output_times = {0.1, 0.4, 1.0, 1.6};
        if (name == "transport") c.output_times.push_back(4.0);
        c.t_end = c.output_times.back();
    } else if (name == "diffusion") {
        c.eta = c.epsilon = 1e-8;
        c.periodic = false;
        c.left = in_from_left;
        c.output_times = {0.01, 0.05, 0.15, 2.0};
        c.t_end = 2.0;
    } else {
        throw ConfigError("unknown case '" + name + "'");
    }
    return c;
}

void apply_setting(CaseConfig& c, const std::string& key_in, const std::string& value) {
    const std::string key = trim(key_in);
    const std::string v = trim(value);
    if (key == "scheme") {
        c.scheme = v;
    } else if (key == "nx") {
        c.nx = parse_int(key, v);
    } else if (key == "nv") {
        c.nv = parse_int(key, v);
    } else if (key == "eta") {
        c.eta = parse_double(key, v);
    } else if (key == "epsilon") {
        c.epsilon = parse_double(key, v);
    } else if (key == "sigma") {
        c.sigma = parse_double(key, v);
    } else if (key == "bc") {
        if (v != "periodic" && v != "dirichlet")
            throw ConfigError("bc: expected periodic or dirichlet, got '" + v + "'");
        c.periodic = v == "periodic";
    } else if (key == "left") {
        c.left = parse_boundary(key, v);
    } else if (key == "right") {
        c.right = parse_boundary(key, v);
    } else if (key == "initial") {
        c.initial = parse_initial(key, v);
    } else if (key == "t_end") {
        c.t_end = parse_double(key, v);
    } else if (key == "output_times") {
        c.output_times.clear();
        for (const auto& s : split(v, ',')) c.output_times.push_back(parse_double(key, s));
    } else if (key == "cfl_safety") {
        c.cfl_safety = parse_double(key, v);
    } else if (key == "limiter") {
        c.limiter = v;
    } else if (key == "beta_eps") {
        c.beta_eps = parse_double(key, v);
    } else if (key == "rho_eps") {
        c.rho_eps = parse_double(key, v);
    } else if (key == "clamp_u") {
        c.clamp_u = parse_bool(key, v);
    } else if (key == "m2_tol") {
        c.m2_tol = parse_double(key, v);
    } else if (key == "m2_max_iter") {
        c.m2_max_iter = parse_int(key, v);
    } else if (key == "name") {
        c.name = v;
    } else {
        throw ConfigError("unknown key '" + key + "'");
    }
}

void apply_assignment(CaseConfig& cfg, const std::string& assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos) throw ConfigError("expected key=value, got '" + assignment + "'");
    apply_setting(cfg, assignment.substr(0, eq), assignment.substr(eq + 1));
}

void apply_config_text(CaseConfig& cfg, const std::string& text) {
    std::istringstream is(text);
    std::string line;
    int n = 0;
    while (std::getline(is, line)) {
        ++n;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        if (trim(line).empty()) continue;
        try {
            apply_assignment(cfg, line);
        } catch (const ConfigError& e) {
            throw ConfigError("line " + std::to_string(n) + ": " + e.what());
        }
    }
}

void apply_config_file(CaseConfig& cfg, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    try {
        apply_config_text(cfg, ss.str());
    } catch (const ConfigError& e) {
        throw ConfigError(path + ": " + e.what());
    }
}

void validate(const CaseConfig& c) {
    const auto& schemes = scheme_names();
    if (std::find(schemes.begin(), schemes.end(), c.scheme) == schemes.end())
        throw ConfigError("unknown scheme '" + c.scheme + "'");
    if (c.nx < 3) throw ConfigError("nx must be at least 3");
    if (c.nv < 4 || c.nv % 2 != 0) throw ConfigError("nv must be even and at least 4");
    if (!(c.eta > 0.0)) throw ConfigError("eta must be positive");
    if (!(c.epsilon > 0.0)) throw ConfigError("epsilon must be positive");
    if (!(c.sigma > 0.0)) throw ConfigError("sigma must be positive");
    if (!(c.t_end > 0.0)) throw ConfigError("t_end must be positive");
    if (!(c.cfl_safety > 0.0 && c.cfl_safety <= 1.0))
        throw ConfigError("cfl_safety must lie in (0, 1]");
    if (c.limiter != "van_leer") throw ConfigError("limiter must be van_leer");
    if (c.beta_eps < 0.0) throw ConfigError("beta_eps must be non-negative");
    if (!(c.rho_eps > 0.0)) throw ConfigError("rho_eps must be positive");
    if (!(c.m2_tol > 0.0)) throw ConfigError("m2_tol must be positive");
    if (c.m2_max_iter < 1) throw ConfigError("m2_max_iter must be positive");
    for (double t : c.output_times)
        if (!(t > 0.0)) throw ConfigError("output times must be positive");
    for (const auto* b : {&c.left, &c.right})
        if (b->value < 0.0) throw ConfigError("boundary data must be non-negative");
    const auto& s = c.initial;
    if (s.kind != InitialSpec::Kind::zero) {
        const double lo = s.kind == InitialSpec::Kind::sine ? s.rho0 - std::fabs(s.amp) : s.rho0;
        if (!(lo > 0.0)) throw ConfigError("initial density must stay positive");
        if (!(std::fabs(s.u0) < 1.0)) throw ConfigError("initial |u| must be below 1");
    }
}

std::vector<double> output_plan(const CaseConfig& c) {
    std::vector<double> plan;
    for (double t : c.output_times)
        if (t < c.t_end) plan.push_back(t);
    std::sort(plan.begin(), plan.end());
    plan.erase(std::unique(plan.begin(), plan.end()), plan.end());
    plan.push_back(c.t_end);
    return plan;
}

std::string format_boundary(const BoundarySpec& b) {
    switch (b.kind) {
        case BoundarySpec::Kind::zero:
            return "zero";
        case BoundarySpec::Kind::isotropic:
            return "isotropic(" + num(b.value) + ")";
        case BoundarySpec::Kind::half_indicator:
            return std::string("half_indicator(") + (b.sign > 0 ? "+1" : "-1") + "," + num(b.value) + ")";
    }
    return "zero";
}

std::string format_initial(const InitialSpec& s) {
    switch (s.kind) {
        case InitialSpec::Kind::zero:
            return "zero";
        case InitialSpec::Kind::sine:
            return "sine(" + num(s.rho0) + "," + num(s.amp) + "," + num(s.u0) + ")";
        case InitialSpec::Kind::constant:
            return "constant(" + num(s.rho0) + "," + num(s.u0) + ")";
    }
    return "zero";
}

std::string to_text(const CaseConfig& c) {
    std::ostringstream os;
    os << "name = " << c.name << "\n";
    os << "scheme = " << c.scheme << "\n";
    os << "nx = " << c.nx << "\n";
    os << "nv = " << c.nv << "\n";
    os << "eta = " << num(c.eta) << "\n";
    os << "epsilon = " << num(c.epsilon) << "\n";
    os << "sigma = " << num(c.sigma) << "\n";
    os << "bc = " << (c.periodic ? "periodic" : "dirichlet") << "\n";
    os << "left = " << format_boundary(c.left) << "\n";
    os << "right = " << format_boundary(c.right) << "\n";
    os << "initial = " << format_initial(c.initial) << "\n";
    os << "t_end = " << num(c.t_end) << "\n";
    os << "output_times = ";
    for (std::size_t k = 0; k < c.output_times.size(); ++k)
        os << (k ? "," : "") << num(c.output_times[k]);
    os << "\n";
    os << "cfl_safety = " << num(c.cfl_safety) << "\n";
    os << "limiter = " << c.limiter << "\n";
    os << "beta_eps = " << num(c.beta_eps) << "\n";
    os << "rho_eps = " << num(c.rho_eps) << "\n";
    os << "clamp_u = " << (c.clamp_u ? "true" : "false") << "\n";
    os << "m2_tol = " << num(c.m2_tol) << "\n";
    os << "m2_max_iter = " << c.m2_max_iter << "\n";
    return os.str();
}

}  // namespace ugks
