#include "qnls/config.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

namespace qnls {

ConfigError::ConfigError(int line, int column, const std::string& what)
    : std::runtime_error("config error at line " + std::to_string(line) +
                         ", column " + std::to_string(column) + ": " + what),
      line_(line),
      column_(column) {}

namespace {

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

double parse_number(const std::string& token, int line, int col) {
    try {
        std::size_t used = 0;
        const double v = std::stod(token, &used);
        if (used != token.size())
            throw ConfigError(line, col, "trailing characters in number '" + token + "'");
        return v;
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception&) {
        throw ConfigError(line, col, "expected a number, got '" + token + "'");
    }
}

// h.terms = [b, alpha], [b, alpha], ...
std::vector<HTerm> parse_terms(const std::string& value, int line, int col) {
    std::vector<HTerm> terms;
    std::size_t i = 0;
    auto skip_ws = [&] {
        while (i < value.size() && std::isspace(static_cast<unsigned char>(value[i]))) ++i;
    };
    skip_ws();
    if (i == value.size()) return terms; // empty list: h == 0
    while (true) {
        skip_ws();
        if (i >= value.size() || value[i] != '[')
            throw ConfigError(line, col + static_cast<int>(i), "expected '[' in h.terms");
        const std::size_t close = value.find(']', i);
        if (close == std::string::npos)
            throw ConfigError(line, col + static_cast<int>(i), "unterminated '[' in h.terms");
        const std::string inner = value.substr(i + 1, close - i - 1);
        const std::size_t comma = inner.find(',');
        if (comma == std::string::npos)
            throw ConfigError(line, col + static_cast<int>(i),
                              "h.terms entries need two numbers [b, alpha]");
        HTerm t{};
        t.b = parse_number(trim(inner.substr(0, comma)), line, col + static_cast<int>(i));
        t.alpha = parse_number(trim(inner.substr(comma + 1)), line, col + static_cast<int>(i));
        terms.push_back(t);
        i = close + 1;
        skip_ws();
        if (i == value.size()) break;
        if (value[i] != ',')
            throw ConfigError(line, col + static_cast<int>(i), "expected ',' between h.terms entries");
        ++i;
    }
    return terms;
}

} // namespace

RunConfig parse_config(std::istream& is) {
    std::ostringstream buf;
    buf << is.rdbuf();
    return parse_config_text(buf.str());
}

RunConfig parse_config_text(const std::string& text) {
    RunConfig cfg;
    std::vector<HTerm> terms;
    bool have_terms = false;
    bool have_dt_min = false;

    std::istringstream is(text);
    std::string raw;
    int lineno = 0;
    std::string section;

    while (std::getline(is, raw)) {
        ++lineno;
        const std::size_t hash = raw.find('#');
        std::string body = hash == std::string::npos ? raw : raw.substr(0, hash);
        const std::string stripped = trim(body);
        if (stripped.empty()) continue;

        if (stripped.front() == '[') {
            if (stripped.back() != ']')
                throw ConfigError(lineno, 1, "unterminated section header");
            section = trim(stripped.substr(1, stripped.size() - 2));
            if (section.empty())
                throw ConfigError(lineno, 1, "empty section name");
            continue;
        }

        const std::size_t eq = body.find('=');
        if (eq == std::string::npos)
            throw ConfigError(lineno, 1, "expected key = value");
        std::string key = trim(body.substr(0, eq));
        const std::string value = trim(body.substr(eq + 1));
        const int vcol = static_cast<int>(eq) + 2;
        if (key.empty()) throw ConfigError(lineno, 1, "missing key");
        if (!section.empty()) key = section + "." + key;

        auto num = [&] { return parse_number(value, lineno, vcol); };
        auto integer = [&] {
            const double v = num();
            if (v != static_cast<long long>(v))
                throw ConfigError(lineno, vcol, key + " must be an integer");
            return static_cast<int>(v);
        };

        auto& p = cfg.problem;
        auto& s = cfg.stepper;
        if (key == "dim") p.dim = integer();
        else if (key == "radius") p.radius = num();
        else if (key == "grid_points") p.grid_points = integer();
        else if (key == "dt0") p.dt0 = num();
        else if (key == "t_end") p.t_end = num();
        else if (key == "h.terms") { terms = parse_terms(value, lineno, vcol); have_terms = true; }
        else if (key == "V.c") p.V.c = num();
        else if (key == "V.m") p.V.m = num();
        else if (key == "V.sign") {
            const int v = integer();
            if (v != 1 && v != -1)
                throw ConfigError(lineno, vcol, "V.sign must be +1 or -1");
            p.V.sign = v;
        }
        else if (key == "V.bounded") p.V.v_bounded = num();
        else if (key == "V.epsilon") p.V.epsilon = num();
        else if (key == "u0.amplitude") p.u0.amplitude = num();
        else if (key == "u0.sigma") p.u0.sigma = num();
        else if (key == "u0.chirp") p.u0.chirp = num();
        else if (key == "stepper.dt_min") { s.dt_min = num(); have_dt_min = true; }
        else if (key == "stepper.cn_tol") s.cn_tol = num();
        else if (key == "stepper.cn_max_iter") s.cn_max_iter = integer();
        else if (key == "stepper.blowup_factor") s.blowup_factor = num();
        else if (key == "stepper.record_every") s.record_every = integer();
        else if (key == "stepper.step_change_cap") s.step_change_cap = num();
        else if (key == "stepper.morawetz_lambda") s.morawetz_lambda = num();
        else if (key == "stepper.r_bar") s.r_bar = num();
        else throw ConfigError(lineno, 1, "unknown key '" + key + "'");
    }

    if (have_terms) {
        try {
            cfg.problem.h = NonlinearitySpec(terms);
        } catch (const std::invalid_argument& e) {
            throw ConfigError(lineno, 1, e.what());
        }
    }
    cfg.stepper.dt0 = cfg.problem.dt0;
    if (!have_dt_min && !(cfg.stepper.dt_min < cfg.stepper.dt0))
        cfg.stepper.dt_min = 1e-3 * cfg.stepper.dt0;

    try {
        cfg.problem.validate();
        cfg.stepper.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(lineno, 1, e.what());
    }
    return cfg;
}

RunConfig parse_config_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open config file: " + path);
    return parse_config(f);
}

std::string to_config_text(const RunConfig& cfg) {
    std::ostringstream os;
    os.precision(17);
    const auto& p = cfg.problem;
    os << "dim = " << p.dim << "\n";
    os << "radius = " << p.radius << "\n";
    os << "grid_points = " << p.grid_points << "\n";
    os << "dt0 = " << p.dt0 << "\n";
    os << "t_end = " << p.t_end << "\n";
    os << "h.terms =";
    bool first = true;
    for (const auto& t : p.h.terms()) {
        os << (first ? " " : ", ") << "[" << t.b << ", " << t.alpha << "]";
        first = false;
    }
    os << "\n";
    os << "[V]\n";
    os << "c = " << p.V.c << "\n";
    os << "m = " << p.V.m << "\n";
    os << "sign = " << p.V.sign << "\n";
    os << "bounded = " << p.V.v_bounded << "\n";
    os << "epsilon = " << p.V.epsilon << "\n";
    os << "[u0]\n";
    os << "amplitude = " << p.u0.amplitude << "\n";
    os << "sigma = " << p.u0.sigma << "\n";
    os << "chirp = " << p.u0.chirp << "\n";
    const auto& s = cfg.stepper;
    os << "[stepper]\n";
    os << "dt_min = " << s.dt_min << "\n";
    os << "cn_tol = " << s.cn_tol << "\n";
    os << "cn_max_iter = " << s.cn_max_iter << "\n";
    os << "blowup_factor = " << s.blowup_factor << "\n";
    os << "record_every = " << s.record_every << "\n";
    os << "step_change_cap = " << s.step_change_cap << "\n";
    os << "morawetz_lambda = " << s.morawetz_lambda << "\n";
    os << "r_bar = " << s.r_bar << "\n";
    return os.str();
}

} // namespace qnls
