#include "qhd/run_config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace qhd {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

[[noreturn]] void fail(const std::string& origin, int line, const std::string& msg) {
    throw std::runtime_error(origin + ":" + std::to_string(line) + ": " + msg);
}

double parse_double(const std::string& origin, int line, const std::string& key,
                    const std::string& value) {
    try {
        size_t pos = 0;
        const double v = std::stod(value, &pos);
        if (pos != value.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        fail(origin, line, "key '" + key + "': cannot parse '" + value + "' as a number");
    }
}

long parse_int(const std::string& origin, int line, const std::string& key,
               const std::string& value) {
    try {
        size_t pos = 0;
        const long v = std::stol(value, &pos);
        if (pos != value.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        fail(origin, line, "key '" + key + "': cannot parse '" + value + "' as an integer");
    }
}

bool parse_bool(const std::string& origin, int line, const std::string& key,
                const std::string& value) {
    if (value == "on" || value == "true" || value == "1") return true;
    if (value == "off" || value == "false" || value == "0") return false;
    fail(origin, line, "key '" + key + "': expected on/off, got '" + value + "'");
}

}  // namespace

RunConfig parse_run_config_text(const std::string& text, const std::string& origin) {
    RunConfig cfg;
    std::istringstream in(text);
    std::string raw;
    std::string section;  // empty = top level
    int lineno = 0;

    while (std::getline(in, raw)) {
        ++lineno;
        std::string line = trim(raw);
        if (const auto hash = line.find_first_of("#;"); hash != std::string::npos) {
            line = trim(line.substr(0, hash));
        }
        if (line.empty()) continue;

        if (line.front() == '[') {
            if (line.back() != ']') fail(origin, lineno, "unterminated section header");
            section = trim(line.substr(1, line.size() - 2));
            if (section != "equilibrium" && section != "grid" && section != "time" &&
                section != "diagnostics" && section != "solver") {
                fail(origin, lineno, "unknown section '[" + section + "]'");
            }
            continue;
        }

        const auto eq_pos = line.find('=');
        if (eq_pos == std::string::npos) fail(origin, lineno, "expected key = value");
        const std::string key = trim(line.substr(0, eq_pos));
        const std::string value = trim(line.substr(eq_pos + 1));
        if (key.empty()) fail(origin, lineno, "empty key");
        if (value.empty()) fail(origin, lineno, "key '" + key + "' has no value");

        auto num = [&] { return parse_double(origin, lineno, key, value); };
        auto integer = [&] { return parse_int(origin, lineno, key, value); };
        auto flag = [&] { return parse_bool(origin, lineno, key, value); };

        if (section.empty()) {
            if (key == "seed") {
                cfg.seed = static_cast<std::uint64_t>(integer());
            } else {
                fail(origin, lineno, "unknown top-level key '" + key + "'");
            }
        } else if (section == "equilibrium") {
            if (key == "gamma") cfg.gamma = num();
            else if (key == "rho_star") cfg.rho_star = num();
            else if (key == "m_star") cfg.m_star = num();
            else if (key == "mu") cfg.mu = num();
            else if (key == "k") cfg.k = num();
            else fail(origin, lineno, "unknown key '" + key + "' in [equilibrium]");
        } else if (section == "grid") {
            if (key == "L") cfg.L = num();
            else if (key == "N") cfg.N = static_cast<int>(integer());
            else fail(origin, lineno, "unknown key '" + key + "' in [grid]");
        } else if (section == "time") {
            if (key == "dt") cfg.dt = num();
            else if (key == "t_end") cfg.t_end = num();
            else if (key == "output_stride") cfg.output_stride = static_cast<int>(integer());
            else fail(origin, lineno, "unknown key '" + key + "' in [time]");
        } else if (section == "diagnostics") {
            if (key == "s") cfg.s = static_cast<int>(integer());
            else if (key == "fit_window_lo") cfg.fit_window_lo = num();
            else if (key == "fit_window_hi") cfg.fit_window_hi = num();
            else fail(origin, lineno, "unknown key '" + key + "' in [diagnostics]");
        } else if (section == "solver") {
            if (key == "dealias") cfg.dealias = flag();
            else if (key == "rho_floor") cfg.rho_floor = num();
            else if (key == "allow_supersonic") cfg.allow_supersonic = flag();
            else fail(origin, lineno, "unknown key '" + key + "' in [solver]");
        }
    }
    return cfg;
}

RunConfig parse_run_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error(path + ": cannot open config file");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_run_config_text(buf.str(), path);
}

}  // namespace qhd
