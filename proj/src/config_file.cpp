#include "cqed/config_file.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

namespace cqed {

namespace {

std::string trim(const std::string& s) {
    size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

}  // namespace

ConfigMap parse_config_text(const std::string& text, const std::set<std::string>& known_keys,
                            const std::string& filename) {
    ConfigMap out;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const std::string stripped = trim(line);
        if (stripped.empty()) continue;
        const size_t eq = stripped.find('=');
        if (eq == std::string::npos) {
            throw ConfigError(filename + ":" + std::to_string(lineno) +
                              ": expected key=value, got '" + stripped + "'");
        }
        const std::string key = trim(stripped.substr(0, eq));
        const std::string value = trim(stripped.substr(eq + 1));
        if (key.empty()) {
            throw ConfigError(filename + ":" + std::to_string(lineno) + ": empty key");
        }
        if (!known_keys.count(key)) {
            throw ConfigError(filename + ":" + std::to_string(lineno) +
                              ": unknown key '" + key + "'");
        }
        if (out.count(key)) {
            throw ConfigError(filename + ":" + std::to_string(lineno) +
                              ": duplicate key '" + key + "'");
        }
        out[key] = value;
    }
    return out;
}

ConfigMap parse_config(const std::string& path, const std::set<std::string>& known_keys) {
    std::ifstream f(path);
    if (!f) throw ConfigError("cannot open config file '" + path + "'");
    std::ostringstream buf;
    buf << f.rdbuf();
    return parse_config_text(buf.str(), known_keys, path);
}

double parse_real_or_pi(const std::string& text) {
    const std::string s = trim(text);
    if (s.empty()) throw ConfigError("empty numeric value");

    const size_t pi_pos = s.find("pi");
    if (pi_pos == std::string::npos) {
        size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(s, &used);
        } catch (const std::exception&) {
            throw ConfigError("cannot parse number '" + s + "'");
        }
        if (used != s.size()) throw ConfigError("cannot parse number '" + s + "'");
        return v;
    }

    // [coefficient] "pi" ["/" divisor]
    std::string pre = trim(s.substr(0, pi_pos));
    std::string post = trim(s.substr(pi_pos + 2));
    double coeff = 1.0;
    if (pre == "-") {
        coeff = -1.0;
    } else if (pre == "+" || pre.empty()) {
        coeff = 1.0;
    } else {
        size_t used = 0;
        try {
            coeff = std::stod(pre, &used);
        } catch (const std::exception&) {
            throw ConfigError("cannot parse pi expression '" + s + "'");
        }
        if (used != pre.size()) throw ConfigError("cannot parse pi expression '" + s + "'");
    }
    double div = 1.0;
    if (!post.empty()) {
        if (post[0] != '/') throw ConfigError("cannot parse pi expression '" + s + "'");
        const std::string den = trim(post.substr(1));
        size_t used = 0;
        try {
            div = std::stod(den, &used);
        } catch (const std::exception&) {
            throw ConfigError("cannot parse pi expression '" + s + "'");
        }
        if (used != den.size() || div == 0.0) {
            throw ConfigError("cannot parse pi expression '" + s + "'");
        }
    }
    return coeff * kPi / div;
}

}  // namespace cqed
