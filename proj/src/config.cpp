#include "isac/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <set>

#include "isac/error.hpp"

namespace isac {

std::string_view to_string(SweepAxis a) {
    switch (a) {
        case SweepAxis::AlphaDb: return "alpha_db";
        case SweepAxis::M: return "M";
        case SweepAxis::L: return "L";
        case SweepAxis::Eta: return "eta";
        case SweepAxis::Modulation: return "modulation";
    }
    return "?";
}

namespace {

std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split_list(const std::string& key, const std::string& text) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const auto comma = text.find(',', start);
        std::string item = trim(std::string_view(text).substr(start, comma - start));
        if (item.empty()) throw ConfigError(key, "empty list entry");
        out.push_back(std::move(item));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return out;
}

SweepAxis parse_axis(const std::string& key, const std::string& v) {
    if (v == "alpha_db") return SweepAxis::AlphaDb;
    if (v == "M") return SweepAxis::M;
    if (v == "L") return SweepAxis::L;
    if (v == "eta") return SweepAxis::Eta;
    if (v == "modulation") return SweepAxis::Modulation;
    throw ConfigError(key, "unknown sweep axis '" + v + "'");
}

template <typename Fn>
auto wrap(const std::string& key, Fn&& fn) {
    try {
        return fn();
    } catch (const ConfigError&) {
        throw;
    } catch (const Error& e) {
        throw ConfigError(key, e.what());
    }
}

int to_int(const std::string& key, const std::string& v) {
    const long long x = parse_integer(key, v);
    if (x < std::numeric_limits<int>::min() || x > std::numeric_limits<int>::max()) {
        throw ConfigError(key, "value out of range");
    }
    return static_cast<int>(x);
}

void check_sweep_value(const ExperimentConfig& c, const std::string& v) {
    const std::string key = "sweep_values";
    switch (*c.sweep_axis) {
        case SweepAxis::AlphaDb: {
            const double a = parse_real(key, v);
            if (std::isinf(a) && a > 0) throw ConfigError(key, "alpha_db cannot be +inf");
            break;
        }
        case SweepAxis::M:
            if (to_int(key, v) < 1) throw ConfigError(key, "M values must be at least 1");
            break;
        case SweepAxis::L: {
            const int l = to_int(key, v);
            if (l <= 0 || l >= c.n) throw ConfigError(key, "L values must satisfy 0 < L < N");
            break;
        }
        case SweepAxis::Eta: {
            const double e = parse_real(key, v);
            if (!(e > 0.0 && e <= 1.0)) throw ConfigError(key, "eta values must lie in (0, 1]");
            break;
        }
        case SweepAxis::Modulation:
            wrap(key, [&] { return parse_modulation(v); });
            break;
    }
}

}  // namespace

double parse_real(const std::string& key, const std::string& text) {
    if (text == "-inf") return -std::numeric_limits<double>::infinity();
    if (text == "inf" || text == "+inf") return std::numeric_limits<double>::infinity();
    double v = 0.0;
    const char* end = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(text.data(), end, v);
    if (ec != std::errc() || ptr != end || !std::isfinite(v)) {
        throw ConfigError(key, "expected a number, got '" + text + "'");
    }
    return v;
}

long long parse_integer(const std::string& key, const std::string& text) {
    long long v = 0;
    const char* end = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(text.data(), end, v);
    if (ec != std::errc() || ptr != end) {
        throw ConfigError(key, "expected an integer, got '" + text + "'");
    }
    return v;
}

ExperimentConfig parse_config(std::istream& in) {
    ExperimentConfig c;
    std::set<std::string> seen;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        const std::string body = trim(line);
        if (body.empty()) continue;
        const auto eq = body.find('=');
        if (eq == std::string::npos) {
            throw ConfigError(body, "line " + std::to_string(line_no) + " is not of the form key = value");
        }
        const std::string key = trim(std::string_view(body).substr(0, eq));
        const std::string value = trim(std::string_view(body).substr(eq + 1));
        if (key.empty()) throw ConfigError("", "line " + std::to_string(line_no) + " has no key");
        if (value.empty()) throw ConfigError(key, "missing value");
        if (!seen.insert(key).second) throw ConfigError(key, "duplicate key");

        if (key == "N") {
            c.n = to_int(key, value);
        } else if (key == "L") {
            c.l = to_int(key, value);
        } else if (key == "M") {
            c.m = to_int(key, value);
        } else if (key == "alpha_db") {
            c.alpha_db = parse_real(key, value);
        } else if (key == "modulation") {
            c.modulation = wrap(key, [&] { return parse_modulation(value); });
        } else if (key == "scheme1") {
            c.scheme1 = wrap(key, [&] { return parse_spreading_scheme(value); });
        } else if (key == "scheme2") {
            c.scheme2 = wrap(key, [&] { return parse_spreading_scheme(value); });
        } else if (key == "schemes") {
            for (const auto& s : split_list(key, value)) {
                c.schemes.push_back(wrap(key, [&] { return parse_spreading_scheme(s); }));
            }
        } else if (key == "eta") {
            c.eta = parse_real(key, value);
        } else if (key == "seed") {
            const long long s = parse_integer(key, value);
            if (s < 0) throw ConfigError(key, "seed must be non-negative");
            c.seed = static_cast<std::uint64_t>(s);
        } else if (key == "trials") {
            c.trials = to_int(key, value);
        } else if (key == "sweep_axis") {
            c.sweep_axis = parse_axis(key, value);
        } else if (key == "sweep_values") {
            c.sweep_values = split_list(key, value);
        } else if (key == "out_prefix") {
            c.out_prefix = value;
        } else if (key == "sigma_band") {
            c.sigma_band = parse_real(key, value);
        } else {
            throw ConfigError(key, "unknown key");
        }
    }

    if (c.n < 2) throw ConfigError("N", "N must be at least 2");
    if (c.l <= 0 || c.l >= c.n) throw ConfigError("L", "L must satisfy 0 < L < N");
    if (c.m < 1) throw ConfigError("M", "M must be at least 1");
    if (std::isinf(c.alpha_db) && c.alpha_db > 0) throw ConfigError("alpha_db", "cannot be +inf");
    if (!(c.eta > 0.0 && c.eta <= 1.0)) throw ConfigError("eta", "eta must lie in (0, 1]");
    if (c.trials < 2) throw ConfigError("trials", "need at least 2 trials");
    if (!(c.sigma_band > 0.0)) throw ConfigError("sigma_band", "must be positive");
    if (c.sweep_axis.has_value() != !c.sweep_values.empty()) {
        throw ConfigError(c.sweep_axis ? "sweep_values" : "sweep_axis",
                          "sweep_axis and sweep_values must be given together");
    }
    if (c.sweep_axis) {
        for (const auto& v : c.sweep_values) check_sweep_value(c, v);
    }
    return c;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config", "cannot read '" + path + "'");
    return parse_config(in);
}

}  // namespace isac
