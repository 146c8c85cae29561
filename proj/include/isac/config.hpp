#pragma once

#include <cstdint>
#include <istream>
#include <optional>
#include <string>
#include <vector>

#include "isac/waveform.hpp"

namespace isac {

enum class SweepAxis { AlphaDb, M, L, Eta, Modulation };

std::string_view to_string(SweepAxis a);

/// Flat `key = value` experiment description. Lines starting with `#` and
/// trailing `# ...` are comments. Every diagnostic is a ConfigError naming
/// the key it concerns.
struct ExperimentConfig {
    int n = 128;
    int l = 32;
    int m = 1;
    double alpha_db = 0.0;  // amplitude dB, may be -inf
    Modulation modulation = Modulation::QPSK;
    SpreadingScheme scheme1 = SpreadingScheme::Identity;
    SpreadingScheme scheme2 = SpreadingScheme::Identity;
    std::vector<SpreadingScheme> schemes;  // if set, each entry spreads both users
    double eta = 0.9;
    std::uint64_t seed = 1;
    int trials = 10000;
    std::optional<SweepAxis> sweep_axis;
    std::vector<std::string> sweep_values;
    std::string out_prefix = "out";
    double sigma_band = 4.0;
};

ExperimentConfig parse_config(std::istream& in);
ExperimentConfig load_config(const std::string& path);

/// Number or -inf / +inf; throws ConfigError(key) otherwise.
double parse_real(const std::string& key, const std::string& text);
long long parse_integer(const std::string& key, const std::string& text);

}  // namespace isac
