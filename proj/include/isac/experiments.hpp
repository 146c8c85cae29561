#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "isac/analytic.hpp"
#include "isac/config.hpp"
#include "isac/montecarlo.hpp"

namespace isac {

/// Command-line overrides applied on top of a config file.
struct RunOptions {
    std::optional<int> trials;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out;
    int workers = 1;
};

ExperimentConfig apply_overrides(ExperimentConfig c, const RunOptions& opt);

struct SweepPoint {
    std::string scheme;      // label for the CSV scheme column
    std::string axis;        // sweep axis name, empty without a sweep
    std::string axis_value;  // value as written in the config
    Scenario scenario;
};

/// Expands schemes x sweep values, scheme-major. ConfigError on invalid points.
std::vector<SweepPoint> expand_points(const ExperimentConfig& c);

/// Shortest round-trip decimal form; infinities as `inf` / `-inf`.
std::string format_real(double v);

void write_acf_csv(std::ostream& out, const PowerProfile& analytic, const McEstimate& mc);

struct SweepRow {
    SweepPoint point;
    EislReport analytic;
    EislEstimate mc;
};

std::vector<SweepRow> compute_sweep(const ExperimentConfig& c, int workers);
void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows);

/// Writes one acf CSV per sweep point; returns the file paths in point order.
std::vector<std::string> run_acf(const ExperimentConfig& c, int workers);

/// Writes <out_prefix>.csv; returns its path.
std::string run_sweep(const ExperimentConfig& c, int workers);

/// One verdict line per point on `report`; true iff every point passes.
bool run_validate(const ExperimentConfig& c, int workers, std::ostream& report);

}  // namespace isac
