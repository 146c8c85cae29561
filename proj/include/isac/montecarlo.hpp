#pragma once

#include <optional>
#include <span>
#include <vector>

#include "isac/analytic.hpp"

namespace isac {

struct McEstimate {
    PowerProfile profile;  // normalized mean with per-lag std_error
    int trials = 0;
    double elapsed = 0.0;  // seconds
};

struct EislEstimate {
    double eisl_linear = 0.0;
    double std_error = 0.0;
    int trials = 0;
};

/// Trial t draws from RngStream(scn.seed, t): for each of the M symbols, user-1
/// symbols then user-2 symbols. Worker w runs the trials t with t % workers == w,
/// and reductions run over the per-trial values in trial order, so the result
/// does not depend on the worker count.
McEstimate estimate_acf(const Scenario& scn, int trials, int workers = 1);

EislEstimate estimate_eisl(const Scenario& scn, int trials, int workers = 1);

/// Pairwise (cascade) summation.
double pairwise_sum(std::span<const double> values);

struct LagCheck {
    int lag = 0;
    double analytic = 0.0;
    double mc = 0.0;
    double std_error = 0.0;
    double z = 0.0;  // 0 or +inf when the lag is constant across trials (exact comparison)
};

struct AnalyticReference {
    PowerProfile profile;
    double eisl = 0.0;
};

struct ValidationReport {
    bool passed = false;
    double sigma_band = 0.0;
    std::vector<LagCheck> lags;
    double fraction_within_2sigma = 0.0;
    double max_abs_z = 0.0;
    int worst_lag = 0;
    double eisl_analytic = 0.0;
    double eisl_mc = 0.0;
    double eisl_std_error = 0.0;
    double eisl_z = 0.0;

    std::vector<LagCheck> failures() const;
};

/// Compares Monte Carlo estimates against the closed forms. Passes when every
/// lag and the EISL lie within sigma_band standard errors. `reference`
/// replaces the closed-form side.
ValidationReport validate(const Scenario& scn, int trials, double sigma_band, int workers = 1,
                          const std::optional<AnalyticReference>& reference = std::nullopt);

}  // namespace isac
