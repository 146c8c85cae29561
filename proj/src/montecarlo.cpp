#include "isac/montecarlo.hpp"

#include <chrono>
#include <cmath>

#include "isac/correlation.hpp"
#include "isac/error.hpp"
#include "isac/parallel.hpp"

namespace isac {

double pairwise_sum(std::span<const double> values) {
    if (values.size() <= 8) {
        double s = 0.0;
        for (double v : values) s += v;
        return s;
    }
    const std::size_t half = values.size() / 2;
    return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

namespace {

struct Sample {
    double mean;
    double std_error;
};

Sample summarize(std::span<const double> values) {
    const auto count = static_cast<double>(values.size());
    const double mean = pairwise_sum(values) / count;
    std::vector<double> dev(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) dev[i] = (values[i] - mean) * (values[i] - mean);
    const double var = pairwise_sum(dev) / (count - 1.0);
    return {mean, std::sqrt(var / count)};
}

// lag-major table: values[lag * trials + t] = |c_t[lag]|^2 / (M cols)^2
struct TrialTable {
    int max_lag = 0;
    int trials = 0;
    std::vector<double> values;

    std::span<const double> lag(std::size_t i) const {
        return {values.data() + i * static_cast<std::size_t>(trials), static_cast<std::size_t>(trials)};
    }
};

TrialTable run_trials(const Scenario& scn, int trials, int workers) {
    scn.validate();
    if (trials < 2) throw ContractError("Monte Carlo estimate needs at least 2 trials");

    const int n = scn.alloc.n();
    const int m = scn.M;
    const double alpha = scn.alpha();
    const double mc = static_cast<double>(m) * scn.info_cols();
    const double norm = mc * mc;
    const ComplexVector zero1 = ComplexVector::Zero(scn.spread1.cols());
    const ComplexVector zero2 = ComplexVector::Zero(scn.spread2.cols());

    TrialTable table;
    table.max_lag = n - 1;
    table.trials = trials;
    const std::size_t lags = static_cast<std::size_t>(2 * n - 1);
    table.values.assign(lags * static_cast<std::size_t>(trials), 0.0);

    parallel_for(static_cast<std::size_t>(trials), workers, [&](std::size_t t) {
        RngStream rng(scn.seed, t);
        Frame x(static_cast<std::size_t>(m));
        Frame y(static_cast<std::size_t>(m));
        for (int i = 0; i < m; ++i) {
            const ComplexVector s1 = draw_symbols(rng, scn.constellation, scn.spread1.cols());
            const ComplexVector s2 = draw_symbols(rng, scn.constellation, scn.spread2.cols());
            const ComplexVector x1 = ofdm_modulate(scn.alloc, scn.spread1, s1, scn.spread2, zero2);
            const ComplexVector x2 = ofdm_modulate(scn.alloc, scn.spread1, zero1, scn.spread2, s2);
            x[static_cast<std::size_t>(i)] = x1;
            y[static_cast<std::size_t>(i)] = x1 + alpha * x2;
        }
        const CorrelationProfile c = frame_corr(x, y);
        for (std::size_t j = 0; j < lags; ++j) {
            table.values[j * static_cast<std::size_t>(trials) + t] = std::norm(c.values[j]) / norm;
        }
    });
    return table;
}

}  // namespace

McEstimate estimate_acf(const Scenario& scn, int trials, int workers) {
    const auto start = std::chrono::steady_clock::now();
    const TrialTable table = run_trials(scn, trials, workers);

    McEstimate est;
    est.trials = trials;
    est.profile.max_lag = table.max_lag;
    est.profile.scale = ProfileScale::Normalized;
    const std::size_t lags = static_cast<std::size_t>(2 * table.max_lag + 1);
    est.profile.values.resize(lags);
    est.profile.std_error.resize(lags);
    for (std::size_t j = 0; j < lags; ++j) {
        const Sample s = summarize(table.lag(j));
        est.profile.values[j] = s.mean;
        est.profile.std_error[j] = s.std_error;
    }
    est.elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return est;
}

EislEstimate estimate_eisl(const Scenario& scn, int trials, int workers) {
    const TrialTable table = run_trials(scn, trials, workers);
    const std::size_t lags = static_cast<std::size_t>(2 * table.max_lag + 1);
    const auto zero = static_cast<std::size_t>(table.max_lag);
    std::vector<double> per_trial(static_cast<std::size_t>(trials));
    std::vector<double> row(lags - 1);
    for (std::size_t t = 0; t < per_trial.size(); ++t) {
        std::size_t r = 0;
        for (std::size_t j = 0; j < lags; ++j) {
            if (j != zero) row[r++] = table.values[j * per_trial.size() + t];
        }
        per_trial[t] = pairwise_sum(row);
    }
    const Sample s = summarize(per_trial);
    return {s.mean, s.std_error, trials};
}

std::vector<LagCheck> ValidationReport::failures() const {
    std::vector<LagCheck> out;
    for (const LagCheck& c : lags) {
        if (!(std::abs(c.z) <= sigma_band)) out.push_back(c);
    }
    return out;
}

namespace {

// A standard error at rounding level means the quantity is constant across
// trials; such lags are compared exactly instead of by z-score.
double z_score(double estimate, double reference, double std_error) {
    if (std_error > 1e-12 * std::abs(estimate)) return (estimate - reference) / std_error;
    const double tol = 1e-9 * std::max(std::abs(reference), std::abs(estimate));
    return std::abs(estimate - reference) <= tol ? 0.0 : std::numeric_limits<double>::infinity();
}

}  // namespace

ValidationReport validate(const Scenario& scn, int trials, double sigma_band, int workers,
                          const std::optional<AnalyticReference>& reference) {
    if (trials < 100) throw ContractError("validate: needs at least 100 trials");

    AnalyticReference ref;
    if (reference) {
        ref = *reference;
    } else {
        const LeakagePair ops = build_operators(scn);
        ref.profile = avg_sq_acf(scn, ops, workers);
        ref.eisl = eisl(scn, ops).eisl_normalized;
    }

    const McEstimate acf = estimate_acf(scn, trials, workers);
    const EislEstimate e = estimate_eisl(scn, trials, workers);
    if (ref.profile.size() != acf.profile.size()) {
        throw DimensionError("validate: reference profile has the wrong lag range");
    }

    ValidationReport rep;
    rep.sigma_band = sigma_band;
    std::size_t within2 = 0;
    for (std::size_t i = 0; i < acf.profile.size(); ++i) {
        LagCheck c;
        c.lag = acf.profile.lag(i);
        c.analytic = ref.profile.values[i];
        c.mc = acf.profile.values[i];
        c.std_error = acf.profile.std_error[i];
        c.z = z_score(c.mc, c.analytic, c.std_error);
        if (std::abs(c.z) <= 2.0) ++within2;
        if (!(std::abs(c.z) <= rep.max_abs_z)) {
            rep.max_abs_z = std::abs(c.z);
            rep.worst_lag = c.lag;
        }
        rep.lags.push_back(c);
    }
    rep.fraction_within_2sigma = static_cast<double>(within2) / static_cast<double>(rep.lags.size());
    rep.eisl_analytic = ref.eisl;
    rep.eisl_mc = e.eisl_linear;
    rep.eisl_std_error = e.std_error;
    rep.eisl_z = z_score(e.eisl_linear, ref.eisl, e.std_error);
    rep.passed = rep.max_abs_z <= sigma_band && std::abs(rep.eisl_z) <= sigma_band;
    return rep;
}

}  // namespace isac
