#pragma once

#include <vector>

#include "isac/linalg.hpp"

namespace isac {

/// Complex correlation values over consecutive lags starting at min_lag.
struct CorrelationProfile {
    int min_lag = 0;
    std::vector<cd> values;

    int max_lag() const noexcept { return min_lag + static_cast<int>(values.size()) - 1; }
    const cd& at(int lag) const { return values.at(static_cast<std::size_t>(lag - min_lag)); }
};

enum class ProfileScale { Raw, Normalized };

/// Squared-magnitude profile over lags [-max_lag, max_lag].
struct PowerProfile {
    int max_lag = 0;
    std::vector<double> values;
    std::vector<double> std_error;  // empty for closed-form profiles
    ProfileScale scale = ProfileScale::Normalized;

    std::size_t size() const noexcept { return values.size(); }
    int lag(std::size_t i) const noexcept { return static_cast<int>(i) - max_lag; }
    double at(int lag) const { return values.at(static_cast<std::size_t>(lag + max_lag)); }
};

using Frame = std::vector<ComplexVector>;

/// sum_n conj(x[n]) y[n+k] for k in [-(N-1), N-1].
CorrelationProfile aperiodic_corr_direct(const ComplexVector& x, const ComplexVector& y);

/// sum_n conj(x[n]) y[(n+k) mod N] for k in [0, N-1].
CorrelationProfile periodic_corr(const ComplexVector& x, const ComplexVector& y);

/// Circular correlation through the N-point spectra:
/// sqrt(N) * F_N^H (conj(F_N x) .* F_N y).
CorrelationProfile periodic_corr_spectral(const ComplexVector& x, const ComplexVector& y);

/// Aperiodic correlation through 2N-point zero-padded spectra.
CorrelationProfile aperiodic_corr_fft(const ComplexVector& x, const ComplexVector& y);

/// Correlation of two M-symbol frames, restricted to |k| <= N-1. Lag k >= 0
/// collects the same-symbol terms at k and the adjacent-symbol terms at
/// -(N-k); negative lags collect the mirrored pairs.
CorrelationProfile frame_corr(const Frame& x, const Frame& y);

/// Frame correlation from precomputed 2N-point spectra of the zero-padded
/// symbols (unnormalized forward DFT). Used by the Monte Carlo inner loop.
CorrelationProfile frame_corr_from_spectra(const Frame& x_spectra, const Frame& y_spectra);

}  // namespace isac
