#include "isac/correlation.hpp"

#include <cmath>
#include <span>

#include "isac/error.hpp"
#include "isac/fft.hpp"

namespace isac {

namespace {

void require_same_length(const ComplexVector& x, const ComplexVector& y, const char* who) {
    if (x.size() != y.size()) throw DimensionError(std::string(who) + ": length mismatch");
    if (x.size() == 0) throw DimensionError(std::string(who) + ": empty input");
}

std::span<cd> as_span(ComplexVector& v) {
    return {v.data(), static_cast<std::size_t>(v.size())};
}

ComplexVector padded_spectrum(const ComplexVector& x) {
    ComplexVector out = ComplexVector::Zero(2 * x.size());
    out.head(x.size()) = x;
    fft_forward(as_span(out));
    return out;
}

}  // namespace

CorrelationProfile aperiodic_corr_direct(const ComplexVector& x, const ComplexVector& y) {
    require_same_length(x, y, "aperiodic_corr_direct");
    const int n = static_cast<int>(x.size());
    CorrelationProfile out{-(n - 1), std::vector<cd>(static_cast<std::size_t>(2 * n - 1))};
    for (int k = 0; k < n; ++k) {
        cd pos = 0.0;
        cd neg = 0.0;
        for (int i = 0; i + k < n; ++i) {
            pos += std::conj(x[i]) * y[i + k];
            neg += std::conj(x[i + k]) * y[i];
        }
        out.values[static_cast<std::size_t>(n - 1 + k)] = pos;
        out.values[static_cast<std::size_t>(n - 1 - k)] = neg;
    }
    return out;
}

CorrelationProfile periodic_corr(const ComplexVector& x, const ComplexVector& y) {
    require_same_length(x, y, "periodic_corr");
    const int n = static_cast<int>(x.size());
    CorrelationProfile out{0, std::vector<cd>(static_cast<std::size_t>(n))};
    for (int k = 0; k < n; ++k) {
        cd acc = 0.0;
        for (int i = 0; i < n; ++i) acc += std::conj(x[i]) * y[(i + k) % n];
        out.values[static_cast<std::size_t>(k)] = acc;
    }
    return out;
}

CorrelationProfile periodic_corr_spectral(const ComplexVector& x, const ComplexVector& y) {
    require_same_length(x, y, "periodic_corr_spectral");
    const auto n = static_cast<double>(x.size());
    ComplexVector xf = x;
    ComplexVector yf = y;
    fft_forward(as_span(xf));
    fft_forward(as_span(yf));
    ComplexVector prod = xf.conjugate().cwiseProduct(yf) / n;
    fft_backward(as_span(prod));
    return {0, std::vector<cd>(prod.data(), prod.data() + prod.size())};
}

CorrelationProfile aperiodic_corr_fft(const ComplexVector& x, const ComplexVector& y) {
    require_same_length(x, y, "aperiodic_corr_fft");
    const int n = static_cast<int>(x.size());
    ComplexVector prod =
        padded_spectrum(x).conjugate().cwiseProduct(padded_spectrum(y)) / (2.0 * n);
    fft_backward(as_span(prod));
    CorrelationProfile out{-(n - 1), std::vector<cd>(static_cast<std::size_t>(2 * n - 1))};
    for (int k = -(n - 1); k < n; ++k) {
        out.values[static_cast<std::size_t>(k + n - 1)] = prod[k >= 0 ? k : 2 * n + k];
    }
    return out;
}

CorrelationProfile frame_corr_from_spectra(const Frame& xs, const Frame& ys) {
    if (xs.size() != ys.size() || xs.empty()) {
        throw DimensionError("frame_corr: frames must have the same non-zero symbol count");
    }
    const Eigen::Index two_n = xs.front().size();
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (xs[i].size() != two_n || ys[i].size() != two_n) {
            throw DimensionError("frame_corr: ragged frame");
        }
    }
    const int n = static_cast<int>(two_n / 2);

    // same-symbol, next-symbol and previous-symbol cross spectra
    ComplexVector same = ComplexVector::Zero(two_n);
    ComplexVector next = ComplexVector::Zero(two_n);
    ComplexVector prev = ComplexVector::Zero(two_n);
    for (std::size_t i = 0; i < xs.size(); ++i) {
        same += xs[i].conjugate().cwiseProduct(ys[i]);
        if (i + 1 < xs.size()) {
            next += xs[i].conjugate().cwiseProduct(ys[i + 1]);
            prev += xs[i + 1].conjugate().cwiseProduct(ys[i]);
        }
    }
    // a shift by N samples multiplies bin f by (-1)^f
    for (Eigen::Index f = 1; f < two_n; f += 2) {
        next[f] = -next[f];
        prev[f] = -prev[f];
    }
    ComplexVector pos = (same + next) / static_cast<double>(two_n);
    ComplexVector neg = (same + prev) / static_cast<double>(two_n);
    fft_backward(as_span(pos));
    fft_backward(as_span(neg));

    CorrelationProfile out{-(n - 1), std::vector<cd>(static_cast<std::size_t>(2 * n - 1))};
    for (int k = 0; k < n; ++k) out.values[static_cast<std::size_t>(n - 1 + k)] = pos[k];
    for (int k = 1; k < n; ++k) out.values[static_cast<std::size_t>(n - 1 - k)] = neg[2 * n - k];
    return out;
}

CorrelationProfile frame_corr(const Frame& x, const Frame& y) {
    if (x.size() != y.size() || x.empty()) {
        throw DimensionError("frame_corr: frames must have the same non-zero symbol count");
    }
    const Eigen::Index n = x.front().size();
    if (n == 0) throw DimensionError("frame_corr: empty symbol");
    Frame xs;
    Frame ys;
    xs.reserve(x.size());
    ys.reserve(y.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (x[i].size() != n || y[i].size() != n) throw DimensionError("frame_corr: ragged frame");
        xs.push_back(padded_spectrum(x[i]));
        ys.push_back(padded_spectrum(y[i]));
    }
    return frame_corr_from_spectra(xs, ys);
}

}  // namespace isac
