#include "isac/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <span>

#include "isac/error.hpp"
#include "isac/fft.hpp"
#include "isac/parallel.hpp"
#include "isac/spreading.hpp"

namespace isac {

double Scenario::alpha() const {
    if (std::isinf(alpha_db) && alpha_db < 0) return 0.0;
    return std::pow(10.0, alpha_db / 20.0);
}

void Scenario::validate() const {
    if (M < 1) throw ContractError("scenario: M must be at least 1");
    if (std::isnan(alpha_db) || (std::isinf(alpha_db) && alpha_db > 0)) {
        throw ContractError("scenario: alpha_db must be finite or -inf");
    }
    if (spread1.band() != alloc.band(1) || spread2.band() != alloc.band(2)) {
        throw DimensionError("scenario: spreading bands do not match the allocation");
    }
    if (spread1.cols() < 1 || spread2.cols() < 1) {
        throw DimensionError("scenario: spreading matrices need at least one column");
    }
}

SpreadingMatrix make_spreading(const SubcarrierAllocation& alloc, int user,
                               SpreadingScheme scheme, double eta) {
    switch (scheme) {
        case SpreadingScheme::Identity: return identity_spreading(alloc.band(user));
        case SpreadingScheme::Guardband: return guardband_selection(alloc.band(user), eta);
        case SpreadingScheme::Pdpss: return pdpss_spreading(alloc, user, eta);
    }
    throw ContractError("unsupported spreading scheme");
}

Scenario make_scenario(int n, int l, int m, double alpha_db, Modulation mod,
                       SpreadingScheme scheme, double eta, std::uint64_t seed) {
    Scenario scn;
    scn.alloc = SubcarrierAllocation(n, l);
    scn.M = m;
    scn.alpha_db = alpha_db;
    scn.constellation = make_constellation(mod);
    scn.spread1 = make_spreading(scn.alloc, 1, scheme, eta);
    scn.spread2 = make_spreading(scn.alloc, 2, scheme, eta);
    scn.seed = seed;
    scn.validate();
    return scn;
}

LeakagePair build_operators(const Scenario& scn) {
    scn.validate();
    return {build_leakage_operator(scn.alloc, 1, scn.spread1),
            build_leakage_operator(scn.alloc, 2, scn.spread2)};
}

double to_db(double x) {
    if (!(x > 0.0)) return -std::numeric_limits<double>::infinity();
    return 10.0 * std::log10(x);
}

double main_lobe_energy(double mu4, int m, int l) {
    if (m < 1 || l < 1) throw ContractError("main_lobe_energy: M and L must be positive");
    const double ml = static_cast<double>(m) * l;
    return (mu4 - 1.0 + ml) * ml;
}

namespace {

void check_operators(const Scenario& scn, const LeakagePair& ops) {
    const Eigen::Index rows = 2 * scn.alloc.n();
    if (ops.w1.matrix.rows() != rows || ops.w2.matrix.rows() != rows ||
        ops.w1.matrix.cols() != scn.spread1.cols() || ops.w2.matrix.cols() != scn.spread2.cols()) {
        throw DimensionError("leakage operators do not match the scenario");
    }
}

double normalization(const Scenario& scn) {
    const double mc = static_cast<double>(scn.M) * scn.info_cols();
    return mc * mc;
}

// Unnormalized backward DFT of length 2N: out[k] = sum_n a[n] e^{+j 2 pi k n / (2N)}.
ComplexVector backward(ComplexVector a) {
    fft_backward(std::span(a.data(), static_cast<std::size_t>(a.size())));
    return a;
}

// Folds the diagonal sums h[d] = sum_{n-m=d} a(n,m) modulo 2N.
ComplexVector folded_diagonals(const ComplexMatrix& a) {
    const Eigen::Index size = a.rows();
    ComplexVector h = ComplexVector::Zero(size);
    for (Eigen::Index n = 0; n < size; ++n) {
        for (Eigen::Index m = 0; m < size; ++m) {
            h[(n - m + size) % size] += a(n, m);
        }
    }
    return h;
}

// Lag -> DFT bin of the lag phase e^{j pi k d / N}; the alternating variant is
// the same transform shifted by N.
std::size_t bin(int k, int n) { return static_cast<std::size_t>(((k % (2 * n)) + 2 * n) % (2 * n)); }

double real_checked(cd v, double scale) {
    if (std::abs(v.imag()) > 1e-9 * std::max(scale, 1.0)) {
        throw ConsistencyError("expected squared correlation has a non-negligible imaginary part");
    }
    return v.real();
}

}  // namespace

PowerProfile AcfTerms::combine(double ib_sign) const {
    PowerProfile out;
    out.max_lag = max_lag;
    out.scale = ProfileScale::Normalized;
    out.values.resize(kurtosis.size());
    for (std::size_t i = 0; i < kurtosis.size(); ++i) {
        const double v = kurtosis[i] + energy[i] + same_symbol[i] + adjacent[i] +
                         ib_sign * (ib_same[i] + ib_adjacent[i]);
        out.values[i] = v / normalization;
    }
    return out;
}

AcfTerms avg_sq_acf_terms(const Scenario& scn, const LeakagePair& ops, int workers) {
    check_operators(scn, ops);
    const int n = scn.alloc.n();
    const double m = scn.M;
    const double mu4 = scn.constellation.mu4;
    const double a2 = scn.alpha() * scn.alpha();
    const ComplexMatrix& w1 = ops.w1.matrix;
    const ComplexMatrix& w2 = ops.w2.matrix;

    const ComplexMatrix g1 = w1 * w1.adjoint();
    const ComplexMatrix g2 = w2 * w2.adjoint();

    // per-column energy patterns |W1[n,l]|^2, transformed one column per task
    const auto cols = static_cast<std::size_t>(w1.cols());
    std::vector<ComplexVector> col_spectra(cols);
    parallel_for(cols, workers, [&](std::size_t l) {
        col_spectra[l] = backward(w1.col(static_cast<Eigen::Index>(l)).cwiseAbs2().cast<cd>());
    });
    const ComplexVector r_spec = backward(g1.diagonal());
    const ComplexVector s_spec = backward(folded_diagonals(g1.cwiseAbs2().cast<cd>()));
    const ComplexVector h_spec = backward(folded_diagonals(g1.conjugate().cwiseProduct(g2)));

    AcfTerms t;
    t.max_lag = n - 1;
    t.normalization = normalization(scn);
    const std::size_t lags = static_cast<std::size_t>(2 * n - 1);
    for (auto* v : {&t.kurtosis, &t.energy, &t.same_symbol, &t.adjacent, &t.ib_same, &t.ib_adjacent}) {
        v->assign(lags, 0.0);
    }
    const double scale = static_cast<double>(w1.cols()) * w1.cols();
    for (int k = -(n - 1); k < n; ++k) {
        const std::size_t i = static_cast<std::size_t>(k + n - 1);
        const std::size_t b = bin(k, n);
        const std::size_t b_alt = bin(k + n, n);
        double kurt = 0.0;
        for (std::size_t l = 0; l < cols; ++l) kurt += std::norm(col_spectra[l][b]);
        t.kurtosis[i] = m * (mu4 - 2.0) * kurt;
        t.energy[i] = m * m * std::norm(r_spec[b]);
        t.same_symbol[i] = m * real_checked(s_spec[b], scale);
        t.adjacent[i] = (m - 1.0) * real_checked(s_spec[b_alt], scale);
        if (a2 > 0.0) {
            t.ib_same[i] = a2 * m * real_checked(h_spec[b], scale);
            t.ib_adjacent[i] = a2 * (m - 1.0) * real_checked(h_spec[b_alt], scale);
        }
    }
    return t;
}

PowerProfile avg_sq_acf(const Scenario& scn, const LeakagePair& ops, int workers) {
    return avg_sq_acf_terms(scn, ops, workers).combine();
}

PowerProfile avg_sq_acf(const Scenario& scn, int workers) {
    return avg_sq_acf(scn, build_operators(scn), workers);
}

PowerProfile avg_sq_acf_summation(const Scenario& scn, const LeakagePair& ops, int workers) {
    check_operators(scn, ops);
    const int n = scn.alloc.n();
    const int size = 2 * n;
    const double m = scn.M;
    const double mu4 = scn.constellation.mu4;
    const double a2 = scn.alpha() * scn.alpha();

    // v_i is column i of W^H, i.e. the conjugated row i of W
    const ComplexMatrix v1 = ops.w1.matrix.adjoint();
    const ComplexMatrix v2 = ops.w2.matrix.adjoint();
    const Eigen::MatrixXd v1_energy = v1.cwiseAbs2();

    // pair coefficients multiplying z^(n-m) and (-z)^(n-m)
    ComplexMatrix plain(size, size);
    ComplexMatrix alternating(size, size);
    for (int a = 0; a < size; ++a) {
        for (int b = 0; b < size; ++b) {
            const cd inner1 = v1.col(a).dot(v1.col(b));
            const cd inner2 = v2.col(a).dot(v2.col(b));
            const double hadamard = v1_energy.col(a).dot(v1_energy.col(b));
            const double norms = v1.col(a).squaredNorm() * v1.col(b).squaredNorm();
            const cd ib = std::conj(inner1) * inner2;
            plain(a, b) = m * (mu4 - 2.0) * hadamard + m * m * norms + m * std::norm(inner1) +
                          a2 * m * ib;
            alternating(a, b) = (m - 1.0) * std::norm(inner1) + a2 * (m - 1.0) * ib;
        }
    }

    std::vector<cd> phase(static_cast<std::size_t>(size));
    for (int d = 0; d < size; ++d) phase[static_cast<std::size_t>(d)] = std::polar(1.0, kPi * d / n);

    PowerProfile out;
    out.max_lag = n - 1;
    out.values.assign(static_cast<std::size_t>(2 * n - 1), 0.0);
    const double norm = normalization(scn);
    parallel_for(out.values.size(), workers, [&](std::size_t i) {
        const int k = static_cast<int>(i) - (n - 1);
        cd acc = 0.0;
        for (int a = 0; a < size; ++a) {
            for (int b = 0; b < size; ++b) {
                const long long e = static_cast<long long>(k) * (a - b);
                const int idx = static_cast<int>(((e % size) + size) % size);
                const cd z = phase[static_cast<std::size_t>(idx)];
                const cd c = ((a - b) % 2 == 0) ? plain(a, b) + alternating(a, b)
                                                : plain(a, b) - alternating(a, b);
                acc += c * z;
            }
        }
        out.values[i] = acc.real() / norm;
    });
    return out;
}

PowerProfile avg_sq_acf_matrix(const Scenario& scn, const LeakagePair& ops, int workers) {
    check_operators(scn, ops);
    const int n = scn.alloc.n();
    const int size = 2 * n;
    const double m = scn.M;
    const double mu4 = scn.constellation.mu4;
    const double a2 = scn.alpha() * scn.alpha();
    const ComplexMatrix& w1 = ops.w1.matrix;

    const ComplexMatrix g1 = w1 * w1.adjoint();
    const ComplexMatrix g2 = ops.w2.matrix * ops.w2.matrix.adjoint();
    const ComplexMatrix q = w1.cwiseAbs2().cast<cd>();
    const ComplexVector r = g1.diagonal();

    PowerProfile out;
    out.max_lag = n - 1;
    out.values.assign(static_cast<std::size_t>(2 * n - 1), 0.0);
    const double norm = normalization(scn);
    parallel_for(out.values.size(), workers, [&](std::size_t i) {
        const int k = static_cast<int>(i) - (n - 1);
        ComplexVector z(size);
        ComplexVector z_alt(size);
        for (int j = 0; j < size; ++j) {
            z[j] = std::polar(1.0, kPi * k * j / n);
            z_alt[j] = (j % 2 == 0) ? z[j] : -z[j];
        }
        const ComplexVector zc = z.conjugate();
        const ComplexVector zc_alt = z_alt.conjugate();
        const auto d = z.asDiagonal();
        const auto dh = zc.asDiagonal();
        const auto d_alt = z_alt.asDiagonal();
        const auto dh_alt = zc_alt.asDiagonal();
        const ComplexMatrix g1_adj = g1.adjoint();

        // q^T z stacks sum_n |W1[n,l]|^2 z_n over the columns l
        const cd kurt = (q.transpose() * z).squaredNorm();
        const cd energy = std::norm((r.transpose() * z).value());
        const cd same = (d * g1 * dh * g1_adj).trace();
        const cd adjacent = (d_alt * g1 * dh_alt * g1_adj).trace();
        const cd ib_same = (d * g2 * dh * g1_adj).trace();
        const cd ib_adjacent = (d_alt * g2 * dh_alt * g1_adj).trace();

        const cd total = m * (mu4 - 2.0) * kurt + m * m * energy + m * same +
                         (m - 1.0) * adjacent + a2 * (m * ib_same + (m - 1.0) * ib_adjacent);
        out.values[i] = total.real() / norm;
    });
    return out;
}

PowerProfile avg_sq_acf_limit(const Scenario& scn) {
    const LeakageOperator w1 = build_leakage_operator(scn.alloc, 1, scn.spread1);
    const int n = scn.alloc.n();
    const ComplexVector r = w1.matrix.rowwise().squaredNorm().cast<cd>();
    const ComplexVector r_spec = backward(r);
    const double cols = scn.spread1.cols();

    PowerProfile out;
    out.max_lag = n - 1;
    out.values.resize(static_cast<std::size_t>(2 * n - 1));
    for (int k = -(n - 1); k < n; ++k) {
        out.values[static_cast<std::size_t>(k + n - 1)] = std::norm(r_spec[bin(k, n)]) / (cols * cols);
    }
    return out;
}

double inter_band_energy(const LeakageOperator& w1, const LeakageOperator& w2, double alpha, int m) {
    if (w1.matrix.rows() != w2.matrix.rows()) {
        throw DimensionError("inter_band_energy: operators have different row counts");
    }
    if (m < 1) throw ContractError("inter_band_energy: M must be at least 1");
    double trace = 0.0;
    for (Eigen::Index r = 0; r < w1.matrix.rows(); ++r) {
        trace += w1.matrix.row(r).squaredNorm() * w2.matrix.row(r).squaredNorm();
    }
    return alpha * alpha * (2.0 * m - 1.0) * trace;
}

double inter_band_energy_columns(const LeakageOperator& w1, const LeakageOperator& w2,
                                 double alpha, int m) {
    if (w1.matrix.rows() != w2.matrix.rows()) {
        throw DimensionError("inter_band_energy_columns: operators have different row counts");
    }
    if (m < 1) throw ContractError("inter_band_energy_columns: M must be at least 1");
    const Eigen::MatrixXd e1 = w1.matrix.cwiseAbs2();
    const Eigen::MatrixXd e2 = w2.matrix.cwiseAbs2();
    double trace = 0.0;
    for (Eigen::Index i = 0; i < e1.cols(); ++i) {
        for (Eigen::Index j = 0; j < e2.cols(); ++j) trace += e1.col(i).dot(e2.col(j));
    }
    return alpha * alpha * (2.0 * m - 1.0) * trace;
}

double eib_upper_bound(const LeakageOperator& w1, const LeakageOperator& w2) {
    const Eigen::Index rows = w1.matrix.rows();
    if (w1.n <= 0 || rows != 2 * w1.n || w2.matrix.rows() != rows || w2.n != w1.n || w2.l != w1.l) {
        throw DimensionError("eib_upper_bound: operators must both have 2N rows for one allocation");
    }
    const Eigen::Index split = 2 * w1.l;
    const double top1 = w1.matrix.topRows(split).squaredNorm();
    const double bottom1 = w1.matrix.bottomRows(rows - split).squaredNorm();
    const double top2 = w2.matrix.topRows(split).squaredNorm();
    const double bottom2 = w2.matrix.bottomRows(rows - split).squaredNorm();
    return top1 * top2 + bottom1 * bottom2;
}

EislReport eisl(const Scenario& scn, const LeakagePair& ops) {
    check_operators(scn, ops);
    const double m = scn.M;
    const double mu4 = scn.constellation.mu4;
    const double a2 = scn.alpha() * scn.alpha();
    const double size = 2.0 * scn.alloc.n();
    const double norm = normalization(scn);
    const ComplexMatrix& w1 = ops.w1.matrix;

    double diag = 0.0;
    for (Eigen::Index r = 0; r < w1.rows(); ++r) {
        const double rn = w1.row(r).squaredNorm();
        const double qn = w1.row(r).cwiseAbs2().squaredNorm();
        diag += (m * m + 2.0 * m - 1.0) * rn * rn + m * (mu4 - 2.0) * qn;
    }

    EislReport rep;
    rep.e_ib = inter_band_energy(ops.w1, ops.w2, scn.alpha(), scn.M);
    rep.e_ib_trace = inter_band_energy(ops.w1, ops.w2, 1.0, 1);
    rep.e_ib_bound = eib_upper_bound(ops.w1, ops.w2);
    rep.e_ib_bound_scaled = a2 * (2.0 * m - 1.0) * rep.e_ib_bound;
    rep.main_lobe = main_lobe_energy(mu4, scn.M, scn.info_cols());

    // the lag-N term of the periodic lag sum is excluded from the aperiodic range
    const double lag_n = (m - 1.0) * ((w1.adjoint() * w1).squaredNorm() +
                                      a2 * (w1.adjoint() * ops.w2.matrix).squaredNorm());

    rep.eisl_normalized = size / norm * (diag + rep.e_ib) - rep.main_lobe / norm - lag_n / norm;
    rep.eisl_db = to_db(rep.eisl_normalized);
    return rep;
}

EislReport eisl(const Scenario& scn) { return eisl(scn, build_operators(scn)); }

}  // namespace isac
