#pragma once

#include <cstdint>
#include <limits>
#include <vector>

#include "isac/correlation.hpp"
#include "isac/waveform.hpp"

namespace isac {

struct Scenario {
    SubcarrierAllocation alloc{128, 32};
    int M = 1;
    double alpha_db = -std::numeric_limits<double>::infinity();
    Constellation constellation = make_constellation(Modulation::QPSK);
    SpreadingMatrix spread1;
    SpreadingMatrix spread2;
    std::uint64_t seed = 1;

    /// Amplitude 10^(alpha_db/20); zero for alpha_db = -inf.
    double alpha() const;

    /// Information symbols per OFDM symbol for user 1; the profile normalization is (M * info_cols)^2.
    int info_cols() const noexcept { return spread1.cols(); }

    /// Throws DimensionError / ContractError on inconsistent fields.
    void validate() const;
};

/// Builds a scenario whose two users share one spreading scheme.
Scenario make_scenario(int n, int l, int m, double alpha_db, Modulation mod,
                       SpreadingScheme scheme, double eta, std::uint64_t seed = 1);

SpreadingMatrix make_spreading(const SubcarrierAllocation& alloc, int user,
                               SpreadingScheme scheme, double eta);

struct LeakagePair {
    LeakageOperator w1;
    LeakageOperator w2;
};

LeakagePair build_operators(const Scenario& scn);

/// Per-lag contributions to the expected squared correlation, unnormalized.
/// Each vector is indexed by lag + (N-1).
struct AcfTerms {
    int max_lag = 0;
    double normalization = 1.0;  // (M * info_cols)^2
    std::vector<double> kurtosis;       // M (mu4 - 2) sum_l |sum_n |W1[n,l]|^2 z^n|^2
    std::vector<double> energy;         // M^2 |sum_n r_n z^n|^2
    std::vector<double> same_symbol;    // M sum |G1[n,m]|^2 z^(n-m)
    std::vector<double> adjacent;       // (M-1) sum |G1[n,m]|^2 (-z)^(n-m)
    std::vector<double> ib_same;        // alpha^2 M sum conj(G1) G2 z^(n-m)
    std::vector<double> ib_adjacent;    // alpha^2 (M-1) sum conj(G1) G2 (-z)^(n-m)

    /// Normalized profile; ib_sign scales both inter-band terms.
    PowerProfile combine(double ib_sign = 1.0) const;
};

/// Expected squared aperiodic frame correlation, normalized by (M * info_cols)^2.
/// z = e^{j pi k / N}. Evaluated through diagonal sums of the Gram matrices.
PowerProfile avg_sq_acf(const Scenario& scn, int workers = 1);
PowerProfile avg_sq_acf(const Scenario& scn, const LeakagePair& ops, int workers = 1);
AcfTerms avg_sq_acf_terms(const Scenario& scn, const LeakagePair& ops, int workers = 1);

/// Same quantity as a literal double sum over row pairs (n, m) of the
/// operators for every lag. O(N^3); reference path.
PowerProfile avg_sq_acf_summation(const Scenario& scn, const LeakagePair& ops, int workers = 1);

/// Same quantity through dense traces trace(D G D^H G'^H) per lag. O(N^4);
/// reference path for small N.
PowerProfile avg_sq_acf_matrix(const Scenario& scn, const LeakagePair& ops, int workers = 1);

/// Large-frame limit |sum_n r_n z^n|^2 / info_cols^2. Depends on spread1 only.
PowerProfile avg_sq_acf_limit(const Scenario& scn);

struct EislReport {
    double eisl_normalized = 0.0;  // sum over k != 0 of the normalized profile
    double eisl_db = 0.0;
    double e_ib = 0.0;             // alpha^2 (2M-1) sum_n r1_n r2_n
    double e_ib_trace = 0.0;       // sum_n r1_n r2_n
    double e_ib_bound = 0.0;       // bound on e_ib_trace
    double e_ib_bound_scaled = 0.0;  // alpha^2 (2M-1) * e_ib_bound
    double main_lobe = 0.0;        // unnormalized lag-0 energy
};

EislReport eisl(const Scenario& scn);
EislReport eisl(const Scenario& scn, const LeakagePair& ops);

/// alpha^2 (2M-1) trace(W1 W1^H .* W2 W2^H) by row-wise accumulation.
double inter_band_energy(const LeakageOperator& w1, const LeakageOperator& w2, double alpha,
                         int m);

/// Same value from the column form sum_{i,j} (w1_i .* conj w1_i)^T (w2_j .* conj w2_j).
double inter_band_energy_columns(const LeakageOperator& w1, const LeakageOperator& w2,
                                 double alpha, int m);

/// Rows split at 2L into W1 = [A1; C1], W2 = [C2; A2]:
/// |A1|^2 |C2|^2 + |C1|^2 |A2|^2 in squared Frobenius norms.
double eib_upper_bound(const LeakageOperator& w1, const LeakageOperator& w2);

/// (mu4 - 1 + M L) M L.
double main_lobe_energy(double mu4, int m, int l);

/// 10 log10(x); -inf for x <= 0.
double to_db(double x);

}  // namespace isac
