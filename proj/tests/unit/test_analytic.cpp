#include <doctest.h>

#include <cmath>
#include <limits>

#include "helpers.hpp"
#include "isac/analytic.hpp"
#include "isac/correlation.hpp"
#include "isac/error.hpp"
#include "isac/spreading.hpp"

using namespace isac;

constexpr double kOff = -std::numeric_limits<double>::infinity();

namespace {

SpreadingMatrix random_spreading(RngStream& rng, int band, int cols) {
    SpreadingMatrix p;
    p.matrix = test::random_orthonormal(rng, band, cols);
    p.eta = static_cast<double>(cols) / band;
    return p;
}

Scenario custom(int n, int l, int m, double alpha_db, Modulation mod, SpreadingMatrix p1,
                SpreadingMatrix p2) {
    Scenario s;
    s.alloc = SubcarrierAllocation(n, l);
    s.M = m;
    s.alpha_db = alpha_db;
    s.constellation = make_constellation(mod);
    s.spread1 = std::move(p1);
    s.spread2 = std::move(p2);
    return s;
}

// Exact expectation by enumerating every symbol assignment of the frame.
std::vector<double> enumerate_expectation(const Scenario& s) {
    const int c1 = s.spread1.cols();
    const int c2 = s.spread2.cols();
    const int per_symbol = c1 + c2;
    const int slots = s.M * per_symbol;
    const auto q = static_cast<long long>(s.constellation.points.size());
    long long total = 1;
    for (int i = 0; i < slots; ++i) total *= q;

    const int n = s.alloc.n();
    std::vector<double> acc(static_cast<std::size_t>(2 * n - 1), 0.0);
    std::vector<int> idx(static_cast<std::size_t>(slots), 0);
    const double norm = std::pow(static_cast<double>(s.M) * c1, 2);
    for (long long t = 0; t < total; ++t) {
        long long rem = t;
        for (int i = 0; i < slots; ++i) {
            idx[static_cast<std::size_t>(i)] = static_cast<int>(rem % q);
            rem /= q;
        }
        ComplexVector x(s.M * n), y(s.M * n);
        for (int sym = 0; sym < s.M; ++sym) {
            ComplexVector s1(c1), s2(c2);
            for (int i = 0; i < c1; ++i) s1[i] = s.constellation.points[idx[static_cast<std::size_t>(sym * per_symbol + i)]];
            for (int i = 0; i < c2; ++i) s2[i] = s.constellation.points[idx[static_cast<std::size_t>(sym * per_symbol + c1 + i)]];
            const ComplexVector x1 = ofdm_modulate(s.alloc, s.spread1, s1, s.spread2, ComplexVector::Zero(c2));
            const ComplexVector x2 = ofdm_modulate(s.alloc, s.spread1, ComplexVector::Zero(c1), s.spread2, s2);
            x.segment(sym * n, n) = x1;
            y.segment(sym * n, n) = x1 + s.alpha() * x2;
        }
        for (int k = -(n - 1); k < n; ++k) {
            cd c = 0.0;
            for (int i = 0; i < s.M * n; ++i) {
                if (i + k >= 0 && i + k < s.M * n) c += std::conj(x[i]) * y[i + k];
            }
            acc[static_cast<std::size_t>(k + n - 1)] += std::norm(c) / norm;
        }
    }
    for (double& v : acc) v /= static_cast<double>(total);
    return acc;
}

double max_rel_diff(const PowerProfile& a, const PowerProfile& b) {
    double scale = 0.0;
    double diff = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        scale = std::max(scale, std::abs(a.values[i]));
        diff = std::max(diff, std::abs(a.values[i] - b.values[i]));
    }
    return diff / scale;
}

}  // namespace

TEST_CASE("closed form equals exact enumeration over all symbol frames") {
    RngStream rng(41, 0);
    struct Case {
        int n, l, m;
        double alpha_db;
        Modulation mod;
        bool random_spreading;
    };
    for (const Case& c : {Case{4, 2, 1, 3.0, Modulation::QPSK, false},
                          Case{4, 2, 2, -2.0, Modulation::QPSK, false},
                          Case{4, 2, 2, 4.0, Modulation::QPSK, true},
                          Case{4, 1, 1, 1.0, Modulation::QAM16, false},
                          Case{4, 1, 2, -3.0, Modulation::QPSK, true}}) {
        const SubcarrierAllocation a(c.n, c.l);
        SpreadingMatrix p1 = c.random_spreading ? random_spreading(rng, c.l, c.l) : identity_spreading(c.l);
        SpreadingMatrix p2 = c.random_spreading ? random_spreading(rng, c.n - c.l, c.n - c.l)
                                                : identity_spreading(c.n - c.l);
        const Scenario s = custom(c.n, c.l, c.m, c.alpha_db, c.mod, p1, p2);
        const std::vector<double> exact = enumerate_expectation(s);
        const PowerProfile got = avg_sq_acf(s);
        for (std::size_t i = 0; i < exact.size(); ++i) {
            CHECK(got.values[i] == doctest::Approx(exact[i]).epsilon(1e-10).scale(1.0));
        }
    }
}

TEST_CASE("fast, summation and matrix forms agree") {
    RngStream rng(42, 0);
    std::vector<Scenario> cases;
    cases.push_back(make_scenario(16, 4, 1, 15.0, Modulation::QPSK, SpreadingScheme::Identity, 1.0));
    cases.push_back(make_scenario(16, 5, 3, 0.0, Modulation::QAM16, SpreadingScheme::Pdpss, 0.8));
    cases.push_back(make_scenario(32, 8, 2, 10.0, Modulation::QAM64, SpreadingScheme::Guardband, 0.9));
    cases.push_back(custom(16, 6, 2, 6.0, Modulation::QAM16, random_spreading(rng, 6, 4),
                           random_spreading(rng, 10, 7)));
    for (const Scenario& s : cases) {
        const LeakagePair ops = build_operators(s);
        const PowerProfile fast = avg_sq_acf(s, ops);
        const PowerProfile sum = avg_sq_acf_summation(s, ops, 2);
        const PowerProfile mat = avg_sq_acf_matrix(s, ops, 2);
        CHECK(max_rel_diff(fast, sum) <= 1e-9);
        CHECK(max_rel_diff(fast, mat) <= 1e-9);
        for (double v : fast.values) CHECK(v >= -1e-12);
    }
}

TEST_CASE("user 2 switched off removes the inter-band terms") {
    const SubcarrierAllocation a(32, 8);
    Scenario s = make_scenario(32, 8, 2, kOff, Modulation::QPSK, SpreadingScheme::Identity, 1.0);
    const AcfTerms t = avg_sq_acf_terms(s, build_operators(s));
    for (std::size_t i = 0; i < t.ib_same.size(); ++i) {
        CHECK(t.ib_same[i] == 0.0);
        CHECK(t.ib_adjacent[i] == 0.0);
    }
    const PowerProfile ref = avg_sq_acf(s);
    s.spread2 = pdpss_spreading(a, 2, 0.5);
    CHECK(avg_sq_acf(s).values == ref.values);
}

TEST_CASE("lag-0 value equals the normalized main lobe") {
    for (Modulation mod : {Modulation::QPSK, Modulation::QAM16, Modulation::QAM64}) {
        for (int m : {1, 3}) {
            for (SpreadingScheme sch : {SpreadingScheme::Identity, SpreadingScheme::Pdpss}) {
                const Scenario s = make_scenario(64, 16, m, 12.0, mod, sch, 0.9);
                const double mc = static_cast<double>(m) * s.info_cols();
                const double expected = (s.constellation.mu4 - 1.0 + mc) / mc;
                CHECK(avg_sq_acf(s).at(0) == doctest::Approx(expected).epsilon(1e-10));
                CHECK(main_lobe_energy(s.constellation.mu4, m, s.info_cols()) / (mc * mc) ==
                      doctest::Approx(expected).epsilon(1e-14));
            }
        }
    }
    const Scenario q = make_scenario(128, 32, 1, 20.0, Modulation::QPSK, SpreadingScheme::Identity, 1.0);
    CHECK(avg_sq_acf(q).at(0) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("profile is even in the lag for real-structured spreadings") {
    for (SpreadingScheme sch : {SpreadingScheme::Identity, SpreadingScheme::Guardband, SpreadingScheme::Pdpss}) {
        const Scenario s = make_scenario(64, 16, 2, 15.0, Modulation::QAM16, sch, 0.9);
        const PowerProfile p = avg_sq_acf(s);
        const double peak = *std::max_element(p.values.begin(), p.values.end());
        for (int k = 1; k < 64; ++k) CHECK(std::abs(p.at(k) - p.at(-k)) <= 1e-9 * peak);
    }
}

TEST_CASE("inter-band terms never lower the profile") {
    // identity spreading: every lag is non-decreasing in alpha
    std::vector<double> prev;
    for (double a : {kOff, 0.0, 5.0, 10.0, 15.0, 20.0}) {
        const Scenario s = make_scenario(128, 32, 2, a, Modulation::QPSK, SpreadingScheme::Identity, 1.0);
        const PowerProfile p = avg_sq_acf(s);
        if (!prev.empty()) {
            for (std::size_t i = 0; i < p.size(); ++i) CHECK(p.values[i] >= prev[i] - 1e-12);
        }
        prev = p.values;
    }
}

TEST_CASE("large-frame limit") {
    const Scenario s = make_scenario(64, 16, 1, 0.0, Modulation::QPSK, SpreadingScheme::Pdpss, 0.9);
    const PowerProfile lim = avg_sq_acf_limit(s);
    CHECK(lim.at(0) == doctest::Approx(1.0).epsilon(1e-12));

    Scenario t = s;
    t.alpha_db = 20.0;
    t.constellation = make_constellation(Modulation::QAM64);
    t.M = 7;
    t.spread2 = identity_spreading(48);
    CHECK(avg_sq_acf_limit(t).values == lim.values);

    // equals the fast path's energy term divided by M^2
    const AcfTerms terms = avg_sq_acf_terms(s, build_operators(s));
    for (std::size_t i = 0; i < lim.size(); ++i) {
        CHECK(lim.values[i] == doctest::Approx(terms.energy[i] / terms.normalization).epsilon(1e-12).scale(1.0));
    }
    // the remainder decays as 1/M
    auto gap = [&](int m) {
        Scenario u = s;
        u.M = m;
        const PowerProfile p = avg_sq_acf(u);
        double g = 0.0;
        for (std::size_t i = 0; i < p.size(); ++i) g = std::max(g, std::abs(p.values[i] - lim.values[i]));
        return g;
    };
    const double g100 = gap(100);
    const double g10000 = gap(10000);
    CHECK(g100 / g10000 == doctest::Approx(100.0).epsilon(0.02));
    CHECK(g10000 < 1e-5);
}

TEST_CASE("EISL closed form equals the lag sum of the profile") {
    const Scenario base = make_scenario(64, 16, 2, 10.0, Modulation::QPSK, SpreadingScheme::Identity, 1.0);
    const EislReport r = eisl(base);
    const PowerProfile p = avg_sq_acf(base);
    double sum = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (p.lag(i) != 0) sum += p.values[i];
    }
    CHECK(std::abs(r.eisl_normalized - sum) <= 1e-8 * sum);
    CHECK(r.eisl_db == doctest::Approx(10.0 * std::log10(sum)));

    for (SpreadingScheme sch : {SpreadingScheme::Guardband, SpreadingScheme::Pdpss}) {
        for (Modulation mod : {Modulation::QAM16, Modulation::QAM64}) {
            const Scenario s = make_scenario(32, 12, 3, 7.0, mod, sch, 0.75);
            const PowerProfile q = avg_sq_acf(s);
            double total = 0.0;
            for (std::size_t i = 0; i < q.size(); ++i) {
                if (q.lag(i) != 0) total += q.values[i];
            }
            CHECK(std::abs(eisl(s).eisl_normalized - total) <= 1e-8 * total);
        }
    }

    const Scenario off = make_scenario(64, 16, 2, kOff, Modulation::QPSK, SpreadingScheme::Identity, 1.0);
    const EislReport ro = eisl(off);
    CHECK(ro.e_ib == 0.0);
    Scenario off2 = off;
    off2.spread2 = guardband_selection(48, 0.5);
    CHECK(eisl(off2).eisl_normalized == ro.eisl_normalized);
}

TEST_CASE("main lobe energy") {
    CHECK(main_lobe_energy(1.0, 2, 16) == 1024.0);
    CHECK(main_lobe_energy(1.32, 1, 4) == doctest::Approx(17.28).epsilon(1e-14));
    for (int m : {1, 4, 9}) {
        for (int l : {1, 8, 33}) CHECK(main_lobe_energy(1.0, m, l) == doctest::Approx(double(m * l) * (m * l)));
    }
    CHECK_THROWS_AS(main_lobe_energy(1.0, 0, 4), ContractError);
}

TEST_CASE("inter-band energy") {
    const SubcarrierAllocation a(32, 8);
    RngStream rng(43, 0);
    const LeakageOperator w1 = build_leakage_operator(a, 1, random_spreading(rng, 8, 6));
    const LeakageOperator w2 = build_leakage_operator(a, 2, random_spreading(rng, 24, 20));
    CHECK(inter_band_energy(w1, w2, 0.0, 3) == 0.0);
    const double e1 = inter_band_energy(w1, w2, 1.0, 1);
    CHECK(inter_band_energy(w1, w2, 2.0, 1) == 4.0 * e1);
    CHECK(inter_band_energy(w1, w2, 1.0, 3) == doctest::Approx(5.0 * e1).epsilon(1e-14));
    CHECK(std::abs(inter_band_energy_columns(w1, w2, 1.0, 1) - e1) <= 1e-10 * e1);

    // full 2N x 2N Hadamard product as a third route
    const ComplexMatrix g1 = w1.matrix * w1.matrix.adjoint();
    const ComplexMatrix g2 = w2.matrix * w2.matrix.adjoint();
    CHECK(std::abs(g1.cwiseProduct(g2).trace().real() - e1) <= 1e-10 * e1);
}

TEST_CASE("inter-band bound") {
    const SubcarrierAllocation a(32, 8);
    RngStream rng(44, 0);
    for (int trial = 0; trial < 100; ++trial) {
        const int c1 = 1 + static_cast<int>(rng.uniform_index(8));
        const int c2 = 1 + static_cast<int>(rng.uniform_index(24));
        const LeakageOperator w1 = build_leakage_operator(a, 1, random_spreading(rng, 8, c1));
        const LeakageOperator w2 = build_leakage_operator(a, 2, random_spreading(rng, 24, c2));
        CHECK(inter_band_energy(w1, w2, 1.0, 1) <= eib_upper_bound(w1, w2));
    }

    // square orthonormal P does not change the bound
    const LeakageOperator i1 = build_leakage_operator(a, 1, identity_spreading(8));
    const LeakageOperator i2 = build_leakage_operator(a, 2, identity_spreading(24));
    const double ref = eib_upper_bound(i1, i2);
    for (int trial = 0; trial < 10; ++trial) {
        const LeakageOperator r1 = build_leakage_operator(a, 1, random_spreading(rng, 8, 8));
        const LeakageOperator r2 = build_leakage_operator(a, 2, random_spreading(rng, 24, 24));
        CHECK(std::abs(eib_upper_bound(r1, r2) - ref) <= 1e-10 * ref);
    }

    const SubcarrierAllocation big(128, 32);
    auto bound_at = [&](double eta) {
        return eib_upper_bound(build_leakage_operator(big, 1, pdpss_spreading(big, 1, eta)),
                               build_leakage_operator(big, 2, pdpss_spreading(big, 2, eta)));
    };
    CHECK(bound_at(0.9) < bound_at(1.0));

    LeakageOperator bad = i2;
    bad.matrix = bad.matrix.topRows(10);
    CHECK_THROWS_AS(eib_upper_bound(i1, bad), DimensionError);
}

TEST_CASE("EISL report is consistent with the bound") {
    for (SpreadingScheme sch : {SpreadingScheme::Identity, SpreadingScheme::Guardband, SpreadingScheme::Pdpss}) {
        for (int m : {1, 4}) {
            const Scenario s = make_scenario(64, 16, m, 15.0, Modulation::QPSK, sch, 0.9);
            const EislReport r = eisl(s);
            CHECK(r.eisl_normalized >= 0.0);
            CHECK(r.e_ib >= 0.0);
            CHECK(r.e_ib_trace <= r.e_ib_bound);
            CHECK(r.e_ib <= r.e_ib_bound_scaled);
            CHECK(r.e_ib / (s.alpha() * s.alpha() * (2 * m - 1)) == doctest::Approx(r.e_ib_trace));
        }
    }
}

TEST_CASE("scenario validation") {
    Scenario s = make_scenario(16, 4, 1, 0.0, Modulation::QPSK, SpreadingScheme::Identity, 1.0);
    CHECK(s.alpha() == 1.0);
    s.alpha_db = 20.0;
    CHECK(s.alpha() == doctest::Approx(10.0));
    s.alpha_db = kOff;
    CHECK(s.alpha() == 0.0);
    s.M = 0;
    CHECK_THROWS_AS(s.validate(), ContractError);
    s.M = 1;
    s.spread1 = identity_spreading(5);
    CHECK_THROWS_AS(s.validate(), DimensionError);
    CHECK_THROWS_AS(avg_sq_acf(s), DimensionError);
}
