#pragma once

#include <string>
#include <string_view>

#include "isac/linalg.hpp"
#include "isac/rng.hpp"

namespace isac {

enum class Modulation { QPSK, QAM16, QAM64 };

std::string_view to_string(Modulation m);
Modulation parse_modulation(std::string_view name);  // "qpsk", "16qam", "64qam"

struct Constellation {
    Modulation kind;
    ComplexVector points;  // unit average power, zero mean
    double mu4;            // E|s|^4 / (E|s|^2)^2 over the alphabet
};

Constellation make_constellation(Modulation kind);

/// i.i.d. uniform draws from the alphabet.
ComplexVector draw_symbols(RngStream& stream, const Constellation& c, int count);

/// User 1 occupies bins [0, L-1], user 2 occupies [L, N-1].
class SubcarrierAllocation {
public:
    SubcarrierAllocation(int n, int l);

    int n() const noexcept { return n_; }
    int l() const noexcept { return l_; }
    int band(int user) const;
    int first_bin(int user) const;

private:
    int n_;
    int l_;
};

enum class SpreadingScheme { Identity, Guardband, Pdpss };

std::string_view to_string(SpreadingScheme s);                  // "ofdm-identity", ...
SpreadingScheme parse_spreading_scheme(std::string_view name);

struct SpreadingMatrix {
    ComplexMatrix matrix;  // band x cols, orthonormal columns
    SpreadingScheme scheme = SpreadingScheme::Identity;
    double eta = 1.0;

    // P-DPSS only: the downsampled, phase-rotated eigenvectors before
    // orthonormalization, their max|P^H P - I|, and the smallest retained
    // eigenvalue of the in-band kernel.
    ComplexMatrix raw;
    double raw_deviation = 0.0;
    double min_retained_eigenvalue = 0.0;

    int band() const noexcept { return static_cast<int>(matrix.rows()); }
    int cols() const noexcept { return static_cast<int>(matrix.cols()); }
};

/// x_t = F_N^H [P1 s1 ; P2 s2].
ComplexVector ofdm_modulate(const SubcarrierAllocation& alloc, const SpreadingMatrix& p1,
                            const ComplexVector& s1, const SpreadingMatrix& p2,
                            const ComplexVector& s2);

/// 2N x 2N matrix with entry sin(pi d / 2) / sin(pi d / (2N)), d = k - k', diagonal N.
ComplexMatrix dirichlet_kernel_matrix(int n);

struct BandSubmatrices {
    ComplexMatrix b1;      // columns [0, 2L-2]
    ComplexMatrix b2;      // columns [2L, 2N-2]
    ComplexMatrix b1_in;   // rows [0, 2L-2] of b1
    ComplexMatrix b1_out;  // rows [2L-1, 2N-1] of b1
    ComplexMatrix b2_in;   // rows [2L, 2N-2] of b2
    ComplexMatrix b2_out;  // rows [0, 2L] of b2
};

BandSubmatrices band_submatrices(const ComplexMatrix& b, const SubcarrierAllocation& alloc);

struct LeakageOperator {
    ComplexMatrix matrix;  // 2N x cols
    int user = 1;
    int n = 0;  // subcarriers of the allocation it was built for
    int l = 0;
    double factored_error = 0.0;  // relative Frobenius gap to the factored construction
};

/// W = F_2N * pad(N -> 2N) * F_N^H * embed(user band) * P.
///
/// The result is checked against the Dirichlet factorization
///   W = c * D(e^{-j pi n (N-1)/(2N)}) * B[:, 2g] * D(e^{+j pi g (N-1)/N}) * P,
/// g the global bin index, c fit by least squares on column 0. Throws
/// ConsistencyError if the relative Frobenius gap exceeds 1e-9.
LeakageOperator build_leakage_operator(const SubcarrierAllocation& alloc, int user,
                                       const SpreadingMatrix& p);

/// Factored construction alone, with the analytic constant 1/(sqrt(N) sqrt(2N)).
ComplexMatrix factored_leakage_operator(const SubcarrierAllocation& alloc, int user,
                                        const ComplexMatrix& p);

}  // namespace isac
