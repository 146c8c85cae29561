#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

namespace isac {

using cd = std::complex<double>;
using ComplexVector = Eigen::VectorXcd;
using ComplexMatrix = Eigen::MatrixXcd;
using RealVector = Eigen::VectorXd;

inline constexpr double kPi = 3.14159265358979323846;

/// Unitary n-point DFT matrix, entry (l,k) = e^{-j2*pi*l*k/n} / sqrt(n).
ComplexMatrix dft_matrix(int n);

struct EigenDecomposition {
    RealVector values;      // descending
    ComplexMatrix vectors;  // column i pairs with values[i]
};

/// Eigendecomposition of a Hermitian matrix, eigenvalues sorted descending.
///
/// The result is canonical so that downstream constructions are reproducible:
///  - eigenvalues whose consecutive spacing is below `cluster_tol * max|lambda|`
///    form a cluster; the cluster's eigenvectors are replaced by the
///    Gram-Schmidt orthonormalization of the unit vectors e_0, e_1, ...
///    projected onto the cluster subspace (the projector is basis independent);
///  - every eigenvector is scaled so its first component with magnitude
///    > 1e-12 is real and positive.
///
/// Throws ContractError if max|A - A^H| > 1e-10.
EigenDecomposition eigh_descending(const ComplexMatrix& a, double cluster_tol = 1e-9);

/// max |A^H A - I| over all entries.
double orthonormality_defect(const ComplexMatrix& a);

/// max |a_ij| over all entries (0 for an empty matrix).
double max_abs(const ComplexMatrix& a);

/// Squared Frobenius norm.
double frobenius2(const ComplexMatrix& a);

}  // namespace isac
