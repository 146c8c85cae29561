#pragma once

#include <cmath>
#include <complex>
#include <vector>

#include "isac/linalg.hpp"
#include "isac/rng.hpp"

namespace test {

inline isac::ComplexVector random_vector(isac::RngStream& rng, int n) {
    isac::ComplexVector v(n);
    for (int i = 0; i < n; ++i) v[i] = {rng.normal(), rng.normal()};
    return v;
}

inline isac::ComplexMatrix random_matrix(isac::RngStream& rng, int rows, int cols) {
    isac::ComplexMatrix a(rows, cols);
    for (int c = 0; c < cols; ++c) a.col(c) = random_vector(rng, rows);
    return a;
}

// Orthonormal columns via QR of a Gaussian matrix.
inline isac::ComplexMatrix random_orthonormal(isac::RngStream& rng, int rows, int cols) {
    Eigen::HouseholderQR<isac::ComplexMatrix> qr(random_matrix(rng, rows, cols));
    return qr.householderQ() * isac::ComplexMatrix::Identity(rows, cols);
}

inline double max_abs_diff(const std::vector<isac::cd>& a, const std::vector<isac::cd>& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

inline double max_abs(const std::vector<isac::cd>& a) {
    double m = 0.0;
    for (const auto& v : a) m = std::max(m, std::abs(v));
    return m;
}

}  // namespace test
