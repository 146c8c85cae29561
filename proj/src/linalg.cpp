#include "isac/linalg.hpp"

#include <algorithm>
#include <cmath>

#include "isac/error.hpp"

namespace isac {

ComplexMatrix dft_matrix(int n) {
    if (n <= 0) throw DimensionError("dft_matrix: size must be positive");
    ComplexMatrix f(n, n);
    const double scale = 1.0 / std::sqrt(static_cast<double>(n));
    for (int l = 0; l < n; ++l) {
        for (int k = 0; k < n; ++k) {
            // reduce l*k mod n before the trig call to keep the argument small
            const long long r = (static_cast<long long>(l) * k) % n;
            const double ang = -2.0 * kPi * static_cast<double>(r) / n;
            f(l, k) = std::polar(scale, ang);
        }
    }
    return f;
}

namespace {

void fix_sign(Eigen::Ref<ComplexVector> v) {
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        const double m = std::abs(v[i]);
        if (m > 1e-12) {
            v *= std::conj(v[i]) / m;
            v[i] = cd(m, 0.0);
            return;
        }
    }
}

// Orthonormal basis of span(v) built from the projected unit vectors e_0, e_1, ...
ComplexMatrix canonical_basis(const ComplexMatrix& v) {
    const Eigen::Index n = v.rows();
    const Eigen::Index c = v.cols();
    ComplexMatrix out(n, c);
    Eigen::Index found = 0;

    auto residual = [&](Eigen::Index i) {
        // P e_i = V V^H e_i
        ComplexVector r = v * v.row(i).adjoint();
        for (int pass = 0; pass < 2; ++pass) {
            for (Eigen::Index j = 0; j < found; ++j) {
                r -= out.col(j) * out.col(j).dot(r);
            }
        }
        return r;
    };

    std::vector<bool> used(static_cast<std::size_t>(n), false);
    for (Eigen::Index i = 0; i < n && found < c; ++i) {
        ComplexVector r = residual(i);
        const double nr = r.norm();
        if (nr > 1e-6) {
            out.col(found++) = r / nr;
            used[static_cast<std::size_t>(i)] = true;
        }
    }
    while (found < c) {
        Eigen::Index best = -1;
        double best_norm = 0.0;
        ComplexVector best_r;
        for (Eigen::Index i = 0; i < n; ++i) {
            if (used[static_cast<std::size_t>(i)]) continue;
            ComplexVector r = residual(i);
            if (r.norm() > best_norm) {
                best_norm = r.norm();
                best = i;
                best_r = std::move(r);
            }
        }
        if (best < 0 || best_norm == 0.0) {
            throw ConsistencyError("eigh_descending: degenerate cluster basis collapsed");
        }
        out.col(found++) = best_r / best_norm;
        used[static_cast<std::size_t>(best)] = true;
    }
    return out;
}

}  // namespace

EigenDecomposition eigh_descending(const ComplexMatrix& a, double cluster_tol) {
    if (a.rows() != a.cols()) throw DimensionError("eigh_descending: matrix is not square");
    if (a.rows() == 0) throw DimensionError("eigh_descending: empty matrix");
    if (max_abs(a - a.adjoint()) > 1e-10) {
        throw ContractError("eigh_descending: matrix is not Hermitian");
    }

    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(a);
    if (es.info() != Eigen::Success) throw ConsistencyError("eigh_descending: solver failed");

    const Eigen::Index n = a.rows();
    EigenDecomposition out;
    out.values = es.eigenvalues().reverse();
    out.vectors = es.eigenvectors().rowwise().reverse();

    const double scale = out.values.cwiseAbs().maxCoeff();
    const double tol = cluster_tol * scale;
    Eigen::Index start = 0;
    while (start < n) {
        Eigen::Index end = start + 1;
        while (end < n && out.values[end - 1] - out.values[end] <= tol) ++end;
        if (end - start > 1) {
            out.vectors.middleCols(start, end - start) =
                canonical_basis(out.vectors.middleCols(start, end - start));
        }
        start = end;
    }
    for (Eigen::Index i = 0; i < n; ++i) fix_sign(out.vectors.col(i));
    return out;
}

double orthonormality_defect(const ComplexMatrix& a) {
    ComplexMatrix g = a.adjoint() * a;
    g -= ComplexMatrix::Identity(a.cols(), a.cols());
    return max_abs(g);
}

double max_abs(const ComplexMatrix& a) {
    return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff();
}

double frobenius2(const ComplexMatrix& a) { return a.squaredNorm(); }

}  // namespace isac
