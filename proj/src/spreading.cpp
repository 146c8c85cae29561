#include "isac/spreading.hpp"

#include <cmath>

#include "isac/error.hpp"

namespace isac {

int spreading_columns(int band, double eta) {
    if (!(eta > 0.0 && eta <= 1.0)) throw ContractError("spreading: eta must lie in (0, 1]");
    // the tolerance keeps eta * band exact for decimal eta such as 0.9 * 30
    return static_cast<int>(std::floor(eta * band + 1e-9));
}

SpreadingMatrix identity_spreading(int band) {
    if (band < 1) throw DimensionError("identity_spreading: band must be positive");
    SpreadingMatrix p;
    p.matrix = ComplexMatrix::Identity(band, band);
    p.scheme = SpreadingScheme::Identity;
    p.eta = 1.0;
    return p;
}

SpreadingMatrix guardband_selection(int band, double eta) {
    if (band < 1) throw DimensionError("guardband_selection: band must be positive");
    const int cols = spreading_columns(band, eta);
    if (cols < 1) throw DimensionError("guardband_selection: no columns left at this eta");
    const int dropped = band - cols;
    const int low = (dropped + 1) / 2;
    SpreadingMatrix p;
    p.matrix = ComplexMatrix::Zero(band, cols);
    for (int c = 0; c < cols; ++c) p.matrix(low + c, c) = 1.0;
    p.scheme = SpreadingScheme::Guardband;
    p.eta = eta;
    return p;
}

SpreadingMatrix pdpss_spreading(const SubcarrierAllocation& alloc, int user, double eta) {
    const int band = alloc.band(user);
    const int cols = spreading_columns(band, eta);
    if (cols < 1) throw DimensionError("pdpss_spreading: no columns left at this eta");
    if (cols > 2 * band - 1) throw DimensionError("pdpss_spreading: more columns than eigenvectors");

    const BandSubmatrices blocks = band_submatrices(dirichlet_kernel_matrix(alloc.n()), alloc);
    const EigenDecomposition eig = eigh_descending(user == 1 ? blocks.b1_in : blocks.b2_in);

    const int n = alloc.n();
    const int first = alloc.first_bin(user);
    ComplexMatrix raw(band, cols);
    for (int l = 0; l < band; ++l) {
        const cd phase = std::polar(1.0, -kPi * (first + l) * (n - 1) / n);
        raw.row(l) = eig.vectors.row(2 * l).head(cols) * phase;
    }

    Eigen::HouseholderQR<ComplexMatrix> qr(raw);
    ComplexMatrix q = qr.householderQ() * ComplexMatrix::Identity(band, cols);
    const ComplexMatrix r = qr.matrixQR().topRows(cols).triangularView<Eigen::Upper>();
    for (int c = 0; c < cols; ++c) {
        // unit-modulus column rotation so that R has a positive real diagonal
        const cd d = r(c, c);
        if (std::abs(d) > 0.0) q.col(c) *= d / std::abs(d);
    }

    SpreadingMatrix p;
    p.matrix = std::move(q);
    p.scheme = SpreadingScheme::Pdpss;
    p.eta = eta;
    p.raw_deviation = orthonormality_defect(raw);
    p.raw = std::move(raw);
    p.min_retained_eigenvalue = eig.values[cols - 1];
    return p;
}

ComplexVector despread(const SpreadingMatrix& p, const ComplexVector& received) {
    if (received.size() != p.matrix.rows()) {
        throw DimensionError("despread: received length does not match spreading rows");
    }
    return p.matrix.adjoint() * received;
}

}  // namespace isac
