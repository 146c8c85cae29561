#include "isac/waveform.hpp"

#include <cmath>
#include <span>
#include <vector>

#include "isac/error.hpp"
#include "isac/fft.hpp"

namespace isac {

std::string_view to_string(Modulation m) {
    switch (m) {
        case Modulation::QPSK: return "qpsk";
        case Modulation::QAM16: return "16qam";
        case Modulation::QAM64: return "64qam";
    }
    throw ContractError("unsupported modulation");
}

Modulation parse_modulation(std::string_view name) {
    if (name == "qpsk") return Modulation::QPSK;
    if (name == "16qam") return Modulation::QAM16;
    if (name == "64qam") return Modulation::QAM64;
    throw ContractError("unsupported modulation '" + std::string(name) + "'");
}

Constellation make_constellation(Modulation kind) {
    int side = 0;
    switch (kind) {
        case Modulation::QPSK: side = 2; break;
        case Modulation::QAM16: side = 4; break;
        case Modulation::QAM64: side = 8; break;
        default: throw ContractError("unsupported modulation");
    }
    Constellation c{kind, ComplexVector(side * side), 0.0};
    for (int i = 0; i < side; ++i) {
        for (int q = 0; q < side; ++q) {
            c.points[i * side + q] = cd(2.0 * i - (side - 1), 2.0 * q - (side - 1));
        }
    }
    c.points /= std::sqrt(c.points.squaredNorm() / static_cast<double>(c.points.size()));

    double m2 = 0.0;
    double m4 = 0.0;
    for (const cd& s : c.points) {
        m2 += std::norm(s);
        m4 += std::norm(s) * std::norm(s);
    }
    m2 /= static_cast<double>(c.points.size());
    m4 /= static_cast<double>(c.points.size());
    c.mu4 = m4 / (m2 * m2);
    return c;
}

ComplexVector draw_symbols(RngStream& stream, const Constellation& c, int count) {
    if (count < 0) throw DimensionError("draw_symbols: negative count");
    ComplexVector s(count);
    const auto size = static_cast<std::uint64_t>(c.points.size());
    for (int i = 0; i < count; ++i) {
        s[i] = c.points[static_cast<Eigen::Index>(stream.uniform_index(size))];
    }
    return s;
}

SubcarrierAllocation::SubcarrierAllocation(int n, int l) : n_(n), l_(l) {
    if (n < 2) throw DimensionError("allocation: N must be at least 2");
    if (l <= 0 || l >= n) throw DimensionError("allocation: need 0 < L < N");
}

int SubcarrierAllocation::band(int user) const {
    if (user == 1) return l_;
    if (user == 2) return n_ - l_;
    throw ContractError("allocation: user must be 1 or 2");
}

int SubcarrierAllocation::first_bin(int user) const {
    if (user == 1) return 0;
    if (user == 2) return l_;
    throw ContractError("allocation: user must be 1 or 2");
}

std::string_view to_string(SpreadingScheme s) {
    switch (s) {
        case SpreadingScheme::Identity: return "ofdm-identity";
        case SpreadingScheme::Guardband: return "ofdm-guardband";
        case SpreadingScheme::Pdpss: return "pdpss";
    }
    throw ContractError("unsupported spreading scheme");
}

SpreadingScheme parse_spreading_scheme(std::string_view name) {
    if (name == "ofdm-identity") return SpreadingScheme::Identity;
    if (name == "ofdm-guardband") return SpreadingScheme::Guardband;
    if (name == "pdpss") return SpreadingScheme::Pdpss;
    throw ContractError("unsupported spreading scheme '" + std::string(name) + "'");
}

ComplexVector ofdm_modulate(const SubcarrierAllocation& alloc, const SpreadingMatrix& p1,
                            const ComplexVector& s1, const SpreadingMatrix& p2,
                            const ComplexVector& s2) {
    if (p1.band() != alloc.band(1) || p2.band() != alloc.band(2)) {
        throw DimensionError("ofdm_modulate: spreading band does not match allocation");
    }
    if (s1.size() != p1.matrix.cols() || s2.size() != p2.matrix.cols()) {
        throw DimensionError("ofdm_modulate: symbol count does not match spreading columns");
    }
    const int n = alloc.n();
    ComplexVector x(n);
    x.head(alloc.l()) = p1.matrix * s1;
    x.tail(n - alloc.l()) = p2.matrix * s2;
    fft_backward(std::span(x.data(), static_cast<std::size_t>(n)));
    x /= std::sqrt(static_cast<double>(n));
    return x;
}

ComplexMatrix dirichlet_kernel_matrix(int n) {
    if (n < 2) throw DimensionError("dirichlet_kernel_matrix: N must be at least 2");
    const int size = 2 * n;
    std::vector<double> row(static_cast<std::size_t>(size));
    row[0] = n;
    for (int d = 1; d < size; ++d) {
        // sin(pi d / 2) is exactly 0 or +-1
        if (d % 2 == 0) {
            row[static_cast<std::size_t>(d)] = 0.0;
        } else {
            const double num = (d % 4 == 1) ? 1.0 : -1.0;
            row[static_cast<std::size_t>(d)] = num / std::sin(kPi * d / size);
        }
    }
    ComplexMatrix b(size, size);
    for (int k = 0; k < size; ++k) {
        for (int j = 0; j < size; ++j) {
            b(k, j) = row[static_cast<std::size_t>(std::abs(k - j))];
        }
    }
    return b;
}

BandSubmatrices band_submatrices(const ComplexMatrix& b, const SubcarrierAllocation& alloc) {
    const int n = alloc.n();
    const int l = alloc.l();
    if (b.rows() != 2 * n || b.cols() != 2 * n) {
        throw DimensionError("band_submatrices: kernel size does not match allocation");
    }
    BandSubmatrices out;
    out.b1 = b.middleCols(0, 2 * l - 1);
    out.b2 = b.middleCols(2 * l, 2 * (n - l) - 1);
    out.b1_in = out.b1.topRows(2 * l - 1);
    out.b1_out = out.b1.bottomRows(2 * (n - l) + 1);
    out.b2_in = out.b2.middleRows(2 * l, 2 * (n - l) - 1);
    out.b2_out = out.b2.topRows(2 * l + 1);
    return out;
}

namespace {

ComplexMatrix definitional_leakage(const SubcarrierAllocation& alloc, int user,
                                   const ComplexMatrix& p) {
    const int n = alloc.n();
    const int first = alloc.first_bin(user);
    const double scale = 1.0 / (std::sqrt(static_cast<double>(n)) * std::sqrt(2.0 * n));
    ComplexMatrix w = ComplexMatrix::Zero(2 * n, p.cols());
    ComplexVector buf(2 * n);
    for (Eigen::Index c = 0; c < p.cols(); ++c) {
        buf.setZero();
        buf.segment(first, p.rows()) = p.col(c);
        fft_backward(std::span(buf.data(), static_cast<std::size_t>(n)));
        buf.tail(n).setZero();
        fft_forward(std::span(buf.data(), static_cast<std::size_t>(2 * n)));
        w.col(c) = buf * scale;
    }
    return w;
}

}  // namespace

ComplexMatrix factored_leakage_operator(const SubcarrierAllocation& alloc, int user,
                                        const ComplexMatrix& p) {
    const int n = alloc.n();
    const int first = alloc.first_bin(user);
    const int band = alloc.band(user);
    if (p.rows() != band) throw DimensionError("leakage operator: spreading band mismatch");

    const ComplexMatrix b = dirichlet_kernel_matrix(n);
    ComplexMatrix upsampled(2 * n, band);
    for (int l = 0; l < band; ++l) {
        const int g = first + l;
        const cd right = std::polar(1.0, kPi * g * (n - 1) / n);
        upsampled.col(l) = b.col(2 * g) * right;
    }
    for (int r = 0; r < 2 * n; ++r) {
        upsampled.row(r) *= std::polar(1.0, -kPi * r * (n - 1) / (2.0 * n));
    }
    const double c = 1.0 / (std::sqrt(static_cast<double>(n)) * std::sqrt(2.0 * n));
    return c * upsampled * p;
}

LeakageOperator build_leakage_operator(const SubcarrierAllocation& alloc, int user,
                                       const SpreadingMatrix& p) {
    if (p.band() != alloc.band(user)) {
        throw DimensionError("build_leakage_operator: spreading band does not match user band");
    }
    LeakageOperator op;
    op.user = user;
    op.n = alloc.n();
    op.l = alloc.l();
    op.matrix = definitional_leakage(alloc, user, p.matrix);

    const ComplexMatrix f = factored_leakage_operator(alloc, user, p.matrix);
    const double denom = f.col(0).squaredNorm();
    const cd fit = denom > 0.0 ? f.col(0).dot(op.matrix.col(0)) / denom : cd(1.0);
    const double ref = op.matrix.norm();
    op.factored_error = ref > 0.0 ? (fit * f - op.matrix).norm() / ref : 0.0;
    if (op.factored_error > 1e-9) {
        throw ConsistencyError("build_leakage_operator: factored form disagrees with definition");
    }
    return op;
}

}  // namespace isac
