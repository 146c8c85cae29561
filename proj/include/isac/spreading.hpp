#pragma once

#include "isac/waveform.hpp"

namespace isac {

/// Number of information columns for a band at utilization eta: floor(eta * band).
int spreading_columns(int band, double eta);

SpreadingMatrix identity_spreading(int band);

/// Keeps floor(eta * band) centered bins; of the d dropped bins, ceil(d/2) come
/// off the low edge and floor(d/2) off the high edge.
SpreadingMatrix guardband_selection(int band, double eta);

/// Periodic DPSS spreading for one user: top floor(eta * band) eigenvectors of
/// the in-band Dirichlet block, downsampled to the even rows, de-rotated by the
/// bin phase e^{-j pi g (N-1)/N}, then orthonormalized in column order.
SpreadingMatrix pdpss_spreading(const SubcarrierAllocation& alloc, int user, double eta);

/// P^H * received.
ComplexVector despread(const SpreadingMatrix& p, const ComplexVector& received);

}  // namespace isac
