// Schwarz symmetrization (radially decreasing rearrangement of |u|).
#pragma once

#include "fracp/planar_grid.hpp"
#include "fracp/radial_profile.hpp"

#include <vector>

namespace fracp {

// Exact annulus volumes of the Voronoi shells around each node, times the
// unit-sphere area: mu_i = |S^{N-1}|/N * (beta_{i+1}^N - beta_i^N). These are
// the discrete measures used for rearrangement and the L^2 descent metric.
std::vector<double> node_volumes(const RadialProfile& u, int N);

// Decreasing rearrangement of |f| on the plane. Every grid cell carries equal
// area, so the transport is an exact permutation of cell values onto
// equal-area annuli; the result preserves all discrete L^p masses exactly.
RadialProfile schwarz_symmetrize(const PlanarGrid& f);

// Decreasing rearrangement of |u| on u's own node set, with superlevel-set
// measures taken in the node_volumes(u, N) weighting. Nodal output values are
// p_preserve-power means of the exact layer cake over each node's shell, so
// the discrete integral of |u|^p_preserve is transported exactly; level sets
// match to one-shell resolution and the output is nonincreasing. Shells
// covered by a single layer copy the value without rounding.
RadialProfile symmetrize_radial(const RadialProfile& u, int N,
                                double p_preserve = 1.0);

}  // namespace fracp
