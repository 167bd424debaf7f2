#pragma once

#include <cstdint>
#include <vector>

#include "wavelab/fields.hpp"
#include "wavelab/grid.hpp"
#include "wavelab/params.hpp"
#include "wavelab/strip.hpp"

// Test-only oracles, independent of the library's solve paths.
namespace wavelab::oracles {

// Second-order finite-difference solve of the flattened variable-coefficient
// Laplace problem (Dirichlet psi at z = 0, zero conormal flux at z = -1) on a
// uniform (nx_fd x nz_fd+1) grid, Richardson-extrapolated from grids h and
// h/2 for fourth-order accuracy. Returns values on the coarse grid nodes
// x_i = i*period/nx_fd, z_j = -1 + j/nz_fd (row-major, z fastest).
std::vector<double> fd_laplace_solve(const HField& zeta, const HField& b, const HField& psi,
                                     const Params& p, const Grid& g, int nx_fd, int nz_fd,
                                     bool richardson = true);

// Product of two horizontal fields via zero-padded transforms (alias-free).
HField padded_product(const HField& a, const HField& b, const Grid& g);

// Seeded band-limited random field with 1/k^2 coefficient decay.
HField random_smooth(const Grid& g, std::uint64_t seed, int kmax, double amp);

// Divergence-free random vorticity built from a stream potential, plus a
// smooth transverse component.
StripVec3 random_divfree_omega(const Grid& g, const SigmaMap& m, std::uint64_t seed, double amp);

}  // namespace wavelab::oracles
