#pragma once

#include <memory>

#include "wavelab/fields.hpp"
#include "wavelab/grid.hpp"
#include "wavelab/strip.hpp"

namespace wavelab {

inline constexpr double tol_ell = 1e-9;  // relative residual of elliptic solves
inline constexpr double tol_div = 1e-8;  // admissible divergence of input vorticity

enum class BcKind { dirichlet, conormal };

struct EllipticStats {
  int iterations = 0;
  double rel_residual = 0.0;
  bool converged = false;
  bool used_dense_fallback = false;
};

struct EllipticFailure : std::runtime_error {
  EllipticStats stats;
  explicit EllipticFailure(const EllipticStats& s)
      : std::runtime_error("elliptic solve did not converge, relative residual = " +
                           std::to_string(s.rel_residual)),
        stats(s) {}
};

// Solves nabla^mu . P(Sigma) nabla^mu u = f on the strip with the surface and
// bottom collocation rows replaced by the boundary conditions: a Dirichlet
// value or the conormal flux e_z . P(Sigma) nabla^mu u.
//
// The iteration is GMRES preconditioned by the horizontally averaged
// geometry, which factors into independent Chebyshev solves per Fourier mode
// and is exact when zeta and b are flat. The preconditioner is rebuilt when
// the averaged geometry moves by more than 10%. If GMRES stalls the solver
// falls back to a dense LU of the full collocation system (nx*nz <= 16384).
class EllipticSolver {
 public:
  EllipticSolver(const Grid& g, BcKind top, BcKind bottom);
  ~EllipticSolver();
  EllipticSolver(EllipticSolver&&) noexcept;
  EllipticSolver& operator=(EllipticSolver&&) noexcept;

  StripField solve(const SigmaMap& m, const StripField& f, const HField& top_data,
                   const HField& bottom_data, const StripField* initial_guess = nullptr,
                   EllipticStats* stats = nullptr);

  // Dense-LU path (the GMRES fallback), callable directly; nx*nz <= 16384.
  StripField solve_dense(const SigmaMap& m, const StripField& f, const HField& top_data,
                         const HField& bottom_data, EllipticStats* stats = nullptr);

  // Operator in residual form: PDE rows in the interior, boundary-condition
  // rows at the surface and bottom.
  StripField apply(const SigmaMap& m, const StripField& u) const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace wavelab
