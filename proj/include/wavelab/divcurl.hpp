#pragma once

#include <optional>

#include "wavelab/elliptic.hpp"
#include "wavelab/fields.hpp"
#include "wavelab/grid.hpp"
#include "wavelab/params.hpp"
#include "wavelab/strip.hpp"

namespace wavelab {

struct VorticityNotDivergenceFree : std::runtime_error {
  double violation;
  explicit VorticityNotDivergenceFree(double v)
      : std::runtime_error("input vorticity is not divergence-free, |div omega| = " +
                           std::to_string(v)),
        violation(v) {}
};

// Reconstructed strip velocity U^mu = (sqrt(mu) V, w) with its traces and the
// pieces it was assembled from.
struct DivCurlSolution {
  StripVec3 u_mu;
  StripField phi;       // periodic potential (surface trace = psi, zero-mean gauge)
  StripField a_stream;  // in-plane vector potential of the vortical part
  HField psi_tilde;     // solves Laplacian psi_tilde = omega|surf . N^mu
  Traces traces;        // traces of u_mu
  HVec v_bar;           // depth-averaged V
  Vec2 tangential_mean{0.0, 0.0};
  EllipticStats phi_stats, a_stats;
  double omega_div_norm = 0.0;
};

// Owns the two elliptic solvers (potential and vortical configurations) and
// optional warm starts for time stepping. A fresh solver with warm_start =
// false follows a fully deterministic path: identical inputs give bit-identical
// outputs.
class DivCurlSolver {
 public:
  explicit DivCurlSolver(const Grid& g);

  // enforce_divfree rejects inadmissible input vorticity (tol_div). Time
  // steppers disable it for their stage states, whose vorticity pairs with a
  // geometry that has moved by O(dt^2); the accepted-state divergence is
  // recorded by the run monitors instead.
  DivCurlSolution solve(const HField& zeta, const HField& b, const HField& psi,
                        const StripVec3& omega, Vec2 tangential_mean, const Params& p,
                        bool warm_start = false, bool enforce_divfree = true);

  const Grid& grid() const { return grid_; }

 private:
  Grid grid_;
  EllipticSolver phi_solver_;  // Dirichlet surface / conormal bottom
  EllipticSolver a_solver_;    // conormal surface / Dirichlet bottom
  std::optional<StripField> last_phi_, last_a_;
};

DivCurlSolution solve_divcurl(const HField& zeta, const HField& b, const HField& psi,
                              const StripVec3& omega, const Params& p, const Grid& g,
                              Vec2 tangential_mean = {0.0, 0.0});

// Potential-only problem: Laplacian phi = 0 in sigma coordinates with
// phi = psi at the surface and zero conormal flux at the bottom.
StripField solve_laplace(const HField& zeta, const HField& b, const HField& psi, const Params& p,
                         const Grid& g, EllipticStats* stats = nullptr);

HField psi_tilde_from_omega(const StripVec3& omega, const SigmaMap& m, const Grid& g);

// Max-norm residual of U|surf . N^mu + mu div(h Vbar); an exact identity of
// the continuous problem.
double flux_identity_check(const DivCurlSolution& sol, const SigmaMap& m, const Grid& g);

struct DivCurlResiduals {
  double curl;        // |curl^sigma U - mu omega|_inf
  double div;         // |div^sigma U|_inf
  double tangential;  // |U_par - (grad psi + perp-grad psi_tilde + mean)|_inf
  double bottom;      // |U_b . N_b|_inf
  double surface_curl_identity;  // |(curl U)|surf . N - mu perp-div U_par|_inf
  double bottom_curl_identity;   // bottom analogue with the bottom tangential part
};

DivCurlResiduals divcurl_residuals(const DivCurlSolution& sol, const HField& psi,
                                   const StripVec3& omega, const SigmaMap& m, const Grid& g);

// Diagnostic norm of the bottom-regularity datum |(1/frak_P)(omega_b . N_b)|_2.
double hb_datum_norm(const StripVec3& omega, const SigmaMap& m, const Grid& g);

// Leray-type correction: returns a divergence-free vorticity close to the
// input (potential subtraction plus removal of the mean-flux constant) and
// reports the divergence norm of the input.
StripVec3 project_divergence_free(const StripVec3& omega, const SigmaMap& m, const Grid& g,
                                  double* violation = nullptr);

}  // namespace wavelab
