#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "orlicz/bodies.hpp"
#include "orlicz/mixed_volumes.hpp"
#include "orlicz/orlicz_function.hpp"

namespace orlicz {

enum class Direction { Inf, Sup };
/// Which way the reported value bounds the true inf/sup.  Exact for closed forms
/// and degenerate limits.
enum class Side { UpperBound, LowerBound, Exact };

const char* to_string(Direction d);
const char* to_string(Side s);

struct OptimizerOptions {
  int restarts = 8;
  int max_iter = 5000;
  double tol = 1e-6;
  std::uint64_t seed = 0;
  int threads = 0;  // 0: ORLICZ_THREADS
};

struct OptimizerTrace {
  int iterations = 0;  // summed over restarts
  int restarts = 0;
  int best_restart = -1;
  double grad_norm = 0.0;  // relative, at the returned point
  std::vector<double> restart_values;
};

struct FunctionalResult {
  double value = 0.0;
  Direction direction = Direction::Inf;
  Side certified_side = Side::UpperBound;
  OptimizerTrace trace;
  std::vector<StarBody> star_witness;   // optimal L (affine)
  std::vector<ConvexBody> body_witness; // optimal Q in H-form (geominimal)
  bool degenerate = false;
  bool diverging = false;
  std::string note;
};

/// Side implied by the class of phi.
Direction direction_for(const OrliczFunction& phi);

/// inf / sup of n V_phi(K, vrad(L) L°) over star bodies L sampled on the grid.
/// `seed_Q` (a geominimal witness) is evaluated exactly as the candidate L = Q°.
FunctionalResult affine_orlicz(const ConvexBody& K, const OrliczFunction& phi, const SphereGrid& grid,
                               const OptimizerOptions& opts = {}, const ConvexBody* seed_Q = nullptr);

/// inf / sup of n V_phi(K, vrad(Q°) Q) over H-polytopes Q with normals at the
/// grid nodes (at the facet normals when K is a polytope).
FunctionalResult geominimal_orlicz(const ConvexBody& K, const OrliczFunction& phi, const SphereGrid& grid,
                                   const OptimizerOptions& opts = {});

/// n V_phi(K, vrad(Q°) Q) for a given Q, on the same discretization the
/// geominimal optimizer uses.
double geominimal_objective(const ConvexBody& K, const OrliczFunction& phi, const ConvexBody& Q,
                            const SphereGrid& grid);

/// int [h^{1-p} f]^{n/(n+p)} d sigma.
double lp_affine_closed_form(const ConvexBody& K, double p, const SphereGrid* grid = nullptr);

enum class Which { Affine, Geominimal };
const char* to_string(Which w);
/// as_p(K) or G~_p(K) from the Orlicz optimizers with phi = t^p.
FunctionalResult lp_reference(const ConvexBody& K, double p, Which which, const SphereGrid& grid,
                              const OptimizerOptions& opts = {});

/// n phi(vrad(E°)) |E|; balls are accepted as ellipsoids.
double ellipsoid_closed_form(const ConvexBody& E, const OrliczFunction& phi);

/// Two-body (n = 2) affine / geominimal functionals.
FunctionalResult affine_orlicz_multi(const std::vector<ConvexBody>& Ks, const std::vector<OrliczFunction>& phis,
                                     const SphereGrid& grid, const OptimizerOptions& opts = {});
FunctionalResult geominimal_orlicz_multi(const std::vector<ConvexBody>& Ks, const std::vector<OrliczFunction>& phis,
                                         const SphereGrid& grid, const OptimizerOptions& opts = {});

/// i-th mixed functional of (K, L).
FunctionalResult ith_mixed(const ConvexBody& K, const ConvexBody& L, const OrliczFunction& phi1,
                           const OrliczFunction& phi2, double i, Which which, const SphereGrid& grid,
                           const OptimizerOptions& opts = {});

/// The i-th mixed objective evaluated on fixed witnesses (L1, L2 star bodies for
/// affine; Q1, Q2 for geominimal), normalized as in the optimizer.
double ith_mixed_at(const ConvexBody& K, const ConvexBody& L, const OrliczFunction& phi1,
                    const OrliczFunction& phi2, double i, Which which, const FunctionalResult& witness,
                    const SphereGrid& grid);

}  // namespace orlicz
