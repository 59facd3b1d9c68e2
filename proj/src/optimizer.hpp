#pragma once

// Shape optimizer shared by the affine / geominimal functionals.
//
// Objective  J = sum_i W_i prod_k (phi_k(a_ki) C_ki)^{alpha_k}
//   star slot:     a_ki = vrad(L_k) / (rho_ki h_ki),   y = log rho
//   polytope slot: a_ki = vrad(Q_k°) h_Qki / h_ki,     y = log h_Q
// Both are invariant under y -> y + c, so every iterate is renormalized.

#include <vector>

#include "orlicz/functionals.hpp"

namespace orlicz::detail {

struct Slot {
  enum class Type { Star, Polytope } type = Type::Star;
  int n = 2;
  const OrliczFunction* phi = nullptr;
  double alpha = 1.0;
  std::vector<Vec> dirs;
  std::vector<double> C;
  std::vector<double> log_hK;
  std::vector<double> nu;  // preconditioner / quadrature measure
  std::vector<double> w;   // star: quadrature weights of |L|
  // Optional sparse smoothing of the search direction (symmetric Gaussian
  // kernel); without it a fine polytope slot zigzags against the tightening.
  std::vector<std::vector<std::pair<int, double>>> smoother;
  bool unbounded = false;  // sup phi = inf: runaway iterates mean divergence
};

struct Problem {
  std::vector<Slot> slots;
  std::vector<double> W;
  int sign = 1;  // +1 inf, -1 sup
};

using State = std::vector<std::vector<double>>;

struct Evaluation {
  double J = 0.0;
  bool feasible = false;
  std::vector<std::vector<double>> grad;  // per slot
};

/// Tightens (polytope slots) and renormalizes y in place, then evaluates.
Evaluation evaluate(const Problem& pb, State& y, bool with_grad);

struct Outcome {
  double value = 0.0;
  State y;
  int iterations = 0;
  double grad_norm = 0.0;
  bool diverging = false;
};

Outcome optimize(const Problem& pb, State y0, const OptimizerOptions& opts);

/// Runs every start (possibly in parallel) and picks the best by value, then
/// lowest index.
std::vector<Outcome> optimize_all(const Problem& pb, const std::vector<State>& starts, const OptimizerOptions& opts);

/// Gaussian kernel in chordal distance, width sigma (radians).
std::vector<std::vector<std::pair<int, double>>> gaussian_smoother(const std::vector<Vec>& dirs, double sigma);

/// Smooth random log-profile y(u) = s (u^T A u + b^T u), centred.
std::vector<double> random_profile(const std::vector<Vec>& dirs, std::uint64_t seed, int index);

}  // namespace orlicz::detail
