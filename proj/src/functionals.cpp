#include "orlicz/functionals.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>

#include "optimizer.hpp"
#include "orlicz/errors.hpp"
#include "orlicz/numeric.hpp"

namespace orlicz {

using detail::Outcome;
using detail::Problem;
using detail::Slot;
using detail::State;

const char* to_string(Direction d) { return d == Direction::Inf ? "inf" : "sup"; }

const char* to_string(Side s) {
  switch (s) {
    case Side::UpperBound: return "upper_bound";
    case Side::LowerBound: return "lower_bound";
    case Side::Exact: return "exact";
  }
  return "?";
}

const char* to_string(Which w) { return w == Which::Affine ? "affine" : "geominimal"; }

Direction direction_for(const OrliczFunction& phi) {
  switch (phi.cls()) {
    case PhiClass::Phi: return Direction::Inf;
    case PhiClass::Psi: return Direction::Sup;
    case PhiClass::ConstantBoth: return Direction::Inf;
    case PhiClass::Neither: break;
  }
  fail(ErrorCode::UnclassifiedPhi, phi.name() + " is in neither Phi nor Psi");
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Side side_for(Direction d) { return d == Direction::Inf ? Side::UpperBound : Side::LowerBound; }

bool better(double a, double b, Direction d) { return d == Direction::Inf ? a < b : a > b; }

FunctionalResult constant_result(const ConvexBody& K, const OrliczFunction& phi) {
  FunctionalResult r;
  r.value = phi.raw(1.0) * K.dim() * volume(K);
  r.direction = Direction::Inf;
  r.certified_side = Side::Exact;
  r.note = "constant phi";
  return r;
}

// 2D polytope slots need the directions in counter-clockwise order.
void sort_ccw(KernelData& kd) {
  if (kd.dim != 2) return;
  const std::size_t m = kd.normals.size();
  std::vector<std::size_t> idx(m);
  std::iota(idx.begin(), idx.end(), 0);
  std::vector<double> ang(m);
  for (std::size_t i = 0; i < m; ++i) {
    ang[i] = std::atan2(kd.normals[i][1], kd.normals[i][0]);
    if (ang[i] < 0.0) ang[i] += 2.0 * kPi;
  }
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return ang[a] < ang[b]; });
  if (std::is_sorted(idx.begin(), idx.end())) return;
  auto perm = [&](auto& v) {
    if (v.size() != m) return;
    auto c = v;
    for (std::size_t i = 0; i < m; ++i) v[i] = c[idx[i]];
  };
  perm(kd.normals);
  perm(kd.hK);
  perm(kd.mass);
  perm(kd.f);
}

Slot make_slot(Slot::Type type, const KernelData& kd, const OrliczFunction& phi, double alpha, bool density_C) {
  Slot s;
  s.type = type;
  s.n = kd.dim;
  s.phi = &phi;
  s.alpha = alpha;
  s.dirs = kd.normals;
  const std::size_t m = kd.normals.size();
  s.C.resize(m);
  s.log_hK.resize(m);
  s.nu = kd.mass;
  for (std::size_t i = 0; i < m; ++i) {
    s.C[i] = density_C ? kd.hK[i] * kd.f[i] : kd.hK[i] * kd.mass[i];
    s.log_hK[i] = std::log(kd.hK[i]);
  }
  if (type == Slot::Type::Star) s.w = kd.grid->weights();
  if (type == Slot::Type::Polytope && !kd.atomic) {
    const double spacing = std::pow(kd.dim * omega(kd.dim) / m, 1.0 / (kd.dim - 1));
    const double sigma = std::max(0.1, 2.5 * spacing);
    s.smoother = detail::gaussian_smoother(s.dirs, sigma);
  }
  s.unbounded = !std::isfinite(phi.supremum());
  return s;
}

std::vector<double> start_for(const Slot& s, int r, std::uint64_t seed, int salt) {
  const std::size_t m = s.dirs.size();
  if (r == 0) return std::vector<double>(m, 0.0);
  if (r == 1) {
    std::vector<double> y(m);
    // L = K° for star slots, Q = K for polytope slots
    for (std::size_t i = 0; i < m; ++i) y[i] = s.type == Slot::Type::Star ? -s.log_hK[i] : s.log_hK[i];
    return y;
  }
  return detail::random_profile(s.dirs, seed, r + 1000 * salt);
}

struct Run {
  std::vector<Outcome> outs;
  int best = -1;
};

Run run_restarts(const Problem& pb, Direction dir, const OptimizerOptions& opts) {
  const int R = std::max(1, opts.restarts);
  std::vector<State> starts(R);
  for (int r = 0; r < R; ++r)
    for (std::size_t k = 0; k < pb.slots.size(); ++k)
      starts[r].push_back(start_for(pb.slots[k], r, opts.seed, static_cast<int>(k)));
  Run run;
  run.outs = detail::optimize_all(pb, starts, opts);
  for (int r = 0; r < R; ++r) {
    if (!std::isfinite(run.outs[r].value) && !run.outs[r].diverging) continue;
    if (run.best < 0 || better(run.outs[r].value, run.outs[run.best].value, dir)) run.best = r;
  }
  if (run.best < 0) fail(ErrorCode::RangeError, "no restart reached a feasible point");
  return run;
}

FunctionalResult finish(const Run& run, Direction dir) {
  FunctionalResult res;
  res.direction = dir;
  res.certified_side = side_for(dir);
  res.trace.restarts = static_cast<int>(run.outs.size());
  res.trace.best_restart = run.best;
  for (const auto& o : run.outs) {
    res.trace.iterations += o.iterations;
    res.trace.restart_values.push_back(o.value);
    if (o.diverging) res.diverging = true;
  }
  const Outcome& b = run.outs[run.best];
  res.trace.grad_norm = b.grad_norm;
  res.value = b.value;
  if (res.diverging) {
    res.value = kInf;
    res.note = "supremum unbounded";
  }
  return res;
}

StarBody star_from(const std::vector<double>& y, const SphereGrid& grid) {
  std::vector<double> rho(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) rho[i] = std::exp(y[i]);
  return StarBody(grid, std::move(rho));
}

ConvexBody body_from(const Slot& s, const std::vector<double>& y) {
  std::vector<double> h(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) h[i] = std::exp(y[i]);
  return ConvexBody::hpolytope(s.dirs, std::move(h));
}

void require_classified(const OrliczFunction& phi) {
  if (phi.cls() == PhiClass::Neither) fail(ErrorCode::UnclassifiedPhi, phi.name() + " is in neither Phi nor Psi");
}

Direction common_direction(const std::vector<const OrliczFunction*>& phis) {
  bool has_phi = false, has_psi = false;
  for (const auto* p : phis) {
    require_classified(*p);
    has_phi |= p->cls() == PhiClass::Phi;
    has_psi |= p->cls() == PhiClass::Psi;
  }
  if (has_phi && has_psi) fail(ErrorCode::MixedClassConflict, "functions mix the Phi and Psi classes");
  return has_psi ? Direction::Sup : Direction::Inf;
}

KernelData density_kernel(const ConvexBody& K, const SphereGrid& grid) {
  if (K.dim() != 2) fail(ErrorCode::UnsupportedDimension, "mixed functionals are implemented for n=2");
  KernelData kd = kernel_data(K, &grid);
  if (kd.atomic) fail(ErrorCode::MissingCurvature, "mixed functionals need bodies with a curvature function");
  return kd;
}

}  // namespace

double geominimal_objective(const ConvexBody& K, const OrliczFunction& phi, const ConvexBody& Q,
                            const SphereGrid& grid) {
  KernelData kd = kernel_data(K, &grid);
  const double vq = vrad(polar(Q));
  std::vector<double> hQ = support_at(Q, kd);
  std::vector<double> ratio(hQ.size());
  for (std::size_t i = 0; i < hQ.size(); ++i) ratio[i] = vq * hQ[i] / kd.hK[i];
  return K.dim() * v_phi_kernel(kd, ratio, phi).value;
}

FunctionalResult affine_orlicz(const ConvexBody& K, const OrliczFunction& phi, const SphereGrid& grid,
                               const OptimizerOptions& opts, const ConvexBody* seed_Q) {
  require_classified(phi);
  if (K.dim() != grid.dim()) fail(ErrorCode::DimensionMismatch, "body and grid differ in dimension");
  if (phi.cls() == PhiClass::ConstantBoth) return constant_result(K, phi);
  const Direction dir = direction_for(phi);
  KernelData kd = kernel_data(K, &grid);
  if (kd.atomic) {
    // Radial values at finitely many atoms are free, so the argument of phi
    // at each atom sweeps (0, inf).
    FunctionalResult r;
    r.direction = dir;
    r.certified_side = Side::Exact;
    r.degenerate = true;
    const double nK = K.dim() * volume(K);
    r.value = nK * (dir == Direction::Inf ? phi.infimum() : phi.supremum());
    r.note = "atomic surface area measure";
    if (!std::isfinite(r.value)) r.diverging = true;
    return r;
  }
  Problem pb;
  pb.sign = dir == Direction::Inf ? 1 : -1;
  pb.W.assign(kd.normals.size(), 1.0);
  pb.slots.push_back(make_slot(Slot::Type::Star, kd, phi, 1.0, false));
  Run run = run_restarts(pb, dir, opts);
  FunctionalResult res = finish(run, dir);
  res.star_witness.push_back(star_from(run.outs[run.best].y[0], grid));
  if (seed_Q && !res.diverging) {
    double v = geominimal_objective(K, phi, *seed_Q, grid);
    if (!better(res.value, v, dir) && v != res.value) {
      res.value = v;
      std::vector<double> rho = radial_at(polar(*seed_Q), kd);
      double s = 0.0;
      std::vector<double> t(rho.size());
      for (std::size_t i = 0; i < rho.size(); ++i) t[i] = std::pow(rho[i], K.dim()) * grid.weight(i);
      s = std::pow(pairwise_sum(t) / K.dim() / omega(K.dim()), 1.0 / K.dim());
      for (double& x : rho) x /= s;
      res.star_witness[0] = StarBody(grid, std::move(rho));
      res.trace.best_restart = res.trace.restarts;
      res.note = "seeded at the geominimal witness";
    }
  }
  return res;
}

FunctionalResult geominimal_orlicz(const ConvexBody& K, const OrliczFunction& phi, const SphereGrid& grid,
                                   const OptimizerOptions& opts) {
  require_classified(phi);
  if (K.dim() > 3) fail(ErrorCode::UnsupportedDimension, "geominimal functional supports n <= 3");
  if (K.dim() != grid.dim()) fail(ErrorCode::DimensionMismatch, "body and grid differ in dimension");
  if (phi.cls() == PhiClass::ConstantBoth) return constant_result(K, phi);
  const Direction dir = direction_for(phi);
  KernelData kd = kernel_data(K, &grid);
  sort_ccw(kd);
  Problem pb;
  pb.sign = dir == Direction::Inf ? 1 : -1;
  pb.W.assign(kd.normals.size(), 1.0);
  pb.slots.push_back(make_slot(Slot::Type::Polytope, kd, phi, 1.0, false));
  Run run = run_restarts(pb, dir, opts);
  FunctionalResult res = finish(run, dir);
  if (res.diverging) return res;  // no meaningful witness
  std::optional<ConvexBody> Qw;
  try {
    Qw = body_from(pb.slots[0], run.outs[run.best].y[0]);
  } catch (const Error& e) {
    // Q collapsed on the way up: the sup is approached by degenerate Q
    if (dir != Direction::Sup || (e.code() != ErrorCode::InvalidBody && e.code() != ErrorCode::OriginNotInterior)) throw;
    res.diverging = true;
    res.value = kInf;
    res.note = "supremum unbounded (witness collapsed)";
    return res;
  }
  ConvexBody Q = std::move(*Qw);
  res.value = geominimal_objective(K, phi, Q, grid);
  res.body_witness.push_back(std::move(Q));
  return res;
}

double lp_affine_closed_form(const ConvexBody& K, double p, const SphereGrid* grid) {
  const int n = K.dim();
  if (p == -n) fail(ErrorCode::PEqualsMinusN, "p = -n is excluded");
  KernelData kd = kernel_data(K, grid);
  if (kd.atomic || kd.f.empty()) fail(ErrorCode::MissingCurvature, "closed form needs a curvature function");
  const double e = n / (n + p);
  std::vector<double> v(kd.f.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = std::pow(std::pow(kd.hK[i], 1.0 - p) * kd.f[i], e);
  return integrate(*kd.grid, v);
}

FunctionalResult lp_reference(const ConvexBody& K, double p, Which which, const SphereGrid& grid,
                              const OptimizerOptions& opts) {
  const int n = K.dim();
  if (p == -n) fail(ErrorCode::PEqualsMinusN, "p = -n is excluded");
  OrliczFunction phi = OrliczFunction::power(p, n);
  FunctionalResult r = which == Which::Affine ? affine_orlicz(K, phi, grid, opts) : geominimal_orlicz(K, phi, grid, opts);
  const double e = n / (n + p);
  r.value = std::pow(std::pow(n * omega(n), p / n) * r.value, e);
  if (e < 0.0 && r.certified_side != Side::Exact)
    r.certified_side = r.certified_side == Side::UpperBound ? Side::LowerBound : Side::UpperBound;
  return r;
}

double ellipsoid_closed_form(const ConvexBody& E, const OrliczFunction& phi) {
  if (E.kind() != BodyKind::Ellipsoid && E.kind() != BodyKind::Ball)
    fail(ErrorCode::InvalidBody, "closed form needs an ellipsoid");
  require_classified(phi);
  return E.dim() * phi(vrad(polar(E))) * volume(E);
}

namespace {

struct MultiSetup {
  std::vector<KernelData> kds;
  Problem pb;
  Direction dir = Direction::Inf;
};

MultiSetup multi_setup(const std::vector<const ConvexBody*>& Ks, const std::vector<const OrliczFunction*>& phis,
                       const std::vector<double>& alpha, Slot::Type type, const SphereGrid& grid) {
  if (Ks.size() != phis.size() || Ks.empty()) fail(ErrorCode::DimensionMismatch, "bodies and functions differ in count");
  MultiSetup ms;
  ms.dir = common_direction(phis);
  ms.pb.sign = ms.dir == Direction::Inf ? 1 : -1;
  for (const auto* K : Ks) {
    ms.kds.push_back(density_kernel(*K, grid));
    if (type == Slot::Type::Polytope) sort_ccw(ms.kds.back());
  }
  const auto& kd0 = ms.kds[0];
  ms.pb.W.resize(kd0.normals.size());
  // the ccw sort permutes all kernels identically, so weights follow mass/f
  for (std::size_t i = 0; i < ms.pb.W.size(); ++i) ms.pb.W[i] = kd0.mass[i] / kd0.f[i];
  for (std::size_t k = 0; k < Ks.size(); ++k) {
    Slot s = make_slot(type, ms.kds[k], *phis[k], alpha[k], true);
    s.nu = ms.pb.W;
    ms.pb.slots.push_back(std::move(s));
  }
  return ms;
}

FunctionalResult run_multi(MultiSetup& ms, const SphereGrid& grid, const OptimizerOptions& opts) {
  Run run = run_restarts(ms.pb, ms.dir, opts);
  FunctionalResult res = finish(run, ms.dir);
  const auto& y = run.outs[run.best].y;
  if (res.diverging) return res;
  for (std::size_t k = 0; k < ms.pb.slots.size(); ++k) {
    const Slot& s = ms.pb.slots[k];
    if (s.type == Slot::Type::Star) {
      res.star_witness.push_back(star_from(y[k], grid));
      continue;
    }
    try {
      res.body_witness.push_back(body_from(s, y[k]));
    } catch (const Error& e) {
      if (ms.dir != Direction::Sup || (e.code() != ErrorCode::InvalidBody && e.code() != ErrorCode::OriginNotInterior)) throw;
      res.body_witness.clear();
      res.star_witness.clear();
      res.diverging = true;
      res.value = kInf;
      res.note = "supremum unbounded (witness collapsed)";
      return res;
    }
  }
  return res;
}

std::vector<double> ith_alpha(int n, double i) { return {(n - i) / n, i / n}; }

}  // namespace

FunctionalResult affine_orlicz_multi(const std::vector<ConvexBody>& Ks, const std::vector<OrliczFunction>& phis,
                                     const SphereGrid& grid, const OptimizerOptions& opts) {
  std::vector<const ConvexBody*> kp;
  std::vector<const OrliczFunction*> pp;
  for (const auto& K : Ks) kp.push_back(&K);
  for (const auto& p : phis) pp.push_back(&p);
  std::vector<double> alpha(Ks.size(), 1.0 / (Ks.empty() ? 1 : Ks[0].dim()));
  auto ms = multi_setup(kp, pp, alpha, Slot::Type::Star, grid);
  return run_multi(ms, grid, opts);
}

FunctionalResult geominimal_orlicz_multi(const std::vector<ConvexBody>& Ks, const std::vector<OrliczFunction>& phis,
                                         const SphereGrid& grid, const OptimizerOptions& opts) {
  std::vector<const ConvexBody*> kp;
  std::vector<const OrliczFunction*> pp;
  for (const auto& K : Ks) kp.push_back(&K);
  for (const auto& p : phis) pp.push_back(&p);
  std::vector<double> alpha(Ks.size(), 1.0 / (Ks.empty() ? 1 : Ks[0].dim()));
  auto ms = multi_setup(kp, pp, alpha, Slot::Type::Polytope, grid);
  return run_multi(ms, grid, opts);
}

FunctionalResult ith_mixed(const ConvexBody& K, const ConvexBody& L, const OrliczFunction& phi1,
                           const OrliczFunction& phi2, double i, Which which, const SphereGrid& grid,
                           const OptimizerOptions& opts) {
  auto ms = multi_setup({&K, &L}, {&phi1, &phi2}, ith_alpha(K.dim(), i),
                        which == Which::Affine ? Slot::Type::Star : Slot::Type::Polytope, grid);
  return run_multi(ms, grid, opts);
}

double ith_mixed_at(const ConvexBody& K, const ConvexBody& L, const OrliczFunction& phi1,
                    const OrliczFunction& phi2, double i, Which which, const FunctionalResult& witness,
                    const SphereGrid& grid) {
  const bool affine = which == Which::Affine;
  auto ms = multi_setup({&K, &L}, {&phi1, &phi2}, ith_alpha(K.dim(), i),
                        affine ? Slot::Type::Star : Slot::Type::Polytope, grid);
  if ((affine ? witness.star_witness.size() : witness.body_witness.size()) != 2)
    fail(ErrorCode::DimensionMismatch, "witness must hold two bodies");
  State y(2);
  for (int k = 0; k < 2; ++k) {
    const Slot& s = ms.pb.slots[k];
    std::vector<double> v;
    if (affine) {
      v = radial_at(witness.star_witness[k], ms.kds[k]);
    } else {
      v = support_values(witness.body_witness[k], s.dirs);
    }
    for (double& x : v) x = std::log(x);
    y[k] = std::move(v);
  }
  auto ev = detail::evaluate(ms.pb, y, false);
  if (!ev.feasible) fail(ErrorCode::RangeError, "witness is not feasible");
  return ev.J;
}

}  // namespace orlicz
