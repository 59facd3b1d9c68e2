#include "orlicz/mixed_volumes.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "orlicz/errors.hpp"
#include "orlicz/numeric.hpp"

namespace orlicz {

namespace {

bool on_grid(const SmoothSampled* s, const KernelData& kd) { return s && kd.grid && s->grid.same_as(*kd.grid); }

}  // namespace

KernelData kernel_data(const ConvexBody& K, const SphereGrid* grid) {
  KernelData kd;
  kd.dim = K.dim();
  SurfaceAreaMeasure S = surface_area_measure(K, grid);
  kd.atomic = S.kind == SurfaceAreaMeasure::Kind::Atomic;
  kd.normals = std::move(S.normals);
  kd.mass = std::move(S.mass);
  kd.f = std::move(S.f);
  kd.grid = std::move(S.grid);
  if (const auto* s = K.as<SmoothSampled>()) kd.hK = s->h;
  else kd.hK = support_values(K, kd.normals);
  if (kd.atomic) kd.provenance = "atoms:" + std::to_string(kd.normals.size());
  else kd.provenance = "grid:" + std::to_string(kd.dim) + ":" + std::to_string(kd.normals.size());
  return kd;
}

std::vector<double> support_at(const ConvexBody& Q, const KernelData& kd) {
  if (Q.dim() != kd.dim) fail(ErrorCode::DimensionMismatch, "bodies differ in dimension");
  if (const auto* s = Q.as<SmoothSampled>(); on_grid(s, kd)) return s->h;
  return support_values(Q, kd.normals);
}

std::vector<double> radial_at(const ConvexBody& L, const KernelData& kd) {
  if (L.dim() != kd.dim) fail(ErrorCode::DimensionMismatch, "bodies differ in dimension");
  std::vector<double> r(kd.normals.size());
  for (std::size_t j = 0; j < r.size(); ++j) r[j] = radial(L, kd.normals[j]);
  return r;
}

std::vector<double> radial_at(const StarBody& L, const KernelData& kd) {
  if (L.grid.dim() != kd.dim) fail(ErrorCode::DimensionMismatch, "bodies differ in dimension");
  if (kd.grid && L.grid.same_as(*kd.grid)) return L.rho;
  std::vector<double> r(kd.normals.size());
  for (std::size_t j = 0; j < r.size(); ++j) r[j] = radial(L, kd.normals[j]);
  return r;
}

MixedVolumeResult v_phi_kernel(const KernelData& kd, const std::vector<double>& ratio, const OrliczFunction& phi) {
  if (ratio.size() != kd.normals.size()) fail(ErrorCode::DimensionMismatch, "argument count differs from measure");
  std::vector<double> terms(ratio.size());
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (std::size_t j = 0; j < ratio.size(); ++j) {
    double g = phi(ratio[j]) * kd.hK[j];
    lo = std::min(lo, g);
    hi = std::max(hi, g);
    terms[j] = g * kd.mass[j];
  }
  MixedVolumeResult r;
  r.value = pairwise_sum(terms) / kd.dim;
  r.integrand_min = lo;
  r.integrand_max = hi;
  r.provenance = kd.provenance;
  if (!(r.value > 0.0) || !std::isfinite(r.value)) fail(ErrorCode::RangeError, "mixed volume is not finite positive");
  return r;
}

MixedVolumeResult v_phi(const ConvexBody& K, const ConvexBody& Q, const OrliczFunction& phi, const SphereGrid* grid) {
  auto kd = kernel_data(K, grid);
  auto hQ = support_at(Q, kd);
  for (std::size_t j = 0; j < hQ.size(); ++j) hQ[j] /= kd.hK[j];
  return v_phi_kernel(kd, hQ, phi);
}

MixedVolumeResult v_phi_polar(const ConvexBody& K, const StarBody& L, const OrliczFunction& phi,
                              const SphereGrid* grid) {
  auto kd = kernel_data(K, grid);
  auto r = radial_at(L, kd);
  for (std::size_t j = 0; j < r.size(); ++j) r[j] = 1.0 / (r[j] * kd.hK[j]);
  return v_phi_kernel(kd, r, phi);
}

MixedVolumeResult v_phi_polar(const ConvexBody& K, const ConvexBody& L, const OrliczFunction& phi,
                              const SphereGrid* grid) {
  auto kd = kernel_data(K, grid);
  auto r = radial_at(L, kd);
  for (std::size_t j = 0; j < r.size(); ++j) r[j] = 1.0 / (r[j] * kd.hK[j]);
  return v_phi_kernel(kd, r, phi);
}

namespace {

double vp_kernel(const KernelData& kd, const std::vector<double>& hL, double p) {
  std::vector<double> t(hL.size());
  for (std::size_t j = 0; j < t.size(); ++j) t[j] = std::pow(hL[j], p) * std::pow(kd.hK[j], 1.0 - p) * kd.mass[j];
  double v = pairwise_sum(t) / kd.dim;
  if (!std::isfinite(v)) fail(ErrorCode::RangeError, "p-mixed volume is not finite");
  return v;
}

}  // namespace

double v_p(const ConvexBody& K, const ConvexBody& L, double p, bool polar, const SphereGrid* grid) {
  auto kd = kernel_data(K, grid);
  std::vector<double> hL;
  if (polar) {
    hL = radial_at(L, kd);
    for (double& x : hL) x = 1.0 / x;
  } else {
    hL = support_at(L, kd);
  }
  return vp_kernel(kd, hL, p);
}

double v_p(const ConvexBody& K, const StarBody& L, double p, const SphereGrid* grid) {
  auto kd = kernel_data(K, grid);
  auto hL = radial_at(L, kd);
  for (double& x : hL) x = 1.0 / x;
  return vp_kernel(kd, hL, p);
}

double s_phi(const ConvexBody& K, const OrliczFunction& phi, const SphereGrid* grid) {
  auto kd = kernel_data(K, grid);
  std::vector<double> r(kd.hK.size());
  for (std::size_t j = 0; j < r.size(); ++j) r[j] = 1.0 / kd.hK[j];
  return kd.dim * v_phi_kernel(kd, r, phi).value;
}

double mixed_kernel(const std::vector<KernelSlot>& slots, const std::vector<double>& alpha, const SphereGrid& grid) {
  if (slots.empty() || slots.size() != alpha.size()) fail(ErrorCode::DimensionMismatch, "slot and exponent counts differ");
  const int n = grid.dim();
  if (n != 2) fail(ErrorCode::UnsupportedDimension, "mixed kernels need curvature functions, n = 2 only");
  std::vector<double> logs(grid.size(), 0.0);
  for (std::size_t k = 0; k < slots.size(); ++k) {
    const auto& s = slots[k];
    if (!s.K || !s.phi || (!s.Q && !s.star)) fail(ErrorCode::InvalidBody, "incomplete kernel slot");
    if (s.K->dim() != n) fail(ErrorCode::DimensionMismatch, "body dimension differs from grid");
    auto kd = kernel_data(*s.K, &grid);
    if (kd.atomic) fail(ErrorCode::MissingCurvature, "mixed kernels need bodies with curvature functions");
    std::vector<double> arg;
    if (s.star) {
      arg = radial_at(*s.star, kd);
      for (std::size_t j = 0; j < arg.size(); ++j) arg[j] = 1.0 / (arg[j] * kd.hK[j]);
    } else if (s.polar) {
      arg = radial_at(*s.Q, kd);
      for (std::size_t j = 0; j < arg.size(); ++j) arg[j] = 1.0 / (arg[j] * kd.hK[j]);
    } else {
      arg = support_at(*s.Q, kd);
      for (std::size_t j = 0; j < arg.size(); ++j) arg[j] /= kd.hK[j];
    }
    if (alpha[k] == 0.0) continue;
    for (std::size_t j = 0; j < arg.size(); ++j)
      logs[j] += alpha[k] * std::log((*s.phi)(arg[j]) * kd.hK[j] * kd.f[j]);
  }
  std::vector<double> vals(grid.size());
  for (std::size_t j = 0; j < vals.size(); ++j) vals[j] = std::exp(logs[j]) / n;
  return integrate(grid, vals);
}

double v_phi_multi(const std::vector<ConvexBody>& Ks, const std::vector<ConvexBody>& Qs,
                   const std::vector<OrliczFunction>& phis, const std::vector<bool>& polar_flags,
                   const SphereGrid& grid) {
  const std::size_t n = static_cast<std::size_t>(grid.dim());
  if (grid.dim() != 2) fail(ErrorCode::UnsupportedDimension, "multi-body kernel is implemented for n = 2");
  if (Ks.size() != n || Qs.size() != n || phis.size() != n || polar_flags.size() != n)
    fail(ErrorCode::DimensionMismatch, "multi-body kernel needs n bodies, n second arguments and n functions");
  std::vector<KernelSlot> slots;
  for (std::size_t k = 0; k < n; ++k) slots.push_back({&Ks[k], &Qs[k], nullptr, polar_flags[k], &phis[k]});
  return mixed_kernel(slots, std::vector<double>(n, 1.0 / n), grid);
}

double v_phi_ith(const ConvexBody& K, const ConvexBody& L, const ConvexBody& Q1, const ConvexBody& Q2,
                 const OrliczFunction& phi1, const OrliczFunction& phi2, double i, bool polar1, bool polar2,
                 const SphereGrid& grid) {
  const int n = grid.dim();
  std::vector<KernelSlot> slots = {{&K, &Q1, nullptr, polar1, &phi1}, {&L, &Q2, nullptr, polar2, &phi2}};
  return mixed_kernel(slots, {(n - i) / n, i / n}, grid);
}

}  // namespace orlicz
