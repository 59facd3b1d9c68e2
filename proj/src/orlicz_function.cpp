#include "orlicz/orlicz_function.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <vector>

#include "orlicz/errors.hpp"
#include "orlicz/numeric.hpp"

namespace orlicz {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string fmt_num(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  // shortest representation that round-trips
  for (int prec = 1; prec <= 17; ++prec) {
    char tmp[64];
    std::snprintf(tmp, sizeof tmp, "%.*g", prec, x);
    if (std::strtod(tmp, nullptr) == x) return tmp;
  }
  return buf;
}

}  // namespace

const char* to_string(PhiClass c) {
  switch (c) {
    case PhiClass::Phi: return "Phi";
    case PhiClass::Psi: return "Psi";
    case PhiClass::Neither: return "Neither";
    case PhiClass::ConstantBoth: return "ConstantBoth";
  }
  return "?";
}

const char* to_string(Monotone m) {
  switch (m) {
    case Monotone::Increasing: return "increasing";
    case Monotone::StrictlyIncreasing: return "strictly_increasing";
    case Monotone::Decreasing: return "decreasing";
    case Monotone::StrictlyDecreasing: return "strictly_decreasing";
    case Monotone::None: return "none";
  }
  return "?";
}

OrliczFunction::OrliczFunction(PhiKind kind, double param, int dim, std::string name,
                               std::function<double(double)> custom)
    : kind_(kind), param_(param), dim_(dim), name_(std::move(name)), custom_(std::move(custom)) {
  if (dim_ < 1) fail(ErrorCode::DimensionMismatch, "phi needs a positive dimension hint");
}

OrliczFunction OrliczFunction::power(double p, int dim) {
  if (!std::isfinite(p)) fail(ErrorCode::DomainError, "power exponent must be finite");
  OrliczFunction f(PhiKind::Power, p, dim, "power(" + fmt_num(p) + ")", nullptr);
  f.finish();
  return f;
}

OrliczFunction OrliczFunction::constant(double a, int dim) {
  if (!(a > 0.0) || !std::isfinite(a)) fail(ErrorCode::RangeError, "constant must be positive");
  OrliczFunction f(PhiKind::Constant, a, dim, "constant(" + fmt_num(a) + ")", nullptr);
  f.finish();
  return f;
}

OrliczFunction OrliczFunction::arctan_inv_n(int dim) {
  OrliczFunction f(PhiKind::ArctanInvN, 0.0, dim, "arctan_inv_n", nullptr);
  f.finish();
  return f;
}

OrliczFunction OrliczFunction::log1p_inv_n(int dim) {
  OrliczFunction f(PhiKind::Log1pInvN, 0.0, dim, "log1p_inv_n", nullptr);
  f.finish();
  return f;
}

OrliczFunction OrliczFunction::exp_neg_inv_n(int dim) {
  OrliczFunction f(PhiKind::ExpNegInvN, 0.0, dim, "exp_neg_inv_n", nullptr);
  f.finish();
  return f;
}

OrliczFunction OrliczFunction::custom(std::function<double(double)> fn, int dim, std::string name) {
  OrliczFunction f(PhiKind::Custom, 0.0, dim, std::move(name), std::move(fn));
  f.finish();
  return f;
}

void OrliczFunction::finish() { cls_ = classify(*this, dim_); }

double OrliczFunction::raw(double t) const {
  const double n = dim_;
  switch (kind_) {
    case PhiKind::Power: return std::pow(t, param_);
    case PhiKind::Constant: return param_;
    case PhiKind::ArctanInvN: return std::atan(std::pow(t, -n));
    case PhiKind::Log1pInvN: return std::log1p(std::pow(t, -n));
    case PhiKind::ExpNegInvN: return std::exp(-std::pow(t, -n));
    case PhiKind::Custom: return custom_(t);
  }
  return std::numeric_limits<double>::quiet_NaN();
}

double OrliczFunction::operator()(double t) const {
  if (!(t > 0.0)) fail(ErrorCode::DomainError, name_ + ": argument must be positive");
  double v = raw(t);
  if (!(v > 0.0) || !std::isfinite(v))
    fail(ErrorCode::RangeError, name_ + ": value not finite positive at t=" + fmt_num(t));
  return v;
}

double OrliczFunction::derivative(double t) const {
  if (!(t > 0.0)) fail(ErrorCode::DomainError, name_ + ": argument must be positive");
  const double n = dim_;
  switch (kind_) {
    case PhiKind::Power: return param_ == 0.0 ? 0.0 : param_ * std::pow(t, param_ - 1.0);
    case PhiKind::Constant: return 0.0;
    case PhiKind::ArctanInvN: {
      double x = std::pow(t, -n);
      return -n * x / t / (1.0 + x * x);
    }
    case PhiKind::Log1pInvN: {
      double x = std::pow(t, -n);
      return -n * x / t / (1.0 + x);
    }
    case PhiKind::ExpNegInvN: {
      double x = std::pow(t, -n);
      return n * x / t * std::exp(-x);
    }
    case PhiKind::Custom: {
      double h = 1e-6 * t;
      return (custom_(t + h) - custom_(t - h)) / (2.0 * h);
    }
  }
  return 0.0;
}

double OrliczFunction::F(double t) const {
  if (!(t > 0.0)) fail(ErrorCode::DomainError, name_ + ": argument must be positive");
  return (*this)(std::pow(t, -1.0 / dim_));
}

double OrliczFunction::inverse(double y) const {
  if (!cls_.invertible) fail(ErrorCode::DomainError, name_ + " is not invertible");
  const double n = dim_;
  double t = std::numeric_limits<double>::quiet_NaN();
  switch (kind_) {
    case PhiKind::Power: t = std::pow(y, 1.0 / param_); break;
    case PhiKind::ArctanInvN:
      if (y > 0.0 && y < kPi / 2) t = std::pow(std::tan(y), -1.0 / n);
      break;
    case PhiKind::Log1pInvN:
      if (y > 0.0) t = std::pow(std::expm1(y), -1.0 / n);
      break;
    case PhiKind::ExpNegInvN:
      if (y > 0.0 && y < 1.0) t = std::pow(-std::log(y), -1.0 / n);
      break;
    case PhiKind::Custom: {
      // bisection in log t on a monotone function
      double lo = std::log(1e-12), hi = std::log(1e12);
      bool inc = increasing(cls_.monotone);
      double flo = raw(std::exp(lo)), fhi = raw(std::exp(hi));
      if ((inc && (y < flo || y > fhi)) || (!inc && (y > flo || y < fhi))) break;
      for (int it = 0; it < 200; ++it) {
        double mid = 0.5 * (lo + hi);
        double fm = raw(std::exp(mid));
        if ((fm < y) == inc) lo = mid;
        else hi = mid;
      }
      t = std::exp(0.5 * (lo + hi));
      break;
    }
    case PhiKind::Constant: break;
  }
  if (!(t > 0.0) || !std::isfinite(t))
    fail(ErrorCode::DomainError, name_ + ": value outside the range of phi");
  return t;
}

double OrliczFunction::infimum() const {
  switch (kind_) {
    case PhiKind::Constant: return param_;
    case PhiKind::Power: return param_ == 0.0 ? 1.0 : 0.0;
    case PhiKind::ArctanInvN:
    case PhiKind::Log1pInvN:
    case PhiKind::ExpNegInvN: return 0.0;
    case PhiKind::Custom: break;
  }
  double best = kInf;
  for (int k = 0; k <= 2000; ++k) {
    double v = raw(std::pow(10.0, -8.0 + 16.0 * k / 2000.0));
    if (std::isfinite(v) && v >= 0.0) best = std::min(best, v);
  }
  return best;
}

double OrliczFunction::supremum() const {
  switch (kind_) {
    case PhiKind::Constant: return param_;
    case PhiKind::Power: return param_ == 0.0 ? 1.0 : kInf;
    case PhiKind::ArctanInvN: return kPi / 2;
    case PhiKind::Log1pInvN: return kInf;
    case PhiKind::ExpNegInvN: return 1.0;
    case PhiKind::Custom: break;
  }
  double best = 0.0;
  for (int k = 0; k <= 2000; ++k) {
    double v = raw(std::pow(10.0, -8.0 + 16.0 * k / 2000.0));
    if (std::isnan(v)) continue;
    best = std::max(best, v);
  }
  return best;
}

ShapeAudit audit_shape(const std::function<double(double)>& g, double lo, double hi, int samples) {
  std::vector<double> t, v;
  t.reserve(samples);
  v.reserve(samples);
  for (int k = 0; k < samples; ++k) {
    double x = lo * std::pow(hi / lo, static_cast<double>(k) / (samples - 1));
    double y = g(x);
    if (std::isfinite(y) && y > std::numeric_limits<double>::min()) {
      t.push_back(x);
      v.push_back(y);
    }
  }
  ShapeAudit a;
  a.valid = static_cast<int>(t.size());
  if (a.valid < 3) return a;
  a.strictly_convex = a.strictly_concave = a.convex = a.concave = true;
  a.strictly_increasing = a.strictly_decreasing = a.increasing = a.decreasing = true;
  a.constant = true;
  const double thr_m = 1e-14;
  for (std::size_t k = 0; k < t.size(); ++k) {
    if (std::abs(v[k] - v[0]) > 1e-12 * std::abs(v[0])) a.constant = false;
    if (k + 1 < t.size()) {
      double scale = std::max(std::abs(v[k]), std::abs(v[k + 1]));
      double d = v[k + 1] - v[k];
      if (!(d > thr_m * scale)) a.strictly_increasing = false;
      if (!(d < -thr_m * scale)) a.strictly_decreasing = false;
      if (d < -thr_m * scale) a.increasing = false;
      if (d > thr_m * scale) a.decreasing = false;
    }
    if (k >= 1 && k + 1 < t.size()) {
      double w = (t[k] - t[k - 1]) / (t[k + 1] - t[k - 1]);
      double chord = v[k - 1] + w * (v[k + 1] - v[k - 1]);
      double scale = std::max({std::abs(v[k - 1]), std::abs(v[k]), std::abs(v[k + 1])});
      double rel = (v[k] - chord) / scale;
      if (!(rel < -kConvexityThreshold)) a.strictly_convex = false;
      if (!(rel > kConvexityThreshold)) a.strictly_concave = false;
      if (rel > kConvexityThreshold) a.convex = false;
      if (rel < -kConvexityThreshold) a.concave = false;
    }
  }
  return a;
}

Classification classify(const OrliczFunction& phi, int dim, int samples) {
  if (samples < 64) fail(ErrorCode::DomainError, "classification needs at least 64 samples");
  const double n = dim;
  auto F = [&](double t) { return phi.raw(std::pow(t, -1.0 / n)); };
  ShapeAudit fa = audit_shape(F, kAuditLo, kAuditHi, samples);
  if (fa.valid < 64)
    fail(ErrorCode::RangeError, phi.name() + ": too few finite positive samples for the audit");

  // Excluded case: F proportional to t (phi proportional to t^{-n}).
  {
    double lo = kInf, hi = 0.0;
    for (int k = 0; k < samples; ++k) {
      double t = kAuditLo * std::pow(kAuditHi / kAuditLo, static_cast<double>(k) / (samples - 1));
      double r = F(t) / t;
      if (!std::isfinite(r) || r <= 0.0) continue;
      lo = std::min(lo, r);
      hi = std::max(hi, r);
    }
    if (hi > 0.0 && (hi - lo) <= kLinearThreshold * hi)
      fail(ErrorCode::NearDegenerate, phi.name() + ": F is proportional to t (phi ~ t^{-n})");
  }

  Classification audited;
  if (fa.constant) audited.cls = PhiClass::ConstantBoth;
  else if (fa.strictly_convex) audited.cls = PhiClass::Phi;
  else if (fa.strictly_concave && fa.strictly_increasing) audited.cls = PhiClass::Psi;
  else audited.cls = PhiClass::Neither;

  ShapeAudit pa = audit_shape([&](double s) { return phi.raw(s); },
                              std::pow(kAuditHi, -1.0 / n), std::pow(kAuditLo, -1.0 / n), samples);
  if (fa.constant) audited.monotone = Monotone::Increasing;
  else if (pa.strictly_increasing) audited.monotone = Monotone::StrictlyIncreasing;
  else if (pa.strictly_decreasing) audited.monotone = Monotone::StrictlyDecreasing;
  else if (pa.increasing) audited.monotone = Monotone::Increasing;
  else if (pa.decreasing) audited.monotone = Monotone::Decreasing;
  else audited.monotone = Monotone::None;
  audited.invertible = audited.monotone == Monotone::StrictlyIncreasing ||
                       audited.monotone == Monotone::StrictlyDecreasing;

  if (phi.kind() == PhiKind::Custom) return audited;

  Classification expected;
  const double p = phi.param();
  switch (phi.kind()) {
    case PhiKind::Power:
      if (p == 0.0) {
        expected = {PhiClass::ConstantBoth, Monotone::Increasing, false};
      } else if (p > 0.0) {
        expected = {PhiClass::Phi, Monotone::StrictlyIncreasing, true};
      } else if (p < -n) {
        expected = {PhiClass::Phi, Monotone::StrictlyDecreasing, true};
      } else {
        expected = {PhiClass::Psi, Monotone::StrictlyDecreasing, true};
      }
      break;
    case PhiKind::Constant: expected = {PhiClass::ConstantBoth, Monotone::Increasing, false}; break;
    case PhiKind::ArctanInvN:
    case PhiKind::Log1pInvN: expected = {PhiClass::Psi, Monotone::StrictlyDecreasing, true}; break;
    case PhiKind::ExpNegInvN: expected = {PhiClass::Phi, Monotone::StrictlyIncreasing, true}; break;
    case PhiKind::Custom: break;
  }
  if (expected.cls != audited.cls || expected.monotone != audited.monotone)
    fail(ErrorCode::ClassificationConflict,
         phi.name() + ": analytic label " + to_string(expected.cls) + "/" + to_string(expected.monotone) +
             " disagrees with audit " + to_string(audited.cls) + "/" + to_string(audited.monotone));
  return expected;
}

}  // namespace orlicz
