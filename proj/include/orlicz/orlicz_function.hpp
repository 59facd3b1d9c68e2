#pragma once

#include <functional>
#include <memory>
#include <string>

namespace orlicz {

enum class PhiKind { Power, Constant, ArctanInvN, Log1pInvN, ExpNegInvN, Custom };
enum class PhiClass { Phi, Psi, Neither, ConstantBoth };
enum class Monotone { Increasing, StrictlyIncreasing, Decreasing, StrictlyDecreasing, None };

struct Classification {
  PhiClass cls = PhiClass::Neither;
  Monotone monotone = Monotone::None;
  bool invertible = false;
};

const char* to_string(PhiClass c);
const char* to_string(Monotone m);

inline bool increasing(Monotone m) {
  return m == Monotone::Increasing || m == Monotone::StrictlyIncreasing;
}
inline bool decreasing(Monotone m) {
  return m == Monotone::Decreasing || m == Monotone::StrictlyDecreasing;
}

/// phi : (0, inf) -> (0, inf), with the dimension used by the t^{-n} built-ins
/// and by F(t) = phi(t^{-1/n}).
class OrliczFunction {
 public:
  static OrliczFunction power(double p, int dim);
  static OrliczFunction constant(double a, int dim);
  static OrliczFunction arctan_inv_n(int dim);
  static OrliczFunction log1p_inv_n(int dim);
  static OrliczFunction exp_neg_inv_n(int dim);
  /// Custom functions are classified by the numerical audit alone.
  static OrliczFunction custom(std::function<double(double)> f, int dim, std::string name);

  /// phi(t); DomainError for t <= 0, RangeError if the result is not finite positive.
  double operator()(double t) const;
  double eval(double t) const { return (*this)(t); }
  /// phi(t) without range checks (may be 0 or inf).
  double raw(double t) const;
  double derivative(double t) const;
  /// F(t) = phi(t^{-1/n}).
  double F(double t) const;
  /// phi^{-1}(y) for strictly monotone phi.
  double inverse(double y) const;

  /// inf and sup of phi over (0, inf) (limits included, may be 0 or inf).
  double infimum() const;
  double supremum() const;

  PhiKind kind() const { return kind_; }
  double param() const { return param_; }
  int dim() const { return dim_; }
  const std::string& name() const { return name_; }
  const Classification& classification() const { return cls_; }
  PhiClass cls() const { return cls_.cls; }

 private:
  OrliczFunction(PhiKind kind, double param, int dim, std::string name,
                 std::function<double(double)> custom);
  void finish();

  PhiKind kind_;
  double param_ = 0.0;
  int dim_ = 2;
  std::string name_;
  std::function<double(double)> custom_;
  Classification cls_;
};

/// Shape audit of a positive function sampled on an increasing abscissa.
struct ShapeAudit {
  bool strictly_convex = false;
  bool strictly_concave = false;
  bool convex = false;
  bool concave = false;
  bool strictly_increasing = false;
  bool strictly_decreasing = false;
  bool increasing = false;
  bool decreasing = false;
  bool constant = false;
  int valid = 0;
};

inline constexpr double kAuditLo = 1e-4;
inline constexpr double kAuditHi = 1e4;
inline constexpr int kAuditSamples = 512;
inline constexpr double kConvexityThreshold = 1e-12;
inline constexpr double kLinearThreshold = 1e-10;

ShapeAudit audit_shape(const std::function<double(double)>& g, double lo, double hi, int samples);

/// Numerical audit of F_phi (and of phi's monotonicity).  Built-in kinds are
/// checked against their analytic labels.
Classification classify(const OrliczFunction& phi, int dim, int samples = kAuditSamples);

}  // namespace orlicz
