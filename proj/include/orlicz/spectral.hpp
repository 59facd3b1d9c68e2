#pragma once

#include <array>
#include <complex>
#include <span>
#include <vector>

namespace orlicz {

/// Trigonometric interpolant of samples taken at theta_k = 2*pi*k/m.
class PeriodicProfile {
 public:
  explicit PeriodicProfile(std::span<const double> samples);

  std::size_t size() const { return m_; }

  /// Value and first two derivatives at an arbitrary angle.
  std::array<double, 3> eval(double theta) const;

  /// Derivative of the given order at the sample angles.
  std::vector<double> derivative_samples(int order) const;

 private:
  std::size_t m_;
  std::vector<std::complex<double>> coef_;  // modes 0..m/2, normalized by m
};

/// f = h + h'' by spectral differentiation.  Throws NotConvexProfile if some f_i <= 0.
std::vector<double> curvature_2d(std::span<const double> h);

inline std::vector<double> curvature_2d(const std::vector<double>& h) {
  return curvature_2d(std::span<const double>(h.data(), h.size()));
}

}  // namespace orlicz
