#include "orlicz/spectral.hpp"

#include <cmath>
#include <mutex>

#include <fftw3.h>

#include "orlicz/errors.hpp"

namespace orlicz {

namespace {

std::mutex& planner_mutex() {
  static std::mutex mu;
  return mu;
}

std::vector<std::complex<double>> forward(std::span<const double> x) {
  const int m = static_cast<int>(x.size());
  std::vector<double> in(x.begin(), x.end());
  std::vector<std::complex<double>> out(m / 2 + 1);
  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lock(planner_mutex());
    plan = fftw_plan_dft_r2c_1d(m, in.data(), reinterpret_cast<fftw_complex*>(out.data()),
                                FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  {
    std::lock_guard<std::mutex> lock(planner_mutex());
    fftw_destroy_plan(plan);
  }
  return out;
}

std::vector<double> backward(std::vector<std::complex<double>> spec, int m) {
  std::vector<double> out(m);
  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lock(planner_mutex());
    plan = fftw_plan_dft_c2r_1d(m, reinterpret_cast<fftw_complex*>(spec.data()), out.data(),
                                FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  {
    std::lock_guard<std::mutex> lock(planner_mutex());
    fftw_destroy_plan(plan);
  }
  return out;
}

}  // namespace

PeriodicProfile::PeriodicProfile(std::span<const double> samples) : m_(samples.size()) {
  if (m_ < 4 || m_ % 2 != 0) fail(ErrorCode::InvalidResolution, "periodic profile needs an even sample count");
  coef_ = forward(samples);
  for (auto& c : coef_) c /= static_cast<double>(m_);
}

std::array<double, 3> PeriodicProfile::eval(double theta) const {
  const std::size_t nyq = m_ / 2;
  std::array<double, 3> r{coef_[0].real(), 0.0, 0.0};
  const std::complex<double> step(std::cos(theta), std::sin(theta));
  std::complex<double> e = step;
  for (std::size_t k = 1; k < nyq; ++k) {
    std::complex<double> t = coef_[k] * e;
    double kk = static_cast<double>(k);
    r[0] += 2.0 * t.real();
    r[1] += -2.0 * kk * t.imag();
    r[2] += -2.0 * kk * kk * t.real();
    e *= step;
    if ((k & 63) == 0) e /= std::abs(e);
  }
  double kn = static_cast<double>(nyq);
  double c = coef_[nyq].real();
  r[0] += c * std::cos(kn * theta);
  r[1] += -c * kn * std::sin(kn * theta);
  r[2] += -c * kn * kn * std::cos(kn * theta);
  return r;
}

std::vector<double> PeriodicProfile::derivative_samples(int order) const {
  const std::size_t nyq = m_ / 2;
  std::vector<std::complex<double>> spec(coef_);
  for (std::size_t k = 0; k <= nyq; ++k) {
    std::complex<double> ik(0.0, static_cast<double>(k));
    std::complex<double> mult = 1.0;
    for (int o = 0; o < order; ++o) mult *= ik;
    spec[k] *= mult;
  }
  if (order % 2 == 1) spec[nyq] = 0.0;
  return backward(std::move(spec), static_cast<int>(m_));
}

std::vector<double> curvature_2d(std::span<const double> h) {
  PeriodicProfile prof(h);
  std::vector<double> f = prof.derivative_samples(2);
  for (std::size_t i = 0; i < f.size(); ++i) {
    f[i] += h[i];
    if (!(f[i] > 0.0)) fail(ErrorCode::NotConvexProfile, "curvature h + h'' is not positive");
  }
  return f;
}

}  // namespace orlicz
