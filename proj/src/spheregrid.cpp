#include "orlicz/spheregrid.hpp"

#include <cmath>
#include <mutex>

#include "orlicz/errors.hpp"
#include "orlicz/hull.hpp"
#include "orlicz/numeric.hpp"

namespace orlicz {

SphereGrid::SphereGrid(int dim, std::vector<Vec> nodes, std::vector<double> weights) {
  if (dim < 2) fail(ErrorCode::DimensionMismatch, "grid dimension must be >= 2");
  if (nodes.size() != weights.size() || nodes.empty())
    fail(ErrorCode::DimensionMismatch, "grid nodes and weights differ in length");
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (nodes[i].size() != dim) fail(ErrorCode::DimensionMismatch, "grid node of wrong dimension");
    if (std::abs(nodes[i].norm() - 1.0) > 1e-10)
      fail(ErrorCode::InvalidBody, "grid node is not a unit vector");
    if (!(weights[i] > 0.0) || !std::isfinite(weights[i]))
      fail(ErrorCode::InvalidBody, "grid weights must be positive");
  }
  auto d = std::make_shared<Data>();
  d->dim = dim;
  if (dim == 2) {
    const std::size_t m = nodes.size();
    bool eq = true;
    for (std::size_t k = 0; k < m && eq; ++k) {
      double th = 2.0 * kPi * static_cast<double>(k) / static_cast<double>(m);
      eq = std::abs(nodes[k][0] - std::cos(th)) < 1e-12 && std::abs(nodes[k][1] - std::sin(th)) < 1e-12 &&
           std::abs(weights[k] - 2.0 * kPi / static_cast<double>(m)) < 1e-12;
    }
    d->equispaced = eq;
  }
  d->nodes = std::move(nodes);
  d->weights = std::move(weights);
  data_ = std::move(d);
}

bool SphereGrid::same_as(const SphereGrid& other) const {
  if (data_ == other.data_) return true;
  if (dim() != other.dim() || size() != other.size()) return false;
  for (std::size_t i = 0; i < size(); ++i) {
    if (node(i) != other.node(i) || weight(i) != other.weight(i)) return false;
  }
  return true;
}

const std::vector<std::array<int, 3>>& SphereGrid::triangles() const {
  if (dim() != 3) fail(ErrorCode::UnsupportedDimension, "triangulation requires n=3");
  std::call_once(data_->tri_once, [this] {
    std::vector<Eigen::Vector3d> pts;
    pts.reserve(size());
    for (const auto& v : nodes()) pts.emplace_back(v[0], v[1], v[2]);
    data_->tris = hull::convex_hull_3d(pts).faces;
  });
  return data_->tris;
}

std::vector<std::pair<int, double>> SphereGrid::stencil(const Vec& u) const {
  const int m = static_cast<int>(size());
  if (dim() == 2) {
    double th = std::atan2(u[1], u[0]);
    if (equispaced_circle()) {
      double x = th / (2.0 * kPi) * m;
      if (x < 0) x += m;
      int k = static_cast<int>(std::floor(x)) % m;
      double t = x - std::floor(x);
      return {{k, 1.0 - t}, {(k + 1) % m, t}};
    }
    // General circle grid: bracket by angle.
    int lo = -1, hi = -1;
    double dlo = -1e300, dhi = 1e300;
    for (int i = 0; i < m; ++i) {
      double d = std::remainder(std::atan2(node(i)[1], node(i)[0]) - th, 2.0 * kPi);
      if (d <= 0 && d > dlo) dlo = d, lo = i;
      if (d >= 0 && d < dhi) dhi = d, hi = i;
    }
    if (lo == hi || dhi - dlo <= 0) return {{lo, 1.0}};
    double t = -dlo / (dhi - dlo);
    return {{lo, 1.0 - t}, {hi, t}};
  }
  if (dim() == 3) {
    const auto& tris = triangles();
    Eigen::Vector3d v(u[0], u[1], u[2]);
    int best = -1;
    double best_min = -1e300;
    Eigen::Vector3d best_w = Eigen::Vector3d::Zero();
    for (int f = 0; f < static_cast<int>(tris.size()); ++f) {
      Eigen::Matrix3d M;
      for (int k = 0; k < 3; ++k) M.col(k) = node(tris[f][k]).head<3>();
      Eigen::Vector3d w = M.colPivHouseholderQr().solve(v);
      double mn = w.minCoeff();
      if (mn > best_min) best_min = mn, best = f, best_w = w;
    }
    double s = best_w.sum();
    return {{tris[best][0], best_w[0] / s}, {tris[best][1], best_w[1] / s}, {tris[best][2], best_w[2] / s}};
  }
  fail(ErrorCode::UnsupportedDimension, "interpolation on the grid supports n=2,3");
}

namespace {

std::vector<double> radical_inverse_bases(int count) {
  std::vector<double> primes;
  for (int c = 2; static_cast<int>(primes.size()) < count; ++c) {
    bool prime = true;
    for (double p : primes)
      if (c % static_cast<int>(p) == 0) { prime = false; break; }
    if (prime) primes.push_back(c);
  }
  return primes;
}

double radical_inverse(std::uint64_t k, int base) {
  double inv = 1.0 / base, f = inv, r = 0.0;
  while (k > 0) {
    r += f * static_cast<double>(k % base);
    k /= base;
    f *= inv;
  }
  return r;
}

// Make the frame tight (sum u u^T proportional to I) so degree-2 polynomials are
// integrated exactly; the map u -> M u / |M u| keeps antipodal pairs paired.
void balance_frame(std::vector<Vec>& nodes, int dim) {
  for (int it = 0; it < 50; ++it) {
    Mat S = Mat::Zero(dim, dim);
    for (const auto& u : nodes) S += u * u.transpose();
    S *= static_cast<double>(dim) / static_cast<double>(nodes.size());
    double dev = (S - Mat::Identity(dim, dim)).norm();
    if (dev < 1e-15) break;
    Eigen::SelfAdjointEigenSolver<Mat> es(S);
    Mat Sinvh = es.operatorInverseSqrt();
    for (auto& u : nodes) u = (Sinvh * u).normalized();
  }
}

}  // namespace

SphereGrid build_grid(int dim, int resolution) {
  if (dim < 2) fail(ErrorCode::DimensionMismatch, "dimension must be >= 2");
  if (resolution < 8 || resolution % 2 != 0)
    fail(ErrorCode::InvalidResolution, "resolution must be even and >= 8");
  const int m = resolution;
  const double total = dim * omega(dim);
  std::vector<Vec> nodes;
  nodes.reserve(m);
  if (dim == 2) {
    for (int k = 0; k < m; ++k) {
      double th = 2.0 * kPi * k / m;
      Vec u(2);
      u << std::cos(th), std::sin(th);
      if (2 * k == m) u << -1.0, 0.0;  // exact antipode of node 0
      nodes.push_back(u);
    }
    // nodes k and k + m/2 are exact antipodes
    for (int k = m / 2; k < m; ++k) nodes[k] = -nodes[k - m / 2];
  } else {
    const int half = m / 2;
    std::vector<Vec> upper;
    upper.reserve(half);
    if (dim == 3) {
      const double golden = kPi * (3.0 - std::sqrt(5.0));
      for (int k = 0; k < half; ++k) {
        double z = 1.0 - (k + 0.5) / half;  // upper hemisphere, z in (0,1)
        double r = std::sqrt(1.0 - z * z);
        Vec u(3);
        u << r * std::cos(golden * k), r * std::sin(golden * k), z;
        upper.push_back(u);
      }
    } else {
      // Halton points pushed through Box-Muller give near-uniform directions.
      auto bases = radical_inverse_bases(dim + (dim % 2));
      for (int k = 0; k < half; ++k) {
        Vec g(dim);
        for (int j = 0; j < dim; j += 2) {
          double a = radical_inverse(k + 1, static_cast<int>(bases[j]));
          double b = radical_inverse(k + 1, static_cast<int>(bases[j + 1]));
          double rad = std::sqrt(-2.0 * std::log(a));
          g[j] = rad * std::cos(2.0 * kPi * b);
          if (j + 1 < dim) g[j + 1] = rad * std::sin(2.0 * kPi * b);
        }
        if (g[dim - 1] < 0) g = -g;
        upper.push_back(g.normalized());
      }
    }
    for (const auto& u : upper) nodes.push_back(u);
    for (const auto& u : upper) nodes.push_back(-u);
    balance_frame(nodes, dim);
    for (int k = 0; k < half; ++k) nodes[half + k] = -nodes[k];
  }
  std::vector<double> weights(m, total / m);
  return SphereGrid(dim, std::move(nodes), std::move(weights));
}

double integrate(const SphereGrid& grid, std::span<const double> values) {
  if (values.size() != grid.size())
    fail(ErrorCode::DimensionMismatch, "integrand length differs from grid size");
  std::vector<double> terms(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i])) fail(ErrorCode::NonFiniteIntegrand, "integrand value is not finite");
    terms[i] = values[i] * grid.weight(i);
  }
  return pairwise_sum(terms);
}

}  // namespace orlicz
