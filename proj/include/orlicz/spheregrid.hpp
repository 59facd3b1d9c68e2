#pragma once

#include <array>
#include <memory>
#include <mutex>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace orlicz {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// Equal-weight, antipodally symmetric quadrature on S^{n-1}.
class SphereGrid {
 public:
  SphereGrid(int dim, std::vector<Vec> nodes, std::vector<double> weights);

  int dim() const { return data_->dim; }
  std::size_t size() const { return data_->nodes.size(); }
  const Vec& node(std::size_t i) const { return data_->nodes[i]; }
  double weight(std::size_t i) const { return data_->weights[i]; }
  const std::vector<Vec>& nodes() const { return data_->nodes; }
  const std::vector<double>& weights() const { return data_->weights; }

  /// True for the n=2 rule with node k at angle 2*pi*k/m.
  bool equispaced_circle() const { return data_->equispaced; }

  bool same_as(const SphereGrid& other) const;

  /// Node triangulation (n=3 only), built on first use.
  const std::vector<std::array<int, 3>>& triangles() const;

  /// Interpolation stencil at direction u: node indices and weights summing to 1.
  /// n=2 uses angular-linear interpolation, n=3 spherical barycentric.
  std::vector<std::pair<int, double>> stencil(const Vec& u) const;

 private:
  struct Data {
    int dim = 0;
    std::vector<Vec> nodes;
    std::vector<double> weights;
    bool equispaced = false;
    mutable std::once_flag tri_once;
    mutable std::vector<std::array<int, 3>> tris;
  };
  std::shared_ptr<const Data> data_;
};

SphereGrid build_grid(int dim, int resolution);

double integrate(const SphereGrid& grid, std::span<const double> values);

inline double integrate(const SphereGrid& grid, const std::vector<double>& values) {
  return integrate(grid, std::span<const double>(values.data(), values.size()));
}

}  // namespace orlicz
