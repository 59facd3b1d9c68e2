#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "orlicz/spheregrid.hpp"

namespace orlicz {

struct VPolytope {
  std::vector<Vec> vertices;  // extreme points only (counter-clockwise for n=2)
};

struct HPolytope {
  std::vector<Vec> normals;  // unit
  std::vector<double> offsets;
};

struct Ball {
  double radius = 1.0;
  int dim = 2;
};

struct Ellipsoid {
  Mat matrix;  // body = A B^n
};

struct SmoothSampled {
  SphereGrid grid;
  std::vector<double> h;
  std::optional<std::vector<double>> f;
};

enum class BodyKind { VPolytope, HPolytope, Ball, Ellipsoid, Smooth };

/// Facet description shared by both polytope forms (n <= 3).
struct PolytopeData {
  std::vector<Vec> vertices;
  std::vector<Vec> facet_normals;
  std::vector<double> facet_offsets;
  std::vector<double> facet_areas;
  std::vector<std::vector<Vec>> simplices;  // boundary simplices (edges / triangles)
};

class ConvexBody {
 public:
  using Rep = std::variant<VPolytope, HPolytope, Ball, Ellipsoid, SmoothSampled>;

  static ConvexBody vpolytope(std::vector<Vec> points);
  static ConvexBody hpolytope(std::vector<Vec> normals, std::vector<double> offsets);
  static ConvexBody ball(double radius, int dim);
  static ConvexBody ellipsoid(Mat matrix);
  static ConvexBody smooth(SphereGrid grid, std::vector<double> h,
                           std::optional<std::vector<double>> f = std::nullopt);

  int dim() const { return dim_; }
  BodyKind kind() const { return static_cast<BodyKind>(rep_.index()); }
  const Rep& rep() const { return rep_; }
  template <class T>
  const T* as() const { return std::get_if<T>(&rep_); }

  bool is_polytope() const { return kind() == BodyKind::VPolytope || kind() == BodyKind::HPolytope; }
  /// Vertices/facets for polytopes (n <= 3).
  const PolytopeData& polytope() const;

 private:
  ConvexBody(Rep rep, int dim) : rep_(std::move(rep)), dim_(dim) {}
  Rep rep_;
  int dim_;
  std::shared_ptr<const PolytopeData> poly_;
};

struct StarBody {
  StarBody(SphereGrid grid, std::vector<double> rho);
  SphereGrid grid;
  std::vector<double> rho;
};

/// Surface area measure: atoms at facet normals or a density on a grid.
struct SurfaceAreaMeasure {
  enum class Kind { Atomic, Density } kind = Kind::Atomic;
  std::vector<Vec> normals;    // atom normals or grid nodes
  std::vector<double> mass;    // atom masses or f_i * w_i
  std::vector<double> f;       // density values (Density only)
  std::optional<SphereGrid> grid;

  double total() const;
};

struct SLTransform {
  explicit SLTransform(Mat m);
  Mat matrix;
};

const char* to_string(BodyKind k);

double support(const ConvexBody& body, const Vec& u);
std::vector<double> support_values(const ConvexBody& body, const std::vector<Vec>& dirs);
double radial(const ConvexBody& body, const Vec& u);
double radial(const StarBody& body, const Vec& u);
ConvexBody polar(const ConvexBody& body);
double volume(const ConvexBody& body);
double volume(const StarBody& body);
double vrad(const ConvexBody& body);
double vrad(const StarBody& body);
/// Grid is required for Ball and Ellipsoid; for SmoothSampled it must match.
SurfaceAreaMeasure surface_area_measure(const ConvexBody& body, const SphereGrid* grid = nullptr);
ConvexBody apply_sl(const ConvexBody& body, const SLTransform& T);
/// Dilation x -> s x (s > 0).
ConvexBody scale(const ConvexBody& body, double s);
Vec centroid(const ConvexBody& body);
/// Ball/Ellipsoid are resampled on `grid` (default: 1024 nodes).
ConvexBody translate(const ConvexBody& body, const Vec& z, const SphereGrid* grid = nullptr);

enum class BodyClass { Polytope, Smooth };
SLTransform random_sl(int dim, std::uint64_t seed, double max_cond = 20.0);
ConvexBody random_body(int dim, std::uint64_t seed, BodyClass cls, int resolution = 0);

/// Sample a body as SmoothSampled on a grid (curvature attached when available).
ConvexBody sample_on_grid(const ConvexBody& body, const SphereGrid& grid);

/// Evaluate h, f of a SmoothSampled body at an arbitrary direction.
double smooth_support_at(const SmoothSampled& s, const Vec& u);
double smooth_curvature_at(const SmoothSampled& s, const Vec& u);

}  // namespace orlicz
