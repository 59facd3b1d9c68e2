#include "orlicz/bodies.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "orlicz/errors.hpp"
#include "orlicz/hull.hpp"
#include "orlicz/numeric.hpp"
#include "orlicz/spectral.hpp"

namespace orlicz {

namespace {

double cross2(const Vec& a, const Vec& b) { return a[0] * b[1] - a[1] * b[0]; }

Vec vec2(double x, double y) {
  Vec v(2);
  v << x, y;
  return v;
}

double det3(const Vec& a, const Vec& b, const Vec& c) {
  return a[0] * (b[1] * c[2] - b[2] * c[1]) - a[1] * (b[0] * c[2] - b[2] * c[0]) +
         a[2] * (b[0] * c[1] - b[1] * c[0]);
}

void require_unit(const Vec& u) {
  if (std::abs(u.norm() - 1.0) > 1e-10) fail(ErrorCode::DomainError, "direction must be a unit vector");
}

// Facets, vertices and boundary simplices of conv(points), n = 2, 3.
std::shared_ptr<PolytopeData> hull_data(const std::vector<Vec>& pts, int dim) {
  auto out = std::make_shared<PolytopeData>();
  double scale = 0.0;
  for (const auto& p : pts) scale = std::max(scale, p.norm());
  if (dim == 2) {
    std::vector<Eigen::Vector2d> q;
    q.reserve(pts.size());
    for (const auto& p : pts) q.emplace_back(p[0], p[1]);
    auto idx = hull::convex_hull_2d(q);
    if (idx.size() < 3) fail(ErrorCode::InvalidBody, "polygon needs 3 affinely independent points");
    for (int i : idx) out->vertices.push_back(pts[i]);
    const std::size_t k = out->vertices.size();
    for (std::size_t i = 0; i < k; ++i) {
      const Vec& a = out->vertices[i];
      const Vec& b = out->vertices[(i + 1) % k];
      Vec e = b - a;
      double len = e.norm();
      Vec nrm = vec2(e[1], -e[0]) / len;
      out->facet_normals.push_back(nrm);
      out->facet_offsets.push_back(nrm.dot(a));
      out->facet_areas.push_back(len);
      out->simplices.push_back({a, b});
    }
    return out;
  }
  if (dim == 3) {
    std::vector<Eigen::Vector3d> q;
    q.reserve(pts.size());
    for (const auto& p : pts) q.emplace_back(p[0], p[1], p[2]);
    auto h = hull::convex_hull_3d(q);
    for (int i : h.vertices) out->vertices.push_back(pts[i]);
    struct Group {
      Eigen::Vector3d n;
      double d;
      double area;
      Eigen::Vector3d nsum;
    };
    std::vector<Group> groups;
    for (const auto& f : h.faces) {
      Eigen::Vector3d a = q[f[0]], b = q[f[1]], c = q[f[2]];
      Eigen::Vector3d nn = (b - a).cross(c - a);
      double area = 0.5 * nn.norm();
      if (area <= 0.0) continue;
      Eigen::Vector3d un = nn.normalized();
      double d = un.dot(a);
      out->simplices.push_back({pts[f[0]], pts[f[1]], pts[f[2]]});
      bool merged = false;
      for (auto& g : groups) {
        if (g.n.dot(un) > 1.0 - 1e-10 && std::abs(g.d - d) <= 1e-10 * std::max(scale, 1.0)) {
          g.area += area;
          g.nsum += area * un;
          merged = true;
          break;
        }
      }
      if (!merged) groups.push_back({un, d, area, area * un});
    }
    for (const auto& g : groups) {
      Eigen::Vector3d n = g.nsum.normalized();
      Vec nv(3);
      nv << n[0], n[1], n[2];
      out->facet_normals.push_back(nv);
      out->facet_offsets.push_back(g.d);
      out->facet_areas.push_back(g.area);
    }
    return out;
  }
  fail(ErrorCode::UnsupportedDimension, "polytope hulls are implemented for n = 2, 3");
}

// Vertices of {x : <u_i, x> <= h_i} through the hull of the polar points.
std::vector<Vec> h_to_v(const std::vector<Vec>& normals, const std::vector<double>& offsets, int dim) {
  std::vector<Vec> pts;
  pts.reserve(normals.size());
  for (std::size_t i = 0; i < normals.size(); ++i) pts.push_back(normals[i] / offsets[i]);
  auto dual = hull_data(pts, dim);
  std::vector<Vec> verts;
  for (std::size_t f = 0; f < dual->facet_normals.size(); ++f) {
    double d = dual->facet_offsets[f];
    if (!(d > 1e-14)) fail(ErrorCode::OriginNotInterior, "H-polytope is unbounded");
    verts.push_back(dual->facet_normals[f] / d);
  }
  return verts;
}

double ellipsoid_density(const Mat& A, const Vec& u) {
  const int n = static_cast<int>(A.rows());
  double det = A.determinant();
  return det * det / std::pow((A.transpose() * u).norm(), n + 1);
}

double node_angle(const Vec& u) { return std::atan2(u[1], u[0]); }

// For a planar body with support profile h, the boundary point with outer normal
// at angle theta is x = h u + h' u_perp; its direction is theta + atan2(h', h).
// Solves for theta given the direction psi; returns |x| or -1 on failure.
double planar_radial(const PeriodicProfile& prof, double psi, double* theta_out = nullptr,
                     std::array<double, 3>* hv_out = nullptr) {
  // with h > 0 the offset atan(h'/h) lies in (-pi/2, pi/2), so the root is
  // bracketed; safeguarded Newton on G(theta) = theta + atan(h'/h) - psi
  double lo = psi - kPi / 2, hi = psi + kPi / 2;
  double th = psi;
  for (int it = 0; it < 200; ++it) {
    auto hv = prof.eval(th);
    double h = hv[0], h1 = hv[1], h2 = hv[2];
    if (!(h > 0.0)) return -1.0;
    double g = th + std::atan(h1 / h) - psi;
    double dg = (h * h + h * h2) / (h * h + h1 * h1);
    if (g > 0) hi = th;
    else lo = th;
    double next = th - g / dg;
    if (!(dg > 0.0) || !(next > lo && next < hi)) next = 0.5 * (lo + hi);
    double step = std::abs(next - th);
    th = next;
    if (step < 1e-13 || hi - lo < 1e-14) {
      hv = prof.eval(th);
      if (!(hv[0] + hv[2] > 0.0)) return -1.0;
      if (theta_out) *theta_out = th;
      if (hv_out) *hv_out = hv;
      return std::hypot(hv[0], hv[1]);
    }
  }
  return -1.0;
}

double hpoly_radial(const std::vector<Vec>& normals, const std::vector<double>& offsets, const Vec& u) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < normals.size(); ++i) {
    double c = normals[i].dot(u);
    if (c > 0.0) best = std::min(best, offsets[i] / c);
  }
  if (!std::isfinite(best)) fail(ErrorCode::OriginNotInterior, "body is unbounded in this direction");
  return best;
}

const SphereGrid& default_grid(int dim) {
  static const SphereGrid g2 = build_grid(2, 1024);
  static const SphereGrid g3 = build_grid(3, 1024);
  if (dim == 2) return g2;
  if (dim == 3) return g3;
  fail(ErrorCode::UnsupportedDimension, "no default grid for this dimension");
}

}  // namespace

// ---------------------------------------------------------------- construction

const char* to_string(BodyKind k) {
  switch (k) {
    case BodyKind::VPolytope: return "vpolytope";
    case BodyKind::HPolytope: return "hpolytope";
    case BodyKind::Ball: return "ball";
    case BodyKind::Ellipsoid: return "ellipsoid";
    case BodyKind::Smooth: return "smooth";
  }
  return "?";
}

ConvexBody ConvexBody::vpolytope(std::vector<Vec> points) {
  if (points.empty()) fail(ErrorCode::InvalidBody, "polytope has no vertices");
  const int n = static_cast<int>(points[0].size());
  if (n < 2) fail(ErrorCode::DimensionMismatch, "dimension must be >= 2");
  for (const auto& p : points) {
    if (p.size() != n) fail(ErrorCode::DimensionMismatch, "vertices of mixed dimension");
    if (!p.allFinite()) fail(ErrorCode::InvalidBody, "vertex is not finite");
  }
  if (static_cast<int>(points.size()) < n + 1)
    fail(ErrorCode::InvalidBody, "polytope needs at least n+1 vertices");
  if (n > 3) return ConvexBody(VPolytope{std::move(points)}, n);
  auto data = hull_data(points, n);
  ConvexBody b(VPolytope{data->vertices}, n);
  b.poly_ = data;
  return b;
}

ConvexBody ConvexBody::hpolytope(std::vector<Vec> normals, std::vector<double> offsets) {
  if (normals.empty() || normals.size() != offsets.size())
    fail(ErrorCode::InvalidBody, "H-polytope needs matching normals and offsets");
  const int n = static_cast<int>(normals[0].size());
  for (std::size_t i = 0; i < normals.size(); ++i) {
    if (normals[i].size() != n) fail(ErrorCode::DimensionMismatch, "normals of mixed dimension");
    double len = normals[i].norm();
    if (!(len > 0.0) || !std::isfinite(len)) fail(ErrorCode::InvalidBody, "zero normal");
    normals[i] /= len;
    if (!(offsets[i] > 0.0) || !std::isfinite(offsets[i]))
      fail(ErrorCode::OriginNotInterior, "H-polytope offsets must be positive");
  }
  std::shared_ptr<PolytopeData> data;
  if (n <= 3) data = hull_data(h_to_v(normals, offsets, n), n);
  ConvexBody b(HPolytope{std::move(normals), std::move(offsets)}, n);
  b.poly_ = data;
  return b;
}

ConvexBody ConvexBody::ball(double radius, int dim) {
  if (!(radius > 0.0) || !std::isfinite(radius)) fail(ErrorCode::InvalidBody, "ball radius must be positive");
  if (dim < 2) fail(ErrorCode::DimensionMismatch, "dimension must be >= 2");
  return ConvexBody(Ball{radius, dim}, dim);
}

ConvexBody ConvexBody::ellipsoid(Mat matrix) {
  const int n = static_cast<int>(matrix.rows());
  if (n < 2 || matrix.cols() != n) fail(ErrorCode::DimensionMismatch, "ellipsoid matrix must be square, n >= 2");
  if (!matrix.allFinite()) fail(ErrorCode::InvalidBody, "ellipsoid matrix not finite");
  Eigen::JacobiSVD<Mat> svd(matrix);
  auto s = svd.singularValues();
  if (!(s[n - 1] > 1e-12 * s[0])) fail(ErrorCode::InvalidBody, "ellipsoid matrix is singular");
  return ConvexBody(Ellipsoid{std::move(matrix)}, n);
}

ConvexBody ConvexBody::smooth(SphereGrid grid, std::vector<double> h, std::optional<std::vector<double>> f) {
  if (h.size() != grid.size()) fail(ErrorCode::DimensionMismatch, "support samples differ from grid size");
  for (double v : h) {
    if (!std::isfinite(v)) fail(ErrorCode::InvalidBody, "support sample not finite");
    if (!(v > 0.0)) fail(ErrorCode::OriginNotInterior, "support sample not positive");
  }
  if (f) {
    if (f->size() != grid.size()) fail(ErrorCode::DimensionMismatch, "curvature samples differ from grid size");
    Vec m = Vec::Zero(grid.dim());
    double tot = 0.0;
    for (std::size_t i = 0; i < f->size(); ++i) {
      double v = (*f)[i];
      if (!(v > 0.0) || !std::isfinite(v)) fail(ErrorCode::NotConvexProfile, "curvature sample not positive");
      m += v * grid.weight(i) * grid.node(i);
      tot += v * grid.weight(i);
    }
    if (m.norm() > 1e-4 * tot) fail(ErrorCode::InvalidBody, "curvature violates the Minkowski condition");
  }
  const int n = grid.dim();
  return ConvexBody(SmoothSampled{std::move(grid), std::move(h), std::move(f)}, n);
}

const PolytopeData& ConvexBody::polytope() const {
  if (!poly_) fail(ErrorCode::UnsupportedDimension, "polytope facets need n <= 3 and a polytope body");
  return *poly_;
}

StarBody::StarBody(SphereGrid g, std::vector<double> r) : grid(std::move(g)), rho(std::move(r)) {
  if (rho.size() != grid.size()) fail(ErrorCode::DimensionMismatch, "radial samples differ from grid size");
  for (double v : rho)
    if (!(v > 0.0) || !std::isfinite(v)) fail(ErrorCode::InvalidBody, "radial samples must be positive");
}

double SurfaceAreaMeasure::total() const { return pairwise_sum(mass); }

SLTransform::SLTransform(Mat m) : matrix(std::move(m)) {
  if (matrix.rows() != matrix.cols()) fail(ErrorCode::DimensionMismatch, "transform must be square");
  if (std::abs(std::abs(matrix.determinant()) - 1.0) > 1e-10) fail(ErrorCode::NotUnimodular, "|det T| != 1");
}

// ---------------------------------------------------------------- evaluation

double smooth_support_at(const SmoothSampled& s, const Vec& u) {
  if (s.grid.equispaced_circle()) {
    PeriodicProfile prof(s.h);
    return prof.eval(node_angle(u))[0];
  }
  double v = 0.0;
  for (auto [i, w] : s.grid.stencil(u)) v += w * s.h[i];
  return v;
}

double smooth_curvature_at(const SmoothSampled& s, const Vec& u) {
  if (!s.f) fail(ErrorCode::MissingCurvature, "smooth body has no curvature samples");
  if (s.grid.equispaced_circle()) {
    PeriodicProfile prof(*s.f);
    return prof.eval(node_angle(u))[0];
  }
  double v = 0.0;
  for (auto [i, w] : s.grid.stencil(u)) v += w * (*s.f)[i];
  return v;
}

double support(const ConvexBody& body, const Vec& u) {
  if (u.size() != body.dim()) fail(ErrorCode::DimensionMismatch, "direction dimension mismatch");
  require_unit(u);
  double v = std::visit(
      [&](const auto& b) -> double {
        using T = std::decay_t<decltype(b)>;
        if constexpr (std::is_same_v<T, VPolytope>) {
          double m = -std::numeric_limits<double>::infinity();
          for (const auto& x : b.vertices) m = std::max(m, x.dot(u));
          return m;
        } else if constexpr (std::is_same_v<T, HPolytope>) {
          double m = -std::numeric_limits<double>::infinity();
          for (const auto& x : body.polytope().vertices) m = std::max(m, x.dot(u));
          return m;
        } else if constexpr (std::is_same_v<T, Ball>) {
          return b.radius;
        } else if constexpr (std::is_same_v<T, Ellipsoid>) {
          return (b.matrix.transpose() * u).norm();
        } else {
          double s = 0.0;
          for (auto [i, w] : b.grid.stencil(u)) s += w * b.h[i];
          return s;
        }
      },
      body.rep());
  if (!(v > 0.0)) fail(ErrorCode::OriginNotInterior, "support value is not positive");
  return v;
}

std::vector<double> support_values(const ConvexBody& body, const std::vector<Vec>& dirs) {
  std::vector<double> out(dirs.size());
  for (std::size_t i = 0; i < dirs.size(); ++i) out[i] = support(body, dirs[i]);
  return out;
}

double radial(const ConvexBody& body, const Vec& u) {
  if (u.size() != body.dim()) fail(ErrorCode::DimensionMismatch, "direction dimension mismatch");
  require_unit(u);
  double v = std::visit(
      [&](const auto& b) -> double {
        using T = std::decay_t<decltype(b)>;
        if constexpr (std::is_same_v<T, VPolytope>) {
          const auto& P = body.polytope();
          for (double d : P.facet_offsets)
            if (!(d > 0.0)) fail(ErrorCode::OriginNotInterior, "origin is not interior");
          return hpoly_radial(P.facet_normals, P.facet_offsets, u);
        } else if constexpr (std::is_same_v<T, HPolytope>) {
          return hpoly_radial(b.normals, b.offsets, u);
        } else if constexpr (std::is_same_v<T, Ball>) {
          return b.radius;
        } else if constexpr (std::is_same_v<T, Ellipsoid>) {
          return 1.0 / b.matrix.partialPivLu().solve(u).norm();
        } else {
          if (b.grid.equispaced_circle()) {
            PeriodicProfile prof(b.h);
            double r = planar_radial(prof, node_angle(u));
            if (r > 0.0) return r;
          }
          return hpoly_radial(b.grid.nodes(), b.h, u);
        }
      },
      body.rep());
  if (!(v > 0.0)) fail(ErrorCode::OriginNotInterior, "radial value is not positive");
  return v;
}

double radial(const StarBody& body, const Vec& u) {
  require_unit(u);
  double v = 0.0;
  for (auto [i, w] : body.grid.stencil(u)) v += w * body.rho[i];
  return v;
}

ConvexBody polar(const ConvexBody& body) {
  return std::visit(
      [&](const auto& b) -> ConvexBody {
        using T = std::decay_t<decltype(b)>;
        if constexpr (std::is_same_v<T, VPolytope>) {
          if (body.dim() > 3) fail(ErrorCode::UnsupportedDimension, "polar of polytopes needs n <= 3");
          for (double d : body.polytope().facet_offsets)
            if (!(d > 0.0)) fail(ErrorCode::OriginNotInterior, "origin is not interior");
          std::vector<Vec> normals;
          std::vector<double> offsets;
          for (const auto& v : b.vertices) {
            double len = v.norm();
            normals.push_back(v / len);
            offsets.push_back(1.0 / len);
          }
          return ConvexBody::hpolytope(std::move(normals), std::move(offsets));
        } else if constexpr (std::is_same_v<T, HPolytope>) {
          if (body.dim() > 3) fail(ErrorCode::UnsupportedDimension, "polar of polytopes needs n <= 3");
          std::vector<Vec> pts;
          for (std::size_t i = 0; i < b.normals.size(); ++i) pts.push_back(b.normals[i] / b.offsets[i]);
          return ConvexBody::vpolytope(std::move(pts));
        } else if constexpr (std::is_same_v<T, Ball>) {
          return ConvexBody::ball(1.0 / b.radius, b.dim);
        } else if constexpr (std::is_same_v<T, Ellipsoid>) {
          return ConvexBody::ellipsoid(b.matrix.inverse().transpose());
        } else {
          const auto& g = b.grid;
          if (g.equispaced_circle()) {
            PeriodicProfile prof(b.h);
            const std::size_t m = g.size();
            std::vector<double> hp(m), fp(m);
            bool ok = true;
            for (std::size_t j = 0; j < m && ok; ++j) {
              std::array<double, 3> hv;
              double r = planar_radial(prof, node_angle(g.node(j)), nullptr, &hv);
              if (!(r > 0.0)) {
                ok = false;
                break;
              }
              double h = hv[0], h1 = hv[1], f = hv[0] + hv[2];
              hp[j] = 1.0 / r;
              fp[j] = std::pow(h * h + h1 * h1, 1.5) / (h * h * h * f);
              if (!(fp[j] > 0.0)) ok = false;
            }
            if (ok) {
              std::optional<std::vector<double>> fo;
              if (b.f) fo = std::move(fp);
              try {
                return ConvexBody::smooth(g, std::move(hp), std::move(fo));
              } catch (const Error&) {
                // under-resolved polar curvature; fall through to the polytope
              }
            }
          }
          if (body.dim() > 3) fail(ErrorCode::UnsupportedDimension, "polar of sampled bodies needs n <= 3");
          std::vector<Vec> pts;
          for (std::size_t i = 0; i < g.size(); ++i) pts.push_back(g.node(i) / b.h[i]);
          return ConvexBody::vpolytope(std::move(pts));
        }
      },
      body.rep());
}

double volume(const ConvexBody& body) {
  const int n = body.dim();
  return std::visit(
      [&](const auto& b) -> double {
        using T = std::decay_t<decltype(b)>;
        if constexpr (std::is_same_v<T, VPolytope> || std::is_same_v<T, HPolytope>) {
          const auto& P = body.polytope();
          for (double d : P.facet_offsets)
            if (!(d > 0.0)) fail(ErrorCode::OriginNotInterior, "origin is not interior");
          std::vector<double> terms;
          for (const auto& s : P.simplices)
            terms.push_back(n == 2 ? 0.5 * cross2(s[0], s[1]) : det3(s[0], s[1], s[2]) / 6.0);
          return pairwise_sum(terms);
        } else if constexpr (std::is_same_v<T, Ball>) {
          return omega(n) * std::pow(b.radius, n);
        } else if constexpr (std::is_same_v<T, Ellipsoid>) {
          return omega(n) * std::abs(b.matrix.determinant());
        } else {
          const auto& g = b.grid;
          std::vector<double> vals(g.size());
          if (b.f) {
            for (std::size_t i = 0; i < g.size(); ++i) vals[i] = b.h[i] * (*b.f)[i] / n;
          } else {
            for (std::size_t i = 0; i < g.size(); ++i) vals[i] = std::pow(radial(body, g.node(i)), n) / n;
          }
          return integrate(g, vals);
        }
      },
      body.rep());
}

double volume(const StarBody& body) {
  const int n = body.grid.dim();
  std::vector<double> vals(body.rho.size());
  for (std::size_t i = 0; i < vals.size(); ++i) vals[i] = std::pow(body.rho[i], n) / n;
  return integrate(body.grid, vals);
}

double vrad(const ConvexBody& body) { return std::pow(volume(body) / omega(body.dim()), 1.0 / body.dim()); }

double vrad(const StarBody& body) {
  const int n = body.grid.dim();
  return std::pow(volume(body) / omega(n), 1.0 / n);
}

SurfaceAreaMeasure surface_area_measure(const ConvexBody& body, const SphereGrid* grid) {
  SurfaceAreaMeasure S;
  const int n = body.dim();
  auto density = [&](const SphereGrid& g, std::vector<double> f) {
    if (g.dim() != n) fail(ErrorCode::DimensionMismatch, "grid dimension differs from body");
    S.kind = SurfaceAreaMeasure::Kind::Density;
    S.normals = g.nodes();
    S.mass.resize(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) S.mass[i] = f[i] * g.weight(i);
    S.f = std::move(f);
    S.grid = g;
  };
  std::visit(
      [&](const auto& b) {
        using T = std::decay_t<decltype(b)>;
        if constexpr (std::is_same_v<T, VPolytope> || std::is_same_v<T, HPolytope>) {
          if (n > 3) fail(ErrorCode::UnsupportedDimension, "polytope measures need n <= 3");
          const auto& P = body.polytope();
          double total = 0.0;
          for (double a : P.facet_areas) total += a;
          S.kind = SurfaceAreaMeasure::Kind::Atomic;
          for (std::size_t k = 0; k < P.facet_areas.size(); ++k) {
            if (P.facet_areas[k] < 1e-12 * total) continue;
            S.normals.push_back(P.facet_normals[k]);
            S.mass.push_back(P.facet_areas[k]);
          }
        } else if constexpr (std::is_same_v<T, Ball>) {
          if (!grid) fail(ErrorCode::IncompatibleGrids, "a grid is required for the ball density");
          density(*grid, std::vector<double>(grid->size(), std::pow(b.radius, n - 1)));
        } else if constexpr (std::is_same_v<T, Ellipsoid>) {
          if (!grid) fail(ErrorCode::IncompatibleGrids, "a grid is required for the ellipsoid density");
          std::vector<double> f(grid->size());
          for (std::size_t i = 0; i < grid->size(); ++i) f[i] = ellipsoid_density(b.matrix, grid->node(i));
          density(*grid, std::move(f));
        } else {
          if (!b.f) fail(ErrorCode::MissingCurvature, "smooth body has no curvature samples");
          if (grid && !grid->same_as(b.grid)) fail(ErrorCode::IncompatibleGrids, "body sampled on a different grid");
          density(b.grid, *b.f);
        }
      },
      body.rep());
  return S;
}

ConvexBody scale(const ConvexBody& body, double s) {
  if (!(s > 0.0) || !std::isfinite(s)) fail(ErrorCode::DomainError, "scale factor must be finite positive");
  return std::visit(
      [&](const auto& b) -> ConvexBody {
        using U = std::decay_t<decltype(b)>;
        if constexpr (std::is_same_v<U, VPolytope>) {
          std::vector<Vec> v;
          for (const auto& x : b.vertices) v.push_back(s * x);
          return ConvexBody::vpolytope(std::move(v));
        } else if constexpr (std::is_same_v<U, HPolytope>) {
          std::vector<double> off = b.offsets;
          for (double& o : off) o *= s;
          return ConvexBody::hpolytope(b.normals, std::move(off));
        } else if constexpr (std::is_same_v<U, Ball>) {
          return ConvexBody::ball(s * b.radius, b.dim);
        } else if constexpr (std::is_same_v<U, Ellipsoid>) {
          return ConvexBody::ellipsoid(s * b.matrix);
        } else {
          std::vector<double> h = b.h;
          for (double& x : h) x *= s;
          std::optional<std::vector<double>> f = b.f;
          // curvature function is homogeneous of degree n-1
          if (f)
            for (double& x : *f) x *= std::pow(s, b.grid.dim() - 1);
          return ConvexBody::smooth(b.grid, std::move(h), std::move(f));
        }
      },
      body.rep());
}

ConvexBody apply_sl(const ConvexBody& body, const SLTransform& T) {
  const Mat& M = T.matrix;
  if (M.rows() != body.dim()) fail(ErrorCode::DimensionMismatch, "transform dimension differs from body");
  return std::visit(
      [&](const auto& b) -> ConvexBody {
        using U = std::decay_t<decltype(b)>;
        if constexpr (std::is_same_v<U, VPolytope>) {
          std::vector<Vec> v;
          for (const auto& x : b.vertices) v.push_back(M * x);
          return ConvexBody::vpolytope(std::move(v));
        } else if constexpr (std::is_same_v<U, HPolytope>) {
          Mat MinvT = M.inverse().transpose();
          std::vector<Vec> nn;
          std::vector<double> off;
          for (std::size_t i = 0; i < b.normals.size(); ++i) {
            Vec w = MinvT * b.normals[i];
            double s = w.norm();
            nn.push_back(w / s);
            off.push_back(b.offsets[i] / s);
          }
          return ConvexBody::hpolytope(std::move(nn), std::move(off));
        } else if constexpr (std::is_same_v<U, Ball>) {
          return ConvexBody::ellipsoid(b.radius * M);
        } else if constexpr (std::is_same_v<U, Ellipsoid>) {
          return ConvexBody::ellipsoid(M * b.matrix);
        } else {
          const auto& g = b.grid;
          const int n = g.dim();
          double det2 = M.determinant() * M.determinant();
          std::vector<double> h(g.size());
          std::optional<std::vector<double>> f;
          if (b.f) f.emplace(g.size());
          std::optional<PeriodicProfile> ph, pf;
          if (g.equispaced_circle()) {
            ph.emplace(b.h);
            if (b.f) pf.emplace(*b.f);
          }
          for (std::size_t i = 0; i < g.size(); ++i) {
            Vec w = M.transpose() * g.node(i);
            double s = w.norm();
            Vec u = w / s;
            double hu, fu = 0.0;
            if (ph) {
              double th = node_angle(u);
              hu = ph->eval(th)[0];
              if (pf) fu = pf->eval(th)[0];
            } else {
              hu = 0.0;
              for (auto [k, wt] : g.stencil(u)) {
                hu += wt * b.h[k];
                if (b.f) fu += wt * (*b.f)[k];
              }
            }
            h[i] = s * hu;
            if (f) (*f)[i] = det2 * fu / std::pow(s, n + 1);
          }
          return ConvexBody::smooth(g, std::move(h), std::move(f));
        }
      },
      body.rep());
}

Vec centroid(const ConvexBody& body) {
  const int n = body.dim();
  return std::visit(
      [&](const auto& b) -> Vec {
        using T = std::decay_t<decltype(b)>;
        if constexpr (std::is_same_v<T, VPolytope> || std::is_same_v<T, HPolytope>) {
          const auto& P = body.polytope();
          // Cones from an interior reference point, so no assumption on the origin.
          Vec o = Vec::Zero(n);
          for (const auto& v : P.vertices) o += v;
          o /= static_cast<double>(P.vertices.size());
          double vol = 0.0;
          Vec m = Vec::Zero(n);
          for (const auto& s : P.simplices) {
            double c;
            Vec mid;
            if (n == 2) {
              c = 0.5 * cross2(s[0] - o, s[1] - o);
              mid = (o + s[0] + s[1]) / 3.0;
            } else {
              c = det3(s[0] - o, s[1] - o, s[2] - o) / 6.0;
              mid = (o + s[0] + s[1] + s[2]) / 4.0;
            }
            vol += c;
            m += c * mid;
          }
          return m / vol;
        } else if constexpr (std::is_same_v<T, Ball> || std::is_same_v<T, Ellipsoid>) {
          return Vec::Zero(n);
        } else {
          const auto& g = b.grid;
          if (g.equispaced_circle() && b.f) {
            PeriodicProfile prof(b.h);
            auto h1 = prof.derivative_samples(1);
            Vec m = Vec::Zero(2);
            std::vector<double> tx(g.size()), ty(g.size()), tv(g.size());
            for (std::size_t i = 0; i < g.size(); ++i) {
              const Vec& u = g.node(i);
              Vec x = b.h[i] * u + h1[i] * vec2(-u[1], u[0]);
              double wgt = b.h[i] * (*b.f)[i] * g.weight(i);
              tx[i] = wgt * x[0];
              ty[i] = wgt * x[1];
              tv[i] = wgt / 2.0;
            }
            double vol = pairwise_sum(tv);
            m << pairwise_sum(tx), pairwise_sum(ty);
            return m / ((n + 1) * vol);
          }
          if (n > 3) fail(ErrorCode::UnsupportedDimension, "centroid of sampled bodies needs n <= 3");
          return centroid(ConvexBody::hpolytope(g.nodes(), b.h));
        }
      },
      body.rep());
}

ConvexBody sample_on_grid(const ConvexBody& body, const SphereGrid& grid) {
  if (grid.dim() != body.dim()) fail(ErrorCode::DimensionMismatch, "grid dimension differs from body");
  std::vector<double> h = support_values(body, grid.nodes());
  std::optional<std::vector<double>> f;
  if (body.kind() == BodyKind::Ball || body.kind() == BodyKind::Ellipsoid) {
    f = surface_area_measure(body, &grid).f;
  } else if (const auto* s = body.as<SmoothSampled>(); s && s->f) {
    if (s->grid.same_as(grid)) f = *s->f;
    else {
      f.emplace(grid.size());
      for (std::size_t i = 0; i < grid.size(); ++i) (*f)[i] = smooth_curvature_at(*s, grid.node(i));
    }
  }
  return ConvexBody::smooth(grid, std::move(h), std::move(f));
}

ConvexBody translate(const ConvexBody& body, const Vec& z, const SphereGrid* grid) {
  if (z.size() != body.dim()) fail(ErrorCode::DimensionMismatch, "translation dimension differs");
  auto shifted_smooth = [&](const SmoothSampled& s) {
    std::vector<double> h(s.h);
    for (std::size_t i = 0; i < h.size(); ++i) {
      h[i] += z.dot(s.grid.node(i));
      if (!(h[i] > 0.0)) fail(ErrorCode::OriginNotInterior, "translation moves the origin outside");
    }
    return ConvexBody::smooth(s.grid, std::move(h), s.f);
  };
  return std::visit(
      [&](const auto& b) -> ConvexBody {
        using T = std::decay_t<decltype(b)>;
        if constexpr (std::is_same_v<T, VPolytope>) {
          std::vector<Vec> v;
          for (const auto& x : b.vertices) v.push_back(x + z);
          auto out = ConvexBody::vpolytope(std::move(v));
          if (out.dim() <= 3)
            for (double d : out.polytope().facet_offsets)
              if (!(d > 0.0)) fail(ErrorCode::OriginNotInterior, "translation moves the origin outside");
          return out;
        } else if constexpr (std::is_same_v<T, HPolytope>) {
          std::vector<double> off(b.offsets);
          for (std::size_t i = 0; i < off.size(); ++i) {
            off[i] += z.dot(b.normals[i]);
            if (!(off[i] > 0.0)) fail(ErrorCode::OriginNotInterior, "translation moves the origin outside");
          }
          return ConvexBody::hpolytope(b.normals, std::move(off));
        } else if constexpr (std::is_same_v<T, SmoothSampled>) {
          return shifted_smooth(b);
        } else {
          const SphereGrid& g = grid ? *grid : default_grid(body.dim());
          auto s = sample_on_grid(body, g);
          return shifted_smooth(*s.as<SmoothSampled>());
        }
      },
      body.rep());
}

// ---------------------------------------------------------------- random samples

SLTransform random_sl(int dim, std::uint64_t seed, double max_cond) {
  if (dim < 2) fail(ErrorCode::DimensionMismatch, "dimension must be >= 2");
  auto rng = stream_rng(seed, "random_sl");
  std::normal_distribution<double> N(0.0, 1.0);
  for (int attempt = 0; attempt < 100; ++attempt) {
    Mat M(dim, dim);
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j) M(i, j) = N(rng);
    double det = M.determinant();
    if (std::abs(det) < 1e-6) continue;
    M /= std::pow(std::abs(det), 1.0 / dim);
    Eigen::JacobiSVD<Mat> svd(M);
    auto s = svd.singularValues();
    if (s[0] / s[dim - 1] > max_cond) continue;
    // normalization leaves |det| within rounding of 1; fix it exactly
    M /= std::pow(std::abs(M.determinant()), 1.0 / dim);
    return SLTransform(M);
  }
  fail(ErrorCode::DegenerateSample, "no well-conditioned transform after 100 draws");
}

namespace {

ConvexBody random_polytope(int dim, std::mt19937_64& rng) {
  std::normal_distribution<double> N(0.0, 1.0);
  std::uniform_int_distribution<int> extra(0, 3 * dim);
  int count = 3 * dim + extra(rng);
  std::vector<Vec> pts;
  for (int k = 0; k < count; ++k) {
    Vec p(dim);
    for (int j = 0; j < dim; ++j) p[j] = N(rng);
    pts.push_back(p);
  }
  ConvexBody P = ConvexBody::vpolytope(pts);
  Vec c = centroid(P);
  std::vector<Vec> shifted;
  for (const auto& v : P.polytope().vertices) shifted.push_back(v - c);
  return ConvexBody::vpolytope(std::move(shifted));
}

ConvexBody random_smooth_2d(const SphereGrid& g, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> U(0.0, 1.0);
  std::normal_distribution<double> N(0.0, 1.0);
  double a = 1.0 + 0.4 * U(rng);
  double alpha = kPi * U(rng);
  Mat R(2, 2);
  R << std::cos(alpha), -std::sin(alpha), std::sin(alpha), std::cos(alpha);
  Mat A = R * Eigen::Vector2d(a, 1.0 / a).asDiagonal();
  std::vector<double> c(7, 0.0), s(7, 0.0);
  for (int k = 2; k <= 6; ++k) {
    c[k] = 0.04 * N(rng) / (k * k);
    s[k] = 0.04 * N(rng) / (k * k);
  }
  const std::size_t m = g.size();
  std::vector<double> h(m), fe(m);
  double fmin_e = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < m; ++i) {
    const Vec& u = g.node(i);
    double th = node_angle(u);
    h[i] = (A.transpose() * u).norm();
    fe[i] = ellipsoid_density(A, u);
    fmin_e = std::min(fmin_e, fe[i]);
    for (int k = 2; k <= 6; ++k) {
      h[i] += c[k] * std::cos(k * th) + s[k] * std::sin(k * th);
      fe[i] += (1.0 - k * k) * (c[k] * std::cos(k * th) + s[k] * std::sin(k * th));
    }
  }
  for (std::size_t i = 0; i < m; ++i)
    if (fe[i] < 0.3 * fmin_e || h[i] <= 0.0) fail(ErrorCode::DegenerateSample, "perturbation too strong");
  ConvexBody K = ConvexBody::smooth(g, h, fe);
  return translate(K, -centroid(K));
}

// Minkowski sum of ellipsoids plus a small cubic term; f from the Hessian of the
// 1-homogeneous extension (sum of 2x2 principal minors).
ConvexBody random_smooth_3d(const SphereGrid& g, std::uint64_t seed, std::mt19937_64& rng) {
  std::normal_distribution<double> N(0.0, 1.0);
  std::vector<Mat> S;
  SLTransform T0 = random_sl(3, seed ^ 0x5151, 3.0);
  S.push_back(T0.matrix * T0.matrix.transpose());
  for (int k = 0; k < 2; ++k) {
    SLTransform Tk = random_sl(3, seed + 17 * (k + 1), 4.0);
    S.push_back(0.04 * Tk.matrix * Tk.matrix.transpose());
  }
  Eigen::Vector3d d(N(rng), N(rng), N(rng));
  d = 0.06 * d.normalized();
  const std::size_t m = g.size();
  std::vector<double> h(m), f(m);
  std::vector<Vec> grad(m);
  for (std::size_t i = 0; i < m; ++i) {
    Eigen::Vector3d x(g.node(i)[0], g.node(i)[1], g.node(i)[2]);
    Eigen::Matrix3d H = Eigen::Matrix3d::Zero();
    Eigen::Vector3d gr = Eigen::Vector3d::Zero();
    double hv = 0.0;
    for (const auto& Sk : S) {
      Eigen::Matrix3d Sm = Sk;
      Eigen::Vector3d sx = Sm * x;
      double q = std::sqrt(x.dot(sx));
      hv += q;
      gr += sx / q;
      H += (Sm - sx * sx.transpose() / (q * q)) / q;
    }
    double sd = d.dot(x);  // |x| = 1
    hv += sd * sd * sd;
    gr += 3 * sd * sd * d - 2 * sd * sd * sd * x;
    H += 6 * sd * d * d.transpose() - 6 * sd * sd * (d * x.transpose() + x * d.transpose()) -
         2 * sd * sd * sd * Eigen::Matrix3d::Identity() + 8 * sd * sd * sd * x * x.transpose();
    h[i] = hv;
    f[i] = 0.5 * (H.trace() * H.trace() - (H * H).trace());
    grad[i] = Vec(3);
    grad[i] << gr[0], gr[1], gr[2];
    if (!(f[i] > 0.0) || !(hv > 0.0)) fail(ErrorCode::DegenerateSample, "cubic perturbation too strong");
  }
  std::vector<double> tv(m), tx(m), ty(m), tz(m);
  for (std::size_t i = 0; i < m; ++i) {
    double w = h[i] * f[i] * g.weight(i);
    tv[i] = w / 3.0;
    tx[i] = w * grad[i][0];
    ty[i] = w * grad[i][1];
    tz[i] = w * grad[i][2];
  }
  Vec c(3);
  c << pairwise_sum(tx), pairwise_sum(ty), pairwise_sum(tz);
  c /= 4.0 * pairwise_sum(tv);
  for (std::size_t i = 0; i < m; ++i) h[i] -= c.dot(g.node(i));
  return ConvexBody::smooth(g, std::move(h), std::move(f));
}

}  // namespace

ConvexBody random_body(int dim, std::uint64_t seed, BodyClass cls, int resolution) {
  if (dim != 2 && dim != 3) fail(ErrorCode::UnsupportedDimension, "random bodies support n = 2, 3");
  auto rng = stream_rng(seed, cls == BodyClass::Polytope ? "random_polytope" : "random_smooth");
  for (int attempt = 0; attempt < 100; ++attempt) {
    try {
      if (cls == BodyClass::Polytope) return random_polytope(dim, rng);
      SphereGrid g = build_grid(dim, resolution > 0 ? resolution : 1024);
      if (dim == 2) return random_smooth_2d(g, rng);
      return random_smooth_3d(g, seed + 1000003ULL * attempt, rng);
    } catch (const Error& e) {
      if (e.code() == ErrorCode::InvalidResolution) throw;
    }
  }
  fail(ErrorCode::DegenerateSample, "random body generation failed 100 times");
}

}  // namespace orlicz
