#include "orlicz/hull.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_map>

#include "orlicz/errors.hpp"

namespace orlicz::hull {

namespace {

double cross2(const Eigen::Vector2d& a, const Eigen::Vector2d& b) {
  return a.x() * b.y() - a.y() * b.x();
}

}  // namespace

std::vector<int> convex_hull_2d(const std::vector<Eigen::Vector2d>& pts) {
  const int n = static_cast<int>(pts.size());
  std::vector<int> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](int a, int b) {
    if (pts[a].x() != pts[b].x()) return pts[a].x() < pts[b].x();
    return pts[a].y() < pts[b].y();
  });
  double scale = 0.0;
  for (const auto& p : pts) scale = std::max(scale, p.cwiseAbs().maxCoeff());
  const double eps = 1e-14 * scale * scale;

  std::vector<int> h(2 * n + 1);
  int k = 0;
  auto turn = [&](int o, int a, int b) {
    return cross2(pts[a] - pts[o], pts[b] - pts[o]);
  };
  for (int i = 0; i < n; ++i) {
    while (k >= 2 && turn(h[k - 2], h[k - 1], idx[i]) <= eps) --k;
    h[k++] = idx[i];
  }
  for (int i = n - 2, lo = k + 1; i >= 0; --i) {
    while (k >= lo && turn(h[k - 2], h[k - 1], idx[i]) <= eps) --k;
    h[k++] = idx[i];
  }
  h.resize(std::max(k - 1, 0));
  return h;
}

Hull3 convex_hull_3d(const std::vector<Eigen::Vector3d>& pts, double rel_eps) {
  const int n = static_cast<int>(pts.size());
  if (n < 4) fail(ErrorCode::InvalidBody, "3D hull needs at least 4 points");
  double scale = 0.0;
  for (const auto& p : pts) scale = std::max(scale, p.norm());
  const double eps = rel_eps * std::max(scale, 1e-300);

  // Initial tetrahedron from well-spread points.
  int i0 = 0;
  for (int i = 1; i < n; ++i)
    if (pts[i].x() < pts[i0].x()) i0 = i;
  int i1 = i0;
  double best = -1.0;
  for (int i = 0; i < n; ++i) {
    double d = (pts[i] - pts[i0]).squaredNorm();
    if (d > best) best = d, i1 = i;
  }
  Eigen::Vector3d e = (pts[i1] - pts[i0]).normalized();
  int i2 = i0;
  best = -1.0;
  for (int i = 0; i < n; ++i) {
    Eigen::Vector3d d = pts[i] - pts[i0];
    double dist = (d - d.dot(e) * e).norm();
    if (dist > best) best = dist, i2 = i;
  }
  Eigen::Vector3d nrm = (pts[i1] - pts[i0]).cross(pts[i2] - pts[i0]);
  if (nrm.norm() <= eps * scale) fail(ErrorCode::InvalidBody, "points are collinear");
  nrm.normalize();
  int i3 = i0;
  best = -1.0;
  for (int i = 0; i < n; ++i) {
    double dist = std::abs((pts[i] - pts[i0]).dot(nrm));
    if (dist > best) best = dist, i3 = i;
  }
  if (best <= eps) fail(ErrorCode::InvalidBody, "points are coplanar");

  const Eigen::Vector3d center = (pts[i0] + pts[i1] + pts[i2] + pts[i3]) / 4.0;

  struct Face {
    std::array<int, 3> v;
    Eigen::Vector3d normal;
    double offset;
    bool alive;
  };
  std::vector<Face> faces;
  std::unordered_map<std::uint64_t, int> edge_face;
  auto key = [n](int a, int b) {
    return static_cast<std::uint64_t>(a) * static_cast<std::uint64_t>(n) +
           static_cast<std::uint64_t>(b);
  };
  auto add_face = [&](int a, int b, int c) {
    Eigen::Vector3d nn = (pts[b] - pts[a]).cross(pts[c] - pts[a]);
    if (nn.dot(pts[a] - center) < 0.0) {
      std::swap(b, c);
      nn = -nn;
    }
    double len = nn.norm();
    if (len > 0.0) nn /= len;
    faces.push_back({{a, b, c}, nn, nn.dot(pts[a]), true});
    int f = static_cast<int>(faces.size()) - 1;
    edge_face[key(a, b)] = f;
    edge_face[key(b, c)] = f;
    edge_face[key(c, a)] = f;
  };
  add_face(i0, i1, i2);
  add_face(i0, i1, i3);
  add_face(i0, i2, i3);
  add_face(i1, i2, i3);

  std::vector<int> visible;
  std::vector<char> is_visible;
  for (int p = 0; p < n; ++p) {
    if (p == i0 || p == i1 || p == i2 || p == i3) continue;
    visible.clear();
    is_visible.assign(faces.size(), 0);
    for (int f = 0; f < static_cast<int>(faces.size()); ++f) {
      if (!faces[f].alive) continue;
      if (faces[f].normal.dot(pts[p]) - faces[f].offset > eps) {
        visible.push_back(f);
        is_visible[f] = 1;
      }
    }
    if (visible.empty()) continue;
    std::vector<std::pair<int, int>> horizon;
    for (int f : visible) {
      const auto& v = faces[f].v;
      for (int k = 0; k < 3; ++k) {
        int a = v[k], b = v[(k + 1) % 3];
        auto it = edge_face.find(key(b, a));
        if (it == edge_face.end() || !is_visible[it->second]) horizon.emplace_back(a, b);
      }
    }
    for (int f : visible) {
      faces[f].alive = false;
      const auto& v = faces[f].v;
      for (int k = 0; k < 3; ++k) {
        auto it = edge_face.find(key(v[k], v[(k + 1) % 3]));
        if (it != edge_face.end() && it->second == f) edge_face.erase(it);
      }
    }
    for (auto [a, b] : horizon) {
      // keep orientation of the removed visible face: (a, b, p)
      Eigen::Vector3d nn = (pts[b] - pts[a]).cross(pts[p] - pts[a]);
      double len = nn.norm();
      if (len > 0.0) nn /= len;
      faces.push_back({{a, b, p}, nn, nn.dot(pts[a]), true});
      int f = static_cast<int>(faces.size()) - 1;
      edge_face[key(a, b)] = f;
      edge_face[key(b, p)] = f;
      edge_face[key(p, a)] = f;
    }
  }

  Hull3 out;
  std::vector<char> used(n, 0);
  for (const auto& f : faces) {
    if (!f.alive) continue;
    out.faces.push_back(f.v);
    for (int v : f.v) used[v] = 1;
  }
  for (int i = 0; i < n; ++i)
    if (used[i]) out.vertices.push_back(i);
  return out;
}

StarHull star_hull_2d(const std::vector<Eigen::Vector2d>& dirs, const std::vector<double>& r) {
  const int m = static_cast<int>(dirs.size());
  StarHull out;
  out.tight.assign(m, 0.0);
  out.fan.assign(m, 0.0);
  std::vector<Eigen::Vector2d> p(m);
  int start = 0;
  for (int i = 0; i < m; ++i) {
    p[i] = r[i] * dirs[i];
    if (r[i] > r[start]) start = i;
  }
  // Graham scan around the origin, starting at the farthest point (always extreme).
  std::vector<int> st;
  st.reserve(m + 1);
  for (int k = 0; k <= m; ++k) {
    int i = (start + k) % m;
    while (st.size() >= 2) {
      const auto& a = p[st[st.size() - 2]];
      const auto& b = p[st.back()];
      if (cross2(b - a, p[i] - b) <= 0.0) st.pop_back();
      else break;
    }
    st.push_back(i);
  }
  st.pop_back();  // closing copy of `start`
  const int hv = static_cast<int>(st.size());
  if (hv < 3) {
    out.origin_interior = false;
    return out;
  }
  double area = 0.0;
  for (int k = 0; k < hv; ++k) {
    int a = st[k], b = st[(k + 1) % hv];
    double tri = 0.5 * cross2(p[a], p[b]);
    if (tri <= 0.0) out.origin_interior = false;
    area += tri;
    out.fan[a] += tri;
    out.fan[b] += tri;
    // points strictly between a and b in angular order get pushed onto edge ab
    Eigen::Vector2d e = p[b] - p[a];
    double num = cross2(p[a], e);
    out.tight[a] = r[a];
    for (int i = (a + 1) % m; i != b; i = (i + 1) % m) {
      double den = cross2(dirs[i], e);
      out.tight[i] = den > 0.0 ? std::max(num / den, r[i]) : r[i];
    }
  }
  out.volume = area;
  return out;
}

StarHull star_hull_3d(const std::vector<Eigen::Vector3d>& dirs, const std::vector<double>& r) {
  const int m = static_cast<int>(dirs.size());
  StarHull out;
  out.tight.assign(m, 0.0);
  out.fan.assign(m, 0.0);
  std::vector<Eigen::Vector3d> p(m);
  for (int i = 0; i < m; ++i) p[i] = r[i] * dirs[i];
  Hull3 h = convex_hull_3d(p);
  struct Plane {
    Eigen::Vector3d n;
    double d;
  };
  std::vector<Plane> planes;
  planes.reserve(h.faces.size());
  double vol = 0.0;
  for (const auto& f : h.faces) {
    const auto &a = p[f[0]], &b = p[f[1]], &c = p[f[2]];
    double cone = a.dot(b.cross(c)) / 6.0;
    if (cone <= 0.0) out.origin_interior = false;
    vol += cone;
    for (int v : f) out.fan[v] += cone;
    Eigen::Vector3d nn = (b - a).cross(c - a);
    double len = nn.norm();
    if (len > 0.0) planes.push_back({nn / len, nn.dot(a) / len});
  }
  out.volume = vol;
  if (!out.origin_interior) return out;
  std::vector<char> on_hull(m, 0);
  for (int v : h.vertices) on_hull[v] = 1;
  for (int i = 0; i < m; ++i) {
    if (on_hull[i]) {
      out.tight[i] = r[i];
      continue;
    }
    double best = std::numeric_limits<double>::infinity();
    for (const auto& pl : planes) {
      double c = pl.n.dot(dirs[i]);
      if (c > 0.0) best = std::min(best, pl.d / c);
    }
    out.tight[i] = std::max(best, r[i]);
  }
  return out;
}

}  // namespace orlicz::hull
