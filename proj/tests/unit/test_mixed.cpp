#include <algorithm>
#include <cmath>
#include <random>

#include "doctest.h"
#include "helpers.hpp"
#include "orlicz/mixed_volumes.hpp"
#include "orlicz/numeric.hpp"

using namespace orlicz;
using testing_util::code_of;
using testing_util::diag2;
using testing_util::square;
using testing_util::v2;

namespace {

// Vertices in convex position by construction: points on a circle at sorted
// random angles, then a random orientation-preserving linear map.
std::vector<Vec> random_convex_polygon(std::uint64_t seed, int k) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  std::vector<double> ang(k);
  for (int i = 0; i < k; ++i) ang[i] = 2.0 * kPi * (i + 0.4 * U(rng)) / k;
  Mat A(2, 2);
  A << 1.0 + U(rng), 0.6 * (U(rng) - 0.5), 0.6 * (U(rng) - 0.5), 0.5 + U(rng);
  Vec shift = v2(0.2 * (U(rng) - 0.5), 0.2 * (U(rng) - 0.5));
  std::vector<Vec> v;
  for (double a : ang) v.push_back(A * v2(std::cos(a), std::sin(a)) + shift);
  return v;
}

double hmax(const std::vector<Vec>& verts, const Vec& u) {
  double h = -1e300;
  for (const auto& x : verts) h = std::max(h, x.dot(u));
  return h;
}

// (1/2) sum over edges of phi(h_Q/h_K) h_K |edge|, by direct summation.
double facet_sum_2d(const std::vector<Vec>& K, const std::vector<Vec>& Q, const std::function<double(double)>& phi) {
  double s = 0.0;
  const std::size_t k = K.size();
  for (std::size_t i = 0; i < k; ++i) {
    Vec e = K[(i + 1) % k] - K[i];
    Vec u = v2(e[1], -e[0]) / e.norm();
    double hK = u.dot(K[i]);
    s += phi(hmax(Q, u) / hK) * hK * e.norm();
  }
  return 0.5 * s;
}

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

}  // namespace

TEST_CASE("kernel spec values") {
  auto sq = square();
  auto B = ConvexBody::ball(1.0, 2);
  CHECK(v_phi(sq, B, OrliczFunction::power(2, 2)).value == doctest::Approx(4.0).epsilon(1e-14));
  CHECK(v_phi(sq, B, OrliczFunction::constant(1, 2)).value == doctest::Approx(4.0).epsilon(1e-14));
  CHECK(v_phi(sq, sq, OrliczFunction::power(1, 2)).value == doctest::Approx(4.0).epsilon(1e-14));
  CHECK(s_phi(sq, OrliczFunction::power(1, 2)) == doctest::Approx(8.0).epsilon(1e-14));
  CHECK(s_phi(sq, OrliczFunction::constant(3, 2)) == doctest::Approx(24.0).epsilon(1e-14));
  auto g = build_grid(2, 256);
  CHECK(s_phi(B, OrliczFunction::arctan_inv_n(2), &g) == doctest::Approx(2.0 * kPi * std::atan(1.0)).epsilon(1e-12));
  auto g3 = build_grid(3, 512);
  CHECK(s_phi(ConvexBody::ball(1.0, 3), OrliczFunction::power(3, 3), &g3) ==
        doctest::Approx(4.0 * kPi).epsilon(1e-12));
  for (double p : {-1.0, 0.5, 2.0}) {
    auto r = v_phi_polar(B, ConvexBody::ball(1.7, 2), OrliczFunction::power(p, 2), &g);
    CHECK(r.value == doctest::Approx(kPi * std::pow(1.7, -p)).epsilon(1e-12));
  }
}

TEST_CASE("v_phi matches the facet-sum oracle") {
  std::vector<std::function<double(double)>> fns = {
      [](double t) { return t * t; }, [](double t) { return 1.0 / t; },
      [](double t) { return std::atan(std::pow(t, -2.0)); }, [](double t) { return std::log1p(std::pow(t, -2.0)); }};
  std::vector<OrliczFunction> phis = {OrliczFunction::power(2, 2), OrliczFunction::power(-1, 2),
                                      OrliczFunction::arctan_inv_n(2), OrliczFunction::log1p_inv_n(2)};
  for (std::uint64_t s = 1; s <= 10; ++s) {
    auto Kv = random_convex_polygon(s, 4 + static_cast<int>(s % 7));
    auto Qv = random_convex_polygon(100 + s, 4 + static_cast<int>(s % 5));
    auto K = ConvexBody::vpolytope(Kv);
    auto Q = ConvexBody::vpolytope(Qv);
    for (std::size_t f = 0; f < phis.size(); ++f) {
      double got = v_phi(K, Q, phis[f]).value;
      CHECK(rel(got, facet_sum_2d(Kv, Qv, fns[f])) < 1e-12);
    }
  }
}

TEST_CASE("cube kernel against direct facet sum") {
  auto C = testing_util::cube();
  std::vector<Vec> pts = {testing_util::v3(2, 0, 0), testing_util::v3(-1, 0, 0), testing_util::v3(0, 1.5, 0),
                          testing_util::v3(0, -1, 0), testing_util::v3(0, 0, 0.5), testing_util::v3(0, 0, -3)};
  auto Q = ConvexBody::vpolytope(pts);
  // facets of the cube: normals +-e_i, h = 1, area 4; h_Q at those normals
  const double hq[6] = {2, 1, 1.5, 1, 0.5, 3};
  double want = 0.0;
  for (double h : hq) want += h * h * 4.0;
  want /= 3.0;
  CHECK(rel(v_phi(C, Q, OrliczFunction::power(2, 3)).value, want) < 1e-12);
}

TEST_CASE("v_p homogeneity and special cases") {
  for (std::uint64_t s = 1; s <= 8; ++s) {
    auto K = ConvexBody::vpolytope(random_convex_polygon(s, 6));
    auto Lv = random_convex_polygon(50 + s, 5);
    auto L = ConvexBody::vpolytope(Lv);
    for (auto& x : Lv) x *= 2.0;
    auto L2 = ConvexBody::vpolytope(Lv);
    for (double p : {-1.5, 0.5, 1.0, 3.0}) {
      CHECK(rel(v_p(K, L2, p), std::pow(2.0, p) * v_p(K, L, p)) < 1e-10);
      CHECK(rel(v_p(K, L, p), v_phi(K, L, OrliczFunction::power(p, 2)).value) < 1e-12);
    }
    CHECK(rel(v_p(K, L, 0.0), volume(K)) < 1e-12);
    CHECK(rel(v_p(K, K, 1.0), volume(K)) < 1e-12);
  }
}

TEST_CASE("polar kernel consistency") {
  auto g = build_grid(2, 512);
  auto K = random_body(2, 3, BodyClass::Smooth, 512);
  auto L = ConvexBody::ellipsoid(diag2(1.3, 0.8));
  auto phi = OrliczFunction::power(2, 2);
  CHECK(rel(v_phi_polar(K, L, phi, &g).value, v_phi(K, polar(L), phi, &g).value) < 1e-8);
  CHECK(rel(v_phi_polar(K, ConvexBody::ball(1.0, 2), phi, &g).value, v_phi(K, ConvexBody::ball(1.0, 2), phi, &g).value) <
        1e-12);
  auto sq = square(0.9);
  auto P = ConvexBody::vpolytope({v2(1, 0), v2(0, 1), v2(-1, 0.2), v2(0, -1.1)});
  CHECK(rel(v_phi_polar(sq, P, phi).value, v_phi(sq, polar(P), phi).value) < 1e-12);
}

TEST_CASE("SL invariance of the kernel") {
  for (std::uint64_t s = 1; s <= 5; ++s) {
    auto K = ConvexBody::vpolytope(random_convex_polygon(s, 7));
    auto Q = ConvexBody::vpolytope(random_convex_polygon(20 + s, 5));
    auto T = random_sl(2, s);
    for (const auto& phi : {OrliczFunction::power(2, 2), OrliczFunction::log1p_inv_n(2)}) {
      CHECK(rel(v_phi(apply_sl(K, T), apply_sl(Q, T), phi).value, v_phi(K, Q, phi).value) < 1e-10);
    }
  }
}

TEST_CASE("monotone in phi") {
  auto K = ConvexBody::vpolytope(random_convex_polygon(9, 8));
  auto Q = ConvexBody::vpolytope(random_convex_polygon(19, 6));
  // arctan(t^-2) <= pi/2 and exp(-t^-2) <= 1 pointwise
  CHECK(v_phi(K, Q, OrliczFunction::arctan_inv_n(2)).value <= v_phi(K, Q, OrliczFunction::constant(kPi / 2, 2)).value);
  CHECK(v_phi(K, Q, OrliczFunction::exp_neg_inv_n(2)).value <= v_phi(K, Q, OrliczFunction::constant(1, 2)).value);
}

TEST_CASE("multi-body kernel") {
  auto g = build_grid(2, 512);
  auto K1 = random_body(2, 11, BodyClass::Smooth, 512);
  auto K2 = random_body(2, 12, BodyClass::Smooth, 512);
  auto Q1 = ConvexBody::ellipsoid(diag2(1.2, 0.9));
  auto Q2 = ConvexBody::ball(1.1, 2);
  auto p1 = OrliczFunction::power(2, 2);
  auto p2 = OrliczFunction::arctan_inv_n(2);
  CHECK(rel(v_phi_multi({K1, K1}, {Q1, Q1}, {p1, p1}, {false, false}, g), v_phi(K1, Q1, p1, &g).value) < 1e-8);
  auto B = ConvexBody::ball(1.0, 2);
  CHECK(rel(v_phi_multi({B, B}, {B, B}, {OrliczFunction::power(1, 2), OrliczFunction::power(3, 2)}, {false, false}, g),
            kPi) < 1e-12);
  double m = v_phi_multi({K1, K2}, {Q1, Q2}, {p1, p2}, {false, false}, g);
  CHECK(m * m <= v_phi(K1, Q1, p1, &g).value * v_phi(K2, Q2, p2, &g).value * (1 + 1e-8));
  auto sq = square();
  CHECK(code_of([&] { v_phi_multi({sq, K1}, {Q1, Q2}, {p1, p2}, {false, false}, g); }) == ErrorCode::MissingCurvature);
}

TEST_CASE("i-th kernel") {
  auto g = build_grid(2, 512);
  auto K = random_body(2, 21, BodyClass::Smooth, 512);
  auto L = random_body(2, 22, BodyClass::Smooth, 512);
  auto Q1 = ConvexBody::ellipsoid(diag2(1.2, 0.9));
  auto Q2 = ConvexBody::ball(1.1, 2);
  auto p1 = OrliczFunction::power(2, 2);
  auto p2 = OrliczFunction::log1p_inv_n(2);
  auto V = [&](double i) { return v_phi_ith(K, L, Q1, Q2, p1, p2, i, false, false, g); };
  CHECK(rel(V(0), v_phi(K, Q1, p1, &g).value) < 1e-8);
  CHECK(rel(V(2), v_phi(L, Q2, p2, &g).value) < 1e-8);
  for (auto [i, j, k] : {std::array<double, 3>{0, 1, 2}, {-1, 0.5, 3}, {0.2, 0.7, 1.9}}) {
    CHECK(std::pow(V(j), k - i) <= std::pow(V(i), k - j) * std::pow(V(k), j - i) * (1 + 1e-8));
  }
  auto B = ConvexBody::ball(1.0, 2);
  auto a = OrliczFunction::constant(2, 2);
  auto b = OrliczFunction::constant(5, 2);
  for (double i : {-1.0, 0.0, 0.6, 2.0, 3.5}) {
    double want = kPi * std::pow(2.0, (2 - i) / 2) * std::pow(5.0, i / 2);
    CHECK(rel(v_phi_ith(B, B, B, B, a, b, i, false, false, g), want) < 1e-12);
  }
}
