// Acceptance run: one PASS/FAIL line per criterion.
// usage: acceptance <path to orlicz cli> <data dir> <scratch dir>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>

#include "json.hpp"
#include "orlicz/bodies.hpp"
#include "orlicz/functionals.hpp"
#include "orlicz/harness.hpp"
#include "orlicz/mixed_volumes.hpp"
#include "orlicz/numeric.hpp"

using namespace orlicz;

namespace {

constexpr double kTol = 0.01;  // relative, all optimizer criteria

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

struct Outcome {
  bool pass = true;
  std::string detail;
  void require(bool ok, const std::string& what) {
    if (!ok && pass) detail = what;
    pass = pass && ok;
  }
};

std::string fmt(const char* f, double a, double b = 0, double c = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

const std::vector<CorpusBody>& corpus() {
  static const std::vector<CorpusBody> c = golden_corpus({});
  return c;
}

std::vector<const CorpusBody*> smooth_bodies() {
  std::vector<const CorpusBody*> out;
  for (const auto& b : corpus())
    if (b.id.rfind("smooth-", 0) == 0) out.push_back(&b);
  return out;
}

const SphereGrid& grid256() {
  static const SphereGrid g = build_grid(2, 256);
  return g;
}

OptimizerOptions harness_opts(std::uint64_t seed) {
  OptimizerOptions o{4, 5000, 1e-6, seed, 0};
  return o;
}

// 1 -------------------------------------------------------------------------
Outcome crit_ellipsoid_closed_form() {
  Outcome o;
  const SphereGrid grid = build_grid(2, 1024);
  std::vector<ConvexBody> ells{ConvexBody::ball(1.0, 2)};
  for (int i = 1; i < 5; ++i) ells.push_back(ConvexBody::ellipsoid(random_sl(2, 1000 + i, 4.0).matrix));
  std::vector<OrliczFunction> phis{OrliczFunction::power(2, 2), OrliczFunction::power(-1, 2),
                                   OrliczFunction::arctan_inv_n(2), OrliczFunction::log1p_inv_n(2),
                                   OrliczFunction::constant(3, 2)};
  double worst = 0.0, slowest = 0.0;
  for (const auto& E : ells) {
    for (const auto& phi : phis) {
      const double expect = 2.0 * phi.raw(1.0) * kPi;  // n phi(1) pi for |det A| = 1
      for (int which = 0; which < 2; ++which) {
        auto t0 = std::chrono::steady_clock::now();
        FunctionalResult r = which == 0 ? affine_orlicz(E, phi, grid) : geominimal_orlicz(E, phi, grid);
        double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        worst = std::max(worst, rel(r.value, expect));
        slowest = std::max(slowest, dt);
        o.require(rel(r.value, expect) <= kTol, phi.name() + " off by " + fmt("%.3g", rel(r.value, expect)));
        o.require(dt < 10.0, phi.name() + " took " + fmt("%.1f s", dt));
      }
    }
  }
  if (o.pass) o.detail = fmt("50 cases, max rel err %.2e, slowest %.2f s", worst, slowest);
  return o;
}

// 2 -------------------------------------------------------------------------
Outcome crit_lp_cross_check() {
  Outcome o;
  auto sm = smooth_bodies();
  double worst = 0.0;
  for (int k = 0; k < 10; ++k) {
    const auto& K = sm[k]->body;
    const auto* s = K.as<SmoothSampled>();
    for (double p : {0.5, 1.0, 2.0}) {
      // oracle: int (h^{1-p} f)^{n/(n+p)} straight from the samples
      double cf = 0.0;
      for (std::size_t i = 0; i < s->h.size(); ++i)
        cf += std::pow(std::pow(s->h[i], 1.0 - p) * (*s->f)[i], 2.0 / (2.0 + p)) * s->grid.weight(i);
      auto r = affine_orlicz(K, OrliczFunction::power(p, 2), grid256(), harness_opts(7));
      double lhs = std::pow(2.0 * kPi, p / 2.0) * r.value;
      double rhs = std::pow(cf, (2.0 + p) / 2.0);
      worst = std::max(worst, rel(lhs, rhs));
      o.require(rel(lhs, rhs) <= kTol, sm[k]->id + fmt(" p=%g rel %.3g", p, rel(lhs, rhs)));
    }
  }
  if (o.pass) o.detail = fmt("30 cases, max rel err %.2e", worst);
  return o;
}

// 3 -------------------------------------------------------------------------
Outcome crit_affine_invariance() {
  Outcome o;
  std::vector<const CorpusBody*> bodies;
  for (const auto& b : corpus())
    if (b.id.rfind("smooth-", 0) == 0 && bodies.size() < 6) bodies.push_back(&b);
  for (const auto& b : corpus())
    if (b.id.rfind("poly-", 0) == 0 && bodies.size() < 10) bodies.push_back(&b);
  std::vector<OrliczFunction> phis{OrliczFunction::power(2, 2), OrliczFunction::arctan_inv_n(2)};
  double worst = 0.0;
  for (std::size_t k = 0; k < bodies.size(); ++k) {
    SLTransform T = random_sl(2, stream_rng(99, "acceptance-sl", k)(), 3.0);
    ConvexBody TK = apply_sl(bodies[k]->body, T);
    for (const auto& phi : phis) {
      for (int which = 0; which < 2; ++which) {
        auto f = [&](const ConvexBody& K) {
          return which == 0 ? affine_orlicz(K, phi, grid256(), harness_opts(3)).value
                            : geominimal_orlicz(K, phi, grid256(), harness_opts(3)).value;
        };
        double a = f(bodies[k]->body), b = f(TK);
        double err = std::abs(b - a);
        bool ok = err <= kTol * std::abs(a);
        if (a != 0.0) worst = std::max(worst, err / std::abs(a));
        o.require(ok, bodies[k]->id + " " + phi.name() + fmt(" rel %.3g", a != 0 ? err / std::abs(a) : err));
      }
    }
  }
  if (o.pass) o.detail = fmt("40 cases, max rel change %.2e", worst);
  return o;
}

// 4 -------------------------------------------------------------------------
Outcome crit_comparison_chain() {
  Outcome o;
  HarnessOptions h;
  SuiteReport r = run_suite("comparison", corpus(), {}, grid256(), h);
  o.require(r.count(CaseStatus::Violated) == 0, fmt("%g Violated", r.count(CaseStatus::Violated)));
  int links = 0;
  for (const auto& c : r.cases) {
    if (c.claim.rfind("Omega <= nV_phi", 0) == 0) {
      ++links;
      o.require(c.lhs <= c.rhs * (1 + 1e-10), c.bodies[0] + " seeded link broken");
    }
    if (c.claim.rfind("Omega >= nV_phi", 0) == 0) {
      ++links;
      o.require(c.lhs >= c.rhs * (1 - 1e-10), c.bodies[0] + " seeded link broken");
    }
    if (c.claim.rfind("G ", 0) == 0 && c.relation != Relation::Eq)
      o.require(c.margin <= kTol, c.bodies[0] + " " + c.claim);
  }
  o.require(links > 0, "no seeded links");
  if (o.pass)
    o.detail = fmt("%g cases, 0 Violated, %g seeded links within 1e-10, %g Inconclusive", r.cases.size(), links,
                   r.count(CaseStatus::Inconclusive));
  return o;
}

// 5 -------------------------------------------------------------------------
Outcome crit_isoperimetric() {
  Outcome o;
  auto sm = smooth_bodies();
  int certified = 0;
  for (const auto* b : sm) {
    const double r = std::sqrt(volume(b->body) / kPi);  // vrad
    for (double p : {2.0, -1.0}) {
      auto phi = OrliczFunction::power(p, 2);
      const double GB = 2.0 * std::pow(1.0 / r, p) * kPi * r * r;  // n phi(1/r) omega_n r^n
      auto g = geominimal_orlicz(b->body, phi, grid256(), harness_opts(11));
      // the optimizer value bounds G from the certified side
      bool side_ok = p > 0 ? g.certified_side == Side::UpperBound : g.certified_side == Side::LowerBound;
      bool holds = p > 0 ? g.value <= GB * (1 + kTol) : g.value >= GB * (1 - kTol);
      o.require(side_ok && holds, b->id + fmt(" p=%g: %.6g vs %.6g", p, g.value, GB));
      if (side_ok && (p > 0 ? g.value <= GB : g.value >= GB)) ++certified;
    }
  }
  // equality on ellipsoids
  std::vector<CorpusBody> ells;
  for (const auto& b : corpus())
    if (b.body.kind() == BodyKind::Ball || b.body.kind() == BodyKind::Ellipsoid) ells.push_back(b);
  auto eq = equality_witness("isoperimetric", ells,
                             {OrliczFunction::power(2, 2), OrliczFunction::power(-1, 2)}, grid256());
  double worst = 0.0;
  for (const auto& c : eq.cases) {
    worst = std::max(worst, c.margin);
    o.require(c.margin <= kTol, c.bodies[0] + " equality off by " + fmt("%.3g", c.margin));
  }
  if (o.pass)
    o.detail = fmt("%g/40 strictly certified, equality max rel err %.2e", certified, worst);
  return o;
}

// 6 -------------------------------------------------------------------------
Outcome crit_alexander_fenchel() {
  Outcome o;
  auto sm = smooth_bodies();
  const std::vector<std::array<OrliczFunction, 2>> pairs{
      {OrliczFunction::power(2, 2), OrliczFunction::exp_neg_inv_n(2)},
      {OrliczFunction::power(-1, 2), OrliczFunction::arctan_inv_n(2)}};
  double worst = -1.0, worst_eq = 0.0;
  for (int k = 0; k < 10; ++k) {
    const auto& K1 = sm[2 * k]->body;
    const auto& K2 = sm[2 * k + 1]->body;
    const auto& ph = pairs[k % 2];
    for (int which = 0; which < 2; ++which) {
      auto single = [&](const ConvexBody& K, const OrliczFunction& phi) {
        return which == 0 ? affine_orlicz(K, phi, grid256(), harness_opts(5)).value
                          : geominimal_orlicz(K, phi, grid256(), harness_opts(5)).value;
      };
      std::vector<ConvexBody> Ks{K1, K2};
      std::vector<OrliczFunction> ps{ph[0], ph[1]};
      double m = which == 0 ? affine_orlicz_multi(Ks, ps, grid256(), harness_opts(5)).value
                            : geominimal_orlicz_multi(Ks, ps, grid256(), harness_opts(5)).value;
      double prod = single(K1, ph[0]) * single(K2, ph[1]);
      double margin = m * m / prod - 1.0;
      worst = std::max(worst, margin);
      o.require(margin <= kTol, sm[2 * k]->id + fmt(" margin %.3g", margin));
    }
  }
  // identical pairs, same phi
  for (int k = 0; k < 3; ++k) {
    const auto& K = sm[k]->body;
    for (const auto& phi : {OrliczFunction::power(2, 2), OrliczFunction::arctan_inv_n(2)}) {
      double m = affine_orlicz_multi({K, K}, {phi, phi}, grid256(), harness_opts(5)).value;
      double s = affine_orlicz(K, phi, grid256(), harness_opts(5)).value;
      worst_eq = std::max(worst_eq, rel(m, s));
      o.require(rel(m, s) <= kTol, sm[k]->id + " equality " + fmt("%.3g", rel(m, s)));
    }
  }
  if (o.pass) o.detail = fmt("40 pair cases, max margin %.2e; equality max rel err %.2e", worst, worst_eq);
  return o;
}

// 7 -------------------------------------------------------------------------
Outcome crit_ith_mixed_cyclic() {
  Outcome o;
  auto sm = smooth_bodies();
  auto p1 = OrliczFunction::power(-1, 2);
  auto p2 = OrliczFunction::arctan_inv_n(2);
  double worst = -1.0, worst_end = 0.0;
  for (int k = 0; k < 5; ++k) {
    const auto& K = sm[2 * k]->body;
    const auto& L = sm[2 * k + 1]->body;
    auto W = [&](double i) { return ith_mixed(K, L, p1, p2, i, Which::Affine, grid256(), harness_opts(13)).value; };
    double w0 = W(0), w1 = W(1), w2 = W(2);
    double margin = w1 * w1 / (w0 * w2) - 1.0;
    worst = std::max(worst, margin);
    o.require(margin <= kTol, sm[2 * k]->id + fmt(" chain margin %.3g", margin));
    double s1 = affine_orlicz(K, p1, grid256(), harness_opts(13)).value;
    double s2 = affine_orlicz(L, p2, grid256(), harness_opts(13)).value;
    worst_end = std::max({worst_end, rel(w0, s1), rel(w2, s2)});
    o.require(rel(w0, s1) <= kTol && rel(w2, s2) <= kTol, sm[2 * k]->id + " endpoint collapse");
  }
  if (o.pass) o.detail = fmt("5 pairs, max chain margin %.2e, endpoint max rel err %.2e", worst, worst_end);
  return o;
}

// 8 -------------------------------------------------------------------------
struct Polygon {
  std::vector<std::array<double, 2>> v;  // counter-clockwise
};

ConvexBody to_body(const Polygon& P) {
  std::vector<Vec> pts;
  for (auto [x, y] : P.v) {
    Vec p(2);
    p << x, y;
    pts.push_back(p);
  }
  return ConvexBody::vpolytope(pts);
}

// (1/n) sum over edges of phi(h_Q/h_K) h_K |edge|
double facet_sum(const Polygon& K, const Polygon& Q, const std::function<double(double)>& phi) {
  double acc = 0.0;
  const std::size_t m = K.v.size();
  for (std::size_t i = 0; i < m; ++i) {
    auto a = K.v[i], b = K.v[(i + 1) % m];
    double dx = b[0] - a[0], dy = b[1] - a[1];
    double len = std::hypot(dx, dy);
    double ux = dy / len, uy = -dx / len;
    double hK = ux * a[0] + uy * a[1];
    double hQ = -1e300;
    for (auto q : Q.v) hQ = std::max(hQ, ux * q[0] + uy * q[1]);
    acc += phi(hQ / hK) * hK * len;
  }
  return acc / 2.0;
}

Outcome crit_kernel_exactness() {
  Outcome o;
  std::vector<Polygon> polys{
      {{{1, 1}, {-1, 1}, {-1, -1}, {1, -1}}},
      {{{2, 0}, {0.5, 1.2}, {-1, 0.8}, {-1.3, -0.9}, {0.7, -1.1}}},
      {{{1.5, -0.5}, {0.2, 1.7}, {-0.9, -0.8}}},
      {{{0.9, 0.1}, {0.6, 0.8}, {-0.3, 0.95}, {-1, 0.2}, {-0.7, -0.7}, {0.4, -0.9}}}};
  std::vector<std::pair<std::string, std::function<double(double)>>> fs{
      {"power:2", [](double t) { return t * t; }},
      {"power:-1", [](double t) { return 1.0 / t; }},
      {"arctan_inv_n", [](double t) { return std::atan(1.0 / (t * t)); }},
      {"exp_neg_inv_n", [](double t) { return std::exp(-1.0 / (t * t)); }}};
  std::vector<OrliczFunction> lib{OrliczFunction::power(2, 2), OrliczFunction::power(-1, 2),
                                  OrliczFunction::arctan_inv_n(2), OrliczFunction::exp_neg_inv_n(2)};
  double worst = 0.0, worst_h = 0.0;
  for (std::size_t a = 0; a < polys.size(); ++a) {
    for (std::size_t b = 0; b < polys.size(); ++b) {
      ConvexBody K = to_body(polys[a]), Q = to_body(polys[b]);
      for (std::size_t f = 0; f < fs.size(); ++f) {
        double oracle = facet_sum(polys[a], polys[b], fs[f].second);
        double got = v_phi(K, Q, lib[f]).value;
        worst = std::max(worst, rel(got, oracle));
        o.require(rel(got, oracle) <= 1e-12, fs[f].first + fmt(" pair (%g,%g) rel %.3g", a, b, rel(got, oracle)));
      }
      for (double p : {-1.5, 0.5, 2.0, 3.0}) {
        double base = v_p(K, Q, p);
        for (double lam : {0.3, 2.5}) {
          double e1 = rel(v_p(K, scale(Q, lam), p), std::pow(lam, p) * base);
          double e2 = rel(v_p(scale(K, lam), Q, p), std::pow(lam, 2.0 - p) * base);
          worst_h = std::max({worst_h, e1, e2});
          o.require(e1 <= 1e-10 && e2 <= 1e-10, fmt("v_p homogeneity p=%g lambda=%g rel %.3g", p, lam, std::max(e1, e2)));
        }
      }
    }
  }
  if (o.pass) o.detail = fmt("facet-sum max rel err %.2e, homogeneity max rel err %.2e", worst, worst_h);
  return o;
}

// 9 -------------------------------------------------------------------------
int run(const std::string& cmd) {
  int st = std::system(cmd.c_str());
  return WIFEXITED(st) ? WEXITSTATUS(st) : -1;
}

Outcome crit_degeneracy(const std::string& cli, const std::string& data, const std::string& scratch) {
  Outcome o;
  const std::string out = scratch + "/square_affine.json";
  int code = run("\"" + cli + "\" compute --quantity affine --body \"" + data + "/square.json\" --phi power:2 --out \"" +
                 out + "\"");
  o.require(code == 2, fmt("exit code %g, expected 2", code));
  if (code == 2) {
    std::ifstream in(out);
    auto j = nlohmann::json::parse(in);
    o.require(j["result"]["degenerate"].get<bool>(), "degenerate flag missing");
    o.require(j["result"]["value"].get<double>() == 0.0, "value is not n|K| inf phi = 0");
  }
  // library: n|K| inf phi for other increasing Phi functions
  ConvexBody sq = to_body({{{1, 1}, {-1, 1}, {-1, -1}, {1, -1}}});
  for (const auto& phi : {OrliczFunction::power(0.5, 2), OrliczFunction::exp_neg_inv_n(2)}) {
    auto r = affine_orlicz(sq, phi, grid256());
    o.require(r.degenerate && r.value == 2.0 * 4.0 * phi.infimum(), phi.name() + " not degenerate at n|K| inf phi");
  }
  if (o.pass) o.detail = "exit 2, Degenerate, value 0";
  return o;
}

// 10 ------------------------------------------------------------------------
std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Outcome crit_determinism(const std::string& cli, const std::string& scratch) {
  Outcome o;
  std::string a = scratch + "/verify_a.csv", b = scratch + "/verify_b.csv";
  for (const auto& f : {a, b}) {
    int code = run("\"" + cli + "\" verify isoperimetric --dim 2 --seed 42 --format csv --out \"" + f + "\" 2>/dev/null");
    o.require(code == 0, fmt("verify exit code %g", code));
  }
  std::string x = slurp(a), y = slurp(b);
  o.require(!x.empty() && x == y, "CSV reports differ");
  if (o.pass) o.detail = fmt("%g bytes identical", x.size());
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 4) {
    std::fprintf(stderr, "usage: acceptance <orlicz cli> <data dir> <scratch dir>\n");
    return 2;
  }
  const std::string cli = argv[1], data = argv[2], scratch = argv[3];
  std::filesystem::create_directories(scratch);
  using Criterion = std::pair<std::string, std::function<Outcome()>>;
  const std::vector<Criterion> criteria{
      Criterion{"ellipsoid closed form", crit_ellipsoid_closed_form},
      Criterion{"L_p cross-check", crit_lp_cross_check},
      Criterion{"affine invariance", crit_affine_invariance},
      Criterion{"comparison chain", crit_comparison_chain},
      Criterion{"isoperimetric", crit_isoperimetric},
      Criterion{"Holder / Alexander-Fenchel", crit_alexander_fenchel},
      Criterion{"i-th mixed cyclic", crit_ith_mixed_cyclic},
      Criterion{"kernel exactness", crit_kernel_exactness},
      Criterion{"degeneracy contract", [&] { return crit_degeneracy(cli, data, scratch); }},
      Criterion{"determinism", [&] { return crit_determinism(cli, scratch); }},
  };
  int failed = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    auto t0 = std::chrono::steady_clock::now();
    Outcome r;
    try {
      r = criteria[k].second();
    } catch (const std::exception& e) {
      r.pass = false;
      r.detail = std::string("exception: ") + e.what();
    }
    double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("criterion %zu (%s): %s  [%s; %.1f s]\n", k + 1, criteria[k].first.c_str(), r.pass ? "PASS" : "FAIL",
                r.detail.c_str(), dt);
    std::fflush(stdout);
    if (!r.pass) ++failed;
  }
  return failed == 0 ? 0 : 1;
}
