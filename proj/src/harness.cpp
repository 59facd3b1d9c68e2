#include "orlicz/harness.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <sstream>

#include "orlicz/errors.hpp"
#include "orlicz/mixed_volumes.hpp"
#include "orlicz/numeric.hpp"

namespace orlicz {

const char* to_string(CaseStatus s) {
  switch (s) {
    case CaseStatus::Certified: return "Certified";
    case CaseStatus::Inconclusive: return "Inconclusive";
    case CaseStatus::Violated: return "Violated";
  }
  return "?";
}

const char* to_string(Bound b) {
  switch (b) {
    case Bound::Upper: return "upper";
    case Bound::Lower: return "lower";
    case Bound::Exact: return "exact";
    case Bound::None: return "none";
  }
  return "?";
}

const char* to_string(Relation r) {
  switch (r) {
    case Relation::Leq: return "<=";
    case Relation::Geq: return ">=";
    case Relation::Eq: return "=";
  }
  return "?";
}

int SuiteReport::count(CaseStatus s) const {
  return static_cast<int>(std::count_if(cases.begin(), cases.end(), [&](const CaseResult& c) { return c.status == s; }));
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// relative excess of a over b
double excess(double a, double b) {
  if (a == b) return 0.0;
  if (std::isinf(b)) return b > 0 ? -kInf : kInf;
  if (std::isinf(a)) return a > 0 ? kInf : -kInf;
  return (a - b) / std::max(std::abs(b), 1e-300);
}

}  // namespace

CaseResult judge(Relation rel, Estimate lhs, Estimate rhs, double tol) {
  CaseResult c;
  c.relation = rel;
  c.lhs = lhs.value;
  c.rhs = rhs.value;
  c.lhs_side = lhs.side;
  c.rhs_side = rhs.side;
  if (std::isnan(lhs.value) || std::isnan(rhs.value)) {
    c.margin = kNaN;
    c.status = CaseStatus::Inconclusive;
    c.notes = "not evaluated";
    return c;
  }
  if (rel == Relation::Eq) {
    c.margin = std::abs(excess(lhs.value, rhs.value));
    c.status = c.margin <= tol ? CaseStatus::Certified : CaseStatus::Violated;
    return c;
  }
  const Estimate& a = rel == Relation::Leq ? lhs : rhs;
  const Estimate& b = rel == Relation::Leq ? rhs : lhs;
  c.margin = excess(a.value, b.value);
  const bool a_ok = a.side == Bound::Upper || a.side == Bound::Exact;
  const bool b_ok = b.side == Bound::Lower || b.side == Bound::Exact;
  if (c.margin > tol) {
    c.status = CaseStatus::Violated;
  } else if ((b.value == kInf && b.side == Bound::Exact) || (a_ok && b_ok)) {
    c.status = CaseStatus::Certified;
  } else {
    c.status = CaseStatus::Inconclusive;
    c.notes = std::string("uncertified side: ") + (rel == Relation::Leq ? "lhs " : "rhs ") + to_string(a.side) +
              ", " + (rel == Relation::Leq ? "rhs " : "lhs ") + to_string(b.side);
  }
  return c;
}

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = {
      "ellipsoid-closed-form", "comparison",        "monotonicity-phi", "cyclic-monotonicity",
      "isoperimetric",         "santalo-style",     "affine-invariance", "alexander-fenchel",
      "ith-mixed-cyclic",      "lp-consistency"};
  return names;
}

std::vector<OrliczFunction> default_phis(const std::string& suite, int n) {
  using F = OrliczFunction;
  const double below = -n - 1.0;  // power in Phi, decreasing
  if (suite == "ellipsoid-closed-form")
    return {F::power(2, n), F::power(-1, n), F::arctan_inv_n(n), F::log1p_inv_n(n), F::constant(3, n)};
  if (suite == "comparison")
    return {F::power(2, n), F::power(0.5, n), F::exp_neg_inv_n(n), F::power(-1, n), F::arctan_inv_n(n)};
  if (suite == "monotonicity-phi")
    return {F::power(1, n),
            F::power(2, n),
            F::custom([](double t) { return 2.0 * t * t; }, n, "2*power(2)"),
            F::exp_neg_inv_n(n),
            F::constant(1, n),
            F::arctan_inv_n(n),
            F::constant(kPi / 2, n)};
  if (suite == "cyclic-monotonicity")
    return {F::power(1, n),  F::power(0.5, n),       F::power(2, n),         F::power(below, n),
            F::power(-1, n), F::arctan_inv_n(n),     F::log1p_inv_n(n),      F::exp_neg_inv_n(n)};
  if (suite == "isoperimetric")
    return {F::power(2, n),  F::power(0.5, n),   F::exp_neg_inv_n(n),
            F::power(below, n), F::power(-1, n), F::arctan_inv_n(n)};
  if (suite == "santalo-style")
    return {F::power(2, n), F::power(0.5, n), F::exp_neg_inv_n(n), F::power(-1, n), F::arctan_inv_n(n)};
  if (suite == "affine-invariance") return {F::power(2, n), F::arctan_inv_n(n)};
  if (suite == "alexander-fenchel" || suite == "ith-mixed-cyclic")
    return {F::power(2, n), F::exp_neg_inv_n(n), F::power(-1, n), F::arctan_inv_n(n)};
  if (suite == "lp-consistency") return {F::power(0.5, n), F::power(1, n), F::power(2, n), F::power(-1, n)};
  fail(ErrorCode::UnknownSuite, "unknown suite '" + suite + "'");
}

std::vector<CorpusBody> golden_corpus(const CorpusOptions& o) {
  std::vector<CorpusBody> out;
  const SphereGrid grid = build_grid(o.dim, o.resolution);
  const double target = omega(o.dim);
  auto normalize = [&](ConvexBody K) {
    K = translate(K, -centroid(K), &grid);
    return scale(K, std::pow(target / volume(K), 1.0 / o.dim));
  };
  auto sub = [&](std::string_view stream, int i) { return stream_rng(o.seed, stream, i)(); };
  auto id = [](const char* stem, int i) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%s-%02d", stem, i);
    return std::string(buf);
  };
  for (int i = 0; i < o.smooth; ++i)
    out.push_back({id("smooth", i), normalize(random_body(o.dim, sub("corpus-smooth", i), BodyClass::Smooth, o.resolution))});
  for (int i = 0; i < o.polytopes; ++i)
    out.push_back({id("poly", i), normalize(random_body(o.dim, sub("corpus-polytope", i), BodyClass::Polytope))});
  for (int i = 0; i < o.ellipsoids; ++i) {
    if (i == 0) {
      out.push_back({"ball", ConvexBody::ball(1.0, o.dim)});
      continue;
    }
    Mat A = random_sl(o.dim, sub("corpus-ellipsoid", i), 4.0).matrix;
    out.push_back({id("ellipsoid", i), ConvexBody::ellipsoid(A)});
  }
  return out;
}

namespace {

bool has_density(const ConvexBody& K) {
  if (K.is_polytope()) return false;
  if (const auto* s = K.as<SmoothSampled>()) return s->f.has_value();
  return true;
}

bool is_ellipsoid(const ConvexBody& K) { return K.kind() == BodyKind::Ball || K.kind() == BodyKind::Ellipsoid; }

bool is_centered(const ConvexBody& K) { return centroid(K).norm() <= 1e-6 * vrad(K); }

Bound bound_of(const FunctionalResult& r) {
  if (r.degenerate) return Bound::Exact;
  switch (r.certified_side) {
    case Side::UpperBound: return Bound::Upper;
    case Side::LowerBound: return Bound::Lower;
    case Side::Exact: return Bound::Exact;
  }
  return Bound::None;
}

Estimate est(const FunctionalResult& r) { return {r.value, bound_of(r)}; }
Estimate exact(double v) { return {v, Bound::Exact}; }

Bound flip(Bound b) {
  if (b == Bound::Upper) return Bound::Lower;
  if (b == Bound::Lower) return Bound::Upper;
  return b;
}

// sides of a product of positive quantities
Bound combine(Bound a, Bound b) {
  if (a == Bound::Exact) return b;
  if (b == Bound::Exact) return a;
  return a == b ? a : Bound::None;
}

Estimate mul(Estimate a, Estimate b) { return {a.value * b.value, combine(a.side, b.side)}; }
Estimate scaled(Estimate a, double c) { return {a.value * c, a.side}; }
Estimate power_of(Estimate a, double e) {
  if (e == 0.0) return exact(1.0);
  return {std::pow(a.value, e), e > 0 ? a.side : flip(a.side)};
}

bool is_inf_class(const OrliczFunction& phi) { return direction_for(phi) == Direction::Inf; }

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

// n V_phi(K, vrad(L) L°) for a star body L on the kernel grid
double affine_objective(const ConvexBody& K, const OrliczFunction& phi, const StarBody& L, const SphereGrid& grid) {
  const double v = vrad(L);
  std::vector<double> rho = L.rho;
  for (double& x : rho) x /= v;
  return K.dim() * v_phi_polar(K, StarBody(L.grid, std::move(rho)), phi, &grid).value;
}

// G(B_K) for the ball with the volume of K, G([B_{K°}]°) with r = vrad(K°)
double ball_value(const OrliczFunction& phi, double r, int n) { return n * phi(1.0 / r) * omega(n) * std::pow(r, n); }
double polar_ball_value(const OrliczFunction& phi, double ro, int n) {
  return n * phi(ro) * omega(n) * std::pow(ro, -n);
}

struct Ctx {
  const std::vector<OrliczFunction>& phis;
  const SphereGrid& grid;
  const HarnessOptions& o;
  SuiteReport& rep;
  std::map<std::string, FunctionalResult> memo;
  int n() const { return grid.dim(); }

  OptimizerOptions opt_for(const std::string& key) const {
    OptimizerOptions oo = o.optimizer;
    oo.seed = stream_rng(o.seed, key)();
    return oo;
  }

  template <class Fn>
  const FunctionalResult& cached(const std::string& key, Fn&& fn) {
    auto it = memo.find(key);
    if (it != memo.end()) return it->second;
    return memo.emplace(key, fn(opt_for(key))).first->second;
  }

  const FunctionalResult& geo(const CorpusBody& b, const OrliczFunction& phi) {
    return cached(b.id + "|" + phi.name() + "|G",
                  [&](const OptimizerOptions& oo) { return geominimal_orlicz(b.body, phi, grid, oo); });
  }
  // seeded with the geominimal witness when `seeded`
  const FunctionalResult& aff(const CorpusBody& b, const OrliczFunction& phi, bool seeded = false) {
    if (!seeded)
      return cached(b.id + "|" + phi.name() + "|A",
                    [&](const OptimizerOptions& oo) { return affine_orlicz(b.body, phi, grid, oo); });
    const FunctionalResult& g = geo(b, phi);
    const ConvexBody* Q = g.body_witness.empty() ? nullptr : &g.body_witness[0];
    return cached(b.id + "|" + phi.name() + "|AS",
                  [&](const OptimizerOptions& oo) { return affine_orlicz(b.body, phi, grid, oo, Q); });
  }

  // Omega through the L_p closed form when phi is a power and K has curvature
  Estimate aff_best(const CorpusBody& b, const OrliczFunction& phi) {
    if (phi.kind() == PhiKind::Power && has_density(b.body)) {
      const double p = phi.param();
      const double cf = lp_affine_closed_form(b.body, p, &grid);
      return exact(std::pow(n() * omega(n()), -p / n()) * std::pow(cf, (n() + p) / n()));
    }
    return est(aff(b, phi));
  }

  void add(CaseResult c, std::vector<std::string> bodies, std::vector<std::string> phis_, std::string claim,
           const std::string& note = "") {
    c.bodies = std::move(bodies);
    c.phis = std::move(phis_);
    c.claim = std::move(claim);
    if (!note.empty()) c.notes = c.notes.empty() ? note : note + "; " + c.notes;
    rep.cases.push_back(std::move(c));
  }

  void check(Relation rel, Estimate lhs, Estimate rhs, std::vector<std::string> bodies,
             std::vector<std::string> phis_, std::string claim, const std::string& note = "") {
    add(judge(rel, lhs, rhs, o.tol), std::move(bodies), std::move(phis_), std::move(claim), note);
  }

  // Runs fn; a library error becomes an Inconclusive case instead of aborting the suite.
  template <class Fn>
  void guarded(const std::vector<std::string>& bodies, const std::vector<std::string>& phis_, const std::string& what,
               Fn&& fn) {
    try {
      fn();
    } catch (const Error& e) {
      CaseResult c = judge(Relation::Leq, {kNaN, Bound::None}, {kNaN, Bound::None}, o.tol);
      c.notes = std::string("error: ") + std::string(to_string(e.code())) + ": " + e.what();
      add(std::move(c), bodies, phis_, what);
    }
  }

  void skip(const std::string& what) { rep.notes.push_back(what); }
};

// ---------------------------------------------------------------- suites

void suite_ellipsoid(Ctx& cx, const std::vector<CorpusBody>& corpus) {
  for (const auto& b : corpus) {
    if (!is_ellipsoid(b.body)) {
      cx.skip("skipped " + b.id + ": not an ellipsoid");
      continue;
    }
    for (const auto& phi : cx.phis) {
      cx.guarded({b.id}, {phi.name()}, "closed form", [&] {
        const double cf = ellipsoid_closed_form(b.body, phi);
        cx.check(Relation::Eq, est(cx.aff(b, phi)), exact(cf), {b.id}, {phi.name()}, "Omega = n phi(vrad(E°)) |E|");
        cx.check(Relation::Eq, est(cx.geo(b, phi)), exact(cf), {b.id}, {phi.name()}, "G = n phi(vrad(E°)) |E|");
      });
    }
  }
}

void suite_comparison(Ctx& cx, const std::vector<CorpusBody>& corpus) {
  const int n = cx.n();
  for (const auto& b : corpus) {
    for (const auto& phi : cx.phis) {
      cx.guarded({b.id}, {phi.name()}, "comparison", [&] {
        const bool inf = is_inf_class(phi);
        const Relation rel = inf ? Relation::Leq : Relation::Geq;
        const char* op = inf ? " <= " : " >= ";
        const FunctionalResult& G = cx.geo(b, phi);
        const FunctionalResult& A = cx.aff(b, phi, true);
        if (!G.body_witness.empty()) {
          // both sides evaluate the same Q*, so the link is a statement about Q*
          cx.check(rel, est(A), exact(G.value), {b.id}, {phi.name()},
                   std::string("Omega") + op + "nV_phi(K, vrad(Q*°) Q*)", "Q* = geominimal witness");
        } else {
          cx.check(rel, est(A), est(G), {b.id}, {phi.name()}, std::string("Omega") + op + "G", G.note);
        }
        const double S = s_phi(b.body, phi, &cx.grid);
        const double VP = phi(vrad(polar(b.body))) * n * volume(b.body);
        cx.check(rel, est(G), exact(S), {b.id}, {phi.name()}, std::string("G") + op + "S_phi");
        cx.check(rel, est(G), exact(VP), {b.id}, {phi.name()}, std::string("G") + op + "phi(vrad(K°)) n|K|");
      });
    }
  }
}

struct PointwiseOrder {
  bool le = true, ge = true;
};

PointwiseOrder pointwise_order(const OrliczFunction& a, const OrliczFunction& b) {
  PointwiseOrder o;
  const int m = 2001;
  for (int k = 0; k < m; ++k) {
    double t = kAuditLo * std::pow(kAuditHi / kAuditLo, static_cast<double>(k) / (m - 1));
    double x = a.raw(t), y = b.raw(t);
    if (!std::isfinite(x) || !std::isfinite(y)) continue;
    if (x > y * (1 + 1e-12)) o.le = false;
    if (x < y * (1 - 1e-12)) o.ge = false;
  }
  return o;
}

bool same_class(const OrliczFunction& a, const OrliczFunction& b) {
  if (a.cls() == PhiClass::ConstantBoth || b.cls() == PhiClass::ConstantBoth) return true;
  return a.cls() == b.cls();
}

void suite_monotonicity(Ctx& cx, const std::vector<CorpusBody>& corpus) {
  const auto& P = cx.phis;
  bool any = false;
  for (std::size_t i = 0; i < P.size(); ++i) {
    for (std::size_t j = i + 1; j < P.size(); ++j) {
      if (!same_class(P[i], P[j])) continue;
      if (P[i].cls() == PhiClass::ConstantBoth && P[j].cls() == PhiClass::ConstantBoth) continue;
      any = true;
      auto ord = pointwise_order(P[i], P[j]);
      if (!ord.le && !ord.ge) {
        CaseResult c = judge(Relation::Leq, {kNaN, Bound::None}, {kNaN, Bound::None}, cx.o.tol);
        c.notes = "pointwise phi <= psi not established on [1e-4, 1e4] in either order";
        cx.add(std::move(c), {"*"}, {P[i].name(), P[j].name()}, "Omega_phi <= Omega_psi, G_phi <= G_psi");
        continue;
      }
      const OrliczFunction& lo = ord.le ? P[i] : P[j];
      const OrliczFunction& hi = ord.le ? P[j] : P[i];
      const OrliczFunction& ref = lo.cls() == PhiClass::ConstantBoth ? hi : lo;
      const bool inf = is_inf_class(ref);
      std::vector<std::string> ids = {lo.name(), hi.name()};
      for (const auto& b : corpus) {
        cx.guarded({b.id}, ids, "monotonicity", [&] {
          // affine
          {
            const FunctionalResult& Alo = cx.aff(b, lo);
            const FunctionalResult& Ahi = cx.aff(b, hi);
            CaseResult direct = judge(Relation::Leq, est(Alo), est(Ahi), cx.o.tol);
            if (direct.status == CaseStatus::Certified) {
              cx.add(direct, {b.id}, ids, "Omega_phi <= Omega_psi");
            } else if (inf && !Ahi.star_witness.empty()) {
              double x = affine_objective(b.body, lo, Ahi.star_witness[0], cx.grid);
              Estimate l{std::min(Alo.value, x), Bound::Upper};
              cx.check(Relation::Leq, l, exact(Ahi.value), {b.id}, ids, "Omega_phi <= nV_psi(K, L*°), L* = psi witness",
                       "witness level");
            } else if (!inf && !Alo.star_witness.empty()) {
              double y = affine_objective(b.body, hi, Alo.star_witness[0], cx.grid);
              Estimate r = bound_of(Ahi) == Bound::Exact ? est(Ahi) : Estimate{std::max(Ahi.value, y), Bound::Lower};
              cx.check(Relation::Leq, exact(Alo.value), r, {b.id}, ids, "nV_phi(K, L*°) <= Omega_psi, L* = phi witness",
                       "witness level");
            } else {
              cx.add(direct, {b.id}, ids, "Omega_phi <= Omega_psi");
            }
          }
          // geominimal
          {
            const FunctionalResult& Glo = cx.geo(b, lo);
            const FunctionalResult& Ghi = cx.geo(b, hi);
            CaseResult direct = judge(Relation::Leq, est(Glo), est(Ghi), cx.o.tol);
            if (direct.status == CaseStatus::Certified) {
              cx.add(direct, {b.id}, ids, "G_phi <= G_psi");
            } else if (inf && !Ghi.body_witness.empty()) {
              double x = geominimal_objective(b.body, lo, Ghi.body_witness[0], cx.grid);
              Estimate l{std::min(Glo.value, x), Bound::Upper};
              cx.check(Relation::Leq, l, exact(Ghi.value), {b.id}, ids, "G_phi <= nV_psi(K, Q*), Q* = psi witness",
                       "witness level");
            } else if (!inf && !Glo.body_witness.empty()) {
              double y = geominimal_objective(b.body, hi, Glo.body_witness[0], cx.grid);
              Estimate r = bound_of(Ghi) == Bound::Exact ? est(Ghi) : Estimate{std::max(Ghi.value, y), Bound::Lower};
              cx.check(Relation::Leq, exact(Glo.value), r, {b.id}, ids, "nV_phi(K, Q*) <= G_psi, Q* = phi witness",
                       "witness level");
            } else {
              cx.add(direct, {b.id}, ids, "G_phi <= G_psi");
            }
          }
        });
      }
    }
  }
  if (!any) fail(ErrorCode::ClassMismatch, "monotonicity-phi needs two functions of the same class");
}

struct Condition {
  const char* tag;
  Relation rel;
  bool jensen;  // proof goes through Jensen at a fixed L or Q
};

// Which sufficient conditions for the cyclic inequality hold for H = phi o psi^{-1}.
std::vector<Condition> cyclic_conditions(const OrliczFunction& phi, const OrliczFunction& psi, int& mono) {
  std::vector<Condition> out;
  mono = 0;
  double a = psi.raw(1e-3), b = psi.raw(1e3);
  double lo = std::min(a, b), hi = std::max(a, b);
  if (!(lo > 0.0) || !std::isfinite(hi) || !(hi > lo)) return out;
  auto H = [&](double t) {
    try {
      return phi.raw(psi.inverse(t));
    } catch (const Error&) {
      return kNaN;
    }
  };
  ShapeAudit s = audit_shape(H, lo, hi, kAuditSamples);
  if (s.valid < kAuditSamples / 2) return out;
  mono = s.increasing ? 1 : (s.decreasing ? -1 : 0);
  const PhiClass cp = phi.cls(), cq = psi.cls();
  const bool same = cp == cq;
  const bool mixed = (cp == PhiClass::Phi && cq == PhiClass::Psi) || (cp == PhiClass::Psi && cq == PhiClass::Phi);
  if (cp == PhiClass::Phi && cq == PhiClass::Psi && s.increasing) out.push_back({"Phi/Psi, H increasing", Relation::Leq, false});
  if (cp == PhiClass::Phi && cq == PhiClass::Phi && s.decreasing) out.push_back({"Phi/Phi, H decreasing", Relation::Leq, false});
  if (same && s.concave && s.increasing) out.push_back({"same class, H concave increasing", Relation::Leq, true});
  if (cp == PhiClass::Psi && cq == PhiClass::Phi && s.increasing) out.push_back({"Psi/Phi, H increasing", Relation::Geq, false});
  if (mixed && s.convex && s.decreasing) out.push_back({"mixed classes, H convex decreasing", Relation::Geq, true});
  if (same && s.convex && s.increasing) out.push_back({"same class, H convex increasing", Relation::Geq, true});
  return out;
}

void suite_cyclic(Ctx& cx, const std::vector<CorpusBody>& corpus) {
  const auto& P = cx.phis;
  const int n = cx.n();
  struct Pair {
    std::size_t i, j;
    std::vector<Condition> conds;
    int mono;
  };
  std::vector<Pair> pairs;
  for (std::size_t i = 0; i < P.size(); ++i) {
    for (std::size_t j = 0; j < P.size(); ++j) {
      if (i == j) continue;
      const auto& phi = P[i];
      const auto& psi = P[j];
      if (phi.cls() == PhiClass::ConstantBoth || psi.cls() == PhiClass::ConstantBoth) continue;
      if (!psi.classification().invertible) continue;
      int mono = 0;
      auto conds = cyclic_conditions(phi, psi, mono);
      if (conds.empty()) {
        cx.skip("pair (" + phi.name() + ", " + psi.name() + "): no sufficient condition holds for H");
        continue;
      }
      pairs.push_back({i, j, std::move(conds), mono});
    }
  }
  if (pairs.empty()) fail(ErrorCode::ClassMismatch, "no (phi, psi) pair satisfies a condition of the cyclic inequality");
  for (const auto& b : corpus) {
    if (!has_density(b.body)) {
      cx.skip("skipped " + b.id + ": no curvature function");
      continue;
    }
    const double nK = n * volume(b.body);
    for (const auto& pr : pairs) {
      const auto& phi = P[pr.i];
      const auto& psi = P[pr.j];
      std::vector<std::string> ids = {phi.name(), psi.name()};
      auto through_H = [&](Estimate x) {
        Estimate r{phi.raw(psi.inverse(x.value)), Bound::None};
        if (pr.mono > 0) r.side = x.side;
        else if (pr.mono < 0) r.side = flip(x.side);
        return r;
      };
      // The Jensen-type conditions hold at any fixed L or Q, so when the
      // optimizer sides do not combine the claim is checked at a witness.
      auto cyclic_case = [&](bool aff, const Condition& cond, std::string note) {
        const std::string sym = aff ? "Omega" : "G";
        Estimate ephi = aff ? cx.aff_best(b, phi) : est(cx.geo(b, phi));
        Estimate epsi = aff ? cx.aff_best(b, psi) : est(cx.geo(b, psi));
        const FunctionalResult* Rphi = nullptr;
        const FunctionalResult* Rpsi = nullptr;
        auto has_w = [&](const FunctionalResult& R) { return aff ? !R.star_witness.empty() : !R.body_witness.empty(); };
        if (ephi.side != Bound::Exact) Rphi = aff ? &cx.aff(b, phi) : &cx.geo(b, phi);
        if (epsi.side != Bound::Exact) Rpsi = aff ? &cx.aff(b, psi) : &cx.geo(b, psi);
        if (Rphi && !has_w(*Rphi)) Rphi = nullptr;
        if (Rpsi && !has_w(*Rpsi)) Rpsi = nullptr;
        auto J = [&](const OrliczFunction& f, const FunctionalResult& W) {
          return aff ? affine_objective(b.body, f, W.star_witness[0], cx.grid)
                     : geominimal_objective(b.body, f, W.body_witness[0], cx.grid);
        };
        auto improve = [&](Estimate& e, const OrliczFunction& f, const FunctionalResult* other) {
          if (e.side == Bound::Exact || !other) return;
          double x = J(f, *other);
          e.value = e.side == Bound::Upper ? std::min(e.value, x) : std::max(e.value, x);
        };
        improve(ephi, phi, Rpsi);
        improve(epsi, psi, Rphi);
        const bool leq = cond.rel == Relation::Leq;
        const char* op = leq ? " <= " : " >= ";
        Estimate l = scaled(ephi, 1.0 / nK);
        Estimate r = through_H(scaled(epsi, 1.0 / nK));
        std::string lname = sym + "_phi/(n|K|)", rname = "H(" + sym + "_psi/(n|K|))";
        CaseResult c = judge(cond.rel, l, r, cx.o.tol);
        if (c.status == CaseStatus::Inconclusive && cond.jensen) {
          const Bound lwant = leq ? Bound::Upper : Bound::Lower;
          const Bound rwant = leq ? Bound::Lower : Bound::Upper;
          bool changed = false;
          if (l.side != Bound::Exact && l.side != lwant && Rphi) {
            l = exact(Rphi->value / nK);
            lname = "nV_phi(K, W_phi*)/(n|K|)";
            changed = true;
          }
          if (r.side != Bound::Exact && r.side != rwant && Rpsi) {
            r = exact(phi.raw(psi.inverse(Rpsi->value / nK)));
            rname = "H(nV_psi(K, W_psi*)/(n|K|))";
            changed = true;
          }
          if (changed) {
            c = judge(cond.rel, l, r, cx.o.tol);
            note += ", witness level, W* = optimizer witness";
          }
        }
        cx.add(c, {b.id}, ids, lname + op + rname, note);
      };
      cx.guarded({b.id}, ids, "cyclic", [&] {
        for (const auto& cond : pr.conds) {
          std::string note = std::string("condition: ") + cond.tag;
          if (psi.kind() == PhiKind::Power && psi.param() == 1.0) note += ", psi = t";
          cyclic_case(true, cond, note);
          cyclic_case(false, cond, note);
        }
      });
    }
  }
}

void suite_isoperimetric(Ctx& cx, const std::vector<CorpusBody>& corpus) {
  const int n = cx.n();
  auto shift_of = [&](const CorpusBody& b, std::size_t idx) {
    auto rng = stream_rng(cx.o.seed, "shift", idx);
    std::normal_distribution<double> N;
    Vec z(n);
    for (int k = 0; k < n; ++k) z[k] = N(rng);
    double hmin = kInf;
    for (std::size_t i = 0; i < cx.grid.size(); ++i) hmin = std::min(hmin, support(b.body, cx.grid.node(i)));
    z *= 0.3 * hmin / z.norm();
    return CorpusBody{b.id + "+shift", translate(b.body, z, &cx.grid)};
  };
  auto centered_cases = [&](const CorpusBody& b) {
    const double r = vrad(b.body);
    const double ro = vrad(polar(b.body));
    for (const auto& phi : cx.phis) {
      cx.guarded({b.id}, {phi.name()}, "isoperimetric", [&] {
        const std::vector<std::string> ids{phi.name()};
        const Estimate GB = exact(ball_value(phi, r, n));
        if (is_inf_class(phi)) {
          const Estimate GP = exact(polar_ball_value(phi, ro, n));
          cx.check(Relation::Leq, est(cx.aff(b, phi)), GP, {b.id}, ids, "Omega <= G([B_{K°}]°)");
          cx.check(Relation::Leq, est(cx.geo(b, phi)), GP, {b.id}, ids, "G <= G([B_{K°}]°)");
          if (increasing(phi.classification().monotone)) {
            cx.check(Relation::Leq, est(cx.aff(b, phi)), GB, {b.id}, ids, "Omega <= G(B_K)");
            cx.check(Relation::Leq, est(cx.geo(b, phi)), GB, {b.id}, ids, "G <= G(B_K)");
          }
        } else {
          cx.check(Relation::Geq, est(cx.aff(b, phi)), GB, {b.id}, ids, "Omega >= G(B_K)");
          cx.check(Relation::Geq, est(cx.geo(b, phi)), GB, {b.id}, ids, "G >= G(B_K)");
        }
      });
    }
  };
  // origin away from the centroid: concave increasing Phi / convex decreasing Psi
  auto offcenter_cases = [&](const CorpusBody& b) {
    const double r = vrad(b.body);
    for (const auto& phi : cx.phis) {
      ShapeAudit s = audit_shape([&](double t) { return phi.raw(t); }, kAuditLo, kAuditHi, kAuditSamples);
      const bool inf = is_inf_class(phi);
      if (phi.cls() == PhiClass::ConstantBoth) continue;
      if (inf && !(s.concave && s.increasing)) continue;
      if (!inf && !(s.convex && s.decreasing)) continue;
      cx.guarded({b.id}, {phi.name()}, "isoperimetric off-centroid", [&] {
        const std::vector<std::string> ids{phi.name()};
        const Estimate GB = exact(ball_value(phi, r, n));
        const Relation rel = inf ? Relation::Leq : Relation::Geq;
        const char* op = inf ? " <= " : " >= ";
        cx.check(rel, est(cx.aff(b, phi)), GB, {b.id}, ids, std::string("Omega") + op + "G(B_K)", "origin off centroid");
        cx.check(rel, est(cx.geo(b, phi)), GB, {b.id}, ids, std::string("G") + op + "G(B_K)", "origin off centroid");
      });
    }
  };
  for (std::size_t idx = 0; idx < corpus.size(); ++idx) {
    const auto& b = corpus[idx];
    if (is_centered(b.body)) {
      centered_cases(b);
      if (!is_ellipsoid(b.body)) offcenter_cases(shift_of(b, idx));
    } else {
      offcenter_cases(b);
    }
  }
}

// phi(t) phi(s) against phi(1)^2 over s t <= 1 on a log grid: returns
// max (Phi) or min (Psi) of the ratio.
double santalo_ratio(const OrliczFunction& phi, bool want_max) {
  const int m = 401;
  std::vector<double> t(m), v(m);
  for (int k = 0; k < m; ++k) {
    t[k] = kAuditLo * std::pow(kAuditHi / kAuditLo, static_cast<double>(k) / (m - 1));
    v[k] = phi.raw(t[k]);
  }
  const double one = phi.raw(1.0);
  double best = want_max ? 0.0 : kInf;
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) {
      if (t[i] * t[j] > 1.0 * (1 + 1e-12)) continue;
      if (!std::isfinite(v[i] * v[j])) continue;
      double q = v[i] * v[j] / (one * one);
      best = want_max ? std::max(best, q) : std::min(best, q);
    }
  }
  return best;
}

void suite_santalo(Ctx& cx, const std::vector<CorpusBody>& corpus) {
  const int n = cx.n();
  struct Q {
    const OrliczFunction* phi;
    bool inf;
    double A;
  };
  std::vector<Q> qual;
  for (const auto& phi : cx.phis) {
    if (phi.cls() == PhiClass::ConstantBoth) continue;
    const bool inf = is_inf_class(phi);
    double q = santalo_ratio(phi, inf);
    if (inf && q <= 1.0 + 1e-9) qual.push_back({&phi, true, 1.0});
    else if (!inf && q >= 1e-3) qual.push_back({&phi, false, q});
    else cx.skip(phi.name() + ": product condition fails on the audit grid (ratio " + fmt(q) + ")");
  }
  if (qual.empty()) fail(ErrorCode::ClassMismatch, "no phi satisfies the Santalo-style product condition");
  for (const auto& b : corpus) {
    if (!is_centered(b.body)) {
      cx.skip("skipped " + b.id + ": origin is not the centroid");
      continue;
    }
    cx.guarded({b.id}, {}, "polar body", [&] {
      CorpusBody pb{"polar(" + b.id + ")", polar(b.body)};
      if (pb.body.kind() == BodyKind::Smooth && !has_density(pb.body)) cx.skip(pb.id + ": polar has no curvature");
      const double vK = volume(b.body), vP = volume(pb.body);
      for (const auto& q : qual) {
        const auto& phi = *q.phi;
        const std::vector<std::string> ids{phi.name()};
        const std::vector<std::string> bs{b.id, pb.id};
        cx.guarded(bs, ids, "santalo", [&] {
          Estimate prod = mul(est(cx.aff(b, phi)), est(cx.aff(pb, phi)));
          const double vp = phi(vrad(b.body)) * phi(vrad(pb.body)) * n * n * vK * vP;
          const double ball = std::pow(phi(1.0) * n * omega(n), 2);
          if (q.inf) {
            cx.check(Relation::Leq, prod, exact(vp), bs, ids, "Omega(K) Omega(K°) <= phi(vrad K) phi(vrad K°) n^2 |K||K°|");
            cx.check(Relation::Leq, prod, exact(ball), bs, ids, "Omega(K) Omega(K°) <= Omega(B)^2");
          } else {
            cx.check(Relation::Geq, prod, exact(vp), bs, ids, "Omega(K) Omega(K°) >= phi(vrad K) phi(vrad K°) n^2 |K||K°|");
            CaseResult c = judge(Relation::Geq, prod, exact(q.A * ball), cx.o.tol);
            c.status = CaseStatus::Inconclusive;
            c.notes = "reported only: rhs omits the unknown inverse Santalo constant c^n (A = " + fmt(q.A) + ")";
            cx.add(std::move(c), bs, ids, "Omega(K) Omega(K°) >= A c^n Omega(B)^2");
          }
        });
      }
    });
  }
}

void suite_affine_invariance(Ctx& cx, const std::vector<CorpusBody>& corpus) {
  const int n = cx.n();
  for (std::size_t idx = 0; idx < corpus.size(); ++idx) {
    const auto& b = corpus[idx];
    cx.guarded({b.id}, {}, "SL image", [&] {
      SLTransform T = random_sl(n, stream_rng(cx.o.seed, "sl", idx)(), 3.0);
      CorpusBody tb{b.id + "@T", apply_sl(b.body, T)};
      for (const auto& phi : cx.phis) {
        const std::vector<std::string> ids{phi.name()};
        cx.guarded({b.id, tb.id}, ids, "affine invariance", [&] {
          cx.check(Relation::Eq, est(cx.aff(tb, phi)), est(cx.aff(b, phi)), {b.id, tb.id}, ids, "Omega(TK) = Omega(K)");
          cx.check(Relation::Eq, est(cx.geo(tb, phi)), est(cx.geo(b, phi)), {b.id, tb.id}, ids, "G(TK) = G(K)");
        });
      }
    });
  }
  if (n != 2) return;
  std::vector<const CorpusBody*> dens;
  for (const auto& b : corpus)
    if (has_density(b.body)) dens.push_back(&b);
  for (int k = 0; k < cx.o.max_pairs && 2 * k + 1 < static_cast<int>(dens.size()); ++k) {
    const auto& K1 = *dens[2 * k];
    const auto& K2 = *dens[2 * k + 1];
    std::vector<std::string> bs{K1.id, K2.id};
    cx.guarded(bs, {}, "multi SL image", [&] {
      SLTransform T = random_sl(n, stream_rng(cx.o.seed, "sl-pair", k)(), 3.0);
      std::vector<ConvexBody> Ks{K1.body, K2.body}, TKs{apply_sl(K1.body, T), apply_sl(K2.body, T)};
      for (const auto& phi : cx.phis) {
        const std::vector<std::string> ids{phi.name(), phi.name()};
        cx.guarded(bs, ids, "multi affine invariance", [&] {
          std::vector<OrliczFunction> ph{phi, phi};
          std::string key = K1.id + "," + K2.id + "|" + phi.name();
          auto a0 = affine_orlicz_multi(Ks, ph, cx.grid, cx.opt_for(key + "|AM"));
          auto a1 = affine_orlicz_multi(TKs, ph, cx.grid, cx.opt_for(key + "|AM@T"));
          cx.check(Relation::Eq, est(a1), est(a0), bs, ids, "Omega_multi(TK1, TK2) = Omega_multi(K1, K2)");
          auto g0 = geominimal_orlicz_multi(Ks, ph, cx.grid, cx.opt_for(key + "|GM"));
          auto g1 = geominimal_orlicz_multi(TKs, ph, cx.grid, cx.opt_for(key + "|GM@T"));
          cx.check(Relation::Eq, est(g1), est(g0), bs, ids, "G_multi(TK1, TK2) = G_multi(K1, K2)");
        });
      }
    });
  }
}

std::vector<std::pair<std::size_t, std::size_t>> same_class_pairs(const std::vector<OrliczFunction>& P) {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (std::size_t i = 0; i < P.size(); ++i)
    for (std::size_t j = i; j < P.size(); ++j)
      if (P[i].cls() != PhiClass::ConstantBoth && P[i].cls() == P[j].cls()) out.push_back({i, j});
  return out;
}

FunctionalResult witness_pair(const FunctionalResult& a, const FunctionalResult& b, Which w) {
  FunctionalResult r;
  if (w == Which::Affine) r.star_witness = {a.star_witness.at(0), b.star_witness.at(0)};
  else r.body_witness = {a.body_witness.at(0), b.body_witness.at(0)};
  return r;
}

void suite_alexander_fenchel(Ctx& cx, const std::vector<CorpusBody>& corpus) {
  const int n = cx.n();
  if (n != 2) fail(ErrorCode::UnsupportedDimension, "multi-body suites run in dimension 2");
  std::vector<const CorpusBody*> dens;
  for (const auto& b : corpus)
    if (has_density(b.body)) dens.push_back(&b);
  const auto pairs = same_class_pairs(cx.phis);
  if (pairs.empty()) fail(ErrorCode::ClassMismatch, "no classified phi");
  auto run_pair = [&](const CorpusBody& K1, const CorpusBody& K2) {
    const std::vector<std::string> bs{K1.id, K2.id};
    for (auto [i, j] : pairs) {
      const auto& p1 = cx.phis[i];
      const auto& p2 = cx.phis[j];
      const std::vector<std::string> ids{p1.name(), p2.name()};
      const bool inf = is_inf_class(p1);
      cx.guarded(bs, ids, "alexander-fenchel", [&] {
        std::string key = K1.id + "," + K2.id + "|" + p1.name() + "," + p2.name();
        for (Which w : {Which::Affine, Which::Geominimal}) {
          const bool aff = w == Which::Affine;
          const std::string sym = aff ? "Omega" : "G";
          const FunctionalResult& M = cx.cached(key + (aff ? "|AM" : "|GM"), [&](const OptimizerOptions& oo) {
            return aff ? affine_orlicz_multi({K1.body, K2.body}, {p1, p2}, cx.grid, oo)
                       : geominimal_orlicz_multi({K1.body, K2.body}, {p1, p2}, cx.grid, oo);
          });
          const FunctionalResult& S1 = aff ? cx.aff(K1, p1) : cx.geo(K1, p1);
          const FunctionalResult& S2 = aff ? cx.aff(K2, p2) : cx.geo(K2, p2);
          auto single_at = [&](const CorpusBody& K, const OrliczFunction& phi, std::size_t slot) {
            return aff ? affine_objective(K.body, phi, M.star_witness.at(slot), cx.grid)
                       : geominimal_objective(K.body, phi, M.body_witness.at(slot), cx.grid);
          };
          if (inf) {
            // multi objective at the single-body witnesses
            double J = ith_mixed_at(K1.body, K2.body, p1, p2, 1.0, w, witness_pair(S1, S2, w), cx.grid);
            Estimate l = power_of({std::min(M.value, J), Bound::Upper}, n);
            cx.check(Relation::Leq, l, exact(S1.value * S2.value), bs, ids,
                     sym + "_multi^2 <= nV_phi1(K1, W1*) nV_phi2(K2, W2*)", "witness level, W* = single-body witnesses");
            const double SS = s_phi(K1.body, p1, &cx.grid) * s_phi(K2.body, p2, &cx.grid);
            cx.check(Relation::Leq, power_of(est(M), n), exact(SS), bs, ids, sym + "_multi^2 <= S_phi1(K1) S_phi2(K2)");
            if (is_centered(K1.body) && is_centered(K2.body)) {
              double GP = polar_ball_value(p1, vrad(polar(K1.body)), n) * polar_ball_value(p2, vrad(polar(K2.body)), n);
              cx.check(Relation::Leq, power_of(est(M), n), exact(GP), bs, ids,
                       sym + "_multi^2 <= G_phi1([B_{K1°}]°) G_phi2([B_{K2°}]°)");
              if (increasing(p1.classification().monotone) && increasing(p2.classification().monotone)) {
                double GB = ball_value(p1, vrad(K1.body), n) * ball_value(p2, vrad(K2.body), n);
                cx.check(Relation::Leq, power_of(est(M), n), exact(GB), bs, ids, sym + "_multi^2 <= G_phi1(B_K1) G_phi2(B_K2)");
              }
            }
          } else {
            Estimate r1{std::max(S1.value, single_at(K1, p1, 0)), Bound::Lower};
            Estimate r2{std::max(S2.value, single_at(K2, p2, 1)), Bound::Lower};
            cx.check(Relation::Leq, exact(std::pow(M.value, n)), mul(r1, r2), bs, ids,
                     sym + "_multi(W*)^2 <= " + sym + "_phi1(K1) " + sym + "_phi2(K2)",
                     "witness level, W* = multi-body witness");
          }
          if (K1.id == K2.id && i == j)
            cx.check(Relation::Eq, est(M), est(S1), bs, ids, sym + "_multi(K, K) = " + sym + "(K)", "equality case");
        }
      });
    }
  };
  for (int k = 0; k < cx.o.max_pairs && 2 * k + 1 < static_cast<int>(dens.size()); ++k)
    run_pair(*dens[2 * k], *dens[2 * k + 1]);
  for (int k = 0; k < std::min<int>(2, static_cast<int>(dens.size())); ++k) run_pair(*dens[k], *dens[k]);
}

void suite_ith(Ctx& cx, const std::vector<CorpusBody>& corpus) {
  const int n = cx.n();
  if (n != 2) fail(ErrorCode::UnsupportedDimension, "multi-body suites run in dimension 2");
  std::vector<const CorpusBody*> dens, ells;
  for (const auto& b : corpus) {
    if (!has_density(b.body)) continue;
    if (is_ellipsoid(b.body)) ells.push_back(&b);
    else dens.push_back(&b);
  }
  if (dens.size() < 2) {
    for (const auto& b : corpus)
      if (has_density(b.body) && is_ellipsoid(b.body)) dens.push_back(&b);
  }
  const auto pairs = same_class_pairs(cx.phis);
  if (pairs.empty()) fail(ErrorCode::ClassMismatch, "no classified phi");
  auto ith_of = [&](const CorpusBody& K, const CorpusBody& L, const OrliczFunction& p1, const OrliczFunction& p2,
                    double i, Which w) -> const FunctionalResult& {
    std::string key = K.id + "," + L.id + "|" + p1.name() + "," + p2.name() + "|i=" + fmt(i) +
                      (w == Which::Affine ? "|A" : "|G");
    return cx.cached(key, [&](const OptimizerOptions& oo) { return ith_mixed(K.body, L.body, p1, p2, i, w, cx.grid, oo); });
  };
  for (int k = 0; k < cx.o.max_pairs && 2 * k + 1 < static_cast<int>(dens.size()); ++k) {
    const auto& K = *dens[2 * k];
    const auto& L = *dens[2 * k + 1];
    const std::vector<std::string> bs{K.id, L.id};
    for (auto [a, c] : pairs) {
      const auto& p1 = cx.phis[a];
      const auto& p2 = cx.phis[c];
      const std::vector<std::string> ids{p1.name(), p2.name()};
      cx.guarded(bs, ids, "ith mixed", [&] {
        for (Which w : {Which::Affine, Which::Geominimal}) {
          const bool aff = w == Which::Affine;
          const std::string sym = aff ? "Omega" : "G";
          const FunctionalResult& S1 = aff ? cx.aff(K, p1) : cx.geo(K, p1);
          const FunctionalResult& S2 = aff ? cx.aff(L, p2) : cx.geo(L, p2);
          const FunctionalResult& W0 = ith_of(K, L, p1, p2, 0, w);
          const FunctionalResult& W2 = ith_of(K, L, p1, p2, n, w);
          cx.check(Relation::Eq, est(W0), est(S1), bs, ids, sym + "_{i=0}(K, L) = " + sym + "_phi1(K)", "endpoint");
          cx.check(Relation::Eq, est(W2), est(S2), bs, ids, sym + "_{i=n}(K, L) = " + sym + "_phi2(L)", "endpoint");
          if (is_inf_class(p1)) {
            if (is_centered(K.body) && is_centered(L.body)) {
              const double i = 1.0;
              const FunctionalResult& W1 = ith_of(K, L, p1, p2, i, w);
              double GP = std::pow(polar_ball_value(p1, vrad(polar(K.body)), n), n - i) *
                          std::pow(polar_ball_value(p2, vrad(polar(L.body)), n), i);
              cx.check(Relation::Leq, power_of(est(W1), n), exact(GP), bs, ids,
                       sym + "_1(K, L)^n <= G_phi1([B_{K°}]°)^{n-1} G_phi2([B_{L°}]°)");
              if (increasing(p1.classification().monotone) && increasing(p2.classification().monotone)) {
                double GB = std::pow(ball_value(p1, vrad(K.body), n), n - i) * std::pow(ball_value(p2, vrad(L.body), n), i);
                cx.check(Relation::Leq, power_of(est(W1), n), exact(GB), bs, ids,
                         sym + "_1(K, L)^n <= G_phi1(B_K)^{n-1} G_phi2(B_L)");
              }
            }
            continue;
          }
          // Psi: log-convexity in i at (0, 1, n), checked at the i = 1 witness
          const FunctionalResult& W1 = ith_of(K, L, p1, p2, 1, w);
          FunctionalResult wit = W1;
          double J0 = ith_mixed_at(K.body, L.body, p1, p2, 0, w, wit, cx.grid);
          double J2 = ith_mixed_at(K.body, L.body, p1, p2, n, w, wit, cx.grid);
          Estimate r = mul({std::max(W0.value, J0), Bound::Lower}, {std::max(W2.value, J2), Bound::Lower});
          cx.check(Relation::Leq, exact(std::pow(W1.value, n)), r, bs, ids,
                   sym + "_1(W*)^n <= " + sym + "_0 " + sym + "_n", "witness level, W* = i=1 witness");
          // outside [0, n], against single-body witnesses
          FunctionalResult sw = witness_pair(S1, S2, w);
          for (double i : {-1.0, n + 1.0}) {
            const FunctionalResult& Wi = ith_of(K, L, p1, p2, i, w);
            double Ji = ith_mixed_at(K.body, L.body, p1, p2, i, w, sw, cx.grid);
            Estimate l = power_of({std::max(Wi.value, Ji), Bound::Lower}, n);
            double rv = std::pow(S1.value, n - i) * std::pow(S2.value, i);
            cx.check(Relation::Geq, l, exact(rv), bs, ids,
                     sym + "_{" + fmt(i) + "}^n >= nV_phi1(K, W1*)^{n-i} nV_phi2(L, W2*)^i",
                     "witness level, W* = single-body witnesses");
          }
        }
      });
    }
  }
  // Psi, i <= 0, second body an ellipsoid
  for (int k = 0; k < cx.o.max_pairs && k < static_cast<int>(dens.size()) && !ells.empty(); ++k) {
    const auto& K = *dens[k];
    const auto& E = *ells[k % ells.size()];
    if (!is_centered(K.body)) continue;
    const std::vector<std::string> bs{K.id, E.id};
    for (auto [a, c] : pairs) {
      const auto& p1 = cx.phis[a];
      const auto& p2 = cx.phis[c];
      if (is_inf_class(p1)) continue;
      const std::vector<std::string> ids{p1.name(), p2.name()};
      cx.guarded(bs, ids, "ith mixed with ellipsoid", [&] {
        for (double i : {-1.0, 0.0}) {
          const FunctionalResult& Wi = ith_of(K, E, p1, p2, i, Which::Affine);
          double rv = std::pow(ball_value(p1, vrad(K.body), n), n - i) * std::pow(ellipsoid_closed_form(E.body, p2), i);
          cx.check(Relation::Geq, power_of(est(Wi), n), exact(rv), bs, ids,
                   "Omega_{" + fmt(i) + "}(K, E)^n >= G_phi1(B_K)^{n-i} G_phi2(E)^i");
        }
      });
    }
  }
}

void suite_lp(Ctx& cx, const std::vector<CorpusBody>& corpus) {
  const int n = cx.n();
  for (const auto& phi : cx.phis)
    if (phi.kind() != PhiKind::Power)
      fail(ErrorCode::ClassMismatch, "lp-consistency needs power functions, got " + phi.name());
  for (const auto& b : corpus) {
    if (!has_density(b.body)) {
      cx.skip("skipped " + b.id + ": no curvature function");
      continue;
    }
    for (const auto& phi : cx.phis) {
      const double p = phi.param();
      const std::vector<std::string> ids{phi.name()};
      cx.guarded({b.id}, ids, "lp", [&] {
        const double cf = lp_affine_closed_form(b.body, p, &cx.grid);
        // as_p recovered from the Orlicz optimizer
        Estimate a = est(cx.aff(b, phi));
        Estimate as{std::pow(std::pow(n * omega(n), p / n) * a.value, n / (n + p)), a.side};
        if (n / (n + p) < 0) as.side = flip(as.side);
        cx.check(Relation::Eq, as, exact(cf), {b.id}, ids, "[(n omega_n)^{p/n} Omega_p]^{n/(n+p)} = as_p closed form");
        const FunctionalResult& G = cx.geo(b, phi);
        if (G.body_witness.empty()) {
          cx.add(judge(Relation::Eq, {kNaN, Bound::None}, {kNaN, Bound::None}, cx.o.tol), {b.id}, ids,
                 "[G~_p]^{n+p} = (n omega_n)^p G_p^n", "no geominimal witness");
          return;
        }
        // the G~_p functional at a rescaled witness: n V_p(K, sQ*)^{n/(n+p)} |(sQ*)°|^{p/(n+p)}
        const double s = 1.7;
        ConvexBody sQ = scale(G.body_witness[0], s);
        const double V = v_p(b.body, sQ, p, false, &cx.grid);
        const double ye = n * std::pow(V, n / (n + p)) * std::pow(volume(polar(sQ)), p / (n + p));
        cx.check(Relation::Eq, exact(std::pow(ye, n + p)), exact(std::pow(n * omega(n), p) * std::pow(G.value, n)), {b.id},
                 ids, "[G~_p(Q*)]^{n+p} = (n omega_n)^p nV_p(K, Q*)^n", "Q* = geominimal witness, rescaled by 1.7");
        if (p > 0)
          cx.check(Relation::Leq, exact(cf), exact(ye), {b.id}, ids, "as_p <= G~_p functional at Q*", "witness level");
        else if (p > -n)
          cx.check(Relation::Geq, exact(cf), exact(ye), {b.id}, ids, "as_p >= G~_p functional at Q*", "witness level");
      });
    }
  }
}

void check_phis(const std::vector<OrliczFunction>& phis, const SphereGrid& grid) {
  for (const auto& phi : phis) {
    if (phi.dim() != grid.dim()) fail(ErrorCode::DimensionMismatch, phi.name() + " has the wrong dimension");
    if (phi.cls() == PhiClass::Neither) fail(ErrorCode::ClassMismatch, phi.name() + " is in neither Phi nor Psi");
  }
}

}  // namespace

SuiteReport run_suite(const std::string& name, const std::vector<CorpusBody>& corpus,
                      const std::vector<OrliczFunction>& phis_in, const SphereGrid& grid, const HarnessOptions& opts) {
  const auto& names = suite_names();
  if (std::find(names.begin(), names.end(), name) == names.end())
    fail(ErrorCode::UnknownSuite, "unknown suite '" + name + "'");
  std::vector<OrliczFunction> phis = phis_in.empty() ? default_phis(name, grid.dim()) : phis_in;
  check_phis(phis, grid);
  for (const auto& b : corpus)
    if (b.body.dim() != grid.dim()) fail(ErrorCode::DimensionMismatch, b.id + " has the wrong dimension");
  SuiteReport rep;
  rep.suite = name;
  rep.seed = opts.seed;
  rep.tol = opts.tol;
  rep.grid_resolution = static_cast<int>(grid.size());
  Ctx cx{phis, grid, opts, rep, {}};
  if (name == "ellipsoid-closed-form") suite_ellipsoid(cx, corpus);
  else if (name == "comparison") suite_comparison(cx, corpus);
  else if (name == "monotonicity-phi") suite_monotonicity(cx, corpus);
  else if (name == "cyclic-monotonicity") suite_cyclic(cx, corpus);
  else if (name == "isoperimetric") suite_isoperimetric(cx, corpus);
  else if (name == "santalo-style") suite_santalo(cx, corpus);
  else if (name == "affine-invariance") suite_affine_invariance(cx, corpus);
  else if (name == "alexander-fenchel") suite_alexander_fenchel(cx, corpus);
  else if (name == "ith-mixed-cyclic") suite_ith(cx, corpus);
  else suite_lp(cx, corpus);
  return rep;
}

SuiteReport equality_witness(const std::string& suite, const std::vector<CorpusBody>& ellipsoids,
                             const std::vector<OrliczFunction>& phis_in, const SphereGrid& grid,
                             const HarnessOptions& opts) {
  if (suite != "isoperimetric" && suite != "comparison" && suite != "alexander-fenchel" &&
      suite != "ellipsoid-closed-form") {
    const auto& names = suite_names();
    if (std::find(names.begin(), names.end(), suite) == names.end())
      fail(ErrorCode::UnknownSuite, "unknown suite '" + suite + "'");
    fail(ErrorCode::UnknownSuite, "suite '" + suite + "' has no equality cases");
  }
  for (const auto& b : ellipsoids)
    if (!is_ellipsoid(b.body)) fail(ErrorCode::InvalidBody, b.id + " is not an ellipsoid");
  std::vector<OrliczFunction> phis = phis_in.empty() ? default_phis(suite, grid.dim()) : phis_in;
  check_phis(phis, grid);
  if (suite == "ellipsoid-closed-form") return run_suite(suite, ellipsoids, phis, grid, opts);
  SuiteReport rep;
  rep.suite = suite + " (equality)";
  rep.seed = opts.seed;
  rep.tol = opts.tol;
  rep.grid_resolution = static_cast<int>(grid.size());
  Ctx cx{phis, grid, opts, rep, {}};
  const int n = grid.dim();
  for (const auto& b : ellipsoids) {
    for (const auto& phi : phis) {
      const std::vector<std::string> ids{phi.name()};
      cx.guarded({b.id}, ids, "equality", [&] {
        if (suite == "isoperimetric") {
          const Estimate GB = exact(ball_value(phi, vrad(b.body), n));
          cx.check(Relation::Eq, est(cx.geo(b, phi)), GB, {b.id}, ids, "G(E) = G(B_E)");
          cx.check(Relation::Eq, est(cx.aff(b, phi)), GB, {b.id}, ids, "Omega(E) = G(B_E)");
        } else if (suite == "comparison") {
          cx.check(Relation::Eq, est(cx.aff(b, phi)), est(cx.geo(b, phi)), {b.id}, ids, "Omega(E) = G(E)");
        } else {
          if (n != 2) fail(ErrorCode::UnsupportedDimension, "multi-body suites run in dimension 2");
          const std::vector<std::string> bs{b.id, b.id};
          const std::vector<std::string> pp{phi.name(), phi.name()};
          auto M = affine_orlicz_multi({b.body, b.body}, {phi, phi}, grid, cx.opt_for(b.id + "|" + phi.name() + "|AM"));
          const FunctionalResult& A = cx.aff(b, phi);
          cx.check(Relation::Eq, power_of(est(M), n), exact(std::pow(A.value, n)), bs, pp,
                   "Omega_multi(E, E)^2 = Omega(E)^2");
        }
      });
    }
  }
  return rep;
}

}  // namespace orlicz
