#include "optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <thread>

#include "orlicz/errors.hpp"
#include "orlicz/hull.hpp"
#include "orlicz/numeric.hpp"

namespace orlicz::detail {

namespace {

struct SlotGeometry {
  std::vector<double> share;  // s_j (star) or t_j (polytope)
  double lv = 0.0;            // log vrad of L (star) or Q° (polytope)
  bool ok = true;
};

SlotGeometry star_geometry(const Slot& s, const std::vector<double>& y) {
  SlotGeometry g;
  const std::size_t m = y.size();
  std::vector<double> t(m);
  double ymax = *std::max_element(y.begin(), y.end());
  for (std::size_t j = 0; j < m; ++j) t[j] = std::exp(s.n * (y[j] - ymax)) * s.w[j];
  double tot = pairwise_sum(t);
  g.share.resize(m);
  for (std::size_t j = 0; j < m; ++j) g.share[j] = t[j] / tot;
  // |L| = (1/n) sum rho^n w
  g.lv = ymax + (std::log(tot / s.n) - std::log(omega(s.n))) / s.n;
  return g;
}

// Tightens y to the support of Q = {x : <u_i, x> <= e^{y_i}}.
SlotGeometry polytope_geometry(const Slot& s, std::vector<double>& y) {
  SlotGeometry g;
  const std::size_t m = y.size();
  std::vector<double> r(m);
  for (std::size_t j = 0; j < m; ++j) r[j] = std::exp(-y[j]);
  hull::StarHull sh;
  if (s.n == 2) {
    std::vector<Eigen::Vector2d> d(m);
    for (std::size_t j = 0; j < m; ++j) d[j] = {s.dirs[j][0], s.dirs[j][1]};
    sh = hull::star_hull_2d(d, r);
  } else {
    std::vector<Eigen::Vector3d> d(m);
    for (std::size_t j = 0; j < m; ++j) d[j] = {s.dirs[j][0], s.dirs[j][1], s.dirs[j][2]};
    try {
      sh = hull::star_hull_3d(d, r);
    } catch (const Error&) {
      g.ok = false;
      return g;
    }
  }
  if (!sh.origin_interior || !(sh.volume > 0.0)) {
    g.ok = false;
    return g;
  }
  for (std::size_t j = 0; j < m; ++j) y[j] = -std::log(sh.tight[j]);
  g.share.resize(m);
  for (std::size_t j = 0; j < m; ++j) g.share[j] = sh.fan[j] / (s.n * sh.volume);
  g.lv = (std::log(sh.volume) - std::log(omega(s.n))) / s.n;
  return g;
}

double elasticity(const OrliczFunction& phi, double a, double val) { return phi.derivative(a) * a / val; }

}  // namespace

Evaluation evaluate(const Problem& pb, State& y, bool with_grad) {
  Evaluation ev;
  const std::size_t m = pb.W.size();
  const std::size_t K = pb.slots.size();
  std::vector<SlotGeometry> geo(K);
  std::vector<std::vector<double>> larg(K, std::vector<double>(m));
  for (std::size_t k = 0; k < K; ++k) {
    const Slot& s = pb.slots[k];
    if (s.type == Slot::Type::Star) {
      geo[k] = star_geometry(s, y[k]);
      for (double& v : y[k]) v -= geo[k].lv;
      for (std::size_t i = 0; i < m; ++i) larg[k][i] = -y[k][i] - s.log_hK[i];
    } else {
      geo[k] = polytope_geometry(s, y[k]);
      if (!geo[k].ok) return ev;
      for (double& v : y[k]) v += geo[k].lv;
      for (std::size_t i = 0; i < m; ++i) larg[k][i] = y[k][i] - s.log_hK[i];
    }
  }
  std::vector<double> term(m);
  std::vector<std::vector<double>> eps(K, std::vector<double>(m, 0.0));
  for (std::size_t i = 0; i < m; ++i) {
    double lt = std::log(pb.W[i]);
    for (std::size_t k = 0; k < K; ++k) {
      const Slot& s = pb.slots[k];
      if (s.alpha == 0.0) continue;
      double a = std::exp(larg[k][i]);
      double v = s.phi->raw(a);
      if (!(v > 0.0) || !std::isfinite(v)) return ev;
      lt += s.alpha * (std::log(v) + std::log(s.C[i]));
      if (with_grad) eps[k][i] = elasticity(*s.phi, a, v);
    }
    term[i] = std::exp(lt);
    if (!std::isfinite(term[i])) return ev;
  }
  ev.J = pairwise_sum(term);
  if (!std::isfinite(ev.J)) return ev;
  ev.feasible = true;
  if (!with_grad) return ev;
  ev.grad.resize(K);
  for (std::size_t k = 0; k < K; ++k) {
    const Slot& s = pb.slots[k];
    std::vector<double> D(m);
    for (std::size_t i = 0; i < m; ++i) D[i] = s.alpha * term[i] * eps[k][i];
    double sumD = pairwise_sum(D);
    auto& g = ev.grad[k];
    g.resize(m);
    if (s.type == Slot::Type::Star) {
      for (std::size_t j = 0; j < m; ++j) g[j] = -D[j] + geo[k].share[j] * sumD;
    } else {
      for (std::size_t j = 0; j < m; ++j) {
        g[j] = D[j] - geo[k].share[j] * sumD;
        // raising a redundant offset leaves Q unchanged
        if (geo[k].share[j] == 0.0 && pb.sign * g[j] < 0.0) g[j] = 0.0;
      }
    }
  }
  return ev;
}

namespace {

double rel_grad(const Slot& s, const std::vector<double>& g, double J) {
  double nu_tot = std::accumulate(s.nu.begin(), s.nu.end(), 0.0);
  double mx = 0.0;
  for (std::size_t j = 0; j < g.size(); ++j) mx = std::max(mx, std::abs(g[j]) / s.nu[j]);
  return mx / (std::abs(J) / nu_tot);
}

struct BlockResult {
  int iterations = 0;
  double grad_norm = 0.0;
  bool diverging = false;
};

// Projected gradient on one slot with the others frozen.
BlockResult descend(const Problem& pb, State& y, Evaluation& ev, std::size_t k, int max_iter, double tol,
                    double J0) {
  BlockResult br;
  const Slot& s = pb.slots[k];
  const std::size_t m = y[k].size();
  const double sg = pb.sign;
  double step = -1.0;
  std::vector<double> hist;
  for (int it = 0; it < max_iter; ++it) {
    hist.push_back(ev.J);
    if (hist.size() > 50 && std::abs(hist[hist.size() - 51] - ev.J) <= 1e-7 * std::abs(ev.J)) break;
    const auto& g = ev.grad[k];
    br.grad_norm = rel_grad(s, g, ev.J);
    if (br.grad_norm < tol) break;
    std::vector<double> d(m);
    double dmax = 0.0;
    for (std::size_t j = 0; j < m; ++j) d[j] = -sg * g[j] / s.nu[j];
    if (!s.smoother.empty()) {
      std::vector<double> raw = d;
      for (std::size_t j = 0; j < m; ++j) {
        double acc = 0.0;
        for (auto [i, c] : s.smoother[j]) acc += c * raw[i];
        d[j] = acc;
      }
    }
    for (std::size_t j = 0; j < m; ++j) dmax = std::max(dmax, std::abs(d[j]));
    if (!(dmax > 0.0)) break;
    if (step <= 0.0) step = 0.05 / dmax;
    step = std::min(step, 0.5 / dmax);
    bool accepted = false;
    State trial;
    Evaluation tev;
    int bt = 0;
    for (; bt < 60; ++bt) {
      trial = y;
      for (std::size_t j = 0; j < m; ++j) trial[k][j] += step * d[j];
      tev = evaluate(pb, trial, true);
      if (tev.feasible) {
        double pred = 0.0;
        for (std::size_t j = 0; j < m; ++j) pred += sg * g[j] * (trial[k][j] - y[k][j]);
        if (sg * (tev.J - ev.J) <= 1e-4 * std::min(pred, 0.0)) {
          accepted = true;
          break;
        }
      }
      step *= 0.5;
    }
    if (!accepted) break;
    ++br.iterations;
    double ss = 0.0, sz = 0.0, smax = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
      double sj = trial[k][j] - y[k][j];
      double zj = sg * (tev.grad[k][j] - ev.grad[k][j]);
      ss += s.nu[j] * sj * sj;
      sz += sj * zj;
      smax = std::max(smax, std::abs(sj));
    }
    double improve = std::abs(tev.J - ev.J);
    y = std::move(trial);
    ev = std::move(tev);
    if (pb.sign < 0) {
      double ymax = 0.0;
      for (double v : y[k]) ymax = std::max(ymax, std::abs(v));
      if (ev.J > 1e15 * std::abs(J0) || (ymax > 40.0 && s.unbounded)) {
        br.diverging = true;
        break;
      }
      if (ymax > 40.0) break;
    }
    if (smax < 1e-9) break;
    if (improve <= 1e-15 * std::abs(ev.J)) break;
    if (!s.smoother.empty()) step = bt == 0 ? 2.0 * step : step;
    else step = (sz > 0.0 && std::isfinite(ss / sz)) ? ss / sz : 2.0 * step;
  }
  br.grad_norm = rel_grad(s, ev.grad[k], ev.J);
  return br;
}

// Compass search on a small polytope slot: the objective has kinks where a
// facet turns redundant, and the gradient steps stall there.
int polish(const Problem& pb, State& y, Evaluation& ev, std::size_t k, int max_evals) {
  const std::size_t m = y[k].size();
  const double sg = pb.sign;
  int evals = 0;
  for (double delta = 0.1; delta > 1e-7 && evals < max_evals; delta *= 0.5) {
    bool improved = true;
    while (improved && evals < max_evals) {
      improved = false;
      for (std::size_t j = 0; j < m && evals < max_evals; ++j) {
        for (double dir : {1.0, -1.0}) {
          State trial = y;
          trial[k][j] += dir * delta;
          Evaluation tev = evaluate(pb, trial, false);
          ++evals;
          if (tev.feasible && sg * (tev.J - ev.J) < -1e-12 * std::abs(ev.J)) {
            y = std::move(trial);
            ev = std::move(tev);
            improved = true;
            break;
          }
        }
      }
    }
  }
  ev = evaluate(pb, y, true);
  return evals;
}

constexpr std::size_t kPolishMaxDim = 64;

}  // namespace

Outcome optimize(const Problem& pb, State y0, const OptimizerOptions& opts) {
  Outcome out;
  out.y = std::move(y0);
  Evaluation ev = evaluate(pb, out.y, true);
  if (!ev.feasible) {
    out.value = pb.sign > 0 ? std::numeric_limits<double>::infinity() : -std::numeric_limits<double>::infinity();
    return out;
  }
  const double J0 = ev.J;
  std::vector<std::size_t> active;
  for (std::size_t k = 0; k < pb.slots.size(); ++k)
    if (pb.slots[k].alpha != 0.0) active.push_back(k);
  if (active.size() == 1) {
    const std::size_t k = active[0];
    auto br = descend(pb, out.y, ev, k, opts.max_iter, opts.tol, J0);
    out.iterations = br.iterations;
    out.grad_norm = br.grad_norm;
    out.diverging = br.diverging;
    if (!out.diverging && pb.slots[k].type == Slot::Type::Polytope && out.y[k].size() <= kPolishMaxDim) {
      polish(pb, out.y, ev, k, 400 * static_cast<int>(out.y[k].size()));
      out.grad_norm = rel_grad(pb.slots[k], ev.grad[k], ev.J);
    }
  } else {
    const int budget = opts.max_iter * static_cast<int>(active.size());
    for (int sweep = 0; sweep < 200 && out.iterations < budget; ++sweep) {
      double before = ev.J;
      int moved = 0;
      double gmax = 0.0;
      for (std::size_t k : active) {
        int inner = std::min(200, budget - out.iterations);
        if (inner <= 0) break;
        auto br = descend(pb, out.y, ev, k, inner, opts.tol, J0);
        out.iterations += br.iterations;
        moved += br.iterations;
        gmax = std::max(gmax, br.grad_norm);
        if (br.diverging) out.diverging = true;
      }
      out.grad_norm = gmax;
      if (out.diverging || moved == 0 || gmax < opts.tol) break;
      if (std::abs(ev.J - before) <= 1e-7 * std::abs(ev.J)) break;
    }
  }
  out.value = ev.J;
  return out;
}

std::vector<Outcome> optimize_all(const Problem& pb, const std::vector<State>& starts, const OptimizerOptions& opts) {
  std::vector<Outcome> res(starts.size());
  int threads = opts.threads > 0 ? opts.threads : thread_cap();
  threads = std::max(1, std::min<int>(threads, static_cast<int>(starts.size())));
  if (threads == 1) {
    for (std::size_t r = 0; r < starts.size(); ++r) res[r] = optimize(pb, starts[r], opts);
    return res;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errs(threads);
  for (int t = 0; t < threads; ++t) {
    pool.emplace_back([&, t] {
      try {
        for (std::size_t r = t; r < starts.size(); r += threads) res[r] = optimize(pb, starts[r], opts);
      } catch (...) {
        errs[t] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errs)
    if (e) std::rethrow_exception(e);
  return res;
}

std::vector<std::vector<std::pair<int, double>>> gaussian_smoother(const std::vector<Vec>& dirs, double sigma) {
  const std::size_t m = dirs.size();
  std::vector<std::vector<std::pair<int, double>>> S(m);
  const double cut = 2.0 * std::sin(std::min(3.0 * sigma, kPi) / 2.0);
  for (std::size_t j = 0; j < m; ++j) {
    for (std::size_t i = 0; i < m; ++i) {
      double c = (dirs[i] - dirs[j]).norm();
      if (c <= cut) S[j].emplace_back(static_cast<int>(i), std::exp(-0.5 * c * c / (sigma * sigma)));
    }
  }
  return S;
}

std::vector<double> random_profile(const std::vector<Vec>& dirs, std::uint64_t seed, int index) {
  const int n = static_cast<int>(dirs[0].size());
  auto rng = stream_rng(seed, "restart", static_cast<std::uint64_t>(index));
  std::normal_distribution<double> N(0.0, 1.0);
  Mat A(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) A(i, j) = N(rng);
  A = 0.5 * (A + A.transpose());
  Vec b(n);
  for (int i = 0; i < n; ++i) b[i] = N(rng);
  std::vector<double> y(dirs.size());
  for (std::size_t i = 0; i < dirs.size(); ++i) y[i] = 0.3 * (dirs[i].dot(A * dirs[i]) + b.dot(dirs[i]));
  return y;
}

}  // namespace orlicz::detail
