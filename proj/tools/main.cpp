// orlicz: compute / verify / sweep front end.
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "orlicz/bodies.hpp"
#include "orlicz/errors.hpp"
#include "orlicz/functionals.hpp"
#include "orlicz/harness.hpp"
#include "orlicz/io.hpp"
#include "orlicz/mixed_volumes.hpp"

using namespace orlicz;
using io::json;

namespace {

struct Common {
  std::vector<std::string> bodies;
  std::vector<std::string> phis;
  int dim = 2;
  int grid = 256;
  std::uint64_t seed = 42;
  std::string out;
  std::string format = "json";
  int restarts = -1;  // command default
  double tol = -1.0;
};

void add_common(CLI::App* app, Common& c) {
  app->add_option("--body", c.bodies, "body JSON file (repeatable)");
  app->add_option("--phi", c.phis, "phi spec (power:2, arctan_inv_n, ...) or JSON file (repeatable)");
  app->add_option("--dim", c.dim, "dimension")->check(CLI::Range(2, 3));
  app->add_option("--grid", c.grid, "sphere grid resolution");
  app->add_option("--seed", c.seed, "master seed");
  app->add_option("--out", c.out, "output file (stdout if absent)");
  app->add_option("--format", c.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  app->add_option("--restarts", c.restarts, "optimizer restarts");
  app->add_option("--tol", c.tol, "tolerance (optimizer for compute/sweep, comparison for verify)");
}

void emit(const Common& c, const std::string& text) {
  if (c.out.empty()) {
    std::cout << text;
    std::cout.flush();
  } else {
    io::write_atomic(c.out, text);
  }
}

std::vector<ConvexBody> load_bodies(const Common& c) {
  std::vector<ConvexBody> out;
  for (const auto& path : c.bodies) {
    ConvexBody b = io::convex_from_json(io::read_json_file(path), c.dim);
    if (b.dim() != c.dim) fail(ErrorCode::DimensionMismatch, path + " is not " + std::to_string(c.dim) + "-dimensional");
    out.push_back(std::move(b));
  }
  return out;
}

std::vector<OrliczFunction> load_phis(const Common& c) {
  std::vector<OrliczFunction> out;
  for (const auto& s : c.phis) out.push_back(io::parse_phi(s, c.dim));
  return out;
}

OptimizerOptions optimizer_options(const Common& c, int default_restarts) {
  OptimizerOptions o;
  o.restarts = c.restarts > 0 ? c.restarts : default_restarts;
  if (c.tol > 0) o.tol = c.tol;
  o.seed = c.seed;
  return o;
}

Which parse_which(const std::string& w) {
  if (w == "affine") return Which::Affine;
  if (w == "geominimal") return Which::Geominimal;
  fail(ErrorCode::ParseError, "--which must be affine or geominimal");
}

// ---------------------------------------------------------------- compute

struct ComputeArgs {
  std::string quantity;
  std::string which = "affine";
  double i = 1.0;
};

int cmd_compute(const Common& c, const ComputeArgs& a) {
  const SphereGrid grid = build_grid(c.dim, c.grid);
  auto bodies = load_bodies(c);
  auto phis = load_phis(c);
  auto need = [&](std::size_t nb, std::size_t np) {
    if (bodies.size() < nb) fail(ErrorCode::ParseError, a.quantity + " needs " + std::to_string(nb) + " --body");
    if (phis.size() < np) fail(ErrorCode::ParseError, a.quantity + " needs " + std::to_string(np) + " --phi");
    if (phis.size() == 1 && np == 2) phis.push_back(phis[0]);
  };
  const OptimizerOptions opts = optimizer_options(c, 8);
  json out = {{"quantity", a.quantity}, {"grid", c.grid}, {"dim", c.dim}, {"bodies", c.bodies}};
  bool flagged = false;
  if (a.quantity == "v_phi" || a.quantity == "s_phi" || a.quantity == "lp_closed_form") {
    double value = 0.0;
    if (a.quantity == "v_phi") {
      need(2, 1);
      auto r = v_phi(bodies[0], bodies[1], phis[0], &grid);
      value = r.value;
      out["provenance"] = r.provenance;
    } else if (a.quantity == "s_phi") {
      need(1, 1);
      value = s_phi(bodies[0], phis[0], &grid);
    } else {
      need(1, 1);
      if (phis[0].kind() != PhiKind::Power) fail(ErrorCode::ParseError, "lp_closed_form needs a power phi");
      value = lp_affine_closed_form(bodies[0], phis[0].param(), &grid);
      out["p"] = phis[0].param();
    }
    out["phis"] = json::array();
    for (const auto& p : phis) out["phis"].push_back(p.name());
    out["result"] = {{"value", io::number(value)}, {"certified_side", "exact"}};
  } else {
    FunctionalResult r;
    if (a.quantity == "affine") {
      need(1, 1);
      r = affine_orlicz(bodies[0], phis[0], grid, opts);
    } else if (a.quantity == "geominimal") {
      need(1, 1);
      r = geominimal_orlicz(bodies[0], phis[0], grid, opts);
    } else if (a.quantity == "multi") {
      need(2, 2);
      std::vector<ConvexBody> Ks(bodies.begin(), bodies.begin() + 2);
      std::vector<OrliczFunction> ps(phis.begin(), phis.begin() + 2);
      r = parse_which(a.which) == Which::Affine ? affine_orlicz_multi(Ks, ps, grid, opts)
                                                : geominimal_orlicz_multi(Ks, ps, grid, opts);
      out["which"] = a.which;
    } else if (a.quantity == "ith_mixed") {
      need(2, 2);
      r = ith_mixed(bodies[0], bodies[1], phis[0], phis[1], a.i, parse_which(a.which), grid, opts);
      out["which"] = a.which;
      out["i"] = a.i;
    } else {
      fail(ErrorCode::ParseError, "unknown quantity '" + a.quantity + "'");
    }
    out["phis"] = json::array();
    for (const auto& p : phis) out["phis"].push_back(p.name());
    out["result"] = io::to_json(r);
    flagged = r.degenerate || r.diverging;
  }
  emit(c, out.dump(2) + "\n");
  return flagged ? 2 : 0;
}

// ---------------------------------------------------------------- verify

struct VerifyArgs {
  std::string suite;
  bool equality = false;
  int max_pairs = 5;
};

int cmd_verify(const Common& c, const VerifyArgs& a) {
  if (a.suite.empty()) fail(ErrorCode::ParseError, "verify needs a suite name");
  const SphereGrid grid = build_grid(c.dim, c.grid);
  const auto& names = suite_names();
  if (std::find(names.begin(), names.end(), a.suite) == names.end())
    fail(ErrorCode::UnknownSuite, "unknown suite '" + a.suite + "'");
  std::vector<CorpusBody> corpus;
  if (c.bodies.empty()) {
    CorpusOptions co;
    co.dim = c.dim;
    co.resolution = c.grid;
    co.seed = c.seed;
    corpus = golden_corpus(co);
  } else {
    auto bodies = load_bodies(c);
    for (std::size_t k = 0; k < bodies.size(); ++k)
      corpus.push_back({std::filesystem::path(c.bodies[k]).stem().string(), std::move(bodies[k])});
  }
  HarnessOptions h;
  h.seed = c.seed;
  if (c.tol > 0) h.tol = c.tol;
  if (c.restarts > 0) h.optimizer.restarts = c.restarts;
  h.max_pairs = a.max_pairs;
  auto phis = load_phis(c);
  SuiteReport rep;
  if (a.equality) {
    std::vector<CorpusBody> ells;
    for (auto& b : corpus)
      if (b.body.kind() == BodyKind::Ball || b.body.kind() == BodyKind::Ellipsoid) ells.push_back(b);
    rep = equality_witness(a.suite, ells, phis, grid, h);
  } else {
    rep = run_suite(a.suite, corpus, phis, grid, h);
  }
  emit(c, c.format == "csv" ? io::report_csv(rep) : io::to_json(rep).dump(2) + "\n");
  const int v = rep.count(CaseStatus::Violated);
  std::fprintf(stderr, "%s: %zu cases, %d Certified, %d Inconclusive, %d Violated\n", rep.suite.c_str(),
               rep.cases.size(), rep.count(CaseStatus::Certified), rep.count(CaseStatus::Inconclusive), v);
  return v == 0 ? 0 : 1;
}

// ---------------------------------------------------------------- sweep

struct SweepArgs {
  std::string axis;
  std::vector<double> values;
  std::string quantity = "affine";
  std::optional<double> reference;
};

int cmd_sweep(const Common& c, const SweepArgs& a) {
  if (a.axis.empty() || a.values.empty()) fail(ErrorCode::ParseError, "sweep needs --axis (p | grid) and --values");
  if (a.axis != "p" && a.axis != "grid") fail(ErrorCode::ParseError, "--axis must be p or grid");
  auto bodies = load_bodies(c);
  if (bodies.empty()) fail(ErrorCode::ParseError, "sweep needs --body");
  auto phis = load_phis(c);
  if (a.axis == "grid" && phis.empty()) fail(ErrorCode::ParseError, "grid sweep needs --phi");
  const bool grid_axis = a.axis == "grid";
  struct Row {
    double param, value;
    std::string side;
    double ms;
  };
  std::vector<Row> rows;
  for (double v : a.values) {
    const int res = grid_axis ? static_cast<int>(v) : c.grid;
    const SphereGrid grid = build_grid(c.dim, res);
    const OrliczFunction phi = grid_axis ? phis[0] : OrliczFunction::power(v, c.dim);
    const OptimizerOptions opts = optimizer_options(c, 8);
    auto t0 = std::chrono::steady_clock::now();
    Row row{v, 0.0, "exact", 0.0};
    if (a.quantity == "affine" || a.quantity == "geominimal") {
      FunctionalResult r = a.quantity == "affine" ? affine_orlicz(bodies[0], phi, grid, opts)
                                                  : geominimal_orlicz(bodies[0], phi, grid, opts);
      row.value = r.value;
      row.side = to_string(r.certified_side);
    } else if (a.quantity == "s_phi") {
      row.value = s_phi(bodies[0], phi, &grid);
    } else if (a.quantity == "lp_closed_form") {
      if (phi.kind() != PhiKind::Power) fail(ErrorCode::ParseError, "lp_closed_form needs a power phi");
      row.value = lp_affine_closed_form(bodies[0], phi.param(), &grid);
    } else {
      fail(ErrorCode::ParseError, "sweep quantity must be affine, geominimal, s_phi or lp_closed_form");
    }
    row.ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    rows.push_back(row);
  }
  std::ostringstream os;
  if (c.format == "json") {
    json arr = json::array();
    for (const auto& r : rows)
      arr.push_back({{"param", r.param}, {"value", io::number(r.value)}, {"certified_side", r.side}, {"runtime_ms", r.ms}});
    os << json{{"axis", a.axis}, {"quantity", a.quantity}, {"rows", arr}}.dump(2) << "\n";
  } else {
    // grid sweeps: error against --reference if given, else change between rows
    const bool ref = a.reference.has_value();
    os << a.axis << ",value,certified_side,runtime_ms";
    if (grid_axis) os << (ref ? ",abs_error" : ",abs_change") << ",monotone_refinement";
    os << "\n";
    double prev = -1.0;
    for (std::size_t k = 0; k < rows.size(); ++k) {
      const auto& r = rows[k];
      char ms[32];
      std::snprintf(ms, sizeof ms, "%.3f", r.ms);
      os << io::format_double(r.param) << ',' << io::format_double(r.value) << ',' << r.side << ',' << ms;
      if (grid_axis) {
        if (!ref && k == 0) {
          os << ",,";
        } else {
          double e = ref ? std::abs(r.value - *a.reference) : std::abs(r.value - rows[k - 1].value);
          // round-off sized changes count as no change
          bool mono = prev < 0 || e <= prev + 8 * std::numeric_limits<double>::epsilon() * std::abs(r.value);
          os << ',' << io::format_double(e) << ',' << (prev < 0 ? "" : (mono ? "true" : "false"));
          prev = e;
        }
      }
      os << "\n";
    }
  }
  emit(c, os.str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Orlicz affine and geominimal surface areas: compute, verify, sweep"};
  app.require_subcommand(1);
  Common common;

  ComputeArgs ca;
  auto* compute = app.add_subcommand("compute", "evaluate one quantity and write its result JSON");
  add_common(compute, common);
  compute->add_option("--quantity", ca.quantity, "v_phi | s_phi | affine | geominimal | multi | ith_mixed | lp_closed_form")
      ->required();
  compute->add_option("--which", ca.which, "affine or geominimal (multi, ith_mixed)");
  compute->add_option("--i", ca.i, "index of the i-th mixed functional");

  VerifyArgs va;
  auto* verify = app.add_subcommand("verify", "run an inequality suite and write its report");
  add_common(verify, common);
  verify->add_option("name", va.suite, "suite name");
  verify->add_option("--suite", va.suite, "suite name");
  verify->add_flag("--equality", va.equality, "equality cases on the ellipsoids of the corpus");
  verify->add_option("--max-pairs", va.max_pairs, "body pairs for the two-body suites");

  SweepArgs sa;
  auto* sweep = app.add_subcommand("sweep", "tabulate a quantity along p or the grid resolution");
  add_common(sweep, common);
  sweep->add_option("--axis", sa.axis, "p or grid");
  sweep->add_option("--values", sa.values, "axis values")->delimiter(',');
  sweep->add_option("--quantity", sa.quantity, "affine | geominimal | s_phi | lp_closed_form");
  sweep->add_option("--reference", sa.reference, "exact value for the refinement column of grid sweeps");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::fprintf(stderr, "error: ParseError: %s\n", e.what());
    return 1;
  }
  if (sweep->parsed()) common.format = sweep->count("--format") ? common.format : "csv";
  try {
    if (compute->parsed()) return cmd_compute(common, ca);
    if (verify->parsed()) return cmd_verify(common, va);
    return cmd_sweep(common, sa);
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s: %s\n", std::string(to_string(e.code())).c_str(), e.what());
    return 1;
  }
}
