#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "orlicz/bodies.hpp"
#include "orlicz/functionals.hpp"
#include "orlicz/orlicz_function.hpp"

namespace orlicz {

enum class CaseStatus { Certified, Inconclusive, Violated };
const char* to_string(CaseStatus s);

/// Side of a harness estimate relative to the true quantity.  None: no
/// direction is known (e.g. a product of an upper and a lower bound).
enum class Bound { Upper, Lower, Exact, None };
const char* to_string(Bound b);

struct Estimate {
  double value = 0.0;
  Bound side = Bound::None;
};

enum class Relation { Leq, Geq, Eq };
const char* to_string(Relation r);

struct CaseResult {
  std::vector<std::string> bodies;
  std::vector<std::string> phis;
  std::string claim;  // human-readable inequality, e.g. "G <= S_phi"
  Relation relation = Relation::Leq;
  double lhs = 0.0;
  double rhs = 0.0;
  Bound lhs_side = Bound::None;
  Bound rhs_side = Bound::None;
  /// Relative excess in the forbidden direction (<= 0 when the claim holds).
  /// For Eq, the relative distance.
  double margin = 0.0;
  CaseStatus status = CaseStatus::Inconclusive;
  std::string notes;
};

struct SuiteReport {
  std::string suite;
  std::vector<CaseResult> cases;
  std::vector<std::string> notes;  // skipped bodies / pairs and why
  std::uint64_t seed = 0;
  double tol = 0.01;
  int grid_resolution = 0;
  int count(CaseStatus s) const;
};

/// Leq: Certified needs lhs in {Upper, Exact} and rhs in {Lower, Exact}; Geq is
/// the mirror.  Any case whose margin exceeds tol is Violated.  Eq is an
/// accuracy check: within tol is Certified, otherwise Violated.
CaseResult judge(Relation rel, Estimate lhs, Estimate rhs, double tol);

struct CorpusBody {
  std::string id;
  ConvexBody body;
};

struct CorpusOptions {
  int dim = 2;
  int smooth = 20;
  int polytopes = 10;
  int ellipsoids = 5;
  int resolution = 256;  // sampling grid of the smooth bodies
  std::uint64_t seed = 42;
};

/// Centroid-centered bodies scaled to |K| = omega_n: smooth perturbed
/// ellipses, random polytopes, then ellipsoids (the first one the unit ball).
std::vector<CorpusBody> golden_corpus(const CorpusOptions& opts = {});

const std::vector<std::string>& suite_names();

/// The phi families each suite runs with when none are given.
std::vector<OrliczFunction> default_phis(const std::string& suite, int dim);

struct HarnessOptions {
  double tol = 0.01;
  OptimizerOptions optimizer{4, 5000, 1e-6, 0, 0};
  std::uint64_t seed = 42;  // SL maps, shifted copies, optimizer restarts
  int max_pairs = 5;        // body pairs for the multi-body suites
};

SuiteReport run_suite(const std::string& name, const std::vector<CorpusBody>& corpus,
                      const std::vector<OrliczFunction>& phis, const SphereGrid& grid,
                      const HarnessOptions& opts = {});

/// Runs `suite` on ellipsoids (balls included) and reports the cases that are
/// tight there, with Eq relations: isoperimetric, comparison, alexander-fenchel.
SuiteReport equality_witness(const std::string& suite, const std::vector<CorpusBody>& ellipsoids,
                             const std::vector<OrliczFunction>& phis, const SphereGrid& grid,
                             const HarnessOptions& opts = {});

}  // namespace orlicz
