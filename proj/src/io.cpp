#include "orlicz/io.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <regex>
#include <sstream>

#include <unistd.h>

#include "orlicz/errors.hpp"

namespace orlicz::io {

json number(double v) {
  if (std::isfinite(v)) return v;
  if (std::isnan(v)) return "nan";
  return v > 0 ? "inf" : "-inf";
}

double to_double(const json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const auto& s = j.get_ref<const std::string&>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  }
  fail(ErrorCode::ParseError, "expected a number, got " + j.dump());
}

namespace {

const json& field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) fail(ErrorCode::ParseError, std::string("missing field '") + key + "'");
  return j.at(key);
}

std::vector<double> doubles(const json& j) {
  if (!j.is_array()) fail(ErrorCode::ParseError, "expected an array of numbers");
  std::vector<double> out;
  out.reserve(j.size());
  for (const auto& x : j) out.push_back(to_double(x));
  return out;
}

Vec vec(const json& j) {
  auto v = doubles(j);
  return Eigen::Map<const Vec>(v.data(), static_cast<Eigen::Index>(v.size()));
}

std::vector<Vec> vecs(const json& j) {
  if (!j.is_array()) fail(ErrorCode::ParseError, "expected an array of points");
  std::vector<Vec> out;
  for (const auto& x : j) out.push_back(vec(x));
  return out;
}

json vec_json(const Vec& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

json vecs_json(const std::vector<Vec>& vs) {
  json a = json::array();
  for (const auto& v : vs) a.push_back(vec_json(v));
  return a;
}

// library errors keep their code; malformed JSON becomes ParseError
template <class Fn>
auto parsing(Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const json::exception& e) {
    fail(ErrorCode::ParseError, e.what());
  }
}

}  // namespace

json to_json(const SphereGrid& grid) {
  return {{"dim", grid.dim()}, {"nodes", vecs_json(grid.nodes())}, {"weights", grid.weights()}};
}

SphereGrid grid_from_json(const json& j) {
  return parsing([&] {
    const int dim = field(j, "dim").get<int>();
    return SphereGrid(dim, vecs(field(j, "nodes")), doubles(field(j, "weights")));
  });
}

json to_json(const ConvexBody& body) {
  return std::visit(
      [&](const auto& b) -> json {
        using T = std::decay_t<decltype(b)>;
        if constexpr (std::is_same_v<T, VPolytope>) {
          return {{"kind", "vpolytope"}, {"vertices", vecs_json(b.vertices)}};
        } else if constexpr (std::is_same_v<T, HPolytope>) {
          return {{"kind", "hpolytope"}, {"normals", vecs_json(b.normals)}, {"offsets", b.offsets}};
        } else if constexpr (std::is_same_v<T, Ball>) {
          return {{"kind", "ball"}, {"r", b.radius}, {"dim", b.dim}};
        } else if constexpr (std::is_same_v<T, Ellipsoid>) {
          json rows = json::array();
          for (Eigen::Index r = 0; r < b.matrix.rows(); ++r) rows.push_back(vec_json(b.matrix.row(r).transpose()));
          return {{"kind", "ellipsoid"}, {"matrix", rows}};
        } else {
          json out = {{"kind", "smooth"}, {"grid", to_json(b.grid)}, {"h", b.h}};
          if (b.f) out["f"] = *b.f;
          return out;
        }
      },
      body.rep());
}

json to_json(const StarBody& body) { return {{"kind", "star"}, {"grid", to_json(body.grid)}, {"rho", body.rho}}; }

AnyBody body_from_json(const json& j, int dim) {
  return parsing([&]() -> AnyBody {
    const std::string kind = field(j, "kind").get<std::string>();
    if (kind == "vpolytope") return ConvexBody::vpolytope(vecs(field(j, "vertices")));
    if (kind == "hpolytope") return ConvexBody::hpolytope(vecs(field(j, "normals")), doubles(field(j, "offsets")));
    if (kind == "ball") {
      const int d = j.contains("dim") ? j.at("dim").get<int>() : dim;
      return ConvexBody::ball(j.contains("r") ? to_double(j.at("r")) : 1.0, d);
    }
    if (kind == "ellipsoid") {
      const auto rows = vecs(field(j, "matrix"));
      if (rows.empty()) fail(ErrorCode::ParseError, "empty ellipsoid matrix");
      Mat A(rows.size(), rows[0].size());
      for (std::size_t r = 0; r < rows.size(); ++r) {
        if (rows[r].size() != A.cols()) fail(ErrorCode::ParseError, "ragged ellipsoid matrix");
        A.row(static_cast<Eigen::Index>(r)) = rows[r].transpose();
      }
      return ConvexBody::ellipsoid(A);
    }
    if (kind == "smooth") {
      std::optional<std::vector<double>> f;
      if (j.contains("f") && !j.at("f").is_null()) f = doubles(j.at("f"));
      return ConvexBody::smooth(grid_from_json(field(j, "grid")), doubles(field(j, "h")), std::move(f));
    }
    if (kind == "star") return StarBody(grid_from_json(field(j, "grid")), doubles(field(j, "rho")));
    fail(ErrorCode::ParseError, "unknown body kind '" + kind + "'");
  });
}

ConvexBody convex_from_json(const json& j, int dim) {
  AnyBody b = body_from_json(j, dim);
  if (auto* c = std::get_if<ConvexBody>(&b)) return *c;
  fail(ErrorCode::ParseError, "expected a convex body, got a star body");
}

json to_json(const OrliczFunction& phi) {
  switch (phi.kind()) {
    case PhiKind::Power: return {{"kind", "power"}, {"p", phi.param()}};
    case PhiKind::Constant: return {{"kind", "constant"}, {"a", phi.param()}};
    case PhiKind::ArctanInvN: return {{"kind", "arctan_inv_n"}};
    case PhiKind::Log1pInvN: return {{"kind", "log1p_inv_n"}};
    case PhiKind::ExpNegInvN: return {{"kind", "exp_neg_inv_n"}};
    case PhiKind::Custom: break;
  }
  fail(ErrorCode::ParseError, "custom function " + phi.name() + " has no JSON form");
}

namespace {

OrliczFunction phi_by_name(const std::string& kind, const std::optional<double>& param, int dim) {
  auto need = [&]() {
    if (!param) fail(ErrorCode::ParseError, kind + " needs a parameter");
    return *param;
  };
  if (kind == "power") return OrliczFunction::power(need(), dim);
  if (kind == "constant") return OrliczFunction::constant(need(), dim);
  if (param) fail(ErrorCode::ParseError, kind + " takes no parameter");
  if (kind == "arctan_inv_n") return OrliczFunction::arctan_inv_n(dim);
  if (kind == "log1p_inv_n") return OrliczFunction::log1p_inv_n(dim);
  if (kind == "exp_neg_inv_n") return OrliczFunction::exp_neg_inv_n(dim);
  fail(ErrorCode::ParseError, "unknown phi kind '" + kind + "'");
}

}  // namespace

OrliczFunction phi_from_json(const json& j, int dim) {
  return parsing([&] {
    const std::string kind = field(j, "kind").get<std::string>();
    std::optional<double> param;
    if (j.contains("p")) param = to_double(j.at("p"));
    if (j.contains("a")) param = to_double(j.at("a"));
    return phi_by_name(kind, param, dim);
  });
}

OrliczFunction parse_phi(const std::string& spec, int dim) {
  if (!spec.empty() && spec.front() == '{') return phi_from_json(parse_json(spec), dim);
  static const std::regex re(R"(^([a-z0-9_]+)(?:[:(]([-+0-9.eE]+)\)?)?$)");
  std::smatch m;
  if (std::regex_match(spec, m, re)) {
    std::optional<double> param;
    if (m[2].matched) {
      try {
        std::size_t pos = 0;
        param = std::stod(m[2].str(), &pos);
        if (pos != static_cast<std::size_t>(m[2].length())) throw std::invalid_argument("trailing");
      } catch (const std::exception&) {
        fail(ErrorCode::ParseError, "bad parameter in '" + spec + "'");
      }
    }
    if (!std::filesystem::exists(spec)) return phi_by_name(m[1].str(), param, dim);
  }
  if (std::filesystem::exists(spec)) return phi_from_json(read_json_file(spec), dim);
  fail(ErrorCode::ParseError, "cannot parse phi spec '" + spec + "'");
}

json to_json(const FunctionalResult& r) {
  json wit = json::array();
  for (const auto& s : r.star_witness) wit.push_back(to_json(s));
  for (const auto& b : r.body_witness) wit.push_back(to_json(b));
  json rv = json::array();
  for (double v : r.trace.restart_values) rv.push_back(number(v));
  return {{"value", number(r.value)},
          {"direction", to_string(r.direction)},
          {"certified_side", to_string(r.certified_side)},
          {"degenerate", r.degenerate},
          {"diverging", r.diverging},
          {"note", r.note},
          {"trace",
           {{"iterations", r.trace.iterations},
            {"restarts", r.trace.restarts},
            {"best_restart", r.trace.best_restart},
            {"grad_norm", number(r.trace.grad_norm)},
            {"restart_values", rv}}},
          {"witness", wit}};
}

json to_json(const SuiteReport& r) {
  json cases = json::array();
  for (const auto& c : r.cases) {
    cases.push_back({{"bodies", c.bodies},
                     {"phis", c.phis},
                     {"claim", c.claim},
                     {"relation", to_string(c.relation)},
                     {"lhs", number(c.lhs)},
                     {"rhs", number(c.rhs)},
                     {"lhs_side", to_string(c.lhs_side)},
                     {"rhs_side", to_string(c.rhs_side)},
                     {"margin", number(c.margin)},
                     {"status", to_string(c.status)},
                     {"notes", c.notes}});
  }
  return {{"suite", r.suite},
          {"seed", r.seed},
          {"tol", r.tol},
          {"grid_resolution", r.grid_resolution},
          {"counts",
           {{"Certified", r.count(CaseStatus::Certified)},
            {"Inconclusive", r.count(CaseStatus::Inconclusive)},
            {"Violated", r.count(CaseStatus::Violated)}}},
          {"notes", r.notes},
          {"cases", cases}};
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string csv_field(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string report_csv(const SuiteReport& r) {
  auto join = [](const std::vector<std::string>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ";" : "") + v[i];
    return s;
  };
  std::ostringstream os;
  os << "suite,bodies,phis,claim,relation,lhs,rhs,lhs_side,rhs_side,margin,status,notes\n";
  for (const auto& c : r.cases) {
    os << csv_field(r.suite) << ',' << csv_field(join(c.bodies)) << ',' << csv_field(join(c.phis)) << ','
       << csv_field(c.claim) << ',' << csv_field(to_string(c.relation)) << ',' << format_double(c.lhs) << ','
       << format_double(c.rhs) << ',' << csv_field(to_string(c.lhs_side)) << ',' << csv_field(to_string(c.rhs_side))
       << ',' << format_double(c.margin) << ',' << csv_field(to_string(c.status)) << ',' << csv_field(c.notes) << '\n';
  }
  return os.str();
}

json parse_json(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    fail(ErrorCode::ParseError, e.what());
  }
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::ParseError, "cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_json(ss.str());
}

void write_atomic(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) fail(ErrorCode::ParseError, "cannot write '" + tmp.string() + "'");
    out << content;
    out.flush();
    if (!out) fail(ErrorCode::ParseError, "write failed for '" + tmp.string() + "'");
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp);
    fail(ErrorCode::ParseError, "cannot move output into '" + path + "': " + ec.message());
  }
}

}  // namespace orlicz::io
