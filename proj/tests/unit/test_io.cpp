#include <algorithm>
#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <limits>

#include "doctest.h"
#include "helpers.hpp"
#include "orlicz/io.hpp"

using namespace orlicz;
using testing_util::code_of;
using testing_util::v2;

namespace {

bool same_bits(double a, double b) { return std::memcmp(&a, &b, sizeof a) == 0; }

bool same_bits(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!same_bits(a[i], b[i])) return false;
  return true;
}

// serialize to text and back
ConvexBody through_text(const ConvexBody& K) {
  return io::convex_from_json(io::parse_json(io::to_json(K).dump()), K.dim());
}

}  // namespace

TEST_CASE("number: non-finite values travel as strings") {
  const double inf = std::numeric_limits<double>::infinity();
  CHECK(io::number(inf) == "inf");
  CHECK(io::number(-inf) == "-inf");
  CHECK(io::number(std::nan("")) == "nan");
  CHECK(io::to_double(io::number(-inf)) == -inf);
  CHECK(std::isnan(io::to_double(io::number(std::nan("")))));
  CHECK(io::to_double(io::number(0.1)) == 0.1);
  CHECK(code_of([] { io::to_double("huge"); }) == ErrorCode::ParseError);
}

TEST_CASE("body JSON round trips bit for bit") {
  SUBCASE("smooth") {
    ConvexBody K = random_body(2, 17, BodyClass::Smooth, 64);
    ConvexBody R = through_text(K);
    REQUIRE(R.kind() == BodyKind::Smooth);
    const auto* a = K.as<SmoothSampled>();
    const auto* b = R.as<SmoothSampled>();
    CHECK(same_bits(a->h, b->h));
    REQUIRE(b->f.has_value());
    CHECK(same_bits(*a->f, *b->f));
    CHECK(b->grid.same_as(a->grid));
  }
  SUBCASE("vpolytope") {
    ConvexBody K = random_body(2, 5, BodyClass::Polytope);
    ConvexBody R = through_text(K);
    const auto& va = K.as<VPolytope>()->vertices;
    const auto& vb = R.as<VPolytope>()->vertices;
    REQUIRE(va.size() == vb.size());
    for (std::size_t i = 0; i < va.size(); ++i) CHECK((va[i].array() == vb[i].array()).all());
  }
  SUBCASE("hpolytope") {
    ConvexBody K = ConvexBody::hpolytope({v2(1, 0), v2(0, 1), v2(-0.6, -0.8)}, {0.3, 1.0 / 3.0, 0.7});
    ConvexBody R = through_text(K);
    CHECK(same_bits(K.as<HPolytope>()->offsets, R.as<HPolytope>()->offsets));
  }
  SUBCASE("ellipsoid") {
    ConvexBody K = ConvexBody::ellipsoid(random_sl(2, 3, 4.0).matrix);
    ConvexBody R = through_text(K);
    CHECK((K.as<Ellipsoid>()->matrix.array() == R.as<Ellipsoid>()->matrix.array()).all());
    CHECK(same_bits(volume(K), volume(R)));
  }
  SUBCASE("ball and star") {
    ConvexBody B = through_text(ConvexBody::ball(0.7, 3));
    CHECK(B.dim() == 3);
    CHECK(B.as<Ball>()->radius == 0.7);
    StarBody S(build_grid(2, 16), std::vector<double>(16, 1.0 / 7.0));
    auto any = io::body_from_json(io::parse_json(io::to_json(S).dump()));
    REQUIRE(std::holds_alternative<StarBody>(any));
    CHECK(same_bits(std::get<StarBody>(any).rho, S.rho));
  }
}

TEST_CASE("body JSON errors") {
  CHECK(code_of([] { io::convex_from_json(io::parse_json(R"({"kind": "blob"})")); }) == ErrorCode::ParseError);
  CHECK(code_of([] { io::convex_from_json(io::parse_json(R"({"kind": "ball", "r": "x"})")); }) ==
        ErrorCode::ParseError);
  CHECK(code_of([] { io::parse_json("{not json"); }) == ErrorCode::ParseError);
  auto star = io::parse_json(io::to_json(StarBody(build_grid(2, 8), std::vector<double>(8, 1.0))).dump());
  CHECK(code_of([&] { io::convex_from_json(star); }) == ErrorCode::ParseError);
}

TEST_CASE("phi specs") {
  CHECK(io::parse_phi("power:2", 2).param() == 2.0);
  CHECK(io::parse_phi("power(-1.5)", 2).param() == -1.5);
  CHECK(io::parse_phi("constant:3", 2).kind() == PhiKind::Constant);
  CHECK(io::parse_phi("arctan_inv_n", 2).kind() == PhiKind::ArctanInvN);
  CHECK(io::parse_phi(R"({"kind": "power", "p": 0.5})", 2).param() == 0.5);
  for (const char* bad : {"power", "power:x", "arctan_inv_n:2", "wobble", "power:1e", ""})
    CHECK(code_of([&] { io::parse_phi(bad, 2); }) == ErrorCode::ParseError);
  // every built-in survives a round trip
  for (auto phi : {OrliczFunction::power(0.1, 2), OrliczFunction::constant(2.5, 2), OrliczFunction::log1p_inv_n(2),
                   OrliczFunction::exp_neg_inv_n(2), OrliczFunction::arctan_inv_n(2)}) {
    auto back = io::phi_from_json(io::parse_json(io::to_json(phi).dump()), 2);
    CHECK(back.kind() == phi.kind());
    CHECK(same_bits(back.param(), phi.param()));
  }
  auto custom = OrliczFunction::custom([](double t) { return t; }, 2, "id");
  CHECK(code_of([&] { io::to_json(custom); }) == ErrorCode::ParseError);
}

TEST_CASE("phi spec from a file") {
  auto path = std::filesystem::temp_directory_path() / "orlicz_phi_spec.json";
  {
    std::ofstream out(path);
    out << R"({"kind": "power", "p": -1})";
  }
  CHECK(io::parse_phi(path.string(), 2).param() == -1.0);
  std::filesystem::remove(path);
}

TEST_CASE("FunctionalResult JSON") {
  FunctionalResult r;
  r.value = std::numeric_limits<double>::infinity();
  r.diverging = true;
  r.trace.restart_values = {1.0, std::numeric_limits<double>::infinity()};
  auto j = io::parse_json(io::to_json(r).dump());
  CHECK(j["value"] == "inf");
  CHECK(j["diverging"] == true);
  CHECK(j["trace"]["restart_values"][1] == "inf");
  CHECK(j["witness"].empty());
}

TEST_CASE("CSV fields") {
  CHECK(io::csv_field("a,b") == "\"a,b\"");
  CHECK(io::csv_field("say \"hi\"") == "\"say \"\"hi\"\"\"");
  CHECK(io::format_double(0.1) == "0.10000000000000001");
  CHECK(io::format_double(-std::numeric_limits<double>::infinity()) == "-inf");
  CHECK(std::stod(io::format_double(1.0 / 3.0)) == 1.0 / 3.0);

  SuiteReport rep;
  rep.suite = "demo";
  CaseResult c = judge(Relation::Leq, {1.0, Bound::Upper}, {2.0, Bound::Lower}, 0.01);
  c.bodies = {"k1", "k2"};
  c.phis = {"power(2)"};
  c.claim = "G <= S_phi";
  c.notes = "has, comma";
  rep.cases.push_back(c);
  std::string csv = io::report_csv(rep);
  auto nl = csv.find('\n');
  CHECK(csv.substr(0, nl) == "suite,bodies,phis,claim,relation,lhs,rhs,lhs_side,rhs_side,margin,status,notes");
  CHECK(csv.find("\"has, comma\"") != std::string::npos);
  CHECK(csv.find("Certified") != std::string::npos);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 2);
}

TEST_CASE("write_atomic replaces the target") {
  auto path = (std::filesystem::temp_directory_path() / "orlicz_atomic.txt").string();
  io::write_atomic(path, "first");
  io::write_atomic(path, "second");
  std::ifstream in(path);
  std::string s;
  std::getline(in, s);
  CHECK(s == "second");
  std::filesystem::remove(path);
}
