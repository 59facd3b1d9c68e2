#include "orlicz/numeric.hpp"

#include <cmath>
#include <cstdlib>

#include "orlicz/errors.hpp"

namespace orlicz {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidResolution: return "InvalidResolution";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::NonFiniteIntegrand: return "NonFiniteIntegrand";
    case ErrorCode::InvalidBody: return "InvalidBody";
    case ErrorCode::OriginNotInterior: return "OriginNotInterior";
    case ErrorCode::UnsupportedDimension: return "UnsupportedDimension";
    case ErrorCode::MissingCurvature: return "MissingCurvature";
    case ErrorCode::NotConvexProfile: return "NotConvexProfile";
    case ErrorCode::NotUnimodular: return "NotUnimodular";
    case ErrorCode::DegenerateSample: return "DegenerateSample";
    case ErrorCode::DomainError: return "DomainError";
    case ErrorCode::RangeError: return "RangeError";
    case ErrorCode::ClassificationConflict: return "ClassificationConflict";
    case ErrorCode::NearDegenerate: return "NearDegenerate";
    case ErrorCode::IncompatibleGrids: return "IncompatibleGrids";
    case ErrorCode::UnclassifiedPhi: return "UnclassifiedPhi";
    case ErrorCode::PEqualsMinusN: return "PEqualsMinusN";
    case ErrorCode::MixedClassConflict: return "MixedClassConflict";
    case ErrorCode::UnknownSuite: return "UnknownSuite";
    case ErrorCode::ClassMismatch: return "ClassMismatch";
    case ErrorCode::ParseError: return "ParseError";
  }
  return "Unknown";
}

void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

double omega(int n) {
  return std::pow(kPi, 0.5 * n) / std::tgamma(0.5 * n + 1.0);
}

namespace {

double cascade(const double* x, std::size_t n) {
  if (n <= 8) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += x[i];
    return s;
  }
  std::size_t half = n / 2;
  return cascade(x, half) + cascade(x + half, n - half);
}

std::uint64_t splitmix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

double pairwise_sum(std::span<const double> terms) {
  return cascade(terms.data(), terms.size());
}

std::mt19937_64 stream_rng(std::uint64_t seed, std::string_view stream,
                           std::uint64_t index) {
  // FNV-1a over the stream name, then mixed with seed and index.
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : stream) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  std::uint64_t s = splitmix(seed ^ splitmix(h ^ splitmix(index)));
  std::seed_seq seq{static_cast<std::uint32_t>(s), static_cast<std::uint32_t>(s >> 32)};
  return std::mt19937_64(seq);
}

int thread_cap() {
  const char* env = std::getenv("ORLICZ_THREADS");
  if (env == nullptr) return 1;
  int v = std::atoi(env);
  return v > 0 ? v : 1;
}

}  // namespace orlicz
