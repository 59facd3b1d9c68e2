#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <string_view>
#include <vector>

namespace orlicz {

inline constexpr double kPi = 3.14159265358979323846;

/// Volume of the unit ball in R^n.
double omega(int n);

/// Pairwise (cascade) summation; the fixed recursion order makes results
/// reproducible regardless of how the caller produced the terms.
double pairwise_sum(std::span<const double> terms);

inline double pairwise_sum(const std::vector<double>& terms) {
  return pairwise_sum(std::span<const double>(terms.data(), terms.size()));
}

/// Derive an independent generator for a named stream from one master seed.
std::mt19937_64 stream_rng(std::uint64_t seed, std::string_view stream,
                           std::uint64_t index = 0);

/// Number of worker threads allowed (ORLICZ_THREADS, default 1).
int thread_cap();

}  // namespace orlicz
