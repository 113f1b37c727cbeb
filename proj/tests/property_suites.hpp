#pragma once

#include <cstddef>
#include <cstdint>
#include <string>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "hypcert/interval.hpp"

namespace hypcert::testing {

using Big = boost::multiprecision::cpp_bin_float_50;

inline bool contains_exact(const Interval& a, const Big& x) {
  return Big(a.lo()) <= x && x <= Big(a.hi());
}

// Each suite counts violations of one invariant over randomized instances
// drawn from a fixed seed.
struct SuiteResult {
  std::size_t cases = 0;
  std::size_t violations = 0;
  std::size_t informative = 0;  // cases where the property had something to check
  std::string note;
};

// Random op/operand/sample triples; the extended-precision image of the
// sample must lie in the interval result.
SuiteResult interval_soundness(std::size_t cases, std::uint64_t seed = 1);

// Random interval matrices; whenever the PD test says yes, 100 sampled
// symmetric members must have min eigenvalue > -1e-12.
SuiteResult pd_conservative(std::size_t cases, std::uint64_t seed = 2);

// Random boxes on random grids (bounded and periodic dims): every sampled
// point of the box is covered, and every returned cube is needed.
SuiteResult min_cover_checks(std::size_t cases, std::uint64_t seed = 3);

// cycle_vertex_sets against the diagonal of boolean adjacency powers.
SuiteResult cycle_oracle(std::size_t graphs, std::uint64_t seed = 4);

// g(x) = x² - 2 on [1.3, 1.5]: N must lie in [1.4133, 1.4155] and be
// strictly inside X.
SuiteResult newton_sqrt2();

// Frames spread over a strongly connected graph for f(x) = diag(2, 0.5) x;
// every edge matrix C_W A C_V⁻¹ within 1e-6 of diag(2, 0.5).
SuiteResult spread_linear();

}  // namespace hypcert::testing
