#pragma once

#include <functional>
#include <stdexcept>
#include <vector>

#include "hypcert/cover.hpp"
#include "hypcert/digraph.hpp"
#include "hypcert/dynsys.hpp"

namespace hypcert {

class NewtonError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct PeriodicCandidate {
  std::vector<double> point;
  int period = 1;  // principal
  Cube source;     // vertex whose centre seeded the Newton iteration
};

struct RefineOptions {
  double newton_tol = 1e-12;
  int max_iter = 50;
  double dedup_tol = 1e-8;
  double period_sep_tol = 1e-6;
  unsigned threads = 1;
};

// Differences of periodic coordinates mapped to the representative nearest 0.
void wrap_difference(Vector& d, const std::vector<double>& periods);
double wrapped_distance(const std::vector<double>& a, const std::vector<double>& b,
                        const std::vector<double>& periods);

// Float Newton on g(x) = fⁱ(x) - x from the centre of every vertex of
// cycle_sets[i-1], processed by ascending period. A limit y is kept when it
// lies in supp(G), has principal period i and is not within dedup_tol of a
// point already kept. Result[i-1] holds the points of period i.
std::vector<std::vector<PeriodicCandidate>> refine_cycles(
    const DiGraph& g, const GridSpec& grid, const MapSystem& map,
    const std::vector<std::vector<VertexId>>& cycle_sets, const RefineOptions& options = {});

// Partitions points of one period into orbits (indices into `points`).
std::vector<std::vector<std::size_t>> group_orbits(const std::vector<PeriodicCandidate>& points,
                                                   const MapSystem& map,
                                                   const std::vector<double>& periods,
                                                   double tol = 1e-8);

// g: Rⁿ -> Rⁿ in interval form.
struct ResidualSystem {
  std::size_t dimension = 0;
  std::function<IntervalVector(const IntervalVector&)> value;
  std::function<IntervalMatrix(const IntervalVector&)> derivative;
};

struct RigorousOrbitProof {
  std::vector<double> centre;
  double radius = 0.0;
  IntervalVector newton_image;  // N(x̄, X, g)
  bool verdict = false;         // N ⊂ int(X): unique zero of g in X, inside N
};

// Interval Newton operator N = x̄ - [Dg(X)]⁻¹ g(x̄) over the max-norm ball X of
// the given radius. Throws NewtonError("Newton operator undefined") when the
// interval Jacobian cannot be inverted.
RigorousOrbitProof interval_newton(const ResidualSystem& g, const std::vector<double>& centre,
                                   double radius);

// Residual f - Id, periodic coordinates shifted by the whole number of
// periods nearest to f(x̄) - x̄.
ResidualSystem fixed_point_residual(const MapSystem& map, const std::vector<double>& centre,
                                    const std::vector<double>& periods);
// F(x, y) = (f(x) - y, f(y) - x) on R²ⁿ with the same periodic shifts.
ResidualSystem period_two_residual(const MapSystem& map, const std::vector<double>& x,
                                   const std::vector<double>& y,
                                   const std::vector<double>& periods);

RigorousOrbitProof prove_fixed_point(const MapSystem& map, const std::vector<double>& centre,
                                     double radius, const std::vector<double>& periods = {});
// Requires ‖x̄ - ȳ‖∞ > 2r (throws std::invalid_argument otherwise) so that a
// verified zero has distinct components.
RigorousOrbitProof prove_period_two(const MapSystem& map, const std::vector<double>& x,
                                    const std::vector<double>& y, double radius,
                                    const std::vector<double>& periods = {});

}  // namespace hypcert
