#include "hypcert/periodic.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

#include "hypcert/enclose.hpp"
#include "hypcert/parallel.hpp"

namespace hypcert {

namespace {

double period_of(const std::vector<double>& periods, std::size_t i) {
  return i < periods.size() ? periods[i] : 0.0;
}

double max_abs(const Vector& v) { return v.size() == 0 ? 0.0 : v.cwiseAbs().maxCoeff(); }

}  // namespace

void wrap_difference(Vector& d, const std::vector<double>& periods) {
  for (Eigen::Index i = 0; i < d.size(); ++i) {
    const double p = period_of(periods, static_cast<std::size_t>(i));
    if (p > 0.0) d(i) -= p * std::round(d(i) / p);
  }
}

double wrapped_distance(const std::vector<double>& a, const std::vector<double>& b,
                        const std::vector<double>& periods) {
  Vector d = to_vector(a) - to_vector(b);
  wrap_difference(d, periods);
  return max_abs(d);
}

namespace {

std::optional<Vector> newton_periodic(const MapSystem& map, Vector x, int period,
                                      const std::vector<double>& periods,
                                      const RefineOptions& opt) {
  const auto n = static_cast<Eigen::Index>(map.dimension());
  for (int it = 0; it <= opt.max_iter; ++it) {
    Vector g = iterate(map, x, period) - x;
    wrap_difference(g, periods);
    if (!g.allFinite()) return std::nullopt;
    if (max_abs(g) <= opt.newton_tol) return x;
    if (it == opt.max_iter) break;
    const Matrix dg = iterate_jac(map, x, period) - Matrix::Identity(n, n);
    Eigen::FullPivLU<Matrix> lu(dg);
    if (!lu.isInvertible()) return std::nullopt;
    x -= lu.solve(g);
    if (!x.allFinite()) return std::nullopt;
  }
  return std::nullopt;
}

bool has_principal_period(const MapSystem& map, const Vector& y, int period,
                          const std::vector<double>& periods, double sep_tol) {
  Vector z = y;
  for (int j = 1; j < period; ++j) {
    z = map.eval(z);
    Vector d = z - y;
    wrap_difference(d, periods);
    if (max_abs(d) < sep_tol) return false;
  }
  return true;
}

bool in_support(const DiGraph& g, const GridSpec& grid, const std::vector<double>& y) {
  for (const auto& c : cubes_containing(grid, y)) {
    if (g.contains(c)) return true;
  }
  return false;
}

}  // namespace

std::vector<std::vector<PeriodicCandidate>> refine_cycles(
    const DiGraph& g, const GridSpec& grid, const MapSystem& map,
    const std::vector<std::vector<VertexId>>& cycle_sets, const RefineOptions& options) {
  const auto periods = grid.periods();
  std::vector<std::vector<PeriodicCandidate>> result(cycle_sets.size());
  for (std::size_t pi = 0; pi < cycle_sets.size(); ++pi) {
    const int period = static_cast<int>(pi) + 1;
    const auto& seeds = cycle_sets[pi];
    std::vector<std::optional<Vector>> limits(seeds.size());
    parallel_for(seeds.size(), options.threads, [&](std::size_t i) {
      auto y = newton_periodic(map, to_vector(centre(grid, g.cube(seeds[i]))), period, periods,
                               options);
      if (!y) return;
      reduce_periodic(*y, periods);
      if (!has_principal_period(map, *y, period, periods, options.period_sep_tol)) return;
      if (!in_support(g, grid, to_std(*y))) return;
      limits[i] = std::move(y);
    });
    auto& kept = result[pi];
    for (std::size_t i = 0; i < seeds.size(); ++i) {
      if (!limits[i]) continue;
      std::vector<double> y = to_std(*limits[i]);
      const bool duplicate = std::any_of(kept.begin(), kept.end(), [&](const auto& c) {
        return wrapped_distance(c.point, y, periods) < options.dedup_tol;
      });
      if (!duplicate) kept.push_back({std::move(y), period, g.cube(seeds[i])});
    }
  }
  return result;
}

std::vector<std::vector<std::size_t>> group_orbits(const std::vector<PeriodicCandidate>& points,
                                                   const MapSystem& map,
                                                   const std::vector<double>& periods,
                                                   double tol) {
  std::vector<std::vector<std::size_t>> orbits;
  std::vector<char> used(points.size(), 0);
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (used[i]) continue;
    std::vector<std::size_t> orbit{i};
    used[i] = 1;
    Vector z = to_vector(points[i].point);
    for (int step = 1; step < points[i].period; ++step) {
      z = map.eval(z);
      reduce_periodic(z, periods);
      const auto zs = to_std(z);
      for (std::size_t j = 0; j < points.size(); ++j) {
        if (!used[j] && wrapped_distance(points[j].point, zs, periods) < tol) {
          used[j] = 1;
          orbit.push_back(j);
          break;
        }
      }
    }
    orbits.push_back(std::move(orbit));
  }
  return orbits;
}

RigorousOrbitProof interval_newton(const ResidualSystem& g, const std::vector<double>& centre,
                                   double radius) {
  if (centre.size() != g.dimension) throw DimensionError("Newton centre dimension mismatch");
  if (!(radius > 0.0)) throw std::invalid_argument("Newton radius must be positive");
  RigorousOrbitProof proof;
  proof.centre = centre;
  proof.radius = radius;
  const IntervalVector box = IntervalVector::ball(centre, radius);
  const IntervalVector x_bar = IntervalVector::from_point(centre);
  IntervalVector step;
  try {
    step = interval_solve(g.derivative(box), g.value(x_bar));
  } catch (const IntervalError&) {
    throw NewtonError("Newton operator undefined");
  }
  proof.newton_image = x_bar - step;
  proof.verdict = box.contains_in_interior(proof.newton_image);
  return proof;
}

namespace {

// Whole-period shifts s with f(x̄) - x̄ - s near zero in periodic coordinates.
IntervalVector shift_for(const MapSystem& map, const std::vector<double>& from,
                         const std::vector<double>& to, const std::vector<double>& periods) {
  const Vector d = map.eval(to_vector(from)) - to_vector(to);
  IntervalVector s(from.size());
  for (std::size_t i = 0; i < from.size(); ++i) {
    const double p = period_of(periods, i);
    s[i] = p > 0.0 ? Interval(p) * Interval(std::round(d(static_cast<Eigen::Index>(i)) / p))
                   : Interval(0.0);
  }
  return s;
}

IntervalVector slice(const IntervalVector& v, std::size_t from, std::size_t count) {
  IntervalVector r(count);
  for (std::size_t i = 0; i < count; ++i) r[i] = v[from + i];
  return r;
}

}  // namespace

ResidualSystem fixed_point_residual(const MapSystem& map, const std::vector<double>& centre,
                                    const std::vector<double>& periods) {
  const std::size_t n = map.dimension();
  if (centre.size() != n) throw DimensionError("fixed point centre dimension mismatch");
  const IntervalVector shift = shift_for(map, centre, centre, periods);
  ResidualSystem g;
  g.dimension = n;
  g.value = [&map, shift](const IntervalVector& x) { return map.eval_i(x) - x - shift; };
  g.derivative = [&map, n](const IntervalVector& x) {
    return map.jac_i(x) - IntervalMatrix::identity(n);
  };
  return g;
}

ResidualSystem period_two_residual(const MapSystem& map, const std::vector<double>& x,
                                   const std::vector<double>& y,
                                   const std::vector<double>& periods) {
  const std::size_t n = map.dimension();
  if (x.size() != n || y.size() != n) throw DimensionError("period-two centre dimension mismatch");
  const IntervalVector sx = shift_for(map, x, y, periods);
  const IntervalVector sy = shift_for(map, y, x, periods);
  ResidualSystem g;
  g.dimension = 2 * n;
  g.value = [&map, n, sx, sy](const IntervalVector& z) {
    const IntervalVector a = slice(z, 0, n);
    const IntervalVector b = slice(z, n, n);
    const IntervalVector fa = map.eval_i(a) - b - sx;
    const IntervalVector fb = map.eval_i(b) - a - sy;
    IntervalVector r(2 * n);
    for (std::size_t i = 0; i < n; ++i) {
      r[i] = fa[i];
      r[n + i] = fb[i];
    }
    return r;
  };
  g.derivative = [&map, n](const IntervalVector& z) {
    const IntervalMatrix da = map.jac_i(slice(z, 0, n));
    const IntervalMatrix db = map.jac_i(slice(z, n, n));
    IntervalMatrix d(2 * n, 2 * n);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        d(i, j) = da(i, j);
        d(n + i, n + j) = db(i, j);
      }
      d(i, n + i) = Interval(-1.0);
      d(n + i, i) = Interval(-1.0);
    }
    return d;
  };
  return g;
}

RigorousOrbitProof prove_fixed_point(const MapSystem& map, const std::vector<double>& centre,
                                     double radius, const std::vector<double>& periods) {
  return interval_newton(fixed_point_residual(map, centre, periods), centre, radius);
}

RigorousOrbitProof prove_period_two(const MapSystem& map, const std::vector<double>& x,
                                    const std::vector<double>& y, double radius,
                                    const std::vector<double>& periods) {
  if (!(wrapped_distance(x, y, periods) > 2.0 * radius)) {
    throw std::invalid_argument("period-two centres must be more than 2r apart");
  }
  std::vector<double> z = x;
  z.insert(z.end(), y.begin(), y.end());
  return interval_newton(period_two_residual(map, x, y, periods), z, radius);
}

}  // namespace hypcert
