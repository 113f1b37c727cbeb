#include "property_suites.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "hypcert/cover.hpp"
#include "hypcert/digraph.hpp"
#include "hypcert/dynsys.hpp"
#include "hypcert/frames.hpp"
#include "hypcert/periodic.hpp"

namespace hypcert::testing {

namespace {

using Rng = std::mt19937_64;

double uniform(Rng& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

int uniform_int(Rng& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

Interval random_interval(Rng& rng, double scale) {
  const double centre = uniform(rng, -1.0, 1.0) * scale;
  const double roll = uniform(rng, 0.0, 1.0);
  if (roll < 0.1) return Interval(centre);
  const double width = std::pow(10.0, uniform(rng, -15.0, 0.5)) * std::max(1.0, scale / 10.0);
  return {centre, centre + width};
}

double sample(Rng& rng, const Interval& a) {
  const double roll = uniform(rng, 0.0, 1.0);
  if (roll < 0.15) return a.lo();
  if (roll < 0.3) return a.hi();
  return std::clamp(a.lo() + uniform(rng, 0.0, 1.0) * (a.hi() - a.lo()), a.lo(), a.hi());
}

}  // namespace

SuiteResult interval_soundness(std::size_t cases, std::uint64_t seed) {
  using boost::multiprecision::cos;
  using boost::multiprecision::sin;
  using boost::multiprecision::sqrt;
  Rng rng(seed);
  SuiteResult r;
  for (std::size_t i = 0; i < cases; ++i) {
    const int op = uniform_int(rng, 0, 7);
    const double scale = op >= 6 ? std::pow(10.0, uniform(rng, -1.0, 3.0)) : 10.0;
    Interval a = random_interval(rng, scale);
    Interval b = random_interval(rng, 10.0);
    if (op == 5) a = Interval(std::fabs(a.lo()) <= std::fabs(a.hi()) ? std::fabs(a.lo()) : std::fabs(a.hi()),
                              std::max(std::fabs(a.lo()), std::fabs(a.hi())));
    if (op == 3 && b.contains_zero()) b = Interval(b.hi() + 0.5, b.hi() + 1.5);
    const double x = sample(rng, a);
    const double y = sample(rng, b);
    Interval res;
    Big exact;
    switch (op) {
      case 0: res = a + b; exact = Big(x) + Big(y); break;
      case 1: res = a - b; exact = Big(x) - Big(y); break;
      case 2: res = a * b; exact = Big(x) * Big(y); break;
      case 3: res = a / b; exact = Big(x) / Big(y); break;
      case 4: res = sqr(a); exact = Big(x) * Big(x); break;
      case 5: res = hypcert::sqrt(a); exact = sqrt(Big(x)); break;
      case 6: res = hypcert::sin(a); exact = sin(Big(x)); break;
      default: res = hypcert::cos(a); exact = cos(Big(x)); break;
    }
    ++r.cases;
    ++r.informative;
    if (!contains_exact(res, exact) || !(res.lo() <= res.hi())) ++r.violations;
  }
  return r;
}

SuiteResult pd_conservative(std::size_t cases, std::uint64_t seed) {
  Rng rng(seed);
  SuiteResult r;
  for (std::size_t c = 0; c < cases; ++c) {
    const int n = uniform_int(rng, 2, 4);
    Eigen::MatrixXd g(n, n);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) g(i, j) = uniform(rng, -1.0, 1.0);
    }
    const Eigen::MatrixXd q = Eigen::HouseholderQR<Eigen::MatrixXd>(g).householderQ();
    Eigen::VectorXd d(n);
    for (int i = 0; i < n; ++i) d(i) = uniform(rng, -0.3, 2.0);
    const Eigen::MatrixXd s = q * d.asDiagonal() * q.transpose();
    const double spread = std::pow(10.0, uniform(rng, -4.0, -0.5));
    IntervalMatrix a(static_cast<std::size_t>(n), static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        // slightly different radii above and below the diagonal
        const double rad = spread * uniform(rng, 0.0, 1.0);
        const double centre = 0.5 * (s(i, j) + s(j, i));
        a(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) = Interval(centre - rad, centre + rad);
      }
    }
    ++r.cases;
    if (!is_positive_definite(a)) continue;
    ++r.informative;
    const IntervalMatrix sym = symmetrize(a);
    for (int t = 0; t < 100; ++t) {
      Eigen::MatrixXd m(n, n);
      for (int i = 0; i < n; ++i) {
        for (int j = i; j < n; ++j) {
          const Interval& e = sym(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
          const double roll = uniform(rng, 0.0, 1.0);
          const double v = roll < 0.25 ? e.lo() : roll < 0.5 ? e.hi() : sample(rng, e);
          m(i, j) = v;
          m(j, i) = v;
        }
      }
      const double lmin = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(m).eigenvalues().minCoeff();
      if (lmin < -1e-12) {
        ++r.violations;
        break;
      }
    }
  }
  return r;
}

namespace {

// Longest overlap of [a, b] with the cell [ca, cb] shifted by multiples of
// period (period 0: no shift). Returns the midpoint and the overlap length.
std::pair<double, double> best_overlap(double a, double b, double ca, double cb, double period) {
  if (period <= 0.0) {
    const double lo = std::max(a, ca);
    const double hi = std::min(b, cb);
    return {0.5 * (lo + hi), hi - lo};
  }
  const long m0 = static_cast<long>(std::floor((a - cb) / period)) - 1;
  const long m1 = static_cast<long>(std::ceil((b - ca) / period)) + 1;
  std::pair<double, double> best{0.0, -1.0};
  for (long m = m0; m <= m1; ++m) {
    const double lo = std::max(a, ca + static_cast<double>(m) * period);
    const double hi = std::min(b, cb + static_cast<double>(m) * period);
    if (hi - lo > best.second) best = {0.5 * (lo + hi), hi - lo};
  }
  return best;
}

double reduce(double x, double period) {
  return period > 0.0 ? x - period * std::floor(x / period) : x;
}

bool covered(const GridSpec& grid, const std::vector<Cube>& cubes, const std::vector<double>& x,
             const Cube* skip) {
  // cubes is sorted
  for (const auto& c : cubes_containing(grid, x)) {
    if (skip && c == *skip) continue;
    if (std::binary_search(cubes.begin(), cubes.end(), c)) return true;
  }
  return false;
}

}  // namespace

SuiteResult min_cover_checks(std::size_t cases, std::uint64_t seed) {
  Rng rng(seed);
  SuiteResult r;
  for (std::size_t c = 0; c < cases; ++c) {
    const int n = uniform_int(rng, 1, 3);
    const int k = uniform_int(rng, 0, n == 1 ? 6 : n == 2 ? 5 : 3);  // keeps covers small
    const double fine = std::ldexp(1.0, -(k + 3));  // box endpoints on a finer lattice
    std::vector<GridSpec::RealDim> dims;
    for (int i = 0; i < n; ++i) {
      if (uniform(rng, 0.0, 1.0) < 0.4) {
        dims.push_back({0.0, static_cast<double>(uniform_int(rng, 1, 3)), true});
      } else {
        const double lo = uniform_int(rng, -3, 0);
        dims.push_back({lo, lo + uniform_int(rng, 1, 3), false});
      }
    }
    const GridSpec grid = GridSpec::from_real(dims, k);
    const auto periods = grid.periods();
    const bool escape_case = uniform(rng, 0.0, 1.0) < 0.05;
    bool degenerate = false;
    bool expect_escape = false;
    IntervalVector box(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
      const auto& d = dims[static_cast<std::size_t>(i)];
      const double span = d.hi - d.lo;
      const long cells = std::lround(span / fine);
      long a = 0;
      long b = 0;
      if (d.periodic) {
        a = uniform_int(rng, static_cast<int>(-2 * cells), static_cast<int>(2 * cells));
        const double roll = uniform(rng, 0.0, 1.0);
        b = a + (roll < 0.1 ? 0 : roll < 0.2 ? uniform_int(rng, static_cast<int>(cells), static_cast<int>(2 * cells))
                                              : uniform_int(rng, 0, static_cast<int>(cells / 2 + 1)));
      } else {
        a = uniform_int(rng, 0, static_cast<int>(cells));
        b = uniform(rng, 0.0, 1.0) < 0.1 ? a : uniform_int(rng, static_cast<int>(a), static_cast<int>(cells));
        if (escape_case && i == 0) {
          b = cells + uniform_int(rng, 1, 8);
          expect_escape = true;
        }
      }
      if (a == b) degenerate = true;
      const double lo = d.lo + static_cast<double>(a) * fine;
      const double hi = d.lo + static_cast<double>(b) * fine;
      box[static_cast<std::size_t>(i)] = Interval(lo, hi);
    }
    ++r.cases;
    const CoverResult cover = min_cover(grid, box);
    if (expect_escape) {
      if (!cover.escaped) ++r.violations;
      continue;
    }
    if (cover.escaped || cover.cubes.empty()) {
      ++r.violations;
      continue;
    }
    ++r.informative;
    bool bad = false;

    // soundness: sampled points (corners included) are covered
    for (int t = 0; t < 24 && !bad; ++t) {
      std::vector<double> x(static_cast<std::size_t>(n));
      for (std::size_t i = 0; i < x.size(); ++i) {
        const Interval& bi = box[i];
        const double roll = uniform(rng, 0.0, 1.0);
        double v = roll < 0.3 ? bi.lo() : roll < 0.6 ? bi.hi()
                 : bi.lo() + std::floor(uniform(rng, 0.0, 1.0) * (bi.hi() - bi.lo()) / (fine / 8)) * (fine / 8);
        v = std::min(v, bi.hi());
        x[i] = reduce(v, periods[i]);
      }
      if (!covered(grid, cover.cubes, x, nullptr)) bad = true;
    }

    // minimality: every cube owns a point of the box no other cube covers
    if (!degenerate) {
      for (const auto& cube : cover.cubes) {
        const IntervalVector cell = realize(grid, cube);
        std::vector<double> w(static_cast<std::size_t>(n));
        bool meets = true;
        for (std::size_t i = 0; i < w.size(); ++i) {
          const auto [mid, len] = best_overlap(box[i].lo(), box[i].hi(), cell[i].lo(), cell[i].hi(), periods[i]);
          if (!(len > 0.0)) meets = false;
          w[i] = reduce(mid, periods[i]);
        }
        if (!meets || covered(grid, cover.cubes, w, &cube)) {
          bad = true;
          break;
        }
      }
    }

    // shifting periodic coordinates by whole periods changes nothing
    IntervalVector shifted = box;
    for (std::size_t i = 0; i < shifted.size(); ++i) {
      if (periods[i] > 0.0) shifted[i] = shifted[i] + Interval(periods[i] * uniform_int(rng, -3, 3));
    }
    if (min_cover(grid, shifted).cubes != cover.cubes) bad = true;
    if (bad) ++r.violations;
  }
  return r;
}

SuiteResult cycle_oracle(std::size_t graphs, std::uint64_t seed) {
  Rng rng(seed);
  SuiteResult r;
  for (std::size_t t = 0; t < graphs; ++t) {
    const int n = uniform_int(rng, 1, 10);
    const int max_period = uniform_int(rng, 1, 4);
    const double p = uniform(rng, 0.05, 0.5);
    DiGraph g;
    for (int i = 0; i < n; ++i) g.add_vertex(Cube{{i}});
    std::vector<std::vector<char>> adj(static_cast<std::size_t>(n), std::vector<char>(static_cast<std::size_t>(n), 0));
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        if (uniform(rng, 0.0, 1.0) < p) {
          adj[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = 1;
          g.add_edge(static_cast<VertexId>(i), static_cast<VertexId>(j));
        }
      }
    }
    g.freeze();

    std::vector<std::vector<VertexId>> expected(static_cast<std::size_t>(max_period));
    std::vector<char> taken(static_cast<std::size_t>(n), 0);
    auto power = adj;
    for (int len = 1; len <= max_period; ++len) {
      if (len > 1) {
        std::vector<std::vector<char>> next(static_cast<std::size_t>(n), std::vector<char>(static_cast<std::size_t>(n), 0));
        for (int i = 0; i < n; ++i) {
          for (int k = 0; k < n; ++k) {
            if (!power[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)]) continue;
            for (int j = 0; j < n; ++j) {
              if (adj[static_cast<std::size_t>(k)][static_cast<std::size_t>(j)]) next[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = 1;
            }
          }
        }
        power.swap(next);
      }
      for (int v = 0; v < n; ++v) {
        if (power[static_cast<std::size_t>(v)][static_cast<std::size_t>(v)] && !taken[static_cast<std::size_t>(v)]) {
          taken[static_cast<std::size_t>(v)] = 1;
          expected[static_cast<std::size_t>(len - 1)].push_back(static_cast<VertexId>(v));
        }
      }
    }
    ++r.cases;
    ++r.informative;
    if (cycle_vertex_sets(g, max_period) != expected) ++r.violations;
  }
  return r;
}

SuiteResult newton_sqrt2() {
  ResidualSystem g;
  g.dimension = 1;
  g.value = [](const IntervalVector& x) { return IntervalVector{sqr(x[0]) - Interval(2.0)}; };
  g.derivative = [](const IntervalVector& x) {
    IntervalMatrix d(1, 1);
    d(0, 0) = Interval(2.0) * x[0];
    return d;
  };
  const RigorousOrbitProof p = interval_newton(g, {1.4}, 0.1);
  SuiteResult r;
  r.cases = r.informative = 1;
  const Interval n = p.newton_image[0];
  if (!p.verdict || !Interval(1.4133, 1.4155).contains(n) || !n.contains(std::sqrt(2.0))) {
    r.violations = 1;
  }
  char buf[96];
  std::snprintf(buf, sizeof buf, "N = [%.6f, %.6f]", n.lo(), n.hi());
  r.note = buf;
  return r;
}

SuiteResult spread_linear() {
  Matrix a(2, 2);
  a << 2.0, 0.0, 0.0, 0.5;
  const AffineMap f(a);
  const GridSpec grid = GridSpec::from_real({{-1, 1}, {-1, 1}}, 2);
  DiGraph g;
  std::vector<VertexId> ids;
  for (int i = -4; i < 4; i += 2) {
    for (int j = -4; j < 4; j += 3) ids.push_back(g.add_vertex(Cube{{i, j}}));
  }
  Rng rng(5);
  for (std::size_t i = 0; i < ids.size(); ++i) {
    g.add_edge(ids[i], ids[(i + 1) % ids.size()]);
    g.add_edge(ids[i], ids[static_cast<std::size_t>(uniform_int(rng, 0, static_cast<int>(ids.size()) - 1))]);
  }
  g.freeze();
  FrameAssignment frames(g.vertex_count());
  frames[0] = CoordinateFrame::from_matrix(Matrix::Identity(2, 2), FrameOrigin::periodic_seed);
  spread_frames(g, grid, f, frames, {2, 1});

  SuiteResult r;
  double worst = 0.0;
  for (VertexId v = 0; v < g.vertex_count(); ++v) {
    for (VertexId w : g.out(v)) {
      ++r.cases;
      if (!frames[v] || !frames[w]) {
        ++r.violations;
        continue;
      }
      ++r.informative;
      const Matrix m = frames[w]->c * a * frames[v]->c.inverse();
      const double err = (m - a).cwiseAbs().maxCoeff();
      worst = std::max(worst, err);
      if (err > 1e-6) ++r.violations;
    }
  }
  char buf[64];
  std::snprintf(buf, sizeof buf, "max deviation %.2e", worst);
  r.note = buf;
  return r;
}

}  // namespace hypcert::testing
