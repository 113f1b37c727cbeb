#include "hypcert/cones.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "hypcert/parallel.hpp"

namespace hypcert {

using namespace rounding;

QuadraticForm::QuadraticForm(std::size_t u, std::size_t s) : u_(u), s_(s) {
  if (u + s == 0) throw std::invalid_argument("quadratic form needs positive dimension");
}

Matrix QuadraticForm::matrix() const {
  Matrix q = Matrix::Zero(static_cast<Eigen::Index>(dimension()),
                          static_cast<Eigen::Index>(dimension()));
  for (std::size_t i = 0; i < dimension(); ++i) q(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = sign(i);
  return q;
}

double QuadraticForm::operator()(const Vector& v) const {
  if (static_cast<std::size_t>(v.size()) != dimension()) throw DimensionError("quadratic form dimension mismatch");
  double acc = 0.0;
  for (std::size_t i = 0; i < dimension(); ++i) {
    const double x = v(static_cast<Eigen::Index>(i));
    acc += sign(i) * x * x;
  }
  return acc;
}

IntervalMatrix edge_matrix(const CoordinateFrame& from, const CoordinateFrame& to,
                           const IntervalMatrix& jacobian) {
  return mat_mul(mat_mul(to_interval(to.c), jacobian), from.inv_enclosure);
}

IntervalMatrix cone_matrix(const IntervalMatrix& m, const QuadraticForm& q, double lambda) {
  const std::size_t n = q.dimension();
  if (m.rows() != n || m.cols() != n) throw DimensionError("cone matrix dimension mismatch");
  IntervalMatrix a(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      Interval acc(0.0);
      for (std::size_t k = 0; k < n; ++k) {
        const Interval p = m(k, i) * m(k, j);
        acc += q.sign(k) > 0.0 ? p : -p;
      }
      if (i == j) acc -= Interval(q.sign(i)) * Interval(lambda);
      a(i, j) = acc;
      a(j, i) = acc;
    }
  }
  return a;
}

namespace {

void require_frames(const DiGraph& g, const FrameAssignment& frames, const QuadraticForm& q,
                    const MapSystem& map) {
  if (frames.size() != g.vertex_count()) throw DimensionError("frame assignment size mismatch");
  if (q.dimension() != map.dimension()) throw DimensionError("quadratic form dimension mismatch");
  for (VertexId v = 0; v < g.vertex_count(); ++v) {
    if (!frames[v]) throw ConeError("vertex " + std::to_string(v) + " has no frame");
  }
}

// Edge matrices grouped by source vertex, in out() order.
std::vector<std::vector<IntervalMatrix>> all_edge_matrices(const DiGraph& g,
                                                           const GridSpec& grid,
                                                           const FrameAssignment& frames,
                                                           const MapSystem& map,
                                                           unsigned threads) {
  std::vector<std::vector<IntervalMatrix>> out(g.vertex_count());
  parallel_for(g.vertex_count(), threads, [&](std::size_t i) {
    const auto v = static_cast<VertexId>(i);
    const IntervalMatrix d = map.jac_i(realize(grid, g.cube(v)));
    for (VertexId w : g.out(v)) out[i].push_back(edge_matrix(*frames[v], *frames[w], d));
  });
  return out;
}

bool all_verified(const std::vector<IntervalMatrix>& edges, const QuadraticForm& q,
                  double lambda, double shift, unsigned threads) {
  std::vector<char> ok(edges.size(), 0);
  parallel_for(edges.size(), threads, [&](std::size_t i) {
    IntervalMatrix a = cone_matrix(edges[i], q, lambda);
    for (std::size_t j = 0; j < a.rows(); ++j) a(j, j) -= Interval(shift);
    ok[i] = is_positive_definite(a) ? 1 : 0;
  });
  return std::all_of(ok.begin(), ok.end(), [](char c) { return c != 0; });
}

double min_pivot(const std::vector<IntervalMatrix>& edges, const QuadraticForm& q, double lambda) {
  double m = std::numeric_limits<double>::infinity();
  for (const auto& e : edges) m = std::min(m, check_positive_definite(cone_matrix(e, q, lambda)).min_pivot);
  return m;
}

}  // namespace

ConeReport verify_cone_conditions(const DiGraph& g, const GridSpec& grid,
                                  const FrameAssignment& frames, const QuadraticForm& q,
                                  const MapSystem& map, unsigned threads) {
  require_frames(g, frames, q, map);
  const std::size_t n = g.vertex_count();
  std::vector<std::vector<VertexId>> failed(n);
  std::vector<double> margin(n, std::numeric_limits<double>::infinity());
  parallel_for(n, threads, [&](std::size_t i) {
    const auto v = static_cast<VertexId>(i);
    const IntervalMatrix d = map.jac_i(realize(grid, g.cube(v)));
    for (VertexId w : g.out(v)) {
      const auto r = check_positive_definite(cone_matrix(edge_matrix(*frames[v], *frames[w], d), q));
      if (r.verified) {
        margin[i] = std::min(margin[i], r.min_pivot);
      } else {
        failed[i].push_back(w);
      }
    }
  });

  ConeReport report;
  report.vertices_checked = n;
  report.edges_checked = g.edge_count();
  double m = std::numeric_limits<double>::infinity();
  for (VertexId v = 0; v < n; ++v) {
    m = std::min(m, margin[v]);
    if (failed[v].empty()) continue;
    report.unverified.push_back(v);
    for (VertexId w : failed[v]) report.failed_edges.emplace_back(v, w);
  }
  report.min_margin = std::isfinite(m) ? m : 0.0;
  return report;
}

CertifiedRates certify_rates(const std::vector<IntervalMatrix>& edges, const QuadraticForm& q,
                             double d1, double d2, const RateOptions& options) {
  if (edges.empty()) throw ConeError("no edges to certify");
  if (!(options.lambda_max > 1.0) || !(options.bisect_tol > 0.0)) {
    throw std::invalid_argument("invalid bisection parameters");
  }
  const unsigned threads = options.threads;
  double lo = 1.0;
  double hi = options.lambda_max;
  if (all_verified(edges, q, hi, 0.0, threads)) {
    lo = hi;
  } else {
    while (hi - lo > options.bisect_tol) {
      const double mid = 0.5 * (lo + hi);
      if (all_verified(edges, q, mid, 0.0, threads)) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
  }
  if (!(lo > 1.0)) throw ConeError("no expansion rate above 1 verifiable");

  CertifiedRates rates;
  rates.lambda_bar = lo;
  rates.lambda = sqrt_down(lo);
  rates.d1 = d1;
  rates.d2 = d2;
  rates.r = div_down(1.0, mul_up(d1, d1));

  double l = min_pivot(edges, q, lo);
  int halvings = 0;
  while (!(l > 0.0 && all_verified(edges, q, lo, l, threads))) {
    if (++halvings > 200 || !(l > 0.0)) throw ConeError("no uniform positive bound verifiable");
    l *= 0.5;
  }
  rates.l = l;
  const Interval num = sqrt(Interval(rates.r) * Interval(l));
  const Interval den = sqrt(Interval(lo)) * Interval(d2);
  rates.c = (num / den).lo();
  return rates;
}

CertifiedRates certify_rates(const DiGraph& g, const GridSpec& grid,
                             const FrameAssignment& frames, const QuadraticForm& q,
                             const MapSystem& map, const RateOptions& options) {
  require_frames(g, frames, q, map);
  auto grouped = all_edge_matrices(g, grid, frames, map, options.threads);
  std::vector<IntervalMatrix> edges;
  edges.reserve(g.edge_count());
  for (auto& list : grouped) {
    for (auto& m : list) edges.push_back(std::move(m));
  }
  double d1 = 0.0;
  double d2 = 0.0;
  for (const auto& f : frames) {
    d1 = std::max(d1, norm_upper(f->c));
    d2 = std::max(d2, norm_upper(f->inv_enclosure));
  }
  return certify_rates(edges, q, d1, d2, options);
}

}  // namespace hypcert
