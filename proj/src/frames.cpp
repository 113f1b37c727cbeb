#include "hypcert/frames.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

#include "hypcert/parallel.hpp"

namespace hypcert {

CoordinateFrame CoordinateFrame::from_matrix(Matrix c, FrameOrigin origin) {
  if (c.rows() != c.cols() || c.rows() == 0) throw DimensionError("frame must be square");
  if (!c.allFinite()) throw FrameError("frame not invertible");
  CoordinateFrame f;
  try {
    f.inv_enclosure = verified_inverse(c);
  } catch (const IntervalError&) {
    throw FrameError("frame not invertible");
  }
  f.c = std::move(c);
  f.origin = origin;
  return f;
}

CoordinateFrame CoordinateFrame::from_frame_vectors(const Matrix& f, FrameOrigin origin) {
  Eigen::FullPivLU<Matrix> lu(f);
  if (!lu.isInvertible()) throw FrameError("frame not invertible");
  return from_matrix(lu.inverse(), origin);
}

namespace {

// Unit column with its largest-magnitude entry positive.
Vector canonical_direction(Vector v) {
  const double n = v.norm();
  if (!(n > 0.0)) throw FrameError("ill-conditioned frame");
  v /= n;
  Eigen::Index k = 0;
  v.cwiseAbs().maxCoeff(&k);
  if (v(k) < 0.0) v = -v;
  return v;
}

}  // namespace

Matrix eigen_basis(const Matrix& a, double max_condition) {
  if (a.rows() != a.cols() || a.rows() == 0) throw DimensionError("eigen_basis needs a square matrix");
  if (!a.allFinite()) throw FrameError("ill-conditioned frame");
  Eigen::EigenSolver<Matrix> es(a);
  if (es.info() != Eigen::Success) throw FrameError("ill-conditioned frame");
  const auto& values = es.eigenvalues();
  const auto& vectors = es.eigenvectors();
  const Eigen::Index n = a.rows();

  struct Group {
    double modulus;
    std::vector<Vector> columns;
  };
  std::vector<Group> groups;
  for (Eigen::Index i = 0; i < n; ++i) {
    const std::complex<double> lambda = values(i);
    if (lambda.imag() == 0.0) {
      groups.push_back({std::abs(lambda), {canonical_direction(vectors.col(i).real())}});
      continue;
    }
    // Conjugate pairs are adjacent; take the member with positive imaginary part.
    const Eigen::Index j = lambda.imag() > 0.0 ? i : i + 1;
    if (j >= n) throw FrameError("ill-conditioned frame");
    groups.push_back({std::abs(lambda),
                      {canonical_direction(vectors.col(j).real()),
                       canonical_direction(vectors.col(j).imag())}});
    ++i;
  }
  std::stable_sort(groups.begin(), groups.end(),
                   [](const Group& x, const Group& y) { return x.modulus > y.modulus; });

  Matrix m(n, n);
  Eigen::Index col = 0;
  for (const auto& grp : groups) {
    for (const auto& v : grp.columns) m.col(col++) = v;
  }
  const Eigen::JacobiSVD<Matrix> svd(m);
  const auto& sv = svd.singularValues();
  const double smallest = sv(n - 1);
  if (!(smallest > 0.0) || sv(0) / smallest > max_condition) {
    throw FrameError("ill-conditioned frame");
  }
  return m;
}

CoordinateFrame eigen_frame_from_matrix(const Matrix& a) {
  return CoordinateFrame::from_frame_vectors(eigen_basis(a), FrameOrigin::periodic_seed);
}

CoordinateFrame eigen_frame(const MapSystem& map, const Vector& y, int period) {
  if (period < 1) throw std::invalid_argument("period must be >= 1");
  return eigen_frame_from_matrix(iterate_jac(map, y, period));
}

SeedStats seed_frames(FrameAssignment& frames, const DiGraph& g, const GridSpec& grid,
                      const MapSystem& map,
                      const std::vector<std::vector<PeriodicCandidate>>& points) {
  if (frames.size() != g.vertex_count()) throw DimensionError("frame assignment size mismatch");
  SeedStats stats;
  for (const auto& level : points) {
    for (const auto& p : level) {
      std::vector<VertexId> targets;
      bool inside = false;
      for (const auto& c : cubes_containing(grid, p.point)) {
        if (auto v = g.find(c)) {
          inside = true;
          if (!frames[*v]) targets.push_back(*v);
        }
      }
      if (!inside) {
        ++stats.outside_support;
        continue;
      }
      if (targets.empty()) continue;
      try {
        const CoordinateFrame f = eigen_frame(map, to_vector(p.point), p.period);
        for (VertexId v : targets) {
          frames[v] = f;
          ++stats.seeded;
        }
      } catch (const FrameError&) {
        ++stats.failed;
      }
    }
  }
  return stats;
}

Matrix gram_schmidt(const Matrix& m) {
  Matrix q = m;
  for (Eigen::Index j = 0; j < q.cols(); ++j) {
    const double original = m.col(j).norm();
    for (Eigen::Index i = 0; i < j; ++i) q.col(j) -= q.col(i).dot(q.col(j)) * q.col(i);
    const double n = q.col(j).norm();
    if (!(n > 1e-13 * original) || !std::isfinite(n)) {
      throw FrameError("frame columns are dependent");
    }
    q.col(j) /= n;
  }
  return q;
}

Matrix normalize_columns(const Matrix& m) {
  Matrix r = m;
  for (Eigen::Index j = 0; j < r.cols(); ++j) {
    const double n = r.col(j).norm();
    if (!(n > 0.0) || !std::isfinite(n)) throw FrameError("frame columns are dependent");
    r.col(j) /= n;
  }
  return r;
}

Matrix propagate_frame(const MapSystem& map, const Vector& centre, const Matrix& frame_vectors,
                       int k, bool* fallback) {
  if (k < 1) throw std::invalid_argument("k must be >= 1");
  if (fallback) *fallback = false;
  std::vector<Matrix> stack;
  stack.reserve(static_cast<std::size_t>(k));
  Vector u = centre;
  Matrix c = frame_vectors;
  for (int i = 0; i < k; ++i) {
    stack.push_back(map.jac(u));
    c = stack.back() * c;
    u = map.eval(u);
  }
  const Matrix ortho = gram_schmidt(c);
  c = ortho;
  for (int j = k - 1; j >= 1; --j) {
    Eigen::FullPivLU<Matrix> lu(stack[static_cast<std::size_t>(j)]);
    if (!lu.isInvertible()) {
      if (fallback) *fallback = true;
      return ortho;
    }
    c = lu.solve(c);
  }
  return normalize_columns(c);
}

SpreadStats spread_frames(const DiGraph& g, const GridSpec& grid, const MapSystem& map,
                          FrameAssignment& frames, const SpreadOptions& options) {
  const std::size_t n = g.vertex_count();
  if (frames.size() != n) throw DimensionError("frame assignment size mismatch");
  if (options.k < 2) throw std::invalid_argument("spread k must be >= 2");
  if (!is_single_scc(g)) throw FrameError("graph is not a single strongly connected component");

  std::vector<VertexId> frontier;
  for (VertexId v = 0; v < n; ++v) {
    if (frames[v]) frontier.push_back(v);
  }
  if (frontier.empty()) throw FrameError("no seeded frames to spread");

  SpreadStats stats;
  while (!frontier.empty()) {
    ++stats.passes;
    std::vector<std::optional<CoordinateFrame>> images(frontier.size());
    std::vector<char> fell_back(frontier.size(), 0);
    parallel_for(frontier.size(), options.threads, [&](std::size_t i) {
      const VertexId v = frontier[i];
      const auto& outs = g.out(v);
      if (std::none_of(outs.begin(), outs.end(), [&](VertexId w) { return !frames[w]; })) return;
      Eigen::FullPivLU<Matrix> lu(frames[v]->c);
      const Matrix source = normalize_columns(lu.inverse());
      bool fb = false;
      Matrix vectors;
      try {
        vectors = propagate_frame(map, to_vector(centre(grid, g.cube(v))), source, options.k, &fb);
      } catch (const FrameError&) {
        fb = true;
        vectors = source;
      }
      try {
        images[i] = CoordinateFrame::from_frame_vectors(vectors, FrameOrigin::spread);
      } catch (const FrameError&) {
        fb = true;
        images[i] = CoordinateFrame::from_frame_vectors(source, FrameOrigin::spread);
      }
      fell_back[i] = fb ? 1 : 0;
    });

    std::vector<VertexId> next;
    for (std::size_t i = 0; i < frontier.size(); ++i) {
      if (!images[i]) continue;
      bool used = false;
      for (VertexId w : g.out(frontier[i])) {
        if (frames[w]) continue;
        frames[w] = *images[i];
        next.push_back(w);
        used = true;
        ++stats.assigned;
      }
      if (used && fell_back[i]) ++stats.fallbacks;
    }
    frontier.swap(next);
  }
  return stats;
}

}  // namespace hypcert
