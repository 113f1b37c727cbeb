#include "hypcert/enclose.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

#include "hypcert/parallel.hpp"

namespace hypcert {

void reduce_periodic(Vector& x, const std::vector<double>& periods) {
  for (std::size_t i = 0; i < periods.size(); ++i) {
    if (periods[i] <= 0.0) continue;
    const auto idx = static_cast<Eigen::Index>(i);
    double r = std::fmod(x(idx), periods[i]);
    if (r < 0.0) r += periods[i];
    if (r >= periods[i]) r = 0.0;
    x(idx) = r;
  }
}

Cube find_seed(const GridSpec& grid, const MapSystem& map, const std::vector<double>& start,
               int transient) {
  if (start.size() != grid.dimension() || map.dimension() != grid.dimension()) {
    throw DimensionError("seed point dimension mismatch");
  }
  const auto periods = grid.periods();
  const IntervalVector domain = grid.domain();
  auto inside = [&](const Vector& x) {
    for (std::size_t i = 0; i < grid.dimension(); ++i) {
      if (periods[i] > 0.0) continue;
      const double v = x(static_cast<Eigen::Index>(i));
      if (!std::isfinite(v) || !domain[i].contains(v)) return false;
    }
    return true;
  };
  Vector x = to_vector(start);
  reduce_periodic(x, periods);
  if (!inside(x)) throw EnclosureError("seed escaped; choose different start or domain");
  for (int i = 0; i < transient; ++i) {
    x = map.eval(x);
    reduce_periodic(x, periods);
    if (!inside(x)) throw EnclosureError("seed escaped; choose different start or domain");
  }
  const auto cubes = cubes_containing(grid, to_std(x));
  if (cubes.empty()) throw EnclosureError("seed escaped; choose different start or domain");
  return cubes.front();
}

EnclosureResult enclose_attractor(const Cube& seed, const GridSpec& grid, const MapSystem& map,
                                  const EncloseOptions& options) {
  if (!grid.is_valid(seed)) throw CoverError("seed cube out of range");
  if (map.dimension() != grid.dimension()) throw DimensionError("map/grid dimension mismatch");

  EnclosureResult result;
  result.grid = grid;
  result.strategy = Strategy::attractor;

  DiGraph g;
  std::unordered_set<Cube, CubeHash> seen{seed};
  std::vector<Cube> frontier{seed};
  std::vector<CoverResult> images;
  while (!frontier.empty()) {
    images.assign(frontier.size(), {});
    parallel_for(frontier.size(), options.threads, [&](std::size_t i) {
      images[i] = min_cover(grid, map.eval_i(realize(grid, frontier[i])));
    });
    std::vector<Cube> next;
    for (std::size_t i = 0; i < frontier.size(); ++i) {
      if (images[i].escaped) {
        result.escaped = true;
        result.escaping_cube = frontier[i];
        g.freeze();
        result.graph = g.canonical();
        return result;
      }
      const VertexId u = g.add_vertex(frontier[i]);
      for (const Cube& f : images[i].cubes) {
        g.add_edge(u, g.add_vertex(f));
        if (seen.insert(f).second) next.push_back(f);
      }
    }
    std::sort(next.begin(), next.end());
    frontier.swap(next);
  }
  g.freeze();
  result.graph = g.canonical();
  return result;
}

std::vector<Cube> full_cover(const GridSpec& grid) {
  return min_cover_clipped(grid, grid.domain());
}

namespace {

// Graph on `cubes` (sorted, unique) with edges into the set only.
DiGraph restricted_graph(const GridSpec& grid, const MapSystem& map,
                         const std::vector<Cube>& cubes, unsigned threads) {
  DiGraph g;
  for (const auto& c : cubes) g.add_vertex(c);
  std::vector<std::vector<Cube>> images(cubes.size());
  parallel_for(cubes.size(), threads, [&](std::size_t i) {
    images[i] = min_cover_clipped(grid, map.eval_i(realize(grid, cubes[i])));
  });
  for (std::size_t i = 0; i < cubes.size(); ++i) {
    for (const auto& f : images[i]) {
      if (auto w = g.find(f)) g.add_edge(static_cast<VertexId>(i), *w);
    }
  }
  g.freeze();
  return g;
}

// Vertices that survive iterated removal of sources and sinks.
std::vector<VertexId> invariant_core(const DiGraph& g) {
  const std::size_t n = g.vertex_count();
  const DiGraph t = g.transpose();
  std::vector<std::size_t> in_deg(n), out_deg(n);
  std::vector<char> removed(n, 0);
  std::vector<VertexId> queue;
  for (VertexId v = 0; v < n; ++v) {
    out_deg[v] = g.out(v).size();
    in_deg[v] = t.out(v).size();
    if (out_deg[v] == 0 || in_deg[v] == 0) {
      removed[v] = 1;
      queue.push_back(v);
    }
  }
  while (!queue.empty()) {
    const VertexId v = queue.back();
    queue.pop_back();
    for (VertexId w : g.out(v)) {
      if (!removed[w] && --in_deg[w] == 0) {
        removed[w] = 1;
        queue.push_back(w);
      }
    }
    for (VertexId w : t.out(v)) {
      if (!removed[w] && --out_deg[w] == 0) {
        removed[w] = 1;
        queue.push_back(w);
      }
    }
  }
  std::vector<VertexId> keep;
  for (VertexId v = 0; v < n; ++v) {
    if (!removed[v]) keep.push_back(v);
  }
  return keep;
}

}  // namespace

EnclosureResult enclose_invariant_outer(const GridSpec& grid, const MapSystem& map,
                                        const std::vector<Cube>& initial, int max_refine,
                                        const EncloseOptions& options) {
  if (initial.empty()) throw EnclosureError("empty initial cover");
  if (max_refine < 0) throw std::invalid_argument("max_refine must be >= 0");
  if (map.dimension() != grid.dimension()) throw DimensionError("map/grid dimension mismatch");

  GridSpec level = grid;
  std::vector<Cube> cubes = initial;
  for (const auto& c : cubes) {
    if (!grid.is_valid(c)) throw CoverError("initial cube out of range");
  }
  std::sort(cubes.begin(), cubes.end());
  cubes.erase(std::unique(cubes.begin(), cubes.end()), cubes.end());

  for (int step = 0;; ++step) {
    DiGraph g = restricted_graph(level, map, cubes, options.threads);
    const std::vector<VertexId> keep = invariant_core(g);
    if (keep.empty()) throw EnclosureError("no invariant set detected in domain");
    if (step == max_refine) {
      EnclosureResult result;
      result.grid = level;
      result.strategy = Strategy::outer;
      result.graph = g.induced(keep).canonical();
      return result;
    }
    std::vector<Cube> finer;
    finer.reserve(keep.size() << level.dimension());
    for (VertexId v : keep) {
      for (auto& child : subdivide(level, g.cube(v))) finer.push_back(std::move(child));
    }
    level = level.refined();
    std::sort(finer.begin(), finer.end());
    cubes.swap(finer);
  }
}

InvarianceAudit audit_invariance(const EnclosureResult& result, const MapSystem& map) {
  InvarianceAudit audit;
  const DiGraph& g = result.graph;
  for (VertexId v = 0; v < g.vertex_count(); ++v) {
    const IntervalVector image = map.eval_i(realize(result.grid, g.cube(v)));
    std::vector<Cube> cover;
    if (result.strategy == Strategy::attractor) {
      const CoverResult c = min_cover(result.grid, image);
      if (c.escaped) {
        ++audit.cover_not_in_vertices;
        continue;
      }
      cover = c.cubes;
      for (const auto& f : cover) {
        if (!g.contains(f)) {
          ++audit.cover_not_in_vertices;
          break;
        }
      }
    } else {
      for (auto& f : min_cover_clipped(result.grid, image)) {
        if (g.contains(f)) cover.push_back(std::move(f));
      }
    }
    std::vector<Cube> outs = g.out(g.cube(v));
    std::sort(outs.begin(), outs.end());
    std::sort(cover.begin(), cover.end());
    if (outs != cover) ++audit.out_set_mismatch;
  }
  return audit;
}

}  // namespace hypcert
