#include "hypcert/digraph.hpp"

#include <algorithm>
#include <fstream>
#include <limits>
#include <sstream>

namespace hypcert {

VertexId DiGraph::add_vertex(const Cube& c) {
  auto [it, inserted] = index_.emplace(c, static_cast<VertexId>(vertices_.size()));
  if (inserted) {
    vertices_.push_back(c);
    out_.emplace_back();
  }
  return it->second;
}

void DiGraph::add_edge(VertexId from, VertexId to) {
  if (from >= vertices_.size() || to >= vertices_.size()) throw GraphError("unknown vertex");
  out_[from].push_back(to);
}

void DiGraph::add_edge(const Cube& from, const Cube& to) {
  const VertexId a = add_vertex(from);
  const VertexId b = add_vertex(to);
  add_edge(a, b);
}

std::size_t DiGraph::edge_count() const {
  std::size_t n = 0;
  for (const auto& o : out_) n += o.size();
  return n;
}

VertexId DiGraph::id(const Cube& c) const {
  auto it = index_.find(c);
  if (it == index_.end()) throw GraphError("unknown vertex");
  return it->second;
}

std::optional<VertexId> DiGraph::find(const Cube& c) const {
  auto it = index_.find(c);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

const std::vector<VertexId>& DiGraph::out(VertexId v) const {
  if (v >= vertices_.size()) throw GraphError("unknown vertex");
  return out_[v];
}

std::vector<Cube> DiGraph::out(const Cube& c) const {
  std::vector<Cube> r;
  for (VertexId w : out(id(c))) r.push_back(vertices_[w]);
  return r;
}

bool DiGraph::has_edge(VertexId from, VertexId to) const {
  const auto& o = out(from);
  return std::binary_search(o.begin(), o.end(), to);
}

std::vector<std::pair<VertexId, VertexId>> DiGraph::edges() const {
  std::vector<std::pair<VertexId, VertexId>> e;
  e.reserve(edge_count());
  for (VertexId v = 0; v < out_.size(); ++v) {
    for (VertexId w : out_[v]) e.emplace_back(v, w);
  }
  return e;
}

void DiGraph::freeze() {
  for (auto& o : out_) {
    std::sort(o.begin(), o.end());
    o.erase(std::unique(o.begin(), o.end()), o.end());
  }
}

DiGraph DiGraph::transpose() const {
  DiGraph t;
  for (const auto& c : vertices_) t.add_vertex(c);
  for (VertexId v = 0; v < out_.size(); ++v) {
    for (VertexId w : out_[v]) t.out_[w].push_back(v);
  }
  t.freeze();
  return t;
}

DiGraph DiGraph::canonical() const {
  std::vector<VertexId> order(vertices_.size());
  for (VertexId i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](VertexId a, VertexId b) { return vertices_[a] < vertices_[b]; });
  return induced(order);
}

DiGraph DiGraph::induced(const std::vector<VertexId>& keep) const {
  constexpr VertexId kNone = std::numeric_limits<VertexId>::max();
  std::vector<VertexId> remap(vertices_.size(), kNone);
  DiGraph g;
  for (VertexId v : keep) remap[v] = g.add_vertex(vertices_.at(v));
  for (VertexId v : keep) {
    for (VertexId w : out_[v]) {
      if (remap[w] != kNone) g.out_[remap[v]].push_back(remap[w]);
    }
  }
  g.freeze();
  return g;
}

bool operator==(const DiGraph& a, const DiGraph& b) {
  if (a.vertex_count() != b.vertex_count() || a.edge_count() != b.edge_count()) return false;
  for (VertexId v = 0; v < a.vertex_count(); ++v) {
    auto w = b.find(a.cube(v));
    if (!w) return false;
    std::vector<Cube> oa, ob;
    for (VertexId x : a.out(v)) oa.push_back(a.cube(x));
    for (VertexId x : b.out(*w)) ob.push_back(b.cube(x));
    std::sort(oa.begin(), oa.end());
    std::sort(ob.begin(), ob.end());
    if (oa != ob) return false;
  }
  return true;
}

std::vector<std::vector<VertexId>> scc(const DiGraph& g) {
  const std::size_t n = g.vertex_count();
  constexpr std::uint32_t kUnvisited = std::numeric_limits<std::uint32_t>::max();
  std::vector<std::uint32_t> index(n, kUnvisited), low(n, 0);
  std::vector<char> on_stack(n, 0);
  std::vector<VertexId> stack;
  std::vector<std::vector<VertexId>> components;
  std::uint32_t counter = 0;

  struct Frame {
    VertexId v;
    std::size_t next;
  };
  std::vector<Frame> call;
  for (VertexId root = 0; root < n; ++root) {
    if (index[root] != kUnvisited) continue;
    call.push_back({root, 0});
    index[root] = low[root] = counter++;
    stack.push_back(root);
    on_stack[root] = 1;
    while (!call.empty()) {
      Frame& f = call.back();
      const auto& succ = g.out(f.v);
      if (f.next < succ.size()) {
        const VertexId w = succ[f.next++];
        if (index[w] == kUnvisited) {
          index[w] = low[w] = counter++;
          stack.push_back(w);
          on_stack[w] = 1;
          call.push_back({w, 0});
        } else if (on_stack[w]) {
          low[f.v] = std::min(low[f.v], index[w]);
        }
        continue;
      }
      const VertexId v = f.v;
      call.pop_back();
      if (!call.empty()) low[call.back().v] = std::min(low[call.back().v], low[v]);
      if (low[v] == index[v]) {
        std::vector<VertexId> comp;
        VertexId w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = 0;
          comp.push_back(w);
        } while (w != v);
        std::sort(comp.begin(), comp.end());
        components.push_back(std::move(comp));
      }
    }
  }
  return components;
}

bool is_single_scc(const DiGraph& g) { return g.vertex_count() > 0 && scc(g).size() == 1; }

std::vector<std::vector<VertexId>> cycle_vertex_sets(const DiGraph& g, int max_period) {
  if (max_period < 1) throw GraphError("max_period must be >= 1");
  const std::size_t n = g.vertex_count();
  std::vector<std::vector<VertexId>> sets(static_cast<std::size_t>(max_period));
  std::vector<std::uint32_t> stamp(n, 0);
  std::uint32_t epoch = 0;
  std::vector<VertexId> frontier, next;
  for (VertexId v = 0; v < n; ++v) {
    frontier.assign(1, v);
    for (int len = 1; len <= max_period; ++len) {
      ++epoch;
      next.clear();
      bool closed = false;
      for (VertexId u : frontier) {
        for (VertexId w : g.out(u)) {
          if (stamp[w] == epoch) continue;
          stamp[w] = epoch;
          next.push_back(w);
          closed = closed || w == v;
        }
      }
      if (closed) {
        sets[static_cast<std::size_t>(len - 1)].push_back(v);
        break;
      }
      if (next.empty()) break;
      frontier.swap(next);
    }
  }
  return sets;
}

void write_vertex_table(std::ostream& os, const GridSpec& grid, const DiGraph& g) {
  os << grid_header(grid) << '\n';
  for (VertexId v = 0; v < g.vertex_count(); ++v) {
    os << v;
    for (auto c : g.cube(v).coords) os << ',' << c;
    os << '\n';
  }
}

void write_edge_list(std::ostream& os, const DiGraph& g) {
  for (auto [a, b] : g.edges()) os << a << ',' << b << '\n';
}

void write_graph(const std::string& vertex_path, const std::string& edge_path,
                 const GridSpec& grid, const DiGraph& g) {
  std::ofstream vs(vertex_path);
  if (!vs) throw std::runtime_error("cannot write " + vertex_path);
  write_vertex_table(vs, grid, g);
  std::ofstream es(edge_path);
  if (!es) throw std::runtime_error("cannot write " + edge_path);
  write_edge_list(es, g);
}

GraphFiles read_graph(const std::string& vertex_path, const std::string& edge_path) {
  std::ifstream vs(vertex_path);
  if (!vs) throw std::runtime_error("cannot read " + vertex_path);
  std::string line;
  if (!std::getline(vs, line)) throw GraphError("empty vertex table");
  GraphFiles out{parse_grid_header(line), {}};
  while (std::getline(vs, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string field;
    std::getline(ls, field, ',');
    const auto id = static_cast<VertexId>(std::stoul(field));
    Cube c;
    while (std::getline(ls, field, ',')) c.coords.push_back(std::stoll(field));
    if (!out.grid.is_valid(c)) throw GraphError("vertex cube out of range: " + line);
    if (out.graph.add_vertex(c) != id) throw GraphError("vertex ids must be dense and ordered");
  }
  std::ifstream es(edge_path);
  if (!es) throw std::runtime_error("cannot read " + edge_path);
  while (std::getline(es, line)) {
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw GraphError("bad edge line: " + line);
    out.graph.add_edge(static_cast<VertexId>(std::stoul(line.substr(0, comma))),
                       static_cast<VertexId>(std::stoul(line.substr(comma + 1))));
  }
  out.graph.freeze();
  return out;
}

}  // namespace hypcert
