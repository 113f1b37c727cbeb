#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "hypcert/cover.hpp"

namespace hypcert {

using VertexId = std::uint32_t;

class GraphError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Directed graph over cubes; vertices are interned to dense ids in insertion
// order. Encodes a combinatorial map through its out-sets.
class DiGraph {
 public:
  DiGraph() = default;

  // Returns the id of c, inserting it if new.
  VertexId add_vertex(const Cube& c);
  void add_edge(VertexId from, VertexId to);
  void add_edge(const Cube& from, const Cube& to);

  std::size_t vertex_count() const { return vertices_.size(); }
  std::size_t edge_count() const;
  const std::vector<Cube>& vertices() const { return vertices_; }
  const Cube& cube(VertexId v) const { return vertices_.at(v); }
  bool contains(const Cube& c) const { return index_.count(c) != 0; }
  // Throws GraphError("unknown vertex").
  VertexId id(const Cube& c) const;
  std::optional<VertexId> find(const Cube& c) const;

  // Sorted, duplicate-free out-set.
  const std::vector<VertexId>& out(VertexId v) const;
  std::vector<Cube> out(const Cube& c) const;
  bool has_edge(VertexId from, VertexId to) const;
  std::vector<std::pair<VertexId, VertexId>> edges() const;

  // Sorts and dedupes adjacency lists; queries assume a frozen graph.
  void freeze();

  DiGraph transpose() const;
  // Same vertex and edge sets with ids reassigned in lexicographic cube order.
  DiGraph canonical() const;
  // Subgraph induced by the kept vertices (ids reassigned in kept order).
  DiGraph induced(const std::vector<VertexId>& keep) const;

  friend bool operator==(const DiGraph& a, const DiGraph& b);

 private:
  std::vector<Cube> vertices_;
  std::unordered_map<Cube, VertexId, CubeHash> index_;
  std::vector<std::vector<VertexId>> out_;
};

// Tarjan's strongly connected components; each component sorted, components
// in order of discovery completion (reverse topological).
std::vector<std::vector<VertexId>> scc(const DiGraph& g);
bool is_single_scc(const DiGraph& g);

// sets[i-1] = vertices on a closed walk of length exactly i and on no closed
// walk of any shorter length, for i = 1..max_period. Each set sorted.
std::vector<std::vector<VertexId>> cycle_vertex_sets(const DiGraph& g, int max_period);

// Edge list "src_id,dst_id" plus a vertex table "id,c0,c1,..." that carries
// the grid header of the box-list format.
void write_graph(const std::string& vertex_path, const std::string& edge_path,
                 const GridSpec& grid, const DiGraph& g);
struct GraphFiles {
  GridSpec grid;
  DiGraph graph;
};
GraphFiles read_graph(const std::string& vertex_path, const std::string& edge_path);
void write_vertex_table(std::ostream& os, const GridSpec& grid, const DiGraph& g);
void write_edge_list(std::ostream& os, const DiGraph& g);

}  // namespace hypcert
