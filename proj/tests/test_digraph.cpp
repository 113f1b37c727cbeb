#include <algorithm>
#include <filesystem>
#include <random>
#include <sstream>

#include "doctest.h"
#include "hypcert/digraph.hpp"

using namespace hypcert;

namespace {

Cube c1(std::int64_t x) { return Cube{{x}}; }

std::vector<std::vector<VertexId>> sorted_components(const DiGraph& g) {
  auto comps = scc(g);
  std::sort(comps.begin(), comps.end());
  return comps;
}

}  // namespace

TEST_CASE("out sets") {
  DiGraph loop;
  loop.add_edge(c1(0), c1(0));
  loop.freeze();
  CHECK(loop.out(c1(0)) == std::vector<Cube>{c1(0)});

  DiGraph ab;
  ab.add_edge(c1(0), c1(1));
  ab.freeze();
  CHECK(ab.out(c1(0)) == std::vector<Cube>{c1(1)});
  CHECK(ab.out(c1(1)).empty());
  CHECK_THROWS_WITH_AS(ab.out(c1(5)), "unknown vertex", GraphError);
  CHECK(ab.has_edge(0, 1));
  CHECK_FALSE(ab.has_edge(1, 0));
  CHECK_THROWS_AS(ab.add_edge(0, 7), GraphError);
}

TEST_CASE("duplicate edges collapse on freeze") {
  DiGraph g;
  g.add_edge(c1(0), c1(1));
  g.add_edge(c1(0), c1(1));
  g.add_edge(c1(0), c1(0));
  g.freeze();
  CHECK(g.edge_count() == 2);
  CHECK(g.out(0) == std::vector<VertexId>{0, 1});
}

TEST_CASE("transpose") {
  DiGraph g;
  g.add_edge(c1(0), c1(1));
  g.add_edge(c1(2), c1(2));
  g.freeze();
  const DiGraph t = g.transpose();
  CHECK(t.has_edge(1, 0));
  CHECK(t.has_edge(2, 2));
  CHECK_FALSE(t.has_edge(0, 1));
  CHECK(t.transpose() == g);
}

TEST_CASE("canonical and induced graphs") {
  DiGraph g;
  g.add_edge(c1(5), c1(2));
  g.add_edge(c1(2), c1(9));
  g.freeze();
  const DiGraph c = g.canonical();
  CHECK(c == g);
  CHECK(c.cube(0) == c1(2));
  CHECK(c.cube(2) == c1(9));
  const DiGraph sub = g.induced({0, 1});
  CHECK(sub.vertex_count() == 2);
  CHECK(sub.edge_count() == 1);
}

TEST_CASE("strongly connected components") {
  DiGraph loop;
  loop.add_edge(c1(0), c1(0));
  loop.freeze();
  CHECK(scc(loop).size() == 1);
  CHECK(is_single_scc(loop));

  DiGraph path;
  path.add_edge(c1(0), c1(1));
  path.add_edge(c1(1), c1(2));
  path.freeze();
  CHECK(scc(path).size() == 3);
  CHECK_FALSE(is_single_scc(path));

  DiGraph pend;
  pend.add_edge(c1(0), c1(1));
  pend.add_edge(c1(1), c1(0));
  pend.add_edge(c1(1), c1(2));
  pend.freeze();
  const auto comps = sorted_components(pend);
  CHECK(comps == std::vector<std::vector<VertexId>>{{0, 1}, {2}});
}

TEST_CASE("components are maximal against a reachability oracle") {
  std::mt19937_64 rng(31);
  for (int t = 0; t < 100; ++t) {
    const int n = std::uniform_int_distribution<int>(1, 12)(rng);
    DiGraph g;
    for (int i = 0; i < n; ++i) g.add_vertex(c1(i));
    std::vector<std::vector<char>> reach(n, std::vector<char>(n, 0));
    for (int i = 0; i < n; ++i) {
      reach[i][i] = 1;
      for (int j = 0; j < n; ++j) {
        if (std::uniform_real_distribution<double>(0, 1)(rng) < 0.2) {
          g.add_edge(static_cast<VertexId>(i), static_cast<VertexId>(j));
          reach[i][j] = 1;
        }
      }
    }
    g.freeze();
    for (int k = 0; k < n; ++k) {
      for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
          if (reach[i][k] && reach[k][j]) reach[i][j] = 1;
        }
      }
    }
    std::vector<int> comp_of(n, -1);
    const auto comps = scc(g);
    for (std::size_t c = 0; c < comps.size(); ++c) {
      for (VertexId v : comps[c]) comp_of[v] = static_cast<int>(c);
    }
    for (int i = 0; i < n; ++i) {
      CHECK(comp_of[i] >= 0);
      for (int j = 0; j < n; ++j) {
        CHECK((comp_of[i] == comp_of[j]) == (reach[i][j] && reach[j][i]));
      }
    }
  }
}

TEST_CASE("cycle vertex sets") {
  DiGraph loop;
  loop.add_edge(c1(0), c1(0));
  loop.freeze();
  auto sets = cycle_vertex_sets(loop, 2);
  CHECK(sets == std::vector<std::vector<VertexId>>{{0}, {}});

  DiGraph two;
  two.add_edge(c1(0), c1(1));
  two.add_edge(c1(1), c1(0));
  two.freeze();
  sets = cycle_vertex_sets(two, 3);
  CHECK(sets == std::vector<std::vector<VertexId>>{{}, {0, 1}, {}});

  // 3-cycle with a chord making a 2-cycle through vertex 0 and 1
  DiGraph g;
  g.add_edge(c1(0), c1(1));
  g.add_edge(c1(1), c1(2));
  g.add_edge(c1(2), c1(0));
  g.add_edge(c1(1), c1(0));
  g.freeze();
  sets = cycle_vertex_sets(g, 3);
  CHECK(sets == std::vector<std::vector<VertexId>>{{}, {0, 1}, {2}});
  CHECK_THROWS_AS(cycle_vertex_sets(g, 0), std::invalid_argument);
}

TEST_CASE("graph files round trip") {
  const GridSpec grid = GridSpec::from_real({{-1, 1}, {0, 1, true}}, 2);
  DiGraph g;
  g.add_edge(Cube{{-4, 0}}, Cube{{3, 3}});
  g.add_edge(Cube{{3, 3}}, Cube{{-4, 0}});
  g.add_edge(Cube{{3, 3}}, Cube{{3, 3}});
  g.freeze();
  const auto dir = std::filesystem::temp_directory_path() / "hypcert_graph_rt";
  std::filesystem::create_directories(dir);
  write_graph((dir / "v.csv").string(), (dir / "e.csv").string(), grid, g);
  const GraphFiles back = read_graph((dir / "v.csv").string(), (dir / "e.csv").string());
  CHECK(back.grid == grid);
  CHECK(back.graph == g);
  std::filesystem::remove_all(dir);
}
