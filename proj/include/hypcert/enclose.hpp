#pragma once

#include <optional>
#include <stdexcept>
#include <vector>

#include "hypcert/cover.hpp"
#include "hypcert/digraph.hpp"
#include "hypcert/dynsys.hpp"

namespace hypcert {

class EnclosureError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Strategy { attractor, outer };

struct EnclosureResult {
  DiGraph graph;  // canonical vertex order
  GridSpec grid;
  Strategy strategy = Strategy::attractor;
  bool escaped = false;
  std::optional<Cube> escaping_cube;  // set when escaped
};

struct EncloseOptions {
  unsigned threads = 1;
};

// Reduces periodic coordinates of x into [0, period).
void reduce_periodic(Vector& x, const std::vector<double>& periods);

// Cube holding the transient-th float iterate of start. Throws
// EnclosureError when the trajectory leaves the domain.
Cube find_seed(const GridSpec& grid, const MapSystem& map, const std::vector<double>& start,
               int transient);

// Forward-trajectory enclosure from a seed cube: the frontier starts at the
// seed; every frontier cube gets edges to the cover of its rigorous image and
// newly seen cubes form the next frontier. Stops when no new cubes appear, or
// reports escape when an image leaves a bounded dimension of the domain.
EnclosureResult enclose_attractor(const Cube& seed, const GridSpec& grid, const MapSystem& map,
                                  const EncloseOptions& options = {});

// Outer enclosure of the maximal invariant set in supp(initial): repeatedly
// drops cubes without an in- or out-edge inside the current set, then
// bisects the survivors, up to max_refine times. Throws EnclosureError("no
// invariant set detected in domain") when nothing survives.
EnclosureResult enclose_invariant_outer(const GridSpec& grid, const MapSystem& map,
                                        const std::vector<Cube>& initial, int max_refine,
                                        const EncloseOptions& options = {});

// Every cube of the grid.
std::vector<Cube> full_cover(const GridSpec& grid);

// Number of vertices whose rigorous image cover is not contained in the
// vertex set (attractor strategy) or differs from the vertex's out-set.
struct InvarianceAudit {
  std::size_t cover_not_in_vertices = 0;
  std::size_t out_set_mismatch = 0;
  bool ok() const { return cover_not_in_vertices == 0 && out_set_mismatch == 0; }
};
InvarianceAudit audit_invariance(const EnclosureResult& result, const MapSystem& map);

}  // namespace hypcert
