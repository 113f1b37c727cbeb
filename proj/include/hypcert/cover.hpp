#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "hypcert/interval.hpp"

namespace hypcert {

class CoverError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Lattice range of one dimension at the grid's resolution. Bounded covers
// cells lo..hi-1, i.e. the segment [lo, hi] / 2^k. Periodic covers cells
// 0..modulus-1 with the endpoints of [0, modulus] / 2^k identified.
struct DimRange {
  enum class Kind { bounded, periodic };
  Kind kind = Kind::bounded;
  std::int64_t lo = 0;
  std::int64_t hi = 1;

  static DimRange bounded(std::int64_t lo, std::int64_t hi);
  static DimRange periodic(std::int64_t modulus);

  bool is_periodic() const { return kind == Kind::periodic; }
  std::int64_t modulus() const { return hi - lo; }
  std::int64_t cell_count() const { return hi - lo; }
  friend bool operator==(const DimRange&, const DimRange&) = default;
};

// A lattice cell; coordinates are reduced mod modulus in periodic dims.
struct Cube {
  std::vector<std::int64_t> coords;
  friend bool operator==(const Cube&, const Cube&) = default;
  friend auto operator<=>(const Cube&, const Cube&) = default;
};

struct CubeHash {
  std::size_t operator()(const Cube& c) const noexcept;
};

inline constexpr int kMaxResolution = 26;

// Uniform dyadic cover 𝒳ₖ of a box domain; cells have side 2⁻ᵏ.
class GridSpec {
 public:
  GridSpec() = default;
  GridSpec(std::vector<DimRange> dims, int resolution);

  // Grid from real-valued bounds; each bound times 2^k must be an integer.
  // A period of p makes the dim periodic on [0, p).
  struct RealDim {
    double lo = 0.0;
    double hi = 1.0;
    bool periodic = false;
  };
  static GridSpec from_real(const std::vector<RealDim>& dims, int resolution);

  std::size_t dimension() const { return dims_.size(); }
  int resolution() const { return k_; }
  const std::vector<DimRange>& dims() const { return dims_; }
  const DimRange& dim(std::size_t i) const { return dims_[i]; }
  double cell_size() const;

  // Same domain at resolution k+1.
  GridSpec refined() const;
  // Domain box (exact); for periodic dims [0, modulus]/2^k.
  IntervalVector domain() const;
  // Real period of each dim, 0 for bounded ones.
  std::vector<double> periods() const;

  bool is_valid(const Cube& c) const;
  Cube normalize(Cube c) const;  // reduce periodic coords
  std::uint64_t total_cells() const;

  // Descriptor list used in file headers, e.g. "B(-16,16),P(16)".
  std::string descriptor() const;
  static GridSpec parse(std::size_t dim, int k, const std::string& descriptor);

  friend bool operator==(const GridSpec&, const GridSpec&) = default;

 private:
  std::vector<DimRange> dims_;
  int k_ = 0;
};

// Exact dyadic box of a cell. Throws CoverError for an out-of-range cube.
IntervalVector realize(const GridSpec& grid, const Cube& c);
std::vector<double> centre(const GridSpec& grid, const Cube& c);

struct CoverResult {
  std::vector<Cube> cubes;  // sorted
  bool escaped = false;     // box leaves the domain in some bounded dim
};

// The cells every cover of the box must contain (their intersection), which
// is itself a cover: per dim, cells overlapping the box in a segment of
// positive length. A box that is flat on a grid plane has no such cell in
// that dim and takes both incident cells. Periodic dims wrap. When escaped
// is set the cube list is empty.
CoverResult min_cover(const GridSpec& grid, const IntervalVector& box);
// As min_cover, but first clips the box to the domain; returns nothing when
// the box misses the domain entirely.
std::vector<Cube> min_cover_clipped(const GridSpec& grid, const IntervalVector& box);

// Cells containing the point (several when it lies on grid planes); empty when
// outside the domain.
std::vector<Cube> cubes_containing(const GridSpec& grid, const std::vector<double>& x);

// The 2^n children of a cube at resolution k+1.
std::vector<Cube> subdivide(const GridSpec& grid, const Cube& c);

// Components under closed-cell intersection (vertex adjacency, periodic
// wrap honoured). Throws CoverError on an empty set.
bool is_connected(const GridSpec& grid, const std::vector<Cube>& cubes);
std::size_t component_count(const GridSpec& grid, const std::vector<Cube>& cubes);

// Box-list file: header "# dim=<n> k=<k> domain=<descriptor>", then one line
// of comma-separated coords per cube.
void write_box_list(std::ostream& os, const GridSpec& grid, const std::vector<Cube>& cubes);
void write_box_list(const std::string& path, const GridSpec& grid, const std::vector<Cube>& cubes);
struct BoxList {
  GridSpec grid;
  std::vector<Cube> cubes;
};
BoxList read_box_list(std::istream& is);
BoxList read_box_list(const std::string& path);

// Parses the "# dim=.. k=.. domain=.." header line.
GridSpec parse_grid_header(const std::string& line);
std::string grid_header(const GridSpec& grid);

}  // namespace hypcert
