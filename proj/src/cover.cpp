#include "hypcert/cover.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <regex>
#include <sstream>
#include <unordered_map>

namespace hypcert {

DimRange DimRange::bounded(std::int64_t lo, std::int64_t hi) {
  if (!(lo < hi)) throw CoverError("bounded dimension needs lo < hi");
  return {Kind::bounded, lo, hi};
}

DimRange DimRange::periodic(std::int64_t modulus) {
  if (modulus < 1) throw CoverError("periodic dimension needs modulus >= 1");
  return {Kind::periodic, 0, modulus};
}

std::size_t CubeHash::operator()(const Cube& c) const noexcept {
  std::size_t h = 0x9e3779b97f4a7c15ULL;
  for (auto x : c.coords) {
    h ^= std::hash<std::int64_t>{}(x) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  }
  return h;
}

namespace {

constexpr std::int64_t kMaxCoord = std::int64_t{1} << 25;

std::int64_t floor_mod(std::int64_t a, std::int64_t m) {
  const std::int64_t r = a % m;
  return r < 0 ? r + m : r;
}

}  // namespace

GridSpec::GridSpec(std::vector<DimRange> dims, int resolution)
    : dims_(std::move(dims)), k_(resolution) {
  if (dims_.empty()) throw CoverError("grid needs at least one dimension");
  if (k_ < 0 || k_ > kMaxResolution) throw CoverError("resolution out of range [0, 26]");
  for (const auto& d : dims_) {
    if (!(d.lo < d.hi)) throw CoverError("dimension range needs lo < hi");
    if (d.is_periodic() && d.lo != 0) throw CoverError("periodic range must start at 0");
    if (std::llabs(d.lo) > kMaxCoord || std::llabs(d.hi) > kMaxCoord) {
      throw CoverError("lattice coordinates exceed 2^25");
    }
  }
}

GridSpec GridSpec::from_real(const std::vector<RealDim>& dims, int resolution) {
  std::vector<DimRange> out;
  for (const auto& d : dims) {
    const double lo = std::ldexp(d.lo, resolution);
    const double hi = std::ldexp(d.hi, resolution);
    if (lo != std::floor(lo) || hi != std::floor(hi)) {
      throw CoverError("domain bound is not a multiple of the cell size");
    }
    if (d.periodic) {
      if (d.lo != 0.0) throw CoverError("periodic dimension must start at 0");
      out.push_back(DimRange::periodic(static_cast<std::int64_t>(hi)));
    } else {
      out.push_back(DimRange::bounded(static_cast<std::int64_t>(lo), static_cast<std::int64_t>(hi)));
    }
  }
  return {std::move(out), resolution};
}

double GridSpec::cell_size() const { return std::ldexp(1.0, -k_); }

GridSpec GridSpec::refined() const {
  std::vector<DimRange> d = dims_;
  for (auto& r : d) {
    r.lo *= 2;
    r.hi *= 2;
  }
  return {std::move(d), k_ + 1};
}

IntervalVector GridSpec::domain() const {
  IntervalVector box(dims_.size());
  for (std::size_t i = 0; i < dims_.size(); ++i) {
    box[i] = Interval(std::ldexp(static_cast<double>(dims_[i].lo), -k_),
                      std::ldexp(static_cast<double>(dims_[i].hi), -k_));
  }
  return box;
}

std::vector<double> GridSpec::periods() const {
  std::vector<double> p(dims_.size(), 0.0);
  for (std::size_t i = 0; i < dims_.size(); ++i) {
    if (dims_[i].is_periodic()) p[i] = std::ldexp(static_cast<double>(dims_[i].modulus()), -k_);
  }
  return p;
}

bool GridSpec::is_valid(const Cube& c) const {
  if (c.coords.size() != dims_.size()) return false;
  for (std::size_t i = 0; i < dims_.size(); ++i) {
    if (c.coords[i] < dims_[i].lo || c.coords[i] >= dims_[i].hi) return false;
  }
  return true;
}

Cube GridSpec::normalize(Cube c) const {
  if (c.coords.size() != dims_.size()) throw CoverError("cube dimension mismatch");
  for (std::size_t i = 0; i < dims_.size(); ++i) {
    if (dims_[i].is_periodic()) c.coords[i] = floor_mod(c.coords[i], dims_[i].modulus());
  }
  return c;
}

std::uint64_t GridSpec::total_cells() const {
  std::uint64_t n = 1;
  for (const auto& d : dims_) n *= static_cast<std::uint64_t>(d.cell_count());
  return n;
}

std::string GridSpec::descriptor() const {
  std::ostringstream os;
  for (std::size_t i = 0; i < dims_.size(); ++i) {
    if (i) os << ',';
    if (dims_[i].is_periodic()) {
      os << "P(" << dims_[i].modulus() << ')';
    } else {
      os << "B(" << dims_[i].lo << ',' << dims_[i].hi << ')';
    }
  }
  return os.str();
}

GridSpec GridSpec::parse(std::size_t dim, int k, const std::string& descriptor) {
  static const std::regex item(R"(([BP])\((-?\d+)(?:,(-?\d+))?\))");
  std::vector<DimRange> dims;
  std::smatch m;
  std::size_t pos = 0;
  while (pos < descriptor.size()) {
    if (descriptor[pos] == ',') {
      ++pos;
      continue;
    }
    auto begin = descriptor.cbegin() + static_cast<std::ptrdiff_t>(pos);
    if (!std::regex_search(begin, descriptor.cend(), m, item,
                           std::regex_constants::match_continuous)) {
      throw CoverError("bad domain descriptor: " + descriptor);
    }
    if (m[1] == "P") {
      if (m[3].matched) throw CoverError("bad periodic descriptor: " + descriptor);
      dims.push_back(DimRange::periodic(std::stoll(m[2])));
    } else {
      if (!m[3].matched) throw CoverError("bad bounded descriptor: " + descriptor);
      dims.push_back(DimRange::bounded(std::stoll(m[2]), std::stoll(m[3])));
    }
    pos += static_cast<std::size_t>(m.length(0));
  }
  if (dims.size() != dim) throw CoverError("descriptor dimension mismatch");
  return {std::move(dims), k};
}

IntervalVector realize(const GridSpec& grid, const Cube& c) {
  if (!grid.is_valid(c)) throw CoverError("cube out of range");
  const int k = grid.resolution();
  IntervalVector box(c.coords.size());
  for (std::size_t i = 0; i < c.coords.size(); ++i) {
    const auto a = static_cast<double>(c.coords[i]);
    box[i] = Interval(std::ldexp(a, -k), std::ldexp(a + 1.0, -k));
  }
  return box;
}

std::vector<double> centre(const GridSpec& grid, const Cube& c) {
  if (!grid.is_valid(c)) throw CoverError("cube out of range");
  std::vector<double> x(c.coords.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    x[i] = std::ldexp(static_cast<double>(c.coords[i]) + 0.5, -grid.resolution());
  }
  return x;
}

namespace {

// Cells [c, c+1] met by [lo, hi] (lattice units) that every cover needs:
// floor(lo) .. ceil(hi)-1. A degenerate span on a grid plane has no
// canonical cell and takes both neighbours.
std::pair<std::int64_t, std::int64_t> index_span(double lo, double hi) {
  auto a = static_cast<std::int64_t>(std::floor(lo));
  auto b = static_cast<std::int64_t>(std::ceil(hi)) - 1;
  if (b < a) {
    a = b;
    b = a + 1;
  }
  return {a, b};
}

// Per-dimension cell index lists, or nullopt on escape.
std::optional<std::vector<std::vector<std::int64_t>>> cell_ranges(const GridSpec& grid,
                                                                   const IntervalVector& box) {
  if (box.size() != grid.dimension()) throw CoverError("box dimension mismatch");
  const int k = grid.resolution();
  std::vector<std::vector<std::int64_t>> ranges(grid.dimension());
  for (std::size_t i = 0; i < grid.dimension(); ++i) {
    const DimRange& d = grid.dim(i);
    const double lo = std::ldexp(box[i].lo(), k);
    const double hi = std::ldexp(box[i].hi(), k);
    auto& out = ranges[i];
    if (!d.is_periodic()) {
      if (lo < static_cast<double>(d.lo) || hi > static_cast<double>(d.hi)) return std::nullopt;
      auto [a, b] = index_span(lo, hi);
      a = std::max(a, d.lo);
      b = std::min(b, d.hi - 1);
      for (auto c = a; c <= b; ++c) out.push_back(c);
      continue;
    }
    const auto m = d.modulus();
    if (hi - lo >= static_cast<double>(m) || std::fabs(lo) > 0x1p52 || std::fabs(hi) > 0x1p52) {
      out.resize(static_cast<std::size_t>(m));
      std::iota(out.begin(), out.end(), std::int64_t{0});
      continue;
    }
    const auto [a, b] = index_span(lo, hi);
    if (b - a + 1 >= m) {
      out.resize(static_cast<std::size_t>(m));
      std::iota(out.begin(), out.end(), std::int64_t{0});
      continue;
    }
    for (auto c = a; c <= b; ++c) out.push_back(floor_mod(c, m));
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
  }
  return ranges;
}

std::vector<Cube> product(const std::vector<std::vector<std::int64_t>>& ranges) {
  std::size_t total = 1;
  for (const auto& r : ranges) total *= r.size();
  std::vector<Cube> cubes;
  if (total == 0) return cubes;
  cubes.reserve(total);
  std::vector<std::size_t> idx(ranges.size(), 0);
  while (true) {
    Cube c;
    c.coords.resize(ranges.size());
    for (std::size_t i = 0; i < ranges.size(); ++i) c.coords[i] = ranges[i][idx[i]];
    cubes.push_back(std::move(c));
    std::size_t d = ranges.size();
    while (d > 0) {
      --d;
      if (++idx[d] < ranges[d].size()) break;
      idx[d] = 0;
      if (d == 0) return cubes;
    }
  }
}

}  // namespace

CoverResult min_cover(const GridSpec& grid, const IntervalVector& box) {
  auto ranges = cell_ranges(grid, box);
  if (!ranges) return {{}, true};
  return {product(*ranges), false};
}

std::vector<Cube> min_cover_clipped(const GridSpec& grid, const IntervalVector& box) {
  if (box.size() != grid.dimension()) throw CoverError("box dimension mismatch");
  const IntervalVector dom = grid.domain();
  IntervalVector clipped = box;
  for (std::size_t i = 0; i < box.size(); ++i) {
    if (grid.dim(i).is_periodic()) continue;
    if (!intersects(box[i], dom[i])) return {};
    clipped[i] = intersect(box[i], dom[i]);
  }
  return min_cover(grid, clipped).cubes;
}

std::vector<Cube> cubes_containing(const GridSpec& grid, const std::vector<double>& x) {
  return min_cover(grid, IntervalVector::from_point(x)).cubes;
}

std::vector<Cube> subdivide(const GridSpec& grid, const Cube& c) {
  if (!grid.is_valid(c)) throw CoverError("cube out of range");
  const std::size_t n = c.coords.size();
  std::vector<Cube> children;
  children.reserve(std::size_t{1} << n);
  for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
    Cube child;
    child.coords.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      child.coords[i] = 2 * c.coords[i] + static_cast<std::int64_t>((mask >> (n - 1 - i)) & 1U);
    }
    children.push_back(std::move(child));
  }
  return children;
}

namespace {

struct UnionFind {
  std::vector<std::size_t> parent;
  explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  std::size_t find(std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(std::size_t a, std::size_t b) { parent[find(a)] = find(b); }
};

}  // namespace

std::size_t component_count(const GridSpec& grid, const std::vector<Cube>& input) {
  if (input.empty()) throw CoverError("connectivity of an empty cube set");
  std::vector<Cube> cubes = input;
  std::sort(cubes.begin(), cubes.end());
  cubes.erase(std::unique(cubes.begin(), cubes.end()), cubes.end());
  std::unordered_map<Cube, std::size_t, CubeHash> index;
  for (std::size_t i = 0; i < cubes.size(); ++i) {
    if (!grid.is_valid(cubes[i])) throw CoverError("cube out of range");
    index.emplace(cubes[i], i);
  }
  const std::size_t n = grid.dimension();
  std::size_t offsets = 1;
  for (std::size_t i = 0; i < n; ++i) offsets *= 3;

  UnionFind uf(cubes.size());
  for (std::size_t ci = 0; ci < cubes.size(); ++ci) {
    for (std::size_t code = 0; code < offsets; ++code) {
      Cube nb = cubes[ci];
      std::size_t rest = code;
      bool inside = true;
      for (std::size_t d = 0; d < n; ++d) {
        nb.coords[d] += static_cast<std::int64_t>(rest % 3) - 1;
        rest /= 3;
        const DimRange& r = grid.dim(d);
        if (r.is_periodic()) {
          nb.coords[d] = floor_mod(nb.coords[d], r.modulus());
        } else if (nb.coords[d] < r.lo || nb.coords[d] >= r.hi) {
          inside = false;
        }
      }
      if (!inside) continue;
      if (auto it = index.find(nb); it != index.end()) uf.unite(ci, it->second);
    }
  }
  std::size_t roots = 0;
  for (std::size_t i = 0; i < cubes.size(); ++i) roots += uf.find(i) == i ? 1 : 0;
  return roots;
}

bool is_connected(const GridSpec& grid, const std::vector<Cube>& cubes) {
  return component_count(grid, cubes) == 1;
}

std::string grid_header(const GridSpec& grid) {
  std::ostringstream os;
  os << "# dim=" << grid.dimension() << " k=" << grid.resolution()
     << " domain=" << grid.descriptor();
  return os.str();
}

GridSpec parse_grid_header(const std::string& line) {
  static const std::regex header(R"(#\s*dim=(\d+)\s+k=(\d+)\s+domain=(\S+)\s*)");
  std::smatch m;
  if (!std::regex_match(line, m, header)) throw CoverError("bad box-list header: " + line);
  return GridSpec::parse(std::stoul(m[1]), std::stoi(m[2]), m[3]);
}

void write_box_list(std::ostream& os, const GridSpec& grid, const std::vector<Cube>& cubes) {
  os << grid_header(grid) << '\n';
  for (const auto& c : cubes) {
    for (std::size_t i = 0; i < c.coords.size(); ++i) {
      if (i) os << ',';
      os << c.coords[i];
    }
    os << '\n';
  }
}

void write_box_list(const std::string& path, const GridSpec& grid, const std::vector<Cube>& cubes) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot write " + path);
  write_box_list(os, grid, cubes);
}

BoxList read_box_list(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw CoverError("empty box-list file");
  BoxList out{parse_grid_header(line), {}};
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    Cube c;
    std::istringstream ls(line);
    std::string field;
    while (std::getline(ls, field, ',')) c.coords.push_back(std::stoll(field));
    if (!out.grid.is_valid(c)) throw CoverError("box-list cube out of range: " + line);
    out.cubes.push_back(std::move(c));
  }
  return out;
}

BoxList read_box_list(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot read " + path);
  return read_box_list(is);
}

}  // namespace hypcert
