#pragma once

#include <optional>
#include <stdexcept>
#include <vector>

#include "hypcert/cover.hpp"
#include "hypcert/digraph.hpp"
#include "hypcert/dynsys.hpp"
#include "hypcert/periodic.hpp"

namespace hypcert {

class FrameError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class FrameOrigin { periodic_seed, spread };

// C maps tangent vectors into frame coordinates; the frame vectors are the
// columns of C⁻¹. inv_enclosure is a verified enclosure of C⁻¹.
struct CoordinateFrame {
  Matrix c;
  IntervalMatrix inv_enclosure;
  FrameOrigin origin = FrameOrigin::spread;

  // Throws FrameError when C⁻¹ cannot be enclosed.
  static CoordinateFrame from_matrix(Matrix c, FrameOrigin origin);
  // C = F⁻¹ for a matrix F of frame vectors.
  static CoordinateFrame from_frame_vectors(const Matrix& f, FrameOrigin origin);
};

// Indexed by VertexId; nullopt means no frame assigned yet.
using FrameAssignment = std::vector<std::optional<CoordinateFrame>>;

// Eigenvectors of A as columns of M, sorted by decreasing |λ| and normalized.
// A complex pair contributes the real and imaginary parts of its eigenvector.
// Throws FrameError("ill-conditioned frame") when cond(M) > max_condition.
Matrix eigen_basis(const Matrix& a, double max_condition = 1e8);

// Frame with C = M⁻¹ for M the eigen basis of Dfᵖ(y).
CoordinateFrame eigen_frame(const MapSystem& map, const Vector& y, int period);
CoordinateFrame eigen_frame_from_matrix(const Matrix& a);

struct SeedStats {
  std::size_t seeded = 0;
  std::size_t outside_support = 0;
  std::size_t failed = 0;  // ill-conditioned eigen bases
};

// Processes points[i-1] for ascending period i. Every vertex whose closed
// cube contains a point and has no frame yet gets the point's eigen frame.
SeedStats seed_frames(FrameAssignment& frames, const DiGraph& g, const GridSpec& grid,
                      const MapSystem& map,
                      const std::vector<std::vector<PeriodicCandidate>>& points);

struct SpreadOptions {
  int k = 2;
  unsigned threads = 1;
};

struct SpreadStats {
  std::size_t passes = 0;
  std::size_t assigned = 0;
  std::size_t fallbacks = 0;  // singular back-propagation, orthonormal frame used
};

// Columns orthonormalized in order by modified Gram-Schmidt. Throws
// FrameError when the columns are numerically dependent.
Matrix gram_schmidt(const Matrix& m);
Matrix normalize_columns(const Matrix& m);

// Frame vectors of V carried to the image of centre(V): k forward steps,
// orthonormalization, k-1 backward steps, column normalization. Returns the
// orthonormalized vectors and sets *fallback when a backward step is singular.
Matrix propagate_frame(const MapSystem& map, const Vector& centre, const Matrix& frame_vectors,
                       int k, bool* fallback = nullptr);

// Breadth-layer propagation from the assigned vertices until every vertex
// has a frame. Requires a single strongly connected graph and at least one
// assigned vertex. Only unset frames are written; within a layer sources are
// merged in frontier order, so the result does not depend on threads.
SpreadStats spread_frames(const DiGraph& g, const GridSpec& grid, const MapSystem& map,
                          FrameAssignment& frames, const SpreadOptions& options = {});

}  // namespace hypcert
