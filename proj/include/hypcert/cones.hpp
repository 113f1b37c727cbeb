#pragma once

#include <stdexcept>
#include <utility>
#include <vector>

#include "hypcert/cover.hpp"
#include "hypcert/digraph.hpp"
#include "hypcert/dynsys.hpp"
#include "hypcert/frames.hpp"

namespace hypcert {

class ConeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Q = diag(I_u, -I_s).
class QuadraticForm {
 public:
  QuadraticForm(std::size_t u, std::size_t s);

  std::size_t u() const { return u_; }
  std::size_t s() const { return s_; }
  std::size_t dimension() const { return u_ + s_; }
  double sign(std::size_t i) const { return i < u_ ? 1.0 : -1.0; }
  Matrix matrix() const;
  double operator()(const Vector& v) const;

 private:
  std::size_t u_;
  std::size_t s_;
};

struct ConeReport {
  std::vector<VertexId> unverified;                        // sorted source vertices
  std::vector<std::pair<VertexId, VertexId>> failed_edges;  // sorted
  std::size_t vertices_checked = 0;
  std::size_t edges_checked = 0;
  // Smallest Cholesky pivot lower bound over verified edges.
  double min_margin = 0.0;

  bool ok() const { return unverified.empty(); }
};

// Enclosure of C_W · Df(V) · C_V⁻¹ over the box of V.
IntervalMatrix edge_matrix(const CoordinateFrame& from, const CoordinateFrame& to,
                           const IntervalMatrix& jacobian);

// Mᵀ Q M - λ Q with the upper triangle mirrored, so the result is symmetric.
IntervalMatrix cone_matrix(const IntervalMatrix& m, const QuadraticForm& q, double lambda = 1.0);

// For every edge V -> W checks that Mᵀ Q M - Q is positive definite for all
// M in the enclosure of C_W Df(V) C_V⁻¹. A failing edge puts V into the
// unverified set. Throws ConeError when a vertex has no frame.
ConeReport verify_cone_conditions(const DiGraph& g, const GridSpec& grid,
                                  const FrameAssignment& frames, const QuadraticForm& q,
                                  const MapSystem& map, unsigned threads = 1);

struct CertifiedRates {
  double lambda_bar = 0.0;
  double lambda = 0.0;  // sqrt(lambda_bar)
  double d1 = 0.0;      // max ‖C_V‖
  double d2 = 0.0;      // max ‖C_V⁻¹‖
  double r = 0.0;       // D1⁻²
  double l = 0.0;       // uniform lower bound of vᵀ(MᵀQM - λ̄Q)v / ‖v‖²
  double c = 0.0;       // (R L)^½ / (λ D2)
};

struct RateOptions {
  double bisect_tol = 1e-3;
  double lambda_max = 16.0;
  unsigned threads = 1;
};

// Largest λ̄ in (1, lambda_max] found by bisection such that Mᵀ Q M - λ̄ Q is
// verified positive definite on every edge, together with the constants of
// the expansion estimate. D1, D2 and R are bounded conservatively and c is
// rounded down. Throws ConeError when no λ̄ > 1 can be verified.
CertifiedRates certify_rates(const DiGraph& g, const GridSpec& grid,
                             const FrameAssignment& frames, const QuadraticForm& q,
                             const MapSystem& map, const RateOptions& options = {});

// Same search over an explicit list of edge matrix enclosures.
CertifiedRates certify_rates(const std::vector<IntervalMatrix>& edges, const QuadraticForm& q,
                             double d1, double d2, const RateOptions& options = {});

}  // namespace hypcert
