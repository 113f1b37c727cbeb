#pragma once

#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "hypcert/cones.hpp"
#include "hypcert/cover.hpp"
#include "hypcert/digraph.hpp"
#include "hypcert/dynsys.hpp"
#include "hypcert/enclose.hpp"
#include "hypcert/frames.hpp"
#include "hypcert/periodic.hpp"

namespace hypcert {

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Stage failure; the message names the stage.
class StageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct PipelineConfig {
  std::string system;
  std::vector<double> params;
  std::vector<GridSpec::RealDim> domain;
  int resolution = 0;
  Strategy strategy = Strategy::attractor;
  std::vector<double> seed;  // attractor strategy
  int transient = 1000;
  int max_refine = 0;        // outer strategy
  int max_period = 3;
  int spread_k = 2;
  std::size_t u = 0;
  std::size_t s = 0;
  double newton_tol = 1e-12;
  int max_iter = 50;
  double proof_radius = 1e-10;
  double bisect_tol = 1e-3;
  bool deterministic = true;
  unsigned threads = 1;
  std::string output = "out";

  // Parses and validates; throws ConfigError on unknown keys, bad values or a
  // signature that does not match the system dimension.
  static PipelineConfig from_json(const nlohmann::json& j);
  static PipelineConfig load(const std::string& path);
  nlohmann::json to_json() const;
  void validate() const;

  // 1 in deterministic mode, otherwise threads (0 = hardware concurrency).
  unsigned worker_threads() const;
};

enum class Stage { enclose, cycles, refine, frames, verify, rates };
const char* stage_name(Stage s);
Stage parse_stage(const std::string& name);

struct OrbitRecord {
  int period = 1;
  std::vector<std::size_t> members;  // indices into points[period-1]
  std::optional<RigorousOrbitProof> proof;
  std::string proof_error;
};

struct StageTiming {
  std::string stage;
  double seconds = 0.0;
  std::string detail;
};

class Pipeline {
 public:
  explicit Pipeline(PipelineConfig config);

  const PipelineConfig& config() const { return config_; }
  const MapSystem& map() const { return *map_; }

  // Stages; each needs the outputs of the previous ones (in memory or loaded).
  void enclose();
  void find_cycles();
  void refine();
  void compute_frames();
  void verify();
  void certify();

  // Runs every stage, writing artifacts to dir. Rates are only certified
  // when the cone check leaves no unverified vertex.
  void run(const std::string& dir);
  // Loads the prerequisites of one stage from `from`, runs it and writes its
  // artifacts to `to`.
  void run_stage(Stage stage, const std::string& from, const std::string& to);

  void save(Stage stage, const std::string& dir) const;
  void load_graph(const std::string& dir);
  void load_cycles(const std::string& dir);
  void load_candidates(const std::string& dir);
  void load_frames(const std::string& dir);

  const GridSpec& grid() const;
  const DiGraph& graph() const { return graph_; }
  const std::vector<std::vector<VertexId>>& cycle_sets() const { return cycle_sets_; }
  const std::vector<std::vector<PeriodicCandidate>>& points() const { return points_; }
  const std::vector<OrbitRecord>& orbits() const { return orbits_; }
  const FrameAssignment& frames() const { return frames_; }
  const std::optional<ConeReport>& cones() const { return cones_; }
  const std::optional<CertifiedRates>& rates() const { return rates_; }
  const std::vector<StageTiming>& timings() const { return timings_; }

  // Table of stage, result and wall time.
  std::string summary() const;
  // 0 when the cone check ran and left nothing unverified, 2 when it left
  // unverified vertices, 0 when it has not run.
  int exit_code() const;

 private:
  template <class F>
  void timed(Stage stage, F&& body);

  PipelineConfig config_;
  std::unique_ptr<MapSystem> map_;
  std::optional<GridSpec> grid_;
  Strategy strategy_ = Strategy::attractor;
  DiGraph graph_;
  std::vector<std::vector<VertexId>> cycle_sets_;
  std::vector<std::vector<PeriodicCandidate>> points_;
  std::vector<OrbitRecord> orbits_;
  FrameAssignment frames_;
  std::optional<ConeReport> cones_;
  std::optional<CertifiedRates> rates_;
  std::string rates_error_;
  std::vector<StageTiming> timings_;
};

// Exact round-trip text form of a double ("%a").
std::string hex_float(double x);
double parse_hex_float(const std::string& s);

nlohmann::json cycles_json(const std::vector<std::vector<VertexId>>& sets);
nlohmann::json candidates_json(const DiGraph& g, const GridSpec& grid,
                               const std::vector<std::vector<PeriodicCandidate>>& points,
                               const std::vector<OrbitRecord>& orbits);
nlohmann::json cone_report_json(const ConeReport& report,
                                const std::optional<CertifiedRates>& rates);

// One line per assigned vertex: "id tag c00 c01 ..." (row-major hex floats).
void write_frames(std::ostream& os, const FrameAssignment& frames);
FrameAssignment read_frames(std::istream& is, std::size_t vertex_count);

// Axis-aligned rectangles of the cubes projected to (ax, ay), sorted and
// deduplicated, as an SVG document in domain coordinates.
std::string render_svg(const BoxList& boxes, std::size_t ax, std::size_t ay);

}  // namespace hypcert
