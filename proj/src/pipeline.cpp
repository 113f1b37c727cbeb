#include "hypcert/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <thread>

namespace hypcert {

namespace fs = std::filesystem;
using nlohmann::json;

std::string hex_float(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%a", x);
  return buf;
}

double parse_hex_float(const std::string& s) {
  char* end = nullptr;
  const double x = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size()) throw std::invalid_argument("bad number: " + s);
  return x;
}

// ---------------------------------------------------------------- config

namespace {

const std::set<std::string> kConfigKeys = {
    "system",     "params",     "domain",       "periodic",   "resolution", "strategy",
    "seed",       "transient",  "max_refine",   "max_period", "spread_k",   "signature",
    "newton_tol", "max_iter",   "proof_radius", "bisect_tol", "mode",       "threads",
    "output"};

template <class T>
T get_or(const json& j, const char* key, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError(std::string("config: bad value for ") + key);
  }
}

}  // namespace

PipelineConfig PipelineConfig::from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("config: expected a JSON object");
  for (const auto& [key, value] : j.items()) {
    if (!kConfigKeys.count(key)) throw ConfigError("config: unknown key " + key);
  }
  for (const char* key : {"system", "domain", "resolution", "signature"}) {
    if (!j.contains(key)) throw ConfigError(std::string("config: missing ") + key);
  }
  PipelineConfig c;
  c.system = get_or<std::string>(j, "system", "");
  c.params = get_or<std::vector<double>>(j, "params", {});
  const auto domain = get_or<std::vector<std::vector<double>>>(j, "domain", {});
  auto periodic = get_or<std::vector<bool>>(j, "periodic", std::vector<bool>(domain.size(), false));
  if (periodic.size() != domain.size()) throw ConfigError("config: periodic must match domain");
  for (std::size_t i = 0; i < domain.size(); ++i) {
    if (domain[i].size() != 2) throw ConfigError("config: domain entries are [lo, hi]");
    c.domain.push_back({domain[i][0], domain[i][1], periodic[i]});
  }
  c.resolution = get_or<int>(j, "resolution", 0);
  const auto strategy = get_or<std::string>(j, "strategy", "attractor");
  if (strategy == "attractor") {
    c.strategy = Strategy::attractor;
  } else if (strategy == "outer") {
    c.strategy = Strategy::outer;
  } else {
    throw ConfigError("config: strategy must be attractor or outer");
  }
  c.seed = get_or<std::vector<double>>(j, "seed", {});
  c.transient = get_or<int>(j, "transient", c.transient);
  c.max_refine = get_or<int>(j, "max_refine", c.max_refine);
  c.max_period = get_or<int>(j, "max_period", c.max_period);
  c.spread_k = get_or<int>(j, "spread_k", c.spread_k);
  const auto sig = get_or<std::vector<int>>(j, "signature", {});
  if (sig.size() != 2 || sig[0] < 0 || sig[1] < 0) throw ConfigError("config: signature is [u, s]");
  c.u = static_cast<std::size_t>(sig[0]);
  c.s = static_cast<std::size_t>(sig[1]);
  c.newton_tol = get_or<double>(j, "newton_tol", c.newton_tol);
  c.max_iter = get_or<int>(j, "max_iter", c.max_iter);
  c.proof_radius = get_or<double>(j, "proof_radius", c.proof_radius);
  c.bisect_tol = get_or<double>(j, "bisect_tol", c.bisect_tol);
  const auto mode = get_or<std::string>(j, "mode", "deterministic");
  if (mode != "deterministic" && mode != "parallel") {
    throw ConfigError("config: mode must be deterministic or parallel");
  }
  c.deterministic = mode == "deterministic";
  const int threads = get_or<int>(j, "threads", 1);
  if (threads < 0) throw ConfigError("config: threads must be >= 0");
  c.threads = static_cast<unsigned>(threads);
  c.output = get_or<std::string>(j, "output", c.output);
  c.validate();
  return c;
}

PipelineConfig PipelineConfig::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  return from_json(j);
}

json PipelineConfig::to_json() const {
  json domain_j = json::array();
  json periodic_j = json::array();
  for (const auto& d : domain) {
    domain_j.push_back({d.lo, d.hi});
    periodic_j.push_back(d.periodic);
  }
  json j = {{"system", system},
            {"params", params},
            {"domain", domain_j},
            {"periodic", periodic_j},
            {"resolution", resolution},
            {"strategy", strategy == Strategy::attractor ? "attractor" : "outer"},
            {"max_period", max_period},
            {"spread_k", spread_k},
            {"signature", {u, s}},
            {"newton_tol", newton_tol},
            {"max_iter", max_iter},
            {"proof_radius", proof_radius},
            {"bisect_tol", bisect_tol},
            {"mode", deterministic ? "deterministic" : "parallel"},
            {"threads", threads},
            {"output", output}};
  if (strategy == Strategy::attractor) {
    j["seed"] = seed;
    j["transient"] = transient;
  } else {
    j["max_refine"] = max_refine;
  }
  return j;
}

void PipelineConfig::validate() const {
  std::unique_ptr<MapSystem> map;
  try {
    map = make_system(system, params);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  const std::size_t n = map->dimension();
  if (domain.size() != n) throw ConfigError("config: domain dimension does not match system");
  if (u + s != n) throw ConfigError("config: signature dimension does not match system");
  if (resolution < 0 || resolution > kMaxResolution) throw ConfigError("config: resolution out of range");
  try {
    (void)GridSpec::from_real(domain, resolution);
  } catch (const std::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  if (strategy == Strategy::attractor) {
    if (seed.size() != n) throw ConfigError("config: seed dimension does not match system");
    if (transient < 0) throw ConfigError("config: transient must be >= 0");
  } else if (max_refine < 0 || resolution + max_refine > kMaxResolution) {
    throw ConfigError("config: max_refine out of range");
  }
  if (max_period < 1) throw ConfigError("config: max_period must be >= 1");
  if (spread_k < 2) throw ConfigError("config: spread_k must be >= 2");
  if (max_iter < 1) throw ConfigError("config: max_iter must be >= 1");
  if (!(newton_tol > 0.0) || !(proof_radius > 0.0) || !(bisect_tol > 0.0)) {
    throw ConfigError("config: tolerances must be positive");
  }
}

unsigned PipelineConfig::worker_threads() const {
  if (deterministic) return 1;
  if (threads > 0) return threads;
  return std::max(1u, std::thread::hardware_concurrency());
}

const char* stage_name(Stage s) {
  switch (s) {
    case Stage::enclose: return "enclose";
    case Stage::cycles: return "cycles";
    case Stage::refine: return "refine";
    case Stage::frames: return "frames";
    case Stage::verify: return "verify";
    case Stage::rates: return "rates";
  }
  return "?";
}

Stage parse_stage(const std::string& name) {
  for (Stage s : {Stage::enclose, Stage::cycles, Stage::refine, Stage::frames, Stage::verify,
                  Stage::rates}) {
    if (name == stage_name(s)) return s;
  }
  throw std::invalid_argument("unknown stage: " + name);
}

// ---------------------------------------------------------------- stages

namespace {

std::string cube_text(const Cube& c) {
  std::string s = "(";
  for (std::size_t i = 0; i < c.coords.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(c.coords[i]);
  }
  return s + ")";
}

std::string join_path(const std::string& dir, const char* file) {
  return (fs::path(dir) / file).string();
}

}  // namespace

Pipeline::Pipeline(PipelineConfig config) : config_(std::move(config)) {
  config_.validate();
  map_ = make_system(config_.system, config_.params);
}

const GridSpec& Pipeline::grid() const {
  if (!grid_) throw StageError("no enclosure available; run the enclose stage first");
  return *grid_;
}

template <class F>
void Pipeline::timed(Stage stage, F&& body) {
  const auto t0 = std::chrono::steady_clock::now();
  std::string detail;
  try {
    detail = body();
  } catch (const StageError&) {
    throw;
  } catch (const std::exception& e) {
    throw StageError(std::string("stage ") + stage_name(stage) + ": " + e.what());
  }
  const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  timings_.push_back({stage_name(stage), dt, std::move(detail)});
}

void Pipeline::enclose() {
  timed(Stage::enclose, [&] {
    const unsigned threads = config_.worker_threads();
    const GridSpec grid = GridSpec::from_real(config_.domain, config_.resolution);
    EnclosureResult r;
    if (config_.strategy == Strategy::attractor) {
      const Cube seed = find_seed(grid, *map_, config_.seed, config_.transient);
      r = enclose_attractor(seed, grid, *map_, {threads});
      if (r.escaped) {
        throw EnclosureError("image of cube " + cube_text(*r.escaping_cube) +
                             " leaves the domain");
      }
    } else {
      r = enclose_invariant_outer(grid, *map_, full_cover(grid), config_.max_refine, {threads});
    }
    grid_ = r.grid;
    strategy_ = r.strategy;
    graph_ = std::move(r.graph);
    return std::to_string(graph_.vertex_count()) + " boxes, " +
           std::to_string(graph_.edge_count()) + " edges, k=" +
           std::to_string(grid_->resolution());
  });
}

void Pipeline::find_cycles() {
  timed(Stage::cycles, [&] {
    (void)grid();
    cycle_sets_ = cycle_vertex_sets(graph_, config_.max_period);
    std::string detail = "vertices on cycles by period:";
    for (const auto& s : cycle_sets_) detail += " " + std::to_string(s.size());
    return detail;
  });
}

void Pipeline::refine() {
  timed(Stage::refine, [&] {
    const GridSpec& g = grid();
    RefineOptions opt;
    opt.newton_tol = config_.newton_tol;
    opt.max_iter = config_.max_iter;
    opt.threads = config_.worker_threads();
    points_ = refine_cycles(graph_, g, *map_, cycle_sets_, opt);
    const auto periods = g.periods();
    orbits_.clear();
    std::size_t proved = 0;
    for (const auto& level : points_) {
      if (level.empty()) continue;
      for (auto& members : group_orbits(level, *map_, periods, opt.dedup_tol)) {
        OrbitRecord rec;
        rec.period = level.front().period;
        rec.members = std::move(members);
        try {
          if (rec.period == 1) {
            rec.proof = prove_fixed_point(*map_, level[rec.members[0]].point,
                                          config_.proof_radius, periods);
          } else if (rec.period == 2 && rec.members.size() == 2) {
            rec.proof = prove_period_two(*map_, level[rec.members[0]].point,
                                         level[rec.members[1]].point, config_.proof_radius,
                                         periods);
          }
        } catch (const std::exception& e) {
          rec.proof_error = e.what();
        }
        if (rec.proof && rec.proof->verdict) ++proved;
        orbits_.push_back(std::move(rec));
      }
    }
    std::string detail = "periodic points by period:";
    for (const auto& level : points_) detail += " " + std::to_string(level.size());
    detail += "; " + std::to_string(orbits_.size()) + " orbits, " + std::to_string(proved) +
              " proved";
    return detail;
  });
}

void Pipeline::compute_frames() {
  timed(Stage::frames, [&] {
    const GridSpec& g = grid();
    frames_.assign(graph_.vertex_count(), std::nullopt);
    const SeedStats seeded = seed_frames(frames_, graph_, g, *map_, points_);
    const SpreadStats spread =
        spread_frames(graph_, g, *map_, frames_, {config_.spread_k, config_.worker_threads()});
    return std::to_string(seeded.seeded) + " seeded, " + std::to_string(spread.assigned) +
           " spread in " + std::to_string(spread.passes) + " passes, " +
           std::to_string(spread.fallbacks) + " fallbacks";
  });
}

void Pipeline::verify() {
  timed(Stage::verify, [&] {
    cones_ = verify_cone_conditions(graph_, grid(), frames_, QuadraticForm(config_.u, config_.s),
                                    *map_, config_.worker_threads());
    return std::to_string(cones_->edges_checked) + " edges, " +
           std::to_string(cones_->unverified.size()) + " unverified vertices";
  });
}

void Pipeline::certify() {
  timed(Stage::rates, [&] {
    RateOptions opt;
    opt.bisect_tol = config_.bisect_tol;
    opt.threads = config_.worker_threads();
    rates_ = certify_rates(graph_, grid(), frames_, QuadraticForm(config_.u, config_.s), *map_,
                           opt);
    char buf[160];
    std::snprintf(buf, sizeof buf, "lambda_bar=%.6g lambda=%.6g c=%.3g", rates_->lambda_bar,
                  rates_->lambda, rates_->c);
    return std::string(buf);
  });
}

void Pipeline::run(const std::string& dir) {
  enclose();
  save(Stage::enclose, dir);
  find_cycles();
  save(Stage::cycles, dir);
  refine();
  save(Stage::refine, dir);
  compute_frames();
  save(Stage::frames, dir);
  verify();
  if (cones_->ok()) {
    try {
      certify();
    } catch (const StageError& e) {
      rates_error_ = e.what();
    }
  }
  save(Stage::verify, dir);
}

void Pipeline::run_stage(Stage stage, const std::string& from, const std::string& to) {
  switch (stage) {
    case Stage::enclose:
      enclose();
      break;
    case Stage::cycles:
      load_graph(from);
      find_cycles();
      break;
    case Stage::refine:
      load_graph(from);
      load_cycles(from);
      refine();
      break;
    case Stage::frames:
      load_graph(from);
      load_candidates(from);
      compute_frames();
      break;
    case Stage::verify:
      load_graph(from);
      load_frames(from);
      verify();
      break;
    case Stage::rates:
      load_graph(from);
      load_frames(from);
      certify();
      break;
  }
  if (stage == Stage::rates) {
    // Extend an existing cone report rather than replacing it.
    json report;
    std::ifstream in(join_path(from, "cones.json"));
    if (in) in >> report;
    report["rates"] = cone_report_json(ConeReport{}, rates_)["rates"];
    fs::create_directories(to);
    std::ofstream(join_path(to, "cones.json")) << report.dump(2) << "\n";
    return;
  }
  save(stage, to);
}

void Pipeline::save(Stage stage, const std::string& dir) const {
  fs::create_directories(dir);
  switch (stage) {
    case Stage::enclose: {
      write_box_list(join_path(dir, "boxes.csv"), grid(), graph_.vertices());
      write_graph(join_path(dir, "vertices.csv"), join_path(dir, "edges.csv"), grid(), graph_);
      break;
    }
    case Stage::cycles:
      std::ofstream(join_path(dir, "cycles.json")) << cycles_json(cycle_sets_).dump(2) << "\n";
      break;
    case Stage::refine:
      std::ofstream(join_path(dir, "candidates.json"))
          << candidates_json(graph_, grid(), points_, orbits_).dump(2) << "\n";
      break;
    case Stage::frames: {
      std::ofstream out(join_path(dir, "frames.txt"));
      write_frames(out, frames_);
      break;
    }
    case Stage::verify:
    case Stage::rates: {
      if (!cones_) throw StageError("no cone report to save");
      json j = cone_report_json(*cones_, rates_);
      if (!rates_error_.empty()) j["rates_error"] = rates_error_;
      std::ofstream(join_path(dir, "cones.json")) << j.dump(2) << "\n";
      break;
    }
  }
}

void Pipeline::load_graph(const std::string& dir) {
  GraphFiles files = read_graph(join_path(dir, "vertices.csv"), join_path(dir, "edges.csv"));
  if (files.grid.dimension() != map_->dimension()) {
    throw StageError("graph in " + dir + " does not match the system dimension");
  }
  grid_ = files.grid;
  strategy_ = config_.strategy;
  graph_ = std::move(files.graph);
}

void Pipeline::load_cycles(const std::string& dir) {
  std::ifstream in(join_path(dir, "cycles.json"));
  if (!in) throw StageError("cannot open cycles.json in " + dir);
  const json j = json::parse(in);
  cycle_sets_ = j.at("sets").get<std::vector<std::vector<VertexId>>>();
  for (const auto& s : cycle_sets_) {
    for (VertexId v : s) {
      if (v >= graph_.vertex_count()) throw StageError("cycles.json refers to unknown vertex");
    }
  }
}

void Pipeline::load_candidates(const std::string& dir) {
  std::ifstream in(join_path(dir, "candidates.json"));
  if (!in) throw StageError("cannot open candidates.json in " + dir);
  const json j = json::parse(in);
  points_.clear();
  for (const auto& level : j.at("points")) {
    std::vector<PeriodicCandidate> pts;
    for (const auto& p : level) {
      PeriodicCandidate c;
      c.period = p.at("period").get<int>();
      for (const auto& x : p.at("point")) c.point.push_back(parse_hex_float(x.get<std::string>()));
      const auto src = p.at("source").get<VertexId>();
      if (src >= graph_.vertex_count()) throw StageError("candidates.json refers to unknown vertex");
      c.source = graph_.cube(src);
      pts.push_back(std::move(c));
    }
    points_.push_back(std::move(pts));
  }
}

void Pipeline::load_frames(const std::string& dir) {
  std::ifstream in(join_path(dir, "frames.txt"));
  if (!in) throw StageError("cannot open frames.txt in " + dir);
  frames_ = read_frames(in, graph_.vertex_count());
}

std::string Pipeline::summary() const {
  std::ostringstream os;
  char line[256];
  std::snprintf(line, sizeof line, "%-10s %10s  %s\n", "stage", "wall [s]", "result");
  os << line;
  for (const auto& t : timings_) {
    std::snprintf(line, sizeof line, "%-10s %10.3f  ", t.stage.c_str(), t.seconds);
    os << line << t.detail << "\n";
  }
  if (!rates_error_.empty()) os << "rates      not certified: " << rates_error_ << "\n";
  return os.str();
}

int Pipeline::exit_code() const { return cones_ && !cones_->ok() ? 2 : 0; }

// ---------------------------------------------------------------- artifacts

json cycles_json(const std::vector<std::vector<VertexId>>& sets) {
  return {{"max_period", sets.size()}, {"sets", sets}};
}

json candidates_json(const DiGraph& g, const GridSpec& grid,
                     const std::vector<std::vector<PeriodicCandidate>>& points,
                     const std::vector<OrbitRecord>& orbits) {
  json pts = json::array();
  for (const auto& level : points) {
    json lv = json::array();
    for (const auto& p : level) {
      json coords = json::array();
      for (double x : p.point) coords.push_back(hex_float(x));
      json vertices = json::array();
      for (const auto& c : cubes_containing(grid, p.point)) {
        if (auto v = g.find(c)) vertices.push_back(*v);
      }
      const auto src = g.find(p.source);
      lv.push_back({{"period", p.period},
                    {"point", coords},
                    {"point_decimal", p.point},
                    {"vertices", vertices},
                    {"source", src ? json(*src) : json(nullptr)}});
    }
    pts.push_back(std::move(lv));
  }
  json orb = json::array();
  for (const auto& o : orbits) {
    json rec = {{"period", o.period}, {"members", o.members}};
    if (o.proof) {
      json centre = json::array();
      for (double x : o.proof->centre) centre.push_back(hex_float(x));
      json image = json::array();
      for (const auto& x : o.proof->newton_image) {
        image.push_back({hex_float(x.lo()), hex_float(x.hi())});
      }
      rec["proof"] = {{"centre", centre},
                      {"radius", hex_float(o.proof->radius)},
                      {"newton_image", image},
                      {"verdict", o.proof->verdict}};
    } else if (!o.proof_error.empty()) {
      rec["proof_error"] = o.proof_error;
    }
    orb.push_back(std::move(rec));
  }
  return {{"points", pts}, {"orbits", orb}};
}

json cone_report_json(const ConeReport& report, const std::optional<CertifiedRates>& rates) {
  json edges = json::array();
  for (const auto& [v, w] : report.failed_edges) edges.push_back({v, w});
  json j = {{"vertices", report.vertices_checked},
            {"edges", report.edges_checked},
            {"unverified", report.unverified},
            {"unverified_count", report.unverified.size()},
            {"failed_edges", edges},
            {"min_margin", report.min_margin}};
  if (rates) {
    j["rates"] = {{"lambda_bar", rates->lambda_bar}, {"lambda", rates->lambda},
                  {"d1", rates->d1},                 {"d2", rates->d2},
                  {"r", rates->r},                   {"l", rates->l},
                  {"c", rates->c}};
  }
  return j;
}

void write_frames(std::ostream& os, const FrameAssignment& frames) {
  for (std::size_t v = 0; v < frames.size(); ++v) {
    if (!frames[v]) continue;
    const Matrix& c = frames[v]->c;
    os << v << ' ' << (frames[v]->origin == FrameOrigin::periodic_seed ? "seed" : "spread") << ' '
       << c.rows();
    for (Eigen::Index i = 0; i < c.rows(); ++i) {
      for (Eigen::Index k = 0; k < c.cols(); ++k) os << ' ' << hex_float(c(i, k));
    }
    os << '\n';
  }
}

FrameAssignment read_frames(std::istream& is, std::size_t vertex_count) {
  FrameAssignment frames(vertex_count);
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::size_t v = 0;
    std::string tag;
    Eigen::Index n = 0;
    if (!(ls >> v >> tag >> n) || v >= vertex_count || n <= 0) {
      throw std::runtime_error("malformed frame line: " + line);
    }
    if (tag != "seed" && tag != "spread") throw std::runtime_error("unknown frame tag: " + tag);
    Matrix c(n, n);
    for (Eigen::Index i = 0; i < n * n; ++i) {
      std::string tok;
      if (!(ls >> tok)) throw std::runtime_error("short frame line: " + line);
      c(i / n, i % n) = parse_hex_float(tok);
    }
    frames[v] = CoordinateFrame::from_matrix(
        std::move(c), tag == "seed" ? FrameOrigin::periodic_seed : FrameOrigin::spread);
  }
  return frames;
}

std::string render_svg(const BoxList& boxes, std::size_t ax, std::size_t ay) {
  const std::size_t n = boxes.grid.dimension();
  if (ax >= n || ay >= n || ax == ay) throw std::invalid_argument("bad projection axes");
  struct Rect {
    double x0, x1, y0, y1;
    auto operator<=>(const Rect&) const = default;
  };
  std::vector<Rect> rects;
  rects.reserve(boxes.cubes.size());
  for (const auto& c : boxes.cubes) {
    const IntervalVector b = realize(boxes.grid, c);
    rects.push_back({b[ax].lo(), b[ax].hi(), b[ay].lo(), b[ay].hi()});
  }
  std::sort(rects.begin(), rects.end());
  rects.erase(std::unique(rects.begin(), rects.end()), rects.end());

  const IntervalVector dom = boxes.grid.domain();
  const double x0 = dom[ax].lo();
  const double w = dom[ax].hi() - x0;
  const double y1 = dom[ay].hi();
  const double h = y1 - dom[ay].lo();
  std::ostringstream os;
  os.precision(17);
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"" << x0 << ' ' << -y1 << ' ' << w
     << ' ' << h << "\">\n";
  os << "<g fill=\"steelblue\" stroke=\"none\">\n";
  for (const auto& r : rects) {
    os << "<rect x=\"" << r.x0 << "\" y=\"" << -r.y1 << "\" width=\"" << r.x1 - r.x0
       << "\" height=\"" << r.y1 - r.y0 << "\"/>\n";
  }
  os << "</g>\n</svg>\n";
  return os.str();
}

}  // namespace hypcert
