// hypcert: enclose an invariant set of an explicit map, find and prove low
// period orbits, spread coordinate frames and verify the cone conditions.

#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "hypcert/pipeline.hpp"

using namespace hypcert;

namespace {

struct GlobalFlags {
  bool deterministic = false;
  int threads = -1;
};

PipelineConfig load_config(const std::string& path, const GlobalFlags& flags) {
  PipelineConfig c = PipelineConfig::load(path);
  if (flags.threads >= 0) {
    c.threads = static_cast<unsigned>(flags.threads);
    c.deterministic = false;
  }
  if (flags.deterministic) c.deterministic = true;
  return c;
}

std::pair<std::size_t, std::size_t> parse_axes(const std::string& s) {
  const auto comma = s.find(',');
  if (comma == std::string::npos) throw std::invalid_argument("axes must look like i,j");
  try {
    std::size_t used = 0;
    const int i = std::stoi(s.substr(0, comma), &used);
    if (used != comma) throw std::invalid_argument("");
    const std::string rest = s.substr(comma + 1);
    const int j = std::stoi(rest, &used);
    if (used != rest.size() || i < 0 || j < 0) throw std::invalid_argument("");
    return {static_cast<std::size_t>(i), static_cast<std::size_t>(j)};
  } catch (const std::exception&) {
    throw std::invalid_argument("axes must look like i,j");
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Rigorous hyperbolicity certification for explicit maps"};
  app.require_subcommand(1);
  GlobalFlags flags;
  app.add_flag("--deterministic", flags.deterministic, "single-threaded reproducible run");
  app.add_option("--threads", flags.threads, "worker threads (0 = all cores)")
      ->check(CLI::NonNegativeNumber);

  std::string config_path;
  std::string out_dir;
  std::string from_dir;

  auto* run = app.add_subcommand("run", "run every stage and write all artifacts");
  run->add_option("config", config_path, "pipeline config (JSON)")->required();
  run->add_option("--out", out_dir, "artifact directory (default: config output)");

  std::vector<std::pair<Stage, CLI::App*>> stages;
  for (Stage s : {Stage::enclose, Stage::cycles, Stage::refine, Stage::frames, Stage::verify,
                  Stage::rates}) {
    auto* sub = app.add_subcommand(stage_name(s), std::string("run the ") + stage_name(s) +
                                                      " stage from persisted artifacts");
    sub->add_option("config", config_path, "pipeline config (JSON)")->required();
    sub->add_option("--from", from_dir, "directory with the previous stages' artifacts");
    sub->add_option("--out", out_dir, "artifact directory (default: config output)");
    stages.emplace_back(s, sub);
  }

  std::string boxlist;
  std::string axes;
  std::string svg_out;
  auto* svg = app.add_subcommand("export-svg", "project a box list to an SVG figure");
  svg->add_option("boxlist", boxlist, "box-list file")->required();
  svg->add_option("--axes", axes, "projection axes i,j")->required();
  svg->add_option("-o,--output", svg_out, "output file (default: stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (svg->parsed()) {
      const auto [ax, ay] = parse_axes(axes);
      const std::string doc = render_svg(read_box_list(boxlist), ax, ay);
      if (svg_out.empty()) {
        std::cout << doc;
      } else {
        std::ofstream(svg_out) << doc;
      }
      return 0;
    }

    Pipeline pipeline(load_config(config_path, flags));
    const std::string out = out_dir.empty() ? pipeline.config().output : out_dir;
    if (run->parsed()) {
      pipeline.run(out);
    } else {
      for (const auto& [stage, sub] : stages) {
        if (!sub->parsed()) continue;
        pipeline.run_stage(stage, from_dir.empty() ? out : from_dir, out);
      }
    }
    std::cout << pipeline.summary();
    if (pipeline.cones()) {
      std::cout << "unverified vertices: " << pipeline.cones()->unverified.size() << "\n";
    }
    return pipeline.exit_code();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
