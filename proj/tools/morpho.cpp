#include <chrono>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "morpho/evolve.hpp"
#include "morpho/io.hpp"
#include "morpho/objectives.hpp"
#include "morpho/svg_plot.hpp"

namespace fs = std::filesystem;
using namespace morpho;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 2;
constexpr int kExitIo = 3;

struct EvolveArgs {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out = "run";
  bool quiet = false;
};

struct FrontArgs {
  std::string run_dir;
  std::string format = "csv";
  std::string axes;
  std::string plot;
  std::string out;
};

int cmd_evolve(const EvolveArgs& args) {
  EvolutionConfig config = args.config.empty() ? EvolutionConfig{} : load_run_config(args.config);
  if (args.seed) config.seed = *args.seed;
  validate(config);

  const auto start = std::chrono::steady_clock::now();
  ProgressFn progress;
  if (!args.quiet) {
    progress = [&](const GenerationStats& s) {
      std::fprintf(stderr, "gen %zu/%zu  front %zu  hv %.6g  alpha %.4g  lambda %.6g\n",
                   s.generation, config.generations, s.front0_size, s.hypervolume,
                   s.alpha_max, s.lambda_max);
    };
  }
  const RunRecord record = evolve(config, progress);
  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  write_run(args.out, record, wall);
  std::cout << "wrote " << args.out << " (front " << record.front.size() << ", "
            << format_double(wall) << " s)\n";
  return kExitOk;
}

int cmd_eval(const std::string& path) {
  const Design design = load_design(path);
  const Evaluation ev = evaluate_phenotype(design.phenotype, design.params);
  std::cout << evaluation_report(ev).dump(2) << "\n";
  return kExitOk;
}

int cmd_baseline() {
  const PhysicalParams params;
  const Evaluation ev = evaluate_phenotype(quadcopter_baseline(params), params);
  std::cout << evaluation_report(ev).dump(2) << "\n";
  return kExitOk;
}

std::optional<std::pair<Axis, Axis>> parse_axes(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) return std::nullopt;
  const auto x = parse_axis(text.substr(0, colon));
  const auto y = parse_axis(text.substr(colon + 1));
  if (!x || !y || *x == *y) return std::nullopt;
  return std::pair{*x, *y};
}

int cmd_front(const FrontArgs& args) {
  std::optional<std::pair<Axis, Axis>> axes;
  if (!args.axes.empty()) {
    axes = parse_axes(args.axes);
    if (!axes) throw ConfigError("axes", "expected A:B with A, B in {alpha, lambda, size}");
  }
  if (!fs::is_directory(args.run_dir)) throw IoError("no run directory " + args.run_dir);

  const auto front = load_front(args.run_dir);
  const std::string text = args.format == "csv" ? front_csv(front) : front_json(front).dump(1) + "\n";
  if (args.out.empty()) {
    std::cout << text;
  } else {
    write_text(args.out, text);
  }

  if (!args.plot.empty()) {
    const auto [x, y] = axes.value_or(std::pair{Axis::Lambda, Axis::Alpha});
    const PhysicalParams params = load_run_params(args.run_dir);
    const ObjectiveVector baseline = evaluate_phenotype(quadcopter_baseline(params), params).objectives;
    std::vector<ScatterPoint> points;
    points.reserve(front.size());
    for (const auto& e : front) points.push_back({e.objectives, e.phenotype.count()});
    write_text(args.plot, scatter_svg(points, x, y, baseline));
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multicopter morphology evolution"};
  app.require_subcommand(1);

  EvolveArgs evolve_args;
  auto* evolve_cmd = app.add_subcommand("evolve", "run an evolution and write a run directory");
  evolve_cmd->add_option("--config", evolve_args.config, "run config (JSON)");
  evolve_cmd->add_option("--seed", evolve_args.seed, "override the config seed");
  evolve_cmd->add_option("--out", evolve_args.out, "output directory");
  evolve_cmd->add_flag("--quiet", evolve_args.quiet, "suppress per-generation progress");

  std::string design_path;
  auto* eval_cmd = app.add_subcommand("eval", "evaluate one design file");
  eval_cmd->add_option("design", design_path, "design file (JSON)")->required();

  auto* baseline_cmd = app.add_subcommand("baseline", "evaluate the reference quadcopter");

  FrontArgs front_args;
  auto* front_cmd = app.add_subcommand("front", "export the Pareto front of a run");
  front_cmd->add_option("run_dir", front_args.run_dir, "run directory")->required();
  front_cmd->add_option("--format", front_args.format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}));
  front_cmd->add_option("--axes", front_args.axes, "objective pair for the plot, e.g. lambda:alpha");
  front_cmd->add_option("--plot", front_args.plot, "write an SVG scatter to this path");
  front_cmd->add_option("--out", front_args.out, "write the export here instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitValidation;
  }

  try {
    if (*evolve_cmd) return cmd_evolve(evolve_args);
    if (*eval_cmd) return cmd_eval(design_path);
    if (*baseline_cmd) return cmd_baseline();
    if (*front_cmd) return cmd_front(front_args);
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  }
  return kExitValidation;
}
