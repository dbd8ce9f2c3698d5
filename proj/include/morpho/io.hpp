#pragma once

// Structured-text (JSON) formats for designs, run configuration, and run
// records, plus the CSV front export.
//
// Design file:
//   { "params":    { <PhysicalParams keys>, all optional },
//     "phenotype": { "scale_applied": 1.0,
//                    "props": [ { "arm_length": m, "arm_angle": deg,
//                                 "inclination": deg, "azimuth": deg,
//                                 "direction": "CCW" | "CW" }, ... ] } }
// or the same with "genotype": [41 numbers in [-1, 1]] in place of
// "phenotype". Exactly one of the two must be present.
//
// Run config file: one flat object holding any of pop_size, generations,
// mutation_rate, mutation_sigma, crossover_rate, seed, threads,
// hv_reference_size and every PhysicalParams key. Missing keys keep their
// defaults; unknown keys are rejected.
//
// Run directory written by write_run:
//   manifest.json      config echo, seed, wall time, file list
//   generations.jsonl  one GenerationStats object per line
//   population.json    final population (genotype, phenotype, objectives)
//   front.json         rank-0 members of the final population

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "morpho/evolve.hpp"
#include "morpho/objectives.hpp"

namespace morpho {

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using json = nlohmann::ordered_json;

/// Shortest decimal text that reads back to the same double.
std::string format_double(double v);

json to_json(const PhysicalParams& params);
/// Overlays the keys of `j` onto `base`. Throws ConfigError on unknown keys,
/// wrong types, or non-positive values.
PhysicalParams params_from_json(const json& j, PhysicalParams base = {});

json to_json(const Phenotype& ph);
/// Throws ConfigError on a malformed or out-of-range phenotype.
Phenotype phenotype_from_json(const json& j);

json to_json(const Genotype& g);
Genotype genotype_from_json(const json& j);

json to_json(const ObjectiveVector& o);
json to_json(const GenerationStats& s);
json to_json(const EvolutionConfig& c);

struct Design {
  PhysicalParams params;
  std::optional<Genotype> genotype;
  Phenotype phenotype;  // decoded when the file held a genotype
};

Design parse_design(const json& j);
/// Throws IoError if unreadable, ConfigError if invalid.
Design load_design(const std::filesystem::path& path);
void save_design(const std::filesystem::path& path, const Phenotype& ph,
                 const PhysicalParams& params);

EvolutionConfig config_from_json(const json& j);
EvolutionConfig load_run_config(const std::filesystem::path& path);

/// Evaluation report for one design: objectives, hover command, mass model.
json evaluation_report(const Evaluation& ev);

void write_run(const std::filesystem::path& dir, const RunRecord& record, double wall_seconds);

struct FrontEntry {
  std::size_t id = 0;
  Genotype genotype;
  Phenotype phenotype;
  ObjectiveVector objectives;
};

/// Reads front.json of a run directory. Throws IoError when missing.
std::vector<FrontEntry> load_front(const std::filesystem::path& run_dir);
/// Physical parameters recorded in the run manifest.
PhysicalParams load_run_params(const std::filesystem::path& run_dir);

/// CSV with header id,n_props,alpha,lambda,size,hover_class,g0..g40.
std::string front_csv(const std::vector<FrontEntry>& front);
json front_json(const std::vector<FrontEntry>& front);

std::string read_text(const std::filesystem::path& path);
void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace morpho
