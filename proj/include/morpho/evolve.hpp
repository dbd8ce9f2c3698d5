#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "morpho/hover.hpp"
#include "morpho/nsga2.hpp"
#include "morpho/params.hpp"

namespace morpho {

/// Validation failure that names the offending configuration key.
class ConfigError : public std::invalid_argument {
 public:
  ConfigError(std::string key, const std::string& message)
      : std::invalid_argument(key + ": " + message), key_(std::move(key)) {}
  const std::string& key() const { return key_; }

 private:
  std::string key_;
};

struct EvolutionConfig {
  std::size_t pop_size = 600;
  std::size_t generations = 2000;
  double mutation_rate = 0.20;   // per-gene probability
  double mutation_sigma = 0.2;   // gene units
  double crossover_rate = 1.0;
  std::uint64_t seed = 1;
  PhysicalParams params;
  HoverOptions hover;
  /// Worker threads for evaluation; 0 means MORPHO_THREADS or, if unset, the
  /// hardware concurrency. MORPHO_THREADS also caps an explicit count.
  unsigned threads = 0;
  /// Size coordinate of the hypervolume reference point, m^2. The alpha and
  /// lambda coordinates are 0.
  double hv_reference_size = 1.0;
};

/// Throws ConfigError on the first invalid field.
void validate(const EvolutionConfig& config);

/// Worker count after applying MORPHO_THREADS (see EvolutionConfig::threads).
unsigned resolve_threads(unsigned requested);

struct GenerationStats {
  std::size_t generation = 0;
  std::size_t front0_size = 0;
  double hypervolume = 0.0;  // of front 0
  // Extrema over individuals that can hover.
  double alpha_min = 0.0, alpha_max = 0.0;
  double lambda_min = 0.0, lambda_max = 0.0;
  double size_min = 0.0, size_max = 0.0;
  std::array<std::size_t, 5> prop_histogram{};  // counts for n = 4..8
  std::array<std::size_t, 4> tier_counts{};     // static, spinning, none, invalid

  bool operator==(const GenerationStats&) const = default;
};

struct RunRecord {
  EvolutionConfig config;
  GenerationStats initial;                  // the evaluated initial population
  std::vector<GenerationStats> generations; // one per evolved generation
  std::vector<Individual> population;       // final, ranked and crowded
  std::vector<std::size_t> front;           // rank-0 indices into population
};

/// Evaluates every individual in place, spread over `threads` workers.
/// Results do not depend on the worker count.
void evaluate_population(std::span<Individual> pop, const PhysicalParams& params,
                         const HoverOptions& hover, unsigned threads);

/// Exact hypervolume of (max alpha, max lambda, min size) points against
/// the reference (0, 0, reference_size). Points outside the box contribute
/// nothing.
double hypervolume(std::span<const ObjectiveVector> points, double reference_size);

GenerationStats population_stats(std::span<const Individual> pop, std::size_t generation,
                                 double reference_size);

/// One NSGA-II environmental selection: sort the merged pool and keep the
/// best `target` individuals, truncating the splitting front by crowding.
std::vector<Individual> select_survivors(std::vector<Individual> pool, std::size_t target);

using ProgressFn = std::function<void(const GenerationStats&)>;

RunRecord evolve(const EvolutionConfig& config, const ProgressFn& progress = {});

}  // namespace morpho
