#include "morpho/evolve.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <numeric>
#include <optional>
#include <thread>

namespace morpho {

void validate(const EvolutionConfig& c) {
  if (c.pop_size < 4 || c.pop_size % 2 != 0) {
    throw ConfigError("pop_size", "must be even and at least 4");
  }
  auto rate = [](double v, const char* key) {
    if (!(v >= 0.0 && v <= 1.0)) throw ConfigError(key, "must lie in [0, 1]");
  };
  rate(c.mutation_rate, "mutation_rate");
  rate(c.crossover_rate, "crossover_rate");
  if (!(c.mutation_sigma >= 0.0) || !std::isfinite(c.mutation_sigma)) {
    throw ConfigError("mutation_sigma", "must be non-negative");
  }
  if (!(c.hv_reference_size > 0.0)) {
    throw ConfigError("hv_reference_size", "must be strictly positive");
  }
  try {
    validate(c.params);
  } catch (const std::invalid_argument& e) {
    const std::string what = e.what();
    throw ConfigError(what.substr(0, what.find(' ')), what);
  }
}

unsigned resolve_threads(unsigned requested) {
  std::optional<unsigned> env_cap;
  if (const char* env = std::getenv("MORPHO_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) env_cap = static_cast<unsigned>(v);
  }
  if (requested > 0) return env_cap ? std::min(requested, *env_cap) : requested;
  if (env_cap) return *env_cap;
  return std::max(1u, std::thread::hardware_concurrency());
}

void evaluate_population(std::span<Individual> pop, const PhysicalParams& params,
                         const HoverOptions& hover, unsigned threads) {
  const std::size_t n = pop.size();
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(n, 1))));
  auto work = [&](std::size_t i) { pop[i].objectives = evaluate(pop[i].genotype, params, hover); };
  if (threads == 1) {
    for (std::size_t i = 0; i < n; ++i) work(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::jthread> workers;
  workers.reserve(threads);
  for (unsigned t = 0; t < threads; ++t) {
    workers.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) work(i);
    });
  }
}

namespace {

// Minimization coordinates: (-alpha, -lambda, size).
struct Point3 {
  double a, b, c;
};

bool weakly_dominates(const Point3& p, const Point3& q) {
  return p.a <= q.a && p.b <= q.b && p.c <= q.c;
}

// Area dominated by 2D minimization points below (ref_a, ref_b). Points must
// be sorted by ascending a.
double area_2d(const std::vector<std::pair<double, double>>& pts, double ref_a, double ref_b) {
  // Each point on the staircase owns the strip from its a to the next
  // improving point's a.
  double area = 0.0;
  std::vector<std::pair<double, double>> stair;
  double best_b = ref_b;
  for (const auto& p : pts) {
    if (p.second < best_b) {
      stair.push_back(p);
      best_b = p.second;
    }
  }
  for (std::size_t i = 0; i < stair.size(); ++i) {
    const double right = i + 1 < stair.size() ? stair[i + 1].first : ref_a;
    area += (right - stair[i].first) * (ref_b - stair[i].second);
  }
  return area;
}

}  // namespace

double hypervolume(std::span<const ObjectiveVector> points, double reference_size) {
  std::vector<Point3> pts;
  for (const auto& o : points) {
    const Point3 p{-o.alpha, -o.lambda, o.size};
    if (p.a < 0.0 && p.b < 0.0 && p.c < reference_size) pts.push_back(p);
  }
  // Keep one copy of each strictly non-dominated point so the value depends
  // only on the set, not on duplicates or dominated members.
  std::sort(pts.begin(), pts.end(), [](const Point3& x, const Point3& y) {
    return std::tie(x.c, x.a, x.b) < std::tie(y.c, y.a, y.b);
  });
  std::vector<Point3> front;
  for (const auto& p : pts) {
    const bool covered = std::any_of(front.begin(), front.end(),
                                     [&](const Point3& q) { return weakly_dominates(q, p); });
    if (!covered) front.push_back(p);
  }

  // Slice along c: between consecutive c values the dominated cross-section
  // is the 2D area of every point with smaller or equal c.
  double volume = 0.0;
  std::vector<std::pair<double, double>> active;
  for (std::size_t i = 0; i < front.size(); ++i) {
    active.emplace_back(front[i].a, front[i].b);
    const double next_c = i + 1 < front.size() ? front[i + 1].c : reference_size;
    if (next_c == front[i].c) continue;
    std::sort(active.begin(), active.end());
    volume += area_2d(active, 0.0, 0.0) * (next_c - front[i].c);
  }
  return volume;
}

GenerationStats population_stats(std::span<const Individual> pop, std::size_t generation,
                                 double reference_size) {
  GenerationStats s;
  s.generation = generation;
  std::vector<ObjectiveVector> front;
  bool first = true;
  for (const auto& ind : pop) {
    const auto& o = ind.objectives;
    if (ind.rank == 0) front.push_back(o);
    s.tier_counts[static_cast<std::size_t>(hover_tier(o))] += 1;
    if (hover_tier(o) <= 1) {
      if (first) {
        s.alpha_min = s.alpha_max = o.alpha;
        s.lambda_min = s.lambda_max = o.lambda;
        s.size_min = s.size_max = o.size;
        first = false;
      } else {
        s.alpha_min = std::min(s.alpha_min, o.alpha);
        s.alpha_max = std::max(s.alpha_max, o.alpha);
        s.lambda_min = std::min(s.lambda_min, o.lambda);
        s.lambda_max = std::max(s.lambda_max, o.lambda);
        s.size_min = std::min(s.size_min, o.size);
        s.size_max = std::max(s.size_max, o.size);
      }
    }
    const int count = decode_raw(ind.genotype).count();
    s.prop_histogram[static_cast<std::size_t>(count - kMinPropellers)] += 1;
  }
  s.front0_size = front.size();
  s.hypervolume = hypervolume(front, reference_size);
  return s;
}

std::vector<Individual> select_survivors(std::vector<Individual> pool, std::size_t target) {
  const auto fronts = fast_non_dominated_sort(pool);
  std::vector<Individual> next;
  next.reserve(target);
  for (const auto& front : fronts) {
    crowding_distance(pool, front);
    if (next.size() + front.size() <= target) {
      for (const std::size_t i : front) next.push_back(pool[i]);
      if (next.size() == target) break;
      continue;
    }
    std::vector<std::size_t> order(front.begin(), front.end());
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return pool[a].crowding > pool[b].crowding;
    });
    for (std::size_t k = 0; next.size() < target; ++k) next.push_back(pool[order[k]]);
    break;
  }
  return next;
}

RunRecord evolve(const EvolutionConfig& config, const ProgressFn& progress) {
  validate(config);
  const unsigned threads = resolve_threads(config.threads);
  const std::size_t n = config.pop_size;

  RunRecord record;
  record.config = config;

  std::vector<Individual> pop;
  pop.reserve(n);
  for (auto& g : latin_hypercube_init(n, config.seed)) pop.push_back(Individual{g, {}, -1, 0.0});
  evaluate_population(pop, config.params, config.hover, threads);
  pop = select_survivors(std::move(pop), n);
  record.initial = population_stats(pop, 0, config.hv_reference_size);

  for (std::size_t gen = 1; gen <= config.generations; ++gen) {
    Rng rng(stream_seed(config.seed, gen));
    std::vector<Individual> offspring;
    offspring.reserve(n);
    while (offspring.size() < n) {
      const Genotype& p1 = pop[binary_tournament(pop, rng)].genotype;
      const Genotype& p2 = pop[binary_tournament(pop, rng)].genotype;
      std::pair<Genotype, Genotype> kids{p1, p2};
      if (rng.uniform() < config.crossover_rate) kids = arithmetic_crossover(p1, p2, rng);
      offspring.push_back(
          Individual{mutate(kids.first, config.mutation_rate, config.mutation_sigma, rng), {}, -1, 0.0});
      offspring.push_back(
          Individual{mutate(kids.second, config.mutation_rate, config.mutation_sigma, rng), {}, -1, 0.0});
    }
    evaluate_population(offspring, config.params, config.hover, threads);

    std::vector<Individual> pool = std::move(pop);
    pool.insert(pool.end(), std::make_move_iterator(offspring.begin()),
                std::make_move_iterator(offspring.end()));
    pop = select_survivors(std::move(pool), n);

    record.generations.push_back(population_stats(pop, gen, config.hv_reference_size));
    if (progress) progress(record.generations.back());
  }

  record.population = std::move(pop);
  for (std::size_t i = 0; i < record.population.size(); ++i) {
    if (record.population[i].rank == 0) record.front.push_back(i);
  }
  return record;
}

}  // namespace morpho
