#include <doctest.h>

#include <algorithm>
#include <cstdlib>
#include <vector>

#include "morpho/evolve.hpp"
#include "morpho/rng.hpp"
#include "support/oracles.hpp"

using namespace morpho;

namespace {

EvolutionConfig small_config(std::size_t pop, std::size_t gens, std::uint64_t seed = 3) {
  EvolutionConfig c;
  c.pop_size = pop;
  c.generations = gens;
  c.seed = seed;
  c.threads = 1;
  return c;
}

ObjectiveVector random_point(Rng& rng) {
  ObjectiveVector o;
  o.alpha = rng.uniform(0.0, 10.0);
  o.lambda = rng.uniform(0.0, 5.0);
  o.size = rng.uniform(0.0, 1.2);
  return o;
}

bool same_individuals(const std::vector<Individual>& a, const std::vector<Individual>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!(a[i].genotype == b[i].genotype) || !(a[i].objectives == b[i].objectives) ||
        a[i].rank != b[i].rank) {
      return false;
    }
  }
  return true;
}

}  // namespace

TEST_SUITE("config") {
  TEST_CASE("defaults are valid") { CHECK_NOTHROW(validate(EvolutionConfig{})); }

  TEST_CASE("invalid fields are named") {
    auto key_of = [](EvolutionConfig c) -> std::string {
      try {
        validate(c);
      } catch (const ConfigError& e) {
        return e.key();
      }
      return "";
    };
    EvolutionConfig c;
    c.mutation_rate = 1.5;
    CHECK(key_of(c) == "mutation_rate");
    c = {};
    c.pop_size = 7;
    CHECK(key_of(c) == "pop_size");
    c = {};
    c.pop_size = 2;
    CHECK(key_of(c) == "pop_size");
    c = {};
    c.crossover_rate = -0.1;
    CHECK(key_of(c) == "crossover_rate");
    c = {};
    c.params.k_f = 0.0;
    CHECK(key_of(c) == "k_f");
  }

  TEST_CASE("MORPHO_THREADS sets and caps the worker count") {
    ::setenv("MORPHO_THREADS", "3", 1);
    CHECK(resolve_threads(0) == 3);
    CHECK(resolve_threads(8) == 3);
    CHECK(resolve_threads(2) == 2);
    ::unsetenv("MORPHO_THREADS");
    CHECK(resolve_threads(5) == 5);
    CHECK(resolve_threads(0) >= 1);
  }
}

TEST_SUITE("hypervolume") {
  TEST_CASE("single box") {
    ObjectiveVector o;
    o.alpha = 2.0;
    o.lambda = 3.0;
    o.size = 0.25;
    const std::vector<ObjectiveVector> pts{o};
    CHECK(hypervolume(pts, 1.0) == doctest::Approx(2.0 * 3.0 * 0.75).epsilon(1e-15));
  }

  TEST_CASE("matches inclusion-exclusion on random sets") {
    Rng rng(113);
    for (int trial = 0; trial < 300; ++trial) {
      std::vector<ObjectiveVector> pts(1 + rng.below(10));
      for (auto& p : pts) p = random_point(rng);
      if (trial % 3 == 0) pts.push_back(pts.front());  // duplicates
      const double expected = oracle::inclusion_exclusion_hypervolume(pts, 1.0);
      CHECK(hypervolume(pts, 1.0) == doctest::Approx(expected).epsilon(1e-10));
    }
  }

  TEST_CASE("adding a point never lowers the volume") {
    Rng rng(127);
    std::vector<ObjectiveVector> pts;
    double last = 0.0;
    for (int i = 0; i < 100; ++i) {
      pts.push_back(random_point(rng));
      const double hv = hypervolume(pts, 1.0);
      CHECK(hv >= last);
      last = hv;
    }
  }
}

TEST_SUITE("select_survivors") {
  TEST_CASE("keeps exactly the target and every non-dominated member when it fits") {
    Rng rng(131);
    for (int trial = 0; trial < 20; ++trial) {
      std::vector<Individual> pool(40);
      for (auto& ind : pool) {
        ind.objectives = random_point(rng);
        ind.objectives.hover_class = rng.below(2) == 0 ? HoverClass::Static : HoverClass::Spinning;
        for (double& g : ind.genotype.genes) g = rng.uniform(-1.0, 1.0);
      }
      std::vector<Individual> copy = pool;
      const auto fronts = fast_non_dominated_sort(copy);
      const auto next = select_survivors(pool, 20);
      REQUIRE(next.size() == 20);
      if (fronts[0].size() <= 20) {
        for (const std::size_t i : fronts[0]) {
          const bool kept = std::any_of(next.begin(), next.end(), [&](const Individual& s) {
            return s.genotype == pool[i].genotype;
          });
          CHECK(kept);
        }
      }
    }
  }

  TEST_CASE("splitting front is truncated by descending crowding") {
    std::vector<Individual> pool(6);
    // All mutually non-dominated on a line alpha + lambda = 10.
    const double alphas[] = {0.0, 1.0, 1.5, 5.0, 9.0, 10.0};
    for (std::size_t i = 0; i < 6; ++i) {
      pool[i].objectives.alpha = alphas[i];
      pool[i].objectives.lambda = 10.0 - alphas[i];
      pool[i].objectives.size = 0.1;
      pool[i].genotype.genes[0] = static_cast<double>(i) / 10.0;
    }
    const auto next = select_survivors(pool, 4);
    REQUIRE(next.size() == 4);
    std::vector<double> kept;
    for (const auto& s : next) kept.push_back(s.objectives.alpha);
    std::sort(kept.begin(), kept.end());
    // Boundaries are infinite; 5.0 has the widest gap (9 - 1.5).
    CHECK(kept == std::vector<double>{0.0, 5.0, 9.0, 10.0});
  }
}

TEST_SUITE("evolve") {
  TEST_CASE("zero generations returns the evaluated initial population") {
    const RunRecord r = evolve(small_config(12, 0));
    CHECK(r.generations.empty());
    CHECK(r.population.size() == 12);
    CHECK_FALSE(r.front.empty());
    for (const auto& ind : r.population) CHECK(ind.rank >= 0);
    CHECK(r.initial.generation == 0);
  }

  TEST_CASE("population size, validity and elitism across a short run") {
    const RunRecord r = evolve(small_config(20, 6));
    REQUIRE(r.generations.size() == 6);
    CHECK(r.population.size() == 20);
    for (const auto& ind : r.population) CHECK(is_valid(ind.genotype));
    double last = r.initial.hypervolume;
    for (const auto& s : r.generations) {
      CHECK(s.hypervolume >= last);
      last = s.hypervolume;
      std::size_t hist = 0;
      for (auto c : s.prop_histogram) hist += c;
      CHECK(hist == 20);
    }
    for (const std::size_t i : r.front) CHECK(r.population[i].rank == 0);
  }

  TEST_CASE("same seed is bit-identical, other seeds differ") {
    const RunRecord a = evolve(small_config(16, 4, 9));
    const RunRecord b = evolve(small_config(16, 4, 9));
    CHECK(same_individuals(a.population, b.population));
    CHECK(a.generations == b.generations);
    CHECK(a.front == b.front);
    const RunRecord c = evolve(small_config(16, 4, 10));
    CHECK_FALSE(same_individuals(a.population, c.population));
  }

  TEST_CASE("worker count does not change the result") {
    EvolutionConfig one = small_config(16, 3, 21);
    EvolutionConfig many = one;
    many.threads = 6;
    const RunRecord a = evolve(one);
    const RunRecord b = evolve(many);
    CHECK(same_individuals(a.population, b.population));
    CHECK(a.generations == b.generations);
  }

  TEST_CASE("progress callback sees every generation") {
    std::vector<std::size_t> seen;
    evolve(small_config(8, 3), [&](const GenerationStats& s) { seen.push_back(s.generation); });
    CHECK(seen == std::vector<std::size_t>{1, 2, 3});
  }
}
