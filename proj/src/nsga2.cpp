#include "morpho/nsga2.hpp"

#include <algorithm>
#include <array>
#include <limits>
#include <numeric>

namespace morpho {

int hover_tier(const ObjectiveVector& obj) {
  if (obj.invalid) return 3;
  switch (obj.hover_class) {
    case HoverClass::Static: return 0;
    case HoverClass::Spinning: return 1;
    case HoverClass::None: return 2;
  }
  return 2;
}

namespace {

bool pareto_dominates(const ObjectiveVector& a, const ObjectiveVector& b) {
  const bool no_worse = a.alpha >= b.alpha && a.lambda >= b.lambda && a.size <= b.size;
  const bool better = a.alpha > b.alpha || a.lambda > b.lambda || a.size < b.size;
  return no_worse && better;
}

}  // namespace

bool dominates(const ObjectiveVector& a, const ObjectiveVector& b) {
  const int ta = hover_tier(a);
  const int tb = hover_tier(b);
  if (ta != tb) return ta < tb;
  if (ta == 2 && a.hover_residual != b.hover_residual) {
    return a.hover_residual < b.hover_residual;
  }
  return pareto_dominates(a, b);
}

std::vector<std::vector<std::size_t>> fast_non_dominated_sort(std::span<Individual> pop) {
  const std::size_t n = pop.size();
  std::vector<std::vector<std::size_t>> dominated_by_me(n);
  std::vector<std::size_t> domination_count(n, 0);
  std::vector<std::vector<std::size_t>> fronts;
  std::vector<std::size_t> current;

  for (std::size_t p = 0; p < n; ++p) {
    for (std::size_t q = p + 1; q < n; ++q) {
      if (dominates(pop[p], pop[q])) {
        dominated_by_me[p].push_back(q);
        ++domination_count[q];
      } else if (dominates(pop[q], pop[p])) {
        dominated_by_me[q].push_back(p);
        ++domination_count[p];
      }
    }
  }
  for (std::size_t p = 0; p < n; ++p) {
    if (domination_count[p] == 0) current.push_back(p);
  }

  int rank = 0;
  while (!current.empty()) {
    std::vector<std::size_t> next;
    for (const std::size_t p : current) {
      pop[p].rank = rank;
      for (const std::size_t q : dominated_by_me[p]) {
        if (--domination_count[q] == 0) next.push_back(q);
      }
    }
    std::sort(next.begin(), next.end());
    fronts.push_back(std::move(current));
    current = std::move(next);
    ++rank;
  }
  return fronts;
}

void crowding_distance(std::span<Individual> pop, std::span<const std::size_t> front) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  for (const std::size_t i : front) pop[i].crowding = 0.0;
  if (front.size() <= 2) {
    for (const std::size_t i : front) pop[i].crowding = inf;
    return;
  }

  using Getter = double (*)(const ObjectiveVector&);
  constexpr std::array<Getter, 3> objectives{
      [](const ObjectiveVector& o) { return o.alpha; },
      [](const ObjectiveVector& o) { return o.lambda; },
      [](const ObjectiveVector& o) { return o.size; },
  };

  std::vector<std::size_t> order(front.begin(), front.end());
  for (const Getter get : objectives) {
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return get(pop[a].objectives) < get(pop[b].objectives);
    });
    pop[order.front()].crowding = inf;
    pop[order.back()].crowding = inf;
    const double range = get(pop[order.back()].objectives) - get(pop[order.front()].objectives);
    if (!(range > 0.0)) continue;
    for (std::size_t k = 1; k + 1 < order.size(); ++k) {
      const double gap =
          get(pop[order[k + 1]].objectives) - get(pop[order[k - 1]].objectives);
      pop[order[k]].crowding += gap / range;
    }
  }
}

std::size_t binary_tournament(std::span<const Individual> pop, Rng& rng) {
  const std::size_t a = rng.below(pop.size());
  const std::size_t b = rng.below(pop.size());
  if (pop[b].rank < pop[a].rank) return b;
  if (pop[b].rank == pop[a].rank && pop[b].crowding > pop[a].crowding) return b;
  return a;
}

std::pair<Genotype, Genotype> arithmetic_crossover(const Genotype& p1, const Genotype& p2,
                                                   Rng& rng) {
  std::pair<Genotype, Genotype> children;
  for (std::size_t i = 0; i < kGenotypeLength; ++i) {
    const double beta = rng.uniform();
    const double a = p1.genes[i];
    const double b = p2.genes[i];
    // Clamp guards the last ulp; the blend is already convex.
    children.first.genes[i] = std::clamp(beta * a + (1.0 - beta) * b, -1.0, 1.0);
    children.second.genes[i] = std::clamp((1.0 - beta) * a + beta * b, -1.0, 1.0);
  }
  return children;
}

Genotype mutate(Genotype g, double rate, double sigma, Rng& rng) {
  for (double& gene : g.genes) {
    if (rng.uniform() < rate) gene = std::clamp(gene + sigma * rng.normal(), -1.0, 1.0);
  }
  return g;
}

std::vector<std::vector<double>> latin_hypercube(std::size_t count, std::size_t dim, Rng& rng) {
  std::vector<std::vector<double>> samples(count, std::vector<double>(dim));
  std::vector<std::size_t> strata(count);
  const double width = 2.0 / static_cast<double>(count);
  for (std::size_t d = 0; d < dim; ++d) {
    std::iota(strata.begin(), strata.end(), std::size_t{0});
    rng.shuffle(strata.begin(), strata.end());
    for (std::size_t i = 0; i < count; ++i) {
      const double lo = -1.0 + width * static_cast<double>(strata[i]);
      samples[i][d] = std::min(1.0, lo + width * rng.uniform());
    }
  }
  return samples;
}

std::vector<Genotype> latin_hypercube_init(std::size_t pop_size, std::uint64_t seed) {
  Rng rng(stream_seed(seed, 0));
  const auto samples = latin_hypercube(pop_size, kGenotypeLength, rng);
  std::vector<Genotype> pop(pop_size);
  for (std::size_t i = 0; i < pop_size; ++i) {
    std::copy(samples[i].begin(), samples[i].end(), pop[i].genes.begin());
  }
  return pop;
}

}  // namespace morpho
