#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "morpho/objectives.hpp"
#include "morpho/phenotype.hpp"
#include "morpho/rng.hpp"

namespace morpho {

struct Individual {
  Genotype genotype;
  ObjectiveVector objectives;
  int rank = -1;          // set by fast_non_dominated_sort
  double crowding = 0.0;  // set by crowding_distance; may be +inf
};

/// Hover tier: 0 static, 1 spinning, 2 none, 3 invalid layout. Lower is better.
int hover_tier(const ObjectiveVector& obj);

/// Tiered domination. A better tier always dominates. Within a tier the
/// usual Pareto rule applies to (max alpha, max lambda, min size); in the
/// no-hover tier a strictly smaller hover residual decides first.
bool dominates(const ObjectiveVector& a, const ObjectiveVector& b);
inline bool dominates(const Individual& a, const Individual& b) {
  return dominates(a.objectives, b.objectives);
}

/// Deb's O(M N^2) sort. Writes `rank` on every individual and returns the
/// fronts as index lists, best first, each in ascending index order.
std::vector<std::vector<std::size_t>> fast_non_dominated_sort(std::span<Individual> pop);

/// Crowding distance over the members of one front.
void crowding_distance(std::span<Individual> pop, std::span<const std::size_t> front);

/// Two uniform picks; lower rank wins, then larger crowding, then the first pick.
std::size_t binary_tournament(std::span<const Individual> pop, Rng& rng);

/// Per-gene blend with an independent beta ~ U(0,1) for every gene.
std::pair<Genotype, Genotype> arithmetic_crossover(const Genotype& p1, const Genotype& p2,
                                                   Rng& rng);

/// Each gene with probability `rate` gets N(0, sigma^2) noise, then is
/// clipped back to [-1, 1].
Genotype mutate(Genotype g, double rate, double sigma, Rng& rng);

/// Latin hypercube sample of `count` points in [-1,1]^dim.
std::vector<std::vector<double>> latin_hypercube(std::size_t count, std::size_t dim, Rng& rng);

/// Initial population: a Latin hypercube over the full genotype.
std::vector<Genotype> latin_hypercube_init(std::size_t pop_size, std::uint64_t seed);

}  // namespace morpho
