#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "cinet/model.hpp"

namespace cinet {

// Ten causes c1..c10 and four effects e1..e4; e_j has causes
// (c_{2j-1}, c_{2j}, c9, c10). Binary networks use noisy-or, larger state
// spaces noisy-max. Probabilities are drawn from `seed`.
Network make_bn2(std::size_t states = 2, std::uint64_t seed = 1994);

// Causes c1, c2, c3 shared by two noisy-or effects e1 and e2.
Network make_fig6(std::uint64_t seed = 6);

// Binary chain a1 -> a2 -> ... -> an.
Network make_chain(std::size_t n, std::uint64_t seed = 7);

// Random DAG over n variables with 2-3 states; each earlier variable becomes
// a parent with probability p (at most three parents). Multi-parent nodes
// are noisy-max families half of the time.
Network make_random(std::size_t n, double p, std::uint64_t seed);

// Two binary causes with noisy-or strengths q1, q2 and optional leak mass on
// "true". Cause priors put all mass on "false" unless given.
Network make_noisy_or_pair(double q1, double q2, std::vector<double> prior1 = {1.0, 0.0},
                           std::vector<double> prior2 = {1.0, 0.0});

double uniform_unit(std::mt19937_64& rng);
std::vector<double> random_distribution(std::mt19937_64& rng, std::size_t k);

}  // namespace cinet
