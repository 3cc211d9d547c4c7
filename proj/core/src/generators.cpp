#include "cinet/generators.hpp"

#include <algorithm>
#include <string>

#include "cinet/error.hpp"
#include "cinet/ordering.hpp"

namespace cinet {

double uniform_unit(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

std::vector<double> random_distribution(std::mt19937_64& rng, std::size_t k) {
  std::vector<double> p(k);
  double sum = 0.0;
  for (double& x : p) {
    x = 0.05 + uniform_unit(rng);
    sum += x;
  }
  for (double& x : p) x /= sum;
  return p;
}

namespace {

std::vector<std::string> labels(std::size_t k) {
  if (k == 2) return {"false", "true"};
  std::vector<std::string> out;
  for (std::size_t s = 0; s < k; ++s) out.push_back("s" + std::to_string(s));
  return out;
}

CauseLink random_link(std::mt19937_64& rng, VarId cause, std::size_t kc, std::size_t ke) {
  CauseLink link{cause, 0, {}};
  for (State c = 0; c < kc; ++c) {
    if (c == link.distinguished) {
      for (State e = 0; e < ke; ++e) link.transition.push_back(e == 0 ? 1.0 : 0.0);
      continue;
    }
    auto row = random_distribution(rng, ke);
    link.transition.insert(link.transition.end(), row.begin(), row.end());
  }
  return link;
}

TabularCPD random_cpd(std::mt19937_64& rng, const Network& net, VarId child, std::vector<VarId> parents) {
  TabularCPD cpd{child, std::move(parents), {}};
  const std::size_t rows = product_of_cardinalities(net, cpd.parents);
  for (std::size_t r = 0; r < rows; ++r) {
    auto row = random_distribution(rng, net.cardinality(child));
    cpd.table.insert(cpd.table.end(), row.begin(), row.end());
  }
  return cpd;
}

}  // namespace

Network make_bn2(std::size_t states, std::uint64_t seed) {
  if (states < 2) throw Error("invalid_argument", "bn2 needs at least two states");
  std::mt19937_64 rng(seed);
  Network net;
  for (int i = 1; i <= 10; ++i) net.add_variable({"c" + std::to_string(i), labels(states)});
  for (int j = 1; j <= 4; ++j) net.add_variable({"e" + std::to_string(j), labels(states)});
  for (VarId c = 0; c < 10; ++c) net.set_prior(c, random_distribution(rng, states));
  for (std::size_t j = 0; j < 4; ++j) {
    CIFamily fam;
    fam.effect = 10 + j;
    fam.baseline = 0;
    fam.combiner = states == 2 ? CombinationFunction::logical_or() : CombinationFunction::max();
    for (VarId c : {VarId{2 * j}, VarId{2 * j + 1}, VarId{8}, VarId{9}})
      fam.links.push_back(random_link(rng, c, states, states));
    net.set_family(fam.effect, std::move(fam));
  }
  return net;
}

Network make_fig6(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  Network net;
  for (const char* name : {"c1", "c2", "c3", "e1", "e2"}) net.add_variable({name, labels(2)});
  for (VarId c = 0; c < 3; ++c) net.set_prior(c, random_distribution(rng, 2));
  for (VarId e : {VarId{3}, VarId{4}}) {
    CIFamily fam{e, 0, {}, CombinationFunction::logical_or(), std::nullopt};
    for (VarId c = 0; c < 3; ++c) fam.links.push_back(random_link(rng, c, 2, 2));
    net.set_family(e, std::move(fam));
  }
  return net;
}

Network make_chain(std::size_t n, std::uint64_t seed) {
  if (n < 1) throw Error("invalid_argument", "chain needs at least one variable");
  std::mt19937_64 rng(seed);
  Network net;
  for (std::size_t i = 1; i <= n; ++i) net.add_variable({"a" + std::to_string(i), labels(2)});
  net.set_prior(0, random_distribution(rng, 2));
  for (VarId v = 1; v < n; ++v) net.set_family(v, random_cpd(rng, net, v, {v - 1}));
  return net;
}

Network make_random(std::size_t n, double p, std::uint64_t seed) {
  if (n < 1) throw Error("invalid_argument", "random network needs at least one variable");
  if (!(p >= 0.0 && p <= 1.0)) throw Error("invalid_argument", "edge probability must lie in [0,1]");
  std::mt19937_64 rng(seed);
  Network net;
  for (std::size_t i = 0; i < n; ++i)
    net.add_variable({"v" + std::to_string(i), labels(2 + uniform_index(rng, 2))});
  for (VarId v = 0; v < n; ++v) {
    std::vector<VarId> parents;
    for (VarId u = 0; u < v; ++u)
      if (parents.size() < 3 && uniform_unit(rng) < p) parents.push_back(u);
    if (parents.size() >= 2 && uniform_unit(rng) < 0.5) {
      CIFamily fam{v, 0, {}, CombinationFunction::max(), std::nullopt};
      for (VarId u : parents) fam.links.push_back(random_link(rng, u, net.cardinality(u), net.cardinality(v)));
      net.set_family(v, std::move(fam));
    } else {
      net.set_family(v, random_cpd(rng, net, v, std::move(parents)));
    }
  }
  return net;
}

Network make_noisy_or_pair(double q1, double q2, std::vector<double> prior1, std::vector<double> prior2) {
  Network net;
  const VarId c1 = net.add_variable({"c1", {"false", "true"}});
  const VarId c2 = net.add_variable({"c2", {"false", "true"}});
  const VarId e = net.add_variable({"e", {"false", "true"}});
  net.set_prior(c1, std::move(prior1));
  net.set_prior(c2, std::move(prior2));
  CIFamily fam{e, 0, {}, CombinationFunction::logical_or(), std::nullopt};
  fam.links.push_back({c1, 0, {1.0, 0.0, 1.0 - q1, q1}});
  fam.links.push_back({c2, 0, {1.0, 0.0, 1.0 - q2, q2}});
  net.set_family(e, std::move(fam));
  return net;
}

}  // namespace cinet
