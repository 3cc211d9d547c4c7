#include "cinet/transform.hpp"

#include <algorithm>
#include <numeric>
#include <set>

#include "cinet/error.hpp"
#include "cinet/semantics.hpp"

namespace cinet {

ExpansionStyle parse_style(std::string_view name) {
  if (name == "collapsed") return ExpansionStyle::Collapsed;
  if (name == "epsilon") return ExpansionStyle::ExplicitEpsilon;
  if (name == "temporal") return ExpansionStyle::TemporalChain;
  throw Error("usage", "unknown expansion style '" + std::string(name) + "'");
}

std::string style_name(ExpansionStyle style) {
  switch (style) {
    case ExpansionStyle::Collapsed: return "collapsed";
    case ExpansionStyle::ExplicitEpsilon: return "epsilon";
    case ExpansionStyle::TemporalChain: return "temporal";
  }
  return "unknown";
}

ExpansionPlan declaration_plan(const Network& net, ExpansionStyle style) {
  ExpansionPlan plan;
  for (VarId v : net.ci_effects()) {
    PlanEntry e{v, std::vector<std::size_t>(net.ci_family(v)->links.size()), style};
    std::iota(e.ordering.begin(), e.ordering.end(), 0);
    plan.entries.push_back(std::move(e));
  }
  return plan;
}

std::string chain_node_name(std::string_view effect, std::size_t position) {
  return std::string(effect) + ".__e" + std::to_string(position);
}

std::string summary_node_name(std::string_view effect, std::size_t position) {
  return std::string(effect) + ".__ep" + std::to_string(position);
}

std::string mechanism_node_name(std::string_view effect, std::size_t position) {
  return std::string(effect) + ".__eps" + std::to_string(position);
}

namespace {

// The chain a family unrolls into: a seed distribution for the value before
// the first cause, then one stage per cause in chain order.
struct Chain {
  std::vector<double> seed;
  std::vector<BinaryTable> stages;
};

std::vector<double> point_mass(std::size_t k, State s) {
  std::vector<double> out(k, 0.0);
  out[s] = 1.0;
  return out;
}

Chain build_chain(const Network& net, const CIFamily& family,
                  const std::vector<std::size_t>& ordering) {
  const std::size_t k = net.cardinality(family.effect);
  const std::size_t n = family.links.size();
  Chain chain;

  bool named = family.combiner.is_binary();
  if (named) {
    BinaryTable f = family.combiner.binary_table(k);
    auto laws = check_commutative_associative(f);
    std::vector<std::size_t> identity(n);
    std::iota(identity.begin(), identity.end(), 0);
    if ((laws.commutative && laws.associative) || ordering == identity) {
      if (family.leak) {
        chain.seed.assign(k, 0.0);
        for (State l = 0; l < k; ++l) chain.seed[f(l, family.baseline)] += (*family.leak)[l];
      } else {
        chain.seed = point_mass(k, family.baseline);
      }
      chain.stages.assign(n, f);
      return chain;
    }
  }

  // Anchor decomposition of the full function table; the leak stays first.
  const FunctionTable table = family_function_table(net, family);
  std::vector<std::size_t> args;
  const std::size_t offset = family.leak ? 1 : 0;
  if (family.leak) args.push_back(0);
  for (std::size_t i : ordering) args.push_back(i + offset);
  auto d = decompose_for_ordering(table, args, family.baseline);
  if (!d)
    throw Error("not_decomposable",
                "combiner of '" + net.variable(family.effect).name +
                    "' has no nested decomposition for the requested ordering");
  if (family.leak) {
    chain.seed.assign(k, 0.0);
    for (State l = 0; l < k; ++l) chain.seed[d->first[l]] += (*family.leak)[l];
    chain.stages = d->stages;
  } else {
    chain.seed = point_mass(k, family.baseline);
    BinaryTable first{k, std::vector<State>(k * k)};
    for (State x = 0; x < k; ++x)
      for (State y = 0; y < k; ++y) first.at(x, y) = d->first[x];
    chain.stages.push_back(std::move(first));
    chain.stages.insert(chain.stages.end(), d->stages.begin(), d->stages.end());
  }
  return chain;
}

std::vector<double> deterministic_table(const BinaryTable& stage) {
  const std::size_t k = stage.states;
  std::vector<double> t(k * k * k, 0.0);
  for (State x = 0; x < k; ++x)
    for (State y = 0; y < k; ++y) t[(x * k + y) * k + stage(x, y)] = 1.0;
  return t;
}

// p(e_1 | x) with the seed marginalized.
std::vector<double> seeded_table(const BinaryTable& stage, const std::vector<double>& seed) {
  const std::size_t k = stage.states;
  std::vector<double> t(k * k, 0.0);
  for (State x = 0; x < k; ++x)
    for (State s = 0; s < k; ++s) t[x * k + stage(x, s)] += seed[s];
  return t;
}

// Minimal mechanism alphabet: the cells of the common refinement of every
// row's cumulative distribution.
struct Mechanism {
  std::vector<double> prior;
  std::vector<State> response;  // [cause state][cell] -> effect state
};

Mechanism build_mechanism(const CauseLink& link, std::size_t cause_card, std::size_t k) {
  std::vector<std::vector<double>> cumulative(cause_card, std::vector<double>(k));
  std::vector<double> cuts{0.0, 1.0};
  for (State c = 0; c < cause_card; ++c) {
    double acc = 0.0;
    auto row = link.row(c, k);
    for (State e = 0; e < k; ++e) {
      acc += row[e];
      cumulative[c][e] = acc;
      if (e + 1 < k) cuts.push_back(std::clamp(acc, 0.0, 1.0));
    }
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  Mechanism m;
  std::vector<double> mids;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    if (cuts[i + 1] <= cuts[i]) continue;
    m.prior.push_back(cuts[i + 1] - cuts[i]);
    mids.push_back(0.5 * (cuts[i] + cuts[i + 1]));
  }
  m.response.resize(cause_card * mids.size());
  for (State c = 0; c < cause_card; ++c) {
    auto row = link.row(c, k);
    State last_positive = 0;
    for (State e = 0; e < k; ++e)
      if (row[e] > 0.0) last_positive = e;
    for (std::size_t u = 0; u < mids.size(); ++u) {
      State pick = last_positive;
      for (State e = 0; e < k; ++e)
        if (cumulative[c][e] > mids[u]) {
          pick = e;
          break;
        }
      m.response[c * mids.size() + u] = pick;
    }
  }
  return m;
}

}  // namespace

Network expand_family(const Network& net, const PlanEntry& entry) {
  const CIFamily* found = net.ci_family(entry.effect);
  if (!found)
    throw Error("invalid_plan", "variable '" + net.variable(entry.effect).name +
                                    "' does not carry a causal-independence family");
  const CIFamily family = *found;
  const std::size_t n = family.links.size();
  {
    std::vector<std::size_t> sorted = entry.ordering;
    std::sort(sorted.begin(), sorted.end());
    std::vector<std::size_t> expected(n);
    std::iota(expected.begin(), expected.end(), 0);
    if (sorted != expected)
      throw Error("invalid_plan", "ordering for '" + net.variable(entry.effect).name +
                                      "' is not a permutation of its links");
  }

  const Variable effect_var = net.variable(entry.effect);
  const std::string prefix = effect_var.name + ".__";
  for (const auto& v : net.variables())
    if (v.name.compare(0, prefix.size(), prefix) == 0)
      throw Error("name_collision", "variable '" + v.name + "' collides with expansion names");

  const std::size_t k = effect_var.cardinality();
  const Chain chain = build_chain(net, family, entry.ordering);

  Network out = net;
  if (n == 0) {
    out.set_prior(entry.effect, chain.seed);
    return out;
  }

  auto new_node = [&](std::string name, std::vector<std::string> states) {
    return out.add_variable(Variable{std::move(name), std::move(states)});
  };

  VarId previous = 0;
  for (std::size_t j = 1; j <= n; ++j) {
    const CauseLink& link = family.links[entry.ordering[j - 1]];
    const BinaryTable& stage = chain.stages[j - 1];
    const std::size_t kc = net.cardinality(link.cause);

    // Node carrying the cause's contribution into the chain.
    std::optional<VarId> summary;
    if (entry.style == ExpansionStyle::Collapsed) {
      summary = new_node(summary_node_name(effect_var.name, j), effect_var.states);
      out.set_family(*summary, TabularCPD{*summary, {link.cause}, link.transition});
    } else if (entry.style == ExpansionStyle::ExplicitEpsilon) {
      const Mechanism m = build_mechanism(link, kc, k);
      std::vector<std::string> labels;
      for (std::size_t u = 0; u < m.prior.size(); ++u) labels.push_back("u" + std::to_string(u));
      const VarId eps = new_node(mechanism_node_name(effect_var.name, j), std::move(labels));
      out.set_prior(eps, m.prior);
      summary = new_node(summary_node_name(effect_var.name, j), effect_var.states);
      std::vector<double> g(kc * m.prior.size() * k, 0.0);
      for (State c = 0; c < kc; ++c)
        for (std::size_t u = 0; u < m.prior.size(); ++u)
          g[(c * m.prior.size() + u) * k + m.response[c * m.prior.size() + u]] = 1.0;
      out.set_family(*summary, TabularCPD{*summary, {link.cause, eps}, std::move(g)});
    }

    const VarId node = j == n ? entry.effect : new_node(chain_node_name(effect_var.name, j),
                                                        effect_var.states);
    TabularCPD cpd{node, {}, {}};
    if (summary) {
      if (j == 1) {
        cpd.parents = {*summary};
        cpd.table = seeded_table(stage, chain.seed);
      } else {
        cpd.parents = {*summary, previous};
        cpd.table = deterministic_table(stage);
      }
    } else {
      // Temporal chain: fold p(e'|c) into the stage.
      if (j == 1) {
        cpd.parents = {link.cause};
        cpd.table.assign(kc * k, 0.0);
        for (State c = 0; c < kc; ++c) {
          auto row = link.row(c, k);
          for (State x = 0; x < k; ++x)
            for (State s = 0; s < k; ++s) cpd.table[c * k + stage(x, s)] += row[x] * chain.seed[s];
        }
      } else {
        cpd.parents = {link.cause, previous};
        cpd.table.assign(kc * k * k, 0.0);
        for (State c = 0; c < kc; ++c) {
          auto row = link.row(c, k);
          for (State y = 0; y < k; ++y)
            for (State x = 0; x < k; ++x) cpd.table[(c * k + y) * k + stage(x, y)] += row[x];
        }
      }
    }
    out.set_family(node, std::move(cpd));
    previous = node;
  }
  return out;
}

Network transform_network(const Network& net, const ExpansionPlan& plan) {
  std::set<VarId> seen;
  for (const auto& e : plan.entries)
    if (!seen.insert(e.effect).second)
      throw Error("invalid_plan", "plan names '" + net.variable(e.effect).name + "' twice");
  Network out = net;
  for (const auto& e : plan.entries) out = expand_family(out, e);
  return out;
}

}  // namespace cinet
