#include "cinet/semantics.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <unordered_map>

#include "cinet/error.hpp"

namespace cinet {

namespace {

std::size_t checked_pow(std::size_t base, std::size_t exp) {
  std::size_t out = 1;
  for (std::size_t i = 0; i < exp; ++i) {
    if (base != 0 && out > SIZE_MAX / base) throw Error("overflow", "table size overflows");
    out *= base;
  }
  return out;
}

// Folds the family's combiner over a full argument tuple (leak first).
class FamilyCombiner {
 public:
  FamilyCombiner(const CIFamily& family, std::size_t k) : family_(family) {
    if (family.combiner.is_binary()) table_ = family.combiner.binary_table(k);
  }

  State operator()(std::span<const State> args) const {
    if (!family_.combiner.is_binary()) return family_.combiner.arbitrary_table()(args);
    State acc = family_.baseline;
    for (State a : args) acc = table_(a, acc);
    return acc;
  }

 private:
  const CIFamily& family_;
  BinaryTable table_;
};

}  // namespace

TabularCPD expand_to_cpd(const Network& net, const CIFamily& family) {
  const std::size_t k = net.cardinality(family.effect);
  if (!family.combiner.is_binary() && family.combiner.arbitrary_table().arity != family.arity())
    throw Error("arity_mismatch", "combiner table arity does not match the family's causes");

  const FamilyCombiner combine(family, k);
  const std::vector<VarId> causes = family.causes();
  const std::size_t rows = product_of_cardinalities(net, causes);
  const std::size_t n_args = family.arity();
  const std::size_t offset = family.leak ? 1 : 0;

  TabularCPD cpd{family.effect, causes, std::vector<double>(rows * k, 0.0)};
  std::vector<std::span<const double>> dists(n_args);
  std::vector<State> cause_state(causes.size(), 0);
  std::vector<State> args(n_args, 0);

  for (std::size_t r = 0; r < rows; ++r) {
    std::size_t rem = r;
    for (std::size_t i = causes.size(); i-- > 0;) {
      const std::size_t kc = net.cardinality(causes[i]);
      cause_state[i] = rem % kc;
      rem /= kc;
    }
    if (family.leak) dists[0] = *family.leak;
    for (std::size_t i = 0; i < causes.size(); ++i)
      dists[offset + i] = family.links[i].row(cause_state[i], k);

    std::span<double> out(cpd.table.data() + r * k, k);
    // Depth-first walk over every joint assignment of the summaries.
    auto walk = [&](auto&& self, std::size_t depth, double weight) -> void {
      if (depth == n_args) {
        out[combine(args)] += weight;
        return;
      }
      for (State s = 0; s < k; ++s) {
        const double p = dists[depth][s];
        if (p == 0.0) continue;
        args[depth] = s;
        self(self, depth + 1, weight * p);
      }
    };
    if (n_args == 0)
      out[family.baseline] = 1.0;
    else
      walk(walk, 0, 1.0);
  }
  return cpd;
}

FunctionTable family_function_table(const Network& net, const CIFamily& family) {
  const std::size_t k = net.cardinality(family.effect);
  if (!family.combiner.is_binary()) return family.combiner.arbitrary_table();
  const std::size_t n = family.arity();
  FunctionTable t{k, n, std::vector<State>(checked_pow(k, n))};
  const FamilyCombiner combine(family, k);
  std::vector<State> args(n, 0);
  for (std::size_t idx = 0; idx < t.cells.size(); ++idx) {
    std::size_t rem = idx;
    for (std::size_t i = n; i-- > 0;) {
      args[i] = rem % k;
      rem /= k;
    }
    t.cells[idx] = combine(args);
  }
  return t;
}

State Decomposition::evaluate(std::span<const State> args) const {
  State e = first[args[ordering[0]]];
  for (std::size_t i = 1; i < ordering.size(); ++i) e = stages[i - 1](args[ordering[i]], e);
  return e;
}

namespace {

void require_permutation(std::span<const std::size_t> ordering, std::size_t n) {
  std::vector<bool> seen(n, false);
  if (ordering.size() != n) throw Error("invalid_ordering", "ordering length differs from arity");
  for (std::size_t p : ordering) {
    if (p >= n || seen[p]) throw Error("invalid_ordering", "ordering is not a permutation");
    seen[p] = true;
  }
}

// f re-indexed so that argument ordering[0] is the most significant digit.
std::vector<State> permuted_cells(const FunctionTable& f, std::span<const std::size_t> ordering) {
  const std::size_t n = f.arity;
  const std::size_t k = f.states;
  std::vector<State> out(f.cells.size());
  std::vector<std::size_t> weight(n);
  for (std::size_t p = 0; p < n; ++p) weight[p] = checked_pow(k, n - 1 - p);
  for (std::size_t t = 0; t < out.size(); ++t) {
    std::size_t rem = t;
    std::size_t original = 0;
    for (std::size_t i = n; i-- > 0;) {
      original += (rem % k) * weight[ordering[i]];
      rem /= k;
    }
    out[t] = f.cells[original];
  }
  return out;
}

std::size_t repeated_digit(State digit, std::size_t count, std::size_t k) {
  std::size_t idx = 0;
  for (std::size_t i = 0; i < count; ++i) idx = idx * k + digit;
  return idx;
}

}  // namespace

std::optional<Decomposition> decompose_for_ordering(const FunctionTable& f,
                                                    std::span<const std::size_t> ordering,
                                                    State baseline) {
  const std::size_t n = f.arity;
  const std::size_t k = f.states;
  if (n == 0) throw Error("invalid_argument", "function has no arguments");
  if (baseline >= k) throw Error("invalid_argument", "baseline is not an effect state");
  require_permutation(ordering, n);

  const std::vector<State> g = permuted_cells(f, ordering);
  std::vector<std::vector<State>> anchors(n + 1);
  for (std::size_t i = 1; i <= n; ++i) {
    const std::size_t block = checked_pow(k, n - i);
    const std::size_t rest = repeated_digit(baseline, n - i, k);
    const std::size_t prefixes = checked_pow(k, i);
    auto& anchor = anchors[i];
    anchor.resize(prefixes);
    for (std::size_t p = 0; p < prefixes; ++p) anchor[p] = g[p * block + rest];
    if (i == n) break;
    // f must factor through the anchor: equal anchors, equal completions.
    std::vector<std::size_t> representative(k, SIZE_MAX);
    for (std::size_t p = 0; p < prefixes; ++p) {
      std::size_t& rep = representative[anchor[p]];
      if (rep == SIZE_MAX) {
        rep = p;
        continue;
      }
      if (!std::equal(g.begin() + p * block, g.begin() + (p + 1) * block,
                      g.begin() + rep * block))
        return std::nullopt;
    }
  }

  Decomposition d;
  d.ordering.assign(ordering.begin(), ordering.end());
  d.first = anchors[1];
  for (std::size_t i = 2; i <= n; ++i) {
    BinaryTable stage{k, std::vector<State>(k * k, baseline)};
    std::vector<bool> defined(k * k, false);
    for (std::size_t p = 0; p < anchors[i - 1].size(); ++p) {
      const State y = anchors[i - 1][p];
      for (State x = 0; x < k; ++x) {
        stage.at(x, y) = anchors[i][p * k + x];
        defined[x * k + y] = true;
      }
    }
    d.stages.push_back(std::move(stage));
    d.defined.push_back(std::move(defined));
  }
  return d;
}

std::string class_name(ClassTag tag) {
  switch (tag) {
    case ClassTag::GeneralTable: return "general multiple cause interaction";
    case ClassTag::CausalInputsOnly: return "independence of causal inputs";
    case ClassTag::SinglyDecomposable: return "singly decomposable";
    case ClassTag::FullyDecomposable: return "fully decomposable";
    case ClassTag::FullyDecomposableEqual: return "fully decomposable with equal functions";
    case ClassTag::ContinuousLinear: return "continuous linear (unsupported)";
  }
  return "unknown";
}

AlgebraLaws check_commutative_associative(const BinaryTable& f) {
  const std::size_t k = f.states;
  AlgebraLaws laws{true, true};
  for (State x = 0; x < k && laws.commutative; ++x)
    for (State y = 0; y < k; ++y)
      if (f(x, y) != f(y, x)) {
        laws.commutative = false;
        break;
      }
  for (State a = 0; a < k && laws.associative; ++a)
    for (State b = 0; b < k && laws.associative; ++b)
      for (State c = 0; c < k; ++c)
        if (f(f(a, b), c) != f(a, f(b, c))) {
          laws.associative = false;
          break;
        }
  return laws;
}

bool check_identity(const BinaryTable& f, State baseline, bool claimed_commutative) {
  for (State x = 0; x < f.states; ++x) {
    if (f(x, baseline) != x) return false;
    if (claimed_commutative && f(baseline, x) != x) return false;
  }
  return true;
}

namespace {

constexpr int kUnknown = -1;

// A binary table where only some cells are pinned by witness chains.
struct PartialTable {
  std::size_t k = 0;
  std::vector<int> cells;

  int get(State x, State y) const { return cells[x * k + y]; }
};

bool consistent_with(const PartialTable& partial, const BinaryTable& full) {
  for (std::size_t i = 0; i < partial.cells.size(); ++i)
    if (partial.cells[i] != kUnknown && static_cast<State>(partial.cells[i]) != full.cells[i])
      return false;
  return true;
}

bool laws_hold(const BinaryTable& t) {
  auto laws = check_commutative_associative(t);
  return laws.commutative && laws.associative;
}

bool partial_laws_hold(const PartialTable& p) {
  const std::size_t k = p.k;
  for (State x = 0; x < k; ++x)
    for (State y = 0; y < k; ++y) {
      int a = p.get(x, y), b = p.get(y, x);
      if (a != kUnknown && b != kUnknown && a != b) return false;
    }
  for (State a = 0; a < k; ++a)
    for (State b = 0; b < k; ++b) {
      int ab = p.get(a, b);
      if (ab == kUnknown) continue;
      for (State c = 0; c < k; ++c) {
        int bc = p.get(b, c);
        if (bc == kUnknown) continue;
        int left = p.get(static_cast<State>(ab), c);
        int right = p.get(a, static_cast<State>(bc));
        if (left != kUnknown && right != kUnknown && left != right) return false;
      }
    }
  return true;
}

std::vector<std::pair<std::string, BinaryTable>> named_candidates(std::size_t k) {
  std::vector<std::pair<std::string, BinaryTable>> out;
  if (k == 2) out.emplace_back("or", CombinationFunction::logical_or().binary_table(k));
  out.emplace_back("max", CombinationFunction::max().binary_table(k));
  out.emplace_back("sum", CombinationFunction::saturating_sum().binary_table(k));
  out.emplace_back("xor", CombinationFunction::xor_().binary_table(k));
  for (State c = 0; c < k; ++c) out.emplace_back("constant", BinaryTable{k, std::vector<State>(k * k, c)});
  return out;
}

std::string name_of(const BinaryTable& t) {
  for (auto& [name, candidate] : named_candidates(t.states))
    if (candidate == t) return name;
  return "table";
}

// Completes the partial table into a commutative, associative total table,
// preferring the named operations, then a bounded lexicographic search.
std::optional<BinaryTable> complete_f_star(PartialTable partial) {
  for (auto& [name, candidate] : named_candidates(partial.k))
    if (consistent_with(partial, candidate) && laws_hold(candidate)) return candidate;
  if (!partial_laws_hold(partial)) return std::nullopt;

  std::vector<std::size_t> open;
  for (std::size_t i = 0; i < partial.cells.size(); ++i)
    if (partial.cells[i] == kUnknown) open.push_back(i);

  std::size_t budget = 200000;
  auto search = [&](auto&& self, std::size_t idx) -> bool {
    if (budget-- == 0) return false;
    if (idx == open.size()) return true;
    for (State v = 0; v < partial.k; ++v) {
      partial.cells[open[idx]] = static_cast<int>(v);
      if (partial_laws_hold(partial) && self(self, idx + 1)) return true;
    }
    partial.cells[open[idx]] = kUnknown;
    return false;
  };
  if (!search(search, 0)) return std::nullopt;
  BinaryTable out{partial.k, std::vector<State>(partial.cells.size())};
  for (std::size_t i = 0; i < out.cells.size(); ++i) out.cells[i] = static_cast<State>(partial.cells[i]);
  return out;
}

// Whether f factors through its anchors on argument subsets, computed once
// per subset so that every ordering reuses the same verdicts.
class SubsetAnalysis {
 public:
  SubsetAnalysis(const FunctionTable& f, State baseline)
      : f_(f), n_(f.arity), k_(f.states), baseline_(baseline) {
    weight_.resize(n_);
    for (std::size_t p = 0; p < n_; ++p) weight_[p] = checked_pow(k_, n_ - 1 - p);
    const std::size_t subsets = std::size_t{1} << n_;
    good_.assign(subsets, false);
    good_[subsets - 1] = true;
    for (std::size_t mask = 1; mask + 1 < subsets; ++mask) good_[mask] = factors(mask);
  }

  bool good(std::size_t mask) const { return good_[mask]; }

  bool decomposable(std::span<const std::size_t> ordering) const {
    std::size_t mask = 0;
    for (std::size_t i = 0; i + 1 < ordering.size(); ++i) {
      mask |= std::size_t{1} << ordering[i];
      if (!good_[mask]) return false;
    }
    return true;
  }

  // Constraints f*(x, y) = z implied by stages that extend `mask` by `next`.
  void collect_stage(std::size_t mask, std::size_t next, PartialTable& partial, bool& conflict) const {
    const auto positions = members(mask);
    const std::size_t keys = checked_pow(k_, positions.size());
    const std::size_t wider = mask | (std::size_t{1} << next);
    const std::size_t rest_narrow = baseline_offset(mask);
    const std::size_t rest_wide = baseline_offset(wider);
    for (std::size_t key = 0; key < keys; ++key) {
      const std::size_t base = key_offset(positions, key);
      const State y = f_.cells[base + rest_narrow];
      for (State x = 0; x < k_; ++x) {
        const State z = f_.cells[base + x * weight_[next] + rest_wide];
        int& cell = partial.cells[x * k_ + y];
        if (cell == kUnknown)
          cell = static_cast<int>(z);
        else if (cell != static_cast<int>(z))
          conflict = true;
      }
    }
  }

 private:
  std::vector<std::size_t> members(std::size_t mask) const {
    std::vector<std::size_t> out;
    for (std::size_t p = 0; p < n_; ++p)
      if (mask & (std::size_t{1} << p)) out.push_back(p);
    return out;
  }

  std::size_t key_offset(const std::vector<std::size_t>& positions, std::size_t key) const {
    std::size_t off = 0;
    for (std::size_t i = positions.size(); i-- > 0;) {
      off += (key % k_) * weight_[positions[i]];
      key /= k_;
    }
    return off;
  }

  std::size_t baseline_offset(std::size_t mask) const {
    std::size_t off = 0;
    for (std::size_t p = 0; p < n_; ++p)
      if (!(mask & (std::size_t{1} << p))) off += baseline_ * weight_[p];
    return off;
  }

  bool factors(std::size_t mask) const {
    const auto inside = members(mask);
    const auto outside = members(~mask & ((std::size_t{1} << n_) - 1));
    const std::size_t keys = checked_pow(k_, inside.size());
    const std::size_t completions = checked_pow(k_, outside.size());
    std::vector<std::size_t> key_off(keys), comp_off(completions);
    for (std::size_t key = 0; key < keys; ++key) key_off[key] = key_offset(inside, key);
    for (std::size_t c = 0; c < completions; ++c) comp_off[c] = key_offset(outside, c);
    const std::size_t rest = baseline_offset(mask);

    std::vector<std::size_t> representative(k_, SIZE_MAX);
    for (std::size_t key = 0; key < keys; ++key) {
      const State anchor = f_.cells[key_off[key] + rest];
      std::size_t& rep = representative[anchor];
      if (rep == SIZE_MAX) {
        rep = key;
        continue;
      }
      for (std::size_t c = 0; c < completions; ++c)
        if (f_.cells[key_off[key] + comp_off[c]] != f_.cells[key_off[rep] + comp_off[c]])
          return false;
    }
    return true;
  }

  const FunctionTable& f_;
  std::size_t n_, k_;
  State baseline_;
  std::vector<std::size_t> weight_;
  std::vector<bool> good_;
};

}  // namespace

InteractionClass classify(const FunctionTable& f, State baseline) {
  const std::size_t n = f.arity;
  const std::size_t k = f.states;
  if (n == 0) throw Error("invalid_argument", "function has no arguments");
  if (n > kMaxClassifyArity)
    throw Error("too_many_arguments", "classification is limited to " +
                                          std::to_string(kMaxClassifyArity) + " arguments");
  if (baseline >= k) throw Error("invalid_argument", "baseline is not an effect state");
  if (f.cells.size() != checked_pow(k, n))
    throw Error("invalid_argument", "function table is not total");

  const SubsetAnalysis analysis(f, baseline);
  InteractionClass out;
  std::optional<std::vector<std::size_t>> first_witness;

  std::vector<std::size_t> ordering(n);
  std::iota(ordering.begin(), ordering.end(), 0);
  auto visit = [&](const std::vector<std::size_t>& sigma) {
    ++out.orderings_checked;
    if (!analysis.decomposable(sigma)) return;
    ++out.orderings_decomposable;
    if (!first_witness || sigma < *first_witness) first_witness = sigma;
  };

  if (n <= kExhaustiveOrderingLimit) {
    do visit(ordering);
    while (std::next_permutation(ordering.begin(), ordering.end()));
  } else {
    out.sampled = true;
    std::mt19937_64 rng(0x5eed0fc1u);
    visit(ordering);
    for (std::size_t s = 1; s < kSampledOrderings; ++s) {
      std::shuffle(ordering.begin(), ordering.end(), rng);
      visit(ordering);
    }
  }

  if (!first_witness) {
    out.tag = ClassTag::CausalInputsOnly;
    return out;
  }
  out.witness = decompose_for_ordering(f, *first_witness, baseline);
  if (out.orderings_decomposable < out.orderings_checked) {
    out.tag = ClassTag::SinglyDecomposable;
    return out;
  }
  out.tag = ClassTag::FullyDecomposable;

  // Every stage i >= 2 of every ordering extends a prefix set by one position.
  PartialTable partial{k, std::vector<int>(k * k, kUnknown)};
  bool conflict = false;
  const std::size_t full = (std::size_t{1} << n) - 1;
  for (std::size_t mask = 1; mask < full && !conflict; ++mask) {
    if (!analysis.good(mask)) continue;
    for (std::size_t next = 0; next < n && !conflict; ++next) {
      const std::size_t bit = std::size_t{1} << next;
      if ((mask & bit) || !analysis.good(mask | bit)) continue;
      analysis.collect_stage(mask, next, partial, conflict);
    }
  }
  if (conflict) return out;
  if (auto f_star = complete_f_star(partial)) {
    out.tag = ClassTag::FullyDecomposableEqual;
    out.f_star_name = name_of(*f_star);
    out.f_star = std::move(*f_star);
  }
  return out;
}

InteractionClass classify_family(const Network& net, VarId v) {
  const CIFamily* ci = net.ci_family(v);
  if (!ci) return InteractionClass{};
  if (ci->arity() == 0) throw Error("invalid_argument", "family has no causes");
  return classify(family_function_table(net, *ci), ci->baseline);
}

}  // namespace cinet
