#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <variant>
#include <vector>

namespace cinet {

using VarId = std::size_t;
using State = std::size_t;

inline constexpr double kNormTolerance = 1e-9;

struct Variable {
  std::string name;
  std::vector<std::string> states;

  std::size_t cardinality() const { return states.size(); }
  std::optional<State> state_index(std::string_view label) const;
};

// Conditional table p(child | parents). Rows enumerate parent configurations
// with the last parent varying fastest; within a row the child state varies.
struct TabularCPD {
  VarId child = 0;
  std::vector<VarId> parents;
  std::vector<double> table;
};

// One cause of a causal-independence family. `transition` holds
// p(e' | cause) with one row per cause state over the effect's states.
struct CauseLink {
  VarId cause = 0;
  State distinguished = 0;
  std::vector<double> transition;

  std::span<const double> row(State cause_state, std::size_t effect_card) const {
    return std::span<const double>(transition).subspan(cause_state * effect_card, effect_card);
  }
};

// Total map (x, y) -> z over a k-state alphabet. x is the incoming cause
// summary, y the value accumulated so far.
struct BinaryTable {
  std::size_t states = 0;
  std::vector<State> cells;

  State operator()(State x, State y) const { return cells[x * states + y]; }
  State& at(State x, State y) { return cells[x * states + y]; }

  friend bool operator==(const BinaryTable&, const BinaryTable&) = default;
};

// Total map from an `arity`-tuple of effect states to an effect state, stored
// with the last argument varying fastest.
struct FunctionTable {
  std::size_t states = 0;
  std::size_t arity = 0;
  std::vector<State> cells;

  State operator()(std::span<const State> args) const;
  std::size_t size() const { return cells.size(); }

  friend bool operator==(const FunctionTable&, const FunctionTable&) = default;
};

enum class CombinerKind { Or, Max, Sum, Xor, Binary, Arbitrary };

class CombinationFunction {
 public:
  static CombinationFunction logical_or() { return CombinationFunction(CombinerKind::Or); }
  static CombinationFunction max() { return CombinationFunction(CombinerKind::Max); }
  // Sum saturating at the top state.
  static CombinationFunction saturating_sum() { return CombinationFunction(CombinerKind::Sum); }
  // Addition modulo the state count; plain xor on two states.
  static CombinationFunction xor_() { return CombinationFunction(CombinerKind::Xor); }
  static CombinationFunction binary(BinaryTable table);
  static CombinationFunction arbitrary(FunctionTable table);

  CombinerKind kind() const { return kind_; }
  bool is_binary() const { return kind_ != CombinerKind::Arbitrary; }
  std::string name() const;

  // The two-argument table f* on a `states`-sized alphabet. Binary kinds only.
  BinaryTable binary_table(std::size_t states) const;
  const FunctionTable& arbitrary_table() const { return arbitrary_; }
  const BinaryTable& custom_table() const { return custom_; }

 private:
  explicit CombinationFunction(CombinerKind kind) : kind_(kind) {}

  CombinerKind kind_ = CombinerKind::Or;
  BinaryTable custom_;
  FunctionTable arbitrary_;
};

// Causal-independence family: e = f(e'_1, ..., e'_n) with each e'_i drawn
// from its link's transition row and e_0 the value when every cause is at
// its distinguished state. An optional leak is an always-active extra cause
// folded in ahead of the links.
struct CIFamily {
  VarId effect = 0;
  State baseline = 0;
  std::vector<CauseLink> links;
  CombinationFunction combiner = CombinationFunction::logical_or();
  std::optional<std::vector<double>> leak;

  std::vector<VarId> causes() const;
  // Number of combiner arguments: links plus the leak when present.
  std::size_t arity() const { return links.size() + (leak ? 1 : 0); }
};

using Family = std::variant<TabularCPD, CIFamily>;

class Network {
 public:
  VarId add_variable(Variable v);
  void set_family(VarId v, Family f);
  void set_prior(VarId v, std::vector<double> probabilities);

  std::size_t size() const { return variables_.size(); }
  const Variable& variable(VarId v) const { return variables_.at(v); }
  const std::vector<Variable>& variables() const { return variables_; }
  std::size_t cardinality(VarId v) const { return variables_.at(v).cardinality(); }

  std::optional<VarId> find(std::string_view name) const;
  VarId id(std::string_view name) const;  // throws Error on unknown names

  const std::optional<Family>& family(VarId v) const { return families_.at(v); }
  const CIFamily* ci_family(VarId v) const;
  const TabularCPD* tabular(VarId v) const;
  std::vector<VarId> ci_effects() const;

  // Parents in the network's own structure (causes for CI families).
  std::vector<VarId> parents(VarId v) const;

 private:
  std::vector<Variable> variables_;
  std::vector<std::optional<Family>> families_;
  std::unordered_map<std::string, VarId> index_;
};

struct Violation {
  std::string code;
  std::string message;
};

struct ValidationReport {
  std::vector<Violation> violations;
  bool ok() const { return violations.empty(); }
};

ValidationReport validate(const Network& net);

// Throws Error("invalid_network") listing the first violations.
void require_valid(const Network& net);

enum class CountModel {
  FullTable,          // one free parameter per row entry of the full table
  TemporalChain,      // chain nodes e_i with parents (c_i, e_{i-1}) plus e_0
  CausalIndependence, // atemporal, combination function known, no leak
};

CountModel parse_count_model(std::string_view name);

// Free parameters for an n-cause interaction on k-state variables.
// Binary values are 2^n, 4n + 1 and n respectively; larger k generalizes to
// k^n (k-1), n k^2 (k-1) + (k-1) and n (k-1)^2.
std::uint64_t parameter_count(CountModel model, std::size_t n, std::size_t k);

std::size_t product_of_cardinalities(const Network& net, std::span<const VarId> vars);

}  // namespace cinet
