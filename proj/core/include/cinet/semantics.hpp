#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cinet/model.hpp"

namespace cinet {

// Exact p(effect | causes) for a causal-independence family, by enumerating
// every joint assignment of the cause summaries (and the leak draw). Parents
// of the result are the link causes in declaration order.
TabularCPD expand_to_cpd(const Network& net, const CIFamily& family);

// The family's combination function written out as a table over all of its
// arguments (leak first when present). Named binary combiners are folded
// left to right starting from the baseline.
FunctionTable family_function_table(const Network& net, const CIFamily& family);

// Nested decomposition of f along one argument ordering. The chain value
// after i arguments is the anchor f(prefix, e0, ..., e0); stage i maps
// (next argument, previous chain value) to the next chain value.
struct Decomposition {
  std::vector<std::size_t> ordering;
  std::vector<State> first;          // chain value after the first argument
  std::vector<BinaryTable> stages;   // stages for arguments 2..n
  std::vector<std::vector<bool>> defined;  // reachable (x, y) cells per stage

  // Folds the chain over arguments given in the function's own positions.
  State evaluate(std::span<const State> args) const;
};

std::optional<Decomposition> decompose_for_ordering(const FunctionTable& f,
                                                    std::span<const std::size_t> ordering,
                                                    State baseline);

enum class ClassTag {
  GeneralTable = 1,
  CausalInputsOnly = 2,
  SinglyDecomposable = 3,
  FullyDecomposable = 4,
  FullyDecomposableEqual = 5,
  ContinuousLinear = 6,
};

struct InteractionClass {
  ClassTag tag = ClassTag::GeneralTable;
  std::optional<Decomposition> witness;  // classes 3-5
  std::optional<BinaryTable> f_star;     // class 5
  std::string f_star_name;               // "or", "max", "sum", "xor", "constant" or "table"
  bool sampled = false;                  // orderings were sampled, not enumerated
  std::uint64_t orderings_checked = 0;
  std::uint64_t orderings_decomposable = 0;

  int number() const { return static_cast<int>(tag); }
};

std::string class_name(ClassTag tag);

inline constexpr std::size_t kMaxClassifyArity = 12;
inline constexpr std::size_t kExhaustiveOrderingLimit = 8;
inline constexpr std::size_t kSampledOrderings = 1000;

InteractionClass classify(const FunctionTable& f, State baseline);

// Classification of a variable's family inside a network: tabular families
// are class 1, CI families are classified through their function table.
InteractionClass classify_family(const Network& net, VarId v);

struct AlgebraLaws {
  bool commutative = false;
  bool associative = false;
};

AlgebraLaws check_commutative_associative(const BinaryTable& f);

// Right identity f(x, e0) = x; additionally left identity when the caller
// claims f is commutative.
bool check_identity(const BinaryTable& f, State baseline, bool claimed_commutative);

}  // namespace cinet
