#include "cinet/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <sstream>

#include "cinet/error.hpp"

namespace cinet {

std::optional<State> Variable::state_index(std::string_view label) const {
  for (State s = 0; s < states.size(); ++s)
    if (states[s] == label) return s;
  return std::nullopt;
}

State FunctionTable::operator()(std::span<const State> args) const {
  std::size_t index = 0;
  for (State a : args) index = index * states + a;
  return cells[index];
}

CombinationFunction CombinationFunction::binary(BinaryTable table) {
  CombinationFunction f(CombinerKind::Binary);
  f.custom_ = std::move(table);
  return f;
}

CombinationFunction CombinationFunction::arbitrary(FunctionTable table) {
  CombinationFunction f(CombinerKind::Arbitrary);
  f.arbitrary_ = std::move(table);
  return f;
}

std::string CombinationFunction::name() const {
  switch (kind_) {
    case CombinerKind::Or: return "or";
    case CombinerKind::Max: return "max";
    case CombinerKind::Sum: return "sum";
    case CombinerKind::Xor: return "xor";
    case CombinerKind::Binary: return "binary_table";
    case CombinerKind::Arbitrary: return "table";
  }
  return "unknown";
}

BinaryTable CombinationFunction::binary_table(std::size_t k) const {
  if (kind_ == CombinerKind::Arbitrary)
    throw Error("invalid_combiner", "arbitrary table has no binary form");
  if (kind_ == CombinerKind::Binary) return custom_;
  BinaryTable t{k, std::vector<State>(k * k)};
  for (State x = 0; x < k; ++x) {
    for (State y = 0; y < k; ++y) {
      switch (kind_) {
        case CombinerKind::Or:
        case CombinerKind::Max: t.at(x, y) = std::max(x, y); break;
        case CombinerKind::Sum: t.at(x, y) = std::min(x + y, k - 1); break;
        case CombinerKind::Xor: t.at(x, y) = (x + y) % k; break;
        default: break;
      }
    }
  }
  return t;
}

std::vector<VarId> CIFamily::causes() const {
  std::vector<VarId> out;
  out.reserve(links.size());
  for (const auto& l : links) out.push_back(l.cause);
  return out;
}

VarId Network::add_variable(Variable v) {
  VarId id = variables_.size();
  index_.emplace(v.name, id);
  variables_.push_back(std::move(v));
  families_.emplace_back();
  return id;
}

void Network::set_family(VarId v, Family f) { families_.at(v) = std::move(f); }

void Network::set_prior(VarId v, std::vector<double> probabilities) {
  set_family(v, TabularCPD{v, {}, std::move(probabilities)});
}

std::optional<VarId> Network::find(std::string_view name) const {
  auto it = index_.find(std::string(name));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

VarId Network::id(std::string_view name) const {
  auto v = find(name);
  if (!v) throw Error("unknown_variable", "unknown variable '" + std::string(name) + "'");
  return *v;
}

const CIFamily* Network::ci_family(VarId v) const {
  const auto& f = families_.at(v);
  return f ? std::get_if<CIFamily>(&*f) : nullptr;
}

const TabularCPD* Network::tabular(VarId v) const {
  const auto& f = families_.at(v);
  return f ? std::get_if<TabularCPD>(&*f) : nullptr;
}

std::vector<VarId> Network::ci_effects() const {
  std::vector<VarId> out;
  for (VarId v = 0; v < size(); ++v)
    if (ci_family(v)) out.push_back(v);
  return out;
}

std::vector<VarId> Network::parents(VarId v) const {
  if (const auto* t = tabular(v)) return t->parents;
  if (const auto* ci = ci_family(v)) return ci->causes();
  return {};
}

std::size_t product_of_cardinalities(const Network& net, std::span<const VarId> vars) {
  std::size_t p = 1;
  for (VarId v : vars) p *= net.cardinality(v);
  return p;
}

namespace {

class Checker {
 public:
  explicit Checker(const Network& net) : net_(net) {}

  ValidationReport run() {
    check_variables();
    for (VarId v = 0; v < net_.size(); ++v) {
      const auto& fam = net_.family(v);
      const std::string& name = net_.variable(v).name;
      if (!fam) {
        add("missing_family", "variable '" + name + "' has no family or prior");
        continue;
      }
      if (const auto* t = std::get_if<TabularCPD>(&*fam))
        check_tabular(v, *t);
      else
        check_ci(v, std::get<CIFamily>(*fam));
    }
    if (references_ok_) check_acyclic();
    return std::move(report_);
  }

 private:
  void add(std::string code, std::string message) {
    report_.violations.push_back({std::move(code), std::move(message)});
  }

  bool resolves(VarId v) const { return v < net_.size(); }

  void check_variables() {
    std::set<std::string> names;
    for (const auto& var : net_.variables()) {
      if (!names.insert(var.name).second)
        add("duplicate_variable", "variable name '" + var.name + "' is not unique");
      if (var.states.empty())
        add("empty_state_space", "variable '" + var.name + "' has no states");
      std::set<std::string> labels(var.states.begin(), var.states.end());
      if (labels.size() != var.states.size())
        add("duplicate_state", "variable '" + var.name + "' repeats a state label");
    }
  }

  void check_distribution(std::span<const double> row, const std::string& where) {
    double sum = 0.0;
    bool in_range = true;
    for (double p : row) {
      if (!(p >= -kNormTolerance && p <= 1.0 + kNormTolerance)) in_range = false;
      sum += p;
    }
    if (!in_range) add("probability_out_of_range", where + ": probability outside [0,1]");
    if (std::abs(sum - 1.0) > kNormTolerance) {
      std::ostringstream os;
      os << where << ": row not normalized (sum " << sum << ")";
      add("row_not_normalized", os.str());
    }
  }

  void check_tabular(VarId v, const TabularCPD& t) {
    const std::string& name = net_.variable(v).name;
    if (t.child != v) add("family_mismatch", "family of '" + name + "' names another child");
    std::set<VarId> seen;
    for (VarId p : t.parents) {
      if (!resolves(p)) {
        add("unresolved_reference", "parent of '" + name + "' does not resolve");
        references_ok_ = false;
        return;
      }
      if (p == v) add("self_parent", "'" + name + "' lists itself as a parent");
      if (!seen.insert(p).second) add("duplicate_parent", "'" + name + "' repeats a parent");
    }
    const std::size_t k = net_.cardinality(v);
    const std::size_t rows = product_of_cardinalities(net_, t.parents);
    if (t.table.size() != rows * k) {
      add("table_size", "table of '" + name + "' has " + std::to_string(t.table.size()) +
                            " entries, expected " + std::to_string(rows * k));
      return;
    }
    for (std::size_t r = 0; r < rows; ++r)
      check_distribution(std::span<const double>(t.table).subspan(r * k, k),
                         "'" + name + "' row " + std::to_string(r));
  }

  void check_ci(VarId v, const CIFamily& ci) {
    const std::string& name = net_.variable(v).name;
    const std::size_t k = net_.cardinality(v);
    if (ci.effect != v) add("family_mismatch", "family of '" + name + "' names another effect");
    if (ci.baseline >= k) add("baseline_range", "baseline of '" + name + "' is not a state");
    std::set<VarId> seen;
    for (std::size_t i = 0; i < ci.links.size(); ++i) {
      const CauseLink& link = ci.links[i];
      const std::string where = "'" + name + "' link " + std::to_string(i);
      if (!resolves(link.cause)) {
        add("unresolved_reference", where + ": cause does not resolve");
        references_ok_ = false;
        continue;
      }
      if (link.cause == v) add("self_parent", where + ": effect lists itself as a cause");
      if (!seen.insert(link.cause).second) add("duplicate_cause", where + ": cause repeated");
      const std::size_t kc = net_.cardinality(link.cause);
      if (link.distinguished >= kc)
        add("distinguished_range", where + ": distinguished state out of range");
      if (link.transition.size() != kc * k) {
        add("transition_size", where + ": transition must be " + std::to_string(kc) + "x" +
                                   std::to_string(k));
        continue;
      }
      for (State s = 0; s < kc; ++s)
        check_distribution(link.row(s, k), where + " cause state " + std::to_string(s));
      if (link.distinguished < kc && ci.baseline < k) {
        auto row = link.row(link.distinguished, k);
        for (State e = 0; e < k; ++e) {
          const double expected = e == ci.baseline ? 1.0 : 0.0;
          if (std::abs(row[e] - expected) > kNormTolerance) {
            add("distinguished_row",
                where + ": distinguished row must be point mass on baseline");
            break;
          }
        }
      }
    }
    if (ci.leak) {
      if (ci.leak->size() != k)
        add("leak_size", "leak of '" + name + "' must cover the effect's states");
      else
        check_distribution(*ci.leak, "'" + name + "' leak");
    }
    check_combiner(name, ci, k);
  }

  void check_combiner(const std::string& name, const CIFamily& ci, std::size_t k) {
    const auto& f = ci.combiner;
    const std::string where = "combiner of '" + name + "'";
    switch (f.kind()) {
      case CombinerKind::Or:
        if (k != 2) add("combiner_domain", where + ": or needs a binary effect");
        break;
      case CombinerKind::Binary: {
        const auto& t = f.custom_table();
        if (t.states != k || t.cells.size() != k * k)
          add("combiner_domain", where + ": binary table must be " + std::to_string(k) + "x" +
                                     std::to_string(k));
        else if (std::any_of(t.cells.begin(), t.cells.end(), [k](State s) { return s >= k; }))
          add("combiner_closure", where + ": binary table leaves the effect state space");
        break;
      }
      case CombinerKind::Arbitrary: {
        const auto& t = f.arbitrary_table();
        if (t.arity != ci.arity())
          add("combiner_arity", where + ": table arity " + std::to_string(t.arity) +
                                    " does not match " + std::to_string(ci.arity()) +
                                    " arguments");
        std::size_t expected = 1;
        for (std::size_t i = 0; i < t.arity; ++i) expected *= k;
        if (t.states != k || t.cells.size() != expected)
          add("combiner_domain", where + ": table is not total over the effect states");
        else if (std::any_of(t.cells.begin(), t.cells.end(), [k](State s) { return s >= k; }))
          add("combiner_closure", where + ": table leaves the effect state space");
        break;
      }
      default: break;
    }
  }

  void check_acyclic() {
    // Kahn's algorithm over parent lists.
    const std::size_t n = net_.size();
    std::vector<std::vector<VarId>> children(n);
    std::vector<std::size_t> indegree(n, 0);
    for (VarId v = 0; v < n; ++v) {
      for (VarId p : net_.parents(v)) {
        if (p >= n) return;
        children[p].push_back(v);
        ++indegree[v];
      }
    }
    std::vector<VarId> ready;
    for (VarId v = 0; v < n; ++v)
      if (indegree[v] == 0) ready.push_back(v);
    std::size_t visited = 0;
    while (!ready.empty()) {
      VarId v = ready.back();
      ready.pop_back();
      ++visited;
      for (VarId c : children[v])
        if (--indegree[c] == 0) ready.push_back(c);
    }
    if (visited != n) add("cycle", "network graph contains a directed cycle");
  }

  const Network& net_;
  ValidationReport report_;
  bool references_ok_ = true;
};

}  // namespace

ValidationReport validate(const Network& net) { return Checker(net).run(); }

void require_valid(const Network& net) {
  auto report = validate(net);
  if (report.ok()) return;
  std::string message = "network failed validation: " + report.violations.front().message;
  if (report.violations.size() > 1)
    message += " (+" + std::to_string(report.violations.size() - 1) + " more)";
  throw Error("invalid_network", message);
}

CountModel parse_count_model(std::string_view name) {
  if (name == "full" || name == "class1") return CountModel::FullTable;
  if (name == "temporal") return CountModel::TemporalChain;
  if (name == "atemporal" || name == "class5") return CountModel::CausalIndependence;
  throw Error("unsupported_model", "unsupported class descriptor '" + std::string(name) + "'");
}

namespace {

std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b) {
  if (b != 0 && a > std::numeric_limits<std::uint64_t>::max() / b)
    throw Error("overflow", "parameter count does not fit in 64 bits");
  return a * b;
}

std::uint64_t checked_add(std::uint64_t a, std::uint64_t b) {
  if (a > std::numeric_limits<std::uint64_t>::max() - b)
    throw Error("overflow", "parameter count does not fit in 64 bits");
  return a + b;
}

}  // namespace

std::uint64_t parameter_count(CountModel model, std::size_t n, std::size_t k) {
  if (n < 1) throw Error("invalid_argument", "parameter_count needs at least one cause");
  if (k < 2) throw Error("invalid_argument", "parameter_count needs at least two states");
  const std::uint64_t free_per_row = k - 1;
  switch (model) {
    case CountModel::FullTable: {
      std::uint64_t rows = 1;
      for (std::size_t i = 0; i < n; ++i) rows = checked_mul(rows, k);
      return checked_mul(rows, free_per_row);
    }
    case CountModel::TemporalChain:
      return checked_add(checked_mul(checked_mul(n, k * k), free_per_row), free_per_row);
    case CountModel::CausalIndependence:
      return checked_mul(n, free_per_row * free_per_row);
  }
  throw Error("unsupported_model", "unsupported class descriptor");
}

}  // namespace cinet
