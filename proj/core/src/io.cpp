#include "cinet/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "cinet/error.hpp"

namespace cinet {

namespace {

[[noreturn]] void parse_fail(const std::string& message) { throw Error("parse_error", message); }

const Json& member(const Json& obj, const char* key) {
  if (!obj.is_object() || !obj.contains(key))
    parse_fail(std::string("missing key '") + key + "'");
  return obj.at(key);
}

VarId lookup(const Network& net, const Json& name) {
  if (!name.is_string()) parse_fail("variable reference must be a string");
  auto v = net.find(name.get<std::string>());
  if (!v) parse_fail("unknown variable '" + name.get<std::string>() + "'");
  return *v;
}

State state_of(const Variable& var, const Json& label) {
  if (label.is_number_unsigned()) {
    auto s = label.get<std::size_t>();
    if (s >= var.cardinality()) parse_fail("state index out of range for '" + var.name + "'");
    return s;
  }
  if (!label.is_string()) parse_fail("state must be a label or an index");
  auto s = var.state_index(label.get<std::string>());
  if (!s) parse_fail("unknown state '" + label.get<std::string>() + "' of '" + var.name + "'");
  return *s;
}

State state_in(const std::vector<std::string>& states, const Json& label) {
  return state_of(Variable{"function", states}, label);
}

std::vector<double> numbers(const Json& arr) {
  if (!arr.is_array()) parse_fail("expected an array of probabilities");
  std::vector<double> out;
  for (const auto& x : arr) {
    if (x.is_array()) {
      auto inner = numbers(x);
      out.insert(out.end(), inner.begin(), inner.end());
    } else if (x.is_number()) {
      out.push_back(x.get<double>());
    } else {
      parse_fail("expected a number");
    }
  }
  return out;
}

CombinationFunction combiner_from_json(const Json& j, const Variable& effect, std::size_t arity) {
  if (j.is_string()) {
    const auto name = j.get<std::string>();
    if (name == "or") return CombinationFunction::logical_or();
    if (name == "max") return CombinationFunction::max();
    if (name == "sum") return CombinationFunction::saturating_sum();
    if (name == "xor") return CombinationFunction::xor_();
    parse_fail("unknown combiner '" + name + "'");
  }
  const std::size_t k = effect.cardinality();
  if (j.is_object() && j.contains("binary_table")) {
    const auto& rows = j.at("binary_table");
    if (!rows.is_array()) parse_fail("binary_table must be a nested array");
    BinaryTable t{k, {}};
    for (const auto& row : rows) {
      if (!row.is_array()) parse_fail("binary_table rows must be arrays");
      for (const auto& cell : row) t.cells.push_back(state_of(effect, cell));
    }
    return CombinationFunction::binary(std::move(t));
  }
  if (j.is_object() && j.contains("table")) {
    FunctionTable t{k, j.value("arity", arity), {}};
    for (const auto& cell : j.at("table")) t.cells.push_back(state_of(effect, cell));
    return CombinationFunction::arbitrary(std::move(t));
  }
  parse_fail("unrecognized combiner encoding");
}

Json combiner_to_json(const CombinationFunction& f, const Variable& effect) {
  switch (f.kind()) {
    case CombinerKind::Binary: {
      const auto& t = f.custom_table();
      Json rows = Json::array();
      for (State x = 0; x < t.states; ++x) {
        Json row = Json::array();
        for (State y = 0; y < t.states; ++y) row.push_back(effect.states.at(t(x, y)));
        rows.push_back(row);
      }
      return Json{{"binary_table", rows}};
    }
    case CombinerKind::Arbitrary: {
      const auto& t = f.arbitrary_table();
      Json cells = Json::array();
      for (State s : t.cells) cells.push_back(effect.states.at(s));
      return Json{{"arity", t.arity}, {"table", cells}};
    }
    default: return f.name();
  }
}

}  // namespace

Json network_to_json(const Network& net) {
  Json doc;
  doc["variables"] = Json::array();
  doc["priors"] = Json::object();
  doc["tabular_families"] = Json::array();
  doc["ci_families"] = Json::array();
  for (const auto& v : net.variables()) doc["variables"].push_back({{"name", v.name}, {"states", v.states}});
  for (VarId v = 0; v < net.size(); ++v) {
    const auto& name = net.variable(v).name;
    if (const auto* t = net.tabular(v)) {
      if (t->parents.empty()) {
        doc["priors"][name] = t->table;
        continue;
      }
      Json parents = Json::array();
      for (VarId p : t->parents) parents.push_back(net.variable(p).name);
      doc["tabular_families"].push_back({{"child", name}, {"parents", parents}, {"table", t->table}});
    } else if (const auto* ci = net.ci_family(v)) {
      const Variable& effect = net.variable(v);
      Json links = Json::array();
      for (const auto& link : ci->links) {
        const Variable& cause = net.variable(link.cause);
        Json rows = Json::array();
        for (State s = 0; s < cause.cardinality(); ++s) {
          auto row = link.row(s, effect.cardinality());
          rows.push_back(std::vector<double>(row.begin(), row.end()));
        }
        links.push_back({{"cause", cause.name},
                         {"distinguished", cause.states.at(link.distinguished)},
                         {"transition", rows}});
      }
      Json fam{{"effect", name},
               {"baseline", effect.states.at(ci->baseline)},
               {"links", links},
               {"combiner", combiner_to_json(ci->combiner, effect)}};
      if (ci->leak) fam["leak"] = *ci->leak;
      doc["ci_families"].push_back(std::move(fam));
    }
  }
  return doc;
}

Network network_from_json(const Json& doc) {
  Network net;
  try {
    for (const auto& v : member(doc, "variables")) {
      Variable var{member(v, "name").get<std::string>(), {}};
      for (const auto& s : member(v, "states")) var.states.push_back(s.get<std::string>());
      if (net.find(var.name)) parse_fail("duplicate variable '" + var.name + "'");
      net.add_variable(std::move(var));
    }
    if (doc.contains("priors")) {
      const auto& priors = doc.at("priors");
      if (priors.is_object()) {
        for (const auto& [name, table] : priors.items()) {
          VarId v = lookup(net, Json(name));
          net.set_prior(v, numbers(table));
        }
      } else {
        for (const auto& p : priors) net.set_prior(lookup(net, member(p, "variable")), numbers(member(p, "table")));
      }
    }
    if (doc.contains("tabular_families")) {
      for (const auto& f : doc.at("tabular_families")) {
        TabularCPD cpd{lookup(net, member(f, "child")), {}, numbers(member(f, "table"))};
        for (const auto& p : member(f, "parents")) cpd.parents.push_back(lookup(net, p));
        net.set_family(cpd.child, std::move(cpd));
      }
    }
    if (doc.contains("ci_families")) {
      for (const auto& f : doc.at("ci_families")) {
        CIFamily fam;
        fam.effect = lookup(net, member(f, "effect"));
        const Variable& effect = net.variable(fam.effect);
        fam.baseline = state_of(effect, member(f, "baseline"));
        for (const auto& l : member(f, "links")) {
          CauseLink link;
          link.cause = lookup(net, member(l, "cause"));
          link.distinguished = state_of(net.variable(link.cause), member(l, "distinguished"));
          link.transition = numbers(member(l, "transition"));
          fam.links.push_back(std::move(link));
        }
        if (f.contains("leak") && !f.at("leak").is_null()) fam.leak = numbers(f.at("leak"));
        fam.combiner = combiner_from_json(member(f, "combiner"), effect, fam.arity());
        net.set_family(fam.effect, std::move(fam));
      }
    }
  } catch (const Json::exception& e) {
    parse_fail(std::string("malformed network document: ") + e.what());
  }
  return net;
}

Network read_network(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("file_not_found", "cannot open '" + path.string() + "'");
  Json doc;
  try {
    doc = Json::parse(in);
  } catch (const Json::exception& e) {
    parse_fail("'" + path.string() + "' is not valid JSON: " + e.what());
  }
  return network_from_json(doc);
}

void write_network(const Network& net, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error("io_error", "cannot write '" + path.string() + "'");
  out << network_to_json(net).dump(2) << '\n';
}

FunctionDocument function_from_json(const Json& doc) {
  FunctionDocument out;
  try {
    for (const auto& s : member(doc, "states")) out.states.push_back(s.get<std::string>());
    if (out.states.empty()) parse_fail("function needs at least one state");
    out.baseline = state_in(out.states, member(doc, "baseline"));
    const auto& cells = member(doc, "table");
    if (!cells.is_array()) parse_fail("table must be an array");
    out.table.states = out.states.size();
    for (const auto& c : cells) out.table.cells.push_back(state_in(out.states, c));
    if (doc.contains("arity")) {
      out.table.arity = doc.at("arity").get<std::size_t>();
    } else {
      std::size_t size = 1;
      while (size < out.table.cells.size() && out.table.states > 1) {
        size *= out.table.states;
        ++out.table.arity;
      }
    }
    std::size_t expected = 1;
    for (std::size_t i = 0; i < out.table.arity; ++i) expected *= out.table.states;
    if (out.table.arity == 0 || expected != out.table.cells.size())
      parse_fail("table is not total over states^arity");
  } catch (const Json::exception& e) {
    parse_fail(std::string("malformed function document: ") + e.what());
  }
  return out;
}

Json validation_to_json(const ValidationReport& report) {
  Json violations = Json::array();
  for (const auto& v : report.violations) violations.push_back({{"code", v.code}, {"message", v.message}});
  return {{"ok", report.ok()}, {"violations", violations}};
}

Json clique_report_to_json(const Network& net, const CliqueReport& report) {
  Json cliques = Json::array();
  for (const auto& c : report.cliques) {
    Json names = Json::array();
    for (VarId v : c) names.push_back(net.variable(v).name);
    cliques.push_back(names);
  }
  Json order = Json::array();
  for (VarId v : report.elimination_order) order.push_back(net.variable(v).name);
  return {{"largest", report.largest}, {"total", report.total}, {"cliques", cliques}, {"order", order}};
}

Json plan_to_json(const Network& net, const ExpansionPlan& plan) {
  Json out = Json::object();
  for (const auto& e : plan.entries) {
    const CIFamily* fam = net.ci_family(e.effect);
    Json order = Json::array(), causes = Json::array();
    for (std::size_t i : e.ordering) {
      order.push_back(i + 1);
      if (fam) causes.push_back(net.variable(fam->links.at(i).cause).name);
    }
    out[net.variable(e.effect).name] = {{"order", order}, {"causes", causes}, {"style", style_name(e.style)}};
  }
  return out;
}

Json summary_to_json(const Network& net, const SampleSummary& s) {
  Json histogram = Json::array();
  for (const auto& b : s.histogram) histogram.push_back(Json::array({b.lo, b.hi, b.count}));
  return {{"count", s.count},
          {"min_total", s.min_total},
          {"max_total", s.max_total},
          {"mean_total", s.mean_total},
          {"min_largest", s.min_largest},
          {"max_largest", s.max_largest},
          {"gain_ratio", s.gain_ratio()},
          {"histogram", histogram},
          {"best_plan", plan_to_json(net, s.best.plan)},
          {"best_report", {{"largest", s.best.report.largest}, {"total", s.best.report.total}}}};
}

Json binary_table_to_json(const BinaryTable& t, const std::vector<std::string>& states) {
  Json rows = Json::array();
  for (State x = 0; x < t.states; ++x) {
    Json row = Json::array();
    for (State y = 0; y < t.states; ++y) row.push_back(states.at(t(x, y)));
    rows.push_back(row);
  }
  return rows;
}

Json class_to_json(const InteractionClass& c, const std::vector<std::string>& states) {
  Json out{{"class", c.number()},
           {"name", class_name(c.tag)},
           {"sampled", c.sampled},
           {"orderings_checked", c.orderings_checked},
           {"orderings_decomposable", c.orderings_decomposable}};
  if (c.witness) {
    Json order = Json::array();
    for (std::size_t i : c.witness->ordering) order.push_back(i + 1);
    out["witness_ordering"] = order;
  }
  if (c.f_star)
    out["f_star"] = {{"name", c.f_star_name}, {"table", binary_table_to_json(*c.f_star, states)}};
  return out;
}

double round_significant(double value, int digits) {
  if (value == 0.0 || !std::isfinite(value)) return value;
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, value);
  return std::strtod(buf, nullptr);
}

Json canonical(Json doc) {
  if (doc.is_number_float()) return round_significant(doc.get<double>());
  if (doc.is_array() || doc.is_object())
    for (auto& x : doc) x = canonical(std::move(x));
  return doc;
}

}  // namespace cinet
