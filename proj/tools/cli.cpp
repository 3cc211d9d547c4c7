#include "cli.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "cinet/error.hpp"
#include "cinet/generators.hpp"
#include "cinet/inference.hpp"
#include "cinet/io.hpp"
#include "cinet/ordering.hpp"
#include "cinet/semantics.hpp"
#include "cinet/transform.hpp"

namespace cinet::cli {

namespace {

struct Options {
  std::string in;
  std::string out;
  std::vector<std::string> order;
  std::string style = "collapsed";
  std::string heuristic = "min-fill";
  std::vector<std::string> evidence;
  std::string query;
  std::size_t k = 200;
  std::size_t restarts = 20;
  std::optional<std::uint64_t> seed;
  std::size_t states = 2;
  std::string network;
  std::size_t n = 8;
  double p = 0.3;
};

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream is(text);
  while (std::getline(is, item, sep))
    if (!item.empty()) out.push_back(item);
  return out;
}

class Runner {
 public:
  Runner(const Options& opt, std::istream& in, std::ostream& out) : opt_(opt), in_(in), out_(out) {}

  Json read_document() {
    Json doc;
    try {
      if (opt_.in.empty() || opt_.in == "-") {
        doc = Json::parse(in_);
      } else {
        std::ifstream file(opt_.in);
        if (!file) throw Error("file_not_found", "cannot open '" + opt_.in + "'");
        doc = Json::parse(file);
      }
    } catch (const Json::exception& e) {
      throw Error("parse_error", std::string("input is not valid JSON: ") + e.what());
    }
    return doc;
  }

  Network read() { return network_from_json(read_document()); }

  void emit(const Json& doc) {
    const std::string text = doc.dump(2) + "\n";
    if (opt_.out.empty() || opt_.out == "-") {
      out_ << text;
      return;
    }
    std::ofstream file(opt_.out);
    if (!file) throw Error("io_error", "cannot write '" + opt_.out + "'");
    file << text;
  }

  std::uint64_t seed() const {
    if (!opt_.seed) throw Error("usage", "this command requires --seed");
    return *opt_.seed;
  }

  bool validate_cmd() {
    const auto report = validate(read());
    emit(validation_to_json(report));
    return report.ok();
  }

  void classify_cmd() {
    const Json doc = read_document();
    if (doc.is_object() && doc.contains("variables")) {
      const Network net = network_from_json(doc);
      require_valid(net);
      Json out = Json::object();
      for (VarId v : net.ci_effects())
        out[net.variable(v).name] = class_to_json(classify_family(net, v), net.variable(v).states);
      emit(canonical(out));
      return;
    }
    const FunctionDocument f = function_from_json(doc);
    emit(canonical(class_to_json(classify(f.table, f.baseline), f.states)));
  }

  void expand_cmd() {
    const Network net = read();
    require_valid(net);
    emit(network_to_json(expand_all(net)));
  }

  ExpansionPlan plan_for(const Network& net) {
    const ExpansionStyle style = parse_style(opt_.style);
    ExpansionPlan plan = declaration_plan(net, style);
    for (const auto& assignment : opt_.order) {
      const auto eq = assignment.find('=');
      if (eq == std::string::npos) throw Error("usage", "--order expects effect=i1,i2,...");
      const VarId effect = net.id(assignment.substr(0, eq));
      auto entry = std::find_if(plan.entries.begin(), plan.entries.end(),
                                [&](const PlanEntry& e) { return e.effect == effect; });
      if (entry == plan.entries.end())
        throw Error("invalid_plan", "'" + assignment.substr(0, eq) + "' has no causal-independence family");
      entry->ordering.clear();
      for (const auto& item : split(assignment.substr(eq + 1), ',')) {
        std::size_t index = 0;
        try {
          index = std::stoul(item);
        } catch (const std::exception&) {
          throw Error("usage", "--order indices must be positive integers");
        }
        if (index == 0) throw Error("usage", "--order indices start at 1");
        entry->ordering.push_back(index - 1);
      }
    }
    return plan;
  }

  void transform_cmd() {
    const Network net = read();
    require_valid(net);
    const Network out = transform_network(net, plan_for(net));
    require_valid(out);
    emit(network_to_json(out));
  }

  void stats_cmd() {
    const Network net = read();
    require_valid(net);
    emit(clique_report_to_json(net, clique_stats(net, parse_heuristic(opt_.heuristic))));
  }

  void infer_cmd() {
    const Network net = read();
    require_valid(net);
    if (opt_.query.empty()) throw Error("usage", "infer requires --query");
    Evidence evidence;
    for (const auto& group : opt_.evidence) {
      for (const auto& item : split(group, ',')) {
        const auto eq = item.find('=');
        if (eq == std::string::npos) throw Error("usage", "--evidence expects var=state");
        const VarId v = net.id(item.substr(0, eq));
        auto s = net.variable(v).state_index(item.substr(eq + 1));
        if (!s) throw Error("invalid_evidence", "unknown state '" + item.substr(eq + 1) + "'");
        evidence[v] = *s;
      }
    }
    const VarId q = net.id(opt_.query);
    const auto dist = posterior(net, evidence, q, parse_heuristic(opt_.heuristic));
    Json states = Json::object();
    for (State s = 0; s < dist.size(); ++s) states[net.variable(q).states[s]] = dist[s];
    emit(canonical(Json{{opt_.query, states}}));
  }

  void sample_cmd() {
    const Network net = read();
    emit(canonical(summary_to_json(net, sample_orderings(net, opt_.k, seed()))));
  }

  void search_cmd() {
    const Network net = read();
    const OrderingSample best = greedy_search(net, opt_.restarts, seed());
    Json report = clique_report_to_json(transform_network(net, best.plan), best.report);
    emit(canonical(Json{{"plan", plan_to_json(net, best.plan)}, {"report", report}}));
  }

  void gen_cmd() {
    Network net;
    if (opt_.network == "bn2")
      net = opt_.seed ? make_bn2(opt_.states, *opt_.seed) : make_bn2(opt_.states);
    else if (opt_.network == "fig6")
      net = opt_.seed ? make_fig6(*opt_.seed) : make_fig6();
    else if (opt_.network == "chain")
      net = opt_.seed ? make_chain(opt_.n, *opt_.seed) : make_chain(opt_.n);
    else if (opt_.network == "random")
      net = make_random(opt_.n, opt_.p, seed());
    else
      throw Error("usage", "unknown network '" + opt_.network + "'");
    emit(network_to_json(net));
  }

 private:
  const Options& opt_;
  std::istream& in_;
  std::ostream& out_;
};

void report_error(std::ostream& err, const std::string& kind, const std::string& message) {
  err << Json{{"error", {{"kind", kind}, {"message", message}}}}.dump() << '\n';
}

}  // namespace

int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out,
        std::ostream& err) {
  Options opt;
  CLI::App app{"Causal-independence belief network engine", "cinet"};
  app.require_subcommand(1);

  auto add_in = [&](CLI::App* sub) { sub->add_option("--in", opt.in, "Network file (default: stdin)"); };
  auto add_out = [&](CLI::App* sub) { sub->add_option("--out", opt.out, "Output file (default: stdout)"); };
  auto add_heuristic = [&](CLI::App* sub) {
    sub->add_option("--heuristic", opt.heuristic, "Triangulation heuristic")
        ->check(CLI::IsMember({"min-fill", "min-weight"}));
  };
  auto add_seed = [&](CLI::App* sub) { sub->add_option("--seed", opt.seed, "Random seed"); };

  auto* validate_cmd = app.add_subcommand("validate", "Check every structural invariant");
  add_in(validate_cmd);
  add_out(validate_cmd);

  auto* classify_cmd = app.add_subcommand("classify", "Place a combination function in the class hierarchy");
  add_in(classify_cmd);
  add_out(classify_cmd);

  auto* expand_cmd = app.add_subcommand("expand", "Replace every CI family by its full table");
  add_in(expand_cmd);
  add_out(expand_cmd);

  auto* transform_cmd = app.add_subcommand("transform", "Unroll CI families into decomposition chains");
  add_in(transform_cmd);
  add_out(transform_cmd);
  transform_cmd->add_option("--order", opt.order, "Chain ordering, effect=i1,i2,... (1-based)");
  transform_cmd->add_option("--style", opt.style, "Expansion style")
      ->check(CLI::IsMember({"collapsed", "epsilon", "temporal"}));

  auto* stats_cmd = app.add_subcommand("stats", "Clique statistics of the triangulated moral graph");
  add_in(stats_cmd);
  add_out(stats_cmd);
  add_heuristic(stats_cmd);

  auto* infer_cmd = app.add_subcommand("infer", "Exact posterior of one variable");
  add_in(infer_cmd);
  add_out(infer_cmd);
  add_heuristic(infer_cmd);
  infer_cmd->add_option("--evidence", opt.evidence, "Observations var=state[,...]");
  infer_cmd->add_option("--query", opt.query, "Query variable")->required();

  auto* sample_cmd = app.add_subcommand("sample", "Clique statistics over random expansion orderings");
  add_in(sample_cmd);
  add_out(sample_cmd);
  add_seed(sample_cmd);
  sample_cmd->add_option("--k", opt.k, "Number of sampled plans")->check(CLI::PositiveNumber);

  auto* search_cmd = app.add_subcommand("search", "Greedy clique-aware ordering search");
  add_in(search_cmd);
  add_out(search_cmd);
  add_seed(search_cmd);
  search_cmd->add_option("--restarts", opt.restarts, "Seeded restarts")->check(CLI::PositiveNumber);

  auto* gen_cmd = app.add_subcommand("gen", "Write a reference network");
  add_out(gen_cmd);
  add_seed(gen_cmd);
  gen_cmd->add_option("--network", opt.network, "bn2 | fig6 | chain | random")->required();
  gen_cmd->add_option("--states", opt.states, "State count for bn2")->check(CLI::Range(2, 64));
  gen_cmd->add_option("--n", opt.n, "Variable count for chain and random")->check(CLI::PositiveNumber);
  gen_cmd->add_option("--p", opt.p, "Edge probability for random")->check(CLI::Range(0.0, 1.0));

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    report_error(err, "usage", e.what());
    return 2;
  }

  Runner runner(opt, in, out);
  try {
    // Violations are reported as data; the exit code still flags them.
    if (validate_cmd->parsed()) return runner.validate_cmd() ? 0 : 1;
    if (classify_cmd->parsed()) runner.classify_cmd();
    if (expand_cmd->parsed()) runner.expand_cmd();
    if (transform_cmd->parsed()) runner.transform_cmd();
    if (stats_cmd->parsed()) runner.stats_cmd();
    if (infer_cmd->parsed()) runner.infer_cmd();
    if (sample_cmd->parsed()) runner.sample_cmd();
    if (search_cmd->parsed()) runner.search_cmd();
    if (gen_cmd->parsed()) runner.gen_cmd();
  } catch (const Error& e) {
    report_error(err, e.kind(), e.what());
    return e.kind() == "usage" ? 2 : 1;
  } catch (const std::exception& e) {
    report_error(err, "internal", e.what());
    return 1;
  }
  return 0;
}

}  // namespace cinet::cli
