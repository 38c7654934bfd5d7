#include "cli.hpp"

#include <CLI11.hpp>
#include <array>
#include <iostream>
#include <iterator>
#include <sstream>

#include "namelogic/decision.hpp"
#include "namelogic/equivalence.hpp"
#include "namelogic/error.hpp"
#include "namelogic/kripke.hpp"
#include "namelogic/model_io.hpp"
#include "namelogic/neighborhood.hpp"

namespace namelogic::cli {

namespace {

struct Options {
  bool pretty = false;
  std::string model, model1, model2;
  std::string state, state1, state2;
  std::string formula;
  std::string bounds = "2,2";
  bool oracle = false;
  bool distinguish = false;
  std::string to;
  std::string mode = "lenient";
  RandomModelParams random;
  std::string random_mode = "general";
  std::string props = "p,q";
  std::size_t samples = 1000;
  std::uint64_t seed = 0;
};

class Invocation {
 public:
  Invocation(const Options& o, std::istream& in, std::ostream& out)
      : o_(o), in_(in), out_(out) {}

  void emit(const Json& j) const { out_ << (o_.pretty ? j.dump(2) : j.dump()) << '\n'; }

  Formula formula() const {
    if (o_.formula == "-") {
      std::string text{std::istreambuf_iterator<char>(in_), std::istreambuf_iterator<char>()};
      return parse_formula(text);
    }
    return parse_formula(o_.formula);
  }

  BruteForceBounds bounds() const {
    BruteForceBounds b;
    const auto comma = o_.bounds.find(',');
    try {
      if (comma == std::string::npos) throw std::invalid_argument("comma");
      b.max_states = std::stoul(o_.bounds.substr(0, comma));
      b.max_agents = std::stoul(o_.bounds.substr(comma + 1));
    } catch (const std::logic_error&) {
      throw Error("--bounds expects STATES,AGENTS, got '" + o_.bounds + "'");
    }
    return b;
  }

  int check() const {
    const KripkeModel m = kripke_from_json(load_json_file(o_.model));
    const TruthResult r = namelogic::check(m, o_.state, formula());
    Json j;
    j["value"] = r.value;
    if (r.witness) {
      j["witness"] = {{"agents", r.witness->agents}, {"path", r.witness->path}};
    } else {
      j["witness"] = nullptr;
    }
    emit(j);
    return r.value ? 0 : 1;
  }

  int sat() const {
    const Formula f = formula();
    const SatResult r = o_.oracle ? bounded_sat(f, bounds()) : satisfiable(f);
    emit(to_json(r));
    return r.verdict == Verdict::Sat ? 0 : 1;
  }

  int valid() const {
    const Formula f = formula();
    const SatResult r =
        o_.oracle ? bounded_sat(negation(f), bounds()) : satisfiable(negation(f));
    Json j;
    switch (r.verdict) {
      case Verdict::Unsat:
        j["verdict"] = "valid";
        break;
      case Verdict::Sat:
        j["verdict"] = "invalid";
        break;
      case Verdict::SatBoundedUnknown:
        j["verdict"] = "valid-bounded-unknown";
        break;
    }
    const Json sat = to_json(r);
    j["countermodel"] = sat["model"];
    j["state"] = sat["state"];
    j["stats"] = sat["stats"];
    emit(j);
    return r.verdict == Verdict::Unsat ? 0 : 1;
  }

  int bisim() const {
    const KripkeModel m1 = kripke_from_json(load_json_file(o_.model1));
    const KripkeModel m2 = kripke_from_json(load_json_file(o_.model2));
    const std::size_t w1 = m1.state_index(o_.state1);
    const std::size_t w2 = m2.state_index(o_.state2);
    const bool same = bisimilar(m1, w1, m2, w2);
    Json j;
    j["bisimilar"] = same;
    if (o_.distinguish && !same) {
      const auto f = distinguishing_formula(m1, w1, m2, w2);
      if (f) {
        // Re-verify in the union, where a name or proposition missing on one
        // side reads as empty.
        const std::array<KripkeModel, 2> parts{m1, m2};
        const KripkeModel joined = disjoint_union(parts);
        Evaluator eval(joined);
        if (!eval.holds(w1, *f) || eval.holds(m1.state_count() + w2, *f))
          throw std::logic_error("distinguishing formula failed re-verification");
        j["distinguishing"] = print_formula(*f);
      } else {
        j["distinguishing"] = nullptr;
        j["note"] = "the points agree on every formula of the language";
      }
    }
    emit(j);
    return same ? 0 : 1;
  }

  int translate() const {
    const Json doc = load_json_file(o_.model);
    if (o_.to == "nbhd") {
      if (is_nbhd_json(doc)) throw Error("model is already a neighborhood model");
      emit(to_json(kripke_to_nbhd(kripke_from_json(doc))));
    } else {
      if (!is_nbhd_json(doc)) throw Error("model is already a Kripke model");
      emit(to_json(nbhd_to_kripke(nbhd_from_json(doc))));
    }
    return 0;
  }

  int validate() const {
    const KripkeModel m = kripke_from_json(load_json_file(o_.model));
    ValidationMode mode = ValidationMode::Lenient;
    if (o_.mode == "strict") mode = ValidationMode::Strict;
    if (o_.mode == "epistemic") mode = ValidationMode::Epistemic;
    const auto diagnostics = validate_model(m, mode);
    Json list = Json::array();
    for (const auto& d : diagnostics)
      list.push_back({{"severity", d.severity == Severity::Error ? "error" : "warning"},
                      {"code", d.code},
                      {"message", d.message}});
    const bool ok = !has_errors(diagnostics);
    emit({{"valid", ok}, {"diagnostics", list}});
    return ok ? 0 : 1;
  }

  int random() const {
    RandomModelParams p = o_.random;
    p.mode = o_.random_mode == "epistemic" ? RandomMode::Epistemic : RandomMode::General;
    p.propositions.clear();
    std::stringstream props(o_.props);
    for (std::string id; std::getline(props, id, ',');)
      if (!id.empty()) p.propositions.push_back(id);
    p.seed = o_.seed;
    if (p.states == 0) throw Error("--states must be positive");
    emit(to_json(random_model(p)));
    return 0;
  }

  int algebra() const {
    const Json doc = load_json_file(o_.model);
    const NeighborhoodModel m =
        is_nbhd_json(doc) ? nbhd_from_json(doc) : kripke_to_nbhd(kripke_from_json(doc));
    AlgebraCheckOptions options;
    options.samples = o_.samples;
    options.seed = o_.seed;
    const auto diagnostics = verify_algebra_equations(m, options);
    Json list = Json::array();
    for (const auto& d : diagnostics)
      list.push_back({{"name", d.name}, {"equation", d.equation}, {"detail", d.detail}});
    emit({{"holds", diagnostics.empty()},
          {"exhaustive", m.state_count() <= options.exhaustive_max_states},
          {"diagnostics", list}});
    return diagnostics.empty() ? 0 : 1;
  }

 private:
  const Options& o_;
  std::istream& in_;
  std::ostream& out_;
};

}  // namespace

int run_cli(const std::vector<std::string>& args, std::istream& in, std::ostream& out,
            std::ostream& err) {
  Options o;
  CLI::App app{"Epistemic logic with names: model checking, satisfiability, bisimulation"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all");

  auto add_pretty = [&](CLI::App* cmd) { cmd->add_flag("--pretty", o.pretty, "Indent JSON output"); };

  auto* check = app.add_subcommand("check", "Evaluate a formula at a state");
  check->add_option("--model", o.model, "Kripke model JSON")->required();
  check->add_option("--state", o.state, "State id")->required();
  check->add_option("--formula", o.formula, "Formula, or - for stdin")->required();
  add_pretty(check);

  auto* sat = app.add_subcommand("sat", "Decide satisfiability");
  sat->add_option("--formula", o.formula, "Formula, or - for stdin")->required();
  sat->add_option("--bounds", o.bounds, "STATES,AGENTS for bounded search");
  sat->add_flag("--oracle", o.oracle, "Use bounded search (needed for D and B)");
  add_pretty(sat);

  auto* valid = app.add_subcommand("valid", "Decide validity");
  valid->add_option("--formula", o.formula, "Formula, or - for stdin")->required();
  valid->add_option("--bounds", o.bounds, "STATES,AGENTS for bounded search");
  valid->add_flag("--oracle", o.oracle, "Search countermodels by bounded search");
  add_pretty(valid);

  auto* bisim = app.add_subcommand("bisim", "Bisimilarity of two pointed models");
  bisim->add_option("--model1", o.model1)->required();
  bisim->add_option("--state1", o.state1)->required();
  bisim->add_option("--model2", o.model2)->required();
  bisim->add_option("--state2", o.state2)->required();
  bisim->add_flag("--distinguish", o.distinguish, "Print a distinguishing formula if any");
  add_pretty(bisim);

  auto* translate = app.add_subcommand("translate", "Kripke <-> neighborhood translation");
  translate->add_option("--model", o.model)->required();
  translate->add_option("--to", o.to)->required()->check(CLI::IsMember({"nbhd", "kripke"}));
  add_pretty(translate);

  auto* validate = app.add_subcommand("validate", "Check model well-formedness");
  validate->add_option("--model", o.model)->required();
  validate->add_option("--mode", o.mode)->check(CLI::IsMember({"lenient", "strict", "epistemic"}));
  add_pretty(validate);

  auto* random = app.add_subcommand("random", "Generate a random Kripke model");
  random->add_option("--states", o.random.states);
  random->add_option("--agents", o.random.agents);
  random->add_option("--names", o.random.names);
  random->add_option("--edge-density", o.random.edge_density)->check(CLI::Range(0.0, 1.0));
  random->add_option("--naming-density", o.random.naming_density)->check(CLI::Range(0.0, 1.0));
  random->add_option("--mode", o.random_mode)->check(CLI::IsMember({"general", "epistemic"}));
  random->add_option("--props", o.props, "Comma-separated propositions");
  random->add_option("--seed", o.seed);
  add_pretty(random);

  auto* algebra = app.add_subcommand("algebra", "Check the complex-algebra equations");
  algebra->add_option("--model", o.model, "Neighborhood or Kripke model JSON")->required();
  algebra->add_option("--samples", o.samples, "Sampled subset pairs beyond 12 states");
  algebra->add_option("--seed", o.seed);
  add_pretty(algebra);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << e.what() << '\n';
    out << Json{{"error", e.what()}}.dump() << '\n';
    return 2;
  }

  const Invocation run(o, in, out);
  try {
    if (check->parsed()) return run.check();
    if (sat->parsed()) return run.sat();
    if (valid->parsed()) return run.valid();
    if (bisim->parsed()) return run.bisim();
    if (translate->parsed()) return run.translate();
    if (validate->parsed()) return run.validate();
    if (random->parsed()) return run.random();
    if (algebra->parsed()) return run.algebra();
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    out << Json{{"error", e.what()}}.dump() << '\n';
    return 2;
  }
  return 2;
}

}  // namespace namelogic::cli
