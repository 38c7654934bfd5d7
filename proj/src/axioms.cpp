#include <algorithm>

#include "namelogic/decision.hpp"
#include "namelogic/error.hpp"

namespace namelogic {

namespace {

Formula implies(const Formula& a, const Formula& b) { return implication(a, b); }

void add(std::vector<AxiomInstance>& out, std::string schema, Formula f) {
  out.push_back({std::move(schema), std::move(f)});
}

}  // namespace

std::vector<AxiomInstance> axiom_instances(AxiomSystem system, const std::vector<Formula>& corpus,
                                           const std::string& n) {
  std::vector<AxiomInstance> out;
  add(out, "Int2", implies(negation(everyone(n, falsum())), someone(n, verum())));
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    const Formula& phi = corpus[i];
    const Formula& psi = corpus[(i + 1) % corpus.size()];
    add(out, "PL", implies(phi, implies(psi, phi)));
    add(out, "PL", implies(conjunction(phi, psi), phi));
    add(out, "PL", implies(implies(phi, psi), implies(negation(psi), negation(phi))));
    add(out, "PL", disjunction(phi, negation(phi)));
    add(out, "T(S)", implies(someone(n, phi), phi));
    add(out, "K(E)",
        implies(conjunction(everyone(n, phi), everyone(n, implies(phi, psi))), everyone(n, psi)));
    add(out, "Int1",
        implies(conjunction(someone(n, phi), everyone(n, implies(phi, psi))), someone(n, psi)));
    if (system == AxiomSystem::NC) {
      add(out, "K(C)",
          implies(common(n, implies(phi, psi)), implies(common(n, phi), common(n, psi))));
      add(out, "FP", implies(common(n, phi), everyone(n, conjunction(phi, common(n, phi)))));
    }
    if (system == AxiomSystem::ND) {
      add(out, "K(D)",
          implies(conjunction(distributed(n, phi), distributed(n, implies(phi, psi))),
                  distributed(n, psi)));
      add(out, "Inclusion", implies(someone(n, phi), distributed(n, phi)));
      add(out, "T(D)", implies(distributed(n, phi), phi));
      add(out, "Interaction",
          implies(conjunction(distributed(n, phi), everyone(n, implies(phi, psi))),
                  distributed(n, psi)));
    }
  }
  return out;
}

std::vector<AxiomInstance> negative_controls(const std::vector<Formula>& corpus,
                                             const std::string& n) {
  std::vector<AxiomInstance> out;
  for (const auto& phi : corpus) {
    add(out, "4(S)", implies(someone(n, phi), someone(n, someone(n, phi))));
    add(out, "5(S)", implies(negation(someone(n, phi)), someone(n, negation(someone(n, phi)))));
    add(out, "T(E)", implies(everyone(n, phi), phi));
  }
  return out;
}

AxiomReport axiom_suite(AxiomSystem system, const std::vector<Formula>& corpus,
                        const AxiomSuiteOptions& options) {
  AxiomReport report;
  const std::string& n = options.name;
  const auto instances = axiom_instances(system, corpus, n);
  report.instances = instances.size();

  std::vector<const AxiomInstance*> semantic;
  std::vector<Formula> proved;
  for (const auto& inst : instances) {
    if (contains_op(inst.formula, Op::Distributed) || contains_op(inst.formula, Op::Believes)) {
      semantic.push_back(&inst);
      continue;
    }
    const SatResult r = satisfiable(negation(inst.formula), options.decision);
    if (r.verdict == Verdict::Unsat) {
      proved.push_back(inst.formula);
    } else {
      report.failures.push_back({inst.schema, print_formula(inst.formula),
                                 "negation satisfiable at a model with " +
                                     std::to_string(r.model->state_count()) + " states"});
    }
  }

  if (!semantic.empty()) {
    std::set<std::string> props, names;
    for (const auto& f : corpus) {
      const auto p = propositions_of(f);
      props.insert(p.begin(), p.end());
      const auto m = names_of(f);
      names.insert(m.begin(), m.end());
    }
    names.insert(n);
    for (std::size_t k = 0; k < options.models; ++k) {
      RandomModelParams params;
      params.states = 1 + k % 4;
      params.agents = 1 + (k / 4) % 3;
      params.names = std::max<std::size_t>(2, names.size());
      params.mode = k % 2 == 0 ? RandomMode::General : RandomMode::Epistemic;
      params.propositions.assign(props.begin(), props.end());
      params.seed = options.seed * 1000003 + k;
      const KripkeModel m = random_model(params);
      Evaluator eval(m);
      for (const auto* inst : semantic) {
        const StateSet& ext = eval.extension(inst->formula);
        if (!ext.all()) {
          report.failures.push_back({inst->schema, print_formula(inst->formula),
                                     "false at " + m.states()[(~ext).find_first()] +
                                         " of random model " + std::to_string(k)});
        }
      }
    }
  }

  // Rules, as validity preservation on a few premises.
  auto check_rule = [&](const std::string& rule, const Formula& premise, const Formula& conclusion,
                        bool premise_known) {
    if (!premise_known && !valid(premise, options.decision)) return;
    ++report.rule_checks;
    if (!valid(conclusion, options.decision))
      report.failures.push_back({rule, print_formula(conclusion), "premise valid, conclusion not"});
  };
  const std::size_t spot = std::min<std::size_t>(proved.size(), 4);
  for (std::size_t i = 0; i < spot; ++i) {
    check_rule("Nec(E)", proved[i], everyone(n, proved[i]), true);
    if (system == AxiomSystem::NC) check_rule("Nec(C)", proved[i], common(n, proved[i]), true);
    if (i + 1 < proved.size()) {
      const Formula both = conjunction(proved[i], proved[i + 1]);
      check_rule("MP", implication(proved[i], both), both, false);
    }
  }
  if (system == AxiomSystem::NC) {
    for (std::size_t i = 0; i < std::min<std::size_t>(corpus.size(), 4); ++i) {
      const Formula& psi = corpus[i];
      for (const Formula& phi :
           {common(n, psi), everyone(n, falsum()), conjunction(psi, common(n, psi))}) {
        const Formula premise = implication(phi, everyone(n, conjunction(phi, psi)));
        check_rule("Ind", premise, implication(phi, common(n, psi)), false);
      }
    }
  }

  std::map<std::string, bool> refuted;
  for (const auto& control : negative_controls(corpus, n)) {
    auto [it, inserted] = refuted.emplace(control.schema, false);
    if (it->second) continue;
    it->second = brute_force_sat(negation(control.formula), options.control_bounds).has_value();
  }
  report.negative_controls = refuted.size();
  for (const auto& [schema, done] : refuted) {
    if (done)
      ++report.negative_controls_refuted;
    else
      report.failures.push_back({schema, "", "no countermodel within bounds"});
  }
  return report;
}

}  // namespace namelogic
