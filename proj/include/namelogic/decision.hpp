#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "namelogic/formula.hpp"
#include "namelogic/kripke.hpp"

namespace namelogic {

enum class Verdict { Sat, Unsat, SatBoundedUnknown };

std::string to_string(Verdict v);

struct SatStats {
  std::size_t closure_size = 0;
  std::size_t initial_atoms = 0;
  std::size_t rounds = 0;
};

struct SatResult {
  Verdict verdict = Verdict::Unsat;
  /// Present iff verdict is Sat; chi holds at `state`.
  std::optional<KripkeModel> model;
  std::optional<std::size_t> state;
  SatStats stats;
};

struct DecisionOptions {
  /// Free truth values per atom: propositions plus modal closure members.
  std::size_t max_variables = 30;
  std::size_t max_atoms = 50000;
};

/// Satisfiability over models where every agent is reflexive wherever it
/// bears a name. Atoms are truth assignments to the closure of chi that obey
/// local coherence rules; atoms whose modal members disagree with their clause
/// in the canonical candidate model over the surviving atoms are removed until
/// nothing changes. A Sat result carries the part of that model reachable from
/// a survivor containing chi along named edges, re-verified by `check`.
/// Throws UnsupportedFragment for D or B and BudgetExceeded past the caps.
SatResult satisfiable(const Formula& chi, const DecisionOptions& options = {});

/// !satisfiable(!chi).
bool valid(const Formula& chi, const DecisionOptions& options = {});

/// The model of a Sat result. Throws Error otherwise.
KripkeModel extract_model(const SatResult& r);

struct BruteForceBounds {
  std::size_t max_states = 2;
  std::size_t max_agents = 2;
  /// Cap on frame x 64-valuation-block evaluations.
  double budget = 2e8;
};

struct PointedModel {
  KripkeModel model;
  std::size_t state;
};

/// Exhaustive search over models with 1..max_states states in which named
/// agents are reflexive where named. Agents are chi's B agents padded with
/// anonymous ones up to max_agents. Edges of agents at worlds where they bear
/// no name only matter for B and are enumerated only when chi contains B.
/// Supports the whole language; finding nothing is not a proof of
/// unsatisfiability. Throws BudgetExceeded before starting if the search
/// would exceed the budget.
std::optional<PointedModel> brute_force_sat(const Formula& chi, const BruteForceBounds& bounds);

/// brute_force_sat as a verdict: Sat with the model, or SatBoundedUnknown.
SatResult bounded_sat(const Formula& chi, const BruteForceBounds& bounds);

// ---------------------------------------------------------------------------
// Axiom suites

enum class AxiomSystem { N, NC, ND };

struct AxiomInstance {
  std::string schema;
  Formula formula;
};

/// Every schema of the system instantiated with phi over the corpus and, for
/// two-place schemas, (phi, psi) over consecutive corpus pairs, for name n.
std::vector<AxiomInstance> axiom_instances(AxiomSystem system, const std::vector<Formula>& corpus,
                                           const std::string& name = "n");

/// S_n phi -> S_n S_n phi, !S_n phi -> S_n !S_n phi and E_n phi -> phi: not
/// valid.
std::vector<AxiomInstance> negative_controls(const std::vector<Formula>& corpus,
                                             const std::string& name = "n");

struct AxiomFailure {
  std::string schema;
  std::string formula;
  std::string detail;
};

struct AxiomReport {
  std::size_t instances = 0;
  std::size_t rule_checks = 0;
  std::size_t negative_controls_refuted = 0;
  std::size_t negative_controls = 0;
  std::vector<AxiomFailure> failures;

  bool ok() const { return failures.empty() && negative_controls_refuted == negative_controls; }
};

struct AxiomSuiteOptions {
  std::string name = "n";
  /// Random models for the semantic check of the distributed-knowledge schemas.
  std::size_t models = 1000;
  std::uint64_t seed = 1;
  BruteForceBounds control_bounds = {2, 2, 2e8};
  DecisionOptions decision = {};
};

/// Instances of the E/S/C systems are checked with `valid`; those with D on
/// random models (general and epistemic) since the decision procedure does
/// not cover D. Rules Nec(E_n), Nec(C_n), Ind and MP are spot-checked as
/// validity preservation over the corpus, and each negative control must get
/// a countermodel from bounded search.
AxiomReport axiom_suite(AxiomSystem system, const std::vector<Formula>& corpus,
                        const AxiomSuiteOptions& options = {});

}  // namespace namelogic
