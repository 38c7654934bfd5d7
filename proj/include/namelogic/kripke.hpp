#pragma once

#include <boost/dynamic_bitset.hpp>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "namelogic/formula.hpp"

namespace namelogic {

using StateSet = boost::dynamic_bitset<>;
using AgentSet = boost::dynamic_bitset<>;

/// Total map from the states of one model to the states of another, by index.
using StateMap = std::vector<std::size_t>;

/// Finite Kripke model with a naming function: per-agent accessibility,
/// mu(state, name) -> agents, and a valuation over declared propositions.
/// States, agents and names are fixed at construction; edges, naming and
/// valuation are filled in afterwards.
class KripkeModel {
 public:
  KripkeModel(std::vector<std::string> states, std::vector<std::string> agents,
              std::vector<std::string> names);

  std::size_t state_count() const { return states_.size(); }
  std::size_t agent_count() const { return agents_.size(); }
  std::size_t name_count() const { return names_.size(); }

  const std::vector<std::string>& states() const { return states_; }
  const std::vector<std::string>& agents() const { return agents_; }
  const std::vector<std::string>& names() const { return names_; }

  std::optional<std::size_t> find_state(const std::string& id) const;
  std::optional<std::size_t> find_agent(const std::string& id) const;
  std::optional<std::size_t> find_name(const std::string& id) const;
  /// Throw ModelError for undeclared ids.
  std::size_t state_index(const std::string& id) const;
  std::size_t agent_index(const std::string& id) const;
  std::size_t name_index(const std::string& id) const;

  void add_edge(std::size_t agent, std::size_t from, std::size_t to);
  void assign_name(std::size_t state, std::size_t name, std::size_t agent);
  void declare_proposition(const std::string& p);
  void set_true(const std::string& p, std::size_t state);
  void set_truth_set(const std::string& p, StateSet states);

  /// R_a(w).
  const StateSet& successors(std::size_t agent, std::size_t state) const {
    return successors_[agent][state];
  }
  /// mu(w, n).
  const AgentSet& named(std::size_t state, std::size_t name) const {
    return naming_[state][name];
  }
  bool has_proposition(const std::string& p) const { return valuation_.count(p) != 0; }
  /// pi(p); throws ModelError when p is undeclared.
  const StateSet& truth_set(const std::string& p) const;
  const std::map<std::string, StateSet>& valuation() const { return valuation_; }

  StateSet empty_set() const { return StateSet(state_count()); }
  StateSet full_set() const { return StateSet(state_count()).set(); }

  /// R_n(w) = union of R_a(w) over a in mu(w, n).
  StateSet name_successors(std::size_t state, std::size_t name) const;
  /// Any name at all: a in mu(w, n) for some n.
  bool is_named_anywhere(std::size_t state, std::size_t agent) const;

  bool operator==(const KripkeModel& other) const;

 private:
  std::vector<std::string> states_;
  std::vector<std::string> agents_;
  std::vector<std::string> names_;
  std::unordered_map<std::string, std::size_t> state_ids_;
  std::unordered_map<std::string, std::size_t> agent_ids_;
  std::unordered_map<std::string, std::size_t> name_ids_;
  std::vector<std::vector<StateSet>> successors_;  // [agent][state]
  std::vector<std::vector<AgentSet>> naming_;      // [state][name]
  std::map<std::string, StateSet> valuation_;
};

// ---------------------------------------------------------------------------
// Validation

enum class ValidationMode { Lenient, Strict, Epistemic };
enum class Severity { Warning, Error };

struct Diagnostic {
  Severity severity;
  std::string code;
  std::string message;
};

/// Never throws. Lenient: reflexivity at named worlds is an error; edges
/// leaving a world where the agent bears no name are warnings. Strict turns
/// those warnings into errors. Epistemic is lenient plus "every R_a is an
/// equivalence relation on its field".
std::vector<Diagnostic> validate_model(const KripkeModel& m, ValidationMode mode);
bool has_errors(const std::vector<Diagnostic>& diagnostics);

// ---------------------------------------------------------------------------
// Satisfaction

/// Explanation attached to a verdict: the knowing agent for S, the full
/// pooling group for D, and for a failed E or C the offending agent(s) and the
/// state path ending at a world refuting the operand.
struct Witness {
  std::vector<std::string> agents;
  std::vector<std::string> path;
};

struct TruthResult {
  bool value = false;
  std::optional<Witness> witness;

  /// Witnesses are best-effort and ignored.
  bool operator==(const TruthResult& other) const { return value == other.value; }
};

/// Bottom-up extension computation with a cache keyed by formula node, so
/// repeated subterms across many queries on one model are evaluated once.
class Evaluator {
 public:
  explicit Evaluator(const KripkeModel& model);

  /// ||f||. Throws ModelError for undeclared names, agents or propositions.
  const StateSet& extension(const Formula& f);
  bool holds(std::size_t state, const Formula& f) { return extension(f).test(state); }

  /// States reachable from `state` in one or more R_n steps.
  StateSet reachable(std::size_t state, std::size_t name) const;

 private:
  StateSet compute(const Formula& f);
  StateSet can_reach(std::size_t name, const StateSet& target) const;

  const KripkeModel& model_;
  std::unordered_map<const void*, std::pair<Formula, StateSet>> cache_;
};

TruthResult check(const KripkeModel& m, std::size_t state, const Formula& f);
TruthResult check(const KripkeModel& m, const std::string& state, const Formula& f);
StateSet extension(const KripkeModel& m, const Formula& f);

/// Truth under every valuation of f's propositions at every state; the
/// model's own valuation is ignored. Throws BudgetExceeded when
/// |props| * |states| exceeds max_bits.
bool frame_valid(const KripkeModel& frame, const Formula& f, std::size_t max_bits = 20);

struct FrameCountermodel {
  KripkeModel model;
  std::size_t state;
};
std::optional<FrameCountermodel> frame_countermodel(const KripkeModel& frame, const Formula& f,
                                                    std::size_t max_bits = 20);

// ---------------------------------------------------------------------------
// Constructions

/// Restriction to the states reachable from `state` through the union of all
/// agents' relations (reflexive-transitive). State ids are kept.
KripkeModel generated_submodel(const KripkeModel& m, std::size_t state);

/// Component i's states and agents are tagged "i:id"; names and propositions
/// are shared.
KripkeModel disjoint_union(std::span<const KripkeModel> models);
/// Inclusion of component `index` into disjoint_union(models).
StateMap union_inclusion(std::span<const KripkeModel> models, std::size_t index);

/// Maps each state of src to the state of dst with the same id.
StateMap map_by_state_ids(const KripkeModel& src, const KripkeModel& dst);

/// Copy with additional (all-false) propositions declared.
KripkeModel with_propositions(const KripkeModel& m, const std::set<std::string>& props);

/// Copy with the given relation closures applied to every agent.
struct RelationClosure {
  bool reflexive = false;
  bool symmetric = false;
  bool transitive = false;
};
KripkeModel close_relations(const KripkeModel& m, RelationClosure closure);

enum class RandomMode { General, Epistemic };

struct RandomModelParams {
  std::size_t states = 3;
  std::size_t agents = 2;
  std::size_t names = 1;
  /// Probability of each (w, v) edge for an agent in general mode, and of
  /// each agent carrying each name at each state.
  double edge_density = 0.4;
  double naming_density = 0.5;
  RandomMode mode = RandomMode::General;
  std::vector<std::string> propositions = {"p", "q"};
  std::uint64_t seed = 0;
};

/// Lenient-valid by construction: every agent has a loop at each world where
/// it bears a name. Epistemic mode draws a random partition per agent.
/// Names are "n", "m", then "n2", "n3", ...; agents "a", "b", ...; states
/// "s0", "s1", ...
KripkeModel random_model(const RandomModelParams& params);

}  // namespace namelogic
