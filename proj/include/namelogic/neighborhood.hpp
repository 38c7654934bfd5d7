#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "namelogic/formula.hpp"
#include "namelogic/kripke.hpp"
#include "namelogic/report.hpp"

namespace namelogic {

/// Finite neighborhood model: per (state, name) a family of state sets.
/// Families are kept sorted and duplicate-free.
class NeighborhoodModel {
 public:
  NeighborhoodModel(std::vector<std::string> states, std::vector<std::string> names);

  std::size_t state_count() const { return states_.size(); }
  std::size_t name_count() const { return names_.size(); }
  const std::vector<std::string>& states() const { return states_; }
  const std::vector<std::string>& names() const { return names_; }

  std::optional<std::size_t> find_state(const std::string& id) const;
  std::optional<std::size_t> find_name(const std::string& id) const;
  std::size_t state_index(const std::string& id) const;
  std::size_t name_index(const std::string& id) const;

  void add_neighborhood(std::size_t state, std::size_t name, StateSet set);
  /// nu_n(w).
  const std::vector<StateSet>& neighborhoods(std::size_t state, std::size_t name) const {
    return nu_[state][name];
  }

  void declare_proposition(const std::string& p);
  void set_true(const std::string& p, std::size_t state);
  void set_truth_set(const std::string& p, StateSet states);
  const StateSet& truth_set(const std::string& p) const;
  const std::map<std::string, StateSet>& valuation() const { return valuation_; }

  StateSet empty_set() const { return StateSet(state_count()); }
  StateSet full_set() const { return StateSet(state_count()).set(); }

  /// w in X for every X in nu_n(w), all w and n.
  bool reflexive() const;

  bool operator==(const NeighborhoodModel& other) const;

 private:
  std::vector<std::string> states_;
  std::vector<std::string> names_;
  std::unordered_map<std::string, std::size_t> state_ids_;
  std::unordered_map<std::string, std::size_t> name_ids_;
  std::vector<std::vector<std::vector<StateSet>>> nu_;  // [state][name]
  std::map<std::string, StateSet> valuation_;
};

/// ||f|| under the subset clauses: E_n f holds at w iff every X in nu_n(w)
/// is inside ||f||, S_n f iff some X is. Throws UnsupportedFragment for
/// C, D and B, ModelError for undeclared names or propositions.
StateSet nbhd_extension(const NeighborhoodModel& m, const Formula& f);
bool check_nbhd(const NeighborhoodModel& m, std::size_t state, const Formula& f);

/// nu_n(w) = { R_a(w) : a in mu(w, n) }.
NeighborhoodModel kripke_to_nbhd(const KripkeModel& m);

/// One agent per distinct neighborhood X, with R_X(w) = X for w in X, and
/// mu(w, n) = nu_n(w). Agent ids are the sorted member ids, e.g. "{v,w}".
/// Throws ModelError when m is not reflexive.
KripkeModel nbhd_to_kripke(const NeighborhoodModel& m);

/// Agent id used by nbhd_to_kripke for a neighborhood.
std::string neighborhood_label(const NeighborhoodModel& m, const StateSet& set);

/// (there-n) X in nu_n(w) implies f[X] in nu'_n(f(w)); (back-n) every
/// Y in nu'_n(f(w)) is some f[X] with X in nu_n(w). Names are matched by id;
/// a name missing on one side has empty families there.
MorphismCheckReport check_core_morphism(const NeighborhoodModel& src, const NeighborhoodModel& dst,
                                        const StateMap& f);

/// Powerset algebra of a finite neighborhood frame.
class ComplexAlgebra {
 public:
  explicit ComplexAlgebra(const NeighborhoodModel& m);

  const NeighborhoodModel& frame() const { return frame_; }
  /// {w | every Y in nu_n(w) is a subset of X}.
  StateSet everyone(std::size_t name, const StateSet& x) const;
  /// {w | some Y in nu_n(w) is a subset of X}.
  StateSet someone(std::size_t name, const StateSet& x) const;

 private:
  const NeighborhoodModel& frame_;
};

ComplexAlgebra complex_algebra(const NeighborhoodModel& m);

struct AlgebraDiagnostic {
  std::string name;
  /// "E_top", "E_meet", "S_E_meet" or "not_E_bottom".
  std::string equation;
  std::string detail;
};

struct AlgebraCheckOptions {
  /// Exhaustive over all subset pairs up to this many states.
  std::size_t exhaustive_max_states = 12;
  /// Sampled subset pairs per name beyond the cap.
  std::size_t samples = 1000;
  std::uint64_t seed = 0;
};

/// Checks, per name, E_n(top) = top, E_n(a & b) = E_n a & E_n b,
/// S_n a & E_n b <= S_n(a & b) and !E_n(bottom) = S_n(top). The last fails
/// exactly at states with nu_n(w) = {{}}; such failures are reported like the
/// others. Empty result iff all hold.
std::vector<AlgebraDiagnostic> verify_algebra_equations(const NeighborhoodModel& m,
                                                        const AlgebraCheckOptions& options = {});

}  // namespace namelogic
