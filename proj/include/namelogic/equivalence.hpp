#pragma once

#include <optional>
#include <set>
#include <utility>
#include <vector>

#include "namelogic/formula.hpp"
#include "namelogic/kripke.hpp"
#include "namelogic/report.hpp"

namespace namelogic {

/// Pairs (state of m1, state of m2), by index.
using BisimRelation = std::set<std::pair<std::size_t, std::size_t>>;

/// (there) every a in mu(w,n) has some a' in mu'(f(w),n) with
/// R'_a'(f(w)) = f[R_a(w)]; (back) conversely for every a'. Names are the
/// union of both models' names. With compare_valuations, propositions
/// declared in both models must agree at w and f(w).
MorphismCheckReport check_frame_morphism(const KripkeModel& src, const KripkeModel& dst,
                                         const StateMap& f, bool compare_valuations);

/// Clause (0) compares all propositions of either model, an undeclared one
/// counting as false; clauses (1) and (2) demand the relation be full in both
/// directions between R_a(w) and R'_a'(w').
MorphismCheckReport check_bisimulation(const KripkeModel& m1, const KripkeModel& m2,
                                       const BisimRelation& b);

/// Greatest fixpoint of clause refinement, starting from atom-agreeing pairs.
BisimRelation greatest_bisimulation(const KripkeModel& m1, const KripkeModel& m2);

bool bisimilar(const KripkeModel& m1, std::size_t w1, const KripkeModel& m2, std::size_t w2);

/// {(w, f(w))}.
BisimRelation graph_relation(const StateMap& f);

/// The underlying map when b is functional and total on m1's states.
std::optional<StateMap> as_function(const BisimRelation& b, std::size_t source_states);

/// A formula over Booleans, E and S, true at (m1, w1) and false at (m2, w2),
/// or nothing when the two points agree on every such formula.
///
/// This is computed by refining modal equivalence, not bisimilarity: the
/// back-and-forth clauses are strictly finer than what E and S can observe
/// (S only sees the minimal successor sets of a name, E only their union),
/// so some non-bisimilar points have no distinguishing formula at all.
/// The formula may mention a proposition or name declared by only one of the
/// models; it is meant to be read with the missing ones empty.
std::optional<Formula> distinguishing_formula(const KripkeModel& m1, std::size_t w1,
                                              const KripkeModel& m2, std::size_t w2);

/// Partition of the states of m into classes of points agreeing on every
/// Boolean/E/S formula; class ids are dense and start at 0.
std::vector<std::size_t> modal_equivalence_classes(const KripkeModel& m);

/// True iff both points agree on every corpus formula.
bool modal_equiv_corpus(const KripkeModel& m1, std::size_t w1, const KripkeModel& m2,
                        std::size_t w2, const std::vector<Formula>& corpus);

}  // namespace namelogic
