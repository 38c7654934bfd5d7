#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "namelogic/formula.hpp"
#include "namelogic/kripke.hpp"
#include "namelogic/neighborhood.hpp"

namespace namelogic::testing {

using Rng = std::mt19937_64;

/// Path of a file under data/.
std::string data_path(const std::string& file);
KripkeModel figure1();

/// Fixed 20-formula instantiation corpus over p, q and names n, m.
std::vector<Formula> corpus20();

struct FormulaShape {
  std::vector<std::string> props = {"p", "q"};
  std::vector<std::string> names = {"n"};
  std::size_t depth = 3;
  bool common = false;
  bool distributed = false;
};

Formula random_formula(Rng& rng, const FormulaShape& shape);
std::vector<Formula> random_corpus(std::uint64_t seed, std::size_t count, const FormulaShape& shape);

/// Random neighborhood model over props p, q. With reflexive set, every
/// neighborhood contains its state.
NeighborhoodModel random_nbhd(Rng& rng, std::size_t states, std::size_t names, bool reflexive);

/// Independent evaluator: direct transcription of the clauses, with D by
/// enumerating every nonempty subgroup of mu(w, n).
bool naive_holds(const KripkeModel& m, std::size_t w, const Formula& f);

}  // namespace namelogic::testing
