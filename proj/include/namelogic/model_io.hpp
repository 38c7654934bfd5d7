#pragma once

#include <string>

#include <json.hpp>

#include "namelogic/decision.hpp"
#include "namelogic/equivalence.hpp"
#include "namelogic/kripke.hpp"
#include "namelogic/neighborhood.hpp"

namespace namelogic {

using Json = nlohmann::json;

/// Reads and parses a JSON file. Throws ModelError.
Json load_json_file(const std::string& path);

/// Keys: "states", "agents", "names", "relations" (agent -> [[from, to]]),
/// optional "closure" (any of "reflexive", "symmetric", "transitive",
/// applied to every agent on load), "naming" (state -> name -> [agents]),
/// "valuation" (proposition -> [states]). Throws ModelError.
KripkeModel kripke_from_json(const Json& j);
Json to_json(const KripkeModel& m);

/// Keys: "states", "names", "nu" (state -> name -> [[states]]), "valuation".
NeighborhoodModel nbhd_from_json(const Json& j);
Json to_json(const NeighborhoodModel& m);

/// A neighborhood document is recognised by its "nu" key.
bool is_nbhd_json(const Json& j);

/// Arrays of [state1, state2] pairs.
Json relation_to_json(const KripkeModel& m1, const KripkeModel& m2, const BisimRelation& b);
BisimRelation relation_from_json(const Json& j, const KripkeModel& m1, const KripkeModel& m2);

/// Objects state -> state.
Json map_to_json(const std::vector<std::string>& src_states,
                 const std::vector<std::string>& dst_states, const StateMap& f);
StateMap map_from_json(const Json& j, const KripkeModel& src, const KripkeModel& dst);

/// {"verdict", "model", "state", "stats": {"closure_size", "initial_atoms",
/// "rounds"}}; model and state are null unless the verdict is sat.
Json to_json(const SatResult& r);

}  // namespace namelogic
