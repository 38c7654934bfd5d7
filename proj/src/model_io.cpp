#include "namelogic/model_io.hpp"

#include <fstream>

#include "namelogic/error.hpp"

namespace namelogic {

namespace {

const Json& field(const Json& j, const char* key) {
  if (!j.is_object()) throw ModelError("model document must be a JSON object");
  auto it = j.find(key);
  if (it == j.end()) throw ModelError(std::string("missing key '") + key + "'");
  return *it;
}

const Json* optional_field(const Json& j, const char* key) {
  auto it = j.find(key);
  return it == j.end() || it->is_null() ? nullptr : &*it;
}

std::string as_string(const Json& j, const char* what) {
  if (!j.is_string()) throw ModelError(std::string(what) + " must be a string");
  return j.get<std::string>();
}

std::vector<std::string> string_array(const Json& j, const char* what) {
  if (!j.is_array()) throw ModelError(std::string(what) + " must be an array");
  std::vector<std::string> out;
  for (const auto& item : j) out.push_back(as_string(item, what));
  return out;
}

const Json& object(const Json& j, const char* what) {
  if (!j.is_object()) throw ModelError(std::string(what) + " must be an object");
  return j;
}

template <class Model>
void read_valuation(const Json& j, Model& m) {
  const Json* valuation = optional_field(j, "valuation");
  if (valuation == nullptr) return;
  for (const auto& [p, states] : object(*valuation, "valuation").items()) {
    m.declare_proposition(p);
    for (const auto& s : string_array(states, "valuation entry"))
      m.set_true(p, m.state_index(s));
  }
}

template <class Model>
Json write_valuation(const Model& m) {
  Json out = Json::object();
  for (const auto& [p, truth] : m.valuation()) {
    Json states = Json::array();
    for (auto w = truth.find_first(); w != StateSet::npos; w = truth.find_next(w))
      states.push_back(m.states()[w]);
    out[p] = std::move(states);
  }
  return out;
}

Json state_list(const std::vector<std::string>& ids, const StateSet& set) {
  Json out = Json::array();
  for (auto x = set.find_first(); x != StateSet::npos; x = set.find_next(x)) out.push_back(ids[x]);
  return out;
}

template <class Fn>
auto guarded(Fn fn) {
  try {
    return fn();
  } catch (const Json::exception& e) {
    throw ModelError(std::string("malformed model document: ") + e.what());
  }
}

}  // namespace

Json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ModelError("cannot open '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const Json::exception& e) {
    throw ModelError("'" + path + "' is not valid JSON: " + e.what());
  }
}

KripkeModel kripke_from_json(const Json& j) {
  return guarded([&] {
    auto states = string_array(field(j, "states"), "states");
    const Json* agents_j = optional_field(j, "agents");
    const Json* names_j = optional_field(j, "names");
    KripkeModel m(std::move(states),
                  agents_j ? string_array(*agents_j, "agents") : std::vector<std::string>{},
                  names_j ? string_array(*names_j, "names") : std::vector<std::string>{});
    if (const Json* relations = optional_field(j, "relations")) {
      for (const auto& [agent, pairs] : object(*relations, "relations").items()) {
        const std::size_t a = m.agent_index(agent);
        if (!pairs.is_array()) throw ModelError("relation of '" + agent + "' must be an array");
        for (const auto& pair : pairs) {
          if (!pair.is_array() || pair.size() != 2)
            throw ModelError("relation entries must be [from, to] pairs");
          m.add_edge(a, m.state_index(as_string(pair[0], "state")),
                     m.state_index(as_string(pair[1], "state")));
        }
      }
    }
    if (const Json* naming = optional_field(j, "naming")) {
      for (const auto& [state, by_name] : object(*naming, "naming").items()) {
        const std::size_t w = m.state_index(state);
        for (const auto& [name, agents] : object(by_name, "naming entry").items()) {
          const std::size_t n = m.name_index(name);
          for (const auto& a : string_array(agents, "naming entry"))
            m.assign_name(w, n, m.agent_index(a));
        }
      }
    }
    read_valuation(j, m);
    if (const Json* closure = optional_field(j, "closure")) {
      RelationClosure c;
      for (const auto& kind : string_array(*closure, "closure")) {
        if (kind == "reflexive") c.reflexive = true;
        else if (kind == "symmetric") c.symmetric = true;
        else if (kind == "transitive") c.transitive = true;
        else throw ModelError("unknown closure '" + kind + "'");
      }
      m = close_relations(m, c);
    }
    return m;
  });
}

Json to_json(const KripkeModel& m) {
  Json out;
  out["states"] = m.states();
  out["agents"] = m.agents();
  out["names"] = m.names();
  Json relations = Json::object();
  for (std::size_t a = 0; a < m.agent_count(); ++a) {
    Json pairs = Json::array();
    for (std::size_t w = 0; w < m.state_count(); ++w) {
      const StateSet& succ = m.successors(a, w);
      for (auto v = succ.find_first(); v != StateSet::npos; v = succ.find_next(v))
        pairs.push_back({m.states()[w], m.states()[v]});
    }
    relations[m.agents()[a]] = std::move(pairs);
  }
  out["relations"] = std::move(relations);
  Json naming = Json::object();
  for (std::size_t w = 0; w < m.state_count(); ++w) {
    Json by_name = Json::object();
    for (std::size_t n = 0; n < m.name_count(); ++n) {
      const AgentSet& group = m.named(w, n);
      if (group.none()) continue;
      Json agents = Json::array();
      for (auto a = group.find_first(); a != AgentSet::npos; a = group.find_next(a))
        agents.push_back(m.agents()[a]);
      by_name[m.names()[n]] = std::move(agents);
    }
    if (!by_name.empty()) naming[m.states()[w]] = std::move(by_name);
  }
  out["naming"] = std::move(naming);
  out["valuation"] = write_valuation(m);
  return out;
}

NeighborhoodModel nbhd_from_json(const Json& j) {
  return guarded([&] {
    auto states = string_array(field(j, "states"), "states");
    const Json* names_j = optional_field(j, "names");
    NeighborhoodModel m(std::move(states),
                        names_j ? string_array(*names_j, "names") : std::vector<std::string>{});
    if (const Json* nu = optional_field(j, "nu")) {
      for (const auto& [state, by_name] : object(*nu, "nu").items()) {
        const std::size_t w = m.state_index(state);
        for (const auto& [name, family] : object(by_name, "nu entry").items()) {
          const std::size_t n = m.name_index(name);
          if (!family.is_array()) throw ModelError("neighborhood family must be an array");
          for (const auto& members : family) {
            StateSet x = m.empty_set();
            for (const auto& s : string_array(members, "neighborhood")) x.set(m.state_index(s));
            m.add_neighborhood(w, n, std::move(x));
          }
        }
      }
    }
    read_valuation(j, m);
    return m;
  });
}

Json to_json(const NeighborhoodModel& m) {
  Json out;
  out["states"] = m.states();
  out["names"] = m.names();
  Json nu = Json::object();
  for (std::size_t w = 0; w < m.state_count(); ++w) {
    Json by_name = Json::object();
    for (std::size_t n = 0; n < m.name_count(); ++n) {
      const auto& family = m.neighborhoods(w, n);
      if (family.empty()) continue;
      Json sets = Json::array();
      for (const auto& x : family) sets.push_back(state_list(m.states(), x));
      by_name[m.names()[n]] = std::move(sets);
    }
    if (!by_name.empty()) nu[m.states()[w]] = std::move(by_name);
  }
  out["nu"] = std::move(nu);
  out["valuation"] = write_valuation(m);
  return out;
}

bool is_nbhd_json(const Json& j) { return j.is_object() && j.contains("nu"); }

Json relation_to_json(const KripkeModel& m1, const KripkeModel& m2, const BisimRelation& b) {
  Json out = Json::array();
  for (const auto& [x, y] : b) out.push_back({m1.states()[x], m2.states()[y]});
  return out;
}

BisimRelation relation_from_json(const Json& j, const KripkeModel& m1, const KripkeModel& m2) {
  return guarded([&] {
    if (!j.is_array()) throw ModelError("relation must be an array of pairs");
    BisimRelation out;
    for (const auto& pair : j) {
      if (!pair.is_array() || pair.size() != 2)
        throw ModelError("relation entries must be [state1, state2] pairs");
      out.emplace(m1.state_index(as_string(pair[0], "state")),
                  m2.state_index(as_string(pair[1], "state")));
    }
    return out;
  });
}

Json map_to_json(const std::vector<std::string>& src_states,
                 const std::vector<std::string>& dst_states, const StateMap& f) {
  Json out = Json::object();
  for (std::size_t w = 0; w < f.size(); ++w) out[src_states[w]] = dst_states[f[w]];
  return out;
}

StateMap map_from_json(const Json& j, const KripkeModel& src, const KripkeModel& dst) {
  return guarded([&] {
    StateMap out(src.state_count(), dst.state_count());
    for (const auto& [from, to] : object(j, "map").items())
      out[src.state_index(from)] = dst.state_index(as_string(to, "state"));
    for (std::size_t w = 0; w < out.size(); ++w)
      if (out[w] == dst.state_count())
        throw ModelError("map is not defined at '" + src.states()[w] + "'");
    return out;
  });
}

Json to_json(const SatResult& r) {
  Json out;
  out["verdict"] = to_string(r.verdict);
  out["model"] = r.model ? to_json(*r.model) : Json(nullptr);
  out["state"] = r.model && r.state ? Json(r.model->states()[*r.state]) : Json(nullptr);
  out["stats"] = {{"closure_size", r.stats.closure_size},
                  {"initial_atoms", r.stats.initial_atoms},
                  {"rounds", r.stats.rounds}};
  return out;
}

}  // namespace namelogic
