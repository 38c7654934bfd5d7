// Satisfiability for the E/S/C fragment by atom elimination over the closure.

#include "namelogic/decision.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <stdexcept>
#include <unordered_map>

#include "namelogic/closure.hpp"
#include "namelogic/error.hpp"

namespace namelogic {

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Sat:
      return "sat";
    case Verdict::Unsat:
      return "unsat";
    case Verdict::SatBoundedUnknown:
      return "sat-bounded-unknown";
  }
  return "unknown";
}

namespace {

using Bits = boost::dynamic_bitset<>;

struct Literal {
  std::size_t var;
  bool positive;
};

class Tableau {
 public:
  Tableau(const Formula& chi, const DecisionOptions& options)
      : chi_(desugar(chi)), closure_(closure(chi)), options_(options) {
    for (const auto& f : closure_.formulas) {
      if (f.op() == Op::Not) continue;
      index_.emplace(f, positives_.size());
      positives_.push_back(f);
    }
    names_.assign(closure_.names.begin(), closure_.names.end());
    std::size_t free = 0;
    for (const auto& f : positives_)
      if (f.op() == Op::Atom || is_modal(f.op())) ++free;
    if (free > options_.max_variables)
      throw BudgetExceeded("closure has " + std::to_string(free) +
                           " free truth values; cap is " + std::to_string(options_.max_variables));
    build_clauses();
  }

  SatResult run() {
    SatResult result;
    result.stats.closure_size = closure_.size();
    Bits current(positives_.size());
    enumerate(0, current);
    result.stats.initial_atoms = atoms_.size();

    std::vector<std::size_t> alive(atoms_.size());
    for (std::size_t i = 0; i < alive.size(); ++i) alive[i] = i;
    while (true) {
      ++result.stats.rounds;
      build_candidate(alive);
      const Bits keep = coherent_with_clauses(alive);
      if (keep.all()) break;
      std::vector<std::size_t> next;
      for (std::size_t i = 0; i < alive.size(); ++i)
        if (keep.test(i)) next.push_back(alive[i]);
      alive = std::move(next);
    }

    const Literal goal = literal(chi_);
    for (std::size_t i = 0; i < alive.size(); ++i) {
      if (holds(atoms_[alive[i]], goal)) {
        result.verdict = Verdict::Sat;
        result.model = extract(alive, i);
        result.state = 0;
        if (!check(*result.model, std::size_t{0}, chi_).value)
          throw std::logic_error("extracted model does not satisfy the query");
        return result;
      }
    }
    result.verdict = Verdict::Unsat;
    return result;
  }

 private:
  Literal literal(const Formula& f) const {
    const Formula* g = &f;
    bool positive = true;
    while (g->op() == Op::Not) {
      positive = !positive;
      g = &g->operand();
    }
    return {index_.at(*g), positive};
  }

  static bool holds(const Bits& atom, Literal l) { return atom.test(l.var) == l.positive; }

  void add_clause(std::vector<Literal> clause) {
    std::size_t last = 0;
    for (const auto& l : clause) last = std::max(last, l.var);
    clauses_at_[last].push_back(std::move(clause));
  }

  void build_clauses() {
    clauses_at_.assign(positives_.size(), {});
    std::map<std::string, std::vector<std::size_t>> everyone_by_name, someone_by_name;
    for (std::size_t i = 0; i < positives_.size(); ++i) {
      const Formula& f = positives_[i];
      if (f.op() == Op::Everyone) everyone_by_name[f.symbol()].push_back(i);
      if (f.op() == Op::Someone) someone_by_name[f.symbol()].push_back(i);
    }
    for (const auto& name : names_) {
      const std::size_t bottom = index_.at(everyone(name, falsum()));
      const std::size_t top = index_.at(someone(name, verum()));
      // Int_2
      add_clause({{bottom, true}, {top, true}});
      // An empty name: every E holds and no S does.
      for (std::size_t e : everyone_by_name[name]) add_clause({{bottom, false}, {e, true}});
      for (std::size_t s : someone_by_name[name]) add_clause({{bottom, false}, {s, false}});
      for (std::size_t s : someone_by_name[name]) {
        // T(S_n)
        const Literal phi = literal(positives_[s].operand());
        add_clause({{s, false}, phi});
        // A knowing agent is reflexive, so it sees every E_n fact.
        for (std::size_t e : everyone_by_name[name])
          add_clause({{s, false}, {e, false}, literal(positives_[e].operand())});
      }
    }
    for (std::size_t i = 0; i < positives_.size(); ++i) {
      const Formula& f = positives_[i];
      if (f.op() != Op::Common) continue;
      // FP
      add_clause({{i, false}, {index_.at(everyone(f.symbol(), f.operand())), true}});
      add_clause({{i, false}, {index_.at(everyone(f.symbol(), f)), true}});
    }
  }

  bool clauses_hold(std::size_t i, const Bits& atom) const {
    for (const auto& clause : clauses_at_[i]) {
      if (std::none_of(clause.begin(), clause.end(),
                       [&](const Literal& l) { return holds(atom, l); }))
        return false;
    }
    return true;
  }

  void enumerate(std::size_t i, Bits& atom) {
    if (i == positives_.size()) {
      if (atoms_.size() >= options_.max_atoms)
        throw BudgetExceeded("more than " + std::to_string(options_.max_atoms) + " atoms");
      atoms_.push_back(atom);
      return;
    }
    auto attempt = [&](bool value) {
      atom[i] = value;
      if (clauses_hold(i, atom)) enumerate(i + 1, atom);
    };
    const Formula& f = positives_[i];
    switch (f.op()) {
      case Op::True:
        attempt(true);
        break;
      case Op::False:
        attempt(false);
        break;
      case Op::And:
        attempt(holds(atom, literal(f.lhs())) && holds(atom, literal(f.rhs())));
        break;
      default:
        attempt(false);
        attempt(true);
        break;
    }
    atom[i] = false;
  }

  // Candidate model over the atoms in `alive`: one agent per distinct
  // requirement set D = {phi} + {psi | E_n psi in w} for S_n phi in w, seeing
  // every surviving atom that contains D.
  void build_candidate(const std::vector<std::size_t>& alive) {
    agents_.clear();
    extensions_.clear();
    naming_.assign(alive.size(), std::vector<std::vector<std::size_t>>(names_.size()));
    std::map<std::pair<Bits, Bits>, std::size_t> by_requirement;
    for (std::size_t w = 0; w < alive.size(); ++w) {
      const Bits& atom = atoms_[alive[w]];
      for (std::size_t n = 0; n < names_.size(); ++n) {
        Bits must_true(positives_.size()), must_false(positives_.size());
        auto require = [&](Literal l) { (l.positive ? must_true : must_false).set(l.var); };
        for (std::size_t i = 0; i < positives_.size(); ++i)
          if (positives_[i].op() == Op::Everyone && positives_[i].symbol() == names_[n] &&
              atom.test(i))
            require(literal(positives_[i].operand()));
        for (std::size_t i = 0; i < positives_.size(); ++i) {
          const Formula& f = positives_[i];
          if (f.op() != Op::Someone || f.symbol() != names_[n] || !atom.test(i)) continue;
          Bits t = must_true, fl = must_false;
          const Literal phi = literal(f.operand());
          (phi.positive ? t : fl).set(phi.var);
          auto [it, inserted] = by_requirement.emplace(std::make_pair(t, fl), agents_.size());
          if (inserted) {
            agents_.push_back({f.operand(), w, n});
            Bits ext(alive.size());
            for (std::size_t v = 0; v < alive.size(); ++v) {
              const Bits& other = atoms_[alive[v]];
              ext[v] = t.is_subset_of(other) && !fl.intersects(other);
            }
            extensions_.push_back(std::move(ext));
          }
          auto& group = naming_[w][n];
          if (std::find(group.begin(), group.end(), it->second) == group.end())
            group.push_back(it->second);
          if (!extensions_[it->second].test(w))
            throw std::logic_error("canonical agent does not see its own world");
        }
      }
    }
  }

  // Bit i set iff alive[i]'s modal members agree with their clauses read
  // over membership of the operands in the candidate model.
  Bits coherent_with_clauses(const std::vector<std::size_t>& alive) const {
    const std::size_t size = alive.size();
    Bits keep(size);
    keep.set();
    for (std::size_t i = 0; i < positives_.size(); ++i) {
      const Formula& f = positives_[i];
      if (!is_modal(f.op())) continue;
      const std::size_t n = static_cast<std::size_t>(
          std::find(names_.begin(), names_.end(), f.symbol()) - names_.begin());
      const Literal operand = literal(f.operand());
      Bits inside(size);
      for (std::size_t v = 0; v < size; ++v) inside[v] = holds(atoms_[alive[v]], operand);
      Bits truth(size);
      if (f.op() == Op::Common) {
        truth = ~reaches(n, ~inside);
      } else {
        std::vector<char> knows(agents_.size());
        for (std::size_t a = 0; a < agents_.size(); ++a)
          knows[a] = extensions_[a].is_subset_of(inside);
        for (std::size_t w = 0; w < size; ++w) {
          const auto& group = naming_[w][n];
          truth[w] = f.op() == Op::Everyone
                         ? std::all_of(group.begin(), group.end(),
                                       [&](std::size_t a) { return knows[a] != 0; })
                         : std::any_of(group.begin(), group.end(),
                                       [&](std::size_t a) { return knows[a] != 0; });
        }
      }
      for (std::size_t w = 0; w < size; ++w)
        if (truth[w] != atoms_[alive[w]].test(i)) keep.reset(w);
    }
    return keep;
  }

  // Worlds with an R_n path of length >= 1 into `target`.
  Bits reaches(std::size_t n, const Bits& target) const {
    const std::size_t size = target.size();
    Bits goal = target;
    Bits out(size);
    for (bool changed = true; changed;) {
      changed = false;
      std::vector<char> hit(agents_.size());
      for (std::size_t a = 0; a < agents_.size(); ++a) hit[a] = extensions_[a].intersects(goal);
      for (std::size_t w = 0; w < size; ++w) {
        if (out.test(w)) continue;
        const auto& group = naming_[w][n];
        if (std::any_of(group.begin(), group.end(), [&](std::size_t a) { return hit[a] != 0; })) {
          out.set(w);
          goal.set(w);
          changed = true;
        }
      }
    }
    return out;
  }

  // Restriction to the worlds reachable from alive[point] along named edges;
  // agents keep their full extension as successors where they are named.
  KripkeModel extract(const std::vector<std::size_t>& alive, std::size_t point) const {
    std::vector<std::size_t> order{point};
    std::vector<std::size_t> position(alive.size(), alive.size());
    position[point] = 0;
    for (std::size_t k = 0; k < order.size(); ++k) {
      for (const auto& group : naming_[order[k]])
        for (std::size_t a : group) {
          const Bits& ext = extensions_[a];
          for (auto v = ext.find_first(); v != Bits::npos; v = ext.find_next(v)) {
            if (position[v] == alive.size()) {
              position[v] = order.size();
              order.push_back(v);
            }
          }
        }
    }
    std::vector<std::string> states;
    for (std::size_t k = 0; k < order.size(); ++k) states.push_back("w" + std::to_string(k));

    std::vector<std::size_t> kept;
    std::vector<std::size_t> new_id(agents_.size(), agents_.size());
    std::vector<std::string> agent_ids;
    for (std::size_t k = 0; k < order.size(); ++k)
      for (const auto& group : naming_[order[k]])
        for (std::size_t a : group)
          if (new_id[a] == agents_.size()) {
            new_id[a] = kept.size();
            kept.push_back(a);
          }
    for (std::size_t a : kept) {
      // Label by a generating world inside the extracted part.
      const auto& origin = agents_[a];
      std::size_t label_world = origin.world;
      if (position[label_world] == alive.size()) {
        for (std::size_t k = 0; k < order.size(); ++k) {
          const auto& group = naming_[order[k]][origin.name];
          if (std::find(group.begin(), group.end(), a) != group.end()) {
            label_world = order[k];
            break;
          }
        }
      }
      agent_ids.push_back("a_{" + print_formula(origin.known) + "," + states[position[label_world]] +
                          "," + names_[origin.name] + "}");
    }
    for (std::size_t i = 0; i < agent_ids.size(); ++i)
      for (std::size_t j = 0; j < i; ++j)
        if (agent_ids[i] == agent_ids[j]) agent_ids[i] += "#" + std::to_string(i);

    KripkeModel m(states, agent_ids, names_);
    for (std::size_t k = 0; k < order.size(); ++k) {
      for (std::size_t n = 0; n < names_.size(); ++n) {
        for (std::size_t a : naming_[order[k]][n]) {
          m.assign_name(k, n, new_id[a]);
          const Bits& ext = extensions_[a];
          for (auto v = ext.find_first(); v != Bits::npos; v = ext.find_next(v))
            m.add_edge(new_id[a], k, position[v]);
        }
      }
    }
    for (const auto& p : closure_.propositions) {
      m.declare_proposition(p);
      const std::size_t var = index_.at(atom(p));
      for (std::size_t k = 0; k < order.size(); ++k)
        if (atoms_[alive[order[k]]].test(var)) m.set_true(p, k);
    }
    return m;
  }

  struct AgentOrigin {
    Formula known;
    std::size_t world;
    std::size_t name;
  };

  Formula chi_;
  Closure closure_;
  DecisionOptions options_;
  std::vector<Formula> positives_;
  std::map<Formula, std::size_t> index_;
  std::vector<std::string> names_;
  std::vector<std::vector<std::vector<Literal>>> clauses_at_;
  std::vector<Bits> atoms_;

  std::vector<AgentOrigin> agents_;
  std::vector<Bits> extensions_;
  std::vector<std::vector<std::vector<std::size_t>>> naming_;  // [world][name] -> agents
};

}  // namespace

SatResult satisfiable(const Formula& chi, const DecisionOptions& options) {
  return Tableau(chi, options).run();
}

bool valid(const Formula& chi, const DecisionOptions& options) {
  return satisfiable(negation(chi), options).verdict == Verdict::Unsat;
}

KripkeModel extract_model(const SatResult& r) {
  if (r.verdict != Verdict::Sat || !r.model) throw Error("no model: the query is not satisfiable");
  return *r.model;
}

}  // namespace namelogic
