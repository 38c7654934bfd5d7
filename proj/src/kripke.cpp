#include "namelogic/kripke.hpp"

#include <algorithm>
#include <deque>
#include <random>

#include "namelogic/error.hpp"

namespace namelogic {

namespace {

std::unordered_map<std::string, std::size_t> index_ids(const std::vector<std::string>& ids,
                                                       const char* what) {
  std::unordered_map<std::string, std::size_t> out;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (ids[i].empty()) throw ModelError(std::string("empty ") + what + " id");
    if (!out.emplace(ids[i], i).second)
      throw ModelError(std::string("duplicate ") + what + " '" + ids[i] + "'");
  }
  return out;
}

std::optional<std::size_t> lookup(const std::unordered_map<std::string, std::size_t>& ids,
                                  const std::string& id) {
  auto it = ids.find(id);
  if (it == ids.end()) return std::nullopt;
  return it->second;
}

}  // namespace

KripkeModel::KripkeModel(std::vector<std::string> states, std::vector<std::string> agents,
                         std::vector<std::string> names)
    : states_(std::move(states)),
      agents_(std::move(agents)),
      names_(std::move(names)),
      state_ids_(index_ids(states_, "state")),
      agent_ids_(index_ids(agents_, "agent")),
      name_ids_(index_ids(names_, "name")),
      successors_(agents_.size(), std::vector<StateSet>(states_.size(), StateSet(states_.size()))),
      naming_(states_.size(), std::vector<AgentSet>(names_.size(), AgentSet(agents_.size()))) {}

std::optional<std::size_t> KripkeModel::find_state(const std::string& id) const {
  return lookup(state_ids_, id);
}
std::optional<std::size_t> KripkeModel::find_agent(const std::string& id) const {
  return lookup(agent_ids_, id);
}
std::optional<std::size_t> KripkeModel::find_name(const std::string& id) const {
  return lookup(name_ids_, id);
}

std::size_t KripkeModel::state_index(const std::string& id) const {
  if (auto i = find_state(id)) return *i;
  throw ModelError("undeclared state '" + id + "'");
}
std::size_t KripkeModel::agent_index(const std::string& id) const {
  if (auto i = find_agent(id)) return *i;
  throw ModelError("undeclared agent '" + id + "'");
}
std::size_t KripkeModel::name_index(const std::string& id) const {
  if (auto i = find_name(id)) return *i;
  throw ModelError("undeclared name '" + id + "'");
}

void KripkeModel::add_edge(std::size_t agent, std::size_t from, std::size_t to) {
  successors_.at(agent).at(from).set(to);
}

void KripkeModel::assign_name(std::size_t state, std::size_t name, std::size_t agent) {
  naming_.at(state).at(name).set(agent);
}

void KripkeModel::declare_proposition(const std::string& p) {
  valuation_.try_emplace(p, StateSet(state_count()));
}

void KripkeModel::set_true(const std::string& p, std::size_t state) {
  declare_proposition(p);
  valuation_.at(p).set(state);
}

void KripkeModel::set_truth_set(const std::string& p, StateSet states) {
  states.resize(state_count());
  valuation_[p] = std::move(states);
}

const StateSet& KripkeModel::truth_set(const std::string& p) const {
  auto it = valuation_.find(p);
  if (it == valuation_.end()) throw ModelError("undeclared proposition '" + p + "'");
  return it->second;
}

StateSet KripkeModel::name_successors(std::size_t state, std::size_t name) const {
  StateSet out = empty_set();
  const AgentSet& group = named(state, name);
  for (auto a = group.find_first(); a != AgentSet::npos; a = group.find_next(a))
    out |= successors(a, state);
  return out;
}

bool KripkeModel::is_named_anywhere(std::size_t state, std::size_t agent) const {
  return std::any_of(naming_[state].begin(), naming_[state].end(),
                     [&](const AgentSet& group) { return group.test(agent); });
}

bool KripkeModel::operator==(const KripkeModel& other) const {
  return states_ == other.states_ && agents_ == other.agents_ && names_ == other.names_ &&
         successors_ == other.successors_ && naming_ == other.naming_ &&
         valuation_ == other.valuation_;
}

// ---------------------------------------------------------------------------

std::vector<Diagnostic> validate_model(const KripkeModel& m, ValidationMode mode) {
  std::vector<Diagnostic> out;
  if (m.state_count() == 0) out.push_back({Severity::Error, "no-states", "model has no states"});

  const Severity side_condition =
      mode == ValidationMode::Strict ? Severity::Error : Severity::Warning;
  for (std::size_t a = 0; a < m.agent_count(); ++a) {
    for (std::size_t w = 0; w < m.state_count(); ++w) {
      const bool named = m.is_named_anywhere(w, a);
      if (named && !m.successors(a, w).test(w)) {
        out.push_back({Severity::Error, "reflexivity",
                       "agent '" + m.agents()[a] + "' is named at '" + m.states()[w] +
                           "' but has no loop there"});
      }
      if (!named && m.successors(a, w).any()) {
        out.push_back({side_condition, "naming-side-condition",
                       "agent '" + m.agents()[a] + "' has edges from '" + m.states()[w] +
                           "' where it bears no name"});
      }
    }
  }

  if (mode == ValidationMode::Epistemic) {
    for (std::size_t a = 0; a < m.agent_count(); ++a) {
      StateSet field = m.empty_set();
      for (std::size_t w = 0; w < m.state_count(); ++w) {
        if (m.successors(a, w).any()) {
          field.set(w);
          field |= m.successors(a, w);
        }
      }
      std::string problem;
      for (auto x = field.find_first(); x != StateSet::npos && problem.empty();
           x = field.find_next(x)) {
        const StateSet& succ = m.successors(a, x);
        if (!succ.test(x)) problem = "not reflexive at '" + m.states()[x] + "'";
        for (auto y = succ.find_first(); y != StateSet::npos && problem.empty();
             y = succ.find_next(y)) {
          if (!m.successors(a, y).test(x))
            problem = "not symmetric on ('" + m.states()[x] + "','" + m.states()[y] + "')";
          else if (!m.successors(a, y).is_subset_of(succ))
            problem = "not transitive through '" + m.states()[y] + "'";
        }
      }
      if (!problem.empty()) {
        out.push_back({Severity::Error, "not-equivalence",
                       "relation of agent '" + m.agents()[a] + "' is " + problem});
      }
    }
  }
  return out;
}

bool has_errors(const std::vector<Diagnostic>& diagnostics) {
  return std::any_of(diagnostics.begin(), diagnostics.end(),
                     [](const Diagnostic& d) { return d.severity == Severity::Error; });
}

// ---------------------------------------------------------------------------

Evaluator::Evaluator(const KripkeModel& model) : model_(model) {}

const StateSet& Evaluator::extension(const Formula& f) {
  if (auto it = cache_.find(f.identity()); it != cache_.end()) return it->second.second;
  StateSet value = compute(f);
  return cache_.emplace(f.identity(), std::make_pair(f, std::move(value))).first->second.second;
}

StateSet Evaluator::can_reach(std::size_t name, const StateSet& target) const {
  // Least fixpoint of Y = pre(target | Y) where pre(Z) = {x | R_n(x) meets Z}.
  std::vector<StateSet> step;
  step.reserve(model_.state_count());
  for (std::size_t x = 0; x < model_.state_count(); ++x)
    step.push_back(model_.name_successors(x, name));
  StateSet reach = model_.empty_set();
  StateSet goal = target;
  for (bool changed = true; changed;) {
    changed = false;
    for (std::size_t x = 0; x < model_.state_count(); ++x) {
      if (!reach.test(x) && step[x].intersects(goal)) {
        reach.set(x);
        goal.set(x);
        changed = true;
      }
    }
  }
  return reach;
}

StateSet Evaluator::reachable(std::size_t state, std::size_t name) const {
  StateSet seen = model_.empty_set();
  std::deque<std::size_t> queue{state};
  while (!queue.empty()) {
    const std::size_t x = queue.front();
    queue.pop_front();
    const StateSet next = model_.name_successors(x, name);
    for (auto y = next.find_first(); y != StateSet::npos; y = next.find_next(y)) {
      if (!seen.test(y)) {
        seen.set(y);
        queue.push_back(y);
      }
    }
  }
  return seen;
}

StateSet Evaluator::compute(const Formula& f) {
  const std::size_t n_states = model_.state_count();
  switch (f.op()) {
    case Op::Atom:
      return model_.truth_set(f.symbol());
    case Op::True:
      return model_.full_set();
    case Op::False:
      return model_.empty_set();
    case Op::Not:
      return ~extension(f.operand());
    case Op::And:
      return extension(f.lhs()) & extension(f.rhs());
    case Op::Or:
      return extension(f.lhs()) | extension(f.rhs());
    case Op::Implies:
      return ~extension(f.lhs()) | extension(f.rhs());
    case Op::Iff:
      return ~(extension(f.lhs()) ^ extension(f.rhs()));
    case Op::Everyone:
    case Op::Someone:
    case Op::Distributed: {
      const std::size_t name = model_.name_index(f.symbol());
      const StateSet inner = extension(f.operand());
      StateSet out = model_.empty_set();
      for (std::size_t w = 0; w < n_states; ++w) {
        const AgentSet& group = model_.named(w, name);
        bool value;
        if (f.op() == Op::Distributed) {
          // Pooling the whole group is optimal: intersections only shrink.
          StateSet pooled = model_.full_set();
          for (auto a = group.find_first(); a != AgentSet::npos; a = group.find_next(a))
            pooled &= model_.successors(a, w);
          value = group.any() && pooled.is_subset_of(inner);
        } else {
          const bool universal = f.op() == Op::Everyone;
          value = universal;
          for (auto a = group.find_first(); a != AgentSet::npos; a = group.find_next(a)) {
            if (model_.successors(a, w).is_subset_of(inner) != universal) {
              value = !universal;
              break;
            }
          }
        }
        out[w] = value;
      }
      return out;
    }
    case Op::Common: {
      const std::size_t name = model_.name_index(f.symbol());
      return ~can_reach(name, ~extension(f.operand()));
    }
    case Op::Believes: {
      const std::size_t agent = model_.agent_index(f.agent());
      const std::size_t name = model_.name_index(f.symbol());
      const StateSet inner = extension(f.operand());
      StateSet out = model_.full_set();
      for (std::size_t w = 0; w < n_states; ++w) {
        const StateSet& succ = model_.successors(agent, w);
        for (auto v = succ.find_first(); v != StateSet::npos; v = succ.find_next(v)) {
          if (model_.named(v, name).test(agent) && !inner.test(v)) {
            out.reset(w);
            break;
          }
        }
      }
      return out;
    }
  }
  return model_.empty_set();
}

namespace {

std::optional<Witness> explain(const KripkeModel& m, Evaluator& eval, std::size_t w,
                               const Formula& f, bool value) {
  if (!is_modal(f.op())) return std::nullopt;
  const StateSet& inner = eval.extension(f.operand());
  const auto& states = m.states();
  const auto& agents = m.agents();
  switch (f.op()) {
    case Op::Someone:
    case Op::Everyone: {
      const AgentSet& group = m.named(w, m.name_index(f.symbol()));
      for (auto a = group.find_first(); a != AgentSet::npos; a = group.find_next(a)) {
        const StateSet& succ = m.successors(a, w);
        if (f.op() == Op::Someone && value && succ.is_subset_of(inner))
          return Witness{{agents[a]}, {}};
        if (f.op() == Op::Everyone && !value && !succ.is_subset_of(inner)) {
          const auto v = (succ - inner).find_first();
          return Witness{{agents[a]}, {states[w], states[v]}};
        }
      }
      return std::nullopt;
    }
    case Op::Distributed: {
      if (!value) return std::nullopt;
      Witness out;
      const AgentSet& group = m.named(w, m.name_index(f.symbol()));
      for (auto a = group.find_first(); a != AgentSet::npos; a = group.find_next(a))
        out.agents.push_back(agents[a]);
      return out;
    }
    case Op::Common: {
      if (value) return std::nullopt;
      // BFS with parent pointers to the first refuting state.
      const std::size_t name = m.name_index(f.symbol());
      const std::size_t none = m.state_count();
      std::vector<std::size_t> parent(m.state_count(), none);
      std::vector<std::size_t> via(m.state_count(), 0);
      std::vector<bool> seen(m.state_count(), false);
      std::deque<std::size_t> queue{w};
      while (!queue.empty()) {
        const std::size_t x = queue.front();
        queue.pop_front();
        const AgentSet& group = m.named(x, name);
        for (auto a = group.find_first(); a != AgentSet::npos; a = group.find_next(a)) {
          const StateSet& succ = m.successors(a, x);
          for (auto y = succ.find_first(); y != StateSet::npos; y = succ.find_next(y)) {
            if (seen[y]) continue;
            seen[y] = true;
            parent[y] = x;
            via[y] = a;
            if (!inner.test(y)) {
              Witness out;
              std::vector<std::size_t> chain{y};
              for (std::size_t z = y; z != w || chain.size() == 1;) {
                z = parent[z];
                chain.push_back(z);
                if (z == w) break;
              }
              std::reverse(chain.begin(), chain.end());
              for (std::size_t i = 0; i < chain.size(); ++i) {
                out.path.push_back(states[chain[i]]);
                if (i > 0) out.agents.push_back(agents[via[chain[i]]]);
              }
              return out;
            }
            queue.push_back(y);
          }
        }
      }
      return std::nullopt;
    }
    case Op::Believes: {
      if (value) return std::nullopt;
      const std::size_t agent = m.agent_index(f.agent());
      const std::size_t name = m.name_index(f.symbol());
      const StateSet& succ = m.successors(agent, w);
      for (auto v = succ.find_first(); v != StateSet::npos; v = succ.find_next(v))
        if (m.named(v, name).test(agent) && !inner.test(v))
          return Witness{{agents[agent]}, {states[w], states[v]}};
      return std::nullopt;
    }
    default:
      return std::nullopt;
  }
}

}  // namespace

TruthResult check(const KripkeModel& m, std::size_t state, const Formula& f) {
  if (state >= m.state_count()) throw ModelError("state index out of range");
  Evaluator eval(m);
  TruthResult out;
  out.value = eval.holds(state, f);
  out.witness = explain(m, eval, state, f, out.value);
  return out;
}

TruthResult check(const KripkeModel& m, const std::string& state, const Formula& f) {
  return check(m, m.state_index(state), f);
}

StateSet extension(const KripkeModel& m, const Formula& f) {
  Evaluator eval(m);
  return eval.extension(f);
}

std::optional<FrameCountermodel> frame_countermodel(const KripkeModel& frame, const Formula& f,
                                                    std::size_t max_bits) {
  const std::set<std::string> props = propositions_of(f);
  const std::size_t n = frame.state_count();
  const std::size_t bits = props.size() * n;
  if (bits > max_bits || bits >= 64)
    throw BudgetExceeded("frame validity needs 2^" + std::to_string(bits) +
                         " valuations; cap is 2^" + std::to_string(max_bits));
  KripkeModel model = frame;
  const std::vector<std::string> ordered(props.begin(), props.end());
  for (std::uint64_t code = 0; code < (std::uint64_t{1} << bits); ++code) {
    for (std::size_t i = 0; i < ordered.size(); ++i) {
      StateSet truth(n);
      for (std::size_t w = 0; w < n; ++w) truth[w] = ((code >> (i * n + w)) & 1U) != 0;
      model.set_truth_set(ordered[i], std::move(truth));
    }
    Evaluator eval(model);
    const StateSet& ext = eval.extension(f);
    if (!ext.all()) {
      return FrameCountermodel{model, (~ext).find_first()};
    }
  }
  return std::nullopt;
}

bool frame_valid(const KripkeModel& frame, const Formula& f, std::size_t max_bits) {
  return !frame_countermodel(frame, f, max_bits).has_value();
}

// ---------------------------------------------------------------------------

KripkeModel generated_submodel(const KripkeModel& m, std::size_t state) {
  StateSet keep = m.empty_set();
  keep.set(state);
  std::deque<std::size_t> queue{state};
  while (!queue.empty()) {
    const std::size_t x = queue.front();
    queue.pop_front();
    for (std::size_t a = 0; a < m.agent_count(); ++a) {
      const StateSet& succ = m.successors(a, x);
      for (auto y = succ.find_first(); y != StateSet::npos; y = succ.find_next(y)) {
        if (!keep.test(y)) {
          keep.set(y);
          queue.push_back(y);
        }
      }
    }
  }
  std::vector<std::size_t> old_of;
  std::vector<std::size_t> new_of(m.state_count(), 0);
  std::vector<std::string> ids;
  for (auto x = keep.find_first(); x != StateSet::npos; x = keep.find_next(x)) {
    new_of[x] = old_of.size();
    old_of.push_back(x);
    ids.push_back(m.states()[x]);
  }
  KripkeModel out(std::move(ids), m.agents(), m.names());
  for (std::size_t i = 0; i < old_of.size(); ++i) {
    const std::size_t x = old_of[i];
    for (std::size_t a = 0; a < m.agent_count(); ++a) {
      const StateSet& succ = m.successors(a, x);
      for (auto y = succ.find_first(); y != StateSet::npos; y = succ.find_next(y))
        out.add_edge(a, i, new_of[y]);
    }
    for (std::size_t n = 0; n < m.name_count(); ++n) {
      const AgentSet& group = m.named(x, n);
      for (auto a = group.find_first(); a != AgentSet::npos; a = group.find_next(a))
        out.assign_name(i, n, a);
    }
  }
  for (const auto& [p, truth] : m.valuation()) {
    out.declare_proposition(p);
    for (std::size_t i = 0; i < old_of.size(); ++i)
      if (truth.test(old_of[i])) out.set_true(p, i);
  }
  return out;
}

KripkeModel disjoint_union(std::span<const KripkeModel> models) {
  if (models.empty()) throw ModelError("disjoint union of no models");
  std::vector<std::string> states, agents, names;
  std::vector<std::size_t> state_offset, agent_offset;
  for (std::size_t i = 0; i < models.size(); ++i) {
    const std::string tag = std::to_string(i) + ":";
    state_offset.push_back(states.size());
    agent_offset.push_back(agents.size());
    for (const auto& s : models[i].states()) states.push_back(tag + s);
    for (const auto& a : models[i].agents()) agents.push_back(tag + a);
    for (const auto& n : models[i].names())
      if (std::find(names.begin(), names.end(), n) == names.end()) names.push_back(n);
  }
  KripkeModel out(std::move(states), std::move(agents), names);
  for (std::size_t i = 0; i < models.size(); ++i) {
    const KripkeModel& m = models[i];
    for (std::size_t w = 0; w < m.state_count(); ++w) {
      for (std::size_t a = 0; a < m.agent_count(); ++a) {
        const StateSet& succ = m.successors(a, w);
        for (auto v = succ.find_first(); v != StateSet::npos; v = succ.find_next(v))
          out.add_edge(agent_offset[i] + a, state_offset[i] + w, state_offset[i] + v);
      }
      for (std::size_t n = 0; n < m.name_count(); ++n) {
        const std::size_t target = out.name_index(m.names()[n]);
        const AgentSet& group = m.named(w, n);
        for (auto a = group.find_first(); a != AgentSet::npos; a = group.find_next(a))
          out.assign_name(state_offset[i] + w, target, agent_offset[i] + a);
      }
    }
    for (const auto& [p, truth] : m.valuation()) {
      out.declare_proposition(p);
      for (auto w = truth.find_first(); w != StateSet::npos; w = truth.find_next(w))
        out.set_true(p, state_offset[i] + w);
    }
  }
  return out;
}

StateMap union_inclusion(std::span<const KripkeModel> models, std::size_t index) {
  std::size_t offset = 0;
  for (std::size_t i = 0; i < index; ++i) offset += models[i].state_count();
  StateMap out(models[index].state_count());
  for (std::size_t w = 0; w < out.size(); ++w) out[w] = offset + w;
  return out;
}

StateMap map_by_state_ids(const KripkeModel& src, const KripkeModel& dst) {
  StateMap out;
  out.reserve(src.state_count());
  for (const auto& id : src.states()) out.push_back(dst.state_index(id));
  return out;
}

KripkeModel with_propositions(const KripkeModel& m, const std::set<std::string>& props) {
  KripkeModel out = m;
  for (const auto& p : props) out.declare_proposition(p);
  return out;
}

KripkeModel close_relations(const KripkeModel& m, RelationClosure closure) {
  KripkeModel out = m;
  const std::size_t n = m.state_count();
  for (std::size_t a = 0; a < m.agent_count(); ++a) {
    std::vector<StateSet> rel(n);
    for (std::size_t w = 0; w < n; ++w) rel[w] = m.successors(a, w);
    if (closure.reflexive)
      for (std::size_t w = 0; w < n; ++w) rel[w].set(w);
    if (closure.symmetric)
      for (std::size_t w = 0; w < n; ++w)
        for (std::size_t v = 0; v < n; ++v)
          if (rel[w].test(v)) rel[v].set(w);
    if (closure.transitive)
      for (std::size_t k = 0; k < n; ++k)
        for (std::size_t w = 0; w < n; ++w)
          if (rel[w].test(k)) rel[w] |= rel[k];
    for (std::size_t w = 0; w < n; ++w)
      for (auto v = rel[w].find_first(); v != StateSet::npos; v = rel[w].find_next(v))
        out.add_edge(a, w, v);
  }
  return out;
}

namespace {

// Portable across standard libraries, unlike std::uniform_*_distribution.
struct Rng {
  std::mt19937_64 engine;
  double uniform() { return static_cast<double>(engine() >> 11) * 0x1.0p-53; }
  std::size_t below(std::size_t n) { return static_cast<std::size_t>(engine() % n); }
  bool chance(double p) { return uniform() < p; }
};

std::string agent_label(std::size_t i) {
  if (i < 26) return std::string(1, static_cast<char>('a' + i));
  return "a" + std::to_string(i);
}

std::string name_label(std::size_t i) {
  if (i == 0) return "n";
  if (i == 1) return "m";
  return "n" + std::to_string(i);
}

}  // namespace

KripkeModel random_model(const RandomModelParams& params) {
  if (params.states == 0) throw ModelError("random model needs at least one state");
  Rng rng{std::mt19937_64(params.seed)};
  std::vector<std::string> states, agents, names;
  for (std::size_t i = 0; i < params.states; ++i) states.push_back("s" + std::to_string(i));
  for (std::size_t i = 0; i < params.agents; ++i) agents.push_back(agent_label(i));
  for (std::size_t i = 0; i < params.names; ++i) names.push_back(name_label(i));
  KripkeModel m(std::move(states), std::move(agents), std::move(names));
  const std::size_t n = params.states;

  for (std::size_t w = 0; w < n; ++w)
    for (std::size_t k = 0; k < params.names; ++k)
      for (std::size_t a = 0; a < params.agents; ++a)
        if (rng.chance(params.naming_density)) m.assign_name(w, k, a);

  for (std::size_t a = 0; a < params.agents; ++a) {
    if (params.mode == RandomMode::Epistemic) {
      const std::size_t blocks = 1 + rng.below(n);
      std::vector<std::size_t> block(n);
      for (auto& b : block) b = rng.below(blocks);
      for (std::size_t w = 0; w < n; ++w)
        for (std::size_t v = 0; v < n; ++v)
          if (block[w] == block[v]) m.add_edge(a, w, v);
    } else {
      for (std::size_t w = 0; w < n; ++w) {
        for (std::size_t v = 0; v < n; ++v)
          if (rng.chance(params.edge_density)) m.add_edge(a, w, v);
        if (m.is_named_anywhere(w, a)) m.add_edge(a, w, w);
      }
    }
  }

  for (const auto& p : params.propositions) {
    m.declare_proposition(p);
    for (std::size_t w = 0; w < n; ++w)
      if (rng.chance(0.5)) m.set_true(p, w);
  }
  return m;
}

}  // namespace namelogic
