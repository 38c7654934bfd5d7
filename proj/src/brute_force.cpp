// Bounded exhaustive model search, evaluated 64 valuations at a time.

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <stdexcept>

#include "namelogic/decision.hpp"
#include "namelogic/error.hpp"

namespace namelogic {

namespace {

using Lane = std::uint64_t;
using Mask = std::uint32_t;

constexpr std::size_t kMaxStates = 8;

// Bit j of kPattern[b] is bit b of j: valuation index bits below 6 vary
// inside a 64-wide block.
constexpr Lane kPattern[6] = {0xAAAAAAAAAAAAAAAAULL, 0xCCCCCCCCCCCCCCCCULL, 0xF0F0F0F0F0F0F0F0ULL,
                              0xFF00FF00FF00FF00ULL, 0xFFFF0000FFFF0000ULL, 0xFFFFFFFF00000000ULL};

struct Node {
  Op op;
  std::size_t lhs = 0;
  std::size_t rhs = 0;
  std::size_t index = 0;  // proposition or name
  std::size_t agent = 0;
};

class Search {
 public:
  Search(const Formula& chi, const BruteForceBounds& bounds) : chi_(chi), bounds_(bounds) {
    const auto props = propositions_of(chi);
    const auto names = names_of(chi);
    props_.assign(props.begin(), props.end());
    names_.assign(names.begin(), names.end());
    for (const auto& a : agents_of(chi)) agents_.push_back(a);
    for (std::size_t k = 1; agents_.size() < bounds.max_agents; ++k) {
      const std::string id = "x" + std::to_string(k);
      if (std::find(agents_.begin(), agents_.end(), id) == agents_.end()) agents_.push_back(id);
    }
    with_b_ = contains_op(chi, Op::Believes);
    if (bounds.max_states > kMaxStates)
      throw BudgetExceeded("bounded search supports at most " + std::to_string(kMaxStates) +
                           " states");
    if (agents_.size() > 32 || names_.size() > 16)
      throw BudgetExceeded("too many agents or names for bounded search");
    root_ = flatten(chi);
  }

  std::optional<PointedModel> run() {
    double total = 0;
    for (std::size_t s = 1; s <= bounds_.max_states; ++s) total += cost(s);
    if (total > bounds_.budget)
      throw BudgetExceeded("bounded search needs about " + std::to_string(total) +
                           " evaluations; budget is " + std::to_string(bounds_.budget));
    for (std::size_t s = 1; s <= bounds_.max_states; ++s)
      if (auto found = search(s)) return found;
    return std::nullopt;
  }

 private:
  std::size_t flatten(const Formula& f) {
    if (auto it = ids_.find(f); it != ids_.end()) return it->second;
    Node node{f.op()};
    switch (f.op()) {
      case Op::Atom:
        node.index = static_cast<std::size_t>(
            std::find(props_.begin(), props_.end(), f.symbol()) - props_.begin());
        break;
      case Op::True:
      case Op::False:
        break;
      case Op::Not:
        node.lhs = flatten(f.operand());
        break;
      case Op::And:
      case Op::Or:
      case Op::Implies:
      case Op::Iff:
        node.lhs = flatten(f.lhs());
        node.rhs = flatten(f.rhs());
        break;
      default:
        node.lhs = flatten(f.operand());
        node.index = static_cast<std::size_t>(
            std::find(names_.begin(), names_.end(), f.symbol()) - names_.begin());
        if (f.op() == Op::Believes)
          node.agent = static_cast<std::size_t>(
              std::find(agents_.begin(), agents_.end(), f.agent()) - agents_.begin());
        break;
    }
    nodes_.push_back(node);
    ids_.emplace(f, nodes_.size() - 1);
    return nodes_.size() - 1;
  }

  // Choices for one (state, agent) slot: bearing no name (successors free
  // only when B is present), or some nonempty name set with a loop.
  double slot_choices(std::size_t states) const {
    const double named = (std::pow(2.0, static_cast<double>(names_.size())) - 1) *
                         std::pow(2.0, static_cast<double>(states - 1));
    const double unnamed = with_b_ ? std::pow(2.0, static_cast<double>(states)) : 1.0;
    return named + unnamed;
  }

  std::size_t valuation_bits(std::size_t states) const { return states * props_.size(); }

  double cost(std::size_t states) const {
    const std::size_t bits = valuation_bits(states);
    const double blocks = bits <= 6 ? 1.0 : std::pow(2.0, static_cast<double>(bits - 6));
    return std::pow(slot_choices(states), static_cast<double>(states * agents_.size())) * blocks;
  }

  std::optional<PointedModel> search(std::size_t states) {
    const std::size_t slots = states * agents_.size();
    const std::uint64_t unnamed = with_b_ ? (std::uint64_t{1} << states) : 1;
    const std::uint64_t per_slot = static_cast<std::uint64_t>(slot_choices(states));
    const std::uint64_t other_subsets = std::uint64_t{1} << (states - 1);
    std::vector<std::uint64_t> choice(slots, 0);
    naming_.assign(states, std::vector<Mask>(names_.size(), 0));
    rel_.assign(agents_.size(), std::vector<Mask>(states, 0));
    while (true) {
      for (auto& row : naming_) std::fill(row.begin(), row.end(), 0);
      for (std::size_t slot = 0; slot < slots; ++slot) {
        const std::size_t w = slot / agents_.size();
        const std::size_t a = slot % agents_.size();
        std::uint64_t c = choice[slot];
        if (c < unnamed) {
          rel_[a][w] = with_b_ ? static_cast<Mask>(c) : 0;
          continue;
        }
        c -= unnamed;
        const std::uint64_t name_set = 1 + c / other_subsets;
        const std::uint64_t others = c % other_subsets;
        for (std::size_t n = 0; n < names_.size(); ++n)
          if ((name_set >> n) & 1U) naming_[w][n] |= Mask{1} << a;
        // Spread the bits of `others` over the states other than w.
        Mask succ = Mask{1} << w;
        for (std::size_t v = 0, bit = 0; v < states; ++v) {
          if (v == w) continue;
          if ((others >> bit) & 1U) succ |= Mask{1} << v;
          ++bit;
        }
        rel_[a][w] = succ;
      }
      if (auto found = evaluate_frame(states)) return found;
      std::size_t k = 0;
      while (k < slots && ++choice[k] == per_slot) choice[k++] = 0;
      if (k == slots) break;
    }
    return std::nullopt;
  }

  std::optional<PointedModel> evaluate_frame(std::size_t states) {
    // R_n successors and their transitive closure, per name.
    std::vector<std::vector<Mask>> reach(names_.size(), std::vector<Mask>(states, 0));
    for (std::size_t n = 0; n < names_.size(); ++n) {
      auto& r = reach[n];
      for (std::size_t w = 0; w < states; ++w)
        for (std::size_t a = 0; a < agents_.size(); ++a)
          if ((naming_[w][n] >> a) & 1U) r[w] |= rel_[a][w];
      for (std::size_t k = 0; k < states; ++k)
        for (std::size_t w = 0; w < states; ++w)
          if ((r[w] >> k) & 1U) r[w] |= r[k];
    }
    const std::size_t bits = valuation_bits(states);
    const std::uint64_t blocks = bits <= 6 ? 1 : std::uint64_t{1} << (bits - 6);
    const Lane live = bits >= 6 ? ~Lane{0} : (Lane{1} << (std::size_t{1} << bits)) - 1;
    values_.assign(nodes_.size() * states, 0);
    for (std::uint64_t block = 0; block < blocks; ++block) {
      for (std::size_t i = 0; i < nodes_.size(); ++i) eval_node(i, states, block, reach);
      const Lane hit = values_[root_ * states] & live;
      if (hit != 0) {
        const std::uint64_t valuation = block * 64 + static_cast<std::uint64_t>(std::countr_zero(hit));
        return build(states, valuation);
      }
    }
    return std::nullopt;
  }

  Lane all_of(std::size_t node, Mask set, std::size_t states) const {
    Lane out = ~Lane{0};
    for (std::size_t v = 0; v < states; ++v)
      if ((set >> v) & 1U) out &= values_[node * states + v];
    return out;
  }

  void eval_node(std::size_t i, std::size_t states, std::uint64_t block,
                 const std::vector<std::vector<Mask>>& reach) {
    const Node& node = nodes_[i];
    Lane* out = &values_[i * states];
    const Lane* l = &values_[node.lhs * states];
    const Lane* r = &values_[node.rhs * states];
    for (std::size_t w = 0; w < states; ++w) {
      Lane value = 0;
      switch (node.op) {
        case Op::Atom: {
          const std::size_t bit = w * props_.size() + node.index;
          value = bit < 6 ? kPattern[bit] : (((block >> (bit - 6)) & 1U) ? ~Lane{0} : 0);
          break;
        }
        case Op::True:
          value = ~Lane{0};
          break;
        case Op::False:
          value = 0;
          break;
        case Op::Not:
          value = ~l[w];
          break;
        case Op::And:
          value = l[w] & r[w];
          break;
        case Op::Or:
          value = l[w] | r[w];
          break;
        case Op::Implies:
          value = ~l[w] | r[w];
          break;
        case Op::Iff:
          value = ~(l[w] ^ r[w]);
          break;
        case Op::Everyone:
        case Op::Someone: {
          const Mask group = naming_[w][node.index];
          const bool universal = node.op == Op::Everyone;
          value = universal ? ~Lane{0} : 0;
          for (std::size_t a = 0; a < agents_.size(); ++a) {
            if (!((group >> a) & 1U)) continue;
            const Lane knows = all_of(node.lhs, rel_[a][w], states);
            value = universal ? (value & knows) : (value | knows);
          }
          break;
        }
        case Op::Distributed: {
          const Mask group = naming_[w][node.index];
          if (group == 0) break;
          Mask pooled = ~Mask{0};
          for (std::size_t a = 0; a < agents_.size(); ++a)
            if ((group >> a) & 1U) pooled &= rel_[a][w];
          value = all_of(node.lhs, pooled, states);
          break;
        }
        case Op::Common:
          value = all_of(node.lhs, reach[node.index][w], states);
          break;
        case Op::Believes: {
          Mask seen = 0;
          for (std::size_t v = 0; v < states; ++v)
            if (((rel_[node.agent][w] >> v) & 1U) && ((naming_[v][node.index] >> node.agent) & 1U))
              seen |= Mask{1} << v;
          value = all_of(node.lhs, seen, states);
          break;
        }
      }
      out[w] = value;
    }
  }

  PointedModel build(std::size_t states, std::uint64_t valuation) const {
    std::vector<std::string> ids;
    for (std::size_t w = 0; w < states; ++w) ids.push_back("s" + std::to_string(w));
    KripkeModel m(ids, agents_, names_);
    for (std::size_t a = 0; a < agents_.size(); ++a)
      for (std::size_t w = 0; w < states; ++w)
        for (std::size_t v = 0; v < states; ++v)
          if ((rel_[a][w] >> v) & 1U) m.add_edge(a, w, v);
    for (std::size_t w = 0; w < states; ++w)
      for (std::size_t n = 0; n < names_.size(); ++n)
        for (std::size_t a = 0; a < agents_.size(); ++a)
          if ((naming_[w][n] >> a) & 1U) m.assign_name(w, n, a);
    for (std::size_t p = 0; p < props_.size(); ++p) {
      m.declare_proposition(props_[p]);
      for (std::size_t w = 0; w < states; ++w)
        if ((valuation >> (w * props_.size() + p)) & 1U) m.set_true(props_[p], w);
    }
    if (!check(m, std::size_t{0}, chi_).value)
      throw std::logic_error("bounded search produced a model that fails re-verification");
    return {std::move(m), 0};
  }

  Formula chi_;
  BruteForceBounds bounds_;
  std::vector<std::string> props_;
  std::vector<std::string> names_;
  std::vector<std::string> agents_;
  bool with_b_ = false;
  std::vector<Node> nodes_;
  std::map<Formula, std::size_t> ids_;
  std::size_t root_ = 0;

  std::vector<std::vector<Mask>> naming_;  // [state][name] -> agents
  std::vector<std::vector<Mask>> rel_;     // [agent][state] -> successors
  std::vector<Lane> values_;               // [node * states + state]
};

}  // namespace

std::optional<PointedModel> brute_force_sat(const Formula& chi, const BruteForceBounds& bounds) {
  if (bounds.max_states == 0) return std::nullopt;
  return Search(chi, bounds).run();
}

SatResult bounded_sat(const Formula& chi, const BruteForceBounds& bounds) {
  SatResult out;
  if (auto found = brute_force_sat(chi, bounds)) {
    out.verdict = Verdict::Sat;
    out.state = found->state;
    out.model = std::move(found->model);
  } else {
    out.verdict = Verdict::SatBoundedUnknown;
  }
  return out;
}

}  // namespace namelogic
