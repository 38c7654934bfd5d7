#include "support.hpp"

#include <algorithm>

#include "namelogic/model_io.hpp"

namespace namelogic::testing {

std::string data_path(const std::string& file) { return std::string(NAMELOGIC_DATA_DIR) + "/" + file; }

KripkeModel figure1() { return kripke_from_json(load_json_file(data_path("figure1.json"))); }

std::vector<Formula> corpus20() {
  static const char* const texts[] = {
      "p",
      "q",
      "!p",
      "p & q",
      "p | !q",
      "p -> q",
      "true",
      "false",
      "S[n] p",
      "E[n] q",
      "!S[n] p",
      "E[n] (p | q)",
      "S[m] q",
      "E[m] !p",
      "S[n] E[n] p",
      "E[n] S[n] q",
      "C[n] p",
      "p <-> S[n] q",
      "S[n] (p & !q) | E[m] q",
      "!E[n] false & S[n] true",
  };
  std::vector<Formula> out;
  for (const char* t : texts) out.push_back(parse_formula(t));
  return out;
}

Formula random_formula(Rng& rng, const FormulaShape& shape) {
  auto pick = [&](std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng); };
  if (shape.depth == 0 || pick(5) == 0) {
    const std::size_t k = pick(shape.props.size() + 2);
    if (k == shape.props.size()) return verum();
    if (k == shape.props.size() + 1) return falsum();
    return atom(shape.props[k]);
  }
  FormulaShape inner = shape;
  inner.depth = shape.depth - 1;
  const std::string& n = shape.names[pick(shape.names.size())];
  std::vector<int> ops = {0, 1, 2, 3, 4, 5};
  if (shape.common) ops.push_back(6);
  if (shape.distributed) ops.push_back(7);
  switch (ops[pick(ops.size())]) {
    case 0:
      return negation(random_formula(rng, inner));
    case 1:
      return conjunction(random_formula(rng, inner), random_formula(rng, inner));
    case 2:
      return disjunction(random_formula(rng, inner), random_formula(rng, inner));
    case 3:
      return implication(random_formula(rng, inner), random_formula(rng, inner));
    case 4:
      return everyone(n, random_formula(rng, inner));
    case 5:
      return someone(n, random_formula(rng, inner));
    case 6:
      return common(n, random_formula(rng, inner));
    default:
      return distributed(n, random_formula(rng, inner));
  }
}

std::vector<Formula> random_corpus(std::uint64_t seed, std::size_t count, const FormulaShape& shape) {
  Rng rng(seed);
  std::vector<Formula> out;
  for (std::size_t i = 0; i < count; ++i) out.push_back(random_formula(rng, shape));
  return out;
}

NeighborhoodModel random_nbhd(Rng& rng, std::size_t states, std::size_t names, bool reflexive) {
  std::vector<std::string> ids, name_ids;
  for (std::size_t i = 0; i < states; ++i) ids.push_back("s" + std::to_string(i));
  for (std::size_t i = 0; i < names; ++i) name_ids.push_back(i == 0 ? "n" : "n" + std::to_string(i + 1));
  NeighborhoodModel m(ids, name_ids);
  std::bernoulli_distribution coin(0.5);
  std::uniform_int_distribution<std::size_t> count(0, 3);
  for (std::size_t w = 0; w < states; ++w) {
    for (std::size_t n = 0; n < names; ++n) {
      const std::size_t k = count(rng);
      for (std::size_t i = 0; i < k; ++i) {
        StateSet x = m.empty_set();
        for (std::size_t v = 0; v < states; ++v)
          if (coin(rng)) x.set(v);
        if (reflexive) x.set(w);
        m.add_neighborhood(w, n, std::move(x));
      }
    }
  }
  for (const char* p : {"p", "q"}) {
    m.declare_proposition(p);
    for (std::size_t w = 0; w < states; ++w)
      if (coin(rng)) m.set_true(p, w);
  }
  return m;
}

namespace {

bool naive(const KripkeModel& m, std::size_t w, const Formula& f);

bool all_successors(const KripkeModel& m, std::size_t a, std::size_t w, const Formula& f) {
  for (std::size_t v = 0; v < m.state_count(); ++v)
    if (m.successors(a, w).test(v) && !naive(m, v, f)) return false;
  return true;
}

bool naive(const KripkeModel& m, std::size_t w, const Formula& f) {
  switch (f.op()) {
    case Op::Atom:
      return m.has_proposition(f.symbol()) && m.truth_set(f.symbol()).test(w);
    case Op::True:
      return true;
    case Op::False:
      return false;
    case Op::Not:
      return !naive(m, w, f.operand());
    case Op::And:
      return naive(m, w, f.lhs()) && naive(m, w, f.rhs());
    case Op::Or:
      return naive(m, w, f.lhs()) || naive(m, w, f.rhs());
    case Op::Implies:
      return !naive(m, w, f.lhs()) || naive(m, w, f.rhs());
    case Op::Iff:
      return naive(m, w, f.lhs()) == naive(m, w, f.rhs());
    default:
      break;
  }
  const std::size_t n = m.name_index(f.symbol());
  const AgentSet& group = m.named(w, n);
  switch (f.op()) {
    case Op::Everyone:
      for (std::size_t a = 0; a < m.agent_count(); ++a)
        if (group.test(a) && !all_successors(m, a, w, f.operand())) return false;
      return true;
    case Op::Someone:
      for (std::size_t a = 0; a < m.agent_count(); ++a)
        if (group.test(a) && all_successors(m, a, w, f.operand())) return true;
      return false;
    case Op::Common: {
      // Depth-bounded unfolding: paths of length 1..|W| reach everything.
      std::vector<bool> seen(m.state_count(), false);
      std::vector<std::size_t> frontier = {w};
      for (std::size_t step = 0; step < m.state_count(); ++step) {
        std::vector<std::size_t> next;
        for (std::size_t x : frontier)
          for (std::size_t a = 0; a < m.agent_count(); ++a)
            if (m.named(x, n).test(a))
              for (std::size_t y = 0; y < m.state_count(); ++y)
                if (m.successors(a, x).test(y) && !seen[y]) {
                  seen[y] = true;
                  next.push_back(y);
                }
        frontier = std::move(next);
      }
      for (std::size_t y = 0; y < m.state_count(); ++y)
        if (seen[y] && !naive(m, y, f.operand())) return false;
      return true;
    }
    case Op::Distributed: {
      std::vector<std::size_t> members;
      for (std::size_t a = 0; a < m.agent_count(); ++a)
        if (group.test(a)) members.push_back(a);
      for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << members.size()); ++mask) {
        bool ok = true;
        for (std::size_t v = 0; v < m.state_count() && ok; ++v) {
          bool in_all = true;
          for (std::size_t i = 0; i < members.size(); ++i)
            if ((mask >> i & 1) && !m.successors(members[i], w).test(v)) in_all = false;
          if (in_all && !naive(m, v, f.operand())) ok = false;
        }
        if (ok) return true;
      }
      return false;
    }
    case Op::Believes: {
      const std::size_t i = m.agent_index(f.agent());
      for (std::size_t v = 0; v < m.state_count(); ++v)
        if (m.successors(i, w).test(v) && m.named(v, n).test(i) && !naive(m, v, f.operand()))
          return false;
      return true;
    }
    default:
      return false;
  }
}

}  // namespace

bool naive_holds(const KripkeModel& m, std::size_t w, const Formula& f) { return naive(m, w, f); }

}  // namespace namelogic::testing
