#include "namelogic/closure.hpp"

#include <algorithm>
#include <deque>

#include "namelogic/error.hpp"

namespace namelogic {

bool Closure::contains(const Formula& f) const {
  return std::binary_search(formulas.begin(), formulas.end(), f);
}

Closure closure(const Formula& chi) {
  const Formula core = desugar(chi);
  if (contains_op(core, Op::Distributed) || contains_op(core, Op::Believes))
    throw UnsupportedFragment("closure is defined for the E/S/C fragment only");

  Closure out;
  out.names = names_of(core);
  out.propositions = propositions_of(core);

  std::set<Formula> members;
  std::deque<Formula> pending;
  auto add = [&](const Formula& f) {
    if (members.insert(f).second) pending.push_back(f);
  };

  add(core);
  for (const auto& n : out.names) {
    add(someone(n, verum()));
    add(everyone(n, falsum()));
  }
  while (!pending.empty()) {
    const Formula f = pending.front();
    pending.pop_front();
    if (f.op() != Op::Not) add(negation(f));
    switch (f.op()) {
      case Op::Not:
        add(f.operand());
        break;
      case Op::And:
        add(f.lhs());
        add(f.rhs());
        break;
      case Op::Everyone:
        add(f.operand());
        add(someone(f.symbol(), f.operand()));
        break;
      case Op::Someone:
        add(f.operand());
        break;
      case Op::Common:
        add(f.operand());
        add(everyone(f.symbol(), f.operand()));
        add(everyone(f.symbol(), f));
        break;
      default:
        break;
    }
  }
  out.formulas.assign(members.begin(), members.end());
  return out;
}

}  // namespace namelogic
