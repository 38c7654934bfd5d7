#include "namelogic/formula.hpp"

#include <cassert>
#include <functional>
#include <utility>

namespace namelogic {

bool is_modal(Op op) {
  switch (op) {
    case Op::Everyone:
    case Op::Someone:
    case Op::Common:
    case Op::Distributed:
    case Op::Believes:
      return true;
    default:
      return false;
  }
}

bool is_binary(Op op) {
  return op == Op::And || op == Op::Or || op == Op::Implies || op == Op::Iff;
}

namespace {

std::size_t mix(std::size_t seed, std::size_t value) {
  return seed ^ (value + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

// FNV-1a; std::hash<std::string> is not specified to be stable.
std::size_t string_hash(const std::string& s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return static_cast<std::size_t>(h);
}

}  // namespace

Formula Formula::make(Op op, std::string symbol, std::string agent, const Formula* lhs,
                      const Formula* rhs) {
  auto node = std::make_shared<detail::FormulaNode>(detail::FormulaNode{
      op, std::move(symbol), std::move(agent), Formula(nullptr), Formula(nullptr), 1, 0, 0});
  std::size_t h = mix(static_cast<std::size_t>(op) + 1, string_hash(node->symbol));
  h = mix(h, string_hash(node->agent));
  if (lhs != nullptr) {
    node->lhs = *lhs;
    node->size += lhs->size();
    node->depth = lhs->modal_depth();
    h = mix(h, lhs->hash());
  }
  if (rhs != nullptr) {
    node->rhs = *rhs;
    node->size += rhs->size();
    node->depth = std::max(node->depth, rhs->modal_depth());
    h = mix(h, rhs->hash());
  }
  if (is_modal(op)) ++node->depth;
  node->hash = h;
  return Formula(std::move(node));
}

Formula::Formula() {
  static const Formula top = make(Op::True, "", "", nullptr, nullptr);
  node_ = top.node_;
}

Op Formula::op() const { return node_->op; }
const std::string& Formula::symbol() const { return node_->symbol; }
const std::string& Formula::agent() const { return node_->agent; }
std::size_t Formula::size() const { return node_->size; }
std::size_t Formula::modal_depth() const { return node_->depth; }
std::size_t Formula::hash() const { return node_->hash; }

const Formula& Formula::operand() const {
  assert(node_->lhs.node_ && !node_->rhs.node_);
  return node_->lhs;
}

const Formula& Formula::lhs() const {
  assert(node_->lhs.node_);
  return node_->lhs;
}

const Formula& Formula::rhs() const {
  assert(node_->rhs.node_);
  return node_->rhs;
}

bool operator==(const Formula& a, const Formula& b) {
  if (a.node_ == b.node_) return true;
  if (a.hash() != b.hash() || a.size() != b.size()) return false;
  return (a <=> b) == std::strong_ordering::equal;
}

std::strong_ordering operator<=>(const Formula& a, const Formula& b) {
  const auto* x = a.node_.get();
  const auto* y = b.node_.get();
  if (x == y) return std::strong_ordering::equal;
  if (x == nullptr) return std::strong_ordering::less;
  if (y == nullptr) return std::strong_ordering::greater;
  if (auto c = x->size <=> y->size; c != 0) return c;
  if (auto c = x->op <=> y->op; c != 0) return c;
  if (auto c = x->symbol <=> y->symbol; c != 0) return c;
  if (auto c = x->agent <=> y->agent; c != 0) return c;
  if (auto c = x->lhs <=> y->lhs; c != 0) return c;
  return x->rhs <=> y->rhs;
}

Formula atom(std::string proposition) {
  return Formula::make(Op::Atom, std::move(proposition), "", nullptr, nullptr);
}
Formula verum() { return Formula(); }
Formula falsum() {
  static const Formula bottom = Formula::make(Op::False, "", "", nullptr, nullptr);
  return bottom;
}
Formula negation(const Formula& f) { return Formula::make(Op::Not, "", "", &f, nullptr); }
Formula conjunction(const Formula& a, const Formula& b) {
  return Formula::make(Op::And, "", "", &a, &b);
}
Formula disjunction(const Formula& a, const Formula& b) {
  return Formula::make(Op::Or, "", "", &a, &b);
}
Formula implication(const Formula& a, const Formula& b) {
  return Formula::make(Op::Implies, "", "", &a, &b);
}
Formula equivalence(const Formula& a, const Formula& b) {
  return Formula::make(Op::Iff, "", "", &a, &b);
}
Formula everyone(std::string name, const Formula& f) {
  return Formula::make(Op::Everyone, std::move(name), "", &f, nullptr);
}
Formula someone(std::string name, const Formula& f) {
  return Formula::make(Op::Someone, std::move(name), "", &f, nullptr);
}
Formula common(std::string name, const Formula& f) {
  return Formula::make(Op::Common, std::move(name), "", &f, nullptr);
}
Formula distributed(std::string name, const Formula& f) {
  return Formula::make(Op::Distributed, std::move(name), "", &f, nullptr);
}
Formula believes(std::string agent, std::string name, const Formula& f) {
  return Formula::make(Op::Believes, std::move(name), std::move(agent), &f, nullptr);
}

Formula rebuild_modal(const Formula& like, const Formula& operand) {
  assert(is_modal(like.op()));
  return Formula::make(like.op(), like.symbol(), like.agent(), &operand, nullptr);
}

// ---------------------------------------------------------------------------
// Printing

namespace {

// Loosest to tightest.
int precedence(Op op) {
  switch (op) {
    case Op::Iff:
      return 1;
    case Op::Implies:
      return 2;
    case Op::Or:
      return 3;
    case Op::And:
      return 4;
    default:
      return 5;
  }
}

const char* infix(Op op) {
  switch (op) {
    case Op::And:
      return " & ";
    case Op::Or:
      return " | ";
    case Op::Implies:
      return " -> ";
    case Op::Iff:
      return " <-> ";
    default:
      return "";
  }
}

void print_into(const Formula& f, std::string& out);

void print_child(const Formula& f, int min_precedence, std::string& out) {
  if (precedence(f.op()) < min_precedence) {
    out += '(';
    print_into(f, out);
    out += ')';
  } else {
    print_into(f, out);
  }
}

void print_into(const Formula& f, std::string& out) {
  switch (f.op()) {
    case Op::Atom:
      out += f.symbol();
      return;
    case Op::True:
      out += "true";
      return;
    case Op::False:
      out += "false";
      return;
    case Op::Not:
      out += '!';
      print_child(f.operand(), 5, out);
      return;
    case Op::Everyone:
    case Op::Someone:
    case Op::Common:
    case Op::Distributed: {
      static constexpr const char* kLetters = "ESCD";
      out += kLetters[static_cast<int>(f.op()) - static_cast<int>(Op::Everyone)];
      out += '[';
      out += f.symbol();
      out += "] ";
      print_child(f.operand(), 5, out);
      return;
    }
    case Op::Believes:
      out += "B[";
      out += f.agent();
      out += ';';
      out += f.symbol();
      out += "] ";
      print_child(f.operand(), 5, out);
      return;
    case Op::Implies: {
      // right-associative
      const int p = precedence(f.op());
      print_child(f.lhs(), p + 1, out);
      out += infix(f.op());
      print_child(f.rhs(), p, out);
      return;
    }
    case Op::And:
    case Op::Or:
    case Op::Iff: {
      const int p = precedence(f.op());
      print_child(f.lhs(), p, out);
      out += infix(f.op());
      print_child(f.rhs(), p + 1, out);
      return;
    }
  }
}

}  // namespace

std::string print_formula(const Formula& f) {
  std::string out;
  print_into(f, out);
  return out;
}

// ---------------------------------------------------------------------------
// Desugaring and traversal

Formula desugar(const Formula& f) {
  switch (f.op()) {
    case Op::Atom:
    case Op::True:
    case Op::False:
      return f;
    case Op::Not: {
      Formula g = desugar(f.operand());
      return g == f.operand() ? f : negation(g);
    }
    case Op::And: {
      Formula a = desugar(f.lhs());
      Formula b = desugar(f.rhs());
      return (a == f.lhs() && b == f.rhs()) ? f : conjunction(a, b);
    }
    case Op::Or:
      return negation(conjunction(negation(desugar(f.lhs())), negation(desugar(f.rhs()))));
    case Op::Implies:
      return negation(conjunction(desugar(f.lhs()), negation(desugar(f.rhs()))));
    case Op::Iff: {
      Formula a = desugar(f.lhs());
      Formula b = desugar(f.rhs());
      return conjunction(negation(conjunction(a, negation(b))),
                         negation(conjunction(b, negation(a))));
    }
    default: {
      Formula g = desugar(f.operand());
      return g == f.operand() ? f : rebuild_modal(f, g);
    }
  }
}

bool is_core(const Formula& f) {
  switch (f.op()) {
    case Op::Or:
    case Op::Implies:
    case Op::Iff:
      return false;
    case Op::Atom:
    case Op::True:
    case Op::False:
      return true;
    case Op::And:
      return is_core(f.lhs()) && is_core(f.rhs());
    default:
      return is_core(f.operand());
  }
}

namespace {

void visit(const Formula& f, const std::function<void(const Formula&)>& fn) {
  fn(f);
  if (f.op() == Op::Atom || f.op() == Op::True || f.op() == Op::False) return;
  if (is_binary(f.op())) {
    visit(f.lhs(), fn);
    visit(f.rhs(), fn);
  } else {
    visit(f.operand(), fn);
  }
}

}  // namespace

std::set<Formula> subformulas(const Formula& f) {
  std::set<Formula> out;
  visit(desugar(f), [&](const Formula& g) { out.insert(g); });
  return out;
}

std::set<std::string> propositions_of(const Formula& f) {
  std::set<std::string> out;
  visit(f, [&](const Formula& g) {
    if (g.op() == Op::Atom) out.insert(g.symbol());
  });
  return out;
}

std::set<std::string> names_of(const Formula& f) {
  std::set<std::string> out;
  visit(f, [&](const Formula& g) {
    if (is_modal(g.op())) out.insert(g.symbol());
  });
  return out;
}

std::set<std::string> agents_of(const Formula& f) {
  std::set<std::string> out;
  visit(f, [&](const Formula& g) {
    if (g.op() == Op::Believes) out.insert(g.agent());
  });
  return out;
}

bool contains_op(const Formula& f, Op op) {
  bool found = false;
  visit(f, [&](const Formula& g) { found = found || g.op() == op; });
  return found;
}

}  // namespace namelogic
