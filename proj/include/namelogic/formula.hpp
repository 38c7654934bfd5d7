#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <set>
#include <string>
#include <string_view>

namespace namelogic {

enum class Op : std::uint8_t {
  Atom,
  True,
  False,
  Not,
  And,
  Or,
  Implies,
  Iff,
  Everyone,     // E[n]
  Someone,      // S[n]
  Common,       // C[n]
  Distributed,  // D[n]
  Believes,     // B[agent;n]
};

bool is_modal(Op op);
bool is_binary(Op op);

namespace detail {
struct FormulaNode;
}

/// Immutable formula tree with shared subterms. Copies are cheap; equality
/// and ordering are structural.
class Formula {
 public:
  /// The constant `true`.
  Formula();

  Op op() const;
  /// Proposition id for atoms, name for modalities, empty otherwise.
  const std::string& symbol() const;
  /// Agent id for B[agent;name], empty otherwise.
  const std::string& agent() const;

  /// Sole operand of a unary connective or modality.
  const Formula& operand() const;
  const Formula& lhs() const;
  const Formula& rhs() const;

  /// Number of nodes in the tree.
  std::size_t size() const;
  std::size_t modal_depth() const;
  std::size_t hash() const;

  /// Identity of the shared node; stable while any copy is alive.
  const void* identity() const { return node_.get(); }

  friend bool operator==(const Formula& a, const Formula& b);
  friend std::strong_ordering operator<=>(const Formula& a, const Formula& b);

  static Formula make(Op op, std::string symbol, std::string agent,
                      const Formula* lhs, const Formula* rhs);

 private:
  explicit Formula(std::shared_ptr<const detail::FormulaNode> node) : node_(std::move(node)) {}

  std::shared_ptr<const detail::FormulaNode> node_;
};

namespace detail {
struct FormulaNode {
  Op op;
  std::string symbol;
  std::string agent;
  Formula lhs;
  Formula rhs;
  std::size_t size;
  std::size_t depth;
  std::size_t hash;
};
}  // namespace detail

Formula atom(std::string proposition);
Formula verum();
Formula falsum();
Formula negation(const Formula& f);
Formula conjunction(const Formula& a, const Formula& b);
Formula disjunction(const Formula& a, const Formula& b);
Formula implication(const Formula& a, const Formula& b);
Formula equivalence(const Formula& a, const Formula& b);
Formula everyone(std::string name, const Formula& f);
Formula someone(std::string name, const Formula& f);
Formula common(std::string name, const Formula& f);
Formula distributed(std::string name, const Formula& f);
Formula believes(std::string agent, std::string name, const Formula& f);

inline Formula operator!(const Formula& f) { return negation(f); }
inline Formula operator&(const Formula& a, const Formula& b) { return conjunction(a, b); }
inline Formula operator|(const Formula& a, const Formula& b) { return disjunction(a, b); }

/// Unary modality with the same kind (and agent, for B) as `like`.
Formula rebuild_modal(const Formula& like, const Formula& operand);

/// Parses the ASCII surface syntax. Throws ParseError.
Formula parse_formula(std::string_view text);

/// Prints with minimal parentheses; parse_formula(print_formula(f)) == f.
std::string print_formula(const Formula& f);

/// Rewrites Or/Implies/Iff into the !/& core; True/False stay primitive.
Formula desugar(const Formula& f);
bool is_core(const Formula& f);

/// Reflexive-transitive subterms of the desugared formula.
std::set<Formula> subformulas(const Formula& f);

std::set<std::string> propositions_of(const Formula& f);
std::set<std::string> names_of(const Formula& f);
std::set<std::string> agents_of(const Formula& f);
bool contains_op(const Formula& f, Op op);

}  // namespace namelogic

template <>
struct std::hash<namelogic::Formula> {
  std::size_t operator()(const namelogic::Formula& f) const noexcept { return f.hash(); }
};
