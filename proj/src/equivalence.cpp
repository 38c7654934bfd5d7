#include "namelogic/equivalence.hpp"

#include <algorithm>
#include <array>
#include <map>

#include "namelogic/error.hpp"

namespace namelogic {

namespace {

std::vector<std::string> union_of_names(const KripkeModel& m1, const KripkeModel& m2) {
  std::set<std::string> names(m1.names().begin(), m1.names().end());
  names.insert(m2.names().begin(), m2.names().end());
  return {names.begin(), names.end()};
}

const AgentSet& named_or_empty(const KripkeModel& m, std::size_t w, const std::string& name,
                               const AgentSet& empty) {
  auto n = m.find_name(name);
  return n ? m.named(w, *n) : empty;
}

StateSet image(const StateSet& set, const StateMap& f, std::size_t target_size) {
  StateSet out(target_size);
  for (auto x = set.find_first(); x != StateSet::npos; x = set.find_next(x)) out.set(f[x]);
  return out;
}

bool holds_or_false(const KripkeModel& m, const std::string& p, std::size_t w) {
  return m.has_proposition(p) && m.truth_set(p).test(w);
}

bool atoms_agree(const KripkeModel& m1, std::size_t w1, const KripkeModel& m2, std::size_t w2) {
  for (const auto& [p, truth] : m1.valuation())
    if (truth.test(w1) != holds_or_false(m2, p, w2)) return false;
  for (const auto& [p, truth] : m2.valuation())
    if (truth.test(w2) != holds_or_false(m1, p, w1)) return false;
  return true;
}

// rel[u] = states of m2 related to u.
using Relation = std::vector<StateSet>;

// Full back-and-forth between R_a(w) and R'_a'(w') through rel.
bool full_between(const StateSet& left, const StateSet& right, const Relation& rel) {
  StateSet covered(right.size());
  for (auto u = left.find_first(); u != StateSet::npos; u = left.find_next(u)) {
    if (!rel[u].intersects(right)) return false;
    covered |= rel[u];
  }
  return right.is_subset_of(covered);
}

// First violated clause at (w1, w2) as {clause, name}, or nothing.
std::optional<std::pair<std::string, std::string>> violated_clause(
    const KripkeModel& m1, std::size_t w1, const KripkeModel& m2, std::size_t w2,
    const Relation& rel, const std::vector<std::string>& names) {
  if (!atoms_agree(m1, w1, m2, w2)) return std::make_pair(std::string("0"), std::string());
  const AgentSet none1(m1.agent_count()), none2(m2.agent_count());
  for (const auto& name : names) {
    const AgentSet& g1 = named_or_empty(m1, w1, name, none1);
    const AgentSet& g2 = named_or_empty(m2, w2, name, none2);
    for (auto a = g1.find_first(); a != AgentSet::npos; a = g1.find_next(a)) {
      bool found = false;
      for (auto b = g2.find_first(); b != AgentSet::npos && !found; b = g2.find_next(b))
        found = full_between(m1.successors(a, w1), m2.successors(b, w2), rel);
      if (!found) return std::make_pair(std::string("1"), name);
    }
    for (auto b = g2.find_first(); b != AgentSet::npos; b = g2.find_next(b)) {
      bool found = false;
      for (auto a = g1.find_first(); a != AgentSet::npos && !found; a = g1.find_next(a))
        found = full_between(m1.successors(a, w1), m2.successors(b, w2), rel);
      if (!found) return std::make_pair(std::string("2"), name);
    }
  }
  return std::nullopt;
}

}  // namespace

MorphismCheckReport check_frame_morphism(const KripkeModel& src, const KripkeModel& dst,
                                         const StateMap& f, bool compare_valuations) {
  MorphismCheckReport report;
  if (f.size() != src.state_count()) {
    report.violations.push_back({"", "", "there", "map is not total on the source states"});
    return report;
  }
  for (std::size_t x : f)
    if (x >= dst.state_count()) {
      report.violations.push_back({"", "", "there", "map leaves the target states"});
      return report;
    }
  const auto names = union_of_names(src, dst);
  const AgentSet none_src(src.agent_count()), none_dst(dst.agent_count());
  for (std::size_t w = 0; w < src.state_count(); ++w) {
    const std::size_t fw = f[w];
    if (compare_valuations) {
      for (const auto& [p, truth] : src.valuation())
        if (dst.has_proposition(p) && truth.test(w) != dst.truth_set(p).test(fw))
          report.violations.push_back({src.states()[w], "", "atoms",
                                       "'" + p + "' differs at " + dst.states()[fw]});
    }
    for (const auto& name : names) {
      const AgentSet& g = named_or_empty(src, w, name, none_src);
      const AgentSet& h = named_or_empty(dst, fw, name, none_dst);
      std::vector<StateSet> images;
      for (auto a = g.find_first(); a != AgentSet::npos; a = g.find_next(a)) {
        images.push_back(image(src.successors(a, w), f, dst.state_count()));
        bool found = false;
        for (auto b = h.find_first(); b != AgentSet::npos && !found; b = h.find_next(b))
          found = dst.successors(b, fw) == images.back();
        if (!found)
          report.violations.push_back({src.states()[w], name, "there",
                                       "no agent named " + name + " at " + dst.states()[fw] +
                                           " matches the image of " + src.agents()[a]});
      }
      for (auto b = h.find_first(); b != AgentSet::npos; b = h.find_next(b)) {
        if (std::find(images.begin(), images.end(), dst.successors(b, fw)) == images.end())
          report.violations.push_back({src.states()[w], name, "back",
                                       "agent " + dst.agents()[b] + " at " + dst.states()[fw] +
                                           " is not matched by any agent named " + name});
      }
    }
  }
  return report;
}

MorphismCheckReport check_bisimulation(const KripkeModel& m1, const KripkeModel& m2,
                                       const BisimRelation& b) {
  MorphismCheckReport report;
  Relation rel(m1.state_count(), StateSet(m2.state_count()));
  for (const auto& [x, y] : b) {
    if (x >= m1.state_count() || y >= m2.state_count()) {
      report.violations.push_back({"", "", "0", "pair refers to an undeclared state"});
      return report;
    }
    rel[x].set(y);
  }
  const auto names = union_of_names(m1, m2);
  for (const auto& [x, y] : b) {
    if (auto clause = violated_clause(m1, x, m2, y, rel, names)) {
      report.violations.push_back({m1.states()[x], clause->second, clause->first,
                                   "pair (" + m1.states()[x] + ", " + m2.states()[y] + ")"});
    }
  }
  return report;
}

BisimRelation greatest_bisimulation(const KripkeModel& m1, const KripkeModel& m2) {
  Relation rel(m1.state_count(), StateSet(m2.state_count()));
  for (std::size_t x = 0; x < m1.state_count(); ++x)
    for (std::size_t y = 0; y < m2.state_count(); ++y) rel[x][y] = atoms_agree(m1, x, m2, y);
  const auto names = union_of_names(m1, m2);
  for (bool changed = true; changed;) {
    changed = false;
    for (std::size_t x = 0; x < m1.state_count(); ++x) {
      for (auto y = rel[x].find_first(); y != StateSet::npos; y = rel[x].find_next(y)) {
        if (violated_clause(m1, x, m2, y, rel, names)) {
          rel[x].reset(y);
          changed = true;
        }
      }
    }
  }
  BisimRelation out;
  for (std::size_t x = 0; x < m1.state_count(); ++x)
    for (auto y = rel[x].find_first(); y != StateSet::npos; y = rel[x].find_next(y))
      out.emplace(x, y);
  return out;
}

bool bisimilar(const KripkeModel& m1, std::size_t w1, const KripkeModel& m2, std::size_t w2) {
  return greatest_bisimulation(m1, m2).count({w1, w2}) != 0;
}

BisimRelation graph_relation(const StateMap& f) {
  BisimRelation out;
  for (std::size_t w = 0; w < f.size(); ++w) out.emplace(w, f[w]);
  return out;
}

std::optional<StateMap> as_function(const BisimRelation& b, std::size_t source_states) {
  StateMap out(source_states, 0);
  std::vector<bool> seen(source_states, false);
  for (const auto& [x, y] : b) {
    if (x >= source_states || seen[x]) return std::nullopt;
    seen[x] = true;
    out[x] = y;
  }
  if (std::find(seen.begin(), seen.end(), false) != seen.end()) return std::nullopt;
  return out;
}

// ---------------------------------------------------------------------------
// Modal equivalence for Booleans, E and S.
//
// A state's observable shape under name n, given a partition of the states,
// is the set of classes hit by R_n(w) (all E_n can see) together with the
// minimal class sets among the R_a(w), a in mu(w,n) (all S_n can see, as S_n
// is upward closed). Refining on these shapes until stable yields modal
// equivalence on a finite model.

namespace {

using ClassSet = std::vector<std::size_t>;

struct NameShape {
  ClassSet reach;
  std::vector<ClassSet> minimal;
  auto operator<=>(const NameShape&) const = default;
};

ClassSet classes_of(const StateSet& set, const std::vector<std::size_t>& cls) {
  ClassSet out;
  for (auto x = set.find_first(); x != StateSet::npos; x = set.find_next(x)) out.push_back(cls[x]);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

bool subset(const ClassSet& a, const ClassSet& b) {
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

NameShape shape(const KripkeModel& m, std::size_t w, std::size_t name,
                const std::vector<std::size_t>& cls) {
  NameShape out;
  out.reach = classes_of(m.name_successors(w, name), cls);
  std::vector<ClassSet> all;
  const AgentSet& group = m.named(w, name);
  for (auto a = group.find_first(); a != AgentSet::npos; a = group.find_next(a))
    all.push_back(classes_of(m.successors(a, w), cls));
  std::sort(all.begin(), all.end());
  all.erase(std::unique(all.begin(), all.end()), all.end());
  for (const auto& x : all) {
    const bool dominated = std::any_of(all.begin(), all.end(), [&](const ClassSet& y) {
      return y != x && subset(y, x);
    });
    if (!dominated) out.minimal.push_back(x);
  }
  return out;
}

class Refinement {
 public:
  explicit Refinement(const KripkeModel& m) : m_(m) {
    std::map<std::vector<bool>, std::size_t> ids;
    std::vector<std::size_t> first(m.state_count());
    for (std::size_t w = 0; w < m.state_count(); ++w) {
      std::vector<bool> key;
      for (const auto& [p, truth] : m.valuation()) key.push_back(truth.test(w));
      first[w] = ids.emplace(std::move(key), ids.size()).first->second;
    }
    rounds_.push_back(std::move(first));
    std::size_t count = ids.size();
    while (true) {
      const auto& prev = rounds_.back();
      std::map<std::pair<std::size_t, std::vector<NameShape>>, std::size_t> sigs;
      std::vector<std::size_t> next(m.state_count());
      for (std::size_t w = 0; w < m.state_count(); ++w) {
        std::vector<NameShape> shapes;
        for (std::size_t n = 0; n < m.name_count(); ++n) shapes.push_back(shape(m, w, n, prev));
        next[w] = sigs.emplace(std::make_pair(prev[w], std::move(shapes)), sigs.size())
                      .first->second;
      }
      if (sigs.size() == count) break;
      count = sigs.size();
      rounds_.push_back(std::move(next));
    }
  }

  const std::vector<std::size_t>& final_classes() const { return rounds_.back(); }
  const std::vector<std::size_t>& round(std::size_t k) const { return rounds_[k]; }

  std::optional<std::size_t> split_round(std::size_t u, std::size_t v) const {
    for (std::size_t k = 0; k < rounds_.size(); ++k)
      if (rounds_[k][u] != rounds_[k][v]) return k;
    return std::nullopt;
  }

  const KripkeModel& model() const { return m_; }

 private:
  const KripkeModel& m_;
  std::vector<std::vector<std::size_t>> rounds_;
};

Formula big_or(const std::vector<Formula>& parts) {
  if (parts.empty()) return falsum();
  Formula out = parts.front();
  for (std::size_t i = 1; i < parts.size(); ++i) out = disjunction(out, parts[i]);
  return out;
}

Formula big_and(const std::vector<Formula>& parts) {
  if (parts.empty()) return verum();
  Formula out = parts.front();
  for (std::size_t i = 1; i < parts.size(); ++i) out = conjunction(out, parts[i]);
  return out;
}

// delta(u, v): true at u, false at v; its extension is a union of classes of
// the round at which u and v split.
class Distinguisher {
 public:
  explicit Distinguisher(const Refinement& r) : r_(r), m_(r.model()) {}

  Formula delta(std::size_t u, std::size_t v) {
    if (auto it = memo_.find({u, v}); it != memo_.end()) return it->second;
    const auto k = r_.split_round(u, v);
    if (!k) throw Error("states are modally equivalent");
    Formula out = *k == 0 ? atomic(u, v) : modal(u, v, *k);
    memo_.emplace(std::make_pair(u, v), out);
    return out;
  }

 private:
  Formula atomic(std::size_t u, std::size_t v) const {
    for (const auto& [p, truth] : m_.valuation()) {
      if (truth.test(u) && !truth.test(v)) return atom(p);
      if (!truth.test(u) && truth.test(v)) return negation(atom(p));
    }
    throw Error("split at round 0 without an atomic difference");
  }

  // True on every state of `set`, false at v; v's class must be disjoint
  // from the classes of `set` at the round before `k`.
  Formula cover(const StateSet& set, std::size_t v, std::size_t k) {
    const auto& cls = r_.round(k - 1);
    std::map<std::size_t, std::size_t> representative;
    for (auto x = set.find_first(); x != StateSet::npos; x = set.find_next(x))
      representative.emplace(cls[x], x);
    std::vector<Formula> parts;
    for (const auto& entry : representative) parts.push_back(delta(entry.second, v));
    return big_or(parts);
  }

  std::optional<std::size_t> member_in_class(const StateSet& set, std::size_t c,
                                             const std::vector<std::size_t>& cls) const {
    for (auto x = set.find_first(); x != StateSet::npos; x = set.find_next(x))
      if (cls[x] == c) return x;
    return std::nullopt;
  }

  std::optional<std::size_t> member_outside(const StateSet& set, const ClassSet& classes,
                                            const std::vector<std::size_t>& cls) const {
    for (auto x = set.find_first(); x != StateSet::npos; x = set.find_next(x))
      if (!std::binary_search(classes.begin(), classes.end(), cls[x])) return x;
    return std::nullopt;
  }

  // Some agent named n at `from` whose successor classes are exactly `target`.
  std::size_t agent_with(std::size_t from, std::size_t name, const ClassSet& target,
                         const std::vector<std::size_t>& cls) const {
    const AgentSet& group = m_.named(from, name);
    for (auto a = group.find_first(); a != AgentSet::npos; a = group.find_next(a))
      if (classes_of(m_.successors(a, from), cls) == target) return a;
    throw Error("no agent realizes a minimal class set");
  }

  // S_n(psi) with psi true on R_a(from) for the agent realizing `target`, and
  // false somewhere in every R_b(other), b named n at `other`.
  Formula someone_separator(std::size_t from, std::size_t other, std::size_t name,
                            const ClassSet& target, std::size_t k) {
    const auto& cls = r_.round(k - 1);
    const StateSet& x = m_.successors(agent_with(from, name, target, cls), from);
    std::vector<Formula> parts;
    const AgentSet& group = m_.named(other, name);
    for (auto b = group.find_first(); b != AgentSet::npos; b = group.find_next(b)) {
      const auto y = member_outside(m_.successors(b, other), target, cls);
      parts.push_back(cover(x, *y, k));
    }
    return someone(m_.names()[name], big_and(parts));
  }

  Formula modal(std::size_t u, std::size_t v, std::size_t k) {
    const auto& cls = r_.round(k - 1);
    for (std::size_t n = 0; n < m_.name_count(); ++n) {
      const NameShape su = shape(m_, u, n, cls);
      const NameShape sv = shape(m_, v, n, cls);
      if (su == sv) continue;
      const std::string& name = m_.names()[n];
      const bool named_u = m_.named(u, n).any(), named_v = m_.named(v, n).any();
      if (named_u && !named_v) return someone(name, verum());
      if (!named_u && named_v) return negation(someone(name, verum()));
      const StateSet ru = m_.name_successors(u, n);
      const StateSet rv = m_.name_successors(v, n);
      for (std::size_t c : sv.reach)
        if (!std::binary_search(su.reach.begin(), su.reach.end(), c))
          return everyone(name, cover(ru, *member_in_class(rv, c, cls), k));
      for (std::size_t c : su.reach)
        if (!std::binary_search(sv.reach.begin(), sv.reach.end(), c))
          return negation(everyone(name, cover(rv, *member_in_class(ru, c, cls), k)));
      auto above = [](const std::vector<ClassSet>& minimal, const ClassSet& x) {
        return std::any_of(minimal.begin(), minimal.end(),
                           [&](const ClassSet& y) { return subset(y, x); });
      };
      for (const auto& a : su.minimal)
        if (!above(sv.minimal, a)) return someone_separator(u, v, n, a, k);
      for (const auto& b : sv.minimal)
        if (!above(su.minimal, b)) return negation(someone_separator(v, u, n, b, k));
    }
    throw Error("split without an observable difference");
  }

  const Refinement& r_;
  const KripkeModel& m_;
  std::map<std::pair<std::size_t, std::size_t>, Formula> memo_;
};

std::set<std::string> propositions_of_model(const KripkeModel& m) {
  std::set<std::string> out;
  for (const auto& entry : m.valuation()) out.insert(entry.first);
  return out;
}

}  // namespace

std::vector<std::size_t> modal_equivalence_classes(const KripkeModel& m) {
  return Refinement(m).final_classes();
}

std::optional<Formula> distinguishing_formula(const KripkeModel& m1, std::size_t w1,
                                              const KripkeModel& m2, std::size_t w2) {
  std::set<std::string> props = propositions_of_model(m1);
  const auto more = propositions_of_model(m2);
  props.insert(more.begin(), more.end());
  const std::array<KripkeModel, 2> parts{with_propositions(m1, props),
                                         with_propositions(m2, props)};
  const KripkeModel joined = disjoint_union(parts);
  const std::size_t u = w1;
  const std::size_t v = m1.state_count() + w2;
  const Refinement refinement(joined);
  if (!refinement.split_round(u, v)) return std::nullopt;
  return Distinguisher(refinement).delta(u, v);
}

bool modal_equiv_corpus(const KripkeModel& m1, std::size_t w1, const KripkeModel& m2,
                        std::size_t w2, const std::vector<Formula>& corpus) {
  Evaluator e1(m1), e2(m2);
  return std::all_of(corpus.begin(), corpus.end(),
                     [&](const Formula& f) { return e1.holds(w1, f) == e2.holds(w2, f); });
}

}  // namespace namelogic
