#include "namelogic/neighborhood.hpp"

#include <algorithm>
#include <random>
#include <set>

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

std::string format_set(const std::vector<std::string>& ids, const StateSet& set) {
  std::string out = "{";
  for (auto x = set.find_first(); x != StateSet::npos; x = set.find_next(x)) {
    if (out.size() > 1) out += ',';
    out += ids[x];
  }
  return out + "}";
}

StateSet image(const StateSet& set, const StateMap& f, std::size_t target_size) {
  StateSet out(target_size);
  for (auto x = set.find_first(); x != StateSet::npos; x = set.find_next(x)) out.set(f[x]);
  return out;
}

}  // namespace

NeighborhoodModel::NeighborhoodModel(std::vector<std::string> states,
                                     std::vector<std::string> names)
    : states_(std::move(states)),
      names_(std::move(names)),
      state_ids_(index_ids(states_, "state")),
      name_ids_(index_ids(names_, "name")),
      nu_(states_.size(), std::vector<std::vector<StateSet>>(names_.size())) {}

std::optional<std::size_t> NeighborhoodModel::find_state(const std::string& id) const {
  auto it = state_ids_.find(id);
  if (it == state_ids_.end()) return std::nullopt;
  return it->second;
}

std::optional<std::size_t> NeighborhoodModel::find_name(const std::string& id) const {
  auto it = name_ids_.find(id);
  if (it == name_ids_.end()) return std::nullopt;
  return it->second;
}

std::size_t NeighborhoodModel::state_index(const std::string& id) const {
  if (auto i = find_state(id)) return *i;
  throw ModelError("undeclared state '" + id + "'");
}

std::size_t NeighborhoodModel::name_index(const std::string& id) const {
  if (auto i = find_name(id)) return *i;
  throw ModelError("undeclared name '" + id + "'");
}

void NeighborhoodModel::add_neighborhood(std::size_t state, std::size_t name, StateSet set) {
  set.resize(state_count());
  auto& family = nu_.at(state).at(name);
  auto it = std::lower_bound(family.begin(), family.end(), set);
  if (it == family.end() || *it != set) family.insert(it, std::move(set));
}

void NeighborhoodModel::declare_proposition(const std::string& p) {
  valuation_.try_emplace(p, StateSet(state_count()));
}

void NeighborhoodModel::set_true(const std::string& p, std::size_t state) {
  declare_proposition(p);
  valuation_.at(p).set(state);
}

void NeighborhoodModel::set_truth_set(const std::string& p, StateSet states) {
  states.resize(state_count());
  valuation_[p] = std::move(states);
}

const StateSet& NeighborhoodModel::truth_set(const std::string& p) const {
  auto it = valuation_.find(p);
  if (it == valuation_.end()) throw ModelError("undeclared proposition '" + p + "'");
  return it->second;
}

bool NeighborhoodModel::reflexive() const {
  for (std::size_t w = 0; w < state_count(); ++w)
    for (const auto& family : nu_[w])
      for (const auto& x : family)
        if (!x.test(w)) return false;
  return true;
}

bool NeighborhoodModel::operator==(const NeighborhoodModel& other) const {
  return states_ == other.states_ && names_ == other.names_ && nu_ == other.nu_ &&
         valuation_ == other.valuation_;
}

// ---------------------------------------------------------------------------

ComplexAlgebra::ComplexAlgebra(const NeighborhoodModel& m) : frame_(m) {}

StateSet ComplexAlgebra::everyone(std::size_t name, const StateSet& x) const {
  StateSet out = frame_.full_set();
  for (std::size_t w = 0; w < frame_.state_count(); ++w)
    for (const auto& y : frame_.neighborhoods(w, name))
      if (!y.is_subset_of(x)) {
        out.reset(w);
        break;
      }
  return out;
}

StateSet ComplexAlgebra::someone(std::size_t name, const StateSet& x) const {
  StateSet out = frame_.empty_set();
  for (std::size_t w = 0; w < frame_.state_count(); ++w)
    for (const auto& y : frame_.neighborhoods(w, name))
      if (y.is_subset_of(x)) {
        out.set(w);
        break;
      }
  return out;
}

ComplexAlgebra complex_algebra(const NeighborhoodModel& m) { return ComplexAlgebra(m); }

StateSet nbhd_extension(const NeighborhoodModel& m, const Formula& f) {
  switch (f.op()) {
    case Op::Atom:
      return m.truth_set(f.symbol());
    case Op::True:
      return m.full_set();
    case Op::False:
      return m.empty_set();
    case Op::Not:
      return ~nbhd_extension(m, f.operand());
    case Op::And:
      return nbhd_extension(m, f.lhs()) & nbhd_extension(m, f.rhs());
    case Op::Or:
      return nbhd_extension(m, f.lhs()) | nbhd_extension(m, f.rhs());
    case Op::Implies:
      return ~nbhd_extension(m, f.lhs()) | nbhd_extension(m, f.rhs());
    case Op::Iff:
      return ~(nbhd_extension(m, f.lhs()) ^ nbhd_extension(m, f.rhs()));
    case Op::Everyone:
      return ComplexAlgebra(m).everyone(m.name_index(f.symbol()), nbhd_extension(m, f.operand()));
    case Op::Someone:
      return ComplexAlgebra(m).someone(m.name_index(f.symbol()), nbhd_extension(m, f.operand()));
    default:
      throw UnsupportedFragment("neighborhood semantics covers only E and S modalities, got '" +
                                print_formula(f) + "'");
  }
}

bool check_nbhd(const NeighborhoodModel& m, std::size_t state, const Formula& f) {
  if (state >= m.state_count()) throw ModelError("state index out of range");
  return nbhd_extension(m, f).test(state);
}

NeighborhoodModel kripke_to_nbhd(const KripkeModel& m) {
  NeighborhoodModel out(m.states(), m.names());
  for (std::size_t w = 0; w < m.state_count(); ++w)
    for (std::size_t n = 0; n < m.name_count(); ++n) {
      const AgentSet& group = m.named(w, n);
      for (auto a = group.find_first(); a != AgentSet::npos; a = group.find_next(a))
        out.add_neighborhood(w, n, m.successors(a, w));
    }
  for (const auto& [p, truth] : m.valuation()) out.set_truth_set(p, truth);
  return out;
}

std::string neighborhood_label(const NeighborhoodModel& m, const StateSet& set) {
  std::vector<std::string> members;
  for (auto x = set.find_first(); x != StateSet::npos; x = set.find_next(x))
    members.push_back(m.states()[x]);
  std::sort(members.begin(), members.end());
  std::string out = "{";
  for (std::size_t i = 0; i < members.size(); ++i) {
    if (i > 0) out += ',';
    out += members[i];
  }
  return out + "}";
}

KripkeModel nbhd_to_kripke(const NeighborhoodModel& m) {
  if (!m.reflexive())
    throw ModelError("neighborhood model is not reflexive; no reflexive Kripke counterpart");
  std::map<std::string, StateSet> agents;
  for (std::size_t w = 0; w < m.state_count(); ++w)
    for (std::size_t n = 0; n < m.name_count(); ++n)
      for (const auto& x : m.neighborhoods(w, n)) agents.emplace(neighborhood_label(m, x), x);
  std::vector<std::string> ids;
  for (const auto& entry : agents) ids.push_back(entry.first);
  KripkeModel out(m.states(), ids, m.names());
  std::size_t a = 0;
  for (const auto& [id, x] : agents) {
    for (auto w = x.find_first(); w != StateSet::npos; w = x.find_next(w))
      for (auto v = x.find_first(); v != StateSet::npos; v = x.find_next(v)) out.add_edge(a, w, v);
    ++a;
  }
  for (std::size_t w = 0; w < m.state_count(); ++w)
    for (std::size_t n = 0; n < m.name_count(); ++n)
      for (const auto& x : m.neighborhoods(w, n))
        out.assign_name(w, n, out.agent_index(neighborhood_label(m, x)));
  for (const auto& [p, truth] : m.valuation()) out.set_truth_set(p, truth);
  return out;
}

MorphismCheckReport check_core_morphism(const NeighborhoodModel& src, const NeighborhoodModel& dst,
                                        const StateMap& f) {
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
  std::set<std::string> names(src.names().begin(), src.names().end());
  names.insert(dst.names().begin(), dst.names().end());
  static const std::vector<StateSet> none;
  for (std::size_t w = 0; w < src.state_count(); ++w) {
    for (const auto& name : names) {
      const auto sn = src.find_name(name);
      const auto dn = dst.find_name(name);
      const auto& mine = sn ? src.neighborhoods(w, *sn) : none;
      const auto& theirs = dn ? dst.neighborhoods(f[w], *dn) : none;
      std::vector<StateSet> images;
      for (const auto& x : mine) {
        images.push_back(image(x, f, dst.state_count()));
        if (std::find(theirs.begin(), theirs.end(), images.back()) == theirs.end())
          report.violations.push_back({src.states()[w], name, "there",
                                       "image of " + format_set(src.states(), x) +
                                           " is not a neighborhood of " + dst.states()[f[w]]});
      }
      for (const auto& y : theirs)
        if (std::find(images.begin(), images.end(), y) == images.end())
          report.violations.push_back({src.states()[w], name, "back",
                                       format_set(dst.states(), y) + " at " + dst.states()[f[w]] +
                                           " is no image of a neighborhood"});
    }
  }
  return report;
}

// ---------------------------------------------------------------------------

namespace {

using Mask = std::uint64_t;

std::string format_mask(const std::vector<std::string>& ids, Mask mask) {
  StateSet set(ids.size());
  for (std::size_t i = 0; i < ids.size(); ++i) set[i] = ((mask >> i) & 1U) != 0;
  return format_set(ids, set);
}

void exhaustive(const NeighborhoodModel& m, std::size_t name,
                std::vector<AlgebraDiagnostic>& out) {
  const std::size_t n = m.state_count();
  const Mask top = n == 64 ? ~Mask{0} : (Mask{1} << n) - 1;
  const std::size_t subsets = std::size_t{1} << n;
  std::vector<std::vector<Mask>> family(n);
  for (std::size_t w = 0; w < n; ++w)
    for (const auto& y : m.neighborhoods(w, name)) {
      Mask mask = 0;
      for (auto x = y.find_first(); x != StateSet::npos; x = y.find_next(x)) mask |= Mask{1} << x;
      family[w].push_back(mask);
    }
  std::vector<Mask> e(subsets), s(subsets);
  for (std::size_t x = 0; x < subsets; ++x) {
    Mask em = 0, sm = 0;
    for (std::size_t w = 0; w < n; ++w) {
      bool all = true, any = false;
      for (Mask y : family[w]) {
        const bool inside = (y & ~static_cast<Mask>(x)) == 0;
        all = all && inside;
        any = any || inside;
      }
      if (all) em |= Mask{1} << w;
      if (any) sm |= Mask{1} << w;
    }
    e[x] = em;
    s[x] = sm;
  }
  const std::string& id = m.names()[name];
  const auto& ids = m.states();
  if (e[top] != top)
    out.push_back({id, "E_top", "E(top) misses " + format_mask(ids, top & ~e[top])});
  bool meet_ok = true, s_e_ok = true;
  for (std::size_t a = 0; a < subsets && (meet_ok || s_e_ok); ++a) {
    for (std::size_t b = 0; b < subsets; ++b) {
      if (meet_ok && e[a & b] != (e[a] & e[b])) {
        meet_ok = false;
        out.push_back({id, "E_meet",
                       "a=" + format_mask(ids, a) + " b=" + format_mask(ids, b)});
      }
      if (s_e_ok && ((s[a] & e[b]) & ~s[a & b]) != 0) {
        s_e_ok = false;
        out.push_back({id, "S_E_meet",
                       "a=" + format_mask(ids, a) + " b=" + format_mask(ids, b)});
      }
      if (!meet_ok && !s_e_ok) break;
    }
  }
  const Mask lhs = top & ~e[0];
  if (lhs != s[top])
    out.push_back({id, "not_E_bottom", "differs at " + format_mask(ids, lhs ^ s[top])});
}

void sampled(const NeighborhoodModel& m, std::size_t name, const AlgebraCheckOptions& options,
             std::vector<AlgebraDiagnostic>& out) {
  const ComplexAlgebra algebra(m);
  const StateSet top = m.full_set();
  const StateSet bottom = m.empty_set();
  const std::string& id = m.names()[name];
  const auto& ids = m.states();
  if (algebra.everyone(name, top) != top)
    out.push_back({id, "E_top", "E(top) misses " + format_set(ids, top - algebra.everyone(name, top))});
  std::mt19937_64 rng(options.seed + name);
  auto draw = [&] {
    StateSet x(m.state_count());
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = (rng() & 1U) != 0;
    return x;
  };
  bool meet_ok = true, s_e_ok = true;
  for (std::size_t k = 0; k < options.samples; ++k) {
    const StateSet a = draw(), b = draw();
    const StateSet ea = algebra.everyone(name, a), eb = algebra.everyone(name, b);
    if (meet_ok && algebra.everyone(name, a & b) != (ea & eb)) {
      meet_ok = false;
      out.push_back({id, "E_meet", "a=" + format_set(ids, a) + " b=" + format_set(ids, b)});
    }
    if (s_e_ok && !(algebra.someone(name, a) & eb).is_subset_of(algebra.someone(name, a & b))) {
      s_e_ok = false;
      out.push_back({id, "S_E_meet", "a=" + format_set(ids, a) + " b=" + format_set(ids, b)});
    }
  }
  const StateSet lhs = ~algebra.everyone(name, bottom);
  const StateSet rhs = algebra.someone(name, top);
  if (lhs != rhs) out.push_back({id, "not_E_bottom", "differs at " + format_set(ids, lhs ^ rhs)});
}

}  // namespace

std::vector<AlgebraDiagnostic> verify_algebra_equations(const NeighborhoodModel& m,
                                                        const AlgebraCheckOptions& options) {
  std::vector<AlgebraDiagnostic> out;
  const bool small = m.state_count() <= std::min<std::size_t>(options.exhaustive_max_states, 20);
  for (std::size_t name = 0; name < m.name_count(); ++name) {
    if (small)
      exhaustive(m, name, out);
    else
      sampled(m, name, options, out);
  }
  return out;
}

}  // namespace namelogic
