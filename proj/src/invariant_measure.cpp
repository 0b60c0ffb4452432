#include "glab/invariant_measure.hpp"

#include "glab/errors.hpp"
#include "glab/serialization.hpp"

#include <algorithm>
#include <set>

namespace glab {

// ------------------------------------------------------------------- layout

MeasureLayout MeasureLayout::plain(unsigned alphabet, std::size_t depth) {
  return MeasureLayout{alphabet, depth, {GroupElement()}};
}

namespace {

std::size_t power(std::size_t base, std::size_t exp) {
  std::size_t out = 1;
  for (std::size_t i = 0; i < exp; ++i) out *= base;
  return out;
}

Word word_at(std::size_t index, unsigned alphabet, std::size_t depth) {
  std::string digits(depth, '0');
  for (std::size_t i = depth; i-- > 0;) {
    digits[i] = static_cast<char>('0' + index % alphabet);
    index /= alphabet;
  }
  return Word(digits, alphabet);
}

}  // namespace

std::size_t MeasureLayout::cells() const { return power(power(alphabet, depth), window.size()); }

std::vector<Word> MeasureLayout::cell(std::size_t index) const {
  const std::size_t per = power(alphabet, depth);
  std::vector<Word> out(window.size());
  for (std::size_t i = window.size(); i-- > 0;) {
    out[i] = word_at(index % per, alphabet, depth);
    index /= per;
  }
  return out;
}

std::size_t MeasureLayout::index_of(const std::vector<Word>& words) const {
  if (words.size() != window.size()) throw InvalidInput("cell tuple does not match the window");
  const std::size_t per = power(alphabet, depth);
  std::size_t index = 0;
  for (const auto& w : words) {
    if (w.size() != depth) throw InvalidInput("cell word " + w.str() + " does not have the layout depth");
    index = index * per + word_index(w);
  }
  return index;
}

bool MeasureLayout::cell_in(std::size_t index, const ProductCylinder& p) const {
  const auto words = cell(index);
  for (const auto& [t, w] : p.assignment()) {
    auto it = std::find(window.begin(), window.end(), t);
    if (it == window.end()) throw InvalidInput("cylinder coordinate " + t.to_string() + " is outside the layout window");
    if (w.size() > depth) throw InvalidInput("cylinder word " + w.str() + " is deeper than the layout");
    if (!words[static_cast<std::size_t>(it - window.begin())].has_prefix(w)) return false;
  }
  return true;
}

// ------------------------------------------------------------------ vectors

MeasureVector MeasureVector::product(const MeasureLayout& layout) {
  const std::size_t cells = layout.cells();
  return MeasureVector{layout, std::vector<Rational>(cells, Rational(1, static_cast<long long>(cells)))};
}

Rational MeasureVector::mass(const ProductCylinder& p) const {
  Rational total = 0;
  for (const auto& [i, c] : form_of(layout, p)) total += c * values[i];
  return total;
}

Rational MeasureVector::mass(const ClopenSet& s) const {
  Rational total = 0;
  for (const auto& [i, c] : form_of(layout, s)) total += c * values[i];
  return total;
}

Rational MeasureVector::total() const {
  Rational total = 0;
  for (const auto& v : values) total += v;
  return total;
}

bool MeasureVector::is_probability() const {
  return total() == 1 && std::all_of(values.begin(), values.end(), [](const Rational& v) { return v >= 0; });
}

LinearForm form_of(const MeasureLayout& layout, const ProductCylinder& p) {
  // Words extending a prefix u form the index block [idx(u) n^(d-|u|), (idx(u)+1) n^(d-|u|)).
  const std::size_t per = power(layout.alphabet, layout.depth);
  std::vector<std::pair<std::size_t, std::size_t>> blocks(layout.window.size(), {0, per});
  for (const auto& [t, w] : p.assignment()) {
    auto it = std::find(layout.window.begin(), layout.window.end(), t);
    if (it == layout.window.end()) throw InvalidInput("cylinder coordinate " + t.to_string() + " is outside the layout window");
    if (w.size() > layout.depth) throw InvalidInput("cylinder word " + w.str() + " is deeper than the layout");
    const std::size_t width = power(layout.alphabet, layout.depth - w.size());
    const std::size_t start = (w.is_empty() ? 0 : word_index(w)) * width;
    blocks[static_cast<std::size_t>(it - layout.window.begin())] = {start, start + width};
  }
  LinearForm form;
  std::vector<std::size_t> at(blocks.size());
  for (std::size_t i = 0; i < blocks.size(); ++i) at[i] = blocks[i].first;
  while (true) {
    std::size_t index = 0;
    for (auto v : at) index = index * per + v;
    form.emplace_hint(form.end(), index, 1);
    std::size_t i = blocks.size();
    while (i > 0 && ++at[i - 1] == blocks[i - 1].second) {
      at[i - 1] = blocks[i - 1].first;
      --i;
    }
    if (i == 0) break;
  }
  return form;
}

LinearForm form_of(const MeasureLayout& layout, const ClopenSet& s) {
  if (layout.window.size() != 1) throw InvalidInput("clopen forms need a one-coordinate layout");
  LinearForm form;
  for (const auto& u : s.cylinders()) {
    for (auto& [i, c] : form_of(layout, ProductCylinder(layout.alphabet, {{layout.window[0], u}}))) {
      form[i] += c;
    }
  }
  return form;
}

// ------------------------------------------------------------------ systems

void ConstraintSystem::add(LinearForm lhs, LinearForm rhs, std::string origin) {
  equalities.emplace_back(std::move(lhs), std::move(rhs));
  origins.push_back(std::move(origin));
}

void ConstraintSystem::add(const PrefixBisection& sigma) {
  add(form_of(layout, sigma.source_set()), form_of(layout, sigma.range_set()),
      "sigma(" + sigma.from().str() + "," + sigma.to().str() + ")");
}

void ConstraintSystem::add(const ClopenSet& a, const ClopenSet& b, std::string origin) {
  add(form_of(layout, a), form_of(layout, b), std::move(origin));
}

ConstraintSystem full_bisection_system(unsigned alphabet, std::size_t depth, bool symmetry_reduced) {
  ConstraintSystem system{MeasureLayout::plain(alphabet, depth), {}, {}};
  const auto words = all_words(alphabet, depth);
  for (const auto& u : words) {
    for (const auto& v : words) {
      if (u == v || (symmetry_reduced && v < u)) continue;
      system.add(PrefixBisection(u, v));
    }
  }
  return system;
}

std::string to_string(SolveResult::Kind k) {
  switch (k) {
    case SolveResult::Kind::Unique:
      return "unique";
    case SolveResult::Kind::Space:
      return "space";
    case SolveResult::Kind::Infeasible:
      return "infeasible";
  }
  return "infeasible";
}

namespace {

// Sparse rows, reduced one at a time against the pivot rows found so far. Each
// row pivots on its highest column, so rows x_u - x_v from a bisection family
// reduce in a couple of steps instead of cascading through every earlier pivot.
// The fully reduced form is unique for this column order, so the outcome does
// not depend on the order rows arrive in.
using SparseRow = LinearForm;

struct PivotRow {
  std::size_t pivot;
  SparseRow coeffs;  // coefficient 1 at `pivot`, every other entry below it
  Rational rhs;
  LinearForm combination;  // multipliers of original rows, when tracked
};

struct Elimination {
  std::vector<PivotRow> rows;               // sorted by pivot once complete
  std::optional<LinearForm> contradiction;  // combination giving 0 = c, c != 0
};

void subtract(SparseRow& into, const Rational& factor, const SparseRow& row) {
  for (const auto& [j, c] : row) {
    auto [it, fresh] = into.try_emplace(j, 0);
    it->second -= factor * c;
    if (it->second.sign() == 0) into.erase(it);
  }
}

Elimination eliminate(const ConstraintSystem& system, bool track) {
  Elimination e;
  std::map<std::size_t, std::size_t> pivot_of;  // column -> index into e.rows
  auto feed = [&](SparseRow coeffs, Rational rhs, std::size_t origin) {
    LinearForm combination;
    if (track) combination.emplace(origin, 1);
    for (std::size_t bound = system.layout.cells(); !coeffs.empty();) {
      auto it = coeffs.lower_bound(bound);
      if (it == coeffs.begin()) break;
      --it;
      const std::size_t col = bound = it->first;
      auto p = pivot_of.find(col);
      if (p == pivot_of.end()) continue;
      const Rational factor = it->second;
      const PivotRow& row = e.rows[p->second];
      subtract(coeffs, factor, row.coeffs);
      rhs -= factor * row.rhs;
      if (track) subtract(combination, factor, row.combination);
    }
    if (coeffs.empty()) {
      if (rhs.sign() != 0) e.contradiction = std::move(combination);
      return;
    }
    const std::size_t col = coeffs.rbegin()->first;
    const Rational lead = coeffs.rbegin()->second;
    for (auto& [j, c] : coeffs) c /= lead;
    rhs /= lead;
    for (auto& [j, m] : combination) m /= lead;
    pivot_of.emplace(col, e.rows.size());
    e.rows.push_back(PivotRow{col, std::move(coeffs), std::move(rhs), std::move(combination)});
  };

  for (std::size_t r = 0; r < system.equalities.size() && !e.contradiction; ++r) {
    SparseRow coeffs;
    for (const auto& [i, c] : system.equalities[r].first) coeffs[i] += c;
    for (const auto& [i, c] : system.equalities[r].second) coeffs[i] -= c;
    std::erase_if(coeffs, [](const auto& kv) { return kv.second.sign() == 0; });
    feed(std::move(coeffs), 0, r);
  }
  if (!e.contradiction) {
    SparseRow ones;
    for (std::size_t i = 0; i < system.layout.cells(); ++i) ones.emplace_hint(ones.end(), i, 1);
    feed(std::move(ones), 1, system.equalities.size());
  }
  if (e.contradiction) return e;

  // Back substitution, lowest pivot first, gives the reduced form.
  std::sort(e.rows.begin(), e.rows.end(), [](const PivotRow& a, const PivotRow& b) { return a.pivot < b.pivot; });
  for (std::size_t k = 0; k < e.rows.size(); ++k) {
    const PivotRow& p = e.rows[k];
    for (std::size_t r = k + 1; r < e.rows.size(); ++r) {
      auto it = e.rows[r].coeffs.find(p.pivot);
      if (it == e.rows[r].coeffs.end()) continue;
      const Rational factor = it->second;
      subtract(e.rows[r].coeffs, factor, p.coeffs);
      e.rows[r].rhs -= factor * p.rhs;
      if (track) subtract(e.rows[r].combination, factor, p.combination);
    }
  }
  return e;
}

MeasureVector assemble(const MeasureLayout& layout, const Elimination& e, std::optional<std::size_t> free_one) {
  MeasureVector v{layout, std::vector<Rational>(layout.cells())};
  if (free_one) v.values[*free_one] = 1;
  for (const auto& row : e.rows) {
    Rational value = row.rhs;
    if (free_one) {
      auto it = row.coeffs.find(*free_one);
      if (it != row.coeffs.end()) value -= it->second;
    }
    v.values[row.pivot] = value;
  }
  return v;
}

}  // namespace

SolveResult unique_measure_solve(const ConstraintSystem& system) {
  if (system.equalities.size() != system.origins.size()) throw InvalidInput("constraint origins out of step");
  Elimination e = eliminate(system, false);
  SolveResult result;
  if (e.contradiction) {
    Elimination tracked = eliminate(system, true);
    result.kind = SolveResult::Kind::Infeasible;
    result.multipliers.assign(system.equalities.size() + 1, 0);
    for (const auto& [i, m] : *tracked.contradiction) result.multipliers[i] = m;
    return result;
  }
  std::vector<bool> is_pivot(system.layout.cells(), false);
  for (const auto& row : e.rows) is_pivot[row.pivot] = true;
  result.solution = assemble(system.layout, e, std::nullopt);
  for (std::size_t c = 0; c < is_pivot.size(); ++c) {
    if (!is_pivot[c]) result.representatives.push_back(assemble(system.layout, e, c));
  }
  result.dimension = result.representatives.size();
  result.kind = result.dimension == 0 ? SolveResult::Kind::Unique : SolveResult::Kind::Space;
  return result;
}

bool satisfies(const ConstraintSystem& system, const std::vector<Rational>& values) {
  if (values.size() != system.layout.cells()) return false;
  auto eval = [&](const LinearForm& f) {
    Rational s = 0;
    for (const auto& [i, c] : f) s += c * values[i];
    return s;
  };
  for (const auto& [lhs, rhs] : system.equalities) {
    if (eval(lhs) != eval(rhs)) return false;
  }
  Rational total = 0;
  for (const auto& v : values) total += v;
  return total == 1;
}

bool verifies_infeasibility(const ConstraintSystem& system, const std::vector<Rational>& multipliers) {
  if (multipliers.size() != system.equalities.size() + 1) return false;
  std::vector<Rational> coeffs(system.layout.cells());
  for (std::size_t r = 0; r < system.equalities.size(); ++r) {
    for (const auto& [i, c] : system.equalities[r].first) coeffs[i] += multipliers[r] * c;
    for (const auto& [i, c] : system.equalities[r].second) coeffs[i] -= multipliers[r] * c;
  }
  for (auto& c : coeffs) c += multipliers.back();
  return std::all_of(coeffs.begin(), coeffs.end(), [](const Rational& c) { return c == 0; }) &&
         multipliers.back() != 0;
}

// ----------------------------------------------------------------- twisted

MeasureLayout twisted_layout(unsigned alphabet, std::size_t depth, std::size_t window_size, const GroupSpec& group) {
  if (window_size < 1 || depth < 1) throw InvalidInput("twisted layout bounds must be >= 1");
  std::size_t radius = 0;
  while (ball(group, radius).size() < window_size) ++radius;
  const auto elements = ball(group, radius).elements();
  return MeasureLayout{alphabet, depth, std::vector<GroupElement>(elements.begin(), elements.begin() + window_size)};
}

ConstraintSystem twisted_constraint_system(const MeasureLayout& layout, std::size_t twist_radius) {
  if (layout.window.empty()) throw InvalidInput("twisted constraints need a nonempty window");
  const GroupSpec& group = layout.window.front().spec();
  std::vector<PrefixBisection> options;
  for (std::size_t len = 1; len <= layout.depth; ++len) {
    const auto words = all_words(layout.alphabet, len);
    for (const auto& u : words) {
      for (const auto& v : words) options.emplace_back(u, v);
    }
  }
  ConstraintSystem system{layout, {}, {}};
  std::set<std::pair<LinearForm, LinearForm>> seen;
  const FiniteSubset window(layout.window);
  for (const auto& gamma : ball(group, twist_radius)) {
    const GroupElement back = gamma.inverse();
    std::vector<GroupElement> coords;
    for (const auto& t : layout.window) {
      if (window.contains(back * t)) coords.push_back(t);
    }
    // pick[i] = 0 leaves coordinate i free, otherwise options[pick[i] - 1].
    std::vector<std::size_t> pick(coords.size(), 0);
    while (true) {
      std::size_t i = 0;
      while (i < pick.size() && ++pick[i] == options.size() + 1) pick[i++] = 0;
      if (i == pick.size()) break;
      std::map<GroupElement, BasisConstraint> constraints;
      for (std::size_t c = 0; c < coords.size(); ++c) {
        if (pick[c] != 0) constraints.emplace(coords[c], options[pick[c] - 1]);
      }
      BasisSet set(layout.alphabet, std::move(constraints), gamma);
      LinearForm lhs = form_of(layout, basis_source_range(set, Side::Source));
      LinearForm rhs = form_of(layout, basis_source_range(set, Side::Range));
      if (lhs == rhs) continue;
      if (rhs < lhs) std::swap(lhs, rhs);
      if (!seen.emplace(lhs, rhs).second) continue;
      system.add(std::move(lhs), std::move(rhs), to_json(set).dump());
    }
  }
  return system;
}

TwistedSolve twisted_unique_measure_solve(unsigned alphabet, std::size_t depth, std::size_t window_size,
                                          std::size_t twist_radius, const GroupSpec& group) {
  if (twist_radius < 1) throw InvalidInput("twist radius must be >= 1");
  MeasureLayout layout = twisted_layout(alphabet, depth, window_size, group);
  ConstraintSystem system = twisted_constraint_system(layout, twist_radius);
  TwistedSolve out{unique_measure_solve(system), system.equalities.size(), false};
  if (out.result.kind == SolveResult::Kind::Unique) {
    out.equals_product = out.result.solution.values == MeasureVector::product(layout).values;
  }
  return out;
}

// ------------------------------------------------------------- conditional

Certificate conditional_invariance_check(const MeasureVector& nu, const std::map<GroupElement, ClopenSet>& fixed,
                                         const GroupElement& t_n) {
  const auto& layout = nu.layout;
  auto slot = std::find(layout.window.begin(), layout.window.end(), t_n);
  if (slot == layout.window.end()) throw InvalidInput("conditioning coordinate is outside the window");
  if (fixed.contains(t_n)) throw InvalidInput("conditioning coordinate is also fixed");
  std::vector<std::size_t> fixed_slots;
  for (const auto& [t, u] : fixed) {
    auto it = std::find(layout.window.begin(), layout.window.end(), t);
    if (it == layout.window.end()) throw InvalidInput("fixed coordinate " + t.to_string() + " is outside the window");
    if (u.max_length() > layout.depth) throw InvalidInput("fixed set deeper than the layout");
    fixed_slots.push_back(static_cast<std::size_t>(it - layout.window.begin()));
  }
  const std::size_t n_slot = static_cast<std::size_t>(slot - layout.window.begin());

  // Mass of each depth-d word at t_n inside the fixed set.
  std::vector<Rational> marginal(power(layout.alphabet, layout.depth));
  Rational a = 0;
  for (std::size_t i = 0; i < layout.cells(); ++i) {
    const auto words = layout.cell(i);
    bool inside = true;
    std::size_t f = 0;
    for (const auto& [t, u] : fixed) {
      if (!u.contains(words[fixed_slots[f++]])) {
        inside = false;
        break;
      }
    }
    if (!inside) continue;
    a += nu.values[i];
    marginal[word_index(words[n_slot])] += nu.values[i];
  }
  if (a == 0) throw ConditioningOnNull("conditioning set has measure 0");

  auto mu_n = [&](const Word& w) {
    Rational s = 0;
    for (const auto& z : all_words(layout.alphabet, layout.depth)) {
      if (z.has_prefix(w)) s += marginal[word_index(z)];
    }
    return s / a;
  };

  nlohmann::json compared = nlohmann::json::array();
  nlohmann::json violations = nlohmann::json::array();
  for (std::size_t len = 1; len <= layout.depth; ++len) {
    const auto words = all_words(layout.alphabet, len);
    for (const auto& u : words) {
      const Rational mu_u = mu_n(u);
      const Rational uniform = inverse_power(layout.alphabet, len);
      if (mu_u != uniform) {
        violations.push_back({{"kind", "not_uniform"}, {"word", u.str()}, {"value", to_json(mu_u)}});
      }
      for (const auto& v : words) {
        if (!(u < v)) continue;
        const Rational mu_v = mu_n(v);
        compared.push_back({{"u", u.str()}, {"v", v.str()}, {"mu_u", to_json(mu_u)}, {"mu_v", to_json(mu_v)}});
        if (mu_u != mu_v) {
          violations.push_back({{"kind", "not_invariant"}, {"u", u.str()}, {"v", v.str()},
                                {"mu_u", to_json(mu_u)}, {"mu_v", to_json(mu_v)}});
        }
      }
    }
  }

  Certificate c;
  c.property = "conditional_invariance";
  nlohmann::json fixed_json = nlohmann::json::object();
  for (const auto& [t, u] : fixed) fixed_json[t.to_string()] = to_json(u);
  c.parameters = {{"n", layout.alphabet}, {"depth", layout.depth}, {"t_n", t_n.to_string()}, {"fixed", fixed_json}};
  c.verdict = violations.empty() ? Verdict::Pass : Verdict::Fail;
  c.witnesses = {{"violations", violations}};
  c.details = {{"a", to_json(a)}, {"compared", compared}};
  return c;
}

// ---------------------------------------------------------- pi obstruction

Obstruction pi_obstruction_from_masses(const std::string& measure, const std::string& u_label, const Rational& mass_u,
                                       const std::string& v_label, const Rational& mass_v) {
  if (mass_v == 0) throw InvalidInput("pi_obstruction: V must be nonempty");
  Obstruction o{mass_u > mass_v, mass_u, mass_v, {}};
  o.certificate.property = "not_purely_infinite";
  o.certificate.parameters = {{"measure", measure}, {"U", u_label}, {"V", v_label}};
  o.certificate.verdict = o.obstructed ? Verdict::Pass : Verdict::Vacuous;
  o.certificate.witnesses = {{"mass_U", to_json(mass_u)}, {"mass_V", to_json(mass_v)}};
  o.certificate.details = {{"obstructed", o.obstructed},
                           {"reason", o.obstructed ? "mass(U) > mass(V): no bisection with source U has range inside V"
                                                   : "no obstruction at this pair"}};
  return o;
}

Obstruction pi_obstruction(const MeasureVector& mu, const ClopenSet& u, const ClopenSet& v) {
  if (v.empty()) throw InvalidInput("pi_obstruction: V must be nonempty");
  return pi_obstruction_from_masses("plain", to_json(u).dump(), mu.mass(u), to_json(v).dump(), mu.mass(v));
}

Obstruction pi_obstruction(const MeasureVector& mu, const ProductCylinder& u, const ProductCylinder& v) {
  return pi_obstruction_from_masses("product", to_json(u).dump(), mu.mass(u), to_json(v).dump(), mu.mass(v));
}

// ---------------------------------------------------------- covering bound

CoveringBound minimal_covering_bound(const std::vector<PrefixBisection>& cover, const ClopenSet& target) {
  if (cover.empty()) throw InvalidCover("empty cover");
  ClopenSet sources(target.alphabet());
  for (const auto& sigma : cover) {
    if (sigma.alphabet() != target.alphabet()) throw InvalidCover("cover alphabet differs from the target's");
    if (!sigma.range_set().subset_of(target)) {
      throw InvalidCover("range of sigma(" + sigma.from().str() + "," + sigma.to().str() + ") leaves the target");
    }
    sources = sources | sigma.source_set();
  }
  if (!sources.is_full()) throw InvalidCover("sources do not cover the unit space");
  return {Rational(1, static_cast<long long>(cover.size())), clopen_measure(target)};
}

CoveringBound minimal_covering_bound(const std::vector<BasisSet>& cover, const ProductCylinder& target) {
  if (cover.empty()) throw InvalidCover("empty cover");
  std::vector<ProductCylinder> sources;
  std::set<GroupElement> coords;
  std::size_t depth = 1;
  for (const auto& s : cover) {
    if (!s.all_bisections()) throw InvalidCover("cover members must be made of bisections");
    ProductCylinder range_cyl = basis_source_range(s, Side::Range);
    for (const auto& [t, w] : target.assignment()) {
      auto it = range_cyl.assignment().find(t);
      if (it == range_cyl.assignment().end() || !it->second.has_prefix(w)) {
        throw InvalidCover("a range cylinder leaves the target at " + t.to_string());
      }
    }
    sources.push_back(basis_source_range(s, Side::Source));
    for (const auto& [t, w] : sources.back().assignment()) {
      coords.insert(t);
      depth = std::max(depth, w.size());
    }
  }
  if (coords.empty()) coords.insert(target.assignment().empty() ? GroupElement() : target.assignment().begin()->first);
  MeasureLayout layout{target.alphabet(), depth, std::vector<GroupElement>(coords.begin(), coords.end())};
  for (std::size_t i = 0; i < layout.cells(); ++i) {
    bool covered = std::any_of(sources.begin(), sources.end(),
                               [&](const ProductCylinder& p) { return layout.cell_in(i, p); });
    if (!covered) throw InvalidCover("sources miss a cell of the joint window");
  }
  return {Rational(1, static_cast<long long>(cover.size())), product_measure(target)};
}

}  // namespace glab
