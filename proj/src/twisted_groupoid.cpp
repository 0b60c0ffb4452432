#include "glab/twisted_groupoid.hpp"

#include "glab/errors.hpp"
#include "glab/parallel.hpp"
#include "glab/serialization.hpp"

#include <algorithm>

namespace glab {

namespace {

void require_depth(const Word& w, std::size_t depth, unsigned alphabet) {
  if (w.size() != depth || w.alphabet() != alphabet) {
    throw InvalidInput("coordinate word " + w.str() + " does not match depth " + std::to_string(depth));
  }
}

std::string describe(const GroupElement& t) { return t.to_string(); }

}  // namespace

// ---------------------------------------------------------------- UnitPoint

UnitPoint::UnitPoint(unsigned alphabet, std::size_t depth, std::map<GroupElement, Word> coordinates)
    : alphabet_(alphabet), depth_(depth), coordinates_(std::move(coordinates)) {
  for (const auto& [t, w] : coordinates_) require_depth(w, depth_, alphabet_);
}

UnitPoint UnitPoint::constant(const FiniteSubset& window, const Word& w) {
  std::map<GroupElement, Word> coords;
  for (const auto& t : window) coords.emplace(t, w);
  return UnitPoint(w.alphabet(), w.size(), std::move(coords));
}

FiniteSubset UnitPoint::window() const {
  std::vector<GroupElement> keys;
  for (const auto& [t, w] : coordinates_) keys.push_back(t);
  return FiniteSubset(std::move(keys));
}

const Word* UnitPoint::at(const GroupElement& t) const {
  auto it = coordinates_.find(t);
  return it == coordinates_.end() ? nullptr : &it->second;
}

bool UnitPoint::consistent_with(const UnitPoint& other) const {
  for (const auto& [t, w] : coordinates_) {
    const Word* v = other.at(t);
    if (v != nullptr && *v != w) return false;
  }
  return true;
}

UnitPoint UnitPoint::translate(const GroupElement& g) const {
  std::map<GroupElement, Word> moved;
  for (const auto& [t, w] : coordinates_) moved.emplace(g * t, w);
  return UnitPoint(alphabet_, depth_, std::move(moved));
}

// ----------------------------------------------------------- SupportedArrow

SupportedArrow::SupportedArrow(unsigned alphabet, std::size_t depth, GroupElement twist,
                               std::map<GroupElement, SftArrow> entries)
    : alphabet_(alphabet), depth_(depth), twist_(std::move(twist)), entries_(std::move(entries)) {
  for (const auto& [t, g] : entries_) {
    if (g.depth() != depth_ || g.alphabet() != alphabet_) {
      throw InvalidInput("entry at " + describe(t) + " does not match depth " + std::to_string(depth_));
    }
    if (!(t.spec() == twist_.spec())) throw InvalidInput("entry index outside the twist's group");
  }
}

SupportedArrow SupportedArrow::unit(const UnitPoint& x) {
  GroupElement e = x.coordinates().empty() ? GroupElement() : GroupElement::identity(x.coordinates().begin()->first.spec());
  return units_with_twist(x, e);
}

SupportedArrow SupportedArrow::units_with_twist(const UnitPoint& x, const GroupElement& gamma) {
  std::map<GroupElement, SftArrow> entries;
  for (const auto& [t, w] : x.coordinates()) entries.emplace(t, SftArrow::unit(w));
  return SupportedArrow(x.alphabet(), x.depth(), gamma, std::move(entries));
}

FiniteSubset SupportedArrow::window() const {
  std::vector<GroupElement> keys;
  for (const auto& [t, g] : entries_) keys.push_back(t);
  return FiniteSubset(std::move(keys));
}

std::map<GroupElement, SftArrow> SupportedArrow::support() const {
  std::map<GroupElement, SftArrow> out;
  for (const auto& [t, g] : entries_) {
    if (!g.is_unit()) out.emplace(t, g);
  }
  return out;
}

const SftArrow* SupportedArrow::at(const GroupElement& t) const {
  auto it = entries_.find(t);
  return it == entries_.end() ? nullptr : &it->second;
}

bool SupportedArrow::is_unit() const {
  return twist_.is_identity() &&
         std::all_of(entries_.begin(), entries_.end(), [](const auto& kv) { return kv.second.is_unit(); });
}

SupportedArrow SupportedArrow::with_entry(const GroupElement& t, SftArrow g) const {
  auto entries = entries_;
  entries.insert_or_assign(t, std::move(g));
  return SupportedArrow(alphabet_, depth_, twist_, std::move(entries));
}

// ---------------------------------------------------------- arrow algebra

SupportedArrow twist_action(const GroupElement& gamma, const SupportedArrow& f) {
  std::map<GroupElement, SftArrow> moved;
  for (const auto& [t, g] : f.entries()) moved.emplace(gamma * t, g);
  return SupportedArrow(f.alphabet(), f.depth(), f.twist(), std::move(moved));
}

UnitPoint source(const SupportedArrow& p) {
  const GroupElement back = p.twist().inverse();
  std::map<GroupElement, Word> coords;
  for (const auto& [t, g] : p.entries()) coords.emplace(back * t, g.source());
  return UnitPoint(p.alphabet(), p.depth(), std::move(coords));
}

UnitPoint range(const SupportedArrow& p) {
  std::map<GroupElement, Word> coords;
  for (const auto& [t, g] : p.entries()) coords.emplace(t, g.target());
  return UnitPoint(p.alphabet(), p.depth(), std::move(coords));
}

SupportedArrow inverse(const SupportedArrow& p) {
  const GroupElement back = p.twist().inverse();
  std::map<GroupElement, SftArrow> entries;
  for (const auto& [t, g] : p.entries()) entries.emplace(back * t, inverse(g));
  return SupportedArrow(p.alphabet(), p.depth(), back, std::move(entries));
}

SupportedArrow compose(const SupportedArrow& p, const SupportedArrow& q, const Truncation& scale) {
  if (p.alphabet() != q.alphabet() || p.depth() != q.depth()) {
    throw InvalidInput("cannot compose arrows of different alphabet or depth");
  }
  if (!(p.twist().spec() == q.twist().spec())) throw InvalidInput("cannot compose arrows over different groups");
  const GroupElement& gamma = p.twist();
  std::map<GroupElement, SftArrow> entries = p.entries();
  for (const auto& [t, g] : q.entries()) {
    GroupElement moved = gamma * t;
    auto it = entries.find(moved);
    if (it == entries.end()) {
      entries.emplace(std::move(moved), g);
      continue;
    }
    if (it->second.source() != g.target()) {
      throw CompositionError("source and range disagree at coordinate " + describe(moved) + ": " +
                             it->second.source().str() + " vs " + g.target().str());
    }
    it->second = compose(it->second, g);
  }
  for (const auto& [t, g] : entries) {
    if (t.length() > scale.window_cap_radius) {
      throw WindowOverflow("composite coordinate " + describe(t) + " leaves ball(" +
                           std::to_string(scale.window_cap_radius) + ")");
    }
  }
  return SupportedArrow(p.alphabet(), p.depth(), gamma * q.twist(), std::move(entries));
}

bool is_isotropic(const SupportedArrow& p) { return source(p).consistent_with(range(p)); }

std::variant<SupportedArrow, UnitPoint> twisted_algebra(const SupportedArrow& p, const SupportedArrow& q,
                                                        TwistedOp op, const Truncation& scale) {
  switch (op) {
    case TwistedOp::Compose:
      return compose(p, q, scale);
    case TwistedOp::Inverse:
      return inverse(p);
    case TwistedOp::Source:
      return source(p);
    case TwistedOp::Range:
      return range(p);
  }
  throw InvalidInput("unknown twisted operation");
}

// ---------------------------------------------------------------- BasisSet

BasisSet::BasisSet(unsigned alphabet, std::map<GroupElement, BasisConstraint> constraints, GroupElement twist)
    : alphabet_(alphabet), constraints_(std::move(constraints)), twist_(std::move(twist)) {
  for (const auto& [t, c] : constraints_) {
    unsigned n = std::visit([](const auto& x) { return x.alphabet(); }, c);
    if (n != alphabet_) throw InvalidInput("basis constraint over the wrong alphabet at " + describe(t));
  }
}

bool BasisSet::all_bisections() const {
  return std::all_of(constraints_.begin(), constraints_.end(),
                     [](const auto& kv) { return std::holds_alternative<PrefixBisection>(kv.second); });
}

namespace {

bool admits(const BasisConstraint& c, const SftArrow& g) {
  if (const auto* sigma = std::get_if<PrefixBisection>(&c)) return sigma->contains(g);
  return g.is_unit() && std::get<ClopenSet>(c).contains(g.source());
}

bool admits_some_unit(const BasisConstraint& c) {
  if (const auto* sigma = std::get_if<PrefixBisection>(&c)) return sigma->from() == sigma->to();
  return !std::get<ClopenSet>(c).empty();
}

}  // namespace

bool BasisSet::contains(const SupportedArrow& p) const {
  if (p.alphabet() != alphabet_ || !(p.twist() == twist_)) return false;
  for (const auto& [t, g] : p.entries()) {
    auto it = constraints_.find(t);
    if (it == constraints_.end() ? !g.is_unit() : !admits(it->second, g)) return false;
  }
  for (const auto& [t, c] : constraints_) {
    if (p.at(t) == nullptr && !admits_some_unit(c)) return false;
  }
  return true;
}

ProductCylinder basis_source_range(const BasisSet& s, Side which) {
  const GroupElement back = s.twist().inverse();
  std::map<GroupElement, Word> assignment;
  for (const auto& [t, c] : s.constraints()) {
    const auto* sigma = std::get_if<PrefixBisection>(&c);
    if (sigma == nullptr) throw InvalidInput("basis_source_range: clopen constraint at " + describe(t));
    if (which == Side::Source) {
      assignment.emplace(back * t, sigma->from());
    } else {
      assignment.emplace(t, sigma->to());
    }
  }
  return ProductCylinder(s.alphabet(), std::move(assignment));
}

// ---------------------------------------------------- invariance check

std::vector<PrefixBisection> coordinate_bisections(unsigned alphabet, std::size_t depth, bool symmetry_reduced) {
  std::vector<PrefixBisection> out;
  for (std::size_t len = 1; len <= depth; ++len) {
    if (symmetry_reduced) {
      const Word u = Word::zeros(len, alphabet);
      for (std::size_t common = 0; common < len; ++common) {
        Word v = Word::zeros(common, alphabet).append(1) + Word::zeros(len - common - 1, alphabet);
        out.emplace_back(u, std::move(v));
      }
      out.emplace_back(u, u);
    } else {
      const auto words = all_words(alphabet, len);
      for (const auto& u : words) {
        for (const auto& v : words) out.emplace_back(u, v);
      }
    }
  }
  return out;
}

namespace {

struct TwistTally {
  std::uint64_t checked = 0;
  std::vector<InvarianceViolation> violations;
  std::map<std::size_t, std::vector<Rational>> masses;
};

void check_one_twist(const InvarianceScale& scale, const GroupElement& gamma,
                     const std::vector<GroupElement>& indices, const std::vector<PrefixBisection>& bisections,
                     TwistTally& tally) {
  std::vector<std::size_t> chosen;
  std::vector<std::size_t> picks;
  auto evaluate = [&] {
    std::map<GroupElement, BasisConstraint> constraints;
    for (std::size_t i = 0; i < chosen.size(); ++i) constraints.emplace(indices[chosen[i]], bisections[picks[i]]);
    BasisSet set(scale.alphabet, std::move(constraints), gamma);
    Rational source_mass = product_measure(basis_source_range(set, Side::Source));
    Rational range_mass = product_measure(basis_source_range(set, Side::Range));
    ++tally.checked;
    auto& seen = tally.masses[chosen.size()];
    if (std::none_of(seen.begin(), seen.end(), [&](const Rational& m) { return same_value(m, source_mass); })) {
      seen.push_back(source_mass);
    }
    if (!same_value(source_mass, range_mass)) {
      InvarianceViolation v{gamma, {}, source_mass, range_mass};
      for (std::size_t i = 0; i < chosen.size(); ++i) v.constraints.emplace_back(indices[chosen[i]], bisections[picks[i]]);
      tally.violations.push_back(std::move(v));
    }
  };
  auto assign = [&](auto&& self, std::size_t slot) -> void {
    if (slot == chosen.size()) {
      evaluate();
      return;
    }
    for (std::size_t b = 0; b < bisections.size(); ++b) {
      picks[slot] = b;
      self(self, slot + 1);
    }
  };
  auto choose = [&](auto&& self, std::size_t from) -> void {
    picks.assign(chosen.size(), 0);
    assign(assign, 0);
    if (chosen.size() == scale.max_constraints) return;
    for (std::size_t i = from; i < indices.size(); ++i) {
      chosen.push_back(i);
      self(self, i + 1);
      chosen.pop_back();
    }
  };
  choose(choose, 0);
}

}  // namespace

InvarianceReport measure_invariance_check(const InvarianceScale& scale) {
  if (scale.depth < 1 || scale.window_radius < 1 || scale.twist_radius < 1) {
    throw InvalidInput("measure_invariance_check: bounds must be >= 1");
  }
  const auto indices = ball(scale.group, scale.window_radius).elements();
  const auto twists = ball(scale.group, scale.twist_radius).elements();
  const auto bisections = coordinate_bisections(scale.alphabet, scale.depth, scale.symmetry_reduced);

  std::vector<TwistTally> tallies(twists.size());
  parallel_for(twists.size(), [&](std::size_t i) { check_one_twist(scale, twists[i], indices, bisections, tallies[i]); });

  InvarianceReport report{scale, 0, {}, {}};
  for (auto& tally : tallies) {
    report.checked += tally.checked;
    for (auto& v : tally.violations) report.violations.push_back(std::move(v));
    for (auto& [arity, values] : tally.masses) report.masses_by_arity[arity].insert(values.begin(), values.end());
  }
  return report;
}

Certificate InvarianceReport::to_certificate() const {
  Certificate c;
  c.property = "product_measure_invariance";
  c.parameters = {{"n", scale.alphabet},
                  {"depth", scale.depth},
                  {"group", scale.group.to_string()},
                  {"window_radius", scale.window_radius},
                  {"twist_radius", scale.twist_radius},
                  {"max_constraints", scale.max_constraints},
                  {"symmetry_reduced", scale.symmetry_reduced}};
  c.verdict = violations.empty() ? Verdict::Pass : Verdict::Fail;
  nlohmann::json list = nlohmann::json::array();
  for (const auto& v : violations) {
    nlohmann::json constraints = nlohmann::json::object();
    for (const auto& [t, sigma] : v.constraints) constraints[t.to_string()] = to_json(sigma);
    list.push_back({{"gamma", v.twist.to_string()},
                    {"constraints", constraints},
                    {"source_mass", to_json(v.source_mass)},
                    {"range_mass", to_json(v.range_mass)}});
  }
  c.witnesses = {{"violations", list}};
  nlohmann::json masses = nlohmann::json::object();
  for (const auto& [arity, values] : masses_by_arity) {
    nlohmann::json vs = nlohmann::json::array();
    for (const auto& v : values) vs.push_back(to_json(v));
    masses[std::to_string(arity)] = vs;
  }
  c.details = {{"checked", checked}, {"violation_count", violations.size()}, {"masses_by_constraint_count", masses}};
  return c;
}

// ----------------------------------------------------------------- witnesses

SupportedArrow minimality_witness(const UnitPoint& x, const ProductCylinder& target, const GroupElement& gamma_target) {
  if (target.alphabet() != x.alphabet()) throw InvalidInput("minimality_witness: alphabet mismatch");
  for (const auto& [t, w] : target.assignment()) {
    if (w.size() > x.depth()) {
      throw InvalidInput("minimality_witness: target word " + w.str() + " longer than depth " +
                         std::to_string(x.depth()));
    }
  }
  std::map<GroupElement, SftArrow> entries;
  for (const auto& [t_src, start] : x.coordinates()) {
    GroupElement t = gamma_target * t_src;
    auto it = target.assignment().find(t);
    if (it == target.assignment().end() || start.has_prefix(it->second)) {
      entries.emplace(std::move(t), SftArrow::unit(start));
    } else {
      const Word& goal = it->second;
      entries.emplace(std::move(t), apply_bisection(PrefixBisection(start.prefix(goal.size()), goal), start));
    }
  }
  for (const auto& [t, goal] : target.assignment()) {
    if (entries.contains(t)) continue;
    entries.emplace(t, SftArrow::unit(goal + Word::zeros(x.depth() - goal.size(), x.alphabet())));
  }
  return SupportedArrow(x.alphabet(), x.depth(), gamma_target, std::move(entries));
}

namespace {

// Elements of the constraint at t0 (or of the unit space when unconstrained), at
// the arrow's depth, in lexicographic order of (range, source).
std::vector<SftArrow> constraint_elements(const BasisConstraint* constraint, unsigned alphabet, std::size_t depth) {
  std::vector<SftArrow> out;
  if (constraint == nullptr) {
    for (const auto& z : all_words(alphabet, depth)) out.push_back(SftArrow::unit(z));
    return out;
  }
  if (const auto* sigma = std::get_if<PrefixBisection>(constraint)) {
    if (sigma->length() > depth) return out;
    for (const auto& tail : all_words(alphabet, depth - sigma->length())) {
      out.emplace_back(sigma->to() + tail, sigma->from() + tail);
    }
    return out;
  }
  const auto& clopen = std::get<ClopenSet>(*constraint);
  for (const auto& z : all_words(alphabet, depth)) {
    if (clopen.contains(z)) out.push_back(SftArrow::unit(z));
  }
  return out;
}

}  // namespace

SupportedArrow effectiveness_witness(const SupportedArrow& p, const BasisSet& neighborhood) {
  const GroupElement& gamma = p.twist();
  if (gamma.is_identity()) throw InvalidInput("effectiveness_witness requires a twist other than e");
  if (!neighborhood.contains(p)) throw InvalidInput("effectiveness_witness: arrow is not in the neighborhood");

  for (const auto& [t0, current] : p.entries()) {
    const GroupElement shifted = gamma * t0;
    const SftArrow* partner = p.at(shifted);
    if (shifted == t0 || partner == nullptr) continue;
    // s(p~)(t0) = s(p(gamma t0)) is untouched by changing the entry at t0.
    const Word& source_word = partner->source();
    auto it = neighborhood.constraints().find(t0);
    const BasisConstraint* constraint = it == neighborhood.constraints().end() ? nullptr : &it->second;
    for (auto& g0 : constraint_elements(constraint, p.alphabet(), p.depth())) {
      if (g0 == current || g0.target() == source_word) continue;
      return p.with_entry(t0, std::move(g0));
    }
    throw DepthInsufficient("effectiveness_witness: no alternative range at coordinate " + describe(t0) +
                            " at depth " + std::to_string(p.depth()));
  }
  throw InvalidInput("effectiveness_witness: window has no coordinate t0 with gamma t0 also in the window");
}

Rational diagonal_measure(const GroupElement& t, const GroupElement& t_prime, std::size_t depth, unsigned alphabet) {
  if (t == t_prime) throw InvalidInput("diagonal_measure needs two distinct coordinates");
  if (depth < 1) throw InvalidInput("diagonal_measure needs depth >= 1");
  Rational total = 0;
  for (const auto& w : all_words(alphabet, depth)) {
    total += product_measure(ProductCylinder(alphabet, {{t, w}, {t_prime, w}}));
  }
  return total;
}

}  // namespace glab
