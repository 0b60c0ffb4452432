#include "glab/af_audit.hpp"
#include "glab/errors.hpp"
#include "glab/group_words.hpp"

#include "groupoid_model.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

using glab::Fiber;
using glab::GroupElement;
using glab::GroupSpec;
using glab::Rational;
using glab::SftArrow;
using glab::SupportedArrow;
using glab::UnitPoint;
using glab::Word;

namespace {

const GroupSpec f2 = GroupSpec::free(2);
const GroupSpec zz = GroupSpec::integers();

GroupElement el(const char* text, const GroupSpec& spec = f2) { return GroupElement::parse(spec, text); }
GroupElement z(std::int64_t j) { return GroupElement::from_exponent(j); }
Word w(const std::string& digits) { return Word(digits, 2); }

using oracle::classes_oracle;
using oracle::direct_oracle;
using oracle::formula_oracle;
using oracle::key_of;
using oracle::Key;
using oracle::Support;

glab::Truncation scale_for(const GroupSpec& spec, std::size_t depth) {
  glab::Truncation t;
  t.group = spec;
  t.depth = depth;
  t.window_cap_radius = 4;
  return t;
}

std::vector<std::pair<std::string, Fiber>> collect(const glab::FiberFamily& family) {
  std::vector<std::pair<std::string, Fiber>> out;
  family([&](const std::string& id, const Fiber& f) { out.emplace_back(id, f); });
  return out;
}

}  // namespace

TEST(Fiber, Validation) {
  UnitPoint x(2, 1, {{el("e"), w("0")}});
  auto unit = SupportedArrow::unit(x);
  EXPECT_NO_THROW(Fiber(x, {unit}));
  EXPECT_THROW(Fiber(x, {}), glab::InvalidInput);
  EXPECT_THROW(Fiber(x, {unit, unit}), glab::InvalidInput);
  SupportedArrow wrong(2, 1, el("e"), {{el("e"), SftArrow(w("0"), w("1"))}});
  EXPECT_THROW(Fiber(x, {unit, wrong}), glab::InvalidInput);
}

TEST(OrbitPartition, Examples) {
  UnitPoint x(2, 2, {{el("e"), w("00")}, {el("a"), w("01")}});
  auto unit = SupportedArrow::unit(x);
  auto single = glab::orbit_partition(Fiber(x, {unit}));
  ASSERT_EQ(single.size(), 1u);
  EXPECT_EQ(single[0].labels, glab::FiniteSubset({el("e")}));

  // Twist e, distinct supports: singletons.
  std::vector<SupportedArrow> arrows{unit};
  for (const auto& y : {"10", "01", "11"}) arrows.push_back(unit.with_entry(el("e"), SftArrow(w(y), w("00"))));
  Fiber f(x, arrows);
  auto classes = glab::orbit_partition(f);
  EXPECT_EQ(classes.size(), 4u);
  for (const auto& c : classes) EXPECT_EQ(c.labels.size(), 1u);
  EXPECT_EQ(classes_oracle(f).size(), 4u);
}

TEST(OrbitPartition, IntegerShiftOrbitIsOneClass) {
  // An aperiodic point on [-3, 3] and the arrows (units at j.x, j), j in [0, m).
  std::map<GroupElement, Word> coords;
  const char* pattern = "0010111";
  for (int i = -3; i <= 3; ++i) coords.emplace(z(i), w(std::string(1, pattern[i + 3])));
  UnitPoint x(2, 1, coords);
  for (std::int64_t m : {2, 5, 10}) {
    std::vector<SupportedArrow> arrows;
    for (std::int64_t j = 0; j < m; ++j) arrows.push_back(SupportedArrow::units_with_twist(x.translate(z(j)), z(j)));
    Fiber f(x, arrows);
    auto classes = glab::orbit_partition(f);
    ASSERT_EQ(classes.size(), 1u);
    std::vector<GroupElement> interval;
    for (std::int64_t j = 0; j < m; ++j) interval.push_back(z(j));
    EXPECT_EQ(classes[0].labels, glab::FiniteSubset(interval));
    auto b = glab::symmetric_generators(zz);
    auto wide = scale_for(zz, 1);
    wide.window_cap_radius = 20;
    EXPECT_EQ(glab::deficiency_direct({b}, f, wide), Rational(2, m));
    EXPECT_EQ(glab::deficiency_formula({b}, f), Rational(2, m));
    EXPECT_THROW(glab::deficiency_direct({b}, f, scale_for(zz, 1)), glab::WindowOverflow);
  }
}

TEST(Deficiency, Examples) {
  UnitPoint x(2, 2, {{el("e"), w("01")}});
  Fiber unit_only(x, {SupportedArrow::unit(x)});
  auto gens = glab::symmetric_generators(f2);
  EXPECT_EQ(glab::deficiency_direct({gens}, unit_only, scale_for(f2, 2)), Rational(4));
  EXPECT_EQ(glab::deficiency_formula({gens}, unit_only), Rational(4));
  glab::FiniteSubset e_only({el("e")});
  EXPECT_EQ(glab::deficiency_direct({e_only}, unit_only, scale_for(f2, 2)), Rational(0));

  auto fibers = collect(glab::shift_orbit_family(2, 1, {10}));
  ASSERT_EQ(fibers.size(), 1u);
  auto zb = glab::symmetric_generators(zz);
  EXPECT_EQ(glab::deficiency_direct({zb}, fibers[0].second, scale_for(zz, 1)), Rational(2, 10));
  EXPECT_EQ(glab::deficiency_formula({zb}, fibers[0].second), Rational(2, 10));
}

TEST(Deficiency, MixedFiberOverFreeGroup) {
  UnitPoint x(2, 2, {{el("e"), w("00")}, {el("a"), w("01")}, {el("A"), w("11")}});
  auto unit = SupportedArrow::unit(x);
  std::vector<SupportedArrow> arrows{unit};
  // Unit class labelled {e, a}; a second class with base support at e, labels {e, b}.
  arrows.push_back(SupportedArrow::units_with_twist(x.translate(el("a")), el("a")));
  SupportedArrow kappa(2, 2, el("e"), {{el("e"), SftArrow(w("10"), w("00"))}});
  arrows.push_back(kappa);
  auto moved = glab::twist_action(el("b"), kappa);
  std::map<GroupElement, SftArrow> entries = moved.entries();
  for (const auto& [t, v] : x.coordinates()) {
    if (!entries.contains(el("b") * t)) entries.emplace(el("b") * t, SftArrow::unit(v));
  }
  arrows.emplace_back(2, 2, el("b"), entries);
  Fiber f(x, arrows);
  auto gens = glab::symmetric_generators(f2);
  EXPECT_EQ(glab::orbit_partition(f).size(), 2u);
  auto direct = glab::deficiency_direct({gens}, f, scale_for(f2, 2));
  EXPECT_EQ(direct, glab::deficiency_formula({gens}, f));
  EXPECT_EQ(direct, direct_oracle(gens, f));
  EXPECT_EQ(direct, Rational(6 + 6, 4));
}

TEST(Deficiency, EkProductFibersAreFour) {
  glab::SplitMix64 rng(3);
  std::vector<UnitPoint> bases;
  for (int i = 0; i < 5; ++i) {
    std::map<GroupElement, Word> coords;
    for (const auto& t : glab::ball(f2, 1)) coords.emplace(t, w(oracle::random_string(rng, 2, 3)));
    bases.emplace_back(2, 3, coords);
  }
  for (std::size_t k = 1; k <= 3; ++k) {
    auto family = glab::ek_product_family(bases, k, {el("e"), el("a")});
    glab::AfAuditInput input{scale_for(f2, 3), 1, {glab::symmetric_generators(f2)}, Rational(7, 3)};
    auto result = glab::af_audit(input, family);
    EXPECT_EQ(result.verdict, glab::Verdict::Pass);
    ASSERT_EQ(result.fibers.size(), 5u);
    for (const auto& r : result.fibers) {
      EXPECT_EQ(r.direct, Rational(4));
      EXPECT_EQ(r.size, r.classes);
      EXPECT_EQ(r.size, std::size_t{1} << (2 * (k - 1)));
    }
  }
}

TEST(Deficiency, RandomFibersAgreeWithOracles) {
  for (const auto& spec : {f2, zz}) {
    for (std::size_t d = 1; d <= 3; ++d) {
      auto scale = scale_for(spec, d);
      auto b = glab::symmetric_generators(spec);
      auto fibers = collect(glab::random_mixture_family(scale, 2, 40, 1000 + d));
      ASSERT_EQ(fibers.size(), 40u);
      for (const auto& [id, f] : fibers) {
        auto direct = glab::deficiency_direct({b}, f, scale);
        EXPECT_EQ(direct, glab::deficiency_formula({b}, f)) << id;
        EXPECT_EQ(direct, direct_oracle(b, f)) << id;
        EXPECT_EQ(direct, formula_oracle(b, f)) << id;

        auto classes = glab::orbit_partition(f);
        std::size_t sum = 0;
        for (const auto& c : classes) sum += c.labels.size();
        EXPECT_EQ(sum, f.size());
        EXPECT_EQ(classes.size(), classes_oracle(f).size());
        // C K_i never meets K_j for i != j.
        for (std::size_t i = 0; i < classes.size(); ++i) {
          for (std::size_t j = 0; j < classes.size(); ++j) {
            if (i == j) continue;
            std::set<Key> kj;
            for (auto m : classes[j].members) kj.insert(key_of(f.arrows()[m]));
            for (const auto& g : b) {
              for (auto m : classes[i].members) {
                auto [twist, support] = key_of(f.arrows()[m]);
                Support moved;
                for (const auto& [t, entry] : support) moved[g * t] = entry;
                EXPECT_FALSE(kj.contains(Key{g * twist, moved})) << id;
              }
            }
          }
        }
      }
    }
  }
}

TEST(AfAudit, IntegerControlAndEmptyFamily) {
  std::vector<std::size_t> lengths;
  for (std::size_t m = 2; m <= 50; ++m) lengths.push_back(m);
  glab::AfAuditInput input{scale_for(zz, 1), 1, {glab::symmetric_generators(zz)}, std::nullopt};
  auto result = glab::af_audit(input, glab::shift_orbit_family(2, 1, lengths));
  EXPECT_EQ(result.verdict, glab::Verdict::Pass);
  EXPECT_EQ(*result.min_deficiency, Rational(2, 50));

  input.delta = Rational(7, 3);
  auto failing = glab::af_audit(input, glab::shift_orbit_family(2, 1, lengths));
  EXPECT_EQ(failing.verdict, glab::Verdict::Fail);
  EXPECT_EQ(failing.below_delta.size(), lengths.size());
  auto cert = failing.to_certificate(input);
  EXPECT_EQ(cert.witnesses["extremal_fiber"]["id"], "interval-50");

  auto empty = glab::af_audit(input, [](const glab::FiberVisitor&) {});
  EXPECT_EQ(empty.verdict, glab::Verdict::Vacuous);
  EXPECT_EQ(empty.to_certificate(input).details["fiber_count"], 0);
}

TEST(AfAudit, DeterministicUnderSeed) {
  auto scale = scale_for(f2, 2);
  glab::AfAuditInput input{scale, 2, {glab::symmetric_generators(f2)}, Rational(7, 3)};
  auto a = glab::af_audit(input, glab::random_mixture_family(scale, 2, 30, 42)).to_certificate(input);
  auto b = glab::af_audit(input, glab::random_mixture_family(scale, 2, 30, 42)).to_certificate(input);
  EXPECT_EQ(a.to_json().dump(), b.to_json().dump());
  EXPECT_EQ(a.verdict, glab::Verdict::Pass);
}
