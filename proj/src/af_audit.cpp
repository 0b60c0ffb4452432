#include "glab/af_audit.hpp"

#include "glab/errors.hpp"
#include "glab/parallel.hpp"
#include "glab/serialization.hpp"

#include <algorithm>
#include <set>

namespace glab {

Fiber::Fiber(UnitPoint base, std::vector<SupportedArrow> arrows) : base_(std::move(base)), arrows_(std::move(arrows)) {
  std::set<SupportedArrow::Key> seen;
  bool has_unit = false;
  for (const auto& p : arrows_) {
    if (p.alphabet() != base_.alphabet() || p.depth() != base_.depth()) {
      throw InvalidInput("fiber arrow does not match the base point's alphabet or depth");
    }
    if (!source(p).consistent_with(base_)) throw InvalidInput("fiber arrow has a source other than the base point");
    auto key = p.key();
    if (key.first.is_identity() && key.second.empty()) has_unit = true;
    if (!seen.insert(std::move(key)).second) throw InvalidInput("fiber lists the same arrow twice");
  }
  if (!has_unit) throw InvalidInput("fiber lacks the unit arrow at its base point");
}

std::vector<OrbitClass> orbit_partition(const Fiber& fiber) {
  std::map<std::map<GroupElement, SftArrow>, std::vector<std::size_t>> by_representative;
  for (std::size_t i = 0; i < fiber.size(); ++i) {
    const auto& p = fiber.arrows()[i];
    by_representative[twist_action(p.twist().inverse(), p).support()].push_back(i);
  }
  std::vector<OrbitClass> out;
  for (auto& [rep, members] : by_representative) {
    std::sort(members.begin(), members.end(), [&](std::size_t a, std::size_t b) {
      return fiber.arrows()[a].twist() < fiber.arrows()[b].twist();
    });
    std::vector<GroupElement> labels;
    for (auto i : members) labels.push_back(fiber.arrows()[i].twist());
    out.push_back(OrbitClass{rep, std::move(members), FiniteSubset(std::move(labels))});
  }
  return out;
}

Rational deficiency_direct(const TestSet& b, const Fiber& fiber, const Truncation& scale) {
  if (fiber.size() == 0) throw InvalidInput("deficiency_direct: empty fiber");
  std::set<SupportedArrow::Key> inside;
  for (const auto& p : fiber.arrows()) inside.insert(p.key());
  std::set<SupportedArrow::Key> outside;
  for (const auto& g : b.generators) {
    for (const auto& p : fiber.arrows()) {
      SupportedArrow c = SupportedArrow::units_with_twist(range(p).translate(g), g);
      auto key = compose(c, p, scale).key();
      if (!inside.contains(key)) outside.insert(std::move(key));
    }
  }
  return Rational(static_cast<long long>(outside.size()), static_cast<long long>(fiber.size()));
}

Rational deficiency_formula(const TestSet& b, const Fiber& fiber) {
  if (fiber.size() == 0) throw InvalidInput("deficiency_formula: empty fiber");
  std::size_t boundary = 0;
  std::size_t total = 0;
  for (const auto& cls : orbit_partition(fiber)) {
    boundary += ((b.generators * cls.labels) - cls.labels).size();
    total += cls.labels.size();
  }
  return Rational(static_cast<long long>(boundary), static_cast<long long>(total));
}

// ------------------------------------------------------------------ families

FiberFamily ek_product_family(std::vector<UnitPoint> bases, std::size_t k, std::vector<GroupElement> coordinates) {
  return [bases = std::move(bases), k, coordinates = std::move(coordinates)](const FiberVisitor& visit) {
    for (std::size_t bi = 0; bi < bases.size(); ++bi) {
      const auto& x = bases[bi];
      std::vector<std::vector<SftArrow>> factors;
      for (const auto& t : coordinates) {
        const Word* w = x.at(t);
        if (w == nullptr) throw InvalidInput("ek_product_family: base point lacks coordinate " + t.to_string());
        factors.push_back(elementary_fiber(k, *w));
      }
      std::vector<SupportedArrow> arrows;
      std::vector<std::size_t> odometer(factors.size(), 0);
      const GroupElement e = coordinates.empty() ? GroupElement() : GroupElement::identity(coordinates[0].spec());
      while (true) {
        std::map<GroupElement, SftArrow> entries;
        for (std::size_t i = 0; i < factors.size(); ++i) entries.emplace(coordinates[i], factors[i][odometer[i]]);
        arrows.emplace_back(x.alphabet(), x.depth(), e, std::move(entries));
        std::size_t i = 0;
        while (i < factors.size() && ++odometer[i] == factors[i].size()) odometer[i++] = 0;
        if (i == factors.size()) break;
      }
      visit("ek" + std::to_string(k) + "-base" + std::to_string(bi), Fiber(x, std::move(arrows)));
    }
  };
}

FiberFamily shift_orbit_family(unsigned alphabet, std::size_t depth, std::vector<std::size_t> lengths) {
  return [alphabet, depth, lengths = std::move(lengths)](const FiberVisitor& visit) {
    UnitPoint x(alphabet, depth, {});
    for (auto m : lengths) {
      if (m == 0) throw InvalidInput("shift_orbit_family: length 0");
      std::vector<SupportedArrow> arrows;
      for (std::size_t j = 0; j < m; ++j) {
        arrows.emplace_back(alphabet, depth, GroupElement::from_exponent(static_cast<std::int64_t>(j)),
                            std::map<GroupElement, SftArrow>{});
      }
      visit("interval-" + std::to_string(m), Fiber(x, std::move(arrows)));
    }
  };
}

namespace {

Word random_word(SplitMix64& rng, unsigned alphabet, std::size_t depth) {
  std::string digits;
  for (std::size_t i = 0; i < depth; ++i) digits.push_back(static_cast<char>('0' + rng.below(alphabet)));
  return Word(digits, alphabet);
}

std::vector<GroupElement> random_subset(SplitMix64& rng, const std::vector<GroupElement>& pool) {
  std::vector<GroupElement> out;
  for (const auto& g : pool) {
    if (rng.coin()) out.push_back(g);
  }
  if (out.empty()) out.push_back(pool[rng.below(pool.size())]);
  return out;
}

}  // namespace

FiberFamily random_mixture_family(const Truncation& scale, std::size_t window_radius, std::size_t count,
                                  std::uint64_t seed) {
  return [scale, window_radius, count, seed](const FiberVisitor& visit) {
    SplitMix64 root(seed);
    const auto window = ball(scale.group, window_radius).elements();
    const auto near = ball(scale.group, 1).elements();
    const GroupElement e = GroupElement::identity(scale.group);
    for (std::size_t f = 0; f < count; ++f) {
      SplitMix64 rng = root.split();
      std::map<GroupElement, Word> coords;
      for (const auto& t : window) coords.emplace(t, random_word(rng, scale.alphabet, scale.depth));
      UnitPoint x(scale.alphabet, scale.depth, coords);

      std::map<std::map<GroupElement, SftArrow>, std::set<GroupElement>> classes;
      for (const auto& g : random_subset(rng, near)) classes[{}].insert(g);
      classes[{}].insert(e);
      const std::size_t extra = 1 + rng.below(3);
      for (std::size_t c = 0; c < extra; ++c) {
        std::map<GroupElement, SftArrow> base;
        for (const auto& t : random_subset(rng, near)) {
          SftArrow g(random_word(rng, scale.alphabet, scale.depth), coords.at(t));
          if (!g.is_unit()) base.emplace(t, std::move(g));
        }
        for (const auto& g : random_subset(rng, near)) classes[base].insert(g);
      }
      std::vector<SupportedArrow> arrows;
      for (const auto& [base, labels] : classes) {
        SupportedArrow kappa0(scale.alphabet, scale.depth, e, base);
        for (const auto& g : labels) {
          SupportedArrow moved = twist_action(g, kappa0);
          arrows.emplace_back(scale.alphabet, scale.depth, g, moved.entries());
        }
      }
      visit("random-" + std::to_string(f), Fiber(x, std::move(arrows)));
    }
  };
}

// --------------------------------------------------------------------- audit

AfAuditResult af_audit(const AfAuditInput& input, const FiberFamily& family) {
  std::vector<std::pair<std::string, Fiber>> fibers;
  family([&](const std::string& id, const Fiber& f) { fibers.emplace_back(id, f); });

  AfAuditResult result;
  result.fibers.resize(fibers.size());
  parallel_for(fibers.size(), [&](std::size_t i) {
    const auto& [id, fiber] = fibers[i];
    auto classes = orbit_partition(fiber);
    result.fibers[i] = FiberRecord{id,
                                   fiber.size(),
                                   classes.size(),
                                   deficiency_direct(input.test_set, fiber, input.scale),
                                   deficiency_formula(input.test_set, fiber),
                                   classes.front().labels};
  });
  std::sort(result.fibers.begin(), result.fibers.end(),
            [](const FiberRecord& a, const FiberRecord& b) { return a.id < b.id; });

  for (const auto& r : result.fibers) {
    if (r.direct != r.formula) result.mismatches.push_back(r.id);
    if (!result.min_deficiency || r.direct < *result.min_deficiency) result.min_deficiency = r.direct;
    if (input.delta && r.direct < *input.delta) result.below_delta.push_back(r.id);
  }
  if (result.fibers.empty()) {
    result.verdict = Verdict::Vacuous;
  } else {
    result.verdict = result.mismatches.empty() && result.below_delta.empty() ? Verdict::Pass : Verdict::Fail;
  }
  return result;
}

Certificate AfAuditResult::to_certificate(const AfAuditInput& input) const {
  Certificate c;
  c.property = "not_almost_finite";
  nlohmann::json scale = {{"n", input.scale.alphabet},
                          {"d", input.scale.depth},
                          {"window", input.window_radius},
                          {"twist_radius", input.scale.twist_radius}};
  c.parameters = {{"group", input.scale.group.to_string()}, {"test_set", to_json(input.test_set.generators)}};
  c.verdict = verdict;

  nlohmann::json records = nlohmann::json::array();
  const FiberRecord* extremal = nullptr;
  for (const auto& r : fibers) {
    records.push_back({{"id", r.id},
                       {"size", r.size},
                       {"classes", r.classes},
                       {"deficiency_direct", to_json(r.direct)},
                       {"deficiency_formula", to_json(r.formula)}});
    if (extremal == nullptr || r.direct < extremal->direct) extremal = &r;
  }
  c.witnesses = {{"mismatches", mismatches}, {"below_delta", below_delta}};
  if (extremal != nullptr) {
    c.witnesses["extremal_fiber"] = {{"id", extremal->id},
                                     {"deficiency", to_json(extremal->direct)},
                                     {"first_class_labels", to_json(extremal->first_class_labels)}};
  }
  c.details = {{"scale", scale},
               {"delta", input.delta ? to_json(*input.delta) : nlohmann::json(nullptr)},
               {"fibers", records},
               {"fiber_count", fibers.size()},
               {"min_deficiency", min_deficiency ? to_json(*min_deficiency) : nlohmann::json(nullptr)}};
  return c;
}

}  // namespace glab
