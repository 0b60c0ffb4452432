#pragma once

#include "glab/certificate.hpp"
#include "glab/group_words.hpp"
#include "glab/random.hpp"
#include "glab/twisted_groupoid.hpp"

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace glab {

/// A finite set of arrows K x sharing the source x, unit included.
class Fiber {
 public:
  /// Throws InvalidInput when an arrow's source disagrees with x, when the unit
  /// at x is missing, or when two arrows coincide.
  Fiber(UnitPoint base, std::vector<SupportedArrow> arrows);

  const UnitPoint& base() const noexcept { return base_; }
  const std::vector<SupportedArrow>& arrows() const noexcept { return arrows_; }
  std::size_t size() const noexcept { return arrows_.size(); }

 private:
  UnitPoint base_;
  std::vector<SupportedArrow> arrows_;
};

/// C = (TG)^(0) x B: for every unit point, |B| arrows (x, b).
struct TestSet {
  FiniteSubset generators;
};

/// One orbit class of a fiber under (kappa, gamma) -> (tau_g kappa, g gamma).
struct OrbitClass {
  /// Support of the class representative tau_{gamma^-1} kappa, twist e.
  std::map<GroupElement, SftArrow> representative;
  /// Positions in the fiber, ordered like `labels`.
  std::vector<std::size_t> members;
  /// K_i: the twists of the members.
  FiniteSubset labels;
};

std::vector<OrbitClass> orbit_partition(const Fiber& fiber);

/// |C K x - K x| / |K x| by composing every (tau_b r(kappa), b) with every arrow.
Rational deficiency_direct(const TestSet& b, const Fiber& fiber, const Truncation& scale);

/// sum |B K_i - K_i| / sum |K_i| over the orbit classes.
Rational deficiency_formula(const TestSet& b, const Fiber& fiber);

struct FiberRecord {
  std::string id;
  std::size_t size = 0;
  std::size_t classes = 0;
  Rational direct;
  Rational formula;
  FiniteSubset first_class_labels;
};

/// Lazily produced fibers; the visitor receives an id and the fiber.
using FiberVisitor = std::function<void(const std::string&, const Fiber&)>;
using FiberFamily = std::function<void(const FiberVisitor&)>;

/// Products of E_n[k] fibers at the listed coordinates, twist e, over each base.
FiberFamily ek_product_family(std::vector<UnitPoint> bases, std::size_t k, std::vector<GroupElement> coordinates);
/// {(empty, j) : j in [0, m)} for m in lengths (integers only).
FiberFamily shift_orbit_family(unsigned alphabet, std::size_t depth, std::vector<std::size_t> lengths);
/// `count` random fibers: random base point on ball(window_radius), up to three
/// orbit classes plus the unit class, each a translated base arrow with support in
/// ball(1) and a random label set inside ball(1).
FiberFamily random_mixture_family(const Truncation& scale, std::size_t window_radius, std::size_t count,
                                  std::uint64_t seed);

struct AfAuditInput {
  Truncation scale;
  std::size_t window_radius = 2;
  TestSet test_set;
  std::optional<Rational> delta;
};

struct AfAuditResult {
  std::vector<FiberRecord> fibers;
  std::optional<Rational> min_deficiency;
  /// Fibers where direct and formula disagree.
  std::vector<std::string> mismatches;
  /// Fibers below delta.
  std::vector<std::string> below_delta;
  Verdict verdict = Verdict::Vacuous;

  Certificate to_certificate(const AfAuditInput& input) const;
};

/// Audits every fiber of the family. Verdict: vacuous on an empty family, fail on
/// any mismatch or any fiber below delta (when given), pass otherwise.
AfAuditResult af_audit(const AfAuditInput& input, const FiberFamily& family);

}  // namespace glab
