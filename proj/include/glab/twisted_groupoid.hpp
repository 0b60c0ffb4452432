#pragma once

#include "glab/cantor_algebra.hpp"
#include "glab/certificate.hpp"
#include "glab/group_words.hpp"
#include "glab/sft_groupoid.hpp"

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <variant>
#include <vector>

namespace glab {

// Twisted groupoid T G x| Gamma over G = E_n with T = Gamma acting by left
// multiplication. Every object is truncated: unit points and arrows carry finitely
// many coordinates (their window), each at a common depth d. Coordinates outside
// the window are unconstrained units; operations align windows by filling them in
// and never extend a word past depth d.

/// Truncation scale threaded through the twisted operations.
struct Truncation {
  unsigned alphabet = 2;
  std::size_t depth = 1;
  GroupSpec group = GroupSpec::free(2);
  /// Composites must keep every coordinate inside ball(window_cap_radius).
  std::size_t window_cap_radius = 3;
  std::size_t twist_radius = 1;
};

/// A point of prod_T G^(0), truncated to a window and depth.
class UnitPoint {
 public:
  UnitPoint(unsigned alphabet, std::size_t depth, std::map<GroupElement, Word> coordinates);

  static UnitPoint constant(const FiniteSubset& window, const Word& w);

  unsigned alphabet() const noexcept { return alphabet_; }
  std::size_t depth() const noexcept { return depth_; }
  const std::map<GroupElement, Word>& coordinates() const noexcept { return coordinates_; }
  FiniteSubset window() const;
  const Word* at(const GroupElement& t) const;

  /// Agreement on every coordinate both points carry.
  bool consistent_with(const UnitPoint& other) const;
  /// Coordinate t moves to g*t.
  UnitPoint translate(const GroupElement& g) const;
  bool in(const ProductCylinder& p) const { return p.contains(coordinates_); }

  friend bool operator==(const UnitPoint&, const UnitPoint&) = default;

 private:
  unsigned alphabet_;
  std::size_t depth_;
  std::map<GroupElement, Word> coordinates_;
};

/// Arrow (f, gamma) of the twisted groupoid: f is a finitely supported map from
/// window coordinates to E_n arrows of common depth, gamma the twist.
///
/// Unit entries inside the window record which unit sits there; `support()` is
/// the canonical part (non-unit entries only). Two arrows with a common source
/// are equal exactly when twist and support agree, which is what `key()` returns.
class SupportedArrow {
 public:
  SupportedArrow(unsigned alphabet, std::size_t depth, GroupElement twist,
                 std::map<GroupElement, SftArrow> entries);

  /// (x as units, e).
  static SupportedArrow unit(const UnitPoint& x);
  /// (x as units, gamma); isotropic whenever x is constant.
  static SupportedArrow units_with_twist(const UnitPoint& x, const GroupElement& gamma);

  unsigned alphabet() const noexcept { return alphabet_; }
  std::size_t depth() const noexcept { return depth_; }
  const GroupElement& twist() const noexcept { return twist_; }
  const std::map<GroupElement, SftArrow>& entries() const noexcept { return entries_; }
  FiniteSubset window() const;
  std::map<GroupElement, SftArrow> support() const;
  const SftArrow* at(const GroupElement& t) const;
  bool is_unit() const;
  SupportedArrow with_entry(const GroupElement& t, SftArrow g) const;

  using Key = std::pair<GroupElement, std::map<GroupElement, SftArrow>>;
  Key key() const { return {twist_, support()}; }

  friend bool operator==(const SupportedArrow&, const SupportedArrow&) = default;

 private:
  unsigned alphabet_;
  std::size_t depth_;
  GroupElement twist_;
  std::map<GroupElement, SftArrow> entries_;
};

/// tau_gamma: [tau_gamma f](t) = f(gamma^-1 t). The arrow's own twist is untouched.
SupportedArrow twist_action(const GroupElement& gamma, const SupportedArrow& f);

/// s((g, gamma))(t) = s(g(gamma t)).
UnitPoint source(const SupportedArrow& p);
/// r((g, gamma))(t) = r(g(t)).
UnitPoint range(const SupportedArrow& p);
/// (tau(gamma^-1)(g^-1), gamma^-1).
SupportedArrow inverse(const SupportedArrow& p);
/// (g, gamma)(g', gamma') = (g tau_gamma(g'), gamma gamma'), coordinatewise in E_n.
/// Throws CompositionError when source(p) and range(q) disagree on a shared
/// coordinate and WindowOverflow when the composite leaves ball(window_cap_radius).
SupportedArrow compose(const SupportedArrow& p, const SupportedArrow& q, const Truncation& scale);

/// Whether source and range agree on every shared coordinate.
bool is_isotropic(const SupportedArrow& p);

enum class TwistedOp { Compose, Inverse, Source, Range };
std::variant<SupportedArrow, UnitPoint> twisted_algebra(const SupportedArrow& p, const SupportedArrow& q,
                                                        TwistedOp op, const Truncation& scale);

/// One coordinate constraint of a basis set: an E_n bisection, or a clopen set of units.
using BasisConstraint = std::variant<PrefixBisection, ClopenSet>;

/// O(B_1, ..., B_k; t_1, ..., t_k) x {gamma}.
class BasisSet {
 public:
  BasisSet(unsigned alphabet, std::map<GroupElement, BasisConstraint> constraints, GroupElement twist);

  unsigned alphabet() const noexcept { return alphabet_; }
  const std::map<GroupElement, BasisConstraint>& constraints() const noexcept { return constraints_; }
  const GroupElement& twist() const noexcept { return twist_; }
  bool all_bisections() const;
  /// Membership of a truncated arrow: constrained window entries satisfy their
  /// constraint, unconstrained window entries are units, and constraints on
  /// coordinates outside the window admit a unit.
  bool contains(const SupportedArrow& p) const;

 private:
  unsigned alphabet_;
  std::map<GroupElement, BasisConstraint> constraints_;
  GroupElement twist_;
};

enum class Side { Source, Range };
/// Source image O(u_i; gamma^-1 t_i) or range image O(v_i; t_i) of a basis set made
/// of bisections sigma_{u_i, v_i}. InvalidInput on a clopen constraint.
ProductCylinder basis_source_range(const BasisSet& s, Side which);

struct InvarianceScale {
  unsigned alphabet = 2;
  std::size_t depth = 1;
  GroupSpec group = GroupSpec::free(2);
  std::size_t window_radius = 1;
  std::size_t twist_radius = 1;
  std::size_t max_constraints = 1;
  /// One bisection per orbit of pairs (u, v) under automorphisms of the n-ary
  /// prefix tree (orbit = common-prefix length). Off: every pair (u, v).
  bool symmetry_reduced = true;
};

struct InvarianceViolation {
  GroupElement twist;
  std::vector<std::pair<GroupElement, PrefixBisection>> constraints;
  Rational source_mass;
  Rational range_mass;
};

struct InvarianceReport {
  InvarianceScale scale;
  std::uint64_t checked = 0;
  std::vector<InvarianceViolation> violations;
  /// Source masses observed, keyed by number of constraints.
  std::map<std::size_t, std::set<Rational>> masses_by_arity;

  Certificate to_certificate() const;
};

/// Bisections the invariance check places at one coordinate.
std::vector<PrefixBisection> coordinate_bisections(unsigned alphabet, std::size_t depth, bool symmetry_reduced);

/// Product-measure invariance mu_T(s(S)) = mu_T(r(S)) over every basis set at scale:
/// distinct coordinates from ball(window_radius), at most max_constraints of them,
/// twists from ball(twist_radius).
InvarianceReport measure_invariance_check(const InvarianceScale& scale);

/// An arrow (f, gamma_target) whose source agrees with x and whose range lies in
/// target. Each targeted coordinate gets the prefix swap from x's prefix to the
/// target prefix; targeted coordinates x does not carry get a unit padded with 0s.
/// InvalidInput if a target word is longer than x's depth.
SupportedArrow minimality_witness(const UnitPoint& x, const ProductCylinder& target,
                                  const GroupElement& gamma_target);

/// For p with twist gamma != e inside `neighborhood`: the arrow that agrees with p
/// except at the shortlex-least window coordinate t0 with gamma t0 in the window,
/// where the entry is swapped for the lexicographically least element g0 of the
/// constraint at t0 whose range differs from s(p)(t0). The result has source !=
/// range. InvalidInput on gamma = e, p outside the neighborhood, or no usable t0;
/// DepthInsufficient when the constraint has no alternative at this depth.
SupportedArrow effectiveness_witness(const SupportedArrow& p, const BasisSet& neighborhood);

/// mu_T of {x : x(t) and x(t') share their depth-d prefix}; n^-d. InvalidInput if t = t'.
Rational diagonal_measure(const GroupElement& t, const GroupElement& t_prime, std::size_t depth,
                          unsigned alphabet);

}  // namespace glab
