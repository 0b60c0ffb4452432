#pragma once

#include "glab/errors.hpp"
#include "glab/rational.hpp"

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

namespace glab {

/// Which finitely generated group a word lives in: the free group F_m (1 <= m <= 26)
/// or the integers.
class GroupSpec {
 public:
  enum class Kind { Free, Integers };

  static GroupSpec free(int rank);
  static GroupSpec integers() { return GroupSpec(Kind::Integers, 1); }
  /// "free2", "free:3", "F2", "integers", "Z".
  static GroupSpec parse(std::string_view text);

  Kind kind() const noexcept { return kind_; }
  int rank() const noexcept { return rank_; }
  bool is_free() const noexcept { return kind_ == Kind::Free; }
  /// Free groups of rank >= 2 are the non-amenable built-ins.
  bool is_nonamenable() const noexcept { return kind_ == Kind::Free && rank_ >= 2; }
  std::string to_string() const;

  friend bool operator==(const GroupSpec&, const GroupSpec&) = default;

 private:
  GroupSpec(Kind kind, int rank) : kind_(kind), rank_(rank) {}
  Kind kind_;
  int rank_;
};

/// A freely reduced word in F_m, or an integer exponent in Z.
///
/// Free-group letters are stored as characters: 'a'..'z' are generators and the
/// matching capitals are their inverses, so "aB" is a*b^-1. Reduction happens on
/// every construction, which makes the representation canonical.
class GroupElement {
 public:
  /// Identity of Z. Mostly useful as a placeholder index.
  GroupElement() : spec_(GroupSpec::integers()) {}

  static GroupElement identity(const GroupSpec& spec) { return GroupElement(spec); }
  /// Generator `index` (0-based) or its inverse. For Z, index must be 0.
  static GroupElement generator(const GroupSpec& spec, int index, bool inverse = false);
  static GroupElement from_exponent(std::int64_t exponent);
  /// Parses and freely reduces. "e" and "" denote the identity.
  static GroupElement parse(const GroupSpec& spec, std::string_view text);

  const GroupSpec& spec() const noexcept { return spec_; }
  std::size_t length() const noexcept;
  bool is_identity() const noexcept { return letters_.empty() && exponent_ == 0; }
  /// Reduced letters (free groups only).
  const std::string& letters() const noexcept { return letters_; }
  std::int64_t exponent() const noexcept { return exponent_; }

  GroupElement inverse() const;
  friend GroupElement operator*(const GroupElement& lhs, const GroupElement& rhs);

  /// Letters for free groups ("e" for the identity), signed decimal for Z.
  std::string to_string() const;

  friend bool operator==(const GroupElement&, const GroupElement&) = default;
  /// Shortlex: shorter words first, then letter order a < A < b < B < ...;
  /// for Z, 0 < 1 < -1 < 2 < -2 < ...
  friend bool operator<(const GroupElement& lhs, const GroupElement& rhs);

 private:
  explicit GroupElement(const GroupSpec& spec) : spec_(spec) {}

  GroupSpec spec_;
  std::string letters_;
  std::int64_t exponent_ = 0;
};

struct GroupElementHash {
  std::size_t operator()(const GroupElement& g) const noexcept;
};

/// Multiply/invert dispatcher for callers that carry the operation as data.
enum class WordOp { Multiply, Invert };
GroupElement word_algebra(const GroupElement& a, const GroupElement& b, WordOp op);

/// Deduplicated finite set of group elements, kept in shortlex order.
class FiniteSubset {
 public:
  FiniteSubset() = default;
  explicit FiniteSubset(std::vector<GroupElement> elements);

  static FiniteSubset parse(const GroupSpec& spec, std::string_view comma_separated);

  std::size_t size() const noexcept { return elements_.size(); }
  bool empty() const noexcept { return elements_.empty(); }
  bool contains(const GroupElement& g) const;
  const std::vector<GroupElement>& elements() const noexcept { return elements_; }
  auto begin() const noexcept { return elements_.begin(); }
  auto end() const noexcept { return elements_.end(); }

  /// {b*k : b in B, k in K}
  friend FiniteSubset operator*(const FiniteSubset& lhs, const FiniteSubset& rhs);
  friend FiniteSubset operator-(const FiniteSubset& lhs, const FiniteSubset& rhs);
  friend FiniteSubset operator|(const FiniteSubset& lhs, const FiniteSubset& rhs);
  /// g*K
  FiniteSubset translate(const GroupElement& g) const;

  std::string to_string() const;

  friend bool operator==(const FiniteSubset&, const FiniteSubset&) = default;

 private:
  std::vector<GroupElement> elements_;
};

/// Generators and their inverses ({a, A, b, B} for F_2, {1, -1} for Z).
FiniteSubset symmetric_generators(const GroupSpec& spec);

/// All elements of word length <= radius, in shortlex order.
FiniteSubset ball(const GroupSpec& spec, std::size_t radius);

/// |B*K - K| / |K|. Throws InvalidInput when K is empty.
Rational boundary_deficiency(const FiniteSubset& test_set, const FiniteSubset& subset);

/// Generic form of boundary_deficiency for any group whose elements are hashable
/// and whose multiplication is supplied by the caller (finite quotients plug in here).
template <typename Element, typename Multiply, typename Hash = std::hash<Element>>
Rational boundary_deficiency_generic(const std::vector<Element>& test_set,
                                     const std::vector<Element>& subset, Multiply multiply);

/// A family of finite subsets, produced on demand through a visitor.
using SubsetVisitor = std::function<void(const FiniteSubset&)>;
using SubsetFamily = std::function<void(const SubsetVisitor&)>;

/// Every nonempty subset of `universe` with at most `max_size` elements.
SubsetFamily exhaustive_family(FiniteSubset universe, std::size_t max_size);
/// Integer intervals [0, m) for m = 1..max_length.
SubsetFamily interval_family(std::size_t max_length);
SubsetFamily explicit_family(std::vector<FiniteSubset> members);

struct FolnerResult {
  GroupSpec spec;
  FiniteSubset test_set;
  std::size_t family_size = 0;
  std::optional<Rational> min_deficiency;  // empty when the family is empty
  FiniteSubset witness;                    // a minimizing K (first in visit order)
};

/// Minimum of boundary_deficiency(B, K) over the family. For the exhaustive
/// family at (radius, max_size) the result is a lower bound certified at that scale.
FolnerResult folner_audit(const GroupSpec& spec, const FiniteSubset& test_set,
                          const SubsetFamily& family);

}  // namespace glab

template <>
struct std::hash<glab::GroupElement> {
  std::size_t operator()(const glab::GroupElement& g) const noexcept {
    return glab::GroupElementHash{}(g);
  }
};

namespace glab {

template <typename Element, typename Multiply, typename Hash>
Rational boundary_deficiency_generic(const std::vector<Element>& test_set,
                                     const std::vector<Element>& subset, Multiply multiply) {
  std::unordered_set<Element, Hash> inside(subset.begin(), subset.end());
  if (inside.empty()) throw InvalidInput("boundary_deficiency: empty subset K");
  std::unordered_set<Element, Hash> boundary;
  for (const auto& b : test_set) {
    for (const auto& k : inside) {
      Element product = multiply(b, k);
      if (!inside.contains(product)) boundary.insert(std::move(product));
    }
  }
  return Rational(static_cast<long long>(boundary.size()), static_cast<long long>(inside.size()));
}

}  // namespace glab
