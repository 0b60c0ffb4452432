#pragma once

#include "glab/cantor_algebra.hpp"

#include <cstddef>
#include <vector>

namespace glab {

/// Arrow (y, x) of the tail-equivalence groupoid E_n, truncated to depth d.
///
/// The pair stands for (y.w, x.w) for every common infinite tail w. The tail bound
/// k is the least k with y_i = x_i for all i >= k, so the arrow lies in E_n[k].
class SftArrow {
 public:
  /// Throws InvalidInput on differing depths or alphabets.
  SftArrow(Word target, Word source);

  static SftArrow unit(const Word& x) { return SftArrow(x, x); }

  const Word& target() const noexcept { return target_; }
  const Word& source() const noexcept { return source_; }
  std::size_t tail_bound() const noexcept { return tail_bound_; }
  std::size_t depth() const noexcept { return source_.size(); }
  unsigned alphabet() const noexcept { return source_.alphabet(); }
  bool is_unit() const noexcept { return target_ == source_; }

  friend bool operator==(const SftArrow&, const SftArrow&) = default;
  friend auto operator<=>(const SftArrow&, const SftArrow&) = default;

 private:
  Word target_;
  Word source_;
  std::size_t tail_bound_ = 1;
};

/// (z, y) * (y, x) = (z, x). Throws CompositionError unless source(a) = target(b).
SftArrow compose(const SftArrow& a, const SftArrow& b);
SftArrow inverse(const SftArrow& a);
SftArrow source(const SftArrow& a);
SftArrow range(const SftArrow& a);

enum class ArrowOp { Compose, Inverse, Source, Range };
/// Dispatcher; `b` is only read for Compose.
SftArrow arrow_algebra(const SftArrow& a, const SftArrow& b, ArrowOp op);

/// sigma_{u,v}: the compact open bisection sending C_u onto C_v by prefix swap.
class PrefixBisection {
 public:
  /// Throws InvalidInput unless |u| = |v| over the same alphabet.
  PrefixBisection(Word from, Word to);

  const Word& from() const noexcept { return from_; }
  const Word& to() const noexcept { return to_; }
  std::size_t length() const noexcept { return from_.size(); }
  unsigned alphabet() const noexcept { return from_.alphabet(); }

  ClopenSet source_set() const { return ClopenSet::cylinder(from_); }
  ClopenSet range_set() const { return ClopenSet::cylinder(to_); }
  PrefixBisection inverse() const { return PrefixBisection(to_, from_); }
  /// Whether the arrow lies in the bisection: (v.w, u.w) for some tail w.
  bool contains(const SftArrow& g) const;

  friend bool operator==(const PrefixBisection&, const PrefixBisection&) = default;
  friend auto operator<=>(const PrefixBisection&, const PrefixBisection&) = default;

 private:
  Word from_;
  Word to_;
};

/// The arrow of sigma with source x: (v . tail(x), x). DomainError if x is not in C_u.
SftArrow apply_bisection(const PrefixBisection& sigma, const Word& x);

/// All depth-|x| words that agree with x at positions >= k; n^(k-1) of them,
/// lexicographically ordered. Requires 1 <= k <= |x| + 1.
std::vector<Word> tail_class(const Word& x, std::size_t k);

/// The fiber E_n[k] x = {(y, x) : y in tail_class(x, k)}. Requires |x| >= k - 1.
std::vector<SftArrow> elementary_fiber(std::size_t k, const Word& x);

/// Every arrow at depth d (n^(2d) of them).
std::vector<SftArrow> all_arrows(unsigned alphabet, std::size_t depth);

}  // namespace glab
