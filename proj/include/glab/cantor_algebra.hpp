#pragma once

#include "glab/group_words.hpp"
#include "glab/rational.hpp"

#include <compare>
#include <cstddef>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace glab {

/// Finite word over {0, ..., n-1}, 2 <= n <= 10, stored as a string of digits.
///
/// Positions follow the 1-based convention of sequence coordinates: `at(1)` is the
/// first symbol. The empty word names the full space.
class Word {
 public:
  Word() = default;
  /// Throws InvalidInput if a symbol is outside the alphabet.
  Word(std::string_view digits, unsigned alphabet);

  static Word empty(unsigned alphabet) { return Word("", alphabet); }
  /// The word 00...0 of the given length.
  static Word zeros(std::size_t length, unsigned alphabet);

  unsigned alphabet() const noexcept { return alphabet_; }
  std::size_t size() const noexcept { return digits_.size(); }
  bool is_empty() const noexcept { return digits_.empty(); }
  /// Symbol at 1-based position.
  int at(std::size_t position) const { return digits_.at(position - 1) - '0'; }
  const std::string& str() const noexcept { return digits_; }

  Word prefix(std::size_t length) const;
  /// Drops the first `length` symbols.
  Word drop(std::size_t length) const;
  Word append(int symbol) const;
  friend Word operator+(const Word& lhs, const Word& rhs);
  bool has_prefix(const Word& u) const;

  friend bool operator==(const Word&, const Word&) = default;
  friend auto operator<=>(const Word&, const Word&) = default;

 private:
  std::string digits_;
  unsigned alphabet_ = 2;
};

/// Every word of the given length, in lexicographic order.
std::vector<Word> all_words(unsigned alphabet, std::size_t length);
/// Position of `w` in all_words(n, |w|).
std::size_t word_index(const Word& w);

/// C_u: all infinite sequences with prefix u.
struct Cylinder {
  Word prefix;
};

/// n^-|u|.
Rational cylinder_measure(const Cylinder& c);

/// Finite union of cylinders, kept in canonical form: the maximal cylinders of
/// the set, sorted by their prefix strings. Equal sets have equal representations.
class ClopenSet {
 public:
  explicit ClopenSet(unsigned alphabet = 2) : alphabet_(alphabet) {}
  /// Normalizes an arbitrary (possibly overlapping) family of prefixes.
  ClopenSet(unsigned alphabet, std::vector<Word> prefixes);

  static ClopenSet full(unsigned alphabet) { return ClopenSet(alphabet, {Word::empty(alphabet)}); }
  static ClopenSet cylinder(const Word& u) { return ClopenSet(u.alphabet(), {u}); }
  static ClopenSet parse(unsigned alphabet, const std::vector<std::string>& prefixes);

  unsigned alphabet() const noexcept { return alphabet_; }
  const std::vector<Word>& cylinders() const noexcept { return cylinders_; }
  bool empty() const noexcept { return cylinders_.empty(); }
  bool is_full() const noexcept { return cylinders_.size() == 1 && cylinders_[0].is_empty(); }
  /// Whether C_x is contained in the set.
  bool contains(const Word& x) const;
  bool subset_of(const ClopenSet& other) const;
  /// Longest member prefix (0 for the empty and full sets).
  std::size_t max_length() const noexcept;

  ClopenSet complement() const;
  friend ClopenSet operator|(const ClopenSet& a, const ClopenSet& b);
  friend ClopenSet operator&(const ClopenSet& a, const ClopenSet& b);
  friend ClopenSet operator-(const ClopenSet& a, const ClopenSet& b);

  std::vector<std::string> to_strings() const;

  friend bool operator==(const ClopenSet&, const ClopenSet&) = default;

 private:
  unsigned alphabet_;
  std::vector<Word> cylinders_;
};

enum class SetOp { Union, Intersect, Difference, Complement };
/// Dispatcher over the operators above; `b` is ignored for Complement.
ClopenSet boolean_algebra(const ClopenSet& a, const ClopenSet& b, SetOp op);

/// Sum of cylinder masses.
Rational clopen_measure(const ClopenSet& a);

/// O(C_{u_1}, ..., C_{u_k}; t_1, ..., t_k) restricted to the unit space: coordinate
/// t_i carries prefix u_i, every other coordinate is unconstrained. Entries with
/// the empty word impose nothing and are dropped.
class ProductCylinder {
 public:
  explicit ProductCylinder(unsigned alphabet = 2) : alphabet_(alphabet) {}
  ProductCylinder(unsigned alphabet, std::map<GroupElement, Word> assignment);

  unsigned alphabet() const noexcept { return alphabet_; }
  const std::map<GroupElement, Word>& assignment() const noexcept { return assignment_; }
  /// Constrained coordinates.
  FiniteSubset window() const;
  /// Whether a point truncated to (window, depth) lies in the set. Coordinates
  /// the point does not carry count as failing.
  bool contains(const std::map<GroupElement, Word>& point) const;

  friend bool operator==(const ProductCylinder&, const ProductCylinder&) = default;

 private:
  unsigned alphabet_;
  std::map<GroupElement, Word> assignment_;
};

/// Product of the coordinate cylinder masses; unconstrained coordinates give 1.
Rational product_measure(const ProductCylinder& p);

}  // namespace glab
