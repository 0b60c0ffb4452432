#include "glab/cantor_algebra.hpp"

#include "glab/errors.hpp"

#include <algorithm>
#include <set>

namespace glab {

namespace {

void require_alphabet(unsigned n) {
  if (n < 2 || n > 10) throw InvalidInput("alphabet size must be in [2, 10], got " + std::to_string(n));
}

void require_same_alphabet(unsigned a, unsigned b) {
  if (a != b) throw InvalidInput("alphabet mismatch: " + std::to_string(a) + " vs " + std::to_string(b));
}

// Cylinders of `prefixes` with no member contained in another, then complete
// sibling families merged bottom-up. The result is the set of maximal cylinders.
std::vector<Word> normalize(unsigned n, std::vector<Word> prefixes) {
  std::sort(prefixes.begin(), prefixes.end(), [](const Word& a, const Word& b) {
    return a.size() != b.size() ? a.size() < b.size() : a < b;
  });
  std::set<Word> kept;
  std::size_t max_len = 0;
  for (const auto& w : prefixes) {
    bool covered = false;
    for (std::size_t len = 0; len <= w.size() && !covered; ++len) {
      covered = kept.contains(w.prefix(len));
    }
    if (!covered) {
      kept.insert(w);
      max_len = std::max(max_len, w.size());
    }
  }
  for (std::size_t len = max_len; len >= 1; --len) {
    std::map<Word, unsigned> children;
    for (const auto& w : kept) {
      if (w.size() == len) ++children[w.prefix(len - 1)];
    }
    for (const auto& [parent, count] : children) {
      if (count != n) continue;
      for (unsigned a = 0; a < n; ++a) kept.erase(parent.append(static_cast<int>(a)));
      kept.insert(parent);
    }
  }
  return {kept.begin(), kept.end()};
}

// C_u minus the union of `removed`, as disjoint cylinders.
void subtract_into(const Word& u, const std::vector<Word>& removed, std::vector<Word>& out) {
  std::vector<Word> below;
  for (const auto& v : removed) {
    if (u.has_prefix(v)) return;
    if (v.has_prefix(u)) below.push_back(v);
  }
  if (below.empty()) {
    out.push_back(u);
    return;
  }
  for (unsigned a = 0; a < u.alphabet(); ++a) subtract_into(u.append(static_cast<int>(a)), below, out);
}

}  // namespace

Word::Word(std::string_view digits, unsigned alphabet) : digits_(digits), alphabet_(alphabet) {
  require_alphabet(alphabet);
  for (char c : digits_) {
    if (c < '0' || c >= static_cast<char>('0' + alphabet)) {
      throw InvalidInput("symbol '" + std::string(1, c) + "' outside alphabet of size " +
                         std::to_string(alphabet));
    }
  }
}

Word Word::zeros(std::size_t length, unsigned alphabet) {
  return Word(std::string(length, '0'), alphabet);
}

Word Word::prefix(std::size_t length) const {
  Word w = *this;
  w.digits_.resize(std::min(length, digits_.size()));
  return w;
}

Word Word::drop(std::size_t length) const {
  Word w = *this;
  w.digits_.erase(0, std::min(length, digits_.size()));
  return w;
}

Word Word::append(int symbol) const {
  if (symbol < 0 || symbol >= static_cast<int>(alphabet_)) throw InvalidInput("symbol outside alphabet");
  Word w = *this;
  w.digits_.push_back(static_cast<char>('0' + symbol));
  return w;
}

Word operator+(const Word& lhs, const Word& rhs) {
  require_same_alphabet(lhs.alphabet_, rhs.alphabet_);
  Word w = lhs;
  w.digits_ += rhs.digits_;
  return w;
}

bool Word::has_prefix(const Word& u) const {
  return u.size() <= size() && std::equal(u.digits_.begin(), u.digits_.end(), digits_.begin());
}

std::vector<Word> all_words(unsigned alphabet, std::size_t length) {
  require_alphabet(alphabet);
  std::vector<Word> out{Word::empty(alphabet)};
  for (std::size_t i = 0; i < length; ++i) {
    std::vector<Word> next;
    next.reserve(out.size() * alphabet);
    for (const auto& w : out) {
      for (unsigned a = 0; a < alphabet; ++a) next.push_back(w.append(static_cast<int>(a)));
    }
    out = std::move(next);
  }
  return out;
}

std::size_t word_index(const Word& w) {
  std::size_t index = 0;
  for (char c : w.str()) index = index * w.alphabet() + static_cast<std::size_t>(c - '0');
  return index;
}

Rational cylinder_measure(const Cylinder& c) {
  return inverse_power(c.prefix.alphabet(), c.prefix.size());
}

ClopenSet::ClopenSet(unsigned alphabet, std::vector<Word> prefixes) : alphabet_(alphabet) {
  require_alphabet(alphabet);
  for (const auto& w : prefixes) require_same_alphabet(alphabet, w.alphabet());
  cylinders_ = normalize(alphabet, std::move(prefixes));
}

ClopenSet ClopenSet::parse(unsigned alphabet, const std::vector<std::string>& prefixes) {
  std::vector<Word> words;
  words.reserve(prefixes.size());
  for (const auto& p : prefixes) words.emplace_back(p, alphabet);
  return ClopenSet(alphabet, std::move(words));
}

bool ClopenSet::contains(const Word& x) const {
  require_same_alphabet(alphabet_, x.alphabet());
  return std::any_of(cylinders_.begin(), cylinders_.end(), [&](const Word& u) { return x.has_prefix(u); });
}

bool ClopenSet::subset_of(const ClopenSet& other) const {
  return (*this - other).empty();
}

std::size_t ClopenSet::max_length() const noexcept {
  std::size_t len = 0;
  for (const auto& w : cylinders_) len = std::max(len, w.size());
  return len;
}

ClopenSet ClopenSet::complement() const { return full(alphabet_) - *this; }

ClopenSet operator|(const ClopenSet& a, const ClopenSet& b) {
  require_same_alphabet(a.alphabet_, b.alphabet_);
  std::vector<Word> all = a.cylinders_;
  all.insert(all.end(), b.cylinders_.begin(), b.cylinders_.end());
  return ClopenSet(a.alphabet_, std::move(all));
}

ClopenSet operator&(const ClopenSet& a, const ClopenSet& b) {
  require_same_alphabet(a.alphabet_, b.alphabet_);
  std::vector<Word> out;
  for (const auto& u : a.cylinders_) {
    for (const auto& v : b.cylinders_) {
      if (u.has_prefix(v)) {
        out.push_back(u);
      } else if (v.has_prefix(u)) {
        out.push_back(v);
      }
    }
  }
  return ClopenSet(a.alphabet_, std::move(out));
}

ClopenSet operator-(const ClopenSet& a, const ClopenSet& b) {
  require_same_alphabet(a.alphabet_, b.alphabet_);
  std::vector<Word> out;
  for (const auto& u : a.cylinders_) subtract_into(u, b.cylinders_, out);
  return ClopenSet(a.alphabet_, std::move(out));
}

std::vector<std::string> ClopenSet::to_strings() const {
  std::vector<std::string> out;
  out.reserve(cylinders_.size());
  for (const auto& w : cylinders_) out.push_back(w.str());
  return out;
}

ClopenSet boolean_algebra(const ClopenSet& a, const ClopenSet& b, SetOp op) {
  switch (op) {
    case SetOp::Union:
      return a | b;
    case SetOp::Intersect:
      return a & b;
    case SetOp::Difference:
      return a - b;
    case SetOp::Complement:
      return a.complement();
  }
  throw InvalidInput("unknown set operation");
}

Rational clopen_measure(const ClopenSet& a) {
  Rational total = 0;
  for (const auto& u : a.cylinders()) total += cylinder_measure({u});
  return total;
}

ProductCylinder::ProductCylinder(unsigned alphabet, std::map<GroupElement, Word> assignment)
    : alphabet_(alphabet) {
  require_alphabet(alphabet);
  for (const auto& [t, w] : assignment) require_same_alphabet(alphabet, w.alphabet());
  assignment_ = std::move(assignment);
  std::erase_if(assignment_, [](const auto& kv) { return kv.second.is_empty(); });
}

FiniteSubset ProductCylinder::window() const {
  std::vector<GroupElement> keys;
  keys.reserve(assignment_.size());
  for (const auto& [t, w] : assignment_) keys.push_back(t);
  return FiniteSubset(std::move(keys));
}

bool ProductCylinder::contains(const std::map<GroupElement, Word>& point) const {
  for (const auto& [t, u] : assignment_) {
    auto it = point.find(t);
    if (it == point.end() || !it->second.has_prefix(u)) return false;
  }
  return true;
}

Rational product_measure(const ProductCylinder& p) {
  std::size_t total_length = 0;
  for (const auto& [t, w] : p.assignment()) total_length += w.size();
  return inverse_power(p.alphabet(), total_length);
}

}  // namespace glab
