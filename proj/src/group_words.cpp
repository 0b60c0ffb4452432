#include "glab/group_words.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdlib>

namespace glab {

namespace {

char inverse_letter(char c) {
  return std::islower(static_cast<unsigned char>(c)) ? static_cast<char>(std::toupper(c))
                                                     : static_cast<char>(std::tolower(c));
}

int letter_rank(char c) {
  int base = std::tolower(static_cast<unsigned char>(c)) - 'a';
  return 2 * base + (std::isupper(static_cast<unsigned char>(c)) ? 1 : 0);
}

void push_reduced(std::string& word, char letter) {
  if (!word.empty() && word.back() == inverse_letter(letter)) {
    word.pop_back();
  } else {
    word.push_back(letter);
  }
}

void require_same_spec(const GroupSpec& a, const GroupSpec& b) {
  if (!(a == b)) {
    throw InvalidInput("group mismatch: " + a.to_string() + " vs " + b.to_string());
  }
}

}  // namespace

GroupSpec GroupSpec::free(int rank) {
  if (rank < 1 || rank > 26) throw InvalidInput("free group rank must be in [1, 26]");
  return GroupSpec(Kind::Free, rank);
}

GroupSpec GroupSpec::parse(std::string_view text) {
  std::string lower;
  for (char c : text) {
    if (!std::isspace(static_cast<unsigned char>(c))) {
      lower.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    }
  }
  if (lower == "z" || lower == "integers" || lower == "int") return integers();
  std::string_view digits;
  if (lower.starts_with("free:")) {
    digits = std::string_view(lower).substr(5);
  } else if (lower.starts_with("free")) {
    digits = std::string_view(lower).substr(4);
  } else if (lower.starts_with("f")) {
    digits = std::string_view(lower).substr(1);
  } else {
    throw InvalidInput("unknown group spec '" + std::string(text) + "'");
  }
  int rank = 0;
  auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), rank);
  if (ec != std::errc() || ptr != digits.data() + digits.size()) {
    throw InvalidInput("unknown group spec '" + std::string(text) + "'");
  }
  return free(rank);
}

std::string GroupSpec::to_string() const {
  return kind_ == Kind::Integers ? "integers" : "free" + std::to_string(rank_);
}

GroupElement GroupElement::generator(const GroupSpec& spec, int index, bool inverse) {
  GroupElement g(spec);
  if (spec.kind() == GroupSpec::Kind::Integers) {
    if (index != 0) throw InvalidInput("Z has a single generator");
    g.exponent_ = inverse ? -1 : 1;
    return g;
  }
  if (index < 0 || index >= spec.rank()) throw InvalidInput("generator index out of range");
  char c = static_cast<char>('a' + index);
  g.letters_.push_back(inverse ? static_cast<char>(std::toupper(c)) : c);
  return g;
}

GroupElement GroupElement::from_exponent(std::int64_t exponent) {
  GroupElement g(GroupSpec::integers());
  g.exponent_ = exponent;
  return g;
}

GroupElement GroupElement::parse(const GroupSpec& spec, std::string_view text) {
  GroupElement g(spec);
  if (spec.kind() == GroupSpec::Kind::Integers) {
    if (text.empty() || text == "e") return g;
    std::string_view body = text;
    if (body.front() == '+') body.remove_prefix(1);
    std::int64_t value = 0;
    auto [ptr, ec] = std::from_chars(body.data(), body.data() + body.size(), value);
    if (ec != std::errc() || ptr != body.data() + body.size()) {
      throw InvalidInput("malformed integer group element '" + std::string(text) + "'");
    }
    g.exponent_ = value;
    return g;
  }
  if (text == "e") return g;
  for (char c : text) {
    int index = std::tolower(static_cast<unsigned char>(c)) - 'a';
    if (!std::isalpha(static_cast<unsigned char>(c)) || index < 0 || index >= spec.rank()) {
      throw InvalidInput("letter '" + std::string(1, c) + "' not in " + spec.to_string());
    }
    push_reduced(g.letters_, c);
  }
  return g;
}

std::size_t GroupElement::length() const noexcept {
  if (spec_.kind() == GroupSpec::Kind::Integers) {
    return static_cast<std::size_t>(exponent_ < 0 ? -exponent_ : exponent_);
  }
  return letters_.size();
}

GroupElement GroupElement::inverse() const {
  GroupElement g(spec_);
  g.exponent_ = -exponent_;
  g.letters_.reserve(letters_.size());
  for (auto it = letters_.rbegin(); it != letters_.rend(); ++it) {
    g.letters_.push_back(inverse_letter(*it));
  }
  return g;
}

GroupElement operator*(const GroupElement& lhs, const GroupElement& rhs) {
  require_same_spec(lhs.spec_, rhs.spec_);
  GroupElement g(lhs.spec_);
  if (lhs.spec_.kind() == GroupSpec::Kind::Integers) {
    g.exponent_ = lhs.exponent_ + rhs.exponent_;
    return g;
  }
  g.letters_.reserve(lhs.letters_.size() + rhs.letters_.size());
  g.letters_ = lhs.letters_;
  for (char c : rhs.letters_) push_reduced(g.letters_, c);
  return g;
}

std::string GroupElement::to_string() const {
  if (spec_.kind() == GroupSpec::Kind::Integers) return std::to_string(exponent_);
  return letters_.empty() ? "e" : letters_;
}

bool operator<(const GroupElement& lhs, const GroupElement& rhs) {
  if (!(lhs.spec_ == rhs.spec_)) {
    return lhs.spec_.kind() != rhs.spec_.kind() ? lhs.spec_.kind() < rhs.spec_.kind()
                                                : lhs.spec_.rank() < rhs.spec_.rank();
  }
  if (lhs.length() != rhs.length()) return lhs.length() < rhs.length();
  if (lhs.spec_.kind() == GroupSpec::Kind::Integers) {
    // equal magnitude: positive first
    return lhs.exponent_ > rhs.exponent_;
  }
  return std::lexicographical_compare(
      lhs.letters_.begin(), lhs.letters_.end(), rhs.letters_.begin(), rhs.letters_.end(),
      [](char x, char y) { return letter_rank(x) < letter_rank(y); });
}

std::size_t GroupElementHash::operator()(const GroupElement& g) const noexcept {
  std::size_t h = std::hash<std::string>{}(g.letters());
  return h ^ (std::hash<std::int64_t>{}(g.exponent()) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2));
}

GroupElement word_algebra(const GroupElement& a, const GroupElement& b, WordOp op) {
  switch (op) {
    case WordOp::Multiply:
      return a * b;
    case WordOp::Invert:
      return a.inverse();
  }
  throw InvalidInput("unknown word operation");
}

FiniteSubset::FiniteSubset(std::vector<GroupElement> elements) : elements_(std::move(elements)) {
  std::sort(elements_.begin(), elements_.end());
  elements_.erase(std::unique(elements_.begin(), elements_.end()), elements_.end());
}

FiniteSubset FiniteSubset::parse(const GroupSpec& spec, std::string_view comma_separated) {
  std::vector<GroupElement> out;
  std::size_t start = 0;
  while (start <= comma_separated.size()) {
    std::size_t end = comma_separated.find(',', start);
    if (end == std::string_view::npos) end = comma_separated.size();
    std::string_view item = comma_separated.substr(start, end - start);
    while (!item.empty() && std::isspace(static_cast<unsigned char>(item.front()))) item.remove_prefix(1);
    while (!item.empty() && std::isspace(static_cast<unsigned char>(item.back()))) item.remove_suffix(1);
    if (!item.empty()) out.push_back(GroupElement::parse(spec, item));
    start = end + 1;
  }
  return FiniteSubset(std::move(out));
}

bool FiniteSubset::contains(const GroupElement& g) const {
  return std::binary_search(elements_.begin(), elements_.end(), g);
}

FiniteSubset operator*(const FiniteSubset& lhs, const FiniteSubset& rhs) {
  std::vector<GroupElement> out;
  out.reserve(lhs.size() * rhs.size());
  for (const auto& b : lhs) {
    for (const auto& k : rhs) out.push_back(b * k);
  }
  return FiniteSubset(std::move(out));
}

FiniteSubset operator-(const FiniteSubset& lhs, const FiniteSubset& rhs) {
  std::vector<GroupElement> out;
  std::set_difference(lhs.begin(), lhs.end(), rhs.begin(), rhs.end(), std::back_inserter(out));
  return FiniteSubset(std::move(out));
}

FiniteSubset operator|(const FiniteSubset& lhs, const FiniteSubset& rhs) {
  std::vector<GroupElement> out;
  std::set_union(lhs.begin(), lhs.end(), rhs.begin(), rhs.end(), std::back_inserter(out));
  return FiniteSubset(std::move(out));
}

FiniteSubset FiniteSubset::translate(const GroupElement& g) const {
  std::vector<GroupElement> out;
  out.reserve(size());
  for (const auto& k : elements_) out.push_back(g * k);
  return FiniteSubset(std::move(out));
}

std::string FiniteSubset::to_string() const {
  std::string out = "{";
  for (std::size_t i = 0; i < elements_.size(); ++i) {
    if (i) out += ",";
    out += elements_[i].to_string();
  }
  return out + "}";
}

FiniteSubset symmetric_generators(const GroupSpec& spec) {
  std::vector<GroupElement> out;
  for (int i = 0; i < spec.rank(); ++i) {
    out.push_back(GroupElement::generator(spec, i, false));
    out.push_back(GroupElement::generator(spec, i, true));
  }
  return FiniteSubset(std::move(out));
}

FiniteSubset ball(const GroupSpec& spec, std::size_t radius) {
  std::vector<GroupElement> out;
  if (spec.kind() == GroupSpec::Kind::Integers) {
    auto r = static_cast<std::int64_t>(radius);
    for (std::int64_t i = -r; i <= r; ++i) out.push_back(GroupElement::from_exponent(i));
    return FiniteSubset(std::move(out));
  }
  const FiniteSubset letters = symmetric_generators(spec);
  std::vector<GroupElement> frontier{GroupElement::identity(spec)};
  out = frontier;
  for (std::size_t len = 1; len <= radius; ++len) {
    std::vector<GroupElement> next;
    for (const auto& w : frontier) {
      for (const auto& g : letters) {
        GroupElement extended = w * g;
        if (extended.length() == len) next.push_back(std::move(extended));
      }
    }
    out.insert(out.end(), next.begin(), next.end());
    frontier = std::move(next);
  }
  return FiniteSubset(std::move(out));
}

Rational boundary_deficiency(const FiniteSubset& test_set, const FiniteSubset& subset) {
  return boundary_deficiency_generic<GroupElement>(
      test_set.elements(), subset.elements(),
      [](const GroupElement& a, const GroupElement& b) { return a * b; });
}

SubsetFamily exhaustive_family(FiniteSubset universe, std::size_t max_size) {
  return [universe = std::move(universe), max_size](const SubsetVisitor& visit) {
    const auto& items = universe.elements();
    std::vector<GroupElement> chosen;
    // depth-first over increasing index tuples
    auto recurse = [&](auto&& self, std::size_t from) -> void {
      for (std::size_t i = from; i < items.size(); ++i) {
        chosen.push_back(items[i]);
        visit(FiniteSubset(chosen));
        if (chosen.size() < max_size) self(self, i + 1);
        chosen.pop_back();
      }
    };
    recurse(recurse, 0);
  };
}

SubsetFamily interval_family(std::size_t max_length) {
  return [max_length](const SubsetVisitor& visit) {
    std::vector<GroupElement> interval;
    for (std::size_t m = 1; m <= max_length; ++m) {
      interval.push_back(GroupElement::from_exponent(static_cast<std::int64_t>(m) - 1));
      visit(FiniteSubset(interval));
    }
  };
}

SubsetFamily explicit_family(std::vector<FiniteSubset> members) {
  return [members = std::move(members)](const SubsetVisitor& visit) {
    for (const auto& k : members) visit(k);
  };
}

FolnerResult folner_audit(const GroupSpec& spec, const FiniteSubset& test_set,
                          const SubsetFamily& family) {
  FolnerResult result{spec, test_set, 0, std::nullopt, {}};
  for (const auto& b : test_set) {
    if (!(b.spec() == spec)) throw InvalidInput("test set element outside " + spec.to_string());
  }
  family([&](const FiniteSubset& k) {
    Rational value = boundary_deficiency(test_set, k);
    ++result.family_size;
    if (!result.min_deficiency || value < *result.min_deficiency) {
      result.min_deficiency = value;
      result.witness = k;
    }
  });
  return result;
}

}  // namespace glab
