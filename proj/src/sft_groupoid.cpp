#include "glab/sft_groupoid.hpp"

#include "glab/errors.hpp"

namespace glab {

SftArrow::SftArrow(Word target, Word source) : target_(std::move(target)), source_(std::move(source)) {
  if (target_.alphabet() != source_.alphabet()) throw InvalidInput("arrow endpoints over different alphabets");
  if (target_.size() != source_.size()) throw InvalidInput("arrow endpoints at different depths");
  tail_bound_ = 1;
  for (std::size_t i = source_.size(); i >= 1; --i) {
    if (target_.at(i) != source_.at(i)) {
      tail_bound_ = i + 1;
      break;
    }
  }
}

SftArrow compose(const SftArrow& a, const SftArrow& b) {
  if (a.source() != b.target()) {
    throw CompositionError("cannot compose: source " + a.source().str() + " != target " + b.target().str());
  }
  return SftArrow(a.target(), b.source());
}

SftArrow inverse(const SftArrow& a) { return SftArrow(a.source(), a.target()); }
SftArrow source(const SftArrow& a) { return SftArrow::unit(a.source()); }
SftArrow range(const SftArrow& a) { return SftArrow::unit(a.target()); }

SftArrow arrow_algebra(const SftArrow& a, const SftArrow& b, ArrowOp op) {
  switch (op) {
    case ArrowOp::Compose:
      return compose(a, b);
    case ArrowOp::Inverse:
      return inverse(a);
    case ArrowOp::Source:
      return source(a);
    case ArrowOp::Range:
      return range(a);
  }
  throw InvalidInput("unknown arrow operation");
}

PrefixBisection::PrefixBisection(Word from, Word to) : from_(std::move(from)), to_(std::move(to)) {
  if (from_.alphabet() != to_.alphabet()) throw InvalidInput("bisection prefixes over different alphabets");
  if (from_.size() != to_.size()) {
    throw InvalidInput("bisection prefixes must have equal length: " + from_.str() + ", " + to_.str());
  }
}

bool PrefixBisection::contains(const SftArrow& g) const {
  if (g.alphabet() != alphabet() || g.depth() < length()) return false;
  return g.source().has_prefix(from_) && g.target().has_prefix(to_) &&
         g.source().drop(length()) == g.target().drop(length());
}

SftArrow apply_bisection(const PrefixBisection& sigma, const Word& x) {
  if (x.alphabet() != sigma.alphabet() || !x.has_prefix(sigma.from())) {
    throw DomainError("point " + x.str() + " is not in C_" + sigma.from().str());
  }
  return SftArrow(sigma.to() + x.drop(sigma.length()), x);
}

std::vector<Word> tail_class(const Word& x, std::size_t k) {
  if (k < 1 || k > x.size() + 1) {
    throw InvalidInput("tail bound " + std::to_string(k) + " outside [1, " + std::to_string(x.size() + 1) + "]");
  }
  std::vector<Word> out;
  const Word tail = x.drop(k - 1);
  for (const auto& head : all_words(x.alphabet(), k - 1)) out.push_back(head + tail);
  return out;
}

std::vector<SftArrow> elementary_fiber(std::size_t k, const Word& x) {
  if (k < 1 || x.size() + 1 < k) {
    throw InvalidInput("elementary_fiber: depth " + std::to_string(x.size()) + " too small for k = " +
                       std::to_string(k));
  }
  std::vector<SftArrow> out;
  for (auto& y : tail_class(x, k)) out.emplace_back(std::move(y), x);
  return out;
}

std::vector<SftArrow> all_arrows(unsigned alphabet, std::size_t depth) {
  const auto words = all_words(alphabet, depth);
  std::vector<SftArrow> out;
  out.reserve(words.size() * words.size());
  for (const auto& y : words) {
    for (const auto& x : words) out.emplace_back(y, x);
  }
  return out;
}

}  // namespace glab
