#include "glab/odometer.hpp"

#include "glab/errors.hpp"
#include "glab/serialization.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

namespace glab {

namespace {

void check_permutation(const Permutation& p) {
  std::vector<bool> hit(p.size(), false);
  for (auto v : p) {
    if (v >= p.size() || hit[v]) throw InvalidInput("not a permutation of 0.." + std::to_string(p.size() - 1));
    hit[v] = true;
  }
}

Permutation inverse_of(const Permutation& p) {
  Permutation inv(p.size());
  for (std::uint32_t i = 0; i < p.size(); ++i) inv[p[i]] = i;
  return inv;
}

/// (f . g)(p) = f(g(p))
Permutation after(const Permutation& f, const Permutation& g) {
  Permutation out(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) out[i] = f[g[i]];
  return out;
}

Permutation identity_permutation(std::size_t degree) {
  Permutation p(degree);
  std::iota(p.begin(), p.end(), 0U);
  return p;
}

/// Generators in the order a, A, b, B, ... (1, -1 for Z) with their letters.
std::vector<std::pair<GroupElement, Permutation>> letters(const GroupSpec& group, const std::vector<Permutation>& gens) {
  std::vector<std::pair<GroupElement, Permutation>> out;
  for (std::size_t i = 0; i < gens.size(); ++i) {
    out.emplace_back(GroupElement::generator(group, static_cast<int>(i)), gens[i]);
    out.emplace_back(GroupElement::generator(group, static_cast<int>(i), true), inverse_of(gens[i]));
  }
  return out;
}

struct Closure {
  std::vector<Permutation> elements;  // elements[0] is the identity
  std::vector<GroupElement> words;
};

/// Every element of the group generated by gens, breadth first, with a word for each.
Closure closure(const GroupSpec& group, const std::vector<Permutation>& gens, std::size_t cap) {
  const std::size_t degree = gens.front().size();
  Closure c;
  std::map<Permutation, std::size_t> seen;
  c.elements.push_back(identity_permutation(degree));
  c.words.push_back(GroupElement::identity(group));
  seen.emplace(c.elements[0], 0);
  const auto steps = letters(group, gens);
  for (std::size_t i = 0; i < c.elements.size(); ++i) {
    for (const auto& [letter, perm] : steps) {
      Permutation next = after(perm, c.elements[i]);
      if (seen.contains(next)) continue;
      if (c.elements.size() == cap) {
        throw ChainError("quotient order exceeds the cap of " + std::to_string(cap), letter.to_string());
      }
      seen.emplace(next, c.elements.size());
      c.elements.push_back(std::move(next));
      c.words.push_back(letter * c.words[i]);
    }
  }
  return c;
}

std::uint32_t apply_word(const std::vector<Permutation>& gens, const GroupElement& gamma, std::uint32_t p) {
  if (gamma.spec().is_free()) {
    const auto& w = gamma.letters();
    for (auto it = w.rbegin(); it != w.rend(); ++it) {
      const bool inv = *it >= 'A' && *it <= 'Z';
      const std::size_t g = static_cast<std::size_t>((inv ? *it - 'A' : *it - 'a'));
      if (g >= gens.size()) throw InvalidInput("letter " + std::string(1, *it) + " has no image at this level");
      const auto& perm = gens[g];
      if (inv) {
        p = static_cast<std::uint32_t>(std::find(perm.begin(), perm.end(), p) - perm.begin());
      } else {
        p = perm[p];
      }
    }
    return p;
  }
  const auto& perm = gens.at(0);
  const auto n = static_cast<std::int64_t>(perm.size());
  std::int64_t e = ((gamma.exponent() % n) + n) % n;
  for (std::int64_t i = 0; i < e; ++i) p = perm[p];
  return p;
}

QuotientLevel make_level(const GroupSpec& group, const LevelSpec& spec, std::size_t index, const ChainLimits& limits) {
  const std::string where = "level " + std::to_string(index);
  const std::size_t expected = group.is_free() ? static_cast<std::size_t>(group.rank()) : 1;
  if (spec.images.size() != expected) {
    throw InvalidInput(where + ": expected " + std::to_string(expected) + " generator images");
  }
  for (const auto& p : spec.images) {
    if (p.empty() || p.size() != spec.images.front().size()) throw InvalidInput(where + ": images differ in degree");
    check_permutation(p);
  }
  Closure c = closure(group, spec.images, limits.max_order);

  QuotientLevel level;
  if (spec.mode == LevelSpec::Mode::Regular) {
    std::map<Permutation, std::uint32_t> position;
    for (std::uint32_t i = 0; i < c.elements.size(); ++i) position.emplace(c.elements[i], i);
    level.degree = c.elements.size();
    for (const auto& g : spec.images) {
      Permutation table(level.degree);
      for (std::size_t i = 0; i < level.degree; ++i) table[i] = position.at(after(g, c.elements[i]));
      level.generators.push_back(std::move(table));
    }
  } else {
    level.degree = spec.images.front().size();
    level.generators = spec.images;
    if (c.elements.size() != level.degree) {
      // Transitive with order > degree: some non-identity element fixes the base point.
      for (std::size_t i = 1; i < c.elements.size(); ++i) {
        if (c.elements[i][0] == 0) {
          throw ChainError(where + ": coset stabilizer is not normal", c.words[i].to_string());
        }
      }
    }
  }

  level.coset_words.assign(level.degree, GroupElement::identity(group));
  std::vector<bool> reached(level.degree, false);
  reached[0] = true;
  std::deque<std::uint32_t> queue{0};
  const auto steps = letters(group, level.generators);
  while (!queue.empty()) {
    auto p = queue.front();
    queue.pop_front();
    for (const auto& [letter, perm] : steps) {
      auto q = perm[p];
      if (reached[q]) continue;
      reached[q] = true;
      level.coset_words[q] = letter * level.coset_words[p];
      queue.push_back(q);
    }
  }
  if (std::find(reached.begin(), reached.end(), false) != reached.end()) {
    throw ChainError(where + ": action is not transitive", std::to_string(std::find(reached.begin(), reached.end(), false) - reached.begin()));
  }
  return level;
}

void connect(const GroupSpec& group, const QuotientLevel& parent, QuotientLevel& child, std::size_t index) {
  const std::string where = "level " + std::to_string(index);
  if (child.degree <= parent.degree) {
    throw ChainError(where + ": index " + std::to_string(child.degree) + " does not exceed " +
                         std::to_string(parent.degree),
                     child.coset_words.back().to_string());
  }
  constexpr std::uint32_t kUnset = UINT32_MAX;
  child.to_parent.assign(child.degree, kUnset);
  child.to_parent[0] = 0;
  std::deque<std::uint32_t> queue{0};
  const auto child_steps = letters(group, child.generators);
  const auto parent_steps = letters(group, parent.generators);
  while (!queue.empty()) {
    auto p = queue.front();
    queue.pop_front();
    for (std::size_t s = 0; s < child_steps.size(); ++s) {
      auto q = child_steps[s].second[p];
      auto image = parent_steps[s].second[child.to_parent[p]];
      if (child.to_parent[q] == kUnset) {
        child.to_parent[q] = image;
        queue.push_back(q);
      } else if (child.to_parent[q] != image) {
        GroupElement w = child.coset_words[q].inverse() * child_steps[s].first * child.coset_words[p];
        throw ChainError(where + ": kernel is not contained in the previous kernel", w.to_string());
      }
    }
  }
}

}  // namespace

Permutation parse_permutation(std::string_view text) {
  std::string cleaned(text);
  std::replace(cleaned.begin(), cleaned.end(), ',', ' ');
  std::istringstream in(cleaned);
  Permutation p;
  std::string token;
  while (in >> token) {
    try {
      std::size_t used = 0;
      long v = std::stol(token, &used);
      if (used != token.size() || v < 0) throw InvalidInput("bad permutation entry '" + token + "'");
      p.push_back(static_cast<std::uint32_t>(v));
    } catch (const std::logic_error&) {
      throw InvalidInput("bad permutation entry '" + token + "'");
    }
  }
  if (p.empty()) throw InvalidInput("empty permutation");
  check_permutation(p);
  return p;
}

Permutation parse_cycles(std::string_view text, std::size_t degree) {
  Permutation p = identity_permutation(degree);
  std::size_t pos = 0;
  while ((pos = text.find('(', pos)) != std::string_view::npos) {
    auto close = text.find(')', pos);
    if (close == std::string_view::npos) throw InvalidInput("unclosed cycle");
    std::string body(text.substr(pos + 1, close - pos - 1));
    std::replace(body.begin(), body.end(), ',', ' ');
    std::istringstream in(body);
    std::vector<std::uint32_t> cycle;
    long v = 0;
    while (in >> v) {
      if (v < 0 || static_cast<std::size_t>(v) >= degree) throw InvalidInput("cycle entry out of range");
      cycle.push_back(static_cast<std::uint32_t>(v));
    }
    Permutation c = identity_permutation(degree);
    for (std::size_t i = 0; i < cycle.size(); ++i) c[cycle[i]] = cycle[(i + 1) % cycle.size()];
    check_permutation(c);
    p = after(p, c);
    pos = close + 1;
  }
  return p;
}

QuotientChain build_chain(const GroupSpec& group, const std::vector<LevelSpec>& specs, const ChainLimits& limits) {
  if (specs.empty()) throw InvalidInput("a chain needs at least one level");
  if (specs.size() > limits.max_levels) {
    throw InvalidInput("chain has " + std::to_string(specs.size()) + " levels, cap is " +
                       std::to_string(limits.max_levels));
  }
  QuotientChain chain;
  chain.group_ = group;
  for (std::size_t i = 0; i < specs.size(); ++i) {
    QuotientLevel level = make_level(group, specs[i], i + 1, limits);
    if (level.degree > limits.max_order) {
      throw ChainError("level " + std::to_string(i + 1) + ": index exceeds the cap", level.coset_words.back().to_string());
    }
    if (i > 0) connect(group, chain.levels_.back(), level, i + 1);
    chain.levels_.push_back(std::move(level));
  }
  return chain;
}

QuotientChain cyclic_chain(const std::vector<std::size_t>& moduli) {
  std::vector<LevelSpec> specs;
  for (auto m : moduli) {
    if (m < 1) throw InvalidInput("modulus must be >= 1");
    Permutation shift(m);
    for (std::size_t i = 0; i < m; ++i) shift[i] = static_cast<std::uint32_t>((i + 1) % m);
    specs.push_back({LevelSpec::Mode::Cosets, {shift}});
  }
  return build_chain(GroupSpec::integers(), specs);
}

QuotientChain free_symmetric_chain(std::size_t levels) {
  if (levels < 1 || levels > 3) throw InvalidInput("the built-in free chain has 1 to 3 levels");
  std::vector<LevelSpec> specs = {
      {LevelSpec::Mode::Regular, {parse_cycles("(1 2)", 3), parse_cycles("(0 2)", 3)}},
      {LevelSpec::Mode::Regular, {parse_cycles("(0 1)", 4), parse_cycles("(0 1 2 3)", 4)}},
      {LevelSpec::Mode::Regular, {parse_cycles("(0 1)(4 5)", 6), parse_cycles("(0 1 2 3)", 6)}},
  };
  specs.resize(levels);
  return build_chain(GroupSpec::free(2), specs);
}

// ------------------------------------------------------------------- points

bool is_compatible(const QuotientChain& chain, const OdometerPoint& x) {
  if (x.cosets.size() > chain.length()) return false;
  for (std::size_t i = 0; i < x.cosets.size(); ++i) {
    if (x.cosets[i] >= chain.level(i + 1).degree) return false;
    if (i > 0 && chain.level(i + 1).to_parent[x.cosets[i]] != x.cosets[i - 1]) return false;
  }
  return true;
}

OdometerPoint point_from_level(const QuotientChain& chain, std::size_t level, std::uint32_t coset) {
  if (level < 1 || level > chain.length()) throw InvalidInput("level out of range");
  if (coset >= chain.level(level).degree) throw InvalidInput("coset out of range");
  OdometerPoint x;
  x.cosets.assign(level, 0);
  x.cosets[level - 1] = coset;
  for (std::size_t i = level; i > 1; --i) x.cosets[i - 2] = chain.level(i).to_parent[x.cosets[i - 1]];
  return x;
}

std::uint32_t act_on_level(const QuotientChain& chain, std::size_t level, const GroupElement& gamma, std::uint32_t p) {
  if (!(gamma.spec() == chain.group())) throw InvalidInput("element from a different group");
  return apply_word(chain.level(level).generators, gamma, p);
}

OdometerPoint act(const QuotientChain& chain, const GroupElement& gamma, const OdometerPoint& x) {
  if (!is_compatible(chain, x)) throw InvalidInput("odometer point is not compatible with the chain");
  OdometerPoint out;
  for (std::size_t i = 0; i < x.cosets.size(); ++i) out.cosets.push_back(act_on_level(chain, i + 1, gamma, x.cosets[i]));
  return out;
}

StabilizerDescriptor stabilizer_level(const QuotientChain& chain, const OdometerPoint& x, std::size_t level) {
  if (level < 1 || level > x.cosets.size()) throw InvalidInput("stabilizer level beyond the point");
  const auto& lv = chain.level(level);
  Closure c = closure(chain.group(), lv.generators, lv.degree * lv.degree + 1);
  StabilizerDescriptor d;
  d.level = level;
  d.index = lv.degree;
  d.quotient_order = c.elements.size();
  const auto p = x.cosets[level - 1];
  const Permutation id = identity_permutation(lv.degree);
  for (const auto& g : c.elements) {
    d.stabilizer.push_back(g[p] == p);
    d.kernel.push_back(g == id);
  }
  if (chain.group().is_free()) {
    d.description = "kernel of " + chain.group().to_string() + " onto a quotient of order " +
                    std::to_string(d.quotient_order) + ", index " + std::to_string(d.index);
  } else {
    d.description = std::to_string(d.index) + "Z";
  }
  return d;
}

std::size_t intersection_index(const QuotientChain& chain, std::size_t n) {
  if (n < 1 || n > chain.length()) throw InvalidInput("intersection depth out of range");
  std::vector<std::vector<Permutation>> gens;
  for (std::size_t i = 1; i <= n; ++i) gens.push_back(chain.level(i).generators);
  std::vector<std::uint32_t> start(n, 0);
  std::map<std::vector<std::uint32_t>, bool> seen{{start, true}};
  std::deque<std::vector<std::uint32_t>> queue{start};
  const std::size_t count = gens[0].size();
  while (!queue.empty()) {
    auto t = queue.front();
    queue.pop_front();
    for (std::size_t g = 0; g < count; ++g) {
      for (bool inv : {false, true}) {
        std::vector<std::uint32_t> next(n);
        for (std::size_t i = 0; i < n; ++i) {
          const auto& perm = gens[i][g];
          next[i] = inv ? static_cast<std::uint32_t>(std::find(perm.begin(), perm.end(), t[i]) - perm.begin())
                        : perm[t[i]];
        }
        if (seen.emplace(next, true).second) queue.push_back(std::move(next));
      }
    }
  }
  return seen.size();
}

std::vector<Permutation> translation_tables(const QuotientChain& chain, std::size_t level) {
  return chain.level(level).generators;
}

Certificate uniform_invariance_check(const std::vector<Permutation>& tables, std::size_t degree,
                                     const std::string& label) {
  Certificate c;
  c.property = "uniform_measure_invariance";
  c.parameters = {{"level", label}, {"degree", degree}};
  nlohmann::json permutations = nlohmann::json::array();
  nlohmann::json violations = nlohmann::json::array();
  for (std::size_t g = 0; g < tables.size(); ++g) {
    const auto& t = tables[g];
    permutations.push_back(t);
    std::vector<std::size_t> preimages(degree, 0);
    bool in_range = t.size() == degree;
    for (auto v : t) {
      if (v >= degree) {
        in_range = false;
        break;
      }
      ++preimages[v];
    }
    if (!in_range) {
      violations.push_back({{"generator", g}, {"reason", "table is not a map of the level"}});
      continue;
    }
    for (std::size_t p = 0; p < degree; ++p) {
      if (preimages[p] != 1) {
        // Pushforward mass of {p} under the translation.
        violations.push_back({{"generator", g},
                              {"point", p},
                              {"preimages", preimages[p]},
                              {"pushforward_mass", to_json(Rational(static_cast<long long>(preimages[p]),
                                                                    static_cast<long long>(degree)))},
                              {"uniform_mass", to_json(Rational(1, static_cast<long long>(degree)))}});
        break;
      }
    }
  }
  c.verdict = violations.empty() ? Verdict::Pass : Verdict::Fail;
  c.witnesses = {{"violations", violations}, {"permutations", permutations}};
  return c;
}

Certificate uniform_invariance_check(const QuotientChain& chain, std::size_t level) {
  return uniform_invariance_check(translation_tables(chain, level), chain.level(level).degree,
                                  std::to_string(level));
}

Obstruction odometer_pi_obstruction(const QuotientChain& chain, std::size_t level) {
  const auto degree = static_cast<long long>(chain.level(level).degree);
  return pi_obstruction_from_masses("uniform on level " + std::to_string(level), "X", Rational(1),
                                    "coset 0 of level " + std::to_string(level), Rational(1, degree));
}

TranslationDeficiency translation_fiber_deficiency(const QuotientChain& chain, const OdometerPoint& x,
                                                   const FiniteSubset& test_set, const FiniteSubset& k) {
  if (k.empty()) throw InvalidInput("translation fiber needs a nonempty K");
  using Arrow = std::pair<OdometerPoint, GroupElement>;
  auto less = [](const Arrow& a, const Arrow& b) {
    if (a.first.cosets != b.first.cosets) return a.first.cosets < b.first.cosets;
    return a.second < b.second;
  };
  std::set<Arrow, decltype(less)> inside(less);
  for (const auto& g : k) inside.emplace(act(chain, g, x), g);
  std::set<Arrow, decltype(less)> outside(less);
  for (const auto& b : test_set) {
    for (const auto& g : k) {
      Arrow moved{act(chain, b, act(chain, g, x)), b * g};
      if (!inside.contains(moved)) outside.insert(std::move(moved));
    }
  }
  return {Rational(static_cast<long long>(outside.size()), static_cast<long long>(inside.size())),
          boundary_deficiency(test_set, k)};
}

}  // namespace glab
