#pragma once

#include "glab/certificate.hpp"
#include "glab/group_words.hpp"
#include "glab/invariant_measure.hpp"

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace glab {

/// images[p] = image of point p.
using Permutation = std::vector<std::uint32_t>;

/// "0 2 1" or "0,2,1" -> {0, 2, 1}. InvalidInput unless it is a permutation.
Permutation parse_permutation(std::string_view text);
/// Product of disjoint or overlapping cycles, e.g. "(0 1)(2 3)", on `degree` points.
Permutation parse_cycles(std::string_view text, std::size_t degree);

/// How one level is described.
struct LevelSpec {
  enum class Mode {
    /// Generator images act on the cosets Gamma/Gamma_i directly.
    Cosets,
    /// Generator images generate Q_i; the level acts on Q_i by left multiplication.
    Regular,
  };
  Mode mode = Mode::Cosets;
  /// One permutation per generator (a, b, ... for free groups; 1 for Z).
  std::vector<Permutation> images;
};

struct ChainLimits {
  std::size_t max_order = 120;
  std::size_t max_levels = 5;
};

/// One level: the transitive action of Gamma on Gamma/Gamma_i, base point 0.
struct QuotientLevel {
  std::size_t degree = 0;
  std::vector<Permutation> generators;
  /// to_parent[p] = image of p in the previous level (empty at level 1).
  std::vector<std::uint32_t> to_parent;
  /// A shortest word sending the base point to p.
  std::vector<GroupElement> coset_words;
};

/// Decreasing chain of finite-index normal subgroups, given by its finite quotients.
class QuotientChain {
 public:
  const GroupSpec& group() const noexcept { return group_; }
  std::size_t length() const noexcept { return levels_.size(); }
  /// 1-based.
  const QuotientLevel& level(std::size_t i) const { return levels_.at(i - 1); }

  friend QuotientChain build_chain(const GroupSpec& group, const std::vector<LevelSpec>& specs,
                                   const ChainLimits& limits);

 private:
  GroupSpec group_ = GroupSpec::integers();
  std::vector<QuotientLevel> levels_;
};

/// Validates transitivity, normality (regular action), order cap, strictly
/// increasing indices, and that each kernel contains the next (the connecting map
/// is computed and checked for well-definedness). ChainError with a witness word.
QuotientChain build_chain(const GroupSpec& group, const std::vector<LevelSpec>& specs,
                          const ChainLimits& limits = {});

/// Z/m_1 <- Z/m_2 <- ...
QuotientChain cyclic_chain(const std::vector<std::size_t>& moduli);
/// F_2 through S_3 and S_4 (and S_4 x C_2 when three levels are requested).
QuotientChain free_symmetric_chain(std::size_t levels = 2);

/// Coset indices per level, compatible under the connecting maps.
struct OdometerPoint {
  std::vector<std::uint32_t> cosets;

  friend bool operator==(const OdometerPoint&, const OdometerPoint&) = default;
};

bool is_compatible(const QuotientChain& chain, const OdometerPoint& x);
/// The point at the deepest given level together with its ancestors.
OdometerPoint point_from_level(const QuotientChain& chain, std::size_t level, std::uint32_t coset);
/// Left translation of every level.
OdometerPoint act(const QuotientChain& chain, const GroupElement& gamma, const OdometerPoint& x);
/// gamma acting on one coset of one level.
std::uint32_t act_on_level(const QuotientChain& chain, std::size_t level, const GroupElement& gamma, std::uint32_t p);

/// Stabilizer of x_i in Q_i next to the kernel of the level action, both as
/// membership masks over the elements of Q_i.
struct StabilizerDescriptor {
  std::size_t level = 0;
  std::size_t index = 0;
  std::size_t quotient_order = 0;
  std::vector<bool> stabilizer;
  std::vector<bool> kernel;
  std::string description;

  bool equals_kernel() const { return stabilizer == kernel; }
};

StabilizerDescriptor stabilizer_level(const QuotientChain& chain, const OdometerPoint& x, std::size_t level);

/// Index of the intersection of Gamma_1..Gamma_n, by orbit enumeration of the base tuple.
std::size_t intersection_index(const QuotientChain& chain, std::size_t n);

/// Generator translation tables of a level.
std::vector<Permutation> translation_tables(const QuotientChain& chain, std::size_t level);
/// Uniform measure preserved by every table: each must be a bijection of the level.
Certificate uniform_invariance_check(const std::vector<Permutation>& tables, std::size_t degree,
                                     const std::string& label);
Certificate uniform_invariance_check(const QuotientChain& chain, std::size_t level);

/// U = whole space, V = one coset cylinder of the level, under the uniform measure.
Obstruction odometer_pi_obstruction(const QuotientChain& chain, std::size_t level);

struct TranslationDeficiency {
  Rational direct;
  Rational boundary;
};

/// Fiber {(gamma, x) : gamma in K} of the transformation groupoid at x; direct
/// count of C K x - K x with arrows named by (range tuple, gamma), next to
/// boundary_deficiency(B, K).
TranslationDeficiency translation_fiber_deficiency(const QuotientChain& chain, const OdometerPoint& x,
                                                   const FiniteSubset& test_set, const FiniteSubset& k);

}  // namespace glab
