#pragma once

#include "glab/cantor_algebra.hpp"
#include "glab/certificate.hpp"
#include "glab/sft_groupoid.hpp"
#include "glab/twisted_groupoid.hpp"

#include <cstddef>
#include <map>
#include <string>
#include <vector>

namespace glab {

/// Cells of a truncated product space: every tuple of depth-d words over the
/// window coordinates, indexed lexicographically (first coordinate most significant).
/// The one-coordinate layout stands for the plain space of sequences.
struct MeasureLayout {
  unsigned alphabet = 2;
  std::size_t depth = 1;
  std::vector<GroupElement> window;

  static MeasureLayout plain(unsigned alphabet, std::size_t depth);

  std::size_t cells() const;
  std::vector<Word> cell(std::size_t index) const;
  std::size_t index_of(const std::vector<Word>& words) const;
  /// Whether every cell-word at a window coordinate extends the cylinder's word there.
  bool cell_in(std::size_t index, const ProductCylinder& p) const;

  friend bool operator==(const MeasureLayout&, const MeasureLayout&) = default;
};

/// Masses of the cells of a layout.
struct MeasureVector {
  MeasureLayout layout;
  std::vector<Rational> values;

  /// The product of uniform measures on the layout.
  static MeasureVector product(const MeasureLayout& layout);

  Rational mass(const ProductCylinder& p) const;
  /// Plain layouts only.
  Rational mass(const ClopenSet& s) const;
  Rational total() const;
  bool is_probability() const;
};

/// Sparse linear form over cell variables.
using LinearForm = std::map<std::size_t, Rational>;

LinearForm form_of(const MeasureLayout& layout, const ProductCylinder& p);
/// Plain layouts only.
LinearForm form_of(const MeasureLayout& layout, const ClopenSet& s);

/// Equalities lhs = rhs between cell-variable forms, plus total mass 1.
struct ConstraintSystem {
  MeasureLayout layout;
  std::vector<std::pair<LinearForm, LinearForm>> equalities;
  /// Where each equality came from (same length as equalities).
  std::vector<std::string> origins;

  void add(LinearForm lhs, LinearForm rhs, std::string origin);
  /// mu(s(sigma)) = mu(r(sigma)) on a plain layout.
  void add(const PrefixBisection& sigma);
  /// mu(a) = mu(b) on a plain layout.
  void add(const ClopenSet& a, const ClopenSet& b, std::string origin);
};

/// All sigma_{u,v} with |u| = |v| = depth; only u < v when symmetry_reduced.
ConstraintSystem full_bisection_system(unsigned alphabet, std::size_t depth, bool symmetry_reduced = true);

struct SolveResult {
  enum class Kind { Unique, Space, Infeasible };
  Kind kind = Kind::Infeasible;
  /// Unique: the solution. Space: a particular solution (free variables 0).
  MeasureVector solution;
  /// Affine dimension of the solution set (Space only).
  std::size_t dimension = 0;
  /// Space: one solution per free variable, that variable set to 1 and the rest 0.
  std::vector<MeasureVector> representatives;
  /// Infeasible: one multiplier per equality, then one for the normalization row.
  /// The combination has zero coefficients and nonzero right-hand side.
  std::vector<Rational> multipliers;
};

std::string to_string(SolveResult::Kind k);

/// Exact Gaussian elimination on the system plus normalization.
SolveResult unique_measure_solve(const ConstraintSystem& system);

/// Whether the multipliers produce 0 = c with c != 0 on the system.
bool verifies_infeasibility(const ConstraintSystem& system, const std::vector<Rational>& multipliers);
/// Whether values satisfy every equality and normalization exactly.
bool satisfies(const ConstraintSystem& system, const std::vector<Rational>& values);

/// Window = first window_size elements of the group in shortlex order.
MeasureLayout twisted_layout(unsigned alphabet, std::size_t depth, std::size_t window_size, const GroupSpec& group);

/// Basis-set constraints O(sigma_1..sigma_k; t_1..t_k) x {gamma} over the layout:
/// every partial assignment of bisections (lengths 1..d) to coordinates t with
/// gamma^-1 t also in the window, for gamma in ball(twist_radius). Duplicate and
/// trivial equations are dropped.
ConstraintSystem twisted_constraint_system(const MeasureLayout& layout, std::size_t twist_radius);

struct TwistedSolve {
  SolveResult result;
  std::size_t constraints = 0;
  bool equals_product = false;
};

TwistedSolve twisted_unique_measure_solve(unsigned alphabet, std::size_t depth, std::size_t window_size,
                                          std::size_t twist_radius, const GroupSpec& group = GroupSpec::free(2));

/// mu_n(C_w) = a^-1 nu(O(U_1..U_m, C_w; t_1..t_m, t_n)), a = nu(O(U_1..U_m)).
/// Checks mu_n(C_u) = mu_n(C_v) for every |u| = |v| <= d and mu_n = uniform.
/// ConditioningOnNull when a = 0.
Certificate conditional_invariance_check(const MeasureVector& nu, const std::map<GroupElement, ClopenSet>& fixed,
                                         const GroupElement& t_n);

struct Obstruction {
  bool obstructed = false;
  Rational mass_u;
  Rational mass_v;
  Certificate certificate;
};

/// mass(U) > mass(V) means no bisection sigma with s(sigma) = U has r(sigma) inside V.
Obstruction pi_obstruction(const MeasureVector& mu, const ClopenSet& u, const ClopenSet& v);
Obstruction pi_obstruction(const MeasureVector& mu, const ProductCylinder& u, const ProductCylinder& v);
Obstruction pi_obstruction_from_masses(const std::string& measure, const std::string& u_label, const Rational& mass_u,
                                       const std::string& v_label, const Rational& mass_v);

struct CoveringBound {
  Rational bound;
  Rational actual;
};

/// 1/|cover| for a cover whose sources union to the full space and whose ranges
/// lie in target, with the target's uniform mass. InvalidCover otherwise.
CoveringBound minimal_covering_bound(const std::vector<PrefixBisection>& cover, const ClopenSet& target);
/// Twisted form: all-bisection basis sets whose source cylinders cover every cell
/// of their joint window and whose range cylinders lie inside target.
CoveringBound minimal_covering_bound(const std::vector<BasisSet>& cover, const ProductCylinder& target);

}  // namespace glab
