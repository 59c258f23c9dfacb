#pragma once

// Core vocabulary: variable cliques, multi-indices in canonical (graded
// lexicographic) order, correlatively sparse moment vectors, clique
// subvectors and coordinate projections.
//
// Variables and cliques are 0-based everywhere in this header. The 1-based
// convention used by the file formats, the CLI and the Python module is
// converted once, at those boundaries.

#include <compare>
#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace smk {

using Point = std::vector<double>;

/// Exponent vector alpha of a monomial x^alpha.
///
/// The ordering operator implements the canonical order used for every
/// label list, matrix and file in the project: ascending total degree, and
/// within a degree descending lexicographic order of the exponents, so that
/// over three variables the degree-one block reads x1, x2, x3 and the
/// degree-two block reads x1^2, x1x2, x1x3, x2^2, x2x3, x3^2.
class MultiIndex {
 public:
  MultiIndex() = default;
  explicit MultiIndex(std::vector<int> exponents);

  static MultiIndex zero(std::size_t num_vars) {
    return MultiIndex(std::vector<int>(num_vars, 0));
  }
  /// The exponent of the single variable `var`, i.e. x_var.
  static MultiIndex unit(std::size_t num_vars, std::size_t var);

  std::size_t size() const noexcept { return exponents_.size(); }
  int operator[](std::size_t k) const { return exponents_[k]; }
  int degree() const noexcept { return degree_; }
  const std::vector<int>& exponents() const noexcept { return exponents_; }
  std::vector<std::size_t> support() const;
  bool supported_on(std::span<const std::size_t> vars) const;

  friend MultiIndex operator+(const MultiIndex& a, const MultiIndex& b);
  friend bool operator==(const MultiIndex& a, const MultiIndex& b) {
    return a.exponents_ == b.exponents_;
  }
  friend std::strong_ordering operator<=>(const MultiIndex& a,
                                          const MultiIndex& b);

 private:
  std::vector<int> exponents_;
  int degree_ = 0;
};

std::string to_string(const MultiIndex& alpha);

/// Coefficient map of a polynomial, keyed by exponent.
using Polynomial = std::map<MultiIndex, double>;

/// x^alpha. `x` and `alpha` must have the same length.
double monomial_value(std::span<const double> x, const MultiIndex& alpha);
double evaluate(const Polynomial& p, std::span<const double> x);
int degree(const Polynomial& p);

/// All exponents in `num_vars` variables with total degree <= `max_degree`,
/// in canonical order.
std::vector<MultiIndex> dense_exponents(std::size_t num_vars, int max_degree);

class CliqueCover {
 public:
  CliqueCover() = default;
  /// Stores the cliques as given (0-based); see validate_cover().
  CliqueCover(std::size_t n, std::vector<std::vector<std::size_t>> cliques)
      : n_(n), cliques_(std::move(cliques)) {}

  /// Converts 1-based cliques and throws ErrorCode::InvalidCover unless the
  /// result passes validate_cover().
  static CliqueCover from_one_based(std::size_t n,
                                    const std::vector<std::vector<int>>& cliques);

  std::size_t n() const noexcept { return n_; }
  std::size_t size() const noexcept { return cliques_.size(); }
  const std::vector<std::size_t>& clique(std::size_t i) const {
    return cliques_.at(i);
  }
  const std::vector<std::vector<std::size_t>>& cliques() const noexcept {
    return cliques_;
  }
  std::vector<std::vector<int>> to_one_based() const;

  /// Clique `k` of the result is clique `order[k]` of this cover.
  CliqueCover reordered(std::span<const std::size_t> order) const;

  friend bool operator==(const CliqueCover&, const CliqueCover&) = default;

 private:
  std::size_t n_ = 0;
  std::vector<std::vector<std::size_t>> cliques_;
};

struct CoverReport {
  bool ok = true;
  std::string message;
};

/// Checks sortedness, range, full coverage of {0..n-1} and that no clique is
/// contained in another. Violations are reported in 1-based terms.
CoverReport validate_cover(const CliqueCover& cover);

/// Sorted intersection / union of index sets.
std::vector<std::size_t> intersect(std::span<const std::size_t> a,
                                   std::span<const std::size_t> b);
std::vector<std::size_t> unite(std::span<const std::size_t> a,
                               std::span<const std::size_t> b);
bool is_subset(std::span<const std::size_t> a, std::span<const std::size_t> b);

/// Union over the cliques of all exponents supported on the clique with
/// total degree <= degree_bound, deduplicated, canonical order.
std::vector<MultiIndex> sparse_exponents(const CliqueCover& cover,
                                         int degree_bound);

/// Finitely atomic measure sum_l w_l delta_{x_l} over the listed variables.
struct AtomicMeasure {
  std::vector<std::size_t> variables;
  std::vector<Point> atoms;
  std::vector<double> weights;

  std::size_t size() const noexcept { return atoms.size(); }
  double total_mass() const;
};

/// Lexicographic "a before b" on coordinates, descending, treating
/// coordinates within `tol` as equal.
bool atom_precedes(std::span<const double> a, std::span<const double> b,
                   double tol);
double max_abs_difference(std::span<const double> a, std::span<const double> b);
/// Sorts atoms (and their weights) into the canonical atom order.
void sort_atoms(AtomicMeasure& mu, double tol);

class SparseMomentVector {
 public:
  using Entries = std::map<MultiIndex, double>;

  /// Throws unless the key set is exactly sparse_exponents(cover, 2*omega).
  SparseMomentVector(CliqueCover cover, int omega, Entries entries);

  /// Builds from an unordered list of (alpha, value). Duplicate keys and
  /// keys outside the pattern are errors; missing keys are errors unless
  /// `allow_missing_as_zero` is set.
  static SparseMomentVector from_list(
      CliqueCover cover, int omega,
      const std::vector<std::pair<MultiIndex, double>>& list,
      bool allow_missing_as_zero = false);
  static SparseMomentVector zeros(CliqueCover cover, int omega);
  /// Moments sum_l w_l [x_l]_{2 omega} of a measure on all n variables.
  static SparseMomentVector from_measure(CliqueCover cover, int omega,
                                         const AtomicMeasure& mu);

  const CliqueCover& cover() const noexcept { return cover_; }
  int omega() const noexcept { return omega_; }
  const Entries& entries() const noexcept { return entries_; }
  std::size_t size() const noexcept { return entries_.size(); }

  bool contains(const MultiIndex& alpha) const {
    return entries_.contains(alpha);
  }
  /// Throws IndexOutOfPattern for keys outside the sparse index set.
  double at(const MultiIndex& alpha) const;
  double mass() const;
  double max_abs() const;
  bool is_zero() const;
  /// Entries rounded half away from zero to `decimals` places.
  SparseMomentVector rounded(int decimals) const;

 private:
  CliqueCover cover_;
  int omega_ = 0;
  Entries entries_;
};

/// Linear functional L_y applied to a polynomial: sum_alpha c_alpha y_alpha.
/// Throws IndexOutOfPattern if a monomial with nonzero coefficient is not in
/// the sparse index set of y.
double riesz_eval(const SparseMomentVector& y, const Polynomial& poly);

/// Dense moment data of y restricted to a variable subset, in local
/// coordinates (local variable k is global variable `variables[k]`).
struct CliqueSubvector {
  std::vector<std::size_t> variables;
  int omega = 0;
  std::map<MultiIndex, double> values;

  /// Throws IndexOutOfPattern for local exponents above degree 2*omega.
  double at(const MultiIndex& local) const;
  bool is_zero(double tol = 0.0) const;
  double max_abs() const;
};

/// y restricted to exponents supported on `variables`. The set must be
/// contained in some clique of the cover (otherwise some entries are not in
/// the pattern and IndexOutOfPattern is thrown).
CliqueSubvector subvector_on(const SparseMomentVector& y,
                             std::span<const std::size_t> variables);
CliqueSubvector clique_subvector(const SparseMomentVector& y, std::size_t i);
/// Global-exponent view of a subvector, i.e. the inverse of subvector_on.
std::map<MultiIndex, double> embed(const CliqueSubvector& sub, std::size_t n);
/// Lift of a local exponent into n variables.
MultiIndex embed(const MultiIndex& local, std::span<const std::size_t> variables,
                 std::size_t n);

/// Coordinate selection pi_{source -> target} for target a subset of source.
class Projection {
 public:
  Projection(std::vector<std::size_t> source, std::vector<std::size_t> target);

  const std::vector<std::size_t>& source() const noexcept { return source_; }
  const std::vector<std::size_t>& target() const noexcept { return target_; }
  Point apply(std::span<const double> x) const;

 private:
  std::vector<std::size_t> source_;
  std::vector<std::size_t> target_;
  std::vector<std::size_t> positions_;
};

/// Shortest decimal text that parses back to exactly `v`.
std::string format_double(double v);
/// Inverse of format_double; throws ParseError on malformed text.
double parse_double(std::string_view text);

inline Point project_point(const Projection& p, std::span<const double> x) {
  return p.apply(x);
}

}  // namespace smk
