#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "smk/core.hpp"
#include "smk/matrices.hpp"
#include "smk/rip.hpp"

namespace smk {

struct RankPolicy {
  double rel_tol = 1e-6;
  /// Round matrix entries to this many decimals before any decomposition.
  std::optional<int> round_decimals;

  /// Throws InvalidInput on rel_tol <= 0 or negative decimals.
  void validate() const;
};

/// Singular values (descending) and the rank cut taken under a policy.
struct RankDetail {
  int rank = 0;
  std::vector<double> singular_values;

  /// sigma_rank / sigma_{rank+1}; +inf when nothing lies below the cut and
  /// 0 for the zero matrix. Small gaps flag borderline decisions.
  double gap() const;
};

Eigen::MatrixXd apply_rounding(const Eigen::MatrixXd& m, const RankPolicy& policy);

RankDetail rank_detail(const LabeledSymMatrix& m, const RankPolicy& policy);
/// Number of singular values above rel_tol * sigma_max.
int numerical_rank(const LabeledSymMatrix& m, const RankPolicy& policy);

struct EigenExtremes {
  double min = 0.0;
  double max = 0.0;
};
EigenExtremes eigen_extremes(const Eigen::MatrixXd& m);

/// lambda_min >= -rel_tol * max(1, lambda_max); true for 0x0 matrices.
bool psd_check(const LabeledSymMatrix& m, const RankPolicy& policy);
bool psd_check(const Eigen::MatrixXd& m, const RankPolicy& policy);

struct CliqueFlatness {
  std::size_t clique = 0;  ///< original clique index
  int d_half = 1;
  bool psd_moment = false;
  bool psd_localizing = true;
  EigenExtremes moment_eigen;
  std::optional<EigenExtremes> localizing_eigen;
  RankDetail full;     ///< order omega
  RankDetail shifted;  ///< order omega - d_half
  bool flat = false;
};

struct OverlapFlatness {
  std::size_t position = 0;                ///< position i >= 1 in the order
  std::optional<std::size_t> witness;      ///< chosen position j, if any passed
  std::vector<std::size_t> tried;          ///< positions examined, ascending
  RankDetail full;                         ///< order omega (of chosen or last tried j)
  RankDetail shifted;                      ///< order omega - 1
  bool flat = false;
};

struct FlatnessCertificate {
  std::vector<std::size_t> order;
  std::vector<CliqueFlatness> cliques;    ///< one per position of `order`
  std::vector<OverlapFlatness> overlaps;  ///< one per position >= 1
  bool verdict = false;
  int rank_lower_bound = 0;               ///< max clique rank at order omega

  /// Witness position per order position (nullopt at position 0 or when the
  /// search failed).
  std::vector<std::optional<std::size_t>> chosen_witnesses() const;
};

/// Checks the flat-extension hypotheses for y under the given clique order.
/// `constraints[i]` lists the constraints of original clique i (may be
/// empty or shorter than the cover). Throws ZeroVector for y == 0.
FlatnessCertificate certify(
    const SparseMomentVector& y,
    const std::vector<std::vector<ConstraintPolynomial>>& constraints,
    const RipWitnesses& witnesses, const RankPolicy& policy);

enum class ZeroPattern { AllZero, AllNonzero, Inconsistent };

/// Under the flat rank conditions either every clique subvector vanishes or
/// none does; a mixture points to a misconfigured tolerance.
ZeroPattern zero_propagation_check(const SparseMomentVector& y,
                                   const RankPolicy& policy);

}  // namespace smk
