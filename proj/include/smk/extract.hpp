#pragma once

#include <cstdint>
#include <vector>

#include "smk/certify.hpp"
#include "smk/core.hpp"
#include "smk/matrices.hpp"

namespace smk {

struct ExtractOptions {
  /// Atoms closer than this in the infinity norm are merged.
  double merge_tol = 1e-6;
  /// Eigenvalues of the random combination closer than this trigger a
  /// redraw of the combination coefficients.
  double separation_tol = 1e-8;
  int max_redraws = 10;
  /// Weights at or below weight_tol * max(1, mass) are rejected.
  double weight_tol = 1e-9;
  /// Max entry deviation of the rebuilt moment matrix, relative to
  /// 1 + max |M|.
  double reconstruction_tol = 1e-6;
};

/// Recovers the r-atomic measure represented by a flat moment matrix of order
/// omega (labels: all local exponents of degree <= omega).
///
/// M is factored as V V^T from its top r eigenpairs. A greedy pivoted
/// Gram-Schmidt pass over the rows of V, lowest degree first, picks r basis
/// monomials; they must all have degree < omega so that x_k * basis stays
/// inside the labels, otherwise FlatnessViolated. The multiplication
/// operators N_k express x_k * basis in the basis. A random convex
/// combination of them (drawn from `seed`) is diagonalized; its eigenvectors
/// are common to every N_k and the Rayleigh-type diagonal of
/// Q^{-1} N_k Q gives coordinate k of each atom. Weights come from
/// nonnegative least squares on the degree <= omega moments and the result
/// is checked against the full matrix.
///
/// Throws FlatnessViolated, NonPhysicalWeights or ReconstructionFailed.
AtomicMeasure extract_atoms(const LabeledSymMatrix& m, int r,
                            const RankPolicy& policy, std::uint64_t seed,
                            std::vector<std::size_t> variables,
                            const ExtractOptions& options = {});

/// max over the local exponents of |sum_l w_l z_l^alpha - y_alpha|.
double verify_measure_against_subvector(const AtomicMeasure& mu,
                                        const CliqueSubvector& y_sub);

struct AtomConstraintViolation {
  std::size_t atom = 0;
  std::size_t constraint = 0;
  double value = 0.0;
};

struct FeasibilityReport {
  /// values[l][j] = g_j(z_l)
  std::vector<std::vector<double>> values;
  std::vector<AtomConstraintViolation> violations;

  bool clean() const noexcept { return violations.empty(); }
};

/// Evaluates each constraint at each atom (atoms in the clique's local
/// coordinates) and flags values below -tol.
FeasibilityReport constraint_feasibility_check(
    const AtomicMeasure& mu, const std::vector<ConstraintPolynomial>& constraints,
    double tol);

/// Lawson-Hanson nonnegative least squares: argmin ||A x - b|| s.t. x >= 0.
Eigen::VectorXd nnls(const Eigen::MatrixXd& a, const Eigen::VectorXd& b,
                     int max_iterations = 0);

}  // namespace smk
