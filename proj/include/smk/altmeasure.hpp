#pragma once

// Alternative representing measures on a fixed atom set: the weights gamma
// of sum_i gamma_i delta_{x_i} that reproduce y form a polytope, and a
// linear cost picks one of its vertices.

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "smk/core.hpp"

namespace smk {

/// Equality system sum_i gamma_i x_i^alpha = y_alpha, one row per exponent
/// of y (the constant exponent included, which pins the total mass).
struct WeightLP {
  std::vector<Point> atoms;
  std::vector<MultiIndex> rows;
  Eigen::MatrixXd matrix;  ///< rows x atoms
  Eigen::VectorXd rhs;
};

WeightLP build_weight_lp(const std::vector<Point>& atoms, const SparseMomentVector& y);

/// Indices of a maximal set of linearly independent rows of the augmented
/// system [matrix | rhs], chosen by column-pivoted QR with relative
/// threshold `tol`.
std::vector<Eigen::Index> independent_rows(const WeightLP& lp, double tol = 1e-9);

/// A vertex minimizing cost . gamma over the weight polytope, by two-phase
/// primal simplex with Bland's rule. Throws Infeasible when no nonnegative
/// weights reproduce y within 1e-8 * (1 + max|y|).
Eigen::VectorXd solve_weight_lp(const std::vector<Point>& atoms,
                                const SparseMomentVector& y,
                                const Eigen::VectorXd& cost, double tol = 1e-9);

/// Vertices reached by `budget` seeded Gaussian costs, duplicates within
/// `dedupe_tol` removed, in order of discovery.
std::vector<Eigen::VectorXd> enumerate_extreme_measures(const std::vector<Point>& atoms,
                                                        const SparseMomentVector& y,
                                                        int budget, std::uint64_t seed,
                                                        double dedupe_tol = 1e-8);

}  // namespace smk
