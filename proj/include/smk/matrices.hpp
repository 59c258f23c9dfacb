#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <string>
#include <vector>

#include "smk/core.hpp"

namespace smk {

/// Symmetric matrix whose rows and columns are labelled by local exponents.
struct LabeledSymMatrix {
  std::vector<MultiIndex> labels;
  Eigen::MatrixXd data;

  Eigen::Index dim() const noexcept { return data.rows(); }
};

/// A constraint g(x_clique) >= 0 with coefficients over the clique's local
/// variables.
struct ConstraintPolynomial {
  std::size_t clique = 0;
  Polynomial coefficients;

  int degree() const { return smk::degree(coefficients); }
  /// max(1, ceil(deg / 2))
  int d_half() const;
  double operator()(std::span<const double> z) const {
    return evaluate(coefficients, z);
  }
};

/// max(1, ceil(deg g / 2)) with deg g the largest degree in the list; 1 for
/// an empty list.
int d_half(const std::vector<ConstraintPolynomial>& constraints);

/// Entry (a, b) is y[a + b]; labels are all local exponents of degree <= d.
/// Throws OrderTooHigh if d > omega.
LabeledSymMatrix moment_matrix(const CliqueSubvector& y_sub, int d);

/// Entry (a, b) is sum_c g_c y[a + b + c]; labels have degree <= d - shift.
/// The single-argument form uses shift = g.d_half(). Throws OrderTooLow for
/// d < shift and OrderTooHigh when an entry would need a moment above 2*omega.
LabeledSymMatrix localizing_matrix(const CliqueSubvector& y_sub,
                                   const ConstraintPolynomial& g, int d);
LabeledSymMatrix localizing_matrix(const CliqueSubvector& y_sub,
                                   const ConstraintPolynomial& g, int d,
                                   int shift);

/// Block-diagonal localizing matrix of a clique's constraint vector. Every
/// block uses the clique-level shift d_half(constraints).
struct LocalizingBlock {
  std::vector<LabeledSymMatrix> blocks;

  Eigen::Index dim() const;
  Eigen::MatrixXd assembled() const;
};

LocalizingBlock localizing_block(const CliqueSubvector& y_sub,
                                 const std::vector<ConstraintPolynomial>& g,
                                 int d);

/// Moment matrix of order d over the variables shared by cliques i and j;
/// [y_0] when they share none.
LabeledSymMatrix overlap_moment_matrix(const SparseMomentVector& y,
                                       std::size_t i, std::size_t j, int d);

/// Rows of M whose labels have degree <= d (a leading principal submatrix
/// under canonical order).
LabeledSymMatrix leading_submatrix(const LabeledSymMatrix& m, int d);

/// CSV with a header row and a header column of exponent labels.
std::string to_csv(const LabeledSymMatrix& m);

}  // namespace smk
