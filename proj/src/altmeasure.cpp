#include "smk/altmeasure.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "smk/error.hpp"

namespace smk {

namespace {

constexpr double kPivotTol = 1e-11;

struct SimplexResult {
  std::vector<Eigen::Index> basis;
  Eigen::VectorXd x;
};

// Revised primal simplex on min c.x, a x = b, x >= 0 from a feasible basis.
// Columns flagged in `blocked` never enter. Bland's rule for both choices.
void run_simplex(const Eigen::MatrixXd& a, const Eigen::VectorXd& b,
                 const Eigen::VectorXd& c, const std::vector<bool>& blocked,
                 std::vector<Eigen::Index>& basis, double tol) {
  const Eigen::Index m = a.rows();
  const Eigen::Index n = a.cols();
  const int max_iterations = 50 * static_cast<int>(m + n) + 100;
  for (int it = 0; it < max_iterations; ++it) {
    Eigen::MatrixXd bmat(m, m);
    Eigen::VectorXd cb(m);
    for (Eigen::Index i = 0; i < m; ++i) {
      bmat.col(i) = a.col(basis[i]);
      cb(i) = c(basis[i]);
    }
    const Eigen::PartialPivLU<Eigen::MatrixXd> lu(bmat);
    const Eigen::VectorXd xb = lu.solve(b);
    const Eigen::VectorXd duals = bmat.transpose().partialPivLu().solve(cb);

    std::vector<bool> in_basis(n, false);
    for (auto j : basis) in_basis[j] = true;
    Eigen::Index enter = -1;
    for (Eigen::Index j = 0; j < n; ++j) {
      if (in_basis[j] || blocked[j]) continue;
      if (c(j) - duals.dot(a.col(j)) < -tol) {
        enter = j;
        break;
      }
    }
    if (enter < 0) return;

    const Eigen::VectorXd dir = lu.solve(a.col(enter));
    Eigen::Index leave = -1;
    double best = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < m; ++i) {
      if (dir(i) <= kPivotTol) continue;
      const double ratio = std::max(0.0, xb(i)) / dir(i);
      if (ratio < best - 1e-14 ||
          (ratio <= best + 1e-14 && leave >= 0 && basis[i] < basis[leave])) {
        best = std::min(best, ratio);
        leave = i;
      }
    }
    if (leave < 0) {
      throw Error(ErrorCode::InvalidInput, "weight program is unbounded");
    }
    basis[leave] = enter;
  }
  throw Error(ErrorCode::Infeasible, "simplex iteration limit reached");
}

Eigen::VectorXd basic_solution(const Eigen::MatrixXd& a, const Eigen::VectorXd& b,
                               const std::vector<Eigen::Index>& basis) {
  const Eigen::Index m = a.rows();
  Eigen::MatrixXd bmat(m, m);
  for (Eigen::Index i = 0; i < m; ++i) bmat.col(i) = a.col(basis[i]);
  const Eigen::VectorXd xb = bmat.partialPivLu().solve(b);
  Eigen::VectorXd x = Eigen::VectorXd::Zero(a.cols());
  for (Eigen::Index i = 0; i < m; ++i) x(basis[i]) = xb(i);
  return x;
}

}  // namespace

WeightLP build_weight_lp(const std::vector<Point>& atoms, const SparseMomentVector& y) {
  WeightLP lp;
  lp.atoms = atoms;
  const auto r = static_cast<Eigen::Index>(atoms.size());
  const auto k = static_cast<Eigen::Index>(y.size());
  lp.matrix.resize(k, r);
  lp.rhs.resize(k);
  Eigen::Index row = 0;
  for (const auto& [alpha, value] : y.entries()) {
    lp.rows.push_back(alpha);
    for (Eigen::Index i = 0; i < r; ++i) {
      if (atoms[i].size() != y.cover().n()) {
        throw Error(ErrorCode::DimensionMismatch, "atom dimension differs from n");
      }
      lp.matrix(row, i) = monomial_value(atoms[i], alpha);
    }
    lp.rhs(row) = value;
    ++row;
  }
  return lp;
}

std::vector<Eigen::Index> independent_rows(const WeightLP& lp, double tol) {
  Eigen::MatrixXd aug(lp.matrix.rows(), lp.matrix.cols() + 1);
  aug << lp.matrix, lp.rhs;
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(aug.transpose());
  qr.setThreshold(tol);
  std::vector<Eigen::Index> rows;
  for (Eigen::Index k = 0; k < qr.rank(); ++k) rows.push_back(qr.colsPermutation().indices()(k));
  std::sort(rows.begin(), rows.end());
  return rows;
}

Eigen::VectorXd solve_weight_lp(const std::vector<Point>& atoms,
                                const SparseMomentVector& y,
                                const Eigen::VectorXd& cost, double tol) {
  const auto r = static_cast<Eigen::Index>(atoms.size());
  if (cost.size() != r) {
    throw Error(ErrorCode::DimensionMismatch, "cost length differs from atom count");
  }
  const double scale = 1.0 + y.max_abs();
  if (r == 0) {
    if (y.max_abs() > 1e-8 * scale) throw Error(ErrorCode::Infeasible, "no atoms for nonzero y");
    return Eigen::VectorXd();
  }
  const WeightLP lp = build_weight_lp(atoms, y);
  const auto keep = independent_rows(lp, tol);
  const auto m = static_cast<Eigen::Index>(keep.size());

  // Phase I on [A | I] with artificials, rows signed so that b >= 0.
  Eigen::MatrixXd a(m, r + m);
  Eigen::VectorXd b(m);
  a.setZero();
  for (Eigen::Index i = 0; i < m; ++i) {
    const double sign = lp.rhs(keep[i]) < 0 ? -1.0 : 1.0;
    a.row(i).head(r) = sign * lp.matrix.row(keep[i]);
    a(i, r + i) = 1.0;
    b(i) = sign * lp.rhs(keep[i]);
  }
  std::vector<Eigen::Index> basis(m);
  for (Eigen::Index i = 0; i < m; ++i) basis[i] = r + i;
  Eigen::VectorXd phase1 = Eigen::VectorXd::Zero(r + m);
  phase1.tail(m).setOnes();
  std::vector<bool> none(r + m, false);
  run_simplex(a, b, phase1, none, basis, tol);
  Eigen::VectorXd x = basic_solution(a, b, basis);
  if (x.tail(m).sum() > 1e-8 * scale) {
    throw Error(ErrorCode::Infeasible, "no nonnegative weights reproduce y");
  }

  // Swap artificials still basic (at level zero) for structural columns.
  for (Eigen::Index i = 0; i < m; ++i) {
    if (basis[i] < r) continue;
    Eigen::MatrixXd bmat(m, m);
    for (Eigen::Index k = 0; k < m; ++k) bmat.col(k) = a.col(basis[k]);
    const Eigen::PartialPivLU<Eigen::MatrixXd> lu(bmat);
    for (Eigen::Index j = 0; j < r; ++j) {
      if (std::find(basis.begin(), basis.end(), j) != basis.end()) continue;
      if (std::abs(lu.solve(a.col(j))(i)) > 1e-9) {
        basis[i] = j;
        break;
      }
    }
  }

  std::vector<bool> artificial(r + m, false);
  for (Eigen::Index j = r; j < r + m; ++j) artificial[j] = true;
  Eigen::VectorXd phase2 = Eigen::VectorXd::Zero(r + m);
  phase2.head(r) = cost;
  run_simplex(a, b, phase2, artificial, basis, tol);
  x = basic_solution(a, b, basis);

  Eigen::VectorXd gamma = x.head(r);
  for (Eigen::Index i = 0; i < r; ++i) {
    if (gamma(i) < 0.0 && gamma(i) > -1e-10) gamma(i) = 0.0;
  }
  const double residual = (lp.matrix * gamma - lp.rhs).cwiseAbs().maxCoeff();
  if (residual > 1e-8 * scale || gamma.minCoeff() < -1e-10) {
    throw Error(ErrorCode::Infeasible, "weight vertex misses y by " + std::to_string(residual));
  }
  return gamma;
}

std::vector<Eigen::VectorXd> enumerate_extreme_measures(const std::vector<Point>& atoms,
                                                        const SparseMomentVector& y,
                                                        int budget, std::uint64_t seed,
                                                        double dedupe_tol) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  std::vector<Eigen::VectorXd> found;
  const auto r = static_cast<Eigen::Index>(atoms.size());
  for (int t = 0; t < budget; ++t) {
    Eigen::VectorXd cost(r);
    for (Eigen::Index i = 0; i < r; ++i) cost(i) = gauss(rng);
    const Eigen::VectorXd gamma = solve_weight_lp(atoms, y, cost);
    const bool seen = std::any_of(found.begin(), found.end(), [&](const Eigen::VectorXd& g) {
      return (g - gamma).cwiseAbs().maxCoeff() <= dedupe_tol;
    });
    if (!seen) found.push_back(gamma);
  }
  return found;
}

}  // namespace smk
