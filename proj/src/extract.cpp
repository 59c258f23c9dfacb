#include "smk/extract.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <random>

#include <Eigen/Eigenvalues>

#include "smk/error.hpp"

namespace smk {

namespace {

// Picks r rows of v that span its row space, restricted to labels of degree
// below `max_degree`. Each step takes the lowest-degree row whose residual is
// within a factor of ten of the largest available residual.
std::vector<Eigen::Index> select_basis(const Eigen::MatrixXd& v,
                                       const std::vector<MultiIndex>& labels,
                                       int r, int max_degree, double tol) {
  const double scale = v.rowwise().norm().maxCoeff();
  Eigen::MatrixXd residual = v;
  std::vector<Eigen::Index> basis;
  std::vector<bool> used(labels.size(), false);
  for (int step = 0; step < r; ++step) {
    double best = 0.0;
    for (Eigen::Index a = 0; a < v.rows(); ++a) {
      if (!used[a] && labels[a].degree() < max_degree) {
        best = std::max(best, residual.row(a).norm());
      }
    }
    if (best <= tol * scale) {
      throw Error(ErrorCode::FlatnessViolated,
                  "only " + std::to_string(step) + " of " + std::to_string(r) +
                      " basis monomials found below degree " +
                      std::to_string(max_degree));
    }
    Eigen::Index pick = -1;
    for (Eigen::Index a = 0; a < v.rows(); ++a) {
      if (!used[a] && labels[a].degree() < max_degree &&
          residual.row(a).norm() >= 0.1 * best) {
        pick = a;
        break;
      }
    }
    used[pick] = true;
    basis.push_back(pick);
    const Eigen::RowVectorXd q = residual.row(pick) / residual.row(pick).norm();
    residual -= (residual * q.transpose()) * q;
  }
  return basis;
}

Eigen::VectorXd monomial_vector(const std::vector<MultiIndex>& labels,
                                const Point& z) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(labels.size()));
  for (std::size_t a = 0; a < labels.size(); ++a) {
    out(static_cast<Eigen::Index>(a)) = monomial_value(z, labels[a]);
  }
  return out;
}

}  // namespace

Eigen::VectorXd nnls(const Eigen::MatrixXd& a, const Eigen::VectorXd& b,
                     int max_iterations) {
  const Eigen::Index n = a.cols();
  if (max_iterations <= 0) max_iterations = 3 * static_cast<int>(n) + 10;
  Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
  std::vector<bool> passive(n, false);
  const double tol = 10.0 * std::numeric_limits<double>::epsilon() *
                     a.cwiseAbs().maxCoeff() * static_cast<double>(std::max(a.rows(), n));

  auto solve_passive = [&]() {
    std::vector<Eigen::Index> idx;
    for (Eigen::Index j = 0; j < n; ++j) {
      if (passive[j]) idx.push_back(j);
    }
    Eigen::MatrixXd sub(a.rows(), static_cast<Eigen::Index>(idx.size()));
    for (std::size_t k = 0; k < idx.size(); ++k) {
      sub.col(static_cast<Eigen::Index>(k)) = a.col(idx[k]);
    }
    const Eigen::VectorXd s_sub = sub.completeOrthogonalDecomposition().solve(b);
    Eigen::VectorXd s = Eigen::VectorXd::Zero(n);
    for (std::size_t k = 0; k < idx.size(); ++k) {
      s(idx[k]) = s_sub(static_cast<Eigen::Index>(k));
    }
    return s;
  };

  for (int outer = 0; outer < max_iterations; ++outer) {
    const Eigen::VectorXd w = a.transpose() * (b - a * x);
    Eigen::Index enter = -1;
    double best = tol;
    for (Eigen::Index j = 0; j < n; ++j) {
      if (!passive[j] && w(j) > best) {
        best = w(j);
        enter = j;
      }
    }
    if (enter < 0) break;
    passive[enter] = true;
    for (int inner = 0; inner < max_iterations; ++inner) {
      const Eigen::VectorXd s = solve_passive();
      bool feasible = true;
      double alpha = 1.0;
      for (Eigen::Index j = 0; j < n; ++j) {
        if (passive[j] && s(j) <= 0.0) {
          feasible = false;
          alpha = std::min(alpha, x(j) / (x(j) - s(j)));
        }
      }
      if (feasible) {
        x = s;
        break;
      }
      x += alpha * (s - x);
      for (Eigen::Index j = 0; j < n; ++j) {
        if (passive[j] && x(j) <= tol) {
          passive[j] = false;
          x(j) = 0.0;
        }
      }
    }
  }
  return x;
}

AtomicMeasure extract_atoms(const LabeledSymMatrix& m, int r,
                            const RankPolicy& policy, std::uint64_t seed,
                            std::vector<std::size_t> variables,
                            const ExtractOptions& options) {
  AtomicMeasure mu;
  mu.variables = std::move(variables);
  if (r <= 0 || m.dim() == 0) return mu;
  if (r > m.dim()) {
    throw Error(ErrorCode::InvalidInput, "target rank exceeds matrix dimension");
  }
  const std::size_t num_vars = m.labels.front().size();
  if (num_vars != mu.variables.size()) {
    throw Error(ErrorCode::DimensionMismatch,
                "matrix labels do not match the variable list");
  }
  int omega = 0;
  for (const auto& l : m.labels) omega = std::max(omega, l.degree());

  const Eigen::MatrixXd data = apply_rounding(m.data, policy);

  // Rank-r factor data ~ V V^T.
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(data);
  const Eigen::Index n = data.rows();
  const Eigen::VectorXd top = eig.eigenvalues().tail(r);
  // Fewer significant eigenvalues than r: the matrix is not a flat rank-r one.
  const double lambda_max = std::max(eig.eigenvalues().cwiseAbs().maxCoeff(), 0.0);
  if (top.minCoeff() <= policy.rel_tol * lambda_max) {
    throw Error(ErrorCode::FlatnessViolated,
                "requested rank " + std::to_string(r) + " exceeds the numerical rank");
  }
  const Eigen::MatrixXd v =
      eig.eigenvectors().rightCols(r) * top.cwiseSqrt().asDiagonal();

  const auto basis = select_basis(v, m.labels, r, omega, policy.rel_tol);

  // Rows of C express every label monomial in the basis monomials.
  Eigen::MatrixXd w(r, r);
  for (int p = 0; p < r; ++p) w.row(p) = v.row(basis[p]);
  const Eigen::MatrixXd c =
      w.transpose().partialPivLu().solve(v.transpose()).transpose();

  std::map<MultiIndex, Eigen::Index> row_of;
  for (Eigen::Index a = 0; a < n; ++a) row_of.emplace(m.labels[a], a);

  std::vector<Eigen::MatrixXd> mult(num_vars, Eigen::MatrixXd(r, r));
  for (std::size_t k = 0; k < num_vars; ++k) {
    const auto shift = MultiIndex::unit(num_vars, k);
    for (int p = 0; p < r; ++p) {
      mult[k].row(p) = c.row(row_of.at(m.labels[basis[p]] + shift));
    }
  }

  // Common eigenvectors from a random convex combination.
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.05, 1.0);
  Eigen::MatrixXd q;
  bool separated = false;
  for (int attempt = 0; attempt <= options.max_redraws && !separated; ++attempt) {
    std::vector<double> coef(num_vars);
    double total = 0.0;
    for (auto& ck : coef) total += (ck = unit(rng));
    Eigen::MatrixXd combo = Eigen::MatrixXd::Zero(r, r);
    for (std::size_t k = 0; k < num_vars; ++k) combo += (coef[k] / total) * mult[k];

    Eigen::EigenSolver<Eigen::MatrixXd> es(combo);
    if (es.info() != Eigen::Success) continue;
    const Eigen::VectorXcd lambda = es.eigenvalues();
    const double spread = std::max(1.0, lambda.cwiseAbs().maxCoeff());
    if (lambda.imag().cwiseAbs().maxCoeff() > options.separation_tol * spread) continue;
    separated = true;
    for (int a = 0; a < r && separated; ++a) {
      for (int b = a + 1; b < r; ++b) {
        if (std::abs(lambda(a).real() - lambda(b).real()) <=
            options.separation_tol * spread) {
          separated = false;
          break;
        }
      }
    }
    if (separated) q = es.eigenvectors().real();
  }
  if (!separated) {
    throw Error(ErrorCode::ReconstructionFailed,
                "no random combination of multiplication operators with real, "
                "separated eigenvalues");
  }

  Eigen::PartialPivLU<Eigen::MatrixXd> q_lu(q);
  std::vector<Point> atoms(r, Point(num_vars));
  for (std::size_t k = 0; k < num_vars; ++k) {
    const Eigen::MatrixXd diag = q_lu.solve(mult[k] * q);
    for (int l = 0; l < r; ++l) atoms[l][k] = diag(l, l);
  }

  // Weights from the degree <= omega moments (row of the constant label).
  Eigen::MatrixXd design(n, r);
  for (int l = 0; l < r; ++l) design.col(l) = monomial_vector(m.labels, atoms[l]);
  const Eigen::VectorXd rhs = data.row(0).transpose();
  const Eigen::VectorXd weights = nnls(design, rhs);

  for (int l = 0; l < r; ++l) {
    bool merged = false;
    for (std::size_t e = 0; e < mu.atoms.size(); ++e) {
      if (max_abs_difference(mu.atoms[e], atoms[l]) <= options.merge_tol) {
        mu.weights[e] += weights(l);
        merged = true;
        break;
      }
    }
    if (!merged) {
      mu.atoms.push_back(atoms[l]);
      mu.weights.push_back(weights(l));
    }
  }
  const double mass = std::abs(data(0, 0));
  for (double wl : mu.weights) {
    if (wl <= options.weight_tol * std::max(1.0, mass)) {
      throw Error(ErrorCode::NonPhysicalWeights,
                  "extracted weight " + std::to_string(wl) + " is not positive");
    }
  }

  Eigen::MatrixXd rebuilt = Eigen::MatrixXd::Zero(n, n);
  for (std::size_t l = 0; l < mu.size(); ++l) {
    const Eigen::VectorXd vl = monomial_vector(m.labels, mu.atoms[l]);
    rebuilt += mu.weights[l] * vl * vl.transpose();
  }
  const double err = (rebuilt - data).cwiseAbs().maxCoeff();
  if (err > options.reconstruction_tol * (1.0 + data.cwiseAbs().maxCoeff())) {
    throw Error(ErrorCode::ReconstructionFailed,
                "rebuilt moment matrix deviates by " + std::to_string(err));
  }
  sort_atoms(mu, options.merge_tol);
  return mu;
}

double verify_measure_against_subvector(const AtomicMeasure& mu,
                                        const CliqueSubvector& y_sub) {
  if (mu.variables != y_sub.variables) {
    throw Error(ErrorCode::InvalidInput,
                "measure variables do not match the subvector clique");
  }
  double worst = 0.0;
  for (const auto& [alpha, value] : y_sub.values) {
    double s = 0.0;
    for (std::size_t l = 0; l < mu.size(); ++l) {
      s += mu.weights[l] * monomial_value(mu.atoms[l], alpha);
    }
    worst = std::max(worst, std::abs(s - value));
  }
  return worst;
}

FeasibilityReport constraint_feasibility_check(
    const AtomicMeasure& mu, const std::vector<ConstraintPolynomial>& constraints,
    double tol) {
  FeasibilityReport report;
  for (std::size_t l = 0; l < mu.size(); ++l) {
    std::vector<double> row;
    for (std::size_t j = 0; j < constraints.size(); ++j) {
      const double g = constraints[j](mu.atoms[l]);
      row.push_back(g);
      if (g < -tol) report.violations.push_back({l, j, g});
    }
    report.values.push_back(std::move(row));
  }
  return report;
}

}  // namespace smk
