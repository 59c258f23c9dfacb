#include "smk/certify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Eigenvalues>

#include "smk/error.hpp"

namespace smk {

void RankPolicy::validate() const {
  if (!(rel_tol > 0.0)) throw Error(ErrorCode::InvalidInput, "rel_tol must be > 0");
  if (round_decimals && *round_decimals < 0) {
    throw Error(ErrorCode::InvalidInput, "round_decimals must be >= 0");
  }
}

double RankDetail::gap() const {
  if (rank == 0) return 0.0;
  if (static_cast<std::size_t>(rank) >= singular_values.size()) {
    return std::numeric_limits<double>::infinity();
  }
  const double below = singular_values[rank];
  if (below == 0.0) return std::numeric_limits<double>::infinity();
  return singular_values[rank - 1] / below;
}

Eigen::MatrixXd apply_rounding(const Eigen::MatrixXd& m, const RankPolicy& policy) {
  if (!policy.round_decimals) return m;
  const double scale = std::pow(10.0, *policy.round_decimals);
  return m.unaryExpr([scale](double v) {
    const double q = std::round(v * scale) / scale;
    return q == 0.0 ? 0.0 : q;
  });
}

RankDetail rank_detail(const LabeledSymMatrix& m, const RankPolicy& policy) {
  RankDetail out;
  if (m.dim() == 0) return out;
  const Eigen::MatrixXd data = apply_rounding(m.data, policy);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(data, Eigen::EigenvaluesOnly);
  // Singular values of a symmetric matrix are its absolute eigenvalues.
  for (Eigen::Index k = 0; k < data.rows(); ++k) {
    out.singular_values.push_back(std::abs(solver.eigenvalues()(k)));
  }
  std::sort(out.singular_values.begin(), out.singular_values.end(), std::greater<>());
  const double top = out.singular_values.front();
  if (top == 0.0) return out;
  for (double s : out.singular_values) {
    if (s > policy.rel_tol * top) ++out.rank;
  }
  return out;
}

int numerical_rank(const LabeledSymMatrix& m, const RankPolicy& policy) {
  return rank_detail(m, policy).rank;
}

EigenExtremes eigen_extremes(const Eigen::MatrixXd& m) {
  if (m.rows() == 0) return {};
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m, Eigen::EigenvaluesOnly);
  return {solver.eigenvalues().minCoeff(), solver.eigenvalues().maxCoeff()};
}

bool psd_check(const Eigen::MatrixXd& m, const RankPolicy& policy) {
  if (m.rows() == 0) return true;
  const auto ext = eigen_extremes(apply_rounding(m, policy));
  return ext.min >= -policy.rel_tol * std::max(1.0, ext.max);
}

bool psd_check(const LabeledSymMatrix& m, const RankPolicy& policy) {
  return psd_check(m.data, policy);
}

std::vector<std::optional<std::size_t>> FlatnessCertificate::chosen_witnesses() const {
  std::vector<std::optional<std::size_t>> out(order.size());
  for (const auto& o : overlaps) out.at(o.position) = o.witness;
  return out;
}

FlatnessCertificate certify(
    const SparseMomentVector& y,
    const std::vector<std::vector<ConstraintPolynomial>>& constraints,
    const RipWitnesses& witnesses, const RankPolicy& policy) {
  policy.validate();
  if (y.is_zero()) {
    throw Error(ErrorCode::ZeroVector, "the moment vector is identically zero");
  }
  const auto& cover = y.cover();
  if (witnesses.order.size() != cover.size()) {
    throw Error(ErrorCode::InvalidInput, "witness order does not match the cover");
  }
  const int omega = y.omega();
  static const std::vector<ConstraintPolynomial> kNone;

  FlatnessCertificate cert;
  cert.order = witnesses.order;
  bool verdict = true;
  for (std::size_t k = 0; k < cert.order.size(); ++k) {
    const std::size_t i = cert.order[k];
    const auto& g = i < constraints.size() ? constraints[i] : kNone;
    const auto sub = clique_subvector(y, i);

    CliqueFlatness c;
    c.clique = i;
    c.d_half = d_half(g);
    if (c.d_half > omega) {
      throw Error(ErrorCode::OrderTooHigh,
                  "constraint degree of clique " + std::to_string(i + 1) +
                      " exceeds 2*omega");
    }
    const auto moment = moment_matrix(sub, omega);
    const Eigen::MatrixXd rounded = apply_rounding(moment.data, policy);
    c.moment_eigen = eigen_extremes(rounded);
    c.psd_moment = psd_check(moment, policy);
    if (!g.empty()) {
      const Eigen::MatrixXd loc = apply_rounding(localizing_block(sub, g, omega).assembled(), policy);
      c.localizing_eigen = eigen_extremes(loc);
      c.psd_localizing = psd_check(loc, policy);
    }
    c.full = rank_detail(moment, policy);
    c.shifted = rank_detail(leading_submatrix(moment, omega - c.d_half), policy);
    c.flat = c.full.rank == c.shifted.rank;
    verdict = verdict && c.psd_moment && c.psd_localizing && c.flat;
    cert.rank_lower_bound = std::max(cert.rank_lower_bound, c.full.rank);
    cert.cliques.push_back(std::move(c));

    if (k == 0) continue;
    OverlapFlatness o;
    o.position = k;
    for (std::size_t j : witnesses.witness.at(k)) {
      o.tried.push_back(j);
      const auto overlap = overlap_moment_matrix(y, i, cert.order[j], omega);
      o.full = rank_detail(overlap, policy);
      o.shifted = rank_detail(leading_submatrix(overlap, omega - 1), policy);
      if (o.full.rank == o.shifted.rank) {
        o.witness = j;
        o.flat = true;
        break;
      }
    }
    verdict = verdict && o.flat;
    cert.overlaps.push_back(std::move(o));
  }
  cert.verdict = verdict;
  return cert;
}

ZeroPattern zero_propagation_check(const SparseMomentVector& y,
                                   const RankPolicy& policy) {
  const double tol = policy.rel_tol * std::max(1.0, y.max_abs());
  std::size_t zeros = 0;
  for (std::size_t i = 0; i < y.cover().size(); ++i) {
    if (clique_subvector(y, i).is_zero(tol)) ++zeros;
  }
  if (zeros == y.cover().size()) return ZeroPattern::AllZero;
  if (zeros == 0) return ZeroPattern::AllNonzero;
  return ZeroPattern::Inconsistent;
}

}  // namespace smk
