#include "smk/matrices.hpp"

#include <algorithm>
#include <sstream>

#include "smk/error.hpp"

namespace smk {

int ConstraintPolynomial::d_half() const {
  return std::max(1, (degree() + 1) / 2);
}

int d_half(const std::vector<ConstraintPolynomial>& constraints) {
  int deg = 0;
  for (const auto& g : constraints) deg = std::max(deg, g.degree());
  return std::max(1, (deg + 1) / 2);
}

LabeledSymMatrix moment_matrix(const CliqueSubvector& y_sub, int d) {
  if (d < 0) throw Error(ErrorCode::OrderTooLow, "negative order");
  if (d > y_sub.omega) {
    throw Error(ErrorCode::OrderTooHigh,
                "moment matrix order " + std::to_string(d) + " exceeds omega " +
                    std::to_string(y_sub.omega));
  }
  LabeledSymMatrix m;
  m.labels = dense_exponents(y_sub.variables.size(), d);
  const auto size = static_cast<Eigen::Index>(m.labels.size());
  m.data.resize(size, size);
  for (Eigen::Index a = 0; a < size; ++a) {
    for (Eigen::Index b = a; b < size; ++b) {
      const double v = y_sub.at(m.labels[a] + m.labels[b]);
      m.data(a, b) = v;
      m.data(b, a) = v;
    }
  }
  return m;
}

LabeledSymMatrix localizing_matrix(const CliqueSubvector& y_sub,
                                   const ConstraintPolynomial& g, int d) {
  return localizing_matrix(y_sub, g, d, g.d_half());
}

LabeledSymMatrix localizing_matrix(const CliqueSubvector& y_sub,
                                   const ConstraintPolynomial& g, int d,
                                   int shift) {
  if (d < shift) {
    throw Error(ErrorCode::OrderTooLow,
                "localizing order " + std::to_string(d) + " below d_i = " +
                    std::to_string(shift));
  }
  const int label_degree = d - shift;
  if (2 * label_degree + g.degree() > 2 * y_sub.omega) {
    throw Error(ErrorCode::OrderTooHigh,
                "localizing matrix needs moments of degree " +
                    std::to_string(2 * label_degree + g.degree()) + " > " +
                    std::to_string(2 * y_sub.omega));
  }
  LabeledSymMatrix m;
  m.labels = dense_exponents(y_sub.variables.size(), label_degree);
  const auto size = static_cast<Eigen::Index>(m.labels.size());
  m.data = Eigen::MatrixXd::Zero(size, size);
  for (Eigen::Index a = 0; a < size; ++a) {
    for (Eigen::Index b = a; b < size; ++b) {
      const auto ab = m.labels[a] + m.labels[b];
      double v = 0.0;
      for (const auto& [gamma, c] : g.coefficients) {
        if (c != 0.0) v += c * y_sub.at(ab + gamma);
      }
      m.data(a, b) = v;
      m.data(b, a) = v;
    }
  }
  return m;
}

Eigen::Index LocalizingBlock::dim() const {
  Eigen::Index n = 0;
  for (const auto& b : blocks) n += b.dim();
  return n;
}

Eigen::MatrixXd LocalizingBlock::assembled() const {
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(dim(), dim());
  Eigen::Index offset = 0;
  for (const auto& b : blocks) {
    out.block(offset, offset, b.dim(), b.dim()) = b.data;
    offset += b.dim();
  }
  return out;
}

LocalizingBlock localizing_block(const CliqueSubvector& y_sub,
                                 const std::vector<ConstraintPolynomial>& g,
                                 int d) {
  LocalizingBlock out;
  const int shift = d_half(g);
  for (const auto& gj : g) {
    out.blocks.push_back(localizing_matrix(y_sub, gj, d, shift));
  }
  return out;
}

LabeledSymMatrix overlap_moment_matrix(const SparseMomentVector& y,
                                       std::size_t i, std::size_t j, int d) {
  const auto& cover = y.cover();
  const auto shared = intersect(cover.clique(i), cover.clique(j));
  if (shared.empty()) {
    LabeledSymMatrix m;
    m.labels = {MultiIndex()};
    m.data = Eigen::MatrixXd::Constant(1, 1, y.mass());
    return m;
  }
  return moment_matrix(subvector_on(y, shared), d);
}

LabeledSymMatrix leading_submatrix(const LabeledSymMatrix& m, int d) {
  // Canonical order is graded, so labels of degree <= d form a prefix.
  const auto count = static_cast<Eigen::Index>(
      std::count_if(m.labels.begin(), m.labels.end(),
                    [d](const MultiIndex& a) { return a.degree() <= d; }));
  LabeledSymMatrix out;
  out.labels.assign(m.labels.begin(), m.labels.begin() + count);
  out.data = m.data.topLeftCorner(count, count);
  return out;
}

std::string to_csv(const LabeledSymMatrix& m) {
  std::ostringstream os;
  os.precision(17);
  os << "label";
  for (const auto& l : m.labels) os << ',' << to_string(l);
  os << '\n';
  for (Eigen::Index a = 0; a < m.dim(); ++a) {
    os << to_string(m.labels[a]);
    for (Eigen::Index b = 0; b < m.dim(); ++b) os << ',' << m.data(a, b);
    os << '\n';
  }
  return os.str();
}

}  // namespace smk
