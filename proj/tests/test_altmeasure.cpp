#include <gtest/gtest.h>

#include <random>

#include "smk/altmeasure.hpp"
#include "smk/error.hpp"
#include "support.hpp"

namespace smk {
namespace {

const std::vector<Point>& two_clique_atoms() {
  static const std::vector<Point> atoms = {{1, 0, 1}, {1, 0, -1}, {-1, 0, 1}, {-1, 0, -1}};
  return atoms;
}

// Every basic feasible solution of A g = b, g >= 0, by trying each column
// subset of size rank(A) whose columns are independent.
std::vector<Eigen::VectorXd> brute_force_vertices(const WeightLP& lp) {
  const auto r = Eigen::Index(Eigen::FullPivLU<Eigen::MatrixXd>(lp.matrix).rank());
  const auto n = lp.matrix.cols();
  std::vector<Eigen::VectorXd> out;
  std::vector<bool> pick(static_cast<std::size_t>(n), false);
  std::fill(pick.end() - r, pick.end(), true);
  do {
    std::vector<Eigen::Index> cols;
    for (Eigen::Index k = 0; k < n; ++k) {
      if (pick[static_cast<std::size_t>(k)]) cols.push_back(k);
    }
    Eigen::MatrixXd sub(lp.matrix.rows(), r);
    for (Eigen::Index k = 0; k < r; ++k) sub.col(k) = lp.matrix.col(cols[k]);
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(sub);
    if (qr.rank() < r) continue;
    const Eigen::VectorXd part = qr.solve(lp.rhs);
    if ((sub * part - lp.rhs).cwiseAbs().maxCoeff() > 1e-9) continue;
    if (part.minCoeff() < -1e-12) continue;
    Eigen::VectorXd g = Eigen::VectorXd::Zero(n);
    for (Eigen::Index k = 0; k < r; ++k) g(cols[k]) = std::max(0.0, part(k));
    const bool dup = std::any_of(out.begin(), out.end(), [&](const Eigen::VectorXd& v) {
      return (v - g).cwiseAbs().maxCoeff() < 1e-9;
    });
    if (!dup) out.push_back(g);
  } while (std::next_permutation(pick.begin(), pick.end()));
  return out;
}

bool contains_vector(const std::vector<Eigen::VectorXd>& list, const Eigen::VectorXd& v) {
  return std::any_of(list.begin(), list.end(), [&](const Eigen::VectorXd& w) {
    return (w - v).cwiseAbs().maxCoeff() < 1e-8;
  });
}

TEST(WeightLp, HasOneRowPerMomentIncludingMass) {
  const auto y = testing::two_clique_moments();
  const auto lp = build_weight_lp(two_clique_atoms(), y);
  EXPECT_EQ(lp.matrix.rows(), 25);
  EXPECT_EQ(lp.matrix.cols(), 4);
  EXPECT_EQ(lp.rows.front(), MultiIndex({0, 0, 0}));
  EXPECT_TRUE(lp.matrix.row(0).isOnes());
  EXPECT_EQ(independent_rows(lp).size(), 3u);
}

TEST(WeightLp, ExtremeMeasuresOfTheTwoCliqueExample) {
  const auto y = testing::two_clique_moments();
  const auto g1 = solve_weight_lp(two_clique_atoms(), y, Eigen::Vector4d(1, 0, 0, 0));
  const auto g2 = solve_weight_lp(two_clique_atoms(), y, Eigen::Vector4d(0, 1, 0, 0));
  EXPECT_LT((g1 - Eigen::Vector4d(0, 0.5, 0.5, 0)).cwiseAbs().maxCoeff(), 1e-8);
  EXPECT_LT((g2 - Eigen::Vector4d(0.5, 0, 0, 0.5)).cwiseAbs().maxCoeff(), 1e-8);
}

TEST(WeightLp, CostComparisonDecidesTheVertex) {
  const auto y = testing::two_clique_moments();
  std::mt19937_64 rng(1);
  std::normal_distribution<double> g;
  for (int trial = 0; trial < 100; ++trial) {
    const Eigen::Vector4d c(g(rng), g(rng), g(rng), g(rng));
    const auto gamma = solve_weight_lp(two_clique_atoms(), y, c);
    const double s = c(0) + c(3) - c(1) - c(2);
    if (std::abs(s) < 1e-6) continue;
    const Eigen::Vector4d expected =
        s > 0 ? Eigen::Vector4d(0, 0.5, 0.5, 0) : Eigen::Vector4d(0.5, 0, 0, 0.5);
    EXPECT_LT((gamma - expected).cwiseAbs().maxCoeff(), 1e-8);
  }
}

TEST(WeightLp, EnumerationMatchesBruteForceVertices) {
  const auto y = testing::two_clique_moments();
  const auto found = enumerate_extreme_measures(two_clique_atoms(), y, 20, 42);
  const auto oracle = brute_force_vertices(build_weight_lp(two_clique_atoms(), y));
  ASSERT_EQ(oracle.size(), 2u);
  ASSERT_EQ(found.size(), 2u);
  for (const auto& v : oracle) EXPECT_TRUE(contains_vector(found, v));
}

TEST(WeightLp, SingleAtomHasItsMassAsTheOnlySolution) {
  const auto cover = CliqueCover::from_one_based(2, {{1, 2}});
  const AtomicMeasure mu{{0, 1}, {{0.3, -0.7}}, {2.5}};
  const auto y = SparseMomentVector::from_measure(cover, 2, mu);
  const auto gamma = solve_weight_lp(mu.atoms, y, Eigen::VectorXd::Constant(1, -3.0));
  EXPECT_NEAR(gamma(0), 2.5, 1e-10);
  EXPECT_EQ(enumerate_extreme_measures(mu.atoms, y, 5, 1).size(), 1u);
}

TEST(WeightLp, ZeroCostStillReturnsAVertex) {
  const auto y = testing::two_clique_moments();
  const auto gamma = solve_weight_lp(two_clique_atoms(), y, Eigen::Vector4d::Zero());
  const auto oracle = brute_force_vertices(build_weight_lp(two_clique_atoms(), y));
  EXPECT_TRUE(contains_vector(oracle, gamma));
}

TEST(WeightLp, InconsistentAtomsAreInfeasible) {
  const auto y = testing::two_clique_moments();
  const std::vector<Point> wrong = {{2, 0, 1}, {-2, 0, -1}};
  try {
    solve_weight_lp(wrong, y, Eigen::Vector2d(1, 0));
    ADD_FAILURE();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::Infeasible);
  }
}

TEST(WeightLp, ChainSolutionsAreBasicAndFeasible) {
  const auto y = testing::chain_moments_from_printed();
  const auto atoms = testing::chain_minimizers();
  const auto lp = build_weight_lp(atoms, y);
  const auto rank = static_cast<long>(independent_rows(lp).size());
  const auto found = enumerate_extreme_measures(atoms, y, 50, 42);
  ASSERT_FALSE(found.empty());
  const double scale = 1e-8 * (1 + y.max_abs());
  for (const auto& g : found) {
    EXPECT_NEAR(g.sum(), 1.0, 1e-10);
    EXPECT_GE(g.minCoeff(), -1e-10);
    EXPECT_LE((lp.matrix * g - lp.rhs).cwiseAbs().maxCoeff(), scale);
    EXPECT_LE((g.array() > 1e-12).count(), std::min<long>(rank, 8));
  }
  const auto oracle = brute_force_vertices(lp);
  for (const auto& g : found) EXPECT_TRUE(contains_vector(oracle, g));
}

TEST(WeightLp, EnumerationIsDeterministicPerSeed) {
  const auto y = testing::chain_moments_from_printed();
  const auto atoms = testing::chain_minimizers();
  const auto a = enumerate_extreme_measures(atoms, y, 30, 5);
  const auto b = enumerate_extreme_measures(atoms, y, 30, 5);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t k = 0; k < a.size(); ++k) EXPECT_EQ(a[k], b[k]);
}

}  // namespace
}  // namespace smk
