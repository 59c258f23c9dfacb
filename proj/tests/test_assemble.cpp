#include <gtest/gtest.h>

#include <functional>
#include <random>

#include "smk/assemble.hpp"
#include "smk/error.hpp"
#include "smk/extract.hpp"
#include "support.hpp"

namespace smk {
namespace {

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error raised";
  return ErrorCode::InvalidInput;
}

std::vector<AtomicMeasure> extract_all(const SparseMomentVector& y, const FlatnessCertificate& c) {
  std::vector<AtomicMeasure> out(y.cover().size());
  for (const auto& cl : c.cliques) {
    out[cl.clique] = extract_atoms(moment_matrix(clique_subvector(y, cl.clique), y.omega()),
                                   cl.full.rank, {}, 42, y.cover().clique(cl.clique));
  }
  return out;
}

TEST(Pushforward, MergesAtomsWithEqualImage) {
  const AtomicMeasure mu{{0, 1, 2}, {{1, 2, 3}, {1, 2, -3}, {0, 2, 3}}, {0.2, 0.3, 0.5}};
  const auto nu = pushforward(mu, Projection({0, 1, 2}, {0, 1}), 1e-9);
  EXPECT_EQ(nu.variables, (std::vector<std::size_t>{0, 1}));
  ASSERT_EQ(nu.size(), 2u);
  EXPECT_NEAR(nu.total_mass(), 1.0, 1e-15);
  for (std::size_t l = 0; l < nu.size(); ++l) {
    EXPECT_NEAR(nu.weights[l], 0.5, 1e-15);
  }
}

TEST(Pushforward, EmptyTargetGivesTheMassAtOnePoint) {
  const AtomicMeasure mu{{0, 1}, {{1, 2}, {3, 4}}, {0.25, 0.5}};
  const auto nu = pushforward(mu, Projection({0, 1}, {}), 1e-9);
  ASSERT_EQ(nu.size(), 1u);
  EXPECT_TRUE(nu.atoms[0].empty());
  EXPECT_DOUBLE_EQ(nu.weights[0], 0.75);
}

TEST(Marginals, GroupsAtomsByOverlapPoint) {
  const AtomicMeasure partial{{0, 1}, {{1, 0}, {-1, 0}}, {0.5, 0.5}};
  const AtomicMeasure incoming{{1, 2}, {{0, 1}, {0, -1}}, {0.5, 0.5}};
  const auto groups = match_marginals(partial, incoming, {1});
  ASSERT_EQ(groups.points.size(), 1u);
  EXPECT_DOUBLE_EQ(groups.masses[0], 1.0);
  EXPECT_EQ(groups.partial_groups[0].size(), 2u);
  EXPECT_EQ(groups.incoming_groups[0].size(), 2u);
}

TEST(Marginals, MismatchedMassIsReported) {
  const AtomicMeasure partial{{0, 1}, {{1, 0}, {-1, 2}}, {0.5, 0.5}};
  const AtomicMeasure incoming{{1, 2}, {{0, 1}, {2, -1}}, {0.7, 0.3}};
  EXPECT_EQ(code_of([&] { match_marginals(partial, incoming, {1}); }),
            ErrorCode::MarginalMismatch);
}

TEST(Marginals, UnmatchedPointIsReported) {
  const AtomicMeasure partial{{0, 1}, {{1, 0}}, {1.0}};
  const AtomicMeasure incoming{{1, 2}, {{0.5, 1}}, {1.0}};
  try {
    match_marginals(partial, incoming, {1});
    ADD_FAILURE();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::MarginalMismatch);
    EXPECT_NE(std::string(e.what()).find("0.5"), std::string::npos) << e.what();
  }
}

TEST(Assemble, TwoCliqueExampleGivesFourQuarterAtoms) {
  const auto y = testing::two_clique_moments();
  const auto cert = certify(y, {}, check_rip(y.cover()).witnesses, {});
  const auto mu = assemble(extract_all(y, cert), y.cover(), plan_from_certificate(cert));
  ASSERT_EQ(mu.size(), 4u);
  for (const Point& p : std::vector<Point>{{1, 0, 1}, {1, 0, -1}, {-1, 0, 1}, {-1, 0, -1}}) {
    EXPECT_TRUE(testing::contains_point(mu.atoms, p, 1e-9));
  }
  for (double w : mu.weights) EXPECT_NEAR(w, 0.25, 1e-12);
  EXPECT_LT(verify_global(mu, y), 1e-10);
}

TEST(Assemble, JoinWeightsFollowTheConditionalRule) {
  // Overlap point 0 has mass 0.6 split 0.2/0.4 on the left and 0.6 on the right
  // as a single atom; point 1 has mass 0.4 on both sides with two right atoms.
  const auto cover = CliqueCover::from_one_based(3, {{1, 2}, {2, 3}});
  const AtomicMeasure left{{0, 1}, {{5, 0}, {6, 0}, {7, 1}}, {0.2, 0.4, 0.4}};
  const AtomicMeasure right{{1, 2}, {{0, 9}, {1, 8}, {1, -8}}, {0.6, 0.1, 0.3}};
  const auto mu = assemble({left, right}, cover, plan_from_witnesses(check_rip(cover).witnesses));
  ASSERT_EQ(mu.size(), 4u);
  auto weight_of = [&](const Point& p) {
    for (std::size_t l = 0; l < mu.size(); ++l) {
      if (max_abs_difference(mu.atoms[l], p) < 1e-12) return mu.weights[l];
    }
    return -1.0;
  };
  EXPECT_NEAR(weight_of({5, 0, 9}), 0.2, 1e-15);
  EXPECT_NEAR(weight_of({6, 0, 9}), 0.4, 1e-15);
  EXPECT_NEAR(weight_of({7, 1, 8}), 0.4 * 0.1 / 0.4, 1e-15);
  EXPECT_NEAR(weight_of({7, 1, -8}), 0.4 * 0.3 / 0.4, 1e-15);
}

TEST(Assemble, ChainFixtureGivesEightMinimizers) {
  const auto y = testing::chain_moments_from_printed();
  const auto pop = testing::chain_pop();
  const auto cert = certify(y, pop.constraints, check_rip(y.cover()).witnesses, {});
  const auto cliques = extract_all(y, cert);
  const auto mu = assemble(cliques, y.cover(), plan_from_certificate(cert));
  EXPECT_TRUE(same_point_set(mu.atoms, testing::chain_minimizers(), 1e-8));
  for (double w : mu.weights) EXPECT_NEAR(w, 0.125, 1e-10);
  EXPECT_TRUE(same_point_set(maximal_support_set(cliques, y.cover()), mu.atoms, 1e-8));
}

TEST(Assemble, TriangleHasNoRepresentingAssembly) {
  const auto y = testing::triangle_moments();
  std::vector<AtomicMeasure> cliques;
  for (std::size_t i = 0; i < 3; ++i) {
    const auto m = moment_matrix(clique_subvector(y, i), 2);
    cliques.push_back(extract_atoms(m, numerical_rank(m, {}), {}, 42, y.cover().clique(i)));
  }
  EXPECT_TRUE(maximal_support_set(cliques, y.cover()).empty());
  const AssemblyPlan forced{{0, 1, 2}, {std::nullopt, 0, 1}};
  EXPECT_EQ(code_of([&] { assemble(cliques, y.cover(), forced); }),
            ErrorCode::FinalMarginalCheckFailed);
}

TEST(Assemble, RejectsPlansWithForwardParents) {
  const auto y = testing::two_clique_moments();
  const auto cert = certify(y, {}, check_rip(y.cover()).witnesses, {});
  const AssemblyPlan bad{{0, 1}, {std::nullopt, 1}};
  EXPECT_THROW(assemble(extract_all(y, cert), y.cover(), bad), Error);
}

TEST(Plan, WitnessPlanTakesFirstWitness) {
  const auto cover = CliqueCover::from_one_based(4, {{1, 2}, {2, 3}, {4}});
  const auto plan = plan_from_witnesses(check_rip(cover).witnesses);
  EXPECT_EQ(plan.parent[0], std::nullopt);
  EXPECT_EQ(plan.parent[1], std::optional<std::size_t>(0));
  EXPECT_EQ(plan.parent[2], std::optional<std::size_t>(0));
}

TEST(SupportSet, IsTheJoinOfCliqueSupports) {
  const auto cover = CliqueCover::from_one_based(3, {{1, 2}, {2, 3}});
  const AtomicMeasure a{{0, 1}, {{1, 0}, {2, 1}}, {0.5, 0.5}};
  const AtomicMeasure b{{1, 2}, {{0, 3}, {0, 4}, {1, 5}}, {0.2, 0.3, 0.5}};
  const auto x = maximal_support_set({a, b}, cover);
  EXPECT_TRUE(same_point_set(x, {{1, 0, 3}, {1, 0, 4}, {2, 1, 5}}, 0));
}

TEST(SamePointSet, ComparesAsSets) {
  EXPECT_TRUE(same_point_set({{1, 2}, {3, 4}}, {{3, 4}, {1, 2 + 1e-9}}, 1e-6));
  EXPECT_FALSE(same_point_set({{1, 2}}, {{1, 2}, {3, 4}}, 1e-6));
}

TEST(RoundTrip, RandomRipInstancesAssembleToMaximalSupport) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 60; ++trial) {
    const auto inst = testing::random_rip_instance(rng);
    const auto rt = testing::round_trip(inst);
    ASSERT_TRUE(rt.certified) << "trial " << trial;
    EXPECT_LE(rt.residual, 1e-6) << "trial " << trial;
    EXPECT_TRUE(rt.support_is_maximal) << "trial " << trial;
  }
}

}  // namespace
}  // namespace smk
