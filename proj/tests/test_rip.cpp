#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <random>
#include <set>

#include "smk/rip.hpp"
#include "support.hpp"

namespace smk {
namespace {

// Independent check: for every position k, the set of variables clique k
// shares with earlier cliques must fit inside a single earlier clique.
bool brute_force_ok(const CliqueCover& cover, const std::vector<std::size_t>& order) {
  std::set<std::size_t> seen(cover.clique(order[0]).begin(), cover.clique(order[0]).end());
  for (std::size_t k = 1; k < order.size(); ++k) {
    std::set<std::size_t> shared;
    for (auto v : cover.clique(order[k])) {
      if (seen.count(v)) shared.insert(v);
    }
    bool found = false;
    for (std::size_t j = 0; j < k && !found; ++j) {
      const auto& cj = cover.clique(order[j]);
      found = std::all_of(shared.begin(), shared.end(), [&](std::size_t v) {
        return std::find(cj.begin(), cj.end(), v) != cj.end();
      });
    }
    if (!found) return false;
    seen.insert(cover.clique(order[k]).begin(), cover.clique(order[k]).end());
  }
  return true;
}

bool any_order_ok(const CliqueCover& cover) {
  std::vector<std::size_t> order(cover.size());
  std::iota(order.begin(), order.end(), 0);
  do {
    if (brute_force_ok(cover, order)) return true;
  } while (std::next_permutation(order.begin(), order.end()));
  return false;
}

TEST(Rip, ChainInNaturalOrderHasWitnesses) {
  const auto check = check_rip(testing::chain_cover());
  ASSERT_TRUE(check.ok());
  EXPECT_EQ(check.witnesses.witness[1], (std::vector<std::size_t>{0}));
  EXPECT_EQ(check.witnesses.witness[2], (std::vector<std::size_t>{1}));
}

TEST(Rip, DisjointCliqueAcceptsEveryEarlierPosition) {
  const auto cover = CliqueCover::from_one_based(4, {{1, 2}, {2, 3}, {4}});
  const auto check = check_rip(cover);
  ASSERT_TRUE(check.ok());
  EXPECT_EQ(check.witnesses.witness[2], (std::vector<std::size_t>{0, 1}));
}

TEST(Rip, TriangleFailsEveryPermutation) {
  const auto cover = CliqueCover::from_one_based(3, {{1, 2}, {2, 3}, {1, 3}});
  std::vector<std::size_t> order = {0, 1, 2};
  int permutations = 0;
  do {
    ++permutations;
    EXPECT_FALSE(check_rip(cover, order).ok());
    EXPECT_FALSE(brute_force_ok(cover, order));
  } while (std::next_permutation(order.begin(), order.end()));
  EXPECT_EQ(permutations, 6);
  EXPECT_FALSE(find_rip_order(cover).has_value());
  EXPECT_EQ(check_rip(cover).fails_at, std::optional<std::size_t>(2));
}

TEST(Rip, ReorderingRescuesABadOrder) {
  // {1,2},{3,4},{2,3}: the third clique meets two earlier ones.
  const auto cover = CliqueCover::from_one_based(4, {{1, 2}, {3, 4}, {2, 3}});
  EXPECT_FALSE(check_rip(cover).ok());
  const auto order = find_rip_order(cover);
  ASSERT_TRUE(order.has_value());
  EXPECT_TRUE(brute_force_ok(cover, *order));
}

TEST(Rip, FindOrderAgreesWithBruteForceOnRandomCovers) {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = std::uniform_int_distribution<std::size_t>(2, 6)(rng);
    const int m = std::uniform_int_distribution<int>(1, 5)(rng);
    std::vector<std::vector<std::size_t>> cliques;
    for (int i = 0; i < m; ++i) {
      std::vector<std::size_t> c;
      for (std::size_t v = 0; v < n; ++v) {
        if (rng() % 2) c.push_back(v);
      }
      if (c.empty()) c.push_back(rng() % n);
      cliques.push_back(c);
    }
    // Ensure coverage and drop contained cliques to obtain a valid cover.
    std::vector<std::vector<std::size_t>> kept;
    for (std::size_t v = 0; v < n; ++v) {
      bool covered = false;
      for (const auto& c : cliques) covered |= std::find(c.begin(), c.end(), v) != c.end();
      if (!covered) cliques.push_back({v});
    }
    std::sort(cliques.begin(), cliques.end());
    cliques.erase(std::unique(cliques.begin(), cliques.end()), cliques.end());
    for (std::size_t i = 0; i < cliques.size(); ++i) {
      bool contained = false;
      for (std::size_t j = 0; j < cliques.size(); ++j) {
        if (i != j && is_subset(cliques[i], cliques[j])) contained = true;
      }
      if (!contained) kept.push_back(cliques[i]);
    }
    const CliqueCover cover(n, kept);
    ASSERT_TRUE(validate_cover(cover).ok) << validate_cover(cover).message;
    const auto found = find_rip_order(cover);
    EXPECT_EQ(found.has_value(), any_order_ok(cover)) << "trial " << trial;
    if (found) {
      EXPECT_TRUE(brute_force_ok(cover, *found));
    }
  }
}

}  // namespace
}  // namespace smk
