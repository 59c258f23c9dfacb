#pragma once

// Hand transcriptions of the worked examples and small independent oracles
// shared by the unit and acceptance tests.

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <random>
#include <string>
#include <tuple>
#include <vector>

#include <Eigen/Dense>

#include "smk/core.hpp"
#include "smk/matrices.hpp"
#include "smk/relax.hpp"
#include "smk/rip.hpp"

namespace smk::testing {

inline std::string data_path(const std::string& name) {
  return std::string(SMK_DATA_DIR) + "/" + name;
}

// ---- two cliques {1,2},{2,3}, omega 2: ones at y_000, y_200, y_002, y_400, y_004.
inline SparseMomentVector two_clique_moments() {
  const CliqueCover cover = CliqueCover::from_one_based(3, {{1, 2}, {2, 3}});
  std::vector<std::pair<MultiIndex, double>> list;
  const std::vector<std::vector<int>> ones = {
      {0, 0, 0}, {2, 0, 0}, {0, 0, 2}, {4, 0, 0}, {0, 0, 4}};
  for (const auto& alpha : sparse_exponents(cover, 4)) {
    const bool one = std::find(ones.begin(), ones.end(), alpha.exponents()) != ones.end();
    list.emplace_back(alpha, one ? 1.0 : 0.0);
  }
  return SparseMomentVector::from_list(cover, 2, list);
}

// Printed 6x6 matrices, labels 1, x_a, x_b, x_a^2, x_a x_b, x_b^2.
inline Eigen::MatrixXd two_clique_printed(int clique) {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(6, 6);
  if (clique == 0) {
    m.row(0) << 1, 0, 0, 1, 0, 0;
    m.row(1) << 0, 1, 0, 0, 0, 0;
    m.row(3) << 1, 0, 0, 1, 0, 0;
  } else {
    m.row(0) << 1, 0, 0, 0, 0, 1;
    m.row(2) << 0, 0, 1, 0, 0, 0;
    m.row(5) << 1, 0, 0, 0, 0, 1;
  }
  return m;
}

// ---- chain cover {1,2},{2,3},{3,4}, omega 3.
// Printed 10x10 matrices list labels (a,b) = exponents of the clique's two
// variables in ascending lexicographic order.
inline const std::array<std::array<int, 2>, 10>& chain_printed_labels() {
  static const std::array<std::array<int, 2>, 10> labels = {{{0, 0}, {0, 1}, {0, 2}, {0, 3},
                                                             {1, 0}, {1, 1}, {1, 2}, {2, 0},
                                                             {2, 1}, {3, 0}}};
  return labels;
}

inline Eigen::MatrixXd chain_printed(int clique) {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(10, 10);
  auto set_rows = [&m](std::initializer_list<int> rows, std::array<double, 10> values) {
    for (int r : rows) {
      for (int c = 0; c < 10; ++c) m(r - 1, c) = values[c];
    }
  };
  if (clique == 0) {
    set_rows({1, 3, 8}, {1, 0, 1, 0, 0, 0, 0, 1, 0, 0});
    set_rows({2, 4, 9}, {0, 1, 0, 1, 0, 0, 0, 0, 1, 0});
    set_rows({5, 7, 10}, {0, 0, 0, 0, 1, 0, 1, 0, 0, 1});
    set_rows({6}, {0, 0, 0, 0, 0, 1, 0, 0, 0, 0});
  } else if (clique == 1) {
    set_rows({1, 8}, {1, 0, 0, 0, 0, 0, 0, 1, 0, 0});
    set_rows({5, 10}, {0, 0, 0, 0, 1, 0, 0, 0, 0, 1});
  } else {
    set_rows({1, 3}, {1, 0, 1, 0, 0, 0, 0, 0, 0, 0});
    set_rows({2, 4}, {0, 1, 0, 1, 0, 0, 0, 0, 0, 0});
  }
  return m;
}

// Printed overlap matrices on one shared variable, labels 1, x, x^2, x^3.
inline Eigen::MatrixXd chain_printed_overlap(int which) {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(4, 4);
  if (which == 0) {
    m << 1, 0, 1, 0, 0, 1, 0, 1, 1, 0, 1, 0, 0, 1, 0, 1;
  } else {
    m(0, 0) = 1;
  }
  return m;
}

inline CliqueCover chain_cover() {
  return CliqueCover::from_one_based(4, {{1, 2}, {2, 3}, {3, 4}});
}

// Moment vector read off the printed matrices entry by entry.
inline SparseMomentVector chain_moments_from_printed() {
  const auto cover = chain_cover();
  std::map<MultiIndex, double> values;
  const auto& labels = chain_printed_labels();
  for (int i = 0; i < 3; ++i) {
    const Eigen::MatrixXd m = chain_printed(i);
    for (int r = 0; r < 10; ++r) {
      for (int c = 0; c < 10; ++c) {
        const MultiIndex local({labels[r][0] + labels[c][0], labels[r][1] + labels[c][1]});
        values[embed(local, cover.clique(i), 4)] = m(r, c);
      }
    }
  }
  std::vector<std::pair<MultiIndex, double>> list(values.begin(), values.end());
  return SparseMomentVector::from_list(cover, 3, list);
}

inline std::vector<Point> chain_minimizers() {
  return {{1, 1, 0, 1},   {1, 1, 0, -1},   {1, -1, 0, 1},  {1, -1, 0, -1},
          {-1, -1, 0, 1}, {-1, -1, 0, -1}, {-1, 1, 0, 1},  {-1, 1, 0, -1}};
}

inline Polynomial poly2(std::initializer_list<std::tuple<int, int, double>> terms) {
  Polynomial p;
  for (const auto& [a, b, c] : terms) p[MultiIndex({a, b})] += c;
  return p;
}

inline PopProblem chain_pop() {
  PopProblem pop;
  pop.cover = chain_cover();
  pop.objectives = {poly2({{4, 0, 1}, {2, 0, -2}, {0, 4, 1}, {0, 2, -2}, {0, 0, 2}}),
                    poly2({{0, 2, 1}}),
                    poly2({{0, 4, 1}, {0, 2, -2}, {0, 0, 1}})};
  pop.constraints.resize(3);
  for (std::size_t i = 0; i < 3; ++i) {
    pop.constraints[i].push_back({i, poly2({{0, 0, 3}, {2, 0, -1}, {0, 2, -1}})});
  }
  return pop;
}

// ---- triangle cover {1,2},{2,3},{1,3}, omega 2 (no running intersection).
inline SparseMomentVector triangle_moments() {
  const CliqueCover cover = CliqueCover::from_one_based(3, {{1, 2}, {2, 3}, {1, 3}});
  const std::map<std::vector<int>, double> listed = {
      {{0, 0, 0}, 1},  {{2, 0, 0}, 1},  {{1, 1, 0}, 1}, {{0, 2, 0}, 1},  {{0, 1, 1}, 1},
      {{0, 0, 2}, 1},  {{1, 0, 1}, -1}, {{4, 0, 0}, 1}, {{3, 1, 0}, 1},  {{2, 2, 0}, 1},
      {{1, 3, 0}, 1},  {{0, 4, 0}, 1},  {{3, 0, 1}, -1}, {{0, 3, 1}, 1}, {{2, 0, 2}, 1},
      {{0, 2, 2}, 1},  {{1, 0, 3}, -1}, {{0, 1, 3}, 1}, {{0, 0, 4}, 1}};
  std::vector<std::pair<MultiIndex, double>> list;
  for (const auto& alpha : sparse_exponents(cover, 4)) {
    const auto it = listed.find(alpha.exponents());
    list.emplace_back(alpha, it == listed.end() ? 0.0 : it->second);
  }
  return SparseMomentVector::from_list(cover, 2, list);
}

// ---- oracles

// Dense moment matrix sum_l w_l v(x_l) v(x_l)^T over the given labels.
inline Eigen::MatrixXd outer_product_moments(const std::vector<MultiIndex>& labels,
                                             const std::vector<Point>& atoms,
                                             const std::vector<double>& weights) {
  const auto k = static_cast<Eigen::Index>(labels.size());
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(k, k);
  for (std::size_t l = 0; l < atoms.size(); ++l) {
    Eigen::VectorXd v(k);
    for (Eigen::Index a = 0; a < k; ++a) {
      double p = 1.0;
      for (std::size_t t = 0; t < atoms[l].size(); ++t) {
        p *= std::pow(atoms[l][t], labels[a][t]);
      }
      v(a) = p;
    }
    m += weights[l] * v * v.transpose();
  }
  return m;
}

// Matrix indexed by label permutation: out(a,b) = m(perm[a], perm[b]).
inline Eigen::MatrixXd permute(const Eigen::MatrixXd& m, const std::vector<int>& perm) {
  Eigen::MatrixXd out(m.rows(), m.cols());
  for (Eigen::Index a = 0; a < m.rows(); ++a) {
    for (Eigen::Index b = 0; b < m.cols(); ++b) out(a, b) = m(perm[a], perm[b]);
  }
  return out;
}

inline bool contains_point(const std::vector<Point>& pts, const Point& p, double tol) {
  return std::any_of(pts.begin(), pts.end(), [&](const Point& q) {
    if (q.size() != p.size()) return false;
    for (std::size_t k = 0; k < p.size(); ++k) {
      if (std::abs(q[k] - p[k]) > tol) return false;
    }
    return true;
  });
}

// Random cover with the running intersection property: each new clique
// shares a subset of one earlier clique and adds fresh variables.
struct RandomInstance {
  CliqueCover cover;
  AtomicMeasure measure;  // over all variables
};

inline RandomInstance random_rip_instance(std::mt19937_64& rng, int max_cliques = 4,
                                          int max_clique_size = 3) {
  static const std::vector<double> pool = {-1.0, -0.6, -0.2, 0.2, 0.6, 1.0};
  std::uniform_int_distribution<int> num_cliques(1, max_cliques);
  const int m = num_cliques(rng);
  std::vector<std::vector<std::size_t>> cliques;
  std::size_t n = 0;
  for (int i = 0; i < m; ++i) {
    std::vector<std::size_t> c;
    if (i > 0) {
      const auto& parent = cliques[std::uniform_int_distribution<std::size_t>(0, cliques.size() - 1)(rng)];
      // Sharing all of the parent would make it a subset of the new clique.
      const auto share = std::uniform_int_distribution<std::size_t>(
          0, std::min<std::size_t>(parent.size() - 1, max_clique_size - 1))(rng);
      std::vector<std::size_t> shuffled = parent;
      std::shuffle(shuffled.begin(), shuffled.end(), rng);
      c.assign(shuffled.begin(), shuffled.begin() + static_cast<long>(share));
    }
    const auto fresh = std::uniform_int_distribution<std::size_t>(
        1, static_cast<std::size_t>(max_clique_size) - c.size())(rng);
    for (std::size_t k = 0; k < fresh; ++k) c.push_back(n++);
    std::sort(c.begin(), c.end());
    cliques.push_back(c);
  }
  RandomInstance inst{CliqueCover(n, cliques), {}};
  const int r = std::uniform_int_distribution<int>(1, 4)(rng);
  inst.measure.variables.resize(n);
  for (std::size_t k = 0; k < n; ++k) inst.measure.variables[k] = k;
  std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
  std::uniform_real_distribution<double> weight(0.2, 1.0);
  while (static_cast<int>(inst.measure.size()) < r) {
    Point p(n);
    for (auto& v : p) v = pool[pick(rng)];
    if (contains_point(inst.measure.atoms, p, 1e-12)) continue;
    inst.measure.atoms.push_back(p);
    inst.measure.weights.push_back(weight(rng));
  }
  return inst;
}

// Moments of the instance, certified under a discovered order at the
// smallest omega in 2..4 that is flat, then extracted and reassembled.
struct RoundTrip {
  int omega = 0;
  bool certified = false;
  double residual = 0.0;
  bool support_is_maximal = false;
  AtomicMeasure measure;
};

inline RoundTrip round_trip(const RandomInstance& inst, std::uint64_t seed = 42) {
  RoundTrip out;
  const auto order = find_rip_order(inst.cover);
  if (!order) return out;
  const auto witnesses = check_rip(inst.cover, *order).witnesses;
  const RankPolicy policy;
  for (int omega = 2; omega <= 4; ++omega) {
    const auto y = SparseMomentVector::from_measure(inst.cover, omega, inst.measure);
    const auto cert = certify(y, {}, witnesses, policy);
    if (!cert.verdict) continue;
    std::vector<AtomicMeasure> cliques(inst.cover.size());
    for (const auto& c : cert.cliques) {
      cliques[c.clique] = extract_atoms(moment_matrix(clique_subvector(y, c.clique), omega),
                                        c.full.rank, policy, seed, inst.cover.clique(c.clique));
    }
    out.omega = omega;
    out.certified = true;
    out.measure = assemble(cliques, inst.cover, plan_from_certificate(cert));
    out.residual = verify_global(out.measure, y);
    out.support_is_maximal =
        same_point_set(out.measure.atoms, maximal_support_set(cliques, inst.cover), 1e-6);
    return out;
  }
  return out;
}

}  // namespace smk::testing
