#include "smk/rip.hpp"

#include <algorithm>
#include <numeric>
#include <queue>
#include <tuple>

#include "smk/error.hpp"

namespace smk {

RipCheck check_rip(const CliqueCover& cover) {
  std::vector<std::size_t> order(cover.size());
  std::iota(order.begin(), order.end(), 0);
  return check_rip(cover, order);
}

RipCheck check_rip(const CliqueCover& cover,
                   const std::vector<std::size_t>& order) {
  if (order.size() != cover.size()) {
    throw Error(ErrorCode::InvalidInput, "order length differs from clique count");
  }
  RipCheck result;
  result.witnesses.order = order;
  result.witnesses.witness.resize(order.size());
  std::vector<std::size_t> seen;
  for (std::size_t k = 0; k < order.size(); ++k) {
    const auto& current = cover.clique(order[k]);
    if (k > 0) {
      const auto shared = intersect(current, seen);
      for (std::size_t j = 0; j < k; ++j) {
        if (is_subset(shared, cover.clique(order[j]))) {
          result.witnesses.witness[k].push_back(j);
        }
      }
      if (result.witnesses.witness[k].empty() && !result.fails_at) {
        result.fails_at = k;
      }
    }
    seen = unite(seen, current);
  }
  return result;
}

namespace {

struct DisjointSets {
  std::vector<std::size_t> parent;
  explicit DisjointSets(std::size_t n) : parent(n) {
    std::iota(parent.begin(), parent.end(), 0);
  }
  std::size_t find(std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  bool unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent[b] = a;
    return true;
  }
};

}  // namespace

std::optional<std::vector<std::size_t>> find_rip_order(const CliqueCover& cover) {
  const std::size_t m = cover.size();
  if (m == 0) return std::vector<std::size_t>{};

  // Kruskal over the complete clique graph; zero-weight edges keep the tree
  // spanning when the cover is disconnected.
  std::vector<std::tuple<std::size_t, std::size_t, std::size_t>> edges;
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i + 1; j < m; ++j) {
      edges.emplace_back(intersect(cover.clique(i), cover.clique(j)).size(), i, j);
    }
  }
  std::stable_sort(edges.begin(), edges.end(), [](const auto& a, const auto& b) {
    if (std::get<0>(a) != std::get<0>(b)) return std::get<0>(a) > std::get<0>(b);
    return std::tie(std::get<1>(a), std::get<2>(a)) <
           std::tie(std::get<1>(b), std::get<2>(b));
  });
  DisjointSets sets(m);
  std::vector<std::vector<std::size_t>> adjacency(m);
  for (const auto& [w, i, j] : edges) {
    if (sets.unite(i, j)) {
      adjacency[i].push_back(j);
      adjacency[j].push_back(i);
    }
  }
  for (auto& a : adjacency) std::sort(a.begin(), a.end());

  std::size_t root = 0;
  for (std::size_t i = 0; i < m; ++i) {
    const auto& c = cover.clique(i);
    if (!c.empty() && c.front() == 0) {
      root = i;
      break;
    }
  }

  std::vector<std::size_t> order;
  std::vector<bool> visited(m, false);
  std::queue<std::size_t> queue;
  queue.push(root);
  visited[root] = true;
  while (!queue.empty()) {
    const auto i = queue.front();
    queue.pop();
    order.push_back(i);
    for (auto j : adjacency[i]) {
      if (!visited[j]) {
        visited[j] = true;
        queue.push(j);
      }
    }
  }

  if (!check_rip(cover, order).ok()) return std::nullopt;
  return order;
}

}  // namespace smk
