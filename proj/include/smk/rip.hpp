#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "smk/core.hpp"

namespace smk {

/// Running-intersection witnesses for one clique order.
///
/// `order[k]` is the original index of the clique placed at position k.
/// `witness[k]` lists every position j < k whose clique contains the
/// intersection of clique k with the union of the cliques before it. All
/// indices are 0-based positions in `order`.
struct RipWitnesses {
  std::vector<std::size_t> order;
  std::vector<std::vector<std::size_t>> witness;
};

struct RipCheck {
  RipWitnesses witnesses;
  /// First position without a witness, if any.
  std::optional<std::size_t> fails_at;

  bool ok() const noexcept { return !fails_at.has_value(); }
};

/// Checks the running intersection property for the cover's own order, or
/// for `order` when given.
RipCheck check_rip(const CliqueCover& cover);
RipCheck check_rip(const CliqueCover& cover,
                   const std::vector<std::size_t>& order);

/// Searches for a clique order satisfying the running intersection
/// property: maximum-weight spanning tree of the clique intersection graph
/// (weights |Ci & Cj|, ties broken by lexicographic edge index), rooted at
/// the first clique containing variable 0 and emitted breadth first. The
/// candidate is verified with check_rip(); std::nullopt means no order
/// exists.
std::optional<std::vector<std::size_t>> find_rip_order(const CliqueCover& cover);

}  // namespace smk
