#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "smk/certify.hpp"
#include "smk/core.hpp"
#include "smk/rip.hpp"

namespace smk {

struct AssemblyTolerances {
  /// Infinity-norm distance under which two points are the same atom.
  double point_tol = 1e-6;
  /// Masses m1, m2 match when |m1 - m2| <= mass_tol * (1 + max(m1, m2)).
  double mass_tol = 1e-6;
};

/// Pushforward of mu along a projection: project every atom, merge atoms
/// within `merge_tol`, add their weights.
AtomicMeasure pushforward(const AtomicMeasure& mu, const Projection& p,
                          double merge_tol);

/// The shared marginal theta_1 delta_{v_1} + ... + theta_t delta_{v_t} of a
/// partial measure and an incoming clique measure, with the atom groups that
/// project onto each v_tau. `partial_groups[tau]` indexes atoms of the
/// partial measure and `incoming_groups[tau]` atoms of the incoming one.
struct MarginalGroups {
  std::vector<std::size_t> overlap;  ///< global variables, sorted
  std::vector<Point> points;
  std::vector<double> masses;
  std::vector<std::vector<std::size_t>> partial_groups;
  std::vector<std::vector<std::size_t>> incoming_groups;
};

/// Throws MarginalMismatch, with the unmatched overlap atoms or mass gaps in
/// the message, when the two marginals on `overlap` differ.
MarginalGroups match_marginals(const AtomicMeasure& partial,
                               const AtomicMeasure& incoming,
                               const std::vector<std::size_t>& overlap,
                               const AssemblyTolerances& tol = {});

/// Clique order plus, for each position k >= 1, the earlier position whose
/// clique supplies the overlap used to glue clique k.
struct AssemblyPlan {
  std::vector<std::size_t> order;
  std::vector<std::optional<std::size_t>> parent;
};

/// First listed witness at every position.
AssemblyPlan plan_from_witnesses(const RipWitnesses& witnesses);
/// Witnesses chosen by the certificate (those passing the overlap rank test).
AssemblyPlan plan_from_certificate(const FlatnessCertificate& certificate);

/// Glues clique measures (indexed by original clique) into one measure on
/// all variables, following the plan. Each step matches the marginals on
/// clique(order[k]) & clique(order[parent[k]]) and joins atom pairs of a
/// common overlap point with weight nu_k * lambda_l / theta_tau. The result
/// must reproduce every clique measure as its marginal, otherwise
/// FinalMarginalCheckFailed.
AtomicMeasure assemble(const std::vector<AtomicMeasure>& clique_measures,
                       const CliqueCover& cover, const AssemblyPlan& plan,
                       const AssemblyTolerances& tol = {});

/// Every x in R^n whose projection on each clique is an atom of that
/// clique's measure; canonical atom order.
std::vector<Point> maximal_support_set(const std::vector<AtomicMeasure>& clique_measures,
                                       const CliqueCover& cover, double tol = 1e-6);

/// max over the sparse index set of |sum_l w_l x_l^alpha - y_alpha|.
double verify_global(const AtomicMeasure& mu, const SparseMomentVector& y);

/// True when both point lists agree as sets within `tol`.
bool same_point_set(const std::vector<Point>& a, const std::vector<Point>& b,
                    double tol);

}  // namespace smk
