#include "smk/assemble.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "smk/error.hpp"

namespace smk {

namespace {

struct Clusters {
  std::vector<Point> centers;
  std::vector<double> masses;
  std::vector<std::size_t> assignment;  // atom -> cluster
};

Clusters cluster_projection(const AtomicMeasure& mu, const Projection& p,
                            double tol) {
  Clusters c;
  for (std::size_t l = 0; l < mu.size(); ++l) {
    Point z = p.apply(mu.atoms[l]);
    std::size_t found = c.centers.size();
    for (std::size_t e = 0; e < c.centers.size(); ++e) {
      if (max_abs_difference(c.centers[e], z) <= tol) {
        found = e;
        break;
      }
    }
    if (found == c.centers.size()) {
      c.centers.push_back(std::move(z));
      c.masses.push_back(0.0);
    }
    c.masses[found] += mu.weights[l];
    c.assignment.push_back(found);
  }
  return c;
}

std::string point_string(const Point& p) {
  std::ostringstream os;
  os << '(';
  for (std::size_t k = 0; k < p.size(); ++k) os << (k ? "," : "") << p[k];
  os << ')';
  return os.str();
}

bool masses_match(double a, double b, const AssemblyTolerances& tol) {
  return std::abs(a - b) <= tol.mass_tol * (1.0 + std::max(std::abs(a), std::abs(b)));
}

void check_measure_on_clique(const AtomicMeasure& mu, const CliqueCover& cover,
                             std::size_t i) {
  if (mu.variables != cover.clique(i)) {
    throw Error(ErrorCode::InvalidInput,
                "measure " + std::to_string(i + 1) + " is not over clique " +
                    std::to_string(i + 1));
  }
}

}  // namespace

AtomicMeasure pushforward(const AtomicMeasure& mu, const Projection& p,
                          double merge_tol) {
  if (p.source() != mu.variables) {
    throw Error(ErrorCode::InvalidInput, "projection source differs from measure variables");
  }
  auto c = cluster_projection(mu, p, merge_tol);
  return AtomicMeasure{p.target(), std::move(c.centers), std::move(c.masses)};
}

MarginalGroups match_marginals(const AtomicMeasure& partial,
                               const AtomicMeasure& incoming,
                               const std::vector<std::size_t>& overlap,
                               const AssemblyTolerances& tol) {
  const auto left = cluster_projection(partial, Projection(partial.variables, overlap),
                                       tol.point_tol);
  const auto right = cluster_projection(incoming, Projection(incoming.variables, overlap),
                                        tol.point_tol);

  // Greedy nearest-neighbour pairing of the two marginals' atoms.
  std::vector<std::size_t> partner(left.centers.size(), right.centers.size());
  std::vector<bool> taken(right.centers.size(), false);
  std::ostringstream problems;
  for (std::size_t a = 0; a < left.centers.size(); ++a) {
    double best = std::numeric_limits<double>::infinity();
    std::size_t pick = right.centers.size();
    for (std::size_t b = 0; b < right.centers.size(); ++b) {
      if (taken[b]) continue;
      const double d = max_abs_difference(left.centers[a], right.centers[b]);
      if (d < best) {
        best = d;
        pick = b;
      }
    }
    if (pick == right.centers.size() || best > tol.point_tol) {
      problems << " unmatched partial overlap atom " << point_string(left.centers[a]) << ';';
      continue;
    }
    taken[pick] = true;
    partner[a] = pick;
    if (!masses_match(left.masses[a], right.masses[pick], tol)) {
      problems << " mass gap at " << point_string(left.centers[a]) << ": "
               << left.masses[a] << " vs " << right.masses[pick] << ';';
    }
  }
  for (std::size_t b = 0; b < right.centers.size(); ++b) {
    if (!taken[b]) {
      problems << " unmatched incoming overlap atom " << point_string(right.centers[b]) << ';';
    }
  }
  if (!problems.str().empty()) {
    throw Error(ErrorCode::MarginalMismatch, "marginals differ:" + problems.str());
  }

  MarginalGroups g;
  g.overlap = overlap;
  std::vector<std::size_t> tau_of_right(right.centers.size());
  for (std::size_t a = 0; a < left.centers.size(); ++a) {
    const double theta = 0.5 * (left.masses[a] + right.masses[partner[a]]);
    if (theta <= tol.mass_tol) {
      throw Error(ErrorCode::MarginalMismatch,
                  "degenerate overlap mass at " + point_string(left.centers[a]));
    }
    tau_of_right[partner[a]] = a;
    g.points.push_back(left.centers[a]);
    g.masses.push_back(theta);
  }
  g.partial_groups.resize(g.points.size());
  g.incoming_groups.resize(g.points.size());
  for (std::size_t k = 0; k < partial.size(); ++k) {
    g.partial_groups[left.assignment[k]].push_back(k);
  }
  for (std::size_t l = 0; l < incoming.size(); ++l) {
    g.incoming_groups[tau_of_right[right.assignment[l]]].push_back(l);
  }
  return g;
}

AssemblyPlan plan_from_witnesses(const RipWitnesses& witnesses) {
  AssemblyPlan plan;
  plan.order = witnesses.order;
  for (std::size_t k = 0; k < witnesses.order.size(); ++k) {
    const auto& w = witnesses.witness.at(k);
    plan.parent.push_back(k == 0 || w.empty() ? std::nullopt
                                              : std::optional<std::size_t>(w.front()));
  }
  return plan;
}

AssemblyPlan plan_from_certificate(const FlatnessCertificate& certificate) {
  return AssemblyPlan{certificate.order, certificate.chosen_witnesses()};
}

AtomicMeasure assemble(const std::vector<AtomicMeasure>& clique_measures,
                       const CliqueCover& cover, const AssemblyPlan& plan,
                       const AssemblyTolerances& tol) {
  if (clique_measures.size() != cover.size() || plan.order.size() != cover.size() ||
      plan.parent.size() != cover.size()) {
    throw Error(ErrorCode::InvalidInput, "one measure and one plan entry per clique required");
  }
  for (std::size_t i = 0; i < cover.size(); ++i) {
    check_measure_on_clique(clique_measures[i], cover, i);
  }

  AtomicMeasure current = clique_measures[plan.order[0]];
  for (std::size_t k = 1; k < plan.order.size(); ++k) {
    const std::size_t i = plan.order[k];
    if (!plan.parent[k] || *plan.parent[k] >= k) {
      throw Error(ErrorCode::InvalidInput,
                  "no earlier clique to glue position " + std::to_string(k + 1) + " onto");
    }
    const std::size_t j = plan.order[*plan.parent[k]];
    const auto& incoming = clique_measures[i];
    const auto overlap = intersect(cover.clique(i), cover.clique(j));
    const auto groups = match_marginals(current, incoming, overlap, tol);

    AtomicMeasure next;
    next.variables = unite(current.variables, incoming.variables);
    for (std::size_t tau = 0; tau < groups.points.size(); ++tau) {
      for (auto a : groups.partial_groups[tau]) {
        for (auto b : groups.incoming_groups[tau]) {
          Point w;
          w.reserve(next.variables.size());
          std::size_t pu = 0;
          std::size_t pz = 0;
          for (auto var : next.variables) {
            while (pu < current.variables.size() && current.variables[pu] < var) ++pu;
            while (pz < incoming.variables.size() && incoming.variables[pz] < var) ++pz;
            if (pu < current.variables.size() && current.variables[pu] == var) {
              w.push_back(current.atoms[a][pu]);
            } else {
              w.push_back(incoming.atoms[b][pz]);
            }
          }
          next.atoms.push_back(std::move(w));
          next.weights.push_back(current.weights[a] * incoming.weights[b] /
                                 groups.masses[tau]);
        }
      }
    }
    current = std::move(next);
  }

  // Every clique measure must reappear as a marginal of the result.
  for (std::size_t i = 0; i < cover.size(); ++i) {
    const auto marginal =
        pushforward(current, Projection(current.variables, cover.clique(i)), tol.point_tol);
    const auto& expected = clique_measures[i];
    std::ostringstream problems;
    std::vector<bool> used(marginal.size(), false);
    for (std::size_t l = 0; l < expected.size(); ++l) {
      bool found = false;
      for (std::size_t e = 0; e < marginal.size(); ++e) {
        if (!used[e] &&
            max_abs_difference(marginal.atoms[e], expected.atoms[l]) <= tol.point_tol) {
          used[e] = true;
          found = true;
          if (!masses_match(marginal.weights[e], expected.weights[l], tol)) {
            problems << " weight " << marginal.weights[e] << " vs " << expected.weights[l]
                     << " at " << point_string(expected.atoms[l]) << ';';
          }
          break;
        }
      }
      if (!found) problems << " missing atom " << point_string(expected.atoms[l]) << ';';
    }
    for (std::size_t e = 0; e < marginal.size(); ++e) {
      if (!used[e]) problems << " extra atom " << point_string(marginal.atoms[e]) << ';';
    }
    if (!problems.str().empty()) {
      throw Error(ErrorCode::FinalMarginalCheckFailed,
                  "marginal on clique " + std::to_string(i + 1) + " differs:" +
                      problems.str());
    }
  }
  sort_atoms(current, tol.point_tol);
  return current;
}

std::vector<Point> maximal_support_set(const std::vector<AtomicMeasure>& clique_measures,
                                       const CliqueCover& cover, double tol) {
  if (clique_measures.size() != cover.size()) {
    throw Error(ErrorCode::InvalidInput, "one measure per clique required");
  }
  for (std::size_t i = 0; i < cover.size(); ++i) {
    check_measure_on_clique(clique_measures[i], cover, i);
  }
  std::vector<std::size_t> vars;
  std::vector<Point> partial{Point{}};
  for (std::size_t i = 0; i < cover.size(); ++i) {
    const auto& mu = clique_measures[i];
    const auto merged = unite(vars, mu.variables);
    std::vector<Point> next;
    for (const auto& p : partial) {
      for (const auto& z : mu.atoms) {
        Point w;
        bool agree = true;
        std::size_t pp = 0;
        std::size_t pz = 0;
        for (auto var : merged) {
          while (pp < vars.size() && vars[pp] < var) ++pp;
          while (pz < mu.variables.size() && mu.variables[pz] < var) ++pz;
          const bool in_p = pp < vars.size() && vars[pp] == var;
          const bool in_z = pz < mu.variables.size() && mu.variables[pz] == var;
          if (in_p && in_z && std::abs(p[pp] - z[pz]) > tol) {
            agree = false;
            break;
          }
          w.push_back(in_p ? p[pp] : z[pz]);
        }
        if (agree) next.push_back(std::move(w));
      }
    }
    partial = std::move(next);
    vars = merged;
  }
  AtomicMeasure sorted{vars, partial, std::vector<double>(partial.size(), 0.0)};
  sort_atoms(sorted, tol);
  return sorted.atoms;
}

double verify_global(const AtomicMeasure& mu, const SparseMomentVector& y) {
  if (mu.size() > 0 && mu.variables.size() != y.cover().n()) {
    throw Error(ErrorCode::DimensionMismatch, "measure is not over all variables");
  }
  double worst = 0.0;
  for (const auto& [alpha, value] : y.entries()) {
    double s = 0.0;
    for (std::size_t l = 0; l < mu.size(); ++l) {
      s += mu.weights[l] * monomial_value(mu.atoms[l], alpha);
    }
    worst = std::max(worst, std::abs(s - value));
  }
  return worst;
}

bool same_point_set(const std::vector<Point>& a, const std::vector<Point>& b,
                    double tol) {
  auto covered = [tol](const std::vector<Point>& from, const std::vector<Point>& into) {
    return std::all_of(from.begin(), from.end(), [&](const Point& p) {
      return std::any_of(into.begin(), into.end(), [&](const Point& q) {
        return p.size() == q.size() && max_abs_difference(p, q) <= tol;
      });
    });
  };
  return covered(a, b) && covered(b, a);
}

}  // namespace smk
