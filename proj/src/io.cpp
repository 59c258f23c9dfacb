#include "smk/io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "smk/error.hpp"

namespace smk::io {

namespace {

template <class T>
T field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) {
    throw Error(ErrorCode::ParseError, std::string("missing field '") + key + "'");
  }
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("bad field '") + key + "': " + e.what());
  }
}

std::size_t clique_index(const json& j, const CliqueCover& cover) {
  const int c = field<int>(j, "clique");
  if (c < 1 || static_cast<std::size_t>(c) > cover.size()) {
    throw Error(ErrorCode::InvalidInput, "clique index " + std::to_string(c) + " out of range");
  }
  return static_cast<std::size_t>(c - 1);
}

Polynomial terms_from_json(const json& j, std::size_t width) {
  Polynomial p;
  for (const auto& t : field<json>(j, "terms")) {
    const auto alpha = field<std::vector<int>>(t, "alpha_local");
    if (alpha.size() != width) {
      throw Error(ErrorCode::InvalidInput, "alpha_local length differs from clique size");
    }
    p[MultiIndex(alpha)] += field<double>(t, "coef");
  }
  return p;
}

json terms_to_json(const Polynomial& p) {
  json terms = json::array();
  for (const auto& [alpha, c] : p) {
    terms.push_back({{"coef", c}, {"alpha_local", alpha.exponents()}});
  }
  return terms;
}

json finite_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json rank_to_json(const RankDetail& d) {
  return {{"rank", d.rank}, {"singular_values", d.singular_values}, {"gap", finite_or_null(d.gap())}};
}

std::vector<int> one_based(const std::vector<std::size_t>& v) {
  std::vector<int> out;
  for (auto x : v) out.push_back(static_cast<int>(x) + 1);
  return out;
}

}  // namespace

CliqueCover cover_from_json(const json& j) {
  return CliqueCover::from_one_based(field<std::size_t>(j, "n"),
                                     field<std::vector<std::vector<int>>>(j, "cliques"));
}

void cover_to_json(const CliqueCover& cover, json& j) {
  j["n"] = cover.n();
  j["cliques"] = cover.to_one_based();
}

SparseMomentVector moments_from_json(const json& j, bool allow_missing_as_zero) {
  const auto cover = cover_from_json(j);
  const int omega = field<int>(j, "omega");
  std::vector<std::pair<MultiIndex, double>> list;
  for (const auto& e : field<json>(j, "entries")) {
    const auto alpha = field<std::vector<int>>(e, "alpha");
    if (alpha.size() != cover.n()) {
      throw Error(ErrorCode::InvalidInput, "alpha length differs from n");
    }
    list.emplace_back(MultiIndex(alpha), field<double>(e, "value"));
  }
  return SparseMomentVector::from_list(cover, omega, list, allow_missing_as_zero);
}

json moments_to_json(const SparseMomentVector& y) {
  json j;
  cover_to_json(y.cover(), j);
  j["omega"] = y.omega();
  json entries = json::array();
  for (const auto& [alpha, v] : y.entries()) {
    entries.push_back({{"alpha", alpha.exponents()}, {"value", v}});
  }
  j["entries"] = std::move(entries);
  return j;
}

PopProblem pop_from_json(const json& j) {
  PopProblem pop;
  pop.cover = cover_from_json(j);
  pop.objectives.assign(pop.cover.size(), {});
  pop.constraints.assign(pop.cover.size(), {});
  if (j.contains("objectives")) {
    for (const auto& o : j.at("objectives")) {
      const auto i = clique_index(o, pop.cover);
      for (const auto& [alpha, c] : terms_from_json(o, pop.cover.clique(i).size())) {
        pop.objectives[i][alpha] += c;
      }
    }
  }
  if (j.contains("constraints")) {
    for (const auto& g : j.at("constraints")) {
      const auto i = clique_index(g, pop.cover);
      pop.constraints[i].push_back(
          ConstraintPolynomial{i, terms_from_json(g, pop.cover.clique(i).size())});
    }
  }
  pop.validate();
  return pop;
}

json pop_to_json(const PopProblem& pop) {
  json j;
  cover_to_json(pop.cover, j);
  json objectives = json::array();
  json constraints = json::array();
  for (std::size_t i = 0; i < pop.cover.size(); ++i) {
    if (!pop.objectives[i].empty()) {
      objectives.push_back({{"clique", i + 1}, {"terms", terms_to_json(pop.objectives[i])}});
    }
    for (const auto& g : pop.constraints[i]) {
      constraints.push_back({{"clique", i + 1}, {"terms", terms_to_json(g.coefficients)}});
    }
  }
  j["objectives"] = std::move(objectives);
  j["constraints"] = std::move(constraints);
  return j;
}

AtomicMeasure measure_from_json(const json& j) {
  AtomicMeasure mu;
  for (int v : field<std::vector<int>>(j, "variables")) {
    if (v < 1) throw Error(ErrorCode::InvalidInput, "variables are 1-based");
    mu.variables.push_back(static_cast<std::size_t>(v - 1));
  }
  mu.atoms = field<std::vector<Point>>(j, "atoms");
  mu.weights = field<std::vector<double>>(j, "weights");
  if (mu.atoms.size() != mu.weights.size()) {
    throw Error(ErrorCode::InvalidInput, "one weight per atom required");
  }
  for (const auto& a : mu.atoms) {
    if (a.size() != mu.variables.size()) {
      throw Error(ErrorCode::InvalidInput, "atom length differs from variable count");
    }
  }
  return mu;
}

json measure_to_json(const AtomicMeasure& mu) {
  return {{"variables", one_based(mu.variables)}, {"atoms", mu.atoms}, {"weights", mu.weights}};
}

json rip_to_json(const RipCheck& check) {
  json j;
  j["ok"] = check.ok();
  j["order"] = one_based(check.witnesses.order);
  json w = json::array();
  for (const auto& list : check.witnesses.witness) w.push_back(one_based(list));
  j["witnesses"] = std::move(w);
  j["fails_at"] = check.fails_at ? json(*check.fails_at + 1) : json(nullptr);
  return j;
}

json certificate_to_json(const FlatnessCertificate& cert, const CliqueCover& cover) {
  json j;
  j["verdict"] = cert.verdict;
  j["order"] = one_based(cert.order);
  j["rank_lower_bound"] = cert.rank_lower_bound;
  json cliques = json::array();
  for (const auto& c : cert.cliques) {
    json e;
    e["clique"] = c.clique + 1;
    e["variables"] = one_based(cover.clique(c.clique));
    e["d"] = c.d_half;
    e["psd_moment"] = c.psd_moment;
    e["psd_localizing"] = c.psd_localizing;
    e["moment_eigen"] = {{"min", c.moment_eigen.min}, {"max", c.moment_eigen.max}};
    e["localizing_eigen"] =
        c.localizing_eigen
            ? json{{"min", c.localizing_eigen->min}, {"max", c.localizing_eigen->max}}
            : json(nullptr);
    e["full"] = rank_to_json(c.full);
    e["shifted"] = rank_to_json(c.shifted);
    e["flat"] = c.flat;
    cliques.push_back(std::move(e));
  }
  j["cliques"] = std::move(cliques);
  json overlaps = json::array();
  for (const auto& o : cert.overlaps) {
    json e;
    e["position"] = o.position + 1;
    e["clique"] = cert.order[o.position] + 1;
    e["witness_position"] = o.witness ? json(*o.witness + 1) : json(nullptr);
    e["witness_clique"] = o.witness ? json(cert.order[*o.witness] + 1) : json(nullptr);
    std::vector<int> tried;
    for (auto t : o.tried) tried.push_back(static_cast<int>(t) + 1);
    e["tried_positions"] = tried;
    e["full"] = rank_to_json(o.full);
    e["shifted"] = rank_to_json(o.shifted);
    e["flat"] = o.flat;
    overlaps.push_back(std::move(e));
  }
  j["overlaps"] = std::move(overlaps);
  return j;
}

json solve_report_to_json(const SolveReport& r, bool include_moments) {
  json j;
  j["source"] = r.source;
  j["objective"] = finite_or_null(r.objective);
  j["converged"] = r.converged;
  j["iterations"] = r.iterations;
  j["primal_residual"] = finite_or_null(r.primal_residual);
  j["dual_residual"] = finite_or_null(r.dual_residual);
  j["psd_residual"] = finite_or_null(r.psd_residual);
  if (include_moments && r.y) j["moments"] = moments_to_json(*r.y);
  return j;
}

json read_json_file(const std::filesystem::path& path) {
  const auto text = read_text_file(path);
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, path.string() + ": " + e.what());
  }
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::InvalidInput, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::InvalidInput, "cannot write " + path.string());
  out << text;
}

}  // namespace smk::io
