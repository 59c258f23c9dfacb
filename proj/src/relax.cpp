#include "smk/relax.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>
#include <tuple>

#include <Eigen/Eigenvalues>
#include <Eigen/SparseCholesky>

#include "smk/error.hpp"
#include "smk/rip.hpp"

namespace smk {

// ---------------------------------------------------------------- problem

void PopProblem::validate() const {
  if (objectives.size() != cover.size() || constraints.size() != cover.size()) {
    throw Error(ErrorCode::InvalidInput,
                "objectives and constraints need one entry per clique");
  }
  for (std::size_t i = 0; i < cover.size(); ++i) {
    const auto width = cover.clique(i).size();
    for (const auto& [alpha, c] : objectives[i]) {
      if (alpha.size() != width) {
        throw Error(ErrorCode::InvalidInput,
                    "objective term of clique " + std::to_string(i + 1) +
                        " has the wrong number of exponents");
      }
    }
    for (const auto& g : constraints[i]) {
      if (g.clique != i) {
        throw Error(ErrorCode::InvalidInput, "constraint filed under the wrong clique");
      }
      for (const auto& [alpha, c] : g.coefficients) {
        if (alpha.size() != width) {
          throw Error(ErrorCode::InvalidInput,
                      "constraint term of clique " + std::to_string(i + 1) +
                          " has the wrong number of exponents");
        }
      }
    }
  }
}

int PopProblem::degree() const {
  int d = 0;
  for (const auto& f : objectives) d = std::max(d, smk::degree(f));
  for (const auto& gs : constraints) {
    for (const auto& g : gs) d = std::max(d, g.degree());
  }
  return d;
}

Polynomial PopProblem::global_objective() const {
  Polynomial out;
  for (std::size_t i = 0; i < cover.size(); ++i) {
    for (const auto& [alpha, c] : objectives[i]) {
      out[embed(alpha, cover.clique(i), cover.n())] += c;
    }
  }
  return out;
}

namespace {

Point restrict_to(std::span<const double> x, const std::vector<std::size_t>& vars) {
  Point z;
  for (auto var : vars) z.push_back(x[var]);
  return z;
}

}  // namespace

double PopProblem::objective_at(std::span<const double> x) const {
  double s = 0.0;
  for (std::size_t i = 0; i < cover.size(); ++i) {
    s += evaluate(objectives[i], restrict_to(x, cover.clique(i)));
  }
  return s;
}

double PopProblem::min_constraint_at(std::span<const double> x) const {
  double lowest = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < cover.size(); ++i) {
    const Point z = restrict_to(x, cover.clique(i));
    for (const auto& g : constraints[i]) lowest = std::min(lowest, g(z));
  }
  return lowest;
}

// ---------------------------------------------------------------- instance

Eigen::MatrixXd SdpBlock::evaluate(const Eigen::VectorXd& y) const {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(dim, dim);
  for (const auto& e : entries) {
    m(e.row, e.col) += e.coef * y(static_cast<Eigen::Index>(e.var));
  }
  for (int r = 0; r < dim; ++r) {
    for (int c = r + 1; c < dim; ++c) m(c, r) = m(r, c);
  }
  return m;
}

std::vector<int> SdpInstance::block_sizes() const {
  std::vector<int> out;
  for (const auto& b : blocks) out.push_back(b.dim);
  return out;
}

Eigen::VectorXd SdpInstance::to_vector(const SparseMomentVector& y) const {
  if (!(y.cover() == cover) || y.omega() != omega) {
    throw Error(ErrorCode::DimensionMismatch, "moment vector belongs to another relaxation");
  }
  Eigen::VectorXd v(static_cast<Eigen::Index>(variables.size()));
  for (std::size_t k = 0; k < variables.size(); ++k) {
    v(static_cast<Eigen::Index>(k)) = y.at(variables[k]);
  }
  return v;
}

SparseMomentVector SdpInstance::from_vector(const Eigen::VectorXd& values) const {
  if (values.size() != static_cast<Eigen::Index>(variables.size())) {
    throw Error(ErrorCode::DimensionMismatch, "moment vector length differs");
  }
  SparseMomentVector::Entries e;
  for (std::size_t k = 0; k < variables.size(); ++k) {
    e.emplace(variables[k], values(static_cast<Eigen::Index>(k)));
  }
  return SparseMomentVector(cover, omega, std::move(e));
}

double SdpInstance::objective_value(const SparseMomentVector& y) const {
  const Eigen::VectorXd v = to_vector(y);
  double s = 0.0;
  for (std::size_t k = 0; k < objective.size(); ++k) {
    s += objective[k] * v(static_cast<Eigen::Index>(k));
  }
  return s;
}

namespace {

using EntryKey = std::tuple<std::size_t, int, int>;  // var, row, col

std::vector<BlockEntry> to_entries(const std::map<EntryKey, double>& acc) {
  std::vector<BlockEntry> out;
  for (const auto& [key, coef] : acc) {
    if (coef == 0.0) continue;
    out.push_back({std::get<1>(key), std::get<2>(key), std::get<0>(key), coef});
  }
  return out;
}

void sort_entries(std::vector<BlockEntry>& entries) {
  std::sort(entries.begin(), entries.end(), [](const BlockEntry& a, const BlockEntry& b) {
    return std::tie(a.var, a.row, a.col) < std::tie(b.var, b.row, b.col);
  });
}

}  // namespace

SdpInstance build_relaxation(const PopProblem& pop, int omega) {
  pop.validate();
  const int deg = pop.degree();
  if (omega < 1 || 2 * omega < std::max(1, deg)) {
    throw Error(ErrorCode::DegreeTooLow,
                "order " + std::to_string(omega) + " is too low for degree " +
                    std::to_string(deg));
  }
  const auto& cover = pop.cover;
  SdpInstance inst;
  inst.cover = cover;
  inst.omega = omega;
  inst.variables = sparse_exponents(cover, 2 * omega);
  std::map<MultiIndex, std::size_t> index;
  for (std::size_t k = 0; k < inst.variables.size(); ++k) index.emplace(inst.variables[k], k);

  inst.objective.assign(inst.variables.size(), 0.0);
  for (const auto& [alpha, c] : pop.global_objective()) {
    inst.objective[index.at(alpha)] += c;
  }

  auto block_for = [&](std::size_t i, const Polynomial& weight, int label_degree) {
    const auto& vars = cover.clique(i);
    const auto labels = dense_exponents(vars.size(), label_degree);
    std::map<EntryKey, double> acc;
    for (std::size_t r = 0; r < labels.size(); ++r) {
      for (std::size_t c = r; c < labels.size(); ++c) {
        for (const auto& [gamma, coef] : weight) {
          const auto global = embed(labels[r] + labels[c] + gamma, vars, cover.n());
          acc[{index.at(global), static_cast<int>(r), static_cast<int>(c)}] += coef;
        }
      }
    }
    SdpBlock b;
    b.clique = i;
    b.dim = static_cast<int>(labels.size());
    b.entries = to_entries(acc);
    return b;
  };

  for (std::size_t i = 0; i < cover.size(); ++i) {
    const Polynomial one{{MultiIndex::zero(cover.clique(i).size()), 1.0}};
    inst.blocks.push_back(block_for(i, one, omega));
  }
  for (std::size_t i = 0; i < cover.size(); ++i) {
    const int shift = d_half(pop.constraints[i]);
    for (std::size_t j = 0; j < pop.constraints[i].size(); ++j) {
      auto b = block_for(i, pop.constraints[i][j].coefficients, omega - shift);
      b.kind = BlockKind::Localizing;
      b.constraint = j;
      inst.blocks.push_back(std::move(b));
    }
  }
  return inst;
}

// ---------------------------------------------------------------- SDPA

std::string emit_sdpa(const SdpInstance& inst) {
  std::ostringstream os;
  os << "* sparse moment relaxation, y_0 eliminated\n";
  os << "* n " << inst.cover.n() << '\n';
  os << "* omega " << inst.omega << '\n';
  os << "* cliques";
  const auto one_based = inst.cover.to_one_based();
  for (std::size_t i = 0; i < one_based.size(); ++i) {
    os << (i ? " ;" : "");
    for (int v : one_based[i]) os << ' ' << v;
  }
  os << '\n';
  os << "* constant " << format_double(inst.objective.empty() ? 0.0 : inst.objective[0])
     << '\n';
  for (std::size_t b = 0; b < inst.blocks.size(); ++b) {
    const auto& blk = inst.blocks[b];
    os << "* block " << b + 1 << ' '
       << (blk.kind == BlockKind::Moment ? "moment" : "localizing") << ' ' << blk.clique + 1;
    if (blk.kind == BlockKind::Localizing) os << ' ' << blk.constraint + 1;
    os << '\n';
  }
  os << inst.variables.size() - 1 << " = mDIM\n";
  os << inst.blocks.size() << " = nBLOCK\n";
  for (std::size_t b = 0; b < inst.blocks.size(); ++b) {
    os << (b ? " " : "") << inst.blocks[b].dim;
  }
  os << " = bLOCKsTRUCT\n";
  for (std::size_t k = 1; k < inst.objective.size(); ++k) {
    os << (k > 1 ? " " : "") << format_double(inst.objective[k]);
  }
  os << '\n';

  std::vector<std::tuple<std::size_t, std::size_t, int, int, double>> lines;
  for (std::size_t b = 0; b < inst.blocks.size(); ++b) {
    for (const auto& e : inst.blocks[b].entries) {
      lines.emplace_back(e.var, b, e.row, e.col, e.var == 0 ? -e.coef : e.coef);
    }
  }
  std::sort(lines.begin(), lines.end(), [](const auto& a, const auto& b) {
    return std::tie(std::get<0>(a), std::get<1>(a), std::get<2>(a), std::get<3>(a)) <
           std::tie(std::get<0>(b), std::get<1>(b), std::get<2>(b), std::get<3>(b));
  });
  for (const auto& [var, b, r, c, v] : lines) {
    os << var << ' ' << b + 1 << ' ' << r + 1 << ' ' << c + 1 << ' ' << format_double(v)
       << '\n';
  }
  return os.str();
}

namespace {

std::vector<std::string> tokens(std::string_view line) {
  std::string cleaned(line);
  for (char& ch : cleaned) {
    if (ch == ',' || ch == '{' || ch == '}' || ch == '(' || ch == ')') ch = ' ';
  }
  std::istringstream is(cleaned);
  std::vector<std::string> out;
  for (std::string t; is >> t;) out.push_back(t);
  return out;
}

long parse_int(const std::string& t) {
  std::size_t used = 0;
  long v = 0;
  try {
    v = std::stol(t, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != t.size()) throw Error(ErrorCode::ParseError, "not an integer: '" + t + "'");
  return v;
}

}  // namespace

SdpInstance parse_sdpa(std::string_view text) {
  std::istringstream is{std::string(text)};
  std::optional<std::size_t> n;
  std::optional<int> omega;
  std::vector<std::vector<int>> cliques;
  double constant = 0.0;
  std::vector<SdpBlock> kinds;
  std::vector<std::vector<std::string>> body;

  for (std::string line; std::getline(is, line);) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '*' || line[0] == '"') {
      auto t = tokens(std::string_view(line).substr(1));
      if (t.empty()) continue;
      if (t[0] == "n" && t.size() == 2) {
        n = static_cast<std::size_t>(parse_int(t[1]));
      } else if (t[0] == "omega" && t.size() == 2) {
        omega = static_cast<int>(parse_int(t[1]));
      } else if (t[0] == "cliques") {
        cliques.emplace_back();
        for (std::size_t k = 1; k < t.size(); ++k) {
          if (t[k] == ";") {
            cliques.emplace_back();
          } else {
            cliques.back().push_back(static_cast<int>(parse_int(t[k])));
          }
        }
      } else if (t[0] == "constant" && t.size() == 2) {
        constant = parse_double(t[1]);
      } else if (t[0] == "block" && t.size() >= 4) {
        SdpBlock b;
        const auto pos = static_cast<std::size_t>(parse_int(t[1]));
        if (pos != kinds.size() + 1) throw Error(ErrorCode::ParseError, "block comments out of order");
        b.clique = static_cast<std::size_t>(parse_int(t[3]) - 1);
        if (t[2] == "moment") {
          b.kind = BlockKind::Moment;
        } else if (t[2] == "localizing" && t.size() == 5) {
          b.kind = BlockKind::Localizing;
          b.constraint = static_cast<std::size_t>(parse_int(t[4]) - 1);
        } else {
          throw Error(ErrorCode::ParseError, "unknown block kind '" + t[2] + "'");
        }
        kinds.push_back(b);
      }
      continue;
    }
    auto t = tokens(line);
    if (!t.empty()) body.push_back(std::move(t));
  }
  if (!n || !omega || cliques.empty()) {
    throw Error(ErrorCode::ParseError, "missing n, omega or cliques header comment");
  }
  if (body.size() < 4) throw Error(ErrorCode::ParseError, "truncated SDPA data");

  SdpInstance inst;
  try {
    inst.cover = CliqueCover::from_one_based(*n, cliques);
  } catch (const Error& e) {
    throw Error(ErrorCode::ParseError, std::string("bad cover header: ") + e.what());
  }
  inst.omega = *omega;
  inst.variables = sparse_exponents(inst.cover, 2 * inst.omega);

  const auto mdim = static_cast<std::size_t>(parse_int(body[0][0]));
  if (mdim + 1 != inst.variables.size()) {
    throw Error(ErrorCode::ParseError, "mDIM does not match the cover and order");
  }
  const auto nblock = static_cast<std::size_t>(parse_int(body[1][0]));
  if (kinds.size() != nblock) throw Error(ErrorCode::ParseError, "block comments missing");
  if (body[2].size() < nblock) throw Error(ErrorCode::ParseError, "short block structure");
  for (std::size_t b = 0; b < nblock; ++b) {
    const long dim = parse_int(body[2][b]);
    if (dim <= 0) throw Error(ErrorCode::ParseError, "only positive block sizes supported");
    kinds[b].dim = static_cast<int>(dim);
  }
  if (body[3].size() != mdim) throw Error(ErrorCode::ParseError, "cost vector length");
  inst.objective.push_back(constant);
  for (const auto& t : body[3]) inst.objective.push_back(parse_double(t));

  for (std::size_t l = 4; l < body.size(); ++l) {
    const auto& t = body[l];
    if (t.size() != 5) throw Error(ErrorCode::ParseError, "matrix entry needs 5 fields");
    const auto var = static_cast<std::size_t>(parse_int(t[0]));
    const auto b = parse_int(t[1]);
    const auto r = parse_int(t[2]);
    const auto c = parse_int(t[3]);
    const double v = parse_double(t[4]);
    if (var > mdim || b < 1 || static_cast<std::size_t>(b) > nblock) {
      throw Error(ErrorCode::ParseError, "matrix entry index out of range");
    }
    auto& blk = kinds[static_cast<std::size_t>(b - 1)];
    if (r < 1 || c < r || c > blk.dim) {
      throw Error(ErrorCode::ParseError, "matrix entry outside the upper triangle");
    }
    blk.entries.push_back({static_cast<int>(r - 1), static_cast<int>(c - 1), var,
                           var == 0 ? -v : v});
  }
  for (auto& blk : kinds) sort_entries(blk.entries);
  inst.blocks = std::move(kinds);
  return inst;
}

// ---------------------------------------------------------------- ingest

namespace {

std::string describe_block(const SdpInstance& inst, std::size_t b) {
  const auto& blk = inst.blocks[b];
  std::string s = "block " + std::to_string(b + 1) + " (";
  s += blk.kind == BlockKind::Moment ? "moment" : "localizing";
  s += ", clique " + std::to_string(blk.clique + 1) + ")";
  return s;
}

double block_psd_violation(const Eigen::MatrixXd& m) {
  if (m.rows() == 0) return 0.0;
  const auto ext = eigen_extremes(m);
  return std::max(0.0, -ext.min);
}

}  // namespace

IngestResult ingest_solution(const SdpInstance& inst, const SparseMomentVector& y,
                             const RankPolicy& policy) {
  const Eigen::VectorXd v = inst.to_vector(y);
  IngestResult out{y, {}};
  for (std::size_t b = 0; b < inst.blocks.size(); ++b) {
    const Eigen::MatrixXd m = inst.blocks[b].evaluate(v);
    if (!psd_check(m, policy)) {
      out.warnings.push_back("BlockNotPsd: " + describe_block(inst, b) +
                             " has eigenvalue " + format_double(eigen_extremes(m).min));
    }
  }
  return out;
}

IngestResult ingest_solution(const SdpInstance& inst, const Eigen::VectorXd& free,
                             const RankPolicy& policy) {
  const auto expected = static_cast<Eigen::Index>(inst.num_variables()) - 1;
  if (free.size() != expected) {
    throw Error(ErrorCode::DimensionMismatch,
                "expected " + std::to_string(expected) + " free coordinates, got " +
                    std::to_string(free.size()));
  }
  Eigen::VectorXd v(expected + 1);
  v << 1.0, free;
  return ingest_solution(inst, inst.from_vector(v), policy);
}

Eigen::VectorXd parse_primal_vector(std::string_view text) {
  std::vector<double> vals;
  for (const auto& t : tokens(text)) vals.push_back(parse_double(t));
  return Eigen::Map<Eigen::VectorXd>(vals.data(), static_cast<Eigen::Index>(vals.size()));
}

// ---------------------------------------------------------------- ADMM

SolveReport solve_sdp_bundled(const SdpInstance& inst, const AdmmOptions& options) {
  using SpMat = Eigen::SparseMatrix<double>;
  const auto nv = static_cast<Eigen::Index>(inst.num_variables());
  const double root2 = std::sqrt(2.0);

  // Stack the upper triangles of all blocks, off-diagonals scaled by sqrt 2
  // so that Euclidean norms of stacked vectors are Frobenius norms.
  std::vector<Eigen::Index> offset;
  Eigen::Index rows = 0;
  for (const auto& blk : inst.blocks) {
    offset.push_back(rows);
    rows += static_cast<Eigen::Index>(blk.dim) * (blk.dim + 1) / 2;
  }
  auto tri = [](int r, int c, int dim) {
    return static_cast<Eigen::Index>(r) * dim - static_cast<Eigen::Index>(r) * (r - 1) / 2 +
           (c - r);
  };
  std::vector<Eigen::Triplet<double>> trip;
  Eigen::VectorXd a0 = Eigen::VectorXd::Zero(rows);
  for (std::size_t b = 0; b < inst.blocks.size(); ++b) {
    const auto& blk = inst.blocks[b];
    for (const auto& e : blk.entries) {
      const double w = e.row == e.col ? 1.0 : root2;
      const Eigen::Index row = offset[b] + tri(e.row, e.col, blk.dim);
      if (e.var == 0) {
        a0(row) += w * e.coef;
      } else {
        trip.emplace_back(row, static_cast<Eigen::Index>(e.var) - 1, w * e.coef);
      }
    }
  }
  SpMat af(rows, nv - 1);
  af.setFromTriplets(trip.begin(), trip.end());
  const SpMat gram = SpMat(af.transpose() * af);
  Eigen::SimplicialLDLT<SpMat> ldlt(gram);
  SolveReport report;
  report.source = "bundled";
  if (ldlt.info() != Eigen::Success) {
    report.converged = false;
    report.primal_residual = std::numeric_limits<double>::infinity();
    return report;
  }
  Eigen::VectorXd cost(nv - 1);
  for (Eigen::Index k = 1; k < nv; ++k) cost(k - 1) = inst.objective[static_cast<std::size_t>(k)];

  auto unpack = [&](const Eigen::VectorXd& v, std::size_t b) {
    const int dim = inst.blocks[b].dim;
    Eigen::MatrixXd m(dim, dim);
    for (int r = 0; r < dim; ++r) {
      for (int c = r; c < dim; ++c) {
        const double x = v(offset[b] + tri(r, c, dim)) / (r == c ? 1.0 : root2);
        m(r, c) = x;
        m(c, r) = x;
      }
    }
    return m;
  };
  auto pack = [&](const Eigen::MatrixXd& m, std::size_t b, Eigen::VectorXd& v) {
    const int dim = inst.blocks[b].dim;
    for (int r = 0; r < dim; ++r) {
      for (int c = r; c < dim; ++c) {
        v(offset[b] + tri(r, c, dim)) = m(r, c) * (r == c ? 1.0 : root2);
      }
    }
  };
  auto project = [&](const Eigen::VectorXd& v) {
    Eigen::VectorXd out(rows);
    for (std::size_t b = 0; b < inst.blocks.size(); ++b) {
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(unpack(v, b));
      const Eigen::VectorXd lam = es.eigenvalues().cwiseMax(0.0);
      pack(es.eigenvectors() * lam.asDiagonal() * es.eigenvectors().transpose(), b, out);
    }
    return out;
  };

  double rho = options.rho;
  Eigen::VectorXd yf = Eigen::VectorXd::Zero(nv - 1);
  Eigen::VectorXd z = project(a0);
  Eigen::VectorXd u = Eigen::VectorXd::Zero(rows);
  Eigen::VectorXd ay = a0;
  for (int it = 1; it <= options.max_iterations; ++it) {
    yf = ldlt.solve(Eigen::VectorXd(af.transpose() * (z - u - a0)) - cost / rho);
    ay = a0 + af * yf;
    const Eigen::VectorXd z_prev = z;
    z = project(ay + u);
    u += ay - z;

    report.iterations = it;
    report.primal_residual = (ay - z).norm();
    report.dual_residual = rho * Eigen::VectorXd(af.transpose() * (z - z_prev)).norm();
    const double pri_scale = 1.0 + std::max(ay.norm(), z.norm());
    const double dual_scale = 1.0 + rho * Eigen::VectorXd(af.transpose() * u).norm();
    if (report.primal_residual <= options.tol * pri_scale &&
        report.dual_residual <= options.tol * dual_scale) {
      report.converged = true;
      break;
    }
    if (it % 25 == 0) {
      const double pri = report.primal_residual / pri_scale;
      const double dua = report.dual_residual / dual_scale;
      if (pri > 10.0 * dua) {
        rho *= 2.0;
        u /= 2.0;
      } else if (dua > 10.0 * pri) {
        rho /= 2.0;
        u *= 2.0;
      }
    }
  }

  Eigen::VectorXd full(nv);
  full << 1.0, yf;
  report.y = inst.from_vector(full);
  report.objective = inst.objective_value(*report.y);
  for (std::size_t b = 0; b < inst.blocks.size(); ++b) {
    report.psd_residual =
        std::max(report.psd_residual, block_psd_violation(inst.blocks[b].evaluate(full)));
  }
  return report;
}

// ---------------------------------------------------------------- pipeline

PipelineResult pipeline(const PopProblem& pop, int omega, const PipelineOptions& options,
                        const std::optional<SparseMomentVector>& solution) {
  options.policy.validate();
  const SdpInstance inst = build_relaxation(pop, omega);
  PipelineResult out;
  if (solution) {
    if (!(solution->cover() == pop.cover) || solution->omega() != omega) {
      throw Error(ErrorCode::DimensionMismatch,
                  "solution does not match the problem's cover and order");
    }
    out.solve.y = *solution;
    out.solve.source = "external";
    out.solve.converged = true;
    const Eigen::VectorXd v = inst.to_vector(*solution);
    for (const auto& blk : inst.blocks) {
      out.solve.psd_residual = std::max(out.solve.psd_residual, block_psd_violation(blk.evaluate(v)));
    }
  } else {
    out.solve = solve_sdp_bundled(inst, options.admm);
  }
  SparseMomentVector y = *out.solve.y;
  if (options.policy.round_decimals) {
    y = y.rounded(*options.policy.round_decimals);
    out.solve.y = y;
  }
  out.solve.objective = inst.objective_value(y);

  const auto order = find_rip_order(pop.cover);
  if (!order) return out;
  out.rip = check_rip(pop.cover, *order).witnesses;
  out.certificate = certify(y, pop.constraints, *out.rip, options.policy);
  if (!out.certificate->verdict) return out;

  out.clique_measures.resize(pop.cover.size());
  for (const auto& cf : out.certificate->cliques) {
    const auto m = moment_matrix(clique_subvector(y, cf.clique), omega);
    out.clique_measures[cf.clique] =
        extract_atoms(m, cf.full.rank, options.policy, options.seed,
                      pop.cover.clique(cf.clique), options.extract);
  }
  out.measure = assemble(out.clique_measures, pop.cover,
                         plan_from_certificate(*out.certificate), options.assembly);
  out.global_residual = verify_global(*out.measure, y);
  for (std::size_t i = 0; i < pop.cover.size(); ++i) {
    out.feasibility.push_back(
        constraint_feasibility_check(out.clique_measures[i], pop.constraints[i], 1e-6));
  }
  return out;
}

}  // namespace smk
