#pragma once

// Sparse moment relaxation of a clique-structured polynomial program:
// building the semidefinite program, SDPA sparse text in and out, ingesting
// solver output, a bundled first-order solver and the end-to-end pipeline.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "smk/assemble.hpp"
#include "smk/certify.hpp"
#include "smk/core.hpp"
#include "smk/extract.hpp"
#include "smk/matrices.hpp"

namespace smk {

/// minimize sum_i f_i(x on clique i) subject to g >= 0 for every g attached
/// to a clique. Objective and constraint coefficients use local exponents of
/// their clique.
struct PopProblem {
  CliqueCover cover;
  std::vector<Polynomial> objectives;                         ///< per clique
  std::vector<std::vector<ConstraintPolynomial>> constraints;  ///< per clique

  /// Throws InvalidInput on size or clique-index inconsistencies.
  void validate() const;
  /// Largest degree among objectives and constraints.
  int degree() const;
  /// The objective summed over cliques, in global exponents.
  Polynomial global_objective() const;
  double objective_at(std::span<const double> x) const;
  /// Smallest g(x) over all constraints (+inf without constraints).
  double min_constraint_at(std::span<const double> x) const;
};

enum class BlockKind { Moment, Localizing };

/// Coefficient of variable `var` at matrix position (row, col), row <= col.
struct BlockEntry {
  int row = 0;
  int col = 0;
  std::size_t var = 0;
  double coef = 0.0;

  friend bool operator==(const BlockEntry&, const BlockEntry&) = default;
};

/// Affine symmetric matrix sum_v coef * y_v; entries sorted by (var, row, col).
struct SdpBlock {
  BlockKind kind = BlockKind::Moment;
  std::size_t clique = 0;
  std::size_t constraint = 0;  ///< index within the clique (localizing only)
  int dim = 0;
  std::vector<BlockEntry> entries;

  Eigen::MatrixXd evaluate(const Eigen::VectorXd& y) const;
  friend bool operator==(const SdpBlock&, const SdpBlock&) = default;
};

/// minimize objective . y over y with y_0 = 1 and every block PSD.
/// `variables[0]` is the zero exponent; `objective[0]` is the constant term.
struct SdpInstance {
  CliqueCover cover;
  int omega = 0;
  std::vector<MultiIndex> variables;
  std::vector<double> objective;
  std::vector<SdpBlock> blocks;

  std::size_t num_variables() const { return variables.size(); }
  std::vector<int> block_sizes() const;
  double objective_value(const SparseMomentVector& y) const;
  /// Moment vector over `variables` (canonical order), y_0 included.
  Eigen::VectorXd to_vector(const SparseMomentVector& y) const;
  SparseMomentVector from_vector(const Eigen::VectorXd& values) const;

  friend bool operator==(const SdpInstance&, const SdpInstance&) = default;
};

/// One moment block per clique, then, clique by clique, one localizing block
/// per constraint. Throws DegreeTooLow unless 2*omega >= max(1, degree).
SdpInstance build_relaxation(const PopProblem& pop, int omega);

/// SDPA sparse format with y_0 eliminated: min c.x s.t. sum_i F_i x_i - F_0 PSD
/// over the free coordinates x_i = y_{variables[i]}. Comment lines starting
/// with '*' carry the cover, order, objective constant and block kinds.
std::string emit_sdpa(const SdpInstance& instance);
/// Inverse of emit_sdpa. Throws ParseError.
SdpInstance parse_sdpa(std::string_view text);

struct IngestResult {
  SparseMomentVector y;
  std::vector<std::string> warnings;  ///< "BlockNotPsd: ..." entries
};

/// Free coordinates x (length num_variables() - 1) to y with y_0 = 1.
/// Throws DimensionMismatch; PSD failures become warnings.
IngestResult ingest_solution(const SdpInstance& instance, const Eigen::VectorXd& free,
                             const RankPolicy& policy = {});
/// Same checks for a full moment vector (from a moment file).
IngestResult ingest_solution(const SdpInstance& instance, const SparseMomentVector& y,
                             const RankPolicy& policy = {});
/// Whitespace separated numbers. Throws ParseError.
Eigen::VectorXd parse_primal_vector(std::string_view text);

struct SolveReport {
  std::optional<SparseMomentVector> y;
  double objective = 0.0;
  int iterations = 0;
  double primal_residual = 0.0;  ///< consensus gap between blocks and y
  double dual_residual = 0.0;
  double psd_residual = 0.0;     ///< max over blocks of max(0, -lambda_min)
  bool converged = false;
  std::string source;  ///< "bundled" or "external"
};

struct AdmmOptions {
  int max_iterations = 20000;
  double tol = 1e-8;
  double rho = 1.0;
};

/// Operator splitting: least-squares y step with y_0 = 1, PSD projection of
/// each block, scaled dual update, adaptive penalty. Never throws on
/// non-convergence; the report carries `converged = false`.
SolveReport solve_sdp_bundled(const SdpInstance& instance, const AdmmOptions& options = {});

struct PipelineResult {
  SolveReport solve;
  std::optional<RipWitnesses> rip;
  std::optional<FlatnessCertificate> certificate;
  std::vector<AtomicMeasure> clique_measures;  ///< by original clique
  std::optional<AtomicMeasure> measure;
  double global_residual = 0.0;
  std::vector<FeasibilityReport> feasibility;  ///< per clique
  bool verdict() const { return certificate && certificate->verdict && measure; }
};

struct PipelineOptions {
  RankPolicy policy;
  std::uint64_t seed = 42;
  ExtractOptions extract;
  AssemblyTolerances assembly;
  AdmmOptions admm;
};

/// Solves (or takes `solution`), optionally rounds, certifies, and when the
/// certificate holds extracts, assembles and checks the minimizers.
PipelineResult pipeline(const PopProblem& pop, int omega, const PipelineOptions& options,
                        const std::optional<SparseMomentVector>& solution = std::nullopt);

}  // namespace smk
