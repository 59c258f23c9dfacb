#include "smk/cli.hpp"

#include <cstdlib>
#include <filesystem>
#include <memory>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <spdlog/sinks/ostream_sink.h>
#include <spdlog/spdlog.h>

#include "smk/altmeasure.hpp"
#include "smk/assemble.hpp"
#include "smk/certify.hpp"
#include "smk/error.hpp"
#include "smk/extract.hpp"
#include "smk/io.hpp"
#include "smk/relax.hpp"
#include "smk/rip.hpp"

namespace smk::cli {

namespace {

using io::json;
namespace fs = std::filesystem;

struct Config {
  double rel_tol = 1e-6;
  std::optional<int> round;
  std::uint64_t seed = 42;
  double merge_tol = 1e-6;
  bool allow_missing = false;
  std::string output;

  std::string input;
  std::string constraints;
  std::string pop;
  std::string solution;
  std::string sdpa;
  std::string dump_dir;
  std::string cost;
  std::vector<int> order;
  int omega = 0;
  int max_iters = 20000;
  double solver_tol = 1e-8;

  RankPolicy policy() const {
    RankPolicy p;
    p.rel_tol = rel_tol;
    p.round_decimals = round;
    p.validate();
    return p;
  }
};

// Outcome of a subcommand: the report body and the exit code it implies.
struct Outcome {
  json report;
  int code = kExitOk;
};

std::shared_ptr<spdlog::logger> make_logger(std::ostream& err) {
  auto sink = std::make_shared<spdlog::sinks::ostream_sink_mt>(err, true);
  auto logger = std::make_shared<spdlog::logger>("smk", sink);
  logger->set_pattern("[%l] %v");
  const char* level = std::getenv("SMK_LOG");
  logger->set_level(level ? spdlog::level::from_str(level) : spdlog::level::warn);
  return logger;
}

SparseMomentVector load_moments(const Config& cfg) {
  return io::moments_from_json(io::read_json_file(cfg.input), cfg.allow_missing);
}

std::vector<std::vector<ConstraintPolynomial>> load_constraints(const Config& cfg,
                                                                const CliqueCover& cover) {
  if (cfg.constraints.empty()) return std::vector<std::vector<ConstraintPolynomial>>(cover.size());
  auto pop = io::pop_from_json(io::read_json_file(cfg.constraints));
  if (!(pop.cover == cover)) {
    throw Error(ErrorCode::InvalidInput, "constraint file uses a different clique cover");
  }
  return pop.constraints;
}

std::vector<std::size_t> zero_based_order(const std::vector<int>& order, std::size_t m) {
  std::vector<std::size_t> out;
  for (int k : order) {
    if (k < 1 || static_cast<std::size_t>(k) > m) {
      throw Error(ErrorCode::InvalidInput, "order entry " + std::to_string(k) + " out of range");
    }
    out.push_back(static_cast<std::size_t>(k - 1));
  }
  return out;
}

// The RIP order to certify under: the user's, else a discovered one.
std::optional<RipCheck> resolve_order(const Config& cfg, const CliqueCover& cover) {
  if (!cfg.order.empty()) return check_rip(cover, zero_based_order(cfg.order, cover.size()));
  const auto found = find_rip_order(cover);
  if (!found) return std::nullopt;
  return check_rip(cover, *found);
}

json no_order_report(const CliqueCover& cover) {
  json j;
  j["status"] = "NoOrderExists";
  j["natural_order_check"] = io::rip_to_json(check_rip(cover));
  return j;
}

struct Certified {
  RipCheck rip;
  FlatnessCertificate certificate;
};

std::vector<AtomicMeasure> extract_cliques(const SparseMomentVector& y,
                                           const FlatnessCertificate& cert,
                                           const Config& cfg, const RankPolicy& policy) {
  ExtractOptions opts;
  opts.merge_tol = cfg.merge_tol;
  std::vector<AtomicMeasure> out(y.cover().size());
  for (const auto& c : cert.cliques) {
    const auto m = moment_matrix(clique_subvector(y, c.clique), y.omega());
    out[c.clique] =
        extract_atoms(m, c.full.rank, policy, cfg.seed, y.cover().clique(c.clique), opts);
  }
  return out;
}

void dump_matrices(const fs::path& dir, const SparseMomentVector& y,
                   const std::vector<std::vector<ConstraintPolynomial>>& constraints,
                   const FlatnessCertificate& cert) {
  fs::create_directories(dir);
  for (const auto& c : cert.cliques) {
    const auto sub = clique_subvector(y, c.clique);
    const auto tag = std::to_string(c.clique + 1);
    io::write_text_file(dir / ("clique" + tag + "_moment.csv"),
                        to_csv(moment_matrix(sub, y.omega())));
    const auto loc = localizing_block(sub, constraints[c.clique], y.omega());
    for (std::size_t k = 0; k < loc.blocks.size(); ++k) {
      io::write_text_file(dir / ("clique" + tag + "_localizing" + std::to_string(k + 1) + ".csv"),
                          to_csv(loc.blocks[k]));
    }
  }
  for (const auto& o : cert.overlaps) {
    if (!o.witness) continue;
    const auto i = cert.order[o.position];
    const auto j = cert.order[*o.witness];
    io::write_text_file(
        dir / ("overlap" + std::to_string(i + 1) + "_" + std::to_string(j + 1) + ".csv"),
        to_csv(overlap_moment_matrix(y, i, j, y.omega())));
  }
}

// ------------------------------------------------------------ subcommands

Outcome cmd_rip(const Config& cfg, spdlog::logger& log) {
  const auto cover = io::cover_from_json(io::read_json_file(cfg.input));
  Outcome o;
  if (!cfg.order.empty()) {
    const auto check = check_rip(cover, zero_based_order(cfg.order, cover.size()));
    o.report = io::rip_to_json(check);
    o.report["status"] = check.ok() ? "ok" : "OrderFails";
    o.code = check.ok() ? kExitOk : kExitVerdictFalse;
    return o;
  }
  const auto found = find_rip_order(cover);
  if (!found) {
    log.info("no clique order satisfies the running intersection property");
    o.report = no_order_report(cover);
    o.code = kExitVerdictFalse;
    return o;
  }
  o.report = io::rip_to_json(check_rip(cover, *found));
  o.report["status"] = "ok";
  return o;
}

Outcome cmd_certify(const Config& cfg, spdlog::logger& log) {
  const auto y = load_moments(cfg);
  const auto policy = cfg.policy();
  const auto constraints = load_constraints(cfg, y.cover());
  Outcome o;
  const auto rip = resolve_order(cfg, y.cover());
  if (!rip || !rip->ok()) {
    o.report = rip ? io::rip_to_json(*rip) : no_order_report(y.cover());
    o.report["status"] = rip ? "OrderFails" : "NoOrderExists";
    o.report["verdict"] = false;
    o.code = kExitVerdictFalse;
    return o;
  }
  const auto cert = certify(y, constraints, rip->witnesses, policy);
  log.info("certificate verdict: {}", cert.verdict);
  if (!cfg.dump_dir.empty()) dump_matrices(cfg.dump_dir, y, constraints, cert);
  o.report = io::certificate_to_json(cert, y.cover());
  o.report["status"] = "ok";
  o.code = cert.verdict ? kExitOk : kExitVerdictFalse;
  return o;
}

Outcome cmd_extract_assemble(const Config& cfg, spdlog::logger& log) {
  const auto y = load_moments(cfg);
  const auto policy = cfg.policy();
  const auto constraints = load_constraints(cfg, y.cover());
  Outcome o;
  const auto rip = resolve_order(cfg, y.cover());
  if (!rip || !rip->ok()) {
    o.report = rip ? io::rip_to_json(*rip) : no_order_report(y.cover());
    o.report["status"] = rip ? "OrderFails" : "NoOrderExists";
    o.code = kExitVerdictFalse;
    return o;
  }
  const auto cert = certify(y, constraints, rip->witnesses, policy);
  o.report["certificate"] = io::certificate_to_json(cert, y.cover());
  if (!cert.verdict) {
    o.report["status"] = "NotFlat";
    o.code = kExitVerdictFalse;
    return o;
  }
  const auto measures = extract_cliques(y, cert, cfg, policy);
  json cm = json::array();
  for (const auto& mu : measures) cm.push_back(io::measure_to_json(mu));
  o.report["clique_measures"] = std::move(cm);
  AssemblyTolerances tol;
  tol.point_tol = cfg.merge_tol;
  const auto mu = assemble(measures, y.cover(), plan_from_certificate(cert), tol);
  log.info("assembled {} atoms", mu.size());
  o.report["measure"] = io::measure_to_json(mu);
  o.report["global_residual"] = verify_global(mu, y);
  o.report["maximal_support_set"] = maximal_support_set(measures, y.cover(), cfg.merge_tol);
  json feas = json::array();
  for (std::size_t i = 0; i < measures.size(); ++i) {
    const auto rep = constraint_feasibility_check(measures[i], constraints[i], 1e-6);
    feas.push_back({{"clique", i + 1}, {"values", rep.values}, {"clean", rep.clean()}});
  }
  o.report["constraint_values"] = std::move(feas);
  o.report["status"] = "ok";
  return o;
}

Outcome cmd_altmeasure(const Config& cfg, spdlog::logger& log) {
  const auto y = load_moments(cfg);
  const auto policy = cfg.policy();
  const auto constraints = load_constraints(cfg, y.cover());
  Outcome o;
  const auto rip = resolve_order(cfg, y.cover());
  if (!rip || !rip->ok()) {
    o.report = no_order_report(y.cover());
    o.code = kExitVerdictFalse;
    return o;
  }
  const auto cert = certify(y, constraints, rip->witnesses, policy);
  if (!cert.verdict) {
    o.report["status"] = "NotFlat";
    o.report["certificate"] = io::certificate_to_json(cert, y.cover());
    o.code = kExitVerdictFalse;
    return o;
  }
  const auto measures = extract_cliques(y, cert, cfg, policy);
  const auto atoms = maximal_support_set(measures, y.cover(), cfg.merge_tol);
  o.report["atoms"] = atoms;
  json solutions = json::array();
  if (cfg.cost.rfind("random:", 0) == 0) {
    int budget = 0;
    try {
      budget = std::stoi(cfg.cost.substr(7));
    } catch (const std::exception&) {
      throw Error(ErrorCode::InvalidInput, "bad random budget in --cost");
    }
    for (const auto& g : enumerate_extreme_measures(atoms, y, budget, cfg.seed)) {
      solutions.push_back(std::vector<double>(g.data(), g.data() + g.size()));
    }
  } else {
    std::vector<double> c;
    std::stringstream ss(cfg.cost);
    for (std::string t; std::getline(ss, t, ',');) c.push_back(parse_double(t));
    const Eigen::VectorXd g = solve_weight_lp(
        atoms, y, Eigen::Map<Eigen::VectorXd>(c.data(), static_cast<Eigen::Index>(c.size())));
    solutions.push_back(std::vector<double>(g.data(), g.data() + g.size()));
  }
  log.info("{} weight vectors", solutions.size());
  o.report["weights"] = std::move(solutions);
  o.report["status"] = "ok";
  return o;
}

PopProblem load_pop(const Config& cfg) { return io::pop_from_json(io::read_json_file(cfg.pop)); }

Outcome cmd_relax(const Config& cfg, spdlog::logger& log) {
  const auto inst = build_relaxation(load_pop(cfg), cfg.omega);
  const auto text = emit_sdpa(inst);
  Outcome o;
  o.report["status"] = "ok";
  o.report["omega"] = inst.omega;
  o.report["num_variables"] = inst.num_variables();
  o.report["block_sizes"] = inst.block_sizes();
  json kinds = json::array();
  for (const auto& b : inst.blocks) {
    kinds.push_back(b.kind == BlockKind::Moment ? "moment" : "localizing");
  }
  o.report["block_kinds"] = std::move(kinds);
  if (cfg.sdpa.empty()) {
    o.report["sdpa"] = text;
  } else {
    io::write_text_file(cfg.sdpa, text);
    o.report["sdpa_file"] = cfg.sdpa;
    log.info("wrote {}", cfg.sdpa);
  }
  return o;
}

Outcome cmd_solve(const Config& cfg, spdlog::logger& log) {
  SdpInstance inst;
  if (!cfg.sdpa.empty()) {
    inst = parse_sdpa(io::read_text_file(cfg.sdpa));
  } else {
    inst = build_relaxation(load_pop(cfg), cfg.omega);
  }
  AdmmOptions opts;
  opts.max_iterations = cfg.max_iters;
  opts.tol = cfg.solver_tol;
  const auto rep = solve_sdp_bundled(inst, opts);
  if (!rep.converged) log.warn("bundled solver did not converge in {} iterations", rep.iterations);
  Outcome o;
  o.report = io::solve_report_to_json(rep, true);
  o.report["status"] = rep.converged ? "ok" : "NotConverged";
  o.code = rep.converged ? kExitOk : kExitVerdictFalse;
  return o;
}

std::optional<SparseMomentVector> load_solution(const Config& cfg, const SdpInstance& inst,
                                                const RankPolicy& policy,
                                                spdlog::logger& log) {
  if (cfg.solution.empty()) return std::nullopt;
  const auto text = io::read_text_file(cfg.solution);
  const auto first = text.find_first_not_of(" \t\r\n");
  IngestResult ing = first != std::string::npos && text[first] == '{'
                         ? ingest_solution(inst, io::moments_from_json(json::parse(text), cfg.allow_missing), policy)
                         : ingest_solution(inst, parse_primal_vector(text), policy);
  for (const auto& w : ing.warnings) log.warn("{}", w);
  return ing.y;
}

Outcome cmd_pipeline(const Config& cfg, spdlog::logger& log) {
  const auto pop = load_pop(cfg);
  const auto policy = cfg.policy();
  const auto inst = build_relaxation(pop, cfg.omega);
  PipelineOptions opts;
  opts.policy = policy;
  opts.seed = cfg.seed;
  opts.extract.merge_tol = cfg.merge_tol;
  opts.assembly.point_tol = cfg.merge_tol;
  opts.admm.max_iterations = cfg.max_iters;
  opts.admm.tol = cfg.solver_tol;
  const auto res = pipeline(pop, cfg.omega, opts, load_solution(cfg, inst, policy, log));
  Outcome o;
  o.report["solve"] = io::solve_report_to_json(res.solve, false);
  o.report["lower_bound"] = res.solve.objective;
  if (res.certificate) {
    o.report["certificate"] = io::certificate_to_json(*res.certificate, pop.cover);
  } else {
    o.report["certificate"] = nullptr;
  }
  if (res.verdict()) {
    o.report["measure"] = io::measure_to_json(*res.measure);
    o.report["minimizers"] = res.measure->atoms;
    o.report["global_residual"] = res.global_residual;
    json feas = json::array();
    for (std::size_t i = 0; i < res.feasibility.size(); ++i) {
      feas.push_back({{"clique", i + 1}, {"clean", res.feasibility[i].clean()}});
    }
    o.report["constraint_checks"] = std::move(feas);
    o.report["status"] = "ok";
  } else {
    o.report["status"] = res.certificate ? "NotFlat" : "NoOrderExists";
    o.code = kExitVerdictFalse;
  }
  log.info("pipeline status {}", o.report["status"].get<std::string>());
  return o;
}

void emit(const json& report, const Config& cfg, std::ostream& out) {
  const auto text = report.dump(2) + "\n";
  if (cfg.output.empty()) {
    out << text;
  } else {
    io::write_text_file(cfg.output, text);
  }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Config cfg;
  CLI::App app{"Certify and extract atomic measures from sparse moment data", "smk"};
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--rel-tol", cfg.rel_tol, "relative singular value cut for ranks")
      ->check(CLI::PositiveNumber);
  app.add_option("--round", cfg.round, "round matrix entries to this many decimals")
      ->check(CLI::Range(0, 15));
  app.add_option("--seed", cfg.seed, "seed for every random choice");
  app.add_option("--merge-tol", cfg.merge_tol, "distance under which atoms coincide")
      ->check(CLI::PositiveNumber);
  app.add_flag("--allow-missing-as-zero", cfg.allow_missing,
               "treat omitted moment entries as zero");
  app.add_option("--output", cfg.output, "write the JSON report here instead of stdout");

  auto* rip = app.add_subcommand("rip", "find or check a running-intersection order");
  rip->add_option("--input", cfg.input, "JSON file with n and cliques")->required();
  rip->add_option("--order", cfg.order, "1-based clique order to check")->delimiter(',');

  auto* cert = app.add_subcommand("certify", "flat-extension certificate for a moment vector");
  cert->add_option("--input", cfg.input, "moment vector JSON")->required();
  cert->add_option("--constraints", cfg.constraints, "problem JSON supplying constraints");
  cert->add_option("--order", cfg.order, "1-based clique order")->delimiter(',');
  cert->add_option("--dump-matrices", cfg.dump_dir, "directory for CSV matrix dumps");

  auto* ea = app.add_subcommand("extract-assemble", "extract clique atoms and glue them");
  ea->add_option("--input", cfg.input, "moment vector JSON")->required();
  ea->add_option("--constraints", cfg.constraints, "problem JSON supplying constraints");
  ea->add_option("--order", cfg.order, "1-based clique order")->delimiter(',');

  auto* alt = app.add_subcommand("altmeasure", "alternative measures on the maximal atom set");
  alt->add_option("--input", cfg.input, "moment vector JSON")->required();
  alt->add_option("--constraints", cfg.constraints, "problem JSON supplying constraints");
  alt->add_option("--cost", cfg.cost, "comma separated costs or random:N")->required();

  auto* relax = app.add_subcommand("relax", "build the moment relaxation, emit SDPA");
  relax->add_option("--pop", cfg.pop, "problem JSON")->required();
  relax->add_option("--omega", cfg.omega, "relaxation order")->required();
  relax->add_option("--sdpa", cfg.sdpa, "write the .dat-s text here");

  auto* solve = app.add_subcommand("solve", "bundled first-order SDP solve");
  auto* solve_pop = solve->add_option("--pop", cfg.pop, "problem JSON");
  solve->add_option("--omega", cfg.omega, "relaxation order")->needs(solve_pop);
  solve->add_option("--sdpa", cfg.sdpa, "read the instance from a .dat-s file")
      ->excludes(solve_pop);
  solve->add_option("--max-iters", cfg.max_iters)->check(CLI::PositiveNumber);
  solve->add_option("--tol", cfg.solver_tol)->check(CLI::PositiveNumber);

  auto* pipe = app.add_subcommand("pipeline", "solve, certify, extract and assemble");
  pipe->add_option("--pop", cfg.pop, "problem JSON")->required();
  pipe->add_option("--omega", cfg.omega, "relaxation order")->required();
  pipe->add_option("--solution", cfg.solution,
                   "moment vector JSON or whitespace separated free coordinates");
  pipe->add_option("--max-iters", cfg.max_iters)->check(CLI::PositiveNumber);
  pipe->add_option("--tol", cfg.solver_tol)->check(CLI::PositiveNumber);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
    if (solve->parsed() && cfg.pop.empty() && cfg.sdpa.empty()) {
      throw CLI::ValidationError("solve needs --pop with --omega, or --sdpa");
    }
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n";
    out << json{{"status", "usage_error"}, {"message", e.what()}}.dump(2) << "\n";
    return kExitUsage;
  }

  auto logger = make_logger(err);
  CLI::App* chosen = app.get_subcommands().front();
  const std::string name = chosen->get_name();
  Outcome outcome;
  try {
    if (name == "rip") outcome = cmd_rip(cfg, *logger);
    else if (name == "certify") outcome = cmd_certify(cfg, *logger);
    else if (name == "extract-assemble") outcome = cmd_extract_assemble(cfg, *logger);
    else if (name == "altmeasure") outcome = cmd_altmeasure(cfg, *logger);
    else if (name == "relax") outcome = cmd_relax(cfg, *logger);
    else if (name == "solve") outcome = cmd_solve(cfg, *logger);
    else outcome = cmd_pipeline(cfg, *logger);
  } catch (const Error& e) {
    logger->error("{}", e.what());
    outcome.report = {{"status", "error"},
                      {"error", {{"code", std::string(to_string(e.code()))}, {"message", e.what()}}}};
    outcome.code = kExitError;
  } catch (const std::exception& e) {
    logger->error("{}", e.what());
    outcome.report = {{"status", "error"}, {"error", {{"code", "Internal"}, {"message", e.what()}}}};
    outcome.code = kExitError;
  }

  json report;
  report["command"] = name;
  report["seed"] = cfg.seed;
  report["rel_tol"] = cfg.rel_tol;
  report["round"] = cfg.round ? json(*cfg.round) : json(nullptr);
  report["exit_code"] = outcome.code;
  for (auto& [k, v] : outcome.report.items()) report[k] = v;
  try {
    emit(report, cfg, out);
  } catch (const Error& e) {
    err << e.what() << "\n";
    return kExitError;
  }
  return outcome.code;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  std::vector<std::string> args;
  for (int k = 1; k < argc; ++k) args.emplace_back(argv[k]);
  return run(args, out, err);
}

}  // namespace smk::cli
