// Python bindings. Structured data crosses the boundary as JSON text so the
// Python side sees the same documents as the command-line tool.

#include <sstream>

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "smk/altmeasure.hpp"
#include "smk/cli.hpp"
#include "smk/error.hpp"
#include "smk/io.hpp"
#include "smk/relax.hpp"
#include "smk/rip.hpp"

namespace py = pybind11;
using smk::io::json;

namespace {

smk::RankPolicy make_policy(double rel_tol, std::optional<int> round) {
  smk::RankPolicy p;
  p.rel_tol = rel_tol;
  p.round_decimals = round;
  p.validate();
  return p;
}

std::vector<std::vector<smk::ConstraintPolynomial>> constraints_of(
    const std::optional<std::string>& pop, const smk::CliqueCover& cover) {
  if (!pop) return std::vector<std::vector<smk::ConstraintPolynomial>>(cover.size());
  return smk::io::pop_from_json(json::parse(*pop)).constraints;
}

smk::RipWitnesses witnesses_for(const smk::CliqueCover& cover) {
  const auto order = smk::find_rip_order(cover);
  if (!order) throw smk::Error(smk::ErrorCode::InvalidCover, "no running intersection order");
  return smk::check_rip(cover, *order).witnesses;
}

std::string certify_json(const std::string& moments, const std::optional<std::string>& pop,
                         double rel_tol, std::optional<int> round) {
  const auto y = smk::io::moments_from_json(json::parse(moments));
  const auto cert = smk::certify(y, constraints_of(pop, y.cover()), witnesses_for(y.cover()),
                                 make_policy(rel_tol, round));
  return smk::io::certificate_to_json(cert, y.cover()).dump();
}

std::string extract_assemble_json(const std::string& moments,
                                  const std::optional<std::string>& pop, double rel_tol,
                                  std::optional<int> round, std::uint64_t seed) {
  const auto policy = make_policy(rel_tol, round);
  const auto y = smk::io::moments_from_json(json::parse(moments));
  const auto cert =
      smk::certify(y, constraints_of(pop, y.cover()), witnesses_for(y.cover()), policy);
  json out;
  out["certificate"] = smk::io::certificate_to_json(cert, y.cover());
  if (!cert.verdict) return out.dump();
  std::vector<smk::AtomicMeasure> cliques(y.cover().size());
  for (const auto& c : cert.cliques) {
    cliques[c.clique] =
        smk::extract_atoms(smk::moment_matrix(smk::clique_subvector(y, c.clique), y.omega()),
                           c.full.rank, policy, seed, y.cover().clique(c.clique));
  }
  const auto mu = smk::assemble(cliques, y.cover(), smk::plan_from_certificate(cert));
  out["measure"] = smk::io::measure_to_json(mu);
  out["global_residual"] = smk::verify_global(mu, y);
  out["maximal_support_set"] = smk::maximal_support_set(cliques, y.cover());
  return out.dump();
}

std::string pipeline_json(const std::string& pop_text, int omega,
                          const std::optional<std::string>& solution, double rel_tol,
                          std::optional<int> round, std::uint64_t seed, int max_iters) {
  const auto pop = smk::io::pop_from_json(json::parse(pop_text));
  smk::PipelineOptions opts;
  opts.policy = make_policy(rel_tol, round);
  opts.seed = seed;
  opts.admm.max_iterations = max_iters;
  std::optional<smk::SparseMomentVector> y;
  if (solution) y = smk::io::moments_from_json(json::parse(*solution));
  const auto res = smk::pipeline(pop, omega, opts, y);
  json out;
  out["solve"] = smk::io::solve_report_to_json(res.solve, false);
  out["verdict"] = res.verdict();
  if (res.certificate) out["certificate"] = smk::io::certificate_to_json(*res.certificate, pop.cover);
  if (res.measure) out["measure"] = smk::io::measure_to_json(*res.measure);
  return out.dump();
}

py::tuple run_cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = smk::cli::run(args, out, err);
  return py::make_tuple(code, out.str(), err.str());
}

}  // namespace

PYBIND11_MODULE(_smk, m) {
  m.doc() = "Flat-extension certificates and atom extraction for sparse moment relaxations";

  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const smk::Error& e) {
      PyErr_SetString(PyExc_ValueError, e.what());
    } catch (const json::exception& e) {
      PyErr_SetString(PyExc_ValueError, e.what());
    }
  });

  m.def(
      "find_rip_order",
      [](std::size_t n, const std::vector<std::vector<int>>& cliques) -> std::optional<std::vector<int>> {
        const auto order = smk::find_rip_order(smk::CliqueCover::from_one_based(n, cliques));
        if (!order) return std::nullopt;
        std::vector<int> out;
        for (auto k : *order) out.push_back(static_cast<int>(k) + 1);
        return out;
      },
      py::arg("n"), py::arg("cliques"));

  m.def(
      "moment_matrix",
      [](const std::string& moments, int clique, int order) {
        const auto y = smk::io::moments_from_json(json::parse(moments));
        if (clique < 1 || static_cast<std::size_t>(clique) > y.cover().size()) {
          throw smk::Error(smk::ErrorCode::InvalidInput, "clique index out of range");
        }
        return smk::moment_matrix(smk::clique_subvector(y, static_cast<std::size_t>(clique - 1)),
                                  order)
            .data;
      },
      py::arg("moments"), py::arg("clique"), py::arg("order"));

  m.def("certify", &certify_json, py::arg("moments"), py::arg("pop") = std::nullopt,
        py::arg("rel_tol") = 1e-6, py::arg("round") = std::nullopt);
  m.def("extract_assemble", &extract_assemble_json, py::arg("moments"),
        py::arg("pop") = std::nullopt, py::arg("rel_tol") = 1e-6,
        py::arg("round") = std::nullopt, py::arg("seed") = 42);

  m.def(
      "solve_weight_lp",
      [](const std::vector<smk::Point>& atoms, const std::string& moments,
         const Eigen::VectorXd& cost) {
        return smk::solve_weight_lp(atoms, smk::io::moments_from_json(json::parse(moments)), cost);
      },
      py::arg("atoms"), py::arg("moments"), py::arg("cost"));
  m.def(
      "enumerate_extreme_measures",
      [](const std::vector<smk::Point>& atoms, const std::string& moments, int budget,
         std::uint64_t seed) {
        return smk::enumerate_extreme_measures(
            atoms, smk::io::moments_from_json(json::parse(moments)), budget, seed);
      },
      py::arg("atoms"), py::arg("moments"), py::arg("budget"), py::arg("seed") = 42);

  m.def(
      "emit_sdpa",
      [](const std::string& pop, int omega) {
        return smk::emit_sdpa(smk::build_relaxation(smk::io::pop_from_json(json::parse(pop)), omega));
      },
      py::arg("pop"), py::arg("omega"));

  m.def("pipeline", &pipeline_json, py::arg("pop"), py::arg("omega"),
        py::arg("solution") = std::nullopt, py::arg("rel_tol") = 1e-6,
        py::arg("round") = std::nullopt, py::arg("seed") = 42, py::arg("max_iters") = 20000);

  m.def("run_cli", &run_cli, py::arg("args"),
        "Runs the command-line tool in process; returns (exit code, stdout, stderr).");
}
