#pragma once

// JSON encodings shared by the command line tool and the Python module.
// Every variable and clique index in these documents is 1-based.

#include <filesystem>
#include <string>

#include <nlohmann/json.hpp>

#include "smk/altmeasure.hpp"
#include "smk/certify.hpp"
#include "smk/core.hpp"
#include "smk/relax.hpp"
#include "smk/rip.hpp"

namespace smk::io {

using json = nlohmann::ordered_json;

/// {"n": 3, "cliques": [[1,2],[2,3]]}
CliqueCover cover_from_json(const json& j);
void cover_to_json(const CliqueCover& cover, json& j);

/// {"n", "cliques", "omega", "entries": [{"alpha": [..n..], "value": v}]}
SparseMomentVector moments_from_json(const json& j, bool allow_missing_as_zero = false);
json moments_to_json(const SparseMomentVector& y);

/// {"n", "cliques", "objectives": [{"clique", "terms": [{"coef", "alpha_local"}]}],
///  "constraints": [same shape, one object per constraint]}
PopProblem pop_from_json(const json& j);
json pop_to_json(const PopProblem& pop);

/// {"variables": [...], "atoms": [[...]], "weights": [...]}
AtomicMeasure measure_from_json(const json& j);
json measure_to_json(const AtomicMeasure& mu);

json rip_to_json(const RipCheck& check);
json certificate_to_json(const FlatnessCertificate& cert, const CliqueCover& cover);
json solve_report_to_json(const SolveReport& report, bool include_moments);

json read_json_file(const std::filesystem::path& path);
std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace smk::io
