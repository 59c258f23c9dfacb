#include "smk/core.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numeric>
#include <set>
#include <sstream>

#include "smk/error.hpp"

namespace smk {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidCover: return "InvalidCover";
    case ErrorCode::InvalidInput: return "InvalidInput";
    case ErrorCode::IndexOutOfPattern: return "IndexOutOfPattern";
    case ErrorCode::DuplicateKey: return "DuplicateKey";
    case ErrorCode::MissingEntry: return "MissingEntry";
    case ErrorCode::OrderTooHigh: return "OrderTooHigh";
    case ErrorCode::OrderTooLow: return "OrderTooLow";
    case ErrorCode::ZeroVector: return "ZeroVector";
    case ErrorCode::FlatnessViolated: return "FlatnessViolated";
    case ErrorCode::NonPhysicalWeights: return "NonPhysicalWeights";
    case ErrorCode::ReconstructionFailed: return "ReconstructionFailed";
    case ErrorCode::MarginalMismatch: return "MarginalMismatch";
    case ErrorCode::FinalMarginalCheckFailed: return "FinalMarginalCheckFailed";
    case ErrorCode::Infeasible: return "Infeasible";
    case ErrorCode::DegreeTooLow: return "DegreeTooLow";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::ParseError: return "ParseError";
  }
  return "Unknown";
}

// ---------------------------------------------------------------------------
// MultiIndex

MultiIndex::MultiIndex(std::vector<int> exponents)
    : exponents_(std::move(exponents)) {
  for (int e : exponents_) {
    if (e < 0) {
      throw Error(ErrorCode::InvalidInput, "negative exponent");
    }
    degree_ += e;
  }
}

MultiIndex MultiIndex::unit(std::size_t num_vars, std::size_t var) {
  std::vector<int> e(num_vars, 0);
  e.at(var) = 1;
  return MultiIndex(std::move(e));
}

std::vector<std::size_t> MultiIndex::support() const {
  std::vector<std::size_t> s;
  for (std::size_t k = 0; k < exponents_.size(); ++k) {
    if (exponents_[k] > 0) s.push_back(k);
  }
  return s;
}

bool MultiIndex::supported_on(std::span<const std::size_t> vars) const {
  for (std::size_t k = 0; k < exponents_.size(); ++k) {
    if (exponents_[k] > 0 &&
        !std::binary_search(vars.begin(), vars.end(), k)) {
      return false;
    }
  }
  return true;
}

MultiIndex operator+(const MultiIndex& a, const MultiIndex& b) {
  if (a.size() != b.size()) {
    throw Error(ErrorCode::InvalidInput, "adding exponents of different length");
  }
  std::vector<int> e(a.size());
  for (std::size_t k = 0; k < e.size(); ++k) e[k] = a[k] + b[k];
  return MultiIndex(std::move(e));
}

std::strong_ordering operator<=>(const MultiIndex& a, const MultiIndex& b) {
  if (auto c = a.degree_ <=> b.degree_; c != 0) return c;
  // Descending lexicographic within a degree.
  return b.exponents_ <=> a.exponents_;
}

std::string to_string(const MultiIndex& alpha) {
  std::ostringstream os;
  os << '(';
  for (std::size_t k = 0; k < alpha.size(); ++k) {
    if (k) os << ' ';
    os << alpha[k];
  }
  os << ')';
  return os.str();
}

double monomial_value(std::span<const double> x, const MultiIndex& alpha) {
  if (x.size() != alpha.size()) {
    throw Error(ErrorCode::DimensionMismatch,
                "point and exponent have different length");
  }
  double v = 1.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    for (int p = 0; p < alpha[k]; ++p) v *= x[k];
  }
  return v;
}

double evaluate(const Polynomial& p, std::span<const double> x) {
  double s = 0.0;
  for (const auto& [alpha, c] : p) s += c * monomial_value(x, alpha);
  return s;
}

int degree(const Polynomial& p) {
  int d = 0;
  for (const auto& [alpha, c] : p) {
    if (c != 0.0) d = std::max(d, alpha.degree());
  }
  return d;
}

namespace {

void enumerate(std::size_t k, int remaining, std::vector<int>& current,
               std::vector<MultiIndex>& out) {
  if (k == current.size()) {
    out.emplace_back(current);
    return;
  }
  for (int e = 0; e <= remaining; ++e) {
    current[k] = e;
    enumerate(k + 1, remaining - e, current, out);
  }
  current[k] = 0;
}

}  // namespace

std::vector<MultiIndex> dense_exponents(std::size_t num_vars, int max_degree) {
  std::vector<MultiIndex> out;
  if (max_degree < 0) return out;
  std::vector<int> current(num_vars, 0);
  enumerate(0, max_degree, current, out);
  std::sort(out.begin(), out.end());
  return out;
}

// ---------------------------------------------------------------------------
// CliqueCover

CliqueCover CliqueCover::from_one_based(
    std::size_t n, const std::vector<std::vector<int>>& cliques) {
  std::vector<std::vector<std::size_t>> zero_based;
  zero_based.reserve(cliques.size());
  for (const auto& c : cliques) {
    std::vector<std::size_t> z;
    for (int v : c) {
      if (v < 1 || static_cast<std::size_t>(v) > n) {
        throw Error(ErrorCode::InvalidCover,
                    "variable " + std::to_string(v) + " outside 1.." +
                        std::to_string(n));
      }
      z.push_back(static_cast<std::size_t>(v - 1));
    }
    zero_based.push_back(std::move(z));
  }
  CliqueCover cover(n, std::move(zero_based));
  if (auto report = validate_cover(cover); !report.ok) {
    throw Error(ErrorCode::InvalidCover, report.message);
  }
  return cover;
}

std::vector<std::vector<int>> CliqueCover::to_one_based() const {
  std::vector<std::vector<int>> out;
  for (const auto& c : cliques_) {
    std::vector<int> v;
    for (auto k : c) v.push_back(static_cast<int>(k) + 1);
    out.push_back(std::move(v));
  }
  return out;
}

CliqueCover CliqueCover::reordered(std::span<const std::size_t> order) const {
  std::vector<std::vector<std::size_t>> c;
  c.reserve(order.size());
  for (auto i : order) c.push_back(cliques_.at(i));
  return CliqueCover(n_, std::move(c));
}

std::vector<std::size_t> intersect(std::span<const std::size_t> a,
                                   std::span<const std::size_t> b) {
  std::vector<std::size_t> out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(),
                        std::back_inserter(out));
  return out;
}

std::vector<std::size_t> unite(std::span<const std::size_t> a,
                               std::span<const std::size_t> b) {
  std::vector<std::size_t> out;
  std::set_union(a.begin(), a.end(), b.begin(), b.end(),
                 std::back_inserter(out));
  return out;
}

bool is_subset(std::span<const std::size_t> a, std::span<const std::size_t> b) {
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

CoverReport validate_cover(const CliqueCover& cover) {
  if (cover.n() == 0) return {false, "n must be positive"};
  if (cover.size() == 0) return {false, "cover has no cliques"};
  std::vector<bool> covered(cover.n(), false);
  for (std::size_t i = 0; i < cover.size(); ++i) {
    const auto& c = cover.clique(i);
    const std::string name = "clique " + std::to_string(i + 1);
    if (c.empty()) return {false, name + " is empty"};
    for (std::size_t k = 0; k < c.size(); ++k) {
      if (c[k] >= cover.n()) {
        return {false, name + " has variable " + std::to_string(c[k] + 1) +
                           " outside 1.." + std::to_string(cover.n())};
      }
      if (k > 0 && c[k] <= c[k - 1]) {
        return {false, name + " is not strictly increasing"};
      }
      covered[c[k]] = true;
    }
  }
  for (std::size_t v = 0; v < cover.n(); ++v) {
    if (!covered[v]) {
      return {false, "variable " + std::to_string(v + 1) + " uncovered"};
    }
  }
  for (std::size_t i = 0; i < cover.size(); ++i) {
    for (std::size_t j = 0; j < cover.size(); ++j) {
      if (i != j && is_subset(cover.clique(i), cover.clique(j))) {
        return {false, "clique " + std::to_string(i + 1) + " is a subset of clique " +
                           std::to_string(j + 1)};
      }
    }
  }
  return {};
}

std::vector<MultiIndex> sparse_exponents(const CliqueCover& cover,
                                         int degree_bound) {
  std::set<MultiIndex> all;
  for (const auto& c : cover.cliques()) {
    for (const auto& local : dense_exponents(c.size(), degree_bound)) {
      all.insert(embed(local, c, cover.n()));
    }
  }
  return {all.begin(), all.end()};
}

// ---------------------------------------------------------------------------
// Measures and moment vectors

double AtomicMeasure::total_mass() const {
  return std::accumulate(weights.begin(), weights.end(), 0.0);
}

bool atom_precedes(std::span<const double> a, std::span<const double> b,
                   double tol) {
  for (std::size_t k = 0; k < std::min(a.size(), b.size()); ++k) {
    if (std::abs(a[k] - b[k]) > tol) return a[k] > b[k];
  }
  return false;
}

double max_abs_difference(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    throw Error(ErrorCode::DimensionMismatch, "points of different length");
  }
  double m = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) m = std::max(m, std::abs(a[k] - b[k]));
  return m;
}

void sort_atoms(AtomicMeasure& mu, double tol) {
  std::vector<std::size_t> idx(mu.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    return atom_precedes(mu.atoms[a], mu.atoms[b], tol);
  });
  AtomicMeasure sorted{mu.variables, {}, {}};
  for (auto i : idx) {
    sorted.atoms.push_back(mu.atoms[i]);
    sorted.weights.push_back(mu.weights[i]);
  }
  mu = std::move(sorted);
}

SparseMomentVector::SparseMomentVector(CliqueCover cover, int omega,
                                       Entries entries)
    : cover_(std::move(cover)), omega_(omega), entries_(std::move(entries)) {
  if (omega_ < 1) throw Error(ErrorCode::InvalidInput, "omega must be >= 1");
  const auto pattern = sparse_exponents(cover_, 2 * omega_);
  if (pattern.size() != entries_.size()) {
    throw Error(ErrorCode::InvalidInput,
                "moment vector has " + std::to_string(entries_.size()) +
                    " entries, pattern has " + std::to_string(pattern.size()));
  }
  auto it = entries_.begin();
  for (const auto& alpha : pattern) {
    if (!(it->first == alpha)) {
      throw Error(ErrorCode::IndexOutOfPattern,
                  "key set differs from the sparse pattern at " +
                      to_string(it->first));
    }
    ++it;
  }
}

SparseMomentVector SparseMomentVector::from_list(
    CliqueCover cover, int omega,
    const std::vector<std::pair<MultiIndex, double>>& list,
    bool allow_missing_as_zero) {
  if (omega < 1) throw Error(ErrorCode::InvalidInput, "omega must be >= 1");
  Entries entries;
  for (const auto& alpha : sparse_exponents(cover, 2 * omega)) {
    entries.emplace(alpha, 0.0);
  }
  std::set<MultiIndex> seen;
  for (const auto& [alpha, value] : list) {
    if (alpha.size() != cover.n()) {
      throw Error(ErrorCode::DimensionMismatch,
                  "exponent " + to_string(alpha) + " has wrong length");
    }
    auto it = entries.find(alpha);
    if (it == entries.end()) {
      throw Error(ErrorCode::IndexOutOfPattern,
                  to_string(alpha) + " is not correlatively sparse of degree <= " +
                      std::to_string(2 * omega));
    }
    if (!seen.insert(alpha).second) {
      throw Error(ErrorCode::DuplicateKey, "duplicate entry " + to_string(alpha));
    }
    it->second = value;
  }
  if (!allow_missing_as_zero && seen.size() != entries.size()) {
    for (const auto& [alpha, v] : entries) {
      if (!seen.contains(alpha)) {
        throw Error(ErrorCode::MissingEntry, "no value for " + to_string(alpha));
      }
    }
  }
  return SparseMomentVector(std::move(cover), omega, std::move(entries));
}

SparseMomentVector SparseMomentVector::zeros(CliqueCover cover, int omega) {
  return from_list(std::move(cover), omega, {}, true);
}

SparseMomentVector SparseMomentVector::from_measure(CliqueCover cover, int omega,
                                                    const AtomicMeasure& mu) {
  Entries entries;
  for (const auto& alpha : sparse_exponents(cover, 2 * omega)) {
    double s = 0.0;
    for (std::size_t l = 0; l < mu.size(); ++l) {
      s += mu.weights[l] * monomial_value(mu.atoms[l], alpha);
    }
    entries.emplace(alpha, s);
  }
  return SparseMomentVector(std::move(cover), omega, std::move(entries));
}

double SparseMomentVector::at(const MultiIndex& alpha) const {
  auto it = entries_.find(alpha);
  if (it == entries_.end()) {
    throw Error(ErrorCode::IndexOutOfPattern,
                to_string(alpha) + " is not in the sparse index set");
  }
  return it->second;
}

double SparseMomentVector::mass() const {
  return at(MultiIndex::zero(cover_.n()));
}

double SparseMomentVector::max_abs() const {
  double m = 0.0;
  for (const auto& [a, v] : entries_) m = std::max(m, std::abs(v));
  return m;
}

bool SparseMomentVector::is_zero() const { return max_abs() == 0.0; }

SparseMomentVector SparseMomentVector::rounded(int decimals) const {
  const double scale = std::pow(10.0, decimals);
  Entries r;
  for (const auto& [a, v] : entries_) {
    double q = std::round(v * scale) / scale;
    r.emplace(a, q == 0.0 ? 0.0 : q);
  }
  return SparseMomentVector(cover_, omega_, std::move(r));
}

double riesz_eval(const SparseMomentVector& y, const Polynomial& poly) {
  double s = 0.0;
  for (const auto& [alpha, c] : poly) {
    if (c == 0.0) continue;
    s += c * y.at(alpha);
  }
  return s;
}

double CliqueSubvector::at(const MultiIndex& local) const {
  auto it = values.find(local);
  if (it == values.end()) {
    throw Error(ErrorCode::IndexOutOfPattern,
                "local exponent " + to_string(local) + " exceeds degree " +
                    std::to_string(2 * omega));
  }
  return it->second;
}

double CliqueSubvector::max_abs() const {
  double m = 0.0;
  for (const auto& [a, v] : values) m = std::max(m, std::abs(v));
  return m;
}

bool CliqueSubvector::is_zero(double tol) const { return max_abs() <= tol; }

MultiIndex embed(const MultiIndex& local, std::span<const std::size_t> variables,
                 std::size_t n) {
  std::vector<int> e(n, 0);
  for (std::size_t k = 0; k < variables.size(); ++k) e[variables[k]] = local[k];
  return MultiIndex(std::move(e));
}

CliqueSubvector subvector_on(const SparseMomentVector& y,
                             std::span<const std::size_t> variables) {
  CliqueSubvector sub;
  sub.variables.assign(variables.begin(), variables.end());
  sub.omega = y.omega();
  for (const auto& local : dense_exponents(variables.size(), 2 * y.omega())) {
    sub.values.emplace(local, y.at(embed(local, variables, y.cover().n())));
  }
  return sub;
}

CliqueSubvector clique_subvector(const SparseMomentVector& y, std::size_t i) {
  return subvector_on(y, y.cover().clique(i));
}

std::map<MultiIndex, double> embed(const CliqueSubvector& sub, std::size_t n) {
  std::map<MultiIndex, double> out;
  for (const auto& [local, v] : sub.values) {
    out.emplace(embed(local, sub.variables, n), v);
  }
  return out;
}

Projection::Projection(std::vector<std::size_t> source,
                       std::vector<std::size_t> target)
    : source_(std::move(source)), target_(std::move(target)) {
  for (auto t : target_) {
    auto it = std::find(source_.begin(), source_.end(), t);
    if (it == source_.end()) {
      throw Error(ErrorCode::InvalidInput,
                  "projection target variable " + std::to_string(t + 1) +
                      " not in source");
    }
    positions_.push_back(static_cast<std::size_t>(it - source_.begin()));
  }
}

Point Projection::apply(std::span<const double> x) const {
  if (x.size() != source_.size()) {
    throw Error(ErrorCode::DimensionMismatch, "point length differs from source");
  }
  Point out;
  out.reserve(positions_.size());
  for (auto p : positions_) out.push_back(x[p]);
  return out;
}

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

double parse_double(std::string_view text) {
  double v = 0.0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  if (first != last && *first == '+') ++first;
  const auto res = std::from_chars(first, last, v);
  if (res.ec != std::errc() || res.ptr != last) {
    throw Error(ErrorCode::ParseError, "not a number: '" + std::string(text) + "'");
  }
  return v;
}

}  // namespace smk
