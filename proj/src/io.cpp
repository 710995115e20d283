#include "unimargin/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace unimargin {

namespace {

double entry_value(const Json& v, std::size_t k) {
  if (v.is_number()) return v.get<double>();
  if (v.is_string()) {
    try {
      return Rational::parse(v.get<std::string>()).to_double();
    } catch (const std::exception& e) {
      throw parse_error("cell " + std::to_string(k) + ": " + e.what());
    }
  }
  throw parse_error("cell " + std::to_string(k) + " is neither number nor \"num/den\"");
}

std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string field;
  while (std::getline(ss, field, ',')) out.push_back(trim(field));
  return out;
}

}  // namespace

LoadResult parse_table_json(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::exception& e) {
    throw parse_error(e.what());
  }
  if (!j.is_object()) throw parse_error("table file must hold a JSON object");
  if (!j.contains("shape") || !j["shape"].is_array())
    throw parse_error("missing \"shape\" array");
  Shape shape;
  for (const auto& v : j["shape"]) {
    if (!v.is_number_integer()) throw parse_error("shape entries must be integers");
    shape.push_back(v.get<int>());
  }
  try {
    validate_shape(shape);
  } catch (const std::exception& e) {
    throw parse_error(e.what());
  }
  if (j.contains("order") && j["order"] != "lex-msb")
    throw parse_error("unsupported cell order (expected \"lex-msb\")");
  TableMode mode = TableMode::probability;
  if (j.contains("mode")) {
    if (j["mode"] == "counts")
      mode = TableMode::counts;
    else if (j["mode"] != "probability")
      throw parse_error("mode must be \"probability\" or \"counts\"");
  }
  if (!j.contains("p") || !j["p"].is_array()) throw parse_error("missing \"p\" array");
  std::size_t n = cell_count(shape);
  if (j["p"].size() != n)
    throw parse_error("p has " + std::to_string(j["p"].size()) + " entries, shape needs " +
                      std::to_string(n));
  std::vector<double> p(n);
  for (std::size_t k = 0; k < n; ++k) {
    p[k] = entry_value(j["p"][k], k);
    if (!std::isfinite(p[k]) || p[k] < 0)
      throw parse_error("cell " + std::to_string(k) + " is negative or not finite");
  }
  LoadResult out;
  if (mode == TableMode::probability) {
    double sum = 0;
    for (double x : p) sum += x;
    if (std::fabs(sum - 1.0) > 1e-6)
      throw parse_error("probabilities sum to " + std::to_string(sum) +
                        ", outside tolerance 1e-6");
    if (std::fabs(sum - 1.0) > 1e-12)
      out.warnings.push_back("input sums to " + std::to_string(sum) + "; renormalized");
  } else {
    double total = 0;
    for (double x : p) total += x;
    if (total <= 0) throw parse_error("counts table is empty");
  }
  try {
    out.table = make_table(std::move(shape), std::move(p), mode);
  } catch (const std::exception& e) {
    throw parse_error(e.what());
  }
  return out;
}

LoadResult parse_table_csv(std::istream& in) {
  std::string line;
  std::vector<std::vector<std::string>> rows;
  while (std::getline(in, line)) {
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    rows.push_back(split_csv(line));
  }
  if (!rows.empty()) {
    // a non-numeric trailing field marks a header row
    char* end = nullptr;
    const std::string& last = rows[0].back();
    std::strtod(last.c_str(), &end);
    if (end == last.c_str() || *end != '\0') rows.erase(rows.begin());
  }
  if (rows.empty()) throw parse_error("csv holds no data rows");
  std::size_t width = rows[0].size();
  if (width < 2) throw parse_error("csv rows need at least one index column and a value");
  int d = (int)width - 1;

  Shape shape((std::size_t)d, 0);
  std::vector<std::pair<MultiIndex, double>> cells;
  for (std::size_t rI = 0; rI < rows.size(); ++rI) {
    const auto& r = rows[rI];
    if (r.size() != width)
      throw parse_error("csv row " + std::to_string(rI + 1) + " has " +
                        std::to_string(r.size()) + " fields, expected " +
                        std::to_string(width));
    MultiIndex alpha(d);
    for (int a = 0; a < d; ++a) {
      try {
        std::size_t used = 0;
        alpha[(std::size_t)a] = std::stoi(r[(std::size_t)a], &used);
        if (used != r[(std::size_t)a].size()) throw std::invalid_argument(r[(std::size_t)a]);
      } catch (const std::exception&) {
        throw parse_error("csv row " + std::to_string(rI + 1) + ": bad level \"" +
                          r[(std::size_t)a] + "\"");
      }
      if (alpha[(std::size_t)a] < 0)
        throw parse_error("csv row " + std::to_string(rI + 1) + ": negative level");
      shape[(std::size_t)a] = std::max(shape[(std::size_t)a], alpha[(std::size_t)a] + 1);
    }
    double v;
    try {
      std::size_t used = 0;
      v = std::stod(r.back(), &used);
      if (used != r.back().size()) throw std::invalid_argument(r.back());
    } catch (const std::exception&) {
      throw parse_error("csv row " + std::to_string(rI + 1) + ": bad value \"" +
                        r.back() + "\"");
    }
    if (!std::isfinite(v) || v < 0)
      throw parse_error("csv row " + std::to_string(rI + 1) + ": negative or non-finite value");
    cells.emplace_back(std::move(alpha), v);
  }
  try {
    validate_shape(shape);
  } catch (const std::exception& e) {
    throw parse_error(e.what());
  }
  std::size_t n = cell_count(shape);
  if (cells.size() != n)
    throw parse_error("csv covers " + std::to_string(cells.size()) + " cells, shape " +
                      "needs " + std::to_string(n));
  std::vector<double> p(n, -1.0);
  for (const auto& [alpha, v] : cells) {
    std::size_t k = cell_rank(shape, alpha) - 1;
    if (p[k] >= 0) throw parse_error("csv lists a cell twice");
    p[k] = v;
  }
  double total = 0;
  for (double x : p) total += x;
  if (total <= 0) throw parse_error("counts table is empty");
  LoadResult out;
  out.table = make_table(std::move(shape), std::move(p), TableMode::counts);
  return out;
}

LoadResult load_table(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw parse_error("cannot open " + path);
  std::size_t dot = path.find_last_of('.');
  std::string ext = dot == std::string::npos ? "" : path.substr(dot + 1);
  if (ext == "json") {
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_table_json(ss.str());
  }
  if (ext == "csv") return parse_table_csv(in);
  throw parse_error("unrecognized table format: " + path);
}

Json table_json(const Table& t) {
  Json j;
  j["shape"] = t.shape;
  j["order"] = "lex-msb";
  j["mode"] = t.mode == TableMode::counts ? "counts" : "probability";
  j["p"] = t.p;
  return j;
}

Json report_json(const IpfpReport& r) {
  Json j;
  j["iterations_used"] = r.iterations_used;
  j["final_margin_deviation"] = r.final_margin_deviation;
  j["converged"] = r.converged;
  j["kl_to_input"] = r.kl_to_input;
  j["boundary_drift"] = r.boundary_drift;
  return j;
}

Json rays_json(const Shape& shape, const std::vector<RationalVec>& rays) {
  Json j;
  j["shape"] = shape;
  j["count"] = rays.size();
  Json list = Json::array();
  for (const auto& r : rays) {
    Json row = Json::array();
    for (const auto& q : r) row.push_back(q.to_string());
    list.push_back(std::move(row));
  }
  j["rays"] = std::move(list);
  return j;
}

Json kernel_json(const ZeroPattern& pattern,
                 const std::vector<std::vector<long long>>& basis) {
  Json j;
  j["shape"] = pattern.shape;
  j["pattern"] = pattern.to_string();
  j["dimension"] = basis.size();
  j["basis"] = basis;
  return j;
}

const char* status_name(CompatibilityVerdict::Status s) {
  switch (s) {
    case CompatibilityVerdict::Status::compatible: return "compatible";
    case CompatibilityVerdict::Status::s1_empty: return "s1_empty";
    default: return "s2_proper_subset";
  }
}

const char* status_name(LpStatus s) {
  switch (s) {
    case LpStatus::strictly_positive: return "strictly_positive";
    case LpStatus::boundary_only: return "boundary_only";
    default: return "infeasible_system";
  }
}

const char* status_name(TwoWayCase c) {
  switch (c) {
    case TwoWayCase::unique_exists: return "unique_exists";
    case TwoWayCase::unique_exists_boundary: return "unique_exists_boundary";
    case TwoWayCase::reduced_support_only: return "reduced_support_only";
    default: return "no_solution";
  }
}

const char* status_name(ProbeEntry::Kind k) {
  switch (k) {
    case ProbeEntry::Kind::defined: return "defined";
    case ProbeEntry::Kind::zero: return "zero";
    default: return "undefined";
  }
}

Json rays_verdict_json(const CompatibilityVerdict& v, const Shape& shape) {
  Json j;
  j["method"] = "rays";
  j["compatible"] = v.compatible();
  j["status"] = status_name(v.status);
  j["n_admissible_rays"] = v.S1.size();
  j["S1"] = v.S1;
  j["covered_cells"] = v.S2;
  if (v.witness) {
    Json w = Json::array();
    for (const auto& q : *v.witness) w.push_back(q.to_string());
    j["witness"] = std::move(w);
  } else {
    j["witness"] = nullptr;
  }
  (void)shape;
  return j;
}

Json lp_verdict_json(const LPVerdict& v) {
  Json j;
  j["method"] = "lp";
  j["compatible"] = v.status == LpStatus::strictly_positive;
  j["status"] = status_name(v.status);
  j["delta_star"] = v.delta_star;
  if (!v.delta_exact.empty()) j["delta_exact"] = v.delta_exact;
  j["witness"] = v.witness ? table_json(*v.witness) : Json(nullptr);
  return j;
}

Json atlas_json(const Atlas& a) {
  Json j;
  j["shape"] = a.shape;
  j["pattern_count"] = a.records.size();
  j["compatible_count"] = a.compatible_count;
  j["pruned_count"] = a.pruned_count;
  Json ct = Json::array();
  for (const auto& [key, count] : a.crosstab)
    ct.push_back(Json{{"N0", key.first}, {"N1", key.second}, {"count", count}});
  j["crosstab"] = std::move(ct);
  Json pats = Json::array();
  for (const auto& rec : a.records) {
    Json r;
    r["pattern"] = ZeroPattern::from_mask(a.shape, rec.positive_mask).to_string();
    r["N0"] = rec.N0;
    r["N1"] = rec.N1;
    r["status"] = status_name(rec.status);
    if (rec.lp_checked) r["lp_delta"] = rec.lp_delta;
    pats.push_back(std::move(r));
  }
  j["patterns"] = std::move(pats);
  return j;
}

std::string crosstab_csv(const Atlas& a) {
  std::set<int> n0s, n1s;
  for (const auto& [key, count] : a.crosstab) {
    n0s.insert(key.first);
    n1s.insert(key.second);
  }
  std::ostringstream out;
  out << "N0";
  for (int n1 : n1s) out << ",N1=" << n1;
  out << ",total\n";
  std::map<int, int> coltot;
  for (int n0 : n0s) {
    out << n0;
    int rowtot = 0;
    for (int n1 : n1s) {
      auto it = a.crosstab.find({n0, n1});
      int c = it == a.crosstab.end() ? 0 : it->second;
      out << ',' << c;
      rowtot += c;
      coltot[n1] += c;
    }
    out << ',' << rowtot << '\n';
  }
  out << "total";
  int grand = 0;
  for (int n1 : n1s) {
    out << ',' << coltot[n1];
    grand += coltot[n1];
  }
  out << ',' << grand << '\n';
  return out.str();
}

namespace {

std::vector<int> mask_indices(std::uint32_t m) {
  std::vector<int> out;
  for (int i = 0; i < 32; ++i)
    if ((m >> i) & 1) out.push_back(i);
  return out;
}

}  // namespace

Json twoway_json(const TwoWayVerdict& v, const Table& t) {
  Json j;
  j["case"] = status_name(v.verdict);
  j["shape"] = t.shape;
  Json ws = Json::array();
  for (const auto& w : v.witnesses) {
    Json r;
    r["rows"] = mask_indices(w.rows);
    r["cols"] = mask_indices(w.cols);
    r["weight"] = std::to_string(w.weight_num) + "/" + std::to_string(w.weight_den);
    ws.push_back(std::move(r));
  }
  j["witnesses"] = std::move(ws);
  return j;
}

Json copula_json(const DiscreteCopula& c) {
  Json j;
  j["u"] = c.u;
  j["v"] = c.v;
  j["c"] = c.c;
  return j;
}

namespace {

Json probe_entries_json(const std::vector<ProbeEntry>& list) {
  Json arr = Json::array();
  for (const auto& e : list) {
    Json x;
    x["name"] = e.name;
    x["kind"] = status_name(e.kind);
    x["separates"] = e.separates;
    if (e.kind == ProbeEntry::Kind::defined) {
      x["lo"] = e.lo;
      x["hi"] = e.hi;
    }
    arr.push_back(std::move(x));
  }
  return arr;
}

}  // namespace

Json probe_json(const UniquenessReport& rep) {
  Json j;
  j["pattern"] = rep.pattern.to_string();
  j["n_rays"] = rep.n_rays;
  j["singles"] = probe_entries_json(rep.singles);
  j["pair_products"] = probe_entries_json(rep.pair_products);
  j["triple_products"] = probe_entries_json(rep.triple_products);
  return j;
}

std::string fixed3(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3f", x);
  // avoid the "-0.000" artifact
  if (buf[0] == '-' && std::strtod(buf, nullptr) == 0.0) return buf + 1;
  return buf;
}

}  // namespace unimargin
