// unimargin: uniform-margin transforms, zero-pattern feasibility, and
// odds-ratio structure for multi-way contingency tables.
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "unimargin/classify.hpp"
#include "unimargin/io.hpp"
#include "unimargin/ipfp.hpp"
#include "unimargin/lp.hpp"
#include "unimargin/odds.hpp"
#include "unimargin/polytope.hpp"
#include "unimargin/table.hpp"
#include "unimargin/twoway.hpp"

using namespace unimargin;

namespace {

std::vector<int> parse_int_list(const std::string& s, char sep = ',') {
  std::vector<int> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, sep)) {
    if (tok.empty()) throw std::invalid_argument("empty entry in list: " + s);
    out.push_back(std::stoi(tok));
  }
  if (out.empty()) throw std::invalid_argument("empty list");
  return out;
}

ZeroPattern pattern_arg(const Shape& shape, const std::string& pattern,
                        const std::string& zeros) {
  if (pattern.empty() == zeros.empty())
    throw std::invalid_argument("give exactly one of --pattern and --zeros");
  if (!pattern.empty()) return ZeroPattern::from_string(shape, pattern);
  std::vector<MultiIndex> cells;
  std::stringstream ss(zeros);
  std::string tok;
  while (std::getline(ss, tok, ';')) cells.push_back(parse_int_list(tok));
  return ZeroPattern::from_zero_cells(shape, cells);
}

// "12,13,23|001": factor pairs comma-separated, then each factor's
// conditioning bits concatenated (d-2 per factor)
std::vector<ConditionalORSpec> parse_product(const Shape& shape,
                                             const std::string& text) {
  std::size_t bar = text.find('|');
  std::string left = bar == std::string::npos ? text : text.substr(0, bar);
  std::string bits = bar == std::string::npos ? "" : text.substr(bar + 1);
  std::size_t condlen = shape.size() - 2;
  std::vector<std::string> pairs;
  std::stringstream ss(left);
  std::string tok;
  while (std::getline(ss, tok, ',')) pairs.push_back(tok);
  if (pairs.empty()) throw std::invalid_argument("empty product: " + text);
  if (bits.size() != condlen * pairs.size())
    throw std::invalid_argument("product needs " + std::to_string(condlen) +
                                " conditioning bits per factor: " + text);
  std::vector<ConditionalORSpec> specs;
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    std::string one = pairs[k];
    if (condlen > 0) one += "|" + bits.substr(k * condlen, condlen);
    specs.push_back(parse_spec(shape, one));
  }
  return specs;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path);
  if (!out) throw parse_error("cannot write " + path);
  out << content;
  if (!out) throw parse_error("short write on " + path);
}

Table load_probability(const std::string& path) {
  LoadResult r = load_table(path);
  for (const auto& w : r.warnings) std::cerr << "warning: " << w << "\n";
  return r.table.mode == TableMode::counts ? normalized(r.table) : r.table;
}

std::string index_str(const MultiIndex& alpha) {
  std::string s;
  for (std::size_t i = 0; i < alpha.size(); ++i) {
    if (i) s += ',';
    s += std::to_string(alpha[i]);
  }
  return s;
}

void print_table(std::ostream& os, const Table& t) {
  for (std::size_t k = 0; k < t.cells(); ++k)
    os << "p(" << index_str(cell_index(t.shape, k + 1)) << ") = "
       << fixed3(t.p[k]) << "\n";
}

void emit(bool json, const Json& doc, const std::string& text) {
  if (json)
    std::cout << doc.dump(2) << "\n";
  else
    std::cout << text;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"uniform-margin toolkit for multi-way contingency tables"};
  app.require_subcommand(1);
  bool json_out = false;
  app.add_flag("--json", json_out, "emit a JSON document instead of text");

  // --- ipfp ------------------------------------------------------------
  std::string in_path, out_path, sweep_str;
  double tol = 1e-10;
  int max_iter = 100000;
  auto* ipfp = app.add_subcommand("ipfp", "project a table onto uniform margins");
  ipfp->fallthrough();
  ipfp->add_option("--in", in_path, "input table (.json or .csv)")->required();
  ipfp->add_option("--out", out_path, "write the fitted table as JSON");
  ipfp->add_option("--tol", tol, "margin-deviation tolerance");
  ipfp->add_option("--max-iter", max_iter, "sweep limit");
  ipfp->add_option("--sweep", sweep_str, "axis order per sweep, e.g. 2,1,3");
  ipfp->callback([&] {
    Table t = load_probability(in_path);
    IpfpConfig cfg;
    cfg.tol = tol;
    cfg.max_iter = max_iter;
    if (!sweep_str.empty()) cfg.sweep = parse_int_list(sweep_str);
    auto [fit, report] = ipfp_uniform(t, cfg);
    if (!out_path.empty()) write_file(out_path, table_json(fit).dump(2) + "\n");
    Json doc;
    doc["table"] = table_json(fit);
    doc["report"] = report_json(report);
    std::ostringstream text;
    print_table(text, fit);
    text << "iterations = " << report.iterations_used
         << ", margin deviation = " << report.final_margin_deviation
         << (report.converged ? "" : " (NOT converged)") << "\n"
         << "KL(result || input) = " << fixed3(report.kl_to_input) << "\n";
    if (report.boundary_drift)
      text << "note: a positive cell is drifting to 0 (boundary solution)\n";
    emit(json_out, doc, text.str());
  });

  // --- check -----------------------------------------------------------
  std::string shape_str, pattern_str, zeros_str, method = "both", expect;
  bool exact = false;
  auto* check = app.add_subcommand("check", "zero-pattern compatibility with uniform margins");
  check->fallthrough();
  check->add_option("--shape", shape_str, "axis sizes, e.g. 2,2,2")->required();
  check->add_option("--pattern", pattern_str, "0/1 string, canonical order, 0 = forced zero");
  check->add_option("--zeros", zeros_str, "zero cells, e.g. 0,1,1;1,0,1");
  check->add_option("--method", method)->check(CLI::IsMember({"rays", "lp", "both"}));
  check->add_flag("--exact", exact, "rational LP");
  check->add_option("--expect", expect, "fail (exit 1) unless the verdict matches")
      ->check(CLI::IsMember({"compatible", "incompatible"}));
  check->callback([&] {
    Shape shape = parse_int_list(shape_str);
    ZeroPattern pat = pattern_arg(shape, pattern_str, zeros_str);
    Json doc;
    doc["shape"] = shape;
    doc["pattern"] = pat.to_string();
    std::ostringstream text;
    bool compat = false;
    text << "pattern " << pat.to_string() << " on shape " << shape_str << "\n";
    if (method != "lp") {
      auto v = check_compatibility_rays(pat, shape);
      doc["rays"] = rays_verdict_json(v, shape);
      compat = v.compatible();
      text << "rays: " << status_name(v.status) << " (|S1| = " << v.S1.size() << ")\n";
      if (v.witness) {
        text << "witness:\n";
        for (std::size_t k = 0; k < v.witness->size(); ++k)
          text << "  p(" << index_str(cell_index(shape, k + 1)) << ") = "
               << fixed3((*v.witness)[k].to_double()) << "  ["
               << (*v.witness)[k].to_string() << "]\n";
      }
    }
    if (method != "rays") {
      auto v = lp_feasibility(pat, shape, exact);
      doc["lp"] = lp_verdict_json(v);
      compat = v.status == LpStatus::strictly_positive;
      text << "lp: " << status_name(v.status) << ", delta* = " << v.delta_star;
      if (!v.delta_exact.empty()) text << " = " << v.delta_exact;
      text << "\n";
      if (v.witness) {
        text << "witness:\n";
        for (std::size_t k = 0; k < v.witness->cells(); ++k)
          text << "  p(" << index_str(cell_index(shape, k + 1)) << ") = "
               << fixed3(v.witness->p[k]) << "\n";
      }
    }
    if (method == "both") {
      bool rays_ok = doc["rays"]["compatible"].get<bool>();
      bool lp_ok = doc["lp"]["compatible"].get<bool>();
      doc["agree"] = rays_ok == lp_ok;
      compat = rays_ok;
      text << "methods agree: " << (rays_ok == lp_ok ? "yes" : "NO") << "\n";
    }
    emit(json_out, doc, text.str());
    if (!expect.empty() && (expect == "compatible") != compat)
      throw std::domain_error("pattern is " +
                              std::string(compat ? "compatible" : "incompatible") +
                              ", expected " + expect);
  });

  // --- rays ------------------------------------------------------------
  std::string r_shape, r_pattern;
  auto* rays_cmd = app.add_subcommand("rays", "extreme pmfs with uniform margins");
  rays_cmd->fallthrough();
  rays_cmd->add_option("--shape", r_shape)->required();
  rays_cmd->add_option("--pattern", r_pattern, "restrict to a zero pattern's face");
  rays_cmd->callback([&] {
    Shape shape = parse_int_list(r_shape);
    auto rays = r_pattern.empty()
                    ? extreme_pmfs(shape)
                    : restricted_extreme_pmfs(shape, ZeroPattern::from_string(shape, r_pattern));
    std::ostringstream text;
    text << rays.size() << " extreme pmfs\n";
    for (std::size_t i = 0; i < rays.size(); ++i) {
      text << "r" << i + 1 << ":";
      for (const auto& q : rays[i]) text << " " << q.to_string();
      text << "\n";
    }
    emit(json_out, rays_json(shape, rays), text.str());
  });

  // --- kernel ----------------------------------------------------------
  std::string k_shape, k_pattern, k_zeros;
  auto* kernel_cmd = app.add_subcommand("kernel", "integer basis of the margin-constraint kernel");
  kernel_cmd->fallthrough();
  kernel_cmd->add_option("--shape", k_shape)->required();
  kernel_cmd->add_option("--pattern", k_pattern);
  kernel_cmd->add_option("--zeros", k_zeros);
  kernel_cmd->callback([&] {
    Shape shape = parse_int_list(k_shape);
    ZeroPattern pat = k_pattern.empty() && k_zeros.empty()
                          ? ZeroPattern::all_ones(shape)
                          : pattern_arg(shape, k_pattern, k_zeros);
    auto basis = kernel_basis(pat, shape);
    std::ostringstream text;
    text << "kernel dimension " << basis.size() << " (pattern " << pat.to_string() << ")\n";
    for (std::size_t i = 0; i < basis.size(); ++i) {
      text << "k" << i + 1 << ":";
      for (long long v : basis[i]) text << " " << v;
      text << "\n";
    }
    emit(json_out, kernel_json(pat, basis), text.str());
  });

  // --- odds ------------------------------------------------------------
  std::string o_in, o_product;
  bool o_marginal = false;
  auto* odds_cmd = app.add_subcommand("odds", "conditional odds ratios and cancelled products");
  odds_cmd->fallthrough();
  odds_cmd->add_option("--in", o_in)->required();
  odds_cmd->add_flag("--marginal", o_marginal, "also the two-way marginal odds ratios");
  odds_cmd->add_option("--product", o_product, "evaluate a product, e.g. 12,13,23|001");
  odds_cmd->callback([&] {
    Table t = load_probability(o_in);
    Json doc;
    std::ostringstream text;
    Json cond = Json::array();
    for (const auto& [spec, val] : all_conditional_ors(t)) {
      Json e;
      e["name"] = spec_name(spec);
      e["status"] = val.status == ORStatus::defined ? "defined" : "undefined";
      if (val.status == ORStatus::defined) e["value"] = val.value;
      cond.push_back(std::move(e));
      text << spec_name(spec) << " = "
           << (val.status == ORStatus::defined ? fixed3(val.value) : "undefined") << "\n";
    }
    doc["conditional"] = std::move(cond);
    if (o_marginal) {
      Json marg = Json::array();
      int d = t.dims();
      for (int i = 1; i <= d; ++i)
        for (int j = i + 1; j <= d; ++j) {
          ORValue val = marginal_or(t, i, j);
          Json e;
          e["name"] = std::to_string(i) + std::to_string(j);
          e["status"] = val.status == ORStatus::defined ? "defined" : "undefined";
          if (val.status == ORStatus::defined) e["value"] = val.value;
          marg.push_back(std::move(e));
          text << "marginal " << i << j << " = "
               << (val.status == ORStatus::defined ? fixed3(val.value) : "undefined")
               << "\n";
        }
      doc["marginal"] = std::move(marg);
    }
    if (!o_product.empty()) {
      auto specs = parse_product(t.shape, o_product);
      std::vector<ORMonomial> factors;
      for (const auto& s : specs) factors.push_back(monomial_of(t.shape, s));
      ORValue val = evaluate_monomial(t, monomial_product(factors));
      Json e;
      e["name"] = product_name(specs);
      e["status"] = val.status == ORStatus::defined ? "defined" : "undefined";
      if (val.status == ORStatus::defined) e["value"] = val.value;
      doc["product"] = std::move(e);
      text << "product " << product_name(specs) << " = "
           << (val.status == ORStatus::defined ? fixed3(val.value) : "undefined") << "\n";
    }
    emit(json_out, doc, text.str());
  });

  // --- classify ----------------------------------------------------------
  std::string c_shape, c_out, c_crosstab;
  int c_jobs = 1;
  bool c_lp_all = false;
  std::size_t c_lp_sample = 0;
  unsigned c_seed = 1;
  auto* classify_cmd = app.add_subcommand("classify", "atlas of all zero patterns of a shape");
  classify_cmd->fallthrough();
  classify_cmd->add_option("--shape", c_shape)->required();
  classify_cmd->add_option("--out", c_out, "write the atlas JSON here");
  classify_cmd->add_option("--crosstab", c_crosstab, "write the N0 x N1 crosstab CSV here");
  classify_cmd->add_option("--jobs", c_jobs, "worker threads")->check(CLI::PositiveNumber);
  classify_cmd->add_flag("--lp-all", c_lp_all, "cross-check every pattern with the LP");
  classify_cmd->add_option("--lp-sample", c_lp_sample, "cross-check a random sample");
  classify_cmd->add_option("--seed", c_seed);
  classify_cmd->callback([&] {
    ClassifyConfig cfg;
    cfg.jobs = c_jobs;
    cfg.lp_all = c_lp_all;
    cfg.lp_sample = c_lp_sample;
    cfg.seed = c_seed;
    Atlas atlas = classify_all(parse_int_list(c_shape), cfg);
    if (!c_out.empty()) write_file(c_out, atlas_json(atlas).dump(2) + "\n");
    if (!c_crosstab.empty()) write_file(c_crosstab, crosstab_csv(atlas));
    std::ostringstream text;
    text << atlas.records.size() << " patterns, " << atlas.compatible_count
         << " compatible, " << atlas.pruned_count << " settled by monotonicity\n"
         << "crosstab (compatible patterns, zeros x extreme points):\n"
         << crosstab_csv(atlas);
    emit(json_out, atlas_json(atlas), text.str());
  });

  // --- twoway ------------------------------------------------------------
  std::string t_in;
  double t_eps = 0.0;
  auto* twoway_cmd = app.add_subcommand("twoway", "two-way existence classification");
  twoway_cmd->fallthrough();
  twoway_cmd->add_option("--in", t_in)->required();
  twoway_cmd->add_option("--eps", t_eps, "treat cells <= eps as zero");
  twoway_cmd->callback([&] {
    LoadResult r = load_table(t_in);
    for (const auto& w : r.warnings) std::cerr << "warning: " << w << "\n";
    auto v = classify_twoway(r.table, t_eps);
    std::ostringstream text;
    text << "case: " << status_name(v.verdict) << "\n";
    for (const auto& w : v.witnesses) {
      text << "null rectangle rows={";
      bool first = true;
      for (int i = 0; i < 32; ++i)
        if ((w.rows >> i) & 1) { text << (first ? "" : ",") << i; first = false; }
      text << "} cols={";
      first = true;
      for (int i = 0; i < 32; ++i)
        if ((w.cols >> i) & 1) { text << (first ? "" : ",") << i; first = false; }
      text << "} weight " << w.weight_num << "/" << w.weight_den << "\n";
    }
    emit(json_out, twoway_json(v, r.table), text.str());
  });

  // --- copula ------------------------------------------------------------
  std::string cp_in;
  auto* copula_cmd = app.add_subcommand("copula", "checkerboard copula of a two-way table");
  copula_cmd->fallthrough();
  copula_cmd->add_option("--in", cp_in)->required();
  copula_cmd->callback([&] {
    LoadResult r = load_table(cp_in);
    for (const auto& w : r.warnings) std::cerr << "warning: " << w << "\n";
    auto c = discrete_copula(r.table);
    std::ostringstream text;
    text << "u:";
    for (double x : c.u) text << " " << fixed3(x);
    text << "\nv:";
    for (double x : c.v) text << " " << fixed3(x);
    text << "\n";
    for (const auto& row : c.c) {
      for (std::size_t j = 0; j < row.size(); ++j) text << (j ? " " : "") << fixed3(row[j]);
      text << "\n";
    }
    emit(json_out, copula_json(c), text.str());
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const parse_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
