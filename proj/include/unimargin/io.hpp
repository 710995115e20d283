#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "unimargin/classify.hpp"
#include "unimargin/ipfp.hpp"
#include "unimargin/lp.hpp"
#include "unimargin/polytope.hpp"
#include "unimargin/table.hpp"
#include "unimargin/twoway.hpp"

namespace unimargin {

using Json = nlohmann::ordered_json;  // insertion order => byte-stable output

// Malformed files, schema violations, bad values: the exit-code-2 family.
struct parse_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct LoadResult {
  Table table;
  std::vector<std::string> warnings;
};

// Dispatches on extension: .json (schema below) or .csv (one row per cell,
// alpha_1,...,alpha_d,value; ingested as counts).
LoadResult load_table(const std::string& path);
LoadResult parse_table_json(const std::string& text);
LoadResult parse_table_csv(std::istream& in);

// {"shape":[...], "order":"lex-msb", "mode":"probability"|"counts", "p":[...]}
// p entries may be numbers or exact "num/den" strings on input.
Json table_json(const Table& t);

Json report_json(const IpfpReport& r);
Json rays_json(const Shape& shape, const std::vector<RationalVec>& rays);
Json kernel_json(const ZeroPattern& pattern,
                 const std::vector<std::vector<long long>>& basis);
Json rays_verdict_json(const CompatibilityVerdict& v, const Shape& shape);
Json lp_verdict_json(const LPVerdict& v);
Json atlas_json(const Atlas& a);
std::string crosstab_csv(const Atlas& a);
Json twoway_json(const TwoWayVerdict& v, const Table& t);
Json copula_json(const DiscreteCopula& c);
Json probe_json(const UniquenessReport& rep);

const char* status_name(CompatibilityVerdict::Status s);
const char* status_name(LpStatus s);
const char* status_name(TwoWayCase c);
const char* status_name(ProbeEntry::Kind k);

// Human-readable rounding used by the CLI tables: 3 decimal places.
std::string fixed3(double x);

}  // namespace unimargin
