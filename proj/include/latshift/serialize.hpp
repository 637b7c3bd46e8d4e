#pragma once

#include <string>
#include <vector>

#include "json.hpp"
#include "latshift/cbc.hpp"
#include "latshift/fourier.hpp"
#include "latshift/lattice.hpp"
#include "latshift/moments.hpp"
#include "latshift/randomization.hpp"

namespace latshift {

using Json = nlohmann::ordered_json;

/// Shortest decimal string that parses back to exactly `v`.
std::string format_double(double v);

/// `v` rounded to `digits` significant digits, scientific notation.
std::string format_significant(double v, int digits);

/// {"s": int, "t": int, "z": [ints]}
Json to_json(const GeneratingVector& z);
GeneratingVector generating_vector_from_json(const Json& j);

Json to_json(const MomentReport& rep);
MomentReport moment_report_from_json(const Json& j);
std::string moment_csv_header();
std::string to_csv_row(const MomentReport& rep);

Json to_json(const std::vector<DualIndex>& duals);
std::vector<DualIndex> dual_points_from_json(const Json& j);

Json to_json(const SeriesResult<double>& res);

Json to_json(const EmbeddedMerit& em);

Json to_json(const ReplicateEstimate& est);

}  // namespace latshift
