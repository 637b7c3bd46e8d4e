#include "latshift/serialize.hpp"

#include <charconv>
#include <cstdio>

#include "latshift/error.hpp"

namespace latshift {

std::string format_double(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc{}) throw ValidationError("cannot format floating-point value");
  return {buf, ptr};
}

std::string format_significant(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*e", digits - 1, v);
  return buf;
}

Json to_json(const GeneratingVector& z) {
  Json j;
  j["s"] = z.dimension();
  j["t"] = z.depth();
  j["z"] = std::vector<std::uint64_t>(z.components().begin(), z.components().end());
  return j;
}

GeneratingVector generating_vector_from_json(const Json& j) {
  try {
    auto comps = j.at("z").get<std::vector<std::uint64_t>>();
    const auto s = j.at("s").get<std::size_t>();
    if (comps.size() != s) throw ValidationError("generating vector JSON: len(z) != s");
    return GeneratingVector(std::move(comps), j.at("t").get<unsigned>());
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("generating vector JSON: ") + e.what());
  }
}

namespace {

Json optional_number(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }

ShiftScheme scheme_from_string(const std::string& s) {
  if (s == "grid-shift") return ShiftScheme::GridShift;
  if (s == "scalar-shift") return ShiftScheme::ScalarShift;
  throw ValidationError("unknown shift scheme '" + s + "'");
}

MomentMethod method_from_string(const std::string& s) {
  if (s == "enumeration") return MomentMethod::Enumeration;
  if (s == "identity") return MomentMethod::Identity;
  if (s == "closed-form") return MomentMethod::ClosedForm;
  throw ValidationError("unknown moment method '" + s + "'");
}

}  // namespace

Json to_json(const MomentReport& rep) {
  Json j;
  j["scheme"] = to_string(rep.scheme);
  j["mean"] = rep.mean;
  j["bias"] = optional_number(rep.bias);
  j["variance"] = rep.variance;
  j["sd"] = rep.sd;
  j["mu3"] = rep.mu3;
  j["shift_space_size"] = rep.shift_space_size;
  j["method"] = to_string(rep.method);
  if (rep.cross_check) {
    j["cross_check"] = {{"method", to_string(rep.cross_check->method)},
                        {"description", rep.cross_check->description},
                        {"reference", rep.cross_check->reference},
                        {"relative_difference", rep.cross_check->relative_difference}};
  } else {
    j["cross_check"] = nullptr;
  }
  return j;
}

MomentReport moment_report_from_json(const Json& j) {
  try {
    MomentReport rep;
    rep.scheme = scheme_from_string(j.at("scheme").get<std::string>());
    rep.mean = j.at("mean").get<double>();
    if (!j.at("bias").is_null()) rep.bias = j.at("bias").get<double>();
    rep.variance = j.at("variance").get<double>();
    rep.sd = j.at("sd").get<double>();
    rep.mu3 = j.at("mu3").get<double>();
    rep.shift_space_size = j.at("shift_space_size").get<std::uint64_t>();
    rep.method = method_from_string(j.at("method").get<std::string>());
    if (const auto& cc = j.at("cross_check"); !cc.is_null()) {
      rep.cross_check = CrossCheck{method_from_string(cc.at("method").get<std::string>()),
                                   cc.at("description").get<std::string>(),
                                   cc.at("reference").get<double>(),
                                   cc.at("relative_difference").get<double>()};
    }
    return rep;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("moment report JSON: ") + e.what());
  }
}

std::string moment_csv_header() {
  return "scheme,mean,bias,variance,sd,mu3,shift_space_size,method,cross_check,"
         "cross_check_reference,cross_check_rel_diff";
}

std::string to_csv_row(const MomentReport& rep) {
  std::string row = to_string(rep.scheme);
  row += "," + format_double(rep.mean);
  row += "," + (rep.bias ? format_double(*rep.bias) : std::string());
  row += "," + format_double(rep.variance);
  row += "," + format_double(rep.sd);
  row += "," + format_double(rep.mu3);
  row += "," + std::to_string(rep.shift_space_size);
  row += "," + to_string(rep.method);
  if (rep.cross_check) {
    row += "," + rep.cross_check->description;
    row += "," + format_double(rep.cross_check->reference);
    row += "," + format_double(rep.cross_check->relative_difference);
  } else {
    row += ",,,";
  }
  return row;
}

Json to_json(const std::vector<DualIndex>& duals) {
  Json arr = Json::array();
  for (const auto& d : duals) arr.push_back(d.h);
  return arr;
}

std::vector<DualIndex> dual_points_from_json(const Json& j) {
  std::vector<DualIndex> out;
  for (const auto& h : j) out.push_back(DualIndex{h.get<std::vector<std::int64_t>>()});
  return out;
}

Json to_json(const SeriesResult<double>& res) {
  return Json{{"value", res.value}, {"tail_bound", optional_number(res.tail_bound)}, {"H", res.H}};
}

Json to_json(const EmbeddedMerit& em) {
  return Json{{"base_level", em.base.level},
              {"base_merit", em.base.value},
              {"extended_level", em.extended.level},
              {"extended_merit", em.extended.value},
              {"combined", em.combined}};
}

Json to_json(const ReplicateEstimate& est) {
  Json j;
  j["q"] = est.q();
  j["replicates"] = est.values;
  j["mean"] = est.mean;
  j["sd"] = optional_number(est.sd);
  return j;
}

}  // namespace latshift
