#include "cli.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "CLI11.hpp"
#include "latshift/bitsource.hpp"
#include "latshift/cbc.hpp"
#include "latshift/error.hpp"
#include "latshift/fourier.hpp"
#include "latshift/moments.hpp"
#include "latshift/periodic.hpp"
#include "latshift/randomization.hpp"

namespace latshift::cli {

Json to_json(const ExperimentConfig& cfg) {
  Json j;
  j["s"] = cfg.s;
  j["m"] = cfg.m;
  j["r"] = cfg.r;
  j["ell"] = cfg.ell ? Json(*cfg.ell) : Json(nullptr);
  j["z"] = cfg.z;
  j["scheme"] = cfg.scheme;
  j["q"] = cfg.q;
  j["bits"] = cfg.bits;
  j["H"] = cfg.H;
  j["format"] = cfg.format;
  j["candidates"] = cfg.candidates;
  j["n"] = cfg.n;
  return j;
}

ExperimentConfig config_from_json(const Json& j) {
  ExperimentConfig cfg;
  try {
    const Json& c = j.contains("config") ? j.at("config") : j;
    if (c.contains("s")) cfg.s = c.at("s").get<std::size_t>();
    if (c.contains("m")) cfg.m = c.at("m").get<unsigned>();
    if (c.contains("r")) cfg.r = c.at("r").get<unsigned>();
    if (c.contains("ell") && !c.at("ell").is_null()) cfg.ell = c.at("ell").get<std::uint64_t>();
    if (c.contains("z")) cfg.z = c.at("z").get<std::vector<std::uint64_t>>();
    if (c.contains("scheme")) cfg.scheme = c.at("scheme").get<std::string>();
    if (c.contains("q")) cfg.q = c.at("q").get<std::uint64_t>();
    if (c.contains("bits")) cfg.bits = c.at("bits").get<std::string>();
    if (c.contains("H")) cfg.H = c.at("H").get<std::int64_t>();
    if (c.contains("format")) cfg.format = c.at("format").get<std::string>();
    if (c.contains("candidates")) cfg.candidates = c.at("candidates").get<std::string>();
    if (c.contains("n")) cfg.n = c.at("n").get<std::uint64_t>();
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("config JSON: ") + e.what());
  }
  return cfg;
}

const std::vector<ManifestCell>& table_manifest() {
  // Tables 1 and 3 use (s,m,r) = (3,4,4); tables 2 and 4 use (2,5,5). The
  // two three-digit entries of table 4 carry a 5e-3 tolerance.
  static const std::vector<ManifestCell> cells = {
      {3, 4, 4, 17797,
       {{1, "bias_grid", 1.9544e-3}, {1, "bias_scalar", 5.1619e-9},
        {3, "sd_grid", 7.938e-4}, {3, "sd_scalar", 8.389e-4}}},
      {3, 4, 4, 1267,
       {{1, "bias_grid", 1.9544e-3}, {1, "bias_scalar", 1.5158e-8},
        {3, "sd_grid", 7.938e-4}, {3, "sd_scalar", 8.374e-4}}},
      {3, 4, 4, 12915,
       {{1, "bias_grid", 1.9544e-3}, {1, "bias_scalar", 1.9155e-8},
        {3, "sd_grid", 7.938e-4}, {3, "sd_scalar", 8.378e-4}}},
      {2, 5, 5, 17797,
       {{2, "bias_grid", 3.2555e-4}, {2, "bias_scalar", 1.2940e-9},
        {4, "sd_grid", 1.6598e-4}, {4, "sd_scalar", 1.8194e-4}}},
      {2, 5, 5, 1267,
       {{2, "bias_grid", 3.2555e-4}, {2, "bias_scalar", 4.4993e-9},
        {4, "sd_grid", 1.6598e-4}, {4, "sd_scalar", 1.820e-4, 5e-3}}},
      {2, 5, 5, 12915,
       {{2, "bias_grid", 3.2555e-4}, {2, "bias_scalar", 1.7820e-9},
        {4, "sd_grid", 1.6598e-4}, {4, "sd_scalar", 1.782e-4, 5e-3}}},
  };
  return cells;
}

namespace {

struct CommandResult {
  Json artifact;       // used when format == json
  std::string csv;     // used when format == csv
  int exit_code = kSuccess;
};

unsigned scalar_bits(const ExperimentConfig& cfg) {
  const std::uint64_t sr = static_cast<std::uint64_t>(cfg.r) * cfg.s;
  if (sr > kMaxDepth) throw GuardError("s*r exceeds the supported bit depth");
  return static_cast<unsigned>(sr);
}

// Generating vector from --z, else --ell (default 17797), reduced mod 2^depth.
GeneratingVector resolve_z(const ExperimentConfig& cfg, unsigned depth) {
  depth = std::max(1U, depth);
  if (depth > kMaxDepth) throw GuardError("requested resolution exceeds the supported bit depth");
  if (!cfg.z.empty()) {
    if (cfg.z.size() != cfg.s) {
      throw ValidationError("--z has " + std::to_string(cfg.z.size()) + " components but --s is " +
                            std::to_string(cfg.s));
    }
    return GeneratingVector(cfg.z, depth);
  }
  return korobov_vector(cfg.ell.value_or(17797), cfg.s, depth);
}

Scheme parse_scheme(const std::string& name) {
  if (name == "grid") return Scheme::Grid;
  if (name == "scalar") return Scheme::Scalar;
  if (name == "ideal") return Scheme::Ideal;
  throw ValidationError("unknown scheme '" + name + "' (expected grid, scalar or ideal)");
}

Json base_artifact(const std::string& command, const ExperimentConfig& cfg) {
  Json j;
  j["command"] = command;
  j["config"] = to_json(cfg);
  return j;
}

// ---------------------------------------------------------------- tables

struct TableCellResult {
  ManifestCell cell;
  GeneratingVector z;
  MomentReport grid;
  MomentReport scalar;
};

double quantity_of(const TableCellResult& c, const std::string& q) {
  if (q == "bias_grid") return c.grid.bias.value_or(0.0);
  if (q == "bias_scalar") return c.scalar.bias.value_or(0.0);
  if (q == "sd_grid") return c.grid.sd;
  return c.scalar.sd;
}

CommandResult cmd_tables(const ExperimentConfig& cfg, const std::map<std::string, bool>& given,
                         bool check) {
  std::vector<ManifestCell> cells;
  for (const auto& cell : table_manifest()) {
    if (given.at("s") && cell.s != cfg.s) continue;
    if (given.at("m") && cell.m != cfg.m) continue;
    if (given.at("r") && cell.r != cfg.r) continue;
    if (given.at("ell") && cfg.ell && cell.ell != *cfg.ell) continue;
    cells.push_back(cell);
  }
  if (cells.empty()) {
    if (!(given.at("s") && given.at("m") && given.at("r"))) {
      throw ValidationError("no table cell matches the filter; give --s --m --r (and --ell) for a custom cell");
    }
    cells.push_back(ManifestCell{cfg.s, cfg.m, cfg.r, cfg.ell.value_or(17797), {}});
  }

  std::vector<TableCellResult> results;
  for (const auto& cell : cells) {
    const unsigned sr = cell.r * static_cast<unsigned>(cell.s);
    const auto z = korobov_vector(cell.ell, cell.s, std::max(1U, cell.m + sr));
    const ProductBernoulli f(cell.s);
    const EmbeddedPair pair(cell.m, sr, z);
    results.push_back({cell, z, moments_grid_shift(pair.base_rule(), f, cell.r),
                       moments_scalar_shift(pair, f)});
  }

  bool all_match = true;
  Json artifact = base_artifact("tables", cfg);
  artifact["check"] = check;
  Json jcells = Json::array();
  std::ostringstream csv;
  csv << "table,s,m,r,ell,quantity,reference,computed,computed_5sig,rel_diff,tolerance,match,"
         "method,cross_check,cross_check_rel_diff\n";
  for (const auto& res : results) {
    Json jc;
    jc["s"] = res.cell.s;
    jc["m"] = res.cell.m;
    jc["r"] = res.cell.r;
    jc["ell"] = res.cell.ell;
    jc["z"] = to_json(res.z);
    jc["grid"] = to_json(res.grid);
    jc["scalar"] = to_json(res.scalar);
    Json comps = Json::array();
    for (const auto& ref : res.cell.references) {
      const double computed = quantity_of(res, ref.quantity);
      const double rel = relative_difference(computed, ref.value);
      const bool match = rel <= ref.tolerance;
      all_match = all_match && match;
      const MomentReport& rep = ref.quantity.ends_with("grid") ? res.grid : res.scalar;
      comps.push_back({{"table", ref.table},
                       {"quantity", ref.quantity},
                       {"reference", ref.value},
                       {"computed", computed},
                       {"computed_5sig", format_significant(computed, 5)},
                       {"relative_difference", rel},
                       {"tolerance", ref.tolerance},
                       {"match", match}});
      csv << ref.table << ',' << res.cell.s << ',' << res.cell.m << ',' << res.cell.r << ','
          << res.cell.ell << ',' << ref.quantity << ',' << format_double(ref.value) << ','
          << format_double(computed) << ',' << format_significant(computed, 5) << ','
          << format_double(rel) << ',' << format_double(ref.tolerance) << ','
          << (match ? "true" : "false") << ',' << to_string(rep.method) << ','
          << rep.cross_check->description << ','
          << format_double(rep.cross_check->relative_difference) << '\n';
    }
    jc["comparisons"] = comps;
    jcells.push_back(jc);
  }
  artifact["cells"] = jcells;
  artifact["all_match"] = all_match;
  return {artifact, csv.str(), (check && !all_match) ? kCheckMismatch : kSuccess};
}

// ---------------------------------------------------------------- estimate

CommandResult cmd_estimate(const ExperimentConfig& cfg) {
  if (cfg.q == 0) throw ValidationError("--q must be at least 1");
  const Scheme scheme = parse_scheme(cfg.scheme);
  const unsigned sr = scalar_bits(cfg);
  const auto z = resolve_z(cfg, cfg.m + sr);
  const EmbeddedPair pair(cfg.m, sr, z);
  const ProductBernoulli f(cfg.s);
  if (cfg.m > kMaxEnumerationBits) throw GuardError("2^m nodes exceed the enumeration guard");

  auto src = make_bit_source(cfg.bits);
  std::vector<ShiftSpec> shifts;
  shifts.reserve(cfg.q);
  for (std::uint64_t k = 0; k < cfg.q; ++k) shifts.push_back(draw_shift(*src, scheme, cfg.s, cfg.r));
  const auto est = estimate_mean(make_evaluator(pair, f), shifts);

  Json artifact = base_artifact("estimate", cfg);
  Json result = to_json(est);
  result["known_integral"] = 1.0;
  result["bias"] = est.mean - 1.0;
  result["bits_consumed"] = src->bits_consumed();
  result["bit_source"] = src->describe();
  result["z"] = to_json(z);
  artifact["result"] = result;

  std::ostringstream csv;
  csv << "k,y\n";
  for (std::size_t k = 0; k < est.values.size(); ++k) csv << k << ',' << format_double(est.values[k]) << '\n';
  csv << "mean," << format_double(est.mean) << '\n';
  csv << "sd," << (est.sd ? format_double(*est.sd) : std::string()) << '\n';
  csv << "bits_consumed," << src->bits_consumed() << '\n';
  return {artifact, csv.str(), kSuccess};
}

// ---------------------------------------------------------------- moments

CommandResult cmd_moments(const ExperimentConfig& cfg) {
  const Scheme scheme = parse_scheme(cfg.scheme);
  const unsigned sr = scalar_bits(cfg);
  const ProductBernoulli f(cfg.s);
  MomentReport rep;
  Json zjson;
  if (scheme == Scheme::Grid) {
    const auto z = resolve_z(cfg, std::max(cfg.m, 1U));
    rep = moments_grid_shift(Rank1Rule(cfg.m, z), f, cfg.r);
    zjson = to_json(z);
  } else if (scheme == Scheme::Scalar) {
    if (cfg.m + sr > kMaxEnumerationBits) throw GuardError("m + s*r exceeds the enumeration guard");
    const auto z = resolve_z(cfg, cfg.m + sr);
    rep = moments_scalar_shift(EmbeddedPair(cfg.m, sr, z), f);
    zjson = to_json(z);
  } else {
    throw ValidationError("exact moments exist for the grid and scalar schemes only");
  }
  Json artifact = base_artifact("moments", cfg);
  artifact["result"] = to_json(rep);
  artifact["result"]["z"] = zjson;
  return {artifact, moment_csv_header() + "\n" + to_csv_row(rep) + "\n", kSuccess};
}

// ---------------------------------------------------------------- dual

CommandResult cmd_dual(const ExperimentConfig& cfg) {
  const auto z = resolve_z(cfg, std::max(cfg.m, 1U));
  const Rank1Rule rule(cfg.m, z);
  const TruncationBox box(cfg.H);
  const auto duals = dual_points(rule, box);

  Json artifact = base_artifact("dual", cfg);
  artifact["result"] = {{"N", rule.size()}, {"z", to_json(z)}, {"H", cfg.H},
                        {"count", duals.size()}, {"points", to_json(duals)}};
  std::ostringstream csv;
  for (std::size_t i = 0; i < cfg.s; ++i) csv << (i ? "," : "") << 'h' << (i + 1);
  csv << '\n';
  for (const auto& d : duals) {
    for (std::size_t i = 0; i < d.h.size(); ++i) csv << (i ? "," : "") << d.h[i];
    csv << '\n';
  }
  return {artifact, csv.str(), kSuccess};
}

// ---------------------------------------------------------------- cbc

CommandResult cmd_cbc(const ExperimentConfig& cfg) {
  const unsigned sr = scalar_bits(cfg);
  CandidatePolicy policy;
  if (cfg.candidates == "full") {
    policy.kind = CandidatePolicy::Kind::Full;
  } else if (cfg.candidates == "sampled") {
    policy.kind = CandidatePolicy::Kind::Sampled;
  } else if (cfg.candidates != "auto") {
    throw ValidationError("unknown candidate policy '" + cfg.candidates + "'");
  }
  const auto z = cbc_construct(cfg.s, cfg.m, sr, policy);
  const auto norm = korobov_normalizers(cfg.s, cfg.m, sr);
  const auto em = embedded_merit(z, cfg.m, sr, norm);
  const auto baseline = embedded_merit(korobov_vector(17797, cfg.s, std::max(1U, cfg.m + sr)),
                                       cfg.m, sr, norm);

  Json artifact = base_artifact("cbc", cfg);
  Json result = {{"s", cfg.s}, {"m", cfg.m}, {"sr", sr}, {"z", to_json(z)}};
  result["merit"] = to_json(em);
  result["normalizers"] = {{"base", norm.base}, {"extended", norm.extended}};
  result["baseline_korobov_17797"] = to_json(baseline);
  artifact["result"] = result;

  std::ostringstream csv;
  csv << "s,m,sr";
  for (std::size_t i = 0; i < cfg.s; ++i) csv << ",z" << (i + 1);
  csv << ",base_merit,extended_merit,combined\n";
  csv << cfg.s << ',' << cfg.m << ',' << sr;
  for (auto c : z.components()) csv << ',' << c;
  csv << ',' << format_double(em.base.value) << ',' << format_double(em.extended.value) << ','
      << format_double(em.combined) << '\n';
  return {artifact, csv.str(), kSuccess};
}

// ---------------------------------------------------------------- bits

CommandResult cmd_bits(const ExperimentConfig& cfg) {
  auto src = make_bit_source(cfg.bits);
  const auto bits = src->draw(cfg.n);
  std::string ascii;
  ascii.reserve(bits.size() + bits.size() / 64 + 1);
  for (std::size_t i = 0; i < bits.size(); ++i) {
    ascii.push_back(static_cast<char>('0' + bits[i]));
    if ((i + 1) % 64 == 0) ascii.push_back('\n');
  }
  if (ascii.empty() || ascii.back() != '\n') ascii.push_back('\n');
  Json artifact = base_artifact("bits", cfg);
  artifact["result"] = {{"bit_source", src->describe()}, {"bits_consumed", src->bits_consumed()}};
  // csv output is the raw ascii01 stream, directly loadable as a bit file.
  return {artifact, ascii, kSuccess};
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Randomized rank-1 lattice rules: exact moments, dual-lattice series, CBC search",
               "latshift"};
  app.require_subcommand(1);

  ExperimentConfig flags;
  std::string ell_text;
  std::string z_text;
  std::string out_path;
  std::string config_path;
  bool check = false;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--s", flags.s, "dimension");
    sub->add_option("--m", flags.m, "log2 of the base node count");
    sub->add_option("--r", flags.r, "bits per coordinate");
    sub->add_option("--ell", ell_text, "Korobov parameter (odd)");
    sub->add_option("--z", z_text, "explicit generating vector, comma separated");
    sub->add_option("--scheme", flags.scheme, "grid | scalar | ideal");
    sub->add_option("--q", flags.q, "replicate count");
    sub->add_option("--bits", flags.bits, "seed:N | os | file:PATH:FORMAT");
    sub->add_option("--H", flags.H, "truncation box bound");
    sub->add_option("--format", flags.format, "json | csv");
    sub->add_option("--candidates", flags.candidates, "auto | full | sampled");
    sub->add_option("--n", flags.n, "number of bits (bits command)");
    sub->add_option("--out", out_path, "write the artifact here instead of stdout");
    sub->add_option("--config", config_path, "replay the config embedded in an artifact");
    sub->add_flag("--check", check, "exit 3 unless every table cell matches");
  };

  std::map<std::string, CLI::App*> subs;
  for (const char* name : {"tables", "estimate", "moments", "dual", "cbc", "bits"}) {
    subs[name] = app.add_subcommand(name);
    add_common(subs[name]);
  }
  subs["tables"]->description("reproduce the bias and standard deviation tables");
  subs["estimate"]->description("replicate-mean estimate from random bits");
  subs["moments"]->description("exact moments of a finite randomization");
  subs["dual"]->description("list dual lattice points in a box");
  subs["cbc"]->description("component-by-component embedded-rule search");
  subs["bits"]->description("draw bits from a source as ascii01");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kSuccess : kValidationError;
  }

  try {
    CLI::App* active = nullptr;
    std::string command;
    for (auto& [name, sub] : subs) {
      if (sub->parsed()) {
        active = sub;
        command = name;
      }
    }
    std::map<std::string, bool> given;
    for (const auto& key : {"s", "m", "r", "ell", "z", "scheme", "q", "bits", "H", "format",
                            "candidates", "n"}) {
      given[key] = active->count(std::string("--") + key) > 0;
    }

    if (given["ell"]) {
      try {
        flags.ell = std::stoull(ell_text);
      } catch (const std::exception&) {
        throw ValidationError("--ell must be a positive integer");
      }
    }
    if (given["z"]) {
      flags.z.clear();
      std::stringstream ss(z_text);
      std::string item;
      while (std::getline(ss, item, ',')) {
        try {
          flags.z.push_back(std::stoull(item));
        } catch (const std::exception&) {
          throw ValidationError("--z must be a comma-separated list of non-negative integers");
        }
      }
    }

    ExperimentConfig cfg = flags;
    if (!config_path.empty()) {
      std::ifstream in(config_path);
      if (!in) throw ValidationError("cannot open config '" + config_path + "'");
      Json j;
      try {
        j = Json::parse(in);
      } catch (const nlohmann::json::exception& e) {
        throw ValidationError(std::string("config '") + config_path + "': " + e.what());
      }
      cfg = config_from_json(j);
      if (j.contains("check") && j.at("check").is_boolean() && !active->count("--check")) {
        check = j.at("check").get<bool>();
      }
      if (given["s"]) cfg.s = flags.s;
      if (given["m"]) cfg.m = flags.m;
      if (given["r"]) cfg.r = flags.r;
      if (given["ell"]) cfg.ell = flags.ell;
      if (given["z"]) cfg.z = flags.z;
      if (given["scheme"]) cfg.scheme = flags.scheme;
      if (given["q"]) cfg.q = flags.q;
      if (given["bits"]) cfg.bits = flags.bits;
      if (given["H"]) cfg.H = flags.H;
      if (given["format"]) cfg.format = flags.format;
      if (given["candidates"]) cfg.candidates = flags.candidates;
      if (given["n"]) cfg.n = flags.n;
    }
    if (cfg.format != "json" && cfg.format != "csv") {
      throw ValidationError("--format must be json or csv");
    }
    if (cfg.s < 1) throw ValidationError("--s must be at least 1");

    CommandResult res;
    if (command == "tables") {
      res = cmd_tables(cfg, given, check);
    } else if (command == "estimate") {
      res = cmd_estimate(cfg);
    } else if (command == "moments") {
      res = cmd_moments(cfg);
    } else if (command == "dual") {
      res = cmd_dual(cfg);
    } else if (command == "cbc") {
      res = cmd_cbc(cfg);
    } else {
      res = cmd_bits(cfg);
    }

    const std::string text = cfg.format == "csv" ? res.csv : res.artifact.dump(2) + "\n";
    if (!out_path.empty()) {
      std::ofstream file(out_path, std::ios::binary);
      if (!file) throw ValidationError("cannot write '" + out_path + "'");
      file << text;
    } else {
      out << text;
    }
    if (res.exit_code == kCheckMismatch) {
      err << "tables --check: at least one cell differs from its reference value\n";
    }
    return res.exit_code;
  } catch (const GuardError& e) {
    err << "guard violation: " << e.what() << '\n';
    return kGuardViolation;
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return kValidationError;
  } catch (const BitsExhausted& e) {
    err << "error: " << e.what() << '\n';
    return kValidationError;
  }
}

}  // namespace latshift::cli
