#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "doctest.h"
#include "latshift/moments.hpp"
#include "latshift/randomization.hpp"

using namespace latshift;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome run_cli(std::vector<std::string> args) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path tmp(const std::string& name) { return fs::path(LATSHIFT_TEST_TMPDIR) / ("cli_" + name); }

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace

TEST_CASE("dual command lists the example point") {
  const auto res = run_cli({"dual", "--s", "2", "--m", "3", "--z", "1,3", "--H", "8"});
  REQUIRE(res.code == 0);
  const auto j = Json::parse(res.out);
  CHECK(j["command"] == "dual");
  CHECK(j["result"]["N"] == 8);
  const auto points = dual_points_from_json(j["result"]["points"]);
  CHECK(std::find(points.begin(), points.end(), DualIndex{{5, 1}}) != points.end());
  CHECK(j["result"]["count"] == points.size());
}

TEST_CASE("moments command reproduces a table entry") {
  const auto res = run_cli({"moments", "--scheme", "scalar", "--s", "3", "--m", "4", "--r", "4", "--ell", "1267"});
  REQUIRE(res.code == 0);
  const auto rep = moment_report_from_json(Json::parse(res.out)["result"]);
  CHECK(relative_difference(*rep.bias, 1.5158e-8) < 1e-3);
  CHECK(rep.method == MomentMethod::Enumeration);
  CHECK(rep.cross_check->description == "extended rule");

  const auto grid = run_cli({"moments", "--scheme", "grid", "--s", "2", "--m", "5", "--r", "5", "--format", "csv"});
  REQUIRE(grid.code == 0);
  CHECK(grid.out.rfind(moment_csv_header(), 0) == 0);
}

TEST_CASE("estimate with an all-zero bit file equals the unshifted rule") {
  const auto zeros = tmp("zeros.txt");
  std::ofstream(zeros) << std::string(12, '0') << "\n";
  const auto res = run_cli({"estimate", "--scheme", "scalar", "--q", "1", "--bits", "file:" + zeros.string() + ":ascii01"});
  REQUIRE(res.code == 0);
  const auto j = Json::parse(res.out);
  const EmbeddedPair pair(4, 12, korobov_vector(17797, 3, 16));
  CHECK(j["result"]["mean"].get<double>() == eval_rule(pair.base_rule(), ProductBernoulli(3)));
  CHECK(j["result"]["bits_consumed"] == 12);
  CHECK(j["result"]["sd"].is_null());
}

TEST_CASE("exhaustive scalar estimate equals the extended rule") {
  const auto all = tmp("all12.txt");
  {
    std::ofstream f(all);
    for (int v = 0; v < 4096; ++v) {
      for (int b = 11; b >= 0; --b) f << ((v >> b) & 1);
      f << '\n';
    }
  }
  const auto res = run_cli({"estimate", "--scheme", "scalar", "--q", "4096", "--bits", "file:" + all.string() + ":ascii01"});
  REQUIRE(res.code == 0);
  const auto j = Json::parse(res.out);
  const EmbeddedPair pair(4, 12, korobov_vector(17797, 3, 16));
  const double ext = extended_rule_value(pair, ProductBernoulli(3));
  CHECK(relative_difference(j["result"]["mean"].get<double>(), ext) < 1e-13);
  CHECK(j["result"]["bits_consumed"] == 4096 * 12);

  const auto over = run_cli({"estimate", "--scheme", "scalar", "--q", "4097", "--bits", "file:" + all.string() + ":ascii01"});
  CHECK(over.code == cli::kValidationError);
  CHECK(over.err.find("exhausted") != std::string::npos);
}

TEST_CASE("grid estimate stays within a CLT bound of the exact mean") {
  const ProductBernoulli f(3);
  const Rank1Rule rule(4, korobov_vector(17797, 3, 4));
  const auto exact = moments_grid_shift(rule, f, 4);
  int inside = 0;
  const int seeds = 20;
  for (int seed = 1; seed <= seeds; ++seed) {
    const auto res = run_cli({"estimate", "--scheme", "grid", "--q", "1000", "--bits", "seed:" + std::to_string(seed)});
    REQUIRE(res.code == 0);
    const double ybar = Json::parse(res.out)["result"]["mean"].get<double>();
    if (std::abs(ybar - exact.mean) < 5 * exact.sd / std::sqrt(1000.0)) ++inside;
  }
  CHECK(inside == seeds);
}

TEST_CASE("artifacts replay bit-identically through --config") {
  const auto first = tmp("estimate.json");
  const auto res = run_cli({"estimate", "--scheme", "ideal", "--s", "2", "--m", "5", "--r", "5", "--q", "7",
                            "--bits", "seed:99", "--out", first.string()});
  REQUIRE(res.code == 0);
  CHECK(res.out.empty());
  const auto j = Json::parse(slurp(first));
  CHECK(cli::to_json(cli::config_from_json(j)) == j["config"]);
  const auto replay = run_cli({"estimate", "--config", first.string()});
  REQUIRE(replay.code == 0);
  CHECK(replay.out == slurp(first));

  // An explicit flag overrides the replayed config.
  const auto changed = run_cli({"estimate", "--config", first.string(), "--q", "3"});
  CHECK(Json::parse(changed.out)["config"]["q"] == 3);
  CHECK(Json::parse(changed.out)["config"]["bits"] == "seed:99");
}

TEST_CASE("cbc command reports merits against the Korobov baseline") {
  const auto res = run_cli({"cbc", "--s", "2", "--m", "3", "--r", "3"});
  REQUIRE(res.code == 0);
  const auto j = Json::parse(res.out);
  const auto z = generating_vector_from_json(j["result"]["z"]);
  CHECK(z[0] == 1);
  CHECK(j["result"]["merit"]["combined"].get<double>() <=
        j["result"]["baseline_korobov_17797"]["combined"].get<double>());
  const auto csv = run_cli({"cbc", "--s", "2", "--m", "3", "--r", "3", "--format", "csv"});
  CHECK(csv.out.rfind("s,m,sr,z1,z2,base_merit,extended_merit,combined\n", 0) == 0);
  CHECK(run_cli({"cbc", "--candidates", "some"}).code == cli::kValidationError);
}

TEST_CASE("bits command dumps a loadable ascii01 stream") {
  const auto res = run_cli({"bits", "--bits", "seed:1", "--n", "70", "--format", "csv"});
  REQUIRE(res.code == 0);
  CHECK(res.out.substr(0, 64) == "1011001111110010101011110110110100001111110001110001000011000101");
  CHECK(res.out.size() == 64 + 1 + 6 + 1);
  const auto js = run_cli({"bits", "--n", "5"});
  CHECK(Json::parse(js.out)["result"]["bits_consumed"] == 5);
}

TEST_CASE("tables command") {
  const auto one = run_cli({"tables", "--s", "3", "--m", "4", "--r", "4", "--ell", "17797", "--check"});
  CHECK(one.code == 0);
  const auto j = Json::parse(one.out);
  REQUIRE(j["cells"].size() == 1);
  CHECK(j["all_match"] == true);
  CHECK(j["cells"][0]["comparisons"][0]["computed_5sig"] == "1.9544e-03");

  const auto csv = run_cli({"tables", "--s", "2", "--m", "5", "--r", "5", "--ell", "1267", "--format", "csv"});
  CHECK(csv.code == 0);
  CHECK(std::count(csv.out.begin(), csv.out.end(), '\n') == 5);

  const auto custom = run_cli({"tables", "--s", "2", "--m", "3", "--r", "3"});
  CHECK(custom.code == 0);
  CHECK(Json::parse(custom.out)["cells"][0]["comparisons"].empty());
  CHECK(run_cli({"tables", "--s", "7"}).code == cli::kValidationError);
}

TEST_CASE("exit codes") {
  CHECK(run_cli({}).code == cli::kValidationError);
  CHECK(run_cli({"nonsense"}).code == cli::kValidationError);
  CHECK(run_cli({"dual", "--bogus"}).code == cli::kValidationError);
  CHECK(run_cli({"dual", "--s", "abc"}).code == cli::kValidationError);
  CHECK(run_cli({"moments", "--ell", "4"}).code == cli::kValidationError);
  CHECK(run_cli({"moments", "--s", "2", "--z", "1,3,5"}).code == cli::kValidationError);
  CHECK(run_cli({"moments", "--scheme", "ideal"}).code == cli::kValidationError);
  CHECK(run_cli({"estimate", "--scheme", "sideways"}).code == cli::kValidationError);
  CHECK(run_cli({"estimate", "--format", "xml"}).code == cli::kValidationError);
  CHECK(run_cli({"estimate", "--q", "0"}).code == cli::kValidationError);
  CHECK(run_cli({"estimate", "--bits", "dice"}).code == cli::kValidationError);
  CHECK(run_cli({"estimate", "--config", tmp("missing.json").string()}).code == cli::kValidationError);
  CHECK(run_cli({"moments", "--scheme", "grid", "--m", "5", "--r", "4"}).code == cli::kGuardViolation);
  CHECK(run_cli({"moments", "--scheme", "scalar", "--s", "3", "--r", "9"}).code == cli::kGuardViolation);
  CHECK(run_cli({"cbc", "--s", "2", "--m", "10", "--r", "9"}).code == cli::kGuardViolation);
  CHECK(run_cli({"dual", "--help"}).code == cli::kSuccess);
}
