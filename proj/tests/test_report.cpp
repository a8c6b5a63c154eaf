#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "prv/report.hpp"
#include "prv/reproduce.hpp"

using namespace prv;
using nlohmann::json;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::filesystem::path scratch(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / "prv-tests";
  std::filesystem::create_directories(dir);
  return dir / name;
}

std::filesystem::path write_file(const std::string& name, const std::string& text) {
  const auto path = scratch(name);
  std::ofstream(path) << text;
  return path;
}

}  // namespace

TEST_SUITE("report") {

TEST_CASE("json round trip") {
  RunReport r;
  r.input.named = "cannabis";
  r.input.rows = 4;
  r.input.cols = 3;
  r.input.n = 1054;
  r.settings = {"geoprv", "power", 1.0, 0.05, "delta", 7};
  r.result.value = 0.29915799320413521;
  r.result.se = 0.0502184127994025;
  r.result.ci = Interval{0.20073171275654106, 0.3975842736517294};
  r.diagnostics.warnings = {"something odd"};
  r.timing_ms = 1.25;
  const auto j = to_json(r);
  CHECK(run_report_from_json(json::parse(j.dump())) == r);
  CHECK(j.at("result").at("ci").is_array());
  CHECK(j.at("input").contains("named"));
  CHECK_FALSE(j.at("input").contains("path"));

  RunReport bare;
  bare.input.path = "-";
  bare.input.rows = bare.input.cols = 2;
  bare.settings = {"prv", "omega", 0.5, 0.1, "bootstrap", 0};
  bare.result.percentile_ci = Interval{0.1, 0.2};
  bare.diagnostics.boundary = true;
  CHECK(run_report_from_json(json::parse(to_json(bare).dump(2))) == bare);
}

TEST_CASE("text rendering uses four decimals") {
  RunReport r;
  r.input.named = "cannabis";
  r.settings.measure = "geoprv";
  r.result.value = 0.29915799;
  r.result.ci = Interval{0.2007317, 0.3975843};
  const auto text = to_text(r);
  CHECK(text.find("0.2992") != std::string::npos);
  CHECK(text.find("(0.2007, 0.3976)") != std::string::npos);
}

}  // TEST_SUITE

TEST_SUITE("reproduce") {

TEST_CASE("published values load") {
  const auto& values = published_values();
  CHECK(values.size() == 222);
  CHECK(values.front().id == "T2a");
  CHECK(bvn_rho_from_input("bvn-0.8") == 0.8);
  CHECK_FALSE(bvn_rho_from_input("cannabis").has_value());
  CHECK_THROWS(parse_published_values("id,input\nT1,x\n"));
}

TEST_CASE("survey tables reproduce") {
  ReproduceOptions opt;
  opt.tables = {"6", "8", "9"};
  for (const auto& t : reproduce(opt)) {
    CHECK_MESSAGE(t.mismatches() == 0, t.id);
    CHECK(t.values.size() == 12);
  }
}

TEST_CASE("bootstrap standard errors are informational") {
  ReproduceOptions opt;
  opt.tables = {"6"};
  opt.se_method = SeMethod::bootstrap;
  opt.boot_reps = 400;
  opt.seed = 7;
  for (const auto& t : reproduce(opt)) {
    for (const auto& v : t.values)
      if (v.published.field == "se") CHECK_FALSE(v.enforced);
    CHECK(to_csv(t).find("expected") != std::string::npos);
  }
}

}  // TEST_SUITE

TEST_SUITE("cli") {

TEST_CASE("compute on a csv file") {
  const auto path = write_file("cannabis.csv",
                               "Alcohol,Never,Once or twice,More often\n"
                               "At most once/month,204,6,1\nTwice/month,211,13,5\n"
                               "Twice/week,357,44,38\nMore often,92,34,49\n");
  const auto r = run({"compute", "--input", path.string(), "--measure", "geoprv", "--f", "power", "--lambda",
                      "1", "--alpha", "0.05"});
  CHECK(r.code == cli::kOk);
  CHECK(r.out.find("0.2992") != std::string::npos);
  CHECK(r.out.find("(0.2007, 0.3976)") != std::string::npos);
  CHECK(r.err.empty());
}

TEST_CASE("compute json output round-trips through RunReport") {
  const auto r = run({"compute", "--named", "occupational-1985", "--measure", "geoprv", "--f", "omega",
                      "--omega", "0.9", "--json"});
  REQUIRE(r.code == cli::kOk);
  const auto j = json::parse(r.out);
  const auto report = run_report_from_json(j);
  CHECK(std::abs(report.result.value - 0.0695) <= 5e-5);
  CHECK(to_json(report) == j);
  CHECK(report.settings.family == "omega");
}

TEST_CASE("boundary exits 4 but prints the estimate") {
  const auto r = run({"compute", "--named", "artificial-1c", "--measure", "geoprv", "--f", "power", "--lambda", "0"});
  CHECK(r.code == cli::kBoundary);
  CHECK(r.out.find("1.0000") != std::string::npos);
  CHECK(r.err.find("BoundaryCase") != std::string::npos);
}

TEST_CASE("input errors exit 2, degenerate tables exit 3") {
  const auto empty = write_file("empty.csv", "");
  auto r = run({"compute", "--input", empty.string()});
  CHECK(r.code == cli::kInputError);
  CHECK_FALSE(r.err.empty());
  CHECK(r.out.empty());

  CHECK(run({"compute", "--input", scratch("missing.csv").string()}).code == cli::kInputError);
  CHECK(run({"compute", "--named", "no-such-table"}).code == cli::kInputError);
  CHECK(run({"compute", "--named", "cannabis", "--lambda", "-2"}).code == cli::kInputError);
  CHECK(run({"frobnicate"}).code == cli::kInputError);

  const auto one_col = write_file("onecol.csv", "5,0\n7,0\n");
  CHECK(run({"compute", "--input", one_col.string()}).code == cli::kDegenerate);
  const auto single = write_file("single.csv", "5,0,1\n7,0,2\n");
  CHECK(run({"compute", "--input", single.string(), "--drop-empty-cols"}).code == cli::kOk);
}

TEST_CASE("coverage command") {
  auto r = run({"coverage", "--bvn-rho", "0.4", "--lambda", "0.5", "--n", "2000", "--reps", "0", "--json"});
  CHECK(r.code == cli::kOk);
  CHECK(json::parse(r.out).at("result").at("coverage").is_null());
  r = run({"coverage", "--bvn-rho", "1.0", "--lambda", "0.5", "--n", "2000", "--reps", "10"});
  CHECK(r.code == cli::kDegenerate);
  CHECK(r.err.find("InteriorRequired") != std::string::npos);
}

TEST_CASE("gen command") {
  auto r = run({"gen", "--bvn-rho", "0", "--precision", "4"});
  CHECK(r.code == cli::kOk);
  CHECK(r.out.find("0.0625,0.0625,0.0625,0.0625") != std::string::npos);
  r = run({"gen", "--named", "artificial-1c", "--sample", "100", "--seed", "3"});
  CHECK(r.code == cli::kOk);
  const auto counts = parse_csv(r.out);
  CHECK(counts.total() == 100);
  CHECK(counts(0, 0) == 0);
  CHECK(run({"gen", "--bvn-rho", "1.5"}).code == cli::kInputError);
}

TEST_CASE("reproduce command writes files and exits 0 when all match") {
  const auto dir = scratch("reproduce-6");
  std::filesystem::remove_all(dir);
  const auto r = run({"reproduce", "--table", "6", "--out", dir.string()});
  CHECK(r.code == cli::kOk);
  CHECK(std::filesystem::exists(dir / "summary.txt"));
  CHECK(std::filesystem::exists(dir / "table_T6a.csv"));
  CHECK(std::filesystem::exists(dir / "table_T6b.csv"));
}

TEST_CASE("PRV_SEED supplies the default seed and the flag overrides it") {
  const std::vector<std::string> base = {"compute", "--named", "cannabis", "--measure", "geoprv",
                                         "--se-method", "bootstrap", "--boot-reps", "200", "--json"};
  ::setenv("PRV_SEED", "11", 1);
  const auto from_env = json::parse(run(base).out);
  auto with_flag = base;
  with_flag.insert(with_flag.end(), {"--seed", "11"});
  const auto from_flag = json::parse(run(with_flag).out);
  with_flag.back() = "12";
  const auto other = json::parse(run(with_flag).out);
  ::unsetenv("PRV_SEED");
  CHECK(from_env.at("settings").at("seed") == 11);
  CHECK(from_env.at("result") == from_flag.at("result"));
  CHECK(other.at("result") != from_env.at("result"));
}

}  // TEST_SUITE
