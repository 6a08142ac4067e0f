#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "doctest.h"

using namespace bumpdirac;
using namespace bumpdirac::cli;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir(const std::string& name) {
  std::random_device rd;
  const auto dir = fs::temp_directory_path() / ("bumpdirac_test_" + name + "_" + std::to_string(rd()));
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::vector<double>> read_csv(const fs::path& path) {
  std::ifstream in(path);
  std::string line;
  std::getline(in, line);  // header
  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
    rows.push_back(row);
  }
  return rows;
}

std::string field_of(const json& doc) {
  try {
    parse_config_json(doc);
  } catch (const ConfigError& e) {
    return e.field();
  }
  return "<accepted>";
}

}  // namespace

TEST_CASE("minimal configuration takes the defaults") {
  const auto cfg = parse_config_json(json{{"command", "density"}});
  CHECK(cfg.command == Command::density);
  CHECK(cfg.potential.empty());
  CHECK(cfg.grid.count == 100);
  CHECK(cfg.ks == std::vector<int>{-1, 1});
  CHECK(cfg.threads == 1);
}

TEST_CASE("invalid configurations name the offending field") {
  CHECK(field_of({{"command", "density"}, {"grid", {{"min", -1.0}, {"max", 1.0}}}}) == "grid");
  CHECK(field_of({{"command", "density"}, {"bogus", 1}}) == "bogus");
  CHECK(field_of({{"command", "density"}, {"k", {0}}}) == "k");
  CHECK(field_of({{"command", "density"}, {"threads", 0}}) == "threads");
  CHECK(field_of({{"command", "density"},
                  {"potential", {{"bumps", {{{"height", 1.0}, {"width", -1.0}}}}, {"distances", {1.0}}}}}) ==
        "potential.bumps[0].width");
  try {
    parse_config_json({{"command", "fly"}});
    FAIL("unknown command accepted");
  } catch (const ConfigError& e) {
    const std::string msg = e.what();
    CHECK(e.field() == "command");
    for (const char* name : {"density", "construct", "concentration", "asymptotics", "channels", "validate"})
      CHECK(msg.find(name) != std::string::npos);
  }
  CHECK_THROWS_AS(parse_config("{\"command\": \"density\", }"), ConfigError);
}

TEST_CASE("grid nodes") {
  GridSpec g{0.5, 1.0, 3, GridSign::both};
  CHECK(g.nodes() == std::vector<double>{-1.0, -0.75, -0.5, 0.5, 0.75, 1.0});
  GridSpec single{2.0, 2.0, 1, GridSign::negative};
  CHECK(single.nodes() == std::vector<double>{-2.0});
}

TEST_CASE("density command on the free potential") {
  const auto dir = scratch_dir("density");
  json doc{{"command", "density"},
           {"grid", {{"min", 0.5}, {"max", 3.0}, {"count", 11}}},
           {"output", {{"dir", dir.string()}}}};
  const auto result = run(parse_config_json(doc));
  CHECK(result.exit_code == 0);
  const auto rows = read_csv(dir / "density.csv");
  REQUIRE(rows.size() == 11);
  for (const auto& r : rows) {
    const double lambda = r[1];
    CHECK(r[2] == doctest::Approx((lambda + 1.0) / (lambda * std::numbers::pi)));
    CHECK(r[3] == doctest::Approx(r[2]));
  }
  const auto manifest = json::parse(slurp(dir / "manifest.json"));
  CHECK(manifest.at("command") == "density");
  CHECK(manifest.at("exit_code") == 0);
  CHECK(!fs::exists(dir / "diagnostic.json"));
  fs::remove_all(dir);
}

TEST_CASE("output does not depend on the thread count") {
  const auto one = scratch_dir("t1"), four = scratch_dir("t4");
  json doc{{"command", "density"},
           {"potential",
            {{"eta", 0.3},
             {"bumps", {{{"height", 1.0}, {"width", 1.0}}, {{"height", 0.7}, {"width", 1.5}, {"profile", "cos"}}}},
             {"distances", {2.5, 3.0}}}},
           {"grid", {{"min", 0.5}, {"max", 2.0}, {"count", 25}, {"sign", "both"}}}};
  doc["output"] = {{"dir", one.string()}};
  doc["threads"] = 1;
  REQUIRE(run(parse_config_json(doc)).exit_code == 0);
  doc["output"] = {{"dir", four.string()}};
  doc["threads"] = 4;
  REQUIRE(run(parse_config_json(doc)).exit_code == 0);
  CHECK(slurp(one / "density.csv") == slurp(four / "density.csv"));
  fs::remove_all(one);
  fs::remove_all(four);
}

TEST_CASE("construct command writes the stage record") {
  const auto dir = scratch_dir("construct");
  json doc{{"command", "construct"},
           {"construction",
            {{"stages", 2}, {"bumps_per_stage", 1}, {"epsilon", {{"mode", "geometric"}, {"scale", 0.5}, {"ratio", 0.5}}}}},
           {"output", {{"dir", dir.string()}}}};
  const auto result = run(parse_config_json(doc));
  CHECK(result.exit_code == 0);
  const auto stages = json::parse(slurp(dir / "stages.json"));
  const auto& list = stages.is_array() ? stages : stages.at("stages");
  REQUIRE(list.size() == 2);
  for (const char* key : {"stage", "xi", "epsilon", "bump_count", "distances", "gaps", "budgets", "s_measure"})
    CHECK(list[0].contains(key));
  fs::remove_all(dir);
}

TEST_CASE("main entry exit codes") {
  const auto dir = scratch_dir("entry");
  const auto good = dir / "good.json";
  std::ofstream(good) << json{{"command", "validate"}, {"validate", {{"samples", 3}}}, {"output", {{"dir", (dir / "out").string()}}}}.dump();
  const auto bad = dir / "bad.json";
  std::ofstream(bad) << R"({"command": "density", "grid": {"min": -1, "max": 1}})";
  const auto call = [](std::vector<std::string> args) {
    std::vector<char*> argv;
    for (auto& a : args) argv.push_back(a.data());
    return main_entry(static_cast<int>(argv.size()), argv.data());
  };
  CHECK(call({"bumpdirac", "--config", good.string()}) == 0);
  CHECK(fs::exists(dir / "out" / "validate.csv"));
  CHECK(call({"bumpdirac", "--config", bad.string()}) == 1);
  CHECK(call({"bumpdirac", "--config", (dir / "missing.json").string()}) == 1);
  fs::remove_all(dir);
}
