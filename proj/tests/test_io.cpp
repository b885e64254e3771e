#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "crowdprice/io.hpp"

using namespace crowdprice;
using io::json;

namespace {

std::filesystem::path temp_file(const std::string& name, const std::string& body) {
  const auto p = std::filesystem::temp_directory_path() / ("crowdprice_io_" + name);
  std::ofstream(p) << body;
  return p;
}

}  // namespace

TEST(ReadWorkersCsv, ColumnsInAnyOrderWithBomAndCrlf) {
  std::istringstream in("\xEF\xBB\xBF" "cost, id ,quality\r\n0.25,alice,0.5\r\n\r\n1.0,carol,0.9\r\n");
  const auto ws = io::read_workers_csv(in);
  ASSERT_EQ(ws.size(), 2U);
  EXPECT_EQ(ws[0].id, "alice");
  EXPECT_EQ(ws[0].quality, 0.5);
  EXPECT_EQ(ws[1].cost, 1.0);
}

TEST(ReadWorkersCsv, MissingIdColumnNumbersRows) {
  std::istringstream in("quality,cost\n0.5,0.25\n0.7,0.5\n");
  const auto ws = io::read_workers_csv(in);
  EXPECT_EQ(ws[0].id, "w1");
  EXPECT_EQ(ws[1].id, "w2");
}

TEST(ReadWorkersCsv, Errors) {
  std::istringstream empty("");
  EXPECT_THROW(io::read_workers_csv(empty), ConfigError);
  std::istringstream no_cost("id,quality\na,0.5\n");
  EXPECT_THROW(io::read_workers_csv(no_cost), ConfigError);
  std::istringstream ragged("quality,cost\n0.5\n");
  EXPECT_THROW(io::read_workers_csv(ragged), ConfigError);
  std::istringstream text("quality,cost\n0.5,abc\n");
  EXPECT_THROW(io::read_workers_csv(text), ConfigError);
  std::istringstream negative("quality,cost\n0.5,-1\n");
  EXPECT_THROW(io::read_workers_csv(negative), DomainError);
}

TEST(WriteWorkersCsv, RoundTripsExactly) {
  const std::vector<WorkerProfile> ws = {{0.1, 1.0 / 3.0, "a"}, {0.7071067811865476, 2e-300, "b"}};
  std::stringstream s;
  io::write_workers_csv(s, ws);
  const auto back = io::read_workers_csv(s);
  ASSERT_EQ(back.size(), 2U);
  for (std::size_t i = 0; i < 2; ++i) {
    EXPECT_EQ(back[i].quality, ws[i].quality);
    EXPECT_EQ(back[i].cost, ws[i].cost);
    EXPECT_EQ(back[i].id, ws[i].id);
  }
}

TEST(WorkersFromJson, ObjectsWithOptionalIds) {
  const auto ws = io::workers_from_json(json::parse(R"([{"quality":0.5,"cost":0.25,"id":"x"},{"quality":0.7,"cost":0.5,"id":7},{"quality":0.9,"cost":1}])"));
  EXPECT_EQ(ws[0].id, "x");
  EXPECT_EQ(ws[1].id, "7");
  EXPECT_EQ(ws[2].id, "w3");
  EXPECT_THROW(io::workers_from_json(json::parse(R"({"quality":0.5})")), ConfigError);
  EXPECT_THROW(io::workers_from_json(json::parse(R"([{"quality":"high","cost":1}])")), ConfigError);
}

TEST(ReadWorkers, DispatchesOnExtension) {
  const auto csv = temp_file("w.csv", "id,quality,cost\na,0.5,0.25\n");
  const auto js = temp_file("w.json", R"([{"id":"a","quality":0.5,"cost":0.25}])");
  EXPECT_EQ(io::read_workers(csv.string()).front().cost, 0.25);
  EXPECT_EQ(io::read_workers(js.string()).front().cost, 0.25);
  EXPECT_THROW(io::read_workers("/nonexistent/w.csv"), ConfigError);
  const auto bad = temp_file("bad.json", "[{");
  EXPECT_THROW(io::read_workers(bad.string()), ConfigError);
}

TEST(ReadAbilities, ValidatesRange) {
  const auto ok = temp_file("a.csv", "id,ability,cost\na,0.3,0.5\n");
  EXPECT_EQ(io::read_abilities(ok.string()).front().ability, 0.3);
  const auto bad = temp_file("a_bad.csv", "id,ability,cost\na,1.3,0.5\n");
  EXPECT_THROW(io::read_abilities(bad.string()), DomainError);
}

TEST(UtilityConfigFromJson, KindsAndBounds) {
  EXPECT_EQ(io::utility_config_from_json(json("additive")).kind, UtilityConfig::Kind::Additive);
  const auto t = io::utility_config_from_json(json::parse(R"({"kind":"typo","M":10,"m":3})"));
  EXPECT_EQ(t.kind, UtilityConfig::Kind::Typo);
  EXPECT_EQ(t.M, 10);
  EXPECT_EQ(t.m, 3);
  EXPECT_THROW(io::utility_config_from_json(json::parse(R"({"kind":"typo","M":3,"m":4})")), ConfigError);
  EXPECT_THROW(io::utility_config_from_json(json("cubic")), ConfigError);
}

TEST(BonusPolicyJson, RoundTrip) {
  for (const auto& p : {BonusPolicy::threshold(14, 25), BonusPolicy::linear(25)}) {
    const auto back = io::bonus_policy_from_json(io::to_json(p));
    EXPECT_EQ(back.label(), p.label());
  }
  EXPECT_THROW(io::bonus_policy_from_json(json::parse(R"({"kind":"step"})")), ConfigError);
}

TEST(ReportJson, DoublesRoundTrip) {
  const std::vector<WorkerProfile> ws = {{0.5, 0.25, "a"}, {0.7, 0.5, "b"}, {0.9, 1.0, "c"}};
  const auto r = cp_unres(ws, 2.0, make_additive_utility());
  const auto j = json::parse(io::to_json(r, ws).dump());
  EXPECT_EQ(j["policy"]["bonus"].get<double>(), r.policy.bonus);
  EXPECT_EQ(j["spent"].get<double>(), r.spent);
  EXPECT_EQ(j["accepted"], json::parse(R"(["a","b"])"));
  EXPECT_EQ(j["structure"]["kind"], "picking-suffix");
}
