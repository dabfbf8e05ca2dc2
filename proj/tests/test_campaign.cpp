#include <doctest.h>

#include <fstream>
#include <stdexcept>

#include "linenet/campaign.hpp"
#include "linenet/channel_sim.hpp"

using namespace linenet;
using nlohmann::json;

namespace {

json minimal() {
  return json::parse(R"({
    "master_seed": 9,
    "trials": 2,
    "grid": {"scheme": ["greedy"], "k": [100], "L": [2], "eps": [0.1]}
  })");
}

std::string error_path(const json& doc) {
  try {
    parse_campaign(doc);
  } catch (const CampaignError& e) {
    return e.path();
  }
  return "no error";
}

}  // namespace

TEST_CASE("campaign grid expansion") {
  auto doc = json::parse(R"({
    "trials": 1,
    "payload_size": 2,
    "horizon": 5000,
    "grid": {"scheme": ["greedy", "feedback"], "k": [50, 60], "links": [[0.1], [0.1, 0.2]],
             "params": [{"c": 2.5}, {"q": 16, "overhead_l": "auto"}]}
  })");
  auto spec = parse_campaign(doc);
  CHECK(spec.cells.size() == 2 * 2 * 2 * 2);
  CHECK(spec.cells[0].config.scheme == SchemeId::kGreedyRandom);
  CHECK(spec.cells[0].config.payload_size == 2);
  CHECK(*spec.cells[0].config.horizon == 5000);
  CHECK(spec.cells[0].config.params.c == 2.5);
  CHECK(spec.cells[1].config.links.size() == 2);
  CHECK(spec.cells[2].config.params.q == 16);
  CHECK(spec.csv_path.empty());
}

TEST_CASE("campaign schema errors carry a JSON pointer") {
  auto doc = minimal();
  doc["bogus"] = 1;
  CHECK(error_path(doc) == "/bogus");
  doc = minimal();
  doc["trials"] = 0;
  CHECK(error_path(doc) == "/trials");
  doc = minimal();
  doc.erase("trials");
  CHECK(error_path(doc) == "");
  doc = minimal();
  doc["grid"]["scheme"] = json::array({"greedy", "warp-drive"});
  CHECK(error_path(doc) == "/grid/scheme/1");
  doc = minimal();
  doc["grid"]["eps"] = json::array({0.1, 1.5});
  CHECK(error_path(doc) == "/grid/eps/1");
  doc = minimal();
  doc["grid"]["k"] = json::array();
  CHECK(error_path(doc) == "/grid/k");
  doc = minimal();
  doc["grid"].erase("L");
  doc["grid"].erase("eps");
  CHECK(error_path(doc) == "/grid");
  doc = minimal();
  doc["grid"]["params"] = json::array({json{{"q", 3}}});
  CHECK(error_path(doc).rfind("/grid/params/0", 0) == 0);
  doc = minimal();
  doc["grid"]["dag"] = json::array({json{{"nodes", 2}}});
  CHECK(error_path(doc) == "/grid/dag/0");
  doc = minimal();
  doc["grid"]["dag"] = json::array({"missing-file.json"});
  CHECK(error_path(doc) == "/grid/dag/0");
  CHECK(error_path(json::array()) == "");
}

TEST_CASE("one-cell campaign equals a direct run") {
  auto doc = minimal();
  doc["trials"] = 1;
  auto spec = parse_campaign(doc);
  auto agg = run_campaign(spec, 1);
  NetworkConfig cfg = spec.cells[0].config;
  cfg.seed = trial_seed(9, 0, 0);
  auto rec = measure(run(cfg));
  REQUIRE(agg.size() == 1);
  CHECK(agg[0].records[0].completion_slot == rec.completion_slot);
  CHECK(agg[0].records[0].received == rec.received);
}

TEST_CASE("campaigns are deterministic, including DAG cells") {
  auto doc = minimal();
  doc["grid"]["dag"] = json::array({json::parse(R"({"nodes": 4, "source": 0, "sink": 3,
      "edges": [{"from": 0, "to": 1, "epsilon": 0.1}, {"from": 1, "to": 3, "epsilon": 0.1},
                {"from": 0, "to": 2, "epsilon": 0.2}, {"from": 2, "to": 3, "epsilon": 0.1}]})")});
  auto spec = parse_campaign(doc);
  REQUIRE(spec.cells.size() == 2);
  CHECK(spec.cells[1].dag);
  auto a = to_csv(run_campaign(spec, 1));
  auto b = to_csv(run_campaign(spec, 2));
  CHECK(a == b);
  CHECK(a.find("0.1;0.1;0.2;0.1") != std::string::npos);
}

TEST_CASE("shipped campaign files parse") {
  for (const char* name : {"table1.json", "multipath.json"}) {
    CAPTURE(name);
    const std::string dir = std::string(LINENET_SOURCE_DIR) + "/campaigns";
    std::ifstream in(dir + "/" + name);
    REQUIRE(in);
    auto spec = parse_campaign(json::parse(in), dir);
    CHECK(!spec.cells.empty());
  }
}
