#include <doctest.h>

#include <filesystem>
#include <json.hpp>
#include <random>
#include <set>
#include <sstream>

#include "firesquad/cli.hpp"
#include "fixtures.hpp"

using namespace firesquad;
namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result cli(std::vector<std::string> args) {
  args.insert(args.begin(), "firesquad");
  std::vector<const char *> argv;
  for (const auto &a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

fs::path temp_dir(const std::string &tag) {
  static std::mt19937_64 rng(std::random_device{}());
  const fs::path p = fs::temp_directory_path() / ("firesquad_" + tag + "_" + std::to_string(rng()));
  fs::create_directories(p);
  return p;
}

std::string scenario(const std::string &name) { return (fixtures::data_dir() / "scenarios" / (name + ".yaml")).string(); }

}  // namespace

TEST_CASE("plan writes plan.json") {
  const fs::path dir = temp_dir("plan");
  const Result r = cli({"plan", "--scenario", scenario("office"), "--out", dir.string(), "--dump-graph"});
  CHECK(r.code == kExitOk);
  REQUIRE(fs::exists(dir / "plan.json"));
  CHECK(fs::exists(dir / "graph.json"));
  const auto j = nlohmann::json::parse(fixtures::read_text(dir / "plan.json"));
  CHECK(!j.empty());
  fs::remove_all(dir);
}

TEST_CASE("missing map is an input error naming the path") {
  const fs::path dir = temp_dir("missing");
  const Result r = cli({"plan", "--scenario", scenario("corridor"), "--map", "/no/such/map.yaml", "--out", dir.string()});
  CHECK(r.code == kExitInputError);
  CHECK(r.err.find("/no/such/map.yaml") != std::string::npos);
  fs::remove_all(dir);
}

TEST_CASE("bad arguments") {
  CHECK(cli({}).code == kExitInputError);
  CHECK(cli({"fly"}).code == kExitInputError);
  CHECK(cli({"plan"}).code == kExitInputError);
  CHECK(cli({"plan", "--scenario", scenario("corridor"), "--tactic", "ZIGZAG"}).code == kExitInputError);
}

TEST_CASE("infeasible wall search exits 2") {
  const fs::path dir = temp_dir("infeasible");
  const std::string base = (fixtures::data_dir() / "scenarios").string();
  std::ofstream(dir / "narrow.yaml") << "map: " << base << "/../office.yaml\n"
                                     << "rooms: " << base << "/../office_rooms.yaml\n"
                                     << "graph: {wall_band: 0.05}\n"
                                     << "squads:\n"
                                     << "- id: 1\n"
                                     << "  start: {room: corridor, point: [0.8, 1.0]}\n"
                                     << "  goal: {room: corridor, point: [11.2, 1.0]}\n"
                                     << "  tactic: WALL_RHR\n"
                                     << "  search: [office_b]\n";
  const Result r = cli({"plan", "--scenario", (dir / "narrow.yaml").string(), "--out", dir.string()});
  CHECK(r.code == kExitInfeasible);
  CHECK(!r.err.empty());
  fs::remove_all(dir);
}

TEST_CASE("simulate writes a deterministic trajectory") {
  const fs::path a = temp_dir("sim_a"), b = temp_dir("sim_b");
  REQUIRE(cli({"simulate", "--scenario", scenario("corridor"), "--out", a.string()}).code == kExitOk);
  REQUIRE(cli({"simulate", "--scenario", scenario("corridor"), "--out", b.string()}).code == kExitOk);
  for (const char *f : {"plan.json", "trajectory.csv", "summary.json"}) {
    CAPTURE(f);
    REQUIRE(fs::exists(a / f));
    CHECK(fixtures::read_text(a / f) == fixtures::read_text(b / f));
  }
  std::istringstream csv(fixtures::read_text(a / "trajectory.csv"));
  std::string line;
  std::getline(csv, line);
  double last = -1.0;
  std::map<std::string, std::set<std::string>> ids;
  while (std::getline(csv, line)) {
    std::istringstream row(line);
    std::string t, squad, agent;
    std::getline(row, t, ',');
    std::getline(row, squad, ',');
    std::getline(row, agent, ',');
    CHECK(std::stod(t) >= last);
    last = std::stod(t);
    ids[t].insert(agent);
  }
  CHECK(!ids.empty());
  for (const auto &[t, s] : ids) CHECK(s.size() == 3);
  fs::remove_all(a);
  fs::remove_all(b);
}

TEST_CASE("bench") {
  const fs::path dir = temp_dir("bench");
  CHECK(cli({"bench", "--scenario", scenario("corridor"), "--reps", "0", "--out", dir.string()}).code ==
        kExitInputError);
  const Result r = cli({"bench", "--scenario", scenario("corridor"), "--reps", "1", "--out", dir.string()});
  REQUIRE(r.code == kExitOk);
  const auto j = nlohmann::json::parse(fixtures::read_text(dir / "bench.json"));
  CAPTURE(j.dump());
  const auto &tactics = j.at("tactics");
  REQUIRE(tactics.size() == 3);
  for (const auto &t : tactics) {
    CHECK(t.at("repetitions") == 1);
    CHECK(t.at("s2_d") == 0.0);
    CHECK(t.at("s2_t") == 0.0);
  }
  fs::remove_all(dir);
}

TEST_CASE("rooms validates an annotation") {
  const Result ok = cli({"rooms", "--map", (fixtures::data_dir() / "office.yaml").string(), "--rooms",
                         (fixtures::data_dir() / "office_rooms.yaml").string()});
  CHECK(ok.code == kExitOk);
  CHECK(ok.out.find("rooms valid") != std::string::npos);
  const Result bad = cli({"rooms", "--map", (fixtures::data_dir() / "corridor.yaml").string(), "--rooms",
                          (fixtures::data_dir() / "office_rooms.yaml").string()});
  CHECK(bad.code == kExitInputError);
}
