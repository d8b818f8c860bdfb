#include <doctest.h>

#include <atomic>
#include <chrono>
#include <filesystem>
#include <random>
#include <set>
#include <thread>

#include "kgcrs/engine.hpp"
#include "support/fixtures.hpp"

using namespace kgcrs;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    std::random_device rd;
    path = fs::temp_directory_path() / ("kgcrs-engine-" + std::to_string(rd()) + std::to_string(rd()));
    fs::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
};

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::Internal;
}

// Holds the render stage until released, and records the threshold it saw.
class GateRenderer final : public ResponseRenderer {
 public:
  mutable std::atomic<bool> entered{false};
  mutable std::atomic<bool> release{false};
  mutable std::atomic<double> seen_threshold{-1.0};

  std::string render(const DialogueAct&, const BotRuntime& bot, std::uint64_t) const override {
    entered = true;
    while (!release) std::this_thread::sleep_for(std::chrono::milliseconds(1));
    seen_threshold = bot.config->matching_threshold;
    return "ok";
  }
};

class ThrowingRenderer final : public ResponseRenderer {
 public:
  std::string render(const DialogueAct&, const BotRuntime&, std::uint64_t) const override {
    throw Error(ErrorCode::Internal, "renderer down");
  }
};

}  // namespace

TEST_CASE("create_bot examples") {
  Engine engine;
  BotInfo single = engine.create_bot("single", fixtures::kSingleLine, json::object());
  CHECK(single.stats.nodes == 2);
  CHECK(single.stats.edges == 1);
  CHECK(engine.bot_runtime(single.id)->config->mode == Mode::Casual);

  try {
    engine.create_bot("bad", "a\tEntitty\tb\tAttribute\tR\n", json::object());
    FAIL("expected MalformedLine");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::MalformedLine);
    CHECK(e.line() == 1u);
  }

  try {
    engine.create_bot("alias", fixtures::kKg3Tsv, json{{"lexicon", {{"aliases", {{"jim", "James Cameron"}}}}}});
    FAIL("expected UnresolvedAlias");
  } catch (const ValidationError& e) {
    CHECK(e.code() == ErrorCode::UnresolvedAlias);
    REQUIRE(e.findings().size() == 1);
  }

  CHECK(code_of([&] { engine.create_bot("t", fixtures::kKg3Tsv, json{{"matching_threshold", 1.5}}); }) ==
        ErrorCode::InvalidConfig);
  CHECK(engine.list_bots().size() == 1);
}

TEST_CASE("post_message examples") {
  Engine engine;
  BotInfo bot = engine.create_bot("kg3", fixtures::kKg3Tsv, json{{"mode", "cautious"}});
  auto s = engine.create_session(bot.id, 1);
  json t1 = engine.post_message(s.id, "hi");
  CHECK(t1["intent"] == "Query");
  CHECK(t1["act"]["intent"] == "Query");
  json t2 = engine.post_message(s.id, "I like Nolan and SciFi");
  CHECK(t2["intent"] == "Recommend");
  CHECK(t2["response"].get<std::string>().find("Inception") != std::string::npos);

  CHECK(code_of([&] { engine.post_message("s999", "hi"); }) == ErrorCode::SessionNotFound);
  CHECK(code_of([&] { engine.create_session("b999"); }) == ErrorCode::BotNotFound);
}

TEST_CASE("get_state examples") {
  Engine engine;
  BotInfo bot = engine.create_bot("kg3", fixtures::kKg3Tsv, json::object());
  auto s = engine.create_session(bot.id, 3);
  json fresh = engine.get_state(s.id);
  CHECK(fresh["transcript"].empty());
  CHECK(fresh["state"]["liked_attrs"].empty());
  CHECK(fresh["state"]["turn_index"] == 0);
  CHECK(fresh["seed"] == 3);

  engine.post_message(s.id, "hi");
  engine.post_message(s.id, "Nolan please");
  json after = engine.get_state(s.id);
  CHECK(after["transcript"].size() == 2);
  CHECK(after["state"]["turn_index"] == 2);
  CHECK(code_of([&] { engine.get_state("nope"); }) == ErrorCode::SessionNotFound);
}

TEST_CASE("update_config applies from the next turn") {
  Engine engine;
  BotInfo bot = engine.create_bot("kg3", fixtures::kKg3Tsv, json{{"mode", "cautious"}, {"matching_threshold", 0.5}});
  auto s = engine.create_session(bot.id, 1);
  TurnOutcome t1 = engine.post_message_raw(s.id, "I like Nolan and Romance");
  CHECK(t1.record.decision.eligible.recommend);

  BotConfig cfg = engine.update_config(bot.id, json{{"matching_threshold", 0.9}});
  CHECK(cfg.matching_threshold == 0.9);
  TurnOutcome t2 = engine.post_message_raw(s.id, "hmm");
  CHECK_FALSE(t2.record.decision.eligible.recommend);
  CHECK(engine.bot_runtime(bot.id)->config->matching_threshold == 0.9);
}

TEST_CASE("a config update during a turn waits for the next turn") {
  auto gate = std::make_shared<GateRenderer>();
  Components modules = Components::rule_based();
  modules.renderer = gate;
  Engine engine(std::nullopt, modules);
  BotInfo bot = engine.create_bot("kg3", fixtures::kKg3Tsv, json{{"matching_threshold", 0.3}});
  auto s = engine.create_session(bot.id, 1);
  std::thread turn([&] { engine.post_message(s.id, "hi"); });
  while (!gate->entered) std::this_thread::sleep_for(std::chrono::milliseconds(1));
  engine.update_config(bot.id, json{{"matching_threshold", 0.8}});
  gate->release = true;
  turn.join();
  CHECK(gate->seen_threshold == 0.3);
  engine.post_message(s.id, "again");
  CHECK(gate->seen_threshold == 0.8);
}

TEST_CASE("invalid updates change nothing") {
  Engine engine;
  BotInfo bot = engine.create_bot("kg3", fixtures::kKg3Tsv, json::object());
  BotConfig before = *engine.bot_runtime(bot.id)->config;
  try {
    engine.update_config(bot.id, json{{"matching_threshold", 1.5}});
    FAIL("expected rejection");
  } catch (const ValidationError& e) {
    CHECK(e.code() == ErrorCode::InvalidConfig);
    REQUIRE_FALSE(e.findings().empty());
    CHECK(e.findings()[0].field == "matching_threshold");
  }
  CHECK(*engine.bot_runtime(bot.id)->config == before);
}

TEST_CASE("scaling all preferences leaves every choice unchanged") {
  const std::vector<std::string> script = {"hi", "I like Nolan", "not SciFi", "recommend something",
                                           "something else", "Cameron maybe", "yes", "hello"};
  for (const char* mode : {"casual", "cautious"}) {
    Engine engine;
    BotInfo a = engine.create_bot("a", fixtures::kKg3Tsv,
                                  json{{"mode", mode}, {"preferences", {{"query", 0.7}, {"recommend", 0.7}, {"chat", 0.7}}}});
    BotInfo b = engine.create_bot("b", fixtures::kKg3Tsv,
                                  json{{"mode", mode}, {"preferences", {{"query", 1.0}, {"recommend", 1.0}, {"chat", 1.0}}}});
    auto sa = engine.create_session(a.id, 9);
    auto sb = engine.create_session(b.id, 9);
    for (const std::string& u : script) {
      CHECK(engine.post_message(sa.id, u)["intent"] == engine.post_message(sb.id, u)["intent"]);
    }
  }
}

TEST_CASE("a failing turn leaves the session untouched") {
  Components modules = Components::rule_based();
  modules.renderer = std::make_shared<ThrowingRenderer>();
  Engine engine(std::nullopt, modules);
  BotInfo bot = engine.create_bot("kg3", fixtures::kKg3Tsv, json::object());
  auto s = engine.create_session(bot.id, 1);
  json before = engine.get_state(s.id);
  try {
    engine.post_message(s.id, "I like Nolan");
    FAIL("expected failure");
  } catch (const Error& e) {
    CHECK(e.stage() == "render");
  }
  CHECK(engine.get_state(s.id) == before);
}

TEST_CASE("concurrent messages to one session are serialized") {
  Engine engine;
  BotInfo bot = engine.create_bot("kg3", fixtures::kKg3Tsv, json::object());
  auto s = engine.create_session(bot.id, 1);
  std::vector<std::thread> threads;
  for (int t = 0; t < 8; ++t) {
    threads.emplace_back([&, t] {
      for (int i = 0; i < 5; ++i) engine.post_message(s.id, t % 2 == 0 ? "Nolan" : "not SciFi");
    });
  }
  for (auto& th : threads) th.join();
  json st = engine.get_state(s.id);
  CHECK(st["transcript"].size() == 40);
  CHECK(st["state"]["turn_index"] == 40);
  std::set<int> turns;
  for (const json& rec : st["transcript"]) turns.insert(rec["turn"].get<int>());
  CHECK(turns.size() == 40);
  CHECK(*turns.begin() == 1);
  CHECK(*turns.rbegin() == 40);
}

TEST_CASE("bots and configs survive a restart") {
  TempDir dir;
  std::vector<BotInfo> before;
  BotConfig patched;
  {
    Engine engine(dir.path);
    before.push_back(engine.create_bot("kg3", fixtures::kKg3Tsv, json{{"mode", "cautious"}}));
    before.push_back(engine.create_bot("single", fixtures::kSingleLine, json{{"top_k", 2}}));
    before.push_back(engine.create_bot_from("copy", before[0].id, json::object()));
    patched = engine.update_config(before[0].id, json{{"templates", {{"query.Director", {"D? {attributes}"}}}}});
    CHECK(fs::exists(dir.path / "bots" / before[0].id / "kg.tsv"));
    CHECK(fs::exists(dir.path / "bots" / before[0].id / "config.json"));
    CHECK(fs::exists(dir.path / "bots" / before[0].id / "meta.json"));
  }
  Engine restarted(dir.path);
  auto after = restarted.list_bots();
  REQUIRE(after.size() == 3);
  for (const BotInfo& b : before) {
    BotInfo r = restarted.bot_info(b.id);
    CHECK(r.name == b.name);
    CHECK(r.created_at == b.created_at);
    CHECK(r.stats.nodes == b.stats.nodes);
    CHECK(r.stats.edges == b.stats.edges);
  }
  CHECK(*restarted.bot_runtime(before[0].id)->config == patched);
  CHECK(restarted.bot_runtime(before[1].id)->config->top_k == 2);
  CHECK(restarted.bot_runtime(before[2].id)->graph->nodes().size() == 7);

  BotInfo fresh = restarted.create_bot("new", fixtures::kKg3Tsv, json::object());
  for (const BotInfo& b : before) CHECK(fresh.id != b.id);
}

TEST_CASE("kg_focus checks node ids") {
  Engine engine;
  BotInfo bot = engine.create_bot("kg3", fixtures::kKg3Tsv, json::object());
  auto g = engine.bot_runtime(bot.id)->graph;
  Subgraph sg = engine.kg_focus(bot.id, {fixtures::id_of(*g, "Nolan")}, 1);
  CHECK(sg.nodes.size() == 3);
  CHECK(code_of([&] { engine.kg_focus(bot.id, {NodeId{77}}, 1); }) == ErrorCode::UnknownNode);
}
