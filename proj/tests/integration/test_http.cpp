#include <doctest.h>
#include <httplib.h>

#include <thread>

#include "kgcrs/http_server.hpp"
#include "support/fixtures.hpp"

using namespace kgcrs;
using nlohmann::json;

namespace {

struct Running {
  Engine engine;
  HttpServer server{engine};
  std::thread thread;
  std::unique_ptr<httplib::Client> client;

  Running() {
    REQUIRE(server.bind("127.0.0.1", 0));
    thread = std::thread([this] { server.serve(); });
    server.wait_until_ready();
    client = std::make_unique<httplib::Client>("127.0.0.1", server.port());
  }
  ~Running() {
    server.stop();
    thread.join();
  }
};

json body_of(const httplib::Result& r) {
  REQUIRE(r);
  return json::parse(r->body);
}

httplib::Result create(httplib::Client& c, const std::string& name, const std::string& tsv,
                       const std::string& config) {
  httplib::MultipartFormDataItems items = {
      {"name", name, "", ""},
      {"kg", tsv, "kg.tsv", "text/tab-separated-values"},
      {"config", config, "config.json", "application/json"},
  };
  return c.Post("/bots", items);
}

}  // namespace

TEST_CASE("bot lifecycle over HTTP") {
  Running rt;
  auto& c = *rt.client;

  auto r = create(c, "single", fixtures::kSingleLine, "{}");
  REQUIRE(r);
  CHECK(r->status == 201);
  json single = body_of(r);
  CHECK(single["graph"]["nodes"] == 2);
  CHECK(single["graph"]["edges"] == 1);
  CHECK(single["config"]["mode"] == "casual");
  CHECK(r->get_header_value("Access-Control-Allow-Origin") == "*");

  auto bad = create(c, "bad", "a\tEntitty\tb\tAttribute\tR\n", "{}");
  REQUIRE(bad);
  CHECK(bad->status == 400);
  json err = body_of(bad);
  CHECK(err["error"] == "MalformedLine");
  CHECK(err["line"] == 1);
  CHECK(err.contains("detail"));
  CHECK(err.contains("stage"));

  auto alias = create(c, "alias", fixtures::kKg3Tsv, R"({"lexicon":{"aliases":{"jim":"James Cameron"}}})");
  REQUIRE(alias);
  CHECK(alias->status == 400);
  json aerr = body_of(alias);
  CHECK(aerr["error"] == "UnresolvedAlias");
  CHECK(aerr["findings"].size() == 1);

  auto kg3 = create(c, "kg3", fixtures::kKg3Tsv, R"({"mode":"cautious"})");
  REQUIRE(kg3);
  std::string id = body_of(kg3)["id"];

  // JSON body with kg_from reuses another bot's data file
  auto copy = c.Post("/bots", json{{"name", "copy"}, {"kg_from", id}}.dump(), "application/json");
  REQUIRE(copy);
  CHECK(copy->status == 201);
  CHECK(body_of(copy)["graph"]["nodes"] == 7);

  json list = body_of(c.Get("/bots"));
  CHECK(list.size() == 3);

  json one = body_of(c.Get(("/bots/" + id).c_str()));
  CHECK(one["name"] == "kg3");
  CHECK(one["config"]["matching_threshold"] == 0.9);
  CHECK(one["graph"]["nodes"] == 7);

  auto missing = c.Get("/bots/b999");
  REQUIRE(missing);
  CHECK(missing->status == 404);
  CHECK(body_of(missing)["error"] == "BotNotFound");

  auto patched = c.Patch(("/bots/" + id + "/config").c_str(), R"({"matching_threshold":0.7})", "application/json");
  REQUIRE(patched);
  CHECK(patched->status == 200);
  CHECK(body_of(patched)["matching_threshold"] == 0.7);

  auto rejected = c.Patch(("/bots/" + id + "/config").c_str(), R"({"matching_threshold":1.5})", "application/json");
  REQUIRE(rejected);
  CHECK(rejected->status == 400);
  CHECK(body_of(rejected)["error"] == "InvalidConfig");
  CHECK(body_of(c.Get(("/bots/" + id).c_str()))["config"]["matching_threshold"] == 0.7);

  auto garbage = c.Patch(("/bots/" + id + "/config").c_str(), "{nope", "application/json");
  REQUIRE(garbage);
  CHECK(garbage->status == 400);
  CHECK(body_of(garbage)["error"] == "BadRequest");

  auto pre = c.Options("/bots");
  REQUIRE(pre);
  CHECK(pre->status == 204);
}

TEST_CASE("sessions, messages, state and focus over HTTP") {
  Running rt;
  auto& c = *rt.client;
  std::string bot = body_of(create(c, "kg3", fixtures::kKg3Tsv, R"({"mode":"cautious"})"))["id"];

  auto sr = c.Post(("/bots/" + bot + "/sessions").c_str(), R"({"seed":42})", "application/json");
  REQUIRE(sr);
  CHECK(sr->status == 201);
  json session = body_of(sr);
  CHECK(session["seed"] == 42);
  std::string sid = session["session_id"];

  json fresh = body_of(c.Get(("/sessions/" + sid).c_str()));
  CHECK(fresh["transcript"].empty());
  CHECK(fresh["state"]["turn_index"] == 0);

  auto post = [&](const std::string& u) {
    return c.Post(("/sessions/" + sid + "/messages").c_str(), json{{"utterance", u}}.dump(), "application/json");
  };
  json t1 = body_of(post("hi"));
  CHECK(t1["intent"] == "Query");
  CHECK(t1["act"]["intent"] == "Query");
  CHECK(t1["frame"]["user_intent"] == "Chitchat");
  json t2 = body_of(post("I like Nolan and SciFi"));
  CHECK(t2["intent"] == "Recommend");
  CHECK(t2["response"].get<std::string>().find("Inception") != std::string::npos);
  CHECK(t2["frame"]["mentions"].size() == 2);
  CHECK_FALSE(t2["kg_focus"]["nodes"].empty());
  CHECK_FALSE(t2["top_ranking"].empty());

  json state = body_of(c.Get(("/sessions/" + sid).c_str()));
  CHECK(state["transcript"].size() == 2);
  CHECK(state["state"]["turn_index"] == 2);
  CHECK(state["transcript"][1] == t2);

  auto nobody = c.Post("/sessions/s999/messages", R"({"utterance":"hi"})", "application/json");
  REQUIRE(nobody);
  CHECK(nobody->status == 404);
  CHECK(body_of(nobody)["error"] == "SessionNotFound");

  auto noutt = c.Post(("/sessions/" + sid + "/messages").c_str(), R"({"text":"hi"})", "application/json");
  REQUIRE(noutt);
  CHECK(noutt->status == 400);

  auto focus = c.Get(("/bots/" + bot + "/kg/focus?nodes=1&radius=1").c_str());
  REQUIRE(focus);
  CHECK(focus->status == 200);
  json sg = body_of(focus);
  CHECK(sg["nodes"].size() == 3);  // Nolan and its two films
  CHECK(sg["edges"].size() == 2);

  auto badnode = c.Get(("/bots/" + bot + "/kg/focus?nodes=99").c_str());
  REQUIRE(badnode);
  CHECK(badnode->status == 400);
  CHECK(body_of(badnode)["error"] == "UnknownNode");

  auto badlist = c.Get(("/bots/" + bot + "/kg/focus?nodes=x").c_str());
  REQUIRE(badlist);
  CHECK(badlist->status == 400);
}
