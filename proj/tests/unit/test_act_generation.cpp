#include <doctest.h>

#include <cmath>
#include <random>

#include "kgcrs/act_generation.hpp"
#include "kgcrs/errors.hpp"
#include "kgcrs/query_understanding.hpp"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"

using namespace kgcrs;
using fixtures::id_of;

namespace {

const double kH21 = -(2.0 / 3.0) * std::log2(2.0 / 3.0) - (1.0 / 3.0) * std::log2(1.0 / 3.0);

}  // namespace

TEST_CASE("select_query_attribute_type on KG-3") {
  auto g = fixtures::kg3();
  BotConfig c;
  DialogueState s;
  auto q = select_query_attribute_type(s, rank_candidates(s, *g, c), *g);
  REQUIRE(q.has_value());
  CHECK(q->type == "Director");
  CHECK(q->normalized_entropy == doctest::Approx(kH21).epsilon(1e-12));
  CHECK(q->normalized_entropy == doctest::Approx(0.918).epsilon(5e-4));
  CHECK(fixtures::names(*g, q->examples) == std::vector<std::string>{"Nolan", "Cameron"});

  s.asked_types.insert("Director");
  q = select_query_attribute_type(s, rank_candidates(s, *g, c), *g);
  REQUIRE(q.has_value());
  CHECK(q->type == "Genre");

  s.asked_types.insert("Genre");
  CHECK_FALSE(select_query_attribute_type(s, rank_candidates(s, *g, c), *g).has_value());
}

TEST_CASE("single-valued types are skipped") {
  auto g = fixtures::load(
      "A\tEntity\tNolan\tAttribute\tDirector\n"
      "B\tEntity\tNolan\tAttribute\tDirector\n"
      "A\tEntity\tX\tAttribute\tGenre\n"
      "B\tEntity\tY\tAttribute\tGenre\n");
  DialogueState s;
  auto q = select_query_attribute_type(s, rank_candidates(s, *g, BotConfig{}), *g);
  REQUIRE(q.has_value());
  CHECK(q->type == "Genre");
  CHECK(q->normalized_entropy == doctest::Approx(1.0));
}

TEST_CASE("examples are capped at three, most frequent first") {
  auto g = fixtures::load(
      "A\tEntity\tzed\tAttribute\tTag\n"
      "B\tEntity\tzed\tAttribute\tTag\n"
      "C\tEntity\tbee\tAttribute\tTag\n"
      "D\tEntity\tant\tAttribute\tTag\n"
      "E\tEntity\tcat\tAttribute\tTag\n");
  auto q = select_query_attribute_type(DialogueState{}, rank_candidates(DialogueState{}, *g, BotConfig{}), *g);
  REQUIRE(q.has_value());
  CHECK(fixtures::names(*g, q->examples) == std::vector<std::string>{"zed", "ant", "bee"});
}

TEST_CASE("question candidates prefer positive scores") {
  auto g = fixtures::kg3();
  DialogueState s;
  s.liked_attrs = {id_of(*g, "Nolan"), id_of(*g, "SciFi")};
  auto ranking = rank_candidates(s, *g, BotConfig{});
  auto cands = question_candidates(ranking);
  CHECK(fixtures::names(*g, cands) == std::vector<std::string>{"Inception", "Interstellar"});
  // Inception and Interstellar cannot be told apart
  CHECK_FALSE(select_query_attribute_type(s, ranking, *g).has_value());

  DialogueState neg;
  neg.disliked_attrs = {id_of(*g, "Romance")};
  CHECK(fixtures::names(*g, question_candidates(rank_candidates(neg, *g, BotConfig{}))) ==
        std::vector<std::string>{"Inception", "Interstellar"});
}

TEST_CASE("entropy selection agrees with the oracle") {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 300; ++trial) {
    auto g = fixtures::load(fixtures::random_graph_tsv(rng, 10, 4));
    DialogueState s = fixtures::random_state(rng, *g);
    auto ranking = rank_candidates(s, *g, BotConfig{});

    // candidate set rebuilt from the oracle ranking
    auto scored = oracle::rank(*g, s, 1.0, 0.5);
    bool any_positive = false;
    for (const auto& x : scored) any_positive |= x.score > 0.0;
    std::vector<NodeId> cands;
    for (const auto& x : scored) {
      if (any_positive ? x.score > 0.0 : x.score >= 0.0) cands.push_back(x.entity);
    }

    auto got = select_query_attribute_type(s, ranking, *g);
    auto want = oracle::best_type(*g, s, cands);
    REQUIRE(got.has_value() == want.has_value());
    if (!got) continue;
    CHECK(got->normalized_entropy == doctest::Approx(want->entropy).epsilon(1e-9));
    CHECK_FALSE(s.asked_types.contains(got->type));
    if (std::abs(got->normalized_entropy - want->entropy) > 1e-9) {
      CHECK(got->type == want->type);
    }
    CHECK(got->examples.size() <= kMaxQueryExamples);
  }
}

TEST_CASE("generate_act examples") {
  auto g = fixtures::kg3();
  BotConfig c = BotConfig::preset(Mode::Cautious);
  c.top_k = 1;
  DialogueState s;
  s.liked_attrs = {id_of(*g, "Nolan"), id_of(*g, "SciFi")};
  auto ranking = rank_candidates(s, *g, c);
  DialogueAct rec = generate_act(BotIntent::Recommend, SemanticFrame{}, s, ranking, *g, c);
  REQUIRE(rec.recommendations.size() == 1);
  CHECK(g->node(rec.recommendations[0].entity).name == "Inception");
  CHECK(fixtures::names(*g, rec.recommendations[0].explanation) == std::vector<std::string>{"Nolan", "SciFi"});

  DialogueState empty;
  DialogueAct q = generate_act(BotIntent::Query, SemanticFrame{}, empty, rank_candidates(empty, *g, c), *g, c);
  CHECK(q.intent == BotIntent::Query);
  CHECK(q.relation == "Director");
  CHECK(fixtures::names(*g, q.examples) == std::vector<std::string>{"Nolan", "Cameron"});

  DialogueAct chat = generate_act(BotIntent::Chat, SemanticFrame{}, empty, rank_candidates(empty, *g, c), *g, c);
  CHECK(chat.intent == BotIntent::Chat);
  CHECK_FALSE(chat.chat_node.has_value());
  CHECK(chat.referenced_nodes().empty());
}

TEST_CASE("recommend takes top k and cautious mode drops weak extras") {
  auto g = fixtures::kg3();
  DialogueState s;
  s.liked_attrs = {id_of(*g, "Nolan"), id_of(*g, "SciFi")};
  BotConfig casual = BotConfig::preset(Mode::Casual);
  casual.top_k = 5;
  auto ranking = rank_candidates(s, *g, casual);
  CHECK(generate_act(BotIntent::Recommend, {}, s, ranking, *g, casual).recommendations.size() == 3);
  BotConfig cautious = BotConfig::preset(Mode::Cautious);
  cautious.top_k = 5;
  CHECK(generate_act(BotIntent::Recommend, {}, s, ranking, *g, cautious).recommendations.size() == 2);
}

TEST_CASE("chat act picks a generic neighbour of the last mention") {
  auto g = fixtures::load(
      "Inception\tEntity\tNolan\tAttribute\tDirector\n"
      "Nolan\tAttribute\tOscar nominee\tGeneric\tAward\n"
      "Nolan\tAttribute\tBritish\tGeneric\tNationality\n");
  SemanticFrame f = parse_utterance("Nolan", *g, Lexicon::defaults());
  DialogueState s = apply_frame(new_state(), f, *g);
  DialogueAct chat = generate_act(BotIntent::Chat, f, s, rank_candidates(s, *g, BotConfig{}), *g, BotConfig{});
  REQUIRE(chat.chat_node.has_value());
  CHECK(g->node(*chat.chat_node).name == "British");
  CHECK(chat.relation == "Nationality");
}

TEST_CASE("inconsistent intents are reported") {
  auto g = fixtures::kg3();
  DialogueState all;
  all.asked_types = {"Director", "Genre"};
  auto ranking = rank_candidates(all, *g, BotConfig{});
  try {
    generate_act(BotIntent::Query, {}, all, ranking, *g, BotConfig{});
    FAIL("expected InconsistentIntent");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::InconsistentIntent);
  }
  CHECK_THROWS_AS(generate_act(BotIntent::Recommend, {}, all, {}, *g, BotConfig{}), Error);
}

TEST_CASE("generated acts respect state and graph") {
  std::mt19937_64 rng(37);
  for (int trial = 0; trial < 200; ++trial) {
    auto g = fixtures::load(fixtures::random_graph_tsv(rng, 10, 4));
    DialogueState s = fixtures::random_state(rng, *g);
    BotConfig c;
    auto ranking = rank_candidates(s, *g, c);
    if (select_query_attribute_type(s, ranking, *g)) {
      DialogueAct q = generate_act(BotIntent::Query, {}, s, ranking, *g, c);
      CHECK_FALSE(s.asked_types.contains(q.relation));
    }
    if (!ranking.empty()) {
      DialogueAct r = generate_act(BotIntent::Recommend, {}, s, ranking, *g, c);
      for (const auto& rec : r.recommendations) {
        CHECK_FALSE(s.rejected_entities.contains(rec.entity));
        CHECK_FALSE(s.recommended.contains(rec.entity));
        for (NodeId a : rec.explanation) {
          CHECK(oracle::adjacent(*g, a, rec.entity));
          CHECK(s.liked_attrs.contains(a));
        }
      }
    }
  }
}
