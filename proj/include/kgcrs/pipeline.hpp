#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "kgcrs/config.hpp"
#include "kgcrs/dialogue_act.hpp"
#include "kgcrs/dialogue_state.hpp"
#include "kgcrs/knowledge_graph.hpp"
#include "kgcrs/policy.hpp"
#include "kgcrs/query_understanding.hpp"
#include "kgcrs/ranking.hpp"

namespace kgcrs {

/// Everything a turn reads: the graph, one config snapshot and the matcher
/// compiled for that pair. Immutable and shared between sessions.
struct BotRuntime {
  std::shared_ptr<const KnowledgeGraph> graph;
  std::shared_ptr<const BotConfig> config;
  std::shared_ptr<const MentionMatcher> matcher;

  static std::shared_ptr<const BotRuntime> make(std::shared_ptr<const KnowledgeGraph> graph,
                                                BotConfig config);
};

// Module interfaces. The rule-based implementations below are the defaults;
// any of them can be swapped for another implementation (a learned model, a
// remote service, or a test double).

class FrameParser {
 public:
  virtual ~FrameParser() = default;
  virtual SemanticFrame parse(std::string_view utterance, const BotRuntime& bot) const = 0;
};

class EntityRanker {
 public:
  virtual ~EntityRanker() = default;
  virtual std::vector<RankedEntity> rank(const DialogueState& s, const BotRuntime& bot) const = 0;
};

class IntentPolicy {
 public:
  virtual ~IntentPolicy() = default;
  virtual PolicyDecision decide(const SemanticFrame& frame, const DialogueState& s,
                                const std::vector<RankedEntity>& ranking,
                                const BotRuntime& bot) const = 0;
};

class ActGenerator {
 public:
  virtual ~ActGenerator() = default;
  virtual DialogueAct generate(BotIntent intent, const SemanticFrame& frame, const DialogueState& s,
                               const std::vector<RankedEntity>& ranking,
                               const BotRuntime& bot) const = 0;
};

class ResponseRenderer {
 public:
  virtual ~ResponseRenderer() = default;
  virtual std::string render(const DialogueAct& act, const BotRuntime& bot,
                             std::uint64_t selector) const = 0;
};

struct Components {
  std::shared_ptr<const FrameParser> parser;
  std::shared_ptr<const EntityRanker> ranker;
  std::shared_ptr<const IntentPolicy> policy;
  std::shared_ptr<const ActGenerator> acts;
  std::shared_ptr<const ResponseRenderer> renderer;

  static Components rule_based();
};

struct TurnRecord {
  std::size_t turn = 0;  // 1-based user turn number
  std::string utterance;
  SemanticFrame frame;
  PolicyDecision decision;
  DialogueAct act;
  std::string response;
  std::vector<RankedEntity> top_ranking;  // first top_k of the ranking
  Subgraph kg_focus;
};

struct TurnOutcome {
  TurnRecord record;
  DialogueState state;                    // state after the bot act
  std::vector<RankedEntity> full_ranking;  // ranking the bot decided on
};

/// Deterministic template selector for one turn of one session.
std::uint64_t turn_selector(std::uint64_t session_seed, std::size_t turn);

/// parse -> update state -> rank -> decide -> generate act -> render ->
/// record act. Pure: `s` is untouched; on failure throws Error with the
/// failing stage set ("parse", "state", "rank", "policy", "act", "render").
TurnOutcome run_turn(const BotRuntime& bot, const Components& modules, const DialogueState& s,
                     std::string_view utterance, std::uint64_t session_seed);

}  // namespace kgcrs
