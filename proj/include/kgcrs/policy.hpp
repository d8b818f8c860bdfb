#pragma once

#include <array>
#include <vector>

#include "kgcrs/config.hpp"
#include "kgcrs/dialogue_act.hpp"
#include "kgcrs/dialogue_state.hpp"
#include "kgcrs/knowledge_graph.hpp"
#include "kgcrs/query_understanding.hpp"
#include "kgcrs/ranking.hpp"

namespace kgcrs {

struct IntentDesirability {
  double query = 0.0;
  double recommend = 0.0;
  double chat = 0.0;

  double of(BotIntent i) const;
  friend bool operator==(const IntentDesirability&, const IntentDesirability&) = default;
};

struct IntentEligibility {
  bool query = false;
  bool recommend = false;
  bool chat = true;

  bool of(BotIntent i) const;
  friend bool operator==(const IntentEligibility&, const IntentEligibility&) = default;
};

struct PolicyDecision {
  BotIntent intent = BotIntent::Chat;
  IntentDesirability desirability;
  IntentEligibility eligible;
  bool user_requested = false;
};

/// Recommend: match ratio of the top candidate. Query: normalized entropy of
/// the best unasked attribute type. Chat: the configured floor.
IntentDesirability intent_desirabilities(const SemanticFrame& frame, const DialogueState& s,
                                         const std::vector<RankedEntity>& ranking,
                                         const KnowledgeGraph& g, const BotConfig& cfg);

/// Whether the mode's recommendation gate lets the bot recommend this turn.
bool recommend_gate(const SemanticFrame& frame, const DialogueState& s,
                    const std::vector<RankedEntity>& ranking, const BotConfig& cfg);

/// Condition-decision rules:
///  1. an explicit request recommends when the gate passes; a request the
///     Cautious gate blocks asks a question instead, if one is available;
///  2. otherwise argmax of preference * desirability over eligible intents,
///     ties resolved Recommend > Query > Chat.
PolicyDecision decide_intent(const SemanticFrame& frame, const DialogueState& s,
                             const std::vector<RankedEntity>& ranking, const KnowledgeGraph& g,
                             const BotConfig& cfg);

inline BotIntent predict_intent(const SemanticFrame& frame, const DialogueState& s,
                                const std::vector<RankedEntity>& ranking, const KnowledgeGraph& g,
                                const BotConfig& cfg) {
  return decide_intent(frame, s, ranking, g, cfg).intent;
}

}  // namespace kgcrs
