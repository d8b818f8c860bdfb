#include "kgcrs/policy.hpp"

#include <algorithm>
#include <cmath>

#include "kgcrs/act_generation.hpp"

namespace kgcrs {

double IntentDesirability::of(BotIntent i) const {
  switch (i) {
    case BotIntent::Query: return query;
    case BotIntent::Recommend: return recommend;
    case BotIntent::Chat: return chat;
  }
  return 0.0;
}

bool IntentEligibility::of(BotIntent i) const {
  switch (i) {
    case BotIntent::Query: return query;
    case BotIntent::Recommend: return recommend;
    case BotIntent::Chat: return chat;
  }
  return false;
}

IntentDesirability intent_desirabilities(const SemanticFrame&, const DialogueState& s,
                                         const std::vector<RankedEntity>& ranking,
                                         const KnowledgeGraph& g, const BotConfig& cfg) {
  IntentDesirability d;
  d.recommend = ranking.empty() ? 0.0 : ranking.front().match_ratio;
  if (auto q = select_query_attribute_type(s, ranking, g)) d.query = q->normalized_entropy;
  d.chat = cfg.chat_floor;
  return d;
}

bool recommend_gate(const SemanticFrame& frame, const DialogueState& s,
                    const std::vector<RankedEntity>& ranking, const BotConfig& cfg) {
  if (ranking.empty()) return false;
  if (cfg.mode == Mode::Cautious) {
    return !s.liked_attrs.empty() && ranking.front().match_ratio >= cfg.matching_threshold;
  }
  return ranking.front().score > 0.0 || frame.user_intent == UserIntent::RequestRecommendation;
}

namespace {

double preference(const BotConfig& cfg, BotIntent i) {
  switch (i) {
    case BotIntent::Query: return cfg.prefs.query;
    case BotIntent::Recommend: return cfg.prefs.recommend;
    case BotIntent::Chat: return cfg.prefs.chat;
  }
  return 0.0;
}

// Relative tolerance so that rescaling every preference by the same factor
// cannot turn an exact tie into a rounding-error win.
bool strictly_greater(double a, double b) {
  return a - b > 1e-9 * std::max(std::abs(a), std::abs(b));
}

}  // namespace

PolicyDecision decide_intent(const SemanticFrame& frame, const DialogueState& s,
                             const std::vector<RankedEntity>& ranking, const KnowledgeGraph& g,
                             const BotConfig& cfg) {
  PolicyDecision out;
  out.desirability = intent_desirabilities(frame, s, ranking, g, cfg);
  out.user_requested = frame.user_intent == UserIntent::RequestRecommendation;
  out.eligible.recommend = recommend_gate(frame, s, ranking, cfg);
  out.eligible.query = select_query_attribute_type(s, ranking, g).has_value();
  out.eligible.chat = true;

  if (out.user_requested) {
    if (out.eligible.recommend) {
      out.intent = BotIntent::Recommend;
      return out;
    }
    if (out.eligible.query) {
      out.intent = BotIntent::Query;
      return out;
    }
  }

  std::optional<BotIntent> best;
  double best_value = 0.0;
  for (BotIntent i : {BotIntent::Recommend, BotIntent::Query, BotIntent::Chat}) {
    if (!out.eligible.of(i)) continue;
    double v = preference(cfg, i) * out.desirability.of(i);
    if (!best || strictly_greater(v, best_value)) {
      best = i;
      best_value = v;
    }
  }
  out.intent = *best;
  return out;
}

}  // namespace kgcrs
