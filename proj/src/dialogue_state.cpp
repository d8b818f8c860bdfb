#include "kgcrs/dialogue_state.hpp"

#include "kgcrs/errors.hpp"

namespace kgcrs {

DialogueState new_state() { return DialogueState{}; }

DialogueState apply_frame(const DialogueState& s, const SemanticFrame& frame,
                          const KnowledgeGraph& g) {
  for (const Mention& m : frame.mentions) {
    if (!g.contains(m.node)) {
      throw Error(ErrorCode::UnknownNode,
                  "mention references node " + std::to_string(m.node.value) + " not in graph");
    }
  }

  DialogueState next = s;
  for (const Mention& m : frame.mentions) {
    const Node& node = g.node(m.node);
    bool positive = m.polarity == Polarity::Positive;
    if (node.kind == NodeKind::Attribute) {
      if (positive) {
        next.disliked_attrs.erase(m.node);
        next.liked_attrs.insert(m.node);
      } else {
        next.liked_attrs.erase(m.node);
        next.disliked_attrs.insert(m.node);
      }
    } else if (node.kind == NodeKind::Entity) {
      if (positive) {
        next.rejected_entities.erase(m.node);
        next.liked_entities.insert(m.node);
      } else {
        next.liked_entities.erase(m.node);
        next.rejected_entities.insert(m.node);
      }
    }
  }

  if (!next.recommended.empty()) {
    NodeId last = next.recommended.back();
    if (frame.user_intent == UserIntent::AcceptRecommendation) {
      next.rejected_entities.erase(last);
      next.liked_entities.insert(last);
    } else if (frame.user_intent == UserIntent::RejectRecommendation) {
      next.liked_entities.erase(last);
      next.rejected_entities.insert(last);
    }
  }

  next.turn_index += 1;
  next.history.push_back(HistoryEntry{Speaker::User, frame.raw, frame});
  return next;
}

DialogueState apply_bot_act(const DialogueState& s, const DialogueAct& act,
                            std::string utterance) {
  DialogueState next = s;
  if (act.intent == BotIntent::Query && !act.relation.empty()) {
    next.asked_types.insert(act.relation);
  } else if (act.intent == BotIntent::Recommend) {
    for (const RecommendedEntity& r : act.recommendations) next.recommended.insert(r.entity);
  }
  next.history.push_back(HistoryEntry{Speaker::Bot, std::move(utterance), act});
  return next;
}

DialogueState replay_history(const std::vector<HistoryEntry>& history, const KnowledgeGraph& g) {
  DialogueState s = new_state();
  for (const HistoryEntry& h : history) {
    if (const auto* frame = std::get_if<SemanticFrame>(&h.content)) {
      s = apply_frame(s, *frame, g);
    } else {
      s = apply_bot_act(s, std::get<DialogueAct>(h.content), h.utterance);
    }
  }
  return s;
}

std::optional<NodeId> last_mentioned_node(const DialogueState& s) {
  for (auto it = s.history.rbegin(); it != s.history.rend(); ++it) {
    if (const auto* frame = std::get_if<SemanticFrame>(&it->content)) {
      if (!frame->mentions.empty()) return frame->mentions.back().node;
    }
  }
  return std::nullopt;
}

}  // namespace kgcrs
