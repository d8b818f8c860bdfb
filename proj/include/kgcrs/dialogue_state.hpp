#pragma once

#include <string>
#include <variant>
#include <vector>

#include "kgcrs/dialogue_act.hpp"
#include "kgcrs/knowledge_graph.hpp"
#include "kgcrs/ordered_set.hpp"
#include "kgcrs/query_understanding.hpp"

namespace kgcrs {

enum class Speaker { User, Bot };

struct HistoryEntry {
  Speaker speaker = Speaker::User;
  std::string utterance;
  std::variant<SemanticFrame, DialogueAct> content;

  friend bool operator==(const HistoryEntry&, const HistoryEntry&) = default;
};

struct DialogueState {
  OrderedSet<NodeId> liked_attrs;
  OrderedSet<NodeId> disliked_attrs;
  OrderedSet<NodeId> liked_entities;
  OrderedSet<NodeId> rejected_entities;
  OrderedSet<NodeId> recommended;
  OrderedSet<std::string> asked_types;
  std::vector<HistoryEntry> history;
  std::size_t turn_index = 0;

  friend bool operator==(const DialogueState&, const DialogueState&) = default;
};

DialogueState new_state();

/// Folds one user frame into the state. Throws UnknownNode if a mention
/// references a node outside `g`.
DialogueState apply_frame(const DialogueState& s, const SemanticFrame& frame,
                          const KnowledgeGraph& g);

/// Records the act the bot just emitted. `utterance` is the rendered response.
DialogueState apply_bot_act(const DialogueState& s, const DialogueAct& act,
                            std::string utterance = {});

/// Rebuilds a state from `history` alone, starting from new_state().
DialogueState replay_history(const std::vector<HistoryEntry>& history, const KnowledgeGraph& g);

/// The most recently mentioned node across user turns, if any.
std::optional<NodeId> last_mentioned_node(const DialogueState& s);

}  // namespace kgcrs
