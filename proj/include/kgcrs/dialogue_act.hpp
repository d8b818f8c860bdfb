#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "kgcrs/knowledge_graph.hpp"

namespace kgcrs {

enum class BotIntent { Query, Recommend, Chat };

std::string_view to_string(BotIntent intent);
std::optional<BotIntent> parse_bot_intent(std::string_view s);

struct RecommendedEntity {
  NodeId entity;
  std::vector<NodeId> explanation;  // matched liked attributes

  friend bool operator==(const RecommendedEntity&, const RecommendedEntity&) = default;
};

/// Tree rooted at the bot intent:
///   Query     -> attribute type -> example attributes
///   Recommend -> entities       -> matched attributes
///   Chat      -> at most one Generic node
struct DialogueAct {
  BotIntent intent = BotIntent::Chat;

  // Query: the attribute type asked about. Recommend: relation of the top
  // entity's first matched attribute. Chat: label of the edge to chat_node.
  // Selects relation-specific templates; empty when there is none.
  std::string relation;

  double type_entropy = 0.0;     // Query, normalized to [0,1]
  std::vector<NodeId> examples;  // Query

  std::vector<RecommendedEntity> recommendations;  // Recommend

  std::optional<NodeId> chat_node;  // Chat

  /// Every graph node referenced anywhere in the tree.
  std::vector<NodeId> referenced_nodes() const;

  friend bool operator==(const DialogueAct&, const DialogueAct&) = default;
};

}  // namespace kgcrs
