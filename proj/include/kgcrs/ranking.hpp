#pragma once

#include <vector>

#include "kgcrs/config.hpp"
#include "kgcrs/dialogue_state.hpp"
#include "kgcrs/knowledge_graph.hpp"

namespace kgcrs {

struct RankedEntity {
  NodeId entity;
  double score = 0.0;
  double match_ratio = 0.0;
  std::vector<NodeId> matched_attrs;  // liked attributes adjacent to the entity, in liked order

  friend bool operator==(const RankedEntity&, const RankedEntity&) = default;
};

struct EntityScore {
  double score = 0.0;
  std::vector<NodeId> matched;
};

/// liked-attribute hits, minus negation_penalty per disliked hit, plus
/// neighborhood_weight times the attribute overlap with each liked entity
/// (normalized by that entity's attribute count). Throws KindMismatch.
EntityScore score_entity(NodeId entity, const DialogueState& s, const KnowledgeGraph& g,
                         const BotConfig& cfg);

/// Fraction of liked attributes adjacent to the entity; 0 when nothing is liked.
double match_ratio(NodeId entity, const DialogueState& s, const KnowledgeGraph& g);

/// Every entity not rejected and not already recommended, sorted by score
/// desc, match ratio desc, normalized name asc.
std::vector<RankedEntity> rank_candidates(const DialogueState& s, const KnowledgeGraph& g,
                                          const BotConfig& cfg);

}  // namespace kgcrs
