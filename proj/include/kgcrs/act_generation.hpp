#pragma once

#include <optional>
#include <string>
#include <vector>

#include "kgcrs/config.hpp"
#include "kgcrs/dialogue_act.hpp"
#include "kgcrs/dialogue_state.hpp"
#include "kgcrs/knowledge_graph.hpp"
#include "kgcrs/query_understanding.hpp"
#include "kgcrs/ranking.hpp"

namespace kgcrs {

inline constexpr std::size_t kMaxQueryExamples = 3;

struct QueryChoice {
  std::string type;
  double normalized_entropy = 0.0;
  std::vector<NodeId> examples;
};

/// Entities the bot still considers plausible when planning a question: the
/// positive-score candidates if any exist, otherwise the non-negative ones.
std::vector<NodeId> question_candidates(const std::vector<RankedEntity>& ranking);

/// Picks the unasked attribute type whose value distribution over the
/// candidate set has the highest entropy (normalized by log2 of the number of
/// distinct values). Types with fewer than two distinct values are skipped;
/// ties go to the smaller label.
std::optional<QueryChoice> select_query_attribute_type(const DialogueState& s,
                                                       const std::vector<RankedEntity>& ranking,
                                                       const KnowledgeGraph& g);

/// Throws InconsistentIntent when `intent` cannot be realized (Query with no
/// discriminating type left, Recommend with an empty ranking).
DialogueAct generate_act(BotIntent intent, const SemanticFrame& frame, const DialogueState& s,
                         const std::vector<RankedEntity>& ranking, const KnowledgeGraph& g,
                         const BotConfig& cfg);

}  // namespace kgcrs
