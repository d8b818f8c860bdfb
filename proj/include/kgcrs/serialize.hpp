#pragma once

#include <json.hpp>

#include "kgcrs/dialogue_act.hpp"
#include "kgcrs/dialogue_state.hpp"
#include "kgcrs/knowledge_graph.hpp"
#include "kgcrs/pipeline.hpp"
#include "kgcrs/policy.hpp"
#include "kgcrs/query_understanding.hpp"
#include "kgcrs/ranking.hpp"

// Structured documents returned by the service and written by the CLI.
// Node references always carry id, display name and kind.
namespace kgcrs::json_doc {

using nlohmann::json;

json node_ref(const KnowledgeGraph& g, NodeId id);
json frame(const SemanticFrame& f, const KnowledgeGraph& g);
json act(const DialogueAct& a, const KnowledgeGraph& g);
json decision(const PolicyDecision& d);
json ranking(const std::vector<RankedEntity>& r, const KnowledgeGraph& g);
json subgraph(const Subgraph& sg, const KnowledgeGraph& g);
json state(const DialogueState& s, const KnowledgeGraph& g);
json turn(const TurnRecord& rec, const KnowledgeGraph& g);
json graph_stats(const KnowledgeGraph& g, const LoadStats& stats);

}  // namespace kgcrs::json_doc
