#pragma once

// Independent re-implementations of the scoring and question-selection rules,
// computed from the raw edge list only. Tests compare the library against them.

#include <optional>
#include <string>
#include <vector>

#include "kgcrs/config.hpp"
#include "kgcrs/dialogue_state.hpp"
#include "kgcrs/knowledge_graph.hpp"

namespace oracle {

struct Scored {
  kgcrs::NodeId entity;
  double score = 0.0;
  double ratio = 0.0;
};

bool adjacent(const kgcrs::KnowledgeGraph& g, kgcrs::NodeId a, kgcrs::NodeId b);
std::vector<kgcrs::NodeId> attrs_of(const kgcrs::KnowledgeGraph& g, kgcrs::NodeId entity);

double score(const kgcrs::KnowledgeGraph& g, const kgcrs::DialogueState& s, kgcrs::NodeId e,
             double lambda, double beta);
double ratio(const kgcrs::KnowledgeGraph& g, const kgcrs::DialogueState& s, kgcrs::NodeId e);

/// Exhaustive ranking: every eligible entity, sorted with the documented keys.
std::vector<Scored> rank(const kgcrs::KnowledgeGraph& g, const kgcrs::DialogueState& s, double lambda,
                         double beta);

struct TypeChoice {
  std::string type;
  double entropy = 0.0;
};

/// Best unasked attribute type over `candidates` by normalized entropy.
std::optional<TypeChoice> best_type(const kgcrs::KnowledgeGraph& g, const kgcrs::DialogueState& s,
                                    const std::vector<kgcrs::NodeId>& candidates);

}  // namespace oracle
