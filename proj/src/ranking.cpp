#include "kgcrs/ranking.hpp"

#include <algorithm>

#include "kgcrs/errors.hpp"

namespace kgcrs {
namespace {

bool adjacent(std::span<const NodeId> sorted_attrs, NodeId a) {
  return std::binary_search(sorted_attrs.begin(), sorted_attrs.end(), a);
}

std::size_t overlap(std::span<const NodeId> a, std::span<const NodeId> b) {
  std::size_t n = 0;
  auto i = a.begin();
  auto j = b.begin();
  while (i != a.end() && j != b.end()) {
    if (*i < *j) {
      ++i;
    } else if (*j < *i) {
      ++j;
    } else {
      ++n;
      ++i;
      ++j;
    }
  }
  return n;
}

}  // namespace

EntityScore score_entity(NodeId entity, const DialogueState& s, const KnowledgeGraph& g,
                         const BotConfig& cfg) {
  std::span<const NodeId> attrs = g.attribute_set(entity);
  EntityScore out;
  double liked_hits = 0.0;
  for (NodeId a : s.liked_attrs) {
    if (adjacent(attrs, a)) {
      liked_hits += 1.0;
      out.matched.push_back(a);
    }
  }
  double disliked_hits = 0.0;
  for (NodeId a : s.disliked_attrs) {
    if (adjacent(attrs, a)) disliked_hits += 1.0;
  }
  double neighborhood = 0.0;
  for (NodeId other : s.liked_entities) {
    if (other == entity) continue;
    std::span<const NodeId> other_attrs = g.attribute_set(other);
    neighborhood += static_cast<double>(overlap(attrs, other_attrs)) /
                    static_cast<double>(std::max<std::size_t>(1, other_attrs.size()));
  }
  out.score = liked_hits - cfg.negation_penalty * disliked_hits +
              cfg.neighborhood_weight * neighborhood;
  return out;
}

double match_ratio(NodeId entity, const DialogueState& s, const KnowledgeGraph& g) {
  if (s.liked_attrs.empty()) return 0.0;
  std::span<const NodeId> attrs = g.attribute_set(entity);
  std::size_t hits = 0;
  for (NodeId a : s.liked_attrs) hits += adjacent(attrs, a) ? 1 : 0;
  return static_cast<double>(hits) / static_cast<double>(s.liked_attrs.size());
}

std::vector<RankedEntity> rank_candidates(const DialogueState& s, const KnowledgeGraph& g,
                                          const BotConfig& cfg) {
  std::vector<RankedEntity> out;
  for (NodeId e : g.entities()) {
    if (s.rejected_entities.contains(e) || s.recommended.contains(e)) continue;
    EntityScore sc = score_entity(e, s, g, cfg);
    out.push_back(RankedEntity{e, sc.score, match_ratio(e, s, g), std::move(sc.matched)});
  }
  std::sort(out.begin(), out.end(), [&g](const RankedEntity& a, const RankedEntity& b) {
    if (a.score != b.score) return a.score > b.score;
    if (a.match_ratio != b.match_ratio) return a.match_ratio > b.match_ratio;
    const std::string& na = g.node(a.entity).norm_name;
    const std::string& nb = g.node(b.entity).norm_name;
    if (na != nb) return na < nb;
    return a.entity < b.entity;
  });
  return out;
}

}  // namespace kgcrs
