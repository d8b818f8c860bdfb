#include "kgcrs/act_generation.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "kgcrs/errors.hpp"

namespace kgcrs {

std::string_view to_string(BotIntent intent) {
  switch (intent) {
    case BotIntent::Query: return "Query";
    case BotIntent::Recommend: return "Recommend";
    case BotIntent::Chat: return "Chat";
  }
  return "Chat";
}

std::optional<BotIntent> parse_bot_intent(std::string_view s) {
  for (BotIntent i : {BotIntent::Query, BotIntent::Recommend, BotIntent::Chat}) {
    if (to_string(i) == s) return i;
  }
  return std::nullopt;
}

std::vector<NodeId> DialogueAct::referenced_nodes() const {
  std::vector<NodeId> out = examples;
  for (const RecommendedEntity& r : recommendations) {
    out.push_back(r.entity);
    out.insert(out.end(), r.explanation.begin(), r.explanation.end());
  }
  if (chat_node) out.push_back(*chat_node);
  return out;
}

std::vector<NodeId> question_candidates(const std::vector<RankedEntity>& ranking) {
  bool any_positive = std::any_of(ranking.begin(), ranking.end(),
                                  [](const RankedEntity& r) { return r.score > 0.0; });
  std::vector<NodeId> out;
  for (const RankedEntity& r : ranking) {
    if (any_positive ? r.score > 0.0 : r.score >= 0.0) out.push_back(r.entity);
  }
  return out;
}

std::optional<QueryChoice> select_query_attribute_type(const DialogueState& s,
                                                       const std::vector<RankedEntity>& ranking,
                                                       const KnowledgeGraph& g) {
  std::vector<NodeId> candidates = question_candidates(ranking);
  std::optional<QueryChoice> best;
  for (const std::string& type : g.attribute_types()) {
    if (s.asked_types.contains(type)) continue;
    std::map<NodeId, std::size_t> counts;
    for (NodeId e : candidates) {
      const auto& groups = g.attributes_of_entity(e);
      auto it = groups.find(type);
      if (it == groups.end()) continue;
      for (NodeId a : it->second) ++counts[a];
    }
    if (counts.size() < 2) continue;

    // Sum over sorted counts so equal distributions give bit-identical entropies.
    std::vector<std::size_t> freq;
    std::size_t total = 0;
    for (const auto& [a, n] : counts) {
      freq.push_back(n);
      total += n;
    }
    std::sort(freq.begin(), freq.end(), std::greater<>());
    double h = 0.0;
    for (std::size_t n : freq) {
      double p = static_cast<double>(n) / static_cast<double>(total);
      h -= p * std::log2(p);
    }
    double normalized = h / std::log2(static_cast<double>(counts.size()));
    if (best && !(normalized > best->normalized_entropy)) continue;

    std::vector<std::pair<NodeId, std::size_t>> ordered(counts.begin(), counts.end());
    std::sort(ordered.begin(), ordered.end(), [&g](const auto& x, const auto& y) {
      if (x.second != y.second) return x.second > y.second;
      const std::string& nx = g.node(x.first).norm_name;
      const std::string& ny = g.node(y.first).norm_name;
      if (nx != ny) return nx < ny;
      return x.first < y.first;
    });
    QueryChoice choice{type, normalized, {}};
    for (std::size_t i = 0; i < ordered.size() && i < kMaxQueryExamples; ++i) {
      choice.examples.push_back(ordered[i].first);
    }
    best = std::move(choice);
  }
  return best;
}

namespace {

std::string relation_between(const KnowledgeGraph& g, NodeId a, NodeId b) {
  for (std::size_t ei : g.incident_edges(a)) {
    if (g.other_end(ei, a) == b) return g.edges()[ei].relation;
  }
  return {};
}

}  // namespace

DialogueAct generate_act(BotIntent intent, const SemanticFrame& frame, const DialogueState& s,
                         const std::vector<RankedEntity>& ranking, const KnowledgeGraph& g,
                         const BotConfig& cfg) {
  DialogueAct act;
  act.intent = intent;
  switch (intent) {
    case BotIntent::Query: {
      auto choice = select_query_attribute_type(s, ranking, g);
      if (!choice) {
        throw Error(ErrorCode::InconsistentIntent, "Query chosen but no discriminating attribute type");
      }
      act.relation = choice->type;
      act.type_entropy = choice->normalized_entropy;
      act.examples = std::move(choice->examples);
      break;
    }
    case BotIntent::Recommend: {
      if (ranking.empty()) {
        throw Error(ErrorCode::InconsistentIntent, "Recommend chosen but no candidates remain");
      }
      for (const RankedEntity& r : ranking) {
        if (act.recommendations.size() >= cfg.top_k) break;
        // Cautious bots only offer entities that clear the threshold themselves.
        if (!act.recommendations.empty() && cfg.mode == Mode::Cautious &&
            r.match_ratio < cfg.matching_threshold) {
          break;
        }
        act.recommendations.push_back(RecommendedEntity{r.entity, r.matched_attrs});
      }
      const RecommendedEntity& top = act.recommendations.front();
      if (!top.explanation.empty()) {
        act.relation = relation_between(g, top.entity, top.explanation.front());
      }
      break;
    }
    case BotIntent::Chat: {
      std::optional<NodeId> anchor;
      if (!frame.mentions.empty()) {
        anchor = frame.mentions.back().node;
      } else {
        anchor = last_mentioned_node(s);
      }
      if (!anchor) break;
      // lowest normalized name among generic neighbours
      for (std::size_t ei : g.incident_edges(*anchor)) {
        NodeId other = g.other_end(ei, *anchor);
        if (g.node(other).kind != NodeKind::Generic) continue;
        if (!act.chat_node || g.node(other).norm_name < g.node(*act.chat_node).norm_name) {
          act.chat_node = other;
          act.relation = g.edges()[ei].relation;
        }
      }
      break;
    }
  }
  return act;
}

}  // namespace kgcrs
