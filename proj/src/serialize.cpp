#include "kgcrs/serialize.hpp"

namespace kgcrs::json_doc {

json node_ref(const KnowledgeGraph& g, NodeId id) {
  const Node& n = g.node(id);
  return json{{"id", n.id.value}, {"name", n.name}, {"kind", to_string(n.kind)}};
}

namespace {

json refs(const KnowledgeGraph& g, const OrderedSet<NodeId>& ids) {
  json out = json::array();
  for (NodeId id : ids) out.push_back(node_ref(g, id));
  return out;
}

json child(const KnowledgeGraph& g, const char* role, NodeId id) {
  return json{{"role", role}, {"node", node_ref(g, id)}};
}

}  // namespace

json frame(const SemanticFrame& f, const KnowledgeGraph& g) {
  json mentions = json::array();
  for (const Mention& m : f.mentions) {
    mentions.push_back(json{{"node", node_ref(g, m.node)},
                            {"polarity", static_cast<int>(m.polarity)},
                            {"span", json::array({m.begin, m.end})}});
  }
  return json{{"user_intent", to_string(f.user_intent)}, {"mentions", mentions}, {"raw", f.raw}};
}

json act(const DialogueAct& a, const KnowledgeGraph& g) {
  json children = json::array();
  switch (a.intent) {
    case BotIntent::Query: {
      json examples = json::array();
      for (NodeId id : a.examples) examples.push_back(child(g, "example", id));
      children.push_back(json{{"role", "attribute_type"},
                              {"label", a.relation},
                              {"normalized_entropy", a.type_entropy},
                              {"children", examples}});
      break;
    }
    case BotIntent::Recommend:
      for (const RecommendedEntity& r : a.recommendations) {
        json matched = json::array();
        for (NodeId id : r.explanation) matched.push_back(child(g, "matched_attribute", id));
        json c = child(g, "entity", r.entity);
        c["children"] = matched;
        children.push_back(c);
      }
      break;
    case BotIntent::Chat:
      if (a.chat_node) {
        json c = child(g, "generic", *a.chat_node);
        c["relation"] = a.relation;
        children.push_back(c);
      }
      break;
  }
  return json{{"intent", to_string(a.intent)}, {"relation", a.relation}, {"children", children}};
}

json decision(const PolicyDecision& d) {
  return json{
      {"intent", to_string(d.intent)},
      {"desirability",
       {{"Query", d.desirability.query}, {"Recommend", d.desirability.recommend}, {"Chat", d.desirability.chat}}},
      {"eligible",
       {{"Query", d.eligible.query}, {"Recommend", d.eligible.recommend}, {"Chat", d.eligible.chat}}},
      {"user_requested", d.user_requested},
  };
}

json ranking(const std::vector<RankedEntity>& r, const KnowledgeGraph& g) {
  json out = json::array();
  for (const RankedEntity& e : r) {
    json matched = json::array();
    for (NodeId id : e.matched_attrs) matched.push_back(node_ref(g, id));
    out.push_back(json{{"entity", node_ref(g, e.entity)},
                       {"score", e.score},
                       {"match_ratio", e.match_ratio},
                       {"matched_attrs", matched}});
  }
  return out;
}

json subgraph(const Subgraph& sg, const KnowledgeGraph& g) {
  json nodes = json::array();
  for (NodeId id : sg.nodes) {
    json n = node_ref(g, id);
    n["degree"] = g.degree(id);
    nodes.push_back(n);
  }
  json edges = json::array();
  for (std::size_t ei : sg.edges) {
    const Edge& e = g.edges()[ei];
    edges.push_back(json{{"head", e.head.value}, {"tail", e.tail.value}, {"relation", e.relation}});
  }
  return json{{"nodes", nodes}, {"edges", edges}};
}

json state(const DialogueState& s, const KnowledgeGraph& g) {
  json history = json::array();
  for (const HistoryEntry& h : s.history) {
    json entry{{"speaker", h.speaker == Speaker::User ? "user" : "bot"}, {"utterance", h.utterance}};
    if (const auto* f = std::get_if<SemanticFrame>(&h.content)) {
      entry["frame"] = frame(*f, g);
    } else {
      entry["act"] = act(std::get<DialogueAct>(h.content), g);
    }
    history.push_back(entry);
  }
  return json{
      {"liked_attrs", refs(g, s.liked_attrs)},
      {"disliked_attrs", refs(g, s.disliked_attrs)},
      {"liked_entities", refs(g, s.liked_entities)},
      {"rejected_entities", refs(g, s.rejected_entities)},
      {"recommended", refs(g, s.recommended)},
      {"asked_types", s.asked_types.items()},
      {"turn_index", s.turn_index},
      {"history", history},
  };
}

json turn(const TurnRecord& rec, const KnowledgeGraph& g) {
  return json{
      {"turn", rec.turn},
      {"utterance", rec.utterance},
      {"frame", frame(rec.frame, g)},
      {"intent", to_string(rec.decision.intent)},
      {"decision", decision(rec.decision)},
      {"act", act(rec.act, g)},
      {"response", rec.response},
      {"top_ranking", ranking(rec.top_ranking, g)},
      {"kg_focus", subgraph(rec.kg_focus, g)},
  };
}

json graph_stats(const KnowledgeGraph& g, const LoadStats& stats) {
  std::size_t entities = 0;
  std::size_t attributes = 0;
  std::size_t generics = 0;
  for (const Node& n : g.nodes()) {
    entities += n.kind == NodeKind::Entity;
    attributes += n.kind == NodeKind::Attribute;
    generics += n.kind == NodeKind::Generic;
  }
  return json{{"nodes", stats.nodes},
              {"edges", stats.edges},
              {"duplicate_lines", stats.duplicate_lines},
              {"entities", entities},
              {"attributes", attributes},
              {"generics", generics},
              {"attribute_types", g.attribute_types()}};
}

}  // namespace kgcrs::json_doc
