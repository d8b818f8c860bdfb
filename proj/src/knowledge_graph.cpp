#include "kgcrs/knowledge_graph.hpp"

#include <algorithm>
#include <istream>
#include <set>
#include <sstream>
#include <tuple>

#include "kgcrs/errors.hpp"
#include "kgcrs/text.hpp"

namespace kgcrs {

std::string_view to_string(NodeKind kind) {
  switch (kind) {
    case NodeKind::Entity: return "Entity";
    case NodeKind::Attribute: return "Attribute";
    case NodeKind::Generic: return "Generic";
  }
  return "Entity";
}

std::optional<NodeKind> parse_node_kind(std::string_view s) {
  std::string lower;
  for (char c : s) lower.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  if (lower == "entity") return NodeKind::Entity;
  if (lower == "attribute") return NodeKind::Attribute;
  if (lower == "generic") return NodeKind::Generic;
  return std::nullopt;
}

namespace {

std::vector<std::string_view> split_tabs(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    std::size_t tab = line.find('\t', start);
    if (tab == std::string_view::npos) {
      out.push_back(line.substr(start));
      break;
    }
    out.push_back(line.substr(start, tab - start));
    start = tab + 1;
  }
  return out;
}

bool is_blank(std::string_view line) {
  return std::all_of(line.begin(), line.end(),
                     [](char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n'; });
}

}  // namespace

KnowledgeGraph::LoadResult KnowledgeGraph::load_string(std::string_view tsv) {
  std::istringstream in{std::string(tsv)};
  return load(in);
}

KnowledgeGraph::LoadResult KnowledgeGraph::load(std::istream& in) {
  KnowledgeGraph g;
  LoadStats stats;
  std::set<std::tuple<std::uint32_t, std::uint32_t, std::string>> seen;

  auto intern = [&g](const std::string& name, NodeKind kind, const std::string& norm) {
    auto& slot = g.by_name_[norm][static_cast<std::size_t>(kind)];
    if (!slot) {
      NodeId id{static_cast<std::uint32_t>(g.nodes_.size())};
      g.nodes_.push_back(Node{id, name, kind, norm});
      slot = id;
    }
    return *slot;
  };

  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = raw;
    if (line_no == 1 && line.starts_with("\xEF\xBB\xBF")) line.remove_prefix(3);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (is_blank(line) || line.starts_with('#')) {
      ++stats.ignored_lines;
      continue;
    }
    auto fields = split_tabs(line);
    if (fields.size() != 5) {
      throw Error(ErrorCode::MalformedLine,
                  "line " + std::to_string(line_no) + ": expected 5 tab-separated fields, got " +
                      std::to_string(fields.size()),
                  line_no);
    }
    auto kind1 = parse_node_kind(text::trim(fields[1]));
    auto kind2 = parse_node_kind(text::trim(fields[3]));
    if (!kind1 || !kind2) {
      throw Error(ErrorCode::MalformedLine,
                  "line " + std::to_string(line_no) + ": unknown node kind '" +
                      std::string(kind1 ? fields[3] : fields[1]) + "'",
                  line_no);
    }
    std::string name1 = text::trim(fields[0]);
    std::string name2 = text::trim(fields[2]);
    std::string relation = text::trim(fields[4]);
    std::string norm1 = text::normalize_utf8(name1);
    std::string norm2 = text::normalize_utf8(name2);
    if (norm1.empty() || norm2.empty() || relation.empty()) {
      throw Error(ErrorCode::MalformedLine,
                  "line " + std::to_string(line_no) + ": empty name or relation", line_no);
    }
    if (norm1 == norm2 && *kind1 == *kind2) {
      throw Error(ErrorCode::SelfLoop,
                  "line " + std::to_string(line_no) + ": both ends are '" + name1 + "'", line_no);
    }
    NodeId head = intern(name1, *kind1, norm1);
    NodeId tail = intern(name2, *kind2, norm2);
    if (!seen.emplace(head.value, tail.value, relation).second) {
      ++stats.duplicate_lines;
      continue;
    }
    g.edges_.push_back(Edge{head, tail, std::move(relation)});
  }
  if (g.edges_.empty()) {
    throw Error(ErrorCode::EmptyGraph, "data file contains no valid lines");
  }
  g.build_indices();
  stats.nodes = g.nodes_.size();
  stats.edges = g.edges_.size();
  return LoadResult{std::move(g), stats};
}

void KnowledgeGraph::build_indices() {
  const std::size_t n = nodes_.size();
  incident_.assign(n, {});
  attr_entities_.assign(n, {});
  entity_attrs_.assign(n, {});
  entity_attr_set_.assign(n, {});
  std::set<std::string> types;

  for (std::size_t i = 0; i < edges_.size(); ++i) {
    const Edge& e = edges_[i];
    incident_[e.head.value].push_back(i);
    incident_[e.tail.value].push_back(i);
    NodeKind hk = nodes_[e.head.value].kind;
    NodeKind tk = nodes_[e.tail.value].kind;
    NodeId entity;
    NodeId attribute;
    if (hk == NodeKind::Entity && tk == NodeKind::Attribute) {
      entity = e.head;
      attribute = e.tail;
    } else if (hk == NodeKind::Attribute && tk == NodeKind::Entity) {
      entity = e.tail;
      attribute = e.head;
    } else {
      continue;
    }
    types.insert(e.relation);
    attr_entities_[attribute.value].push_back(entity);
    entity_attrs_[entity.value][e.relation].push_back(attribute);
    entity_attr_set_[entity.value].push_back(attribute);
  }

  auto sort_unique = [](std::vector<NodeId>& v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
  };
  for (auto& v : attr_entities_) sort_unique(v);
  for (auto& v : entity_attr_set_) sort_unique(v);
  for (auto& groups : entity_attrs_) {
    for (auto& [label, v] : groups) sort_unique(v);
  }
  for (const Node& node : nodes_) {
    if (node.kind == NodeKind::Entity) entities_.push_back(node.id);
  }
  attribute_types_.assign(types.begin(), types.end());
}

const Node& KnowledgeGraph::node(NodeId id) const {
  if (!contains(id)) {
    throw Error(ErrorCode::UnknownNode, "node id " + std::to_string(id.value) + " not in graph");
  }
  return nodes_[id.value];
}

const Node* KnowledgeGraph::lookup(std::string_view text) const {
  auto it = by_name_.find(text::normalize_utf8(text));
  if (it == by_name_.end()) return nullptr;
  for (const auto& slot : it->second) {
    if (slot) return &nodes_[slot->value];
  }
  return nullptr;
}

const Node* KnowledgeGraph::lookup(std::string_view text, NodeKind kind) const {
  auto it = by_name_.find(text::normalize_utf8(text));
  if (it == by_name_.end()) return nullptr;
  const auto& slot = it->second[static_cast<std::size_t>(kind)];
  return slot ? &nodes_[slot->value] : nullptr;
}

std::span<const NodeId> KnowledgeGraph::entities_with_attribute(NodeId attribute) const {
  if (node(attribute).kind != NodeKind::Attribute) {
    throw Error(ErrorCode::KindMismatch, "'" + nodes_[attribute.value].name + "' is not an Attribute");
  }
  return attr_entities_[attribute.value];
}

const std::map<std::string, std::vector<NodeId>>& KnowledgeGraph::attributes_of_entity(
    NodeId entity) const {
  if (node(entity).kind != NodeKind::Entity) {
    throw Error(ErrorCode::KindMismatch, "'" + nodes_[entity.value].name + "' is not an Entity");
  }
  return entity_attrs_[entity.value];
}

std::span<const NodeId> KnowledgeGraph::attribute_set(NodeId entity) const {
  if (node(entity).kind != NodeKind::Entity) {
    throw Error(ErrorCode::KindMismatch, "'" + nodes_[entity.value].name + "' is not an Entity");
  }
  return entity_attr_set_[entity.value];
}

std::span<const std::size_t> KnowledgeGraph::incident_edges(NodeId id) const {
  node(id);
  return incident_[id.value];
}

NodeId KnowledgeGraph::other_end(std::size_t edge, NodeId from) const {
  const Edge& e = edges_.at(edge);
  return e.head == from ? e.tail : e.head;
}

Subgraph KnowledgeGraph::focus(std::span<const NodeId> seeds, int radius,
                               std::size_t node_limit) const {
  radius = std::clamp(radius, 0, 2);
  std::vector<int> dist(nodes_.size(), -1);
  std::vector<NodeId> frontier;
  for (NodeId s : seeds) {
    node(s);
    if (dist[s.value] < 0) {
      dist[s.value] = 0;
      frontier.push_back(s);
    }
  }
  std::vector<NodeId> reached = frontier;
  for (int hop = 1; hop <= radius; ++hop) {
    std::vector<NodeId> next;
    for (NodeId u : frontier) {
      for (std::size_t ei : incident_[u.value]) {
        NodeId v = other_end(ei, u);
        if (dist[v.value] < 0) {
          dist[v.value] = hop;
          next.push_back(v);
          reached.push_back(v);
        }
      }
    }
    frontier = std::move(next);
  }

  if (reached.size() > node_limit) {
    std::sort(reached.begin(), reached.end(), [&](NodeId a, NodeId b) {
      bool sa = dist[a.value] == 0;
      bool sb = dist[b.value] == 0;
      if (sa != sb) return sa;
      std::size_t da = incident_[a.value].size();
      std::size_t db = incident_[b.value].size();
      if (da != db) return da > db;
      const Node& na = nodes_[a.value];
      const Node& nb = nodes_[b.value];
      if (na.norm_name != nb.norm_name) return na.norm_name < nb.norm_name;
      return a < b;
    });
    reached.resize(node_limit);
  }
  std::sort(reached.begin(), reached.end());

  std::vector<bool> kept(nodes_.size(), false);
  for (NodeId id : reached) kept[id.value] = true;
  Subgraph out;
  out.nodes = std::move(reached);
  for (std::size_t i = 0; i < edges_.size(); ++i) {
    if (kept[edges_[i].head.value] && kept[edges_[i].tail.value]) out.edges.push_back(i);
  }
  return out;
}

std::string KnowledgeGraph::to_tsv() const {
  std::string out;
  for (const Edge& e : edges_) {
    const Node& h = nodes_[e.head.value];
    const Node& t = nodes_[e.tail.value];
    // a leading space keeps a '#'-prefixed name from reading back as a comment
    if (h.name.starts_with('#')) out.push_back(' ');
    out += h.name;
    out.push_back('\t');
    out += to_string(h.kind);
    out.push_back('\t');
    out += t.name;
    out.push_back('\t');
    out += to_string(t.kind);
    out.push_back('\t');
    out += e.relation;
    out.push_back('\n');
  }
  return out;
}

}  // namespace kgcrs
