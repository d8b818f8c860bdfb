#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace kgcrs {

enum class NodeKind : std::uint8_t { Entity = 0, Attribute = 1, Generic = 2 };

std::string_view to_string(NodeKind kind);
// Case-insensitive; returns nullopt for anything but the three kind names.
std::optional<NodeKind> parse_node_kind(std::string_view s);

struct NodeId {
  std::uint32_t value = 0;

  friend auto operator<=>(const NodeId&, const NodeId&) = default;
};

struct Node {
  NodeId id;
  std::string name;       // display form, trimmed
  NodeKind kind = NodeKind::Entity;
  std::string norm_name;  // text::normalize_utf8(name)
};

struct Edge {
  NodeId head;
  NodeId tail;
  std::string relation;

  friend bool operator==(const Edge&, const Edge&) = default;
};

struct LoadStats {
  std::size_t nodes = 0;
  std::size_t edges = 0;
  std::size_t duplicate_lines = 0;
  std::size_t ignored_lines = 0;  // blank and '#' comment lines
};

struct Subgraph {
  std::vector<NodeId> nodes;
  std::vector<std::size_t> edges;  // indices into KnowledgeGraph::edges()
};

inline constexpr std::size_t kDefaultFocusNodeLimit = 200;

/// Immutable typed graph built from the five-column TSV data file.
///
/// Nodes are identified by (normalized name, kind); ids are dense and assigned
/// in order of first appearance in the file, so identical input always yields
/// identical ids. Edges are traversed undirected but remember the file's
/// head/tail order so the graph can be written back out.
class KnowledgeGraph {
 public:
  struct LoadResult;

  static LoadResult load(std::istream& in);
  static LoadResult load_string(std::string_view tsv);

  const std::vector<Node>& nodes() const { return nodes_; }
  const std::vector<Edge>& edges() const { return edges_; }
  const Node& node(NodeId id) const;
  bool contains(NodeId id) const { return id.value < nodes_.size(); }

  /// Exact lookup on normalized text; Entity wins over Attribute over Generic.
  const Node* lookup(std::string_view text) const;
  const Node* lookup(std::string_view text, NodeKind kind) const;

  /// Entities adjacent to an attribute, ascending id. Throws KindMismatch.
  std::span<const NodeId> entities_with_attribute(NodeId attribute) const;
  /// Attribute neighbours of an entity grouped by relation label. Throws KindMismatch.
  const std::map<std::string, std::vector<NodeId>>& attributes_of_entity(NodeId entity) const;
  /// Flat, sorted, deduplicated attribute neighbours of an entity.
  std::span<const NodeId> attribute_set(NodeId entity) const;

  /// Relation labels appearing on Entity–Attribute edges, ascending.
  const std::vector<std::string>& attribute_types() const { return attribute_types_; }
  std::span<const NodeId> entities() const { return entities_; }

  /// Every edge index incident to `id`.
  std::span<const std::size_t> incident_edges(NodeId id) const;
  std::size_t degree(NodeId id) const { return incident_edges(id).size(); }
  NodeId other_end(std::size_t edge, NodeId from) const;

  /// Induced subgraph within `radius` hops (clamped to 0..2) of the seeds,
  /// truncated to `node_limit` nodes: seeds first, then higher degree, then name.
  Subgraph focus(std::span<const NodeId> seeds, int radius,
                 std::size_t node_limit = kDefaultFocusNodeLimit) const;

  /// Five-column TSV, one line per edge in load order.
  std::string to_tsv() const;

 private:
  KnowledgeGraph() = default;
  void build_indices();

  std::vector<Node> nodes_;
  std::vector<Edge> edges_;
  std::unordered_map<std::string, std::array<std::optional<NodeId>, 3>> by_name_;
  std::vector<std::vector<std::size_t>> incident_;
  std::vector<NodeId> entities_;
  std::vector<std::vector<NodeId>> attr_entities_;                      // by node id
  std::vector<std::map<std::string, std::vector<NodeId>>> entity_attrs_;  // by node id
  std::vector<std::vector<NodeId>> entity_attr_set_;                    // by node id
  std::vector<std::string> attribute_types_;
};

struct KnowledgeGraph::LoadResult {
  KnowledgeGraph graph;
  LoadStats stats;
};

}  // namespace kgcrs

template <>
struct std::hash<kgcrs::NodeId> {
  std::size_t operator()(kgcrs::NodeId id) const noexcept { return id.value; }
};
