#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "kgcrs/knowledge_graph.hpp"

namespace kgcrs {

enum class UserIntent {
  Provide,
  Negate,
  RequestRecommendation,
  AcceptRecommendation,
  RejectRecommendation,
  Chitchat,
};

std::string_view to_string(UserIntent intent);
std::optional<UserIntent> parse_user_intent(std::string_view s);

enum class Polarity : int { Negative = -1, Positive = 1 };

/// A KG node found in the utterance. `begin`/`end` are code-point offsets
/// into the normalized utterance.
struct Mention {
  NodeId node;
  Polarity polarity = Polarity::Positive;
  std::size_t begin = 0;
  std::size_t end = 0;

  friend bool operator==(const Mention&, const Mention&) = default;
};

struct SemanticFrame {
  UserIntent user_intent = UserIntent::Chitchat;
  std::vector<Mention> mentions;
  std::string raw;

  friend bool operator==(const SemanticFrame&, const SemanticFrame&) = default;
};

struct NegationWindow {
  std::size_t tokens = 3;  // whitespace-delimited tokens between cue and mention
  std::size_t chars = 6;   // code points, when the gap contains no whitespace

  friend bool operator==(const NegationWindow&, const NegationWindow&) = default;
};

struct Lexicon {
  std::map<std::string, std::string> aliases;  // alias -> node name
  std::vector<std::string> negation_cues;
  std::map<UserIntent, std::vector<std::string>> intent_keywords;
  NegationWindow negation_window;

  static Lexicon defaults();

  friend bool operator==(const Lexicon&, const Lexicon&) = default;
};

/// Alias names that do not resolve to a node of `g`.
std::vector<std::string> unresolved_aliases(const Lexicon& lex, const KnowledgeGraph& g);

/// Compiled longest-match automaton over every node name and alias of one
/// (graph, lexicon) pair. Immutable once built.
class MentionMatcher {
 public:
  MentionMatcher(const KnowledgeGraph& g, const Lexicon& lex);

  /// Greedy longest match over an already-normalized utterance.
  std::vector<Mention> match(std::u32string_view normalized) const;

 private:
  struct TrieNode {
    std::unordered_map<char32_t, std::uint32_t> next;
    std::optional<NodeId> node;
    NodeKind kind = NodeKind::Generic;
    bool is_alias = false;
  };
  void insert(std::u32string_view key, NodeId id, NodeKind kind, bool alias);

  std::vector<TrieNode> trie_;
};

std::vector<Mention> match_mentions(std::string_view utterance, const KnowledgeGraph& g,
                                    const Lexicon& lex);

/// Flips the polarity of each mention preceded by a negation cue within the
/// window, unless another mention lies between cue and mention.
std::vector<Mention> detect_negation(std::string_view utterance, std::vector<Mention> mentions,
                                     const Lexicon& lex);

UserIntent classify_user_intent(std::string_view utterance, const std::vector<Mention>& mentions,
                                const Lexicon& lex);

SemanticFrame parse_utterance(std::string_view utterance, const KnowledgeGraph& g,
                              const Lexicon& lex);
SemanticFrame parse_utterance(std::string_view utterance, const MentionMatcher& matcher,
                              const Lexicon& lex);

}  // namespace kgcrs
