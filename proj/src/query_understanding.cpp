#include "kgcrs/query_understanding.hpp"

#include <algorithm>

#include "kgcrs/text.hpp"

namespace kgcrs {

std::string_view to_string(UserIntent intent) {
  switch (intent) {
    case UserIntent::Provide: return "Provide";
    case UserIntent::Negate: return "Negate";
    case UserIntent::RequestRecommendation: return "RequestRecommendation";
    case UserIntent::AcceptRecommendation: return "AcceptRecommendation";
    case UserIntent::RejectRecommendation: return "RejectRecommendation";
    case UserIntent::Chitchat: return "Chitchat";
  }
  return "Chitchat";
}

std::optional<UserIntent> parse_user_intent(std::string_view s) {
  for (UserIntent i : {UserIntent::Provide, UserIntent::Negate, UserIntent::RequestRecommendation,
                       UserIntent::AcceptRecommendation, UserIntent::RejectRecommendation,
                       UserIntent::Chitchat}) {
    if (to_string(i) == s) return i;
  }
  return std::nullopt;
}

Lexicon Lexicon::defaults() {
  Lexicon lex;
  lex.negation_cues = {"not", "don't", "no", "dislike", "hate", "不", "没", "别", "不要"};
  lex.intent_keywords[UserIntent::RequestRecommendation] = {
      "recommend", "recommendation", "recommendations", "suggest", "suggestion",
      "what should i", "推荐"};
  lex.intent_keywords[UserIntent::AcceptRecommendation] = {"yes", "sure", "sounds good",
                                                           "i'll take it", "好的"};
  lex.intent_keywords[UserIntent::RejectRecommendation] = {"no thanks", "something else",
                                                           "another one", "nope", "换一个"};
  return lex;
}

std::vector<std::string> unresolved_aliases(const Lexicon& lex, const KnowledgeGraph& g) {
  std::vector<std::string> out;
  for (const auto& [alias, target] : lex.aliases) {
    if (g.lookup(target) == nullptr) out.push_back(alias);
  }
  return out;
}

// --- matching --------------------------------------------------------------

MentionMatcher::MentionMatcher(const KnowledgeGraph& g, const Lexicon& lex) {
  trie_.emplace_back();
  for (const Node& n : g.nodes()) insert(text::to_u32(n.norm_name), n.id, n.kind, false);
  for (const auto& [alias, target] : lex.aliases) {
    const Node* node = g.lookup(target);
    if (node == nullptr) continue;
    std::u32string key = text::normalize(alias);
    if (!key.empty()) insert(key, node->id, node->kind, true);
  }
}

void MentionMatcher::insert(std::u32string_view key, NodeId id, NodeKind kind, bool alias) {
  std::uint32_t cur = 0;
  for (char32_t c : key) {
    auto it = trie_[cur].next.find(c);
    if (it == trie_[cur].next.end()) {
      auto fresh = static_cast<std::uint32_t>(trie_.size());
      trie_[cur].next.emplace(c, fresh);
      trie_.emplace_back();
      cur = fresh;
    } else {
      cur = it->second;
    }
  }
  TrieNode& t = trie_[cur];
  // aliases beat node names; among node names Entity > Attribute > Generic
  bool replace = !t.node || (alias && !t.is_alias) ||
                 (!alias && !t.is_alias && kind < t.kind);
  if (replace) {
    t.node = id;
    t.kind = kind;
    t.is_alias = alias;
  }
}

std::vector<Mention> MentionMatcher::match(std::u32string_view s) const {
  std::vector<Mention> out;
  std::size_t i = 0;
  while (i < s.size()) {
    std::uint32_t cur = 0;
    std::optional<NodeId> best;
    std::size_t best_end = i;
    for (std::size_t j = i; j < s.size(); ++j) {
      auto it = trie_[cur].next.find(s[j]);
      if (it == trie_[cur].next.end()) break;
      cur = it->second;
      if (trie_[cur].node) {
        best = trie_[cur].node;
        best_end = j + 1;
      }
    }
    if (best) {
      out.push_back(Mention{*best, Polarity::Positive, i, best_end});
      i = best_end;
    } else {
      ++i;
    }
  }
  return out;
}

// --- cues and keywords -----------------------------------------------------

namespace {

struct Span {
  std::size_t begin;
  std::size_t end;
};

bool boundary_ok(std::u32string_view s, std::size_t begin, std::size_t end) {
  bool start_ok = begin == 0 || !text::is_word_char(s[begin - 1]) ||
                  text::is_unsegmented(s[begin - 1]) || text::is_unsegmented(s[begin]);
  bool end_ok = end == s.size() || !text::is_word_char(s[end]) ||
                text::is_unsegmented(s[end]) || text::is_unsegmented(s[end - 1]);
  return start_ok && end_ok;
}

bool overlaps_any(Span sp, const std::vector<Mention>& mentions) {
  return std::any_of(mentions.begin(), mentions.end(), [&](const Mention& m) {
    return sp.begin < m.end && m.begin < sp.end;
  });
}

// All boundary-respecting occurrences of `phrases` that do not overlap a mention.
std::vector<Span> find_phrases(std::u32string_view s, const std::vector<std::string>& phrases,
                               const std::vector<Mention>& mentions) {
  std::vector<Span> out;
  for (const std::string& p : phrases) {
    std::u32string key = text::normalize(p);
    if (key.empty()) continue;
    std::size_t pos = s.find(key);
    while (pos != std::u32string_view::npos) {
      Span sp{pos, pos + key.size()};
      if (boundary_ok(s, sp.begin, sp.end) && !overlaps_any(sp, mentions)) out.push_back(sp);
      pos = s.find(key, pos + 1);
    }
  }
  return out;
}

bool within_window(std::u32string_view gap, const NegationWindow& w) {
  bool spaced = std::any_of(gap.begin(), gap.end(), [](char32_t c) { return c == U' '; });
  if (!spaced) return gap.size() <= w.chars;
  std::size_t tokens = 0;
  bool in_token = false;
  for (char32_t c : gap) {
    if (c == U' ') {
      in_token = false;
    } else if (!in_token) {
      in_token = true;
      ++tokens;
    }
  }
  return tokens <= w.tokens;
}

std::vector<Mention> negate_normalized(std::u32string_view s, std::vector<Mention> mentions,
                                       const Lexicon& lex) {
  std::vector<Span> cues = find_phrases(s, lex.negation_cues, mentions);
  std::size_t prev_end = 0;
  for (Mention& m : mentions) {
    for (const Span& c : cues) {
      if (c.begin < prev_end || c.end > m.begin) continue;
      if (within_window(s.substr(c.end, m.begin - c.end), lex.negation_window)) {
        m.polarity = Polarity::Negative;
        break;
      }
    }
    prev_end = m.end;
  }
  return mentions;
}

UserIntent classify_normalized(std::u32string_view s, const std::vector<Mention>& mentions,
                               const Lexicon& lex) {
  for (UserIntent keyed : {UserIntent::RequestRecommendation, UserIntent::AcceptRecommendation,
                           UserIntent::RejectRecommendation}) {
    auto it = lex.intent_keywords.find(keyed);
    if (it != lex.intent_keywords.end() && !find_phrases(s, it->second, mentions).empty()) {
      return keyed;
    }
  }
  bool any_positive = std::any_of(mentions.begin(), mentions.end(), [](const Mention& m) {
    return m.polarity == Polarity::Positive;
  });
  if (mentions.empty()) {
    return find_phrases(s, lex.negation_cues, mentions).empty() ? UserIntent::Chitchat
                                                                : UserIntent::Negate;
  }
  return any_positive ? UserIntent::Provide : UserIntent::Negate;
}

}  // namespace

std::vector<Mention> match_mentions(std::string_view utterance, const KnowledgeGraph& g,
                                    const Lexicon& lex) {
  return MentionMatcher(g, lex).match(text::normalize(utterance));
}

std::vector<Mention> detect_negation(std::string_view utterance, std::vector<Mention> mentions,
                                     const Lexicon& lex) {
  return negate_normalized(text::normalize(utterance), std::move(mentions), lex);
}

UserIntent classify_user_intent(std::string_view utterance, const std::vector<Mention>& mentions,
                                const Lexicon& lex) {
  return classify_normalized(text::normalize(utterance), mentions, lex);
}

SemanticFrame parse_utterance(std::string_view utterance, const KnowledgeGraph& g,
                              const Lexicon& lex) {
  return parse_utterance(utterance, MentionMatcher(g, lex), lex);
}

SemanticFrame parse_utterance(std::string_view utterance, const MentionMatcher& matcher,
                              const Lexicon& lex) {
  std::u32string s = text::normalize(utterance);
  SemanticFrame frame;
  frame.raw = std::string(utterance);
  frame.mentions = negate_normalized(s, matcher.match(s), lex);
  frame.user_intent = classify_normalized(s, frame.mentions, lex);
  return frame;
}

}  // namespace kgcrs
