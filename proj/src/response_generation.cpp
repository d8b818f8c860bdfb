#include "kgcrs/response_generation.hpp"

#include <algorithm>
#include <array>

#include "kgcrs/errors.hpp"
#include "kgcrs/text.hpp"

namespace kgcrs {
namespace {

constexpr std::array<std::string_view, 4> kPlaceholders = {"attributes", "entities",
                                                           "attribute_type", "explanation"};
constexpr std::array<std::string_view, 3> kIntentKeys = {"query", "recommend", "chat"};

std::string_view intent_key(BotIntent intent) {
  switch (intent) {
    case BotIntent::Query: return "query";
    case BotIntent::Recommend: return "recommend";
    case BotIntent::Chat: return "chat";
  }
  return "chat";
}

}  // namespace

std::string_view to_string(TemplateFindingKind kind) {
  switch (kind) {
    case TemplateFindingKind::UnknownPlaceholder: return "UnknownPlaceholder";
    case TemplateFindingKind::UnbalancedBrace: return "UnbalancedBrace";
    case TemplateFindingKind::MissingFallback: return "MissingFallback";
    case TemplateFindingKind::EmptyTemplateList: return "EmptyTemplateList";
    case TemplateFindingKind::BadKey: return "BadKey";
  }
  return "BadKey";
}

TemplateSet TemplateSet::defaults() {
  TemplateSet ts;
  ts.templates["query._"] = {"Which {attribute_type} do you like? E.g. {attributes}",
                             "Any preference on {attribute_type}? For example {attributes}"};
  ts.templates["recommend._"] = {"How about {entities}? ({explanation})",
                                 "You might like {entities}. ({explanation})"};
  ts.templates["chat._"] = {"Tell me more about what you like."};
  return ts;
}

std::vector<TemplateFinding> validate_templates(const TemplateSet& ts) {
  std::vector<TemplateFinding> findings;
  for (const auto& [key, variants] : ts.templates) {
    auto dot = key.find('.');
    std::string head = key.substr(0, dot);
    if (dot == std::string::npos || dot + 1 == key.size() ||
        std::find(kIntentKeys.begin(), kIntentKeys.end(), head) == kIntentKeys.end()) {
      findings.push_back({TemplateFindingKind::BadKey, key,
                          "expected <query|recommend|chat>.<relation or _>"});
      continue;
    }
    if (variants.empty()) {
      findings.push_back({TemplateFindingKind::EmptyTemplateList, key, "no templates"});
    }
    for (const std::string& t : variants) {
      std::size_t i = 0;
      while (i < t.size()) {
        if (t[i] == '}') {
          findings.push_back({TemplateFindingKind::UnbalancedBrace, key, "stray '}' in \"" + t + "\""});
          ++i;
          continue;
        }
        if (t[i] != '{') {
          ++i;
          continue;
        }
        auto close = t.find('}', i);
        auto reopen = t.find('{', i + 1);
        if (close == std::string::npos || (reopen != std::string::npos && reopen < close)) {
          findings.push_back({TemplateFindingKind::UnbalancedBrace, key, "unclosed '{' in \"" + t + "\""});
          ++i;
          continue;
        }
        std::string name = t.substr(i + 1, close - i - 1);
        if (std::find(kPlaceholders.begin(), kPlaceholders.end(), name) == kPlaceholders.end()) {
          findings.push_back({TemplateFindingKind::UnknownPlaceholder, key, "{" + name + "}"});
        }
        i = close + 1;
      }
    }
  }
  for (std::string_view intent : kIntentKeys) {
    std::string fallback = std::string(intent) + "._";
    auto it = ts.templates.find(fallback);
    if (it == ts.templates.end()) {
      findings.push_back({TemplateFindingKind::MissingFallback, fallback, "no fallback template"});
    }
  }
  return findings;
}

std::string join_names(const std::vector<std::string>& names, const TemplateSet& ts) {
  std::string out;
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (i > 0) out += (i + 1 == names.size()) ? ts.final_separator : ts.separator;
    out += names[i];
  }
  return out;
}

std::string render_response(const DialogueAct& act, const TemplateSet& ts, const KnowledgeGraph& g,
                            std::uint64_t selector) {
  std::string base(intent_key(act.intent));
  const std::vector<std::string>* variants = nullptr;
  if (!act.relation.empty()) {
    auto it = ts.templates.find(base + "." + act.relation);
    if (it != ts.templates.end() && !it->second.empty()) variants = &it->second;
  }
  if (variants == nullptr) {
    auto it = ts.templates.find(base + "._");
    if (it == ts.templates.end() || it->second.empty()) {
      throw Error(ErrorCode::TemplateNotFound, "no template for intent " + base);
    }
    variants = &it->second;
  }
  const std::string& tmpl = (*variants)[selector % variants->size()];

  auto names = [&g](const std::vector<NodeId>& ids) {
    std::vector<std::string> out;
    for (NodeId id : ids) out.push_back(g.node(id).name);
    return out;
  };

  std::vector<NodeId> attrs = act.examples;
  if (act.intent == BotIntent::Chat && act.chat_node) attrs.push_back(*act.chat_node);
  std::vector<NodeId> entities;
  std::vector<NodeId> matched;
  for (const RecommendedEntity& r : act.recommendations) {
    entities.push_back(r.entity);
    for (NodeId a : r.explanation) {
      if (std::find(matched.begin(), matched.end(), a) == matched.end()) matched.push_back(a);
    }
  }

  std::string attribute_type = act.intent == BotIntent::Query ? act.relation : std::string();
  std::string explanation = matched.empty() ? std::string() : "matched: " + join_names(names(matched), ts);
  std::string attributes = join_names(names(attrs), ts);
  std::string entity_list = join_names(names(entities), ts);

  std::string out;
  std::size_t i = 0;
  while (i < tmpl.size()) {
    if (tmpl[i] == '{') {
      auto close = tmpl.find('}', i);
      if (close != std::string::npos) {
        std::string_view name(tmpl.data() + i + 1, close - i - 1);
        if (name == "attributes") {
          out += attributes;
        } else if (name == "entities") {
          out += entity_list;
        } else if (name == "attribute_type") {
          out += attribute_type;
        } else if (name == "explanation") {
          out += explanation;
        }
        // unknown names are dropped; validation rejects them up front
        i = close + 1;
        continue;
      }
    }
    out.push_back(tmpl[i]);
    ++i;
  }
  return text::collapse_spaces(out);
}

}  // namespace kgcrs
