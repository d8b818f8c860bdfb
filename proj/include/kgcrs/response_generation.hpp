#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "kgcrs/dialogue_act.hpp"
#include "kgcrs/knowledge_graph.hpp"

namespace kgcrs {

/// Response templates keyed "<intent>.<relation>" or "<intent>._" (fallback),
/// e.g. "query.Director", "recommend._". Placeholders: {attributes},
/// {entities}, {attribute_type}, {explanation}.
struct TemplateSet {
  std::map<std::string, std::vector<std::string>> templates;
  std::string separator = ", ";
  std::string final_separator = ", ";  // between the last two list items

  static TemplateSet defaults();

  friend bool operator==(const TemplateSet&, const TemplateSet&) = default;
};

enum class TemplateFindingKind { UnknownPlaceholder, UnbalancedBrace, MissingFallback, EmptyTemplateList, BadKey };

std::string_view to_string(TemplateFindingKind kind);

struct TemplateFinding {
  TemplateFindingKind kind;
  std::string key;
  std::string detail;
};

std::vector<TemplateFinding> validate_templates(const TemplateSet& ts);

/// Renders `act` with the most specific template for it. `selector` picks
/// among variants; callers derive it from the session seed and turn index.
/// Throws TemplateNotFound when the intent has no fallback.
std::string render_response(const DialogueAct& act, const TemplateSet& ts, const KnowledgeGraph& g,
                            std::uint64_t selector);

std::string join_names(const std::vector<std::string>& names, const TemplateSet& ts);

}  // namespace kgcrs
