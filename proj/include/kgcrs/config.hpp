#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "kgcrs/knowledge_graph.hpp"
#include "kgcrs/query_understanding.hpp"
#include "kgcrs/response_generation.hpp"

namespace kgcrs {

enum class Mode { Casual, Cautious };

std::string_view to_string(Mode mode);

struct Preferences {
  double query = 0.5;
  double recommend = 0.8;
  double chat = 0.5;

  friend bool operator==(const Preferences&, const Preferences&) = default;
};

/// Bot style. Casual and Cautious are presets; every field can be overridden.
struct BotConfig {
  Mode mode = Mode::Casual;
  Preferences prefs;
  double negation_penalty = 1.0;     // >= 0
  double matching_threshold = 0.5;   // [0,1]
  double neighborhood_weight = 0.5;  // >= 0
  std::size_t top_k = 3;             // >= 1
  double chat_floor = 0.1;           // > 0
  Lexicon lexicon = Lexicon::defaults();
  TemplateSet templates = TemplateSet::defaults();

  static BotConfig preset(Mode mode);

  friend bool operator==(const BotConfig&, const BotConfig&) = default;
};

struct ConfigFinding {
  std::string code;   // e.g. "OutOfRange", "UnknownPlaceholder", "UnresolvedAlias"
  std::string field;
  std::string detail;
};

/// Range checks and template validation; graph-dependent checks are done by
/// validate_against_graph.
std::vector<ConfigFinding> validate_config(const BotConfig& cfg);
std::vector<ConfigFinding> validate_against_graph(const BotConfig& cfg, const KnowledgeGraph& g);

nlohmann::json config_to_json(const BotConfig& cfg);

/// Builds a config from a document. Missing keys take the preset of the
/// document's "mode" (Casual if absent). Type errors and unknown keys become
/// findings; the returned config is only meaningful when `findings` is empty.
BotConfig config_from_json(const nlohmann::json& doc, std::vector<ConfigFinding>& findings);

/// Applies a partial document on top of `base` (JSON merge-patch semantics).
/// Switching "mode" resets the style knobs (preferences, threshold) to the new
/// preset unless the patch sets them too.
BotConfig merge_config(const BotConfig& base, const nlohmann::json& patch,
                       std::vector<ConfigFinding>& findings);

}  // namespace kgcrs
