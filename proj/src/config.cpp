#include "kgcrs/config.hpp"

#include <cctype>
#include <cmath>
#include <limits>

namespace kgcrs {

using nlohmann::json;

std::string_view to_string(Mode mode) { return mode == Mode::Cautious ? "cautious" : "casual"; }

BotConfig BotConfig::preset(Mode mode) {
  BotConfig cfg;
  cfg.mode = mode;
  if (mode == Mode::Cautious) {
    cfg.prefs = Preferences{0.8, 0.5, 0.2};
    cfg.matching_threshold = 0.9;
  } else {
    cfg.prefs = Preferences{0.5, 0.8, 0.5};
    cfg.matching_threshold = 0.5;
  }
  return cfg;
}

namespace {

std::optional<Mode> parse_mode(const json& v) {
  if (!v.is_string()) return std::nullopt;
  std::string s = v.get<std::string>();
  for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  if (s == "casual") return Mode::Casual;
  if (s == "cautious") return Mode::Cautious;
  return std::nullopt;
}

class Reader {
 public:
  explicit Reader(std::vector<ConfigFinding>& findings) : findings_(findings) {}

  void bad(const std::string& field, const std::string& detail, const char* code = "BadType") {
    findings_.push_back({code, field, detail});
  }

  void number(const json& v, const std::string& field, double& out) {
    if (!v.is_number()) return bad(field, "expected a number");
    out = v.get<double>();
  }

  void count(const json& v, const std::string& field, std::size_t& out) {
    if (!v.is_number_integer() && !v.is_number_unsigned()) return bad(field, "expected an integer");
    auto n = v.get<long long>();
    if (n < 0) return bad(field, "must be >= 0", "OutOfRange");
    out = static_cast<std::size_t>(n);
  }

  void string(const json& v, const std::string& field, std::string& out) {
    if (!v.is_string()) return bad(field, "expected a string");
    out = v.get<std::string>();
  }

  void strings(const json& v, const std::string& field, std::vector<std::string>& out) {
    if (v.is_string()) {
      out = {v.get<std::string>()};
      return;
    }
    if (!v.is_array()) return bad(field, "expected a string or list of strings");
    std::vector<std::string> tmp;
    for (const json& item : v) {
      if (!item.is_string()) return bad(field, "expected a list of strings");
      tmp.push_back(item.get<std::string>());
    }
    out = std::move(tmp);
  }

 private:
  std::vector<ConfigFinding>& findings_;
};

void read_lexicon(const json& doc, Lexicon& lex, Reader& r) {
  if (!doc.is_object()) return r.bad("lexicon", "expected an object");
  for (const auto& [key, v] : doc.items()) {
    if (key == "aliases") {
      if (!v.is_object()) {
        r.bad("lexicon.aliases", "expected an object of alias -> node name");
        continue;
      }
      std::map<std::string, std::string> aliases;
      for (const auto& [alias, target] : v.items()) {
        if (!target.is_string()) {
          r.bad("lexicon.aliases." + alias, "expected a node name");
          continue;
        }
        aliases[alias] = target.get<std::string>();
      }
      lex.aliases = std::move(aliases);
    } else if (key == "negation_cues") {
      r.strings(v, "lexicon.negation_cues", lex.negation_cues);
    } else if (key == "intent_keywords") {
      if (!v.is_object()) {
        r.bad("lexicon.intent_keywords", "expected an object");
        continue;
      }
      for (const auto& [name, words] : v.items()) {
        auto intent = parse_user_intent(name);
        if (!intent || (*intent != UserIntent::RequestRecommendation &&
                        *intent != UserIntent::AcceptRecommendation &&
                        *intent != UserIntent::RejectRecommendation)) {
          r.bad("lexicon.intent_keywords." + name,
                "keywords apply to RequestRecommendation, AcceptRecommendation, "
                "RejectRecommendation",
                "UnknownKey");
          continue;
        }
        if (words.is_null()) {
          lex.intent_keywords.erase(*intent);
          continue;
        }
        r.strings(words, "lexicon.intent_keywords." + name, lex.intent_keywords[*intent]);
      }
    } else if (key == "negation_window") {
      if (v.is_number_integer() || v.is_number_unsigned()) {
        std::size_t n = 0;
        r.count(v, "lexicon.negation_window", n);
        lex.negation_window = NegationWindow{n, 2 * n};
      } else if (v.is_object()) {
        for (const auto& [wk, wv] : v.items()) {
          if (wk == "tokens") {
            r.count(wv, "lexicon.negation_window.tokens", lex.negation_window.tokens);
          } else if (wk == "chars") {
            r.count(wv, "lexicon.negation_window.chars", lex.negation_window.chars);
          } else {
            r.bad("lexicon.negation_window." + wk, "unknown key", "UnknownKey");
          }
        }
      } else {
        r.bad("lexicon.negation_window", "expected an integer or {tokens, chars}");
      }
    } else {
      r.bad("lexicon." + key, "unknown key", "UnknownKey");
    }
  }
}

void read_templates(const json& doc, TemplateSet& ts, Reader& r) {
  if (!doc.is_object()) return r.bad("templates", "expected an object");
  for (const auto& [key, v] : doc.items()) {
    if (v.is_null()) {
      ts.templates.erase(key);
      continue;
    }
    std::vector<std::string> variants;
    r.strings(v, "templates." + key, variants);
    ts.templates[key] = std::move(variants);
  }
}

}  // namespace

BotConfig config_from_json(const json& doc, std::vector<ConfigFinding>& findings) {
  Reader r(findings);
  if (!doc.is_object()) {
    r.bad("", "config document must be an object");
    return BotConfig{};
  }
  Mode mode = Mode::Casual;
  if (doc.contains("mode")) {
    if (auto m = parse_mode(doc["mode"])) {
      mode = *m;
    } else {
      r.bad("mode", "expected \"casual\" or \"cautious\"");
    }
  }
  BotConfig cfg = BotConfig::preset(mode);

  for (const auto& [key, v] : doc.items()) {
    if (key == "mode") continue;
    if (key == "preferences") {
      if (!v.is_object()) {
        r.bad("preferences", "expected {query, recommend, chat}");
        continue;
      }
      for (const auto& [pk, pv] : v.items()) {
        if (pk == "query") {
          r.number(pv, "preferences.query", cfg.prefs.query);
        } else if (pk == "recommend") {
          r.number(pv, "preferences.recommend", cfg.prefs.recommend);
        } else if (pk == "chat") {
          r.number(pv, "preferences.chat", cfg.prefs.chat);
        } else {
          r.bad("preferences." + pk, "unknown key", "UnknownKey");
        }
      }
    } else if (key == "negation_penalty") {
      r.number(v, key, cfg.negation_penalty);
    } else if (key == "matching_threshold") {
      r.number(v, key, cfg.matching_threshold);
    } else if (key == "neighborhood_weight") {
      r.number(v, key, cfg.neighborhood_weight);
    } else if (key == "chat_floor") {
      r.number(v, key, cfg.chat_floor);
    } else if (key == "top_k") {
      r.count(v, key, cfg.top_k);
    } else if (key == "lexicon") {
      read_lexicon(v, cfg.lexicon, r);
    } else if (key == "templates") {
      read_templates(v, cfg.templates, r);
    } else if (key == "list_separator") {
      r.string(v, key, cfg.templates.separator);
    } else if (key == "final_separator") {
      r.string(v, key, cfg.templates.final_separator);
    } else {
      r.bad(key, "unknown key", "UnknownKey");
    }
  }
  auto more = validate_config(cfg);
  findings.insert(findings.end(), more.begin(), more.end());
  return cfg;
}

std::vector<ConfigFinding> validate_config(const BotConfig& cfg) {
  std::vector<ConfigFinding> out;
  auto range = [&out](double v, const char* field, double lo, double hi, bool open_lo = false) {
    bool ok = std::isfinite(v) && (open_lo ? v > lo : v >= lo) && v <= hi;
    if (!ok) {
      std::string bounds = std::string(open_lo ? "(" : "[") + std::to_string(lo) + ", " +
                           (std::isinf(hi) ? std::string("inf)") : std::to_string(hi) + "]");
      out.push_back({"OutOfRange", field, std::to_string(v) + " not in " + bounds});
    }
  };
  constexpr double inf = std::numeric_limits<double>::infinity();
  range(cfg.prefs.query, "preferences.query", 0.0, 1.0);
  range(cfg.prefs.recommend, "preferences.recommend", 0.0, 1.0);
  range(cfg.prefs.chat, "preferences.chat", 0.0, 1.0);
  range(cfg.negation_penalty, "negation_penalty", 0.0, inf);
  range(cfg.matching_threshold, "matching_threshold", 0.0, 1.0);
  range(cfg.neighborhood_weight, "neighborhood_weight", 0.0, inf);
  range(cfg.chat_floor, "chat_floor", 0.0, inf, true);
  if (cfg.top_k < 1) out.push_back({"OutOfRange", "top_k", "must be >= 1"});
  for (const TemplateFinding& f : validate_templates(cfg.templates)) {
    out.push_back({std::string(to_string(f.kind)), "templates." + f.key, f.detail});
  }
  return out;
}

std::vector<ConfigFinding> validate_against_graph(const BotConfig& cfg, const KnowledgeGraph& g) {
  std::vector<ConfigFinding> out;
  for (const std::string& alias : unresolved_aliases(cfg.lexicon, g)) {
    out.push_back({"UnresolvedAlias", "lexicon.aliases." + alias,
                   "target '" + cfg.lexicon.aliases.at(alias) + "' is not a node"});
  }
  return out;
}

json config_to_json(const BotConfig& cfg) {
  json keywords = json::object();
  for (const auto& [intent, words] : cfg.lexicon.intent_keywords) {
    keywords[std::string(to_string(intent))] = words;
  }
  json templates = json::object();
  for (const auto& [key, variants] : cfg.templates.templates) templates[key] = variants;
  return json{
      {"mode", to_string(cfg.mode)},
      {"preferences",
       {{"query", cfg.prefs.query}, {"recommend", cfg.prefs.recommend}, {"chat", cfg.prefs.chat}}},
      {"negation_penalty", cfg.negation_penalty},
      {"matching_threshold", cfg.matching_threshold},
      {"neighborhood_weight", cfg.neighborhood_weight},
      {"top_k", cfg.top_k},
      {"chat_floor", cfg.chat_floor},
      {"lexicon",
       {{"aliases", cfg.lexicon.aliases},
        {"negation_cues", cfg.lexicon.negation_cues},
        {"intent_keywords", keywords},
        {"negation_window",
         {{"tokens", cfg.lexicon.negation_window.tokens},
          {"chars", cfg.lexicon.negation_window.chars}}}}},
      {"templates", templates},
      {"list_separator", cfg.templates.separator},
      {"final_separator", cfg.templates.final_separator},
  };
}

BotConfig merge_config(const BotConfig& base, const json& patch,
                       std::vector<ConfigFinding>& findings) {
  if (!patch.is_object()) {
    findings.push_back({"BadType", "", "config patch must be an object"});
    return base;
  }
  json doc = config_to_json(base);
  if (patch.contains("mode")) {
    auto m = parse_mode(patch["mode"]);
    if (m && *m != base.mode) {
      doc.erase("preferences");
      doc.erase("matching_threshold");
    }
  }
  // lexicon and templates are merged key-by-key, so a patch naming one
  // template must not wipe the rest
  doc.merge_patch(patch);
  return config_from_json(doc, findings);
}

}  // namespace kgcrs
