#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "kgcrs/dialogue_act.hpp"
#include "kgcrs/dialogue_state.hpp"
#include "kgcrs/pipeline.hpp"

namespace kgcrs::eval {

struct EvalTurn {
  Speaker speaker = Speaker::User;
  std::string utterance;
  std::optional<BotIntent> gold_intent;
  std::vector<std::string> gold_items;
};

struct EvalConversation {
  std::string id;
  std::size_t line = 0;
  std::vector<EvalTurn> turns;
};

struct EvalCorpus {
  std::vector<EvalConversation> conversations;
};

/// One JSON object per line:
///   {"id": "...", "turns": [{"speaker": "user"|"bot", "utterance": "...",
///                            "gold_intent": "Query"|"Recommend"|"Chat",
///                            "gold_items": ["entity name", ...]}, ...]}
/// Throws CorpusFormat with the offending line number.
EvalCorpus load_corpus(std::istream& in);

struct Metrics {
  double intent_accuracy = 0.0;              // percent
  std::map<std::size_t, double> recall_at;   // k -> percent
};

/// Analytic expectation of uniform random guessing: 1/3 intent accuracy and
/// min(k, n)/n recall for a uniformly random ranking of n entities.
Metrics random_baseline(std::size_t n_entities, const std::vector<std::size_t>& ks);

struct MonteCarloResult {
  double mean = 0.0;        // percent
  double std_error = 0.0;   // percent
  std::size_t trials = 0;
};

/// Empirical Recall@k of uniformly random rankings of n entities against one
/// uniformly drawn gold item.
MonteCarloResult monte_carlo_check(std::size_t n_entities, std::size_t k, std::size_t trials,
                                   std::uint64_t seed);

struct EvalReport {
  Metrics metrics;
  Metrics baseline;
  std::size_t conversations = 0;
  std::size_t bot_turns_scored = 0;
  std::size_t recommend_turns = 0;
  std::size_t skipped_turns = 0;
  std::size_t n_entities = 0;
  std::vector<std::string> unresolved_items;
};

struct ReplayOptions {
  std::vector<std::size_t> ks{1, 10, 50};
  std::uint64_t seed = 0;
  unsigned threads = 1;
};

/// Feeds every conversation's user turns through the pipeline in a fresh
/// session. Each annotated bot turn scores the intent the bot chose for the
/// preceding user turn; turns with gold items also score Recall@k against
/// the full ranking of that step. Metrics are macro-averaged over turns.
EvalReport replay_corpus(const EvalCorpus& corpus, const BotRuntime& bot, const Components& modules,
                         const ReplayOptions& options);

nlohmann::json report_to_json(const EvalReport& report);
std::string report_table(const EvalReport& report);

}  // namespace kgcrs::eval
