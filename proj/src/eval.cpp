#include "kgcrs/eval.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <istream>
#include <numeric>
#include <random>
#include <sstream>

#include "kgcrs/errors.hpp"

namespace kgcrs::eval {

using nlohmann::json;

namespace {

[[noreturn]] void corpus_error(std::size_t line, const std::string& detail) {
  throw Error(ErrorCode::CorpusFormat, "corpus line " + std::to_string(line) + ": " + detail, line);
}

std::optional<BotIntent> parse_gold_intent(std::string s) {
  for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  if (s == "query") return BotIntent::Query;
  if (s == "recommend") return BotIntent::Recommend;
  if (s == "chat") return BotIntent::Chat;
  return std::nullopt;
}

EvalTurn parse_turn(const json& t, std::size_t line) {
  if (!t.is_object()) corpus_error(line, "turn must be an object");
  EvalTurn turn;
  auto speaker = t.find("speaker");
  if (speaker == t.end() || !speaker->is_string()) corpus_error(line, "turn needs a speaker");
  if (*speaker == "user") {
    turn.speaker = Speaker::User;
  } else if (*speaker == "bot") {
    turn.speaker = Speaker::Bot;
  } else {
    corpus_error(line, "speaker must be \"user\" or \"bot\"");
  }
  if (auto u = t.find("utterance"); u != t.end()) {
    if (!u->is_string()) corpus_error(line, "utterance must be a string");
    turn.utterance = u->get<std::string>();
  }
  if (auto gi = t.find("gold_intent"); gi != t.end() && !gi->is_null()) {
    if (!gi->is_string()) corpus_error(line, "gold_intent must be a string");
    turn.gold_intent = parse_gold_intent(gi->get<std::string>());
    if (!turn.gold_intent) corpus_error(line, "gold_intent must be Query, Recommend or Chat");
  }
  if (auto items = t.find("gold_items"); items != t.end() && !items->is_null()) {
    if (!items->is_array()) corpus_error(line, "gold_items must be a list");
    for (const json& item : *items) {
      if (!item.is_string()) corpus_error(line, "gold_items must hold entity names");
      turn.gold_items.push_back(item.get<std::string>());
    }
  }
  if (turn.speaker == Speaker::User && (turn.gold_intent || !turn.gold_items.empty())) {
    corpus_error(line, "gold annotations belong on bot turns");
  }
  if (!turn.gold_items.empty() && turn.gold_intent != BotIntent::Recommend) {
    corpus_error(line, "gold_items require gold_intent Recommend");
  }
  return turn;
}

}  // namespace

EvalCorpus load_corpus(std::istream& in) {
  EvalCorpus corpus;
  std::string raw;
  std::size_t line = 0;
  while (std::getline(in, raw)) {
    ++line;
    if (std::all_of(raw.begin(), raw.end(), [](unsigned char c) { return std::isspace(c); })) continue;
    json doc = json::parse(raw, nullptr, false);
    if (doc.is_discarded()) corpus_error(line, "not valid JSON");
    if (!doc.is_object()) corpus_error(line, "conversation must be an object");
    EvalConversation conv;
    conv.line = line;
    if (auto id = doc.find("id"); id != doc.end()) {
      conv.id = id->is_string() ? id->get<std::string>() : id->dump();
    } else {
      conv.id = std::to_string(corpus.conversations.size());
    }
    auto turns = doc.find("turns");
    if (turns == doc.end() || !turns->is_array()) corpus_error(line, "conversation needs a turns list");
    for (const json& t : *turns) conv.turns.push_back(parse_turn(t, line));
    corpus.conversations.push_back(std::move(conv));
  }
  return corpus;
}

Metrics random_baseline(std::size_t n_entities, const std::vector<std::size_t>& ks) {
  if (n_entities == 0) throw Error(ErrorCode::BadRequest, "random baseline needs at least one entity");
  Metrics m;
  m.intent_accuracy = 100.0 / 3.0;
  for (std::size_t k : ks) {
    m.recall_at[k] = 100.0 * static_cast<double>(std::min(k, n_entities)) /
                     static_cast<double>(n_entities);
  }
  return m;
}

MonteCarloResult monte_carlo_check(std::size_t n_entities, std::size_t k, std::size_t trials,
                                   std::uint64_t seed) {
  if (n_entities == 0 || trials == 0) {
    throw Error(ErrorCode::BadRequest, "monte carlo check needs n >= 1 and trials >= 1");
  }
  std::mt19937_64 rng(seed);
  std::vector<std::size_t> perm(n_entities);
  const std::size_t top = std::min(k, n_entities);
  std::size_t hits = 0;
  for (std::size_t t = 0; t < trials; ++t) {
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    std::size_t gold = std::uniform_int_distribution<std::size_t>(0, n_entities - 1)(rng);
    // partial Fisher-Yates: only the first `top` slots are needed
    for (std::size_t i = 0; i < top; ++i) {
      std::size_t j = std::uniform_int_distribution<std::size_t>(i, n_entities - 1)(rng);
      std::swap(perm[i], perm[j]);
    }
    hits += std::find(perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(top), gold) !=
                    perm.begin() + static_cast<std::ptrdiff_t>(top)
                ? 1
                : 0;
  }
  double p = static_cast<double>(hits) / static_cast<double>(trials);
  return MonteCarloResult{100.0 * p, 100.0 * std::sqrt(p * (1.0 - p) / static_cast<double>(trials)),
                          trials};
}

namespace {

struct Tally {
  std::size_t scored = 0;
  std::size_t correct = 0;
  std::size_t recommend_turns = 0;
  std::size_t skipped = 0;
  std::map<std::size_t, double> recall_sum;
  std::vector<std::string> unresolved;
};

Tally replay_one(const EvalConversation& conv, const BotRuntime& bot, const Components& modules,
                 const std::vector<std::size_t>& ks, std::uint64_t session_seed) {
  const KnowledgeGraph& g = *bot.graph;
  Tally tally;
  DialogueState state = new_state();
  std::optional<TurnOutcome> pending;

  for (const EvalTurn& turn : conv.turns) {
    if (turn.speaker == Speaker::User) {
      pending = run_turn(bot, modules, state, turn.utterance, session_seed);
      state = pending->state;
      continue;
    }
    if (!turn.gold_intent) {
      pending.reset();
      continue;
    }
    if (!pending) {
      // bot speaks first or twice in a row: decide on an empty user turn
      pending = run_turn(bot, modules, state, "", session_seed);
      state = pending->state;
    }

    std::vector<NodeId> gold;
    bool resolved = true;
    for (const std::string& name : turn.gold_items) {
      const Node* n = g.lookup(name, NodeKind::Entity);
      if (n == nullptr) {
        resolved = false;
        tally.unresolved.push_back(name);
      } else if (std::find(gold.begin(), gold.end(), n->id) == gold.end()) {
        gold.push_back(n->id);
      }
    }
    if (!resolved) {
      ++tally.skipped;
      pending.reset();
      continue;
    }

    ++tally.scored;
    if (pending->record.decision.intent == *turn.gold_intent) ++tally.correct;
    if (*turn.gold_intent == BotIntent::Recommend && !gold.empty()) {
      ++tally.recommend_turns;
      const auto& ranking = pending->full_ranking;
      for (std::size_t k : ks) {
        std::size_t top = std::min(k, ranking.size());
        std::size_t hits = 0;
        for (NodeId id : gold) {
          auto end = ranking.begin() + static_cast<std::ptrdiff_t>(top);
          hits += std::any_of(ranking.begin(), end,
                              [id](const RankedEntity& r) { return r.entity == id; })
                      ? 1
                      : 0;
        }
        tally.recall_sum[k] += static_cast<double>(hits) / static_cast<double>(gold.size());
      }
    }
    pending.reset();
  }
  return tally;
}

}  // namespace

EvalReport replay_corpus(const EvalCorpus& corpus, const BotRuntime& bot, const Components& modules,
                         const ReplayOptions& options) {
  std::vector<std::size_t> ks = options.ks;
  std::sort(ks.begin(), ks.end());
  ks.erase(std::unique(ks.begin(), ks.end()), ks.end());

  const std::size_t n = corpus.conversations.size();
  std::vector<Tally> tallies(n);
  unsigned threads = std::max(1u, options.threads);
  auto work = [&](std::size_t begin, std::size_t step) {
    for (std::size_t i = begin; i < n; i += step) {
      tallies[i] = replay_one(corpus.conversations[i], bot, modules, ks,
                              turn_selector(options.seed, i));
    }
  };
  if (threads == 1 || n < 2) {
    work(0, 1);
  } else {
    std::vector<std::future<void>> jobs;
    for (unsigned t = 0; t < threads; ++t) jobs.push_back(std::async(std::launch::async, work, t, threads));
    for (auto& j : jobs) j.get();
  }

  EvalReport report;
  report.conversations = n;
  report.n_entities = bot.graph->entities().size();
  std::size_t correct = 0;
  std::map<std::size_t, double> recall_sum;
  for (const Tally& t : tallies) {
    report.bot_turns_scored += t.scored;
    report.recommend_turns += t.recommend_turns;
    report.skipped_turns += t.skipped;
    correct += t.correct;
    for (const auto& [k, v] : t.recall_sum) recall_sum[k] += v;
    report.unresolved_items.insert(report.unresolved_items.end(), t.unresolved.begin(),
                                   t.unresolved.end());
  }
  report.metrics.intent_accuracy =
      report.bot_turns_scored == 0
          ? 0.0
          : 100.0 * static_cast<double>(correct) / static_cast<double>(report.bot_turns_scored);
  for (std::size_t k : ks) {
    report.metrics.recall_at[k] = report.recommend_turns == 0
                                      ? 0.0
                                      : 100.0 * recall_sum[k] /
                                            static_cast<double>(report.recommend_turns);
  }
  if (report.n_entities > 0) report.baseline = random_baseline(report.n_entities, ks);
  return report;
}

json report_to_json(const EvalReport& r) {
  auto metrics = [](const Metrics& m) {
    json recall = json::object();
    for (const auto& [k, v] : m.recall_at) recall[std::to_string(k)] = v;
    return json{{"intent_accuracy", m.intent_accuracy}, {"recall_at", recall}};
  };
  return json{
      {"averaging", "macro over turns"},
      {"metrics", metrics(r.metrics)},
      {"baseline", metrics(r.baseline)},
      {"counts",
       {{"conversations", r.conversations},
        {"bot_turns_scored", r.bot_turns_scored},
        {"recommend_turns", r.recommend_turns},
        {"skipped_turns", r.skipped_turns}}},
      {"n_entities", r.n_entities},
      {"unresolved_items", r.unresolved_items},
  };
}

std::string report_table(const EvalReport& r) {
  std::ostringstream out;
  out.setf(std::ios::fixed);
  out.precision(2);
  out << "Macro-averaged over turns; " << r.conversations << " conversations, "
      << r.bot_turns_scored << " bot turns scored, " << r.recommend_turns << " recommend turns, "
      << r.skipped_turns << " skipped; " << r.n_entities << " entities\n";
  out << "Method    Accuracy(%)";
  for (const auto& [k, v] : r.metrics.recall_at) out << "   R@" << k << "(%)";
  out << "\n";
  auto row = [&out](const char* name, const Metrics& m) {
    out << name;
    out.width(11);
    out << m.intent_accuracy;
    for (const auto& [k, v] : m.recall_at) {
      out << "  ";
      out.width(static_cast<std::streamsize>(std::to_string(k).size()) + 6);
      out << v;
    }
    out << "\n";
  };
  row("Baseline", r.baseline);
  row("Bot     ", r.metrics);
  return out.str();
}

}  // namespace kgcrs::eval
