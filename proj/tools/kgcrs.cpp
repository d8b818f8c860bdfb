// Command-line entry point: evaluation harness, HTTP service, and a console chat.

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "kgcrs/engine.hpp"
#include "kgcrs/eval.hpp"
#include "kgcrs/http_server.hpp"
#include "kgcrs/serialize.hpp"

namespace {

using nlohmann::json;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw kgcrs::Error(kgcrs::ErrorCode::BadRequest, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json read_config(const std::string& path) {
  if (path.empty()) return json::object();
  json doc = json::parse(read_file(path), nullptr, false);
  if (doc.is_discarded()) throw kgcrs::Error(kgcrs::ErrorCode::InvalidConfig, path + " is not valid JSON");
  return doc;
}

std::shared_ptr<const kgcrs::BotRuntime> build_bot(const std::string& kg_path, const std::string& config_path) {
  auto loaded = kgcrs::KnowledgeGraph::load_string(read_file(kg_path));
  auto graph = std::make_shared<const kgcrs::KnowledgeGraph>(std::move(loaded.graph));
  std::vector<kgcrs::ConfigFinding> findings;
  kgcrs::BotConfig cfg = kgcrs::config_from_json(read_config(config_path), findings);
  if (findings.empty()) findings = kgcrs::validate_against_graph(cfg, *graph);
  if (!findings.empty()) {
    for (const auto& f : findings) std::cerr << f.code << " at " << f.field << ": " << f.detail << "\n";
    throw kgcrs::Error(kgcrs::ErrorCode::InvalidConfig, "config rejected");
  }
  return kgcrs::BotRuntime::make(graph, std::move(cfg));
}

std::vector<std::size_t> parse_ks(const std::string& list) {
  std::vector<std::size_t> ks;
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    std::size_t pos = 0;
    unsigned long k = std::stoul(item, &pos);
    if (pos != item.size() || k == 0) throw CLI::ValidationError("--k", "expected positive integers");
    ks.push_back(k);
  }
  if (ks.empty()) throw CLI::ValidationError("--k", "expected at least one k");
  return ks;
}

int run_eval(const std::string& kg, const std::string& config, const std::string& corpus_path,
             const std::string& ks, std::uint64_t seed, const std::string& out_path, unsigned threads) {
  auto bot = build_bot(kg, config);
  std::ifstream in(corpus_path);
  if (!in) throw kgcrs::Error(kgcrs::ErrorCode::CorpusFormat, "cannot open " + corpus_path);
  kgcrs::eval::EvalCorpus corpus = kgcrs::eval::load_corpus(in);
  kgcrs::eval::ReplayOptions opts;
  opts.ks = parse_ks(ks);
  opts.seed = seed;
  opts.threads = threads;
  auto report = kgcrs::eval::replay_corpus(corpus, *bot, kgcrs::Components::rule_based(), opts);
  std::cout << kgcrs::eval::report_table(report);
  json doc = kgcrs::eval::report_to_json(report);
  if (!out_path.empty()) {
    std::ofstream out(out_path);
    out << doc.dump(2) << "\n";
  }
  return 0;
}

int run_chat(const std::string& kg, const std::string& config, std::uint64_t seed, bool show_json) {
  auto bot = build_bot(kg, config);
  auto modules = kgcrs::Components::rule_based();
  kgcrs::DialogueState state = kgcrs::new_state();
  std::string line;
  while (std::cout << "> " << std::flush, std::getline(std::cin, line)) {
    auto outcome = kgcrs::run_turn(*bot, modules, state, line, seed);
    state = outcome.state;
    const auto& rec = outcome.record;
    if (show_json) {
      std::cout << kgcrs::json_doc::turn(rec, *bot->graph).dump() << "\n";
      continue;
    }
    std::cout << "  [" << kgcrs::to_string(rec.frame.user_intent);
    for (const auto& m : rec.frame.mentions) {
      std::cout << " " << bot->graph->node(m.node).name
                << (m.polarity == kgcrs::Polarity::Positive ? "+" : "-");
    }
    std::cout << "]\n";
    std::cout << "bot (" << kgcrs::to_string(rec.decision.intent) << "): " << rec.response << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Rule-based conversational recommender over a simple knowledge graph"};
  app.require_subcommand(1);

  std::string kg;
  std::string config;
  std::string corpus;
  std::string ks = "1,10,50";
  std::uint64_t seed = 0;
  std::string out;
  unsigned threads = 1;
  auto* eval = app.add_subcommand("eval", "Replay an annotated corpus and report Accuracy and Recall@k");
  eval->add_option("--kg", kg, "Five-column TSV data file")->required()->check(CLI::ExistingFile);
  eval->add_option("--config", config, "Bot config document (JSON)")->check(CLI::ExistingFile);
  eval->add_option("--corpus", corpus, "Conversations, one JSON object per line")->required()->check(CLI::ExistingFile);
  eval->add_option("--k", ks, "Comma-separated cut-offs for Recall@k")->capture_default_str();
  eval->add_option("--seed", seed, "Template selector seed")->capture_default_str();
  eval->add_option("--out", out, "Write the report document here");
  eval->add_option("--threads", threads, "Replay conversations in parallel")->capture_default_str();

  std::string listen = "127.0.0.1:8080";
  std::string data_dir;
  auto* serve = app.add_subcommand("serve", "Run the HTTP API");
  serve->add_option("--listen", listen, "host:port")->capture_default_str();
  serve->add_option("--data-dir", data_dir, "Bot storage directory (default: $KGCRS_DATA_DIR or ./kgcrs-data)");

  bool show_json = false;
  std::uint64_t chat_seed = 0;
  std::string chat_kg;
  std::string chat_config;
  auto* chat = app.add_subcommand("chat", "Talk to a bot on the console");
  chat->add_option("--kg", chat_kg, "Five-column TSV data file")->required()->check(CLI::ExistingFile);
  chat->add_option("--config", chat_config, "Bot config document (JSON)")->check(CLI::ExistingFile);
  chat->add_option("--seed", chat_seed, "Template selector seed")->capture_default_str();
  chat->add_flag("--json", show_json, "Print the full turn record for each message");

  std::string stats_kg;
  auto* stats = app.add_subcommand("kg-stats", "Load a data file and print graph statistics");
  stats->add_option("kg", stats_kg, "Five-column TSV data file")->required()->check(CLI::ExistingFile);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*eval) return run_eval(kg, config, corpus, ks, seed, out, threads);
    if (*chat) return run_chat(chat_kg, chat_config, chat_seed, show_json);
    if (*stats) {
      auto loaded = kgcrs::KnowledgeGraph::load_string(read_file(stats_kg));
      std::cout << kgcrs::json_doc::graph_stats(loaded.graph, loaded.stats).dump(2) << "\n";
      return 0;
    }
    if (*serve) {
      if (data_dir.empty()) {
        const char* env = std::getenv("KGCRS_DATA_DIR");
        data_dir = env != nullptr ? env : "kgcrs-data";
      }
      auto colon = listen.rfind(':');
      if (colon == std::string::npos) throw CLI::ValidationError("--listen", "expected host:port");
      std::string host = listen.substr(0, colon);
      int port = std::stoi(listen.substr(colon + 1));
      kgcrs::Engine engine{std::filesystem::path(data_dir)};
      kgcrs::HttpServer server(engine);
      if (!server.bind(host, port)) {
        std::cerr << "cannot bind " << listen << "\n";
        return 1;
      }
      std::cerr << "listening on " << host << ":" << server.port() << ", data in " << data_dir << "\n";
      return server.serve() ? 0 : 1;
    }
  } catch (const kgcrs::Error& e) {
    std::cerr << "error: " << kgcrs::to_string(e.code()) << ": " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
