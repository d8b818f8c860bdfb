#include "kgcrs/engine.hpp"

#include <chrono>
#include <ctime>
#include <fstream>
#include <random>
#include <sstream>

#include "kgcrs/serialize.hpp"

namespace kgcrs {

namespace fs = std::filesystem;
using nlohmann::json;

struct Engine::Bot {
  std::string id;
  std::string name;
  std::string created_at;
  std::string kg_tsv;
  LoadStats stats;
  std::shared_ptr<const KnowledgeGraph> graph;

  mutable std::mutex mu;
  std::shared_ptr<const BotRuntime> runtime;

  std::shared_ptr<const BotRuntime> snapshot() const {
    std::lock_guard lock(mu);
    return runtime;
  }
};

struct Engine::Session {
  std::string id;
  std::uint64_t seed = 0;
  std::shared_ptr<Bot> bot;

  mutable std::mutex mu;  // held for the whole turn
  DialogueState state;
  json transcript = json::array();
};

namespace {

std::string now_iso8601() {
  auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void write_atomic(const fs::path& path, const std::string& content) {
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::Internal, "cannot write " + tmp.string());
    out << content;
  }
  fs::rename(tmp, path);
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Internal, "cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::uint64_t numeric_suffix(const std::string& id) {
  std::uint64_t n = 0;
  for (std::size_t i = 1; i < id.size(); ++i) {
    if (id[i] < '0' || id[i] > '9') return 0;
    n = n * 10 + static_cast<std::uint64_t>(id[i] - '0');
  }
  return n;
}

[[noreturn]] void reject_config(std::vector<ConfigFinding> findings) {
  bool alias = std::any_of(findings.begin(), findings.end(),
                           [](const ConfigFinding& f) { return f.code == "UnresolvedAlias"; });
  std::string detail;
  for (const ConfigFinding& f : findings) {
    if (!detail.empty()) detail += "; ";
    detail += f.code + " at " + f.field + ": " + f.detail;
  }
  throw ValidationError(alias ? ErrorCode::UnresolvedAlias : ErrorCode::InvalidConfig, detail,
                        std::move(findings));
}

BotConfig checked_config(const json& doc, const KnowledgeGraph& g) {
  std::vector<ConfigFinding> findings;
  BotConfig cfg = config_from_json(doc, findings);
  if (findings.empty()) findings = validate_against_graph(cfg, g);
  if (!findings.empty()) reject_config(std::move(findings));
  return cfg;
}

}  // namespace

Engine::Engine(std::optional<fs::path> data_dir, Components modules)
    : data_dir_(std::move(data_dir)), modules_(std::move(modules)) {
  if (data_dir_) {
    fs::create_directories(*data_dir_ / "bots");
    load_persisted();
  }
}

Engine::~Engine() = default;

void Engine::load_persisted() {
  std::vector<fs::path> dirs;
  for (const auto& entry : fs::directory_iterator(*data_dir_ / "bots")) {
    if (entry.is_directory()) dirs.push_back(entry.path());
  }
  std::sort(dirs.begin(), dirs.end());
  for (const fs::path& dir : dirs) {
    json meta = json::parse(read_file(dir / "meta.json"));
    json config = json::parse(read_file(dir / "config.json"));
    std::string id = meta.at("id").get<std::string>();
    install_bot(id, meta.at("name").get<std::string>(), meta.at("created_at").get<std::string>(),
                read_file(dir / "kg.tsv"), config, false);
    next_bot_ = std::max(next_bot_, numeric_suffix(id) + 1);
  }
}

BotInfo Engine::install_bot(const std::string& id, const std::string& name,
                            const std::string& created_at, const std::string& kg_tsv,
                            const json& config_doc, bool persist) {
  auto loaded = KnowledgeGraph::load_string(kg_tsv);
  auto graph = std::make_shared<const KnowledgeGraph>(std::move(loaded.graph));
  BotConfig cfg = checked_config(config_doc, *graph);

  auto bot = std::make_shared<Bot>();
  bot->id = id;
  bot->name = name;
  bot->created_at = created_at;
  bot->kg_tsv = kg_tsv;
  bot->stats = loaded.stats;
  bot->graph = graph;
  bot->runtime = BotRuntime::make(graph, std::move(cfg));
  if (persist) persist_bot(*bot);

  std::lock_guard lock(mu_);
  bots_[id] = bot;
  return BotInfo{id, name, created_at, bot->stats};
}

void Engine::persist_bot(const Bot& bot) const {
  if (!data_dir_) return;
  fs::path dir = *data_dir_ / "bots" / bot.id;
  fs::create_directories(dir);
  write_atomic(dir / "kg.tsv", bot.kg_tsv);
  write_atomic(dir / "config.json", config_to_json(*bot.snapshot()->config).dump(2));
  write_atomic(dir / "meta.json",
               json{{"id", bot.id}, {"name", bot.name}, {"created_at", bot.created_at}}.dump(2));
}

BotInfo Engine::create_bot(const std::string& name, const std::string& kg_tsv,
                           const json& config_doc) {
  std::string id;
  {
    std::lock_guard lock(mu_);
    id = "b" + std::to_string(next_bot_++);
  }
  return install_bot(id, name, now_iso8601(), kg_tsv, config_doc, true);
}

BotInfo Engine::create_bot_from(const std::string& name, const std::string& source_bot_id,
                                const json& config_doc) {
  std::string tsv = find_bot(source_bot_id)->kg_tsv;
  return create_bot(name, tsv, config_doc);
}

std::shared_ptr<Engine::Bot> Engine::find_bot(const std::string& bot_id) const {
  std::lock_guard lock(mu_);
  auto it = bots_.find(bot_id);
  if (it == bots_.end()) throw Error(ErrorCode::BotNotFound, "no bot '" + bot_id + "'");
  return it->second;
}

std::shared_ptr<Engine::Session> Engine::find_session(const std::string& session_id) const {
  std::lock_guard lock(mu_);
  auto it = sessions_.find(session_id);
  if (it == sessions_.end()) {
    throw Error(ErrorCode::SessionNotFound, "no session '" + session_id + "'");
  }
  return it->second;
}

std::vector<BotInfo> Engine::list_bots() const {
  std::lock_guard lock(mu_);
  std::vector<BotInfo> out;
  for (const auto& [id, bot] : bots_) out.push_back(BotInfo{id, bot->name, bot->created_at, bot->stats});
  return out;
}

BotInfo Engine::bot_info(const std::string& bot_id) const {
  auto bot = find_bot(bot_id);
  return BotInfo{bot->id, bot->name, bot->created_at, bot->stats};
}

std::shared_ptr<const BotRuntime> Engine::bot_runtime(const std::string& bot_id) const {
  return find_bot(bot_id)->snapshot();
}

BotConfig Engine::update_config(const std::string& bot_id, const json& patch) {
  auto bot = find_bot(bot_id);
  std::lock_guard lock(bot->mu);
  std::vector<ConfigFinding> findings;
  BotConfig merged = merge_config(*bot->runtime->config, patch, findings);
  if (findings.empty()) findings = validate_against_graph(merged, *bot->graph);
  if (!findings.empty()) reject_config(std::move(findings));

  auto next = BotRuntime::make(bot->graph, merged);
  if (data_dir_) {
    fs::path dir = *data_dir_ / "bots" / bot->id;
    write_atomic(dir / "config.json", config_to_json(merged).dump(2));
  }
  bot->runtime = std::move(next);
  return merged;
}

Engine::SessionHandle Engine::create_session(const std::string& bot_id,
                                             std::optional<std::uint64_t> seed) {
  auto bot = find_bot(bot_id);
  auto session = std::make_shared<Session>();
  session->bot = bot;
  session->seed = seed ? *seed : std::random_device{}();
  session->state = new_state();
  std::lock_guard lock(mu_);
  session->id = "s" + std::to_string(next_session_++);
  sessions_[session->id] = session;
  return SessionHandle{session->id, bot->id, session->seed};
}

TurnOutcome Engine::post_message_raw(const std::string& session_id, const std::string& utterance) {
  auto session = find_session(session_id);
  std::lock_guard turn_lock(session->mu);
  auto runtime = session->bot->snapshot();
  TurnOutcome outcome = run_turn(*runtime, modules_, session->state, utterance, session->seed);
  json record = json_doc::turn(outcome.record, *runtime->graph);
  session->state = outcome.state;
  session->transcript.push_back(std::move(record));
  return outcome;
}

json Engine::post_message(const std::string& session_id, const std::string& utterance) {
  auto session = find_session(session_id);
  TurnOutcome outcome = post_message_raw(session_id, utterance);
  return json_doc::turn(outcome.record, *session->bot->graph);
}

json Engine::get_state(const std::string& session_id) const {
  auto session = find_session(session_id);
  std::lock_guard lock(session->mu);
  return json{{"session", session->id},
              {"bot_id", session->bot->id},
              {"seed", session->seed},
              {"state", json_doc::state(session->state, *session->bot->graph)},
              {"transcript", session->transcript}};
}

Subgraph Engine::kg_focus(const std::string& bot_id, const std::vector<NodeId>& seeds,
                          int radius) const {
  auto bot = find_bot(bot_id);
  for (NodeId id : seeds) {
    if (!bot->graph->contains(id)) {
      throw Error(ErrorCode::UnknownNode, "node " + std::to_string(id.value) + " is not in the graph");
    }
  }
  return bot->graph->focus(seeds, radius);
}

}  // namespace kgcrs
