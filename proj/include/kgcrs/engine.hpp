#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "kgcrs/config.hpp"
#include "kgcrs/dialogue_state.hpp"
#include "kgcrs/errors.hpp"
#include "kgcrs/knowledge_graph.hpp"
#include "kgcrs/pipeline.hpp"

namespace kgcrs {

/// Raised when a bot config or data file is rejected; carries every finding.
class ValidationError : public Error {
 public:
  ValidationError(ErrorCode code, const std::string& detail, std::vector<ConfigFinding> findings)
      : Error(code, detail), findings_(std::move(findings)) {}
  const std::vector<ConfigFinding>& findings() const { return findings_; }

 private:
  std::vector<ConfigFinding> findings_;
};

struct BotInfo {
  std::string id;
  std::string name;
  std::string created_at;  // ISO-8601 UTC
  LoadStats stats;
};

/// Controller layer: bots (persisted), sessions (in memory) and the per-turn
/// pipeline. Thread-safe. Turns of one session run strictly one after another;
/// a second message waits for the first. Each turn reads the bot's config
/// snapshot once at its start, so config updates land on turn boundaries.
class Engine {
 public:
  /// With a data directory, bots are persisted under `<dir>/bots/<id>/` and
  /// reloaded on construction.
  explicit Engine(std::optional<std::filesystem::path> data_dir = std::nullopt,
                  Components modules = Components::rule_based());
  ~Engine();

  Engine(const Engine&) = delete;
  Engine& operator=(const Engine&) = delete;

  BotInfo create_bot(const std::string& name, const std::string& kg_tsv,
                     const nlohmann::json& config_doc);
  /// Reuses another bot's data file.
  BotInfo create_bot_from(const std::string& name, const std::string& source_bot_id,
                          const nlohmann::json& config_doc);

  std::vector<BotInfo> list_bots() const;
  BotInfo bot_info(const std::string& bot_id) const;
  std::shared_ptr<const BotRuntime> bot_runtime(const std::string& bot_id) const;

  /// Validates the merged config and persists it; nothing changes on failure.
  BotConfig update_config(const std::string& bot_id, const nlohmann::json& patch);

  struct SessionHandle {
    std::string id;
    std::string bot_id;
    std::uint64_t seed = 0;
  };
  SessionHandle create_session(const std::string& bot_id, std::optional<std::uint64_t> seed = std::nullopt);

  /// Runs one turn. On failure the session is left exactly as before.
  nlohmann::json post_message(const std::string& session_id, const std::string& utterance);
  TurnOutcome post_message_raw(const std::string& session_id, const std::string& utterance);

  /// {"session", "bot_id", "seed", "state", "transcript"}
  nlohmann::json get_state(const std::string& session_id) const;

  Subgraph kg_focus(const std::string& bot_id, const std::vector<NodeId>& seeds, int radius) const;

 private:
  struct Bot;
  struct Session;

  std::shared_ptr<Bot> find_bot(const std::string& bot_id) const;
  std::shared_ptr<Session> find_session(const std::string& session_id) const;
  BotInfo install_bot(const std::string& id, const std::string& name, const std::string& created_at,
                      const std::string& kg_tsv, const nlohmann::json& config_doc, bool persist);
  void persist_bot(const Bot& bot) const;
  void load_persisted();

  std::optional<std::filesystem::path> data_dir_;
  Components modules_;

  mutable std::mutex mu_;
  std::map<std::string, std::shared_ptr<Bot>> bots_;
  std::map<std::string, std::shared_ptr<Session>> sessions_;
  std::uint64_t next_bot_ = 1;
  std::uint64_t next_session_ = 1;
};

}  // namespace kgcrs
