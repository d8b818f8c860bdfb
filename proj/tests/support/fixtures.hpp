#pragma once

#include <map>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include "kgcrs/dialogue_state.hpp"
#include "kgcrs/knowledge_graph.hpp"
#include "kgcrs/pipeline.hpp"

namespace fixtures {

// Three films, two directors, two genres.
inline constexpr const char* kKg3Tsv =
    "Inception\tEntity\tNolan\tAttribute\tDirector\n"
    "Inception\tEntity\tSciFi\tAttribute\tGenre\n"
    "Interstellar\tEntity\tNolan\tAttribute\tDirector\n"
    "Interstellar\tEntity\tSciFi\tAttribute\tGenre\n"
    "Titanic\tEntity\tCameron\tAttribute\tDirector\n"
    "Titanic\tEntity\tRomance\tAttribute\tGenre\n";

inline constexpr const char* kSingleLine =
    "Catch Me If You Can\tEntity\tTom Hanks\tAttribute\tActor";

std::shared_ptr<const kgcrs::KnowledgeGraph> load(const std::string& tsv);
std::shared_ptr<const kgcrs::KnowledgeGraph> kg3();

kgcrs::NodeId id_of(const kgcrs::KnowledgeGraph& g, const std::string& name);
std::vector<std::string> names(const kgcrs::KnowledgeGraph& g, const std::vector<kgcrs::NodeId>& ids);

/// Five diagnoses with pairwise distinct symptom signatures: one value for
/// each of `types` (3..6) symptom types.
struct DxGraph {
  std::string tsv;
  std::vector<std::string> diseases;
  std::vector<std::string> types;
  std::map<std::string, std::map<std::string, std::string>> signature;  // disease -> type -> value
};
DxGraph make_dx_graph(std::mt19937_64& rng, int types = 6);

/// Random graph: up to `max_entities` entities, up to `max_types` relation
/// labels, zero to two values per type and entity, a few generic nodes.
/// Names mix case, width and scripts so normalization is exercised.
std::string random_graph_tsv(std::mt19937_64& rng, int max_entities, int max_types);

/// Random but well-formed dialogue state over `g`.
kgcrs::DialogueState random_state(std::mt19937_64& rng, const kgcrs::KnowledgeGraph& g);

/// Simulated patient/user that knows a target entity and answers every Query
/// act truthfully with the target's value(s) for the asked type.
class TruthfulUser {
 public:
  TruthfulUser(const kgcrs::KnowledgeGraph& g, kgcrs::NodeId target) : g_(g), target_(target) {}
  std::string opening() const { return "hello doctor"; }
  std::string respond(const kgcrs::TurnRecord& bot_turn) const;

 private:
  const kgcrs::KnowledgeGraph& g_;
  kgcrs::NodeId target_;
};

/// Random user utterance over `g`: mentions, negations, keywords, noise.
std::string random_utterance(std::mt19937_64& rng, const kgcrs::KnowledgeGraph& g);

}  // namespace fixtures
