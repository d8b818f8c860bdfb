#include "support/fixtures.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace fixtures {

using namespace kgcrs;

std::shared_ptr<const KnowledgeGraph> load(const std::string& tsv) {
  return std::make_shared<const KnowledgeGraph>(KnowledgeGraph::load_string(tsv).graph);
}

std::shared_ptr<const KnowledgeGraph> kg3() { return load(kKg3Tsv); }

NodeId id_of(const KnowledgeGraph& g, const std::string& name) {
  const Node* n = g.lookup(name);
  if (n == nullptr) throw std::runtime_error("fixture node missing: " + name);
  return n->id;
}

std::vector<std::string> names(const KnowledgeGraph& g, const std::vector<NodeId>& ids) {
  std::vector<std::string> out;
  for (NodeId id : ids) out.push_back(g.node(id).name);
  return out;
}

namespace {

const std::vector<std::string> kDiseases = {"Upper respiratory infection", "Bronchitis",
                                            "Infantile diarrhea", "Indigestion",
                                            "Hand foot mouth disease"};

const std::vector<std::pair<std::string, std::vector<std::string>>> kSymptomTypes = {
    {"Fever", {"high fever", "low grade fever", "normal temperature"}},
    {"Cough", {"dry cough", "wet cough", "barking cough"}},
    {"Stool", {"watery stool", "mucus stool", "regular stool"}},
    {"Skin", {"hand rash", "eczema", "clear skin"}},
    {"Appetite", {"poor appetite", "vomiting", "normal appetite"}},
    {"Nasal", {"runny nose", "sneezing", "blocked sinuses"}},
};

template <typename T>
const T& pick(std::mt19937_64& rng, const std::vector<T>& v) {
  return v[std::uniform_int_distribution<std::size_t>(0, v.size() - 1)(rng)];
}

}  // namespace

DxGraph make_dx_graph(std::mt19937_64& rng, int types) {
  types = std::clamp(types, 1, static_cast<int>(kSymptomTypes.size()));
  DxGraph dx;
  dx.diseases = kDiseases;
  std::vector<std::size_t> order(kSymptomTypes.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::shuffle(order.begin(), order.end(), rng);
  order.resize(static_cast<std::size_t>(types));
  for (std::size_t t : order) dx.types.push_back(kSymptomTypes[t].first);

  while (true) {
    std::set<std::vector<std::string>> seen;
    dx.signature.clear();
    for (const std::string& d : dx.diseases) {
      std::vector<std::string> sig;
      for (std::size_t t : order) {
        const std::string& value = pick(rng, kSymptomTypes[t].second);
        dx.signature[d][kSymptomTypes[t].first] = value;
        sig.push_back(value);
      }
      seen.insert(sig);
    }
    if (seen.size() == dx.diseases.size()) break;
  }

  dx.tsv.clear();
  for (const std::string& d : dx.diseases) {
    for (const auto& [type, value] : dx.signature[d]) {
      dx.tsv += d + "\tEntity\t" + value + "\tAttribute\t" + type + "\n";
    }
  }
  return dx;
}

std::string random_graph_tsv(std::mt19937_64& rng, int max_entities, int max_types) {
  static const std::vector<std::string> kStems = {
      "Alpha", "beta", "GAMMA", "Délta", "ｅｐｓｉｌｏｎ", "Zeta", "eta", "Theta",
      "Iota",  "kappa", "Λambda", "Mu",  "Nü",          "xi",   "Omicron", "Pi",
      "Rho",   "Sigma", "Tau",    "υpsilon", "Phi",      "Chi",  "psi",  "Ωmega",
      "天空",  "山川",  "河流",   "森林"};
  auto rand_int = [&rng](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };

  int n_entities = rand_int(1, max_entities);
  int n_types = rand_int(1, max_types);
  std::vector<std::string> relations;
  for (int t = 0; t < n_types; ++t) relations.push_back("Rel" + std::to_string(t));

  std::string tsv;
  bool any = false;
  for (int e = 0; e < n_entities; ++e) {
    std::string entity = pick(rng, kStems) + " film " + std::to_string(e);
    for (int t = 0; t < n_types; ++t) {
      int values = rand_int(0, 2);
      for (int v = 0; v < values; ++v) {
        std::string attr = pick(rng, kStems) + " " + relations[t] + " v" + std::to_string(rand_int(0, 3));
        tsv += entity + "\tEntity\t" + attr + "\tAttribute\t" + relations[t] + "\n";
        any = true;
      }
    }
    if (rand_int(0, 3) == 0) {
      tsv += entity + "\tentity\t" + pick(rng, kStems) + " trivia\tGeneric\tTrivia\n";
      any = true;
    }
  }
  if (!any) tsv += pick(rng, kStems) + " film 0\tEntity\tlonely attr\tAttribute\tRel0\n";
  return tsv;
}

DialogueState random_state(std::mt19937_64& rng, const KnowledgeGraph& g) {
  DialogueState s;
  std::bernoulli_distribution coin(0.3);
  for (const Node& n : g.nodes()) {
    if (n.kind == NodeKind::Attribute) {
      if (coin(rng)) {
        s.liked_attrs.insert(n.id);
      } else if (coin(rng)) {
        s.disliked_attrs.insert(n.id);
      }
    } else if (n.kind == NodeKind::Entity) {
      if (coin(rng)) {
        s.liked_entities.insert(n.id);
      } else if (coin(rng)) {
        s.rejected_entities.insert(n.id);
      } else if (coin(rng)) {
        s.recommended.insert(n.id);
      }
    }
  }
  for (const std::string& t : g.attribute_types()) {
    if (coin(rng)) s.asked_types.insert(t);
  }
  return s;
}

std::string TruthfulUser::respond(const TurnRecord& bot_turn) const {
  switch (bot_turn.act.intent) {
    case BotIntent::Query: {
      const auto& groups = g_.attributes_of_entity(target_);
      auto it = groups.find(bot_turn.act.relation);
      if (it == groups.end() || it->second.empty()) return "i am not sure";
      std::string out = "my child has";
      for (std::size_t i = 0; i < it->second.size(); ++i) {
        out += (i == 0 ? " " : " and ") + g_.node(it->second[i]).name;
      }
      return out;
    }
    case BotIntent::Recommend:
      return "thank you";
    case BotIntent::Chat:
      return "hmm";
  }
  return "hmm";
}

std::string random_utterance(std::mt19937_64& rng, const KnowledgeGraph& g) {
  static const std::vector<std::string> kFillers = {
      "i like", "maybe", "not", "don't want", "but", "and", "recommend something", "yes",
      "no thanks", "hello", "hate", "what about", "sure", "something else", "不要", "推荐", ","};
  auto rand_int = [&rng](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  std::string out;
  int parts = rand_int(0, 5);
  for (int i = 0; i < parts; ++i) {
    if (!out.empty()) out += " ";
    if (rand_int(0, 1) == 0) {
      out += pick(rng, kFillers);
    } else {
      const Node& n = g.nodes()[static_cast<std::size_t>(rand_int(0, static_cast<int>(g.nodes().size()) - 1))];
      out += n.name;
    }
  }
  return out;
}

}  // namespace fixtures
