#include "kgcrs/pipeline.hpp"

#include <algorithm>

#include "kgcrs/act_generation.hpp"
#include "kgcrs/errors.hpp"
#include "kgcrs/response_generation.hpp"

namespace kgcrs {

std::shared_ptr<const BotRuntime> BotRuntime::make(std::shared_ptr<const KnowledgeGraph> graph,
                                                   BotConfig config) {
  auto rt = std::make_shared<BotRuntime>();
  rt->matcher = std::make_shared<MentionMatcher>(*graph, config.lexicon);
  rt->config = std::make_shared<const BotConfig>(std::move(config));
  rt->graph = std::move(graph);
  return rt;
}

namespace {

class RuleFrameParser final : public FrameParser {
 public:
  SemanticFrame parse(std::string_view utterance, const BotRuntime& bot) const override {
    return parse_utterance(utterance, *bot.matcher, bot.config->lexicon);
  }
};

class RuleEntityRanker final : public EntityRanker {
 public:
  std::vector<RankedEntity> rank(const DialogueState& s, const BotRuntime& bot) const override {
    return rank_candidates(s, *bot.graph, *bot.config);
  }
};

class RuleIntentPolicy final : public IntentPolicy {
 public:
  PolicyDecision decide(const SemanticFrame& frame, const DialogueState& s,
                        const std::vector<RankedEntity>& ranking,
                        const BotRuntime& bot) const override {
    return decide_intent(frame, s, ranking, *bot.graph, *bot.config);
  }
};

class KgActGenerator final : public ActGenerator {
 public:
  DialogueAct generate(BotIntent intent, const SemanticFrame& frame, const DialogueState& s,
                       const std::vector<RankedEntity>& ranking,
                       const BotRuntime& bot) const override {
    return generate_act(intent, frame, s, ranking, *bot.graph, *bot.config);
  }
};

class TemplateRenderer final : public ResponseRenderer {
 public:
  std::string render(const DialogueAct& act, const BotRuntime& bot,
                     std::uint64_t selector) const override {
    return render_response(act, bot.config->templates, *bot.graph, selector);
  }
};

template <typename F>
auto staged(const char* stage, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (Error& e) {
    if (e.stage().empty()) e.with_stage(stage);
    throw;
  } catch (const std::exception& e) {
    throw Error(ErrorCode::Internal, e.what()).with_stage(stage);
  }
}

}  // namespace

Components Components::rule_based() {
  return Components{std::make_shared<RuleFrameParser>(), std::make_shared<RuleEntityRanker>(),
                    std::make_shared<RuleIntentPolicy>(), std::make_shared<KgActGenerator>(),
                    std::make_shared<TemplateRenderer>()};
}

std::uint64_t turn_selector(std::uint64_t session_seed, std::size_t turn) {
  // splitmix64 finalizer
  std::uint64_t z = session_seed + 0x9E3779B97F4A7C15ULL * (static_cast<std::uint64_t>(turn) + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

TurnOutcome run_turn(const BotRuntime& bot, const Components& modules, const DialogueState& s,
                     std::string_view utterance, std::uint64_t session_seed) {
  const KnowledgeGraph& g = *bot.graph;
  TurnOutcome out;
  TurnRecord& rec = out.record;
  rec.utterance = std::string(utterance);

  rec.frame = staged("parse", [&] { return modules.parser->parse(utterance, bot); });
  DialogueState after_user = staged("state", [&] { return apply_frame(s, rec.frame, g); });
  rec.turn = after_user.turn_index;
  out.full_ranking = staged("rank", [&] { return modules.ranker->rank(after_user, bot); });
  rec.decision = staged("policy", [&] {
    return modules.policy->decide(rec.frame, after_user, out.full_ranking, bot);
  });
  rec.act = staged("act", [&] {
    return modules.acts->generate(rec.decision.intent, rec.frame, after_user, out.full_ranking, bot);
  });
  rec.response = staged("render", [&] {
    return modules.renderer->render(rec.act, bot, turn_selector(session_seed, rec.turn));
  });
  out.state = staged("state", [&] { return apply_bot_act(after_user, rec.act, rec.response); });

  std::size_t k = std::min(bot.config->top_k, out.full_ranking.size());
  rec.top_ranking.assign(out.full_ranking.begin(), out.full_ranking.begin() + static_cast<std::ptrdiff_t>(k));

  std::vector<NodeId> seeds;
  for (const Mention& m : rec.frame.mentions) seeds.push_back(m.node);
  for (NodeId n : rec.act.referenced_nodes()) seeds.push_back(n);
  rec.kg_focus = staged("focus", [&] { return g.focus(seeds, 1); });
  return out;
}

}  // namespace kgcrs
