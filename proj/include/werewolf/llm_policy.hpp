#pragma once

#include <memory>
#include <string>
#include <vector>

#include "werewolf/client.hpp"
#include "werewolf/error.hpp"
#include "werewolf/policy.hpp"
#include "werewolf/prompt.hpp"
#include "werewolf/rng.hpp"
#include "werewolf/schema.hpp"
#include "werewolf/view.hpp"

namespace werewolf {

// One template per action family; the night roles share one since only the
// instructions differ. All default templates use the same skeleton and the
// full slot set: {game_rules, role_brief, view_summary, memory, transcript,
// candidates, action_instructions, output_schema}.
struct TemplateSet {
  PromptTemplate bid, speak, vote, night, summarize;
};

inline TemplateSet default_templates() {
  const char* base =
      "{game_rules}\n"
      "{role_brief}\n"
      "{view_summary}\n"
      "\n"
      "Your private notes so far:\n"
      "{memory}\n"
      "Debate this round so far:\n"
      "{transcript}\n"
      "\n"
      "{action_instructions}\n"
      "Choices: {candidates}\n"
      "\n"
      "Respond with exactly one JSON object and nothing else:\n"
      "{output_schema}\n";
  PromptTemplate t{std::string(base)};
  return {t, t, t, t, t};
}

namespace detail {

inline std::string role_brief(const AgentView& view) {
  std::string out = "You are " + view.name + ". Your secret role: ";
  out += to_string(view.role);
  out += ". ";
  switch (view.role) {
    case Role::Villager:
      out += "Find the werewolves and vote them out.";
      break;
    case Role::Werewolf:
      out += "Your notes name your packmates. Blend in, deflect suspicion, and never "
             "expose them.";
      break;
    case Role::Seer:
      out += "Each night you learn whether one player is a werewolf. Revealing what you "
             "know helps the village but paints a target on your back.";
      break;
    case Role::Doctor:
      out += "Each night you may protect one player from elimination.";
      break;
  }
  return out;
}

inline std::string view_summary(const AgentView& view) {
  std::string out = "Round " + std::to_string(view.round) + ", ";
  out += to_string(view.phase);
  out += " phase. Living players: ";
  for (size_t i = 0; i < view.living.size(); ++i) {
    if (i) out += ", ";
    out += view.living[i];
  }
  out += '.';
  return out;
}

inline std::string action_instructions(const DecisionRequest& req) {
  switch (req.kind) {
    case ActionKind::Bid:
      return "Decide how urgently you want to speak in the debate. Bid 0 to observe and "
             "listen, 1 for general thoughts, 2 for something important, 3 if it is "
             "critical you speak right now, 4 if you were just mentioned and must respond.";
    case ActionKind::Speak:
      return "You won the floor. Say a short utterance (one to three sentences) to the "
             "group to advance your side.";
    case ActionKind::Vote:
      if (req.synthetic)
        return "Straw poll: if the exile vote were held right now, whom would you pick? "
               "Your answer is private and will not be shown to anyone. Pick exactly one "
               "name from the choices.";
      return "Vote to exile one player. Pick exactly one name from the choices.";
    case ActionKind::NightWerewolf:
      return "Choose tonight's victim. Pick exactly one name from the choices.";
    case ActionKind::NightDoctor:
      return "Choose one player to protect tonight; you may protect yourself. Pick "
             "exactly one name from the choices.";
    case ActionKind::NightSeer:
      return "Choose one player to investigate tonight; you will learn whether they are "
             "a werewolf. Pick exactly one name from the choices.";
    case ActionKind::Summarize:
      return "The round is over. Write one or two sentences of private notes worth "
             "remembering in later rounds, or an empty string if nothing stands out.";
  }
  return "";
}

inline std::string output_schema_text(ActionKind kind) {
  switch (kind) {
    case ActionKind::Bid:
      return "{\"reasoning\": \"<your private reasoning>\", \"bid\": <integer 0-4>}";
    case ActionKind::Speak:
      return "{\"reasoning\": \"<your private reasoning>\", \"say\": \"<what you say out "
             "loud>\"}";
    case ActionKind::Vote:
      return "{\"reasoning\": \"<your private reasoning>\", \"vote\": \"<one name from the "
             "choices>\"}";
    case ActionKind::NightWerewolf:
      return "{\"reasoning\": \"<your private reasoning>\", \"eliminate\": \"<one name from "
             "the choices>\"}";
    case ActionKind::NightDoctor:
      return "{\"reasoning\": \"<your private reasoning>\", \"protect\": \"<one name from "
             "the choices>\"}";
    case ActionKind::NightSeer:
      return "{\"reasoning\": \"<your private reasoning>\", \"investigate\": \"<one name "
             "from the choices>\"}";
    case ActionKind::Summarize:
      return "{\"reasoning\": \"<your private reasoning>\", \"summary\": \"<notes, or an "
             "empty string>\"}";
  }
  return "{}";
}

}  // namespace detail

// Renders the prompt for one decision. Candidate names are re-shuffled with
// the caller's generator on every render so the model never sees a stable
// option order (position-bias guard).
inline std::string render_prompt(const PromptTemplate& tmpl, const AgentView& view, Rng& rng) {
  std::vector<std::string> candidates = view.request.candidates;
  rng.shuffle(candidates);
  std::string cand_text;
  for (size_t i = 0; i < candidates.size(); ++i) {
    if (i) cand_text += ", ";
    cand_text += candidates[i];
  }
  if (cand_text.empty()) cand_text = "(not applicable)";

  std::map<std::string, std::string> slots;
  slots["game_rules"] = view.rules;
  slots["role_brief"] = detail::role_brief(view);
  slots["view_summary"] = detail::view_summary(view);
  slots["memory"] = view.memory.empty() ? "(none yet)\n" : view.memory_text();
  slots["transcript"] =
      view.transcript.empty() ? "(no one has spoken yet this round)\n" : view.transcript_text();
  slots["candidates"] = cand_text;
  slots["action_instructions"] = detail::action_instructions(view.request);
  slots["output_schema"] = detail::output_schema_text(view.request.kind);
  return tmpl.render(slots);
}

// A model action that could not be obtained legally and was replaced by the
// deterministic fallback. Kept on the policy (the game log records only real
// gameplay events).
struct FallbackRecord {
  int round = 0;
  int seat = -1;
  ActionKind kind = ActionKind::Bid;
  std::string reason;
};

// The private chain-of-thought the model attached to a successful action.
struct ReasoningRecord {
  int round = 0;
  int seat = -1;
  ActionKind kind = ActionKind::Bid;
  std::string reasoning;
};

// Turns a remote chat model into a Policy. Pipeline per decision:
// render -> complete -> parse, re-asking (with the parse error quoted) up to
// `reasks` times, then falling back to a guaranteed-legal action: bid 0,
// seeded-uniform legal target, a fixed neutral sentence, or an empty
// summary. No exception escapes; misbehaving endpoints degrade into
// fallback records, never illegal play.
class LlmPolicy : public Policy {
 public:
  LlmPolicy(std::shared_ptr<Completer> completer, ProviderProfile profile,
            TemplateSet templates = default_templates(), int reasks = 2)
      : completer_(std::move(completer)),
        profile_(std::move(profile)),
        templates_(std::move(templates)),
        reasks_(reasks < 0 ? 0 : reasks) {
    if (!completer_) throw ConfigError("LlmPolicy needs a completer");
  }

  int bid(const AgentView& view) override { return act(view).bid; }
  std::string speak(const AgentView& view) override { return act(view).text; }
  std::string vote(const AgentView& view) override { return act(view).target; }
  std::string night_action(const AgentView& view) override { return act(view).target; }
  std::string summarize(const AgentView& view) override { return act(view).text; }

  const std::vector<FallbackRecord>& fallbacks() const { return fallbacks_; }
  const std::vector<ReasoningRecord>& reasoning() const { return reasoning_; }
  const ProviderProfile& profile() const { return profile_; }

 private:
  const PromptTemplate& template_for(ActionKind kind) const {
    switch (kind) {
      case ActionKind::Bid: return templates_.bid;
      case ActionKind::Speak: return templates_.speak;
      case ActionKind::Vote: return templates_.vote;
      case ActionKind::NightWerewolf:
      case ActionKind::NightDoctor:
      case ActionKind::NightSeer: return templates_.night;
      case ActionKind::Summarize: return templates_.summarize;
    }
    return templates_.bid;
  }

  ParsedAction act(const AgentView& view) {
    const ActionSchema schema{view.request.kind, view.request.candidates};
    Rng render_rng(derive_seed(view.request.seed, {0x9e11u}));
    std::string feedback;

    for (int attempt = 0; attempt <= reasks_; ++attempt) {
      std::string prompt = render_prompt(template_for(view.request.kind), view, render_rng);
      if (!feedback.empty())
        prompt += "\nYour previous reply was invalid: " + feedback +
                  "\nReply again with exactly one JSON object.";

      std::string reply;
      try {
        ChatRequest req;
        req.endpoint = profile_.endpoint;
        req.model = profile_.model;
        req.messages = {{"system",
                         "You are an expert social-deduction player. Always reply with a "
                         "single JSON object."},
                        {"user", prompt}};
        req.temperature = profile_.temperature;
        req.max_tokens = profile_.max_tokens;
        reply = completer_->complete(req, auth_headers(profile_));
      } catch (const std::exception& ex) {
        // Transport budget already spent inside the completer; re-asking
        // cannot help a dead endpoint.
        return fallback(view, ex.what());
      }

      try {
        ParsedAction action = parse_action(reply, schema);
        if (!action.reasoning.empty())
          reasoning_.push_back({view.round, view.seat, view.request.kind, action.reasoning});
        return action;
      } catch (const ParseError& ex) {
        feedback = ex.what();
      }
    }
    return fallback(view, "reply unusable after re-asks: " + feedback);
  }

  ParsedAction fallback(const AgentView& view, const std::string& reason) {
    fallbacks_.push_back({view.round, view.seat, view.request.kind, reason});
    ParsedAction action;
    action.kind = view.request.kind;
    switch (view.request.kind) {
      case ActionKind::Bid:
        action.bid = 0;  // observe-and-listen: the least disruptive legal bid
        break;
      case ActionKind::Speak:
        action.text = "I have nothing to add right now.";
        break;
      case ActionKind::Summarize:
        action.text = "";
        break;
      case ActionKind::Vote:
      case ActionKind::NightWerewolf:
      case ActionKind::NightDoctor:
      case ActionKind::NightSeer: {
        Rng rng(derive_seed(view.request.seed, {0xfa11u}));
        action.target = view.request.candidates[rng.below(view.request.candidates.size())];
        break;
      }
    }
    return action;
  }

  std::shared_ptr<Completer> completer_;
  ProviderProfile profile_;
  TemplateSet templates_;
  int reasks_;
  std::vector<FallbackRecord> fallbacks_;
  std::vector<ReasoningRecord> reasoning_;
};

}  // namespace werewolf
