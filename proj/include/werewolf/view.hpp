#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "werewolf/core.hpp"
#include "werewolf/memory.hpp"

namespace werewolf {

enum class ActionKind { Bid, Speak, Vote, NightWerewolf, NightDoctor, NightSeer, Summarize };

inline const char* to_string(ActionKind k) {
  switch (k) {
    case ActionKind::Bid: return "bid";
    case ActionKind::Speak: return "speak";
    case ActionKind::Vote: return "vote";
    case ActionKind::NightWerewolf: return "night_werewolf";
    case ActionKind::NightDoctor: return "night_doctor";
    case ActionKind::NightSeer: return "night_seer";
    case ActionKind::Summarize: return "summarize";
  }
  return "?";
}

// What the game master is asking for right now. `candidates` is the complete
// legal target list (by display name) for target-taking actions, empty for
// bid/speak/summarize. `seed` is derived deterministically from the game seed
// and the decision coordinates, so a scripted policy that draws only from it
// is a pure function of its view.
struct DecisionRequest {
  ActionKind kind = ActionKind::Bid;
  std::vector<std::string> candidates;
  uint64_t seed = 0;
  // True for the non-binding straw poll taken after each utterance; the
  // answer is recorded for analytics and has no effect on the game.
  bool synthetic = false;
};

// Everything one agent may know at one decision point. Built fresh by the
// game master per request; contains no references into engine state, so
// policies can hold or mutate it freely.
struct AgentView {
  int seat = -1;
  std::string name;
  Role role = Role::Villager;
  int round = 0;
  Phase phase = Phase::Night;
  std::vector<std::string> living;            // display names, seat order
  std::vector<std::string> transcript;        // current round's debate, "Name: utterance"
  std::vector<MemoryEntry> memory;            // private observations + reflections
  std::string rules;                          // static game-rules text
  DecisionRequest request;

  std::string memory_text() const {
    std::string out;
    for (const auto& e : memory) {
      out += "- [round ";
      out += std::to_string(e.round);
      out += e.kind == MemoryEntry::Kind::Reflection ? ", reflection] " : "] ";
      out += e.text;
      out += '\n';
    }
    return out;
  }

  std::string transcript_text() const {
    std::string out;
    for (const auto& line : transcript) {
      out += line;
      out += '\n';
    }
    return out;
  }
};

}  // namespace werewolf
