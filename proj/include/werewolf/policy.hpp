#pragma once

#include <memory>
#include <string>

#include "werewolf/view.hpp"

namespace werewolf {

// Agent decision interface. Target-taking methods return a display name that
// must come from view.request.candidates; the game master validates and
// treats anything else as a protocol violation.
class Policy {
 public:
  virtual ~Policy() = default;

  virtual int bid(const AgentView& view) = 0;                   // 0..4
  virtual std::string speak(const AgentView& view) = 0;         // free text
  virtual std::string vote(const AgentView& view) = 0;          // candidate name
  virtual std::string night_action(const AgentView& view) = 0;  // candidate name
  virtual std::string summarize(const AgentView& view) = 0;     // may be empty
};

using PolicyPtr = std::shared_ptr<Policy>;

}  // namespace werewolf
