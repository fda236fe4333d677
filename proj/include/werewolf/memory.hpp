#pragma once

#include <set>
#include <string>
#include <vector>

#include "werewolf/error.hpp"

namespace werewolf {

// One agent's private long-term record. Observations are appended by the
// game master (structured descriptions of what that agent was allowed to
// see); reflections are the agent's own end-of-round summaries, at most one
// per round.
struct MemoryEntry {
  enum class Kind { Observation, Reflection };
  int round = 0;
  Kind kind = Kind::Observation;
  std::string text;
};

class MemoryStream {
 public:
  void observe(int round, std::string text) {
    entries_.push_back({round, MemoryEntry::Kind::Observation, std::move(text)});
  }

  void reflect(int round, std::string text) {
    if (reflected_.count(round))
      throw InternalError("duplicate reflection for round " + std::to_string(round));
    reflected_.insert(round);
    entries_.push_back({round, MemoryEntry::Kind::Reflection, std::move(text)});
  }

  const std::vector<MemoryEntry>& entries() const { return entries_; }
  bool empty() const { return entries_.empty(); }

  std::string render() const {
    std::string out;
    for (const auto& e : entries_) {
      out += "- [round ";
      out += std::to_string(e.round);
      out += e.kind == MemoryEntry::Kind::Reflection ? ", reflection] " : "] ";
      out += e.text;
      out += '\n';
    }
    return out;
  }

 private:
  std::vector<MemoryEntry> entries_;
  std::set<int> reflected_;
};

}  // namespace werewolf
