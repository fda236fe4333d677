#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "werewolf/error.hpp"
#include "werewolf/view.hpp"

namespace werewolf {

// Expected reply shape for one action kind. Closed in the sense that unknown
// fields are ignored but the required field must be present and valid;
// target-taking kinds also validate against the legal candidate list.
struct ActionSchema {
  ActionKind kind = ActionKind::Bid;
  std::vector<std::string> candidates;  // legal names; used by target kinds

  // The reply field carrying the decision, per kind.
  const char* field() const {
    switch (kind) {
      case ActionKind::Bid: return "bid";
      case ActionKind::Speak: return "say";
      case ActionKind::Vote: return "vote";
      case ActionKind::NightWerewolf: return "eliminate";
      case ActionKind::NightDoctor: return "protect";
      case ActionKind::NightSeer: return "investigate";
      case ActionKind::Summarize: return "summary";
    }
    return "?";
  }
};

// The typed result of a successful parse. Exactly one of bid/text/target is
// meaningful depending on the kind; reasoning is whatever private rationale
// the model included.
struct ParsedAction {
  ActionKind kind = ActionKind::Bid;
  int bid = 0;
  std::string text;    // say / summary
  std::string target;  // vote / night target, validated against candidates
  std::string reasoning;
};

namespace detail {

// Locates the first balanced JSON object in free text (models habitually
// wrap JSON in prose or ``` fences). Tracks string/escape state so braces
// inside strings don't confuse the balance count.
inline std::optional<std::string> first_json_object(const std::string& text) {
  for (size_t start = 0; start < text.size(); ++start) {
    if (text[start] != '{') continue;
    int depth = 0;
    bool in_string = false, escaped = false;
    for (size_t i = start; i < text.size(); ++i) {
      const char c = text[i];
      if (in_string) {
        if (escaped) escaped = false;
        else if (c == '\\') escaped = true;
        else if (c == '"') in_string = false;
        continue;
      }
      if (c == '"') in_string = true;
      else if (c == '{') ++depth;
      else if (c == '}') {
        if (--depth == 0) {
          const auto candidate = text.substr(start, i - start + 1);
          const auto parsed = nlohmann::json::parse(candidate, nullptr, false);
          if (!parsed.is_discarded() && parsed.is_object()) return candidate;
          break;  // balanced but invalid; try the next '{'
        }
      }
    }
  }
  return std::nullopt;
}

inline std::string trim(const std::string& s) {
  size_t b = 0, e = s.size();
  while (b < e && (s[b] == ' ' || s[b] == '\t' || s[b] == '\n' || s[b] == '\r')) ++b;
  while (e > b && (s[e - 1] == ' ' || s[e - 1] == '\t' || s[e - 1] == '\n' || s[e - 1] == '\r'))
    --e;
  return s.substr(b, e - b);
}

}  // namespace detail

// Extracts and validates a model reply. Throws ParseError with a reason
// suitable for feeding back to the model on a re-ask.
inline ParsedAction parse_action(const std::string& text, const ActionSchema& schema) {
  const auto object_text = detail::first_json_object(text);
  if (!object_text) throw ParseError("no JSON object found in the reply");
  const auto j = nlohmann::json::parse(*object_text);

  ParsedAction action;
  action.kind = schema.kind;
  if (j.contains("reasoning") && j["reasoning"].is_string())
    action.reasoning = j["reasoning"].get<std::string>();

  const char* field = schema.field();
  if (!j.contains(field))
    throw ParseError(std::string("missing required field \"") + field + "\"");
  const auto& value = j[field];

  switch (schema.kind) {
    case ActionKind::Bid: {
      if (!value.is_number_integer())
        throw ParseError("\"bid\" must be an integer between 0 and 4");
      const int b = value.get<int>();
      if (b < 0 || b > 4) throw ParseError("\"bid\" out of range 0..4");
      action.bid = b;
      break;
    }
    case ActionKind::Speak:
    case ActionKind::Summarize: {
      if (!value.is_string()) throw ParseError(std::string("\"") + field + "\" must be a string");
      action.text = value.get<std::string>();
      break;
    }
    case ActionKind::Vote:
    case ActionKind::NightWerewolf:
    case ActionKind::NightDoctor:
    case ActionKind::NightSeer: {
      if (!value.is_string()) throw ParseError(std::string("\"") + field + "\" must be a name");
      const std::string name = detail::trim(value.get<std::string>());
      if (std::find(schema.candidates.begin(), schema.candidates.end(), name) ==
          schema.candidates.end())
        throw ParseError("\"" + name + "\" is not one of the legal choices");
      action.target = name;
      break;
    }
  }
  return action;
}

}  // namespace werewolf
