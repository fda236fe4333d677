#pragma once

#include <map>
#include <string>

#include "werewolf/error.hpp"

namespace werewolf {

// Text template with {slot_name} placeholders. Rendering is strict: every
// slot referenced by the template must be present in the slot map, so a
// typo'd placeholder fails loudly instead of leaking braces into a prompt.
// Slot names are lowercase words/underscores; any other use of braces is
// literal text. Replacement values are not re-scanned.
class PromptTemplate {
 public:
  PromptTemplate() = default;
  explicit PromptTemplate(std::string text) : text_(std::move(text)) {}

  const std::string& text() const { return text_; }

  std::string render(const std::map<std::string, std::string>& slots) const {
    std::string out;
    out.reserve(text_.size());
    size_t pos = 0;
    while (pos < text_.size()) {
      const size_t open = text_.find('{', pos);
      if (open == std::string::npos) {
        out.append(text_, pos, std::string::npos);
        break;
      }
      out.append(text_, pos, open - pos);
      size_t end = open + 1;
      while (end < text_.size() && (is_slot_char(text_[end]))) ++end;
      if (end > open + 1 && end < text_.size() && text_[end] == '}') {
        const std::string name = text_.substr(open + 1, end - open - 1);
        const auto it = slots.find(name);
        if (it == slots.end()) throw TemplateError("unknown template slot {" + name + "}");
        out += it->second;
        pos = end + 1;
      } else {
        out += '{';
        pos = open + 1;
      }
    }
    return out;
  }

 private:
  static bool is_slot_char(char c) { return (c >= 'a' && c <= 'z') || c == '_'; }

  std::string text_;
};

}  // namespace werewolf
