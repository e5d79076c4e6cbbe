#pragma once

#include <map>
#include <mutex>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "dvq/parse.hpp"
#include "dvq/print.hpp"

namespace dvq {

/// Sampling controls passed through to a language model backend.
struct DecodingParams {
  double temperature = 0.0;
  int max_tokens = 512;
  int n = 1;
};

/// A prompt with {{placeholder}} slots. The two pipeline stages each
/// ship one: SQL_TO_DVQ translates a seed query, DVQ_TO_NLQ asks for
/// the two natural-language phrasings.
struct PromptTemplate {
  enum class Name { SqlToDvq, DvqToNlq };

  Name name = Name::SqlToDvq;
  std::string text;
  DecodingParams params;

  /// Substitutes every {{key}}; a placeholder with no value is an error
  /// (misspelled templates should fail loudly, not emit literal braces).
  std::string render(const std::map<std::string, std::string>& values) const {
    std::string out = text;
    for (const auto& [key, value] : values) {
      std::string slot = "{{" + key + "}}";
      size_t pos = 0;
      while ((pos = out.find(slot, pos)) != std::string::npos) {
        out.replace(pos, slot.size(), value);
        pos += value.size();
      }
    }
    size_t leftover = out.find("{{");
    if (leftover != std::string::npos) {
      size_t end = out.find("}}", leftover);
      std::string slot = out.substr(leftover, end == std::string::npos
                                                  ? std::string::npos
                                                  : end + 2 - leftover);
      throw std::runtime_error("prompt template has an unresolved placeholder: " + slot);
    }
    return out;
  }
};

inline const char* to_string(PromptTemplate::Name name) {
  return name == PromptTemplate::Name::SqlToDvq ? "SQL_TO_DVQ" : "DVQ_TO_NLQ";
}

/// A text-completion service: one rendered prompt in, one or more
/// completions out. Implementations must be safe to call from several
/// threads at once.
struct LlmBackend {
  virtual ~LlmBackend() = default;
  virtual std::vector<std::string> complete(const std::string& prompt,
                                            const DecodingParams& params) = 0;
};

/// Deterministic test backend: the first rule whose needle occurs in
/// the prompt supplies the completions. Keeps a transcript of prompts
/// for assertions.
class ScriptedBackend : public LlmBackend {
 public:
  void add_rule(std::string needle, std::vector<std::string> completions) {
    rules_.push_back({std::move(needle), std::move(completions)});
  }

  void set_default(std::vector<std::string> completions) {
    default_ = std::move(completions);
  }

  std::vector<std::string> complete(const std::string& prompt,
                                    const DecodingParams&) override {
    std::lock_guard<std::mutex> lock(mutex_);
    prompts_.push_back(prompt);
    for (const auto& rule : rules_) {
      if (prompt.find(rule.needle) != std::string::npos) return rule.completions;
    }
    return default_;
  }

  std::vector<std::string> prompts() const {
    std::lock_guard<std::mutex> lock(mutex_);
    return prompts_;
  }

  size_t call_count() const {
    std::lock_guard<std::mutex> lock(mutex_);
    return prompts_.size();
  }

 private:
  struct Rule {
    std::string needle;
    std::vector<std::string> completions;
  };

  std::vector<Rule> rules_;
  std::vector<std::string> default_;
  mutable std::mutex mutex_;
  std::vector<std::string> prompts_;
};

namespace detail {

inline std::string strip(std::string_view s) {
  size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  size_t e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

/// The answer's identity for voting: parseable completions vote as
/// their canonical form, anything else as its trimmed text.
inline std::string vote_class(const std::string& completion) {
  ParseResult parsed = parse_dvq(completion);
  if (parsed.ok()) return print_canonical(*parsed.ast);
  return strip(completion);
}

}  // namespace detail

/// Samples n completions and returns the first completion belonging to
/// the most frequent answer class (ties fall to the class seen first).
inline std::string self_consistent(LlmBackend& backend, const std::string& prompt,
                                   DecodingParams params, int n) {
  if (n < 1) throw std::invalid_argument("self_consistent: n must be at least 1");
  params.n = n;
  std::vector<std::string> completions = backend.complete(prompt, params);
  if (completions.empty()) {
    throw std::runtime_error("self_consistent: backend returned no completions");
  }
  if (completions.size() == 1) return completions[0];
  std::vector<std::string> classes;
  std::vector<size_t> votes;
  std::vector<size_t> first_at;
  for (size_t i = 0; i < completions.size(); ++i) {
    std::string cls = detail::vote_class(completions[i]);
    size_t slot = classes.size();
    for (size_t c = 0; c < classes.size(); ++c) {
      if (classes[c] == cls) {
        slot = c;
        break;
      }
    }
    if (slot == classes.size()) {
      classes.push_back(std::move(cls));
      votes.push_back(0);
      first_at.push_back(i);
    }
    ++votes[slot];
  }
  size_t best = 0;
  for (size_t c = 1; c < classes.size(); ++c) {
    if (votes[c] > votes[best]) best = c;  // ties keep the earlier class
  }
  return completions[first_at[best]];
}

}  // namespace dvq
