#ifndef INSTRIND_PROMPTING_HPP
#define INSTRIND_PROMPTING_HPP

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "instrind/common.hpp"
#include "instrind/types.hpp"

namespace instrind::prompting {

using nlohmann::json;

inline constexpr std::string_view kInputMarker = "Input: ";
inline constexpr std::string_view kOutputMarker = "Output:";
inline constexpr std::string_view kDemoSeparator = "\n\n";

struct PromptTemplate {
  std::string name;
  std::string preamble;
  std::string demo_block_format;
  std::string separator;
  std::string suffix;
};

namespace detail {

inline std::size_t count_of(std::string_view hay, std::string_view needle) {
  std::size_t n = 0;
  for (std::size_t pos = hay.find(needle); pos != std::string_view::npos; pos = hay.find(needle, pos + needle.size())) ++n;
  return n;
}

inline std::string replace_once(std::string s, std::string_view key, std::string_view value) {
  const auto pos = s.find(key);
  if (pos != std::string::npos) s.replace(pos, key.size(), value);
  return s;
}

}  // namespace detail

inline void validate(const PromptTemplate& t) {
  if (detail::count_of(t.demo_block_format, "{input}") != 1 || detail::count_of(t.demo_block_format, "{output}") != 1) {
    fail(ErrorCategory::data, "template '" + t.name + "': demo_block_format must contain {input} and {output} exactly once");
  }
  if (t.demo_block_format.find("{input}") > t.demo_block_format.find("{output}")) {
    fail(ErrorCategory::data, "template '" + t.name + "': {input} must precede {output}");
  }
}

/// The instruction-induction meta-prompt: the "friend" puzzle framing,
/// five Input/Output blocks, then a cue for the instruction.
inline PromptTemplate default_induction_template() {
  return PromptTemplate{
      "friend_puzzle",
      "I gave a friend an instruction and five inputs. The friend read the instruction and wrote an output "
      "for every one of the inputs. Here are the input-output pairs:\n\n",
      "Input: {input}\nOutput: {output}",
      "\n\n",
      "\n\nThe instruction was",
  };
}

inline PromptTemplate template_from_json(const json& j) {
  PromptTemplate t;
  try {
    t.name = j.at("name").get<std::string>();
    t.preamble = j.at("preamble").get<std::string>();
    t.demo_block_format = j.at("demo_block_format").get<std::string>();
    t.separator = j.at("separator").get<std::string>();
    t.suffix = j.at("suffix").get<std::string>();
  } catch (const json::exception& e) {
    fail(ErrorCategory::data, std::string("template: ") + e.what());
  }
  validate(t);
  return t;
}

inline json template_to_json(const PromptTemplate& t) {
  return json{{"name", t.name},
              {"preamble", t.preamble},
              {"demo_block_format", t.demo_block_format},
              {"separator", t.separator},
              {"suffix", t.suffix}};
}

inline PromptTemplate load_template(const std::filesystem::path& path) {
  try {
    return template_from_json(json::parse(read_file(path)));
  } catch (const json::parse_error& e) {
    fail(ErrorCategory::data, "template " + path.string() + ": " + e.what());
  }
}

struct RenderedPrompt {
  std::string text;
  std::string template_name;
  std::size_t demo_count = 0;
};

/// "Input: <x>\nOutput: <y>" with the first gold output.
inline std::string render_demonstration(const Demonstration& d) {
  return std::string(kInputMarker) + d.input + "\n" + std::string(kOutputMarker) + " " + d.first_gold();
}

inline std::string render_block(const PromptTemplate& t, const Demonstration& d) {
  return detail::replace_once(detail::replace_once(t.demo_block_format, "{input}", d.input), "{output}",
                              d.first_gold());
}

inline RenderedPrompt render_induction_prompt(const std::vector<Demonstration>& demos,
                                              const PromptTemplate& t = default_induction_template()) {
  if (demos.size() != 5) {
    fail(ErrorCategory::usage, "induction prompt needs exactly 5 demonstrations, got " + std::to_string(demos.size()));
  }
  std::string text = t.preamble;
  for (std::size_t i = 0; i < demos.size(); ++i) {
    if (i) text += t.separator;
    text += render_block(t, demos[i]);
  }
  text += t.suffix;
  return {std::move(text), t.name, demos.size()};
}

/// Five demo blocks followed by "Input: <x>\nOutput:"; the continuation is
/// the model's prediction.
inline RenderedPrompt render_in_context_prompt(const std::vector<Demonstration>& demos, std::string_view test_input) {
  if (demos.size() != 5) {
    fail(ErrorCategory::usage, "in-context prompt needs exactly 5 demonstrations, got " + std::to_string(demos.size()));
  }
  std::string text;
  for (const auto& d : demos) {
    text += render_demonstration(d);
    text += kDemoSeparator;
  }
  text += kInputMarker;
  text += test_input;
  text += "\n";
  text += kOutputMarker;
  return {std::move(text), "in_context", demos.size()};
}

/// "<instruction>\n\nInput: <x>\nOutput:". Surrounding whitespace of the
/// instruction is trimmed; an empty instruction is rejected.
inline RenderedPrompt render_execution_prompt(std::string_view instruction, std::string_view input) {
  const auto instr = trim_view(instruction);
  if (instr.empty()) fail(ErrorCategory::usage, "execution prompt needs a non-empty instruction");
  std::string text(instr);
  text += "\n\n";
  text += kInputMarker;
  text += input;
  text += "\n";
  text += kOutputMarker;
  return {std::move(text), "execution", 0};
}

struct ParsedInContext {
  std::vector<std::pair<std::string, std::string>> demos;  // (input, output)
  std::string test_input;
};

/// Inverse of render_in_context_prompt, splitting on the Input:/Output:
/// markers. Returns nullopt when the text is not in that shape.
inline std::optional<ParsedInContext> parse_in_context_prompt(std::string_view text) {
  ParsedInContext out;
  const std::string out_marker = "\n" + std::string(kOutputMarker);
  const std::string next_block = std::string(kDemoSeparator) + std::string(kInputMarker);
  std::size_t pos = 0;
  while (true) {
    if (text.substr(pos, kInputMarker.size()) != kInputMarker) return std::nullopt;
    pos += kInputMarker.size();
    const auto o = text.find(out_marker, pos);
    if (o == std::string_view::npos) return std::nullopt;
    std::string input(text.substr(pos, o - pos));
    pos = o + out_marker.size();
    if (pos == text.size()) {
      out.test_input = std::move(input);
      return out;
    }
    if (text[pos] != ' ') return std::nullopt;
    ++pos;
    const auto nb = text.find(next_block, pos);
    if (nb == std::string_view::npos) return std::nullopt;
    out.demos.emplace_back(std::move(input), std::string(text.substr(pos, nb - pos)));
    pos = nb + kDemoSeparator.size();
  }
}

/// Input of the final "Input: ...\nOutput:" block of an in-context or
/// execution prompt.
inline std::optional<std::string> final_input(std::string_view prompt) {
  std::string_view p = prompt;
  while (!p.empty() && is_space(p.back())) p.remove_suffix(1);
  const std::string out_marker = "\n" + std::string(kOutputMarker);
  if (p.size() < out_marker.size() || p.substr(p.size() - out_marker.size()) != out_marker) return std::nullopt;
  p.remove_suffix(out_marker.size());
  std::size_t start = std::string_view::npos;
  for (std::size_t pos = p.rfind(kInputMarker); pos != std::string_view::npos;
       pos = pos == 0 ? std::string_view::npos : p.rfind(kInputMarker, pos - 1)) {
    if (pos == 0 || p[pos - 1] == '\n') {
      start = pos;
      break;
    }
  }
  if (start == std::string_view::npos) return std::nullopt;
  return std::string(p.substr(start + kInputMarker.size()));
}

}  // namespace instrind::prompting

#endif  // INSTRIND_PROMPTING_HPP
