#include <gtest/gtest.h>

#include "instrind/prompting.hpp"
#include "instrind/taskgen.hpp"
#include "test_support.hpp"

using namespace instrind;
using namespace instrind::prompting;

namespace {

std::vector<Demonstration> five(const std::string& prefix = "w") {
  std::vector<Demonstration> v;
  for (int i = 0; i < 5; ++i) v.push_back(taskgen::demo(prefix + std::to_string(i), prefix + std::to_string(i) + "s"));
  return v;
}

}  // namespace

TEST(Demonstration, RendersInputOutputBlock) {
  EXPECT_EQ(render_demonstration(taskgen::demo("cat", "cats")), "Input: cat\nOutput: cats");
  Demonstration d = taskgen::demo("game", "juego");
  d.add_gold("partido");
  EXPECT_EQ(render_demonstration(d), "Input: game\nOutput: juego");
}

TEST(Induction, DefaultTemplateLayout) {
  const auto p = render_induction_prompt(five());
  EXPECT_EQ(p.demo_count, 5u);
  EXPECT_EQ(p.template_name, "friend_puzzle");
  const auto t = default_induction_template();
  EXPECT_EQ(p.text.rfind(t.preamble, 0), 0u);
  EXPECT_TRUE(p.text.size() >= t.suffix.size() &&
              p.text.compare(p.text.size() - t.suffix.size(), t.suffix.size(), t.suffix) == 0);
  EXPECT_NE(p.text.find("Input: w0\nOutput: w0s\n\nInput: w1\nOutput: w1s"), std::string::npos);
  EXPECT_EQ(detail::count_of(p.text, "Input: "), 5u);
}

TEST(Induction, RequiresExactlyFiveDemos) {
  auto demos = five();
  demos.pop_back();
  try {
    render_induction_prompt(demos);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.category(), ErrorCategory::usage);
  }
  demos = five();
  demos.push_back(taskgen::demo("x", "y"));
  EXPECT_THROW(render_induction_prompt(demos), Error);
  EXPECT_THROW(render_in_context_prompt(std::vector<Demonstration>(4, taskgen::demo("a", "b")), "q"), Error);
}

TEST(Induction, CustomTemplateIsHonoured) {
  PromptTemplate t{"terse", "Pairs:\n", "{input} -> {output}", "\n", "\nRule:"};
  EXPECT_EQ(render_induction_prompt(five(), t).text,
            "Pairs:\nw0 -> w0s\nw1 -> w1s\nw2 -> w2s\nw3 -> w3s\nw4 -> w4s\nRule:");
}

TEST(Templates, BadBlockFormatRejected) {
  PromptTemplate t{"bad", "", "{output} {input}", "\n", ""};
  EXPECT_THROW(validate(t), Error);
  t.demo_block_format = "{input} {input} {output}";
  EXPECT_THROW(validate(t), Error);
  t.demo_block_format = "{input}";
  EXPECT_THROW(validate(t), Error);
}

TEST(Templates, ShippedFileEqualsBuiltInDefault) {
  const auto t = load_template(testsupport::source_dir() / "data" / "templates" / "induction_default.json");
  EXPECT_EQ(template_to_json(t), template_to_json(default_induction_template()));
  EXPECT_EQ(template_to_json(template_from_json(template_to_json(t))), template_to_json(t));
}

TEST(InContext, RendersAndParsesBack) {
  const auto demos = five();
  const auto p = render_in_context_prompt(demos, "w9");
  EXPECT_EQ(p.text.substr(p.text.size() - 19), "\n\nInput: w9\nOutput:");
  const auto parsed = parse_in_context_prompt(p.text);
  ASSERT_TRUE(parsed.has_value());
  ASSERT_EQ(parsed->demos.size(), 5u);
  for (std::size_t i = 0; i < 5; ++i) {
    EXPECT_EQ(parsed->demos[i].first, demos[i].input);
    EXPECT_EQ(parsed->demos[i].second, demos[i].first_gold());
  }
  EXPECT_EQ(parsed->test_input, "w9");
  EXPECT_EQ(final_input(p.text), "w9");
}

TEST(InContext, RoundTripsGeneratedDatasets) {
  const auto m = testsupport::manifest();
  for (auto t : {TaskId::sum, TaskId::cause_selection, TaskId::membership, TaskId::word_in_context}) {
    const auto ds = taskgen::generate_task(t, m, 4);
    for (const auto& ex : taskgen::sample_induction_examples(ds, 10, 4)) {
      const auto& test = ds.execute.front();
      const auto parsed = parse_in_context_prompt(render_in_context_prompt(ex.demos, test.input).text);
      ASSERT_TRUE(parsed.has_value()) << task_name(t);
      EXPECT_EQ(parsed->test_input, test.input);
      for (std::size_t i = 0; i < 5; ++i) EXPECT_EQ(parsed->demos[i].first, ex.demos[i].input);
    }
  }
}

TEST(InContext, ParserRejectsOtherShapes) {
  EXPECT_FALSE(parse_in_context_prompt("hello").has_value());
  EXPECT_FALSE(parse_in_context_prompt("Input: a\nOutput: b").has_value());
}

TEST(Execution, InstructionIsTrimmedAndPrepended) {
  const auto p = render_execution_prompt("  Add the two numbers.\n", "22 10");
  EXPECT_EQ(p.text, "Add the two numbers.\n\nInput: 22 10\nOutput:");
  EXPECT_EQ(final_input(p.text), "22 10");
}

TEST(Execution, EmptyInstructionRejected) {
  try {
    render_execution_prompt(" \n\t", "x");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.category(), ErrorCategory::usage);
  }
}

TEST(FinalInput, IgnoresInputMarkersInsideLines) {
  EXPECT_EQ(final_input("Say Input: x\n\nInput: real\nOutput:  "), "real");
  EXPECT_FALSE(final_input("Input: a\nOutput: b").has_value());
}
