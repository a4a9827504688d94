#include "ctmc/model_io.hpp"

#include <gtest/gtest.h>

#include "ctmc/errors.hpp"

namespace ctmc {
namespace {

std::string error_of(const std::string& text) {
  try {
    parse_model(text, "m.txt");
  } catch (const InputError& e) {
    return e.what();
  }
  return "";
}

TEST(ParseModel, MultiLineGenerator) {
  const Model m = parse_model(
      "# two-state\n"
      "states = 2\n"
      "generator =\n"
      "  -0.5  0.5\n"
      "   0.5 -0.5\n"
      "rates = 0 0.1\n");
  EXPECT_EQ(m.size(), 2u);
  EXPECT_EQ(m.generator()(0, 1), 0.5);
  EXPECT_EQ(m.rates()(1), 0.1);
}

TEST(ParseModel, InlineRowsAndLabels) {
  const Model m = parse_model(
      "states = low, mid, high\n"
      "generator = -1 1 0; 0.5 -1 0.5; 0 2 -2   # birth-death\n"
      "rates = 0.01, 0.02, 0.05\n");
  EXPECT_EQ(m.size(), 3u);
  EXPECT_EQ(m.states().label(2), "high");
  EXPECT_EQ(m.generator()(2, 1), 2.0);
}

TEST(ParseModel, RoundTripsThroughFormat) {
  const Model m = parse_model(
      "states = a, b\n"
      "generator = -0.30000000000000004 0.30000000000000004; 1e-3 -1e-3\n"
      "rates = 0.123456789012345678 0\n");
  const Model back = parse_model(format_model(m));
  EXPECT_EQ(back.generator().entries(), m.generator().entries());
  EXPECT_EQ(back.rates().rates(), m.rates().rates());
  EXPECT_EQ(back.states().label(1), "b");
}

TEST(ParseModel, InvariantViolationsAreLineAnchored) {
  const auto msg = error_of(
      "states = 2\n"
      "generator =\n"
      "  -1 0.5\n"
      "   1  -1\n"
      "rates = 0 -0.1\n");
  EXPECT_NE(msg.find("m.txt:3: generator row 1 sums to"), std::string::npos) << msg;
  EXPECT_NE(msg.find("m.txt:5: rate 2"), std::string::npos) << msg;
}

TEST(ParseModel, ReducibleGeneratorAnchoredAtKey) {
  const auto msg = error_of("states = 2\n\ngenerator = 0 0; 0 0\nrates = 0 0.1\n");
  EXPECT_NE(msg.find("m.txt:3: generator is not irreducible"), std::string::npos) << msg;
}

TEST(ParseModel, SyntaxErrors) {
  EXPECT_NE(error_of("states = 2\ngenerator = -1 1; 1 x\nrates = 0 0\n")
                .find("m.txt:2: generator: 'x' is not a number"),
            std::string::npos);
  EXPECT_NE(error_of("states = 2\ngenerator = -1 1\nrates = 0 0\n").find("m.txt:2:"),
            std::string::npos);
  EXPECT_NE(error_of("states = 2\ngenerator = -1 1; 1 -1 0\nrates = 0 0\n")
                .find("m.txt:2: generator row 2 has 3 entries"),
            std::string::npos);
  EXPECT_NE(error_of("states = 2\ngenerator = -1 1; 1 -1\n").find("missing required key 'rates'"),
            std::string::npos);
  EXPECT_NE(error_of("states = 2\nstates = 3\n").find("m.txt:2: duplicate key"),
            std::string::npos);
  EXPECT_NE(error_of("colour = red\n").find("m.txt:1: unknown key"), std::string::npos);
  EXPECT_NE(error_of("  -1 1\n").find("m.txt:1: expected 'key = value'"), std::string::npos);
  EXPECT_NE(error_of("states = a, a\ngenerator = -1 1; 1 -1\nrates = 0 0\n").find("m.txt:1:"),
            std::string::npos);
}

TEST(LoadModel, MissingFile) {
  EXPECT_THROW(load_model("/nonexistent/model.txt"), InputError);
}

}  // namespace
}  // namespace ctmc
