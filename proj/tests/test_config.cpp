#include <algorithm>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "tailsitter/config.hpp"
#include "tailsitter/error.hpp"

using namespace tailsitter;

namespace {

std::string defaults_text() {
  std::stringstream out;
  write_config(out, Config{});
  return out.str();
}

std::vector<std::string> problems_of(const KeyValues& values) {
  try {
    apply_key_values(values);
  } catch (const ConfigError& e) {
    return e.problems();
  }
  return {};
}

bool mentions(const std::vector<std::string>& problems, const std::string& needle) {
  return std::any_of(problems.begin(), problems.end(),
                     [&](const std::string& p) { return p.find(needle) != std::string::npos; });
}

}  // namespace

TEST(Config, ParseSyntax) {
  std::stringstream in("# comment\n\nm = 0.7   # trailing\n  k_t=1e-5\n");
  const KeyValues v = parse_key_values(in);
  EXPECT_EQ(v.at("m"), "0.7");
  EXPECT_EQ(v.at("k_t"), "1e-5");
  std::stringstream bad("m 0.7\n");
  EXPECT_THROW(parse_key_values(bad), ConfigError);
}

TEST(Config, WriteParsesBackToDefaults) {
  std::stringstream in(defaults_text());
  const Config c = apply_key_values(parse_key_values(in));
  std::stringstream again;
  write_config(again, c);
  EXPECT_EQ(again.str(), defaults_text());
}

TEST(Config, ShippedFileMatchesBuiltInDefaults) {
  const Config c = load_config({DEFAULT_CONFIG});
  std::stringstream out;
  write_config(out, c);
  EXPECT_EQ(out.str(), defaults_text());
}

TEST(Config, MissingTableKeyIsReported) {
  std::stringstream in(defaults_text());
  KeyValues v = parse_key_values(in);
  v.erase("k_t");
  v.erase("J_yy");
  const auto problems = problems_of(v);
  EXPECT_TRUE(mentions(problems, "missing required key k_t"));
  EXPECT_TRUE(mentions(problems, "missing required key J_yy"));
}

TEST(Config, AllProblemsTogether) {
  std::stringstream in(defaults_text());
  KeyValues v = parse_key_values(in);
  v["bogus"] = "1";
  v["m"] = "heavy";
  v["tau_att"] = "-0.2";
  v["attitude_rate_hz"] = "300";
  const auto problems = problems_of(v);
  EXPECT_TRUE(mentions(problems, "unknown key bogus"));
  EXPECT_TRUE(mentions(problems, "m:"));
  EXPECT_EQ(problems.size(), 2U);  // invariants are checked once values parse

  v.erase("bogus");
  v["m"] = "0.65";
  const auto invariants = problems_of(v);
  EXPECT_TRUE(mentions(invariants, "tau_att"));
  EXPECT_TRUE(mentions(invariants, "attitude_rate_hz"));
}

TEST(Config, OverlayNeedsNoTableKeys) {
  KeyValues v{{"scenario", "circle"}, {"waypoints", "0, 0, 1; 1, 2, 3"}, {"seed", "9"}};
  const Config c = apply_key_values(v, Config{}, false);
  EXPECT_EQ(c.scenario.kind, ScenarioKind::kCircle);
  ASSERT_EQ(c.scenario.waypoints.size(), 2U);
  EXPECT_EQ(c.scenario.waypoints[1], Vector3d(1, 2, 3));
  EXPECT_EQ(c.disturbance.seed, 9U);
}

TEST(Config, MissingFileIsIoError) {
  try {
    load_config({"/nonexistent/file.cfg"});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.category(), ErrorCategory::kIo);
  }
}
