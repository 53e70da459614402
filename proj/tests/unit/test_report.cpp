#include <doctest.h>

#include "lvc/report.hpp"
#include "test_util.hpp"

using namespace lvc;

TEST_CASE("serialization is compact with shortest numbers") {
  CHECK(serialize_report({{"win_rate", 0.97}}) == R"({"win_rate":0.97})");
  CHECK(serialize_report({{"b", 1}, {"a", 0.1}, {"c", "x"}}) == R"({"a":0.1,"b":1,"c":"x"})");
}

TEST_CASE("nested reports round trip through a JSON parser") {
  const Report r = {{"trials", 1000},
                    {"config", {{"dim", 64}, {"noise_sigma", 0.25}}},
                    {"times", {0.001, 1e-9, 123.5}}};
  const auto text = serialize_report(r);
  CHECK(Report::parse(text) == r);
  CHECK(serialize_report(Report::parse(text)) == text);
}

TEST_CASE("write_report is deterministic") {
  lvc::testing::TempDir dir("report");
  const Report r = {{"z", 1.0 / 3.0}, {"a", {1, 2, 3}}};
  write_report(dir / "a.json", r);
  write_report(dir / "b.json", r);
  CHECK(lvc::testing::slurp(dir / "a.json") == lvc::testing::slurp(dir / "b.json"));
  CHECK(lvc::testing::slurp(dir / "a.json") == serialize_report(r));
}
