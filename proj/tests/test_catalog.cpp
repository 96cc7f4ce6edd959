#include <doctest.h>

#include <algorithm>

#include "todatw/catalog.hpp"
#include "todatw/error.hpp"

using namespace todatw;

TEST_CASE("catalog lists main text then appendix") {
  const auto& ids = identity_catalog();
  REQUIRE(ids.size() == 24);
  CHECK(ids.front() == "E1");
  CHECK(ids[13] == "E14");
  CHECK(ids.back() == "A34");
  CHECK(is_known_identity("A11"));
  CHECK_FALSE(is_known_identity("A1"));
  CHECK(standard_grid().size() == 16);
}

TEST_CASE("batch output is independent of the worker count") {
  const std::vector<std::string> ids{"E1", "E4", "A3"};
  const auto configs = standard_grid(1, 2);
  const auto one = verify_batch(ids, configs, {}, 1);
  const auto many = verify_batch(ids, configs, {}, 4);
  REQUIRE(one.size() == ids.size() * configs.size());
  for (std::size_t i = 0; i < one.size(); ++i) {
    CHECK(one[i].identity == many[i].identity);
    CHECK(one[i].J == many[i].J);
    CHECK(one[i].residual == many[i].residual);
  }
  CHECK(one[0].identity == "E1");
  CHECK(one[configs.size()].identity == "E4");
}

TEST_CASE("batch rethrows evaluation errors") {
  CHECK_THROWS_AS(verify_batch({"E1"}, {{2, IntervalSet::real_line()}}, {}, 2), Error);
  CHECK_THROWS_AS(verify_identity("X1", 1, IntervalSet::parse("-1:1")), Error);
}
