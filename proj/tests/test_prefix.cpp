#include <doctest.h>

#include "lst/prefix.hpp"
#include "oracles.hpp"

using namespace lst;

namespace {
StreamType T(const char* s) { return parse_type(s); }
const StreamType one = StreamType::one();
}  // namespace

TEST_CASE("prefix typing examples") {
  CHECK(prefix_has_type(Prefix::cat_a(Prefix::one_emp()), T("1 . 1")));
  CHECK_FALSE(prefix_has_type(Prefix::cat_b(Prefix::one_emp(), Prefix::one_emp()), T("1 . 1")));
  CHECK(prefix_has_type(Prefix::star_done(), T("1*")));
  CHECK_FALSE(prefix_has_type(Prefix::int_full(1), T("Bool")));
}

TEST_CASE("maximal and empty") {
  CHECK(is_maximal(Prefix::one_full()));
  CHECK(is_maximal(Prefix::stp_b(Prefix::one_full(), Prefix::star_done())));
  CHECK_FALSE(is_maximal(Prefix::sum_emp()));
  CHECK(is_empty(Prefix::cat_a(Prefix::one_emp())));
  CHECK_FALSE(is_empty(Prefix::one_full()));
  CHECK(is_empty(Prefix::par(Prefix::eps_emp(), Prefix::star_emp())));
}

TEST_CASE("emp") {
  CHECK(emp(T("1*")) == Prefix::star_emp());
  CHECK(emp(T("1 . Eps")) == Prefix::cat_a(Prefix::one_emp()));
  Environment e = emp_ctx(parse_ctx("x : 1, y : Eps"));
  CHECK(e.size() == 2);
  CHECK(e["x"] == Prefix::one_emp());
  CHECK(e["y"] == Prefix::eps_emp());
}

TEST_CASE("derivatives") {
  CHECK(deriv_type(Prefix::one_full(), one) == StreamType::eps());
  CHECK(deriv_type(Prefix::cat_b(Prefix::one_full(), Prefix::star_emp()), T("1 . 1*")) == T("1*"));
  CHECK(deriv_type(Prefix::stp_a(Prefix::one_emp()), T("1*")) == T("1 . 1*"));
  CHECK_THROWS_AS(deriv_type(Prefix::one_full(), T("Int")), Error);

  BunchedContext g = parse_ctx("x : 1 ; y : 1");
  CHECK(deriv_ctx(emp_ctx(g), g) == g);
  CHECK(deriv_ctx({{"x", Prefix::one_full()}}, parse_ctx("x : 1")) == parse_ctx("x : Eps"));
  CHECK(deriv_ctx({{"x", Prefix::one_full()}, {"y", Prefix::one_emp()}}, g) == parse_ctx("x : Eps ; y : 1"));
}

TEST_CASE("concatenation examples") {
  Prefix p = Prefix::cat_a(Prefix::one_full());
  Prefix q = Prefix::cat_b(Prefix::eps_emp(), Prefix::one_emp());
  CHECK(concat_prefix(p, q) == Prefix::cat_b(Prefix::one_full(), Prefix::one_emp()));
  CHECK(concat_prefix(Prefix::one_full(), Prefix::eps_emp()) == Prefix::one_full());
  CHECK_THROWS_AS(concat_prefix(Prefix::one_full(), Prefix::one_full()), Error);

  Environment a{{"x", p}}, b{{"x", q}};
  CHECK(concat_env(a, b).at("x") == Prefix::cat_b(Prefix::one_full(), Prefix::one_emp()));
}

TEST_CASE("environment typing") {
  BunchedContext g = parse_ctx("x : 1 ; y : 1");
  CHECK(env_has_type({{"x", Prefix::one_full()}, {"y", Prefix::one_emp()}}, g));
  CHECK_FALSE(env_has_type({{"x", Prefix::one_emp()}, {"y", Prefix::one_full()}}, g));
  CHECK(env_has_type({{"x", Prefix::one_full()}}, BunchedContext::empty()));
  CHECK(maximal_on({{"x", Prefix::one_full()}}, {"x"}));
  CHECK(empty_on({{"x", Prefix::sum_emp()}}, {"x"}));
}

TEST_CASE("flatten and unflatten") {
  Prefix p = Prefix::stp_b(Prefix::one_full(), Prefix::star_done());
  CHECK(flatten_prefix(p, T("1*")) == HistValue::list({HistValue::unit()}));
  CHECK(value_to_prefix(HistValue::pair(HistValue::unit(), HistValue::unit()), T("1 || 1")) ==
        Prefix::par(Prefix::one_full(), Prefix::one_full()));
  for (auto& s : oracle::types_to_depth(1))
    for (auto& q : oracle::all_prefixes(s, 2))
      if (oracle::maximal(q)) CHECK(value_to_prefix(flatten_prefix(q, s), s) == q);
}

TEST_CASE("library agrees with the rule oracles at depth 1") {
  for (auto& s : oracle::types_to_depth(1)) {
    for (auto& p : oracle::all_prefixes(s, 2)) {
      CHECK(prefix_has_type(p, s));
      CHECK(is_maximal(p) == oracle::maximal(p));
      CHECK(is_empty(p) == oracle::empty(p));
      CHECK(deriv_type(p, s) == *oracle::deriv(p, s));
    }
  }
}
