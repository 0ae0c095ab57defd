#include <doctest.h>

#include <functional>
#include <random>

#include "lst/hist.hpp"

using namespace lst;

namespace {
using H = HistTerm;

ErrorKind kind_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("no error");
  return ErrorKind::IoError;
}
}  // namespace

TEST_CASE("historical typing") {
  HistContext om{{"acc", HistType::int_()}};
  CHECK(hist_typecheck(om, H::arith(HistOp::Add, H::var("acc"), H::int_(1))) == HistType::int_());
  CHECK(hist_typecheck({}, H::case_(H::inl(H::unit()), "x", H::int_(1), "y", H::int_(2))) == HistType::int_());
  CHECK(kind_of([] { hist_typecheck({}, H::fst(H::unit())); }) == ErrorKind::HistTypeError);
  CHECK(kind_of([] { hist_typecheck({}, H::var("q")); }) == ErrorKind::HistTypeError);
  hist_check({}, H::nil(), HistType::list(HistType::int_()));
  CHECK(hist_typecheck({}, parse_hist("if 1 < 2 then 3 else 4")) == HistType::int_());
}

TEST_CASE("historical evaluation") {
  CHECK(hist_eval(H::arith(HistOp::Div, H::int_(161), H::int_(3))) == HistValue::int_(53));
  CHECK(hist_eval(H::len(H::cons(H::int_(1), H::nil()))) == HistValue::int_(1));
  CHECK(kind_of([] { hist_eval(H::arith(HistOp::Div, H::int_(1), H::int_(0))); }) == ErrorKind::DivByZero);
  CHECK(hist_eval(parse_hist("init([1,2,3])")) == hist_eval(parse_hist("[1,2]")));
  CHECK(hist_eval(parse_hist("|[4,5,6]|")) == HistValue::int_(3));
  CHECK(hist_eval(parse_hist("(1 + 2) * 3 - 4 / 2")) == HistValue::int_(7));
  CHECK(hist_eval(parse_hist("!(3 > 2)")) == HistValue::bool_(false));
  CHECK(hist_eval(parse_hist("fold([1,2,3], 10, x a => a + x)")) == HistValue::int_(16));
}

TEST_CASE("substitution") {
  HistSubst th{{"x", HistValue::int_(7)}};
  CHECK(hist_subst(H::var("x"), th) == H::int_(7));
  CHECK(hist_eval(hist_subst(H::arith(HistOp::Add, H::var("x"), H::var("x")), {{"x", HistValue::int_(2)}})) ==
        HistValue::int_(4));
  H closed = parse_hist("(1, [true])");
  CHECK(hist_subst(closed, th) == closed);
  // Binders shadow.
  H m = H::case_(H::var("s"), "x", H::var("x"), "y", H::var("x"));
  H got = hist_subst(m, {{"x", HistValue::int_(1)}, {"s", HistValue::inl(HistValue::int_(5))}});
  CHECK(hist_eval(got) == HistValue::int_(5));
}

TEST_CASE("evaluation preserves types on generated terms") {
  std::mt19937_64 rng(11);
  auto pick = [&](int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng); };
  std::function<H(int)> gen_int, gen_bool;
  gen_int = [&](int d) -> H {
    if (d == 0) return H::int_(pick(5));
    switch (pick(5)) {
      case 0: return H::arith(pick(2) ? HistOp::Add : HistOp::Mul, gen_int(d - 1), gen_int(d - 1));
      case 1: return H::if_(gen_bool(d - 1), gen_int(d - 1), gen_int(d - 1));
      case 2: return H::len(H::cons(gen_int(d - 1), H::cons(gen_int(d - 1), H::nil())));
      case 3: return H::fst(H::pair(gen_int(d - 1), gen_bool(d - 1)));
      default: return H::case_(pick(2) ? H::inl(gen_int(d - 1)) : H::inr(gen_bool(d - 1)), "a", H::var("a"), "b",
                               H::int_(0));
    }
  };
  gen_bool = [&](int d) -> H {
    if (d == 0) return H::bool_(pick(2));
    return H::cmp(pick(2) ? HistOp::Lt : HistOp::Eq, gen_int(d - 1), gen_int(d - 1));
  };
  for (int i = 0; i < 200; ++i) {
    H m = pick(2) ? gen_int(3) : gen_bool(3);
    HistType a = hist_typecheck({}, m);
    HistValue v = hist_eval(m);
    CHECK(value_has_type(v, a));
    CHECK(hist_eval(m) == v);
  }
}
