#include <doctest.h>

#include "lst/harness.hpp"
#include "lst/semantics.hpp"
#include "lst/typecheck.hpp"
#include "oracles.hpp"

using namespace lst;

namespace {
StreamType T(const char* s) { return parse_type(s); }
BunchedContext G(const char* s) { return parse_ctx(s); }

ErrorKind error_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("no error");
  return ErrorKind::IoError;
}

// fix f(x : 1*) : 1* = case x of nil => nil | y :: ys => y :: rec(ys)
Term copy_star() {
  auto def = std::make_shared<RecDef>();
  def->name = "copy";
  def->gamma = G("x : 1*");
  def->ret = T("1*");
  def->body = tm::starcase(std::nullopt, std::nullopt, std::nullopt, "x", tm::nil(), "y", "ys",
                           tm::cons(tm::var("y"), tm::rec({}, ar::sng(tm::var("ys")))));
  Term call = tm::fix(def, {}, ar::sng(tm::var("x")));
  return annotate({}, def->gamma, call, def->ret).term;
}
}  // namespace

TEST_CASE("unit and variables") {
  StepResult r = step({}, tm::unit(), 0);
  CHECK(r.output == Prefix::one_full());
  CHECK(r.residual == tm::sink());
  StepResult v = step({{"x", Prefix::one_emp()}}, tm::var("x"), 0);
  CHECK(v.output == Prefix::one_emp());
  CHECK(v.residual == tm::var("x"));
}

TEST_CASE("let-cat before and after the split point") {
  Term e = tm::letcat(T("1"), "x", "y", "z", tm::var("x"));
  StepResult r = step({{"z", Prefix::cat_a(Prefix::one_emp())}}, e, 0);
  CHECK(r.output == Prefix::one_emp());
  CHECK(r.residual == e);

  Term e2 = tm::letcat(T("1"), "x", "y", "z", tm::cat(tm::var("x"), tm::var("y")));
  StepResult r2 = step({{"z", Prefix::cat_b(Prefix::one_full(), Prefix::one_emp())}}, e2, 0);
  CHECK(r2.output == Prefix::cat_b(Prefix::one_full(), Prefix::one_emp()));
  CHECK(r2.residual == tm::let("x", tm::sink(), tm::var("z")));
}

TEST_CASE("argument steps") {
  ArgsStepResult r = step_args({}, ar::emp(), BunchedContext::empty(), 0);
  CHECK(r.env.empty());
  CHECK(r.residual.kind() == ArgsKind::Emp);

  // Left bunch unfinished: the right one is padded with emp.
  BunchedContext g = G("a : 1 ; b : Int");
  Args a = ar::semic1(ar::sng(tm::var("x")), ar::sng(tm::var("w")));
  ArgsStepResult r1 = step_args({{"x", Prefix::one_emp()}, {"w", Prefix::int_emp()}}, a, g, 0);
  CHECK(r1.env.at("a") == Prefix::one_emp());
  CHECK(r1.env.at("b") == Prefix::int_emp());
  CHECK(r1.residual.kind() == ArgsKind::Semic1);

  // Once it finishes the right bunch runs and the tree moves on.
  ArgsStepResult r2 = step_args({{"x", Prefix::one_full()}, {"w", Prefix::int_full(3)}}, a, g, 0);
  CHECK(r2.env.at("a") == Prefix::one_full());
  CHECK(r2.env.at("b") == Prefix::int_full(3));
  CHECK(r2.residual.kind() == ArgsKind::Semic2);
}

TEST_CASE("incremental runs") {
  RunResult r = run_incremental(tm::var("x"), G("x : 1"), T("1"),
                                {{{"x", Prefix::one_emp()}}, {{"x", Prefix::one_emp()}}});
  CHECK(r.outputs == std::vector<Prefix>{Prefix::one_emp(), Prefix::one_emp()});

  Term e = copy_star();
  std::vector<Environment> chunks{{{"x", Prefix::stp_a(Prefix::one_emp())}},
                                  {{"x", Prefix::cat_b(Prefix::one_full(), Prefix::stp_a(Prefix::one_emp()))}},
                                  {{"x", Prefix::cat_b(Prefix::one_full(), Prefix::star_done())}}};
  RunOptions debug;
  debug.debug_types = true;
  RunResult run = run_incremental(e, G("x : 1*"), T("1*"), chunks, debug);
  Prefix all = concat_outputs(run.outputs, T("1*"));
  CHECK(all == oracle::star({Prefix::one_full(), Prefix::one_full()}));
  CHECK(all == run_batch_oracle(e, concat_inputs(chunks, G("x : 1*"))));
}

TEST_CASE("ill-typed inputs are reported with the step index") {
  try {
    run_incremental(tm::var("x"), G("x : 1"), T("1"), {{{"x", Prefix::one_emp()}}, {{"x", Prefix::int_full(1)}}});
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::IllTyped);
    CHECK(std::string(e.what()).find("step 1") != std::string::npos);
  }
}

TEST_CASE("history programs run to completion") {
  Term e = tm::hist(HistTerm::arith(HistOp::Div, HistTerm::int_(161), HistTerm::int_(3)), T("Int"));
  CHECK(step({}, e, 0).output == Prefix::int_full(53));
  Term z = tm::hist(HistTerm::arith(HistOp::Div, HistTerm::int_(1), HistTerm::int_(0)), T("Int"));
  CHECK(error_of([&] { step({}, z, 0); }) == ErrorKind::DivByZero);
}

TEST_CASE("fuel") {
  Term e = copy_star();
  Environment in{{"x", oracle::star({Prefix::one_full(), Prefix::one_full(), Prefix::one_full()})}};
  // Four unfolds: three elements and the end.
  CHECK(error_of([&] { step(in, e, 3); }) == ErrorKind::FuelExhausted);
  StepResult ok = step(in, e, 4);
  CHECK(ok.fuel_used == 4);
  CHECK(step(in, e, 100).output == ok.output);
}

TEST_CASE("homomorphism on every split of small inputs") {
  Term e = copy_star();
  BunchedContext g = G("x : 1*");
  std::mt19937_64 rng(3);
  size_t splits = 0;
  for (auto& p : oracle::all_prefixes(T("1*"), 3)) {
    Environment eta{{"x", p}};
    for (auto& sp : two_way_splits(eta, g, 64, 50, rng)) {
      Comparison c = compare_with_batch(e, g, T("1*"), {sp.first, sp.second});
      CHECK_MESSAGE(c.ok, c.detail);
      ++splits;
    }
  }
  CHECK(splits > 20);
}

TEST_CASE("inert terms are silent on empty input") {
  Term e = copy_star();
  StepResult r = step(emp_ctx(G("x : 1*")), e, kDefaultFuel);
  CHECK(is_empty(r.output));
}
