#include <doctest.h>

#include "corpus.hpp"
#include "lst/frontend.hpp"
#include "lst/harness.hpp"
#include "lst/semantics.hpp"
#include "oracles.hpp"

using namespace lst;

namespace {
StreamType T(const char* s) { return parse_type(s); }

ErrorKind error_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("no error");
  return ErrorKind::IoError;
}

// Runs a compiled entry over complete inputs, one event at a time.
Prefix run_events(const CompiledEntry& c, const Environment& eta) {
  auto chunks = chunk_inputs(env_to_events(eta, c.gamma), c.gamma, {ChunkMode::Event, 1, 0});
  RunOptions opts;
  opts.debug_types = true;
  RunResult r = run_incremental(c.term, c.gamma, c.type, chunks, opts);
  return concat_outputs(r.outputs, c.type);
}

Compiler& corpus_compiler() {
  static Compiler c(corpus::source());
  return c;
}
}  // namespace

TEST_CASE("parsing declarations") {
  auto ds = parse_program(R"(
fun map [s,t] <f : s -> t> (xs : s*) : t* =
  case xs of
    nil => nil
  | y :: ys => f(y) :: map(ys)
fun id[s](x : s) : s = x
)");
  REQUIRE(ds.size() == 2);
  CHECK(ds[0].type_params == std::vector<std::string>{"s", "t"});
  REQUIRE(ds[0].macro_params.size() == 1);
  CHECK(ds[0].macro_params[0].first == "f");
  CHECK(ds[0].params.vars() == std::vector<std::string>{"xs"});
  CHECK(ds[0].body->kind == SK::StarCase);
  CHECK(ds[1].body->kind == SK::Var);
  CHECK(error_of([] { parse_program("fun f(x : 1*) : 1* = case x of nil =>"); }) == ErrorKind::ParseError);
  CHECK(error_of([] { parse_program("fun f(x : 1) : 1 = (x"); }) == ErrorKind::ParseError);
}

TEST_CASE("elaboration shapes") {
  Compiler c("fun sw(z : Int . Int) : Int . Int = let (x;y) = z in (y;x)");
  RecDefP d = c.instantiate({"sw", {}, {}});
  REQUIRE(d->body.kind() == TermKind::LetCat);
  CHECK(d->body->kids[0].kind() == TermKind::CatPair);
  CHECK(error_of([&] { c.compile({"sw", {}, {}}); }) == ErrorKind::OrderViolation);

  Compiler c2(corpus::source());
  RecDefP mm = c2.instantiate(corpus::ref(corpus::find("mapMaybe")));
  REQUIRE(mm->body.kind() == TermKind::StarCase);
  const Term& cons_branch = mm->body->kids[1];
  REQUIRE(cons_branch.kind() == TermKind::Let);
  CHECK(cons_branch->kids[0].kind() == TermKind::Fix);
  CHECK(cons_branch->kids[1].kind() == TermKind::SumCase);
  CHECK(cons_branch->kids[1]->z == cons_branch->x);

  Compiler c3("fun k(x : Int) : Int = x");
  CHECK(c3.instantiate({"k", {}, {}})->body == tm::var("x"));
}

TEST_CASE("shadowing is removed") {
  Compiler c("fun f(x : Int . Int) : Int . Int = let (x;y) = x in (x;y)");
  CompiledEntry e = c.compile({"f", {}, {}});
  CHECK(e.type == T("Int . Int"));
  RecDefP d = c.instantiate({"f", {}, {}});
  CHECK(d->body->x != d->body->z);
}

TEST_CASE("monomorphization") {
  Compiler& c = corpus_compiler();
  CompiledEntry m = corpus::compile(c, corpus::find("map"));
  CHECK(m.gamma == parse_ctx("xs : Int*"));
  CHECK(m.type == T("Int*"));
  CHECK(core_typecheck({}, m.gamma, std::nullopt, m.term).type == T("Int*"));
  FunRef r = corpus::ref(corpus::find("map"));
  CHECK(c.instantiate(r) == c.instantiate(r));

  CompiledEntry f = corpus::compile(c, corpus::find("filter"));
  CHECK(f.type == T("Int*"));
  CHECK(c.instantiate(corpus::ref(corpus::find("filter")))->body.kind() == TermKind::Fix);
}

TEST_CASE("frontend errors") {
  Compiler& c = corpus_compiler();
  CHECK(error_of([&] { c.instantiate({"nope", {}, {}}); }) == ErrorKind::UnknownFunction);
  CHECK(error_of([&] { c.instantiate({"map", {T("Int")}, {}}); }) == ErrorKind::ArityMismatch);
  CHECK(error_of([&] { c.instantiate({"head", {T("s")}, {}}); }) == ErrorKind::NonClosedTypeArg);
  CHECK(error_of([&] { c.instantiate({"map", {T("Int"), T("Int")}, {{"big", {}, {}}}}); }) ==
        ErrorKind::SigMismatch);
  CHECK(error_of([&] { c.compile({"thresh", {}, {}}, {}); }) == ErrorKind::ArityMismatch);

  Compiler cyc("fun a(x : Int) : Int = b(x)\nfun b(x : Int) : Int = a(x)");
  CHECK(error_of([&] { cyc.instantiate({"a", {}, {}}); }) == ErrorKind::MacroCycle);
  CHECK(error_of([] { Compiler("fun a(x : 1) : 1 = x\nfun a(x : 1) : 1 = x"); }) == ErrorKind::ScopeError);
  Compiler unbound("fun a(x : 1) : 1 = y");
  CHECK(error_of([&] { unbound.instantiate({"a", {}, {}}); }) == ErrorKind::ScopeError);
}

TEST_CASE("user declarations replace prelude ones") {
  Compiler c("fun sum(xs : Int*) : Int = {0}");
  CHECK_FALSE(c.decl("sum").from_prelude);
  CHECK(c.decl("length").from_prelude);
}

TEST_CASE("every listing compiles at its representative types") {
  Compiler& c = corpus_compiler();
  for (auto& e : corpus::entries()) {
    INFO(e.name);
    CompiledEntry ce = corpus::compile(c, e);
    CHECK(core_typecheck({}, ce.gamma, std::nullopt, ce.term).type == ce.type);
  }
}

TEST_CASE("listings agree with plain list functions") {
  Compiler& c = corpus_compiler();
  using oracle::Ints;
  const std::vector<Ints> inputs{{}, {5}, {11, 30, 52, 56, 53, 30, 10, 60, 10}, {12, 3, 40, 7, 7, 99, 1}};
  auto run1 = [&](const char* name, const Ints& xs) {
    return run_events(corpus::compile(c, corpus::find(name)), {{"xs", oracle::ints(xs)}});
  };
  for (auto& xs : inputs) {
    INFO(xs.size());
    CHECK(oracle::int_lists_of(run1("thresh", xs)) == oracle::thresh(xs, 50));
    CHECK(oracle::ints_of(run1("averageAbove", xs)) == oracle::average_above(xs, 50));
    CHECK(oracle::ints_of(run1("map", xs)) == oracle::map_incr(xs));
    CHECK(oracle::ints_of(run1("filter", xs)) == oracle::filter_big(xs));
    CHECK(oracle::ints_of(run1("mapMaybe", xs)) == oracle::filter_big(xs));
    CHECK(run1("fold", xs) == Prefix::int_full(oracle::fold_sum(xs, 0)));
    CHECK(oracle::ints_of(run1("runningFold", xs)) == oracle::running_sum(xs, 0));
    CHECK(oracle::int_lists_of(run1("tumble", xs)) == oracle::tumble(xs, 2));
    CHECK(oracle::int_lists_of(run1("slidingWindower", xs)) == oracle::sliding(xs, 3));

    Prefix h = run1("head", xs);
    if (xs.empty())
      CHECK(h == Prefix::sum_a(Prefix::eps_emp()));
    else
      CHECK(h == Prefix::sum_b(Prefix::int_full(xs[0])));

    auto [l, r] = oracle::round_robin(xs, true);
    CHECK(run1("roundRobin", xs) == Prefix::par(oracle::ints(l), oracle::ints(r)));
    auto [bl, br] = oracle::dec_partition(xs);
    CHECK(run1("decPartition", xs) == Prefix::par(oracle::ints(bl), oracle::ints(br)));
    auto [fa, fb] = oracle::first_n(xs, 2);
    CHECK(run1("firstN", xs) == Prefix::cat_b(oracle::ints(fa), oracle::ints(fb)));

    std::vector<Prefix> pairs;
    for (auto [a, b] : oracle::parsepairs(xs))
      pairs.push_back(Prefix::cat_b(Prefix::int_full(a), Prefix::int_full(b)));
    CHECK(run1("parsepairs", xs) == oracle::star(pairs));

    std::vector<Prefix> ys;
    for (auto y : xs) ys.push_back(Prefix::int_full(y));
    Environment two{{"xs", oracle::ints(xs)}, {"ys", oracle::star(std::vector<Prefix>(ys.size() / 2, Prefix::bool_full(true)))}};
    std::vector<Prefix> zipped;
    for (size_t i = 0; i < ys.size() / 2; ++i) zipped.push_back(Prefix::par(ys[i], Prefix::bool_full(true)));
    CHECK(run_events(corpus::compile(c, corpus::find("sync")), two) == oracle::star(zipped));

    Prefix run = oracle::star({});
    if (!xs.empty()) {
      std::vector<Prefix> rest;
      for (size_t i = 1; i < xs.size(); ++i) rest.push_back(Prefix::int_full(xs[i]));
      Prefix one = Prefix::cat_b(Prefix::int_full(xs[0]), oracle::star(rest));
      CHECK(run_events(corpus::compile(c, corpus::find("averageSingle")), {{"run", one}}) ==
            Prefix::int_full(oracle::fold_sum(xs, 0) / static_cast<std::int64_t>(xs.size())));
    }
  }

  const std::vector<oracle::Punc> puncs{{}, {std::nullopt}, {1, 2, std::nullopt, 3}, {1, std::nullopt, std::nullopt, 4, std::nullopt}};
  for (auto& xs : puncs) {
    std::vector<Prefix> items;
    for (auto& x : xs) items.push_back(x ? Prefix::sum_b(Prefix::int_full(*x)) : Prefix::sum_a(Prefix::eps_emp()));
    Prefix out = run_events(corpus::compile(c, corpus::find("puncWindow")), {{"xs", oracle::star(items)}});
    CHECK(oracle::int_lists_of(out) == oracle::punc_window(xs));
  }
}
