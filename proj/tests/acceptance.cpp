// Acceptance binary: one PASS/FAIL line per criterion, nonzero exit on any
// failure.

#include <chrono>
#include <cstdio>
#include <functional>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "corpus.hpp"
#include "lst/events.hpp"
#include "lst/frontend.hpp"
#include "lst/harness.hpp"
#include "lst/semantics.hpp"
#include "lst/typecheck.hpp"
#include "oracles.hpp"

using namespace lst;

namespace {

struct Outcome {
  size_t checks = 0;
  size_t failures = 0;
  std::string first;

  void check(bool ok, const std::string& what) {
    ++checks;
    if (ok) return;
    if (failures++ == 0) first = what;
  }
  // Lazily built message for hot loops.
  void check(bool ok, const std::function<std::string()>& what) {
    ++checks;
    if (ok) return;
    if (failures++ == 0) first = what();
  }
};

std::optional<ErrorKind> error_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  return std::nullopt;
}

std::string kind_str(std::optional<ErrorKind> k) { return k ? kind_name(*k) : "accepted"; }

Compiler& corpus_compiler() {
  static Compiler c(corpus::source());
  return c;
}

struct Compiled {
  std::string name;
  CompiledEntry entry;
};

const std::vector<Compiled>& compiled_corpus() {
  static const std::vector<Compiled> all = [] {
    std::vector<Compiled> out;
    for (auto& e : corpus::entries()) out.push_back({e.name, corpus::compile(corpus_compiler(), e)});
    return out;
  }();
  return all;
}

bool has_comma(const BunchedContext& g) {
  switch (g.kind()) {
    case CtxKind::Comma: return true;
    case CtxKind::Semic: return has_comma(g.left()) || has_comma(g.right());
    default: return false;
  }
}

// 1 ----------------------------------------------------------------------

Outcome brightness() {
  Outcome o;
  const oracle::Ints xs{11, 30, 52, 56, 53, 30, 10, 60, 10};
  Prefix want_runs = oracle::star({Prefix::cat_b(Prefix::int_full(52), oracle::ints({56, 53})),
                                   Prefix::cat_b(Prefix::int_full(60), oracle::ints({}))});
  Prefix want_avgs = oracle::ints({53, 60});
  // The hand-written expectations agree with the list oracles.
  o.check(oracle::int_lists_of(want_runs) == oracle::thresh(xs, 50), "thresh list oracle");
  o.check(oracle::ints_of(want_avgs) == oracle::average_above(xs, 50), "averageAbove list oracle");

  Environment eta{{"xs", oracle::ints(xs)}};
  for (auto [name, want] : {std::pair{"thresh", want_runs}, std::pair{"averageAbove", want_avgs}}) {
    CompiledEntry c = corpus::compile(corpus_compiler(), corpus::find(name));
    for (const char* how : {"whole", "event", "k=2", "random:7"}) {
      auto chunks = chunk_inputs(env_to_events(eta, c.gamma), c.gamma, parse_chunking(how));
      RunOptions opts;
      opts.debug_types = true;
      RunResult r = run_incremental(c.term, c.gamma, c.type, chunks, opts);
      Prefix got = concat_outputs(r.outputs, c.type);
      o.check(got == want, std::string(name) + " " + how + ": got " + got.str());
    }
  }
  return o;
}

// 2 ----------------------------------------------------------------------

Outcome discrimination() {
  Outcome o;
  auto ctx = [](const char* s) { return parse_ctx(s); };
  auto accepts = [&](const char* what, const BunchedContext& g, const Term& e, const char* want) {
    std::optional<ErrorKind> k;
    StreamType got;
    k = error_of([&] { got = core_typecheck({}, g, std::nullopt, e).type; });
    o.check(!k && got == parse_type(want), std::string(what) + ": " + kind_str(k));
  };
  auto rejects = [&](const char* what, const std::function<void()>& f, std::vector<ErrorKind> kinds) {
    auto k = error_of(f);
    bool ok = k && std::find(kinds.begin(), kinds.end(), *k) != kinds.end();
    o.check(ok, std::string(what) + ": " + kind_str(k));
  };

  accepts("parallel swap", ctx("z : Int || Bool"), tm::letpar("x", "y", "z", tm::par(tm::var("y"), tm::var("x"))),
          "Bool || Int");
  accepts("broadcast", ctx("x : Int*"), tm::par(tm::var("x"), tm::var("x")), "Int* || Int*");
  accepts("in-order cat", ctx("z : Int . Bool"),
          tm::letcat(parse_type("Bool"), "x", "y", "z", tm::cat(tm::var("x"), tm::var("y"))), "Int . Bool");

  rejects("cat swap", [&] {
    core_typecheck({}, ctx("z : Int . Int"), std::nullopt,
                   tm::letcat(parse_type("Int"), "x", "y", "z", tm::cat(tm::var("y"), tm::var("x"))));
  }, {ErrorKind::OrderViolation});
  rejects("replay", [&] {
    core_typecheck({}, ctx("x : Int*"), std::nullopt, tm::cat(tm::var("x"), tm::var("x")));
  }, {ErrorKind::OrderViolation});

  // The same programs through the surface language.
  auto surface = [](const char* src) { return [src] { Compiler(src).compile({"f", {}, {}}); }; };
  o.check(!error_of(surface("fun f(z : Int || Bool) : Bool || Int = let (x,y) = z in (y,x)")), "surface swap");
  o.check(!error_of(surface("fun f(x : Int*) : Int* || Int* = (x,x)")), "surface broadcast");
  rejects("surface cat swap", surface("fun f(z : Int . Int) : Int . Int = let (x;y) = z in (y;x)"),
          {ErrorKind::OrderViolation});
  rejects("surface replay", surface("fun f(x : Int*) : Int* . Int* = (x;x)"), {ErrorKind::OrderViolation});

  // Tie-breaking: an Int || Int cannot be inspected for which side came
  // first. A case on it is a shape error, and sequencing the two halves
  // needs an ordering the comma context does not give.
  rejects("tie-break by case", [&] {
    core_typecheck({}, ctx("z : Int || Int"), std::nullopt,
                   tm::sumcase(std::nullopt, std::nullopt, "z", "a", tm::var("a"), "b", tm::var("b")));
  }, {ErrorKind::TypeMismatch, ErrorKind::ShapeMismatch});
  rejects("tie-break by surface case",
          surface("fun f(z : Int || Int) : Int = case z of inl(a) => a | inr(b) => b"),
          {ErrorKind::TypeMismatch, ErrorKind::ShapeMismatch});
  rejects("tie-break by sequencing", [&] {
    core_typecheck({}, ctx("z : Int || Int"), std::nullopt,
                   tm::letpar("x", "y", "z", tm::cat(tm::var("x"), tm::var("y"))));
  }, {ErrorKind::OrderViolation});

  // What does typecheck at Int || Int -> Int is order-independent.
  BunchedContext zg = ctx("z : Int || Int");
  for (auto& e : {tm::letpar("x", "y", "z", tm::var("x")), tm::letpar("x", "y", "z", tm::var("y"))}) {
    Term a = annotate({}, zg, e, parse_type("Int")).term;
    for (auto& eta : {Environment{{"z", Prefix::par(Prefix::int_full(1), Prefix::int_full(2))}},
                      Environment{{"z", Prefix::par(Prefix::int_emp(), Prefix::int_full(2))}}}) {
      Comparison d = check_determinism(a, zg, parse_type("Int"), eta);
      o.check(d.ok, "projection depends on arrival order: " + d.detail);
    }
  }
  return o;
}

// 3 ----------------------------------------------------------------------

Outcome homomorphism() {
  Outcome o;
  std::mt19937_64 rng(31);
  for (auto& [name, c] : compiled_corpus()) {
    for (int i = 0; i < 24; ++i) {
      Environment eta = random_env(c.gamma, rng, 4, i % 2 == 0);
      for (auto& sp : two_way_splits(eta, c.gamma, 64, 50, rng)) {
        Comparison cmp;
        auto k = error_of([&] { cmp = compare_with_batch(c.term, c.gamma, c.type, {sp.first, sp.second}); });
        o.check(!k && cmp.ok, [&] {
          return name + " on " + env_str(eta) + " split " + env_str(sp.first) + ": " +
                 (k ? kind_name(*k) : cmp.detail);
        });
      }
    }
  }

  // Harness sanity: an interpreter that restarts from the original term on
  // every step replays earlier output, and must be caught.
  const CompiledEntry& m = corpus::compile(corpus_compiler(), corpus::find("map"));
  RunOptions broken;
  broken.stepper = [orig = m.term](const Environment& eta, const Term&, std::int64_t fuel) { return step(eta, orig, fuel); };
  FuzzReport rep = fuzz_entry(m.term, m.gamma, m.type, 50, 1, 4, broken);
  o.check(rep.failures > 0, "restarting interpreter was not caught");
  // Dropping every output is caught too.
  broken.stepper = [](const Environment& eta, const Term& e, std::int64_t fuel) {
    StepResult r = step(eta, e, fuel);
    if (!is_empty(r.output)) r.output = Prefix::star_emp();
    return r;
  };
  rep = fuzz_entry(m.term, m.gamma, m.type, 50, 1, 4, broken);
  o.check(rep.failures > 0, "output-dropping interpreter was not caught");
  return o;
}

// 4 ----------------------------------------------------------------------

Outcome determinism() {
  Outcome o;
  std::mt19937_64 rng(41);
  size_t programs = 0;
  for (auto& [name, c] : compiled_corpus()) {
    if (!has_comma(c.gamma)) continue;
    ++programs;
    for (int i = 0; i < 12; ++i) {
      Environment eta = random_env(c.gamma, rng, 5, i % 3 != 0);
      ChannelEvents evs = env_to_events(eta, c.gamma);
      Comparison d = check_determinism(c.term, c.gamma, c.type, eta);
      o.check(d.ok, name + " on " + env_str(eta) + ": " + d.detail);
      for (std::uint64_t seed = 0; seed < 100; ++seed) {
        Comparison cmp;
        auto k = error_of([&] {
          auto chunks = chunk_inputs(evs, c.gamma, {ChunkMode::Random, 1, rng()});
          cmp = compare_with_batch(c.term, c.gamma, c.type, chunks);
        });
        o.check(!k && cmp.ok, [&] {
          return name + " on " + env_str(eta) + ": " + (k ? kind_name(*k) : cmp.detail);
        });
      }
    }
  }
  o.check(programs >= 1, "no comma-context program in the corpus");
  return o;
}

// 5 ----------------------------------------------------------------------

Outcome soundness() {
  Outcome o;
  std::mt19937_64 rng(51);
  RunOptions opts;
  opts.debug_types = true;
  for (auto& [name, c] : compiled_corpus()) {
    for (int i = 0; i < 30; ++i) {
      Environment eta = random_env(c.gamma, rng, 5, i % 2 == 0);
      for (Chunking how : {Chunking{ChunkMode::Event, 1, 0}, Chunking{ChunkMode::Random, 1, rng()}}) {
        auto k = error_of([&] {
          auto chunks = chunk_inputs(env_to_events(eta, c.gamma), c.gamma, how);
          RunResult r = run_incremental(c.term, c.gamma, c.type, chunks, opts);
          // The final residual also types at what is left.
          core_typecheck({}, r.ctx, std::nullopt, r.residual, r.type);
        });
        o.check(!k, [&] { return name + " on " + env_str(eta) + ": " + kind_str(k); });
      }
    }
  }
  return o;
}

// 6 ----------------------------------------------------------------------

void prefix_laws_at(const StreamType& s, Outcome& o, size_t pcap, size_t qcap, size_t rcap) {
  auto at = [&](const char* law, const Prefix& p) { return [&s, law, p] { return std::string(law) + " at " + s.str() + " " + p.str(); }; };
  Prefix e = emp(s);
  o.check(oracle::has_type(e, s), at("emp typing", e));
  o.check(oracle::empty(e), at("emp emptiness", e));
  o.check(deriv_type(e, s) == s, at("deriv of emp", e));
  if (oracle::maximal(e)) o.check(nullable(s), at("empty and maximal means nullable", e));

  for (auto& p : oracle::all_prefixes(s, 2, pcap)) {
    StreamType ds = deriv_type(p, s);
    o.check(oracle::deriv(p, s) == ds, at("deriv", p));
    o.check(oracle::maximal(p) == nullable(ds), at("maximal iff nullable derivative", p));
    o.check(concat_prefix(e, p) == p, at("left unit", p));
    o.check(concat_prefix(p, emp(ds)) == p, at("right unit", p));
    for (auto& q : oracle::all_prefixes(ds, 1, qcap)) {
      Prefix pq = concat_prefix(p, q);
      o.check(oracle::has_type(pq, s), at("concat typedness", pq));
      StreamType dds = deriv_type(q, ds);
      o.check(deriv_type(pq, s) == dds, at("deriv composition", pq));
      bool mp = oracle::maximal(p), mq = oracle::maximal(q), mpq = oracle::maximal(pq);
      o.check(!mpq || mq, at("maximal concat has maximal suffix", pq));
      o.check(!(mp || mq) || mpq, at("maximal part gives maximal concat", pq));
      o.check(!mp || pq == p, at("maximal prefix absorbs", pq));
      for (auto& r : oracle::all_prefixes(dds, 1, rcap))
        o.check(concat_prefix(pq, r) == concat_prefix(p, concat_prefix(q, r)), at("associativity", r));
    }
  }
}

Outcome prefix_laws() {
  Outcome o;
  for (auto& s : oracle::types_to_depth(1)) prefix_laws_at(s, o, 400, 60, 20);
  auto d2 = oracle::types_to_depth(2);
  for (auto& s : d2) prefix_laws_at(s, o, 24, 8, 3);
  for (auto& s : oracle::sample_types(3, 300, 61)) prefix_laws_at(s, o, 24, 8, 3);
  o.check(d2.size() > 9000, "depth-2 enumeration is incomplete");
  return o;
}

// 7 ----------------------------------------------------------------------

void codec_at(const StreamType& s, Outcome& o, std::mt19937_64& rng, size_t cap) {
  int bound = size_bound(s);
  for (auto& p : oracle::all_prefixes(s, 2, cap)) {
    auto xs = serialize(p, s);
    auto msg = [&s, &p](const char* law) { return [&s, &p, law] { return std::string(law) + " at " + s.str() + " " + p.str(); }; };
    o.check(xs.size() == oracle::event_count(p), msg("event count"));
    o.check(deserialize(xs, s) == p, msg("round trip"));
    bool within = true;
    for (auto& x : xs) within = within && event_size(x) <= bound;
    o.check(within, msg("size bound"));
    // Wire text survives too.
    o.check(events_from_text(events_to_text(xs)) == xs, msg("wire round trip"));
    for (int i = 0; i < 3; ++i) o.check(deserialize(serialize_shuffled(p, s, rng), s) == p, msg("shuffled order"));
  }
}

Outcome codec() {
  Outcome o;
  std::mt19937_64 rng(71);
  for (auto& s : oracle::types_to_depth(1)) codec_at(s, o, rng, 400);
  for (auto& s : oracle::types_to_depth(2)) codec_at(s, o, rng, 24);
  for (auto& s : oracle::sample_types(3, 300, 72)) codec_at(s, o, rng, 24);
  return o;
}

// 8 ----------------------------------------------------------------------

Outcome inertness() {
  Outcome o;
  size_t inert = 0;
  for (auto& [name, c] : compiled_corpus()) {
    if (c.inert != Inert::I) continue;
    ++inert;
    Environment empty = emp_ctx(c.gamma);
    StepResult r;
    auto k = error_of([&] { r = step(empty, c.term, kDefaultFuel); });
    o.check(!k && oracle::empty(r.output), name + ": " + (k ? kind_name(*k) : r.output.str()));
    // Through the event path: empty channel files produce no events.
    auto chunks = chunk_inputs({}, c.gamma, {ChunkMode::Whole, 1, 0});
    RunResult rr = run_incremental(c.term, c.gamma, c.type, chunks);
    bool silent = true;
    for (auto& out : rr.outputs) silent = silent && serialize(out, c.type).empty();
    o.check(silent, name + ": events on empty input");
  }
  o.check(inert >= 10, "too few inert corpus entries: " + std::to_string(inert));
  return o;
}

// 9 ----------------------------------------------------------------------

Outcome fuel() {
  Outcome o;
  Compiler loop("fun loop(x : 1) : 1 = loop(x)\nfun spin(x : Int*) : Int* = spin(x)");
  for (const char* name : {"loop", "spin"}) {
    CompiledEntry c = loop.compile({name, {}, {}});
    std::mt19937_64 rng(91);
    for (std::int64_t f : {0, 1, 2, 17, 1000, 100000}) {
      for (bool full : {false, true}) {
        Environment eta = random_env(c.gamma, rng, 3, full);
        auto k = error_of([&] { step(eta, c.term, f); });
        o.check(k == ErrorKind::FuelExhausted, std::string(name) + " at fuel " + std::to_string(f) + ": " + kind_str(k));
      }
    }
  }

  // Monotonicity: a step that finishes within some fuel finishes the same
  // way with any larger bound, and fails below what it used.
  std::mt19937_64 rng(92);
  for (auto& [name, c] : compiled_corpus()) {
    for (int i = 0; i < 6; ++i) {
      Environment eta = random_env(c.gamma, rng, 4, i % 2 == 0);
      StepResult full = step(eta, c.term, kDefaultFuel);
      std::int64_t used = full.fuel_used;
      for (std::int64_t f : {std::int64_t{0}, used / 2, used - 1, used, used + 1, used * 2 + 3}) {
        if (f < 0) continue;
        std::optional<StepResult> r;
        auto k = error_of([&] { r = step(eta, c.term, f); });
        if (f < used) {
          o.check(k == ErrorKind::FuelExhausted, name + " finished below its fuel use");
        } else {
          o.check(!k && r->output == full.output && r->residual == full.residual && r->fuel_used == used,
                  name + " changed result at fuel " + std::to_string(f));
        }
      }
    }
  }
  return o;
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    Outcome (*run)();
  };
  const Criterion all[] = {
      {"brightness pipeline", brightness},
      {"typechecker discrimination", discrimination},
      {"homomorphism", homomorphism},
      {"determinism", determinism},
      {"executable soundness", soundness},
      {"prefix laws", prefix_laws},
      {"event codec", codec},
      {"inertness", inertness},
      {"fuel", fuel},
  };
  int failed = 0, i = 0;
  for (auto& c : all) {
    ++i;
    auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.check(false, std::string("uncaught: ") + e.what());
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    bool ok = o.failures == 0;
    failed += !ok;
    std::printf("%s %d %s: %zu checks, %zu failures, %.2fs%s%s\n", ok ? "PASS" : "FAIL", i, c.name, o.checks,
                o.failures, secs, ok ? "" : " first: ", ok ? "" : o.first.c_str());
    std::fflush(stdout);
  }
  return failed ? 1 : 0;
}
