#include "lst/harness.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <functional>
#include <thread>

namespace lst {

namespace {

int coin(std::mt19937_64& rng, int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng); }

std::vector<std::pair<std::string, StreamType>> binds_of(const BunchedContext& g) {
  std::vector<std::pair<std::string, StreamType>> out;
  // in order, so channel order is stable
  std::function<void(const BunchedContext&)> walk = [&](const BunchedContext& c) {
    switch (c.kind()) {
      case CtxKind::Empty: return;
      case CtxKind::Bind: out.emplace_back(c.var(), c.type()); return;
      default:
        walk(c.left());
        walk(c.right());
    }
  };
  walk(g);
  return out;
}

Environment restrict(const Environment& eta, const std::set<std::string>& vars) {
  Environment out;
  for (auto& [x, p] : eta)
    if (vars.count(x)) out.emplace(x, p);
  return out;
}

}  // namespace

Prefix random_prefix(const StreamType& s, std::mt19937_64& rng, int budget, bool maximal) {
  switch (s.kind()) {
    case TypeKind::Eps: return Prefix::eps_emp();
    case TypeKind::One: return maximal || coin(rng, 3) ? Prefix::one_full() : Prefix::one_emp();
    case TypeKind::Int:
      return maximal || coin(rng, 3) ? Prefix::int_full(coin(rng, 100)) : Prefix::int_emp();
    case TypeKind::Bool:
      return maximal || coin(rng, 3) ? Prefix::bool_full(coin(rng, 2) == 1) : Prefix::bool_emp();
    case TypeKind::Par:
      return Prefix::par(random_prefix(s.left(), rng, budget, maximal),
                         random_prefix(s.right(), rng, budget, maximal));
    case TypeKind::Cat:
      if (!maximal && coin(rng, 3) == 0) return Prefix::cat_a(random_prefix(s.left(), rng, budget, false));
      return Prefix::cat_b(random_prefix(s.left(), rng, budget, true),
                           random_prefix(s.right(), rng, budget, maximal));
    case TypeKind::Plus: {
      if (!maximal && coin(rng, 4) == 0) return Prefix::sum_emp();
      int sub = std::max(1, budget - 1);
      if (coin(rng, 2)) return Prefix::sum_a(random_prefix(s.left(), rng, sub, maximal));
      return Prefix::sum_b(random_prefix(s.right(), rng, sub, maximal));
    }
    case TypeKind::Star: {
      int n = coin(rng, std::max(1, budget) + 1);
      int sub = std::max(1, budget / 2);
      Prefix tail;
      if (maximal) {
        tail = Prefix::star_done();
      } else {
        switch (coin(rng, 3)) {
          case 0: tail = Prefix::star_emp(); break;
          case 1: tail = Prefix::star_done(); break;
          default: tail = Prefix::stp_a(random_prefix(s.body(), rng, sub, false)); break;
        }
      }
      for (int i = 0; i < n; ++i) tail = Prefix::stp_b(random_prefix(s.body(), rng, sub, true), tail);
      return tail;
    }
    case TypeKind::Var: fail(ErrorKind::NonClosedTypeArg, "cannot generate inputs for open type " + s.str());
  }
  return Prefix();
}

Environment random_env(const BunchedContext& g, std::mt19937_64& rng, int budget, bool maximal) {
  Environment out;
  switch (g.kind()) {
    case CtxKind::Empty: break;
    case CtxKind::Bind: out[g.var()] = random_prefix(g.type(), rng, budget, maximal); break;
    case CtxKind::Comma: {
      out = random_env(g.left(), rng, budget, maximal);
      Environment r = random_env(g.right(), rng, budget, maximal);
      out.insert(r.begin(), r.end());
      break;
    }
    case CtxKind::Semic: {
      out = random_env(g.left(), rng, budget, maximal);
      Environment r = maximal_on(out, ctx_var_set(g.left())) ? random_env(g.right(), rng, budget, maximal)
                                                              : emp_ctx(g.right());
      out.insert(r.begin(), r.end());
      break;
    }
  }
  return out;
}

ChannelEvents env_to_events(const Environment& eta, const BunchedContext& g) {
  ChannelEvents out;
  for (auto& [x, t] : binds_of(g)) {
    auto it = eta.find(x);
    out[x] = it == eta.end() ? std::vector<Event>{} : serialize(it->second, t);
  }
  return out;
}

Chunking parse_chunking(const std::string& text) {
  Chunking c;
  auto bad = [&]() { fail(ErrorKind::ParseError, "bad chunking '" + text + "' (whole | event | k=N | random:SEED)"); };
  if (text == "whole") {
    c.mode = ChunkMode::Whole;
  } else if (text == "event") {
    c.mode = ChunkMode::Event;
  } else if (text.rfind("k=", 0) == 0) {
    c.mode = ChunkMode::Fixed;
    try {
      long long k = std::stoll(text.substr(2));
      if (k <= 0) bad();
      c.k = static_cast<size_t>(k);
    } catch (const std::logic_error&) {
      bad();
    }
  } else if (text.rfind("random:", 0) == 0) {
    c.mode = ChunkMode::Random;
    try {
      c.seed = std::stoull(text.substr(7));
    } catch (const std::logic_error&) {
      bad();
    }
  } else {
    bad();
  }
  return c;
}

namespace {

// The semicolon condition on the environment a chunk would deliver, from
// each channel's derivative (complete iff nullable) and event count (empty
// iff zero, as every event adds something).
bool order_ok(const BunchedContext& g, const std::map<std::string, size_t>& take,
              const std::map<std::string, StreamType>& after) {
  switch (g.kind()) {
    case CtxKind::Comma: return order_ok(g.left(), take, after) && order_ok(g.right(), take, after);
    case CtxKind::Semic: {
      if (!order_ok(g.left(), take, after) || !order_ok(g.right(), take, after)) return false;
      auto vl = ctx_var_set(g.left()), vr = ctx_var_set(g.right());
      bool left_done = std::all_of(vl.begin(), vl.end(), [&](auto& v) { return nullable(after.at(v)); });
      bool right_quiet = std::all_of(vr.begin(), vr.end(), [&](auto& v) { return !take.count(v) || !take.at(v); });
      return left_done || right_quiet;
    }
    default: return true;
  }
}

}  // namespace

std::vector<Environment> chunk_inputs(const ChannelEvents& in, const BunchedContext& g, const Chunking& how) {
  auto binds = binds_of(g);
  for (auto& [x, evs] : in) {
    bool known = std::any_of(binds.begin(), binds.end(), [&](auto& b) { return b.first == x; });
    if (!known) fail(ErrorKind::IllTypedEvent, "input channel " + x + " is not a parameter");
  }
  std::map<std::string, StreamType> cur;
  for (auto& [x, t] : binds) {
    cur[x] = t;
    auto it = in.find(x);
    if (it != in.end()) {
      try {
        deserialize(it->second, t);
      } catch (const Error& e) {
        fail(e.kind(), "channel " + x + ": " + e.detail());
      }
    }
  }

  // Delivery schedule: channel names in the order their events are offered.
  std::vector<std::string> schedule;
  std::mt19937_64 rng(how.seed);
  {
    std::map<std::string, size_t> left;
    size_t total = 0;
    for (auto& [x, t] : binds) {
      auto it = in.find(x);
      left[x] = it == in.end() ? 0 : it->second.size();
      total += left[x];
    }
    while (schedule.size() < total) {
      if (how.mode == ChunkMode::Random) {
        std::vector<std::string> live;
        for (auto& [x, n] : left)
          if (n) live.push_back(x);
        std::string x = live[coin(rng, static_cast<int>(live.size()))];
        schedule.push_back(x);
        --left[x];
      } else {
        for (auto& [x, t] : binds)
          if (left[x]) {
            schedule.push_back(x);
            --left[x];
          }
      }
    }
  }

  std::map<std::string, size_t> pos;  // next undelivered event per channel
  std::vector<size_t> pending(schedule.size());
  for (size_t i = 0; i < pending.size(); ++i) pending[i] = i;
  BunchedContext ctx = g;
  std::vector<Environment> out;

  auto env_for = [&](const std::map<std::string, size_t>& take) {
    Environment eta;
    for (auto& [x, t] : binds) {
      size_t n = take.count(x) ? take.at(x) : 0;
      if (n == 0) {
        eta[x] = emp(cur[x]);
        continue;
      }
      const auto& evs = in.at(x);
      std::vector<Event> slice(evs.begin() + pos[x], evs.begin() + pos[x] + n);
      eta[x] = deserialize(slice, cur[x]);
    }
    return eta;
  };

  if (schedule.empty()) {
    out.push_back(env_for({}));
    return out;
  }
  while (!pending.empty()) {
    size_t want = 0;
    switch (how.mode) {
      case ChunkMode::Whole: want = pending.size(); break;
      case ChunkMode::Event: want = 1; break;
      case ChunkMode::Fixed: want = how.k; break;
      case ChunkMode::Random: want = static_cast<size_t>(coin(rng, 4)); break;
    }
    std::map<std::string, size_t> take;
    std::map<std::string, StreamType> after = cur;  // derivative once this chunk's events are in
    std::set<std::string> blocked;
    std::vector<size_t> rest;
    size_t got = 0;
    for (size_t idx : pending) {
      const std::string& x = schedule[idx];
      if (got >= want || blocked.count(x)) {
        rest.push_back(idx);
        continue;
      }
      StreamType before = after[x];
      after[x] = event_deriv(in.at(x)[pos[x] + take[x]], before);
      ++take[x];
      if (!order_ok(ctx, take, after)) {
        --take[x];
        after[x] = before;
        blocked.insert(x);
        rest.push_back(idx);
        continue;
      }
      ++got;
    }
    if (got == 0 && want > 0)
      fail(ErrorKind::IllTypedEvent, "inputs cannot be delivered in order: a channel right of `;` has data "
                                     "while a channel to its left is incomplete");
    Environment eta = env_for(take);
    out.push_back(eta);
    ctx = deriv_ctx(eta, ctx);
    for (auto& [x, n] : take) pos[x] += n;
    cur = after;
    pending = rest;
  }
  return out;
}

Environment concat_inputs(const std::vector<Environment>& chunks, const BunchedContext& g) {
  Environment acc = emp_ctx(g);
  for (auto& eta : chunks) {
    for (auto& [x, p] : acc) {
      auto it = eta.find(x);
      if (it == eta.end()) fail(ErrorKind::MissingBinding, "chunk lacks " + x);
      p = concat_prefix(p, it->second);
    }
  }
  return acc;
}

std::vector<Split> two_way_splits(const Environment& eta, const BunchedContext& g, size_t limit, size_t samples,
                                  std::mt19937_64& rng) {
  auto binds = binds_of(g);
  std::vector<std::vector<Event>> evs;
  size_t count = 1;
  for (auto& [x, t] : binds) {
    evs.push_back(serialize(eta.at(x), t));
    count *= evs.back().size() + 1;
    if (count > limit) count = limit + 1;
  }
  auto make = [&](const std::vector<size_t>& cuts, std::vector<Split>& out) {
    Split sp;
    sp.cuts = cuts;
    for (size_t i = 0; i < binds.size(); ++i) {
      auto& [x, t] = binds[i];
      std::vector<Event> a(evs[i].begin(), evs[i].begin() + cuts[i]);
      std::vector<Event> b(evs[i].begin() + cuts[i], evs[i].end());
      sp.first[x] = deserialize(a, t);
      sp.second[x] = deserialize(b, events_deriv(a, t));
    }
    if (!env_has_type(sp.first, g)) return;
    if (!env_has_type(sp.second, deriv_ctx(sp.first, g))) return;
    out.push_back(std::move(sp));
  };
  std::vector<Split> out;
  std::vector<size_t> cuts(binds.size(), 0);
  if (count <= limit) {
    while (true) {
      make(cuts, out);
      size_t i = 0;
      while (i < cuts.size() && cuts[i] == evs[i].size()) cuts[i++] = 0;
      if (i == cuts.size()) break;
      ++cuts[i];
    }
  } else {
    for (size_t n = 0; n < samples; ++n) {
      for (size_t i = 0; i < binds.size(); ++i)
        cuts[i] = std::uniform_int_distribution<size_t>(0, evs[i].size())(rng);
      make(cuts, out);
    }
  }
  return out;
}

Comparison compare_with_batch(const Term& e, const BunchedContext& g, const StreamType& s,
                              const std::vector<Environment>& chunks, const RunOptions& opts) {
  Comparison c;
  Environment total = concat_inputs(chunks, g);
  StepResult batch = step(total, e, opts.fuel_per_step);
  RunResult inc = run_incremental(e, g, s, chunks, opts);
  Prefix joined = concat_outputs(inc.outputs, s);
  if (joined != batch.output) {
    c.ok = false;
    c.detail = "outputs differ: incremental " + joined.str() + " vs batch " + batch.output.str();
    return c;
  }
  if (inc.residual != batch.residual) {
    c.ok = false;
    c.detail = "residuals differ: incremental " + inc.residual.str() + " vs batch " + batch.residual.str();
  }
  return c;
}

Comparison check_determinism(const Term& e, const BunchedContext& g, const StreamType& s, const Environment& eta,
                             std::int64_t fuel) {
  Comparison c;
  if (g.kind() != CtxKind::Comma) return c;
  auto order = [&](const BunchedContext& first, const BunchedContext& second) {
    Environment one = restrict(eta, ctx_var_set(first));
    Environment pad = emp_ctx(second);
    one.insert(pad.begin(), pad.end());
    Environment two = emp_ctx(deriv_ctx(one, g));
    for (auto& [x, p] : restrict(eta, ctx_var_set(second))) two[x] = p;
    StepResult a = step(one, e, fuel);
    StepResult b = step(two, a.residual, fuel);
    return std::make_pair(concat_prefix(a.output, b.output), b.residual);
  };
  auto [p1, e1] = order(g.left(), g.right());
  auto [p2, e2] = order(g.right(), g.left());
  (void)s;
  if (p1 != p2) {
    c.ok = false;
    c.detail = "outputs differ by order: " + p1.str() + " vs " + p2.str();
  } else if (e1 != e2) {
    c.ok = false;
    c.detail = "residuals differ by order: " + e1.str() + " vs " + e2.str();
  }
  return c;
}

FuzzReport fuzz_entry(const Term& e, const BunchedContext& g, const StreamType& s, size_t trials,
                      std::uint64_t seed, int budget, const RunOptions& opts) {
  // Trials are independent; each writes only its own slot.
  std::vector<std::string> found(trials);
  auto trial = [&](size_t t) {
    std::mt19937_64 rng(seed * 1000003u + t);
    bool maximal = coin(rng, 2) == 0;
    Environment eta = random_env(g, rng, budget, maximal);
    Chunking how;
    how.mode = ChunkMode::Random;
    how.seed = rng();
    std::string what;
    try {
      auto chunks = chunk_inputs(env_to_events(eta, g), g, how);
      Comparison c = compare_with_batch(e, g, s, chunks, opts);
      if (c.ok) c = check_determinism(e, g, s, eta, opts.fuel_per_step);
      if (!c.ok) what = c.detail;
    } catch (const Error& err) {
      if (err.kind() == ErrorKind::FuelExhausted || err.kind() == ErrorKind::DivByZero) return;
      what = err.what();
    }
    if (!what.empty())
      found[t] = "seed " + std::to_string(seed) + " trial " + std::to_string(t) + " input " + env_str(eta) +
                 " chunking random:" + std::to_string(how.seed) + ": " + what;
  };

  std::atomic<size_t> next{0};
  std::exception_ptr crash;
  std::atomic<bool> crashed{false};
  auto worker = [&] {
    for (size_t t; !crashed && (t = next++) < trials;) {
      try {
        trial(t);
      } catch (...) {
        if (!crashed.exchange(true)) crash = std::current_exception();
      }
    }
  };
  size_t n = std::clamp<size_t>(std::thread::hardware_concurrency(), 1, std::max<size_t>(trials, 1));
  std::vector<std::thread> pool;
  for (size_t i = 1; i < n; ++i) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  if (crash) std::rethrow_exception(crash);

  FuzzReport rep;
  rep.trials = trials;
  for (auto& f : found) {
    if (f.empty()) continue;
    ++rep.failures;
    if (rep.first_failure.empty()) rep.first_failure = f;
  }
  return rep;
}

}  // namespace lst
