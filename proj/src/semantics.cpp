#include "lst/semantics.hpp"

#include <pthread.h>

#include <algorithm>
#include <exception>
#include <optional>
#include <unordered_set>
#include <vector>

#include "lst/typecheck.hpp"

namespace lst {

namespace {

[[noreturn]] void fault(const std::string& msg) { fail(ErrorKind::RuntimeTypeFault, msg); }

class Interp {
 public:
  Interp(std::int64_t fuel, size_t stack_budget) : start_(fuel), left_(fuel), budget_(stack_budget) {
    char here;
    base_ = &here;
  }

  std::int64_t used() const { return start_ - left_; }

  std::pair<Prefix, Term> run(const Environment& eta, const Term& e) {
    char here;
    if (static_cast<size_t>(base_ - &here) > budget_)
      fail(ErrorKind::FuelExhausted, "recursion too deep for the interpreter stack");
    switch (e.kind()) {
      case TermKind::Sink: return {Prefix::eps_emp(), tm::sink()};
      case TermKind::Unit: return {Prefix::one_full(), tm::sink()};
      case TermKind::IntLit: return {Prefix::int_full(e->n), tm::sink()};
      case TermKind::BoolLit: return {Prefix::bool_full(e->b), tm::sink()};
      case TermKind::Var: return {get(eta, e->x, e), e};
      case TermKind::ParPair: {
        auto [p1, e1] = run(eta, e->kids[0]);
        auto [p2, e2] = run(eta, e->kids[1]);
        return {Prefix::par(p1, p2), tm::par(e1, e2)};
      }
      case TermKind::CatPair: {
        auto [p1, e1] = run(eta, e->kids[0]);
        if (!is_maximal(p1)) return {Prefix::cat_a(p1), tm::cat(e1, e->kids[1])};
        auto [p2, e2] = run(eta, e->kids[1]);
        return {Prefix::cat_b(p1, p2), e2};
      }
      case TermKind::Cons: {
        auto [p1, e1] = run(eta, e->kids[0]);
        if (!is_maximal(p1)) return {Prefix::stp_a(p1), tm::cat(e1, e->kids[1])};
        auto [p2, e2] = run(eta, e->kids[1]);
        return {Prefix::stp_b(p1, p2), e2};
      }
      case TermKind::Nil: return {Prefix::star_done(), tm::sink()};
      case TermKind::Inl: {
        auto [p, e1] = run(eta, e->kids[0]);
        return {Prefix::sum_a(p), e1};
      }
      case TermKind::Inr: {
        auto [p, e1] = run(eta, e->kids[0]);
        return {Prefix::sum_b(p), e1};
      }
      case TermKind::LetPar: {
        const Prefix& pz = get(eta, e->z, e);
        if (pz.kind() != PKind::ParP) fault("let-par on " + e->z + " received " + pz.str());
        Environment inner = eta;
        inner[e->x] = pz.a();
        inner[e->y] = pz.b();
        auto [p, body] = run(inner, e->kids[0]);
        return {p, tm::letpar(e->x, e->y, e->z, body)};
      }
      case TermKind::LetCat: {
        const Prefix& pz = get(eta, e->z, e);
        Environment inner = eta;
        if (pz.kind() == PKind::CatPA) {
          if (!e->ann1) fault("let-cat without its annotation");
          inner[e->x] = pz.a();
          inner[e->y] = emp(*e->ann1);
          auto [p, body] = run(inner, e->kids[0]);
          return {p, tm::letcat(e->ann1, e->x, e->y, e->z, body)};
        }
        if (pz.kind() != PKind::CatPB) fault("let-cat on " + e->z + " received " + pz.str());
        inner[e->x] = pz.a();
        inner[e->y] = pz.b();
        auto [p, body] = run(inner, e->kids[0]);
        return {p, tm::let(e->x, sink_term(pz.a()), rename_var(body, e->y, e->z))};
      }
      case TermKind::SumCase: {
        Environment full = absorb(eta, e);
        const Prefix& pz = get(full, e->z, e);
        switch (pz.kind()) {
          case PKind::SumPEmp: {
            if (!e->ann1) fault("sum case without its result annotation");
            return {emp(*e->ann1), with_buffer(e, full)};
          }
          case PKind::SumPA: {
            full[e->x] = pz.a();
            auto [p, body] = run(full, e->kids[0]);
            return {p, rename_var(body, e->x, e->z)};
          }
          case PKind::SumPB: {
            full[e->y] = pz.a();
            auto [p, body] = run(full, e->kids[1]);
            return {p, rename_var(body, e->y, e->z)};
          }
          default: fault("sum case on " + e->z + " received " + pz.str());
        }
      }
      case TermKind::StarCase: {
        Environment full = absorb(eta, e);
        const Prefix& pz = get(full, e->z, e);
        switch (pz.kind()) {
          case PKind::StarEmp: {
            if (!e->ann2) fault("star case without its result annotation");
            return {emp(*e->ann2), with_buffer(e, full)};
          }
          case PKind::StarDone: return run(full, e->kids[0]);
          case PKind::StpA: {
            if (!e->ann1) fault("star case without its element annotation");
            StreamType star = StreamType::star(*e->ann1);
            full[e->x] = pz.a();
            full[e->y] = Prefix::star_emp();
            auto [p, body] = run(full, e->kids[1]);
            return {p, tm::letcat(star, e->x, e->y, e->z, body)};
          }
          case PKind::StpB: {
            full[e->x] = pz.a();
            full[e->y] = pz.b();
            auto [p, body] = run(full, e->kids[1]);
            return {p, tm::let(e->x, sink_term(pz.a()), rename_var(body, e->y, e->z))};
          }
          default: fault("star case on " + e->z + " received " + pz.str());
        }
      }
      case TermKind::Wait: {
        Environment full = absorb(eta, e);
        const Prefix& px = get(full, e->x, e);
        if (!is_maximal(px)) {
          if (!e->ann1) fault("wait without its result annotation");
          return {emp(*e->ann1), with_buffer(e, full)};
        }
        auto [path, s] = ctx_lookup(e->buf->ctx, e->x);
        (void)path;
        HistSubst theta{{e->y, flatten_prefix(px, s)}};
        return run(full, hist_subst_term(e->kids[0], theta));
      }
      case TermKind::Let: {
        auto [p1, e1] = run(eta, e->kids[0]);
        Environment inner = eta;
        inner[e->x] = p1;
        auto [p2, e2] = run(inner, e->kids[1]);
        return {p2, tm::let(e->x, e1, e2)};
      }
      case TermKind::HistPgm: {
        if (!e->ann1) fault("historical program without its type");
        Prefix p = value_to_prefix(hist_eval(e->m), *e->ann1);
        return {p, sink_term(p)};
      }
      case TermKind::Fix: {
        if (left_ <= 0) fail(ErrorKind::FuelExhausted, "fuel ran out unfolding " + e->def->name);
        // Re-entering an identical unfold inside itself can only end when
        // the fuel does, so stop now instead of recursing that deep.
        size_t key = fingerprint(eta, e);
        if (keys_.count(key))
          for (auto& f : frames_)
            if (f.key == key && f.term->get()->def == e->def && *f.env == eta && *f.term == e)
              fail(ErrorKind::FuelExhausted, "fuel ran out unfolding " + e->def->name + " (unguarded recursion)");
        Frame guard(*this, {key, &eta, &e});
        --left_;
        const RecDef& def = *e->def;
        if (e->hargs.size() != def.omega.size()) fault("historical arity mismatch for " + def.name);
        HistSubst theta;
        for (size_t i = 0; i < e->hargs.size(); ++i) theta[def.omega[i].first] = hist_eval(e->hargs[i]);
        Term body = hist_subst_term(fix_subst(def.body, e->def), theta);
        return run(eta, tm::argslet(def.gamma, e->args, body));
      }
      case TermKind::Rec: fault("rec reached the interpreter outside a fix");
      case TermKind::ArgsLet: {
        auto [env, args] = run_args(eta, e->args, e->gamma);
        auto [p, body] = run(env, e->kids[0]);
        return {p, tm::argslet(deriv_ctx(env, e->gamma), args, body)};
      }
    }
    fault("unknown term");
  }

  std::pair<Environment, Args> run_args(const Environment& eta, const Args& a, const BunchedContext& g) {
    switch (a.kind()) {
      case ArgsKind::Emp:
        if (g.kind() != CtxKind::Empty) fault("empty arguments for " + g.str());
        return {Environment{}, a};
      case ArgsKind::Sng: {
        if (g.kind() != CtxKind::Bind) fault("single argument for " + g.str());
        auto [p, e] = run(eta, a->e);
        return {Environment{{g.var(), p}}, ar::sng(e)};
      }
      case ArgsKind::Comma: {
        if (g.kind() != CtxKind::Comma) fault("parallel arguments for " + g.str());
        auto [l, a1] = run_args(eta, a->a1, g.left());
        auto [r, a2] = run_args(eta, a->a2, g.right());
        l.insert(r.begin(), r.end());
        return {l, ar::comma(a1, a2)};
      }
      case ArgsKind::Semic1: {
        if (g.kind() != CtxKind::Semic) fault("sequential arguments for " + g.str());
        auto [l, a1] = run_args(eta, a->a1, g.left());
        if (!maximal_on(l, ctx_var_set(g.left()))) {
          Environment pad = emp_ctx(g.right());
          l.insert(pad.begin(), pad.end());
          return {l, ar::semic1(a1, a->a2)};
        }
        auto [r, a2] = run_args(eta, a->a2, g.right());
        l.insert(r.begin(), r.end());
        return {l, ar::semic2(a2)};
      }
      case ArgsKind::Semic2: {
        if (g.kind() != CtxKind::Semic) fault("sequential arguments for " + g.str());
        auto [r, a2] = run_args(eta, a->a1, g.right());
        Environment out = emp_ctx(g.left());
        out.insert(r.begin(), r.end());
        return {out, ar::semic2(a2)};
      }
    }
    fault("unknown arguments");
  }

 private:
  static const Prefix& get(const Environment& eta, const std::string& x, const Term& e) {
    auto it = eta.find(x);
    if (it == eta.end()) fault("no input for " + x + " while running " + e.str());
    return it->second;
  }

  // η'' = buffer · η on the buffer's variables.
  static Environment absorb(const Environment& eta, const Term& e) {
    if (!e->buf) fault("buffering term without a buffer: " + e.str());
    Environment out;
    for (auto& [k, p] : e->buf->env) {
      auto it = eta.find(k);
      if (it == eta.end()) fault("no input for buffered variable " + k);
      auto c = try_concat_prefix(p, it->second);
      if (!c) fault("input " + it->second.str() + " does not extend buffered " + p.str() + " for " + k);
      out.emplace(k, *c);
    }
    return out;
  }

  static Term with_buffer(const Term& e, const Environment& env) {
    TermNode n = *e;
    n.buf = Buffer{e->buf->ctx, env};
    return tm::make(std::move(n));
  }

  struct Active {
    size_t key;
    const Environment* env;
    const Term* term;
  };
  struct Frame {
    Interp& in;
    Frame(Interp& i, Active a) : in(i) {
      in.frames_.push_back(a);
      in.keys_.insert(a.key);
    }
    ~Frame() {
      in.keys_.erase(in.keys_.find(in.frames_.back().key));
      in.frames_.pop_back();
    }
  };
  static size_t fingerprint(const Environment& eta, const Term& e) {
    size_t h = std::hash<std::string>{}(e.str());
    for (auto& [x, p] : eta) h = h * 1000003u ^ std::hash<std::string>{}(x) ^ (p.hash() << 1);
    return h;
  }
  std::vector<Active> frames_;  // active fix unfolds
  std::unordered_multiset<size_t> keys_;
  std::int64_t start_;
  std::int64_t left_;
  size_t budget_;
  const char* base_ = nullptr;
};

// Nesting grows with fix unfolds, so each step gets a thread whose stack is
// sized from the fuel bound. Past the cap the depth guard in run reports
// FuelExhausted instead of overflowing.
constexpr size_t kMinStack = size_t{16} << 20;
constexpr size_t kMaxStack = size_t{256} << 20;
constexpr size_t kStackPerFuel = size_t{4} << 10;
constexpr size_t kStackMargin = size_t{4} << 20;

template <class R>
R on_big_stack(std::int64_t fuel, const std::function<R(size_t)>& body) {
  size_t want = std::clamp(static_cast<size_t>(std::max<std::int64_t>(fuel, 0)) * kStackPerFuel + kMinStack,
                           kMinStack, kMaxStack);
  struct Job {
    const std::function<R(size_t)>* body;
    size_t budget;
    std::optional<R> out;
    std::exception_ptr err;
  };
  for (size_t size = want; size >= kMinStack; size /= 2) {
    Job job{&body, size - kStackMargin, std::nullopt, nullptr};
    pthread_attr_t attr;
    pthread_attr_init(&attr);
    pthread_attr_setstacksize(&attr, size);
    pthread_t th;
    int rc = pthread_create(
        &th, &attr,
        [](void* arg) -> void* {
          auto* j = static_cast<Job*>(arg);
          try {
            j->out.emplace((*j->body)(j->budget));
          } catch (...) {
            j->err = std::current_exception();
          }
          return nullptr;
        },
        &job);
    pthread_attr_destroy(&attr);
    if (rc != 0) continue;  // could not map that much stack; try smaller
    pthread_join(th, nullptr);
    if (job.err) std::rethrow_exception(job.err);
    return std::move(*job.out);
  }
  fail(ErrorKind::FuelExhausted, "no stack available for the interpreter");
}

Error at_step(const Error& e, size_t i) { return Error(e.kind(), "step " + std::to_string(i) + ": " + e.detail()); }

}  // namespace

StepResult step(const Environment& eta, const Term& e, std::int64_t fuel) {
  return on_big_stack<StepResult>(fuel, [&](size_t budget) {
    Interp in(fuel, budget);
    auto [p, r] = in.run(eta, e);
    return StepResult{p, r, in.used()};
  });
}

ArgsStepResult step_args(const Environment& eta, const Args& a, const BunchedContext& target, std::int64_t fuel) {
  return on_big_stack<ArgsStepResult>(fuel, [&](size_t budget) {
    Interp in(fuel, budget);
    auto [env, r] = in.run_args(eta, a, target);
    return ArgsStepResult{env, r, in.used()};
  });
}

RunResult run_incremental(const Term& e, const BunchedContext& gamma, const StreamType& s,
                          const std::vector<Environment>& inputs, const RunOptions& opts) {
  RunResult out{{}, e, gamma, s};
  TypeChecker tc(false);
  for (size_t i = 0; i < inputs.size(); ++i) {
    try {
      const Environment& eta = inputs[i];
      if (!env_has_type(eta, out.ctx))
        fail(ErrorKind::IllTyped, "input " + env_str(eta) + " does not type at " + out.ctx.str());
      StepResult r = opts.stepper ? opts.stepper(eta, out.residual, opts.fuel_per_step)
                                   : step(eta, out.residual, opts.fuel_per_step);
      if (!prefix_has_type(r.output, out.type))
        fail(ErrorKind::RuntimeTypeFault, "output " + r.output.str() + " does not type at " + out.type.str());
      BunchedContext next_ctx = deriv_ctx(eta, out.ctx);
      StreamType next_type = deriv_type(r.output, out.type);
      if (opts.debug_types) {
        try {
          tc.check({}, next_ctx, std::nullopt, r.residual, next_type);
        } catch (const Error& err) {
          if (!err.is_typing()) throw;
          fail(ErrorKind::RuntimeTypeFault, "residual " + r.residual.str() + " fails to check at " +
                                                next_ctx.str() + " |- " + next_type.str() + ": " + err.what());
        }
      }
      out.outputs.push_back(r.output);
      out.residual = r.residual;
      out.ctx = next_ctx;
      out.type = next_type;
    } catch (const Error& err) {
      throw at_step(err, i);
    }
  }
  return out;
}

Prefix run_batch_oracle(const Term& e, const Environment& total, std::int64_t fuel) {
  return step(total, e, fuel).output;
}

Prefix concat_outputs(const std::vector<Prefix>& outs, const StreamType& s) {
  Prefix acc = emp(s);
  for (auto& p : outs) acc = concat_prefix(acc, p);
  return acc;
}

}  // namespace lst
