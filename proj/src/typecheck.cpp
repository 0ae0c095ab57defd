#include "lst/typecheck.hpp"

#include <algorithm>

namespace lst {

namespace {

bool contains_star(const StreamType& s) {
  switch (s.kind()) {
    case TypeKind::Star: return true;
    case TypeKind::Cat:
    case TypeKind::Plus:
    case TypeKind::Par: return contains_star(s.left()) || contains_star(s.right());
    default: return false;
  }
}

void star_vars(const NormCtx& c, std::vector<std::string>& out) {
  if (c.kind == NormCtx::Kind::Var) {
    if (contains_star(c.type)) out.push_back(c.name);
    return;
  }
  for (auto& k : c.kids) star_vars(k, out);
}

// Star-typed inputs that arrive alongside or before z and so must be held
// while a case on z waits for its tag.
void buffered_inputs(const NormCtx& c, const std::string& z, std::vector<std::string>& out) {
  if (c.kind == NormCtx::Kind::Var || c.kind == NormCtx::Kind::Empty) return;
  for (size_t i = 0; i < c.kids.size(); ++i) {
    if (!c.kids[i].has(z)) continue;
    for (size_t j = 0; j < c.kids.size(); ++j) {
      if (j == i) continue;
      if (c.kind == NormCtx::Kind::Par || j < i) star_vars(c.kids[j], out);
    }
    buffered_inputs(c.kids[i], z, out);
  }
}

HistContext extend(const HistContext& om, const std::string& x, const HistType& a) {
  HistContext out;
  for (auto& b : om)
    if (b.first != x) out.push_back(b);
  out.emplace_back(x, a);
  return out;
}

}  // namespace

StreamType default_stream_type(const HistType& a) {
  switch (a.kind()) {
    case HistKind::Unit: return StreamType::one();
    case HistKind::Int: return StreamType::int_();
    case HistKind::Bool: return StreamType::bool_();
    case HistKind::Prod: return StreamType::cat(default_stream_type(a.a()), default_stream_type(a.b()));
    case HistKind::Sum: return StreamType::plus(default_stream_type(a.a()), default_stream_type(a.b()));
    case HistKind::List: return StreamType::star(default_stream_type(a.a()));
  }
  return StreamType::one();
}

struct TypeChecker::Impl {
  bool annotating;
  struct DefInfo {
    RecDefP raw;  // keeps the key alive
    RecDefP checked;
    Inert i;
  };
  std::map<const RecDef*, DefInfo> defs;
  std::set<const RecDef*> in_progress;
  std::vector<std::string> warnings;
  Term last;

  struct Out {
    Term term;
    StreamType type;
    Inert i;
  };

  explicit Impl(bool a) : annotating(a) {}

  void warn(const std::string& w) {
    if (std::find(warnings.begin(), warnings.end(), w) == warnings.end()) warnings.push_back(w);
  }

  static void expect(const StreamType& got, const std::optional<StreamType>& exp, const Term& e) {
    if (exp && *exp != got)
      fail(ErrorKind::TypeMismatch, "expected " + exp->str() + " but " + e.str() + " has type " + got.str());
  }

  static NormCtx scope(const NormCtx& c, const VarSet& fv, const Term& e) {
    for (auto& v : fv)
      if (!c.has(v)) fail(ErrorKind::UnboundVar, "variable " + v + " of " + e.str() + " is not in scope");
    return c.restrict(fv);
  }

  static const StreamType& lookup(const NormCtx& c, const std::string& x) {
    const StreamType* t = c.lookup(x);
    if (!t) fail(ErrorKind::UnboundVar, "variable " + x + " is not in scope");
    return *t;
  }

  Buffer resolve_buffer(const NormCtx& c, const std::optional<Buffer>& buf, const Term& e) {
    if (!buf) return Buffer{c.to_ctx(), emp_ctx(c.to_ctx())};
    if (!env_has_type(buf->env, buf->ctx))
      fail(ErrorKind::BufferIllTyped, "buffer " + env_str(buf->env) + " does not type at " + buf->ctx.str());
    NormCtx now;
    try {
      now = NormCtx::from(deriv_ctx(buf->env, buf->ctx));
    } catch (const Error&) {
      fail(ErrorKind::BufferIllTyped, "buffer of " + e.str() + " has no derivative");
    }
    if (now != c)
      fail(ErrorKind::BufferIllTyped,
           "buffer of " + e.str() + " expects remaining inputs " + now.str() + " but has " + c.str());
    return *buf;
  }

  void note_buffering(const NormCtx& pre, const std::string& z) {
    std::vector<std::string> vs;
    buffered_inputs(pre, z, vs);
    if (vs.empty()) return;
    std::string names;
    for (auto& v : vs) names += (names.empty() ? "" : ", ") + v;
    warn("case on " + z + " may buffer unboundedly many events of " + names);
  }

  Out check(const HistContext& om, const NormCtx& ctx, const std::optional<RecSig>& sig, const Term& e,
            const std::optional<StreamType>& exp) {
    NormCtx c = scope(ctx, e.fv(), e);
    switch (e.kind()) {
      case TermKind::Sink:
        expect(StreamType::eps(), exp, e);
        return {e, StreamType::eps(), Inert::I};
      case TermKind::Unit:
        expect(StreamType::one(), exp, e);
        return {e, StreamType::one(), Inert::J};
      case TermKind::IntLit:
        expect(StreamType::int_(), exp, e);
        return {e, StreamType::int_(), Inert::J};
      case TermKind::BoolLit:
        expect(StreamType::bool_(), exp, e);
        return {e, StreamType::bool_(), Inert::J};
      case TermKind::Var: {
        StreamType t = lookup(c, e->x);
        expect(t, exp, e);
        return {e, t, Inert::I};
      }
      case TermKind::ParPair: {
        std::optional<StreamType> el, er;
        if (exp) {
          if (exp->kind() != TypeKind::Par)
            fail(ErrorKind::TypeMismatch, "expected " + exp->str() + " but found a parallel pair");
          el = exp->left();
          er = exp->right();
        }
        Out a = check(om, c, sig, e->kids[0], el);
        Out b = check(om, c, sig, e->kids[1], er);
        return {rebuild2(e, a.term, b.term), StreamType::par(a.type, b.type), max(a.i, b.i)};
      }
      case TermKind::CatPair: {
        std::optional<StreamType> el, er;
        if (exp) {
          if (exp->kind() != TypeKind::Cat)
            fail(ErrorKind::TypeMismatch, "expected " + exp->str() + " but found a sequential pair");
          el = exp->left();
          er = exp->right();
        }
        auto [c1, c2] = split_seq(c, e->kids[0].fv(), e->kids[1].fv());
        Out a = check(om, c1, sig, e->kids[0], el);
        Out b = check(om, c2, sig, e->kids[1], er);
        Inert i = (a.i == Inert::I && !nullable(a.type)) ? Inert::I : Inert::J;
        return {rebuild2(e, a.term, b.term), StreamType::cat(a.type, b.type), i};
      }
      case TermKind::Cons: {
        std::optional<StreamType> el;
        if (exp) {
          if (exp->kind() != TypeKind::Star)
            fail(ErrorKind::TypeMismatch, "expected " + exp->str() + " but found a cons");
          el = exp->body();
        }
        auto [c1, c2] = split_seq(c, e->kids[0].fv(), e->kids[1].fv());
        Out a = check(om, c1, sig, e->kids[0], el);
        Out b = check(om, c2, sig, e->kids[1], StreamType::star(a.type));
        return {rebuild2(e, a.term, b.term), StreamType::star(a.type), Inert::J};
      }
      case TermKind::Nil: {
        std::optional<StreamType> elem = e->ann1;
        if (exp) {
          if (exp->kind() != TypeKind::Star) fail(ErrorKind::TypeMismatch, "expected " + exp->str() + " but found nil");
          if (elem && *elem != exp->body()) expect(StreamType::star(*elem), exp, e);
          elem = exp->body();
        }
        if (!elem) fail(ErrorKind::TypeMismatch, "cannot determine the element type of nil");
        Term out = e;
        if (annotating && !e->ann1) out = tm::nil(elem);
        return {out, StreamType::star(*elem), Inert::J};
      }
      case TermKind::Inl:
      case TermKind::Inr: {
        bool left = e.kind() == TermKind::Inl;
        std::optional<StreamType> mine, other = e->ann1;
        if (exp) {
          if (exp->kind() != TypeKind::Plus)
            fail(ErrorKind::TypeMismatch, "expected " + exp->str() + " but found an injection");
          mine = left ? exp->left() : exp->right();
          StreamType oth = left ? exp->right() : exp->left();
          if (other && *other != oth) fail(ErrorKind::TypeMismatch, "injection annotation disagrees with " + exp->str());
          other = oth;
        }
        if (!other) fail(ErrorKind::TypeMismatch, "cannot determine the other summand of " + e.str());
        Out a = check(om, c, sig, e->kids[0], mine);
        StreamType t = left ? StreamType::plus(a.type, *other) : StreamType::plus(*other, a.type);
        Term out = e;
        if (annotating) out = left ? tm::inl(a.term, other) : tm::inr(a.term, other);
        return {out, t, Inert::J};
      }
      case TermKind::LetPar: {
        const StreamType& zt = lookup(c, e->z);
        if (zt.kind() != TypeKind::Par)
          fail(ErrorKind::TypeMismatch, "let-par on " + e->z + " of non-parallel type " + zt.str());
        NormCtx inner = c.replace(e->z, NormCtx::par({NormCtx::var(e->x, zt.left()), NormCtx::var(e->y, zt.right())}));
        Out b = check(om, inner, sig, e->kids[0], exp);
        Term out = e;
        if (annotating) out = tm::letpar(e->x, e->y, e->z, b.term);
        return {out, b.type, b.i};
      }
      case TermKind::LetCat: {
        const StreamType& zt = lookup(c, e->z);
        if (zt.kind() != TypeKind::Cat)
          fail(ErrorKind::TypeMismatch, "let-cat on " + e->z + " of non-sequential type " + zt.str());
        if (e->ann1 && *e->ann1 != zt.right())
          fail(ErrorKind::TypeMismatch, "let-cat annotation " + e->ann1->str() + " disagrees with " + zt.str());
        NormCtx inner = c.replace(e->z, NormCtx::seq({NormCtx::var(e->x, zt.left()), NormCtx::var(e->y, zt.right())}));
        Out b = check(om, inner, sig, e->kids[0], exp);
        Term out = e;
        if (annotating) out = tm::letcat(zt.right(), e->x, e->y, e->z, b.term);
        return {out, b.type, b.i};
      }
      case TermKind::SumCase: {
        Buffer buf = resolve_buffer(c, e->buf, e);
        NormCtx pre = NormCtx::from(buf.ctx);
        const StreamType& zt = lookup(pre, e->z);
        if (zt.kind() != TypeKind::Plus)
          fail(ErrorKind::TypeMismatch, "sum case on " + e->z + " of non-sum type " + zt.str());
        note_buffering(pre, e->z);
        std::optional<StreamType> r = e->ann1;
        if (exp) {
          if (r && *r != *exp) expect(*r, exp, e);
          r = exp;
        }
        Out a = check(om, pre.replace(e->z, NormCtx::var(e->x, zt.left())), sig, e->kids[0], r);
        Out b = check(om, pre.replace(e->z, NormCtx::var(e->y, zt.right())), sig, e->kids[1], a.type);
        auto it = buf.env.find(e->z);
        Inert i = (it != buf.env.end() && it->second.kind() == PKind::SumPEmp) ? Inert::I : Inert::J;
        Term out = e;
        if (annotating) out = tm::sumcase(a.type, buf, e->z, e->x, a.term, e->y, b.term);
        return {out, a.type, i};
      }
      case TermKind::StarCase: {
        Buffer buf = resolve_buffer(c, e->buf, e);
        NormCtx pre = NormCtx::from(buf.ctx);
        const StreamType& zt = lookup(pre, e->z);
        if (zt.kind() != TypeKind::Star)
          fail(ErrorKind::TypeMismatch, "star case on " + e->z + " of non-star type " + zt.str());
        if (e->ann1 && *e->ann1 != zt.body())
          fail(ErrorKind::TypeMismatch, "star case annotation " + e->ann1->str() + " disagrees with " + zt.str());
        note_buffering(pre, e->z);
        std::optional<StreamType> r = e->ann2;
        if (exp) {
          if (r && *r != *exp) expect(*r, exp, e);
          r = exp;
        }
        Out a = check(om, pre.replace(e->z, NormCtx::empty()), sig, e->kids[0], r);
        NormCtx cons_ctx = pre.replace(e->z, NormCtx::seq({NormCtx::var(e->x, zt.body()), NormCtx::var(e->y, zt)}));
        Out b = check(om, cons_ctx, sig, e->kids[1], a.type);
        auto it = buf.env.find(e->z);
        Inert i = (it != buf.env.end() && it->second.kind() == PKind::StarEmp) ? Inert::I : Inert::J;
        Term out = e;
        if (annotating) out = tm::starcase(zt.body(), a.type, buf, e->z, a.term, e->x, e->y, b.term);
        return {out, a.type, i};
      }
      case TermKind::Wait: {
        Buffer buf = resolve_buffer(c, e->buf, e);
        NormCtx pre = NormCtx::from(buf.ctx);
        const StreamType& s = lookup(pre, e->x);
        std::optional<StreamType> t = e->ann1;
        if (exp) {
          if (t && *t != *exp) expect(*t, exp, e);
          t = exp;
        }
        Out b = check(extend(om, e->y, flatten_type(s)), pre.replace(e->x, NormCtx::empty()), sig, e->kids[0], t);
        auto it = buf.env.find(e->x);
        bool done = it != buf.env.end() && is_maximal(it->second);
        Inert i = (!done && !nullable(s)) ? Inert::I : Inert::J;
        Term out = e;
        if (annotating) out = tm::wait_as(buf, b.type, e->x, e->y, b.term);
        return {out, b.type, i};
      }
      case TermKind::HistPgm: {
        std::optional<StreamType> s = e->ann1;
        if (exp) {
          if (s && *s != *exp) expect(*s, exp, e);
          s = exp;
        }
        if (!s) s = default_stream_type(hist_typecheck(om, e->m));
        hist_check(om, e->m, flatten_type(*s));
        Term out = e;
        if (annotating) out = tm::hist(e->m, s);
        return {out, *s, Inert::J};
      }
      case TermKind::Let: return check_let(om, c, sig, e, exp);
      case TermKind::Fix: {
        const RecDefP& def = e->def;
        check_hargs(om, e->hargs, def->omega, def->name);
        auto [checked, idef] = check_def(def);
        auto [args, ia] = check_args(om, c, sig, e->args, def->gamma);
        expect(def->ret, exp, e);
        Term out = e;
        if (annotating) out = tm::fix(checked, e->hargs, args);
        return {out, def->ret, max(idef, ia)};
      }
      case TermKind::Rec: {
        if (!sig) fail(ErrorKind::RecOutsideFix, "rec outside of a recursive definition");
        check_hargs(om, e->hargs, sig->omega, "rec");
        auto [args, ia] = check_args(om, c, sig, e->args, sig->gamma);
        if (ia == Inert::J && sig->i == Inert::I)
          fail(ErrorKind::InertnessViolation, "jumpy arguments to an inert recursive call");
        expect(sig->ret, exp, e);
        Term out = e;
        if (annotating) out = tm::rec(e->hargs, args);
        return {out, sig->ret, sig->i};
      }
      case TermKind::ArgsLet: {
        auto [args, ia] = check_args(om, c, sig, e->args, e->gamma);
        Out b = check(om, NormCtx::from(e->gamma), sig, e->kids[0], exp);
        Term out = e;
        if (annotating) out = tm::argslet(e->gamma, args, b.term);
        return {out, b.type, max(ia, b.i)};
      }
    }
    fail(ErrorKind::TypeMismatch, "unknown term");
  }

  Term rebuild2(const Term& e, const Term& a, const Term& b) {
    if (!annotating) return e;
    TermNode n = *e;
    n.kids = {a, b};
    return tm::make(std::move(n));
  }

  static void check_hargs(const HistContext& om, const std::vector<HistTerm>& hargs, const HistContext& want,
                          const std::string& who) {
    if (hargs.size() != want.size())
      fail(ErrorKind::SigMismatch, who + " expects " + std::to_string(want.size()) + " historical arguments, got " +
                                       std::to_string(hargs.size()));
    for (size_t i = 0; i < hargs.size(); ++i) hist_check(om, hargs[i], want[i].second);
  }

  Out check_let(const HistContext& om, const NormCtx& c, const std::optional<RecSig>& sig, const Term& e,
                const std::optional<StreamType>& exp) {
    const std::string& x = e->x;
    const Term& e1 = e->kids[0];
    const Term& e2 = e->kids[1];
    Out a = check(om, c.restrict(e1.fv()), sig, e1, std::nullopt);
    if (annotating && !e2.fv().count(x)) return check(om, c, sig, e2, exp);

    std::vector<NormCtx> candidates;
    if (!e1.fv().empty()) {
      candidates.push_back(extract_module(c, e1.fv(), x, a.type));
    } else {
      candidates = unit_placements(c.restrict(e2.fv()), x, a.type);
    }
    std::optional<Error> first;
    for (auto& c2 : candidates) {
      try {
        Out b = check(om, c2, sig, e2, exp);
        if (a.i == Inert::J) {
          if (!annotating)
            fail(ErrorKind::InertnessViolation, "let binds the jumpy term " + e1.str() + " to " + x);
          BunchedContext g = c2.to_ctx();
          Args args = mirror_args(g, x, a.term);
          return {tm::argslet(g, args, b.term), b.type, Inert::J};
        }
        Term out = e;
        if (annotating) out = tm::let(x, a.term, b.term);
        return {out, b.type, b.i};
      } catch (const Error& err) {
        if (!err.is_typing() && err.kind() != ErrorKind::CaptureError) throw;
        if (err.kind() == ErrorKind::InertnessViolation && !annotating) throw;
        if (!first) first = err;
      }
    }
    if (first) throw *first;
    fail(ErrorKind::OrderViolation, "no placement for " + x + " in " + c.str());
  }

  std::pair<Args, Inert> check_args(const HistContext& om, const NormCtx& ctx, const std::optional<RecSig>& sig,
                                    const Args& a, const BunchedContext& target) {
    NormCtx c = ctx.restrict(a.fv());
    for (auto& v : a.fv())
      if (!ctx.has(v)) fail(ErrorKind::UnboundVar, "argument variable " + v + " is not in scope");
    auto shape = [&](const char* what) -> void {
      fail(ErrorKind::ShapeMismatch, std::string(what) + " arguments " + a.str() + " do not fit " + target.str());
    };
    switch (a.kind()) {
      case ArgsKind::Emp:
        if (target.kind() != CtxKind::Empty) shape("empty");
        return {a, Inert::I};
      case ArgsKind::Sng: {
        if (target.kind() != CtxKind::Bind) shape("single");
        Out o = check(om, c, sig, a->e, target.type());
        return {annotating ? ar::sng(o.term) : a, o.i};
      }
      case ArgsKind::Comma: {
        if (target.kind() != CtxKind::Comma) shape("parallel");
        auto l = check_args(om, c, sig, a->a1, target.left());
        auto r = check_args(om, c, sig, a->a2, target.right());
        return {annotating ? ar::comma(l.first, r.first) : a, max(l.second, r.second)};
      }
      case ArgsKind::Semic1: {
        if (target.kind() != CtxKind::Semic) shape("sequential");
        auto [c1, c2] = split_seq(c, a->a1.fv(), a->a2.fv());
        auto l = check_args(om, c1, sig, a->a1, target.left());
        auto r = check_args(om, c2, sig, a->a2, target.right());
        return {annotating ? ar::semic1(l.first, r.first) : a, max(l.second, r.second)};
      }
      case ArgsKind::Semic2: {
        if (target.kind() != CtxKind::Semic) shape("sequential");
        if (!nullable_ctx(target.left()))
          fail(ErrorKind::TypeMismatch, "crossed-over arguments need a finished left bunch, but " +
                                            target.left().str() + " is not nullable");
        auto r = check_args(om, c, sig, a->a1, target.right());
        return {annotating ? ar::semic2(r.first) : a, r.second};
      }
    }
    shape("unknown");
    return {a, Inert::J};
  }

  std::pair<RecDefP, Inert> check_def(const RecDefP& def) {
    auto it = defs.find(def.get());
    if (it != defs.end()) return {it->second.checked, it->second.i};
    if (in_progress.count(def.get()))
      fail(ErrorKind::RecOutsideFix, "definition " + def->name + " refers to itself outside of rec");
    in_progress.insert(def.get());
    std::optional<Error> err;
    for (Inert i : {Inert::I, Inert::J}) {
      RecSig sig{def->omega, def->gamma, def->ret, i};
      try {
        Out o = check(def->omega, NormCtx::from(def->gamma), sig, def->body, def->ret);
        if (o.i == Inert::J && i == Inert::I) continue;
        RecDefP checked = def;
        if (annotating) {
          auto d = std::make_shared<RecDef>(*def);
          d->body = o.term;
          checked = d;
        }
        in_progress.erase(def.get());
        DefInfo info{def, checked, i};
        defs[def.get()] = info;
        defs[checked.get()] = DefInfo{checked, checked, i};
        return {checked, i};
      } catch (const Error& e) {
        if (!e.is_typing()) {
          in_progress.erase(def.get());
          throw;
        }
        err = e;
      }
    }
    in_progress.erase(def.get());
    if (err) throw Error(err->kind(), "in " + def->name + ": " + err->detail());
    fail(ErrorKind::InertnessViolation, "definition " + def->name + " has no consistent inertness");
  }
};

TypeChecker::TypeChecker(bool annotate) : impl_(std::make_unique<Impl>(annotate)) {}
TypeChecker::~TypeChecker() = default;

Typing TypeChecker::check(const HistContext& omega, const BunchedContext& gamma, const std::optional<RecSig>& sig,
                          const Term& e, const std::optional<StreamType>& expected) {
  auto o = impl_->check(omega, NormCtx::from(gamma), sig, e, expected);
  impl_->last = o.term;
  return {o.type, o.i};
}

const Term& TypeChecker::result() const { return impl_->last; }

Inert TypeChecker::check_args(const HistContext& omega, const BunchedContext& gamma,
                              const std::optional<RecSig>& sig, const Args& a, const BunchedContext& target) {
  return impl_->check_args(omega, NormCtx::from(gamma), sig, a, target).second;
}

std::pair<RecDefP, Inert> TypeChecker::check_def(const RecDefP& def) { return impl_->check_def(def); }

const std::vector<std::string>& TypeChecker::warnings() const { return impl_->warnings; }

Typing core_typecheck(const HistContext& omega, const BunchedContext& gamma, const std::optional<RecSig>& sig,
                      const Term& e, const std::optional<StreamType>& expected) {
  TypeChecker tc(false);
  return tc.check(omega, gamma, sig, e, expected);
}

Inert check_args(const HistContext& omega, const BunchedContext& gamma, const std::optional<RecSig>& sig,
                 const Args& a, const BunchedContext& target) {
  TypeChecker tc(false);
  return tc.check_args(omega, gamma, sig, a, target);
}

Annotated annotate(const HistContext& omega, const BunchedContext& gamma, const Term& e,
                   const std::optional<StreamType>& expected) {
  TypeChecker tc(true);
  Typing t = tc.check(omega, gamma, std::nullopt, e, expected);
  return {tc.result(), t, tc.warnings()};
}

}  // namespace lst
