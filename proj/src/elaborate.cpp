#include "lst/frontend.hpp"

namespace lst {

namespace {

using Scope = std::map<std::string, std::string>;

[[noreturn]] void scope_error(const SExpr& e, const std::string& msg) {
  fail(ErrorKind::ScopeError, "line " + std::to_string(e.line) + ":" + std::to_string(e.col) + ": " + msg);
}

size_t leaf_count(const BunchedContext& g) {
  switch (g.kind()) {
    case CtxKind::Empty: return 0;
    case CtxKind::Bind: return 1;
    default: return leaf_count(g.left()) + leaf_count(g.right());
  }
}

Args build_args(const BunchedContext& g, const std::vector<Term>& args, size_t& i) {
  switch (g.kind()) {
    case CtxKind::Empty: return ar::emp();
    case CtxKind::Bind: return ar::sng(args[i++]);
    case CtxKind::Comma: {
      Args l = build_args(g.left(), args, i);
      return ar::comma(l, build_args(g.right(), args, i));
    }
    case CtxKind::Semic: {
      Args l = build_args(g.left(), args, i);
      return ar::semic1(l, build_args(g.right(), args, i));
    }
  }
  return ar::emp();
}

class Elab {
 public:
  explicit Elab(const ElabEnv& env) : env_(env) {}

  void reserve(const std::string& x) { used_.insert(x); }

  Term go(const SExprP& ep, const Scope& S, const Scope& H) {
    const SExpr& e = *ep;
    switch (e.kind) {
      case SK::Var: {
        auto it = S.find(e.name);
        if (it != S.end()) return tm::var(it->second);
        if (H.count(e.name)) scope_error(e, e.name + " is historical here; write {" + e.name + "}");
        scope_error(e, "unbound stream variable " + e.name);
      }
      case SK::Unit: return tm::unit();
      case SK::Sink: return tm::sink();
      case SK::Int: return tm::int_(e.n);
      case SK::Bool: return tm::bool_(e.b);
      case SK::ParPair: return tm::par(go(e.kids[0], S, H), go(e.kids[1], S, H));
      case SK::CatPair: return tm::cat(go(e.kids[0], S, H), go(e.kids[1], S, H));
      case SK::Cons: return tm::cons(go(e.kids[0], S, H), go(e.kids[1], S, H));
      case SK::Nil: return tm::nil();
      case SK::Inl: return tm::inl(go(e.kids[0], S, H));
      case SK::Inr: return tm::inr(go(e.kids[0], S, H));
      case SK::Hist: return tm::hist(hist(e, e.m, H));
      case SK::Let: {
        Term bound = go(e.kids[0], S, H);
        Scope S2 = S;
        std::string x = bind(e.binders[0], S2);
        return tm::let(x, bound, go(e.kids[1], S2, H));
      }
      case SK::LetPar:
      case SK::LetCat: {
        Term bound = go(e.kids[0], S, H);
        return scrutinize(bound, [&](const std::string& z) {
          Scope S2 = S;
          S2.erase(surface_of(S, z));
          std::string x = bind(e.binders[0], S2);
          std::string y = bind(e.binders[1], S2);
          Term body = go(e.kids[1], S2, H);
          return e.kind == SK::LetPar ? tm::letpar(x, y, z, body) : tm::letcat(std::nullopt, x, y, z, body);
        });
      }
      case SK::SumCase: {
        Term scrut = go(e.kids[0], S, H);
        return scrutinize(scrut, [&](const std::string& z) {
          Scope base = S;
          base.erase(surface_of(S, z));
          Scope SL = base, SR = base;
          std::string x = bind(e.binders[0], SL);
          Term l = go(e.kids[1], SL, H);
          std::string y = bind(e.binders[1], SR);
          Term r = go(e.kids[2], SR, H);
          return tm::sumcase(std::nullopt, std::nullopt, z, x, l, y, r);
        });
      }
      case SK::StarCase: {
        Term scrut = go(e.kids[0], S, H);
        return scrutinize(scrut, [&](const std::string& z) {
          Scope base = S;
          base.erase(surface_of(S, z));
          Term nil_branch = go(e.kids[1], base, H);
          Scope SC = base;
          std::string x = bind(e.binders[0], SC);
          std::string xs = bind(e.binders[1], SC);
          Term cons_branch = go(e.kids[2], SC, H);
          return tm::starcase(std::nullopt, std::nullopt, std::nullopt, z, nil_branch, x, xs, cons_branch);
        });
      }
      case SK::Wait: return wait(e, S, H);
      case SK::If: {
        HistTerm c = hist(e, e.m, H);
        HistTerm sel = HistTerm::if_(c, HistTerm::inl(HistTerm::unit()), HistTerm::inr(HistTerm::unit()));
        std::string t = fresh("c");
        std::string u = fresh("u");
        std::string v = fresh("u");
        Term a = go(e.kids[0], S, H);
        Term b = go(e.kids[1], S, H);
        StreamType bit = StreamType::plus(StreamType::eps(), StreamType::eps());
        return tm::let(t, tm::hist(sel, bit), tm::sumcase(std::nullopt, std::nullopt, t, u, a, v, b));
      }
      case SK::Call: return call(e, S, H);
    }
    scope_error(e, "unknown expression");
  }

 private:
  // Runs k on a variable naming the value of `t`, let-binding it first when
  // it is not already a variable.
  template <class K>
  Term scrutinize(const Term& t, K k) {
    if (t.kind() == TermKind::Var) return k(t->x);
    std::string z = fresh("s");
    return tm::let(z, t, k(z));
  }

  static std::string surface_of(const Scope& S, const std::string& core) {
    for (auto& [s, c] : S)
      if (c == core) return s;
    return "";
  }

  std::string bind(const std::string& surface, Scope& S) {
    if (surface == "_") return fresh("w");
    std::string c = surface;
    for (int k = 1; used_.count(c); ++k) c = surface + "_" + std::to_string(k);
    used_.insert(c);
    S[surface] = c;
    return c;
  }

  std::string fresh(const std::string& hint) {
    std::string c;
    do c = "$" + hint + std::to_string(++counter_);
    while (used_.count(c));
    used_.insert(c);
    return c;
  }

  HistTerm hist(const SExpr& at, const HistTerm& m, const Scope& H) { return rename(at, m, H, {}); }

  HistTerm rename(const SExpr& at, const HistTerm& m, const Scope& H, const std::set<std::string>& bound) {
    auto r = [&](size_t i) { return rename(at, m.kid(i), H, bound); };
    auto under = [&](size_t i, std::initializer_list<std::string> xs) {
      std::set<std::string> b2 = bound;
      for (auto& x : xs) {
        for (auto& [s, c] : H)
          if (c == x && !bound.count(s)) scope_error(at, "historical binder " + x + " captures a renamed variable");
        b2.insert(x);
      }
      return rename(at, m.kid(i), H, b2);
    };
    switch (m.kind()) {
      case HKind::Var: {
        if (bound.count(m.name())) return m;
        auto it = H.find(m.name());
        if (it == H.end()) scope_error(at, "unbound historical variable " + m.name());
        return HistTerm::var(it->second);
      }
      case HKind::Unit:
      case HKind::Int:
      case HKind::Bool:
      case HKind::Nil: return m;
      case HKind::Pair: return HistTerm::pair(r(0), r(1));
      case HKind::Fst: return HistTerm::fst(r(0));
      case HKind::Snd: return HistTerm::snd(r(0));
      case HKind::Inl: return HistTerm::inl(r(0));
      case HKind::Inr: return HistTerm::inr(r(0));
      case HKind::Case: return HistTerm::case_(r(0), m.x(), under(1, {m.x()}), m.y(), under(2, {m.y()}));
      case HKind::Cons: return HistTerm::cons(r(0), r(1));
      case HKind::Fold: return HistTerm::fold(r(0), r(1), m.x(), m.y(), under(2, {m.x(), m.y()}));
      case HKind::Arith: return HistTerm::arith(m.op(), r(0), r(1));
      case HKind::Cmp: return HistTerm::cmp(m.op(), r(0), r(1));
      case HKind::If: return HistTerm::if_(r(0), r(1), r(2));
      case HKind::Len: return HistTerm::len(r(0));
      case HKind::Init: return HistTerm::init(r(0));
    }
    return m;
  }

  Term wait(const SExpr& e, const Scope& S, const Scope& H) {
    size_t k = e.kids.size() - 1;
    size_t nonvars = 0;
    for (size_t i = 0; i < k; ++i)
      if (e.kids[i]->kind != SK::Var) ++nonvars;
    std::vector<std::string> names(k);
    if (e.binders.size() == k) {
      names = e.binders;
    } else if (e.binders.size() == nonvars) {
      size_t j = 0;
      for (size_t i = 0; i < k; ++i) names[i] = e.kids[i]->kind == SK::Var ? e.kids[i]->name : e.binders[j++];
    } else {
      scope_error(e, "wait needs one `as` name per expression, or one per non-variable expression");
    }
    return wait_from(e, 0, names, S, H);
  }

  Term wait_from(const SExpr& e, size_t i, const std::vector<std::string>& names, const Scope& S, const Scope& H) {
    size_t k = e.kids.size() - 1;
    if (i == k) return go(e.kids[k], S, H);
    Term t = go(e.kids[i], S, H);
    return scrutinize(t, [&](const std::string& z) {
      Scope S2 = S;
      S2.erase(surface_of(S, z));
      Scope H2 = H;
      std::string hx = bind(names[i], H2);
      return tm::wait_as(std::nullopt, std::nullopt, z, hx, wait_from(e, i + 1, names, S2, H2));
    });
  }

  Term call(const SExpr& e, const Scope& S, const Scope& H) {
    const SurfaceDecl& self = *env_.decl;
    std::vector<HistTerm> hargs;
    for (auto& m : e.hargs) hargs.push_back(hist(e, m, H));
    std::vector<Term> args;
    for (auto& a : e.kids) args.push_back(go(a, S, H));

    auto check_arity = [&](const std::string& what, size_t nh, const BunchedContext& g) {
      if (hargs.size() != nh)
        fail(ErrorKind::ArityMismatch, "line " + std::to_string(e.line) + ": " + what + " takes " +
                                           std::to_string(nh) + " historical arguments, got " +
                                           std::to_string(hargs.size()));
      size_t n = leaf_count(g);
      if (args.size() != n)
        fail(ErrorKind::ArityMismatch, "line " + std::to_string(e.line) + ": " + what + " takes " +
                                           std::to_string(n) + " stream arguments, got " +
                                           std::to_string(args.size()));
    };

    if (e.rec || e.name == self.name) {
      if (!e.margs.empty())
        fail(ErrorKind::ArityMismatch, "line " + std::to_string(e.line) + ": recursive call to " + self.name +
                                           " takes no macro arguments");
      if (!e.targs.empty()) {
        if (e.targs.size() != self.type_params.size())
          fail(ErrorKind::ArityMismatch, "line " + std::to_string(e.line) + ": wrong number of type arguments");
        for (size_t i = 0; i < e.targs.size(); ++i)
          if (!(close_type(e.targs[i], env_.tsubst) == env_.tsubst.at(self.type_params[i])))
            scope_error(e, "polymorphic recursion in " + self.name + " is not supported");
      }
      BunchedContext g = subst_ctx(self.params);
      check_arity(self.name, self.hist_params.size(), g);
      size_t i = 0;
      return tm::rec(hargs, build_args(g, args, i));
    }

    FunRef ref;
    auto m = env_.msubst.find(e.name);
    if (m != env_.msubst.end()) {
      if (!e.targs.empty() || !e.margs.empty())
        scope_error(e, "macro parameter " + e.name + " cannot take type or macro arguments");
      ref = m->second;
    } else {
      ref.name = e.name;
      for (auto& t : e.targs) ref.targs.push_back(close_type(t, env_.tsubst));
      for (auto& a : e.margs) ref.margs.push_back(resolve_macro_arg(a, env_.tsubst, env_.msubst));
    }
    RecDefP def = env_.resolve(ref);
    check_arity(def->name, def->omega.size(), def->gamma);
    size_t i = 0;
    return tm::fix(def, hargs, build_args(def->gamma, args, i));
  }

  BunchedContext subst_ctx(const BunchedContext& g) {
    switch (g.kind()) {
      case CtxKind::Empty: return g;
      case CtxKind::Bind: return BunchedContext::bind(g.var(), close_type(g.type(), env_.tsubst));
      case CtxKind::Comma: return BunchedContext::comma(subst_ctx(g.left()), subst_ctx(g.right()));
      case CtxKind::Semic: return BunchedContext::semic(subst_ctx(g.left()), subst_ctx(g.right()));
    }
    return g;
  }

  const ElabEnv& env_;
  std::set<std::string> used_;
  int counter_ = 0;

  friend Term lst::elaborate(const SExprP&, const ElabEnv&);
};

}  // namespace

StreamType close_type(const StreamType& t, const std::map<std::string, StreamType>& tsubst) {
  StreamType r = subst_type(t, tsubst);
  if (!r.is_closed()) fail(ErrorKind::NonClosedTypeArg, "type " + r.str() + " mentions an unbound type variable");
  return r;
}

FunRef resolve_macro_arg(const MacroArg& a, const std::map<std::string, StreamType>& tsubst,
                         const std::map<std::string, FunRef>& msubst) {
  auto it = msubst.find(a.name);
  if (it != msubst.end()) {
    if (!a.targs.empty() || !a.margs.empty())
      fail(ErrorKind::ScopeError, "macro parameter " + a.name + " cannot take type or macro arguments");
    return it->second;
  }
  FunRef r;
  r.name = a.name;
  for (auto& t : a.targs) r.targs.push_back(close_type(t, tsubst));
  for (auto& m : a.margs) r.margs.push_back(resolve_macro_arg(m, tsubst, msubst));
  return r;
}

std::string FunRef::key() const {
  std::string k = name;
  if (!targs.empty()) {
    k += "[";
    for (size_t i = 0; i < targs.size(); ++i) k += (i ? "," : "") + targs[i].str();
    k += "]";
  }
  if (!margs.empty()) {
    k += "<";
    for (size_t i = 0; i < margs.size(); ++i) k += (i ? "," : "") + margs[i].key();
    k += ">";
  }
  return k;
}

Term elaborate(const SExprP& body, const ElabEnv& env) {
  Elab el(env);
  const SurfaceDecl& d = *env.decl;
  Scope S, H;
  for (auto& x : ctx_var_set(d.params)) {
    el.reserve(x);
    S[x] = x;
  }
  for (auto& [h, t] : d.hist_params) {
    if (H.count(h)) fail(ErrorKind::ScopeError, "duplicate historical parameter " + h + " in " + d.name);
    el.reserve(h);
    H[h] = h;
  }
  return el.go(body, S, H);
}

}  // namespace lst
