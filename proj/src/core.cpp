#include "lst/core.hpp"

#include <functional>

namespace lst {

namespace {

const VarSet kNoVars;

void add_all(VarSet& out, const VarSet& in) { out.insert(in.begin(), in.end()); }

VarSet without(const VarSet& in, std::initializer_list<std::string> drop) {
  VarSet out = in;
  for (auto& d : drop) out.erase(d);
  return out;
}

VarSet compute_fv(const TermNode& n) {
  VarSet out;
  auto buf_vars = [&]() {
    if (n.buf) add_all(out, ctx_var_set(n.buf->ctx));
  };
  switch (n.kind) {
    case TermKind::Var: out.insert(n.x); break;
    case TermKind::LetPar:
    case TermKind::LetCat:
      out = without(n.kids[0].fv(), {n.x, n.y});
      out.insert(n.z);
      break;
    case TermKind::SumCase:
      out = without(n.kids[0].fv(), {n.x});
      add_all(out, without(n.kids[1].fv(), {n.y}));
      out.insert(n.z);
      buf_vars();
      break;
    case TermKind::StarCase:
      out = n.kids[0].fv();
      add_all(out, without(n.kids[1].fv(), {n.x, n.y}));
      out.insert(n.z);
      buf_vars();
      break;
    case TermKind::Let:
      out = n.kids[0].fv();
      add_all(out, without(n.kids[1].fv(), {n.x}));
      break;
    case TermKind::Wait:
      out = n.kids[0].fv();
      out.insert(n.x);
      buf_vars();
      break;
    case TermKind::Fix:
    case TermKind::Rec:
    case TermKind::ArgsLet: out = n.args.fv(); break;
    default:
      for (auto& k : n.kids) add_all(out, k.fv());
  }
  return out;
}

}  // namespace

Term::Term() : node_(nullptr) {}
TermKind Term::kind() const { return node_ ? node_->kind : TermKind::Sink; }
const VarSet& Term::fv() const { return node_ ? node_->fv : kNoVars; }

Args::Args() : node_(nullptr) {}
ArgsKind Args::kind() const { return node_ ? node_->kind : ArgsKind::Emp; }
const VarSet& Args::fv() const { return node_ ? node_->fv : kNoVars; }

namespace tm {

Term make(TermNode n) {
  n.fv = compute_fv(n);
  return Term(std::make_shared<const TermNode>(std::move(n)));
}

namespace {
TermNode base(TermKind k) {
  TermNode n;
  n.kind = k;
  return n;
}
}  // namespace

Term sink() { return Term(); }
Term unit() { return make(base(TermKind::Unit)); }

Term var(std::string x) {
  auto n = base(TermKind::Var);
  n.x = std::move(x);
  return make(std::move(n));
}

Term int_(std::int64_t v) {
  auto n = base(TermKind::IntLit);
  n.n = v;
  return make(std::move(n));
}

Term bool_(bool v) {
  auto n = base(TermKind::BoolLit);
  n.b = v;
  return make(std::move(n));
}

Term par(Term a, Term b) {
  auto n = base(TermKind::ParPair);
  n.kids = {std::move(a), std::move(b)};
  return make(std::move(n));
}

Term cat(Term a, Term b) {
  auto n = base(TermKind::CatPair);
  n.kids = {std::move(a), std::move(b)};
  return make(std::move(n));
}

Term letpar(std::string x, std::string y, std::string z, Term e) {
  auto n = base(TermKind::LetPar);
  n.x = std::move(x);
  n.y = std::move(y);
  n.z = std::move(z);
  n.kids = {std::move(e)};
  return make(std::move(n));
}

Term letcat(std::optional<StreamType> t, std::string x, std::string y, std::string z, Term e) {
  auto n = base(TermKind::LetCat);
  n.ann1 = std::move(t);
  n.x = std::move(x);
  n.y = std::move(y);
  n.z = std::move(z);
  n.kids = {std::move(e)};
  return make(std::move(n));
}

Term inl(Term e, std::optional<StreamType> right) {
  auto n = base(TermKind::Inl);
  n.kids = {std::move(e)};
  n.ann1 = std::move(right);
  return make(std::move(n));
}

Term inr(Term e, std::optional<StreamType> left) {
  auto n = base(TermKind::Inr);
  n.kids = {std::move(e)};
  n.ann1 = std::move(left);
  return make(std::move(n));
}

Term sumcase(std::optional<StreamType> r, std::optional<Buffer> buf, std::string z, std::string x, Term e1,
             std::string y, Term e2) {
  auto n = base(TermKind::SumCase);
  n.ann1 = std::move(r);
  n.buf = std::move(buf);
  n.z = std::move(z);
  n.x = std::move(x);
  n.y = std::move(y);
  n.kids = {std::move(e1), std::move(e2)};
  return make(std::move(n));
}

Term nil(std::optional<StreamType> elem) {
  auto n = base(TermKind::Nil);
  n.ann1 = std::move(elem);
  return make(std::move(n));
}

Term cons(Term a, Term b) {
  auto n = base(TermKind::Cons);
  n.kids = {std::move(a), std::move(b)};
  return make(std::move(n));
}

Term starcase(std::optional<StreamType> s, std::optional<StreamType> r, std::optional<Buffer> buf, std::string z,
              Term e1, std::string x, std::string xs, Term e2) {
  auto n = base(TermKind::StarCase);
  n.ann1 = std::move(s);
  n.ann2 = std::move(r);
  n.buf = std::move(buf);
  n.z = std::move(z);
  n.x = std::move(x);
  n.y = std::move(xs);
  n.kids = {std::move(e1), std::move(e2)};
  return make(std::move(n));
}

Term let(std::string x, Term e1, Term e2) {
  auto n = base(TermKind::Let);
  n.x = std::move(x);
  n.kids = {std::move(e1), std::move(e2)};
  return make(std::move(n));
}

Term hist(HistTerm m, std::optional<StreamType> s) {
  auto n = base(TermKind::HistPgm);
  n.m = std::move(m);
  n.ann1 = std::move(s);
  return make(std::move(n));
}

Term wait(std::optional<Buffer> buf, std::optional<StreamType> t, std::string x, Term e) {
  std::string hx = x;
  return wait_as(std::move(buf), std::move(t), std::move(x), std::move(hx), std::move(e));
}

Term wait_as(std::optional<Buffer> buf, std::optional<StreamType> t, std::string x, std::string hx, Term e) {
  auto n = base(TermKind::Wait);
  n.buf = std::move(buf);
  n.ann1 = std::move(t);
  n.x = std::move(x);
  n.y = std::move(hx);
  n.kids = {std::move(e)};
  return make(std::move(n));
}

Term fix(RecDefP def, std::vector<HistTerm> hargs, Args args) {
  auto n = base(TermKind::Fix);
  n.def = std::move(def);
  n.hargs = std::move(hargs);
  n.args = std::move(args);
  return make(std::move(n));
}

Term rec(std::vector<HistTerm> hargs, Args args) {
  auto n = base(TermKind::Rec);
  n.hargs = std::move(hargs);
  n.args = std::move(args);
  return make(std::move(n));
}

Term argslet(BunchedContext gamma, Args args, Term e) {
  auto n = base(TermKind::ArgsLet);
  n.gamma = std::move(gamma);
  n.args = std::move(args);
  n.kids = {std::move(e)};
  return make(std::move(n));
}

}  // namespace tm

namespace ar {

namespace {
Args make(ArgsNode n) {
  switch (n.kind) {
    case ArgsKind::Emp: break;
    case ArgsKind::Sng: n.fv = n.e.fv(); break;
    case ArgsKind::Semic2: n.fv = n.a1.fv(); break;
    default:
      n.fv = n.a1.fv();
      add_all(n.fv, n.a2.fv());
  }
  return Args(std::make_shared<const ArgsNode>(std::move(n)));
}
}  // namespace

Args emp() { return Args(); }

Args sng(Term e) {
  ArgsNode n;
  n.kind = ArgsKind::Sng;
  n.e = std::move(e);
  return make(std::move(n));
}

Args comma(Args a, Args b) {
  ArgsNode n;
  n.kind = ArgsKind::Comma;
  n.a1 = std::move(a);
  n.a2 = std::move(b);
  return make(std::move(n));
}

Args semic1(Args a, Args b) {
  ArgsNode n;
  n.kind = ArgsKind::Semic1;
  n.a1 = std::move(a);
  n.a2 = std::move(b);
  return make(std::move(n));
}

Args semic2(Args a) {
  ArgsNode n;
  n.kind = ArgsKind::Semic2;
  n.a1 = std::move(a);
  return make(std::move(n));
}

}  // namespace ar

// ---- rendering ----

namespace {

std::string ann(const std::optional<StreamType>& t) { return t ? "[" + t->str() + "]" : ""; }

std::string buf_str(const std::optional<Buffer>& b) {
  if (!b) return "";
  return "<" + b->ctx.str() + " | " + env_str(b->env) + ">";
}

std::string hargs_str(const std::vector<HistTerm>& hs) {
  std::string out = "{";
  for (size_t i = 0; i < hs.size(); ++i) {
    if (i) out += ", ";
    out += hs[i].str();
  }
  return out + "}";
}

}  // namespace

std::string Term::str() const {
  if (!node_) return "sink";
  const TermNode& n = *node_;
  switch (n.kind) {
    case TermKind::Sink: return "sink";
    case TermKind::Unit: return "()";
    case TermKind::Var: return n.x;
    case TermKind::IntLit: return std::to_string(n.n);
    case TermKind::BoolLit: return n.b ? "true" : "false";
    case TermKind::ParPair: return "(" + n.kids[0].str() + ", " + n.kids[1].str() + ")";
    case TermKind::CatPair: return "(" + n.kids[0].str() + "; " + n.kids[1].str() + ")";
    case TermKind::LetPar: return "let (" + n.x + ", " + n.y + ") = " + n.z + " in " + n.kids[0].str();
    case TermKind::LetCat:
      return "let" + ann(n.ann1) + " (" + n.x + "; " + n.y + ") = " + n.z + " in " + n.kids[0].str();
    case TermKind::Inl: return "inl" + ann(n.ann1) + "(" + n.kids[0].str() + ")";
    case TermKind::Inr: return "inr" + ann(n.ann1) + "(" + n.kids[0].str() + ")";
    case TermKind::SumCase:
      return "case" + ann(n.ann1) + buf_str(n.buf) + " " + n.z + " of inl " + n.x + " => " + n.kids[0].str() +
             " | inr " + n.y + " => " + n.kids[1].str();
    case TermKind::Nil: return "nil" + ann(n.ann1);
    case TermKind::Cons: return "(" + n.kids[0].str() + " :: " + n.kids[1].str() + ")";
    case TermKind::StarCase:
      return "case" + ann(n.ann1) + ann(n.ann2) + buf_str(n.buf) + " " + n.z + " of nil => " + n.kids[0].str() +
             " | " + n.x + " :: " + n.y + " => " + n.kids[1].str();
    case TermKind::Let: return "let " + n.x + " = " + n.kids[0].str() + " in " + n.kids[1].str();
    case TermKind::HistPgm: return "{" + n.m.str() + "}" + ann(n.ann1);
    case TermKind::Wait:
      return "wait" + ann(n.ann1) + buf_str(n.buf) + " " + n.x + (n.y != n.x ? " as " + n.y : "") + " do " +
             n.kids[0].str() + " end";
    case TermKind::Fix: return "fix " + (n.def ? n.def->name : "?") + hargs_str(n.hargs) + "(" + n.args.str() + ")";
    case TermKind::Rec: return "rec" + hargs_str(n.hargs) + "(" + n.args.str() + ")";
    case TermKind::ArgsLet:
      return "let [" + n.gamma.str() + "] = (" + n.args.str() + ") in " + n.kids[0].str();
  }
  return "?";
}

std::string Args::str() const {
  switch (kind()) {
    case ArgsKind::Emp: return "";
    case ArgsKind::Sng: return node_->e.str();
    case ArgsKind::Comma: return "(" + node_->a1.str() + ", " + node_->a2.str() + ")";
    case ArgsKind::Semic1: return "(" + node_->a1.str() + "; " + node_->a2.str() + ")";
    case ArgsKind::Semic2: return "(_; " + node_->a1.str() + ")";
  }
  return "?";
}

// ---- equality ----

namespace {

bool opt_eq(const std::optional<StreamType>& a, const std::optional<StreamType>& b) {
  if (a.has_value() != b.has_value()) return false;
  return !a || *a == *b;
}

bool buf_eq(const std::optional<Buffer>& a, const std::optional<Buffer>& b) {
  if (a.has_value() != b.has_value()) return false;
  if (!a) return true;
  return a->ctx == b->ctx && a->env == b->env;
}

}  // namespace

bool term_equal(const Term& a, const Term& b) {
  if (a.get() == b.get()) return true;
  if (a.kind() != b.kind()) return false;
  if (a.kind() == TermKind::Sink) return true;
  const TermNode& x = *a;
  const TermNode& y = *b;
  if (x.x != y.x || x.y != y.y || x.z != y.z || x.n != y.n || x.b != y.b) return false;
  if (!opt_eq(x.ann1, y.ann1) || !opt_eq(x.ann2, y.ann2) || !buf_eq(x.buf, y.buf)) return false;
  if (!(x.m == y.m) || x.hargs != y.hargs) return false;
  if (x.def != y.def && (!x.def || !y.def || x.def->name != y.def->name || !term_equal(x.def->body, y.def->body)))
    return false;
  if (!(x.gamma == y.gamma)) return false;
  if (!args_equal(x.args, y.args)) return false;
  if (x.kids.size() != y.kids.size()) return false;
  for (size_t i = 0; i < x.kids.size(); ++i)
    if (!term_equal(x.kids[i], y.kids[i])) return false;
  return true;
}

bool args_equal(const Args& a, const Args& b) {
  if (a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case ArgsKind::Emp: return true;
    case ArgsKind::Sng: return term_equal(a->e, b->e);
    case ArgsKind::Semic2: return args_equal(a->a1, b->a1);
    default: return args_equal(a->a1, b->a1) && args_equal(a->a2, b->a2);
  }
}

// ---- sink terms ----

Term sink_term(const Prefix& p) {
  switch (p.kind()) {
    case PKind::ParP: return tm::par(sink_term(p.a()), sink_term(p.b()));
    case PKind::CatPA:
    case PKind::SumPA:
    case PKind::SumPB:
    case PKind::StpA: return sink_term(p.a());
    case PKind::CatPB:
    case PKind::StpB: return sink_term(p.b());
    default: return tm::sink();
  }
}

// ---- generic structural map ----

namespace {

// Applies f to direct children (terms and args); binders are the caller's
// concern.
Term map_kids(const Term& e, const std::function<Term(const Term&, size_t)>& f,
              const std::function<Args(const Args&)>& fa) {
  if (e.kind() == TermKind::Sink) return e;
  TermNode n = *e;
  for (size_t i = 0; i < n.kids.size(); ++i) n.kids[i] = f(n.kids[i], i);
  n.args = fa(n.args);
  return tm::make(std::move(n));
}

Args map_args(const Args& a, const std::function<Term(const Term&)>& f) {
  switch (a.kind()) {
    case ArgsKind::Emp: return a;
    case ArgsKind::Sng: return ar::sng(f(a->e));
    case ArgsKind::Comma: return ar::comma(map_args(a->a1, f), map_args(a->a2, f));
    case ArgsKind::Semic1: return ar::semic1(map_args(a->a1, f), map_args(a->a2, f));
    case ArgsKind::Semic2: return ar::semic2(map_args(a->a1, f));
  }
  return a;
}

}  // namespace

Args fix_subst_args(const Args& a, const RecDefP& def) {
  return map_args(a, [&](const Term& t) { return fix_subst(t, def); });
}

Term fix_subst(const Term& e, const RecDefP& def) {
  switch (e.kind()) {
    case TermKind::Rec: return tm::fix(def, e->hargs, fix_subst_args(e->args, def));
    case TermKind::Fix: return tm::fix(e->def, e->hargs, fix_subst_args(e->args, def));
    case TermKind::Sink:
    case TermKind::Unit:
    case TermKind::Var:
    case TermKind::IntLit:
    case TermKind::BoolLit:
    case TermKind::Nil:
    case TermKind::HistPgm: return e;
    default:
      return map_kids(
          e, [&](const Term& k, size_t) { return fix_subst(k, def); },
          [&](const Args& a) { return fix_subst_args(a, def); });
  }
}

// ---- renaming ----

namespace {

BunchedContext rename_ctx(const BunchedContext& g, const std::string& from, const std::string& to) {
  switch (g.kind()) {
    case CtxKind::Empty: return g;
    case CtxKind::Bind: return g.var() == from ? BunchedContext::bind(to, g.type()) : g;
    case CtxKind::Comma:
      return BunchedContext::comma(rename_ctx(g.left(), from, to), rename_ctx(g.right(), from, to));
    case CtxKind::Semic:
      return BunchedContext::semic(rename_ctx(g.left(), from, to), rename_ctx(g.right(), from, to));
  }
  return g;
}

std::optional<Buffer> rename_buf(const std::optional<Buffer>& b, const std::string& from, const std::string& to) {
  if (!b) return b;
  Buffer out{rename_ctx(b->ctx, from, to), b->env};
  auto it = out.env.find(from);
  if (it != out.env.end()) {
    Prefix p = it->second;
    out.env.erase(it);
    out.env[to] = p;
  }
  return out;
}

Args rename_args(const Args& a, const std::string& from, const std::string& to) {
  return map_args(a, [&](const Term& t) { return rename_var(t, from, to); });
}

// Renames in a subterm under binders `bs`.
Term under(const Term& body, std::initializer_list<std::string> bs, const std::string& from, const std::string& to) {
  for (auto& b : bs)
    if (b == from) return body;
  if (!body.fv().count(from)) return body;
  for (auto& b : bs)
    if (b == to) fail(ErrorKind::CaptureError, "renaming " + from + " to " + to + " would be captured by a binder");
  return rename_var(body, from, to);
}

}  // namespace

Term rename_var(const Term& e, const std::string& from, const std::string& to) {
  if (from == to || !e.fv().count(from)) return e;
  TermNode n = *e;
  switch (n.kind) {
    case TermKind::Var: n.x = to; break;
    case TermKind::LetPar:
    case TermKind::LetCat:
      if (n.z == from) n.z = to;
      n.kids[0] = under(n.kids[0], {n.x, n.y}, from, to);
      break;
    case TermKind::SumCase:
      if (n.z == from) n.z = to;
      n.buf = rename_buf(n.buf, from, to);
      n.kids[0] = under(n.kids[0], {n.x}, from, to);
      n.kids[1] = under(n.kids[1], {n.y}, from, to);
      break;
    case TermKind::StarCase:
      if (n.z == from) n.z = to;
      n.buf = rename_buf(n.buf, from, to);
      n.kids[0] = under(n.kids[0], {}, from, to);
      n.kids[1] = under(n.kids[1], {n.x, n.y}, from, to);
      break;
    case TermKind::Let:
      n.kids[0] = rename_var(n.kids[0], from, to);
      n.kids[1] = under(n.kids[1], {n.x}, from, to);
      break;
    case TermKind::Wait:
      if (n.x == from) n.x = to;
      n.buf = rename_buf(n.buf, from, to);
      n.kids[0] = rename_var(n.kids[0], from, to);
      break;
    case TermKind::Fix:
    case TermKind::Rec:
    case TermKind::ArgsLet: n.args = rename_args(n.args, from, to); break;
    default:
      for (auto& k : n.kids) k = rename_var(k, from, to);
  }
  return tm::make(std::move(n));
}

// ---- history substitution ----

Args hist_subst_args(const Args& a, const HistSubst& theta) {
  return map_args(a, [&](const Term& t) { return hist_subst_term(t, theta); });
}

Term hist_subst_term(const Term& e, const HistSubst& theta) {
  if (theta.empty()) return e;
  switch (e.kind()) {
    case TermKind::Sink:
    case TermKind::Unit:
    case TermKind::Var:
    case TermKind::IntLit:
    case TermKind::BoolLit:
    case TermKind::Nil: return e;
    case TermKind::HistPgm: {
      TermNode n = *e;
      n.m = hist_subst(n.m, theta);
      return tm::make(std::move(n));
    }
    case TermKind::Fix:
    case TermKind::Rec: {
      TermNode n = *e;
      for (auto& h : n.hargs) h = hist_subst(h, theta);
      n.args = hist_subst_args(n.args, theta);
      return tm::make(std::move(n));
    }
    case TermKind::Wait: {
      TermNode n = *e;
      if (theta.count(n.y)) {
        HistSubst inner = theta;
        inner.erase(n.y);
        n.kids[0] = hist_subst_term(n.kids[0], inner);
      } else {
        n.kids[0] = hist_subst_term(n.kids[0], theta);
      }
      return tm::make(std::move(n));
    }
    default:
      return map_kids(
          e, [&](const Term& k, size_t) { return hist_subst_term(k, theta); },
          [&](const Args& a) { return hist_subst_args(a, theta); });
  }
}

Args mirror_args(const BunchedContext& g, const std::string& x, const Term& e) {
  switch (g.kind()) {
    case CtxKind::Empty: return ar::emp();
    case CtxKind::Bind: return ar::sng(g.var() == x ? e : tm::var(g.var()));
    case CtxKind::Comma: return ar::comma(mirror_args(g.left(), x, e), mirror_args(g.right(), x, e));
    case CtxKind::Semic: return ar::semic1(mirror_args(g.left(), x, e), mirror_args(g.right(), x, e));
  }
  return ar::emp();
}

size_t term_size(const Term& e) {
  if (e.kind() == TermKind::Sink) return 1;
  size_t n = 1;
  for (auto& k : e->kids) n += term_size(k);
  std::function<size_t(const Args&)> as = [&](const Args& a) -> size_t {
    switch (a.kind()) {
      case ArgsKind::Emp: return 0;
      case ArgsKind::Sng: return term_size(a->e);
      case ArgsKind::Semic2: return as(a->a1);
      default: return as(a->a1) + as(a->a2);
    }
  };
  return n + as(e->args);
}

}  // namespace lst
