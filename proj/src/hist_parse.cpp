#include "lst/hist.hpp"
#include "lst/lexer.hpp"

namespace lst {

namespace {

HistTerm parse_cmp(TokenStream& ts);

HistTerm parse_atom(TokenStream& ts) {
  const Token& t = ts.peek();
  if (t.kind == Tok::Int) return HistTerm::int_(ts.next().n);
  if (ts.accept_kw("true")) return HistTerm::bool_(true);
  if (ts.accept_kw("false")) return HistTerm::bool_(false);
  if (ts.accept_kw("nil")) return HistTerm::nil();
  if (ts.at_ident()) return HistTerm::var(ts.next().text);
  if (ts.accept_sym("(")) {
    if (ts.accept_sym(")")) return HistTerm::unit();
    HistTerm a = parse_hist_expr(ts);
    if (ts.accept_sym(",")) {
      HistTerm b = parse_hist_expr(ts);
      ts.expect_sym(")");
      return HistTerm::pair(a, b);
    }
    ts.expect_sym(")");
    return a;
  }
  if (ts.accept_sym("[")) {
    std::vector<HistTerm> items;
    if (!ts.at_sym("]")) {
      items.push_back(parse_hist_expr(ts));
      while (ts.accept_sym(",")) items.push_back(parse_hist_expr(ts));
    }
    ts.expect_sym("]");
    HistTerm out = HistTerm::nil();
    for (size_t i = items.size(); i-- > 0;) out = HistTerm::cons(items[i], out);
    return out;
  }
  if (ts.accept_sym("|")) {
    HistTerm a = parse_cmp(ts);
    ts.expect_sym("|");
    return HistTerm::len(a);
  }
  ts.error("expected a historical expression");
}

HistTerm parse_app(TokenStream& ts) {
  if (ts.accept_kw("fst")) return HistTerm::fst(parse_app(ts));
  if (ts.accept_kw("snd")) return HistTerm::snd(parse_app(ts));
  if (ts.accept_kw("inl")) return HistTerm::inl(parse_app(ts));
  if (ts.accept_kw("inr")) return HistTerm::inr(parse_app(ts));
  if (ts.accept_kw("init")) return HistTerm::init(parse_app(ts));
  return parse_atom(ts);
}

HistTerm parse_unary(TokenStream& ts) {
  if (ts.accept_sym("!")) return HistTerm::if_(parse_unary(ts), HistTerm::bool_(false), HistTerm::bool_(true));
  if (ts.accept_sym("-")) return HistTerm::arith(HistOp::Sub, HistTerm::int_(0), parse_unary(ts));
  return parse_app(ts);
}

HistTerm parse_mul(TokenStream& ts) {
  HistTerm a = parse_unary(ts);
  for (;;) {
    if (ts.accept_sym("*")) {
      a = HistTerm::arith(HistOp::Mul, a, parse_unary(ts));
    } else if (ts.accept_sym("/")) {
      a = HistTerm::arith(HistOp::Div, a, parse_unary(ts));
    } else {
      return a;
    }
  }
}

HistTerm parse_add(TokenStream& ts) {
  HistTerm a = parse_mul(ts);
  for (;;) {
    if (ts.accept_sym("+")) {
      a = HistTerm::arith(HistOp::Add, a, parse_mul(ts));
    } else if (ts.accept_sym("-")) {
      a = HistTerm::arith(HistOp::Sub, a, parse_mul(ts));
    } else {
      return a;
    }
  }
}

HistTerm parse_cons(TokenStream& ts) {
  HistTerm a = parse_add(ts);
  if (ts.accept_sym("::")) return HistTerm::cons(a, parse_cons(ts));
  return a;
}

HistTerm parse_cmp(TokenStream& ts) {
  HistTerm a = parse_cons(ts);
  struct {
    const char* sym;
    HistOp op;
  } const ops[] = {{"<=", HistOp::Le}, {">=", HistOp::Ge}, {"==", HistOp::Eq},
                   {"<", HistOp::Lt},  {">", HistOp::Gt}};
  for (auto& o : ops)
    if (ts.accept_sym(o.sym)) return HistTerm::cmp(o.op, a, parse_cons(ts));
  if (ts.accept_sym("!=")) {
    HistTerm eq = HistTerm::cmp(HistOp::Eq, a, parse_cons(ts));
    return HistTerm::if_(eq, HistTerm::bool_(false), HistTerm::bool_(true));
  }
  return a;
}

}  // namespace

HistTerm parse_hist_expr(TokenStream& ts) {
  if (ts.accept_kw("if")) {
    HistTerm c = parse_hist_expr(ts);
    ts.expect_kw("then");
    HistTerm a = parse_hist_expr(ts);
    ts.expect_kw("else");
    HistTerm b = parse_hist_expr(ts);
    return HistTerm::if_(c, a, b);
  }
  if (ts.accept_kw("case")) {
    HistTerm scrut = parse_hist_expr(ts);
    ts.expect_kw("of");
    ts.accept_sym("|");
    ts.expect_kw("inl");
    std::string xl = ts.expect_ident();
    ts.expect_sym("=>");
    HistTerm bl = parse_hist_expr(ts);
    ts.expect_sym("|");
    ts.expect_kw("inr");
    std::string xr = ts.expect_ident();
    ts.expect_sym("=>");
    HistTerm br = parse_hist_expr(ts);
    return HistTerm::case_(scrut, xl, bl, xr, br);
  }
  if (ts.accept_kw("fold")) {
    ts.expect_sym("(");
    HistTerm l = parse_hist_expr(ts);
    ts.expect_sym(",");
    HistTerm init = parse_hist_expr(ts);
    ts.expect_sym(",");
    std::string x = ts.expect_ident();
    std::string acc = ts.expect_ident();
    ts.expect_sym("=>");
    HistTerm body = parse_hist_expr(ts);
    ts.expect_sym(")");
    return HistTerm::fold(l, init, x, acc, body);
  }
  return parse_cmp(ts);
}

HistTerm parse_hist(const std::string& text) {
  TokenStream ts(lex(text));
  HistTerm m = parse_hist_expr(ts);
  if (!ts.at_end()) ts.error("trailing input after historical expression");
  return m;
}

}  // namespace lst
