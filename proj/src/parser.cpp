#include "lst/frontend.hpp"
#include "lst/lexer.hpp"

namespace lst {

namespace {

class Parser {
 public:
  explicit Parser(TokenStream& ts) : ts_(ts) {}

  std::vector<SurfaceDecl> program() {
    std::vector<SurfaceDecl> out;
    while (!ts_.at_end()) out.push_back(decl());
    return out;
  }

  SurfaceDecl decl() {
    SurfaceDecl d;
    d.line = ts_.peek().line;
    ts_.expect_kw("fun");
    d.name = fun_name();
    if (ts_.accept_sym("[")) {
      if (!ts_.at_sym("]")) {
        d.type_params.push_back(ts_.expect_ident());
        while (ts_.accept_sym(",")) d.type_params.push_back(ts_.expect_ident());
      }
      ts_.expect_sym("]");
    }
    if (ts_.accept_sym("<")) {
      do {
        std::string f = ts_.expect_ident();
        ts_.expect_sym(":");
        d.macro_params.emplace_back(f, sig());
      } while (ts_.accept_sym(","));
      ts_.expect_sym(">");
    }
    while (ts_.accept_sym("{")) {
      if (!ts_.at_sym("}")) {
        do {
          std::string x = ts_.expect_ident();
          ts_.expect_sym(":");
          d.hist_params.emplace_back(x, type());
        } while (ts_.accept_sym(","));
      }
      ts_.expect_sym("}");
    }
    ts_.expect_sym("(");
    d.params = ts_.at_sym(")") ? BunchedContext::empty() : ctx_comma();
    ts_.expect_sym(")");
    ts_.expect_sym(":");
    d.ret = type();
    ts_.expect_sym("=");
    d.body = expr();
    return d;
  }

  // ---- types

  StreamType type() {
    StreamType a = type_plus();
    if (ts_.accept_sym("||")) return StreamType::par(a, type());
    return a;
  }
  StreamType type_plus() {
    StreamType a = type_cat();
    if (ts_.accept_sym("+")) return StreamType::plus(a, type_plus());
    return a;
  }
  StreamType type_cat() {
    StreamType a = type_post();
    if (ts_.accept_sym(".")) return StreamType::cat(a, type_cat());
    return a;
  }
  StreamType type_post() {
    StreamType a = type_atom();
    while (ts_.accept_sym("*")) a = StreamType::star(a);
    return a;
  }
  StreamType type_atom() {
    if (ts_.accept_sym("(")) {
      StreamType a = type();
      ts_.expect_sym(")");
      return a;
    }
    const Token& t = ts_.peek();
    if (t.kind == Tok::Int && t.n == 1) {
      ts_.next();
      return StreamType::one();
    }
    std::string id = ts_.expect_ident();
    if (id == "Eps") return StreamType::eps();
    if (id == "Int") return StreamType::int_();
    if (id == "Bool") return StreamType::bool_();
    return StreamType::var(id);
  }

  BunchedContext ctx_comma() {
    BunchedContext a = ctx_semic();
    if (ts_.accept_sym(",")) return BunchedContext::comma(a, ctx_comma());
    return a;
  }
  BunchedContext ctx_semic() {
    BunchedContext a = ctx_atom();
    if (ts_.accept_sym(";")) return BunchedContext::semic(a, ctx_semic());
    return a;
  }
  BunchedContext ctx_atom() {
    if (ts_.accept_sym("(")) {
      if (ts_.accept_sym(")")) return BunchedContext::empty();
      BunchedContext g = ctx_comma();
      ts_.expect_sym(")");
      return g;
    }
    std::string x = ts_.expect_ident();
    ts_.expect_sym(":");
    return BunchedContext::bind(x, type());
  }

  MacroSig sig() {
    MacroSig s;
    if (ts_.accept_sym("{")) {
      if (!ts_.at_sym("}")) {
        s.hist.push_back(type());
        while (ts_.accept_sym(",")) s.hist.push_back(type());
      }
      ts_.expect_sym("}");
    }
    if (ts_.accept_sym("(")) {
      if (!ts_.at_sym(")")) {
        s.params.push_back(type());
        while (ts_.accept_sym(",") || ts_.accept_sym(";")) s.params.push_back(type());
      }
      ts_.expect_sym(")");
    } else {
      s.params.push_back(type());
    }
    ts_.expect_sym("->");
    s.ret = type();
    return s;
  }

  MacroArg macro_arg() {
    MacroArg a;
    a.name = fun_name();
    if (ts_.accept_sym("[")) a.targs = type_list("]");
    if (ts_.accept_sym("<")) {
      do a.margs.push_back(macro_arg());
      while (ts_.accept_sym(","));
      ts_.expect_sym(">");
    }
    return a;
  }

  std::vector<StreamType> type_list(const char* close) {
    std::vector<StreamType> out;
    if (!ts_.at_sym(close)) {
      out.push_back(type());
      while (ts_.accept_sym(",")) out.push_back(type());
    }
    ts_.expect_sym(close);
    return out;
  }

  // ---- expressions

  SExprP expr() {
    const Token& t = ts_.peek();
    if (ts_.at_kw("let")) return let_expr();
    if (ts_.at_kw("case")) return case_expr();
    if (ts_.at_kw("wait")) return wait_expr();
    if (ts_.accept_kw("if")) {
      auto e = node(SK::If, t);
      e->m = braces();
      ts_.expect_kw("then");
      e->kids.push_back(expr());
      ts_.expect_kw("else");
      e->kids.push_back(expr());
      return e;
    }
    return cons_expr();
  }

  SExprP cons_expr() {
    const Token& t = ts_.peek();
    SExprP a = app_expr();
    if (ts_.accept_sym("::")) {
      auto e = node(SK::Cons, t);
      e->kids = {a, cons_expr()};
      return e;
    }
    return a;
  }

  SExprP app_expr() {
    const Token& t = ts_.peek();
    if (ts_.accept_kw("inl") || ts_.accept_kw("inr")) {
      auto e = node(t.text == "inl" ? SK::Inl : SK::Inr, t);
      e->kids.push_back(atom());
      return e;
    }
    return atom();
  }

  SExprP atom() {
    const Token& t = ts_.peek();
    if (t.kind == Tok::Int) {
      auto e = node(SK::Int, t);
      e->n = ts_.next().n;
      return e;
    }
    if (ts_.accept_kw("true") || ts_.accept_kw("false")) {
      auto e = node(SK::Bool, t);
      e->b = t.text == "true";
      return e;
    }
    if (ts_.accept_kw("sink")) return node(SK::Sink, t);
    if (ts_.accept_kw("nil")) return node(SK::Nil, t);
    if (ts_.at_sym("{")) {
      auto e = node(SK::Hist, t);
      e->m = braces();
      return e;
    }
    if (ts_.accept_kw("rec")) {
      auto e = node(SK::Call, t);
      e->rec = true;
      call_tail(*e);
      return e;
    }
    if (ts_.accept_sym("(")) {
      if (ts_.accept_sym(")")) return node(SK::Unit, t);
      SExprP a = expr();
      if (ts_.at_sym(",") || ts_.at_sym(";")) {
        auto e = node(ts_.at_sym(",") ? SK::ParPair : SK::CatPair, t);
        ts_.next();
        e->kids = {a, expr()};
        ts_.expect_sym(")");
        return e;
      }
      ts_.expect_sym(")");
      return a;
    }
    if (ts_.at_ident() || ts_.at_kw("fold")) {
      std::string id = ts_.next().text;
      if (ts_.at_sym("[") || ts_.at_sym("<") || ts_.at_sym("{") || ts_.at_sym("(")) {
        auto e = node(SK::Call, t);
        e->name = id;
        call_tail(*e);
        return e;
      }
      auto e = node(SK::Var, t);
      e->name = id;
      return e;
    }
    ts_.error("expected an expression");
  }

  void call_tail(SExpr& e) {
    if (ts_.accept_sym("[")) e.targs = type_list("]");
    if (ts_.accept_sym("<")) {
      do e.margs.push_back(macro_arg());
      while (ts_.accept_sym(","));
      ts_.expect_sym(">");
    }
    while (ts_.accept_sym("{")) {
      if (!ts_.at_sym("}")) {
        e.hargs.push_back(parse_hist_expr(ts_));
        while (ts_.accept_sym(",")) e.hargs.push_back(parse_hist_expr(ts_));
      }
      ts_.expect_sym("}");
    }
    ts_.expect_sym("(");
    if (!ts_.at_sym(")")) {
      e.kids.push_back(expr());
      while (ts_.accept_sym(",") || ts_.accept_sym(";")) e.kids.push_back(expr());
    }
    ts_.expect_sym(")");
  }

  HistTerm braces() {
    ts_.expect_sym("{");
    HistTerm m = parse_hist_expr(ts_);
    ts_.expect_sym("}");
    return m;
  }

  SExprP let_expr() {
    const Token& t = ts_.peek();
    ts_.expect_kw("let");
    std::shared_ptr<SExpr> e;
    if (ts_.accept_sym("(")) {
      std::string x = binder();
      bool par = ts_.accept_sym(",");
      if (!par) ts_.expect_sym(";");
      std::string y = binder();
      ts_.expect_sym(")");
      e = node(par ? SK::LetPar : SK::LetCat, t);
      e->binders = {x, y};
    } else {
      e = node(SK::Let, t);
      e->binders = {binder()};
    }
    ts_.expect_sym("=");
    SExprP bound = expr();
    ts_.expect_kw("in");
    e->kids = {bound, expr()};
    return e;
  }

  SExprP case_expr() {
    const Token& t = ts_.peek();
    ts_.expect_kw("case");
    SExprP scrut = expr();
    ts_.expect_kw("of");
    ts_.accept_sym("|");
    std::shared_ptr<SExpr> e;
    if (ts_.at_kw("inl") || ts_.at_kw("inr")) {
      e = node(SK::SumCase, t);
      e->kids = {scrut, nullptr, nullptr};
      e->binders = {"", ""};
      for (int k = 0; k < 2; ++k) {
        if (k == 1) ts_.expect_sym("|");
        bool left = ts_.accept_kw("inl");
        if (!left) ts_.expect_kw("inr");
        int slot = left ? 0 : 1;
        if (e->kids[1 + slot]) ts_.error(std::string("duplicate ") + (left ? "inl" : "inr") + " branch");
        e->binders[slot] = pattern_binder();
        ts_.expect_sym("=>");
        e->kids[1 + slot] = expr();
      }
    } else {
      e = node(SK::StarCase, t);
      e->kids = {scrut, nullptr, nullptr};
      e->binders = {"", ""};
      for (int k = 0; k < 2; ++k) {
        if (k == 1) ts_.expect_sym("|");
        if (ts_.accept_kw("nil")) {
          if (e->kids[1]) ts_.error("duplicate nil branch");
          ts_.expect_sym("=>");
          e->kids[1] = expr();
        } else {
          if (e->kids[2]) ts_.error("duplicate cons branch");
          e->binders[0] = binder();
          ts_.expect_sym("::");
          e->binders[1] = binder();
          ts_.expect_sym("=>");
          e->kids[2] = expr();
        }
      }
    }
    return e;
  }

  std::string pattern_binder() {
    if (ts_.accept_sym("(")) {
      std::string x = binder();
      ts_.expect_sym(")");
      return x;
    }
    return binder();
  }

  std::string binder() { return ts_.expect_ident(); }

  // `fold` is a keyword of the historical language but a fine function name.
  std::string fun_name() {
    if (ts_.at_kw("fold")) return ts_.next().text;
    return ts_.expect_ident();
  }

  SExprP wait_expr() {
    const Token& t = ts_.peek();
    ts_.expect_kw("wait");
    auto e = node(SK::Wait, t);
    e->kids.push_back(expr());
    while (ts_.accept_sym(",")) e->kids.push_back(expr());
    if (ts_.accept_kw("as")) {
      e->binders.push_back(binder());
      while (ts_.accept_sym(",")) e->binders.push_back(binder());
    }
    ts_.expect_kw("do");
    e->kids.push_back(expr());
    ts_.expect_kw("end");
    return e;
  }

 private:
  static std::shared_ptr<SExpr> node(SK k, const Token& t) {
    auto e = std::make_shared<SExpr>();
    e->kind = k;
    e->line = t.line;
    e->col = t.col;
    return e;
  }

  TokenStream& ts_;
};

}  // namespace

std::vector<SurfaceDecl> parse_program(const std::string& src) {
  TokenStream ts(lex(src));
  return Parser(ts).program();
}

MacroArg parse_macro_arg(const std::string& text) {
  TokenStream ts(lex(text));
  MacroArg a = Parser(ts).macro_arg();
  if (!ts.at_end()) ts.error("trailing input after macro argument");
  return a;
}

}  // namespace lst
