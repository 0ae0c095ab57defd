#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace lst {

enum class Tok { Ident, Int, Sym, End };

struct Token {
  Tok kind = Tok::End;
  std::string text;
  std::int64_t n = 0;
  int line = 1;
  int col = 1;
};

// `--` starts a line comment. Identifiers may contain `'`.
std::vector<Token> lex(const std::string& src);

class TokenStream {
 public:
  explicit TokenStream(std::vector<Token> toks);

  const Token& peek(size_t k = 0) const;
  Token next();
  size_t pos() const { return pos_; }
  void reset(size_t p) { pos_ = p; }

  bool at_sym(const char* s, size_t k = 0) const;
  bool at_kw(const char* s, size_t k = 0) const;
  bool at_ident(size_t k = 0) const;  // identifiers that are not keywords
  bool at_end() const { return peek().kind == Tok::End; }

  bool accept_sym(const char* s);
  bool accept_kw(const char* s);
  void expect_sym(const char* s);
  void expect_kw(const char* s);
  std::string expect_ident();

  [[noreturn]] void error(const std::string& msg) const;

 private:
  std::vector<Token> toks_;
  size_t pos_ = 0;
};

bool is_keyword(const std::string& s);

class HistTerm;
// Parses one history expression starting at the current token.
HistTerm parse_hist_expr(TokenStream& ts);

}  // namespace lst
