#include "lst/lexer.hpp"

#include <cctype>
#include <cstring>

#include "lst/error.hpp"

namespace lst {

namespace {

const char* const kSyms[] = {"||", "::", "=>", "->", "<=", ">=", "==", "!=", "(", ")", "[", "]", "{", "}",
                             "<",  ">",  ",",  ";",  ":",  ".",  "+",  "-",  "*",  "/", "=", "|", "!"};

const char* const kKeywords[] = {"fun",  "let", "in",   "case", "of",    "nil",  "inl", "inr",
                                 "wait", "as",  "do",   "end",  "if",    "then", "else", "sink",
                                 "true", "false", "fst", "snd", "fold", "init", "rec"};

}  // namespace

bool is_keyword(const std::string& s) {
  for (const char* k : kKeywords)
    if (s == k) return true;
  return false;
}

std::vector<Token> lex(const std::string& src) {
  std::vector<Token> out;
  int line = 1, col = 1;
  size_t i = 0;
  auto advance = [&](size_t n) {
    for (size_t k = 0; k < n; ++k) {
      if (src[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
      ++i;
    }
  };
  while (i < src.size()) {
    unsigned char c = static_cast<unsigned char>(src[i]);
    if (std::isspace(c)) {
      advance(1);
      continue;
    }
    if (src.compare(i, 2, "--") == 0) {
      while (i < src.size() && src[i] != '\n') advance(1);
      continue;
    }
    Token t;
    t.line = line;
    t.col = col;
    if (std::isalpha(c) || c == '_') {
      size_t j = i;
      while (j < src.size() &&
             (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_' || src[j] == '\''))
        ++j;
      t.kind = Tok::Ident;
      t.text = src.substr(i, j - i);
      advance(j - i);
      out.push_back(t);
      continue;
    }
    if (std::isdigit(c)) {
      size_t j = i;
      while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
      t.kind = Tok::Int;
      t.text = src.substr(i, j - i);
      try {
        t.n = std::stoll(t.text);
      } catch (const std::exception&) {
        fail(ErrorKind::ParseError, "integer literal out of range at line " + std::to_string(line));
      }
      advance(j - i);
      out.push_back(t);
      continue;
    }
    bool matched = false;
    for (const char* s : kSyms) {
      size_t n = std::strlen(s);
      if (src.compare(i, n, s) == 0) {
        t.kind = Tok::Sym;
        t.text = s;
        advance(n);
        out.push_back(t);
        matched = true;
        break;
      }
    }
    if (!matched)
      fail(ErrorKind::ParseError, "unexpected character '" + std::string(1, src[i]) + "' at line " +
                                      std::to_string(line) + ", column " + std::to_string(col));
  }
  Token end;
  end.kind = Tok::End;
  end.line = line;
  end.col = col;
  out.push_back(end);
  return out;
}

TokenStream::TokenStream(std::vector<Token> toks) : toks_(std::move(toks)) {
  if (toks_.empty() || toks_.back().kind != Tok::End) toks_.push_back(Token{});
}

const Token& TokenStream::peek(size_t k) const {
  size_t p = pos_ + k;
  return p < toks_.size() ? toks_[p] : toks_.back();
}

Token TokenStream::next() {
  Token t = peek();
  if (pos_ + 1 < toks_.size()) ++pos_;
  return t;
}

bool TokenStream::at_sym(const char* s, size_t k) const {
  const Token& t = peek(k);
  return t.kind == Tok::Sym && t.text == s;
}

bool TokenStream::at_kw(const char* s, size_t k) const {
  const Token& t = peek(k);
  return t.kind == Tok::Ident && t.text == s;
}

bool TokenStream::at_ident(size_t k) const {
  const Token& t = peek(k);
  return t.kind == Tok::Ident && !is_keyword(t.text);
}

bool TokenStream::accept_sym(const char* s) {
  if (!at_sym(s)) return false;
  next();
  return true;
}

bool TokenStream::accept_kw(const char* s) {
  if (!at_kw(s)) return false;
  next();
  return true;
}

void TokenStream::expect_sym(const char* s) {
  if (!accept_sym(s)) error(std::string("expected '") + s + "'");
}

void TokenStream::expect_kw(const char* s) {
  if (!accept_kw(s)) error(std::string("expected '") + s + "'");
}

std::string TokenStream::expect_ident() {
  if (!at_ident()) error("expected an identifier");
  return next().text;
}

void TokenStream::error(const std::string& msg) const {
  const Token& t = peek();
  std::string near = t.kind == Tok::End ? "end of input" : "'" + t.text + "'";
  fail(ErrorKind::ParseError, msg + " near " + near + " at line " + std::to_string(t.line) + ", column " +
                                  std::to_string(t.col));
}

}  // namespace lst
