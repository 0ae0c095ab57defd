#pragma once

#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "lst/hist.hpp"
#include "lst/prefix.hpp"
#include "lst/types.hpp"

namespace lst {

enum class TermKind {
  Sink, Unit, Var, ParPair, CatPair, LetPar, LetCat, Inl, Inr, SumCase,
  Nil, Cons, StarCase, Let, HistPgm, Wait, Fix, Rec, ArgsLet, IntLit, BoolLit
};

enum class ArgsKind { Emp, Sng, Comma, Semic1, Semic2 };

enum class Inert { I, J };
inline Inert max(Inert a, Inert b) { return (a == Inert::J || b == Inert::J) ? Inert::J : Inert::I; }
inline const char* inert_name(Inert i) { return i == Inert::I ? "I" : "J"; }

// A runtime buffer: the context the buffering term was typed in before any
// input arrived, and everything received for it so far.
struct Buffer {
  BunchedContext ctx;
  Environment env;
};

struct TermNode;
struct ArgsNode;
struct RecDef;
using VarSet = std::set<std::string>;

class Term {
 public:
  Term();  // sink
  explicit Term(std::shared_ptr<const TermNode> n) : node_(std::move(n)) {}
  const TermNode& operator*() const { return *node_; }
  const TermNode* operator->() const { return node_.get(); }
  TermKind kind() const;
  const VarSet& fv() const;
  std::string str() const;
  const TermNode* get() const { return node_.get(); }

 private:
  std::shared_ptr<const TermNode> node_;
};

class Args {
 public:
  Args();  // empty
  explicit Args(std::shared_ptr<const ArgsNode> n) : node_(std::move(n)) {}
  const ArgsNode& operator*() const { return *node_; }
  const ArgsNode* operator->() const { return node_.get(); }
  ArgsKind kind() const;
  const VarSet& fv() const;
  std::string str() const;

 private:
  std::shared_ptr<const ArgsNode> node_;
};

// A recursive definition: `Omega | Gamma -> ret` with a body that may
// contain Rec nodes.
struct RecDef {
  std::string name;
  HistContext omega;
  BunchedContext gamma;
  StreamType ret;
  Term body;
};
using RecDefP = std::shared_ptr<const RecDef>;

// Field usage per kind:
//   Var x | LetPar x y z e | LetCat ann1=t x y z e | Inl e ann1=other side
//   Inr e ann1=other side | SumCase ann1=r buf z x e1 y e2 | Nil ann1=elem
//   Cons e1 e2 | StarCase ann1=s ann2=r buf z e1 x y(=xs) e2 | Let x e1 e2
//   HistPgm m ann1=s | Wait buf ann1=t x y(=history binder) e
//   Fix def hargs args | Rec hargs args | ArgsLet gamma args e
struct TermNode {
  TermKind kind = TermKind::Sink;
  std::string x, y, z;
  std::vector<Term> kids;
  std::optional<StreamType> ann1, ann2;
  std::optional<Buffer> buf;
  HistTerm m;
  std::int64_t n = 0;
  bool b = false;
  std::vector<HistTerm> hargs;
  Args args;
  BunchedContext gamma;
  RecDefP def;
  VarSet fv;
};

struct ArgsNode {
  ArgsKind kind = ArgsKind::Emp;
  Term e;
  Args a1, a2;
  VarSet fv;
};

namespace tm {

Term sink();
Term unit();
Term var(std::string x);
Term int_(std::int64_t n);
Term bool_(bool b);
Term par(Term a, Term b);
Term cat(Term a, Term b);
Term letpar(std::string x, std::string y, std::string z, Term e);
Term letcat(std::optional<StreamType> t, std::string x, std::string y, std::string z, Term e);
Term inl(Term e, std::optional<StreamType> right = std::nullopt);
Term inr(Term e, std::optional<StreamType> left = std::nullopt);
Term sumcase(std::optional<StreamType> r, std::optional<Buffer> buf, std::string z, std::string x, Term e1,
             std::string y, Term e2);
Term nil(std::optional<StreamType> elem = std::nullopt);
Term cons(Term a, Term b);
Term starcase(std::optional<StreamType> s, std::optional<StreamType> r, std::optional<Buffer> buf, std::string z,
              Term e1, std::string x, std::string xs, Term e2);
Term let(std::string x, Term e1, Term e2);
Term hist(HistTerm m, std::optional<StreamType> s = std::nullopt);
Term wait(std::optional<Buffer> buf, std::optional<StreamType> t, std::string x, Term e);
Term wait_as(std::optional<Buffer> buf, std::optional<StreamType> t, std::string x, std::string hx, Term e);
Term fix(RecDefP def, std::vector<HistTerm> hargs, Args args);
Term rec(std::vector<HistTerm> hargs, Args args);
Term argslet(BunchedContext gamma, Args args, Term e);

// Rebuilds a node with the given fields (used by transformations).
Term make(TermNode n);

}  // namespace tm

namespace ar {

Args emp();
Args sng(Term e);
Args comma(Args a, Args b);
Args semic1(Args a, Args b);
Args semic2(Args a);

}  // namespace ar

bool term_equal(const Term& a, const Term& b);
bool args_equal(const Args& a, const Args& b);
inline bool operator==(const Term& a, const Term& b) { return term_equal(a, b); }
inline bool operator!=(const Term& a, const Term& b) { return !term_equal(a, b); }

Term sink_term(const Prefix& p);

// Replaces Rec(M, A) with Fix(def, M, A'); does not enter Fix bodies.
Term fix_subst(const Term& e, const RecDefP& def);
Args fix_subst_args(const Args& a, const RecDefP& def);

// e[to/from] on stream variables. Does not enter ArgsLet or Fix bodies,
// which are closed. Throws CaptureError.
Term rename_var(const Term& e, const std::string& from, const std::string& to);

// Substitutes history values into every history term of e.
Term hist_subst_term(const Term& e, const HistSubst& theta);
Args hist_subst_args(const Args& a, const HistSubst& theta);

// Argument tree mirroring a context's shape, with `Var v` at every bind
// except `x`, which gets `e`.
Args mirror_args(const BunchedContext& g, const std::string& x, const Term& e);

size_t term_size(const Term& e);

}  // namespace lst
