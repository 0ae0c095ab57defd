#pragma once

#include <functional>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "lst/core.hpp"
#include "lst/typecheck.hpp"

namespace lst {

// ---------------------------------------------------------------- surface

enum class SK {
  Var, Unit, Sink, Int, Bool, ParPair, CatPair, LetPar, LetCat, Let, Inl, Inr,
  SumCase, StarCase, Nil, Cons, Wait, Hist, If, Call
};

struct SExpr;
using SExprP = std::shared_ptr<const SExpr>;

// `f[T..]<g..>` as written in a macro argument position.
struct MacroArg {
  std::string name;
  std::vector<StreamType> targs;
  std::vector<MacroArg> margs;
};

// Field usage:
//   Var name | Int n | Bool b | ParPair/CatPair/Cons kids[0..1]
//   LetPar/LetCat binders[0..1] kids = {bound, body} | Let binders[0]
//   Inl/Inr kids[0] | SumCase kids = {scrut, left, right} binders = {x, y}
//   StarCase kids = {scrut, nil branch, cons branch} binders = {x, xs}
//   Wait kids = {scrutinees.., body} binders = `as` names
//   Hist m | If m kids = {then, else}
//   Call name targs margs hargs kids = stream args; rec marks `rec(..)`
struct SExpr {
  SK kind = SK::Unit;
  std::string name;
  std::vector<SExprP> kids;
  std::vector<std::string> binders;
  HistTerm m;
  std::int64_t n = 0;
  bool b = false;
  std::vector<StreamType> targs;
  std::vector<MacroArg> margs;
  std::vector<HistTerm> hargs;
  bool rec = false;
  int line = 0, col = 0;
};

// `{H..}(S..) -> R`, checked nominally against the instantiated argument.
struct MacroSig {
  std::vector<StreamType> hist;
  std::vector<StreamType> params;
  StreamType ret;
};

struct SurfaceDecl {
  std::string name;
  std::vector<std::string> type_params;
  std::vector<std::pair<std::string, MacroSig>> macro_params;
  std::vector<std::pair<std::string, StreamType>> hist_params;  // flattened on instantiation
  BunchedContext params;
  StreamType ret;
  SExprP body;
  int line = 0;
  bool from_prelude = false;
};

// Throws ParseError with line and column.
std::vector<SurfaceDecl> parse_program(const std::string& src);

// Embedded prelude source (sum, length, spanGt and helpers).
const std::string& prelude_source();

// ------------------------------------------------------------ elaboration

// A resolved function reference: closed type arguments and resolved macro
// arguments.
struct FunRef {
  std::string name;
  std::vector<StreamType> targs;
  std::vector<FunRef> margs;
  std::string key() const;
};

struct ElabEnv {
  const SurfaceDecl* decl = nullptr;
  std::map<std::string, StreamType> tsubst;
  std::map<std::string, FunRef> msubst;
  // Turns a call target into its (raw) instantiated definition.
  std::function<RecDefP(const FunRef&)> resolve;
};

// Resolves a written macro argument (e.g. `liftP[s]<f>`) under the current
// type and macro substitutions.
FunRef resolve_macro_arg(const MacroArg& a, const std::map<std::string, StreamType>& tsubst,
                         const std::map<std::string, FunRef>& msubst);

// Type under the substitution; throws NonClosedTypeArg if a variable is left.
StreamType close_type(const StreamType& t, const std::map<std::string, StreamType>& tsubst);

// Surface body to core term in sequent form: scrutinees become variables,
// shadowing is removed, self-calls become Rec, other calls Fix.
Term elaborate(const SExprP& body, const ElabEnv& env);

// --------------------------------------------------------- monomorphizing

struct CompiledEntry {
  RecDefP def;           // annotated definition
  Term term;             // annotated `fix def{hargs}(params)`
  BunchedContext gamma;  // input context
  StreamType type;
  Inert inert = Inert::I;
  std::vector<std::string> warnings;
};

class Compiler {
 public:
  // The prelude is added first; user declarations with the same name
  // replace prelude ones.
  explicit Compiler(const std::string& program, bool with_prelude = true,
                    const std::string* prelude_override = nullptr);

  const std::vector<SurfaceDecl>& decls() const { return decls_; }
  const SurfaceDecl& decl(const std::string& name) const;
  bool has(const std::string& name) const;

  // Raw elaborated definition; cached per key, so equal keys give the same
  // pointer.
  RecDefP instantiate(const FunRef& ref);

  // Instantiate, then typecheck in annotate mode.
  CompiledEntry compile(const FunRef& ref, const std::vector<HistTerm>& hargs = {});

 private:
  std::vector<SurfaceDecl> decls_;
  std::map<std::string, size_t> index_;
  std::map<std::string, RecDefP> cache_;
  std::set<std::string> in_progress_;
};

// Parses `f[T..]<g..>` as used on the command line.
MacroArg parse_macro_arg(const std::string& text);

}  // namespace lst
