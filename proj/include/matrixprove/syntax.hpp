#pragma once

// Terms, formulas, a TPTP-FOF-subset parser, and canonical printing.

#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace matrixprove {

// First-order term. Variables have no arguments; constants are zero-arity
// applications.
struct Term {
  std::string name;
  bool var = false;
  std::vector<Term> args;

  bool operator==(const Term& o) const {
    return var == o.var && name == o.name && args == o.args;
  }
  bool operator!=(const Term& o) const { return !(*this == o); }
};

Term mkVar(std::string name);
Term mkConst(std::string name);
Term mkApp(std::string functor, std::vector<Term> args);

std::string printTerm(const Term& t);

enum class FKind { Atom, Neg, And, Or, Imp, Iff, Forall, Exists };

struct Formula;
using FormulaPtr = std::shared_ptr<const Formula>;

struct Formula {
  FKind kind;
  // Atom
  std::string pred;
  std::vector<Term> args;
  // Binary / unary
  FormulaPtr left, right;  // Neg uses left only
  // Quantifiers
  std::string var;
  FormulaPtr body;
};

FormulaPtr fAtom(std::string pred, std::vector<Term> args = {});
FormulaPtr fNeg(FormulaPtr f);
FormulaPtr fAnd(FormulaPtr a, FormulaPtr b);
FormulaPtr fOr(FormulaPtr a, FormulaPtr b);
FormulaPtr fImp(FormulaPtr a, FormulaPtr b);
FormulaPtr fIff(FormulaPtr a, FormulaPtr b);
FormulaPtr fForall(std::string var, FormulaPtr body);
FormulaPtr fExists(std::string var, FormulaPtr body);

// Parse error with 1-based source coordinates.
struct ParseError : std::runtime_error {
  int line, col;
  ParseError(const std::string& msg, int line, int col)
      : std::runtime_error(msg + " at line " + std::to_string(line) + ", column " + std::to_string(col)),
        line(line), col(col) {}
};

// Parses a sequence of `fof(name, role, formula).` units with roles
// axiom/hypothesis/conjecture (exactly one conjecture) and returns
// (axiom_1 & ... & axiom_n) => conjecture, alpha-normalized. Free variables
// of each unit are implicitly universally closed. `%` starts a line comment.
FormulaPtr parseProblem(const std::string& text);

// Parses a single bare formula (test and tooling convenience); applies the
// same implicit closure and alpha-normalization.
FormulaPtr parseFofFormula(const std::string& text);

// Parses a bare formula verbatim: no closure, no renaming. Used where the
// exact variable names must survive a round-trip.
FormulaPtr parseFofFormulaExact(const std::string& text);

// Unambiguous, re-parseable rendering; parseFofFormula(printFormula(f)) is
// alpha-equivalent to f.
std::string printFormula(const FormulaPtr& f);

// Renames bound variables so they are globally unique. Idempotent.
FormulaPtr alphaNormalize(const FormulaPtr& f);

bool alphaEquivalent(const FormulaPtr& a, const FormulaPtr& b);
bool formulaEq(const FormulaPtr& a, const FormulaPtr& b);

// Free variables in first-occurrence order.
std::vector<std::string> freeVars(const FormulaPtr& f);

// Capture-aware substitution of terms for free variables.
FormulaPtr substituteTerms(const FormulaPtr& f, const std::map<std::string, Term>& sub);
Term substituteTerm(const Term& t, const std::map<std::string, Term>& sub);

bool isPropositional(const FormulaPtr& f);

// All predicate/function/constant symbols occurring in f.
std::vector<std::string> symbolsOf(const FormulaPtr& f);

}  // namespace matrixprove
