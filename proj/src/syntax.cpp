#include "matrixprove/syntax.hpp"

#include <algorithm>
#include <cctype>
#include <optional>
#include <set>
#include <sstream>

#include "matrixprove/common.hpp"

namespace matrixprove {

std::string toHex(uint64_t v) {
  static const char* digits = "0123456789abcdef";
  std::string s(16, '0');
  for (int i = 15; i >= 0; --i) {
    s[i] = digits[v & 0xf];
    v >>= 4;
  }
  return s;
}

Term mkVar(std::string name) { return Term{std::move(name), true, {}}; }
Term mkConst(std::string name) { return Term{std::move(name), false, {}}; }
Term mkApp(std::string functor, std::vector<Term> args) {
  return Term{std::move(functor), false, std::move(args)};
}

std::string printTerm(const Term& t) {
  if (t.args.empty()) return t.name;
  std::string s = t.name + "(";
  for (size_t i = 0; i < t.args.size(); ++i) {
    if (i) s += ",";
    s += printTerm(t.args[i]);
  }
  return s + ")";
}

FormulaPtr fAtom(std::string pred, std::vector<Term> args) {
  auto f = std::make_shared<Formula>();
  f->kind = FKind::Atom;
  f->pred = std::move(pred);
  f->args = std::move(args);
  return f;
}
static FormulaPtr mkUnary(FKind k, FormulaPtr a) {
  auto f = std::make_shared<Formula>();
  f->kind = k;
  f->left = std::move(a);
  return f;
}
static FormulaPtr mkBinary(FKind k, FormulaPtr a, FormulaPtr b) {
  auto f = std::make_shared<Formula>();
  f->kind = k;
  f->left = std::move(a);
  f->right = std::move(b);
  return f;
}
static FormulaPtr mkQuant(FKind k, std::string v, FormulaPtr body) {
  auto f = std::make_shared<Formula>();
  f->kind = k;
  f->var = std::move(v);
  f->body = std::move(body);
  return f;
}
FormulaPtr fNeg(FormulaPtr f) { return mkUnary(FKind::Neg, std::move(f)); }
FormulaPtr fAnd(FormulaPtr a, FormulaPtr b) { return mkBinary(FKind::And, std::move(a), std::move(b)); }
FormulaPtr fOr(FormulaPtr a, FormulaPtr b) { return mkBinary(FKind::Or, std::move(a), std::move(b)); }
FormulaPtr fImp(FormulaPtr a, FormulaPtr b) { return mkBinary(FKind::Imp, std::move(a), std::move(b)); }
FormulaPtr fIff(FormulaPtr a, FormulaPtr b) { return mkBinary(FKind::Iff, std::move(a), std::move(b)); }
FormulaPtr fForall(std::string v, FormulaPtr body) { return mkQuant(FKind::Forall, std::move(v), std::move(body)); }
FormulaPtr fExists(std::string v, FormulaPtr body) { return mkQuant(FKind::Exists, std::move(v), std::move(body)); }

// ---------------------------------------------------------------------------
// Lexer

namespace {

enum class Tk {
  LWord, UWord, Number,
  LParen, RParen, LBrack, RBrack, Comma, Dot, Colon,
  Amp, Vline, Tilde, Implies, Iff, Bang, Quest, Eq, Neq,
  End
};

struct Token {
  Tk kind;
  std::string text;
  int line, col;
};

class Lexer {
 public:
  explicit Lexer(const std::string& src) : s_(src) { advance(); }

  const Token& peek() const { return tok_; }
  Token next() {
    Token t = tok_;
    advance();
    return t;
  }

 private:
  void advance() {
    skipWs();
    tok_.line = line_;
    tok_.col = col_;
    if (i_ >= s_.size()) {
      tok_ = {Tk::End, "", line_, col_};
      return;
    }
    char c = s_[i_];
    if (std::islower((unsigned char)c)) {
      tok_ = {Tk::LWord, word(), tok_.line, tok_.col};
      return;
    }
    if (std::isupper((unsigned char)c) || c == '_') {
      tok_ = {Tk::UWord, word(), tok_.line, tok_.col};
      return;
    }
    if (std::isdigit((unsigned char)c)) {
      std::string w;
      while (i_ < s_.size() && std::isdigit((unsigned char)s_[i_])) w += get();
      tok_ = {Tk::Number, w, tok_.line, tok_.col};
      return;
    }
    switch (c) {
      case '(': get(); tok_.kind = Tk::LParen; return;
      case ')': get(); tok_.kind = Tk::RParen; return;
      case '[': get(); tok_.kind = Tk::LBrack; return;
      case ']': get(); tok_.kind = Tk::RBrack; return;
      case ',': get(); tok_.kind = Tk::Comma; return;
      case '.': get(); tok_.kind = Tk::Dot; return;
      case ':': get(); tok_.kind = Tk::Colon; return;
      case '&': get(); tok_.kind = Tk::Amp; return;
      case '|': get(); tok_.kind = Tk::Vline; return;
      case '?': get(); tok_.kind = Tk::Quest; return;
      case '~':
        get();
        if (i_ < s_.size() && (s_[i_] == '|' || s_[i_] == '&'))
          fail("unsupported connective '~" + std::string(1, s_[i_]) + "'");
        tok_.kind = Tk::Tilde;
        return;
      case '!':
        get();
        if (i_ < s_.size() && s_[i_] == '=') { get(); tok_.kind = Tk::Neq; return; }
        tok_.kind = Tk::Bang;
        return;
      case '=':
        get();
        if (i_ < s_.size() && s_[i_] == '>') { get(); tok_.kind = Tk::Implies; return; }
        tok_.kind = Tk::Eq;
        return;
      case '<':
        get();
        if (i_ + 1 < s_.size() && s_[i_] == '=' && s_[i_ + 1] == '>') {
          get(); get();
          tok_.kind = Tk::Iff;
          return;
        }
        fail("unsupported token starting with '<'");
        return;
      default:
        fail(std::string("unexpected character '") + c + "'");
    }
  }

  std::string word() {
    std::string w;
    while (i_ < s_.size() &&
           (std::isalnum((unsigned char)s_[i_]) || s_[i_] == '_'))
      w += get();
    return w;
  }

  void skipWs() {
    while (i_ < s_.size()) {
      char c = s_[i_];
      if (c == '%') {
        while (i_ < s_.size() && s_[i_] != '\n') get();
      } else if (std::isspace((unsigned char)c)) {
        get();
      } else {
        break;
      }
    }
  }

  char get() {
    char c = s_[i_++];
    if (c == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    return c;
  }

  [[noreturn]] void fail(const std::string& msg) { throw ParseError(msg, line_, col_); }

  const std::string& s_;
  size_t i_ = 0;
  int line_ = 1, col_ = 1;
  Token tok_{};
};

// ---------------------------------------------------------------------------
// Parser

struct SymInfo {
  bool predicate;
  int arity;
  int line, col;
};

class Parser {
 public:
  explicit Parser(const std::string& src) : lex_(src) {
    symbols_["="] = {true, 2, 0, 0};
  }

  FormulaPtr problem() {
    std::vector<FormulaPtr> axioms;
    FormulaPtr conjecture;
    std::set<std::string> names;
    while (lex_.peek().kind != Tk::End) {
      Token kw = expect(Tk::LWord, "'fof'");
      if (kw.text != "fof") throw ParseError("expected 'fof', got '" + kw.text + "'", kw.line, kw.col);
      expect(Tk::LParen, "'('");
      Token name = lex_.next();
      if (name.kind != Tk::LWord && name.kind != Tk::Number)
        throw ParseError("expected formula name", name.line, name.col);
      if (!names.insert(name.text).second)
        throw ParseError("duplicate formula name '" + name.text + "'", name.line, name.col);
      expect(Tk::Comma, "','");
      Token role = expect(Tk::LWord, "role");
      expect(Tk::Comma, "','");
      FormulaPtr f = logic();
      expect(Tk::RParen, "')'");
      expect(Tk::Dot, "'.'");
      f = close(f);
      if (role.text == "axiom" || role.text == "hypothesis") {
        axioms.push_back(f);
      } else if (role.text == "conjecture") {
        if (conjecture)
          throw ParseError("more than one conjecture", role.line, role.col);
        conjecture = f;
      } else {
        throw ParseError("unsupported role '" + role.text + "'", role.line, role.col);
      }
    }
    if (!conjecture) throw ParseError("missing conjecture", 1, 1);
    FormulaPtr result = conjecture;
    if (!axioms.empty()) {
      FormulaPtr all = axioms[0];
      for (size_t i = 1; i < axioms.size(); ++i) all = fAnd(all, axioms[i]);
      result = fImp(all, conjecture);
    }
    return alphaNormalize(result);
  }

  FormulaPtr bare(bool normalize) {
    FormulaPtr f = logic();
    Token t = lex_.peek();
    if (t.kind != Tk::End) throw ParseError("trailing input", t.line, t.col);
    return normalize ? alphaNormalize(close(f)) : f;
  }

 private:
  FormulaPtr close(FormulaPtr f) {
    auto fv = freeVars(f);
    for (auto it = fv.rbegin(); it != fv.rend(); ++it) f = fForall(*it, f);
    return f;
  }

  FormulaPtr logic() {
    FormulaPtr l = unitary();
    Token op = lex_.peek();
    switch (op.kind) {
      case Tk::Amp:
      case Tk::Vline: {
        Tk k = op.kind;
        while (lex_.peek().kind == k) {
          lex_.next();
          FormulaPtr r = unitary();
          l = (k == Tk::Amp) ? fAnd(l, r) : fOr(l, r);
        }
        Token t = lex_.peek();
        if (t.kind == Tk::Amp || t.kind == Tk::Vline || t.kind == Tk::Implies || t.kind == Tk::Iff)
          throw ParseError("mixed binary connectives need parentheses", t.line, t.col);
        return l;
      }
      case Tk::Implies:
      case Tk::Iff: {
        lex_.next();
        FormulaPtr r = unitary();
        Token t = lex_.peek();
        if (t.kind == Tk::Amp || t.kind == Tk::Vline || t.kind == Tk::Implies || t.kind == Tk::Iff)
          throw ParseError("non-associative connective needs parentheses", t.line, t.col);
        return op.kind == Tk::Implies ? fImp(l, r) : fIff(l, r);
      }
      default:
        return l;
    }
  }

  FormulaPtr unitary() {
    Token t = lex_.peek();
    switch (t.kind) {
      case Tk::Tilde:
        lex_.next();
        return fNeg(unitary());
      case Tk::Bang:
      case Tk::Quest: {
        lex_.next();
        expect(Tk::LBrack, "'['");
        std::vector<std::string> vars;
        for (;;) {
          Token v = expect(Tk::UWord, "variable");
          vars.push_back(v.text);
          if (lex_.peek().kind == Tk::Comma) { lex_.next(); continue; }
          break;
        }
        expect(Tk::RBrack, "']'");
        expect(Tk::Colon, "':'");
        FormulaPtr body = unitary();
        for (auto it = vars.rbegin(); it != vars.rend(); ++it)
          body = (t.kind == Tk::Bang) ? fForall(*it, body) : fExists(*it, body);
        return body;
      }
      case Tk::LParen: {
        lex_.next();
        FormulaPtr f = logic();
        expect(Tk::RParen, "')'");
        return f;
      }
      case Tk::LWord:
      case Tk::UWord:
        return atomOrEquality();
      default:
        throw ParseError("expected a formula", t.line, t.col);
    }
  }

  FormulaPtr atomOrEquality() {
    Token start = lex_.peek();
    Term t = term();
    Token nxt = lex_.peek();
    if (nxt.kind == Tk::Eq || nxt.kind == Tk::Neq) {
      lex_.next();
      Term u = term();
      FormulaPtr eq = fAtom("=", {t, u});
      return nxt.kind == Tk::Eq ? eq : fNeg(eq);
    }
    if (t.var)
      throw ParseError("a bare variable is not a formula", start.line, start.col);
    recordSymbol(t.name, true, (int)t.args.size(), start);
    return fAtom(t.name, t.args);
  }

  Term term() {
    Token t = lex_.next();
    if (t.kind == Tk::UWord) return mkVar(t.text);
    if (t.kind != Tk::LWord)
      throw ParseError("expected a term", t.line, t.col);
    std::vector<Term> args;
    if (lex_.peek().kind == Tk::LParen) {
      lex_.next();
      for (;;) {
        args.push_back(termAsArgument(t));
        if (lex_.peek().kind == Tk::Comma) { lex_.next(); continue; }
        break;
      }
      expect(Tk::RParen, "')'");
    }
    return Term{t.text, false, args};
  }

  Term termAsArgument(const Token& head) {
    Token at = lex_.peek();
    Term a = term();
    if (!a.var) recordSymbol(a.name, false, (int)a.args.size(), at);
    (void)head;
    return a;
  }

  void recordSymbol(const std::string& name, bool predicate, int arity, const Token& at) {
    auto it = symbols_.find(name);
    if (it == symbols_.end()) {
      symbols_[name] = {predicate, arity, at.line, at.col};
      return;
    }
    if (it->second.predicate != predicate)
      throw ParseError("symbol '" + name + "' used both as predicate and as function", at.line, at.col);
    if (it->second.arity != arity)
      throw ParseError("arity clash for '" + name + "': " + std::to_string(it->second.arity) +
                           " vs " + std::to_string(arity),
                       at.line, at.col);
  }

  Token expect(Tk k, const std::string& what) {
    Token t = lex_.next();
    if (t.kind != k) throw ParseError("expected " + what, t.line, t.col);
    return t;
  }

  Lexer lex_;
  std::map<std::string, SymInfo> symbols_;
};

}  // namespace

FormulaPtr parseProblem(const std::string& text) { return Parser(text).problem(); }
FormulaPtr parseFofFormula(const std::string& text) { return Parser(text).bare(true); }
FormulaPtr parseFofFormulaExact(const std::string& text) { return Parser(text).bare(false); }

// ---------------------------------------------------------------------------
// Printing

static bool atomNeedsNoParens(const FormulaPtr& f) { return f->kind == FKind::Atom; }

std::string printFormula(const FormulaPtr& f) {
  switch (f->kind) {
    case FKind::Atom:
      if (f->pred == "=" && f->args.size() == 2)
        return printTerm(f->args[0]) + " = " + printTerm(f->args[1]);
      return printTerm(Term{f->pred, false, f->args});
    case FKind::Neg: {
      std::string inner = printFormula(f->left);
      if (atomNeedsNoParens(f->left) && !(f->left->pred == "=" && f->left->args.size() == 2))
        return "~" + inner;
      if (f->left->kind == FKind::Neg) return "~" + inner;
      return "~(" + inner + ")";
    }
    case FKind::And:
      return "(" + printFormula(f->left) + " & " + printFormula(f->right) + ")";
    case FKind::Or:
      return "(" + printFormula(f->left) + " | " + printFormula(f->right) + ")";
    case FKind::Imp:
      return "(" + printFormula(f->left) + " => " + printFormula(f->right) + ")";
    case FKind::Iff:
      return "(" + printFormula(f->left) + " <=> " + printFormula(f->right) + ")";
    case FKind::Forall:
      return "(! [" + f->var + "] : " + printFormula(f->body) + ")";
    case FKind::Exists:
      return "(? [" + f->var + "] : " + printFormula(f->body) + ")";
  }
  return "";
}

// ---------------------------------------------------------------------------
// Alpha operations and term substitution

namespace {

void freeVarsTerm(const Term& t, const std::set<std::string>& bound,
                  std::vector<std::string>& out, std::set<std::string>& seen) {
  if (t.var) {
    if (!bound.count(t.name) && seen.insert(t.name).second) out.push_back(t.name);
    return;
  }
  for (const Term& a : t.args) freeVarsTerm(a, bound, out, seen);
}

void freeVarsRec(const FormulaPtr& f, std::set<std::string>& bound,
                 std::vector<std::string>& out, std::set<std::string>& seen) {
  switch (f->kind) {
    case FKind::Atom:
      for (const Term& a : f->args) freeVarsTerm(a, bound, out, seen);
      break;
    case FKind::Neg:
      freeVarsRec(f->left, bound, out, seen);
      break;
    case FKind::And:
    case FKind::Or:
    case FKind::Imp:
    case FKind::Iff:
      freeVarsRec(f->left, bound, out, seen);
      freeVarsRec(f->right, bound, out, seen);
      break;
    case FKind::Forall:
    case FKind::Exists: {
      bool added = bound.insert(f->var).second;
      freeVarsRec(f->body, bound, out, seen);
      if (added) bound.erase(f->var);
      break;
    }
  }
}

Term renameTerm(const Term& t, const std::map<std::string, std::string>& ren) {
  if (t.var) {
    auto it = ren.find(t.name);
    return mkVar(it == ren.end() ? t.name : it->second);
  }
  Term r = t;
  for (Term& a : r.args) a = renameTerm(a, ren);
  return r;
}

FormulaPtr alphaRec(const FormulaPtr& f, std::map<std::string, std::string>& ren,
                    std::set<std::string>& used) {
  switch (f->kind) {
    case FKind::Atom: {
      std::vector<Term> args;
      args.reserve(f->args.size());
      for (const Term& a : f->args) args.push_back(renameTerm(a, ren));
      return fAtom(f->pred, std::move(args));
    }
    case FKind::Neg:
      return fNeg(alphaRec(f->left, ren, used));
    case FKind::And:
      return fAnd(alphaRec(f->left, ren, used), alphaRec(f->right, ren, used));
    case FKind::Or:
      return fOr(alphaRec(f->left, ren, used), alphaRec(f->right, ren, used));
    case FKind::Imp:
      return fImp(alphaRec(f->left, ren, used), alphaRec(f->right, ren, used));
    case FKind::Iff:
      return fIff(alphaRec(f->left, ren, used), alphaRec(f->right, ren, used));
    case FKind::Forall:
    case FKind::Exists: {
      std::string fresh = f->var;
      int k = 0;
      while (used.count(fresh)) fresh = f->var + std::to_string(k++);
      used.insert(fresh);
      auto old = ren.find(f->var);
      std::string saved;
      bool had = old != ren.end();
      if (had) saved = old->second;
      ren[f->var] = fresh;
      FormulaPtr body = alphaRec(f->body, ren, used);
      if (had) ren[f->var] = saved; else ren.erase(f->var);
      return f->kind == FKind::Forall ? fForall(fresh, body) : fExists(fresh, body);
    }
  }
  return f;
}

bool alphaEqRec(const FormulaPtr& a, const FormulaPtr& b,
                std::map<std::string, std::string>& m1,
                std::map<std::string, std::string>& m2);

bool termAlphaEq(const Term& a, const Term& b,
                 const std::map<std::string, std::string>& m1,
                 const std::map<std::string, std::string>& m2) {
  if (a.var != b.var) return false;
  if (a.var) {
    auto i1 = m1.find(a.name);
    auto i2 = m2.find(b.name);
    if (i1 != m1.end() || i2 != m2.end())
      return i1 != m1.end() && i2 != m2.end() && i1->second == b.name && i2->second == a.name;
    return a.name == b.name;
  }
  if (a.name != b.name || a.args.size() != b.args.size()) return false;
  for (size_t i = 0; i < a.args.size(); ++i)
    if (!termAlphaEq(a.args[i], b.args[i], m1, m2)) return false;
  return true;
}

bool alphaEqRec(const FormulaPtr& a, const FormulaPtr& b,
                std::map<std::string, std::string>& m1,
                std::map<std::string, std::string>& m2) {
  if (a->kind != b->kind) return false;
  switch (a->kind) {
    case FKind::Atom: {
      if (a->pred != b->pred || a->args.size() != b->args.size()) return false;
      for (size_t i = 0; i < a->args.size(); ++i)
        if (!termAlphaEq(a->args[i], b->args[i], m1, m2)) return false;
      return true;
    }
    case FKind::Neg:
      return alphaEqRec(a->left, b->left, m1, m2);
    case FKind::And:
    case FKind::Or:
    case FKind::Imp:
    case FKind::Iff:
      return alphaEqRec(a->left, b->left, m1, m2) && alphaEqRec(a->right, b->right, m1, m2);
    case FKind::Forall:
    case FKind::Exists: {
      auto s1 = m1.find(a->var) != m1.end() ? std::optional(m1[a->var]) : std::nullopt;
      auto s2 = m2.find(b->var) != m2.end() ? std::optional(m2[b->var]) : std::nullopt;
      m1[a->var] = b->var;
      m2[b->var] = a->var;
      bool ok = alphaEqRec(a->body, b->body, m1, m2);
      if (s1) m1[a->var] = *s1; else m1.erase(a->var);
      if (s2) m2[b->var] = *s2; else m2.erase(b->var);
      return ok;
    }
  }
  return false;
}

void collectSymbolsTerm(const Term& t, std::set<std::string>& out) {
  if (!t.var) out.insert(t.name);
  for (const Term& a : t.args) collectSymbolsTerm(a, out);
}

void collectSymbols(const FormulaPtr& f, std::set<std::string>& out) {
  switch (f->kind) {
    case FKind::Atom:
      out.insert(f->pred);
      for (const Term& a : f->args) collectSymbolsTerm(a, out);
      break;
    case FKind::Neg:
      collectSymbols(f->left, out);
      break;
    case FKind::And:
    case FKind::Or:
    case FKind::Imp:
    case FKind::Iff:
      collectSymbols(f->left, out);
      collectSymbols(f->right, out);
      break;
    case FKind::Forall:
    case FKind::Exists:
      collectSymbols(f->body, out);
      break;
  }
}

}  // namespace

FormulaPtr alphaNormalize(const FormulaPtr& f) {
  std::map<std::string, std::string> ren;
  std::set<std::string> used;
  for (const std::string& v : freeVars(f)) used.insert(v);
  return alphaRec(f, ren, used);
}

bool alphaEquivalent(const FormulaPtr& a, const FormulaPtr& b) {
  std::map<std::string, std::string> m1, m2;
  return alphaEqRec(a, b, m1, m2);
}

bool formulaEq(const FormulaPtr& a, const FormulaPtr& b) {
  if (a->kind != b->kind) return false;
  switch (a->kind) {
    case FKind::Atom:
      return a->pred == b->pred && a->args == b->args;
    case FKind::Neg:
      return formulaEq(a->left, b->left);
    case FKind::And:
    case FKind::Or:
    case FKind::Imp:
    case FKind::Iff:
      return formulaEq(a->left, b->left) && formulaEq(a->right, b->right);
    case FKind::Forall:
    case FKind::Exists:
      return a->var == b->var && formulaEq(a->body, b->body);
  }
  return false;
}

std::vector<std::string> freeVars(const FormulaPtr& f) {
  std::set<std::string> bound, seen;
  std::vector<std::string> out;
  freeVarsRec(f, bound, out, seen);
  return out;
}

Term substituteTerm(const Term& t, const std::map<std::string, Term>& sub) {
  if (t.var) {
    auto it = sub.find(t.name);
    return it == sub.end() ? t : it->second;
  }
  Term r = t;
  for (Term& a : r.args) a = substituteTerm(a, sub);
  return r;
}

FormulaPtr substituteTerms(const FormulaPtr& f, const std::map<std::string, Term>& sub) {
  if (sub.empty()) return f;
  switch (f->kind) {
    case FKind::Atom: {
      std::vector<Term> args;
      args.reserve(f->args.size());
      for (const Term& a : f->args) args.push_back(substituteTerm(a, sub));
      return fAtom(f->pred, std::move(args));
    }
    case FKind::Neg:
      return fNeg(substituteTerms(f->left, sub));
    case FKind::And:
      return fAnd(substituteTerms(f->left, sub), substituteTerms(f->right, sub));
    case FKind::Or:
      return fOr(substituteTerms(f->left, sub), substituteTerms(f->right, sub));
    case FKind::Imp:
      return fImp(substituteTerms(f->left, sub), substituteTerms(f->right, sub));
    case FKind::Iff:
      return fIff(substituteTerms(f->left, sub), substituteTerms(f->right, sub));
    case FKind::Forall:
    case FKind::Exists: {
      auto it = sub.find(f->var);
      if (it == sub.end()) {
        FormulaPtr body = substituteTerms(f->body, sub);
        return f->kind == FKind::Forall ? fForall(f->var, body) : fExists(f->var, body);
      }
      std::map<std::string, Term> inner(sub);
      inner.erase(f->var);
      FormulaPtr body = substituteTerms(f->body, inner);
      return f->kind == FKind::Forall ? fForall(f->var, body) : fExists(f->var, body);
    }
  }
  return f;
}

bool isPropositional(const FormulaPtr& f) {
  switch (f->kind) {
    case FKind::Atom:
      return f->args.empty();
    case FKind::Neg:
      return isPropositional(f->left);
    case FKind::And:
    case FKind::Or:
    case FKind::Imp:
    case FKind::Iff:
      return isPropositional(f->left) && isPropositional(f->right);
    case FKind::Forall:
    case FKind::Exists:
      return false;
  }
  return false;
}

std::vector<std::string> symbolsOf(const FormulaPtr& f) {
  std::set<std::string> s;
  collectSymbols(f, s);
  return {s.begin(), s.end()};
}

}  // namespace matrixprove
