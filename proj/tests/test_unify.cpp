#include <doctest.h>

#include "matrixprove/unify.hpp"
#include "testutil.hpp"

using namespace matrixprove;

namespace {

// All ground terms over {a, f(.), g(.,.)} up to depth 2.
std::vector<Term> groundUniverse() {
  std::vector<Term> d0 = {mkConst("a"), mkConst("b")};
  std::vector<Term> d1 = d0;
  for (const Term& t : d0) d1.push_back(mkApp("f", {t}));
  return d1;
}

Term randTerm(std::mt19937_64& rng, int depth) {
  switch (rng() % 5) {
    case 0: return mkVar("X" + std::to_string(rng() % 3));
    case 1: return mkConst(rng() % 2 ? "a" : "b");
    case 2:
      if (depth > 0) return mkApp("f", {randTerm(rng, depth - 1)});
      return mkConst("a");
    case 3:
      if (depth > 0) return mkApp("g", {randTerm(rng, depth - 1), randTerm(rng, depth - 1)});
      return mkConst("b");
    default: return mkVar("X" + std::to_string(rng() % 3));
  }
}

void collectVars(const Term& t, std::set<std::string>& out) {
  if (t.var) {
    out.insert(t.name);
    return;
  }
  for (const Term& a : t.args) collectVars(a, out);
}

Term groundSubst(const Term& t, const std::map<std::string, Term>& th) {
  if (t.var) return th.at(t.name);
  Term r = t;
  for (Term& a : r.args) a = groundSubst(a, th);
  return r;
}

}  // namespace

TEST_CASE("textbook unifications") {
  TermSubst s;
  CHECK(s.unify(fAtom("p", {mkVar("X")})->args[0], mkConst("c")));
  CHECK(s.apply(mkVar("X")) == mkConst("c"));

  TermSubst s2;
  CHECK(!s2.unify(mkVar("X"), mkApp("f", {mkVar("X")})));  // occurs check
}

TEST_CASE("equality chains resolve as in the goal-driven example") {
  // r(Y) against r(x0) forces Y -> x0; then X = Y against X' = X' forces the
  // reflexivity instantiation.
  TermSubst s;
  REQUIRE(s.unify(mkVar("Y"), mkConst("x0")));
  REQUIRE(s.unifyArgs({mkVar("X"), mkVar("Y")}, {mkVar("Xr"), mkVar("Xr")}));
  CHECK(s.apply(mkVar("X")) == mkConst("x0"));
  CHECK(s.apply(mkVar("Xr")) == mkConst("x0"));
}

TEST_CASE("unifier is most general and failure is honest") {
  std::mt19937_64 rng(11);
  auto universe = groundUniverse();
  for (int i = 0; i < 300; ++i) {
    Term a = randTerm(rng, 2), b = randTerm(rng, 2);
    std::set<std::string> vars;
    collectVars(a, vars);
    collectVars(b, vars);
    std::vector<std::string> vs(vars.begin(), vars.end());

    TermSubst s;
    bool unified = s.unify(a, b);
    bool anyGround = false;
    std::map<std::string, Term> th;
    std::function<void(size_t)> rec = [&](size_t k) {
      if (k == vs.size()) {
        if (groundSubst(a, th) == groundSubst(b, th)) {
          anyGround = true;
          if (unified) {
            // the ground unifier factors through the computed one
            for (const auto& v : vs) CHECK(groundSubst(s.apply(mkVar(v)), th) == th.at(v));
          }
        }
        return;
      }
      for (const Term& u : universe) {
        th[vs[k]] = u;
        rec(k + 1);
      }
      th.erase(vs[k]);
    };
    rec(0);
    if (anyGround) CHECK(unified);
    if (unified) CHECK(s.apply(a) == s.apply(b));
  }
}

TEST_CASE("failed unification restores the substitution") {
  TermSubst s;
  REQUIRE(s.unify(mkVar("A"), mkConst("a")));
  auto before = s.bindings();
  size_t mk = s.mark();
  CHECK(!s.unify(mkApp("g", {mkVar("B"), mkVar("B")}),
                 mkApp("g", {mkConst("a"), mkConst("b")})));
  s.undoTo(mk);
  CHECK(s.bindings().size() == before.size());
  CHECK(s.apply(mkVar("A")) == mkConst("a"));
  CHECK(s.apply(mkVar("B")) == mkVar("B"));
}

// ---------------------------------------------------------------------------
// Prefix unification

namespace {

// A scratch matrix providing named characters: vars z1..z4, consts a1..a4.
struct CharBox {
  Matrix m;
  std::map<std::string, CharId> byName;
  CharBox() {
    m = Matrix::build(parseFofFormula("p => p"), Mode::Classical);
    for (int i = 1; i <= 4; ++i) {
      byName["z" + std::to_string(i)] = (CharId)m.chars.size();
      m.chars.push_back(PrefixChar{true, m.root, "z" + std::to_string(i)});
      byName["a" + std::to_string(i)] = (CharId)m.chars.size();
      m.chars.push_back(PrefixChar{false, m.root, "a" + std::to_string(i)});
    }
  }
  PrefixString str(const std::vector<std::string>& names) {
    PrefixString s;
    for (const auto& n : names) s.push_back(byName.at(n));
    return s;
  }
};

std::vector<std::map<CharId, PrefixString>> enumerate(CharBox& box, const PrefixString& a,
                                                      const PrefixString& b, int cap = 32) {
  std::vector<std::map<CharId, PrefixString>> out;
  PrefixSubst sj;
  long budget = 100000;
  sj.forEachUnifier(a, b, box.m, cap, &budget,
                    [&] {
                      std::map<CharId, PrefixString> sol;
                      for (const auto& [k, v] : sj.bindings()) sol[k] = v;
                      out.push_back(sol);
                      return false;  // keep enumerating
                    },
                    nullptr);
  return out;
}

}  // namespace

TEST_CASE("prefix unification solves the motivating equation") {
  CharBox box;
  // a1.z1 against a1.a2 has exactly the solution z1 -> a2
  PrefixSubst sj;
  long budget = 1000;
  int count = 0;
  sj.forEachUnifier(box.str({"a1", "z1"}), box.str({"a1", "a2"}), box.m, 8, &budget,
                    [&] {
                      ++count;
                      CHECK(sj.resolve(box.str({"z1"})) == box.str({"a2"}));
                      return false;
                    },
                    nullptr);
  CHECK(count == 1);
}

TEST_CASE("rigid head clash has no solution") {
  CharBox box;
  CHECK(enumerate(box, box.str({"a1", "z1"}), box.str({"a2"})).empty());
}

TEST_CASE("two-variable equation covers all bounded ground solutions") {
  CharBox box;
  PrefixString lhs = box.str({"z1", "a1"});
  PrefixString rhs = box.str({"a1", "z2"});
  auto sols = enumerate(box, lhs, rhs);
  CHECK(!sols.empty());

  std::vector<CharId> vars = {box.byName["z1"], box.byName["z2"]};
  std::vector<CharId> consts = {box.byName["a1"]};
  auto ground = testutil::brutePrefixSolutions(lhs, rhs, vars, consts, 3);
  // the empty and the one-character solutions are present
  bool sawEmpty = false, sawSingle = false;
  for (const auto& g : ground) {
    if (g.at(vars[0]).empty() && g.at(vars[1]).empty()) sawEmpty = true;
    if (g.at(vars[0]) == consts && g.at(vars[1]) == consts) sawSingle = true;
  }
  CHECK(sawEmpty);
  CHECK(sawSingle);

  for (const auto& g : ground) {
    bool covered = false;
    for (const auto& sol : sols) {
      PrefixSubst sj;
      for (const auto& [k, v] : sol) sj.set(k, v);
      if (testutil::coveredBy(g, sj, vars, [&](CharId c) {
            return c < 0 || box.m.chars[c].variable;
          })) {
        covered = true;
        break;
      }
    }
    CHECK(covered);
  }
}

TEST_CASE("prefix unification is sound and complete on matrix prefixes") {
  std::mt19937_64 rng(123);
  int checked = 0;
  for (int i = 0; i < 200 && checked < 60; ++i) {
    FormulaPtr f = alphaNormalize(testutil::randProp(rng, 2 + (int)(rng() % 8)));
    Matrix m = Matrix::build(f, Mode::Intuitionistic);
    std::vector<PosId> atoms;
    for (const Position& p : m.positions)
      if (p.ptype == PType::Atom && !p.repeatable) atoms.push_back(p.id);
    if (atoms.size() < 2) continue;
    PosId a = atoms[rng() % atoms.size()], b = atoms[rng() % atoms.size()];
    if (a == b) continue;
    PrefixString pa = m.prefixOf(a), pb = m.prefixOf(b);
    if (pa.size() > 4 || pb.size() > 4) continue;
    ++checked;

    std::set<CharId> varSet, constSet;
    for (CharId c : pa) (m.chars[c].variable ? varSet : constSet).insert(c);
    for (CharId c : pb) (m.chars[c].variable ? varSet : constSet).insert(c);
    std::vector<CharId> vars(varSet.begin(), varSet.end());
    std::vector<CharId> consts(constSet.begin(), constSet.end());
    if (vars.size() > 3 || consts.size() > 3) continue;

    auto ground = testutil::brutePrefixSolutions(pa, pb, vars, consts, 3);

    std::vector<std::map<CharId, PrefixString>> sols;
    PrefixSubst probe;
    long budget = 200000;
    probe.forEachUnifier(pa, pb, m, 64, &budget,
                         [&] {
                           // soundness: the two sides become literally equal
                           CHECK(probe.resolve(pa) == probe.resolve(pb));
                           std::map<CharId, PrefixString> sol;
                           for (const auto& [k, v] : probe.bindings()) sol[k] = v;
                           sols.push_back(sol);
                           return false;
                         },
                         nullptr);

    CHECK(ground.empty() == sols.empty());
    for (const auto& g : ground) {
      bool covered = false;
      for (const auto& sol : sols) {
        PrefixSubst sj;
        for (const auto& [k, v] : sol) sj.set(k, v);
        if (testutil::coveredBy(g, sj, vars,
                                [&](CharId c) { return c < 0 || m.chars[c].variable; })) {
          covered = true;
          break;
        }
      }
      CHECK(covered);
    }
  }
  CHECK(checked >= 30);
}

TEST_CASE("prefix unifier leaves no bindings after failure") {
  CharBox box;
  PrefixSubst sj;
  sj.set(box.byName["z3"], box.str({"a3"}));
  long budget = 1000;
  bool found = sj.forEachUnifier(box.str({"a1", "z1"}), box.str({"a2"}), box.m, 8, &budget,
                                 [] { return true; }, nullptr);
  CHECK(!found);
  CHECK(sj.bindings().size() == 1);  // only the pre-existing binding remains
}

// ---------------------------------------------------------------------------
// Admissibility

TEST_CASE("empty substitutions are admissible") {
  Matrix m = Matrix::build(parseFofFormula("p => p"), Mode::Intuitionistic);
  TermSubst sq;
  PrefixSubst sj;
  CHECK(checkAdmissible(sq, sj, m));
}

TEST_CASE("an instantiation depending on its own eigenvariable is circular") {
  // The goal quantifier produces a rigid term below the gamma copy that binds
  // the variable: instantiating the variable with it closes a cycle.
  FormulaPtr f = parseFofFormula("?[X]: ![Y]: r(X,Y)");
  Matrix m = Matrix::build(f, Mode::Intuitionistic);
  std::string var, rigid;
  for (const auto& [v, owner] : m.varOwner) var = v;
  for (const auto& [r, d] : m.rigidOwner) rigid = r;
  REQUIRE(!var.empty());
  REQUIRE(!rigid.empty());
  TermSubst sq;
  sq.set(var, mkApp(rigid, {mkVar(var)}));
  PrefixSubst sj;
  CHECK(!checkAdmissible(sq, sj, m));
}

TEST_CASE("a prefix image pointing below its own emitter is circular") {
  Matrix m = Matrix::build(parseFofFormula("(p => q) => r"), Mode::Intuitionistic);
  // find a variable character whose emitter dominates some constant character
  for (const PrefixChar& zc : m.chars) {
    if (!zc.variable) continue;
    for (const PrefixChar& ac : m.chars) {
      if (ac.variable) continue;
      // is ac emitted strictly below zc?
      bool below = false;
      for (PosId w = ac.emitter; w >= 0; w = m.at(w).parent)
        if (w == zc.emitter && ac.emitter != zc.emitter) below = true;
      if (!below) continue;
      TermSubst sq;
      PrefixSubst sj;
      CharId z = m.at(zc.emitter).emits;
      CharId a = m.at(ac.emitter).emits;
      sj.set(z, {a});
      CHECK(!checkAdmissible(sq, sj, m));
      return;
    }
  }
  FAIL("no nested variable/constant pair found");
}
