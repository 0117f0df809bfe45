#include <doctest.h>

#include <algorithm>

#include "matrixprove/matrix.hpp"
#include "matrixprove/unify.hpp"
#include "testutil.hpp"

using namespace matrixprove;

namespace {

std::vector<PosId> atomLeaves(const Matrix& m) {
  std::vector<PosId> out;
  for (const Position& p : m.positions)
    if (p.ptype == PType::Atom && !p.repeatable) out.push_back(p.id);
  return out;
}

}  // namespace

TEST_CASE("prefixes of p => p differ only in the final character") {
  Matrix m = Matrix::build(parseFofFormula("p => p"), Mode::Intuitionistic);
  auto atoms = atomLeaves(m);
  REQUIRE(atoms.size() == 2);
  PosId ante = m.at(atoms[0]).polarity == 1 ? atoms[0] : atoms[1];
  PosId succ = m.at(atoms[0]).polarity == 0 ? atoms[0] : atoms[1];
  PrefixString pa = m.prefixOf(ante), ps = m.prefixOf(succ);
  REQUIRE(pa.size() == 2);
  REQUIRE(ps.size() == 2);
  CHECK(pa[0] == ps[0]);
  CHECK(pa[1] != ps[1]);
  CHECK(m.chars[pa[1]].variable);   // antecedent side is flexible
  CHECK(!m.chars[ps[1]].variable);  // succedent side is rigid
  PrefixSubst sj;
  long budget = 1000;
  bool found = sj.forEachUnifier(pa, ps, m, 8, &budget, [] { return true; }, nullptr);
  CHECK(found);
}

TEST_CASE("prefixes of ~p | p cannot be unified") {
  Matrix m = Matrix::build(parseFofFormula("~p | p"), Mode::Intuitionistic);
  auto atoms = atomLeaves(m);
  REQUIRE(atoms.size() == 2);
  PosId first = m.at(atoms[0]).polarity == 1 ? atoms[0] : atoms[1];
  PosId second = m.at(atoms[0]).polarity == 0 ? atoms[0] : atoms[1];
  PrefixString p1 = m.prefixOf(first), p2 = m.prefixOf(second);
  REQUIRE(p1.size() == 2);  // one character from the negation, one from the atom
  CHECK(!m.chars[p1[0]].variable);
  CHECK(m.chars[p1[1]].variable);
  REQUIRE(p2.size() == 1);
  CHECK(!m.chars[p2[0]].variable);  // rigid
  PrefixSubst sj;
  long budget = 1000;
  bool found = sj.forEachUnifier(p1, p2, m, 8, &budget, [] { return true; }, nullptr);
  CHECK(!found);
}

TEST_CASE("classical mode emits no prefix characters") {
  Matrix m = Matrix::build(parseFofFormula("(p => p) & (~q | ![X]: r(X))"), Mode::Classical);
  CHECK(m.chars.empty());
  for (const Position& p : m.positions) CHECK(p.prefix.empty());
}

TEST_CASE("paths of the two standard examples") {
  Matrix m1 = Matrix::build(parseFofFormula("p => p"), Mode::Intuitionistic);
  auto p1 = m1.collectPaths(100);
  REQUIRE(p1.has_value());
  REQUIRE(p1->size() == 1);
  CHECK((*p1)[0].size() == 2);

  Matrix m2 = Matrix::build(parseFofFormula("~p | p"), Mode::Intuitionistic);
  auto p2 = m2.collectPaths(100);
  REQUIRE(p2.has_value());
  REQUIRE(p2->size() == 1);
  CHECK((*p2)[0].size() == 2);

  // a beta position with two atomic children splits the path
  Matrix m3 = Matrix::build(parseFofFormula("p & q"), Mode::Intuitionistic);
  auto p3 = m3.collectPaths(100);
  REQUIRE(p3.has_value());
  CHECK(p3->size() == 2);
  CHECK((*p3)[0].size() == 1);
}

TEST_CASE("path bound is reported") {
  Matrix m = Matrix::build(parseFofFormula("(p1 & p2) & (p3 & p4)"), Mode::Intuitionistic);
  CHECK(!m.collectPaths(2).has_value());
  CHECK(m.collectPaths(4).has_value());
}

TEST_CASE("classical paths of a CNF-shaped formula are exactly its clauses") {
  Matrix m = Matrix::build(parseFofFormula("(p | ~q) & ((r | s) & ~p)"), Mode::Classical);
  auto ps = m.collectPaths(100);
  REQUIRE(ps.has_value());
  std::set<std::multiset<std::string>> got;
  for (const auto& path : *ps) {
    std::multiset<std::string> names;
    for (PosId u : path)
      names.insert(std::to_string(m.at(u).polarity) + m.at(u).pred);
    got.insert(names);
  }
  std::set<std::multiset<std::string>> want = {
      {"0p", "1q"}, {"0r", "0s"}, {"1p"}};
  CHECK(got == want);
}

TEST_CASE("path enumeration agrees with the reference enumerator") {
  std::mt19937_64 rng(99);
  for (int i = 0; i < 120; ++i) {
    FormulaPtr f = alphaNormalize(testutil::randProp(rng, 2 + (int)(rng() % 10)));
    Mode mode = (i % 2) ? Mode::Intuitionistic : Mode::Classical;
    Matrix m = Matrix::build(f, mode);
    auto got = m.collectPaths(1 << 16);
    REQUIRE(got.has_value());
    auto want = testutil::naivePaths(m, m.root);
    REQUIRE(got->size() == want.size());
    std::set<std::set<PosId>> gotSet;
    for (const auto& p : *got) gotSet.insert(std::set<PosId>(p.begin(), p.end()));
    std::set<std::set<PosId>> wantSet(want.begin(), want.end());
    CHECK(gotSet == wantSet);
  }
}

TEST_CASE("prefixes agree on characters emitted by common ancestors") {
  std::mt19937_64 rng(100);
  for (int i = 0; i < 60; ++i) {
    FormulaPtr f = alphaNormalize(testutil::randFof(rng, 2 + (int)(rng() % 10)));
    auto fv = freeVars(f);
    for (auto it = fv.rbegin(); it != fv.rend(); ++it) f = fForall(*it, f);
    Matrix m = Matrix::build(f, Mode::Intuitionistic);
    auto atoms = atomLeaves(m);
    for (size_t a = 0; a < atoms.size(); ++a)
      for (size_t b = a + 1; b < atoms.size(); ++b) {
        PrefixString pa = m.prefixOf(atoms[a]), pb = m.prefixOf(atoms[b]);
        size_t common = 0;
        while (common < pa.size() && common < pb.size() && pa[common] == pb[common]) ++common;
        // past the common part, no character may reappear on the other side
        for (size_t x = common; x < pa.size(); ++x)
          for (size_t y = common; y < pb.size(); ++y) CHECK(pa[x] != pb[y]);
      }
  }
}

TEST_CASE("add_instance appends a copy and leaves existing positions alone") {
  FormulaPtr f = parseFofFormula("(![X]: (p(X) => q(X))) => (p(a) => q(a))");
  Matrix m = Matrix::build(f, Mode::Intuitionistic);
  PosId gamma = -1;
  for (const Position& p : m.positions)
    if (p.repeatable && p.kind == FKind::Forall) gamma = p.id;
  REQUIRE(gamma >= 0);
  Matrix m2 = m;  // value semantics: the original stays untouched
  auto before = m2.positions;
  auto beforeIndex = m2.atomIndex;
  REQUIRE(m2.addInstance(gamma));
  CHECK(m2.multiplicityOf(gamma) == 2);
  CHECK(m.multiplicityOf(gamma) == 1);
  for (const Position& p : before) {
    const Position& now = m2.at(p.id);
    CHECK(now.prefix == p.prefix);
    CHECK(now.polarity == p.polarity);
    CHECK(now.pathId == p.pathId);
  }
  // the atom index gained the copied atoms
  size_t beforeAtoms = 0, afterAtoms = 0;
  for (auto& [k, v] : beforeIndex) beforeAtoms += v.size();
  for (auto& [k, v] : m2.atomIndex) afterAtoms += v.size();
  CHECK(afterAtoms == beforeAtoms + 2);

  // old paths are exactly the new paths restricted to old atoms
  std::set<PosId> oldAtoms;
  for (const Position& p : before)
    if (p.ptype == PType::Atom && !p.repeatable) oldAtoms.insert(p.id);
  auto oldPaths = m.collectPaths(1 << 12);
  auto newPaths = m2.collectPaths(1 << 12);
  REQUIRE(oldPaths.has_value());
  REQUIRE(newPaths.has_value());
  std::set<std::set<PosId>> projected, olds;
  for (const auto& p : *newPaths) {
    std::set<PosId> r;
    for (PosId u : p)
      if (oldAtoms.count(u)) r.insert(u);
    projected.insert(std::move(r));
  }
  for (const auto& p : *oldPaths) olds.insert(std::set<PosId>(p.begin(), p.end()));
  CHECK(projected == olds);
}

TEST_CASE("copy cap zero rejects every add_instance call") {
  Matrix m = Matrix::build(parseFofFormula("(![X]: p(X)) => p(a)"), Mode::Intuitionistic, 0);
  for (const Position& p : m.positions)
    if (p.repeatable) CHECK(!m.addInstance(p.id));
}

TEST_CASE("position tree dump is stable for the micro examples") {
  Matrix m = Matrix::build(parseFofFormula("p => p"), Mode::Intuitionistic);
  CHECK(m.dump() ==
        "0 pol=0 type=alpha prefix=a1 (p => p)\n"
        "  0.0 pol=1 type=atom rep prefix=a1 p\n"
        "    0.0#1 pol=1 type=atom copy prefix=a1.z1 p\n"
        "  0.1 pol=0 type=atom prefix=a1.a2 p\n");
  Matrix m2 = Matrix::build(parseFofFormula("~p | p"), Mode::Intuitionistic);
  CHECK(m2.dump() ==
        "0 pol=0 type=alpha prefix=<empty> (~p | p)\n"
        "  0.0 pol=0 type=alpha prefix=a1 ~p\n"
        "    0.0.0 pol=1 type=atom rep prefix=a1 p\n"
        "      0.0.0#1 pol=1 type=atom copy prefix=a1.z1 p\n"
        "  0.1 pol=0 type=atom prefix=a2 p\n");
}

TEST_CASE("gamma and delta classification follows the sequent-rule analogy") {
  Matrix m = Matrix::build(
      parseFofFormula("(![X]: p(X)) => (?[Y]: p(Y))"), Mode::Intuitionistic);
  int gammas = 0, deltas = 0;
  for (const Position& p : m.positions) {
    if (p.ptype == PType::Gamma) {
      ++gammas;
      CHECK(((p.kind == FKind::Forall && p.polarity == 1) ||
             (p.kind == FKind::Exists && p.polarity == 0)));
    }
    if (p.ptype == PType::Delta) ++deltas;
  }
  CHECK(gammas == 2);  // the antecedent forall and the succedent exists
  CHECK(deltas == 0);
  Matrix m2 = Matrix::build(
      parseFofFormula("(?[X]: p(X)) => (![Y]: p(Y))"), Mode::Intuitionistic);
  int d2 = 0;
  for (const Position& p : m2.positions)
    if (p.ptype == PType::Delta) {
      ++d2;
      CHECK(((p.kind == FKind::Forall && p.polarity == 0) ||
             (p.kind == FKind::Exists && p.polarity == 1)));
    }
  CHECK(d2 == 2);
}
