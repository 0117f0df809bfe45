#include <doctest.h>

#include <json.hpp>

#include "matrixprove/search.hpp"
#include "matrixprove/sequent.hpp"
#include "testutil.hpp"

using namespace matrixprove;

namespace {

struct Proved {
  FormulaPtr f;
  Certificate cert;
};

Proved proveFor(const std::string& text, Mode mode = Mode::Intuitionistic) {
  FormulaPtr f = parseProblem(text);
  SearchLimits lim;
  lim.mode = mode;
  lim.timeoutSec = 20;
  auto out = prove(f, lim);
  REQUIRE(out.kind == OutcomeKind::Proved);
  return {f, *out.certificate};
}

void collectRules(const SequentNode& n, std::vector<RuleId>& out) {
  out.push_back(n.rule);
  for (const auto& p : n.premises) collectRules(*p, out);
}

void collectAxioms(const SequentNode& n, std::vector<std::pair<std::string, std::string>>& out) {
  if (n.rule == RuleId::Axiom) out.push_back(n.connection);
  for (const auto& p : n.premises) collectAxioms(*p, out);
}

}  // namespace

TEST_CASE("p => p becomes the two-node proof") {
  auto [f, cert] = proveFor("fof(c,conjecture, p => p).");
  auto tr = toSequent(f, cert, Mode::Intuitionistic);
  REQUIRE(tr.proof);
  std::vector<RuleId> rules;
  collectRules(*tr.proof->root, rules);
  CHECK(rules == std::vector<RuleId>{RuleId::ImpR, RuleId::Axiom});
  CHECK(proofSize(*tr.proof) == 2);
  CHECK(checkSequent(*tr.proof, Mode::Intuitionistic, f).ok);
}

TEST_CASE("a tampered axiom node is rejected at that node") {
  auto [f, cert] = proveFor("fof(c,conjecture, p => p).");
  auto tr = toSequent(f, cert, Mode::Intuitionistic);
  REQUIRE(tr.proof);
  auto j = nlohmann::json::parse(serializeSequentProof(*tr.proof));
  // turn the axiom leaf's succedent into a different atom
  j["root"]["premises"][0]["succ"][0][0] = "q";
  SequentProof bad = deserializeSequentProof(j.dump());
  auto res = checkSequent(bad, Mode::Intuitionistic);
  CHECK(!res.ok);
  CHECK(res.nodeId >= 0);
}

TEST_CASE("eigenvariable occurring in the conclusion is rejected") {
  // hand-built: forall_r introducing an eigenvariable that already occurs
  SequentProof p;
  p.mode = Mode::Intuitionistic;
  p.digest = "x";
  auto root = std::make_unique<SequentNode>();
  FormulaPtr body = fAtom("r", {mkVar("X"), mkConst("e1")});
  FormulaPtr all = fForall("X", body);
  root->ante.push_back({fAtom("q", {mkConst("e1")}), ""});
  root->succ.push_back({all, ""});
  root->rule = RuleId::ForallR;
  root->principal = 0;
  root->principalRight = true;
  root->eigen = "e1";
  auto leaf = std::make_unique<SequentNode>();
  leaf->ante.push_back({fAtom("q", {mkConst("e1")}), ""});
  leaf->succ.push_back({substituteTerms(body, {{"X", mkConst("e1")}}), ""});
  leaf->rule = RuleId::Axiom;
  root->premises.push_back(std::move(leaf));
  p.root = std::move(root);
  auto res = checkSequent(p, Mode::Intuitionistic);
  CHECK(!res.ok);
  CHECK(res.message.find("eigenvariable") != std::string::npos);
}

TEST_CASE("classical excluded-middle proof fails the intuitionistic checker") {
  auto [f, cert] = proveFor("fof(c,conjecture, ~p | p).", Mode::Classical);
  auto tr = toSequent(f, cert, Mode::Classical);
  REQUIRE(tr.proof);
  CHECK(checkSequent(*tr.proof, Mode::Classical, f).ok);
  auto res = checkSequent(*tr.proof, Mode::Intuitionistic, f);
  CHECK(!res.ok);  // the negation-right step keeps p in the succedent
}

TEST_CASE("axiom leaves match the certificate connections on used copies") {
  auto [f, cert] = proveFor(testutil::readFile(testutil::benchPath("two_instances.p")));
  auto tr = toSequent(f, cert, Mode::Intuitionistic);
  REQUIRE(tr.proof);
  std::vector<std::pair<std::string, std::string>> axioms;
  collectAxioms(*tr.proof->root, axioms);
  std::sort(axioms.begin(), axioms.end());
  axioms.erase(std::unique(axioms.begin(), axioms.end()), axioms.end());
  std::vector<std::pair<std::string, std::string>> conns = cert.connections;
  std::sort(conns.begin(), conns.end());
  CHECK(axioms == conns);
}

TEST_CASE("whole corpus translates with no ordering deadlock and re-checks") {
  for (const auto& p : testutil::corpus()) {
    CAPTURE(p.name);
    for (Mode mode : {Mode::Intuitionistic, Mode::Classical}) {
      bool valid = mode == Mode::Intuitionistic ? p.intuitValid : p.classicalValid;
      if (!valid) continue;
      auto [f, cert] = proveFor(p.text, mode);
      auto tr = toSequent(f, cert, mode);
      REQUIRE_MESSAGE(tr.proof, tr.deadlock);
      auto res = checkSequent(*tr.proof, mode, f);
      CHECK_MESSAGE(res.ok, p.name, ": ", res.message);
      // loose sanity bound on proof size
      Matrix m = materializeMatrix(f, cert, mode);
      CHECK(proofSize(*tr.proof) <= 100 * (int)m.positions.size());
      // serialization round-trip preserves checkability
      SequentProof back = deserializeSequentProof(serializeSequentProof(*tr.proof));
      CHECK(checkSequent(back, mode, f).ok);
    }
  }
}

TEST_CASE("quantifier instantiations come from the certificate substitution") {
  auto [f, cert] = proveFor(testutil::readFile(testutil::benchPath("quantifier.p")));
  auto tr = toSequent(f, cert, Mode::Intuitionistic);
  REQUIRE(tr.proof);
  CHECK(checkSequent(*tr.proof, Mode::Intuitionistic, f).ok);
  // every forall_l node instantiates with a ground term
  std::function<void(const SequentNode&)> walk = [&](const SequentNode& n) {
    if (n.rule == RuleId::ForallL) {
      std::function<bool(const Term&)> ground = [&](const Term& t) {
        if (t.var) return false;
        for (const Term& a : t.args)
          if (!ground(a)) return false;
        return true;
      };
      CHECK(ground(n.instTerm));
    }
    for (const auto& pr : n.premises) walk(*pr);
  };
  walk(*tr.proof->root);
}

TEST_CASE("the printed proof mentions every rule once per node") {
  auto [f, cert] = proveFor("fof(c,conjecture, (p & q) => (q & p)).");
  auto tr = toSequent(f, cert, Mode::Intuitionistic);
  REQUIRE(tr.proof);
  std::string text = printSequentProof(*tr.proof);
  int lines = (int)std::count(text.begin(), text.end(), '\n');
  CHECK(lines == proofSize(*tr.proof));
  CHECK(text.find("|-") != std::string::npos);
}
