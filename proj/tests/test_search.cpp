#include <doctest.h>

#include <chrono>

#include "matrixprove/oracle.hpp"
#include "matrixprove/search.hpp"
#include "testutil.hpp"

using namespace matrixprove;

namespace {

SearchOutcome proveText(const std::string& text, Mode mode = Mode::Intuitionistic,
                        double timeout = 10.0, int copyCap = 5,
                        std::vector<TraceEvent>* trace = nullptr) {
  SearchLimits lim;
  lim.mode = mode;
  lim.timeoutSec = timeout;
  lim.copyCap = copyCap;
  return prove(parseProblem(text), lim, trace);
}

}  // namespace

TEST_CASE("p => p yields the one-connection certificate") {
  auto t0 = std::chrono::steady_clock::now();
  auto out = proveText("fof(c,conjecture, p => p).");
  double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  CHECK(dt < 0.1);
  REQUIRE(out.kind == OutcomeKind::Proved);
  REQUIRE(out.certificate.has_value());
  CHECK(out.certificateCheck.ok);
  const Certificate& c = *out.certificate;
  CHECK(c.connections.size() == 1);
  // the prefix substitution maps the antecedent atom's variable to the
  // succedent atom's constant, and nothing else
  REQUIRE(c.sigmaJ.size() == 1);
  const auto& [zEmitter, image] = *c.sigmaJ.begin();
  CHECK(zEmitter == c.connections[0].first);
  REQUIRE(image.size() == 1);
  CHECK(image[0] == c.connections[0].second);
  CHECK(c.multiplicity.empty());
  CHECK(c.sigmaQ.empty());
}

TEST_CASE("the excluded middle is rejected intuitionistically, proved classically") {
  for (int depth : {1, 2, 4}) {
    for (int cap : {1, 2, 5}) {
      SearchLimits lim;
      lim.depthStart = depth;
      lim.copyCap = cap;
      lim.timeoutSec = 5;
      auto t0 = std::chrono::steady_clock::now();
      auto out = prove(parseProblem("fof(c,conjecture, ~p | p)."), lim);
      double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      CHECK(out.kind == OutcomeKind::ExhaustedBounds);
      CHECK(dt < 0.1);
    }
  }
  auto out = proveText("fof(c,conjecture, ~p | p).", Mode::Classical);
  REQUIRE(out.kind == OutcomeKind::Proved);
  CHECK(out.certificate->sigmaJ.empty());
  CHECK(out.certificate->connections.size() == 1);
  CHECK(out.certificateCheck.ok);
}

TEST_CASE("goal-driven equality instantiation is found intuitionistically") {
  auto out = proveText(testutil::readFile(testutil::benchPath("quantifier.p")));
  REQUIRE(out.kind == OutcomeKind::Proved);
  CHECK(out.certificateCheck.ok);
  // the run never duplicates the whole problem, only quantified subformulas
  std::vector<TraceEvent> trace;
  auto out2 = prove(parseProblem(testutil::readFile(testutil::benchPath("quantifier.p"))),
                    SearchLimits{}, &trace);
  REQUIRE(out2.kind == OutcomeKind::Proved);
  for (const auto& e : trace)
    if (e.kind == TraceEvent::Copy) CHECK(e.a != "0");
}

TEST_CASE("dynamic multiplicity: two instances of one axiom") {
  const std::string text = testutil::readFile(testutil::benchPath("two_instances.p"));
  std::vector<TraceEvent> trace;
  SearchLimits lim;
  lim.copyCap = 2;
  lim.timeoutSec = 10;
  auto out = prove(parseProblem(text), lim, &trace);
  REQUIRE(out.kind == OutcomeKind::Proved);

  Matrix m = Matrix::build(parseProblem(text), Mode::Intuitionistic);
  std::string gammaId;
  for (const Position& p : m.positions)
    if (p.repeatable && p.kind == FKind::Forall) gammaId = p.pathId;
  REQUIRE(!gammaId.empty());
  CHECK(out.certificate->multiplicity.at(gammaId) == 2);

  bool copiedGamma = false;
  for (const auto& e : trace) {
    if (e.kind != TraceEvent::Copy) continue;
    CHECK(e.a != "0");  // never the whole formula
    if (e.a == gammaId) copiedGamma = true;
  }
  CHECK(copiedGamma);

  SearchLimits lim1;
  lim1.copyCap = 1;
  lim1.timeoutSec = 10;
  auto out1 = prove(parseProblem(text), lim1);
  CHECK(out1.kind == OutcomeKind::ExhaustedBounds);
}

TEST_CASE("intuitionistic micro-theorems needing copies of special positions") {
  CHECK(proveText("fof(c,conjecture, p => (p & p)).").kind == OutcomeKind::Proved);
  CHECK(proveText("fof(c,conjecture, ~~(~p | p)).").kind == OutcomeKind::Proved);
  CHECK(proveText("fof(c,conjecture, ~~~p => ~p).").kind == OutcomeKind::Proved);
  CHECK(proveText("fof(c,conjecture, ((p => q) => p) => p).").kind ==
        OutcomeKind::ExhaustedBounds);
  CHECK(proveText("fof(c,conjecture, ((p => q) => p) => p).", Mode::Classical).kind ==
        OutcomeKind::Proved);
}

TEST_CASE("named corpus statuses") {
  for (const auto& p : testutil::corpus()) {
    CAPTURE(p.name);
    auto intuit = proveText(p.text, Mode::Intuitionistic, 20.0);
    CHECK(intuit.kind == (p.intuitValid ? OutcomeKind::Proved : OutcomeKind::ExhaustedBounds));
    if (intuit.kind == OutcomeKind::Proved) CHECK(intuit.certificateCheck.ok);
    auto classical = proveText(p.text, Mode::Classical, 20.0);
    CHECK(classical.kind ==
          (p.classicalValid ? OutcomeKind::Proved : OutcomeKind::ExhaustedBounds));
    if (classical.kind == OutcomeKind::Proved) CHECK(classical.certificateCheck.ok);
  }
}

TEST_CASE("search agrees with the propositional oracle on random formulas") {
  std::mt19937_64 rng(2026);
  int proved = 0, valid = 0;
  for (int i = 0; i < 120; ++i) {
    FormulaPtr f = alphaNormalize(testutil::randProp(rng, 2 + (int)(rng() % 18)));
    SearchLimits lim;
    lim.timeoutSec = 2.0;
    auto out = prove(f, lim);
    bool oracle = g4ipValid(f);
    if (oracle) ++valid;
    if (out.kind == OutcomeKind::Proved) {
      ++proved;
      CHECK(oracle);                    // soundness, zero tolerance
      CHECK(out.certificateCheck.ok);   // the internal gate always holds
    }
    if (oracle) CHECK(out.kind == OutcomeKind::Proved);  // desk-scale completeness
  }
  CHECK(valid == proved);
}

TEST_CASE("identical runs produce identical certificates") {
  for (const auto& p : testutil::corpus()) {
    if (!p.intuitValid) continue;
    auto a = proveText(p.text), b = proveText(p.text);
    REQUIRE(a.certificate.has_value());
    REQUIRE(b.certificate.has_value());
    CHECK(serializeCertificate(*a.certificate) == serializeCertificate(*b.certificate));
  }
}

TEST_CASE("timeouts are reported softly") {
  SearchLimits lim;
  lim.timeoutSec = 0.05;
  // an invalid formula with a large copy space cannot finish in 50ms
  auto out = prove(parseFofFormula("~((~p0 <=> (((p4 & p1) <=> p4) => ((p1 & p2) <=> p4))))"),
                   lim);
  CHECK((out.kind == OutcomeKind::Timeout || out.kind == OutcomeKind::ExhaustedBounds));
}

TEST_CASE("restricted backtracking stays sound") {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 40; ++i) {
    FormulaPtr f = alphaNormalize(testutil::randProp(rng, 2 + (int)(rng() % 14)));
    SearchLimits lim;
    lim.timeoutSec = 2.0;
    lim.restrictedBacktracking = true;
    auto out = prove(f, lim);
    if (out.kind == OutcomeKind::Proved) CHECK(g4ipValid(f));
  }
}
