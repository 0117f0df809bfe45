#pragma once

// Translation of an accepted certificate into a multi-succedent sequent
// proof, and an independent checker for such proofs. In intuitionistic mode
// the succedent is restricted at the critical rules (right implication,
// right negation, right universal); classical mode lifts the restriction.

#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "matrixprove/certificate.hpp"
#include "matrixprove/syntax.hpp"

namespace matrixprove {

enum class RuleId {
  Axiom,
  AndL, AndR, OrL, OrR, ImpL, ImpR, NegL, NegR, IffL, IffR,
  ForallL, ForallR, ExistsL, ExistsR,
};

const char* ruleName(RuleId r);

struct TaggedFormula {
  FormulaPtr f;
  std::string pos;  // matrix path id; bookkeeping only, not trusted by the checker
};

struct SequentNode {
  std::vector<TaggedFormula> ante, succ;
  RuleId rule = RuleId::Axiom;
  int principal = -1;         // index into ante or succ
  bool principalRight = false;
  Term instTerm;              // ForallL / ExistsR
  std::string eigen;          // ForallR / ExistsL
  std::pair<std::string, std::string> connection;  // Axiom
  std::vector<std::unique_ptr<SequentNode>> premises;
};

struct SequentProof {
  Mode mode = Mode::Intuitionistic;
  std::string digest;
  std::unique_ptr<SequentNode> root;
};

struct SequentCheckResult {
  bool ok = false;
  int nodeId = -1;  // preorder index of the offending node
  std::string message;
};

struct TranslateResult {
  std::unique_ptr<SequentProof> proof;  // null on deadlock
  std::string deadlock;                 // diagnosis when null
};

// Requires a certificate accepted by checkCertificate for (f, mode).
// Instantiations are read off the certificate's term substitution; the rule
// order respects the partial order induced by the combined substitution.
TranslateResult toSequent(const FormulaPtr& f, const Certificate& c, Mode mode);

// Accepts iff the end-sequent is ( |- f ), every node matches its rule
// schema in the selected mode, and eigenvariable conditions hold.
SequentCheckResult checkSequent(const SequentProof& p, Mode mode);
SequentCheckResult checkSequent(const SequentProof& p, Mode mode, const FormulaPtr& endFormula);

std::string printSequentProof(const SequentProof& p);
std::string serializeSequentProof(const SequentProof& p);
SequentProof deserializeSequentProof(const std::string& text);  // throws CertificateFormatError

// Total node count.
int proofSize(const SequentProof& p);

}  // namespace matrixprove
