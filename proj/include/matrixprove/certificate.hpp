#pragma once

// Proof certificates: multiplicity, the combined substitution, and a set of
// connections claimed to span the matrix. The checker re-establishes the
// validity conditions by direct enumeration and shares nothing with the
// search beyond the syntax, matrix, and unification primitives.

#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "matrixprove/matrix.hpp"
#include "matrixprove/unify.hpp"

namespace matrixprove {

// Positions, variables, and prefix characters are referenced by stable
// path-derived ids ("0.1#2.0" style), so certificates survive serialization
// across processes.
struct Certificate {
  int version = 1;
  Mode mode = Mode::Intuitionistic;
  std::string digest;
  std::map<std::string, int> multiplicity;                        // group pathId -> copies (entries > 1)
  std::map<std::string, Term> sigmaQ;                             // copy variable -> term
  std::map<std::string, std::vector<std::string>> sigmaJ;         // char (emitter pathId) -> char string
  std::vector<std::pair<std::string, std::string>> connections;   // (polarity-1 atom, polarity-0 atom)
};

enum class RejectReason {
  None,
  Malformed,
  DigestMismatch,
  DanglingPosition,
  NonComplementary,
  Circular,
  UncoveredPath,
};

const char* rejectReasonName(RejectReason r);

struct CheckResult {
  bool ok = false;
  RejectReason reason = RejectReason::None;
  std::string detail;
  std::vector<std::string> witnessPath;                 // UncoveredPath
  std::pair<std::string, std::string> witnessPair;      // NonComplementary
};

std::string formulaDigest(const FormulaPtr& f, Mode mode);

// Assembles a certificate from a finished search state: substitutions are
// resolved, auxiliary prefix variables are grounded to the empty string, and
// connections are normalized and sorted.
Certificate makeCertificate(const Matrix& m, const TermSubst& sq, const PrefixSubst& sj,
                            const std::vector<std::pair<PosId, PosId>>& connections);

// Accepts iff (1) each connection is complementary under the stated
// substitutions, (2) the combined substitution is non-circular, and (3) every
// path of the matrix at the stated multiplicity contains some connection.
CheckResult checkCertificate(const FormulaPtr& f, const Certificate& c, Mode mode,
                             long pathBound = 1L << 20);

// Rebuilds the matrix at the certificate's multiplicity. Throws
// CertificateFormatError when a multiplicity entry references an unknown or
// non-repeatable position.
Matrix materializeMatrix(const FormulaPtr& f, const Certificate& c, Mode mode);

struct CertificateFormatError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string serializeCertificate(const Certificate& c);
Certificate deserializeCertificate(const std::string& text);  // throws CertificateFormatError

}  // namespace matrixprove
