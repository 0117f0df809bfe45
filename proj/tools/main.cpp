// Command-line front end: parse -> prove -> check -> translate -> check,
// with SZS-style status reporting.
//
// Exit codes: 0 Theorem, 1 GaveUp/Timeout, 2 input error, 3 internal check
// failure (own certificate or proof failed to verify, a bug signal).

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "matrixprove/certificate.hpp"
#include "matrixprove/oracle.hpp"
#include "matrixprove/search.hpp"
#include "matrixprove/sequent.hpp"

using namespace matrixprove;

namespace {

std::string readInput(const std::string& path) {
  if (path == "-") {
    std::ostringstream ss;
    ss << std::cin.rdbuf();
    return ss.str();
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string inputName(const std::string& path) { return path == "-" ? "stdin" : path; }

int status(const std::string& s, const std::string& name, int code) {
  std::cout << "% SZS status " << s << " for " << name << std::endl;
  return code;
}

void printTrace(const std::vector<TraceEvent>& trace) {
  for (const auto& e : trace) {
    switch (e.kind) {
      case TraceEvent::Deepen: std::cerr << "trace: deepen " << e.a << "\n"; break;
      case TraceEvent::Copy: std::cerr << "trace: copy " << e.a << " instance " << e.b << "\n"; break;
      case TraceEvent::Extend: std::cerr << "trace: ext " << e.a << " " << e.b << "\n"; break;
      case TraceEvent::Reduce: std::cerr << "trace: red " << e.a << " " << e.b << "\n"; break;
    }
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"matrixprove: intuitionistic first-order prover producing checkable certificates"};
  std::string inputPath = "-";
  bool classical = false;
  double timeout = 60.0;
  int depth = 1;
  int copies = 5;
  std::string output = "status";
  bool recheck = false;
  bool traceFlag = false;
  bool oracleFlag = false;
  std::string certOut, proofOut, verifyCert, verifyProof;

  app.add_option("input", inputPath, "problem file ('-' for stdin)");
  app.add_flag("--classical", classical, "classical mode (prefixes disabled)");
  app.add_option("--timeout", timeout, "search timeout in seconds (default 60)");
  app.add_option("--depth", depth, "initial path-length bound (default 1)");
  app.add_option("--copies", copies, "copy cap per repeatable position (default 5)");
  app.add_option("--output", output, "artifacts on stdout: cert|sequent|both|status (default status)")
      ->check(CLI::IsMember({"cert", "sequent", "both", "status"}));
  app.add_flag("--check", recheck, "re-verify serialized artifacts after a round-trip");
  app.add_flag("--trace", traceFlag, "write search trace events to stderr");
  app.add_flag("--oracle", oracleFlag, "cross-check propositional problems against the oracle");
  app.add_option("--cert-out", certOut, "write the certificate to this file");
  app.add_option("--proof-out", proofOut, "write the sequent proof to this file");
  app.add_option("--verify-cert", verifyCert, "verify a certificate file against the problem and exit");
  app.add_option("--verify-proof", verifyProof, "verify a sequent proof file against the problem and exit");

  CLI11_PARSE(app, argc, argv);

  const std::string name = inputName(inputPath);
  const Mode mode = classical ? Mode::Classical : Mode::Intuitionistic;

  FormulaPtr f;
  try {
    f = parseProblem(readInput(inputPath));
  } catch (const std::exception& e) {
    std::cout << "% SZS status Error for " << name << std::endl;
    std::cerr << "error: " << e.what() << std::endl;
    return 2;
  }

  try {
    if (!verifyCert.empty()) {
      Certificate c = deserializeCertificate(readInput(verifyCert));
      CheckResult r = checkCertificate(f, c, c.mode);
      if (r.ok) return status("Theorem", name + " (certificate verified)", 0);
      std::cerr << "certificate rejected: " << rejectReasonName(r.reason) << ": " << r.detail
                << std::endl;
      return status("Error", name + " (certificate rejected)", 3);
    }
    if (!verifyProof.empty()) {
      SequentProof p = deserializeSequentProof(readInput(verifyProof));
      if (p.digest != formulaDigest(f, p.mode)) {
        std::cerr << "proof rejected: digest mismatch" << std::endl;
        return status("Error", name + " (proof rejected)", 3);
      }
      SequentCheckResult r = checkSequent(p, p.mode, f);
      if (r.ok) return status("Theorem", name + " (sequent proof verified)", 0);
      std::cerr << "proof rejected at node " << r.nodeId << ": " << r.message << std::endl;
      return status("Error", name + " (proof rejected)", 3);
    }
  } catch (const CertificateFormatError& e) {
    std::cout << "% SZS status Error for " << name << std::endl;
    std::cerr << "error: " << e.what() << std::endl;
    return 2;
  }

  SearchLimits lim;
  lim.mode = mode;
  lim.depthStart = depth;
  lim.copyCap = copies;
  lim.timeoutSec = timeout;

  std::vector<TraceEvent> trace;
  SearchOutcome outcome = prove(f, lim, traceFlag ? &trace : nullptr);
  if (traceFlag) printTrace(trace);

  if (outcome.kind == OutcomeKind::Timeout) return status("Timeout", name, 1);
  if (outcome.kind == OutcomeKind::ExhaustedBounds) {
    if (oracleFlag && isPropositional(f)) {
      bool valid = classical ? classicalValid(f) : g4ipValid(f);
      std::cerr << "oracle: " << (valid ? "valid" : "invalid")
                << " (a valid GaveUp means the bounds were too small)" << std::endl;
    }
    return status("GaveUp", name, 1);
  }

  // Proved: both internal checkers gate the Theorem verdict.
  const Certificate& cert = *outcome.certificate;
  if (!outcome.certificateCheck.ok) {
    std::cerr << "internal error: own certificate rejected: "
              << rejectReasonName(outcome.certificateCheck.reason) << ": "
              << outcome.certificateCheck.detail << std::endl;
    return status("Error", name, 3);
  }
  TranslateResult tr = toSequent(f, cert, mode);
  if (!tr.proof) {
    std::cerr << "internal error: sequent translation failed: " << tr.deadlock << std::endl;
    return status("Error", name, 3);
  }
  SequentCheckResult sc = checkSequent(*tr.proof, mode, f);
  if (!sc.ok) {
    std::cerr << "internal error: own sequent proof rejected at node " << sc.nodeId << ": "
              << sc.message << std::endl;
    return status("Error", name, 3);
  }

  std::string certText = serializeCertificate(cert);
  std::string proofText = serializeSequentProof(*tr.proof);

  if (recheck) {
    Certificate c2 = deserializeCertificate(certText);
    if (!checkCertificate(f, c2, mode).ok) {
      std::cerr << "internal error: certificate failed round-trip re-check" << std::endl;
      return status("Error", name, 3);
    }
    SequentProof p2 = deserializeSequentProof(proofText);
    if (!checkSequent(p2, mode, f).ok) {
      std::cerr << "internal error: proof failed round-trip re-check" << std::endl;
      return status("Error", name, 3);
    }
  }
  if (oracleFlag) {
    if (isPropositional(f)) {
      bool valid = classical ? classicalValid(f) : g4ipValid(f);
      if (!valid) {
        std::cerr << "internal error: oracle contradicts Theorem verdict" << std::endl;
        return status("Error", name, 3);
      }
      std::cerr << "oracle: valid (agrees)" << std::endl;
    } else {
      std::cerr << "oracle: unavailable for first-order problems" << std::endl;
    }
  }

  int code = status("Theorem", name, 0);
  if (!certOut.empty()) std::ofstream(certOut) << certText;
  if (!proofOut.empty()) std::ofstream(proofOut) << proofText;
  if (output == "cert" || output == "both") std::cout << certText;
  if (output == "sequent" || output == "both") std::cout << proofText;
  return code;
}
