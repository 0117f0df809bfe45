#pragma once

// Connection-driven proof search on the non-clausal matrix.
//
// The engine works through an agenda of positions with an active path:
//   - an alpha-like position is a choice point (any one child's closure
//     covers the same set of paths, the conjecture-side child is preferred);
//   - a beta position adds all children as separate obligations;
//   - a repeatable position is a choice over its copies, materializing a
//     fresh one when the existing copies are exhausted;
//   - an atom is closed by a reduction against a path atom or an extension
//     into a compatible complementary atom anywhere in the matrix, whose
//     beta-siblings along the connecting branch become new obligations.
// Fresh copies are also tried as extension targets (innermost repeatable
// ancestor first), which is what grows the multiplicity on demand. Each
// connection extends the combined substitution; the non-circularity of the
// extension is checked immediately.

#include <atomic>
#include <optional>
#include <vector>

#include "matrixprove/certificate.hpp"
#include "matrixprove/matrix.hpp"

namespace matrixprove {

struct SearchLimits {
  Mode mode = Mode::Intuitionistic;
  int depthStart = 1;       // initial active-path length bound; outer loop doubles it
  int copyCap = 5;          // copies per repeatable position
  int sigmaJCap = 16;       // prefix unifier alternatives per connection
  long prefixStepBudget = 50000;
  double timeoutSec = 0;    // 0: none
  bool restrictedBacktracking = false;
};

enum class OutcomeKind { Proved, ExhaustedBounds, Timeout };

struct TraceEvent {
  enum Kind { Deepen, Copy, Extend, Reduce } kind;
  std::string a, b;  // position path ids; Deepen stores the bound in a
};

struct SearchStats {
  long extensions = 0, reductions = 0, copies = 0;
  long ticks = 0;
  int depthReached = 0;
};

struct SearchOutcome {
  OutcomeKind kind = OutcomeKind::ExhaustedBounds;
  std::optional<Certificate> certificate;
  CheckResult certificateCheck;  // soundness gate result for Proved
  SearchStats stats;
};

SearchOutcome prove(const FormulaPtr& f, const SearchLimits& limits,
                    std::vector<TraceEvent>* trace = nullptr,
                    const std::atomic<bool>* cancel = nullptr);

}  // namespace matrixprove
