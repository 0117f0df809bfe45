#pragma once

// Independent brute-force deciders for propositional validity, used by tests,
// the acceptance suite, and the CLI cross-check flag. They share no code with
// the prover beyond the formula type.

#include <optional>
#include <vector>

#include "matrixprove/syntax.hpp"

namespace matrixprove {

// Decides intuitionistic propositional validity with the contraction-free
// calculus. Throws std::invalid_argument on non-propositional input.
bool g4ipValid(const FormulaPtr& f);

// Truth-table validity. Throws std::invalid_argument on non-propositional
// input or more than 20 distinct atoms.
bool classicalValid(const FormulaPtr& f);

// A finite intuitionistic countermodel: worlds 0..n-1, a reflexive-transitive
// accessibility relation, and a monotone valuation per atom.
struct KripkeModel {
  int worlds = 0;
  std::vector<std::vector<bool>> leq;        // leq[w][v]: v accessible from w
  std::vector<std::string> atoms;
  std::vector<std::vector<bool>> val;        // val[atom][world]
  int failWorld = 0;
};

// Searches for a countermodel with at most maxWorlds worlds. Gives up (returns
// nullopt) when the formula has more than maxAtoms distinct atoms; the bound
// keeps exhaustive valuation enumeration tractable.
std::optional<KripkeModel> kripkeCountermodel(const FormulaPtr& f, int maxWorlds,
                                              int maxAtoms = 5);

}  // namespace matrixprove
