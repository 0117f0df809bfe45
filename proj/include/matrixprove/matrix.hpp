#pragma once

// Position tree (non-clausal matrix) of a formula: polarity, principal type,
// prefixes, copy management for multiplicity, and path enumeration.
//
// Polarity 0 is the conjecture side (the root), polarity 1 the axiom side.
// Quantifier positions admitting repeated instantiation (forall at polarity 1,
// exists at polarity 0) are gamma; the eigenvariable-flavored occurrences are
// delta. In intuitionistic mode, polarity-1 atoms, implications and negations
// are also repeatable: each use at a new world needs a fresh prefix, so they
// carry copies exactly like gamma positions.
//
// Repeatable positions are represented as a group node whose children are the
// copy subtrees; every path passes through all copies. Prefix characters are
// fresh per (position, instance).

#include <cstdint>
#include <deque>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "matrixprove/common.hpp"
#include "matrixprove/syntax.hpp"

namespace matrixprove {

using PosId = int32_t;
using CharId = int32_t;  // >= 0: matrix characters; < 0: unifier auxiliaries

enum class PType { Alpha, Beta, Gamma, Delta, Atom };

const char* ptypeName(PType t);

struct PrefixChar {
  bool variable;
  PosId emitter;
  std::string name;  // display only; identity is the emitter position
};

using PrefixString = std::vector<CharId>;

struct Position {
  PosId id = -1;
  PosId parent = -1;
  int depth = 0;
  FKind kind{};
  PType ptype{};
  int polarity = 0;
  bool repeatable = false;   // children are copy roots
  bool copyRoot = false;
  FormulaPtr label;
  std::vector<PosId> children;
  std::vector<int> instance;
  std::string pathId;
  CharId emits = -1;
  PrefixString prefix;       // characters emitted on the root-to-here branch, own included
  // Atom leaves:
  std::string pred;
  std::vector<Term> args;
  // Quantifier nodes:
  std::string qvar;
};

// Undo information for one addInstance call; lets the search backtrack over
// dynamic multiplicity cheaply.
struct MatrixUndo {
  size_t posSize = 0, charSize = 0;
  PosId group = -1;
  std::vector<std::pair<std::pair<std::string, int>, size_t>> indexSizes;
  std::vector<std::string> newPathIds;
  std::vector<std::string> newVars;
  std::vector<std::string> newRigids;
};

class Matrix {
 public:
  Mode mode = Mode::Intuitionistic;
  int copyCap = 5;
  FormulaPtr formula;
  PosId root = 0;

  std::deque<Position> positions;  // deque: references stay valid across copy growth
  std::vector<PrefixChar> chars;
  std::map<std::pair<std::string, int>, std::vector<PosId>> atomIndex;
  std::unordered_map<std::string, PosId> byPathId;
  std::unordered_map<std::string, PosId> varOwner;    // copy variable -> copy root
  std::unordered_map<std::string, PosId> rigidOwner;  // rigid functor -> delta position

  // f must be closed and alpha-normalized. Multiplicity starts at 1
  // everywhere; classical mode emits no prefix characters.
  static Matrix build(const FormulaPtr& f, Mode mode, int copyCap = 5);

  const Position& at(PosId p) const { return positions[p]; }
  Position& at(PosId p) { return positions[p]; }

  int multiplicityOf(PosId group) const { return (int)positions[group].children.size(); }

  // Appends one fresh copy to a repeatable position. Returns false when the
  // copy cap is reached (a resource bound, not invalidity).
  bool addInstance(PosId group, MatrixUndo* undo = nullptr);
  void undoInstance(const MatrixUndo& u);

  PrefixString prefixOf(PosId p) const { return positions[p].prefix; }

  PosId lca(PosId a, PosId b) const;
  // True when no path can contain atoms of both subtrees: their lowest common
  // ancestor is a non-repeatable beta position with a and b under different
  // children.
  bool betaSeparated(PosId a, PosId b) const;

  // Enumerates paths (sets of atom positions, in discovery order). The
  // callback returns false to stop. Returns false if more than `bound` paths
  // would be produced.
  bool forEachPath(const std::function<bool(const std::vector<PosId>&)>& cb, long bound) const;

  // Convenience collector; nullopt when the bound is exceeded.
  std::optional<std::vector<std::vector<PosId>>> collectPaths(long bound) const;

  // Plain-text dump of the position tree (golden-test format): one line per
  // position, indented by depth:
  //   <pathId> pol=<p> type=<t>[ rep][ copy] prefix=<chars> <label>
  std::string dump() const;

  std::string charName(CharId c) const;
  std::string prefixToString(const PrefixString& s) const;

 private:
  friend struct MatrixBuilder;
  struct GroupEnv {
    std::map<std::string, Term> env;
    std::vector<Term> gammaVars;
  };
  std::unordered_map<PosId, GroupEnv> groupEnv_;
  int constCount_ = 0, varCount_ = 0;
};

}  // namespace matrixprove
