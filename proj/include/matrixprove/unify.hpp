#pragma once

// Term unification for the quantifier substitution, string unification for
// the prefix substitution, and the combined non-circularity check.

#include <functional>
#include <optional>
#include <unordered_map>
#include <vector>

#include "matrixprove/matrix.hpp"
#include "matrixprove/syntax.hpp"

namespace matrixprove {

// Triangular substitution over named variables with an undo trail; failed
// unification attempts leave no trace once undone to the entry mark.
class TermSubst {
 public:
  size_t mark() const { return trail_.size(); }
  void undoTo(size_t m);

  const Term* lookup(const std::string& v) const;

  // Most general unifier extension, occurs-check on. Inputs are restored by
  // the caller via undoTo on failure.
  bool unify(const Term& a, const Term& b);
  bool unifyArgs(const std::vector<Term>& a, const std::vector<Term>& b);

  // Full application; assumes the substitution is acyclic (search-produced
  // bindings always are, by the occurs check).
  Term apply(const Term& t) const;
  // Application with a recursion budget; nullopt signals a cyclic binding
  // chain (possible in hand-built substitutions).
  std::optional<Term> applyChecked(const Term& t, int fuel = 10000) const;

  const std::unordered_map<std::string, Term>& bindings() const { return bind_; }
  const std::vector<std::string>& trail() const { return trail_; }
  void set(const std::string& v, const Term& t) {
    bind_[v] = t;
    trail_.push_back(v);
  }

 private:
  Term walk(Term t) const;
  bool occurs(const std::string& v, const Term& t) const;

  std::unordered_map<std::string, Term> bind_;
  std::vector<std::string> trail_;
};

// Prefix substitution: maps variable characters to character strings.
// Negative character ids are unifier-internal auxiliaries.
class PrefixSubst {
 public:
  size_t mark() const { return trail_.size(); }
  void undoTo(size_t m);

  const PrefixString* lookup(CharId v) const;
  void set(CharId v, PrefixString s);
  CharId freshAux() { return nextAux_--; }

  // Expands bound variables; assumes acyclic.
  PrefixString resolve(const PrefixString& s) const;
  std::optional<PrefixString> resolveChecked(const PrefixString& s, int fuel = 10000) const;

  const std::unordered_map<CharId, PrefixString>& bindings() const { return bind_; }

  // Lazily enumerates extensions of this substitution unifying a with b,
  // calling yield with the bindings in place. yield returns true to stop
  // (propagated as the return value). At most maxAlts solutions are produced;
  // *stepBudget is shared across nested calls, and *capHit is set when either
  // bound cut enumeration short.
  bool forEachUnifier(const PrefixString& a, const PrefixString& b,
                      const Matrix& m, int maxAlts, long* stepBudget,
                      const std::function<bool()>& yield, bool* capHit);

 private:
  std::unordered_map<CharId, PrefixString> bind_;
  std::vector<CharId> trail_;
  CharId nextAux_ = -1;
};

// The combined substitution is admissible when the dependency graph over
// positions is acyclic: tree edges, plus an edge from each delta position
// whose rigid functor occurs in a term image to the gamma copy it
// instantiates, plus an edge from each prefix constant's emitter to the
// emitter of any variable whose image contains it. Cyclic bindings inside
// either substitution also count as circular.
bool checkAdmissible(const TermSubst& sq, const PrefixSubst& sj, const Matrix& m,
                     std::string* cycleNote = nullptr);

// Same check over plain maps (certificate checking path).
bool checkAdmissibleMaps(const std::map<std::string, Term>& sq,
                         const std::map<CharId, PrefixString>& sj, const Matrix& m,
                         std::string* cycleNote = nullptr);

// Incremental admissibility for the search: the term-substitution edges are
// recomputed once per gate, and each candidate prefix substitution is checked
// against them. Any cycle in the combined relation must alternate between
// substitution edges and tree descents, so only the substitution edges are
// materialized.
class AdmissibilityProbe {
 public:
  explicit AdmissibilityProbe(const Matrix& m) : m_(m) {}
  void rebuildTermEdges(const TermSubst& sq);
  bool admissibleWith(const PrefixSubst& sj) const;

 private:
  bool cyclic(const std::vector<std::pair<PosId, PosId>>& extra) const;
  const Matrix& m_;
  std::vector<std::pair<PosId, PosId>> qEdges_;
};

}  // namespace matrixprove
