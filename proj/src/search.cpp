#include "matrixprove/search.hpp"

#include <algorithm>
#include <cassert>
#include <chrono>
#include <deque>
#include <functional>
#include <set>

#include "matrixprove/unify.hpp"

namespace matrixprove {

namespace {

struct GoalNode {
  PosId pos;
  const GoalNode* next;
};
struct PathNode {
  PosId pos;
  const PathNode* next;
};

using Cont = std::function<bool()>;

struct Searcher {
  Matrix m;
  const SearchLimits& lim;
  std::vector<TraceEvent>* trace;
  const std::atomic<bool>* cancel;

  TermSubst sq;
  AdmissibilityProbe probe;
  std::vector<std::pair<PrefixString, PrefixString>> eqs;
  PrefixSubst finalSj;
  std::vector<std::pair<PosId, PosId>> conns;
  SearchStats stats;

  // Copy roots already constrained by the substitution or a connection.
  // Clean copies are isomorphic to a fresh one, so only the first clean copy
  // of a group is ever tried and fresh copies are materialized only when all
  // existing ones are dirty.
  std::set<PosId> dirty;
  std::vector<PosId> dirtyTrail;

  size_t dirtyMark() const { return dirtyTrail.size(); }
  void undoDirty(size_t k) {
    while (dirtyTrail.size() > k) {
      dirty.erase(dirtyTrail.back());
      dirtyTrail.pop_back();
    }
  }
  void markDirtyUp(PosId u) {
    for (PosId w = u; w >= 0; w = m.at(w).parent)
      if (m.at(w).copyRoot && dirty.insert(w).second) dirtyTrail.push_back(w);
  }

  int depthBound = 1;
  bool depthCut = false;
  bool capCut = false;
  bool timedOut = false;
  bool sliced = false;       // deterministic per-level tick budget expired
  long tickBudget = -1;
  std::chrono::steady_clock::time_point deadline;
  bool hasDeadline = false;
  long ticks = 0;

  std::deque<GoalNode> goalArena;
  std::deque<PathNode> pathArena;

  Searcher(Matrix matrix, const SearchLimits& lim, std::vector<TraceEvent>* trace,
           const std::atomic<bool>* cancel)
      : m(std::move(matrix)), lim(lim), trace(trace), cancel(cancel), probe(m) {}

  const GoalNode* consGoal(PosId p, const GoalNode* rest) {
    goalArena.push_back(GoalNode{p, rest});
    return &goalArena.back();
  }
  const PathNode* consPath(PosId p, const PathNode* rest) {
    pathArena.push_back(PathNode{p, rest});
    return &pathArena.back();
  }

  bool out() {
    if (timedOut || sliced) return true;
    ++ticks;
    if (tickBudget >= 0 && ticks > tickBudget) {
      sliced = true;
      return true;
    }
    if (ticks % 2048 == 0) {
      if (cancel && cancel->load(std::memory_order_relaxed)) timedOut = true;
      if (hasDeadline && std::chrono::steady_clock::now() > deadline) timedOut = true;
    }
    return timedOut || sliced;
  }

  size_t traceMark() const { return trace ? trace->size() : 0; }
  void traceUndo(size_t k) {
    if (trace) trace->resize(k);
  }
  void tr(TraceEvent::Kind k, const std::string& a, const std::string& b = "") {
    if (trace) trace->push_back(TraceEvent{k, a, b});
  }

  bool compatibleWithPath(PosId q, const PathNode* path, PosId extraAtom) {
    if (extraAtom >= 0 && m.betaSeparated(q, extraAtom)) return false;
    for (const PathNode* p = path; p; p = p->next)
      if (m.betaSeparated(q, p->pos)) return false;
    return true;
  }

  // Beta-siblings along the branch from q (exclusive) up to stop (exclusive),
  // innermost first, dropping siblings no path through the active path can
  // visit.
  void collectSiblings(PosId q, PosId stop, const PathNode* path, PosId goalAtom,
                       std::vector<PosId>& out) {
    PosId cur = q;
    PosId par = m.at(cur).parent;
    while (par >= 0 && cur != stop) {
      const Position& pp = m.at(par);
      if (pp.ptype == PType::Beta && !pp.repeatable) {
        for (PosId c : pp.children) {
          if (c == cur) continue;
          if (compatibleWithPath(c, path, goalAtom)) out.push_back(c);
        }
      }
      cur = par;
      par = m.at(cur).parent;
    }
  }

  bool solve(const GoalNode* goals, const PathNode* path, int pathLen, const Cont& k) {
    if (out()) return false;
    if (!goals) return k();
    PosId g = goals->pos;
    const GoalNode* rest = goals->next;
    const Position& p = m.at(g);

    if (p.repeatable) {
      // Choice over copies; a fresh one as the last resort.
      bool triedClean = false;
      for (PosId c : p.children) {
        bool clean = !dirty.count(c);
        if (clean && triedClean) continue;
        if (clean) triedClean = true;
        if (solve(consGoal(c, rest), path, pathLen, k)) return true;
      }
      if (timedOut) return false;
      if (triedClean) return false;  // a fresh copy would replay the clean one
      if ((int)p.children.size() >= lim.copyCap) {
        capCut = true;
        return false;
      }
      MatrixUndo u;
      size_t tm = traceMark();
      if (!m.addInstance(g, &u)) {
        capCut = true;
        return false;
      }
      ++stats.copies;
      PosId fresh = m.at(g).children.back();
      tr(TraceEvent::Copy, p.pathId, std::to_string(m.multiplicityOf(g)));
      if (solve(consGoal(fresh, rest), path, pathLen, k)) return true;
      m.undoInstance(u);
      traceUndo(tm);
      return false;
    }

    switch (p.ptype) {
      case PType::Alpha:
      case PType::Delta: {
        if (p.children.size() == 1)
          return solve(consGoal(p.children[0], rest), path, pathLen, k);
        // Conjecture-side child first.
        std::vector<PosId> order(p.children.begin(), p.children.end());
        std::stable_sort(order.begin(), order.end(), [&](PosId a, PosId b) {
          return (m.at(a).polarity == 0) > (m.at(b).polarity == 0);
        });
        for (PosId c : order)
          if (solve(consGoal(c, rest), path, pathLen, k)) return true;
        return false;
      }
      case PType::Beta: {
        const GoalNode* gl = rest;
        for (auto it = p.children.rbegin(); it != p.children.rend(); ++it) {
          if (!compatibleWithPath(*it, path, -1)) continue;  // no path visits it
          gl = consGoal(*it, gl);
        }
        return solve(gl, path, pathLen, k);
      }
      case PType::Atom:
        return closeAtom(g, rest, path, pathLen, k);
      case PType::Gamma:
        assert(false && "gamma positions are repeatable");
        return false;
    }
    return false;
  }

  // Joint solvability of the accumulated prefix equations together with the
  // non-circularity of the combined substitution: enumerate solutions of the
  // equation set until one is admissible. Nothing is committed; the search
  // only needs the gate, and the winning substitution is recomputed at the
  // end for the certificate.
  // finalCheck runs with the full budget and fails honestly on exhaustion;
  // the incremental gate uses a small budget and passes optimistically when
  // it runs out, leaving the verdict to the final check.
  bool checkConstraints(PrefixSubst* out, bool finalCheck) {
    PrefixSubst tmp;
    long yields = 0;
    long budget = finalCheck ? lim.prefixStepBudget : 12000;
    bool found = false;
    bool cut = false;
    probe.rebuildTermEdges(sq);
    std::function<bool(size_t)> rec = [&](size_t i) -> bool {
      if (this->out()) return true;
      if (i == eqs.size()) {
        if (++yields > 64L * lim.sigmaJCap) {
          cut = true;
          return true;  // stop enumerating; resolved below
        }
        if (!probe.admissibleWith(tmp)) return false;
        found = true;
        return true;
      }
      // Newest equation first: the most recent connection fails fastest.
      size_t at = eqs.size() - 1 - i;
      bool cap = false;
      bool stopped = tmp.forEachUnifier(eqs[at].first, eqs[at].second, m, lim.sigmaJCap,
                                        &budget, [&] { return rec(i + 1); }, &cap);
      if (cap) cut = true;
      return stopped;
    };
    rec(0);
    if (found) {
      if (out) *out = tmp;
      return true;
    }
    if (cut) {
      if (finalCheck) {
        capCut = true;
        return false;
      }
      return true;  // undecided: let the final check rule
    }
    return false;
  }

  bool tryConnection(PosId g, PosId q, const GoalNode* sibsGoals, const PathNode* newPath,
                     int newLen, const GoalNode* rest, const PathNode* path, int pathLen,
                     const Cont& k, bool reduction, bool* closedFlag) {
    const Position& pg = m.at(g);
    const Position& pq = m.at(q);
    size_t mq = sq.mark();
    if (!sq.unifyArgs(pg.args, pq.args)) {
      sq.undoTo(mq);
      return false;
    }
    size_t eqMark = eqs.size();
    if (m.mode == Mode::Intuitionistic) eqs.push_back({pg.prefix, pq.prefix});
    conns.push_back({g, q});
    size_t dm = dirtyMark();
    markDirtyUp(g);
    markDirtyUp(q);
    for (size_t i = mq; i < sq.trail().size(); ++i) {
      auto it = m.varOwner.find(sq.trail()[i]);
      if (it != m.varOwner.end()) markDirtyUp(it->second);
    }
    size_t tm = traceMark();
    tr(reduction ? TraceEvent::Reduce : TraceEvent::Extend, pg.pathId, pq.pathId);

    bool proved = false;
    if (checkConstraints(nullptr, false)) {
      if (reduction) {
        ++stats.reductions;
        *closedFlag = true;
        proved = solve(rest, path, pathLen, k);
      } else {
        ++stats.extensions;
        proved = solve(sibsGoals, newPath, newLen, [&]() {
          *closedFlag = true;
          return solve(rest, path, pathLen, k);
        });
      }
    }
    if (!proved) {
      conns.pop_back();
      eqs.resize(eqMark);
      sq.undoTo(mq);
      undoDirty(dm);
      traceUndo(tm);
    }
    return proved;
  }

  bool closeAtom(PosId g, const GoalNode* rest, const PathNode* path, int pathLen,
                 const Cont& k) {
    if (out()) return false;
    const Position& pg = m.at(g);
    bool closedOnce = false;

    // Reductions against the active path.
    for (const PathNode* pn = path; pn; pn = pn->next) {
      const Position& pp = m.at(pn->pos);
      if (pp.pred != pg.pred || pp.polarity == pg.polarity) continue;
      if (tryConnection(g, pn->pos, nullptr, nullptr, 0, rest, path, pathLen, k, true,
                        &closedOnce))
        return true;
      if (timedOut) return false;
      if (lim.restrictedBacktracking && closedOnce) return false;
    }

    // Extensions into existing complementary atoms.
    auto key = std::make_pair(pg.pred, 1 - pg.polarity);
    if (pathLen + 1 > depthBound) {
      auto it = m.atomIndex.find(key);
      if (it != m.atomIndex.end() && !it->second.empty()) depthCut = true;
      return false;
    }
    const PathNode* newPath = consPath(g, path);
    auto tryExtensionInto = [&](PosId q) -> bool {
      if (q == g) return false;
      if (!compatibleWithPath(q, path, g)) return false;
      bool onPath = false;
      for (const PathNode* pn = path; pn; pn = pn->next)
        if (pn->pos == q) { onPath = true; break; }
      if (onPath) return false;  // the reduction already covers it
      PosId stop = m.lca(g, q);
      std::vector<PosId> sibs;
      collectSiblings(q, stop, path, g, sibs);
      const GoalNode* sibGoals = nullptr;
      for (auto it = sibs.rbegin(); it != sibs.rend(); ++it) sibGoals = consGoal(*it, sibGoals);
      return tryConnection(g, q, sibGoals, newPath, pathLen + 1, rest, path, pathLen, k, false,
                           &closedOnce);
    };

    auto snapshot = [&]() {
      auto it = m.atomIndex.find(key);
      return it == m.atomIndex.end() ? std::vector<PosId>{} : it->second;
    };
    std::set<PosId> cleanGroupTried;
    for (PosId q : snapshot()) {
      const Position& pq = m.at(q);
      if (pq.copyRoot && !dirty.count(q)) {
        if (!cleanGroupTried.insert(pq.parent).second) continue;
      }
      if (tryExtensionInto(q)) return true;
      if (timedOut) return false;
      if (lim.restrictedBacktracking && closedOnce) return false;
    }

    // Extensions into fresh copies: for each known partner, try copying its
    // repeatable ancestors, innermost first. Copying refreshes the prefix
    // characters (and, for quantifier ancestors, the variables) of the
    // partner.
    auto under = [&](PosId top, PosId u) {
      for (PosId w = u; w >= 0 && m.at(w).depth >= m.at(top).depth; w = m.at(w).parent)
        if (w == top) return true;
      return false;
    };
    for (PosId q : snapshot()) {
      for (PosId anc = m.at(q).parent; anc >= 0; anc = m.at(anc).parent) {
        const Position& ap = m.at(anc);
        if (!ap.repeatable) continue;
        // A clean existing copy makes a fresh one redundant, unless the goal
        // atom lives inside that copy: a cross-copy connection is genuinely
        // different from the within-copy one already tried.
        PosId last = ap.children.back();
        if (!dirty.count(last) && !under(last, g)) continue;
        if ((int)ap.children.size() >= lim.copyCap) {
          capCut = true;
          continue;
        }
        MatrixUndo u;
        size_t tm = traceMark();
        if (!m.addInstance(anc, &u)) {
          capCut = true;
          continue;
        }
        ++stats.copies;
        int kIdx = m.multiplicityOf(anc);
        tr(TraceEvent::Copy, ap.pathId, std::to_string(kIdx));
        // The partner's counterpart inside the new copy, by path-id surgery.
        const std::string& qPath = m.at(q).pathId;
        std::string oldPrefix;
        {
          // q lies under some copy of anc; find that copy root's path id.
          PosId c = q;
          while (m.at(c).parent != anc) c = m.at(c).parent;
          oldPrefix = m.at(c).pathId;
        }
        std::string fresh = m.at(m.at(anc).children.back()).pathId + qPath.substr(oldPrefix.size());
        auto fIt = m.byPathId.find(fresh);
        bool done = false;
        if (fIt != m.byPathId.end()) done = tryExtensionInto(fIt->second);
        if (done) return true;
        m.undoInstance(u);
        traceUndo(tm);
        if (timedOut) return false;
        if (lim.restrictedBacktracking && closedOnce) return false;
      }
    }
    return false;
  }
};

}  // namespace

SearchOutcome prove(const FormulaPtr& f, const SearchLimits& limits,
                    std::vector<TraceEvent>* trace, const std::atomic<bool>* cancel) {
  SearchLimits lim = limits;
  lim.depthStart = std::max(1, lim.depthStart);
  lim.copyCap = std::max(1, lim.copyCap);
  lim.sigmaJCap = std::max(1, lim.sigmaJCap);

  SearchOutcome outcome;
  auto start = std::chrono::steady_clock::now();

  for (int bound = lim.depthStart;; bound *= 2) {
    Searcher s(Matrix::build(f, lim.mode, lim.copyCap), lim, trace, cancel);
    s.depthBound = bound;
    if (lim.timeoutSec > 0) {
      s.hasDeadline = true;
      s.deadline = start + std::chrono::microseconds((long)(lim.timeoutSec * 1e6));
    }
    if (trace) trace->push_back(TraceEvent{TraceEvent::Deepen, std::to_string(bound), ""});

    bool proved = s.solve(s.consGoal(s.m.root, nullptr), nullptr, 0,
                          [&s] { return s.checkConstraints(&s.finalSj, true); });
    outcome.stats.extensions += s.stats.extensions;
    outcome.stats.reductions += s.stats.reductions;
    outcome.stats.copies += s.stats.copies;
    outcome.stats.ticks += s.ticks;
    outcome.stats.depthReached = bound;

    if (proved) {
      outcome.kind = OutcomeKind::Proved;
      outcome.certificate = makeCertificate(s.m, s.sq, s.finalSj, s.conns);
      outcome.certificateCheck = checkCertificate(f, *outcome.certificate, lim.mode);
      return outcome;
    }
    if (s.timedOut) {
      outcome.kind = OutcomeKind::Timeout;
      return outcome;
    }
    if (!s.depthCut) {
      outcome.kind = OutcomeKind::ExhaustedBounds;
      return outcome;
    }
  }
}

}  // namespace matrixprove
