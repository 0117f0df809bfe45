#include "matrixprove/unify.hpp"

#include <algorithm>
#include <cassert>
#include <deque>
#include <set>

namespace matrixprove {

// ---------------------------------------------------------------------------
// Terms

void TermSubst::undoTo(size_t m) {
  while (trail_.size() > m) {
    bind_.erase(trail_.back());
    trail_.pop_back();
  }
}

const Term* TermSubst::lookup(const std::string& v) const {
  auto it = bind_.find(v);
  return it == bind_.end() ? nullptr : &it->second;
}

Term TermSubst::walk(Term t) const {
  while (t.var) {
    const Term* b = lookup(t.name);
    if (!b) return t;
    t = *b;
  }
  return t;
}

bool TermSubst::occurs(const std::string& v, const Term& t) const {
  Term w = walk(t);
  if (w.var) return w.name == v;
  for (const Term& a : w.args)
    if (occurs(v, a)) return true;
  return false;
}

bool TermSubst::unify(const Term& a0, const Term& b0) {
  Term a = walk(a0), b = walk(b0);
  if (a.var && b.var && a.name == b.name) return true;
  if (a.var) {
    if (occurs(a.name, b)) return false;
    set(a.name, b);
    return true;
  }
  if (b.var) {
    if (occurs(b.name, a)) return false;
    set(b.name, a);
    return true;
  }
  if (a.name != b.name || a.args.size() != b.args.size()) return false;
  for (size_t i = 0; i < a.args.size(); ++i)
    if (!unify(a.args[i], b.args[i])) return false;
  return true;
}

bool TermSubst::unifyArgs(const std::vector<Term>& a, const std::vector<Term>& b) {
  if (a.size() != b.size()) return false;
  for (size_t i = 0; i < a.size(); ++i)
    if (!unify(a[i], b[i])) return false;
  return true;
}

Term TermSubst::apply(const Term& t) const {
  Term w = walk(t);
  if (w.var) return w;
  for (Term& a : w.args) a = apply(a);
  return w;
}

std::optional<Term> TermSubst::applyChecked(const Term& t, int fuel) const {
  if (fuel <= 0) return std::nullopt;
  Term w = t;
  int hops = 0;
  while (w.var) {
    const Term* b = lookup(w.name);
    if (!b) return w;
    w = *b;
    if (++hops > fuel) return std::nullopt;
  }
  for (Term& a : w.args) {
    auto r = applyChecked(a, fuel - 1);
    if (!r) return std::nullopt;
    a = *r;
  }
  return w;
}

// ---------------------------------------------------------------------------
// Prefixes

void PrefixSubst::undoTo(size_t m) {
  while (trail_.size() > m) {
    bind_.erase(trail_.back());
    trail_.pop_back();
  }
}

const PrefixString* PrefixSubst::lookup(CharId v) const {
  auto it = bind_.find(v);
  return it == bind_.end() ? nullptr : &it->second;
}

void PrefixSubst::set(CharId v, PrefixString s) {
  bind_[v] = std::move(s);
  trail_.push_back(v);
}

PrefixString PrefixSubst::resolve(const PrefixString& s) const {
  PrefixString out;
  for (CharId c : s) {
    const PrefixString* b = lookup(c);
    if (b) {
      PrefixString sub = resolve(*b);
      out.insert(out.end(), sub.begin(), sub.end());
    } else {
      out.push_back(c);
    }
  }
  return out;
}

std::optional<PrefixString> PrefixSubst::resolveChecked(const PrefixString& s, int fuel) const {
  if (fuel <= 0) return std::nullopt;
  PrefixString out;
  for (CharId c : s) {
    const PrefixString* b = lookup(c);
    if (b) {
      auto sub = resolveChecked(*b, fuel - 1);
      if (!sub) return std::nullopt;
      out.insert(out.end(), sub->begin(), sub->end());
    } else {
      out.push_back(c);
    }
  }
  if ((int)out.size() > fuel) return std::nullopt;
  return out;
}

namespace {

// String unification for prefixes. Variables map to possibly-empty strings.
// Both sides are kept as reversed stacks (back() is the current head); the
// deterministic steps run in a loop, only the variable splits recurse. A
// variable head either becomes empty or absorbs the opposite head and
// continues as a fresh auxiliary. A shared step budget guards against
// pathological regrowth through variables occurring in several equations.
struct PrefixUnifier {
  using Stack = std::vector<CharId>;

  PrefixSubst& sj;
  const Matrix& m;
  int maxAlts;
  long* budget;
  const std::function<bool()>& yield;
  bool* capHit;
  int produced = 0;
  bool stopped = false;
  bool aborted = false;

  bool isVar(CharId c) const { return c < 0 || m.chars[c].variable; }

  void normalize(Stack& s) {
    while (!s.empty()) {
      const PrefixString* b = sj.lookup(s.back());
      if (!b) return;
      s.pop_back();
      for (auto it = b->rbegin(); it != b->rend(); ++it) s.push_back(*it);
    }
  }

  void emit() {
    if (produced >= maxAlts) {
      if (capHit) *capHit = true;
      aborted = true;
      return;
    }
    ++produced;
    if (yield()) stopped = true;
  }

  void go(Stack s, Stack t) {
    if (stopped || aborted) return;
    size_t mk0 = sj.mark();
    auto bail = [&] {
      if (!stopped) sj.undoTo(mk0);
    };
    for (;;) {
      if (--*budget < 0) {
        if (capHit) *capHit = true;
        aborted = true;
        bail();
        return;
      }
      normalize(s);
      normalize(t);
      if (s.empty() && t.empty()) {
        emit();
        bail();
        return;
      }
      if (s.empty() || t.empty()) {
        Stack& r = s.empty() ? t : s;
        CharId h = r.back();
        if (!isVar(h)) {  // a constant cannot vanish
          bail();
          return;
        }
        sj.set(h, {});
        r.pop_back();
        continue;
      }
      CharId a = s.back(), b = t.back();
      if (a == b) {
        s.pop_back();
        t.pop_back();
        continue;
      }
      bool av = isVar(a), bv = isVar(b);
      if (!av && !bv) {  // distinct rigid heads
        bail();
        return;
      }
      if (!av) {  // keep the variable on the left
        std::swap(s, t);
        std::swap(a, b);
        std::swap(av, bv);
      }
      if (!bv) {
        // a -> empty
        {
          size_t mk = sj.mark();
          sj.set(a, {});
          Stack s2(s);
          s2.pop_back();
          go(std::move(s2), t);
          if (!stopped) sj.undoTo(mk);
        }
        if (stopped || aborted) {
          bail();
          return;
        }
        // a starts with the constant b
        {
          size_t mk = sj.mark();
          CharId rest = sj.freshAux();
          sj.set(a, {b, rest});
          Stack s2(s);
          s2.back() = rest;
          Stack t2(t);
          t2.pop_back();
          go(std::move(s2), std::move(t2));
          if (!stopped) sj.undoTo(mk);
        }
        bail();
        return;
      }
      // Distinct variable heads: one image is a prefix of the other.
      {
        size_t mk = sj.mark();
        CharId rest = sj.freshAux();
        sj.set(a, PrefixString{b, rest});
        Stack s2(s);
        s2.back() = rest;
        Stack t2(t);
        t2.pop_back();
        go(std::move(s2), std::move(t2));
        if (!stopped) sj.undoTo(mk);
      }
      if (stopped || aborted) {
        bail();
        return;
      }
      {
        size_t mk = sj.mark();
        CharId rest = sj.freshAux();
        sj.set(b, PrefixString{a, rest});
        Stack s2(s);
        s2.pop_back();
        Stack t2(t);
        t2.back() = rest;
        go(std::move(s2), std::move(t2));
        if (!stopped) sj.undoTo(mk);
      }
      bail();
      return;
    }
  }
};

}  // namespace

bool PrefixSubst::forEachUnifier(const PrefixString& a, const PrefixString& b,
                                 const Matrix& m, int maxAlts, long* stepBudget,
                                 const std::function<bool()>& yield, bool* capHit) {
  PrefixUnifier u{*this, m, maxAlts, stepBudget, yield, capHit};
  u.go(PrefixUnifier::Stack(a.rbegin(), a.rend()), PrefixUnifier::Stack(b.rbegin(), b.rend()));
  return u.stopped;
}

// ---------------------------------------------------------------------------
// Admissibility

namespace {

struct Digraph {
  std::map<PosId, std::vector<PosId>> edges;
  void add(PosId from, PosId to) { edges[from].push_back(to); }

  bool acyclicUnderTree(const Matrix& m, std::string* note) const {
    // Combine with tree edges. Colors: 0 unvisited, 1 on stack, 2 done.
    std::vector<int> color(m.positions.size(), 0);
    bool cyclic = false;
    std::function<void(PosId)> dfs = [&](PosId u) {
      if (cyclic) return;
      color[u] = 1;
      const Position& p = m.positions[u];
      auto visit = [&](PosId v) {
        if (cyclic) return;
        if (color[v] == 1) {
          cyclic = true;
          if (note) *note = "cycle through " + m.positions[v].pathId;
          return;
        }
        if (color[v] == 0) dfs(v);
      };
      for (PosId c : p.children) visit(c);
      auto it = edges.find(u);
      if (it != edges.end())
        for (PosId v : it->second) visit(v);
      color[u] = 2;
    };
    for (PosId u = 0; u < (PosId)m.positions.size() && !cyclic; ++u)
      if (color[u] == 0) dfs(u);
    return !cyclic;
  }
};

void rigidTargets(const Term& t, const Matrix& m, std::set<PosId>& out) {
  if (t.var) return;
  auto it = m.rigidOwner.find(t.name);
  if (it != m.rigidOwner.end()) out.insert(it->second);
  for (const Term& a : t.args) rigidTargets(a, m, out);
}

template <typename LookupQ, typename ApplyQ, typename LookupJKeys, typename ResolveJ>
bool admissibleCore(const Matrix& m, LookupQ&& qKeys, ApplyQ&& qApply,
                    LookupJKeys&& jKeys, ResolveJ&& jResolve, std::string* note) {
  Digraph g;
  for (const auto& vname : qKeys()) {
    auto owner = m.varOwner.find(vname);
    if (owner == m.varOwner.end()) continue;  // auxiliary or foreign variable
    auto img = qApply(vname);
    if (!img) {
      if (note) *note = "cyclic term bindings";
      return false;
    }
    std::set<PosId> rigids;
    rigidTargets(*img, m, rigids);
    for (PosId d : rigids) g.add(d, owner->second);
  }
  for (CharId z : jKeys()) {
    if (z < 0) continue;
    PosId emitter = m.chars[z].emitter;
    auto img = jResolve(z);
    if (!img) {
      if (note) *note = "cyclic prefix bindings";
      return false;
    }
    for (CharId c : *img) {
      if (c < 0) continue;
      if (!m.chars[c].variable) g.add(m.chars[c].emitter, emitter);
    }
  }
  return g.acyclicUnderTree(m, note);
}

}  // namespace

bool checkAdmissible(const TermSubst& sq, const PrefixSubst& sj, const Matrix& m,
                     std::string* note) {
  auto qKeys = [&] {
    std::vector<std::string> ks;
    for (const auto& [k, v] : sq.bindings()) ks.push_back(k);
    return ks;
  };
  auto qApply = [&](const std::string& v) { return sq.applyChecked(mkVar(v)); };
  auto jKeys = [&] {
    std::vector<CharId> ks;
    for (const auto& [k, v] : sj.bindings()) ks.push_back(k);
    return ks;
  };
  auto jResolve = [&](CharId z) { return sj.resolveChecked({z}); };
  return admissibleCore(m, qKeys, qApply, jKeys, jResolve, note);
}

bool checkAdmissibleMaps(const std::map<std::string, Term>& sq,
                         const std::map<CharId, PrefixString>& sj, const Matrix& m,
                         std::string* note) {
  TermSubst tq;
  for (const auto& [k, v] : sq) tq.set(k, v);
  PrefixSubst pj;
  for (const auto& [k, v] : sj) pj.set(k, v);
  return checkAdmissible(tq, pj, m, note);
}

void AdmissibilityProbe::rebuildTermEdges(const TermSubst& sq) {
  qEdges_.clear();
  for (const auto& [v, t] : sq.bindings()) {
    auto owner = m_.varOwner.find(v);
    if (owner == m_.varOwner.end()) continue;
    auto img = sq.applyChecked(mkVar(v));
    if (!img) continue;  // cyclic chains cannot arise from occurs-checked unification
    std::set<PosId> rigids;
    rigidTargets(*img, m_, rigids);
    for (PosId d : rigids) qEdges_.push_back({d, owner->second});
  }
}

bool AdmissibilityProbe::admissibleWith(const PrefixSubst& sj) const {
  std::vector<std::pair<PosId, PosId>> extra;
  for (const auto& [z, img] : sj.bindings()) {
    if (z < 0) continue;
    PosId emitter = m_.chars[z].emitter;
    auto resolved = sj.resolveChecked({z});
    if (!resolved) return false;
    for (CharId c : *resolved) {
      if (c < 0) continue;
      if (!m_.chars[c].variable) extra.push_back({m_.chars[c].emitter, emitter});
    }
  }
  return !cyclic(extra);
}

bool AdmissibilityProbe::cyclic(const std::vector<std::pair<PosId, PosId>>& extra) const {
  std::vector<std::pair<PosId, PosId>> edges = qEdges_;
  edges.insert(edges.end(), extra.begin(), extra.end());
  size_t n = edges.size();
  if (n == 0) return false;
  auto inSubtree = [&](PosId top, PosId u) {
    while (u >= 0 && m_.at(u).depth >= m_.at(top).depth) {
      if (u == top) return true;
      u = m_.at(u).parent;
    }
    return false;
  };
  // Edge i can be followed by edge j when j starts inside the subtree the
  // target of i dominates.
  std::vector<std::vector<int>> succ(n);
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j)
      if (inSubtree(edges[i].second, edges[j].first)) succ[i].push_back((int)j);
  std::vector<int> color(n, 0);
  std::function<bool(int)> dfs = [&](int i) -> bool {
    color[i] = 1;
    for (int j : succ[i]) {
      if (color[j] == 1) return true;
      if (color[j] == 0 && dfs(j)) return true;
    }
    color[i] = 2;
    return false;
  };
  for (size_t i = 0; i < n; ++i)
    if (color[i] == 0 && dfs((int)i)) return true;
  return false;
}

}  // namespace matrixprove
