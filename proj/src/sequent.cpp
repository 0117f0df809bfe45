#include "matrixprove/sequent.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

#include "matrixprove/unify.hpp"

namespace matrixprove {

using nlohmann::json;

const char* ruleName(RuleId r) {
  switch (r) {
    case RuleId::Axiom: return "axiom";
    case RuleId::AndL: return "and_l";
    case RuleId::AndR: return "and_r";
    case RuleId::OrL: return "or_l";
    case RuleId::OrR: return "or_r";
    case RuleId::ImpL: return "imp_l";
    case RuleId::ImpR: return "imp_r";
    case RuleId::NegL: return "neg_l";
    case RuleId::NegR: return "neg_r";
    case RuleId::IffL: return "iff_l";
    case RuleId::IffR: return "iff_r";
    case RuleId::ForallL: return "forall_l";
    case RuleId::ForallR: return "forall_r";
    case RuleId::ExistsL: return "exists_l";
    case RuleId::ExistsR: return "exists_r";
  }
  return "?";
}

namespace {

struct ITF {
  FormulaPtr f;
  PosId pos;
};
struct ISeq {
  std::vector<ITF> ante, succ;
};

FormulaPtr unfoldIff(const FormulaPtr& f) {
  return fAnd(fImp(f->left, f->right), fImp(f->right, f->left));
}

struct Translator {
  const FormulaPtr& formula;
  const Certificate& cert;
  Mode mode;
  Matrix m;

  TermSubst sq;
  std::vector<std::pair<PosId, PosId>> conns;  // (polarity-1 leaf, polarity-0 leaf)
  std::set<PosId> relevant;
  std::map<PosId, std::vector<PosId>> blockEdges;  // target -> sources
  std::map<PosId, int> rank;
  std::map<PosId, std::string> eigenOf;   // delta position -> eigenvariable constant
  std::map<std::string, std::string> unboundName;  // matrix variable -> fresh constant
  std::set<std::string> takenSymbols;
  int freshCounter = 0;
  long nodesBuilt = 0;
  std::string deadlock;

  Translator(const FormulaPtr& f, const Certificate& c, Mode mode)
      : formula(f), cert(c), mode(mode), m(materializeMatrix(f, c, mode)) {}

  void setup() {
    for (const auto& s : symbolsOf(formula)) takenSymbols.insert(s);

    for (const auto& [v, t] : cert.sigmaQ) sq.set(v, t);

    for (const auto& [aPath, bPath] : cert.connections) {
      PosId a = m.byPathId.at(aPath), b = m.byPathId.at(bPath);
      if (m.at(a).polarity == 0) std::swap(a, b);
      conns.push_back({a, b});
      for (PosId u : {a, b})
        for (PosId w = u; w >= 0; w = m.at(w).parent) relevant.insert(w);
    }

    // Eigenvariable names, stable in path order.
    std::vector<PosId> deltas;
    for (const Position& p : m.positions)
      if (!p.repeatable && (p.kind == FKind::Forall || p.kind == FKind::Exists))
        deltas.push_back(p.id);
    std::sort(deltas.begin(), deltas.end(),
              [&](PosId a, PosId b) { return m.at(a).pathId < m.at(b).pathId; });
    int k = 0;
    for (PosId d : deltas) {
      std::string n;
      do n = "esk" + std::to_string(++k);
      while (takenSymbols.count(n));
      takenSymbols.insert(n);
      eigenOf[d] = n;
    }

    // Ordering edges induced by the substitutions.
    for (const auto& [v, t] : cert.sigmaQ) {
      auto owner = m.varOwner.find(v);
      if (owner == m.varOwner.end()) continue;
      auto img = sq.applyChecked(mkVar(v));
      if (!img) continue;  // the certificate checker rejects cyclic bindings
      std::function<void(const Term&)> walk = [&](const Term& u) {
        if (!u.var) {
          auto it = m.rigidOwner.find(u.name);
          if (it != m.rigidOwner.end()) blockEdges[owner->second].push_back(it->second);
          for (const Term& a : u.args) walk(a);
        }
      };
      walk(*img);
    }
    for (const auto& [zPath, img] : cert.sigmaJ) {
      PosId pz = m.byPathId.at(zPath);
      for (const std::string& cPath : img) {
        PosId pc = m.byPathId.at(cPath);
        if (!m.chars[m.at(pc).emits].variable) blockEdges[pz].push_back(pc);
      }
    }

    // Topological rank over tree + ordering edges, deterministic by path id.
    std::map<PosId, int> indeg;
    std::map<PosId, std::vector<PosId>> out;
    for (const Position& p : m.positions) {
      indeg.emplace(p.id, 0);
      for (PosId c : p.children) {
        out[p.id].push_back(c);
        ++indeg[c];
      }
    }
    for (const auto& [target, sources] : blockEdges)
      for (PosId s : sources) {
        out[s].push_back(target);
        ++indeg[target];
      }
    auto cmp = [&](PosId a, PosId b) { return m.at(a).pathId < m.at(b).pathId; };
    std::set<PosId, decltype(cmp)> ready(cmp);
    for (const auto& [u, d] : indeg)
      if (d == 0) ready.insert(u);
    int r = 0;
    while (!ready.empty()) {
      PosId u = *ready.begin();
      ready.erase(ready.begin());
      rank[u] = r++;
      for (PosId v : out[u])
        if (--indeg[v] == 0) ready.insert(v);
    }
  }

  Term groundTerm(const Term& t0) {
    Term t = sq.apply(t0);
    std::function<Term(const Term&)> walk = [&](const Term& u) -> Term {
      if (u.var) {
        auto it = unboundName.find(u.name);
        if (it == unboundName.end()) {
          std::string n;
          do n = "w" + std::to_string(++freshCounter);
          while (takenSymbols.count(n));
          takenSymbols.insert(n);
          it = unboundName.emplace(u.name, n).first;
        }
        return mkConst(it->second);
      }
      auto rig = m.rigidOwner.find(u.name);
      if (rig != m.rigidOwner.end()) return mkConst(eigenOf.at(rig->second));
      Term r = u;
      for (Term& a : r.args) a = walk(a);
      return r;
    };
    return walk(t);
  }

  // The antecedent tag an atom leaf is exposed under.
  PosId tagForAtom(PosId leaf) const {
    PosId par = m.at(leaf).parent;
    if (par >= 0 && m.at(par).repeatable && m.at(par).ptype == PType::Atom) return par;
    return leaf;
  }

  struct BranchState {
    std::set<PosId> applied;  // nodes whose own rule has fired on this branch
    std::set<PosId> used;     // copy roots consumed through their group
  };

  bool isPending(PosId s, const BranchState& st, const std::set<PosId>& tags) const {
    if (m.at(s).ptype == PType::Atom) return false;  // atoms carry no rule
    if (!relevant.count(s)) return false;
    if (st.applied.count(s)) return false;
    for (PosId w = s; w >= 0; w = m.at(w).parent)
      if (tags.count(w)) return true;
    return false;
  }

  bool blocked(PosId acting, const BranchState& st, const std::set<PosId>& tags) const {
    auto it = blockEdges.find(acting);
    if (it == blockEdges.end()) return false;
    for (PosId s : it->second)
      if (isPending(s, st, tags)) return true;
    return false;
  }

  struct Candidate {
    bool right;
    int idx;
    PosId acting;  // copy root for repeatable groups, the node itself otherwise
    int copy = -1; // child index for repeatable groups
  };

  std::unique_ptr<SequentNode> fail(const ISeq& seq, const std::string& why) {
    if (deadlock.empty()) {
      std::ostringstream os;
      os << why << " at sequent:";
      for (const auto& t : seq.ante) os << " " << printFormula(t.f) << "@" << m.at(t.pos).pathId;
      os << " |-";
      for (const auto& t : seq.succ) os << " " << printFormula(t.f) << "@" << m.at(t.pos).pathId;
      deadlock = os.str();
    }
    return nullptr;
  }

  std::unique_ptr<SequentNode> makeNode(const ISeq& seq) {
    auto n = std::make_unique<SequentNode>();
    for (const auto& t : seq.ante) n->ante.push_back({t.f, m.at(t.pos).pathId});
    for (const auto& t : seq.succ) n->succ.push_back({t.f, m.at(t.pos).pathId});
    return n;
  }

  std::unique_ptr<SequentNode> build(const ISeq& seq, BranchState st) {
    if (++nodesBuilt > 200000) return fail(seq, "construction limit exceeded");
    std::set<PosId> tags;
    for (const auto& t : seq.ante) tags.insert(t.pos);
    for (const auto& t : seq.succ) tags.insert(t.pos);

    // Close as soon as some certificate connection is exposed.
    for (const auto& [x, y] : conns) {
      PosId ax = tagForAtom(x);
      int ai = -1, si = -1;
      for (size_t i = 0; i < seq.ante.size(); ++i)
        if (seq.ante[i].pos == ax) ai = (int)i;
      for (size_t i = 0; i < seq.succ.size(); ++i)
        if (seq.succ[i].pos == y) si = (int)i;
      if (ai < 0 || si < 0) continue;
      if (!formulaEq(seq.ante[ai].f, seq.succ[si].f)) continue;
      bool blockedAxiom = false;
      for (PosId endpoint : {x, y}) {
        auto it = blockEdges.find(endpoint);
        if (it == blockEdges.end()) continue;
        for (PosId s : it->second)
          if (isPending(s, st, tags)) blockedAxiom = true;
      }
      if (blockedAxiom) continue;
      auto n = makeNode(seq);
      n->rule = RuleId::Axiom;
      n->principal = ai;
      n->principalRight = false;
      n->connection = {m.at(x).pathId, m.at(y).pathId};
      return n;
    }

    // Candidate rules.
    std::vector<Candidate> cands;
    auto consider = [&](bool right, int idx, const ITF& item) {
      const Position& p = m.at(item.pos);
      if (p.ptype == PType::Atom) return;
      if (!relevant.count(item.pos)) return;
      if (p.repeatable) {
        for (size_t k = 0; k < p.children.size(); ++k) {
          PosId cr = p.children[k];
          if (!relevant.count(cr)) continue;
          if (st.used.count(cr)) continue;
          if (blocked(cr, st, tags)) continue;
          cands.push_back({right, idx, cr, (int)k});
        }
      } else {
        if (st.applied.count(item.pos)) return;
        if (blocked(item.pos, st, tags)) return;
        cands.push_back({right, idx, item.pos, -1});
      }
    };
    for (size_t i = 0; i < seq.ante.size(); ++i) consider(false, (int)i, seq.ante[i]);
    for (size_t i = 0; i < seq.succ.size(); ++i) consider(true, (int)i, seq.succ[i]);

    std::stable_sort(cands.begin(), cands.end(), [&](const Candidate& a, const Candidate& b) {
      int ra = rank.count(a.acting) ? rank.at(a.acting) : 1 << 30;
      int rb = rank.count(b.acting) ? rank.at(b.acting) : 1 << 30;
      if (ra != rb) return ra < rb;
      return m.at(a.acting).pathId < m.at(b.acting).pathId;
    });

    if (cands.empty()) return fail(seq, "no applicable rule and no exposed connection");

    int alternatives = 0;
    for (size_t ci = 0; ci < cands.size(); ++ci) {
      if (ci > 0 && ++alternatives > 4) break;  // bounded local backtracking
      auto n = apply(seq, st, cands[ci]);
      if (n) return n;
    }
    return fail(seq, "all rule choices dead-ended");
  }

  std::unique_ptr<SequentNode> apply(const ISeq& seq, BranchState st, const Candidate& c) {
    const ITF item = c.right ? seq.succ[c.idx] : seq.ante[c.idx];
    const Position& p = m.at(item.pos);
    const FormulaPtr F = item.f;
    if (p.repeatable) {
      st.used.insert(c.acting);
      // Quantifier copies expose their body, whose own rule is still to come;
      // other repeatable kinds are decomposed by this very rule.
      if (p.kind != FKind::Forall && p.kind != FKind::Exists) st.applied.insert(c.acting);
    } else {
      st.applied.insert(c.acting);
    }

    auto n = makeNode(seq);
    n->principal = c.idx;
    n->principalRight = c.right;

    auto without = [&](const std::vector<ITF>& v, int idx) {
      std::vector<ITF> r;
      for (int i = 0; i < (int)v.size(); ++i)
        if (i != idx) r.push_back(v[i]);
      return r;
    };
    auto finish = [&](std::vector<ISeq> premises) -> std::unique_ptr<SequentNode> {
      for (ISeq& pr : premises) {
        auto sub = build(pr, st);
        if (!sub) return nullptr;
        n->premises.push_back(std::move(sub));
      }
      return std::move(n);
    };

    // Children of the acting structural node.
    const Position& act = m.at(c.acting);

    if (!c.right) {
      switch (F->kind) {
        case FKind::And: {
          n->rule = RuleId::AndL;
          ISeq pr{without(seq.ante, c.idx), seq.succ};
          pr.ante.push_back({F->left, act.children[0]});
          pr.ante.push_back({F->right, act.children[1]});
          return finish({std::move(pr)});
        }
        case FKind::Or: {
          n->rule = RuleId::OrL;
          ISeq p1{without(seq.ante, c.idx), seq.succ};
          p1.ante.push_back({F->left, act.children[0]});
          ISeq p2{without(seq.ante, c.idx), seq.succ};
          p2.ante.push_back({F->right, act.children[1]});
          return finish({std::move(p1), std::move(p2)});
        }
        case FKind::Imp: {
          n->rule = RuleId::ImpL;
          ISeq p1{seq.ante, seq.succ};
          p1.succ.push_back({F->left, act.children[0]});
          ISeq p2{seq.ante, seq.succ};
          p2.ante.push_back({F->right, act.children[1]});
          return finish({std::move(p1), std::move(p2)});
        }
        case FKind::Neg: {
          n->rule = RuleId::NegL;
          ISeq pr{seq.ante, seq.succ};
          pr.succ.push_back({F->left, act.children[0]});
          return finish({std::move(pr)});
        }
        case FKind::Iff: {
          n->rule = RuleId::IffL;
          ISeq pr{without(seq.ante, c.idx), seq.succ};
          pr.ante.push_back({unfoldIff(F), act.children[0]});
          return finish({std::move(pr)});
        }
        case FKind::Forall: {
          n->rule = RuleId::ForallL;
          std::string vn = p.qvar + "@" + act.pathId;
          n->instTerm = groundTerm(mkVar(vn));
          ISeq pr{seq.ante, seq.succ};
          pr.ante.push_back({substituteTerms(F->body, {{F->var, n->instTerm}}), c.acting});
          return finish({std::move(pr)});
        }
        case FKind::Exists: {
          n->rule = RuleId::ExistsL;
          n->eigen = eigenOf.at(item.pos);
          ISeq pr{without(seq.ante, c.idx), seq.succ};
          pr.ante.push_back(
              {substituteTerms(F->body, {{F->var, mkConst(n->eigen)}}), act.children[0]});
          return finish({std::move(pr)});
        }
        default:
          return nullptr;
      }
    }

    switch (F->kind) {
      case FKind::And: {
        n->rule = RuleId::AndR;
        ISeq p1{seq.ante, without(seq.succ, c.idx)};
        p1.succ.push_back({F->left, act.children[0]});
        ISeq p2{seq.ante, without(seq.succ, c.idx)};
        p2.succ.push_back({F->right, act.children[1]});
        return finish({std::move(p1), std::move(p2)});
      }
      case FKind::Or: {
        n->rule = RuleId::OrR;
        ISeq pr{seq.ante, without(seq.succ, c.idx)};
        pr.succ.push_back({F->left, act.children[0]});
        pr.succ.push_back({F->right, act.children[1]});
        return finish({std::move(pr)});
      }
      case FKind::Imp: {
        n->rule = RuleId::ImpR;
        ISeq pr;
        pr.ante = seq.ante;
        pr.ante.push_back({F->left, act.children[0]});
        if (mode == Mode::Classical) pr.succ = without(seq.succ, c.idx);
        pr.succ.push_back({F->right, act.children[1]});
        return finish({std::move(pr)});
      }
      case FKind::Neg: {
        n->rule = RuleId::NegR;
        ISeq pr;
        pr.ante = seq.ante;
        pr.ante.push_back({F->left, act.children[0]});
        if (mode == Mode::Classical) pr.succ = without(seq.succ, c.idx);
        return finish({std::move(pr)});
      }
      case FKind::Iff: {
        n->rule = RuleId::IffR;
        ISeq pr{seq.ante, without(seq.succ, c.idx)};
        pr.succ.push_back({unfoldIff(F), act.children[0]});
        return finish({std::move(pr)});
      }
      case FKind::Forall: {
        n->rule = RuleId::ForallR;
        n->eigen = eigenOf.at(item.pos);
        ISeq pr;
        pr.ante = seq.ante;
        if (mode == Mode::Classical) pr.succ = without(seq.succ, c.idx);
        pr.succ.push_back(
            {substituteTerms(F->body, {{F->var, mkConst(n->eigen)}}), act.children[0]});
        return finish({std::move(pr)});
      }
      case FKind::Exists: {
        n->rule = RuleId::ExistsR;
        std::string vn = p.qvar + "@" + act.pathId;
        n->instTerm = groundTerm(mkVar(vn));
        ISeq pr{seq.ante, seq.succ};
        pr.succ.push_back({substituteTerms(F->body, {{F->var, n->instTerm}}), c.acting});
        return finish({std::move(pr)});
      }
      default:
        return nullptr;
    }
  }
};

}  // namespace

TranslateResult toSequent(const FormulaPtr& f, const Certificate& c, Mode mode) {
  TranslateResult out;
  try {
    Translator t(f, c, mode);
    t.setup();
    ISeq start;
    start.succ.push_back({f, t.m.root});
    auto root = t.build(start, Translator::BranchState{});
    if (!root) {
      out.deadlock = t.deadlock.empty() ? "ordering deadlock" : t.deadlock;
      return out;
    }
    out.proof = std::make_unique<SequentProof>();
    out.proof->mode = mode;
    out.proof->digest = formulaDigest(f, mode);
    out.proof->root = std::move(root);
  } catch (const std::exception& e) {
    out.deadlock = std::string("translation error: ") + e.what();
  }
  return out;
}

// ---------------------------------------------------------------------------
// Checking

namespace {

std::vector<std::string> sortedPrints(const std::vector<TaggedFormula>& v) {
  std::vector<std::string> out;
  out.reserve(v.size());
  for (const auto& t : v) out.push_back(printFormula(t.f));
  std::sort(out.begin(), out.end());
  return out;
}

bool sameSequent(const std::vector<TaggedFormula>& a1, const std::vector<TaggedFormula>& s1,
                 const std::vector<TaggedFormula>& a2, const std::vector<TaggedFormula>& s2) {
  return sortedPrints(a1) == sortedPrints(a2) && sortedPrints(s1) == sortedPrints(s2);
}

struct ExpectedSequent {
  std::vector<TaggedFormula> ante, succ;
};

bool symbolOccursIn(const FormulaPtr& f, const std::string& name) {
  for (const auto& s : symbolsOf(f))
    if (s == name) return true;
  return false;
}

struct SeqChecker {
  Mode mode;
  SequentCheckResult res;
  int counter = 0;

  bool failNode(int id, const std::string& msg) {
    res.ok = false;
    res.nodeId = id;
    res.message = msg;
    return false;
  }

  bool check(const SequentNode& n) {
    int id = counter++;
    if (n.rule == RuleId::Axiom) {
      if (!n.premises.empty()) return failNode(id, "axiom with premises");
      for (const auto& a : n.ante) {
        if (a.f->kind != FKind::Atom) continue;
        for (const auto& s : n.succ)
          if (s.f->kind == FKind::Atom && formulaEq(a.f, s.f)) return true;
      }
      return failNode(id, "axiom without matching atom on both sides");
    }

    const std::vector<TaggedFormula>& side = n.principalRight ? n.succ : n.ante;
    if (n.principal < 0 || n.principal >= (int)side.size())
      return failNode(id, "principal index out of range");
    FormulaPtr F = side[n.principal].f;
    std::string tag = side[n.principal].pos;

    auto without = [&](const std::vector<TaggedFormula>& v, int idx) {
      std::vector<TaggedFormula> r;
      for (int i = 0; i < (int)v.size(); ++i)
        if (i != idx) r.push_back(v[i]);
      return r;
    };

    std::vector<ExpectedSequent> expect;
    bool eigenRule = false;
    switch (n.rule) {
      case RuleId::AndL: {
        if (n.principalRight || F->kind != FKind::And) return failNode(id, "and_l principal mismatch");
        ExpectedSequent e{without(n.ante, n.principal), n.succ};
        e.ante.push_back({F->left, ""});
        e.ante.push_back({F->right, ""});
        expect.push_back(std::move(e));
        break;
      }
      case RuleId::OrL: {
        if (n.principalRight || F->kind != FKind::Or) return failNode(id, "or_l principal mismatch");
        ExpectedSequent e1{without(n.ante, n.principal), n.succ};
        e1.ante.push_back({F->left, ""});
        ExpectedSequent e2{without(n.ante, n.principal), n.succ};
        e2.ante.push_back({F->right, ""});
        expect.push_back(std::move(e1));
        expect.push_back(std::move(e2));
        break;
      }
      case RuleId::ImpL: {
        if (n.principalRight || F->kind != FKind::Imp) return failNode(id, "imp_l principal mismatch");
        ExpectedSequent e1{n.ante, n.succ};
        e1.succ.push_back({F->left, ""});
        ExpectedSequent e2{n.ante, n.succ};
        e2.ante.push_back({F->right, ""});
        expect.push_back(std::move(e1));
        expect.push_back(std::move(e2));
        break;
      }
      case RuleId::NegL: {
        if (n.principalRight || F->kind != FKind::Neg) return failNode(id, "neg_l principal mismatch");
        ExpectedSequent e{n.ante, n.succ};
        e.succ.push_back({F->left, ""});
        expect.push_back(std::move(e));
        break;
      }
      case RuleId::IffL: {
        if (n.principalRight || F->kind != FKind::Iff) return failNode(id, "iff_l principal mismatch");
        ExpectedSequent e{without(n.ante, n.principal), n.succ};
        e.ante.push_back({unfoldIff(F), ""});
        expect.push_back(std::move(e));
        break;
      }
      case RuleId::ForallL: {
        if (n.principalRight || F->kind != FKind::Forall)
          return failNode(id, "forall_l principal mismatch");
        ExpectedSequent e{n.ante, n.succ};
        e.ante.push_back({substituteTerms(F->body, {{F->var, n.instTerm}}), ""});
        expect.push_back(std::move(e));
        break;
      }
      case RuleId::ExistsL: {
        if (n.principalRight || F->kind != FKind::Exists)
          return failNode(id, "exists_l principal mismatch");
        if (n.eigen.empty()) return failNode(id, "exists_l without eigenvariable");
        eigenRule = true;
        ExpectedSequent e{without(n.ante, n.principal), n.succ};
        e.ante.push_back({substituteTerms(F->body, {{F->var, mkConst(n.eigen)}}), ""});
        expect.push_back(std::move(e));
        break;
      }
      case RuleId::AndR: {
        if (!n.principalRight || F->kind != FKind::And) return failNode(id, "and_r principal mismatch");
        ExpectedSequent e1{n.ante, without(n.succ, n.principal)};
        e1.succ.push_back({F->left, ""});
        ExpectedSequent e2{n.ante, without(n.succ, n.principal)};
        e2.succ.push_back({F->right, ""});
        expect.push_back(std::move(e1));
        expect.push_back(std::move(e2));
        break;
      }
      case RuleId::OrR: {
        if (!n.principalRight || F->kind != FKind::Or) return failNode(id, "or_r principal mismatch");
        ExpectedSequent e{n.ante, without(n.succ, n.principal)};
        e.succ.push_back({F->left, ""});
        e.succ.push_back({F->right, ""});
        expect.push_back(std::move(e));
        break;
      }
      case RuleId::ImpR: {
        if (!n.principalRight || F->kind != FKind::Imp) return failNode(id, "imp_r principal mismatch");
        ExpectedSequent e;
        e.ante = n.ante;
        e.ante.push_back({F->left, ""});
        if (mode == Mode::Classical) e.succ = without(n.succ, n.principal);
        e.succ.push_back({F->right, ""});
        expect.push_back(std::move(e));
        break;
      }
      case RuleId::NegR: {
        if (!n.principalRight || F->kind != FKind::Neg) return failNode(id, "neg_r principal mismatch");
        ExpectedSequent e;
        e.ante = n.ante;
        e.ante.push_back({F->left, ""});
        if (mode == Mode::Classical) e.succ = without(n.succ, n.principal);
        expect.push_back(std::move(e));
        break;
      }
      case RuleId::IffR: {
        if (!n.principalRight || F->kind != FKind::Iff) return failNode(id, "iff_r principal mismatch");
        ExpectedSequent e{n.ante, without(n.succ, n.principal)};
        e.succ.push_back({unfoldIff(F), ""});
        expect.push_back(std::move(e));
        break;
      }
      case RuleId::ForallR: {
        if (!n.principalRight || F->kind != FKind::Forall)
          return failNode(id, "forall_r principal mismatch");
        if (n.eigen.empty()) return failNode(id, "forall_r without eigenvariable");
        eigenRule = true;
        ExpectedSequent e;
        e.ante = n.ante;
        if (mode == Mode::Classical) e.succ = without(n.succ, n.principal);
        e.succ.push_back({substituteTerms(F->body, {{F->var, mkConst(n.eigen)}}), ""});
        expect.push_back(std::move(e));
        break;
      }
      case RuleId::ExistsR: {
        if (!n.principalRight || F->kind != FKind::Exists)
          return failNode(id, "exists_r principal mismatch");
        ExpectedSequent e{n.ante, n.succ};
        e.succ.push_back({substituteTerms(F->body, {{F->var, n.instTerm}}), ""});
        expect.push_back(std::move(e));
        break;
      }
      case RuleId::Axiom:
        return failNode(id, "unreachable");
    }
    (void)tag;

    if (eigenRule) {
      for (const auto& t : n.ante)
        if (symbolOccursIn(t.f, n.eigen))
          return failNode(id, "eigenvariable " + n.eigen + " occurs in the conclusion");
      for (const auto& t : n.succ)
        if (symbolOccursIn(t.f, n.eigen))
          return failNode(id, "eigenvariable " + n.eigen + " occurs in the conclusion");
    }

    if (n.premises.size() != expect.size())
      return failNode(id, "wrong number of premises for " + std::string(ruleName(n.rule)));
    for (size_t i = 0; i < expect.size(); ++i) {
      if (!sameSequent(n.premises[i]->ante, n.premises[i]->succ, expect[i].ante, expect[i].succ))
        return failNode(id, std::string("premise does not match the ") + ruleName(n.rule) +
                                " schema");
    }
    for (const auto& pr : n.premises)
      if (!check(*pr)) return false;
    return true;
  }
};

}  // namespace

SequentCheckResult checkSequent(const SequentProof& p, Mode mode) {
  SeqChecker ck{mode, {}, 0};
  ck.res.ok = true;
  if (!p.root) {
    ck.res.ok = false;
    ck.res.message = "empty proof";
    return ck.res;
  }
  if (ck.check(*p.root)) ck.res.ok = true;
  return ck.res;
}

SequentCheckResult checkSequent(const SequentProof& p, Mode mode, const FormulaPtr& endFormula) {
  if (p.root) {
    if (!p.root->ante.empty() || p.root->succ.size() != 1 ||
        !formulaEq(p.root->succ[0].f, endFormula)) {
      SequentCheckResult r;
      r.ok = false;
      r.nodeId = 0;
      r.message = "end-sequent is not ( |- formula )";
      return r;
    }
  }
  return checkSequent(p, mode);
}

// ---------------------------------------------------------------------------
// Output

namespace {

void printNode(const SequentNode& n, int depth, std::ostringstream& os) {
  os << std::string(depth * 2, ' ');
  for (size_t i = 0; i < n.ante.size(); ++i) {
    if (i) os << ", ";
    os << printFormula(n.ante[i].f);
  }
  os << (n.ante.empty() ? "|-" : " |-");
  for (size_t i = 0; i < n.succ.size(); ++i) {
    os << (i ? ", " : " ");
    os << printFormula(n.succ[i].f);
  }
  os << "   [" << ruleName(n.rule);
  if (n.rule == RuleId::ForallL || n.rule == RuleId::ExistsR)
    os << " " << printTerm(n.instTerm);
  if (!n.eigen.empty()) os << " " << n.eigen;
  os << "]\n";
  for (const auto& pr : n.premises) printNode(*pr, depth + 1, os);
}

json nodeToJson(const SequentNode& n) {
  json j;
  j["rule"] = ruleName(n.rule);
  json ante = json::array(), succ = json::array();
  for (const auto& t : n.ante) ante.push_back(json::array({printFormula(t.f), t.pos}));
  for (const auto& t : n.succ) succ.push_back(json::array({printFormula(t.f), t.pos}));
  j["ante"] = std::move(ante);
  j["succ"] = std::move(succ);
  if (n.rule != RuleId::Axiom) {
    j["principal"] = n.principal;
    j["side"] = n.principalRight ? "succ" : "ante";
  }
  if (n.rule == RuleId::ForallL || n.rule == RuleId::ExistsR) j["term"] = printTerm(n.instTerm);
  if (!n.eigen.empty()) j["eigen"] = n.eigen;
  if (n.rule == RuleId::Axiom)
    j["connection"] = json::array({n.connection.first, n.connection.second});
  json prem = json::array();
  for (const auto& p : n.premises) prem.push_back(nodeToJson(*p));
  j["premises"] = std::move(prem);
  return j;
}

RuleId ruleFromName(const std::string& s) {
  for (int i = 0; i <= (int)RuleId::ExistsR; ++i)
    if (s == ruleName((RuleId)i)) return (RuleId)i;
  throw CertificateFormatError("unknown rule " + s);
}

Term parseTermString(const std::string& s);

std::unique_ptr<SequentNode> nodeFromJson(const json& j) {
  auto n = std::make_unique<SequentNode>();
  n->rule = ruleFromName(j.at("rule").get<std::string>());
  for (const auto& e : j.at("ante")) {
    if (!e.is_array() || e.size() != 2) throw CertificateFormatError("bad formula entry");
    n->ante.push_back({parseFofFormulaExact(e[0].get<std::string>()), e[1].get<std::string>()});
  }
  for (const auto& e : j.at("succ")) {
    if (!e.is_array() || e.size() != 2) throw CertificateFormatError("bad formula entry");
    n->succ.push_back({parseFofFormulaExact(e[0].get<std::string>()), e[1].get<std::string>()});
  }
  if (j.contains("principal")) {
    n->principal = j.at("principal").get<int>();
    n->principalRight = j.value("side", "ante") == "succ";
  }
  if (j.contains("term")) n->instTerm = parseTermString(j.at("term").get<std::string>());
  if (j.contains("eigen")) n->eigen = j.at("eigen").get<std::string>();
  if (j.contains("connection")) {
    const auto& c = j.at("connection");
    n->connection = {c[0].get<std::string>(), c[1].get<std::string>()};
  }
  for (const auto& p : j.at("premises")) n->premises.push_back(nodeFromJson(p));
  return n;
}

// Ground-term parser for the proof format (terms printed by printTerm; no
// variables occur in sequent proofs).
Term parseTermString(const std::string& s) {
  size_t i = 0;
  std::function<Term()> rec = [&]() -> Term {
    std::string name;
    while (i < s.size() && s[i] != '(' && s[i] != ')' && s[i] != ',') name += s[i++];
    if (i < s.size() && s[i] == '(') {
      ++i;
      std::vector<Term> args;
      for (;;) {
        args.push_back(rec());
        if (i < s.size() && s[i] == ',') { ++i; continue; }
        break;
      }
      if (i >= s.size() || s[i] != ')') throw CertificateFormatError("bad term " + s);
      ++i;
      return Term{name, false, std::move(args)};
    }
    bool isVar = !name.empty() && (std::isupper((unsigned char)name[0]) || name[0] == '_');
    return Term{name, isVar, {}};
  };
  Term t = rec();
  if (i != s.size()) throw CertificateFormatError("bad term " + s);
  return t;
}

}  // namespace

std::string printSequentProof(const SequentProof& p) {
  std::ostringstream os;
  if (p.root) printNode(*p.root, 0, os);
  return os.str();
}

std::string serializeSequentProof(const SequentProof& p) {
  json j;
  j["format"] = "matrixprove.sequent";
  j["version"] = 1;
  j["mode"] = modeName(p.mode);
  j["digest"] = p.digest;
  j["root"] = nodeToJson(*p.root);
  return j.dump(2) + "\n";
}

SequentProof deserializeSequentProof(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw CertificateFormatError(std::string("malformed proof: ") + e.what());
  }
  try {
    if (j.value("format", "") != "matrixprove.sequent")
      throw CertificateFormatError("not a sequent proof file");
    if (j.at("version").get<int>() != 1)
      throw CertificateFormatError("unsupported proof version");
    SequentProof p;
    std::string mode = j.at("mode").get<std::string>();
    if (mode == "intuitionistic")
      p.mode = Mode::Intuitionistic;
    else if (mode == "classical")
      p.mode = Mode::Classical;
    else
      throw CertificateFormatError("unknown mode " + mode);
    p.digest = j.at("digest").get<std::string>();
    p.root = nodeFromJson(j.at("root"));
    return p;
  } catch (const json::exception& e) {
    throw CertificateFormatError(std::string("malformed proof: ") + e.what());
  }
}

int proofSize(const SequentProof& p) {
  std::function<int(const SequentNode&)> rec = [&](const SequentNode& n) {
    int k = 1;
    for (const auto& pr : n.premises) k += rec(*pr);
    return k;
  };
  return p.root ? rec(*p.root) : 0;
}

}  // namespace matrixprove
