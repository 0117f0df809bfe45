#include "matrixprove/matrix.hpp"

#include <algorithm>
#include <cassert>
#include <sstream>

namespace matrixprove {

const char* ptypeName(PType t) {
  switch (t) {
    case PType::Alpha: return "alpha";
    case PType::Beta: return "beta";
    case PType::Gamma: return "gamma";
    case PType::Delta: return "delta";
    case PType::Atom: return "atom";
  }
  return "?";
}

namespace {

PType ptypeOf(FKind k, int pol) {
  switch (k) {
    case FKind::Atom: return PType::Atom;
    case FKind::Neg: return PType::Alpha;
    case FKind::And: return pol == 0 ? PType::Beta : PType::Alpha;
    case FKind::Or: return pol == 0 ? PType::Alpha : PType::Beta;
    case FKind::Imp: return pol == 0 ? PType::Alpha : PType::Beta;
    case FKind::Iff: return PType::Alpha;  // expands to the two implications
    case FKind::Forall: return pol == 0 ? PType::Delta : PType::Gamma;
    case FKind::Exists: return pol == 0 ? PType::Gamma : PType::Delta;
  }
  return PType::Atom;
}

bool emitsPrefix(FKind k, int pol, Mode mode) {
  if (mode == Mode::Classical) return false;
  switch (k) {
    case FKind::Atom:
    case FKind::Imp:
    case FKind::Neg:
      return true;
    case FKind::Forall:
      return pol == 0;  // eigenvariable occurrence
    case FKind::Exists:
      return pol == 1;  // eigenvariable occurrence
    default:
      return false;
  }
}

bool isRepeatable(FKind k, int pol, Mode mode) {
  if (k == FKind::Forall && pol == 1) return true;
  if (k == FKind::Exists && pol == 0) return true;
  if (mode != Mode::Intuitionistic || pol != 1) return false;
  return k == FKind::Atom || k == FKind::Imp || k == FKind::Neg;
}

}  // namespace

struct MatrixBuilder {
  Matrix& m;

  explicit MatrixBuilder(Matrix& m) : m(m) {}

  PosId newNode(PosId parent, const std::string& pathId, FKind kind, int pol,
                const FormulaPtr& label, const std::vector<int>& instance) {
    Position p;
    p.id = (PosId)m.positions.size();
    p.parent = parent;
    p.depth = parent < 0 ? 0 : m.positions[parent].depth + 1;
    p.kind = kind;
    p.ptype = ptypeOf(kind, pol);
    p.polarity = pol;
    p.label = label;
    p.pathId = pathId;
    p.instance = instance;
    if (parent >= 0) p.prefix = m.positions[parent].prefix;
    m.positions.push_back(std::move(p));
    m.byPathId[pathId] = m.positions.back().id;
    if (undo) undo->newPathIds.push_back(pathId);
    return m.positions.back().id;
  }

  void emitChar(PosId id) {
    Position& p = m.at(id);
    bool variable = p.polarity == 1;
    std::string name = variable ? "z" + std::to_string(++m.varCount_)
                                : "a" + std::to_string(++m.constCount_);
    CharId c = (CharId)m.chars.size();
    m.chars.push_back(PrefixChar{variable, id, name});
    p.emits = c;
    p.prefix.push_back(c);
  }

  // Builds the structural node for formula f at polarity pol. A repeatable
  // occurrence gets a group node here; copies are built by addCopy.
  PosId build(const FormulaPtr& f, int pol, PosId parent, const std::string& pathId,
              const std::map<std::string, Term>& env, const std::vector<Term>& gammaVars,
              const std::vector<int>& instance) {
    if (isRepeatable(f->kind, pol, m.mode)) {
      PosId g = newNode(parent, pathId, f->kind, pol, f, instance);
      m.at(g).repeatable = true;
      if (f->kind == FKind::Forall || f->kind == FKind::Exists) m.at(g).qvar = f->var;
      m.groupEnv_[g] = {env, gammaVars};
      addCopy(g);
      return g;
    }
    return buildStructural(f, pol, parent, pathId, env, gammaVars, instance);
  }

  PosId buildStructural(const FormulaPtr& f, int pol, PosId parent, const std::string& pathId,
                        const std::map<std::string, Term>& env, const std::vector<Term>& gammaVars,
                        const std::vector<int>& instance) {
    PosId id = newNode(parent, pathId, f->kind, pol, f, instance);
    if (emitsPrefix(f->kind, pol, m.mode)) emitChar(id);
    Position& p = m.at(id);

    switch (f->kind) {
      case FKind::Atom: {
        p.pred = f->pred;
        std::vector<Term> args;
        args.reserve(f->args.size());
        for (const Term& a : f->args) args.push_back(substituteTerm(a, env));
        m.at(id).args = std::move(args);
        auto key = std::make_pair(f->pred, pol);
        if (undo) {
          bool seen = false;
          for (auto& e : undo->indexSizes)
            if (e.first == key) { seen = true; break; }
          if (!seen) undo->indexSizes.push_back({key, m.atomIndex[key].size()});
        }
        m.atomIndex[key].push_back(id);
        break;
      }
      case FKind::Neg: {
        PosId c = build(f->left, 1 - pol, id, pathId + ".0", env, gammaVars, instance);
        m.at(id).children.push_back(c);
        break;
      }
      case FKind::And:
      case FKind::Or: {
        PosId c0 = build(f->left, pol, id, pathId + ".0", env, gammaVars, instance);
        m.at(id).children.push_back(c0);
        PosId c1 = build(f->right, pol, id, pathId + ".1", env, gammaVars, instance);
        m.at(id).children.push_back(c1);
        break;
      }
      case FKind::Imp: {
        PosId c0 = build(f->left, 1 - pol, id, pathId + ".0", env, gammaVars, instance);
        m.at(id).children.push_back(c0);
        PosId c1 = build(f->right, pol, id, pathId + ".1", env, gammaVars, instance);
        m.at(id).children.push_back(c1);
        break;
      }
      case FKind::Iff: {
        FormulaPtr expanded = fAnd(fImp(f->left, f->right), fImp(f->right, f->left));
        PosId c = build(expanded, pol, id, pathId + ".0", env, gammaVars, instance);
        m.at(id).children.push_back(c);
        break;
      }
      case FKind::Forall:
      case FKind::Exists: {
        bool delta = (f->kind == FKind::Forall) == (pol == 0);
        assert(delta);
        (void)delta;
        p.qvar = f->var;
        // Eigenvariable condition encoded by a rigid functor applied to the
        // quantifier variables this position depends on.
        std::string rigid = "sk@" + pathId;
        Term rt{rigid, false, gammaVars};
        m.rigidOwner[rigid] = id;
        if (undo) undo->newRigids.push_back(rigid);
        std::map<std::string, Term> env2(env);
        env2[f->var] = rt;
        PosId c = build(f->body, pol, id, pathId + ".0", env2, gammaVars, instance);
        m.at(id).children.push_back(c);
        break;
      }
    }
    return id;
  }

  // Appends the next copy to a repeatable group. For quantifier groups the
  // copy root is the instantiated body; for the other repeatable kinds it is
  // a fresh structural replica.
  PosId addCopy(PosId g) {
    const auto ge = m.groupEnv_.at(g);
    Position& gp = m.at(g);
    int k = (int)gp.children.size() + 1;
    std::string copyId = gp.pathId + "#" + std::to_string(k);
    std::vector<int> inst = gp.instance;
    inst.push_back(k);
    FormulaPtr f = gp.label;
    int pol = gp.polarity;
    PosId copyRootId;
    if (f->kind == FKind::Forall || f->kind == FKind::Exists) {
      std::string vn = f->var + "@" + copyId;
      std::map<std::string, Term> env2(ge.env);
      env2[f->var] = mkVar(vn);
      std::vector<Term> gv = ge.gammaVars;
      gv.push_back(mkVar(vn));
      m.varOwner[vn] = -1;  // patched below once the root exists
      copyRootId = build(f->body, pol, g, copyId, env2, gv, inst);
      m.varOwner[vn] = copyRootId;
      if (undo) undo->newVars.push_back(vn);
    } else {
      copyRootId = buildStructural(f, pol, g, copyId, ge.env, ge.gammaVars, inst);
    }
    m.at(copyRootId).copyRoot = true;
    m.at(g).children.push_back(copyRootId);
    return copyRootId;
  }

  MatrixUndo* undo = nullptr;
};

Matrix Matrix::build(const FormulaPtr& f, Mode mode, int copyCap) {
  Matrix m;
  m.mode = mode;
  m.copyCap = copyCap;
  m.formula = f;
  MatrixBuilder b(m);
  m.root = b.build(f, 0, -1, "0", {}, {}, {});
  return m;
}

bool Matrix::addInstance(PosId group, MatrixUndo* undo) {
  Position& g = at(group);
  if (!g.repeatable) return false;
  if ((int)g.children.size() >= copyCap) return false;
  MatrixBuilder b(*this);
  MatrixUndo local;
  b.undo = undo ? undo : &local;
  b.undo->posSize = positions.size();
  b.undo->charSize = chars.size();
  b.undo->group = group;
  b.addCopy(group);
  return true;
}

void Matrix::undoInstance(const MatrixUndo& u) {
  for (const auto& e : u.indexSizes) atomIndex[e.first].resize(e.second);
  for (const auto& id : u.newPathIds) byPathId.erase(id);
  for (const auto& v : u.newVars) varOwner.erase(v);
  for (const auto& r : u.newRigids) rigidOwner.erase(r);
  positions.resize(u.posSize);
  chars.resize(u.charSize);
  at(u.group).children.pop_back();
}

PosId Matrix::lca(PosId a, PosId b) const {
  while (a != b) {
    if (positions[a].depth >= positions[b].depth)
      a = positions[a].parent;
    else
      b = positions[b].parent;
    if (a < 0 || b < 0) return root;
  }
  return a;
}

bool Matrix::betaSeparated(PosId a, PosId b) const {
  if (a == b) return false;
  PosId l = lca(a, b);
  const Position& lp = positions[l];
  if (lp.ptype != PType::Beta || lp.repeatable) return false;
  return l != a && l != b;
}

bool Matrix::forEachPath(const std::function<bool(const std::vector<PosId>&)>& cb,
                         long bound) const {
  long emitted = 0;
  std::vector<PosId> atoms;
  bool stop = false;

  // Worklist recursion: alpha-like nodes extend the current path, beta nodes
  // branch.
  std::function<bool(std::vector<PosId>&)> go = [&](std::vector<PosId>& work) -> bool {
    if (stop) return true;
    if (work.empty()) {
      if (++emitted > bound) return false;
      if (!cb(atoms)) stop = true;
      return true;
    }
    PosId u = work.back();
    work.pop_back();
    const Position& p = positions[u];
    bool ok = true;
    if (p.ptype == PType::Atom && !p.repeatable) {
      atoms.push_back(u);
      ok = go(work);
      atoms.pop_back();
    } else if (p.ptype == PType::Beta && !p.repeatable) {
      for (PosId c : p.children) {
        work.push_back(c);
        ok = go(work);
        work.pop_back();
        if (!ok || stop) break;
      }
    } else {
      // alpha, delta, gamma, iff, and repeatable groups: all children on the
      // same path
      for (auto it = p.children.rbegin(); it != p.children.rend(); ++it) work.push_back(*it);
      ok = go(work);
      for (size_t i = 0; i < p.children.size(); ++i) work.pop_back();
    }
    work.push_back(u);
    return ok;
  };

  std::vector<PosId> work{root};
  bool ok = go(work);
  return ok;
}

std::optional<std::vector<std::vector<PosId>>> Matrix::collectPaths(long bound) const {
  std::vector<std::vector<PosId>> out;
  bool ok = forEachPath(
      [&](const std::vector<PosId>& p) {
        out.push_back(p);
        return true;
      },
      bound);
  if (!ok) return std::nullopt;
  return out;
}

std::string Matrix::charName(CharId c) const {
  if (c < 0) return "w" + std::to_string(-c);
  return chars[c].name;
}

std::string Matrix::prefixToString(const PrefixString& s) const {
  std::string out;
  for (size_t i = 0; i < s.size(); ++i) {
    if (i) out += ".";
    out += charName(s[i]);
  }
  return out.empty() ? "<empty>" : out;
}

std::string Matrix::dump() const {
  std::ostringstream os;
  std::function<void(PosId)> rec = [&](PosId id) {
    const Position& p = positions[id];
    os << std::string(p.depth * 2, ' ') << p.pathId << " pol=" << p.polarity
       << " type=" << ptypeName(p.ptype);
    if (p.repeatable) os << " rep";
    if (p.copyRoot) os << " copy";
    os << " prefix=" << prefixToString(p.prefix);
    if (p.ptype == PType::Atom && !p.repeatable)
      os << " " << printTerm(Term{p.pred, false, p.args});
    else
      os << " " << printFormula(p.label);
    os << "\n";
    for (PosId c : p.children) rec(c);
  };
  rec(root);
  return os.str();
}

}  // namespace matrixprove
