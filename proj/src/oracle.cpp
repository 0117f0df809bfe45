#include "matrixprove/oracle.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <stdexcept>
#include <string>

namespace matrixprove {

namespace {

// Internal shape for the contraction-free calculus: atoms, bottom, and the
// three positive connectives. Negation and equivalence are translated away.
struct G {
  enum K { Atom, Bot, And, Or, Imp } k;
  std::string name;           // Atom
  std::shared_ptr<G> a, b;
  std::string key;            // structural print, memo/compare key
};
using GP = std::shared_ptr<G>;

GP gAtom(const std::string& n) {
  auto g = std::make_shared<G>();
  g->k = G::Atom;
  g->name = n;
  g->key = n;
  return g;
}
GP gBot() {
  auto g = std::make_shared<G>();
  g->k = G::Bot;
  g->key = "#f";
  return g;
}
GP gBin(G::K k, GP a, GP b) {
  auto g = std::make_shared<G>();
  g->k = k;
  g->a = std::move(a);
  g->b = std::move(b);
  const char* op = k == G::And ? "&" : k == G::Or ? "|" : ">";
  g->key = "(" + g->a->key + op + g->b->key + ")";
  return g;
}

GP translate(const FormulaPtr& f) {
  switch (f->kind) {
    case FKind::Atom:
      if (!f->args.empty()) throw std::invalid_argument("oracle: non-propositional atom");
      return gAtom(f->pred);
    case FKind::Neg:
      return gBin(G::Imp, translate(f->left), gBot());
    case FKind::And:
      return gBin(G::And, translate(f->left), translate(f->right));
    case FKind::Or:
      return gBin(G::Or, translate(f->left), translate(f->right));
    case FKind::Imp:
      return gBin(G::Imp, translate(f->left), translate(f->right));
    case FKind::Iff:
      return gBin(G::And, gBin(G::Imp, translate(f->left), translate(f->right)),
                  gBin(G::Imp, translate(f->right), translate(f->left)));
    case FKind::Forall:
    case FKind::Exists:
      throw std::invalid_argument("oracle: quantifier in propositional formula");
  }
  throw std::invalid_argument("oracle: bad formula");
}

struct G4 {
  std::map<std::string, bool> memo;

  static std::string seqKey(const std::vector<GP>& gamma, const GP& goal) {
    std::vector<std::string> ks;
    ks.reserve(gamma.size());
    for (const auto& g : gamma) ks.push_back(g->key);
    std::sort(ks.begin(), ks.end());
    ks.erase(std::unique(ks.begin(), ks.end()), ks.end());
    std::string s = goal->key + " <= ";
    for (auto& k : ks) s += k + ";";
    return s;
  }

  bool prove(std::vector<GP> gamma, GP goal) {
    // Invertible saturation first, then the choice rules.
    for (;;) {
      if (goal->k == G::Imp) {
        gamma.push_back(goal->a);
        goal = goal->b;
        continue;
      }
      if (goal->k == G::And) return prove(gamma, goal->a) && prove(std::move(gamma), goal->b);
      bool changed = false;
      for (size_t i = 0; i < gamma.size() && !changed; ++i) {
        GP g = gamma[i];
        switch (g->k) {
          case G::Bot:
            return true;
          case G::And:
            gamma.erase(gamma.begin() + i);
            gamma.push_back(g->a);
            gamma.push_back(g->b);
            changed = true;
            break;
          case G::Or: {
            gamma.erase(gamma.begin() + i);
            auto g1 = gamma, g2 = gamma;
            g1.push_back(g->a);
            g2.push_back(g->b);
            return prove(std::move(g1), goal) && prove(std::move(g2), goal);
          }
          case G::Imp: {
            GP x = g->a;
            if (x->k == G::Bot) {
              gamma.erase(gamma.begin() + i);
              changed = true;
            } else if (x->k == G::And) {
              gamma[i] = gBin(G::Imp, x->a, gBin(G::Imp, x->b, g->b));
              changed = true;
            } else if (x->k == G::Or) {
              gamma[i] = gBin(G::Imp, x->a, g->b);
              gamma.push_back(gBin(G::Imp, x->b, g->b));
              changed = true;
            } else if (x->k == G::Atom && hasAtom(gamma, x->name)) {
              gamma[i] = g->b;
              changed = true;
            }
            break;
          }
          default:
            break;
        }
      }
      if (!changed) break;
    }

    std::string key = seqKey(gamma, goal);
    auto it = memo.find(key);
    if (it != memo.end()) return it->second;
    bool r = choose(gamma, goal);
    memo[key] = r;
    return r;
  }

  bool choose(const std::vector<GP>& gamma, const GP& goal) {
    if (goal->k == G::Atom && hasAtom(gamma, goal->name)) return true;
    if (goal->k == G::Or) {
      if (prove(gamma, goal->a) || prove(gamma, goal->b)) return true;
    }
    // Nested implications on the left are the only remaining source of
    // branching.
    for (size_t i = 0; i < gamma.size(); ++i) {
      GP g = gamma[i];
      if (g->k != G::Imp || g->a->k != G::Imp) continue;
      GP c = g->a->a, d = g->a->b, b = g->b;
      std::vector<GP> g1;
      for (size_t j = 0; j < gamma.size(); ++j)
        if (j != i) g1.push_back(gamma[j]);
      g1.push_back(gBin(G::Imp, d, b));
      if (!prove(g1, g->a)) continue;
      std::vector<GP> g2;
      for (size_t j = 0; j < gamma.size(); ++j)
        if (j != i) g2.push_back(gamma[j]);
      g2.push_back(b);
      if (prove(g2, goal)) return true;
    }
    return false;
  }

  static bool hasAtom(const std::vector<GP>& gamma, const std::string& n) {
    for (const auto& g : gamma)
      if (g->k == G::Atom && g->name == n) return true;
    return false;
  }
};

void collectAtoms(const FormulaPtr& f, std::vector<std::string>& out, std::set<std::string>& seen) {
  switch (f->kind) {
    case FKind::Atom:
      if (seen.insert(f->pred).second) out.push_back(f->pred);
      break;
    case FKind::Neg:
      collectAtoms(f->left, out, seen);
      break;
    case FKind::And:
    case FKind::Or:
    case FKind::Imp:
    case FKind::Iff:
      collectAtoms(f->left, out, seen);
      collectAtoms(f->right, out, seen);
      break;
    default:
      throw std::invalid_argument("oracle: quantifier in propositional formula");
  }
}

bool evalClassical(const FormulaPtr& f, const std::map<std::string, bool>& env) {
  switch (f->kind) {
    case FKind::Atom:
      return env.at(f->pred);
    case FKind::Neg:
      return !evalClassical(f->left, env);
    case FKind::And:
      return evalClassical(f->left, env) && evalClassical(f->right, env);
    case FKind::Or:
      return evalClassical(f->left, env) || evalClassical(f->right, env);
    case FKind::Imp:
      return !evalClassical(f->left, env) || evalClassical(f->right, env);
    case FKind::Iff:
      return evalClassical(f->left, env) == evalClassical(f->right, env);
    default:
      throw std::invalid_argument("oracle: bad formula");
  }
}

// Kripke forcing over an explicit finite preorder.
bool forces(const KripkeModel& m, const std::map<std::string, int>& atomIdx,
            const FormulaPtr& f, int w) {
  switch (f->kind) {
    case FKind::Atom:
      return m.val[atomIdx.at(f->pred)][w];
    case FKind::And:
      return forces(m, atomIdx, f->left, w) && forces(m, atomIdx, f->right, w);
    case FKind::Or:
      return forces(m, atomIdx, f->left, w) || forces(m, atomIdx, f->right, w);
    case FKind::Neg:
      for (int v = 0; v < m.worlds; ++v)
        if (m.leq[w][v] && forces(m, atomIdx, f->left, v)) return false;
      return true;
    case FKind::Imp:
      for (int v = 0; v < m.worlds; ++v)
        if (m.leq[w][v] && forces(m, atomIdx, f->left, v) && !forces(m, atomIdx, f->right, v))
          return false;
      return true;
    case FKind::Iff: {
      for (int v = 0; v < m.worlds; ++v) {
        if (!m.leq[w][v]) continue;
        if (forces(m, atomIdx, f->left, v) != forces(m, atomIdx, f->right, v)) return false;
      }
      return true;
    }
    default:
      throw std::invalid_argument("oracle: bad formula");
  }
}

// All reflexive-transitive relations over n worlds.
const std::vector<std::vector<std::vector<bool>>>& preorders(int n) {
  static std::map<int, std::vector<std::vector<std::vector<bool>>>> cache;
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  std::vector<std::vector<std::vector<bool>>> out;
  int off = n * (n - 1);
  for (long bits = 0; bits < (1L << off); ++bits) {
    std::vector<std::vector<bool>> r(n, std::vector<bool>(n, false));
    int b = 0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        if (i == j) { r[i][j] = true; continue; }
        r[i][j] = (bits >> b) & 1;
        ++b;
      }
    bool trans = true;
    for (int i = 0; i < n && trans; ++i)
      for (int j = 0; j < n && trans; ++j)
        for (int k = 0; k < n; ++k)
          if (r[i][j] && r[j][k] && !r[i][k]) { trans = false; break; }
    if (trans) out.push_back(std::move(r));
  }
  return cache.emplace(n, std::move(out)).first->second;
}

}  // namespace

bool g4ipValid(const FormulaPtr& f) {
  GP g = translate(f);
  G4 engine;
  return engine.prove({}, g);
}

bool classicalValid(const FormulaPtr& f) {
  std::vector<std::string> atoms;
  std::set<std::string> seen;
  collectAtoms(f, atoms, seen);
  if (!isPropositional(f)) throw std::invalid_argument("oracle: non-propositional formula");
  if (atoms.size() > 20) throw std::invalid_argument("oracle: too many atoms for truth table");
  long n = 1L << atoms.size();
  for (long mask = 0; mask < n; ++mask) {
    std::map<std::string, bool> env;
    for (size_t i = 0; i < atoms.size(); ++i) env[atoms[i]] = (mask >> i) & 1;
    if (!evalClassical(f, env)) return false;
  }
  return true;
}

std::optional<KripkeModel> kripkeCountermodel(const FormulaPtr& f, int maxWorlds, int maxAtoms) {
  std::vector<std::string> atoms;
  std::set<std::string> seen;
  collectAtoms(f, atoms, seen);
  if ((int)atoms.size() > maxAtoms) return std::nullopt;
  std::map<std::string, int> atomIdx;
  for (size_t i = 0; i < atoms.size(); ++i) atomIdx[atoms[i]] = (int)i;

  for (int n = 1; n <= maxWorlds; ++n) {
    for (const auto& rel : preorders(n)) {
      // Upward-closed valuations per atom.
      std::vector<std::vector<bool>> upsets;
      for (int mask = 0; mask < (1 << n); ++mask) {
        std::vector<bool> v(n);
        for (int w = 0; w < n; ++w) v[w] = (mask >> w) & 1;
        bool mono = true;
        for (int w = 0; w < n && mono; ++w)
          for (int u = 0; u < n; ++u)
            if (v[w] && rel[w][u] && !v[u]) { mono = false; break; }
        if (mono) upsets.push_back(std::move(v));
      }
      KripkeModel m;
      m.worlds = n;
      m.leq = rel;
      m.atoms = atoms;
      m.val.assign(atoms.size(), std::vector<bool>(n, false));

      std::function<bool(size_t)> assign = [&](size_t i) -> bool {
        if (i == atoms.size()) {
          for (int w = 0; w < n; ++w) {
            if (!forces(m, atomIdx, f, w)) {
              m.failWorld = w;
              return true;
            }
          }
          return false;
        }
        for (const auto& u : upsets) {
          m.val[i] = u;
          if (assign(i + 1)) return true;
        }
        return false;
      };
      if (assign(0)) return m;
    }
  }
  return std::nullopt;
}

}  // namespace matrixprove
