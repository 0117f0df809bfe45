#include "matrixprove/certificate.hpp"

#include <algorithm>
#include <functional>
#include <set>

#include <json.hpp>

namespace matrixprove {

using nlohmann::json;

const char* rejectReasonName(RejectReason r) {
  switch (r) {
    case RejectReason::None: return "none";
    case RejectReason::Malformed: return "malformed";
    case RejectReason::DigestMismatch: return "digest_mismatch";
    case RejectReason::DanglingPosition: return "dangling_position";
    case RejectReason::NonComplementary: return "non_complementary";
    case RejectReason::Circular: return "circular";
    case RejectReason::UncoveredPath: return "uncovered_path";
  }
  return "?";
}

std::string formulaDigest(const FormulaPtr& f, Mode mode) {
  std::string payload = std::string("matrixprove.v1|") + modeName(mode) + "|" + printFormula(f);
  return toHex(fnv64(payload));
}

// ---------------------------------------------------------------------------
// Assembly

Certificate makeCertificate(const Matrix& m, const TermSubst& sq, const PrefixSubst& sj,
                            const std::vector<std::pair<PosId, PosId>>& connections) {
  Certificate c;
  c.mode = m.mode;
  c.digest = formulaDigest(m.formula, m.mode);

  for (const Position& p : m.positions)
    if (p.repeatable && (int)p.children.size() > 1)
      c.multiplicity[p.pathId] = (int)p.children.size();

  std::vector<std::string> qvars;
  for (const auto& [v, t] : sq.bindings())
    if (m.varOwner.count(v)) qvars.push_back(v);
  std::sort(qvars.begin(), qvars.end());
  for (const std::string& v : qvars) c.sigmaQ[v] = sq.apply(mkVar(v));

  std::vector<CharId> jvars;
  for (const auto& [z, s] : sj.bindings())
    if (z >= 0) jvars.push_back(z);
  std::sort(jvars.begin(), jvars.end());
  for (CharId z : jvars) {
    PrefixString img = sj.resolve({z});
    std::vector<std::string> out;
    for (CharId ch : img)
      if (ch >= 0) out.push_back(m.at(m.chars[ch].emitter).pathId);  // auxiliaries ground to empty
    c.sigmaJ[m.at(m.chars[z].emitter).pathId] = std::move(out);
  }

  for (auto [a, b] : connections) {
    if (m.at(a).polarity == 0) std::swap(a, b);
    c.connections.push_back({m.at(a).pathId, m.at(b).pathId});
  }
  std::sort(c.connections.begin(), c.connections.end());
  c.connections.erase(std::unique(c.connections.begin(), c.connections.end()),
                      c.connections.end());
  return c;
}

// ---------------------------------------------------------------------------
// Checking

Matrix materializeMatrix(const FormulaPtr& f, const Certificate& c, Mode mode) {
  int maxMu = 1;
  for (const auto& [k, v] : c.multiplicity) maxMu = std::max(maxMu, v);
  Matrix m = Matrix::build(f, mode, maxMu + 1);
  std::vector<std::pair<std::string, int>> entries(c.multiplicity.begin(), c.multiplicity.end());
  std::sort(entries.begin(), entries.end(), [](const auto& a, const auto& b) {
    if (a.first.size() != b.first.size()) return a.first.size() < b.first.size();
    return a.first < b.first;
  });
  for (const auto& [pathId, mu] : entries) {
    auto it = m.byPathId.find(pathId);
    if (it == m.byPathId.end())
      throw CertificateFormatError("multiplicity entry references unknown position " + pathId);
    if (!m.at(it->second).repeatable)
      throw CertificateFormatError("multiplicity entry references non-repeatable position " + pathId);
    if (mu < 1) throw CertificateFormatError("multiplicity below 1 for " + pathId);
    while (m.multiplicityOf(it->second) < mu)
      if (!m.addInstance(it->second))
        throw CertificateFormatError("cannot materialize multiplicity for " + pathId);
  }
  return m;
}

namespace {

CheckResult reject(RejectReason r, std::string detail) {
  CheckResult res;
  res.ok = false;
  res.reason = r;
  res.detail = std::move(detail);
  return res;
}

}  // namespace

CheckResult checkCertificate(const FormulaPtr& f, const Certificate& c, Mode mode,
                             long pathBound) {
  if (c.version != 1) return reject(RejectReason::Malformed, "unsupported version");
  if (c.digest != formulaDigest(f, mode))
    return reject(RejectReason::DigestMismatch, "certificate was made for a different formula or mode");
  if (mode == Mode::Classical && !c.sigmaJ.empty())
    return reject(RejectReason::Malformed, "classical certificate carries a prefix substitution");

  Matrix m;
  try {
    m = materializeMatrix(f, c, mode);
  } catch (const CertificateFormatError& e) {
    return reject(RejectReason::DanglingPosition, e.what());
  }

  // Resolve the substitutions into id space.
  TermSubst sq;
  for (const auto& [v, t] : c.sigmaQ) {
    if (!m.varOwner.count(v))
      return reject(RejectReason::DanglingPosition, "unknown quantifier variable " + v);
    sq.set(v, t);
  }
  PrefixSubst sj;
  for (const auto& [zPath, imgPaths] : c.sigmaJ) {
    auto zIt = m.byPathId.find(zPath);
    if (zIt == m.byPathId.end())
      return reject(RejectReason::DanglingPosition, "unknown prefix variable emitter " + zPath);
    CharId z = m.at(zIt->second).emits;
    if (z < 0 || !m.chars[z].variable)
      return reject(RejectReason::DanglingPosition, zPath + " does not emit a prefix variable");
    PrefixString img;
    for (const std::string& cp : imgPaths) {
      auto cIt = m.byPathId.find(cp);
      if (cIt == m.byPathId.end())
        return reject(RejectReason::DanglingPosition, "unknown prefix character emitter " + cp);
      CharId ch = m.at(cIt->second).emits;
      if (ch < 0)
        return reject(RejectReason::DanglingPosition, cp + " does not emit a prefix character");
      img.push_back(ch);
    }
    sj.set(z, std::move(img));
  }

  // Connections: resolve endpoints, then check complementarity by applying
  // the stated substitutions and comparing.
  std::vector<std::pair<PosId, PosId>> conns;
  for (const auto& [aPath, bPath] : c.connections) {
    auto aIt = m.byPathId.find(aPath);
    auto bIt = m.byPathId.find(bPath);
    if (aIt == m.byPathId.end() || bIt == m.byPathId.end())
      return reject(RejectReason::DanglingPosition,
                    "connection references unknown position " +
                        (aIt == m.byPathId.end() ? aPath : bPath));
    const Position& a = m.at(aIt->second);
    const Position& b = m.at(bIt->second);
    auto res = reject(RejectReason::NonComplementary, "");
    res.witnessPair = {aPath, bPath};
    if (a.ptype != PType::Atom || b.ptype != PType::Atom || a.repeatable || b.repeatable) {
      res.detail = "connection endpoints must be atom instances";
      return res;
    }
    if (a.pred != b.pred) {
      res.detail = "different predicates";
      return res;
    }
    if (a.polarity == b.polarity) {
      res.detail = "equal polarity";
      return res;
    }
    if (a.args.size() != b.args.size()) {
      res.detail = "different arities";
      return res;
    }
    for (size_t i = 0; i < a.args.size(); ++i) {
      auto ta = sq.applyChecked(a.args[i]);
      auto tb = sq.applyChecked(b.args[i]);
      if (!ta || !tb) return reject(RejectReason::Circular, "cyclic term bindings");
      if (*ta != *tb) {
        res.detail = "terms differ under the term substitution: " + printTerm(*ta) + " vs " +
                     printTerm(*tb);
        return res;
      }
    }
    auto pa = sj.resolveChecked(a.prefix);
    auto pb = sj.resolveChecked(b.prefix);
    if (!pa || !pb) return reject(RejectReason::Circular, "cyclic prefix bindings");
    if (*pa != *pb) {
      res.detail = "prefixes differ under the prefix substitution: " + m.prefixToString(*pa) +
                   " vs " + m.prefixToString(*pb);
      return res;
    }
    conns.push_back({aIt->second, bIt->second});
  }

  std::string note;
  if (!checkAdmissible(sq, sj, m, &note)) return reject(RejectReason::Circular, note);

  // Spanning: walk the paths, pruning as soon as a partial path already
  // contains both endpoints of some connection.
  std::vector<PosId> uncovered;
  long explored = 0;
  bool bounded = true;
  {
    std::set<PosId> onPath;
    std::function<bool(std::vector<PosId>&)> go = [&](std::vector<PosId>& work) -> bool {
      for (auto& [a, b] : conns)
        if (onPath.count(a) && onPath.count(b)) return true;
      if (work.empty()) {
        if (++explored > pathBound) {
          bounded = false;
          return false;
        }
        uncovered.assign(onPath.begin(), onPath.end());
        return false;  // an uncovered full path
      }
      PosId u = work.back();
      work.pop_back();
      const Position& p = m.at(u);
      bool ok = true;
      if (p.ptype == PType::Atom && !p.repeatable) {
        bool added = onPath.insert(u).second;
        ok = go(work);
        if (added) onPath.erase(u);
      } else if (p.ptype == PType::Beta && !p.repeatable) {
        for (PosId ch : p.children) {
          work.push_back(ch);
          ok = go(work);
          work.pop_back();
          if (!ok) break;
        }
      } else {
        for (auto it = p.children.rbegin(); it != p.children.rend(); ++it) work.push_back(*it);
        ok = go(work);
        for (size_t i = 0; i < p.children.size(); ++i) work.pop_back();
      }
      work.push_back(u);
      return ok;
    };
    std::vector<PosId> work{m.root};
    if (!go(work)) {
      if (!bounded) return reject(RejectReason::Malformed, "path bound exceeded during spanning check");
      auto res = reject(RejectReason::UncoveredPath, "a path avoids every connection");
      for (PosId u : uncovered) res.witnessPath.push_back(m.at(u).pathId);
      return res;
    }
  }

  CheckResult res;
  res.ok = true;
  return res;
}

// ---------------------------------------------------------------------------
// Serialization

namespace {

json termToJson(const Term& t) {
  if (t.var) return json{{"var", t.name}};
  json args = json::array();
  for (const Term& a : t.args) args.push_back(termToJson(a));
  return json{{"app", t.name}, {"args", std::move(args)}};
}

Term termFromJson(const json& j) {
  if (!j.is_object()) throw CertificateFormatError("bad term encoding");
  if (j.contains("var")) return mkVar(j.at("var").get<std::string>());
  if (!j.contains("app")) throw CertificateFormatError("bad term encoding");
  std::vector<Term> args;
  for (const auto& a : j.value("args", json::array())) args.push_back(termFromJson(a));
  return Term{j.at("app").get<std::string>(), false, std::move(args)};
}

}  // namespace

std::string serializeCertificate(const Certificate& c) {
  json j;
  j["format"] = "matrixprove.certificate";
  j["version"] = c.version;
  j["mode"] = modeName(c.mode);
  j["digest"] = c.digest;
  j["multiplicity"] = c.multiplicity;
  json sq = json::object();
  for (const auto& [v, t] : c.sigmaQ) sq[v] = termToJson(t);
  j["sigma_q"] = std::move(sq);
  j["sigma_j"] = c.sigmaJ;
  json conns = json::array();
  for (const auto& [a, b] : c.connections) conns.push_back(json::array({a, b}));
  j["connections"] = std::move(conns);
  return j.dump(2) + "\n";
}

Certificate deserializeCertificate(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw CertificateFormatError(std::string("malformed certificate: ") + e.what());
  }
  try {
    if (j.value("format", "") != "matrixprove.certificate")
      throw CertificateFormatError("not a certificate file");
    Certificate c;
    c.version = j.at("version").get<int>();
    if (c.version != 1) throw CertificateFormatError("unsupported certificate version");
    std::string mode = j.at("mode").get<std::string>();
    if (mode == "intuitionistic")
      c.mode = Mode::Intuitionistic;
    else if (mode == "classical")
      c.mode = Mode::Classical;
    else
      throw CertificateFormatError("unknown mode " + mode);
    c.digest = j.at("digest").get<std::string>();
    c.multiplicity = j.value("multiplicity", std::map<std::string, int>{});
    json sq = j.value("sigma_q", json::object());
    for (const auto& [k, v] : sq.items()) c.sigmaQ[k] = termFromJson(v);
    c.sigmaJ = j.value("sigma_j", std::map<std::string, std::vector<std::string>>{});
    for (const auto& e : j.value("connections", json::array())) {
      if (!e.is_array() || e.size() != 2) throw CertificateFormatError("bad connection entry");
      c.connections.push_back({e[0].get<std::string>(), e[1].get<std::string>()});
    }
    return c;
  } catch (const json::exception& e) {
    throw CertificateFormatError(std::string("malformed certificate: ") + e.what());
  }
}

}  // namespace matrixprove
