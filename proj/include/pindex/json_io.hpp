#pragma once

// JSON interchange. Rationals are always "num/den" strings; certificate
// entries are decimal integer strings so arbitrarily large values survive.

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "pindex/congruence.hpp"
#include "pindex/errors.hpp"
#include "pindex/exterior.hpp"
#include "pindex/obstruction.hpp"
#include "pindex/rational.hpp"
#include "pindex/severi_brauer.hpp"
#include "pindex/upper_bound.hpp"

namespace pindex::json_io {

using json = nlohmann::json;

inline std::string fraction(const Rational& q) { return to_fraction_string(q); }

inline Rational rational_from(const json& j) {
  if (j.is_string()) return parse_fraction(j.get<std::string>());
  if (j.is_number_integer()) return Rational(Integer(j.dump()));
  throw InputError("expected an exact fraction string, got " + j.dump());
}

inline Integer integer_from(const json& j) {
  if (j.is_number_integer()) return Integer(j.dump());
  if (j.is_string()) {
    Rational q = parse_fraction(j.get<std::string>());
    if (q.get_den() != 1) throw InputError("expected an integer, got " + j.dump());
    return q.get_num();
  }
  throw InputError("expected an integer, got " + j.dump());
}

template <typename T>
T field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw InputError(std::string("missing field '") + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw InputError(std::string("field '") + key + "' has the wrong type");
  }
}

inline json to_json(const ProductRing& ring, const ExteriorClass& a) {
  json terms = json::array();
  for (const auto& [m, c] : a.terms()) terms.push_back({{"coeff", fraction(c)}, {"monomial", ring.names(m)}});
  return {{"g", a.g()}, {"terms", terms}};
}

inline ExteriorClass class_from_json(const ProductRing& ring, const json& j) {
  if (field<int>(j, "g") != ring.g()) throw InputError("class g does not match the ring");
  ExteriorClass out = ring.zero();
  for (const auto& t : field<json>(j, "terms")) {
    Rational c = rational_from(t.at("coeff"));
    out += ring.from_names(field<std::vector<std::string>>(t, "monomial"), c);
  }
  return out;
}

inline json locality_json(const Locality& loc) {
  if (loc.is_global()) return "global";
  return {{"ell", loc.ell()}};
}

inline Locality locality_from(const json& j) {
  if (j.is_string() && j.get<std::string>() == "global") return Locality::global();
  if (j.is_object() && j.contains("ell")) return Locality::local_at(field<std::uint64_t>(j, "ell"));
  throw InputError("locality must be \"global\" or {\"ell\": prime}");
}

/// Parses "standard(t)".
inline std::optional<int> parse_standard(const std::string& s) {
  const std::string pre = "standard(";
  if (s.rfind(pre, 0) != 0 || s.back() != ')') return std::nullopt;
  std::string inner = s.substr(pre.size(), s.size() - pre.size() - 1);
  if (inner.empty() || inner.size() > 3) throw InputError("bad B-field '" + s + "'");
  for (char ch : inner)
    if (ch < '0' || ch > '9') throw InputError("bad B-field '" + s + "'");
  return std::stoi(inner);
}

inline json to_json(const BrauerScenario& sc) {
  json b = sc.standard_t() ? json("standard(" + std::to_string(*sc.standard_t()) + ")") : to_json(sc.ring(), sc.b());
  return {{"g", sc.g()}, {"n", sc.n()}, {"locality", locality_json(sc.locality())}, {"b", b}};
}

inline BrauerScenario scenario_from_json(const json& j) {
  int g = field<int>(j, "g");
  std::int64_t n = field<std::int64_t>(j, "n");
  if (n < 1) throw InputError("n must be positive");
  Locality loc = j.contains("locality") ? locality_from(j.at("locality")) : Locality::global();
  ProductRing ring(g, loc);
  const json& b = j.contains("b") ? j.at("b") : json("standard(" + std::to_string(g - 1) + ")");
  if (b.is_string()) {
    auto t = parse_standard(b.get<std::string>());
    if (!t) throw InputError("B-field must be \"standard(t)\" or a class object");
    return BrauerScenario::standard(ring, *t, static_cast<std::uint64_t>(n));
  }
  return BrauerScenario(ring, class_from_json(ring, b), static_cast<std::uint64_t>(n));
}

inline json to_json(const ObstructionSystem& sys, const Verdict& v) {
  if (v.solvable()) {
    json w = json::array();
    const auto& wit = v.as_solvable().witness;
    for (std::size_t k = 0; k < wit.size(); ++k) {
      int j = k < sys.cols.size() ? sys.cols[k].j : 0;
      std::size_t idx = k < sys.cols.size() ? sys.cols[k].basis_index : k;
      w.push_back(json::array({j, idx, fraction(wit[k])}));
    }
    return {{"status", "solvable"}, {"witness", w}};
  }
  json cert = json::array();
  for (const auto& x : v.as_obstructed().certificate) cert.push_back(x.get_str());
  return {{"status", "obstructed"},
          {"certificate", cert},
          {"violation", fraction(v.as_obstructed().violation)},
          {"denominator", obstruction_denominator(v.as_obstructed().violation, sys.locality).get_str()}};
}

/// Reads a verdict against the system it claims to answer.
inline Verdict verdict_from_json(const ObstructionSystem& sys, const json& j) {
  std::string status = field<std::string>(j, "status");
  if (status == "solvable") {
    RatVector w(sys.num_unknowns());
    const json& arr = field<json>(j, "witness");
    if (!arr.is_array() || arr.size() != w.size()) throw InputError("witness length does not match the system");
    for (std::size_t k = 0; k < arr.size(); ++k) {
      const json& e = arr[k];
      if (!e.is_array() || e.size() != 3) throw InputError("witness entries are [j, index, value]");
      if (k < sys.cols.size() &&
          (e[0].get<int>() != sys.cols[k].j || e[1].get<std::size_t>() != sys.cols[k].basis_index))
        throw InputError("witness labels do not match the system columns");
      w[k] = rational_from(e[2]);
    }
    return Solvable{std::move(w)};
  }
  if (status == "obstructed") {
    IntVector phi;
    for (const auto& x : field<json>(j, "certificate")) phi.push_back(integer_from(x));
    return Obstructed{std::move(phi), rational_from(field<json>(j, "violation"))};
  }
  throw InputError("verdict status must be solvable or obstructed");
}

inline json to_json(const ProductRing& ring, const SBClass& D) {
  json coeffs = json::array();
  for (const auto& [j, a] : D.coeffs()) coeffs.push_back({{"h", j}, {"class", to_json(ring, a)}});
  return {{"g", D.g()}, {"r", D.r()}, {"coeffs", coeffs}};
}

inline SBClass sbclass_from_json(const ProductRing& ring, const json& j) {
  SBClass out(field<int>(j, "g"), field<std::uint64_t>(j, "r"));
  for (const auto& c : field<json>(j, "coeffs")) out.add(field<std::uint64_t>(c, "h"), class_from_json(ring, c.at("class")));
  return out;
}

// A "check" pairs a rebuildable system description with the verdict on it,
// so stored records can be re-verified offline.

inline json p_check(const BrauerScenario& sc, std::uint64_t e, const ObstructionSystem& sys, const Verdict& v) {
  return {{"family", "p"}, {"scenario", to_json(sc)}, {"e", e}, {"verdict", to_json(sys, v)}};
}

inline json q_check(const BrauerScenario& sc, std::uint64_t r, std::uint64_t e, const ObstructionSystem& sys,
                    const Verdict& v) {
  return {{"family", "q"}, {"scenario", to_json(sc)}, {"r", r}, {"e", e}, {"verdict", to_json(sys, v)}};
}

inline json named_check(const std::string& family, const BrauerScenario& sc, const ObstructionSystem& sys,
                        const Verdict& v) {
  return {{"family", family}, {"scenario", to_json(sc)}, {"verdict", to_json(sys, v)}};
}

inline ObstructionSystem rebuild_system(const json& check) {
  std::string fam = field<std::string>(check, "family");
  BrauerScenario sc = scenario_from_json(field<json>(check, "scenario"));
  if (fam == "p") return build_p_system(sc, field<std::uint64_t>(check, "e"));
  if (fam == "q") return build_q_system(sc, field<std::uint64_t>(check, "r"), field<std::uint64_t>(check, "e"));
  if (fam == "kresch") return kresch_system(sc);
  if (fam == "threefold") return threefold_system(sc);
  if (fam == "sharp-dim3") return sharp_dim3_system(sc);
  throw InputError("unknown system family '" + fam + "'");
}

/// Re-verifies one check; no solver involved.
inline bool verify_check(const json& check) {
  ObstructionSystem sys = rebuild_system(check);
  return verify_verdict(sys, verdict_from_json(sys, field<json>(check, "verdict")));
}

inline json to_json(const SharpnessReport& rep) {
  BrauerScenario sc = BrauerScenario::standard(ProductRing(rep.g, rep.locality), rep.t, rep.n);
  ObstructionSystem upper = build_p_system(sc, to_u64(rep.upper_bound));
  json out = {{"g", rep.g},
              {"t", rep.t},
              {"n", rep.n},
              {"locality", locality_json(rep.locality)},
              {"upper_bound", rep.upper_bound.get_str()},
              {"e_obstructed", rep.e_obstructed},
              {"hypothesis_n_not_dividing_factorial", rep.hypothesis},
              {"prime_power", rep.prime_power},
              {"status", rep.lower.status()},
              {"conclusion", to_string(rep.conclusion)},
              {"checks", json::array({p_check(sc, rep.e_obstructed, rep.lower_system, rep.lower),
                                      p_check(sc, to_u64(rep.upper_bound), upper, rep.upper)})}};
  out["index"] = rep.index ? json(rep.index->get_str()) : json(nullptr);
  return out;
}

inline json to_json(const CounterexampleReport& rep) {
  ProductRing ring(rep.g, rep.locality);
  BrauerScenario sc = BrauerScenario::standard(ring, rep.t, rep.n);
  ObstructionSystem p_sys = build_p_system(sc, rep.e_obstructed);
  ObstructionSystem q_sys = build_q_system(sc, rep.r, rep.e_obstructed);
  json out = {{"kind", rep.kind},
              {"g", rep.g},
              {"n", rep.n},
              {"t", rep.t},
              {"r", rep.r},
              {"dim_P", rep.dim_P},
              {"locality", locality_json(rep.locality)},
              {"delta", to_json(ring, rep.delta)},
              {"delta_integral", rep.delta_integral},
              {"fibral_degree", fraction(rep.fibral)},
              {"e_obstructed", rep.e_obstructed},
              {"index_wrt_P", rep.index_wrt_P.get_str()},
              {"status", rep.obstruction.status()},
              {"conclusion", rep.conclusion},
              {"checks", json::array({p_check(sc, rep.e_obstructed, p_sys, rep.obstruction),
                                      q_check(sc, rep.r, rep.e_obstructed, q_sys, rep.q_verdict)})}};
  if (rep.kind == "itc") {
    out["ell"] = rep.ell;
    out["p"] = rep.p;
  }
  return out;
}

inline json to_json(const CycleExponent& c) {
  return {{"m", c.m.get_str()}, {"p_max", c.p_max.get_str()}, {"d", c.d.get_str()},
          {"C", c.C.get_str()}, {"N", c.N.get_str()},         {"e", c.e.get_str()}};
}

inline UpperBoundInputs upper_bound_from_json(const json& j) {
  UpperBoundInputs in;
  in.dim = field<int>(j, "dimX");
  in.h2tors = j.contains("h2tors") ? integer_from(j.at("h2tors")) : Integer(1);
  in.h3tors = j.contains("h3tors") ? integer_from(j.at("h3tors")) : Integer(1);
  in.denom_lcm = j.contains("denomLcm") ? integer_from(j.at("denomLcm")) : Integer(1);
  for (const auto& d : field<json>(j, "degrees")) in.degrees.push_back(integer_from(d));
  in.validate();
  return in;
}

} // namespace pindex::json_io
