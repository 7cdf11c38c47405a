#pragma once

// JSON encodings. Every number is an exact "p/q" string; keys keep insertion
// order so output is byte-stable.

#include <json.hpp>

#include "zstab/corpus.hpp"
#include "zstab/isolation.hpp"
#include "zstab/rootfind.hpp"
#include "zstab/uniformbounds.hpp"

namespace zstab::io {

using Json = nlohmann::ordered_json;

inline Json to_json(const Rational& r) { return to_string(r); }

inline Rational rational_from(const Json& j) {
  if (!j.is_string()) fail(Errc::parse, "expected a \"p/q\" string, got " + j.dump());
  return parse_rational(j.get<std::string>());
}

inline Json to_json(const std::vector<Rational>& v) {
  Json a = Json::array();
  for (const auto& r : v) a.push_back(to_json(r));
  return a;
}

inline std::vector<Rational> rationals_from(const Json& j) {
  if (!j.is_array()) fail(Errc::parse, "expected an array of rationals");
  std::vector<Rational> v;
  for (const auto& e : j) v.push_back(rational_from(e));
  return v;
}

inline Json to_json(const RatInterval& i) { return Json::array({to_json(i.lo()), to_json(i.hi())}); }

inline RatInterval interval_from(const Json& j) {
  if (!j.is_array() || j.size() != 2) fail(Errc::parse, "expected [lo, hi]");
  return {rational_from(j[0]), rational_from(j[1])};
}

inline Json to_json(const std::vector<RatInterval>& v) {
  Json a = Json::array();
  for (const auto& i : v) a.push_back(to_json(i));
  return a;
}

inline const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) fail(Errc::parse, std::string("missing field '") + key + "'");
  return j.at(key);
}

// ---------------------------------------------------------------------------
// Functions: {variant, domain: [lo, hi], payload}

inline Json to_json(const RealFunc& f) {
  Json j;
  Json payload;
  std::visit(
      [&](const auto& r) {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, Polynomial>) {
          j["variant"] = "polynomial";
          payload["coefficients"] = to_json(r.coeffs);
        } else if constexpr (std::is_same_v<T, PiecewiseLinear>) {
          j["variant"] = "piecewise_linear";
          payload["breakpoints"] = to_json(r.breakpoints);
          payload["values"] = to_json(r.values);
        } else if constexpr (std::is_same_v<T, SpikeSum>) {
          j["variant"] = "spike_sum";
          payload["spikes"] = Json::array();
          for (const auto& s : r.terms)
            payload["spikes"].push_back(
                {{"center", to_json(s.center)}, {"halfwidth", to_json(s.halfwidth)}, {"coefficient", to_json(s.coefficient)}});
        } else if constexpr (std::is_same_v<T, AffineJoin>) {
          j["variant"] = "affine_join";
          payload["left"] = to_json(*r.left);
          payload["right"] = to_json(*r.right);
        } else {
          j["variant"] = "step";
          payload["breakpoints"] = to_json(r.breakpoints);
          payload["values"] = to_json(r.values);
        }
      },
      f.rep());
  j["domain"] = to_json(f.domain());
  j["payload"] = std::move(payload);
  return j;
}

inline RealFunc function_from(const Json& j) {
  const std::string variant = field(j, "variant").get<std::string>();
  const RatInterval domain = interval_from(field(j, "domain"));
  const Json& p = field(j, "payload");
  RealFunc f = [&]() -> RealFunc {
    if (variant == "polynomial") return RealFunc::polynomial(Polynomial(rationals_from(field(p, "coefficients"))), domain);
    if (variant == "piecewise_linear")
      return RealFunc::piecewise_linear(rationals_from(field(p, "breakpoints")), rationals_from(field(p, "values")));
    if (variant == "step") return RealFunc::step(rationals_from(field(p, "breakpoints")), rationals_from(field(p, "values")));
    if (variant == "spike_sum") {
      std::vector<SpikeTerm> terms;
      for (const auto& s : field(p, "spikes"))
        terms.push_back({rational_from(field(s, "center")), rational_from(field(s, "halfwidth")),
                         rational_from(field(s, "coefficient"))});
      return RealFunc::spike_sum(std::move(terms), domain);
    }
    if (variant == "affine_join") return RealFunc::join(function_from(field(p, "left")), function_from(field(p, "right")));
    fail(Errc::parse, "unknown function variant '" + variant + "'");
  }();
  if (!(f.domain() == domain)) fail(Errc::parse, "declared domain does not match the payload");
  return f;
}

// ---------------------------------------------------------------------------
// Zero sets

inline Json to_json(const LocatedZeroSet& Z) {
  if (auto* fz = Z.finite_zeros())
    return {{"variant", "finite"}, {"points", to_json(fz->points)}, {"multiplicities", fz->multiplicities}};
  return {{"variant", "enumerated"}, {"name", Z.enumerated_zeros()->name}};
}

inline LocatedZeroSet zero_set_from(const Json& j) {
  const std::string variant = field(j, "variant").get<std::string>();
  if (variant == "finite") {
    std::vector<int> mult;
    if (j.contains("multiplicities")) mult = j.at("multiplicities").get<std::vector<int>>();
    return LocatedZeroSet::finite(rationals_from(field(j, "points")), std::move(mult));
  }
  if (variant == "enumerated" && field(j, "name") == "reciprocal") return reciprocal_zeros();
  fail(Errc::parse, "unknown zero set " + j.dump());
}

// ---------------------------------------------------------------------------
// Moduli: {kind, representation, entries|formula}

inline Json to_json(const Modulus& M) {
  Json j;
  j["kind"] = M.is_uniform() ? "uniform" : "pointwise";
  if (M.at()) j["at"] = to_json(*M.at());
  std::visit(
      [&](const auto& r) {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, FormulaModulus>) {
          j["representation"] = "formula";
          j["formula"] = {{"rule", "gamma*(eps/2)^m"}, {"gamma", to_json(r.gamma)}, {"m", r.m}};
        } else if constexpr (std::is_same_v<T, TableModulus>) {
          j["representation"] = "table";
          j["entries"] = Json::array();
          for (const auto& e : r.entries) j["entries"].push_back({{"eps", to_json(e.eps)}, {"delta", to_json(e.delta)}});
        } else {
          j["representation"] = "certified";
          j["entries"] = Json::array();
          for (const auto& e : r.entries)
            j["entries"].push_back({{"eps", to_json(e.eps)}, {"delta", to_json(e.delta)}, {"certificate", e.certificate}});
        }
      },
      M.rep());
  return j;
}

inline Modulus modulus_from(const Json& j) {
  const std::string rep = field(j, "representation").get<std::string>();
  Modulus::Rep r = [&]() -> Modulus::Rep {
    if (rep == "formula") {
      const Json& f = field(j, "formula");
      return FormulaModulus{rational_from(field(f, "gamma")), field(f, "m").get<unsigned>()};
    }
    if (rep == "table") {
      TableModulus t;
      for (const auto& e : field(j, "entries")) t.entries.push_back({rational_from(field(e, "eps")), rational_from(field(e, "delta"))});
      return t;
    }
    if (rep == "certified") {
      CertifiedModulus c;
      for (const auto& e : field(j, "entries"))
        c.entries.push_back({rational_from(field(e, "eps")), rational_from(field(e, "delta")),
                             field(e, "certificate").get<std::string>()});
      return c;
    }
    fail(Errc::parse, "unknown modulus representation '" + rep + "'");
  }();
  const std::string kind = field(j, "kind").get<std::string>();
  if (kind == "uniform") return Modulus::uniform(std::move(r));
  if (kind == "pointwise") return Modulus::pointwise(std::move(r), rational_from(field(j, "at")));
  fail(Errc::parse, "unknown modulus kind '" + kind + "'");
}

// ---------------------------------------------------------------------------
// Witnesses and certificates

inline Json to_json(const FalsificationWitness& w) {
  return {{"x", to_json(w.x)},
          {"fx_abs", to_json(w.fx_abs)},
          {"dist_lower", to_json(w.dist_lower)},
          {"delta", to_json(w.delta)},
          {"eps", to_json(w.eps)}};
}

inline FalsificationWitness witness_from(const Json& j) {
  return {rational_from(field(j, "x")), rational_from(field(j, "fx_abs")), rational_from(field(j, "dist_lower")),
          rational_from(field(j, "delta")), rational_from(field(j, "eps"))};
}

inline Json to_json(const InfBracket& b) {
  return {{"status", std::string(to_string(b.status))},
          {"lower", to_json(b.lower)},
          {"upper", to_json(b.upper)},
          {"argmin", to_json(b.argmin)}};
}

inline InfBracket inf_bracket_from(const Json& j) {
  InfBracket b;
  const std::string s = field(j, "status").get<std::string>();
  if (s == "resolved") b.status = InfStatus::resolved;
  else if (s == "empty_region") b.status = InfStatus::empty_region;
  else if (s == "unresolved") b.status = InfStatus::unresolved;
  else fail(Errc::parse, "unknown inf status '" + s + "'");
  b.lower = rational_from(field(j, "lower"));
  b.upper = rational_from(field(j, "upper"));
  b.argmin = rational_from(field(j, "argmin"));
  return b;
}

inline Json to_json(const UniformCertificate& c) {
  Json j;
  j["kind"] = "uniform";
  j["method"] = std::string(to_string(c.method));
  j["eps"] = to_json(c.eps);
  j["delta"] = c.vacuous ? Json("inf") : to_json(c.delta);
  j["vacuous"] = c.vacuous;
  j["tau"] = to_json(c.tau);
  j["K"] = to_json(c.K);
  j["inf_bracket"] = to_json(c.inf_bracket);
  return j;
}

inline UniformCertificate certificate_from(const Json& j) {
  UniformCertificate c;
  const std::string method = field(j, "method").get<std::string>();
  if (method == "inf_over_k") c.method = CertificateMethod::inf_over_k;
  else if (method == "polynomial_formula") c.method = CertificateMethod::polynomial_formula;
  else fail(Errc::parse, "unknown certificate method '" + method + "'");
  c.eps = rational_from(field(j, "eps"));
  c.vacuous = field(j, "vacuous").get<bool>();
  c.delta = c.vacuous ? Rational(0) : rational_from(field(j, "delta"));
  c.tau = rational_from(field(j, "tau"));
  for (const auto& i : field(j, "K")) c.K.push_back(interval_from(i));
  c.inf_bracket = inf_bracket_from(field(j, "inf_bracket"));
  return c;
}

inline bool operator==(const InfBracket& a, const InfBracket& b) {
  return a.status == b.status && a.lower == b.lower && a.upper == b.upper && a.argmin == b.argmin;
}

inline bool same_certificate(const UniformCertificate& a, const UniformCertificate& b) {
  return a.eps == b.eps && a.vacuous == b.vacuous && (a.vacuous || a.delta == b.delta) && a.tau == b.tau &&
         a.K == b.K && a.inf_bracket == b.inf_bracket && a.method == b.method;
}

inline Json to_json(const CoverageResult& r) {
  Json j;
  j["verdict"] = std::string(to_string(r.verdict));
  j["sup_lo"] = to_json(r.sup.lo());
  j["sup_hi"] = to_json(r.sup.hi());
  j["empty_sublevel"] = r.empty_sublevel;
  j["budget_exhausted"] = r.budget_exhausted;
  if (r.witness) j["witness"] = to_json(*r.witness);
  return j;
}

inline Json to_json(const RootResult& r) {
  Json j;
  std::visit(
      [&](const auto& k) {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, ExactZero>) {
          j["kind"] = "exact_zero";
          j["point"] = to_json(k.x);
        } else if constexpr (std::is_same_v<T, Localized>) {
          j["kind"] = "localized";
          j["point"] = to_json(k.center);
          j["radius"] = to_json(k.radius);
          Json c{{"source", k.certificate.source},
                 {"delta", k.certificate.vacuous ? Json("inf") : to_json(k.certificate.delta)},
                 {"fx_abs", to_json(k.certificate.fx_abs)}};
          if (k.certificate.distance) c["distance"] = to_json(*k.certificate.distance);
          j["certificate"] = std::move(c);
        } else {
          j["kind"] = "bracket";
          j["bracket"] = Json::array({to_json(k.lo), to_json(k.hi)});
        }
      },
      r.kind);
  j["epsilon"] = to_json(r.eps);
  j["trace_length"] = r.trace.size();
  return j;
}

inline Json to_json(const IsolationCertificate& c) {
  return {{"N", c.N}, {"X", to_json(c.X)}, {"sep", to_json(c.sep)}, {"evidence", {{"tail_sep", to_json(c.evidence)}}}};
}

inline Json to_json(const IsolatedRoot& r) {
  if (r.exact()) return {{"kind", "exact_zero"}, {"point", to_json(r.lo)}, {"multiplicity", r.multiplicity}};
  return {{"kind", "bracket"}, {"bracket", Json::array({to_json(r.lo), to_json(r.hi)})}, {"multiplicity", r.multiplicity}};
}

inline Json to_json(const CorpusMember& m) {
  Json meta;
  meta["family"] = m.family;
  meta["params"] = Json::object();
  for (const auto& [k, v] : m.params) meta["params"][k] = v;
  if (m.known_zeros) meta["known_zeros"] = to_json(LocatedZeroSet::finite(m.known_zeros->points, m.known_zeros->multiplicities));
  else meta["known_zeros"] = nullptr;
  meta["known_inf"] = m.known_inf ? to_json(*m.known_inf) : Json(nullptr);
  meta["role"] = m.role;
  return {{"function", to_json(m.function)}, {"metadata", std::move(meta)}};
}

}  // namespace zstab::io
