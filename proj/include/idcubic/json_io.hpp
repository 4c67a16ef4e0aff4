#pragma once

// JSON forms of matrices, recipes, certificates and reports. Rationals are
// always strings ("p/q" or "p").

#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "idcubic/certificate.hpp"
#include "idcubic/keller.hpp"
#include "idcubic/probe.hpp"
#include "idcubic/witness.hpp"

namespace idc {

using Json = nlohmann::ordered_json;

// ---------------------------------------------------------------------------
// scalars and vectors

inline Json rational_json(const Rational& q) { return to_string(q); }

inline Rational rational_from_json(const Json& j, const std::string& field) {
  if (j.is_string()) {
    try {
      return parse_rational(j.get<std::string>());
    } catch (const InputError& e) {
      throw InputError(field + ": " + e.what());
    }
  }
  if (j.is_number_integer()) return Rational(j.get<std::int64_t>());
  throw InputError(field + ": expected a rational string such as \"1/2\"");
}

inline Json vector_json(const RatVector& v) {
  Json a = Json::array();
  for (const auto& x : v) a.push_back(rational_json(x));
  return a;
}

inline RatVector vector_from_json(const Json& j, const std::string& field) {
  if (!j.is_array()) throw InputError(field + ": expected an array");
  RatVector v;
  for (std::size_t i = 0; i < j.size(); ++i) v.push_back(rational_from_json(j[i], field + "[" + std::to_string(i) + "]"));
  return v;
}

inline std::string real_text(const Real& x) { return x.str(40, std::ios_base::scientific); }

inline Json vector_json(const RealVector& v) {
  Json a = Json::array();
  for (const auto& x : v) a.push_back(real_text(x));
  return a;
}

inline RealVector real_vector_from_json(const Json& j, const std::string& field) {
  if (!j.is_array()) throw InputError(field + ": expected an array");
  RealVector v;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string f = field + "[" + std::to_string(i) + "]";
    if (!j[i].is_string()) throw InputError(f + ": expected a decimal string");
    const std::string s = j[i].get<std::string>();
    if (s.find('/') != std::string::npos || s.find_first_of("eE.") == std::string::npos) {
      v.push_back(to_real(rational_from_json(j[i], f)));
      continue;
    }
    try {
      v.push_back(Real(s));
    } catch (const std::exception&) {
      throw InputError(f + ": invalid decimal '" + s + "'");
    }
  }
  return v;
}

// ---------------------------------------------------------------------------
// matrices: {"m": 3, "rows": [["1/2", "0", "-1/2"], ...]}

inline Json matrix_json(const RatMatrix& a) {
  Json rows = Json::array();
  for (std::size_t i = 0; i < a.rows(); ++i) rows.push_back(vector_json(a.row(i)));
  return Json{{"m", a.rows()}, {"rows", rows}};
}

inline RatMatrix matrix_from_json(const Json& j) {
  if (!j.is_object()) throw InputError("matrix: expected an object with fields m and rows");
  if (!j.contains("rows")) throw InputError("rows: missing");
  const Json& rows = j["rows"];
  if (!rows.is_array()) throw InputError("rows: expected an array of rows");
  std::size_t m = rows.size();
  if (j.contains("m")) {
    if (!j["m"].is_number_unsigned()) throw InputError("m: expected a non-negative integer");
    m = j["m"].get<std::size_t>();
    if (m != rows.size())
      throw DimensionError("m: declared " + std::to_string(m) + " but rows has " + std::to_string(rows.size()));
  }
  RatMatrix a(m, m);
  for (std::size_t i = 0; i < m; ++i) {
    const std::string f = "rows[" + std::to_string(i) + "]";
    const RatVector r = vector_from_json(rows[i], f);
    if (r.size() != m)
      throw DimensionError(f + ": expected " + std::to_string(m) + " entries, got " + std::to_string(r.size()));
    for (std::size_t c = 0; c < m; ++c) a(i, c) = r[c];
  }
  return a;
}

inline Json parse_json_text(const std::string& text, const std::string& source) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw InputError(source + ": malformed JSON (" + std::string(e.what()) + ")");
  }
}

inline Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("input: cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_json_text(ss.str(), path);
}

// ---------------------------------------------------------------------------
// recipes

template <class T>
Json recipe_json(const BasicRecipe<T>& r) {
  Json j{{"kind", to_string(r.kind)}, {"k", r.k}, {"x_inf", vector_json(r.x_inf)}, {"u", vector_json(r.u)}};
  if (r.v) j["v"] = vector_json(*r.v);
  if (r.u1) j["u1"] = vector_json(*r.u1);
  if (r.v1) j["v1"] = vector_json(*r.v1);
  if (!r.stages.empty()) {
    Json st = Json::array();
    for (const auto& s : r.stages) st.push_back({{"block", s.block}, {"t", vector_json(s.t)}, {"u", vector_json(s.u)}});
    j["stages"] = st;
  }
  if (!r.lead_reps.empty()) {
    Json lr = Json::array();
    for (const auto& q : r.lead_reps) lr.push_back(vector_json(q));
    j["lead_reps"] = lr;
  }
  return j;
}

namespace detail {

template <class T>
BasicVector<T> any_vector_from_json(const Json& j, const std::string& field) {
  if constexpr (std::is_same_v<T, Rational>) return vector_from_json(j, field);
  else return real_vector_from_json(j, field);
}

}  // namespace detail

template <class T>
BasicRecipe<T> recipe_from_json(const Json& j, const std::string& field = "recipe") {
  if (!j.is_object()) throw InputError(field + ": expected an object");
  BasicRecipe<T> r;
  auto need = [&](const char* key) -> const Json& {
    if (!j.contains(key)) throw InputError(field + "." + key + ": missing");
    return j[key];
  };
  auto vec = [&](const Json& x, const std::string& key) { return detail::any_vector_from_json<T>(x, field + "." + key); };
  try {
    r.kind = parse_recipe_kind(need("kind").template get<std::string>());
  } catch (const Json::exception&) {
    throw InputError(field + ".kind: expected a string");
  }
  if (j.contains("k")) {
    if (!j["k"].is_number_unsigned() || j["k"].get<unsigned>() == 0) throw InputError(field + ".k: expected a positive integer");
    r.k = j["k"].get<unsigned>();
  }
  r.x_inf = vec(need("x_inf"), "x_inf");
  r.u = vec(need("u"), "u");
  if (j.contains("v")) r.v = vec(j["v"], "v");
  if (j.contains("u1")) r.u1 = vec(j["u1"], "u1");
  if (j.contains("v1")) r.v1 = vec(j["v1"], "v1");
  if (j.contains("stages")) {
    const Json& st = j["stages"];
    if (!st.is_array()) throw InputError(field + ".stages: expected an array");
    for (std::size_t i = 0; i < st.size(); ++i) {
      const std::string f = "stages[" + std::to_string(i) + "]";
      if (!st[i].is_object() || !st[i].contains("block") || !st[i].contains("t") || !st[i].contains("u"))
        throw InputError(field + "." + f + ": expected {block, t, u}");
      ChainStage<T> s;
      try {
        s.block = st[i]["block"].get<std::vector<std::size_t>>();
      } catch (const Json::exception&) {
        throw InputError(field + "." + f + ".block: expected indices");
      }
      s.t = vec(st[i]["t"], f + ".t");
      s.u = vec(st[i]["u"], f + ".u");
      r.stages.push_back(std::move(s));
    }
  }
  if (j.contains("lead_reps")) {
    const Json& lr = j["lead_reps"];
    if (!lr.is_array()) throw InputError(field + ".lead_reps: expected an array");
    for (std::size_t i = 0; i < lr.size(); ++i) r.lead_reps.push_back(vec(lr[i], "lead_reps[" + std::to_string(i) + "]"));
  }
  return r;
}

// ---------------------------------------------------------------------------
// certificates

inline Json certificate_json(const Certificate& c) {
  Json ev = Json::object();
  Json vectors = Json::object();
  for (const auto& [k, v] : c.evidence.vectors) vectors[k] = vector_json(v);
  Json bases = Json::object();
  for (const auto& [k, b] : c.evidence.bases) {
    Json arr = Json::array();
    for (const auto& v : b) arr.push_back(vector_json(v));
    bases[k] = arr;
  }
  ev["vectors"] = vectors;
  ev["bases"] = bases;
  ev["values"] = c.evidence.values;
  if (c.evidence.recipe) ev["recipe"] = recipe_json(*c.evidence.recipe);
  if (c.evidence.numeric_recipe) ev["numeric_recipe"] = recipe_json(*c.evidence.numeric_recipe);
  Json audit = Json::array();
  for (const auto& e : c.audit) audit.push_back({{"check", e.check}, {"outcome", e.outcome}, {"detail", e.detail}});
  return Json{{"verdict", to_string(c.verdict)},
              {"reason", c.reason},
              {"numeric_only", c.numeric_only},
              {"evidence", ev},
              {"audit", audit},
              {"notes", c.notes}};
}

inline Certificate certificate_from_json(const Json& j) {
  if (!j.is_object()) throw InputError("certificate: expected an object");
  Certificate c;
  try {
    c.verdict = parse_verdict(j.at("verdict").get<std::string>());
    c.reason = j.value("reason", std::string());
    c.numeric_only = j.value("numeric_only", false);
    if (j.contains("notes")) c.notes = j["notes"].get<std::vector<std::string>>();
    if (j.contains("audit"))
      for (const auto& e : j["audit"])
        c.audit.push_back({e.at("check").get<std::string>(), e.at("outcome").get<std::string>(), e.value("detail", std::string())});
  } catch (const Json::exception& e) {
    throw InputError(std::string("certificate: ") + e.what());
  }
  if (j.contains("evidence")) {
    const Json& ev = j["evidence"];
    if (ev.contains("vectors"))
      for (const auto& [k, v] : ev["vectors"].items()) c.evidence.vectors[k] = vector_from_json(v, "evidence.vectors." + k);
    if (ev.contains("bases"))
      for (const auto& [k, b] : ev["bases"].items()) {
        std::vector<RatVector> vs;
        for (std::size_t i = 0; i < b.size(); ++i)
          vs.push_back(vector_from_json(b[i], "evidence.bases." + k + "[" + std::to_string(i) + "]"));
        c.evidence.bases[k] = std::move(vs);
      }
    if (ev.contains("values"))
      for (const auto& [k, v] : ev["values"].items()) c.evidence.values[k] = v.get<std::string>();
    if (ev.contains("recipe")) c.evidence.recipe = recipe_from_json<Rational>(ev["recipe"], "evidence.recipe");
    if (ev.contains("numeric_recipe"))
      c.evidence.numeric_recipe = recipe_from_json<Real>(ev["numeric_recipe"], "evidence.numeric_recipe");
  }
  return c;
}

// ---------------------------------------------------------------------------
// reports

inline Json witness_report_json(const WitnessValidationReport& r) {
  return Json{{"gamma_schedule", r.gamma_schedule},
              {"norms", r.norms},
              {"residuals", r.residuals},
              {"direction_errors", r.direction_errors},
              {"fa_norms", r.fa_norms},
              {"fa_residuals", r.fa_residuals},
              {"fitted_decay_exponent", r.fitted_decay_exponent},
              {"norms_increasing", r.norms_increasing},
              {"directions_converging", r.directions_converging},
              {"residuals_controlled", r.residuals_controlled},
              {"passed", r.passed},
              {"rejected", r.rejected},
              {"failure", r.failure},
              {"flags", r.flags}};
}

inline Json probe_report_json(const ProbeReport& r) {
  return Json{{"radii", r.radii},
              {"mu_estimates", r.mu_estimates},
              {"minimizers", r.minimizers},
              {"restarts", r.restarts},
              {"seed", r.seed},
              {"top_slope", r.top_slope},
              {"verdict_hint", to_string(r.verdict_hint)}};
}

inline Json druzkowski_json(const DruzkowskiEvidence& e) {
  Json j{{"druzkowski", e.druzkowski}, {"mode", e.mode}, {"summary", e.summary()}};
  if (e.det) j["det"] = e.det->to_string();
  if (e.mode == "randomized") {
    j["trials"] = e.trials;
    j["seed"] = e.seed;
    j["box"] = e.box;
  }
  if (e.failure_point) j["failure_point"] = vector_json(*e.failure_point);
  if (e.failure_value) j["failure_value"] = rational_json(*e.failure_value);
  return j;
}

inline Json sign_pattern_json(const std::optional<SignPattern>& sp) {
  if (!sp) return Json{{"found", false}};
  return Json{{"found", true}, {"delta", sp->delta}, {"global_sign", sp->global_sign}};
}

}  // namespace idc
