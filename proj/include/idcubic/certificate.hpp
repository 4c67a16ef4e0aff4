#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "idcubic/hadamard.hpp"
#include "idcubic/linalg.hpp"

namespace idc {

enum class Verdict { Proper, NonProper, Undecided };

inline std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Proper: return "Proper";
    case Verdict::NonProper: return "NonProper";
    case Verdict::Undecided: return "Undecided";
  }
  return "?";
}

inline Verdict parse_verdict(const std::string& s) {
  if (s == "Proper") return Verdict::Proper;
  if (s == "NonProper") return Verdict::NonProper;
  if (s == "Undecided") return Verdict::Undecided;
  throw InputError("unknown verdict '" + s + "'");
}

// Simple:      x(g) = g x_inf + (1/k) g^{2-k} u * x_inf^{1-k}
// CorankChain: stage j lives at scale s_j = g^{3^-j} on its block N_j
// Linear:      x(g) = g x_inf with (I+A) x_inf = 0   (power k = 1)
enum class RecipeKind { Simple, CorankChain, Linear };

inline std::string to_string(RecipeKind k) {
  switch (k) {
    case RecipeKind::Simple: return "Simple";
    case RecipeKind::CorankChain: return "CorankChain";
    case RecipeKind::Linear: return "Linear";
  }
  return "?";
}

inline RecipeKind parse_recipe_kind(const std::string& s) {
  if (s == "Simple") return RecipeKind::Simple;
  if (s == "CorankChain") return RecipeKind::CorankChain;
  if (s == "Linear") return RecipeKind::Linear;
  throw InputError("unknown recipe kind '" + s + "'");
}

// One stage of the chain: A u = -t, t supported on block.
template <class T>
struct ChainStage {
  std::vector<std::size_t> block;
  BasicVector<T> t;
  BasicVector<T> u;
};

template <class T>
struct BasicRecipe {
  RecipeKind kind = RecipeKind::Simple;
  unsigned k = 3;
  BasicVector<T> x_inf;
  BasicVector<T> u;
  std::optional<BasicVector<T>> v;
  // Representatives in V of the leading-block corrections, one per stage.
  std::optional<BasicVector<T>> u1, v1;
  std::vector<ChainStage<T>> stages;
  std::vector<BasicVector<T>> lead_reps;
};

using WitnessRecipe = BasicRecipe<Rational>;
using NumericRecipe = BasicRecipe<Real>;

inline NumericRecipe to_real(const WitnessRecipe& r) {
  NumericRecipe out;
  out.kind = r.kind;
  out.k = r.k;
  out.x_inf = to_real(r.x_inf);
  out.u = to_real(r.u);
  if (r.v) out.v = to_real(*r.v);
  if (r.u1) out.u1 = to_real(*r.u1);
  if (r.v1) out.v1 = to_real(*r.v1);
  for (const auto& s : r.stages) out.stages.push_back({s.block, to_real(s.t), to_real(s.u)});
  for (const auto& q : r.lead_reps) out.lead_reps.push_back(to_real(q));
  return out;
}

struct AuditEntry {
  std::string check;
  std::string outcome;  // "true" | "false" | "inconclusive" | "skipped" | "error"
  std::string detail;
};

struct Evidence {
  std::map<std::string, RatVector> vectors;
  std::map<std::string, std::vector<RatVector>> bases;
  std::map<std::string, std::string> values;
  std::optional<WitnessRecipe> recipe;
  std::optional<NumericRecipe> numeric_recipe;
};

struct Certificate {
  Verdict verdict = Verdict::Undecided;
  std::string reason;
  bool numeric_only = false;
  Evidence evidence;
  std::vector<AuditEntry> audit;
  std::vector<std::string> notes;

  void record(std::string check, bool outcome, std::string detail = {}) {
    audit.push_back({std::move(check), outcome ? "true" : "false", std::move(detail)});
  }
  void record(std::string check, std::string outcome, std::string detail = {}) {
    audit.push_back({std::move(check), std::move(outcome), std::move(detail)});
  }
  // a string literal would otherwise pick the bool overload
  void record(std::string check, const char* outcome, std::string detail = {}) {
    record(std::move(check), std::string(outcome), std::move(detail));
  }
  bool decisive() const { return verdict != Verdict::Undecided; }
};

inline Certificate decided(Verdict v, std::string reason) {
  Certificate c;
  c.verdict = v;
  c.reason = std::move(reason);
  return c;
}

}  // namespace idc
