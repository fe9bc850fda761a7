#pragma once

// JSON renderings. Big integers are always decimal strings.

#include <string>

#include "json.hpp"
#include "nilmult/abelian.hpp"
#include "nilmult/fng.hpp"
#include "nilmult/hall.hpp"
#include "nilmult/multipliers.hpp"
#include "nilmult/oracle.hpp"

namespace nilmult {

using Json = nlohmann::ordered_json;

/// Largest invariant-factor chain written out element by element; longer
/// chains are only given run-length encoded.
inline constexpr unsigned long kCanonicalExpansionLimit = 4096;

/// Nested arrays of letter indices: [[2,1],1] for [[x2,x1],x1].
inline Json to_json(const Commutator& c) {
  if (c.is_letter()) return Json(c.letter_index());
  return Json::array({to_json(c.left()), to_json(c.right())});
}

inline Json to_json(const AbelianInvariants& g) {
  Json out;
  out["free_rank"] = to_decimal(g.free_rank());
  Json torsion = Json::array();
  for (const auto& s : g.torsion())
    torsion.push_back({{"order", to_decimal(s.order)}, {"multiplicity", to_decimal(s.multiplicity)}});
  out["torsion"] = std::move(torsion);
  BigInt count = g.torsion_count();
  if (count <= kCanonicalExpansionLimit) {
    Json chain = Json::array();
    for (const auto& r : g.canonical())
      for (unsigned long i = 0; i < r.multiplicity.get_ui(); ++i) chain.push_back(to_decimal(r.order));
    out["canonical"] = std::move(chain);
  } else {
    out["canonical"] = nullptr;
  }
  Json runs = Json::array();
  for (const auto& r : g.canonical())
    runs.push_back({{"factor", to_decimal(r.order)}, {"multiplicity", to_decimal(r.multiplicity)}});
  out["canonical_runs"] = std::move(runs);
  return out;
}

inline Json to_json(const NormalWord& w, const NilpotentContext& ctx) {
  Json out;
  out["normal_form"] = render(w, ctx);
  Json terms = Json::array();
  for (const auto& t : w.terms())
    terms.push_back({{"index", t.index},
                     {"commutator", to_json(ctx.basis()[t.index])},
                     {"exponent", to_decimal(t.exponent)}});
  out["terms"] = std::move(terms);
  return out;
}

inline Json to_json(const VerificationReport& r, bool include_timing = true) {
  Json out;
  out["formula"] = to_json(r.formula);
  out["oracle_basis"] = r.oracle_basis ? to_json(*r.oracle_basis) : Json(nullptr);
  out["oracle_collected"] = r.oracle_collected ? to_json(*r.oracle_collected) : Json(nullptr);
  out["equal"] = r.equal;
  out["ambient_rank"] = std::to_string(r.ambient_rank);
  if (r.basis_columns)
    out["relation_columns"] = std::to_string(*r.basis_columns);
  else if (r.collected_columns)
    out["relation_columns"] = std::to_string(*r.collected_columns);
  else
    out["relation_columns"] = "0";
  if (r.collected_columns) out["relation_columns_collected"] = std::to_string(*r.collected_columns);
  out["runtime_ms"] = include_timing ? r.runtime_ms : 0.0;
  return out;
}

inline Json to_json(const TwoRowAudit& a) {
  Json out;
  Json e = Json::array();
  for (const auto& v : a.e) e.push_back(to_decimal(v));
  out["e"] = std::move(e);
  Json summands = Json::array();
  for (const auto& s : a.summands)
    summands.push_back({{"label", s.label},
                        {"order", to_decimal(s.order)},
                        {"exponent", "e_" + std::to_string(s.exponent_index + 1)},
                        {"multiplicity", to_decimal(a.e[s.exponent_index])}});
  out["summands"] = std::move(summands);
  out["printed_total"] = to_decimal(a.printed_total);
  out["iterated_total"] = to_decimal(a.iterated_total);
  out["equal_orders"] = a.equal_orders;
  out["negative_exponent"] = a.negative_exponent;
  out["findings"] = a.findings;
  out["passed"] = a.passed();
  return out;
}

inline Json to_json(const TwoRowResult& r) {
  Json out;
  out["group"] = r.group ? to_json(*r.group) : Json(nullptr);
  out["audit"] = to_json(r.audit);
  return out;
}

}  // namespace nilmult
