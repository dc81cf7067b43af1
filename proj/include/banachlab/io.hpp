#pragma once

#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "banachlab/bpb.hpp"
#include "banachlab/compactify.hpp"
#include "banachlab/errors.hpp"
#include "banachlab/modulus.hpp"
#include "banachlab/operators.hpp"
#include "banachlab/retraction.hpp"
#include "banachlab/space.hpp"

// JSON round-trips for the value types and small CSV emit helpers.
// ordered_json keeps object keys in insertion order so emitted files are
// reproducible byte for byte.

namespace banachlab {

using json = nlohmann::ordered_json;

inline json to_json(const space_spec& s) {
  switch (s.kind) {
    case space_kind::lp:
      return json{{"kind", "lp"}, {"p", s.p}, {"dim", s.dim}};
    case space_kind::sup:
      return json{{"kind", "linf"}, {"dim", s.dim}};
    case space_kind::l1_sum:
    case space_kind::c0_sum: {
      json comps = json::array();
      for (const auto& c : s.components) comps.push_back(to_json(c));
      return json{{"kind", s.kind == space_kind::l1_sum ? "l1sum" : "c0sum"}, {"components", std::move(comps)}};
    }
  }
  throw invalid_spec("to_json: unknown space kind");
}

inline space_spec space_from_json(const json& j) {
  if (!j.is_object() || !j.contains("kind")) throw config_invalid("space: expected an object with a 'kind' field");
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "lp") return space_spec::lp(j.at("p").get<double>(), j.at("dim").get<int>());
  if (kind == "linf") return space_spec::sup(j.at("dim").get<int>());
  if (kind == "l1sum" || kind == "c0sum") {
    std::vector<space_spec> comps;
    for (const auto& c : j.at("components")) comps.push_back(space_from_json(c));
    return kind == "l1sum" ? space_spec::l1_sum(std::move(comps)) : space_spec::c0_sum(std::move(comps));
  }
  throw config_invalid("space: unknown kind '" + kind + "'");
}

inline json to_json(const primal_vector& v) { return json{{"space", to_json(v.space)}, {"coords", v.coords}}; }
inline json to_json(const dual_element& f) { return json{{"space", to_json(f.space)}, {"coords", f.coords}}; }

inline primal_vector primal_from_json(const json& j) {
  return primal_vector{space_from_json(j.at("space")), j.at("coords").get<std::vector<double>>()};
}
inline dual_element dual_from_json(const json& j) {
  return dual_element{space_from_json(j.at("space")), j.at("coords").get<std::vector<double>>()};
}

inline json to_json(const modulus_curve& m) { return json{{"grid", m.grid}, {"values", m.values}}; }
inline modulus_curve curve_from_json(const json& j) {
  modulus_curve m;
  m.grid = j.at("grid").get<std::vector<double>>();
  m.values = j.at("values").get<std::vector<double>>();
  m.validate();
  return m;
}

inline json to_json(const subspace_chain& ch) {
  return json{{"component_dims", ch.component_dims}, {"sets", ch.sets}};
}

inline json to_json(const retraction_handle& h) {
  json j;
  switch (h.kind) {
    case retraction_kind::radial: j["kind"] = "radial"; break;
    case retraction_kind::truncation: j["kind"] = "truncation"; break;
    case retraction_kind::l1_sum: j["kind"] = "l1sum"; break;
    case retraction_kind::c0_chain: j["kind"] = "c0chain"; break;
    case retraction_kind::transferred: j["kind"] = "transferred"; break;
  }
  j["space"] = to_json(h.space);
  j["modulus"] = to_json(h.modulus_bound);
  j["nearest_point"] = to_json(h.nearest_point_bound);
  if (h.kind == retraction_kind::l1_sum) {
    json kids = json::array();
    for (const auto& k : h.children) kids.push_back(to_json(k));
    j["children"] = std::move(kids);
  }
  if (h.kind == retraction_kind::c0_chain) j["chain"] = to_json(h.chain);
  if (h.kind == retraction_kind::transferred) j["inner"] = to_json(*h.inner);
  return j;
}

inline retraction_handle handle_from_json(const json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  const space_spec s = space_from_json(j.at("space"));
  retraction_handle h;
  if (kind == "radial") {
    h = retraction_handle::radial(s);
  } else if (kind == "truncation") {
    h = retraction_handle::truncation(s);
  } else if (kind == "l1sum") {
    std::vector<retraction_handle> kids;
    for (const auto& k : j.at("children")) kids.push_back(handle_from_json(k));
    h = retraction_handle::l1_sum(s, std::move(kids));
  } else if (kind == "c0chain") {
    h = retraction_handle::c0_chain(s);
  } else if (kind == "transferred") {
    h = retraction_handle::transferred(handle_from_json(j.at("inner")));
  } else {
    throw config_invalid("handle: unknown kind '" + kind + "'");
  }
  // stored certificates win over the reconstructed defaults
  if (j.contains("modulus")) h.modulus_bound = curve_from_json(j.at("modulus"));
  if (j.contains("nearest_point")) h.nearest_point_bound = curve_from_json(j.at("nearest_point"));
  return h;
}

// measures serialize as plain label -> mass maps; ordered_json preserves
// the point order on both sides
inline json to_json(const finite_measure& mu) {
  json j = json::object();
  for (std::size_t i = 0; i < mu.points.size(); ++i) j[mu.points[i]] = mu.masses[i];
  return j;
}

inline finite_measure measure_from_json(const json& j) {
  finite_measure mu;
  for (auto it = j.begin(); it != j.end(); ++it) {
    mu.points.push_back(it.key());
    mu.masses.push_back(it.value().get<double>());
  }
  return mu;
}

inline json to_json(const c0_operator& T) {
  return json{{"domain", to_json(T.domain)}, {"points", T.points}, {"rows", T.rows}};
}

inline c0_operator operator_from_json(const json& j) {
  c0_operator T;
  T.domain = space_from_json(j.at("domain"));
  T.points = j.at("points").get<std::vector<std::string>>();
  T.rows = j.at("rows").get<std::vector<std::vector<double>>>();
  T.validate();
  return T;
}

inline json to_json(const perturbation_certificate& c) {
  return json{{"epsilon", c.epsilon},
              {"eta_used", c.eta_used},
              {"scale", c.scale},
              {"new_operator", to_json(c.new_operator)},
              {"x1", to_json(c.attaining_point)},
              {"x1_star", to_json(c.attaining_functional)},
              {"t0", c.witness_label},
              {"distance", c.distance},
              {"bound", c.bound},
              {"search_s", c.search_s},
              {"sign", c.sign}};
}

// fixed %.12g rendering keeps CSV output identical across runs
inline std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

inline void write_curve_csv(const modulus_curve& m, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw error("cannot open '" + path + "' for writing");
  out << "t,value\n";
  for (std::size_t i = 0; i < m.grid.size(); ++i)
    out << format_number(m.grid[i]) << ',' << format_number(m.values[i]) << '\n';
}

}  // namespace banachlab
