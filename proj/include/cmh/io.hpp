#pragma once

// JSON specs for measures, maps and sequences, and a writer that prints
// every number with 17 significant digits.

#include <cmath>
#include <complex>
#include <cstdio>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "cmh/error.hpp"
#include "cmh/gen_func.hpp"
#include "cmh/harmonic_map.hpp"
#include "cmh/measure.hpp"
#include "cmh/moment_seq.hpp"
#include "cmh/special_maps.hpp"

namespace cmh {

using Json = nlohmann::ordered_json;

/// Malformed input (syntax, missing keys, wrong types).
class SpecError : public Error {
public:
  explicit SpecError(const std::string &what) : Error(what) {}
};

namespace detail {

inline const Json &require_key(const Json &j, const char *key, const std::string &where) {
  if (!j.is_object() || !j.contains(key)) throw SpecError(where + ": missing key \"" + key + "\"");
  return j.at(key);
}

inline double require_number(const Json &j, const char *key, const std::string &where) {
  const Json &v = require_key(j, key, where);
  if (!v.is_number()) throw SpecError(where + ": \"" + key + "\" must be a number");
  return v.get<double>();
}

inline double number_or(const Json &j, const char *key, double fallback, const std::string &where) {
  if (!j.contains(key)) return fallback;
  return require_number(j, key, where);
}

inline std::vector<double> number_array(const Json &v, const std::string &where) {
  if (!v.is_array()) throw SpecError(where + " must be an array of numbers");
  std::vector<double> out;
  out.reserve(v.size());
  for (const Json &e : v) {
    if (!e.is_number()) throw SpecError(where + " must contain only numbers");
    out.push_back(e.get<double>());
  }
  return out;
}

inline Density parse_density(const Json &d, const std::string &where) {
  const Json &fam = require_key(d, "family", where);
  if (!fam.is_string()) throw SpecError(where + ": \"family\" must be a string");
  const std::string f = fam.get<std::string>();
  if (f == "lebesgue") return Density::lebesgue();
  if (f == "beta") return Density::beta(require_number(d, "a", where), require_number(d, "c", where));
  if (f == "loggamma") return Density::loggamma(require_number(d, "alpha", where));
  if (f == "table" || f == "sampled")
    return Density::sampled(number_array(require_key(d, "grid", where), where + ".grid"),
                            number_array(require_key(d, "values", where), where + ".values"));
  throw SpecError(where + ": unknown density family \"" + f + "\"");
}

} // namespace detail

inline Json parse_json_text(const std::string &text) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error &e) {
    throw SpecError(std::string("invalid JSON: ") + e.what());
  }
}

/// {"atoms":[{"t":..,"w":..}], "densities":[{"family":"beta","a":..,"c":..,"w":..}, ...]}
inline Measure parse_measure(const Json &j) {
  if (!j.is_object()) throw SpecError("measure spec must be an object");
  std::vector<Atom> atoms;
  std::vector<WeightedDensity> densities;
  if (j.contains("atoms")) {
    const Json &arr = j.at("atoms");
    if (!arr.is_array()) throw SpecError("measure.atoms must be an array");
    for (std::size_t i = 0; i < arr.size(); ++i) {
      const std::string where = "measure.atoms[" + std::to_string(i) + "]";
      atoms.push_back({detail::require_number(arr[i], "t", where), detail::require_number(arr[i], "w", where)});
    }
  }
  if (j.contains("densities")) {
    const Json &arr = j.at("densities");
    if (!arr.is_array()) throw SpecError("measure.densities must be an array");
    for (std::size_t i = 0; i < arr.size(); ++i) {
      const std::string where = "measure.densities[" + std::to_string(i) + "]";
      densities.push_back({detail::parse_density(arr[i], where), detail::number_or(arr[i], "w", 1.0, where)});
    }
  }
  if (atoms.empty() && densities.empty()) throw SpecError("measure spec has neither atoms nor densities");
  return Measure(std::move(atoms), std::move(densities));
}

/// Map specs share the harmonic coefficient "c" and take one of three shapes:
///   {"h": <measure>, "g": <measure>, "c": 0.2}
///   {"polylog": {"alpha": 4, "beta": 3}, "c": 0.5}
///   {"hypergeom": {"a": 1, "c": 6, "a2": 2, "c2": 6}, "c": 0.3}
struct MapSpec {
  enum class Kind { measures, polylog, hypergeom } kind = Kind::measures;
  std::optional<Measure> mu;
  std::optional<Measure> nu;
  double c = 0.0;
  double alpha = 0.0, beta = 0.0;         // polylog orders
  double a = 0.0, cc = 0.0, a2 = 0.0, c2 = 0.0; // hypergeometric parameters

  HarmonicMap to_map() const {
    switch (kind) {
    case Kind::polylog: return polylog_map(alpha, beta, c);
    case Kind::hypergeom: return hypergeom_map(a, cc, a2, c2, c);
    default: return HarmonicMap::from_measures(*mu, *nu, c);
    }
  }

  Measure h_measure() const {
    switch (kind) {
    case Kind::polylog: return polylog_measure(alpha);
    case Kind::hypergeom: return Measure::beta(a, cc);
    default: return *mu;
    }
  }

  Measure g_measure() const {
    switch (kind) {
    case Kind::polylog: return polylog_measure(beta);
    case Kind::hypergeom: return Measure::beta(a2, c2);
    default: return *nu;
    }
  }
};

inline MapSpec parse_map_spec(const Json &j) {
  if (!j.is_object()) throw SpecError("map spec must be an object");
  MapSpec s;
  s.c = detail::require_number(j, "c", "map");
  if (j.contains("polylog")) {
    const Json &p = j.at("polylog");
    s.kind = MapSpec::Kind::polylog;
    s.alpha = detail::require_number(p, "alpha", "map.polylog");
    s.beta = detail::require_number(p, "beta", "map.polylog");
  } else if (j.contains("hypergeom")) {
    const Json &p = j.at("hypergeom");
    s.kind = MapSpec::Kind::hypergeom;
    s.a = detail::require_number(p, "a", "map.hypergeom");
    s.cc = detail::require_number(p, "c", "map.hypergeom");
    s.a2 = detail::require_number(p, "a2", "map.hypergeom");
    s.c2 = detail::require_number(p, "c2", "map.hypergeom");
  } else {
    s.mu = parse_measure(detail::require_key(j, "h", "map"));
    s.nu = parse_measure(detail::require_key(j, "g", "map"));
  }
  return s;
}

inline MomentSequence parse_sequence(const Json &j) {
  const std::vector<double> v = detail::number_array(j, "sequence");
  if (v.empty()) throw SpecError("sequence must have at least one term");
  return MomentSequence(v);
}

// ---------------------------------------------------------------------------
// Output

inline std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  if (x == 0.0) return "0"; // folds -0 for stable output
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

/// Non-finite numbers become the strings "inf", "-inf" or "nan".
inline void write_json(std::ostream &os, const Json &j, int indent = 2, int depth = 0) {
  const std::string pad(static_cast<std::size_t>(indent * (depth + 1)), ' ');
  const std::string close_pad(static_cast<std::size_t>(indent * depth), ' ');
  switch (j.type()) {
  case Json::value_t::object: {
    if (j.empty()) {
      os << "{}";
      return;
    }
    os << "{\n";
    bool first = true;
    for (auto it = j.begin(); it != j.end(); ++it) {
      if (!first) os << ",\n";
      first = false;
      os << pad << Json(it.key()).dump() << ": ";
      write_json(os, it.value(), indent, depth + 1);
    }
    os << "\n" << close_pad << "}";
    return;
  }
  case Json::value_t::array: {
    if (j.empty()) {
      os << "[]";
      return;
    }
    os << "[\n";
    for (std::size_t i = 0; i < j.size(); ++i) {
      if (i) os << ",\n";
      os << pad;
      write_json(os, j[i], indent, depth + 1);
    }
    os << "\n" << close_pad << "]";
    return;
  }
  case Json::value_t::number_float: {
    const double x = j.get<double>();
    if (std::isfinite(x)) os << format_number(x);
    else os << '"' << format_number(x) << '"';
    return;
  }
  default: os << j.dump(); return;
  }
}

inline Json to_json(cplx z) { return Json::array({z.real(), z.imag()}); }

inline Json to_json(const DiskGrid &g) {
  return Json{{"rmin", g.rmin}, {"rmax", g.rmax}, {"nr", g.nr}, {"ntheta", g.ntheta}};
}

inline Json to_json(const RectGrid &g) {
  return Json{{"x0", g.x0}, {"x1", g.x1}, {"y0", g.y0}, {"y1", g.y1}, {"nx", g.nx}, {"ny", g.ny}};
}

inline Json to_json(const ExtendedReal &e) {
  return Json{{"value", e.value}, {"infinite", e.infinite}, {"reliable", e.reliable}};
}

inline Json to_json(const CMVerdict &v) {
  Json j{{"verdict", v.holds ? "prefix-feasible" : "violated"}, {"N", v.last_index}};
  if (!v.holds) {
    j["k"] = v.k;
    j["n"] = v.n;
    j["value"] = v.value;
  }
  return j;
}

inline Json to_json(const QCCertificate &c) {
  Json j{{"status", to_string(c.status)}, {"method", to_string(c.method)}, {"bound_k", c.bound_k}};
  j["sup_estimate"] = c.sup_estimate ? Json(*c.sup_estimate) : Json(nullptr);
  j["argsup"] = to_json(c.argsup);
  j["constant"] = c.constant ? Json(*c.constant) : Json(nullptr);
  j["hypothesis"] = c.hypothesis;
  j["grid"] = c.grid ? to_json(*c.grid) : Json(nullptr);
  j["nodes"] = c.nodes;
  j["skipped"] = c.skipped;
  Json d = Json::object();
  for (const auto &[name, value] : c.diagnostics) d[name] = value;
  j["diagnostics"] = d;
  return j;
}

inline Json to_json(const TMembershipReport &r) {
  return Json{{"consistent", r.consistent},
              {"f0_error", r.f0_error},
              {"min_re_real", r.min_re_real},
              {"max_abs_im_real", r.max_abs_im_real},
              {"min_im_upper", r.min_im_upper},
              {"argmin_im_upper", to_json(r.argmin_im_upper)},
              {"evaluated", r.evaluated},
              {"skipped", r.skipped},
              {"limitation", r.limitation}};
}

inline Json to_json(const ModulusReport &r) {
  return Json{{"holds", r.holds},
              {"a", r.a},
              {"limit_value", r.limit_value},
              {"samples", r.samples},
              {"pointwise_failures", r.pointwise_failures},
              {"chain_failures", r.chain_failures},
              {"worst_pointwise_margin", r.worst_pointwise_margin},
              {"worst_chain_margin", r.worst_chain_margin},
              {"worst_z", to_json(r.worst_z)}};
}

inline Json to_json(const PartialSignReport &r) {
  Json j{{"nodes", r.nodes}, {"degenerate", r.degenerate}};
  j["i"] = Json{{"holds", r.i_holds}, {"violations", r.i_violations}, {"max", r.i_max}, {"at", to_json(r.i_worst)}};
  if (r.ii_checked)
    j["ii"] = Json{{"holds", r.ii_holds}, {"violations", r.ii_violations}, {"min", r.ii_min}, {"at", to_json(r.ii_worst)}};
  else
    j["ii"] = Json{{"skipped", r.ii_skip_reason}};
  return j;
}

inline Json to_json(const RatioSupReport &r) {
  return Json{{"sup", r.sup}, {"z", to_json(r.z_at)}, {"t", r.t_at}, {"nodes", r.nodes}, {"skipped", r.skipped}};
}

inline Json to_json(const HarnackReport &r) {
  Json j{{"hypothesis_holds", r.hypothesis_holds}, {"min_re", r.min_re}, {"argmin", to_json(r.argmin)},
         {"bound", r.bound}};
  if (r.hypothesis_holds) {
    j["ratio"] = to_json(r.ratio);
    j["ratio_within_bound"] = r.ratio_within_bound;
  }
  return j;
}

} // namespace cmh
