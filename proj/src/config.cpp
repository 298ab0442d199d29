#include "ruinlab/config.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "ruinlab/errors.hpp"

namespace ruinlab {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& message) {
  throw ConfigError(path + ": " + message);
}

const json& require(const json& obj, const std::string& key, const std::string& path) {
  if (!obj.is_object()) fail(path, "expected an object");
  const auto it = obj.find(key);
  if (it == obj.end()) fail(path, "missing field '" + key + "'");
  return *it;
}

double number(const json& obj, const std::string& key, const std::string& path) {
  const json& v = require(obj, key, path);
  if (!v.is_number()) fail(path + "." + key, "expected a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) fail(path + "." + key, "must be finite");
  return x;
}

double number_or(const json& obj, const std::string& key, double fallback, const std::string& path) {
  return obj.contains(key) ? number(obj, key, path) : fallback;
}

std::string text(const json& obj, const std::string& key, const std::string& path) {
  const json& v = require(obj, key, path);
  if (!v.is_string()) fail(path + "." + key, "expected a string");
  return v.get<std::string>();
}

std::uint64_t unsigned_integer(const json& v, const std::string& path) {
  if (v.is_number_unsigned()) return v.get<std::uint64_t>();
  if (v.is_number_integer() && v.get<std::int64_t>() >= 0) {
    return static_cast<std::uint64_t>(v.get<std::int64_t>());
  }
  fail(path, "expected a nonnegative integer");
}

ClaimDistribution parse_claim(const json& j, const std::string& path) {
  const std::string kind = text(j, "kind", path);
  ClaimDistribution claim = [&] {
    if (kind == "exponential") return ClaimDistribution::exponential(number(j, "mean", path));
    if (kind == "pareto") {
      return ClaimDistribution::pareto(number(j, "shape", path), number(j, "scale", path));
    }
    if (kind == "gamma") {
      return ClaimDistribution::gamma(number(j, "shape", path), number(j, "scale", path));
    }
    if (kind == "mixture") {
      const json& ws = require(j, "weights", path);
      const json& cs = require(j, "components", path);
      if (!ws.is_array() || !cs.is_array()) fail(path, "weights and components must be arrays");
      std::vector<double> weights;
      std::vector<ClaimDistribution> components;
      for (std::size_t i = 0; i < ws.size(); ++i) {
        if (!ws[i].is_number()) fail(path + ".weights", "expected numbers");
        weights.push_back(ws[i].get<double>());
      }
      for (std::size_t i = 0; i < cs.size(); ++i) {
        components.push_back(parse_claim(cs[i], path + ".components[" + std::to_string(i) + "]"));
      }
      return ClaimDistribution::mixture(std::move(weights), std::move(components));
    }
    fail(path + ".kind", "unknown claim law '" + kind + "'");
  }();
  if (j.contains("tail_class")) {
    const std::string declared = text(j, "tail_class", path);
    if (declared != "light" && declared != "subexponential") {
      fail(path + ".tail_class", "expected 'light' or 'subexponential'");
    }
    if (declared != to_string(claim.tail_class())) {
      fail(path + ".tail_class", "declared '" + declared + "' contradicts the " + kind + " law");
    }
  }
  return claim;
}

MixingDistribution parse_mixing(const json& j, const std::string& path) {
  if (!j.is_object()) fail(path, "expected an object");
  std::vector<Atom> atoms;
  if (j.contains("atoms")) {
    const json& a = j.at("atoms");
    if (!a.is_array()) fail(path + ".atoms", "expected an array");
    for (std::size_t i = 0; i < a.size(); ++i) {
      const std::string p = path + ".atoms[" + std::to_string(i) + "]";
      atoms.push_back({number(a[i], "location", p), number(a[i], "mass", p)});
    }
  }
  std::optional<DensityPart> density;
  if (j.contains("density")) {
    const json& d = j.at("density");
    const std::string p = path + ".density";
    const std::string kind = text(d, "kind", p);
    const double lower = number(d, "lower", p);
    const double upper = number(d, "upper", p);
    const double mass = number_or(d, "mass", 1.0, p);
    if (kind == "uniform") {
      density = DensityPart::uniform(lower, upper, mass);
    } else if (kind == "power_endpoint") {
      density = DensityPart::power_endpoint(lower, upper, number(d, "exponent", p), mass);
    } else {
      fail(p + ".kind", "unknown density '" + kind + "'");
    }
    if (d.contains("window")) density = density->with_window(number(d, "window", p));
  }
  return MixingDistribution(std::move(atoms), std::move(density));
}

BoundaryFunction parse_rule(const json& j, const std::string& path) {
  const std::string rule = text(j, "rule", path);
  if (rule == "classical") return BoundaryFunction::classical();
  if (rule == "threshold") return BoundaryFunction::deficit_threshold(number(j, "d", path));
  if (rule == "exp_absorption") return BoundaryFunction::exponential_absorption(number(j, "a", path));
  if (rule == "table") {
    const json& pts = require(j, "points", path);
    if (!pts.is_array()) fail(path + ".points", "expected an array of [y, w] pairs");
    std::vector<double> ys;
    std::vector<double> ws;
    for (const json& pt : pts) {
      if (!pt.is_array() || pt.size() != 2 || !pt[0].is_number() || !pt[1].is_number()) {
        fail(path + ".points", "expected [y, w] number pairs");
      }
      ys.push_back(pt[0].get<double>());
      ws.push_back(pt[1].get<double>());
    }
    Interpolation interp = Interpolation::Linear;
    if (j.contains("interpolation")) {
      const std::string s = text(j, "interpolation", path);
      if (s == "step") {
        interp = Interpolation::Step;
      } else if (s != "linear") {
        fail(path + ".interpolation", "expected 'linear' or 'step'");
      }
    }
    BoundaryFunction w = BoundaryFunction::tabulated(std::move(ys), std::move(ws), interp);
    if (j.contains("flags")) {
      const json& f = j.at("flags");
      auto check = [&](const char* key, bool actual) {
        if (f.contains(key)) {
          if (!f.at(key).is_boolean()) fail(path + ".flags." + key, "expected a boolean");
          if (f.at(key).get<bool>() != actual) {
            fail(path + ".flags." + key, "declared flag contradicts the tabulated values");
          }
        }
      };
      check("is_monotone", w.flags().is_monotone);
      check("is_continuous", w.flags().is_continuous);
      check("limit_at_minus_infinity_is_one", w.flags().limit_at_minus_infinity_is_one);
    }
    return w;
  }
  fail(path + ".rule", "unknown rule '" + rule + "'");
}

json* walk(json& doc, const std::string& dotted, std::string& leaf) {
  json* node = &doc;
  std::size_t start = 0;
  for (;;) {
    const std::size_t dot = dotted.find('.', start);
    if (dot == std::string::npos) {
      leaf = dotted.substr(start);
      return node;
    }
    const std::string key = dotted.substr(start, dot - start);
    if (key.empty()) throw ConfigError("override path '" + dotted + "' has an empty component");
    if (!node->is_object()) throw ConfigError("override path '" + dotted + "' crosses a non-object");
    node = &(*node)[key];
    start = dot + 1;
  }
}

}  // namespace

const char* to_string(Mode mode) {
  switch (mode) {
    case Mode::Simulate:
      return "simulate";
    case Mode::Asymptotics:
      return "asymptotics";
    case Mode::Compare:
      return "compare";
    case Mode::Table:
      return "table";
  }
  return "unknown";
}

const char* to_string(Method method) {
  switch (method) {
    case Method::LadderMc:
      return "ladder_mc";
    case Method::TiltedIs:
      return "tilted_is";
    case Method::QuadratureExact:
      return "quadrature_exact";
  }
  return "unknown";
}

Mode parse_mode(std::string_view name) {
  if (name == "simulate") return Mode::Simulate;
  if (name == "asymptotics") return Mode::Asymptotics;
  if (name == "compare") return Mode::Compare;
  if (name == "table") return Mode::Table;
  throw ConfigError("unknown mode '" + std::string(name) + "'");
}

void apply_override(json& document, std::string_view assignment) {
  const std::size_t eq = assignment.find('=');
  if (eq == std::string_view::npos || eq == 0) {
    throw ConfigError("override '" + std::string(assignment) + "' is not of the form key=value");
  }
  const std::string key(assignment.substr(0, eq));
  const std::string raw(assignment.substr(eq + 1));
  json value = json::parse(raw, nullptr, false);
  if (value.is_discarded()) value = raw;
  std::string leaf;
  json* parent = walk(document, key, leaf);
  if (leaf.empty()) throw ConfigError("override path '" + key + "' ends with a dot");
  if (!parent->is_object() && !parent->is_null()) {
    throw ConfigError("override path '" + key + "' crosses a non-object");
  }
  (*parent)[leaf] = std::move(value);
}

ExperimentConfig parse_config(const json& doc) {
  try {
    if (!doc.is_object()) fail("config", "expected a JSON object");
    const json& version = require(doc, "schema_version", "config");
    if (!version.is_number_integer() || version.get<int>() != kSchemaVersion) {
      fail("config.schema_version", "expected " + std::to_string(kSchemaVersion));
    }
    const json& m = require(doc, "model", "config");
    RiskModel model(number(m, "premium_rate", "model"), parse_claim(require(m, "claim", "model"), "model.claim"),
                    parse_mixing(require(m, "mixing", "model"), "model.mixing"));
    ExperimentConfig cfg{.mode = Mode::Compare, .model = std::move(model)};
    if (doc.contains("mode")) cfg.mode = parse_mode(text(doc, "mode", "config"));
    if (doc.contains("rule")) cfg.rule = parse_rule(doc.at("rule"), "rule");
    if (doc.contains("fixed_intensity")) {
      const double l = number(doc, "fixed_intensity", "config");
      if (!(l > 0.0)) fail("config.fixed_intensity", "must be positive");
      cfg.fixed_intensity = l;
    }
    if (doc.contains("method")) {
      const std::string s = text(doc, "method", "config");
      if (s == "ladder_mc") {
        cfg.method = Method::LadderMc;
      } else if (s == "tilted_is") {
        cfg.method = Method::TiltedIs;
      } else if (s == "quadrature_exact") {
        cfg.method = Method::QuadratureExact;
      } else {
        fail("config.method", "unknown method '" + s + "'");
      }
    }
    if (doc.contains("theorem")) {
      const std::string s = text(doc, "theorem", "config");
      if (s == "auto") {
        cfg.theorem = TheoremChoice::Auto;
      } else if (s == "heavy") {
        cfg.theorem = TheoremChoice::Heavy;
      } else if (s == "light_fixed") {
        cfg.theorem = TheoremChoice::LightFixed;
      } else if (s == "light_atom") {
        cfg.theorem = TheoremChoice::LightAtom;
      } else if (s == "light_sharp") {
        cfg.theorem = TheoremChoice::LightSharp;
      } else {
        fail("config.theorem", "unknown theorem '" + s + "'");
      }
    }
    const json& grid = require(doc, "u_grid", "config");
    if (!grid.is_array() || grid.empty()) fail("config.u_grid", "expected a nonempty array");
    for (const json& v : grid) {
      if (!v.is_number()) fail("config.u_grid", "expected numbers");
      const double u = v.get<double>();
      if (!(u >= 0.0) || !std::isfinite(u)) fail("config.u_grid", "values must be finite and >= 0");
      if (!cfg.u_grid.empty() && !(u > cfg.u_grid.back())) {
        fail("config.u_grid", "must be strictly increasing");
      }
      cfg.u_grid.push_back(u);
    }
    if (doc.contains("n")) {
      cfg.n = unsigned_integer(doc.at("n"), "config.n");
      if (cfg.n < 1) fail("config.n", "must be at least 1");
    }
    if (doc.contains("seed")) cfg.seed = unsigned_integer(doc.at("seed"), "config.seed");
    if (doc.contains("workers")) {
      const std::uint64_t w = unsigned_integer(doc.at("workers"), "config.workers");
      if (w < 1 || w > 1024) fail("config.workers", "must be in [1, 1024]");
      cfg.workers = static_cast<unsigned>(w);
    }
    if (doc.contains("strata")) {
      const json& s = doc.at("strata");
      if (s.contains("cells")) {
        cfg.strata_cells = unsigned_integer(s.at("cells"), "config.strata.cells");
        if (cfg.strata_cells < 2) fail("config.strata.cells", "must be at least 2");
      }
      if (s.contains("n_per_stratum")) {
        cfg.n_per_stratum = unsigned_integer(s.at("n_per_stratum"), "config.strata.n_per_stratum");
        if (cfg.n_per_stratum < 1) fail("config.strata.n_per_stratum", "must be at least 1");
      }
    }
    if (doc.contains("tolerances")) {
      cfg.stratification_tolerance =
          number_or(doc.at("tolerances"), "stratification", cfg.stratification_tolerance, "tolerances");
    }
    if (cfg.fixed_intensity && !(cfg.model.safety_loading(*cfg.fixed_intensity) < 1.0)) {
      fail("config.fixed_intensity", "violates l mu < c");
    }
    cfg.echo = doc;
    cfg.echo.erase("workers");
    cfg.echo.erase("mode");
    return cfg;
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError(e.what());
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(e.what());
  }
}

json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  json doc = json::parse(in, nullptr, false);
  if (doc.is_discarded()) throw ConfigError("config file '" + path + "' is not valid JSON");
  return doc;
}

}  // namespace ruinlab
