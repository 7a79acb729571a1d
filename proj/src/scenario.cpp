#include "rvd/scenario.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>

namespace rvd {

namespace {

using nlohmann::json;

double require_number(const json& j, const std::string& field) {
  if (!j.contains(field)) throw ScenarioError("scenario: missing field '" + field + "'");
  if (!j[field].is_number()) throw ScenarioError("scenario: field '" + field + "' must be a number");
  return j[field].get<double>();
}

int require_int(const json& j, const std::string& field) {
  if (!j.contains(field)) throw ScenarioError("scenario: missing field '" + field + "'");
  if (!j[field].is_number_integer()) {
    throw ScenarioError("scenario: field '" + field + "' must be an integer");
  }
  return j[field].get<int>();
}

Vec3 require_vec3(const json& j, const std::string& field) {
  if (!j.contains(field)) throw ScenarioError("scenario: missing field '" + field + "'");
  const auto& arr = j[field];
  if (!arr.is_array() || arr.size() != 3) {
    throw ScenarioError("scenario: field '" + field + "' must be a 3-element array");
  }
  Vec3 v;
  for (int i = 0; i < 3; ++i) {
    if (!arr[static_cast<size_t>(i)].is_number()) {
      throw ScenarioError("scenario: field '" + field + "' must contain numbers");
    }
    v(i) = arr[static_cast<size_t>(i)].get<double>();
  }
  return v;
}

void check_finite(double v, const char* field) {
  if (!std::isfinite(v)) throw ScenarioError(std::string("scenario: field '") + field + "' must be finite");
}

}  // namespace

void validate_scenario(const ScenarioConfig& c) {
  auto positive = [](double v, const char* field) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw ScenarioError(std::string("scenario: field '") + field + "' must be positive and finite");
    }
  };
  positive(c.eta, "eta");
  positive(c.a_max, "a_max");
  positive(c.tau_s, "tau_s");
  positive(c.keepout_radius, "keepout_radius");
  check_finite(c.t0, "t0");
  check_finite(c.gamma, "gamma");
  if (c.gamma < 0.0) throw ScenarioError("scenario: field 'gamma' must be non-negative");
  if (c.k0 < 0) throw ScenarioError("scenario: field 'k0' must be non-negative");
  if (!(c.alpha_deg > 0.0) || !(c.alpha_deg < 90.0)) {
    throw ScenarioError("scenario: field 'alpha_deg' must lie in (0, 90)");
  }
  if (c.N_ub < 1) throw ScenarioError("scenario: field 'N_ub' must be at least 1");
  if (c.N_d < 1) throw ScenarioError("scenario: field 'N_d' must be at least 1");
  if (c.N_d >= c.N_ub) throw ScenarioError("scenario: field 'N_d' must be smaller than 'N_ub'");
  if (!c.p0_docking.allFinite() || !(c.p0_docking.norm() > 0.0)) {
    throw ScenarioError("scenario: field 'p0_docking' must be finite and non-zero");
  }
  if (!c.p0_rel.allFinite() || !c.v0_rel.allFinite()) {
    throw ScenarioError("scenario: fields 'p0_rel'/'v0_rel' must be finite");
  }
  if (!c.spin.omega0.allFinite()) {
    throw ScenarioError("scenario: field 'spin.omega0' must be finite");
  }
  // The chaser must start outside the keep-out zone or every plan whose first
  // step is constrained by the keep-out hyperplane is infeasible from step k0.
  if (c.p0_rel.norm() <= c.keepout_radius) {
    throw ScenarioError("scenario: field 'keepout_radius' must be smaller than ||p0_rel||");
  }
}

ScenarioConfig load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ScenarioError("scenario: cannot open '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ScenarioError("scenario: parse error in '" + path + "': " + e.what());
  }

  ScenarioConfig c;
  c.name = j.value("name", std::string(""));
  c.eta = require_number(j, "eta");
  c.a_max = require_number(j, "a_max");
  c.tau_s = require_number(j, "tau_s");
  c.k0 = j.contains("k0") ? require_int(j, "k0") : 0;
  c.t0 = j.contains("t0") ? require_number(j, "t0") : 0.0;
  c.p0_docking = require_vec3(j, "p0_docking");

  if (!j.contains("spin") || !j["spin"].is_object()) {
    throw ScenarioError("scenario: missing object field 'spin'");
  }
  const auto& spin = j["spin"];
  if (!spin.contains("variant") || !spin["variant"].is_string()) {
    throw ScenarioError("scenario: field 'spin.variant' must be a string");
  }
  const std::string variant = spin["variant"].get<std::string>();
  if (variant == "constant_rtn") {
    c.spin.variant = SpinVariant::ConstantRtnRate;
  } else if (variant == "inertially_fixed") {
    c.spin.variant = SpinVariant::InertiallyFixedAxis;
  } else {
    throw ScenarioError("scenario: field 'spin.variant' must be 'constant_rtn' or 'inertially_fixed'");
  }
  c.spin.omega0 = require_vec3(spin, "omega0");

  c.p0_rel = require_vec3(j, "p0_rel");
  c.v0_rel = require_vec3(j, "v0_rel");
  c.alpha_deg = require_number(j, "alpha_deg");
  c.keepout_radius = require_number(j, "keepout_radius");
  c.N_d = require_int(j, "N_d");
  c.gamma = require_number(j, "gamma");
  c.N_ub = require_int(j, "N_ub");

  if (j.contains("tolerances")) {
    const auto& t = j["tolerances"];
    if (!t.is_object()) throw ScenarioError("scenario: field 'tolerances' must be an object");
    c.tol.lp_feas = t.value("lp_feas", c.tol.lp_feas);
    c.tol.lp_opt = t.value("lp_opt", c.tol.lp_opt);
    c.tol.membership = t.value("membership", c.tol.membership);
    c.tol.reverify = t.value("reverify", c.tol.reverify);
  }

  validate_scenario(c);
  return c;
}

}  // namespace rvd
