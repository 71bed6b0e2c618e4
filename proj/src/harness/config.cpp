#include "attnsphere/harness/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "attnsphere/dynamics.hpp"
#include "attnsphere/error.hpp"

namespace attnsphere::harness {

using nlohmann::json;

namespace {

[[noreturn]] void parse_fail(const std::string& field, const std::string& what) {
  throw Error(ErrorCode::ParseError, "field '" + field + "': " + what);
}

void check_keys(const json& obj, const std::string& where, std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) parse_fail(where, "expected an object");
  for (const auto& item : obj.items()) {
    bool known = false;
    for (const char* key : allowed) known = known || item.key() == key;
    if (!known) parse_fail(where.empty() ? item.key() : where + "." + item.key(), "unknown key");
  }
}

double get_number(const json& j, const std::string& field) {
  if (!j.is_number()) parse_fail(field, "expected a number");
  return j.get<double>();
}

std::size_t get_count(const json& j, const std::string& field) {
  if (j.is_number_unsigned()) return j.get<std::size_t>();
  if (j.is_number_integer()) parse_fail(field, "expected a nonnegative integer");
  parse_fail(field, "expected an integer");
}

bool get_bool(const json& j, const std::string& field) {
  if (!j.is_boolean()) parse_fail(field, "expected true or false");
  return j.get<bool>();
}

std::string get_string(const json& j, const std::string& field) {
  if (!j.is_string()) parse_fail(field, "expected a string");
  return j.get<std::string>();
}

double get_beta(const json& j, const std::string& field) {
  if (j.is_string()) {
    if (j.get<std::string>() == "inf") return kInfiniteBeta;
    parse_fail(field, "expected a number or \"inf\"");
  }
  return get_number(j, field);
}

std::vector<double> get_numbers(const json& j, const std::string& field) {
  if (!j.is_array()) parse_fail(field, "expected an array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(get_number(j[i], field + "[" + std::to_string(i) + "]"));
  return out;
}

Matrix get_matrix(const json& j, const std::string& field) {
  if (!j.is_array() || j.empty()) parse_fail(field, "expected a non-empty array of rows");
  std::vector<std::vector<double>> rows;
  for (std::size_t i = 0; i < j.size(); ++i) rows.push_back(get_numbers(j[i], field + "[" + std::to_string(i) + "]"));
  for (const auto& r : rows)
    if (r.size() != rows.front().size()) throw Error(ErrorCode::ValidationError, field + ": rows have different lengths");
  return Matrix::from_rows(rows);
}

json matrix_json(const Matrix& m) {
  json rows = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (std::size_t k = 0; k < m.cols(); ++k) row.push_back(m(i, k));
    rows.push_back(std::move(row));
  }
  return rows;
}

json beta_json(double beta) {
  if (beta == kInfiniteBeta) return "inf";
  return beta;
}

bool safe_name(const std::string& s) {
  if (s.empty()) return false;
  for (char c : s) {
    const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '-' || c == '_' ||
                    c == '.';
    if (!ok) return false;
  }
  return true;
}

InitSpec parse_init(const json& j) {
  check_keys(j, "init", {"type", "n", "components"});
  if (!j.contains("type")) parse_fail("init.type", "missing");
  if (!j.contains("n")) parse_fail("init.n", "missing");
  InitSpec init;
  init.n = get_count(j["n"], "init.n");
  const std::string type = get_string(j["type"], "init.type");
  if (type == "uniform") {
    init.kind = InitSpec::Kind::Uniform;
    if (j.contains("components")) parse_fail("init.components", "only valid for type vmf_mixture");
  } else if (type == "vmf_mixture") {
    init.kind = InitSpec::Kind::VmfMixture;
    if (!j.contains("components") || !j["components"].is_array())
      parse_fail("init.components", "expected an array of components");
    const auto& comps = j["components"];
    for (std::size_t i = 0; i < comps.size(); ++i) {
      const std::string where = "init.components[" + std::to_string(i) + "]";
      check_keys(comps[i], where, {"mean", "kappa", "weight"});
      for (const char* key : {"mean", "kappa", "weight"})
        if (!comps[i].contains(key)) parse_fail(where + "." + key, "missing");
      VmfComponent c;
      const auto mean = get_numbers(comps[i]["mean"], where + ".mean");
      c.mean_direction = Vector(std::span<const double>(mean));
      c.concentration = get_number(comps[i]["kappa"], where + ".kappa");
      c.weight = get_number(comps[i]["weight"], where + ".weight");
      init.components.push_back(std::move(c));
    }
  } else {
    parse_fail("init.type", "expected \"uniform\" or \"vmf_mixture\"");
  }
  return init;
}

bool on_grid(double t, double dt) {
  const double ratio = t / dt;
  return std::abs(ratio - std::round(ratio)) <= 1e-9 * std::max(1.0, ratio);
}

}  // namespace

std::string format_beta(double beta) {
  if (beta == kInfiniteBeta) return "inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, beta);
  return std::string(buf, res.ptr);
}

std::size_t ExperimentConfig::step_count() const {
  SimConfig sim;
  sim.dt = dt;
  sim.t_final = t_final;
  return sim.step_count();
}

void ExperimentConfig::validate() const {
  std::vector<std::string> problems;
  auto bad = [&](std::string msg) { problems.push_back(std::move(msg)); };

  if (!safe_name(name)) bad("name: must be non-empty and use only [A-Za-z0-9._-]");
  if (cases.empty()) bad("cases: at least one case is required");
  const std::size_t d = dim();
  std::set<std::string> labels;
  for (std::size_t c = 0; c < cases.size(); ++c) {
    const auto& mc = cases[c];
    const std::string where = "cases[" + std::to_string(c) + "]";
    if (!safe_name(mc.label)) bad(where + ".label: must be non-empty and use only [A-Za-z0-9._-]");
    if (!labels.insert(mc.label).second) bad(where + ".label: duplicate label '" + mc.label + "'");
    if (mc.B.rows() != mc.B.cols()) bad(where + ".B: matrix must be square");
    if (mc.V.rows() != mc.V.cols()) bad(where + ".V: matrix must be square");
    if (mc.B.rows() != d || mc.V.rows() != d) bad(where + ": B and V must share the dimension of cases[0]");
    if (!mc.B.all_finite() || !mc.V.all_finite()) bad(where + ": matrices must be finite");
  }
  if (d < 2) bad("cases: dimension must be at least 2");

  if (init.n == 0) bad("init.n: at least one token is required");
  if (init.kind == InitSpec::Kind::VmfMixture) {
    if (init.components.empty()) bad("init.components: at least one component is required");
    double total = 0.0;
    for (std::size_t i = 0; i < init.components.size(); ++i) {
      const auto& comp = init.components[i];
      const std::string where = "init.components[" + std::to_string(i) + "]";
      if (comp.mean_direction.size() != d) bad(where + ".mean: length must equal the model dimension");
      if (!(norm(comp.mean_direction) > 0.0)) bad(where + ".mean: must be nonzero");
      if (!(comp.concentration >= 0.0) || !std::isfinite(comp.concentration)) bad(where + ".kappa: must be >= 0");
      if (!(comp.weight >= 0.0)) bad(where + ".weight: must be >= 0");
      total += comp.weight;
    }
    if (!init.components.empty() && std::abs(total - 1.0) > 1e-12) bad("init.components: weights must sum to 1");
  }

  if (betas.empty()) bad("betas: at least one value is required");
  std::set<double> seen;
  for (std::size_t i = 0; i < betas.size(); ++i) {
    if (!(betas[i] > 0.0)) bad("betas[" + std::to_string(i) + "]: must be > 0 or \"inf\"");
    if (!seen.insert(betas[i]).second) bad("betas[" + std::to_string(i) + "]: duplicate value");
  }

  const bool clock_ok = dt > 0.0 && std::isfinite(dt) && t_final > 0.0 && std::isfinite(t_final);
  if (!(dt > 0.0) || !std::isfinite(dt)) bad("dt: must be > 0");
  if (!(t_final > 0.0) || !std::isfinite(t_final)) bad("t_final: must be > 0");
  if (clock_ok && dt > t_final) bad("dt: must not exceed t_final");
  if (record_stride == 0) bad("record_stride: must be >= 1");
  if (w2_stride == 0) bad("w2_stride: must be >= 1");
  if (record_stride != 0 && w2_stride % record_stride != 0) bad("w2_stride: must be a multiple of record_stride");
  if (!(p > 0.0 && p <= 1.0)) bad("p: must lie in (0, 1]");
  if (trials == 0) bad("trials: must be >= 1");
  if (!(quantile_lo > 0.0 && quantile_lo < quantile_hi && quantile_hi < 1.0))
    bad("quantiles: need 0 < lo < hi < 1");
  if (envelopes.enabled && !(envelopes.C0 > 0.0 && envelopes.C1 > envelopes.C0))
    bad("envelopes: need C1 > C0 > 0");

  double previous = -1.0;
  for (std::size_t i = 0; i < snapshot_times.size(); ++i) {
    const double t = snapshot_times[i];
    const std::string where = "snapshot_times[" + std::to_string(i) + "]";
    if (!(t > previous)) bad(where + ": times must be strictly increasing and >= 0");
    if (clock_ok && (t > t_final || (t != t_final && !on_grid(t, dt)))) bad(where + ": must lie on the dt grid within [0, t_final]");
    previous = t;
  }

  if (!problems.empty()) {
    std::string msg;
    for (const auto& p : problems) msg += (msg.empty() ? "" : "; ") + p;
    throw Error(ErrorCode::ValidationError, msg);
  }
}

ExperimentConfig parse_config(std::string_view text) {
  json root;
  try {
    root = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::ParseError, e.what());
  }
  check_keys(root, "", {"name", "cases", "init", "betas", "dt", "t_final", "record_stride", "w2_stride", "p",
                        "trials", "seed", "quantiles", "metrics", "envelopes", "snapshot_times"});
  for (const char* key : {"name", "cases", "init", "betas", "t_final"})
    if (!root.contains(key)) parse_fail(key, "missing");

  ExperimentConfig c;
  c.name = get_string(root["name"], "name");

  const auto& cases = root["cases"];
  if (!cases.is_array()) parse_fail("cases", "expected an array");
  for (std::size_t i = 0; i < cases.size(); ++i) {
    const std::string where = "cases[" + std::to_string(i) + "]";
    check_keys(cases[i], where, {"label", "B", "V"});
    for (const char* key : {"label", "B", "V"})
      if (!cases[i].contains(key)) parse_fail(where + "." + key, "missing");
    c.cases.push_back({get_string(cases[i]["label"], where + ".label"), get_matrix(cases[i]["B"], where + ".B"),
                       get_matrix(cases[i]["V"], where + ".V")});
  }

  c.init = parse_init(root["init"]);

  const auto& betas = root["betas"];
  if (betas.is_array()) {
    for (std::size_t i = 0; i < betas.size(); ++i) c.betas.push_back(get_beta(betas[i], "betas[" + std::to_string(i) + "]"));
  } else {
    c.betas.push_back(get_beta(betas, "betas"));
  }

  c.t_final = get_number(root["t_final"], "t_final");
  if (root.contains("dt")) c.dt = get_number(root["dt"], "dt");
  if (root.contains("record_stride")) c.record_stride = get_count(root["record_stride"], "record_stride");
  if (root.contains("w2_stride")) c.w2_stride = get_count(root["w2_stride"], "w2_stride");
  if (root.contains("p")) c.p = get_number(root["p"], "p");
  if (root.contains("trials")) c.trials = get_count(root["trials"], "trials");
  if (root.contains("seed")) {
    if (!root["seed"].is_number_unsigned()) parse_fail("seed", "expected a nonnegative integer");
    c.seed = root["seed"].get<std::uint64_t>();
  }
  if (root.contains("quantiles")) {
    const auto q = get_numbers(root["quantiles"], "quantiles");
    if (q.size() != 2) parse_fail("quantiles", "expected [lo, hi]");
    c.quantile_lo = q[0];
    c.quantile_hi = q[1];
  }
  if (root.contains("metrics")) {
    const auto& m = root["metrics"];
    check_keys(m, "metrics", {"align_E", "align_F", "align_Fabs", "w2_to_target", "v_p", "energy"});
    auto flag = [&](const char* key, bool& out) {
      if (m.contains(key)) out = get_bool(m[key], std::string("metrics.") + key);
    };
    flag("align_E", c.metrics.align_E);
    flag("align_F", c.metrics.align_F);
    flag("align_Fabs", c.metrics.align_Fabs);
    flag("w2_to_target", c.metrics.w2_to_target);
    flag("v_p", c.metrics.v_p);
    flag("energy", c.metrics.energy);
  }
  if (root.contains("envelopes")) {
    const auto& e = root["envelopes"];
    check_keys(e, "envelopes", {"enabled", "C0", "C1"});
    if (e.contains("enabled")) c.envelopes.enabled = get_bool(e["enabled"], "envelopes.enabled");
    if (e.contains("C0")) c.envelopes.C0 = get_number(e["C0"], "envelopes.C0");
    if (e.contains("C1")) c.envelopes.C1 = get_number(e["C1"], "envelopes.C1");
  }
  if (root.contains("snapshot_times")) c.snapshot_times = get_numbers(root["snapshot_times"], "snapshot_times");

  c.validate();
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoFailure, "cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

json to_json(const ExperimentConfig& c) {
  json root;
  root["name"] = c.name;
  json cases = json::array();
  for (const auto& mc : c.cases) cases.push_back({{"label", mc.label}, {"B", matrix_json(mc.B)}, {"V", matrix_json(mc.V)}});
  root["cases"] = std::move(cases);

  json init;
  init["n"] = c.init.n;
  if (c.init.kind == InitSpec::Kind::Uniform) {
    init["type"] = "uniform";
  } else {
    init["type"] = "vmf_mixture";
    json comps = json::array();
    for (const auto& comp : c.init.components) {
      json mean = json::array();
      for (std::size_t k = 0; k < comp.mean_direction.size(); ++k) mean.push_back(comp.mean_direction[k]);
      comps.push_back({{"mean", std::move(mean)}, {"kappa", comp.concentration}, {"weight", comp.weight}});
    }
    init["components"] = std::move(comps);
  }
  root["init"] = std::move(init);

  json betas = json::array();
  for (double b : c.betas) betas.push_back(beta_json(b));
  root["betas"] = std::move(betas);
  root["dt"] = c.dt;
  root["t_final"] = c.t_final;
  root["record_stride"] = c.record_stride;
  root["w2_stride"] = c.w2_stride;
  root["p"] = c.p;
  root["trials"] = c.trials;
  root["seed"] = c.seed;
  root["quantiles"] = {c.quantile_lo, c.quantile_hi};
  root["metrics"] = {{"align_E", c.metrics.align_E},           {"align_F", c.metrics.align_F},
                     {"align_Fabs", c.metrics.align_Fabs},     {"w2_to_target", c.metrics.w2_to_target},
                     {"v_p", c.metrics.v_p},                   {"energy", c.metrics.energy}};
  root["envelopes"] = {{"enabled", c.envelopes.enabled}, {"C0", c.envelopes.C0}, {"C1", c.envelopes.C1}};
  root["snapshot_times"] = c.snapshot_times;
  return root;
}

}  // namespace attnsphere::harness
