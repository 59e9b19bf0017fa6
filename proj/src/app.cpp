#include "cuspext/app.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "cuspext/admissibility.hpp"
#include "cuspext/bilip.hpp"
#include "cuspext/errors.hpp"
#include "cuspext/io.hpp"
#include "cuspext/lipschitzify.hpp"
#include "cuspext/random.hpp"

namespace cuspext {

namespace {

constexpr const char* kToolVersion = "1.0.0";

// ---- config parsing -------------------------------------------------------

void reject_unknown(const Json& j, const std::string& where, std::initializer_list<const char*> keys) {
  if (!j.is_object()) throw ConfigError(where + ": expected an object");
  const std::set<std::string> allowed(keys.begin(), keys.end());
  for (const auto& [k, v] : j.items())
    if (!allowed.contains(k)) throw ConfigError(where + "." + k + ": unknown field");
}

double read_number(const Json& j, const std::string& where) {
  if (!j.is_number()) throw ConfigError(where + ": expected a number");
  return j.get<double>();
}

template <class Int>
Int read_count(const Json& j, const std::string& where, Int min_value) {
  if (!j.is_number_integer() && !j.is_number_unsigned())
    throw ConfigError(where + ": expected an integer");
  const auto v = j.get<long long>();
  if (v < static_cast<long long>(min_value))
    throw ConfigError(where + ": must be >= " + std::to_string(min_value));
  return static_cast<Int>(v);
}

std::string read_string(const Json& j, const std::string& where) {
  if (!j.is_string()) throw ConfigError(where + ": expected a string");
  return j.get<std::string>();
}

std::vector<double> read_numbers(const Json& j, const std::string& where) {
  if (!j.is_array()) throw ConfigError(where + ": expected an array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < j.size(); ++i)
    out.push_back(read_number(j[i], where + "[" + std::to_string(i) + "]"));
  return out;
}

void check_pq(double p, double q, const std::string& where) {
  if (!std::isfinite(p) || !std::isfinite(q)) throw ConfigError(where + ": p and q must be finite");
  if (!(q >= 1.0)) throw ConfigError(where + ": need q >= 1");
  if (!(q <= p)) throw ConfigError(where + ": need q <= p");
}

ProfileConfig parse_profile(const Json& j) {
  reject_unknown(j, "config.profile", {"kind", "coefficient", "exponent", "slope", "breakpoints",
                                       "values", "csv"});
  ProfileConfig p;
  if (!j.contains("kind")) throw ConfigError("config.profile.kind: missing");
  p.kind = read_string(j["kind"], "config.profile.kind");
  if (j.contains("coefficient")) p.coefficient = read_number(j["coefficient"], "config.profile.coefficient");
  if (j.contains("exponent")) p.exponent = read_number(j["exponent"], "config.profile.exponent");
  if (j.contains("slope")) p.slope = read_number(j["slope"], "config.profile.slope");
  if (j.contains("breakpoints")) p.breakpoints = read_numbers(j["breakpoints"], "config.profile.breakpoints");
  if (j.contains("values")) p.values = read_numbers(j["values"], "config.profile.values");
  if (j.contains("csv")) p.csv = read_string(j["csv"], "config.profile.csv");
  if (p.kind == "power") {
    if (!(p.coefficient > 0.0)) throw ConfigError("config.profile.coefficient: must be positive");
    if (!(p.exponent >= 1.0)) throw ConfigError("config.profile.exponent: must be >= 1");
  } else if (p.kind == "linear") {
    if (!(p.slope > 0.0)) throw ConfigError("config.profile.slope: must be positive");
  } else if (p.kind == "step" || p.kind == "tabulated") {
    if (p.csv.empty() && p.breakpoints.empty())
      throw ConfigError("config.profile: " + p.kind + " needs breakpoints/values or csv");
    if (!p.csv.empty() && !p.breakpoints.empty())
      throw ConfigError("config.profile: give either csv or breakpoints/values, not both");
  } else {
    throw ConfigError("config.profile.kind: unknown kind '" + p.kind +
                      "' (expected power, linear, step or tabulated)");
  }
  return p;
}

QuadratureOptions parse_quadrature(const Json& j) {
  reject_unknown(j, "config.quadrature", {"grading_ratio", "grading_levels", "t_order", "radial_order",
                                          "cylinder_panels", "angular_nodes", "mc_directions",
                                          "seam_band"});
  QuadratureOptions q;
  const std::string w = "config.quadrature.";
  if (j.contains("grading_ratio")) q.grading_ratio = read_number(j["grading_ratio"], w + "grading_ratio");
  if (j.contains("grading_levels")) q.grading_levels = read_count<int>(j["grading_levels"], w + "grading_levels", 0);
  if (j.contains("t_order")) q.t_order = read_count<int>(j["t_order"], w + "t_order", 1);
  if (j.contains("radial_order")) q.radial_order = read_count<int>(j["radial_order"], w + "radial_order", 1);
  if (j.contains("cylinder_panels")) q.cylinder_panels = read_count<int>(j["cylinder_panels"], w + "cylinder_panels", 1);
  if (j.contains("angular_nodes")) q.angular_nodes = read_count<int>(j["angular_nodes"], w + "angular_nodes", 1);
  if (j.contains("mc_directions")) q.mc_directions = read_count<int>(j["mc_directions"], w + "mc_directions", 1);
  if (j.contains("seam_band")) q.seam_band = read_number(j["seam_band"], w + "seam_band");
  QuadratureScheme{q};  // range validation
  return q;
}

SampleCounts parse_samples(const Json& j) {
  reject_unknown(j, "config.samples", {"round_trip", "image", "distortion", "seam", "trace",
                                       "normals", "lipschitz_pairs"});
  SampleCounts s;
  const std::string w = "config.samples.";
  // zero counts are accepted here and rejected by the commands
  if (j.contains("round_trip")) s.round_trip = read_count<std::size_t>(j["round_trip"], w + "round_trip", 0);
  if (j.contains("image")) s.image = read_count<std::size_t>(j["image"], w + "image", 0);
  if (j.contains("distortion")) s.distortion = read_count<std::size_t>(j["distortion"], w + "distortion", 0);
  if (j.contains("seam")) s.seam = read_count<std::size_t>(j["seam"], w + "seam", 0);
  if (j.contains("trace")) s.trace = read_count<std::size_t>(j["trace"], w + "trace", 0);
  if (j.contains("normals")) s.normals = read_count<std::size_t>(j["normals"], w + "normals", 0);
  if (j.contains("lipschitz_pairs"))
    s.lipschitz_pairs = read_count<std::size_t>(j["lipschitz_pairs"], w + "lipschitz_pairs", 0);
  return s;
}

// ---- helpers for commands ---------------------------------------------------

Json header(const RunConfig& cfg) {
  Json h;
  h["tool"] = "cuspext";
  h["version"] = kToolVersion;
  h["command"] = cfg.command;
  h["config"] = config_to_json(cfg);
  return h;
}

void require_positive(std::size_t count, const char* what) {
  if (count == 0) throw ArgumentError(std::string("samples.") + what + ": must be positive");
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write '" + path.string() + "'");
  out << text;
}

void emit(CommandOutcome& out, const RunConfig& cfg, const std::string& name) {
  out.report["failures"] = out.failures;
  out.report["warnings"] = out.warnings;
  out.report["status"] = out.exit_code == kExitOk ? "pass" : (out.exit_code == kExitCheckFailed ? "fail" : "error");
  const auto path = cfg.out / (name + ".json");
  write_text(path, out.report.dump(2) + "\n");
  out.files.push_back(path);
}

void fail(CommandOutcome& out, std::string message) {
  out.failures.push_back(std::move(message));
  if (out.exit_code == kExitOk) out.exit_code = kExitCheckFailed;
}

DomainPoint sample_in_domain(const DomainSpec& spec, Rng& rng) {
  const double t = uniform(rng, 0.0, 2.0);
  const double radius = t <= 1.0 ? spec.psi.value_or_zero(t) : spec.psi.at_one();
  return DomainPoint{t, random_in_ball(rng, static_cast<std::size_t>(spec.n - 1), radius)};
}

}  // namespace

std::vector<std::string> command_names() {
  return {"lipschitzify", "transform-verify", "extend-verify", "admissibility-sweep"};
}

double parse_tolerance(const std::string& text) {
  double v = 0.0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (text.empty() || ec != std::errc{} || ptr != last || !(v > 0.0) || !std::isfinite(v))
    throw ConfigError(std::string(kToleranceEnv) + ": expected a positive number, got '" + text + "'");
  return v;
}

RunConfig parse_run_config(const Json& j, const std::filesystem::path& base_dir,
                           std::optional<double> env_tolerance) {
  reject_unknown(j, "config", {"command", "profile", "n", "pq", "p", "q", "sweep", "functions",
                               "grid", "quadrature", "samples", "second_cylinder_map",
                               "shift_amount", "seed", "tolerance", "out"});
  RunConfig cfg;
  cfg.base_dir = base_dir;
  if (env_tolerance) {
    cfg.tolerance = *env_tolerance;
    cfg.tolerance_source = "env";
  }
  if (j.contains("command")) cfg.command = read_string(j["command"], "config.command");
  if (j.contains("profile")) cfg.profile = parse_profile(j["profile"]);
  if (j.contains("n")) {
    cfg.n = read_count<int>(j["n"], "config.n", 2);
    if (cfg.n > 64) throw ConfigError("config.n: must be <= 64");
  }
  if (j.contains("pq")) {
    if (!j["pq"].is_array() || j["pq"].empty())
      throw ConfigError("config.pq: expected a non-empty array of [p, q] pairs");
    cfg.pq.clear();
    for (std::size_t i = 0; i < j["pq"].size(); ++i) {
      const std::string w = "config.pq[" + std::to_string(i) + "]";
      const auto pair = read_numbers(j["pq"][i], w);
      if (pair.size() != 2) throw ConfigError(w + ": expected [p, q]");
      check_pq(pair[0], pair[1], w);
      cfg.pq.emplace_back(pair[0], pair[1]);
    }
  }
  if (j.contains("p") != j.contains("q")) throw ConfigError("config.p/config.q: give both or neither");
  if (j.contains("p")) {
    if (j.contains("pq")) throw ConfigError("config.pq: conflicts with config.p/config.q");
    const double p = read_number(j["p"], "config.p");
    const double q = read_number(j["q"], "config.q");
    check_pq(p, q, "config.p/config.q");
    cfg.pq = {{p, q}};
  }
  if (j.contains("sweep")) {
    const Json& s = j["sweep"];
    reject_unknown(s, "config.sweep", {"first", "last", "step"});
    if (s.contains("first")) cfg.sweep.first = read_number(s["first"], "config.sweep.first");
    if (s.contains("last")) cfg.sweep.last = read_number(s["last"], "config.sweep.last");
    if (s.contains("step")) cfg.sweep.step = read_number(s["step"], "config.sweep.step");
    if (!(cfg.sweep.step > 0.0)) throw ConfigError("config.sweep.step: must be positive");
    if (!(cfg.sweep.first >= 1.0)) throw ConfigError("config.sweep.first: must be >= 1");
    if (!(cfg.sweep.last >= cfg.sweep.first)) throw ConfigError("config.sweep.last: must be >= first");
  }
  if (j.contains("functions")) {
    if (!j["functions"].is_array()) throw ConfigError("config.functions: expected an array of names");
    cfg.functions.clear();
    const auto known = test_function_names();
    for (std::size_t i = 0; i < j["functions"].size(); ++i) {
      const std::string w = "config.functions[" + std::to_string(i) + "]";
      const std::string name = read_string(j["functions"][i], w);
      if (std::find(known.begin(), known.end(), name) == known.end())
        throw ConfigError(w + ": unknown test function '" + name + "'");
      cfg.functions.push_back(name);
    }
  }
  if (j.contains("grid")) {
    const Json& g = j["grid"];
    reject_unknown(g, "config.grid", {"t_min", "t_max", "count"});
    if (g.contains("t_min")) cfg.grid.t_min = read_number(g["t_min"], "config.grid.t_min");
    if (g.contains("t_max")) cfg.grid.t_max = read_number(g["t_max"], "config.grid.t_max");
    if (g.contains("count")) cfg.grid.count = read_count<std::size_t>(g["count"], "config.grid.count", 2);
    if (!(cfg.grid.t_min > 0.0 && cfg.grid.t_min < cfg.grid.t_max && cfg.grid.t_max <= 1.0))
      throw ConfigError("config.grid: need 0 < t_min < t_max <= 1");
  }
  if (j.contains("quadrature")) cfg.quadrature = parse_quadrature(j["quadrature"]);
  if (j.contains("samples")) cfg.samples = parse_samples(j["samples"]);
  if (j.contains("second_cylinder_map") && j.contains("shift_amount"))
    throw ConfigError("config.shift_amount: conflicts with config.second_cylinder_map");
  if (j.contains("second_cylinder_map"))
    cfg.second_map = parse_second_cylinder_map(read_string(j["second_cylinder_map"], "config.second_cylinder_map"));
  if (j.contains("shift_amount")) {
    const double s = read_number(j["shift_amount"], "config.shift_amount");
    if (s == 1.0) cfg.second_map = SecondCylinderMap::Shift1;
    else if (s == 2.0) cfg.second_map = SecondCylinderMap::Shift2;
    else throw ConfigError("config.shift_amount: must be 1 or 2");
  }
  if (j.contains("seed")) cfg.seed = read_count<std::uint64_t>(j["seed"], "config.seed", 0);
  cfg.quadrature.seed = cfg.seed;
  if (j.contains("tolerance")) {
    cfg.tolerance = read_number(j["tolerance"], "config.tolerance");
    if (!(cfg.tolerance > 0.0)) throw ConfigError("config.tolerance: must be positive");
    cfg.tolerance_source = "config";
  }
  if (j.contains("out")) cfg.out = base_dir / read_string(j["out"], "config.out");
  return cfg;
}

RunConfig load_run_config(const std::filesystem::path& path, std::optional<double> env_tolerance) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open '" + path.string() + "'");
  Json j;
  try {
    j = Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(std::string("config: invalid JSON: ") + e.what());
  }
  return parse_run_config(j, path.parent_path().empty() ? "." : path.parent_path(), env_tolerance);
}

CuspProfile build_profile(const ProfileConfig& cfg, const std::filesystem::path& base_dir) {
  if (cfg.kind == "power") return CuspProfile::power(cfg.coefficient, cfg.exponent);
  if (cfg.kind == "linear") return CuspProfile::linear(cfg.slope);
  const ProfileKind kind = cfg.kind == "step" ? ProfileKind::Step : ProfileKind::Tabulated;
  if (!cfg.csv.empty()) return load_profile_csv(base_dir / cfg.csv, kind);
  validate_table(cfg.breakpoints, cfg.values);
  return kind == ProfileKind::Step ? CuspProfile::step(cfg.breakpoints, cfg.values)
                                   : CuspProfile::tabulated(cfg.breakpoints, cfg.values);
}

Json config_to_json(const RunConfig& cfg) {
  Json j;
  j["command"] = cfg.command;
  Json p;
  p["kind"] = cfg.profile.kind;
  if (cfg.profile.kind == "power") {
    p["coefficient"] = cfg.profile.coefficient;
    p["exponent"] = cfg.profile.exponent;
  } else if (cfg.profile.kind == "linear") {
    p["slope"] = cfg.profile.slope;
  } else if (!cfg.profile.csv.empty()) {
    p["csv"] = cfg.profile.csv;
  } else {
    p["breakpoints"] = cfg.profile.breakpoints;
    p["values"] = cfg.profile.values;
  }
  j["profile"] = std::move(p);
  j["n"] = cfg.n;
  Json pq = Json::array();
  for (const auto& [pp, qq] : cfg.pq) pq.push_back({pp, qq});
  j["pq"] = std::move(pq);
  j["sweep"] = {{"first", cfg.sweep.first}, {"last", cfg.sweep.last}, {"step", cfg.sweep.step}};
  j["functions"] = cfg.functions;
  j["grid"] = {{"t_min", cfg.grid.t_min}, {"t_max", cfg.grid.t_max}, {"count", cfg.grid.count}};
  const auto& q = cfg.quadrature;
  j["quadrature"] = {{"grading_ratio", q.grading_ratio}, {"grading_levels", q.grading_levels},
                     {"t_order", q.t_order},             {"radial_order", q.radial_order},
                     {"cylinder_panels", q.cylinder_panels}, {"angular_nodes", q.angular_nodes},
                     {"mc_directions", q.mc_directions}, {"seam_band", q.seam_band}};
  const auto& s = cfg.samples;
  j["samples"] = {{"round_trip", s.round_trip}, {"image", s.image},   {"distortion", s.distortion},
                  {"seam", s.seam},             {"trace", s.trace},   {"normals", s.normals},
                  {"lipschitz_pairs", s.lipschitz_pairs}};
  j["second_cylinder_map"] = std::string(to_string(cfg.second_map));
  j["seed"] = cfg.seed;
  j["tolerance"] = cfg.tolerance;
  j["tolerance_source"] = cfg.tolerance_source;
  return j;
}

// ---- commands -----------------------------------------------------------------

CommandOutcome cmd_lipschitzify(const RunConfig& cfg) {
  CommandOutcome out;
  out.report = header(cfg);
  const CuspProfile psi = build_profile(cfg.profile, cfg.base_dir);
  const std::vector<double> grid = log_grid(cfg.grid.t_min, cfg.grid.t_max, cfg.grid.count);

  std::vector<double> hat;
  std::vector<std::string> node_errors;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    try {
      hat.push_back(hat_psi(psi, grid[i]));
    } catch (const NumericError& e) {
      node_errors.push_back("grid node " + std::to_string(i) + " (t=" + std::to_string(grid[i]) +
                            "): " + e.what());
    }
  }
  if (!node_errors.empty()) {
    out.report["solver_failures"] = node_errors;
    out.failures = node_errors;
    out.exit_code = kExitNumeric;
    emit(out, cfg, "lipschitzify");
    return out;
  }
  {
    std::ostringstream csv;
    write_profile_csv(csv, grid, hat);
    const auto path = cfg.out / "hat_profile.csv";
    write_text(path, csv.str());
    out.files.push_back(path);
  }

  // Lipschitz bound on adjacent grid pairs and random pairs
  const double bound = 1.0 + psi.at_one();
  const double slack = 2.0 * kDefaultSolverTol;
  double worst_excess = -std::numeric_limits<double>::infinity();
  std::size_t pairs = 0;
  const auto check_pair = [&](double a, double ha, double b, double hb) {
    worst_excess = std::max(worst_excess, std::abs(ha - hb) - bound * std::abs(a - b));
    ++pairs;
  };
  for (std::size_t i = 0; i + 1 < grid.size(); ++i) check_pair(grid[i], hat[i], grid[i + 1], hat[i + 1]);
  Rng rng(cfg.seed);
  for (std::size_t k = 0; k < cfg.samples.lipschitz_pairs; ++k) {
    const double a = uniform(rng, 0.0, 1.0), b = uniform(rng, 0.0, 1.0);
    if (a <= 0.0 || b <= 0.0) continue;
    check_pair(a, hat_psi(psi, a), b, hat_psi(psi, b));
  }
  const bool lipschitz_ok = worst_excess <= slack;
  Json lip;
  lip["bound"] = bound;
  lip["pairs"] = pairs;
  lip["worst_excess"] = worst_excess;
  out.report["lipschitz_bound_ok"] = lipschitz_ok;
  out.report["lipschitz"] = std::move(lip);
  if (!lipschitz_ok) fail(out, "lipschitz bound violated by " + std::to_string(worst_excess));

  double identity_gap = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) identity_gap = std::max(identity_gap, std::abs(hat[i] - psi(grid[i])));
  out.report["max_abs_hat_minus_psi"] = identity_gap;
  if (psi.kind() == ProfileKind::Linear && identity_gap != 0.0)
    fail(out, "linear profile: hat differs from psi by " + std::to_string(identity_gap));

  const QuotientCheck hypothesis = check_quotient_hypothesis(psi, grid);
  const QuotientCheck preserved = verify_monotone_quotient(psi, grid);
  Json mq;
  mq["hypothesis"] = to_json(hypothesis);
  mq["preserved"] = to_json(preserved);
  mq["ok"] = !hypothesis.ok || preserved.ok;
  out.report["monotone_quotient"] = std::move(mq);
  if (!hypothesis.ok)
    out.warnings.push_back("psi(t)/t is not nondecreasing; quotient preservation not asserted");
  else if (!preserved.ok)
    fail(out, "monotone quotient not preserved");

  if (psi.doubling_constant()) {
    const DoublingTransfer d = verify_doubling_transfer(psi, grid);
    out.report["doubling_transfer"] = to_json(d);
    if (!d.ok) fail(out, "doubling constant not transferred");
  } else {
    out.report["doubling_transfer"] = nullptr;
    out.warnings.push_back("profile has no doubling constant; transfer check skipped");
  }
  emit(out, cfg, "lipschitzify");
  return out;
}

CommandOutcome cmd_transform_verify(const RunConfig& cfg) {
  CommandOutcome out;
  out.report = header(cfg);
  require_positive(cfg.samples.round_trip, "round_trip");
  require_positive(cfg.samples.image, "image");
  require_positive(cfg.samples.distortion, "distortion");
  require_positive(cfg.samples.seam, "seam");
  const DomainSpec original = DomainSpec::make(cfg.n, build_profile(cfg.profile, cfg.base_dir));
  const Normalization norm = normalize(original);
  const DomainSpec& spec = norm.spec;
  out.report["normalization_scale"] = norm.scale;

  // round trip
  Rng rng(cfg.seed);
  const SamplingBox box;
  double worst = 0.0;
  DomainPoint worst_point;
  for (std::size_t k = 0; k < cfg.samples.round_trip; ++k) {
    const DomainPoint z = uniform_point_in_box(cfg.n, box, rng);
    const double err = distance(inverse_map(spec, forward_map(spec, z)), z) /
                       std::max(1.0, std::hypot(z.t, z.radius()));
    if (err > worst) {
      worst = err;
      worst_point = z;
    }
  }
  constexpr double kRoundTripTol = 1e-9;
  out.report["round_trip"] = {{"samples", cfg.samples.round_trip},
                              {"max_relative_error", worst},
                              {"tolerance", kRoundTripTol},
                              {"worst_point", to_json(worst_point)}};
  if (!(worst <= kRoundTripTol)) fail(out, "round trip error " + std::to_string(worst));

  const std::vector<double> deltas{1e-3, 1e-5, 1e-7};
  Json seams = Json::array();
  for (const SeamModulus& m : bilip_seam_continuity(spec, deltas, cfg.samples.seam, cfg.seed)) {
    seams.push_back(to_json(m));
    if (!m.stable) fail(out, "map seam " + m.seam + " modulus unstable");
  }
  out.report["seam_continuity"] = std::move(seams);

  const ImageCheck image = verify_image(spec, cfg.samples.image, cfg.seed);
  out.report["image"] = to_json(image);
  if (!image.ok) fail(out, "image membership: " + image.failure);

  const DistortionReport dist = distortion_sample(spec, cfg.samples.distortion, cfg.seed);
  out.report["distortion"] = to_json(dist);
  if (!(dist.min_ratio > 0.0) || !std::isfinite(dist.max_ratio))
    fail(out, "distortion ratios degenerate");

  // the extension seams on the lipschitzified domain depend on the
  // configured far-cylinder map
  const ExtensionContext ctx =
      ExtensionContext::make(DomainSpec::make(cfg.n, lipschitzified(spec.psi)), cfg.second_map);
  const ScalarField probe = extend_lipschitz(ctx, test_function("coordinate_t"));
  Json ext = Json::array();
  for (const SeamModulus& m :
       extension_seam_continuity(ctx, probe, deltas, std::min<std::size_t>(cfg.samples.seam, 50), cfg.seed)) {
    ext.push_back(to_json(m));
    if (!m.stable) fail(out, "extension seam " + m.seam + " discontinuous (second_cylinder_map=" +
                                 std::string(to_string(cfg.second_map)) + ")");
  }
  out.report["extension_seams"] = std::move(ext);
  emit(out, cfg, "transform_verify");
  return out;
}

CommandOutcome cmd_extend_verify(const RunConfig& cfg) {
  CommandOutcome out;
  out.report = header(cfg);
  if (cfg.functions.empty()) throw ArgumentError("functions: the test function list is empty");
  require_positive(cfg.samples.trace, "trace");
  require_positive(cfg.samples.normals, "normals");
  require_positive(cfg.samples.seam, "seam");
  if (cfg.n < 3) throw ConfigError("config.n: extend-verify needs n >= 3");
  const DomainSpec spec = DomainSpec::make(cfg.n, build_profile(cfg.profile, cfg.base_dir));
  const bool lipschitz = spec.psi.lipschitz_constant().has_value();
  const double c = spec.psi.at_one();

  TestFunctionOptions fopts;
  fopts.psi_at_one = c;
  std::vector<ScalarField> fields;
  for (const auto& name : cfg.functions) fields.push_back(test_function(name, fopts));

  std::optional<ExtensionContext> ctx;
  if (lipschitz) ctx = ExtensionContext::make(spec, cfg.second_map);
  const auto extend = [&](const ScalarField& u) {
    return lipschitz ? extend_lipschitz(*ctx, u) : extend_general(spec, u, {}, cfg.second_map);
  };
  if (!lipschitz)
    out.warnings.push_back("profile is not Lipschitz: norm ratios skipped, general extension checked");

  Json checks = Json::array();
  const double trace_tol = lipschitz ? 0.0 : 1e-8;
  const std::vector<double> deltas{1e-3, 1e-5, 1e-7};
  for (std::size_t f = 0; f < fields.size(); ++f) {
    const ScalarField& u = fields[f];
    const ScalarField& v = fields[(f + 1) % fields.size()];
    const ScalarField eu = extend(u);
    Json entry;
    entry["field"] = u.name;

    Rng rng(cfg.seed + f);
    double trace_err = 0.0;
    for (std::size_t k = 0; k < cfg.samples.trace; ++k) {
      const DomainPoint z = sample_in_domain(spec, rng);
      trace_err = std::max(trace_err, std::abs(eu(z) - u(z)) / std::max(1.0, std::abs(u(z))));
    }
    entry["trace_max_error"] = trace_err;
    if (!(trace_err <= trace_tol)) fail(out, u.name + ": trace error " + std::to_string(trace_err));

    const double alpha = 0.7, beta = -1.3;
    const ScalarField combo = extend(linear_combination(alpha, u, beta, v));
    const ScalarField ev = extend(v);
    const SamplingBox box{-0.5, 3.5, 2.5 * c};
    double lin_err = 0.0;
    for (std::size_t k = 0; k < cfg.samples.trace; ++k) {
      const DomainPoint z = uniform_point_in_box(cfg.n, box, rng);
      const double a = alpha * eu(z), b = beta * ev(z);
      lin_err = std::max(lin_err, std::abs(combo(z) - (a + b)) / (1.0 + std::abs(a) + std::abs(b)));
    }
    entry["linearity_max_error"] = lin_err;
    if (!(lin_err <= 1e-12)) fail(out, u.name + ": linearity error " + std::to_string(lin_err));

    if (lipschitz) {
      const BoundaryDecay decay =
          boundary_decay(*ctx, u, eu, cfg.samples.normals, std::vector<double>{1e-2, 1e-3, 1e-4}, cfg.seed + f);
      entry["boundary_decay"] = to_json(decay);
      if (!decay.ok) fail(out, u.name + ": boundary decay ratio " + std::to_string(decay.worst_ratio));
      Json seams = Json::array();
      for (const SeamModulus& m :
           extension_seam_continuity(*ctx, eu, deltas, std::min<std::size_t>(cfg.samples.seam, 50), cfg.seed + f)) {
        seams.push_back(to_json(m));
        if (!m.stable) fail(out, u.name + ": extension seam " + m.seam + " discontinuous");
      }
      entry["seams"] = std::move(seams);
    }
    checks.push_back(std::move(entry));
  }
  out.report["checks"] = std::move(checks);

  std::vector<NormReport> norms;
  Json reports = Json::array();
  if (lipschitz) {
    const QuadratureScheme scheme(cfg.quadrature);
    for (const auto& [p, q] : cfg.pq) {
      const bool in_region = mechanism_range(Mechanism::LimitCase, cfg.n, 2.0, p, q);
      if (!in_region) {
        std::ostringstream w;
        w << "(p,q)=(" << p << "," << q << ") outside the limit-case region "
          << "1 <= q < n-1, (n-1)q/(n-1-q) <= p; report emitted unasserted";
        out.warnings.push_back(w.str());
      }
      for (const ScalarField& u : fields) {
        NormReport r = extension_ratio(u, spec, p, q, scheme, cfg.second_map);
        Json j = to_json(r);
        const bool finite = r.ratio && std::isfinite(*r.ratio);
        const bool stable = r.refinement_delta && *r.refinement_delta < 0.05;
        j["asserted"] = in_region;
        j["pass"] = finite && stable;
        if (in_region && !(finite && stable)) {
          std::ostringstream msg;
          msg << u.name << " (p,q)=(" << p << "," << q << "): ratio not finite or refinement delta >= 5%";
          fail(out, msg.str());
        }
        reports.push_back(std::move(j));
        norms.push_back(std::move(r));
      }
    }
    std::ostringstream csv;
    write_norm_csv(csv, norms);
    const auto path = cfg.out / "extension_ratios.csv";
    write_text(path, csv.str());
    out.files.push_back(path);
  }
  out.report["norm_reports"] = std::move(reports);
  emit(out, cfg, "extend_verify");
  return out;
}

CommandOutcome cmd_admissibility_sweep(const RunConfig& cfg) {
  CommandOutcome out;
  out.report = header(cfg);
  if (cfg.n < 3) throw ConfigError("config.n: admissibility-sweep needs n >= 3");
  const auto [p, q] = cfg.pq.front();
  const std::vector<double> sigmas = arithmetic_grid(cfg.sweep.first, cfg.sweep.last, cfg.sweep.step);
  const SweepResult sweep = admissibility_sweep(cfg.n, p, q, sigmas, cfg.tolerance);
  out.report["sweep"] = to_json(sweep);
  {
    std::ostringstream csv;
    write_sweep_csv(csv, sweep);
    const auto path = cfg.out / "admissibility_sweep.csv";
    write_text(path, csv.str());
    out.files.push_back(path);
  }
  const std::optional<double> analytic = sweep.analytic.s1 ? sweep.analytic.s1 : sweep.analytic.s2;
  if (sweep.limit_case) {
    out.warnings.push_back("limit case applies: every cusp exponent is admissible");
  } else if (analytic) {
    if (!sweep.frontier) {
      fail(out, "no frontier found in the sweep range");
    } else {
      const double gap = std::abs(*sweep.frontier - *analytic);
      out.report["frontier_gap"] = gap;
      if (gap > cfg.sweep.step) fail(out, "frontier " + std::to_string(*sweep.frontier) +
                                              " differs from the analytic threshold " +
                                              std::to_string(*analytic));
    }
  } else {
    out.warnings.push_back("no analytic threshold for these (n, p, q)");
  }
  emit(out, cfg, "admissibility_sweep");
  return out;
}

CommandOutcome run_command(const RunConfig& cfg) {
  std::error_code ec;
  std::filesystem::create_directories(cfg.out, ec);
  if (ec) throw ConfigError("config.out: cannot create '" + cfg.out.string() + "': " + ec.message());
  if (cfg.command == "lipschitzify") return cmd_lipschitzify(cfg);
  if (cfg.command == "transform-verify") return cmd_transform_verify(cfg);
  if (cfg.command == "extend-verify") return cmd_extend_verify(cfg);
  if (cfg.command == "admissibility-sweep") return cmd_admissibility_sweep(cfg);
  if (cfg.command.empty()) throw ConfigError("config.command: missing (use --command or the config)");
  throw ConfigError("config.command: unknown command '" + cfg.command + "'");
}

}  // namespace cuspext
