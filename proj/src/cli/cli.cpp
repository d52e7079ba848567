#include "locmom/cli.hpp"

#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "locmom/classical.hpp"
#include "locmom/dynamics.hpp"
#include "locmom/error.hpp"
#include "locmom/io.hpp"
#include "locmom/local_moments.hpp"
#include "locmom/phase_space.hpp"
#include "locmom/spectral.hpp"
#include "locmom/states.hpp"

namespace locmom::cli {
namespace {

using ojson = nlohmann::ordered_json;

constexpr double kDecompositionTolerance = 1e-8;

double parse_real(const std::string& field, const std::string& text) {
  const char* begin = text.c_str();
  char* end = nullptr;
  errno = 0;
  const double v = std::strtod(begin, &end);
  if (text.empty() || end != begin + text.size() || errno == ERANGE || !std::isfinite(v))
    throw InvalidArgument(field, "expected a finite number, got '" + text + "'");
  return v;
}

int parse_int(const std::string& field, const std::string& text) {
  const char* begin = text.c_str();
  char* end = nullptr;
  errno = 0;
  const long v = std::strtol(begin, &end, 10);
  if (text.empty() || end != begin + text.size() || errno == ERANGE || v < INT32_MIN || v > INT32_MAX)
    throw InvalidArgument(field, "expected an integer, got '" + text + "'");
  return static_cast<int>(v);
}

template <class T>
T json_field(const nlohmann::json& j, const char* key) {
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw InvalidArgument(key, std::string("config key '") + key + "' has the wrong type");
  }
}

/// Raw flag values, converted only after the config file has been applied.
struct Flags {
  std::optional<std::string> config, grid_n, q_min, q_max, hbar, mass, state, observable, definition,
      order, format, out, mask_eps, kind, potential, dt, steps, stride, export_prefix;
};

void add_flags(CLI::App& app, Flags& f) {
  app.add_option("--config", f.config, "JSON config file; flags override its values");
  app.add_option("--grid-n", f.grid_n, "number of grid points (even, >= 8)");
  app.add_option("--q-min", f.q_min, "left edge of the position window");
  app.add_option("--q-max", f.q_max, "right edge of the position window");
  app.add_option("--hbar", f.hbar, "value of hbar");
  app.add_option("--mass", f.mass, "particle mass");
  app.add_option("--state", f.state, "state recipe, e.g. gaussian(s=1,k0=2,q0=0)");
  app.add_option("--observable", f.observable, "p or q");
  app.add_option("--definition", f.definition, "S, C, MH, W or all");
  app.add_option("--order", f.order, "moment order 1..4 or 'variance'");
  app.add_option("--format", f.format, "csv, json or binary");
  app.add_option("--out", f.out, "output path (default stdout)");
  app.add_option("--mask-eps", f.mask_eps, "relative density threshold of the mask");
  app.add_option("--kind", f.kind, "distribution kind: wigner, mh or classical");
  app.add_option("--potential", f.potential, "free, harmonic:OMEGA or barrier:H,W,C");
  app.add_option("--dt", f.dt, "time step");
  app.add_option("--steps", f.steps, "number of steps");
  app.add_option("--stride", f.stride, "steps between stored snapshots");
  app.add_option("--export", f.export_prefix, "path prefix for trace CSV exports");
}

RunConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("config", "cannot read config file '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument("config", std::string("config file is not valid JSON: ") + e.what());
  }
  return RunConfig::from_json(j);
}

void apply_flags(const Flags& f, RunConfig& c) {
  if (f.grid_n) c.grid_n = parse_int("grid-n", *f.grid_n);
  if (f.q_min) c.q_min = parse_real("q-min", *f.q_min);
  if (f.q_max) c.q_max = parse_real("q-max", *f.q_max);
  if (f.hbar) c.hbar = parse_real("hbar", *f.hbar);
  if (f.mass) c.mass = parse_real("mass", *f.mass);
  if (f.state) c.state = *f.state;
  if (f.observable) c.observable = *f.observable;
  if (f.definition) c.definition = *f.definition;
  if (f.order) c.order = *f.order;
  if (f.format) c.format = *f.format;
  if (f.out) c.out = *f.out;
  if (f.mask_eps) c.mask_eps = parse_real("mask-eps", *f.mask_eps);
  if (f.kind) c.kind = *f.kind;
  if (f.potential) c.potential = *f.potential;
  if (f.dt) c.dt = parse_real("dt", *f.dt);
  if (f.steps) c.steps = parse_int("steps", *f.steps);
  if (f.stride) c.stride = parse_int("stride", *f.stride);
  if (f.export_prefix) c.export_prefix = *f.export_prefix;
}

GridSpec grid_of(const RunConfig& c) { return make_grid(c.grid_n, c.q_min, c.q_max, c.hbar, c.mass); }

std::vector<Definition> definitions_of(const RunConfig& c) {
  if (c.definition == "all") return {Definition::S, Definition::C, Definition::MH, Definition::W};
  const auto d = parse_definition(c.definition);
  if (d == Definition::classical)
    throw InvalidArgument("definition", "use the distribution command with --kind classical");
  return {d};
}

MomentOrder order_of(const RunConfig& c) {
  if (c.order == "variance") return MomentOrder::variance();
  const int n = parse_int("order", c.order);
  if (n < 1 || n > kMaxObservablePower)
    throw InvalidArgument("order", "order must be 1..4 or 'variance'");
  return MomentOrder{n};
}

/// Writes to --out when given, stdout otherwise.
class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback, bool binary = false) {
    if (path.empty()) {
      os_ = &fallback;
      return;
    }
    file_ = std::make_unique<std::ofstream>(path, binary ? std::ios::binary : std::ios::out);
    if (!*file_) throw InvalidArgument("out", "cannot open '" + path + "' for writing");
    os_ = file_.get();
  }
  std::ostream& stream() { return *os_; }

 private:
  std::unique_ptr<std::ofstream> file_;
  std::ostream* os_ = nullptr;
};

RealProfile position_power_profile(const Wavefunction& psi, int n, double mask_eps) {
  std::vector<double> v(static_cast<std::size_t>(psi.size()));
  for (int j = 0; j < psi.size(); ++j) v[j] = std::pow(psi.grid().q(j), n);
  auto prof = RealProfile::from_values(psi.grid(), std::move(v));
  prof.mask = support_mask(psi, mask_eps);
  return prof;
}

LocalProfile momentum_profile(const Wavefunction& psi, Definition def, MomentOrder order,
                              double eps) {
  const MomentumPower p1{1};
  switch (def) {
    case Definition::S:
      return order.is_variance() ? local_variance_S(psi, p1, eps)
                                 : local_value_S(psi, MomentumPower{order.n}, eps);
    case Definition::C:
      if (order.is_variance()) return local_variance_C(psi, p1, eps);
      if (order.n == 1) return {Definition::C, order, local_value_S(psi, p1, eps).profile};
      if (order.n == 2) {
        auto prof = sandwich_density(psi, p1);
        prof.mask = support_mask(psi, eps);
        for (int j = 0; j < prof.size(); ++j)
          prof.values[j] = prof.defined(j) ? prof.values[j] / std::norm(psi[j]) : 0.0;
        return {Definition::C, order, std::move(prof)};
      }
      throw InvalidArgument("order", "the C definition supports orders 1, 2 and variance");
    case Definition::MH:
    case Definition::W: {
      const auto f = def == Definition::W ? wigner_transform(psi) : margenau_hill_transform(psi);
      return order.is_variance() ? phase_space_local_variance(f, psi, eps)
                                 : phase_space_local_moment(f, psi, order.n, eps);
    }
    case Definition::classical: break;
  }
  throw InvalidArgument("definition", "unsupported definition");
}

LocalProfile position_profile(const Wavefunction& psi, Definition def, MomentOrder order,
                              double eps) {
  if (order.is_variance()) {
    auto prof = position_power_profile(psi, 1, eps);
    for (auto& v : prof.values) v = 0.0;
    return {def, order, std::move(prof)};
  }
  return {def, order, position_power_profile(psi, order.n, eps)};
}

int cmd_moments(const RunConfig& c, std::ostream& out) {
  if (c.format == "binary") throw InvalidArgument("format", "moments supports csv and json");
  const auto grid = grid_of(c);
  const auto psi = synthesize(parse_recipe(c.state), grid);
  const auto order = order_of(c);
  std::vector<LocalProfile> profiles;
  for (auto def : definitions_of(c))
    profiles.push_back(c.observable == "p" ? momentum_profile(psi, def, order, c.mask_eps)
                                           : position_profile(psi, def, order, c.mask_eps));
  Sink sink(c.out, out);
  if (c.format == "csv") {
    io::write_profiles_csv(sink.stream(), profiles);
  } else {
    ojson j;
    j["config"] = c.to_json();
    j["profiles"] = io::profiles_json(profiles);
    sink.stream() << j.dump(2) << '\n';
  }
  return 0;
}

int cmd_decompose(const RunConfig& c, std::ostream& out) {
  if (c.format == "binary") throw InvalidArgument("format", "decompose supports csv and json");
  const auto grid = grid_of(c);
  const auto psi = synthesize(parse_recipe(c.state), grid);
  const auto order = order_of(c);
  const int n = order.is_variance() ? 1 : order.n;
  const ObservableSpec a = c.observable == "p"
                               ? ObservableSpec{MomentumPower{n}}
                               : ObservableSpec{PositionFunction{position_power_profile(psi, n, 0).values}};
  std::vector<VarianceDecomposition> records;
  for (auto def : definitions_of(c)) records.push_back(variance_decomposition(psi, a, def, c.mask_eps));

  Sink sink(c.out, out);
  if (c.format == "csv") {
    sink.stream() << "definition,avg_local_variance,variance_of_local_avg,total,direct_total,residual\n";
    for (const auto& r : records)
      sink.stream() << to_string(r.definition) << ',' << io::format_double(r.avg_local_variance) << ','
                    << io::format_double(r.variance_of_local_avg) << ',' << io::format_double(r.total)
                    << ',' << io::format_double(r.direct_total) << ','
                    << io::format_double(r.residual()) << '\n';
  } else {
    ojson j;
    j["config"] = c.to_json();
    j["records"] = ojson::array();
    for (const auto& r : records) j["records"].push_back(io::decomposition_json(r));
    sink.stream() << j.dump(2) << '\n';
  }
  for (const auto& r : records)
    if (!(r.residual() < kDecompositionTolerance))
      throw SelfCheckError("decomposition residual " + io::format_double(r.residual()) + " for " +
                           to_string(r.definition) + " exceeds 1e-8");
  return 0;
}

int cmd_distribution(const RunConfig& c, std::ostream& out) {
  if (c.format == "json") throw InvalidArgument("format", "distribution data is csv or binary");
  if (c.out.empty()) throw InvalidArgument("out", "distribution needs --out for the data file");
  const auto grid = grid_of(c);
  const auto recipe = parse_recipe(c.state);
  const auto kind = parse_distribution_kind(c.kind);
  QuasiDistribution f;
  switch (kind) {
    case DistributionKind::weyl_wigner: f = wigner_transform(synthesize(recipe, grid)); break;
    case DistributionKind::margenau_hill: f = margenau_hill_transform(synthesize(recipe, grid)); break;
    case DistributionKind::classical: f = as_quasi_distribution(wigner_as_classical(recipe, grid)); break;
  }
  {
    Sink sink(c.out, out, c.format == "binary");
    if (c.format == "binary")
      io::write_distribution_binary(sink.stream(), f);
    else
      io::write_distribution_csv(sink.stream(), f);
  }
  ojson j;
  j["config"] = c.to_json();
  j["data"] = c.out;
  j["metadata"] = io::distribution_metadata(f);
  out << j.dump(2) << '\n';
  return 0;
}

int cmd_evolve(const RunConfig& c, std::ostream& out) {
  if (c.format == "binary") throw InvalidArgument("format", "the evolve report is JSON");
  const auto grid = grid_of(c);
  const auto psi0 = synthesize(parse_recipe(c.state), grid);
  const auto v = parse_potential(c.potential, grid);
  const auto trace = split_step_propagate(psi0, v, {c.dt, c.steps, c.stride});

  const double e0 = expected_energy(psi0, v);
  double norm_drift = 0.0;
  double energy_drift = 0.0;
  for (std::size_t s = 0; s < trace.size(); ++s) {
    const auto psi = trace.snapshot(s);
    norm_drift = std::max(norm_drift, std::abs(psi.norm_squared() - psi0.norm_squared()));
    energy_drift = std::max(energy_drift, std::abs(expected_energy(psi, v) - e0));
  }
  const double q_initial = mean_position(psi0);
  const double q_final = mean_position(trace.snapshot(trace.size() - 1));
  const auto conv = convergence_study(psi0, v, c.dt, c.steps);

  ojson j;
  j["config"] = c.to_json();
  j["potential"] = v.label;
  j["final_time"] = conv.final_time;
  j["snapshots"] = trace.size();
  j["norm_drift"] = norm_drift;
  j["energy_initial"] = e0;
  j["energy_drift_relative"] = e0 != 0 ? energy_drift / std::abs(e0) : energy_drift;
  j["mean_q_initial"] = q_initial;
  j["mean_q_final"] = q_final;
  j["mean_q_sign_flip"] = q_initial * q_final < 0;
  j["continuity_residual"] = conv.continuity;
  j["continuity_residual_half_dt"] = conv.continuity_half;
  j["continuity_ratio"] = conv.continuity_ratio();
  j["euler_residual_W"] = conv.euler;
  j["euler_residual_W_half_dt"] = conv.euler_half;
  j["euler_ratio"] = conv.euler_ratio();
  j["state_convergence_ratio"] = conv.state_ratio;
  {
    const auto k = kinetic_energy_densities(trace.snapshot(trace.size() - 1));
    double mh_gap = 0.0;
    double c_gap = 0.0;
    for (int i = 0; i < grid.n; ++i) {
      mh_gap = std::max(mh_gap, std::abs(k[1].profile.values[i] - k[0].profile.values[i]));
      c_gap = std::max(c_gap, std::abs(k[2].profile.values[i] - k[0].profile.values[i]));
    }
    j["final_kinetic_density"] = {{"integral_W", integrate(k[0].profile)},
                                  {"integral_MH", integrate(k[1].profile)},
                                  {"integral_C", integrate(k[2].profile)},
                                  {"max_gap_MH_W", mh_gap},
                                  {"max_gap_C_W", c_gap}};
  }

  if (!c.export_prefix.empty()) {
    auto files = ojson::array();
    for (auto q : {io::TraceQuantity::density, io::TraceQuantity::mean_p, io::TraceQuantity::variance_W}) {
      const auto path = c.export_prefix + "_" + io::to_string(q) + ".csv";
      std::ofstream f(path);
      if (!f) throw InvalidArgument("export", "cannot open '" + path + "' for writing");
      io::write_trace_csv(f, trace, q, c.mask_eps);
      files.push_back(path);
    }
    j["exports"] = std::move(files);
  }
  Sink sink(c.out, out);
  sink.stream() << j.dump(2) << '\n';
  return 0;
}

void report(std::ostream& err, const char* kind, const std::string& field, const std::string& message) {
  ojson j;
  j["error"] = kind;
  if (!field.empty()) j["field"] = field;
  j["message"] = message;
  err << j.dump() << '\n';
}

}  // namespace

ojson RunConfig::to_json() const {
  ojson j;
  j["command"] = command;
  j["grid_n"] = grid_n;
  j["q_min"] = q_min;
  j["q_max"] = q_max;
  j["hbar"] = hbar;
  j["mass"] = mass;
  j["state"] = state;
  j["observable"] = observable;
  j["definition"] = definition;
  j["order"] = order;
  j["format"] = format;
  j["out"] = out;
  j["mask_eps"] = mask_eps;
  j["kind"] = kind;
  j["potential"] = potential;
  j["dt"] = dt;
  j["steps"] = steps;
  j["stride"] = stride;
  j["export"] = export_prefix;
  return j;
}

RunConfig RunConfig::from_json(const nlohmann::json& j, RunConfig c) {
  if (!j.is_object()) throw InvalidArgument("config", "config must be a JSON object");
  static const std::map<std::string, int> known = {
      {"command", 0}, {"grid_n", 0}, {"q_min", 0}, {"q_max", 0},     {"hbar", 0},
      {"mass", 0},    {"state", 0},  {"observable", 0}, {"definition", 0}, {"order", 0},
      {"format", 0},  {"out", 0},    {"mask_eps", 0},   {"kind", 0},       {"potential", 0},
      {"dt", 0},      {"steps", 0},  {"stride", 0},     {"export", 0}};
  for (const auto& [key, value] : j.items())
    if (!known.contains(key)) throw InvalidArgument(key, "unknown config key '" + key + "'");
  auto set = [&](const char* key, auto& field) {
    if (j.contains(key)) field = json_field<std::decay_t<decltype(field)>>(j, key);
  };
  set("command", c.command);
  set("grid_n", c.grid_n);
  set("q_min", c.q_min);
  set("q_max", c.q_max);
  set("hbar", c.hbar);
  set("mass", c.mass);
  set("state", c.state);
  set("observable", c.observable);
  set("definition", c.definition);
  if (j.contains("order")) {
    // a bare number is accepted for convenience
    c.order = j["order"].is_number_integer() ? std::to_string(j["order"].get<int>())
                                             : json_field<std::string>(j, "order");
  }
  set("format", c.format);
  set("out", c.out);
  set("mask_eps", c.mask_eps);
  set("kind", c.kind);
  set("potential", c.potential);
  set("dt", c.dt);
  set("steps", c.steps);
  set("stride", c.stride);
  set("export", c.export_prefix);
  return c;
}

void RunConfig::validate() {
  static const std::map<std::string, int> commands = {
      {"moments", 0}, {"decompose", 0}, {"distribution", 0}, {"evolve", 0}};
  if (!commands.contains(command)) throw InvalidArgument("command", "unknown command '" + command + "'");
  const auto grid = grid_of(*this);
  state = format_recipe(parse_recipe(state));
  if (observable != "p" && observable != "q")
    throw InvalidArgument("observable", "observable must be 'p' or 'q'");
  definitions_of(*this);
  order_of(*this);
  if (format != "csv" && format != "json" && format != "binary")
    throw InvalidArgument("format", "format must be csv, json or binary");
  if (!(mask_eps > 0 && mask_eps < 1)) throw InvalidArgument("mask-eps", "mask epsilon must be in (0, 1)");
  parse_distribution_kind(kind);
  parse_potential(potential, grid);
  if (!(dt > 0) || !std::isfinite(dt)) throw InvalidArgument("dt", "dt must be positive");
  if (steps < 1) throw InvalidArgument("steps", "steps must be positive");
  if (stride < 1) throw InvalidArgument("stride", "stride must be positive");
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Local moments of 1D wavefunctions under competing quantum definitions", "locmom"};
  app.require_subcommand(1);
  Flags flags;
  const std::vector<std::pair<const char*, const char*>> commands = {
      {"moments", "local moment or variance profiles"},
      {"decompose", "law-of-total-variance split per definition"},
      {"distribution", "Wigner, Margenau-Hill or classical phase-space distribution"},
      {"evolve", "split-step propagation with hydrodynamic residual report"}};
  for (const auto& [name, help] : commands) add_flags(*app.add_subcommand(name, help), flags);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return 0;
    }
    report(err, "invalid_argument", "args", e.what());
    return 2;
  }

  try {
    RunConfig c = flags.config ? load_config_file(*flags.config) : RunConfig{};
    c.command = app.get_subcommands().front()->get_name();
    apply_flags(flags, c);
    c.validate();
    if (c.command == "moments") return cmd_moments(c, out);
    if (c.command == "decompose") return cmd_decompose(c, out);
    if (c.command == "distribution") return cmd_distribution(c, out);
    return cmd_evolve(c, out);
  } catch (const InvalidArgument& e) {
    report(err, "invalid_argument", e.field(), e.what());
    return 2;
  } catch (const PreconditionError& e) {
    report(err, "precondition", "", e.what());
    return 3;
  } catch (const SelfCheckError& e) {
    report(err, "self_check", "", e.what());
    return 4;
  } catch (const std::exception& e) {
    report(err, "internal", "", e.what());
    return 4;
  }
}

}  // namespace locmom::cli
