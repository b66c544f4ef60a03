#include "larmor/scenario.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <thread>

namespace larmor {

using nlohmann::json;

BarrierProfile ScenarioConfig::profile() const {
  switch (kind) {
    case Kind::Rectangular:
      return BarrierProfile::rectangular(U0, d);
    case Kind::Piecewise:
      return BarrierProfile::piecewise(segments);
    case Kind::Sampled:
      return BarrierProfile::sampled(sample_x, sample_U);
  }
  throw ConfigError("barrier.kind: unknown kind");
}

PiecewiseBarrier ScenarioConfig::barrier() const {
  return profile().exact_or_discretized(n_segments);
}

namespace {

double require_number(const json& obj, const char* section, const char* key) {
  if (!obj.contains(key))
    throw ConfigError(std::string(section) + "." + key + ": missing");
  const json& v = obj.at(key);
  if (!v.is_number())
    throw ConfigError(std::string(section) + "." + key + ": must be a number");
  return v.get<double>();
}

double number_or(const json& obj, const char* section, const char* key,
                 double fallback) {
  if (!obj.contains(key)) return fallback;
  return require_number(obj, section, key);
}

}  // namespace

ScenarioConfig parse_config(const json& doc) {
  if (!doc.is_object()) throw ConfigError("config root must be an object");
  ScenarioConfig cfg;

  if (!doc.contains("particle")) throw ConfigError("particle: missing");
  const json& particle = doc.at("particle");
  cfg.E = require_number(particle, "particle", "E");
  cfg.m = number_or(particle, "particle", "m", 1.0);
  if (!(cfg.m > 0.0)) throw ConfigError("particle.m: must be positive");
  if (!(cfg.E > cfg.m))
    throw ConfigError("particle.E: must exceed the rest energy m (natural units)");

  if (doc.contains("field"))
    cfg.V = number_or(doc.at("field"), "field", "V", 0.0);
  if (cfg.V < 0.0) throw ConfigError("field.V: must be non-negative");

  if (doc.contains("spin")) {
    const json& spin = doc.at("spin");
    cfg.theta = number_or(spin, "spin", "theta", cfg.theta);
    cfg.phi = number_or(spin, "spin", "phi", cfg.phi);
    if (cfg.theta < 0.0 || cfg.theta > M_PI)
      throw ConfigError("spin.theta: must lie in [0, pi]");
  }

  if (doc.contains("numerics")) {
    const json& num = doc.at("numerics");
    const double n = number_or(num, "numerics", "n_segments",
                               static_cast<double>(cfg.n_segments));
    if (!(n >= 1.0)) throw ConfigError("numerics.n_segments: must be >= 1");
    cfg.n_segments = static_cast<std::size_t>(n);
    cfg.fd_step = number_or(num, "numerics", "fd_step", cfg.fd_step);
    if (!(cfg.fd_step > 0.0)) throw ConfigError("numerics.fd_step: must be positive");
    cfg.unitarity_tol =
        number_or(num, "numerics", "unitarity_tol", cfg.unitarity_tol);
  }

  if (!doc.contains("barrier")) throw ConfigError("barrier: missing");
  const json& barrier = doc.at("barrier");
  const std::string kind = barrier.value("kind", "");
  if (kind == "rectangular") {
    cfg.kind = ScenarioConfig::Kind::Rectangular;
    cfg.U0 = require_number(barrier, "barrier", "U0");
    cfg.d = require_number(barrier, "barrier", "d");
    if (!(cfg.U0 > 0.0)) throw ConfigError("barrier.U0: must be positive");
    if (!(cfg.d > 0.0)) throw ConfigError("barrier.d: must be positive");
  } else if (kind == "piecewise") {
    cfg.kind = ScenarioConfig::Kind::Piecewise;
    if (!barrier.contains("segments") || !barrier.at("segments").is_array() ||
        barrier.at("segments").empty())
      throw ConfigError("barrier.segments: must be a non-empty array of [length, height]");
    for (const json& s : barrier.at("segments")) {
      if (!s.is_array() || s.size() != 2 || !s[0].is_number() || !s[1].is_number())
        throw ConfigError("barrier.segments: entries must be [length, height] pairs");
      const double len = s[0].get<double>();
      const double h = s[1].get<double>();
      if (!(len > 0.0)) throw ConfigError("barrier.segments: lengths must be positive");
      if (!std::isfinite(h)) throw ConfigError("barrier.segments: heights must be finite");
      cfg.segments.push_back(Segment{len, h});
    }
  } else if (kind == "sampled") {
    cfg.kind = ScenarioConfig::Kind::Sampled;
    if (!barrier.contains("points") || !barrier.at("points").is_array() ||
        barrier.at("points").size() < 2)
      throw ConfigError("barrier.points: must be an array of >= 2 [x, U] pairs");
    for (const json& p : barrier.at("points")) {
      if (!p.is_array() || p.size() != 2 || !p[0].is_number() || !p[1].is_number())
        throw ConfigError("barrier.points: entries must be [x, U] pairs");
      cfg.sample_x.push_back(p[0].get<double>());
      cfg.sample_U.push_back(p[1].get<double>());
    }
    for (std::size_t i = 1; i < cfg.sample_x.size(); ++i)
      if (!(cfg.sample_x[i] > cfg.sample_x[i - 1]))
        throw ConfigError("barrier.points: x values must strictly increase");
  } else {
    throw ConfigError("barrier.kind: must be rectangular, piecewise or sampled");
  }
  return cfg;
}

ScenarioConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config file not readable: " + path);
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  return parse_config(doc);
}

OutputRecord compute_record(const ScenarioConfig& config, double axis_value) {
  const PiecewiseBarrier barrier = config.barrier();

  OutputRecord rec;
  rec.axis_value = axis_value;
  rec.E = config.E;
  rec.m = config.m;
  rec.V = config.V;
  rec.theta = config.theta;
  rec.phi = config.phi;
  rec.n_segments = barrier.segments.size();

  const ScatteringResult zero = scatter_channel(barrier, config.E, config.m);
  rec.T = zero.T;
  rec.R = zero.R;
  rec.alpha = zero.alpha;
  rec.beta = zero.beta;
  rec.unitarity_residual = zero.unitarity_residual();

  const ClockTimes clocks = clock_times(barrier, config.E, config.m, config.fd_step);
  rec.tau_T = clocks.tau_T;
  rec.tau_R = clocks.tau_R;
  rec.tau_L = clocks.tau_L;
  rec.tau_D = clocks.tau_D;
  rec.tau_free = free_traversal_time(config.E, barrier.total_length(), config.m);

  const SpinOrientation orientation{config.theta, config.phi};
  const ChannelPair pair = scatter_spin(barrier, config.E, config.m, config.V);
  const SpinVector sv = summed_spin(pair, orientation, zero.f0);
  rec.s1 = sv.s1;
  rec.s2 = sv.s2;
  rec.s3 = sv.s3;

  rec.converged =
      clocks.converged && rec.unitarity_residual < config.unitarity_tol;
  return rec;
}

std::string csv_header() {
  return "axis_value,E,m,V,theta,phi,n_segments,T_re,T_im,R_re,R_im,alpha,beta,"
         "tau_T,tau_R,tau_L,tau_D,tau_free,s1,s2,s3,unitarity_residual,converged";
}

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

std::string csv_row(const OutputRecord& r) {
  std::string row;
  row += fmt(r.axis_value);
  for (double v : {r.E, r.m, r.V, r.theta, r.phi}) row += "," + fmt(v);
  row += "," + std::to_string(r.n_segments);
  for (double v : {r.T.real(), r.T.imag(), r.R.real(), r.R.imag(), r.alpha,
                   r.beta, r.tau_T, r.tau_R, r.tau_L, r.tau_D, r.tau_free,
                   r.s1, r.s2, r.s3, r.unitarity_residual})
    row += "," + fmt(v);
  row += r.converged ? ",1" : ",0";
  return row;
}

json record_to_json(const OutputRecord& r) {
  return json{{"axis_value", r.axis_value},
              {"E", r.E},
              {"m", r.m},
              {"V", r.V},
              {"theta", r.theta},
              {"phi", r.phi},
              {"n_segments", r.n_segments},
              {"T_re", r.T.real()},
              {"T_im", r.T.imag()},
              {"R_re", r.R.real()},
              {"R_im", r.R.imag()},
              {"alpha", r.alpha},
              {"beta", r.beta},
              {"tau_T", r.tau_T},
              {"tau_R", r.tau_R},
              {"tau_L", r.tau_L},
              {"tau_D", r.tau_D},
              {"tau_free", r.tau_free},
              {"s1", r.s1},
              {"s2", r.s2},
              {"s3", r.s3},
              {"unitarity_residual", r.unitarity_residual},
              {"converged", r.converged}};
}

SweepSpec::Axis SweepSpec::parse_axis(const std::string& name) {
  if (name == "E") return Axis::E;
  if (name == "d") return Axis::d;
  if (name == "U0") return Axis::U0;
  if (name == "V") return Axis::V;
  if (name == "n_segments") return Axis::NSegments;
  throw ConfigError("sweep axis must be one of E, d, U0, V, n_segments");
}

std::vector<double> SweepSpec::values() const {
  if (count < 2) throw ConfigError("sweep count must be >= 2");
  if (!(start < stop)) throw ConfigError("sweep start must be < stop");
  if (log_spacing && !(start > 0.0))
    throw ConfigError("log-spaced sweep needs start > 0");
  std::vector<double> vals(count);
  for (std::size_t i = 0; i < count; ++i) {
    const double t = static_cast<double>(i) / static_cast<double>(count - 1);
    vals[i] = log_spacing
                  ? start * std::pow(stop / start, t)
                  : start + t * (stop - start);
  }
  return vals;
}

ScenarioConfig apply_axis(const ScenarioConfig& base, SweepSpec::Axis axis,
                          double value) {
  ScenarioConfig cfg = base;
  switch (axis) {
    case SweepSpec::Axis::E:
      cfg.E = value;
      if (!(cfg.E > cfg.m)) throw ConfigError("sweep E values must exceed m");
      break;
    case SweepSpec::Axis::d:
      if (cfg.kind != ScenarioConfig::Kind::Rectangular)
        throw ConfigError("d sweep requires a rectangular barrier");
      cfg.d = value;
      break;
    case SweepSpec::Axis::U0:
      if (cfg.kind != ScenarioConfig::Kind::Rectangular)
        throw ConfigError("U0 sweep requires a rectangular barrier");
      cfg.U0 = value;
      break;
    case SweepSpec::Axis::V:
      cfg.V = value;
      break;
    case SweepSpec::Axis::NSegments:
      cfg.n_segments = static_cast<std::size_t>(std::lround(value));
      if (cfg.n_segments < 1) throw ConfigError("n_segments sweep values must be >= 1");
      break;
  }
  return cfg;
}

std::vector<OutputRecord> run_sweep(const ScenarioConfig& base,
                                    const SweepSpec& spec, unsigned threads) {
  const std::vector<double> vals = spec.values();
  std::vector<OutputRecord> rows(vals.size());

  if (threads == 0) {
    if (const char* env = std::getenv("LARMOR_THREADS"))
      threads = static_cast<unsigned>(std::max(1, std::atoi(env)));
    else
      threads = std::max(1u, std::thread::hardware_concurrency());
  }
  threads = std::min<unsigned>(threads, vals.size());

  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (std::size_t i = next.fetch_add(1); i < vals.size();
         i = next.fetch_add(1)) {
      try {
        rows[i] = compute_record(apply_axis(base, spec.axis, vals[i]), vals[i]);
      } catch (const std::exception&) {
        // Per-point failure: record the inputs, NaN the results, keep going.
        OutputRecord rec{};
        const double nan = std::numeric_limits<double>::quiet_NaN();
        rec.axis_value = vals[i];
        rec.E = base.E;
        rec.m = base.m;
        rec.V = base.V;
        rec.theta = base.theta;
        rec.phi = base.phi;
        rec.n_segments = base.n_segments;
        rec.T = rec.R = Complex(nan, nan);
        rec.alpha = rec.beta = nan;
        rec.tau_T = rec.tau_R = rec.tau_L = rec.tau_D = rec.tau_free = nan;
        rec.s1 = rec.s2 = rec.s3 = nan;
        rec.unitarity_residual = nan;
        rec.converged = false;
        rows[i] = rec;
      }
    }
  };

  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
  }
  return rows;
}

}  // namespace larmor
