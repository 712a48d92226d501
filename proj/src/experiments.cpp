#include "horolab/experiments.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

#include "horolab/asymptotics.hpp"

namespace horolab {

using json = nlohmann::ordered_json;

namespace {

const char* const kExperiments[] = {"volume", "orbit-count", "busemann", "ps-measure",
                                    "margulis-map", "entropy", "rigidity"};

[[noreturn]] void usage(const std::string& what) { throw Error(ErrorKind::Usage, what); }

Point point_of(const std::array<double, 2>& p) { return {p[0], p[1]}; }

struct Context {
  const ExperimentConfig& config;
  std::shared_ptr<const SurfaceGroup> group;
  SurfaceMetric metric;
};

Context make_context(const ExperimentConfig& config) {
  auto group = std::make_shared<const SurfaceGroup>(build_genus2_group());
  SurfaceMetric metric = config.metric == "perturbed"
                             ? SurfaceMetric::perturbed(group, {config.eps, config.bump_radius, Point{}})
                             : SurfaceMetric::hyperbolic();
  return {config, std::move(group), std::move(metric)};
}

int stride_for(double dt) { return std::max(1, static_cast<int>(std::lround(0.1 / dt))); }

json series_json(const GrowthSeries& s) {
  json arr = json::array();
  for (const auto& x : s.samples) arr.push_back({{"t", x.t}, {"value", x.value}});
  return arr;
}

json fit_json(const EntropyEstimate& e) {
  return {{"h", e.h}, {"window", {e.t1, e.t2}}, {"fit_residual", e.fit_residual}, {"samples", e.samples}};
}

// h is exact on hyperbolic-equivalent metrics and fitted to the sphere
// series otherwise.
struct EntropyChoice {
  double h;
  std::string source;
  json fit;
};

EntropyChoice entropy_for(const Context& ctx, const VolumeSweep* sweep) {
  if (ctx.metric.hyperbolic_equivalent()) return {1.0, "exact", nullptr};
  VolumeSweep local;
  if (sweep == nullptr) {
    local = volume_sweep(ctx.metric, point_of(ctx.config.point), ctx.config.tmax, ctx.config.ndirs, ctx.config.dt,
                         stride_for(ctx.config.dt));
    sweep = &local;
  }
  const EntropyEstimate e = entropy_fit(sphere_series(*sweep));
  return {e.h, "sphere-fit", fit_json(e)};
}

json entropy_json(const EntropyChoice& h) {
  json j = {{"h", h.h}, {"source", h.source}};
  if (!h.fit.is_null()) j["fit"] = h.fit;
  return j;
}

json run_volume(const Context& ctx, json& diagnostics) {
  const auto& c = ctx.config;
  const Point x = point_of(c.point);
  const VolumeSweep sweep = volume_sweep(ctx.metric, x, c.tmax, c.ndirs, c.dt, stride_for(c.dt));
  const EntropyChoice h = entropy_for(ctx, &sweep);
  const MargulisEstimate m = margulis_from_sweep(sweep, x, h.h);
  diagnostics["cauchyGap"] = m.cauchy_gap;
  diagnostics["sphere_series"] = series_json(sphere_series(sweep));
  return {{"series", series_json(ball_series(sweep))},
          {"estimates",
           {{"entropy", entropy_json(h)},
            {"c", m.c},
            {"cauchyGap", m.cauchy_gap},
            {"sphere_mass", m.sphere_mass},
            {"ball_fit", fit_json(entropy_fit(ball_series(sweep)))}}}};
}

json run_orbit_count(const Context& ctx, json& diagnostics) {
  const auto& c = ctx.config;
  const Point x = point_of(c.point);
  const OrbitBall ball = enumerate_orbit(*ctx.group, x, x, c.tmax, {c.margin, c.budget});
  GrowthSeries series;
  series.label = SeriesLabel::OrbitCount;
  for (double t = 1.0; t <= c.tmax + 1e-9; t += 0.5) {
    const auto end = std::upper_bound(ball.entries.begin(), ball.entries.end(), t,
                                      [](double v, const OrbitEntry& e) { return v < e.distance; });
    series.samples.push_back({t, static_cast<double>(end - ball.entries.begin())});
  }
  diagnostics["nodes_visited"] = ball.nodes_visited;
  diagnostics["margin"] = ball.margin;
  diagnostics["orbit_points"] = ball.entries.size();
  const double a = static_cast<double>(ball.entries.size());
  json estimates = {{"a_tmax", a}, {"a_tmax_exp_neg_t", a * std::exp(-c.tmax)}};
  if (series.samples.size() >= 5) {
    const double t_max = series.samples.back().t;
    estimates["entropy"] = fit_json(entropy_fit(series, 0.6 * t_max, t_max));
  }
  return {{"series", series_json(series)}, {"estimates", estimates}};
}

json run_busemann(const Context& ctx, json& diagnostics) {
  const auto& c = ctx.config;
  const Point p = point_of(c.point);
  const Point q = point_of(c.target);
  const BusemannTrace trace = busemann_numeric_trace(ctx.metric, {p, c.angle}, q, {.dt = c.dt});
  json series = json::array();
  for (const auto& [t, v] : trace.sequence) series.push_back({{"t", t}, {"value", v}});
  json estimates = {{"busemann", trace.result.value}, {"xi", trace.result.xi.angle}};
  if (ctx.metric.hyperbolic_equivalent()) {
    const double closed = busemann_closed(trace.result.xi, q, p).value;
    estimates["closed_form"] = closed;
    estimates["abs_difference"] = std::abs(closed - trace.result.value);
  }
  diagnostics["distance_pq"] = hyperbolic_distance(p, q);
  return {{"series", series}, {"estimates", estimates}};
}

void write_atomic(const std::string& path, const std::string& content);

json run_ps_measure(const Context& ctx, json& diagnostics) {
  const auto& c = ctx.config;
  const Point p = point_of(c.point);
  const EntropyChoice h = entropy_for(ctx, nullptr);
  const BoundaryMeasure nu = sphere_measure(ctx.metric, p, c.radius, c.ndirs, h.h, c.dt);
  json series = json::array();
  for (const auto& a : nu.atoms) series.push_back({{"t", a.xi.angle}, {"value", a.weight}});
  json estimates = {{"entropy", entropy_json(h)}, {"mass", nu.mass()}};
  if (ctx.metric.hyperbolic_equivalent()) {
    const BoundaryMeasure nu_q = sphere_measure(ctx.metric, point_of(c.target), c.radius, c.ndirs, h.h, c.dt);
    diagnostics["cocycle_max_log_deviation"] = ps_cocycle_check(nu, nu_q).max_deviation;
  }
  if (!c.dump.empty()) write_atomic(c.dump, measure_to_json(nu));
  return {{"series", series}, {"estimates", estimates}};
}

json run_margulis_map(const Context& ctx, json& diagnostics) {
  const auto& c = ctx.config;
  const EntropyChoice h = entropy_for(ctx, nullptr);
  double half = 0.0;
  for (const auto& v : ctx.group->octagon) half = std::max(half, std::abs(v.u));
  struct Sample {
    Point x;
    MargulisEstimate m;
  };
  std::vector<Sample> samples;
  for (int i = 0; i < c.grid; ++i) {
    for (int j = 0; j < c.grid; ++j) {
      const double u = c.grid == 1 ? 0.0 : -half + 2.0 * half * i / (c.grid - 1);
      const double v = c.grid == 1 ? 0.0 : -half + 2.0 * half * j / (c.grid - 1);
      const Point x{u, v};
      if (!in_open_disk(x)) continue;  // bounding-box corners leave the disk
      const Point reduced = reduce_to_domain(*ctx.group, x).point;
      samples.push_back({x, margulis_c(ctx.metric, reduced, h.h, c.tmax, c.ndirs, c.dt)});
    }
  }
  json map = json::array();
  double worst_gap = 0.0;
  for (const auto& s : samples) {
    map.push_back({{"x", s.x.u}, {"y", s.x.v}, {"c", s.m.c}, {"cauchyGap", s.m.cauchy_gap}});
    worst_gap = std::max(worst_gap, s.m.cauchy_gap / s.m.c);
  }
  // |log c(x) - log c(y)| <= h d(x, y) + 2 * relative Cauchy gap
  double worst_excess = -INFINITY;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    for (std::size_t j = i + 1; j < samples.size(); ++j) {
      const double lhs = std::abs(std::log(samples[i].m.c) - std::log(samples[j].m.c));
      const double rhs = h.h * hyperbolic_distance(samples[i].x, samples[j].x) + 2.0 * worst_gap;
      worst_excess = std::max(worst_excess, lhs - rhs);
    }
  }
  diagnostics["log_lipschitz_worst_excess"] = samples.size() > 1 ? worst_excess : 0.0;
  diagnostics["log_lipschitz_holds"] = samples.size() <= 1 || worst_excess <= 0.0;
  diagnostics["points_skipped"] = c.grid * c.grid - static_cast<int>(samples.size());
  return {{"series", json::array()}, {"estimates", {{"entropy", entropy_json(h)}, {"c_map", map}}}};
}

json run_entropy(const Context& ctx, json& diagnostics) {
  const auto& c = ctx.config;
  const VolumeSweep sweep = volume_sweep(ctx.metric, point_of(c.point), c.tmax, c.ndirs, c.dt, stride_for(c.dt));
  const GrowthSeries sphere = sphere_series(sweep);
  const EntropyEstimate whole = entropy_fit(sphere);
  const EntropyEstimate early = entropy_fit(sphere, 0.6 * c.tmax, 0.8 * c.tmax);
  const EntropyEstimate late = entropy_fit(sphere, 0.8 * c.tmax, c.tmax);
  diagnostics["window_fits"] = {fit_json(early), fit_json(late)};
  diagnostics["window_relative_difference"] = std::abs(early.h - late.h) / late.h;
  diagnostics["ball_fit"] = fit_json(entropy_fit(ball_series(sweep)));
  return {{"series", series_json(sphere)}, {"estimates", {{"entropy", fit_json(whole)}}}};
}

json run_rigidity(const Context& ctx, json& diagnostics) {
  const auto& c = ctx.config;
  const EntropyChoice h = entropy_for(ctx, nullptr);
  const TrUAverage tr = tr_u_average(ctx.metric, *ctx.group, c.geodesics, 20.0, c.seed, c.dt);
  const GaussBonnet gb = gauss_bonnet_check(ctx.metric, *ctx.group);
  const RigidityDefect defect = rigidity_defect(ctx.metric, point_of(c.point), h.h, c.radius, c.ndirs, 20.0, c.dt);
  // Away from constant curvature the w^s-integrals have no identifiable
  // measure; report them as diagnostics.
  const char* status = ctx.metric.hyperbolic_equivalent() ? "exact" : "diagnostic";
  diagnostics["tr_u_range"] = {tr.min_value, tr.max_value};
  diagnostics["comparison_bounds"] = {tr.lower_bound, tr.upper_bound};
  diagnostics["comparison_holds"] = tr.comparison_holds;
  diagnostics["gauss_bonnet_cells"] = gb.cells;
  return {{"series", json::array()},
          {"estimates",
           {{"entropy", entropy_json(h)},
            {"status", status},
            {"tr_u_first", tr.first},
            {"tr_u_second", tr.second},
            {"rigidity_defect", defect.defect},
            {"gauss_bonnet", gb.integral},
            {"volume", gb.volume},
            {"katok_ratio", katok_identity(h.h, gb.volume)}}}};
}

std::string number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_atomic(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  const fs::path tmp = target.string() + ".partial";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorKind::Io, "cannot open " + tmp.string() + " for writing");
    out << content;
    out.flush();
    if (!out) {
      std::error_code ec;
      fs::remove(tmp, ec);
      throw Error(ErrorKind::Io, "write failed for " + tmp.string());
    }
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw Error(ErrorKind::Io, "cannot rename output to " + path);
  }
}

}  // namespace

void validate(const ExperimentConfig& c) {
  if (std::find(std::begin(kExperiments), std::end(kExperiments), c.experiment) == std::end(kExperiments)) {
    usage("unknown experiment '" + c.experiment + "'");
  }
  if (c.metric != "hyperbolic" && c.metric != "perturbed") usage("--metric must be hyperbolic or perturbed");
  if (!(c.eps >= 0.0 && c.eps <= 0.1)) usage("--eps must lie in [0, 0.1]");
  if (!(c.bump_radius > 0.0 && c.bump_radius < 1.5)) usage("--bump-radius must lie in (0, 1.5)");
  if (!(c.tmax > 0.0 && c.tmax <= 40.0)) usage("--tmax must lie in (0, 40]");
  if (!(c.radius > 0.0 && c.radius <= 30.0)) usage("--radius must lie in (0, 30]");
  if (c.ndirs < 8 || c.ndirs > 1'000'000) usage("--ndirs must lie in [8, 1e6]");
  if (!(c.dt > 0.0 && c.dt <= 0.1)) usage("--dt must lie in (0, 0.1]");
  if (c.budget < 1) usage("--budget must be positive");
  if (c.format != "json" && c.format != "csv") usage("--format must be json or csv");
  if (!in_open_disk(point_of(c.point))) usage("--point must lie in the open unit disk");
  if (!in_open_disk(point_of(c.target))) usage("--target must lie in the open unit disk");
  if (c.grid < 1 || c.grid > 200) usage("--grid must lie in [1, 200]");
  if (c.geodesics < 1) usage("--geodesics must be positive");
  if (c.experiment == "entropy" && c.tmax / c.dt < 50) usage("entropy needs tmax/dt >= 50");
}

json config_json(const ExperimentConfig& c) {
  return {{"experiment", c.experiment},
          {"metric", {{"kind", c.metric}, {"eps", c.metric == "perturbed" ? c.eps : 0.0}, {"bump_radius", c.bump_radius}}},
          {"tmax", c.tmax},
          {"radius", c.radius},
          {"ndirs", c.ndirs},
          {"dt", c.dt},
          {"seed", c.seed},
          {"budget", c.budget},
          {"margin", c.margin},
          {"point", {c.point[0], c.point[1]}},
          {"target", {c.target[0], c.target[1]}},
          {"angle", c.angle},
          {"grid", c.grid},
          {"geodesics", c.geodesics},
          {"format", c.format},
          {"out", c.out},
          {"dump", c.dump}};
}

json run(const ExperimentConfig& config) {
  validate(config);
  const auto start = std::chrono::steady_clock::now();
  const Context ctx = make_context(config);
  json diagnostics = json::object();
  json body;
  const std::string& e = config.experiment;
  if (e == "volume") body = run_volume(ctx, diagnostics);
  else if (e == "orbit-count") body = run_orbit_count(ctx, diagnostics);
  else if (e == "busemann") body = run_busemann(ctx, diagnostics);
  else if (e == "ps-measure") body = run_ps_measure(ctx, diagnostics);
  else if (e == "margulis-map") body = run_margulis_map(ctx, diagnostics);
  else if (e == "entropy") body = run_entropy(ctx, diagnostics);
  else body = run_rigidity(ctx, diagnostics);

  if (config.timings) {
    const std::chrono::duration<double> wall = std::chrono::steady_clock::now() - start;
    diagnostics["wall_seconds"] = wall.count();
  }
  json report;
  report["config"] = config_json(config);
  report["series"] = std::move(body["series"]);
  report["estimates"] = std::move(body["estimates"]);
  report["diagnostics"] = std::move(diagnostics);
  return report;
}

void emit(const json& report, const ExperimentConfig& config) {
  std::ostringstream text;
  if (config.format == "json") {
    text << report.dump(2) << '\n';
  } else if (config.experiment == "margulis-map") {
    text << "x,y,c\n";
    for (const auto& row : report.at("estimates").at("c_map")) {
      text << number(row.at("x").get<double>()) << ',' << number(row.at("y").get<double>()) << ','
           << number(row.at("c").get<double>()) << '\n';
    }
  } else {
    text << "t,value\n";
    for (const auto& row : report.at("series")) {
      text << number(row.at("t").get<double>()) << ',' << number(row.at("value").get<double>()) << '\n';
    }
  }
  if (config.out.empty()) {
    std::cout << text.str();
  } else {
    write_atomic(config.out, text.str());
  }
}

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Usage:
    case ErrorKind::Domain:
    case ErrorKind::MetricInvalid:
      return 2;
    case ErrorKind::Budget:
      return 4;
    default:
      return 3;
  }
}

}  // namespace horolab
