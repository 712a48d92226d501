// horolab: run one experiment and write its report.

#include <CLI11.hpp>

#include <iostream>

#include "horolab/experiments.hpp"
#include "horolab/fuchsian.hpp"
#include "horolab/parallel.hpp"

namespace {

void add_common(CLI::App* sub, horolab::ExperimentConfig& c, int& workers) {
  sub->add_option("--metric", c.metric, "hyperbolic or perturbed")
      ->check(CLI::IsMember({"hyperbolic", "perturbed"}))
      ->capture_default_str();
  sub->add_option("--eps", c.eps, "bump amplitude for the perturbed metric")->capture_default_str();
  sub->add_option("--bump-radius", c.bump_radius, "bump radius r0 (hyperbolic length)")->capture_default_str();
  sub->add_option("--tmax", c.tmax, "horizon for sweeps and orbit counts")->capture_default_str();
  sub->add_option("--radius", c.radius, "sphere radius R for boundary measures")->capture_default_str();
  sub->add_option("--ndirs", c.ndirs, "directions per basepoint")->capture_default_str();
  sub->add_option("--dt", c.dt, "RK4 step")->capture_default_str();
  sub->add_option("--seed", c.seed, "random seed")->capture_default_str();
  sub->add_option("--budget", c.budget, "orbit search node budget")->capture_default_str();
  sub->add_option("--format", c.format, "json or csv")->check(CLI::IsMember({"json", "csv"}))->capture_default_str();
  sub->add_option("--out", c.out, "output path (default stdout)");
  sub->add_option("--point", c.point, "basepoint x (two coordinates)")->capture_default_str();
  sub->add_option("--target", c.target, "second point q or y")->capture_default_str();
  sub->add_option("--angle", c.angle, "busemann: direction at the basepoint")->capture_default_str();
  sub->add_option("--margin", c.margin, "orbit pruning margin (negative = automatic)")->capture_default_str();
  sub->add_option("--grid", c.grid, "margulis-map grid side")->capture_default_str();
  sub->add_option("--geodesics", c.geodesics, "rigidity: sampled geodesics")->capture_default_str();
  sub->add_option("--dump", c.dump, "ps-measure: also write the measure as JSON");
  sub->add_option("--workers", workers, "worker threads (results do not depend on this)")->capture_default_str();
  sub->add_flag("--timings", c.timings, "include wall-clock time (makes output run-dependent)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical laboratory for volume growth and boundary measures on hyperbolic surfaces"};
  app.require_subcommand(1);
  horolab::ExperimentConfig config;
  int workers = 0;
  const char* descriptions[][2] = {
      {"volume", "sphere/ball volumes and the Margulis ratio c(x)"},
      {"orbit-count", "orbit counts a_t(x, x) for the genus-2 group"},
      {"busemann", "Busemann limit along one geodesic"},
      {"ps-measure", "rescaled sphere measure on the boundary"},
      {"margulis-map", "c(x) on a grid over the octagon"},
      {"entropy", "entropy fits of the sphere series"},
      {"rigidity", "horocycle curvature averages, Gauss-Bonnet, Katok ratio"},
  };
  for (const auto& [name, text] : descriptions) {
    CLI::App* sub = app.add_subcommand(name, text);
    add_common(sub, config, workers);
    sub->callback([&config, n = std::string(name)] { config.experiment = n; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  if (workers > 0) horolab::set_worker_count(static_cast<unsigned>(workers));
  try {
    const auto report = horolab::run(config);
    horolab::emit(report, config);
  } catch (const horolab::BudgetExceeded& e) {
    std::cerr << nlohmann::json{{"error", to_string(e.kind())},
                                {"message", e.what()},
                                {"nodes_visited", e.partial().nodes_visited}}
                     .dump()
              << '\n';
    return 4;
  } catch (const horolab::Error& e) {
    std::cerr << nlohmann::json{{"error", to_string(e.kind())}, {"message", e.what()}}.dump() << '\n';
    return horolab::exit_code(e.kind());
  }
  return 0;
}
