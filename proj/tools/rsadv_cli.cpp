#include <rsadv/rsadv.h>

#include <CLI11.hpp>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace {

int report(rsadv_status status) {
  if (status == RSADV_OK) return 0;
  std::cerr << "error [" << rsadv_status_string(status) << "]: " << rsadv_last_error() << "\n";
  return 1 + (status == RSADV_ERR_INTERNAL);
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
}

// key=value lines become --key value after the subcommand name.
bool expand_config_file(std::vector<std::string>& args) {
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] != "--config-file") continue;
    if (i + 1 >= args.size()) {
      std::cerr << "--config-file needs a path\n";
      return false;
    }
    const std::string path = args[i + 1];
    args.erase(args.begin() + static_cast<long>(i), args.begin() + static_cast<long>(i) + 2);
    std::ifstream in(path);
    if (!in) {
      std::cerr << "cannot read " << path << "\n";
      return false;
    }
    std::vector<std::string> extra;
    std::string line;
    while (std::getline(in, line)) {
      line = trim(line.substr(0, line.find('#')));
      if (line.empty()) continue;
      const auto eq = line.find('=');
      if (eq == std::string::npos) {
        std::cerr << path << ": expected key=value, got '" << line << "'\n";
        return false;
      }
      const std::string key = trim(line.substr(0, eq));
      const std::string value = trim(line.substr(eq + 1));
      if (value == "true") {
        extra.push_back("--" + key);
      } else if (value != "false") {
        extra.push_back("--" + key);
        extra.push_back(value);
      }
    }
    const std::size_t at = args.empty() ? 0 : 1;
    args.insert(args.begin() + static_cast<long>(at), extra.begin(), extra.end());
    return true;
  }
  return true;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Recovered-space transport experiments"};
  app.require_subcommand(1);
  app.set_version_flag("--version", rsadv_version());

  std::string test = "rotational", config = "rho", out_dir;
  std::vector<int> resolutions{20, 40, 80};
  double dt = 1e-4, t_final = 1.0;
  bool no_boundary = false, scale_dt = false, zero_velocity = false;
  int substeps = 1;
  unsigned seed = 0;

  auto* converge = app.add_subcommand("converge", "Convergence suite for one test and configuration");
  converge->add_option("--test", test)->check(CLI::IsMember({"rotational", "deformational", "boundary"}));
  converge->add_option("--config", config)->check(CLI::IsMember({"rho", "v", "theta", "r"}));
  converge->add_option("--resolutions", resolutions)->delimiter(',');
  converge->add_flag("--no-boundary-recovery", no_boundary);
  converge->add_option("--dt", dt);
  converge->add_option("--t-final", t_final);
  converge->add_flag("--scale-dt", scale_dt);
  converge->add_flag("--zero-velocity", zero_velocity);
  converge->add_option("--substeps", substeps)->check(CLI::PositiveNumber);
  converge->add_option("--seed", seed);
  converge->add_option("--out", out_dir)->required();

  std::string cases = "ABC";
  std::vector<double> courants{0.2, 0.4, 0.6, 0.8};
  std::vector<int> wavenumbers{1, 5, 10, 30, 59};
  int n_cells = 120;
  auto* stability = app.add_subcommand("stability", "Measured versus predicted amplification factors");
  stability->add_option("--case", cases, "Any of A, B, C");
  stability->add_option("--courant", courants)->delimiter(',');
  stability->add_option("--wavenumbers", wavenumbers)->delimiter(',');
  stability->add_option("--cells", n_cells);
  stability->add_option("--out", out_dir)->required();

  std::string mode = "ABC";
  auto* critical = app.add_subcommand("critical-courant", "Critical Courant number of a 1D case");
  critical->add_option("--case", mode, "Any of A, B, C");

  int n_phi = 64;
  std::vector<double> closed_courants{0.0, 0.2, 0.4, 0.6, 0.8};
  auto* closed = app.add_subcommand("closed-form", "Compare closed-form amplification with the operator product");
  closed->add_option("--courant", closed_courants)->delimiter(',');
  closed->add_option("--phases", n_phi);
  closed->add_option("--out", out_dir)->required();

  rsadv_leveque_options lev;
  rsadv_leveque_options_init(&lev);
  auto* leveque = app.add_subcommand("leveque", "Slotted cylinder, cone and hump boundedness run");
  leveque->add_option("--n", lev.n);
  leveque->add_option("--dt", lev.dt);
  leveque->add_option("--t-final", lev.t_final);
  leveque->add_option("--stride", lev.trajectory_stride);
  leveque->add_option("--out", out_dir)->required();

  int n = 40;
  auto* snapshot = app.add_subcommand("snapshot", "Dump initial and final field CSVs");
  snapshot->add_option("--test", test)->check(CLI::IsMember({"rotational", "deformational", "boundary"}));
  snapshot->add_option("--config", config)->check(CLI::IsMember({"rho", "v", "theta", "r"}));
  snapshot->add_option("--n", n);
  snapshot->add_option("--dt", dt);
  snapshot->add_option("--t-final", t_final);
  snapshot->add_option("--out", out_dir)->required();

  std::vector<std::string> args(argv + 1, argv + argc);
  if (!expand_config_file(args)) return 2;
  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  if (*converge) {
    rsadv_converge_options opt;
    rsadv_converge_options_init(&opt);
    opt.test = test.c_str();
    opt.config = config.c_str();
    opt.resolutions = resolutions.data();
    opt.n_resolutions = static_cast<int>(resolutions.size());
    opt.dt = dt;
    opt.t_final = t_final;
    opt.boundary_recovery = !no_boundary;
    opt.scale_dt = scale_dt;
    opt.zero_velocity = zero_velocity;
    opt.substeps = substeps;
    opt.seed = seed;
    rsadv_converge_result res;
    if (const int rc = report(rsadv_run_converge(&opt, out_dir.c_str(), &res))) return rc;
    for (int i = 0; i < res.n_rows; ++i)
      std::printf("dx=%.6g error=%.6e status=%s\n", res.dx[i], res.error[i],
                  rsadv_status_string(static_cast<rsadv_status>(res.row_status[i])));
    if (res.slope_ok)
      std::printf("slope=%.4f\n", res.slope);
    else
      std::printf("slope=unavailable\n");
    return res.n_failed ? 1 : 0;
  }

  if (*stability) {
    rsadv_stability_options opt;
    rsadv_stability_options_init(&opt);
    opt.cases = cases.c_str();
    opt.courants = courants.data();
    opt.n_courants = static_cast<int>(courants.size());
    opt.wavenumbers = wavenumbers.data();
    opt.n_wavenumbers = static_cast<int>(wavenumbers.size());
    opt.n_cells = n_cells;
    rsadv_stability_result res;
    if (const int rc = report(rsadv_run_stability(&opt, out_dir.c_str(), &res))) return rc;
    std::printf("rows=%d failed=%d max_abs_diff=%.3e\n", res.n_rows, res.n_failed, res.max_abs_diff);
    return res.n_failed ? 1 : 0;
  }

  if (*critical) {
    for (const char m : mode) {
      double c = 0.0;
      if (const int rc = report(rsadv_critical_courant(m, &c))) return rc;
      std::printf("%c %.4f\n", m, c);
    }
    return 0;
  }

  if (*closed) {
    rsadv_closed_form_result res;
    if (const int rc = report(rsadv_closed_form_report(closed_courants.data(), static_cast<int>(closed_courants.size()), n_phi,
                                                       out_dir.c_str(), &res)))
      return rc;
    const char names[3] = {'A', 'B', 'C'};
    for (int m = 0; m < 3; ++m)
      std::printf("case_%c divergent_rows=%d c0_divergence=%s\n", names[m], res.divergent_rows[m],
                  res.c0_divergence_flagged[m] ? "flagged" : "none");
    return 0;
  }

  if (*leveque) {
    rsadv_leveque_result res;
    if (const int rc = report(rsadv_run_leveque(&lev, out_dir.c_str(), &res))) return rc;
    for (int i = 0; i < res.n_variants; ++i) {
      const rsadv_leveque_variant& v = res.variants[i];
      std::printf("%s min=%.6e max=%.6e mass_drift=%.3e l2=%.4e bounded=%d\n", v.name, v.trajectory_min,
                  v.trajectory_max, v.mass_drift, v.l2_error, v.bounded);
    }
    return 0;
  }

  if (*snapshot) return report(rsadv_snapshot(test.c_str(), config.c_str(), n, dt, t_final, out_dir.c_str()));
  return 0;
}
