#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "cgc/job.hpp"

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw cgc::ConfigError("cannot read config file " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void apply_overrides(cgc::JobConfig& cfg,
                     const std::vector<std::string>& tol_overrides,
                     int threads) {
  for (const std::string& t : tol_overrides) {
    size_t eq = t.find('=');
    if (eq == std::string::npos)
      throw cgc::ConfigError("--tol-override wants name=value, got " + t);
    std::string name = t.substr(0, eq);
    if (!cgc::default_tolerances().count(name))
      throw cgc::ConfigError("--tol-override: unknown check " + name);
    size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(t.substr(eq + 1), &used);
    } catch (const std::exception&) {
      throw cgc::ConfigError("--tol-override: bad value in " + t);
    }
    if (used != t.size() - eq - 1 || !(v > 0.0))
      throw cgc::ConfigError("--tol-override: bad value in " + t);
    cfg.tolerances[name] = v;
  }
  if (threads > 0) cfg.threads = threads;
}

void print_report(const cgc::VerificationReport& rep) {
  for (const auto& [name, c] : rep.checks)
    std::printf("%-24s %12.5e  (tol %g)  %s\n", name.c_str(), c.value,
                c.tolerance, c.pass ? "pass" : "FAIL");
  for (const auto& [name, v] : rep.measured)
    std::printf("%-24s %.12g\n", name.c_str(), v);
  std::printf("%s\n", rep.pass() ? "PASS" : "FAIL");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"constant-curvature surfaces by loop-group dressing"};
  app.require_subcommand(1);

  std::string config_path;
  std::vector<std::string> tol_overrides;
  int threads = 0;
  bool real_part = false, imag_part = false;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("config", config_path, "job description (JSON)")
        ->required();
    sub->add_option("--tol-override", tol_overrides,
                    "override a check tolerance, name=value");
    sub->add_option("--threads", threads, "worker threads for the frame phase");
  };
  CLI::App* run = app.add_subcommand("run", "checks and artifacts");
  add_common(run);
  CLI::App* verify = app.add_subcommand("verify", "checks and report only");
  add_common(verify);
  CLI::App* exp = app.add_subcommand("export", "mesh only, no checks");
  add_common(exp);
  exp->add_flag("--real-part", real_part, "export the real part");
  exp->add_flag("--imag-part", imag_part, "export the imaginary part");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return 2;
  }

  try {
    cgc::JobConfig cfg = cgc::parse_job_config(slurp(config_path));
    apply_overrides(cfg, tol_overrides, threads);
    if (verify->parsed()) cfg.mesh_path.clear();
    if (exp->parsed()) {
      if (cfg.mesh_path.empty())
        throw cgc::ConfigError("/output/mesh: required for export");
      if (real_part && imag_part)
        throw cgc::ConfigError("pick one of --real-part / --imag-part");
      if (real_part) cfg.mesh_part = "real";
      if (imag_part) cfg.mesh_part = "imag";
      cgc::MeshPart part = cgc::MeshPart::Whole;
      if (cfg.mesh_part == "real") part = cgc::MeshPart::RealPart;
      if (cfg.mesh_part == "imag") part = cgc::MeshPart::ImagPart;
      cgc::export_mesh(cgc::job_surface(cfg), cfg.mesh_path, part);
      std::printf("wrote %s\n", cfg.mesh_path.c_str());
      return 0;
    }
    cgc::JobResult res = cgc::run_job(cfg);
    print_report(res.report);
    return res.report.pass() ? 0 : 1;
  } catch (const cgc::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const cgc::AdmissibilityError& e) {
    std::fprintf(stderr, "numerical error: %s at node (%d, %d)\n", e.what(),
                 e.node_i, e.node_j);
    return 3;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "numerical error: %s\n", e.what());
    return 3;
  }
}
