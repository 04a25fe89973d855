#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "cgc/backlund.hpp"
#include "cgc/pseudosphere.hpp"

namespace cgc {

// schema or value problems in a job description; messages carry a
// JSON-pointer style path to the offending field
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct FactorSpec {
  cplx alpha;
  cplx line_a, line_b;
};

struct JobConfig {
  std::string geometry;  // "cgc_positive" | "pseudospherical"
  std::string seed_kind = "vacuum";
  double seed_omega0 = 0.5, seed_omega0_prime = 0.0;  // pendulum
  double seed_r = 1.0, seed_phase = 0.0;              // kink
  Grid grid;
  cplx lambda{1.0, 0.0};
  std::vector<FactorSpec> factors;
  bool reality = false;
  bool oracle_compare = false;
  std::map<std::string, double> tolerances;  // overrides on the defaults
  std::string mesh_path, report_path;        // empty: skip that artifact
  std::string mesh_part;                     // "", "real", "imag"
  int threads = 0;                           // 0: CGC_THREADS or serial
};

JobConfig parse_job_config(const std::string& text);
const std::map<std::string, double>& default_tolerances();

struct CheckEntry {
  double value = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  bool operator==(const CheckEntry&) const = default;
};

struct VerificationReport {
  std::map<std::string, CheckEntry> checks;
  std::map<std::string, double> measured;  // informational constants
  bool pass() const;
  bool operator==(const VerificationReport&) const = default;
};

// canonical serialization: sorted keys, shortest round-trip decimals
std::string report_to_json(const VerificationReport& r);
VerificationReport report_from_json(const std::string& text);

struct JobResult {
  VerificationReport report;
  SurfaceField surface;
  SurfaceField normal;
};

// seed -> frames -> dressing -> surface -> checks -> artifacts; frame-level
// tasks run on cfg.threads workers, verification and export stay serial
JobResult run_job(const JobConfig& cfg);

// the surface alone, skipping every check (export path)
SurfaceField job_surface(const JobConfig& cfg);

enum class MeshPart { Whole, RealPart, ImagPart };

// OBJ text: "v x y z" per node in row-major order, then 1-based quads;
// Whole refuses surfaces that are not real to 1e-8
void export_mesh(const SurfaceField& surf, const std::string& path,
                 MeshPart part = MeshPart::Whole);
void write_report(const VerificationReport& r, const std::string& path);

}  // namespace cgc
