#include "cgc/job.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <optional>
#include <thread>
#include <utility>

#include "json.hpp"

namespace cgc {

using json = nlohmann::json;
using namespace std::complex_literals;

namespace {

// nodes with |EG - F^2| below this are masked out of the curvature check
constexpr double kCurvatureFloor = 1e-4;
// a surface counts as real for whole-mesh export below this imaginary sup
constexpr double kRealExportTol = 1e-8;

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw ConfigError(path + ": " + what);
}

double num_at(const json& j, const std::string& path) {
  if (!j.is_number()) fail(path, "expected a number");
  return j.get<double>();
}

cplx complex_at(const json& j, const std::string& path) {
  if (!j.is_array() || j.size() != 2) fail(path, "expected [re, im]");
  return cplx(num_at(j[0], path + "/0"), num_at(j[1], path + "/1"));
}

void reject_unknown(const json& j, const std::string& path,
                    std::initializer_list<const char*> known) {
  for (auto& [key, val] : j.items()) {
    (void)val;
    bool ok = false;
    for (const char* k : known) ok = ok || key == k;
    if (!ok) fail(path + "/" + key, "unknown field");
  }
}

}  // namespace

const std::map<std::string, double>& default_tolerances() {
  static const std::map<std::string, double> defaults = {
      {"flatness", 1e-6},           {"laurent_fit", 1e-7},
      {"orthogonality", 1e-8},      {"curvature", 1e-3},
      {"constant_length_spread", 1e-8}, {"constant_angle_spread", 1e-8},
      {"permutability", 1e-10},     {"reality_imag_sup", 1e-8},
      {"oracle_alignment", 1e-4}};
  return defaults;
}

JobConfig parse_job_config(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("/: ") + e.what());
  }
  if (!j.is_object()) fail("/", "expected an object");
  reject_unknown(j, "", {"case", "seed", "grid", "lambda", "factors",
                         "reality", "oracle_compare", "tolerances", "output",
                         "threads"});

  JobConfig cfg;
  if (!j.contains("case") || !j["case"].is_string())
    fail("/case", "required string");
  cfg.geometry = j["case"].get<std::string>();
  if (cfg.geometry != "cgc_positive" && cfg.geometry != "pseudospherical")
    fail("/case", "must be \"cgc_positive\" or \"pseudospherical\"");
  const bool sine = cfg.geometry == "pseudospherical";

  if (!j.contains("seed") || !j["seed"].is_object())
    fail("/seed", "required object");
  const json& s = j["seed"];
  reject_unknown(s, "/seed", {"kind", "omega0", "omega0_prime", "r", "phase"});
  if (!s.contains("kind") || !s["kind"].is_string())
    fail("/seed/kind", "required string");
  cfg.seed_kind = s["kind"].get<std::string>();
  if (cfg.seed_kind == "pendulum") {
    if (sine) fail("/seed/kind", "pendulum seeds belong to cgc_positive");
    if (s.contains("omega0")) cfg.seed_omega0 = num_at(s["omega0"], "/seed/omega0");
    if (s.contains("omega0_prime"))
      cfg.seed_omega0_prime = num_at(s["omega0_prime"], "/seed/omega0_prime");
  } else if (cfg.seed_kind == "kink") {
    if (!sine) fail("/seed/kind", "kink seeds belong to pseudospherical");
    if (s.contains("r")) cfg.seed_r = num_at(s["r"], "/seed/r");
    if (s.contains("phase")) cfg.seed_phase = num_at(s["phase"], "/seed/phase");
  } else if (cfg.seed_kind != "vacuum") {
    fail("/seed/kind", "must be \"vacuum\", \"pendulum\" or \"kink\"");
  }

  if (!j.contains("grid") || !j["grid"].is_object())
    fail("/grid", "required object");
  const json& g = j["grid"];
  reject_unknown(g, "/grid", {"nx", "ny", "hx", "hy", "i0", "j0"});
  for (const char* k : {"nx", "ny", "hx", "hy"})
    if (!g.contains(k)) fail(std::string("/grid/") + k, "required");
  cfg.grid.nx = static_cast<int>(num_at(g["nx"], "/grid/nx"));
  cfg.grid.ny = static_cast<int>(num_at(g["ny"], "/grid/ny"));
  cfg.grid.hx = num_at(g["hx"], "/grid/hx");
  cfg.grid.hy = num_at(g["hy"], "/grid/hy");
  cfg.grid.i0 = g.contains("i0") ? static_cast<int>(num_at(g["i0"], "/grid/i0"))
                                 : cfg.grid.nx / 2;
  cfg.grid.j0 = g.contains("j0") ? static_cast<int>(num_at(g["j0"], "/grid/j0"))
                                 : cfg.grid.ny / 2;
  try {
    cfg.grid.validate();
  } catch (const std::exception& e) {
    fail("/grid", e.what());
  }

  if (j.contains("lambda")) cfg.lambda = complex_at(j["lambda"], "/lambda");
  if (cfg.lambda == 0.0) fail("/lambda", "must be nonzero");

  if (j.contains("factors")) {
    if (!j["factors"].is_array()) fail("/factors", "expected an array");
    int idx = 0;
    for (const json& f : j["factors"]) {
      std::string base = "/factors/" + std::to_string(idx++);
      if (!f.is_object()) fail(base, "expected an object");
      reject_unknown(f, base, {"alpha", "line"});
      if (!f.contains("alpha")) fail(base + "/alpha", "required");
      FactorSpec fs;
      fs.alpha = complex_at(f["alpha"], base + "/alpha");
      if (std::abs(fs.alpha) < kTolAdmissible)
        fail(base + "/alpha", "pole at zero");
      double scale = std::abs(fs.alpha) + std::abs(cfg.lambda);
      if (std::abs(fs.alpha - cfg.lambda) < 1e-9 * scale ||
          std::abs(fs.alpha + cfg.lambda) < 1e-9 * scale)
        fail(base + "/alpha", "pole collides with lambda");
      if (!f.contains("line") || !f["line"].is_object())
        fail(base + "/line", "required object");
      reject_unknown(f["line"], base + "/line", {"a", "b"});
      if (!f["line"].contains("a") || !f["line"].contains("b"))
        fail(base + "/line", "needs a and b");
      fs.line_a = complex_at(f["line"]["a"], base + "/line/a");
      fs.line_b = complex_at(f["line"]["b"], base + "/line/b");
      if (std::abs(fs.line_a * fs.line_a + fs.line_b * fs.line_b + 0.25) >
          kTolLine)
        fail(base + "/line", "not an isotropic line: a^2 + b^2 != -1/4");
      cfg.factors.push_back(fs);
    }
  }
  if (sine && cfg.factors.size() > 1)
    fail("/factors", "pseudospherical jobs take at most one factor");
  if (!sine && cfg.factors.size() > 2)
    fail("/factors", "at most two factors");

  if (j.contains("reality")) {
    if (!j["reality"].is_boolean()) fail("/reality", "expected a boolean");
    cfg.reality = j["reality"].get<bool>();
  }
  if (j.contains("oracle_compare")) {
    if (!j["oracle_compare"].is_boolean())
      fail("/oracle_compare", "expected a boolean");
    cfg.oracle_compare = j["oracle_compare"].get<bool>();
  }
  if (cfg.oracle_compare && !sine && cfg.factors.empty())
    fail("/oracle_compare", "needs at least one factor in the cgc case");

  if (j.contains("tolerances")) {
    if (!j["tolerances"].is_object()) fail("/tolerances", "expected an object");
    for (auto& [key, val] : j["tolerances"].items()) {
      if (!default_tolerances().count(key))
        fail("/tolerances/" + key, "unknown check name");
      double t = num_at(val, "/tolerances/" + key);
      if (!(t > 0.0)) fail("/tolerances/" + key, "must be positive");
      cfg.tolerances[key] = t;
    }
  }

  if (j.contains("output")) {
    if (!j["output"].is_object()) fail("/output", "expected an object");
    const json& o = j["output"];
    reject_unknown(o, "/output", {"mesh", "report", "part"});
    if (o.contains("mesh")) {
      if (!o["mesh"].is_string()) fail("/output/mesh", "expected a string");
      cfg.mesh_path = o["mesh"].get<std::string>();
    }
    if (o.contains("report")) {
      if (!o["report"].is_string()) fail("/output/report", "expected a string");
      cfg.report_path = o["report"].get<std::string>();
    }
    if (o.contains("part")) {
      if (!o["part"].is_string()) fail("/output/part", "expected a string");
      cfg.mesh_part = o["part"].get<std::string>();
      if (cfg.mesh_part != "real" && cfg.mesh_part != "imag")
        fail("/output/part", "must be \"real\" or \"imag\"");
    }
  }

  if (j.contains("threads")) {
    double t = num_at(j["threads"], "/threads");
    if (t < 0 || t != static_cast<int>(t))
      fail("/threads", "expected a nonnegative integer");
    cfg.threads = static_cast<int>(t);
  }
  return cfg;
}

bool VerificationReport::pass() const {
  for (auto& [name, c] : checks)
    if (!c.pass) return false;
  return true;
}

std::string report_to_json(const VerificationReport& r) {
  json j;
  j["checks"] = json::object();
  for (auto& [name, c] : r.checks)
    j["checks"][name] = {
        {"pass", c.pass}, {"tolerance", c.tolerance}, {"value", c.value}};
  j["measured"] = json::object();
  for (auto& [name, v] : r.measured) j["measured"][name] = v;
  j["pass"] = r.pass();
  return j.dump(2) + "\n";
}

VerificationReport report_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("report: ") + e.what());
  }
  if (!j.is_object() || !j.contains("checks") || !j["checks"].is_object())
    throw ConfigError("report: missing checks object");
  VerificationReport r;
  for (auto& [name, c] : j["checks"].items()) {
    if (!c.is_object() || !c.contains("value") || !c["value"].is_number() ||
        !c.contains("tolerance") || !c["tolerance"].is_number() ||
        !c.contains("pass") || !c["pass"].is_boolean())
      throw ConfigError("report: malformed check entry " + name);
    r.checks[name] = CheckEntry{c["value"].get<double>(),
                               c["tolerance"].get<double>(),
                               c["pass"].get<bool>()};
  }
  if (j.contains("measured"))
    for (auto& [name, v] : j["measured"].items()) {
      if (!v.is_number()) throw ConfigError("report: malformed measurement " + name);
      r.measured[name] = v.get<double>();
    }
  return r;
}

void write_report(const VerificationReport& r, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open report path " + path);
  out << report_to_json(r);
}

void export_mesh(const SurfaceField& surf, const std::string& path,
                 MeshPart part) {
  if (part == MeshPart::Whole && surf.imag_sup() > kRealExportTol)
    throw std::invalid_argument(
        "export_mesh: surface is complex, pick a real or imaginary part");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open mesh path " + path);
  const Grid& g = surf.grid;
  char line[128];
  for (int k = 0; k < g.size(); ++k) {
    const CVec3& p = surf.p[k];
    auto comp = [&](int c) {
      return part == MeshPart::ImagPart ? p(c).imag() : p(c).real();
    };
    std::snprintf(line, sizeof(line), "v %.17g %.17g %.17g\n", comp(0),
                  comp(1), comp(2));
    out << line;
  }
  for (int jr = 0; jr + 1 < g.ny; ++jr)
    for (int i = 0; i + 1 < g.nx; ++i) {
      int a = g.idx(i, jr) + 1;
      std::snprintf(line, sizeof(line), "f %d %d %d %d\n", a, a + 1,
                    a + 1 + g.nx, a + g.nx);
      out << line;
    }
  if (!out) throw std::runtime_error("short write on mesh path " + path);
}

namespace {

ScalarField make_seed(const JobConfig& cfg) {
  if (cfg.seed_kind == "pendulum")
    return seed_pendulum(cfg.grid, cfg.seed_omega0, cfg.seed_omega0_prime);
  if (cfg.seed_kind == "kink")
    return sg_seed_kink(cfg.grid, cfg.seed_r, cfg.seed_phase);
  return seed_vacuum(cfg.grid);
}

int resolve_threads(int configured) {
  if (configured > 0) return configured;
  if (const char* env = std::getenv("CGC_THREADS")) {
    int n = std::atoi(env);
    if (n > 0) return n;
  }
  unsigned hw = std::thread::hardware_concurrency();
  return static_cast<int>(hw == 0 ? 1 : std::min(hw, 4u));
}

// runs tasks on a small worker pool; rethrows the first failure in task order
void run_tasks(std::vector<std::function<void()>>& tasks, int threads) {
  if (threads <= 1 || tasks.size() < 2) {
    for (auto& t : tasks) t();
    return;
  }
  std::vector<std::exception_ptr> errs(tasks.size());
  std::atomic<size_t> next{0};
  auto worker = [&] {
    for (size_t k; (k = next.fetch_add(1)) < tasks.size();) {
      try {
        tasks[k]();
      } catch (...) {
        errs[k] = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  int n = static_cast<int>(std::min<size_t>(threads, tasks.size()));
  for (int w = 0; w < n; ++w) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  for (auto& e : errs)
    if (e) std::rethrow_exception(e);
}

struct ConnPair {
  std::function<CMat3(cplx)> U, V;
};

ConnPair base_connection(const ScalarField& om, bool sine, double x, double y) {
  if (sine)
    return {[&om, x, y](cplx l) { return sg_lax_connection_at(om, l, x, y).U; },
            [&om, x, y](cplx l) { return sg_lax_connection_at(om, l, x, y).V; }};
  return {[&om, x, y](cplx l) { return lax_connection_at(om, l, x, y).U; },
          [&om, x, y](cplx l) { return lax_connection_at(om, l, x, y).V; }};
}

// derivative of the normalized line: the component of du along u drops out
// under normalization, so the parallel-section scale never matters
CVec3 line_derivative(const CVec3& v, const CVec3& du) {
  return du / (2.0 * v(0)) - v * (du(0) / v(0));
}

struct FactorJet {
  cplx alpha;
  CVec3 v, dvx, dvy;
};

FactorJet factor_jet(const ConnPair& prev, cplx alpha, const IsotropicLine& l) {
  CVec3 v(0.5, l.a, l.b);
  return {alpha, v, line_derivative(v, CVec3(-prev.U(alpha) * v)),
          line_derivative(v, CVec3(-prev.V(alpha) * v))};
}

std::pair<CMat3, CMat3> factor_with_derivative(const FactorJet& fj,
                                               const CVec3& dv, cplx lam) {
  cplx c = (fj.alpha - lam) / (fj.alpha + lam);
  CMat3 Q = qmat();
  CVec3 qv = Q * fj.v, dqv = Q * dv;
  CVec3 w = cross(fj.v, qv), dw = cross(dv, qv) + cross(fj.v, dqv);
  CMat3 p = c * 2.0 * fj.v * qv.transpose() - 4.0 * w * w.transpose() +
            (1.0 / c) * 2.0 * qv * fj.v.transpose();
  CMat3 dp = c * 2.0 * (dv * qv.transpose() + fj.v * dqv.transpose()) -
             4.0 * (dw * w.transpose() + w * dw.transpose()) +
             (1.0 / c) * 2.0 * (dqv * fj.v.transpose() + qv * dv.transpose());
  return {p, dp};
}

ConnPair push_factor(const ConnPair& prev, const FactorJet& fj) {
  auto advance = [fj](std::function<CMat3(cplx)> base, CVec3 dv) {
    return [fj, base = std::move(base), dv](cplx lam) {
      auto [p, dp] = factor_with_derivative(fj, dv, lam);
      return CMat3(p * base(lam) * p.transpose() - dp * p.transpose());
    };
  };
  return {advance(prev.U, fj.dvx), advance(prev.V, fj.dvy)};
}

std::vector<cplx> loop_samples(const std::vector<cplx>& poles) {
  std::vector<cplx> out;
  for (double r : {0.55, 0.85, 1.2})
    for (double t : {0.4, 1.97, 3.54, 5.11}) {
      cplx s = std::polar(r, t);
      bool ok = true;
      for (cplx a : poles)
        ok = ok && std::abs(s - a) > 0.02 * (1.0 + std::abs(a)) &&
             std::abs(s + a) > 0.02 * (1.0 + std::abs(a));
      if (ok) out.push_back(s);
    }
  if (out.size() < 6)
    throw std::domain_error("job: factor poles crowd the sample circles");
  return out;
}

// laurent-class fit of the (possibly dressed) connection at one interior
// node, with exact line derivatives pushed through each factor in order
double laurent_entry(const ScalarField& om, bool sine,
                     const std::vector<std::pair<cplx, IsotropicLine>>& chain) {
  const Grid& g = om.grid;
  int pi = 2 + ((g.nx - 5) * 2) / 3, pj = 2 + (g.ny - 5) / 3;
  ConnPair c = base_connection(om, sine, g.x(pi), g.y(pj));
  std::vector<cplx> poles;
  for (const auto& [alpha, l] : chain) {
    FactorJet fj = factor_jet(c, alpha, l);
    poles.push_back(alpha);
    c = push_factor(c, fj);
  }
  std::vector<cplx> s = loop_samples(poles);
  return std::max(laurent_fit_residual(c.U, s), laurent_fit_residual(c.V, s));
}

MeshPart part_for(const JobConfig& cfg) {
  if (cfg.mesh_part == "real") return MeshPart::RealPart;
  if (cfg.mesh_part == "imag") return MeshPart::ImagPart;
  return MeshPart::Whole;
}

// seed plus the factor machinery both pipeline entry points share
struct JobSetup {
  ScalarField omega;
  bool sine = false, one_step = false, two_step = false;
  std::vector<SimpleFactor> fs = {};
  std::optional<RealSimpleFactor> rf = {};
  std::optional<TwoStepData> td = {};
};

JobSetup make_setup(const JobConfig& cfg) {
  JobSetup st{make_seed(cfg)};
  st.sine = cfg.geometry == "pseudospherical";
  if (st.sine) {
    if (!cfg.factors.empty())
      st.rf.emplace(cfg.factors[0].alpha,
                    IsotropicLine(cfg.factors[0].line_a, cfg.factors[0].line_b));
  } else {
    for (const FactorSpec& f : cfg.factors)
      st.fs.emplace_back(f.alpha, IsotropicLine(f.line_a, f.line_b));
    if (st.fs.size() == 1 && cfg.reality)
      st.fs.push_back(real_partner(st.fs[0]));
  }
  st.two_step = !st.sine && st.fs.size() == 2;
  st.one_step = (st.sine && st.rf.has_value()) || (!st.sine && st.fs.size() == 1);
  if (st.two_step)
    st.td.emplace(two_step_data(st.omega, st.fs[0], st.fs[1], cfg.reality));
  return st;
}

SurfaceField compute_surface(const JobSetup& st, cplx lam) {
  if (st.sine)
    return st.rf ? sg_dressed_surface(st.omega, *st.rf, lam)
                 : sg_sym_surface(st.omega, lam);
  if (st.two_step) return two_step_surface(st.omega, *st.td, lam);
  if (st.one_step) return dressed_surface(st.omega, st.fs[0], lam);
  return sym_surface(st.omega, lam);
}

SurfaceField compute_normal(const JobSetup& st, cplx lam) {
  if (st.sine)
    return st.rf ? sg_dressed_normal(st.omega, *st.rf, lam)
                 : gauss_map(sg_integrate_frame(st.omega, lam));
  if (st.two_step) return two_step_normal(st.omega, *st.td, lam);
  if (st.one_step) return dressed_normal(st.omega, st.fs[0], lam);
  return gauss_map(integrate_frame(st.omega, lam));
}

}  // namespace

SurfaceField job_surface(const JobConfig& cfg) {
  return compute_surface(make_setup(cfg), cfg.lambda);
}

JobResult run_job(const JobConfig& cfg) {
  const cplx lam = cfg.lambda;
  // factor exchange and the reality normalizer are shared serial state;
  // the independent frame integrations below go onto the worker pool
  JobSetup st = make_setup(cfg);
  const ScalarField& omega = st.omega;
  const bool sine = st.sine, one_step = st.one_step, two_step = st.two_step;

  std::map<std::string, double> tol = default_tolerances();
  for (auto& [k, v] : cfg.tolerances) tol[k] = v;

  std::optional<SurfaceField> surface, normal, base_surf, base_norm, classical;
  std::optional<FrameField> deep;
  double flat = 0.0, laur = 0.0, perm = 0.0;

  std::vector<std::function<void()>> tasks;
  tasks.push_back([&] { surface = compute_surface(st, lam); });
  tasks.push_back([&] { normal = compute_normal(st, lam); });
  tasks.push_back([&] {
    flat = sine ? sg_flatness_residual(omega, lam)
                : flatness_residual(omega, lam);
  });
  tasks.push_back([&] {
    int pi = 2 + ((omega.grid.nx - 5) * 2) / 3,
        pj = 2 + (omega.grid.ny - 5) / 3;
    std::vector<std::pair<cplx, IsotropicLine>> chain;
    if (sine && st.rf) {
      DressingField d = sg_dressed_lines(omega, *st.rf);
      chain.push_back({st.rf->alpha, d.at(pi, pj)});
    } else if (two_step) {
      chain.push_back({st.td->f1.alpha, st.td->d1.at(pi, pj)});
      chain.push_back({st.td->f2x.alpha, st.td->d2x.at(pi, pj)});
    } else if (one_step) {
      DressingField d =
          dressed_lines(integrate_frame(omega, st.fs[0].alpha), st.fs[0]);
      chain.push_back({st.fs[0].alpha, d.at(pi, pj)});
    }
    laur = laurent_entry(omega, sine, chain);
  });
  tasks.push_back([&] {
    if (sine)
      deep = st.rf ? sg_dress(omega, *st.rf, lam)
                   : sg_integrate_frame(omega, lam);
    else if (two_step)
      deep = two_step_frame(omega, *st.td, lam);
    else if (one_step)
      deep = dress_frame(
          integrate_frame(omega, lam),
          dressed_lines(integrate_frame(omega, st.fs[0].alpha), st.fs[0]));
    else
      deep = integrate_frame(omega, lam);
  });
  if (one_step) {
    tasks.push_back([&] {
      base_surf = sine ? sg_sym_surface(omega, lam) : sym_surface(omega, lam);
    });
    tasks.push_back([&] {
      base_norm = gauss_map(sine ? sg_integrate_frame(omega, lam)
                                 : integrate_frame(omega, lam));
    });
  }
  if (two_step) {
    tasks.push_back([&] {
      std::vector<cplx> poles = {st.fs[0].alpha, st.fs[1].alpha};
      perm = permutability_defect(st.fs[0], st.fs[1], loop_samples(poles));
    });
  }
  if (cfg.oracle_compare && !sine) {
    tasks.push_back([&] {
      BBParams p1 = bb_params(st.fs[0], lam);
      ScalarField t1 = integrate_theta(omega, p1.beta, p1.theta0);
      SurfaceField s1 = classical_transform(sym_surface(omega, lam), omega, t1,
                                            p1.beta);
      if (!two_step) {
        classical = std::move(s1);
        return;
      }
      cplx om0 = omega.at(omega.grid.i0, omega.grid.j0);
      BBParams p2 = second_step_params(st.fs[0], st.fs[1], lam, om0);
      ScalarField t2 = integrate_theta(t1, p2.beta, p2.theta0);
      classical = classical_transform(s1, t1, t2, p2.beta);
    });
  }
  run_tasks(tasks, resolve_threads(cfg.threads));

  // serial verification phase
  VerificationReport rep;
  auto add = [&](const std::string& name, double value) {
    double t = tol.at(name);
    rep.checks[name] = CheckEntry{value, t, value <= t};
  };
  add("flatness", flat);
  add("laurent_fit", laur);
  add("orthogonality", deep->orthogonality_drift());
  add("curvature",
      curvature_deviation(fundamental_forms(*surface, *normal),
                          sine ? -1.0 : 1.0, kCurvatureFloor));
  if (one_step) {
    const Grid& g = omega.grid;
    int k0 = g.idx(g.i0, g.j0);
    CVec3 d0 = surface->p[k0] - base_surf->p[k0];
    cplx len0 = bilinear(d0, d0);
    cplx ang0 = bilinear(base_norm->p[k0], normal->p[k0]);
    double len_spread = 0.0, ang_spread = 0.0;
    for (int k = 0; k < g.size(); ++k) {
      CVec3 d = surface->p[k] - base_surf->p[k];
      len_spread = std::max(len_spread, std::abs(bilinear(d, d) - len0));
      ang_spread = std::max(
          ang_spread, std::abs(bilinear(base_norm->p[k], normal->p[k]) - ang0));
    }
    add("constant_length_spread", len_spread);
    add("constant_angle_spread", ang_spread);
    rep.measured["displacement_bilinear_re"] = len0.real();
    rep.measured["displacement_bilinear_im"] = len0.imag();
    rep.measured["normal_bilinear_re"] = ang0.real();
    rep.measured["normal_bilinear_im"] = ang0.imag();
  }
  if (two_step) add("permutability", perm);
  if (cfg.reality) add("reality_imag_sup", surface->imag_sup());
  if (cfg.oracle_compare) {
    if (sine)
      add("oracle_alignment",
          sine_gordon_residual(sg_extract_angle(*surface, *normal)));
    else
      add("oracle_alignment", procrustes_align(*surface, *classical).worst);
  }

  if (!cfg.mesh_path.empty()) export_mesh(*surface, cfg.mesh_path, part_for(cfg));
  if (!cfg.report_path.empty()) write_report(rep, cfg.report_path);
  return JobResult{std::move(rep), std::move(*surface), std::move(*normal)};
}

}  // namespace cgc
