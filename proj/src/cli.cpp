#include "ccrlab/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <iostream>
#include <map>
#include <numbers>
#include <sstream>

#include "ccrlab/classical.hpp"
#include "ccrlab/io.hpp"
#include "ccrlab/lattice.hpp"
#include "ccrlab/process.hpp"
#include "ccrlab/rng.hpp"
#include "ccrlab/spectral.hpp"
#include "ccrlab/weyl.hpp"

namespace ccrlab::cli {

namespace {

struct Options {
  long long p = 1;
  long long q = 0;      // 0: default to sites (or 8)
  long long sites = 0;  // 0: default to q
  double tau = 0.0;     // > 0 selects truncated mode
  double theta = 0.0;
  double phi = 0.0;
  std::string potential = "x^2/2";
  std::vector<std::string> params;
  double beta = 1.0;
  int grid = 16;
  long long paths = 100;
  std::uint64_t seed = 1;
  int qmax = 12;
  int phase_grid = 8;
  int threads = 1;
  std::string out;
  std::string svg;
  std::string config;
  long long svg_paths = 50;
  // classical
  double g = 1.0;
  double x0 = 1.0;
  double v0 = 0.0;
  double dt = 1e-3;
  long long steps = 10000;
};

Bindings parse_bindings(const std::vector<std::string>& params) {
  Bindings b;
  for (const std::string& s : params) {
    const auto eq = s.find('=');
    if (eq == std::string::npos || eq == 0)
      throw std::runtime_error("--param expects name=value, got '" + s + "'");
    b[s.substr(0, eq)] = std::stod(s.substr(eq + 1));
  }
  return b;
}

void resolve_lattice_defaults(Options& o) {
  if (o.q == 0) o.q = (o.sites != 0) ? o.sites : 8;
  if (o.sites == 0) o.sites = o.q;
}

LatticeParams lattice_from(const Options& o) {
  if (o.tau > 0.0)
    return LatticeParams::truncated(o.tau, o.sites, o.theta, o.phi);
  return LatticeParams::commensurate(o.p, o.q, o.sites, o.theta, o.phi);
}

std::vector<std::pair<std::string, std::string>> resolved_map(const Options& o,
                                                              bool classical) {
  std::vector<std::pair<std::string, std::string>> m;
  if (classical) {
    m.emplace_back("g", format_double(o.g));
    m.emplace_back("x0", format_double(o.x0));
    m.emplace_back("v0", format_double(o.v0));
    m.emplace_back("dt", format_double(o.dt));
    m.emplace_back("steps", std::to_string(o.steps));
  } else {
    m.emplace_back("p", std::to_string(o.p));
    m.emplace_back("q", std::to_string(o.q));
    m.emplace_back("sites", std::to_string(o.sites));
    m.emplace_back("tau", format_double(o.tau));
    m.emplace_back("theta", format_double(o.theta));
    m.emplace_back("phi", format_double(o.phi));
    m.emplace_back("potential", o.potential);
    for (const auto& p : o.params) m.emplace_back("param", p);
    m.emplace_back("beta", format_double(o.beta));
    m.emplace_back("grid", std::to_string(o.grid));
    m.emplace_back("paths", std::to_string(o.paths));
    m.emplace_back("qmax", std::to_string(o.qmax));
    m.emplace_back("phase-grid", std::to_string(o.phase_grid));
  }
  m.emplace_back("seed", std::to_string(o.seed));
  m.emplace_back("threads", std::to_string(o.threads));
  if (!o.out.empty()) m.emplace_back("out", o.out);
  if (!o.svg.empty()) {
    m.emplace_back("svg", o.svg);
    m.emplace_back("svg-paths", std::to_string(o.svg_paths));
  }
  return m;
}

void write_outputs(const Options& o, const std::string& command, const std::string& csv,
                   const std::string& svg_content) {
  if (!o.out.empty()) {
    write_text_atomic(o.out, csv);
    write_text_atomic(o.out + ".manifest", manifest_text(command, resolved_map(o, command == "classical")));
  }
  if (!o.svg.empty() && !svg_content.empty()) write_text_atomic(o.svg, svg_content);
}

// ---------------------------------------------------------------- verify --

WeylElement random_element(const Angle& angle, std::uint64_t seed, std::uint64_t index) {
  WeylElement e(angle);
  const int support = 1 + static_cast<int>(keyed_uniform(seed, index, 0) * 5.0);
  for (int s = 0; s < support; ++s) {
    const auto u1 = keyed_uniform(seed, index, 10 * s + 1);
    const auto u2 = keyed_uniform(seed, index, 10 * s + 2);
    const auto u3 = keyed_uniform(seed, index, 10 * s + 3);
    const auto u4 = keyed_uniform(seed, index, 10 * s + 4);
    const GroupPoint x{static_cast<long long>(u1 * 11.0) - 5,
                       static_cast<long long>(u2 * 11.0) - 5};
    e += WeylElement::monomial(angle, x, Complex{2.0 * u3 - 1.0, 2.0 * u4 - 1.0});
  }
  return e;
}

struct CheckLine {
  std::string name;
  double value = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

int cmd_verify(Options& o) {
  resolve_lattice_defaults(o);
  const auto params = lattice_from(o);
  if (params.mode() != LatticeMode::commensurate)
    throw std::runtime_error("verify requires commensurate parameters (--p/--q)");
  const Angle angle = params.angle();
  std::vector<CheckLine> lines;
  const auto add = [&](const std::string& name, double value, double tol) {
    lines.push_back({name, value, tol, value <= tol});
  };

  // symbolic suite: exact in rational mode
  double relation_max = 0.0;
  for (long long mx = -3; mx <= 3; ++mx)
    for (long long nx = -3; nx <= 3; ++nx)
      for (long long my = -3; my <= 3; ++my)
        for (long long ny = -3; ny <= 3; ++ny)
          relation_max = std::max(
              relation_max, ccr_relation_residual({mx, nx}, {my, ny}, angle));
  add("symbolic ccr relation residual", relation_max, 0.0);

  bool cocycle_ok = true;
  for (long long m = -5; m <= 5; ++m)
    for (long long n = -5; n <= 5; ++n)
      for (long long r = -5; r <= 5; ++r)
        for (long long s = -5; s <= 5; ++s) {
          const GroupPoint x{m, n}, y{r, s};
          const Phase prod = cocycle(x, y, angle) * cocycle(y, x, angle);
          cocycle_ok = cocycle_ok && prod == Phase::one(angle);
        }
  add("cocycle antisymmetry violations", cocycle_ok ? 0.0 : 1.0, 0.0);

  double flip_defect = 0.0;
  double trace_defect = 0.0;
  double star_defect = 0.0;
  double fixed_defect = 0.0;
  for (std::uint64_t i = 0; i < 200; ++i) {
    const WeylElement a = random_element(angle, o.seed, 2 * i);
    const WeylElement b = random_element(angle, o.seed, 2 * i + 1);
    if (!(flip(flip(a)) == a)) flip_defect += 1.0;
    if (!(flip(weyl_mul(a, b)) == weyl_mul(flip(a), flip(b)))) flip_defect += 1.0;
    if (!(flip(adjoint(a)) == adjoint(flip(a)))) flip_defect += 1.0;
    {
      WeylElement anti = adjoint(weyl_mul(a, b));
      anti -= weyl_mul(adjoint(b), adjoint(a));
      if (one_norm(anti) > 1e-14 * (1.0 + one_norm(a) * one_norm(b))) star_defect += 1.0;
    }
    if (trace(weyl_mul(a, b)) != trace(weyl_mul(b, a))) trace_defect += 1.0;
    if (trace(flip(a)) != trace(a)) trace_defect += 1.0;
    const double positivity = trace(weyl_mul(adjoint(a), a)).real();
    std::vector<double> norms;
    for (const auto& [x, c] : a.terms()) norms.push_back(std::norm(c));
    std::sort(norms.begin(), norms.end());  // canonical summation order
    double sq = 0.0;
    for (double v : norms) sq += v;
    if (positivity != sq || positivity < 0.0) trace_defect += 1.0;
    const GroupPoint dx{static_cast<long long>(keyed_uniform(o.seed, i, 90) * 7) - 3,
                        static_cast<long long>(keyed_uniform(o.seed, i, 91) * 7) - 3};
    const GroupPoint dy{static_cast<long long>(keyed_uniform(o.seed, i, 92) * 7) - 3,
                        static_cast<long long>(keyed_uniform(o.seed, i, 93) * 7) - 3};
    if (!is_flip_fixed(weyl_mul(d_element(dx, angle), d_element(dy, angle))))
      fixed_defect += 1.0;
  }
  add("flip automorphism defects", flip_defect, 0.0);
  add("involution anti-homomorphism defects", star_defect, 0.0);
  add("trace identity defects", trace_defect, 0.0);
  add("flip-fixed product defects", fixed_defect, 0.0);

  const RepReport rep = verify_rep(params);
  add("matrix ccr relation residual", rep.relation_residual_max, 1e-12);
  add("momentum generator identity", rep.momentum_identity, 1e-12);
  add("position generator identity", rep.position_identity, 1e-12);
  add("commutation relation residual", rep.commutation_residual, 1e-12);
  add("norm bound excess", rep.norm_excess_max, 1e-10);

  std::ostringstream report;
  bool all_pass = true;
  for (const CheckLine& line : lines) {
    all_pass = all_pass && line.pass;
    report << (line.pass ? "PASS" : "FAIL") << "  " << line.name << " = "
           << format_double(line.value) << " (tol " << format_double(line.tolerance) << ")\n";
  }
  report << (all_pass ? "verify: all checks passed\n" : "verify: FAILURES present\n");
  std::cout << report.str();
  if (!o.out.empty()) {
    write_text_atomic(o.out, report.str());
    write_text_atomic(o.out + ".manifest", manifest_text("verify", resolved_map(o, false)));
  }
  return all_pass ? 0 : 1;
}

// -------------------------------------------------------------- spectrum --

int cmd_spectrum(Options& o) {
  resolve_lattice_defaults(o);
  const auto params = lattice_from(o);
  const auto v = PotentialExpr::parse(o.potential);
  const RealVector ev = spectrum(params, v, parse_bindings(o.params));
  CsvBuilder csv({"index", "eigenvalue"});
  for (Eigen::Index i = 0; i < ev.size(); ++i)
    csv.add_row({std::to_string(i), format_double(ev(i))});
  std::string svg;
  if (!o.svg.empty()) {
    SvgCanvas canvas(0.0, static_cast<double>(ev.size() - 1), ev.minCoeff(), ev.maxCoeff());
    for (Eigen::Index i = 0; i < ev.size(); ++i)
      canvas.point(static_cast<double>(i), ev(i), "black");
    svg = canvas.finish();
  }
  write_outputs(o, "spectrum", csv.str(), svg);
  if (o.out.empty()) std::cout << csv.str();
  return 0;
}

// ------------------------------------------------------------- butterfly --

int cmd_butterfly(Options& o, const std::string& gaps_path) {
  const auto v = PotentialExpr::parse(o.potential);
  const ButterflyDataset data =
      butterfly_sweep(o.qmax, v, parse_bindings(o.params), o.phase_grid, o.threads);
  CsvBuilder csv({"p", "q", "theta", "phi", "index", "eigenvalue"});
  for (const ButterflyRow& r : data.rows)
    csv.add_row({std::to_string(r.p), std::to_string(r.q), format_double(r.theta),
                 format_double(r.phi), std::to_string(r.index), format_double(r.eigenvalue)});

  std::string svg;
  if (!o.svg.empty()) {
    double lo = 0.0, hi = 1.0;
    if (!data.rows.empty()) {
      lo = hi = data.rows.front().eigenvalue;
      for (const auto& r : data.rows) {
        lo = std::min(lo, r.eigenvalue);
        hi = std::max(hi, r.eigenvalue);
      }
    }
    SvgCanvas canvas(0.0, 1.0, lo, hi);
    for (const auto& r : data.rows)
      canvas.point(static_cast<double>(r.p) / static_cast<double>(r.q), r.eigenvalue,
                   "black", 0.8);
    svg = canvas.finish();
  }
  write_outputs(o, "butterfly", csv.str(), svg);
  if (!gaps_path.empty()) {
    CsvBuilder gaps({"p", "q", "band_index", "lo", "hi"});
    for (const GapReport& rep : gap_report(data)) {
      for (std::size_t b = 0; b < rep.bands.size(); ++b)
        gaps.add_row({std::to_string(rep.p), std::to_string(rep.q), std::to_string(b),
                      format_double(rep.bands[b].lo), format_double(rep.bands[b].hi)});
    }
    write_text_atomic(gaps_path, gaps.str());
  }
  if (o.out.empty()) std::cout << "butterfly rows: " << data.rows.size() << "\n";
  return 0;
}

// ------------------------------------------------------------------- kms --

int cmd_kms(Options& o) {
  resolve_lattice_defaults(o);
  const auto params = lattice_from(o);
  const auto v = PotentialExpr::parse(o.potential);
  const auto bindings = parse_bindings(o.params);
  const ProcessModel model = make_process_model(params, v, bindings);
  const TimeGrid grid = TimeGrid::uniform(o.beta, o.grid);

  double omega_h = 0.0;
  {
    double z = 0.0, acc = 0.0;
    for (Eigen::Index j = 0; j < model.eig().eigenvalues.size(); ++j) {
      const double w = std::exp(-o.beta * (model.eig().eigenvalues(j) - model.ground()));
      z += w;
      acc += w * model.eig().eigenvalues(j);
    }
    omega_h = acc / z;
  }

  CsvBuilder csv({"beta", "t", "two_point", "omega_H"});
  for (double t : grid.times()) {
    const double corr = model.monomial_moment(o.beta, {{0.0, 1}, {t, 1}});
    csv.add_row({format_double(o.beta), format_double(t), format_double(corr),
                 format_double(omega_h)});
  }
  write_outputs(o, "kms", csv.str(), "");
  if (o.out.empty()) std::cout << csv.str();
  return 0;
}

// ---------------------------------------------------------------- sample --

int cmd_sample(Options& o) {
  resolve_lattice_defaults(o);
  const auto params = lattice_from(o);
  const auto v = PotentialExpr::parse(o.potential);
  const ProcessModel model = make_process_model(params, v, parse_bindings(o.params));
  const TimeGrid grid = TimeGrid::uniform(o.beta, o.grid);
  if (o.paths < 1) throw std::runtime_error("--paths must be >= 1");
  const PathBatch batch =
      sample_paths(model, grid, static_cast<std::size_t>(o.paths), o.seed, o.threads);

  std::vector<std::string> header;
  for (int k = 0; k <= grid.steps(); ++k) header.push_back("t" + std::to_string(k));
  CsvBuilder csv(header);
  std::vector<std::string> row(header.size());
  for (std::size_t pth = 0; pth < batch.count(); ++pth) {
    for (int k = 0; k <= grid.steps(); ++k) row[k] = format_double(batch.value(pth, k));
    csv.add_row(row);
  }

  std::string svg;
  if (!o.svg.empty()) {
    double lo = 0.0, hi = 0.0;
    for (std::size_t pth = 0; pth < batch.count(); ++pth)
      for (int k = 0; k <= grid.steps(); ++k) {
        lo = std::min(lo, batch.value(pth, k));
        hi = std::max(hi, batch.value(pth, k));
      }
    SvgCanvas canvas(0.0, grid.beta(), lo, hi);
    const std::size_t shown = std::min<std::size_t>(
        batch.count(), o.svg_paths < 0 ? 0 : static_cast<std::size_t>(o.svg_paths));
    for (std::size_t pth = 0; pth < shown; ++pth) {
      std::vector<std::pair<double, double>> pts;
      for (int k = 0; k <= grid.steps(); ++k)
        pts.emplace_back(grid.times()[k], batch.value(pth, k));
      canvas.polyline(pts, "steelblue", 0.6);
    }
    svg = canvas.finish();
  }
  write_outputs(o, "sample", csv.str(), svg);
  if (o.out.empty())
    std::cout << "sampled " << batch.count() << " paths on " << grid.steps()
              << " increments\n";
  return 0;
}

// ------------------------------------------------------------- classical --

int cmd_classical(Options& o) {
  const auto trajectory = integrate(o.g, o.x0, o.v0, o.dt, o.steps);
  CsvBuilder csv({"t", "x", "v", "E"});
  for (const OscState& s : trajectory)
    csv.add_row({format_double(s.t), format_double(s.x), format_double(s.v),
                 format_double(energy(s, o.g))});
  std::string svg;
  if (!o.svg.empty()) {
    double xlo = 0, xhi = 0, vlo = 0, vhi = 0;
    for (const OscState& s : trajectory) {
      xlo = std::min(xlo, s.x);
      xhi = std::max(xhi, s.x);
      vlo = std::min(vlo, s.v);
      vhi = std::max(vhi, s.v);
    }
    SvgCanvas canvas(xlo, xhi, vlo, vhi);
    std::vector<std::pair<double, double>> pts;
    pts.reserve(trajectory.size());
    for (const OscState& s : trajectory) pts.emplace_back(s.x, s.v);
    canvas.polyline(pts, "darkred", 0.8);
    svg = canvas.finish();
  }
  write_outputs(o, "classical", csv.str(), svg);
  if (o.out.empty())
    std::cout << "integrated " << (trajectory.size() - 1) << " samples\n";
  return 0;
}

// ----------------------------------------------------------- fourier-check --

int cmd_fourier(Options& o) {
  resolve_lattice_defaults(o);
  const auto params = LatticeParams::commensurate(1, o.sites, o.sites, o.theta, o.phi);
  const double residual = fourier_conjugacy_check(params);
  std::cout << "fourier conjugacy residual at N=" << o.sites << ": "
            << format_double(residual) << "\n";
  if (!o.out.empty()) {
    CsvBuilder csv({"sites", "theta", "phi", "residual"});
    csv.add_row({std::to_string(o.sites), format_double(o.theta), format_double(o.phi),
                 format_double(residual)});
    write_outputs(o, "fourier-check", csv.str(), "");
  }
  return 0;
}

// --------------------------------------------------------------- dispatch --

void add_common(CLI::App* sub, Options& o) {
  sub->add_option("--p", o.p, "numerator of alpha = 2 pi p / q");
  sub->add_option("--q", o.q, "denominator of alpha (default: sites, else 8)");
  sub->add_option("--sites", o.sites, "lattice site count N (default: q)");
  sub->add_option("--tau", o.tau, "step size; selects truncated mode when set");
  sub->add_option("--theta", o.theta, "boundary phase in [0, 2 pi)");
  sub->add_option("--phi", o.phi, "position offset phase in [0, 2 pi)");
  sub->add_option("--potential", o.potential, "potential v(x), e.g. \"x^2/2 + g*x^4/4\"");
  sub->add_option("--param", o.params, "potential parameter binding name=value");
  sub->add_option("--beta", o.beta, "inverse temperature");
  sub->add_option("--grid", o.grid, "number of time-grid increments");
  sub->add_option("--paths", o.paths, "number of sampled paths");
  sub->add_option("--seed", o.seed, "random seed");
  sub->add_option("--qmax", o.qmax, "largest denominator in butterfly sweeps");
  sub->add_option("--phase-grid", o.phase_grid, "phase grid resolution per axis");
  sub->add_option("--out", o.out, "output CSV/report path");
  sub->add_option("--svg", o.svg, "output SVG path");
  sub->add_option("--svg-paths", o.svg_paths, "how many sampled paths to draw");
  sub->add_option("--threads", o.threads, "worker threads");
  sub->add_option("--config", o.config, "key=value config file; flags override");
  sub->add_option("--g", o.g, "classical spring nonlinearity");
  sub->add_option("--x0", o.x0, "classical initial position");
  sub->add_option("--v0", o.v0, "classical initial velocity");
  sub->add_option("--dt", o.dt, "classical time step");
  sub->add_option("--steps", o.steps, "classical step count");
  for (auto* opt : sub->get_options())
    if (opt->get_expected_max() == 1) opt->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
}

// Expand --config into synthetic tokens placed before the user's flags, so
// command-line values win via the TakeLast policy.
std::vector<std::string> expand_config(const std::vector<std::string>& args) {
  std::string config_path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size())
      config_path = args[i + 1];
    else if (args[i].rfind("--config=", 0) == 0)
      config_path = args[i].substr(9);
  }
  if (config_path.empty() || args.empty()) return args;

  const bool cli_has_param =
      std::any_of(args.begin(), args.end(), [](const std::string& a) {
        return a == "--param" || a.rfind("--param=", 0) == 0;
      });

  std::vector<std::string> expanded;
  expanded.push_back(args.front());  // subcommand
  for (const auto& [key, values] : load_config_file(config_path)) {
    if (key == "command" || key == "out" || key == "svg" || key == "config") {
      if (key != "command") {
        // out/svg from file still apply unless given on the command line
        const std::string flag = "--" + key;
        const bool overridden = std::any_of(args.begin(), args.end(), [&](const std::string& a) {
          return a == flag || a.rfind(flag + "=", 0) == 0;
        });
        if (!overridden && key != "config")
          for (const auto& v : values) {
            expanded.push_back(flag);
            expanded.push_back(v);
          }
      }
      continue;
    }
    if (key == "param" && cli_has_param) continue;
    for (const auto& v : values) {
      expanded.push_back("--" + key);
      expanded.push_back(v);
    }
  }
  expanded.insert(expanded.end(), args.begin() + 1, args.end());
  return expanded;
}

}  // namespace

int run(std::vector<std::string> args) {
  CLI::App app{"numerical laboratory for discretized canonical commutation relations"};
  app.require_subcommand(1);

  Options o;
  std::string gaps_path;
  auto* verify = app.add_subcommand("verify", "algebra and representation identity suite");
  auto* spectrum_cmd = app.add_subcommand("spectrum", "eigenvalues of the discretized Hamiltonian");
  auto* butter = app.add_subcommand("butterfly", "eigenvalue sweep over reduced fractions p/q");
  auto* kms = app.add_subcommand("kms", "thermal state diagnostics on the KMS circle");
  auto* sample = app.add_subcommand("sample", "sample periodic paths of the canonical process");
  auto* classical = app.add_subcommand("classical", "integrate the classical oscillator");
  auto* fourier = app.add_subcommand("fourier-check", "Fourier conjugacy residual");
  for (auto* sub : {verify, spectrum_cmd, butter, kms, sample, classical, fourier}) add_common(sub, o);
  butter->add_option("--gaps", gaps_path, "also write merged band intervals to this CSV");

  try {
    std::vector<std::string> expanded = expand_config(args);
    // CLI11 parses reversed argv
    std::vector<std::string> reversed(expanded.rbegin(), expanded.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    std::cout << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }

  try {
    if (verify->parsed()) return cmd_verify(o);
    if (spectrum_cmd->parsed()) return cmd_spectrum(o);
    if (butter->parsed()) return cmd_butterfly(o, gaps_path);
    if (kms->parsed()) return cmd_kms(o);
    if (sample->parsed()) return cmd_sample(o);
    if (classical->parsed()) return cmd_classical(o);
    if (fourier->parsed()) return cmd_fourier(o);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  std::cerr << "usage error: no subcommand\n";
  return 2;
}

int run(int argc, char** argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run(std::move(args));
}

}  // namespace ccrlab::cli
