#include <CLI11.hpp>
#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <optional>
#include <random>
#include <sstream>

#include "fdde/charfn.hpp"
#include "fdde/cli.hpp"
#include "fdde/format.hpp"
#include "fdde/io.hpp"
#include "fdde/stability.hpp"

namespace fdde::cli {

namespace {

double parse_real(const std::string& s, const std::string& field) {
  double v = 0.0;
  const char* end = s.data() + s.size();
  const auto res = std::from_chars(s.data(), end, v);
  if (res.ec != std::errc{} || res.ptr != end || !std::isfinite(v)) {
    throw DomainError(field + ": not a finite number: '" + s + "'");
  }
  return v;
}

int parse_int(const std::string& s, const std::string& field) {
  int v = 0;
  const char* end = s.data() + s.size();
  const auto res = std::from_chars(s.data(), end, v);
  if (res.ec != std::errc{} || res.ptr != end) throw DomainError(field + ": not an integer: '" + s + "'");
  return v;
}

std::filesystem::path output_path(const RunConfig& cfg, const std::string& name) {
  std::filesystem::path dir(cfg.out_dir);
  std::filesystem::create_directories(dir);
  return dir / name;
}

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open " + path.string() + " for writing");
  return os;
}

void require_params(const RunConfig& cfg) {
  const auto report = validate_params(cfg.problem);
  if (report.valid()) return;
  std::string msg = "invalid problem:";
  for (const auto& v : report.violations) msg += " " + v + ";";
  throw DomainError(msg);
}

// Four initial functions of the benchmark problem.
std::vector<HistoryFunction> example_histories(double tau) {
  return {HistoryFunction::constant(tau, 0.6), HistoryFunction::affine(tau, -0.05, 0.2),
          HistoryFunction::affine(tau, 0.05, 0.25), HistoryFunction::affine(tau, 0.1, -0.15)};
}

// ---------------------------------------------------------------------------

int cmd_example51(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  require_params(cfg);
  const Nonlinearity f = cfg.make_nonlinearity();
  const SolveConfig solve = cfg.solve_config();
  const auto phis = example_histories(cfg.problem.tau);

  std::vector<Trajectory> trajs;
  for (std::size_t i = 0; i < phis.size(); ++i) {
    try {
      trajs.push_back(solve_abm(cfg.problem, f, phis[i], solve));
    } catch (const SolutionBlowup& e) {
      err << "x" << i + 1 << ": " << e.what() << '\n';
      return kNumericalFailure;
    }
  }

  {
    auto os = open_output(output_path(cfg, "example51.csv"));
    os << "t,x1,x2,x3,x4\n";
    for (std::size_t k = 0; k < trajs[0].size(); ++k) {
      io::write_csv_row(os, {trajs[0].time(k), trajs[0].x[k], trajs[1].x[k], trajs[2].x[k], trajs[3].x[k]});
    }
  }
  {
    io::LinePlot plot;
    plot.title = "Solutions for four initial functions";
    plot.x_label = "t";
    plot.y_label = "x(t)";
    plot.zero_line = true;
    for (std::size_t i = 0; i < trajs.size(); ++i) {
      io::Series s;
      s.label = "x" + std::to_string(i + 1);
      for (std::size_t k = 0; k < trajs[i].size(); ++k) {
        s.x.push_back(trajs[i].time(k));
        s.y.push_back(trajs[i].x[k]);
      }
      plot.series.push_back(std::move(s));
    }
    auto os = open_output(output_path(cfg, "example51.svg"));
    io::write_svg(os, plot);
  }

  for (std::size_t i = 0; i < trajs.size(); ++i) {
    out << "x" << i + 1 << "(" << format_number(trajs[i].t_end()) << ")=" << format_number(trajs[i].x.back())
        << '\n';
  }
  CertifyOptions copt;
  copt.lipschitz.seed = cfg.seed;
  copt.contour = cfg.contour();
  write_verdict(out, certify(cfg.problem, f, copt));
  return kOk;
}

int cmd_solve(const RunConfig& cfg, const std::string& scheme, bool compare, const std::string& output,
              std::ostream& out, std::ostream& err) {
  require_params(cfg);
  const Nonlinearity f = cfg.make_nonlinearity();
  const HistoryFunction phi = cfg.make_history();
  const SolveConfig solve = cfg.solve_config();
  if (scheme != "abm" && scheme != "picard") throw DomainError("scheme: expected abm or picard");

  std::vector<Trajectory> trajs;
  try {
    if (scheme == "abm" || compare) trajs.push_back(solve_abm(cfg.problem, f, phi, solve));
    if (scheme == "picard" || compare) trajs.push_back(solve_picard(cfg.problem, f, phi, solve));
  } catch (const NumericalError& e) {
    err << e.what() << '\n';
    return kNumericalFailure;
  }

  const auto path = output_path(cfg, output);
  auto os = open_output(path);
  write_trajectory_csv(os, trajs[0]);
  if (compare) {
    // Append the second scheme's rows without a second header.
    std::ostringstream tmp;
    write_trajectory_csv(tmp, trajs[1]);
    const std::string body = tmp.str();
    os << body.substr(body.find('\n') + 1);
    double dev = 0.0;
    double at = 0.0;
    for (std::size_t k = trajs[0].origin(); k < trajs[0].size(); ++k) {
      const double d = std::abs(trajs[0].x[k] - trajs[1].x[k]);
      if (d > dev) {
        dev = d;
        at = trajs[0].time(k);
      }
    }
    auto cs = open_output(output_path(cfg, "comparison.csv"));
    cs << "max_deviation,t_at_max,picard_iterations\n";
    cs << format_number(dev) << ',' << format_number(at) << ',' << trajs[1].iterations << '\n';
    out << "max_deviation=" << format_number(dev) << '\n';
  }
  out << "wrote " << path.string() << '\n';
  return kOk;
}

int cmd_ml_eval(const RunConfig& cfg, const std::string& beta_name, const std::vector<double>& ts, bool decay,
                bool l1, std::ostream& out) {
  require_params(cfg);
  KernelBeta beta;
  if (beta_name == "1" || beta_name == "one") {
    beta = KernelBeta::One;
  } else if (beta_name == "alpha") {
    beta = KernelBeta::Alpha;
  } else {
    throw DomainError("beta: expected 1 or alpha");
  }
  const DelayedMittagLeffler kernel(cfg.problem, beta_value(beta, cfg.problem.alpha), cfg.contour());
  for (double t : ts) {
    if (!(t > 0.0)) throw DomainError("t: kernel times must be positive");
  }
  const auto values = kernel.evaluate(ts);
  const double rate = beta == KernelBeta::One ? cfg.problem.alpha : cfg.problem.alpha + 1.0;
  out << (decay ? "t,value,compensated\n" : "t,value\n");
  for (std::size_t i = 0; i < ts.size(); ++i) {
    if (decay) {
      io::write_csv_row(out, {ts[i], values[i], std::abs(values[i]) * std::pow(ts[i], rate)});
    } else {
      io::write_csv_row(out, {ts[i], values[i]});
    }
  }
  if (l1) write_l1_csv(out, kernel_l1_norm(cfg.problem, 0.0, 1e-10, cfg.contour()));
  return kOk;
}

int cmd_roots(const RunConfig& cfg, const Rectangle& box, int nodes, std::ostream& out, std::ostream& err) {
  require_params(cfg);
  RootSearchOptions opt;
  opt.nodes_per_side = nodes;
  const auto region = ComplexRegion::rectangle(box.re_lo, box.re_hi, box.im_lo, box.im_hi);
  try {
    const RootReport report = locate_roots(cfg.problem, region, opt);
    auto os = open_output(output_path(cfg, "roots.csv"));
    write_root_csv(os, report);
    out << "winding_count=" << report.winding_count << '\n';
    out << "located=" << report.located_count() << (report.partial ? " (partial)" : "") << '\n';
    for (const auto& w : report.warnings) out << "warning=" << w << '\n';

    const double im_bound = std::max(std::abs(box.im_lo), std::abs(box.im_hi));
    const double re_hi = std::max(box.re_hi, 1.0);
    const int rhp = count_roots(cfg.problem, ComplexRegion::right_half_plane_truncated(re_hi, im_bound), opt);
    out << "right_half_plane_count=" << rhp << " (Re in [0, " << format_number(re_hi) << "], |Im| <= "
        << format_number(im_bound) << ")\n";
    out << "right_half_plane_root_free=" << (rhp == 0 ? "true" : "false") << '\n';
  } catch (const BoundaryDegenerate& e) {
    err << "boundary degenerate: " << e.what() << "; perturb the region\n";
    return kNumericalFailure;
  }
  return kOk;
}

int cmd_stability_map(const RunConfig& cfg, const std::vector<double>& a_range, const std::vector<double>& b_range,
                      int grid, bool verify, int verify_count, std::ostream& out) {
  if (grid < 2) throw DomainError("grid: need at least 2 points per axis");
  if (!(a_range[0] < a_range[1]) || !(b_range[0] < b_range[1])) throw DomainError("range: expected lo < hi");
  const auto at = [grid](const std::vector<double>& r, int i) { return r[0] + (r[1] - r[0]) * i / (grid - 1); };

  std::vector<int> cells(static_cast<std::size_t>(grid) * grid);
  {
    auto os = open_output(output_path(cfg, "stability_map.csv"));
    os << "a,b,class\n";
    for (int j = 0; j < grid; ++j) {
      for (int i = 0; i < grid; ++i) {
        const double a = at(a_range, i);
        const double b = at(b_range, j);
        const CoefficientClass c = classify_coefficients(a, b);
        cells[static_cast<std::size_t>(j) * grid + i] = static_cast<int>(c);
        os << format_number(a) << ',' << format_number(b) << ',' << to_string(c) << '\n';
      }
    }
  }
  {
    io::HeatMap map;
    map.title = "Coefficient classes (alpha-independent)";
    map.x_label = "a";
    map.y_label = "b";
    const double da = (a_range[1] - a_range[0]) / (grid - 1);
    const double db = (b_range[1] - b_range[0]) / (grid - 1);
    map.x_lo = a_range[0] - da / 2;
    map.x_hi = a_range[1] + da / 2;
    map.y_lo = b_range[0] - db / 2;
    map.y_hi = b_range[1] + db / 2;
    map.nx = grid;
    map.ny = grid;
    map.cells = cells;
    map.class_names = {"a <= b < -a", "a + b >= 0", "other"};
    auto os = open_output(output_path(cfg, "stability_map.svg"));
    io::write_svg(os, map);
  }

  std::size_t counts[3] = {0, 0, 0};
  for (int c : cells) ++counts[c];
  out << "StableCriterion=" << counts[0] << " NonnegativeSum=" << counts[1] << " Inconclusive=" << counts[2] << '\n';

  if (verify) {
    std::vector<std::size_t> stable;
    for (std::size_t k = 0; k < cells.size(); ++k) {
      if (cells[k] == static_cast<int>(CoefficientClass::StableCriterion)) stable.push_back(k);
    }
    std::mt19937_64 rng(cfg.seed);
    std::shuffle(stable.begin(), stable.end(), rng);
    stable.resize(std::min<std::size_t>(stable.size(), static_cast<std::size_t>(std::max(verify_count, 0))));
    std::size_t zero = 0;
    std::size_t disagree = 0;
    std::size_t degenerate = 0;
    for (std::size_t k : stable) {
      ProblemParams p = cfg.problem;
      p.a = at(a_range, static_cast<int>(k % grid));
      p.b = at(b_range, static_cast<int>(k / grid));
      try {
        const int n = count_roots(p, ComplexRegion::rectangle(0.0, 10.0, -100.0, 100.0));
        if (n == 0) {
          ++zero;
        } else {
          ++disagree;
          out << "disagreement a=" << format_number(p.a) << " b=" << format_number(p.b) << " count=" << n << '\n';
        }
      } catch (const BoundaryDegenerate&) {
        ++degenerate;
        out << "degenerate boundary a=" << format_number(p.a) << " b=" << format_number(p.b) << '\n';
      }
    }
    out << "verify: " << zero << "/" << stable.size() << " zero right-half-plane counts, " << disagree
        << " disagreements, " << degenerate << " degenerate\n";
  }
  return kOk;
}

int cmd_certify(const RunConfig& cfg, std::ostream& out) {
  require_params(cfg);
  CertifyOptions opt;
  opt.lipschitz.seed = cfg.seed;
  opt.contour = cfg.contour();
  const StabilityVerdict v = certify(cfg.problem, cfg.make_nonlinearity(), opt);
  write_verdict(out, v);
  if (v.constants) {
    out << "sup_E1=" << format_number(v.constants->sup_E1) << '\n';
    out << "l1_Ealpha=" << format_number(v.constants->l1_Ealpha) << '\n';
    out << "compensated_E1=" << format_number(v.constants->compensated_E1) << '\n';
    out << "compensated_Ealpha=" << format_number(v.constants->compensated_Ealpha) << '\n';
  }
  return kOk;
}

}  // namespace

// ---------------------------------------------------------------------------

Nonlinearity RunConfig::make_nonlinearity() const {
  if (nonlinearity == "zero") return Nonlinearity::zero();
  if (nonlinearity == "example51") return Nonlinearity::example51();
  if (nonlinearity == "polynomial") {
    if (terms.empty()) throw DomainError("term: polynomial nonlinearity needs at least one --term c,i,j");
    std::vector<PolynomialTerm> parsed;
    for (const auto& t : terms) {
      std::vector<std::string> parts;
      std::stringstream ss(t);
      std::string part;
      while (std::getline(ss, part, ',')) parts.push_back(part);
      if (parts.size() != 3) throw DomainError("term: expected c,i,j but got '" + t + "'");
      parsed.push_back({parse_real(parts[0], "term"), parse_int(parts[1], "term"), parse_int(parts[2], "term")});
    }
    return Nonlinearity::polynomial(parsed);
  }
  throw DomainError("f: expected zero, example51 or polynomial, got '" + nonlinearity + "'");
}

HistoryFunction RunConfig::make_history() const {
  if (!(problem.tau > 0.0)) throw DomainError("tau must be positive");
  if (history.size() == 2 && history[0] == "const") {
    return HistoryFunction::constant(problem.tau, parse_real(history[1], "history"));
  }
  if (history.size() == 3 && history[0] == "affine") {
    return HistoryFunction::affine(problem.tau, parse_real(history[1], "history"),
                                   parse_real(history[2], "history"));
  }
  throw DomainError("history: expected 'const c' or 'affine p q'");
}

SolveConfig RunConfig::solve_config() const {
  SolveConfig s;
  s.h = h;
  s.t_end = t_end;
  s.corrector_iters = corrector_iters;
  s.contour = contour();
  s.validate(problem.tau);
  return s;
}

ContourSpec RunConfig::contour() const {
  ContourSpec c;
  c.mu = mu;
  c.theta = theta;
  c.validate();
  return c;
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  CLI::App app{"Caputo fractional delay equation toolkit", "fdde"};
  app.set_help_flag("--help", "Print this help message and exit");
  app.fallthrough();
  app.require_subcommand(1);
  app.set_config("--config", "", "Configuration file with key=value lines ('#' comments)");

  app.add_option("--alpha", cfg.problem.alpha, "Caputo order in (0, 1)")->capture_default_str();
  app.add_option("--a", cfg.problem.a, "Instantaneous coefficient")->capture_default_str();
  app.add_option("--b", cfg.problem.b, "Delayed coefficient")->capture_default_str();
  app.add_option("--tau", cfg.problem.tau, "Delay")->capture_default_str();
  app.add_option("--h", cfg.h, "Step size; tau must be a multiple")->capture_default_str();
  app.add_option("--t-end", cfg.t_end, "Time horizon")->capture_default_str();
  app.add_option("--corrector-iters", cfg.corrector_iters, "ABM corrector applications")->capture_default_str();
  app.add_option("--f", cfg.nonlinearity, "Nonlinearity: zero | example51 | polynomial")->capture_default_str();
  app.add_option("--term", cfg.terms, "Polynomial term c,i,j meaning c x^i y^j (repeatable)");
  app.add_option("--history", cfg.history, "Initial function: const c | affine p q")->expected(2, 3);
  app.add_option("--mu", cfg.mu, "Contour arc radius (scaled variable)")->capture_default_str();
  app.add_option("--theta", cfg.theta, "Contour ray angle in (pi/2, pi)")->capture_default_str();
  app.add_option("--out-dir", cfg.out_dir, "Output directory")->capture_default_str();
  app.add_option("--seed", cfg.seed, "Seed for sampled estimates")->capture_default_str();

  auto* example = app.add_subcommand("example51", "Benchmark problem: four trajectories, plot and certificate");

  auto* solve = app.add_subcommand("solve", "Solve for one initial function and write the trajectory CSV");
  std::string scheme = "abm";
  bool compare = false;
  std::string output = "trajectory.csv";
  solve->add_option("--scheme", scheme, "abm | picard")->capture_default_str();
  solve->add_flag("--compare", compare, "Run both schemes and report their max deviation");
  solve->add_option("--output", output, "CSV file name inside --out-dir")->capture_default_str();

  auto* ml = app.add_subcommand("ml-eval", "Evaluate the delayed Mittag-Leffler kernel");
  std::string beta = "1";
  std::vector<double> ts;
  bool decay = false;
  bool l1 = false;
  ml->add_option("--beta", beta, "1 | alpha")->capture_default_str();
  ml->add_option("--t", ts, "Evaluation times")->required();
  ml->add_flag("--decay", decay, "Also print the compensated magnitude");
  ml->add_flag("--l1", l1, "Also print the L1 norm record of the beta = alpha kernel");

  auto* roots = app.add_subcommand("roots", "Count and locate zeros of the characteristic function");
  Rectangle box{0.0, 10.0, -50.0, 50.0};
  int nodes = 512;
  roots->add_option("--re-lo", box.re_lo)->capture_default_str();
  roots->add_option("--re-hi", box.re_hi)->capture_default_str();
  roots->add_option("--im-lo", box.im_lo)->capture_default_str();
  roots->add_option("--im-hi", box.im_hi)->capture_default_str();
  roots->add_option("--nodes", nodes, "Initial boundary nodes per side")->capture_default_str();

  auto* map = app.add_subcommand("stability-map", "Classify a grid of (a, b) pairs");
  std::vector<double> a_range{-2.0, 2.0};
  std::vector<double> b_range{-2.0, 2.0};
  int grid = 41;
  bool verify = false;
  int verify_count = 10;
  map->add_option("--a-range", a_range, "lo hi")->expected(2)->capture_default_str();
  map->add_option("--b-range", b_range, "lo hi")->expected(2)->capture_default_str();
  map->add_option("--grid", grid, "Points per axis")->capture_default_str();
  map->add_flag("--verify", verify, "Count right-half-plane roots on sampled criterion cells");
  map->add_option("--verify-count", verify_count, "Cells checked by --verify")->capture_default_str();

  auto* cert = app.add_subcommand("certify", "Small-data stability certificate");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsageError;
  }

  try {
    if (*example) return cmd_example51(cfg, out, err);
    if (*solve) return cmd_solve(cfg, scheme, compare, output, out, err);
    if (*ml) return cmd_ml_eval(cfg, beta, ts, decay, l1, out);
    if (*roots) return cmd_roots(cfg, box, nodes, out, err);
    if (*map) return cmd_stability_map(cfg, a_range, b_range, grid, verify, verify_count, out);
    if (*cert) return cmd_certify(cfg, out);
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  } catch (const HypothesisViolated& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kNumericalFailure;
  }
  return kUsageError;
}

}  // namespace fdde::cli
