// kdvh: command-line front end.
//
// Exit codes: 0 ok, 2 configuration error, 3 numerical check failed,
// 4 symbolic mismatch.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "kdvh/kdvh.hpp"

namespace {

using namespace kdvh;

constexpr int exit_ok = 0;
constexpr int exit_config = 2;
constexpr int exit_numerical = 3;
constexpr int exit_symbolic = 4;

class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty()) {
      file_ = std::make_unique<std::ofstream>(path);
      if (!*file_) throw config_error("cannot write " + path);
    }
  }
  std::ostream& stream() { return file_ ? *file_ : std::cout; }

 private:
  std::unique_ptr<std::ofstream> file_;
};

std::vector<int> parse_index_range(const std::string& s) {
  std::vector<int> out;
  try {
    if (auto dots = s.find(".."); dots != std::string::npos) {
      const int lo = std::stoi(s.substr(0, dots));
      const int hi = std::stoi(s.substr(dots + 2));
      if (hi < lo) throw config_error("empty index range " + s);
      for (int j = lo; j <= hi; ++j) out.push_back(j);
    } else {
      out.push_back(std::stoi(s));
    }
  } catch (const std::logic_error&) {
    throw config_error("bad index range '" + s + "'");
  }
  return out;
}

std::string join(const std::vector<double>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ";" : "") + format_double(v[i]);
  return s;
}

// ---------------------------------------------------------------------------

struct HierarchyOpts {
  int k = 1;
  int cap = default_hierarchy_cap;
  std::string format = "text";
  std::string convention = "display";
  std::string out;
};

int run_hierarchy(const HierarchyOpts& o, std::uint64_t seed) {
  const auto conv = o.convention == "display" ? Convention::display : Convention::evolution;
  const auto spec = in_convention(generate_equation(o.k, o.cap), conv);
  Output out(o.out);
  auto& os = out.stream();
  if (o.format == "json") {
    nlohmann::ordered_json j;
    j["config"] = {{"command", "hierarchy"}, {"k", o.k},           {"cap", o.cap},
                   {"format", o.format},     {"convention", o.convention}, {"seed", seed}};
    const auto eq = equation_to_json(spec);
    for (const auto& [key, v] : eq.items()) j[key] = v;
    os << j.dump(2) << '\n';
  } else {
    os << "# command=hierarchy\n# k=" << o.k << "\n# cap=" << o.cap << "\n# format=text\n# convention="
       << o.convention << "\n# seed=" << seed << '\n';
    os << equation_text(spec) << '\n';
    write_text(os, spec.spatial_part());
  }
  return exit_ok;
}

// ---------------------------------------------------------------------------

struct IdentityOpts {
  bool lemma47 = false;
  bool operators = false;
  bool difference = false;
  bool grading = false;
  bool diffpoly = false;
  int nmax = 0;  // 0: 101 for --lemma47, 9 for --operators
  int kmax = 5;
  int count = 1000;
  std::string out;
};

int run_identities(const IdentityOpts& o, std::uint64_t seed) {
  const int modes = o.lemma47 + o.operators + o.difference + o.grading + o.diffpoly;
  if (modes != 1)
    throw config_error("choose exactly one of --lemma47, --operators, --difference, --grading, --diffpoly");
  Output out(o.out);
  auto& os = out.stream();
  bool ok = true;

  const int nmax = o.nmax > 0 ? o.nmax : (o.lemma47 ? 101 : 9);
  if (o.lemma47) {
    if (nmax < 3) throw config_error("--nmax must be >= 3");
    CsvWriter w(os, {{"command", "identities"}, {"mode", "lemma47"}, {"nmax", std::to_string(nmax)},
                     {"seed", std::to_string(seed)}},
                {"n", "j", "A_sum", "A_closed", "A_gen", "match"});
    for (int n = 3; n <= nmax; n += 2) {
      const auto gen = gen_function_coeffs(n);
      for (int j = 0; j < n; ++j) {
        const auto s = A_coeff_sum(n, j);
        const auto c = A_coeff_closed(n, j);
        const auto& g = gen[static_cast<std::size_t>(j)];
        const bool m = s == c && c == g;
        ok = ok && m;
        w.row(n, j, s.str(), c.str(), g.str(), m);
      }
    }
  } else if (o.operators) {
    if (nmax < 1 || nmax > class_sum_cap) throw config_error("--nmax must lie in [1, 11] for --operators");
    CsvWriter w(os, {{"command", "identities"}, {"mode", "operators"}, {"nmax", std::to_string(nmax)},
                     {"seed", std::to_string(seed)}},
                {"n", "m", "l", "words", "reversal_ok", "class_leading_ok"});
    for (int n = 1; n <= nmax; ++n) {
      for (int m = 0; m <= n; ++m) {
        const int l = n - m;
        std::size_t words = 0;
        bool rev = true;
        for_each_class_word(m, l, [&](const OpWord& word) {
          ++words;
          rev = rev && verify_reversal_identity(word);
        });
        const bool cls = verify_class_leading(m, l);
        ok = ok && rev && cls;
        w.row(n, m, l, words, rev, cls);
      }
    }
  } else if (o.difference) {
    CsvWriter w(os, {{"command", "identities"}, {"mode", "difference"}, {"kmax", std::to_string(o.kmax)},
                     {"seed", std::to_string(seed)}},
                {"k", "n", "F_count", "reconstruction_exact", "top_order_only_in_F0"});
    for (int k = 1; k <= o.kmax; ++k) {
      const auto split = difference_nonlinearity(generate_equation(k, std::max(o.kmax, default_hierarchy_cap)));
      const bool ex = split.exact();
      const bool top = top_order_only_in_F0(split, 2 * k + 1);
      ok = ok && ex && top;
      w.row(k, 2 * k + 1, split.F.size(), ex, top);
    }
  } else if (o.grading) {
    CsvWriter w(os, {{"command", "identities"}, {"mode", "grading"}, {"kmax", std::to_string(o.kmax)},
                     {"seed", std::to_string(seed)}},
                {"k", "n", "terms", "grading_ok", "max_order"});
    for (int k = 1; k <= o.kmax; ++k) {
      const auto spec = generate_equation(k, std::max(o.kmax, default_hierarchy_cap));
      const bool g = grading_check(spec) && spec.max_nonlinear_order() == spec.order() - 2;
      ok = ok && g;
      w.row(k, spec.order(), spec.nonlinearity.size(), g, spec.max_nonlinear_order());
    }
  } else {
    std::mt19937_64 rng(seed);
    std::size_t euler_fail = 0, integrate_fail = 0;
    for (int i = 0; i < o.count; ++i) {
      const auto p = random_diff_poly(rng);
      const auto dp = total_derivative(p);
      if (!euler_operator(dp).is_zero()) ++euler_fail;
      auto expect = p;
      expect.add_term({}, -p.constant_term());
      try {
        if (!(integrate_total_derivative(dp) == expect)) ++integrate_fail;
      } catch (const not_exact&) {
        ++integrate_fail;
      }
    }
    ok = euler_fail == 0 && integrate_fail == 0;
    CsvWriter w(os, {{"command", "identities"}, {"mode", "diffpoly"}, {"count", std::to_string(o.count)},
                     {"seed", std::to_string(seed)}},
                {"check", "count", "failures"});
    w.row("euler_kills_total_derivatives", o.count, euler_fail);
    w.row("integration_round_trip", o.count, integrate_fail);
  }
  return ok ? exit_ok : exit_symbolic;
}

// ---------------------------------------------------------------------------

struct CarlemanOpts {
  int n = 5;
  std::string j = "0..4";
  bool scan = false;
  bool roundtrip = false;
  bool mixed = false;
  std::vector<double> lambdas;
  double tau_min_exp = 0.05;
  double tau_max_exp = 6;
  double tau_step_exp = 0.05;
  double x_lo = -12;
  double x_hi = 1;
  double dx = 5e-4;
  std::size_t nx = 4096;
  std::size_t nt = 256;
  double length_x = 40;
  std::string out;
};

std::vector<double> scan_taus(const CarlemanOpts& o) {
  std::vector<double> taus;
  const auto steps = static_cast<int>(std::floor((o.tau_max_exp - o.tau_min_exp) / o.tau_step_exp + 1e-9));
  for (int i = 0; i <= steps; ++i) {
    const double t = std::pow(10.0, o.tau_min_exp + o.tau_step_exp * i);
    taus.push_back(-t);
    taus.push_back(t);
  }
  std::sort(taus.begin(), taus.end());
  return taus;
}

std::vector<double> scan_xs(const CarlemanOpts& o) {
  std::vector<double> xs;
  const auto count = static_cast<std::size_t>(std::floor((o.x_hi - o.x_lo) / o.dx + 1e-9)) + 1;
  for (std::size_t i = 0; i < count; ++i) xs.push_back(o.x_lo + o.dx * static_cast<double>(i));
  return xs;
}

int run_carleman(CarlemanOpts o, std::uint64_t seed) {
  const int modes = o.scan + o.roundtrip + o.mixed;
  if (modes != 1) throw config_error("choose exactly one of --scan, --roundtrip, --mixed-norm");
  Output out(o.out);
  auto& os = out.stream();
  ConfigEcho echo{{"command", "carleman"}, {"n", std::to_string(o.n)}, {"seed", std::to_string(seed)}};

  if (o.scan) {
    if (o.lambdas.empty()) o.lambdas = {2.5, 5, 10, 20, 50, 100};
    const auto js = parse_index_range(o.j);
    const auto taus = scan_taus(o);
    const auto xs = scan_xs(o);
    echo.insert(echo.end(), {{"mode", "scan"},
                             {"j", o.j},
                             {"lambdas", join(o.lambdas)},
                             {"tau_exponents", format_double(o.tau_min_exp) + ":" + format_double(o.tau_step_exp) +
                                                   ":" + format_double(o.tau_max_exp)},
                             {"x_grid", format_double(o.x_lo) + ":" + format_double(o.dx) + ":" +
                                            format_double(o.x_hi)}});
    std::vector<ScanReport> reports;
    for (int j : js) {
      reports.push_back(bound_scan(o.n, j, taus, o.lambdas, xs));
      echo.emplace_back("slack_j" + std::to_string(j), format_double(reports.back().slack()));
    }
    CsvWriter w(os, echo, {"j", "lambda", "tau", "sup_abs_kernel"});
    for (const auto& r : reports)
      for (const auto& row : r.rows) w.row(r.j, row.lambda, row.tau, row.sup_abs_kernel);
    return exit_ok;
  }

  if (o.roundtrip) {
    if (o.lambdas.empty()) o.lambdas = {2.5, 5};
    echo.insert(echo.end(), {{"mode", "roundtrip"},
                             {"lambdas", join(o.lambdas)},
                             {"nx", std::to_string(o.nx)},
                             {"nt", std::to_string(o.nt)},
                             {"length_x", format_double(o.length_x)}});
    CsvWriter w(os, echo, {"lambda", "residual"});
    bool ok = true;
    for (double lam : o.lambdas) {
      const double r = t0_roundtrip_residual(o.n, lam, o.nx, o.nt, o.length_x);
      ok = ok && r <= 1e-6;
      w.row(lam, r);
    }
    return ok ? exit_ok : exit_numerical;
  }

  if (o.lambdas.empty()) o.lambdas = {2.5, 5, 10, 100};
  echo.insert(echo.end(), {{"mode", "mixed-norm"},
                           {"lambdas", join(o.lambdas)},
                           {"nx", std::to_string(o.nx)},
                           {"nt", std::to_string(o.nt)},
                           {"length_x", format_double(o.length_x)}});
  CsvWriter w(os, echo, {"lambda", "width", "ratio"});
  for (double lam : o.lambdas)
    for (double width : {0.5, 1.0, 2.0}) w.row(lam, width, t0_mixed_norm_ratio(o.n, lam, width, o.nx, o.nt, o.length_x));
  return exit_ok;
}

// ---------------------------------------------------------------------------

struct WeightOpts {
  double beta = 1;
  double N = 10;
  int order = 5;
  bool certify = false;
  std::string variant = "growing";
  std::string out;
};

int run_weights(const WeightOpts& o, std::uint64_t seed) {
  const auto variant = o.variant == "bounded" ? WeightVariant::bounded : WeightVariant::growing;
  const WeightSeq w(o.beta, o.N, variant);
  Output out(o.out);
  ConfigEcho echo{{"command", "weights"}, {"beta", format_double(o.beta)}, {"N", format_double(o.N)},
                  {"order", std::to_string(o.order)}, {"variant", o.variant}, {"seed", std::to_string(seed)}};
  if (o.certify) {
    const auto c = certify_phiN(w, o.order);
    echo.emplace_back("mode", "certify");
    CsvWriter csv(out.stream(), echo, {"constant", "value"});
    for (int j = 2; j <= o.order; ++j) csv.row("C_" + std::to_string(j), c.C_j[static_cast<std::size_t>(j)]);
    csv.row("C_prime", c.C_prime);
    csv.row("C_growth", c.C_growth);
    csv.row("C_N", c.C_N);
    csv.row("sup_phi_over_exp", c.max_over_exp);
    csv.row("sup_phi", c.sup_value);
    csv.row("samples", static_cast<double>(c.samples));
    return exit_ok;
  }
  echo.emplace_back("mode", "sample");
  CsvWriter csv(out.stream(), echo, {"x", "phi", "phi_x"});
  for (double x : certificate_grid(o.N)) {
    const auto d = w.derivatives(x);
    csv.row(x, d[0], d[1]);
  }
  return exit_ok;
}

// ---------------------------------------------------------------------------

struct SimulateOpts {
  int k = 1;
  std::size_t M = 4096;
  double L = 100;
  double x_lo = -30;
  double speed = 1;
  double dt = 1e-3;
  double t_end = 1;
  std::size_t snapshots = 10;
  std::string ic;
  std::string out;
};

int run_simulate(const SimulateOpts& o, std::uint64_t seed) {
  SpectralField u0;
  if (o.ic.empty()) {
    const double v = o.speed;
    u0 = SpectralField::sample(o.x_lo, o.L, o.M, [v](double x) {
      const double c = std::cosh(std::sqrt(v) * x / 2);
      return 3 * v / (c * c);
    });
  } else {
    u0 = read_field_csv(o.ic);
  }
  SolverConfig cfg;
  cfg.spec = generate_equation(o.k);
  cfg.dt = o.dt;
  cfg.t_end = o.t_end;
  cfg.snapshots = o.snapshots;
  if (o.dt == 0) cfg.dt = suggest_dt(u0, cfg);
  const auto tr = evolve(u0, cfg);
  Output out(o.out);
  ConfigEcho echo{{"command", "simulate"},
                  {"k", std::to_string(o.k)},
                  {"M", std::to_string(u0.size())},
                  {"x_lo", format_double(u0.x_lo)},
                  {"L", format_double(u0.length)},
                  {"dt", format_double(tr.dt_used)},
                  {"t_end", format_double(o.t_end)},
                  {"snapshots", std::to_string(o.snapshots)},
                  {"ic", o.ic.empty() ? "soliton speed=" + format_double(o.speed) : o.ic},
                  {"seed", std::to_string(seed)}};
  write_trajectory_csv(out.stream(), echo, tr);
  return exit_ok;
}

// ---------------------------------------------------------------------------

struct DecayOpts {
  DecayRecipe recipe;
  double ratio_limit = 1e3;
  std::string out;
  std::string traj_out;
};

ConfigEcho decay_echo(const DecayRecipe& r) {
  return {{"k", std::to_string(r.k)},
          {"beta", format_double(r.beta)},
          {"M", std::to_string(r.M)},
          {"x_lo", format_double(r.x_lo)},
          {"L", format_double(r.length)},
          {"amplitude", format_double(r.amplitude)},
          {"width", format_double(r.width)},
          {"epsilon", format_double(r.epsilon)},
          {"bump_width", format_double(r.bump_width)},
          {"power", std::to_string(r.power)},
          {"shift", format_double(r.shift)},
          {"dt", format_double(r.dt)},
          {"t_end", format_double(r.t_end)},
          {"snapshots", std::to_string(r.snapshots)},
          {"seam_width", format_double(r.seam_width)},
          {"seam_tolerance", format_double(r.seam_tolerance)}};
}

int run_decay_cmd(const DecayOpts& o, std::uint64_t seed) {
  const auto rep = run_decay(o.recipe);
  ConfigEcho echo{{"command", "decay"}};
  for (auto& kv : decay_echo(o.recipe)) echo.push_back(kv);
  echo.insert(echo.end(), {{"seed", std::to_string(seed)},
                           {"dt_used", format_double(rep.u1.dt_used)},
                           {"rate", format_double(rep.rate)},
                           {"max_ratio", format_double(rep.max_ratio)},
                           {"seam_level", format_double(rep.seam_level)}});
  {
    Output out(o.out);
    CsvWriter w(out.stream(), echo, {"t", "W", "ratio"});
    for (std::size_t i = 0; i < rep.t.size(); ++i) w.row(rep.t[i], rep.W[i], rep.W[i] / rep.W.front());
  }
  if (!o.traj_out.empty()) {
    Output tr(o.traj_out);
    auto e = echo;
    e.emplace_back("field", "w=u1-u2");
    write_trajectory_csv(tr.stream(), e, rep.difference_trajectory());
  }
  return rep.max_ratio <= o.ratio_limit ? exit_ok : exit_numerical;
}

// ---------------------------------------------------------------------------

struct ProbeOpts {
  std::string traj;
  double r = 0.33;
  double Rmin = 2;
  double Rmax = 40;
  double Rstep = 1;
  int k = 2;
  std::string eps = "1/100";
  std::size_t M = 4096;
  std::string out;
};

int run_probe(const ProbeOpts& o, std::uint64_t seed) {
  if (!(o.Rstep > 0) || o.Rmax < o.Rmin) throw config_error("bad R grid");
  Trajectory w;
  if (o.traj.empty()) {
    DecayRecipe r;
    r.k = o.k;
    r.M = o.M;
    w = run_decay(r).difference_trajectory();
  } else {
    w = read_trajectory_csv(o.traj);
  }
  std::vector<double> Rs;
  for (double R = o.Rmin; R <= o.Rmax + 1e-9; R += o.Rstep) Rs.push_back(R);
  const auto rep = run_lower_probe(w, 2 * o.k + 1, o.r, Rs, parse_fraction(o.eps));
  Output out(o.out);
  ConfigEcho echo{{"command", "lower-probe"},
                  {"traj", o.traj.empty() ? "decay-default M=" + std::to_string(o.M) : o.traj},
                  {"k", std::to_string(o.k)},
                  {"r", format_double(o.r)},
                  {"R_grid", format_double(o.Rmin) + ":" + format_double(o.Rstep) + ":" + format_double(o.Rmax)},
                  {"eps", o.eps},
                  {"seed", std::to_string(seed)},
                  {"gamma", rep.gamma.str()},
                  {"norm_Q", format_double(rep.norm_Q)},
                  {"noise_floor", format_double(rep.noise_floor)},
                  {"A_R_monotone_decreasing", rep.monotone_decreasing ? "1" : "0"}};
  CsvWriter csv(out.stream(), echo, {"R", "R_gamma", "A_R", "log_A_R", "implied_constant", "vacuous"});
  for (const auto& row : rep.rows)
    csv.row(row.R, row.R_gamma, row.A_R, row.log_A_R, row.implied_constant, row.vacuous);
  return exit_ok;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"KdV hierarchy: symbolic identities, Carleman multipliers, weights and simulations"};
  app.require_subcommand(1);
  app.fallthrough();
  std::uint64_t seed = 0;
  app.add_option("--seed", seed, "Seed for randomized checks")->capture_default_str();

  HierarchyOpts ho;
  auto* hier = app.add_subcommand("hierarchy", "Generate a flow of the hierarchy");
  hier->add_option("--k", ho.k, "Hierarchy level (order n = 2k+1)")->required();
  hier->add_option("--cap", ho.cap, "Largest admissible k")->capture_default_str();
  hier->add_option("--format", ho.format)->check(CLI::IsMember({"json", "text"}))->capture_default_str();
  hier->add_option("--convention", ho.convention, "display: +d^n u linear term; evolution: (-1)^{k+1} d^n u")
      ->check(CLI::IsMember({"display", "evolution"}))
      ->capture_default_str();
  hier->add_option("--out", ho.out, "Output file (default stdout)");

  IdentityOpts io;
  auto* ident = app.add_subcommand("identities", "Exact identity checks");
  ident->add_flag("--lemma47", io.lemma47, "Three-way coefficient identity for odd n <= nmax");
  ident->add_flag("--operators", io.operators, "Operator word identities for n <= nmax");
  ident->add_flag("--difference", io.difference, "Difference-nonlinearity splitting for k <= kmax");
  ident->add_flag("--grading", io.grading, "Grading law for k <= kmax");
  ident->add_flag("--diffpoly", io.diffpoly, "Euler operator and integration on random polynomials");
  ident->add_option("--nmax", io.nmax, "Largest n (default 101 for --lemma47, 9 for --operators)");
  ident->add_option("--kmax", io.kmax)->capture_default_str();
  ident->add_option("--count", io.count)->capture_default_str();
  ident->add_option("--out", io.out);

  CarlemanOpts co;
  auto* carl = app.add_subcommand("carleman", "Carleman multipliers and kernels");
  carl->add_option("--n", co.n)->capture_default_str();
  carl->add_option("--j", co.j, "Index or range a..b")->capture_default_str();
  carl->add_flag("--scan", co.scan, "Kernel sup-bound scan");
  carl->add_flag("--roundtrip", co.roundtrip, "T_0 operator-inverse round trip");
  carl->add_flag("--mixed-norm", co.mixed, "Mixed-norm ratio of T_0 on a test family");
  carl->add_option("--lambda", co.lambdas, "Weight rates (repeatable)");
  carl->add_option("--tau-exp-min", co.tau_min_exp)->capture_default_str();
  carl->add_option("--tau-exp-max", co.tau_max_exp)->capture_default_str();
  carl->add_option("--tau-exp-step", co.tau_step_exp)->capture_default_str();
  carl->add_option("--x-lo", co.x_lo)->capture_default_str();
  carl->add_option("--x-hi", co.x_hi)->capture_default_str();
  carl->add_option("--dx", co.dx)->capture_default_str();
  carl->add_option("--nx", co.nx)->capture_default_str();
  carl->add_option("--nt", co.nt)->capture_default_str();
  carl->add_option("--length-x", co.length_x)->capture_default_str();
  carl->add_option("--out", co.out);

  WeightOpts wo;
  auto* weights = app.add_subcommand("weights", "Weight sequence and its certificate");
  weights->add_option("--beta", wo.beta)->capture_default_str();
  weights->add_option("--N", wo.N)->capture_default_str();
  weights->add_option("--order", wo.order)->capture_default_str();
  weights->add_option("--variant", wo.variant)->check(CLI::IsMember({"growing", "bounded"}))->capture_default_str();
  weights->add_flag("--certify", wo.certify, "Emit the empirical constants");
  weights->add_option("--out", wo.out);

  SimulateOpts so;
  auto* sim = app.add_subcommand("simulate", "Evolve initial data under a flow");
  sim->add_option("--k", so.k)->capture_default_str();
  sim->add_option("--M", so.M)->capture_default_str();
  sim->add_option("--L", so.L, "Period (default soliton data only)")->capture_default_str();
  sim->add_option("--x-lo", so.x_lo, "Left end (default soliton data only)")->capture_default_str();
  sim->add_option("--speed", so.speed, "Soliton speed for the default data")->capture_default_str();
  sim->add_option("--dt", so.dt, "0 picks half the stability limit")->capture_default_str();
  sim->add_option("--t-end", so.t_end)->capture_default_str();
  sim->add_option("--snapshots", so.snapshots)->capture_default_str();
  sim->add_option("--ic", so.ic, "Initial data CSV x,u");
  sim->add_option("--out", so.out);

  DecayOpts dopt;
  auto& dr = dopt.recipe;
  auto* decay = app.add_subcommand("decay", "Weighted decay of the difference of two solutions");
  decay->add_option("--k", dr.k)->capture_default_str();
  decay->add_option("--beta", dr.beta)->capture_default_str();
  decay->add_option("--M", dr.M)->capture_default_str();
  decay->add_option("--L", dr.length)->capture_default_str();
  decay->add_option("--x-lo", dr.x_lo)->capture_default_str();
  decay->add_option("--amplitude", dr.amplitude)->capture_default_str();
  decay->add_option("--width", dr.width)->capture_default_str();
  decay->add_option("--epsilon", dr.epsilon)->capture_default_str();
  decay->add_option("--bump-width", dr.bump_width)->capture_default_str();
  decay->add_option("--power", dr.power)->capture_default_str();
  decay->add_option("--shift", dr.shift)->capture_default_str();
  decay->add_option("--dt", dr.dt, "0 picks half the stability limit")->capture_default_str();
  decay->add_option("--t-end", dr.t_end)->capture_default_str();
  decay->add_option("--snapshots", dr.snapshots)->capture_default_str();
  decay->add_option("--ratio-limit", dopt.ratio_limit)->capture_default_str();
  decay->add_option("--out", dopt.out);
  decay->add_option("--traj-out", dopt.traj_out, "Write w = u1 - u2 as CSV t,x,u");

  ProbeOpts po;
  auto* probe = app.add_subcommand("lower-probe", "Both sides of the lower estimate on a trajectory");
  probe->add_option("--traj", po.traj, "Trajectory CSV t,x,u of w (default: run decay)");
  probe->add_option("--r", po.r)->capture_default_str();
  probe->add_option("--Rmin", po.Rmin)->capture_default_str();
  probe->add_option("--Rmax", po.Rmax)->capture_default_str();
  probe->add_option("--Rstep", po.Rstep)->capture_default_str();
  probe->add_option("--k", po.k)->capture_default_str();
  probe->add_option("--eps", po.eps, "Exponent margin as a fraction")->capture_default_str();
  probe->add_option("--M", po.M, "Grid of the default decay run")->capture_default_str();
  probe->add_option("--out", po.out);

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return exit_config;
  }

  try {
    if (*hier) return run_hierarchy(ho, seed);
    if (*ident) return run_identities(io, seed);
    if (*carl) return run_carleman(co, seed);
    if (*weights) return run_weights(wo, seed);
    if (*sim) return run_simulate(so, seed);
    if (*decay) return run_decay_cmd(dopt, seed);
    if (*probe) return run_probe(po, seed);
  } catch (const kdvh::error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return e.exit_code();
  }
  return exit_config;
}
