#include "genscatter/cli/commands.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <numbers>
#include <set>
#include <sstream>

#include "CLI11.hpp"

#include "genscatter/cli/config.hpp"
#include "genscatter/cli/table.hpp"
#include "genscatter/coulomb.hpp"
#include "genscatter/diracq.hpp"
#include "genscatter/ergodic.hpp"
#include "genscatter/errors.hpp"
#include "genscatter/oscillate.hpp"
#include "genscatter/parallel.hpp"
#include "genscatter/radial.hpp"
#include "genscatter/renorm.hpp"

namespace genscatter::cli {

namespace {

using Complex = std::complex<double>;
constexpr double pi = std::numbers::pi;

// "family:arg:arg + family:arg", e.g. "coulomb:1+exponential:-0.3"
PotentialSpec parse_potential(const std::string &text, double a) {
  PotentialSpec out(a);
  std::stringstream ss(text);
  for (std::string term; std::getline(ss, term, '+');) {
    term.erase(std::remove(term.begin(), term.end(), ' '), term.end());
    if (term.empty()) throw ConfigError("potential '" + text + "': empty term");
    std::vector<std::string> f;
    std::stringstream ts(term);
    for (std::string p; std::getline(ts, p, ':');) f.push_back(p);
    const std::string fam = f[0];
    std::vector<double> args;
    for (std::size_t i = 1; i < f.size(); ++i) args.push_back(parse_list(f[i]).front());
    auto need = [&](std::size_t n) {
      if (args.size() != n)
        throw ConfigError("potential term '" + term + "': " + fam + " takes " + std::to_string(n) +
                          " argument(s)");
    };
    if (fam == "zero") {
      need(0);
    } else if (fam == "coulomb") {
      need(1);
      out = out + PotentialSpec::coulomb(args[0], a);
    } else if (fam == "inverse-square") {
      need(1);
      out = out + PotentialSpec::inverse_square(args[0], a);
    } else if (fam == "inverse-linear") {
      need(1);
      out = out + PotentialSpec::inverse_linear(args[0], a);
    } else if (fam == "exponential") {
      need(1);
      out = out + PotentialSpec::exponential(args[0], a);
    } else if (fam == "bump") {
      need(3);
      out = out + PotentialSpec::compact_bump(args[0], args[1], args[2], a);
    } else {
      throw ConfigError("potential: unknown family '" + fam + "'");
    }
  }
  return out;
}

std::vector<double> grid_or_list(const std::string &text) {
  return text.find(':') != std::string::npos ? parse_grid(text).values() : parse_list(text);
}

struct Globals {
  std::string output;
  std::string format;
  std::string config;
  unsigned threads = 0;
};

using Handler = std::function<Table()>;

struct Command {
  CLI::App *app = nullptr;
  Handler handler;
};

// ---- subcommands ----------------------------------------------------------

void add_coulomb_table(CLI::App &root, std::vector<Command> &cmds) {
  auto *app = root.add_subcommand("coulomb-table", "Coulomb s_dyn and s_st on a k grid");
  struct P {
    double z = 1.0;
    int lmax = 5;
    std::string kgrid = "0.1:10:100:log";
  };
  auto p = std::make_shared<P>();
  app->add_option("--z", p->z, "charge parameter");
  app->add_option("--lmax", p->lmax, "largest partial wave");
  app->add_option("--k-grid", p->kgrid, "min:max:count[:linear|log]");
  cmds.push_back({app, [p] {
    if (p->lmax < 0) throw ConfigError("--lmax must be nonnegative");
    const auto ks = parse_grid(p->kgrid).values();
    const int nl = p->lmax + 1;
    std::vector<std::vector<Cell>> rows(ks.size() * nl);
    parallel_for(rows.size(), [&](std::size_t i) {
      const double k = ks[i / nl];
      const int l = static_cast<int>(i % nl);
      const coulomb::Params cp{p->z, k, l};
      const Complex d = coulomb::s_dyn(cp), s = coulomb::s_st(cp);
      const double err = std::max(std::abs(std::abs(d) - 1.0), std::abs(std::abs(s) - 1.0));
      rows[i] = {k, (long long)l, d.real(), d.imag(), s.real(), s.imag(), err};
    });
    Table t;
    t.columns = {"k", "ell", "re_s_dyn", "im_s_dyn", "re_s_st", "im_s_st", "abs_err_unitarity"};
    t.rows = std::move(rows);
    return t;
  }});
}

void add_radial_extract(CLI::App &root, std::vector<Command> &cmds) {
  auto *app = root.add_subcommand("radial-extract", "stationary S_l(k) from the radial equation");
  struct P {
    std::string potential = "coulomb:1";
    double a = 1.0;
    int lmax = 3;
    std::string kgrid = "0.5:2:4:linear";
    double R = 1000.0;
    double rtol = 1e-10;
    bool raw = false;
  };
  auto p = std::make_shared<P>();
  app->add_option("--potential", p->potential, "sum of family:args terms");
  app->add_option("--a", p->a, "reference point of the antiderivative");
  app->add_option("--lmax", p->lmax, "largest partial wave");
  app->add_option("--k-grid", p->kgrid, "min:max:count[:linear|log]");
  app->add_option("--R", p->R, "matching radius");
  app->add_option("--rtol", p->rtol, "ODE relative tolerance");
  app->add_flag("--raw", p->raw, "match without deviation factor and tail corrections");
  cmds.push_back({app, [p] {
    const auto pot = parse_potential(p->potential, p->a);
    if (p->lmax < 0) throw ConfigError("--lmax must be nonnegative");
    const auto ks = parse_grid(p->kgrid).values();
    radial::ExtractOptions opt;
    opt.solve.rtol = p->rtol;
    opt.use_deviation = opt.tail_corrections = !p->raw;
    const int nl = p->lmax + 1;
    std::vector<std::vector<Cell>> rows(ks.size() * nl);
    parallel_for(rows.size(), [&](std::size_t i) {
      const double k = ks[i / nl];
      const int l = static_cast<int>(i % nl);
      const Complex s = radial::extract_s_schrodinger(l, k, pot, p->R, opt);
      rows[i] = {k, (long long)l, s.real(), s.imag(), std::abs(s), std::arg(s)};
    });
    Table t;
    t.add_meta("potential", pot.describe());
    t.add_meta("ode_rtol", p->rtol);
    t.columns = {"k", "ell", "re_s", "im_s", "abs_s", "arg_s"};
    t.rows = std::move(rows);
    return t;
  }});
}

void add_dirac_extract(CLI::App &root, std::vector<Command> &cmds) {
  auto *app = root.add_subcommand("dirac-extract", "Dirac or Dirac-type S(lambda, kappa)");
  struct P {
    std::string system = "dirac";
    double kappa = 1.0, A = 0.5, m = 1.0;
    std::string phi = "zero", a_fn = "zero", b_fn = "inverse-linear:0.5";
    std::string lgrid = "1.5:4:6:linear";
    double R = 1000.0, rtol = 1e-10;
  };
  auto p = std::make_shared<P>();
  app->add_option("--system", p->system, "dirac | dirac-type")->check(CLI::IsMember({"dirac", "dirac-type"}));
  app->add_option("--kappa", p->kappa, "angular quantum number (dirac)");
  app->add_option("--A", p->A, "Coulomb strength, v = -A/r + phi (dirac)");
  app->add_option("--phi", p->phi, "smooth part of v (dirac)");
  app->add_option("--a-fn", p->a_fn, "coefficient a(r) (dirac-type)");
  app->add_option("--b-fn", p->b_fn, "coefficient b(r) (dirac-type)");
  app->add_option("--m", p->m, "mass");
  app->add_option("--lambda-grid", p->lgrid, "energies, grid or comma list");
  app->add_option("--R", p->R, "matching radius");
  app->add_option("--rtol", p->rtol, "ODE relative tolerance");
  cmds.push_back({app, [p] {
    const auto ls = grid_or_list(p->lgrid);
    radial::ExtractOptions opt;
    opt.solve.rtol = p->rtol;
    const bool dirac = p->system == "dirac";
    const auto v = PotentialSpec::dirac(p->A, parse_potential(p->phi, 1.0));
    const auto a = parse_potential(p->a_fn, 1.0), b = parse_potential(p->b_fn, 1.0);
    std::vector<std::vector<Cell>> rows(ls.size());
    parallel_for(ls.size(), [&](std::size_t i) {
      const auto d = dirac ? radial::extract_s_dirac(p->kappa, ls[i], p->m, v, p->R, opt)
                           : radial::extract_s_dirac_type(a, b, ls[i], p->m, p->R, opt);
      rows[i] = {ls[i], d.s11.real(), d.s11.imag(), d.s22.real(), d.s22.imag(), d.c11.real(),
                 d.c11.imag()};
    });
    Table t;
    t.add_meta("system", p->system);
    t.add_meta("ode_rtol", p->rtol);
    t.columns = {"lambda", "re_s11", "im_s11", "re_s22", "im_s22", "re_c11", "im_c11"};
    t.rows = std::move(rows);
    return t;
  }});
}

void add_ergodic_check(CLI::App &root, std::vector<Command> &cmds) {
  auto *app = root.add_subcommand("ergodic-check", "stationary versus dynamical deviation factors");
  struct P {
    std::string system = "schrodinger";
    std::string family = "coulomb";
    std::string potential;
    double z = 1.0, c = 1.0, r1 = 1.0, r2 = 3.0, a = 1.0;
    double k = 1.0, p = 1.0, m = 1.0, tau = 5.0;
    std::string tgrid = "1:1e4:50:log";
  };
  auto p = std::make_shared<P>();
  app->add_option("--system", p->system, "schrodinger | dirac")->check(CLI::IsMember({"schrodinger", "dirac"}));
  app->add_option("--family", p->family, "coulomb | inverse-square | inverse-linear | exponential | bump");
  app->add_option("--potential", p->potential, "explicit potential, overrides --family");
  app->add_option("--z", p->z, "Coulomb charge");
  app->add_option("--c", p->c, "strength of the smooth families");
  app->add_option("--r1", p->r1, "bump support start");
  app->add_option("--r2", p->r2, "bump support end");
  app->add_option("--a", p->a, "reference point (schrodinger)");
  app->add_option("--k", p->k, "wavenumber (schrodinger)");
  app->add_option("--p", p->p, "momentum (dirac)");
  app->add_option("--m", p->m, "mass (dirac)");
  app->add_option("--tau", p->tau, "shift for the admissibility surrogate");
  app->add_option("--t-grid", p->tgrid, "times, grid or comma list");
  cmds.push_back({app, [p] {
    const bool dirac = p->system == "dirac";
    const double a = dirac ? 1.0 : p->a;
    std::string spec = p->potential;
    if (spec.empty()) {
      const auto num = format_double;
      if (p->family == "coulomb") spec = "coulomb:" + num(p->z);
      else if (p->family == "bump") spec = "bump:" + num(p->c) + ":" + num(p->r1) + ":" + num(p->r2);
      else spec = p->family + ":" + num(p->c);
    }
    const auto pot = parse_potential(spec, a);
    const auto ts = grid_or_list(p->tgrid);
    Table t;
    t.add_meta("potential", pot.describe());
    t.add_meta("admissibility_t", 1e6);
    if (!dirac) {
      const double dev = ergodic::check_ergodic_schrodinger(pot, p->k, ts);
      const std::vector<double> ks{p->k};
      const double adm = ergodic::check_admissibility(ergodic::schrodinger_dynamical(pot), ks, p->tau);
      t.columns = {"k", "max_deviation", "admissibility_residual"};
      t.rows.push_back({p->k, dev, adm});
    } else {
      const auto chk = ergodic::check_ergodic_dirac(pot, p->p, p->m, ts);
      const Complex c = ergodic::dirac_constant(pot, p->p, p->m);
      const std::vector<double> ps{p->p};
      const double adm = ergodic::check_admissibility(ergodic::dirac_dynamical(pot, p->m), ps, p->tau);
      t.columns = {"p", "constancy_deviation", "modulus_deviation", "re_c", "im_c",
                   "re_c_direct", "im_c_direct", "admissibility_residual"};
      t.rows.push_back({p->p, chk.constancy, chk.modulus, chk.c_of_p.real(), chk.c_of_p.imag(),
                        c.real(), c.imag(), adm});
    }
    return t;
  }});
}

void add_dirac_structure(CLI::App &root, std::vector<Command> &cmds) {
  auto *app = root.add_subcommand("dirac-structure", "validate a candidate S(q) against the block structure");
  struct P {
    std::string q = "1,2,3";
    double m = 1.0;
    int dim = 4;
    std::string matrix;
    long long seed = -1;
    std::string spectral = "0.3,-1.7";
    std::string corollary;
  };
  auto p = std::make_shared<P>();
  app->add_option("--q", p->q, "momentum q1,q2,q3");
  app->add_option("--m", p->m, "mass");
  app->add_option("--dim", p->dim, "4 or 8")->check(CLI::IsMember({4, 8}));
  app->add_option("--matrix", p->matrix, "JSON file of [re, im] rows");
  app->add_option("--random-seed", p->seed, "use a seeded Haar unitary");
  app->add_option("--spectral", p->spectral, "phases of exp(i f(H)) on the two eigenvalues");
  app->add_option("--corollary", p->corollary, "1-based k,l for the modulus check");
  cmds.push_back({app, [p] {
    const auto qv = parse_list(p->q);
    if (qv.size() != 3) throw ConfigError("--q needs three components");
    const diracq::Momentum3 q{qv[0], qv[1], qv[2]};
    diracq::Matrix s;
    std::string source;
    if (!p->matrix.empty()) {
      std::ifstream in(p->matrix);
      if (!in) throw ConfigError("--matrix: cannot open '" + p->matrix + "'");
      std::stringstream buf;
      buf << in.rdbuf();
      s = diracq::from_json(buf.str());
      source = "file";
    } else if (p->seed >= 0) {
      s = diracq::random_unitary(p->dim, static_cast<std::uint64_t>(p->seed));
      source = "haar";
    } else {
      const auto ph = parse_list(p->spectral);
      if (ph.size() != 2) throw ConfigError("--spectral needs two phases");
      const auto d = p->dim == 4 ? diracq::eigensystem(q, p->m) : diracq::big_eigensystem(q, p->m);
      s = diracq::spectral_function(d, ph[0], ph[1]);
      source = "spectral";
    }
    const auto c = diracq::check_structure(s, q, p->m);
    Table t;
    t.add_meta("source", source);
    t.columns = {"dim", "offblock_norm", "block_unitarity_defect"};
    std::vector<Cell> row{(long long)s.rows(), c.offblock_norm, c.block_unitarity_defect};
    if (!p->corollary.empty()) {
      const auto kl = parse_list(p->corollary);
      if (kl.size() != 2) throw ConfigError("--corollary needs k,l");
      t.columns.push_back("corollary_modulus");
      row.push_back(diracq::corollary_modulus(s, static_cast<int>(kl[0]), static_cast<int>(kl[1])));
    }
    t.rows.push_back(std::move(row));
    return t;
  }});
}

Table growth_table(const osc::GrowthStudy &st) {
  Table t;
  t.add_meta("raw_slope", st.raw_fit.slope);
  t.add_meta("regularized_slope", st.regularized_fit.slope);
  t.columns = {"scale", "re_raw", "im_raw", "re_regularized", "im_regularized"};
  for (const auto &r : st.rows)
    t.rows.push_back({r.scale, r.raw.real(), r.raw.imag(), r.regularized.real(), r.regularized.imag()});
  return t;
}

void add_divergence_demo(CLI::App &root, std::vector<Command> &cmds) {
  auto *app = root.add_subcommand("divergence-demo", "first-order coefficient growth and its removal");
  struct P {
    double k = 1.0, z = 1.0;
    int ell = 0;
    std::string scales = "1e2,1e3,1e4";
  };
  auto p = std::make_shared<P>();
  app->add_option("--k", p->k, "wavenumber");
  app->add_option("--z", p->z, "charge parameter");
  app->add_option("--ell", p->ell, "partial wave");
  app->add_option("--scales", p->scales, "values of t = -tau");
  cmds.push_back({app, [p] {
    const auto sc = grid_or_list(p->scales);
    const auto f = osc::TestFunction::bump(0.5 * p->k, 2.0 * p->k);
    const osc::QuadControl qc;
    auto t = growth_table(osc::s1_growth({p->z, p->k, p->ell}, sc, f, qc));
    t.add_meta("expected_raw_slope", p->z / p->k);
    t.add_meta("limit_re", coulomb::s1_coefficient(p->k, p->ell).real() * p->z);
    t.add_meta("limit_im", coulomb::s1_coefficient(p->k, p->ell).imag() * p->z);
    t.add_meta("quad_abs_tol", qc.abs_tol);
    t.add_meta("quad_rel_tol", qc.rel_tol);
    return t;
  }});
}

void add_example82(CLI::App &root, std::vector<Command> &cmds) {
  auto *app = root.add_subcommand("example82", "second-order coefficient of the bilinear example");
  struct P {
    double q = 1.0, pval = 1.0, phi = pi / 2.0;
    std::string scales = "1e2,1e3,1e4";
  };
  auto p = std::make_shared<P>();
  app->add_option("--q", p->q, "momentum");
  app->add_option("--p", p->pval, "constant value of p(q)");
  app->add_option("--phi", p->phi, "phase used in the deviation factors");
  app->add_option("--scales", p->scales, "values of t = -tau");
  cmds.push_back({app, [p] {
    const auto sc = grid_or_list(p->scales);
    const double pv = p->pval;
    const osc::QuadControl qc;
    auto t = growth_table(osc::s2_growth(p->q, sc, [pv](double) { return pv; }, p->phi, qc));
    t.add_meta("reference_slope", -pi * pv * pv / (2.0 * p->q));
    t.add_meta("quad_abs_tol", qc.abs_tol);
    t.add_meta("quad_rel_tol", qc.rel_tol);
    return t;
  }});
}

void add_renorm_fit(CLI::App &root, std::vector<Command> &cmds) {
  auto *app = root.add_subcommand("renorm-fit", "fit a divergence profile and regularize");
  struct P {
    std::string samples;
    std::string synthetic = "2,3,0.5,1,1";
    std::string lgrid = "10:1e4:13:log";
    double eps = 0.1;
    bool no_tail = false;
  };
  auto p = std::make_shared<P>();
  app->add_option("--samples", p->samples, "CSV with columns L, re_a2, im_a2");
  app->add_option("--synthetic", p->synthetic, "phi,psi,nu,mu,tail of a synthetic curve");
  app->add_option("--L-grid", p->lgrid, "cutoffs for the synthetic curve");
  app->add_option("--eps", p->eps, "coupling used in U0");
  app->add_flag("--no-tail-column", p->no_tail, "fit with the bare four-term basis");
  cmds.push_back({app, [p] {
    std::vector<std::pair<double, Complex>> s;
    if (!p->samples.empty()) {
      std::ifstream in(p->samples);
      if (!in) throw ConfigError("--samples: cannot open '" + p->samples + "'");
      s = renorm::read_samples_csv(in);
    } else {
      const auto c = parse_list(p->synthetic);
      if (c.size() != 5) throw ConfigError("--synthetic needs phi,psi,nu,mu,tail");
      for (double L : parse_grid(p->lgrid).values())
        s.emplace_back(L, Complex(0, c[0] * L * L + c[1] * L + c[2] * std::log(L) + c[3] + c[4] / L));
    }
    renorm::FitOptions fo;
    fo.tail_column = !p->no_tail;
    const auto fit = renorm::fit_divergence_profile(s, fo);
    Table t;
    t.add_meta("phi", fit.profile.phi);
    t.add_meta("psi", fit.profile.psi);
    t.add_meta("nu", fit.profile.nu);
    t.add_meta("mu", fit.profile.mu);
    t.add_meta("tail", fit.tail);
    t.add_meta("residual", fit.residual);
    t.columns = {"L", "re_a2", "im_a2", "re_regularized", "im_regularized", "re_u0", "im_u0"};
    for (const auto &[L, a2] : s) {
      const Complex r = renorm::regularized_coefficient(a2, fit.profile, L);
      const Complex u = renorm::u0_factor(fit.profile, L, p->eps);
      t.rows.push_back({L, a2.real(), a2.imag(), r.real(), r.imag(), u.real(), u.imag()});
    }
    return t;
  }});
}

void add_dyson(CLI::App &root, std::vector<Command> &cmds) {
  auto *app = root.add_subcommand("dyson", "Dyson coefficients and truncated-series unitarity");
  struct P {
    std::string system = "noncommuting";
    double t0 = 0.0, t1 = 3.0, v = 1.0;
    int K = 8;
    std::string eps = "0.2,0.1,0.05";
  };
  auto p = std::make_shared<P>();
  app->add_option("--system", p->system, "noncommuting (sigma3 + t sigma2) | scalar")
      ->check(CLI::IsMember({"noncommuting", "scalar"}));
  app->add_option("--t0", p->t0, "start time");
  app->add_option("--t1", p->t1, "end time");
  app->add_option("--v", p->v, "value of the scalar interaction");
  app->add_option("--K", p->K, "truncation order");
  app->add_option("--eps", p->eps, "couplings");
  cmds.push_back({app, [p] {
    renorm::MatrixInteraction V;
    if (p->system == "scalar") {
      const double v = p->v;
      V = {[v](double) { return renorm::Matrix::Constant(1, 1, v); }, 1};
    } else {
      V = {[](double t) {
             renorm::Matrix s(2, 2);
             s << 1.0, Complex(0, -t), Complex(0, t), -1.0;
             return s;
           },
           2};
    }
    const renorm::DysonOptions opt;
    const auto c = renorm::dyson_coefficients(V, p->t0, p->t1, p->K, opt);
    const auto eps = parse_list(p->eps);
    Table t;
    t.add_meta("panel_tol", opt.tol);
    t.columns = {"eps", "unitarity_defect"};
    std::vector<std::pair<double, double>> pts;
    for (double e : eps) {
      const double d = renorm::unitarity_defect(renorm::dyson_sum(c, e));
      t.rows.push_back({e, d});
      if (e > 0 && d > 0) pts.emplace_back(std::log(e), std::log(d));
    }
    if (pts.size() >= 2) {
      double sx = 0, sy = 0, sxx = 0, sxy = 0;
      for (auto [x, y] : pts) { sx += x; sy += y; sxx += x * x; sxy += x * y; }
      const double n = static_cast<double>(pts.size());
      t.add_meta("defect_exponent", (n * sxy - sx * sy) / (n * sxx - sx * sx));
    }
    return t;
  }});
}

// ---- driver ---------------------------------------------------------------

std::string option_key(const CLI::Option *o) {
  const auto &names = o->get_lnames();
  return names.empty() ? o->get_name() : names.front();
}

std::string canonical_config(const CLI::App *sub) {
  std::map<std::string, std::string> kv;
  for (const CLI::Option *o : sub->get_options()) {
    const std::string key = option_key(o);
    if (key.empty() || key == "help") continue;
    std::string v;
    if (o->count() > 0) {
      for (const auto &r : o->results()) v += (v.empty() ? "" : ",") + r;
    } else {
      v = o->get_default_str();
    }
    kv[key] = v;
  }
  std::string out = sub->get_name();
  for (const auto &[k, v] : kv) out += ";" + k + "=" + v;
  return out;
}

} // namespace

int run(int argc, char **argv) {
  CLI::App root("Generalized scattering computations", "genscatter");
  root.require_subcommand(1);
  root.option_defaults()->always_capture_default();
  Globals g;
  root.add_option("--output,-o", g.output, "output file (stdout if omitted)");
  root.add_option("--format", g.format, "csv | json (default from extension, else csv)")
      ->check(CLI::IsMember({"csv", "json"}));
  root.add_option("--threads", g.threads, "worker threads (default GENSCATTER_THREADS or all cores)");
  root.add_option("--config", g.config, "key=value file; flags override it");
  root.fallthrough();

  std::vector<Command> cmds;
  add_coulomb_table(root, cmds);
  add_radial_extract(root, cmds);
  add_dirac_extract(root, cmds);
  add_ergodic_check(root, cmds);
  add_dirac_structure(root, cmds);
  add_divergence_demo(root, cmds);
  add_example82(root, cmds);
  add_renorm_fit(root, cmds);
  add_dyson(root, cmds);
  for (auto &c : cmds) c.app->fallthrough();

  std::string stage = "configuration";
  try {
    std::vector<std::string> args(argv + 1, argv + argc);
    // config file entries for keys not given as flags
    std::string cfg;
    for (std::size_t i = 0; i < args.size(); ++i) {
      if (args[i] == "--config" && i + 1 < args.size()) cfg = args[i + 1];
      else if (args[i].rfind("--config=", 0) == 0) cfg = args[i].substr(9);
    }
    if (!cfg.empty()) {
      std::set<std::string> given;
      for (const auto &a : args)
        if (a.rfind("--", 0) == 0) given.insert(a.substr(2, a.find('=') - 2));
      const CLI::App *sub = nullptr;
      for (const auto &a : args)
        for (const auto &c : cmds)
          if (c.app->get_name() == a) sub = c.app;
      for (const auto &[k, v] : read_config_file(cfg)) {
        const bool known = root.get_option_no_throw("--" + k) != nullptr ||
                           (sub && sub->get_option_no_throw("--" + k) != nullptr);
        if (!known) throw ConfigError(cfg + ": unknown key '" + k + "'");
        if (k == "config") throw ConfigError(cfg + ": nested config is not supported");
        if (!given.count(k)) args.push_back("--" + k + "=" + v);
      }
    }
    std::reverse(args.begin(), args.end());
    root.parse(args);

    const Command *cmd = nullptr;
    for (const auto &c : cmds)
      if (c.app->parsed()) cmd = &c;
    if (!cmd) throw ConfigError("no subcommand");
    if (root.get_option("--threads")->count() > 0) {
      if (g.threads == 0) throw ConfigError("--threads must be positive");
      set_default_threads(g.threads);
    }
    std::string format = g.format;
    if (format.empty())
      format = g.output.size() > 5 && g.output.substr(g.output.size() - 5) == ".json" ? "json" : "csv";

    stage = cmd->app->get_name();
    Table t = cmd->handler();
    const std::string canon = canonical_config(cmd->app);
    std::vector<std::pair<std::string, std::string>> head = {
        {"program", "genscatter"},
        {"subcommand", cmd->app->get_name()},
        {"config_hash", hex64(fnv1a(canon))},
        {"config", canon},
    };
    t.meta.insert(t.meta.begin(), head.begin(), head.end());

    std::ostringstream buf;
    if (format == "json") write_json(buf, t);
    else write_csv(buf, t);
    if (g.output.empty()) {
      std::cout << buf.str();
    } else {
      std::ofstream out(g.output, std::ios::binary);
      if (!out) throw ConfigError("cannot write '" + g.output + "'");
      out << buf.str();
    }
    return 0;
  } catch (const CLI::CallForHelp &e) {
    return root.exit(e);
  } catch (const CLI::CallForAllHelp &e) {
    return root.exit(e);
  } catch (const CLI::ParseError &e) {
    std::cerr << "genscatter: " << e.what() << "\n";
    return 2;
  } catch (const ConfigError &e) {
    std::cerr << "genscatter: " << stage << ": " << e.what() << "\n";
    return 2;
  } catch (const DomainError &e) {
    std::cerr << "genscatter: " << stage << ": precondition violated: " << e.what() << "\n";
    return 4;
  } catch (const NumericalError &e) {
    std::cerr << "genscatter: " << stage << ": numerical failure: " << e.what() << "\n";
    return 3;
  } catch (const std::exception &e) {
    std::cerr << "genscatter: " << stage << ": " << e.what() << "\n";
    return 3;
  }
}

} // namespace genscatter::cli
