// advbound: evaluates adversarial-susceptibility lower bounds, checks them
// against exact and Monte Carlo expansion oracles, runs desk-scale PGD
// susceptibility curves, and verifies the resolution-rescaling norm laws.
// All commands emit CSV with '#' header comments and are reproducible from
// (config, seed) alone.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "advbound/attack.hpp"
#include "advbound/bounds.hpp"
#include "advbound/geometry.hpp"
#include "advbound/rescale.hpp"
#include "advbound/rng.hpp"
#include "advbound/version.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace {

using namespace advbound;

constexpr double kPi = 3.14159265358979323846;

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string fmt_bool(bool b) { return b ? "true" : "false"; }

// quoted when a cell contains separators, per RFC 4180
std::string csv_cell(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

class CsvOut {
 public:
  explicit CsvOut(const std::string& path) {
    if (!path.empty()) {
      file_.open(path);
      if (!file_) throw DomainError("cannot open output file: " + path);
    }
  }
  std::ostream& os() { return file_.is_open() ? file_ : std::cout; }
  void comment(const std::string& text) { os() << "# " << text << "\n"; }
  void row(const std::vector<std::string>& cells) {
    std::ostream& o = os();
    for (std::size_t i = 0; i < cells.size(); ++i)
      o << (i ? "," : "") << csv_cell(cells[i]);
    o << "\n";
  }

 private:
  std::ofstream file_;
};

NormOrder parse_norm(const std::string& p) {
  if (p == "inf" || p == "infinity") return NormOrder::infinity();
  double v = std::stod(p);
  if (v == 0.0) return NormOrder::zero();
  return NormOrder::finite(v);
}

std::vector<double> resolve_eps(std::vector<double> eps, const std::string& grid) {
  if (!grid.empty()) {
    double lo, hi;
    long count;
    if (std::sscanf(grid.c_str(), "%lf:%lf:%ld", &lo, &hi, &count) != 3 || count < 1)
      throw DomainError("eps grid must look like lo:hi:count");
    if (count == 1) {
      eps.push_back(lo);
    } else {
      if (!(hi > lo)) throw DomainError("eps grid needs hi > lo");
      for (long i = 0; i < count; ++i)
        eps.push_back(lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1));
    }
  }
  if (eps.empty()) throw DomainError("no eps values given (use --eps or --eps-grid)");
  for (std::size_t i = 1; i < eps.size(); ++i)
    if (!(eps[i] > eps[i - 1])) throw DomainError("eps values must be strictly increasing");
  return eps;
}

void apply_threads(int threads) {
#ifdef _OPENMP
  if (threads > 0) omp_set_num_threads(threads);
#else
  (void)threads;
#endif
}

void write_preamble(CsvOut& out, const std::string& command, const std::string& config,
                    std::optional<std::uint64_t> seed) {
  out.comment(std::string("advbound ") + ADVBOUND_VERSION);
  out.comment("command: " + command);
  out.comment("config: " + config);
  out.comment(seed ? "seed: " + std::to_string(*seed) : "seed: none");
}

// ---------- bound ----------

struct BoundArgs {
  std::string theorem;
  std::string p = "2";
  std::int64_t n = 1;
  std::vector<double> eps;
  std::string eps_grid;
  double fc = 0.5;
  double density_sup = 1.0;
  double vol = 0.5;
  double support_vol = -1.0;
  std::string form = "tight";
  std::string variant = "tight";
  std::string out;
};

int run_bound(const BoundArgs& a) {
  std::vector<double> eps = resolve_eps(a.eps, a.eps_grid);
  std::vector<std::vector<std::string>> rows;
  for (double e : eps) {
    BoundValue bv{Probability(0.0), true, ""};
    std::string form_label;
    if (a.theorem == "half-sphere") {
      bv = half_sphere_expansion_bound(a.n, e);
    } else if (a.theorem == "sphere") {
      bv = sphere_susceptibility_bound(ClassStats(a.n, a.fc, a.density_sup), e);
    } else if (a.theorem == "cube-expansion") {
      NormOrder norm = parse_norm(a.p);
      form_label = a.variant;
      if (a.variant == "tight")
        bv = cube_expansion_bound_tight(Probability(a.vol), norm, a.n, e);
      else if (a.variant == "mills")
        bv = cube_expansion_bound_simple(norm, a.n, e, SimpleVariant::Mills);
      else if (a.variant == "as-printed")
        bv = cube_expansion_bound_simple(norm, a.n, e, SimpleVariant::AsPrinted);
      else
        throw DomainError("unknown variant: " + a.variant);
    } else if (a.theorem == "cube") {
      NormOrder norm = parse_norm(a.p);
      CubeBoundForm form;
      if (a.form == "tight")
        form = CubeBoundForm::Tight;
      else if (a.form == "simple-mills")
        form = CubeBoundForm::SimpleMills;
      else if (a.form == "simple-as-printed")
        form = CubeBoundForm::SimpleAsPrinted;
      else if (a.form == "linf-refined")
        form = CubeBoundForm::LinfRefined;
      else
        throw DomainError("unknown form: " + a.form);
      form_label = a.form;
      bv = cube_susceptibility_bound(ClassStats(a.n, a.fc, a.density_sup), norm, e, form);
    } else if (a.theorem == "small-p") {
      bv = small_p_expansion_bound(Probability(a.vol), parse_norm(a.p), a.n, e);
    } else if (a.theorem == "small-p-tight") {
      NormOrder norm = parse_norm(a.p);
      double p_exponent = norm.is_zero() ? 0.0 : norm.p();
      bv = small_p_expansion_bound_tight(Probability(a.vol), p_exponent, a.n, e);
    } else if (a.theorem == "sparse") {
      if (std::floor(e) != e) throw DomainError("sparse bound needs integer eps");
      bv = sparse_susceptibility_bound(ClassStats(a.n, a.fc, a.density_sup),
                                       static_cast<std::int64_t>(e));
    } else if (a.theorem == "existence") {
      ExistenceThreshold t = existence_support_threshold(parse_norm(a.p), a.n, e);
      std::string note = t.note;
      if (a.support_vol >= 0.0) {
        bool active = t.valid && Probability(a.support_vol).value() >= t.threshold.value();
        if (!note.empty()) note += "; ";
        note += active ? "support admits adversarial examples"
                       : "support below threshold";
      }
      bv = BoundValue{t.threshold, t.valid, note};
      form_label = "threshold";
    } else {
      throw DomainError(
          "unknown theorem (use half-sphere, sphere, cube-expansion, cube, small-p, "
          "small-p-tight, sparse, existence)");
    }
    rows.push_back({a.theorem, form_label, a.p, std::to_string(a.n), fmt(e),
                    fmt(bv.probability.value()), fmt_bool(bv.valid), bv.note});
  }

  CsvOut out(a.out);
  std::ostringstream cfg;
  cfg << "theorem=" << a.theorem << " p=" << a.p << " n=" << a.n << " fc=" << fmt(a.fc)
      << " density_sup=" << fmt(a.density_sup) << " vol=" << fmt(a.vol)
      << " form=" << a.form << " variant=" << a.variant;
  write_preamble(out, "bound", cfg.str(), std::nullopt);
  out.row({"theorem", "form", "p", "n", "eps", "value", "valid", "note"});
  for (const auto& r : rows) out.row(r);
  return 0;
}

// ---------- expand ----------

struct ExpandArgs {
  std::string set;
  std::int64_t n = 2;
  double a = 0.5;
  double angle = kPi / 2.0;
  double mass = -1.0;
  double offset = 0.0;
  int coord = 0;
  std::string metric = "geodesic";
  double p = 2.0;
  std::vector<double> eps;
  std::string eps_grid;
  std::int64_t samples = 100000;
  std::uint64_t seed = 0;
  std::string variant = "tight";
  int threads = 0;
  std::string out;
};

Metric parse_metric(const std::string& name, double p) {
  if (name == "geodesic") return Metric::geodesic();
  if (name == "l0") return Metric::lp(NormOrder::zero());
  if (name == "l1") return Metric::lp(NormOrder::finite(1));
  if (name == "l2") return Metric::lp(NormOrder::finite(2));
  if (name == "linf") return Metric::lp(NormOrder::infinity());
  if (name == "lp") return Metric::lp(NormOrder::finite(p));
  throw DomainError("unknown metric: " + name);
}

int run_expand(const ExpandArgs& a) {
  apply_threads(a.threads);
  std::vector<double> eps = resolve_eps(a.eps, a.eps_grid);
  Metric metric = parse_metric(a.metric, a.p);

  std::vector<std::vector<std::string>> rows;
  for (double e : eps) {
    SetDescriptor set{CubeSlab{0, 0.5}};
    double oracle = 0.0;
    double bound = std::numeric_limits<double>::quiet_NaN();
    std::string note;

    if (a.set == "half-sphere" || a.set == "sphere-cap") {
      double angle = a.set == "half-sphere" ? kPi / 2.0 : a.angle;
      Point axis(static_cast<std::size_t>(a.n), 0.0);
      axis.at(0) = 1.0;
      set = SetDescriptor{SphereCap{axis, angle}};
      double geo_eps = e;
      if (!metric.is_geodesic()) {
        if (metric.order().kind() != NormOrder::Kind::Finite || metric.order().p() != 2.0)
          throw CapabilityError("sphere sets support geodesic and l2 metrics");
        geo_eps = 2.0 * std::asin(std::min(1.0, e / 2.0));  // chord to arc
      }
      oracle = cap_measure(a.n, std::min(kPi, angle + geo_eps)).value();
      if (angle == kPi / 2.0) {
        bound = half_sphere_expansion_bound(a.n, geo_eps).probability.value();
      } else {
        note = "no closed-form bound for caps away from the half sphere";
      }
    } else if (a.set == "slab") {
      set = SetDescriptor{CubeSlab{a.coord, a.a}};
      if (metric.is_geodesic()) throw CapabilityError("slab sets live in the cube");
      oracle = slab_expansion_exact(a.a, e, metric.order()).value();
      if (a.variant == "tight") {
        bound = cube_expansion_bound_tight(Probability(a.a), metric.order(), a.n, e)
                    .probability.value();
      } else if (a.variant == "mills" || a.variant == "as-printed") {
        SimpleVariant v =
            a.variant == "mills" ? SimpleVariant::Mills : SimpleVariant::AsPrinted;
        bound = cube_expansion_bound_simple(metric.order(), a.n, e, v).probability.value();
        if (a.a < 0.5) note = "simple form assumes set volume >= 1/2";
      } else {
        throw DomainError("slab variants: tight, mills, as-printed");
      }
    } else if (a.set == "subcube") {
      set = SetDescriptor{SubCube{a.a}};
      if (metric.is_geodesic() || !metric.order().is_zero())
        throw CapabilityError("subcube expansion oracle works in the l0 metric");
      double vol = std::pow(a.a, static_cast<double>(a.n));
      oracle = subcube_hamming_expansion_exact(a.a, a.n, static_cast<std::int64_t>(e)).value();
      if (a.variant == "supertight") {
        auto bv = small_p_expansion_bound_tight(Probability(vol), 0.0, a.n, e);
        bound = bv.probability.value();
        if (!bv.valid) note = bv.note;
      } else {
        bound = small_p_expansion_bound(Probability(vol), NormOrder::zero(), a.n, e)
                    .probability.value();
      }
    } else if (a.set == "gaussian-halfspace") {
      double offset = a.offset;
      if (a.mass >= 0.0) offset = std_normal_quantile(Probability(a.mass)).value();
      set = SetDescriptor{GaussianHalfspace{offset}};
      if (metric.is_geodesic() ||
          metric.order().kind() != NormOrder::Kind::Finite || metric.order().p() != 2.0)
        throw CapabilityError("gaussian halfspace oracle works in the l2 metric");
      double mass = std_normal_cdf(ZScore(offset)).value();
      oracle = gaussian_halfspace_expansion_exact(Probability(mass), e).value();
      bound = oracle;
      note = "isoperimetric equality: half spaces achieve the bound";
    } else {
      throw DomainError(
          "unknown set (use half-sphere, sphere-cap, slab, subcube, gaussian-halfspace)");
    }

    ExpansionEstimate mc = mc_expansion_measure(set, a.n, metric, e, a.samples, a.seed);
    if (std::isfinite(bound) && bound > oracle) {
      if (!note.empty()) note += "; ";
      note += "bound_exceeds_oracle";
    }
    rows.push_back({a.set, metric.label(), std::to_string(a.n), fmt(e), fmt(bound),
                    fmt(oracle), fmt(mc.estimate), fmt(mc.std_error), note});
  }

  CsvOut out(a.out);
  std::ostringstream cfg;
  cfg << "set=" << a.set << " n=" << a.n << " a=" << fmt(a.a) << " angle=" << fmt(a.angle)
      << " mass=" << fmt(a.mass) << " offset=" << fmt(a.offset) << " coord=" << a.coord
      << " metric=" << metric.label() << " samples=" << a.samples
      << " variant=" << a.variant << " threads=" << a.threads;
  write_preamble(out, "expand", cfg.str(), a.seed);
  out.row({"set", "metric", "n", "eps", "bound", "oracle_exact", "mc_estimate",
           "mc_stderr", "note"});
  for (const auto& r : rows) out.row(r);
  return 0;
}

// ---------- curve ----------

struct CurveArgs {
  std::int64_t n = 20;
  int classes = 2;
  double spread = 0.1;
  std::int64_t train_count = 500;
  std::int64_t test_count = 200;
  std::string p = "2";
  std::vector<double> eps;
  std::string eps_grid;
  int steps = 100;
  double step_size = 0.0;
  int epochs = 200;
  double lr = 1.0;
  std::string model = "linear";
  int hidden = 32;
  std::uint64_t seed = 0;
  int threads = 0;
  std::string out;
};

int run_curve(const CurveArgs& a) {
  apply_threads(a.threads);
  std::vector<double> eps = resolve_eps(a.eps, a.eps_grid);
  NormOrder norm = parse_norm(a.p);

  Dataset all =
      synth_dataset(a.n, a.classes, a.spread, a.train_count + a.test_count, a.seed);
  auto [train, test] = split_dataset(all, a.train_count);

  std::unique_ptr<Classifier> model;
  if (a.model == "linear") {
    model = std::make_unique<LinearModel>(train_linear(train, a.epochs, a.lr, a.seed));
  } else if (a.model == "mlp") {
    model = std::make_unique<Mlp1Model>(Mlp1Model::random(a.n, a.hidden, a.classes, a.seed));
  } else {
    throw DomainError("unknown model: " + a.model);
  }

  SusceptibilityCurve curve =
      susceptibility_curve(*model, test, norm, eps, a.steps, a.step_size, a.seed);

  CsvOut out(a.out);
  std::ostringstream cfg;
  cfg << "n=" << a.n << " classes=" << a.classes << " spread=" << fmt(a.spread)
      << " train_count=" << a.train_count << " test_count=" << a.test_count
      << " p=" << a.p << " steps=" << a.steps << " step_size=" << fmt(a.step_size)
      << " epochs=" << a.epochs << " lr=" << fmt(a.lr) << " model=" << a.model
      << " hidden=" << a.hidden << " threads=" << a.threads;
  write_preamble(out, "curve", cfg.str(), a.seed);
  out.row({"eps", "fooled_fraction", "n_points"});
  for (const auto& pt : curve)
    out.row({fmt(pt.eps), fmt(pt.fooled_fraction), std::to_string(pt.n_points)});
  return 0;
}

// ---------- rescale-check ----------

struct RescaleArgs {
  std::vector<std::int64_t> b = {1, 2, 3, 4};
  std::int64_t pairs = 10000;
  std::int64_t height = 28;
  std::int64_t width = 28;
  std::uint64_t seed = 0;
  bool inject_fault = false;
  std::string out;
};

namespace law {

double l2(const std::vector<double>& x, const std::vector<double>& y) {
  double s = 0;
  for (std::size_t i = 0; i < x.size(); ++i) s += (x[i] - y[i]) * (x[i] - y[i]);
  return std::sqrt(s);
}
std::int64_t l0(const std::vector<double>& x, const std::vector<double>& y) {
  std::int64_t c = 0;
  for (std::size_t i = 0; i < x.size(); ++i)
    if (x[i] != y[i]) ++c;
  return c;
}
double linf(const std::vector<double>& x, const std::vector<double>& y) {
  double m = 0;
  for (std::size_t i = 0; i < x.size(); ++i) m = std::max(m, std::fabs(x[i] - y[i]));
  return m;
}

}  // namespace law

int run_rescale_check(const RescaleArgs& a) {
  CsvOut out(a.out);
  std::ostringstream cfg;
  cfg << "pairs=" << a.pairs << " height=" << a.height << " width=" << a.width
      << " inject_fault=" << fmt_bool(a.inject_fault) << " b=";
  for (std::size_t i = 0; i < a.b.size(); ++i) cfg << (i ? "," : "") << a.b[i];
  write_preamble(out, "rescale-check", cfg.str(), a.seed);
  out.row({"check", "b", "pairs", "violations", "status"});

  Rng rng(a.seed);
  auto random_image = [&]() {
    std::vector<double> px(static_cast<std::size_t>(a.height * a.width));
    for (auto& v : px) v = rng.next_unit();
    return ImageGrid(a.height, a.width, std::move(px));
  };

  bool any_violation = false;
  for (std::int64_t b : a.b) {
    std::int64_t v_l2 = 0, v_l0 = 0, v_linf = 0, v_round = 0, v_contract = 0;
    for (std::int64_t i = 0; i < a.pairs; ++i) {
      ImageGrid x = random_image();
      ImageGrid y = random_image();
      ImageGrid ux = upsample(x, b);
      ImageGrid uy = upsample(y, b);
      if (a.inject_fault && i == 0 && b > 1) {
        // test hook: corrupt one replicated block so the checker must notice
        ux.pixels[0] = ux.pixels[0] < 0.5 ? ux.pixels[0] + 0.25 : ux.pixels[0] - 0.25;
      }

      double base2 = law::l2(x.pixels, y.pixels);
      double up2 = law::l2(ux.pixels, uy.pixels);
      bool bad_l2 = std::fabs(up2 - b * base2) > 1e-12 * std::max(1.0, b * base2);
      bool bad_l0 = law::l0(ux.pixels, uy.pixels) != b * b * law::l0(x.pixels, y.pixels);
      bool bad_linf =
          law::linf(ux.pixels, uy.pixels) != law::linf(x.pixels, y.pixels);
      ImageGrid back = downsample(ux, b);
      bool bad_round = back.pixels != x.pixels;
      ImageGrid dx = downsample(ux, b);
      ImageGrid dy = downsample(uy, b);
      bool bad_contract =
          law::l2(dx.pixels, dy.pixels) > (1.0 + 1e-12) / static_cast<double>(b) * up2;

      v_l2 += bad_l2;
      v_l0 += bad_l0;
      v_linf += bad_linf;
      v_round += bad_round;
      v_contract += bad_contract;
      if (bad_l2 || bad_l0 || bad_linf || bad_round || bad_contract) {
        if (!any_violation) {
          std::cerr << "violation at pair " << i << " b=" << b << ": l2 " << up2
                    << " vs " << b * base2 << "\n";
          std::cerr << "x,";
          for (double v : x.pixels) std::cerr << fmt(v) << ";";
          std::cerr << "\ny,";
          for (double v : y.pixels) std::cerr << fmt(v) << ";";
          std::cerr << "\n";
        }
        any_violation = true;
      }
    }
    auto status = [](std::int64_t v) { return v == 0 ? "pass" : "fail"; };
    out.row({"l2_scaling", std::to_string(b), std::to_string(a.pairs),
             std::to_string(v_l2), status(v_l2)});
    out.row({"l0_scaling", std::to_string(b), std::to_string(a.pairs),
             std::to_string(v_l0), status(v_l0)});
    out.row({"linf_unchanged", std::to_string(b), std::to_string(a.pairs),
             std::to_string(v_linf), status(v_linf)});
    out.row({"round_trip", std::to_string(b), std::to_string(a.pairs),
             std::to_string(v_round), status(v_round)});
    out.row({"contraction", std::to_string(b), std::to_string(a.pairs),
             std::to_string(v_contract), status(v_contract)});
  }
  return any_violation ? 1 : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"adversarial susceptibility bounds, expansion oracles, and PGD curves"};
  app.set_version_flag("--version", ADVBOUND_VERSION);
  app.require_subcommand(1);

  BoundArgs bound;
  CLI::App* cb = app.add_subcommand("bound", "evaluate a closed-form bound");
  cb->set_config("--config");
  cb->add_option("--theorem", bound.theorem)->required();
  cb->add_option("--p", bound.p, "norm order: a number or inf (0 = sparse)");
  cb->add_option("--n", bound.n, "ambient dimension");
  cb->add_option("--eps", bound.eps)->expected(-1);
  cb->add_option("--eps-grid", bound.eps_grid, "lo:hi:count");
  cb->add_option("--fc", bound.fc, "class fraction f_c");
  cb->add_option("--uc", bound.density_sup, "density supremum (U_c or V_c)");
  cb->add_option("--vc", bound.density_sup, "alias of --uc for sphere bounds");
  cb->add_option("--vol", bound.vol, "set volume for expansion bounds");
  cb->add_option("--support-vol", bound.support_vol,
                 "optional support volume for the existence comparison");
  cb->add_option("--form", bound.form,
                 "cube form: tight, simple-mills, simple-as-printed, linf-refined");
  cb->add_option("--variant", bound.variant, "expansion variant: tight, mills, as-printed");
  cb->add_option("--out", bound.out, "output CSV path (default stdout)");

  ExpandArgs expand;
  CLI::App* ce = app.add_subcommand("expand", "bound vs exact oracle vs Monte Carlo");
  ce->set_config("--config");
  ce->add_option("--set", expand.set)->required();
  ce->add_option("--n", expand.n)->required();
  ce->add_option("--a", expand.a, "slab width / subcube side");
  ce->add_option("--angle", expand.angle, "cap angle for sphere-cap");
  ce->add_option("--mass", expand.mass, "halfspace mass (overrides --offset)");
  ce->add_option("--offset", expand.offset, "halfspace offset");
  ce->add_option("--coord", expand.coord, "slab coordinate index");
  ce->add_option("--metric", expand.metric, "geodesic, l0, l1, l2, linf, lp");
  ce->add_option("--p", expand.p, "norm order for --metric lp");
  ce->add_option("--eps", expand.eps)->expected(-1);
  ce->add_option("--eps-grid", expand.eps_grid, "lo:hi:count");
  ce->add_option("--samples", expand.samples);
  ce->add_option("--seed", expand.seed)->required();
  ce->add_option("--variant", expand.variant,
                 "bound column: tight, mills, as-printed, lemma4, supertight");
  ce->add_option("--threads", expand.threads, "worker count (0 = library default)");
  ce->add_option("--out", expand.out);

  CurveArgs curve;
  CLI::App* cc = app.add_subcommand("curve", "PGD susceptibility curve");
  cc->set_config("--config");
  cc->add_option("--n", curve.n);
  cc->add_option("--classes", curve.classes);
  cc->add_option("--spread", curve.spread);
  cc->add_option("--train-count", curve.train_count);
  cc->add_option("--test-count", curve.test_count);
  cc->add_option("--p", curve.p, "attack norm: number or inf (0 = sparse)");
  cc->add_option("--eps", curve.eps)->expected(-1);
  cc->add_option("--eps-grid", curve.eps_grid, "lo:hi:count");
  cc->add_option("--steps", curve.steps);
  cc->add_option("--step-size", curve.step_size, "0 selects eps*2.5/steps");
  cc->add_option("--epochs", curve.epochs);
  cc->add_option("--lr", curve.lr);
  cc->add_option("--model", curve.model, "linear or mlp");
  cc->add_option("--hidden", curve.hidden, "mlp hidden width");
  cc->add_option("--seed", curve.seed)->required();
  cc->add_option("--threads", curve.threads);
  cc->add_option("--out", curve.out);

  RescaleArgs rescale;
  CLI::App* cr = app.add_subcommand("rescale-check", "verify the resolution norm laws");
  cr->set_config("--config");
  cr->add_option("--b", rescale.b)->expected(-1);
  cr->add_option("--pairs", rescale.pairs);
  cr->add_option("--height", rescale.height);
  cr->add_option("--width", rescale.width);
  cr->add_option("--seed", rescale.seed)->required();
  cr->add_flag("--inject-fault", rescale.inject_fault,
               "test hook: corrupt one block to prove the checker notices");
  cr->add_option("--out", rescale.out);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*cb) return run_bound(bound);
    if (*ce) return run_expand(expand);
    if (*cc) return run_curve(curve);
    if (*cr) return run_rescale_check(rescale);
  } catch (const PreconditionError& e) {
    std::cerr << "precondition error: " << e.what() << "\n";
    return 2;
  } catch (const DomainError& e) {
    std::cerr << "domain error: " << e.what() << "\n";
    return 2;
  } catch (const CapabilityError& e) {
    std::cerr << "capability error: " << e.what() << "\n";
    return 3;
  }
  return 2;
}
