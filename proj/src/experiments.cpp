#include "epsdyad/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include "epsdyad/conditions.hpp"
#include "epsdyad/cz.hpp"
#include "epsdyad/estimators.hpp"
#include "epsdyad/haar.hpp"
#include "epsdyad/maximal.hpp"
#include "epsdyad/oracle.hpp"
#include "epsdyad/sparse.hpp"

namespace epsdyad {

using nlohmann::json;
using io::ConfigError;
using io::format_double;

namespace {

// ---------------------------------------------------------------- config

template <class T>
T option(const ExperimentConfig& cfg, const char* key, T fallback) {
  if (!cfg.options.contains(key)) {
    return fallback;
  }
  try {
    return cfg.options.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("option \"") + key + "\": " + e.what());
  }
}

int checked_int(const json& j, const char* key) {
  if (!j.at(key).is_number_integer()) {
    throw ConfigError(std::string("\"") + key + "\" must be an integer");
  }
  return j.at(key).get<int>();
}

// ---------------------------------------------------------------- output

class Csv {
public:
  Csv(const ExperimentConfig& cfg, RunResult& result, const std::string& name, const std::string& header)
      : out_(std::filesystem::path(cfg.output_dir) / name) {
    if (!out_) {
      throw std::runtime_error("cannot write " + (std::filesystem::path(cfg.output_dir) / name).string());
    }
    result.files.push_back(name);
    out_ << header << '\n';
  }

  template <class... Ts>
  void row(const Ts&... cells) {
    bool first = true;
    ((out_ << (first ? "" : ",") << text(cells), first = false), ...);
    out_ << '\n';
  }

private:
  static std::string text(double v) { return format_double(v); }
  static std::string text(const std::string& s) { return s; }
  static std::string text(const char* s) { return s; }
  static std::string text(bool b) { return b ? "1" : "0"; }
  template <class I>
    requires std::is_integral_v<I>
  static std::string text(I v) {
    return std::to_string(v);
  }

  std::ofstream out_;
};

void write_json(const ExperimentConfig& cfg, RunResult& result, const std::string& name, const json& j) {
  std::ofstream out(std::filesystem::path(cfg.output_dir) / name);
  if (!out) {
    throw std::runtime_error("cannot write " + name);
  }
  out << j.dump(2) << '\n';
  result.files.push_back(name);
}

void write_grid_files(const ExperimentConfig& cfg, RunResult& result, const std::string& stem,
                      const GridFunction& f) {
  std::ofstream csv(std::filesystem::path(cfg.output_dir) / (stem + ".csv"));
  io::write_grid_csv(csv, f);
  result.files.push_back(stem + ".csv");
  write_json(cfg, result, stem + ".json", io::grid_header(f));
}

void prepare_output(const ExperimentConfig& cfg) { std::filesystem::create_directories(cfg.output_dir); }

void fail(RunResult& r, const std::string& note) {
  r.passed = false;
  r.notes.push_back("FAIL " + note);
}

double scale_of(std::span<const double> v) {
  double s = 1.0;
  for (const double x : v) {
    s = std::max(s, std::abs(x));
  }
  return s;
}

double max_abs_diff(std::span<const double> a, std::span<const double> b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    d = std::max(d, std::abs(a[i] - b[i]));
  }
  return d;
}

bool is_origin_rule(const EpsilonCollection& eps) { return std::holds_alternative<OriginRule>(eps.rule()); }

std::vector<GridFunction> nonzero(std::vector<GridFunction> bank) {
  std::erase_if(bank, [](const GridFunction& f) { return f.is_zero(); });
  return bank;
}

// The CZ threshold strictly between the root level and the top of M_eps f.
double midway_lambda(const GridFunction& f, const EpsilonCollection& eps, double fraction) {
  const double lo = eps.value(f.root()) * f.abs().average(f.root());
  const GridFunction m = eps_maximal(f, eps);
  const double hi = *std::max_element(m.values().begin(), m.values().end());
  if (hi > lo) {
    return lo + fraction * (hi - lo);
  }
  return lo > 0.0 ? 2.0 * lo : 1.0;
}

struct CzCheck {
  bool disjoint = true;
  bool bounds = true;
  bool maximal = true;
  bool union_matches = true;
  double worst_bound = 0.0;  ///< max relative violation of the two-sided bound
};

CzCheck check_cz(const GridFunction& f, const EpsilonCollection& eps, const CZResult& r, double lambda) {
  CzCheck out;
  const double upper = std::ldexp(lambda, f.dimension());
  constexpr double rel = 1e-12;
  for (std::size_t a = 0; a < r.cubes.size(); ++a) {
    const double v = r.cubes[a].eps * r.cubes[a].average;
    if (!(v > lambda * (1.0 - rel)) || v > upper * (1.0 + rel)) {
      out.bounds = false;
    }
    const double lo_gap = (lambda - v) / lambda;
    const double hi_gap = (v - upper) / upper;
    out.worst_bound = std::max({out.worst_bound, lo_gap, hi_gap});
    for (std::size_t b = a + 1; b < r.cubes.size(); ++b) {
      if (relation(r.cubes[a].cube, r.cubes[b].cube) != Relation::disjoint) {
        out.disjoint = false;
      }
    }
    const DyadicCube& q = r.cubes[a].cube;
    if (q.level() > f.root().level()) {
      const DyadicCube parent = q.parent();
      if (eps.value(parent) * oracle::naive_average(f.abs(), parent) > lambda) {
        out.maximal = false;
      }
    }
  }
  out.union_matches = cz_cell_mask(r, f) == oracle::superlevel_set(f, eps, lambda);
  return out;
}

// ------------------------------------------------------- check-conditions

struct FamilyCube {
  std::string family;
  int index;
  DyadicCube cube;
};

}  // namespace

ExperimentConfig load_config(const json& j, const ConfigOverrides& overrides) {
  if (!j.is_object()) {
    throw ConfigError("config must be a JSON object");
  }
  ExperimentConfig cfg;
  try {
    cfg.dimension = overrides.dimension.value_or(j.contains("dimension") ? checked_int(j, "dimension") : 1);
    if (cfg.dimension < 1 || cfg.dimension > kMaxDimension) {
      throw ConfigError("dimension must lie in [1, " + std::to_string(kMaxDimension) + "]");
    }
    cfg.root = DyadicCube::unit(cfg.dimension);
    if (j.contains("root")) {
      cfg.root = DyadicCube::parse(j.at("root").get<std::string>());
      if (cfg.root.dimension() != cfg.dimension) {
        throw ConfigError("root token dimension does not match \"dimension\"");
      }
    }
    cfg.depth = overrides.depth.value_or(j.contains("depth") ? checked_int(j, "depth") : (cfg.dimension == 1 ? 8 : 4));
    if (cfg.depth < 1 || cfg.depth * cfg.dimension > kMaxGridBits) {
      throw ConfigError("depth must be at least 1 and keep dimension*depth <= " + std::to_string(kMaxGridBits));
    }

    cfg.exponent = j.contains("exponent")
                       ? io::exponent_from_json(j.at("exponent"))
                       : (cfg.dimension == 1 ? ExponentFunction::origin(0.5) : ExponentFunction::constant(2.0));
    if (const auto d = cfg.exponent.dimension(); d && *d != cfg.dimension) {
      throw ConfigError("exponent descriptor is " + std::to_string(*d) + "-dimensional");
    }
    cfg.epsilon = j.contains("epsilon")
                      ? io::epsilon_from_json(j.at("epsilon"))
                      : (cfg.dimension == 1 ? EpsilonCollection::origin(1.2, 0.5) : EpsilonCollection::sqrt_side());
    if (is_origin_rule(cfg.epsilon) && cfg.dimension != 1) {
      throw ConfigError("the origin epsilon collection is one-dimensional");
    }

    if (j.contains("bank")) {
      const json& b = j.at("bank");
      cfg.bank_given = true;
      if (b.contains("kind")) {
        cfg.bank.kind = parse_bank_kind(b.at("kind").get<std::string>());
      }
      if (b.contains("count")) {
        cfg.bank.count = checked_int(b, "count");
      }
      if (b.contains("seed")) {
        cfg.bank.seed = b.at("seed").get<std::uint64_t>();
      }
    }
    if (overrides.seed) {
      cfg.bank.seed = *overrides.seed;
    }
    if (cfg.bank.count < 1) {
      throw ConfigError("bank count must be at least 1");
    }
    if (j.contains("tolerances")) {
      const json& t = j.at("tolerances");
      cfg.tol.norm = t.value("norm", cfg.tol.norm);
      cfg.tol.slack = t.value("slack", cfg.tol.slack);
      if (!(cfg.tol.norm > 0.0) || !(cfg.tol.slack >= 0.0)) {
        throw ConfigError("tolerances must be positive");
      }
    }
    cfg.output_dir = overrides.output_dir.value_or(j.value("output", std::string("out")));
    if (j.contains("options")) {
      if (!j.at("options").is_object()) {
        throw ConfigError("\"options\" must be an object");
      }
      cfg.options = j.at("options");
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(e.what());
  }
  return cfg;
}

RunResult run_check_conditions(const ExperimentConfig& cfg) {
  prepare_output(cfg);
  RunResult result;
  const ExponentFunction& p = cfg.exponent;
  const EpsilonCollection& eps = cfg.epsilon;
  const int max_level = option(cfg, "max_level", 40);
  const int grid_levels = option(cfg, "grid_levels", std::min(cfg.depth, 24 / cfg.dimension - 1));
  const int samples = option(cfg, "samples", 64);
  if (max_level < 0 || grid_levels < 0 || samples < 1) {
    throw ConfigError("check-conditions: max_level, grid_levels and samples must be non-negative");
  }

  std::vector<FamilyCube> family;
  const bool origin_family = cfg.dimension == 1 && cfg.root.contains(DyadicCube(0, {0}));
  if (origin_family) {
    for (int n = 0; n <= max_level; ++n) {
      family.push_back({"Q", n, DyadicCube(n, {0})});
    }
    for (int n = 0; n <= max_level; ++n) {
      family.push_back({"Q'", n, DyadicCube(n + 1, {1})});
    }
  }
  for (int j = 0; j <= grid_levels; ++j) {
    for_each_subcube(cfg.root, cfg.root.level() + j, [&](const DyadicCube& q) { family.push_back({"grid", j, q}); });
  }
  std::vector<DyadicCube> cubes;
  for (const auto& f : family) {
    cubes.push_back(f.cube);
  }

  const ConditionReport diening = check_diening(p, cubes);
  const ConditionReport eps_diening = check_eps_diening(p, eps, cubes);
  const ConditionReport pointwise = check_eps_diening_pointwise(p, eps, cubes, samples);
  const ConjugateTransfer transfer = check_conjugate_transfer(p, eps, cubes);

  {
    Csv csv(cfg, result, "conditions.csv",
            "family,n,cube,p_minus,p_plus,eps,diening,eps_diening,eps_diening_pointwise,conjugate_eps_diening");
    for (std::size_t i = 0; i < family.size(); ++i) {
      const auto& r = eps_diening.records[i];
      csv.row(family[i].family, family[i].index, r.cube.token(), r.p_minus, r.p_plus, r.eps,
              diening.records[i].value, r.value, pointwise.records[i].value,
              transfer.conjugate_report.records[i].value);
    }
  }
  auto write_report = [&](const std::string& name, const ConditionReport& report) {
    std::ofstream out(std::filesystem::path(cfg.output_dir) / name);
    io::write_condition_report(out, report);
    result.files.push_back(name);
  };
  write_report("diening.csv", diening);
  write_report("eps_diening.csv", eps_diening);
  write_report("eps_diening_pointwise.csv", pointwise);
  write_report("conjugate_eps_diening.csv", transfer.conjugate_report);

  // decay at infinity: one-dimensional descriptors only
  std::optional<DecayFit> fit;
  if (cfg.dimension == 1 && (!p.dimension() || *p.dimension() == 1) &&
      !std::holds_alternative<GridExponent>(p.descriptor())) {
    std::vector<double> xs{0.0};
    for (int k = -40; k <= 40; ++k) {
      xs.push_back(std::ldexp(1.0, k) * std::sqrt(2.0));
      xs.push_back(-std::ldexp(1.0, k) * std::sqrt(2.0));
    }
    std::optional<double> guess;
    if (cfg.options.contains("p_inf")) {
      guess = option(cfg, "p_inf", 0.0);
    }
    fit = check_lh_infty(p, xs, guess);
    Csv csv(cfg, result, "lh_infty.csv", "direction,p_inf,c_inf,max_radius,growing_at_boundary");
    csv.row("both", fit->p_inf, fit->c_inf, fit->max_radius, fit->growing_at_boundary);
    for (const auto& [name, side] : {std::pair{"positive", fit->p_inf_positive}, std::pair{"negative", fit->p_inf_negative}}) {
      if (side) {
        const DecayFit one = check_lh_infty(p, xs, *side);
        csv.row(name, one.p_inf, one.c_inf, one.max_radius, one.growing_at_boundary);
      }
    }
  }

  const bool eps_finite = std::isfinite(eps_diening.supremum);
  const bool conj_finite = std::isfinite(transfer.conjugate_report.supremum);
  if (!eps_finite) {
    fail(result, "eps-Diening supremum is not finite");
  }
  if (!conj_finite) {
    fail(result, "conjugate eps-Diening supremum is not finite");
  }

  // closed forms of the origin example
  const auto* origin_p = std::get_if<OriginExponent>(&p.descriptor());
  const auto* origin_eps = std::get_if<OriginRule>(&eps.rule());
  if (origin_family && origin_p && origin_eps && !p.conjugated() && eps.exponent() == 1.0 &&
      origin_p->a == origin_eps->a) {
    const double C = origin_eps->C;
    const double a = origin_eps->a;
    const double bound = std::pow(2.0 * C, 1.0 - std::pow(2.0, -a));
    double worst_q = 0.0;
    double worst_qp = 0.0;
    double worst_plain = 0.0;
    bool monotone = true;
    double prev = std::numeric_limits<double>::infinity();
    double qp_max = 0.0;
    for (std::size_t i = 0; i < family.size(); ++i) {
      const int n = family[i].index;
      const double v = eps_diening.records[i].value;
      if (family[i].family == "Q") {
        worst_q = std::max(worst_q, std::abs(v - C) / C);
        const double plain = std::exp2(n * std::pow(n + 1.0, -a));
        worst_plain = std::max(worst_plain, std::abs(diening.records[i].value - plain) / plain);
      } else if (family[i].family == "Q'") {
        const double e = eps.value(DyadicCube(n, {0}));
        const double closed = std::pow(std::ldexp(e, n + 1), std::pow(n + 1.0, -a) - std::pow(n + 2.0, -a));
        worst_qp = std::max(worst_qp, std::abs(v - closed) / closed);
        monotone = monotone && v <= prev;
        prev = v;
        qp_max = std::max(qp_max, v);
      }
    }
    Csv csv(cfg, result, "closed_forms.csv", "check,value,reference,passed");
    csv.row("eps_diening_Q_equals_C_max_rel_dev", worst_q, 1e-9, worst_q <= 1e-9);
    csv.row("eps_diening_Qprime_closed_form_max_rel_dev", worst_qp, 1e-9, worst_qp <= 1e-9);
    csv.row("eps_diening_Qprime_nonincreasing", monotone ? 1.0 : 0.0, 1.0, monotone);
    csv.row("eps_diening_Qprime_max", qp_max, bound, qp_max <= bound * (1.0 + 1e-9));
    csv.row("diening_Q_closed_form_max_rel_dev", worst_plain, 1e-9, worst_plain <= 1e-9);
    csv.row("diening_Q_last", diening.records[static_cast<std::size_t>(max_level)].value, 75.0,
            diening.records[static_cast<std::size_t>(max_level)].value > 75.0 || max_level < 40);
    if (worst_q > 1e-9) fail(result, "eps-Diening on Q_n differs from C");
    if (worst_qp > 1e-9) fail(result, "eps-Diening on Q'_n differs from its closed form");
    if (!monotone) fail(result, "eps-Diening on Q'_n is not nonincreasing");
    if (qp_max > bound * (1.0 + 1e-9)) fail(result, "eps-Diening on Q'_n exceeds (2C)^(1-2^-a)");
    if (worst_plain > 1e-9) fail(result, "Diening on Q_n differs from 2^(n(n+1)^-a)");
  }

  Csv summary(cfg, result, "summary.csv", "check,supremum,witness,passed");
  auto token = [](const ConditionReport& r) { return r.witness ? r.witness->token() : std::string(); };
  summary.row("diening", diening.supremum, token(diening), true);
  summary.row("eps_diening", eps_diening.supremum, token(eps_diening), eps_finite);
  summary.row("eps_diening_pointwise", pointwise.supremum, token(pointwise), std::isfinite(pointwise.supremum));
  summary.row("conjugate_eps_diening", transfer.conjugate_report.supremum, token(transfer.conjugate_report),
              conj_finite);
  summary.row("conjugate_kappa", transfer.kappa, std::string(), true);
  if (fit) {
    summary.row("lh_infty_c_inf", fit->c_inf, "p_inf=" + format_double(fit->p_inf), true);
  }
  result.notes.push_back("eps-Diening sup " + format_double(eps_diening.supremum) + ", conjugate sup " +
                         format_double(transfer.conjugate_report.supremum));
  return result;
}

// ------------------------------------------------------------ oracle suite

RunResult run_oracle_suite(const ExperimentConfig& cfg) {
  prepare_output(cfg);
  RunResult result;
  const int instances = option(cfg, "instances", 200);
  const bool inject_fault = option(cfg, "fault_injection", false);
  if (instances < 1) {
    throw ConfigError("oracle-suite: instances must be at least 1");
  }
  Lcg rng(cfg.bank.seed);
  const std::size_t cells = std::size_t{1} << (cfg.dimension * cfg.depth);

  struct Tally {
    std::size_t failures = 0;
    double worst = 0.0;
  };
  std::vector<std::pair<std::string, Tally>> tallies;
  auto tally = [&](const std::string& name) -> Tally& {
    for (auto& [k, t] : tallies) {
      if (k == name) return t;
    }
    tallies.emplace_back(name, Tally{});
    return tallies.back().second;
  };

  Csv csv(cfg, result, "oracle_suite.csv", "instance,check,deviation,passed");
  auto record = [&](int i, const std::string& check, double deviation, bool ok) {
    csv.row(i, check, deviation, ok);
    Tally& t = tally(check);
    t.worst = std::max(t.worst, deviation);
    if (!ok) {
      ++t.failures;
    }
  };

  for (int i = 0; i < instances; ++i) {
    std::vector<double> values(cells);
    for (auto& v : values) {
      v = rng.uniform(-1.0, 1.0) * (rng.below(4) == 0 ? 8.0 : 1.0);
    }
    const GridFunction f(cfg.root, cfg.depth, std::move(values));

    std::vector<double> table(static_cast<std::size_t>(cfg.depth) + 1);
    double level_value = 1.0;
    for (auto& v : table) {
      v = level_value;
      level_value *= rng.uniform(0.5, 1.0);
    }
    const EpsilonCollection choices[] = {cfg.epsilon, EpsilonCollection::constant(1.0), EpsilonCollection::sqrt_side(),
                                         EpsilonCollection::level_table(cfg.root.level(), table)};
    const EpsilonCollection& eps = choices[i % 4];
    const double fraction = rng.uniform(0.05, 0.95);

    // maximal operators
    const auto md = dyadic_maximal(f);
    const auto md_ref = oracle::dyadic_maximal(f);
    const double md_dev = max_abs_diff(md.values(), md_ref) / scale_of(md_ref);
    record(i, "dyadic_maximal", md_dev, md_dev <= 1e-13);
    const auto me = eps_maximal(f, eps);
    const auto me_ref = oracle::maximal(f, eps);
    const double me_dev = max_abs_diff(me.values(), me_ref) / scale_of(me_ref);
    record(i, "eps_maximal", me_dev, me_dev <= 1e-13);
    double excess = 0.0;
    for (std::size_t c = 0; c < cells; ++c) {
      excess = std::max(excess, me.value(c) - eps.sup_bound() * md.value(c));
    }
    record(i, "eps_maximal_le_sup_eps_times_dyadic", std::max(0.0, excess), excess <= 1e-13 * scale_of(md_ref));

    // CZ decomposition against the brute-force superlevel set
    const double lambda = midway_lambda(f, eps, fraction);
    bool cz_ok = false;
    double cz_dev = 0.0;
    try {
      const CZResult r = cz_decompose(f, eps, inject_fault ? 0.5 * lambda : lambda);
      const CzCheck c = check_cz(f, eps, r, lambda);
      cz_ok = c.disjoint && c.bounds && c.maximal && c.union_matches;
      cz_dev = std::max(0.0, c.worst_bound);
      if (!c.union_matches) {
        cz_dev = std::max(cz_dev, 1.0);
      }
    } catch (const std::exception&) {
      cz_ok = false;
      cz_dev = 1.0;
    }
    record(i, "cz_decomposition", cz_dev, cz_ok);

    // sparse collections
    const SparseCollection s = build_sparse_stopping(f, default_stopping_ratio(cfg.dimension));
    const SparseCheck sc = verify_sparse(s);
    record(i, "sparse_packing", sc.max_ratio, sc.holds);
    const auto so = sparse_operator(f, s, eps);
    const auto so_ref = oracle::sparse_operator(f, s, eps);
    const double so_dev = max_abs_diff(so.values(), so_ref) / scale_of(so_ref);
    record(i, "sparse_operator", so_dev, so_dev <= 1e-13);

    // Haar multiplier against direct summation
    const auto t = haar_multiplier(f, eps);
    const auto t_ref = oracle::haar_multiplier(f, eps, HaarMode::full_support);
    const double t_dev = max_abs_diff(t.values(), t_ref) / scale_of(t_ref);
    record(i, "haar_multiplier", t_dev, t_dev <= 1e-12);

    // constant-exponent norms against the closed form
    const double pc = (i % 3 == 0) ? 1.5 : (i % 3 == 1 ? 2.0 : 3.0);
    double integral = 0.0;
    for (const double v : f.values()) {
      integral += std::pow(std::abs(v), pc) * f.cell_volume();
    }
    const double closed = std::pow(integral, 1.0 / pc);
    const double got = norm(f, ExponentFunction::constant(pc), cfg.tol.norm);
    const double n_dev = std::abs(got - closed) / closed;
    record(i, "constant_exponent_norm", n_dev, n_dev <= 1e-8);
  }

  Csv summary(cfg, result, "oracle_summary.csv", "check,instances,failures,max_deviation,passed");
  for (const auto& [name, t] : tallies) {
    summary.row(name, instances, t.failures, t.worst, t.failures == 0);
    if (t.failures > 0) {
      fail(result, name + ": " + std::to_string(t.failures) + " of " + std::to_string(instances) + " instances");
    }
  }
  return result;
}

// ----------------------------------------------------------------- opnorm

RunResult run_opnorm(const ExperimentConfig& cfg) {
  prepare_output(cfg);
  RunResult result;
  const std::string which = option(cfg, "operator", std::string("meps"));
  const std::vector<int> depths =
      option(cfg, "depths", cfg.dimension == 1 ? std::vector<int>{6, 8, 10} : std::vector<int>{3, 4, 5});
  const double stability = option(cfg, "stability_factor", 1.5);
  const EpsilonCollection& eps = cfg.epsilon;
  const HaarMode mode = option(cfg, "mode", std::string("full_support")) == "literal_Q" ? HaarMode::literal_cube
                                                                                       : HaarMode::full_support;

  Operator op;
  if (which == "identity") {
    op = [](const GridFunction& f) { return f; };
  } else if (which == "md") {
    op = [](const GridFunction& f) { return dyadic_maximal(f); };
  } else if (which == "meps") {
    op = [&eps](const GridFunction& f) { return eps_maximal(f, eps); };
  } else if (which == "teps") {
    op = [&eps, mode](const GridFunction& f) { return haar_multiplier(f, eps, mode); };
  } else if (which == "seps") {
    op = [&eps](const GridFunction& f) {
      return sparse_operator(f, build_sparse_stopping(f, default_stopping_ratio(f.dimension())), eps);
    };
  } else {
    throw ConfigError("opnorm: unknown operator '" + which + "' (identity, md, meps, teps, seps)");
  }
  if (depths.empty()) {
    throw ConfigError("opnorm: empty depth sweep");
  }

  Csv csv(cfg, result, "opnorm.csv", "depth,function,ratio");
  Csv summary(cfg, result, "opnorm_summary.csv", "depth,max_ratio");
  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  for (const int depth : depths) {
    if (depth < 1 || depth * cfg.dimension > kMaxGridBits) {
      throw ConfigError("opnorm: depth " + std::to_string(depth) + " out of range");
    }
    const auto bank = nonzero(make_bank(cfg.bank, cfg.root, depth));
    if (bank.empty()) {
      throw ConfigError("opnorm: bank has no nonzero function");
    }
    const OpnormEstimate est = opnorm_estimate(op, cfg.exponent, bank, cfg.tol.norm);
    for (std::size_t i = 0; i < est.ratios.size(); ++i) {
      csv.row(depth, i, est.ratios[i]);
    }
    summary.row(depth, est.max_ratio);
    lo = std::min(lo, est.max_ratio);
    hi = std::max(hi, est.max_ratio);
    if (!std::isfinite(est.max_ratio)) {
      fail(result, "non-finite ratio at depth " + std::to_string(depth));
    }
    if (which == "identity" && std::abs(est.max_ratio - 1.0) > 2.0 * cfg.tol.norm) {
      fail(result, "identity ratio " + format_double(est.max_ratio));
    }
    if (which == "md" && cfg.exponent.is_constant()) {
      const double bound = conjugate_value(cfg.exponent.p_minus());
      if (est.max_ratio > bound + cfg.tol.slack) {
        fail(result, "M^d ratio " + format_double(est.max_ratio) + " above (p_-)' = " + format_double(bound));
      }
    }
  }
  const double spread = lo > 0.0 ? hi / lo : std::numeric_limits<double>::infinity();
  summary.row("spread", spread);
  if (which != "identity" && lo > 0.0 && spread > stability) {
    fail(result, "max ratio varies by factor " + format_double(spread) + " across depths");
  }
  result.notes.push_back("max ratio " + format_double(hi) + ", spread across depths " + format_double(spread));
  return result;
}

// ------------------------------------------------------------ compactness

RunResult run_compactness(const ExperimentConfig& cfg) {
  prepare_output(cfg);
  RunResult result;
  BankSpec spec = cfg.bank;
  if (!cfg.bank_given) {
    spec.kind = BankKind::indicators;
    spec.count = 4 * cfg.depth;
  }
  const auto bank = nonzero(make_bank(spec, cfg.root, cfg.depth));
  const CompactnessProbe probe = compactness_probe(cfg.epsilon, cfg.exponent, bank, cfg.tol.norm);
  {
    Csv csv(cfg, result, "compactness.csv", "N,e_N");
    for (std::size_t N = 0; N < probe.estimates.size(); ++N) {
      csv.row(N, probe.estimates[N]);
    }
  }
  const double last = probe.estimates.back();
  Csv summary(cfg, result, "compactness_summary.csv", "decay_hypothesis,nonincreasing,stalled,e_0,e_last");
  summary.row(probe.decay_hypothesis, probe.nonincreasing, probe.stalled, probe.estimates.front(), last);
  if (last != 0.0) {
    fail(result, "e_N at the cell level is " + format_double(last) + ", expected 0");
  }
  if (probe.decay_hypothesis) {
    if (!probe.nonincreasing) {
      fail(result, "decaying eps but e_N is not nonincreasing");
    }
    result.notes.push_back("eps decays; e_N nonincreasing: " + std::string(probe.nonincreasing ? "yes" : "no"));
  } else {
    if (!probe.stalled) {
      fail(result, "eps does not decay but the probe did not stall");
    }
    result.notes.push_back("eps does not decay; probe reports non-convergence: " +
                           std::string(probe.stalled ? "yes" : "no"));
  }
  return result;
}

// --------------------------------------------------------------------- cz

RunResult run_cz(const ExperimentConfig& cfg) {
  prepare_output(cfg);
  RunResult result;
  const auto bank = nonzero(make_bank(cfg.bank, cfg.root, cfg.depth));
  const bool fixed = cfg.options.contains("lambda");
  const double fixed_lambda = option(cfg, "lambda", 0.0);
  json all = json::array();
  Csv csv(cfg, result, "cz.csv", "function,lambda,cube,eps,average,ratio_to_lambda");
  Csv checks(cfg, result, "cz_checks.csv", "function,lambda,cubes,disjoint,bounds,maximal,union_matches");
  for (std::size_t i = 0; i < bank.size(); ++i) {
    const GridFunction& f = bank[i];
    const double lambda = fixed ? fixed_lambda : midway_lambda(f, cfg.epsilon, 0.5);
    try {
      const CZResult r = cz_decompose(f, cfg.epsilon, lambda);
      for (const auto& c : r.cubes) {
        csv.row(i, lambda, c.cube.token(), c.eps, c.average, c.eps * c.average / lambda);
      }
      const CzCheck c = check_cz(f, cfg.epsilon, r, lambda);
      checks.row(i, lambda, r.cubes.size(), c.disjoint, c.bounds, c.maximal, c.union_matches);
      if (!(c.disjoint && c.bounds && c.maximal && c.union_matches)) {
        fail(result, "decomposition of function " + std::to_string(i));
      }
      json j = io::cz_to_json(r);
      j["function"] = i;
      all.push_back(j);
    } catch (const NotLocalizable& e) {
      fail(result, "function " + std::to_string(i) + ": " + e.what());
    }
  }
  write_json(cfg, result, "cz.json", all);
  return result;
}

// ------------------------------------------------------------------- haar

RunResult run_haar(const ExperimentConfig& cfg) {
  prepare_output(cfg);
  RunResult result;
  const std::string mode_name = option(cfg, "mode", std::string("full_support"));
  if (mode_name != "full_support" && mode_name != "literal_Q") {
    throw ConfigError("haar: mode must be full_support or literal_Q");
  }
  const HaarMode mode = mode_name == "literal_Q" ? HaarMode::literal_cube : HaarMode::full_support;
  const auto bank = make_bank(cfg.bank, cfg.root, cfg.depth);
  const EpsilonCollection one = EpsilonCollection::constant(1.0);
  Csv csv(cfg, result, "haar.csv", "function,oracle_deviation,identity_deviation");
  for (std::size_t i = 0; i < bank.size(); ++i) {
    const GridFunction& f = bank[i];
    const GridFunction t = haar_multiplier(f, cfg.epsilon, mode);
    const auto t_ref = oracle::haar_multiplier(f, cfg.epsilon, mode);
    const double oracle_dev = max_abs_diff(t.values(), t_ref) / scale_of(t_ref);

    const GridFunction identity = haar_multiplier(f, one, HaarMode::full_support);
    const double avg = f.average(f.root());
    double id_dev = 0.0;
    for (std::size_t c = 0; c < f.cell_count(); ++c) {
      id_dev = std::max(id_dev, std::abs(identity.value(c) - (f.value(c) - avg)));
    }
    csv.row(i, oracle_dev, id_dev);
    if (oracle_dev > 1e-12) {
      fail(result, "function " + std::to_string(i) + ": fast and direct multipliers differ by " +
                       format_double(oracle_dev));
    }
    if (id_dev > 1e-11) {
      fail(result, "function " + std::to_string(i) + ": T f != f - avg by " + format_double(id_dev));
    }
    if (i == 0) {
      write_grid_files(cfg, result, "haar_output_0", t);
    }
  }
  return result;
}

// ----------------------------------------------------------------- sparse

RunResult run_sparse(const ExperimentConfig& cfg) {
  prepare_output(cfg);
  RunResult result;
  const double ratio = option(cfg, "ratio", default_stopping_ratio(cfg.dimension));
  const auto bank = nonzero(make_bank(cfg.bank, cfg.root, cfg.depth));
  json all = json::array();
  Csv csv(cfg, result, "sparse.csv",
          "function,size,max_packing_ratio,sparse,domination_ratio,failures,scale_deviation,telescope_deviation");
  for (std::size_t i = 0; i < bank.size(); ++i) {
    const GridFunction& f = bank[i];
    SparseCollection s = [&] {
      try {
        return build_sparse_stopping(f, ratio);
      } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("sparse: ") + e.what());
      }
    }();
    const SparseCheck check = verify_sparse(s);
    const DominationResult dom = domination_ratio(f, cfg.epsilon);
    const DominationResult dom2 = domination_ratio(f.scaled(2.0), cfg.epsilon);
    const double scale_dev = std::abs(dom2.ratio - dom.ratio) / std::max(1.0, dom.ratio);

    const GridFunction g = f.abs();
    const GridFunction full = sparse_operator(g, s, cfg.epsilon);
    double telescope = 0.0;
    for (int N = 0; N <= cfg.root.level() + cfg.depth; ++N) {
      const GridFunction sum = add(truncated_sparse(g, s, cfg.epsilon, N), sparse_tail(g, s, cfg.epsilon, N));
      telescope = std::max(telescope, max_abs_difference(sum, full) / std::max(1.0, full.sup_abs()));
    }
    csv.row(i, s.size(), check.max_ratio, check.holds, dom.ratio, dom.failures, scale_dev, telescope);
    const bool ok = check.holds && dom.failures == 0 && std::isfinite(dom.ratio) && scale_dev <= 1e-12 &&
                    telescope <= 1e-12;
    if (!ok) {
      fail(result, "function " + std::to_string(i));
    }
    json j = io::sparse_to_json(s);
    j["function"] = i;
    all.push_back(j);
  }
  write_json(cfg, result, "sparse.json", all);
  return result;
}

}  // namespace epsdyad
