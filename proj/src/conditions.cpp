#include "epsdyad/conditions.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace epsdyad {

namespace {

void finish(ConditionReport& report) {
  report.supremum = 0.0;
  report.witness.reset();
  for (const auto& r : report.records) {
    if (!report.witness || r.value > report.supremum) {
      report.supremum = r.value;
      report.witness = r.cube;
    }
  }
}

double checked_eps(const EpsilonCollection& eps, const DyadicCube& q) {
  const double e = eps.value(q);
  if (!(e > 0.0)) {
    throw std::domain_error("eps-Diening check: eps_Q must be positive at " + q.token());
  }
  return e;
}

}  // namespace

ConditionReport check_diening(const ExponentFunction& p, std::span<const DyadicCube> cubes) {
  ConditionReport report;
  report.records.reserve(cubes.size());
  for (const auto& q : cubes) {
    const auto r = p.range(q);
    report.records.push_back({q, r.minus, r.plus, 1.0, std::pow(q.volume(), r.minus - r.plus)});
  }
  finish(report);
  return report;
}

ConditionReport check_eps_diening(const ExponentFunction& p, const EpsilonCollection& eps,
                                  std::span<const DyadicCube> cubes) {
  ConditionReport report;
  report.records.reserve(cubes.size());
  for (const auto& q : cubes) {
    const auto r = p.range(q);
    const double e = checked_eps(eps, q);
    report.records.push_back({q, r.minus, r.plus, e, std::pow(q.volume() / e, r.minus - r.plus)});
  }
  finish(report);
  return report;
}

ConditionReport check_eps_diening_pointwise(const ExponentFunction& p, const EpsilonCollection& eps,
                                            std::span<const DyadicCube> cubes, int samples_per_cube) {
  if (samples_per_cube < 1) {
    throw std::invalid_argument("check_eps_diening_pointwise: need at least one sample per cube");
  }
  ConditionReport report;
  report.records.reserve(cubes.size());
  for (const auto& q : cubes) {
    const int n = q.dimension();
    const auto per_axis = static_cast<long>(std::ceil(std::pow(samples_per_cube, 1.0 / n) - 1e-9));
    const auto r = p.range(q);
    const double e = checked_eps(eps, q);
    const double base = q.volume() / e;
    const auto lower = q.lower_corner();
    const double side = q.side();

    long total = 1;
    for (int i = 0; i < n; ++i) {
      total *= per_axis;
    }
    double best = 0.0;
    std::vector<double> x(static_cast<std::size_t>(n));
    for (long s = 0; s < total; ++s) {
      long rest = s;
      for (int i = n - 1; i >= 0; --i) {
        const long k = rest % per_axis;
        rest /= per_axis;
        x[static_cast<std::size_t>(i)] =
            lower[static_cast<std::size_t>(i)] + side * (static_cast<double>(k) + 0.5) / static_cast<double>(per_axis);
      }
      best = std::max(best, std::pow(base, r.minus - p.at(x)));
    }
    report.records.push_back({q, r.minus, r.plus, e, best});
  }
  finish(report);
  return report;
}

DecayFit check_lh_infty(const ExponentFunction& p, std::span<const double> sample_points,
                        std::optional<double> p_inf_guess) {
  if (sample_points.empty()) {
    throw std::invalid_argument("check_lh_infty: no samples");
  }
  struct Sample {
    double x;
    double p;
  };
  std::vector<Sample> samples;
  samples.reserve(sample_points.size());
  for (const double x : sample_points) {
    samples.push_back({x, p.at(x)});
  }
  std::sort(samples.begin(), samples.end(),
            [](const Sample& a, const Sample& b) { return std::abs(a.x) < std::abs(b.x); });

  // median of p over the outermost tenth of |x|, overall and per direction
  auto fit = [&](auto keep) -> std::optional<double> {
    std::vector<Sample> kept;
    for (const auto& s : samples) {
      if (keep(s.x)) {
        kept.push_back(s);
      }
    }
    if (kept.empty()) {
      return std::nullopt;
    }
    const std::size_t take = std::max<std::size_t>(1, (kept.size() + 9) / 10);
    std::vector<double> outer;
    for (std::size_t i = kept.size() - take; i < kept.size(); ++i) {
      outer.push_back(kept[i].p);
    }
    std::sort(outer.begin(), outer.end());
    return outer[outer.size() / 2];
  };

  DecayFit out{};
  out.p_inf_positive = fit([](double x) { return x > 0.0; });
  out.p_inf_negative = fit([](double x) { return x < 0.0; });
  out.p_inf = p_inf_guess ? *p_inf_guess : *fit([](double) { return true; });
  out.max_radius = std::abs(samples.back().x);

  double inner_max = 0.0;
  double outer_max = 0.0;
  for (const auto& s : samples) {
    const double c = std::abs(s.p - out.p_inf) * std::log(std::numbers::e + std::abs(s.x));
    if (std::abs(s.x) * 2.0 < out.max_radius) {
      inner_max = std::max(inner_max, c);
    } else {
      outer_max = std::max(outer_max, c);
    }
  }
  out.c_inf = std::max(inner_max, outer_max);
  out.growing_at_boundary = outer_max > inner_max && out.c_inf > 0.0;
  return out;
}

ConjugateTransfer check_conjugate_transfer(const ExponentFunction& p, const EpsilonCollection& eps,
                                           std::span<const DyadicCube> cubes) {
  const ExponentFunction conj = p.conjugate();
  ConjugateTransfer out{check_eps_diening(conj, eps, cubes), 0.0};
  out.kappa = (p.p_plus() * p.p_plus()) / (conj.p_minus() * conj.p_minus());
  return out;
}

}  // namespace epsdyad
