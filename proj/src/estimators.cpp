#include "epsdyad/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "epsdyad/sparse.hpp"

namespace epsdyad {

DominationResult domination_ratio(const GridFunction& f, const EpsilonCollection& eps, HaarMode mode) {
  if (f.is_zero()) {
    throw std::invalid_argument("domination_ratio: f is identically zero");
  }
  const GridFunction g = f.abs();
  const SparseCollection s = build_sparse_stopping(g, default_stopping_ratio(f.dimension()));
  const GridFunction t = haar_multiplier(f, eps, mode);
  const GridFunction dominant = sparse_operator(g, s, eps);
  DominationResult out{0.0, 0, s.size()};
  for (std::size_t i = 0; i < f.cell_count(); ++i) {
    if (f.value(i) == 0.0) {
      continue;
    }
    const double num = std::abs(t.value(i));
    const double den = dominant.value(i);
    if (den == 0.0) {
      if (num != 0.0) {
        ++out.failures;
      }
      continue;
    }
    out.ratio = std::max(out.ratio, num / den);
  }
  return out;
}

OpnormEstimate opnorm_estimate(const Operator& op, const ExponentFunction& p, std::span<const GridFunction> bank,
                               double tol) {
  if (bank.empty()) {
    throw std::invalid_argument("opnorm_estimate: empty bank");
  }
  OpnormEstimate out{0.0, {}};
  out.ratios.reserve(bank.size());
  for (const auto& f : bank) {
    const double denom = norm(f, p, tol);
    if (denom == 0.0) {
      throw std::invalid_argument("opnorm_estimate: bank contains a zero function");
    }
    const double r = norm(op(f), p, tol) / denom;
    out.ratios.push_back(r);
    out.max_ratio = std::max(out.max_ratio, r);
  }
  return out;
}

CompactnessProbe compactness_probe(const EpsilonCollection& eps, const ExponentFunction& p,
                                   std::span<const GridFunction> bank, double tol) {
  if (bank.empty()) {
    throw std::invalid_argument("compactness_probe: empty bank");
  }
  const int depth = bank.front().depth();
  const DyadicCube& root = bank.front().root();
  for (const auto& f : bank) {
    if (!f.same_layout(bank.front())) {
      throw std::invalid_argument("compactness_probe: bank functions must share one layout");
    }
  }
  // truncation is by absolute side, so N runs up to the cell level
  const int n_max = std::max(0, root.level() + depth);
  CompactnessProbe out{std::vector<double>(static_cast<std::size_t>(n_max) + 1, 0.0), false, false, true};
  for (const auto& f : bank) {
    if (f.is_zero()) {
      continue;
    }
    const GridFunction g = f.abs();
    const SparseCollection s = build_sparse_stopping(g, default_stopping_ratio(f.dimension()));
    const double denom = norm(f, p, tol);
    for (int N = 0; N <= n_max; ++N) {
      const GridFunction tail = sparse_tail(g, s, eps, N);
      const double e = tail.is_zero() ? 0.0 : norm(tail, p, tol) / denom;
      auto& slot = out.estimates[static_cast<std::size_t>(N)];
      slot = std::max(slot, e);
    }
  }
  const auto& e = out.estimates;
  for (std::size_t N = 1; N < e.size(); ++N) {
    if (e[N] > e[N - 1]) {
      out.nonincreasing = false;
    }
  }
  out.stalled = e.size() > 1 && e[0] > 0.0;
  for (std::size_t N = 1; N + 1 < e.size() && out.stalled; ++N) {
    if (e[N] < (1.0 - kStallTolerance) * e[0]) {
      out.stalled = false;
    }
  }
  if (depth >= 1) {
    const auto profile = decay_profile(eps, root, std::max(1, depth));
    out.decay_hypothesis = profile.back() <= 0.5 * profile.front();
  }
  return out;
}

}  // namespace epsdyad
