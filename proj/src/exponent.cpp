#include "epsdyad/exponent.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace epsdyad {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

double origin_value(double a, double x) {
  if (x <= 0.0) {
    return 2.0;
  }
  if (x >= 1.0) {
    return 3.0;
  }
  // log2(2/x) = 1 - log2(x), exact at dyadic x
  return 2.0 + std::pow(1.0 - std::log2(x), -a);
}

void require_one_dimensional(std::span<const double> x) {
  if (x.size() != 1) {
    throw std::invalid_argument("ExponentFunction: this descriptor is one-dimensional");
  }
}

void require_exponent_bounds(double lo, double hi) {
  if (!(lo > 1.0) || !(hi < std::numeric_limits<double>::infinity()) || !(lo <= hi) || !std::isfinite(hi)) {
    throw std::invalid_argument("ExponentFunction: need 1 < p_- <= p_+ < infinity, got [" + std::to_string(lo) + ", " +
                                std::to_string(hi) + "]");
  }
}

}  // namespace

double conjugate_value(double p) { return p / (p - 1.0); }

ExponentFunction::ExponentFunction(Descriptor descriptor, bool conjugated)
    : descriptor_(std::move(descriptor)), conjugated_(conjugated) {
  ExponentRange base = std::visit(
      overloaded{
          [](const ConstantExponent& c) { return ExponentRange{c.p, c.p}; },
          [](const OriginExponent& o) {
            if (!(o.a > 0.0 && o.a < 1.0)) {
              throw std::invalid_argument("ExponentFunction: origin exponent needs 0 < a < 1");
            }
            return ExponentRange{2.0, 3.0};
          },
          [](const GridExponent& g) {
            const auto v = g.values.values();
            const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
            return ExponentRange{*lo, *hi};
          },
          [](const StepExponent& s) {
            if (s.values.empty() || s.breaks.size() + 1 != s.values.size()) {
              throw std::invalid_argument("ExponentFunction: step exponent needs values.size() == breaks.size() + 1");
            }
            if (!std::is_sorted(s.breaks.begin(), s.breaks.end()) ||
                std::adjacent_find(s.breaks.begin(), s.breaks.end()) != s.breaks.end()) {
              throw std::invalid_argument("ExponentFunction: step breaks must be strictly increasing");
            }
            const auto [lo, hi] = std::minmax_element(s.values.begin(), s.values.end());
            return ExponentRange{*lo, *hi};
          },
      },
      descriptor_);
  require_exponent_bounds(base.minus, base.plus);
  global_ = conjugated_ ? ExponentRange{conjugate_value(base.plus), conjugate_value(base.minus)} : base;
}

bool ExponentFunction::is_constant() const { return global_.minus == global_.plus; }

std::optional<int> ExponentFunction::dimension() const {
  return std::visit(overloaded{
                        [](const ConstantExponent&) -> std::optional<int> { return std::nullopt; },
                        [](const OriginExponent&) -> std::optional<int> { return 1; },
                        [](const GridExponent& g) -> std::optional<int> { return g.values.dimension(); },
                        [](const StepExponent&) -> std::optional<int> { return 1; },
                    },
                    descriptor_);
}

double ExponentFunction::base_at(std::span<const double> x) const {
  return std::visit(overloaded{
                        [](const ConstantExponent& c) { return c.p; },
                        [&](const OriginExponent& o) {
                          require_one_dimensional(x);
                          return origin_value(o.a, x[0]);
                        },
                        [&](const GridExponent& g) { return g.values.value(g.values.cell_at(x)); },
                        [&](const StepExponent& s) {
                          require_one_dimensional(x);
                          const auto it = std::upper_bound(s.breaks.begin(), s.breaks.end(), x[0]);
                          return s.values[static_cast<std::size_t>(it - s.breaks.begin())];
                        },
                    },
                    descriptor_);
}

double ExponentFunction::at(std::span<const double> x) const {
  const double p = base_at(x);
  return conjugated_ ? conjugate_value(p) : p;
}

double ExponentFunction::at(double x) const { return at(std::span<const double>(&x, 1)); }

ExponentRange ExponentFunction::base_range(const DyadicCube& q) const {
  return std::visit(
      overloaded{
          [](const ConstantExponent& c) { return ExponentRange{c.p, c.p}; },
          [&](const OriginExponent& o) {
            if (q.dimension() != 1) {
              throw std::invalid_argument("ExponentFunction::range: origin exponent is one-dimensional");
            }
            // nondecreasing and continuous: extremes at the interval endpoints
            const double left = std::ldexp(static_cast<double>(q.corner(0)), -q.level());
            const double right = std::ldexp(static_cast<double>(q.corner(0) + 1), -q.level());
            return ExponentRange{origin_value(o.a, left), origin_value(o.a, right)};
          },
          [&](const GridExponent& g) {
            const GridFunction& grid = g.values;
            if (!grid.resolves(q)) {
              throw std::out_of_range("ExponentFunction::range: cube " + q.token() +
                                      " is outside the exponent grid or below its resolution");
            }
            const int shift = grid.cell_level() - q.level();
            double lo = std::numeric_limits<double>::infinity();
            double hi = -lo;
            for (const auto& cell : subcubes_at_level(q, q.level() + shift)) {
              const double v = grid.value(grid.cell_index(cell));
              lo = std::min(lo, v);
              hi = std::max(hi, v);
            }
            return ExponentRange{lo, hi};
          },
          [&](const StepExponent& s) {
            if (q.dimension() != 1) {
              throw std::invalid_argument("ExponentFunction::range: step exponent is one-dimensional");
            }
            const double left = std::ldexp(static_cast<double>(q.corner(0)), -q.level());
            const double right = std::ldexp(static_cast<double>(q.corner(0) + 1), -q.level());
            // pieces meeting [left, right)
            const auto first = static_cast<std::size_t>(std::upper_bound(s.breaks.begin(), s.breaks.end(), left) -
                                                        s.breaks.begin());
            const auto last = static_cast<std::size_t>(std::lower_bound(s.breaks.begin(), s.breaks.end(), right) -
                                                       s.breaks.begin());
            const auto [lo, hi] = std::minmax_element(s.values.begin() + static_cast<std::ptrdiff_t>(first),
                                                      s.values.begin() + static_cast<std::ptrdiff_t>(last) + 1);
            return ExponentRange{*lo, *hi};
          },
      },
      descriptor_);
}

ExponentRange ExponentFunction::range(const DyadicCube& q) const {
  const ExponentRange base = base_range(q);
  if (!conjugated_) {
    return base;
  }
  return {conjugate_value(base.plus), conjugate_value(base.minus)};
}

ExponentFunction ExponentFunction::conjugate() const {
  if (const auto* c = std::get_if<ConstantExponent>(&descriptor_); c != nullptr && !conjugated_) {
    return ExponentFunction(ConstantExponent{conjugate_value(c->p)});
  }
  return ExponentFunction(descriptor_, !conjugated_);
}

std::vector<double> cell_exponents(const GridFunction& layout, const ExponentFunction& p) {
  std::vector<double> out(layout.cell_count());
  if (const auto* g = std::get_if<GridExponent>(&p.descriptor()); g != nullptr && g->values.same_layout(layout)) {
    for (std::size_t i = 0; i < out.size(); ++i) {
      const double v = g->values.value(i);
      out[i] = p.conjugated() ? conjugate_value(v) : v;
    }
    return out;
  }
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = p.at(layout.cell_cube(i).center());
  }
  return out;
}

}  // namespace epsdyad
