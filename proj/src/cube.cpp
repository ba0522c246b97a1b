#include "epsdyad/cube.hpp"

#include <charconv>
#include <cmath>
#include <stdexcept>

namespace epsdyad {

namespace {

// floor(m / 2^shift) for any shift >= 0
std::int64_t shift_down(std::int64_t m, int shift) {
  if (shift >= 63) {
    return m < 0 ? -1 : 0;
  }
  return m >> shift;
}

constexpr std::int64_t kCornerLimit = std::int64_t{1} << 61;

}  // namespace

DyadicCube::DyadicCube(int level, std::span<const std::int64_t> corner)
    : dimension_(static_cast<int>(corner.size())), level_(level) {
  if (corner.empty() || corner.size() > static_cast<std::size_t>(kMaxDimension)) {
    throw std::invalid_argument("DyadicCube: dimension must be in [1, " + std::to_string(kMaxDimension) + "]");
  }
  for (std::size_t i = 0; i < corner.size(); ++i) {
    if (corner[i] >= kCornerLimit || corner[i] < -kCornerLimit) {
      throw std::out_of_range("DyadicCube: corner coordinate out of range");
    }
    corner_[i] = corner[i];
  }
}

DyadicCube::DyadicCube(int level, std::initializer_list<std::int64_t> corner)
    : DyadicCube(level, std::span<const std::int64_t>(corner.begin(), corner.size())) {}

DyadicCube DyadicCube::unit(int dimension) {
  std::vector<std::int64_t> zeros(static_cast<std::size_t>(dimension), 0);
  return DyadicCube(0, zeros);
}

double DyadicCube::side() const { return std::ldexp(1.0, -level_); }

double DyadicCube::volume() const { return std::ldexp(1.0, -dimension_ * level_); }

DyadicCube DyadicCube::parent() const { return ancestor(level_ - 1); }

DyadicCube DyadicCube::ancestor(int level) const {
  if (level > level_) {
    throw std::invalid_argument("DyadicCube::ancestor: requested level is finer than the cube");
  }
  DyadicCube out = *this;
  out.level_ = level;
  const int shift = level_ - level;
  for (int i = 0; i < dimension_; ++i) {
    out.corner_[static_cast<std::size_t>(i)] = shift_down(corner_[static_cast<std::size_t>(i)], shift);
  }
  return out;
}

std::vector<DyadicCube> DyadicCube::children() const {
  const std::size_t count = std::size_t{1} << dimension_;
  std::vector<DyadicCube> out;
  out.reserve(count);
  for (std::size_t bits = 0; bits < count; ++bits) {
    DyadicCube child = *this;
    child.level_ = level_ + 1;
    for (int i = 0; i < dimension_; ++i) {
      // first axis takes the most significant bit so the order is row-major
      const std::size_t bit = (bits >> (dimension_ - 1 - i)) & 1U;
      const auto idx = static_cast<std::size_t>(i);
      child.corner_[idx] = 2 * corner_[idx] + static_cast<std::int64_t>(bit);
      if (child.corner_[idx] >= kCornerLimit || child.corner_[idx] < -kCornerLimit) {
        throw std::out_of_range("DyadicCube::children: corner coordinate out of range");
      }
    }
    out.push_back(child);
  }
  return out;
}

bool DyadicCube::contains(const DyadicCube& other) const {
  if (other.dimension_ != dimension_) {
    throw std::invalid_argument("DyadicCube::contains: dimension mismatch");
  }
  if (other.level_ < level_) {
    return false;
  }
  return other.ancestor(level_) == *this;
}

bool DyadicCube::contains_point(std::span<const double> point) const {
  if (static_cast<int>(point.size()) != dimension_) {
    throw std::invalid_argument("DyadicCube::contains_point: dimension mismatch");
  }
  return cube_at(point, level_) == *this;
}

std::vector<double> DyadicCube::lower_corner() const {
  std::vector<double> out(static_cast<std::size_t>(dimension_));
  for (int i = 0; i < dimension_; ++i) {
    out[static_cast<std::size_t>(i)] = std::ldexp(static_cast<double>(corner_[static_cast<std::size_t>(i)]), -level_);
  }
  return out;
}

std::vector<double> DyadicCube::center() const {
  std::vector<double> out(static_cast<std::size_t>(dimension_));
  for (int i = 0; i < dimension_; ++i) {
    const double m = static_cast<double>(corner_[static_cast<std::size_t>(i)]);
    out[static_cast<std::size_t>(i)] = std::ldexp(m + 0.5, -level_);
  }
  return out;
}

std::string DyadicCube::token() const {
  std::string out = std::to_string(level_) + ":";
  for (int i = 0; i < dimension_; ++i) {
    if (i > 0) {
      out += ',';
    }
    out += std::to_string(corner_[static_cast<std::size_t>(i)]);
  }
  return out;
}

DyadicCube DyadicCube::parse(std::string_view token) {
  const auto colon = token.find(':');
  if (colon == std::string_view::npos) {
    throw std::invalid_argument("DyadicCube::parse: missing ':' in '" + std::string(token) + "'");
  }
  auto parse_int = [&](std::string_view text, auto& value) {
    const auto* first = text.data();
    const auto* last = text.data() + text.size();
    const auto res = std::from_chars(first, last, value);
    if (res.ec != std::errc{} || res.ptr != last || text.empty()) {
      throw std::invalid_argument("DyadicCube::parse: bad integer in '" + std::string(token) + "'");
    }
  };
  int level = 0;
  parse_int(token.substr(0, colon), level);
  std::vector<std::int64_t> corner;
  std::string_view rest = token.substr(colon + 1);
  while (true) {
    const auto comma = rest.find(',');
    std::int64_t m = 0;
    parse_int(rest.substr(0, comma), m);
    corner.push_back(m);
    if (comma == std::string_view::npos) {
      break;
    }
    rest = rest.substr(comma + 1);
  }
  return DyadicCube(level, corner);
}

std::strong_ordering operator<=>(const DyadicCube& a, const DyadicCube& b) {
  if (auto c = a.dimension_ <=> b.dimension_; c != 0) {
    return c;
  }
  if (auto c = a.level_ <=> b.level_; c != 0) {
    return c;
  }
  for (int i = 0; i < a.dimension_; ++i) {
    const auto idx = static_cast<std::size_t>(i);
    if (auto c = a.corner_[idx] <=> b.corner_[idx]; c != 0) {
      return c;
    }
  }
  return std::strong_ordering::equal;
}

std::size_t DyadicCubeHash::operator()(const DyadicCube& q) const noexcept {
  std::uint64_t h = 0x9e3779b97f4a7c15ULL ^ static_cast<std::uint64_t>(q.level());
  for (const auto m : q.corner()) {
    h ^= static_cast<std::uint64_t>(m) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  }
  return static_cast<std::size_t>(h);
}

Relation relation(const DyadicCube& first, const DyadicCube& second) {
  if (first.dimension() != second.dimension()) {
    throw std::invalid_argument("relation: dimension mismatch");
  }
  if (first.level() == second.level()) {
    return first == second ? Relation::equal : Relation::disjoint;
  }
  if (first.level() > second.level()) {
    return first.ancestor(second.level()) == second ? Relation::first_inside_second : Relation::disjoint;
  }
  return second.ancestor(first.level()) == first ? Relation::second_inside_first : Relation::disjoint;
}

DyadicCube cube_at(std::span<const double> point, int level) {
  std::vector<std::int64_t> corner;
  corner.reserve(point.size());
  for (const double x : point) {
    if (!std::isfinite(x)) {
      throw std::invalid_argument("cube_at: non-finite coordinate");
    }
    const double scaled = std::floor(std::ldexp(x, level));
    if (std::abs(scaled) >= std::ldexp(1.0, 61)) {
      throw std::out_of_range("cube_at: point too far from the origin for this level");
    }
    corner.push_back(static_cast<std::int64_t>(scaled));
  }
  return DyadicCube(level, corner);
}

void check_subcube_request(const DyadicCube& root, int level) {
  if (level < root.level()) {
    throw std::invalid_argument("subcubes: level coarser than root");
  }
  if ((level - root.level()) * root.dimension() > 30) {
    throw std::length_error("subcubes: too many cubes requested");
  }
}

std::vector<DyadicCube> subcubes_at_level(const DyadicCube& root, int level) {
  check_subcube_request(root, level);
  std::vector<DyadicCube> out;
  out.reserve(std::size_t{1} << ((level - root.level()) * root.dimension()));
  for_each_subcube(root, level, [&](const DyadicCube& q) { out.push_back(q); });
  return out;
}

}  // namespace epsdyad
