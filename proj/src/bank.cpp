#include "epsdyad/bank.hpp"

#include <stdexcept>

#include "epsdyad/haar.hpp"

namespace epsdyad {

BankKind parse_bank_kind(const std::string& name) {
  if (name == "indicators") {
    return BankKind::indicators;
  }
  if (name == "random_cells") {
    return BankKind::random_cells;
  }
  if (name == "haar_like") {
    return BankKind::haar_like;
  }
  throw std::invalid_argument("unknown bank kind '" + name + "'");
}

std::string bank_kind_name(BankKind kind) {
  switch (kind) {
    case BankKind::indicators:
      return "indicators";
    case BankKind::random_cells:
      return "random_cells";
    case BankKind::haar_like:
      return "haar_like";
  }
  return "?";
}

DyadicCube random_subcube(Lcg& rng, const DyadicCube& root, int rel_level) {
  std::vector<std::int64_t> corner(static_cast<std::size_t>(root.dimension()));
  for (int i = 0; i < root.dimension(); ++i) {
    const auto offset = static_cast<std::int64_t>(rng.below(std::uint64_t{1} << rel_level));
    corner[static_cast<std::size_t>(i)] = (root.corner(i) << rel_level) + offset;
  }
  return DyadicCube(root.level() + rel_level, corner);
}

std::vector<GridFunction> make_bank(const BankSpec& spec, const DyadicCube& root, int depth) {
  if (spec.count < 1) {
    throw std::invalid_argument("make_bank: count must be at least 1");
  }
  if (depth < 1) {
    throw std::invalid_argument("make_bank: depth must be at least 1");
  }
  Lcg rng(spec.seed);
  std::vector<GridFunction> bank;
  bank.reserve(static_cast<std::size_t>(spec.count));
  for (int i = 0; i < spec.count; ++i) {
    const int rel_level = 1 + i % depth;
    switch (spec.kind) {
      case BankKind::indicators:
        bank.push_back(GridFunction::indicator(root, depth, random_subcube(rng, root, rel_level)));
        break;
      case BankKind::random_cells: {
        std::vector<double> values(std::size_t{1} << (root.dimension() * depth));
        for (auto& v : values) {
          v = rng.uniform(-1.0, 1.0);
        }
        bank.emplace_back(root, depth, std::move(values));
        break;
      }
      case BankKind::haar_like: {
        const DyadicCube q = random_subcube(rng, root, rel_level);
        const double sign = rng.below(2) == 0 ? 1.0 : -1.0;
        bank.push_back(haar_function(q).on(root, depth).scaled(sign));
        break;
      }
    }
  }
  return bank;
}

}  // namespace epsdyad
