#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "epsdyad/grid.hpp"
#include "epsdyad/rng.hpp"

namespace epsdyad {

/// indicators:   chi_P for random P; the relative level of the i-th cube is
///               1 + (i mod depth), so every scale appears once count >= depth.
/// random_cells: independent uniform values in [-1, 1) per cell.
/// haar_like:    +-h_Q for random Q below the root, levels cycling as above.
enum class BankKind { indicators, random_cells, haar_like };

struct BankSpec {
  BankKind kind = BankKind::random_cells;
  int count = 16;
  std::uint64_t seed = 42;
};

BankKind parse_bank_kind(const std::string& name);
std::string bank_kind_name(BankKind kind);

/// Same spec and layout give the same functions bit-for-bit.
std::vector<GridFunction> make_bank(const BankSpec& spec, const DyadicCube& root, int depth);

/// A random dyadic cube at relative level `rel_level` inside root.
DyadicCube random_subcube(Lcg& rng, const DyadicCube& root, int rel_level);

}  // namespace epsdyad
