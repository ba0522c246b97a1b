#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "epsdyad/conditions.hpp"
#include "epsdyad/cz.hpp"
#include "epsdyad/epsilon.hpp"
#include "epsdyad/exponent.hpp"
#include "epsdyad/grid.hpp"
#include "epsdyad/sparse.hpp"

namespace epsdyad::io {

/// Malformed or inconsistent descriptor/config input.
class ConfigError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Shortest round-trip-safe text for a double ("%.17g").
std::string format_double(double v);

/// {"kind":"constant","p":2}, {"kind":"origin","a":0.5},
/// {"kind":"grid","root":"0:0","depth":3,"values":[...]},
/// {"kind":"table","breaks":[...],"values":[...]}; optional "conjugate": true.
ExponentFunction exponent_from_json(const nlohmann::json& j);
nlohmann::json exponent_to_json(const ExponentFunction& p);

/// {"kind":"constant","c":1}, {"kind":"origin","C":1.2,"a":0.5},
/// {"kind":"level_rule","base":"sqrt_side"},
/// {"kind":"level_rule","base":"side_power","beta":0.25,"scale":1},
/// {"kind":"level_rule","first_level":0,"levels":[...]},
/// {"kind":"table","entries":{"2:1":0.3},"fallback":{...}}; optional "power": alpha.
EpsilonCollection epsilon_from_json(const nlohmann::json& j);
nlohmann::json epsilon_to_json(const EpsilonCollection& eps);

/// {"dimension":n,"root":"lvl:corner","depth":d}
nlohmann::json grid_header(const GridFunction& f);
/// "cell_index,value" rows after a header line.
void write_grid_csv(std::ostream& out, const GridFunction& f);
GridFunction read_grid(const nlohmann::json& header, std::istream& csv);

/// "cube,p_minus,p_plus,eps,value"
void write_condition_report(std::ostream& out, const ConditionReport& report);

nlohmann::json cz_to_json(const CZResult& result);
nlohmann::json sparse_to_json(const SparseCollection& s);

}  // namespace epsdyad::io
