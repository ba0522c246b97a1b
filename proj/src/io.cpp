#include "epsdyad/io.hpp"

#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

namespace epsdyad::io {

using nlohmann::json;

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

const json& field(const json& j, const char* key, const char* what) {
  if (!j.is_object() || !j.contains(key)) {
    throw ConfigError(std::string(what) + ": missing \"" + key + "\"");
  }
  return j.at(key);
}

double number(const json& j, const char* key, const char* what) {
  const json& v = field(j, key, what);
  if (!v.is_number()) {
    throw ConfigError(std::string(what) + ": \"" + key + "\" must be a number");
  }
  return v.get<double>();
}

std::vector<double> numbers(const json& j, const char* key, const char* what) {
  const json& v = field(j, key, what);
  if (!v.is_array()) {
    throw ConfigError(std::string(what) + ": \"" + key + "\" must be an array");
  }
  std::vector<double> out;
  for (const auto& x : v) {
    if (!x.is_number()) {
      throw ConfigError(std::string(what) + ": \"" + key + "\" must hold numbers");
    }
    out.push_back(x.get<double>());
  }
  return out;
}

std::string kind_of(const json& j, const char* what) {
  const json& k = field(j, "kind", what);
  if (!k.is_string()) {
    throw ConfigError(std::string(what) + ": \"kind\" must be a string");
  }
  return k.get<std::string>();
}

DyadicCube parse_cube(const json& j, const char* what) {
  if (!j.is_string()) {
    throw ConfigError(std::string(what) + ": cube must be a \"level:corner\" token");
  }
  try {
    return DyadicCube::parse(j.get<std::string>());
  } catch (const std::exception& e) {
    throw ConfigError(std::string(what) + ": " + e.what());
  }
}

// Library constructors validate ranges; surface their complaints as config errors.
template <class Fn>
auto rethrow_as_config(const char* what, Fn&& fn) {
  try {
    return fn();
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(std::string(what) + ": " + e.what());
  }
}

}  // namespace

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

ExponentFunction exponent_from_json(const json& j) {
  constexpr const char* what = "exponent";
  const std::string kind = kind_of(j, what);
  const bool conj = j.contains("conjugate") && j.at("conjugate").get<bool>();
  return rethrow_as_config(what, [&] {
    if (kind == "constant") {
      return ExponentFunction(ConstantExponent{number(j, "p", what)}, conj);
    }
    if (kind == "origin") {
      return ExponentFunction(OriginExponent{number(j, "a", what)}, conj);
    }
    if (kind == "grid") {
      const DyadicCube root = j.contains("root") ? parse_cube(j.at("root"), what)
                                                 : DyadicCube::unit(static_cast<int>(number(j, "dimension", what)));
      const int depth = static_cast<int>(number(j, "depth", what));
      return ExponentFunction(GridExponent{GridFunction(root, depth, numbers(j, "values", what))}, conj);
    }
    if (kind == "table") {
      return ExponentFunction(StepExponent{numbers(j, "breaks", what), numbers(j, "values", what)}, conj);
    }
    throw ConfigError("exponent: unknown kind '" + kind + "'");
  });
}

json exponent_to_json(const ExponentFunction& p) {
  json j = std::visit(overloaded{
                          [](const ConstantExponent& d) { return json{{"kind", "constant"}, {"p", d.p}}; },
                          [](const OriginExponent& d) { return json{{"kind", "origin"}, {"a", d.a}}; },
                          [](const GridExponent& d) {
                            return json{{"kind", "grid"},
                                        {"root", d.values.root().token()},
                                        {"depth", d.values.depth()},
                                        {"values", std::vector<double>(d.values.values().begin(),
                                                                       d.values.values().end())}};
                          },
                          [](const StepExponent& d) {
                            return json{{"kind", "table"}, {"breaks", d.breaks}, {"values", d.values}};
                          },
                      },
                      p.descriptor());
  if (p.conjugated()) {
    j["conjugate"] = true;
  }
  return j;
}

EpsilonCollection epsilon_from_json(const json& j) {
  constexpr const char* what = "epsilon";
  const std::string kind = kind_of(j, what);
  const double alpha = j.contains("power") ? number(j, "power", what) : 1.0;
  auto rule = rethrow_as_config(what, [&]() -> EpsilonCollection::Rule {
    if (kind == "constant") {
      return ConstantRule{number(j, "c", what)};
    }
    if (kind == "origin") {
      return OriginRule{number(j, "C", what), number(j, "a", what)};
    }
    if (kind == "level_rule") {
      if (j.contains("levels")) {
        const int first = j.contains("first_level") ? static_cast<int>(number(j, "first_level", what)) : 0;
        return LevelTableRule{first, numbers(j, "levels", what)};
      }
      const std::string base = field(j, "base", what).get<std::string>();
      if (base == "sqrt_side") {
        return SidePowerRule{0.5, 1.0};
      }
      if (base == "side_power") {
        return SidePowerRule{number(j, "beta", what), j.contains("scale") ? number(j, "scale", what) : 1.0};
      }
      throw ConfigError("epsilon: unknown level_rule base '" + base + "'");
    }
    if (kind == "table") {
      TableRule t;
      t.fallback = std::make_shared<const EpsilonCollection>(epsilon_from_json(field(j, "fallback", what)));
      const json& entries = field(j, "entries", what);
      if (!entries.is_object()) {
        throw ConfigError("epsilon: \"entries\" must map cube tokens to values");
      }
      for (const auto& [token, v] : entries.items()) {
        if (!v.is_number()) {
          throw ConfigError("epsilon: table entry for " + token + " must be a number");
        }
        t.entries.emplace(parse_cube(json(token), what), v.get<double>());
      }
      return t;
    }
    throw ConfigError("epsilon: unknown kind '" + kind + "'");
  });
  return rethrow_as_config(what, [&] { return EpsilonCollection(std::move(rule), alpha); });
}

json epsilon_to_json(const EpsilonCollection& eps) {
  json j = std::visit(overloaded{
                          [](const ConstantRule& r) { return json{{"kind", "constant"}, {"c", r.c}}; },
                          [](const SidePowerRule& r) {
                            return json{{"kind", "level_rule"}, {"base", "side_power"}, {"beta", r.beta},
                                        {"scale", r.scale}};
                          },
                          [](const LevelTableRule& r) {
                            return json{{"kind", "level_rule"}, {"first_level", r.first_level}, {"levels", r.values}};
                          },
                          [](const OriginRule& r) { return json{{"kind", "origin"}, {"C", r.C}, {"a", r.a}}; },
                          [](const TableRule& r) {
                            // sorted for stable output
                            std::vector<std::pair<DyadicCube, double>> sorted(r.entries.begin(), r.entries.end());
                            std::sort(sorted.begin(), sorted.end());
                            json entries = json::object();
                            for (const auto& [q, v] : sorted) {
                              entries[q.token()] = v;
                            }
                            return json{{"kind", "table"}, {"entries", entries},
                                        {"fallback", epsilon_to_json(*r.fallback)}};
                          },
                      },
                      eps.rule());
  if (eps.exponent() != 1.0) {
    j["power"] = eps.exponent();
  }
  return j;
}

json grid_header(const GridFunction& f) {
  return json{{"dimension", f.dimension()}, {"root", f.root().token()}, {"depth", f.depth()}};
}

void write_grid_csv(std::ostream& out, const GridFunction& f) {
  out << "cell_index,value\n";
  for (std::size_t i = 0; i < f.cell_count(); ++i) {
    out << i << ',' << format_double(f.value(i)) << '\n';
  }
}

GridFunction read_grid(const json& header, std::istream& csv) {
  constexpr const char* what = "grid header";
  const DyadicCube root = parse_cube(field(header, "root", what), what);
  if (header.contains("dimension") && header.at("dimension").get<int>() != root.dimension()) {
    throw ConfigError("grid header: dimension does not match the root token");
  }
  const int depth = static_cast<int>(number(header, "depth", what));
  return rethrow_as_config("grid csv", [&] {
    std::string line;
    if (!std::getline(csv, line) || line.rfind("cell_index,value", 0) != 0) {
      throw ConfigError("grid csv: expected header 'cell_index,value'");
    }
    const std::size_t count = std::size_t{1} << (root.dimension() * depth);
    std::vector<double> values(count, 0.0);
    std::vector<char> seen(count, 0);
    while (std::getline(csv, line)) {
      if (line.empty()) {
        continue;
      }
      std::istringstream row(line);
      std::size_t index = 0;
      char comma = 0;
      double v = 0.0;
      if (!(row >> index >> comma >> v) || comma != ',' || index >= count || seen[index]) {
        throw ConfigError("grid csv: bad row '" + line + "'");
      }
      values[index] = v;
      seen[index] = 1;
    }
    if (std::find(seen.begin(), seen.end(), 0) != seen.end()) {
      throw ConfigError("grid csv: missing cells");
    }
    return GridFunction(root, depth, std::move(values));
  });
}

void write_condition_report(std::ostream& out, const ConditionReport& report) {
  out << "cube,p_minus,p_plus,eps,value\n";
  for (const auto& r : report.records) {
    out << r.cube.token() << ',' << format_double(r.p_minus) << ',' << format_double(r.p_plus) << ','
        << format_double(r.eps) << ',' << format_double(r.value) << '\n';
  }
}

json cz_to_json(const CZResult& result) {
  json cubes = json::array();
  for (const auto& c : result.cubes) {
    cubes.push_back({{"cube", c.cube.token()}, {"eps", c.eps}, {"average", c.average}});
  }
  return json{{"lambda", result.lambda}, {"cubes", cubes}};
}

json sparse_to_json(const SparseCollection& s) {
  json cubes = json::array();
  for (std::size_t i = 0; i < s.size(); ++i) {
    json eta = json::array();
    for (const auto k : s.maximal_children(i)) {
      eta.push_back(s.cubes()[k].token());
    }
    cubes.push_back({{"cube", s.cubes()[i].token()}, {"maximal_children", eta}});
  }
  return json{{"root", s.root().token()}, {"cubes", cubes}};
}

}  // namespace epsdyad::io
