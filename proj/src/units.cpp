#include "cstirap/units.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <string>

#include "cstirap/chain_model.hpp"

namespace cstirap {

namespace {

struct UnitEntry {
  std::string_view symbol;
  Dimension dimension;
  double scale;  // multiply to get the internal unit
};

constexpr std::array kUnits{
    UnitEntry{"s", Dimension::time, 1.0},
    UnitEntry{"ms", Dimension::time, 1e-3},
    UnitEntry{"us", Dimension::time, 1e-6},
    UnitEntry{"\xC2\xB5s", Dimension::time, 1e-6},  // micro sign
    UnitEntry{"\xCE\xBCs", Dimension::time, 1e-6},  // greek mu
    UnitEntry{"ns", Dimension::time, 1e-9},
    UnitEntry{"ps", Dimension::time, 1e-12},
    UnitEntry{"/s", Dimension::rate, 1.0},
    UnitEntry{"1/s", Dimension::rate, 1.0},
    UnitEntry{"s^-1", Dimension::rate, 1.0},
    UnitEntry{"s-1", Dimension::rate, 1.0},
    UnitEntry{"s\xE2\x81\xBB\xC2\xB9", Dimension::rate, 1.0},  // s⁻¹
    UnitEntry{"rad/s", Dimension::rate, 1.0},
    UnitEntry{"/us", Dimension::rate, 1e6},
    UnitEntry{"D", Dimension::dipole, 1.0},
    UnitEntry{"Debye", Dimension::dipole, 1.0},
    UnitEntry{"debye", Dimension::dipole, 1.0},
    UnitEntry{"nm", Dimension::length, 1.0},
    UnitEntry{"um", Dimension::length, 1e3},
    UnitEntry{"m", Dimension::length, 1e9},
    UnitEntry{"W/cm2", Dimension::intensity, 1.0},
    UnitEntry{"W/cm^2", Dimension::intensity, 1.0},
    UnitEntry{"W/cm\xC2\xB2", Dimension::intensity, 1.0},
    UnitEntry{"mW/cm2", Dimension::intensity, 1e-3},
    UnitEntry{"W/m2", Dimension::intensity, 1e-4},
    UnitEntry{"W/m^2", Dimension::intensity, 1e-4},
    UnitEntry{"cm3/s", Dimension::collision_coefficient, 1.0},
    UnitEntry{"cm^3/s", Dimension::collision_coefficient, 1.0},
    UnitEntry{"cm\xC2\xB3/s", Dimension::collision_coefficient, 1.0},
    UnitEntry{"m3/s", Dimension::collision_coefficient, 1e6},
    UnitEntry{"cm-3", Dimension::density, 1.0},
    UnitEntry{"cm^-3", Dimension::density, 1.0},
    UnitEntry{"/cm3", Dimension::density, 1.0},
    UnitEntry{"cm\xE2\x81\xBB\xC2\xB3", Dimension::density, 1.0},
    UnitEntry{"m^-3", Dimension::density, 1e-6},
};

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\n\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\n\r");
  return s.substr(first, last - first + 1);
}

}  // namespace

std::string_view dimension_name(Dimension d) {
  switch (d) {
    case Dimension::dimensionless: return "dimensionless";
    case Dimension::time: return "time";
    case Dimension::rate: return "rate";
    case Dimension::dipole: return "dipole moment";
    case Dimension::length: return "wavelength";
    case Dimension::intensity: return "intensity";
    case Dimension::collision_coefficient: return "collision coefficient";
    case Dimension::density: return "density";
  }
  return "unknown";
}

Quantity parse_quantity(std::string_view text) {
  const std::string_view s = trim(text);
  double value = 0.0;
  const char* begin = s.data();
  const char* end = s.data() + s.size();
  // from_chars rejects a leading '+'
  if (begin != end && *begin == '+') ++begin;
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr == begin || !std::isfinite(value))
    throw ValidationError("malformed quantity '" + std::string(text) + "'");
  const std::string_view unit = trim(std::string_view(ptr, static_cast<std::size_t>(end - ptr)));
  if (unit.empty()) return {value, Dimension::dimensionless};
  for (const UnitEntry& u : kUnits)
    if (u.symbol == unit) return {value * u.scale, u.dimension};
  throw ValidationError("unknown unit '" + std::string(unit) + "' in '" + std::string(text) + "'");
}

double parse_quantity_as(std::string_view text, Dimension expected) {
  const Quantity q = parse_quantity(text);
  if (q.dimension != Dimension::dimensionless && q.dimension != expected)
    throw ValidationError("'" + std::string(text) + "' is a " + std::string(dimension_name(q.dimension)) +
                          ", expected a " + std::string(dimension_name(expected)));
  return q.value;
}

}  // namespace cstirap
