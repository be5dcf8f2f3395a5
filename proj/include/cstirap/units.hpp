#pragma once

// Explicit-unit quantities for configuration files, e.g. "1 us", "3e7 /s",
// "0.4 D", "780.7 nm", "3 W/cm2". Values are returned in the library's
// internal units: s, s^-1, Debye, nm, W/cm^2, cm^3/s, cm^-3.

#include <string>
#include <string_view>

namespace cstirap {

enum class Dimension {
  dimensionless,
  time,
  rate,
  dipole,
  length,
  intensity,
  collision_coefficient,
  density,
};

[[nodiscard]] std::string_view dimension_name(Dimension d);

struct Quantity {
  double value = 0.0;
  Dimension dimension = Dimension::dimensionless;  // dimensionless when no unit was given
};

/// Parses "<number> [unit]". Throws ValidationError on malformed text or an
/// unknown unit.
[[nodiscard]] Quantity parse_quantity(std::string_view text);

/// Parses text and converts it to `expected`. A bare number is taken to be in
/// the internal unit of `expected`; a unit of another dimension throws.
[[nodiscard]] double parse_quantity_as(std::string_view text, Dimension expected);

}  // namespace cstirap
