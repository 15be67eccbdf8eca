#pragma once

namespace hbarsign {

/// Measured value of hbar in SI units (Joule seconds). Exported for display
/// only; all numerics run in natural units where |hbar| = 1 and the sign is
/// the object under study.
inline constexpr double kHbarSI = 1.054e-34;

/// Default working value: natural units, positive sign convention.
inline constexpr double kHbarNatural = 1.0;

inline constexpr const char* kToolkitVersion = "1.0.0";

}  // namespace hbarsign
