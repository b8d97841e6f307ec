#pragma once

namespace tsselect {

inline constexpr const char* version = "1.0.0";

/// Bumped whenever a CSV layout changes.
inline constexpr int csv_schema = 1;

}  // namespace tsselect
