#pragma once

namespace catprob {

/// Per-entry absolute tolerance for causality and almost-equality checks.
inline constexpr double kDefaultEps = 1e-9;

/// Tolerance for conditional-independence decisions; products of conditionals amplify rounding.
inline constexpr double kCiEps = 1e-7;

}  // namespace catprob
