#pragma once

namespace qwflow {

// Unitarity, normalization and marginal-sum checks accumulate rounding and
// get a loose tolerance; locality zeros are structural and expected exact up
// to representation noise.
inline constexpr double kNormTol = 1e-9;
inline constexpr double kLocalityTol = 1e-12;

// Entries in (0, kZeroCutoff] count as zero when deciding strict positivity
// (m* membership, the delta rule for vanishing P_n).
inline constexpr double kZeroCutoff = 1e-12;

// Default tolerance for verification reports and feasibility decisions.
inline constexpr double kVerifyTol = 1e-9;

// Simplex pivot tolerance.
inline constexpr double kPivotTol = 1e-10;

// Residual capacities below this are treated as exhausted by the max-flow
// search.
inline constexpr double kResidualTol = 1e-12;

}  // namespace qwflow
