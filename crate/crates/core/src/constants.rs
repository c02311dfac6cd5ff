//! Measured constants, frozen after first measurement.
//!
//! Each entry records how it was obtained. Values that come from published
//! tables live next to the code that reproduces them, not here.

/// Clamp interval for `D = [z] − [x] − [y]` in the three-track adder.
///
/// Widening started at `[-2, 3]` and stopped on the first round: the
/// minimized result (16 states) is equivalent to the build clamped to
/// `[-20, 20]` and agrees with `x + y = z` for all `x, y < 150`, `z < 300`.
pub const ADDER_INTERVAL: (i64, i64) = (-2, 3);

/// Ceiling on `states(add_const(2^j)) / j` for `1 ≤ j ≤ 16`.
///
/// Measured maximum 8.625 at `j = 16` (138 states); the ratio is 7 at
/// `j = 1` and creeps up slowly.
pub const ADD_CONST_PER_BIT: f64 = 9.0;

/// Ceiling on reachable states of the unminimized `affine(n, c)` divided by
/// `n²`: two previous digits times two differences in a range of `3n`
/// values. Measured over all `c < n ≤ 30`: at most `8n²` (at `n = 1`).
pub const AFFINE_PER_N_SQUARED: f64 = 36.0;

/// Ceiling on states of the determinized (unminimized) linear subsequence
/// DFAO divided by `m²n⁴`, `m` the source size, `1 ≤ n ≤ 10`.
///
/// Measured for the Fibonacci word: 1.25 at `n = 1`, below 0.24 from
/// `n = 2` on.
pub const LINEAR_PER_M2_N4: f64 = 1.5;

/// Ceiling on `states(shift(m, c)) / c` for the parity-of-ones sequence,
/// `1 ≤ c ≤ 50`. Measured maximum 8 at `c = 1`; about 6 for larger `c`.
pub const SHIFT_PER_OFFSET: f64 = 8.0;

/// Ceiling on `subword_count(interior(m), n) / (n·m²)` for the
/// parity-of-ones sequence (`m = 4`), `1 ≤ n ≤ 30`. Measured 0.42.
pub const FACTORS_PER_N_M2: f64 = 0.5;
