//! Permutation ideals of preprojective algebras of type A, their continuous
//! counterparts indexed by permutons, and the checks relating the two.
//!
//! Everything is generic over a [`Scalar`] field. The default instance is
//! [`Rat`] (arbitrary-precision rationals); floating aliases exist for
//! plotting.

pub mod cont_ideal;
pub mod linalg;
pub mod permuton;
pub mod plfunc;
pub mod preproj_fin;
pub mod scalar;
pub mod sheets_bricks;
pub mod symgroup;

pub use scalar::Scalar;

/// Exact rationals, the default scalar.
pub type Rat = num_rational::BigRational;
/// Machine-word rationals; faster, may overflow on deep computations.
pub type Rat64 = num_rational::Ratio<i64>;

pub type PlFuncF64 = plfunc::PlFunc<f64>;
pub type BFuncF64 = plfunc::BFunc<f64>;
pub type GridPermutonF64 = permuton::GridPermuton<f64>;

/// Default ceiling on `n` for exhaustive enumerations and the Hom solver.
pub const DEFAULT_MAX_N: usize = 6;

/// The scale guard, overridable through `PREPROJ_MAX_N`.
pub fn max_n() -> usize {
    std::env::var("PREPROJ_MAX_N")
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .unwrap_or(DEFAULT_MAX_N)
}
