//! Decorous submodules and quotients of the continuous projectives `P_k`,
//! permuton ideals, and the comparisons with the discrete side.
//!
//! A pathlike element of `P_k` at column `x` has a length `ℓ`; it is nonzero
//! exactly when `|x - k| <= ℓ < bottom_k(x) = 1 - |1 - k - x|`. A decorous
//! submodule `D_f` keeps the lengths `ℓ >= f(x)`, the quotient `U_f` keeps
//! `ℓ < f(x)`.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::permuton::{permuton_bruhat_leq, GridPermuton, PermutonError};
use crate::plfunc::{BFunc, MonotoneClass, PlError, PlFunc};
use crate::preproj_fin::{ideal_summand, CurveKind, CurveModule, DiamondCurve, FinError};
use crate::scalar::{from_usize, Scalar};
use crate::symgroup::Perm;
use crate::Rat;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ContError {
    #[error("{0} lies outside the allowed range")]
    Domain(String),
    #[error("curve is not aligned with the 1/{0} grid")]
    NotGridAligned(usize),
    #[error("no monotonicity certificate for a = {a}, b = {b}")]
    CertificateFailure { a: String, b: String },
    #[error(transparent)]
    Pl(#[from] PlError),
    #[error(transparent)]
    Permuton(#[from] PermutonError),
    #[error(transparent)]
    Fin(#[from] FinError),
}

/// Decorous submodule `D_f` of `P_k`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct DecorousSub<T: Scalar = Rat> {
    pub b: BFunc<T>,
}

/// Decorous quotient `U_f` of `P_k`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct DecorousQuot<T: Scalar = Rat> {
    pub b: BFunc<T>,
}

pub fn d_sub<T: Scalar>(f: BFunc<T>) -> DecorousSub<T> {
    DecorousSub { b: f }
}

pub fn u_quot<T: Scalar>(f: BFunc<T>) -> DecorousQuot<T> {
    DecorousQuot { b: f }
}

fn check_point<T: Scalar>(x: &T, len: &T) -> Result<(), ContError> {
    if *x <= T::zero() || *x >= T::one() {
        return Err(ContError::Domain(format!("x = {x}")));
    }
    if len.is_negative() {
        return Err(ContError::Domain(format!("length {len}")));
    }
    Ok(())
}

impl<T: Scalar> DecorousSub<T> {
    pub fn k(&self) -> &T {
        self.b.k()
    }

    pub fn member(&self, x: &T, len: &T) -> Result<bool, ContError> {
        check_point(x, len)?;
        Ok(self.b.func().value_at(x) <= *len && *len < self.b.bottom_value(x))
    }

    pub fn is_full(&self) -> bool {
        self.b.is_top()
    }

    pub fn is_zero(&self) -> bool {
        self.b.is_bottom()
    }

    /// `P_k / D_f`.
    pub fn quotient(&self) -> DecorousQuot<T> {
        DecorousQuot { b: self.b.clone() }
    }
}

impl<T: Scalar> DecorousQuot<T> {
    pub fn k(&self) -> &T {
        self.b.k()
    }

    pub fn member(&self, x: &T, len: &T) -> Result<bool, ContError> {
        check_point(x, len)?;
        Ok(self.b.top_value(x) <= *len && *len < self.b.func().value_at(x))
    }

    pub fn is_zero(&self) -> bool {
        self.b.is_top()
    }
}

/// Whether `(x, ℓ)` is a nonzero pathlike element of `P_k`.
pub fn in_projective<T: Scalar>(k: &T, x: &T, len: &T) -> bool {
    let top = (x.clone() - k.clone()).abs();
    let bottom = T::one() - (T::one() - k.clone() - x.clone()).abs();
    top <= *len && *len < bottom
}

/// `I_μ`, queried one summand at a time.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct PermutonIdeal<T: Scalar = Rat> {
    pub mu: GridPermuton<T>,
}

impl<T: Scalar> PermutonIdeal<T> {
    pub fn new(mu: GridPermuton<T>) -> Self {
        Self { mu }
    }

    /// `D_μ^a = D_{f_{μ,a}}`.
    pub fn summand(&self, a: &T) -> Result<DecorousSub<T>, ContError> {
        Ok(d_sub(self.mu.boundary_function(a)?))
    }
}

pub fn ideal_summand_at<T: Scalar>(ideal: &PermutonIdeal<T>, a: &T) -> Result<DecorousSub<T>, ContError> {
    ideal.summand(a)
}

/// The boundary function of the image of `D_f ⊆ P_q` under left
/// multiplication into `P_p`: `min(bottom_p, f + |q - p|)`.
pub fn left_act<T: Scalar>(f: &BFunc<T>, p: &T) -> Result<BFunc<T>, ContError> {
    if *p <= T::zero() || *p >= T::one() {
        return Err(ContError::Domain(format!("p = {p}")));
    }
    let gap = (f.k().clone() - p.clone()).abs();
    let bottom = BFunc::bottom(p.clone())?;
    let g = bottom.func().pointwise_min(&f.func().vshift(&gap));
    Ok(BFunc::new(p.clone(), g)?)
}

/// Sample points used by the curve route of [`ideal_leq`]: the interior
/// corners of the common grid and the midpoints of its cells.
fn comparison_heights<T: Scalar>(l: usize) -> Vec<T> {
    let denom = from_usize::<T>(2 * l);
    (1..2 * l).map(|t| from_usize::<T>(t) / denom.clone()).collect()
}

/// Both routes of the inclusion test: `(curves, cdfs)`.
pub fn ideal_leq_routes<T: Scalar>(i: &PermutonIdeal<T>, j: &PermutonIdeal<T>) -> (bool, bool) {
    use num_integer::Integer;
    let l = i.mu.m().lcm(&j.mu.m());
    let curves = comparison_heights::<T>(l).iter().all(|y| {
        let fi = i.mu.boundary_function(y).expect("interior height");
        let fj = j.mu.boundary_function(y).expect("interior height");
        fj.func().pointwise_leq(fi.func())
    });
    let cdfs = permuton_bruhat_leq(&j.mu, &i.mu);
    (curves, cdfs)
}

/// `I_μ ⊆ I_ν`. Computed from the boundary curves and from the CDFs; the two
/// must agree.
pub fn ideal_leq<T: Scalar>(i: &PermutonIdeal<T>, j: &PermutonIdeal<T>) -> bool {
    let (curves, cdfs) = ideal_leq_routes(i, j);
    assert_eq!(curves, cdfs, "curve and CDF inclusion tests disagree");
    curves
}

/// Whether the discrete curve of `(I_w)^i` equals `f_{γ_w, i/n}`.
pub fn finite_vs_continuous(w: &Perm, i: usize) -> Result<bool, ContError> {
    let n = w.n();
    let discrete = ideal_summand(w, i)?.curve().to_plfunc::<Rat>();
    let continuous = GridPermuton::<Rat>::from_perm(w).boundary_function(&Rat::ratio(i as i64, n as i64))?;
    Ok(discrete == *continuous.func())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Certificate {
    Increasing,
    Decreasing,
    Constant,
    NoCertificate,
}

/// A monotonicity certificate for `Hom(D_f, U_g) = 0`.
pub fn hom_vanishing_cert<T: Scalar>(f: &BFunc<T>, g: &BFunc<T>) -> Certificate {
    match f.func().sub(g.func()).monotone_class() {
        MonotoneClass::WeaklyIncreasing => Certificate::Increasing,
        MonotoneClass::WeaklyDecreasing => Certificate::Decreasing,
        MonotoneClass::Constant => Certificate::Constant,
        MonotoneClass::Neither => Certificate::NoCertificate,
    }
}

pub fn tau_rigidity_cert<T: Scalar>(mu: &GridPermuton<T>, a: &T, b: &T) -> Result<Certificate, ContError> {
    let f = mu.boundary_function(a)?;
    let g = mu.boundary_function(b)?;
    match hom_vanishing_cert(&f, &g) {
        Certificate::NoCertificate => Err(ContError::CertificateFailure { a: a.to_string(), b: b.to_string() }),
        c => Ok(c),
    }
}

/// `(i, heights)` when `f` is exactly a `±1` lattice path on the `1/n` grid.
fn grid_heights<T: Scalar>(b: &BFunc<T>, n: usize) -> Result<(usize, Vec<usize>), ContError> {
    let scale = from_usize::<T>(n);
    let as_int = |v: T| -> Option<usize> {
        let s = v * scale.clone();
        let k = s.floor_i64()?;
        (T::int(k) == s && k >= 0).then_some(k as usize)
    };
    let bad = || ContError::NotGridAligned(n);
    let i = as_int(b.k().clone()).ok_or_else(bad)?;
    let heights = (0..=n)
        .map(|j| as_int(b.func().value_at(&(from_usize::<T>(j) / scale.clone()))).ok_or_else(bad))
        .collect::<Result<Vec<_>, _>>()?;
    if heights.windows(2).any(|w| w[0].abs_diff(w[1]) != 1) {
        return Err(bad());
    }
    // breakpoints off the grid would make the sampled path differ from f
    let sampled = PlFunc::from_grid(&heights.iter().map(|&h| T::ratio(h as i64, n as i64)).collect::<Vec<_>>())?;
    if sampled != *b.func() {
        return Err(bad());
    }
    Ok((i, heights))
}

/// The discrete submodule of `P_i` with the same curve; requires `k = i/n`
/// and a `±1` path on the `1/n` grid.
pub fn discretize<T: Scalar>(d: &DecorousSub<T>, n: usize) -> Result<CurveModule, ContError> {
    let (i, heights) = grid_heights(&d.b, n)?;
    Ok(CurveModule::sub(DiamondCurve::new(n, i, heights)?))
}

pub fn discretize_quot<T: Scalar>(u: &DecorousQuot<T>, n: usize) -> Result<CurveModule, ContError> {
    let (i, heights) = grid_heights(&u.b, n)?;
    Ok(CurveModule::new(CurveKind::QuotientOfProjective, DiamondCurve::new(n, i, heights)?))
}

/// Which `±1` lattice path replaces a curve that is not already one.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Staircase {
    /// Least lattice path with values `>= f` (drawn on or below the curve).
    Majorant,
    /// Greatest lattice path with values `<= f` (drawn on or above the curve).
    Minorant,
}

/// Lattice path for a curve in `B_k`, `k = i/n`, following `side`.
pub fn staircase_heights<T: Scalar>(b: &BFunc<T>, n: usize, side: Staircase) -> Result<(usize, Vec<usize>), ContError> {
    let scale = from_usize::<T>(n);
    let ks = b.k().clone() * scale.clone();
    let i = ks
        .floor_i64()
        .filter(|&i| T::int(i) == ks && i > 0 && (i as usize) < n)
        .ok_or(ContError::NotGridAligned(n))? as usize;
    let mut rounded = Vec::with_capacity(n + 1);
    for j in 0..=n {
        let v = b.func().value_at(&(from_usize::<T>(j) / scale.clone())) * scale.clone();
        let fl = v.floor_i64().ok_or(ContError::NotGridAligned(n))?;
        let exact = T::int(fl) == v;
        let parity = ((i + j) % 2) as i64;
        let r = match side {
            Staircase::Majorant => {
                let mut c = if exact { fl } else { fl + 1 };
                if c.rem_euclid(2) != parity {
                    c += 1;
                }
                c
            }
            Staircase::Minorant => {
                let mut c = fl;
                if c.rem_euclid(2) != parity {
                    c -= 1;
                }
                c
            }
        };
        rounded.push(r);
    }
    let heights: Vec<i64> = (0..=n)
        .map(|j| {
            let dist = |t: usize| j.abs_diff(t) as i64;
            match side {
                Staircase::Majorant => (0..=n).map(|t| rounded[t] - dist(t)).max().unwrap(),
                Staircase::Minorant => (0..=n).map(|t| rounded[t] + dist(t)).min().unwrap(),
            }
        })
        .collect();
    if heights.iter().any(|&h| h < 0) {
        return Err(ContError::NotGridAligned(n));
    }
    Ok((i, heights.into_iter().map(|h| h as usize).collect()))
}

/// [`discretize`] after replacing the curve by a lattice staircase.
pub fn discretize_refined<T: Scalar>(d: &DecorousSub<T>, n: usize, side: Staircase) -> Result<CurveModule, ContError> {
    let (i, heights) = staircase_heights(&d.b, n, side)?;
    Ok(CurveModule::sub(DiamondCurve::new(n, i, heights)?))
}

/// Discretize the whole ideal `I_μ` at size `n` through
/// [`GridPermuton::approximating_perm`]; the summands are those of `I_σ`.
pub fn discretize_ideal<T: Scalar>(ideal: &PermutonIdeal<T>, n: usize) -> Result<Vec<CurveModule>, ContError> {
    let sigma = ideal.mu.approximating_perm(n)?;
    Ok(crate::preproj_fin::ideal_of(&sigma)?)
}
