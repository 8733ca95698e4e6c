//! Piecewise-linear functions on `[0, 1]` and the boundary classes `B_k`.
//!
//! A [`PlFunc`] is stored as its normalized breakpoint list: the first
//! breakpoint sits at `x = 0`, the last at `x = 1`, abscissae strictly
//! increase, and no breakpoint is collinear with its neighbours. Two
//! functions are therefore equal exactly when their breakpoint lists are.
//!
//! A [`BFunc`] is a 1-Lipschitz function with `f(0) = k` and `f(1) = 1 - k`.
//! Such functions are exactly the curves that fit inside the diamond of the
//! projective at `k`, between [`BFunc::top`] and [`BFunc::bottom`].

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::scalar::{max_of, min_of, Scalar};
use crate::Rat;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PlError {
    #[error("{0} lies outside [0, 1]")]
    Domain(String),
    #[error("invalid breakpoints: {0}")]
    BadBreakpoints(String),
    #[error("function is not 1-Lipschitz")]
    NotLipschitz,
    #[error("f(1) = f(0) \u{b1} 1; the function does not determine a decorous submodule")]
    DegenerateEndpoints,
    #[error("not a boundary function: {0}")]
    NotInClass(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum MonotoneClass {
    WeaklyIncreasing,
    WeaklyDecreasing,
    Constant,
    Neither,
}

/// Exact piecewise-linear function on `[0, 1]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "PlFuncWire", into = "PlFuncWire", bound = "T: Scalar")]
pub struct PlFunc<T: Scalar = Rat> {
    pts: Vec<(T, T)>,
}

impl<T: Scalar> PlFunc<T> {
    pub fn new(points: Vec<(T, T)>) -> Result<Self, PlError> {
        if points.len() < 2 {
            return Err(PlError::BadBreakpoints("need at least two breakpoints".into()));
        }
        if !points[0].0.is_zero() || !points[points.len() - 1].0.is_one() {
            return Err(PlError::BadBreakpoints("first x must be 0 and last x must be 1".into()));
        }
        if points.windows(2).any(|w| w[0].0 >= w[1].0) {
            return Err(PlError::BadBreakpoints("x-coordinates must strictly increase".into()));
        }
        Ok(Self::normalized(points))
    }

    /// Linear interpolation of `values[j]` at `x = j / (values.len() - 1)`.
    pub fn from_grid(values: &[T]) -> Result<Self, PlError> {
        if values.len() < 2 {
            return Err(PlError::BadBreakpoints("a grid needs at least two values".into()));
        }
        let n = values.len() as i64 - 1;
        let pts = values
            .iter()
            .enumerate()
            .map(|(j, v)| (T::ratio(j as i64, n), v.clone()))
            .collect();
        Ok(Self::normalized(pts))
    }

    pub fn constant(c: T) -> Self {
        Self { pts: vec![(T::zero(), c.clone()), (T::one(), c)] }
    }

    /// The affine function through `(0, at0)` and `(1, at1)`.
    pub fn line(at0: T, at1: T) -> Self {
        Self::normalized(vec![(T::zero(), at0), (T::one(), at1)])
    }

    fn normalized(points: Vec<(T, T)>) -> Self {
        let mut out: Vec<(T, T)> = Vec::with_capacity(points.len());
        for p in points {
            if out.last().is_some_and(|q| q.0 == p.0) {
                continue;
            }
            while out.len() >= 2 {
                let (a, b) = (&out[out.len() - 2], &out[out.len() - 1]);
                let lhs = (b.1.clone() - a.1.clone()) * (p.0.clone() - b.0.clone());
                let rhs = (p.1.clone() - b.1.clone()) * (b.0.clone() - a.0.clone());
                if lhs == rhs {
                    out.pop();
                } else {
                    break;
                }
            }
            out.push(p);
        }
        Self { pts: out }
    }

    pub fn breakpoints(&self) -> &[(T, T)] {
        &self.pts
    }

    pub fn xs(&self) -> impl Iterator<Item = &T> + '_ {
        self.pts.iter().map(|p| &p.0)
    }

    pub fn eval(&self, x: &T) -> Result<T, PlError> {
        if *x < T::zero() || *x > T::one() {
            return Err(PlError::Domain(x.to_string()));
        }
        Ok(self.value_at(x))
    }

    /// Evaluation without the domain check; callers guarantee `0 <= x <= 1`.
    pub(crate) fn value_at(&self, x: &T) -> T {
        let idx = self.pts.partition_point(|p| p.0 < *x);
        if idx < self.pts.len() && self.pts[idx].0 == *x {
            return self.pts[idx].1.clone();
        }
        let idx = idx.clamp(1, self.pts.len() - 1);
        let (x0, y0) = &self.pts[idx - 1];
        let (x1, y1) = &self.pts[idx];
        y0.clone() + (y1.clone() - y0.clone()) * (x.clone() - x0.clone()) / (x1.clone() - x0.clone())
    }

    pub fn at0(&self) -> &T {
        &self.pts[0].1
    }

    pub fn at1(&self) -> &T {
        &self.pts[self.pts.len() - 1].1
    }

    /// Slope of each segment, left to right.
    pub fn slopes(&self) -> Vec<T> {
        self.pts
            .windows(2)
            .map(|w| (w[1].1.clone() - w[0].1.clone()) / (w[1].0.clone() - w[0].0.clone()))
            .collect()
    }

    pub fn is_lipschitz1(&self) -> bool {
        self.slopes().iter().all(|s| s.abs() <= T::one())
    }

    /// Slope immediately left of `x`; `None` at `x = 0`.
    pub fn left_slope_at(&self, x: &T) -> Option<T> {
        if *x <= T::zero() || *x > T::one() {
            return None;
        }
        let idx = self.pts.partition_point(|p| p.0 < *x);
        Some(self.slopes()[idx - 1].clone())
    }

    /// Slope immediately right of `x`; `None` at `x = 1`.
    pub fn right_slope_at(&self, x: &T) -> Option<T> {
        if *x < T::zero() || *x >= T::one() {
            return None;
        }
        let idx = self.pts.partition_point(|p| p.0 <= *x);
        Some(self.slopes()[idx - 1].clone())
    }

    pub fn vshift(&self, a: &T) -> Self {
        Self {
            pts: self.pts.iter().map(|(x, y)| (x.clone(), y.clone() + a.clone())).collect(),
        }
    }

    /// The unique `a` with `self = g + a`, if there is one.
    pub fn equivalent_mod_shift(&self, g: &Self) -> Option<T> {
        let a = self.at0().clone() - g.at0().clone();
        (g.vshift(&a) == *self).then_some(a)
    }

    fn union_xs(&self, g: &Self) -> Vec<T> {
        let mut xs: Vec<T> = Vec::with_capacity(self.pts.len() + g.pts.len());
        let (mut i, mut j) = (0, 0);
        while i < self.pts.len() || j < g.pts.len() {
            let next = match (self.pts.get(i), g.pts.get(j)) {
                (Some(a), Some(b)) if a.0 < b.0 => {
                    i += 1;
                    a.0.clone()
                }
                (Some(a), Some(b)) if b.0 < a.0 => {
                    j += 1;
                    b.0.clone()
                }
                (Some(a), Some(_)) => {
                    i += 1;
                    j += 1;
                    a.0.clone()
                }
                (Some(a), None) => {
                    i += 1;
                    a.0.clone()
                }
                (None, Some(b)) => {
                    j += 1;
                    b.0.clone()
                }
                (None, None) => unreachable!(),
            };
            xs.push(next);
        }
        xs
    }

    fn combine(&self, g: &Self, op: impl Fn(T, T) -> T) -> Self {
        let pts = self
            .union_xs(g)
            .into_iter()
            .map(|x| {
                let v = op(self.value_at(&x), g.value_at(&x));
                (x, v)
            })
            .collect();
        Self::normalized(pts)
    }

    pub fn add(&self, g: &Self) -> Self {
        self.combine(g, |a, b| a + b)
    }

    pub fn sub(&self, g: &Self) -> Self {
        self.combine(g, |a, b| a - b)
    }

    /// `x ↦ f(1 - x)`.
    pub fn reflect(&self) -> Self {
        Self {
            pts: self.pts.iter().rev().map(|(x, y)| (T::one() - x.clone(), y.clone())).collect(),
        }
    }

    pub fn neg(&self) -> Self {
        Self { pts: self.pts.iter().map(|(x, y)| (x.clone(), -y.clone())).collect() }
    }

    /// Union breakpoints plus every strict crossing of `self` and `g`.
    fn crossing_xs(&self, g: &Self) -> Vec<T> {
        let xs = self.union_xs(g);
        let mut out = Vec::with_capacity(xs.len() * 2);
        for w in xs.windows(2) {
            out.push(w[0].clone());
            let d0 = self.value_at(&w[0]) - g.value_at(&w[0]);
            let d1 = self.value_at(&w[1]) - g.value_at(&w[1]);
            if (d0.is_positive() && d1.is_negative()) || (d0.is_negative() && d1.is_positive()) {
                let t = d0.clone() / (d0 - d1);
                out.push(w[0].clone() + (w[1].clone() - w[0].clone()) * t);
            }
        }
        out.push(T::one());
        out
    }

    pub fn pointwise_min(&self, g: &Self) -> Self {
        let pts = self
            .crossing_xs(g)
            .into_iter()
            .map(|x| {
                let v = min_of(self.value_at(&x), g.value_at(&x));
                (x, v)
            })
            .collect();
        Self::normalized(pts)
    }

    pub fn pointwise_max(&self, g: &Self) -> Self {
        let pts = self
            .crossing_xs(g)
            .into_iter()
            .map(|x| {
                let v = max_of(self.value_at(&x), g.value_at(&x));
                (x, v)
            })
            .collect();
        Self::normalized(pts)
    }

    /// `self(x) <= g(x)` for every `x` in `[0, 1]`.
    pub fn pointwise_leq(&self, g: &Self) -> bool {
        self.union_xs(g).iter().all(|x| self.value_at(x) <= g.value_at(x))
    }

    pub fn monotone_class(&self) -> MonotoneClass {
        let slopes = self.slopes();
        let inc = slopes.iter().all(|s| !s.is_negative());
        let dec = slopes.iter().all(|s| !s.is_positive());
        match (inc, dec) {
            (true, true) => MonotoneClass::Constant,
            (true, false) => MonotoneClass::WeaklyIncreasing,
            (false, true) => MonotoneClass::WeaklyDecreasing,
            (false, false) => MonotoneClass::Neither,
        }
    }

    /// Maximal open intervals `(lo, hi)` of `[0, 1]` on which the function is
    /// strictly positive. Endpoints are exact roots or the ends of `[0, 1]`.
    pub fn positive_intervals(&self) -> Vec<(T, T)> {
        let mut out: Vec<(T, T)> = Vec::new();
        for w in self.pts.windows(2) {
            let ((x0, y0), (x1, y1)) = (&w[0], &w[1]);
            let root = || x0.clone() + (x1.clone() - x0.clone()) * y0.clone() / (y0.clone() - y1.clone());
            let piece = match (y0.is_positive(), y1.is_positive()) {
                (true, true) => Some((x0.clone(), x1.clone())),
                (true, false) => Some((x0.clone(), root())),
                (false, true) => Some((if y0.is_zero() { x0.clone() } else { root() }, x1.clone())),
                (false, false) => None,
            };
            let Some((lo, hi)) = piece else { continue };
            match out.last_mut() {
                Some(last) if last.1 == lo && y0.is_positive() => last.1 = hi,
                _ => out.push((lo, hi)),
            }
        }
        out
    }

    /// Whether the function is `>= 0` on the closed interval `[lo, hi]`.
    pub fn nonnegative_on(&self, lo: &T, hi: &T) -> bool {
        self.values_on(lo, hi).iter().all(|(_, v)| !v.is_negative())
    }

    /// `(x, f(x))` at `lo`, every breakpoint strictly inside, and `hi`.
    pub fn values_on(&self, lo: &T, hi: &T) -> Vec<(T, T)> {
        let mut out = vec![(lo.clone(), self.value_at(lo))];
        out.extend(self.pts.iter().filter(|p| p.0 > *lo && p.0 < *hi).cloned());
        if hi > lo {
            out.push((hi.clone(), self.value_at(hi)));
        }
        out
    }

    pub fn map_scalar<S: Scalar>(&self, f: impl Fn(&T) -> S) -> PlFunc<S> {
        PlFunc::normalized(self.pts.iter().map(|(x, y)| (f(x), f(y))).collect())
    }
}

/// A 1-Lipschitz function with `f(0) = k`, `f(1) = 1 - k`, `0 < k < 1`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "BFuncWire", into = "BFuncWire", bound = "T: Scalar")]
pub struct BFunc<T: Scalar = Rat> {
    k: T,
    f: PlFunc<T>,
}

impl<T: Scalar> BFunc<T> {
    pub fn new(k: T, f: PlFunc<T>) -> Result<Self, PlError> {
        if k <= T::zero() || k >= T::one() {
            return Err(PlError::NotInClass(format!("apex k = {k} must lie in (0, 1)")));
        }
        if !f.is_lipschitz1() {
            return Err(PlError::NotLipschitz);
        }
        if *f.at0() != k || *f.at1() != T::one() - k.clone() {
            return Err(PlError::NotInClass(format!(
                "endpoints ({}, {}) do not match k = {k}",
                f.at0(),
                f.at1()
            )));
        }
        Ok(Self { k, f })
    }

    /// `|x - k|`: the top border of the diamond, i.e. the whole projective.
    pub fn top(k: T) -> Result<Self, PlError> {
        let f = PlFunc::new(vec![
            (T::zero(), k.clone()),
            (k.clone(), T::zero()),
            (T::one(), T::one() - k.clone()),
        ])
        .map_err(|_| PlError::NotInClass(format!("apex k = {k} must lie in (0, 1)")))?;
        Self::new(k, f)
    }

    /// `1 - |1 - k - x|`: the bottom border, i.e. the zero submodule.
    pub fn bottom(k: T) -> Result<Self, PlError> {
        let one = T::one();
        let f = PlFunc::new(vec![
            (T::zero(), k.clone()),
            (one.clone() - k.clone(), one.clone()),
            (one.clone(), one - k.clone()),
        ])
        .map_err(|_| PlError::NotInClass(format!("apex k = {k} must lie in (0, 1)")))?;
        Self::new(k, f)
    }

    pub fn k(&self) -> &T {
        &self.k
    }

    pub fn func(&self) -> &PlFunc<T> {
        &self.f
    }

    pub fn into_func(self) -> PlFunc<T> {
        self.f
    }

    pub fn top_value(&self, x: &T) -> T {
        (x.clone() - self.k.clone()).abs()
    }

    pub fn bottom_value(&self, x: &T) -> T {
        T::one() - (T::one() - self.k.clone() - x.clone()).abs()
    }

    pub fn is_top(&self) -> bool {
        Self::top(self.k.clone()).is_ok_and(|t| t == *self)
    }

    pub fn is_bottom(&self) -> bool {
        Self::bottom(self.k.clone()).is_ok_and(|b| b == *self)
    }
}

/// Canonical `B_k` representative of a 1-Lipschitz function modulo vertical
/// shifts: `k = (1 + f(0) - f(1)) / 2` and `f' = f - f(0) + k`.
pub fn to_bfunc<T: Scalar>(f: &PlFunc<T>) -> Result<BFunc<T>, PlError> {
    if !f.is_lipschitz1() {
        return Err(PlError::NotLipschitz);
    }
    let gap = f.at1().clone() - f.at0().clone();
    if gap.abs().is_one() {
        return Err(PlError::DegenerateEndpoints);
    }
    let k = (T::one() - gap) * T::half();
    let shifted = f.vshift(&(k.clone() - f.at0().clone()));
    BFunc::new(k, shifted)
}

#[derive(Serialize, Deserialize)]
struct PlFuncWire {
    breakpoints: Vec<(String, String)>,
}

impl<T: Scalar> From<PlFunc<T>> for PlFuncWire {
    fn from(f: PlFunc<T>) -> Self {
        Self {
            breakpoints: f.pts.iter().map(|(x, y)| (x.to_string(), y.to_string())).collect(),
        }
    }
}

pub(crate) fn parse_scalar<T: Scalar>(s: &str) -> Result<T, String> {
    T::parse_text(s).ok_or_else(|| format!("cannot parse {s:?} as a rational"))
}

impl<T: Scalar> TryFrom<PlFuncWire> for PlFunc<T> {
    type Error = String;

    fn try_from(w: PlFuncWire) -> Result<Self, String> {
        let pts = w
            .breakpoints
            .iter()
            .map(|(x, y)| Ok((parse_scalar(x)?, parse_scalar(y)?)))
            .collect::<Result<Vec<_>, String>>()?;
        PlFunc::new(pts).map_err(|e| e.to_string())
    }
}

#[derive(Serialize, Deserialize)]
struct BFuncWire {
    k: String,
    f: PlFuncWire,
}

impl<T: Scalar> From<BFunc<T>> for BFuncWire {
    fn from(b: BFunc<T>) -> Self {
        Self { k: b.k.to_string(), f: b.f.into() }
    }
}

impl<T: Scalar> TryFrom<BFuncWire> for BFunc<T> {
    type Error = String;

    fn try_from(w: BFuncWire) -> Result<Self, String> {
        let k = parse_scalar(&w.k)?;
        let f = PlFunc::try_from(w.f)?;
        BFunc::new(k, f).map_err(|e| e.to_string())
    }
}
