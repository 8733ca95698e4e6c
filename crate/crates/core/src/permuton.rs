//! Piecewise-uniform grid permutons.
//!
//! A [`GridPermuton`] of size `m` assigns a mass to each cell of the `m x m`
//! grid and spreads it uniformly inside the cell. Row `r` is the strip
//! `y ∈ ((r-1)/m, r/m]` (y grows downward), column `c` is `x ∈ ((c-1)/m, c/m]`.
//! Row and column sums are `1/m`, so the marginals are uniform.

use num_integer::Integer;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::plfunc::{parse_scalar, BFunc, PlFunc};
use crate::scalar::{from_usize, Scalar};
use crate::symgroup::Perm;
use crate::Rat;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PermutonError {
    #[error("{0} lies outside the allowed range")]
    Domain(String),
    #[error("invalid permuton: {0}")]
    Invalid(String),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "PermutonWire", into = "PermutonWire", bound = "T: Scalar")]
pub struct GridPermuton<T: Scalar = Rat> {
    m: usize,
    mass: Vec<Vec<T>>,
    // prefix[r][c] = mass of the first r rows and c columns
    prefix: Vec<Vec<T>>,
}

impl<T: Scalar> GridPermuton<T> {
    pub fn new(mass: Vec<Vec<T>>) -> Result<Self, PermutonError> {
        let m = mass.len();
        if m == 0 || mass.iter().any(|row| row.len() != m) {
            return Err(PermutonError::Invalid("mass must be a nonempty square matrix".into()));
        }
        if mass.iter().flatten().any(|v| v.is_negative()) {
            return Err(PermutonError::Invalid("masses must be nonnegative".into()));
        }
        let share = T::one() / from_usize::<T>(m);
        for r in 0..m {
            let sum = mass[r].iter().fold(T::zero(), |acc, v| acc + v.clone());
            if !close(&sum, &share) {
                return Err(PermutonError::Invalid(format!("row {} sums to {sum}, not 1/{m}", r + 1)));
            }
        }
        for c in 0..m {
            let sum = mass.iter().fold(T::zero(), |acc, row| acc + row[c].clone());
            if !close(&sum, &share) {
                return Err(PermutonError::Invalid(format!("column {} sums to {sum}, not 1/{m}", c + 1)));
            }
        }
        Ok(Self::build(mass))
    }

    fn build(mass: Vec<Vec<T>>) -> Self {
        let m = mass.len();
        let mut prefix = vec![vec![T::zero(); m + 1]; m + 1];
        for r in 0..m {
            for c in 0..m {
                prefix[r + 1][c + 1] = prefix[r][c + 1].clone() + prefix[r + 1][c].clone() - prefix[r][c].clone()
                    + mass[r][c].clone();
            }
        }
        Self { m, mass, prefix }
    }

    /// `γ_w`: mass `1/n` on the cell in column `i`, row `w(i)`.
    pub fn from_perm(w: &Perm) -> Self {
        let n = w.n();
        let share = T::one() / from_usize::<T>(n);
        let mut mass = vec![vec![T::zero(); n]; n];
        for i in 1..=n {
            mass[w.at(i) - 1][i - 1] = share.clone();
        }
        Self::build(mass)
    }

    pub fn uniform(m: usize) -> Result<Self, PermutonError> {
        if m == 0 {
            return Err(PermutonError::Invalid("size must be positive".into()));
        }
        let cell = T::one() / from_usize::<T>(m * m);
        Ok(Self::build(vec![vec![cell; m]; m]))
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn mass(&self) -> &[Vec<T>] {
        &self.mass
    }

    /// Mass of the cell in row `r`, column `c` (1-indexed).
    pub fn cell(&self, r: usize, c: usize) -> &T {
        &self.mass[r - 1][c - 1]
    }

    /// Split every cell into `factor x factor` equal cells.
    pub fn refine(&self, factor: usize) -> Result<Self, PermutonError> {
        if factor == 0 {
            return Err(PermutonError::Invalid("refinement factor must be positive".into()));
        }
        let m = self.m * factor;
        let split = from_usize::<T>(factor * factor);
        let mass = (0..m)
            .map(|r| (0..m).map(|c| self.mass[r / factor][c / factor].clone() / split.clone()).collect())
            .collect();
        Ok(Self::build(mass))
    }

    /// Same measure, possibly on different grids.
    pub fn same_measure(&self, other: &Self) -> bool {
        let l = self.m.lcm(&other.m);
        let (a, b) = (self.refine(l / self.m).unwrap(), other.refine(l / other.m).unwrap());
        a.mass == b.mass
    }

    pub fn cdf(&self, a: &T, b: &T) -> Result<T, PermutonError> {
        for v in [a, b] {
            if *v < T::zero() || *v > T::one() {
                return Err(PermutonError::Domain(v.to_string()));
            }
        }
        Ok(self.cdf_unchecked(a, b))
    }

    /// `μ([0, a] x [0, b])`; bilinear inside each cell.
    pub(crate) fn cdf_unchecked(&self, a: &T, b: &T) -> T {
        let (ca, fa) = self.split(a);
        let (rb, fb) = self.split(b);
        let p = &self.prefix;
        let mut total = p[rb][ca].clone();
        if fa.is_zero() && fb.is_zero() {
            return total;
        }
        if !fa.is_zero() {
            total = total + fa.clone() * (p[rb][ca + 1].clone() - p[rb][ca].clone());
        }
        if !fb.is_zero() {
            total = total + fb.clone() * (p[rb + 1][ca].clone() - p[rb][ca].clone());
        }
        if !fa.is_zero() && !fb.is_zero() {
            let cell = p[rb + 1][ca + 1].clone() - p[rb + 1][ca].clone() - p[rb][ca + 1].clone() + p[rb][ca].clone();
            total = total + fa * fb * cell;
        }
        total
    }

    /// Number of whole cells left of `v` and the fraction of the next one.
    fn split(&self, v: &T) -> (usize, T) {
        let scaled = v.clone() * from_usize::<T>(self.m);
        let whole = scaled.floor_i64().unwrap_or(0).clamp(0, self.m as i64) as usize;
        if whole == self.m {
            (self.m, T::zero())
        } else {
            (whole, scaled - from_usize::<T>(whole))
        }
    }

    /// A permutation of size `n` (a multiple of `m`) whose grid permuton puts
    /// on each cell of this grid the mass of `μ`, rounded to a multiple of
    /// `1/n` when it is not one already.
    pub fn approximating_perm(&self, n: usize) -> Result<Perm, PermutonError> {
        let m = self.m;
        if n == 0 || !n.is_multiple_of(m) {
            return Err(PermutonError::Domain(format!("n = {n} is not a multiple of {m}")));
        }
        let s = n / m;
        let count = self.block_counts(n)?;
        // fine rows of coarse row r are handed out to coarse columns left to right
        let mut rows_for: Vec<Vec<Vec<usize>>> = vec![vec![Vec::new(); m]; m];
        for r in 0..m {
            let mut next = r * s + 1;
            for c in 0..m {
                for _ in 0..count[r][c] {
                    rows_for[c][r].push(next);
                    next += 1;
                }
            }
        }
        let mut one_line = Vec::with_capacity(n);
        for column in rows_for {
            let values: Vec<usize> = column.into_iter().flatten().collect();
            if values.len() != s {
                return Err(PermutonError::Domain(format!("no permutation of size {n} fits this mass")));
            }
            one_line.extend(values);
        }
        Perm::new(one_line).map_err(|e| PermutonError::Invalid(e.to_string()))
    }

    /// Number of fine points per coarse cell: `n · mass` rounded up or down
    /// so that every row and column still holds `n / m` points.
    ///
    /// Starts from the floors and places the missing units by bipartite
    /// matching on the cells with fractional targets; a fractional solution
    /// (the exact targets) exists, so an integral one does too. Each unit
    /// first tries the column that keeps the CDF error of its row prefix
    /// smallest.
    fn block_counts(&self, n: usize) -> Result<Vec<Vec<usize>>, PermutonError> {
        let m = self.m;
        let s = n / m;
        let scale = from_usize::<T>(n);
        let target: Vec<Vec<T>> =
            self.mass.iter().map(|row| row.iter().map(|v| v.clone() * scale.clone()).collect()).collect();
        let mut count = vec![vec![0usize; m]; m];
        let mut frac = vec![vec![false; m]; m];
        for r in 0..m {
            for c in 0..m {
                let f = target[r][c].floor_i64().unwrap_or(0).max(0);
                count[r][c] = f as usize;
                frac[r][c] = target[r][c] != from_usize::<T>(f as usize);
            }
        }
        let short = |v: usize| s.checked_sub(v).ok_or_else(|| PermutonError::Invalid("cell mass too large".into()));
        let row_need: Vec<usize> = (0..m).map(|r| short(count[r].iter().sum())).collect::<Result<_, _>>()?;
        let col_need: Vec<usize> =
            (0..m).map(|c| short((0..m).map(|r| count[r][c]).sum())).collect::<Result<_, _>>()?;
        let mut bumped = vec![vec![false; m]; m];
        let mut load = vec![0usize; m];

        fn augment(
            r: usize,
            order: &[usize],
            frac: &[Vec<bool>],
            bumped: &mut [Vec<bool>],
            load: &mut [usize],
            col_need: &[usize],
            visited: &mut [bool],
        ) -> bool {
            for &c in order {
                if !frac[r][c] || bumped[r][c] || visited[c] {
                    continue;
                }
                visited[c] = true;
                if load[c] < col_need[c] {
                    bumped[r][c] = true;
                    load[c] += 1;
                    return true;
                }
                let holders: Vec<usize> = (0..frac.len()).filter(|&r2| bumped[r2][c] && r2 != r).collect();
                let all: Vec<usize> = (0..frac.len()).collect();
                for r2 in holders {
                    if augment(r2, &all, frac, bumped, load, col_need, visited) {
                        bumped[r2][c] = false;
                        bumped[r][c] = true;
                        return true;
                    }
                }
            }
            false
        }

        for r in 0..m {
            for _ in 0..row_need[r] {
                // prefix error over rows 0..=r if the next unit went to column c
                let score = |c: usize| -> T {
                    let mut worst = T::zero();
                    let mut placed = T::zero();
                    for c2 in 0..m {
                        for r2 in 0..=r {
                            let extra = usize::from(bumped[r2][c2]) + usize::from(r2 == r && c2 == c);
                            placed = placed + from_usize::<T>(count[r2][c2] + extra);
                        }
                        let err = (placed.clone() - self.prefix[r + 1][c2 + 1].clone() * scale.clone()).abs();
                        if err > worst {
                            worst = err;
                        }
                    }
                    worst
                };
                let mut order: Vec<(T, usize)> = (0..m).map(|c| (score(c), c)).collect();
                order.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
                let order: Vec<usize> = order.into_iter().map(|(_, c)| c).collect();
                let mut visited = vec![false; m];
                if !augment(r, &order, &frac, &mut bumped, &mut load, &col_need, &mut visited) {
                    return Err(PermutonError::Invalid(format!("no permutation of size {n} fits this mass")));
                }
            }
        }
        for r in 0..m {
            for c in 0..m {
                count[r][c] += usize::from(bumped[r][c]);
            }
        }
        Ok(count)
    }

    /// `f_{μ,y}(x) = -2 μ([0,x] x [0,y]) + y + x`, a member of `B_y`.
    pub fn boundary_function(&self, y: &T) -> Result<BFunc<T>, PermutonError> {
        if *y <= T::zero() || *y >= T::one() {
            return Err(PermutonError::Domain(y.to_string()));
        }
        let m = from_usize::<T>(self.m);
        let two = T::int(2);
        let values: Vec<T> = (0..=self.m)
            .map(|c| {
                let x = from_usize::<T>(c) / m.clone();
                y.clone() + x.clone() - two.clone() * self.cdf_unchecked(&x, y)
            })
            .collect();
        let f = PlFunc::from_grid(&values).expect("grid has at least two points");
        BFunc::new(y.clone(), f).map_err(|e| PermutonError::Invalid(format!("boundary function check failed: {e}")))
    }
}

fn close<T: Scalar>(a: &T, b: &T) -> bool {
    if T::is_exact() {
        a == b
    } else {
        (a.clone() - b.clone()).abs().to_f64().is_some_and(|d| d < 1e-9)
    }
}

/// `μ ≤ ν` in the Bruhat order on permutons: `μ`'s CDF dominates `ν`'s.
///
/// Checked at the interior corners of the common grid; the difference of
/// CDFs is bilinear on each common cell, so its minimum over a cell is
/// attained at a corner, and it vanishes on the boundary of the square.
pub fn permuton_bruhat_leq<T: Scalar>(mu: &GridPermuton<T>, nu: &GridPermuton<T>) -> bool {
    let l = mu.m.lcm(&nu.m);
    let denom = from_usize::<T>(l);
    (1..l).all(|p| {
        let a = from_usize::<T>(p) / denom.clone();
        (1..l).all(|q| {
            let b = from_usize::<T>(q) / denom.clone();
            mu.cdf_unchecked(&a, &b) >= nu.cdf_unchecked(&a, &b)
        })
    })
}

#[derive(Serialize, Deserialize)]
struct PermutonWire {
    m: usize,
    mass: Vec<Vec<String>>,
}

impl<T: Scalar> From<GridPermuton<T>> for PermutonWire {
    fn from(p: GridPermuton<T>) -> Self {
        Self {
            m: p.m,
            mass: p.mass.iter().map(|row| row.iter().map(ToString::to_string).collect()).collect(),
        }
    }
}

impl<T: Scalar> TryFrom<PermutonWire> for GridPermuton<T> {
    type Error = String;

    fn try_from(w: PermutonWire) -> Result<Self, String> {
        let mass = w
            .mass
            .iter()
            .map(|row| row.iter().map(|s| parse_scalar(s)).collect::<Result<Vec<T>, _>>())
            .collect::<Result<Vec<_>, _>>()?;
        if mass.len() != w.m {
            return Err(format!("m = {} but the matrix has {} rows", w.m, mass.len()));
        }
        GridPermuton::new(mass).map_err(|e| e.to_string())
    }
}
