//! The preprojective algebra of type `A_{n-1}`.
//!
//! The indecomposable projective `P_i` is drawn as a diamond of composition
//! factors `(j, d)`: vertex `j` in column `x = j/n`, at depth `y = d/n`
//! (increasing downward). A submodule or quotient of `P_i` cut out by a
//! lattice path with slopes `±1` is a [`CurveModule`]; heights of the path are
//! stored as integers in units of `1/n`, on the lattice of parity opposite to
//! the factors so membership is never ambiguous.
//!
//! Arbitrary finite-dimensional modules are given as a [`QuiverRep`]; the Hom
//! solver [`hom_dim`] works on those.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::{row_reduce_rank, Matrix};
use crate::plfunc::PlFunc;
use crate::scalar::Scalar;
use crate::symgroup::{self, Perm, SymError, Word};
use crate::Rat;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FinError {
    #[error("index {index} is out of range for n = {n}")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("invalid curve: {0}")]
    InvalidCurve(String),
    #[error("S_{0} is not in the top of the module")]
    NoTopSimple(usize),
    #[error("word {0} is not reduced")]
    NotReduced(String),
    #[error("expected a submodule of a projective")]
    WrongKind,
    #[error("representations live over different quivers (n = {0} vs {1})")]
    SizeMismatch(usize, usize),
    #[error("invalid representation: {0}")]
    InvalidRep(String),
    #[error("n = {n} exceeds the solver limit {max} (set PREPROJ_MAX_N to raise it)")]
    TooLarge { n: usize, max: usize },
    #[error(transparent)]
    Sym(#[from] SymError),
}

fn check_vertex(i: usize, n: usize) -> Result<(), FinError> {
    if i == 0 || i >= n {
        Err(FinError::IndexOutOfRange { index: i, n })
    } else {
        Ok(())
    }
}

/// Lengths of the pathlike morphisms `P_i -> P_j` (equivalently the paths
/// from `j` to `i`), `{|i-j| + 2t : 0 <= t < min(i, j, n-i, n-j)}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomLengths {
    pub i: usize,
    pub j: usize,
    pub n: usize,
    pub lengths: Vec<usize>,
}

pub fn hom_lengths(i: usize, j: usize, n: usize) -> Result<HomLengths, FinError> {
    check_vertex(i, n)?;
    check_vertex(j, n)?;
    let count = i.min(j).min(n - i).min(n - j);
    let lengths = (0..count).map(|t| i.abs_diff(j) + 2 * t).collect();
    Ok(HomLengths { i, j, n, lengths })
}

/// Depth range `(lo, hi)` of column `j` in `P_i`, or `None` if empty.
fn column_range(i: usize, n: usize, j: usize) -> Option<(usize, usize)> {
    if j == 0 || j >= n {
        return None;
    }
    let lo = j.abs_diff(i) + 1;
    let hi = (n - 1).checked_sub(j.abs_diff(n - i))?;
    (lo <= hi).then_some((lo, hi))
}

/// Whether `(j, d)` is a composition factor of `P_i`.
pub fn is_factor(i: usize, n: usize, j: usize, d: usize) -> bool {
    column_range(i, n, j).is_some_and(|(lo, hi)| lo <= d && d <= hi && (d + i + j) % 2 == 1)
}

/// All composition factors of `P_i`, by column then depth.
pub fn factor_positions(i: usize, n: usize) -> Vec<(usize, usize)> {
    (1..n)
        .filter_map(|j| column_range(i, n, j).map(|(lo, hi)| (j, lo, hi)))
        .flat_map(|(j, lo, hi)| (lo..=hi).step_by(2).map(move |d| (j, d)))
        .collect()
}

/// A `±1` lattice path from `(0, i)` to `(n, n - i)` inside the diamond of
/// `P_i`. `heights()[j]` is `n · c(j/n)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DiamondCurve {
    n: usize,
    i: usize,
    h: Vec<usize>,
}

impl DiamondCurve {
    pub fn new(n: usize, i: usize, heights: Vec<usize>) -> Result<Self, FinError> {
        check_vertex(i, n)?;
        if heights.len() != n + 1 {
            return Err(FinError::InvalidCurve(format!("expected {} values, got {}", n + 1, heights.len())));
        }
        if heights[0] != i || heights[n] != n - i {
            return Err(FinError::InvalidCurve("endpoints must be i/n and (n-i)/n".into()));
        }
        if heights.windows(2).any(|w| w[0].abs_diff(w[1]) != 1) {
            return Err(FinError::InvalidCurve("every step must have slope ±1".into()));
        }
        for (j, &v) in heights.iter().enumerate() {
            if v < top_height(i, j) || v > bottom_height(n, i, j) {
                return Err(FinError::InvalidCurve(format!("value at column {j} leaves the diamond")));
            }
        }
        Ok(Self { n, i, h: heights })
    }

    /// From rational values `c(j/n)`.
    pub fn from_values<T: Scalar>(n: usize, i: usize, values: &[T]) -> Result<Self, FinError> {
        let heights = values
            .iter()
            .map(|v| {
                let scaled = v.clone() * T::int(n as i64);
                let int = scaled.to_i64().filter(|&k| T::int(k) == scaled && k >= 0);
                int.map(|k| k as usize)
                    .ok_or_else(|| FinError::InvalidCurve(format!("{v} is not a nonnegative multiple of 1/{n}")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(n, i, heights)
    }

    pub fn top(n: usize, i: usize) -> Result<Self, FinError> {
        check_vertex(i, n)?;
        Ok(Self { n, i, h: (0..=n).map(|j| top_height(i, j)).collect() })
    }

    pub fn bottom(n: usize, i: usize) -> Result<Self, FinError> {
        check_vertex(i, n)?;
        Ok(Self { n, i, h: (0..=n).map(|j| bottom_height(n, i, j)).collect() })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn i(&self) -> usize {
        self.i
    }

    pub fn heights(&self) -> &[usize] {
        &self.h
    }

    pub fn values<T: Scalar>(&self) -> Vec<T> {
        self.h.iter().map(|&v| T::ratio(v as i64, self.n as i64)).collect()
    }

    pub fn to_plfunc<T: Scalar>(&self) -> PlFunc<T> {
        PlFunc::from_grid(&self.values()).expect("a curve has at least two values")
    }

    pub fn is_top(&self) -> bool {
        (0..=self.n).all(|j| self.h[j] == top_height(self.i, j))
    }

    pub fn is_bottom(&self) -> bool {
        (0..=self.n).all(|j| self.h[j] == bottom_height(self.n, self.i, j))
    }

    /// Pointwise `self <= other` (same `n` and `i` assumed).
    pub fn leq(&self, other: &Self) -> bool {
        self.h.iter().zip(&other.h).all(|(a, b)| a <= b)
    }
}

fn top_height(i: usize, j: usize) -> usize {
    j.abs_diff(i)
}

fn bottom_height(n: usize, i: usize, j: usize) -> usize {
    n - (n - i).abs_diff(j)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum CurveKind {
    #[serde(rename = "sub")]
    SubOfProjective,
    #[serde(rename = "quot")]
    QuotientOfProjective,
}

/// A submodule (factors strictly below the curve) or quotient (factors
/// strictly above it) of `P_i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "CurveModuleWire", into = "CurveModuleWire")]
pub struct CurveModule {
    kind: CurveKind,
    curve: DiamondCurve,
}

impl CurveModule {
    pub fn new(kind: CurveKind, curve: DiamondCurve) -> Self {
        Self { kind, curve }
    }

    pub fn sub(curve: DiamondCurve) -> Self {
        Self::new(CurveKind::SubOfProjective, curve)
    }

    pub fn kind(&self) -> CurveKind {
        self.kind
    }

    pub fn curve(&self) -> &DiamondCurve {
        &self.curve
    }

    pub fn n(&self) -> usize {
        self.curve.n
    }

    pub fn i(&self) -> usize {
        self.curve.i
    }

    pub fn contains(&self, j: usize, d: usize) -> bool {
        let (n, i) = (self.n(), self.i());
        if !is_factor(i, n, j, d) {
            return false;
        }
        match self.kind {
            CurveKind::SubOfProjective => d > self.curve.h[j],
            CurveKind::QuotientOfProjective => d < self.curve.h[j],
        }
    }

    pub fn factors(&self) -> BTreeSet<(usize, usize)> {
        factor_positions(self.i(), self.n())
            .into_iter()
            .filter(|&(j, d)| self.contains(j, d))
            .collect()
    }

    pub fn dims(&self) -> Vec<usize> {
        let mut dims = vec![0; self.n() - 1];
        for (j, _) in self.factors() {
            dims[j - 1] += 1;
        }
        dims
    }

    pub fn is_zero(&self) -> bool {
        self.factors().is_empty()
    }

    /// Vertices `j` whose simple `S_j` sits in the top of this submodule:
    /// the factor just below the curve at `j` exists and the curve peaks there.
    pub fn top_removable(&self) -> BTreeSet<usize> {
        if self.kind != CurveKind::SubOfProjective {
            return BTreeSet::new();
        }
        let h = &self.curve.h;
        (1..self.n())
            .filter(|&j| {
                is_factor(self.i(), self.n(), j, h[j] + 1) && h[j - 1] == h[j] + 1 && h[j + 1] == h[j] + 1
            })
            .collect()
    }

    /// Remove the copy of `S_j` in the top.
    pub fn strip(&self, j: usize) -> Result<Self, FinError> {
        if !self.top_removable().contains(&j) {
            return Err(FinError::NoTopSimple(j));
        }
        let mut out = self.clone();
        out.curve.h[j] += 2;
        Ok(out)
    }

    pub fn to_rep<T: Scalar>(&self) -> QuiverRep<T> {
        thin_rep(self.n(), &self.factors()).expect("subquotients of projectives satisfy the relations")
    }
}

pub fn projective(i: usize, n: usize) -> Result<CurveModule, FinError> {
    Ok(CurveModule::sub(DiamondCurve::top(n, i)?))
}

pub fn zero_submodule(i: usize, n: usize) -> Result<CurveModule, FinError> {
    Ok(CurveModule::sub(DiamondCurve::bottom(n, i)?))
}

pub fn top_removable(m: &CurveModule) -> BTreeSet<usize> {
    m.top_removable()
}

pub fn strip(m: &CurveModule, j: usize) -> Result<CurveModule, FinError> {
    m.strip(j)
}

/// `I_w = I_{i_1} ... I_{i_r}` for a reduced word, one summand per vertex.
pub fn ideal_via_word(word: &Word, n: usize) -> Result<Vec<CurveModule>, FinError> {
    if !symgroup::is_reduced(word, n)? {
        return Err(FinError::NotReduced(word.to_string()));
    }
    let mut summands = (1..n).map(|i| projective(i, n)).collect::<Result<Vec<_>, _>>()?;
    for &j in word.letters() {
        for m in summands.iter_mut() {
            if m.top_removable().contains(&j) {
                *m = m.strip(j)?;
            }
        }
    }
    Ok(summands)
}

/// `(I_w)^i`, computed from the canonical word of the coset representative.
pub fn ideal_summand(w: &Perm, i: usize) -> Result<CurveModule, FinError> {
    let n = w.n();
    check_vertex(i, n)?;
    let rep = symgroup::min_coset_rep(w, i)?;
    let word = symgroup::canonical_reduced_word_of_rep(&rep, i)?;
    let mut m = projective(i, n)?;
    for &j in word.letters() {
        if m.top_removable().contains(&j) {
            m = m.strip(j)?;
        }
    }
    Ok(m)
}

pub fn ideal_of(w: &Perm) -> Result<Vec<CurveModule>, FinError> {
    (1..w.n()).map(|i| ideal_summand(w, i)).collect()
}

/// `τ M = P_i / M` for a submodule `M` of `P_i`.
pub fn tau_sub(m: &CurveModule) -> Result<CurveModule, FinError> {
    match m.kind {
        CurveKind::SubOfProjective => Ok(CurveModule::new(CurveKind::QuotientOfProjective, m.curve.clone())),
        CurveKind::QuotientOfProjective => Err(FinError::WrongKind),
    }
}

/// A representation of the preprojective quiver of type `A_{n-1}`.
///
/// `alpha[j-1]` is `M(α_j): V_j -> V_{j+1}` and `alpha_star[j-1]` is
/// `M(α*_j): V_{j+1} -> V_j`, for `1 <= j <= n-2`.
#[derive(Clone, Debug, PartialEq)]
pub struct QuiverRep<T: Scalar = Rat> {
    n: usize,
    dims: Vec<usize>,
    alpha: Vec<Matrix<T>>,
    alpha_star: Vec<Matrix<T>>,
}

impl<T: Scalar> QuiverRep<T> {
    pub fn new(
        n: usize,
        dims: Vec<usize>,
        alpha: Vec<Matrix<T>>,
        alpha_star: Vec<Matrix<T>>,
    ) -> Result<Self, FinError> {
        if n < 2 || dims.len() != n - 1 {
            return Err(FinError::InvalidRep(format!("need {} vertex dimensions", n.saturating_sub(1))));
        }
        let arrows = n - 2;
        if alpha.len() != arrows || alpha_star.len() != arrows {
            return Err(FinError::InvalidRep(format!("need {arrows} matrices per arrow family")));
        }
        for j in 0..arrows {
            if (alpha[j].rows(), alpha[j].cols()) != (dims[j + 1], dims[j]) {
                return Err(FinError::InvalidRep(format!("alpha_{} has the wrong shape", j + 1)));
            }
            if (alpha_star[j].rows(), alpha_star[j].cols()) != (dims[j], dims[j + 1]) {
                return Err(FinError::InvalidRep(format!("alpha*_{} has the wrong shape", j + 1)));
            }
        }
        let rep = Self { n, dims, alpha, alpha_star };
        if let Some(j) = rep.relation_failure() {
            return Err(FinError::InvalidRep(format!("preprojective relation fails at vertex {j}")));
        }
        Ok(rep)
    }

    /// The simple module at vertex `j`.
    pub fn simple(n: usize, j: usize) -> Result<Self, FinError> {
        check_vertex(j, n)?;
        let mut dims = vec![0; n - 1];
        dims[j - 1] = 1;
        Self::zero_maps(n, dims)
    }

    pub fn zero(n: usize) -> Result<Self, FinError> {
        Self::zero_maps(n, vec![0; n.saturating_sub(1)])
    }

    fn zero_maps(n: usize, dims: Vec<usize>) -> Result<Self, FinError> {
        let arrows = n.saturating_sub(2);
        let alpha = (0..arrows).map(|j| Matrix::zeros(dims[j + 1], dims[j])).collect();
        let alpha_star = (0..arrows).map(|j| Matrix::zeros(dims[j], dims[j + 1])).collect();
        Self::new(n, dims, alpha, alpha_star)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().sum()
    }

    pub fn alpha(&self, j: usize) -> &Matrix<T> {
        &self.alpha[j - 1]
    }

    pub fn alpha_star(&self, j: usize) -> &Matrix<T> {
        &self.alpha_star[j - 1]
    }

    /// `α*_j α_j` and `α_{j-1} α*_{j-1}` at vertex `j`; `None` when out of range.
    pub fn loops_at(&self, j: usize) -> (Option<Matrix<T>>, Option<Matrix<T>>) {
        let up = (j < self.n - 1).then(|| self.alpha_star(j).mul(self.alpha(j)));
        let down = (j > 1).then(|| self.alpha(j - 1).mul(self.alpha_star(j - 1)));
        (up, down)
    }

    fn relation_failure(&self) -> Option<usize> {
        (1..self.n).find(|&j| {
            let d = self.dims[j - 1];
            let (up, down) = self.loops_at(j);
            let up = up.unwrap_or_else(|| Matrix::zeros(d, d));
            let down = down.unwrap_or_else(|| Matrix::zeros(d, d));
            !up.sub(&down).is_zero()
        })
    }

    /// Whether some cycle `α*_j α_j` or `α_{j-1} α*_{j-1}` acts nonzero.
    pub fn has_nonzero_cycle(&self) -> bool {
        (1..self.n).any(|j| {
            let (up, down) = self.loops_at(j);
            up.is_some_and(|m| !m.is_zero()) || down.is_some_and(|m| !m.is_zero())
        })
    }
}

/// The thin representation on a set of factors `(j, d)`: `α_j` sends
/// `(j, d)` to `(j+1, d+1)` and `α*_j` sends `(j+1, d)` to `(j, d+1)`, each
/// to zero when the target is absent.
pub fn thin_rep<T: Scalar>(n: usize, factors: &BTreeSet<(usize, usize)>) -> Result<QuiverRep<T>, FinError> {
    if n < 2 {
        return Err(FinError::InvalidRep("n must be at least 2".into()));
    }
    if let Some(&(j, _)) = factors.iter().find(|&&(j, _)| j == 0 || j >= n) {
        return Err(FinError::IndexOutOfRange { index: j, n });
    }
    let columns: Vec<Vec<usize>> =
        (1..n).map(|j| factors.iter().filter(|f| f.0 == j).map(|f| f.1).collect()).collect();
    let dims: Vec<usize> = columns.iter().map(Vec::len).collect();
    let index = |j: usize, d: usize| columns[j - 1].iter().position(|&x| x == d);
    let mut alpha = Vec::new();
    let mut alpha_star = Vec::new();
    for j in 1..n - 1 {
        let mut a = Matrix::zeros(dims[j], dims[j - 1]);
        for (c, &d) in columns[j - 1].iter().enumerate() {
            if let Some(r) = index(j + 1, d + 1) {
                a.set(r, c, T::one());
            }
        }
        let mut s = Matrix::zeros(dims[j - 1], dims[j]);
        for (c, &d) in columns[j].iter().enumerate() {
            if let Some(r) = index(j, d + 1) {
                s.set(r, c, T::one());
            }
        }
        alpha.push(a);
        alpha_star.push(s);
    }
    QuiverRep::new(n, dims, alpha, alpha_star)
}

pub fn to_rep<T: Scalar>(m: &CurveModule) -> QuiverRep<T> {
    m.to_rep()
}

/// `dim Hom(A, B)`: the nullity of the linear system
/// `φ_{j+1} A(α_j) = B(α_j) φ_j` and `φ_j A(α*_j) = B(α*_j) φ_{j+1}`.
pub fn hom_dim<T: Scalar>(a: &QuiverRep<T>, b: &QuiverRep<T>) -> Result<usize, FinError> {
    if a.n != b.n {
        return Err(FinError::SizeMismatch(a.n, b.n));
    }
    let n = a.n;
    let (da, db) = (&a.dims, &b.dims);
    let mut offset = vec![0; n];
    for j in 1..n {
        offset[j] = offset[j - 1] + db[j - 1] * da[j - 1];
    }
    let unknowns = offset[n - 1];
    if unknowns == 0 {
        return Ok(0);
    }
    // φ_j[r, c] with j 1-indexed
    let var = |j: usize, r: usize, c: usize| offset[j - 1] + r * da[j - 1] + c;
    let mut rows: Vec<T> = Vec::new();
    let mut nrows = 0;
    for j in 1..n - 1 {
        let (aa, ba) = (a.alpha(j), b.alpha(j));
        for r in 0..db[j] {
            for c in 0..da[j - 1] {
                let mut row = vec![T::zero(); unknowns];
                for k in 0..da[j] {
                    let v = row[var(j + 1, r, k)].clone() + aa.get(k, c).clone();
                    row[var(j + 1, r, k)] = v;
                }
                for k in 0..db[j - 1] {
                    let v = row[var(j, k, c)].clone() - ba.get(r, k).clone();
                    row[var(j, k, c)] = v;
                }
                rows.extend(row);
                nrows += 1;
            }
        }
        let (as_, bs) = (a.alpha_star(j), b.alpha_star(j));
        for r in 0..db[j - 1] {
            for c in 0..da[j] {
                let mut row = vec![T::zero(); unknowns];
                for k in 0..da[j - 1] {
                    let v = row[var(j, r, k)].clone() + as_.get(k, c).clone();
                    row[var(j, r, k)] = v;
                }
                for k in 0..db[j] {
                    let v = row[var(j + 1, k, c)].clone() - bs.get(r, k).clone();
                    row[var(j + 1, k, c)] = v;
                }
                rows.extend(row);
                nrows += 1;
            }
        }
    }
    Ok(unknowns - row_reduce_rank(nrows, unknowns, rows))
}

/// Pairs `(i, j, dim)` with `Hom((I_w)^i, τ (I_w)^j) ≠ 0`.
pub fn tau_rigidity_failures(w: &Perm) -> Result<Vec<(usize, usize, usize)>, FinError> {
    let max = crate::max_n();
    if w.n() > max {
        return Err(FinError::TooLarge { n: w.n(), max });
    }
    let summands = ideal_of(w)?;
    let subs: Vec<QuiverRep<Rat>> = summands.iter().map(|m| m.to_rep()).collect();
    let taus: Vec<QuiverRep<Rat>> =
        summands.iter().map(|m| tau_sub(m).map(|t| t.to_rep())).collect::<Result<_, _>>()?;
    let mut out = Vec::new();
    for (i, s) in subs.iter().enumerate() {
        for (j, t) in taus.iter().enumerate() {
            let d = hom_dim(s, t)?;
            if d != 0 {
                out.push((i + 1, j + 1, d));
            }
        }
    }
    Ok(out)
}

pub fn is_tau_rigid_ideal(w: &Perm) -> Result<bool, FinError> {
    Ok(tau_rigidity_failures(w)?.is_empty())
}

#[derive(Serialize, Deserialize)]
struct CurveModuleWire {
    n: usize,
    i: usize,
    kind: CurveKind,
    curve: Vec<String>,
}

impl From<CurveModule> for CurveModuleWire {
    fn from(m: CurveModule) -> Self {
        Self {
            n: m.n(),
            i: m.i(),
            kind: m.kind,
            curve: m.curve.values::<Rat>().iter().map(ToString::to_string).collect(),
        }
    }
}

impl TryFrom<CurveModuleWire> for CurveModule {
    type Error = String;

    fn try_from(w: CurveModuleWire) -> Result<Self, String> {
        let values = w
            .curve
            .iter()
            .map(|s| crate::plfunc::parse_scalar::<Rat>(s))
            .collect::<Result<Vec<_>, _>>()?;
        let curve = DiamondCurve::from_values(w.n, w.i, &values).map_err(|e| e.to_string())?;
        Ok(Self::new(w.kind, curve))
    }
}
