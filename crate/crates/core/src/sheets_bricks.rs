//! Sheet modules, their elementary morphisms, and the brick classification.
//!
//! A sheet is the image of `M -> P_k -> N` for a decorous submodule `M` and a
//! decorous quotient `N` of the projective at `k`. It is described by the two
//! boundary functions `up = ∂↑` (of `M`) and `down = ∂↓` (of `N`) and is
//! nonzero exactly above the points where `up < down`.
//!
//! The discrete side ([`GridSheet`]) is the analogous subquotient of a finite
//! projective, given by two diamond curves; it feeds the Hom solver.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::plfunc::{parse_scalar, to_bfunc, BFunc, PlError, PlFunc};
use crate::preproj_fin::{factor_positions, hom_dim, thin_rep, CurveModule, DiamondCurve, FinError, QuiverRep};
use crate::scalar::Scalar;
use crate::Rat;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SheetError {
    #[error("not decorous: {0}")]
    NotDecorous(String),
    #[error("{0} is not in the support of the sheet")]
    NotInSupport(String),
    #[error("shift b = {b} is smaller than a = {a}")]
    BadShift { a: String, b: String },
    #[error("{0} is not a generator of the sheet")]
    NotGenerator(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("hypothesis fails: {0}")]
    HypothesisFailed(String),
    #[error("invalid sawtooth data: {0}")]
    InvalidSawtooth(String),
    #[error(transparent)]
    Pl(#[from] PlError),
    #[error(transparent)]
    Fin(#[from] FinError),
}

/// A sheet module inside the projective at `k`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "SheetWire<T>", into = "SheetWire<T>", bound = "T: Scalar")]
pub struct Sheet<T: Scalar = Rat> {
    k: T,
    up: BFunc<T>,
    down: BFunc<T>,
}

impl<T: Scalar> Sheet<T> {
    pub fn new(k: T, up: BFunc<T>, down: BFunc<T>) -> Result<Self, SheetError> {
        for (name, b) in [("up", &up), ("down", &down)] {
            if *b.k() != k {
                return Err(SheetError::NotDecorous(format!("{name} is based at {} rather than {k}", b.k())));
            }
        }
        Ok(Self { k, up, down })
    }

    /// The whole projective at `k`.
    pub fn full(k: T) -> Result<Self, SheetError> {
        Self::new(k.clone(), BFunc::top(k.clone())?, BFunc::bottom(k)?)
    }

    pub fn k(&self) -> &T {
        &self.k
    }

    pub fn up(&self) -> &BFunc<T> {
        &self.up
    }

    pub fn down(&self) -> &BFunc<T> {
        &self.down
    }

    /// `down - up`.
    pub fn gap(&self) -> PlFunc<T> {
        self.down.func().sub(self.up.func())
    }

    pub fn support(&self) -> Vec<(T, T)> {
        self.gap().positive_intervals()
    }

    pub fn is_zero(&self) -> bool {
        self.support().is_empty()
    }

    pub fn in_support(&self, y: &T) -> bool {
        self.support().iter().any(|(lo, hi)| lo < y && y < hi)
    }

    pub fn generators(&self) -> GeneratorSet<T> {
        generators(self)
    }
}

pub fn sheet_new<T: Scalar>(k: T, up: BFunc<T>, down: BFunc<T>) -> Result<Sheet<T>, SheetError> {
    Sheet::new(k, up, down)
}

/// Maximal open intervals on which `up < down`.
pub fn sheet_support<T: Scalar>(s: &Sheet<T>) -> Vec<(T, T)> {
    s.support()
}

/// An interval with individually open or closed ends; `lo == hi` with both
/// ends closed is a single point.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Interval<T: Scalar = Rat> {
    #[serde(with = "crate::scalar::text")]
    pub lo: T,
    #[serde(with = "crate::scalar::text")]
    pub hi: T,
    pub lo_closed: bool,
    pub hi_closed: bool,
}

impl<T: Scalar> Interval<T> {
    pub fn point(x: T) -> Self {
        Self { lo: x.clone(), hi: x, lo_closed: true, hi_closed: true }
    }

    pub fn open(lo: T, hi: T) -> Self {
        Self { lo, hi, lo_closed: false, hi_closed: false }
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn contains(&self, x: &T) -> bool {
        let above = if self.lo_closed { *x >= self.lo } else { *x > self.lo };
        let below = if self.hi_closed { *x <= self.hi } else { *x < self.hi };
        above && below
    }

    /// Intersection with the open interval `(lo, hi)`.
    pub fn intersect_open(&self, lo: &T, hi: &T) -> Option<Self> {
        let (nlo, lo_closed) = if self.lo > *lo { (self.lo.clone(), self.lo_closed) } else { (lo.clone(), false) };
        let (nhi, hi_closed) = if self.hi < *hi { (self.hi.clone(), self.hi_closed) } else { (hi.clone(), false) };
        let nonempty = nlo < nhi || (nlo == nhi && lo_closed && hi_closed);
        nonempty.then_some(Self { lo: nlo, hi: nhi, lo_closed, hi_closed })
    }

    /// A point of the interval (its midpoint).
    pub fn sample(&self) -> T {
        (self.lo.clone() + self.hi.clone()) * T::half()
    }
}

/// The generator set of a sheet: finitely many isolated points together
/// with finitely many intervals (where `up` is flatter than slope ±1).
#[derive(Clone, Debug, PartialEq)]
pub struct GeneratorSet<T: Scalar = Rat> {
    pieces: Vec<Interval<T>>,
}

impl<T: Scalar> Default for GeneratorSet<T> {
    fn default() -> Self {
        Self { pieces: Vec::new() }
    }
}

impl<T: Scalar> GeneratorSet<T> {
    /// Sorted, pairwise disjoint and non-touching pieces.
    pub fn pieces(&self) -> &[Interval<T>] {
        &self.pieces
    }

    pub fn is_empty(&self) -> bool {
        self.pieces.is_empty()
    }

    pub fn is_finite(&self) -> bool {
        self.pieces.iter().all(Interval::is_point)
    }

    /// The isolated points; all of the set when it is finite.
    pub fn points(&self) -> Vec<T> {
        self.pieces.iter().filter(|p| p.is_point()).map(|p| p.lo.clone()).collect()
    }

    pub fn contains(&self, x: &T) -> bool {
        self.pieces.iter().any(|p| p.contains(x))
    }

    /// One representative per piece.
    pub fn representatives(&self) -> Vec<T> {
        self.pieces.iter().map(Interval::sample).collect()
    }

    pub fn intersect_open(&self, lo: &T, hi: &T) -> Self {
        Self { pieces: self.pieces.iter().filter_map(|p| p.intersect_open(lo, hi)).collect() }
    }

    fn from_sorted(atoms: Vec<Interval<T>>) -> Self {
        let mut pieces: Vec<Interval<T>> = Vec::new();
        for atom in atoms {
            if let Some(last) = pieces.last_mut() {
                if last.hi == atom.lo && (last.hi_closed || atom.lo_closed) {
                    last.hi = atom.hi;
                    last.hi_closed = atom.hi_closed;
                    continue;
                }
            }
            pieces.push(atom);
        }
        Self { pieces }
    }
}

/// Points `y` of the support with `|y - z| > up(y) - up(z)` for every other
/// support point `z`.
///
/// Because `up` is 1-Lipschitz, `up(y) - up(z) = |y - z|` forces slope
/// exactly `+1` (resp. `-1`) on the whole segment between `z < y`
/// (resp. `z > y`), in particular right next to `y`. So the condition only
/// depends on the one-sided slopes at `y`: left slope `< 1` and right
/// slope `> -1`.
pub fn generators<T: Scalar>(s: &Sheet<T>) -> GeneratorSet<T> {
    let up = s.up.func();
    let pts = up.breakpoints();
    let slopes = up.slopes();
    let one = T::one();
    let flat = |m: &T| *m < one && *m > -one.clone();
    let mut atoms = Vec::new();
    for t in 0..slopes.len() {
        if t > 0 && slopes[t - 1] < one && slopes[t] > -one.clone() {
            atoms.push(Interval::point(pts[t].0.clone()));
        }
        if flat(&slopes[t]) {
            atoms.push(Interval::open(pts[t].0.clone(), pts[t + 1].0.clone()));
        }
    }
    let mut clipped = Vec::new();
    for (lo, hi) in s.support() {
        clipped.extend(atoms.iter().filter_map(|a| a.intersect_open(&lo, &hi)));
    }
    GeneratorSet::from_sorted(clipped)
}

fn in_unit_open<T: Scalar>(x: &T) -> bool {
    x.is_positive() && *x < T::one()
}

/// Whether `(z, b)` lies in the cone `C_a(y)`: `b` is a length present in
/// `S'(z)` and `b - (a + up(y)) >= |y - z|`. Points outside `(0, 1)` are
/// never in the cone.
pub fn cone_contains<T: Scalar>(s: &Sheet<T>, sp: &Sheet<T>, y: &T, a: &T, z: &T, b: &T) -> bool {
    if !in_unit_open(y) || !in_unit_open(z) {
        return false;
    }
    let start = a.clone() + s.up.func().value_at(y);
    let in_target = sp.up.func().value_at(z) <= *b && *b < sp.down.func().value_at(z);
    in_target && b.clone() - start >= (y.clone() - z.clone()).abs()
}

/// `Δ = down' - (a + up)`.
pub fn delta_fn<T: Scalar>(s: &Sheet<T>, sp: &Sheet<T>, a: &T) -> PlFunc<T> {
    sp.down.func().sub(&s.up.func().vshift(a))
}

/// The largest open interval around `y` on which `Δ > 0`, or `None` when
/// `Δ(y) <= 0`.
pub fn b_interval<T: Scalar>(s: &Sheet<T>, sp: &Sheet<T>, y: &T, a: &T) -> Result<Option<(T, T)>, SheetError> {
    if !s.in_support(y) {
        return Err(SheetError::NotInSupport(y.to_string()));
    }
    Ok(delta_fn(s, sp, a).positive_intervals().into_iter().find(|(lo, hi)| lo < y && y < hi))
}

/// `B_a(y) ∩ gen(S)`.
pub fn codependence_class<T: Scalar>(
    s: &Sheet<T>,
    sp: &Sheet<T>,
    y: &T,
    a: &T,
) -> Result<GeneratorSet<T>, SheetError> {
    Ok(match b_interval(s, sp, y, a)? {
        Some((lo, hi)) => generators(s).intersect_open(&lo, &hi),
        None => GeneratorSet::default(),
    })
}

/// Whether all members of the `a`-class of `y` with a nonempty `b`-class
/// share the same `b`-class.
///
/// A generator `z` has a nonempty `b`-class iff `Δ_b(z) > 0`, and two such
/// classes agree iff they sit in the same positive component of `Δ_b`; so it
/// suffices to count the components of `Δ_b > 0` met by the `a`-class.
pub fn in_range_of_codependence<T: Scalar>(
    s: &Sheet<T>,
    sp: &Sheet<T>,
    y: &T,
    a: &T,
    b: &T,
) -> Result<bool, SheetError> {
    if b < a {
        return Err(SheetError::BadShift { a: a.to_string(), b: b.to_string() });
    }
    let class = codependence_class(s, sp, y, a)?;
    let met = delta_fn(s, sp, b)
        .positive_intervals()
        .iter()
        .filter(|(lo, hi)| !class.intersect_open(lo, hi).is_empty())
        .count();
    Ok(met <= 1)
}

/// Whether the elementary morphism `S -> S'` sending the generator at `y`
/// to the element of length `a + up(y)` exists.
///
/// Checks that this element lies in `S'(y)` and that
/// `up' <= a + up < down' <= a + down` on `B_a(y)`.
pub fn elementary_exists<T: Scalar>(s: &Sheet<T>, sp: &Sheet<T>, y: &T, a: &T) -> Result<bool, SheetError> {
    if !generators(s).contains(y) {
        return Err(SheetError::NotGenerator(y.to_string()));
    }
    let start = a.clone() + s.up.func().value_at(y);
    if !(sp.up.func().value_at(y) <= start && start < sp.down.func().value_at(y)) {
        return Ok(false);
    }
    let Some((lo, hi)) = b_interval(s, sp, y, a)? else {
        return Ok(false);
    };
    let lower = s.up.func().vshift(a).sub(sp.up.func());
    let upper = s.down.func().vshift(a).sub(sp.down.func());
    Ok(lower.nonnegative_on(&lo, &hi) && upper.nonnegative_on(&lo, &hi))
}

/// An elementary morphism candidate `(y, a)` together with its `B_a(y)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Elementary<T: Scalar = Rat> {
    pub y: T,
    pub a: T,
    pub interval: (T, T),
}

/// Elementary morphisms found at the generator representatives and the given
/// shifts, and the number of nonempty families of them with pairwise disjoint
/// intervals.
#[derive(Clone, Debug, PartialEq)]
pub struct MultiElementaryReport<T: Scalar = Rat> {
    pub candidates: Vec<Elementary<T>>,
    pub disjoint_families: u64,
}

pub const MAX_MULTI_CANDIDATES: usize = 24;

pub fn multi_elementary_families<T: Scalar>(
    s: &Sheet<T>,
    sp: &Sheet<T>,
    shifts: &[T],
) -> Result<MultiElementaryReport<T>, SheetError> {
    let mut candidates = Vec::new();
    for y in generators(s).representatives() {
        for a in shifts {
            if elementary_exists(s, sp, &y, a)? {
                if let Some(interval) = b_interval(s, sp, &y, a)? {
                    candidates.push(Elementary { y: y.clone(), a: a.clone(), interval });
                }
            }
        }
    }
    if candidates.len() > MAX_MULTI_CANDIDATES {
        return Err(SheetError::Domain(format!(
            "{} candidates exceed the enumeration limit {MAX_MULTI_CANDIDATES}",
            candidates.len()
        )));
    }
    fn count<T: Scalar>(c: &[Elementary<T>], from: usize, chosen: &mut Vec<usize>) -> u64 {
        let mut total = 0;
        for i in from..c.len() {
            let (lo, hi) = &c[i].interval;
            if chosen.iter().all(|&j| c[j].interval.1 <= *lo || *hi <= c[j].interval.0) {
                chosen.push(i);
                total += 1 + count(c, i + 1, chosen);
                chosen.pop();
            }
        }
        total
    }
    let disjoint_families = count(&candidates, 0, &mut Vec::new());
    Ok(MultiElementaryReport { candidates, disjoint_families })
}

/// Some loop `α*_j α_j` or `α_{j-1} α*_{j-1}` acts nonzero.
pub fn is_deep<T: Scalar>(m: &QuiverRep<T>) -> bool {
    m.has_nonzero_cycle()
}

/// Every nonzero sheet is deep: above a support point, a loop shorter than
/// the gap `down - up` acts nonzero.
pub fn is_deep_sheet<T: Scalar>(s: &Sheet<T>) -> bool {
    !s.is_zero()
}

/// A sawtooth function on `[a, b]`: teeth `(x, ∂(x))` joined by segments of
/// alternating slope `±1`.
///
/// The first tooth has index `min I`, which is even when the first slope is
/// `-1` and odd when it is `+1`; indices then increase by one per tooth.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "SawtoothWire", into = "SawtoothWire", bound = "T: Scalar")]
pub struct SawtoothDesc<T: Scalar = Rat> {
    teeth: Vec<(T, T)>,
    endpoints: (bool, bool),
}

impl<T: Scalar> SawtoothDesc<T> {
    pub fn new(teeth: Vec<(T, T)>, endpoints: (bool, bool)) -> Result<Self, SheetError> {
        let bad = |m: &str| Err(SheetError::InvalidSawtooth(m.into()));
        if teeth.len() < 2 {
            return bad("need at least two teeth");
        }
        let (a, b) = (&teeth[0].0, &teeth[teeth.len() - 1].0);
        if a.is_negative() || *b > T::one() {
            return bad("teeth must lie in [0, 1]");
        }
        let mut prev: Option<T> = None;
        for w in teeth.windows(2) {
            let dx = w[1].0.clone() - w[0].0.clone();
            if !dx.is_positive() {
                return bad("tooth positions must strictly increase");
            }
            let slope = (w[1].1.clone() - w[0].1.clone()) / dx;
            if slope.abs() != T::one() {
                return bad("slopes between teeth must be +1 or -1");
            }
            if prev.as_ref() == Some(&slope) {
                return bad("slopes between teeth must alternate");
            }
            prev = Some(slope);
        }
        if (endpoints.0 && a.is_zero()) || (endpoints.1 && b.is_one()) {
            return bad("0 and 1 cannot belong to the support");
        }
        Ok(Self { teeth, endpoints })
    }

    pub fn a(&self) -> &T {
        &self.teeth[0].0
    }

    pub fn b(&self) -> &T {
        &self.teeth[self.teeth.len() - 1].0
    }

    pub fn teeth(&self) -> &[(T, T)] {
        &self.teeth
    }

    pub fn endpoints(&self) -> (bool, bool) {
        self.endpoints
    }

    /// `min I` is odd iff the first slope is `+1`.
    pub fn min_index_odd(&self) -> bool {
        self.teeth[1].1 > self.teeth[0].1
    }

    /// `max I` is odd iff the last slope is `-1`.
    pub fn max_index_odd(&self) -> bool {
        let n = self.teeth.len();
        self.teeth[n - 1].1 < self.teeth[n - 2].1
    }

    /// `∂` on `[a, b]`, extended constantly to `[0, 1]`.
    pub fn extended(&self) -> PlFunc<T> {
        let mut pts = Vec::with_capacity(self.teeth.len() + 2);
        if self.a().is_positive() {
            pts.push((T::zero(), self.teeth[0].1.clone()));
        }
        pts.extend(self.teeth.iter().cloned());
        if *self.b() < T::one() {
            pts.push((T::one(), self.teeth[self.teeth.len() - 1].1.clone()));
        }
        PlFunc::new(pts).expect("teeth span part of [0, 1]")
    }
}

/// Teeth of `f` on `[a, b]` if `f` is a sawtooth there. Endpoint flags
/// default to including the endpoints that lie strictly inside `(0, 1)`.
pub fn is_sawtooth<T: Scalar>(f: &PlFunc<T>, a: &T, b: &T) -> Result<Option<SawtoothDesc<T>>, SheetError> {
    if a.is_negative() || a >= b || *b > T::one() {
        return Err(SheetError::Domain(format!("need 0 <= a < b <= 1, got a = {a}, b = {b}")));
    }
    if !f.is_lipschitz1() {
        return Err(SheetError::Pl(PlError::NotLipschitz));
    }
    let mut teeth = vec![(a.clone(), f.value_at(a))];
    teeth.extend(f.breakpoints().iter().filter(|p| p.0 > *a && p.0 < *b).cloned());
    teeth.push((b.clone(), f.value_at(b)));
    let flags = (a.is_positive(), *b < T::one());
    Ok(SawtoothDesc::new(teeth, flags).ok())
}

/// The decorous submodule whose quotient is the sawtooth module: extend `∂`
/// constantly outside `[a, b]` and normalize into a boundary class.
pub fn decorous_cover<T: Scalar>(st: &SawtoothDesc<T>) -> Result<BFunc<T>, SheetError> {
    if st.a().is_zero() && st.min_index_odd() {
        return Err(SheetError::HypothesisFailed("the first tooth is at 0 with odd index".into()));
    }
    if st.b().is_one() && st.max_index_odd() {
        return Err(SheetError::HypothesisFailed("the last tooth is at 1 with odd index".into()));
    }
    Ok(to_bfunc(&st.extended())?)
}

/// The subquotient of the finite projective `P_i` lying strictly between two
/// diamond curves: factors `(j, d)` with `up(j) < d < down(j)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "GridSheetWire", into = "GridSheetWire")]
pub struct GridSheet {
    up: DiamondCurve,
    down: DiamondCurve,
}

impl GridSheet {
    pub fn new(up: DiamondCurve, down: DiamondCurve) -> Result<Self, SheetError> {
        if (up.n(), up.i()) != (down.n(), down.i()) {
            return Err(SheetError::NotDecorous(format!(
                "curves live in P_{} (n = {}) and P_{} (n = {})",
                up.i(),
                up.n(),
                down.i(),
                down.n()
            )));
        }
        Ok(Self { up, down })
    }

    pub fn up(&self) -> &DiamondCurve {
        &self.up
    }

    pub fn down(&self) -> &DiamondCurve {
        &self.down
    }

    pub fn n(&self) -> usize {
        self.up.n()
    }

    pub fn i(&self) -> usize {
        self.up.i()
    }

    pub fn factors(&self) -> BTreeSet<(usize, usize)> {
        let (u, d) = (self.up.heights(), self.down.heights());
        factor_positions(self.i(), self.n())
            .into_iter()
            .filter(|&(j, len)| u[j] < len && len < d[j])
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.factors().is_empty()
    }

    /// Largest number of factors in a single column.
    pub fn max_column(&self) -> usize {
        let f = self.factors();
        (1..self.n()).map(|j| f.iter().filter(|x| x.0 == j).count()).max().unwrap_or(0)
    }

    /// At most one factor per column, over a contiguous nonempty range.
    pub fn is_strip(&self) -> bool {
        let cols: Vec<usize> = self.factors().iter().map(|f| f.0).collect();
        !cols.is_empty() && cols.windows(2).all(|w| w[1] == w[0] + 1)
    }

    pub fn to_rep<T: Scalar>(&self) -> Result<QuiverRep<T>, SheetError> {
        Ok(thin_rep(self.n(), &self.factors())?)
    }

    /// The continuous sheet with the same boundary curves.
    pub fn to_sheet<T: Scalar>(&self) -> Result<Sheet<T>, SheetError> {
        let k = T::ratio(self.i() as i64, self.n() as i64);
        let up = BFunc::new(k.clone(), self.up.to_plfunc())?;
        let down = BFunc::new(k.clone(), self.down.to_plfunc())?;
        Sheet::new(k, up, down)
    }
}

/// Module descriptors understood by [`is_brick`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "variant", bound = "T: Scalar")]
pub enum ModuleDesc<T: Scalar = Rat> {
    Simple {
        #[serde(with = "crate::scalar::text")]
        x: T,
    },
    Sawtooth(SawtoothDesc<T>),
    CurveBacked(CurveModule),
    SheetBacked(GridSheet),
}

/// Simple and sawtooth modules are bricks; finite modules are decided by
/// `dim End = 1`.
pub fn is_brick<T: Scalar>(m: &ModuleDesc<T>) -> Result<bool, SheetError> {
    match m {
        ModuleDesc::Simple { x } => {
            if !in_unit_open(x) {
                return Err(SheetError::Domain(format!("simple at {x} outside (0, 1)")));
            }
            Ok(true)
        }
        ModuleDesc::Sawtooth(_) => Ok(true),
        ModuleDesc::CurveBacked(c) => {
            let rep = c.to_rep::<Rat>();
            Ok(hom_dim(&rep, &rep)? == 1)
        }
        ModuleDesc::SheetBacked(g) => {
            let rep = g.to_rep::<Rat>()?;
            Ok(hom_dim(&rep, &rep)? == 1)
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
struct SheetWire<T: Scalar> {
    k: String,
    up: PlFunc<T>,
    down: PlFunc<T>,
}

impl<T: Scalar> From<Sheet<T>> for SheetWire<T> {
    fn from(s: Sheet<T>) -> Self {
        Self { k: s.k.to_string(), up: s.up.into_func(), down: s.down.into_func() }
    }
}

impl<T: Scalar> TryFrom<SheetWire<T>> for Sheet<T> {
    type Error = String;

    fn try_from(w: SheetWire<T>) -> Result<Self, String> {
        let k: T = parse_scalar(&w.k)?;
        let up = BFunc::new(k.clone(), w.up).map_err(|e| e.to_string())?;
        let down = BFunc::new(k.clone(), w.down).map_err(|e| e.to_string())?;
        Sheet::new(k, up, down).map_err(|e| e.to_string())
    }
}

#[derive(Serialize, Deserialize)]
struct SawtoothWire {
    a: String,
    b: String,
    teeth: Vec<(String, String)>,
    endpoints: (bool, bool),
}

impl<T: Scalar> From<SawtoothDesc<T>> for SawtoothWire {
    fn from(s: SawtoothDesc<T>) -> Self {
        Self {
            a: s.a().to_string(),
            b: s.b().to_string(),
            teeth: s.teeth.iter().map(|(x, v)| (x.to_string(), v.to_string())).collect(),
            endpoints: s.endpoints,
        }
    }
}

impl<T: Scalar> TryFrom<SawtoothWire> for SawtoothDesc<T> {
    type Error = String;

    fn try_from(w: SawtoothWire) -> Result<Self, String> {
        let teeth = w
            .teeth
            .iter()
            .map(|(x, v)| Ok((parse_scalar(x)?, parse_scalar(v)?)))
            .collect::<Result<Vec<(T, T)>, String>>()?;
        let st = SawtoothDesc::new(teeth, w.endpoints).map_err(|e| e.to_string())?;
        let (a, b): (T, T) = (parse_scalar(&w.a)?, parse_scalar(&w.b)?);
        if a != *st.a() || b != *st.b() {
            return Err("a and b must be the first and last tooth".into());
        }
        Ok(st)
    }
}

#[derive(Serialize, Deserialize)]
struct GridSheetWire {
    n: usize,
    i: usize,
    up: Vec<String>,
    down: Vec<String>,
}

impl From<GridSheet> for GridSheetWire {
    fn from(g: GridSheet) -> Self {
        let text = |c: &DiamondCurve| c.values::<Rat>().iter().map(ToString::to_string).collect();
        Self { n: g.n(), i: g.i(), up: text(&g.up), down: text(&g.down) }
    }
}

impl TryFrom<GridSheetWire> for GridSheet {
    type Error = String;

    fn try_from(w: GridSheetWire) -> Result<Self, String> {
        let curve = |v: &[String]| -> Result<DiamondCurve, String> {
            let vals = v.iter().map(|s| parse_scalar::<Rat>(s)).collect::<Result<Vec<_>, _>>()?;
            DiamondCurve::from_values(w.n, w.i, &vals).map_err(|e| e.to_string())
        };
        GridSheet::new(curve(&w.up)?, curve(&w.down)?).map_err(|e| e.to_string())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::preproj_fin::projective;

    fn q(n: i64, d: i64) -> Rat {
        Rat::ratio(n, d)
    }

    fn pl(pts: &[(i64, i64)], den: i64) -> PlFunc {
        PlFunc::new(pts.iter().map(|&(x, y)| (q(x, den), q(y, den))).collect()).unwrap()
    }

    fn half_sheet(up: PlFunc, down: PlFunc) -> Sheet {
        Sheet::new(q(1, 2), BFunc::new(q(1, 2), up).unwrap(), BFunc::new(q(1, 2), down).unwrap()).unwrap()
    }

    /// `up` with minima at 2/5 and 3/5, `down` the bottom curve.
    fn two_generator_sheet() -> Sheet {
        let up = pl(&[(0, 5), (4, 1), (5, 2), (6, 1), (10, 5)], 10);
        half_sheet(up, BFunc::bottom(q(1, 2)).unwrap().into_func())
    }

    /// The full top with a flat stretch of `down'` at height 3/4.
    fn plateau_target() -> Sheet {
        let down = pl(&[(0, 2), (1, 3), (3, 3), (4, 2)], 4);
        half_sheet(BFunc::top(q(1, 2)).unwrap().into_func(), down)
    }

    #[test]
    fn full_and_zero_sheets() {
        let full = Sheet::full(q(1, 2)).unwrap();
        assert_eq!(full.support(), vec![(q(0, 1), q(1, 1))]);
        let top = BFunc::top(q(1, 2)).unwrap();
        let zero = Sheet::new(q(1, 2), top.clone(), top).unwrap();
        assert!(zero.is_zero());
        assert!(zero.support().is_empty());
        assert!(!is_deep_sheet(&zero));
        assert!(is_deep_sheet(&full));
    }

    #[test]
    fn mismatched_apex_is_rejected() {
        let up = BFunc::top(q(1, 3)).unwrap();
        let down = BFunc::bottom(q(1, 2)).unwrap();
        assert!(matches!(Sheet::new(q(1, 2), up, down), Err(SheetError::NotDecorous(_))));
    }

    #[test]
    fn two_bubble_support() {
        let up = pl(&[(0, 2), (1, 1), (2, 2), (3, 1), (4, 2)], 4);
        let down = pl(&[(0, 2), (1, 3), (2, 2), (3, 3), (4, 2)], 4);
        let s = half_sheet(up, down);
        assert_eq!(sheet_support(&s), vec![(q(0, 1), q(1, 2)), (q(1, 2), q(1, 1))]);
        assert_eq!(s.generators().points(), vec![q(1, 4), q(3, 4)]);
    }

    #[test]
    fn generator_examples() {
        assert_eq!(Sheet::full(q(1, 3)).unwrap().generators().points(), vec![q(1, 3)]);
        let s = two_generator_sheet();
        let g = s.generators();
        assert_eq!(g.points(), vec![q(2, 5), q(3, 5)]);
        assert!(g.is_finite());
        // 1/2 ends a slope +1 segment
        assert!(!g.contains(&q(1, 2)));
    }

    #[test]
    fn flat_stretch_gives_an_interval_of_generators() {
        let up = pl(&[(0, 2), (1, 1), (3, 1), (4, 2)], 4);
        let s = half_sheet(up, BFunc::bottom(q(1, 2)).unwrap().into_func());
        let g = s.generators();
        assert_eq!(g.pieces(), &[Interval { lo: q(1, 4), hi: q(3, 4), lo_closed: true, hi_closed: true }]);
        assert!(g.contains(&q(1, 3)));
        assert!(!g.is_finite());
    }

    #[test]
    fn cone_examples() {
        let s = Sheet::full(q(1, 2)).unwrap();
        let y = q(1, 2);
        let zero = q(0, 1);
        assert!(cone_contains(&s, &s, &y, &zero, &y, &zero));
        assert!(!cone_contains(&s, &s, &y, &zero, &y, &q(-1, 10)));
        assert!(!cone_contains(&s, &s, &y, &zero, &y, &q(1, 1)));
        assert!(cone_contains(&s, &s, &y, &zero, &q(1, 4), &q(1, 4)));
        assert!(!cone_contains(&s, &s, &y, &zero, &q(1, 4), &q(1, 5)));
        assert!(!cone_contains(&s, &s, &y, &zero, &q(0, 1), &q(1, 2)));
    }

    #[test]
    fn delta_and_b_interval() {
        let s = Sheet::full(q(1, 2)).unwrap();
        let zero = q(0, 1);
        let delta = delta_fn(&s, &s, &zero);
        assert_eq!(delta, BFunc::bottom(q(1, 2)).unwrap().func().sub(BFunc::top(q(1, 2)).unwrap().func()));
        assert_eq!(b_interval(&s, &s, &q(1, 3), &zero).unwrap(), Some((q(0, 1), q(1, 1))));
        assert_eq!(b_interval(&s, &s, &q(1, 3), &q(1, 1)).unwrap(), None);

        let down = pl(&[(0, 3), (2, 1), (3, 2), (4, 1), (6, 3)], 6);
        let sp = half_sheet(BFunc::top(q(1, 2)).unwrap().into_func(), down);
        assert_eq!(b_interval(&s, &sp, &q(1, 2), &zero).unwrap(), Some((q(1, 3), q(2, 3))));

        let top = BFunc::top(q(1, 2)).unwrap();
        let empty = Sheet::new(q(1, 2), top.clone(), top).unwrap();
        assert!(matches!(b_interval(&empty, &s, &q(1, 2), &zero), Err(SheetError::NotInSupport(_))));
    }

    #[test]
    fn codependence_splits_at_larger_shift() {
        let s = two_generator_sheet();
        let sp = plateau_target();
        let (y, a, b) = (q(2, 5), q(1, 2), q(3, 5));
        assert_eq!(codependence_class(&s, &sp, &y, &a).unwrap().points(), vec![q(2, 5), q(3, 5)]);
        assert_eq!(codependence_class(&s, &sp, &y, &b).unwrap().points(), vec![q(2, 5)]);
        assert!(in_range_of_codependence(&s, &sp, &y, &a, &a).unwrap());
        assert!(!in_range_of_codependence(&s, &sp, &y, &a, &b).unwrap());
        // singleton classes never split
        assert!(in_range_of_codependence(&s, &sp, &y, &b, &q(7, 10)).unwrap());
        assert!(matches!(
            in_range_of_codependence(&s, &sp, &y, &b, &a),
            Err(SheetError::BadShift { .. })
        ));
    }

    #[test]
    fn single_generator_class() {
        let s = Sheet::full(q(1, 2)).unwrap();
        assert_eq!(codependence_class(&s, &s, &q(1, 2), &q(0, 1)).unwrap().points(), vec![q(1, 2)]);
    }

    #[test]
    fn elementary_examples() {
        let s = two_generator_sheet();
        let zero = q(0, 1);
        assert!(elementary_exists(&s, &s, &q(2, 5), &zero).unwrap());
        assert!(!elementary_exists(&s, &s, &q(2, 5), &q(1, 1)).unwrap());
        let sp = plateau_target();
        assert!(elementary_exists(&s, &sp, &q(2, 5), &zero).unwrap());
        assert!(elementary_exists(&s, &sp, &q(2, 5), &q(1, 2)).unwrap());
        assert!(matches!(elementary_exists(&s, &sp, &q(1, 2), &zero), Err(SheetError::NotGenerator(_))));
        // a larger target boundary breaks down' <= a + down
        assert!(!elementary_exists(&sp, &s, &q(1, 2), &zero).unwrap());
    }

    #[test]
    fn multi_elementary_counts_disjoint_families() {
        let s = two_generator_sheet();
        let sp = plateau_target();
        let r = multi_elementary_families(&s, &sp, &[q(3, 5)]).unwrap();
        assert_eq!(r.candidates.len(), 2);
        // {y}, {y'}, {y, y'}
        assert_eq!(r.disjoint_families, 3);
        let r = multi_elementary_families(&s, &sp, &[q(1, 2)]).unwrap();
        assert_eq!(r.disjoint_families, 2);
    }

    #[test]
    fn deep_reps() {
        assert!(!is_deep(&QuiverRep::<Rat>::simple(5, 2).unwrap()));
        assert!(is_deep(&projective(2, 5).unwrap().to_rep::<Rat>()));
    }

    #[test]
    fn sawtooth_detection() {
        let f1 = pl(&[(0, 1), (4, 5), (5, 4)], 5);
        let st = is_sawtooth(&f1, &q(0, 1), &q(1, 1)).unwrap().unwrap();
        let xs: Vec<Rat> = st.teeth().iter().map(|t| t.0.clone()).collect();
        assert_eq!(xs, vec![q(0, 1), q(4, 5), q(1, 1)]);
        assert!(st.min_index_odd());

        let w = pl(&[(0, 2), (1, 1), (2, 2), (3, 1), (4, 2), (5, 1)], 5);
        assert_eq!(is_sawtooth(&w, &q(0, 1), &q(1, 1)).unwrap().unwrap().teeth().len(), 6);
        assert_eq!(is_sawtooth(&w, &q(1, 10), &q(3, 10)).unwrap().unwrap().teeth().len(), 3);

        assert_eq!(is_sawtooth(&PlFunc::constant(q(1, 2)), &q(0, 1), &q(1, 1)).unwrap(), None);
        assert!(matches!(is_sawtooth(&f1, &q(1, 2), &q(1, 3)), Err(SheetError::Domain(_))));
    }

    #[test]
    fn sawtooth_validation() {
        let ok = vec![(q(1, 5), q(1, 5)), (q(2, 5), q(2, 5)), (q(3, 5), q(1, 5))];
        assert!(SawtoothDesc::new(ok.clone(), (true, false)).is_ok());
        let repeated = vec![(q(1, 5), q(1, 5)), (q(2, 5), q(2, 5)), (q(3, 5), q(3, 5))];
        assert!(SawtoothDesc::new(repeated, (true, true)).is_err());
        let shallow = vec![(q(1, 5), q(1, 5)), (q(2, 5), q(1, 4))];
        assert!(SawtoothDesc::new(shallow, (true, true)).is_err());
        let at_zero = vec![(q(0, 1), q(1, 5)), (q(1, 5), q(2, 5))];
        assert!(SawtoothDesc::new(at_zero, (true, false)).is_err());
    }

    #[test]
    fn decorous_cover_examples() {
        let peak = SawtoothDesc::new(vec![(q(1, 5), q(1, 5)), (q(2, 5), q(2, 5)), (q(3, 5), q(1, 5))], (true, true))
            .unwrap();
        let cover = decorous_cover(&peak).unwrap();
        assert_eq!(*cover.k(), q(1, 2));
        assert_eq!(cover.func(), &pl(&[(0, 5), (2, 5), (4, 7), (6, 5), (10, 5)], 10));

        let odd_at_zero = SawtoothDesc::new(vec![(q(0, 1), q(0, 1)), (q(1, 2), q(1, 2))], (false, true)).unwrap();
        assert!(matches!(decorous_cover(&odd_at_zero), Err(SheetError::HypothesisFailed(_))));
        let odd_at_one = SawtoothDesc::new(vec![(q(1, 2), q(1, 2)), (q(1, 1), q(0, 1))], (true, false)).unwrap();
        assert!(matches!(decorous_cover(&odd_at_one), Err(SheetError::HypothesisFailed(_))));

        let tent =
            SawtoothDesc::new(vec![(q(0, 1), q(1, 3)), (q(1, 3), q(0, 1)), (q(1, 1), q(2, 3))], (false, false))
                .unwrap();
        assert_eq!(decorous_cover(&tent).unwrap(), BFunc::top(q(1, 3)).unwrap());
    }

    #[test]
    fn brick_examples() {
        assert!(is_brick(&ModuleDesc::Simple { x: q(1, 3) }).unwrap());
        let f1 = pl(&[(0, 1), (4, 5), (5, 4)], 5);
        let st = is_sawtooth(&f1, &q(0, 1), &q(1, 1)).unwrap().unwrap();
        assert!(is_brick(&ModuleDesc::Sawtooth(st)).unwrap());
        assert!(!is_brick::<Rat>(&ModuleDesc::CurveBacked(projective(2, 5).unwrap())).unwrap());
        assert!(is_brick::<Rat>(&ModuleDesc::CurveBacked(projective(1, 5).unwrap())).unwrap());
    }

    #[test]
    fn grid_sheets() {
        // P_2, n = 5: a zigzag strip between two curves
        let up = DiamondCurve::new(5, 2, vec![2, 1, 0, 1, 2, 3]).unwrap();
        let down = DiamondCurve::new(5, 2, vec![2, 3, 2, 3, 2, 3]).unwrap();
        let g = GridSheet::new(up, down).unwrap();
        assert_eq!(g.factors(), BTreeSet::from([(1, 2), (2, 1), (3, 2)]));
        assert!(g.is_strip());
        assert!(is_brick::<Rat>(&ModuleDesc::SheetBacked(g.clone())).unwrap());
        let s: Sheet = g.to_sheet().unwrap();
        assert_eq!(s.support().len(), 1);

        let full = GridSheet::new(DiamondCurve::top(5, 2).unwrap(), DiamondCurve::bottom(5, 2).unwrap()).unwrap();
        assert_eq!(full.max_column(), 2);
        assert!(!full.is_strip());
        assert!(!is_brick::<Rat>(&ModuleDesc::SheetBacked(full)).unwrap());
    }

    #[test]
    fn json_round_trips() {
        let s = two_generator_sheet();
        let json = serde_json::to_string(&s).unwrap();
        assert!(json.starts_with(r#"{"k":"1/2","up":{"breakpoints""#));
        assert_eq!(serde_json::from_str::<Sheet>(&json).unwrap(), s);

        let st: SawtoothDesc = serde_json::from_str(
            r#"{"a":"1/5","b":"3/5","teeth":[["1/5","1/5"],["2/5","2/5"],["3/5","1/5"]],"endpoints":[true,false]}"#,
        )
        .unwrap();
        assert_eq!(st.endpoints(), (true, false));
        let back: SawtoothDesc = serde_json::from_str(&serde_json::to_string(&st).unwrap()).unwrap();
        assert_eq!(back, st);
        assert!(serde_json::from_str::<SawtoothDesc>(
            r#"{"a":"0","b":"3/5","teeth":[["1/5","1/5"],["2/5","2/5"],["3/5","1/5"]],"endpoints":[true,false]}"#
        )
        .is_err());

        for m in [
            ModuleDesc::Simple { x: q(1, 3) },
            ModuleDesc::Sawtooth(st),
            ModuleDesc::CurveBacked(projective(2, 5).unwrap()),
        ] {
            let json = serde_json::to_string(&m).unwrap();
            assert!(json.contains(r#""variant":"#));
            assert_eq!(serde_json::from_str::<ModuleDesc>(&json).unwrap(), m);
        }
    }
}
