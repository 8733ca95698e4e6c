//! Verification sweeps behind `preproj check`.
//!
//! A sweep runs one case per permutation (or permuton) in parallel and
//! returns the per-case records in input order, followed by a summary.

use std::fmt;

use preproj_core::cont_ideal::{
    discretize, discretize_ideal, finite_vs_continuous, left_act, tau_rigidity_cert, PermutonIdeal,
};
use preproj_core::permuton::{permuton_bruhat_leq, GridPermuton};
use preproj_core::preproj_fin::{hom_dim, ideal_of, ideal_via_word, tau_rigidity_failures, tau_sub};
use preproj_core::symgroup::{all_reduced_words, bruhat_leq, Perm};
use preproj_core::{max_n, Rat, Scalar};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum CheckName {
    Mizuno,
    Taurigid,
    Bridge,
    Bruhat,
    Twosided,
    Homvanish,
}

impl CheckName {
    fn as_str(self) -> &'static str {
        match self {
            CheckName::Mizuno => "mizuno",
            CheckName::Taurigid => "taurigid",
            CheckName::Bridge => "bridge",
            CheckName::Bruhat => "bruhat",
            CheckName::Twosided => "twosided",
            CheckName::Homvanish => "homvanish",
        }
    }

    fn uses_permutons(self) -> bool {
        matches!(self, CheckName::Twosided | CheckName::Homvanish)
    }

    fn default_grid(self) -> usize {
        match self {
            CheckName::Homvanish => 21,
            _ => 12,
        }
    }
}

impl fmt::Display for CheckName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// What a sweep runs over.
#[derive(Clone, Debug)]
pub enum Scope {
    /// Every permutation of `S_n`.
    All(usize),
    /// The listed permutations.
    Perms(Vec<Perm>),
    /// Named permutons, e.g. loaded from files.
    Permutons(Vec<(String, GridPermuton)>),
}

#[derive(Debug, PartialEq, Eq)]
pub enum ScopeError {
    TooLarge { n: usize, max: usize, exhaustive: bool },
    Unsupported(String),
}

impl fmt::Display for ScopeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ScopeError::TooLarge { n, max, exhaustive } => {
                let what = if *exhaustive { "exhaustive sweeps" } else { "targeted checks" };
                write!(f, "n = {n} exceeds the limit {max} for {what} (set PREPROJ_MAX_N to raise it)")
            }
            ScopeError::Unsupported(msg) => f.write_str(msg),
        }
    }
}

impl std::error::Error for ScopeError {}

/// Exhaustive sweeps are allowed one size below the targeted limit.
pub fn guard(scope: &Scope) -> Result<(), ScopeError> {
    let max = max_n();
    match scope {
        Scope::All(n) if *n + 1 > max => Err(ScopeError::TooLarge { n: *n, max: max - 1, exhaustive: true }),
        Scope::Perms(ws) => match ws.iter().map(Perm::n).max() {
            Some(n) if n > max => Err(ScopeError::TooLarge { n, max, exhaustive: false }),
            _ => Ok(()),
        },
        _ => Ok(()),
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Record {
    pub check: &'static str,
    pub case: String,
    pub pass: bool,
    /// Elementary comparisons made for this case.
    pub checks: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<Value>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Summary {
    pub summary: bool,
    pub check: &'static str,
    pub cases: usize,
    pub failed: usize,
    pub checks: usize,
    pub pass: bool,
}

pub struct Report {
    pub records: Vec<Record>,
    pub summary: Summary,
}

impl Report {
    /// JSON lines: one per case, then the summary.
    pub fn to_json_lines(&self) -> String {
        let mut out = String::new();
        for r in &self.records {
            out.push_str(&serde_json::to_string(r).expect("records serialize"));
            out.push('\n');
        }
        out.push_str(&serde_json::to_string(&self.summary).expect("summary serializes"));
        out.push('\n');
        out
    }
}

type CaseResult = (usize, Option<Value>);

fn mizuno(w: &Perm) -> CaseResult {
    let expect = match ideal_of(w) {
        Ok(e) => e,
        Err(e) => return (0, Some(json!({ "error": e.to_string() }))),
    };
    let words = match all_reduced_words(w) {
        Ok(ws) => ws,
        Err(e) => return (0, Some(json!({ "error": e.to_string() }))),
    };
    let count = words.len();
    for word in words {
        match ideal_via_word(&word, w.n()) {
            Ok(got) if got == expect => {}
            Ok(got) => return (count, Some(json!({ "word": word.to_string(), "expected": expect, "got": got }))),
            Err(e) => return (count, Some(json!({ "word": word.to_string(), "error": e.to_string() }))),
        }
    }
    (count, None)
}

fn taurigid(w: &Perm) -> CaseResult {
    let n = w.n();
    let calls = n.saturating_sub(1).pow(2);
    match tau_rigidity_failures(w) {
        Ok(bad) if bad.is_empty() => (calls, None),
        Ok(bad) => {
            let homs: Vec<Value> = bad.iter().map(|&(i, j, d)| json!({ "i": i, "j": j, "dim": d })).collect();
            (calls, Some(json!({ "nonzero_hom": homs })))
        }
        Err(e) => (calls, Some(json!({ "error": e.to_string() }))),
    }
}

fn bridge(w: &Perm) -> CaseResult {
    let n = w.n();
    let mut bad = Vec::new();
    for i in 1..n {
        match finite_vs_continuous(w, i) {
            Ok(true) => {}
            Ok(false) => bad.push(json!({ "i": i })),
            Err(e) => bad.push(json!({ "i": i, "error": e.to_string() })),
        }
    }
    let checks = n.saturating_sub(1);
    (checks, (!bad.is_empty()).then(|| json!({ "mismatched_summands": bad })))
}

fn bruhat(u: &Perm, all: &[Perm]) -> CaseResult {
    let mu = GridPermuton::<Rat>::from_perm(u);
    for v in all {
        let discrete = match bruhat_leq(u, v) {
            Ok(b) => b,
            Err(e) => return (all.len(), Some(json!({ "v": v.to_string(), "error": e.to_string() }))),
        };
        let continuous = permuton_bruhat_leq(&mu, &GridPermuton::from_perm(v));
        if discrete != continuous {
            return (
                all.len(),
                Some(json!({ "v": v.to_string(), "bruhat_leq": discrete, "permuton_leq": continuous })),
            );
        }
    }
    (all.len(), None)
}

fn grid_points(g: usize) -> Vec<Rat> {
    (1..g as i64).map(|t| Rat::ratio(t, g as i64)).collect()
}

fn twosided(mu: &GridPermuton, g: usize) -> CaseResult {
    let grid = grid_points(g);
    let mut checks = 0;
    for p in &grid {
        let fp = match mu.boundary_function(p) {
            Ok(f) => f,
            Err(e) => return (checks, Some(json!({ "p": p.to_string(), "error": e.to_string() }))),
        };
        for qv in &grid {
            checks += 1;
            let acted = mu.boundary_function(qv).map_err(|e| e.to_string()).and_then(|fq| {
                left_act(&fq, p).map_err(|e| e.to_string())
            });
            match acted {
                Ok(a) if fp.func().pointwise_leq(a.func()) => {}
                Ok(a) => {
                    return (checks, Some(json!({ "p": p.to_string(), "q": qv.to_string(), "f_p": fp, "acted": a })))
                }
                Err(e) => return (checks, Some(json!({ "p": p.to_string(), "q": qv.to_string(), "error": e }))),
            }
        }
    }
    (checks, None)
}

fn homvanish(mu: &GridPermuton, g: usize) -> CaseResult {
    let grid = grid_points(g);
    let mut checks = 0;
    for a in &grid {
        for b in &grid {
            checks += 1;
            if let Err(e) = tau_rigidity_cert(mu, a, b) {
                return (checks, Some(json!({ "a": a.to_string(), "b": b.to_string(), "error": e.to_string() })));
            }
        }
    }
    // the discretized ideal must be tau-rigid as well
    let ideal = PermutonIdeal::new(mu.clone());
    let m = mu.m();
    for n in (m..=max_n()).filter(|n| n % m == 0) {
        let summands = match discretize_ideal(&ideal, n) {
            Ok(s) => s,
            Err(e) => return (checks, Some(json!({ "n": n, "error": e.to_string() }))),
        };
        for (a, da) in summands.iter().enumerate() {
            let at = Rat::ratio(a as i64 + 1, n as i64);
            if let Ok(exact) = ideal.summand(&at).map_err(|e| e.to_string()).and_then(|d| discretize(&d, n).map_err(|e| e.to_string())) {
                if exact != *da {
                    return (checks, Some(json!({ "n": n, "a": at.to_string(), "exact": exact, "discretized": da })));
                }
            }
            let rep = da.to_rep::<Rat>();
            for (b, db) in summands.iter().enumerate() {
                checks += 1;
                let h = tau_sub(db).and_then(|t| hom_dim(&rep, &t.to_rep::<Rat>()));
                match h {
                    Ok(0) => {}
                    Ok(h) => {
                        return (checks, Some(json!({ "n": n, "a": a + 1, "b": b + 1, "dim_hom": h })));
                    }
                    Err(e) => return (checks, Some(json!({ "n": n, "a": a + 1, "b": b + 1, "error": e.to_string() }))),
                }
            }
        }
    }
    (checks, None)
}

/// Runs `name` over `scope`; `grid` is the denominator used by the
/// permuton checks.
pub fn run(name: CheckName, scope: &Scope, grid: Option<usize>) -> Result<Report, ScopeError> {
    guard(scope)?;
    let grid = grid.unwrap_or(name.default_grid());
    if grid < 2 {
        return Err(ScopeError::Unsupported("--grid must be at least 2".into()));
    }
    let cases: Vec<(String, Option<Perm>, GridPermuton)> = match scope {
        Scope::All(n) => Perm::all(*n).into_iter().map(|w| (w.to_string(), Some(w.clone()), GridPermuton::from_perm(&w))).collect(),
        Scope::Perms(ws) => ws.iter().map(|w| (w.to_string(), Some(w.clone()), GridPermuton::from_perm(w))).collect(),
        Scope::Permutons(ps) => {
            if !name.uses_permutons() {
                return Err(ScopeError::Unsupported(format!("{name} runs over permutations, not permuton files")));
            }
            ps.iter().map(|(label, mu)| (label.clone(), None, mu.clone())).collect()
        }
    };
    let bruhat_all: Vec<Perm> = match (name, scope) {
        (CheckName::Bruhat, Scope::All(n)) => Perm::all(*n),
        (CheckName::Bruhat, Scope::Perms(ws)) => {
            let sizes: std::collections::BTreeSet<usize> = ws.iter().map(Perm::n).collect();
            if sizes.len() > 1 {
                return Err(ScopeError::Unsupported("bruhat needs permutations of one size".into()));
            }
            sizes.into_iter().next().map(Perm::all).unwrap_or_default()
        }
        _ => Vec::new(),
    };
    let records: Vec<Record> = cases
        .par_iter()
        .map(|(label, w, mu)| {
            let (checks, counterexample) = match (name, w) {
                (CheckName::Mizuno, Some(w)) => mizuno(w),
                (CheckName::Taurigid, Some(w)) => taurigid(w),
                (CheckName::Bridge, Some(w)) => bridge(w),
                (CheckName::Bruhat, Some(w)) => bruhat(w, &bruhat_all),
                (CheckName::Twosided, _) => twosided(mu, grid),
                (CheckName::Homvanish, _) => homvanish(mu, grid),
                (_, None) => unreachable!("permuton scopes are rejected above"),
            };
            Record { check: name.as_str(), case: label.clone(), pass: counterexample.is_none(), checks, counterexample }
        })
        .collect();
    let failed = records.iter().filter(|r| !r.pass).count();
    let summary = Summary {
        summary: true,
        check: name.as_str(),
        cases: records.len(),
        failed,
        checks: records.iter().map(|r| r.checks).sum(),
        pass: failed == 0,
    };
    Ok(Report { records, summary })
}
