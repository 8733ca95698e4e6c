//! Library side of the `preproj` command: each subcommand is a function from
//! parsed inputs to a JSON value, so it can be tested without a process.

pub mod checks;
pub mod render;

use std::path::Path;

use anyhow::{bail, Context, Result};
use preproj_core::cont_ideal::{ideal_leq, PermutonIdeal};
use preproj_core::permuton::{permuton_bruhat_leq, GridPermuton};
use preproj_core::plfunc::BFunc;
use preproj_core::preproj_fin::{hom_dim, ideal_of, CurveKind, QuiverRep};
use preproj_core::sheets_bricks::{
    b_interval, codependence_class, cone_contains, decorous_cover, elementary_exists, in_range_of_codependence,
    is_brick, is_deep, multi_elementary_families, GeneratorSet, Interval, ModuleDesc, Sheet,
};
use preproj_core::symgroup::{bruhat_leq, Perm};
use preproj_core::{Rat, Scalar};
use serde::de::DeserializeOwned;
use serde::Deserialize;
use serde_json::{json, Value};

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}

/// A permutation as digits (`25341`) or a list (`[2,5,3,4,1]`).
pub fn parse_perm(s: &str) -> Result<Perm> {
    Ok(Perm::parse(s)?)
}

pub fn parse_rat(s: &str) -> Result<Rat> {
    Rat::parse_text(s).with_context(|| format!("cannot parse {s:?} as a rational"))
}

/// Comma-separated rationals, e.g. `1/2,1/5`.
pub fn parse_rats(s: &str) -> Result<Vec<Rat>> {
    s.split(',').map(|t| parse_rat(t.trim())).collect()
}

fn rat_list<const N: usize>(s: &str, what: &str) -> Result<[Rat; N]> {
    let v = parse_rats(s)?;
    let len = v.len();
    v.try_into().map_err(|_| anyhow::anyhow!("{what} takes {N} comma-separated values, got {len}"))
}

/// The summands of `I_w`, each flagged zero or full.
pub fn ideal_perm(w: &Perm) -> Result<Value> {
    let summands = ideal_of(w)?;
    let items: Vec<Value> = summands
        .iter()
        .enumerate()
        .map(|(t, m)| {
            json!({
                "i": t + 1,
                "zero": m.is_zero(),
                "full": m.kind() == CurveKind::SubOfProjective && m.curve().is_top(),
                "module": m,
            })
        })
        .collect();
    Ok(json!({ "perm": w.to_string(), "n": w.n(), "summands": items }))
}

pub fn ideal_permuton(mu: &GridPermuton, at: &Rat) -> Result<BFunc> {
    Ok(PermutonIdeal::new(mu.clone()).summand(at)?.b)
}

fn order_json(leq: bool, geq: bool) -> Value {
    json!({ "leq": leq, "geq": geq, "comparable": leq || geq })
}

pub fn order_bruhat(u: &Perm, v: &Perm) -> Result<Value> {
    Ok(order_json(bruhat_leq(u, v)?, bruhat_leq(v, u)?))
}

pub fn order_permuton(a: &GridPermuton, b: &GridPermuton) -> Value {
    order_json(permuton_bruhat_leq(a, b), permuton_bruhat_leq(b, a))
}

/// Inclusion of permuton ideals: `leq` means `I_A ⊆ I_B`.
pub fn order_ideal(a: &GridPermuton, b: &GridPermuton) -> Value {
    let (ia, ib) = (PermutonIdeal::new(a.clone()), PermutonIdeal::new(b.clone()));
    order_json(ideal_leq(&ia, &ib), ideal_leq(&ib, &ia))
}

fn finite_report(rep: &QuiverRep) -> Result<(usize, bool)> {
    Ok((hom_dim(rep, rep)?, is_deep(rep)))
}

pub fn brick_check(desc: &ModuleDesc) -> Result<Value> {
    let brick = is_brick(desc)?;
    let mut out = json!({ "brick": brick });
    match desc {
        ModuleDesc::Simple { .. } => {
            out["end_dim"] = json!(1);
            out["deep"] = json!(false);
        }
        ModuleDesc::Sawtooth(st) => {
            out["deep"] = json!(false);
            out["decorous_cover"] = match decorous_cover(st) {
                Ok(b) => json!(b),
                Err(e) => json!({ "error": e.to_string() }),
            };
        }
        ModuleDesc::CurveBacked(m) => {
            let (end, deep) = finite_report(&m.to_rep())?;
            out["end_dim"] = json!(end);
            out["deep"] = json!(deep);
        }
        ModuleDesc::SheetBacked(g) => {
            let (end, deep) = finite_report(&g.to_rep()?)?;
            out["end_dim"] = json!(end);
            out["deep"] = json!(deep);
        }
    }
    Ok(out)
}

/// A single sheet, or a source and target for the morphism queries.
#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
pub enum SheetInput {
    Pair { source: Sheet, target: Sheet },
    Single(Sheet),
}

impl SheetInput {
    fn pair(&self) -> (&Sheet, &Sheet) {
        match self {
            SheetInput::Pair { source, target } => (source, target),
            SheetInput::Single(s) => (s, s),
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct SheetQueries {
    /// `y,a` for the interval `B_a(y)`, or `y,a,z,b` for cone membership.
    pub cone: Option<Vec<Rat>>,
    pub codep: Option<[Rat; 2]>,
    pub range: Option<[Rat; 3]>,
    pub multi: Option<Vec<Rat>>,
}

impl SheetQueries {
    pub fn parse(cone: Option<&str>, codep: Option<&str>, range: Option<&str>, multi: Option<&str>) -> Result<Self> {
        let cone = cone.map(parse_rats).transpose()?;
        if let Some(c) = &cone {
            if c.len() != 2 && c.len() != 4 {
                bail!("--cone takes y,a or y,a,z,b");
            }
        }
        Ok(Self {
            cone,
            codep: codep.map(|s| rat_list(s, "--codep")).transpose()?,
            range: range.map(|s| rat_list(s, "--range")).transpose()?,
            multi: multi.map(parse_rats).transpose()?,
        })
    }
}

fn interval_json(iv: &Interval) -> Value {
    json!({
        "lo": iv.lo.to_string(),
        "hi": iv.hi.to_string(),
        "lo_closed": iv.lo_closed,
        "hi_closed": iv.hi_closed,
    })
}

fn generators_json(g: &GeneratorSet) -> Value {
    Value::Array(g.pieces().iter().map(interval_json).collect())
}

fn pair_json(p: &(Rat, Rat)) -> Value {
    json!([p.0.to_string(), p.1.to_string()])
}

fn describe(s: &Sheet) -> Value {
    json!({
        "k": s.k().to_string(),
        "zero": s.is_zero(),
        "deep": !s.is_zero(),
        "support": s.support().iter().map(pair_json).collect::<Vec<_>>(),
        "generators": generators_json(&s.generators()),
        "finitely_generated": s.generators().is_finite(),
    })
}

pub fn sheet_analyze(input: &SheetInput, queries: &SheetQueries) -> Result<Value> {
    let (s, sp) = input.pair();
    let mut out = match input {
        SheetInput::Single(s) => describe(s),
        SheetInput::Pair { source, target } => json!({ "source": describe(source), "target": describe(target) }),
    };
    if let Some(c) = &queries.cone {
        let (y, a) = (&c[0], &c[1]);
        out["cone"] = if let [_, _, z, b] = c.as_slice() {
            json!({ "y": y.to_string(), "a": a.to_string(), "z": z.to_string(), "b": b.to_string(),
                    "contains": cone_contains(s, sp, y, a, z, b) })
        } else {
            let interval = b_interval(s, sp, y, a)?;
            let elementary = if s.generators().contains(y) { Some(elementary_exists(s, sp, y, a)?) } else { None };
            json!({ "y": y.to_string(), "a": a.to_string(),
                    "b_interval": interval.as_ref().map(pair_json),
                    "generator": elementary.is_some(),
                    "elementary": elementary })
        };
    }
    if let Some([y, a]) = &queries.codep {
        let class = codependence_class(s, sp, y, a)?;
        out["codependence"] = json!({ "y": y.to_string(), "a": a.to_string(), "class": generators_json(&class) });
    }
    if let Some([y, a, b]) = &queries.range {
        out["range"] = json!({ "y": y.to_string(), "a": a.to_string(), "b": b.to_string(),
                               "in_range": in_range_of_codependence(s, sp, y, a, b)? });
    }
    if let Some(shifts) = &queries.multi {
        let report = multi_elementary_families(s, sp, shifts)?;
        let candidates: Vec<Value> = report
            .candidates
            .iter()
            .map(|e| json!({ "y": e.y.to_string(), "a": e.a.to_string(), "interval": pair_json(&e.interval) }))
            .collect();
        out["multi"] = json!({ "candidates": candidates, "disjoint_families": report.disjoint_families });
    }
    Ok(out)
}
