//! Deterministic SVG pictures of curves over diamonds.
//!
//! Each panel is a unit square drawn at 1000 user units, with `x` to the
//! right and `y` (the length from the top vertex) growing downwards, so a
//! boundary function is plotted as `(x, f(x))` without any flip.

use std::fmt::Write as _;

use preproj_core::plfunc::{BFunc, PlFunc};
use preproj_core::preproj_fin::{CurveKind, CurveModule};
use preproj_core::sheets_bricks::Sheet;
use num_traits::ToPrimitive;
use preproj_core::{Rat, Scalar};
use serde::{Deserialize, Serialize};

const UNIT: f64 = 1000.0;
const GAP: f64 = 100.0;
const MARGIN: f64 = 40.0;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RenderSpec {
    #[serde(default = "default_width")]
    pub width_px: u32,
    pub items: Vec<RenderItem>,
}

fn default_width() -> u32 {
    1000
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RenderItem {
    #[serde(flatten)]
    pub object: RenderObject,
    #[serde(default)]
    pub style: Style,
    /// Panel index, left to right. Items sharing a panel are overlaid.
    #[serde(default)]
    pub panel: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum RenderObject {
    Curve { module: CurveModule },
    Bfunc { bfunc: BFunc },
    Sheet { sheet: Sheet },
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Style {
    #[default]
    Bold,
    Thin,
    Dashed,
    Grey,
}

impl Style {
    fn stroke(self) -> &'static str {
        match self {
            Style::Bold => r##"stroke="#000" stroke-width="8""##,
            Style::Thin => r##"stroke="#000" stroke-width="3""##,
            Style::Dashed => r##"stroke="#000" stroke-width="3" stroke-dasharray="20,14""##,
            Style::Grey => r##"stroke="#999" stroke-width="3""##,
        }
    }
}

fn num(v: f64) -> String {
    let s = format!("{v:.2}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" {
        "0".into()
    } else {
        s.into()
    }
}

fn coord(x: &Rat, y: &Rat) -> String {
    let f = |v: &Rat| v.to_f64().unwrap_or(0.0) * UNIT;
    format!("{},{}", num(f(x)), num(f(y)))
}

fn path(points: &[(Rat, Rat)], closed: bool) -> String {
    let mut d = String::new();
    for (t, (x, y)) in points.iter().enumerate() {
        d.push_str(if t == 0 { "M" } else { " L" });
        d.push_str(&coord(x, y));
    }
    if closed {
        d.push_str(" Z");
    }
    d
}

/// Corners of the diamond of `P_k`: top, right, bottom, left.
fn diamond(k: &Rat) -> Vec<(Rat, Rat)> {
    let one = Rat::int(1);
    vec![
        (k.clone(), Rat::int(0)),
        (one.clone(), one.clone() - k.clone()),
        (one.clone() - k.clone(), one.clone()),
        (Rat::int(0), k.clone()),
    ]
}

/// The bottom border of `P_k`, left to right.
fn bottom_border(k: &Rat) -> Vec<(Rat, Rat)> {
    let one = Rat::int(1);
    vec![(Rat::int(0), k.clone()), (one.clone() - k.clone(), one.clone()), (one.clone(), one.clone() - k.clone())]
}

fn top_border(k: &Rat) -> Vec<(Rat, Rat)> {
    let one = Rat::int(1);
    vec![(Rat::int(0), k.clone()), (k.clone(), Rat::int(0)), (one.clone(), one - k.clone())]
}

/// Points of `f` restricted to `[lo, hi]`, left to right.
fn restricted(f: &PlFunc, lo: &Rat, hi: &Rat) -> Vec<(Rat, Rat)> {
    f.values_on(lo, hi)
}

fn draw_diamond(out: &mut String, k: &Rat) {
    let _ = writeln!(out, r##"    <path d="{}" fill="none" stroke="#999" stroke-width="3"/>"##, path(&diamond(k), true));
}

fn shade(out: &mut String, region: &[(Rat, Rat)]) {
    let _ = writeln!(
        out,
        r##"    <path d="{}" fill="#3050c0" fill-opacity="0.25" stroke="none"/>"##,
        path(region, true)
    );
}

fn stroke(out: &mut String, points: &[(Rat, Rat)], style: Style) {
    let _ = writeln!(out, r#"    <path d="{}" fill="none" {}/>"#, path(points, false), style.stroke());
}

/// Region between `upper` (smaller values) and `lower`, both left to right.
fn between(upper: &[(Rat, Rat)], lower: &[(Rat, Rat)]) -> Vec<(Rat, Rat)> {
    upper.iter().cloned().chain(lower.iter().rev().cloned()).collect()
}

fn draw_bfunc(out: &mut String, b: &BFunc, kind: CurveKind, style: Style) {
    let k = b.k();
    draw_diamond(out, k);
    let curve = b.func().breakpoints().to_vec();
    match kind {
        CurveKind::SubOfProjective if !b.is_bottom() => shade(out, &between(&curve, &bottom_border(k))),
        CurveKind::QuotientOfProjective if !b.is_top() => shade(out, &between(&top_border(k), &curve)),
        _ => {}
    }
    stroke(out, &curve, style);
}

fn draw_item(out: &mut String, item: &RenderItem) {
    match &item.object {
        RenderObject::Curve { module } => {
            let k = Rat::ratio(module.i() as i64, module.n() as i64);
            let b = BFunc::new(k, module.curve().to_plfunc()).expect("diamond curves are boundary functions");
            draw_bfunc(out, &b, module.kind(), item.style);
        }
        RenderObject::Bfunc { bfunc } => draw_bfunc(out, bfunc, CurveKind::SubOfProjective, item.style),
        RenderObject::Sheet { sheet } => {
            draw_diamond(out, sheet.k());
            for (lo, hi) in sheet.support() {
                let up = restricted(sheet.up().func(), &lo, &hi);
                let down = restricted(sheet.down().func(), &lo, &hi);
                shade(out, &between(&up, &down));
            }
            stroke(out, sheet.up().func().breakpoints(), item.style);
            stroke(out, sheet.down().func().breakpoints(), item.style);
        }
    }
}

/// The SVG document for `spec`; identical input gives identical bytes.
pub fn render_svg(spec: &RenderSpec) -> String {
    let panels = spec.items.iter().map(|i| i.panel + 1).max().unwrap_or(1);
    let view_w = 2.0 * MARGIN + panels as f64 * UNIT + (panels - 1) as f64 * GAP;
    let view_h = 2.0 * MARGIN + UNIT;
    let height = (spec.width_px as f64 * view_h / view_w).round() as u64;
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{}" height="{height}" viewBox="{} {} {} {}">"#,
        spec.width_px,
        num(-MARGIN),
        num(-MARGIN),
        num(view_w),
        num(view_h)
    );
    for p in 0..panels {
        let _ = writeln!(out, r#"  <g transform="translate({},0)">"#, num(p as f64 * (UNIT + GAP)));
        for item in spec.items.iter().filter(|i| i.panel == p) {
            draw_item(&mut out, item);
        }
        out.push_str("  </g>\n");
    }
    out.push_str("</svg>\n");
    out
}

/// One panel per summand of an ideal: the full diamond in grey and the
/// ideal's curve in bold.
pub fn ideal_spec(summands: &[CurveModule], width_px: u32) -> RenderSpec {
    let items = summands
        .iter()
        .enumerate()
        .map(|(p, m)| RenderItem { object: RenderObject::Curve { module: m.clone() }, style: Style::Bold, panel: p })
        .collect();
    RenderSpec { width_px, items }
}
