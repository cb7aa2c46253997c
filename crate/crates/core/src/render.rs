//! Time-space SVG diagrams: time runs right, rail position runs up.

use std::fmt::Write as _;

use num_traits::{One, Zero};

use crate::model::json::format_q_decimal;
use crate::model::{makespan, validate_schedule, Instance, Mode, Pad, Q, Schedule};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RenderSpec {
    pub width_px: u32,
    pub height_px: u32,
    pub colors: [String; 2],
    pub dashes: [String; 2],
}

impl Default for RenderSpec {
    fn default() -> Self {
        RenderSpec {
            width_px: 800,
            height_px: 400,
            colors: ["#8b5a2b".into(), "#555555".into()],
            dashes: ["none".into(), "6 3".into()],
        }
    }
}

const MARGIN: i64 = 40;

/// Renders a valid schedule; identical inputs give identical bytes.
pub fn render_svg(inst: &Instance, sched: &Schedule, spec: &RenderSpec) -> Result<String> {
    if spec.width_px as i64 <= 2 * MARGIN || spec.height_px as i64 <= 2 * MARGIN {
        return Err(Error::Invalid(format!("canvas must exceed {} px on each side", 2 * MARGIN)));
    }
    let mode = if inst.precedence.is_some() { Mode::Precedence } else { Mode::Preemptive };
    if let Some(v) = validate_schedule(inst, sched, mode).first() {
        return Err(Error::Invalid(format!("refusing to render an invalid schedule: {}", v.message)));
    }
    let (w, h) = (spec.width_px as i64, spec.height_px as i64);
    let span = std::cmp::max(makespan(sched), Q::one());
    let rail = Q::from_integer(std::cmp::max(inst.length, 1));
    let px = |t: Q| Q::from_integer(MARGIN) + t * Q::from_integer(w - 2 * MARGIN) / span;
    let py = |x: Q| Q::from_integer(h - MARGIN) - x * Q::from_integer(h - 2 * MARGIN) / rail;
    let f = |v: Q| format_q_decimal(v, 6);

    let mut out = String::new();
    let _ = writeln!(out, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#);
    let _ = writeln!(out, r#"<rect x="0" y="0" width="{w}" height="{h}" fill="white"/>"#);
    for p in inst.piles() {
        let (fill, opacity) = match p.pad {
            Pad::P1 => ("#d9c6a5", "0.45"),
            Pad::P2 => ("#9fb6cd", "0.35"),
        };
        let (top, bottom) = (py(Q::from_integer(p.r)), py(Q::from_integer(p.l)));
        let _ = writeln!(
            out,
            r#"<rect class="pile" data-pile="{}" data-pad="{}" x="{}" y="{}" width="{}" height="{}" fill="{fill}" fill-opacity="{opacity}"/>"#,
            p.id,
            p.pad,
            f(px(Q::zero())),
            f(top),
            f(px(span) - px(Q::zero())),
            f(bottom - top),
        );
    }
    let (x0, y0, x1, y1) = (f(px(Q::zero())), f(py(Q::zero())), f(px(span)), f(py(rail)));
    let _ = writeln!(out, r#"<line x1="{x0}" y1="{y0}" x2="{x1}" y2="{y0}" stroke="black"/>"#);
    let _ = writeln!(out, r#"<line x1="{x0}" y1="{y0}" x2="{x0}" y2="{y1}" stroke="black"/>"#);
    let _ = writeln!(out, r#"<text x="{x1}" y="{}" font-size="12" text-anchor="end">time {}</text>"#, h - MARGIN / 4, f(span));
    let _ = writeln!(out, r#"<text x="{}" y="{y1}" font-size="12">L = {}</text>"#, MARGIN / 4, inst.length);
    for (k, path) in sched.paths.iter().enumerate() {
        let pts: Vec<String> = path.points.iter().map(|&(t, x)| format!("{},{}", f(px(t)), f(py(x)))).collect();
        let raw: Vec<String> = path.points.iter().map(|&(t, x)| format!("{},{}", t, x)).collect();
        let _ = writeln!(
            out,
            r#"<polyline class="reclaimer" data-reclaimer="R{k}" data-breakpoints="{}" points="{}" fill="none" stroke="{}" stroke-width="2" stroke-dasharray="{}"/>"#,
            raw.join(" "),
            pts.join(" "),
            spec.colors[k],
            spec.dashes[k],
        );
    }
    out.push_str("</svg>\n");
    Ok(out)
}
