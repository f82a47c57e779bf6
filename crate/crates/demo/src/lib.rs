//! Pure operations behind the browser page. Each takes and returns strings so the wasm
//! wrappers stay one-liners.

use std::fmt::Write;

use serde_json::{json, Value};
use sonc_core::circuits::{enumerate_circuits, reznick_cone};
use sonc_core::geometry::vertices_of;
use sonc_core::io;
use sonc_core::rat::{fmt_rat, parse_rat, to_f64};
use sonc_core::subdivision::{subdivide, tropical_complex};
use sonc_core::univariate::{quartic_boundary_test, quartic_pair};
use sonc_core::SupportSet;

const PANEL: f64 = 300.0;
const PAD: f64 = 24.0;

fn parse_support(text: &str) -> Result<SupportSet, String> {
    io::parse_json(text).and_then(io::support_from_json).map_err(|e| e.to_string())
}

/// Circuits of a support as JSON, each flagged with whether it spans an edge of the Reznick cone.
pub fn list_circuits(support: &str) -> Result<String, String> {
    let a = parse_support(support)?;
    let cone = reznick_cone(&a);
    let out: Vec<Value> = enumerate_circuits(&a)
        .into_iter()
        .map(|c| {
            let edge = cone.edge_generators.contains(&c);
            let mut v = serde_json::to_value(&c).expect("circuits serialize");
            v["edge"] = json!(edge);
            v
        })
        .collect();
    Ok(Value::Array(out).to_string())
}

/// Verdict for `1 - 2w1 z + w1^2 z^2 + z^2 (w3^2 - 2w3 z + z^2)` with rational `w1, w3 > 0`.
pub fn classify_quartic(w1: &str, w3: &str) -> Result<String, String> {
    let w1 = parse_rat(w1).map_err(|e| e.to_string())?;
    let w3 = parse_rat(w3).map_err(|e| e.to_string())?;
    let verdict = quartic_boundary_test(&w1, &w3).map_err(|e| e.to_string())?;
    Ok(json!({
        "verdict": verdict,
        "product": fmt_rat(&(&w1 * &w3)),
        "polynomial": quartic_pair(&w1, &w3).to_string(),
    })
    .to_string())
}

struct Frame {
    lo: [f64; 2],
    scale: f64,
    dx: f64,
}

impl Frame {
    fn fit(pts: &[[f64; 2]], dx: f64) -> Frame {
        let mut lo = [f64::INFINITY; 2];
        let mut hi = [f64::NEG_INFINITY; 2];
        for p in pts {
            for k in 0..2 {
                lo[k] = lo[k].min(p[k]);
                hi[k] = hi[k].max(p[k]);
            }
        }
        let span = (hi[0] - lo[0]).max(hi[1] - lo[1]).max(1.0);
        Frame { lo, scale: (PANEL - 2.0 * PAD) / span, dx }
    }

    fn map(&self, p: [f64; 2]) -> (f64, f64) {
        (self.dx + PAD + (p[0] - self.lo[0]) * self.scale, PANEL - PAD - (p[1] - self.lo[1]) * self.scale)
    }
}

fn xy(p: &[sonc_core::Rat]) -> [f64; 2] {
    [to_f64(&p[0]), to_f64(&p[1])]
}

/// Hull vertices of a planar cell in counterclockwise order.
fn polygon(a: &SupportSet, cell: &[usize]) -> Vec<[f64; 2]> {
    let mut v: Vec<[f64; 2]> = vertices_of(a, cell).iter().map(|&i| xy(a.point(i))).collect();
    let c = v.iter().fold([0.0, 0.0], |s, p| [s[0] + p[0], s[1] + p[1]]);
    let c = [c[0] / v.len() as f64, c[1] / v.len() as f64];
    v.sort_by(|p, q| {
        let ap = (p[1] - c[1]).atan2(p[0] - c[0]);
        let aq = (q[1] - c[1]).atan2(q[0] - c[0]);
        ap.total_cmp(&aq)
    });
    v
}

/// Side-by-side SVG of the regular subdivision induced by `weights` and its dual tropical complex.
/// Only planar supports are drawn.
pub fn render_subdivision(support: &str, weights: &str) -> Result<String, String> {
    let a = parse_support(support)?;
    if a.n() != 2 || a.dim() != 2 {
        return Err("drawing needs a full-dimensional planar support".into());
    }
    let w = io::parse_json(weights).and_then(io::weights_from_json).map_err(|e| e.to_string())?;
    if w.len() != a.len() {
        return Err(format!("expected {} weights, got {}", a.len(), w.len()));
    }
    let sub = subdivide(&a, &w).map_err(|e| e.to_string())?;
    let trop = tropical_complex(&a, &w).map_err(|e| e.to_string())?;

    let mut svg = String::new();
    let width = 2.0 * PANEL;
    writeln!(svg, r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {width} {PANEL}" width="{width}" height="{PANEL}">"#).unwrap();
    svg += r##"<rect width="100%" height="100%" fill="#fff"/>"##;
    svg += "\n";

    let pts: Vec<[f64; 2]> = a.points().iter().map(|p| xy(p)).collect();
    let left = Frame::fit(&pts, 0.0);
    for cell in &sub.cells {
        let poly: Vec<String> = polygon(&a, cell)
            .into_iter()
            .map(|p| {
                let (x, y) = left.map(p);
                format!("{x:.2},{y:.2}")
            })
            .collect();
        writeln!(svg, r##"<polygon points="{}" fill="#dde8f5" stroke="#234" stroke-width="1.5"/>"##, poly.join(" ")).unwrap();
    }
    for (i, p) in pts.iter().enumerate() {
        let (x, y) = left.map(*p);
        writeln!(svg, r##"<circle cx="{x:.2}" cy="{y:.2}" r="4" fill="#b22"/><text x="{:.2}" y="{:.2}" font-size="12">{i}</text>"##, x + 6.0, y - 6.0).unwrap();
    }

    let verts: Vec<[f64; 2]> = trop.vertices().flat_map(|c| c.vertices.iter().map(|v| xy(v))).collect();
    let right = Frame::fit(if verts.is_empty() { &[[0.0, 0.0]] } else { &verts }, PANEL);
    let ray_len = (PANEL / 2.0) / right.scale;
    for c in trop.cells.iter().filter(|c| c.dim == 1) {
        let (x1, y1, x2, y2) = match (c.vertices.as_slice(), c.rays.as_slice()) {
            ([u, v], []) => {
                let (x1, y1) = right.map(xy(u));
                let (x2, y2) = right.map(xy(v));
                (x1, y1, x2, y2)
            }
            ([u], [r]) => {
                let (p, d) = (xy(u), xy(r));
                let norm = (d[0] * d[0] + d[1] * d[1]).sqrt();
                let (x1, y1) = right.map(p);
                let (x2, y2) = right.map([p[0] + d[0] / norm * ray_len, p[1] + d[1] / norm * ray_len]);
                (x1, y1, x2, y2)
            }
            _ => continue,
        };
        writeln!(svg, r##"<line x1="{x1:.2}" y1="{y1:.2}" x2="{x2:.2}" y2="{y2:.2}" stroke="#363" stroke-width="2"/>"##).unwrap();
    }
    for v in &verts {
        let (x, y) = right.map(*v);
        writeln!(svg, r##"<circle cx="{x:.2}" cy="{y:.2}" r="4" fill="#363"/>"##).unwrap();
    }
    writeln!(svg, r##"<line x1="{PANEL}" y1="0" x2="{PANEL}" y2="{PANEL}" stroke="#999"/>"##).unwrap();
    svg += "</svg>\n";
    Ok(svg)
}

#[cfg(target_arch = "wasm32")]
mod wasm {
    use wasm_bindgen::prelude::*;

    #[wasm_bindgen(js_name = listCircuits)]
    pub fn list_circuits(support: &str) -> Result<String, JsValue> {
        super::list_circuits(support).map_err(|e| JsValue::from_str(&e))
    }

    #[wasm_bindgen(js_name = classifyQuartic)]
    pub fn classify_quartic(w1: &str, w3: &str) -> Result<String, JsValue> {
        super::classify_quartic(w1, w3).map_err(|e| JsValue::from_str(&e))
    }

    #[wasm_bindgen(js_name = renderSubdivision)]
    pub fn render_subdivision(support: &str, weights: &str) -> Result<String, JsValue> {
        super::render_subdivision(support, weights).map_err(|e| JsValue::from_str(&e))
    }
}
