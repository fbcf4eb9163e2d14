//! SVG output and the optimize result document.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt::Write as _;

use serde::Serialize;

use crate::aux_graph::Mode;
use crate::geom::norm_pi;
use crate::model::{Drawing, DrawingDocument, ZonePartition};
use crate::numfmt::{fmt_sig, round_sig, SIG_DIGITS};
use crate::pipeline::{Comparison, Optimized};
use crate::solver::SolverKind;
use crate::verify::VerifyReport;

#[derive(Clone, Copy, Debug, Default)]
pub struct SvgOptions {
    /// Color each edge by its direction modulo π.
    pub color_zones: bool,
}

/// Axis-aligned box with a 5% margin (relative to the larger side).
fn view_box(d: &Drawing) -> (f64, f64, f64, f64) {
    let xs = d.vertices.iter().map(|v| v.pos.x);
    let ys = d.vertices.iter().map(|v| v.pos.y);
    let (x0, x1) = (xs.clone().fold(f64::INFINITY, f64::min), xs.fold(f64::NEG_INFINITY, f64::max));
    let (y0, y1) = (ys.clone().fold(f64::INFINITY, f64::min), ys.fold(f64::NEG_INFINITY, f64::max));
    let size = (x1 - x0).max(y1 - y0);
    let size = if size > 0.0 { size } else { 1.0 };
    let m = 0.05 * size;
    (x0 - m, y0 - m, x1 - x0 + 2.0 * m, y1 - y0 + 2.0 * m)
}

/// Straight-line SVG of `d`. The y axis is mirrored inside the bounding box
/// so the picture is upright while the view box matches the coordinates.
pub fn render_svg(d: &Drawing, opts: SvgOptions) -> String {
    let (vx, vy, vw, vh) = view_box(d);
    let flip = |y: f64| (vy + vh) - (y - vy);
    let stroke = round_sig(0.005 * vw.max(vh), 3);
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="{} {} {} {}">"#,
        fmt_sig(vx, SIG_DIGITS),
        fmt_sig(vy, SIG_DIGITS),
        fmt_sig(vw, SIG_DIGITS),
        fmt_sig(vh, SIG_DIGITS)
    );
    let _ = writeln!(
        out,
        r#"<g fill="none" stroke="black" stroke-width="{}" stroke-linecap="round">"#,
        fmt_sig(stroke, SIG_DIGITS)
    );
    for &[a, b] in &d.edges {
        let (p, q) = (d.pos(a), d.pos(b));
        let color = if opts.color_zones {
            let hue = (norm_pi(q.sub(p).angle()) / PI * 360.0).round() as i64 % 360;
            format!(r#" stroke="hsl({hue},80%,40%)""#)
        } else {
            String::new()
        };
        let _ = writeln!(
            out,
            r#"<line x1="{}" y1="{}" x2="{}" y2="{}"{color}/>"#,
            fmt_sig(p.x, SIG_DIGITS),
            fmt_sig(flip(p.y), SIG_DIGITS),
            fmt_sig(q.x, SIG_DIGITS),
            fmt_sig(flip(q.y), SIG_DIGITS)
        );
    }
    out.push_str("</g>\n</svg>\n");
    out
}

#[derive(Serialize)]
struct CertificateDoc {
    constraints_hold: bool,
    worst_violation: f64,
    probe_lambda: f64,
    negative_cycle_at_probe: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    witness_ratio: Option<f64>,
}

/// JSON document written by `optimize`.
#[derive(Serialize)]
pub struct ResultDocument {
    lambda_star: f64,
    mode: Mode,
    solver: SolverKind,
    iterations: usize,
    resolution_in: f64,
    resolution_out: Option<f64>,
    zone_rotations: BTreeMap<usize, f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    lambda_star_safe: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    lambda_star_unsafe: Option<f64>,
    certificate: CertificateDoc,
    drawing: DrawingDocument,
    checks: VerifyReport,
}

fn r(x: f64) -> f64 {
    round_sig(x, SIG_DIGITS)
}

impl ResultDocument {
    pub fn new(run: &Optimized, zones: &ZonePartition, comparison: Option<&Comparison>) -> Self {
        let cert = &run.certificate;
        ResultDocument {
            lambda_star: r(run.lambda_star()),
            mode: run.mode,
            solver: run.solution.solver,
            iterations: run.solution.iterations,
            resolution_in: r(run.resolution_in),
            resolution_out: run.report.resolution,
            zone_rotations: run.rotations().iter().map(|&d| r(d)).enumerate().collect(),
            lambda_star_safe: comparison.map(|c| r(c.safe.lambda_star())),
            lambda_star_unsafe: comparison.map(|c| r(c.unsafe_.lambda_star())),
            certificate: CertificateDoc {
                constraints_hold: cert.constraints_hold,
                worst_violation: r(cert.worst_violation),
                probe_lambda: r(cert.probe_lambda),
                negative_cycle_at_probe: cert.witness.is_some(),
                witness_ratio: cert.witness.as_ref().and_then(|w| w.ratio()).map(r),
            },
            drawing: DrawingDocument::from_drawing(&run.output, Some(zones)),
            checks: run.report.clone(),
        }
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(self).expect("result document serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{gen_grid, gen_polygon, skew};
    use crate::model::{FaceSymmetricDrawing, IngestConfig};
    use crate::pipeline::{optimize, OptimizeOptions};

    #[test]
    fn square_svg() {
        let svg = render_svg(&gen_polygon(2).unwrap(), SvgOptions::default());
        assert!(svg.contains(r#"viewBox="-0.05 -0.05 1.1 1.1""#), "{svg}");
        assert_eq!(svg.matches("<line ").count(), 4);
        // (0,0)-(1,0) is drawn along the bottom
        assert!(svg.contains(r#"<line x1="0" y1="1" x2="1" y2="1"/>"#), "{svg}");
    }

    #[test]
    fn zone_colors() {
        let svg = render_svg(&gen_polygon(3).unwrap(), SvgOptions { color_zones: true });
        for hue in ["hsl(0,", "hsl(120,", "hsl(240,"] {
            assert_eq!(svg.matches(hue).count(), 2, "{hue}");
        }
    }

    #[test]
    fn result_document_fields() {
        let fsd = FaceSymmetricDrawing::ingest(skew(&gen_grid(1, 1).unwrap(), 0.5).unwrap(), &IngestConfig::default())
            .unwrap();
        let run = optimize(&fsd, &OptimizeOptions::default()).unwrap();
        let json = ResultDocument::new(&run, &fsd.zones, None).to_json_pretty();
        let v: serde_json::Value = serde_json::from_str(&json).unwrap();
        assert!((v["lambda_star"].as_f64().unwrap() - std::f64::consts::FRAC_PI_2).abs() < 1e-9);
        assert_eq!(v["mode"], "safe");
        assert_eq!(v["solver"], "bisect");
        assert_eq!(v["checks"]["planarity"]["status"], "pass");
        assert!(v["zone_rotations"]["1"].is_number());
        assert!(v.get("lambda_star_safe").is_none());
        assert!(json.starts_with("{\n  \"lambda_star\""));
        assert_eq!(json, ResultDocument::new(&run, &fsd.zones, None).to_json_pretty());
    }
}
