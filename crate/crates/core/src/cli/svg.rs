//! SVG view of the valuation envelope.
//!
//! Horizontal axis `s = v(z)`, vertical axis `V_f(s)`. Each piece is a line
//! labeled with its slope (the dominant exponent); each corner is a marked
//! circle labeled with `s0`, the Newton slope `-s0` and the sharpness.

use std::fmt::Write as _;

use num_rational::BigRational;
use num_traits::ToPrimitive;

use crate::polygon::{NewtonPolygon, Piece, ValuationEnvelope};
use crate::series::int;

const LEFT: f64 = 60.0;
const RIGHT: f64 = 740.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 540.0;

fn fixed(x: f64) -> String {
    let s = format!("{x:.3}");
    if s == "-0.000" {
        "0.000".into()
    } else {
        s
    }
}

fn float(x: &BigRational) -> f64 {
    x.to_f64().expect("finite rational")
}

/// Finite horizontal extent: the range, or one unit beyond the outermost
/// corners on an unbounded side.
fn extent(env: &ValuationEnvelope) -> (BigRational, BigRational) {
    let first = env.corners.first().map(|c| c.s0.clone());
    let last = env.corners.last().map(|c| c.s0.clone());
    let lo = env.range.lo().cloned().unwrap_or_else(|| {
        let anchor = first.clone().or(env.range.hi().cloned()).unwrap_or(int(0));
        anchor - int(1)
    });
    let hi = env.range.hi().cloned().unwrap_or_else(|| {
        let anchor = last.or(env.range.lo().cloned()).unwrap_or(int(0));
        anchor + int(1)
    });
    (lo, hi)
}

pub fn emit_polygon_svg(envelope: &ValuationEnvelope, polygon: &NewtonPolygon) -> String {
    let (lo, hi) = extent(envelope);
    let segments: Vec<(BigRational, BigRational, &Piece)> = envelope
        .pieces
        .iter()
        .map(|p| {
            let a = p.start.clone().unwrap_or_else(|| lo.clone());
            let b = p.end.clone().unwrap_or_else(|| hi.clone());
            (a, b, p)
        })
        .collect();

    let values: Vec<f64> = segments
        .iter()
        .flat_map(|(a, b, p)| [float(&p.value_at(a)), float(&p.value_at(b))])
        .collect();
    let vmin = values.iter().cloned().fold(f64::INFINITY, f64::min);
    let vmax = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let (vlo, vhi) = if vmax > vmin {
        let pad = (vmax - vmin) * 0.1;
        (vmin - pad, vmax + pad)
    } else {
        (vmin - 1.0, vmax + 1.0)
    };
    let (slo, shi) = (float(&lo), float(&hi));
    let sspan = if shi > slo { shi - slo } else { 1.0 };
    let x = |s: f64| LEFT + (s - slo) / sspan * (RIGHT - LEFT);
    let y = |v: f64| BOTTOM - (v - vlo) / (vhi - vlo) * (BOTTOM - TOP);

    let mut out = String::new();
    out.push_str(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" height=\"600\" viewBox=\"0 0 800 600\">\n",
    );
    writeln!(out, "<rect width=\"800\" height=\"600\" fill=\"white\"/>").unwrap();
    writeln!(
        out,
        "<rect class=\"frame\" x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"none\" stroke=\"#999999\"/>",
        fixed(LEFT),
        fixed(TOP),
        fixed(RIGHT - LEFT),
        fixed(BOTTOM - TOP)
    )
    .unwrap();
    writeln!(
        out,
        "<text class=\"axis\" x=\"{}\" y=\"{}\" font-size=\"12\">s = {lo}</text>",
        fixed(LEFT),
        fixed(BOTTOM + 20.0)
    )
    .unwrap();
    writeln!(
        out,
        "<text class=\"axis\" x=\"{}\" y=\"{}\" font-size=\"12\" text-anchor=\"end\">s = {hi}</text>",
        fixed(RIGHT),
        fixed(BOTTOM + 20.0)
    )
    .unwrap();

    for (a, b, p) in &segments {
        let (x1, y1) = (x(float(a)), y(float(&p.value_at(a))));
        let (x2, y2) = (x(float(b)), y(float(&p.value_at(b))));
        writeln!(
            out,
            "<line class=\"piece\" x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"#1f4e79\" stroke-width=\"2\"/>",
            fixed(x1),
            fixed(y1),
            fixed(x2),
            fixed(y2)
        )
        .unwrap();
        writeln!(
            out,
            "<text class=\"slope\" x=\"{}\" y=\"{}\" font-size=\"12\" text-anchor=\"middle\">slope {}</text>",
            fixed((x1 + x2) / 2.0),
            fixed((y1 + y2) / 2.0 - 8.0),
            p.exponent
        )
        .unwrap();
    }

    for c in &envelope.corners {
        let (cx, cy) = (x(float(&c.s0)), y(float(&c.value)));
        writeln!(
            out,
            "<circle class=\"corner\" cx=\"{}\" cy=\"{}\" r=\"5\" fill=\"#c0392b\"/>",
            fixed(cx),
            fixed(cy)
        )
        .unwrap();
        let newton = polygon
            .segments
            .iter()
            .find(|s| s.root_valuation() == c.s0)
            .map(|s| format!(", newton slope {}", s.slope))
            .unwrap_or_default();
        writeln!(
            out,
            "<text class=\"corner-label\" x=\"{}\" y=\"{}\" font-size=\"12\">s0 = {}{newton}, sharpness {}</text>",
            fixed(cx + 8.0),
            fixed(cy + 16.0),
            c.s0,
            c.sharpness
        )
        .unwrap();
    }
    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polygon::{newton_polygon, valuation_envelope};
    use crate::series::{LaurentSeries, ValRange};
    use crate::valuation::PrimeContext;

    fn render(p: u64, cs: &[i64], lo: i64, hi: i64) -> String {
        let f = LaurentSeries::polynomial(PrimeContext::new(p).unwrap(), cs);
        let env = valuation_envelope(&f, &ValRange::closed(int(lo), int(hi)).unwrap()).unwrap();
        emit_polygon_svg(&env, &newton_polygon(&f).unwrap())
    }

    #[test]
    fn single_term_has_no_markers() {
        let svg = render(2, &[0, 0, 4], -2, 2);
        assert_eq!(svg.matches("class=\"piece\"").count(), 1);
        assert!(!svg.contains("<circle"));
    }

    #[test]
    fn two_plus_z_has_one_corner() {
        let svg = render(2, &[2, 1], -2, 2);
        assert_eq!(svg.matches("class=\"piece\"").count(), 2);
        assert_eq!(svg.matches("<circle class=\"corner\"").count(), 1);
        assert!(svg.contains("s0 = 1, newton slope -1, sharpness 1"));
        assert!(svg.starts_with("<svg") && svg.contains("width=\"800\" height=\"600\""));
    }

    #[test]
    fn deterministic() {
        assert_eq!(render(3, &[9, 1, 0, 27], -3, 3), render(3, &[9, 1, 0, 27], -3, 3));
    }

    #[test]
    fn coordinates_have_three_decimals() {
        let svg = render(5, &[1, 5, 25], -1, 1);
        for part in svg.split('"') {
            if let Some((int_part, frac)) = part.split_once('.') {
                if int_part.chars().all(|c| c.is_ascii_digit() || c == '-') && !int_part.is_empty() {
                    assert_eq!(frac.len(), 3, "{part}");
                }
            }
        }
    }
}
