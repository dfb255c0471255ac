use std::fmt::Write as _;
use std::path::Path;

use num_rational::BigRational;
use serde_json::{json, Value};

use super::{format, svg, Command, Failure, OutputFormat};
use crate::picard::{
    classify_singularity, contains_value, extend_across_puncture, open_image_disc,
    SingularityClassification,
};
use crate::polygon::{newton_polygon, valuation_envelope, zero_count_annulus, NewtonPolygon, ValuationEnvelope};
use crate::series::{int, LaurentSeries, RadiusVal, ValRange};
use crate::solver::{slope_factorization_with, PrecisionPolicy, SlopeFactorization};

type Outcome = std::result::Result<String, Failure>;

fn load(path: &Path) -> std::result::Result<LaurentSeries, Failure> {
    let bytes = std::fs::read(path)
        .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))?;
    let doc = format::parse_series_bytes(&bytes)
        .map_err(|e| Failure::Usage(format!("{}:{e}", path.display())))?;
    doc.to_series()
        .map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn bound(b: Option<&BigRational>) -> String {
    b.map_or_else(|| "inf".into(), ToString::to_string)
}

fn lower(b: Option<&BigRational>) -> String {
    b.map_or_else(|| "-inf".into(), ToString::to_string)
}

fn json_text(v: Value) -> String {
    let mut s = serde_json::to_string_pretty(&v).expect("serializable");
    s.push('\n');
    s
}

pub(super) fn execute(command: &Command, fmt: OutputFormat, max_precision: u32) -> Outcome {
    match command {
        Command::Polygon { file, range, svg } => {
            let f = load(file)?;
            let poly = newton_polygon(&f)?;
            let range = match range {
                Some(r) => ValRange::closed(r[0].clone(), r[1].clone())
                    .map_err(|e| Failure::Usage(e.to_string()))?,
                None => default_range(&poly),
            };
            let env = valuation_envelope(&f, &range)?;
            if *svg {
                return Ok(svg::emit_polygon_svg(&env, &poly));
            }
            Ok(polygon_output(&poly, &env, fmt))
        }
        Command::Zeros { file, from, to } => {
            let f = load(file)?;
            let range = ValRange::new(from.0.clone(), to.0.clone())
                .map_err(|e| Failure::Usage(e.to_string()))?;
            let count = zero_count_annulus(&f, &range)?;
            Ok(match fmt {
                OutputFormat::Tsv => format!("count\t{count}\n"),
                OutputFormat::Json => json_text(json!({
                    "from": lower(range.lo()),
                    "to": bound(range.hi()),
                    "count": count,
                })),
            })
        }
        Command::Classify { file, radius_val } => {
            let f = load(file)?;
            if !f.converges_on(&ValRange::disc(radius_val.clone())) {
                return Err(crate::Error::NonConvergent.into());
            }
            Ok(classification_output("kind", classify_singularity(&f), fmt))
        }
        Command::Extend { file, radius_val } => {
            let f = load(file)?;
            let c = extend_across_puncture(&f, &RadiusVal::new(radius_val.clone()))?;
            Ok(classification_output("extension", c, fmt))
        }
        Command::Image { file, radius_val } => {
            let f = load(file)?;
            let disc = open_image_disc(&f, &RadiusVal::new(radius_val.clone()))?;
            Ok(match fmt {
                OutputFormat::Tsv => format!("m\t{}\ndelta_val\t{}\n", disc.lead_exponent, disc.delta_val),
                OutputFormat::Json => json_text(json!({
                    "m": disc.lead_exponent,
                    "delta_val": disc.delta_val.to_string(),
                    "center": disc.center.to_string(),
                })),
            })
        }
        Command::Contains { file, radius_val, value } => {
            let f = load(file)?;
            let inside = contains_value(&f, &RadiusVal::new(radius_val.clone()), value)?;
            Ok(match fmt {
                OutputFormat::Tsv => format!("contains\t{inside}\n"),
                OutputFormat::Json => json_text(json!({ "contains": inside })),
            })
        }
        Command::Factor { file, precision } => {
            let f = load(file)?;
            let policy = PrecisionPolicy {
                max: max_precision,
                ..PrecisionPolicy::default()
            };
            let fz = slope_factorization_with(&f, *precision, &policy)?;
            Ok(factor_output(&fz, fmt))
        }
    }
}

/// One unit beyond the outermost root valuations, or `[-1, 1]`.
fn default_range(poly: &NewtonPolygon) -> ValRange {
    let roots = poly.segments.iter().map(|s| s.root_valuation());
    let lo = roots.clone().min().map_or(int(-1), |s| s - int(1));
    let hi = roots.max().map_or(int(1), |s| s + int(1));
    ValRange::closed(lo, hi).expect("lo <= hi")
}

fn polygon_output(poly: &NewtonPolygon, env: &ValuationEnvelope, fmt: OutputFormat) -> String {
    match fmt {
        OutputFormat::Tsv => {
            let mut out = String::new();
            for (n, v) in &poly.vertices {
                writeln!(out, "vertex\t{n}\t{v}").unwrap();
            }
            for s in &poly.segments {
                writeln!(out, "segment\t{}\t{}", s.slope, s.length).unwrap();
            }
            for p in &env.pieces {
                writeln!(
                    out,
                    "piece\t{}\t{}\t{}\t{}",
                    lower(p.start.as_ref()),
                    bound(p.end.as_ref()),
                    p.exponent,
                    p.intercept
                )
                .unwrap();
            }
            for c in &env.corners {
                writeln!(
                    out,
                    "corner\t{}\t{}\t{}\t{}\t{}",
                    c.s0, c.value, c.n_left, c.n_right, c.sharpness
                )
                .unwrap();
            }
            out
        }
        OutputFormat::Json => json_text(json!({
            "vertices": poly.vertices.iter().map(|(n, v)| json!({"n": n, "v": v.to_string()})).collect::<Vec<_>>(),
            "segments": poly.segments.iter().map(|s| json!({"slope": s.slope.to_string(), "length": s.length})).collect::<Vec<_>>(),
            "pieces": env.pieces.iter().map(|p| json!({
                "start": lower(p.start.as_ref()),
                "end": bound(p.end.as_ref()),
                "exponent": p.exponent,
                "intercept": p.intercept.to_string(),
            })).collect::<Vec<_>>(),
            "corners": env.corners.iter().map(|c| json!({
                "s0": c.s0.to_string(),
                "value": c.value.to_string(),
                "n_left": c.n_left,
                "n_right": c.n_right,
                "sharpness": c.sharpness,
            })).collect::<Vec<_>>(),
        })),
    }
}

fn classification_output(key: &str, c: SingularityClassification, fmt: OutputFormat) -> String {
    let (kind, order) = match c {
        SingularityClassification::RemovableAnalytic => ("removable", "0".to_string()),
        SingularityClassification::Pole(m) => ("pole", m.to_string()),
        SingularityClassification::EssentialDeclared => ("essential", "inf".to_string()),
    };
    match fmt {
        OutputFormat::Tsv => format!("{key}\t{kind}\norder\t{order}\n"),
        OutputFormat::Json => json_text(json!({ key: kind, "order": order })),
    }
}

fn factor_output(fz: &SlopeFactorization, fmt: OutputFormat) -> String {
    let coeffs = |f: &crate::solver::SlopeFactor| {
        f.coefficients
            .iter()
            .map(|c| c.value().to_string())
            .collect::<Vec<_>>()
    };
    match fmt {
        OutputFormat::Tsv => {
            let mut out = String::new();
            writeln!(out, "shift\t{}", fz.shift).unwrap();
            writeln!(out, "unit\t{}", fz.unit).unwrap();
            for f in &fz.factors {
                writeln!(out, "factor\t{}\t{}\t{}", f.slope, f.degree, coeffs(f).join(",")).unwrap();
            }
            writeln!(out, "precision\t{}", fz.precision).unwrap();
            out
        }
        OutputFormat::Json => json_text(json!({
            "shift": fz.shift,
            "unit": fz.unit.to_string(),
            "factors": fz.factors.iter().map(|f| json!({
                "slope": f.slope.to_string(),
                "degree": f.degree,
                "coefficients": coeffs(f),
            })).collect::<Vec<_>>(),
            "precision": fz.precision,
        })),
    }
}
