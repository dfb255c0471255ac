//! Newton polygons via the monotone-chain lower hull.

use num_rational::BigRational;
use num_traits::Signed;

use crate::error::{Error, Result};
use crate::series::{int, quadratic_min, LaurentSeries, TailKind};

/// A hull edge: `length` zeros of valuation `-slope`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Segment {
    pub slope: BigRational,
    pub length: u64,
}

impl Segment {
    /// Valuation of the zeros this segment accounts for.
    pub fn root_valuation(&self) -> BigRational {
        -&self.slope
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NewtonPolygon {
    pub vertices: Vec<(i64, BigRational)>,
    pub segments: Vec<Segment>,
}

impl NewtonPolygon {
    /// Lower convex hull of points with distinct, increasing abscissae.
    /// Collinear interior points are not vertices.
    pub fn from_points(points: &[(i64, BigRational)]) -> Self {
        let vertices = lower_hull(points);
        let segments = vertices
            .windows(2)
            .map(|w| {
                let run = w[1].0 - w[0].0;
                Segment {
                    slope: (&w[1].1 - &w[0].1) / int(run),
                    length: run as u64,
                }
            })
            .collect();
        Self { vertices, segments }
    }

    /// Total number of zeros accounted for by the segments.
    pub fn degree(&self) -> u64 {
        self.segments.iter().map(|s| s.length).sum()
    }
}

fn cross(o: &(i64, BigRational), a: &(i64, BigRational), b: &(i64, BigRational)) -> BigRational {
    int(a.0 - o.0) * (&b.1 - &o.1) - (&a.1 - &o.1) * int(b.0 - o.0)
}

fn lower_hull(points: &[(i64, BigRational)]) -> Vec<(i64, BigRational)> {
    debug_assert!(points.windows(2).all(|w| w[0].0 < w[1].0));
    let mut hull: Vec<(i64, BigRational)> = Vec::with_capacity(points.len());
    for p in points {
        while hull.len() >= 2 && !cross(&hull[hull.len() - 2], &hull[hull.len() - 1], p).is_positive()
        {
            hull.pop();
        }
        hull.push(p.clone());
    }
    hull
}

/// Newton polygon of the window.
///
/// With nontrivial tails the polygon is the part visible from the window:
/// every reported segment is certified to be a segment of the full polygon,
/// which requires the tail points to lie strictly above the supporting line of
/// the outermost segment on each side.
pub fn newton_polygon(f: &LaurentSeries) -> Result<NewtonPolygon> {
    if f.is_zero() {
        return Err(Error::ZeroSeries);
    }
    let points = f.points();
    if points.is_empty() {
        return Err(Error::WindowInsufficient("window holds no nonzero coefficient".into()));
    }
    let poly = NewtonPolygon::from_points(&points);
    let (lo, hi) = f.window().expect("nonzero series has a window");

    if let (TailKind::LinearBound { a, b }, Some(last)) = (&f.tail_pos().kind, poly.segments.last())
    {
        let (n_l, y_l) = poly.vertices.last().expect("segments imply vertices");
        // tail bound minus supporting line, as a function of n > hi
        let offset = a - y_l + &last.slope * int(*n_l);
        let slope = b - &last.slope;
        let first = offset + &slope * int(hi + 1);
        if slope.is_negative() || !first.is_positive() {
            return Err(Error::WindowInsufficient(
                "positive tail may dip below the last segment".into(),
            ));
        }
    }

    if let (TailKind::EssentialQuadratic { a, c }, Some(first)) =
        (&f.tail_neg().kind, poly.segments.first())
    {
        let (n_f, y_f) = &poly.vertices[0];
        let offset = a - y_f + &first.slope * int(*n_f);
        if !quadratic_min(&offset, c, &-&first.slope, lo - 1).is_positive() {
            return Err(Error::WindowInsufficient(
                "negative tail may dip below the first segment".into(),
            ));
        }
    }

    Ok(poly)
}
