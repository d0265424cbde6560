//! Newton polygons over `Q_p` and the root valuations they encode.

use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::{rat_str, ExtVal, Prime, Rat};
use crate::polynomial::QPoly;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NewtonError {
    #[error("Newton polygon of the zero polynomial")]
    ZeroPolynomial,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Segment {
    #[serde(with = "rat_str")]
    pub slope: Rat,
    pub length: usize,
}

/// Lower convex hull of `(i, v(c_i))`. Points at `+inf` are kept in `points`
/// but never enter the hull.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NewtonPolygon {
    pub points: Vec<(usize, ExtVal)>,
    pub vertices: Vec<(usize, ExtVal)>,
    pub segments: Vec<Segment>,
}

impl NewtonPolygon {
    pub fn build(f: &QPoly, p: Prime) -> Result<Self, NewtonError> {
        if f.is_zero() {
            return Err(NewtonError::ZeroPolynomial);
        }
        let pts = f.coeffs().iter().enumerate().map(|(i, c)| (i, p.val(c))).collect();
        Self::from_points(pts)
    }

    /// Polygon of an arbitrary point set; the last point must be finite.
    pub fn from_points(points: Vec<(usize, ExtVal)>) -> Result<Self, NewtonError> {
        let finite: Vec<(usize, Rat)> = points
            .iter()
            .filter_map(|(i, v)| v.finite().map(|r| (*i, r.clone())))
            .collect();
        if finite.is_empty() {
            return Err(NewtonError::ZeroPolynomial);
        }
        // monotone chain, lower hull
        let mut hull: Vec<(usize, Rat)> = Vec::new();
        for pt in finite {
            while hull.len() >= 2 {
                let (a, b) = (&hull[hull.len() - 2], &hull[hull.len() - 1]);
                if slope(a, b) >= slope(b, &pt) {
                    hull.pop();
                } else {
                    break;
                }
            }
            hull.push(pt);
        }
        let segments = hull
            .windows(2)
            .map(|w| Segment { slope: slope(&w[0], &w[1]), length: w[1].0 - w[0].0 })
            .collect();
        let vertices = hull.into_iter().map(|(i, v)| (i, ExtVal::Fin(v))).collect();
        Ok(NewtonPolygon { points, vertices, segments })
    }

    /// Index of the first finite point: the number of roots at `+inf`.
    fn zero_roots(&self) -> usize {
        self.vertices.first().map(|v| v.0).unwrap_or(0)
    }

    /// Root valuations with multiplicity, ascending, `+inf` last.
    pub fn root_valuations(&self) -> Vec<(ExtVal, usize)> {
        let mut out: Vec<(ExtVal, usize)> = self
            .segments
            .iter()
            .map(|s| (ExtVal::Fin(-s.slope.clone()), s.length))
            .collect();
        out.sort_by(|a, b| a.0.cmp(&b.0));
        let z = self.zero_roots();
        if z > 0 {
            out.push((ExtVal::Inf, z));
        }
        out
    }

    /// Smallest root valuation strictly above `floor`, if any.
    pub fn min_root_valuation_above(&self, floor: &ExtVal) -> Option<ExtVal> {
        self.root_valuations().into_iter().map(|(v, _)| v).find(|v| v > floor)
    }

    /// lcm of the denominators of the finite slopes.
    pub fn ram_denominator(&self) -> num_bigint::BigInt {
        self.segments
            .iter()
            .fold(num_bigint::BigInt::one(), |acc, s| acc.lcm(s.slope.denom()))
    }
}

fn slope(a: &(usize, Rat), b: &(usize, Rat)) -> Rat {
    let dx = Rat::from_integer((b.0 as i64 - a.0 as i64).into());
    debug_assert!(!dx.is_zero());
    (&b.1 - &a.1) / dx
}
