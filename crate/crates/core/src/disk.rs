//! Points of the closed unit disk stored in polar form with an explicit
//! boundary distance.
//!
//! Zero sequences such as `1 - a^j` sit far closer to the circle than an
//! `f64` modulus can resolve (`1 - 4^-30` rounds to `1`). Keeping
//! `depth = 1 - |z|` as its own number lets distances, gaps and
//! pseudohyperbolic distances be computed with full relative accuracy.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::de::{self, Deserializer, SeqAccess, Visitor};
use serde::ser::{SerializeSeq, Serializer};
use serde::{Deserialize, Serialize};

use crate::error::{usage, Result};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DiskPoint {
    depth: f64,
    angle: f64,
}

impl DiskPoint {
    /// Point `(1 - depth) e^{i angle}`; `depth` must lie in `[0, 1]`.
    pub fn polar(depth: f64, angle: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&depth) || !angle.is_finite() {
            return usage(format!("invalid disk point: depth {depth}, angle {angle}"));
        }
        Ok(Self { depth, angle })
    }

    pub fn boundary(angle: f64) -> Self {
        Self { depth: 0.0, angle }
    }

    pub fn origin() -> Self {
        Self { depth: 1.0, angle: 0.0 }
    }

    /// From a complex number with `|z| <= 1` (a rounding slack of 1e-12 is
    /// clamped onto the circle).
    pub fn from_complex(z: Complex64) -> Result<Self> {
        let r = z.norm();
        if !r.is_finite() || r > 1.0 + 1e-12 {
            return usage(format!("point {z} lies outside the closed unit disk"));
        }
        let angle = if r == 0.0 { 0.0 } else { z.im.atan2(z.re) };
        Ok(Self { depth: (1.0 - r).max(0.0), angle })
    }

    /// `1 - |z|`.
    pub fn depth(&self) -> f64 {
        self.depth
    }

    pub fn angle(&self) -> f64 {
        self.angle
    }

    pub fn modulus(&self) -> f64 {
        1.0 - self.depth
    }

    pub fn is_boundary(&self) -> bool {
        self.depth == 0.0
    }

    pub fn z(&self) -> Complex64 {
        Complex64::from_polar(1.0 - self.depth, self.angle)
    }

    /// `self - other`, accurate even when both points hug the circle.
    pub fn sub(&self, other: &Self) -> Complex64 {
        let half = 0.5 * (self.angle - other.angle);
        let mid = 0.5 * (self.angle + other.angle);
        let (s, c) = half.sin_cos();
        let radial = (other.depth - self.depth) * c;
        let tangential = (2.0 - self.depth - other.depth) * s;
        Complex64::new(radial, tangential) * Complex64::from_polar(1.0, mid)
    }

    /// Euclidean distance; exactly symmetric in its arguments.
    pub fn dist(&self, other: &Self) -> f64 {
        let half = 0.5 * (self.angle - other.angle);
        let (s, c) = half.sin_cos();
        let radial = (other.depth - self.depth) * c;
        let tangential = (2.0 - self.depth - other.depth) * s;
        radial.hypot(tangential)
    }

    /// `|1 - conj(z) w|`.
    pub fn one_minus_conj_prod(&self, other: &Self) -> f64 {
        // 1 - r_z r_w, computed from the depths
        let gap = self.depth + other.depth - self.depth * other.depth;
        let s = (0.5 * (self.angle - other.angle)).sin();
        let rr = (1.0 - self.depth) * (1.0 - other.depth);
        (gap * gap + 4.0 * rr * s * s).sqrt()
    }

    /// Pseudohyperbolic distance `|z - w| / |1 - conj(z) w|`.
    pub fn rho(&self, other: &Self) -> Result<f64> {
        let den = self.one_minus_conj_prod(other);
        if den == 0.0 {
            return usage("pseudohyperbolic distance between coincident boundary points");
        }
        Ok((self.dist(other) / den).min(1.0))
    }

    /// Angle reduced to `[0, 2pi)`.
    pub fn angle_mod_2pi(&self) -> f64 {
        self.angle.rem_euclid(2.0 * PI)
    }
}

/// Pseudohyperbolic distance between two complex points of the closed disk.
pub fn rho(z: Complex64, w: Complex64) -> Result<f64> {
    DiskPoint::from_complex(z)?.rho(&DiskPoint::from_complex(w)?)
}

// Points serialize as `[re, im]`, or `[re, im, depth]` when the depth cannot
// be recovered from the rounded coordinates.
impl Serialize for DiskPoint {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let z = self.z();
        let lossless = DiskPoint::from_complex(z).map(|p| p.depth == self.depth).unwrap_or(false);
        let mut seq = serializer.serialize_seq(Some(if lossless { 2 } else { 3 }))?;
        seq.serialize_element(&z.re)?;
        seq.serialize_element(&z.im)?;
        if !lossless {
            seq.serialize_element(&self.depth)?;
        }
        seq.end()
    }
}

impl<'de> Deserialize<'de> for DiskPoint {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        struct PointVisitor;

        impl<'de> Visitor<'de> for PointVisitor {
            type Value = DiskPoint;

            fn expecting(&self, f: &mut std::fmt::Formatter) -> std::fmt::Result {
                f.write_str("[re, im] or [re, im, depth]")
            }

            fn visit_seq<A: SeqAccess<'de>>(self, mut seq: A) -> std::result::Result<DiskPoint, A::Error> {
                let re: f64 = seq.next_element()?.ok_or_else(|| de::Error::invalid_length(0, &self))?;
                let im: f64 = seq.next_element()?.ok_or_else(|| de::Error::invalid_length(1, &self))?;
                let depth: Option<f64> = seq.next_element()?;
                let z = Complex64::new(re, im);
                let angle = if re == 0.0 && im == 0.0 { 0.0 } else { im.atan2(re) };
                match depth {
                    Some(d) => DiskPoint::polar(d, angle).map_err(de::Error::custom),
                    None => DiskPoint::from_complex(z).map_err(de::Error::custom),
                }
            }
        }

        deserializer.deserialize_seq(PointVisitor)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(re: f64, im: f64) -> DiskPoint {
        DiskPoint::from_complex(Complex64::new(re, im)).unwrap()
    }

    #[test]
    fn rho_examples() {
        let w = p(0.3, -0.4);
        assert!((p(0.0, 0.0).rho(&w).unwrap() - 0.5).abs() < 1e-15);
        assert_eq!(w.rho(&w).unwrap(), 0.0);
        assert!((rho(Complex64::new(0.5, 0.0), Complex64::new(-0.5, 0.0)).unwrap() - 0.8).abs() < 1e-15);
    }

    #[test]
    fn coincident_boundary_points_are_rejected() {
        let z = DiskPoint::boundary(1.0);
        assert!(z.rho(&z).is_err());
        assert_eq!(z.rho(&DiskPoint::boundary(2.0)).unwrap(), 1.0);
    }

    #[test]
    fn sub_matches_plain_difference_away_from_boundary() {
        let a = p(0.3, 0.2);
        let b = p(-0.1, 0.6);
        let d = a.sub(&b);
        let plain = a.z() - b.z();
        assert!((d - plain).norm() < 1e-15);
        assert!((a.dist(&b) - plain.norm()).abs() < 1e-15);
        assert_eq!(b.sub(&a), -d);
    }

    #[test]
    fn near_boundary_distances_keep_relative_accuracy() {
        // two points at depth 4^-30 and 4^-29 on the real axis
        let a = DiskPoint::polar(0.25f64.powi(30), 0.0).unwrap();
        let b = DiskPoint::polar(0.25f64.powi(29), 0.0).unwrap();
        let expect = 0.25f64.powi(29) - 0.25f64.powi(30);
        assert!((a.dist(&b) / expect - 1.0).abs() < 1e-15);
        assert_eq!(a.z(), Complex64::new(1.0, 0.0));
    }

    #[test]
    fn serde_keeps_depth_when_needed() {
        let a = DiskPoint::polar(1e-20, 0.3).unwrap();
        let s = serde_json::to_string(&a).unwrap();
        let back: DiskPoint = serde_json::from_str(&s).unwrap();
        assert_eq!(back.depth(), 1e-20);
        assert!((back.angle() - 0.3).abs() < 1e-15);
        let b = p(0.5, 0.0);
        assert_eq!(serde_json::to_string(&b).unwrap(), "[0.5,0.0]");
    }
}
