//! Jets on finite sets: the pairwise admissibility inequality
//! `|phi_s(z) - sum_{m<=n-s} phi_{s+m}(w)/m! (z-w)^m| <= C |z-w|^(alpha-s)`,
//! the delta-jets `phi_k(z_j) = d_j^(alpha-k)` and traces of expressions.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::disk::DiskPoint;
use crate::error::{usage, Result};
use crate::expr::AnalyticExpr;
use crate::geometry::{gaps, GapMode, ZeroSequence};

pub const SCHEMA_VERSION: &str = "1";

/// Values `phi[s][i] = phi_s(points[i])` for `s = 0..=n`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct JetData {
    pub alpha: f64,
    pub n: usize,
    pub points: Vec<DiskPoint>,
    pub phi: Vec<Vec<Complex64>>,
}

/// The top jet order `n` with `n < alpha <= n + 1`.
pub fn top_order(alpha: f64) -> Result<usize> {
    if !(alpha > 0.0) || !alpha.is_finite() {
        return usage(format!("alpha must be positive, got {alpha}"));
    }
    Ok(alpha.ceil() as usize - 1)
}

impl JetData {
    pub fn new(points: Vec<DiskPoint>, n: usize, alpha: f64, phi: Vec<Vec<Complex64>>) -> Result<Self> {
        let d = JetData { alpha, n, points, phi };
        d.validate()?;
        Ok(d)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.alpha > self.n as f64 && self.alpha <= self.n as f64 + 1.0) {
            return usage(format!("alpha = {} is not in (n, n + 1] for n = {}", self.alpha, self.n));
        }
        if self.phi.len() != self.n + 1 {
            return usage(format!("expected {} jet rows, got {}", self.n + 1, self.phi.len()));
        }
        if let Some(s) = self.phi.iter().position(|row| row.len() != self.points.len()) {
            return usage(format!("jet row {s} has {} entries for {} points", self.phi[s].len(), self.points.len()));
        }
        Ok(())
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let d: JetData = serde_json::from_str(s)?;
        d.validate()?;
        Ok(d)
    }

    /// Multiply every value by `lambda`.
    pub fn scaled(&self, lambda: Complex64) -> Self {
        let phi = self.phi.iter().map(|row| row.iter().map(|v| v * lambda).collect()).collect();
        JetData { phi, ..self.clone() }
    }
}

/// The ordered pair and order realizing `c_min`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct WorstPair {
    /// Index of `z` (the point where `phi_s` is evaluated).
    pub z: usize,
    /// Index of `w` (the expansion center).
    pub w: usize,
    pub s: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AdmissibilityReport {
    pub version: String,
    pub c_min: f64,
    pub worst: Option<WorstPair>,
    /// The maximum ratio for each `s`.
    pub per_s: Vec<f64>,
    pub gate: Option<f64>,
    pub pass: Option<bool>,
    /// Points of `E` on the circle; their values enter as plain data.
    pub boundary_points: usize,
}

/// `|phi_s(z) - T_s(z; w)| / |z - w|^(alpha - s)` for one ordered pair.
pub fn pair_ratio(data: &JetData, zi: usize, wi: usize, s: usize) -> f64 {
    let (z, w) = (&data.points[zi], &data.points[wi]);
    let h = z.sub(w);
    let mut taylor = Complex64::new(0.0, 0.0);
    let mut hp = Complex64::new(1.0, 0.0);
    let mut fact = 1.0;
    for m in 0..=(data.n - s) {
        if m > 0 {
            hp *= h;
            fact *= m as f64;
        }
        taylor += data.phi[s + m][wi] * hp / fact;
    }
    (data.phi[s][zi] - taylor).norm() / z.dist(w).powf(data.alpha - s as f64)
}

/// Smallest `C` for which the pairwise inequality holds over all ordered
/// pairs and all `s`, optionally judged against `gate`.
pub fn check_admissible(data: &JetData, gate: Option<f64>) -> Result<AdmissibilityReport> {
    data.validate()?;
    let pts = &data.points;
    if pts.len() < 2 {
        return usage("admissibility needs at least two points");
    }
    for i in 0..pts.len() {
        if let Some(j) = (0..i).find(|&j| pts[i].dist(&pts[j]) == 0.0) {
            return usage(format!("points {j} and {i} of E coincide"));
        }
    }
    // per z: (best ratio, w, s) and per-s maxima
    let rows: Vec<(f64, Option<WorstPair>, Vec<f64>)> = (0..pts.len())
        .into_par_iter()
        .map(|zi| {
            let mut best = (0.0, None);
            let mut per_s = vec![0.0; data.n + 1];
            for wi in (0..pts.len()).filter(|&w| w != zi) {
                for s in 0..=data.n {
                    let r = pair_ratio(data, zi, wi, s);
                    per_s[s] = f64::max(per_s[s], r);
                    if r > best.0 || (best.1.is_none() && r >= best.0) {
                        best = (r, Some(WorstPair { z: zi, w: wi, s }));
                    }
                }
            }
            (best.0, best.1, per_s)
        })
        .collect();
    let mut c_min = 0.0;
    let mut worst = None;
    let mut per_s = vec![0.0; data.n + 1];
    for (r, pair, ps) in rows {
        if worst.is_none() || r > c_min {
            c_min = r;
            worst = pair;
        }
        for (acc, v) in per_s.iter_mut().zip(ps) {
            *acc = f64::max(*acc, v);
        }
    }
    Ok(AdmissibilityReport {
        version: SCHEMA_VERSION.into(),
        c_min,
        worst,
        per_s,
        gate,
        pass: gate.map(|c| c_min <= c),
        boundary_points: pts.iter().filter(|p| p.is_boundary()).count(),
    })
}

/// `phi_k(z_j) = d_j^(alpha - k)`, all other orders zero; accumulation
/// points of the sequence join `E` with zero data. Gaps are taken in
/// [`GapMode::Extended`] so they bound the gaps of the infinite sequence.
pub fn build_delta_jet(seq: &ZeroSequence, k: usize, alpha: f64) -> Result<JetData> {
    let n = top_order(alpha)?;
    if k > n {
        return usage(format!("k = {k} exceeds the top order n = {n} for alpha = {alpha}"));
    }
    let d = gaps(seq, GapMode::Extended)?;
    let points = seq.closure_points();
    let mut phi = vec![vec![Complex64::new(0.0, 0.0); points.len()]; n + 1];
    for (j, dj) in d.iter().enumerate() {
        phi[k][j] = Complex64::new(dj.powf(alpha - k as f64), 0.0);
    }
    JetData::new(points, n, alpha, phi)
}

/// `phi_s = e^(s)` on `points`.
pub fn trace_of_expr(e: &AnalyticExpr, points: &[DiskPoint], n: usize, alpha: f64) -> Result<JetData> {
    let mut phi = vec![Vec::with_capacity(points.len()); n + 1];
    for p in points {
        let ds = e.jet(p.z(), n)?.derivatives();
        for (row, v) in phi.iter_mut().zip(ds) {
            row.push(v);
        }
    }
    JetData::new(points.to_vec(), n, alpha, phi)
}
