//! Probability primitives on finite supports: normalization, marginals,
//! entropy, mutual information and expected cost.
//!
//! All sums run in natural log; [`LogBase`] converts at the output boundary.
//! `0 ln 0` is taken as 0 everywhere.

use std::f64::consts::{LN_2, PI};
use std::fmt;

use crate::error::{Result, VoiError};

/// Tolerance on the total mass of a [`ProbVector`] or [`JointMeasure`].
pub const MASS_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Geometry {
    /// Circle whose circumference equals the number of points (unit spacing).
    CircleCircumferenceN,
    /// Circle of circumference 2π.
    UnitCircle,
    /// Segment of length 2π traversed in one direction.
    OneWayLine,
}

impl Geometry {
    pub fn is_circle(self) -> bool {
        !matches!(self, Geometry::OneWayLine)
    }

    /// Distance between neighbouring points.
    pub fn spacing(self, n: usize) -> f64 {
        match self {
            Geometry::CircleCircumferenceN => 1.0,
            Geometry::UnitCircle | Geometry::OneWayLine => 2.0 * PI / n as f64,
        }
    }
}

/// `n` equally spaced points on a geometry. States and actions share the space.
#[derive(Debug, Clone, PartialEq)]
pub struct FiniteSpace {
    n: usize,
    geometry: Geometry,
    coordinates: Vec<f64>,
}

impl FiniteSpace {
    pub fn new(n: usize, geometry: Geometry) -> Result<Self> {
        if n < 2 {
            return Err(VoiError::InvalidSize {
                n,
                reason: "need at least 2 points",
            });
        }
        if geometry.is_circle() && !n.is_multiple_of(2) {
            return Err(VoiError::InvalidSize {
                n,
                reason: "circle geometries need an even number of points",
            });
        }
        let step = geometry.spacing(n);
        let coordinates = (0..n).map(|i| i as f64 * step).collect();
        Ok(Self {
            n,
            geometry,
            coordinates,
        })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn geometry(&self) -> Geometry {
        self.geometry
    }

    pub fn coordinates(&self) -> &[f64] {
        &self.coordinates
    }
}

/// Output unit for entropies and informations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum LogBase {
    Nats,
    #[default]
    Bits,
}

impl LogBase {
    /// Converts a quantity measured in nats into this base.
    pub fn from_nats(self, nats: f64) -> f64 {
        match self {
            LogBase::Nats => nats,
            LogBase::Bits => nats / LN_2,
        }
    }

    /// Converts a quantity in this base back to nats.
    pub fn to_nats(self, value: f64) -> f64 {
        match self {
            LogBase::Nats => value,
            LogBase::Bits => value * LN_2,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            LogBase::Nats => "nats",
            LogBase::Bits => "bits",
        }
    }
}

impl fmt::Display for LogBase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

fn check_weights(weights: &[f64]) -> Result<()> {
    for (index, &value) in weights.iter().enumerate() {
        if !value.is_finite() || value < 0.0 {
            return Err(VoiError::InvalidWeight { index, value });
        }
    }
    Ok(())
}

/// Normalized nonnegative weights over a finite support.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbVector(Vec<f64>);

impl ProbVector {
    /// Accepts already-normalized weights; unnormalized input is rejected.
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        check_weights(&weights)?;
        let sum: f64 = weights.iter().sum();
        if (sum - 1.0).abs() > MASS_TOLERANCE {
            return Err(VoiError::NotNormalized { sum });
        }
        Ok(Self(weights))
    }

    pub fn uniform(n: usize) -> Self {
        Self(vec![1.0 / n as f64; n])
    }

    pub fn point_mass(n: usize, at: usize) -> Self {
        let mut w = vec![0.0; n];
        w[at] = 1.0;
        Self(w)
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_uniform(&self) -> bool {
        let u = 1.0 / self.0.len() as f64;
        self.0.iter().all(|&p| (p - u).abs() <= MASS_TOLERANCE)
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }
}

/// Normalization map `y / <1, y>`.
pub fn normalize(weights: &[f64]) -> Result<ProbVector> {
    check_weights(weights)?;
    let sum: f64 = weights.iter().sum();
    if sum <= 0.0 {
        return Err(VoiError::DegenerateMeasure);
    }
    Ok(ProbVector(weights.iter().map(|w| w / sum).collect()))
}

/// Scales every row of a row-major square matrix to unit sum.
pub fn partial_normalize_rows(n: usize, entries: &[f64]) -> Result<Vec<f64>> {
    if entries.len() != n * n {
        return Err(VoiError::DimensionMismatch {
            expected: n * n,
            found: entries.len(),
        });
    }
    check_weights(entries)?;
    let mut out = Vec::with_capacity(entries.len());
    for (row, r) in entries.chunks(n).enumerate() {
        let s: f64 = r.iter().sum();
        if s <= 0.0 {
            return Err(VoiError::ZeroRow { row });
        }
        out.extend(r.iter().map(|v| v / s));
    }
    Ok(out)
}

/// Joint probability over X × U, stored row-major (rows are states x).
#[derive(Debug, Clone, PartialEq)]
pub struct JointMeasure {
    rows: usize,
    cols: usize,
    entries: Vec<f64>,
}

impl JointMeasure {
    pub fn new(rows: usize, cols: usize, entries: Vec<f64>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(VoiError::DimensionMismatch {
                expected: rows * cols,
                found: entries.len(),
            });
        }
        check_weights(&entries)?;
        let sum: f64 = entries.iter().sum();
        if (sum - 1.0).abs() > MASS_TOLERANCE {
            return Err(VoiError::NotNormalized { sum });
        }
        Ok(Self {
            rows,
            cols,
            entries,
        })
    }

    /// Builds `p(x) p(u)`.
    pub fn product(px: &ProbVector, pu: &ProbVector) -> Self {
        let entries = px
            .as_slice()
            .iter()
            .flat_map(|&a| pu.as_slice().iter().map(move |&b| a * b))
            .collect();
        Self {
            rows: px.len(),
            cols: pu.len(),
            entries,
        }
    }

    /// Builds `diag(p)`, the noiseless channel.
    pub fn diagonal(p: &ProbVector) -> Self {
        let n = p.len();
        let mut entries = vec![0.0; n * n];
        for (i, &w) in p.as_slice().iter().enumerate() {
            entries[i * n + i] = w;
        }
        Self {
            rows: n,
            cols: n,
            entries,
        }
    }

    /// Trusted constructor for measures assembled row by row inside the crate.
    pub(crate) fn from_rows_unchecked(rows: usize, cols: usize, entries: Vec<f64>) -> Self {
        debug_assert_eq!(entries.len(), rows * cols);
        Self {
            rows,
            cols,
            entries,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, x: usize, u: usize) -> f64 {
        self.entries[x * self.cols + u]
    }

    pub fn row(&self, x: usize) -> &[f64] {
        &self.entries[x * self.cols..(x + 1) * self.cols]
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    pub fn total_mass(&self) -> f64 {
        self.entries.iter().sum()
    }

    pub fn row_sums(&self) -> Vec<f64> {
        self.entries
            .chunks(self.cols)
            .map(|r| r.iter().sum())
            .collect()
    }

    pub fn col_sums(&self) -> Vec<f64> {
        let mut out = vec![0.0; self.cols];
        for r in self.entries.chunks(self.cols) {
            for (o, v) in out.iter_mut().zip(r) {
                *o += v;
            }
        }
        out
    }
}

/// Row and column marginals of a joint measure.
pub fn marginals(j: &JointMeasure) -> (ProbVector, ProbVector) {
    (ProbVector(j.row_sums()), ProbVector(j.col_sums()))
}

/// Kullback–Leibler divergence `sum p ln(p / q)` in nats, over matching supports.
///
/// Terms with `p = 0` contribute nothing; `p > 0` with `q = 0` gives +inf.
pub fn kl_divergence(p: &[f64], q: &[f64]) -> f64 {
    p.iter()
        .zip(q)
        .filter(|(&a, _)| a > 0.0)
        .map(|(&a, &b)| {
            if b > 0.0 {
                a * (a / b).ln()
            } else {
                f64::INFINITY
            }
        })
        .sum()
}

/// Shannon information of a joint measure: KL divergence from the product of its marginals.
pub fn mutual_information(j: &JointMeasure, base: LogBase) -> f64 {
    let px = j.row_sums();
    let pu = j.col_sums();
    let mut total = 0.0;
    for (x, row) in j.entries.chunks(j.cols).enumerate() {
        for (u, &p) in row.iter().enumerate() {
            if p > 0.0 {
                total += p * (p / (px[x] * pu[u])).ln();
            }
        }
    }
    base.from_nats(total.max(0.0))
}

/// Square cost matrix `c(x, u)` with a cached translation-invariance flag.
#[derive(Debug, Clone, PartialEq)]
pub struct CostMatrix {
    n: usize,
    entries: Vec<f64>,
    translation_invariant: bool,
}

impl CostMatrix {
    pub fn new(n: usize, entries: Vec<f64>) -> Result<Self> {
        if n == 0 {
            return Err(VoiError::InvalidSize {
                n,
                reason: "empty cost matrix",
            });
        }
        if entries.len() != n * n {
            return Err(VoiError::DimensionMismatch {
                expected: n * n,
                found: entries.len(),
            });
        }
        if let Some(i) = entries.iter().position(|v| !v.is_finite()) {
            return Err(VoiError::InvalidCost {
                row: i / n,
                col: i % n,
                value: entries[i],
            });
        }
        let translation_invariant = crate::engine::translation_invariant_entries(n, &entries);
        Ok(Self {
            n,
            entries,
            translation_invariant,
        })
    }

    /// Circulant matrix `c(x, u) = row[(u - x) mod n]`.
    pub fn circulant(row: &[f64]) -> Result<Self> {
        let n = row.len();
        let entries = (0..n)
            .flat_map(|x| (0..n).map(move |u| row[(u + n - x) % n]))
            .collect();
        Self::new(n, entries)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, x: usize, u: usize) -> f64 {
        self.entries[x * self.n + u]
    }

    pub fn row(&self, x: usize) -> &[f64] {
        &self.entries[x * self.n..(x + 1) * self.n]
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    pub fn translation_invariant(&self) -> bool {
        self.translation_invariant
    }

    pub fn max_abs(&self) -> f64 {
        self.entries.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// `k · c`.
    pub fn scaled(&self, k: f64) -> Result<Self> {
        Self::new(self.n, self.entries.iter().map(|v| v * k).collect())
    }
}

/// Mass-weighted sum of costs.
pub fn expected_cost(j: &JointMeasure, c: &CostMatrix) -> Result<f64> {
    if j.rows != c.n || j.cols != c.n {
        return Err(VoiError::DimensionMismatch {
            expected: c.n * c.n,
            found: j.rows * j.cols,
        });
    }
    Ok(j.entries.iter().zip(&c.entries).map(|(p, v)| p * v).sum())
}

pub fn entropy(p: &ProbVector, base: LogBase) -> f64 {
    let h: f64 = p.0.iter().filter(|&&w| w > 0.0).map(|&w| -w * w.ln()).sum();
    base.from_nats(h.max(0.0))
}
