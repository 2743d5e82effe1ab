//! Entropy measures over finite probability distributions.
//!
//! The central measure uses a Gaussian information gain `I(p) = e^(-p²)` in
//! place of Shannon's `-ln p`. Its expectation
//!
//! ```text
//! H(P) = Σ p_i · e^(-p_i²)
//! ```
//!
//! is bounded by `e^(-1)` (a single certain outcome) and `e^(-1/n²)` (the
//! uniform distribution over `n` outcomes), which gives the normalized form
//!
//! ```text
//! H_N = (H - e^(-1)) / (e^(-1/n²) - e^(-1))      ∈ [0, 1]
//! ```
//!
//! Conditional, joint and relative variants are defined on [`JointDist`] and
//! pairs of [`ProbDist`]s. Shannon, Rényi, Tsallis and Pal & Pal entropies are
//! provided for comparison; the logarithmic ones use natural logarithms.
//!
//! Every sum runs left to right in index order (row-major for joints), so
//! results are bit-for-bit reproducible.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Tolerance on `Σ p_i = 1` accepted at construction.
pub const SUM_TOLERANCE: f64 = 1e-9;

/// `e^(-1)`: the minimum of the information gain and of the entropy.
pub const E_INV: f64 = 0.367_879_441_171_442_33;

/// Default Rényi order.
pub const DEFAULT_ALPHA: f64 = 2.0;
/// Default Tsallis index.
pub const DEFAULT_Q: f64 = 2.0;

/// Turns `-0.0` into `0.0` so degenerate cases print without a sign.
#[inline]
fn canon(x: f64) -> f64 {
    x + 0.0
}

/// A complete finite probability vector.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbDist {
    probs: Vec<f64>,
}

impl ProbDist {
    /// Validates and wraps `probs`. The values are stored as given; they must
    /// already sum to one within [`SUM_TOLERANCE`].
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        if probs.is_empty() {
            return Err(Error::InvalidDistribution("no outcomes".into()));
        }
        for (i, &p) in probs.iter().enumerate() {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::InvalidDistribution(format!(
                    "probability {p} at index {i} outside [0, 1]"
                )));
            }
        }
        let sum: f64 = probs.iter().sum();
        if (sum - 1.0).abs() > SUM_TOLERANCE {
            return Err(Error::InvalidDistribution(format!(
                "probabilities sum to {sum}, not 1"
            )));
        }
        Ok(ProbDist { probs })
    }

    /// Builds a distribution by dividing non-negative weights by their sum.
    pub fn normalize(weights: &[f64]) -> Result<Self> {
        if let Some((i, w)) = weights
            .iter()
            .enumerate()
            .find(|(_, w)| !w.is_finite() || **w < 0.0)
        {
            return Err(Error::InvalidDistribution(format!(
                "weight {w} at index {i} is negative or not finite"
            )));
        }
        let total: f64 = weights.iter().sum();
        if total.is_nan() || total <= 0.0 {
            return Err(Error::InvalidDistribution("weights sum to zero".into()));
        }
        ProbDist::new(weights.iter().map(|w| w / total).collect())
    }

    /// Builds a distribution from integer counts.
    pub fn from_counts(counts: &[u64]) -> Result<Self> {
        let total: u64 = counts.iter().sum();
        if total == 0 {
            return Err(Error::InvalidDistribution("counts sum to zero".into()));
        }
        let total = total as f64;
        ProbDist::new(counts.iter().map(|&c| c as f64 / total).collect())
    }

    /// The uniform distribution over `n` outcomes.
    pub fn uniform(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::domain("uniform distribution needs n >= 1"));
        }
        ProbDist::new(vec![1.0 / n as f64; n])
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.probs
    }
}

/// An `n × m` joint probability matrix stored row-major. Rows index `X`,
/// columns index `Y`.
#[derive(Debug, Clone, PartialEq)]
pub struct JointDist {
    rows: usize,
    cols: usize,
    cells: Vec<f64>,
}

impl JointDist {
    pub fn new(rows: usize, cols: usize, cells: Vec<f64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::InvalidDistribution(format!(
                "joint dimensions {rows}x{cols} must be positive"
            )));
        }
        if cells.len() != rows * cols {
            return Err(Error::InvalidDistribution(format!(
                "{} cells given for a {rows}x{cols} joint",
                cells.len()
            )));
        }
        // Reuses the vector validation; only the flat shape matters for it.
        let cells = ProbDist::new(cells)?.into_inner();
        Ok(JointDist { rows, cols, cells })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        let m = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != m) {
            return Err(Error::InvalidDistribution("ragged joint rows".into()));
        }
        JointDist::new(n, m, rows.concat())
    }

    /// Joint of independent variables: `p(x_i, y_j) = p(x_i) · p(y_j)`.
    pub fn outer(x: &ProbDist, y: &ProbDist) -> Result<Self> {
        let cells = x
            .probs()
            .iter()
            .flat_map(|&px| y.probs().iter().map(move |&py| px * py))
            .collect();
        JointDist::new(x.len(), y.len(), cells)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn cells(&self) -> &[f64] {
        &self.cells
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.cells[i * self.cols + j]
    }

    pub fn transpose(&self) -> JointDist {
        let mut cells = Vec::with_capacity(self.cells.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                cells.push(self.get(i, j));
            }
        }
        JointDist {
            rows: self.cols,
            cols: self.rows,
            cells,
        }
    }

    fn row_sums(&self) -> Vec<f64> {
        self.cells
            .chunks_exact(self.cols)
            .map(|row| row.iter().sum())
            .collect()
    }

    fn col_sums(&self) -> Vec<f64> {
        let mut sums = vec![0.0; self.cols];
        for row in self.cells.chunks_exact(self.cols) {
            for (s, &p) in sums.iter_mut().zip(row) {
                *s += p;
            }
        }
        sums
    }

    /// Marginal of `X`: `p(x_i) = Σ_j p(x_i, y_j)`.
    pub fn marginal_x(&self) -> ProbDist {
        ProbDist::new(clamp_unit(self.row_sums())).expect("marginal of a valid joint is valid")
    }

    /// Marginal of `Y`: `p(y_j) = Σ_i p(x_i, y_j)`.
    pub fn marginal_y(&self) -> ProbDist {
        ProbDist::new(clamp_unit(self.col_sums())).expect("marginal of a valid joint is valid")
    }
}

/// Rounding can push a near-certain marginal a few ulps past one.
fn clamp_unit(mut v: Vec<f64>) -> Vec<f64> {
    for p in &mut v {
        *p = p.min(1.0);
    }
    v
}

/// Gaussian information gain `e^(-p²)` of an event with probability `p`.
pub fn info_gain(p: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::domain(format!("probability {p} outside [0, 1]")));
    }
    Ok((-p * p).exp())
}

/// `p · e^(-p²)`, exactly zero at `p = 0`.
#[inline]
fn weighted_gain(p: f64) -> f64 {
    p * (-p * p).exp()
}

/// Non-extensive entropy `Σ p_i · e^(-p_i²)`.
pub fn entropy(dist: &ProbDist) -> f64 {
    // Zero cells add exactly 0.0, so skipping them leaves the sum unchanged.
    dist.probs()
        .iter()
        .filter(|&&p| p > 0.0)
        .map(|&p| weighted_gain(p))
        .sum()
}

/// Analytic `(H_min, H_max) = (e^(-1), e^(-1/n²))` for `n` outcomes.
pub fn entropy_bounds(n: usize) -> Result<(f64, f64)> {
    if n == 0 {
        return Err(Error::domain("entropy bounds need n >= 1"));
    }
    let n = n as f64;
    Ok((E_INV, (-1.0 / (n * n)).exp()))
}

/// Entropy rescaled to `[0, 1]` by its analytic bounds for `n = P.len()`.
pub fn normalized_entropy(dist: &ProbDist) -> Result<f64> {
    if dist.len() < 2 {
        return Err(Error::DegenerateNormalization);
    }
    let (lo, hi) = entropy_bounds(dist.len())?;
    let h = entropy(dist);
    Ok(((h - lo) / (hi - lo)).clamp(0.0, 1.0))
}

/// Shannon entropy in nats, with `0 · ln 0 = 0`.
pub fn shannon(dist: &ProbDist) -> f64 {
    let s: f64 = dist
        .probs()
        .iter()
        .filter(|&&p| p > 0.0)
        .map(|&p| p * p.ln())
        .sum();
    canon(-s)
}

fn check_order(name: &str, value: f64) -> Result<()> {
    if !value.is_finite() || value <= 0.0 || value == 1.0 {
        return Err(Error::domain(format!(
            "{name} must be positive, finite and != 1 (got {value})"
        )));
    }
    Ok(())
}

fn power_sum(dist: &ProbDist, exponent: f64) -> f64 {
    dist.probs()
        .iter()
        .filter(|&&p| p > 0.0)
        .map(|&p| p.powf(exponent))
        .sum()
}

/// Rényi entropy of order `alpha` in nats.
pub fn renyi(dist: &ProbDist, alpha: f64) -> Result<f64> {
    check_order("alpha", alpha)?;
    Ok(canon(power_sum(dist, alpha).ln() / (1.0 - alpha)))
}

/// Tsallis entropy with index `q`.
pub fn tsallis(dist: &ProbDist, q: f64) -> Result<f64> {
    check_order("q", q)?;
    Ok(canon((1.0 - power_sum(dist, q)) / (q - 1.0)))
}

/// Pal & Pal exponential entropy `Σ p_i · e^(1 - p_i)`.
pub fn pal_pal(dist: &ProbDist) -> f64 {
    dist.probs()
        .iter()
        .filter(|&&p| p > 0.0)
        .map(|&p| p * (1.0 - p).exp())
        .sum()
}

/// Sums `p · e^(-(p/m)²)` over cells, where `m` is the marginal chosen by
/// `marginal_of(i, j)`. Zero cells contribute nothing, which also covers
/// zero marginals (a zero marginal forces every cell in its line to zero).
fn conditional_sum(joint: &JointDist, marginal_of: impl Fn(usize, usize) -> f64) -> f64 {
    let mut sum = 0.0;
    for i in 0..joint.rows() {
        for j in 0..joint.cols() {
            let p = joint.get(i, j);
            if p == 0.0 {
                continue;
            }
            let r = p / marginal_of(i, j);
            sum += p * (-r * r).exp();
        }
    }
    sum
}

/// `H(X|Y) = Σ_i Σ_j p(x_i, y_j) · e^(-p²(x_i | y_j))`.
pub fn conditional_entropy_x_given_y(joint: &JointDist) -> f64 {
    let py = joint.col_sums();
    conditional_sum(joint, |_, j| py[j])
}

/// `H(Y|X) = Σ_i Σ_j p(x_i, y_j) · e^(-p²(y_j | x_i))`.
pub fn conditional_entropy_y_given_x(joint: &JointDist) -> f64 {
    let px = joint.row_sums();
    conditional_sum(joint, |i, _| px[i])
}

/// `H(X, Y) = Σ_i Σ_j p(x_i, y_j) · e^(-p²(x_i, y_j))`.
pub fn joint_entropy(joint: &JointDist) -> f64 {
    joint
        .cells()
        .iter()
        .filter(|&&p| p > 0.0)
        .map(|&p| weighted_gain(p))
        .sum()
}

/// Relative entropy `e^(-1) - Σ p_i · e^(-p_i²/q_i²)`.
///
/// Terms with `p_i = 0` contribute zero; so do terms with `q_i = 0 < p_i`,
/// where the exponent diverges to `-∞`.
pub fn relative_entropy(p: &ProbDist, q: &ProbDist) -> Result<f64> {
    if p.len() != q.len() {
        return Err(Error::domain(format!(
            "relative entropy needs equal lengths ({} vs {})",
            p.len(),
            q.len()
        )));
    }
    let mut sum = 0.0;
    for (&pi, &qi) in p.probs().iter().zip(q.probs()) {
        if pi == 0.0 || qi == 0.0 {
            continue;
        }
        let r = pi / qi;
        sum += pi * (-r * r).exp();
    }
    Ok(canon(E_INV - sum))
}

/// Selects one of the scalar entropy measures, with its parameter where the
/// measure needs one.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EntropyMeasure {
    Proposed,
    ProposedNormalized,
    Shannon,
    Renyi { alpha: f64 },
    Tsallis { q: f64 },
    PalPal,
}

impl EntropyMeasure {
    pub fn renyi(alpha: f64) -> Result<Self> {
        check_order("alpha", alpha)?;
        Ok(EntropyMeasure::Renyi { alpha })
    }

    pub fn tsallis(q: f64) -> Result<Self> {
        check_order("q", q)?;
        Ok(EntropyMeasure::Tsallis { q })
    }

    /// The five measures compared against each other, with default
    /// parameters. The proposed measure appears in its normalized form.
    pub fn comparison_set(alpha: f64, q: f64) -> Result<[EntropyMeasure; 5]> {
        Ok([
            EntropyMeasure::ProposedNormalized,
            EntropyMeasure::Shannon,
            EntropyMeasure::renyi(alpha)?,
            EntropyMeasure::tsallis(q)?,
            EntropyMeasure::PalPal,
        ])
    }

    /// Parses a measure name, filling in `alpha` / `q` where needed.
    pub fn from_name(name: &str, alpha: f64, q: f64) -> Result<Self> {
        match MeasureKind::from_str(name)? {
            MeasureKind::Proposed => Ok(EntropyMeasure::Proposed),
            MeasureKind::ProposedNormalized => Ok(EntropyMeasure::ProposedNormalized),
            MeasureKind::Shannon => Ok(EntropyMeasure::Shannon),
            MeasureKind::Renyi => EntropyMeasure::renyi(alpha),
            MeasureKind::Tsallis => EntropyMeasure::tsallis(q),
            MeasureKind::PalPal => Ok(EntropyMeasure::PalPal),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            EntropyMeasure::Proposed => "proposed",
            EntropyMeasure::ProposedNormalized => "proposed-normalized",
            EntropyMeasure::Shannon => "shannon",
            EntropyMeasure::Renyi { .. } => "renyi",
            EntropyMeasure::Tsallis { .. } => "tsallis",
            EntropyMeasure::PalPal => "palpal",
        }
    }
}

impl fmt::Display for EntropyMeasure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EntropyMeasure::Renyi { alpha } => write!(f, "renyi(alpha={alpha})"),
            EntropyMeasure::Tsallis { q } => write!(f, "tsallis(q={q})"),
            other => f.write_str(other.name()),
        }
    }
}

/// Parameter-free tag for [`EntropyMeasure`], used when parsing names.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MeasureKind {
    Proposed,
    ProposedNormalized,
    Shannon,
    Renyi,
    Tsallis,
    PalPal,
}

impl FromStr for MeasureKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "proposed" => Ok(MeasureKind::Proposed),
            "proposed-normalized" | "proposed-norm" | "normalized" => {
                Ok(MeasureKind::ProposedNormalized)
            }
            "shannon" => Ok(MeasureKind::Shannon),
            "renyi" => Ok(MeasureKind::Renyi),
            "tsallis" => Ok(MeasureKind::Tsallis),
            "palpal" | "pal-pal" => Ok(MeasureKind::PalPal),
            other => Err(Error::domain(format!("unknown entropy measure '{other}'"))),
        }
    }
}

/// Evaluates `measure` on `dist`.
pub fn apply_measure(measure: EntropyMeasure, dist: &ProbDist) -> Result<f64> {
    match measure {
        EntropyMeasure::Proposed => Ok(entropy(dist)),
        EntropyMeasure::ProposedNormalized => normalized_entropy(dist),
        EntropyMeasure::Shannon => Ok(shannon(dist)),
        EntropyMeasure::Renyi { alpha } => renyi(dist, alpha),
        EntropyMeasure::Tsallis { q } => tsallis(dist, q),
        EntropyMeasure::PalPal => Ok(pal_pal(dist)),
    }
}
