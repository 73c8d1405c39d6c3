/// Thresholds for floating-point decisions. The exact backend ignores them.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    /// Relative singular-value cutoff. `None` uses
    /// `RANK_SLACK * max(rows, cols) * eps` for the matrix being ranked.
    pub rank_rel: Option<f64>,
    /// Relative residual threshold for matrix equality.
    pub eq_rel: f64,
    /// Zero-eigenvalue clustering threshold, relative to `||A||_2`. `None`
    /// splits the spectrum by the certified count `rk(A^k)` and only checks
    /// that the two clusters are separated.
    pub eig_zero_rel: Option<f64>,
}

pub const DEFAULT_EQ_REL: f64 = 1e-10;

/// Multiplier on `max(rows, cols) * eps` for the default rank cutoff.
pub const RANK_SLACK: f64 = 100.0;

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance {
            rank_rel: None,
            eq_rel: DEFAULT_EQ_REL,
            eig_zero_rel: None,
        }
    }
}

impl Tolerance {
    pub fn with_eq_rel(mut self, eq_rel: f64) -> Self {
        self.eq_rel = eq_rel;
        self
    }

    pub fn with_rank_rel(mut self, rank_rel: f64) -> Self {
        self.rank_rel = Some(rank_rel);
        self
    }

    pub fn with_eig_zero_rel(mut self, eig_zero_rel: f64) -> Self {
        self.eig_zero_rel = Some(eig_zero_rel);
        self
    }

    pub fn rank_cutoff_rel(&self, rows: usize, cols: usize) -> f64 {
        self.rank_rel
            .unwrap_or_else(|| RANK_SLACK * rows.max(cols).max(1) as f64 * f64::EPSILON)
    }

    pub fn is_valid(&self) -> bool {
        self.eq_rel >= 0.0
            && self.rank_rel.is_none_or(|r| r >= 0.0)
            && self.eig_zero_rel.is_none_or(|r| r >= 0.0)
    }
}
