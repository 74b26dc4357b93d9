use crate::error::{Error, Result};
use crate::measures::DiscreteDistribution;
use crate::numeric::CompensatedSum;

/// Right-continuous step cdf of a finite distribution on the real line.
///
/// Only atoms with positive mass are kept, so `cum` is strictly increasing
/// and ends at exactly 1.
#[derive(Debug, Clone, PartialEq)]
pub struct StepCdf {
    breakpoints: Vec<f64>,
    masses: Vec<f64>,
    cum: Vec<f64>,
    left_limits: Vec<f64>,
}

impl StepCdf {
    /// Builds the cdf from (value, mass) atoms in any order.
    pub fn new(atoms: impl IntoIterator<Item = (f64, f64)>) -> Result<Self> {
        let mut atoms: Vec<(f64, f64)> = atoms.into_iter().filter(|&(_, m)| m > 0.0).collect();
        if atoms.is_empty() {
            return Err(Error::InvalidDistribution("cdf needs an atom with positive mass".into()));
        }
        if atoms.iter().any(|&(x, m)| !x.is_finite() || !m.is_finite()) {
            return Err(Error::InvalidDistribution("atoms must be finite".into()));
        }
        atoms.sort_by(|a, b| a.0.total_cmp(&b.0));
        if atoms.windows(2).any(|w| w[0].0 == w[1].0) {
            return Err(Error::InvalidDistribution("duplicate atom value".into()));
        }
        let total: f64 = atoms.iter().map(|a| a.1).sum();
        let mut acc = CompensatedSum::new();
        let mut breakpoints = Vec::with_capacity(atoms.len());
        let mut masses = Vec::with_capacity(atoms.len());
        let mut cum = Vec::with_capacity(atoms.len());
        let mut left_limits = Vec::with_capacity(atoms.len());
        for (x, m) in atoms {
            let m = m / total;
            left_limits.push(acc.value());
            acc.add(m);
            breakpoints.push(x);
            masses.push(m);
            cum.push(acc.value());
        }
        *cum.last_mut().expect("nonempty") = 1.0;
        Ok(Self {
            breakpoints,
            masses,
            cum,
            left_limits,
        })
    }

    /// Cdf of a distribution whose labels are numeric.
    pub fn from_distribution(d: &DiscreteDistribution) -> Result<Self> {
        let atoms = d
            .atoms()
            .map(|(l, m)| {
                l.as_f64()
                    .map(|x| (x, m))
                    .ok_or_else(|| Error::InvalidDistribution(format!("label {l} is not numeric")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(atoms)
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    pub fn masses(&self) -> &[f64] {
        &self.masses
    }

    pub fn cum(&self) -> &[f64] {
        &self.cum
    }

    pub fn left_limits(&self) -> &[f64] {
        &self.left_limits
    }

    /// `F(s) = P(Z <= s)`.
    pub fn cdf(&self, s: f64) -> f64 {
        let k = self.breakpoints.partition_point(|&b| b <= s);
        if k == 0 {
            0.0
        } else {
            self.cum[k - 1]
        }
    }

    /// `F(s-) = P(Z < s)`.
    pub fn left_limit(&self, s: f64) -> f64 {
        let k = self.breakpoints.partition_point(|&b| b < s);
        if k == 0 {
            0.0
        } else {
            self.cum[k - 1]
        }
    }
}

/// `inf { s : F(s) >= t }` with `inf R = -inf` and `inf {} = +inf`.
pub fn generalized_inverse(f: &StepCdf, t: f64) -> f64 {
    assert!(!t.is_nan(), "t must be a number");
    if t <= 0.0 {
        return f64::NEG_INFINITY;
    }
    let k = f.cum.partition_point(|&c| c < t);
    f.breakpoints.get(k).copied().unwrap_or(f64::INFINITY)
}
