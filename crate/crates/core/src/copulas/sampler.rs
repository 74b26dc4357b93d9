use std::str::FromStr;

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::grid::{checkerboard, GridCopula};
use crate::error::Error;
use crate::measures::JointDistribution;

/// How the uniform randomizers spreading each atom over its cdf cell are drawn.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RandomizationScheme {
    /// One randomizer per coordinate, shared by all atoms (checkerboard copula).
    Shared,
    /// A fresh randomizer for every atom of every coordinate.
    IndependentPerAtom,
    /// One randomizer `T`; the first coordinate uses `T`, the second `1 - T`.
    Antithetic,
}

impl RandomizationScheme {
    pub fn cli_name(&self) -> &'static str {
        match self {
            RandomizationScheme::Shared => "shared",
            RandomizationScheme::IndependentPerAtom => "independent",
            RandomizationScheme::Antithetic => "antithetic",
        }
    }
}

impl FromStr for RandomizationScheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s.to_ascii_lowercase().as_str() {
            "shared" | "checkerboard" => Ok(RandomizationScheme::Shared),
            "independent" | "independent_per_atom" => Ok(RandomizationScheme::IndependentPerAtom),
            "antithetic" => Ok(RandomizationScheme::Antithetic),
            other => Err(Error::InvalidParameter(format!("unknown randomization scheme '{other}'"))),
        }
    }
}

/// Draws from an interpolating copula of a discrete joint.
///
/// Sample `k` reads its uniforms from fixed positions of a ChaCha8 stream
/// (one slot for the atom, one per X atom, one per Y atom), so any index
/// range can be produced independently and concatenated.
#[derive(Debug, Clone)]
pub struct InterpolatingSampler {
    grid: GridCopula,
    cell_cum: Vec<f64>,
    cell_index: Vec<(usize, usize)>,
    scheme: RandomizationScheme,
    seed: u64,
}

impl InterpolatingSampler {
    pub fn new(j: &JointDistribution, scheme: RandomizationScheme, seed: u64) -> Self {
        let grid = checkerboard(j);
        let (m, n) = grid.shape();
        let mut cell_cum = Vec::new();
        let mut cell_index = Vec::new();
        let mut acc = crate::numeric::CompensatedSum::new();
        for i in 0..m {
            for k in 0..n {
                let r = grid.mass(i, k);
                if r > 0.0 {
                    acc.add(r);
                    cell_cum.push(acc.value());
                    cell_index.push((i, k));
                }
            }
        }
        InterpolatingSampler {
            grid,
            cell_cum,
            cell_index,
            scheme,
            seed,
        }
    }

    pub fn grid(&self) -> &GridCopula {
        &self.grid
    }

    fn slots(&self) -> u128 {
        let (m, n) = self.grid.shape();
        (1 + m + n) as u128
    }

    /// Samples `start .. start + count`.
    pub fn sample_range(&self, start: u64, count: usize) -> Vec<(f64, f64)> {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        let slots = self.slots();
        let (m, _) = self.grid.shape();
        let mut out = Vec::with_capacity(count);
        for k in start..start + count as u64 {
            let base = k as u128 * slots;
            let mut draw = |slot: usize| -> f64 {
                rng.set_word_pos(2 * (base + slot as u128));
                unit(rng.next_u64())
            };
            let total = *self.cell_cum.last().expect("joint has mass");
            let pick = draw(0) * total;
            let c = self.cell_cum.partition_point(|&s| s <= pick).min(self.cell_cum.len() - 1);
            let (i, j) = self.cell_index[c];
            // T in (0, 1]
            let (t, w) = match self.scheme {
                RandomizationScheme::Shared => (1.0 - draw(1), 1.0 - draw(1 + m)),
                RandomizationScheme::IndependentPerAtom => (1.0 - draw(1 + i), 1.0 - draw(1 + m + j)),
                RandomizationScheme::Antithetic => {
                    let t = 1.0 - draw(1);
                    (t, 1.0 - t)
                }
            };
            let u = (self.grid.u_breaks()[i] + self.grid.u_widths()[i] * t).min(1.0);
            let v = (self.grid.v_breaks()[j] + self.grid.v_widths()[j] * w).min(1.0);
            out.push((u, v));
        }
        out
    }
}

fn unit(x: u64) -> f64 {
    (x >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// `n` pairs `(u, v)` from the interpolating copula of `j` under `scheme`.
pub fn interpolating_sample(j: &JointDistribution, scheme: RandomizationScheme, n: usize, seed: u64) -> Vec<(f64, f64)> {
    InterpolatingSampler::new(j, scheme, seed).sample_range(0, n)
}

/// Samples with indices `start .. start + count` of the same stream.
pub fn interpolating_sample_range(
    j: &JointDistribution,
    scheme: RandomizationScheme,
    seed: u64,
    start: u64,
    count: usize,
) -> Vec<(f64, f64)> {
    InterpolatingSampler::new(j, scheme, seed).sample_range(start, count)
}

/// Kolmogorov-Smirnov statistic of a sample against U(0,1) and its
/// asymptotic p-value.
pub fn ks_uniform(xs: &[f64]) -> (f64, f64) {
    assert!(!xs.is_empty());
    let mut s = xs.to_vec();
    s.sort_by(f64::total_cmp);
    let n = s.len() as f64;
    let mut d: f64 = 0.0;
    for (k, &x) in s.iter().enumerate() {
        let lo = k as f64 / n;
        let hi = (k + 1) as f64 / n;
        d = d.max(hi - x).max(x - lo);
    }
    let sqrt_n = n.sqrt();
    let lambda = (sqrt_n + 0.12 + 0.11 / sqrt_n) * d;
    (d, kolmogorov_q(lambda))
}

fn kolmogorov_q(lambda: f64) -> f64 {
    if lambda < 0.2 {
        return 1.0;
    }
    let mut sum = 0.0;
    for k in 1..=100 {
        let k = k as f64;
        let term = (-2.0 * k * k * lambda * lambda).exp();
        sum += if k as i64 % 2 == 1 { term } else { -term };
        if term < 1e-16 {
            break;
        }
    }
    (2.0 * sum).clamp(0.0, 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bernoulli_example() -> JointDistribution {
        JointDistribution::bernoulli_pair(0.5, 0.5, 5.0 / 16.0).unwrap()
    }

    fn empirical_cdf(s: &[(f64, f64)], u: f64, v: f64) -> f64 {
        s.iter().filter(|&&(a, b)| a <= u && b <= v).count() as f64 / s.len() as f64
    }

    fn within_three_se(s: &[(f64, f64)], u: f64, v: f64, truth: f64) -> bool {
        let se = (truth * (1.0 - truth) / s.len() as f64).sqrt().max(1e-12);
        (empirical_cdf(s, u, v) - truth).abs() <= 3.0 * se
    }

    // C^ip for the antithetic scheme: within cell (x, y), U and V are
    // comonotone-reversed uniforms over the cell, so
    // P(U<=u, V<=v | x, y) = max(0, s_x(u) + w_y(v) - 1).
    fn antithetic_oracle(g: &GridCopula, u: f64, v: f64) -> f64 {
        let (m, n) = g.shape();
        let frac = |b: &[f64], w: &[f64], i: usize, x: f64| ((x - b[i]) / w[i]).clamp(0.0, 1.0);
        let mut total = 0.0;
        for i in 0..m {
            for j in 0..n {
                let s = frac(g.u_breaks(), g.u_widths(), i, u);
                let w = frac(g.v_breaks(), g.v_widths(), j, v);
                total += g.mass(i, j) * (s + w - 1.0).max(0.0);
            }
        }
        total
    }

    #[test]
    fn scheme_names_round_trip() {
        for s in [RandomizationScheme::Shared, RandomizationScheme::IndependentPerAtom, RandomizationScheme::Antithetic] {
            assert_eq!(s.cli_name().parse::<RandomizationScheme>().unwrap(), s);
        }
        assert!("bogus".parse::<RandomizationScheme>().is_err());
    }

    #[test]
    fn reproducible_and_range_consistent() {
        let j = JointDistribution::from_matrix(vec![vec![0.1, 0.2, 0.0], vec![0.3, 0.15, 0.25]]).unwrap();
        for scheme in [RandomizationScheme::Shared, RandomizationScheme::IndependentPerAtom, RandomizationScheme::Antithetic] {
            let a = interpolating_sample(&j, scheme, 500, 42);
            assert_eq!(a, interpolating_sample(&j, scheme, 500, 42));
            assert_ne!(a, interpolating_sample(&j, scheme, 500, 43));
            let mut joined = interpolating_sample_range(&j, scheme, 42, 0, 200);
            joined.extend(interpolating_sample_range(&j, scheme, 42, 200, 300));
            assert_eq!(a, joined);
            assert!(a.iter().all(|&(u, v)| u > 0.0 && u <= 1.0 && (0.0..=1.0).contains(&v)));
        }
    }

    #[test]
    fn degenerate_joint_gives_uniform_pairs() {
        let j = JointDistribution::from_matrix(vec![vec![1.0]]).unwrap();
        let s = interpolating_sample(&j, RandomizationScheme::Shared, 20_000, 1);
        let us: Vec<f64> = s.iter().map(|p| p.0).collect();
        let vs: Vec<f64> = s.iter().map(|p| p.1).collect();
        assert!(ks_uniform(&us).1 > 0.001);
        assert!(ks_uniform(&vs).1 > 0.001);
        assert!(within_three_se(&s, 0.5, 0.5, 0.25));
    }

    #[test]
    fn marginals_uniform_under_all_schemes() {
        let j = JointDistribution::from_matrix(vec![vec![0.05, 0.2, 0.1], vec![0.25, 0.0, 0.4]]).unwrap();
        for scheme in [RandomizationScheme::Shared, RandomizationScheme::IndependentPerAtom, RandomizationScheme::Antithetic] {
            let s = interpolating_sample(&j, scheme, 100_000, 7);
            let us: Vec<f64> = s.iter().map(|p| p.0).collect();
            let vs: Vec<f64> = s.iter().map(|p| p.1).collect();
            assert!(ks_uniform(&us).1 > 0.001, "{scheme:?} u");
            assert!(ks_uniform(&vs).1 > 0.001, "{scheme:?} v");
        }
    }

    #[test]
    fn shared_matches_checkerboard_cdf() {
        let j = bernoulli_example();
        let cb = checkerboard(&j);
        let s = interpolating_sample(&j, RandomizationScheme::Shared, 100_000, 2024);
        for u in [0.25, 0.5, 0.75] {
            for v in [0.25, 0.5, 0.75] {
                assert!(within_three_se(&s, u, v, cb.cdf(u, v)), "({u},{v})");
            }
        }
    }

    #[test]
    fn antithetic_matches_closed_form() {
        let j = bernoulli_example();
        let cb = checkerboard(&j);
        let s = interpolating_sample(&j, RandomizationScheme::Antithetic, 100_000, 2024);
        for u in [0.25, 0.5, 0.75] {
            for v in [0.25, 0.5, 0.75] {
                assert!(within_three_se(&s, u, v, antithetic_oracle(&cb, u, v)), "({u},{v})");
            }
        }
        // the two interpolating copulas really differ inside the atom cells
        assert!((antithetic_oracle(&cb, 0.25, 0.25) - cb.cdf(0.25, 0.25)).abs() > 0.05);
        assert_eq!(antithetic_oracle(&cb, 0.5, 0.5), cb.cdf(0.5, 0.5));
    }

    #[test]
    fn ks_detects_non_uniform() {
        let xs: Vec<f64> = (0..10_000).map(|k| (k as f64 / 10_000.0).powi(2)).collect();
        assert!(ks_uniform(&xs).1 < 1e-6);
        let ys: Vec<f64> = (0..10_000).map(|k| (k as f64 + 0.5) / 10_000.0).collect();
        assert!(ks_uniform(&ys).1 > 0.99);
    }
}
