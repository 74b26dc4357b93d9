//! Random inputs for property checks: distributions, joints, maps, kernels
//! and generators drawn from a seeded RNG.

use rand::Rng;

use crate::generators::{builtin, BuiltinKind, Generator};
use crate::measures::{DiscreteDistribution, JointDistribution, Label, StochasticKernel};

/// Positive masses summing to one (up to rounding); each entry is zeroed with
/// probability `zero_prob`, keeping at least one positive entry.
pub fn random_masses<R: Rng + ?Sized>(rng: &mut R, k: usize, zero_prob: f64) -> Vec<f64> {
    assert!(k >= 1);
    let mut m: Vec<f64> = (0..k)
        .map(|_| {
            if rng.random_bool(zero_prob) {
                0.0
            } else {
                -(1.0 - rng.random::<f64>()).ln()
            }
        })
        .collect();
    if m.iter().all(|&x| x == 0.0) {
        let i = rng.random_range(0..k);
        m[i] = 1.0;
    }
    let s: f64 = m.iter().sum();
    m.iter_mut().for_each(|x| *x /= s);
    m
}

pub fn int_labels(k: usize) -> Vec<Label> {
    (0..k as i64).map(Label::Int).collect()
}

pub fn random_distribution<R: Rng + ?Sized>(rng: &mut R, k: usize, zero_prob: f64) -> DiscreteDistribution {
    DiscreteDistribution::new(int_labels(k).into_iter().zip(random_masses(rng, k, zero_prob)))
        .expect("normalized masses")
}

/// Two distributions on the labels `0..k`, `k` uniform in `1..=max_atoms`.
pub fn random_pair<R: Rng + ?Sized>(rng: &mut R, max_atoms: usize) -> (DiscreteDistribution, DiscreteDistribution) {
    let k = rng.random_range(1..=max_atoms);
    (random_distribution(rng, k, 0.2), random_distribution(rng, k, 0.2))
}

/// Two distributions with disjoint supports.
pub fn mutually_singular_pair<R: Rng + ?Sized>(
    rng: &mut R,
    max_atoms: usize,
) -> (DiscreteDistribution, DiscreteDistribution) {
    let k = rng.random_range(2..=max_atoms.max(2));
    let split = rng.random_range(1..k);
    let mut side: Vec<bool> = (0..k).map(|i| i < split).collect();
    for i in (1..k).rev() {
        side.swap(i, rng.random_range(0..=i));
    }
    let mass_on = |rng: &mut R, want: bool| {
        let mut m = random_masses(rng, k, 0.0);
        for (x, &s) in m.iter_mut().zip(&side) {
            if s != want {
                *x = 0.0;
            }
        }
        let t: f64 = m.iter().sum();
        m.iter_mut().for_each(|x| *x /= t);
        DiscreteDistribution::new(int_labels(k).into_iter().zip(m)).expect("normalized masses")
    };
    let p = mass_on(rng, true);
    let q = mass_on(rng, false);
    (p, q)
}

/// A joint of shape up to `max_m x max_n` with some zero cells.
pub fn random_joint<R: Rng + ?Sized>(rng: &mut R, max_m: usize, max_n: usize) -> JointDistribution {
    let m = rng.random_range(1..=max_m);
    let n = rng.random_range(1..=max_n);
    let cells = random_masses(rng, m * n, 0.25);
    JointDistribution::from_matrix(cells.chunks(n).map(<[f64]>::to_vec).collect()).expect("normalized cells")
}

/// A map from `0..k` onto at most `k_out` images, as a label lookup table.
pub fn random_map<R: Rng + ?Sized>(rng: &mut R, k: usize, k_out: usize) -> Vec<(Label, Label)> {
    (0..k as i64)
        .map(|i| (Label::Int(i), Label::Int(rng.random_range(0..k_out as i64))))
        .collect()
}

pub fn random_kernel<R: Rng + ?Sized>(rng: &mut R, source: Vec<Label>, max_target: usize) -> StochasticKernel {
    let t = rng.random_range(1..=max_target);
    let rows = source.iter().map(|_| random_masses(rng, t, 0.3)).collect();
    StochasticKernel::new(source, int_labels(t), rows).expect("normalized rows")
}

/// A built-in generator; `alpha` orders are drawn from `(-1, 3)`.
pub fn random_generator_name<R: Rng + ?Sized>(rng: &mut R) -> String {
    let k = rng.random_range(0..BuiltinKind::FIXED.len() + 1);
    match BuiltinKind::FIXED.get(k) {
        Some(kind) => kind.cli_name(),
        None => BuiltinKind::Alpha(rng.random_range(-1.0..3.0)).cli_name(),
    }
}

pub fn random_generator<R: Rng + ?Sized>(rng: &mut R) -> Generator {
    let name = random_generator_name(rng);
    builtin(name.parse().expect("catalog name"))
}

/// `(P, Q, phi)` with `dP/dQ` constant on each fiber of `phi`, so the
/// push-forward keeps the divergence unchanged.
pub fn fiber_constant_case<R: Rng + ?Sized>(
    rng: &mut R,
    max_atoms: usize,
) -> (DiscreteDistribution, DiscreteDistribution, Vec<(Label, Label)>) {
    let k = rng.random_range(2..=max_atoms.max(2));
    let fibers = rng.random_range(1..=k);
    let map = random_map(rng, k, fibers);
    let ratios: Vec<f64> = (0..fibers).map(|_| rng.random_range(0.1..10.0)).collect();
    let q = random_masses(rng, k, 0.0);
    let raw: Vec<f64> = map
        .iter()
        .zip(&q)
        .map(|((_, img), &qi)| ratios[img.as_int().expect("int label") as usize] * qi)
        .collect();
    let s: f64 = raw.iter().sum();
    let p: Vec<f64> = raw.iter().map(|x| x / s).collect();
    let p = DiscreteDistribution::new(int_labels(k).into_iter().zip(p)).expect("normalized masses");
    let q = DiscreteDistribution::new(int_labels(k).into_iter().zip(q)).expect("normalized masses");
    (p, q, map)
}

/// Looks up a label in a map table; labels outside the table map to themselves.
pub fn apply_map(map: &[(Label, Label)], l: &Label) -> Label {
    map.iter().find(|(a, _)| a == l).map_or_else(|| l.clone(), |(_, b)| b.clone())
}
