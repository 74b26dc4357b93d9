use rand::Rng;

use crate::divergence::{divergence_of_masses, THEOREM_TOL};
use crate::error::{Error, Result};
use crate::generators::Generator;
use crate::measures::JointDistribution;
use crate::numeric::{compensated_sum, ExtReal};

/// Tolerance for matching breakpoints and marginal increments of user-built grids.
pub const GRID_TOL: f64 = 1e-12;

/// A copula with piecewise-constant density on a rectangular grid of `[0,1]^2`.
///
/// Cell `(i, j)` spans `[s_{i-1}, s_i] x [t_{j-1}, t_j]` and carries mass
/// `r_ij`; uniform marginals mean the row sums of `r` are the widths
/// `s_i - s_{i-1}` and the column sums are `t_j - t_{j-1}`.
#[derive(Debug, Clone, PartialEq)]
pub struct GridCopula {
    u_breaks: Vec<f64>,
    v_breaks: Vec<f64>,
    u_widths: Vec<f64>,
    v_widths: Vec<f64>,
    cell_mass: Vec<f64>,
}

fn breaks_from_widths(widths: &[f64]) -> Vec<f64> {
    let mut breaks = Vec::with_capacity(widths.len() + 1);
    breaks.push(0.0);
    let mut acc = crate::numeric::CompensatedSum::new();
    for &w in widths {
        acc.add(w);
        breaks.push(acc.value());
    }
    *breaks.last_mut().expect("nonempty") = 1.0;
    breaks
}

fn check_breaks(b: &[f64], axis: &str) -> Result<Vec<f64>> {
    if b.len() < 2 || b[0] != 0.0 || (b[b.len() - 1] - 1.0).abs() > GRID_TOL {
        return Err(Error::InvalidCopula(format!("{axis} breaks must run from 0 to 1")));
    }
    let widths: Vec<f64> = b.windows(2).map(|w| w[1] - w[0]).collect();
    if widths.iter().any(|&w| w.is_nan() || w <= 0.0) {
        return Err(Error::InvalidCopula(format!("{axis} breaks must be strictly increasing")));
    }
    Ok(widths)
}

impl GridCopula {
    /// Validates a user-supplied grid copula (row-major `cell_mass`).
    pub fn new(u_breaks: Vec<f64>, v_breaks: Vec<f64>, cell_mass: Vec<f64>) -> Result<Self> {
        let u_widths = check_breaks(&u_breaks, "u")?;
        let v_widths = check_breaks(&v_breaks, "v")?;
        let (m, n) = (u_widths.len(), v_widths.len());
        if cell_mass.len() != m * n {
            return Err(Error::InvalidCopula(format!("expected {} cells, got {}", m * n, cell_mass.len())));
        }
        if cell_mass.iter().any(|&r| !r.is_finite() || r < 0.0) {
            return Err(Error::InvalidCopula("cell masses must be finite and nonnegative".into()));
        }
        let c = GridCopula {
            u_breaks,
            v_breaks,
            u_widths,
            v_widths,
            cell_mass,
        };
        for (i, (s, w)) in c.row_sums().iter().zip(&c.u_widths).enumerate() {
            if (s - w).abs() > GRID_TOL {
                return Err(Error::InvalidCopula(format!("row {i} carries {s}, width is {w}")));
            }
        }
        for (j, (s, w)) in c.col_sums().iter().zip(&c.v_widths).enumerate() {
            if (s - w).abs() > GRID_TOL {
                return Err(Error::InvalidCopula(format!("column {j} carries {s}, width is {w}")));
            }
        }
        Ok(c)
    }

    /// The independence copula on a single cell.
    pub fn independence() -> Self {
        GridCopula {
            u_breaks: vec![0.0, 1.0],
            v_breaks: vec![0.0, 1.0],
            u_widths: vec![1.0],
            v_widths: vec![1.0],
            cell_mass: vec![1.0],
        }
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.u_widths.len(), self.v_widths.len())
    }

    pub fn u_breaks(&self) -> &[f64] {
        &self.u_breaks
    }

    pub fn v_breaks(&self) -> &[f64] {
        &self.v_breaks
    }

    pub fn u_widths(&self) -> &[f64] {
        &self.u_widths
    }

    pub fn v_widths(&self) -> &[f64] {
        &self.v_widths
    }

    pub fn cell_mass(&self) -> &[f64] {
        &self.cell_mass
    }

    #[inline]
    pub fn mass(&self, i: usize, j: usize) -> f64 {
        self.cell_mass[i * self.v_widths.len() + j]
    }

    pub fn density(&self, i: usize, j: usize) -> f64 {
        self.mass(i, j) / (self.u_widths[i] * self.v_widths[j])
    }

    /// Density at a point of the open unit square.
    pub fn density_at(&self, u: f64, v: f64) -> f64 {
        let i = locate(&self.u_breaks, u);
        let j = locate(&self.v_breaks, v);
        self.density(i, j)
    }

    pub fn row_sums(&self) -> Vec<f64> {
        self.cell_mass
            .chunks(self.v_widths.len())
            .map(|r| compensated_sum(r.iter().copied()))
            .collect()
    }

    pub fn col_sums(&self) -> Vec<f64> {
        let (m, n) = self.shape();
        (0..n).map(|j| compensated_sum((0..m).map(|i| self.mass(i, j)))).collect()
    }

    /// `C(u, v)`.
    pub fn cdf(&self, u: f64, v: f64) -> f64 {
        let lu: Vec<f64> = fractions(&self.u_breaks, &self.u_widths, u);
        let lv: Vec<f64> = fractions(&self.v_breaks, &self.v_widths, v);
        let (m, n) = self.shape();
        compensated_sum((0..m).flat_map(|i| {
            let lu = &lu;
            let lv = &lv;
            (0..n).map(move |j| self.mass(i, j) * lu[i] * lv[j])
        }))
    }

    /// Product-of-marginals masses `a_i b_j`, row-major.
    pub fn independence_masses(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.cell_mass.len());
        for &a in &self.u_widths {
            for &b in &self.v_widths {
                out.push(a * b);
            }
        }
        out
    }

    /// Every cell split into `ku x kv` equal sub-cells of equal mass.
    pub fn refine(&self, ku: usize, kv: usize) -> GridCopula {
        assert!(ku >= 1 && kv >= 1);
        let split = |breaks: &[f64], widths: &[f64], k: usize| -> (Vec<f64>, Vec<f64>) {
            let mut b = vec![0.0];
            let mut w = Vec::with_capacity(widths.len() * k);
            for (i, &wi) in widths.iter().enumerate() {
                for s in 1..=k {
                    b.push(if s == k { breaks[i + 1] } else { breaks[i] + wi * s as f64 / k as f64 });
                    w.push(wi / k as f64);
                }
            }
            (b, w)
        };
        let (u_breaks, u_widths) = split(&self.u_breaks, &self.u_widths, ku);
        let (v_breaks, v_widths) = split(&self.v_breaks, &self.v_widths, kv);
        let (m, n) = self.shape();
        let nn = n * kv;
        let mut cell_mass = vec![0.0; m * ku * nn];
        let share = (ku * kv) as f64;
        for i in 0..m {
            for j in 0..n {
                let r = self.mass(i, j) / share;
                for a in 0..ku {
                    for b in 0..kv {
                        cell_mass[(i * ku + a) * nn + j * kv + b] = r;
                    }
                }
            }
        }
        GridCopula {
            u_breaks,
            v_breaks,
            u_widths,
            v_widths,
            cell_mass,
        }
    }

    /// Sums sub-cell masses into the cells of `coarse`, whose breakpoints
    /// must all appear (within [`GRID_TOL`]) among this grid's breakpoints.
    pub fn coarsen_masses(&self, coarse: &GridCopula) -> Result<Vec<f64>> {
        let rmap = parent_index(&self.u_breaks, &coarse.u_breaks, "u")?;
        let cmap = parent_index(&self.v_breaks, &coarse.v_breaks, "v")?;
        let (m, n) = self.shape();
        let cn = coarse.v_widths.len();
        let mut buckets: Vec<Vec<f64>> = vec![Vec::new(); coarse.cell_mass.len()];
        for i in 0..m {
            for j in 0..n {
                buckets[rmap[i] * cn + cmap[j]].push(self.mass(i, j));
            }
        }
        Ok(buckets.into_iter().map(compensated_sum).collect())
    }

    /// The copula on `coarse`'s grid obtained by averaging this density over
    /// each coarse cell.
    pub fn coarsen(&self, coarse: &GridCopula) -> Result<GridCopula> {
        let cell_mass = self.coarsen_masses(coarse)?;
        Ok(GridCopula {
            u_breaks: coarse.u_breaks.clone(),
            v_breaks: coarse.v_breaks.clone(),
            u_widths: coarse.u_widths.clone(),
            v_widths: coarse.v_widths.clone(),
            cell_mass,
        })
    }
}

fn locate(breaks: &[f64], x: f64) -> usize {
    let k = breaks.partition_point(|&b| b <= x);
    k.clamp(1, breaks.len() - 1) - 1
}

fn fractions(breaks: &[f64], widths: &[f64], x: f64) -> Vec<f64> {
    widths
        .iter()
        .enumerate()
        .map(|(i, &w)| ((x - breaks[i]) / w).clamp(0.0, 1.0))
        .collect()
}

fn parent_index(fine: &[f64], coarse: &[f64], axis: &str) -> Result<Vec<usize>> {
    let mut map = Vec::with_capacity(fine.len() - 1);
    let mut parent = 0;
    for k in 0..fine.len() - 1 {
        while parent + 1 < coarse.len() - 1 && fine[k] >= coarse[parent + 1] - GRID_TOL {
            parent += 1;
        }
        if fine[k + 1] > coarse[parent + 1] + GRID_TOL {
            return Err(Error::InvalidCopula(format!(
                "{axis} cell [{}, {}] straddles coarse break {}",
                fine[k],
                fine[k + 1],
                coarse[parent + 1]
            )));
        }
        map.push(parent);
    }
    for b in &coarse[1..coarse.len() - 1] {
        if !fine.iter().any(|f| (f - b).abs() <= GRID_TOL) {
            return Err(Error::InvalidCopula(format!("{axis} break {b} missing from the refinement")));
        }
    }
    Ok(map)
}

/// The checkerboard copula of a discrete joint: each atom's mass spread
/// uniformly over its cdf cell. Zero-mass atoms are dropped first.
pub fn checkerboard(j: &JointDistribution) -> GridCopula {
    let rows = j.row_sums();
    let cols = j.col_sums();
    let keep_r: Vec<usize> = (0..rows.len()).filter(|&i| rows[i] > 0.0).collect();
    let keep_c: Vec<usize> = (0..cols.len()).filter(|&k| cols[k] > 0.0).collect();
    let u_widths: Vec<f64> = keep_r.iter().map(|&i| rows[i]).collect();
    let v_widths: Vec<f64> = keep_c.iter().map(|&k| cols[k]).collect();
    let mut cell_mass = Vec::with_capacity(u_widths.len() * v_widths.len());
    for &i in &keep_r {
        for &k in &keep_c {
            cell_mass.push(j.get(i, k));
        }
    }
    GridCopula {
        u_breaks: breaks_from_widths(&u_widths),
        v_breaks: breaks_from_widths(&v_widths),
        u_widths,
        v_widths,
        cell_mass,
    }
}

/// `D_f(Pi || C)` for a piecewise-constant copula `C`.
pub fn grid_divergence(c: &GridCopula, g: &Generator) -> ExtReal {
    divergence_of_masses(&c.independence_masses(), &c.cell_mass, g).value
}

/// Whether the checkerboard copula of `j` has divergence no larger than every
/// candidate copula for `j` (up to [`THEOREM_TOL`]).
///
/// Each candidate must refine the checkerboard grid and reproduce `j`'s cell
/// masses when coarsened to it; otherwise an error names the offender.
pub fn minimality_check(j: &JointDistribution, candidates: &[GridCopula], g: &Generator) -> Result<bool> {
    let cb = checkerboard(j);
    for (index, cand) in candidates.iter().enumerate() {
        let coarse = cand
            .coarsen_masses(&cb)
            .map_err(|e| Error::InvalidCandidate { index, reason: e.to_string() })?;
        for (k, (a, b)) in coarse.iter().zip(cb.cell_mass()).enumerate() {
            if (a - b).abs() > GRID_TOL {
                return Err(Error::InvalidCandidate {
                    index,
                    reason: format!("coarsened cell {k} has mass {a}, joint has {b}"),
                });
            }
        }
    }
    let base = grid_divergence(&cb, g);
    Ok(candidates
        .iter()
        .all(|c| base.le_within(grid_divergence(c, g), THEOREM_TOL)))
}

/// A random copula for the same joint as `parent`: each parent cell is split
/// into `ku x kv` sub-cells, then mass is shuffled inside parent cells by
/// `moves` random 2x2 exchanges that keep every sub-row and sub-column sum.
pub fn random_refinement<R: Rng + ?Sized>(
    parent: &GridCopula,
    ku: usize,
    kv: usize,
    moves: usize,
    rng: &mut R,
) -> GridCopula {
    assert!(ku >= 2 && kv >= 2, "need at least 2x2 sub-cells to perturb");
    let mut fine = parent.refine(ku, kv);
    let (m, n) = parent.shape();
    let nn = n * kv;
    for _ in 0..moves {
        let (i, j) = (rng.random_range(0..m), rng.random_range(0..n));
        let a = i * ku + rng.random_range(0..ku);
        let mut b = i * ku + rng.random_range(0..ku - 1);
        if b >= a {
            b += 1;
        }
        let c = j * kv + rng.random_range(0..kv);
        let mut d = j * kv + rng.random_range(0..kv - 1);
        if d >= c {
            d += 1;
        }
        let idx = |r: usize, s: usize| r * nn + s;
        let (ac, bd, ad, bc) = (idx(a, c), idx(b, d), idx(a, d), idx(b, c));
        let up = fine.cell_mass[ad].min(fine.cell_mass[bc]);
        let down = fine.cell_mass[ac].min(fine.cell_mass[bd]);
        let eps = rng.random_range(-down..=up);
        fine.cell_mass[ac] = (fine.cell_mass[ac] + eps).max(0.0);
        fine.cell_mass[bd] = (fine.cell_mass[bd] + eps).max(0.0);
        fine.cell_mass[ad] = (fine.cell_mass[ad] - eps).max(0.0);
        fine.cell_mass[bc] = (fine.cell_mass[bc] - eps).max(0.0);
    }
    fine
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::csiszar::csiszar_index;
    use crate::generators::{builtin, BuiltinKind};
    use crate::measures::{product, DiscreteDistribution};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn bernoulli_example() -> JointDistribution {
        JointDistribution::bernoulli_pair(0.5, 0.5, 5.0 / 16.0).unwrap()
    }

    #[test]
    fn product_gives_independence_density() {
        let px = DiscreteDistribution::from_masses(&[0.2, 0.3, 0.5]).unwrap();
        let py = DiscreteDistribution::from_masses(&[0.6, 0.4]).unwrap();
        let cb = checkerboard(&product(&px, &py));
        for i in 0..3 {
            for j in 0..2 {
                assert!((cb.density(i, j) - 1.0).abs() < 1e-15);
            }
        }
        assert_eq!(grid_divergence(&cb, &builtin(BuiltinKind::Pearson)), ExtReal::ZERO);
    }

    #[test]
    fn bernoulli_checkerboard_densities() {
        let cb = checkerboard(&bernoulli_example());
        assert_eq!(cb.u_breaks(), &[0.0, 0.5, 1.0]);
        let d: Vec<f64> = (0..2).flat_map(|i| (0..2).map(move |j| (i, j))).map(|(i, j)| cb.density(i, j)).collect();
        assert_eq!(d, vec![1.25, 0.75, 0.75, 1.25]);
        let v = grid_divergence(&cb, &builtin(BuiltinKind::Pearson)).finite().unwrap();
        assert!((v - 1.0 / 15.0).abs() < 1e-15);
    }

    #[test]
    fn single_atom_marginals() {
        let j = JointDistribution::from_matrix(vec![vec![0.0, 0.0], vec![1.0, 0.0]]).unwrap();
        let cb = checkerboard(&j);
        assert_eq!(cb.shape(), (1, 1));
        assert_eq!(cb.density(0, 0), 1.0);
    }

    #[test]
    fn uniform_marginals_exact() {
        let j = JointDistribution::from_matrix(vec![
            vec![0.07, 0.0, 0.13, 0.1],
            vec![0.0, 0.0, 0.0, 0.0],
            vec![0.3, 0.0, 0.0, 0.4],
        ])
        .unwrap();
        let cb = checkerboard(&j);
        assert_eq!(cb.shape(), (2, 3));
        assert_eq!(cb.row_sums(), cb.u_widths());
        assert_eq!(cb.col_sums(), cb.v_widths());
        assert_eq!(*cb.u_breaks().last().unwrap(), 1.0);
        for g in BuiltinKind::FIXED.map(builtin) {
            assert_eq!(grid_divergence(&cb, &g), csiszar_index(&j, &g).value, "{}", g.name());
        }
    }

    #[test]
    fn cdf_matches_grid_integration() {
        let cb = checkerboard(&bernoulli_example());
        // piecewise-bilinear cdf of the checkerboard for p = q = 1/2, r = 5/16
        let oracle = |x: f64, y: f64| {
            if x <= 0.5 && y <= 0.5 {
                1.25 * x * y
            } else if x > 0.5 && y <= 0.5 {
                0.625 * y + 0.75 * (x - 0.5) * y
            } else if x <= 0.5 {
                0.625 * x + 0.75 * (y - 0.5) * x
            } else {
                0.3125 + 0.375 * (x - 0.5) + 0.375 * (y - 0.5) + 1.25 * (x - 0.5) * (y - 0.5)
            }
        };
        for a in 0..=10 {
            for b in 0..=10 {
                let (u, v) = (a as f64 / 10.0, b as f64 / 10.0);
                assert!((cb.cdf(u, v) - oracle(u, v)).abs() < 1e-15, "({u},{v})");
            }
        }
        assert_eq!(cb.cdf(1.0, 1.0), 1.0);
        assert_eq!(cb.cdf(0.3, 1.0), 0.3);
    }

    #[test]
    fn validation_rejects_bad_grids() {
        assert!(GridCopula::new(vec![0.0, 0.5, 1.0], vec![0.0, 1.0], vec![0.6, 0.4]).is_err());
        assert!(GridCopula::new(vec![0.0, 0.5, 0.5, 1.0], vec![0.0, 1.0], vec![0.5, 0.0, 0.5]).is_err());
        assert!(GridCopula::new(vec![0.1, 1.0], vec![0.0, 1.0], vec![1.0]).is_err());
        assert!(GridCopula::new(vec![0.0, 0.5, 1.0], vec![0.0, 0.5, 1.0], vec![0.5, 0.0, 0.0, 0.5]).is_ok());
    }

    #[test]
    fn refinement_preserves_divergence_and_coarsens_back() {
        let cb = checkerboard(&bernoulli_example());
        let fine = cb.refine(3, 2);
        assert_eq!(fine.shape(), (6, 4));
        let fine = GridCopula::new(fine.u_breaks().to_vec(), fine.v_breaks().to_vec(), fine.cell_mass().to_vec()).unwrap();
        let g = builtin(BuiltinKind::Hellinger);
        assert!(grid_divergence(&fine, &g).approx_eq(grid_divergence(&cb, &g), 1e-15));
        let back = fine.coarsen_masses(&cb).unwrap();
        for (a, b) in back.iter().zip(cb.cell_mass()) {
            assert!((a - b).abs() < 1e-15);
        }
    }

    #[test]
    fn random_refinements_are_legal_and_not_better() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let j = JointDistribution::from_matrix(vec![vec![0.1, 0.25, 0.05], vec![0.3, 0.1, 0.2]]).unwrap();
        let cb = checkerboard(&j);
        let mut cands = Vec::new();
        for _ in 0..20 {
            let c = random_refinement(&cb, 3, 3, 40, &mut rng);
            let c = GridCopula::new(c.u_breaks().to_vec(), c.v_breaks().to_vec(), c.cell_mass().to_vec()).unwrap();
            cands.push(c);
        }
        for k in [BuiltinKind::Hellinger, BuiltinKind::Pearson, BuiltinKind::KullbackLeibler] {
            assert!(minimality_check(&j, &cands, &builtin(k)).unwrap());
            // averaging back over atom cells never increases the divergence
            for c in &cands {
                let avg = c.coarsen(&cb).unwrap();
                assert!(grid_divergence(&avg, &builtin(k)).le_within(grid_divergence(c, &builtin(k)), 1e-12));
            }
        }
    }

    #[test]
    fn minimality_rejects_foreign_candidates() {
        let j = bernoulli_example();
        let other = checkerboard(&JointDistribution::bernoulli_pair(0.5, 0.5, 0.25).unwrap());
        let err = minimality_check(&j, &[checkerboard(&j), other], &builtin(BuiltinKind::Pearson)).unwrap_err();
        assert!(matches!(err, Error::InvalidCandidate { index: 1, .. }));

        let skew = GridCopula::new(vec![0.0, 0.3, 1.0], vec![0.0, 1.0], vec![0.3, 0.7]).unwrap();
        assert!(matches!(
            minimality_check(&j, &[skew], &builtin(BuiltinKind::Pearson)),
            Err(Error::InvalidCandidate { index: 0, .. })
        ));
        assert!(minimality_check(&j, &[checkerboard(&j)], &builtin(BuiltinKind::Pearson)).unwrap());
    }
}
