//! Finite discrete distributions, joints and stochastic kernels.
//!
//! Every density here is taken with respect to the counting measure on the
//! union of the supports involved, so densities are the pmfs themselves.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::compensated_sum;

/// Tolerance on the total mass before renormalization is refused.
pub const RENORMALIZE_TOL: f64 = 1e-9;

/// An opaque, ordered atom label.
///
/// JSON form: integers, strings, or two-element arrays for pairs.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Label {
    Int(i64),
    Text(String),
    Pair(Box<Label>, Box<Label>),
}

impl Label {
    pub fn pair(a: Label, b: Label) -> Label {
        Label::Pair(Box::new(a), Box::new(b))
    }

    pub fn as_int(&self) -> Option<i64> {
        match self {
            Label::Int(i) => Some(*i),
            _ => None,
        }
    }

    /// Numeric value of an integer label, or of a text label that parses as a float.
    pub fn as_f64(&self) -> Option<f64> {
        match self {
            Label::Int(i) => Some(*i as f64),
            Label::Text(s) => s.trim().parse().ok(),
            Label::Pair(..) => None,
        }
    }
}

impl From<i64> for Label {
    fn from(i: i64) -> Self {
        Label::Int(i)
    }
}

impl From<&str> for Label {
    fn from(s: &str) -> Self {
        Label::Text(s.to_string())
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Label::Int(i) => write!(f, "{i}"),
            Label::Text(s) => f.write_str(s),
            Label::Pair(a, b) => write!(f, "({a},{b})"),
        }
    }
}

fn check_masses(masses: &[f64], what: &str) -> Result<()> {
    for (i, &m) in masses.iter().enumerate() {
        if !m.is_finite() || m < 0.0 {
            return Err(Error::InvalidDistribution(format!("{what}: mass {i} is {m}")));
        }
    }
    Ok(())
}

/// Rescales to unit total when the deviation is at most [`RENORMALIZE_TOL`].
fn normalize(masses: &mut [f64], what: &str) -> Result<()> {
    check_masses(masses, what)?;
    let total = compensated_sum(masses.iter().copied());
    if (total - 1.0).abs() > RENORMALIZE_TOL {
        return Err(Error::InvalidDistribution(format!(
            "{what}: masses sum to {total}, expected 1"
        )));
    }
    if total != 1.0 {
        for m in masses.iter_mut() {
            *m /= total;
        }
    }
    Ok(())
}

fn check_distinct(labels: &[Label], what: &str) -> Result<()> {
    let mut seen = BTreeSet::new();
    for l in labels {
        if !seen.insert(l) {
            return Err(Error::InvalidDistribution(format!("{what}: duplicate label {l}")));
        }
    }
    Ok(())
}

/// A pmf on a finite, labeled support. Zero-mass atoms are allowed.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteDistribution {
    labels: Vec<Label>,
    masses: Vec<f64>,
}

impl DiscreteDistribution {
    pub fn new(atoms: impl IntoIterator<Item = (Label, f64)>) -> Result<Self> {
        let (labels, mut masses): (Vec<Label>, Vec<f64>) = atoms.into_iter().unzip();
        if labels.is_empty() {
            return Err(Error::InvalidDistribution("empty support".into()));
        }
        check_distinct(&labels, "distribution")?;
        normalize(&mut masses, "distribution")?;
        Ok(Self { labels, masses })
    }

    /// Atoms labeled `0, 1, ..., n-1`.
    pub fn from_masses(masses: &[f64]) -> Result<Self> {
        Self::new(masses.iter().enumerate().map(|(i, &m)| (Label::Int(i as i64), m)))
    }

    pub fn point_mass(label: impl Into<Label>) -> Self {
        Self {
            labels: vec![label.into()],
            masses: vec![1.0],
        }
    }

    /// `P(X = 1) = p` on labels `0, 1`.
    pub fn bernoulli(p: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::InvalidParameter(format!("Bernoulli parameter {p} outside [0,1]")));
        }
        Self::new([(Label::Int(0), 1.0 - p), (Label::Int(1), p)])
    }

    pub fn uniform(labels: impl IntoIterator<Item = Label>) -> Result<Self> {
        let labels: Vec<Label> = labels.into_iter().collect();
        let n = labels.len() as f64;
        Self::new(labels.into_iter().map(|l| (l, 1.0 / n)))
    }

    pub fn labels(&self) -> &[Label] {
        &self.labels
    }

    pub fn masses(&self) -> &[f64] {
        &self.masses
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn atoms(&self) -> impl Iterator<Item = (&Label, f64)> {
        self.labels.iter().zip(self.masses.iter().copied())
    }

    /// Mass at `label`, zero off the support.
    pub fn mass_of(&self, label: &Label) -> f64 {
        self.labels
            .iter()
            .position(|l| l == label)
            .map_or(0.0, |i| self.masses[i])
    }

    pub fn support(&self) -> impl Iterator<Item = &Label> {
        self.atoms().filter(|(_, m)| *m > 0.0).map(|(l, _)| l)
    }

    /// Same measure with atoms sorted by label and zero-mass atoms dropped.
    pub fn canonical(&self) -> DiscreteDistribution {
        let mut atoms: Vec<(Label, f64)> = self
            .atoms()
            .filter(|(_, m)| *m > 0.0)
            .map(|(l, m)| (l.clone(), m))
            .collect();
        atoms.sort_by(|a, b| a.0.cmp(&b.0));
        let (labels, masses) = atoms.into_iter().unzip();
        DiscreteDistribution { labels, masses }
    }
}

/// How an atom of the union support splits between two measures.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum AtomClass {
    BothPositive,
    /// `dP/dQ = +inf` here.
    POnly,
    /// `dP/dQ = 0` here.
    QOnly,
    BothZero,
}

impl AtomClass {
    pub fn of(p: f64, q: f64) -> AtomClass {
        match (p > 0.0, q > 0.0) {
            (true, true) => AtomClass::BothPositive,
            (true, false) => AtomClass::POnly,
            (false, true) => AtomClass::QOnly,
            (false, false) => AtomClass::BothZero,
        }
    }
}

/// Two pmfs laid out on the sorted union of their supports.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityPair {
    pub labels: Vec<Label>,
    pub p: Vec<f64>,
    pub q: Vec<f64>,
    pub classes: Vec<AtomClass>,
}

impl DensityPair {
    /// Builds a pair from already aligned mass vectors.
    pub fn from_vectors(labels: Vec<Label>, p: Vec<f64>, q: Vec<f64>) -> Self {
        assert_eq!(p.len(), q.len());
        assert_eq!(labels.len(), p.len());
        let classes = p.iter().zip(&q).map(|(&a, &b)| AtomClass::of(a, b)).collect();
        Self { labels, p, q, classes }
    }

    pub fn swapped(&self) -> DensityPair {
        DensityPair::from_vectors(self.labels.clone(), self.q.clone(), self.p.clone())
    }

    /// `P(dP/dQ = +inf)`.
    pub fn singular_mass(&self) -> f64 {
        compensated_sum(
            self.p
                .iter()
                .zip(&self.classes)
                .filter(|(_, c)| **c == AtomClass::POnly)
                .map(|(&p, _)| p),
        )
    }

    pub fn mutually_singular(&self) -> bool {
        self.classes.iter().all(|c| *c != AtomClass::BothPositive)
    }
}

/// Places `p` and `q` on the sorted union of their label sets.
pub fn align(p: &DiscreteDistribution, q: &DiscreteDistribution) -> DensityPair {
    let mut table: BTreeMap<&Label, (f64, f64)> = BTreeMap::new();
    for (l, m) in p.atoms() {
        table.entry(l).or_default().0 += m;
    }
    for (l, m) in q.atoms() {
        table.entry(l).or_default().1 += m;
    }
    let mut labels = Vec::with_capacity(table.len());
    let mut pv = Vec::with_capacity(table.len());
    let mut qv = Vec::with_capacity(table.len());
    for (l, (a, b)) in table {
        labels.push(l.clone());
        pv.push(a);
        qv.push(b);
    }
    DensityPair::from_vectors(labels, pv, qv)
}

/// Image measure under a label map. Output labels appear in order of first
/// occurrence along the input atoms.
pub fn pushforward_map<F>(p: &DiscreteDistribution, phi: F) -> DiscreteDistribution
where
    F: Fn(&Label) -> Label,
{
    let mut order: Vec<Label> = Vec::new();
    let mut index: HashMap<Label, usize> = HashMap::new();
    let mut buckets: Vec<Vec<f64>> = Vec::new();
    for (l, m) in p.atoms() {
        let image = phi(l);
        let k = *index.entry(image.clone()).or_insert_with(|| {
            order.push(image);
            buckets.push(Vec::new());
            buckets.len() - 1
        });
        buckets[k].push(m);
    }
    let masses = buckets.into_iter().map(compensated_sum).collect();
    DiscreteDistribution {
        labels: order,
        masses,
    }
}

/// A row-stochastic matrix between two label sets.
#[derive(Debug, Clone, PartialEq)]
pub struct StochasticKernel {
    source: Vec<Label>,
    target: Vec<Label>,
    rows: Vec<Vec<f64>>,
}

impl StochasticKernel {
    pub fn new(source: Vec<Label>, target: Vec<Label>, mut rows: Vec<Vec<f64>>) -> Result<Self> {
        check_distinct(&source, "kernel source")?;
        check_distinct(&target, "kernel target")?;
        if rows.len() != source.len() {
            return Err(Error::InvalidDistribution(format!(
                "kernel has {} rows for {} source labels",
                rows.len(),
                source.len()
            )));
        }
        for (i, row) in rows.iter_mut().enumerate() {
            if row.len() != target.len() {
                return Err(Error::InvalidDistribution(format!(
                    "kernel row {i} has {} entries for {} target labels",
                    row.len(),
                    target.len()
                )));
            }
            normalize(row, &format!("kernel row {i}"))?;
        }
        Ok(Self { source, target, rows })
    }

    pub fn identity(labels: Vec<Label>) -> Self {
        let n = labels.len();
        let rows = (0..n)
            .map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
            .collect();
        Self {
            source: labels.clone(),
            target: labels,
            rows,
        }
    }

    /// Every row equal to `rho`.
    pub fn constant(source: Vec<Label>, rho: &DiscreteDistribution) -> Self {
        let rows = vec![rho.masses().to_vec(); source.len()];
        Self {
            source,
            target: rho.labels().to_vec(),
            rows,
        }
    }

    pub fn source(&self) -> &[Label] {
        &self.source
    }

    pub fn target(&self) -> &[Label] {
        &self.target
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.rows
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.rows[i]
    }

    fn source_index(&self, l: &Label) -> Option<usize> {
        self.source.iter().position(|s| s == l)
    }
}

/// Law of `Y` where `X ~ p` and `Y | X = x ~ K(x, .)`.
pub fn pushforward_kernel(p: &DiscreteDistribution, k: &StochasticKernel) -> Result<DiscreteDistribution> {
    let mut cols: Vec<Vec<f64>> = vec![Vec::new(); k.target.len()];
    for (l, m) in p.atoms() {
        let i = match k.source_index(l) {
            Some(i) => i,
            None if m == 0.0 => continue,
            None => return Err(Error::LabelMismatch(format!("kernel has no row for {l}"))),
        };
        for (j, &kij) in k.rows[i].iter().enumerate() {
            cols[j].push(m * kij);
        }
    }
    let masses: Vec<f64> = cols.into_iter().map(compensated_sum).collect();
    DiscreteDistribution::new(k.target.iter().cloned().zip(masses))
}

/// A pmf on a product of two finite label sets, stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct JointDistribution {
    x_labels: Vec<Label>,
    y_labels: Vec<Label>,
    pmf: Vec<f64>,
}

impl JointDistribution {
    pub fn new(x_labels: Vec<Label>, y_labels: Vec<Label>, pmf: Vec<Vec<f64>>) -> Result<Self> {
        check_distinct(&x_labels, "joint x")?;
        check_distinct(&y_labels, "joint y")?;
        if x_labels.is_empty() || y_labels.is_empty() {
            return Err(Error::InvalidDistribution("joint needs nonempty label sets".into()));
        }
        if pmf.len() != x_labels.len() || pmf.iter().any(|r| r.len() != y_labels.len()) {
            return Err(Error::InvalidDistribution(format!(
                "pmf shape does not match {}x{} labels",
                x_labels.len(),
                y_labels.len()
            )));
        }
        let mut flat: Vec<f64> = pmf.into_iter().flatten().collect();
        normalize(&mut flat, "joint")?;
        Ok(Self {
            x_labels,
            y_labels,
            pmf: flat,
        })
    }

    /// Joint with integer labels `0..m` and `0..n`.
    pub fn from_matrix(pmf: Vec<Vec<f64>>) -> Result<Self> {
        let m = pmf.len();
        let n = pmf.first().map_or(0, Vec::len);
        Self::new(int_labels(m), int_labels(n), pmf)
    }

    /// Two Bernoulli variables with `P(X=1) = p`, `P(Y=1) = q`, `P(X=1, Y=1) = r`.
    pub fn bernoulli_pair(p: f64, q: f64, r: f64) -> Result<Self> {
        let cells = [1.0 - p - q + r, q - r, p - r, r];
        if cells.iter().any(|&c| c < 0.0) {
            return Err(Error::InvalidParameter(format!(
                "(p, q, r) = ({p}, {q}, {r}) is not a Bernoulli joint"
            )));
        }
        Self::from_matrix(vec![vec![cells[0], cells[1]], vec![cells[2], cells[3]]])
    }

    pub fn x_labels(&self) -> &[Label] {
        &self.x_labels
    }

    pub fn y_labels(&self) -> &[Label] {
        &self.y_labels
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.x_labels.len(), self.y_labels.len())
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.pmf[i * self.y_labels.len() + j]
    }

    /// Row-major cell masses.
    pub fn cells(&self) -> &[f64] {
        &self.pmf
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        self.pmf.chunks(self.y_labels.len()).map(<[f64]>::to_vec).collect()
    }

    pub fn row_sums(&self) -> Vec<f64> {
        self.pmf
            .chunks(self.y_labels.len())
            .map(|r| compensated_sum(r.iter().copied()))
            .collect()
    }

    pub fn col_sums(&self) -> Vec<f64> {
        let (m, n) = self.shape();
        (0..n)
            .map(|j| compensated_sum((0..m).map(|i| self.get(i, j))))
            .collect()
    }

    pub fn transpose(&self) -> JointDistribution {
        let (m, n) = self.shape();
        let mut pmf = Vec::with_capacity(m * n);
        for j in 0..n {
            for i in 0..m {
                pmf.push(self.get(i, j));
            }
        }
        JointDistribution {
            x_labels: self.y_labels.clone(),
            y_labels: self.x_labels.clone(),
            pmf,
        }
    }

    /// The joint as a single distribution over `(x, y)` pair labels, row-major.
    pub fn flatten(&self) -> DiscreteDistribution {
        let mut labels = Vec::with_capacity(self.pmf.len());
        for x in &self.x_labels {
            for y in &self.y_labels {
                labels.push(Label::pair(x.clone(), y.clone()));
            }
        }
        DiscreteDistribution {
            labels,
            masses: self.pmf.clone(),
        }
    }

    /// Law of `(phi_x(X), phi_y(Y))`.
    pub fn pushforward<FX, FY>(&self, phi_x: FX, phi_y: FY) -> JointDistribution
    where
        FX: Fn(&Label) -> Label,
        FY: Fn(&Label) -> Label,
    {
        let (xs, xmap) = image_index(&self.x_labels, phi_x);
        let (ys, ymap) = image_index(&self.y_labels, phi_y);
        let mut cells: Vec<Vec<f64>> = vec![Vec::new(); xs.len() * ys.len()];
        let (m, n) = self.shape();
        for i in 0..m {
            for j in 0..n {
                cells[xmap[i] * ys.len() + ymap[j]].push(self.get(i, j));
            }
        }
        JointDistribution {
            pmf: cells.into_iter().map(compensated_sum).collect(),
            x_labels: xs,
            y_labels: ys,
        }
    }

    /// Largest absolute difference between a cell and the product of its marginals.
    pub fn max_deviation_from_independence(&self) -> f64 {
        let (a, b) = (self.row_sums(), self.col_sums());
        let n = b.len();
        self.pmf
            .iter()
            .enumerate()
            .map(|(k, &r)| (r - a[k / n] * b[k % n]).abs())
            .fold(0.0, f64::max)
    }
}

fn int_labels(n: usize) -> Vec<Label> {
    (0..n as i64).map(Label::Int).collect()
}

fn image_index<F: Fn(&Label) -> Label>(labels: &[Label], phi: F) -> (Vec<Label>, Vec<usize>) {
    let mut images: Vec<Label> = Vec::new();
    let mut pos: HashMap<Label, usize> = HashMap::new();
    let map = labels
        .iter()
        .map(|l| {
            let im = phi(l);
            *pos.entry(im.clone()).or_insert_with(|| {
                images.push(im);
                images.len() - 1
            })
        })
        .collect();
    (images, map)
}

/// `P_X (x) P_Y`.
pub fn product(px: &DiscreteDistribution, py: &DiscreteDistribution) -> JointDistribution {
    let mut pmf = Vec::with_capacity(px.len() * py.len());
    for &a in px.masses() {
        for &b in py.masses() {
            pmf.push(a * b);
        }
    }
    JointDistribution {
        x_labels: px.labels().to_vec(),
        y_labels: py.labels().to_vec(),
        pmf,
    }
}

pub fn marginals(j: &JointDistribution) -> (DiscreteDistribution, DiscreteDistribution) {
    (
        DiscreteDistribution {
            labels: j.x_labels.clone(),
            masses: j.row_sums(),
        },
        DiscreteDistribution {
            labels: j.y_labels.clone(),
            masses: j.col_sums(),
        },
    )
}

/// Conditional law of `Y` given `X`. Rows at zero-mass `x` are `None`:
/// the conditional is only defined `P_X`-almost surely.
#[derive(Debug, Clone, PartialEq)]
pub struct ConditionalKernel {
    pub source: Vec<Label>,
    pub target: Vec<Label>,
    pub rows: Vec<Option<Vec<f64>>>,
}

impl ConditionalKernel {
    pub fn row(&self, i: usize) -> Option<&[f64]> {
        self.rows[i].as_deref()
    }

    pub fn unusable(&self) -> Vec<&Label> {
        self.source
            .iter()
            .zip(&self.rows)
            .filter(|(_, r)| r.is_none())
            .map(|(l, _)| l)
            .collect()
    }

    /// The kernel restricted to usable rows.
    pub fn usable_kernel(&self) -> StochasticKernel {
        let (source, rows) = self
            .source
            .iter()
            .zip(&self.rows)
            .filter_map(|(l, r)| r.as_ref().map(|r| (l.clone(), r.clone())))
            .unzip();
        StochasticKernel {
            source,
            target: self.target.clone(),
            rows,
        }
    }
}

pub fn conditionals(j: &JointDistribution) -> ConditionalKernel {
    let px = j.row_sums();
    let rows = j
        .pmf
        .chunks(j.y_labels.len())
        .zip(&px)
        .map(|(row, &m)| (m > 0.0).then(|| row.iter().map(|&r| r / m).collect()))
        .collect();
    ConditionalKernel {
        source: j.x_labels.clone(),
        target: j.y_labels.clone(),
        rows,
    }
}

fn check_kernel_source(j: &JointDistribution, k: &StochasticKernel) -> Result<()> {
    if k.source != j.y_labels {
        return Err(Error::LabelMismatch(format!(
            "kernel source [{}] does not match Y labels [{}]",
            join_labels(&k.source),
            join_labels(&j.y_labels)
        )));
    }
    Ok(())
}

fn join_labels(ls: &[Label]) -> String {
    ls.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ")
}

/// Law of `(X, Z)` when `Z | (X, Y) ~ K(Y, .)`.
pub fn markov_compose(j: &JointDistribution, k: &StochasticKernel) -> Result<JointDistribution> {
    check_kernel_source(j, k)?;
    let (m, n) = j.shape();
    let nz = k.target.len();
    let mut pmf = Vec::with_capacity(m * nz);
    for i in 0..m {
        for z in 0..nz {
            pmf.push(compensated_sum((0..n).map(|y| j.get(i, y) * k.rows[y][z])));
        }
    }
    Ok(JointDistribution {
        x_labels: j.x_labels.clone(),
        y_labels: k.target.clone(),
        pmf,
    })
}

/// Law of `(X, Y, Z)` as a distribution over labels `(x, (y, z))`.
pub fn markov_triple(j: &JointDistribution, k: &StochasticKernel) -> Result<DiscreteDistribution> {
    check_kernel_source(j, k)?;
    let (m, n) = j.shape();
    let mut labels = Vec::new();
    let mut masses = Vec::new();
    for i in 0..m {
        for y in 0..n {
            for (z, zl) in k.target.iter().enumerate() {
                labels.push(Label::pair(
                    j.x_labels[i].clone(),
                    Label::pair(j.y_labels[y].clone(), zl.clone()),
                ));
                masses.push(j.get(i, y) * k.rows[y][z]);
            }
        }
    }
    Ok(DiscreteDistribution { labels, masses })
}

/// Law of `((X, U), Y)` with `U ~ pu` independent of `(X, Y)`.
pub fn augment_independent(j: &JointDistribution, pu: &DiscreteDistribution) -> JointDistribution {
    let (m, n) = j.shape();
    let mut x_labels = Vec::with_capacity(m * pu.len());
    let mut pmf = Vec::with_capacity(m * pu.len() * n);
    for i in 0..m {
        for (u, mu) in pu.atoms() {
            x_labels.push(Label::pair(j.x_labels[i].clone(), u.clone()));
            for y in 0..n {
                pmf.push(j.get(i, y) * mu);
            }
        }
    }
    JointDistribution {
        x_labels,
        y_labels: j.y_labels.clone(),
        pmf,
    }
}

// JSON file forms.

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AtomJson {
    pub label: Label,
    pub p: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DistributionJson {
    pub atoms: Vec<AtomJson>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct JointJson {
    pub x: Vec<Label>,
    pub y: Vec<Label>,
    pub pmf: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct KernelJson {
    pub source: Vec<Label>,
    pub target: Vec<Label>,
    pub rows: Vec<Vec<f64>>,
}

impl TryFrom<DistributionJson> for DiscreteDistribution {
    type Error = Error;

    fn try_from(d: DistributionJson) -> Result<Self> {
        DiscreteDistribution::new(d.atoms.into_iter().map(|a| (a.label, a.p)))
    }
}

impl From<&DiscreteDistribution> for DistributionJson {
    fn from(d: &DiscreteDistribution) -> Self {
        DistributionJson {
            atoms: d
                .atoms()
                .map(|(l, p)| AtomJson { label: l.clone(), p })
                .collect(),
        }
    }
}

impl TryFrom<JointJson> for JointDistribution {
    type Error = Error;

    fn try_from(j: JointJson) -> Result<Self> {
        JointDistribution::new(j.x, j.y, j.pmf)
    }
}

impl From<&JointDistribution> for JointJson {
    fn from(j: &JointDistribution) -> Self {
        JointJson {
            x: j.x_labels.clone(),
            y: j.y_labels.clone(),
            pmf: j.rows(),
        }
    }
}

impl TryFrom<KernelJson> for StochasticKernel {
    type Error = Error;

    fn try_from(k: KernelJson) -> Result<Self> {
        StochasticKernel::new(k.source, k.target, k.rows)
    }
}

impl From<&StochasticKernel> for KernelJson {
    fn from(k: &StochasticKernel) -> Self {
        KernelJson {
            source: k.source.clone(),
            target: k.target.clone(),
            rows: k.rows.clone(),
        }
    }
}
