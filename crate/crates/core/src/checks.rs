//! Randomized property suites. Every trial draws a [`Case`] from a stream
//! keyed by `(seed, trial)`; a failing case serializes to JSON that
//! [`Case::evaluate`] can replay on its own.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::copulas::grid::{checkerboard, grid_divergence, minimality_check, random_refinement, GridCopula};
use crate::corpus::{self, apply_map};
use crate::csiszar::{csiszar_index, markov_chain_monotonicity, mutual_information};
use crate::divergence::{f_divergence, renyi, IDENTITY_TOL, THEOREM_TOL};
use crate::error::{Error, Result};
use crate::generators::{affine_shift, builtin, conjugate, sup_bound, BuiltinKind, Generator};
use crate::measures::{
    DiscreteDistribution, DistributionJson, JointDistribution, JointJson, KernelJson, Label, StochasticKernel,
};
use crate::numeric::ExtReal;

pub const SUITES: [&str; 13] = [
    "duality",
    "affine",
    "involution",
    "dpi",
    "dpi-equality",
    "sup",
    "renyi",
    "mutual-information",
    "checkerboard",
    "minimality",
    "hellinger-metric",
    "markov",
    "conditional",
];

/// Generators of the checkerboard-equality suite.
pub const CHECKERBOARD_GENERATORS: [&str; 8] = ["kl", "tv", "hellinger", "pearson", "neyman", "lecam", "js", "alpha:0.3"];

const MAX_ATOMS: usize = 6;

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct GridJson {
    pub u_breaks: Vec<f64>,
    pub v_breaks: Vec<f64>,
    pub cell_mass: Vec<f64>,
}

impl From<&GridCopula> for GridJson {
    fn from(g: &GridCopula) -> Self {
        GridJson {
            u_breaks: g.u_breaks().to_vec(),
            v_breaks: g.v_breaks().to_vec(),
            cell_mass: g.cell_mass().to_vec(),
        }
    }
}

impl TryFrom<GridJson> for GridCopula {
    type Error = Error;

    fn try_from(g: GridJson) -> Result<Self> {
        GridCopula::new(g.u_breaks, g.v_breaks, g.cell_mass)
    }
}

/// One randomized instance of a property, with everything needed to rerun it.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "suite", rename_all = "kebab-case")]
pub enum Case {
    Duality { p: DistributionJson, q: DistributionJson, f: String },
    Affine { p: DistributionJson, q: DistributionJson, f: String, c: f64 },
    Involution { f: String, t: Vec<f64> },
    Dpi { p: DistributionJson, q: DistributionJson, phi: Vec<(Label, Label)>, f: String },
    DpiEquality { p: DistributionJson, q: DistributionJson, phi: Vec<(Label, Label)>, f: String },
    Sup { p: DistributionJson, q: DistributionJson, singular_p: DistributionJson, singular_q: DistributionJson, f: String },
    Renyi { s: f64, t: f64, alpha: f64 },
    MutualInformation { joint: JointJson },
    Checkerboard { joint: JointJson, f: Vec<String> },
    Minimality { joint: JointJson, candidates: Vec<GridJson>, f: Vec<String> },
    HellingerMetric { p: DistributionJson, q: DistributionJson, r: DistributionJson },
    Markov { joint: JointJson, kernel: KernelJson, f: String },
    Conditional { joint: JointJson, f: String },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Outcome {
    pub holds: bool,
    /// How far the property is from failing (negative) or by how much it fails (positive), in units of the tolerance scale.
    pub excess: f64,
    pub detail: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Counterexample {
    pub seed: u64,
    pub trial: u64,
    pub tolerance: f64,
    pub case: Case,
    pub detail: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub seed: u64,
    pub trials: u64,
    pub tolerance: f64,
    pub passed: u64,
    pub failed: u64,
    pub counterexample: Option<Counterexample>,
}

impl SuiteReport {
    pub fn ok(&self) -> bool {
        self.failed == 0
    }
}

pub fn default_tolerance(suite: &str) -> f64 {
    match suite {
        "duality" | "affine" | "involution" | "dpi-equality" | "sup" | "checkerboard" | "conditional" => IDENTITY_TOL,
        _ => THEOREM_TOL,
    }
}

fn gen(name: &str) -> Result<Generator> {
    Ok(builtin(name.parse::<BuiltinKind>()?))
}

fn dist(d: &DistributionJson) -> Result<DiscreteDistribution> {
    d.clone().try_into()
}

fn joint(j: &JointJson) -> Result<JointDistribution> {
    j.clone().try_into()
}

/// Tolerance scaled to the magnitude of the compared values (never below `tol`).
fn scaled(tol: f64, a: ExtReal, b: ExtReal) -> f64 {
    let m = [a, b].iter().filter_map(|x| x.finite()).fold(1.0f64, |m, x| m.max(x.abs()));
    tol * m
}

fn equal_outcome(a: ExtReal, b: ExtReal, tol: f64, what: &str) -> Outcome {
    let bound = scaled(tol, a, b);
    let (holds, excess) = match (a, b) {
        (ExtReal::PosInf, ExtReal::PosInf) => (true, -1.0),
        (ExtReal::Finite(x), ExtReal::Finite(y)) => ((x - y).abs() <= bound, (x - y).abs() / bound - 1.0),
        _ => (false, f64::INFINITY),
    };
    Outcome {
        holds,
        excess,
        detail: format!("{what}: {} vs {}", fmt(a), fmt(b)),
    }
}

fn le_outcome(a: ExtReal, b: ExtReal, tol: f64, what: &str) -> Outcome {
    let holds = a.le_within(b, tol);
    let excess = match (a, b) {
        (_, ExtReal::PosInf) => -1.0,
        (ExtReal::PosInf, _) => f64::INFINITY,
        (ExtReal::Finite(x), ExtReal::Finite(y)) => (x - y) / tol - 1.0,
    };
    Outcome {
        holds,
        excess,
        detail: format!("{what}: {} <= {}", fmt(a), fmt(b)),
    }
}

fn fmt(x: ExtReal) -> String {
    match x {
        ExtReal::Finite(v) => format!("{v:e}"),
        ExtReal::PosInf => "inf".into(),
    }
}

fn all(outcomes: Vec<Outcome>) -> Outcome {
    let worst = outcomes
        .iter()
        .max_by(|a, b| a.excess.total_cmp(&b.excess))
        .cloned()
        .expect("at least one outcome");
    match outcomes.iter().find(|o| !o.holds) {
        Some(bad) => bad.clone(),
        None => worst,
    }
}

impl Case {
    pub fn suite(&self) -> &'static str {
        match self {
            Case::Duality { .. } => "duality",
            Case::Affine { .. } => "affine",
            Case::Involution { .. } => "involution",
            Case::Dpi { .. } => "dpi",
            Case::DpiEquality { .. } => "dpi-equality",
            Case::Sup { .. } => "sup",
            Case::Renyi { .. } => "renyi",
            Case::MutualInformation { .. } => "mutual-information",
            Case::Checkerboard { .. } => "checkerboard",
            Case::Minimality { .. } => "minimality",
            Case::HellingerMetric { .. } => "hellinger-metric",
            Case::Markov { .. } => "markov",
            Case::Conditional { .. } => "conditional",
        }
    }

    /// Draws a case of `suite` from `rng`.
    pub fn generate<R: Rng + ?Sized>(suite: &str, rng: &mut R) -> Result<Case> {
        let dj = |d: &DiscreteDistribution| DistributionJson::from(d);
        Ok(match suite {
            "duality" => {
                let (p, q) = corpus::random_pair(rng, MAX_ATOMS);
                Case::Duality { p: dj(&p), q: dj(&q), f: corpus::random_generator_name(rng) }
            }
            "affine" => {
                let (p, q) = corpus::random_pair(rng, MAX_ATOMS);
                let f = corpus::random_generator_name(rng);
                Case::Affine { p: dj(&p), q: dj(&q), f, c: rng.random_range(-5.0..5.0) }
            }
            "involution" => Case::Involution {
                f: corpus::random_generator_name(rng),
                t: (0..8).map(|_| 10f64.powf(rng.random_range(-6.0..6.0))).collect(),
            },
            "dpi" => {
                let (p, q) = corpus::random_pair(rng, MAX_ATOMS);
                let k_out = rng.random_range(1..=p.len());
                Case::Dpi {
                    p: dj(&p),
                    q: dj(&q),
                    phi: corpus::random_map(rng, p.len(), k_out),
                    f: corpus::random_generator_name(rng),
                }
            }
            "dpi-equality" => {
                let (p, q, phi) = corpus::fiber_constant_case(rng, MAX_ATOMS);
                Case::DpiEquality { p: dj(&p), q: dj(&q), phi, f: corpus::random_generator_name(rng) }
            }
            "sup" => {
                let (p, q) = corpus::random_pair(rng, MAX_ATOMS);
                let (sp, sq) = corpus::mutually_singular_pair(rng, MAX_ATOMS);
                Case::Sup {
                    p: dj(&p),
                    q: dj(&q),
                    singular_p: dj(&sp),
                    singular_q: dj(&sq),
                    f: corpus::random_generator_name(rng),
                }
            }
            "renyi" => {
                let mut alpha = rng.random_range(0.05..3.0);
                if (alpha - 1.0f64).abs() < 0.05 {
                    alpha += 0.1;
                }
                Case::Renyi { s: rng.random_range(0.01..0.99), t: rng.random_range(0.01..0.99), alpha }
            }
            "mutual-information" => Case::MutualInformation {
                joint: (&corpus::random_joint(rng, MAX_ATOMS, MAX_ATOMS)).into(),
            },
            "checkerboard" => Case::Checkerboard {
                joint: (&corpus::random_joint(rng, MAX_ATOMS, MAX_ATOMS)).into(),
                f: CHECKERBOARD_GENERATORS.iter().map(|s| s.to_string()).collect(),
            },
            "minimality" => {
                let j = corpus::random_joint(rng, MAX_ATOMS, MAX_ATOMS);
                let cb = checkerboard(&j);
                let candidates = (0..5)
                    .map(|_| {
                        let ku = rng.random_range(2..=3);
                        let kv = rng.random_range(2..=3);
                        let moves = rng.random_range(5..60);
                        GridJson::from(&random_refinement(&cb, ku, kv, moves, rng))
                    })
                    .collect();
                Case::Minimality {
                    joint: (&j).into(),
                    candidates,
                    f: vec!["hellinger".into(), "pearson".into()],
                }
            }
            "hellinger-metric" => {
                let k = rng.random_range(1..=MAX_ATOMS);
                let d = |rng: &mut R| dj(&corpus::random_distribution(rng, k, 0.2));
                Case::HellingerMetric { p: d(rng), q: d(rng), r: d(rng) }
            }
            "markov" => {
                let j = corpus::random_joint(rng, MAX_ATOMS, MAX_ATOMS);
                let k = corpus::random_kernel(rng, j.y_labels().to_vec(), MAX_ATOMS);
                Case::Markov { joint: (&j).into(), kernel: (&k).into(), f: corpus::random_generator_name(rng) }
            }
            "conditional" => Case::Conditional {
                joint: (&corpus::random_joint(rng, MAX_ATOMS, MAX_ATOMS)).into(),
                f: corpus::random_generator_name(rng),
            },
            other => return Err(Error::InvalidParameter(format!("unknown check suite '{other}'"))),
        })
    }

    /// Checks the property at tolerance `tol`.
    pub fn evaluate(&self, tol: f64) -> Result<Outcome> {
        Ok(match self {
            Case::Duality { p, q, f } => {
                let (p, q, g) = (dist(p)?, dist(q)?, gen(f)?);
                let a = f_divergence(&p, &q, &g).value;
                let b = f_divergence(&q, &p, &conjugate(&g)).value;
                equal_outcome(a, b, tol, "D_f(P||Q) vs D_f*(Q||P)")
            }
            Case::Affine { p, q, f, c } => {
                let (p, q, g) = (dist(p)?, dist(q)?, gen(f)?);
                let a = f_divergence(&p, &q, &g).value;
                let b = f_divergence(&p, &q, &affine_shift(&g, *c)).value;
                equal_outcome(a, b, tol, "D_f vs D_{f+c(t-1)}")
            }
            Case::Involution { f, t } => {
                let g = gen(f)?;
                let gg = conjugate(&conjugate(&g));
                let mut out = vec![
                    equal_outcome(g.at_zero(), gg.at_zero(), 0.0, "f(0) vs f**(0)"),
                    equal_outcome(g.conj_at_zero(), gg.conj_at_zero(), 0.0, "f*(0) vs f***(0)"),
                ];
                for &x in t {
                    out.push(equal_outcome(
                        ExtReal::from_f64(g.eval(x)),
                        ExtReal::from_f64(gg.eval(x)),
                        tol,
                        &format!("f({x:e}) vs f**({x:e})"),
                    ));
                }
                all(out)
            }
            Case::Dpi { p, q, phi, f } => {
                let (p, q, g) = (dist(p)?, dist(q)?, gen(f)?);
                let c = crate::divergence::dpi_check(&p, &q, |l| apply_map(phi, l), &g);
                le_outcome(c.after, c.before, tol, "D_f(phi#P||phi#Q) <= D_f(P||Q)")
            }
            Case::DpiEquality { p, q, phi, f } => {
                let (p, q, g) = (dist(p)?, dist(q)?, gen(f)?);
                let c = crate::divergence::dpi_check(&p, &q, |l| apply_map(phi, l), &g);
                equal_outcome(c.after, c.before, tol, "fiber-constant push-forward")
            }
            Case::Sup { p, q, singular_p, singular_q, f } => {
                let g = gen(f)?;
                let bound = sup_bound(&g);
                let d = f_divergence(&dist(p)?, &dist(q)?, &g).value;
                let s = f_divergence(&dist(singular_p)?, &dist(singular_q)?, &g).value;
                let exact = Outcome {
                    holds: s == bound,
                    excess: if s == bound { -1.0 } else { f64::INFINITY },
                    detail: format!("singular pair: {} vs sup {}", fmt(s), fmt(bound)),
                };
                all(vec![exact, le_outcome(d, bound, scaled(tol, d, bound), "D_f <= sup")])
            }
            Case::Renyi { s, t, alpha } => {
                let p = DiscreteDistribution::bernoulli(*s)?;
                let q = DiscreteDistribution::bernoulli(*t)?;
                let bridge = |a: f64| -> Result<Outcome> {
                    let r = renyi(&p, &q, a)?;
                    let d = f_divergence(&p, &q, &builtin(BuiltinKind::Alpha(a))).value;
                    let via = d.finite().map_or(ExtReal::PosInf, |d| {
                        ExtReal::from_f64((a * (a - 1.0)).mul_add(d, 1.0).ln() / (a - 1.0))
                    });
                    Ok(equal_outcome(r, via, tol, &format!("R_{a} vs alpha-divergence")))
                };
                let d_half = f_divergence(&p, &q, &builtin(BuiltinKind::Alpha(0.5))).value;
                let d_h = f_divergence(&p, &q, &builtin(BuiltinKind::Hellinger)).value;
                let twice = d_h.finite().map_or(ExtReal::PosInf, |x| ExtReal::from_f64(2.0 * x));
                all(vec![bridge(0.5)?, bridge(*alpha)?, equal_outcome(d_half, twice, tol, "D_1/2 vs 2 D_H")])
            }
            Case::MutualInformation { joint: j } => {
                let j = joint(j)?;
                let s = csiszar_index(&j, &builtin(BuiltinKind::ConjugateKullbackLeibler)).value;
                equal_outcome(s, ExtReal::from_f64(mutual_information(&j)), tol, "S_KL* vs H(X)+H(Y)-H(X,Y)")
            }
            Case::Checkerboard { joint: j, f } => {
                let j = joint(j)?;
                let cb = checkerboard(&j);
                let mut out = Vec::new();
                for name in f {
                    let g = gen(name)?;
                    out.push(equal_outcome(
                        grid_divergence(&cb, &g),
                        csiszar_index(&j, &g).value,
                        tol,
                        &format!("{name}: grid vs csiszar"),
                    ));
                }
                all(out)
            }
            Case::Minimality { joint: j, candidates, f } => {
                let j = joint(j)?;
                let cands = candidates
                    .iter()
                    .map(|c| GridCopula::try_from(c.clone()))
                    .collect::<Result<Vec<_>>>()?;
                let base_grid = checkerboard(&j);
                let mut out = Vec::new();
                for name in f {
                    let g = gen(name)?;
                    let holds = minimality_check(&j, &cands, &g)?;
                    let base = grid_divergence(&base_grid, &g);
                    let worst = cands
                        .iter()
                        .map(|c| grid_divergence(c, &g))
                        .min_by(ExtReal::total_cmp)
                        .unwrap_or(ExtReal::PosInf);
                    let mut o = le_outcome(base, worst, tol, &format!("{name}: checkerboard <= candidates"));
                    o.holds = holds;
                    out.push(o);
                }
                all(out)
            }
            Case::HellingerMetric { p, q, r } => {
                let (p, q, r) = (dist(p)?, dist(q)?, dist(r)?);
                let h = builtin(BuiltinKind::Hellinger);
                let d = |a: &DiscreteDistribution, b: &DiscreteDistribution| {
                    f_divergence(a, b, &h).value.finite().expect("Hellinger is bounded").sqrt()
                };
                le_outcome(
                    ExtReal::from_f64(d(&p, &q)),
                    ExtReal::from_f64(d(&p, &r) + d(&r, &q)),
                    tol,
                    "sqrt H(P,Q) <= sqrt H(P,R) + sqrt H(R,Q)",
                )
            }
            Case::Markov { joint: j, kernel, f } => {
                let j = joint(j)?;
                let k = StochasticKernel::try_from(kernel.clone())?;
                let m = markov_chain_monotonicity(&j, &k, &gen(f)?)?;
                le_outcome(m.s_xz, m.s_xy, tol, "S_f(X,Z) <= S_f(X,Y)")
            }
            Case::Conditional { joint: j, f } => {
                let r = csiszar_index(&joint(j)?, &gen(f)?);
                equal_outcome(r.via_joint, r.via_conditionals, tol, "joint vs conditional form")
            }
        })
    }
}

/// The RNG for one trial: the ChaCha stream number is the trial index.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

/// Runs `trials` cases of `suite`; keeps the first counterexample.
pub fn run_suite(suite: &str, trials: u64, seed: u64, tolerance: Option<f64>) -> Result<SuiteReport> {
    let tol = tolerance.unwrap_or_else(|| default_tolerance(suite));
    let mut report = SuiteReport {
        suite: suite.to_string(),
        seed,
        trials,
        tolerance: tol,
        passed: 0,
        failed: 0,
        counterexample: None,
    };
    for trial in 0..trials {
        let mut rng = trial_rng(seed, trial);
        let case = Case::generate(suite, &mut rng)?;
        let outcome = case.evaluate(tol)?;
        if outcome.holds {
            report.passed += 1;
        } else {
            report.failed += 1;
            if report.counterexample.is_none() {
                report.counterexample = Some(Counterexample {
                    seed,
                    trial,
                    tolerance: tol,
                    case,
                    detail: outcome.detail,
                });
            }
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_suite_passes_a_short_run() {
        for s in SUITES {
            let r = run_suite(s, 60, 99, None).unwrap();
            assert!(r.ok(), "{s}: {:?}", r.counterexample);
        }
    }

    #[test]
    fn cases_round_trip_through_json() {
        for s in SUITES {
            let case = Case::generate(s, &mut trial_rng(5, 3)).unwrap();
            let text = serde_json::to_string(&case).unwrap();
            let back: Case = serde_json::from_str(&text).unwrap();
            assert_eq!(back.suite(), s);
            assert_eq!(back.evaluate(default_tolerance(s)).unwrap(), case.evaluate(default_tolerance(s)).unwrap());
        }
    }

    #[test]
    fn trials_are_reproducible() {
        let a = serde_json::to_string(&Case::generate("dpi", &mut trial_rng(7, 11)).unwrap()).unwrap();
        let b = serde_json::to_string(&Case::generate("dpi", &mut trial_rng(7, 11)).unwrap()).unwrap();
        let c = serde_json::to_string(&Case::generate("dpi", &mut trial_rng(7, 12)).unwrap()).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn a_forged_case_fails() {
        // a "push-forward" that increases the divergence cannot come from a map,
        // so feed the check an inconsistent equality case instead
        let p = DiscreteDistribution::from_masses(&[0.5, 0.5]).unwrap();
        let q = DiscreteDistribution::from_masses(&[0.9, 0.1]).unwrap();
        let case = Case::DpiEquality {
            p: (&p).into(),
            q: (&q).into(),
            phi: vec![(Label::Int(0), Label::Int(0)), (Label::Int(1), Label::Int(0))],
            f: "tv".into(),
        };
        let o = case.evaluate(1e-12).unwrap();
        assert!(!o.holds && o.excess > 0.0);
        assert!(Case::generate("nope", &mut trial_rng(0, 0)).is_err());
    }
}
