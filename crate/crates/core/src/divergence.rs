//! f-divergences between finite discrete distributions.
//!
//! `D_f(P || Q) = sum_{q > 0} q f(p / q) + f*(0) P(q = 0)`, where the last
//! term is zero whenever `P(q = 0) = 0`, even if `f*(0) = +inf`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::generators::{builtin, conjugate, BuiltinKind, Generator};
use crate::measures::{align, markov_triple, pushforward_map, DiscreteDistribution, JointDistribution, Label, StochasticKernel};
use crate::numeric::{compensated_sum, CompensatedSum, ExtReal, ExtSum};

/// Tolerance for theorem-level inequalities.
pub const THEOREM_TOL: f64 = 1e-10;
/// Tolerance for algebraic identities.
pub const IDENTITY_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DivergenceValue {
    pub value: ExtReal,
    /// `P(dP/dQ = +inf)`.
    pub singular_mass: f64,
    /// `sum_{q > 0} q f(p / q)`.
    pub absolutely_continuous_part: ExtReal,
}

/// Divergence between two mass vectors laid out on the same atoms.
///
/// This is the single summation kernel behind every divergence in the crate.
/// Terms are sorted before compensated summation, so the result does not
/// depend on how the atoms are ordered (transposing a joint or relabeling
/// injectively gives bit-identical values).
pub fn divergence_of_masses(p: &[f64], q: &[f64], g: &Generator) -> DivergenceValue {
    assert_eq!(p.len(), q.len(), "mass vectors must be aligned");
    if !p.iter().zip(q).any(|(&pi, &qi)| pi > 0.0 && qi > 0.0) {
        // mutually singular probability vectors: each side carries all its mass
        let absolutely_continuous_part = g.at_zero();
        return DivergenceValue {
            value: absolutely_continuous_part + g.conj_at_zero(),
            singular_mass: 1.0,
            absolutely_continuous_part,
        };
    }
    let mut terms = Vec::with_capacity(p.len());
    let mut singular = Vec::new();
    let mut infinite = false;
    for (&pi, &qi) in p.iter().zip(q) {
        if qi > 0.0 {
            if pi > 0.0 {
                terms.push(qi * g.eval(pi / qi));
            } else {
                match g.at_zero() {
                    ExtReal::Finite(f0) => terms.push(qi * f0),
                    ExtReal::PosInf => infinite = true,
                }
            }
        } else if pi > 0.0 {
            singular.push(pi);
        }
    }
    let singular_mass = sorted_sum(&mut singular);
    let absolutely_continuous_part = if infinite {
        ExtReal::PosInf
    } else {
        ExtReal::from_f64(sorted_sum(&mut terms))
    };
    DivergenceValue {
        value: absolutely_continuous_part + g.conj_at_zero().scale_singular(singular_mass),
        singular_mass,
        absolutely_continuous_part,
    }
}

fn sorted_sum(xs: &mut [f64]) -> f64 {
    xs.sort_unstable_by(f64::total_cmp);
    compensated_sum(xs.iter().copied())
}

pub fn f_divergence(p: &DiscreteDistribution, q: &DiscreteDistribution, g: &Generator) -> DivergenceValue {
    let pair = align(p, q);
    divergence_of_masses(&pair.p, &pair.q, g)
}

/// Splits the divergence over `{p < q}` and `{q < p}`:
/// `sum_{p<q} q f(p/q) + sum_{q<p} p f*(q/p)`.
pub fn symmetric_decomposition(
    p: &DiscreteDistribution,
    q: &DiscreteDistribution,
    g: &Generator,
) -> (ExtReal, ExtReal) {
    let pair = align(p, q);
    let conj = conjugate(g);
    let mut lower = ExtSum::new();
    let mut upper = ExtSum::new();
    for (&pi, &qi) in pair.p.iter().zip(&pair.q) {
        if pi < qi {
            lower.add(g.value_at(pi / qi).checked_scale(qi).expect("q > 0"));
        } else if qi < pi {
            upper.add(conj.value_at(qi / pi).checked_scale(pi).expect("p > 0"));
        }
    }
    (lower.value(), upper.value())
}

/// `D_f(P_s || P_t)` for the two-point laws `P_s = (s, 1 - s)`.
pub fn two_point_divergence(s: f64, t: f64, g: &Generator) -> Result<ExtReal> {
    for (name, v) in [("s", s), ("t", t)] {
        if !(v > 0.0 && v < 1.0) {
            return Err(Error::InvalidParameter(format!("{name} = {v} must lie in (0, 1)")));
        }
    }
    Ok(ExtReal::from_f64(g.eval(s / t) * t + g.eval((1.0 - s) / (1.0 - t)) * (1.0 - t)))
}

/// Renyi divergence of order `alpha > 0`; `alpha = 1` is Kullback-Leibler.
///
/// On atoms with `q = 0` the integrand `p^a q^(1-a)` is 0 for `a < 1` and
/// `+inf` for `a > 1` when `p > 0`.
pub fn renyi(p: &DiscreteDistribution, q: &DiscreteDistribution, alpha: f64) -> Result<ExtReal> {
    if !(alpha.is_finite() && alpha > 0.0) {
        return Err(Error::InvalidParameter(format!("Renyi order must be in (0, inf), got {alpha}")));
    }
    if alpha == 1.0 {
        return Ok(f_divergence(p, q, &builtin(BuiltinKind::KullbackLeibler)).value);
    }
    let pair = align(p, q);
    let mut acc = CompensatedSum::new();
    for (&pi, &qi) in pair.p.iter().zip(&pair.q) {
        if pi > 0.0 && qi > 0.0 {
            acc.add(pi.powf(alpha) * qi.powf(1.0 - alpha));
        } else if pi > 0.0 && alpha > 1.0 {
            return Ok(ExtReal::PosInf);
        }
    }
    let s = acc.value();
    if s <= 0.0 {
        // only reachable for alpha < 1 with P, Q mutually singular
        return Ok(ExtReal::PosInf);
    }
    Ok(ExtReal::Finite(s.ln() / (alpha - 1.0)))
}

/// Shannon entropy in nats, with `0 log 0 = 0`.
pub fn entropy(p: &DiscreteDistribution) -> f64 {
    -compensated_sum(p.masses().iter().filter(|&&m| m > 0.0).map(|&m| m * m.ln()))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DpiCheck {
    pub before: ExtReal,
    pub after: ExtReal,
    pub holds: bool,
}

/// Compares `D_f(P || Q)` with `D_f(phi#P || phi#Q)`.
pub fn dpi_check<F>(p: &DiscreteDistribution, q: &DiscreteDistribution, phi: F, g: &Generator) -> DpiCheck
where
    F: Fn(&Label) -> Label,
{
    let before = f_divergence(p, q, g).value;
    let after = f_divergence(&pushforward_map(p, &phi), &pushforward_map(q, &phi), g).value;
    DpiCheck {
        before,
        after,
        holds: after.le_within(before, THEOREM_TOL),
    }
}

/// Whether `dP/dQ` is constant on every fiber of `phi` (relative tolerance
/// `tol`), which is when the push-forward inequality is an equality.
///
/// Returns `None` when the criterion does not apply: `D_f(P || Q)` infinite
/// or `f` not strictly convex on `(0, inf)`.
pub fn dpi_equality_expected<F>(
    p: &DiscreteDistribution,
    q: &DiscreteDistribution,
    phi: F,
    g: &Generator,
    tol: f64,
) -> Option<bool>
where
    F: Fn(&Label) -> Label,
{
    if !g.strictly_convex_on_positives() || f_divergence(p, q, g).value.is_infinite() {
        return None;
    }
    let pair = align(p, q);
    let mut fibers: Vec<(Label, f64)> = Vec::new();
    for ((l, &pi), &qi) in pair.labels.iter().zip(&pair.p).zip(&pair.q) {
        if pi == 0.0 && qi == 0.0 {
            continue;
        }
        let ratio = if qi > 0.0 { pi / qi } else { f64::INFINITY };
        let image = phi(l);
        match fibers.iter().find(|(im, _)| *im == image) {
            Some(&(_, r)) => {
                let same = if r.is_infinite() || ratio.is_infinite() {
                    r == ratio
                } else {
                    (r - ratio).abs() <= tol * r.abs().max(ratio.abs()).max(1.0)
                };
                if !same {
                    return Some(false);
                }
            }
            None => fibers.push((image, ratio)),
        }
    }
    Some(true)
}

/// For two joints of `(X, Y)` extended by a shared kernel `Z | Y ~ K(Y, .)`,
/// returns `(D_f(P'_{XYZ} || P_{XYZ}), D_f(P'_{XY} || P_{XY}))`.
pub fn markov_invariance_check(
    j: &JointDistribution,
    j_prime: &JointDistribution,
    k: &StochasticKernel,
    g: &Generator,
) -> Result<(ExtReal, ExtReal)> {
    if j.x_labels() != j_prime.x_labels() || j.y_labels() != j_prime.y_labels() {
        return Err(Error::LabelMismatch("the two joints must share their label sets".into()));
    }
    let t = markov_triple(j, k)?;
    let t_prime = markov_triple(j_prime, k)?;
    let d_xyz = f_divergence(&t_prime, &t, g).value;
    let d_xy = f_divergence(&j_prime.flatten(), &j.flatten(), g).value;
    Ok((d_xyz, d_xy))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::sup_bound;

    fn ber(p: f64) -> DiscreteDistribution {
        DiscreteDistribution::bernoulli(p).unwrap()
    }

    fn g(k: BuiltinKind) -> Generator {
        builtin(k)
    }

    fn all() -> Vec<Generator> {
        let mut v: Vec<Generator> = BuiltinKind::FIXED.iter().map(|&k| builtin(k)).collect();
        v.push(builtin(BuiltinKind::Alpha(0.3)));
        v
    }

    #[test]
    fn self_divergence_is_zero() {
        let p = DiscreteDistribution::from_masses(&[0.1, 0.0, 0.6, 0.3]).unwrap();
        for g in all() {
            assert_eq!(f_divergence(&p, &p, &g).value, ExtReal::ZERO, "{}", g.name());
        }
    }

    #[test]
    fn singular_point_masses_reach_sup() {
        let a = DiscreteDistribution::point_mass("a");
        let b = DiscreteDistribution::point_mass("b");
        let d = f_divergence(&a, &b, &g(BuiltinKind::TotalVariation));
        assert_eq!(d.value, ExtReal::Finite(2.0));
        assert_eq!(d.singular_mass, 1.0);
        assert_eq!(d.absolutely_continuous_part, ExtReal::Finite(1.0));
        for g in all() {
            assert_eq!(f_divergence(&a, &b, &g).value, sup_bound(&g), "{}", g.name());
        }
    }

    #[test]
    fn bernoulli_values() {
        let (p, q) = (ber(0.5), ber(0.25));
        let pearson = f_divergence(&p, &q, &g(BuiltinKind::Pearson)).value.finite().unwrap();
        assert!((pearson - 1.0 / 3.0).abs() < 1e-15);
        // direct sum oracle: 0.5 log(0.5/0.75) + 0.5 log(0.5/0.25)
        let kl_oracle = 0.5 * (0.5f64 / 0.75).ln() + 0.5 * (0.5f64 / 0.25).ln();
        let kl = f_divergence(&p, &q, &g(BuiltinKind::KullbackLeibler)).value.finite().unwrap();
        assert!((kl - kl_oracle).abs() < 1e-15);
        assert!((kl - 0.5 * (4.0f64 / 3.0).ln()).abs() < 1e-15);
        assert!((kl - 0.143_841_036_225_890_2).abs() < 1e-15);
    }

    #[test]
    fn zero_times_infinity_convention() {
        // P << Q with f*(0) = +inf: no singular contribution
        let p = DiscreteDistribution::from_masses(&[1.0, 0.0]).unwrap();
        let q = DiscreteDistribution::from_masses(&[0.5, 0.5]).unwrap();
        let d = f_divergence(&p, &q, &g(BuiltinKind::KullbackLeibler));
        assert_eq!(d.singular_mass, 0.0);
        assert!((d.value.finite().unwrap() - 2f64.ln()).abs() < 1e-15);
        // reversed: singular part with f*(0) = +inf
        let d = f_divergence(&q, &p, &g(BuiltinKind::KullbackLeibler));
        assert_eq!(d.singular_mass, 0.5);
        assert_eq!(d.value, ExtReal::PosInf);
        // f(0) = +inf on a q-only atom
        let d = f_divergence(&p, &q, &g(BuiltinKind::ConjugateKullbackLeibler));
        assert_eq!(d.value, ExtReal::PosInf);
        // negative f*(0)
        let d = f_divergence(&q, &p, &g(BuiltinKind::Neyman));
        let expected = 1.0 * ((1.0 - 0.25) / 0.5) + -0.5;
        assert!((d.value.finite().unwrap() - expected).abs() < 1e-15);
    }

    #[test]
    fn decomposition_examples() {
        let p = DiscreteDistribution::from_masses(&[0.2, 0.8]).unwrap();
        assert_eq!(symmetric_decomposition(&p, &p, &g(BuiltinKind::Pearson)), (ExtReal::ZERO, ExtReal::ZERO));

        let a = DiscreteDistribution::point_mass("a");
        let b = DiscreteDistribution::point_mass("b");
        assert_eq!(
            symmetric_decomposition(&a, &b, &g(BuiltinKind::TotalVariation)),
            (ExtReal::Finite(1.0), ExtReal::Finite(1.0))
        );

        // independent two-set loop
        let (p, q) = (ber(0.5), ber(0.25));
        let f = |t: f64| t * t - 1.0;
        let fstar = |t: f64| t * f(1.0 / t);
        let (pv, qv) = ([0.5, 0.5], [0.75, 0.25]);
        let mut lo = 0.0;
        let mut up = 0.0;
        for i in 0..2 {
            if pv[i] < qv[i] {
                lo += qv[i] * f(pv[i] / qv[i]);
            } else if qv[i] < pv[i] {
                up += pv[i] * fstar(qv[i] / pv[i]);
            }
        }
        let (l, u) = symmetric_decomposition(&p, &q, &g(BuiltinKind::Pearson));
        assert!((l.finite().unwrap() - lo).abs() < 1e-15);
        assert!((u.finite().unwrap() - up).abs() < 1e-15);
        assert!((lo + up - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn two_point_examples() {
        for g in all() {
            assert_eq!(two_point_divergence(0.3, 0.3, &g).unwrap(), ExtReal::ZERO);
        }
        let v = two_point_divergence(0.5, 0.25, &g(BuiltinKind::Pearson)).unwrap().finite().unwrap();
        assert!((v - 1.0 / 3.0).abs() < 1e-15);
        let v = two_point_divergence(0.5, 0.25, &g(BuiltinKind::TotalVariation)).unwrap();
        assert_eq!(v, ExtReal::Finite(0.5));
        assert!(two_point_divergence(0.0, 0.5, &g(BuiltinKind::Pearson)).is_err());
        assert!(two_point_divergence(0.5, 1.0, &g(BuiltinKind::Pearson)).is_err());
    }

    #[test]
    fn two_point_matches_general_formula() {
        for g in all() {
            for (s, t) in [(0.1, 0.7), (0.9, 0.2), (0.45, 0.55)] {
                let a = two_point_divergence(s, t, &g).unwrap().finite().unwrap();
                let b = f_divergence(&ber(1.0 - s), &ber(1.0 - t), &g).value.finite().unwrap();
                assert!((a - b).abs() < 1e-12, "{}", g.name());
            }
        }
    }

    #[test]
    fn renyi_examples() {
        let p = ber(0.3);
        assert_eq!(renyi(&p, &p, 0.5).unwrap(), ExtReal::ZERO);
        let r2 = renyi(&ber(0.5), &ber(0.25), 2.0).unwrap().finite().unwrap();
        assert!((r2 - (4.0f64 / 3.0).ln()).abs() < 1e-15);
        let kl = renyi(&ber(0.5), &ber(0.25), 1.0).unwrap().finite().unwrap();
        assert!((kl - 0.5 * (4.0f64 / 3.0).ln()).abs() < 1e-15);
        assert!(renyi(&p, &p, 0.0).is_err());
        assert!(renyi(&p, &p, -1.0).is_err());
    }

    #[test]
    fn renyi_singular_conventions() {
        let p = DiscreteDistribution::from_masses(&[0.5, 0.5]).unwrap();
        let q = DiscreteDistribution::from_masses(&[1.0, 0.0]).unwrap();
        assert_eq!(renyi(&p, &q, 2.0).unwrap(), ExtReal::PosInf);
        // alpha < 1: the q = 0 atom contributes nothing
        let r = renyi(&p, &q, 0.5).unwrap().finite().unwrap();
        assert!((r - (-2.0 * (0.5f64.sqrt()).ln())).abs() < 1e-15);
        let a = DiscreteDistribution::point_mass("a");
        let b = DiscreteDistribution::point_mass("b");
        assert_eq!(renyi(&a, &b, 0.5).unwrap(), ExtReal::PosInf);
    }

    #[test]
    fn entropy_examples() {
        assert_eq!(entropy(&DiscreteDistribution::point_mass("a")), 0.0);
        assert!((entropy(&ber(0.5)) - 2f64.ln()).abs() < 1e-15);
        for n in [3usize, 7, 16] {
            let u = DiscreteDistribution::uniform((0..n as i64).map(Label::Int)).unwrap();
            assert!((entropy(&u) - (n as f64).ln()).abs() < 1e-14);
        }
    }

    #[test]
    fn dpi_examples() {
        let p = DiscreteDistribution::from_masses(&[0.2, 0.3, 0.5]).unwrap();
        let q = DiscreteDistribution::from_masses(&[0.4, 0.4, 0.2]).unwrap();
        let id = dpi_check(&p, &q, |l| l.clone(), &g(BuiltinKind::Hellinger));
        assert_eq!(id.before, id.after);
        assert!(id.holds);

        let abs = |l: &Label| Label::Int(l.as_int().unwrap().abs());
        let ps = DiscreteDistribution::new([(Label::Int(-1), 0.15), (Label::Int(1), 0.15), (Label::Int(2), 0.7)]).unwrap();
        let qs = DiscreteDistribution::new([(Label::Int(-1), 0.4), (Label::Int(1), 0.4), (Label::Int(2), 0.2)]).unwrap();
        for g in all() {
            let c = dpi_check(&ps, &qs, abs, &g);
            assert!(c.before.approx_eq(c.after, 1e-12), "{}", g.name());
            if g.strictly_convex_on_positives() {
                assert_eq!(dpi_equality_expected(&ps, &qs, abs, &g, 1e-12), Some(true));
            }
        }

        let plus = DiscreteDistribution::point_mass(Label::Int(1));
        let minus = DiscreteDistribution::point_mass(Label::Int(-1));
        for g in all() {
            let c = dpi_check(&plus, &minus, abs, &g);
            assert_eq!(c.before, sup_bound(&g));
            assert_eq!(c.after, ExtReal::ZERO);
            assert!(c.holds);
        }
    }

    #[test]
    fn equality_criterion_refuses_infinite_divergence() {
        let p = DiscreteDistribution::from_masses(&[0.5, 0.5]).unwrap();
        let q = DiscreteDistribution::from_masses(&[1.0, 0.0]).unwrap();
        assert_eq!(dpi_equality_expected(&p, &q, |_| Label::Int(0), &g(BuiltinKind::KullbackLeibler), 1e-12), None);
        assert_eq!(dpi_equality_expected(&p, &q, |_| Label::Int(0), &g(BuiltinKind::TotalVariation), 1e-12), None);
        // finite Hellinger with mixed ratios on one fiber
        assert_eq!(dpi_equality_expected(&p, &q, |_| Label::Int(0), &g(BuiltinKind::Hellinger), 1e-12), Some(false));
    }

    #[test]
    fn markov_invariance_examples() {
        let j = JointDistribution::from_matrix(vec![vec![0.1, 0.2], vec![0.3, 0.4]]).unwrap();
        let jp = JointDistribution::from_matrix(vec![vec![0.25, 0.05], vec![0.2, 0.5]]).unwrap();
        let h = g(BuiltinKind::Hellinger);
        let id = StochasticKernel::identity(j.y_labels().to_vec());
        let (a, b) = markov_invariance_check(&j, &jp, &id, &h).unwrap();
        let direct = f_divergence(&jp.flatten(), &j.flatten(), &h).value;
        assert!(a.approx_eq(b, 1e-12) && b == direct);

        let rho = DiscreteDistribution::from_masses(&[0.3, 0.7]).unwrap();
        let k = StochasticKernel::constant(j.y_labels().to_vec(), &rho);
        let (a, b) = markov_invariance_check(&j, &jp, &k, &h).unwrap();
        assert!(a.approx_eq(b, 1e-10));

        let other = JointDistribution::new(vec![Label::from("a"), Label::from("b")], j.y_labels().to_vec(), j.rows()).unwrap();
        assert!(markov_invariance_check(&j, &other, &k, &h).is_err());
    }
}
