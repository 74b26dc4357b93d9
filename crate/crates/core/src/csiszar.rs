//! The Csiszar dependence index `S_f(X, Y) = D_f(P_X (x) P_Y || P_{(X,Y)})`.
//!
//! The product of the marginals is the first argument and the joint the
//! second. Divergences are not symmetric, so swapping them computes a
//! different quantity.

use serde::Serialize;

use crate::divergence::{divergence_of_masses, entropy, f_divergence, THEOREM_TOL};
use crate::error::Result;
use crate::generators::Generator;
use crate::measures::{augment_independent, conditionals, marginals, markov_compose, product, DiscreteDistribution, JointDistribution, Label, StochasticKernel};
use crate::numeric::{ExtReal, ExtSum};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CsiszarResult {
    pub value: ExtReal,
    /// Directly from the flattened product and joint.
    pub via_joint: ExtReal,
    /// `sum_x P_X(x) D_f(P_Y || P_{Y|X=x})` over atoms with `P_X(x) > 0`.
    pub via_conditionals: ExtReal,
}

pub fn csiszar_index(j: &JointDistribution, g: &Generator) -> CsiszarResult {
    let (px, py) = marginals(j);
    let prod = product(&px, &py);
    let via_joint = divergence_of_masses(prod.cells(), j.cells(), g).value;

    let cond = conditionals(j);
    let mut acc = ExtSum::new();
    for (i, &w) in px.masses().iter().enumerate() {
        let Some(row) = cond.row(i) else { continue };
        let d = divergence_of_masses(py.masses(), row, g).value;
        acc.add(d.checked_scale(w).expect("positive marginal"));
    }
    CsiszarResult {
        value: via_joint,
        via_joint,
        via_conditionals: acc.value(),
    }
}

/// `H(X) + H(Y) - H(X, Y)` in nats.
pub fn mutual_information(j: &JointDistribution) -> f64 {
    let (px, py) = marginals(j);
    entropy(&px) + entropy(&py) - entropy(&j.flatten())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ReductionCheck {
    pub before: ExtReal,
    pub after: ExtReal,
    pub holds: bool,
}

/// Compares `S_f(X, Y)` with `S_f(phi_x(X), phi_y(Y))`.
pub fn transform_reduces<FX, FY>(j: &JointDistribution, phi_x: FX, phi_y: FY, g: &Generator) -> ReductionCheck
where
    FX: Fn(&Label) -> Label,
    FY: Fn(&Label) -> Label,
{
    let before = csiszar_index(j, g).value;
    let after = csiszar_index(&j.pushforward(phi_x, phi_y), g).value;
    ReductionCheck {
        before,
        after,
        holds: after.le_within(before, THEOREM_TOL),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MarkovMonotonicity {
    pub s_xy: ExtReal,
    pub s_xz: ExtReal,
    pub holds: bool,
}

/// For a chain `X - Y - Z` with `Z | Y ~ K`, checks `S_f(X, Z) <= S_f(X, Y)`.
pub fn markov_chain_monotonicity(
    j: &JointDistribution,
    k: &StochasticKernel,
    g: &Generator,
) -> Result<MarkovMonotonicity> {
    let xz = markov_compose(j, k)?;
    let s_xy = csiszar_index(j, g).value;
    let s_xz = csiszar_index(&xz, g).value;
    Ok(MarkovMonotonicity {
        s_xy,
        s_xz,
        holds: s_xz.le_within(s_xy, THEOREM_TOL),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AugmentationCheck {
    pub s_base: ExtReal,
    pub s_aug: ExtReal,
    pub holds_equal: bool,
}

/// `S_f((X, U), Y)` against `S_f(X, Y)` for `U ~ pu` independent of `(X, Y)`.
pub fn independent_augmentation_check(
    j: &JointDistribution,
    pu: &DiscreteDistribution,
    g: &Generator,
) -> AugmentationCheck {
    let s_base = csiszar_index(j, g).value;
    let s_aug = csiszar_index(&augment_independent(j, pu), g).value;
    AugmentationCheck {
        s_base,
        s_aug,
        holds_equal: s_aug.approx_eq(s_base, THEOREM_TOL),
    }
}

/// `S_f` via the generic divergence on label-pair distributions; used to
/// cross-check the row-major fast path.
pub fn csiszar_index_flattened(j: &JointDistribution, g: &Generator) -> ExtReal {
    let (px, py) = marginals(j);
    f_divergence(&product(&px, &py).flatten(), &j.flatten(), g).value
}
