use super::dilog::dilog;
use super::grid::GridCopula;
use super::quadrature::GaussLegendre;
use crate::error::{Error, Result};
use crate::generators::Generator;
use crate::numeric::CompensatedSum;

/// Agreement required between the requested order and half of it.
pub const CONVERGENCE_TOL: f64 = 1e-5;

/// Farlie-Gumbel-Morgenstern copula with density `1 + theta (1-2u)(1-2v)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FgmCopula {
    theta: f64,
}

impl FgmCopula {
    pub fn new(theta: f64) -> Result<Self> {
        if !(-1.0..=1.0).contains(&theta) {
            return Err(Error::InvalidParameter(format!("FGM theta must lie in [-1, 1], got {theta}")));
        }
        Ok(FgmCopula { theta })
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn density(&self, u: f64, v: f64) -> f64 {
        self.density_split(u, 1.0 - u, v, 1.0 - v)
    }

    /// Density given both `u` and `1 - u` (and likewise for `v`), so points
    /// near the corners keep full relative accuracy.
    pub fn density_split(&self, u: f64, u_c: f64, v: f64, v_c: f64) -> f64 {
        let (x, y) = (u.min(u_c), v.min(v_c));
        let same_side = (u <= u_c) == (v <= v_c);
        let t = self.theta.abs();
        if (self.theta >= 0.0) == same_side {
            1.0 + t * (1.0 - 2.0 * x) * (1.0 - 2.0 * y)
        } else {
            (1.0 - t) + t * (2.0 * x + 2.0 * y - 4.0 * x * y)
        }
    }

    /// `C(u, v) = uv (1 + theta (1-u)(1-v))`.
    pub fn cdf(&self, u: f64, v: f64) -> f64 {
        u * v * (1.0 + self.theta * (1.0 - u) * (1.0 - v))
    }

    /// Exact cell masses on the uniform `k x k` grid.
    pub fn discretize(&self, k: usize) -> GridCopula {
        assert!(k >= 1);
        let breaks: Vec<f64> = (0..=k).map(|i| i as f64 / k as f64).collect();
        let h = 1.0 / k as f64;
        let mut mass = Vec::with_capacity(k * k);
        for i in 0..k {
            let a = 1.0 - breaks[i] - breaks[i + 1];
            for j in 0..k {
                let b = 1.0 - breaks[j] - breaks[j + 1];
                mass.push(h * h * (1.0 + self.theta * a * b));
            }
        }
        GridCopula::new(breaks.clone(), breaks, mass).expect("FGM grid is a copula")
    }
}

/// The FGM member matching a Bernoulli pair: `P(X=1)=p`, `P(Y=1)=q`,
/// `P(X=1,Y=1)=r`.
pub fn fgm_fit_bernoulli(p: f64, q: f64, r: f64) -> Result<FgmCopula> {
    if !(p > 0.0 && p < 1.0 && q > 0.0 && q < 1.0) {
        return Err(Error::ConstraintViolation(format!("p and q must lie in (0, 1), got p={p}, q={q}")));
    }
    if !((p + q - 1.0).max(0.0) < r && r < p.min(q)) {
        return Err(Error::ConstraintViolation(format!(
            "r={r} must satisfy max(p+q-1, 0) < r < min(p, q)"
        )));
    }
    let theta = (r - p * q) / (p * q * (1.0 - p) * (1.0 - q));
    if !(-1.0..=1.0).contains(&theta) {
        return Err(Error::ConstraintViolation(format!("fitted theta={theta} lies outside [-1, 1]")));
    }
    let c = FgmCopula { theta };
    let target = 1.0 - p - q + r;
    let got = c.cdf(1.0 - p, 1.0 - q);
    if (got - target).abs() > 1e-12 {
        return Err(Error::ConstraintViolation(format!("fit reproduces {got}, expected {target}")));
    }
    Ok(c)
}

/// `D_P(Pi || C_theta) = (Li2(theta) - Li2(-theta)) / (2 theta) - 1`.
pub fn fgm_pearson_closed_form(theta: f64) -> f64 {
    assert!((-1.0..=1.0).contains(&theta), "theta must lie in [-1, 1]");
    if theta.abs() < 1e-4 {
        // odd series of Li2: sum theta^{2k} / (2k+1)^2 over k >= 1
        let t2 = theta * theta;
        return t2 / 9.0 + t2 * t2 / 25.0 + t2 * t2 * t2 / 49.0;
    }
    (dilog(theta) - dilog(-theta)) / (2.0 * theta) - 1.0
}

// u = psi(s) pushes the nodes towards 0 and 1 where 1/c may blow up.
fn psi(s: f64) -> f64 {
    s * s * s * s * (35.0 + s * (-84.0 + s * (70.0 - 20.0 * s)))
}

fn psi_prime(s: f64) -> f64 {
    let r = s * (1.0 - s);
    140.0 * r * r * r
}

struct Rule {
    u: Vec<f64>,
    u_c: Vec<f64>,
    w: Vec<f64>,
}

fn mapped_rule(order: usize) -> Rule {
    let gl = GaussLegendre::new(order);
    let mut rule = Rule {
        u: Vec::with_capacity(order),
        u_c: Vec::with_capacity(order),
        w: Vec::with_capacity(order),
    };
    for (&s, &w) in gl.nodes.iter().zip(&gl.weights) {
        rule.u.push(psi(s));
        rule.u_c.push(psi(1.0 - s));
        rule.w.push(w * psi_prime(s));
    }
    rule
}

fn tensor_estimate(c: &FgmCopula, g: &Generator, order: usize) -> f64 {
    let rule = mapped_rule(order);
    let mut acc = CompensatedSum::new();
    for i in 0..order {
        for j in 0..order {
            let w = rule.w[i] * rule.w[j];
            if w == 0.0 {
                continue;
            }
            let dens = c.density_split(rule.u[i], rule.u_c[i], rule.u[j], rule.u_c[j]);
            let term = if dens > 0.0 {
                dens * g.eval(1.0 / dens)
            } else {
                g.conj_at_zero().to_f64()
            };
            acc.add(w * term);
        }
    }
    acc.value()
}

/// Tensor Gauss-Legendre estimate of `D_f(Pi || C_theta)`.
///
/// The estimate is repeated at half the order; disagreement beyond
/// [`CONVERGENCE_TOL`] is reported as non-convergence.
pub fn fgm_divergence_quadrature(c: &FgmCopula, g: &Generator, order: usize) -> Result<f64> {
    if order < 16 {
        return Err(Error::InvalidParameter(format!("quadrature order must be at least 16, got {order}")));
    }
    if c.theta() <= -1.0 {
        return Err(Error::InvalidParameter("theta = -1 is outside the supported range (-1, 1]".into()));
    }
    if c.theta() == 0.0 {
        return Ok(0.0);
    }
    let value = tensor_estimate(c, g, order);
    let coarse_order = order / 2;
    let coarse_value = tensor_estimate(c, g, coarse_order);
    if !value.is_finite() || (value - coarse_value).abs() > CONVERGENCE_TOL {
        return Err(Error::NonConvergence {
            order,
            value,
            coarse_order,
            coarse_value,
        });
    }
    Ok(value)
}
