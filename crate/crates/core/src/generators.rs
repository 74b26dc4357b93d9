//! Divergence generators: convex `f` on `[0, inf)` with `f(1) = 0`.
//!
//! A generator is only ever evaluated on `(0, inf)`. Its behaviour at the
//! boundary is carried by two stored limits: `f(0) = lim_{t -> 0+} f(t)` and
//! `f*(0) = lim_{t -> inf} f(t) / t`, where `f*(t) = t f(1/t)` is the
//! conjugate generator. Swapping `f` for `f*` swaps the arguments of the
//! divergence.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::numeric::ExtReal;

type EvalFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// The built-in catalog.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BuiltinKind {
    /// `t log t`
    KullbackLeibler,
    /// `-log t`
    ConjugateKullbackLeibler,
    /// `|t - 1|`
    TotalVariation,
    /// `(sqrt t - 1)^2`
    Hellinger,
    /// `t^2 - 1`
    Pearson,
    /// `(1 - t^2) / t`
    Neyman,
    /// `(t^a - a t - (1 - a)) / (a (a - 1))`, extended by continuity at 0 and 1.
    Alpha(f64),
    /// `(1 - t)^2 / (2t + 2)`
    LeCam,
    /// `t log(2t / (t + 1)) + log(2 / (t + 1))`
    JensenShannon,
}

impl BuiltinKind {
    /// Every kind except the parametric `Alpha`.
    pub const FIXED: [BuiltinKind; 8] = [
        BuiltinKind::KullbackLeibler,
        BuiltinKind::ConjugateKullbackLeibler,
        BuiltinKind::TotalVariation,
        BuiltinKind::Hellinger,
        BuiltinKind::Pearson,
        BuiltinKind::Neyman,
        BuiltinKind::LeCam,
        BuiltinKind::JensenShannon,
    ];

    /// CLI spelling.
    pub fn cli_name(&self) -> String {
        match self {
            BuiltinKind::KullbackLeibler => "kl".into(),
            BuiltinKind::ConjugateKullbackLeibler => "kl-star".into(),
            BuiltinKind::TotalVariation => "tv".into(),
            BuiltinKind::Hellinger => "hellinger".into(),
            BuiltinKind::Pearson => "pearson".into(),
            BuiltinKind::Neyman => "neyman".into(),
            BuiltinKind::Alpha(a) => format!("alpha:{a}"),
            BuiltinKind::LeCam => "lecam".into(),
            BuiltinKind::JensenShannon => "js".into(),
        }
    }
}

impl fmt::Display for BuiltinKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.cli_name())
    }
}

impl FromStr for BuiltinKind {
    type Err = Error;

    /// Accepts the CLI names (`kl`, `kl-star`, `tv`, `hellinger`, `pearson`,
    /// `neyman`, `alpha:<float>`, `lecam`, `js`) and the short catalog
    /// names (`KL`, `KL*`, `TV`, `H`, `P`, `N`, `LC`, `JS`), case-insensitively.
    fn from_str(s: &str) -> Result<Self> {
        let lower = s.trim().to_ascii_lowercase();
        if let Some(rest) = lower.strip_prefix("alpha:") {
            let a: f64 = rest
                .parse()
                .map_err(|_| Error::InvalidParameter(format!("bad alpha in `{s}`")))?;
            if !a.is_finite() {
                return Err(Error::InvalidParameter(format!("alpha must be finite, got {a}")));
            }
            return Ok(BuiltinKind::Alpha(a));
        }
        let kind = match lower.as_str() {
            "kl" => BuiltinKind::KullbackLeibler,
            "kl-star" | "kl*" | "klstar" | "reverse-kl" => BuiltinKind::ConjugateKullbackLeibler,
            "tv" => BuiltinKind::TotalVariation,
            "hellinger" | "h" => BuiltinKind::Hellinger,
            "pearson" | "p" | "chi2" => BuiltinKind::Pearson,
            "neyman" | "n" => BuiltinKind::Neyman,
            "lecam" | "lc" => BuiltinKind::LeCam,
            "js" | "jensen-shannon" => BuiltinKind::JensenShannon,
            "alpha" => {
                return Err(Error::InvalidParameter(
                    "alpha generator needs a parameter, e.g. alpha:0.3".into(),
                ))
            }
            _ => return Err(Error::UnknownGenerator(s.to_string())),
        };
        Ok(kind)
    }
}

/// A member of the generator family together with its boundary limits.
#[derive(Clone)]
pub struct Generator {
    name: String,
    eval: EvalFn,
    at_zero: ExtReal,
    conj_at_zero: ExtReal,
    strictly_convex_at_one: bool,
    strictly_convex_on_positives: bool,
    domain_hint: String,
}

impl fmt::Debug for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Generator")
            .field("name", &self.name)
            .field("at_zero", &self.at_zero)
            .field("conj_at_zero", &self.conj_at_zero)
            .field("strictly_convex_at_one", &self.strictly_convex_at_one)
            .field("strictly_convex_on_positives", &self.strictly_convex_on_positives)
            .finish()
    }
}

fn arc(f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> EvalFn {
    Arc::new(f)
}

impl Generator {
    pub fn builtin(kind: BuiltinKind) -> Generator {
        use ExtReal::{Finite, PosInf};
        let (eval, at_zero, conj_at_zero, strict_positives) = match kind {
            BuiltinKind::KullbackLeibler => (arc(|t| t * t.ln()), Finite(0.0), PosInf, true),
            BuiltinKind::ConjugateKullbackLeibler => (arc(|t| -t.ln()), PosInf, Finite(0.0), true),
            BuiltinKind::TotalVariation => (arc(|t| (t - 1.0).abs()), Finite(1.0), Finite(1.0), false),
            BuiltinKind::Hellinger => (
                arc(|t| {
                    let s = t.sqrt() - 1.0;
                    s * s
                }),
                Finite(1.0),
                Finite(1.0),
                true,
            ),
            BuiltinKind::Pearson => (arc(|t| t * t - 1.0), Finite(-1.0), PosInf, true),
            BuiltinKind::Neyman => (arc(|t| (1.0 - t * t) / t), PosInf, Finite(-1.0), true),
            BuiltinKind::Alpha(a) => return alpha_generator(a),
            BuiltinKind::LeCam => (
                arc(|t| (1.0 - t) * (1.0 - t) / (2.0 * t + 2.0)),
                Finite(0.5),
                Finite(0.5),
                true,
            ),
            BuiltinKind::JensenShannon => (
                arc(|t| t * (2.0 * t / (t + 1.0)).ln() + (2.0 / (t + 1.0)).ln()),
                Finite(std::f64::consts::LN_2),
                Finite(std::f64::consts::LN_2),
                true,
            ),
        };
        Generator {
            name: kind.cli_name(),
            eval,
            at_zero,
            conj_at_zero,
            strictly_convex_at_one: true,
            strictly_convex_on_positives: strict_positives,
            domain_hint: "[0, inf)".into(),
        }
    }

    /// Looks a built-in up by name. `alpha` must be given iff the name is `alpha`.
    pub fn builtin_by_name(name: &str, alpha: Option<f64>) -> Result<Generator> {
        let is_alpha = name.trim().eq_ignore_ascii_case("alpha");
        match (is_alpha, alpha) {
            (true, Some(a)) => Ok(Generator::builtin(BuiltinKind::Alpha(a))),
            (true, None) => Err(Error::InvalidParameter("alpha generator needs a parameter".into())),
            (false, Some(_)) => Err(Error::InvalidParameter(format!(
                "generator `{name}` takes no alpha parameter"
            ))),
            (false, None) => Ok(Generator::builtin(name.parse()?)),
        }
    }

    /// A user-supplied generator. `f(1)` must be exactly zero; boundary
    /// values are recorded as declared, without checking continuity.
    pub fn custom(
        name: &str,
        f: impl Fn(f64) -> f64 + Send + Sync + 'static,
        at_zero: ExtReal,
        conj_at_zero: ExtReal,
    ) -> Result<Generator> {
        let at_one = f(1.0);
        if at_one != 0.0 {
            return Err(Error::InvalidGenerator {
                name: name.into(),
                reason: format!("f(1) must be 0, got {at_one}"),
            });
        }
        Ok(Generator {
            name: name.into(),
            eval: arc(f),
            at_zero,
            conj_at_zero,
            strictly_convex_at_one: false,
            strictly_convex_on_positives: false,
            domain_hint: "[0, inf)".into(),
        })
    }

    pub fn with_strict_convexity(mut self, at_one: bool, on_positives: bool) -> Self {
        self.strictly_convex_at_one = at_one;
        self.strictly_convex_on_positives = on_positives;
        self
    }

    pub fn with_domain_hint(mut self, hint: impl Into<String>) -> Self {
        self.domain_hint = hint.into();
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// `f(t)` for `t > 0`.
    #[inline]
    pub fn eval(&self, t: f64) -> f64 {
        debug_assert!(t > 0.0, "generators are evaluated on (0, inf), got {t}");
        (self.eval)(t)
    }

    /// `f(t)` for `t >= 0`, using the stored limit at 0.
    pub fn value_at(&self, t: f64) -> ExtReal {
        if t == 0.0 {
            self.at_zero
        } else {
            ExtReal::from_f64(self.eval(t))
        }
    }

    pub fn at_zero(&self) -> ExtReal {
        self.at_zero
    }

    pub fn conj_at_zero(&self) -> ExtReal {
        self.conj_at_zero
    }

    pub fn strictly_convex_at_one(&self) -> bool {
        self.strictly_convex_at_one
    }

    pub fn strictly_convex_on_positives(&self) -> bool {
        self.strictly_convex_on_positives
    }

    pub fn domain_hint(&self) -> &str {
        &self.domain_hint
    }
}

/// `f_a`, with the continuity extensions `f_0(t) = -log t + t - 1` and
/// `f_1(t) = t log t + 1 - t`.
fn alpha_generator(a: f64) -> Generator {
    use ExtReal::{Finite, PosInf};
    let name = BuiltinKind::Alpha(a).cli_name();
    let (eval, at_zero, conj_at_zero) = if a == 0.0 {
        (arc(|t: f64| -t.ln() + t - 1.0), PosInf, Finite(1.0))
    } else if a == 1.0 {
        (arc(|t: f64| t * t.ln() + 1.0 - t), Finite(1.0), PosInf)
    } else {
        let denom = a * (a - 1.0);
        let at_zero = if a > 0.0 { Finite(1.0 / a) } else { PosInf };
        let conj = if a < 1.0 { Finite(1.0 / (1.0 - a)) } else { PosInf };
        (
            arc(move |t: f64| (t.powf(a) - a * t - (1.0 - a)) / denom),
            at_zero,
            conj,
        )
    };
    Generator {
        name,
        eval,
        at_zero,
        conj_at_zero,
        strictly_convex_at_one: true,
        strictly_convex_on_positives: true,
        domain_hint: "[0, inf)".into(),
    }
}

pub fn builtin(kind: BuiltinKind) -> Generator {
    Generator::builtin(kind)
}

/// The conjugate generator `t -> t g(1/t)`. Swaps the two boundary limits.
pub fn conjugate(g: &Generator) -> Generator {
    let inner = Arc::clone(&g.eval);
    let name = match g.name.strip_prefix("conj(").and_then(|s| s.strip_suffix(')')) {
        Some(orig) => orig.to_string(),
        None => format!("conj({})", g.name),
    };
    Generator {
        name,
        eval: arc(move |t| t * inner(1.0 / t)),
        at_zero: g.conj_at_zero,
        conj_at_zero: g.at_zero,
        strictly_convex_at_one: g.strictly_convex_at_one,
        strictly_convex_on_positives: g.strictly_convex_on_positives,
        domain_hint: g.domain_hint.clone(),
    }
}

/// `t -> g(t) + c (t - 1)`; yields the same divergence as `g`.
pub fn affine_shift(g: &Generator, c: f64) -> Generator {
    assert!(c.is_finite(), "affine shift must be finite");
    let inner = Arc::clone(&g.eval);
    Generator {
        name: format!("{}{:+}(t-1)", g.name, c),
        eval: arc(move |t| inner(t) + c * (t - 1.0)),
        at_zero: g.at_zero + ExtReal::Finite(-c),
        conj_at_zero: g.conj_at_zero + ExtReal::Finite(c),
        strictly_convex_at_one: g.strictly_convex_at_one,
        strictly_convex_on_positives: g.strictly_convex_on_positives,
        domain_hint: g.domain_hint.clone(),
    }
}

/// `(f + f*)(0)`, the largest value the divergence can take.
pub fn sup_bound(g: &Generator) -> ExtReal {
    g.at_zero + g.conj_at_zero
}
