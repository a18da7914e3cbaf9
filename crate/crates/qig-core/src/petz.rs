//! Catalog of candidate Petz functions: positive functions on (0, infinity)
//! with real and complex evaluators. Symmetric members satisfy
//! f(t) = t f(1/t) and, normalized to f(1) = 1, generate canonical-polar
//! quantum metrics.

use std::f64::consts::PI;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::numeric::CubicSpline;
use crate::qubit::C64;

/// A tabulated function of t built from metric samples, splined over ln t so
/// accuracy is uniform across decades. Queries outside the table clamp to
/// its ends.
#[derive(Debug, Clone)]
pub struct TabulatedPetz {
    pub name: String,
    spline: CubicSpline,
}

impl TabulatedPetz {
    /// `ts` strictly increasing and positive.
    pub(crate) fn from_t_samples(name: impl Into<String>, ts: &[f64], vals: Vec<f64>) -> Self {
        let xs: Vec<f64> = ts.iter().map(|t| t.ln()).collect();
        Self {
            name: name.into(),
            spline: CubicSpline::new(xs, vals),
        }
    }

    fn eval(&self, t: f64) -> f64 {
        self.spline.value(t.ln())
    }

    pub fn t_range(&self) -> (f64, f64) {
        (self.spline.x_min().exp(), self.spline.x_max().exp())
    }
}

#[derive(Debug, Clone)]
pub enum PetzFunction {
    /// (t - 1)/ln t, the function behind the von Neumann relative entropy.
    VonNeumann,
    /// q(1-q)(t-1)^2 / ((t^q - 1)(t^{1-q} - 1)).
    Tsallis {
        q: f64,
    },
    /// t^{2a} for a in [0, 1/2].
    Power {
        a: f64,
    },
    /// The function extracted from the exponential tomographic scheme. With
    /// `canonical` set it is rescaled so h(1) = 1; the raw variant keeps the
    /// bare pullback value h(1) = 1/4.
    ExpScheme {
        beta: f64,
        canonical: bool,
    },
    /// t^2: a classic non-monotone control, not symmetric.
    SquareControl,
    Tabulated(Arc<TabulatedPetz>),
}

impl PetzFunction {
    /// Catalog constructor with parameter validation.
    pub fn catalog(id: &str, params: &[f64]) -> Result<Self> {
        let need = |n: usize| -> Result<()> {
            if params.len() != n {
                return Err(Error::Parse(format!(
                    "function '{id}' takes {n} parameter(s), got {}",
                    params.len()
                )));
            }
            Ok(())
        };
        match id {
            "vn" | "von-neumann" => {
                need(0)?;
                Ok(Self::VonNeumann)
            }
            "tsallis" => {
                need(1)?;
                let q = params[0];
                if !(0.0 < q && q < 1.0) {
                    return Err(Error::DomainError(format!("tsallis q = {q} not in (0, 1)")));
                }
                Ok(Self::Tsallis { q })
            }
            "power" => {
                need(1)?;
                let a = params[0];
                if !(0.0..=0.5).contains(&a) {
                    return Err(Error::DomainError(format!("power a = {a} not in [0, 1/2]")));
                }
                Ok(Self::Power { a })
            }
            "exp-scheme" => {
                need(1)?;
                let beta = params[0];
                if beta == 0.0 || !beta.is_finite() {
                    return Err(Error::DomainError("exp-scheme needs beta != 0".into()));
                }
                Ok(Self::ExpScheme {
                    beta,
                    canonical: true,
                })
            }
            "exp-scheme-raw" => {
                need(1)?;
                let beta = params[0];
                if beta == 0.0 || !beta.is_finite() {
                    return Err(Error::DomainError("exp-scheme-raw needs beta != 0".into()));
                }
                Ok(Self::ExpScheme {
                    beta,
                    canonical: false,
                })
            }
            "square-control" => {
                need(0)?;
                Ok(Self::SquareControl)
            }
            _ => Err(Error::Parse(format!("unknown function id '{id}'"))),
        }
    }

    /// Parse a flat spec like `vn`, `tsallis:0.5`, or `exp-scheme:2`.
    pub fn parse(spec: &str) -> Result<Self> {
        let mut parts = spec.splitn(2, ':');
        let id = parts.next().unwrap_or("");
        let params: Vec<f64> = match parts.next() {
            None => vec![],
            Some(rest) => rest
                .split(',')
                .map(|s| {
                    s.trim()
                        .parse::<f64>()
                        .map_err(|_| Error::Parse(format!("bad parameter '{s}' in '{spec}'")))
                })
                .collect::<Result<_>>()?,
        };
        Self::catalog(id, &params)
    }

    pub fn name(&self) -> String {
        match self {
            Self::VonNeumann => "vn".into(),
            Self::Tsallis { .. } => "tsallis".into(),
            Self::Power { .. } => "power".into(),
            Self::ExpScheme { canonical, .. } => {
                if *canonical {
                    "exp-scheme".into()
                } else {
                    "exp-scheme-raw".into()
                }
            }
            Self::SquareControl => "square-control".into(),
            Self::Tabulated(t) => format!("tabulated({})", t.name),
        }
    }

    pub fn params_json(&self) -> serde_json::Value {
        match self {
            Self::Tsallis { q } => serde_json::json!({ "q": q }),
            Self::Power { a } => serde_json::json!({ "a": a }),
            Self::ExpScheme { beta, canonical } => {
                serde_json::json!({ "beta": beta, "canonical": canonical })
            }
            _ => serde_json::json!({}),
        }
    }

    /// Evaluate on (0, infinity).
    pub fn eval(&self, t: f64) -> f64 {
        debug_assert!(t > 0.0, "Petz functions live on (0, infinity), got {t}");
        match self {
            // (t-1)/ln t written as sqrt(t) sinh(L/2)/(L/2) with L = ln t:
            // the odd factor sqrt(t) carries the whole asymmetry, so the
            // symmetry identity holds to roundoff even for large t, and the
            // removable point t = 1 needs no cancellation
            Self::VonNeumann => {
                let l = t.ln();
                if l == 0.0 {
                    1.0
                } else {
                    t.sqrt() * (l / 2.0).sinh() / (l / 2.0)
                }
            }
            // same manifestly symmetric form:
            // q(1-q) sqrt(t) sinh^2(L/2) / (sinh(qL/2) sinh((1-q)L/2))
            Self::Tsallis { q } => {
                let l = t.ln();
                if l == 0.0 {
                    return 1.0;
                }
                let s = (l / 2.0).sinh();
                q * (1.0 - q) * t.sqrt() * s * s
                    / ((q * l / 2.0).sinh() * ((1.0 - q) * l / 2.0).sinh())
            }
            Self::Power { a } => t.powf(2.0 * a),
            Self::ExpScheme { beta, canonical } => {
                let w = (1.0 - t) / (1.0 + t);
                let x = beta * w;
                let ratio = if x.abs() < 1e-12 { 1.0 } else { x / x.sinh() };
                let val = (1.0 - w) * ratio;
                if *canonical {
                    val
                } else {
                    0.25 * val
                }
            }
            Self::SquareControl => t * t,
            Self::Tabulated(tab) => tab.eval(t),
        }
    }

    /// Holomorphic extension off the real axis (principal branches). Returns
    /// `None` for tabulated functions, which carry no analytic form.
    pub fn eval_complex(&self, z: C64) -> Option<C64> {
        let one = C64::new(1.0, 0.0);
        match self {
            Self::VonNeumann => {
                let u = z - one;
                if u.norm() < 1e-4 {
                    // u/ln(1+u) by series, stable near the removable point
                    let series =
                        one - u / 2.0 + u * u / 3.0 - u * u * u / 4.0 + u * u * u * u / 5.0;
                    Some(one / series)
                } else {
                    Some(u / z.ln())
                }
            }
            Self::Tsallis { q } => {
                let u = z - one;
                if u.norm() < 1e-4 {
                    let l = u * (one - u / 2.0 + u * u / 3.0 - u * u * u / 4.0);
                    let e1 = one + (*q * l) / 2.0 + (*q * l).powu(2) / 6.0;
                    let p = 1.0 - q;
                    let e2 = one + (p * l) / 2.0 + (p * l).powu(2) / 6.0;
                    // q(1-q)u^2 / ((qL e1)((1-q)L e2)) = u^2/(L^2 e1 e2)
                    Some(u * u / (l * l * e1 * e2))
                } else {
                    let lz = z.ln();
                    let d1 = (lz * *q).exp() - one;
                    let d2 = (lz * (1.0 - q)).exp() - one;
                    Some(C64::new(q * (1.0 - q), 0.0) * (z - one).powu(2) / (d1 * d2))
                }
            }
            Self::Power { a } => Some((z.ln() * (2.0 * a)).exp()),
            Self::ExpScheme { beta, canonical } => {
                let w = (one - z) / (one + z);
                let x = w * *beta;
                let ratio = if x.norm() < 1e-6 {
                    one / (one + x * x / 6.0 + x.powu(4) / 120.0)
                } else {
                    x / x.sinh()
                };
                let val = (one - w) * ratio;
                Some(if *canonical { val } else { val * 0.25 })
            }
            Self::SquareControl => Some(z * z),
            Self::Tabulated(_) => None,
        }
    }

    /// Distance from `z` to the declared singular set. Catalog functions with
    /// principal branches are analytic on the open upper half-plane, so only
    /// the exponential-scheme function (pole at z = -1 and at the zeros of
    /// its sinh factor) reports finite distances there.
    pub fn singularity_distance(&self, z: C64) -> f64 {
        match self {
            Self::ExpScheme { beta, .. } => {
                let d_pole = (z + C64::new(1.0, 0.0)).norm();
                if d_pole < 1e-14 {
                    return 0.0;
                }
                // sinh(beta (1-z)/(1+z)) vanishes where the argument is i k pi
                let u = (C64::new(1.0, 0.0) - z) / (C64::new(1.0, 0.0) + z) * *beta;
                let k = (u.im / PI).round();
                if k == 0.0 {
                    // k = 0 is the removable point z = 1, not a pole
                    return d_pole;
                }
                let du = C64::new(u.re, u.im - k * PI).norm();
                // |du/dz| = 2 beta / |1+z|^2 maps u-distance back to z-distance
                let jac = 2.0 * beta.abs() / ((z + C64::new(1.0, 0.0)).norm_sqr());
                d_pole.min(du / jac)
            }
            _ => f64::INFINITY,
        }
    }

    /// True for catalog members that satisfy f(t) = t f(1/t) identically.
    pub fn is_symmetric(&self) -> bool {
        match self {
            Self::VonNeumann | Self::Tsallis { .. } | Self::ExpScheme { .. } => true,
            Self::Power { a } => (*a - 0.25).abs() < 1e-15,
            Self::SquareControl => false,
            Self::Tabulated(_) => false,
        }
    }

    /// f(t) - t f(1/t); identically zero for symmetric functions.
    pub fn symmetry_residual(&self, t: f64) -> f64 {
        self.eval(t) - t * self.eval(1.0 / t)
    }
}

/// Free-function form of [`PetzFunction::symmetry_residual`].
pub fn symmetry_residual(f: &PetzFunction, t: f64) -> f64 {
    f.symmetry_residual(t)
}
