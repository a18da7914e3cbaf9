//! Divergence functions, classical Fisher tensors on tomograms, quantum
//! metrics in canonical polar form, the superoperator metric evaluation, and
//! the conformal pullback machinery for tomographic scheme changes.
//!
//! All metrics are stored as two coefficient functions of the radius w in the
//! `canonical-polar` convention
//!
//!   g = g_w(w) dw (x) dw + g_perp(w) (dtheta (x) dtheta + sin^2 theta dphi (x) dphi)
//!
//! and every Petz-form metric has g_w(w) = 1/(1 - w^2) exactly.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::numeric::{logspace, mixed_partial_richardson};
use crate::petz::{PetzFunction, TabulatedPetz};
use crate::qubit::{spectral_decompose, BlochVector, QubitDensity, TangentVector, C64, M2};
use crate::tomography::SpectralMap;

pub const CONVENTION: &str = "canonical-polar";

type ScalarFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// A rotationally symmetric qubit metric as two coefficient functions of w.
#[derive(Clone)]
pub struct MetricCoeffs {
    name: String,
    radial: ScalarFn,
    tangential: ScalarFn,
}

impl std::fmt::Debug for MetricCoeffs {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("MetricCoeffs")
            .field("name", &self.name)
            .field("convention", &CONVENTION)
            .finish()
    }
}

impl MetricCoeffs {
    pub fn from_parts(name: impl Into<String>, radial: ScalarFn, tangential: ScalarFn) -> Self {
        Self {
            name: name.into(),
            radial,
            tangential,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn convention(&self) -> &'static str {
        CONVENTION
    }

    /// The dw (x) dw coefficient.
    pub fn radial(&self, w: f64) -> f64 {
        (self.radial)(w)
    }

    /// The dtheta (x) dtheta coefficient (the sin^2 theta dphi part carries
    /// the same function).
    pub fn tangential(&self, w: f64) -> f64 {
        (self.tangential)(w)
    }
}

/// Which divergence generates a metric.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DivergenceSpec {
    ClassicalTsallis { q: f64 },
    QuantumTsallis { q: f64 },
    VonNeumann,
}

impl DivergenceSpec {
    /// The metric a divergence generates on the state space. The classical
    /// divergence lives on tomograms and produces no quantum metric; its
    /// Hessian is the Fisher coefficient (see [`fisher_from_divergence`]).
    pub fn metric(&self) -> Result<MetricCoeffs> {
        match self {
            Self::ClassicalTsallis { .. } => Err(Error::DomainError(
                "the classical divergence generates the tomographic Fisher tensor, \
                 not a quantum metric"
                    .into(),
            )),
            Self::QuantumTsallis { q } => tsallis_metric(*q),
            Self::VonNeumann => Ok(von_neumann_metric()),
        }
    }
}

// ---------------------------------------------------------------------------
// Classical layer
// ---------------------------------------------------------------------------

/// Relative Tsallis divergence of two binary distributions:
/// (1 - sum p^q p~^{1-q}) / (q(1-q)). Nonnegative, zero only on the diagonal.
pub fn classical_tsallis_divergence(p: [f64; 2], p_tilde: [f64; 2], q: f64) -> Result<f64> {
    if !(0.0 < q && q < 1.0) {
        return Err(Error::DomainError(format!("q = {q} not in (0, 1)")));
    }
    for &x in p.iter().chain(p_tilde.iter()) {
        if x <= 0.0 || x >= 1.0 {
            return Err(Error::DomainError(format!(
                "probability {x} not strictly inside (0, 1)"
            )));
        }
    }
    for pair in [p, p_tilde] {
        if (pair[0] + pair[1] - 1.0).abs() > 1e-12 {
            return Err(Error::DomainError("pair does not sum to 1".into()));
        }
    }
    let overlap = p[0].powf(q) * p_tilde[0].powf(1.0 - q) + p[1].powf(q) * p_tilde[1].powf(1.0 - q);
    Ok(((1.0 - overlap) / (q * (1.0 - q))).max(0.0))
}

/// The 1-D Fisher coefficient of a binary distribution (p, 1-p): the negative
/// mixed second derivative of the Tsallis divergence at the diagonal,
/// computed by central differences with one Richardson level. Equals
/// 1/(p(1-p)) independently of q.
pub fn fisher_from_divergence(p: [f64; 2], q: f64) -> Result<f64> {
    let x = p[0];
    if !(0.0 < x && x < 1.0) || (p[0] + p[1] - 1.0).abs() > 1e-12 {
        return Err(Error::DomainError(format!(
            "pair ({}, {}) is not an interior binary distribution",
            p[0], p[1]
        )));
    }
    let h = 1e-4f64.min(x / 8.0).min((1.0 - x) / 8.0);
    let s = |a: f64, b: f64| classical_tsallis_divergence([a, 1.0 - a], [b, 1.0 - b], q);
    let mixed = mixed_partial_richardson(s, x, x, h)?;
    Ok(-mixed)
}

/// Diagonal tomographic-tensor component along frame axis `j` (0, 1, 2):
/// 1/(1 - y_j^2). Each single-frame tensor is rank one and degenerate.
pub fn tomographic_tensor(y: &BlochVector, j: usize) -> Result<f64> {
    let yj = *y
        .as_array()
        .get(j)
        .ok_or_else(|| Error::DomainError(format!("frame index {j} out of range")))?;
    if yj.abs() >= 1.0 {
        return Err(Error::Singular(format!("|y_{j}| = {} >= 1", yj.abs())));
    }
    Ok(1.0 / (1.0 - yj * yj))
}

/// The degenerate radial-only Fisher tensor on tomograms, as canonical-polar
/// coefficients (tangential part identically zero).
pub fn fisher_tomographic_tensor() -> MetricCoeffs {
    MetricCoeffs::from_parts(
        "fisher-tomographic",
        Arc::new(|w| 1.0 / (1.0 - w * w)),
        Arc::new(|_| 0.0),
    )
}

// ---------------------------------------------------------------------------
// Quantum metrics
// ---------------------------------------------------------------------------

/// Quantum Tsallis metric in canonical polar form. The tangential coefficient
/// is (a_q - b_q)(a_{1-q} - b_{1-q}) / (2 q (1-q)) with
/// a_x = ((1+w)/2)^x, b_x = ((1-w)/2)^x.
///
/// The parameter is accepted on (0, 2) \ {1}; values just above 1 support
/// two-sided extrapolation of the q -> 1 limit.
pub fn tsallis_metric(q: f64) -> Result<MetricCoeffs> {
    if !q.is_finite() || q <= 0.0 || q >= 2.0 || q == 1.0 {
        return Err(Error::DomainError(format!(
            "tsallis metric parameter q = {q} not in (0, 2) minus {{1}}"
        )));
    }
    Ok(MetricCoeffs::from_parts(
        format!("tsallis({q})"),
        Arc::new(|w| 1.0 / (1.0 - w * w)),
        Arc::new(move |w| {
            let ap = (1.0 + w) / 2.0;
            let bp = (1.0 - w) / 2.0;
            let diff_q = ap.powf(q) - bp.powf(q);
            let diff_p = ap.powf(1.0 - q) - bp.powf(1.0 - q);
            diff_q * diff_p / (2.0 * q * (1.0 - q))
        }),
    ))
}

/// The q -> 1 member of the Tsallis family: tangential coefficient
/// (w/2) ln((1+w)/(1-w)) = w artanh(w).
pub fn von_neumann_metric() -> MetricCoeffs {
    MetricCoeffs::from_parts(
        "von-neumann",
        Arc::new(|w| 1.0 / (1.0 - w * w)),
        Arc::new(|w: f64| w * w.atanh()),
    )
}

/// General Petz-form metric for a positive function normalized to f(1) = 1:
/// g_w = 1/(1-w^2), g_perp = w^2 / ((1+w) f((1-w)/(1+w))).
pub fn petz_metric(f: &PetzFunction) -> Result<MetricCoeffs> {
    for &t in logspace(1e-3, 1e3, 61).iter() {
        let v = f.eval(t);
        if !v.is_finite() || v <= 0.0 {
            return Err(Error::InvalidPetzFunction(format!(
                "{} is not positive at t = {t} (value {v})",
                f.name()
            )));
        }
    }
    let at_one = f.eval(1.0);
    if (at_one - 1.0).abs() > 1e-8 {
        return Err(Error::InvalidPetzFunction(format!(
            "{} is not normalized: f(1) = {at_one}",
            f.name()
        )));
    }
    let f = f.clone();
    Ok(MetricCoeffs::from_parts(
        format!("petz({})", f.name()),
        Arc::new(|w| 1.0 / (1.0 - w * w)),
        Arc::new(move |w| {
            let t = (1.0 - w) / (1.0 + w);
            w * w / ((1.0 + w) * f.eval(t))
        }),
    ))
}

/// Parse a metric spec: `vn` and `tsallis:q` build the closed coefficient
/// forms directly; `petz-tsallis:q` routes the same member through the
/// general correspondence; any other spec is parsed as a Petz function and
/// lifted through [`petz_metric`].
pub fn parse_metric_spec(spec: &str) -> Result<MetricCoeffs> {
    let mut parts = spec.splitn(2, ':');
    let id = parts.next().unwrap_or("");
    let rest = parts.next();
    let one_param = |what: &str| -> Result<f64> {
        rest.ok_or_else(|| Error::Parse(format!("{what} needs a parameter")))?
            .parse::<f64>()
            .map_err(|_| Error::Parse(format!("bad parameter in '{spec}'")))
    };
    match id {
        "vn" | "von-neumann" => Ok(von_neumann_metric()),
        "tsallis" => tsallis_metric(one_param("tsallis")?),
        "petz-tsallis" => {
            let q = one_param("petz-tsallis")?;
            petz_metric(&PetzFunction::catalog("tsallis", &[q])?)
        }
        _ => petz_metric(&PetzFunction::parse(spec)?),
    }
}

/// Metric superoperator value g_rho(A, B) for a symmetric normalized f:
/// in the eigenbasis of rho the kernel acts entrywise as
/// B_ij / (p_j f(p_i / p_j)).
pub fn cm_metric_value(
    f: &PetzFunction,
    rho: &QubitDensity,
    a: &TangentVector,
    b: &TangentVector,
) -> Result<f64> {
    if !rho.is_full_rank() {
        return Err(Error::Singular(
            "metric superoperator needs a full-rank state (w < 1)".into(),
        ));
    }
    let (p, frame) = spectral_decompose(rho);
    let u = frame.u();
    let a_eig = u.adjoint() * a.matrix() * u;
    let b_eig = u.adjoint() * b.matrix() * u;
    let mut kernel_b = M2::zeros();
    for i in 0..2 {
        for j in 0..2 {
            let k = 1.0 / (p[j] * f.eval(p[i] / p[j]));
            kernel_b[(i, j)] = b_eig[(i, j)] * C64::new(k, 0.0);
        }
    }
    let val = (a_eig * kernel_b).trace();
    debug_assert!(val.im.abs() < 1e-9 * val.re.abs().max(1.0));
    Ok(val.re)
}

// ---------------------------------------------------------------------------
// Conformal pullback under scheme changes
// ---------------------------------------------------------------------------

/// The conformal factor of a scheme map at w:
/// A = (1 - w^2)/(1 - w~^2) (dw~/dw)^2.
pub fn conformal_factor(map: &SpectralMap, w: f64) -> Result<f64> {
    let wt = map.value(w);
    if !wt.is_finite() || wt.abs() >= 1.0 {
        return Err(Error::Singular(format!("|w~({w})| = {} >= 1", wt.abs())));
    }
    let d = map.derivative(w);
    Ok((1.0 - w * w) / (1.0 - wt * wt) * d * d)
}

/// Pull a metric back along a scheme map: the radial coefficient picks up
/// (dw~/dw)^2 while the angular block is evaluated at w~(w).
pub fn pullback_metric(g: &MetricCoeffs, map: &SpectralMap) -> MetricCoeffs {
    let g_r = g.clone();
    let g_t = g.clone();
    let m_r = map.clone();
    let m_t = map.clone();
    MetricCoeffs::from_parts(
        format!("{}<-{}", g.name(), map.name()),
        Arc::new(move |w| {
            let d = m_r.derivative(w);
            g_r.radial(m_r.value(w)) * d * d
        }),
        Arc::new(move |w| g_t.tangential(m_t.value(w))),
    )
}

/// Divide a pulled-back metric by the conformal factor of the same map,
/// returning the canonical-polar representative.
pub fn divide_conformal(g: &MetricCoeffs, map: &SpectralMap) -> MetricCoeffs {
    let g_r = g.clone();
    let g_t = g.clone();
    let m_r = map.clone();
    let m_t = map.clone();
    let factor = move |map: &SpectralMap, w: f64| {
        let wt = map.value(w);
        let d = map.derivative(w);
        (1.0 - w * w) / (1.0 - wt * wt) * d * d
    };
    let f_r = factor;
    MetricCoeffs::from_parts(
        format!("{}/conformal", g.name()),
        Arc::new(move |w| g_r.radial(w) / f_r(&m_r, w)),
        Arc::new(move |w| g_t.tangential(w) / f_r(&m_t, w)),
    )
}

/// Invert the canonical-polar correspondence on a metric with radial
/// coefficient 1/(1-w^2): tabulates h(t(w)) = w^2 / ((1+w) g_perp(w)) with
/// t = (1-w)/(1+w) and returns it as an interpolating function of t.
pub fn extract_petz_function(g: &MetricCoeffs) -> Result<PetzFunction> {
    for &w in &[-0.9, -0.5, 0.0, 0.5, 0.9] {
        let r = g.radial(w) * (1.0 - w * w);
        if (r - 1.0).abs() > 1e-8 {
            return Err(Error::InvalidMetric(format!(
                "radial coefficient at w = {w} is {}/(1-w^2), expected 1/(1-w^2)",
                r
            )));
        }
    }
    let ts = logspace(0.005, 200.0, 1601);
    let mut vals = Vec::with_capacity(ts.len());
    let ratio = |w: f64| -> Result<f64> {
        let g_perp = g.tangential(w);
        if !g_perp.is_finite() || g_perp <= 0.0 {
            return Err(Error::InvalidMetric(format!(
                "tangential coefficient not positive at w = {w} (value {g_perp})"
            )));
        }
        Ok(w * w / ((1.0 + w) * g_perp))
    };
    for &t in &ts {
        let w = (1.0 - t) / (1.0 + t);
        if w.abs() < 1e-8 {
            // removable 0/0 at the origin: even-part limit from flanking
            // evaluations
            let d = 1e-5;
            vals.push(0.5 * (ratio(w - d)? + ratio(w + d)?));
        } else {
            vals.push(ratio(w)?);
        }
    }
    Ok(PetzFunction::Tabulated(Arc::new(
        TabulatedPetz::from_t_samples(format!("extracted:{}", g.name()), &ts, vals),
    )))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qubit::{density_from_bloch, random_bloch, random_tangent, rotated_pauli_basis};
    use crate::tomography::exponential_scheme;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() < tol
    }

    #[test]
    fn divergence_vanishes_on_the_diagonal() {
        for &(p, q) in &[(0.5, 0.2), (0.8, 0.3), (0.8, 0.7)] {
            let v = classical_tsallis_divergence([p, 1.0 - p], [p, 1.0 - p], q).unwrap();
            assert!(v.abs() < 1e-14);
        }
    }

    #[test]
    fn divergence_value() {
        // frozen from (1 - sqrt(0.4) - sqrt(0.1)) / 0.25
        let v = classical_tsallis_divergence([0.8, 0.2], [0.5, 0.5], 0.5).unwrap();
        assert!(close(v, 0.2052668077979448, 1e-15), "got {v}");
        assert!(v >= 0.0);
        assert!(classical_tsallis_divergence([1.0, 0.0], [0.5, 0.5], 0.5).is_err());
    }

    #[test]
    fn fisher_matches_closed_form_and_ignores_q() {
        let cases = [(0.5, 4.0), (0.8, 6.25), (0.9, 1.0 / 0.09)];
        for &(p, expect) in &cases {
            let mut values = vec![];
            for q in [0.2, 0.5, 0.8] {
                let v = fisher_from_divergence([p, 1.0 - p], q).unwrap();
                assert!(
                    (v - expect).abs() / expect < 1e-5,
                    "p={p} q={q}: {v} vs {expect}"
                );
                values.push(v);
            }
            let spread = (values.iter().cloned().fold(f64::MIN, f64::max)
                - values.iter().cloned().fold(f64::MAX, f64::min))
                / expect;
            assert!(spread < 1e-5, "q-spread {spread} at p={p}");
        }
    }

    #[test]
    fn tensor_components() {
        let y = BlochVector::new(0.0, 0.0, 0.0);
        assert_eq!(tomographic_tensor(&y, 0).unwrap(), 1.0);
        let y = BlochVector::new(0.6, 0.0, 0.0);
        let g = tomographic_tensor(&y, 0).unwrap();
        assert!(close(g, 1.5625, 1e-14));
        // cross-check through the probability form (1/4) / (W (1 - W))
        let w_prob = (1.0 + 0.6) / 2.0;
        assert!(close(g, 0.25 / (w_prob * (1.0 - w_prob)), 1e-13));
        // along the radial direction only one component survives
        let y = BlochVector::new(0.0, 0.0, 0.7);
        assert!(close(
            tomographic_tensor(&y, 2).unwrap(),
            1.0 / (1.0 - 0.49),
            1e-14
        ));
        assert_eq!(tomographic_tensor(&y, 0).unwrap(), 1.0);
        assert!(tomographic_tensor(&BlochVector::new(1.0, 0.0, 0.0), 0).is_err());
    }

    #[test]
    fn divergence_spec_selects_its_metric() {
        let g = DivergenceSpec::QuantumTsallis { q: 0.5 }.metric().unwrap();
        assert!(close(g.tangential(0.6), 0.4, 1e-14));
        let g = DivergenceSpec::VonNeumann.metric().unwrap();
        assert!(close(g.tangential(0.5), 0.25 * 3.0f64.ln(), 1e-15));
        assert!(DivergenceSpec::ClassicalTsallis { q: 0.5 }
            .metric()
            .is_err());
    }

    #[test]
    fn tsallis_metric_examples() {
        let g = tsallis_metric(0.5).unwrap();
        assert_eq!(g.tangential(0.0), 0.0);
        // at q = 1/2, w = 0.6 the coefficient is exactly 0.4
        assert!(close(g.tangential(0.6), 0.4, 1e-14));
        assert!(close(g.radial(0.6), 1.0 / 0.64, 1e-14));
        assert!(tsallis_metric(0.0).is_err());
        assert!(tsallis_metric(1.0).is_err());
        // evenness in w
        for &w in &[0.2, 0.55, 0.9] {
            assert!(close(g.tangential(w), g.tangential(-w), 1e-13));
        }
    }

    #[test]
    fn von_neumann_metric_values_and_q_limit() {
        let g = von_neumann_metric();
        assert_eq!(g.tangential(0.0), 0.0);
        assert!(close(g.tangential(0.5), 0.25 * 3.0f64.ln(), 1e-15));
        // two-sided q -> 1 extrapolation of the Tsallis family
        let eps = 1e-4;
        let lo = tsallis_metric(1.0 - eps).unwrap();
        let hi = tsallis_metric(1.0 + eps).unwrap();
        for &w in &[0.05, 0.3, 0.5, 0.7, 0.95] {
            let extrap = 0.5 * (lo.tangential(w) + hi.tangential(w));
            assert!(
                (extrap - g.tangential(w)).abs() < 1e-6,
                "w={w}: {extrap} vs {}",
                g.tangential(w)
            );
        }
    }

    #[test]
    fn theta_form_normalization_ratio_is_constant_4() {
        // the alternative left-invariant one-form normalization carries a
        // constant factor 4 relative to the canonical polar coefficient
        let g = von_neumann_metric();
        for &w in &[0.1f64, 0.35, 0.6, 0.85] {
            let theta_form = 2.0 * w * ((1.0 + w) / (1.0 - w)).ln();
            assert!(close(theta_form / g.tangential(w), 4.0, 1e-12));
        }
    }

    #[test]
    fn petz_metric_examples() {
        // constant function: g_perp = w^2/(1+w)
        let unit = PetzFunction::Power { a: 0.0 };
        let g = petz_metric(&unit).unwrap();
        assert!(close(g.tangential(0.5), 0.25 / 1.5, 1e-15));

        // the Tsallis member reproduces the closed-form family
        for q in [0.1, 0.3, 0.5, 0.7, 0.9] {
            let direct = tsallis_metric(q).unwrap();
            let via_petz = petz_metric(&PetzFunction::Tsallis { q }).unwrap();
            for k in 0..199 {
                let w = -0.99 + 1.98 * k as f64 / 198.0;
                assert!(
                    (direct.tangential(w) - via_petz.tangential(w)).abs() < 1e-10,
                    "q={q} w={w}"
                );
            }
        }

        // the von Neumann member
        let g = petz_metric(&PetzFunction::VonNeumann).unwrap();
        let direct = von_neumann_metric();
        for &w in &[-0.9, -0.4, 0.2, 0.65, 0.95] {
            assert!(close(g.tangential(w), direct.tangential(w), 1e-12));
        }

        // non-normalized input is rejected
        let raw = PetzFunction::ExpScheme {
            beta: 2.0,
            canonical: false,
        };
        assert!(petz_metric(&raw).is_err());
    }

    #[test]
    fn superoperator_reproduces_coefficients() {
        let fs = [
            PetzFunction::VonNeumann,
            PetzFunction::Tsallis { q: 0.35 },
            PetzFunction::ExpScheme {
                beta: 2.0,
                canonical: true,
            },
            PetzFunction::Power { a: 0.25 },
        ];
        for f in &fs {
            let g = petz_metric(f).unwrap();
            for &w in &[1e-9, 0.1, 0.3, 0.7] {
                for &(theta, phi) in &[(0.8, 0.3), (2.0, 4.1)] {
                    let rho = QubitDensity::from_polar(w, theta, phi).unwrap();
                    let (sw, st, _) = rotated_pauli_basis(theta, phi);
                    let d_w = TangentVector::new(sw * C64::new(0.5, 0.0)).unwrap();
                    let d_theta = TangentVector::new(st * C64::new(w / 2.0, 0.0)).unwrap();
                    let radial = cm_metric_value(f, &rho, &d_w, &d_w).unwrap();
                    assert!(
                        (radial - 1.0 / (1.0 - w * w)).abs() < 1e-10,
                        "{} radial at w={w}",
                        f.name()
                    );
                    let tangential = cm_metric_value(f, &rho, &d_theta, &d_theta).unwrap();
                    assert!(
                        (tangential - g.tangential(w)).abs() < 1e-10,
                        "{} tangential at w={w}: {tangential} vs {}",
                        f.name(),
                        g.tangential(w)
                    );
                }
            }
        }
    }

    #[test]
    fn superoperator_is_symmetric_and_bilinear() {
        let f = PetzFunction::VonNeumann;
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for _ in 0..200 {
            let rho = density_from_bloch(random_bloch(&mut rng, 0.95)).unwrap();
            let a = random_tangent(&mut rng);
            let b = random_tangent(&mut rng);
            let ab = cm_metric_value(&f, &rho, &a, &b).unwrap();
            let ba = cm_metric_value(&f, &rho, &b, &a).unwrap();
            assert!((ab - ba).abs() < 1e-13 * ab.abs().max(1.0));
        }
        let rho = density_from_bloch(BlochVector::new(0.3, 0.1, 0.2)).unwrap();
        let a = TangentVector::from_pauli(0.3, -0.2, 0.9);
        let b = TangentVector::from_pauli(-1.1, 0.4, 0.2);
        let sum = TangentVector::new(a.matrix() + b.matrix()).unwrap();
        let lhs = cm_metric_value(&f, &rho, &sum, &sum).unwrap();
        let rhs = cm_metric_value(&f, &rho, &a, &a).unwrap()
            + 2.0 * cm_metric_value(&f, &rho, &a, &b).unwrap()
            + cm_metric_value(&f, &rho, &b, &b).unwrap();
        assert!((lhs - rhs).abs() < 1e-12);
    }

    #[test]
    fn conformal_factor_examples() {
        let id = SpectralMap::identity();
        for &w in &[-0.8, 0.0, 0.5] {
            assert!(close(conformal_factor(&id, w).unwrap(), 1.0, 1e-15));
        }
        let neg = SpectralMap::negation();
        for &w in &[-0.3, 0.7] {
            assert!(close(conformal_factor(&neg, w).unwrap(), 1.0, 1e-15));
        }
        let beta = 2.0;
        let map = exponential_scheme(beta).unwrap();
        assert!(close(
            conformal_factor(&map, 0.0).unwrap(),
            beta * beta / 4.0,
            1e-14
        ));
        for &w in &[0.1, 0.4, 0.8] {
            let ch = (beta * w / 2.0).cosh();
            let closed = beta * beta * (1.0 - w * w) / (4.0 * ch * ch);
            assert!(close(conformal_factor(&map, w).unwrap(), closed, 1e-13));
        }
    }

    #[test]
    fn pullback_under_identity_is_identity() {
        let g = von_neumann_metric();
        let pulled = pullback_metric(&g, &SpectralMap::identity());
        for &w in &[-0.7, 0.2, 0.9] {
            assert!(close(pulled.radial(w), g.radial(w), 1e-13));
            assert!(close(pulled.tangential(w), g.tangential(w), 1e-13));
        }
    }

    #[test]
    fn fisher_tensor_transforms_conformally() {
        let map = exponential_scheme(1.5).unwrap();
        let fisher = fisher_tomographic_tensor();
        let pulled = pullback_metric(&fisher, &map);
        for k in 0..50 {
            let w = -0.9 + 1.8 * k as f64 / 49.0;
            let lhs = pulled.radial(w);
            let rhs = conformal_factor(&map, w).unwrap() * fisher.radial(w);
            assert!((lhs - rhs).abs() < 1e-12 * rhs.abs().max(1.0), "w = {w}");
        }
    }

    #[test]
    fn pullback_radial_closed_form() {
        // pullback of the canonical radial coefficient through the
        // exponential scheme at beta = 1, w = 0.5
        let beta = 1.0;
        let map = exponential_scheme(beta).unwrap();
        let g = von_neumann_metric();
        let pulled = pullback_metric(&g, &map);
        let w = 0.5;
        let th = (beta * w / 2.0).tanh();
        let ch = (beta * w / 2.0).cosh();
        let expect = (beta / (2.0 * ch * ch)).powi(2) / (1.0 - th * th);
        assert!(close(pulled.radial(w), expect, 1e-13));
    }

    #[test]
    fn extraction_recovers_catalog_functions() {
        for f in [
            PetzFunction::VonNeumann,
            PetzFunction::Tsallis { q: 0.25 },
            PetzFunction::ExpScheme {
                beta: 2.0,
                canonical: true,
            },
        ] {
            let g = petz_metric(&f).unwrap();
            let h = extract_petz_function(&g).unwrap();
            for &t in &logspace(0.01, 100.0, 101) {
                let expect = f.eval(t);
                assert!(
                    (h.eval(t) - expect).abs() < 1e-10 * expect.max(1.0),
                    "{} at t = {t}: {} vs {expect}",
                    f.name(),
                    h.eval(t)
                );
            }
            // the extracted function limits to 1 at t = 1
            assert!((h.eval(1.0) - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn conformal_factorization_closes_for_catalog_pairs() {
        // pulling a catalog metric through a scheme map and re-lifting the
        // extracted function reproduces the pullback up to the conformal
        // factor, coefficient-wise
        let maps = [
            exponential_scheme(1.5).unwrap(),
            SpectralMap::negation(),
            SpectralMap::identity(),
        ];
        let fs = [PetzFunction::VonNeumann, PetzFunction::Tsallis { q: 0.3 }];
        for f in &fs {
            for map in &maps {
                let g_f = petz_metric(f).unwrap();
                let pulled = pullback_metric(&g_f, map);
                let h = extract_petz_function(&divide_conformal(&pulled, map)).unwrap();
                let g_h = petz_metric(&h).unwrap();
                for &w in &[0.1, 0.35, 0.6, 0.85] {
                    let a = conformal_factor(map, w).unwrap();
                    let dr = (pulled.radial(w) - a * g_h.radial(w)).abs();
                    let dt = (pulled.tangential(w) - a * g_h.tangential(w)).abs();
                    assert!(
                        dr < 1e-9 && dt < 1e-9,
                        "{} through {} at w={w}: dr={dr:.3e} dt={dt:.3e}",
                        f.name(),
                        map.name()
                    );
                }
            }
        }
    }

    #[test]
    fn extraction_rejects_wrong_radial_convention() {
        let g = MetricCoeffs::from_parts(
            "scaled",
            Arc::new(|w| 2.0 / (1.0 - w * w)),
            Arc::new(|w| w * w),
        );
        assert!(matches!(
            extract_petz_function(&g),
            Err(Error::InvalidMetric(_))
        ));
    }

    #[test]
    fn extracted_h_from_exponential_pipeline() {
        // pull the von Neumann metric back through the exponential scheme,
        // divide the conformal factor, and invert the canonical form; the
        // result is beta w (1-w) / sinh(beta w)
        for beta in [1.0, 2.5] {
            let map = exponential_scheme(beta).unwrap();
            let pulled = pullback_metric(&von_neumann_metric(), &map);
            let canonical = divide_conformal(&pulled, &map);
            let h = extract_petz_function(&canonical).unwrap();
            for k in 0..19 {
                let w = 0.05 + 0.9 * k as f64 / 18.0;
                let t = (1.0 - w) / (1.0 + w);
                let expect = beta * w * (1.0 - w) / (beta * w).sinh();
                assert!(
                    (h.eval(t) - expect).abs() < 1e-9,
                    "beta={beta} w={w}: {} vs {expect}",
                    h.eval(t)
                );
            }
            // limit value at the origin of the w-coordinate
            assert!((h.eval(1.0) - 1.0).abs() < 1e-7);
        }
    }
}
