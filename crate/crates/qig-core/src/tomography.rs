//! Tomograms, quorums, Bloch reconstruction, and nonlinear tomographic
//! schemes realized as scalar maps w -> w~ on the simplex coordinate.

use std::f64::consts::FRAC_PI_4;
use std::sync::Arc;

use nalgebra::{Matrix2, Vector2};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qubit::{
    exp_i_involution, rotated_pauli_basis, sigma1, sigma2, BlochVector, QubitDensity, UnitaryFrame,
    C64, M2,
};

/// Outcome probabilities of a state measured in each frame of a quorum.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Tomogram {
    pub frames: Vec<String>,
    pub probs: Vec<[f64; 2]>,
}

impl Tomogram {
    pub fn validate(&self) -> Result<()> {
        if self.frames.len() != self.probs.len() {
            return Err(Error::DomainError(
                "frame labels and probability rows disagree".into(),
            ));
        }
        for &[p, q] in &self.probs {
            if !(0.0..=1.0).contains(&p) || !(0.0..=1.0).contains(&q) {
                return Err(Error::DomainError(format!(
                    "probability outside [0, 1]: ({p}, {q})"
                )));
            }
            if (p + q - 1.0).abs() > 1e-14 {
                return Err(Error::DomainError(format!(
                    "pair does not sum to 1: ({p}, {q})"
                )));
            }
        }
        Ok(())
    }
}

/// Outcome probabilities of `rho` in a single rotated frame: the diagonal of
/// u rho u^dagger in the computational basis.
pub fn tomogram(rho: &QubitDensity, frame: &UnitaryFrame) -> [f64; 2] {
    let m = frame.u() * rho.matrix() * frame.u().adjoint();
    let p = m[(0, 0)].re.clamp(0.0, 1.0);
    [p, 1.0 - p]
}

/// Three frames whose measurement axes form an orthonormal triad, enough to
/// reconstruct any qubit state from its tomograms.
#[derive(Debug, Clone)]
pub struct Quorum {
    frames: [UnitaryFrame; 3],
    axes: [[f64; 3]; 3],
}

fn measurement_axis(frame: &UnitaryFrame) -> [f64; 3] {
    // u^dagger s3 u expanded over the Pauli basis
    let m = frame.u().adjoint() * crate::qubit::sigma3() * frame.u();
    [
        (m * sigma1()).trace().re / 2.0,
        (m * sigma2()).trace().re / 2.0,
        (m * crate::qubit::sigma3()).trace().re / 2.0,
    ]
}

impl Quorum {
    pub fn from_frames(frames: [UnitaryFrame; 3]) -> Result<Self> {
        let axes = [
            measurement_axis(&frames[0]),
            measurement_axis(&frames[1]),
            measurement_axis(&frames[2]),
        ];
        for i in 0..3 {
            for j in 0..3 {
                let dot: f64 = (0..3).map(|k| axes[i][k] * axes[j][k]).sum();
                let want = if i == j { 1.0 } else { 0.0 };
                if (dot - want).abs() > 1e-10 {
                    return Err(Error::DomainError(
                        "frames do not form an informationally complete quorum".into(),
                    ));
                }
            }
        }
        Ok(Self { frames, axes })
    }

    /// The fixed-axis quorum measuring (y1, y2, y3) directly.
    pub fn standard() -> Self {
        let u1 = exp_i_involution(FRAC_PI_4, &sigma2());
        let u2 = exp_i_involution(-FRAC_PI_4, &sigma1());
        Self::from_frames([
            UnitaryFrame::new(u1, "u1").unwrap(),
            UnitaryFrame::new(u2, "u2").unwrap(),
            UnitaryFrame::identity("u3"),
        ])
        .expect("standard frames are complete")
    }

    /// Quorum adapted to the direction (theta, phi). Its frames measure along
    /// the local polar, azimuthal, and radial axes, in that order.
    pub fn rotated(theta: f64, phi: f64) -> Self {
        let (sw, st, sp) = rotated_pauli_basis(theta, phi);
        // eigenbasis of the radial matrix (standard spinor gauge)
        let half = theta / 2.0;
        let (sh, ch) = half.sin_cos();
        let e_p = C64::new(phi.cos(), phi.sin());
        let b = M2::from_columns(&[
            Vector2::new(C64::new(ch, 0.0), e_p * sh),
            Vector2::new(e_p.conj() * (-sh), C64::new(ch, 0.0)),
        ]);
        debug_assert!(
            crate::qubit::max_abs_entry(&(b.adjoint() * sw * b - crate::qubit::sigma3())) < 1e-12
        );
        let u_theta = b.adjoint() * exp_i_involution(FRAC_PI_4, &sp);
        let u_phi = b.adjoint() * exp_i_involution(-FRAC_PI_4, &st);
        let u_w = b.adjoint();
        Self::from_frames([
            UnitaryFrame::new(u_theta, "u_theta").unwrap(),
            UnitaryFrame::new(u_phi, "u_phi").unwrap(),
            UnitaryFrame::new(u_w, "u_w").unwrap(),
        ])
        .expect("rotated frames are complete")
    }

    pub fn frames(&self) -> &[UnitaryFrame; 3] {
        &self.frames
    }

    pub fn axes(&self) -> &[[f64; 3]; 3] {
        &self.axes
    }

    pub fn tomograms(&self, rho: &QubitDensity) -> Tomogram {
        Tomogram {
            frames: self.frames.iter().map(|f| f.label().to_string()).collect(),
            probs: self.frames.iter().map(|f| tomogram(rho, f)).collect(),
        }
    }

    /// Invert tomograms back to a Bloch vector: each frame contributes the
    /// component 2 W(+) - 1 along its measurement axis.
    pub fn reconstruct_bloch(&self, t: &Tomogram) -> Result<BlochVector> {
        t.validate()?;
        if t.probs.len() != 3 {
            return Err(Error::DomainError(format!(
                "expected 3 frames, got {}",
                t.probs.len()
            )));
        }
        let mut y = [0.0f64; 3];
        for (&[p_plus, _], axis) in t.probs.iter().zip(&self.axes) {
            let comp = 2.0 * p_plus - 1.0;
            for (acc, a) in y.iter_mut().zip(axis) {
                *acc += comp * a;
            }
        }
        let norm = (y[0] * y[0] + y[1] * y[1] + y[2] * y[2]).sqrt();
        if norm > 1.0 + 1e-9 {
            return Err(Error::InconsistentTomogram(norm));
        }
        let scale = if norm > 1.0 { 1.0 / norm } else { 1.0 };
        Ok(BlochVector::new(y[0] * scale, y[1] * scale, y[2] * scale))
    }
}

pub fn standard_quorum() -> Quorum {
    Quorum::standard()
}

pub fn rotated_quorum(theta: f64, phi: f64) -> Quorum {
    Quorum::rotated(theta, phi)
}

/// Invert a diagonal tomographic-tensor component back to the signed Bloch
/// component it encodes.
pub fn bloch_from_tensor(g_jj: f64, sign: f64) -> Result<f64> {
    if !g_jj.is_finite() || g_jj < 1.0 {
        return Err(Error::InvalidTensor(g_jj));
    }
    Ok(sign.signum() * (1.0 - 1.0 / g_jj).sqrt())
}

// ---------------------------------------------------------------------------
// Spectral scheme maps
// ---------------------------------------------------------------------------

type ScalarFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// The scalar map w -> w~ induced on the simplex coordinate by a tomographic
/// scheme, together with its derivative. Maps must send (-1, 1) into itself
/// and be strictly monotone, so no information is lost.
#[derive(Clone)]
pub struct SpectralMap {
    name: String,
    params: Vec<f64>,
    eval: ScalarFn,
    deriv: ScalarFn,
}

impl std::fmt::Debug for SpectralMap {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SpectralMap")
            .field("name", &self.name)
            .field("params", &self.params)
            .finish()
    }
}

impl SpectralMap {
    pub fn from_parts(
        name: impl Into<String>,
        params: Vec<f64>,
        eval: ScalarFn,
        deriv: ScalarFn,
    ) -> Self {
        Self {
            name: name.into(),
            params,
            eval,
            deriv,
        }
    }

    pub fn identity() -> Self {
        Self::from_parts("identity", vec![], Arc::new(|w| w), Arc::new(|_| 1.0))
    }

    pub fn negation() -> Self {
        Self::from_parts("neg", vec![], Arc::new(|w| -w), Arc::new(|_| -1.0))
    }

    /// The Gibbs-like scheme rho -> e^{-beta rho}/Tr e^{-beta rho}, whose
    /// spectral map is w -> -tanh(beta w / 2).
    pub fn exponential(beta: f64) -> Result<Self> {
        if beta == 0.0 || !beta.is_finite() {
            return Err(Error::DegenerateScheme);
        }
        Ok(Self::from_parts(
            "exp",
            vec![beta],
            Arc::new(move |w| -(beta * w / 2.0).tanh()),
            Arc::new(move |w| {
                let ch = (beta * w / 2.0).cosh();
                -beta / (2.0 * ch * ch)
            }),
        ))
    }

    /// Parse a flat scheme spec: `identity`, `neg`, or `exp:beta`.
    pub fn parse(spec: &str) -> Result<Self> {
        let mut parts = spec.splitn(2, ':');
        match parts.next().unwrap_or("") {
            "identity" | "id" => Ok(Self::identity()),
            "neg" | "negation" => Ok(Self::negation()),
            "exp" => {
                let beta: f64 = parts
                    .next()
                    .ok_or_else(|| Error::Parse("exp scheme needs a parameter, e.g. exp:2".into()))?
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad beta in '{spec}'")))?;
                Self::exponential(beta)
            }
            _ => Err(Error::Parse(format!(
                "unknown scheme '{spec}' (use exp:beta, neg, identity)"
            ))),
        }
    }

    pub fn value(&self, w: f64) -> f64 {
        (self.eval)(w)
    }

    pub fn derivative(&self, w: f64) -> f64 {
        (self.deriv)(w)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn params(&self) -> &[f64] {
        &self.params
    }

    /// Build a spectral map from a matrix function acting on diagonal states.
    ///
    /// The function is probed on 512 interior points: outputs must be
    /// diagonal states (trace one, nonnegative entries) and the induced
    /// scalar map must be strictly monotone. The derivative is a central
    /// finite difference with step 1e-5, one-sided near the boundary.
    pub fn from_matrix_function<F>(f: F, name: impl Into<String>) -> Result<Self>
    where
        F: Fn(&M2) -> M2 + Send + Sync + 'static,
    {
        let f = Arc::new(f);
        let scalar = {
            let f = f.clone();
            move |w: f64| -> Result<f64> {
                let rho = Matrix2::from_diagonal(&Vector2::new(
                    C64::new((1.0 + w) / 2.0, 0.0),
                    C64::new((1.0 - w) / 2.0, 0.0),
                ));
                let out = f(&rho);
                let off = out[(0, 1)].norm().max(out[(1, 0)].norm());
                if off > 1e-10 {
                    return Err(Error::InvalidScheme(format!(
                        "output is not diagonal (off-diagonal {off:.3e})"
                    )));
                }
                let (d0, d1) = (out[(0, 0)], out[(1, 1)]);
                if d0.im.abs() > 1e-10 || d1.im.abs() > 1e-10 {
                    return Err(Error::InvalidScheme("complex diagonal".into()));
                }
                let trace = d0.re + d1.re;
                if (trace - 1.0).abs() > 1e-10 {
                    return Err(Error::InvalidScheme(format!("trace = {trace}")));
                }
                if d0.re < -1e-12 || d1.re < -1e-12 {
                    return Err(Error::InvalidScheme(format!(
                        "negative eigenvalue ({}, {})",
                        d0.re, d1.re
                    )));
                }
                Ok(d0.re - d1.re)
            }
        };

        // screening pass
        const SAMPLES: usize = 512;
        let lo = -0.999;
        let hi = 0.999;
        let mut prev = None;
        let mut sign = 0.0f64;
        for k in 0..SAMPLES {
            let w = lo + (hi - lo) * k as f64 / (SAMPLES - 1) as f64;
            let wt = scalar(w)?;
            if wt.abs() >= 1.0 {
                return Err(Error::InvalidScheme(format!(
                    "|w~({w})| = {} >= 1",
                    wt.abs()
                )));
            }
            if let Some(p) = prev {
                let d: f64 = wt - p;
                if d == 0.0 || (sign != 0.0 && d.signum() != sign) {
                    return Err(Error::NonInvertibleScheme);
                }
                sign = d.signum();
            }
            prev = Some(wt);
        }

        let eval_scalar = Arc::new(scalar);
        let eval: ScalarFn = {
            let s = eval_scalar.clone();
            Arc::new(move |w| s(w).unwrap_or(f64::NAN))
        };
        let deriv: ScalarFn = {
            let s = eval_scalar.clone();
            Arc::new(move |w| {
                let h = 1e-5;
                let s_ok = |x: f64| s(x).unwrap_or(f64::NAN);
                if w > 1.0 - 2.0 * h {
                    (3.0 * s_ok(w) - 4.0 * s_ok(w - h) + s_ok(w - 2.0 * h)) / (2.0 * h)
                } else if w < -1.0 + 2.0 * h {
                    (-3.0 * s_ok(w) + 4.0 * s_ok(w + h) - s_ok(w + 2.0 * h)) / (2.0 * h)
                } else {
                    (s_ok(w + h) - s_ok(w - h)) / (2.0 * h)
                }
            })
        };
        Ok(Self::from_parts(name, vec![], eval, deriv))
    }
}

/// Convenience alias matching the scheme constructors' naming.
pub fn exponential_scheme(beta: f64) -> Result<SpectralMap> {
    SpectralMap::exponential(beta)
}

pub fn scheme_from_matrix_function<F>(f: F, name: impl Into<String>) -> Result<SpectralMap>
where
    F: Fn(&M2) -> M2 + Send + Sync + 'static,
{
    SpectralMap::from_matrix_function(f, name)
}

/// Push a state through a scheme: the radial coordinate moves by the spectral
/// map while the eigenframe is untouched. A negative image is stored as a
/// positive radius with antipodal angles.
pub fn apply_spectral_map(rho: &QubitDensity, map: &SpectralMap) -> Result<QubitDensity> {
    let wt = map.value(rho.w());
    if !wt.is_finite() || wt.abs() > 1.0 {
        return Err(Error::InvalidScheme(format!("w~ = {wt} outside [-1, 1]")));
    }
    QubitDensity::from_polar(wt, rho.theta(), rho.phi())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qubit::{density_from_bloch, random_bloch, sigma0};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn maximally_mixed_is_frame_independent() {
        let rho = QubitDensity::maximally_mixed();
        for frame in Quorum::standard().frames() {
            let [p, q] = tomogram(&rho, frame);
            assert!((p - 0.5).abs() < 1e-15 && (q - 0.5).abs() < 1e-15);
        }
    }

    #[test]
    fn standard_quorum_measures_bloch_components() {
        let y = BlochVector::new(0.21, -0.48, 0.6);
        let rho = density_from_bloch(y).unwrap();
        let t = Quorum::standard().tomograms(&rho);
        for (j, comp) in y.as_array().into_iter().enumerate() {
            assert!((t.probs[j][0] - (1.0 + comp) / 2.0).abs() < 1e-14);
            assert!((t.probs[j][1] - (1.0 - comp) / 2.0).abs() < 1e-14);
        }
        // the identity-frame example
        let rho = density_from_bloch(BlochVector::new(0.0, 0.0, 0.6)).unwrap();
        let q = Quorum::standard();
        let p = tomogram(&rho, &q.frames()[2]);
        assert!((p[0] - 0.8).abs() < 1e-15 && (p[1] - 0.2).abs() < 1e-15);
    }

    #[test]
    fn rotated_quorum_sees_only_the_radial_component() {
        for &(theta, phi, w) in &[(0.7, 1.9, 0.35), (2.1, 4.4, 0.8), (1.2, 0.3, 0.05)] {
            let quorum = Quorum::rotated(theta, phi);
            let rho = QubitDensity::from_polar(w, theta, phi).unwrap();
            let t = quorum.tomograms(&rho);
            assert!((t.probs[0][0] - 0.5).abs() < 1e-13, "theta frame");
            assert!((t.probs[1][0] - 0.5).abs() < 1e-13, "phi frame");
            assert!(
                (t.probs[2][0] - (1.0 + w) / 2.0).abs() < 1e-13,
                "radial frame"
            );
        }
    }

    #[test]
    fn rotated_quorum_at_origin_matches_standard() {
        let rot = Quorum::rotated(0.0, 0.0);
        let std_q = Quorum::standard();
        for (a, b) in rot.frames().iter().zip(std_q.frames()) {
            let diff = crate::qubit::max_abs_entry(&(a.u() - b.u()));
            assert!(diff < 1e-14, "{} vs {}: {diff}", a.label(), b.label());
        }
    }

    #[test]
    fn reconstruct_bloch_examples() {
        let q = Quorum::standard();
        let t = Tomogram {
            frames: vec!["u1".into(), "u2".into(), "u3".into()],
            probs: vec![[0.5, 0.5], [0.5, 0.5], [0.5, 0.5]],
        };
        let y = q.reconstruct_bloch(&t).unwrap();
        assert_eq!(y.as_array(), [0.0, 0.0, 0.0]);

        let t = Tomogram {
            frames: t.frames.clone(),
            probs: vec![[0.8, 0.2], [0.5, 0.5], [0.5, 0.5]],
        };
        let y = q.reconstruct_bloch(&t).unwrap();
        assert!((y.y1 - 0.6).abs() < 1e-14 && y.y2.abs() < 1e-14 && y.y3.abs() < 1e-14);

        let t = Tomogram {
            frames: t.frames.clone(),
            probs: vec![[1.0, 0.0], [0.5, 0.5], [0.5, 0.5]],
        };
        let y = q.reconstruct_bloch(&t).unwrap();
        assert!((y.y1 - 1.0).abs() < 1e-14);

        let t = Tomogram {
            frames: t.frames,
            probs: vec![[1.0, 0.0], [1.0, 0.0], [1.0, 0.0]],
        };
        assert!(matches!(
            q.reconstruct_bloch(&t),
            Err(Error::InconsistentTomogram(_))
        ));
    }

    #[test]
    fn round_trip_bulk() {
        let q = Quorum::standard();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..10_000 {
            let y = random_bloch(&mut rng, 1.0);
            let rho = density_from_bloch(y).unwrap();
            let back = q.reconstruct_bloch(&q.tomograms(&rho)).unwrap();
            for (a, b) in back.as_array().into_iter().zip(y.as_array()) {
                assert!((a - b).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn rotated_quorums_are_informationally_complete() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for &(theta, phi) in &[(0.6, 1.9), (2.5, 4.2), (1.57, 0.0)] {
            let q = Quorum::rotated(theta, phi);
            for _ in 0..2_000 {
                let y = random_bloch(&mut rng, 1.0);
                let rho = density_from_bloch(y).unwrap();
                let back = q.reconstruct_bloch(&q.tomograms(&rho)).unwrap();
                for (a, b) in back.as_array().into_iter().zip(y.as_array()) {
                    assert!((a - b).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn tensor_inversion() {
        assert_eq!(bloch_from_tensor(1.0, 1.0).unwrap(), 0.0);
        assert!((bloch_from_tensor(1.5625, 1.0).unwrap() - 0.6).abs() < 1e-12);
        assert!((bloch_from_tensor(4.0 / 3.0, -1.0).unwrap() + 0.5).abs() < 1e-12);
        assert!(matches!(
            bloch_from_tensor(0.8, 1.0),
            Err(Error::InvalidTensor(_))
        ));
    }

    #[test]
    fn exponential_map_examples() {
        let map = SpectralMap::exponential(2.0).unwrap();
        assert_eq!(map.value(0.0), 0.0);
        assert!((map.value(0.5) + 0.5f64.tanh()).abs() < 1e-15);
        assert!(matches!(
            SpectralMap::exponential(0.0),
            Err(Error::DegenerateScheme)
        ));
        // derivative against an independent finite difference
        for &w in &[-0.8, -0.3, 0.0, 0.4, 0.9] {
            let fd = crate::numeric::deriv_central4(|x| map.value(x), w, 1e-4);
            assert!((map.derivative(w) - fd).abs() < 1e-8);
        }
    }

    #[test]
    fn matrix_function_schemes() {
        // identity
        let id = SpectralMap::from_matrix_function(|m: &M2| *m, "id").unwrap();
        for &w in &[-0.7, 0.0, 0.42] {
            assert!((id.value(w) - w).abs() < 1e-12);
        }

        // complement rho -> 1 - rho gives w -> -w
        let neg = SpectralMap::from_matrix_function(|m: &M2| sigma0() - m, "complement").unwrap();
        for &w in &[-0.6, 0.1, 0.8] {
            assert!((neg.value(w) + w).abs() < 1e-12);
        }

        // Gibbs-like scheme matches the closed form on a grid
        let beta = 2.0;
        let gibbs = SpectralMap::from_matrix_function(
            move |m: &M2| {
                // diagonal input: exponentiate entrywise and normalize
                let a = (-beta * m[(0, 0)].re).exp();
                let b = (-beta * m[(1, 1)].re).exp();
                Matrix2::from_diagonal(&Vector2::new(
                    C64::new(a / (a + b), 0.0),
                    C64::new(b / (a + b), 0.0),
                ))
            },
            "gibbs",
        )
        .unwrap();
        let closed = SpectralMap::exponential(beta).unwrap();
        for k in 0..40 {
            let w = -0.95 + 1.9 * k as f64 / 39.0;
            assert!((gibbs.value(w) - closed.value(w)).abs() < 1e-12);
        }

        // a constant output is rejected as non-invertible
        let constant = SpectralMap::from_matrix_function(
            |_: &M2| Matrix2::from_diagonal(&Vector2::new(C64::new(0.5, 0.0), C64::new(0.5, 0.0))),
            "collapse",
        );
        assert!(matches!(constant, Err(Error::NonInvertibleScheme)));

        // a trace-violating output is rejected
        let bad = SpectralMap::from_matrix_function(|m: &M2| m * C64::new(2.0, 0.0), "double");
        assert!(matches!(bad, Err(Error::InvalidScheme(_))));
    }

    #[test]
    fn scheme_tomograms_read_back_the_mapped_coordinate() {
        let beta = 2.0;
        let map = SpectralMap::exponential(beta).unwrap();
        for &(theta, phi, w) in &[(0.9, 2.2, 0.5), (2.4, 5.1, 0.25)] {
            let quorum = Quorum::rotated(theta, phi);
            let rho = QubitDensity::from_polar(w, theta, phi).unwrap();
            let mapped = apply_spectral_map(&rho, &map).unwrap();
            let t = quorum.tomograms(&mapped);
            let wt = map.value(w);
            assert!((t.probs[0][0] - 0.5).abs() < 1e-13);
            assert!((t.probs[1][0] - 0.5).abs() < 1e-13);
            // 2 W(+|u_w) - 1 recovers w~ including its sign
            assert!((2.0 * t.probs[2][0] - 1.0 - wt).abs() < 1e-13);
        }
    }
}
