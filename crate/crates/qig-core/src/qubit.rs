//! Qubit states and the linear-algebra primitives built on them: Bloch and
//! polar parametrizations, rotated Pauli triads, spectral decomposition with a
//! deterministic eigenvector gauge, traceless Hermitian tangents, and
//! trace-preserving completely positive channels.

use nalgebra::{Matrix2, Vector2};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};

pub type C64 = nalgebra::Complex<f64>;
pub type M2 = Matrix2<C64>;

pub const HERMITIAN_TOL: f64 = 1e-14;
pub const TRACE_TOL: f64 = 1e-14;
pub const UNITARY_TOL: f64 = 1e-14;
pub const KRAUS_TOL: f64 = 1e-12;
/// Below this purity radius the spectrum is treated as degenerate.
pub const DEGENERATE_W: f64 = 1e-12;

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub fn sigma0() -> M2 {
    Matrix2::identity()
}

pub fn sigma1() -> M2 {
    Matrix2::new(c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0))
}

pub fn sigma2() -> M2 {
    Matrix2::new(c(0.0, 0.0), c(0.0, -1.0), c(0.0, 1.0), c(0.0, 0.0))
}

pub fn sigma3() -> M2 {
    Matrix2::new(c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(-1.0, 0.0))
}

/// exp(i a S) for an involution S (S^2 = 1): cos(a) + i sin(a) S.
pub fn exp_i_involution(angle: f64, s: &M2) -> M2 {
    sigma0() * c(angle.cos(), 0.0) + s * c(0.0, angle.sin())
}

pub fn max_abs_entry(m: &M2) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Pauli triad adapted to the direction (theta, phi): the radial matrix and
/// the two attached to the polar and azimuthal coordinate lines.
pub fn rotated_pauli_basis(theta: f64, phi: f64) -> (M2, M2, M2) {
    let (st, ct) = theta.sin_cos();
    let (sp, cp) = phi.sin_cos();
    let e_m = c(cp, -sp); // e^{-i phi}
    let e_p = c(cp, sp);
    let sigma_w = Matrix2::new(c(ct, 0.0), e_m * st, e_p * st, c(-ct, 0.0));
    let sigma_t = Matrix2::new(c(-st, 0.0), e_m * ct, e_p * ct, c(st, 0.0));
    let sigma_p = Matrix2::new(
        c(0.0, 0.0),
        e_m * c(0.0, -1.0),
        e_p * c(0.0, 1.0),
        c(0.0, 0.0),
    );
    (sigma_w, sigma_t, sigma_p)
}

// ---------------------------------------------------------------------------
// Bloch vectors and density matrices
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlochVector {
    pub y1: f64,
    pub y2: f64,
    pub y3: f64,
}

impl BlochVector {
    pub fn new(y1: f64, y2: f64, y3: f64) -> Self {
        Self { y1, y2, y3 }
    }

    pub fn norm(&self) -> f64 {
        (self.y1 * self.y1 + self.y2 * self.y2 + self.y3 * self.y3).sqrt()
    }

    pub fn as_array(&self) -> [f64; 3] {
        [self.y1, self.y2, self.y3]
    }
}

/// A qubit density matrix kept jointly in matrix and polar (w, theta, phi)
/// form, with w >= 0 and the direction carried by the angles.
#[derive(Debug, Clone)]
pub struct QubitDensity {
    matrix: M2,
    w: f64,
    theta: f64,
    phi: f64,
}

impl QubitDensity {
    pub fn from_bloch(y: BlochVector) -> Result<Self> {
        let norm = y.norm();
        if norm > 1.0 + 1e-12 {
            return Err(Error::InvalidState(format!(
                "Bloch vector has length {norm} > 1"
            )));
        }
        let w = norm.min(1.0);
        let (theta, phi) = if w < DEGENERATE_W {
            (0.0, 0.0)
        } else {
            let theta = (y.y3 / w).clamp(-1.0, 1.0).acos();
            let phi = if y.y1.abs() < 1e-300 && y.y2.abs() < 1e-300 {
                0.0
            } else {
                let p = y.y2.atan2(y.y1);
                if p < 0.0 {
                    p + std::f64::consts::TAU
                } else {
                    p
                }
            };
            (theta, phi)
        };
        let half = c(0.5, 0.0);
        let matrix = (sigma0()
            + sigma1() * c(y.y1, 0.0)
            + sigma2() * c(y.y2, 0.0)
            + sigma3() * c(y.y3, 0.0))
            * half;
        Ok(Self {
            matrix,
            w,
            theta,
            phi,
        })
    }

    /// Polar constructor; negative w is folded into antipodal angles.
    pub fn from_polar(w: f64, theta: f64, phi: f64) -> Result<Self> {
        if w.abs() > 1.0 + 1e-12 {
            return Err(Error::InvalidState(format!("|w| = {} > 1", w.abs())));
        }
        let (w, theta, phi) = if w < 0.0 {
            (
                -w,
                std::f64::consts::PI - theta,
                (phi + std::f64::consts::PI) % std::f64::consts::TAU,
            )
        } else {
            (w, theta, phi)
        };
        let (st, ct) = theta.sin_cos();
        let (sp, cp) = phi.sin_cos();
        Self::from_bloch(BlochVector::new(w * st * cp, w * st * sp, w * ct))
    }

    /// Validating constructor from an explicit 2x2 matrix.
    pub fn from_matrix(m: &M2) -> Result<Self> {
        let dev = max_abs_entry(&(m - m.adjoint()));
        if dev > HERMITIAN_TOL {
            return Err(Error::NotHermitian(dev));
        }
        let trace = m.trace();
        if (trace.re - 1.0).abs() > TRACE_TOL || trace.im.abs() > TRACE_TOL {
            return Err(Error::InvalidTrace(trace.re));
        }
        let y = BlochVector::new(
            (m * sigma1()).trace().re,
            (m * sigma2()).trace().re,
            (m * sigma3()).trace().re,
        );
        // eigenvalues are (1 +- |y|)/2; positivity is |y| <= 1
        Self::from_bloch(y)
    }

    pub fn maximally_mixed() -> Self {
        Self::from_bloch(BlochVector::new(0.0, 0.0, 0.0)).unwrap()
    }

    pub fn matrix(&self) -> &M2 {
        &self.matrix
    }

    pub fn w(&self) -> f64 {
        self.w
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }

    pub fn bloch(&self) -> BlochVector {
        let (st, ct) = self.theta.sin_cos();
        let (sp, cp) = self.phi.sin_cos();
        BlochVector::new(self.w * st * cp, self.w * st * sp, self.w * ct)
    }

    /// Eigenvalues, descending: ((1+w)/2, (1-w)/2).
    pub fn eigenvalues(&self) -> [f64; 2] {
        [(1.0 + self.w) / 2.0, (1.0 - self.w) / 2.0]
    }

    pub fn is_full_rank(&self) -> bool {
        self.w < 1.0 - 1e-12
    }
}

pub fn density_from_bloch(y: BlochVector) -> Result<QubitDensity> {
    QubitDensity::from_bloch(y)
}

// ---------------------------------------------------------------------------
// Frames, tangents, channels
// ---------------------------------------------------------------------------

/// A unitary reference frame for tomographic measurements.
#[derive(Debug, Clone)]
pub struct UnitaryFrame {
    u: M2,
    label: String,
}

impl UnitaryFrame {
    pub fn new(u: M2, label: impl Into<String>) -> Result<Self> {
        let dev = max_abs_entry(&(u.adjoint() * u - sigma0()));
        if dev > UNITARY_TOL {
            return Err(Error::NotUnitary(dev));
        }
        Ok(Self {
            u,
            label: label.into(),
        })
    }

    pub fn identity(label: impl Into<String>) -> Self {
        Self {
            u: sigma0(),
            label: label.into(),
        }
    }

    pub fn u(&self) -> &M2 {
        &self.u
    }

    pub fn label(&self) -> &str {
        &self.label
    }
}

/// A traceless Hermitian matrix: a tangent direction on the state space.
#[derive(Debug, Clone)]
pub struct TangentVector {
    a: M2,
}

impl TangentVector {
    pub fn new(a: M2) -> Result<Self> {
        let herm = max_abs_entry(&(a - a.adjoint()));
        let tr = a.trace().norm();
        let dev = herm.max(tr);
        if dev > HERMITIAN_TOL {
            return Err(Error::InvalidTangent(dev));
        }
        Ok(Self { a })
    }

    /// x s1 + y s2 + z s3 (always a valid tangent).
    pub fn from_pauli(x: f64, y: f64, z: f64) -> Self {
        Self {
            a: sigma1() * c(x, 0.0) + sigma2() * c(y, 0.0) + sigma3() * c(z, 0.0),
        }
    }

    pub fn matrix(&self) -> &M2 {
        &self.a
    }
}

/// A trace-preserving completely positive map in Kraus form.
#[derive(Debug, Clone)]
pub struct Channel {
    kraus: Vec<M2>,
}

impl Channel {
    pub fn new(kraus: Vec<M2>) -> Result<Self> {
        let mut sum = M2::zeros();
        for k in &kraus {
            sum += k.adjoint() * k;
        }
        let dev = max_abs_entry(&(sum - sigma0()));
        if dev > KRAUS_TOL {
            return Err(Error::IncompleteKraus(dev));
        }
        Ok(Self { kraus })
    }

    pub fn kraus(&self) -> &[M2] {
        &self.kraus
    }

    pub fn apply(&self, rho: &QubitDensity) -> Result<QubitDensity> {
        let mut out = M2::zeros();
        for k in &self.kraus {
            out += k * rho.matrix() * k.adjoint();
        }
        // scrub roundoff so the state constructor's tight tolerances hold
        let out = (out + out.adjoint()) * c(0.5, 0.0);
        let out = out * c(1.0 / out.trace().re, 0.0);
        QubitDensity::from_matrix(&out)
    }

    pub fn apply_tangent(&self, a: &TangentVector) -> TangentVector {
        let mut out = M2::zeros();
        for k in &self.kraus {
            out += k * a.matrix() * k.adjoint();
        }
        let out = (out + out.adjoint()) * c(0.5, 0.0);
        let out = out - sigma0() * (out.trace() * c(0.5, 0.0));
        TangentVector { a: out }
    }
}

// ---------------------------------------------------------------------------
// Spectral decomposition with a fixed gauge
// ---------------------------------------------------------------------------

/// Rotate a column's phase so its largest-magnitude entry is real positive.
fn phase_fix(v: &mut Vector2<C64>) {
    let idx = if v[0].norm() >= v[1].norm() { 0 } else { 1 };
    let n = v[idx].norm();
    if n > 0.0 {
        let ph = v[idx] / c(n, 0.0);
        let corr = ph.conj();
        v[0] *= corr;
        v[1] *= corr;
    }
}

/// Eigen-decompose a state as U diag(p) U^dagger with p sorted descending.
///
/// The gauge is deterministic: at w = 0 the frame is the identity; otherwise
/// each eigenvector's largest-magnitude component is made real positive.
pub fn spectral_decompose(rho: &QubitDensity) -> ([f64; 2], UnitaryFrame) {
    let w = rho.w();
    if w < DEGENERATE_W {
        return ([0.5, 0.5], UnitaryFrame::identity("eigenframe"));
    }
    let half = rho.theta() / 2.0;
    let (sh, ch) = half.sin_cos();
    let (sp, cp) = rho.phi().sin_cos();
    let e_p = c(cp, sp);
    let e_m = e_p.conj();
    let mut plus = Vector2::new(c(ch, 0.0), e_p * sh);
    let mut minus = Vector2::new(e_m * (-sh), c(ch, 0.0));
    phase_fix(&mut plus);
    phase_fix(&mut minus);
    let u = M2::from_columns(&[plus, minus]);
    (
        [(1.0 + w) / 2.0, (1.0 - w) / 2.0],
        UnitaryFrame {
            u,
            label: "eigenframe".into(),
        },
    )
}

// ---------------------------------------------------------------------------
// Seeded random sampling
// ---------------------------------------------------------------------------

pub(crate) fn gaussian(rng: &mut impl Rng) -> f64 {
    rng.sample(StandardNormal)
}

pub(crate) fn gaussian_c(rng: &mut impl Rng) -> C64 {
    c(gaussian(rng), gaussian(rng))
}

/// Bloch vector uniform in the ball of radius `w_max`.
pub(crate) fn random_bloch(rng: &mut impl Rng, w_max: f64) -> BlochVector {
    loop {
        let v = [gaussian(rng), gaussian(rng), gaussian(rng)];
        let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        if n < 1e-12 {
            continue;
        }
        let r = w_max * rng.random::<f64>().powf(1.0 / 3.0);
        return BlochVector::new(r * v[0] / n, r * v[1] / n, r * v[2] / n);
    }
}

pub(crate) fn random_tangent(rng: &mut impl Rng) -> TangentVector {
    TangentVector::from_pauli(gaussian(rng), gaussian(rng), gaussian(rng))
}

pub(crate) fn random_channel_from(rng: &mut impl Rng) -> Channel {
    // Draw a 4x2 complex Gaussian block and orthonormalize its two columns
    // into an isometry; the two stacked 2x2 blocks are the Kraus operators.
    loop {
        let mut g1: Vec<C64> = (0..4).map(|_| gaussian_c(rng)).collect();
        let g2: Vec<C64> = (0..4).map(|_| gaussian_c(rng)).collect();
        let n1 = g1.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if n1 < 1e-8 {
            continue;
        }
        for z in &mut g1 {
            *z /= c(n1, 0.0);
        }
        let mut v2 = g2;
        for _ in 0..2 {
            let overlap: C64 = g1.iter().zip(&v2).map(|(a, b)| a.conj() * b).sum();
            for (z, a) in v2.iter_mut().zip(&g1) {
                *z -= overlap * a;
            }
        }
        let n2 = v2.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if n2 < 1e-8 {
            continue;
        }
        for z in &mut v2 {
            *z /= c(n2, 0.0);
        }
        let k1 = Matrix2::new(g1[0], v2[0], g1[1], v2[1]);
        let k2 = Matrix2::new(g1[2], v2[2], g1[3], v2[3]);
        return Channel::new(vec![k1, k2]).expect("orthonormalized isometry");
    }
}

/// Deterministic random channel: identical Kraus list for identical seeds.
pub fn random_channel(seed: u64) -> Channel {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_channel_from(&mut rng)
}
