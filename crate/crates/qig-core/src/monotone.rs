//! Numerical certification and falsification of operator monotonicity:
//! upper-half-plane scans of the holomorphic extension, randomized
//! matrix-pair tests, and Monte-Carlo metric monotonicity under channels.
//!
//! A clean scan or search is never a proof; reports say which verdict a
//! clean run earns (`Pass` for a candidate believed monotone, `Inconclusive`
//! when independent evidence already rules monotonicity out).

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::cm_metric_value;
use crate::petz::PetzFunction;
use crate::qubit::{
    density_from_bloch, gaussian_c, random_bloch, random_channel_from, random_tangent, C64,
};

/// Default witness threshold for upper-half-plane scans.
pub const LOEWNER_TOL: f64 = 1e-10;
/// Default eigenvalue threshold for matrix-pair tests.
pub const MATRIX_TOL: f64 = 1e-9;
/// Default excess threshold for the channel Monte Carlo.
pub const CPTP_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Violation,
    Inconclusive,
}

/// A rectangle in the open upper half-plane.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct Region {
    pub re_min: f64,
    pub re_max: f64,
    /// Lower edge; 0 means "open at 0" (grid starts one step above).
    pub im_min: f64,
    pub im_max: f64,
}

impl Region {
    pub fn new(re_min: f64, re_max: f64, im_min: f64, im_max: f64) -> Result<Self> {
        if !re_min.is_finite()
            || !im_max.is_finite()
            || re_min >= re_max
            || im_min >= im_max
            || im_min < 0.0
        {
            return Err(Error::DomainError(format!(
                "bad region [{re_min}, {re_max}] x [{im_min}, {im_max}]"
            )));
        }
        Ok(Self {
            re_min,
            re_max,
            im_min,
            im_max,
        })
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Witness {
    /// A grid point with Im f(z) below the threshold.
    ComplexPoint { re: f64, im: f64, value_im: f64 },
    /// A pair A <= B with f(B) - f(A) indefinite. Matrices are stored as
    /// row-major [re, im] entry pairs.
    MatrixPair {
        dim: usize,
        a: Vec<[f64; 2]>,
        b: Vec<[f64; 2]>,
        min_eigenvalue: f64,
    },
    /// A (state, tangent, channel) triple with the pushed-forward metric
    /// value exceeding the original.
    ChannelTriple {
        sample_index: u64,
        bloch: [f64; 3],
        tangent: [f64; 3],
        kraus: Vec<Vec<[f64; 2]>>,
        lhs: f64,
        rhs: f64,
    },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MonotonicityReport {
    pub function: String,
    pub params: serde_json::Value,
    pub test: String,
    pub verdict: Verdict,
    /// Clean verdicts are never proofs: scans are grid-limited and searches
    /// sample-limited, and the report says which.
    pub scope: String,
    pub witnesses: Vec<Witness>,
    pub samples: u64,
    pub seed: u64,
    pub tolerance: f64,
    /// Grid points skipped on singularities, or resampled triples.
    pub skipped: u64,
}

impl MonotonicityReport {
    fn check_consistency(&self) {
        debug_assert_eq!(
            self.verdict == Verdict::Violation,
            !self.witnesses.is_empty()
        );
    }
}

// ---------------------------------------------------------------------------
// Upper-half-plane scan
// ---------------------------------------------------------------------------

/// Scan Im f(z) on a grid over `region`. Grid points within 1e-9 of the
/// function's declared singular set are skipped and counted. A clean scan is
/// scan-limited, never a proof.
pub fn loewner_scan(
    f: &PetzFunction,
    region: Region,
    nr: usize,
    ni: usize,
    tol: f64,
) -> Result<MonotonicityReport> {
    if nr < 2 || ni < 2 {
        return Err(Error::DomainError(
            "grid resolution must be at least 2".into(),
        ));
    }
    if f.eval_complex(C64::new(0.0, 1.0)).is_none() {
        return Err(Error::DomainError(format!(
            "{} has no complex evaluator",
            f.name()
        )));
    }
    let mut witnesses = Vec::new();
    let mut samples = 0u64;
    let mut skipped = 0u64;
    for i in 0..nr {
        let re = region.re_min + (region.re_max - region.re_min) * i as f64 / (nr - 1) as f64;
        for j in 0..ni {
            let im = if region.im_min > 0.0 {
                region.im_min + (region.im_max - region.im_min) * j as f64 / (ni - 1) as f64
            } else {
                region.im_max * (j + 1) as f64 / ni as f64
            };
            let z = C64::new(re, im);
            if f.singularity_distance(z) < 1e-9 {
                skipped += 1;
                continue;
            }
            let v = f.eval_complex(z).unwrap();
            if !v.is_finite() {
                skipped += 1;
                continue;
            }
            samples += 1;
            if v.im < -tol && witnesses.len() < 16 {
                witnesses.push(Witness::ComplexPoint {
                    re,
                    im,
                    value_im: v.im,
                });
            }
        }
    }
    let verdict = if witnesses.is_empty() {
        Verdict::Pass
    } else {
        Verdict::Violation
    };
    let report = MonotonicityReport {
        function: f.name(),
        params: f.params_json(),
        test: "loewner".into(),
        verdict,
        scope: "scan-limited".into(),
        witnesses,
        samples,
        seed: 0,
        tolerance: tol,
        skipped,
    };
    report.check_consistency();
    Ok(report)
}

/// Re-evaluate a scan witness; true when the violation reproduces.
pub fn verify_loewner_witness(f: &PetzFunction, w: &Witness, tol: f64) -> bool {
    match w {
        Witness::ComplexPoint { re, im, .. } => f
            .eval_complex(C64::new(*re, *im))
            .map(|v| v.im < -tol)
            .unwrap_or(false),
        _ => false,
    }
}

// ---------------------------------------------------------------------------
// Matrix-pair falsifier
// ---------------------------------------------------------------------------

fn hermitian_from_entries(dim: usize, entries: &[[f64; 2]]) -> DMatrix<C64> {
    DMatrix::from_fn(dim, dim, |i, j| {
        let e = entries[i * dim + j];
        C64::new(e[0], e[1])
    })
}

fn entries_from_matrix(m: &DMatrix<C64>) -> Vec<[f64; 2]> {
    let dim = m.nrows();
    (0..dim * dim)
        .map(|k| {
            let z = m[(k / dim, k % dim)];
            [z.re, z.im]
        })
        .collect()
}

fn random_hermitian_psd(rng: &mut impl Rng, dim: usize) -> DMatrix<C64> {
    let g = DMatrix::from_fn(dim, dim, |_, _| gaussian_c(rng));
    g.adjoint() * g
}

/// Apply f to a Hermitian matrix through its eigendecomposition.
fn matrix_function(f: &PetzFunction, m: &DMatrix<C64>) -> DMatrix<C64> {
    let eig = m.clone().symmetric_eigen();
    let d = DMatrix::from_diagonal(
        &eig.eigenvalues
            .map(|lambda| C64::new(f.eval(lambda.max(1e-300)), 0.0)),
    );
    &eig.eigenvectors * d * eig.eigenvectors.adjoint()
}

fn min_eigenvalue(m: &DMatrix<C64>) -> f64 {
    let h = (m + m.adjoint()) * C64::new(0.5, 0.0);
    h.symmetric_eigen()
        .eigenvalues
        .iter()
        .cloned()
        .fold(f64::INFINITY, f64::min)
}

/// Randomized search for a pair A <= B of positive-definite matrices with
/// f(B) - f(A) indefinite. `clean_verdict` is returned when no violation is
/// found (`Pass` for a candidate believed monotone, `Inconclusive` when
/// monotonicity is already excluded by other evidence).
pub fn matrix_monotonicity_test(
    f: &PetzFunction,
    dim: usize,
    samples: u64,
    seed: u64,
    tol: f64,
    clean_verdict: Verdict,
) -> Result<MonotonicityReport> {
    if dim != 2 && dim != 3 {
        return Err(Error::DomainError(format!("dim must be 2 or 3, got {dim}")));
    }
    if clean_verdict == Verdict::Violation {
        return Err(Error::DomainError(
            "clean verdict must be pass or inconclusive".into(),
        ));
    }
    let mut witnesses = Vec::new();
    for index in 0..samples {
        // per-sample substream so results are independent of scheduling
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(index);
        let a =
            random_hermitian_psd(&mut rng, dim) + DMatrix::identity(dim, dim) * C64::new(0.1, 0.0);
        // PSD perturbation with a magnitude log-uniform in [1e-3, 10]
        let log_scale = rng.random::<f64>() * (10.0f64.ln() - 1e-3f64.ln()) + 1e-3f64.ln();
        let p = random_hermitian_psd(&mut rng, dim) * C64::new(log_scale.exp(), 0.0);
        let b = &a + &p;
        let diff = matrix_function(f, &b) - matrix_function(f, &a);
        let lambda = min_eigenvalue(&diff);
        if lambda < -tol {
            witnesses.push(Witness::MatrixPair {
                dim,
                a: entries_from_matrix(&a),
                b: entries_from_matrix(&b),
                min_eigenvalue: lambda,
            });
            let report = MonotonicityReport {
                function: f.name(),
                params: f.params_json(),
                test: "matrix".into(),
                verdict: Verdict::Violation,
                scope: "sample-limited".into(),
                witnesses,
                samples: index + 1,
                seed,
                tolerance: tol,
                skipped: 0,
            };
            report.check_consistency();
            return Ok(report);
        }
    }
    Ok(MonotonicityReport {
        function: f.name(),
        params: f.params_json(),
        test: "matrix".into(),
        verdict: clean_verdict,
        scope: "sample-limited".into(),
        witnesses,
        samples,
        seed,
        tolerance: tol,
        skipped: 0,
    })
}

/// Re-check a matrix witness: B - A must be PSD (to 1e-12) and f(B) - f(A)
/// must have an eigenvalue below -tol.
pub fn verify_matrix_witness(f: &PetzFunction, w: &Witness, tol: f64) -> bool {
    match w {
        Witness::MatrixPair { dim, a, b, .. } => {
            let a = hermitian_from_entries(*dim, a);
            let b = hermitian_from_entries(*dim, b);
            let gap = &b - &a;
            if min_eigenvalue(&gap) < -1e-12 {
                return false;
            }
            let diff = matrix_function(f, &b) - matrix_function(f, &a);
            min_eigenvalue(&diff) < -tol
        }
        _ => false,
    }
}

// ---------------------------------------------------------------------------
// Metric monotonicity under channels
// ---------------------------------------------------------------------------

/// Monte-Carlo check of g_{phi(rho)}(phi(A), phi(A)) <= g_rho(A, A) over
/// random (state, tangent, channel) triples. Nearly pure images are
/// resampled and counted in `skipped`.
pub fn metric_monotonicity_test(
    f: &PetzFunction,
    samples: u64,
    seed: u64,
    tol: f64,
    clean_verdict: Verdict,
) -> Result<MonotonicityReport> {
    if clean_verdict == Verdict::Violation {
        return Err(Error::DomainError(
            "clean verdict must be pass or inconclusive".into(),
        ));
    }
    let mut witnesses = Vec::new();
    let mut skipped = 0u64;
    for index in 0..samples {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(index);
        let mut found = None;
        for _attempt in 0..100 {
            let bloch = random_bloch(&mut rng, 0.98);
            let rho = density_from_bloch(bloch).expect("sampled inside the ball");
            let tangent = random_tangent(&mut rng);
            let channel = random_channel_from(&mut rng);
            let image = channel.apply(&rho).expect("channel output is a state");
            if image.w() > 1.0 - 1e-6 {
                skipped += 1;
                continue;
            }
            let rhs = cm_metric_value(f, &rho, &tangent, &tangent)?;
            let mapped = channel.apply_tangent(&tangent);
            let lhs = cm_metric_value(f, &image, &mapped, &mapped)?;
            found = Some((bloch, tangent, channel, lhs, rhs));
            break;
        }
        let Some((bloch, tangent, channel, lhs, rhs)) = found else {
            skipped += 1;
            continue;
        };
        if lhs - rhs > tol {
            let t = tangent.matrix();
            witnesses.push(Witness::ChannelTriple {
                sample_index: index,
                bloch: bloch.as_array(),
                tangent: [t[(0, 1)].re, -t[(0, 1)].im, t[(0, 0)].re],
                kraus: channel
                    .kraus()
                    .iter()
                    .map(|k| k.iter().map(|z| [z.re, z.im]).collect())
                    .collect(),
                lhs,
                rhs,
            });
            let report = MonotonicityReport {
                function: f.name(),
                params: f.params_json(),
                test: "cptp".into(),
                verdict: Verdict::Violation,
                scope: "sample-limited".into(),
                witnesses,
                samples: index + 1,
                seed,
                tolerance: tol,
                skipped,
            };
            report.check_consistency();
            return Ok(report);
        }
    }
    Ok(MonotonicityReport {
        function: f.name(),
        params: f.params_json(),
        test: "cptp".into(),
        verdict: clean_verdict,
        scope: "sample-limited".into(),
        witnesses,
        samples,
        seed,
        tolerance: tol,
        skipped,
    })
}

/// Replay a channel-triple witness from its sample index.
pub fn verify_channel_witness(f: &PetzFunction, seed: u64, w: &Witness, tol: f64) -> bool {
    match w {
        Witness::ChannelTriple {
            sample_index,
            lhs,
            rhs,
            ..
        } => {
            let again = metric_monotonicity_test(f, sample_index + 1, seed, tol, Verdict::Pass);
            match again {
                Ok(rep) if rep.verdict == Verdict::Violation => match &rep.witnesses[0] {
                    Witness::ChannelTriple {
                        sample_index: i2,
                        lhs: l2,
                        rhs: r2,
                        ..
                    } => i2 == sample_index && l2 == lhs && r2 == rhs,
                    _ => false,
                },
                _ => false,
            }
        }
        _ => false,
    }
}
