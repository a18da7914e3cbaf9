//! The acceptance suite: every end-to-end claim the toolkit makes, runnable
//! as one deterministic battery. Each criterion returns its worst observed
//! value against the pinned threshold; the CLI `verify-all` command and the
//! `acceptance` integration test both drive this module.

use nalgebra::Matrix2;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::geometry::{
    cm_metric_value, conformal_factor, divide_conformal, extract_petz_function,
    fisher_from_divergence, fisher_tomographic_tensor, petz_metric, pullback_metric,
    tsallis_metric, von_neumann_metric,
};
use crate::monotone::{
    loewner_scan, matrix_monotonicity_test, metric_monotonicity_test, verify_matrix_witness,
    Region, Verdict, CPTP_TOL, LOEWNER_TOL, MATRIX_TOL,
};
use crate::numeric::{linspace, logspace};
use crate::ode::{solve_ode, solve_separable_power, verify_solution};
use crate::petz::PetzFunction;
use crate::qubit::{
    density_from_bloch, random_bloch, rotated_pauli_basis, sigma0, QubitDensity, TangentVector,
    C64, M2,
};
use crate::tomography::{exponential_scheme, Quorum};

/// Seed pinning the exponential-scheme channel search in criterion 15, kept
/// fixed so its verdict is reproducible independent of the suite seed.
pub const EXP_SEARCH_SEED: u64 = 7_654_321;

#[derive(Debug, Clone)]
pub struct CriterionResult {
    pub id: usize,
    pub name: &'static str,
    pub passed: bool,
    /// Worst observed value (interpretation per criterion, usually an error).
    pub observed: f64,
    pub threshold: f64,
    pub detail: String,
}

impl CriterionResult {
    fn new(id: usize, name: &'static str, observed: f64, threshold: f64) -> Self {
        Self {
            id,
            name,
            passed: observed < threshold,
            observed,
            threshold,
            detail: String::new(),
        }
    }

    fn with_detail(mut self, detail: impl Into<String>) -> Self {
        self.detail = detail.into();
        self
    }

    fn fail(id: usize, name: &'static str, detail: impl Into<String>) -> Self {
        Self {
            id,
            name,
            passed: false,
            observed: f64::NAN,
            threshold: 0.0,
            detail: detail.into(),
        }
    }

    pub fn line(&self) -> String {
        format!(
            "[{}] {:2}. {:<28} observed {:>12.3e}  threshold {:>8.1e}  {}",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            self.observed,
            self.threshold,
            self.detail
        )
    }
}

/// The symmetric, normalized catalog members that generate canonical
/// Petz-form metrics (the asymmetric power functions and the t^2 control sit
/// outside the superoperator correspondence).
fn symmetric_catalog() -> Vec<PetzFunction> {
    let mut v = vec![PetzFunction::VonNeumann, PetzFunction::Power { a: 0.25 }];
    for q in [0.1, 0.3, 0.5, 0.7, 0.9] {
        v.push(PetzFunction::Tsallis { q });
    }
    for beta in [1.0, 2.0, 5.0] {
        v.push(PetzFunction::ExpScheme {
            beta,
            canonical: true,
        });
    }
    v
}

// ---------------------------------------------------------------------------
// 1. Tomographic round trip
// ---------------------------------------------------------------------------

pub fn tomographic_round_trip(seed: u64) -> CriterionResult {
    let quorum = Quorum::standard();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst: f64 = 0.0;
    for _ in 0..10_000 {
        let y = random_bloch(&mut rng, 1.0);
        let rho = match density_from_bloch(y) {
            Ok(r) => r,
            Err(e) => return CriterionResult::fail(1, "tomographic-round-trip", e.to_string()),
        };
        let t = quorum.tomograms(&rho);
        let back = match quorum.reconstruct_bloch(&t) {
            Ok(b) => b,
            Err(e) => return CriterionResult::fail(1, "tomographic-round-trip", e.to_string()),
        };
        for (a, b) in back.as_array().into_iter().zip(y.as_array()) {
            worst = worst.max((a - b).abs());
        }
    }
    CriterionResult::new(1, "tomographic-round-trip", worst, 1e-12)
        .with_detail("10^4 random states, standard quorum")
}

// ---------------------------------------------------------------------------
// 2. Petz/Tsallis consistency
// ---------------------------------------------------------------------------

pub fn petz_consistency(_seed: u64) -> CriterionResult {
    let ws = linspace(-0.99, 0.99, 199);
    let mut worst: f64 = 0.0;
    for q in [0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9] {
        let direct = match tsallis_metric(q) {
            Ok(g) => g,
            Err(e) => return CriterionResult::fail(2, "petz-consistency", e.to_string()),
        };
        let via_petz = match petz_metric(&PetzFunction::Tsallis { q }) {
            Ok(g) => g,
            Err(e) => return CriterionResult::fail(2, "petz-consistency", e.to_string()),
        };
        for &w in &ws {
            worst = worst.max((direct.tangential(w) - via_petz.tangential(w)).abs());
            worst = worst.max((direct.radial(w) - via_petz.radial(w)).abs());
        }
    }
    CriterionResult::new(2, "petz-consistency", worst, 1e-10)
        .with_detail("q in {0.1..0.9}, 199 w-points")
}

// ---------------------------------------------------------------------------
// 3. Superoperator reproduction
// ---------------------------------------------------------------------------

pub fn superoperator_reproduction(_seed: u64) -> CriterionResult {
    let mut worst: f64 = 0.0;
    for f in symmetric_catalog() {
        let g = match petz_metric(&f) {
            Ok(g) => g,
            Err(e) => return CriterionResult::fail(3, "superoperator", e.to_string()),
        };
        for &w in &[0.1, 0.3, 0.5, 0.7, 0.9] {
            let (theta, phi) = (0.8, 2.3);
            let rho = QubitDensity::from_polar(w, theta, phi).expect("valid polar state");
            let (sw, st, _) = rotated_pauli_basis(theta, phi);
            let d_w = TangentVector::new(sw * C64::new(0.5, 0.0)).expect("radial tangent");
            let d_t = TangentVector::new(st * C64::new(w / 2.0, 0.0)).expect("polar tangent");
            match cm_metric_value(&f, &rho, &d_w, &d_w) {
                Ok(v) => worst = worst.max((v - 1.0 / (1.0 - w * w)).abs()),
                Err(e) => return CriterionResult::fail(3, "superoperator", e.to_string()),
            }
            match cm_metric_value(&f, &rho, &d_t, &d_t) {
                Ok(v) => worst = worst.max((v - g.tangential(w)).abs()),
                Err(e) => return CriterionResult::fail(3, "superoperator", e.to_string()),
            }
        }
    }
    CriterionResult::new(3, "superoperator", worst, 1e-10)
        .with_detail("coordinate tangents, symmetric catalog")
}

// ---------------------------------------------------------------------------
// 4. q -> 1 limit
// ---------------------------------------------------------------------------

pub fn q_limit(_seed: u64) -> CriterionResult {
    let eps = 1e-4;
    let lo = match tsallis_metric(1.0 - eps) {
        Ok(g) => g,
        Err(e) => return CriterionResult::fail(4, "q-limit", e.to_string()),
    };
    let hi = match tsallis_metric(1.0 + eps) {
        Ok(g) => g,
        Err(e) => return CriterionResult::fail(4, "q-limit", e.to_string()),
    };
    let vn = von_neumann_metric();
    let mut worst: f64 = 0.0;
    for &w in linspace(0.05, 0.95, 19).iter() {
        let extrap = 0.5 * (lo.tangential(w) + hi.tangential(w));
        worst = worst.max((extrap - vn.tangential(w)).abs());
    }
    CriterionResult::new(4, "q-limit", worst, 1e-6)
        .with_detail("two-sided extrapolation at q = 1 +- 1e-4")
}

// ---------------------------------------------------------------------------
// 5. Exponential scheme closed form (independent spectral oracle)
// ---------------------------------------------------------------------------

/// Matrix exponential by scaling-and-squaring with a Taylor kernel; kept free
/// of the eigendecomposition-based paths it cross-checks.
fn matrix_exp_oracle(m: &M2) -> M2 {
    let norm = m.iter().map(|z| z.norm()).fold(0.0, f64::max) * 2.0;
    let squarings = if norm > 0.5 {
        (norm / 0.5).log2().ceil() as u32
    } else {
        0
    };
    let scaled = m * C64::new(1.0 / 2f64.powi(squarings as i32), 0.0);
    let mut term: M2 = Matrix2::identity();
    let mut sum: M2 = Matrix2::identity();
    for k in 1..=24 {
        term = term * scaled * C64::new(1.0 / k as f64, 0.0);
        sum += term;
    }
    let mut out = sum;
    for _ in 0..squarings {
        out = out * out;
    }
    out
}

pub fn exp_scheme_closed_form(_seed: u64) -> CriterionResult {
    let mut worst: f64 = 0.0;
    let betas = linspace(0.5, 4.0, 20);
    let ws = linspace(-0.9, 0.9, 19);
    for &beta in &betas {
        let map = match exponential_scheme(beta) {
            Ok(m) => m,
            Err(e) => return CriterionResult::fail(5, "exp-scheme-closed-form", e.to_string()),
        };
        for &w in &ws {
            for &(theta, phi) in &[(0.7, 1.3), (2.1, 4.9)] {
                let (sw, _, _) = rotated_pauli_basis(theta, phi);
                let rho = (sigma0() + sw * C64::new(w, 0.0)) * C64::new(0.5, 0.0);
                let e = matrix_exp_oracle(&(rho * C64::new(-beta, 0.0)));
                let normalized = e * C64::new(1.0 / e.trace().re, 0.0);
                let wt_oracle = (normalized * sw).trace().re;
                let closed = -(beta * w / 2.0).tanh();
                worst = worst.max((wt_oracle - closed).abs());
                worst = worst.max((map.value(w) - closed).abs());
            }
        }
    }
    CriterionResult::new(5, "exp-scheme-closed-form", worst, 1e-12)
        .with_detail("spectral oracle on a 20 x 19 (beta, w) grid")
}

// ---------------------------------------------------------------------------
// 6. Extracted function from the exponential pipeline
// ---------------------------------------------------------------------------

pub fn extracted_h(_seed: u64) -> CriterionResult {
    let mut worst: f64 = 0.0;
    let mut worst_ratio: f64 = 0.0;
    for beta in [1.0, 2.5] {
        let map = match exponential_scheme(beta) {
            Ok(m) => m,
            Err(e) => return CriterionResult::fail(6, "extracted-h", e.to_string()),
        };
        let pulled = pullback_metric(&von_neumann_metric(), &map);
        let canonical = divide_conformal(&pulled, &map);
        let h = match extract_petz_function(&canonical) {
            Ok(h) => h,
            Err(e) => return CriterionResult::fail(6, "extracted-h", e.to_string()),
        };
        for &w in linspace(0.05, 0.95, 19).iter() {
            let t = (1.0 - w) / (1.0 + w);
            let expect = beta * w * (1.0 - w) / (beta * w).sinh();
            let got = h.eval(t);
            worst = worst.max((got - expect).abs());
            // the quarter-normalized form differs by exactly 4, flat in w
            let quarter = expect / 4.0;
            worst_ratio = worst_ratio.max((got / quarter - 4.0).abs());
        }
    }
    let result = CriterionResult::new(6, "extracted-h", worst.max(worst_ratio / 4.0), 1e-9);
    result.with_detail(format!(
        "value error {worst:.3e}, ratio flatness {worst_ratio:.3e}"
    ))
}

// ---------------------------------------------------------------------------
// 7. Symmetry residuals
// ---------------------------------------------------------------------------

pub fn symmetry(_seed: u64) -> CriterionResult {
    let ts = logspace(1e-3, 1e3, 241);
    let mut fs = vec![PetzFunction::VonNeumann];
    for q in [0.1, 0.3, 0.5, 0.7, 0.9] {
        fs.push(PetzFunction::Tsallis { q });
    }
    for beta in [0.5, 2.0, 5.0] {
        fs.push(PetzFunction::ExpScheme {
            beta,
            canonical: true,
        });
    }
    let mut worst: f64 = 0.0;
    for f in &fs {
        for &t in &ts {
            worst = worst.max(f.symmetry_residual(t).abs());
        }
    }
    CriterionResult::new(7, "symmetry", worst, 1e-12)
        .with_detail("f(t) - t f(1/t) on t in [1e-3, 1e3]")
}

// ---------------------------------------------------------------------------
// 8. Upper-half-plane verdicts
// ---------------------------------------------------------------------------

pub fn loewner_verdicts(_seed: u64) -> CriterionResult {
    // witness for the exponential-scheme function near z = -1
    let h = PetzFunction::ExpScheme {
        beta: 2.0,
        canonical: true,
    };
    let box_region = match Region::new(-1.2, -0.8, 0.0, 0.2) {
        Ok(r) => r,
        Err(e) => return CriterionResult::fail(8, "loewner-verdicts", e.to_string()),
    };
    let witness_report = match loewner_scan(&h, box_region, 81, 80, LOEWNER_TOL) {
        Ok(r) => r,
        Err(e) => return CriterionResult::fail(8, "loewner-verdicts", e.to_string()),
    };
    if witness_report.verdict != Verdict::Violation {
        return CriterionResult::fail(
            8,
            "loewner-verdicts",
            "no witness found near z = -1 for the exponential-scheme function",
        );
    }

    // clean scans for the monotone members
    let wide = match Region::new(-10.0, 10.0, 0.0, 2.0) {
        Ok(r) => r,
        Err(e) => return CriterionResult::fail(8, "loewner-verdicts", e.to_string()),
    };
    let mut clean = vec![PetzFunction::VonNeumann];
    for q in [0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9] {
        clean.push(PetzFunction::Tsallis { q });
    }
    for a in [0.0, 0.25, 0.5] {
        clean.push(PetzFunction::Power { a });
    }
    let mut worst: f64 = 0.0;
    for f in &clean {
        let report = match loewner_scan(f, wide, 400, 200, LOEWNER_TOL) {
            Ok(r) => r,
            Err(e) => return CriterionResult::fail(8, "loewner-verdicts", e.to_string()),
        };
        if report.verdict != Verdict::Pass {
            return CriterionResult::fail(
                8,
                "loewner-verdicts",
                format!("unexpected witness for {}", f.name()),
            );
        }
        worst = worst.max(report.witnesses.len() as f64);
    }
    CriterionResult::new(8, "loewner-verdicts", worst, 0.5).with_detail(format!(
        "witness Im = {:.3e} in the box; 13 clean scans at 400 x 200",
        match &witness_report.witnesses[0] {
            crate::monotone::Witness::ComplexPoint { value_im, .. } => *value_im,
            _ => f64::NAN,
        }
    ))
}

// ---------------------------------------------------------------------------
// 9. Matrix falsifier controls
// ---------------------------------------------------------------------------

pub fn matrix_falsifier(seed: u64) -> CriterionResult {
    let square = PetzFunction::SquareControl;
    let report = match matrix_monotonicity_test(&square, 2, 1000, seed, MATRIX_TOL, Verdict::Pass) {
        Ok(r) => r,
        Err(e) => return CriterionResult::fail(9, "matrix-falsifier", e.to_string()),
    };
    if report.verdict != Verdict::Violation {
        return CriterionResult::fail(
            9,
            "matrix-falsifier",
            "t^2 violation not found within 10^3 samples",
        );
    }
    for w in &report.witnesses {
        if !verify_matrix_witness(&square, w, MATRIX_TOL) {
            return CriterionResult::fail(9, "matrix-falsifier", "witness does not replay");
        }
    }
    // the classic pinned pair re-verifies: B - A = diag(1, 0) but
    // B^2 - A^2 has a negative eigenvalue
    let lambda = {
        let a = Matrix2::new(
            C64::new(1.0, 0.0),
            C64::new(1.0, 0.0),
            C64::new(1.0, 0.0),
            C64::new(1.0, 0.0),
        );
        let b = Matrix2::new(
            C64::new(2.0, 0.0),
            C64::new(1.0, 0.0),
            C64::new(1.0, 0.0),
            C64::new(1.0, 0.0),
        );
        let d = b * b - a * a;
        let tr = d.trace().re;
        let det = (d[(0, 0)] * d[(1, 1)] - d[(0, 1)] * d[(1, 0)]).re;
        (tr - (tr * tr - 4.0 * det).sqrt()) / 2.0
    };
    if (lambda - (3.0 - 13.0f64.sqrt()) / 2.0).abs() > 1e-12 {
        return CriterionResult::fail(9, "matrix-falsifier", "pinned witness eigenvalue drifted");
    }

    let vn = PetzFunction::VonNeumann;
    let clean = match matrix_monotonicity_test(&vn, 2, 10_000, seed, MATRIX_TOL, Verdict::Pass) {
        Ok(r) => r,
        Err(e) => return CriterionResult::fail(9, "matrix-falsifier", e.to_string()),
    };
    if clean.verdict != Verdict::Pass {
        return CriterionResult::fail(9, "matrix-falsifier", "von Neumann member failed 10^4");
    }
    CriterionResult::new(9, "matrix-falsifier", 0.0, 0.5).with_detail(format!(
        "t^2 witness at sample {}, pinned pair eigenvalue {:.6}",
        report.samples, lambda
    ))
}

// ---------------------------------------------------------------------------
// 10-12. Scheme equation cases and factorization
// ---------------------------------------------------------------------------

pub fn ode_closed_case(_seed: u64) -> CriterionResult {
    let f = PetzFunction::Power { a: 0.5 };
    let h = PetzFunction::Power { a: 0.0 };
    let sol = match solve_ode(&f, &h, 0.05, -0.05, -1, (0.05, 0.95)) {
        Ok(s) => s,
        Err(e) => return CriterionResult::fail(10, "ode-closed-case", e.to_string()),
    };
    let worst_neg = sol
        .points
        .iter()
        .map(|p| (p.wt + p.w).abs())
        .fold(0.0f64, f64::max);
    let quad = match solve_separable_power(0.5, 0.0, 0.05, -0.05, (0.05, 0.95), 61) {
        Ok(s) => s,
        Err(e) => return CriterionResult::fail(10, "ode-closed-case", e.to_string()),
    };
    let map = sol.to_spectral_map();
    let worst_agree = quad
        .points
        .iter()
        .map(|p| (p.wt - map.value(p.w)).abs())
        .fold(0.0f64, f64::max);
    if worst_agree >= 1e-7 {
        return CriterionResult::fail(
            10,
            "ode-closed-case",
            format!("separable quadrature disagrees by {worst_agree:.3e}"),
        );
    }
    CriterionResult::new(10, "ode-closed-case", worst_neg, 1e-8).with_detail(format!(
        "negation map recovered; quadrature agreement {worst_agree:.3e}"
    ))
}

pub fn ode_cross_validation(_seed: u64) -> CriterionResult {
    let beta = 2.0;
    let f = PetzFunction::VonNeumann;
    let h = PetzFunction::ExpScheme {
        beta,
        canonical: true,
    };
    let w0 = 0.1;
    let wt0 = -(beta * w0 / 2.0).tanh();
    let sol = match solve_ode(&f, &h, w0, wt0, -1, (0.1, 0.9)) {
        Ok(s) => s,
        Err(e) => return CriterionResult::fail(11, "ode-cross-validation", e.to_string()),
    };
    let worst = sol
        .points
        .iter()
        .map(|p| (p.wt + (beta * p.w / 2.0).tanh()).abs())
        .fold(0.0f64, f64::max);
    CriterionResult::new(11, "ode-cross-validation", worst, 1e-7)
        .with_detail("closed exponential scheme recovered from the equation")
}

pub fn factorization(_seed: u64) -> CriterionResult {
    let mut worst: f64 = 0.0;
    // case from criterion 10
    let f = PetzFunction::Power { a: 0.5 };
    let h = PetzFunction::Power { a: 0.0 };
    match solve_ode(&f, &h, 0.05, -0.05, -1, (0.05, 0.95))
        .and_then(|sol| verify_solution(&sol, &f, &h))
    {
        Ok(rec) => {
            worst = worst
                .max(rec.ode_residual_max)
                .max(rec.factorization_residual_max)
        }
        Err(e) => return CriterionResult::fail(12, "factorization", e.to_string()),
    }
    // case from criterion 11
    let beta = 2.0;
    let f = PetzFunction::VonNeumann;
    let h = PetzFunction::ExpScheme {
        beta,
        canonical: true,
    };
    let wt0 = -(beta * 0.1 / 2.0).tanh();
    match solve_ode(&f, &h, 0.1, wt0, -1, (0.1, 0.9)).and_then(|sol| verify_solution(&sol, &f, &h))
    {
        Ok(rec) => {
            worst = worst
                .max(rec.ode_residual_max)
                .max(rec.factorization_residual_max)
        }
        Err(e) => return CriterionResult::fail(12, "factorization", e.to_string()),
    }
    CriterionResult::new(12, "factorization", worst, 1e-8)
        .with_detail("pullback equals conformal factor times target, both cases")
}

// ---------------------------------------------------------------------------
// 13. Finite-difference Fisher coefficient
// ---------------------------------------------------------------------------

pub fn hessian_q_independence(_seed: u64) -> CriterionResult {
    let mut worst: f64 = 0.0;
    for &p in &[0.2, 0.5, 0.8] {
        let expect = 1.0 / (p * (1.0 - p));
        let mut values = Vec::new();
        for &q in &[0.2, 0.5, 0.8] {
            match fisher_from_divergence([p, 1.0 - p], q) {
                Ok(v) => {
                    worst = worst.max((v - expect).abs() / expect);
                    values.push(v);
                }
                Err(e) => {
                    return CriterionResult::fail(13, "hessian-q-independence", e.to_string())
                }
            }
        }
        let hi = values.iter().cloned().fold(f64::MIN, f64::max);
        let lo = values.iter().cloned().fold(f64::MAX, f64::min);
        worst = worst.max((hi - lo) / expect);
    }
    CriterionResult::new(13, "hessian-q-independence", worst, 1e-5)
        .with_detail("1/(p(1-p)) recovered, spread over q below 1e-5")
}

// ---------------------------------------------------------------------------
// 14. Conformal transformation of the tomographic tensor
// ---------------------------------------------------------------------------

pub fn fisher_conformal(_seed: u64) -> CriterionResult {
    let beta = 1.5;
    let map = match exponential_scheme(beta) {
        Ok(m) => m,
        Err(e) => return CriterionResult::fail(14, "fisher-conformal", e.to_string()),
    };
    let fisher = fisher_tomographic_tensor();
    let pulled = pullback_metric(&fisher, &map);
    let mut worst: f64 = 0.0;
    for &w in linspace(-0.9, 0.9, 37).iter() {
        let lhs = pulled.radial(w);
        let a = match conformal_factor(&map, w) {
            Ok(a) => a,
            Err(e) => return CriterionResult::fail(14, "fisher-conformal", e.to_string()),
        };
        worst = worst.max((lhs - a * fisher.radial(w)).abs());
        // closed form of the factor for the exponential scheme
        let ch = (beta * w / 2.0).cosh();
        let closed = beta * beta * (1.0 - w * w) / (4.0 * ch * ch);
        worst = worst.max((a - closed).abs());
    }
    CriterionResult::new(14, "fisher-conformal", worst, 1e-12)
        .with_detail("pullback equals conformal factor times tensor")
}

// ---------------------------------------------------------------------------
// 15. Channel Monte Carlo
// ---------------------------------------------------------------------------

pub fn cptp_monte_carlo(seed: u64) -> CriterionResult {
    let vn = PetzFunction::VonNeumann;
    let clean = match metric_monotonicity_test(&vn, 10_000, seed, CPTP_TOL, Verdict::Pass) {
        Ok(r) => r,
        Err(e) => return CriterionResult::fail(15, "cptp-monte-carlo", e.to_string()),
    };
    if clean.verdict != Verdict::Pass {
        return CriterionResult::fail(
            15,
            "cptp-monte-carlo",
            "von Neumann member violated channel monotonicity",
        );
    }
    // the non-monotone candidate: searched under a pinned seed; the verdict
    // (violation or inconclusive) must reproduce run to run
    let h = PetzFunction::ExpScheme {
        beta: 5.0,
        canonical: true,
    };
    let r1 = match metric_monotonicity_test(
        &h,
        100_000,
        EXP_SEARCH_SEED,
        CPTP_TOL,
        Verdict::Inconclusive,
    ) {
        Ok(r) => r,
        Err(e) => return CriterionResult::fail(15, "cptp-monte-carlo", e.to_string()),
    };
    let r2 = match metric_monotonicity_test(
        &h,
        100_000,
        EXP_SEARCH_SEED,
        CPTP_TOL,
        Verdict::Inconclusive,
    ) {
        Ok(r) => r,
        Err(e) => return CriterionResult::fail(15, "cptp-monte-carlo", e.to_string()),
    };
    let j1 = serde_json::to_string(&r1).unwrap_or_default();
    let j2 = serde_json::to_string(&r2).unwrap_or_default();
    if j1 != j2 {
        return CriterionResult::fail(15, "cptp-monte-carlo", "pinned search is not deterministic");
    }
    if r1.verdict == Verdict::Violation {
        for w in &r1.witnesses {
            if !crate::monotone::verify_channel_witness(&h, EXP_SEARCH_SEED, w, CPTP_TOL) {
                return CriterionResult::fail(
                    15,
                    "cptp-monte-carlo",
                    "channel witness does not replay",
                );
            }
        }
    }
    CriterionResult::new(15, "cptp-monte-carlo", 0.0, 0.5).with_detail(format!(
        "von Neumann clean over 10^4; exp-scheme search verdict: {:?}",
        r1.verdict
    ))
}

// ---------------------------------------------------------------------------
// Suite driver
// ---------------------------------------------------------------------------

pub type CriterionFn = fn(u64) -> CriterionResult;

pub const CRITERIA: &[(&str, CriterionFn)] = &[
    ("tomographic-round-trip", tomographic_round_trip),
    ("petz-consistency", petz_consistency),
    ("superoperator", superoperator_reproduction),
    ("q-limit", q_limit),
    ("exp-scheme-closed-form", exp_scheme_closed_form),
    ("extracted-h", extracted_h),
    ("symmetry", symmetry),
    ("loewner-verdicts", loewner_verdicts),
    ("matrix-falsifier", matrix_falsifier),
    ("ode-closed-case", ode_closed_case),
    ("ode-cross-validation", ode_cross_validation),
    ("factorization", factorization),
    ("hessian-q-independence", hessian_q_independence),
    ("fisher-conformal", fisher_conformal),
    ("cptp-monte-carlo", cptp_monte_carlo),
];

pub fn run_named(name: &str, seed: u64) -> Option<CriterionResult> {
    CRITERIA
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(_, f)| f(seed))
}

pub fn run_all(seed: u64) -> Vec<CriterionResult> {
    CRITERIA.iter().map(|(_, f)| f(seed)).collect()
}
