//! The first-order second-degree scheme equation connecting two Petz-form
//! metrics: (dw~/dw)^2 = (w~/w)^2 ((1-w~)/(1-w)) h(t_w) / f(t_w~) with
//! t_x = (1-x)/(1+x). Solutions are tomographic scheme maps; they are
//! produced numerically (adaptive embedded Runge-Kutta), by separable
//! quadrature for the power family, and verified by residual and by the
//! conformal pullback factorization.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{conformal_factor, petz_metric, pullback_metric};
use crate::numeric::{deriv_central4, quad_gk, Dopri5, HermiteCurve, RkNode};
use crate::petz::PetzFunction;
use crate::tomography::SpectralMap;

/// Default residual bound advertised by the solvers.
pub const RESIDUAL_BOUND: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OdeSource {
    Numeric,
    SeparableQuadrature,
    ClosedForm,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct OdePoint {
    pub w: f64,
    pub wt: f64,
    pub dwt: f64,
    pub residual: f64,
}

/// A solved scheme map on a grid, with its branch sign and the worst defect
/// of the squared-derivative equation along the grid.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OdeSolution {
    pub points: Vec<OdePoint>,
    pub branch: i8,
    pub residual_max: f64,
    pub source: OdeSource,
}

impl OdeSolution {
    pub fn grid(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.points.iter().map(|p| (p.w, p.wt))
    }

    pub fn w_min(&self) -> f64 {
        self.points.first().map(|p| p.w).unwrap_or(f64::NAN)
    }

    pub fn w_max(&self) -> f64 {
        self.points.last().map(|p| p.w).unwrap_or(f64::NAN)
    }

    fn curve(&self) -> HermiteCurve {
        HermiteCurve::new(
            self.points
                .iter()
                .map(|p| RkNode {
                    x: p.w,
                    y: p.wt,
                    dy: p.dwt,
                })
                .collect(),
        )
    }

    pub fn value(&self, w: f64) -> f64 {
        self.curve().value(w)
    }

    /// Expose the solution as a scheme map (dense interpolation of the grid).
    pub fn to_spectral_map(&self) -> SpectralMap {
        let curve = Arc::new(self.curve());
        let c1 = curve.clone();
        let c2 = curve;
        SpectralMap::from_parts(
            "ode-solution",
            vec![],
            Arc::new(move |w| c1.value(w)),
            Arc::new(move |w| c2.derivative(w)),
        )
    }
}

/// Right-hand side of the squared-derivative equation.
pub fn ode_rhs(f: &PetzFunction, h: &PetzFunction, w: f64, wt: f64) -> Result<f64> {
    if w == 0.0 {
        return Err(Error::RemovableSingularity);
    }
    if w.abs() >= 1.0 || wt.abs() >= 1.0 {
        return Err(Error::DomainError(format!(
            "(w, w~) = ({w}, {wt}) outside (-1, 1)"
        )));
    }
    let t_w = (1.0 - w) / (1.0 + w);
    let t_wt = (1.0 - wt) / (1.0 + wt);
    let hv = h.eval(t_w);
    let fv = f.eval(t_wt);
    if !hv.is_finite() || hv <= 0.0 {
        return Err(Error::InvalidPetzFunction(format!(
            "{} nonpositive at t = {t_w}",
            h.name()
        )));
    }
    if !fv.is_finite() || fv <= 0.0 {
        return Err(Error::InvalidPetzFunction(format!(
            "{} nonpositive at t = {t_wt}",
            f.name()
        )));
    }
    let ratio = wt / w;
    Ok(ratio * ratio * ((1.0 - wt) / (1.0 - w)) * hv / fv)
}

#[derive(Debug, Clone, Copy)]
pub struct OdeOptions {
    pub rtol: f64,
    pub atol: f64,
    pub residual_bound: f64,
}

impl Default for OdeOptions {
    fn default() -> Self {
        Self {
            rtol: 1e-10,
            atol: 1e-12,
            residual_bound: RESIDUAL_BOUND,
        }
    }
}

/// Defect of the squared-derivative equation measured with a derivative that
/// is independent of the integrator: a five-point finite difference of the
/// dense output.
fn grid_residuals(nodes: &[RkNode], f: &PetzFunction, h: &PetzFunction) -> Result<(Vec<f64>, f64)> {
    let curve = HermiteCurve::new(nodes.to_vec());
    let (lo, hi) = (curve.x_min(), curve.x_max());
    let delta = 1e-5;
    let mut out = Vec::with_capacity(nodes.len());
    let mut worst: f64 = 0.0;
    for n in nodes {
        let xc = n.x.clamp(lo + 2.0 * delta, hi - 2.0 * delta);
        let d_hat = deriv_central4(|x| curve.value(x), xc, delta);
        let y_hat = curve.value(xc).clamp(-1.0 + 1e-12, 1.0 - 1e-12);
        let rhs = ode_rhs(f, h, xc, y_hat)?;
        let r = (d_hat * d_hat - rhs).abs();
        worst = worst.max(r);
        out.push(r);
    }
    Ok((out, worst))
}

fn solution_from_nodes(
    mut nodes: Vec<RkNode>,
    branch: i8,
    source: OdeSource,
    f: &PetzFunction,
    h: &PetzFunction,
) -> Result<OdeSolution> {
    if nodes.len() >= 2 && nodes[0].x > nodes[nodes.len() - 1].x {
        nodes.reverse();
    }
    // a solution grid is a scheme map, so its image must stay strictly
    // monotone; a sign change means the square-root branch broke down
    let mut dir = 0.0f64;
    for pair in nodes.windows(2) {
        let d: f64 = pair[1].y - pair[0].y;
        if d == 0.0 || (dir != 0.0 && d.signum() != dir) {
            return Err(Error::NonInvertibleScheme);
        }
        dir = d.signum();
    }
    let (residuals, residual_max) = grid_residuals(&nodes, f, h)?;
    let points = nodes
        .iter()
        .zip(residuals)
        .map(|(n, residual)| OdePoint {
            w: n.x,
            wt: n.y,
            dwt: n.dy,
            residual,
        })
        .collect();
    Ok(OdeSolution {
        points,
        branch,
        residual_max,
        source,
    })
}

/// Integrate the scheme equation dw~/dw = branch * sqrt(rhs) from
/// (w0, w~0) across `range`. The branch sign is fixed for the whole solve;
/// an interior zero of the right-hand side stops it rather than silently
/// switching roots.
pub fn solve_ode(
    f: &PetzFunction,
    h: &PetzFunction,
    w0: f64,
    wt0: f64,
    branch: i8,
    range: (f64, f64),
) -> Result<OdeSolution> {
    solve_ode_with(f, h, w0, wt0, branch, range, OdeOptions::default())
}

pub fn solve_ode_with(
    f: &PetzFunction,
    h: &PetzFunction,
    w0: f64,
    wt0: f64,
    branch: i8,
    range: (f64, f64),
    opts: OdeOptions,
) -> Result<OdeSolution> {
    if branch != 1 && branch != -1 {
        return Err(Error::DomainError(format!(
            "branch must be +-1, got {branch}"
        )));
    }
    if w0 == 0.0 {
        return Err(Error::RemovableSingularity);
    }
    let (lo, hi) = range;
    if !lo.is_finite() || !hi.is_finite() || lo >= hi || w0 < lo || w0 > hi {
        return Err(Error::DomainError(format!(
            "range ({lo}, {hi}) must be ordered and contain w0 = {w0}"
        )));
    }
    if lo <= 0.0 && hi >= 0.0 {
        return Err(Error::DomainError(
            "integration range must not cross the singular point w = 0".into(),
        ));
    }
    if lo.abs() >= 1.0 || hi.abs() >= 1.0 {
        return Err(Error::DomainError("range must lie inside (-1, 1)".into()));
    }
    if wt0.abs() >= 1.0 {
        return Err(Error::DomainError(format!("|w~0| = {} >= 1", wt0.abs())));
    }

    let fb = branch as f64;
    let deriv = move |w: f64, wt: f64| -> Result<f64> {
        // trial stages may probe slightly past the boundary; clamp them onto
        // the open interval (accepted steps are guarded separately)
        let wt = wt.clamp(-1.0 + 1e-12, 1.0 - 1e-12);
        let rhs = ode_rhs(f, h, w, wt)?;
        if rhs < 0.0 {
            return Err(Error::BranchFailure {
                at_w: w,
                partial: None,
            });
        }
        Ok(fb * rhs.sqrt())
    };
    let solver = Dopri5 {
        rtol: opts.rtol,
        atol: opts.atol,
        max_step: (hi - lo) / 300.0,
    };
    let guard = |_x: f64, y: f64| y.abs() < 1.0 - 1e-9;

    let mut nodes: Vec<RkNode> = Vec::new();
    let mut stopped: Option<(bool, Option<Error>)> = None;
    if w0 > lo {
        let run = solver.integrate(deriv, w0, wt0, lo, guard);
        let mut back = run.nodes;
        back.reverse();
        nodes.extend(back);
        if run.guard_stopped || run.failure.is_some() {
            stopped = Some((run.guard_stopped, run.failure));
        }
    } else {
        nodes.push(RkNode {
            x: w0,
            y: wt0,
            dy: deriv(w0, wt0)?,
        });
    }
    if stopped.is_none() && w0 < hi {
        let run = solver.integrate(deriv, w0, wt0, hi, guard);
        nodes.extend(run.nodes.into_iter().skip(1));
        if run.guard_stopped || run.failure.is_some() {
            stopped = Some((run.guard_stopped, run.failure));
        }
    }

    if let Some((guard_stopped, failure)) = stopped {
        let at_w = nodes.last().map(|n| n.x).unwrap_or(w0);
        let partial = if nodes.len() >= 2 {
            Some(Box::new(solution_from_nodes(
                nodes,
                branch,
                OdeSource::Numeric,
                f,
                h,
            )?))
        } else {
            None
        };
        return Err(if guard_stopped {
            Error::RangeEscape {
                at_w,
                partial: partial.expect("guard stop keeps at least the seed node"),
            }
        } else {
            match failure {
                Some(Error::BranchFailure { at_w, .. }) => Error::BranchFailure { at_w, partial },
                Some(Error::StepFailure(x)) => Error::StepFailure(x),
                Some(e) => e,
                None => Error::StepFailure(at_w),
            }
        });
    }

    let sol = solution_from_nodes(nodes, branch, OdeSource::Numeric, f, h)?;
    if sol.residual_max > opts.residual_bound {
        return Err(Error::ResidualBound(sol.residual_max));
    }
    Ok(sol)
}

/// Solve the separable form of the power-family equation by quadrature:
/// both antiderivatives are integrated adaptively, constants are matched at
/// (w0, w~0), and the strictly monotone w~-side integral is inverted
/// numerically. The effective branch is sign(w~0) for w0 > 0.
pub fn solve_separable_power(
    a: f64,
    b: f64,
    w0: f64,
    wt0: f64,
    range: (f64, f64),
    grid_points: usize,
) -> Result<OdeSolution> {
    if !(0.0..=0.5).contains(&a) || !(0.0..=0.5).contains(&b) {
        return Err(Error::DomainError(format!(
            "exponents (a, b) = ({a}, {b}) must lie in [0, 1/2]"
        )));
    }
    if !(0.0 < w0 && w0 < 1.0) {
        return Err(Error::DomainError(format!("w0 = {w0} must lie in (0, 1)")));
    }
    if wt0 == 0.0 || wt0.abs() >= 1.0 {
        return Err(Error::DomainError(format!(
            "w~0 = {wt0} must lie in (-1, 0) or (0, 1)"
        )));
    }
    let (lo, hi) = range;
    if !(0.0 < lo && lo < hi && hi < 1.0) || w0 < lo || w0 > hi {
        return Err(Error::DomainError(format!(
            "range ({lo}, {hi}) must sit inside (0, 1) and contain w0"
        )));
    }
    if grid_points < 2 {
        return Err(Error::DomainError("need at least 2 grid points".into()));
    }
    // dense enough that the interpolation-based residual check stays well
    // below the advertised bound
    let grid_points = grid_points.max(((hi - lo) / 0.002).ceil() as usize + 1);

    let integrand_w = move |x: f64| 1.0 / (x * (1.0 - x).powf(0.5 - b) * (1.0 + x).powf(b));
    let integrand_wt = move |x: f64| 1.0 / (x * (1.0 - x).powf(0.5 - a) * (1.0 + x).powf(a));
    let quad_tol = 1e-13;

    // the image stays on the sign-constant side of 0 that contains w~0
    let (wt_floor, wt_ceil) = if wt0 > 0.0 {
        (1e-9, 1.0 - 1e-9)
    } else {
        (-1.0 + 1e-9, -1e-9)
    };

    let ws = crate::numeric::linspace(lo, hi, grid_points);
    let mut points: Vec<(f64, f64)> = Vec::with_capacity(ws.len());
    let mut escape = false;

    // march the target value Psi(w) and invert Phi incrementally
    let mut psi_prev_w = w0;
    let mut psi_acc = 0.0;
    let mut wt_cur = wt0;
    let mut phi_cur = 0.0;
    for &w in &ws {
        let target = psi_acc + quad_gk(&integrand_w, psi_prev_w, w, quad_tol)?;
        psi_acc = target;
        psi_prev_w = w;
        let dv = target - phi_cur;
        if dv != 0.0 {
            let dir = dv.signum() * integrand_wt(wt_cur).signum();
            let mut step = 1e-3;
            let mut x0 = wt_cur;
            let mut g0 = -dv;
            let mut bracket = None;
            for _ in 0..80 {
                let mut x1 = x0 + dir * step;
                if x1 <= wt_floor || x1 >= wt_ceil {
                    x1 = if dir > 0.0 { wt_ceil } else { wt_floor };
                }
                let g1 = g0 + quad_gk(&integrand_wt, x0, x1, quad_tol)?;
                if g0 * g1 <= 0.0 {
                    bracket = Some((x0, g0, x1, g1));
                    break;
                }
                x0 = x1;
                g0 = g1;
                step *= 2.0;
                if x1 == wt_floor || x1 == wt_ceil {
                    break;
                }
            }
            let Some((bx0, bg0, bx1, _bg1)) = bracket else {
                escape = true;
                break;
            };
            let root = crate::numeric::brent(
                |x| bg0 + quad_gk(&integrand_wt, bx0, x, quad_tol).unwrap_or(f64::NAN),
                bx0,
                bx1,
                1e-14,
            )?;
            phi_cur += quad_gk(&integrand_wt, wt_cur, root, quad_tol)?;
            wt_cur = root;
        }
        points.push((w, wt_cur));
    }

    if points.len() < 2 {
        return Err(Error::EndpointSingularity);
    }
    let branch = if wt0 > 0.0 { 1 } else { -1 };
    let f = PetzFunction::Power { a };
    let h = PetzFunction::Power { a: b };
    let nodes: Vec<RkNode> = points
        .iter()
        .map(|&(w, wt)| RkNode {
            x: w,
            y: wt,
            dy: integrand_w(w) / integrand_wt(wt),
        })
        .collect();
    let sol = solution_from_nodes(nodes, branch, OdeSource::SeparableQuadrature, &f, &h)?;
    if escape {
        let at_w = sol.w_max();
        return Err(Error::RangeEscape {
            at_w,
            partial: Box::new(sol),
        });
    }
    if sol.residual_max > RESIDUAL_BOUND {
        return Err(Error::ResidualBound(sol.residual_max));
    }
    Ok(sol)
}

/// Verification record for a solved scheme map: the worst defect of the
/// squared-derivative equation and the worst coefficient mismatch of the
/// conformal pullback factorization. Violated bounds are reported as values,
/// never raised.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VerificationRecord {
    pub ode_residual_max: f64,
    pub factorization_residual_max: f64,
    pub grid_points: usize,
}

pub fn verify_solution(
    sol: &OdeSolution,
    f: &PetzFunction,
    h: &PetzFunction,
) -> Result<VerificationRecord> {
    let nodes: Vec<RkNode> = sol
        .points
        .iter()
        .map(|p| RkNode {
            x: p.w,
            y: p.wt,
            dy: p.dwt,
        })
        .collect();
    let (_, ode_residual_max) = grid_residuals(&nodes, f, h)?;

    let map = sol.to_spectral_map();
    let g_f = petz_metric(f)?;
    let g_h = petz_metric(h)?;
    let pulled = pullback_metric(&g_f, &map);
    let mut fact_max: f64 = 0.0;
    for p in &sol.points {
        let a = conformal_factor(&map, p.w)?;
        let dr = (pulled.radial(p.w) - a * g_h.radial(p.w)).abs();
        let dt = (pulled.tangential(p.w) - a * g_h.tangential(p.w)).abs();
        fact_max = fact_max.max(dr).max(dt);
    }
    Ok(VerificationRecord {
        ode_residual_max,
        factorization_residual_max: fact_max,
        grid_points: sol.points.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rhs_closed_identities() {
        // f(t) = t, h = 1, w~ = -w gives rhs identically 1
        let f = PetzFunction::Power { a: 0.5 };
        let h = PetzFunction::Power { a: 0.0 };
        for &w in &[0.1, 0.35, 0.8] {
            let r = ode_rhs(&f, &h, w, -w).unwrap();
            assert!((r - 1.0).abs() < 1e-14, "w={w}: {r}");
        }
        // identical functions on the identity scheme
        let vn = PetzFunction::VonNeumann;
        for &w in &[0.2, 0.6] {
            let r = ode_rhs(&vn, &vn, w, w).unwrap();
            assert!((r - 1.0).abs() < 1e-14);
        }
        assert!(matches!(
            ode_rhs(&vn, &vn, 0.0, 0.3),
            Err(Error::RemovableSingularity)
        ));
    }

    #[test]
    fn exponential_scheme_satisfies_the_equation() {
        // w~ = -tanh(beta w / 2) with f = von Neumann and the canonical
        // exponential-scheme function: both sides agree pointwise
        let beta = 2.0;
        let f = PetzFunction::VonNeumann;
        let h = PetzFunction::ExpScheme {
            beta,
            canonical: true,
        };
        for k in 0..19 {
            let w = 0.05 + 0.9 * k as f64 / 18.0;
            let wt = -(beta * w / 2.0).tanh();
            let lhs = {
                let ch = (beta * w / 2.0).cosh();
                let d = -beta / (2.0 * ch * ch);
                d * d
            };
            let rhs = ode_rhs(&f, &h, w, wt).unwrap();
            assert!((lhs - rhs).abs() < 1e-10, "w={w}: {lhs} vs {rhs}");
        }
    }

    #[test]
    fn power_case_recovers_negation() {
        let f = PetzFunction::Power { a: 0.5 };
        let h = PetzFunction::Power { a: 0.0 };
        let sol = solve_ode(&f, &h, 0.05, -0.05, -1, (0.05, 0.95)).unwrap();
        let worst = sol
            .points
            .iter()
            .map(|p| (p.wt + p.w).abs())
            .fold(0.0, f64::max);
        assert!(worst < 1e-8, "max |w~ + w| = {worst}");
        assert!(sol.residual_max < RESIDUAL_BOUND);
    }

    #[test]
    fn identity_solution_for_equal_functions() {
        let vn = PetzFunction::VonNeumann;
        let sol = solve_ode(&vn, &vn, 0.1, 0.1, 1, (0.1, 0.9)).unwrap();
        let worst = sol
            .points
            .iter()
            .map(|p| (p.wt - p.w).abs())
            .fold(0.0, f64::max);
        assert!(worst < 1e-9, "max |w~ - w| = {worst}");
    }

    #[test]
    fn cross_validation_against_the_closed_scheme() {
        let beta = 2.0;
        let f = PetzFunction::VonNeumann;
        let h = PetzFunction::ExpScheme {
            beta,
            canonical: true,
        };
        let w0 = 0.1;
        let wt0 = -(beta * w0 / 2.0).tanh();
        let sol = solve_ode(&f, &h, w0, wt0, -1, (0.1, 0.9)).unwrap();
        let worst = sol
            .points
            .iter()
            .map(|p| (p.wt + (beta * p.w / 2.0).tanh()).abs())
            .fold(0.0, f64::max);
        assert!(worst < 1e-7, "max deviation {worst}");
    }

    #[test]
    fn tolerance_robustness() {
        // two very different tolerance settings agree to 1e-7
        let f = PetzFunction::VonNeumann;
        let h = PetzFunction::ExpScheme {
            beta: 2.0,
            canonical: true,
        };
        let w0 = 0.1;
        let wt0 = -(0.1f64).tanh();
        let loose = solve_ode_with(
            &f,
            &h,
            w0,
            wt0,
            -1,
            (0.1, 0.9),
            OdeOptions {
                rtol: 1e-8,
                atol: 1e-10,
                ..OdeOptions::default()
            },
        )
        .unwrap();
        let tight = solve_ode(&f, &h, w0, wt0, -1, (0.1, 0.9)).unwrap();
        let tight_map = tight.to_spectral_map();
        let worst = loose
            .points
            .iter()
            .map(|p| (p.wt - tight_map.value(p.w)).abs())
            .fold(0.0, f64::max);
        assert!(worst < 1e-7, "tolerance spread {worst}");
    }

    #[test]
    fn separable_power_matches_closed_form_and_ode() {
        // a = 1/2, b = 0: the matched solution is w~ = -w
        let sol = solve_separable_power(0.5, 0.0, 0.05, -0.05, (0.05, 0.95), 61).unwrap();
        let worst = sol
            .points
            .iter()
            .map(|p| (p.wt + p.w).abs())
            .fold(0.0, f64::max);
        assert!(worst < 1e-10, "max |w~ + w| = {worst}");

        // equal exponents with matched seed give the identity
        let sol = solve_separable_power(0.3, 0.3, 0.2, 0.2, (0.1, 0.9), 41).unwrap();
        let worst = sol
            .points
            .iter()
            .map(|p| (p.wt - p.w).abs())
            .fold(0.0, f64::max);
        assert!(worst < 1e-10);

        // generic exponents agree with the direct integration
        let quad = solve_separable_power(0.3, 0.1, 0.2, -0.2, (0.2, 0.8), 31).unwrap();
        let f = PetzFunction::Power { a: 0.3 };
        let h = PetzFunction::Power { a: 0.1 };
        let ode = solve_ode(&f, &h, 0.2, -0.2, -1, (0.2, 0.8)).unwrap();
        let map = ode.to_spectral_map();
        let worst = quad
            .points
            .iter()
            .map(|p| (p.wt - map.value(p.w)).abs())
            .fold(0.0, f64::max);
        assert!(worst < 1e-7, "method disagreement {worst}");
    }

    #[test]
    fn branch_reflection_at_the_symmetric_power_point() {
        // flipping the seed sign reflects the solution when the image-side
        // quadrature integrand is odd, which happens exactly at a = 1/4 (the
        // symmetric member t^{1/2} of the power family)
        let plus = solve_separable_power(0.25, 0.1, 0.2, 0.2, (0.2, 0.55), 33).unwrap();
        let minus = solve_separable_power(0.25, 0.1, 0.2, -0.2, (0.2, 0.55), 33).unwrap();
        for (p, m) in plus.points.iter().zip(&minus.points) {
            assert!((p.wt + m.wt).abs() < 1e-9, "at w = {}", p.w);
        }
        assert_eq!(plus.branch, 1);
        assert_eq!(minus.branch, -1);

        // away from a = 1/4 the reflection is not a symmetry of the equation
        let plus = solve_separable_power(0.3, 0.1, 0.2, 0.2, (0.2, 0.4), 21).unwrap();
        let minus = solve_separable_power(0.3, 0.1, 0.2, -0.2, (0.2, 0.4), 21).unwrap();
        let worst = plus
            .points
            .iter()
            .zip(&minus.points)
            .map(|(p, m)| (p.wt + m.wt).abs())
            .fold(0.0f64, f64::max);
        assert!(worst > 1e-6, "unexpected reflection symmetry: {worst}");
    }

    #[test]
    fn verification_record_reports_small_residuals() {
        let f = PetzFunction::Power { a: 0.5 };
        let h = PetzFunction::Power { a: 0.0 };
        let sol = solve_ode(&f, &h, 0.05, -0.05, -1, (0.05, 0.95)).unwrap();
        let rec = verify_solution(&sol, &f, &h).unwrap();
        assert!(rec.ode_residual_max < 1e-10, "{}", rec.ode_residual_max);
        assert!(
            rec.factorization_residual_max < 1e-10,
            "{}",
            rec.factorization_residual_max
        );

        let vn = PetzFunction::VonNeumann;
        let sol = solve_ode(&vn, &vn, 0.1, 0.1, 1, (0.1, 0.9)).unwrap();
        let rec = verify_solution(&sol, &vn, &vn).unwrap();
        assert!(rec.ode_residual_max < 1e-10);
        assert!(rec.factorization_residual_max < 1e-10);
    }

    #[test]
    fn range_escape_returns_partial_grid() {
        // an aggressive scheme pushes w~ into the boundary before the range
        // ends; the solver must hand back the partial grid
        let f = PetzFunction::Power { a: 0.0 }; // f = 1
        let h = PetzFunction::Power { a: 0.5 }; // h(t) = t
                                                // rhs = (w~/w)^2 (1-w~)/(1-w) t_w: with branch -1 the image dives
        let res = solve_ode(&f, &h, 0.5, -0.9, -1, (0.5, 0.99));
        match res {
            Err(Error::RangeEscape { partial, .. }) => {
                assert!(partial.points.len() >= 2);
                assert!(partial.points.iter().all(|p| p.wt.abs() < 1.0));
            }
            other => panic!("expected range escape, got {other:?}"),
        }
    }
}
