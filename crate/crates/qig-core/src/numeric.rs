//! Shared numerical kernels: finite-difference stencils, adaptive
//! Gauss-Kronrod quadrature, a Brent root finder, an embedded
//! Dormand-Prince 5(4) integrator, and piecewise-cubic interpolation.

use crate::error::{Error, Result};

pub fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    assert!(n >= 2, "linspace needs at least two points");
    let step = (b - a) / (n - 1) as f64;
    (0..n).map(|i| a + step * i as f64).collect()
}

pub fn logspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    linspace(a.ln(), b.ln(), n)
        .into_iter()
        .map(f64::exp)
        .collect()
}

// ---------------------------------------------------------------------------
// Finite differences
// ---------------------------------------------------------------------------

/// Five-point central first derivative, O(h^4).
pub fn deriv_central4<F: Fn(f64) -> f64>(f: F, x: f64, h: f64) -> f64 {
    (-f(x + 2.0 * h) + 8.0 * f(x + h) - 8.0 * f(x - h) + f(x - 2.0 * h)) / (12.0 * h)
}

/// Mixed second partial d^2f/da db by the four-point cross stencil with one
/// level of Richardson extrapolation (O(h^4)).
pub fn mixed_partial_richardson<F: Fn(f64, f64) -> Result<f64>>(
    f: F,
    a: f64,
    b: f64,
    h: f64,
) -> Result<f64> {
    let cross = |h: f64| -> Result<f64> {
        Ok(
            (f(a + h, b + h)? - f(a + h, b - h)? - f(a - h, b + h)? + f(a - h, b - h)?)
                / (4.0 * h * h),
        )
    };
    let d1 = cross(h)?;
    let d2 = cross(h / 2.0)?;
    Ok((4.0 * d2 - d1) / 3.0)
}

// ---------------------------------------------------------------------------
// Adaptive Gauss-Kronrod quadrature (G7, K15)
// ---------------------------------------------------------------------------

const XGK: [f64; 8] = [
    0.991455371120813,
    0.949107912342759,
    0.864864423359769,
    0.741531185599394,
    0.586087235467691,
    0.405845151377397,
    0.207784955007898,
    0.0,
];
const WGK: [f64; 8] = [
    0.022935322010529,
    0.063092092629979,
    0.104790010322250,
    0.140653259715525,
    0.169004726639267,
    0.190350578064785,
    0.204432940075298,
    0.209482141084728,
];
const WG: [f64; 4] = [
    0.129484966168870,
    0.279705391489277,
    0.381830050505119,
    0.417959183673469,
];

fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let mut kronrod = WGK[7] * f(c);
    let mut gauss = WG[3] * f(c);
    for i in 0..7 {
        let dx = half * XGK[i];
        let fsum = f(c - dx) + f(c + dx);
        kronrod += WGK[i] * fsum;
        if i % 2 == 1 {
            gauss += WG[i / 2] * fsum;
        }
    }
    kronrod *= half;
    gauss *= half;
    (kronrod, (kronrod - gauss).abs())
}

/// Adaptive bisection quadrature of `f` over `[a, b]` (either orientation).
pub fn quad_gk<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> Result<f64> {
    if a == b {
        return Ok(0.0);
    }
    let (lo, hi, sign) = if a < b { (a, b, 1.0) } else { (b, a, -1.0) };
    let mut total = 0.0;
    let mut stack = vec![(lo, hi, tol)];
    let mut panels = 0usize;
    while let Some((x0, x1, budget)) = stack.pop() {
        panels += 1;
        if panels > 4000 {
            return Err(Error::EndpointSingularity);
        }
        let (value, err) = gk15(f, x0, x1);
        if err <= budget.max(1e-16 * value.abs()) || (x1 - x0) < 1e-13 * (hi - lo).max(1.0) {
            if !value.is_finite() {
                return Err(Error::EndpointSingularity);
            }
            total += value;
        } else {
            let mid = 0.5 * (x0 + x1);
            stack.push((x0, mid, budget / 2.0));
            stack.push((mid, x1, budget / 2.0));
        }
    }
    Ok(sign * total)
}

// ---------------------------------------------------------------------------
// Brent root finder
// ---------------------------------------------------------------------------

/// Root of `f` in the bracket `[a, b]` (requires a sign change).
pub fn brent<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> Result<f64> {
    let (mut a, mut b) = (a, b);
    let (mut fa, mut fb) = (f(a), f(b));
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa * fb > 0.0 {
        return Err(Error::DomainError(format!(
            "no sign change on bracket [{a}, {b}]"
        )));
    }
    if fa.abs() < fb.abs() {
        std::mem::swap(&mut a, &mut b);
        std::mem::swap(&mut fa, &mut fb);
    }
    let mut c = a;
    let mut fc = fa;
    let mut d = b - a;
    let mut mflag = true;
    for _ in 0..200 {
        let s = if fa != fc && fb != fc {
            // inverse quadratic interpolation
            a * fb * fc / ((fa - fb) * (fa - fc))
                + b * fa * fc / ((fb - fa) * (fb - fc))
                + c * fa * fb / ((fc - fa) * (fc - fb))
        } else {
            b - fb * (b - a) / (fb - fa)
        };
        let cond = !(s > (3.0 * a + b) / 4.0 && s < b || s < (3.0 * a + b) / 4.0 && s > b)
            || (mflag && (s - b).abs() >= (b - c).abs() / 2.0)
            || (!mflag && (s - b).abs() >= (c - d).abs() / 2.0)
            || (mflag && (b - c).abs() < tol)
            || (!mflag && (c - d).abs() < tol);
        let s = if cond {
            mflag = true;
            0.5 * (a + b)
        } else {
            mflag = false;
            s
        };
        let fs = f(s);
        d = c;
        c = b;
        fc = fb;
        if fa * fs < 0.0 {
            b = s;
            fb = fs;
        } else {
            a = s;
            fa = fs;
        }
        if fa.abs() < fb.abs() {
            std::mem::swap(&mut a, &mut b);
            std::mem::swap(&mut fa, &mut fb);
        }
        if fb == 0.0 || (b - a).abs() < tol {
            return Ok(b);
        }
    }
    Ok(b)
}

// ---------------------------------------------------------------------------
// Dormand-Prince 5(4) with stored derivative nodes
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy)]
pub struct RkNode {
    pub x: f64,
    pub y: f64,
    pub dy: f64,
}

#[derive(Debug)]
pub struct RkRun {
    pub nodes: Vec<RkNode>,
    /// Set when integration stopped before reaching the end of the interval.
    pub failure: Option<Error>,
    pub guard_stopped: bool,
}

pub struct Dopri5 {
    pub rtol: f64,
    pub atol: f64,
    pub max_step: f64,
}

impl Dopri5 {
    /// Integrate dy/dx = f(x, y) from `x0` to `x_end`. `guard(x, y)` is
    /// checked after every accepted step; returning false stops the run with
    /// the grid so far.
    pub fn integrate<F, G>(&self, f: F, x0: f64, y0: f64, x_end: f64, mut guard: G) -> RkRun
    where
        F: Fn(f64, f64) -> Result<f64>,
        G: FnMut(f64, f64) -> bool,
    {
        const A21: f64 = 1.0 / 5.0;
        const A31: f64 = 3.0 / 40.0;
        const A32: f64 = 9.0 / 40.0;
        const A41: f64 = 44.0 / 45.0;
        const A42: f64 = -56.0 / 15.0;
        const A43: f64 = 32.0 / 9.0;
        const A51: f64 = 19372.0 / 6561.0;
        const A52: f64 = -25360.0 / 2187.0;
        const A53: f64 = 64448.0 / 6561.0;
        const A54: f64 = -212.0 / 729.0;
        const A61: f64 = 9017.0 / 3168.0;
        const A62: f64 = -355.0 / 33.0;
        const A63: f64 = 46732.0 / 5247.0;
        const A64: f64 = 49.0 / 176.0;
        const A65: f64 = -5103.0 / 18656.0;
        const B1: f64 = 35.0 / 384.0;
        const B3: f64 = 500.0 / 1113.0;
        const B4: f64 = 125.0 / 192.0;
        const B5: f64 = -2187.0 / 6784.0;
        const B6: f64 = 11.0 / 84.0;
        const E1: f64 = 71.0 / 57600.0;
        const E3: f64 = -71.0 / 16695.0;
        const E4: f64 = 71.0 / 1920.0;
        const E5: f64 = -17253.0 / 339200.0;
        const E6: f64 = 22.0 / 525.0;
        const E7: f64 = -1.0 / 40.0;

        let dir = (x_end - x0).signum();
        let mut nodes = Vec::new();
        let mut x = x0;
        let mut y = y0;
        let mut k1 = match f(x, y) {
            Ok(v) => v,
            Err(e) => {
                return RkRun {
                    nodes,
                    failure: Some(e),
                    guard_stopped: false,
                }
            }
        };
        nodes.push(RkNode { x, y, dy: k1 });
        let span = (x_end - x0).abs();
        let mut h = dir * self.max_step.min(span / 100.0).max(span * 1e-6);

        while (x - x_end) * dir < 0.0 {
            if (x + h - x_end) * dir > 0.0 {
                h = x_end - x;
            }
            let step = (|| -> Result<(f64, f64, f64), Error> {
                let k2 = f(x + 0.2 * h, y + h * (A21 * k1))?;
                let k3 = f(x + 0.3 * h, y + h * (A31 * k1 + A32 * k2))?;
                let k4 = f(x + 0.8 * h, y + h * (A41 * k1 + A42 * k2 + A43 * k3))?;
                let k5 = f(
                    x + 8.0 / 9.0 * h,
                    y + h * (A51 * k1 + A52 * k2 + A53 * k3 + A54 * k4),
                )?;
                let k6 = f(
                    x + h,
                    y + h * (A61 * k1 + A62 * k2 + A63 * k3 + A64 * k4 + A65 * k5),
                )?;
                let y_new = y + h * (B1 * k1 + B3 * k3 + B4 * k4 + B5 * k5 + B6 * k6);
                let k7 = f(x + h, y_new)?;
                let err = h * (E1 * k1 + E3 * k3 + E4 * k4 + E5 * k5 + E6 * k6 + E7 * k7);
                Ok((y_new, k7, err))
            })();
            let (y_new, k7, err) = match step {
                Ok(v) => v,
                Err(e) => {
                    return RkRun {
                        nodes,
                        failure: Some(e),
                        guard_stopped: false,
                    }
                }
            };
            let scale = self.atol + self.rtol * y.abs().max(y_new.abs());
            let err_norm = (err / scale).abs();
            if err_norm <= 1.0 {
                // the guard is consulted before the node is stored so partial
                // grids never contain out-of-domain values
                if !guard(x + h, y_new) {
                    return RkRun {
                        nodes,
                        failure: None,
                        guard_stopped: true,
                    };
                }
                x += h;
                y = y_new;
                k1 = k7;
                nodes.push(RkNode { x, y, dy: k1 });
            }
            let factor = if err_norm == 0.0 {
                5.0
            } else {
                (0.9 * err_norm.powf(-0.2)).clamp(0.2, 5.0)
            };
            h *= factor;
            if h.abs() > self.max_step {
                h = dir * self.max_step;
            }
            if h.abs() < 1e-14 * x.abs().max(1.0) {
                return RkRun {
                    nodes,
                    failure: Some(Error::StepFailure(x)),
                    guard_stopped: false,
                };
            }
        }
        RkRun {
            nodes,
            failure: None,
            guard_stopped: false,
        }
    }
}

// ---------------------------------------------------------------------------
// Piecewise cubic Hermite curve over solver nodes
// ---------------------------------------------------------------------------

#[derive(Debug, Clone)]
pub struct HermiteCurve {
    xs: Vec<f64>,
    ys: Vec<f64>,
    dys: Vec<f64>,
}

impl HermiteCurve {
    /// Nodes must be strictly monotone in x (either orientation).
    pub fn new(mut nodes: Vec<RkNode>) -> Self {
        if nodes.len() >= 2 && nodes[0].x > nodes[nodes.len() - 1].x {
            nodes.reverse();
        }
        Self {
            xs: nodes.iter().map(|n| n.x).collect(),
            ys: nodes.iter().map(|n| n.y).collect(),
            dys: nodes.iter().map(|n| n.dy).collect(),
        }
    }

    pub fn x_min(&self) -> f64 {
        self.xs[0]
    }

    pub fn x_max(&self) -> f64 {
        *self.xs.last().unwrap()
    }

    fn segment(&self, x: f64) -> usize {
        match self.xs.binary_search_by(|v| v.partial_cmp(&x).unwrap()) {
            Ok(i) => i.min(self.xs.len() - 2),
            Err(i) => i.clamp(1, self.xs.len() - 1) - 1,
        }
    }

    pub fn value(&self, x: f64) -> f64 {
        let i = self.segment(x);
        let h = self.xs[i + 1] - self.xs[i];
        let t = (x - self.xs[i]) / h;
        let (y0, y1) = (self.ys[i], self.ys[i + 1]);
        let (m0, m1) = (self.dys[i] * h, self.dys[i + 1] * h);
        let t2 = t * t;
        let t3 = t2 * t;
        (2.0 * t3 - 3.0 * t2 + 1.0) * y0
            + (t3 - 2.0 * t2 + t) * m0
            + (-2.0 * t3 + 3.0 * t2) * y1
            + (t3 - t2) * m1
    }

    pub fn derivative(&self, x: f64) -> f64 {
        let i = self.segment(x);
        let h = self.xs[i + 1] - self.xs[i];
        let t = (x - self.xs[i]) / h;
        let (y0, y1) = (self.ys[i], self.ys[i + 1]);
        let (m0, m1) = (self.dys[i] * h, self.dys[i + 1] * h);
        let t2 = t * t;
        ((6.0 * t2 - 6.0 * t) * y0
            + (3.0 * t2 - 4.0 * t + 1.0) * m0
            + (-6.0 * t2 + 6.0 * t) * y1
            + (3.0 * t2 - 2.0 * t) * m1)
            / h
    }
}

// ---------------------------------------------------------------------------
// Natural cubic spline (for tabulated functions)
// ---------------------------------------------------------------------------

#[derive(Debug, Clone)]
pub struct CubicSpline {
    xs: Vec<f64>,
    ys: Vec<f64>,
    second: Vec<f64>,
}

impl CubicSpline {
    /// `xs` strictly increasing.
    pub fn new(xs: Vec<f64>, ys: Vec<f64>) -> Self {
        let n = xs.len();
        assert!(n >= 3 && ys.len() == n);
        let mut u = vec![0.0; n];
        let mut second = vec![0.0; n];
        for i in 1..n - 1 {
            let sig = (xs[i] - xs[i - 1]) / (xs[i + 1] - xs[i - 1]);
            let p = sig * second[i - 1] + 2.0;
            second[i] = (sig - 1.0) / p;
            let d = (ys[i + 1] - ys[i]) / (xs[i + 1] - xs[i])
                - (ys[i] - ys[i - 1]) / (xs[i] - xs[i - 1]);
            u[i] = (6.0 * d / (xs[i + 1] - xs[i - 1]) - sig * u[i - 1]) / p;
        }
        second[n - 1] = 0.0;
        for i in (0..n - 1).rev() {
            second[i] = second[i] * second[i + 1] + u[i];
        }
        Self { xs, ys, second }
    }

    pub fn x_min(&self) -> f64 {
        self.xs[0]
    }

    pub fn x_max(&self) -> f64 {
        *self.xs.last().unwrap()
    }

    /// Evaluate; arguments outside the knot range are clamped to the ends.
    pub fn value(&self, x: f64) -> f64 {
        let x = x.clamp(self.xs[0], *self.xs.last().unwrap());
        let i = match self.xs.binary_search_by(|v| v.partial_cmp(&x).unwrap()) {
            Ok(i) => i.min(self.xs.len() - 2),
            Err(i) => i.clamp(1, self.xs.len() - 1) - 1,
        };
        let h = self.xs[i + 1] - self.xs[i];
        let a = (self.xs[i + 1] - x) / h;
        let b = (x - self.xs[i]) / h;
        a * self.ys[i]
            + b * self.ys[i + 1]
            + ((a * a * a - a) * self.second[i] + (b * b * b - b) * self.second[i + 1]) * h * h
                / 6.0
    }
}
