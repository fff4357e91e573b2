//! Heat polynomials v_n and their associated functions w_n
//! (Widder-Rosenbloom family), plus the derivative identities linking them.
//!
//! Convention: v_n is the coefficient of z^n/n! in exp(xz + z^2 t / 2), which
//! makes v_n a solution of the forward equation v_t = v_xx / 2. The associated
//! function is w_n(x,t) = g0(t,x) v_n(x,-t) (t/2)^{-n} with g0 the fundamental
//! solution evaluated at plain t.

use crate::error::{Error, Result};

/// Degree cap; beyond this the double-precision recurrence loses meaning.
pub const MAX_DEGREE: usize = 64;

const LN_2PI: f64 = 1.8378770664093453;

/// Fundamental solution g0(t,x) = (2 pi t)^{-1/2} exp(-x^2 / (2t)), t > 0.
pub fn fundamental_solution(t: f64, x: f64) -> Result<f64> {
    if !(t > 0.0) {
        return Err(Error::InvalidParameter(format!("fundamental solution requires t > 0, got {t}")));
    }
    Ok((-0.5 * (LN_2PI + t.ln()) - x * x / (2.0 * t)).exp())
}

fn check_degree(n: i64) -> Result<usize> {
    if n < 0 {
        return Err(Error::InvalidParameter(format!("degree must be nonnegative, got {n}")));
    }
    let n = n as usize;
    if n > MAX_DEGREE {
        return Err(Error::InvalidParameter(format!("degree {n} exceeds cap {MAX_DEGREE}")));
    }
    Ok(n)
}

/// Heat polynomial v_n(x,t) from the three-term recurrence
/// v_0 = 1, v_1 = x, v_n = x v_{n-1} + (n-1) t v_{n-2}.
pub fn heat_poly_v(n: i64, x: f64, t: f64) -> Result<f64> {
    let n = check_degree(n)?;
    Ok(v_rec(n, x, t))
}

fn v_rec(n: usize, x: f64, t: f64) -> f64 {
    match n {
        0 => 1.0,
        1 => x,
        _ => {
            let mut prev = 1.0;
            let mut cur = x;
            for k in 2..=n {
                let next = x * cur + (k - 1) as f64 * t * prev;
                prev = cur;
                cur = next;
            }
            cur
        }
    }
}

/// Sum of absolute term magnitudes of v_n; the cancellation scale used to
/// skip near-zeros of v_n(x,-t).
fn v_scale(n: usize, x: f64, t: f64) -> f64 {
    v_rec(n, x.abs(), t.abs())
}

/// Associated function w_n(x,t) = g0(t,x) v_n(x,-t) (t/2)^{-n}, t > 0.
pub fn assoc_w(n: i64, x: f64, t: f64) -> Result<f64> {
    let n = check_degree(n)?;
    if !(t > 0.0) {
        return Err(Error::InvalidParameter(format!("assoc_w requires t > 0, got {t}")));
    }
    Ok(fundamental_solution(t, x)? * v_rec(n, x, -t) * (0.5 * t).powi(-(n as i32)))
}

/// Violation report from `check_poly_identities`. Violations are normalized
/// by the natural magnitude of each expression, so cancellation near
/// polynomial zeros does not masquerade as identity failure.
#[derive(Debug, Clone, Default)]
pub struct IdentityReport {
    /// v'_n = n v_{n-1}, derivative by central difference (step 1e-6).
    pub max_v_derivative: f64,
    /// w'_{n-1} = -w_n / 2, derivative by central difference (step 1e-6).
    pub max_w_derivative: f64,
    /// Log-derivative chain w'_n/w_n = w'_0/w_0 + v'_n(x,-t)/v_n(x,-t).
    pub max_hi_chain: f64,
    /// Chain w'_n/w_n = w'_0/w_0 - (n/t) w_{n-1}/w'_{n-1}.
    pub max_hj_chain: f64,
    /// Points skipped because a denominator sat at a zero of v_n or w_n.
    pub skipped: usize,
}

impl IdentityReport {
    pub fn max_violation(&self) -> f64 {
        self.max_v_derivative
            .max(self.max_w_derivative)
            .max(self.max_hi_chain)
            .max(self.max_hj_chain)
    }
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / 1.0_f64.max(a.abs()).max(b.abs())
}

/// Verify the derivative identities for 1 <= n <= n_max at the given (x,t)
/// points (all t > 0 required).
pub fn check_poly_identities(n_max: i64, points: &[(f64, f64)]) -> Result<IdentityReport> {
    let n_max = check_degree(n_max)?;
    if n_max < 1 {
        return Err(Error::InvalidParameter("n_max must be >= 1".into()));
    }
    if points.is_empty() {
        return Err(Error::InvalidParameter("no points given".into()));
    }
    const STEP: f64 = 1e-6;
    let mut rep = IdentityReport::default();
    for &(x, t) in points {
        if !(t > 0.0) {
            return Err(Error::InvalidParameter(format!("identity check requires t > 0, got {t}")));
        }
        let w0_ratio = -x / t;
        for n in 1..=n_max {
            // v'_n = n v_{n-1}; all terms of v_n are positive for x, t > 0 so
            // the finite difference is well conditioned.
            let dv = (v_rec(n, x + STEP, t) - v_rec(n, x - STEP, t)) / (2.0 * STEP);
            let v_rhs = n as f64 * v_rec(n - 1, x, t);
            rep.max_v_derivative = rep.max_v_derivative.max(rel(dv, v_rhs));

            // w'_{n-1} = -w_n / 2, normalized by the series magnitude.
            let wm = assoc_w((n - 1) as i64, x - STEP, t)?;
            let wp = assoc_w((n - 1) as i64, x + STEP, t)?;
            let dw = (wp - wm) / (2.0 * STEP);
            let w_n = assoc_w(n as i64, x, t)?;
            let w_mag = fundamental_solution(t, x)? * v_scale(n, x, t) * (0.5 * t).powi(-(n as i32));
            rep.max_w_derivative = rep.max_w_derivative
                .max((dw - (-0.5 * w_n)).abs() / (1.0 + w_mag.abs()));

            // Ratio chains via the analytic derivative w'_n = -w_{n+1}/2,
            // which the finite-difference check above certifies independently.
            let vn_neg = v_rec(n, x, -t);
            let vscale = v_scale(n, x, t);
            if vn_neg.abs() < 1e-6 * vscale || n + 1 > MAX_DEGREE {
                rep.skipped += 1;
                continue;
            }
            let lhs = -v_rec(n + 1, x, -t) / (t * vn_neg); // w'_n / w_n
            let hi_rhs = w0_ratio + n as f64 * v_rec(n - 1, x, -t) / vn_neg;
            rep.max_hi_chain = rep.max_hi_chain.max(rel(lhs, hi_rhs));

            // w_{n-1}/w'_{n-1} = w_{n-1} / (-w_n/2); skip at zeros of w_n.
            let w_prev = assoc_w((n - 1) as i64, x, t)?;
            if w_n.abs() < 1e-8 * (1.0 + w_mag.abs()) {
                rep.skipped += 1;
                continue;
            }
            let hj_rhs = w0_ratio - (n as f64 / t) * (w_prev / (-0.5 * w_n));
            rep.max_hj_chain = rep.max_hj_chain.max(rel(lhs, hj_rhs));
        }
    }
    Ok(rep)
}
