//! Adaptive quadrature used by the analytic covariance oracles.

use crate::error::{Error, Result};

struct Adaptive<'a> {
    f: &'a dyn Fn(f64) -> f64,
    rel_tol: f64,
    abs_floor: f64,
    evals: usize,
    max_evals: usize,
}

impl Adaptive<'_> {
    fn simpson(&self, a: f64, b: f64, fa: f64, fm: f64, fb: f64) -> f64 {
        (b - a) / 6.0 * (fa + 4.0 * fm + fb)
    }

    fn recurse(
        &mut self,
        a: f64,
        b: f64,
        fa: f64,
        fm: f64,
        fb: f64,
        whole: f64,
        tol: f64,
        depth: u32,
    ) -> (f64, f64) {
        let m = 0.5 * (a + b);
        let lm = 0.5 * (a + m);
        let rm = 0.5 * (m + b);
        let flm = (self.f)(lm);
        let frm = (self.f)(rm);
        self.evals += 2;
        let left = self.simpson(a, m, fa, flm, fm);
        let right = self.simpson(m, b, fm, frm, fb);
        let err = (left + right - whole) / 15.0;
        if depth > 48 || self.evals > self.max_evals {
            return (left + right + err, err.abs());
        }
        if err.abs() <= tol.max(self.abs_floor) {
            return (left + right + err, err.abs());
        }
        let (vl, el) = self.recurse(a, m, fa, flm, fm, left, 0.5 * tol, depth + 1);
        let (vr, er) = self.recurse(m, b, fm, frm, fb, right, 0.5 * tol, depth + 1);
        (vl + vr, el + er)
    }
}

/// Integrate `f` over `[a, b]` to relative tolerance `rel_tol`.
pub fn integrate(f: impl Fn(f64) -> f64, a: f64, b: f64, rel_tol: f64) -> Result<f64> {
    if !(a < b) {
        return Err(Error::domain(format!("bad integration interval [{a}, {b}]")));
    }
    // coarse scale estimate to seed the error budget
    let mut scale = 0.0f64;
    let probes = 17;
    for k in 0..=probes {
        let x = a + (b - a) * k as f64 / probes as f64;
        scale = scale.max(f(x).abs());
    }
    let abs_floor = scale * (b - a) * 1e-16;
    let fa = f(a);
    let fb = f(b);
    let fm = f(0.5 * (a + b));
    let mut ad = Adaptive {
        f: &f,
        rel_tol,
        abs_floor,
        evals: 3 + probes + 1,
        max_evals: 2_000_000,
    };
    let whole = ad.simpson(a, b, fa, fm, fb);
    let tol0 = (whole.abs().max(scale * (b - a) * 0.01)) * rel_tol;
    let (val, err) = ad.recurse(a, b, fa, fm, fb, whole, tol0, 0);
    let achieved = if val.abs() > 0.0 { err / val.abs() } else { err };
    if achieved > rel_tol * 50.0 && err > abs_floor * 10.0 {
        return Err(Error::Numeric {
            message: "quadrature failed to converge".into(),
            achieved_tol: achieved,
        });
    }
    Ok(val)
}

/// Integrate `g(t) dt` over `[a, b]` with `0 < a < b` via the substitution
/// `t = e^tau`, which flattens the `1/t`-type integrands that appear in
/// scale integrals.
pub fn integrate_log(g: impl Fn(f64) -> f64, a: f64, b: f64, rel_tol: f64) -> Result<f64> {
    if !(0.0 < a && a < b) {
        return Err(Error::domain(format!("bad log-scale interval [{a}, {b}]")));
    }
    integrate(|tau| {
        let t = tau.exp();
        g(t) * t
    }, a.ln(), b.ln(), rel_tol)
}
