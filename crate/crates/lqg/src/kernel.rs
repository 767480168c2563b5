//! Heat kernels and analytic covariance oracles.
//!
//! Three kernels back the three field engines: the whole-plane Gaussian
//! kernel, the kernel of Brownian motion killed on exiting the unit
//! square (a product of two 1-D Dirichlet kernels), and a locally
//! truncated kernel masked to a shrinking ball around the source. All
//! kernels are for the generator `Delta/2`, so the spatial scale at time
//! `t` is `sqrt(t)` per coordinate.

use crate::error::{Error, Result};
use crate::geom::{dist, Point};
use crate::quad;
use std::f64::consts::PI;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Domain {
    WholePlane,
    UnitSquareKilled,
    /// Ball of the given radius centered at the source point.
    BallTruncated { radius: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelSpec {
    pub domain: Domain,
    pub time: f64,
}

impl KernelSpec {
    pub fn new(domain: Domain, time: f64) -> Result<Self> {
        if !(time > 0.0) {
            return Err(Error::domain(format!("kernel time must be positive, got {time}")));
        }
        if let Domain::BallTruncated { radius } = domain {
            if !(radius > 0.0) {
                return Err(Error::domain("truncation radius must be positive".into()));
            }
        }
        Ok(KernelSpec { domain, time })
    }
}

/// Whole-plane transition density `exp(-|u-v|^2/2t) / (2 pi t)`.
#[inline]
pub fn gauss_plane(t: f64, u: Point, v: Point) -> f64 {
    let d2 = (u.0 - v.0).powi(2) + (u.1 - v.1).powi(2);
    (-d2 / (2.0 * t)).exp() / (2.0 * PI * t)
}

const SERIES_SWITCH_T: f64 = 0.05;

/// 1-D Dirichlet kernel on `[0,1]` via the spectral sine series,
/// accurate for `t` not too small.
pub fn dirichlet_1d_spectral(t: f64, x: f64, y: f64) -> f64 {
    let mut sum = 0.0;
    let n_max = (8.5 / t).sqrt().ceil() as usize + 1;
    for n in 1..=n_max {
        let lam = (n * n) as f64 * PI * PI * t / 2.0;
        if lam > 700.0 {
            break;
        }
        sum += (-lam).exp() * (n as f64 * PI * x).sin() * (n as f64 * PI * y).sin();
    }
    2.0 * sum
}

/// 1-D Dirichlet kernel on `[0,1]` via the method of images,
/// accurate for small `t`.
pub fn dirichlet_1d_images(t: f64, x: f64, y: f64) -> f64 {
    let norm = 1.0 / (2.0 * PI * t).sqrt();
    let g = |z: f64| (-z * z / (2.0 * t)).exp();
    let k_max = ((2.0 * t * 90.0).sqrt() / 2.0).ceil() as i64 + 2;
    let mut sum = 0.0;
    for k in -k_max..=k_max {
        let shift = 2.0 * k as f64;
        sum += g(x - y - shift) - g(x + y - shift);
    }
    norm * sum
}

/// 1-D Dirichlet kernel on `[0,1]`, switching between the image series
/// (small `t`) and the spectral series (large `t`).
#[inline]
pub fn dirichlet_1d(t: f64, x: f64, y: f64) -> f64 {
    if t < SERIES_SWITCH_T {
        dirichlet_1d_images(t, x, y)
    } else {
        dirichlet_1d_spectral(t, x, y)
    }
}

/// Killed kernel on the unit square: a product of 1-D Dirichlet kernels.
#[inline]
pub fn killed_square(t: f64, u: Point, v: Point) -> f64 {
    dirichlet_1d(t, u.0, v.0) * dirichlet_1d(t, u.1, v.1)
}

/// Transition density at time `spec.time` from `u` to `v`.
pub fn kernel_eval(spec: &KernelSpec, u: Point, v: Point) -> Result<f64> {
    let t = spec.time;
    if !(t > 0.0) {
        return Err(Error::domain(format!("kernel time must be positive, got {t}")));
    }
    match spec.domain {
        Domain::WholePlane => Ok(gauss_plane(t, u, v)),
        Domain::UnitSquareKilled => {
            for p in [u, v] {
                if !((0.0..=1.0).contains(&p.0) && (0.0..=1.0).contains(&p.1)) {
                    return Err(Error::domain(format!("point {p:?} outside the unit square")));
                }
            }
            Ok(killed_square(t, u, v))
        }
        Domain::BallTruncated { radius } => {
            if !(radius > 0.0) {
                return Err(Error::domain("truncation radius must be positive".into()));
            }
            let d = dist(u, v);
            if d > radius {
                return Err(Error::domain(format!(
                    "target at distance {d} outside truncation ball of radius {radius}"
                )));
            }
            // Whole-plane kernel times the bridge survival probability,
            // approximated by one reflection in the tangent plane at the
            // boundary point nearest the bridge.
            let survival = 1.0 - (-2.0 * radius * (radius - d) / t).exp();
            Ok(gauss_plane(t, u, v) * survival.max(0.0))
        }
    }
}

/// Truncation radius of the locally masked field at scale variable `s`
/// (the time-like integration variable): `min(sqrt(s) |log(1/s)| / 4, 0.1)`.
#[inline]
pub fn truncation_radius(s: f64) -> f64 {
    (0.25 * s.sqrt() * (1.0 / s).ln().abs()).min(0.1)
}

/// Spatial overlap of two ball-masked Gaussian kernels at scale `s`:
/// `int K(s/2; u-w) K(s/2; v-w) dw` over `B_rho(u) ∩ B_rho(v)`.
/// This is the per-scale covariance density of the truncated engine for
/// points away from the domain boundary.
pub fn masked_overlap(s: f64, d: f64) -> f64 {
    let t = s / 2.0;
    let rho = truncation_radius(s);
    if rho <= 0.0 || d >= 2.0 * rho {
        return 0.0;
    }
    if d == 0.0 {
        return (1.0 - (-rho * rho / t).exp()) / (4.0 * PI * t);
    }
    // coordinates centered at the midpoint, x along the axis u -> v
    let half = rho - d / 2.0;
    let st = t.sqrt();
    let pref = (-d * d / (4.0 * t)).exp() / (2.0 * PI * t).powi(2);
    let inner = |x: f64| {
        let y = (rho * rho - (x.abs() + d / 2.0).powi(2)).max(0.0).sqrt();
        (-x * x / t).exp() * (PI * t).sqrt() * libm::erf(y / st)
    };
    let integral = quad::integrate(inner, -half, half, 1e-10).unwrap_or_else(|_| {
        // fall back to a fixed fine Simpson grid; the integrand is smooth
        let n = 4096;
        let w = 2.0 * half / n as f64;
        let mut acc = 0.0;
        for k in 0..n {
            let x0 = -half + k as f64 * w;
            acc += w / 6.0 * (inner(x0) + 4.0 * inner(x0 + 0.5 * w) + inner(x0 + w));
        }
        acc
    });
    pref * integral
}

/// Field engines: square-killed white noise, locally truncated white
/// noise, and the stationary whole-plane field.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub enum Engine {
    /// White-noise decomposition with the square-killed kernel.
    TildeH,
    /// Locally truncated kernel; each octave has finite-range dependence.
    Eta,
    /// Whole-plane stationary field with exact scaling invariance.
    HatH,
}

impl Engine {
    pub fn tag(&self) -> u8 {
        match self {
            Engine::TildeH => 0,
            Engine::Eta => 1,
            Engine::HatH => 2,
        }
    }

    pub fn from_tag(tag: u8) -> Result<Engine> {
        match tag {
            0 => Ok(Engine::TildeH),
            1 => Ok(Engine::Eta),
            2 => Ok(Engine::HatH),
            _ => Err(Error::format(format!("unknown engine tag {tag}"))),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Engine::TildeH => "tilde_h",
            Engine::Eta => "eta",
            Engine::HatH => "hat_h",
        }
    }

    pub fn parse(s: &str) -> Result<Engine> {
        match s {
            "tilde_h" | "tilde" => Ok(Engine::TildeH),
            "eta" => Ok(Engine::Eta),
            "hat_h" | "hat" => Ok(Engine::HatH),
            _ => Err(Error::domain(format!("unknown engine '{s}'"))),
        }
    }
}

/// Covariance of the engine's field between scales `delta < delta_tilde`:
/// `pi * int_{delta^2}^{delta_tilde^2} p(t; u, v) dt` with the engine's
/// kernel (for the truncated engine, the masked-overlap density).
/// Adaptive quadrature with relative error `<= 1e-8`; valid away from the
/// domain boundary for the truncated engine.
pub fn covariance_oracle(
    engine: Engine,
    u: Point,
    v: Point,
    delta: f64,
    delta_tilde: f64,
) -> Result<f64> {
    if !(0.0 < delta && delta < delta_tilde && delta_tilde <= 1.0) {
        return Err(Error::domain(format!(
            "scales must satisfy 0 < delta < delta_tilde <= 1, got ({delta}, {delta_tilde})"
        )));
    }
    let (a, b) = (delta * delta, delta_tilde * delta_tilde);
    let tol = 1e-9;
    match engine {
        Engine::HatH => quad::integrate_log(|t| PI * gauss_plane(t, u, v), a, b, tol),
        Engine::TildeH => quad::integrate_log(|t| PI * killed_square(t, u, v), a, b, tol),
        Engine::Eta => {
            let d = dist(u, v);
            quad::integrate_log(|s| PI * masked_overlap(s, d), a, b, tol)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const LN2: f64 = std::f64::consts::LN_2;

    #[test]
    fn whole_plane_on_diagonal() {
        let spec = KernelSpec::new(Domain::WholePlane, 0.5).unwrap();
        let v = kernel_eval(&spec, (0.3, 0.4), (0.3, 0.4)).unwrap();
        assert!((v - 1.0 / PI).abs() < 1e-12);
    }

    #[test]
    fn killed_square_small_time_is_whole_plane() {
        let spec = KernelSpec::new(Domain::UnitSquareKilled, 0.001).unwrap();
        let v = kernel_eval(&spec, (0.5, 0.5), (0.5, 0.5)).unwrap();
        let free = 1.0 / (2.0 * PI * 0.001);
        assert!((v - free).abs() / free < 1e-6, "killed {v} vs free {free}");
        assert!((v - 159.1549).abs() / 159.1549 < 1e-6);
    }

    #[test]
    fn killed_square_large_time_leading_mode() {
        let spec = KernelSpec::new(Domain::UnitSquareKilled, 1.0).unwrap();
        let v = kernel_eval(&spec, (0.5, 0.5), (0.5, 0.5)).unwrap();
        let leading = (2.0 * (-PI * PI / 2.0).exp()).powi(2);
        assert!((v - leading).abs() / leading < 1e-3, "{v} vs {leading}");
    }

    #[test]
    fn spectral_and_images_agree() {
        for t in [0.02, 0.05, 0.2, 1.0] {
            for (x, y) in [(0.5, 0.5), (0.3, 0.7), (0.05, 0.1), (0.9, 0.95)] {
                let a = dirichlet_1d_spectral(t, x, y);
                let b = dirichlet_1d_images(t, x, y);
                assert!(
                    (a - b).abs() < 1e-10,
                    "t={t} x={x} y={y}: spectral {a} images {b}"
                );
            }
        }
    }

    #[test]
    fn domain_errors() {
        let spec = KernelSpec::new(Domain::UnitSquareKilled, 0.1).unwrap();
        assert!(kernel_eval(&spec, (1.2, 0.5), (0.5, 0.5)).is_err());
        assert!(KernelSpec::new(Domain::WholePlane, 0.0).is_err());
        assert!(KernelSpec::new(Domain::BallTruncated { radius: -1.0 }, 0.1).is_err());
        let ball = KernelSpec::new(Domain::BallTruncated { radius: 0.1 }, 0.01).unwrap();
        assert!(kernel_eval(&ball, (0.5, 0.5), (0.7, 0.5)).is_err());
    }

    #[test]
    fn ball_survival_bounded() {
        let ball = KernelSpec::new(Domain::BallTruncated { radius: 0.1 }, 0.004).unwrap();
        let full = gauss_plane(0.004, (0.5, 0.5), (0.55, 0.5));
        let v = kernel_eval(&ball, (0.5, 0.5), (0.55, 0.5)).unwrap();
        assert!(v > 0.0 && v <= full);
    }

    #[test]
    fn hat_variance_closed_form() {
        // pi int_{2^-10}^{1} dt/(2 pi t) = 5 log 2
        let v = covariance_oracle(Engine::HatH, (0.5, 0.5), (0.5, 0.5), 1.0 / 32.0, 1.0).unwrap();
        assert!((v - 5.0 * LN2).abs() < 1e-7, "{v}");
    }

    // independent oracle: exponential integral E1 via series/continued fraction
    fn exp_int_e1(x: f64) -> f64 {
        assert!(x > 0.0);
        if x <= 1.0 {
            let mut sum = -0.577_215_664_901_532_9 - x.ln();
            let mut term = 1.0;
            for k in 1..60 {
                term *= -x / k as f64;
                sum -= term / k as f64;
            }
            sum
        } else {
            let mut cf = 0.0;
            for k in (1..=60).rev() {
                cf = k as f64 / (1.0 + k as f64 / (x + cf));
            }
            (-x).exp() / (x + cf)
        }
    }

    #[test]
    fn hat_covariance_matches_exponential_integral() {
        let u = (0.4, 0.5);
        let v = (0.5, 0.5);
        let cov = covariance_oracle(Engine::HatH, u, v, 1.0 / 32.0, 1.0).unwrap();
        let exact = (exp_int_e1(0.005) - exp_int_e1(5.12)) / 2.0;
        assert!((cov - exact).abs() < 1e-7, "quadrature {cov} vs E1 {exact}");
        assert!((cov - 2.3626).abs() < 2e-4, "{cov}");
    }

    #[test]
    fn killed_covariance_log_plus_o1() {
        let c = (0.5, 0.5);
        let cov = covariance_oracle(Engine::TildeH, c, c, 1.0 / 32.0, 1.0).unwrap();
        assert!((cov - 5.0 * LN2).abs() < 1.0, "killed variance {cov}");
        // strictly below the whole-plane value
        assert!(cov < 5.0 * LN2);
    }

    #[test]
    fn truncation_radius_profile() {
        assert_eq!(truncation_radius(1.0), 0.0);
        assert!((truncation_radius(0.25) - 0.1).abs() < 1e-12); // capped
        let s = 0.25f64.powi(4);
        let expect = 0.25 * s.sqrt() * (1.0 / s).ln();
        assert!((truncation_radius(s) - expect).abs() < 1e-12);
    }

    #[test]
    fn masked_overlap_locality_and_diagonal() {
        let s = 0.25f64.powi(3);
        let rho = truncation_radius(s);
        assert_eq!(masked_overlap(s, 2.0 * rho + 1e-9), 0.0);
        let t = s / 2.0;
        let exact = (1.0 - (-rho * rho / t).exp()) / (4.0 * PI * t);
        assert!((masked_overlap(s, 0.0) - exact).abs() / exact < 1e-12);
        // overlap decreases with separation
        let a = masked_overlap(s, 0.2 * rho);
        let b = masked_overlap(s, rho);
        assert!(a > b && b > 0.0);
    }
}
