//! Octave and time-slice schedule for the white-noise decomposition.
//!
//! Octave `j` integrates the scale variable `s` over `(4^-(j+1), 4^-j]`,
//! split into geometrically spaced slices. Each slice freezes the kernel
//! at the logarithmic mean of its endpoints, which makes the per-slice
//! variance of the stationary engine match the continuum scale integral
//! exactly: `(b-a) / (2 s*) = log(b/a) / 2`.

#[derive(Debug, Clone, Copy)]
pub struct Slice {
    /// Lower endpoint of the s-interval.
    pub a: f64,
    /// Upper endpoint of the s-interval.
    pub b: f64,
    /// Representative scale (logarithmic mean of `a` and `b`).
    pub s_star: f64,
}

impl Slice {
    /// Kernel diffusion time for this slice (`p(s/2; ...)`).
    #[inline]
    pub fn kernel_time(&self) -> f64 {
        self.s_star / 2.0
    }

    /// White-noise mass of the slice.
    #[inline]
    pub fn mass(&self) -> f64 {
        self.b - self.a
    }
}

pub fn octave_slices(octave: usize, slices_per_octave: usize) -> Vec<Slice> {
    assert!(slices_per_octave >= 1);
    let lo = 0.25f64.powi(octave as i32 + 1);
    let ratio = 4f64.powf(1.0 / slices_per_octave as f64);
    (0..slices_per_octave)
        .map(|q| {
            let a = lo * ratio.powi(q as i32);
            let b = if q + 1 == slices_per_octave { lo * 4.0 } else { a * ratio };
            let s_star = (b - a) / (b / a).ln();
            Slice { a, b, s_star }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn slices_tile_the_octave() {
        for j in 0..6 {
            let sl = octave_slices(j, 4);
            assert_eq!(sl.len(), 4);
            assert!((sl[0].a - 0.25f64.powi(j as i32 + 1)).abs() < 1e-15);
            assert!((sl[3].b - 0.25f64.powi(j as i32)).abs() < 1e-15);
            for w in sl.windows(2) {
                assert!((w[0].b - w[1].a).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn log_mean_variance_is_exact() {
        // sum over slices of (b-a)/(2 s*) telescopes to log 2 per octave
        let total: f64 = octave_slices(3, 4).iter().map(|s| s.mass() / (2.0 * s.s_star)).sum();
        assert!((total - std::f64::consts::LN_2).abs() < 1e-12);
    }
}
