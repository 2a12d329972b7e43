//! Uniform collocated radial grid, finite differences, and quadrature.
//!
//! Conventions shared by every module:
//! - composite trapezoid quadrature on the nodes;
//! - the weighted norm `||g|| = (int_0^R0 g^2 r dr)^(1/2)` carries no `2 pi`
//!   factor (the physical energy adds it separately);
//! - the singular quotient `u/r` at the center is replaced by `u_r(0)`
//!   (`u(0) = 0`), so `div u = u_r + u/r` evaluates to `2 u_r(0)` at `r = 0`.

use crate::error::{Error, Result};

/// Minimum cell count accepted by [`RadialGrid::new`].
pub const MIN_CELLS: usize = 16;

/// Nodes `r_i = i h`, `i = 0..=n`, `h = R0 / n`.
#[derive(Debug, Clone)]
pub struct RadialGrid {
    n: usize,
    h: f64,
    r: Vec<f64>,
}

impl RadialGrid {
    pub fn new(n: usize, domain_radius: f64) -> Result<Self> {
        if n < MIN_CELLS {
            return Err(Error::InvalidParams(format!(
                "grid needs at least {MIN_CELLS} cells, got {n}"
            )));
        }
        if !(domain_radius > 0.0) || !domain_radius.is_finite() {
            return Err(Error::InvalidParams(format!(
                "domain radius must be positive and finite, got {domain_radius}"
            )));
        }
        let h = domain_radius / n as f64;
        let mut r: Vec<f64> = (0..=n).map(|i| i as f64 * h).collect();
        r[n] = domain_radius;
        Ok(Self { n, h, r })
    }

    #[inline]
    pub fn cells(&self) -> usize {
        self.n
    }

    /// Number of nodes, `n + 1`.
    #[inline]
    pub fn len(&self) -> usize {
        self.n + 1
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        false
    }

    #[inline]
    pub fn spacing(&self) -> f64 {
        self.h
    }

    #[inline]
    pub fn nodes(&self) -> &[f64] {
        &self.r
    }

    #[inline]
    pub fn domain_radius(&self) -> f64 {
        self.r[self.n]
    }

    /// Centered first derivative at interior nodes, second-order one-sided
    /// stencils at both ends.
    pub fn deriv(&self, g: &[f64]) -> Vec<f64> {
        debug_assert_eq!(g.len(), self.len());
        let n = self.n;
        let h = self.h;
        let mut d = vec![0.0; n + 1];
        for i in 1..n {
            d[i] = (g[i + 1] - g[i - 1]) / (2.0 * h);
        }
        d[0] = (-3.0 * g[0] + 4.0 * g[1] - g[2]) / (2.0 * h);
        d[n] = (3.0 * g[n] - 4.0 * g[n - 1] + g[n - 2]) / (2.0 * h);
        d
    }

    /// Composite trapezoid of nodal values over the whole domain.
    pub fn trapezoid(&self, g: &[f64]) -> f64 {
        debug_assert_eq!(g.len(), self.len());
        let mut s = 0.5 * (g[0] + g[self.n]);
        for gi in &g[1..self.n] {
            s += gi;
        }
        s * self.h
    }

    /// Trapezoid of nodal values over `[0, r_cut]`, the partial cell handled
    /// by linear interpolation of `g`.
    pub fn trapezoid_to(&self, g: &[f64], r_cut: f64) -> f64 {
        debug_assert_eq!(g.len(), self.len());
        let r_cut = r_cut.clamp(0.0, self.domain_radius());
        let k = ((r_cut / self.h).floor() as usize).min(self.n);
        let mut s = 0.0;
        for i in 0..k {
            s += 0.5 * (g[i] + g[i + 1]) * self.h;
        }
        if k < self.n && r_cut > self.r[k] {
            let frac = (r_cut - self.r[k]) / self.h;
            let g_cut = g[k] * (1.0 - frac) + g[k + 1] * frac;
            s += 0.5 * (g[k] + g_cut) * (r_cut - self.r[k]);
        }
        s
    }

    /// Cumulative trapezoid: `out[i] = int_0^{r_i} g dr`.
    pub fn cumtrapz(&self, g: &[f64]) -> Vec<f64> {
        debug_assert_eq!(g.len(), self.len());
        let mut out = vec![0.0; self.len()];
        for i in 1..self.len() {
            out[i] = out[i - 1] + 0.5 * (g[i] + g[i - 1]) * self.h;
        }
        out
    }

    /// `(int_0^R0 g^2 r dr)^(1/2)` by trapezoid with weight `r`; no `2 pi`.
    ///
    /// Rejects non-finite input.
    pub fn weighted_l2(&self, g: &[f64]) -> Result<f64> {
        if g.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("weighted_l2 input"));
        }
        Ok(self.weighted_l2_unchecked(g))
    }

    pub(crate) fn weighted_l2_unchecked(&self, g: &[f64]) -> f64 {
        debug_assert_eq!(g.len(), self.len());
        let mut s = 0.5 * g[self.n] * g[self.n] * self.r[self.n];
        for i in 1..self.n {
            s += g[i] * g[i] * self.r[i];
        }
        (s * self.h).sqrt()
    }

    /// Linear interpolation of nodal values at radius `x` (clamped to the domain).
    pub fn interp(&self, g: &[f64], x: f64) -> f64 {
        debug_assert_eq!(g.len(), self.len());
        let x = x.clamp(0.0, self.domain_radius());
        let k = ((x / self.h).floor() as usize).min(self.n - 1);
        let frac = (x - self.r[k]) / self.h;
        g[k] * (1.0 - frac) + g[k + 1] * frac
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn grid(n: usize) -> RadialGrid {
        RadialGrid::new(n, 1.0).unwrap()
    }

    #[test]
    fn nodes_cover_domain() {
        let g = grid(64);
        assert_eq!(g.nodes()[0], 0.0);
        assert_eq!(g.domain_radius(), 1.0);
        assert!(g.nodes().windows(2).all(|w| w[1] > w[0]));
    }

    #[test]
    fn rejects_tiny_grids() {
        assert!(RadialGrid::new(8, 1.0).is_err());
    }

    #[test]
    fn weighted_l2_of_zero_profile() {
        let g = grid(32);
        assert_eq!(g.weighted_l2(&vec![0.0; g.len()]).unwrap(), 0.0);
    }

    #[test]
    fn weighted_l2_of_constant_two() {
        // (int_0^1 4 r dr)^(1/2) = sqrt(2); exact for the trapezoid rule.
        let g = grid(64);
        let v = g.weighted_l2(&vec![2.0; g.len()]).unwrap();
        assert!((v - 2.0f64.sqrt()).abs() < 1e-12, "{v}");
    }

    #[test]
    fn weighted_l2_of_identity() {
        // (int_0^1 r^3 dr)^(1/2) = 1/2, trapezoid error O(h^2).
        for (n, tol) in [(64, 2e-4), (128, 5e-5)] {
            let g = grid(n);
            let prof: Vec<f64> = g.nodes().to_vec();
            let v = g.weighted_l2(&prof).unwrap();
            assert!((v - 0.5).abs() < tol, "n={n} v={v}");
        }
    }

    #[test]
    fn weighted_l2_rejects_non_finite() {
        let g = grid(32);
        let mut prof = vec![0.0; g.len()];
        prof[3] = f64::NAN;
        assert!(g.weighted_l2(&prof).is_err());
    }

    #[test]
    fn trapezoid_to_is_exact_on_linear_data() {
        let g = grid(64);
        let prof: Vec<f64> = g.nodes().to_vec();
        // int_0^x r dr = x^2/2 exactly for piecewise-linear integrand.
        for x in [0.25, 0.437, 1.0] {
            assert!((g.trapezoid_to(&prof, x) - x * x / 2.0).abs() < 1e-14);
        }
    }

    #[test]
    fn deriv_is_exact_on_quadratics() {
        let g = grid(32);
        let prof: Vec<f64> = g.nodes().iter().map(|&r| r * r).collect();
        let d = g.deriv(&prof);
        for (i, &r) in g.nodes().iter().enumerate() {
            assert!((d[i] - 2.0 * r).abs() < 1e-12);
        }
    }

    proptest! {
        #[test]
        fn weighted_l2_absolutely_homogeneous(
            vals in proptest::collection::vec(-1e3..1e3f64, 33),
            c in -50.0..50.0f64,
        ) {
            let g = grid(32);
            let scaled: Vec<f64> = vals.iter().map(|v| c * v).collect();
            let a = g.weighted_l2(&vals).unwrap();
            let b = g.weighted_l2(&scaled).unwrap();
            prop_assert!((b - c.abs() * a).abs() <= 1e-9 * (1.0 + b.abs()));
        }

        #[test]
        fn weighted_l2_triangle_inequality(
            x in proptest::collection::vec(-1e3..1e3f64, 33),
            y in proptest::collection::vec(-1e3..1e3f64, 33),
        ) {
            let g = grid(32);
            let sum: Vec<f64> = x.iter().zip(&y).map(|(a, b)| a + b).collect();
            let lhs = g.weighted_l2(&sum).unwrap();
            let rhs = g.weighted_l2(&x).unwrap() + g.weighted_l2(&y).unwrap();
            prop_assert!(lhs <= rhs + 1e-9 * (1.0 + rhs));
        }
    }
}
