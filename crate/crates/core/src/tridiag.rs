//! Thomas solve for tridiagonal systems.

use crate::error::{Error, Result};

/// Solves the tridiagonal system with subdiagonal `lo`, diagonal `di`,
/// superdiagonal `up` (`lo[0]` and `up[n-1]` unused), in-place over `rhs`.
pub fn solve(lo: &[f64], di: &[f64], up: &[f64], rhs: &mut [f64]) -> Result<()> {
    let n = di.len();
    debug_assert!(lo.len() == n && up.len() == n && rhs.len() == n);
    let mut c = vec![0.0; n];
    let mut piv = di[0];
    if piv == 0.0 || !piv.is_finite() {
        return Err(Error::Singular(format!("pivot {piv} at row 0")));
    }
    c[0] = up[0] / piv;
    rhs[0] /= piv;
    for i in 1..n {
        piv = di[i] - lo[i] * c[i - 1];
        if piv == 0.0 || !piv.is_finite() {
            return Err(Error::Singular(format!("pivot {piv} at row {i}")));
        }
        c[i] = up[i] / piv;
        rhs[i] = (rhs[i] - lo[i] * rhs[i - 1]) / piv;
    }
    for i in (0..n - 1).rev() {
        rhs[i] -= c[i] * rhs[i + 1];
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solves_constant_coefficient_system() {
        // -u'' = 1 on (0,1), u(0)=u(1)=0, 5 interior points: u = x(1-x)/2.
        let n = 5;
        let h = 1.0 / 6.0;
        let lo = vec![-1.0 / (h * h); n];
        let di = vec![2.0 / (h * h); n];
        let up = vec![-1.0 / (h * h); n];
        let mut rhs = vec![1.0; n];
        solve(&lo, &di, &up, &mut rhs).unwrap();
        for (i, &v) in rhs.iter().enumerate() {
            let x = (i + 1) as f64 * h;
            assert!((v - x * (1.0 - x) / 2.0).abs() < 1e-12);
        }
    }

    #[test]
    fn reports_singular_matrix() {
        let lo = vec![0.0, 1.0];
        let di = vec![1.0, 1.0];
        let up = vec![1.0, 0.0];
        let mut rhs = vec![1.0, 1.0];
        // Second pivot becomes 1 - 1*1 = 0.
        assert!(solve(&lo, &di, &up, &mut rhs).is_err());
    }
}
