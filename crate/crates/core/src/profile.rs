//! Initial-profile specifications: named shapes and tabulated data.

use crate::error::{Error, Result};

/// A radial profile `[0, R0] -> R`, either a named shape or tabulated
/// `(r, value)` pairs with linear interpolation.
#[derive(Debug, Clone, PartialEq)]
pub enum ProfileSpec {
    Constant(f64),
    /// `amplitude * sin^2(pi r / r0)` on `[0, r0]`, zero beyond.
    SinSqBump { r0: f64, amplitude: f64 },
    /// C1 ramp: zero on `[0, r0]`, `outer * s((r - r0)/(R0 - r0))` beyond,
    /// with the cubic smoothstep `s(x) = x^2 (3 - 2x)`.
    SmoothstepRamp { r0: f64, outer: f64 },
    /// Velocity solved from the initial force balance; only valid as `u0`.
    Compatible,
    /// The manufactured solution's field at `t = 0`.
    Manufactured(ManufacturedField),
    /// Two-column `(r, value)` table, strictly increasing in `r`.
    Tabulated(Vec<(f64, f64)>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ManufacturedField {
    Rho,
    U,
    B,
}

impl ProfileSpec {
    /// Evaluates the profile at radius `r` for a domain of radius `r0_domain`.
    ///
    /// Errors when the profile has no pointwise value there (`Compatible`)
    /// or a table does not cover `r`.
    pub fn sample(&self, r: f64, r0_domain: f64) -> Result<f64> {
        match self {
            ProfileSpec::Constant(v) => Ok(*v),
            ProfileSpec::SinSqBump { r0, amplitude } => {
                if r <= *r0 {
                    let s = (std::f64::consts::PI * r / r0).sin();
                    Ok(amplitude * s * s)
                } else {
                    Ok(0.0)
                }
            }
            ProfileSpec::SmoothstepRamp { r0, outer } => {
                if r <= *r0 {
                    Ok(0.0)
                } else {
                    let x = ((r - r0) / (r0_domain - r0)).clamp(0.0, 1.0);
                    Ok(outer * x * x * (3.0 - 2.0 * x))
                }
            }
            ProfileSpec::Compatible => Err(Error::InvalidProfile(
                "compatible velocity has no pointwise sample; build it from (rho0, B0)".into(),
            )),
            ProfileSpec::Manufactured(field) => {
                // Evaluated through the closed forms in `mms`; the amplitudes
                // there are fixed, only R0 varies.
                let params = crate::params::FluidParams::new(1.0, 0.0, 1.0, 2.0, r0_domain)?;
                let m = crate::mms::Manufactured::new(params);
                Ok(match field {
                    ManufacturedField::Rho => m.rho(r, 0.0),
                    ManufacturedField::U => m.u(r, 0.0),
                    ManufacturedField::B => m.b(r, 0.0),
                })
            }
            ProfileSpec::Tabulated(rows) => {
                let first = rows.first().ok_or_else(|| {
                    Error::InvalidProfile("tabulated profile is empty".into())
                })?;
                let last = rows.last().unwrap();
                if r < first.0 - 1e-12 || r > last.0 + 1e-12 {
                    return Err(Error::InvalidProfile(format!(
                        "tabulated profile undefined at r = {r} (covers [{}, {}])",
                        first.0, last.0
                    )));
                }
                let r = r.clamp(first.0, last.0);
                let k = rows.partition_point(|&(rr, _)| rr <= r);
                if k == 0 {
                    return Ok(first.1);
                }
                if k == rows.len() {
                    return Ok(last.1);
                }
                let (r0, v0) = rows[k - 1];
                let (r1, v1) = rows[k];
                let frac = if r1 > r0 { (r - r0) / (r1 - r0) } else { 0.0 };
                Ok(v0 + frac * (v1 - v0))
            }
        }
    }

    /// Parses two-column whitespace-separated text; `#` starts a comment.
    pub fn from_table_text(text: &str) -> Result<Self> {
        let mut rows = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let mut it = line.split_whitespace();
            let parse = |tok: Option<&str>| -> Result<f64> {
                tok.ok_or_else(|| Error::Config {
                    line: lineno + 1,
                    msg: "expected two columns (r, value)".into(),
                })?
                .parse::<f64>()
                .map_err(|e| Error::Config { line: lineno + 1, msg: format!("bad number: {e}") })
            };
            let r = parse(it.next())?;
            let v = parse(it.next())?;
            if it.next().is_some() {
                return Err(Error::Config {
                    line: lineno + 1,
                    msg: "expected exactly two columns".into(),
                });
            }
            rows.push((r, v));
        }
        if rows.windows(2).any(|w| w[1].0 <= w[0].0) {
            return Err(Error::InvalidProfile(
                "tabulated radii must be strictly increasing".into(),
            ));
        }
        Ok(ProfileSpec::Tabulated(rows))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sin_sq_bump_integrates_to_half_support() {
        // int_0^{r0} sin^2(pi r / r0) dr = r0 / 2.
        let p = ProfileSpec::SinSqBump { r0: 0.5, amplitude: 1.0 };
        let n = 4000;
        let h = 0.5 / n as f64;
        let mut s = 0.0;
        for i in 0..=n {
            let w = if i == 0 || i == n { 0.5 } else { 1.0 };
            s += w * p.sample(i as f64 * h, 1.0).unwrap();
        }
        assert!((s * h - 0.25).abs() < 1e-10);
        assert_eq!(p.sample(0.7, 1.0).unwrap(), 0.0);
        assert_eq!(p.sample(0.0, 1.0).unwrap(), 0.0);
    }

    #[test]
    fn smoothstep_ramp_endpoints() {
        let p = ProfileSpec::SmoothstepRamp { r0: 0.5, outer: 1.0 };
        assert_eq!(p.sample(0.25, 1.0).unwrap(), 0.0);
        assert_eq!(p.sample(0.5, 1.0).unwrap(), 0.0);
        assert!((p.sample(1.0, 1.0).unwrap() - 1.0).abs() < 1e-15);
        assert!((p.sample(0.75, 1.0).unwrap() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn tabulated_interpolates_and_rejects_outside() {
        let p = ProfileSpec::from_table_text("0.0 1.0\n0.5 2.0\n1.0 0.0\n").unwrap();
        assert!((p.sample(0.25, 1.0).unwrap() - 1.5).abs() < 1e-15);
        let short = ProfileSpec::from_table_text("0.2 1.0\n0.5 2.0\n").unwrap();
        assert!(short.sample(0.1, 1.0).is_err());
    }

    #[test]
    fn table_text_errors_name_the_line() {
        let err = ProfileSpec::from_table_text("0.0 1.0\noops\n").unwrap_err();
        assert!(err.to_string().contains("line 2"), "{err}");
    }

    #[test]
    fn compatible_has_no_pointwise_sample() {
        assert!(ProfileSpec::Compatible.sample(0.5, 1.0).is_err());
    }
}
