//! Welch's unequal-variance two-sample t-test.

use serde::Serialize;
use statrs::distribution::{ContinuousCDF, StudentsT};

use crate::error::{Error, Result};

/// Smallest p-value printed as a number; anything below prints as `< 2.2e-16`.
pub const P_VALUE_FLOOR: f64 = 2.2e-16;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TTestResult {
    pub t_statistic: f64,
    pub degrees_freedom: f64,
    /// Two-sided.
    pub p_value: f64,
    pub mean_a: f64,
    pub mean_b: f64,
    pub n_a: usize,
    pub n_b: usize,
}

impl TTestResult {
    /// p-value as conventionally reported, with tiny values clamped.
    pub fn p_value_display(&self) -> String {
        if self.p_value < P_VALUE_FLOOR {
            "< 2.2e-16".to_string()
        } else {
            crate::format::real(self.p_value)
        }
    }
}

fn mean_var(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, var)
}

pub fn welch_t_test(a: &[f64], b: &[f64]) -> Result<TTestResult> {
    if a.len() < 2 || b.len() < 2 {
        return Err(Error::domain(format!(
            "t-test needs at least 2 observations per sample (got {} and {})",
            a.len(),
            b.len()
        )));
    }
    let (ma, va) = mean_var(a);
    let (mb, vb) = mean_var(b);
    if !va.is_finite() || !vb.is_finite() {
        return Err(Error::domain("sample variance is not finite"));
    }
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (sa, sb) = (va / na, vb / nb);
    let se2 = sa + sb;
    let base = TTestResult {
        t_statistic: 0.0,
        degrees_freedom: na + nb - 2.0,
        p_value: 1.0,
        mean_a: ma,
        mean_b: mb,
        n_a: a.len(),
        n_b: b.len(),
    };
    if se2 == 0.0 {
        // Both samples constant.
        return Ok(if ma == mb {
            base
        } else {
            TTestResult {
                t_statistic: if ma > mb { f64::INFINITY } else { f64::NEG_INFINITY },
                p_value: 0.0,
                ..base
            }
        });
    }
    let t = (ma - mb) / se2.sqrt();
    let df = se2 * se2 / (sa * sa / (na - 1.0) + sb * sb / (nb - 1.0));
    let dist = StudentsT::new(0.0, 1.0, df).map_err(|e| Error::domain(format!("t distribution: {e}")))?;
    let p = (2.0 * dist.cdf(-t.abs())).clamp(0.0, 1.0);
    Ok(TTestResult {
        t_statistic: t,
        degrees_freedom: df,
        p_value: p,
        ..base
    })
}
