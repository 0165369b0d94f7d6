use statrs::distribution::{ContinuousCDF, StudentsT};

use super::rank::midranks;
use super::{Method, TestResult};
use crate::error::{Error, Result};
use crate::scalar::{pearson, Real};

/// Spearman's rho (Pearson correlation of midranks) with a t-approximation p-value.
pub fn spearman<T: Real>(x: &[T], y: &[T]) -> Result<TestResult<T>> {
    if x.len() != y.len() {
        return Err(Error::InsufficientData(format!(
            "spearman on samples of length {} and {}",
            x.len(),
            y.len()
        )));
    }
    let n = x.len();
    if n < 3 {
        return Err(Error::InsufficientData(format!("spearman needs 3 pairs, got {n}")));
    }
    let (rx, _) = midranks(x);
    let (ry, _) = midranks(y);
    let rho = pearson(&rx, &ry).ok_or_else(|| Error::InsufficientData("zero rank variance".into()))?;
    let r = rho.as_f64();
    let p = if (1.0 - r.abs()) <= 1e-15 {
        0.0
    } else {
        let dof = (n - 2) as f64;
        let t = r * (dof / (1.0 - r * r)).sqrt();
        let dist = StudentsT::new(0.0, 1.0, dof).expect("positive dof");
        2.0 * dist.sf(t.abs())
    };
    Ok(TestResult::new(rho, p, vec![n], Method::Spearman, false))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn perfect_orders() {
        let r = spearman::<f64>(&[1.0, 2.0, 3.0], &[3.0, 2.0, 1.0]).unwrap();
        assert!((r.statistic + 1.0).abs() < 1e-12);
        let r = spearman::<f64>(&[1.0, 5.0, 7.0, 20.0], &[0.1, 0.2, 3.0, 3.5]).unwrap();
        assert!((r.statistic - 1.0).abs() < 1e-12);
        assert!(r.p_floored);
    }

    #[test]
    fn degenerate_inputs() {
        assert!(spearman(&[1.0, 1.0, 1.0], &[1.0, 2.0, 3.0]).is_err());
        assert!(spearman(&[1.0, 2.0], &[1.0, 2.0]).is_err());
    }
}
