/// Holm-Bonferroni step-down procedure. Returns rejection flags in input order.
pub fn holm_bonferroni(p_values: &[f64], alpha: f64) -> Vec<bool> {
    let m = p_values.len();
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&a, &b| p_values[a].partial_cmp(&p_values[b]).expect("p-value NaN"));
    let mut reject = vec![false; m];
    for (i, &idx) in order.iter().enumerate() {
        if p_values[idx] <= alpha / (m - i) as f64 {
            reject[idx] = true;
        } else {
            break;
        }
    }
    reject
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn traces() {
        assert_eq!(holm_bonferroni(&[0.01, 0.04], 0.05), vec![true, true]);
        assert_eq!(holm_bonferroni(&[0.03, 0.04], 0.05), vec![false, false]);
        assert_eq!(holm_bonferroni(&[0.04], 0.05), vec![true]);
        assert_eq!(holm_bonferroni(&[0.04, 0.001, 0.5], 0.05), vec![false, true, false]);
    }
}
