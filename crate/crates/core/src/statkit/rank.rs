use crate::scalar::Real;

/// Midranks (1-based, ties averaged) and the sizes of tie groups larger than one.
pub fn midranks<T: Real>(xs: &[T]) -> (Vec<T>, Vec<usize>) {
    let mut order: Vec<usize> = (0..xs.len()).collect();
    order.sort_by(|&a, &b| xs[a].partial_cmp(&xs[b]).expect("ranking NaN"));
    let mut ranks = vec![T::zero(); xs.len()];
    let mut ties = Vec::new();
    let mut i = 0;
    while i < order.len() {
        let mut j = i + 1;
        while j < order.len() && xs[order[j]] == xs[order[i]] {
            j += 1;
        }
        // positions i..j share rank (i+1 + j) / 2
        let r = T::count(i + 1 + j) / T::lit(2.0);
        for &k in &order[i..j] {
            ranks[k] = r;
        }
        if j - i > 1 {
            ties.push(j - i);
        }
        i = j;
    }
    (ranks, ties)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ties_share_average_rank() {
        let (r, t) = midranks(&[1.0, 2.0, 2.0, 4.0, 5.0, 6.0, 7.0, 7.0, 9.0, 10.0]);
        assert_eq!(r, vec![1.0, 2.5, 2.5, 4.0, 5.0, 6.0, 7.5, 7.5, 9.0, 10.0]);
        assert_eq!(t, vec![2, 2]);
    }
}
