use commloyalty::statkit::{binomial_sign_test, holm_bonferroni, mann_whitney_u, spearman, wilcoxon_signed_rank};
use proptest::prelude::*;

fn sample(max: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec((0i32..20).prop_map(|v| v as f64 / 2.0), 1..max)
}

fn in_unit(p: f64) -> bool {
    p > 0.0 && p <= 1.0
}

proptest! {
    #[test]
    fn mann_whitney_is_label_symmetric(x in sample(30), y in sample(30)) {
        let a = mann_whitney_u::<f64>(&x, &y).unwrap();
        let b = mann_whitney_u::<f64>(&y, &x).unwrap();
        prop_assert!((a.p_value - b.p_value).abs() < 1e-12);
        prop_assert!(in_unit(a.p_value));
    }

    #[test]
    fn signed_rank_p_in_unit_interval(d in prop::collection::vec(-10i32..10, 1..40)) {
        let d: Vec<f64> = d.into_iter().map(f64::from).collect();
        if let Ok(r) = wilcoxon_signed_rank::<f64>(&d) {
            prop_assert!(in_unit(r.p_value));
            let neg: Vec<f64> = d.iter().map(|v| -v).collect();
            let flipped = wilcoxon_signed_rank::<f64>(&neg).unwrap();
            prop_assert!((r.p_value - flipped.p_value).abs() < 1e-12);
        }
    }

    #[test]
    fn binomial_p_in_unit_interval(n in 1u64..400, frac in 0.0f64..=1.0, p0 in 0.05f64..0.95) {
        let k = (frac * n as f64).round() as u64;
        let r = binomial_sign_test::<f64>(k, n, p0).unwrap();
        prop_assert!(in_unit(r.p_value));
    }

    #[test]
    fn spearman_p_in_unit_interval(xy in prop::collection::vec((0i32..50, 0i32..50), 3..40)) {
        let (x, y): (Vec<f64>, Vec<f64>) = xy.into_iter().map(|(a, b)| (a as f64, b as f64)).unzip();
        if let Ok(r) = spearman::<f64>(&x, &y) {
            prop_assert!(in_unit(r.p_value));
            prop_assert!(r.statistic.abs() <= 1.0 + 1e-12);
        }
    }

    #[test]
    fn holm_rejections_are_monotone(
        ps in prop::collection::vec(0.0f64..0.2, 1..12),
        pick in any::<prop::sample::Index>(),
        shrink in 0.0f64..1.0,
    ) {
        let before = holm_bonferroni(&ps, 0.05);
        let mut lowered = ps.clone();
        let i = pick.index(ps.len());
        lowered[i] *= shrink;
        let after = holm_bonferroni(&lowered, 0.05);
        for (b, a) in before.iter().zip(&after) {
            prop_assert!(!b || *a);
        }
    }
}
