use commloyalty::mlpredict::{evaluate, predict_all, train_forest, Class, Dataset, Example, ForestParams};
use commloyalty::rng::{task_rng, Key};
use proptest::prelude::*;
use rand::Rng;
use rand_distr::StandardNormal;

fn dataset() -> impl Strategy<Value = Dataset<f64>> {
    (1usize..6).prop_flat_map(|d| {
        prop::collection::vec((prop::collection::vec(-5.0f64..5.0, d), any::<bool>()), 4..60).prop_map(move |rows| {
            let mut ds = Dataset::new((0..d).map(|i| format!("f{i}")));
            for (i, (features, pos)) in rows.into_iter().enumerate() {
                ds.push(Example {
                    features,
                    // both classes always present
                    label: Class::from_bool(if i < 2 { i == 0 } else { pos }),
                    group: format!("g{}", i % 3),
                    unit: format!("u{i}"),
                })
                .unwrap();
            }
            ds
        })
    })
}

/// Two overlapping Gaussian classes; the first feature carries the signal.
fn benchmark(n: usize, seed: u64) -> Dataset<f64> {
    let mut rng = task_rng(seed, &[Key::from("benchmark")]);
    let mut ds = Dataset::new(["signal", "noise_a", "noise_b", "noise_c"]);
    for i in 0..n {
        let pos = i % 2 == 0;
        let mut features: Vec<f64> = (0..4).map(|_| rng.sample(StandardNormal)).collect();
        features[0] += if pos { 0.6 } else { -0.6 };
        ds.push(Example {
            features,
            label: Class::from_bool(pos),
            group: "g".into(),
            unit: format!("u{i}"),
        })
        .unwrap();
    }
    ds
}

fn small_forest(seed: u64) -> ForestParams {
    ForestParams {
        n_trees: 15,
        min_samples_split: 2,
        seed,
        ..ForestParams::default()
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn training_is_deterministic(ds in dataset(), seed in any::<u64>()) {
        let a = train_forest(&ds, &small_forest(seed)).unwrap();
        let b = train_forest(&ds, &small_forest(seed)).unwrap();
        prop_assert_eq!(&a, &b);
        prop_assert_eq!(predict_all(&a, &ds), predict_all(&b, &ds));
    }

    #[test]
    fn splits_index_existing_features(ds in dataset(), seed in any::<u64>()) {
        let model = train_forest(&ds, &small_forest(seed)).unwrap();
        for t in model.trees() {
            if let Some(f) = t.max_split_feature() {
                prop_assert!(f < ds.dim());
            }
        }
    }

    #[test]
    fn balanced_classes_are_equal(ds in dataset(), seed in any::<u64>()) {
        let b = ds.balanced(seed, "prop");
        let (neg, pos) = b.class_counts();
        let (n0, p0) = ds.class_counts();
        prop_assert_eq!(neg, pos);
        prop_assert_eq!(neg, n0.min(p0));
    }
}

#[test]
fn larger_ensembles_vary_less_across_seeds() {
    let train = benchmark(300, 1);
    let test = benchmark(400, 2);
    let spread = |n_trees: usize| {
        let acc: Vec<f64> = (0..10)
            .map(|seed| {
                let p = ForestParams {
                    n_trees,
                    seed,
                    ..ForestParams::default()
                };
                evaluate(&train_forest(&train, &p).unwrap(), &test).unwrap().accuracy
            })
            .collect();
        let m = acc.iter().sum::<f64>() / acc.len() as f64;
        acc.iter().map(|a| (a - m).powi(2)).sum::<f64>() / (acc.len() - 1) as f64
    };
    let (v10, v100) = (spread(10), spread(100));
    assert!(v100 < v10, "variance 10 trees {v10:.2e}, 100 trees {v100:.2e}");
}
