use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::dataset::{Class, Dataset};
use super::forest::{train_forest, ForestModel, ForestParams};
use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::statkit::binomial_sign_test;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Evaluation {
    pub n: usize,
    pub correct: usize,
    pub accuracy: f64,
    pub true_positive: usize,
    pub true_negative: usize,
    pub false_positive: usize,
    pub false_negative: usize,
    /// Two-sided exact binomial p-value of `correct` against chance (0.5).
    pub p_value: f64,
}

pub fn evaluate<T: Real>(model: &ForestModel<T>, test: &Dataset<T>) -> Result<Evaluation> {
    if test.is_empty() {
        return Err(Error::InsufficientData("empty test set".into()));
    }
    let mut counts = [[0usize; 2]; 2];
    for e in test.examples() {
        let pred = model.predict(&e.features);
        counts[usize::from(e.label.is_positive())][usize::from(pred.is_positive())] += 1;
    }
    let correct = counts[0][0] + counts[1][1];
    let n = test.len();
    let p = binomial_sign_test::<f64>(correct as u64, n as u64, 0.5)?.p_value;
    Ok(Evaluation {
        n,
        correct,
        accuracy: correct as f64 / n as f64,
        true_positive: counts[1][1],
        true_negative: counts[0][0],
        false_positive: counts[0][1],
        false_negative: counts[1][0],
        p_value: p,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LocoResult {
    pub folds: BTreeMap<String, Evaluation>,
    pub mean_accuracy: f64,
}

/// Trains on every community but one and tests on the held-out community,
/// once per community.
pub fn loco_evaluate<T: Real>(data: &Dataset<T>, params: &ForestParams) -> Result<LocoResult> {
    let groups = data.groups();
    if groups.len() < 2 {
        return Err(Error::InsufficientData(format!(
            "leave-one-community-out needs at least 2 groups, found {}",
            groups.len()
        )));
    }
    let folds = groups
        .par_iter()
        .map(|g| {
            let train = data.filter(|e| &e.group != g);
            let test = data.filter(|e| &e.group == g);
            let model = train_forest(&train, params)?;
            Ok((g.clone(), evaluate(&model, &test)?))
        })
        .collect::<Result<BTreeMap<_, _>>>()?;
    let mean_accuracy = folds.values().map(|e| e.accuracy).sum::<f64>() / folds.len() as f64;
    Ok(LocoResult { folds, mean_accuracy })
}

/// Predictions for every row, in dataset order.
pub fn predict_all<T: Real>(model: &ForestModel<T>, data: &Dataset<T>) -> Vec<Class> {
    data.examples().iter().map(|e| model.predict(&e.features)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mlpredict::dataset::Example;

    fn rows(group: &str, flip: bool, n: usize) -> Vec<Example<f64>> {
        (0..n)
            .map(|i| {
                let x = i as f64 / n as f64 - 0.5 + 0.5 / n as f64;
                Example {
                    features: vec![x],
                    label: Class::from_bool((x > 0.0) != flip),
                    group: group.into(),
                    unit: format!("{group}{i}"),
                }
            })
            .collect()
    }

    #[test]
    fn perfect_and_constant() {
        let mut ds = Dataset::new(["x"]);
        ds.extend(rows("a", false, 40)).unwrap();
        let model = train_forest(&ds, &ForestParams::default()).unwrap();
        let e = evaluate(&model, &ds.filter(|e| e.unit.ends_with('1'))).unwrap();
        assert_eq!(e.accuracy, 1.0);
        assert!(evaluate(&model, &ds.filter(|_| false)).is_err());
    }

    #[test]
    fn loco_folds() {
        let mut ds = Dataset::new(["x"]);
        ds.extend(rows("a", false, 60)).unwrap();
        ds.extend(rows("b", false, 60)).unwrap();
        let r = loco_evaluate(&ds, &ForestParams::default()).unwrap();
        assert_eq!(r.folds.len(), 2);
        assert!(r.folds.values().all(|e| e.accuracy >= 0.9));

        ds.extend(rows("c", false, 60)).unwrap();
        ds.extend(rows("flipped", true, 60)).unwrap();
        let r = loco_evaluate(&ds, &ForestParams::default()).unwrap();
        assert_eq!(r.folds.len(), 4);
        assert!(r.folds["flipped"].accuracy <= 0.5);

        let single = ds.filter(|e| e.group == "a");
        assert!(loco_evaluate(&single, &ForestParams::default()).is_err());
    }
}
