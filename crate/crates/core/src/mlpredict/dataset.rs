use std::collections::{BTreeMap, HashSet};
use std::io::{Read, Write};

use log::warn;
use rand::seq::{index, SliceRandom};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::{task_rng, Key};
use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Class {
    Negative,
    Positive,
}

impl Class {
    pub fn from_bool(positive: bool) -> Self {
        if positive {
            Class::Positive
        } else {
            Class::Negative
        }
    }

    pub fn is_positive(self) -> bool {
        self == Class::Positive
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Example<T> {
    pub features: Vec<T>,
    pub label: Class,
    /// Community id, used for leave-one-community-out folds.
    pub group: String,
    /// User or comment id; unique within a dataset.
    pub unit: String,
}

/// Rows with a fixed, named feature layout.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset<T> {
    feature_names: Vec<String>,
    examples: Vec<Example<T>>,
    units: HashSet<String>,
}

impl<T: Real> Dataset<T> {
    pub fn new<S: Into<String>>(feature_names: impl IntoIterator<Item = S>) -> Self {
        Dataset {
            feature_names: feature_names.into_iter().map(Into::into).collect(),
            examples: Vec::new(),
            units: HashSet::new(),
        }
    }

    pub fn push(&mut self, ex: Example<T>) -> Result<()> {
        if ex.features.len() != self.feature_names.len() {
            return Err(Error::Config(format!(
                "example `{}` has {} features, dataset has {}",
                ex.unit,
                ex.features.len(),
                self.feature_names.len()
            )));
        }
        if !self.units.insert(ex.unit.clone()) {
            return Err(Error::Config(format!("duplicate unit `{}`", ex.unit)));
        }
        self.examples.push(ex);
        Ok(())
    }

    pub fn extend(&mut self, rows: impl IntoIterator<Item = Example<T>>) -> Result<()> {
        rows.into_iter().try_for_each(|ex| self.push(ex))
    }

    pub fn feature_names(&self) -> &[String] {
        &self.feature_names
    }

    pub fn dim(&self) -> usize {
        self.feature_names.len()
    }

    pub fn examples(&self) -> &[Example<T>] {
        &self.examples
    }

    pub fn len(&self) -> usize {
        self.examples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.examples.is_empty()
    }

    /// `(negatives, positives)`.
    pub fn class_counts(&self) -> (usize, usize) {
        let pos = self.examples.iter().filter(|e| e.label.is_positive()).count();
        (self.len() - pos, pos)
    }

    /// `(negatives, positives)` per group.
    pub fn group_class_counts(&self) -> BTreeMap<String, (usize, usize)> {
        let mut m: BTreeMap<String, (usize, usize)> = BTreeMap::new();
        for e in &self.examples {
            let slot = m.entry(e.group.clone()).or_default();
            if e.label.is_positive() {
                slot.1 += 1;
            } else {
                slot.0 += 1;
            }
        }
        m
    }

    pub fn groups(&self) -> Vec<String> {
        let mut g: Vec<String> = self.examples.iter().map(|e| e.group.clone()).collect();
        g.sort();
        g.dedup();
        g
    }

    fn with_examples(&self, examples: Vec<Example<T>>) -> Self {
        let units = examples.iter().map(|e| e.unit.clone()).collect();
        Dataset {
            feature_names: self.feature_names.clone(),
            examples,
            units,
        }
    }

    pub fn filter(&self, keep: impl Fn(&Example<T>) -> bool) -> Self {
        self.with_examples(self.examples.iter().filter(|e| keep(e)).cloned().collect())
    }

    /// Keeps only the listed feature columns, in the given order.
    pub fn select_features(&self, columns: &[usize]) -> Self {
        let examples = self
            .examples
            .iter()
            .map(|e| Example {
                features: columns.iter().map(|&c| e.features[c]).collect(),
                ..e.clone()
            })
            .collect();
        Dataset {
            feature_names: columns.iter().map(|&c| self.feature_names[c].clone()).collect(),
            examples,
            units: self.units.clone(),
        }
    }

    /// Downsamples the majority class to the size of the minority class.
    pub fn balanced(&self, seed: u64, tag: &str) -> Self {
        let (neg, pos): (Vec<&Example<T>>, Vec<&Example<T>>) = self.examples.iter().partition(|e| !e.label.is_positive());
        let n = neg.len().min(pos.len());
        let mut rng = task_rng(seed, &[Key::from("balance"), Key::from(tag)]);
        let mut take = |side: Vec<&Example<T>>| -> Vec<Example<T>> {
            let mut idx = index::sample(&mut rng, side.len(), n).into_vec();
            idx.sort_unstable();
            idx.into_iter().map(|i| side[i].clone()).collect()
        };
        let mut rows = take(neg);
        rows.extend(take(pos));
        rows.sort_by(|a, b| a.unit.cmp(&b.unit));
        self.with_examples(rows)
    }

    /// Same rows with labels randomly permuted, for permutation-null controls.
    pub fn with_shuffled_labels(&self, seed: u64) -> Self {
        let mut labels: Vec<Class> = self.examples.iter().map(|e| e.label).collect();
        labels.shuffle(&mut task_rng(seed, &[Key::from("shuffle_labels")]));
        let rows = self
            .examples
            .iter()
            .zip(labels)
            .map(|(e, label)| Example { label, ..e.clone() })
            .collect();
        self.with_examples(rows)
    }

    /// Header `unit,group,label,<features...>`, label as 0/1.
    pub fn write_csv(&self, out: impl Write) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let mut header = vec!["unit".to_string(), "group".into(), "label".into()];
        header.extend(self.feature_names.iter().cloned());
        w.write_record(&header)?;
        for e in &self.examples {
            let mut rec = vec![e.unit.clone(), e.group.clone(), u8::from(e.label.is_positive()).to_string()];
            rec.extend(e.features.iter().map(|v| v.to_string()));
            w.write_record(&rec)?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn read_csv(input: impl Read) -> Result<Self> {
        let mut r = csv::Reader::from_reader(input);
        let header = r.headers()?.clone();
        if header.len() < 3 || &header[0] != "unit" || &header[1] != "group" || &header[2] != "label" {
            return Err(Error::Config("dataset header must start with unit,group,label".into()));
        }
        let mut ds = Dataset::new(header.iter().skip(3));
        for rec in r.records() {
            let rec = rec?;
            let label = match &rec[2] {
                "1" => Class::Positive,
                "0" => Class::Negative,
                other => return Err(Error::Config(format!("bad label `{other}`"))),
            };
            let features = rec
                .iter()
                .skip(3)
                .map(|v| {
                    v.parse::<f64>()
                        .map(T::lit)
                        .map_err(|_| Error::Config(format!("bad feature value `{v}`")))
                })
                .collect::<Result<Vec<T>>>()?;
            ds.push(Example {
                features,
                label,
                group: rec[1].to_string(),
                unit: rec[0].to_string(),
            })?;
        }
        Ok(ds)
    }
}

/// Samples `n` items per side, warning when a side is short.
pub(crate) fn sample_up_to<'a, X>(items: &'a [X], n: usize, rng: &mut crate::rng::TaskRng, what: &str) -> Vec<&'a X> {
    if items.len() < n {
        warn!("{what}: only {} available for a sample of {n}", items.len());
    }
    let mut idx = index::sample(rng, items.len(), n.min(items.len())).into_vec();
    idx.sort_unstable();
    idx.into_iter().map(|i| &items[i]).collect()
}
