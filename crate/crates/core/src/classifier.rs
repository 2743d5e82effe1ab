//! Nearest-neighbor and nearest-centroid classification with per-class
//! accuracy reporting.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::{self, Write as _};
use std::str::FromStr;

use crate::dataset::{split, LabeledFeatureSet, SplitSpec};
use crate::error::{Error, Result};
use crate::numfmt::sig15;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClassifierKind {
    OneNN,
    NearestCentroid,
}

impl FromStr for ClassifierKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "1nn" | "nn" | "one-nn" => Ok(ClassifierKind::OneNN),
            "centroid" | "nearest-centroid" => Ok(ClassifierKind::NearestCentroid),
            other => Err(Error::domain(format!("unknown classifier '{other}'"))),
        }
    }
}

impl fmt::Display for ClassifierKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ClassifierKind::OneNN => "1nn",
            ClassifierKind::NearestCentroid => "centroid",
        })
    }
}

/// Stored prototypes: every exemplar for 1-NN, one mean per class for
/// nearest-centroid. Immutable once trained.
#[derive(Debug, Clone, PartialEq)]
pub struct TrainedModel {
    kind: ClassifierKind,
    dim: usize,
    prototypes: Vec<(String, Vec<f64>)>,
}

impl TrainedModel {
    pub fn kind(&self) -> ClassifierKind {
        self.kind
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn prototypes(&self) -> &[(String, Vec<f64>)] {
        &self.prototypes
    }

    pub fn classes(&self) -> Vec<String> {
        self.prototypes
            .iter()
            .map(|(l, _)| l.clone())
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect()
    }
}

pub fn train(set: &LabeledFeatureSet, kind: ClassifierKind) -> Result<TrainedModel> {
    let dim = set
        .dim()
        .ok_or_else(|| Error::domain("cannot train on an empty feature set"))?;
    let prototypes = match kind {
        ClassifierKind::OneNN => set
            .records()
            .iter()
            .map(|r| (r.label.clone(), r.features.clone()))
            .collect(),
        ClassifierKind::NearestCentroid => {
            let mut sums: BTreeMap<&str, (Vec<f64>, usize)> = BTreeMap::new();
            for r in set.records() {
                let (acc, n) = sums
                    .entry(r.label.as_str())
                    .or_insert_with(|| (vec![0.0; dim], 0));
                for (a, v) in acc.iter_mut().zip(&r.features) {
                    *a += v;
                }
                *n += 1;
            }
            sums.into_iter()
                .map(|(label, (acc, n))| {
                    (
                        label.to_string(),
                        acc.into_iter().map(|a| a / n as f64).collect(),
                    )
                })
                .collect()
        }
    };
    Ok(TrainedModel {
        kind,
        dim,
        prototypes,
    })
}

fn squared_distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// Label of the Euclidean-nearest prototype; equal distances resolve to the
/// lexicographically smallest label.
pub fn classify<'m>(model: &'m TrainedModel, features: &[f64]) -> Result<&'m str> {
    if features.len() != model.dim {
        return Err(Error::domain(format!(
            "query has {} features, model expects {}",
            features.len(),
            model.dim
        )));
    }
    let mut best: Option<(f64, &str)> = None;
    for (label, proto) in &model.prototypes {
        let d = squared_distance(proto, features);
        let better = match best {
            None => true,
            Some((bd, bl)) => d < bd || (d == bd && label.as_str() < bl),
        };
        if better {
            best = Some((d, label.as_str()));
        }
    }
    Ok(best.expect("trained model holds at least one prototype").1)
}

/// Per-class accuracies and the confusion matrix of one evaluation.
#[derive(Debug, Clone, PartialEq)]
pub struct EvalReport {
    /// Row/column labels of `confusion`, ascending.
    pub classes: Vec<String>,
    /// Accuracy for every class present in the test set.
    pub per_class_accuracy: BTreeMap<String, f64>,
    /// Unweighted mean of `per_class_accuracy`.
    pub average_accuracy: f64,
    /// `confusion[true][predicted]` counts.
    pub confusion: Vec<Vec<u64>>,
}

pub fn evaluate(model: &TrainedModel, test: &LabeledFeatureSet) -> Result<EvalReport> {
    if test.is_empty() {
        return Err(Error::domain("cannot evaluate on an empty test set"));
    }
    let classes: Vec<String> = model
        .classes()
        .into_iter()
        .chain(test.classes())
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let index: BTreeMap<&str, usize> = classes
        .iter()
        .enumerate()
        .map(|(i, c)| (c.as_str(), i))
        .collect();
    let mut confusion = vec![vec![0u64; classes.len()]; classes.len()];
    for r in test.records() {
        let predicted = classify(model, &r.features)?;
        confusion[index[r.label.as_str()]][index[predicted]] += 1;
    }
    let per_class_accuracy: BTreeMap<String, f64> = test
        .classes()
        .into_iter()
        .map(|c| {
            let row = &confusion[index[c.as_str()]];
            let total: u64 = row.iter().sum();
            let acc = row[index[c.as_str()]] as f64 / total as f64;
            (c, acc)
        })
        .collect();
    let average_accuracy =
        per_class_accuracy.values().sum::<f64>() / per_class_accuracy.len() as f64;
    Ok(EvalReport {
        classes,
        per_class_accuracy,
        average_accuracy,
        confusion,
    })
}

/// Trains on one half and tests on the other, then swaps the halves.
/// Returns `(validation, cross_validation)`.
pub fn cross_validate(
    full: &LabeledFeatureSet,
    spec: SplitSpec,
    kind: ClassifierKind,
) -> Result<(EvalReport, EvalReport)> {
    let (a, b) = split(full, spec)?;
    folds(&a, &b, kind)
}

/// Validation (train `a`, test `b`) and cross-validation (train `b`, test `a`).
pub fn folds(
    a: &LabeledFeatureSet,
    b: &LabeledFeatureSet,
    kind: ClassifierKind,
) -> Result<(EvalReport, EvalReport)> {
    let fold_a = evaluate(&train(a, kind)?, b)?;
    let fold_b = evaluate(&train(b, kind)?, a)?;
    Ok((fold_a, fold_b))
}

/// Validation and cross-validation accuracies per class, averaged over one
/// or more randomized trials.
#[derive(Debug, Clone, PartialEq)]
pub struct AccuracyTable {
    pub classes: Vec<String>,
    pub validation: BTreeMap<String, f64>,
    pub cross_validation: BTreeMap<String, f64>,
    pub average_validation: f64,
    pub average_cross_validation: f64,
    pub trials: usize,
}

impl AccuracyTable {
    pub fn from_trials(trials: &[(EvalReport, EvalReport)]) -> Result<Self> {
        if trials.is_empty() {
            return Err(Error::domain("no trials to summarize"));
        }
        let mean_of = |pick: fn(&(EvalReport, EvalReport)) -> &EvalReport| {
            let mut acc: BTreeMap<String, f64> = BTreeMap::new();
            for t in trials {
                for (c, v) in &pick(t).per_class_accuracy {
                    *acc.entry(c.clone()).or_insert(0.0) += v;
                }
            }
            for v in acc.values_mut() {
                *v /= trials.len() as f64;
            }
            let avg =
                trials.iter().map(|t| pick(t).average_accuracy).sum::<f64>() / trials.len() as f64;
            (acc, avg)
        };
        let (validation, average_validation) = mean_of(|t| &t.0);
        let (cross_validation, average_cross_validation) = mean_of(|t| &t.1);
        let classes = validation
            .keys()
            .chain(cross_validation.keys())
            .cloned()
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        Ok(AccuracyTable {
            classes,
            validation,
            cross_validation,
            average_validation,
            average_cross_validation,
            trials: trials.len(),
        })
    }

    /// `class,accuracy_v,accuracy_cv` rows plus a closing `average` row.
    /// Accuracies are fractions in `[0, 1]`.
    pub fn to_csv(&self) -> String {
        comparison_csv(&[("accuracy", self)])
    }
}

/// Several accuracy tables side by side: `class,<name>_v,<name>_cv,…` with a
/// closing `average` row.
pub fn comparison_csv(tables: &[(&str, &AccuracyTable)]) -> String {
    let classes: BTreeSet<&String> = tables.iter().flat_map(|(_, t)| &t.classes).collect();
    let mut out = String::from("class");
    for (name, _) in tables {
        let _ = write!(out, ",{name}_v,{name}_cv");
    }
    out.push('\n');
    let cell = |m: &BTreeMap<String, f64>, c: &str| m.get(c).map(|&v| sig15(v)).unwrap_or_default();
    for c in classes {
        out.push_str(c);
        for (_, t) in tables {
            let _ = write!(
                out,
                ",{},{}",
                cell(&t.validation, c),
                cell(&t.cross_validation, c)
            );
        }
        out.push('\n');
    }
    out.push_str("average");
    for (_, t) in tables {
        let _ = write!(
            out,
            ",{},{}",
            sig15(t.average_validation),
            sig15(t.average_cross_validation)
        );
    }
    out.push('\n');
    out
}

/// Runs `trials` seeded splits (seeds `spec.seed`, `spec.seed + 1`, …) and
/// averages the fold accuracies.
pub fn repeated_cross_validation(
    full: &LabeledFeatureSet,
    spec: SplitSpec,
    kind: ClassifierKind,
    trials: usize,
) -> Result<AccuracyTable> {
    if trials == 0 {
        return Err(Error::domain("--trials must be at least 1"));
    }
    let reports = (0..trials as u64)
        .map(|t| {
            cross_validate(
                full,
                SplitSpec {
                    seed: spec.seed.wrapping_add(t),
                    ..spec
                },
                kind,
            )
        })
        .collect::<Result<Vec<_>>>()?;
    AccuracyTable::from_trials(&reports)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::Record;
    use proptest::prelude::*;

    fn set(items: &[(&str, &[f64])]) -> LabeledFeatureSet {
        LabeledFeatureSet::new(
            items
                .iter()
                .enumerate()
                .map(|(i, (l, f))| Record {
                    label: l.to_string(),
                    source: format!("s{i}"),
                    features: f.to_vec(),
                })
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn one_nn_stores_exemplars() {
        let s = set(&[("a", &[0.1]), ("b", &[0.9])]);
        let m = train(&s, ClassifierKind::OneNN).unwrap();
        assert_eq!(
            m.prototypes(),
            &[("a".into(), vec![0.1]), ("b".into(), vec![0.9])]
        );
        assert_eq!(classify(&m, &[0.2]).unwrap(), "a");
        assert_eq!(classify(&m, &[0.9]).unwrap(), "b");
        assert!(classify(&m, &[0.2, 0.3]).is_err());
    }

    #[test]
    fn centroids_are_means() {
        let s = set(&[("a", &[0.2]), ("a", &[0.4]), ("b", &[5.0]), ("b", &[5.0])]);
        let m = train(&s, ClassifierKind::NearestCentroid).unwrap();
        let a = &m.prototypes()[0];
        assert_eq!(a.0, "a");
        assert!((a.1[0] - 0.3).abs() < 1e-15);
        assert_eq!(m.prototypes()[1].1, vec![5.0]);
        assert!(train(&LabeledFeatureSet::default(), ClassifierKind::OneNN).is_err());
    }

    #[test]
    fn ties_go_to_smallest_label() {
        let s = set(&[("b", &[1.0]), ("a", &[-1.0])]);
        let m = train(&s, ClassifierKind::OneNN).unwrap();
        assert_eq!(classify(&m, &[0.0]).unwrap(), "a");
    }

    #[test]
    fn memorization_and_total_failure() {
        let s = set(&[("a", &[0.0]), ("a", &[0.1]), ("b", &[1.0]), ("b", &[1.1])]);
        let m = train(&s, ClassifierKind::OneNN).unwrap();
        let r = evaluate(&m, &s).unwrap();
        assert_eq!(r.average_accuracy, 1.0);
        assert!(r.per_class_accuracy.values().all(|&v| v == 1.0));

        let swapped = set(&[("b", &[0.0]), ("a", &[1.0])]);
        let r = evaluate(&m, &swapped).unwrap();
        assert_eq!(r.average_accuracy, 0.0);
        assert_eq!(r.confusion, vec![vec![0, 1], vec![1, 0]]);
        assert!(evaluate(&m, &LabeledFeatureSet::default()).is_err());
    }

    #[test]
    fn average_is_unweighted_class_mean() {
        let train_set = set(&[("a", &[0.0]), ("b", &[10.0])]);
        let m = train(&train_set, ClassifierKind::OneNN).unwrap();
        // a: 3 of 4 correct; b: 1 of 1 correct.
        let test = set(&[
            ("a", &[0.0]),
            ("a", &[1.0]),
            ("a", &[2.0]),
            ("a", &[9.0]),
            ("b", &[10.0]),
        ]);
        let r = evaluate(&m, &test).unwrap();
        assert_eq!(r.per_class_accuracy["a"], 0.75);
        assert_eq!(r.average_accuracy, 0.875);
        assert_eq!(r.confusion[0].iter().sum::<u64>(), 4);
    }

    #[test]
    fn identical_halves_cross_validate_perfectly() {
        let a = set(&[("a", &[0.0]), ("b", &[1.0]), ("c", &[2.0])]);
        let (v, cv) = folds(&a, &a.clone(), ClassifierKind::OneNN).unwrap();
        assert_eq!(v.average_accuracy, 1.0);
        assert_eq!(cv.average_accuracy, 1.0);
    }

    #[test]
    fn cross_validation_is_deterministic() {
        let items: Vec<(String, Vec<f64>)> = (0..24)
            .map(|i| {
                (
                    format!("c{}", i % 3),
                    vec![(i % 3) as f64 + (i as f64) * 0.01],
                )
            })
            .collect();
        let refs: Vec<(&str, &[f64])> = items
            .iter()
            .map(|(l, f)| (l.as_str(), f.as_slice()))
            .collect();
        let s = set(&refs);
        let spec = SplitSpec::default();
        assert_eq!(
            cross_validate(&s, spec, ClassifierKind::OneNN).unwrap(),
            cross_validate(&s, spec, ClassifierKind::OneNN).unwrap()
        );
        let t = repeated_cross_validation(&s, spec, ClassifierKind::NearestCentroid, 3).unwrap();
        assert_eq!(t.trials, 3);
        let csv = t.to_csv();
        assert!(csv.starts_with("class,accuracy_v,accuracy_cv\nc0,"));
        assert!(csv.ends_with("average,1,1\n"), "{csv}");
    }

    #[test]
    fn classifier_names() {
        assert_eq!(
            "1nn".parse::<ClassifierKind>().unwrap(),
            ClassifierKind::OneNN
        );
        assert_eq!(
            "centroid".parse::<ClassifierKind>().unwrap(),
            ClassifierKind::NearestCentroid
        );
        assert!("svm".parse::<ClassifierKind>().is_err());
    }

    proptest! {
        #[test]
        fn affine_rescaling_preserves_labels(
            points in proptest::collection::vec(-100.0f64..100.0, 2..12),
            queries in proptest::collection::vec(-150.0f64..150.0, 1..10),
            slope in 0.01f64..50.0,
            shift in -10.0f64..10.0,
        ) {
            let labels = ["a", "b", "c"];
            let items: Vec<(&str, Vec<f64>)> = points.iter().enumerate()
                .map(|(i, &p)| (labels[i % 3], vec![p])).collect();
            let refs: Vec<(&str, &[f64])> = items.iter().map(|(l, f)| (*l, f.as_slice())).collect();
            let scaled: Vec<(&str, Vec<f64>)> = items.iter()
                .map(|(l, f)| (*l, vec![f[0] * slope + shift])).collect();
            let scaled_refs: Vec<(&str, &[f64])> = scaled.iter().map(|(l, f)| (*l, f.as_slice())).collect();
            let m = train(&set(&refs), ClassifierKind::OneNN).unwrap();
            let ms = train(&set(&scaled_refs), ClassifierKind::OneNN).unwrap();
            for q in queries {
                let mut by_dist: Vec<(f64, &str)> = items.iter().map(|(l, f)| ((f[0] - q).abs(), *l)).collect();
                by_dist.sort_by(|a, b| a.0.total_cmp(&b.0));
                let runner_up = by_dist.iter().find(|(_, l)| *l != by_dist[0].1);
                // Near-ties between labels may legitimately flip under rounding.
                if runner_up.is_some_and(|(d, _)| d - by_dist[0].0 < 1e-9) {
                    continue;
                }
                prop_assert_eq!(classify(&m, &[q]).unwrap(), classify(&ms, &[q * slope + shift]).unwrap());
            }
        }
    }
}
