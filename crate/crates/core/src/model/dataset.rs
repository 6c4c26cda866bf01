//! Labeled datasets and CSV ingestion.

use std::path::Path;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Feature matrix plus integer class labels. Features are conventionally
/// scaled to `[0, 1]`; the loader only enforces finiteness.
#[derive(Debug, Clone)]
pub struct Dataset<T> {
    features: Vec<Vec<T>>,
    labels: Vec<usize>,
}

impl<T: Scalar> Dataset<T> {
    pub fn new(features: Vec<Vec<T>>, labels: Vec<usize>) -> Result<Self> {
        if features.is_empty() {
            return Err(Error::InvalidArgument("dataset is empty".into()));
        }
        if features.len() != labels.len() {
            return Err(Error::InvalidArgument(format!(
                "{} feature rows but {} labels",
                features.len(),
                labels.len()
            )));
        }
        let dim = features[0].len();
        if dim == 0 {
            return Err(Error::InvalidArgument("samples have no features".into()));
        }
        for row in &features {
            if row.len() != dim {
                return Err(Error::InvalidArgument("ragged feature rows".into()));
            }
            if row.iter().any(|v| !v.is_finite()) {
                return Err(Error::NonFinite("dataset features"));
            }
        }
        Ok(Self { features, labels })
    }

    /// Load `features...,label` rows. `has_header` skips the first row.
    pub fn load_csv(path: impl AsRef<Path>, has_header: bool) -> Result<Self> {
        let mut reader = csv::ReaderBuilder::new()
            .has_headers(has_header)
            .flexible(false)
            .from_path(path.as_ref())
            .map_err(|e| Error::Csv(e.to_string()))?;
        let mut features = Vec::new();
        let mut labels = Vec::new();
        for (i, record) in reader.records().enumerate() {
            let record = record.map_err(|e| Error::Csv(e.to_string()))?;
            if record.len() < 2 {
                return Err(Error::Csv(format!(
                    "row {}: need at least one feature and a label",
                    i + 1
                )));
            }
            let mut row = Vec::with_capacity(record.len() - 1);
            for field in record.iter().take(record.len() - 1) {
                let v: f64 = field
                    .trim()
                    .parse()
                    .map_err(|_| Error::Csv(format!("row {}: bad feature {field:?}", i + 1)))?;
                row.push(T::from_f64_lossy(v));
            }
            let label_field = record.get(record.len() - 1).unwrap().trim();
            let label = parse_label(label_field)
                .ok_or_else(|| Error::Csv(format!("row {}: bad label {label_field:?}", i + 1)))?;
            features.push(row);
            labels.push(label);
        }
        Self::new(features, labels)
    }

    pub fn len(&self) -> usize {
        self.features.len()
    }

    pub fn is_empty(&self) -> bool {
        self.features.is_empty()
    }

    pub fn input_dim(&self) -> usize {
        self.features[0].len()
    }

    /// Highest label + 1.
    pub fn num_classes(&self) -> usize {
        self.labels.iter().copied().max().unwrap_or(0) + 1
    }

    pub fn sample(&self, i: usize) -> (&[T], usize) {
        (&self.features[i], self.labels[i])
    }

    pub fn iter(&self) -> impl Iterator<Item = (&[T], usize)> {
        self.features
            .iter()
            .map(|r| r.as_slice())
            .zip(self.labels.iter().copied())
    }

    /// Deterministic shuffled split; the first part holds
    /// `round(fraction * len)` samples.
    pub fn split(&self, fraction: f64, seed: u64) -> Result<(Self, Self)> {
        if !(0.0..=1.0).contains(&fraction) {
            return Err(Error::InvalidArgument("split fraction outside [0,1]".into()));
        }
        let mut order: Vec<usize> = (0..self.len()).collect();
        order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
        let cut = (fraction * self.len() as f64).round() as usize;
        let take = |idx: &[usize]| -> Result<Self> {
            Self::new(
                idx.iter().map(|&i| self.features[i].clone()).collect(),
                idx.iter().map(|&i| self.labels[i]).collect(),
            )
        };
        Ok((take(&order[..cut])?, take(&order[cut..])?))
    }
}

fn parse_label(field: &str) -> Option<usize> {
    if let Ok(v) = field.parse::<usize>() {
        return Some(v);
    }
    // tolerate "2.0"-style labels
    let f: f64 = field.parse().ok()?;
    if f.fract() == 0.0 && f >= 0.0 {
        Some(f as usize)
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    fn write_csv(content: &str) -> tempfile::NamedTempFile {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        f.write_all(content.as_bytes()).unwrap();
        f
    }

    #[test]
    fn loads_headerless_csv() {
        let f = write_csv("0.1,0.2,0\n0.9,0.8,1\n");
        let d = Dataset::<f64>::load_csv(f.path(), false).unwrap();
        assert_eq!(d.len(), 2);
        assert_eq!(d.input_dim(), 2);
        assert_eq!(d.num_classes(), 2);
        assert_eq!(d.sample(1), (&[0.9, 0.8][..], 1));
    }

    #[test]
    fn header_flag_skips_first_row() {
        let f = write_csv("a,b,label\n0.1,0.2,0\n");
        let d = Dataset::<f64>::load_csv(f.path(), true).unwrap();
        assert_eq!(d.len(), 1);
    }

    #[test]
    fn rejects_bad_label() {
        let f = write_csv("0.1,0.2,1.5\n");
        assert!(Dataset::<f64>::load_csv(f.path(), false).is_err());
    }

    #[test]
    fn split_is_deterministic_and_partitions() {
        let features: Vec<Vec<f64>> = (0..40).map(|i| vec![i as f64, -(i as f64)]).collect();
        let labels: Vec<usize> = (0..40).map(|i| i % 3).collect();
        let d = Dataset::new(features, labels).unwrap();
        let (a1, b1) = d.split(0.25, 9).unwrap();
        let (a2, b2) = d.split(0.25, 9).unwrap();
        assert_eq!(a1.len(), 10);
        assert_eq!(b1.len(), 30);
        assert_eq!(a1.features, a2.features);
        assert_eq!(b1.labels, b2.labels);
    }
}
