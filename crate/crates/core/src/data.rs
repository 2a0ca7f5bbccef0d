//! Target distributions: CSV ingest, equal-width binning onto the `2^N`
//! basis states, and resampling of the raw values.

use std::f64::consts::PI;

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::quantum::MAX_QUBITS;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DataError {
    #[error("line {0}: not a single numeric value")]
    MalformedRow(u64),
    #[error("line {0}: value is not finite")]
    NonFiniteValue(u64),
    #[error("no data rows")]
    EmptyFile,
    #[error("all samples are equal, the value range is degenerate")]
    DegenerateData,
    #[error("qubit count {0} outside 1..={MAX_QUBITS}")]
    QubitCountOutOfRange(usize),
    #[error("unsupported discretization {0:?}")]
    UnknownDiscretization(String),
}

/// Parses a single-column numeric CSV. The first line may be a header;
/// any later non-numeric line is an error. Blank lines are skipped.
pub fn load_samples(csv_bytes: &[u8]) -> Result<Vec<f64>, DataError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .from_reader(csv_bytes);
    let mut values = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let line = (i + 1) as u64;
        let record = record.map_err(|e| {
            DataError::MalformedRow(e.position().map_or(line, |p| p.line()))
        })?;
        let line = record.position().map_or(line, |p| p.line());
        if record.len() == 1 && record[0].trim().is_empty() {
            continue;
        }
        let parsed = match record.len() {
            1 => record[0].trim().parse::<f64>().ok(),
            _ => None,
        };
        match parsed {
            Some(v) if v.is_finite() => values.push(v),
            Some(_) => return Err(DataError::NonFiniteValue(line)),
            None if line == 1 => {} // header
            None => return Err(DataError::MalformedRow(line)),
        }
    }
    if values.is_empty() {
        return Err(DataError::EmptyFile);
    }
    Ok(values)
}

/// Binned target distribution over `2^N` equal-width intervals of `[a, b]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TargetDistribution {
    pub range: (f64, f64),
    pub num_qubits: usize,
    pub bin_probabilities: Vec<f64>,
    pub raw_samples: Vec<f64>,
}

impl TargetDistribution {
    pub fn num_bins(&self) -> usize {
        self.bin_probabilities.len()
    }

    pub fn bin_width(&self) -> f64 {
        (self.range.1 - self.range.0) / self.num_bins() as f64
    }

    /// Lower edge of bin `i`.
    pub fn bin_start(&self, i: usize) -> f64 {
        bin_edge(self.range.0, self.range.1, self.num_bins(), i)
    }

    /// Mean and standard deviation of the bin index under the binned
    /// distribution.
    pub fn index_moments(&self) -> (f64, f64) {
        let mean: f64 = self
            .bin_probabilities
            .iter()
            .enumerate()
            .map(|(i, p)| i as f64 * p)
            .sum();
        let var: f64 = self
            .bin_probabilities
            .iter()
            .enumerate()
            .map(|(i, p)| p * (i as f64 - mean).powi(2))
            .sum();
        (mean, var.sqrt())
    }

    /// Draws `n` raw values with replacement.
    pub fn resample<R: Rng + ?Sized>(&self, n: usize, rng: &mut R) -> Vec<f64> {
        resample(&self.raw_samples, n, rng)
    }
}

fn bin_edge(a: f64, b: f64, bins: usize, i: usize) -> f64 {
    if i == bins {
        b
    } else {
        a + (b - a) * i as f64 / bins as f64
    }
}

/// Index of the bin holding `x`: `[start_i, start_{i+1})`, last bin closed.
fn bin_index(x: f64, a: f64, b: f64, bins: usize) -> usize {
    let guess = (((x - a) / (b - a)) * bins as f64).floor();
    let mut i = (guess.max(0.0) as usize).min(bins - 1);
    // settle round-off against the edges used by `bin_start`
    while i > 0 && x < bin_edge(a, b, bins, i) {
        i -= 1;
    }
    while i + 1 < bins && x >= bin_edge(a, b, bins, i + 1) {
        i += 1;
    }
    i
}

/// Equal-width histogram over `[min, max]` with `2^N` bins.
///
/// `mode` must be `"optimal"`, the only scheme the configuration format names.
pub fn discretize(samples: &[f64], num_qubits: usize, mode: &str) -> Result<TargetDistribution, DataError> {
    if !mode.eq_ignore_ascii_case("optimal") {
        return Err(DataError::UnknownDiscretization(mode.to_string()));
    }
    if !(1..=MAX_QUBITS).contains(&num_qubits) {
        return Err(DataError::QubitCountOutOfRange(num_qubits));
    }
    if samples.is_empty() {
        return Err(DataError::EmptyFile);
    }
    let a = samples.iter().copied().fold(f64::INFINITY, f64::min);
    let b = samples.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if !(a < b) {
        return Err(DataError::DegenerateData);
    }
    let bins = 1usize << num_qubits;
    let mut counts = vec![0u64; bins];
    for &x in samples {
        counts[bin_index(x, a, b, bins)] += 1;
    }
    let total = samples.len() as f64;
    let bin_probabilities = counts.iter().map(|&c| c as f64 / total).collect();
    Ok(TargetDistribution {
        range: (a, b),
        num_qubits,
        bin_probabilities,
        raw_samples: samples.to_vec(),
    })
}

/// `n` draws with replacement.
pub fn resample<R: Rng + ?Sized>(raw: &[f64], n: usize, rng: &mut R) -> Vec<f64> {
    assert!(!raw.is_empty(), "cannot resample an empty set");
    (0..n).map(|_| raw[rng.random_range(0..raw.len())]).collect()
}

/// Synthetic stand-in for hourly price data: a two-component Gaussian
/// mixture (weights 0.65/0.35, means 28/72, std 12), clipped to `[0, 100]`.
pub fn synthetic_bimodal<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<f64> {
    (0..n)
        .map(|_| {
            let (mean, std) = if rng.random::<f64>() < 0.65 {
                (28.0, 12.0)
            } else {
                (72.0, 12.0)
            };
            // Box–Muller
            let u1: f64 = 1.0 - rng.random::<f64>();
            let u2: f64 = rng.random();
            let z = (-2.0 * u1.ln()).sqrt() * (2.0 * PI * u2).cos();
            (mean + std * z).clamp(0.0, 100.0)
        })
        .collect()
}

/// Renders samples in the format accepted by [`load_samples`].
pub fn samples_to_csv(samples: &[f64]) -> String {
    let mut out = String::from("price\n");
    for v in samples {
        out.push_str(&format!("{v}\n"));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum::map_to_range;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn load_with_and_without_header() {
        assert_eq!(load_samples(b"price\n1.5\n2.5\n").unwrap(), vec![1.5, 2.5]);
        assert_eq!(load_samples(b"1.0\n").unwrap(), vec![1.0]);
        assert_eq!(load_samples(b"v\r\n3\r\n4\r\n").unwrap(), vec![3.0, 4.0]);
    }

    #[test]
    fn load_errors() {
        assert_eq!(load_samples(b"price\n1\nabc\n"), Err(DataError::MalformedRow(3)));
        assert_eq!(load_samples(b"1\n2,3\n"), Err(DataError::MalformedRow(2)));
        assert_eq!(load_samples(b"price\n"), Err(DataError::EmptyFile));
        assert_eq!(load_samples(b""), Err(DataError::EmptyFile));
        assert_eq!(load_samples(b"1\ninf\n"), Err(DataError::NonFiniteValue(2)));
    }

    #[test]
    fn discretize_examples() {
        let t = discretize(&[0.0, 1.0, 2.0, 3.0], 2, "optimal").unwrap();
        assert_eq!(t.bin_probabilities, vec![0.25; 4]);
        let t = discretize(&[0.0, 0.0, 0.0, 3.0], 1, "optimal").unwrap();
        assert_eq!(t.bin_probabilities, vec![0.75, 0.25]);
        assert_eq!(t.range, (0.0, 3.0));
    }

    #[test]
    fn discretize_errors() {
        assert_eq!(discretize(&[2.0, 2.0], 2, "optimal"), Err(DataError::DegenerateData));
        assert_eq!(discretize(&[1.0, 2.0], 13, "optimal"), Err(DataError::QubitCountOutOfRange(13)));
        assert!(matches!(
            discretize(&[1.0, 2.0], 2, "quantile"),
            Err(DataError::UnknownDiscretization(_))
        ));
    }

    #[test]
    fn edges_belong_to_upper_bin() {
        // [0, 8) in 8 bins of width 1: x = i lands in bin i, x = 8 in bin 7
        let mut samples: Vec<f64> = (0..=8).map(f64::from).collect();
        samples.push(7.999);
        let t = discretize(&samples, 3, "optimal").unwrap();
        let counts: Vec<f64> = t.bin_probabilities.iter().map(|p| p * samples.len() as f64).collect();
        let expected = [1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 3.0];
        for (c, e) in counts.iter().zip(expected) {
            assert!((c - e).abs() < 1e-9);
        }
    }

    #[test]
    fn gaussian_histogram_matches_bruteforce() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let normal = rand_distr::Normal::new(10.0, 3.0).unwrap();
        let samples: Vec<f64> = (0..20_000).map(|_| rand::Rng::sample(&mut rng, normal)).collect();
        let t = discretize(&samples, 5, "optimal").unwrap();
        // oracle: test every sample against every interval
        let bins = 32;
        let mut counts = vec![0usize; bins];
        for &x in &samples {
            let hits: Vec<usize> = (0..bins)
                .filter(|&i| {
                    let lo = t.bin_start(i);
                    let hi = t.bin_start(i + 1);
                    x >= lo && (x < hi || (i == bins - 1 && x <= hi))
                })
                .collect();
            assert_eq!(hits.len(), 1, "sample {x} in {hits:?}");
            counts[hits[0]] += 1;
        }
        let expected: Vec<f64> = counts.iter().map(|&c| c as f64 / 20_000.0).collect();
        assert_eq!(t.bin_probabilities, expected);
    }

    #[test]
    fn resample_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert_eq!(resample(&[4.2], 1, &mut rng), vec![4.2]);
        let raw: Vec<f64> = (0..100).map(f64::from).collect();
        let a = resample(&raw, 20_000, &mut ChaCha8Rng::seed_from_u64(5));
        let b = resample(&raw, 20_000, &mut ChaCha8Rng::seed_from_u64(5));
        assert_eq!(a, b);
    }

    #[test]
    fn index_moments_of_point_mass() {
        let t = discretize(&[0.0, 3.0, 3.0, 3.0], 1, "optimal").unwrap();
        let (m, s) = t.index_moments();
        assert!((m - 0.75).abs() < 1e-12);
        assert!((s - (0.75f64 * 0.25).sqrt()).abs() < 1e-12);
    }

    #[test]
    fn synthetic_data_is_bimodal() {
        let s = synthetic_bimodal(20_000, &mut ChaCha8Rng::seed_from_u64(1));
        let t = discretize(&s, 3, "optimal").unwrap();
        let p = &t.bin_probabilities;
        // a trough between two peaks
        let peak_lo = (0..4).max_by(|&i, &j| p[i].total_cmp(&p[j])).unwrap();
        let peak_hi = (4..8).max_by(|&i, &j| p[i].total_cmp(&p[j])).unwrap();
        let trough = (peak_lo..=peak_hi).map(|i| p[i]).fold(f64::INFINITY, f64::min);
        assert!(trough < 0.75 * p[peak_lo].min(p[peak_hi]), "{p:?}");
        assert_eq!(load_samples(samples_to_csv(&s).as_bytes()).unwrap(), s);
    }

    proptest! {
        #[test]
        fn counts_cover_every_sample(samples in prop::collection::vec(-1e3f64..1e3, 2..300), n in 1usize..=8) {
            prop_assume!(samples.iter().any(|&x| x != samples[0]));
            let t = discretize(&samples, n, "optimal").unwrap();
            let total: f64 = t.bin_probabilities.iter().sum();
            prop_assert!((total - 1.0).abs() < 1e-12);
            let counts: f64 = t.bin_probabilities.iter().map(|p| p * samples.len() as f64).sum();
            prop_assert!((counts - samples.len() as f64).abs() < 1e-6);
        }

        #[test]
        fn mapped_index_lands_in_its_bin(a in -1e3f64..1e3, width in 1e-3f64..1e3, n in 1usize..=12) {
            let b = a + width;
            let t = discretize(&[a, b], n, "optimal").unwrap();
            let bins = 1usize << n;
            for i in 0..bins {
                let x = map_to_range(i, a, b, n).unwrap();
                let lo = t.bin_start(i);
                let hi = t.bin_start(i + 1);
                let slack = 1e-12 * (a.abs() + b.abs());
                prop_assert!(x >= lo - slack && x <= hi + slack, "i={} x={} [{}, {}]", i, x, lo, hi);
            }
        }
    }
}
