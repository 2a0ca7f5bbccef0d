use serde::{Deserialize, Serialize};

use super::MetricsError;
use crate::gan::RunResult;

/// Statistics of one experiment specification over its successful runs.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AggregateStats {
    pub spec_id: String,
    pub mu_ks: f64,
    pub sigma_ks: f64,
    pub mu_re: f64,
    pub sigma_re: f64,
    pub mu_depth: f64,
    pub sigma_depth: f64,
    /// Mean over runs of the generator-loss standard deviation across the
    /// final tenth of training.
    pub mu_loss_instability: f64,
    pub n_runs: usize,
}

/// Population mean and standard deviation.
pub fn mean_std(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n;
    (mean, var.sqrt())
}

fn loss_instability(curve: &[f64]) -> f64 {
    if curve.is_empty() {
        return 0.0;
    }
    let tail = (curve.len() / 10).max(1);
    mean_std(&curve[curve.len() - tail..]).1
}

pub fn aggregate_runs(results: &[RunResult]) -> Result<AggregateStats, MetricsError> {
    let first = results.first().ok_or(MetricsError::EmptyInput)?;
    if let Some(other) = results.iter().find(|r| r.spec_id != first.spec_id) {
        return Err(MetricsError::MixedSpecs(
            first.spec_id.clone(),
            other.spec_id.clone(),
        ));
    }
    let column = |f: fn(&RunResult) -> f64| mean_std(&results.iter().map(f).collect::<Vec<_>>());
    let (mu_ks, sigma_ks) = column(|r| r.final_ks);
    let (mu_re, sigma_re) = column(|r| r.final_re);
    let (mu_depth, sigma_depth) = column(|r| r.transpiled_depth as f64);
    let (mu_loss_instability, _) = column(|r| loss_instability(&r.generator_loss_curve));
    Ok(AggregateStats {
        spec_id: first.spec_id.clone(),
        mu_ks,
        sigma_ks,
        mu_re,
        sigma_re,
        mu_depth,
        sigma_depth,
        mu_loss_instability,
        n_runs: results.len(),
    })
}

/// Weights of the z-scored columns in the selection composite.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SelectionWeights {
    pub re: f64,
    pub ks: f64,
    pub depth: f64,
    #[serde(default)]
    pub loss_instability: f64,
}

impl Default for SelectionWeights {
    fn default() -> Self {
        Self {
            re: 1.0,
            ks: 1.0,
            depth: 1.0,
            loss_instability: 0.0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RankedSpec {
    pub spec_id: String,
    pub score: f64,
    pub mu_depth: f64,
}

/// Ranking from best (lowest composite) to worst.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SelectionReport {
    pub weights: SelectionWeights,
    pub ranking: Vec<RankedSpec>,
    pub winner: String,
}

/// Population z-scores; a constant column maps to zeros.
fn z_scores(values: &[f64]) -> Vec<f64> {
    let (mean, std) = mean_std(values);
    if std > 0.0 {
        values.iter().map(|v| (v - mean) / std).collect()
    } else {
        vec![0.0; values.len()]
    }
}

/// Equal-footing comparison of specs: every metric column is z-scored across
/// the entries and combined linearly. Lower is better. Ties go to the
/// shallower circuit, then to the lexicographically smaller id.
pub fn select_best(
    stats: &[AggregateStats],
    weights: SelectionWeights,
) -> Result<SelectionReport, MetricsError> {
    if stats.is_empty() {
        return Err(MetricsError::EmptyInput);
    }
    let col = |f: fn(&AggregateStats) -> f64| z_scores(&stats.iter().map(f).collect::<Vec<_>>());
    let z_re = col(|s| s.mu_re);
    let z_ks = col(|s| s.mu_ks);
    let z_depth = col(|s| s.mu_depth);
    let z_loss = col(|s| s.mu_loss_instability);
    let mut ranking: Vec<RankedSpec> = stats
        .iter()
        .enumerate()
        .map(|(i, s)| {
            let mut score =
                weights.re * z_re[i] + weights.ks * z_ks[i] + weights.depth * z_depth[i];
            if weights.loss_instability != 0.0 {
                score += weights.loss_instability * z_loss[i];
            }
            RankedSpec {
                spec_id: s.spec_id.clone(),
                score,
                mu_depth: s.mu_depth,
            }
        })
        .collect();
    ranking.sort_by(|a, b| {
        a.score
            .total_cmp(&b.score)
            .then(a.mu_depth.total_cmp(&b.mu_depth))
            .then_with(|| a.spec_id.cmp(&b.spec_id))
    });
    Ok(SelectionReport {
        weights,
        winner: ranking[0].spec_id.clone(),
        ranking,
    })
}

impl SelectionReport {
    pub fn score_of(&self, spec_id: &str) -> Option<f64> {
        self.ranking
            .iter()
            .find(|r| r.spec_id == spec_id)
            .map(|r| r.score)
    }

    /// Composite gap between the winner and the runner-up.
    pub fn margin(&self) -> Option<f64> {
        match self.ranking.as_slice() {
            [a, b, ..] => Some(b.score - a.score),
            _ => None,
        }
    }
}
