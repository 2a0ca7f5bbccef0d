use std::collections::BTreeMap;

use super::config::ExperimentConfig;
use crate::gan::ExperimentSpec;

/// Cartesian product of every enumerated config field, one spec per point,
/// sorted by `spec_id`. Identical points collapse into one.
pub fn expand_grid(config: &ExperimentConfig) -> Vec<ExperimentSpec> {
    let mut out = BTreeMap::new();
    for distribution_index in 0..config.distributions.len() {
        for ansatz in &config.ansaetze {
            for &repetitions in &ansatz.repetitions {
                for &initialization in &config.initializations {
                    for &num_qubits in &config.num_qubits {
                        for d in &config.discriminators {
                            for discriminator in d.specs() {
                                for &generator_lr in &config.optimizer.learning_rates {
                                    let spec = ExperimentSpec {
                                        spec_id: String::new(),
                                        distribution_index,
                                        family: ansatz.family,
                                        repetitions,
                                        initialization,
                                        num_qubits,
                                        discriminator: discriminator.clone(),
                                        generator_lr,
                                        betas: config.optimizer.betas,
                                        batch_size: config.batch_size,
                                        num_epochs: config.num_epochs,
                                        num_training_runs: config.num_training_runs,
                                    }
                                    .with_computed_id();
                                    if out.contains_key(&spec.spec_id) {
                                        log::warn!("grid: duplicate point {} dropped", spec.spec_id);
                                    }
                                    out.insert(spec.spec_id.clone(), spec);
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    out.into_values().collect()
}

/// Worst-case circuit evaluations of the whole grid, assuming every run
/// completes all epochs: per epoch one simulation plus two per parameter.
pub fn evaluation_demand(specs: &[ExperimentSpec]) -> u128 {
    specs
        .iter()
        .map(|s| {
            let p = s.descriptor().parameter_count() as u128;
            (s.num_training_runs as u128) * ((s.num_epochs as u128) * (1 + 2 * p))
        })
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::orchestrator::config::parse_config;
    use crate::quantum::build_ansatz;

    fn cfg(extra_lr: bool) -> ExperimentConfig {
        let lrs = if extra_lr { "[1e-3, 1e-4]" } else { "[1e-3]" };
        let text = format!(
            r#"{{"n_containers": 2,
               "distributions": [{{"data_path": "d.csv"}}],
               "ansaetze": [{{"type": "zoufal", "repetitions": [1, 2]}}, {{"type": "herr_1", "repetitions": [1]}}],
               "initializations": [{{"type": "uniform"}}, {{"type": "normal"}}],
               "num_qubits": [2, 3],
               "batch_size": 4, "num_epochs": 2, "num_training_runs": 1,
               "discriminator": {{"type": "custom_classical_1", "hparams": {{"lr": [1e-4]}}}},
               "optimizer": {{"lr": {lrs}}}}}"#
        );
        parse_config(text.as_bytes()).unwrap()
    }

    #[test]
    fn size_is_product() {
        assert_eq!(expand_grid(&cfg(false)).len(), 3 * 2 * 2);
        assert_eq!(expand_grid(&cfg(true)).len(), 3 * 2 * 2 * 2);
    }

    #[test]
    fn sorted_unique_ids() {
        let g = expand_grid(&cfg(true));
        assert!(g.windows(2).all(|w| w[0].spec_id < w[1].spec_id));
        assert!(g.iter().all(|s| s.spec_id == s.compute_id() && s.spec_id.len() == 16));
    }

    #[test]
    fn duplicates_collapse() {
        let mut c = cfg(false);
        c.num_qubits = vec![2, 2];
        assert_eq!(expand_grid(&c).len(), 3 * 2);
    }

    #[test]
    fn ids_stable_across_expansions() {
        let a: Vec<_> = expand_grid(&cfg(true)).into_iter().map(|s| s.spec_id).collect();
        let b: Vec<_> = expand_grid(&cfg(true)).into_iter().map(|s| s.spec_id).collect();
        assert_eq!(a, b);
    }

    #[test]
    fn demand_counts_parameter_shift() {
        let g = expand_grid(&cfg(false));
        let oracle: u128 = g
            .iter()
            .map(|s| {
                let p = build_ansatz(&s.descriptor()).unwrap().num_params();
                2 * (1 + 2 * p as u128)
            })
            .sum();
        assert_eq!(evaluation_demand(&g), oracle);
    }
}
