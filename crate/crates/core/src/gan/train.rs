use std::time::Instant;

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::adam::AdamState;
use super::discriminator::{init_discriminator, DiscriminatorNet, DiscriminatorSpec};
use super::generator::{log_discriminator_table, shift_gradient};
use super::TrainError;
use crate::data::TargetDistribution;
use crate::metrics::{kl_divergence, ks_statistic};
use crate::quantum::{
    apply_circuit, build_ansatz, map_to_range, transpile_depth, AnsatzDescriptor, AnsatzFamily,
    InitStrategy, ResolvedInit, StateVector,
};
use crate::seed::short_hash;

/// Born samples drawn for the final KS statistic.
pub const KS_SAMPLES: usize = 10_000;

/// One point of the search grid.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentSpec {
    pub spec_id: String,
    pub distribution_index: usize,
    pub family: AnsatzFamily,
    pub repetitions: usize,
    pub initialization: InitStrategy,
    pub num_qubits: usize,
    pub discriminator: DiscriminatorSpec,
    pub generator_lr: f64,
    pub betas: (f64, f64),
    pub batch_size: usize,
    pub num_epochs: usize,
    pub num_training_runs: usize,
}

impl ExperimentSpec {
    pub fn descriptor(&self) -> AnsatzDescriptor {
        AnsatzDescriptor::new(self.family, self.num_qubits, self.repetitions)
    }

    /// Hash of every field except the id itself.
    pub fn compute_id(&self) -> String {
        let mut anon = self.clone();
        anon.spec_id.clear();
        short_hash(&serde_json::to_vec(&anon).expect("spec serializes"))
    }

    /// Recomputes and stores [`Self::compute_id`].
    pub fn with_computed_id(mut self) -> Self {
        self.spec_id = self.compute_id();
        self
    }
}

/// Per-run resource ceilings.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrainingBudget {
    pub max_wall_seconds: f64,
    pub max_circuit_evaluations: u64,
}

impl Default for TrainingBudget {
    fn default() -> Self {
        Self {
            max_wall_seconds: 3600.0,
            max_circuit_evaluations: 1_000_000_000,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunResult {
    pub spec_id: String,
    pub run_index: usize,
    pub epochs_completed: usize,
    pub generator_loss_curve: Vec<f64>,
    pub discriminator_loss_curve: Vec<f64>,
    pub entropy_curve: Vec<f64>,
    pub final_ks: f64,
    pub final_re: f64,
    pub transpiled_depth: usize,
    /// Not serialized: it is the only non-reproducible field.
    #[serde(skip)]
    pub wall_seconds: f64,
    pub circuit_evaluations: u64,
    pub final_generator_params: Vec<f64>,
    pub budget_exhausted: bool,
    pub ansatz: AnsatzDescriptor,
    pub initialization: ResolvedInit,
    pub range: (f64, f64),
    pub discriminator: DiscriminatorNet,
}

impl RunResult {
    /// A run with no training and zeroed metrics, handy as a fixture base.
    pub fn placeholder(spec_id: &str, run_index: usize) -> Self {
        Self {
            spec_id: spec_id.to_string(),
            run_index,
            epochs_completed: 0,
            generator_loss_curve: Vec::new(),
            discriminator_loss_curve: Vec::new(),
            entropy_curve: Vec::new(),
            final_ks: 0.0,
            final_re: 0.0,
            transpiled_depth: 0,
            wall_seconds: 0.0,
            circuit_evaluations: 0,
            final_generator_params: vec![0.0, 0.0],
            budget_exhausted: false,
            ansatz: AnsatzDescriptor::new(AnsatzFamily::Zoufal, 2, 1),
            initialization: ResolvedInit::Uniform,
            range: (0.0, 1.0),
            discriminator: DiscriminatorNet::from_params(vec![1, 1], vec![0.0, 0.0])
                .expect("valid shape"),
        }
    }
}

fn lattice(indices: &[usize], a: f64, b: f64, n: usize) -> Result<Vec<f64>, TrainError> {
    indices
        .iter()
        .map(|&i| map_to_range(i, a, b, n).map_err(TrainError::from))
        .collect()
}

/// Trains one qGAN run.
///
/// Per epoch: the generator state `U(θ)|ψ_init⟩` is simulated once, giving the
/// analytic distribution (for the entropy curve) and the fake batch; the
/// discriminator takes one Adam step on real vs fake; the generator takes one
/// Adam step along the parameter-shift gradient against the updated
/// discriminator. Real and fake samples both live on the lattice `φ(0..2^N)`.
///
/// Curves record the state each epoch started from, so the final metrics and
/// `final_generator_params` describe the same, last evaluated generator.
pub fn train_qgan<R: Rng + ?Sized>(
    spec: &ExperimentSpec,
    target: &TargetDistribution,
    budget: &TrainingBudget,
    run_index: usize,
    rng: &mut R,
) -> Result<RunResult, TrainError> {
    let started = Instant::now();
    let n = spec.num_qubits;
    let descriptor = spec.descriptor();
    let template = build_ansatz(&descriptor)?;
    if target.num_bins() != 1 << n {
        return Err(TrainError::BinMismatch {
            expected: 1 << n,
            got: target.num_bins(),
        });
    }
    if spec.batch_size == 0 {
        return Err(TrainError::InvalidSpec("batch_size must be positive".into()));
    }
    spec.discriminator.validate().map_err(TrainError::InvalidSpec)?;
    let (a, b) = target.range;

    let (mean, std) = target.index_moments();
    let initialization = spec.initialization.resolve(n, mean, std, rng)?;
    let init_state = initialization.state(n)?;
    let mut net = init_discriminator(&spec.discriminator, rng).with_input_range(a, b);
    let mut adam_d = AdamState::new(
        net.num_params(),
        spec.discriminator.learning_rate,
        spec.discriminator.betas,
    );
    let num_params = template.num_params();
    let mut params = vec![0.0; num_params];
    let mut adam_g = AdamState::new(num_params, spec.generator_lr, spec.betas);
    let real_dist = WeightedIndex::new(&target.bin_probabilities)
        .map_err(|e| TrainError::InvalidSpec(format!("target distribution: {e}")))?;

    let mut g_curve = Vec::with_capacity(spec.num_epochs);
    let mut d_curve = Vec::with_capacity(spec.num_epochs);
    let mut re_curve = Vec::with_capacity(spec.num_epochs);
    let mut evaluations = 0u64;
    let mut exhausted = false;
    let mut last: Option<(Vec<f64>, StateVector, f64)> = None;

    for _ in 0..spec.num_epochs {
        if evaluations >= budget.max_circuit_evaluations
            || started.elapsed().as_secs_f64() >= budget.max_wall_seconds
        {
            exhausted = true;
            break;
        }
        let state = apply_circuit(&init_state, &template, &params)?;
        evaluations += 1;
        let probs = state.probabilities();
        let re = kl_divergence(&target.bin_probabilities, &probs)?;

        let real_idx: Vec<usize> = (0..spec.batch_size).map(|_| real_dist.sample(rng)).collect();
        let fake_idx = state.born_sample(spec.batch_size, rng);
        let real = lattice(&real_idx, a, b, n)?;
        let fake = lattice(&fake_idx, a, b, n)?;

        let d_loss = net.loss(&real, &fake)?;
        let d_grad = net.backward(&real, &fake)?;
        adam_d.step(net.params_mut(), &d_grad)?;

        let log_d = log_discriminator_table(&net, n, a, b)?;
        let g_loss = -probs.iter().zip(&log_d).map(|(p, l)| p * l).sum::<f64>();
        let g_grad = shift_gradient(&template, &init_state, &params, &log_d)?;
        evaluations += 2 * num_params as u64;

        let evaluated = params.clone();
        adam_g.step(&mut params, &g_grad)?;

        g_curve.push(g_loss);
        d_curve.push(d_loss);
        re_curve.push(re);
        last = Some((evaluated, state, re));
    }
    if spec.num_epochs > 0 && re_curve.len() < spec.num_epochs {
        exhausted = true;
    }

    let (final_params, final_state, final_re) = match last {
        Some(l) => l,
        None => {
            let state = apply_circuit(&init_state, &template, &params)?;
            evaluations += 1;
            let re = kl_divergence(&target.bin_probabilities, &state.probabilities())?;
            (params, state, re)
        }
    };
    let gen_samples = lattice(&final_state.born_sample(KS_SAMPLES, rng), a, b, n)?;
    let ref_idx: Vec<usize> = (0..KS_SAMPLES).map(|_| real_dist.sample(rng)).collect();
    let final_ks = ks_statistic(&gen_samples, &lattice(&ref_idx, a, b, n)?)?;

    Ok(RunResult {
        spec_id: spec.spec_id.clone(),
        run_index,
        epochs_completed: re_curve.len(),
        generator_loss_curve: g_curve,
        discriminator_loss_curve: d_curve,
        entropy_curve: re_curve,
        final_ks,
        final_re,
        transpiled_depth: transpile_depth(&template),
        wall_seconds: started.elapsed().as_secs_f64(),
        circuit_evaluations: evaluations,
        final_generator_params: final_params,
        budget_exhausted: exhausted,
        ansatz: descriptor,
        initialization,
        range: (a, b),
        discriminator: net,
    })
}
