//! Contrastive-divergence training.
//!
//! The weight rule is moment matching on the coupling support,
//! `Δw_ij = α (E[s_i s_j]_data − E[s_i s_j]_model)`, with the analogous
//! first-moment rule for biases. On {0,1} spins the data expectations are
//! binary AND counts divided by the batch size — no multipliers anywhere —
//! and the model expectations come from time-weighted averages of an
//! asynchronous sampler run (the continuous-time limit of snapshot means).

use rand::seq::SliceRandom;

use super::MlError;
use crate::model::{IsingModel, ModelError, SpinDomain};
use crate::sampler::engine::initial_values;
use crate::sampler::{
    ideal_params, run_async_visit, AsyncConfig, Clamp, EventVisitor, InitPolicy, NeuronParams,
    StopRule,
};
use crate::seed::{derive_rng, derive_u64};

/// Burn-in discarded before the counting window: each neuron sees this many
/// times `n` expected update opportunities, i.e. `10·n/λ0` of wall time.
const BURN_PER_NEURON_FACTOR: f64 = 10.0;

/// Knobs for [`cd_step`] and [`train`].
#[derive(Debug, Clone, Copy)]
pub struct TrainConfig {
    /// Learning rate.
    pub alpha: f64,
    /// Scale the rate by `1/(1+epoch)` as training proceeds.
    pub alpha_decay: bool,
    pub batch_size: usize,
    pub epochs: usize,
    /// Length of the model-expectation counting window per step, expressed
    /// as expected update opportunities per neuron (window = samples/λ0).
    pub model_samples: u64,
    pub lambda0: f64,
    /// Training aborts when the mean |w| exceeds this bound.
    pub weight_bound: f64,
    pub seed: u64,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig {
            alpha: 0.05,
            alpha_decay: false,
            batch_size: 256,
            epochs: 1,
            model_samples: 2000,
            lambda0: 150.0e6,
            weight_bound: 50.0,
            seed: 0,
        }
    }
}

impl TrainConfig {
    fn validate(&self) -> Result<(), MlError> {
        if !(self.alpha.is_finite() && self.alpha >= 0.0) {
            return Err(MlError::BadConfig(format!(
                "learning rate must be finite and >= 0, got {}",
                self.alpha
            )));
        }
        if self.batch_size == 0 {
            return Err(MlError::BadConfig("batch size must be positive".into()));
        }
        if self.model_samples == 0 {
            return Err(MlError::BadConfig(
                "model-expectation sample count must be positive".into(),
            ));
        }
        if !(self.lambda0 > 0.0 && self.lambda0.is_finite()) {
            return Err(MlError::BadConfig(format!(
                "lambda0 must be positive and finite, got {}",
                self.lambda0
            )));
        }
        if !(self.weight_bound > 0.0) {
            return Err(MlError::BadConfig(format!(
                "weight bound must be positive, got {}",
                self.weight_bound
            )));
        }
        Ok(())
    }
}

/// First and second moments aligned with a model's parameter layout:
/// `pair_means[k]` matches `model.couplings()[k]`, `spin_means[i]` spin `i`.
#[derive(Debug, Clone, PartialEq)]
pub struct Expectations {
    pub pair_means: Vec<f64>,
    pub spin_means: Vec<f64>,
}

/// What one [`cd_step`] did to the parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepDiagnostics {
    /// Mean |Δ| over all updated parameters (couplings and biases).
    pub mean_abs_dw: f64,
    pub max_abs_dw: f64,
    /// Mean |data − model| expectation gap over all moments.
    pub mean_abs_gap: f64,
}

/// Per-epoch averages of the step diagnostics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EpochDiagnostics {
    pub epoch: usize,
    /// Learning rate in effect during this epoch.
    pub alpha: f64,
    pub steps: usize,
    pub mean_abs_dw: f64,
    pub mean_gap: f64,
    /// Mean |w| after the epoch, for watching the divergence guard margin.
    pub mean_abs_w: f64,
}

/// Result of a clamped reconstruction: per-spin up-probabilities and the
/// most likely value of each spin (clamped entries pass through verbatim).
#[derive(Debug, Clone, PartialEq)]
pub struct ReconstructionReport {
    pub marginals: Vec<f64>,
    pub modal: Vec<u8>,
}

fn domain_value(domain: SpinDomain, pixel: u8) -> Result<i8, MlError> {
    match pixel {
        0 => Ok(domain.down()),
        1 => Ok(domain.up()),
        other => Err(MlError::Model(ModelError::ValueOutOfDomain {
            value: other as i8,
        })),
    }
}

/// Batch moments from integer counts. On {0,1} spins the pair statistic is
/// the AND count over the batch; in every domain the accumulators are exact
/// integers, so each mean is a rational count divided by the batch size.
fn data_expectations(model: &IsingModel, batch: &[Vec<u8>]) -> Result<Expectations, MlError> {
    if batch.is_empty() {
        return Err(MlError::EmptyBatch);
    }
    let n = model.n();
    let domain = model.domain();
    let couplings = model.couplings();
    let mut pair_counts = vec![0i64; couplings.len()];
    let mut spin_counts = vec![0i64; n];
    let mut values = vec![0i8; n];
    for item in batch {
        if item.len() != n {
            return Err(MlError::BatchShape {
                expected: n,
                got: item.len(),
            });
        }
        for (v, &px) in values.iter_mut().zip(item) {
            *v = domain_value(domain, px)?;
        }
        for (count, c) in pair_counts.iter_mut().zip(couplings) {
            *count += (values[c.i] as i64) * (values[c.j] as i64);
        }
        for (count, &v) in spin_counts.iter_mut().zip(&values) {
            *count += v as i64;
        }
    }
    let len = batch.len() as f64;
    let to_mean = |count: &i64| {
        let mean = *count as f64 / len;
        // The multiplier-free contract: every data expectation is an exact
        // integer count over the batch.
        assert!(
            (mean * len - *count as f64).abs() < 1e-6,
            "data expectation is not a rational count/batch"
        );
        mean
    };
    Ok(Expectations {
        pair_means: pair_counts.iter().map(to_mean).collect(),
        spin_means: spin_counts.iter().map(to_mean).collect(),
    })
}

/// Time-weighted first and second moments over the counting window
/// `[burn, end]`; each tracked quantity settles lazily when an endpoint
/// flips and once more at the end of the run.
struct MomentVisitor<'m> {
    model: &'m IsingModel,
    burn: f64,
    values: Vec<i8>,
    pairs_of_spin: Vec<Vec<usize>>,
    spin_acc: Vec<f64>,
    spin_last: Vec<f64>,
    pair_acc: Vec<f64>,
    pair_last: Vec<f64>,
}

impl<'m> MomentVisitor<'m> {
    fn new(model: &'m IsingModel, burn: f64, values: Vec<i8>) -> Self {
        let couplings = model.couplings();
        let mut pairs_of_spin = vec![Vec::new(); model.n()];
        for (k, c) in couplings.iter().enumerate() {
            pairs_of_spin[c.i].push(k);
            pairs_of_spin[c.j].push(k);
        }
        MomentVisitor {
            model,
            burn,
            values,
            pairs_of_spin,
            spin_acc: vec![0.0; model.n()],
            spin_last: vec![0.0; model.n()],
            pair_acc: vec![0.0; couplings.len()],
            pair_last: vec![0.0; couplings.len()],
        }
    }

    fn settle_spin(&mut self, i: usize, now: f64) {
        let lo = self.spin_last[i].max(self.burn);
        if now > lo {
            self.spin_acc[i] += self.values[i] as f64 * (now - lo);
        }
        self.spin_last[i] = now;
    }

    fn settle_pair(&mut self, k: usize, now: f64) {
        let lo = self.pair_last[k].max(self.burn);
        if now > lo {
            let c = &self.model.couplings()[k];
            let prod = (self.values[c.i] as i32 * self.values[c.j] as i32) as f64;
            self.pair_acc[k] += prod * (now - lo);
        }
        self.pair_last[k] = now;
    }

    fn finish(mut self, final_time: f64) -> Expectations {
        let denom = final_time - self.burn;
        assert!(denom > 0.0, "counting window is empty");
        for i in 0..self.values.len() {
            self.settle_spin(i, final_time);
        }
        for k in 0..self.pair_acc.len() {
            self.settle_pair(k, final_time);
        }
        Expectations {
            pair_means: self.pair_acc.iter().map(|a| a / denom).collect(),
            spin_means: self.spin_acc.iter().map(|a| a / denom).collect(),
        }
    }
}

impl EventVisitor for MomentVisitor<'_> {
    fn on_event(&mut self, time: f64, neuron: usize, value: i8, _state: &[i8]) -> bool {
        self.settle_spin(neuron, time);
        let pairs = std::mem::take(&mut self.pairs_of_spin[neuron]);
        for &k in &pairs {
            self.settle_pair(k, time);
        }
        self.pairs_of_spin[neuron] = pairs;
        self.values[neuron] = value;
        true
    }
}

fn expectations_with_params(
    model: &IsingModel,
    params: &[NeuronParams],
    lambda0: f64,
    samples: u64,
    seed: u64,
) -> Result<Expectations, MlError> {
    let burn = BURN_PER_NEURON_FACTOR * model.n() as f64 / lambda0;
    let window = samples as f64 / lambda0;
    let cfg = AsyncConfig {
        stop: StopRule::MaxTime(burn + window),
        seed,
        tau_circ: 0.0,
        init: InitPolicy::RandomUniform,
    };
    let mut rng = derive_rng(seed, "async-engine", 0);
    let start = initial_values(model, params, &cfg.init, &mut rng)?;
    let mut visitor = MomentVisitor::new(model, burn, start);
    let summary = run_async_visit(model, params, &cfg, &mut visitor)?;
    Ok(visitor.finish(summary.final_time))
}

/// Model-side moments for the CD update: a fresh chain from a uniform random
/// start, `10·n` expected updates per neuron of burn-in, then time-weighted
/// means over a window of `samples` expected updates per neuron.
pub fn model_expectations(
    model: &IsingModel,
    lambda0: f64,
    samples: u64,
    seed: u64,
) -> Result<Expectations, MlError> {
    if !(lambda0 > 0.0 && lambda0.is_finite()) {
        return Err(MlError::BadConfig(format!(
            "lambda0 must be positive and finite, got {lambda0}"
        )));
    }
    if samples == 0 {
        return Err(MlError::BadConfig(
            "model-expectation sample count must be positive".into(),
        ));
    }
    expectations_with_params(model, &ideal_params(model.n(), lambda0), lambda0, samples, seed)
}

/// Per-spin mean activations of the model at equilibrium, via the same
/// sampling procedure as the training updates.
pub fn mean_activation(
    model: &IsingModel,
    lambda0: f64,
    samples: u64,
    seed: u64,
) -> Result<Vec<f64>, MlError> {
    Ok(model_expectations(model, lambda0, samples, seed)?.spin_means)
}

/// The moment-matching step applied to `model`: ascent on the data
/// likelihood regardless of the model's sign convention.
fn updated_model(
    model: &IsingModel,
    alpha: f64,
    data: &Expectations,
    model_exp: &Expectations,
) -> Result<(IsingModel, StepDiagnostics), MlError> {
    // Under p(s) ∝ exp(−E) with E = factor·(Σ w s s + Σ b s), the gradient
    // of the log-likelihood in w is −factor·(data − model); the convention
    // used by the ML pipeline has factor −1, recovering Δw = α(data − model).
    let ascent = -model.sign().factor();
    let mut gap_sum = 0.0;
    let mut dw_sum = 0.0;
    let mut dw_max = 0.0f64;
    let mut count = 0usize;
    let mut step = |old: f64, data_m: f64, model_m: f64| {
        let gap = data_m - model_m;
        let dw = alpha * ascent * gap;
        gap_sum += gap.abs();
        dw_sum += dw.abs();
        dw_max = dw_max.max(dw.abs());
        count += 1;
        old + dw
    };
    let weights: Vec<f64> = model
        .coupling_weights()
        .iter()
        .zip(data.pair_means.iter().zip(&model_exp.pair_means))
        .map(|(&w, (&d, &m))| step(w, d, m))
        .collect();
    let biases: Vec<f64> = model
        .biases()
        .iter()
        .zip(data.spin_means.iter().zip(&model_exp.spin_means))
        .map(|(&b, (&d, &m))| step(b, d, m))
        .collect();
    let updated = model.with_parameters(&weights, &biases)?;
    let denom = count.max(1) as f64;
    Ok((
        updated,
        StepDiagnostics {
            mean_abs_dw: dw_sum / denom,
            max_abs_dw: dw_max,
            mean_abs_gap: gap_sum / denom,
        },
    ))
}

/// One contrastive-divergence step on `batch` (rows of {0,1} pixels, one per
/// spin). Updates only the existing coupling support and the biases.
pub fn cd_step(
    model: &IsingModel,
    batch: &[Vec<u8>],
    cfg: &TrainConfig,
    step_seed: u64,
) -> Result<(IsingModel, StepDiagnostics), MlError> {
    cfg.validate()?;
    let data = data_expectations(model, batch)?;
    let model_exp = model_expectations(model, cfg.lambda0, cfg.model_samples, step_seed)?;
    updated_model(model, cfg.alpha, &data, &model_exp)
}

fn mean_abs_weight(model: &IsingModel) -> f64 {
    let w = model.coupling_weights();
    if w.is_empty() {
        return 0.0;
    }
    w.iter().map(|x| x.abs()).sum::<f64>() / w.len() as f64
}

/// Full training loop: per-epoch reshuffle, sequential batches (the final
/// partial batch is kept), divergence guard after every step.
pub fn train(
    model: &IsingModel,
    images: &[Vec<u8>],
    cfg: &TrainConfig,
) -> Result<(IsingModel, Vec<EpochDiagnostics>), MlError> {
    cfg.validate()?;
    if images.is_empty() {
        return Err(MlError::EmptyBatch);
    }
    let mut current = model.clone();
    let mut diagnostics = Vec::with_capacity(cfg.epochs);
    let mut global_step = 0u64;
    for epoch in 0..cfg.epochs {
        let alpha = if cfg.alpha_decay {
            cfg.alpha / (1 + epoch) as f64
        } else {
            cfg.alpha
        };
        let step_cfg = TrainConfig { alpha, ..*cfg };
        let mut order: Vec<usize> = (0..images.len()).collect();
        order.shuffle(&mut derive_rng(cfg.seed, "cd-epoch", epoch as u64));
        let mut dw_sum = 0.0;
        let mut gap_sum = 0.0;
        let mut steps = 0usize;
        for chunk in order.chunks(cfg.batch_size) {
            let batch: Vec<Vec<u8>> = chunk.iter().map(|&k| images[k].clone()).collect();
            let step_seed = derive_u64(cfg.seed, "cd-step", global_step);
            let (next, diag) = cd_step(&current, &batch, &step_cfg, step_seed)?;
            current = next;
            global_step += 1;
            steps += 1;
            dw_sum += diag.mean_abs_dw;
            gap_sum += diag.mean_abs_gap;
            let mean_abs_w = mean_abs_weight(&current);
            if mean_abs_w > cfg.weight_bound {
                return Err(MlError::Diverged {
                    mean_abs_w,
                    bound: cfg.weight_bound,
                });
            }
        }
        diagnostics.push(EpochDiagnostics {
            epoch,
            alpha,
            steps,
            mean_abs_dw: dw_sum / steps.max(1) as f64,
            mean_gap: gap_sum / steps.max(1) as f64,
            mean_abs_w: mean_abs_weight(&current),
        });
    }
    Ok((current, diagnostics))
}

/// Samples the model with `clamp_mask[i]` spins pinned to `clamp_values[i]`
/// (as {0,1} codes) and reports per-spin up-probabilities plus the modal
/// value of each spin. With every spin clamped the clamp is returned
/// verbatim without sampling.
pub fn reconstruct(
    model: &IsingModel,
    clamp_mask: &[bool],
    clamp_values: &[u8],
    lambda0: f64,
    samples: u64,
    seed: u64,
) -> Result<ReconstructionReport, MlError> {
    let n = model.n();
    if clamp_mask.len() != n || clamp_values.len() != n {
        return Err(MlError::ClampShape);
    }
    if !(lambda0 > 0.0 && lambda0.is_finite()) || samples == 0 {
        return Err(MlError::BadConfig(
            "reconstruction needs a positive rate and sample count".into(),
        ));
    }
    let domain = model.domain();
    let mut params = ideal_params(n, lambda0);
    for i in 0..n {
        if clamp_mask[i] {
            let v = domain_value(domain, clamp_values[i])?;
            params[i].clamp = if v == domain.up() {
                Clamp::Up
            } else {
                Clamp::Down
            };
        }
    }
    if clamp_mask.iter().all(|&c| c) {
        return Ok(ReconstructionReport {
            marginals: clamp_values.iter().map(|&v| v as f64).collect(),
            modal: clamp_values.to_vec(),
        });
    }
    let exp = expectations_with_params(model, &params, lambda0, samples, seed)?;
    let down = domain.down() as f64;
    let width = domain.width();
    let marginals: Vec<f64> = exp.spin_means.iter().map(|m| (m - down) / width).collect();
    let modal = marginals.iter().map(|&p| (p >= 0.5) as u8).collect();
    Ok(ReconstructionReport { marginals, modal })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::oracle::{clamped_distribution, exact_distribution};
    use crate::model::{EnergySign, SpinState};
    use approx::assert_abs_diff_eq;

    fn two_spin(w: f64, b0: f64, b1: f64) -> IsingModel {
        IsingModel::new(
            SpinDomain::ZeroOne,
            EnergySign::Ferromagnetic,
            vec![b0, b1],
            vec![(0, 1, w)],
        )
        .unwrap()
    }

    /// Largest-remainder allocation of `total` batch items across the exact
    /// distribution of `model`, decoded back into pixel rows.
    fn batch_from_distribution(model: &IsingModel, total: usize) -> Vec<Vec<u8>> {
        let dist = exact_distribution(model).unwrap();
        let n = model.n();
        let m = 1usize << n;
        let mut counts: Vec<usize> = (0..m)
            .map(|idx| (dist.prob(idx) * total as f64).floor() as usize)
            .collect();
        let mut rema: Vec<(f64, usize)> = (0..m)
            .map(|idx| {
                (
                    dist.prob(idx) * total as f64 - counts[idx] as f64,
                    idx,
                )
            })
            .collect();
        rema.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1)));
        let short = total - counts.iter().sum::<usize>();
        for &(_, idx) in rema.iter().take(short) {
            counts[idx] += 1;
        }
        let mut batch = Vec::with_capacity(total);
        for (idx, &c) in counts.iter().enumerate() {
            let state = SpinState::from_index(model.domain(), n, idx);
            let pixels: Vec<u8> = state.values().iter().map(|&v| (v == 1) as u8).collect();
            for _ in 0..c {
                batch.push(pixels.clone());
            }
        }
        batch
    }

    #[test]
    fn equal_expectations_leave_model_bitwise_unchanged() {
        let model = two_spin(0.4, 0.2, -0.1);
        let exp = Expectations {
            pair_means: vec![0.37],
            spin_means: vec![0.62, 0.53],
        };
        let (updated, diag) = updated_model(&model, 0.5, &exp, &exp).unwrap();
        assert_eq!(updated.coupling_weights(), model.coupling_weights());
        assert_eq!(updated.biases(), model.biases());
        assert_eq!(diag.mean_abs_dw, 0.0);
        assert_eq!(diag.mean_abs_gap, 0.0);
    }

    #[test]
    fn update_is_alpha_times_gap_with_likelihood_sign() {
        let model = two_spin(0.1, 0.0, 0.0);
        let data = Expectations {
            pair_means: vec![0.5],
            spin_means: vec![0.6, 0.6],
        };
        let model_exp = Expectations {
            pair_means: vec![0.1],
            spin_means: vec![0.4, 0.9],
        };
        let (updated, diag) = updated_model(&model, 0.05, &data, &model_exp).unwrap();
        assert_abs_diff_eq!(updated.coupling_weights()[0], 0.1 + 0.05 * 0.4, epsilon = 1e-15);
        assert_abs_diff_eq!(updated.biases()[0], 0.05 * 0.2, epsilon = 1e-15);
        assert_abs_diff_eq!(updated.biases()[1], -0.05 * 0.3, epsilon = 1e-15);
        assert_abs_diff_eq!(diag.max_abs_dw, 0.02, epsilon = 1e-15);

        // Under the opposite sign convention the same gaps push the other way.
        let flipped = IsingModel::new(
            SpinDomain::ZeroOne,
            EnergySign::AsWritten,
            vec![0.0, 0.0],
            vec![(0, 1, 0.1)],
        )
        .unwrap();
        let (updated, _) = updated_model(&flipped, 0.05, &data, &model_exp).unwrap();
        assert_abs_diff_eq!(updated.coupling_weights()[0], 0.1 - 0.05 * 0.4, epsilon = 1e-15);
    }

    #[test]
    fn data_expectations_are_exact_and_counts() {
        let model = two_spin(0.0, 0.0, 0.0);
        let batch = vec![vec![1, 1], vec![1, 0], vec![0, 0], vec![1, 1]];
        let exp = data_expectations(&model, &batch).unwrap();
        assert_eq!(exp.pair_means, vec![0.5]);
        assert_eq!(exp.spin_means, vec![0.75, 0.5]);

        assert!(matches!(
            data_expectations(&model, &[]),
            Err(MlError::EmptyBatch)
        ));
        assert!(matches!(
            data_expectations(&model, &[vec![1, 0, 1]]),
            Err(MlError::BatchShape { expected: 2, got: 3 })
        ));
        assert!(matches!(
            data_expectations(&model, &[vec![1, 7]]),
            Err(MlError::Model(ModelError::ValueOutOfDomain { .. }))
        ));
    }

    #[test]
    fn model_expectations_match_oracle_moments() {
        let model = IsingModel::new(
            SpinDomain::ZeroOne,
            EnergySign::Ferromagnetic,
            vec![0.3, -0.2, 0.1],
            vec![(0, 1, 0.6), (1, 2, -0.4)],
        )
        .unwrap();
        let dist = exact_distribution(&model).unwrap();
        let mut want_pairs = vec![0.0; 2];
        let mut want_spins = vec![0.0; 3];
        for idx in 0..8usize {
            let s = SpinState::from_index(SpinDomain::ZeroOne, 3, idx);
            let p = dist.prob(idx);
            for (k, c) in model.couplings().iter().enumerate() {
                want_pairs[k] += p * (s.value(c.i) as f64) * (s.value(c.j) as f64);
            }
            for i in 0..3 {
                want_spins[i] += p * s.value(i) as f64;
            }
        }
        let got = model_expectations(&model, 1.0e6, 60_000, 11).unwrap();
        for (g, w) in got.pair_means.iter().zip(&want_pairs) {
            assert_abs_diff_eq!(g, w, epsilon = 0.02);
        }
        for (g, w) in got.spin_means.iter().zip(&want_spins) {
            assert_abs_diff_eq!(g, w, epsilon = 0.02);
        }
    }

    #[test]
    fn two_spin_toy_training_reaches_target() {
        let target = two_spin(0.8, 0.4, -0.3);
        let batch = batch_from_distribution(&target, 200);
        let start = two_spin(0.0, 0.0, 0.0);
        // Two phases: a strong constant rate to reach the moment-matched
        // optimum, then a decaying rate to average out sampling noise.
        let warm = TrainConfig {
            alpha: 2.0,
            alpha_decay: false,
            batch_size: 200,
            epochs: 40,
            model_samples: 4000,
            lambda0: 1.0e6,
            weight_bound: 50.0,
            seed: 42,
        };
        let (mid, diags) = train(&start, &batch, &warm).unwrap();
        assert_eq!(diags.len(), 40);
        assert!(diags.iter().all(|d| d.steps == 1));
        let polish = TrainConfig {
            alpha: 1.0,
            alpha_decay: true,
            epochs: 60,
            seed: 43,
            ..warm
        };
        let (trained, _) = train(&mid, &batch, &polish).unwrap();

        let p = exact_distribution(&target).unwrap();
        let q = exact_distribution(&trained).unwrap();
        let mut kl = 0.0;
        for idx in 0..4usize {
            let qi = q.prob(idx);
            if qi > 0.0 {
                kl += qi * (qi / p.prob(idx)).ln();
            }
        }
        assert!(kl <= 0.05, "KL(model||target) = {kl}");
        for i in 0..2 {
            assert_abs_diff_eq!(q.marginal_up(i), p.marginal_up(i), epsilon = 0.02);
        }
    }

    #[test]
    fn own_distribution_is_a_fixed_point_on_average() {
        let model = two_spin(0.5, 0.2, -0.1);
        let batch = batch_from_distribution(&model, 400);
        let cfg = TrainConfig {
            alpha: 1.0,
            model_samples: 3000,
            lambda0: 1.0e6,
            ..TrainConfig::default()
        };
        let w0 = model.coupling_weights();
        let b0 = model.biases().to_vec();
        let steps = 40;
        let mut dw_mean = vec![0.0; w0.len()];
        let mut db_mean = vec![0.0; b0.len()];
        for k in 0..steps {
            let (updated, _) = cd_step(&model, &batch, &cfg, 1000 + k).unwrap();
            for (acc, (new, old)) in dw_mean
                .iter_mut()
                .zip(updated.coupling_weights().iter().zip(&w0))
            {
                *acc += (new - old) / steps as f64;
            }
            for (acc, (new, old)) in db_mean.iter_mut().zip(updated.biases().iter().zip(&b0)) {
                *acc += (new - old) / steps as f64;
            }
        }
        for d in dw_mean.iter().chain(&db_mean) {
            assert!(d.abs() < 0.02, "mean update {d} is not near zero");
        }
    }

    #[test]
    fn reconstruction_marginals_match_clamped_oracle() {
        let model = IsingModel::new(
            SpinDomain::ZeroOne,
            EnergySign::Ferromagnetic,
            vec![0.2, 0.0, -0.3],
            vec![(0, 1, 0.7), (1, 2, -0.5)],
        )
        .unwrap();
        let report = reconstruct(&model, &[true, false, false], &[1, 0, 0], 1.0e6, 60_000, 7)
            .unwrap();
        assert_eq!(report.marginals[0], 1.0);
        assert_eq!(report.modal[0], 1);
        let dist = clamped_distribution(&model, &[Some(1), None, None]).unwrap();
        for i in 1..3 {
            assert_abs_diff_eq!(report.marginals[i], dist.marginal_up(i), epsilon = 0.02);
        }
    }

    #[test]
    fn fully_clamped_reconstruction_is_verbatim() {
        let model = IsingModel::new(
            SpinDomain::ZeroOne,
            EnergySign::Ferromagnetic,
            vec![0.0, 0.0, 0.0],
            vec![(0, 1, 5.0)],
        )
        .unwrap();
        let report =
            reconstruct(&model, &[true, true, true], &[1, 0, 1], 1.0e6, 10, 0).unwrap();
        assert_eq!(report.marginals, vec![1.0, 0.0, 1.0]);
        assert_eq!(report.modal, vec![1, 0, 1]);

        assert!(matches!(
            reconstruct(&model, &[true, true], &[1, 0, 1], 1.0e6, 10, 0),
            Err(MlError::ClampShape)
        ));
    }

    #[test]
    fn unbiased_model_activates_near_half() {
        let model = IsingModel::new(
            SpinDomain::ZeroOne,
            EnergySign::Ferromagnetic,
            vec![0.0; 4],
            vec![],
        )
        .unwrap();
        let act = mean_activation(&model, 1.0e6, 30_000, 3).unwrap();
        for a in act {
            assert_abs_diff_eq!(a, 0.5, epsilon = 0.05);
        }
    }

    #[test]
    fn training_guard_catches_divergence() {
        let start = two_spin(0.0, 0.0, 0.0);
        let images = vec![vec![1, 1]; 8];
        let cfg = TrainConfig {
            alpha: 1.0e3,
            batch_size: 8,
            epochs: 3,
            model_samples: 200,
            lambda0: 1.0e6,
            weight_bound: 0.5,
            seed: 1,
            ..TrainConfig::default()
        };
        assert!(matches!(
            train(&start, &images, &cfg),
            Err(MlError::Diverged { .. })
        ));
    }

    #[test]
    fn training_is_deterministic_in_the_seed() {
        let start = two_spin(0.0, 0.0, 0.0);
        let images = vec![
            vec![1, 1],
            vec![1, 0],
            vec![0, 1],
            vec![1, 1],
            vec![0, 0],
            vec![1, 1],
        ];
        let cfg = TrainConfig {
            alpha: 0.2,
            batch_size: 3,
            epochs: 2,
            model_samples: 400,
            lambda0: 1.0e6,
            seed: 9,
            ..TrainConfig::default()
        };
        let (a, da) = train(&start, &images, &cfg).unwrap();
        let (b, db) = train(&start, &images, &cfg).unwrap();
        assert_eq!(a.coupling_weights(), b.coupling_weights());
        assert_eq!(a.biases(), b.biases());
        assert_eq!(da, db);
        let (c, _) = train(&start, &images, &TrainConfig { seed: 10, ..cfg }).unwrap();
        assert_ne!(a.coupling_weights(), c.coupling_weights());
    }

    #[test]
    fn zero_epochs_and_zero_alpha_change_nothing() {
        let start = two_spin(0.3, 0.1, 0.0);
        let images = vec![vec![1, 1], vec![0, 0]];
        let idle = TrainConfig {
            epochs: 0,
            lambda0: 1.0e6,
            model_samples: 100,
            ..TrainConfig::default()
        };
        let (same, diags) = train(&start, &images, &idle).unwrap();
        assert_eq!(same.coupling_weights(), start.coupling_weights());
        assert!(diags.is_empty());

        let frozen = TrainConfig {
            alpha: 0.0,
            epochs: 2,
            batch_size: 2,
            lambda0: 1.0e6,
            model_samples: 100,
            ..TrainConfig::default()
        };
        let (same, _) = train(&start, &images, &frozen).unwrap();
        assert_eq!(same.coupling_weights(), start.coupling_weights());
        assert_eq!(same.biases(), start.biases());
    }
}
