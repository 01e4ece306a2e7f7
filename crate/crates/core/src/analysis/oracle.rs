//! Exact Boltzmann distributions by exhaustive enumeration.
//!
//! States are indexed by bit pattern (bit `i` set means spin `i` up) and
//! enumerated in Gray-code order so each step flips one spin and costs one
//! local-field evaluation. Energies are shifted by their maximum before
//! exponentiation, so the partition sum stays finite for any parameter
//! magnitudes this crate accepts.

use super::AnalysisError;
use crate::model::{IsingModel, SpinState};

/// Largest model the enumeration routines accept (2^20 states).
pub const MAX_ORACLE_SPINS: usize = 20;

/// Exact distribution over all `2^n` states.
#[derive(Debug, Clone, PartialEq)]
pub struct ExactDistribution {
    probs: Vec<f64>,
    log_z: f64,
}

impl ExactDistribution {
    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn prob(&self, index: usize) -> f64 {
        self.probs[index]
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Natural log of the partition function.
    pub fn log_z(&self) -> f64 {
        self.log_z
    }

    /// Marginal probability that spin `i` is up.
    pub fn marginal_up(&self, i: usize) -> f64 {
        let bit = 1usize << i;
        self.probs
            .iter()
            .enumerate()
            .filter(|(idx, _)| idx & bit != 0)
            .map(|(_, p)| p)
            .sum()
    }
}

/// Calls `f(state_index, energy)` for every state, walking in Gray-code
/// order with incremental energy updates (and periodic exact refreshes to
/// cap floating-point drift).
fn for_each_energy(
    model: &IsingModel,
    mut f: impl FnMut(usize, f64),
) -> Result<(), AnalysisError> {
    let n = model.n();
    if n > MAX_ORACLE_SPINS {
        return Err(AnalysisError::TooManySpins {
            n,
            max: MAX_ORACLE_SPINS,
        });
    }
    let domain = model.domain();
    let mut state = SpinState::filled(domain, n, false);
    let mut values = state.values().to_vec();
    let mut energy = model.energy(&state)?;
    let total: usize = 1 << n;
    let mut gray = 0usize;
    f(0, energy);
    for k in 1..total {
        let bit = k.trailing_zeros() as usize;
        gray ^= 1 << bit;
        let new = domain.flipped(values[bit]);
        energy += model.flip_delta(&values, bit, new);
        values[bit] = new;
        if k % 4096 == 0 {
            // Refresh against accumulated rounding error.
            for (i, &v) in values.iter().enumerate() {
                state.set(i, v).expect("enumeration state is valid");
            }
            energy = model.energy(&state)?;
        }
        f(gray, energy);
    }
    Ok(())
}

/// Exact Boltzmann distribution `p(s) = e^{-E(s)} / Z` for models with at
/// most [`MAX_ORACLE_SPINS`] spins.
pub fn exact_distribution(model: &IsingModel) -> Result<ExactDistribution, AnalysisError> {
    let n = model.n();
    let mut energies = vec![0.0f64; 1 << n];
    for_each_energy(model, |idx, e| energies[idx] = e)?;
    let min = energies.iter().cloned().fold(f64::INFINITY, f64::min);
    let mut sum = 0.0;
    for e in &mut energies {
        *e = (-(*e - min)).exp();
        sum += *e;
    }
    for e in &mut energies {
        *e /= sum;
    }
    Ok(ExactDistribution {
        probs: energies,
        log_z: sum.ln() - min,
    })
}

/// Exact distribution with some spins pinned: `clamps[i] = Some(v)` fixes
/// spin `i` to value `v`. Probability mass on inconsistent states is zero
/// and the remainder is renormalized, so the result is directly comparable
/// to empirical distributions from clamped runs.
pub fn clamped_distribution(
    model: &IsingModel,
    clamps: &[Option<i8>],
) -> Result<ExactDistribution, AnalysisError> {
    let n = model.n();
    if clamps.len() != n {
        return Err(AnalysisError::ClampLength {
            expected: n,
            got: clamps.len(),
        });
    }
    let domain = model.domain();
    for v in clamps.iter().flatten() {
        if !domain.contains(*v) {
            return Err(AnalysisError::Model(
                crate::model::ModelError::ValueOutOfDomain { value: *v },
            ));
        }
    }
    let mut fixed_mask = 0usize;
    let mut fixed_bits = 0usize;
    for (i, c) in clamps.iter().enumerate() {
        if let Some(v) = c {
            fixed_mask |= 1 << i;
            if *v == domain.up() {
                fixed_bits |= 1 << i;
            }
        }
    }
    let mut energies = vec![f64::INFINITY; 1 << n];
    for_each_energy(model, |idx, e| {
        if idx & fixed_mask == fixed_bits {
            energies[idx] = e;
        }
    })?;
    let min = energies.iter().cloned().fold(f64::INFINITY, f64::min);
    let mut sum = 0.0;
    for e in &mut energies {
        *e = if e.is_finite() { (-(*e - min)).exp() } else { 0.0 };
        sum += *e;
    }
    for e in &mut energies {
        *e /= sum;
    }
    Ok(ExactDistribution {
        probs: energies,
        log_z: sum.ln() - min,
    })
}

/// Exact minimum energy over all states.
pub fn min_energy(model: &IsingModel) -> Result<f64, AnalysisError> {
    let mut min = f64::INFINITY;
    for_each_energy(model, |_, e| min = min.min(e))?;
    Ok(min)
}

/// State indices attaining the minimum energy, within an absolute tolerance
/// scaled to the energy magnitude.
pub fn ground_states(model: &IsingModel) -> Result<Vec<usize>, AnalysisError> {
    let n = model.n();
    let mut energies = vec![0.0f64; 1 << n];
    for_each_energy(model, |idx, e| energies[idx] = e)?;
    let min = energies.iter().cloned().fold(f64::INFINITY, f64::min);
    let tol = 1e-9 * (1.0 + min.abs());
    Ok(energies
        .iter()
        .enumerate()
        .filter(|(_, &e)| e <= min + tol)
        .map(|(idx, _)| idx)
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{EnergySign, SpinDomain};
    use approx::assert_abs_diff_eq;

    #[test]
    fn unbiased_models_are_uniform_over_symmetric_states() {
        // No couplings, no biases: all states equally likely.
        let m = IsingModel::new(
            SpinDomain::PlusMinus,
            EnergySign::AsWritten,
            vec![0.0; 4],
            vec![],
        )
        .unwrap();
        let d = exact_distribution(&m).unwrap();
        for &p in d.probs() {
            assert_abs_diff_eq!(p, 1.0 / 16.0, epsilon = 1e-12);
        }
        assert_abs_diff_eq!(d.log_z(), (16.0f64).ln(), epsilon = 1e-12);
    }

    #[test]
    fn single_spin_ratio_follows_boltzmann_factor() {
        // {-1,+1}, as-written, bias b: P(down)/P(up) = e^{2b}. With
        // b = ln(3)/2 that ratio is 3, so P = (3/4, 1/4).
        let b = 3.0f64.ln() / 2.0;
        let m = IsingModel::new(
            SpinDomain::PlusMinus,
            EnergySign::AsWritten,
            vec![b],
            vec![],
        )
        .unwrap();
        let d = exact_distribution(&m).unwrap();
        assert_abs_diff_eq!(d.prob(0), 0.75, epsilon = 1e-12);
        assert_abs_diff_eq!(d.prob(1), 0.25, epsilon = 1e-12);
    }

    #[test]
    fn probabilities_sum_to_one_and_match_direct_evaluation() {
        let m = IsingModel::new(
            SpinDomain::ZeroOne,
            EnergySign::Ferromagnetic,
            vec![0.3, -0.8, 0.1],
            vec![(0, 1, 1.2), (1, 2, -0.7), (0, 2, 0.4)],
        )
        .unwrap();
        let d = exact_distribution(&m).unwrap();
        assert_abs_diff_eq!(d.probs().iter().sum::<f64>(), 1.0, epsilon = 1e-12);
        // Independent route: direct energies, no Gray walk.
        let mut direct: Vec<f64> = (0..8)
            .map(|idx| {
                let s = SpinState::from_index(SpinDomain::ZeroOne, 3, idx);
                (-m.energy(&s).unwrap()).exp()
            })
            .collect();
        let z: f64 = direct.iter().sum();
        for p in &mut direct {
            *p /= z;
        }
        for (a, b) in d.probs().iter().zip(&direct) {
            assert_abs_diff_eq!(a, b, epsilon = 1e-12);
        }
        assert_abs_diff_eq!(d.log_z(), z.ln(), epsilon = 1e-12);
    }

    #[test]
    fn energy_shift_keeps_partition_sum_finite() {
        let m = IsingModel::new(
            SpinDomain::PlusMinus,
            EnergySign::AsWritten,
            vec![500.0, -500.0],
            vec![(0, 1, 250.0)],
        )
        .unwrap();
        let d = exact_distribution(&m).unwrap();
        assert!(d.probs().iter().all(|p| p.is_finite()));
        assert_abs_diff_eq!(d.probs().iter().sum::<f64>(), 1.0, epsilon = 1e-9);
        assert!(d.log_z().is_finite());
    }

    #[test]
    fn clamped_distribution_matches_conditional() {
        let m = IsingModel::new(
            SpinDomain::PlusMinus,
            EnergySign::AsWritten,
            vec![0.2, -0.4, 0.6],
            vec![(0, 1, 0.9), (1, 2, -1.1)],
        )
        .unwrap();
        let full = exact_distribution(&m).unwrap();
        let cond = clamped_distribution(&m, &[Some(1), None, None]).unwrap();
        // Renormalized restriction of the full distribution.
        let mass: f64 = (0..8).filter(|i| i & 1 == 1).map(|i| full.prob(i)).sum();
        for idx in 0..8 {
            let expected = if idx & 1 == 1 { full.prob(idx) / mass } else { 0.0 };
            assert_abs_diff_eq!(cond.prob(idx), expected, epsilon = 1e-12);
        }
    }

    #[test]
    fn ground_states_of_ferromagnetic_pair() {
        let m = IsingModel::new(
            SpinDomain::PlusMinus,
            EnergySign::Ferromagnetic,
            vec![0.0, 0.0],
            vec![(0, 1, 1.0)],
        )
        .unwrap();
        assert_eq!(ground_states(&m).unwrap(), vec![0, 3]);
        assert_abs_diff_eq!(min_energy(&m).unwrap(), -1.0, epsilon = 1e-15);
    }

    #[test]
    fn oversized_models_are_rejected() {
        let m = IsingModel::new(
            SpinDomain::PlusMinus,
            EnergySign::AsWritten,
            vec![0.0; 21],
            vec![],
        )
        .unwrap();
        assert!(matches!(
            exact_distribution(&m),
            Err(AnalysisError::TooManySpins { n: 21, max: 20 })
        ));
    }
}
