//! Energy model: sparse symmetric couplings plus per-spin biases.
//!
//! The energy of a configuration `s` is
//!
//! ```text
//! E(s) = sign * ( sum_{i<j} J_ij s_i s_j  +  sum_i b_i s_i )
//! ```
//!
//! where each unordered pair is stored and summed exactly once and `sign`
//! selects between the literal convention above (`AsWritten`, sign = +1) and
//! the ferromagnetic convention (`Ferromagnetic`, sign = -1) in which
//! positive couplings align spins. Spins live either in `{-1, +1}` or in
//! `{0, 1}`; the two domains are related by the affine map `s = 2x - 1` and
//! [`IsingModel::convert_domain`] rewrites parameters so that the Boltzmann
//! distribution is preserved state-for-state.

use thiserror::Error;

/// Value set a spin may take.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpinDomain {
    /// Spins in `{-1, +1}`.
    PlusMinus,
    /// Spins in `{0, 1}`.
    ZeroOne,
}

impl SpinDomain {
    /// Numeric value of the "up" state.
    pub fn up(self) -> i8 {
        1
    }

    /// Numeric value of the "down" state.
    pub fn down(self) -> i8 {
        match self {
            SpinDomain::PlusMinus => -1,
            SpinDomain::ZeroOne => 0,
        }
    }

    /// Whether `v` is a legal spin value in this domain.
    pub fn contains(self, v: i8) -> bool {
        v == self.up() || v == self.down()
    }

    /// Distance between the two spin values (2 for `{-1,+1}`, 1 for `{0,1}`).
    pub fn width(self) -> f64 {
        (self.up() - self.down()) as f64
    }

    /// The other value of the domain.
    pub fn flipped(self, v: i8) -> i8 {
        if v == self.up() {
            self.down()
        } else {
            self.up()
        }
    }
}

/// Sign convention applied to the quadratic-plus-linear energy form.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EnergySign {
    /// `E = +(sum J s s + sum b s)`.
    AsWritten,
    /// `E = -(sum J s s + sum b s)`; positive couplings are ferromagnetic.
    Ferromagnetic,
}

impl EnergySign {
    /// Multiplicative factor in front of the raw quadratic form.
    pub fn factor(self) -> f64 {
        match self {
            EnergySign::AsWritten => 1.0,
            EnergySign::Ferromagnetic => -1.0,
        }
    }
}

/// Errors from model construction and evaluation.
#[derive(Debug, Error, PartialEq)]
pub enum ModelError {
    #[error("model must have at least one spin")]
    Empty,
    #[error("spin index {index} out of range for {n} spins")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("coupling ({i}, {j}) couples a spin to itself")]
    SelfLoop { i: usize, j: usize },
    #[error("duplicate coupling for pair ({i}, {j})")]
    DuplicatePair { i: usize, j: usize },
    #[error("non-finite parameter value {value} at {site}")]
    NonFinite { site: String, value: f64 },
    #[error("expected {expected} biases, got {got}")]
    BiasLength { expected: usize, got: usize },
    #[error("expected {expected} coupling weights, got {got}")]
    WeightLength { expected: usize, got: usize },
    #[error("state has {got} spins but model has {expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("state domain does not match model domain")]
    DomainMismatch,
    #[error("spin value {value} is not in the declared domain")]
    ValueOutOfDomain { value: i8 },
}

/// A spin configuration tagged with its domain.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpinState {
    domain: SpinDomain,
    values: Vec<i8>,
}

impl SpinState {
    /// Validates that every entry belongs to `domain`.
    pub fn new(domain: SpinDomain, values: Vec<i8>) -> Result<Self, ModelError> {
        if values.is_empty() {
            return Err(ModelError::Empty);
        }
        for &v in &values {
            if !domain.contains(v) {
                return Err(ModelError::ValueOutOfDomain { value: v });
            }
        }
        Ok(SpinState { domain, values })
    }

    /// All spins set to the same value: up when `up` is true, else down.
    pub fn filled(domain: SpinDomain, n: usize, up: bool) -> Self {
        let v = if up { domain.up() } else { domain.down() };
        SpinState {
            domain,
            values: vec![v; n],
        }
    }

    /// Decodes a state index: bit `i` of `index` set means spin `i` is up.
    ///
    /// Panics if `n >= 64`; indices are only used for exhaustive enumeration
    /// over small models.
    pub fn from_index(domain: SpinDomain, n: usize, index: usize) -> Self {
        assert!(n < 64, "state indices only defined for fewer than 64 spins");
        let values = (0..n)
            .map(|i| {
                if index >> i & 1 == 1 {
                    domain.up()
                } else {
                    domain.down()
                }
            })
            .collect();
        SpinState { domain, values }
    }

    /// Encodes this state as an index (inverse of [`SpinState::from_index`]).
    pub fn index(&self) -> usize {
        assert!(
            self.values.len() < 64,
            "state indices only defined for fewer than 64 spins"
        );
        let mut idx = 0usize;
        for (i, &v) in self.values.iter().enumerate() {
            if v == self.domain.up() {
                idx |= 1 << i;
            }
        }
        idx
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn domain(&self) -> SpinDomain {
        self.domain
    }

    pub fn values(&self) -> &[i8] {
        &self.values
    }

    pub fn value(&self, i: usize) -> i8 {
        self.values[i]
    }

    pub fn is_up(&self, i: usize) -> bool {
        self.values[i] == self.domain.up()
    }

    /// Sets spin `i`, validating the value.
    pub fn set(&mut self, i: usize, v: i8) -> Result<(), ModelError> {
        if i >= self.values.len() {
            return Err(ModelError::IndexOutOfRange {
                index: i,
                n: self.values.len(),
            });
        }
        if !self.domain.contains(v) {
            return Err(ModelError::ValueOutOfDomain { value: v });
        }
        self.values[i] = v;
        Ok(())
    }

    /// Relabels the state into `target`, mapping up to up and down to down.
    pub fn to_domain(&self, target: SpinDomain) -> SpinState {
        if target == self.domain {
            return self.clone();
        }
        let values = self
            .values
            .iter()
            .map(|&v| {
                if v == self.domain.up() {
                    target.up()
                } else {
                    target.down()
                }
            })
            .collect();
        SpinState {
            domain: target,
            values,
        }
    }

    /// Packs the state into 64-bit words, bit `i` set when spin `i` is up.
    pub fn packed(&self) -> Vec<u64> {
        let mut words = vec![0u64; self.values.len().div_ceil(64)];
        for (i, &v) in self.values.iter().enumerate() {
            if v == self.domain.up() {
                words[i / 64] |= 1 << (i % 64);
            }
        }
        words
    }
}

/// One symmetric coupling, stored once with `i < j`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Coupling {
    pub i: usize,
    pub j: usize,
    pub weight: f64,
}

/// Sparse pairwise energy model. Immutable after construction; parameter
/// updates go through [`IsingModel::with_parameters`], which returns a new
/// model over the same support.
#[derive(Debug, Clone, PartialEq)]
pub struct IsingModel {
    n: usize,
    domain: SpinDomain,
    sign: EnergySign,
    biases: Vec<f64>,
    couplings: Vec<Coupling>,
    adjacency: Vec<Vec<(usize, f64)>>,
}

impl IsingModel {
    /// Builds a model from biases (one per spin) and a coupling list.
    ///
    /// Pairs are canonicalized to `i < j` and sorted; self-loops, duplicate
    /// pairs, out-of-range indices, and non-finite values are rejected.
    pub fn new(
        domain: SpinDomain,
        sign: EnergySign,
        biases: Vec<f64>,
        couplings: Vec<(usize, usize, f64)>,
    ) -> Result<Self, ModelError> {
        let n = biases.len();
        if n == 0 {
            return Err(ModelError::Empty);
        }
        for (i, &b) in biases.iter().enumerate() {
            if !b.is_finite() {
                return Err(ModelError::NonFinite {
                    site: format!("bias {i}"),
                    value: b,
                });
            }
        }
        let mut canon = Vec::with_capacity(couplings.len());
        for (i, j, w) in couplings {
            if i == j {
                return Err(ModelError::SelfLoop { i, j });
            }
            if i >= n {
                return Err(ModelError::IndexOutOfRange { index: i, n });
            }
            if j >= n {
                return Err(ModelError::IndexOutOfRange { index: j, n });
            }
            if !w.is_finite() {
                return Err(ModelError::NonFinite {
                    site: format!("coupling ({i}, {j})"),
                    value: w,
                });
            }
            let (a, b) = if i < j { (i, j) } else { (j, i) };
            canon.push(Coupling {
                i: a,
                j: b,
                weight: w,
            });
        }
        canon.sort_by_key(|c| (c.i, c.j));
        for pair in canon.windows(2) {
            if pair[0].i == pair[1].i && pair[0].j == pair[1].j {
                return Err(ModelError::DuplicatePair {
                    i: pair[0].i,
                    j: pair[0].j,
                });
            }
        }
        let mut adjacency = vec![Vec::new(); n];
        for c in &canon {
            adjacency[c.i].push((c.j, c.weight));
            adjacency[c.j].push((c.i, c.weight));
        }
        Ok(IsingModel {
            n,
            domain,
            sign,
            biases,
            couplings: canon,
            adjacency,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn domain(&self) -> SpinDomain {
        self.domain
    }

    pub fn sign(&self) -> EnergySign {
        self.sign
    }

    pub fn biases(&self) -> &[f64] {
        &self.biases
    }

    pub fn bias(&self, i: usize) -> f64 {
        self.biases[i]
    }

    /// Couplings in canonical `(i, j)` order with `i < j`.
    pub fn couplings(&self) -> &[Coupling] {
        &self.couplings
    }

    /// Neighbors of spin `i` as `(index, weight)` pairs.
    pub fn neighbors(&self, i: usize) -> &[(usize, f64)] {
        &self.adjacency[i]
    }

    fn check_state(&self, state: &SpinState) -> Result<(), ModelError> {
        if state.len() != self.n {
            return Err(ModelError::DimensionMismatch {
                expected: self.n,
                got: state.len(),
            });
        }
        if state.domain() != self.domain {
            return Err(ModelError::DomainMismatch);
        }
        Ok(())
    }

    /// Total energy of `state` under this model's sign convention.
    pub fn energy(&self, state: &SpinState) -> Result<f64, ModelError> {
        self.check_state(state)?;
        let v = state.values();
        let mut acc = 0.0;
        for c in &self.couplings {
            acc += c.weight * (v[c.i] as f64) * (v[c.j] as f64);
        }
        for (i, &b) in self.biases.iter().enumerate() {
            acc += b * (v[i] as f64);
        }
        Ok(self.sign.factor() * acc)
    }

    /// Local field on spin `i`: the coefficient `h_i` such that the energy
    /// terms involving spin `i` equal `h_i * s_i` (sign convention included).
    pub fn local_field(&self, state: &SpinState, i: usize) -> Result<f64, ModelError> {
        self.check_state(state)?;
        if i >= self.n {
            return Err(ModelError::IndexOutOfRange { index: i, n: self.n });
        }
        Ok(self.local_field_unchecked(state.values(), i))
    }

    /// Energy of a raw value slice assumed to match this model's shape and
    /// domain; used on hot paths where the state was produced internally.
    pub(crate) fn energy_of_values(&self, v: &[i8]) -> f64 {
        let mut acc = 0.0;
        for c in &self.couplings {
            acc += c.weight * (v[c.i] as f64) * (v[c.j] as f64);
        }
        for (i, &b) in self.biases.iter().enumerate() {
            acc += b * (v[i] as f64);
        }
        self.sign.factor() * acc
    }

    pub(crate) fn local_field_unchecked(&self, values: &[i8], i: usize) -> f64 {
        let mut acc = self.biases[i];
        for &(j, w) in &self.adjacency[i] {
            acc += w * (values[j] as f64);
        }
        self.sign.factor() * acc
    }

    /// Conditional probability that spin `i` is up given all other spins.
    ///
    /// With `h_i` the local field and `d` the domain width this is
    /// `logistic(-d * h_i)`, since the Boltzmann weight of the up state
    /// relative to down is `exp(-(up - down) * h_i)`.
    pub fn conditional_prob_up(&self, state: &SpinState, i: usize) -> Result<f64, ModelError> {
        let h = self.local_field(state, i)?;
        Ok(crate::math::logistic(-self.domain.width() * h))
    }

    /// Ideal logit drive on spin `i`: the argument `u` such that the ideal
    /// conditional probability of up is `logistic(u)`. Hardware response
    /// curves are modeled as distortions of this quantity.
    pub(crate) fn logit_drive(&self, values: &[i8], i: usize) -> f64 {
        -self.domain.width() * self.local_field_unchecked(values, i)
    }

    /// Energy change if spin `i` moves from its current value to `new`.
    pub(crate) fn flip_delta(&self, values: &[i8], i: usize, new: i8) -> f64 {
        let h = self.local_field_unchecked(values, i);
        h * ((new - values[i]) as f64)
    }

    /// Rewrites the model in `target` so the Boltzmann distribution over
    /// relabeled states is unchanged (the additive constant is dropped).
    pub fn convert_domain(&self, target: SpinDomain) -> IsingModel {
        if target == self.domain {
            return self.clone();
        }
        let mut incident = vec![0.0f64; self.n];
        for c in &self.couplings {
            incident[c.i] += c.weight;
            incident[c.j] += c.weight;
        }
        let (couplings, biases): (Vec<_>, Vec<f64>) = match (self.domain, target) {
            (SpinDomain::PlusMinus, SpinDomain::ZeroOne) => {
                // s = 2x - 1: J s_i s_j = 4J x_i x_j - 2J x_i - 2J x_j + J
                // and b s = 2b x - b.
                let c = self
                    .couplings
                    .iter()
                    .map(|c| (c.i, c.j, 4.0 * c.weight))
                    .collect();
                let b = self
                    .biases
                    .iter()
                    .zip(&incident)
                    .map(|(&b, &s)| 2.0 * b - 2.0 * s)
                    .collect();
                (c, b)
            }
            (SpinDomain::ZeroOne, SpinDomain::PlusMinus) => {
                // x = (s + 1)/2: inverse of the map above.
                let c = self
                    .couplings
                    .iter()
                    .map(|c| (c.i, c.j, c.weight / 4.0))
                    .collect();
                let b = self
                    .biases
                    .iter()
                    .zip(&incident)
                    .map(|(&b, &s)| b / 2.0 + s / 4.0)
                    .collect();
                (c, b)
            }
            _ => unreachable!(),
        };
        IsingModel::new(target, self.sign, biases, couplings)
            .expect("domain conversion preserves validity")
    }

    /// Multiplies every coupling and bias by `factor` (an inverse-temperature
    /// knob: energies scale linearly).
    pub fn scaled(&self, factor: f64) -> IsingModel {
        let couplings = self
            .couplings
            .iter()
            .map(|c| (c.i, c.j, c.weight * factor))
            .collect();
        let biases = self.biases.iter().map(|&b| b * factor).collect();
        IsingModel::new(self.domain, self.sign, biases, couplings)
            .expect("scaling preserves validity")
    }

    /// Aligned list of coupling weights, in the order of
    /// [`IsingModel::couplings`].
    pub fn coupling_weights(&self) -> Vec<f64> {
        self.couplings.iter().map(|c| c.weight).collect()
    }

    /// Returns a model with the same support but new parameter values.
    /// `weights` must align with [`IsingModel::couplings`] and `biases` with
    /// spin indices.
    pub fn with_parameters(&self, weights: &[f64], biases: &[f64]) -> Result<IsingModel, ModelError> {
        if weights.len() != self.couplings.len() {
            return Err(ModelError::WeightLength {
                expected: self.couplings.len(),
                got: weights.len(),
            });
        }
        if biases.len() != self.n {
            return Err(ModelError::BiasLength {
                expected: self.n,
                got: biases.len(),
            });
        }
        let couplings = self
            .couplings
            .iter()
            .zip(weights)
            .map(|(c, &w)| (c.i, c.j, w))
            .collect();
        IsingModel::new(self.domain, self.sign, biases.to_vec(), couplings)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn two_spin() -> IsingModel {
        IsingModel::new(
            SpinDomain::PlusMinus,
            EnergySign::AsWritten,
            vec![0.0, 0.5],
            vec![(0, 1, 1.0)],
        )
        .unwrap()
    }

    #[test]
    fn energy_of_antiparallel_pair() {
        let m = IsingModel::new(
            SpinDomain::PlusMinus,
            EnergySign::AsWritten,
            vec![0.0, 0.0],
            vec![(0, 1, 1.0)],
        )
        .unwrap();
        let s = SpinState::new(SpinDomain::PlusMinus, vec![1, -1]).unwrap();
        assert_abs_diff_eq!(m.energy(&s).unwrap(), -1.0);
    }

    #[test]
    fn local_field_includes_bias_and_neighbors() {
        let m = two_spin();
        let s = SpinState::new(SpinDomain::PlusMinus, vec![1, 1]).unwrap();
        assert_abs_diff_eq!(m.local_field(&s, 1).unwrap(), 1.5);
    }

    #[test]
    fn ferromagnetic_sign_flips_energy() {
        let m = two_spin();
        let f = IsingModel::new(
            SpinDomain::PlusMinus,
            EnergySign::Ferromagnetic,
            vec![0.0, 0.5],
            vec![(0, 1, 1.0)],
        )
        .unwrap();
        let s = SpinState::new(SpinDomain::PlusMinus, vec![1, -1]).unwrap();
        assert_abs_diff_eq!(m.energy(&s).unwrap(), -f.energy(&s).unwrap());
    }

    #[test]
    fn single_zero_one_neuron_conditional_is_logistic_of_bias() {
        // Ferromagnetic sign, domain {0,1}: P(up) = logistic(b).
        let m = IsingModel::new(
            SpinDomain::ZeroOne,
            EnergySign::Ferromagnetic,
            vec![1.0],
            vec![],
        )
        .unwrap();
        let s = SpinState::new(SpinDomain::ZeroOne, vec![0]).unwrap();
        assert_abs_diff_eq!(
            m.conditional_prob_up(&s, 0).unwrap(),
            crate::math::logistic(1.0),
            epsilon = 1e-15
        );
    }

    #[test]
    fn energy_terms_factor_through_local_field() {
        // E(state with s_i = v) - E(state with s_i = v') = h_i (v - v').
        let m = IsingModel::new(
            SpinDomain::PlusMinus,
            EnergySign::Ferromagnetic,
            vec![0.3, -0.7, 1.1],
            vec![(0, 1, 0.8), (1, 2, -1.4), (0, 2, 0.5)],
        )
        .unwrap();
        for idx in 0..8usize {
            let s = SpinState::from_index(SpinDomain::PlusMinus, 3, idx);
            for i in 0..3 {
                let mut flipped = s.clone();
                flipped
                    .set(i, SpinDomain::PlusMinus.flipped(s.value(i)))
                    .unwrap();
                let de = m.energy(&flipped).unwrap() - m.energy(&s).unwrap();
                let h = m.local_field(&s, i).unwrap();
                assert_abs_diff_eq!(
                    de,
                    h * ((flipped.value(i) - s.value(i)) as f64),
                    epsilon = 1e-12
                );
            }
        }
    }

    #[test]
    fn rejects_malformed_inputs() {
        let err = IsingModel::new(
            SpinDomain::PlusMinus,
            EnergySign::AsWritten,
            vec![0.0, 0.0],
            vec![(0, 0, 1.0)],
        )
        .unwrap_err();
        assert_eq!(err, ModelError::SelfLoop { i: 0, j: 0 });

        let err = IsingModel::new(
            SpinDomain::PlusMinus,
            EnergySign::AsWritten,
            vec![0.0, 0.0],
            vec![(0, 1, 1.0), (1, 0, 2.0)],
        )
        .unwrap_err();
        assert_eq!(err, ModelError::DuplicatePair { i: 0, j: 1 });

        let err = IsingModel::new(
            SpinDomain::PlusMinus,
            EnergySign::AsWritten,
            vec![0.0],
            vec![(0, 3, 1.0)],
        )
        .unwrap_err();
        assert_eq!(err, ModelError::IndexOutOfRange { index: 3, n: 1 });

        assert!(SpinState::new(SpinDomain::ZeroOne, vec![0, 1, -1]).is_err());
    }

    #[test]
    fn state_index_roundtrip() {
        for idx in 0..32usize {
            let s = SpinState::from_index(SpinDomain::ZeroOne, 5, idx);
            assert_eq!(s.index(), idx);
            let t = s.to_domain(SpinDomain::PlusMinus);
            assert_eq!(t.index(), idx);
        }
    }

    #[test]
    fn domain_conversion_roundtrips_parameters() {
        let m = IsingModel::new(
            SpinDomain::PlusMinus,
            EnergySign::AsWritten,
            vec![0.4, -1.2, 0.0],
            vec![(0, 1, 1.5), (1, 2, -0.3)],
        )
        .unwrap();
        let back = m.convert_domain(SpinDomain::ZeroOne).convert_domain(SpinDomain::PlusMinus);
        for (a, b) in m.biases().iter().zip(back.biases()) {
            assert_abs_diff_eq!(a, b, epsilon = 1e-12);
        }
        for (a, b) in m.couplings().iter().zip(back.couplings()) {
            assert_eq!((a.i, a.j), (b.i, b.j));
            assert_abs_diff_eq!(a.weight, b.weight, epsilon = 1e-12);
        }
    }
}
