//! Random benchmark instances and the cut/energy correspondence.

use rand::Rng;
use rand_distr::StandardNormal;

use super::OptError;
use crate::model::{EnergySign, IsingModel, SpinDomain, SpinState};
use crate::seed::derive_rng;

/// Undirected weighted graph with each edge stored once as (i, j, w), i < j.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedGraph {
    n: usize,
    edges: Vec<(usize, usize, f64)>,
}

impl WeightedGraph {
    pub fn new(n: usize, edges: Vec<(usize, usize, f64)>) -> Result<Self, OptError> {
        if n < 2 {
            return Err(OptError::TooFewVertices(n));
        }
        let mut canon: Vec<(usize, usize, f64)> = Vec::with_capacity(edges.len());
        for (i, j, w) in edges {
            let (a, b) = if i < j { (i, j) } else { (j, i) };
            if a == b || b >= n {
                return Err(OptError::BadEdge { i, j, n });
            }
            if !w.is_finite() {
                return Err(OptError::NonFiniteWeight);
            }
            canon.push((a, b, w));
        }
        canon.sort_by_key(|&(a, b, _)| (a, b));
        for pair in canon.windows(2) {
            if pair[0].0 == pair[1].0 && pair[0].1 == pair[1].1 {
                return Err(OptError::DuplicateEdge {
                    i: pair[0].0,
                    j: pair[0].1,
                });
            }
        }
        Ok(WeightedGraph { n, edges: canon })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[(usize, usize, f64)] {
        &self.edges
    }

    pub fn total_weight(&self) -> f64 {
        self.edges.iter().map(|e| e.2).sum()
    }
}

/// Which vertex pairs become edges.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EdgeFill {
    /// Every pair (complete graph), the benchmark default.
    Complete,
    /// Each pair independently with this probability.
    Probability(f64),
}

/// Edge weight distribution.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WeightScheme {
    /// All weights 1.
    Unit,
    /// Each weight independently ±1 with equal probability.
    PlusMinusUnit,
}

/// Random MaxCut instance, deterministic in `seed`.
pub fn gen_maxcut(
    n: usize,
    fill: EdgeFill,
    weights: WeightScheme,
    seed: u64,
) -> Result<WeightedGraph, OptError> {
    if n < 2 {
        return Err(OptError::TooFewVertices(n));
    }
    if let EdgeFill::Probability(p) = fill {
        if !(0.0..=1.0).contains(&p) {
            return Err(OptError::BadEdgeProbability(p));
        }
    }
    let mut rng = derive_rng(seed, "maxcut-instance", 0);
    let mut edges = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            let present = match fill {
                EdgeFill::Complete => true,
                EdgeFill::Probability(p) => rng.random::<f64>() < p,
            };
            if !present {
                continue;
            }
            let w = match weights {
                WeightScheme::Unit => 1.0,
                WeightScheme::PlusMinusUnit => {
                    if rng.random::<bool>() {
                        1.0
                    } else {
                        -1.0
                    }
                }
            };
            edges.push((i, j, w));
        }
    }
    WeightedGraph::new(n, edges)
}

/// Random Sherrington-Kirkpatrick instance: complete ±1-domain model with
/// standard-normal couplings and zero biases, deterministic in `seed`.
pub fn gen_sk(n: usize, seed: u64) -> Result<IsingModel, OptError> {
    if n < 2 {
        return Err(OptError::TooFewVertices(n));
    }
    let mut rng = derive_rng(seed, "sk-instance", 0);
    let mut couplings = Vec::with_capacity(n * (n - 1) / 2);
    for i in 0..n {
        for j in (i + 1)..n {
            let w: f64 = rng.sample(StandardNormal);
            couplings.push((i, j, w));
        }
    }
    Ok(IsingModel::new(
        SpinDomain::PlusMinus,
        EnergySign::AsWritten,
        vec![0.0; n],
        couplings,
    )?)
}

/// Ising encoding of a MaxCut instance: minimizing the model energy
/// maximizes the cut, and for every ±1 state `cut = c0 - c1 * energy`.
#[derive(Debug, Clone)]
pub struct MaxcutEncoding {
    pub model: IsingModel,
    pub c0: f64,
    pub c1: f64,
}

impl MaxcutEncoding {
    /// Cut value corresponding to a model energy.
    pub fn cut_of_energy(&self, energy: f64) -> f64 {
        self.c0 - self.c1 * energy
    }
}

/// Builds the energy model whose minimum corresponds to the maximum cut.
///
/// With J_ij = w_ij / 2 the identity
/// `cut(s) = sum w_ij (1 - s_i s_j) / 2 = W/2 - sum J_ij s_i s_j`
/// gives c0 = W/2 and c1 = 1.
pub fn maxcut_to_ising(graph: &WeightedGraph) -> Result<MaxcutEncoding, OptError> {
    let couplings = graph
        .edges()
        .iter()
        .map(|&(i, j, w)| (i, j, w / 2.0))
        .collect();
    let model = IsingModel::new(
        SpinDomain::PlusMinus,
        EnergySign::AsWritten,
        vec![0.0; graph.n()],
        couplings,
    )?;
    Ok(MaxcutEncoding {
        model,
        c0: graph.total_weight() / 2.0,
        c1: 1.0,
    })
}

/// Cut value of a ±1 partition: total weight of edges crossing it.
pub fn cut_value(graph: &WeightedGraph, state: &SpinState) -> Result<f64, OptError> {
    if state.domain() != SpinDomain::PlusMinus {
        return Err(crate::model::ModelError::DomainMismatch.into());
    }
    if state.len() != graph.n() {
        return Err(crate::model::ModelError::DimensionMismatch {
            expected: graph.n(),
            got: state.len(),
        }
        .into());
    }
    let v = state.values();
    Ok(graph
        .edges()
        .iter()
        .map(|&(i, j, w)| w * (1.0 - (v[i] as f64) * (v[j] as f64)) / 2.0)
        .sum())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modelfile::{parse_model, write_model};
    use approx::assert_relative_eq;

    #[test]
    fn two_vertex_complete_graph_has_one_edge() {
        let g = gen_maxcut(2, EdgeFill::Complete, WeightScheme::Unit, 1).unwrap();
        assert_eq!(g.edges(), &[(0, 1, 1.0)]);
    }

    #[test]
    fn same_seed_reproduces_instances() {
        let a = gen_maxcut(9, EdgeFill::Probability(0.5), WeightScheme::PlusMinusUnit, 42).unwrap();
        let b = gen_maxcut(9, EdgeFill::Probability(0.5), WeightScheme::PlusMinusUnit, 42).unwrap();
        assert_eq!(a, b);
        let c = gen_maxcut(9, EdgeFill::Probability(0.5), WeightScheme::PlusMinusUnit, 43).unwrap();
        assert_ne!(a, c);
        assert_eq!(gen_sk(7, 5).unwrap(), gen_sk(7, 5).unwrap());
    }

    #[test]
    fn edge_probability_extremes() {
        let none = gen_maxcut(6, EdgeFill::Probability(0.0), WeightScheme::Unit, 3).unwrap();
        assert!(none.edges().is_empty());
        let all = gen_maxcut(6, EdgeFill::Probability(1.0), WeightScheme::Unit, 3).unwrap();
        assert_eq!(all.edges().len(), 15);
        assert!(matches!(
            gen_maxcut(6, EdgeFill::Probability(1.5), WeightScheme::Unit, 3),
            Err(OptError::BadEdgeProbability(_))
        ));
    }

    #[test]
    fn complete_unit_k4_max_cut_is_four() {
        // Enumerate all 16 partitions: the balanced ones cut 4 edges.
        let g = gen_maxcut(4, EdgeFill::Complete, WeightScheme::Unit, 0).unwrap();
        let mut best = f64::NEG_INFINITY;
        for idx in 0..16usize {
            let s = SpinState::from_index(SpinDomain::PlusMinus, 4, idx);
            best = best.max(cut_value(&g, &s).unwrap());
        }
        assert_eq!(best, 4.0);
    }

    #[test]
    fn uniform_state_cuts_nothing() {
        let g = gen_maxcut(5, EdgeFill::Complete, WeightScheme::PlusMinusUnit, 8).unwrap();
        let s = SpinState::filled(SpinDomain::PlusMinus, 5, true);
        assert_eq!(cut_value(&g, &s).unwrap(), 0.0);
    }

    #[test]
    fn cut_equals_affine_function_of_energy_everywhere() {
        let g = gen_maxcut(6, EdgeFill::Probability(0.7), WeightScheme::PlusMinusUnit, 17).unwrap();
        let enc = maxcut_to_ising(&g).unwrap();
        for idx in 0..64usize {
            let s = SpinState::from_index(SpinDomain::PlusMinus, 6, idx);
            let direct = cut_value(&g, &s).unwrap();
            let via_energy = enc.cut_of_energy(enc.model.energy(&s).unwrap());
            assert_relative_eq!(direct, via_energy, epsilon = 1e-12);
        }
    }

    #[test]
    fn sk_instance_shape_and_coupling_statistics() {
        let m = gen_sk(100, 11).unwrap();
        let ws = m.coupling_weights();
        assert_eq!(ws.len(), 100 * 99 / 2);
        let mean = ws.iter().sum::<f64>() / ws.len() as f64;
        // Zero-mean unit-variance draws: |mean| < 3 / sqrt(count).
        assert!(mean.abs() < 3.0 / (ws.len() as f64).sqrt());
        let var = ws.iter().map(|w| (w - mean) * (w - mean)).sum::<f64>() / ws.len() as f64;
        assert!((var - 1.0).abs() < 0.2);
    }

    #[test]
    fn sk_oracle_minimum_matches_direct_enumeration() {
        let m = gen_sk(8, 23).unwrap();
        let mut direct = f64::INFINITY;
        for idx in 0..256usize {
            let s = SpinState::from_index(SpinDomain::PlusMinus, 8, idx);
            direct = direct.min(m.energy(&s).unwrap());
        }
        let oracle = crate::analysis::oracle::min_energy(&m).unwrap();
        assert_relative_eq!(oracle, direct, epsilon = 1e-12);
    }

    #[test]
    fn instances_roundtrip_through_model_files() {
        let m = gen_sk(12, 3).unwrap();
        assert_eq!(parse_model(&write_model(&m)).unwrap(), m);
        let enc = maxcut_to_ising(
            &gen_maxcut(10, EdgeFill::Complete, WeightScheme::PlusMinusUnit, 4).unwrap(),
        )
        .unwrap();
        assert_eq!(parse_model(&write_model(&enc.model)).unwrap(), enc.model);
    }

    #[test]
    fn rejects_malformed_graphs() {
        assert!(matches!(
            WeightedGraph::new(1, vec![]),
            Err(OptError::TooFewVertices(1))
        ));
        assert!(matches!(
            WeightedGraph::new(3, vec![(0, 0, 1.0)]),
            Err(OptError::BadEdge { .. })
        ));
        assert!(matches!(
            WeightedGraph::new(3, vec![(0, 1, 1.0), (1, 0, 2.0)]),
            Err(OptError::DuplicateEdge { .. })
        ));
        assert!(matches!(
            WeightedGraph::new(3, vec![(0, 1, f64::NAN)]),
            Err(OptError::NonFiniteWeight)
        ));
    }
}
