//! Shared fixtures for the criterion benchmarks.

use pbit_core::model::{EnergySign, SpinDomain};
use pbit_core::opt::gen_sk;
use pbit_core::topology::{build_kings_grid, GridFill};
use pbit_core::IsingModel;

/// 16x16 king's-move grid with random couplings — the sparse benchmark
/// workload.
pub fn kings_16() -> IsingModel {
    build_kings_grid(
        16,
        16,
        GridFill::Random {
            max_abs: 1.0,
            seed: 7,
        },
        SpinDomain::PlusMinus,
        EnergySign::Ferromagnetic,
    )
    .expect("grid construction is valid")
}

/// Fully connected 64-spin spin-glass — the dense benchmark workload.
pub fn dense_64() -> IsingModel {
    gen_sk(64, 7).expect("instance generation is valid")
}

/// 12-spin model small enough for exhaustive enumeration benchmarks.
pub fn enumerable_12() -> IsingModel {
    build_kings_grid(
        3,
        4,
        GridFill::Random {
            max_abs: 2.0,
            seed: 3,
        },
        SpinDomain::PlusMinus,
        EnergySign::Ferromagnetic,
    )
    .expect("grid construction is valid")
}
