//! Exact analysis engine for two-player nonlocal games played with maximally
//! entangled states in dimensions 2 and 3.

pub mod catalog;
pub mod error;
pub mod funcspace;
pub mod game;
pub mod reference;
pub mod simulator;
pub mod sweep;
pub mod tensor;

#[cfg(test)]
pub(crate) mod test_support;

pub use catalog::{
    basis_classes, distinguishers_to_csv, pair_classes, round_scaled, CatalogBuilder, CatalogTag,
    DistinguisherRecord, EquivalenceClass, RoundedKey, RoundingMode, TupleDomain,
};
pub use error::{Error, Result};
pub use funcspace::{enumerate_f2, enumerate_g3, TruthTable2, TruthTable3};
pub use game::{
    chsh_closed_form, conditional_win, win_probability, GameSpec, ScoringTable, WinProbability,
};
pub use reference::{full_concordance, Discrepancy, TableConcordance};
pub use simulator::{
    decide_dimension, required_rounds, run_protocol, ProtocolConfig, ProtocolResult, RoundRecord,
    DEGENERATE_TOL,
};
pub use sweep::{
    compute_surface, enumerate_games, find_max, format_grid_angle, parse_grid_angle,
    presentation_tol, sweep_all, AngleGridPoint, SweepResult, WinProbSurface, GRID_SIZE, GRID_STEP,
    TIGHT_TIE_TOL,
};
pub use tensor::{
    alice_basis_d2, alice_basis_d3, bob_basis_d2, bob_basis_d3, joint_distribution, max_entangled,
    BipartiteState, JointDistribution, Ket, OrthonormalBasis,
};
