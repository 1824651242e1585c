//! Scalar functionals and constants: energies, free energy and distance,
//! Hardy-Littlewood-Sobolev and Riesz composition constants, critical masses,
//! phase-diagram boundaries and weak entropy pairs.

mod constants;
mod energy;
mod entropy;
mod witnesses;

pub use constants::{
    b_constant, c_gamma, concavity_map, critical_alpha_band, critical_mass, critical_point,
    fractional_laplacian_constant, hls_constant, riesz_composition_constant, CriticalMassReport,
    SharpConstant,
};
pub use energy::{
    distance_d, free_energy, interaction_energy, internal_energy, kinetic_energy, lp_norm, mass,
    EnergyBreakdown, InteractionOperator,
};
pub use entropy::{entropy_bounds_check, entropy_pair, EntropyBoundsReport};
pub use witnesses::{
    composition_integral, hls_witness, variation_hls_chain, ChainWitness, HlsWitness,
};
