//! Numerical flow of the compactified field: Dulac maps, displacement, cycles, equilibria.

mod chart;
mod conservation;
mod equilibrium;
mod fit;
pub mod ode;
mod polycycle;
mod transit;

pub use chart::{chart_field, ChartField, ChartKind, LogField};
pub use conservation::{conservation_check, reversibility_check, ConservationReport};
pub use equilibrium::{equilibria_first_quadrant, equilibrium_first_quadrant, EquilibriumKind, EquilibriumReport};
pub use fit::{
    dulac_corrections, fit_log_slope, fit_principal_part, least_squares, scaled_displacement, Correction, PrincipalPartFit,
    SlopeFit,
};
pub use polycycle::{
    composed_transit_affine, displacement_numeric, dulac_numeric, find_limit_cycles, return_map, DisplacementSample,
    DulacMap, LimitCycle, PolycycleFlow,
};
pub use transit::{integrate_to_section, Crossing, Direction, Section, TransitOptions};
