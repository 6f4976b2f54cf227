pub mod cochain;
pub mod hkr;
pub mod lift;
pub mod window;

pub use cochain::{PolyDiffCochain, Slot};
pub use hkr::{hkr_cohomology_dims, hkr_representatives};
pub use lift::{
    cup_of_lifts_witness, inner_lift, lift_cocycle, lift_is_coboundary, liftable_subspace, primary_obstruction,
    sridharan_potential, CoboundaryLift, LayeredCochain, LiftOutcome, Obstruction,
};
pub use window::{solve_coboundary, window_cohomology_dims, CoboundaryVerdict, CochainWindow, WindowCohomology};
