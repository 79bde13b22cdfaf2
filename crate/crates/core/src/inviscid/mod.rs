//! Inviscid model: exact solutions through the Lax-Oleinik formula.

mod lax_oleinik;
mod profile;

pub use lax_oleinik::{
    hopf_potential, lax_oleinik_eval, lax_oleinik_minimizer, verify_attraction, AttractionReport,
    HopfPotential, LaxOleinik,
};
pub use profile::{extend_profile, ExtendedProfile, InitialProfile, Segment};
