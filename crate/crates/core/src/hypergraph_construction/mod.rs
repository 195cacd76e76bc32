//! Parameter schedules, the family `ℋ_1 ≻ … ≻ ℋ_s` built by induction on
//! uniformity, and the pasting along the tight `2k`-cycle.

mod family;
mod onesided;
mod paste;
mod schedule;

pub use family::{block_chain, build_inductive_family, verify_family, FamilyReport, InductiveFamily};
pub use onesided::{verify_onesided_property, OneSidedReport};
pub use paste::{
    beta_star_analysis, build_pasted_instance, build_pasted_instance_with, tight_cycle, verify_pasted, BetaStar,
    PastedInstance, PastedReport,
};
pub use schedule::{ackermann, delta_k, pasted_density, Magnitude, ParamSchedule, Violation, DEFAULT_CUTOFF_BITS};
