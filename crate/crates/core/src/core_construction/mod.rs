//! The iterated construction of `𝒢₁ ≻ … ≻ 𝒢_s` over `𝐋 × 𝐑`, its checks and
//! the refutation certificate.

mod build;
mod io;
mod profile;
mod refute;
mod verify;
mod witness;

pub use build::{build_core_sequence, default_parts, CoreSequence, GammaRecord, NeighborFamily};
pub use io::{core_files, load_core_sequence, save_core_sequence};
pub use profile::{GrowthProfile, MAX_LEFT_EXPONENT};
pub use verify::{
    verify_all_core_properties, verify_core_properties, verify_degree_property, verify_quasirandomness,
    verify_structure, CorePropertiesReport, DegreeReport, QuasiReport, StructureReport,
};
pub use refute::{refute_partition, verify_certificate, Certificate, CertificateCheck, GammaChoice, LedgerLine, Refutation, StepReport};
pub use witness::{find_irregularity_witnesses, one_twelve_for, Witness, WitnessReport};
