//! A dense triangle-free tripartite graph whose pairs keep most of their
//! density on every large subpair, built by random sampling, triangle
//! deletion and blowup.

mod build;
mod convex;
mod params;
mod verify;

pub use build::{build_triangle_free, Attempt, BuildAudit, TriangleFree, Tripartite, AUDIT_SAMPLES, PAIRS};
pub use convex::{convex_decompose, recombine};
pub use params::CounterexampleParams;
pub use verify::{verify_counterexample, BlowupSample, CounterexampleReport, PairCheck};
