//! Hypotheses, hyperbolicity ratios, the test functions and the verdicts built on them.

mod hypotheses;
mod system;
mod independence;
mod verdict;

pub use hypotheses::{check_hypotheses, CheckedSystem, HyperbolicityRatios};
pub use system::KolmogorovSystem;
pub use independence::{independence_jacobian, IndependenceResult, TestFunction};
pub use verdict::*;
