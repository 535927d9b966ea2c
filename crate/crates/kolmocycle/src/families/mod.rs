//! The two cubic example families with their closed-form results.

mod first;
mod second;

pub use first::{family1_build, family1_oracle, Family1Oracle, Family1Params, FAMILY1_KEYS};
pub use second::{family2_build, family2_oracle, phi, Family2Oracle, Family2Params, FAMILY2_KEYS};
