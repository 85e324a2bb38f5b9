//! Reference pools bundled with the crate.
//!
//! The two unrestricted pools were found by random search at 6 and 8
//! qubits. The remaining ones are symmetry-adapted pools for H4 (with 3, 6,
//! 9 and 10 starters), LiH and BeH2 under the matching built-in
//! [`SymmetrySpec`](crate::symmetry::SymmetrySpec) presets.

use crate::pauli::PauliString;
use crate::pool::parse_pool;

pub const RANDOM6: &str = include_str!("../data/pools/random6.pool");
pub const RANDOM8: &str = include_str!("../data/pools/random8.pool");
pub const H4_TEN_STARTERS: &str = include_str!("../data/pools/h4_10_starters.pool");
pub const H4_THREE_STARTERS: &str = include_str!("../data/pools/h4_3_starters.pool");
pub const H4_SIX_STARTERS: &str = include_str!("../data/pools/h4_6_starters.pool");
pub const H4_NINE_STARTERS: &str = include_str!("../data/pools/h4_9_starters.pool");
pub const LIH: &str = include_str!("../data/pools/lih.pool");
pub const BEH2: &str = include_str!("../data/pools/beh2.pool");

fn load(text: &str) -> Vec<PauliString> {
    parse_pool(text).expect("bundled pool parses").0
}

pub fn random6() -> Vec<PauliString> {
    load(RANDOM6)
}

pub fn random8() -> Vec<PauliString> {
    load(RANDOM8)
}

pub fn h4_ten_starters() -> Vec<PauliString> {
    load(H4_TEN_STARTERS)
}

pub fn h4_three_starters() -> Vec<PauliString> {
    load(H4_THREE_STARTERS)
}

pub fn h4_six_starters() -> Vec<PauliString> {
    load(H4_SIX_STARTERS)
}

pub fn h4_nine_starters() -> Vec<PauliString> {
    load(H4_NINE_STARTERS)
}

pub fn lih() -> Vec<PauliString> {
    load(LIH)
}

pub fn beh2() -> Vec<PauliString> {
    load(BEH2)
}
