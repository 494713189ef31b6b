//! Fixtures shared by the benchmarks.

use rankin_core::automorphic::AutomorphicRep;
use rankin_core::characters::{characters_mod, DirichletCharacter};
use rankin_core::rankin_selberg::RSPair;

/// `(Delta, Delta)` with eigenvalues to `limit`.
pub fn delta_pair(limit: u64) -> RSPair {
    let d = AutomorphicRep::delta(limit).expect("delta table");
    RSPair::new(d.clone(), d)
}

/// The character mod 5 of order 4.
pub fn quartic_mod_five() -> DirichletCharacter {
    characters_mod(5)
        .expect("characters mod 5")
        .into_iter()
        .find(|c| c.order() == 4)
        .expect("order-4 character mod 5")
}
