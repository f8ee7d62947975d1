//! Shared inputs for the criterion benches.

use factgraph_core::{minimal_presentation, NumericalSemigroup, Presentation};

pub const SEMIGROUPS: [&[u64]; 4] = [&[6, 9, 20], &[8, 11, 12], &[3, 5, 7], &[5, 7, 9, 11]];

pub fn with_presentation(gens: &[u64]) -> (NumericalSemigroup, Presentation) {
    let s = NumericalSemigroup::new(gens).expect("minimal generators");
    let rho = minimal_presentation(&s).expect("k >= 2");
    (s, rho)
}
