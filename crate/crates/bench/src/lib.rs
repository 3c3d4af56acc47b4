//! Shared fixtures for the benchmark suite.

use cremona_core::conjclass::IndexSet;
use cremona_core::delpezzo::QuarticDP;
use cremona_core::field::{FieldElement, FieldKind};

/// The parameter set {3, 5} over F_101.
pub fn sample_index_set() -> IndexSet {
    let kind = FieldKind::prime(101).expect("101 is prime");
    let elems = vec![
        FieldElement::from_integer(&kind, 3),
        FieldElement::from_integer(&kind, 5),
    ];
    IndexSet::new(kind, elems).expect("3, 5 are admissible parameters")
}

/// The surface with lambda = (0, 1, 2, 3, 4) over the rationals.
pub fn sample_surface() -> QuarticDP {
    let kind = FieldKind::Rationals;
    let lambdas =
        [0i64, 1, 2, 3, 4].map(|v| FieldElement::from_integer(&kind, v));
    QuarticDP::new(lambdas).expect("0..=4 are pairwise distinct")
}
