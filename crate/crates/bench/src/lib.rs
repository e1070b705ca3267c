//! Shared fixtures for the criterion benches: representative instances at
//! the scales the engine is designed for.

use featlab::generators::{generate_random_instance, GeneratorParams, LabelMode, LatticeKind};
use featlab::instance::Instance;

/// A separable chain-lattice pool at the upper end of the random-suite
/// envelope (d = 3, n = 12).
pub fn separable_pool() -> Instance {
    let params = GeneratorParams::new(3, 12, 1234, LabelMode::Separable, LatticeKind::Chain);
    generate_random_instance(&params).expect("fixture generates")
}

/// A general-labeled pool that is typically insufficient in every
/// dimension (d = 3, n = 10).
pub fn general_pool() -> Instance {
    let params = GeneratorParams::new(
        3,
        10,
        99,
        LabelMode::General { force_both_labels: true },
        LatticeKind::Chain,
    );
    generate_random_instance(&params).expect("fixture generates")
}

/// A protocol-search fixture: chain lattice of depth 3 over 8 objects.
pub fn protocol_pool() -> Instance {
    let params = GeneratorParams::new(3, 8, 7, LabelMode::Separable, LatticeKind::Chain);
    generate_random_instance(&params).expect("fixture generates")
}
