//! Algebraic and game-theoretic invariants on random rational inputs,
//! 1000 cases each.

mod common;

use proptest::prelude::*;

use common::props;

fn holds(r: props::Check) -> Result<(), TestCaseError> {
    r.map_err(TestCaseError::fail)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn pairing_moves_multiplier_onto_test_function(seed in any::<u64>()) {
        holds(props::product_identity(seed))?;
    }

    #[test]
    fn multiplication_is_associative(seed in any::<u64>()) {
        holds(props::associativity(seed))?;
    }

    #[test]
    fn solution_is_shift_and_scale_equivariant(seed in any::<u64>()) {
        holds(props::equivariance(seed))?;
    }

    #[test]
    fn pure_gap_is_nonnegative(seed in any::<u64>()) {
        holds(props::weak_duality(seed))?;
    }

    #[test]
    fn iterated_integrals_agree(seed in any::<u64>()) {
        holds(props::order_independence(seed))?;
    }

    #[test]
    fn solution_pair_attains_value(seed in any::<u64>()) {
        holds(props::consistency(seed))?;
    }
}
