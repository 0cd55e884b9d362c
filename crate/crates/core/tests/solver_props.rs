use proptest::prelude::*;

use frankl_core::model::{check_feasible, objective_value};
use frankl_core::solver::{exhaustive_oracle, solve, solve_with, SolveOptions};
use frankl_core::{ModelInstance, ModelKind, SearchBudget, SolveStatus};

fn instance(max_n: usize) -> impl Strategy<Value = ModelInstance> {
    (0..4usize, 1..=max_n).prop_flat_map(|(k, n)| {
        (1..=(1u32 << n) + 1)
            .prop_map(move |p| ModelInstance::new(ModelKind::ALL[k], n, p).unwrap())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn agrees_with_oracle(inst in instance(4)) {
        let fast = solve(&inst, &SearchBudget::unlimited());
        let slow = exhaustive_oracle(&inst).unwrap();
        prop_assert_eq!(fast.status, slow.status);
        prop_assert_eq!(fast.value, slow.value);
    }

    #[test]
    fn witnesses_are_sound(inst in instance(5)) {
        let out = solve(&inst, &SearchBudget::unlimited());
        prop_assert!(out.status != SolveStatus::Aborted);
        if let Some(w) = &out.witness {
            prop_assert!(check_feasible(&inst, w).unwrap().is_feasible());
            prop_assert_eq!(Some(objective_value(&inst, w).unwrap()), out.value);
        }
    }

    #[test]
    fn threads_do_not_change_values(inst in instance(5)) {
        let one = solve(&inst, &SearchBudget::unlimited());
        let many = solve_with(&inst, &SearchBudget::unlimited(), &SolveOptions { threads: 4 });
        prop_assert_eq!(one.status, many.status);
        prop_assert_eq!(one.value, many.value);
        let again = solve(&inst, &SearchBudget::unlimited());
        prop_assert_eq!(one.witness, again.witness);
    }
}
