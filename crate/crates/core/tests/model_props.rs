use proptest::prelude::*;

use frankl_core::model::{build, check_feasible, Constraint};
use frankl_core::{Family, ModelInstance, ModelKind, SetMask};

fn family_from_bits(n: u8, bits: u64) -> Family {
    let size = 1u32 << n;
    Family::from_masks(
        n as usize,
        (0..size)
            .filter(|s| bits >> s & 1 == 1)
            .map(|s| SetMask::from_bits(s as u16)),
    )
    .unwrap()
}

fn union_rows_hold(n: u8, f: &Family) -> bool {
    let inst = ModelInstance::f(n as usize, 1 << n).unwrap();
    let report = check_feasible(&inst, f).unwrap();
    report.is_feasible()
}

#[test]
fn union_rows_characterize_closedness_exhaustively() {
    for n in 1..=3u8 {
        for bits in 0u64..1 << (1u32 << n) {
            let f = family_from_bits(n, bits);
            assert_eq!(union_rows_hold(n, &f), f.is_union_closed(), "{f:?}");
        }
    }
}

proptest! {
    #[test]
    fn union_rows_characterize_closedness_n4(bits in any::<u16>(), close in any::<bool>()) {
        let mut f = family_from_bits(4, bits as u64);
        if close {
            f = f.union_closure();
        }
        prop_assert_eq!(union_rows_hold(4, &f), f.is_union_closed());
    }

    #[test]
    fn adjacent_order_implies_all_pairs(n in 2u8..=5, bits in any::<u32>()) {
        let f = family_from_bits(n, bits as u64 & ((1u64 << (1u32 << n)) - 1));
        let m = f.sets().iter().filter(|s| s.contains(1)).count() as u32;
        let inst = ModelInstance::g(n as usize, f.len().max(1) as u32).unwrap();
        let report = check_feasible(&inst, &f).unwrap();
        let chain_ok = !report.violations.iter().any(|v| v.name.starts_with("ord"));
        let freq = f.frequencies();
        let pairwise = (1..=n as usize)
            .all(|i| (i..=n as usize).all(|j| freq.of(i) >= freq.of(j)));
        prop_assert_eq!(chain_ok, pairwise);
        prop_assert_eq!(freq.of(1), m);
    }

    #[test]
    fn twin_cover_matches_family_count(n in 2u8..=4, bits in any::<u16>()) {
        let f = family_from_bits(n, bits as u64 & ((1u64 << (1u32 << n)) - 1)).union_closure();
        let inst = ModelInstance::ft(n as usize, 1 << n).unwrap();
        let report = check_feasible(&inst, &f).unwrap();
        let cover_ok = !report.violations.iter().any(|v| v.name.starts_with("tc"));
        prop_assert_eq!(cover_ok, f.min_nontrivial_twin_count() >= 1);
    }
}

#[test]
fn frequency_rows_are_an_adjacent_chain() {
    for n in 1..=6usize {
        let sys = build(&ModelInstance::g(n, 3).unwrap());
        let chain: Vec<usize> = sys
            .constraints()
            .iter()
            .filter_map(|(_, c)| match c {
                Constraint::FrequencyOrder { element } => Some(*element),
                _ => None,
            })
            .collect();
        assert_eq!(chain, (1..n).collect::<Vec<_>>());
    }
}

#[test]
fn build_is_deterministic() {
    for kind in ModelKind::ALL {
        let inst = ModelInstance::new(kind, 4, 7).unwrap();
        let a = build(&inst);
        let b = build(&inst);
        assert_eq!(a, b);
        assert_eq!(format!("{a:?}"), format!("{b:?}"));
    }
}
