use proptest::prelude::*;

use frankl_core::{Family, SetMask};

fn family(max_n: u8) -> impl Strategy<Value = Family> {
    (1..=max_n).prop_flat_map(|n| {
        let full = SetMask::full(n).bits();
        prop::collection::btree_set(0..=full, 0..=(full as usize + 1).min(20)).prop_map(move |s| {
            Family::from_masks(n as usize, s.into_iter().map(SetMask::from_bits)).unwrap()
        })
    })
}

fn closed_family(max_n: u8) -> impl Strategy<Value = Family> {
    family(max_n).prop_map(|f| f.union_closure())
}

fn subset_of(small: &Family, big: &Family) -> bool {
    small.sets().iter().all(|&s| big.contains(s))
}

proptest! {
    #[test]
    fn construction_is_order_insensitive(f in family(5), seed in any::<u64>()) {
        let mut masks = f.sets().to_vec();
        let len = masks.len();
        if len > 1 {
            masks.rotate_left((seed % len as u64) as usize);
            masks.swap(0, len - 1);
        }
        let g = Family::from_masks(f.n() as usize, masks).unwrap();
        prop_assert_eq!(&g, &f);
        prop_assert_eq!(format!("{g:?}"), format!("{f:?}"));
    }

    #[test]
    fn closure_laws(f in family(5), extra in any::<u16>()) {
        let cl = f.union_closure();
        prop_assert!(cl.is_union_closed());
        prop_assert!(subset_of(&f, &cl));
        prop_assert_eq!(cl.union_closure(), cl.clone());

        let bigger_mask = SetMask::from_bits(extra & SetMask::full(f.n()).bits());
        let mut masks = f.sets().to_vec();
        if !f.contains(bigger_mask) {
            masks.push(bigger_mask);
        }
        let g = Family::from_masks(f.n() as usize, masks).unwrap();
        prop_assert!(subset_of(&cl, &g.union_closure()));
    }

    #[test]
    fn degree_and_frequency_sums(f in family(6)) {
        let freq = f.frequencies();
        prop_assert_eq!(f.degree(), freq.max());
        let total: u32 = freq.counts().iter().sum();
        let sizes: u32 = f.sets().iter().map(|s| s.len()).sum();
        prop_assert_eq!(total, sizes);
        prop_assert!(freq.counts().iter().all(|&c| c as usize <= f.len()));
    }

    #[test]
    fn clone_then_delete(f in closed_family(5), pick in any::<usize>()) {
        let e = pick % f.n() as usize + 1;
        let c = f.clone_element(e).unwrap();
        prop_assert_eq!(c.len(), f.len());
        prop_assert_eq!(c.degree(), f.degree());
        prop_assert!(c.is_union_closed());
        prop_assert_eq!(c.delete_element(f.n() as usize + 1).unwrap(), f);
    }

    #[test]
    fn grow_and_shrink_keep_closedness(f in closed_family(5)) {
        if f.len() < 1usize << f.n() {
            let g = f.add_largest_missing_set().unwrap();
            prop_assert!(g.is_union_closed());
            prop_assert_eq!(g.len(), f.len() + 1);
            let (a, b) = (f.frequencies(), g.frequencies());
            for e in 1..=f.n() as usize {
                prop_assert!(b.of(e) <= a.of(e) + 1);
            }
        }
        if !f.is_empty() {
            let g = f.remove_smallest_set().unwrap();
            prop_assert!(g.is_union_closed());
            prop_assert_eq!(g.len() + 1, f.len());
        }
    }

    #[test]
    fn separating_chain(f in closed_family(6)) {
        let n = f.n() as usize;
        let full = SetMask::full(f.n());
        let separated = (1..=n).all(|i| {
            (1..=n).all(|j| i == j || f.sets().iter().any(|s| s.contains(i) && !s.contains(j)))
        });
        if separated && f.contains(full) {
            let chain = f.falgas_ravry_sets().expect("chain exists");
            prop_assert_eq!(chain.len(), n);
            let mut sorted = chain.clone();
            sorted.sort_unstable();
            sorted.dedup();
            prop_assert_eq!(sorted.len(), n);
            let top = f.frequencies().order_by_frequency()[0];
            prop_assert!(chain.iter().all(|s| s.contains(top) && f.contains(*s)));
            prop_assert!(f.degree() as usize >= n);
        }
    }

    #[test]
    fn permutation_preserves_shape(f in family(5), seed in any::<u64>()) {
        let n = f.n() as usize;
        let mut perm: Vec<usize> = (1..=n).collect();
        let mut s = seed;
        for i in (1..n).rev() {
            perm.swap(i, (s % (i as u64 + 1)) as usize);
            s /= i as u64 + 1;
        }
        let p = f.permute(&perm);
        prop_assert_eq!(p.len(), f.len());
        prop_assert_eq!(p.degree(), f.degree());
        prop_assert_eq!(p.is_union_closed(), f.is_union_closed());
        let r = f.relabel_by_frequency();
        let counts = r.frequencies();
        prop_assert!(counts.counts().windows(2).all(|w| w[0] >= w[1]));
    }
}

/// Every union-closed family on up to three elements.
fn all_closed(n: u8) -> Vec<Family> {
    let size = 1u32 << n;
    (0u32..1 << size)
        .map(|bits| {
            Family::from_masks(
                n as usize,
                (0..size)
                    .filter(|s| bits >> s & 1 == 1)
                    .map(|s| SetMask::from_bits(s as u16)),
            )
            .unwrap()
        })
        .filter(Family::is_union_closed)
        .collect()
}

#[test]
fn twin_pairs_match_brute_force() {
    for n in 1..=3u8 {
        let full = SetMask::full(n);
        for f in all_closed(n) {
            let counts = f.twin_counts();
            for e in 1..=n as usize {
                let pairs = f.twin_pairs(e).unwrap();
                let mut expected = Vec::new();
                for &s in f.sets() {
                    if !s.contains(e) && f.contains(s.with(e)) {
                        expected.push((s, s.with(e) == full));
                    }
                }
                let got: Vec<_> = pairs.iter().map(|p| (p.little, p.trivial)).collect();
                assert_eq!(got, expected, "{f:?} e={e}");
                assert!(pairs
                    .iter()
                    .all(|p| p.big == p.little.with(e) && p.diff == e));
                assert_eq!(counts[e - 1].total as usize, expected.len());
                assert_eq!(
                    counts[e - 1].nontrivial as usize,
                    expected.iter().filter(|(_, t)| !t).count()
                );
            }
        }
    }
}
