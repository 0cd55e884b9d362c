use frankl_core::lp::{export, parse_lp, MAX_LINE};
use frankl_core::model::{build, check_feasible, objective_value};
use frankl_core::{Family, ModelInstance, ModelKind, SetMask};

fn exported(kind: ModelKind, n: usize, param: u32) -> String {
    export(&build(&ModelInstance::new(kind, n, param).unwrap())).to_text()
}

#[test]
fn golden_f_2_2() {
    assert_eq!(
        exported(ModelKind::F, 2, 2),
        include_str!("golden/f_2_2.lp")
    );
}

#[test]
fn golden_g_3_5() {
    assert_eq!(
        exported(ModelKind::G, 3, 5),
        include_str!("golden/g_3_5.lp")
    );
}

#[test]
fn golden_ft_3_4() {
    assert_eq!(
        exported(ModelKind::FT, 3, 4),
        include_str!("golden/ft_3_4.lp")
    );
}

#[test]
fn golden_gt_4_9() {
    assert_eq!(
        exported(ModelKind::GT, 4, 9),
        include_str!("golden/gt_4_9.lp")
    );
}

#[test]
fn no_variable_repeats_within_a_row() {
    for kind in ModelKind::ALL {
        let model = parse_lp(&exported(kind, 4, 6)).unwrap();
        for row in &model.rows {
            let mut names: Vec<_> = row.terms.iter().map(|(v, _)| v).collect();
            names.sort();
            let len = names.len();
            names.dedup();
            assert_eq!(names.len(), len, "{kind} {}", row.name);
        }
    }
}

#[test]
fn width_cap_holds_for_large_models() {
    for kind in ModelKind::ALL {
        let text = exported(kind, 6, 20);
        assert!(text.lines().all(|l| l.len() <= MAX_LINE), "{kind}");
    }
}

/// Every 0/1 point on n <= 3 is judged alike by the parsed document and by
/// the direct feasibility check.
#[test]
fn round_trip_agrees_with_direct_check() {
    for n in 1..=3usize {
        let size = 1u32 << n;
        for kind in ModelKind::ALL {
            for param in 1..=size + 1 {
                let inst = ModelInstance::new(kind, n, param).unwrap();
                let model = parse_lp(&export(&build(&inst)).to_text()).unwrap();
                for pick in 0..(1u32 << size) {
                    let masks = (0..size)
                        .filter(|i| pick >> i & 1 == 1)
                        .map(|i| SetMask::from_bits(i as u16));
                    let family = Family::from_masks(n, masks).unwrap();
                    let direct = check_feasible(&inst, &family).unwrap().is_feasible();
                    assert_eq!(model.is_feasible(&family), direct, "{inst} {family:?}");
                    assert_eq!(
                        model.objective_value(&family) as u64,
                        objective_value(&inst, &family).unwrap()
                    );
                }
            }
        }
    }
}
