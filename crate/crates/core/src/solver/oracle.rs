//! Brute-force reference solver: every subfamily of the power set is built as
//! a [`Family`] and judged through the family-level queries alone.

use std::time::Instant;

use super::{SearchStats, SolveOutcome, SolveStatus};
use crate::error::{Error, Result};
use crate::family::{Family, SetMask};
use crate::model::{ModelInstance, ModelKind};

pub const ORACLE_MAX_N: u8 = 4;

/// Exact optimum by enumeration of all `2^(2^n)` subfamilies. `n <= 4` only.
pub fn exhaustive_oracle(inst: &ModelInstance) -> Result<SolveOutcome> {
    if inst.n > ORACLE_MAX_N {
        return Err(Error::OracleTooLarge(inst.n));
    }
    let start = Instant::now();
    let n = inst.n as usize;
    let size = 1u32 << n;
    let mut best: Option<(u64, Family)> = None;
    let mut visited = 0u64;
    for pick in 0..(1u64 << size) {
        visited += 1;
        let masks = (0..size)
            .filter(|i| pick >> i & 1 == 1)
            .map(|i| SetMask::from_bits(i as u16));
        let family = Family::from_masks(n, masks)?;
        if !family.is_union_closed() {
            continue;
        }
        if inst.kind.requires_twins() && family.min_nontrivial_twin_count() == 0 {
            continue;
        }
        let degree = family.degree() as u64;
        let m = family.len() as u64;
        let value = match inst.kind {
            ModelKind::F | ModelKind::FT => {
                if degree > inst.param as u64 {
                    continue;
                }
                m
            }
            ModelKind::G | ModelKind::GT => {
                if m != inst.param as u64 {
                    continue;
                }
                degree
            }
        };
        let better = match &best {
            None => true,
            Some((b, _)) if inst.kind.maximizes() => value > *b,
            Some((b, _)) => value < *b,
        };
        if better {
            best = Some((value, family));
        }
    }
    let stats = SearchStats {
        nodes: visited,
        propagations: 0,
        elapsed: start.elapsed(),
    };
    Ok(match best {
        Some((value, family)) => SolveOutcome {
            instance: *inst,
            status: SolveStatus::Optimal,
            value: Some(value),
            witness: Some(if inst.kind.maximizes() {
                family
            } else {
                family.relabel_by_frequency()
            }),
            incumbent: None,
            stats,
        },
        None => SolveOutcome {
            instance: *inst,
            status: SolveStatus::Infeasible,
            value: None,
            witness: None,
            incumbent: None,
            stats,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn oracle_examples() {
        let v = |i: ModelInstance| exhaustive_oracle(&i).unwrap().value;
        assert_eq!(v(ModelInstance::f(3, 4).unwrap()), Some(8));
        assert_eq!(v(ModelInstance::g(3, 6).unwrap()), Some(4));
        assert_eq!(v(ModelInstance::ft(4, 6).unwrap()), Some(10));
    }

    #[test]
    fn oracle_rejects_large_n() {
        assert!(matches!(
            exhaustive_oracle(&ModelInstance::f(5, 3).unwrap()),
            Err(Error::OracleTooLarge(5))
        ));
    }
}
