//! Integer-program models for the four optimization problems.
//!
//! | kind | objective                         | constraints                                   |
//! |------|-----------------------------------|-----------------------------------------------|
//! | `F`  | maximize `Σ x_S`                  | union, degree cap `a`                         |
//! | `G`  | minimize `Σ_{S∋1} x_S`            | union, frequency order, `Σ x_S = m`           |
//! | `FT` | as `F`                            | as `F`, plus twin link and twin cover         |
//! | `GT` | as `G`                            | as `G`, plus twin link and twin cover         |
//!
//! The binary variable `x_S` selects set `S`; the continuous variable
//! `z_S^e ∈ [0,1]` (for `e ∉ S`) can be positive only when both `S` and
//! `S ∪ {e}` are selected. Frequency order is emitted as the adjacent chain
//! `m_i ≥ m_{i+1}`, which implies every pairwise inequality `m_i ≥ m_j`.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::family::{check_ground, Family, SetMask};

#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ModelKind {
    F,
    G,
    FT,
    GT,
}

impl ModelKind {
    pub const ALL: [ModelKind; 4] = [ModelKind::F, ModelKind::G, ModelKind::FT, ModelKind::GT];

    /// `F`/`FT` maximize the set count under a degree cap.
    pub fn maximizes(self) -> bool {
        matches!(self, ModelKind::F | ModelKind::FT)
    }

    /// `FT`/`GT` require every element to be a non-trivial twin difference.
    pub fn requires_twins(self) -> bool {
        matches!(self, ModelKind::FT | ModelKind::GT)
    }

    /// Lowercase token used on the command line and in cache files.
    pub fn token(self) -> &'static str {
        match self {
            ModelKind::F => "f",
            ModelKind::G => "g",
            ModelKind::FT => "ft",
            ModelKind::GT => "gt",
        }
    }
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            ModelKind::F => "F",
            ModelKind::G => "G",
            ModelKind::FT => "FT",
            ModelKind::GT => "GT",
        };
        f.write_str(s)
    }
}

impl FromStr for ModelKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "f" => Ok(ModelKind::F),
            "g" => Ok(ModelKind::G),
            "ft" => Ok(ModelKind::FT),
            "gt" => Ok(ModelKind::GT),
            other => Err(format!("unknown model `{other}` (expected f, g, ft or gt)")),
        }
    }
}

/// One optimization problem: a kind, a ground-set size and its parameter
/// (the degree cap `a` for `F`/`FT`, the set count `m` for `G`/`GT`).
#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ModelInstance {
    pub kind: ModelKind,
    pub n: u8,
    pub param: u32,
}

impl ModelInstance {
    pub fn new(kind: ModelKind, n: usize, param: u32) -> Result<Self> {
        let n = check_ground(n)?;
        if param == 0 {
            return Err(Error::ZeroParameter);
        }
        Ok(ModelInstance { kind, n, param })
    }

    pub fn f(n: usize, a: u32) -> Result<Self> {
        Self::new(ModelKind::F, n, a)
    }

    pub fn g(n: usize, m: u32) -> Result<Self> {
        Self::new(ModelKind::G, n, m)
    }

    pub fn ft(n: usize, a: u32) -> Result<Self> {
        Self::new(ModelKind::FT, n, a)
    }

    pub fn gt(n: usize, m: u32) -> Result<Self> {
        Self::new(ModelKind::GT, n, m)
    }

    pub fn power_set_size(&self) -> u32 {
        1u32 << self.n
    }
}

impl fmt::Display for ModelInstance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({},{})", self.kind, self.n, self.param)
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Var {
    /// `x_S`
    Set(SetMask),
    /// `z_S^e`
    Twin { set: SetMask, element: u8 },
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Sense {
    Le,
    Ge,
    Eq,
}

impl Sense {
    pub fn symbol(self) -> &'static str {
        match self {
            Sense::Le => "<=",
            Sense::Ge => ">=",
            Sense::Eq => "=",
        }
    }

    pub fn holds(self, lhs: i64, rhs: i64) -> bool {
        match self {
            Sense::Le => lhs <= rhs,
            Sense::Ge => lhs >= rhs,
            Sense::Eq => lhs == rhs,
        }
    }
}

/// A normalized linear row: every variable appears at most once.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearRow {
    pub terms: Vec<(Var, i64)>,
    pub sense: Sense,
    pub rhs: i64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Constraint {
    /// `x_left + x_right ≤ 1 + x_union`
    Union {
        left: SetMask,
        right: SetMask,
        union: SetMask,
    },
    /// `Σ_{S∋e} x_S ≤ cap`
    DegreeCap { element: usize, cap: u32 },
    /// `Σ_{S∋e} x_S ≥ Σ_{S∋e+1} x_S`
    FrequencyOrder { element: usize },
    /// `Σ x_S = count`
    Cardinality { count: u32 },
    /// `z_little^e ≤ x_target`, with `target` either `little` or `little ∪ {e}`
    TwinLink {
        element: usize,
        little: SetMask,
        target: SetMask,
    },
    /// `Σ_{S∌e, S∪{e}≠[n]} z_S^e ≥ 1`
    TwinCover { element: usize },
}

/// The full constraint system of one [`ModelInstance`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConstraintSystem {
    instance: ModelInstance,
    twin_vars: Vec<(SetMask, usize)>,
    constraints: Vec<(String, Constraint)>,
}

/// Unordered pairs `{T, U}` of distinct proper subsets of `S` with `T ∪ U = S`,
/// ordered by `S`, then `T < U`.
pub fn union_triples(n: u8) -> Vec<(SetMask, SetMask, SetMask)> {
    let full = SetMask::full(n).bits();
    let mut out = Vec::new();
    for s in 0..=full {
        let mut pairs = Vec::new();
        let mut t = s;
        loop {
            if t != s {
                let rest = s & !t;
                let mut r = t;
                loop {
                    let u = rest | r;
                    if u != s && u > t {
                        pairs.push((t, u));
                    }
                    if r == 0 {
                        break;
                    }
                    r = (r - 1) & t;
                }
            }
            if t == 0 {
                break;
            }
            t = (t - 1) & s;
        }
        pairs.sort_unstable();
        out.extend(pairs.into_iter().map(|(t, u)| {
            (
                SetMask::from_bits(t),
                SetMask::from_bits(u),
                SetMask::from_bits(s),
            )
        }));
    }
    out
}

fn all_sets(n: u8) -> impl Iterator<Item = SetMask> {
    (0..=SetMask::full(n).bits()).map(SetMask::from_bits)
}

/// Builds the constraint system for `inst`.
pub fn build(inst: &ModelInstance) -> ConstraintSystem {
    let n = inst.n;
    let full = SetMask::full(n);
    let mut constraints = Vec::new();

    for (i, (left, right, union)) in union_triples(n).into_iter().enumerate() {
        constraints.push((
            format!("u{}", i + 1),
            Constraint::Union { left, right, union },
        ));
    }
    if inst.kind.maximizes() {
        for e in 1..=n as usize {
            constraints.push((
                format!("deg{e}"),
                Constraint::DegreeCap {
                    element: e,
                    cap: inst.param,
                },
            ));
        }
    } else {
        for e in 1..n as usize {
            constraints.push((format!("ord{e}"), Constraint::FrequencyOrder { element: e }));
        }
        constraints.push((
            "card".to_string(),
            Constraint::Cardinality { count: inst.param },
        ));
    }

    let mut twin_vars = Vec::new();
    if inst.kind.requires_twins() {
        for e in 1..=n as usize {
            twin_vars.extend(all_sets(n).filter(|s| !s.contains(e)).map(|s| (s, e)));
        }
        let mut link = 0;
        for &(little, e) in &twin_vars {
            for target in [little, little.with(e)] {
                link += 1;
                constraints.push((
                    format!("tl{link}"),
                    Constraint::TwinLink {
                        element: e,
                        little,
                        target,
                    },
                ));
            }
        }
        for e in 1..=n as usize {
            constraints.push((format!("tc{e}"), Constraint::TwinCover { element: e }));
        }
    }
    debug_assert!(twin_vars.iter().all(|(s, _)| s.fits(n) && *s != full));

    ConstraintSystem {
        instance: *inst,
        twin_vars,
        constraints,
    }
}

impl ConstraintSystem {
    pub fn instance(&self) -> &ModelInstance {
        &self.instance
    }

    pub fn maximize(&self) -> bool {
        self.instance.kind.maximizes()
    }

    /// Binary set variables, by ascending bit pattern.
    pub fn set_vars(&self) -> impl Iterator<Item = SetMask> {
        all_sets(self.instance.n)
    }

    /// Continuous twin variables `(S, e)`, by element then bit pattern.
    pub fn twin_vars(&self) -> &[(SetMask, usize)] {
        &self.twin_vars
    }

    pub fn constraints(&self) -> &[(String, Constraint)] {
        &self.constraints
    }

    pub fn objective(&self) -> Vec<(Var, i64)> {
        self.set_vars()
            .filter(|s| self.maximize() || s.contains(1))
            .map(|s| (Var::Set(s), 1))
            .collect()
    }

    /// Linear form of `c` with shared terms cancelled.
    pub fn row(&self, c: &Constraint) -> LinearRow {
        let n = self.instance.n;
        let full = SetMask::full(n);
        match *c {
            Constraint::Union { left, right, union } => LinearRow {
                terms: vec![
                    (Var::Set(left), 1),
                    (Var::Set(right), 1),
                    (Var::Set(union), -1),
                ],
                sense: Sense::Le,
                rhs: 1,
            },
            Constraint::DegreeCap { element, cap } => LinearRow {
                terms: all_sets(n)
                    .filter(|s| s.contains(element))
                    .map(|s| (Var::Set(s), 1))
                    .collect(),
                sense: Sense::Le,
                rhs: cap as i64,
            },
            Constraint::FrequencyOrder { element } => {
                let next = element + 1;
                let plus = all_sets(n)
                    .filter(|s| s.contains(element) && !s.contains(next))
                    .map(|s| (Var::Set(s), 1));
                let minus = all_sets(n)
                    .filter(|s| s.contains(next) && !s.contains(element))
                    .map(|s| (Var::Set(s), -1));
                LinearRow {
                    terms: plus.chain(minus).collect(),
                    sense: Sense::Ge,
                    rhs: 0,
                }
            }
            Constraint::Cardinality { count } => LinearRow {
                terms: all_sets(n).map(|s| (Var::Set(s), 1)).collect(),
                sense: Sense::Eq,
                rhs: count as i64,
            },
            Constraint::TwinLink {
                element,
                little,
                target,
            } => LinearRow {
                terms: vec![
                    (
                        Var::Twin {
                            set: little,
                            element: element as u8,
                        },
                        1,
                    ),
                    (Var::Set(target), -1),
                ],
                sense: Sense::Le,
                rhs: 0,
            },
            Constraint::TwinCover { element } => LinearRow {
                terms: all_sets(n)
                    .filter(|s| !s.contains(element) && s.with(element) != full)
                    .map(|s| {
                        (
                            Var::Twin {
                                set: s,
                                element: element as u8,
                            },
                            1,
                        )
                    })
                    .collect(),
                sense: Sense::Ge,
                rhs: 1,
            },
        }
    }
}

/// One violated constraint in a feasibility report.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub name: String,
    pub detail: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FeasibilityReport {
    pub violations: Vec<Violation>,
}

impl FeasibilityReport {
    pub fn is_feasible(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn violated(&self, name: &str) -> bool {
        self.violations.iter().any(|v| v.name == name)
    }
}

fn check_ground_match(inst: &ModelInstance, family: &Family) -> Result<()> {
    if inst.n != family.n() {
        return Err(Error::GroundSetMismatch {
            instance: inst.n,
            family: family.n(),
        });
    }
    Ok(())
}

/// Checks the 0/1 indicator of `family` against every constraint of
/// `build(inst)`. Twin variables are set to `min(x_S, x_{S∪e})`, so a twin
/// cover row holds exactly when the element has a non-trivial twin pair.
pub fn check_feasible(inst: &ModelInstance, family: &Family) -> Result<FeasibilityReport> {
    check_ground_match(inst, family)?;
    let system = build(inst);
    let freq = family.frequencies();
    let twins = family.twin_counts();
    let mut report = FeasibilityReport::default();
    for (name, c) in system.constraints() {
        let detail = match *c {
            Constraint::Union { left, right, union } => {
                (family.contains(left) && family.contains(right) && !family.contains(union))
                    .then(|| format!("{left} and {right} present but {union} missing"))
            }
            Constraint::DegreeCap { element, cap } => (freq.of(element) > cap)
                .then(|| format!("element {element} in {} sets > {cap}", freq.of(element))),
            Constraint::FrequencyOrder { element } => (freq.of(element) < freq.of(element + 1))
                .then(|| {
                    format!(
                        "element {element} in {} sets < element {} in {}",
                        freq.of(element),
                        element + 1,
                        freq.of(element + 1)
                    )
                }),
            Constraint::Cardinality { count } => (family.len() != count as usize)
                .then(|| format!("{} sets != {count}", family.len())),
            Constraint::TwinLink { .. } => None,
            Constraint::TwinCover { element } => (twins[element - 1].nontrivial == 0)
                .then(|| format!("element {element} has no non-trivial twin pair")),
        };
        if let Some(detail) = detail {
            report.violations.push(Violation {
                name: name.clone(),
                detail,
            });
        }
    }
    Ok(report)
}

/// `m(F)` for `F`/`FT`, `m_1(F)` for `G`/`GT`.
pub fn objective_value(inst: &ModelInstance, family: &Family) -> Result<u64> {
    check_ground_match(inst, family)?;
    Ok(if inst.kind.maximizes() {
        family.len() as u64
    } else {
        family.sets().iter().filter(|s| s.contains(1)).count() as u64
    })
}
