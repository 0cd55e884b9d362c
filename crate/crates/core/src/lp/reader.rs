//! Reader for the dialect written by [`super::export`]. Not a general LP parser.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::family::{Family, SetMask};
use crate::model::Sense;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LpRow {
    pub name: String,
    pub terms: Vec<(String, i64)>,
    pub sense: Sense,
    pub rhs: i64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LpModel {
    pub maximize: bool,
    pub objective: Vec<(String, i64)>,
    pub rows: Vec<LpRow>,
    /// Continuous variables with `(lower, upper)`.
    pub bounds: BTreeMap<String, (i64, i64)>,
    pub binaries: BTreeSet<String>,
}

#[derive(Copy, Clone, PartialEq, Eq)]
enum Section {
    Start,
    Objective,
    Rows,
    Bounds,
    Binary,
    End,
}

/// One logical statement: its first source line and its tokens.
struct Statement {
    line: usize,
    tokens: Vec<String>,
}

pub fn parse_lp(text: &str) -> Result<LpModel> {
    let mut model = LpModel {
        maximize: true,
        objective: Vec::new(),
        rows: Vec::new(),
        bounds: BTreeMap::new(),
        binaries: BTreeSet::new(),
    };
    let mut section = Section::Start;
    let mut pending: Option<Statement> = None;
    let mut seen_objective = false;

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        if raw.starts_with('\\') || raw.trim().is_empty() {
            continue;
        }
        if !raw.starts_with(' ') {
            if let Some(st) = pending.take() {
                finish(&mut model, section, st)?;
            }
            section = match raw.trim() {
                "Maximize" | "Minimize" if section == Section::Start => {
                    model.maximize = raw.trim() == "Maximize";
                    seen_objective = true;
                    Section::Objective
                }
                "Subject To" if section == Section::Objective => Section::Rows,
                "Bounds" if section == Section::Rows => Section::Bounds,
                "Binary" if matches!(section, Section::Rows | Section::Bounds) => Section::Binary,
                "End" if section == Section::Binary => Section::End,
                other => return Err(Error::parse(line_no, format!("unexpected `{other}`"))),
            };
            continue;
        }
        if matches!(section, Section::Start | Section::End) {
            return Err(Error::parse(line_no, "content outside a section"));
        }
        let tokens: Vec<String> = raw.split_whitespace().map(str::to_string).collect();
        let starts_named = tokens.first().is_some_and(|t| t.ends_with(':'));
        let starts_new = match section {
            Section::Objective | Section::Rows => starts_named,
            Section::Bounds => true,
            _ => false,
        };
        match pending.as_mut() {
            Some(st) if !starts_new => st.tokens.extend(tokens),
            _ => {
                if let Some(st) = pending.take() {
                    finish(&mut model, section, st)?;
                }
                pending = Some(Statement {
                    line: line_no,
                    tokens,
                });
            }
        }
    }
    if section != Section::End || !seen_objective {
        return Err(Error::parse(0, "document does not end with `End`"));
    }
    Ok(model)
}

fn finish(model: &mut LpModel, section: Section, st: Statement) -> Result<()> {
    let line = st.line;
    match section {
        Section::Objective => {
            let (name, rest) = split_name(&st)?;
            if name != "obj" {
                return Err(Error::parse(line, "objective must be named `obj`"));
            }
            model.objective = parse_terms(line, rest)?;
        }
        Section::Rows => {
            let (name, rest) = split_name(&st)?;
            if rest.len() < 2 {
                return Err(Error::parse(
                    line,
                    "row needs a sense and a right-hand side",
                ));
            }
            let (body, tail) = rest.split_at(rest.len() - 2);
            let sense = match tail[0].as_str() {
                "<=" => Sense::Le,
                ">=" => Sense::Ge,
                "=" => Sense::Eq,
                other => return Err(Error::parse(line, format!("bad sense `{other}`"))),
            };
            let rhs = parse_int(line, &tail[1])?;
            model.rows.push(LpRow {
                name: name.to_string(),
                terms: parse_terms(line, body)?,
                sense,
                rhs,
            });
        }
        Section::Bounds => {
            let t = &st.tokens;
            if t.len() != 5 || t[1] != "<=" || t[3] != "<=" {
                return Err(Error::parse(line, "expected `lo <= var <= hi`"));
            }
            let lo = parse_int(line, &t[0])?;
            let hi = parse_int(line, &t[4])?;
            model.bounds.insert(t[2].clone(), (lo, hi));
        }
        Section::Binary => model.binaries.extend(st.tokens),
        Section::Start | Section::End => unreachable!("no statements outside sections"),
    }
    Ok(())
}

fn split_name(st: &Statement) -> Result<(&str, &[String])> {
    let first = st
        .tokens
        .first()
        .ok_or_else(|| Error::parse(st.line, "empty statement"))?;
    let name = first
        .strip_suffix(':')
        .ok_or_else(|| Error::parse(st.line, "missing `name:`"))?;
    Ok((name, &st.tokens[1..]))
}

fn parse_int(line: usize, tok: &str) -> Result<i64> {
    tok.parse()
        .map_err(|_| Error::parse(line, format!("bad integer `{tok}`")))
}

/// `[sign] [coef] var` sequences, with a sign glued to the first term allowed.
fn parse_terms(line: usize, toks: &[String]) -> Result<Vec<(String, i64)>> {
    let mut terms = Vec::new();
    let mut i = 0;
    while i < toks.len() {
        let mut sign = 1;
        let mut tok = toks[i].as_str();
        match tok {
            "+" | "-" => {
                sign = if tok == "-" { -1 } else { 1 };
                i += 1;
                tok = toks
                    .get(i)
                    .map(String::as_str)
                    .ok_or_else(|| Error::parse(line, "dangling sign"))?;
            }
            _ => {
                if let Some(rest) = tok.strip_prefix('-') {
                    sign = -1;
                    tok = rest;
                }
            }
        }
        let mut coef = 1;
        if tok.starts_with(|c: char| c.is_ascii_digit()) {
            coef = parse_int(line, tok)?;
            i += 1;
            tok = toks
                .get(i)
                .map(String::as_str)
                .ok_or_else(|| Error::parse(line, "coefficient without variable"))?;
        }
        if !tok.starts_with(|c: char| c.is_ascii_alphabetic()) {
            return Err(Error::parse(line, format!("bad variable `{tok}`")));
        }
        terms.push((tok.to_string(), sign * coef));
        i += 1;
    }
    Ok(terms)
}

impl LpModel {
    fn binary_value(&self, name: &str, family: &Family) -> Option<i64> {
        if !self.binaries.contains(name) {
            return None;
        }
        let bits: u16 = name.strip_prefix("x_")?.parse().ok()?;
        Some(family.contains(SetMask::from_bits(bits)) as i64)
    }

    /// Values of the continuous variables for the 0/1 point of `family`: each
    /// is raised to its upper bound, tightened by rows `v - (binaries) <= c`.
    /// Continuous variables only ever appear positively in `>=` rows in this
    /// dialect, so this choice is feasible whenever any choice is.
    fn continuous_values(&self, family: &Family) -> BTreeMap<&str, i64> {
        let mut upper: BTreeMap<&str, i64> = self
            .bounds
            .iter()
            .map(|(k, &(_, hi))| (k.as_str(), hi))
            .collect();
        for row in &self.rows {
            if row.sense != Sense::Le {
                continue;
            }
            let mut cont = None;
            let mut fixed = 0;
            let mut simple = true;
            for (name, c) in &row.terms {
                match self.binary_value(name, family) {
                    Some(v) => fixed += c * v,
                    None if cont.is_none() && *c == 1 => cont = Some(name.as_str()),
                    None => simple = false,
                }
            }
            if let (true, Some(v)) = (simple, cont) {
                let cap = row.rhs - fixed;
                upper
                    .entry(v)
                    .and_modify(|u| *u = (*u).min(cap))
                    .or_insert(cap);
            }
        }
        upper
    }

    /// Whether the 0/1 point of `family` extends to a feasible solution.
    pub fn is_feasible(&self, family: &Family) -> bool {
        let cont = self.continuous_values(family);
        for (name, &(lo, _)) in &self.bounds {
            if cont[name.as_str()] < lo {
                return false;
            }
        }
        self.rows.iter().all(|row| {
            let lhs: i64 = row
                .terms
                .iter()
                .map(|(name, c)| {
                    let v = self
                        .binary_value(name, family)
                        .or_else(|| cont.get(name.as_str()).copied())
                        .unwrap_or(0);
                    c * v
                })
                .sum();
            row.sense.holds(lhs, row.rhs)
        })
    }

    pub fn objective_value(&self, family: &Family) -> i64 {
        self.objective
            .iter()
            .map(|(name, c)| c * self.binary_value(name, family).unwrap_or(0))
            .sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lp::export;
    use crate::model::{build, ModelInstance};

    #[test]
    fn parses_exported_document() {
        let sys = build(&ModelInstance::ft(3, 4).unwrap());
        let m = parse_lp(&export(&sys).to_text()).unwrap();
        assert!(m.maximize);
        assert_eq!(m.objective.len(), 8);
        assert_eq!(m.rows.len(), sys.constraints().len());
        assert_eq!(m.bounds.len(), 12);
        assert_eq!(m.binaries.len(), 8);
        let u1 = &m.rows[0];
        assert_eq!(u1.name, "u1");
        assert_eq!(
            u1.terms,
            vec![("x_1".into(), 1), ("x_2".into(), 1), ("x_3".into(), -1)]
        );
    }

    #[test]
    fn wrapped_rows_are_joined() {
        let sys = build(&ModelInstance::g(7, 40).unwrap());
        let m = parse_lp(&export(&sys).to_text()).unwrap();
        let card = m.rows.iter().find(|r| r.name == "card").unwrap();
        assert_eq!(card.terms.len(), 128);
        assert_eq!(card.rhs, 40);
        assert_eq!(m.binaries.len(), 128);
    }

    #[test]
    fn coefficients_and_glued_signs() {
        let text = "Minimize\n obj: -x_1 + 2 x_3\nSubject To\n r: x_1 - 3 x_2 >= -2\nBinary\n x_1 x_2 x_3\nEnd\n";
        let m = parse_lp(text).unwrap();
        assert!(!m.maximize);
        assert_eq!(m.objective, vec![("x_1".into(), -1), ("x_3".into(), 2)]);
        assert_eq!(m.rows[0].terms, vec![("x_1".into(), 1), ("x_2".into(), -3)]);
        assert_eq!(m.rows[0].rhs, -2);
    }

    #[test]
    fn rejects_malformed() {
        assert!(parse_lp("Subject To\nEnd\n").is_err());
        assert!(parse_lp("Maximize\n obj: x_1\nSubject To\n r: x_1 <=\nBinary\nEnd\n").is_err());
        assert!(parse_lp("Maximize\n obj: x_1\nSubject To\n").is_err());
        assert!(parse_lp("Maximize\n obj: x_1\nSubject To\n r: x_1 ~ 1\nBinary\nEnd\n").is_err());
    }
}
