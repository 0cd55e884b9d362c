//! LP text format for [`ConstraintSystem`]s.
//!
//! Set variables are `x_<d>` with `d` the decimal bit pattern of the set, twin
//! variables `z_<d>_e<k>`. Sections follow the usual order: objective,
//! `Subject To`, `Bounds` (twin models only), `Binary`, `End`. Long rows wrap
//! at [`MAX_LINE`] characters; continuation lines start with a space.

mod reader;

use std::fmt;

use crate::model::{ConstraintSystem, Var};

pub use reader::{parse_lp, LpModel, LpRow};

/// Tag of the variable and constraint naming scheme.
pub const NAMING: &str = "frankl-lp 1";
pub const MAX_LINE: usize = 255;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LpDocument {
    lines: Vec<String>,
    naming: &'static str,
}

impl LpDocument {
    pub fn lines(&self) -> &[String] {
        &self.lines
    }

    pub fn naming(&self) -> &str {
        self.naming
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for line in &self.lines {
            out.push_str(line);
            out.push('\n');
        }
        out
    }
}

impl fmt::Display for LpDocument {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

pub fn var_name(v: &Var) -> String {
    match v {
        Var::Set(s) => format!("x_{}", s.bits()),
        Var::Twin { set, element } => format!("z_{}_e{}", set.bits(), element),
    }
}

/// Appends `head` followed by `tokens`, wrapping before [`MAX_LINE`].
fn push_wrapped(lines: &mut Vec<String>, head: String, tokens: impl IntoIterator<Item = String>) {
    let mut line = head;
    for tok in tokens {
        if line.len() + 1 + tok.len() > MAX_LINE {
            lines.push(std::mem::take(&mut line));
            line.push(' ');
            line.push_str(&tok);
        } else {
            if !line.ends_with(' ') {
                line.push(' ');
            }
            line.push_str(&tok);
        }
    }
    lines.push(line);
}

fn term_tokens(terms: &[(Var, i64)]) -> Vec<String> {
    if terms.is_empty() {
        return vec!["0 x_0".to_string()];
    }
    terms
        .iter()
        .enumerate()
        .map(|(i, (v, c))| {
            let name = var_name(v);
            let mag = c.unsigned_abs();
            let body = if mag == 1 {
                name
            } else {
                format!("{mag} {name}")
            };
            match (i, *c < 0) {
                (0, false) => body,
                (0, true) => format!("-{body}"),
                (_, false) => format!("+ {body}"),
                (_, true) => format!("- {body}"),
            }
        })
        .collect()
}

/// Serializes `sys`. Output is byte-stable for a given system.
pub fn export(sys: &ConstraintSystem) -> LpDocument {
    let inst = sys.instance();
    let mut lines = vec![
        format!("\\ generator: {NAMING}"),
        format!("\\ model: {} n={} param={}", inst.kind, inst.n, inst.param),
    ];
    if !inst.kind.maximizes() && inst.n > 1 {
        lines.push(
            "\\ ord<e> rows have shared terms cancelled; raw form: sum_{S has e} x_S - sum_{S has e+1} x_S >= 0"
                .to_string(),
        );
    }
    for s in sys.set_vars() {
        lines.push(format!("\\ x_{} = {}", s.bits(), s));
    }

    lines.push(
        if sys.maximize() {
            "Maximize"
        } else {
            "Minimize"
        }
        .to_string(),
    );
    push_wrapped(
        &mut lines,
        " obj:".to_string(),
        term_tokens(&sys.objective()),
    );

    lines.push("Subject To".to_string());
    for (name, c) in sys.constraints() {
        let row = sys.row(c);
        let mut tokens = term_tokens(&row.terms);
        tokens.push(format!("{} {}", row.sense.symbol(), row.rhs));
        push_wrapped(&mut lines, format!(" {name}:"), tokens);
    }

    if !sys.twin_vars().is_empty() {
        lines.push("Bounds".to_string());
        for &(set, e) in sys.twin_vars() {
            let v = Var::Twin {
                set,
                element: e as u8,
            };
            lines.push(format!(" 0 <= {} <= 1", var_name(&v)));
        }
    }

    lines.push("Binary".to_string());
    push_wrapped(
        &mut lines,
        String::new(),
        sys.set_vars().map(|s| var_name(&Var::Set(s))),
    );
    lines.push("End".to_string());
    LpDocument {
        lines,
        naming: NAMING,
    }
}
