//! Plain-text family files.
//!
//! ```text
//! # optional comments
//! n=3
//! {}
//! 1,2
//! 1,3
//! 1,2,3
//! ```
//!
//! The header gives the ground-set size, then one set per line as ascending
//! comma-separated elements, with `{}` for the empty set. Sets are written in
//! canonical (bit-pattern) order.

use std::fmt::Write as _;

use super::{check_ground, Family, SetMask};
use crate::error::{Error, Result};

pub fn write_family(family: &Family) -> String {
    let mut out = String::new();
    writeln!(out, "n={}", family.n()).unwrap();
    for s in family.sets() {
        if s.is_empty() {
            out.push_str("{}");
        } else {
            for (i, e) in s.elements().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                write!(out, "{e}").unwrap();
            }
        }
        out.push('\n');
    }
    out
}

pub fn parse_family(text: &str) -> Result<Family> {
    let mut n: Option<u8> = None;
    let mut sets = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some(ground) = n else {
            let value = line
                .strip_prefix("n=")
                .ok_or_else(|| Error::parse(line_no, "expected header `n=<k>`"))?;
            let k: usize = value
                .trim()
                .parse()
                .map_err(|_| Error::parse(line_no, format!("bad ground-set size `{value}`")))?;
            n = Some(check_ground(k)?);
            continue;
        };
        let body = line
            .strip_prefix('{')
            .and_then(|l| l.strip_suffix('}'))
            .unwrap_or(line)
            .trim();
        let mut mask = SetMask::EMPTY;
        if !body.is_empty() {
            for tok in body.split(',') {
                let tok = tok.trim();
                let e: usize = tok
                    .parse()
                    .map_err(|_| Error::parse(line_no, format!("bad element `{tok}`")))?;
                if e == 0 || e > ground as usize {
                    return Err(Error::ElementOutOfRange {
                        element: e,
                        n: ground as usize,
                    });
                }
                if mask.contains(e) {
                    return Err(Error::parse(line_no, format!("element {e} listed twice")));
                }
                mask = mask.with(e);
            }
        }
        sets.push(mask);
    }
    let n = n.ok_or_else(|| Error::parse(0, "missing header `n=<k>`"))?;
    Family::from_masks(n as usize, sets)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn writes_canonical_order() {
        let f = Family::new(3, &[vec![1, 2, 3], vec![1, 3], vec![], vec![1, 2]]).unwrap();
        assert_eq!(write_family(&f), "n=3\n{}\n1,2\n1,3\n1,2,3\n");
    }

    #[test]
    fn parses_comments_and_braces() {
        let text = "# intro family\nn=3\n\n{}\n{1, 2}  # braces allowed\n3,1\n1,2,3\n";
        let f = parse_family(text).unwrap();
        assert_eq!(f.len(), 4);
        assert_eq!(write_family(&f), "n=3\n{}\n1,2\n1,3\n1,2,3\n");
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(parse_family("1,2\n"), Err(Error::Parse { .. })));
        assert!(matches!(
            parse_family("n=2\n1,3\n"),
            Err(Error::ElementOutOfRange { .. })
        ));
        assert!(matches!(
            parse_family("n=2\n1\n1\n"),
            Err(Error::DuplicateSet(_))
        ));
        assert!(matches!(
            parse_family("n=2\n1,x\n"),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(matches!(parse_family(""), Err(Error::Parse { .. })));
        assert!(matches!(
            parse_family("n=20\n"),
            Err(Error::GroundSetSize(20))
        ));
    }

    #[test]
    fn empty_family_round_trip() {
        let f = Family::empty(4).unwrap();
        let text = write_family(&f);
        assert_eq!(text, "n=4\n");
        assert_eq!(parse_family(&text).unwrap(), f);
    }
}
