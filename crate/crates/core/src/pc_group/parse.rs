//! Text format for pc presentations.
//!
//! ```text
//! # comment (also allowed after any line)
//! p <prime>
//! n <count>
//! pow <i> : <word>          g_i^p = word
//! comm <j> <i> : <word>     [g_j, g_i] = word, for i < j
//! ```
//!
//! Indices are 1-based. A word is `1` or a product such as `g3^2*g5` of generators in
//! increasing order. Omitted relations are trivial. The header lines come first.

use std::fmt;

use thiserror::Error;

use crate::field_linalg::Prime;

use super::{PcError, PcGroup};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PcParseError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error(transparent)]
    Invalid(#[from] PcError),
}

impl PcGroup {
    pub fn parse(src: &str) -> Result<Self, PcParseError> {
        let mut p: Option<Prime> = None;
        let mut n: Option<usize> = None;
        let mut powers = Vec::new();
        let mut comms = Vec::new();
        let mut last_line = 1;
        for (idx, raw) in src.lines().enumerate() {
            let line_no = idx + 1;
            last_line = line_no;
            let err = |message: String| PcParseError::Syntax {
                line: line_no,
                message,
            };
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (head, word) = match line.split_once(':') {
                Some((h, w)) => (h.trim(), Some(w.trim())),
                None => (line, None),
            };
            let toks: Vec<&str> = head.split_whitespace().collect();
            let index = |s: &str, n: usize| -> Result<usize, PcParseError> {
                let i: usize = s
                    .parse()
                    .map_err(|_| err(format!("bad generator index '{s}'")))?;
                if i == 0 || i > n {
                    return Err(err(format!("generator index {i} out of range 1..={n}")));
                }
                Ok(i - 1)
            };
            match (toks[0], p, n) {
                ("p", None, _) => {
                    let [_, v] = toks[..] else {
                        return Err(err("expected 'p <prime>'".into()));
                    };
                    let v: u64 = v.parse().map_err(|_| err(format!("bad prime '{v}'")))?;
                    p = Some(Prime::new(v).map_err(|e| err(e.to_string()))?);
                }
                ("n", Some(_), None) => {
                    let [_, v] = toks[..] else {
                        return Err(err("expected 'n <count>'".into()));
                    };
                    n = Some(v.parse().map_err(|_| err(format!("bad count '{v}'")))?);
                }
                ("pow", Some(pr), Some(nn)) => {
                    let [_, i] = toks[..] else {
                        return Err(err("expected 'pow <i> : <word>'".into()));
                    };
                    let i = index(i, nn)?;
                    let w = word.ok_or_else(|| err("missing ': <word>'".into()))?;
                    powers.push((i, parse_word(w, pr, nn).map_err(err)?));
                }
                ("comm", Some(pr), Some(nn)) => {
                    let [_, j, i] = toks[..] else {
                        return Err(err("expected 'comm <j> <i> : <word>'".into()));
                    };
                    let (j, i) = (index(j, nn)?, index(i, nn)?);
                    if i >= j {
                        return Err(err(format!("comm needs j > i, got {} {}", j + 1, i + 1)));
                    }
                    let w = word.ok_or_else(|| err("missing ': <word>'".into()))?;
                    comms.push((j, i, parse_word(w, pr, nn).map_err(err)?));
                }
                ("p" | "n", _, _) => return Err(err(format!("unexpected '{}' line", toks[0]))),
                (_, None, _) | (_, _, None) => {
                    return Err(err("expected header 'p <prime>' then 'n <count>'".into()))
                }
                (other, _, _) => return Err(err(format!("unknown directive '{other}'"))),
            }
        }
        let (Some(p), Some(n)) = (p, n) else {
            return Err(PcParseError::Syntax {
                line: last_line,
                message: "missing header".into(),
            });
        };
        Ok(PcGroup::new(p, n, powers, comms)?)
    }

    /// Renders the presentation in the text format; trivial relations are omitted.
    pub fn to_text(&self) -> String {
        self.to_string()
    }
}

fn parse_word(src: &str, p: Prime, n: usize) -> Result<Vec<u32>, String> {
    let mut v = vec![0u32; n];
    if src == "1" {
        return Ok(v);
    }
    let mut last: Option<usize> = None;
    for factor in src.split('*').map(str::trim) {
        let (g, e) = match factor.split_once('^') {
            Some((g, e)) => (
                g.trim(),
                e.trim()
                    .parse::<u32>()
                    .map_err(|_| format!("bad exponent in '{factor}'"))?,
            ),
            None => (factor, 1),
        };
        let i: usize = g
            .strip_prefix('g')
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| format!("bad generator '{g}'"))?;
        if i == 0 || i > n {
            return Err(format!("generator index {i} out of range 1..={n}"));
        }
        if last.is_some_and(|l| l >= i) {
            return Err(format!("generators in '{src}' must increase"));
        }
        if e == 0 || e >= p.get() {
            return Err(format!(
                "exponent {e} in '{factor}' must lie in 1..{}",
                p.get()
            ));
        }
        last = Some(i);
        v[i - 1] = e;
    }
    Ok(v)
}

fn format_word(v: &[u32]) -> String {
    let parts: Vec<String> = v
        .iter()
        .enumerate()
        .filter(|(_, &a)| a != 0)
        .map(|(i, &a)| {
            if a == 1 {
                format!("g{}", i + 1)
            } else {
                format!("g{}^{a}", i + 1)
            }
        })
        .collect();
    if parts.is_empty() {
        "1".into()
    } else {
        parts.join("*")
    }
}

impl fmt::Display for PcGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "p {}", self.p)?;
        writeln!(f, "n {}", self.n)?;
        for (i, w) in self.power.iter().enumerate() {
            if w.iter().any(|&a| a != 0) {
                writeln!(f, "pow {} : {}", i + 1, format_word(w))?;
            }
        }
        for (j, row) in self.comm.iter().enumerate() {
            for (i, w) in row.iter().enumerate() {
                if w.iter().any(|&a| a != 0) {
                    writeln!(f, "comm {} {} : {}", j + 1, i + 1, format_word(w))?;
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const D8: &str = "\
# dihedral of order 8
p 2
n 3
pow 2 : g3
comm 2 1 : g3   # rotation inverted
";

    #[test]
    fn parses_and_round_trips() {
        let g = PcGroup::parse(D8).unwrap();
        assert_eq!(g.rank(), 3);
        assert_eq!(g.power_relation(1), &[0, 0, 1]);
        assert_eq!(g.commutator_relation(1, 0), &[0, 0, 1]);
        assert_eq!(PcGroup::parse(&g.to_text()).unwrap(), g);
    }

    #[test]
    fn syntax_errors_carry_lines() {
        let line = |s: &str| match PcGroup::parse(s) {
            Err(PcParseError::Syntax { line, .. }) => line,
            other => panic!("unexpected {other:?}"),
        };
        assert_eq!(line("n 3\n"), 1);
        assert_eq!(line("p 2\nn 2\npow 3 : 1\n"), 3);
        assert_eq!(line("p 2\nn 3\ncomm 1 2 : g3\n"), 3);
        assert_eq!(line("p 3\nn 3\npow 1 : g3*g2\n"), 3);
        assert_eq!(line("p 3\nn 3\npow 1 : g2^3\n"), 3);
        assert_eq!(line("p 3\nn 3\nfoo\n"), 3);
    }

    #[test]
    fn inconsistent_input_is_reported() {
        let r = PcGroup::parse("p 2\nn 3\npow 1 : g2\ncomm 2 1 : g3\n");
        assert!(matches!(
            r,
            Err(PcParseError::Invalid(PcError::Inconsistent(_)))
        ));
        let r = PcGroup::parse("p 2\nn 2\npow 2 : g2\n");
        assert!(matches!(
            r,
            Err(PcParseError::Invalid(PcError::NotLater { .. }))
        ));
    }
}
