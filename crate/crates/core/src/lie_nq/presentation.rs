//! Finitely presented graded Lie algebras and their text format.
//!
//! ```text
//! # comment (also allowed after any line)
//! p <prime> class <c>
//! gen <name> <weight>
//! rel <expr>                 relator, or  rel <expr> = <expr>
//! eval <expr>                element to report after the quotient is built
//! ```
//!
//! The header must come first; `gen` lines must precede any `rel` or `eval` line that
//! uses them. Expressions follow [`BracketExpr::parse`]. Tokens are separated by spaces.

use std::fmt;

use thiserror::Error;

use crate::field_linalg::{LinalgError, Prime};
use crate::free_lie::{BracketExpr, Generator};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {message}")]
pub struct PresentationParseError {
    pub line: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LiePresentation {
    pub prime: Prime,
    pub generators: Vec<Generator>,
    pub relators: Vec<BracketExpr>,
    pub class: usize,
    /// Elements to evaluate in the quotient; not part of the presentation proper.
    pub evaluations: Vec<BracketExpr>,
}

impl LiePresentation {
    pub fn new(
        prime: Prime,
        generators: Vec<Generator>,
        relators: Vec<BracketExpr>,
        class: usize,
    ) -> Self {
        LiePresentation {
            prime,
            generators,
            relators,
            class,
            evaluations: Vec::new(),
        }
    }

    /// Unit-weight generators with the given names.
    pub fn unit_weights(
        prime: Prime,
        names: &[&str],
        relators: Vec<BracketExpr>,
        class: usize,
    ) -> Self {
        Self::new(
            prime,
            names.iter().map(|n| Generator::new(n, 1)).collect(),
            relators,
            class,
        )
    }

    pub fn with_prime(mut self, prime: Prime) -> Self {
        self.prime = prime;
        self
    }

    pub fn parse(src: &str) -> Result<Self, PresentationParseError> {
        let mut header: Option<(Prime, usize)> = None;
        let mut generators: Vec<Generator> = Vec::new();
        let mut relators = Vec::new();
        let mut evaluations = Vec::new();
        for (idx, raw) in src.lines().enumerate() {
            let line_no = idx + 1;
            let err = |message: String| PresentationParseError {
                line: line_no,
                message,
            };
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (keyword, rest) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
            let rest = rest.trim();
            if header.is_none() && keyword != "p" {
                return Err(err("expected header 'p <prime> class <c>'".into()));
            }
            match keyword {
                "p" => {
                    if header.is_some() {
                        return Err(err("duplicate header".into()));
                    }
                    let toks: Vec<&str> = rest.split_whitespace().collect();
                    let [p, kw, c] = toks[..] else {
                        return Err(err("expected 'p <prime> class <c>'".into()));
                    };
                    if kw != "class" {
                        return Err(err(format!("expected 'class', found '{kw}'")));
                    }
                    let p: u64 = p.parse().map_err(|_| err(format!("bad prime '{p}'")))?;
                    let prime = Prime::new(p).map_err(|e: LinalgError| err(e.to_string()))?;
                    let c: usize = c.parse().map_err(|_| err(format!("bad class '{c}'")))?;
                    if c == 0 {
                        return Err(err("class must be at least 1".into()));
                    }
                    header = Some((prime, c));
                }
                "gen" => {
                    let toks: Vec<&str> = rest.split_whitespace().collect();
                    let [name, w] = toks[..] else {
                        return Err(err("expected 'gen <name> <weight>'".into()));
                    };
                    let valid = name
                        .chars()
                        .next()
                        .is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
                        && name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_');
                    if !valid {
                        return Err(err(format!("bad generator name '{name}'")));
                    }
                    if generators.iter().any(|g| g.name == name) {
                        return Err(err(format!("duplicate generator '{name}'")));
                    }
                    let w: usize = w.parse().map_err(|_| err(format!("bad weight '{w}'")))?;
                    if w == 0 {
                        return Err(err("weight must be at least 1".into()));
                    }
                    generators.push(Generator::new(name, w));
                }
                "rel" | "eval" => {
                    let expr = if keyword == "rel" {
                        parse_relation(rest)
                    } else {
                        BracketExpr::parse(rest)
                    }
                    .map_err(|e| err(e.to_string()))?;
                    if let Some(unknown) = expr
                        .names()
                        .into_iter()
                        .find(|n| !generators.iter().any(|g| g.name == *n))
                    {
                        return Err(err(format!("unknown generator '{unknown}'")));
                    }
                    if keyword == "rel" {
                        relators.push(expr);
                    } else {
                        evaluations.push(expr);
                    }
                }
                other => return Err(err(format!("unknown directive '{other}'"))),
            }
        }
        let Some((prime, class)) = header else {
            return Err(PresentationParseError {
                line: 1,
                message: "missing header".into(),
            });
        };
        if generators.is_empty() {
            return Err(PresentationParseError {
                line: src.lines().count().max(1),
                message: "no generators declared".into(),
            });
        }
        Ok(LiePresentation {
            prime,
            generators,
            relators,
            class,
            evaluations,
        })
    }
}

fn parse_relation(src: &str) -> Result<BracketExpr, crate::free_lie::ExprParseError> {
    match src.split_once('=') {
        None => BracketExpr::parse(src),
        Some((lhs, rhs)) => {
            let l = BracketExpr::parse(lhs)?;
            let r = BracketExpr::parse(rhs).map_err(|mut e| {
                e.column += lhs.len() + 1;
                e
            })?;
            Ok(l.minus(r))
        }
    }
}

impl fmt::Display for LiePresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "p {} class {}", self.prime, self.class)?;
        for g in &self.generators {
            writeln!(f, "gen {} {}", g.name, g.weight)?;
        }
        for r in &self.relators {
            writeln!(f, "rel {r}")?;
        }
        for e in &self.evaluations {
            writeln!(f, "eval {e}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const SAMPLE: &str = "\
# three generators
p 3 class 4
gen x 1
gen y 1
gen z 1
rel [y,x,x]
rel [z,y,x] = 2[x,y,z]   # trailing comment
eval [[x,y],[x,z]]
";

    #[test]
    fn parses_sample() {
        let pres = LiePresentation::parse(SAMPLE).unwrap();
        assert_eq!(pres.prime.get(), 3);
        assert_eq!(pres.class, 4);
        assert_eq!(pres.generators.len(), 3);
        assert_eq!(pres.relators.len(), 2);
        assert_eq!(pres.relators[1].to_string(), "[z,y,x]-2*[x,y,z]");
        assert_eq!(pres.evaluations.len(), 1);
        let again = LiePresentation::parse(&pres.to_string()).unwrap();
        assert_eq!(again, pres);
    }

    #[test]
    fn errors_carry_line_numbers() {
        let bad = "p 3 class 4\ngen x 1\nrel [x,q]\n";
        assert_eq!(LiePresentation::parse(bad).unwrap_err().line, 3);
        let bad = "p 4 class 4\n";
        assert_eq!(LiePresentation::parse(bad).unwrap_err().line, 1);
        let bad = "gen x 1\n";
        assert_eq!(LiePresentation::parse(bad).unwrap_err().line, 1);
        let bad = "p 5 class 3\ngen x 1\ngen x 1\n";
        assert_eq!(LiePresentation::parse(bad).unwrap_err().line, 3);
        let bad = "p 5 class 3\ngen x 1\nrel [x,x\n";
        assert_eq!(LiePresentation::parse(bad).unwrap_err().line, 3);
        let bad = "p 5 class 3\ngen x 1\nfoo bar\n";
        assert_eq!(LiePresentation::parse(bad).unwrap_err().line, 3);
    }
}
