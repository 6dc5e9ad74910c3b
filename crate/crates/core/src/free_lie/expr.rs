//! Bracket expressions and their text syntax.
//!
//! ```text
//! expr    := ['+' | '-'] term (('+' | '-') term)*
//! term    := [INT ['*']] atom
//! atom    := NAME | '[' expr ',' expr (',' expr)* ']' | '(' expr ')'
//! NAME    := [A-Za-z_][A-Za-z0-9_]*
//! ```
//!
//! Brackets are left-normed: `[a,b,c]` is `[[a,b],c]`. Whitespace is ignored.

use std::fmt;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("column {column}: {message}")]
pub struct ExprParseError {
    pub column: usize,
    pub message: String,
}

/// A Lie expression over named generators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BracketExpr {
    Gen(String),
    /// Left-normed bracket of two or more entries.
    Bracket(Vec<BracketExpr>),
    /// Integer linear combination.
    Sum(Vec<(i64, BracketExpr)>),
}

impl BracketExpr {
    pub fn gen(name: &str) -> Self {
        BracketExpr::Gen(name.to_string())
    }

    /// Left-normed bracket of generator names, e.g. `left_normed(&["y","x","x"])`.
    pub fn left_normed(names: &[&str]) -> Self {
        assert!(names.len() >= 2, "a bracket needs two entries");
        BracketExpr::Bracket(names.iter().map(|n| Self::gen(n)).collect())
    }

    pub fn bracket(a: BracketExpr, b: BracketExpr) -> Self {
        BracketExpr::Bracket(vec![a, b])
    }

    pub fn scaled(self, k: i64) -> Self {
        BracketExpr::Sum(
            self.into_terms()
                .into_iter()
                .map(|(c, e)| (k * c, e))
                .collect(),
        )
    }

    pub fn minus(self, other: BracketExpr) -> Self {
        let mut terms = self.into_terms();
        terms.extend(other.into_terms().into_iter().map(|(c, e)| (-c, e)));
        BracketExpr::Sum(terms)
    }

    fn into_terms(self) -> Vec<(i64, BracketExpr)> {
        match self {
            BracketExpr::Sum(terms) => terms,
            e => vec![(1, e)],
        }
    }

    /// Every generator name in the expression, in order of appearance.
    pub fn names(&self) -> Vec<&str> {
        let mut out = Vec::new();
        self.collect_names(&mut out);
        out
    }

    fn collect_names<'a>(&'a self, out: &mut Vec<&'a str>) {
        match self {
            BracketExpr::Gen(n) => out.push(n),
            BracketExpr::Bracket(items) => items.iter().for_each(|e| e.collect_names(out)),
            BracketExpr::Sum(terms) => terms.iter().for_each(|(_, e)| e.collect_names(out)),
        }
    }

    /// Degree of a homogeneous expression under `weight_of`; `None` if some sum mixes degrees
    /// or a name is unknown.
    pub fn homogeneous_weight(&self, weight_of: &dyn Fn(&str) -> Option<usize>) -> Option<usize> {
        match self {
            BracketExpr::Gen(n) => weight_of(n),
            BracketExpr::Bracket(items) => items
                .iter()
                .map(|e| e.homogeneous_weight(weight_of))
                .sum::<Option<usize>>(),
            BracketExpr::Sum(terms) => {
                let mut w = None;
                for (_, e) in terms {
                    let we = e.homogeneous_weight(weight_of)?;
                    match w {
                        None => w = Some(we),
                        Some(prev) if prev != we => return None,
                        _ => {}
                    }
                }
                w
            }
        }
    }

    pub fn parse(src: &str) -> Result<Self, ExprParseError> {
        let mut p = Parser {
            chars: src
                .char_indices()
                .filter(|(_, c)| !c.is_whitespace())
                .collect(),
            pos: 0,
            src_len: src.len(),
        };
        let e = p.expr()?;
        if p.pos < p.chars.len() {
            return Err(p.error("unexpected trailing input"));
        }
        Ok(e)
    }
}

impl fmt::Display for BracketExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BracketExpr::Gen(n) => write!(f, "{n}"),
            BracketExpr::Bracket(items) => {
                write!(f, "[")?;
                for (i, e) in items.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{e}")?;
                }
                write!(f, "]")
            }
            BracketExpr::Sum(terms) => {
                for (i, (k, e)) in terms.iter().enumerate() {
                    let needs_parens = matches!(e, BracketExpr::Sum(_));
                    let (sign, mag) = if *k < 0 { ("-", -k) } else { ("+", *k) };
                    if i > 0 || sign == "-" {
                        write!(f, "{sign}")?;
                    }
                    if mag != 1 {
                        write!(f, "{mag}*")?;
                    }
                    if needs_parens {
                        write!(f, "({e})")?;
                    } else {
                        write!(f, "{e}")?;
                    }
                }
                Ok(())
            }
        }
    }
}

struct Parser {
    chars: Vec<(usize, char)>,
    pos: usize,
    src_len: usize,
}

impl Parser {
    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).map(|&(_, c)| c)
    }

    fn column(&self) -> usize {
        self.chars
            .get(self.pos)
            .map(|&(i, _)| i + 1)
            .unwrap_or(self.src_len + 1)
    }

    fn error(&self, msg: &str) -> ExprParseError {
        ExprParseError {
            column: self.column(),
            message: msg.to_string(),
        }
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<(), ExprParseError> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.error(&format!("expected '{c}'")))
        }
    }

    fn expr(&mut self) -> Result<BracketExpr, ExprParseError> {
        let mut terms = Vec::new();
        let mut sign = if self.eat('-') {
            -1
        } else {
            self.eat('+');
            1
        };
        loop {
            let (k, atom) = self.term()?;
            terms.push((sign * k, atom));
            if self.eat('+') {
                sign = 1;
            } else if self.eat('-') {
                sign = -1;
            } else {
                break;
            }
        }
        if terms.len() == 1 && terms[0].0 == 1 {
            return Ok(terms.pop().unwrap().1);
        }
        Ok(BracketExpr::Sum(terms))
    }

    fn term(&mut self) -> Result<(i64, BracketExpr), ExprParseError> {
        let mut k = 1i64;
        if self.peek().is_some_and(|c| c.is_ascii_digit()) {
            let start = self.pos;
            let mut v: i64 = 0;
            while let Some(d) = self.peek().and_then(|c| c.to_digit(10)) {
                v = v
                    .checked_mul(10)
                    .and_then(|v| v.checked_add(d as i64))
                    .ok_or_else(|| self.error("integer too large"))?;
                self.pos += 1;
            }
            debug_assert!(self.pos > start);
            k = v;
            self.eat('*');
        }
        Ok((k, self.atom()?))
    }

    fn atom(&mut self) -> Result<BracketExpr, ExprParseError> {
        match self.peek() {
            Some('[') => {
                self.pos += 1;
                let mut items = vec![self.expr()?];
                while self.eat(',') {
                    items.push(self.expr()?);
                }
                self.expect(']')?;
                if items.len() < 2 {
                    return Err(self.error("a bracket needs at least two entries"));
                }
                Ok(BracketExpr::Bracket(items))
            }
            Some('(') => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(')')?;
                Ok(e)
            }
            Some(c) if c.is_ascii_alphabetic() || c == '_' => {
                let mut name = String::new();
                while let Some(c) = self
                    .peek()
                    .filter(|c| c.is_ascii_alphanumeric() || *c == '_')
                {
                    name.push(c);
                    self.pos += 1;
                }
                Ok(BracketExpr::Gen(name))
            }
            Some(c) => Err(self.error(&format!("unexpected '{c}'"))),
            None => Err(self.error("unexpected end of expression")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_left_normed_and_nested() {
        let e = BracketExpr::parse("[y, x, x]").unwrap();
        assert_eq!(e, BracketExpr::left_normed(&["y", "x", "x"]));
        let e = BracketExpr::parse("[[x,y],[x,z]]").unwrap();
        assert_eq!(
            e,
            BracketExpr::bracket(
                BracketExpr::left_normed(&["x", "y"]),
                BracketExpr::left_normed(&["x", "z"])
            )
        );
    }

    #[test]
    fn parses_combinations() {
        let e = BracketExpr::parse("[z,y,x] - 2[x,y,z]").unwrap();
        assert_eq!(
            e,
            BracketExpr::Sum(vec![
                (1, BracketExpr::left_normed(&["z", "y", "x"])),
                (-2, BracketExpr::left_normed(&["x", "y", "z"])),
            ])
        );
        assert_eq!(e.to_string(), "[z,y,x]-2*[x,y,z]");
        assert_eq!(BracketExpr::parse(&e.to_string()).unwrap(), e);
        let e = BracketExpr::parse("-3*[a,b]").unwrap();
        assert_eq!(
            e,
            BracketExpr::Sum(vec![(-3, BracketExpr::left_normed(&["a", "b"]))])
        );
    }

    #[test]
    fn reports_column() {
        let err = BracketExpr::parse("[x,y").unwrap_err();
        assert_eq!(err.column, 5);
        assert!(BracketExpr::parse("[x]").is_err());
        assert!(BracketExpr::parse("[x,y]]").is_err());
        assert!(BracketExpr::parse("").is_err());
    }

    #[test]
    fn homogeneity() {
        let w = |n: &str| match n {
            "x" | "y" => Some(1),
            "z" => Some(2),
            _ => None,
        };
        assert_eq!(
            BracketExpr::parse("[x,y,x]")
                .unwrap()
                .homogeneous_weight(&w),
            Some(3)
        );
        assert_eq!(
            BracketExpr::parse("[x,y]+z")
                .unwrap()
                .homogeneous_weight(&w),
            Some(2)
        );
        assert_eq!(
            BracketExpr::parse("[x,y]+x")
                .unwrap()
                .homogeneous_weight(&w),
            None
        );
        assert_eq!(
            BracketExpr::parse("[x,q]").unwrap().homogeneous_weight(&w),
            None
        );
    }
}
