//! The free Lie algebra on weighted generators over F_p, truncated at a maximal weight.
//!
//! The basis consists of Lyndon words bracketed by their standard factorization.
//! Products of basis elements are rewritten into the basis using antisymmetry and the
//! Jacobi identity only; the full product table is computed once at construction.

mod expr;

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::Range;

use thiserror::Error;

use crate::field_linalg::Prime;

pub use expr::{BracketExpr, ExprParseError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FreeLieError {
    #[error("truncation weight must be at least 1")]
    ZeroTruncation,
    #[error("degree must be at least 1")]
    ZeroDegree,
    #[error("at least one generator is required")]
    NoGenerators,
    #[error("generator '{0}' has weight 0")]
    ZeroWeight(String),
    #[error("duplicate generator name '{0}'")]
    DuplicateGenerator(String),
    #[error("unknown generator '{0}'")]
    UnknownGenerator(String),
    #[error("expression '{0}' is not homogeneous")]
    Inhomogeneous(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Generator {
    pub name: String,
    pub weight: usize,
}

impl Generator {
    pub fn new(name: &str, weight: usize) -> Self {
        Generator {
            name: name.to_string(),
            weight,
        }
    }
}

/// Standard bracketing of a Lyndon word.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Bracketing {
    Letter(usize),
    Bracket(Box<Bracketing>, Box<Bracketing>),
}

impl Bracketing {
    /// Letters of the leaves, left to right.
    pub fn leaves(&self) -> Vec<usize> {
        match self {
            Bracketing::Letter(a) => vec![*a],
            Bracketing::Bracket(l, r) => {
                let mut v = l.leaves();
                v.extend(r.leaves());
                v
            }
        }
    }

    pub fn to_expr(&self, gens: &[Generator]) -> BracketExpr {
        match self {
            Bracketing::Letter(a) => BracketExpr::Gen(gens[*a].name.clone()),
            Bracketing::Bracket(l, r) => BracketExpr::bracket(l.to_expr(gens), r.to_expr(gens)),
        }
    }
}

/// A basis element of the free Lie algebra: a Lyndon word with its standard bracketing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LyndonBasisElement {
    pub word: Vec<usize>,
    pub weight: usize,
    pub bracketing: Bracketing,
}

/// A sparse element over basis indices; zero coefficients are never stored.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct LieElement {
    coeffs: BTreeMap<usize, u32>,
}

impl LieElement {
    pub fn zero() -> Self {
        LieElement::default()
    }

    pub fn basis(i: usize) -> Self {
        LieElement {
            coeffs: BTreeMap::from([(i, 1)]),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, i: usize) -> u32 {
        self.coeffs.get(&i).copied().unwrap_or(0)
    }

    pub fn terms(&self) -> impl Iterator<Item = (usize, u32)> + '_ {
        self.coeffs.iter().map(|(&i, &c)| (i, c))
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `self += k * other`.
    pub fn add_scaled(&mut self, p: Prime, k: u32, other: &LieElement) {
        if k == 0 {
            return;
        }
        for (i, c) in other.terms() {
            self.add_term(p, i, p.mul(k, c));
        }
    }

    pub fn add_term(&mut self, p: Prime, i: usize, c: u32) {
        if c == 0 {
            return;
        }
        let entry = self.coeffs.entry(i).or_insert(0);
        *entry = p.add(*entry, c);
        if *entry == 0 {
            self.coeffs.remove(&i);
        }
    }

    pub fn scaled(&self, p: Prime, k: u32) -> LieElement {
        let mut out = LieElement::zero();
        out.add_scaled(p, k, self);
        out
    }

    pub fn to_dense(&self, dim: usize) -> Vec<u32> {
        let mut v = vec![0; dim];
        for (i, c) in self.terms() {
            v[i] = c;
        }
        v
    }

    pub fn from_dense(v: &[u32]) -> Self {
        LieElement {
            coeffs: v
                .iter()
                .enumerate()
                .filter(|(_, &c)| c != 0)
                .map(|(i, &c)| (i, c))
                .collect(),
        }
    }
}

/// Result of [`FreeLieAlgebra::normalize`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Normalized {
    pub element: LieElement,
    /// Set when part of the expression had weight above the truncation and was dropped.
    pub truncated: bool,
}

/// Number of Lyndon words of length `degree` over `num_gens` letters:
/// `(1/n) * sum_{d | n} mu(d) * k^(n/d)`.
pub fn witt_dimension(num_gens: u64, degree: u32) -> Result<u64, FreeLieError> {
    if degree == 0 {
        return Err(FreeLieError::ZeroDegree);
    }
    let n = degree as u64;
    let mut total: i128 = 0;
    for d in (1..=n).filter(|d| n.is_multiple_of(*d)) {
        let mu = mobius(d);
        if mu != 0 {
            total += mu as i128 * (num_gens as i128).pow((n / d) as u32);
        }
    }
    Ok((total / n as i128) as u64)
}

fn mobius(mut n: u64) -> i32 {
    let mut sign = 1;
    let mut q = 2;
    while q * q <= n {
        if n.is_multiple_of(q) {
            n /= q;
            if n.is_multiple_of(q) {
                return 0;
            }
            sign = -sign;
        }
        q += 1;
    }
    if n > 1 {
        sign = -sign;
    }
    sign
}

/// All Lyndon words over `k` letters of length at most `n`, in lexicographic order (Duval).
fn lyndon_words(k: usize, n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k == 0 || n == 0 {
        return out;
    }
    let mut w: Vec<usize> = vec![0];
    while !w.is_empty() {
        out.push(w.clone());
        let m = w.len();
        while w.len() < n {
            w.push(w[w.len() - m]);
        }
        while w.last() == Some(&(k - 1)) {
            w.pop();
        }
        if let Some(last) = w.last_mut() {
            *last += 1;
        }
    }
    out
}

fn is_lyndon(w: &[usize]) -> bool {
    !w.is_empty() && (1..w.len()).all(|i| [&w[i..], &w[..i]].concat().as_slice() > w)
}

/// Split point of the standard factorization: the longest proper Lyndon suffix.
fn standard_split(w: &[usize]) -> Option<usize> {
    (1..w.len()).find(|&i| is_lyndon(&w[i..]))
}

fn standard_bracketing(w: &[usize]) -> Bracketing {
    match standard_split(w) {
        None => Bracketing::Letter(w[0]),
        Some(i) => Bracketing::Bracket(
            Box::new(standard_bracketing(&w[..i])),
            Box::new(standard_bracketing(&w[i..])),
        ),
    }
}

/// Per-degree Lyndon bases for the free Lie algebra on weighted generators.
///
/// Entry `w` of the result lists the basis elements of weight `w` (entry 0 is empty),
/// sorted lexicographically by word.
pub fn generate_basis(
    weights: &[usize],
    max_weight: usize,
) -> Result<Vec<Vec<LyndonBasisElement>>, FreeLieError> {
    if max_weight == 0 {
        return Err(FreeLieError::ZeroTruncation);
    }
    if weights.is_empty() {
        return Err(FreeLieError::NoGenerators);
    }
    if let Some(i) = weights.iter().position(|&w| w == 0) {
        return Err(FreeLieError::ZeroWeight(format!("#{i}")));
    }
    let mut by_weight = vec![Vec::new(); max_weight + 1];
    for word in lyndon_words(weights.len(), max_weight) {
        let weight: usize = word.iter().map(|&a| weights[a]).sum();
        if weight <= max_weight {
            by_weight[weight].push(LyndonBasisElement {
                bracketing: standard_bracketing(&word),
                word,
                weight,
            });
        }
    }
    for list in by_weight.iter_mut() {
        list.sort_by(|a, b| a.word.cmp(&b.word));
    }
    Ok(by_weight)
}

/// The free Lie algebra over F_p on weighted generators, truncated at `max_weight`.
#[derive(Clone)]
pub struct FreeLieAlgebra {
    p: Prime,
    gens: Vec<Generator>,
    max_weight: usize,
    basis: Vec<LyndonBasisElement>,
    ranges: Vec<Range<usize>>,
    index: HashMap<Vec<usize>, usize>,
    split: Vec<Option<(usize, usize)>>,
    table: HashMap<(usize, usize), LieElement>,
}

impl fmt::Debug for FreeLieAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FreeLieAlgebra")
            .field("p", &self.p)
            .field("gens", &self.gens)
            .field("max_weight", &self.max_weight)
            .field("dims", &self.dims())
            .finish()
    }
}

impl FreeLieAlgebra {
    pub fn new(p: Prime, gens: Vec<Generator>, max_weight: usize) -> Result<Self, FreeLieError> {
        if gens.is_empty() {
            return Err(FreeLieError::NoGenerators);
        }
        for (i, g) in gens.iter().enumerate() {
            if g.weight == 0 {
                return Err(FreeLieError::ZeroWeight(g.name.clone()));
            }
            if gens[..i].iter().any(|h| h.name == g.name) {
                return Err(FreeLieError::DuplicateGenerator(g.name.clone()));
            }
        }
        let weights: Vec<usize> = gens.iter().map(|g| g.weight).collect();
        let by_weight = generate_basis(&weights, max_weight)?;
        let mut basis = Vec::new();
        let mut ranges = Vec::with_capacity(max_weight + 1);
        for list in by_weight {
            let start = basis.len();
            basis.extend(list);
            ranges.push(start..basis.len());
        }
        let index: HashMap<Vec<usize>, usize> = basis
            .iter()
            .enumerate()
            .map(|(i, b)| (b.word.clone(), i))
            .collect();
        let split = basis
            .iter()
            .map(|b| standard_split(&b.word).map(|s| (index[&b.word[..s]], index[&b.word[s..]])))
            .collect();
        let mut alg = FreeLieAlgebra {
            p,
            gens,
            max_weight,
            basis,
            ranges,
            index,
            split,
            table: HashMap::new(),
        };
        alg.fill_table();
        Ok(alg)
    }

    /// Unit-weight generators named `x, y, z, ...` (or `g1, g2, ...` beyond 26).
    pub fn with_unit_weights(
        p: Prime,
        num_gens: usize,
        max_weight: usize,
    ) -> Result<Self, FreeLieError> {
        let gens = (0..num_gens)
            .map(|i| {
                let name = if num_gens <= 3 {
                    ["x", "y", "z"][i].to_string()
                } else if num_gens <= 26 {
                    ((b'a' + i as u8) as char).to_string()
                } else {
                    format!("g{}", i + 1)
                };
                Generator { name, weight: 1 }
            })
            .collect();
        Self::new(p, gens, max_weight)
    }

    fn fill_table(&mut self) {
        let n = self.basis.len();
        let mut memo = HashMap::new();
        for u in 0..n {
            for v in (u + 1)..n {
                if self.basis[u].weight + self.basis[v].weight <= self.max_weight {
                    let e = self.rewrite(u, v, &mut memo);
                    self.table.insert((u, v), e);
                }
            }
        }
    }

    /// Expresses `[b_u, b_v]` in the basis by recursive rewriting.
    fn rewrite(
        &self,
        u: usize,
        v: usize,
        memo: &mut HashMap<(usize, usize), LieElement>,
    ) -> LieElement {
        if u == v || self.basis[u].weight + self.basis[v].weight > self.max_weight {
            return LieElement::zero();
        }
        if let Some(e) = memo.get(&(u, v)) {
            return e.clone();
        }
        let p = self.p;
        let result = if self.basis[u].word > self.basis[v].word {
            self.rewrite(v, u, memo).scaled(p, p.neg(1))
        } else {
            match self.split[u] {
                Some((u1, u2)) if self.basis[u2].word < self.basis[v].word => {
                    // [[u1,u2],v] = [[u1,v],u2] + [u1,[u2,v]]
                    let mut out = LieElement::zero();
                    for (w, c) in self.rewrite(u1, v, memo).terms() {
                        out.add_scaled(p, c, &self.rewrite(w, u2, memo));
                    }
                    for (w, c) in self.rewrite(u2, v, memo).terms() {
                        out.add_scaled(p, c, &self.rewrite(u1, w, memo));
                    }
                    out
                }
                _ => {
                    // (u, v) is the standard factorization of uv.
                    let word = [&self.basis[u].word[..], &self.basis[v].word[..]].concat();
                    LieElement::basis(self.index[&word])
                }
            }
        };
        memo.insert((u, v), result.clone());
        result
    }

    pub fn prime(&self) -> Prime {
        self.p
    }

    pub fn generators(&self) -> &[Generator] {
        &self.gens
    }

    pub fn max_weight(&self) -> usize {
        self.max_weight
    }

    pub fn basis(&self) -> &[LyndonBasisElement] {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Index range of the weight-`w` basis elements (empty above the truncation).
    pub fn weight_range(&self, w: usize) -> Range<usize> {
        self.ranges.get(w).cloned().unwrap_or(0..0)
    }

    /// Dimensions of weights `1..=max_weight`.
    pub fn dims(&self) -> Vec<usize> {
        (1..=self.max_weight)
            .map(|w| self.weight_range(w).len())
            .collect()
    }

    pub fn index_of_word(&self, word: &[usize]) -> Option<usize> {
        self.index.get(word).copied()
    }

    pub fn generator_index(&self, name: &str) -> Option<usize> {
        self.gens.iter().position(|g| g.name == name)
    }

    /// Basis index of the `g`-th generator.
    pub fn generator_basis_index(&self, g: usize) -> usize {
        self.index[&vec![g]]
    }

    pub fn label(&self, i: usize) -> String {
        self.basis[i].bracketing.to_expr(&self.gens).to_string()
    }

    /// Product of two basis elements.
    pub fn bracket_basis(&self, u: usize, v: usize) -> LieElement {
        use std::cmp::Ordering;
        match u.cmp(&v) {
            Ordering::Equal => LieElement::zero(),
            Ordering::Less => self.table.get(&(u, v)).cloned().unwrap_or_default(),
            Ordering::Greater => self
                .table
                .get(&(v, u))
                .map(|e| e.scaled(self.p, self.p.neg(1)))
                .unwrap_or_default(),
        }
    }

    pub fn bracket(&self, a: &LieElement, b: &LieElement) -> LieElement {
        let mut out = LieElement::zero();
        for (u, cu) in a.terms() {
            for (v, cv) in b.terms() {
                out.add_scaled(self.p, self.p.mul(cu, cv), &self.bracket_basis(u, v));
            }
        }
        out
    }

    /// Weight of a homogeneous element (`None` for zero or mixed weights).
    pub fn weight_of(&self, e: &LieElement) -> Option<usize> {
        let mut w = None;
        for (i, _) in e.terms() {
            let wi = self.basis[i].weight;
            match w {
                None => w = Some(wi),
                Some(prev) if prev != wi => return None,
                _ => {}
            }
        }
        w
    }

    /// Coordinates of an expression in the Lyndon basis.
    pub fn normalize(&self, expr: &BracketExpr) -> Result<Normalized, FreeLieError> {
        for name in expr.names() {
            if self.generator_index(name).is_none() {
                return Err(FreeLieError::UnknownGenerator(name.to_string()));
            }
        }
        let mut truncated = false;
        let element = self.eval(expr, &mut truncated);
        Ok(Normalized { element, truncated })
    }

    fn eval(&self, expr: &BracketExpr, truncated: &mut bool) -> LieElement {
        let p = self.p;
        match expr {
            BracketExpr::Gen(name) => {
                let g = self.generator_index(name).expect("names checked");
                if self.gens[g].weight > self.max_weight {
                    *truncated = true;
                    return LieElement::zero();
                }
                LieElement::basis(self.generator_basis_index(g))
            }
            BracketExpr::Bracket(items) => {
                let wt = |e: &BracketExpr| {
                    e.homogeneous_weight(&|n| self.generator_index(n).map(|g| self.gens[g].weight))
                };
                let mut acc = self.eval(&items[0], truncated);
                let mut acc_weight = wt(&items[0]);
                for item in &items[1..] {
                    let rhs = self.eval(item, truncated);
                    acc_weight = acc_weight.zip(wt(item)).map(|(a, b)| a + b);
                    if acc_weight.is_some_and(|w| w > self.max_weight) {
                        *truncated = true;
                    }
                    acc = self.bracket(&acc, &rhs);
                }
                acc
            }
            BracketExpr::Sum(terms) => {
                let mut out = LieElement::zero();
                for (k, e) in terms {
                    let v = self.eval(e, truncated);
                    out.add_scaled(p, p.reduce(*k), &v);
                }
                out
            }
        }
    }
}
