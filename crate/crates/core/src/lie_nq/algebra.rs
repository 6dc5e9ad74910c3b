use std::collections::BTreeMap;
use std::ops::Range;

use serde::Serialize;
use thiserror::Error;

use crate::field_linalg::{axpy, is_zero_vec, Prime, Subspace};
use crate::free_lie::BracketExpr;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StructureError {
    #[error("basis weights must be positive and sorted")]
    UnsortedWeights,
    #[error("label count {labels} does not match weight count {weights}")]
    LabelCount { labels: usize, weights: usize },
    #[error("product table has {got} entries, expected {expected}")]
    TableSize { expected: usize, got: usize },
    #[error("[{left}, {right}] leaves weight {expected}")]
    Grading {
        left: String,
        right: String,
        expected: usize,
    },
    #[error("antisymmetry fails for [{left}, {right}]")]
    Antisymmetry { left: String, right: String },
    #[error("Jacobi identity fails for ({a}, {b}, {c})")]
    Jacobi { a: String, b: String, c: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("unknown name '{0}'")]
    UnknownName(String),
}

/// A positively graded Lie algebra over F_p with explicit structure constants.
///
/// Basis elements are sorted by weight. Products whose weight exceeds `max_weight` are zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradedLieAlgebra {
    p: Prime,
    max_weight: usize,
    labels: Vec<String>,
    weights: Vec<usize>,
    table: Vec<Vec<(usize, u32)>>,
}

impl GradedLieAlgebra {
    /// Builds an algebra from a sparse product table indexed by `i * dim + j`.
    ///
    /// Checks the table shape and that every product lands in the right weight;
    /// antisymmetry and Jacobi are checked separately by [`GradedLieAlgebra::audit`].
    pub fn from_table(
        p: Prime,
        max_weight: usize,
        labels: Vec<String>,
        weights: Vec<usize>,
        table: Vec<Vec<(usize, u32)>>,
    ) -> Result<Self, StructureError> {
        if labels.len() != weights.len() {
            return Err(StructureError::LabelCount {
                labels: labels.len(),
                weights: weights.len(),
            });
        }
        if weights.iter().any(|&w| w == 0 || w > max_weight)
            || weights.windows(2).any(|w| w[0] > w[1])
        {
            return Err(StructureError::UnsortedWeights);
        }
        let n = weights.len();
        if table.len() != n * n {
            return Err(StructureError::TableSize {
                expected: n * n,
                got: table.len(),
            });
        }
        let alg = GradedLieAlgebra {
            p,
            max_weight,
            labels,
            weights,
            table: table
                .into_iter()
                .map(|mut entry| {
                    entry.retain(|&(_, c)| c % p.get() != 0);
                    entry.sort_unstable();
                    entry
                })
                .collect(),
        };
        for i in 0..n {
            for j in 0..n {
                let w = alg.weights[i] + alg.weights[j];
                if alg.table[i * n + j]
                    .iter()
                    .any(|&(k, _)| k >= n || alg.weights[k] != w)
                {
                    return Err(StructureError::Grading {
                        left: alg.labels[i].clone(),
                        right: alg.labels[j].clone(),
                        expected: w,
                    });
                }
            }
        }
        Ok(alg)
    }

    /// Builds an algebra from a dense product function on basis indices.
    pub fn from_fn(
        p: Prime,
        max_weight: usize,
        labels: Vec<String>,
        weights: Vec<usize>,
        mut product: impl FnMut(usize, usize) -> Vec<u32>,
    ) -> Result<Self, StructureError> {
        let n = weights.len();
        let mut table = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let v = product(i, j);
                table.push(
                    v.iter()
                        .enumerate()
                        .filter(|(_, &c)| c != 0)
                        .map(|(k, &c)| (k, c))
                        .collect(),
                );
            }
        }
        Self::from_table(p, max_weight, labels, weights, table)
    }

    pub fn prime(&self) -> Prime {
        self.p
    }

    pub fn max_weight(&self) -> usize {
        self.max_weight
    }

    pub fn dim(&self) -> usize {
        self.weights.len()
    }

    pub fn weights(&self) -> &[usize] {
        &self.weights
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn weight_range(&self, w: usize) -> Range<usize> {
        let start = self.weights.partition_point(|&x| x < w);
        let end = self.weights.partition_point(|&x| x <= w);
        start..end
    }

    /// Dimensions of the components of weight `1..=max_weight`.
    pub fn dims(&self) -> Vec<usize> {
        (1..=self.max_weight)
            .map(|w| self.weight_range(w).len())
            .collect()
    }

    pub fn basis_vector(&self, i: usize) -> Vec<u32> {
        let mut v = vec![0; self.dim()];
        v[i] = 1;
        v
    }

    pub fn bracket_basis(&self, i: usize, j: usize) -> &[(usize, u32)] {
        &self.table[i * self.dim() + j]
    }

    pub fn bracket(&self, a: &[u32], b: &[u32]) -> Vec<u32> {
        let p = self.p;
        let n = self.dim();
        let mut out = vec![0; n];
        for (i, &ca) in a.iter().enumerate().filter(|(_, &c)| c != 0) {
            for (j, &cb) in b.iter().enumerate().filter(|(_, &c)| c != 0) {
                let k = p.mul(ca, cb);
                for &(t, c) in self.bracket_basis(i, j) {
                    out[t] = p.add(out[t], p.mul(k, c));
                }
            }
        }
        out
    }

    /// Weight of a nonzero homogeneous vector.
    pub fn weight_of(&self, v: &[u32]) -> Option<usize> {
        let mut w = None;
        for (i, _) in v.iter().enumerate().filter(|(_, &c)| c != 0) {
            match w {
                None => w = Some(self.weights[i]),
                Some(x) if x != self.weights[i] => return None,
                _ => {}
            }
        }
        w
    }

    /// Exhaustive check of antisymmetry and the Jacobi identity on basis elements.
    pub fn audit(&self) -> Result<(), StructureError> {
        let p = self.p;
        let n = self.dim();
        for i in 0..n {
            if !self.bracket_basis(i, i).is_empty() {
                return Err(StructureError::Antisymmetry {
                    left: self.labels[i].clone(),
                    right: self.labels[i].clone(),
                });
            }
            for j in (i + 1)..n {
                let mut s = vec![0; n];
                for &(t, c) in self
                    .bracket_basis(i, j)
                    .iter()
                    .chain(self.bracket_basis(j, i))
                {
                    s[t] = p.add(s[t], c);
                }
                if !is_zero_vec(&s) {
                    return Err(StructureError::Antisymmetry {
                        left: self.labels[i].clone(),
                        right: self.labels[j].clone(),
                    });
                }
            }
        }
        let basis: Vec<Vec<u32>> = (0..n).map(|i| self.basis_vector(i)).collect();
        let products: Vec<Vec<u32>> = (0..n * n)
            .map(|ij| {
                let mut v = vec![0; n];
                for &(t, c) in &self.table[ij] {
                    v[t] = c;
                }
                v
            })
            .collect();
        for i in 0..n {
            for j in (i + 1)..n {
                if self.weights[i] + self.weights[j] >= self.max_weight {
                    break;
                }
                for k in (j + 1)..n {
                    if self.weights[i] + self.weights[j] + self.weights[k] > self.max_weight {
                        break;
                    }
                    let mut s = self.bracket(&products[i * n + j], &basis[k]);
                    axpy(p, &mut s, 1, &self.bracket(&products[j * n + k], &basis[i]));
                    axpy(p, &mut s, 1, &self.bracket(&products[k * n + i], &basis[j]));
                    if !is_zero_vec(&s) {
                        return Err(StructureError::Jacobi {
                            a: self.labels[i].clone(),
                            b: self.labels[j].clone(),
                            c: self.labels[k].clone(),
                        });
                    }
                }
            }
        }
        Ok(())
    }

    /// The whole algebra as a graded subspace.
    pub fn full(&self) -> GradedSubspace {
        let mut g = GradedSubspace::new(self.p, self.dim());
        for i in 0..self.dim() {
            g.insert(self.weights[i], self.basis_vector(i));
        }
        g
    }

    /// Span of all products `[a, b]` with `a` in `left` and `b` in `right`.
    pub fn bracket_span(&self, left: &GradedSubspace, right: &GradedSubspace) -> GradedSubspace {
        let mut out = GradedSubspace::new(self.p, self.dim());
        for (&wa, sa) in &left.components {
            for (&wb, sb) in &right.components {
                if wa + wb > self.max_weight {
                    continue;
                }
                for a in sa.basis() {
                    for b in sb.basis() {
                        let v = self.bracket(a, b);
                        if !is_zero_vec(&v) {
                            out.insert(wa + wb, v);
                        }
                    }
                }
            }
        }
        out
    }

    /// Term `order` of the derived series: order 1 is `[L, L]`, order 2 is `[L', L']`.
    pub fn derived_subalgebra(&self, order: usize) -> GradedSubspace {
        let mut current = self.full();
        for _ in 0..order {
            current = self.bracket_span(&current, &current);
        }
        current
    }

    /// Subalgebra generated by `seeds`, reported per weight.
    ///
    /// Homogeneous seeds give a graded subalgebra, built weight by weight. For inhomogeneous
    /// seeds the closure is computed in the whole space and each component is its
    /// intersection with one weight.
    pub fn subalgebra_generated(&self, seeds: &[Vec<u32>]) -> GradedSubspace {
        let seeds: Vec<&Vec<u32>> = seeds.iter().filter(|s| !is_zero_vec(s)).collect();
        if seeds.iter().all(|s| self.weight_of(s).is_some()) {
            let mut out = GradedSubspace::new(self.p, self.dim());
            for w in 1..=self.max_weight {
                for s in seeds.iter().filter(|s| self.weight_of(s) == Some(w)) {
                    out.insert(w, s.to_vec());
                }
                for a in 1..=w / 2 {
                    let b = w - a;
                    let (Some(sa), Some(sb)) = (out.components.get(&a), out.components.get(&b))
                    else {
                        continue;
                    };
                    let mut found = Vec::new();
                    for u in sa.basis() {
                        for v in sb.basis() {
                            let x = self.bracket(u, v);
                            if !is_zero_vec(&x) {
                                found.push(x);
                            }
                        }
                    }
                    for x in found {
                        out.insert(w, x);
                    }
                }
            }
            return out;
        }
        let mut span = Subspace::new(self.p, self.dim());
        let mut gens: Vec<Vec<u32>> = Vec::new();
        let mut queue: Vec<Vec<u32>> = seeds.into_iter().cloned().collect();
        while let Some(v) = queue.pop() {
            if span.insert(v.clone()) {
                for g in &gens {
                    queue.push(self.bracket(&v, g));
                }
                gens.push(v);
            }
        }
        let mut out = GradedSubspace::new(self.p, self.dim());
        for w in 1..=self.max_weight {
            let mask: Vec<bool> = self.weights.iter().map(|&x| x == w).collect();
            for v in span.intersect_coordinate_block(&mask).basis() {
                out.insert(w, v.clone());
            }
        }
        out
    }

    /// Evaluates an expression whose names resolve to elements of this algebra.
    pub fn evaluate(
        &self,
        expr: &BracketExpr,
        resolve: &dyn Fn(&str) -> Option<Vec<u32>>,
    ) -> Result<Vec<u32>, EvalError> {
        let p = self.p;
        match expr {
            BracketExpr::Gen(name) => {
                resolve(name).ok_or_else(|| EvalError::UnknownName(name.clone()))
            }
            BracketExpr::Bracket(items) => {
                let mut acc = self.evaluate(&items[0], resolve)?;
                for it in &items[1..] {
                    acc = self.bracket(&acc, &self.evaluate(it, resolve)?);
                }
                Ok(acc)
            }
            BracketExpr::Sum(terms) => {
                let mut out = vec![0; self.dim()];
                for (k, e) in terms {
                    axpy(p, &mut out, p.reduce(*k), &self.evaluate(e, resolve)?);
                }
                Ok(out)
            }
        }
    }

    /// Human-readable form `c*label + ...` of a vector.
    pub fn format_vector(&self, v: &[u32]) -> String {
        let parts: Vec<String> = v
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(i, &c)| {
                if c == 1 {
                    self.labels[i].clone()
                } else {
                    format!("{c}*{}", self.labels[i])
                }
            })
            .collect();
        if parts.is_empty() {
            "0".to_string()
        } else {
            parts.join(" + ")
        }
    }

    pub fn snapshot(&self) -> AlgebraSnapshot {
        let n = self.dim();
        let mut products = Vec::new();
        for i in 0..n {
            for j in (i + 1)..n {
                let entry = self.bracket_basis(i, j);
                if !entry.is_empty() {
                    products.push(ProductEntry {
                        left: i,
                        right: j,
                        result: entry.iter().map(|&(k, c)| (k, c)).collect(),
                    });
                }
            }
        }
        AlgebraSnapshot {
            prime: self.p.get(),
            max_weight: self.max_weight,
            dims: self.dims(),
            basis: (0..n)
                .map(|i| BasisEntry {
                    label: self.labels[i].clone(),
                    weight: self.weights[i],
                })
                .collect(),
            products,
        }
    }
}

/// Serializable view of a [`GradedLieAlgebra`]; products are listed for `left < right`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AlgebraSnapshot {
    pub prime: u32,
    pub max_weight: usize,
    pub dims: Vec<usize>,
    pub basis: Vec<BasisEntry>,
    pub products: Vec<ProductEntry>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BasisEntry {
    pub label: String,
    pub weight: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ProductEntry {
    pub left: usize,
    pub right: usize,
    pub result: Vec<(usize, u32)>,
}

/// A subspace of an algebra split into homogeneous components.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradedSubspace {
    p: Prime,
    ambient: usize,
    components: BTreeMap<usize, Subspace>,
}

impl GradedSubspace {
    pub fn new(p: Prime, ambient: usize) -> Self {
        GradedSubspace {
            p,
            ambient,
            components: BTreeMap::new(),
        }
    }

    /// Adds a homogeneous vector of weight `w`; returns whether the dimension grew.
    pub fn insert(&mut self, w: usize, v: Vec<u32>) -> bool {
        let (p, n) = (self.p, self.ambient);
        self.components
            .entry(w)
            .or_insert_with(|| Subspace::new(p, n))
            .insert(v)
    }

    pub fn dim_at(&self, w: usize) -> usize {
        self.components.get(&w).map_or(0, Subspace::dim)
    }

    pub fn dim(&self) -> usize {
        self.components.values().map(Subspace::dim).sum()
    }

    /// Dimensions at weights `1..=max_weight`.
    pub fn dims(&self, max_weight: usize) -> Vec<usize> {
        (1..=max_weight).map(|w| self.dim_at(w)).collect()
    }

    pub fn component(&self, w: usize) -> Option<&Subspace> {
        self.components.get(&w)
    }

    pub fn components(&self) -> impl Iterator<Item = (usize, &Subspace)> {
        self.components
            .iter()
            .map(|(&w, s)| (w, s))
            .filter(|(_, s)| s.dim() > 0)
    }

    pub fn contains(&self, v: &[u32]) -> bool {
        let mut all = Subspace::new(self.p, self.ambient);
        for s in self.components.values() {
            for b in s.basis() {
                all.insert(b.clone());
            }
        }
        all.contains(v)
    }

    pub fn is_zero(&self) -> bool {
        self.dim() == 0
    }
}
