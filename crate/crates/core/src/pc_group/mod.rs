//! Finite p-groups given by consistent power-commutator presentations.
//!
//! Generators are `g1..gn`. Elements are exponent vectors `(a_1..a_n)` with `0 <= a_i < p`
//! standing for `g1^a_1 * ... * gn^a_n`. Products are normalized by collection from the left.

mod identities;
mod parse;
mod quotient;
mod series;
mod subgroup;
mod wreath;

use std::collections::hash_map::DefaultHasher;
use std::fmt;
use std::hash::{Hash, Hasher};

use rand::Rng;
use thiserror::Error;

use crate::field_linalg::Prime;

pub use identities::{collection_formula_check, hall_witt_product};
pub use parse::PcParseError;
pub use quotient::FactorGroup;
pub(crate) use series::lower_central_series_of;
pub use series::{
    classify_small_quotient, derived_series, filtration_n, generator_number, lower_central_series,
    q_subgroup, Filtration, SmallQuotientCase, SmallQuotientReport,
};
pub use subgroup::Subgroup;
pub use wreath::{build_wreath, Wreath};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PcError {
    #[error("generator index {index} out of range 1..={n}")]
    GeneratorOutOfRange { index: usize, n: usize },
    #[error("relation for {relation} involves g{offending}, which is not a later generator")]
    NotLater { relation: String, offending: usize },
    #[error("exponent vector has length {got}, expected {expected}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("exponent {value} is not reduced mod {p}")]
    UnreducedExponent { value: u32, p: u32 },
    #[error("presentation is inconsistent: {0}")]
    Inconsistent(String),
    #[error("elements or subgroups belong to different groups")]
    ParentMismatch,
    #[error("{0} is not normal")]
    NotNormal(String),
    #[error("wreath products need at least one level")]
    ZeroLevels,
    #[error("G^({d}) is trivial")]
    TrivialDerivedTerm { d: usize },
    #[error("G^({d})/G^({next}) has order p^{measured}, a small quotient needs p^{expected} with G^({next}) != 1")]
    NotSmall {
        d: usize,
        next: usize,
        measured: usize,
        expected: usize,
    },
    #[error("Lemma check failed: {0}")]
    CheckFailed(String),
}

/// An element of a [`PcGroup`] in normal form.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupElement {
    parent: u64,
    exps: Vec<u32>,
}

impl GroupElement {
    pub fn exponents(&self) -> &[u32] {
        &self.exps
    }

    pub fn is_identity(&self) -> bool {
        self.exps.iter().all(|&a| a == 0)
    }

    /// Index of the first nonzero exponent.
    pub fn depth(&self) -> Option<usize> {
        depth(&self.exps)
    }
}

pub(crate) fn depth(v: &[u32]) -> Option<usize> {
    v.iter().position(|&a| a != 0)
}

/// A consistent power-commutator presentation of a group of order `p^n`.
#[derive(Clone, PartialEq, Eq)]
pub struct PcGroup {
    p: Prime,
    n: usize,
    /// `g_i^p` as an exponent vector supported on indices `> i`.
    power: Vec<Vec<u32>>,
    /// `[g_j, g_i]` for `i < j`, stored at `comm[j][i]`, supported on indices `> j`.
    comm: Vec<Vec<Vec<u32>>>,
    power_letters: Vec<Vec<usize>>,
    comm_letters: Vec<Vec<Vec<usize>>>,
    id: u64,
}

impl fmt::Debug for PcGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PcGroup")
            .field("p", &self.p)
            .field("n", &self.n)
            .finish_non_exhaustive()
    }
}

fn letters(v: &[u32]) -> Vec<usize> {
    v.iter()
        .enumerate()
        .flat_map(|(i, &a)| std::iter::repeat_n(i, a as usize))
        .collect()
}

impl PcGroup {
    /// Builds a presentation from 0-based relations and checks consistency.
    ///
    /// `powers` lists `(i, g_i^p)`; `commutators` lists `(j, i, [g_j, g_i])` with `i < j`.
    /// Omitted relations are trivial.
    pub fn new(
        p: Prime,
        n: usize,
        powers: Vec<(usize, Vec<u32>)>,
        commutators: Vec<(usize, usize, Vec<u32>)>,
    ) -> Result<Self, PcError> {
        let g = Self::new_unchecked(p, n, powers, commutators)?;
        g.check_consistency()?;
        Ok(g)
    }

    pub(crate) fn new_unchecked(
        p: Prime,
        n: usize,
        powers: Vec<(usize, Vec<u32>)>,
        commutators: Vec<(usize, usize, Vec<u32>)>,
    ) -> Result<Self, PcError> {
        let check_vec = |v: &[u32], after: usize, relation: String| -> Result<(), PcError> {
            if v.len() != n {
                return Err(PcError::LengthMismatch {
                    expected: n,
                    got: v.len(),
                });
            }
            if let Some(&value) = v.iter().find(|&&a| a >= p.get()) {
                return Err(PcError::UnreducedExponent { value, p: p.get() });
            }
            if let Some(k) = v[..=after].iter().position(|&a| a != 0) {
                return Err(PcError::NotLater {
                    relation,
                    offending: k + 1,
                });
            }
            Ok(())
        };
        let range = |index: usize| {
            if index >= n {
                Err(PcError::GeneratorOutOfRange {
                    index: index + 1,
                    n,
                })
            } else {
                Ok(())
            }
        };
        let mut power = vec![vec![0; n]; n];
        for (i, v) in powers {
            range(i)?;
            check_vec(&v, i, format!("g{}^{}", i + 1, p))?;
            power[i] = v;
        }
        let mut comm: Vec<Vec<Vec<u32>>> = (0..n).map(|j| vec![vec![0; n]; j]).collect();
        for (j, i, v) in commutators {
            range(j)?;
            range(i)?;
            if i >= j {
                return Err(PcError::NotLater {
                    relation: format!("[g{},g{}]", j + 1, i + 1),
                    offending: j + 1,
                });
            }
            check_vec(&v, j, format!("[g{},g{}]", j + 1, i + 1))?;
            comm[j][i] = v;
        }
        let power_letters = power.iter().map(|v| letters(v)).collect();
        let comm_letters = comm
            .iter()
            .map(|row| row.iter().map(|v| letters(v)).collect())
            .collect();
        let mut h = DefaultHasher::new();
        (p.get(), n, &power, &comm).hash(&mut h);
        Ok(PcGroup {
            p,
            n,
            power,
            comm,
            power_letters,
            comm_letters,
            id: h.finish(),
        })
    }

    /// The elementary abelian group of order `p^n`.
    pub fn elementary_abelian(p: Prime, n: usize) -> Self {
        Self::new_unchecked(p, n, vec![], vec![]).expect("trivial relations are valid")
    }

    /// The cyclic group of order `p^n`.
    pub fn cyclic(p: Prime, n: usize) -> Self {
        let powers = (0..n.saturating_sub(1))
            .map(|i| {
                let mut v = vec![0; n];
                v[i + 1] = 1;
                (i, v)
            })
            .collect();
        Self::new_unchecked(p, n, powers, vec![]).expect("cyclic relations are valid")
    }

    pub fn prime(&self) -> Prime {
        self.p
    }

    /// Number of pc generators; the order is `p^n`.
    pub fn rank(&self) -> usize {
        self.n
    }

    pub fn log_order(&self) -> usize {
        self.n
    }

    /// `g_i^p` (0-based).
    pub fn power_relation(&self, i: usize) -> &[u32] {
        &self.power[i]
    }

    /// `[g_j, g_i]` for `i < j` (0-based).
    pub fn commutator_relation(&self, j: usize, i: usize) -> &[u32] {
        &self.comm[j][i]
    }

    pub fn identity(&self) -> GroupElement {
        self.wrap(vec![0; self.n])
    }

    /// The pc generator `g_{i+1}`.
    pub fn generator(&self, i: usize) -> GroupElement {
        self.wrap(self.unit(i))
    }

    pub fn generators(&self) -> Vec<GroupElement> {
        (0..self.n).map(|i| self.generator(i)).collect()
    }

    pub fn element(&self, exps: Vec<u32>) -> Result<GroupElement, PcError> {
        if exps.len() != self.n {
            return Err(PcError::LengthMismatch {
                expected: self.n,
                got: exps.len(),
            });
        }
        if let Some(&value) = exps.iter().find(|&&a| a >= self.p.get()) {
            return Err(PcError::UnreducedExponent {
                value,
                p: self.p.get(),
            });
        }
        Ok(self.wrap(exps))
    }

    pub fn random_element<R: Rng + ?Sized>(&self, rng: &mut R) -> GroupElement {
        let p = self.p.get();
        self.wrap((0..self.n).map(|_| rng.gen_range(0..p)).collect())
    }

    pub(crate) fn wrap(&self, exps: Vec<u32>) -> GroupElement {
        GroupElement {
            parent: self.id,
            exps,
        }
    }

    pub(crate) fn unit(&self, i: usize) -> Vec<u32> {
        let mut v = vec![0; self.n];
        v[i] = 1;
        v
    }

    fn check(&self, xs: &[&GroupElement]) -> Result<(), PcError> {
        if xs.iter().all(|x| x.parent == self.id) {
            Ok(())
        } else {
            Err(PcError::ParentMismatch)
        }
    }

    pub fn multiply(&self, a: &GroupElement, b: &GroupElement) -> Result<GroupElement, PcError> {
        self.check(&[a, b])?;
        Ok(self.wrap(self.mul(&a.exps, &b.exps)))
    }

    pub fn inverse(&self, a: &GroupElement) -> Result<GroupElement, PcError> {
        self.check(&[a])?;
        Ok(self.wrap(self.inv(&a.exps)))
    }

    pub fn power(&self, a: &GroupElement, e: u64) -> Result<GroupElement, PcError> {
        self.check(&[a])?;
        Ok(self.wrap(self.pow(&a.exps, e)))
    }

    /// `x^{-1} y^{-1} x y`.
    pub fn commutator(&self, x: &GroupElement, y: &GroupElement) -> Result<GroupElement, PcError> {
        self.check(&[x, y])?;
        Ok(self.wrap(self.comm(&x.exps, &y.exps)))
    }

    /// `y^{-1} x y`.
    pub fn conjugate(&self, x: &GroupElement, y: &GroupElement) -> Result<GroupElement, PcError> {
        self.check(&[x, y])?;
        Ok(self.wrap(self.conj(&x.exps, &y.exps)))
    }

    /// Collects `v * w` where `w` is given as a sequence of generator letters.
    fn collect(&self, v: &mut [u32], word: &[usize]) {
        let p = self.p.get();
        let n = self.n;
        let mut stack: Vec<usize> = word.iter().rev().copied().collect();
        while let Some(k) = stack.pop() {
            if v[k + 1..].iter().any(|&a| a != 0) {
                for j in (k + 1..n).rev() {
                    for _ in 0..v[j] {
                        stack.extend(self.comm_letters[j][k].iter().rev());
                        stack.push(j);
                    }
                    v[j] = 0;
                }
            }
            v[k] += 1;
            if v[k] == p {
                v[k] = 0;
                stack.extend(self.power_letters[k].iter().rev());
            }
        }
    }

    pub(crate) fn mul(&self, a: &[u32], b: &[u32]) -> Vec<u32> {
        let mut v = a.to_vec();
        self.collect(&mut v, &letters(b));
        v
    }

    pub(crate) fn inv(&self, a: &[u32]) -> Vec<u32> {
        let p = self.p.get();
        let mut c = a.to_vec();
        let mut x = vec![0; self.n];
        for i in 0..self.n {
            if c[i] != 0 {
                let e = (p - c[i]) as usize;
                let w = vec![i; e];
                self.collect(&mut c, &w);
                self.collect(&mut x, &w);
            }
        }
        x
    }

    pub(crate) fn pow(&self, a: &[u32], mut e: u64) -> Vec<u32> {
        let mut result = vec![0; self.n];
        let mut base = a.to_vec();
        while e > 0 {
            if e & 1 == 1 {
                result = self.mul(&result, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base);
            }
        }
        result
    }

    pub(crate) fn comm(&self, x: &[u32], y: &[u32]) -> Vec<u32> {
        let xy = self.mul(x, y);
        let yx = self.mul(y, x);
        self.mul(&self.inv(&yx), &xy)
    }

    pub(crate) fn conj(&self, x: &[u32], y: &[u32]) -> Vec<u32> {
        self.mul(&self.inv(y), &self.mul(x, y))
    }

    /// Runs the overlap tests on generator triples, pairs and singletons.
    pub fn check_consistency(&self) -> Result<(), PcError> {
        let n = self.n;
        let p = self.p.get();
        let g = |i: usize| self.unit(i);
        let gp1 = |i: usize| {
            let mut v = vec![0; n];
            v[i] = p - 1;
            v
        };
        let fail = |what: String| Err(PcError::Inconsistent(what));
        for k in 0..n {
            for j in 0..k {
                for i in 0..j {
                    let left = self.mul(&self.mul(&g(k), &g(j)), &g(i));
                    let right = self.mul(&g(k), &self.mul(&g(j), &g(i)));
                    if left != right {
                        return fail(format!("(g{} g{}) g{}", k + 1, j + 1, i + 1));
                    }
                }
            }
        }
        for j in 0..n {
            for i in 0..j {
                let left = self.mul(&self.mul(&gp1(j), &g(j)), &g(i));
                let right = self.mul(&gp1(j), &self.mul(&g(j), &g(i)));
                if left != right {
                    return fail(format!("g{}^{p} g{}", j + 1, i + 1));
                }
                let left = self.mul(&self.mul(&g(j), &gp1(i)), &g(i));
                let right = self.mul(&g(j), &self.mul(&gp1(i), &g(i)));
                if left != right {
                    return fail(format!("g{} g{}^{p}", j + 1, i + 1));
                }
            }
        }
        for i in 0..n {
            let left = self.mul(&self.mul(&gp1(i), &g(i)), &g(i));
            let right = self.mul(&gp1(i), &self.mul(&g(i), &g(i)));
            if left != right {
                return fail(format!("g{}^{} g{}", i + 1, p + 1, i + 1));
            }
        }
        Ok(())
    }

    pub fn is_abelian(&self) -> bool {
        self.comm
            .iter()
            .flatten()
            .all(|v| v.iter().all(|&a| a == 0))
    }
}
