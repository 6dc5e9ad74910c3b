//! Free associative algebra over F_p: an independent model of the free Lie algebra.
//!
//! A Lie polynomial is embedded via `[a,b] = ab - ba`. Converting back to Lyndon
//! coordinates uses the triangularity of standard bracketings: the smallest word in the
//! support of a Lie polynomial is Lyndon and occurs in exactly one basis polynomial.

#![allow(dead_code)]

use std::collections::BTreeMap;

use derived_series::free_lie::BracketExpr;

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Poly {
    pub terms: BTreeMap<Vec<usize>, u32>,
}

impl Poly {
    pub fn letter(a: usize) -> Self {
        Poly {
            terms: BTreeMap::from([(vec![a], 1)]),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_scaled(&mut self, p: u32, k: u32, other: &Poly) {
        for (w, c) in &other.terms {
            let e = self.terms.entry(w.clone()).or_insert(0);
            *e = ((*e as u64 + k as u64 * *c as u64) % p as u64) as u32;
            if *e == 0 {
                self.terms.remove(w);
            }
        }
    }

    pub fn mul(&self, p: u32, other: &Poly) -> Poly {
        let mut out = Poly::default();
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                let w = [a.as_slice(), b.as_slice()].concat();
                let c = (*ca as u64 * *cb as u64 % p as u64) as u32;
                out.add_scaled(
                    p,
                    c,
                    &Poly {
                        terms: BTreeMap::from([(w, 1)]),
                    },
                );
            }
        }
        out
    }

    pub fn lie(&self, p: u32, other: &Poly) -> Poly {
        let mut out = self.mul(p, other);
        out.add_scaled(p, p - 1, &other.mul(p, self));
        out
    }

    /// Drops words whose weight exceeds `max`.
    pub fn truncate(&mut self, weights: &[usize], max: usize) {
        self.terms
            .retain(|w, _| w.iter().map(|&a| weights[a]).sum::<usize>() <= max);
    }
}

pub fn is_lyndon(w: &[usize]) -> bool {
    (1..w.len()).all(|i| {
        let rot: Vec<usize> = w[i..].iter().chain(&w[..i]).copied().collect();
        rot.as_slice() > w
    })
}

/// Standard bracketing polynomial of a Lyndon word.
/// Number of Lyndon words of weight `w`, by enumeration.
pub fn count_lyndon(weights: &[usize], w: usize) -> usize {
    fn go(weights: &[usize], w: usize, word: &mut Vec<usize>, count: &mut usize) {
        let cur: usize = word.iter().map(|&a| weights[a]).sum();
        if cur == w {
            *count += is_lyndon(word) as usize;
            return;
        }
        for a in 0..weights.len() {
            if cur + weights[a] <= w {
                word.push(a);
                go(weights, w, word, count);
                word.pop();
            }
        }
    }
    let mut count = 0;
    go(weights, w, &mut Vec::new(), &mut count);
    count
}

pub fn lyndon_poly(p: u32, w: &[usize]) -> Poly {
    if w.len() == 1 {
        return Poly::letter(w[0]);
    }
    // longest proper Lyndon suffix
    let split = (1..w.len()).find(|&i| is_lyndon(&w[i..])).unwrap();
    lyndon_poly(p, &w[..split]).lie(p, &lyndon_poly(p, &w[split..]))
}

/// Lyndon-word coordinates of a Lie polynomial.
pub fn lyndon_coords(p: u32, poly: &Poly) -> BTreeMap<Vec<usize>, u32> {
    let mut rest = poly.clone();
    let mut out = BTreeMap::new();
    while let Some((w, &c)) = rest.terms.iter().next() {
        let w = w.clone();
        assert!(
            is_lyndon(&w),
            "minimal word {w:?} of a Lie polynomial is not Lyndon"
        );
        out.insert(w.clone(), c);
        rest.add_scaled(p, p - c, &lyndon_poly(p, &w));
    }
    out
}

pub fn eval(p: u32, expr: &BracketExpr, index: &dyn Fn(&str) -> usize) -> Poly {
    match expr {
        BracketExpr::Gen(n) => Poly::letter(index(n)),
        BracketExpr::Bracket(items) => {
            let mut acc = eval(p, &items[0], index);
            for it in &items[1..] {
                acc = acc.lie(p, &eval(p, it, index));
            }
            acc
        }
        BracketExpr::Sum(terms) => {
            let mut out = Poly::default();
            for (k, e) in terms {
                out.add_scaled(p, k.rem_euclid(p as i64) as u32, &eval(p, e, index));
            }
            out
        }
    }
}

/// Dimension, per weight `1..=max`, of the quotient of the free Lie algebra by the ideal
/// generated by homogeneous relators, computed inside the associative algebra.
///
/// The ideal at weight `w` is spanned by `[r, g_1, ..., g_k]` for relators `r` and generators
/// `g_i`; its dimension is the rank of those polynomials as vectors over words.
pub fn quotient_dims(
    p: u32,
    weights: &[usize],
    max: usize,
    relators: &[Poly],
    free_dims: &[usize],
) -> Vec<usize> {
    let weight_of = |poly: &Poly| -> usize {
        let w = poly.terms.keys().next().unwrap();
        w.iter().map(|&a| weights[a]).sum()
    };
    let mut ideal: Vec<Vec<Poly>> = vec![Vec::new(); max + 1];
    for r in relators.iter().filter(|r| !r.is_zero()) {
        let w = weight_of(r);
        if w <= max {
            ideal[w].push(r.clone());
        }
    }
    for w in 1..=max {
        // reduce to a spanning set of independent polynomials
        ideal[w] = independent(p, &ideal[w]);
        let current = ideal[w].clone();
        for r in &current {
            for (g, &gw) in weights.iter().enumerate() {
                if w + gw <= max {
                    let e = r.lie(p, &Poly::letter(g));
                    if !e.is_zero() {
                        ideal[w + gw].push(e);
                    }
                }
            }
        }
    }
    (1..=max)
        .map(|w| free_dims[w - 1] - ideal[w].len())
        .collect()
}

/// Whether `target` lies in the weight-`w` part of the ideal.
pub fn in_ideal(p: u32, weights: &[usize], max: usize, relators: &[Poly], target: &Poly) -> bool {
    if target.is_zero() {
        return true;
    }
    let w_target: usize = target
        .terms
        .keys()
        .next()
        .unwrap()
        .iter()
        .map(|&a| weights[a])
        .sum();
    let mut layers: Vec<Vec<Poly>> = vec![Vec::new(); max + 1];
    for r in relators.iter().filter(|r| !r.is_zero()) {
        let w: usize = r
            .terms
            .keys()
            .next()
            .unwrap()
            .iter()
            .map(|&a| weights[a])
            .sum();
        layers[w].push(r.clone());
    }
    for w in 1..=max {
        layers[w] = independent(p, &layers[w]);
        let current = layers[w].clone();
        for r in &current {
            for (g, &gw) in weights.iter().enumerate() {
                if w + gw <= max {
                    layers[w + gw].push(r.lie(p, &Poly::letter(g)));
                }
            }
        }
    }
    let before = layers[w_target].len();
    let mut with = layers[w_target].clone();
    with.push(target.clone());
    independent(p, &with).len() == before
}

/// Gaussian elimination over word-indexed polynomials.
pub fn independent(p: u32, polys: &[Poly]) -> Vec<Poly> {
    let mut rows: Vec<Poly> = Vec::new();
    for poly in polys {
        let mut v = poly.clone();
        for r in &rows {
            let lead = r.terms.keys().next().unwrap();
            if let Some(&c) = v.terms.get(lead) {
                v.add_scaled(p, p - c, r);
            }
        }
        if let Some((lead, &c)) = v.terms.iter().next() {
            let lead = lead.clone();
            let inv = modpow(c, p - 2, p);
            let mut scaled = Poly::default();
            scaled.add_scaled(p, inv, &v);
            for r in rows.iter_mut() {
                if let Some(&k) = r.terms.get(&lead) {
                    r.add_scaled(p, p - k, &scaled);
                }
            }
            rows.push(scaled);
        }
    }
    rows
}

pub fn modpow(mut b: u32, mut e: u32, p: u32) -> u32 {
    let mut acc = 1u64;
    let mut base = b as u64 % p as u64;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % p as u64;
        }
        base = base * base % p as u64;
        e >>= 1;
    }
    b = acc as u32;
    b
}
