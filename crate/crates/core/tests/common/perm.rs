//! Permutation groups by brute-force enumeration.

use std::collections::HashSet;

pub type Perm = Vec<usize>;

/// `x` then `y`.
pub fn compose(x: &Perm, y: &Perm) -> Perm {
    x.iter().map(|&i| y[i]).collect()
}

pub fn inverse(x: &Perm) -> Perm {
    let mut out = vec![0; x.len()];
    for (i, &j) in x.iter().enumerate() {
        out[j] = i;
    }
    out
}

pub fn identity(n: usize) -> Perm {
    (0..n).collect()
}

pub fn commutator(x: &Perm, y: &Perm) -> Perm {
    compose(&compose(&inverse(x), &inverse(y)), &compose(x, y))
}

/// Standard generators of the Sylow p-subgroup of `Sym(p^levels)`: generator `k` adds `p^k`
/// modulo `p^(k+1)` on the points below `p^(k+1)`.
pub fn sylow_generators(p: usize, levels: usize) -> Vec<Perm> {
    let n = p.pow(levels as u32);
    (0..levels)
        .map(|k| {
            let (step, block) = (p.pow(k as u32), p.pow(k as u32 + 1));
            (0..n)
                .map(|x| if x < block { (x + step) % block } else { x })
                .collect()
        })
        .collect()
}

#[derive(Clone, Debug)]
pub struct PermGroup {
    pub degree: usize,
    pub gens: Vec<Perm>,
    pub elements: HashSet<Perm>,
}

impl PermGroup {
    pub fn generated(degree: usize, gens: Vec<Perm>) -> Self {
        let mut elements = HashSet::new();
        let mut frontier = vec![identity(degree)];
        elements.insert(identity(degree));
        while let Some(x) = frontier.pop() {
            for g in &gens {
                let y = compose(&x, g);
                if elements.insert(y.clone()) {
                    frontier.push(y);
                }
            }
        }
        PermGroup {
            degree,
            gens,
            elements,
        }
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn contains(&self, x: &Perm) -> bool {
        self.elements.contains(x)
    }

    /// Smallest subgroup containing `seeds` and normalized by `by`.
    pub fn normal_closure(degree: usize, seeds: Vec<Perm>, by: &[Perm]) -> Self {
        let mut h = PermGroup::generated(degree, Vec::new());
        let mut queue = seeds;
        while let Some(x) = queue.pop() {
            if h.contains(&x) {
                continue;
            }
            let mut gens = h.gens.clone();
            gens.push(x.clone());
            h = PermGroup::generated(degree, gens);
            for s in by {
                queue.push(compose(&compose(&inverse(s), &x), s));
            }
        }
        h
    }

    /// `[self, self]`.
    pub fn derived(&self) -> Self {
        let mut seeds = Vec::new();
        for a in &self.gens {
            for b in &self.gens {
                seeds.push(commutator(a, b));
            }
        }
        PermGroup::normal_closure(self.degree, seeds, &self.gens)
    }

    /// `[self, other]` for subgroups normalized by `by`.
    pub fn commutator_with(&self, other: &PermGroup, by: &[Perm]) -> Self {
        let mut seeds = Vec::new();
        for a in &self.gens {
            for b in &other.gens {
                seeds.push(commutator(a, b));
            }
        }
        PermGroup::normal_closure(self.degree, seeds, by)
    }

    pub fn intersection(&self, other: &PermGroup) -> Self {
        let common: Vec<Perm> = self
            .elements
            .intersection(&other.elements)
            .cloned()
            .collect();
        PermGroup::generated(self.degree, common)
    }

    pub fn is_subgroup_of(&self, other: &PermGroup) -> bool {
        self.elements.is_subset(&other.elements)
    }

    /// Orders along the derived series, down to 1.
    pub fn derived_orders(&self) -> Vec<usize> {
        let mut out = vec![self.order()];
        let mut h = self.clone();
        while h.order() > 1 {
            h = h.derived();
            out.push(h.order());
        }
        out
    }
}
