use std::collections::BTreeMap;

use super::{depth, GroupElement, PcError, PcGroup};

/// A subgroup stored as a canonical induced generating sequence.
///
/// Members have distinct depths in increasing order, leading exponent 1, and exponent 0 at
/// the depth of every other member, so equal subgroups have equal sequences.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Subgroup {
    parent: u64,
    n: usize,
    igs: Vec<Vec<u32>>,
}

/// Growing induced sequence keyed by depth.
pub(crate) struct Closure<'a> {
    g: &'a PcGroup,
    members: BTreeMap<usize, Vec<u32>>,
}

impl<'a> Closure<'a> {
    pub(crate) fn new(g: &'a PcGroup) -> Self {
        Closure {
            g,
            members: BTreeMap::new(),
        }
    }

    pub(crate) fn from_subgroup(g: &'a PcGroup, h: &Subgroup) -> Self {
        Closure {
            g,
            members: h
                .igs
                .iter()
                .map(|v| (depth(v).unwrap(), v.clone()))
                .collect(),
        }
    }

    /// Reduces `x` by the members; the identity means membership.
    pub(crate) fn sift(&self, mut x: Vec<u32>) -> Vec<u32> {
        let p = self.g.p.get();
        while let Some(d) = depth(&x) {
            match self.members.get(&d) {
                Some(m) => {
                    let k = (p - x[d]) as u64;
                    x = self.g.mul(&x, &self.g.pow(m, k));
                }
                None => break,
            }
        }
        x
    }

    /// Adds `seeds` and closes under commutators with members, p-th powers, and
    /// commutators with `normalizers`.
    pub(crate) fn extend(
        &mut self,
        seeds: impl IntoIterator<Item = Vec<u32>>,
        normalizers: &[Vec<u32>],
    ) {
        let g = self.g;
        let p = g.p;
        let mut queue: Vec<Vec<u32>> = seeds.into_iter().collect();
        while let Some(x) = queue.pop() {
            let r = self.sift(x);
            let Some(d) = depth(&r) else { continue };
            let r = g.pow(&r, p.inv(r[d]) as u64);
            for m in self.members.values() {
                queue.push(g.comm(&r, m));
            }
            for t in normalizers {
                queue.push(g.comm(&r, t));
            }
            queue.push(g.pow(&r, p.get() as u64));
            self.members.insert(d, r);
        }
    }

    pub(crate) fn finish(self) -> Subgroup {
        let g = self.g;
        let p = g.p.get();
        let mut igs: Vec<Vec<u32>> = self.members.into_values().collect();
        for j in 0..igs.len() {
            let dj = depth(&igs[j]).unwrap();
            for i in 0..j {
                let e = igs[i][dj];
                if e != 0 {
                    igs[i] = g.mul(&igs[i], &g.pow(&igs[j], (p - e) as u64));
                }
            }
        }
        Subgroup {
            parent: g.id,
            n: g.n,
            igs,
        }
    }
}

impl Subgroup {
    pub fn trivial(g: &PcGroup) -> Self {
        Subgroup {
            parent: g.id,
            n: g.n,
            igs: Vec::new(),
        }
    }

    pub fn whole(g: &PcGroup) -> Self {
        Subgroup {
            parent: g.id,
            n: g.n,
            igs: (0..g.n).map(|i| g.unit(i)).collect(),
        }
    }

    /// The subgroup generated by `gens`.
    pub fn generated(g: &PcGroup, gens: &[GroupElement]) -> Result<Self, PcError> {
        g.check(&gens.iter().collect::<Vec<_>>())?;
        Ok(Self::generated_raw(
            g,
            gens.iter().map(|x| x.exps.clone()),
            &[],
        ))
    }

    /// The normal closure of `gens` in the whole group.
    pub fn normal_closure(g: &PcGroup, gens: &[GroupElement]) -> Result<Self, PcError> {
        g.check(&gens.iter().collect::<Vec<_>>())?;
        Ok(Self::normal_closure_raw(
            g,
            gens.iter().map(|x| x.exps.clone()),
        ))
    }

    pub(crate) fn generated_raw(
        g: &PcGroup,
        seeds: impl IntoIterator<Item = Vec<u32>>,
        normalizers: &[Vec<u32>],
    ) -> Self {
        let mut c = Closure::new(g);
        c.extend(seeds, normalizers);
        c.finish()
    }

    pub(crate) fn normal_closure_raw(
        g: &PcGroup,
        seeds: impl IntoIterator<Item = Vec<u32>>,
    ) -> Self {
        let gens: Vec<Vec<u32>> = (0..g.n).map(|i| g.unit(i)).collect();
        Self::generated_raw(g, seeds, &gens)
    }

    fn same_parent(&self, g: &PcGroup) -> Result<(), PcError> {
        if self.parent == g.id {
            Ok(())
        } else {
            Err(PcError::ParentMismatch)
        }
    }

    /// `log_p` of the order.
    pub fn log_order(&self) -> usize {
        self.igs.len()
    }

    pub fn is_trivial(&self) -> bool {
        self.igs.is_empty()
    }

    /// Depths of the induced generators.
    pub fn depths(&self) -> Vec<usize> {
        self.igs.iter().map(|v| depth(v).unwrap()).collect()
    }

    pub(crate) fn igs(&self) -> &[Vec<u32>] {
        &self.igs
    }

    pub fn generators(&self, g: &PcGroup) -> Result<Vec<GroupElement>, PcError> {
        self.same_parent(g)?;
        Ok(self.igs.iter().map(|v| g.wrap(v.clone())).collect())
    }

    pub fn contains(&self, g: &PcGroup, x: &GroupElement) -> Result<bool, PcError> {
        self.same_parent(g)?;
        g.check(&[x])?;
        Ok(self.contains_raw(g, &x.exps))
    }

    pub(crate) fn contains_raw(&self, g: &PcGroup, x: &[u32]) -> bool {
        depth(&Closure::from_subgroup(g, self).sift(x.to_vec())).is_none()
    }

    pub fn is_subgroup_of(&self, g: &PcGroup, other: &Subgroup) -> Result<bool, PcError> {
        self.same_parent(g)?;
        other.same_parent(g)?;
        Ok(self.igs.iter().all(|x| other.contains_raw(g, x)))
    }

    /// Whether the subgroup is normalized by every element of `by`.
    pub fn is_normalized_by(&self, g: &PcGroup, by: &Subgroup) -> Result<bool, PcError> {
        self.same_parent(g)?;
        by.same_parent(g)?;
        Ok(self
            .igs
            .iter()
            .all(|x| by.igs.iter().all(|t| self.contains_raw(g, &g.comm(x, t)))))
    }

    pub fn is_normal(&self, g: &PcGroup) -> Result<bool, PcError> {
        self.is_normalized_by(g, &Subgroup::whole(g))
    }

    /// Every element, as exponent vectors, in a deterministic order.
    pub(crate) fn elements_raw(&self, g: &PcGroup) -> Vec<Vec<u32>> {
        let p = g.p.get();
        let mut out = vec![vec![0; g.n]];
        for m in self.igs.iter().rev() {
            let mut next = Vec::with_capacity(out.len() * p as usize);
            let mut power = vec![0; g.n];
            for _ in 0..p {
                for x in &out {
                    next.push(g.mul(&power, x));
                }
                power = g.mul(&power, m);
            }
            out = next;
        }
        out
    }

    /// The subgroup as a group in its own right, on the induced sequence.
    pub fn as_group(&self, g: &PcGroup) -> Result<PcGroup, PcError> {
        self.same_parent(g)?;
        let k = self.igs.len();
        let express = |x: &[u32]| -> Vec<u32> {
            let mut x = x.to_vec();
            let mut out = vec![0; k];
            while let Some(d) = depth(&x) {
                let i = self
                    .igs
                    .iter()
                    .position(|m| depth(m) == Some(d))
                    .expect("element lies in the subgroup");
                out[i] = x[d];
                x = g.mul(&g.inv(&g.pow(&self.igs[i], x[d] as u64)), &x);
            }
            out
        };
        let p = g.p.get() as u64;
        let mut powers = Vec::new();
        let mut comms = Vec::new();
        for i in 0..k {
            powers.push((i, express(&g.pow(&self.igs[i], p))));
            for j in i + 1..k {
                comms.push((j, i, express(&g.comm(&self.igs[j], &self.igs[i]))));
            }
        }
        PcGroup::new(g.p, k, powers, comms)
    }

    pub(crate) fn random_element_raw<R: rand::Rng + ?Sized>(
        &self,
        g: &PcGroup,
        rng: &mut R,
    ) -> Vec<u32> {
        let p = g.p.get();
        self.igs.iter().fold(vec![0; g.n], |acc, m| {
            g.mul(&acc, &g.pow(m, rng.gen_range(0..p) as u64))
        })
    }

    /// A uniformly random element.
    pub fn random_element<R: rand::Rng + ?Sized>(
        &self,
        g: &PcGroup,
        rng: &mut R,
    ) -> Result<GroupElement, PcError> {
        self.same_parent(g)?;
        Ok(g.wrap(self.random_element_raw(g, rng)))
    }

    pub fn elements(&self, g: &PcGroup) -> Result<Vec<GroupElement>, PcError> {
        self.same_parent(g)?;
        Ok(self
            .elements_raw(g)
            .into_iter()
            .map(|v| g.wrap(v))
            .collect())
    }

    /// The subgroup generated by both.
    pub fn join(&self, g: &PcGroup, other: &Subgroup) -> Result<Subgroup, PcError> {
        self.same_parent(g)?;
        other.same_parent(g)?;
        let mut c = Closure::from_subgroup(g, self);
        c.extend(other.igs.iter().cloned(), &[]);
        Ok(c.finish())
    }

    /// Intersection, by enumerating the smaller subgroup.
    pub fn intersection(&self, g: &PcGroup, other: &Subgroup) -> Result<Subgroup, PcError> {
        self.same_parent(g)?;
        other.same_parent(g)?;
        let (small, big) = if self.log_order() <= other.log_order() {
            (self, other)
        } else {
            (other, self)
        };
        if small.is_subgroup_of(g, big)? {
            return Ok(small.clone());
        }
        let sifter = Closure::from_subgroup(g, big);
        let mut c = Closure::new(g);
        for x in small.elements_raw(g) {
            if depth(&sifter.sift(x.clone())).is_none() && depth(&c.sift(x.clone())).is_some() {
                c.extend([x], &[]);
            }
        }
        Ok(c.finish())
    }

    /// `[A, B]` for subgroups normal in the whole group.
    pub fn commutator_subgroup(
        g: &PcGroup,
        a: &Subgroup,
        b: &Subgroup,
    ) -> Result<Subgroup, PcError> {
        a.same_parent(g)?;
        b.same_parent(g)?;
        if !a.is_normal(g)? {
            return Err(PcError::NotNormal("first argument of [A, B]".into()));
        }
        if !b.is_normal(g)? {
            return Err(PcError::NotNormal("second argument of [A, B]".into()));
        }
        Ok(Self::commutator_in(g, a, b, &Subgroup::whole(g)))
    }

    /// `[A, B]` computed as a normal closure inside `within`, for `A`, `B` normal in `within`.
    pub(crate) fn commutator_in(
        g: &PcGroup,
        a: &Subgroup,
        b: &Subgroup,
        within: &Subgroup,
    ) -> Subgroup {
        let seeds = a
            .igs
            .iter()
            .flat_map(|x| b.igs.iter().map(move |y| (x, y)))
            .map(|(x, y)| g.comm(x, y))
            .collect::<Vec<_>>();
        Self::generated_raw(g, seeds, &within.igs)
    }

    /// `<x^p : x in A>`, by enumeration.
    pub fn power_subgroup(&self, g: &PcGroup) -> Result<Subgroup, PcError> {
        self.same_parent(g)?;
        let p = g.p.get() as u64;
        let mut c = Closure::new(g);
        for x in self.elements_raw(g) {
            let y = g.pow(&x, p);
            if depth(&c.sift(y.clone())).is_some() {
                c.extend([y], &[]);
            }
        }
        Ok(c.finish())
    }
}
