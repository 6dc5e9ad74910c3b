use super::subgroup::Subgroup;
use super::{depth, GroupElement, PcError, PcGroup};

/// `G/M` for a normal subgroup `M`, presented on the images of the pc generators whose
/// depths are not depths of `M`.
#[derive(Debug, Clone)]
pub struct FactorGroup {
    group: PcGroup,
    /// Original index of each quotient generator.
    kept: Vec<usize>,
    kernel: Subgroup,
}

impl FactorGroup {
    pub fn new(g: &PcGroup, kernel: &Subgroup) -> Result<Self, PcError> {
        if !kernel.is_normal(g)? {
            return Err(PcError::NotNormal("kernel of the factor group".into()));
        }
        let killed = kernel.depths();
        let kept: Vec<usize> = (0..g.rank()).filter(|i| !killed.contains(i)).collect();
        let mut f = FactorGroup {
            group: PcGroup::elementary_abelian(g.prime(), kept.len()),
            kept,
            kernel: kernel.clone(),
        };
        let p = g.prime().get() as u64;
        let k = f.kept.len();
        let mut powers = Vec::new();
        let mut comms = Vec::new();
        for a in 0..k {
            let ga = g.unit(f.kept[a]);
            powers.push((a, f.image_raw(g, &g.pow(&ga, p))));
            for b in a + 1..k {
                let gb = g.unit(f.kept[b]);
                comms.push((b, a, f.image_raw(g, &g.comm(&gb, &ga))));
            }
        }
        f.group = PcGroup::new(g.prime(), k, powers, comms)?;
        Ok(f)
    }

    pub fn group(&self) -> &PcGroup {
        &self.group
    }

    pub fn kernel(&self) -> &Subgroup {
        &self.kernel
    }

    /// Original pc generator behind each quotient generator (0-based).
    pub fn kept(&self) -> &[usize] {
        &self.kept
    }

    /// Exponents of `xM` over the quotient generators, by stripping from the left.
    pub(crate) fn image_raw(&self, g: &PcGroup, x: &[u32]) -> Vec<u32> {
        let mut x = x.to_vec();
        let mut out = vec![0; self.kept.len()];
        let kernel = self.kernel.igs();
        let killed = self.kernel.depths();
        while let Some(d) = depth(&x) {
            let e = x[d] as u64;
            let lead = match killed.iter().position(|&k| k == d) {
                Some(m) => kernel[m].clone(),
                None => {
                    let a = self.kept.iter().position(|&k| k == d).unwrap();
                    out[a] = x[d];
                    g.unit(d)
                }
            };
            x = g.mul(&g.inv(&g.pow(&lead, e)), &x);
        }
        out
    }

    pub fn image(&self, g: &PcGroup, x: &GroupElement) -> Result<GroupElement, PcError> {
        g.check(&[x])?;
        Ok(self.group.wrap(self.image_raw(g, &x.exps)))
    }

    /// Image of a subgroup of `G`.
    pub fn image_subgroup(&self, g: &PcGroup, h: &Subgroup) -> Result<Subgroup, PcError> {
        let gens = h.generators(g)?;
        let imgs: Vec<Vec<u32>> = gens
            .iter()
            .map(|x| self.image_raw(g, x.exponents()))
            .collect();
        Ok(Subgroup::generated_raw(&self.group, imgs, &[]))
    }

    /// Full preimage of a subgroup of the quotient.
    pub fn preimage_subgroup(&self, g: &PcGroup, h: &Subgroup) -> Result<Subgroup, PcError> {
        let mut seeds: Vec<Vec<u32>> = self.kernel.igs().to_vec();
        for y in h.generators(&self.group)? {
            seeds.push(self.lift_raw(g, y.exponents()));
        }
        Ok(Subgroup::generated_raw(g, seeds, &[]))
    }

    /// A representative in `G` of a quotient element.
    pub(crate) fn lift_raw(&self, g: &PcGroup, y: &[u32]) -> Vec<u32> {
        let mut v = vec![0; g.rank()];
        for (a, &e) in y.iter().enumerate() {
            let mut w = vec![0; g.rank()];
            w[self.kept[a]] = e;
            v = g.mul(&v, &w);
        }
        v
    }

    pub fn lift(&self, g: &PcGroup, y: &GroupElement) -> Result<GroupElement, PcError> {
        self.group.check(&[y])?;
        Ok(g.wrap(self.lift_raw(g, &y.exps)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field_linalg::Prime;

    #[test]
    fn dihedral_mod_centre() {
        let g = PcGroup::new(
            Prime::new(2).unwrap(),
            3,
            vec![(1, vec![0, 0, 1])],
            vec![(1, 0, vec![0, 0, 1])],
        )
        .unwrap();
        let z = Subgroup::generated(&g, &[g.generator(2)]).unwrap();
        let f = FactorGroup::new(&g, &z).unwrap();
        assert_eq!(f.group().rank(), 2);
        assert!(f.group().is_abelian());
        assert_eq!(f.kept(), &[0, 1]);
        for x in Subgroup::whole(&g).elements(&g).unwrap() {
            for y in Subgroup::whole(&g).elements(&g).unwrap() {
                let xy = g.multiply(&x, &y).unwrap();
                let lhs = f.image(&g, &xy).unwrap();
                let rhs = f
                    .group()
                    .multiply(&f.image(&g, &x).unwrap(), &f.image(&g, &y).unwrap())
                    .unwrap();
                assert_eq!(lhs, rhs);
            }
        }
        let s = Subgroup::generated(&g, &[g.generator(0)]).unwrap();
        assert!(FactorGroup::new(&g, &s).is_err());
    }
}
