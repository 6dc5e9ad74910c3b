use crate::field_linalg::{FpMatrix, Prime, Subspace};

use super::{PcError, PcGroup};

/// The iterated wreath product `C_p wr ... wr C_p` acting on `p^levels` points, with the
/// permutation image of each pc generator.
#[derive(Debug, Clone)]
pub struct Wreath {
    group: PcGroup,
    degree: usize,
    perms: Vec<Vec<usize>>,
}

impl Wreath {
    pub fn group(&self) -> &PcGroup {
        &self.group
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Image of generator `i` as a map on `0..degree`.
    pub fn generator_permutation(&self, i: usize) -> &[usize] {
        &self.perms[i]
    }

    /// Image of `g1^a_1 * ... * gn^a_n`; products act on the right, first factor first.
    pub fn permutation_of(&self, exps: &[u32]) -> Vec<usize> {
        let mut out: Vec<usize> = (0..self.degree).collect();
        for (perm, &a) in self.perms.iter().zip(exps) {
            for _ in 0..a {
                for x in out.iter_mut() {
                    *x = perm[*x];
                }
            }
        }
        out
    }
}

/// Builds the Sylow p-subgroup of `Sym(p^levels)` as `C_p^X ⋊ W` level by level, where the
/// base is given a basis through the radical layers of `F_p[X]` under `W`.
pub fn build_wreath(p: Prime, levels: usize) -> Result<Wreath, PcError> {
    if levels == 0 {
        return Err(PcError::ZeroLevels);
    }
    let mut w = Wreath {
        group: PcGroup::elementary_abelian(p, 0),
        degree: 1,
        perms: Vec::new(),
    };
    for _ in 0..levels {
        w = extend(p, &w)?;
    }
    Ok(w)
}

fn extend(p: Prime, top: &Wreath) -> Result<Wreath, PcError> {
    let m = top.degree;
    let t = top.group.rank();
    let q = p.get();
    let act = |v: &[u32], perm: &[usize]| {
        let mut out = vec![0; m];
        for (y, &a) in v.iter().enumerate() {
            out[perm[y]] = a;
        }
        out
    };

    let mut layers: Vec<Vec<Vec<u32>>> = Vec::new();
    let mut current = Subspace::spanned_by(p, m, (0..m).map(|y| unit(m, y)));
    while current.dim() > 0 {
        let mut next = Subspace::new(p, m);
        let mut queue: Vec<Vec<u32>> = Vec::new();
        for v in current.basis() {
            for perm in &top.perms {
                let mut d = act(v, perm);
                for (x, &a) in d.iter_mut().zip(v) {
                    *x = p.sub(*x, a);
                }
                queue.push(d);
            }
        }
        while let Some(v) = queue.pop() {
            if next.insert(v.clone()) {
                queue.extend(top.perms.iter().map(|perm| act(&v, perm)));
            }
        }
        let mut span = next.clone();
        layers.push(
            current
                .basis()
                .iter()
                .filter(|v| span.insert((*v).clone()))
                .cloned()
                .collect(),
        );
        current = next;
    }
    let basis: Vec<Vec<u32>> = layers.into_iter().flatten().collect();
    let inverse = FpMatrix::from_rows(p, m, &basis)
        .ok()
        .and_then(|b| b.inverse().ok().flatten())
        .ok_or_else(|| PcError::Inconsistent("radical layers do not give a basis".into()))?;
    let coords = |v: &[u32]| inverse.vec_mul(v).expect("basis has full length");

    let n = t + m;
    let pad = |v: &[u32]| {
        let mut out = v.to_vec();
        out.resize(n, 0);
        out
    };
    let mut powers = Vec::new();
    let mut comms = Vec::new();
    for i in 0..t {
        powers.push((i, pad(top.group.power_relation(i))));
        for j in 0..i {
            comms.push((i, j, pad(top.group.commutator_relation(i, j))));
        }
    }
    for (k, b) in basis.iter().enumerate() {
        for (i, perm) in top.perms.iter().enumerate() {
            let mut d = act(b, perm);
            for (x, &a) in d.iter_mut().zip(b) {
                *x = p.sub(*x, a);
            }
            let mut rel = vec![0; t];
            rel.extend(coords(&d));
            comms.push((t + k, i, rel));
        }
    }
    let group = PcGroup::new(p, n, powers, comms)?;

    let degree = q as usize * m;
    let mut perms: Vec<Vec<usize>> = top
        .perms
        .iter()
        .map(|perm| (0..degree).map(|z| (z / m) * m + perm[z % m]).collect())
        .collect();
    for b in &basis {
        perms.push(
            (0..degree)
                .map(|z| {
                    let (a, y) = (z / m, z % m);
                    ((a + b[y] as usize) % q as usize) * m + y
                })
                .collect(),
        );
    }
    Ok(Wreath {
        group,
        degree,
        perms,
    })
}

fn unit(m: usize, y: usize) -> Vec<u32> {
    let mut v = vec![0; m];
    v[y] = 1;
    v
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn orders() {
        for (p, levels, log) in [(2, 1, 1), (2, 2, 3), (2, 3, 7), (3, 2, 4), (3, 3, 13)] {
            let w = build_wreath(Prime::new(p).unwrap(), levels).unwrap();
            assert_eq!(w.group().log_order(), log);
            assert_eq!(w.degree(), (p as usize).pow(levels as u32));
        }
        assert!(matches!(
            build_wreath(Prime::new(2).unwrap(), 0),
            Err(PcError::ZeroLevels)
        ));
    }
}
