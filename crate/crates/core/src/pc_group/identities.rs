use super::series::lower_central_series_of;
use super::subgroup::Subgroup;
use super::{GroupElement, PcError, PcGroup};

/// `[x,y,z^x] [z,x,y^z] [y,z,x^y]`, which is the identity in every group.
pub fn hall_witt_product(
    g: &PcGroup,
    x: &GroupElement,
    y: &GroupElement,
    z: &GroupElement,
) -> Result<GroupElement, PcError> {
    g.check(&[x, y, z])?;
    let (x, y, z) = (&x.exps, &y.exps, &z.exps);
    let term = |a: &[u32], b: &[u32], c: &[u32]| g.comm(&g.comm(a, b), &g.conj(c, a));
    let prod = g.mul(&g.mul(&term(x, y, z), &term(z, x, y)), &term(y, z, x));
    Ok(g.wrap(prod))
}

/// Whether `[x^p, y] = [x,y]^p` modulo `(H')^p gamma_p(H)` where `H = <x, [x,y]>`.
pub fn collection_formula_check(
    g: &PcGroup,
    x: &GroupElement,
    y: &GroupElement,
) -> Result<bool, PcError> {
    g.check(&[x, y])?;
    let p = g.prime().get() as u64;
    let (x, y) = (&x.exps, &y.exps);
    let xy = g.comm(x, y);
    let h = Subgroup::generated_raw(g, [x.clone(), xy.clone()], &[]);
    let derived = Subgroup::commutator_in(g, &h, &h, &h);
    let lcs = lower_central_series_of(g, &h);
    let gamma_p = lcs
        .get(p as usize - 1)
        .cloned()
        .unwrap_or_else(|| Subgroup::trivial(g));
    let modulus = derived.power_subgroup(g)?.join(g, &gamma_p)?;
    let lhs = g.comm(&g.pow(x, p), y);
    let rhs = g.pow(&xy, p);
    Ok(modulus.contains_raw(g, &g.mul(&g.inv(&rhs), &lhs)))
}
