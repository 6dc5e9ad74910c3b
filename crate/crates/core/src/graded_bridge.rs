//! Graded Lie rings built from filtrations of concrete groups.
//!
//! For a level `d` and `h = 2^(d-1)`:
//!
//! - `K` is the graded ring of the filtration `N_i` on `G^(d)`, with `K_i = N_i/N_{i+1}` in
//!   weight `i`.
//! - `K̄` adds `G^(d-1)/Q` in weight `h`, where `Q = [G^(d-1), G] (G^(d-1))^p`.
//! - `L` keeps the weights `h, 2h, 3h, 4h` of `K̄`, relabelled `1, 2, 3, 4`.
//! - The lower-central analogue takes the subring generated by `G^(d) γ_{2^d+1} / γ_{2^d+1}`,
//!   with `L_k` in weight `k`.
//!
//! Brackets are computed on coset representatives.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::lie_nq::{AlgebraSnapshot, GradedLieAlgebra, StructureError};
use crate::pc_group::{
    classify_small_quotient, derived_series, filtration_n, generator_number, lower_central_series,
    lower_central_series_of, q_subgroup, FactorGroup, PcError, PcGroup, SmallQuotientCase,
    Subgroup,
};

/// Representative re-choices per build.
pub const REPRESENTATIVE_SAMPLES: usize = 200;

const SEED: u64 = 0x006b_6272_6964_6765;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BridgeError {
    #[error(transparent)]
    Group(#[from] PcError),
    #[error(transparent)]
    Structure(#[from] StructureError),
    #[error("{0} is not elementary abelian")]
    NotElementary(String),
    #[error("this construction needs d >= 1")]
    NeedsPositiveD,
    #[error("containment {0} fails")]
    Containment(String),
    #[error("bracket of {left} and {right} leaves its component")]
    Grading { left: String, right: String },
    #[error("bracket of {left} and {right} depends on the coset representatives")]
    RepresentativeDependence { left: String, right: String },
    #[error("G^({d})/G^({next}) is in case (i); L needs case (ii)", next = d + 1)]
    CaseOne { d: usize },
    #[error("G^({0}) is trivial")]
    TrivialDerivedTerm(usize),
    #[error("L has dims {dims:?}: {detail}")]
    Dimensions { dims: Vec<usize>, detail: String },
    #[error("{0}")]
    Mismatch(String),
}

/// `top / bottom` for `bottom` normal in `top` with elementary abelian quotient.
#[derive(Debug, Clone)]
struct Section {
    bottom: Subgroup,
    reps: Vec<Vec<u32>>,
}

impl Section {
    fn new(
        g: &PcGroup,
        top: &Subgroup,
        bottom: &Subgroup,
        name: &str,
    ) -> Result<Self, BridgeError> {
        if !bottom.is_subgroup_of(g, top)? {
            return Err(BridgeError::Mismatch(format!(
                "{name}: bottom is not contained in top"
            )));
        }
        let p = g.prime().get() as u64;
        let t = top.igs();
        let normal = bottom
            .igs()
            .iter()
            .all(|b| t.iter().all(|x| bottom.contains_raw(g, &g.conj(b, x))));
        let elementary = t.iter().all(|x| bottom.contains_raw(g, &g.pow(x, p)))
            && t.iter()
                .all(|x| t.iter().all(|y| bottom.contains_raw(g, &g.comm(x, y))));
        if !normal || !elementary {
            return Err(BridgeError::NotElementary(name.to_string()));
        }
        let low = bottom.depths();
        let reps = t
            .iter()
            .filter(|x| !low.contains(&lead(x)))
            .cloned()
            .collect();
        Ok(Section {
            bottom: bottom.clone(),
            reps,
        })
    }

    fn dim(&self) -> usize {
        self.reps.len()
    }

    /// Coordinates of `x * bottom`, or `None` if `x` is outside `top`.
    fn coords(&self, g: &PcGroup, x: &[u32]) -> Option<Vec<u32>> {
        let mut x = x.to_vec();
        let mut out = vec![0; self.reps.len()];
        while let Some(d) = x.iter().position(|&a| a != 0) {
            let e = x[d] as u64;
            let m = match self.bottom.igs().iter().find(|m| lead(m) == d) {
                Some(m) => m,
                None => {
                    let k = self.reps.iter().position(|m| lead(m) == d)?;
                    out[k] = x[d];
                    &self.reps[k]
                }
            };
            x = g.mul(&g.inv(&g.pow(m, e)), &x);
        }
        Some(out)
    }

    fn lift(&self, g: &PcGroup, v: &[u32]) -> Vec<u32> {
        self.reps
            .iter()
            .zip(v)
            .fold(vec![0; g.rank()], |acc, (m, &e)| {
                g.mul(&acc, &g.pow(m, e as u64))
            })
    }

    fn random_rep(&self, g: &PcGroup, v: &[u32], rng: &mut ChaCha8Rng) -> Vec<u32> {
        g.mul(&self.lift(g, v), &self.bottom.random_element_raw(g, rng))
    }
}

fn lead(x: &[u32]) -> usize {
    x.iter()
        .position(|&a| a != 0)
        .expect("subgroup generators are nontrivial")
}

/// One homogeneous component and the subgroup quotient it came from.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Component {
    /// Filtration index.
    pub index: usize,
    /// Weight in the algebra.
    pub weight: usize,
    pub dim: usize,
    pub source: String,
}

/// A graded Lie algebra built from a group, with the checks it passed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradedBridgeResult {
    pub prime: u32,
    pub d: usize,
    pub group_log_order: usize,
    pub components: Vec<Component>,
    pub algebra: GradedLieAlgebra,
    pub checks: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BridgeSummary {
    pub prime: u32,
    pub d: usize,
    pub group_log_order: usize,
    pub components: Vec<Component>,
    pub algebra: AlgebraSnapshot,
    pub checks: Vec<String>,
}

impl GradedBridgeResult {
    pub fn dims(&self) -> Vec<usize> {
        self.components.iter().map(|c| c.dim).collect()
    }

    pub fn summary(&self) -> BridgeSummary {
        BridgeSummary {
            prime: self.prime,
            d: self.d,
            group_log_order: self.group_log_order,
            components: self.components.clone(),
            algebra: self.algebra.snapshot(),
            checks: self.checks.clone(),
        }
    }
}

struct Graded<'a> {
    g: &'a PcGroup,
    parts: Vec<(Component, Section)>,
    checks: Vec<String>,
}

impl<'a> Graded<'a> {
    fn labels_and_weights(&self) -> (Vec<String>, Vec<usize>, Vec<(usize, usize)>) {
        let mut labels = Vec::new();
        let mut weights = Vec::new();
        let mut owner = Vec::new();
        for (c, (comp, _)) in self.parts.iter().enumerate() {
            for t in 0..comp.dim {
                labels.push(format!("K{}.{}", comp.index, t + 1));
                weights.push(comp.weight);
                owner.push((c, t));
            }
        }
        (labels, weights, owner)
    }

    fn part_at(&self, weight: usize) -> Option<(usize, &Section)> {
        self.parts
            .iter()
            .position(|(c, _)| c.weight == weight)
            .map(|k| (k, &self.parts[k].1))
    }

    /// Coordinates of the product of two group elements lying over weights `wa` and `wb`,
    /// as a vector over the whole basis; products past `max_weight` must be trivial.
    fn product(
        &self,
        (x, wa): (&[u32], usize),
        (y, wb): (&[u32], usize),
        offsets: &[usize],
        n: usize,
        max_weight: usize,
    ) -> Option<Vec<u32>> {
        let c = self.g.comm(x, y);
        let mut out = vec![0; n];
        match self.part_at(wa + wb) {
            Some((k, sec)) if wa + wb <= max_weight => {
                let v = sec.coords(self.g, &c)?;
                out[offsets[k]..offsets[k] + v.len()].copy_from_slice(&v);
            }
            _ => {
                if wa + wb <= max_weight && c.iter().any(|&a| a != 0) {
                    return None;
                }
            }
        }
        Some(out)
    }

    fn build(mut self, d: usize, max_weight: usize) -> Result<GradedBridgeResult, BridgeError> {
        let g = self.g;
        let (labels, weights, owner) = self.labels_and_weights();
        let n = labels.len();
        let mut offsets = Vec::new();
        let mut acc = 0;
        for (comp, _) in &self.parts {
            offsets.push(acc);
            acc += comp.dim;
        }
        let unit = |t: usize, dim: usize| {
            let mut v = vec![0; dim];
            v[t] = 1;
            v
        };
        let mut table = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let (ci, ti) = owner[i];
                let (cj, tj) = owner[j];
                let si = &self.parts[ci].1;
                let sj = &self.parts[cj].1;
                let v = self
                    .product(
                        (&si.reps[ti], weights[i]),
                        (&sj.reps[tj], weights[j]),
                        &offsets,
                        n,
                        max_weight,
                    )
                    .ok_or_else(|| BridgeError::Grading {
                        left: labels[i].clone(),
                        right: labels[j].clone(),
                    })?;
                table.push(
                    v.iter()
                        .enumerate()
                        .filter(|(_, &a)| a != 0)
                        .map(|(k, &a)| (k, a))
                        .collect(),
                );
            }
        }
        self.checks.push("grading".into());
        let algebra = GradedLieAlgebra::from_table(
            g.prime(),
            max_weight,
            labels.clone(),
            weights.clone(),
            table,
        )?;

        let mut rng = ChaCha8Rng::seed_from_u64(SEED);
        if n > 0 {
            for _ in 0..REPRESENTATIVE_SAMPLES {
                use rand::Rng;
                let i = rng.gen_range(0..n);
                let j = rng.gen_range(0..n);
                let (ci, ti) = owner[i];
                let (cj, tj) = owner[j];
                let si = &self.parts[ci].1;
                let sj = &self.parts[cj].1;
                let x = si.random_rep(g, &unit(ti, si.dim()), &mut rng);
                let y = sj.random_rep(g, &unit(tj, sj.dim()), &mut rng);
                let v = self.product((&x, weights[i]), (&y, weights[j]), &offsets, n, max_weight);
                let expected = algebra.bracket(&algebra.basis_vector(i), &algebra.basis_vector(j));
                if v.as_deref() != Some(expected.as_slice()) {
                    return Err(BridgeError::RepresentativeDependence {
                        left: labels[i].clone(),
                        right: labels[j].clone(),
                    });
                }
            }
        }
        self.checks.push(format!(
            "representative independence ({REPRESENTATIVE_SAMPLES} samples)"
        ));
        algebra.audit()?;
        self.checks.push("antisymmetry and Jacobi".into());
        Ok(GradedBridgeResult {
            prime: g.prime().get(),
            d,
            group_log_order: g.log_order(),
            components: self.parts.into_iter().map(|(c, _)| c).collect(),
            algebra,
            checks: self.checks,
        })
    }
}

fn k_parts<'a>(g: &'a PcGroup, d: usize) -> Result<Graded<'a>, BridgeError> {
    let f = filtration_n(g, d)?;
    f.check_elementary_quotients(g)?;
    let mut parts = Vec::new();
    for i in f.start()..f.end() {
        let name = format!("N_{i}/N_{}", i + 1);
        let sec = Section::new(g, f.term(i), f.term(i + 1), &name)?;
        parts.push((
            Component {
                index: i,
                weight: i,
                dim: sec.dim(),
                source: name,
            },
            sec,
        ));
    }
    Ok(Graded {
        g,
        parts,
        checks: vec!["strong centrality".into(), "elementary quotients".into()],
    })
}

/// `K = ⊕ N_i/N_{i+1}` with weights equal to the filtration indices.
pub fn build_k(g: &PcGroup, d: usize) -> Result<GradedBridgeResult, BridgeError> {
    let parts = k_parts(g, d)?;
    let max_weight = parts.parts.last().map_or(1 << d, |(c, _)| c.weight);
    parts.build(d, max_weight)
}

/// `K̄ = G^(d-1)/Q ⊕ K`, after checking the containments that make the product well defined.
pub fn build_overline_k(g: &PcGroup, d: usize) -> Result<GradedBridgeResult, BridgeError> {
    if d == 0 {
        return Err(BridgeError::NeedsPositiveD);
    }
    let mut parts = k_parts(g, d)?;
    let f = filtration_n(g, d)?;
    let h = 1usize << (d - 1);
    let prev = derived_series(g)[d - 1].clone();
    let q = q_subgroup(g, d)?;
    let contained =
        |a: &Subgroup, b: &Subgroup, target: &Subgroup, name: String| -> Result<(), BridgeError> {
            let c = Subgroup::commutator_subgroup(g, a, b)?;
            if c.is_subgroup_of(g, target)? {
                Ok(())
            } else {
                Err(BridgeError::Containment(name))
            }
        };
    contained(
        &prev,
        &q,
        f.term(2 * h + 1),
        format!("[G^({}), Q] <= N_{}", d - 1, 2 * h + 1),
    )?;
    for i in f.start()..f.end() {
        contained(
            f.term(i),
            &q,
            f.term(i + h + 1),
            format!("[N_{i}, Q] <= N_{}", i + h + 1),
        )?;
    }
    parts.checks.push("Q containments".into());
    let name = format!("G^({})/Q", d - 1);
    let sec = Section::new(g, &prev, &q, &name)?;
    parts.parts.insert(
        0,
        (
            Component {
                index: h,
                weight: h,
                dim: sec.dim(),
                source: name,
            },
            sec,
        ),
    );
    let max_weight = parts.parts.last().map_or(2 * h, |(c, _)| c.weight);
    parts.build(d, max_weight)
}

/// A maximal subgroup of `G^(d+1)` that is normal in `G`.
pub fn central_hyperplane(g: &PcGroup, d: usize) -> Result<Subgroup, BridgeError> {
    let ds = derived_series(g);
    let top = ds
        .get(d + 1)
        .cloned()
        .unwrap_or_else(|| Subgroup::trivial(g));
    if top.is_trivial() {
        return Err(BridgeError::TrivialDerivedTerm(d + 1));
    }
    let whole = Subgroup::whole(g);
    let below = Subgroup::commutator_subgroup(g, &top, &whole)?.join(g, &top.power_subgroup(g)?)?;
    let sec = Section::new(g, &top, &below, "G^(d+1)/[G^(d+1),G](G^(d+1))^p")?;
    let gens: Vec<_> = sec.reps[1..].iter().map(|x| g.wrap(x.clone())).collect();
    Ok(below.join(g, &Subgroup::generated(g, &gens)?)?)
}

/// The quotient by [`central_hyperplane`], in which `|G^(d+1)| = p`.
pub fn reduce_to_order_p(g: &PcGroup, d: usize) -> Result<FactorGroup, BridgeError> {
    let m = central_hyperplane(g, d)?;
    Ok(FactorGroup::new(g, &m)?)
}

/// `L` inside `K̄`, with the dimension, derived-subalgebra and generation checks.
pub fn extract_l(kbar: &GradedBridgeResult) -> Result<GradedLieAlgebra, BridgeError> {
    if kbar.d == 0 {
        return Err(BridgeError::NeedsPositiveD);
    }
    let h = 1usize << (kbar.d - 1);
    let alg = &kbar.algebra;
    let keep: Vec<usize> = (0..alg.dim())
        .filter(|&i| matches!(alg.weights()[i] / h, 1..=4) && alg.weights()[i].is_multiple_of(h))
        .collect();
    let pos = |i: usize| keep.iter().position(|&k| k == i);
    let labels: Vec<String> = keep
        .iter()
        .map(|&i| {
            let w = alg.weights()[i] / h;
            let t = keep
                .iter()
                .filter(|&&k| k < i && alg.weights()[k] == alg.weights()[i])
                .count();
            format!("L{w}.{}", t + 1)
        })
        .collect();
    let weights: Vec<usize> = keep.iter().map(|&i| alg.weights()[i] / h).collect();
    let mut table = Vec::new();
    for &i in &keep {
        for &j in &keep {
            let entry: Vec<(usize, u32)> = if alg.weights()[i] + alg.weights()[j] > 4 * h {
                Vec::new()
            } else {
                alg.bracket_basis(i, j)
                    .iter()
                    .map(|&(k, c)| (pos(k).expect("L is a subalgebra"), c))
                    .collect()
            };
            table.push(entry);
        }
    }
    let l = GradedLieAlgebra::from_table(alg.prime(), 4, labels, weights, table)?;
    l.audit()?;
    let dims: Vec<usize> = (1..=4).map(|w| l.weight_range(w).len()).collect();
    if dims[1..] != [2, 1, 1] {
        return Err(BridgeError::Dimensions {
            dims,
            detail: "expected dim L2 = 2 and dim L3 = dim L4 = 1".into(),
        });
    }
    let second = l.derived_subalgebra(2);
    if second.dims(4) != vec![0, 0, 0, 1] {
        return Err(BridgeError::Dimensions {
            dims,
            detail: format!("L'' has dims {:?}, expected L'' = L4", second.dims(4)),
        });
    }
    let seeds: Vec<Vec<u32>> = l.weight_range(1).map(|i| l.basis_vector(i)).collect();
    if l.subalgebra_generated(&seeds).dim() != l.dim() {
        return Err(BridgeError::Dimensions {
            dims,
            detail: "L is not generated by L1".into(),
        });
    }
    Ok(l)
}

/// The full pipeline for `L`: refuse case (i), reduce to `|G^(d+1)| = p`, build `K̄`, extract.
pub fn build_l(
    g: &PcGroup,
    d: usize,
) -> Result<(GradedBridgeResult, GradedLieAlgebra), BridgeError> {
    if d == 0 {
        return Err(BridgeError::NeedsPositiveD);
    }
    let report = classify_small_quotient(g, d)?;
    if report.case == SmallQuotientCase::One {
        return Err(BridgeError::CaseOne { d });
    }
    let quotient = reduce_to_order_p(g, d)?;
    let kbar = build_overline_k(quotient.group(), d)?;
    let l = extract_l(&kbar)?;
    Ok((kbar, l))
}

/// The subring generated by `G^(d) γ_{2^d+1} / γ_{2^d+1}` in the lower-central graded ring.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LcsSubring {
    pub prime: u32,
    pub d: usize,
    pub algebra: GradedLieAlgebra,
    /// `(k, dim L_k, log_p |γ_k(G^(d)) γ_{k 2^d + 1} / γ_{k 2^d + 1}|)`.
    pub lemma_orders: Vec<(usize, usize, usize)>,
    /// `log_p |γ_{2^d} / γ_{2^d + 1}|`.
    pub lcs_log_first: usize,
    /// `log_p |γ_{3 2^d} / γ_{3 2^d + 1}|`.
    pub lcs_log_third: usize,
    /// Generator number of `G^(d+2) γ_{2^{d+2}+1} / γ_{2^{d+2}+1}`.
    pub generator_number: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LcsSummary {
    pub prime: u32,
    pub d: usize,
    pub dims: Vec<usize>,
    pub lemma_orders: Vec<(usize, usize, usize)>,
    pub lcs_log_first: usize,
    pub lcs_log_third: usize,
    pub generator_number: usize,
    pub algebra: AlgebraSnapshot,
}

impl LcsSubring {
    pub fn summary(&self) -> LcsSummary {
        LcsSummary {
            prime: self.prime,
            d: self.d,
            dims: self.algebra.dims(),
            lemma_orders: self.lemma_orders.clone(),
            lcs_log_first: self.lcs_log_first,
            lcs_log_third: self.lcs_log_third,
            generator_number: self.generator_number,
            algebra: self.algebra.snapshot(),
        }
    }
}

pub fn lcs_graded_subring(g: &PcGroup, d: usize, max_i: usize) -> Result<LcsSubring, BridgeError> {
    let ds = derived_series(g);
    let top = ds.get(d).cloned().unwrap_or_else(|| Subgroup::trivial(g));
    if top.is_trivial() {
        return Err(BridgeError::TrivialDerivedTerm(d));
    }
    let lcs = lower_central_series(g);
    let gamma = |i: usize| {
        lcs.get(i - 1)
            .cloned()
            .unwrap_or_else(|| Subgroup::trivial(g))
    };
    let step = 1usize << d;
    let mut sections: Vec<Section> = Vec::new();
    for k in 1..=max_i {
        let bottom = gamma(k * step + 1);
        let name = format!("L_{k} in γ_{}/γ_{}", k * step, k * step + 1);
        let upper = if k == 1 {
            top.join(g, &bottom)?
        } else {
            let mut seeds = Vec::new();
            for a in &sections[k - 2].reps {
                for b in &sections[0].reps {
                    seeds.push(g.wrap(g.comm(a, b)));
                }
            }
            bottom.join(g, &Subgroup::generated(g, &seeds)?)?
        };
        sections.push(Section::new(g, &upper, &bottom, &name)?);
    }

    let mut labels = Vec::new();
    let mut weights = Vec::new();
    let mut owner = Vec::new();
    let mut offsets = Vec::new();
    for (k, sec) in sections.iter().enumerate() {
        offsets.push(labels.len());
        for t in 0..sec.dim() {
            labels.push(format!("L{}.{}", k + 1, t + 1));
            weights.push(k + 1);
            owner.push((k, t));
        }
    }
    let n = labels.len();
    let mut table = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            let (ki, ti) = owner[i];
            let (kj, tj) = owner[j];
            let w = ki + kj + 2;
            let mut v = vec![0; n];
            if w <= max_i {
                let c = g.comm(&sections[ki].reps[ti], &sections[kj].reps[tj]);
                let coords = sections[w - 1]
                    .coords(g, &c)
                    .ok_or_else(|| BridgeError::Grading {
                        left: labels[i].clone(),
                        right: labels[j].clone(),
                    })?;
                v[offsets[w - 1]..offsets[w - 1] + coords.len()].copy_from_slice(&coords);
            }
            table.push(
                v.iter()
                    .enumerate()
                    .filter(|(_, &a)| a != 0)
                    .map(|(k, &a)| (k, a))
                    .collect(),
            );
        }
    }
    let algebra = GradedLieAlgebra::from_table(g.prime(), max_i, labels, weights, table)?;
    algebra.audit()?;

    let inner = lower_central_series_of(g, &top);
    let mut lemma_orders = Vec::new();
    for (k, sec) in sections.iter().enumerate() {
        let k = k + 1;
        let bottom = gamma(k * step + 1);
        let term = inner
            .get(k - 1)
            .cloned()
            .unwrap_or_else(|| Subgroup::trivial(g));
        let group_log = term.join(g, &bottom)?.log_order() - bottom.log_order();
        if group_log != sec.dim() {
            return Err(BridgeError::Mismatch(format!(
                "dim L_{k} = {} but γ_{k}(G^({d})) gives p^{group_log}",
                sec.dim()
            )));
        }
        lemma_orders.push((k, sec.dim(), group_log));
    }

    let log_quotient = |i: usize| gamma(i).log_order() - gamma(i + 1).log_order();
    let far = gamma(4 * step + 1);
    let d2 = ds
        .get(d + 2)
        .cloned()
        .unwrap_or_else(|| Subgroup::trivial(g))
        .join(g, &far)?;
    Ok(LcsSubring {
        prime: g.prime().get(),
        d,
        algebra,
        lemma_orders,
        lcs_log_first: log_quotient(step),
        lcs_log_third: log_quotient(3 * step),
        generator_number: generator_number(g, &d2, &far)?,
    })
}
