use thiserror::Error;

use crate::field_linalg::{is_zero_vec, Subspace};
use crate::free_lie::{BracketExpr, FreeLieAlgebra, FreeLieError, LieElement};

use super::algebra::{EvalError, GradedLieAlgebra, StructureError};
use super::presentation::LiePresentation;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NqError {
    #[error("relator '{0}' is not homogeneous")]
    InhomogeneousRelator(String),
    #[error(transparent)]
    FreeLie(#[from] FreeLieError),
    #[error(transparent)]
    Structure(#[from] StructureError),
    #[error(transparent)]
    Eval(#[from] EvalError),
}

/// The class-`c` quotient of a graded presentation, with the data needed to map free
/// elements into it.
#[derive(Debug, Clone)]
pub struct NilpotentQuotient {
    presentation: LiePresentation,
    free: FreeLieAlgebra,
    algebra: GradedLieAlgebra,
    /// Ideal component at each weight, in local coordinates of the free weight component.
    ideal: Vec<Subspace>,
    /// Free basis index of each quotient basis element.
    survivors: Vec<usize>,
    /// Quotient index of each free basis element that survives.
    position: Vec<Option<usize>>,
}

/// Computes the largest class-`c` quotient of the free algebra by the graded ideal of the
/// relators, weight by weight.
pub fn nilpotent_quotient(pres: &LiePresentation) -> Result<NilpotentQuotient, NqError> {
    let free = FreeLieAlgebra::new(pres.prime, pres.generators.clone(), pres.class)?;
    let relators = normalize_relators(&free, &pres.relators)?;
    Ok(quotient_of_free(pres.clone(), free, &relators)?)
}

/// Normalizes relators into the free algebra, rejecting inhomogeneous ones.
/// Relators of weight above the truncation vanish and are dropped.
pub(crate) fn normalize_relators(
    free: &FreeLieAlgebra,
    relators: &[BracketExpr],
) -> Result<Vec<LieElement>, NqError> {
    let weight_of = |n: &str| free.generator_index(n).map(|g| free.generators()[g].weight);
    let mut out = Vec::with_capacity(relators.len());
    for r in relators {
        if r.homogeneous_weight(&weight_of).is_none() {
            for name in r.names() {
                if free.generator_index(name).is_none() {
                    return Err(FreeLieError::UnknownGenerator(name.to_string()).into());
                }
            }
            return Err(NqError::InhomogeneousRelator(r.to_string()));
        }
        out.push(free.normalize(r)?.element);
    }
    Ok(out)
}

pub(crate) fn quotient_of_free(
    presentation: LiePresentation,
    free: FreeLieAlgebra,
    relators: &[LieElement],
) -> Result<NilpotentQuotient, StructureError> {
    let p = free.prime();
    let c = free.max_weight();
    let gens: Vec<(usize, usize)> = (0..free.generators().len())
        .map(|g| (free.generator_basis_index(g), free.generators()[g].weight))
        .collect();

    let mut ideal: Vec<Subspace> = (0..=c)
        .map(|w| Subspace::new(p, free.weight_range(w).len()))
        .collect();
    for r in relators {
        if let Some(w) = free.weight_of(r) {
            let start = free.weight_range(w).start;
            let mut local = vec![0; free.weight_range(w).len()];
            for (i, k) in r.terms() {
                local[i - start] = k;
            }
            ideal[w].insert(local);
        }
    }
    for w in 1..=c {
        let start = free.weight_range(w).start;
        let rows: Vec<Vec<u32>> = ideal[w].basis().to_vec();
        for row in rows {
            let mut elem = LieElement::zero();
            for (k, &a) in row.iter().enumerate().filter(|(_, &a)| a != 0) {
                elem.add_term(p, start + k, a);
            }
            for &(g, gw) in &gens {
                if w + gw > c {
                    continue;
                }
                let prod = free.bracket(&elem, &LieElement::basis(g));
                if prod.is_zero() {
                    continue;
                }
                let target = free.weight_range(w + gw);
                let mut local = vec![0; target.len()];
                for (i, k) in prod.terms() {
                    local[i - target.start] = k;
                }
                ideal[w + gw].insert(local);
            }
        }
    }

    let mut survivors = Vec::new();
    let mut position = vec![None; free.dim()];
    for (w, space) in ideal.iter().enumerate().skip(1) {
        let range = free.weight_range(w);
        let mut pivot = vec![false; range.len()];
        for &q in space.pivots() {
            pivot[q] = true;
        }
        for (local, is_pivot) in pivot.into_iter().enumerate() {
            if !is_pivot {
                position[range.start + local] = Some(survivors.len());
                survivors.push(range.start + local);
            }
        }
    }

    let labels = survivors.iter().map(|&i| free.label(i)).collect();
    let weights: Vec<usize> = survivors.iter().map(|&i| free.basis()[i].weight).collect();
    let n = survivors.len();
    let project = |e: &LieElement| project_with(&free, &ideal, &position, n, e);
    let algebra = GradedLieAlgebra::from_fn(p, c, labels, weights, |i, j| {
        project(&free.bracket_basis(survivors[i], survivors[j]))
    })?;
    Ok(NilpotentQuotient {
        presentation,
        free,
        algebra,
        ideal,
        survivors,
        position,
    })
}

fn project_with(
    free: &FreeLieAlgebra,
    ideal: &[Subspace],
    position: &[Option<usize>],
    n: usize,
    e: &LieElement,
) -> Vec<u32> {
    let mut out = vec![0; n];
    for (w, layer) in ideal.iter().enumerate().take(free.max_weight() + 1).skip(1) {
        let range = free.weight_range(w);
        let mut local = vec![0; range.len()];
        let mut any = false;
        for (i, c) in e.terms().filter(|(i, _)| range.contains(i)) {
            local[i - range.start] = c;
            any = true;
        }
        if !any {
            continue;
        }
        layer.reduce_in_place(&mut local);
        for (k, &c) in local.iter().enumerate() {
            if c != 0 {
                let q = position[range.start + k].expect("reduced vector supported off the pivots");
                out[q] = c;
            }
        }
    }
    out
}

impl NilpotentQuotient {
    pub fn algebra(&self) -> &GradedLieAlgebra {
        &self.algebra
    }

    pub fn into_algebra(self) -> GradedLieAlgebra {
        self.algebra
    }

    pub fn presentation(&self) -> &LiePresentation {
        &self.presentation
    }

    pub fn free(&self) -> &FreeLieAlgebra {
        &self.free
    }

    pub fn dims(&self) -> Vec<usize> {
        self.algebra.dims()
    }

    pub fn free_dims(&self) -> Vec<usize> {
        self.free.dims()
    }

    /// Dimension of the ideal at each weight `1..=c`.
    pub fn ideal_dims(&self) -> Vec<usize> {
        self.ideal[1..].iter().map(Subspace::dim).collect()
    }

    /// Free basis index behind each quotient basis element.
    pub fn survivors(&self) -> &[usize] {
        &self.survivors
    }

    /// Image of a free element in the quotient.
    pub fn project(&self, e: &LieElement) -> Vec<u32> {
        project_with(
            &self.free,
            &self.ideal,
            &self.position,
            self.survivors.len(),
            e,
        )
    }

    /// Image of the named generator.
    pub fn generator_image(&self, name: &str) -> Option<Vec<u32>> {
        let g = self.free.generator_index(name)?;
        Some(self.project(&LieElement::basis(self.free.generator_basis_index(g))))
    }

    /// Evaluates an expression in the quotient, resolving names to generator images.
    pub fn evaluate(&self, expr: &BracketExpr) -> Result<Vec<u32>, EvalError> {
        self.algebra.evaluate(expr, &|n| self.generator_image(n))
    }

    pub fn is_zero(&self, expr: &BracketExpr) -> Result<bool, EvalError> {
        Ok(is_zero_vec(&self.evaluate(expr)?))
    }
}
