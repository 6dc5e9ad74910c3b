//! Exhaustive search over the three-generator family with `L_3 = <[x,y,z]>`.
//!
//! Each tuple `(a_1..a_7)` gives relators `B_i - a_i [x,y,z]` with `B_i` from
//! [`ALPHA_BRACKETS`], truncated at weight 4. A tuple is a solution when the quotient has
//! `dim L_1 = 3`, `dim L_3 = 1` and `dim (L'' ∩ L_4) >= 3`.
//!
//! The sweep uses an exact weight-4 screen and confirms every survivor with
//! [`nilpotent_quotient`]. With no relators below weight 3, `L''` meets weight 4 in
//! `[L_2, L_2]`, and the weight-4 ideal is spanned by `[r_i, g]`, so the screen is a rank
//! computation on 24 vectors of length `dim F_4 = 18`.

use rayon::prelude::*;
use serde::Serialize;

use crate::field_linalg::{Prime, Subspace};
use crate::free_lie::{BracketExpr, FreeLieAlgebra, LieElement};

use super::presentation::LiePresentation;
use super::quotient::{nilpotent_quotient, NilpotentQuotient, NqError};

/// The seven left-normed brackets `B_1..B_7` paired with the parameters.
pub const ALPHA_BRACKETS: [[&str; 3]; 7] = [
    ["y", "x", "x"],
    ["y", "x", "y"],
    ["z", "x", "x"],
    ["z", "x", "z"],
    ["z", "y", "x"],
    ["z", "y", "y"],
    ["z", "y", "z"],
];

const CLASS: usize = 4;

/// The presentation for one parameter tuple.
pub fn alpha_presentation(p: Prime, alpha: &[u32; 7]) -> LiePresentation {
    let t = BracketExpr::left_normed(&["x", "y", "z"]);
    let relators = ALPHA_BRACKETS
        .iter()
        .zip(alpha)
        .map(|(b, &a)| BracketExpr::left_normed(b).minus(t.clone().scaled(a as i64)))
        .collect();
    LiePresentation::unit_weights(p, &["x", "y", "z"], relators, CLASS)
}

/// Whether a quotient meets the dimension conditions of the search.
pub fn meets_dimension_conditions(q: &NilpotentQuotient) -> bool {
    let alg = q.algebra();
    let dims = alg.dims();
    dims.first() == Some(&3) && dims.get(2) == Some(&1) && alg.derived_subalgebra(2).dim_at(4) >= 3
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SearchReport {
    pub prime: u32,
    pub tuples: u64,
    /// Tuples passing the weight-4 screen.
    pub screened: usize,
    /// Sorted solutions, each confirmed by a full quotient computation.
    pub solutions: Vec<[u32; 7]>,
}

/// Sorted list of all solution tuples over F_p.
pub fn liedims_search(p: Prime) -> Result<Vec<[u32; 7]>, NqError> {
    Ok(liedims_search_report(p)?.solutions)
}

pub fn liedims_search_report(p: Prime) -> Result<SearchReport, NqError> {
    let screen = Screen::new(p)?;
    let q = p.get() as u64;
    let tuples = q.pow(7);
    let mut screened: Vec<[u32; 7]> = (0..tuples)
        .into_par_iter()
        .map(|code| decode(code, q))
        .filter(|alpha| screen.passes(alpha))
        .collect();
    screened.sort_unstable();
    let mut solutions = Vec::new();
    for alpha in &screened {
        if meets_dimension_conditions(&nilpotent_quotient(&alpha_presentation(p, alpha))?) {
            solutions.push(*alpha);
        }
    }
    Ok(SearchReport {
        prime: p.get(),
        tuples,
        screened: screened.len(),
        solutions,
    })
}

fn decode(mut code: u64, q: u64) -> [u32; 7] {
    let mut alpha = [0u32; 7];
    for a in alpha.iter_mut().rev() {
        *a = (code % q) as u32;
        code /= q;
    }
    alpha
}

struct Screen {
    p: Prime,
    len: usize,
    /// `[B_i, g]` in weight-4 coordinates, indexed `[i][g]`.
    bg: Vec<Vec<Vec<u32>>>,
    /// `[[x,y,z], g]`.
    tg: Vec<Vec<u32>>,
    /// Brackets of pairs of weight-2 basis elements.
    l2l2: Vec<Vec<u32>>,
}

impl Screen {
    fn new(p: Prime) -> Result<Self, NqError> {
        let free = FreeLieAlgebra::with_unit_weights(p, 3, CLASS)?;
        let r4 = free.weight_range(4);
        let local = |e: &LieElement| {
            let mut v = vec![0; r4.len()];
            for (i, c) in e.terms() {
                v[i - r4.start] = c;
            }
            v
        };
        let gens: Vec<LieElement> = (0..3)
            .map(|g| LieElement::basis(free.generator_basis_index(g)))
            .collect();
        let with_gens = |e: &LieElement| {
            gens.iter()
                .map(|g| local(&free.bracket(e, g)))
                .collect::<Vec<_>>()
        };
        let mut bg = Vec::new();
        for b in ALPHA_BRACKETS {
            bg.push(with_gens(
                &free.normalize(&BracketExpr::left_normed(&b))?.element,
            ));
        }
        let tg = with_gens(
            &free
                .normalize(&BracketExpr::left_normed(&["x", "y", "z"]))?
                .element,
        );
        let r2: Vec<usize> = free.weight_range(2).collect();
        let mut l2l2 = Vec::new();
        for (k, &u) in r2.iter().enumerate() {
            for &v in &r2[k + 1..] {
                l2l2.push(local(&free.bracket_basis(u, v)));
            }
        }
        Ok(Screen {
            p,
            len: r4.len(),
            bg,
            tg,
            l2l2,
        })
    }

    fn passes(&self, alpha: &[u32; 7]) -> bool {
        let p = self.p;
        let mut ideal = Subspace::new(p, self.len);
        for (i, &a) in alpha.iter().enumerate() {
            for (b, t) in self.bg[i].iter().zip(&self.tg) {
                let row = b
                    .iter()
                    .zip(t)
                    .map(|(&x, &y)| p.sub(x, p.mul(a, y)))
                    .collect();
                ideal.insert(row);
            }
        }
        self.l2l2.iter().all(|v| ideal.insert(v.clone()))
    }
}
