//! Lower bounds for `log_p |G|` in terms of the derived length, and a line-by-line replay of
//! the case analysis behind [`main_bound`].

use serde::Serialize;
use thiserror::Error;

use crate::graded_bridge::LcsSubring;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BoundsError {
    #[error("{what} needs d >= {min}, got {d}")]
    DTooSmall {
        what: &'static str,
        min: usize,
        d: usize,
    },
    #[error("the {variant} chain bound needs e >= {min}, got {e}")]
    ERange {
        variant: ChainVariant,
        min: usize,
        e: usize,
    },
    #[error("branch {branch}: total {total} is below the bound {bound}")]
    BranchBelowBound {
        branch: String,
        total: i64,
        bound: i64,
    },
    #[error("branch {branch}: line items sum to {total}, closed form gives {closed}")]
    ClosedFormMismatch {
        branch: String,
        total: i64,
        closed: i64,
    },
}

fn pow2(e: usize) -> i64 {
    1i64 << e
}

/// Hall: `G^(d) != 1` implies `log_p |G| >= 2^d + d`.
pub fn hall_bound(d: usize) -> i64 {
    pow2(d) + d as i64
}

/// Mann: `2^d + 2d - 2`.
pub fn mann_bound(d: usize) -> Result<i64, BoundsError> {
    if d < 1 {
        return Err(BoundsError::DTooSmall {
            what: "mann_bound",
            min: 1,
            d,
        });
    }
    Ok(pow2(d) + 2 * d as i64 - 2)
}

/// `2^d + 3d - 6`.
pub fn main_bound(d: usize) -> Result<i64, BoundsError> {
    if d < 1 {
        return Err(BoundsError::DTooSmall {
            what: "main_bound",
            min: 1,
            d,
        });
    }
    Ok(pow2(d) + 3 * d as i64 - 6)
}

/// `log_p |G^(d)/G^(d+1)|` of a small derived quotient: `2^d + 1`.
pub fn small_quotient_threshold(d: usize) -> i64 {
    pow2(d) + 1
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ChainVariant {
    /// `G^(d) γ_{2^d+1} / γ_{2^d+1}` cyclic.
    Cyclic,
    /// `G^(d) γ_{2^d+1} / γ_{2^d+1}` generated by two elements.
    TwoGenerated,
}

impl std::fmt::Display for ChainVariant {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            ChainVariant::Cyclic => "cyclic",
            ChainVariant::TwoGenerated => "two-generated",
        })
    }
}

/// Lower bound for `log_p |G^(d+e)/G^(d+e+1)|`: `2^{d+e} + 2^{e-1} + 1` in the cyclic case,
/// `2^{d+e} + 2^{e-2} + 1` in the two-generated case.
pub fn smalls_chain_bound(d: usize, e: usize, variant: ChainVariant) -> Result<i64, BoundsError> {
    let shift = match variant {
        ChainVariant::Cyclic => 1,
        ChainVariant::TwoGenerated => 2,
    };
    if e < shift {
        return Err(BoundsError::ERange {
            variant,
            min: shift,
            e,
        });
    }
    Ok(pow2(d + e) + pow2(e - shift) + 1)
}

/// One inequality of a branch.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LineItem {
    pub what: String,
    pub value: i64,
}

/// One branch of the case analysis: the level `k` and the position of `d` relative to it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Branch {
    pub k: usize,
    pub case: String,
    pub items: Vec<LineItem>,
    pub total: i64,
    /// The closed form the text states for this branch.
    pub closed_form: String,
    pub closed_value: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoundProfile {
    pub d: usize,
    pub hall: i64,
    pub mann: i64,
    pub main: i64,
    /// Hall's bound `2^i + 1` on `log_p |G^(i)/G^(i+1)|` for `i < d`.
    pub quotient_bounds: Vec<i64>,
    pub branches: Vec<Branch>,
    pub minimum: i64,
    /// Branch attaining the minimum, as `k=.. case`.
    pub binding: String,
}

struct Items(Vec<LineItem>);

impl Items {
    fn push(&mut self, what: impl Into<String>, value: i64) {
        self.0.push(LineItem {
            what: what.into(),
            value,
        });
    }

    fn total(&self) -> i64 {
        self.0.iter().map(|i| i.value).sum()
    }
}

fn chain(d: usize, e: usize, variant: ChainVariant) -> i64 {
    smalls_chain_bound(d, e, variant).expect("e is in range by construction")
}

fn branch(d: usize, k: usize) -> Branch {
    let di = d as i64;
    let ki = k as i64;
    let mut it = Items(Vec::new());
    let (case, closed_form, closed_value) = match k {
        0 => {
            it.push("G/G' >= 2^0+1", 2);
            it.push("G'/G'' >= 2^1+1", 3);
            for i in 2..d {
                it.push(
                    format!(
                        "G^({i})/G^({}) >= 2^{i}+2^{}+1 (two-generated)",
                        i + 1,
                        i - 2
                    ),
                    chain(0, i, ChainVariant::TwoGenerated),
                );
            }
            it.push("G^(d) != 1", 1);
            (
                "two-generated G",
                "2^d+2^(d-2)+d-1",
                pow2(d) + pow2(d - 2) + di - 1,
            )
        }
        1 => {
            it.push("G/G' >= 3 (generator number >= 3)", 3);
            it.push("G'/G'' >= 2^1+1", 3);
            it.push("G''/G''' >= 2^2+1", 5);
            for i in 3..d {
                it.push(
                    format!(
                        "G^({i})/G^({}) >= 2^{i}+2^{}+1 (two-generated)",
                        i + 1,
                        i - 3
                    ),
                    chain(1, i - 1, ChainVariant::TwoGenerated),
                );
            }
            it.push("G^(d) != 1", 1);
            ("k=1", "2^d+2^(d-3)+d", pow2(d) + pow2(d - 3) + di)
        }
        2 => {
            it.push("G/G' >= 2^0+2", 3);
            it.push("G'/G'' >= 2^1+2", 4);
            it.push("G''/G''' >= 5", 5);
            it.push("G'''/G'''' >= 9", 9);
            it.push("either G''/G''' >= 6 or G'''/G'''' >= 10", 1);
            for i in 4..d {
                it.push(
                    format!(
                        "G^({i})/G^({}) >= 2^{i}+2^{}+1 (two-generated)",
                        i + 1,
                        i - 4
                    ),
                    chain(2, i - 2, ChainVariant::TwoGenerated),
                );
            }
            it.push("G^(d) != 1", 1);
            ("k=2", "2^d+2^(d-4)+d+2", pow2(d) + pow2(d - 4) + di + 2)
        }
        _ => {
            if d + 1 == k {
                it.push(
                    "G >= 2^(k-1)+3k-2 (generator numbers >= 3 up to k-1)",
                    pow2(k - 1) + 3 * ki - 2,
                );
                ("d=k-1", "2^d+3d+1", pow2(d) + 3 * di + 1)
            } else {
                it.push("G/G^(k-1) >= 2^(k-1)+3k-5", pow2(k - 1) + 3 * ki - 5);
                it.push("G^(k-1)/G^(k) >= 2^(k-1)+2", pow2(k - 1) + 2);
                if d == k {
                    it.push("G^(d) != 1", 1);
                    ("d=k", "2^d+3d-2", pow2(d) + 3 * di - 2)
                } else {
                    it.push("G^(k)/G^(k+1) >= 2^k+1", pow2(k) + 1);
                    if d == k + 1 {
                        it.push("G^(d) != 1", 1);
                        ("d=k+1", "2^d+3d-4", pow2(d) + 3 * di - 4)
                    } else {
                        it.push("G^(k+1)/G^(k+2) >= 2^(k+1)+1", pow2(k + 1) + 1);
                        it.push(
                            "either G^(k)/G^(k+1) >= 2^k+2 or G^(k+1)/G^(k+2) >= 2^(k+1)+2",
                            1,
                        );
                        if d == k + 2 {
                            it.push("G^(d) != 1", 1);
                            ("d=k+2", "2^d+3d-5", pow2(d) + 3 * di - 5)
                        } else {
                            it.push("G^(k+2)/G^(k+3) >= 2^(k+2)+2", pow2(k + 2) + 2);
                            if d == k + 3 {
                                it.push("G^(d) != 1", 1);
                                ("d=k+3", "2^(k+3)+3k+3", pow2(k + 3) + 3 * ki + 3)
                            } else {
                                for i in k + 3..d {
                                    it.push(
                                        format!("G^({i})/G^({}) >= 2^{i}+3", i + 1),
                                        pow2(i) + 3,
                                    );
                                }
                                it.push("G^(d) != 1", 1);
                                ("d>=k+4", "2^d+3d-6", pow2(d) + 3 * di - 6)
                            }
                        }
                    }
                }
            }
        }
    };
    Branch {
        k,
        case: case.to_string(),
        total: it.total(),
        items: it.0,
        closed_form: closed_form.to_string(),
        closed_value,
    }
}

/// Replays every branch for `d >= 5`, checks each against its stated closed form and against
/// [`main_bound`], and reports the minimum.
pub fn section7_verify(d: usize) -> Result<BoundProfile, BoundsError> {
    if d < 5 {
        return Err(BoundsError::DTooSmall {
            what: "section7_verify",
            min: 5,
            d,
        });
    }
    let main = main_bound(d)?;
    let branches: Vec<Branch> = (0..=d + 1).map(|k| branch(d, k)).collect();
    for b in &branches {
        let name = format!("k={} {}", b.k, b.case);
        if b.total != b.closed_value {
            return Err(BoundsError::ClosedFormMismatch {
                branch: name,
                total: b.total,
                closed: b.closed_value,
            });
        }
        if b.total < main {
            return Err(BoundsError::BranchBelowBound {
                branch: name,
                total: b.total,
                bound: main,
            });
        }
    }
    let low = branches
        .iter()
        .min_by_key(|b| b.total)
        .expect("at least one branch");
    Ok(BoundProfile {
        d,
        hall: hall_bound(d),
        mann: mann_bound(d)?,
        main,
        quotient_bounds: (0..d).map(small_quotient_threshold).collect(),
        minimum: low.total,
        binding: format!("k={} {}", low.k, low.case),
        branches,
    })
}

/// Measured hypotheses and conclusions of the `p != 3` dichotomy for one group and level.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DichotomyInput {
    pub prime: u32,
    pub d: usize,
    /// `G^(d) γ_{2^d+1} / γ_{2^d+1}` has exponent `p`.
    pub first_component_elementary: bool,
    /// Generator number of `G^(d+2) γ_{2^{d+2}+1} / γ_{2^{d+2}+1}`.
    pub generator_number: usize,
    /// `log_p |γ_{2^d} / γ_{2^d+1}|`.
    pub lcs_log_first: usize,
    /// `log_p |γ_{3 2^d} / γ_{3 2^d+1}|`.
    pub lcs_log_third: usize,
}

impl From<&LcsSubring> for DichotomyInput {
    fn from(r: &LcsSubring) -> Self {
        DichotomyInput {
            prime: r.prime,
            d: r.d,
            first_component_elementary: true,
            generator_number: r.generator_number,
            lcs_log_first: r.lcs_log_first,
            lcs_log_third: r.lcs_log_third,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum DichotomyVerdict {
    Inapplicable {
        reason: String,
    },
    /// At least one horn holds.
    Holds {
        first: bool,
        third: bool,
    },
    /// Hypotheses hold and neither horn does.
    Violated,
}

/// Either `|γ_{2^d}/γ_{2^d+1}| >= p^4` or `|γ_{3 2^d}/γ_{3 2^d+1}| >= p^2`, when `p != 3`,
/// the first component has exponent `p` and the generator number is at least 3.
pub fn p3_dichotomy_check(input: &DichotomyInput) -> DichotomyVerdict {
    let reason = if input.prime == 3 {
        Some("p = 3 is excluded".to_string())
    } else if !input.first_component_elementary {
        Some("first component does not have exponent p".to_string())
    } else if input.generator_number < 3 {
        Some(format!(
            "generator number {} is below 3",
            input.generator_number
        ))
    } else {
        None
    };
    if let Some(reason) = reason {
        return DichotomyVerdict::Inapplicable { reason };
    }
    let first = input.lcs_log_first >= 4;
    let third = input.lcs_log_third >= 2;
    if first || third {
        DichotomyVerdict::Holds { first, third }
    } else {
        DichotomyVerdict::Violated
    }
}

/// One row of the bounds table.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoundRow {
    pub d: usize,
    pub hall: i64,
    pub mann: Option<i64>,
    pub main: Option<i64>,
    pub small_quotient: i64,
}

pub fn bounds_table(d_min: usize, d_max: usize) -> Vec<BoundRow> {
    (d_min..=d_max)
        .map(|d| BoundRow {
            d,
            hall: hall_bound(d),
            mann: mann_bound(d).ok(),
            main: main_bound(d).ok(),
            small_quotient: small_quotient_threshold(d),
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn branches_for_d5() {
        let p = section7_verify(5).unwrap();
        assert_eq!(p.branches.len(), 7);
        assert_eq!(p.minimum, 41);
        let totals: Vec<i64> = p.branches.iter().map(|b| b.total).collect();
        assert_eq!(totals, vec![44, 41, 41, 42, 43, 45, 48]);
    }
}
