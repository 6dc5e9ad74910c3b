use serde::Serialize;

use super::subgroup::{Closure, Subgroup};
use super::{PcError, PcGroup};

/// `G = G^(0) > G' > ... > 1`, ending with the trivial subgroup.
pub fn derived_series(g: &PcGroup) -> Vec<Subgroup> {
    let whole = Subgroup::whole(g);
    let mut out = vec![whole.clone()];
    while !out.last().unwrap().is_trivial() {
        let h = out.last().unwrap();
        let next = Subgroup::commutator_in(g, h, h, &whole);
        if &next == h {
            break;
        }
        out.push(next);
    }
    out
}

/// `gamma_1 = G`, `gamma_{k+1} = [gamma_k, G]`, ending with the trivial subgroup.
pub fn lower_central_series(g: &PcGroup) -> Vec<Subgroup> {
    lower_central_series_of(g, &Subgroup::whole(g))
}

/// Lower central series of a subgroup `h`, computed inside `h`.
pub(crate) fn lower_central_series_of(g: &PcGroup, h: &Subgroup) -> Vec<Subgroup> {
    let mut out = vec![h.clone()];
    while !out.last().unwrap().is_trivial() {
        let next = Subgroup::commutator_in(g, out.last().unwrap(), h, h);
        if &next == out.last().unwrap() {
            break;
        }
        out.push(next);
    }
    out
}

/// `N_{2^d} = G^(d)` and `N_{k+1} = [N_k, G]`, down to the trivial subgroup.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Filtration {
    d: usize,
    terms: Vec<Subgroup>,
}

impl Filtration {
    pub fn d(&self) -> usize {
        self.d
    }

    /// Index of the first term, `2^d`.
    pub fn start(&self) -> usize {
        1 << self.d
    }

    /// Index of the first trivial term.
    pub fn end(&self) -> usize {
        self.start() + self.terms.len() - 1
    }

    /// `N_i`; trivial beyond the end. Panics for `i < 2^d`.
    pub fn term(&self, i: usize) -> &Subgroup {
        assert!(
            i >= self.start(),
            "N_{i} is below the start of the filtration"
        );
        let k = (i - self.start()).min(self.terms.len() - 1);
        &self.terms[k]
    }

    pub fn terms(&self) -> &[Subgroup] {
        &self.terms
    }

    /// `log_p |N_i / N_{i+1}|` for `i = 2^d .. end-1`.
    pub fn quotient_logs(&self) -> Vec<(usize, usize)> {
        (self.start()..self.end())
            .map(|i| (i, self.term(i).log_order() - self.term(i + 1).log_order()))
            .collect()
    }

    /// `[N_j, N_k] <= N_{j+k}` for all indices.
    pub fn check_strong_centrality(&self, g: &PcGroup) -> Result<(), PcError> {
        for j in self.start()..self.end() {
            for k in j..self.end() {
                let target = self.term(j + k);
                for x in self.term(j).igs() {
                    for y in self.term(k).igs() {
                        if !target.contains_raw(g, &g.comm(x, y)) {
                            return Err(PcError::CheckFailed(format!(
                                "[N_{j}, N_{k}] is not contained in N_{}",
                                j + k
                            )));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// Every `N_i / N_{i+1}` is elementary abelian.
    pub fn check_elementary_quotients(&self, g: &PcGroup) -> Result<(), PcError> {
        let p = g.prime().get() as u64;
        for i in self.start()..self.end() {
            let below = self.term(i + 1);
            let gens = self.term(i).igs();
            let ok = gens.iter().all(|x| below.contains_raw(g, &g.pow(x, p)))
                && gens
                    .iter()
                    .all(|x| gens.iter().all(|y| below.contains_raw(g, &g.comm(x, y))));
            if !ok {
                return Err(PcError::CheckFailed(format!(
                    "N_{i}/N_{} is not elementary abelian",
                    i + 1
                )));
            }
        }
        Ok(())
    }

    /// `N_{2^d+1} = G^(d) ∩ gamma_{2^d+1}(G)`.
    pub fn check_intersection_identity(&self, g: &PcGroup) -> Result<(), PcError> {
        let lcs = lower_central_series(g);
        let idx = self.start() + 1;
        let gamma = lcs
            .get(idx - 1)
            .cloned()
            .unwrap_or_else(|| Subgroup::trivial(g));
        let meet = self.term(self.start()).intersection(g, &gamma)?;
        if &meet != self.term(idx) {
            return Err(PcError::CheckFailed(format!(
                "N_{idx} differs from G^({}) ∩ gamma_{idx}(G)",
                self.d
            )));
        }
        Ok(())
    }
}

/// The filtration on `G^(d)`, with strong centrality verified.
pub fn filtration_n(g: &PcGroup, d: usize) -> Result<Filtration, PcError> {
    let ds = derived_series(g);
    let top = ds.get(d).cloned().unwrap_or_else(|| Subgroup::trivial(g));
    if top.is_trivial() {
        return Err(PcError::TrivialDerivedTerm { d });
    }
    let whole = Subgroup::whole(g);
    let mut terms = vec![top];
    while !terms.last().unwrap().is_trivial() {
        let next = Subgroup::commutator_in(g, terms.last().unwrap(), &whole, &whole);
        terms.push(next);
    }
    let f = Filtration { d, terms };
    f.check_strong_centrality(g)?;
    Ok(f)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SmallQuotientCase {
    /// Every `N_i/N_{i+1}` for `2^d <= i <= 2^{d+1}` has order `p`, and `G^(d+1) = N_{2^{d+1}+1}`.
    One,
    /// `|G^(d)/N_{2^d+1}| = p^2`, later quotients up to `2^{d+1}-1` have order `p`, and
    /// `G^(d+1) = N_{2^{d+1}}`.
    Two,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SmallQuotientReport {
    pub d: usize,
    pub case: SmallQuotientCase,
    /// `log_p |G^(d)/G^(d+1)|`.
    pub derived_quotient_log: usize,
    /// `log_p |G^(d)/[G^(d), G]|`.
    pub top_quotient_log: usize,
    /// `(i, log_p |N_i/N_{i+1}|)` over the whole filtration.
    pub quotient_logs: Vec<(usize, usize)>,
}

/// Decides which alternative of the small-quotient dichotomy holds for `G^(d)`.
pub fn classify_small_quotient(g: &PcGroup, d: usize) -> Result<SmallQuotientReport, PcError> {
    let ds = derived_series(g);
    let trivial = Subgroup::trivial(g);
    let top = ds.get(d).unwrap_or(&trivial);
    let next = ds.get(d + 1).unwrap_or(&trivial);
    let measured = top.log_order() - next.log_order();
    let expected = (1usize << d) + 1;
    if next.is_trivial() || measured != expected {
        return Err(PcError::NotSmall {
            d,
            next: d + 1,
            measured,
            expected,
        });
    }
    let f = filtration_n(g, d)?;
    let s = f.start();
    let logs = f.quotient_logs();
    let log_at = |i: usize| if i < f.end() { logs[i - s].1 } else { 0 };
    let top_quotient_log = log_at(s);
    if !(1..=2).contains(&top_quotient_log) {
        return Err(PcError::CheckFailed(format!(
            "G^({d})/[G^({d}),G] has order p^{top_quotient_log}, expected p or p^2"
        )));
    }
    let case_one = (s..=2 * s).all(|i| log_at(i) == 1) && f.term(2 * s + 1) == next;
    let case_two =
        top_quotient_log == 2 && (s + 1..2 * s).all(|i| log_at(i) == 1) && f.term(2 * s) == next;
    let case = match (case_one, case_two) {
        (true, false) => SmallQuotientCase::One,
        (false, true) => SmallQuotientCase::Two,
        _ => {
            return Err(PcError::CheckFailed(format!(
                "filtration quotients {logs:?} match {} of the two cases",
                if case_one { "both" } else { "neither" }
            )))
        }
    };
    Ok(SmallQuotientReport {
        d,
        case,
        derived_quotient_log: measured,
        top_quotient_log,
        quotient_logs: logs,
    })
}

/// `log_p |X / Y [X,X] X^p|`, the generator number of `X/Y` for `Y` normal in `X`.
pub fn generator_number(g: &PcGroup, x: &Subgroup, y: &Subgroup) -> Result<usize, PcError> {
    if !y.is_subgroup_of(g, x)? {
        return Err(PcError::CheckFailed("Y is not contained in X".into()));
    }
    let p = g.prime().get() as u64;
    let xs = x.igs();
    let mut seeds: Vec<Vec<u32>> = y.igs().to_vec();
    for (i, a) in xs.iter().enumerate() {
        seeds.push(g.pow(a, p));
        for b in &xs[i + 1..] {
            seeds.push(g.comm(a, b));
        }
    }
    let mut c = Closure::new(g);
    c.extend(seeds, xs);
    Ok(x.log_order() - c.finish().log_order())
}

/// `Q = [G^(d-1), G] (G^(d-1))^p` for `d >= 1`.
pub fn q_subgroup(g: &PcGroup, d: usize) -> Result<Subgroup, PcError> {
    if d == 0 {
        return Err(PcError::CheckFailed("Q needs d >= 1".into()));
    }
    let ds = derived_series(g);
    let h = ds
        .get(d - 1)
        .cloned()
        .unwrap_or_else(|| Subgroup::trivial(g));
    let p = g.prime().get() as u64;
    let n = g.rank();
    let mut seeds = Vec::new();
    for x in h.igs() {
        seeds.push(g.pow(x, p));
        for i in 0..n {
            seeds.push(g.comm(x, &g.unit(i)));
        }
    }
    Ok(Subgroup::normal_closure_raw(g, seeds))
}
