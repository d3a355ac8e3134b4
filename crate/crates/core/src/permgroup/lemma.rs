//! Checkers for the hypotheses of the transposition lemma and its
//! proposition-level consequence.

use alloc::vec::Vec;

use num_bigint::BigUint;

use super::group::PermGroup;
use super::perm::Perm;
use super::PermError;
use crate::partitions::{thickest_sym_partition, Partition};

/// Outcome for one cycle `c_i` of `σ` against its partition `J_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycleConditions {
    /// 0-based points of the cycle.
    pub cycle: Vec<usize>,
    /// `J_i` is invariant under `σ`.
    pub invariant: bool,
    /// `I_{i,1}`: the block of `J_i` on which `c_i` acts (it contains the
    /// whole support of `c_i` once `J_i` is `σ`-invariant). `None` if the
    /// support is split across blocks.
    pub block: Option<Vec<usize>>,
    /// (i) every block of `J_i` meets the support of at most one cycle of `σ`.
    pub cond_i: bool,
    /// (ii) `c_i` acts on `I_{i,1}` and `len(c_i) < |I_{i,1}|`.
    pub cond_ii: bool,
    /// (iii) `H` is transitive on `I_{i,1}`.
    pub cond_iii: bool,
    /// Informational: the transposition generators alone are transitive on `I_{i,1}`.
    pub transposition_transitive: bool,
}

impl CycleConditions {
    pub fn holds(&self) -> bool {
        self.invariant && self.cond_i && self.cond_ii && self.cond_iii
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LemmaReport {
    pub sigma: Perm,
    pub cycles: Vec<CycleConditions>,
    /// All hypotheses hold for every cycle (vacuous for `σ = id`).
    pub hypotheses_hold: bool,
    /// `J_H` computed from the transposition graph.
    pub j_h: Partition,
    pub order_h: BigUint,
    /// `|H| = Π |I|!` over `J_H`, i.e. `H = Σ_{J_H}`.
    pub conclusion_holds: bool,
}

impl LemmaReport {
    /// Sound only in one direction: hypotheses imply the conclusion.
    pub fn consistent(&self) -> bool {
        !self.hypotheses_hold || self.conclusion_holds
    }
}

/// Evaluates conditions (i)–(iii) for `H = ⟨transpositions, σ⟩`, one
/// partition per cycle of `σ` in the order of [`Perm::cycles`].
pub fn check_lemma_conditions(transpositions: &[Perm], sigma: &Perm, partitions: &[Partition]) -> Result<LemmaReport, PermError> {
    let d = sigma.degree();
    for t in transpositions {
        if t.degree() != d {
            return Err(PermError::DegreeMismatch(d, t.degree()));
        }
        if !t.is_transposition() {
            return Err(PermError::NotATransposition);
        }
    }
    let cycles = sigma.cycles();
    if partitions.len() != cycles.len() {
        return Err(PermError::PartitionCount { expected: cycles.len(), found: partitions.len() });
    }
    for j in partitions {
        if j.degree() != d {
            return Err(PermError::DegreeMismatch(d, j.degree()));
        }
    }
    let mut gens = transpositions.to_vec();
    gens.push(sigma.clone());
    let h = PermGroup::generate(d, &gens)?;
    let tg = PermGroup::generate(d, transpositions)?;

    let mut out = Vec::with_capacity(cycles.len());
    for (cycle, j) in cycles.iter().zip(partitions) {
        let invariant = j.invariant_under(sigma);
        let cond_i = j.blocks().iter().all(|b| cycles.iter().filter(|c| c.iter().any(|x| b.binary_search(x).is_ok())).count() <= 1);
        let k = j.block_index(cycle[0]);
        let block = if cycle.iter().all(|&x| j.block_index(x) == k) { Some(j.blocks()[k].clone()) } else { None };
        let (cond_ii, cond_iii, transposition_transitive) = match &block {
            Some(b) => (cycle.len() < b.len(), h.is_transitive_on(b), tg.is_transitive_on(b)),
            None => (false, false, false),
        };
        out.push(CycleConditions { cycle: cycle.clone(), invariant, block, cond_i, cond_ii, cond_iii, transposition_transitive });
    }
    let hypotheses_hold = out.iter().all(CycleConditions::holds);
    let j_h = thickest_sym_partition(&h);
    let order_h = h.order();
    let conclusion_holds = order_h == j_h.sym_order();
    Ok(LemmaReport { sigma: sigma.clone(), cycles: out, hypotheses_hold, j_h, order_h, conclusion_holds })
}

/// Checks on a candidate partition `J` of the whole group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CandidateReport {
    pub partition: Partition,
    pub invariant: bool,
    pub transitive_on_blocks: bool,
    pub equals_j_g: bool,
    /// `|G| = Π |I|!` over `J`.
    pub order_matches: bool,
}

impl CandidateReport {
    pub fn holds(&self) -> bool {
        self.invariant && self.transitive_on_blocks && self.equals_j_g && self.order_matches
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PropReport {
    pub lemmas: Vec<LemmaReport>,
    /// Every `H_i` satisfies the lemma hypotheses.
    pub hypotheses_hold: bool,
    pub j_g: Partition,
    pub order_g: BigUint,
    /// `G = Σ_{J_G}`, checked by orders.
    pub conclusion_holds: bool,
    pub candidate: Option<CandidateReport>,
}

impl PropReport {
    pub fn consistent(&self) -> bool {
        !self.hypotheses_hold || self.conclusion_holds
    }

    /// The group is `Σ_J` for the supplied candidate, or `Σ_{J_G}` if none.
    pub fn passes(&self) -> bool {
        match &self.candidate {
            Some(c) => c.holds(),
            None => self.conclusion_holds,
        }
    }
}

/// `G = ⟨transpositions, σ_1, …, σ_m⟩`; `families[i]` holds one partition per
/// cycle of `σ_i`.
pub fn check_prop_conditions(
    transpositions: &[Perm],
    sigmas: &[Perm],
    families: &[Vec<Partition>],
    candidate: Option<&Partition>,
) -> Result<PropReport, PermError> {
    if sigmas.len() != families.len() {
        return Err(PermError::PartitionCount { expected: sigmas.len(), found: families.len() });
    }
    let d = match (transpositions.first(), sigmas.first()) {
        (Some(t), _) => t.degree(),
        (None, Some(s)) => s.degree(),
        (None, None) => candidate.map(Partition::degree).unwrap_or(0),
    };
    let lemmas = sigmas
        .iter()
        .zip(families)
        .map(|(s, f)| check_lemma_conditions(transpositions, s, f))
        .collect::<Result<Vec<_>, _>>()?;
    let mut gens = transpositions.to_vec();
    gens.extend_from_slice(sigmas);
    let g = PermGroup::generate(d, &gens)?;
    let j_g = thickest_sym_partition(&g);
    let order_g = g.order();
    let conclusion_holds = order_g == j_g.sym_order();
    let candidate = candidate.map(|j| CandidateReport {
        partition: j.clone(),
        invariant: gens.iter().all(|s| j.invariant_under(s)),
        transitive_on_blocks: j.blocks().iter().all(|b| g.is_transitive_on(b)),
        equals_j_g: *j == j_g,
        order_matches: order_g == j.sym_order(),
    });
    Ok(PropReport { hypotheses_hold: lemmas.iter().all(|l| l.hypotheses_hold), lemmas, j_g, order_g, conclusion_holds, candidate })
}

/// `G` leaves `J` invariant and `|G| = Π |I|!`, i.e. `G = Σ_J`.
pub fn is_product_of_symmetric(g: &PermGroup, j: &Partition) -> bool {
    j.degree() == g.degree() && g.generators().iter().all(|s| j.invariant_under(s)) && g.order() == j.sym_order()
}
