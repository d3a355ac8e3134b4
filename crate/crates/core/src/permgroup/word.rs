use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use super::group::PermGroup;
use super::perm::Perm;
use super::PermError;

/// A word in the generators: `+k` is generator `k` (1-based), `-k` its inverse.
pub type Word = Vec<i32>;

/// Upper bound on states stored by [`word_for`] across both search directions.
pub const MAX_SEARCH_STATES: usize = 2_000_000;

pub fn letter_perm(gens: &[Perm], letter: i32) -> Result<Perm, PermError> {
    let k = letter.unsigned_abs() as usize;
    if letter == 0 || k > gens.len() {
        return Err(PermError::BadLetter(letter));
    }
    let g = &gens[k - 1];
    Ok(if letter < 0 { g.inverse() } else { g.clone() })
}

/// Value of a word read left to right as a sequence of loops: the first
/// letter acts first, so `[a, b]` evaluates to `g_b ∘ g_a`.
pub fn evaluate(gens: &[Perm], d: usize, word: &[i32]) -> Result<Perm, PermError> {
    let mut acc = Perm::identity(d);
    for &l in word {
        acc = letter_perm(gens, l)?.compose(&acc);
    }
    Ok(acc)
}

/// Inverse word: letters reversed and negated.
pub fn invert_word(word: &[i32]) -> Word {
    word.iter().rev().map(|l| -l).collect()
}

struct Node {
    perm: Perm,
    parent: usize,
    letter: i32,
}

struct Side {
    nodes: Vec<Node>,
    index: BTreeMap<Perm, usize>,
    frontier: Vec<usize>,
    depth: usize,
}

impl Side {
    fn rooted(p: Perm) -> Self {
        let mut index = BTreeMap::new();
        index.insert(p.clone(), 0);
        Side { nodes: alloc::vec![Node { perm: p, parent: usize::MAX, letter: 0 }], index, frontier: alloc::vec![0], depth: 0 }
    }

    /// Letters from the root down to `i`, in the order they were applied.
    fn path(&self, mut i: usize) -> Word {
        let mut w = Vec::new();
        while i != 0 {
            w.push(self.nodes[i].letter);
            i = self.nodes[i].parent;
        }
        w.reverse();
        w
    }
}

/// Shortest-first word whose evaluation is `target`.
///
/// Bidirectional breadth-first search over the Cayley graph. Letters of
/// transposition generators are tried first and involutions contribute a
/// single letter, which keeps words through transpositions short.
pub fn word_for(g: &PermGroup, target: &Perm, max_len: usize) -> Result<Word, PermError> {
    let d = g.degree();
    if !g.contains(target) {
        return Err(PermError::NotMember);
    }
    if target.is_identity() {
        return Ok(Word::new());
    }
    let gens = g.generators();
    let mut letters: Vec<(i32, Perm, Perm)> = Vec::new();
    let mut order: Vec<usize> = (0..gens.len()).collect();
    order.sort_by_key(|&k| !gens[k].is_transposition());
    for k in order {
        let p = &gens[k];
        if p.is_identity() {
            continue;
        }
        let inv = p.inverse();
        letters.push((k as i32 + 1, p.clone(), inv.clone()));
        if inv != *p {
            letters.push((-(k as i32 + 1), inv, p.clone()));
        }
    }

    // forward: x = eval(w), extended by w ++ [a]  ->  g_a ∘ x
    // backward: y = eval(v)^{-1} ∘ target, extended by [a] ++ v  ->  g_a^{-1} ∘ y
    let mut fwd = Side::rooted(Perm::identity(d));
    let mut bwd = Side::rooted(target.clone());
    while fwd.depth + bwd.depth < max_len {
        if fwd.frontier.is_empty() && bwd.frontier.is_empty() {
            break;
        }
        let forward = !fwd.frontier.is_empty() && (bwd.frontier.is_empty() || fwd.frontier.len() <= bwd.frontier.len());
        let meet = if forward { expand(&mut fwd, &bwd, &letters, true)? } else { expand(&mut bwd, &fwd, &letters, false)? };
        if let Some((f, b)) = meet {
            let mut w = fwd.path(f);
            // backward letters were prepended, so root-to-node order is reversed
            let mut v = bwd.path(b);
            v.reverse();
            w.extend(v);
            if w.len() > max_len {
                return Err(PermError::BudgetExceeded(max_len));
            }
            return Ok(w);
        }
    }
    Err(PermError::BudgetExceeded(max_len))
}

/// Grows one side by a full layer. Returns `(forward id, backward id)` of
/// the first state reached from both sides.
fn expand(me: &mut Side, other: &Side, letters: &[(i32, Perm, Perm)], forward: bool) -> Result<Option<(usize, usize)>, PermError> {
    let mut next = Vec::new();
    for i in core::mem::take(&mut me.frontier) {
        for (letter, p, inv) in letters {
            let child = if forward { p.compose(&me.nodes[i].perm) } else { inv.compose(&me.nodes[i].perm) };
            if me.index.contains_key(&child) {
                continue;
            }
            if me.nodes.len() + other.nodes.len() >= MAX_SEARCH_STATES {
                return Err(PermError::StateBudgetExceeded(MAX_SEARCH_STATES));
            }
            let meet = other.index.get(&child).copied();
            me.nodes.push(Node { perm: child.clone(), parent: i, letter: *letter });
            let id = me.nodes.len() - 1;
            me.index.insert(child, id);
            next.push(id);
            if let Some(j) = meet {
                return Ok(Some(if forward { (id, j) } else { (j, id) }));
            }
        }
    }
    me.frontier = next;
    me.depth += 1;
    Ok(None)
}
