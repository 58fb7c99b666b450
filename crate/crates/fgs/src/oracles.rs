//! Brute-force oracles used to certify the graph pipeline at desk scale.
//!
//! Everything here works on words alone and shares no graph code with the
//! main path, so agreement tests between the two are meaningful. The
//! searches are exponential and guarded accordingly.

use std::collections::{HashSet, VecDeque};

use crate::error::{Error, Result};
use crate::explorer::enumerate_cuts;
use crate::words::{Alphabet, Letter, Word, WordSet};

pub const ORACLE_MAX_RANK: usize = 3;
pub const ORACLE_MAX_DEPTH: usize = 8;

/// A Nielsen-reduced generating set: no product of at most three elements of
/// N±1 (without adjacent inverse pairs) is shorter than its longest factor.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct NielsenSet {
    words: Vec<Word>,
}

impl NielsenSet {
    pub fn words(&self) -> &[Word] {
        &self.words
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }
}

fn normal_form(w: &Word) -> Word {
    let inv = w.invert();
    if inv < *w {
        inv
    } else {
        w.clone()
    }
}

/// Nielsen reduction by greedy rewriting.
///
/// Repeatedly replaces an element by a product with another element (either
/// side, either sign) whenever the product is strictly shorter, or equal in
/// length but smaller in shortlex order. The measure
/// (total length, sorted word list) strictly decreases, so this terminates;
/// at the fixpoint no pair admits a shortening product.
pub fn nielsen_reduce(z: &WordSet) -> NielsenSet {
    let mut words: Vec<Word> = z.words().iter().map(normal_form).collect();
    words.sort();
    words.dedup();
    'outer: loop {
        for i in 0..words.len() {
            for j in 0..words.len() {
                if i == j {
                    continue;
                }
                let u = &words[i];
                let v = &words[j];
                for u_side in [u.clone(), u.invert()] {
                    for candidate in [
                        u_side.concat(v),
                        u_side.concat(&v.invert()),
                        v.concat(&u_side),
                        v.invert().concat(&u_side),
                    ] {
                        let candidate = normal_form(&candidate);
                        let better = candidate.len() < v.len()
                            || (candidate.len() == v.len() && candidate < *v);
                        if better {
                            words.remove(j);
                            if !candidate.is_empty() && !words.contains(&candidate) {
                                words.push(candidate);
                            }
                            words.sort();
                            continue 'outer;
                        }
                    }
                }
            }
        }
        break;
    }
    let out = NielsenSet { words };
    debug_assert!(check_nielsen_invariant(&out));
    out
}

/// The defining condition: no product of ≤ 3 elements of N±1 without
/// adjacent inverse pairs is shorter than the longest factor involved.
pub fn check_nielsen_invariant(n: &NielsenSet) -> bool {
    let mut signed: Vec<Word> = Vec::new();
    for w in &n.words {
        signed.push(w.clone());
        signed.push(w.invert());
    }
    for u in &signed {
        for v in &signed {
            if u.concat(v).is_empty() {
                continue;
            }
            if u.concat(v).len() < u.len().max(v.len()) {
                return false;
            }
            for w in &signed {
                if v.concat(w).is_empty() {
                    continue;
                }
                let p = u.concat(v).concat(w);
                if p.len() < u.len().max(v.len()).max(w.len()) {
                    return false;
                }
            }
        }
    }
    true
}

/// Membership in ⟨N⟩ by bounded search over non-lengthening rewriting.
///
/// States are words no longer than the query; steps multiply by a generator
/// of N±1 on either side. For a Nielsen-reduced set, peeling the leading
/// factor of any member never lengthens it, so the search reaching the empty
/// word is exactly membership.
pub fn oracle_membership(n: &NielsenSet, w: &Word) -> bool {
    if w.is_empty() {
        return true;
    }
    let mut signed: Vec<Word> = Vec::new();
    for u in &n.words {
        signed.push(u.clone());
        signed.push(u.invert());
    }
    if signed.is_empty() {
        return false;
    }
    let budget = w.len();
    let mut seen: HashSet<Word> = HashSet::new();
    let mut queue: VecDeque<Word> = VecDeque::new();
    seen.insert(w.clone());
    queue.push_back(w.clone());
    while let Some(cur) = queue.pop_front() {
        for u in &signed {
            for next in [u.concat(&cur), cur.concat(u)] {
                if next.is_empty() {
                    return true;
                }
                if next.len() <= budget && !seen.contains(&next) {
                    seen.insert(next.clone());
                    queue.push_back(next);
                }
            }
        }
    }
    false
}

fn oracle_guard(alphabet: &Alphabet, depth: usize) -> Result<()> {
    if alphabet.rank() > ORACLE_MAX_RANK {
        return Err(Error::OracleGuard(format!(
            "rank {} exceeds oracle limit {ORACLE_MAX_RANK}",
            alphabet.rank()
        )));
    }
    if depth > ORACLE_MAX_DEPTH {
        return Err(Error::OracleGuard(format!(
            "depth {depth} exceeds oracle limit {ORACLE_MAX_DEPTH}"
        )));
    }
    Ok(())
}

/// The signed-letter image tables of every cut automorphism and its
/// formulaic inverse, deduplicated.
fn letter_image_tables(alphabet: &Alphabet) -> Vec<Vec<Word>> {
    let mut tables = Vec::new();
    let mut seen = HashSet::new();
    for cut in enumerate_cuts(alphabet) {
        for map in [cut.phi(), cut.phi_inverse()] {
            let table: Vec<Word> = alphabet
                .letters()
                .map(|l| {
                    let img = map.image(l.generator());
                    if l.is_negative() {
                        img.invert()
                    } else {
                        img.clone()
                    }
                })
                .collect();
            if seen.insert(table.clone()) {
                tables.push(table);
            }
        }
    }
    tables
}

fn apply_table(table: &[Word], w: &Word) -> Word {
    let mut buf: Vec<Letter> = Vec::with_capacity(w.len() * 3);
    for &l in w.letters() {
        for &m in table[l.code()].letters() {
            crate::words::push_reduced(&mut buf, m);
        }
    }
    Word::reduce(buf)
}

fn apply_table_set(table: &[Word], state: &[Word]) -> Vec<Word> {
    let mut out: Vec<Word> = state.iter().map(|w| apply_table(table, w)).collect();
    out.sort();
    out
}

/// Minimum of ‖Z^Ψ‖ over all Ψ that are products of at most `depth` cut
/// automorphisms or their formulaic inverses.
///
/// Breadth-first over image sets with deduplication. A state s with r
/// applications left cannot beat the current best unless ‖s‖ < best·3^r,
/// because a single automorphism shrinks total length by a factor of at
/// most 3; such states are not expanded.
pub fn whitehead_search(z: &WordSet, alphabet: &Alphabet, depth: usize) -> Result<usize> {
    oracle_guard(alphabet, depth)?;
    let tables = letter_image_tables(alphabet);
    let start: Vec<Word> = z.words().to_vec();
    let mut best = z.total_length();
    let mut seen: HashSet<Vec<Word>> = HashSet::new();
    seen.insert(start.clone());
    let mut frontier = vec![start];
    for level in 0..depth {
        let remaining = depth - level;
        let mut next_frontier = Vec::new();
        for state in &frontier {
            let total: usize = state.iter().map(Word::len).sum();
            // lower bound on anything reachable from here
            let reachable = total.div_ceil(3usize.pow(remaining as u32));
            if reachable >= best && best > 0 {
                continue;
            }
            for table in &tables {
                let image = apply_table_set(table, state);
                let image_len: usize = image.iter().map(Word::len).sum();
                if image_len < best {
                    best = image_len;
                }
                if seen.insert(image.clone()) {
                    next_frontier.push(image);
                }
            }
        }
        frontier = next_frontier;
        if frontier.is_empty() {
            break;
        }
    }
    Ok(best)
}

/// Is the word part of some basis? True iff bounded search drives it to a
/// single letter.
pub fn primitivity_oracle(w: &Word, alphabet: &Alphabet, depth: usize) -> Result<bool> {
    if w.is_empty() {
        return Ok(false);
    }
    Ok(whitehead_search(&WordSet::new([w.clone()]), alphabet, depth)? == 1)
}
