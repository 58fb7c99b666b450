//! Shared helpers for the unit tests.

use crate::words::{Alphabet, Letter, Word};

/// Every reduced word of length ≤ `max_len`, including the empty word, in
/// generation order.
pub(crate) fn all_reduced_words(a: &Alphabet, max_len: usize) -> Vec<Word> {
    let mut out = vec![Word::empty()];
    let mut layer: Vec<Vec<Letter>> = vec![Vec::new()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for prefix in &layer {
            for l in a.letters() {
                if prefix.last() == Some(&l.inverse()) {
                    continue;
                }
                let mut ext = prefix.clone();
                ext.push(l);
                out.push(Word::reduce(ext.iter().copied()));
                next.push(ext);
            }
        }
        layer = next;
    }
    out
}
