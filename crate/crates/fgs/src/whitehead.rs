//! Whitehead graphs, cuts, and the cut-vertex reduction pipeline.
//!
//! The Whitehead graph of a word set Z records which signed letters sit next
//! to each other in the reduced expressions of Z, with the basepoint vertex 1
//! marking word boundaries. A cut-vertex of that graph yields a Whitehead
//! automorphism that strictly shortens Z; iterating until no cut-vertex is
//! left exposes a basis of the smallest free factor containing ⟨Z⟩ and
//! decides whether Z extends to a basis of the whole group.

use std::collections::BTreeSet;

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::words::{Alphabet, GeneratorMap, Letter, LetterSet, Word, WordSet};

/// Vertex of a Whitehead graph: the basepoint 1 or a signed letter.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum WhVertex {
    Base,
    L(Letter),
}

impl WhVertex {
    fn display(self, alphabet: &Alphabet) -> String {
        match self {
            WhVertex::Base => "1".to_string(),
            WhVertex::L(l) => l.display(alphabet).to_string(),
        }
    }
}

/// The graph Wh(Z rel E) on the vertex set E±1 ∪ {1}.
///
/// Edges are stored as the ordered pairs produced by the defining scan of
/// each word; connectivity and cut-vertex questions use the underlying
/// undirected view.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct WhGraph {
    alphabet: Alphabet,
    letters: LetterSet,
    edges: BTreeSet<(WhVertex, WhVertex)>,
}

impl WhGraph {
    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    /// The letter vertices of this graph (the full E±1 of the alphabet the
    /// graph was built over).
    pub fn letters(&self) -> LetterSet {
        self.letters
    }

    pub fn edges(&self) -> &BTreeSet<(WhVertex, WhVertex)> {
        &self.edges
    }

    pub fn vertices(&self) -> Vec<WhVertex> {
        std::iter::once(WhVertex::Base)
            .chain(self.letters.iter().map(WhVertex::L))
            .collect()
    }

    fn vertex_slot(v: WhVertex) -> usize {
        match v {
            WhVertex::Base => 0,
            WhVertex::L(l) => l.code() + 1,
        }
    }

    /// Component ids for every vertex of the graph, optionally with one
    /// letter vertex (and its incident edges) removed. Removed or absent
    /// slots get `usize::MAX`.
    fn components(&self, removed: Option<Letter>) -> (Vec<usize>, usize) {
        let slots = 2 * self.alphabet.rank() + 1;
        let mut comp = vec![usize::MAX; slots];
        let mut present = vec![false; slots];
        for v in self.vertices() {
            present[Self::vertex_slot(v)] = true;
        }
        if let Some(l) = removed {
            present[Self::vertex_slot(WhVertex::L(l))] = false;
        }
        let mut adj: Vec<Vec<usize>> = vec![Vec::new(); slots];
        for &(u, v) in &self.edges {
            let (su, sv) = (Self::vertex_slot(u), Self::vertex_slot(v));
            if present[su] && present[sv] {
                adj[su].push(sv);
                adj[sv].push(su);
            }
        }
        let mut count = 0;
        for start in 0..slots {
            if !present[start] || comp[start] != usize::MAX {
                continue;
            }
            let mut stack = vec![start];
            comp[start] = count;
            while let Some(u) = stack.pop() {
                for &v in &adj[u] {
                    if comp[v] == usize::MAX {
                        comp[v] = count;
                        stack.push(v);
                    }
                }
            }
            count += 1;
        }
        (comp, count)
    }

    pub fn is_connected(&self) -> bool {
        self.components(None).1 <= 1
    }

    pub fn to_json(&self) -> Value {
        json!({
            "vertices": self.vertices().iter().map(|v| v.display(&self.alphabet)).collect::<Vec<_>>(),
            "edges": self.edges.iter()
                .map(|(u, v)| json!([u.display(&self.alphabet), v.display(&self.alphabet)]))
                .collect::<Vec<_>>(),
        })
    }

    pub fn to_dot(&self) -> String {
        let mut out = String::from("graph wh {\n");
        out.push_str("  \"1\" [shape=doublecircle];\n");
        for l in self.letters.iter() {
            out.push_str(&format!(
                "  \"{}\";\n",
                WhVertex::L(l).display(&self.alphabet)
            ));
        }
        for (u, v) in &self.edges {
            out.push_str(&format!(
                "  \"{}\" -- \"{}\";\n",
                u.display(&self.alphabet),
                v.display(&self.alphabet)
            ));
        }
        out.push_str("}\n");
        out
    }
}

fn wh_edges(z: &WordSet) -> BTreeSet<(WhVertex, WhVertex)> {
    let mut edges = BTreeSet::new();
    for w in z.words() {
        let ls = w.letters();
        let n = ls.len();
        edges.insert((WhVertex::Base, WhVertex::L(ls[0])));
        for i in 1..n {
            edges.insert((WhVertex::L(ls[i - 1].inverse()), WhVertex::L(ls[i])));
        }
        edges.insert((WhVertex::L(ls[n - 1].inverse()), WhVertex::Base));
    }
    edges
}

/// Wh(Z rel E) over the full alphabet: vertex set E±1 ∪ {1}, one edge for
/// every adjacent letter pair (with word boundaries marked by 1).
pub fn whitehead_graph(z: &WordSet, alphabet: &Alphabet) -> WhGraph {
    WhGraph {
        alphabet: alphabet.clone(),
        letters: alphabet.letter_set(),
        edges: wh_edges(z),
    }
}

/// Wh(Z rel E_Z): the same edges, but with the vertex set restricted to the
/// letters of the support of Z. This is the graph the reduction loop and the
/// cut-vertex search operate on.
pub fn whitehead_graph_rel_support(z: &WordSet, alphabet: &Alphabet) -> WhGraph {
    WhGraph {
        alphabet: alphabet.clone(),
        letters: z.support_letters(),
        edges: wh_edges(z),
    }
}

/// Search for a cut-vertex.
///
/// If the graph is disconnected every letter vertex disconnects it, and the
/// least letter is returned. Otherwise letters are scanned in index order and
/// the first whose removal (with incident edges) disconnects the remaining
/// basepointed graph is returned.
pub fn find_cut_vertex(g: &WhGraph) -> Option<Letter> {
    if !g.is_connected() {
        return g.letters.iter().next();
    }
    g.letters.iter().find(|&l| g.components(Some(l)).1 > 1)
}

/// A cut (₀D, ₁D, e★): two blocks covering E±1 and overlapping exactly in
/// e★, with ₁D ≠ {e★}. Carries its Whitehead automorphism.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Cut {
    alphabet: Alphabet,
    d0: LetterSet,
    d1: LetterSet,
    e_star: Letter,
}

impl Cut {
    pub fn new(alphabet: Alphabet, d0: LetterSet, d1: LetterSet, e_star: Letter) -> Result<Cut> {
        let full = alphabet.letter_set();
        if d0.union(d1) != full {
            return Err(Error::InvalidCut("blocks must cover all letters".into()));
        }
        if d0.intersection(d1) != LetterSet::single(e_star) {
            return Err(Error::InvalidCut(
                "blocks must overlap exactly in e*".into(),
            ));
        }
        if d1 == LetterSet::single(e_star) {
            return Err(Error::InvalidCut("second block must not be {e*}".into()));
        }
        Ok(Cut {
            alphabet,
            d0,
            d1,
            e_star,
        })
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn d0(&self) -> LetterSet {
        self.d0
    }

    pub fn d1(&self) -> LetterSet {
        self.d1
    }

    pub fn e_star(&self) -> Letter {
        self.e_star
    }

    /// Characteristic map of ₁D.
    pub fn chi(&self, l: Letter) -> u8 {
        self.d1.contains(l) as u8
    }

    /// η = χ(ē★).
    pub fn eta(&self) -> u8 {
        self.chi(self.e_star.inverse())
    }

    /// d★ = e★ when ē★ ∈ ₁D, else ē★.
    pub fn d_star(&self) -> Letter {
        if self.eta() == 1 {
            self.e_star
        } else {
            self.e_star.inverse()
        }
    }

    /// ₐD_β = ₐD ∩ (ᵦD)⁻¹.
    pub fn d_block(&self, a: u8, b: u8) -> LetterSet {
        let da = if a == 0 { self.d0 } else { self.d1 };
        let db = if b == 0 { self.d0 } else { self.d1 };
        da.intersection(db.inverses())
    }

    /// ₐE_β: the positive letters of ₐD_β.
    pub fn e_block(&self, a: u8, b: u8) -> LetterSet {
        let mut out = LetterSet::EMPTY;
        for l in self.d_block(a, b).iter() {
            if !l.is_negative() {
                out.insert(l);
            }
        }
        out
    }

    /// The Whitehead automorphism φ: fixes d★ and sends every other
    /// generator e to d★^χ(e) · e · d̄★^χ(ē).
    pub fn phi(&self) -> GeneratorMap {
        self.phi_with(self.d_star())
    }

    /// The formulaic inverse of `phi`: e ↦ d̄★^χ(e) · e · d★^χ(ē).
    pub fn phi_inverse(&self) -> GeneratorMap {
        self.phi_with(self.d_star().inverse())
    }

    fn phi_with(&self, d: Letter) -> GeneratorMap {
        let images = (0..self.alphabet.rank())
            .map(|g| {
                let e = Letter::positive(g);
                if g == self.e_star.generator() {
                    return Word::single(e);
                }
                let mut letters = Vec::with_capacity(3);
                if self.chi(e) == 1 {
                    letters.push(d);
                }
                letters.push(e);
                if self.chi(e.inverse()) == 1 {
                    letters.push(d.inverse());
                }
                Word::reduce(letters)
            })
            .collect();
        GeneratorMap::new(images)
    }

    /// Does every edge of `g` lie in K(₀D ∪ {1}) or in K(₁D)?
    pub fn covers(&self, g: &WhGraph) -> bool {
        let in_d0 = |v: WhVertex| match v {
            WhVertex::Base => true,
            WhVertex::L(l) => self.d0.contains(l),
        };
        let in_d1 = |v: WhVertex| match v {
            WhVertex::Base => false,
            WhVertex::L(l) => self.d1.contains(l),
        };
        g.edges()
            .iter()
            .all(|&(u, v)| (in_d0(u) && in_d0(v)) || (in_d1(u) && in_d1(v)))
    }

    fn letters_json(&self, set: LetterSet) -> Value {
        Value::Array(
            set.iter()
                .map(|l| Value::String(l.display(&self.alphabet).to_string()))
                .collect(),
        )
    }

    pub fn to_json(&self) -> Value {
        json!({
            "d0": self.letters_json(self.d0),
            "d1": self.letters_json(self.d1),
            "eStar": self.e_star.display(&self.alphabet).to_string(),
            "dStar": self.d_star().display(&self.alphabet).to_string(),
        })
    }
}

/// Cut-vertex subroutine: from a cut-vertex of Wh(Z rel E_Z), build a cut
/// whose Whitehead graph contains Wh(Z rel E) and whose automorphism inverse
/// strictly shortens Z.
///
/// When Wh(Z rel E_Z) is connected, the blocks are the two sides of the
/// removed vertex (the basepoint side padded with all non-support letters).
/// When it is disconnected the supplied vertex is ignored: the basepoint
/// component D supplies ₀D, and the least letter of D − D⁻¹ becomes e★.
pub fn cut_subroutine(z: &WordSet, alphabet: &Alphabet, e_star: Letter) -> Result<Cut> {
    let support = z.support_letters();
    let full = alphabet.letter_set();
    let non_support = full.difference(support);
    if support.is_empty() {
        return Err(Error::NotACutVertex(format!("{e_star:?}")));
    }
    let g = whitehead_graph_rel_support(z, alphabet);
    let (comp, count) = g.components(None);
    let base_slot = WhGraph::vertex_slot(WhVertex::Base);
    if count <= 1 {
        // Connected case: remove e★ and split along the basepoint component.
        if !support.contains(e_star) {
            return Err(Error::NotACutVertex(format!("{e_star:?}")));
        }
        let (comp, count) = g.components(Some(e_star));
        if count <= 1 {
            return Err(Error::NotACutVertex(format!("{e_star:?}")));
        }
        let base_comp = comp[base_slot];
        let mut x0 = LetterSet::EMPTY;
        let mut x1 = LetterSet::EMPTY;
        for l in support.iter() {
            if l == e_star {
                continue;
            }
            if comp[WhGraph::vertex_slot(WhVertex::L(l))] == base_comp {
                x0.insert(l);
            } else {
                x1.insert(l);
            }
        }
        let d0 = x0.union(LetterSet::single(e_star)).union(non_support);
        let d1 = x1.union(LetterSet::single(e_star));
        Cut::new(alphabet.clone(), d0, d1, e_star)
    } else {
        // Disconnected case: D is the support part of the basepoint component.
        let base_comp = comp[base_slot];
        let mut d = LetterSet::EMPTY;
        for l in support.iter() {
            if comp[WhGraph::vertex_slot(WhVertex::L(l))] == base_comp {
                d.insert(l);
            }
        }
        let pick = d.difference(d.inverses());
        let e_star = pick
            .iter()
            .next()
            .expect("a disconnected support graph always leaves D - D^-1 nonempty");
        let d0 = d.union(non_support);
        let d1 = support.difference(d).union(LetterSet::single(e_star));
        Cut::new(alphabet.clone(), d0, d1, e_star)
    }
}

/// One reduction step: the cut that was applied and ‖Z′‖ afterwards.
#[derive(Clone, Debug)]
pub struct ReductionStep {
    pub cut: Cut,
    pub length_after: usize,
}

/// Outcome of the cut-vertex reduction loop.
///
/// `final_set` is Z^Φ̄ where Φ is `phi_total`; its Whitehead graph over its
/// own support has no cut-vertices.
#[derive(Clone, Debug)]
pub struct ReductionTrace {
    pub initial_length: usize,
    pub steps: Vec<ReductionStep>,
    pub phi_total: GeneratorMap,
    pub final_set: WordSet,
}

impl ReductionTrace {
    pub fn to_json(&self, alphabet: &Alphabet) -> Value {
        json!({
            "initialLength": self.initial_length,
            "steps": self.steps.iter().map(|s| json!({
                "cut": s.cut.to_json(),
                "lengthAfter": s.length_after,
            })).collect::<Vec<_>>(),
            "phi": self.phi_total.to_json(alphabet),
            "finalSet": self.final_set.words().iter().map(|w| w.display(alphabet)).collect::<Vec<_>>(),
            "finalLength": self.final_set.total_length(),
        })
    }
}

/// The cut-vertex reduction loop: repeatedly shorten Z by a cut automorphism
/// while its support Whitehead graph has a cut-vertex.
///
/// Returns Φ and Z′ = Z^Φ̄ with the accumulated right-action product
/// Φ = φₙ ⋯ φ₁ (newest first). Total length strictly decreases each step, so
/// at most ‖Z‖ iterations run.
pub fn cut_vertex_algorithm(z: &WordSet, alphabet: &Alphabet) -> ReductionTrace {
    let mut current = z.clone();
    let mut phi_total = GeneratorMap::identity(alphabet.rank());
    let mut steps = Vec::new();
    let initial_length = current.total_length();
    loop {
        let g = whitehead_graph_rel_support(&current, alphabet);
        let Some(e_star) = find_cut_vertex(&g) else {
            break;
        };
        let cut = cut_subroutine(&current, alphabet, e_star)
            .expect("cut-vertex subroutine must succeed on a found cut-vertex");
        let next = current.map(&cut.phi_inverse());
        assert!(
            next.total_length() < current.total_length(),
            "cut automorphism must strictly shorten the set"
        );
        phi_total = cut.phi().compose(&phi_total);
        steps.push(ReductionStep {
            cut,
            length_after: next.total_length(),
        });
        current = next;
    }
    ReductionTrace {
        initial_length,
        steps,
        phi_total,
        final_set: current,
    }
}

/// A basis of the smallest free factor containing ⟨Z⟩: the Φ-images of the
/// generators supporting Z′, expressed in the original letters.
pub fn closure_basis(z: &WordSet, alphabet: &Alphabet) -> Vec<Word> {
    let trace = cut_vertex_algorithm(z, alphabet);
    trace
        .final_set
        .support(alphabet)
        .into_iter()
        .map(|g| trace.phi_total.apply(&Word::single(Letter::positive(g))))
        .collect()
}

/// Verdict of the sub-basis test, with the extended basis in the positive
/// case.
#[derive(Clone, Debug)]
pub struct SubbasisOutcome {
    pub verdict: bool,
    /// A basis of the whole group containing Z, present exactly when the
    /// verdict is true. Ordered by the generator whose Φ-image each word
    /// replaces.
    pub extended_basis: Option<Vec<Word>>,
}

/// Is Z a sub-basis (a subset of some basis)?
///
/// True iff Z ∩ Z⁻¹ = ∅ and the reduction loop ends with single letters;
/// then Z together with the Φ-images of the untouched generators is a basis.
pub fn is_subbasis(z: &WordSet, alphabet: &Alphabet) -> SubbasisOutcome {
    if z.inverses_intersect() {
        return SubbasisOutcome {
            verdict: false,
            extended_basis: None,
        };
    }
    let trace = cut_vertex_algorithm(z, alphabet);
    if !trace.final_set.words().iter().all(|w| w.len() == 1) {
        return SubbasisOutcome {
            verdict: false,
            extended_basis: None,
        };
    }
    let mut final_letters = LetterSet::EMPTY;
    for w in trace.final_set.words() {
        final_letters.insert(w.letters()[0]);
    }
    let phi = &trace.phi_total;
    let basis = (0..alphabet.rank())
        .map(|g| {
            let e = Letter::positive(g);
            let planted = final_letters.contains(e) || final_letters.contains(e.inverse());
            let letter = if final_letters.contains(e.inverse()) {
                e.inverse()
            } else {
                e
            };
            let word = phi.apply(&Word::single(letter));
            // the Φ-image of a Z′ letter is the Z word it came from
            debug_assert!(!planted || z.contains(&word));
            word
        })
        .collect();
    SubbasisOutcome {
        verdict: true,
        extended_basis: Some(basis),
    }
}
