//! The boundary operation on core graphs.
//!
//! Given a subgroup H presented by its core graph and a cut C with
//! automorphism φ, the boundary ∂_C H is the subgroup of H^φ̄ spanned by the
//! cut's rewriting of the core's edges. The construction runs in four
//! phases: augment with fresh d̄★-neighbours, rewire every edge by the
//! block the label falls in, restrict to the basepoint component (with a
//! fold pass), and trim.

use crate::core_graph::{fold, restrict_to_base, trim, CoreGraph, Edge, LabeledGraph};
use crate::error::{Error, Result};
use crate::whitehead::{whitehead_graph, Cut};
use crate::words::{Alphabet, Word, WordSet};

/// The intermediate graphs of one boundary computation, kept for inspection.
#[derive(Clone, Debug)]
pub struct BoundaryStep {
    pub input: CoreGraph,
    pub cut: Cut,
    pub augmented: LabeledGraph,
    pub relabeled: LabeledGraph,
    pub output: CoreGraph,
}

/// Compute ∂_C H from the core graph of H, keeping the phase graphs.
///
/// The output never has more edges than the input, and every basepoint loop
/// of the output lies in H^φ̄.
pub fn boundary_step(g: &CoreGraph, cut: &Cut) -> Result<BoundaryStep> {
    if g.alphabet() != cut.alphabet() {
        return Err(Error::AlphabetMismatch);
    }
    let d_star = cut.d_star();
    let d_bar = d_star.inverse();
    let n = g.vertex_count();

    // Phase 1: resolve v·d̄★ for every vertex before touching any edge.
    // Reading d̄★ from v either follows an existing edge or a fresh
    // valence-zero vertex stands in for the missing neighbour.
    let mut augmented = g.graph().clone();
    let mut neighbour = Vec::with_capacity(n);
    for v in 0..n {
        neighbour.push(match g.step(v, d_bar) {
            Some(w) => w,
            None => augmented.add_vertex(format!("{v}·{}", d_bar.display(g.alphabet()))),
        });
    }

    // Phase 2: rewire each edge(v →e w) to edge(v·d̄★^α →e w·d̄★^β) for the
    // block (α, β) of its label; the new label e^φ is stored as e.
    let eta = cut.eta();
    let mut relabeled = augmented.clone();
    let rewired: Vec<Edge> = augmented
        .edges()
        .iter()
        .map(|e| {
            let pos = crate::words::Letter::positive(e.label);
            let (alpha, beta) = if e.label == cut.e_star().generator() {
                (eta, eta)
            } else {
                (cut.chi(pos), cut.chi(pos.inverse()))
            };
            let from = if alpha == 1 {
                neighbour[e.from]
            } else {
                e.from
            };
            let to = if beta == 1 { neighbour[e.to] } else { e.to };
            Edge {
                from,
                label: e.label,
                to,
            }
        })
        .collect();
    relabeled.set_edges(rewired);

    // Phases 3 and 4: basepoint component, fold safety pass, trim.
    let restricted = restrict_to_base(&relabeled);
    let output = CoreGraph::try_from_graph(trim(&fold(&restricted)))?;
    assert!(
        output.edge_count() <= g.edge_count(),
        "boundary must not increase the edge count"
    );
    Ok(BoundaryStep {
        input: g.clone(),
        cut: cut.clone(),
        augmented,
        relabeled,
        output,
    })
}

/// ∂_C H as a core graph.
pub fn boundary(g: &CoreGraph, cut: &Cut) -> Result<CoreGraph> {
    boundary_step(g, cut).map(|s| s.output)
}

/// Membership implication used by the test suites: for z in H, if the cut
/// covers Wh({z} rel E) then z^φ̄ must lie in ∂_C H. Returns whether the
/// implication holds (vacuously true when the cut does not cover).
pub fn check_boundary_membership(
    g: &CoreGraph,
    cut: &Cut,
    z: &Word,
    alphabet: &Alphabet,
) -> Result<bool> {
    debug_assert!(g.contains(z), "premise: z must lie in the subgroup");
    let wh = whitehead_graph(&WordSet::new([z.clone()]), alphabet);
    if !cut.covers(&wh) {
        return Ok(true);
    }
    let image = cut.phi_inverse().apply(z);
    Ok(boundary(g, cut)?.contains(&image))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::core_graph::core_of;
    use crate::explorer::enumerate_cuts;
    use crate::words::{Alphabet, Letter, LetterSet, WordSet};

    fn ab(s: &str) -> Alphabet {
        Alphabet::new(s).unwrap()
    }

    fn zset(words: &[&str], a: &Alphabet) -> WordSet {
        WordSet::parse(words, a).unwrap()
    }

    /// d★ = x, χ(y) = 1, χ(ȳ) = 0: the cut of the module examples.
    fn example_cut(a: &Alphabet) -> Cut {
        let x = Letter::positive(0);
        let y = Letter::positive(1);
        let mut d0 = LetterSet::EMPTY;
        d0.insert(x);
        d0.insert(y.inverse());
        let mut d1 = LetterSet::EMPTY;
        d1.insert(x);
        d1.insert(x.inverse());
        d1.insert(y);
        Cut::new(a.clone(), d0, d1, x).unwrap()
    }

    #[test]
    fn boundary_of_whole_group_is_whole_group() {
        let a = ab("xy");
        let bouquet = core_of(&zset(&["x", "y"], &a), &a);
        for cut in enumerate_cuts(&a) {
            let out = boundary(&bouquet, &cut).unwrap();
            assert_eq!(out.canonical_key(), bouquet.canonical_key());
        }
    }

    #[test]
    fn boundary_can_collapse_to_trivial() {
        let a = ab("xy");
        let single_loop = core_of(&zset(&["y"], &a), &a);
        let cut = example_cut(&a);
        assert_eq!(cut.d_star(), Letter::positive(0));
        let step = boundary_step(&single_loop, &cut).unwrap();
        // the basepoint lacks an x-in-edge, so one fresh vertex appears
        assert_eq!(step.augmented.vertex_count(), 2);
        assert_eq!(step.output.vertex_count(), 1);
        assert_eq!(step.output.edge_count(), 0);
    }

    #[test]
    fn boundary_keeps_existing_neighbours() {
        let a = ab("xy");
        let h = core_of(&zset(&["y", "xx"], &a), &a);
        let cut = example_cut(&a);
        let step = boundary_step(&h, &cut).unwrap();
        // both vertices have x-in-edges already: no fresh vertices
        assert_eq!(step.augmented.vertex_count(), h.vertex_count());
        assert!(step.output.edge_count() <= 3);
        // the result generates a subgroup of H^φ̄
        let image_side = core_of(&h.subgroup_basis().map(&cut.phi_inverse()), &a);
        for w in step.output.subgroup_basis().words() {
            assert!(image_side.contains(w));
        }
    }

    #[test]
    fn edge_count_never_increases() {
        let a = ab("xy");
        for words in [
            &["xx", "y"][..],
            &["xxyy"][..],
            &["xyX", "yy"][..],
            &["xy"][..],
        ] {
            let h = core_of(&zset(words, &a), &a);
            for cut in enumerate_cuts(&a) {
                let out = boundary(&h, &cut).unwrap();
                assert!(out.edge_count() <= h.edge_count());
            }
        }
    }

    #[test]
    fn boundary_lands_inside_phi_bar_image() {
        let a = ab("xy");
        for words in [&["xx", "y"][..], &["xxyy"][..], &["xyxYY"][..]] {
            let z = zset(words, &a);
            let h = core_of(&z, &a);
            for cut in enumerate_cuts(&a) {
                let out = boundary(&h, &cut).unwrap();
                let image_side = core_of(&z.map(&cut.phi_inverse()), &a);
                for w in out.subgroup_basis().words() {
                    assert!(image_side.contains(w), "{w:?} outside image for {cut:?}");
                }
            }
        }
    }

    #[test]
    fn membership_implication_on_module_examples() {
        let a = ab("xy");
        let cut = example_cut(&a);
        let g = core_of(&zset(&["y"], &a), &a);
        let y = Word::parse("y", &a).unwrap();
        assert!(check_boundary_membership(&g, &cut, &y, &a).unwrap());
        assert!(check_boundary_membership(&g, &cut, &Word::empty(), &a).unwrap());
    }

    #[test]
    fn membership_implication_randomized() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(23);
        let a = ab("xy");
        let cuts = enumerate_cuts(&a);
        for _ in 0..100 {
            let words: Vec<&str> = match rng.gen_range(0..3) {
                0 => vec!["xx", "y"],
                1 => vec!["xy", "yx"],
                _ => vec!["xxyy", "y"],
            };
            let z = zset(&words, &a);
            let g = core_of(&z, &a);
            // a random member: product of up to 3 generators of the subgroup
            let basis = g.subgroup_basis();
            let mut member = Word::empty();
            for _ in 0..rng.gen_range(1..=3) {
                let pick = &basis.words()[rng.gen_range(0..basis.len())];
                if rng.gen_bool(0.5) {
                    member = member.concat(pick);
                } else {
                    member = member.concat(&pick.invert());
                }
            }
            let cut = &cuts[rng.gen_range(0..cuts.len())];
            assert!(check_boundary_membership(&g, cut, &member, &a).unwrap());
        }
    }

    /// A planted sub-basis not inside E±1 admits some cut that shortens it
    /// and lands inside the boundary.
    #[test]
    fn some_cut_shortens_planted_subbasis_into_boundary() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        let a = ab("xy");
        let cuts = enumerate_cuts(&a);
        let mut tested = 0;
        while tested < 10 {
            let keep: Vec<usize> = (0..2).filter(|_| rng.gen_bool(0.7)).collect();
            if keep.is_empty() {
                continue;
            }
            let mut psi = crate::words::GeneratorMap::identity(2);
            for _ in 0..rng.gen_range(1..=4) {
                psi = psi.compose(&cuts[rng.gen_range(0..cuts.len())].phi());
            }
            let y_words: Vec<Word> = keep
                .iter()
                .map(|&g| psi.apply(&Word::single(Letter::positive(g))))
                .collect();
            if y_words.iter().all(|w| w.len() <= 1) {
                continue;
            }
            let y = WordSet::new(y_words);
            let total = y.total_length();
            let h = core_of(&y, &a);
            let found = cuts.iter().any(|cut| {
                let image = y.map(&cut.phi_inverse());
                if image.total_length() >= total {
                    return false;
                }
                let Ok(b) = boundary(&h, cut) else {
                    return false;
                };
                image.words().iter().all(|w| b.contains(w))
            });
            assert!(found, "no cut advances planted sub-basis {y:?}");
            tested += 1;
        }
    }
}
