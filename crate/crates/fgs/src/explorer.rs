//! Exploration of the boundary-operation state space and the sandwich
//! result.
//!
//! Starting from the core graph of ⟨Z⟩, repeatedly applying the boundary
//! operation for every cut reaches only finitely many subgroups (edge counts
//! never grow). A breadth-first search with canonical-key deduplication
//! builds that graph; the node with the most basepoint loops yields, through
//! the cut path back to the root, a basis E″ of the whole group maximizing
//! |E″ ∩ ⟨Z⟩|.

use std::collections::{BTreeMap, HashMap, VecDeque};

use serde_json::{json, Value};

use crate::boundary::boundary;
use crate::core_graph::{core_of, CanonicalKey, CoreGraph};
use crate::error::{Error, Result};
use crate::whitehead::{closure_basis, Cut};
use crate::words::{Alphabet, GeneratorMap, Letter, LetterSet, Word, WordSet};

/// Ranks above this need an explicit override: the cut count grows as
/// 2n·(2^{2n−1} − 1).
pub const RANK_GUARD: usize = 5;

pub const DEFAULT_NODE_BUDGET: usize = 100_000;

/// Exploration limits.
#[derive(Clone, Debug)]
pub struct ExploreLimits {
    pub node_budget: usize,
    pub force_rank: bool,
}

impl Default for ExploreLimits {
    fn default() -> Self {
        ExploreLimits {
            node_budget: DEFAULT_NODE_BUDGET,
            force_rank: false,
        }
    }
}

/// Every cut over the alphabet, in deterministic order: e★ by letter order,
/// then the ₁D complement by bitmask. For rank n there are
/// 2n·(2^{2n−1} − 1) of them.
pub fn enumerate_cuts(alphabet: &Alphabet) -> Vec<Cut> {
    let rank = alphabet.rank();
    if rank == 0 {
        return Vec::new();
    }
    let full = alphabet.letter_set();
    let mut cuts = Vec::new();
    for e_star in alphabet.letters() {
        let others: Vec<Letter> = full.iter().filter(|&l| l != e_star).collect();
        for mask in 1u64..(1u64 << others.len()) {
            let mut d1 = LetterSet::single(e_star);
            for (i, &l) in others.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    d1.insert(l);
                }
            }
            let d0 = full.difference(d1).union(LetterSet::single(e_star));
            cuts.push(
                Cut::new(alphabet.clone(), d0, d1, e_star)
                    .expect("enumeration produces only valid cuts"),
            );
        }
    }
    cuts
}

/// One discovered subgroup.
#[derive(Clone, Debug)]
pub struct ExplorationNode {
    pub core: CoreGraph,
    pub key: CanonicalKey,
    /// BFS tree edge that discovered this node: (parent index, cut index).
    pub parent: Option<(usize, usize)>,
    pub loop_count: usize,
}

/// The explored graph: nodes are canonical core graphs, tree edges are cuts.
#[derive(Clone, Debug)]
pub struct ExplorationGraph {
    pub alphabet: Alphabet,
    pub cuts: Vec<Cut>,
    pub nodes: Vec<ExplorationNode>,
    /// (node index, cut index) → discovered node, for the BFS tree edges.
    pub edges: BTreeMap<(usize, usize), usize>,
}

impl ExplorationGraph {
    pub fn root(&self) -> usize {
        0
    }

    /// Cut indices along the tree path from the root to `node`.
    pub fn path_to(&self, node: usize) -> Vec<usize> {
        let mut path = Vec::new();
        let mut cur = node;
        while let Some((parent, cut)) = self.nodes[cur].parent {
            path.push(cut);
            cur = parent;
        }
        path.reverse();
        path
    }

    /// One JSON object per node, in discovery order.
    pub fn to_json_lines(&self) -> String {
        let mut out = String::new();
        for (i, node) in self.nodes.iter().enumerate() {
            let edges: Vec<Value> = self
                .edges
                .range((i, 0)..(i + 1, 0))
                .map(|(&(_, cut), &child)| json!([cut, child]))
                .collect();
            let line = json!({
                "key": node.key.hex(),
                "edges": edges,
                "loopCount": node.loop_count,
                "parent": node.parent.map(|(p, c)| json!([p, c])),
            });
            out.push_str(&line.to_string());
            out.push('\n');
        }
        out
    }

    pub fn to_dot(&self, highlight: Option<usize>) -> String {
        let mut out = String::from("digraph exploration {\n");
        for (i, node) in self.nodes.iter().enumerate() {
            let extra = if Some(i) == highlight {
                " peripheries=2 style=bold"
            } else {
                ""
            };
            out.push_str(&format!(
                "  n{i} [label=\"{i}: loops={}\"{extra}];\n",
                node.loop_count
            ));
        }
        for (&(from, cut), &to) in &self.edges {
            out.push_str(&format!("  n{from} -> n{to} [label=\"C{cut}\"];\n"));
        }
        out.push_str("}\n");
        out
    }
}

/// Breadth-first exploration from core(⟨Z⟩) under every cut, deduplicating
/// by canonical key. Non-tree edges are not stored.
pub fn explore(
    z: &WordSet,
    alphabet: &Alphabet,
    limits: &ExploreLimits,
) -> Result<ExplorationGraph> {
    if alphabet.rank() > RANK_GUARD && !limits.force_rank {
        return Err(Error::RankGuarded {
            rank: alphabet.rank(),
            guard: RANK_GUARD,
        });
    }
    let cuts = enumerate_cuts(alphabet);
    let root = core_of(z, alphabet);
    let root_key = root.canonical_key();
    let mut seen: HashMap<CanonicalKey, usize> = HashMap::new();
    seen.insert(root_key.clone(), 0);
    let mut nodes = vec![ExplorationNode {
        loop_count: root.basepoint_loop_letters().len(),
        core: root,
        key: root_key,
        parent: None,
    }];
    let mut edges = BTreeMap::new();
    let mut queue = VecDeque::from([0usize]);
    while let Some(i) = queue.pop_front() {
        for (ci, cut) in cuts.iter().enumerate() {
            let image = boundary(&nodes[i].core, cut)?;
            let key = image.canonical_key();
            if seen.contains_key(&key) {
                continue;
            }
            if nodes.len() >= limits.node_budget {
                return Err(Error::NodeBudgetExceeded(limits.node_budget));
            }
            let idx = nodes.len();
            seen.insert(key.clone(), idx);
            nodes.push(ExplorationNode {
                loop_count: image.basepoint_loop_letters().len(),
                core: image,
                key,
                parent: Some((i, ci)),
            });
            edges.insert((i, ci), idx);
            queue.push_back(idx);
        }
    }
    Ok(ExplorationGraph {
        alphabet: alphabet.clone(),
        cuts,
        nodes,
        edges,
    })
}

/// The node with the most basepoint loops; ties go to the earliest
/// discovered.
pub fn best_node(g: &ExplorationGraph) -> usize {
    let mut best = 0;
    for (i, node) in g.nodes.iter().enumerate() {
        if node.loop_count > g.nodes[best].loop_count {
            best = i;
        }
    }
    best
}

/// The two layers around ⟨Z⟩ and the basis realizing the lower one.
#[derive(Clone, Debug)]
pub struct SandwichResult {
    /// Basis of the smallest free factor containing ⟨Z⟩.
    pub upper_basis: Vec<Word>,
    /// E″: the image of every generator under the composed automorphism, in
    /// generator order.
    pub full_basis: Vec<Word>,
    /// The members of `full_basis` that lie in ⟨Z⟩.
    pub lower_layer: Vec<Word>,
    /// |E″ ∩ ⟨Z⟩| = |lower_layer|.
    pub best_count: usize,
    /// Basepoint loops at the chosen node (a lower bound for `best_count`).
    pub loop_count: usize,
    pub best_node: usize,
    pub nodes_explored: usize,
    /// Cuts along the tree path from the root to the chosen node.
    pub path: Vec<Cut>,
    /// φ_Cn ⋯ φ_C1: the newest cut acts first.
    pub phi_composition: GeneratorMap,
}

impl SandwichResult {
    pub fn to_json(&self, alphabet: &Alphabet) -> Value {
        json!({
            "upperBasis": self.upper_basis.iter().map(|w| w.display(alphabet)).collect::<Vec<_>>(),
            "upperRank": self.upper_basis.len(),
            "fullBasis": self.full_basis.iter().map(|w| w.display(alphabet)).collect::<Vec<_>>(),
            "lowerLayer": self.lower_layer.iter().map(|w| w.display(alphabet)).collect::<Vec<_>>(),
            "bestCount": self.best_count,
            "loopCount": self.loop_count,
            "bestNode": self.best_node,
            "nodesExplored": self.nodes_explored,
            "path": self.path.iter().map(Cut::to_json).collect::<Vec<_>>(),
            "phi": self.phi_composition.to_json(alphabet),
        })
    }
}

/// Run the whole pipeline: explore, pick the loop-maximal node, compose the
/// cut automorphisms along its path, and read off both layers.
pub fn sandwich(
    z: &WordSet,
    alphabet: &Alphabet,
    limits: &ExploreLimits,
) -> Result<SandwichResult> {
    let graph = explore(z, alphabet, limits)?;
    let best = best_node(&graph);
    let path_indices = graph.path_to(best);
    let mut composition = GeneratorMap::identity(alphabet.rank());
    for &ci in &path_indices {
        composition = graph.cuts[ci].phi().compose(&composition);
    }
    let full_basis: Vec<Word> = (0..alphabet.rank())
        .map(|g| composition.apply(&Word::single(Letter::positive(g))))
        .collect();
    let membership = core_of(z, alphabet);
    let lower_layer: Vec<Word> = full_basis
        .iter()
        .filter(|w| membership.contains(w))
        .cloned()
        .collect();
    let loop_count = graph.nodes[best].loop_count;
    let best_count = lower_layer.len();
    assert!(
        best_count >= loop_count,
        "every basepoint loop letter must reach the lower layer"
    );
    Ok(SandwichResult {
        upper_basis: closure_basis(z, alphabet),
        full_basis,
        lower_layer,
        best_count,
        loop_count,
        best_node: best,
        nodes_explored: graph.nodes.len(),
        path: path_indices
            .iter()
            .map(|&ci| graph.cuts[ci].clone())
            .collect(),
        phi_composition: composition,
    })
}
