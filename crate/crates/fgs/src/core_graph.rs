//! Stallings core graphs: lollipop construction, wedges, folding, trimming,
//! membership tracing, canonical keys, and Schreier-style free bases.
//!
//! A subgroup H ≤ ⟨E|⟩ is represented by a folded basepointed E-labelled
//! graph whose basepoint loops read exactly the reduced words of H.

use std::collections::HashMap;

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::words::{Alphabet, Letter, Word, WordSet};

/// A directed labelled edge; the label is a generator index.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct Edge {
    pub from: usize,
    pub label: usize,
    pub to: usize,
}

/// A basepointed E-labelled directed graph.
///
/// Vertices are dense indices `0..vertex_count`. `vertex_notes` carries
/// optional display annotations (used by the boundary construction to show
/// where fresh vertices came from); it is dropped by folding and trimming.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LabeledGraph {
    alphabet: Alphabet,
    base: usize,
    vertex_count: usize,
    edges: Vec<Edge>,
    vertex_notes: Vec<String>,
}

impl LabeledGraph {
    pub fn point(alphabet: &Alphabet) -> LabeledGraph {
        LabeledGraph {
            alphabet: alphabet.clone(),
            base: 0,
            vertex_count: 1,
            edges: Vec::new(),
            vertex_notes: vec![String::new()],
        }
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn base(&self) -> usize {
        self.base
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn vertex_note(&self, v: usize) -> &str {
        &self.vertex_notes[v]
    }

    pub(crate) fn add_vertex(&mut self, note: String) -> usize {
        let id = self.vertex_count;
        self.vertex_count += 1;
        self.vertex_notes.push(note);
        id
    }

    pub(crate) fn add_edge(&mut self, from: usize, label: usize, to: usize) {
        debug_assert!(from < self.vertex_count && to < self.vertex_count);
        debug_assert!(label < self.alphabet.rank());
        self.edges.push(Edge { from, label, to });
    }

    pub(crate) fn set_edges(&mut self, edges: Vec<Edge>) {
        self.edges = edges;
    }

    /// Vertex ids reachable from the basepoint in the undirected view.
    fn base_component(&self) -> Vec<bool> {
        let mut seen = vec![false; self.vertex_count];
        let mut adj: Vec<Vec<usize>> = vec![Vec::new(); self.vertex_count];
        for e in &self.edges {
            adj[e.from].push(e.to);
            adj[e.to].push(e.from);
        }
        let mut stack = vec![self.base];
        seen[self.base] = true;
        while let Some(v) = stack.pop() {
            for &w in &adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        seen
    }

    /// Rebuild with only the kept vertices, renumbering so the basepoint is 0
    /// and the rest follow in old-id order.
    fn compact(&self, keep: &[bool], edges: Vec<Edge>) -> LabeledGraph {
        let mut remap = vec![usize::MAX; self.vertex_count];
        remap[self.base] = 0;
        let mut next = 1;
        for (v, slot) in remap.iter_mut().enumerate() {
            if keep[v] && v != self.base {
                *slot = next;
                next += 1;
            }
        }
        let edges = edges
            .into_iter()
            .map(|e| Edge {
                from: remap[e.from],
                label: e.label,
                to: remap[e.to],
            })
            .collect();
        LabeledGraph {
            alphabet: self.alphabet.clone(),
            base: 0,
            vertex_count: next,
            edges,
            vertex_notes: vec![String::new(); next],
        }
    }

    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph core {\n");
        for v in 0..self.vertex_count {
            let shape = if v == self.base {
                " shape=doublecircle"
            } else {
                ""
            };
            let note = &self.vertex_notes[v];
            let label = if note.is_empty() {
                format!("{v}")
            } else {
                format!("{v}\\n{note}")
            };
            out.push_str(&format!("  v{v} [label=\"{label}\"{shape}];\n"));
        }
        for e in &self.edges {
            out.push_str(&format!(
                "  v{} -> v{} [label=\"{}\"];\n",
                e.from,
                e.to,
                self.alphabet.symbol(e.label)
            ));
        }
        out.push_str("}\n");
        out
    }

    pub fn to_json(&self) -> Value {
        json!({
            "basepoint": self.base,
            "vertices": self.vertex_count,
            "edges": self.edges.iter().map(|e| json!({
                "from": e.from,
                "label": self.alphabet.symbol(e.label).to_string(),
                "to": e.to,
            })).collect::<Vec<_>>(),
        })
    }
}

/// Lollipop graph of a single word: a stem reading the maximal cancelling
/// prefix p of w = p·c·p⁻¹, then a cycle reading the cyclically reduced
/// core c. Trivial when w is empty.
pub fn lollipop(w: &Word, alphabet: &Alphabet) -> LabeledGraph {
    let mut g = LabeledGraph::point(alphabet);
    if w.is_empty() {
        return g;
    }
    let ls = w.letters();
    let mut lo = 0;
    let mut hi = ls.len();
    while hi - lo >= 2 && ls[lo] == ls[hi - 1].inverse() {
        lo += 1;
        hi -= 1;
    }
    // stem: read p from the basepoint
    let mut cur = g.base();
    for &l in &ls[..lo] {
        let next = g.add_vertex(String::new());
        if l.is_negative() {
            g.add_edge(next, l.generator(), cur);
        } else {
            g.add_edge(cur, l.generator(), next);
        }
        cur = next;
    }
    // cycle: read c, closing back at the stem tip
    let tip = cur;
    let cycle = &ls[lo..hi];
    for (i, &l) in cycle.iter().enumerate() {
        let next = if i + 1 == cycle.len() {
            tip
        } else {
            g.add_vertex(String::new())
        };
        if l.is_negative() {
            g.add_edge(next, l.generator(), cur);
        } else {
            g.add_edge(cur, l.generator(), next);
        }
        cur = next;
    }
    g
}

/// Disjoint union identifying all basepoints.
pub fn wedge(graphs: &[LabeledGraph], alphabet: &Alphabet) -> LabeledGraph {
    let mut out = LabeledGraph::point(alphabet);
    for g in graphs {
        assert_eq!(g.alphabet(), alphabet, "wedge requires a common alphabet");
        let mut remap = vec![usize::MAX; g.vertex_count()];
        remap[g.base()] = out.base();
        for (v, slot) in remap.iter_mut().enumerate() {
            if v != g.base() {
                *slot = out.add_vertex(String::new());
            }
        }
        for e in g.edges() {
            out.add_edge(remap[e.from], e.label, remap[e.to]);
        }
    }
    out
}

struct Dsu {
    parent: Vec<usize>,
}

impl Dsu {
    fn new(n: usize) -> Dsu {
        Dsu {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, mut v: usize) -> usize {
        while self.parent[v] != v {
            self.parent[v] = self.parent[self.parent[v]];
            v = self.parent[v];
        }
        v
    }

    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            false
        } else {
            self.parent[rb] = ra;
            true
        }
    }
}

/// Stallings folding: while two distinct edges share a label and an endpoint
/// on the same side, merge them (identifying the opposite endpoints).
///
/// The result is folded and, up to basepointed labelled isomorphism,
/// independent of the merge order.
pub fn fold(g: &LabeledGraph) -> LabeledGraph {
    let mut dsu = Dsu::new(g.vertex_count());
    let edges: Vec<Edge> = g.edges().to_vec();
    let mut alive = vec![true; edges.len()];
    loop {
        let mut changed = false;
        let mut seen: HashMap<(usize, usize), usize> = HashMap::new();
        for i in 0..edges.len() {
            if !alive[i] {
                continue;
            }
            let key = (dsu.find(edges[i].from), edges[i].label);
            match seen.get(&key) {
                Some(&j) => {
                    dsu.union(edges[j].to, edges[i].to);
                    alive[i] = false;
                    changed = true;
                }
                None => {
                    seen.insert(key, i);
                }
            }
        }
        seen.clear();
        for i in 0..edges.len() {
            if !alive[i] {
                continue;
            }
            let key = (dsu.find(edges[i].to), edges[i].label);
            match seen.get(&key) {
                Some(&j) => {
                    dsu.union(edges[j].from, edges[i].from);
                    alive[i] = false;
                    changed = true;
                }
                None => {
                    seen.insert(key, i);
                }
            }
        }
        if !changed {
            break;
        }
    }
    // collapse vertices to their class roots, then compact
    let kept: Vec<Edge> = edges
        .iter()
        .zip(&alive)
        .filter(|(_, &a)| a)
        .map(|(e, _)| Edge {
            from: dsu.find(e.from),
            label: e.label,
            to: dsu.find(e.to),
        })
        .collect();
    let mut keep = vec![false; g.vertex_count()];
    for v in 0..g.vertex_count() {
        let r = dsu.find(v);
        keep[r] = true;
    }
    let mut shadow = g.clone();
    shadow.base = dsu.find(g.base());
    shadow.compact(&keep, kept)
}

/// Restrict to the basepoint component (no leaf pruning).
pub(crate) fn restrict_to_base(g: &LabeledGraph) -> LabeledGraph {
    let keep = g.base_component();
    let edges = g
        .edges()
        .iter()
        .filter(|e| keep[e.from] && keep[e.to])
        .copied()
        .collect();
    g.compact(&keep, edges)
}

/// Keep the basepoint component, then repeatedly delete non-basepoint
/// vertices of total degree ≤ 1 together with their incident edge.
pub fn trim(g: &LabeledGraph) -> LabeledGraph {
    let component = g.base_component();
    let mut edge_alive: Vec<bool> = g
        .edges()
        .iter()
        .map(|e| component[e.from] && component[e.to])
        .collect();
    let mut vertex_alive = component;
    // incidence lists (loops appear twice, so degree counts them twice)
    let mut incidence: Vec<Vec<usize>> = vec![Vec::new(); g.vertex_count()];
    for (i, e) in g.edges().iter().enumerate() {
        if edge_alive[i] {
            incidence[e.from].push(i);
            incidence[e.to].push(i);
        }
    }
    let mut degree: Vec<usize> = incidence.iter().map(Vec::len).collect();
    let mut queue: Vec<usize> = (0..g.vertex_count())
        .filter(|&v| vertex_alive[v] && v != g.base() && degree[v] <= 1)
        .collect();
    while let Some(v) = queue.pop() {
        if !vertex_alive[v] || v == g.base() || degree[v] > 1 {
            continue;
        }
        vertex_alive[v] = false;
        for &i in &incidence[v] {
            if !edge_alive[i] {
                continue;
            }
            edge_alive[i] = false;
            let e = g.edges()[i];
            let other = if e.from == v { e.to } else { e.from };
            degree[other] -= 1;
            degree[v] -= 1;
            if vertex_alive[other] && other != g.base() && degree[other] <= 1 {
                queue.push(other);
            }
        }
    }
    let edges = g
        .edges()
        .iter()
        .zip(&edge_alive)
        .filter(|(_, &a)| a)
        .map(|(e, _)| *e)
        .collect();
    g.compact(&vertex_alive, edges)
}

/// Canonical identifier of a basepointed labelled graph; equal keys mean the
/// graphs are isomorphic as basepointed E-labelled graphs.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct CanonicalKey(Vec<u8>);

impl CanonicalKey {
    pub fn bytes(&self) -> &[u8] {
        &self.0
    }

    pub fn hex(&self) -> String {
        self.0.iter().map(|b| format!("{b:02x}")).collect()
    }
}

/// A folded core graph: no two same-labelled edges share a source or share a
/// target, every non-basepoint vertex has degree ≥ 2, and everything is
/// connected to the basepoint.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CoreGraph {
    graph: LabeledGraph,
    out: Vec<Vec<Option<usize>>>,
    inc: Vec<Vec<Option<usize>>>,
}

impl CoreGraph {
    pub fn try_from_graph(graph: LabeledGraph) -> Result<CoreGraph> {
        let rank = graph.alphabet().rank();
        let n = graph.vertex_count();
        let mut out = vec![vec![None; rank]; n];
        let mut inc = vec![vec![None; rank]; n];
        let mut degree = vec![0usize; n];
        for e in graph.edges() {
            if out[e.from][e.label].replace(e.to).is_some() {
                return Err(Error::InvalidInput(format!(
                    "not folded: two {}-edges leave vertex {}",
                    graph.alphabet().symbol(e.label),
                    e.from
                )));
            }
            if inc[e.to][e.label].replace(e.from).is_some() {
                return Err(Error::InvalidInput(format!(
                    "not folded: two {}-edges enter vertex {}",
                    graph.alphabet().symbol(e.label),
                    e.to
                )));
            }
            degree[e.from] += 1;
            degree[e.to] += 1;
        }
        for (v, &d) in degree.iter().enumerate() {
            if v != graph.base() && d < 2 {
                return Err(Error::InvalidInput(format!(
                    "not a core graph: vertex {v} has degree {d}"
                )));
            }
        }
        let reachable = graph.base_component();
        if reachable.iter().filter(|&&r| r).count() != n {
            return Err(Error::InvalidInput(
                "not a core graph: vertices outside the basepoint component".into(),
            ));
        }
        Ok(CoreGraph { graph, out, inc })
    }

    fn from_graph(graph: LabeledGraph) -> CoreGraph {
        CoreGraph::try_from_graph(graph).expect("construction must yield a folded core graph")
    }

    pub fn graph(&self) -> &LabeledGraph {
        &self.graph
    }

    pub fn alphabet(&self) -> &Alphabet {
        self.graph.alphabet()
    }

    pub fn base(&self) -> usize {
        self.graph.base()
    }

    pub fn vertex_count(&self) -> usize {
        self.graph.vertex_count()
    }

    pub fn edge_count(&self) -> usize {
        self.graph.edge_count()
    }

    /// Rank of the represented subgroup: |edges| − |vertices| + 1.
    pub fn rank(&self) -> usize {
        self.edge_count() + 1 - self.vertex_count()
    }

    /// One step from `v` reading a signed letter (forward along the label for
    /// positive letters, backwards for negative ones).
    pub fn step(&self, v: usize, l: Letter) -> Option<usize> {
        if l.is_negative() {
            self.inc[v][l.generator()]
        } else {
            self.out[v][l.generator()]
        }
    }

    /// Follow a reduced word from the basepoint; `None` when some step has no
    /// edge. The word lies in the subgroup iff this returns the basepoint.
    pub fn trace(&self, w: &Word) -> Option<usize> {
        let mut cur = self.base();
        for &l in w.letters() {
            cur = self.step(cur, l)?;
        }
        Some(cur)
    }

    pub fn contains(&self, w: &Word) -> bool {
        self.trace(w) == Some(self.base())
    }

    /// Generators whose edge at the basepoint is a loop: E ∩ H.
    pub fn basepoint_loop_letters(&self) -> Vec<usize> {
        let b = self.base();
        (0..self.alphabet().rank())
            .filter(|&g| self.out[b][g] == Some(b))
            .collect()
    }

    /// Breadth-first discovery order from the basepoint, scanning outgoing
    /// labels in alphabet order and then incoming labels in alphabet order.
    /// Foldedness makes the traversal, and hence the numbering, unique.
    fn bfs_order(&self) -> (Vec<usize>, Vec<Option<(usize, Letter)>>) {
        let n = self.vertex_count();
        let mut order = vec![usize::MAX; n];
        let mut tree: Vec<Option<(usize, Letter)>> = vec![None; n];
        let mut queue = std::collections::VecDeque::new();
        order[self.base()] = 0;
        queue.push_back(self.base());
        let mut next = 1;
        while let Some(v) = queue.pop_front() {
            for g in 0..self.alphabet().rank() {
                if let Some(w) = self.out[v][g] {
                    if order[w] == usize::MAX {
                        order[w] = next;
                        next += 1;
                        tree[w] = Some((v, Letter::positive(g)));
                        queue.push_back(w);
                    }
                }
            }
            for g in 0..self.alphabet().rank() {
                if let Some(w) = self.inc[v][g] {
                    if order[w] == usize::MAX {
                        order[w] = next;
                        next += 1;
                        tree[w] = Some((v, Letter::new(g, true)));
                        queue.push_back(w);
                    }
                }
            }
        }
        (order, tree)
    }

    pub fn canonical_key(&self) -> CanonicalKey {
        let (order, _) = self.bfs_order();
        let mut triples: Vec<(u32, u32, u32)> = self
            .graph
            .edges()
            .iter()
            .map(|e| (order[e.from] as u32, e.label as u32, order[e.to] as u32))
            .collect();
        triples.sort_unstable();
        let mut bytes = Vec::with_capacity(8 + triples.len() * 12);
        bytes.extend((self.alphabet().rank() as u32).to_le_bytes());
        bytes.extend((self.vertex_count() as u32).to_le_bytes());
        for (f, l, t) in triples {
            bytes.extend(f.to_le_bytes());
            bytes.extend(l.to_le_bytes());
            bytes.extend(t.to_le_bytes());
        }
        CanonicalKey(bytes)
    }

    /// A free basis of the represented subgroup, one word per non-tree edge:
    /// (tree path in) · edge · (tree path back).
    pub fn subgroup_basis(&self) -> WordSet {
        let (order, tree) = self.bfs_order();
        // tree edges, identified by endpoints and letter
        let mut path_cache: HashMap<usize, Word> = HashMap::new();
        let path_to = |v: usize, cache: &mut HashMap<usize, Word>| -> Word {
            if let Some(w) = cache.get(&v) {
                return w.clone();
            }
            let mut letters = Vec::new();
            let mut cur = v;
            while let Some((parent, l)) = tree[cur] {
                letters.push(l);
                cur = parent;
            }
            letters.reverse();
            let w = Word::reduce(letters);
            cache.insert(v, w.clone());
            w
        };
        let mut tree_used: Vec<bool> = vec![false; self.graph.edge_count()];
        let mut edges_sorted: Vec<(usize, &Edge)> = self.graph.edges().iter().enumerate().collect();
        edges_sorted.sort_by_key(|(_, e)| (order[e.from], e.label, order[e.to]));
        // mark the unique tree edge realizing each BFS parent step
        for (v, step) in tree.iter().enumerate() {
            if let Some((parent, l)) = *step {
                for (i, e) in &edges_sorted {
                    if tree_used[*i] {
                        continue;
                    }
                    let matches = if l.is_negative() {
                        e.from == v && e.label == l.generator() && e.to == parent
                    } else {
                        e.from == parent && e.label == l.generator() && e.to == v
                    };
                    if matches {
                        tree_used[*i] = true;
                        break;
                    }
                }
            }
        }
        let mut words = Vec::new();
        for (i, e) in edges_sorted {
            if tree_used[i] {
                continue;
            }
            let head = path_to(e.from, &mut path_cache);
            let tail = path_to(e.to, &mut path_cache);
            let word = head
                .concat(&Word::single(Letter::positive(e.label)))
                .concat(&tail.invert());
            words.push(word);
        }
        WordSet::new(words)
    }

    pub fn to_json(&self) -> Value {
        self.graph.to_json()
    }

    pub fn to_dot(&self) -> String {
        self.graph.to_dot()
    }

    pub fn from_json(v: &Value, alphabet: &Alphabet) -> Result<CoreGraph> {
        let base = v
            .get("basepoint")
            .and_then(Value::as_u64)
            .ok_or_else(|| Error::InvalidInput("missing \"basepoint\"".into()))?
            as usize;
        let vertices = v
            .get("vertices")
            .and_then(Value::as_u64)
            .ok_or_else(|| Error::InvalidInput("missing \"vertices\"".into()))?
            as usize;
        if vertices == 0 || base >= vertices {
            return Err(Error::InvalidInput("bad vertex count or basepoint".into()));
        }
        let mut g = LabeledGraph {
            alphabet: alphabet.clone(),
            base,
            vertex_count: vertices,
            edges: Vec::new(),
            vertex_notes: vec![String::new(); vertices],
        };
        for e in v
            .get("edges")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::InvalidInput("missing \"edges\"".into()))?
        {
            let from = e
                .get("from")
                .and_then(Value::as_u64)
                .ok_or_else(|| Error::InvalidInput("edge missing \"from\"".into()))?
                as usize;
            let to = e
                .get("to")
                .and_then(Value::as_u64)
                .ok_or_else(|| Error::InvalidInput("edge missing \"to\"".into()))?
                as usize;
            let label_str = e
                .get("label")
                .and_then(Value::as_str)
                .ok_or_else(|| Error::InvalidInput("edge missing \"label\"".into()))?;
            let label = label_str
                .chars()
                .next()
                .and_then(|c| alphabet.gen_of(c))
                .ok_or_else(|| Error::InvalidInput(format!("unknown label {label_str:?}")))?;
            if from >= vertices || to >= vertices {
                return Err(Error::InvalidInput("edge endpoint out of range".into()));
            }
            g.add_edge(from, label, to);
        }
        CoreGraph::try_from_graph(g)
    }
}

/// The core graph of ⟨Z⟩: wedge the lollipops, fold, trim.
pub fn core_of(z: &WordSet, alphabet: &Alphabet) -> CoreGraph {
    let lollipops: Vec<LabeledGraph> = z.words().iter().map(|w| lollipop(w, alphabet)).collect();
    CoreGraph::from_graph(trim(&fold(&wedge(&lollipops, alphabet))))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ab(s: &str) -> Alphabet {
        Alphabet::new(s).unwrap()
    }

    fn w(s: &str, a: &Alphabet) -> Word {
        Word::parse(s, a).unwrap()
    }

    fn zset(words: &[&str], a: &Alphabet) -> WordSet {
        WordSet::parse(words, a).unwrap()
    }

    #[test]
    fn lollipop_shapes() {
        let a = ab("xy");
        let g = lollipop(&w("xyX", &a), &a);
        assert_eq!(g.vertex_count(), 2);
        assert_eq!(g.edge_count(), 2);
        let g = lollipop(&w("xxyy", &a), &a);
        assert_eq!(g.vertex_count(), 4);
        assert_eq!(g.edge_count(), 4);
        let g = lollipop(&Word::empty(), &a);
        assert_eq!(g.vertex_count(), 1);
        assert_eq!(g.edge_count(), 0);
    }

    #[test]
    fn lollipop_reads_its_word() {
        let a = ab("xy");
        for s in ["x", "xy", "xyX", "xxyy", "XyxY", "xYYYx"] {
            let word = w(s, &a);
            let core = CoreGraph::from_graph(trim(&fold(&lollipop(&word, &a))));
            assert!(core.contains(&word), "{s} should trace to the basepoint");
        }
    }

    #[test]
    fn wedge_shapes() {
        let a = ab("xy");
        let loops = [lollipop(&w("x", &a), &a), lollipop(&w("y", &a), &a)];
        let g = wedge(&loops, &a);
        assert_eq!(g.vertex_count(), 1);
        assert_eq!(g.edge_count(), 2);
        let single = wedge(&[lollipop(&w("xy", &a), &a)], &a);
        assert_eq!(single.vertex_count(), 2);
        assert_eq!(single.edge_count(), 2);
        let g = wedge(&[lollipop(&w("xx", &a), &a), lollipop(&w("y", &a), &a)], &a);
        assert_eq!(g.vertex_count(), 2);
        assert_eq!(g.edge_count(), 3);
    }

    #[test]
    fn fold_merges_equal_label_siblings() {
        let a = ab("xy");
        let mut g = LabeledGraph::point(&a);
        let v1 = g.add_vertex(String::new());
        let v2 = g.add_vertex(String::new());
        g.add_edge(g.base(), 0, v1);
        g.add_edge(g.base(), 0, v2);
        let folded = fold(&g);
        assert_eq!(folded.vertex_count(), 2);
        assert_eq!(folded.edge_count(), 1);
    }

    #[test]
    fn fold_shares_common_prefix() {
        let a = ab("xyz");
        let g = wedge(
            &[lollipop(&w("xy", &a), &a), lollipop(&w("xz", &a), &a)],
            &a,
        );
        let folded = fold(&g);
        assert_eq!(folded.vertex_count(), 2);
        assert_eq!(folded.edge_count(), 3);
    }

    #[test]
    fn fold_leaves_folded_graphs_alone() {
        let a = ab("xy");
        let g = wedge(&[lollipop(&w("xx", &a), &a), lollipop(&w("y", &a), &a)], &a);
        let folded = fold(&g);
        assert_eq!(folded.vertex_count(), g.vertex_count());
        assert_eq!(folded.edge_count(), g.edge_count());
    }

    #[test]
    fn trim_prunes_hanging_material() {
        let a = ab("xy");
        // isolated vertex goes away
        let mut g = LabeledGraph::point(&a);
        g.add_vertex(String::new());
        assert_eq!(trim(&g).vertex_count(), 1);
        // a hanging path off a cycle is fully removed
        let mut g = lollipop(&w("xx", &a), &a);
        let u = g.add_vertex(String::new());
        let v1 = g.add_vertex(String::new());
        let v2 = g.add_vertex(String::new());
        g.add_edge(g.base(), 1, u);
        g.add_edge(u, 1, v1);
        g.add_edge(v1, 1, v2);
        let t = trim(&g);
        assert_eq!(t.vertex_count(), 2);
        assert_eq!(t.edge_count(), 2);
        // a core graph passes through unchanged
        let core = core_of(&zset(&["xx", "y"], &a), &a).graph().clone();
        let tt = trim(&core);
        assert_eq!(tt.vertex_count(), core.vertex_count());
        assert_eq!(tt.edge_count(), core.edge_count());
    }

    #[test]
    fn core_of_examples() {
        let a = ab("xy");
        let c = core_of(&zset(&["xx", "y"], &a), &a);
        assert_eq!(c.vertex_count(), 2);
        assert_eq!(c.edge_count(), 3);
        let c = core_of(&zset(&["xxyy"], &a), &a);
        assert_eq!(c.vertex_count(), 4);
        assert_eq!(c.edge_count(), 4);
        assert!(c.basepoint_loop_letters().is_empty());
        let c = core_of(&WordSet::empty(), &a);
        assert_eq!(c.vertex_count(), 1);
        assert_eq!(c.edge_count(), 0);
    }

    #[test]
    fn trace_membership() {
        let a = ab("xy");
        let c = core_of(&zset(&["xx", "y"], &a), &a);
        assert_eq!(c.trace(&w("xx", &a)), Some(c.base()));
        let mid = c.trace(&w("x", &a)).unwrap();
        assert_ne!(mid, c.base());
        assert_eq!(c.trace(&Word::empty()), Some(c.base()));
        assert!(c.contains(&w("xxyxx", &a)));
        assert!(!c.contains(&w("xyx", &a)));
        assert_eq!(c.trace(&w("yx", &a)), c.trace(&w("x", &a)));
    }

    #[test]
    fn basepoint_loops() {
        let a = ab("xy");
        assert_eq!(
            core_of(&zset(&["xx", "y"], &a), &a).basepoint_loop_letters(),
            vec![1]
        );
        assert_eq!(
            core_of(&zset(&["x", "y"], &a), &a).basepoint_loop_letters(),
            vec![0, 1]
        );
        assert!(core_of(&zset(&["xxyy"], &a), &a)
            .basepoint_loop_letters()
            .is_empty());
    }

    #[test]
    fn canonical_keys_separate_subgroups() {
        let a = ab("xy");
        let c1 = core_of(&zset(&["xx", "y"], &a), &a);
        let c2 = core_of(&zset(&["y", "xx"], &a), &a);
        assert_eq!(c1.canonical_key(), c2.canonical_key());
        let bouquet = core_of(&zset(&["x", "y"], &a), &a);
        assert_ne!(c1.canonical_key(), bouquet.canonical_key());
        let conj = core_of(&zset(&["xyX"], &a), &a);
        let plain = core_of(&zset(&["y"], &a), &a);
        assert_ne!(conj.canonical_key(), plain.canonical_key());
    }

    #[test]
    fn fold_is_confluent_under_shuffled_edge_order() {
        use rand::seq::SliceRandom;
        use rand::SeedableRng;
        let a = ab("xy");
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for words in [
            &["xx", "y", "xyX"][..],
            &["xyxy", "yx"][..],
            &["xxyy", "xYxY"][..],
        ] {
            let z = zset(words, &a);
            let base = wedge(
                &z.words()
                    .iter()
                    .map(|w| lollipop(w, &a))
                    .collect::<Vec<_>>(),
                &a,
            );
            let reference = CoreGraph::from_graph(trim(&fold(&base))).canonical_key();
            for _ in 0..100 {
                let mut shuffled = base.clone();
                let mut edges = shuffled.edges().to_vec();
                edges.shuffle(&mut rng);
                shuffled.set_edges(edges);
                let key = CoreGraph::from_graph(trim(&fold(&shuffled))).canonical_key();
                assert_eq!(key, reference);
            }
        }
    }

    #[test]
    fn subgroup_basis_examples() {
        let a = ab("xy");
        let c = core_of(&zset(&["xx", "y"], &a), &a);
        let basis = c.subgroup_basis();
        assert_eq!(basis.len(), 2);
        assert_eq!(basis, zset(&["xx", "y"], &a));
        let bouquet = core_of(&zset(&["x", "y"], &a), &a);
        assert_eq!(bouquet.subgroup_basis(), zset(&["x", "y"], &a));
        let point = core_of(&WordSet::empty(), &a);
        assert!(point.subgroup_basis().is_empty());
    }

    #[test]
    fn subgroup_basis_rank_formula_and_loop_letters() {
        let a = ab("xy");
        for words in [&["xx", "y"][..], &["xxyy"][..], &["xy", "yx", "xxx"][..]] {
            let c = core_of(&zset(words, &a), &a);
            let basis = c.subgroup_basis();
            assert_eq!(basis.len(), c.edge_count() + 1 - c.vertex_count());
            // every generator loop letter shows up as a basis element
            for g in c.basepoint_loop_letters() {
                assert!(basis.contains(&Word::single(Letter::positive(g))));
            }
            // every basis word traces back to the basepoint
            for word in basis.words() {
                assert!(c.contains(word));
            }
        }
    }

    #[test]
    fn json_round_trip_preserves_key() {
        let a = ab("xy");
        let c = core_of(&zset(&["xx", "y", "xyX"], &a), &a);
        let j = c.to_json();
        let c2 = CoreGraph::from_json(&j, &a).unwrap();
        assert_eq!(c.canonical_key(), c2.canonical_key());
    }

    #[test]
    fn from_json_rejects_unfolded_input() {
        let a = ab("xy");
        let j = json!({
            "basepoint": 0,
            "vertices": 3,
            "edges": [
                {"from": 0, "label": "x", "to": 1},
                {"from": 0, "label": "x", "to": 2},
                {"from": 1, "label": "y", "to": 0},
                {"from": 2, "label": "y", "to": 0},
            ],
        });
        assert!(CoreGraph::from_json(&j, &a).is_err());
    }
}
