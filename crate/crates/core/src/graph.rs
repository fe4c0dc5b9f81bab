//! Exchange graphs of MM generators, weak-order Hasse graphs on the
//! symmetric group, reachability closures, desk-scale graph isomorphism and
//! DOT export.
//!
//! Vertices are multiset words with letter counts equal to the multiplicity
//! vector. At each word `w` and position `i` there is a loop when
//! `w[i] = w[i+1]` and otherwise an edge to `w` with letters i, i+1
//! swapped, labelled i.

use std::collections::{HashSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{word_key, FactorData, Word};

/// An undirected labelled multigraph with loops. Vertex keys are words (or
/// one-line permutations), listed in lexicographic order of their letter
/// vectors; every edge is stored once with its lexicographically smaller
/// endpoint first.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabeledGraph {
    pub vertices: Vec<String>,
    pub edges: Vec<(String, String, usize)>,
    pub loops: Vec<(String, usize)>,
}

impl LabeledGraph {
    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn loop_count(&self) -> usize {
        self.loops.len()
    }

    /// Labels of the loops at a vertex, ascending.
    pub fn loops_at(&self, key: &str) -> Vec<usize> {
        self.loops
            .iter()
            .filter(|(v, _)| v == key)
            .map(|&(_, i)| i)
            .collect()
    }

    /// Incident non-loop edge count per vertex, in vertex order.
    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0usize; self.vertices.len()];
        for (v, w, _) in &self.edges {
            deg[self.index_of(v)] += 1;
            deg[self.index_of(w)] += 1;
        }
        deg
    }

    fn index_of(&self, key: &str) -> usize {
        self.vertices
            .binary_search_by(|v| compare_keys(v, key))
            .expect("vertex exists")
    }
}

/// Keys are compared by their letter vectors, which coincides with string
/// order for single-digit words.
fn compare_keys(a: &str, b: &str) -> std::cmp::Ordering {
    parse_key(a).cmp(&parse_key(b))
}

fn parse_key(s: &str) -> Vec<usize> {
    if s.contains(',') {
        s.split(',').map(|p| p.parse().unwrap_or(0)).collect()
    } else {
        s.chars()
            .map(|c| c.to_digit(10).unwrap_or(0) as usize)
            .collect()
    }
}

/// Enumerate all words with the letter counts of `fd`, in lexicographic
/// order.
pub fn all_words(fd: &FactorData) -> Vec<Word> {
    let mut letters: Vec<usize> = Vec::with_capacity(fd.n());
    for (c, &count) in fd.multiplicities().iter().enumerate() {
        letters.extend(std::iter::repeat_n(c + 1, count));
    }
    let mut out = Vec::new();
    loop {
        out.push(Word::from_letters_unchecked(letters.clone()));
        if !next_permutation(&mut letters) {
            break;
        }
    }
    out
}

/// Advance to the next multiset permutation in lexicographic order.
fn next_permutation(letters: &mut [usize]) -> bool {
    if letters.len() < 2 {
        return false;
    }
    let mut i = letters.len() - 1;
    while i > 0 && letters[i - 1] >= letters[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = letters.len() - 1;
    while letters[j] <= letters[i - 1] {
        j -= 1;
    }
    letters.swap(i - 1, j);
    letters[i..].reverse();
    true
}

fn graph_from_words(words: &[Word]) -> LabeledGraph {
    build_graph_rows(words, 1)
}

type EdgeRow = (Vec<usize>, Vec<usize>, usize);
type LoopRow = (Vec<usize>, usize);

/// Rows of the adjacency rule for a slice of vertices: loops and the edges
/// whose smaller endpoint lies in the slice.
fn rule_rows(words: &[Word]) -> (Vec<EdgeRow>, Vec<LoopRow>) {
    let mut edges = Vec::new();
    let mut loops = Vec::new();
    for word in words {
        let letters = word.letters();
        let n = letters.len();
        for i in 1..n {
            if letters[i - 1] == letters[i] {
                loops.push((letters.to_vec(), i));
            } else if letters[i - 1] < letters[i] {
                let mut other = letters.to_vec();
                other.swap(i - 1, i);
                edges.push((letters.to_vec(), other, i));
            }
        }
    }
    (edges, loops)
}

fn build_graph_rows(words: &[Word], threads: usize) -> LabeledGraph {
    let threads = threads.max(1).min(words.len().max(1));
    let (mut edges, mut loops) = if threads <= 1 {
        let (e, l) = rule_rows(words);
        (e, l)
    } else {
        // Chunked generation; concatenation in chunk order followed by the
        // canonical sort makes the result identical to the sequential one.
        let chunk = words.len().div_ceil(threads);
        let parts: Vec<_> = std::thread::scope(|scope| {
            let handles: Vec<_> = words
                .chunks(chunk)
                .map(|c| scope.spawn(move || rule_rows(c)))
                .collect();
            handles
                .into_iter()
                .map(|h| h.join().expect("worker panicked"))
                .collect()
        });
        let mut edges = Vec::new();
        let mut loops = Vec::new();
        for (e, l) in parts {
            edges.extend(e);
            loops.extend(l);
        }
        (edges, loops)
    };
    edges.sort();
    loops.sort();
    LabeledGraph {
        vertices: words.iter().map(|w| w.key()).collect(),
        edges: edges
            .into_iter()
            .map(|(v, w, i)| (word_key(&v), word_key(&w), i))
            .collect(),
        loops: loops.into_iter().map(|(v, i)| (word_key(&v), i)).collect(),
    }
}

/// The exchange graph of basic MM generators: one vertex per word with the
/// letter counts of `fd`, a loop (w, i) where `w[i] = w[i+1]`, and
/// otherwise an edge between `w` and `w.s_i` labelled i.
pub fn build_exchange_graph(fd: &FactorData) -> LabeledGraph {
    build_exchange_graph_with_threads(fd, 1)
}

/// As `build_exchange_graph`; the work of generating rows may be split over
/// `threads` workers. The result is bit-identical for every thread count.
pub fn build_exchange_graph_with_threads(fd: &FactorData, threads: usize) -> LabeledGraph {
    build_graph_rows(&all_words(fd), threads)
}

/// The subgraph reachable from `start` under adjacent mutation. By the
/// closure property of the exchange graph this always equals
/// `build_exchange_graph(fd)`; the equality is exercised by tests rather
/// than assumed here.
pub fn bfs_closure(fd: &FactorData, start: &Word) -> Result<LabeledGraph> {
    Word::new(start.letters().to_vec(), fd)?;
    let n = fd.n();
    let mut seen: HashSet<Vec<usize>> = HashSet::new();
    let mut queue: VecDeque<Vec<usize>> = VecDeque::new();
    seen.insert(start.letters().to_vec());
    queue.push_back(start.letters().to_vec());
    while let Some(letters) = queue.pop_front() {
        for i in 1..n {
            if letters[i - 1] != letters[i] {
                let mut next = letters.clone();
                next.swap(i - 1, i);
                if seen.insert(next.clone()) {
                    queue.push_back(next);
                }
            }
        }
    }
    let mut visited: Vec<Vec<usize>> = seen.into_iter().collect();
    visited.sort();
    let words: Vec<Word> = visited
        .into_iter()
        .map(Word::from_letters_unchecked)
        .collect();
    Ok(graph_from_words(&words))
}

/// Length of a permutation: its inversion count.
pub fn inversions(perm: &[usize]) -> Result<usize> {
    let n = perm.len();
    let mut seen = vec![false; n + 1];
    for &p in perm {
        if p == 0 || p > n || seen[p] {
            return Err(Error::NotPermutation(format!("{perm:?}")));
        }
        seen[p] = true;
    }
    let mut count = 0;
    for i in 0..n {
        for j in i + 1..n {
            if perm[i] > perm[j] {
                count += 1;
            }
        }
    }
    Ok(count)
}

/// The Hasse graph of the weak order on the symmetric group: vertices are
/// the one-line permutations of 1..n, with an edge between w and w.s_i for
/// every w and i (covers differ by one adjacent transposition).
pub fn hasse_weak_order(n: usize) -> LabeledGraph {
    assert!(n >= 1, "n must be positive");
    build_exchange_graph(&FactorData::distinct(n))
}

struct Adjacency {
    /// neighbors[v] sorted with multiplicity
    neighbors: Vec<Vec<usize>>,
    loop_counts: Vec<usize>,
}

fn adjacency(g: &LabeledGraph) -> Adjacency {
    let index = |key: &str| -> usize { g.index_of(key) };
    let mut neighbors = vec![Vec::new(); g.vertices.len()];
    let mut loop_counts = vec![0usize; g.vertices.len()];
    for (v, w, _) in &g.edges {
        let (a, b) = (index(v), index(w));
        neighbors[a].push(b);
        neighbors[b].push(a);
    }
    for (v, _) in &g.loops {
        loop_counts[index(v)] += 1;
    }
    for list in &mut neighbors {
        list.sort_unstable();
    }
    Adjacency {
        neighbors,
        loop_counts,
    }
}

/// Stable colors from iterated neighborhood refinement. The initial color
/// is (loop count, degree); each round appends the sorted multiset of
/// neighbor colors.
fn refine_colors(adj: &Adjacency) -> Vec<usize> {
    let n = adj.neighbors.len();
    let mut colors: Vec<usize> = {
        let initial: Vec<(usize, usize)> = (0..n)
            .map(|v| (adj.loop_counts[v], adj.neighbors[v].len()))
            .collect();
        canonical_indices(&initial)
    };
    let mut class_count = colors.iter().copied().max().map_or(0, |m| m + 1);
    loop {
        let signatures: Vec<(usize, Vec<usize>)> = (0..n)
            .map(|v| {
                let mut around: Vec<usize> = adj.neighbors[v].iter().map(|&w| colors[w]).collect();
                around.sort_unstable();
                (colors[v], around)
            })
            .collect();
        let next = canonical_indices(&signatures);
        let next_count = next.iter().copied().max().map_or(0, |m| m + 1);
        if next_count == class_count {
            return next;
        }
        colors = next;
        class_count = next_count;
    }
}

fn canonical_indices<T: Ord + Clone>(values: &[T]) -> Vec<usize> {
    let mut sorted: Vec<T> = values.to_vec();
    sorted.sort();
    sorted.dedup();
    values
        .iter()
        .map(|v| sorted.binary_search(v).expect("present"))
        .collect()
}

fn color_histogram(colors: &[usize]) -> Vec<(usize, usize)> {
    let mut hist = std::collections::BTreeMap::new();
    for &c in colors {
        *hist.entry(c).or_insert(0usize) += 1;
    }
    hist.into_iter().collect()
}

/// Isomorphism of the underlying loop-multigraphs. Labels are ignored;
/// loops are compared by count per vertex. Color refinement prunes the
/// search, backtracking finishes it. Intended for desk-scale graphs.
pub fn graphs_isomorphic(g1: &LabeledGraph, g2: &LabeledGraph) -> bool {
    if g1.vertices.len() != g2.vertices.len()
        || g1.edges.len() != g2.edges.len()
        || g1.loops.len() != g2.loops.len()
    {
        return false;
    }
    let a1 = adjacency(g1);
    let a2 = adjacency(g2);
    let c1 = refine_colors(&a1);
    let c2 = refine_colors(&a2);
    if color_histogram(&c1) != color_histogram(&c2) {
        return false;
    }
    let n = a1.neighbors.len();
    if n == 0 {
        return true;
    }

    // order: rarest color first, then greedily most mapped neighbors
    let hist = color_histogram(&c1);
    let class_size = |v: usize| hist.iter().find(|(c, _)| *c == c1[v]).unwrap().1;
    let mut order: Vec<usize> = Vec::with_capacity(n);
    let mut placed = vec![false; n];
    while order.len() < n {
        let mut best: Option<usize> = None;
        let mut best_key = (0usize, usize::MAX, usize::MAX);
        for v in 0..n {
            if placed[v] {
                continue;
            }
            let mapped_neighbors = a1.neighbors[v].iter().filter(|&&w| placed[w]).count();
            let key = (mapped_neighbors, class_size(v), v);
            // maximize mapped neighbors, then rarest class, then lowest index
            if best.is_none()
                || key.0 > best_key.0
                || (key.0 == best_key.0 && (key.1, key.2) < (best_key.1, best_key.2))
            {
                best = Some(v);
                best_key = key;
            }
        }
        let v = best.unwrap();
        placed[v] = true;
        order.push(v);
    }

    let mut mapping: Vec<Option<usize>> = vec![None; n];
    let mut used = vec![false; n];
    backtrack(&a1, &a2, &c1, &c2, &order, 0, &mut mapping, &mut used)
}

#[allow(clippy::too_many_arguments)]
fn backtrack(
    a1: &Adjacency,
    a2: &Adjacency,
    c1: &[usize],
    c2: &[usize],
    order: &[usize],
    depth: usize,
    mapping: &mut Vec<Option<usize>>,
    used: &mut Vec<bool>,
) -> bool {
    if depth == order.len() {
        return true;
    }
    let v = order[depth];
    'candidates: for w in 0..a2.neighbors.len() {
        if used[w] || c2[w] != c1[v] || a2.loop_counts[w] != a1.loop_counts[v] {
            continue;
        }
        // every already-mapped neighbor of v must be a neighbor of w with
        // the same multiplicity, and the mapped-degree counts must agree
        let mut mapped_deg = 0usize;
        for &x in &a1.neighbors[v] {
            if let Some(y) = mapping[x] {
                mapped_deg += 1;
                let mult_v = a1.neighbors[v].iter().filter(|&&z| z == x).count();
                let mult_w = a2.neighbors[w].iter().filter(|&&z| z == y).count();
                if mult_v != mult_w {
                    continue 'candidates;
                }
            }
        }
        let mapped_deg_w = a2.neighbors[w].iter().filter(|&&y| used[y]).count();
        if mapped_deg != mapped_deg_w {
            continue;
        }
        mapping[v] = Some(w);
        used[w] = true;
        if backtrack(a1, a2, c1, c2, order, depth + 1, mapping, used) {
            return true;
        }
        mapping[v] = None;
        used[w] = false;
    }
    false
}

/// DOT rendering: an undirected graph with edge labels equal to the
/// mutation index and loops drawn as self-edges. Output is deterministic.
pub fn to_dot(g: &LabeledGraph) -> String {
    let mut out = String::from("graph exchange {\n");
    for v in &g.vertices {
        out.push_str(&format!("  \"{v}\";\n"));
    }
    for (v, i) in &g.loops {
        out.push_str(&format!("  \"{v}\" -- \"{v}\" [label=\"{i}\"];\n"));
    }
    for (v, w, i) in &g.edges {
        out.push_str(&format!("  \"{v}\" -- \"{w}\" [label=\"{i}\"];\n"));
    }
    out.push_str("}\n");
    out
}
