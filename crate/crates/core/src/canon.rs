//! Canonical codes for maps (up to relabeling and reflection) and for
//! abstract graphs.

use std::fmt;

use crate::error::{Error, Result};
use crate::graph::{BitIter, Graph, MAX_GRAPH_VERTICES};
use crate::map::{Dart, EmbeddedMap};
use crate::plantri::{serialize_lists, MAX_VERTICES};

/// A totally ordered isomorphism certificate. Map codes are the plantri
/// line of the canonically relabeled map, so they print as ordinary lines.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonicalCode(Vec<u8>);

impl CanonicalCode {
    pub fn as_bytes(&self) -> &[u8] {
        &self.0
    }

    pub fn from_bytes(bytes: Vec<u8>) -> Self {
        CanonicalCode(bytes)
    }
}

impl fmt::Display for CanonicalCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&String::from_utf8_lossy(&self.0))
    }
}

impl fmt::Debug for CanonicalCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CanonicalCode({self})")
    }
}

const UNLABELED: u32 = u32::MAX;

/// Breadth-first relabeling state reused across starting darts.
struct Relabeler<'m> {
    map: &'m EmbeddedMap,
    label: Vec<u32>,
    entry: Vec<Dart>,
    order: Vec<usize>,
    seq: Vec<u32>,
}

impl<'m> Relabeler<'m> {
    fn new(map: &'m EmbeddedMap) -> Self {
        let n = map.vertex_count();
        Relabeler {
            map,
            label: vec![UNLABELED; n],
            entry: vec![Dart::new(0); n],
            order: Vec::with_capacity(n),
            seq: Vec::with_capacity(n + map.dart_count()),
        }
    }

    /// Relabels from `start`, walking rotations forwards or backwards.
    /// Returns false as soon as the sequence exceeds `best`; on success
    /// `self.seq` holds the full sequence and it is `<= best`.
    fn run(&mut self, start: Dart, reversed: bool, best: Option<&[u32]>) -> bool {
        let map = self.map;
        self.label.fill(UNLABELED);
        self.order.clear();
        self.seq.clear();
        let root = map.origin(start);
        self.label[root] = 0;
        self.entry[root] = start;
        self.order.push(root);
        let mut tied = best.is_some();
        let mut i = 0;
        while i < self.order.len() {
            let v = self.order[i];
            let degree = map.degree(v);
            if !self.push(degree as u32, &mut tied, best) {
                return false;
            }
            let mut d = self.entry[v];
            for _ in 0..degree {
                let w = map.head(d);
                if self.label[w] == UNLABELED {
                    self.label[w] = self.order.len() as u32;
                    self.entry[w] = map.twin(d);
                    self.order.push(w);
                }
                if !self.push(self.label[w], &mut tied, best) {
                    return false;
                }
                d = if reversed { map.prev(d) } else { map.next(d) };
            }
            i += 1;
        }
        true
    }

    #[inline]
    fn push(&mut self, x: u32, tied: &mut bool, best: Option<&[u32]>) -> bool {
        if *tied {
            let b = best.expect("tied implies a best sequence")[self.seq.len()];
            if x > b {
                return false;
            }
            if x < b {
                *tied = false;
            }
        }
        self.seq.push(x);
        true
    }

    fn lists(&self, reversed: bool) -> Vec<Vec<usize>> {
        let map = self.map;
        let mut lists = vec![Vec::new(); map.vertex_count()];
        for &v in &self.order {
            let mut d = self.entry[v];
            let list = &mut lists[self.label[v] as usize];
            for _ in 0..map.degree(v) {
                list.push(self.label[map.head(d)] as usize);
                d = if reversed { map.prev(d) } else { map.next(d) };
            }
        }
        lists
    }
}

/// Neighbor lists of the canonical relabeling of a connected map.
pub fn canonical_lists(map: &EmbeddedMap) -> Result<Vec<Vec<usize>>> {
    if !map.is_connected() {
        return Err(Error::Disconnected);
    }
    if map.dart_count() == 0 {
        return Ok(vec![Vec::new(); map.vertex_count()]);
    }
    let mut relabeler = Relabeler::new(map);
    let mut best: Option<(Vec<u32>, Dart, bool)> = None;
    for reversed in [false, true] {
        for start in map.darts() {
            let ok = relabeler.run(start, reversed, best.as_ref().map(|b| b.0.as_slice()));
            if ok && best.as_ref().is_none_or(|b| relabeler.seq < b.0) {
                best = Some((relabeler.seq.clone(), start, reversed));
            }
        }
    }
    let (_, start, reversed) = best.expect("at least one dart");
    relabeler.run(start, reversed, None);
    Ok(relabeler.lists(reversed))
}

/// Canonical code of a connected map: equal iff the maps are isomorphic,
/// reflections included.
pub fn canonical_code(map: &EmbeddedMap) -> Result<CanonicalCode> {
    let lists = canonical_lists(map)?;
    Ok(CanonicalCode(encode_lists(&lists)))
}

fn encode_lists(lists: &[Vec<usize>]) -> Vec<u8> {
    if lists.len() <= MAX_VERTICES {
        serialize_lists(lists).expect("within letter range").into_bytes()
    } else {
        // Beyond the letter range: decimal labels, '.'-separated.
        let body: Vec<String> = lists
            .iter()
            .map(|l| {
                let start = l.iter().enumerate().min_by_key(|&(_, &w)| w).map_or(0, |(i, _)| i);
                (0..l.len()).map(|k| l[(start + k) % l.len()].to_string()).collect::<Vec<_>>().join(".")
            })
            .collect();
        format!("{} {}", lists.len(), body.join(",")).into_bytes()
    }
}

pub fn are_isomorphic(a: &EmbeddedMap, b: &EmbeddedMap) -> Result<bool> {
    if a.vertex_count() != b.vertex_count() || a.dart_count() != b.dart_count() {
        // Still reject disconnected inputs consistently.
        canonical_code(a)?;
        canonical_code(b)?;
        return Ok(false);
    }
    Ok(canonical_code(a)? == canonical_code(b)?)
}

// ---------------------------------------------------------------------------
// Graphs

/// Index of the bit for the unordered pair `(i, j)` in a graph code; the
/// pair `(0, 1)` is the most significant.
fn pair_shift(n: usize, i: usize, j: usize) -> u32 {
    let (i, j) = if i < j { (i, j) } else { (j, i) };
    let before = i * (2 * n - i - 1) / 2 + (j - i - 1);
    let total = n * (n - 1) / 2;
    (total - 1 - before) as u32
}

/// Upper-triangle adjacency bits of `g` under the labeling `label`.
fn labeled_bits(g: &Graph, label: &[u8]) -> u128 {
    let n = g.order();
    let mut code = 0u128;
    for u in 0..n {
        for v in BitIter(g.neighbors_mask(u) as u32).filter(|&v| v > u) {
            code |= 1u128 << pair_shift(n, label[u] as usize, label[v] as usize);
        }
    }
    code
}

/// Equitable refinement of an ordered partition (cells as bitmasks). Each
/// cell is split by neighbor count into the splitter, fragments ordered by
/// increasing count; cell order is otherwise preserved.
fn refine(g: &Graph, cells: &mut Vec<u16>) {
    let mut buf: Vec<u16> = Vec::with_capacity(MAX_GRAPH_VERTICES);
    'outer: loop {
        for s in 0..cells.len() {
            let splitter = cells[s];
            buf.clear();
            let mut split = false;
            for &cell in cells.iter() {
                if cell.count_ones() == 1 {
                    buf.push(cell);
                    continue;
                }
                let mut by_count = [0u16; MAX_GRAPH_VERTICES + 1];
                let mut lo = usize::MAX;
                let mut hi = 0;
                for v in BitIter(cell as u32) {
                    let k = (g.neighbors_mask(v) & splitter).count_ones() as usize;
                    by_count[k] |= 1 << v;
                    lo = lo.min(k);
                    hi = hi.max(k);
                }
                if lo == hi {
                    buf.push(cell);
                } else {
                    split = true;
                    buf.extend(by_count[lo..=hi].iter().copied().filter(|&m| m != 0));
                }
            }
            if split {
                std::mem::swap(cells, &mut buf);
                continue 'outer;
            }
        }
        return;
    }
}

struct GraphSearch<'g> {
    g: &'g Graph,
    first: Option<(u128, Vec<u8>, Vec<u8>)>,
    best: Option<(u128, Vec<u8>, Vec<u8>)>,
    automorphisms: Vec<[u8; MAX_GRAPH_VERTICES]>,
}

impl<'g> GraphSearch<'g> {
    /// Explores the node with partition `cells` reached via `path`.
    /// Returns `Some(k)` to abandon everything below depth `k`.
    fn explore(&mut self, cells: &[u16], path: &mut Vec<u8>) -> Option<usize> {
        let depth = path.len();
        let Some(target) = cells.iter().position(|c| c.count_ones() > 1) else {
            return self.leaf(cells, path);
        };
        let cell = cells[target];
        let mut explored: Vec<usize> = Vec::new();
        for v in BitIter(cell as u32) {
            if !explored.is_empty() && self.same_orbit(path, &explored, v) {
                continue;
            }
            explored.push(v);
            let mut child = Vec::with_capacity(cells.len() + 1);
            child.extend_from_slice(&cells[..target]);
            child.push(1 << v);
            child.push(cell & !(1 << v));
            child.extend_from_slice(&cells[target + 1..]);
            refine(self.g, &mut child);
            path.push(v as u8);
            let jump = self.explore(&child, path);
            path.pop();
            if let Some(k) = jump {
                if k < depth {
                    return Some(k);
                }
            }
        }
        None
    }

    /// Whether `v` shares an orbit with an explored sibling under the
    /// automorphisms found so far that fix `path` pointwise.
    fn same_orbit(&self, path: &[u8], explored: &[usize], v: usize) -> bool {
        let mut parent: [u8; MAX_GRAPH_VERTICES] = std::array::from_fn(|i| i as u8);
        fn find(p: &mut [u8; MAX_GRAPH_VERTICES], mut x: usize) -> usize {
            while p[x] as usize != x {
                p[x] = p[p[x] as usize];
                x = p[x] as usize;
            }
            x
        }
        let mut any = false;
        for gamma in &self.automorphisms {
            if path.iter().any(|&p| gamma[p as usize] != p) {
                continue;
            }
            any = true;
            for x in 0..self.g.order() {
                let (a, b) = (find(&mut parent, x), find(&mut parent, gamma[x] as usize));
                if a != b {
                    parent[a] = b as u8;
                }
            }
        }
        if !any {
            return false;
        }
        let root = find(&mut parent, v);
        explored.iter().any(|&w| find(&mut parent, w) == root)
    }

    fn leaf(&mut self, cells: &[u16], path: &[u8]) -> Option<usize> {
        let n = self.g.order();
        let mut label = vec![0u8; n];
        for (i, &c) in cells.iter().enumerate() {
            label[c.trailing_zeros() as usize] = i as u8;
        }
        let code = labeled_bits(self.g, &label);
        let Some((first_code, first_label, first_path)) = &self.first else {
            self.first = Some((code, label.clone(), path.to_vec()));
            self.best = Some((code, label, path.to_vec()));
            return None;
        };
        if code == *first_code {
            let k = common_prefix(path, first_path);
            self.automorphisms.push(automorphism(first_label, &label));
            return Some(k);
        }
        let (best_code, best_label, best_path) = self.best.as_ref().expect("set with first");
        if code == *best_code {
            let k = common_prefix(path, best_path);
            self.automorphisms.push(automorphism(best_label, &label));
            return Some(k);
        }
        if code > *best_code {
            self.best = Some((code, label, path.to_vec()));
        }
        None
    }
}

fn common_prefix(a: &[u8], b: &[u8]) -> usize {
    a.iter().zip(b).take_while(|(x, y)| x == y).count()
}

/// The permutation sending the vertex labeled `i` in `from` to the vertex
/// labeled `i` in `to`.
fn automorphism(from: &[u8], to: &[u8]) -> [u8; MAX_GRAPH_VERTICES] {
    let n = from.len();
    let mut inv_to = [0u8; MAX_GRAPH_VERTICES];
    for v in 0..n {
        inv_to[to[v] as usize] = v as u8;
    }
    let mut gamma = [0u8; MAX_GRAPH_VERTICES];
    for v in 0..n {
        gamma[v] = inv_to[from[v] as usize];
    }
    gamma
}

/// Canonical labeling of any graph (connected or not): returns the maximal
/// upper-triangle adjacency code and a labeling `v -> label` achieving it.
pub fn graph_canonical_form(g: &Graph) -> (u128, Vec<u8>) {
    let n = g.order();
    if n == 0 {
        return (0, Vec::new());
    }
    let all = if n == 16 { u16::MAX } else { (1u16 << n) - 1 };
    let mut cells = vec![all];
    refine(g, &mut cells);
    let mut search = GraphSearch { g, first: None, best: None, automorphisms: Vec::new() };
    search.explore(&cells, &mut Vec::with_capacity(n));
    let (code, label, _) = search.best.expect("search reaches a leaf");
    (code, label)
}

/// Canonical code of a connected simple graph.
pub fn graph_canonical_code(g: &Graph) -> Result<CanonicalCode> {
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    let (code, _) = graph_canonical_form(g);
    Ok(CanonicalCode(format_graph_code(g.order(), code).into_bytes()))
}

pub(crate) fn format_graph_code(n: usize, code: u128) -> String {
    let width = (n * n.saturating_sub(1) / 2).div_ceil(4).max(1);
    format!("{n}:{code:0width$x}")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::plantri::parse_line;
    use rand::prelude::*;

    const K7: &str = "7 bcdefg,agdfec,abegfd,acfbge,adgcbf,aebdcg,afcedb";

    fn brute_force_code(g: &Graph) -> u128 {
        let n = g.order();
        let mut perm: Vec<u8> = (0..n as u8).collect();
        let mut best = 0;
        permute_all(&mut perm, 0, &mut |p| best = best.max(labeled_bits(g, p)));
        best
    }

    fn permute_all(p: &mut Vec<u8>, k: usize, f: &mut impl FnMut(&[u8])) {
        if k == p.len() {
            f(p);
            return;
        }
        for i in k..p.len() {
            p.swap(k, i);
            permute_all(p, k + 1, f);
            p.swap(k, i);
        }
    }

    #[test]
    fn pair_shift_is_a_bijection() {
        for n in 2..=16 {
            let mut seen = std::collections::HashSet::new();
            for i in 0..n {
                for j in i + 1..n {
                    assert!(seen.insert(pair_shift(n, i, j)));
                }
            }
            assert_eq!(seen.len(), n * (n - 1) / 2);
            assert_eq!(pair_shift(n, 0, 1) as usize, n * (n - 1) / 2 - 1);
        }
    }

    #[test]
    fn map_code_ignores_relabeling_and_reflection() {
        let m = parse_line(K7).unwrap();
        let code = canonical_code(&m).unwrap();
        let mut rng = StdRng::seed_from_u64(7);
        for _ in 0..20 {
            let mut perm: Vec<usize> = (0..7).collect();
            perm.shuffle(&mut rng);
            let r = m.relabel(&perm).unwrap();
            let r = if rng.gen() { r.mirror() } else { r };
            assert_eq!(canonical_code(&r).unwrap(), code);
        }
        assert!(are_isomorphic(&m, &m.mirror()).unwrap());
    }

    #[test]
    fn map_code_is_a_reparseable_line() {
        let m = parse_line(K7).unwrap();
        let code = canonical_code(&m).unwrap();
        let again = parse_line(&code.to_string()).unwrap();
        assert_eq!(canonical_code(&again).unwrap(), code);
    }

    #[test]
    fn different_maps_differ() {
        let k7 = parse_line(K7).unwrap();
        let tri = parse_line("3 bc,ca,ab").unwrap();
        assert!(!are_isomorphic(&k7, &tri).unwrap());
        let a = parse_line("8 bcde,aefgdh,ahgf,afhbg,aghfb,behdcg,bfced,bdfec").unwrap();
        let b = parse_line("8 bcd,aefgh,ahegf,afhge,bdgchf,behdcg,bfcedh,bgdfec").unwrap();
        assert_ne!(canonical_code(&a).unwrap(), canonical_code(&b).unwrap());
    }

    #[test]
    fn disconnected_inputs_are_rejected() {
        let m = crate::map::build_map(4, &[vec![1], vec![0], vec![3], vec![2]]).unwrap();
        assert_eq!(canonical_code(&m), Err(Error::Disconnected));
        assert_eq!(graph_canonical_code(&Graph::new(3)), Err(Error::Disconnected));
    }

    #[test]
    fn graph_code_agrees_with_brute_force_isomorphism() {
        // The all-permutations maximum is itself a complete invariant, so
        // the two codes must induce the same partition into classes.
        let mut rng = StdRng::seed_from_u64(11);
        let mut pairs: std::collections::HashMap<(usize, u128), u128> = Default::default();
        let mut back: std::collections::HashMap<(usize, u128), u128> = Default::default();
        for _ in 0..400 {
            let n = rng.gen_range(1..=7);
            let mut g = Graph::new(n);
            let p = rng.gen_range(0.1..0.9);
            for u in 0..n {
                for v in u + 1..n {
                    if rng.gen_bool(p) {
                        g.add_edge(u, v);
                    }
                }
            }
            let mut perm: Vec<usize> = (0..n).collect();
            perm.shuffle(&mut rng);
            let h = g.permuted(&perm);
            let (code, label) = graph_canonical_form(&g);
            assert_eq!(labeled_bits(&g, &label), code);
            assert_eq!(graph_canonical_form(&h).0, code, "{g:?}");
            let brute = brute_force_code(&g);
            assert_eq!(*pairs.entry((n, code)).or_insert(brute), brute);
            assert_eq!(*back.entry((n, brute)).or_insert(code), code);
        }
    }

    #[test]
    fn highly_symmetric_graphs_finish() {
        for n in [1, 5, 12, 16] {
            let (code, _) = graph_canonical_form(&Graph::new(n));
            assert_eq!(code, 0);
            let (code, _) = graph_canonical_form(&Graph::complete(n));
            assert_eq!(code.count_ones() as usize, n * (n - 1) / 2);
        }
        let (_, _) = graph_canonical_form(&Graph::cycle(16));
    }

    #[test]
    fn cube_and_k33_differ_and_c5_p5_differ() {
        let cube = Graph::from_edges(
            8,
            &[(0, 1), (1, 2), (2, 3), (3, 0), (4, 5), (5, 6), (6, 7), (7, 4), (0, 4), (1, 5), (2, 6), (3, 7)],
        );
        let k33 = Graph::from_edges(6, &[(0, 3), (0, 4), (0, 5), (1, 3), (1, 4), (1, 5), (2, 3), (2, 4), (2, 5)]);
        assert_ne!(graph_canonical_code(&cube).unwrap(), graph_canonical_code(&k33).unwrap());
        assert_ne!(graph_canonical_code(&Graph::cycle(5)).unwrap(), graph_canonical_code(&Graph::path(5)).unwrap());
        // The cube against a same-size 3-regular graph with triangles.
        let prism_like = Graph::from_edges(
            8,
            &[(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3), (0, 6), (1, 7), (2, 6), (3, 7), (4, 6), (5, 7)],
        );
        assert_eq!(cube.edge_count(), prism_like.edge_count());
        assert_ne!(brute_force_code(&cube), brute_force_code(&prism_like));
        assert_ne!(graph_canonical_form(&cube).0, graph_canonical_form(&prism_like).0);
    }

    #[test]
    fn complete_graph_code_is_fixed() {
        let mut rng = StdRng::seed_from_u64(3);
        let k7 = Graph::complete(7);
        let code = graph_canonical_code(&k7).unwrap();
        for _ in 0..5 {
            let mut perm: Vec<usize> = (0..7).collect();
            perm.shuffle(&mut rng);
            assert_eq!(graph_canonical_code(&k7.permuted(&perm)).unwrap(), code);
        }
    }
}
