//! Rotation systems over darts.
//!
//! An [`EmbeddedMap`] stores, for every vertex, the cyclic order of the darts
//! leaving it. Darts of one vertex are allocated contiguously, in the order
//! of the rotation passed to [`build_map`]. Faces are the orbits of the
//! face-successor permutation `d -> next(twin(d))`.

use std::collections::VecDeque;
use std::fmt;

use crate::error::{Error, Result};

/// One directed side of an edge.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Dart(u32);

impl Dart {
    #[inline]
    pub fn new(index: usize) -> Self {
        Dart(index as u32)
    }

    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for Dart {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "d{}", self.0)
    }
}

/// An undirected edge, named by the smaller dart of its pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EdgeRef(Dart);

impl EdgeRef {
    /// Names an edge by a dart; only valid when `d` is the smaller of its pair.
    pub fn new(d: Dart) -> Self {
        EdgeRef(d)
    }

    pub fn dart(self) -> Dart {
        self.0
    }
}

impl fmt::Display for EdgeRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "e{}", self.0 .0)
    }
}

/// A 2-cell embedding of a simple graph in an orientable surface, given as
/// a rotation system. Immutable once built.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EmbeddedMap {
    origin: Vec<u32>,
    twin: Vec<Dart>,
    rotations: Vec<Vec<Dart>>,
    next: Vec<Dart>,
    prev: Vec<Dart>,
}

/// Builds a map from per-vertex neighbor lists given in cyclic order.
pub fn build_map(vertex_count: usize, neighbor_lists: &[Vec<usize>]) -> Result<EmbeddedMap> {
    if neighbor_lists.len() != vertex_count {
        return Err(Error::Syntax(format!(
            "{} neighbor lists given for {} vertices",
            neighbor_lists.len(),
            vertex_count
        )));
    }
    let mut offsets = Vec::with_capacity(vertex_count + 1);
    let mut total = 0;
    for (v, list) in neighbor_lists.iter().enumerate() {
        offsets.push(total);
        for (i, &w) in list.iter().enumerate() {
            if w >= vertex_count {
                return Err(Error::Range { vertex: v, neighbor: w });
            }
            if w == v {
                return Err(Error::Loop { vertex: v });
            }
            if list[..i].contains(&w) {
                return Err(Error::MultiEdge { vertex: v, neighbor: w });
            }
        }
        total += list.len();
    }
    offsets.push(total);

    let mut origin = Vec::with_capacity(total);
    let mut twin = Vec::with_capacity(total);
    let mut rotations = Vec::with_capacity(vertex_count);
    for (v, list) in neighbor_lists.iter().enumerate() {
        let mut rotation = Vec::with_capacity(list.len());
        for (i, &w) in list.iter().enumerate() {
            let back = neighbor_lists[w].iter().position(|&x| x == v).ok_or(Error::Asymmetry { from: v, to: w })?;
            origin.push(v as u32);
            twin.push(Dart::new(offsets[w] + back));
            rotation.push(Dart::new(offsets[v] + i));
        }
        rotations.push(rotation);
    }
    Ok(EmbeddedMap::assemble(origin, twin, rotations))
}

impl EmbeddedMap {
    /// Assembles a map from raw dart data. The caller guarantees that
    /// `twin` is a fixed-point-free involution and that `rotations`
    /// partitions the darts by origin.
    pub(crate) fn assemble(origin: Vec<u32>, twin: Vec<Dart>, rotations: Vec<Vec<Dart>>) -> Self {
        let n = twin.len();
        let mut next = vec![Dart(0); n];
        let mut prev = vec![Dart(0); n];
        for rotation in &rotations {
            let k = rotation.len();
            for i in 0..k {
                let d = rotation[i];
                let e = rotation[(i + 1) % k];
                next[d.index()] = e;
                prev[e.index()] = d;
            }
        }
        debug_assert!(twin.iter().enumerate().all(|(d, &t)| t.index() != d && twin[t.index()].index() == d));
        EmbeddedMap { origin, twin, rotations, next, prev }
    }

    pub fn vertex_count(&self) -> usize {
        self.rotations.len()
    }

    pub fn dart_count(&self) -> usize {
        self.twin.len()
    }

    pub fn edge_count(&self) -> usize {
        self.twin.len() / 2
    }

    pub fn degree(&self, v: usize) -> usize {
        self.rotations[v].len()
    }

    pub fn darts(&self) -> impl Iterator<Item = Dart> + '_ {
        (0..self.dart_count()).map(Dart::new)
    }

    #[inline]
    pub fn origin(&self, d: Dart) -> usize {
        self.origin[d.index()] as usize
    }

    #[inline]
    pub fn twin(&self, d: Dart) -> Dart {
        self.twin[d.index()]
    }

    /// The vertex a dart points at.
    #[inline]
    pub fn head(&self, d: Dart) -> usize {
        self.origin(self.twin(d))
    }

    /// Successor of `d` in the rotation at its origin.
    #[inline]
    pub fn next(&self, d: Dart) -> Dart {
        self.next[d.index()]
    }

    #[inline]
    pub fn prev(&self, d: Dart) -> Dart {
        self.prev[d.index()]
    }

    /// The dart following `d` along its face boundary.
    #[inline]
    pub fn face_successor(&self, d: Dart) -> Dart {
        self.next(self.twin(d))
    }

    pub fn rotation(&self, v: usize) -> &[Dart] {
        &self.rotations[v]
    }

    pub fn edge_of(&self, d: Dart) -> EdgeRef {
        EdgeRef(d.min(self.twin(d)))
    }

    /// All edges, ordered by their smaller dart.
    pub fn edges(&self) -> impl Iterator<Item = EdgeRef> + '_ {
        self.darts().filter(|&d| d < self.twin(d)).map(EdgeRef)
    }

    pub fn endpoints(&self, e: EdgeRef) -> (usize, usize) {
        (self.origin(e.0), self.head(e.0))
    }

    /// Edges with their endpoint pairs, in `EdgeRef` order.
    pub fn edge_list(&self) -> Vec<(EdgeRef, usize, usize)> {
        self.edges()
            .map(|e| {
                let (u, v) = self.endpoints(e);
                (e, u, v)
            })
            .collect()
    }

    /// The dart from `u` to `v`, if the edge exists.
    pub fn dart_between(&self, u: usize, v: usize) -> Option<Dart> {
        self.rotations.get(u)?.iter().copied().find(|&d| self.head(d) == v)
    }

    pub fn find_edge(&self, u: usize, v: usize) -> Option<EdgeRef> {
        self.dart_between(u, v).map(|d| self.edge_of(d))
    }

    pub fn contains_edge(&self, e: EdgeRef) -> bool {
        e.0.index() < self.dart_count() && e.0 < self.twin(e.0)
    }

    /// Neighbor lists in rotation order, each starting at the first stored dart.
    pub fn neighbor_lists(&self) -> Vec<Vec<usize>> {
        self.rotations.iter().map(|rot| rot.iter().map(|&d| self.head(d)).collect()).collect()
    }

    pub fn degree_sequence(&self) -> Vec<usize> {
        let mut degrees: Vec<usize> = self.rotations.iter().map(Vec::len).collect();
        degrees.sort_unstable();
        degrees
    }

    pub fn min_degree(&self) -> usize {
        self.rotations.iter().map(Vec::len).min().unwrap_or(0)
    }

    pub fn is_connected(&self) -> bool {
        let n = self.vertex_count();
        if n == 0 {
            return true;
        }
        let mut seen = vec![false; n];
        let mut queue = VecDeque::from([0usize]);
        seen[0] = true;
        let mut reached = 1;
        while let Some(v) = queue.pop_front() {
            for &d in &self.rotations[v] {
                let w = self.head(d);
                if !seen[w] {
                    seen[w] = true;
                    reached += 1;
                    queue.push_back(w);
                }
            }
        }
        reached == n
    }

    /// The same map seen from the other side of the surface: every rotation
    /// reversed.
    pub fn mirror(&self) -> EmbeddedMap {
        let rotations = self.rotations.iter().map(|rot| rot.iter().rev().copied().collect()).collect();
        EmbeddedMap::assemble(self.origin.clone(), self.twin.clone(), rotations)
    }

    /// Renames vertex `v` to `perm[v]`, keeping rotations.
    pub fn relabel(&self, perm: &[usize]) -> Result<EmbeddedMap> {
        let n = self.vertex_count();
        let mut lists = vec![Vec::new(); n];
        for (v, list) in self.neighbor_lists().into_iter().enumerate() {
            lists[perm[v]] = list.into_iter().map(|w| perm[w]).collect();
        }
        build_map(n, &lists)
    }

    /// Returns the orbits of the face-successor permutation.
    pub fn trace_faces(&self) -> FaceDecomposition {
        let n = self.dart_count();
        let mut face_of = vec![usize::MAX; n];
        let mut faces = Vec::new();
        for start in self.darts() {
            if face_of[start.index()] != usize::MAX {
                continue;
            }
            let id = faces.len();
            let mut cycle = Vec::new();
            let mut d = start;
            loop {
                face_of[d.index()] = id;
                cycle.push(d);
                d = self.face_successor(d);
                if d == start {
                    break;
                }
            }
            faces.push(cycle);
        }
        FaceDecomposition { faces, face_of }
    }

    pub fn face_count(&self) -> usize {
        self.trace_faces().len()
    }

    /// Orientable genus from Euler's formula. Fails on disconnected maps.
    pub fn euler_genus(&self) -> Result<usize> {
        if !self.is_connected() {
            return Err(Error::Disconnected);
        }
        let v = self.vertex_count() as i64;
        let e = self.edge_count() as i64;
        // A lone vertex has one face but no darts to trace it with.
        let f = if e == 0 { 1 } else { self.face_count() as i64 };
        let chi = v - e + f;
        debug_assert!(chi <= 2 && (2 - chi) % 2 == 0);
        Ok(((2 - chi) / 2) as usize)
    }
}

/// Face boundary walks of a map.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FaceDecomposition {
    pub faces: Vec<Vec<Dart>>,
    pub face_of: Vec<usize>,
}

impl FaceDecomposition {
    pub fn len(&self) -> usize {
        self.faces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.faces.is_empty()
    }

    pub fn face_of(&self, d: Dart) -> usize {
        self.face_of[d.index()]
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.faces.iter().map(Vec::len).collect()
    }

    /// Vertices visited by face `f`, in walk order.
    pub fn boundary_vertices(&self, map: &EmbeddedMap, f: usize) -> Vec<usize> {
        self.faces[f].iter().map(|&d| map.origin(d)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn letters(s: &str) -> Vec<usize> {
        s.bytes().map(|b| (b - b'a') as usize).collect()
    }

    fn k7() -> EmbeddedMap {
        let lists: Vec<_> = "bcdefg,agdfec,abegfd,acfbge,adgcbf,aebdcg,afcedb".split(',').map(letters).collect();
        build_map(7, &lists).unwrap()
    }

    fn triangle() -> EmbeddedMap {
        build_map(3, &[vec![1, 2], vec![2, 0], vec![0, 1]]).unwrap()
    }

    /// Orbit scan that walks face-successors from the raw neighbor lists,
    /// without touching the dart machinery.
    fn orbit_sizes_from_lists(lists: &[Vec<usize>]) -> Vec<usize> {
        let mut seen = std::collections::HashSet::new();
        let mut sizes = Vec::new();
        for (u, list) in lists.iter().enumerate() {
            for &v in list {
                if seen.contains(&(u, v)) {
                    continue;
                }
                let (mut a, mut b) = (u, v);
                let mut len = 0;
                while seen.insert((a, b)) {
                    len += 1;
                    let at_b = &lists[b];
                    let i = at_b.iter().position(|&x| x == a).unwrap();
                    let c = at_b[(i + 1) % at_b.len()];
                    a = b;
                    b = c;
                }
                sizes.push(len);
            }
        }
        sizes.sort_unstable();
        sizes
    }

    #[test]
    fn k7_counts() {
        let m = k7();
        assert_eq!(m.vertex_count(), 7);
        assert_eq!(m.edge_count(), 21);
        assert_eq!(m.dart_count(), 42);
        assert_eq!(m.degree_sequence(), vec![6; 7]);
        let faces = m.trace_faces();
        assert_eq!(faces.len(), 14);
        assert!(faces.sizes().iter().all(|&s| s == 3));
        assert_eq!(m.euler_genus().unwrap(), 1);
    }

    #[test]
    fn face_scan_matches_independent_orbits() {
        let m = k7();
        let mut sizes = m.trace_faces().sizes();
        sizes.sort_unstable();
        assert_eq!(sizes, orbit_sizes_from_lists(&m.neighbor_lists()));
    }

    #[test]
    fn triangle_is_planar() {
        let t = triangle();
        assert_eq!(t.edge_count(), 3);
        assert_eq!(t.trace_faces().sizes(), vec![3, 3]);
        assert_eq!(t.euler_genus().unwrap(), 0);
    }

    #[test]
    fn construction_errors() {
        assert_eq!(build_map(3, &[vec![1, 2], vec![0], vec![0, 1]]), Err(Error::Asymmetry { from: 2, to: 1 }));
        assert_eq!(build_map(2, &[vec![1], vec![5]]), Err(Error::Range { vertex: 1, neighbor: 5 }));
        assert_eq!(build_map(2, &[vec![0], vec![]]), Err(Error::Loop { vertex: 0 }));
        assert_eq!(build_map(2, &[vec![1, 1], vec![0]]), Err(Error::MultiEdge { vertex: 0, neighbor: 1 }));
    }

    #[test]
    fn disconnected_genus_fails() {
        let m = build_map(4, &[vec![1], vec![0], vec![3], vec![2]]).unwrap();
        assert!(!m.is_connected());
        assert_eq!(m.euler_genus(), Err(Error::Disconnected));
    }

    #[test]
    fn face_successor_convention() {
        let t = triangle();
        // a->b is followed by b->c: at b the dart after b->a is b->c.
        let ab = t.dart_between(0, 1).unwrap();
        assert_eq!(t.face_successor(ab), t.dart_between(1, 2).unwrap());
    }

    #[test]
    fn mirror_keeps_genus_and_reverses() {
        let m = k7();
        let r = m.mirror();
        assert_eq!(r.euler_genus().unwrap(), 1);
        for v in 0..7 {
            let mut a = m.neighbor_lists()[v].clone();
            a.reverse();
            assert_eq!(a, r.neighbor_lists()[v]);
        }
    }
}
