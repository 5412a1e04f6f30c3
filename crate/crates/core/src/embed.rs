//! Enumeration of the torus embeddings of a graph.
//!
//! Rotations are chosen vertex by vertex and, within a vertex, one
//! successor link at a time. Every link `next(x) = y` fixes one step of a
//! face walk (`twin(x) -> y`), so partial face walks are maintained as
//! paths of darts and checked as soon as they grow:
//!
//! * a walk that closes becomes a face; the number of closed faces may not
//!   exceed `E - V`, and the darts still open must be able to supply the
//!   missing faces (each needs at least three darts);
//! * in polyhedral mode a walk may not revisit a vertex, a closed face must
//!   be an induced cycle, and two closed faces may share at most one vertex
//!   or the two ends of one edge.
//!
//! Leaves therefore have exactly `E - V` faces, i.e. genus one.

use crate::graph::{BitIter, Graph};
use crate::map::{build_map, EmbeddedMap};

const NONE: u16 = u16::MAX;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct EmbedOptions {
    /// Keep only embeddings whose faces are induced cycles meeting properly.
    pub polyhedral: bool,
    /// Emit only one rotation system of each mirror-image pair.
    pub skip_mirrors: bool,
}

enum Undo {
    Close { len: usize },
    Join { s: usize, e: usize, old_s: u16, old_e: u16, old_mask: u32, old_len: u16 },
}

struct Engine<'g, F> {
    g: &'g Graph,
    options: EmbedOptions,
    offset: Vec<usize>,
    origin: Vec<u8>,
    head: Vec<u8>,
    twin: Vec<u16>,
    order: Vec<usize>,
    next: Vec<u16>,
    other_end: Vec<u16>,
    start_mask: Vec<u32>,
    start_len: Vec<u16>,
    closed: Vec<u32>,
    open_darts: usize,
    target_faces: usize,
    min_face: usize,
    mirror_vertex: Option<usize>,
    emit: F,
}

impl<'g, F: FnMut(&[Vec<usize>])> Engine<'g, F> {
    fn new(g: &'g Graph, options: EmbedOptions, emit: F) -> Option<Self> {
        let n = g.order();
        let e = g.edge_count();
        if n < 3 || !g.is_connected() || e <= n {
            return None;
        }
        let mut offset = Vec::with_capacity(n + 1);
        let mut origin = Vec::new();
        let mut head = Vec::new();
        for v in 0..n {
            offset.push(origin.len());
            for w in g.neighbors(v) {
                origin.push(v as u8);
                head.push(w as u8);
            }
        }
        offset.push(origin.len());
        let darts = origin.len();
        let twin = (0..darts)
            .map(|d| {
                let (v, w) = (origin[d] as usize, head[d] as usize);
                let local = g.neighbors(w).position(|x| x == v).expect("symmetric adjacency");
                (offset[w] + local) as u16
            })
            .collect();

        // Greedy order: most already-placed neighbors first, then degree.
        let mut order = Vec::with_capacity(n);
        let mut placed = 0u32;
        while order.len() < n {
            let v = (0..n)
                .filter(|&v| placed & (1 << v) == 0)
                .max_by_key(|&v| {
                    let inside = (g.neighbors_mask(v) as u32 & placed).count_ones();
                    (inside, g.degree(v), std::cmp::Reverse(v))
                })
                .expect("unplaced vertex");
            order.push(v);
            placed |= 1 << v;
        }
        let mirror_vertex = if options.skip_mirrors { order.iter().copied().find(|&v| g.degree(v) >= 3) } else { None };
        let min_face = if options.polyhedral || g.min_degree() >= 2 { 3 } else { 1 };

        Some(Engine {
            g,
            options,
            offset,
            start_mask: origin.iter().map(|&v| 1u32 << v).collect(),
            origin,
            head,
            twin,
            order,
            next: vec![NONE; darts],
            other_end: (0..darts as u16).collect(),
            start_len: vec![1; darts],
            closed: Vec::new(),
            open_darts: darts,
            target_faces: e - n,
            min_face,
            mirror_vertex,
            emit,
        })
    }

    /// Sets `next(x) = y`. Returns `None` (with no state change) when the
    /// resulting partial face structure cannot complete.
    fn link(&mut self, x: usize, y: usize) -> Option<Undo> {
        let z = self.twin[x] as usize;
        let s = self.other_end[z] as usize;
        if s == y {
            let mask = self.start_mask[s];
            let len = self.start_len[s] as usize;
            let faces = self.closed.len() + 1;
            let open = self.open_darts - len;
            if faces > self.target_faces || faces + open / self.min_face < self.target_faces {
                return None;
            }
            if self.options.polyhedral && !self.face_is_proper(mask, len) {
                return None;
            }
            self.closed.push(mask);
            self.open_darts = open;
            self.next[x] = y as u16;
            Some(Undo::Close { len })
        } else {
            let e = self.other_end[y] as usize;
            if self.options.polyhedral && !self.join_is_proper(s, y, e) {
                return None;
            }
            let undo = Undo::Join {
                s,
                e,
                old_s: self.other_end[s],
                old_e: self.other_end[e],
                old_mask: self.start_mask[s],
                old_len: self.start_len[s],
            };
            self.other_end[s] = e as u16;
            self.other_end[e] = s as u16;
            self.start_mask[s] |= self.start_mask[y];
            self.start_len[s] += self.start_len[y];
            self.next[x] = y as u16;
            Some(undo)
        }
    }

    fn unlink(&mut self, x: usize, undo: Undo) {
        self.next[x] = NONE;
        match undo {
            Undo::Close { len } => {
                self.closed.pop();
                self.open_darts += len;
            }
            Undo::Join { s, e, old_s, old_e, old_mask, old_len } => {
                self.start_len[s] = old_len;
                self.start_mask[s] = old_mask;
                self.other_end[e] = old_e;
                self.other_end[s] = old_s;
            }
        }
    }

    /// Joining the walk starting at `s` to the walk `y ..= e` must keep it
    /// vertex-simple (except for returning to its first vertex), induced,
    /// and compatible with every closed face.
    fn join_is_proper(&self, s: usize, y: usize, e: usize) -> bool {
        let first = self.origin[s] as usize;
        let last = self.head[e] as usize;
        let (left, right) = (self.start_mask[s], self.start_mask[y]);
        if left & right != 0 {
            return false;
        }
        let origins = left | right;
        let ring = last == first;
        if !ring && origins & (1 << last) != 0 {
            return false;
        }
        let walk = origins | (1 << last);
        let darts = (self.start_len[s] + self.start_len[y]) as u32;
        let mut twice_edges = 0;
        for v in BitIter(walk) {
            twice_edges += (self.g.neighbors_mask(v) as u32 & walk).count_ones();
        }
        let expected = if ring {
            if darts < 3 {
                return false;
            }
            darts
        } else {
            darts + self.g.has_edge(first, last) as u32
        };
        if twice_edges != 2 * expected {
            return false;
        }
        self.meets_closed_faces(walk)
    }

    /// Any face that will contain the vertices of `mask` can share at most
    /// one vertex, or the two ends of an edge, with each closed face.
    fn meets_closed_faces(&self, mask: u32) -> bool {
        self.closed.iter().all(|&other| {
            let shared = other & mask;
            match shared.count_ones() {
                0 | 1 => true,
                2 => {
                    let a = shared.trailing_zeros() as usize;
                    let b = 31 - shared.leading_zeros() as usize;
                    self.g.has_edge(a, b)
                }
                _ => false,
            }
        })
    }

    /// A closed simple walk on the vertices of `mask`: it must be an induced
    /// cycle of length at least 3 meeting every closed face properly.
    fn face_is_proper(&self, mask: u32, len: usize) -> bool {
        if len < 3 {
            return false;
        }
        for v in BitIter(mask) {
            if (self.g.neighbors_mask(v) as u32 & mask).count_ones() != 2 {
                return false;
            }
        }
        self.meets_closed_faces(mask)
    }

    fn vertex(&mut self, k: usize) {
        if k == self.order.len() {
            self.emit_current();
            return;
        }
        let v = self.order[k];
        let base = self.offset[v];
        if self.g.degree(v) == 1 {
            if let Some(undo) = self.link(base, base) {
                self.vertex(k + 1);
                self.unlink(base, undo);
            }
            return;
        }
        self.dart(k, v, 0, 1);
    }

    fn dart(&mut self, k: usize, v: usize, current: usize, placed: u32) {
        let base = self.offset[v];
        let degree = self.g.degree(v);
        let x = base + current;
        if placed.count_ones() as usize == degree {
            if let Some(undo) = self.link(x, base) {
                self.vertex(k + 1);
                self.unlink(x, undo);
            }
            return;
        }
        let mirror_here = self.mirror_vertex == Some(v);
        for local in 1..degree {
            if placed & (1 << local) != 0 {
                continue;
            }
            if mirror_here && local == 2 && placed & 0b10 == 0 {
                continue;
            }
            if let Some(undo) = self.link(x, base + local) {
                self.dart(k, v, local, placed | (1 << local));
                self.unlink(x, undo);
            }
        }
    }

    fn emit_current(&mut self) {
        let n = self.g.order();
        let mut lists = Vec::with_capacity(n);
        for v in 0..n {
            let base = self.offset[v];
            let degree = self.offset[v + 1] - base;
            let mut list = Vec::with_capacity(degree);
            let mut d = base;
            for _ in 0..degree {
                list.push(self.head[d] as usize);
                d = self.next[d] as usize;
            }
            debug_assert_eq!(d, base);
            lists.push(list);
        }
        debug_assert!(self.origin.len() == self.next.len());
        (self.emit)(&lists);
    }
}

/// Calls `emit` with the neighbor lists of every genus-one rotation system
/// of `g` accepted by `options`. Disconnected graphs and graphs with too
/// few edges for the torus produce nothing.
pub fn for_each_torus_embedding(g: &Graph, options: EmbedOptions, emit: impl FnMut(&[Vec<usize>])) {
    if let Some(mut engine) = Engine::new(g, options, emit) {
        engine.vertex(0);
    }
}

/// All rotation systems of `g` with genus exactly one, each once.
pub fn enumerate_torus_embeddings(g: &Graph) -> Vec<EmbeddedMap> {
    collect(g, EmbedOptions::default())
}

/// The genus-one rotation systems of `g` whose faces are induced cycles that
/// meet properly, one per mirror-image pair.
pub fn polyhedral_torus_embeddings(g: &Graph) -> Vec<EmbeddedMap> {
    collect(g, EmbedOptions { polyhedral: true, skip_mirrors: true })
}

fn collect(g: &Graph, options: EmbedOptions) -> Vec<EmbeddedMap> {
    let mut out = Vec::new();
    for_each_torus_embedding(g, options, |lists| {
        out.push(build_map(lists.len(), lists).expect("engine emits simple rotation systems"));
    });
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyhedral::is_tpm;

    /// Every rotation system of `g`, by brute force.
    fn all_rotation_systems(g: &Graph) -> Vec<EmbeddedMap> {
        let n = g.order();
        let cyclic: Vec<Vec<Vec<usize>>> = (0..n)
            .map(|v| {
                let nb: Vec<usize> = g.neighbors(v).collect();
                if nb.len() <= 1 {
                    return vec![nb];
                }
                let mut out = Vec::new();
                let mut rest = nb[1..].to_vec();
                permute(&mut rest, 0, &mut |p| {
                    let mut l = vec![nb[0]];
                    l.extend_from_slice(p);
                    out.push(l);
                });
                out
            })
            .collect();
        let mut out = Vec::new();
        let mut idx = vec![0usize; n];
        'outer: loop {
            let lists: Vec<Vec<usize>> = (0..n).map(|v| cyclic[v][idx[v]].clone()).collect();
            out.push(build_map(n, &lists).unwrap());
            for k in 0..n {
                idx[k] += 1;
                if idx[k] < cyclic[k].len() {
                    continue 'outer;
                }
                idx[k] = 0;
            }
            return out;
        }
    }

    fn permute(p: &mut Vec<usize>, k: usize, f: &mut impl FnMut(&[usize])) {
        if k == p.len() {
            f(p);
            return;
        }
        for i in k..p.len() {
            p.swap(k, i);
            permute(p, k + 1, f);
            p.swap(k, i);
        }
    }

    fn sorted_lists(maps: &[EmbeddedMap]) -> Vec<Vec<Vec<usize>>> {
        let mut v: Vec<_> = maps
            .iter()
            .map(|m| {
                m.neighbor_lists()
                    .into_iter()
                    .map(|l| {
                        let i = l.iter().enumerate().min_by_key(|&(_, &w)| w).map_or(0, |(i, _)| i);
                        let mut r = l[i..].to_vec();
                        r.extend_from_slice(&l[..i]);
                        r
                    })
                    .collect()
            })
            .collect();
        v.sort();
        v
    }

    fn check_against_brute_force(g: &Graph) {
        let brute: Vec<EmbeddedMap> =
            all_rotation_systems(g).into_iter().filter(|m| m.euler_genus().unwrap() == 1).collect();
        let fast = enumerate_torus_embeddings(g);
        assert_eq!(sorted_lists(&fast), sorted_lists(&brute), "{g:?}");

        let brute_poly: Vec<EmbeddedMap> = brute.into_iter().filter(|m| is_tpm(m).is_polyhedral).collect();
        let mut fast_poly = Vec::new();
        for_each_torus_embedding(g, EmbedOptions { polyhedral: true, skip_mirrors: false }, |l| {
            fast_poly.push(build_map(l.len(), l).unwrap())
        });
        assert_eq!(sorted_lists(&fast_poly), sorted_lists(&brute_poly), "{g:?}");
        // Halving keeps exactly one of each mirror pair.
        assert_eq!(polyhedral_torus_embeddings(g).len() * 2, brute_poly.len());
    }

    #[test]
    fn matches_brute_force_on_small_graphs() {
        check_against_brute_force(&Graph::complete(5));
        let k33 = Graph::from_edges(6, &[(0, 3), (0, 4), (0, 5), (1, 3), (1, 4), (1, 5), (2, 3), (2, 4), (2, 5)]);
        check_against_brute_force(&k33);
        // Octahedron plus one diagonal.
        let mut oct = Graph::complete(6);
        oct.remove_edge(0, 1);
        oct.remove_edge(2, 3);
        oct.remove_edge(4, 5);
        oct.add_edge(4, 5);
        check_against_brute_force(&oct);
        // A graph with a pendant vertex.
        let mut pend = Graph::new(5);
        for (u, v) in [(0, 1), (1, 2), (2, 0), (0, 3), (1, 3), (2, 3), (3, 4)] {
            pend.add_edge(u, v);
        }
        check_against_brute_force(&pend);
    }

    #[test]
    fn trees_and_cycles_have_no_torus_embeddings() {
        assert!(enumerate_torus_embeddings(&Graph::path(6)).is_empty());
        assert!(enumerate_torus_embeddings(&Graph::cycle(3)).is_empty());
    }

    #[test]
    fn k7_has_polyhedral_embeddings() {
        let maps = polyhedral_torus_embeddings(&Graph::complete(7));
        assert!(!maps.is_empty());
        assert!(maps.iter().all(|m| is_tpm(m).is_tpm()));
    }
}
