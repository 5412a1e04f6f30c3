//! Edge removing and edge shrinking, and the notions built on them.
//!
//! Both moves build a candidate map and accept it exactly when the
//! candidate is again a toroidal polyhedral map. Removing an edge coalesces
//! any endpoint left with degree 2 into a single edge; shrinking an edge
//! replaces each resulting two-sided face by a single edge.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use crate::canon::{canonical_code, CanonicalCode};
use crate::error::{Error, Result};
use crate::map::{build_map, EdgeRef, EmbeddedMap};
use crate::polyhedral::{is_tpm, Failure};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MoveKind {
    Remove,
    Shrink,
}

impl fmt::Display for MoveKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MoveKind::Remove => "remove",
            MoveKind::Shrink => "shrink",
        })
    }
}

/// Why a candidate map is not a toroidal polyhedral map.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Rejection {
    LoopCreated,
    MultiEdgeCreated,
    DegreeBelowThree,
    GenusChanged,
    Disconnected,
    ImproperMeeting,
}

impl fmt::Display for Rejection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Rejection::LoopCreated => "loop-created",
            Rejection::MultiEdgeCreated => "multi-edge-created",
            Rejection::DegreeBelowThree => "degree-below-3",
            Rejection::GenusChanged => "genus-changed",
            Rejection::Disconnected => "disconnected",
            Rejection::ImproperMeeting => "improper-meeting",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MoveOutcome {
    pub kind: MoveKind,
    pub edge: EdgeRef,
    pub result: std::result::Result<EmbeddedMap, Rejection>,
}

impl MoveOutcome {
    pub fn succeeded(&self) -> bool {
        self.result.is_ok()
    }
}

/// Rotation system of a multigraph under construction. Each slot holds the
/// neighbor and an edge id; dead vertices have empty rotations and are
/// dropped when converting back.
struct Workspace {
    rot: Vec<Vec<(usize, usize)>>,
    alive: Vec<bool>,
    next_edge: usize,
}

impl Workspace {
    fn from_map(map: &EmbeddedMap) -> Self {
        let rot = (0..map.vertex_count())
            .map(|v| map.rotation(v).iter().map(|&d| (map.head(d), map.edge_of(d).dart().index())).collect())
            .collect();
        Workspace { rot, alive: vec![true; map.vertex_count()], next_edge: map.dart_count() }
    }

    fn position(&self, v: usize, edge: usize) -> usize {
        self.rot[v].iter().position(|&(_, e)| e == edge).expect("edge incident to vertex")
    }

    fn delete_edge(&mut self, u: usize, v: usize, edge: usize) {
        let i = self.position(u, edge);
        self.rot[u].remove(i);
        let j = self.position(v, edge);
        self.rot[v].remove(j);
    }

    /// Coalesces the two edges at a degree-2 vertex.
    fn suppress(&mut self, w: usize) -> std::result::Result<(), Rejection> {
        let [(p, e1), (q, e2)] = [self.rot[w][0], self.rot[w][1]];
        if p == q {
            return Err(Rejection::LoopCreated);
        }
        if self.rot[p].iter().any(|&(x, _)| x == q) {
            return Err(Rejection::MultiEdgeCreated);
        }
        let fresh = self.next_edge;
        self.next_edge += 1;
        let i = self.position(p, e1);
        self.rot[p][i] = (q, fresh);
        let j = self.position(q, e2);
        self.rot[q][j] = (p, fresh);
        self.rot[w].clear();
        self.alive[w] = false;
        Ok(())
    }

    /// Successor of the dart `(v, i)` along its face.
    fn face_successor(&self, v: usize, i: usize) -> (usize, usize) {
        let (w, e) = self.rot[v][i];
        let j = self.rot[w].iter().position(|&(x, f)| x == v && f == e).expect("twin slot");
        (w, (j + 1) % self.rot[w].len())
    }

    /// Finds a two-sided face; returns its two edge ids (smaller first)
    /// and the endpoints.
    fn find_bigon(&self) -> Option<(usize, usize, usize, usize)> {
        let mut best: Option<(usize, usize, usize, usize)> = None;
        for v in 0..self.rot.len() {
            for i in 0..self.rot[v].len() {
                let (w, j) = self.face_successor(v, i);
                if self.face_successor(w, j) != (v, i) {
                    continue;
                }
                let (e1, e2) = (self.rot[v][i].1, self.rot[w][j].1);
                if e1 == e2 {
                    continue;
                }
                let key = (e1.min(e2), e1.max(e2), v, w);
                if best.is_none_or(|b| (key.0, key.1) < (b.0, b.1)) {
                    best = Some(key);
                }
            }
        }
        best
    }

    fn into_lists(self) -> std::result::Result<Vec<Vec<usize>>, Rejection> {
        let mut index = vec![usize::MAX; self.rot.len()];
        let mut k = 0;
        for v in 0..self.rot.len() {
            if self.alive[v] {
                index[v] = k;
                k += 1;
            }
        }
        let mut lists = Vec::with_capacity(k);
        for v in 0..self.rot.len() {
            if !self.alive[v] {
                continue;
            }
            let mut list = Vec::with_capacity(self.rot[v].len());
            for &(w, _) in &self.rot[v] {
                if w == v {
                    return Err(Rejection::LoopCreated);
                }
                let w = index[w];
                if list.contains(&w) {
                    return Err(Rejection::MultiEdgeCreated);
                }
                list.push(w);
            }
            lists.push(list);
        }
        Ok(lists)
    }
}

fn accept(ws: Workspace) -> std::result::Result<EmbeddedMap, Rejection> {
    let lists = ws.into_lists()?;
    let candidate = build_map(lists.len(), &lists).map_err(|e| match e {
        Error::Loop { .. } => Rejection::LoopCreated,
        _ => Rejection::MultiEdgeCreated,
    })?;
    let verdict = is_tpm(&candidate);
    match verdict.failure_reasons.first() {
        None => Ok(candidate),
        Some(Failure::LowDegree { .. }) => Err(Rejection::DegreeBelowThree),
        Some(Failure::Disconnected) => Err(Rejection::Disconnected),
        Some(Failure::GenusNotOne { .. }) => Err(Rejection::GenusChanged),
        Some(Failure::FaceNotSimple { .. } | Failure::ImproperMeeting { .. }) => Err(Rejection::ImproperMeeting),
    }
}

fn check_edge(map: &EmbeddedMap, e: EdgeRef) -> Result<(usize, usize)> {
    if !map.contains_edge(e) {
        return Err(Error::NotAnEdge);
    }
    Ok(map.endpoints(e))
}

/// Removes edge `e`, coalescing degree-2 endpoints (lowest index first).
pub fn remove_edge(map: &EmbeddedMap, e: EdgeRef) -> Result<MoveOutcome> {
    let (u, v) = check_edge(map, e)?;
    let mut ws = Workspace::from_map(map);
    ws.delete_edge(u, v, e.dart().index());
    let result = (|| {
        while let Some(w) = (0..ws.rot.len()).find(|&w| ws.alive[w] && ws.rot[w].len() == 2) {
            ws.suppress(w)?;
        }
        accept(ws)
    })();
    Ok(MoveOutcome { kind: MoveKind::Remove, edge: e, result })
}

/// Contracts edge `e`, then replaces two-sided faces by single edges
/// (lowest edge pair first, keeping the smaller edge).
pub fn shrink_edge(map: &EmbeddedMap, e: EdgeRef) -> Result<MoveOutcome> {
    let (u, v) = check_edge(map, e)?;
    let id = e.dart().index();
    let mut ws = Workspace::from_map(map);
    let iu = ws.position(u, id);
    let iv = ws.position(v, id);
    let from_v: Vec<(usize, usize)> = {
        let rv = &ws.rot[v];
        (1..rv.len()).map(|k| rv[(iv + k) % rv.len()]).collect()
    };
    let mut merged = Vec::with_capacity(ws.rot[u].len() + from_v.len() - 1);
    let ru = &ws.rot[u];
    for k in 0..ru.len() {
        if k == iu {
            merged.extend_from_slice(&from_v);
        } else {
            merged.push(ru[k]);
        }
    }
    for &(x, edge) in &from_v {
        let j = ws.position(x, edge);
        ws.rot[x][j].0 = u;
    }
    ws.rot[u] = merged;
    ws.rot[v].clear();
    ws.alive[v] = false;

    while let Some((keep, drop, a, b)) = ws.find_bigon() {
        debug_assert!(keep < drop);
        ws.delete_edge(a, b, drop);
    }
    let result = accept(ws);
    Ok(MoveOutcome { kind: MoveKind::Shrink, edge: e, result })
}

fn require_tpm(map: &EmbeddedMap) -> Result<()> {
    if is_tpm(map).is_tpm() {
        Ok(())
    } else {
        Err(Error::NotTpm)
    }
}

/// Edges whose removal yields a toroidal polyhedral map, in `EdgeRef` order.
pub fn removable_edges(map: &EmbeddedMap) -> Result<Vec<EdgeRef>> {
    require_tpm(map)?;
    Ok(map.edges().filter(|&e| remove_edge(map, e).is_ok_and(|o| o.succeeded())).collect())
}

/// Edges whose shrinking yields a toroidal polyhedral map, in `EdgeRef` order.
pub fn shrinkable_edges(map: &EmbeddedMap) -> Result<Vec<EdgeRef>> {
    require_tpm(map)?;
    Ok(map.edges().filter(|&e| shrink_edge(map, e).is_ok_and(|o| o.succeeded())).collect())
}

pub fn is_diminimal(map: &EmbeddedMap) -> Result<bool> {
    require_tpm(map)?;
    Ok(successors(map).next().is_none())
}

/// All successful moves from `map`, removals first, in edge order.
pub fn successors(map: &EmbeddedMap) -> impl Iterator<Item = MoveOutcome> + '_ {
    map.edges()
        .flat_map(move |e| [remove_edge(map, e), shrink_edge(map, e)])
        .filter_map(|o| o.ok())
        .filter(MoveOutcome::succeeded)
}

/// Memoized exploration of move sequences down to diminimal maps.
#[derive(Default)]
pub struct Reducer {
    endpoints: HashMap<CanonicalCode, BTreeSet<CanonicalCode>>,
}

impl Reducer {
    pub fn new() -> Self {
        Self::default()
    }

    /// Canonical codes of every diminimal map reachable from `map`.
    pub fn reduce(&mut self, map: &EmbeddedMap) -> Result<BTreeSet<CanonicalCode>> {
        require_tpm(map)?;
        let code = canonical_code(map)?;
        Ok(self.explore(map, code))
    }

    fn explore(&mut self, map: &EmbeddedMap, code: CanonicalCode) -> BTreeSet<CanonicalCode> {
        if let Some(done) = self.endpoints.get(&code) {
            return done.clone();
        }
        let mut found = BTreeSet::new();
        let mut seen = BTreeSet::new();
        let mut any = false;
        for outcome in successors(map) {
            any = true;
            let child = outcome.result.expect("successful move");
            let child_code = canonical_code(&child).expect("TPMs are connected");
            if seen.insert(child_code.clone()) {
                found.extend(self.explore(&child, child_code));
            }
        }
        if !any {
            found.insert(code.clone());
        }
        self.endpoints.insert(code, found.clone());
        found
    }

    /// Number of distinct maps visited so far.
    pub fn visited(&self) -> usize {
        self.endpoints.len()
    }
}

/// Reachable diminimal maps, or with `first_only` the one reached by always
/// taking the first successful move.
pub fn reduce(map: &EmbeddedMap, first_only: bool) -> Result<Vec<CanonicalCode>> {
    require_tpm(map)?;
    if first_only {
        let mut current = map.clone();
        loop {
            let step = successors(&current).next();
            match step {
                Some(outcome) => current = outcome.result.expect("successful move"),
                None => break,
            }
        }
        return Ok(vec![canonical_code(&current)?]);
    }
    Ok(Reducer::new().reduce(map)?.into_iter().collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::plantri::parse_line;
    use crate::polyhedral::dual;

    const K7: &str = "7 bcdefg,agdfec,abegfd,acfbge,adgcbf,aebdcg,afcedb";

    #[test]
    fn k7_has_no_moves() {
        let m = parse_line(K7).unwrap();
        for e in m.edges() {
            let r = remove_edge(&m, e).unwrap();
            let s = shrink_edge(&m, e).unwrap();
            assert!(!r.succeeded() && !s.succeeded());
        }
        assert!(removable_edges(&m).unwrap().is_empty());
        assert!(shrinkable_edges(&m).unwrap().is_empty());
        assert!(is_diminimal(&m).unwrap());
        assert_eq!(reduce(&m, false).unwrap(), vec![canonical_code(&m).unwrap()]);
    }

    #[test]
    fn k7_rejection_reasons() {
        let m = parse_line(K7).unwrap();
        let e = m.edges().next().unwrap();
        // Removing leaves a quadrilateral with a chord; shrinking merges two
        // vertices with four common neighbours, so non-bigon parallels stay.
        assert_eq!(remove_edge(&m, e).unwrap().result, Err(Rejection::ImproperMeeting));
        assert_eq!(shrink_edge(&m, e).unwrap().result, Err(Rejection::MultiEdgeCreated));
    }

    #[test]
    fn not_an_edge() {
        let m = parse_line(K7).unwrap();
        let e = m.edges().next().unwrap();
        let larger = EdgeRef::new(m.twin(e.dart()));
        assert_eq!(remove_edge(&m, larger), Err(Error::NotAnEdge));
        assert_eq!(shrink_edge(&m, EdgeRef::new(crate::map::Dart::new(999))), Err(Error::NotAnEdge));
        let tri = parse_line("3 bc,ac,ab").unwrap();
        assert_eq!(removable_edges(&tri), Err(Error::NotTpm));
    }

    #[test]
    fn removal_then_shrink_agree_through_duality_on_k7() {
        let m = parse_line(K7).unwrap();
        let d = dual(&m).unwrap();
        for e in m.edges() {
            assert_eq!(remove_edge(&m, e).unwrap().succeeded(), shrink_edge(&d, e).unwrap().succeeded());
            assert_eq!(shrink_edge(&m, e).unwrap().succeeded(), remove_edge(&d, e).unwrap().succeeded());
        }
    }
}
