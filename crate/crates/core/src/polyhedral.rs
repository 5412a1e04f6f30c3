//! Map, polyhedral-map and torus predicates, and duals.

use std::fmt;

use crate::error::{Error, Result};
use crate::map::{EdgeRef, EmbeddedMap, FaceDecomposition};

/// Why a map fails to be a toroidal polyhedral map.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Failure {
    LowDegree { vertex: usize, degree: usize },
    Disconnected,
    GenusNotOne { genus: usize },
    FaceNotSimple { face: usize, vertex: usize },
    ImproperMeeting { faces: (usize, usize) },
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::LowDegree { vertex, degree } => write!(f, "degree<3(vertex {vertex} has degree {degree})"),
            Failure::Disconnected => write!(f, "disconnected"),
            Failure::GenusNotOne { genus } => write!(f, "genus!=1(genus {genus})"),
            Failure::FaceNotSimple { face, vertex } => {
                write!(f, "face-not-simple(face {face} revisits vertex {vertex})")
            }
            Failure::ImproperMeeting { faces: (a, b) } => write!(f, "improper-meeting(faces {a} and {b})"),
        }
    }
}

/// The combined verdict of [`is_tpm`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TpmVerdict {
    pub is_map: bool,
    pub is_polyhedral: bool,
    /// `None` when the map is disconnected.
    pub genus: Option<usize>,
    pub failure_reasons: Vec<Failure>,
}

impl TpmVerdict {
    pub fn is_tpm(&self) -> bool {
        self.failure_reasons.is_empty()
    }
}

/// Checks the map conditions: connected, every vertex of degree at least 3.
/// Connected rotation systems always have 2-cell faces.
pub fn is_map(map: &EmbeddedMap) -> std::result::Result<(), Vec<Failure>> {
    let mut reasons = Vec::new();
    if !map.is_connected() || map.vertex_count() == 0 {
        reasons.push(Failure::Disconnected);
    }
    for v in 0..map.vertex_count() {
        if map.degree(v) < 3 {
            reasons.push(Failure::LowDegree { vertex: v, degree: map.degree(v) });
        }
    }
    if reasons.is_empty() {
        Ok(())
    } else {
        Err(reasons)
    }
}

/// Checks that every face is bounded by a simple cycle and that any two
/// distinct faces share nothing, one vertex, or one edge with its two
/// endpoints. Returns the first witness found.
pub fn faces_meet_properly(map: &EmbeddedMap) -> std::result::Result<(), Failure> {
    faces_meet_properly_with(map, &map.trace_faces())
}

pub(crate) fn faces_meet_properly_with(
    map: &EmbeddedMap,
    faces: &FaceDecomposition,
) -> std::result::Result<(), Failure> {
    let mut vertex_sets: Vec<Vec<usize>> = Vec::with_capacity(faces.len());
    let mut edge_sets: Vec<Vec<EdgeRef>> = Vec::with_capacity(faces.len());
    for (f, walk) in faces.faces.iter().enumerate() {
        let mut vs: Vec<usize> = walk.iter().map(|&d| map.origin(d)).collect();
        vs.sort_unstable();
        if let Some(w) = vs.windows(2).find(|w| w[0] == w[1]) {
            return Err(Failure::FaceNotSimple { face: f, vertex: w[0] });
        }
        let mut es: Vec<EdgeRef> = walk.iter().map(|&d| map.edge_of(d)).collect();
        es.sort_unstable();
        vertex_sets.push(vs);
        edge_sets.push(es);
    }
    for a in 0..faces.len() {
        for b in a + 1..faces.len() {
            let shared_vertices = intersection_count(&vertex_sets[a], &vertex_sets[b]);
            if shared_vertices <= 1 {
                continue;
            }
            let shared_edges = intersection_count(&edge_sets[a], &edge_sets[b]);
            if shared_vertices > 2 || shared_edges != 1 {
                return Err(Failure::ImproperMeeting { faces: (a, b) });
            }
        }
    }
    Ok(())
}

fn intersection_count<T: Ord>(a: &[T], b: &[T]) -> usize {
    let (mut i, mut j, mut count) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                count += 1;
                i += 1;
                j += 1;
            }
        }
    }
    count
}

/// Full verdict: map conditions, genus one, and proper meeting of faces.
pub fn is_tpm(map: &EmbeddedMap) -> TpmVerdict {
    let mut failure_reasons = match is_map(map) {
        Ok(()) => Vec::new(),
        Err(reasons) => reasons,
    };
    let is_map = failure_reasons.is_empty();
    let connected = !failure_reasons.contains(&Failure::Disconnected);
    let genus = if connected { map.euler_genus().ok() } else { None };
    if let Some(g) = genus {
        if g != 1 {
            failure_reasons.push(Failure::GenusNotOne { genus: g });
        }
    }
    let mut is_polyhedral = false;
    if connected {
        match faces_meet_properly(map) {
            Ok(()) => is_polyhedral = is_map,
            Err(reason) => failure_reasons.push(reason),
        }
    }
    TpmVerdict { is_map, is_polyhedral, genus, failure_reasons }
}

/// The dual map: one vertex per face, rotations following the face walks.
/// Dart ids are shared with the input, so edge `e` of `map` is edge `e` of
/// the dual.
pub fn dual(map: &EmbeddedMap) -> Result<EmbeddedMap> {
    if !is_tpm(map).is_tpm() {
        return Err(Error::NotTpm);
    }
    Ok(dual_unchecked(map))
}

/// Dual of any connected map whose dual is simple.
pub(crate) fn dual_unchecked(map: &EmbeddedMap) -> EmbeddedMap {
    let faces = map.trace_faces();
    let origin = (0..map.dart_count()).map(|d| faces.face_of[d] as u32).collect();
    let twin = map.darts().map(|d| map.twin(d)).collect();
    EmbeddedMap::assemble(origin, twin, faces.faces)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::canon::canonical_code;
    use crate::map::build_map;
    use crate::plantri::parse_line;

    const K7: &str = "7 bcdefg,agdfec,abegfd,acfbge,adgcbf,aebdcg,afcedb";
    const H53: &str = "14 bcd,aef,agh,aij,bkl,bmn,cnk,cml,dln,dmk,ejg,eih,fhj,fig";

    /// All rotation systems of `K5` (each vertex has 3! cyclic orders).
    fn k5_rotation_systems() -> Vec<EmbeddedMap> {
        let mut orders: Vec<Vec<Vec<usize>>> = Vec::new();
        for v in 0..5 {
            let others: Vec<usize> = (0..5).filter(|&w| w != v).collect();
            let mut cyc = Vec::new();
            let (a, rest) = (others[0], &others[1..]);
            for p in permutations(rest) {
                let mut l = vec![a];
                l.extend(p);
                cyc.push(l);
            }
            orders.push(cyc);
        }
        let mut out = Vec::new();
        let mut idx = [0usize; 5];
        loop {
            let lists: Vec<Vec<usize>> = (0..5).map(|v| orders[v][idx[v]].clone()).collect();
            out.push(build_map(5, &lists).unwrap());
            let mut k = 0;
            loop {
                idx[k] += 1;
                if idx[k] < orders[k].len() {
                    break;
                }
                idx[k] = 0;
                k += 1;
                if k == 5 {
                    return out;
                }
            }
        }
    }

    fn permutations(items: &[usize]) -> Vec<Vec<usize>> {
        if items.is_empty() {
            return vec![vec![]];
        }
        let mut out = Vec::new();
        for i in 0..items.len() {
            let mut rest = items.to_vec();
            let x = rest.remove(i);
            for mut p in permutations(&rest) {
                p.insert(0, x);
                out.push(p);
            }
        }
        out
    }

    #[test]
    fn k7_is_a_tpm() {
        let m = parse_line(K7).unwrap();
        let v = is_tpm(&m);
        assert!(v.is_map && v.is_polyhedral && v.is_tpm());
        assert_eq!(v.genus, Some(1));
    }

    #[test]
    fn triangle_is_not_a_map() {
        let v = is_tpm(&parse_line("3 bc,ca,ab").unwrap());
        assert!(!v.is_map);
        assert_eq!(v.genus, Some(0));
        assert!(!v.is_tpm());
    }

    #[test]
    fn planar_cube_meets_properly() {
        let base = [
            vec![1, 3, 4],
            vec![0, 2, 5],
            vec![1, 3, 6],
            vec![0, 2, 7],
            vec![0, 5, 7],
            vec![1, 4, 6],
            vec![2, 5, 7],
            vec![3, 4, 6],
        ];
        // Pick the orientation of each degree-3 rotation that makes it planar.
        let cube = (0..256u32)
            .map(|flips| {
                let lists: Vec<Vec<usize>> = base
                    .iter()
                    .enumerate()
                    .map(|(v, l)| if flips >> v & 1 == 1 { l.iter().rev().copied().collect() } else { l.clone() })
                    .collect();
                build_map(8, &lists).unwrap()
            })
            .find(|m| m.euler_genus().unwrap() == 0)
            .unwrap();
        assert!(faces_meet_properly(&cube).is_ok());
        let v = is_tpm(&cube);
        assert!(v.is_polyhedral);
        assert_eq!(v.failure_reasons, vec![Failure::GenusNotOne { genus: 0 }]);
    }

    #[test]
    fn k5_torus_embeddings_never_meet_properly() {
        // K5 has 5 faces on the torus, and the brute-force scan shows each
        // genus-one rotation system has a pair of faces sharing two
        // non-adjacent-on-face vertices or a repeated vertex.
        let mut torus = 0;
        let mut two_vertices_no_edge = 0;
        for m in k5_rotation_systems() {
            if m.euler_genus().unwrap() != 1 {
                continue;
            }
            torus += 1;
            let faces = m.trace_faces();
            assert_eq!(faces.len(), 5);
            assert!(faces_meet_properly(&m).is_err());
            // Independent pairwise scan for the witness kind.
            type VertexAndEdgeSets = (Vec<usize>, Vec<(usize, usize)>);
            let sets: Vec<VertexAndEdgeSets> = faces
                .faces
                .iter()
                .map(|w| {
                    let vs = w.iter().map(|&d| m.origin(d)).collect();
                    let es = w
                        .iter()
                        .map(|&d| {
                            let (a, b) = (m.origin(d), m.head(d));
                            (a.min(b), a.max(b))
                        })
                        .collect();
                    (vs, es)
                })
                .collect();
            for i in 0..5 {
                for j in i + 1..5 {
                    let sv =
                        sets[i].0.iter().filter(|x| sets[j].0.contains(x)).collect::<std::collections::HashSet<_>>();
                    let se = sets[i].1.iter().filter(|x| sets[j].1.contains(x)).count();
                    if sv.len() == 2 && se == 0 {
                        two_vertices_no_edge += 1;
                    }
                }
            }
        }
        assert!(torus > 0);
        assert!(two_vertices_no_edge > 0);
    }

    #[test]
    fn dual_of_k7() {
        let m = parse_line(K7).unwrap();
        let d = dual(&m).unwrap();
        assert_eq!(d.vertex_count(), 14);
        assert_eq!(d.edge_count(), 21);
        assert!(d.degree_sequence().iter().all(|&k| k == 3));
        let faces = d.trace_faces();
        assert_eq!(faces.len(), 7);
        assert!(faces.sizes().iter().all(|&s| s == 6));
        assert!(is_tpm(&d).is_tpm());
        assert_eq!(canonical_code(&dual(&d).unwrap()).unwrap(), canonical_code(&m).unwrap());
    }

    #[test]
    fn dual_of_fourteen_vertex_entry() {
        let m = parse_line(H53).unwrap();
        assert_eq!(m.trace_faces().len(), 7);
        let d = dual(&m).unwrap();
        assert_eq!(d.vertex_count(), 7);
    }

    #[test]
    fn dual_rejects_non_tpm() {
        assert_eq!(dual(&parse_line("3 bc,ca,ab").unwrap()), Err(Error::NotTpm));
    }

    #[test]
    fn k7_minus_one_edge_raw() {
        // Deleting one dart pair of K7 without any suppression: degrees stay
        // at least 5 and the genus stays one, but the two triangles merge
        // into a quadrilateral whose diagonal is an edge of other faces.
        // Observed verdict: a map, not polyhedral.
        let m = parse_line(K7).unwrap();
        let mut lists = m.neighbor_lists();
        lists[0].retain(|&w| w != 1);
        lists[1].retain(|&w| w != 0);
        let raw = build_map(7, &lists).unwrap();
        let v = is_tpm(&raw);
        assert!(v.is_map);
        assert_eq!(v.genus, Some(1));
        assert!(!v.is_polyhedral);
        assert!(matches!(v.failure_reasons[..], [Failure::ImproperMeeting { .. }]), "{v:?}");
    }
}
