//! Exhaustive generation of toroidal polyhedral maps by vertex count.
//!
//! Generation runs in two stages. First every graph with minimum degree 3
//! and a torus-compatible edge count is produced once per isomorphism
//! class; then each 3-connected one is embedded in all polyhedral ways and
//! the embeddings are deduplicated by canonical code.

use std::collections::HashSet;
use std::ops::RangeInclusive;

use rayon::prelude::*;

use crate::canon::{canonical_code, graph_canonical_code, graph_canonical_form, CanonicalCode};
use crate::embed::{enumerate_torus_embeddings, polyhedral_torus_embeddings};
use crate::graph::{Graph, MAX_GRAPH_VERTICES};
use crate::map::EmbeddedMap;
use crate::moves::is_diminimal;
use crate::polyhedral::is_tpm;

/// Largest vertex count accepted unless a caller raises the cap.
pub const DEFAULT_MAX_VERTICES: usize = 12;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GenerationTask {
    pub n: usize,
    pub edge_range: RangeInclusive<usize>,
    /// When false, every genus-one embedding is emitted, polyhedral or not.
    pub polyhedral_only: bool,
    pub diminimal_only: bool,
}

impl GenerationTask {
    pub fn new(n: usize) -> Self {
        GenerationTask { n, edge_range: edge_range(n), polyhedral_only: true, diminimal_only: false }
    }

    pub fn diminimal_only(mut self, yes: bool) -> Self {
        self.diminimal_only = yes;
        self
    }
}

/// `2E >= 3V` from the degree bound, `E <= 3V` from faces of length at least 3.
pub fn edge_range(n: usize) -> RangeInclusive<usize> {
    (3 * n).div_ceil(2)..=3 * n
}

/// Connected graphs on `n` vertices with minimum degree 3 and edge count in
/// [`edge_range`], one per isomorphism class, sorted by canonical code.
///
/// Graphs are grown through their complements (maximum degree at most
/// `n - 4`) one edge at a time; each level is reduced to canonical
/// representatives before the next is grown.
pub fn generate_graphs(n: usize) -> Vec<Graph> {
    if !(4..=MAX_GRAPH_VERTICES).contains(&n) {
        return Vec::new();
    }
    let pairs = n * (n - 1) / 2;
    let range = edge_range(n);
    let fewest = pairs.saturating_sub(*range.end());
    let most = pairs - range.start();
    let cap = n - 4;

    let mut out: Vec<(u128, Graph)> = Vec::new();
    let mut level = vec![Graph::new(n)];
    for k in 0..=most {
        if k >= fewest {
            out.extend(
                level
                    .iter()
                    .map(Graph::complement)
                    .filter(Graph::is_connected)
                    .map(|g| (graph_canonical_form(&g).0, g)),
            );
        }
        if k == most {
            break;
        }
        let mut next: Vec<(u128, Graph)> = level
            .par_iter()
            .flat_map_iter(|h| {
                let h = *h;
                (0..n).flat_map(move |u| (u + 1..n).map(move |v| (u, v))).filter_map(move |(u, v)| {
                    if h.has_edge(u, v) || h.degree(u) >= cap || h.degree(v) >= cap {
                        return None;
                    }
                    let mut child = h;
                    child.add_edge(u, v);
                    Some((graph_canonical_form(&child).0, child))
                })
            })
            .collect();
        next.par_sort_unstable_by_key(|&(code, _)| code);
        next.dedup_by_key(|&mut (code, _)| code);
        level = next.into_iter().map(|(_, g)| g).collect();
    }
    out.sort_by_key(|&(code, _)| code);
    out.into_iter().map(|(_, g)| g).collect()
}

/// The maps produced by one graph.
#[derive(Debug, Clone)]
pub struct GraphResult {
    pub graph: Graph,
    pub graph_code: CanonicalCode,
    /// Sorted by canonical code, without repeats.
    pub maps: Vec<(CanonicalCode, EmbeddedMap)>,
}

/// Distinct torus maps of one graph for the given task's filters.
///
/// Graphs that are not 3-connected are skipped in polyhedral mode since the
/// graph of a polyhedral map is always 3-connected.
pub fn maps_of_graph(g: &Graph, task: &GenerationTask) -> GraphResult {
    let graph_code = graph_canonical_code(g).expect("generated graphs are connected");
    let candidates = if task.polyhedral_only {
        if g.is_three_connected() {
            polyhedral_torus_embeddings(g)
        } else {
            Vec::new()
        }
    } else {
        enumerate_torus_embeddings(g)
    };
    let mut maps: Vec<(CanonicalCode, EmbeddedMap)> = Vec::new();
    let mut seen = HashSet::new();
    for m in candidates {
        if task.polyhedral_only {
            assert!(is_tpm(&m).is_tpm(), "embedding engine emitted a non-polyhedral map");
        }
        let code = canonical_code(&m).expect("connected");
        if seen.insert(code.clone()) {
            maps.push((code, m));
        }
    }
    if task.diminimal_only {
        maps.retain(|(_, m)| is_diminimal(m).unwrap_or(false));
    }
    maps.sort_by(|a, b| a.0.cmp(&b.0));
    GraphResult { graph: *g, graph_code, maps }
}

/// Runs the task over every graph not in `skip` (graph codes), calling
/// `done` once per finished graph in a nondeterministic order.
pub fn generate_with(
    task: &GenerationTask,
    skip: &HashSet<CanonicalCode>,
    done: impl Fn(&GraphResult) + Sync,
) -> Vec<(CanonicalCode, EmbeddedMap)> {
    let graphs: Vec<Graph> =
        generate_graphs(task.n).into_iter().filter(|g| task.edge_range.contains(&g.edge_count())).collect();
    let mut maps: Vec<(CanonicalCode, EmbeddedMap)> = graphs
        .par_iter()
        .filter_map(|g| {
            let code = graph_canonical_code(g).expect("connected");
            if skip.contains(&code) {
                return None;
            }
            let result = maps_of_graph(g, task);
            done(&result);
            Some(result.maps)
        })
        .flatten()
        .collect();
    maps.sort_by(|a, b| a.0.cmp(&b.0));
    maps
}

/// All maps of the task, sorted by canonical code.
pub fn generate_tpms(task: &GenerationTask) -> Vec<EmbeddedMap> {
    generate_with(task, &HashSet::new(), |_| {}).into_iter().map(|(_, m)| m).collect()
}
