//! Flat-torus drawings of toroidal maps.
//!
//! Every dart carries an integer lattice offset: the edge from `u` to `v`
//! is drawn from `x(u)` to `x(v) + offset`. Offsets come from a tree–cotree
//! decomposition, positions from a periodic harmonic (Tutte) system.

use std::collections::VecDeque;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::map::{Dart, EdgeRef, EmbeddedMap};
use crate::polyhedral::is_tpm;

pub type Vec2 = [f64; 2];

/// Largest harmonic residual accepted as a solution.
pub const RESIDUAL_TOLERANCE: f64 = 1e-9;
/// Geometric tolerance of the crossing check.
pub const CROSSING_TOLERANCE: f64 = 1e-9;
/// Tolerance of the clipped-length consistency check.
pub const LENGTH_TOLERANCE: f64 = 1e-6;

/// Integer offsets per dart, with the spanning tree used to build them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OffsetAssignment {
    sigma: Vec<[i64; 2]>,
    /// For each vertex, the tree dart arriving from its parent.
    parent: Vec<Option<Dart>>,
    /// The two edges outside both trees, carrying (1,0) and (0,1).
    pub generators: [EdgeRef; 2],
}

impl OffsetAssignment {
    pub fn get(&self, d: Dart) -> [i64; 2] {
        self.sigma[d.index()]
    }

    /// Sum of offsets along the tree path from the root to `v`.
    fn tree_sum(&self, map: &EmbeddedMap, mut v: usize) -> [i64; 2] {
        let mut s = [0, 0];
        while let Some(d) = self.parent[v] {
            let o = self.get(d);
            s = [s[0] + o[0], s[1] + o[1]];
            v = map.origin(d);
        }
        s
    }

    /// The period of the fundamental cycle of a non-tree edge.
    pub fn period(&self, map: &EmbeddedMap, e: EdgeRef) -> [i64; 2] {
        let d = e.dart();
        let (a, b) = (self.tree_sum(map, map.origin(d)), self.tree_sum(map, map.head(d)));
        let o = self.get(d);
        [a[0] + o[0] - b[0], a[1] + o[1] - b[1]]
    }

    /// Violated invariants, empty when the assignment is valid.
    pub fn violations(&self, map: &EmbeddedMap) -> Vec<String> {
        let mut out = Vec::new();
        for d in map.darts() {
            let (a, b) = (self.get(d), self.get(map.twin(d)));
            if a[0] != -b[0] || a[1] != -b[1] {
                out.push(format!("offset of {d} is not antisymmetric"));
            }
        }
        for (f, face) in map.trace_faces().faces.iter().enumerate() {
            let s = face.iter().fold([0, 0], |s, &d| [s[0] + self.get(d)[0], s[1] + self.get(d)[1]]);
            if s != [0, 0] {
                out.push(format!("face {f} sums to {s:?}"));
            }
        }
        let periods = [self.period(map, self.generators[0]), self.period(map, self.generators[1])];
        if periods != [[1, 0], [0, 1]] {
            out.push(format!("periods are {periods:?}"));
        }
        out
    }
}

/// Tree–cotree offsets: zero on a breadth-first spanning tree from vertex 0,
/// generators on the two edges left over by a breadth-first dual tree from
/// face 0, and face sums solved from the dual leaves inward.
pub fn compute_offsets(map: &EmbeddedMap) -> Result<OffsetAssignment> {
    if !is_tpm(map).is_tpm() {
        return Err(Error::NotTpm);
    }
    Ok(offsets_unchecked(map))
}

fn offsets_unchecked(map: &EmbeddedMap) -> OffsetAssignment {
    let n = map.vertex_count();
    let mut in_tree = vec![false; map.dart_count()];
    let mut parent = vec![None; n];
    let mut seen = vec![false; n];
    seen[0] = true;
    let mut queue = VecDeque::from([0]);
    while let Some(u) = queue.pop_front() {
        for &d in map.rotation(u) {
            let v = map.head(d);
            if !seen[v] {
                seen[v] = true;
                parent[v] = Some(d);
                in_tree[d.index()] = true;
                in_tree[map.twin(d).index()] = true;
                queue.push_back(v);
            }
        }
    }

    let faces = map.trace_faces();
    let mut in_dual = vec![false; map.dart_count()];
    // The dart of the edge to the parent face, lying in the child face.
    let mut up: Vec<Option<Dart>> = vec![None; faces.len()];
    let mut order = Vec::with_capacity(faces.len());
    let mut reached = vec![false; faces.len()];
    reached[0] = true;
    let mut queue = VecDeque::from([0]);
    while let Some(f) = queue.pop_front() {
        order.push(f);
        for &d in &faces.faces[f] {
            if in_tree[d.index()] {
                continue;
            }
            let t = map.twin(d);
            let g = faces.face_of(t);
            if !reached[g] {
                reached[g] = true;
                up[g] = Some(t);
                in_dual[d.index()] = true;
                in_dual[t.index()] = true;
                queue.push_back(g);
            }
        }
    }

    let leftover: Vec<EdgeRef> =
        map.edges().filter(|e| !in_tree[e.dart().index()] && !in_dual[e.dart().index()]).collect();
    assert_eq!(leftover.len(), 2, "genus one leaves exactly two edges outside both trees");
    let mut sigma = vec![[0i64; 2]; map.dart_count()];
    for (i, e) in leftover.iter().enumerate() {
        let mut o = [0, 0];
        o[i] = 1;
        sigma[e.dart().index()] = o;
        sigma[map.twin(e.dart()).index()] = [-o[0], -o[1]];
    }
    for &f in order.iter().rev() {
        let Some(d) = up[f] else { continue };
        let mut s = [0, 0];
        for &x in &faces.faces[f] {
            if x != d {
                s = [s[0] + sigma[x.index()][0], s[1] + sigma[x.index()][1]];
            }
        }
        sigma[d.index()] = [-s[0], -s[1]];
        sigma[map.twin(d).index()] = s;
    }
    OffsetAssignment { sigma, parent, generators: [leftover[0], leftover[1]] }
}

/// Vertex positions in the unit square, with offsets adjusted so each
/// drawn segment is unchanged up to lattice translation.
#[derive(Debug, Clone, PartialEq)]
pub struct TorusLayout {
    pub positions: Vec<Vec2>,
    pub offsets: OffsetAssignment,
}

impl TorusLayout {
    /// The drawn segment of dart `d`, starting at its origin's position.
    pub fn segment(&self, map: &EmbeddedMap, d: Dart) -> (Vec2, Vec2) {
        let p = self.positions[map.origin(d)];
        let q = self.positions[map.head(d)];
        let o = self.offsets.get(d);
        (p, [q[0] + o[0] as f64, q[1] + o[1] as f64])
    }
}

/// Solves for each vertex sitting at the average of its offset neighbors,
/// with vertex 0 pinned at the origin, then reduces positions modulo 1.
pub fn harmonic_layout(map: &EmbeddedMap, offsets: &OffsetAssignment) -> Result<TorusLayout> {
    let n = map.vertex_count();
    let m = n - 1;
    // Unknowns are vertices 1..n; two right-hand sides share the matrix.
    let mut a = vec![vec![0.0; m + 2]; m];
    for u in 1..n {
        let row = &mut a[u - 1];
        row[u - 1] += map.degree(u) as f64;
        for &d in map.rotation(u) {
            let v = map.head(d);
            if v != 0 {
                row[v - 1] -= 1.0;
            }
            let o = offsets.get(d);
            row[m] += o[0] as f64;
            row[m + 1] += o[1] as f64;
        }
    }
    let solution = solve(a, m)?;
    let mut raw = vec![[0.0, 0.0]; n];
    raw[1..].copy_from_slice(&solution);
    let shift: Vec<[i64; 2]> = raw.iter().map(|p| [p[0].floor() as i64, p[1].floor() as i64]).collect();
    let positions = raw
        .iter()
        .zip(&shift)
        .map(|(p, s)| {
            [(p[0] - s[0] as f64).clamp(0.0, 1.0 - f64::EPSILON), (p[1] - s[1] as f64).clamp(0.0, 1.0 - f64::EPSILON)]
        })
        .collect();
    let mut adjusted = offsets.clone();
    for d in map.darts() {
        let (su, sv) = (shift[map.origin(d)], shift[map.head(d)]);
        let o = offsets.get(d);
        adjusted.sigma[d.index()] = [o[0] + sv[0] - su[0], o[1] + sv[1] - su[1]];
    }
    Ok(TorusLayout { positions, offsets: adjusted })
}

/// Gaussian elimination with partial pivoting on an augmented `m x (m+2)`
/// matrix; returns the two solution columns per row.
fn solve(mut a: Vec<Vec<f64>>, m: usize) -> Result<Vec<Vec2>> {
    for col in 0..m {
        let pivot = (col..m).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs())).expect("rows remain");
        if a[pivot][col].abs() < 1e-12 {
            return Err(Error::SingularSystem);
        }
        a.swap(col, pivot);
        for r in col + 1..m {
            let f = a[r][col] / a[col][col];
            if f != 0.0 {
                for c in col..m + 2 {
                    a[r][c] -= f * a[col][c];
                }
            }
        }
    }
    let mut x = vec![[0.0; 2]; m];
    for r in (0..m).rev() {
        for k in 0..2 {
            let mut s = a[r][m + k];
            for c in r + 1..m {
                s -= a[r][c] * x[c][k];
            }
            x[r][k] = s / a[r][r];
        }
    }
    Ok(x)
}

/// Largest deviation, over non-pinned vertices, of a position from the
/// average of its offset neighbors (times the degree).
pub fn harmonic_residual(map: &EmbeddedMap, layout: &TorusLayout) -> f64 {
    let mut worst: f64 = 0.0;
    for u in 1..map.vertex_count() {
        let p = layout.positions[u];
        let mut r = [0.0; 2];
        for &d in map.rotation(u) {
            let (_, q) = layout.segment(map, d);
            r[0] += p[0] - q[0];
            r[1] += p[1] - q[1];
        }
        worst = worst.max(r[0].abs()).max(r[1].abs());
    }
    worst
}

fn cross(o: Vec2, a: Vec2, b: Vec2) -> f64 {
    (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
}

fn near(a: Vec2, b: Vec2) -> bool {
    (a[0] - b[0]).abs() < CROSSING_TOLERANCE && (a[1] - b[1]).abs() < CROSSING_TOLERANCE
}

/// Distance-like test of `p` lying on segment `a b` strictly between its ends.
fn on_interior(p: Vec2, a: Vec2, b: Vec2) -> bool {
    if near(p, a) || near(p, b) {
        return false;
    }
    let len = ((b[0] - a[0]).powi(2) + (b[1] - a[1]).powi(2)).sqrt();
    if len < CROSSING_TOLERANCE {
        return false;
    }
    let dist = cross(a, b, p).abs() / len;
    let t = ((p[0] - a[0]) * (b[0] - a[0]) + (p[1] - a[1]) * (b[1] - a[1])) / (len * len);
    dist < CROSSING_TOLERANCE && t > 0.0 && t < 1.0
}

/// True when two segments meet anywhere other than a shared endpoint.
fn segments_conflict(a: (Vec2, Vec2), b: (Vec2, Vec2)) -> bool {
    if on_interior(a.0, b.0, b.1)
        || on_interior(a.1, b.0, b.1)
        || on_interior(b.0, a.0, a.1)
        || on_interior(b.1, a.0, a.1)
    {
        return true;
    }
    let d1 = cross(b.0, b.1, a.0);
    let d2 = cross(b.0, b.1, a.1);
    let d3 = cross(a.0, a.1, b.0);
    let d4 = cross(a.0, a.1, b.1);
    let eps = CROSSING_TOLERANCE;
    ((d1 > eps && d2 < -eps) || (d1 < -eps && d2 > eps)) && ((d3 > eps && d4 < -eps) || (d3 < -eps && d4 > eps))
}

/// Pairs of edges whose drawings meet improperly somewhere on the torus,
/// plus pairs of coincident vertices reported as `(e, e)` of a dart at one
/// of them.
pub fn improper_crossings(map: &EmbeddedMap, layout: &TorusLayout) -> Vec<(EdgeRef, EdgeRef)> {
    let edges: Vec<(EdgeRef, (Vec2, Vec2))> = map.edges().map(|e| (e, layout.segment(map, e.dart()))).collect();
    let mut out = Vec::new();
    for (i, &(ea, sa)) in edges.iter().enumerate() {
        for &(eb, sb) in &edges[i..] {
            let (lo, hi) = translate_range(sa, sb);
            'shift: for tx in lo[0]..=hi[0] {
                for ty in lo[1]..=hi[1] {
                    if ea == eb && tx == 0 && ty == 0 {
                        continue;
                    }
                    let (t0, t1) =
                        ([sb.0[0] + tx as f64, sb.0[1] + ty as f64], [sb.1[0] + tx as f64, sb.1[1] + ty as f64]);
                    if segments_conflict(sa, (t0, t1)) {
                        out.push((ea, eb));
                        break 'shift;
                    }
                }
            }
        }
    }
    let n = map.vertex_count();
    for u in 0..n {
        for v in u + 1..n {
            let (p, q) = (layout.positions[u], layout.positions[v]);
            let dx = (p[0] - q[0]).abs();
            let dy = (p[1] - q[1]).abs();
            if dx.min(1.0 - dx) < CROSSING_TOLERANCE && dy.min(1.0 - dy) < CROSSING_TOLERANCE {
                let e = map.edge_of(map.rotation(u)[0]);
                out.push((e, e));
            }
        }
    }
    out
}

/// Integer translations of `b` whose bounding box can meet that of `a`.
fn translate_range(a: (Vec2, Vec2), b: (Vec2, Vec2)) -> ([i64; 2], [i64; 2]) {
    let mut lo = [0; 2];
    let mut hi = [0; 2];
    for k in 0..2 {
        let (amin, amax) = (a.0[k].min(a.1[k]), a.0[k].max(a.1[k]));
        let (bmin, bmax) = (b.0[k].min(b.1[k]), b.0[k].max(b.1[k]));
        lo[k] = (amin - bmax).floor() as i64;
        hi[k] = (amax - bmin).ceil() as i64;
    }
    (lo, hi)
}

/// Cuts a segment of the plane into pieces lying in unit cells, each
/// translated back into the unit square. Degenerate pieces are dropped.
pub fn clip_to_square(p: Vec2, q: Vec2) -> Vec<(Vec2, Vec2)> {
    let mut cuts = vec![0.0, 1.0];
    for k in 0..2 {
        let (a, b) = (p[k], q[k]);
        if a != b {
            let (lo, hi) = (a.min(b).ceil() as i64, a.max(b).floor() as i64);
            for g in lo..=hi {
                let t = (g as f64 - a) / (b - a);
                if t > 0.0 && t < 1.0 {
                    cuts.push(t);
                }
            }
        }
    }
    cuts.sort_by(f64::total_cmp);
    let at = |t: f64| [p[0] + t * (q[0] - p[0]), p[1] + t * (q[1] - p[1])];
    let mut pieces = Vec::new();
    for w in cuts.windows(2) {
        if w[1] - w[0] < 1e-12 {
            continue;
        }
        let (a, b) = (at(w[0]), at(w[1]));
        let mid = at((w[0] + w[1]) / 2.0);
        let cell = [mid[0].floor(), mid[1].floor()];
        pieces.push(([a[0] - cell[0], a[1] - cell[1]], [b[0] - cell[0], b[1] - cell[1]]));
    }
    pieces
}

fn length(a: Vec2, b: Vec2) -> f64 {
    ((b[0] - a[0]).powi(2) + (b[1] - a[1]).powi(2)).sqrt()
}

/// Largest difference between an edge's length and the total length of
/// its clipped pieces.
pub fn wrap_length_error(map: &EmbeddedMap, layout: &TorusLayout) -> f64 {
    map.edges()
        .map(|e| {
            let (p, q) = layout.segment(map, e.dart());
            let pieces: f64 = clip_to_square(p, q).iter().map(|&(a, b)| length(a, b)).sum();
            (pieces - length(p, q)).abs()
        })
        .fold(0.0, f64::max)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SvgOptions {
    pub show_dual: bool,
    /// Side length of the fundamental square in pixels.
    pub scale: f64,
    pub labels: bool,
}

impl Default for SvgOptions {
    fn default() -> Self {
        SvgOptions { show_dual: false, scale: 512.0, labels: true }
    }
}

/// Centroid of the face left of `d`, in the frame where `origin(d)` sits
/// at its layout position.
fn face_centroid(map: &EmbeddedMap, layout: &TorusLayout, d: Dart) -> Vec2 {
    let mut p = layout.positions[map.origin(d)];
    let mut sum = [0.0; 2];
    let mut k = 0.0;
    let mut x = d;
    loop {
        sum = [sum[0] + p[0], sum[1] + p[1]];
        k += 1.0;
        let (a, b) = layout.segment(map, x);
        p = [p[0] + b[0] - a[0], p[1] + b[1] - a[1]];
        x = map.face_successor(x);
        if x == d {
            break;
        }
    }
    [sum[0] / k, sum[1] / k]
}

fn vertex_name(v: usize) -> String {
    if v < 26 {
        ((b'a' + v as u8) as char).to_string()
    } else {
        v.to_string()
    }
}

/// An SVG 1.1 drawing: the unit square, one `g.edge` per edge holding its
/// clipped pieces, one `circle.vertex` per vertex, and with `show_dual`
/// one `circle.face` per face and one `g.dual-edge` per edge.
pub fn emit_svg(map: &EmbeddedMap, layout: &TorusLayout, options: SvgOptions) -> String {
    let s = options.scale;
    let margin = (s * 0.05).max(8.0);
    let size = s + 2.0 * margin;
    let tx = |p: Vec2| [margin + p[0] * s, margin + (1.0 - p[1]) * s];
    let radius = (s / 80.0).max(2.0);
    let mut out = String::new();
    let _ = writeln!(out, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{size:.0}" height="{size:.0}" viewBox="0 0 {size:.2} {size:.2}">"#
    );
    let _ = writeln!(
        out,
        r##"<rect class="domain" x="{margin:.2}" y="{margin:.2}" width="{s:.2}" height="{s:.2}" fill="none" stroke="#888" stroke-dasharray="4 3"/>"##
    );
    let line = |out: &mut String, a: Vec2, b: Vec2| {
        let (a, b) = (tx(a), tx(b));
        let _ = writeln!(out, r#"  <line x1="{:.3}" y1="{:.3}" x2="{:.3}" y2="{:.3}"/>"#, a[0], a[1], b[0], b[1]);
    };
    for e in map.edges() {
        let (u, v) = map.endpoints(e);
        let _ = writeln!(
            out,
            r##"<g class="edge" data-edge="{}-{}" stroke="#000" stroke-width="1.5">"##,
            vertex_name(u),
            vertex_name(v)
        );
        let (p, q) = layout.segment(map, e.dart());
        for (a, b) in clip_to_square(p, q) {
            line(&mut out, a, b);
        }
        let _ = writeln!(out, "</g>");
    }
    if options.show_dual {
        for e in map.edges() {
            let d = e.dart();
            let t = map.twin(d);
            let (p, q) = layout.segment(map, d);
            let mid = [(p[0] + q[0]) / 2.0, (p[1] + q[1]) / 2.0];
            let left = face_centroid(map, layout, d);
            let right_local = face_centroid(map, layout, t);
            let o = layout.offsets.get(d);
            let right = [right_local[0] + o[0] as f64, right_local[1] + o[1] as f64];
            let _ = writeln!(out, r##"<g class="dual-edge" stroke="#c33" stroke-width="1" stroke-dasharray="5 3">"##);
            for (a, b) in clip_to_square(left, mid).into_iter().chain(clip_to_square(mid, right)) {
                line(&mut out, a, b);
            }
            let _ = writeln!(out, "</g>");
        }
        for face in &map.trace_faces().faces {
            let c = face_centroid(map, layout, face[0]);
            let c = tx([c[0].rem_euclid(1.0), c[1].rem_euclid(1.0)]);
            let _ = writeln!(
                out,
                r##"<circle class="face" cx="{:.3}" cy="{:.3}" r="{:.2}" fill="#fff" stroke="#c33"/>"##,
                c[0],
                c[1],
                radius * 0.8
            );
        }
    }
    for (v, &p) in layout.positions.iter().enumerate() {
        let c = tx(p);
        let _ = writeln!(
            out,
            r##"<circle class="vertex" cx="{:.3}" cy="{:.3}" r="{radius:.2}" fill="#000"/>"##,
            c[0], c[1]
        );
        if options.labels {
            let _ = writeln!(
                out,
                r#"<text x="{:.3}" y="{:.3}" font-family="sans-serif" font-size="{:.1}">{}</text>"#,
                c[0] + radius * 1.2,
                c[1] - radius * 1.2,
                radius * 3.0,
                vertex_name(v)
            );
        }
    }
    out.push_str("</svg>\n");
    out
}

/// Everything produced while drawing one map.
#[derive(Debug, Clone)]
pub struct Rendering {
    pub layout: TorusLayout,
    pub residual: f64,
    pub crossings: Vec<(EdgeRef, EdgeRef)>,
    pub svg: String,
}

pub fn render(map: &EmbeddedMap, options: SvgOptions) -> Result<Rendering> {
    let offsets = compute_offsets(map)?;
    let layout = harmonic_layout(map, &offsets)?;
    let residual = harmonic_residual(map, &layout);
    let crossings = improper_crossings(map, &layout);
    let svg = emit_svg(map, &layout, options);
    Ok(Rendering { layout, residual, crossings, svg })
}
