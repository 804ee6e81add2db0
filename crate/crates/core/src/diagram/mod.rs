//! Link diagrams as 4-valent plane graphs with crossing data.
//!
//! A crossing is stored as four arc indices in counterclockwise order,
//! starting with the incoming under-strand (the usual PD convention). The
//! under-strand therefore occupies slots 0 (in) and 2 (out); the over-strand
//! occupies slots 1 and 3. Corner `k` of a crossing is the region between
//! slot `k` and slot `k + 1`.

mod graph;
mod tait;

pub use graph::{Dart as GraphDart, Outer, SignedEdge, SignedPlanarGraph};
pub use tait::{canonical_coloring, checkerboard, medial, medial_with_basepoint, tait_graph, vertex_coloring, Coloring};

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Serialize;

use crate::error::{Error, Result};

/// One end of an arc: a crossing and a slot 0..4.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Dart {
    pub crossing: usize,
    pub slot: u8,
}

impl Dart {
    pub fn new(crossing: usize, slot: u8) -> Self {
        Dart { crossing, slot }
    }

    pub fn turn(self, k: u8) -> Self {
        Dart {
            crossing: self.crossing,
            slot: (self.slot + k) % 4,
        }
    }
}

/// A region corner at a crossing: between slot `corner` and `corner + 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Corner {
    pub crossing: usize,
    pub corner: u8,
}

/// Face structure of a diagram.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Faces {
    /// `corner_face[c][k]` is the face containing corner `k` of crossing `c`.
    pub corner_face: Vec<[usize; 4]>,
    pub count: usize,
}

impl Faces {
    pub fn face_of(&self, c: Corner) -> usize {
        self.corner_face[c.crossing][c.corner as usize]
    }

    /// Corners of each face, in boundary order.
    pub fn corners(&self, d: &Diagram) -> Vec<Vec<Corner>> {
        let mut out = vec![Vec::new(); self.count];
        let mut seen = vec![[false; 4]; d.crossings.len()];
        for c in 0..d.crossings.len() {
            for k in 0..4u8 {
                if seen[c][k as usize] {
                    continue;
                }
                let f = self.corner_face[c][k as usize];
                let mut cur = Corner { crossing: c, corner: k };
                loop {
                    seen[cur.crossing][cur.corner as usize] = true;
                    out[f].push(cur);
                    cur = d.next_corner(cur);
                    if cur.crossing == c && cur.corner == k {
                        break;
                    }
                }
            }
        }
        out
    }
}

/// A connected oriented link diagram with a basepoint.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Diagram {
    crossings: Vec<[usize; 4]>,
    labels: Vec<u32>,
    /// `ends[a] = [tail, head]`: the arc leaves `tail` and enters `head`.
    ends: Vec<[Dart; 2]>,
    basepoint: usize,
    components: usize,
    outer: Option<Corner>,
}

impl Diagram {
    /// The crossingless diagram of the unknot, with a single arc labelled 1.
    pub fn round_unknot() -> Self {
        Diagram {
            crossings: Vec::new(),
            labels: vec![1],
            ends: Vec::new(),
            basepoint: 0,
            components: 1,
            outer: None,
        }
    }

    pub fn crossing_count(&self) -> usize {
        self.crossings.len()
    }

    pub fn arc_count(&self) -> usize {
        self.labels.len()
    }

    pub fn component_count(&self) -> usize {
        self.components
    }

    pub fn is_round_unknot(&self) -> bool {
        self.crossings.is_empty()
    }

    /// Arc indices around crossing `c`, slot 0 first.
    pub fn crossing(&self, c: usize) -> [usize; 4] {
        self.crossings[c]
    }

    pub fn arc_at(&self, d: Dart) -> usize {
        self.crossings[d.crossing][d.slot as usize]
    }

    pub fn label(&self, arc: usize) -> u32 {
        self.labels[arc]
    }

    pub fn labels(&self) -> &[u32] {
        &self.labels
    }

    pub fn arc_by_label(&self, label: u32) -> Option<usize> {
        self.labels.iter().position(|&l| l == label)
    }

    pub fn ends(&self, arc: usize) -> [Dart; 2] {
        self.ends[arc]
    }

    /// The dart at the other end of the arc attached at `d`.
    pub fn opposite(&self, d: Dart) -> Dart {
        let [t, h] = self.ends[self.arc_at(d)];
        if t == d {
            h
        } else {
            t
        }
    }

    pub fn basepoint(&self) -> usize {
        self.basepoint
    }

    pub fn basepoint_label(&self) -> u32 {
        self.labels[self.basepoint]
    }

    pub fn with_basepoint(&self, label: u32) -> Result<Self> {
        let arc = self.arc_by_label(label).ok_or(Error::BadBasepoint(label))?;
        let mut d = self.clone();
        d.basepoint = arc;
        Ok(d)
    }

    pub fn outer_corner(&self) -> Option<Corner> {
        self.outer.or(if self.crossings.is_empty() {
            None
        } else {
            Some(Corner { crossing: 0, corner: 0 })
        })
    }

    /// Crossing sign by the right-hand rule: +1 when the over-strand runs
    /// from slot 3 to slot 1.
    pub fn crossing_sign(&self, c: usize) -> i32 {
        let over_in = self.ends[self.crossings[c][3]][1];
        if over_in == Dart::new(c, 3) {
            1
        } else {
            -1
        }
    }

    pub fn writhe(&self) -> i64 {
        (0..self.crossings.len()).map(|c| self.crossing_sign(c) as i64).sum()
    }

    /// Numbers of positive and negative crossings.
    pub fn sign_counts(&self) -> (usize, usize) {
        let pos = (0..self.crossings.len()).filter(|&c| self.crossing_sign(c) > 0).count();
        (pos, self.crossings.len() - pos)
    }

    /// The corner that follows `c` along the boundary of its face.
    pub fn next_corner(&self, c: Corner) -> Corner {
        let out = Dart::new(c.crossing, (c.corner + 1) % 4);
        let other = self.opposite(out);
        Corner {
            crossing: other.crossing,
            corner: other.slot,
        }
    }

    pub fn faces(&self) -> Faces {
        if self.crossings.is_empty() {
            return Faces {
                corner_face: Vec::new(),
                count: 2,
            };
        }
        let n = self.crossings.len();
        let mut corner_face = vec![[usize::MAX; 4]; n];
        let mut count = 0;
        for c in 0..n {
            for k in 0..4u8 {
                if corner_face[c][k as usize] != usize::MAX {
                    continue;
                }
                let mut cur = Corner { crossing: c, corner: k };
                while corner_face[cur.crossing][cur.corner as usize] == usize::MAX {
                    corner_face[cur.crossing][cur.corner as usize] = count;
                    cur = self.next_corner(cur);
                }
                count += 1;
            }
        }
        Faces { corner_face, count }
    }

    /// Index of the outer face; for the round unknot faces are (inside, outside).
    pub fn outer_face(&self, faces: &Faces) -> usize {
        match self.outer_corner() {
            Some(c) => faces.face_of(c),
            None => 1,
        }
    }

    /// Permutes crossings: new crossing `i` is old crossing `order[i]`.
    pub fn reorder_crossings(&self, order: &[usize]) -> Result<Self> {
        let n = self.crossings.len();
        let mut seen = vec![false; n];
        if order.len() != n || order.iter().any(|&o| o >= n || std::mem::replace(&mut seen[o], true)) {
            return Err(Error::BadEdgeOrder(n));
        }
        let mut inv = vec![0; n];
        for (i, &o) in order.iter().enumerate() {
            inv[o] = i;
        }
        let mut d = self.clone();
        d.crossings = order.iter().map(|&o| self.crossings[o]).collect();
        for e in d.ends.iter_mut() {
            for dart in e.iter_mut() {
                dart.crossing = inv[dart.crossing];
            }
        }
        d.outer = self.outer.map(|c| Corner {
            crossing: inv[c.crossing],
            corner: c.corner,
        });
        Ok(d)
    }

    /// PD text, one crossing per line.
    pub fn to_pd(&self) -> String {
        if self.crossings.is_empty() {
            return "O\n".into();
        }
        let mut s = String::new();
        for x in &self.crossings {
            let _ = writeln!(s, "X {} {} {} {}", self.labels[x[0]], self.labels[x[1]], self.labels[x[2]], self.labels[x[3]]);
        }
        s
    }

    /// Adds a Reidemeister-I kink on the arc with the given label. The arc
    /// keeps its label up to the kink; two fresh labels follow it.
    pub fn add_kink(&self, label: u32, positive: bool) -> Result<Self> {
        let arc = self.arc_by_label(label).ok_or(Error::BadBasepoint(label))?;
        if self.crossings.is_empty() {
            // X[a, a', m, m] style kink on a circle: the new arcs close up.
            let (a, m) = (label, label + 1);
            let text = if positive {
                format!("X {a} {a} {m} {m}\n")
            } else {
                format!("X {a} {m} {m} {a}\n")
            };
            return parse_pd(&text);
        }
        let max = *self.labels.iter().max().unwrap();
        let (loop_label, out_label) = (max + 1, max + 2);
        let head = self.ends[arc][1];
        let mut rows: Vec<[u32; 4]> = self
            .crossings
            .iter()
            .map(|x| [self.labels[x[0]], self.labels[x[1]], self.labels[x[2]], self.labels[x[3]]])
            .collect();
        rows[head.crossing][head.slot as usize] = out_label;
        // Enter on the under-strand; the loop returns as the over-strand.
        rows.push(if positive {
            [label, out_label, loop_label, loop_label]
        } else {
            [label, loop_label, loop_label, out_label]
        });
        let mut d = diagram_from_rows(&rows, None)?;
        d.basepoint = d.arc_by_label(self.basepoint_label()).unwrap_or(0);
        Ok(d)
    }

    /// Smooths the crossings with a marker (`Some(false)` = A, `Some(true)` = B)
    /// and keeps the others. Returns `None` if a crossingless loop would be
    /// left next to the rest of the diagram. The result is reoriented.
    pub fn partial_smoothing(&self, markers: &[Option<bool>]) -> Option<Diagram> {
        let n = self.crossings.len();
        assert_eq!(markers.len(), n);
        if markers.iter().all(|m| m.is_some()) {
            let loops = crate::khovanov::loops(self, &markers.iter().map(|m| m.unwrap()).collect::<Vec<_>>());
            return (loops.count == 1).then(Diagram::round_unknot);
        }
        // Darts of kept crossings are joined through smoothed crossings.
        let kept: Vec<usize> = (0..n).filter(|&c| markers[c].is_none()).collect();
        let mut new_index = vec![usize::MAX; n];
        for (i, &c) in kept.iter().enumerate() {
            new_index[c] = i;
        }
        let mut arc_of = vec![[usize::MAX; 4]; kept.len()];
        let mut visited = vec![false; self.arc_count()];
        let mut next_arc = 0;
        for (i, &c) in kept.iter().enumerate() {
            for s in 0..4u8 {
                if arc_of[i][s as usize] != usize::MAX {
                    continue;
                }
                // Walk from this dart until another kept dart is reached.
                visited[self.arc_at(Dart::new(c, s))] = true;
                let mut d = self.opposite(Dart::new(c, s));
                while let Some(b) = markers[d.crossing] {
                    let partner = match (b, d.slot) {
                        (false, 0) => 1,
                        (false, 1) => 0,
                        (false, 2) => 3,
                        (false, _) => 2,
                        (true, 0) => 3,
                        (true, 3) => 0,
                        (true, 1) => 2,
                        (true, _) => 1,
                    };
                    visited[self.arc_at(Dart::new(d.crossing, partner))] = true;
                    d = self.opposite(Dart::new(d.crossing, partner));
                }
                arc_of[i][s as usize] = next_arc;
                arc_of[new_index[d.crossing]][d.slot as usize] = next_arc;
                next_arc += 1;
            }
        }
        if visited.iter().any(|v| !v) {
            return None;
        }
        let under_02 = vec![true; kept.len()];
        let labels: Vec<u32> = (1..=next_arc as u32).collect();
        diagram_from_combinatorics(arc_of, under_02, labels, 0, None).ok()
    }
}

/// Parses PD text: lines `X a b c d`, `#` comments, or a single `O` for the
/// round unknot.
pub fn parse_pd(text: &str) -> Result<Diagram> {
    let mut rows = Vec::new();
    let mut unknot = false;
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut toks = line.split_whitespace();
        match toks.next() {
            Some("O") if toks.next().is_none() => unknot = true,
            Some("X") => {
                let nums: Vec<&str> = toks.collect();
                if nums.len() != 4 {
                    return Err(Error::Parse {
                        line: i + 1,
                        msg: format!("expected 4 arc labels, found {}", nums.len()),
                    });
                }
                let mut row = [0u32; 4];
                for (k, t) in nums.iter().enumerate() {
                    row[k] = t.parse().map_err(|_| Error::Parse {
                        line: i + 1,
                        msg: format!("bad arc label {t:?}"),
                    })?;
                }
                rows.push(row);
            }
            _ => {
                return Err(Error::Parse {
                    line: i + 1,
                    msg: format!("unrecognized record {line:?}"),
                })
            }
        }
    }
    match (unknot, rows.is_empty()) {
        (true, true) => Ok(Diagram::round_unknot()),
        (true, false) => Err(Error::Disconnected),
        (false, true) => Err(Error::Parse {
            line: 0,
            msg: "no crossings".into(),
        }),
        (false, false) => diagram_from_rows(&rows, None),
    }
}

fn diagram_from_rows(rows: &[[u32; 4]], basepoint: Option<u32>) -> Result<Diagram> {
    let mut uses: BTreeMap<u32, usize> = BTreeMap::new();
    for r in rows {
        for &l in r {
            *uses.entry(l).or_default() += 1;
        }
    }
    if let Some((&label, &count)) = uses.iter().find(|(_, &c)| c != 2) {
        return Err(Error::ArcMultiplicity { label, count });
    }
    let labels: Vec<u32> = uses.keys().copied().collect();
    let index: BTreeMap<u32, usize> = labels.iter().enumerate().map(|(i, &l)| (l, i)).collect();
    let crossings: Vec<[usize; 4]> = rows.iter().map(|r| r.map(|l| index[&l])).collect();
    let mut darts: Vec<Vec<Dart>> = vec![Vec::new(); labels.len()];
    for (c, x) in crossings.iter().enumerate() {
        for (s, &a) in x.iter().enumerate() {
            darts[a].push(Dart::new(c, s as u8));
        }
    }
    check_connected(crossings.len(), &darts)?;
    let ends = orient(&crossings, &darts, &labels, true)?;
    let components = count_components(&crossings, &ends);
    let base = match basepoint {
        Some(b) => *index.get(&b).ok_or(Error::BadBasepoint(b))?,
        None => 0,
    };
    let d = Diagram {
        crossings,
        labels,
        ends,
        basepoint: base,
        components,
        outer: None,
    };
    check_euler(&d)?;
    Ok(d)
}

/// Builds a diagram from unoriented combinatorial data: arc ids per slot in
/// counterclockwise order, and whether the under-strand sits on slots 0/2
/// (otherwise 1/3). Components are oriented from their lowest-labelled arc
/// and each crossing is rotated so slot 0 is the incoming under-strand.
pub(crate) fn diagram_from_combinatorics(
    slots: Vec<[usize; 4]>,
    under_02: Vec<bool>,
    labels: Vec<u32>,
    basepoint: usize,
    outer: Option<Corner>,
) -> Result<Diagram> {
    let mut darts: Vec<Vec<Dart>> = vec![Vec::new(); labels.len()];
    for (c, x) in slots.iter().enumerate() {
        for (s, &a) in x.iter().enumerate() {
            darts[a].push(Dart::new(c, s as u8));
        }
    }
    for (a, ds) in darts.iter().enumerate() {
        if ds.len() != 2 {
            return Err(Error::ArcMultiplicity {
                label: labels[a],
                count: ds.len(),
            });
        }
    }
    check_connected(slots.len(), &darts)?;
    let ends = orient(&slots, &darts, &labels, false)?;
    // Rotate each crossing so its incoming under-strand is slot 0.
    let mut rot = vec![0u8; slots.len()];
    for (c, x) in slots.iter().enumerate() {
        let first = if under_02[c] { 0u8 } else { 1 };
        let a = x[first as usize];
        rot[c] = if ends[a][1] == Dart::new(c, first) { first } else { first + 2 };
    }
    let crossings: Vec<[usize; 4]> = slots
        .iter()
        .enumerate()
        .map(|(c, x)| {
            let r = rot[c] as usize;
            [x[r % 4], x[(r + 1) % 4], x[(r + 2) % 4], x[(r + 3) % 4]]
        })
        .collect();
    let ends: Vec<[Dart; 2]> = ends
        .iter()
        .map(|e| e.map(|d| Dart::new(d.crossing, (d.slot + 4 - rot[d.crossing]) % 4)))
        .collect();
    let components = count_components(&crossings, &ends);
    let outer = outer.map(|c| Corner {
        crossing: c.crossing,
        corner: (c.corner + 4 - rot[c.crossing]) % 4,
    });
    let d = Diagram {
        crossings,
        labels,
        ends,
        basepoint,
        components,
        outer,
    };
    for c in 0..d.crossings.len() {
        if d.ends[d.crossings[c][0]][1] != Dart::new(c, 0) {
            return Err(Error::Internal("crossing rotation failed".into()));
        }
    }
    check_euler(&d)?;
    Ok(d)
}

fn check_connected(n: usize, darts: &[Vec<Dart>]) -> Result<()> {
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            p[r] = p[p[r]];
            r = p[r];
        }
        r
    }
    for ds in darts {
        let (a, b) = (find(&mut parent, ds[0].crossing), find(&mut parent, ds[1].crossing));
        parent[a] = b;
    }
    let root = find(&mut parent, 0);
    if (0..n).all(|c| find(&mut parent, c) == root) {
        Ok(())
    } else {
        Err(Error::Disconnected)
    }
}

fn check_euler(d: &Diagram) -> Result<()> {
    let n = d.crossings.len() as i64;
    let chi = n - 2 * n + d.faces().count as i64;
    if chi == 2 {
        Ok(())
    } else {
        Err(Error::NotPlanar(chi))
    }
}

/// Assigns `[tail, head]` to every arc. With `pd_convention`, slot 0 must be
/// a head and slot 2 a tail; otherwise every component is oriented from its
/// lowest-labelled arc, leaving through that arc's first dart.
fn orient(crossings: &[[usize; 4]], darts: &[Vec<Dart>], labels: &[u32], pd_convention: bool) -> Result<Vec<[Dart; 2]>> {
    let m = darts.len();
    let mut ends: Vec<Option<[Dart; 2]>> = vec![None; m];
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by_key(|&a| labels[a]);
    for &start in &order {
        if ends[start].is_some() {
            continue;
        }
        let walk = |first_tail: Dart| -> Vec<(usize, Dart, Dart)> {
            let mut path = Vec::new();
            let mut arc = start;
            let mut tail = first_tail;
            loop {
                let head = if darts[arc][0] == tail { darts[arc][1] } else { darts[arc][0] };
                path.push((arc, tail, head));
                let next_tail = head.turn(2);
                let next_arc = crossings[next_tail.crossing][next_tail.slot as usize];
                if next_arc == start && next_tail == first_tail {
                    break;
                }
                arc = next_arc;
                tail = next_tail;
            }
            path
        };
        let ok = |path: &[(usize, Dart, Dart)]| -> bool { !pd_convention || path.iter().all(|&(_, t, h)| t.slot != 0 && h.slot != 2) };
        let forward = walk(darts[start][0]);
        let path = if ok(&forward) {
            forward
        } else {
            let backward = walk(darts[start][1]);
            if !ok(&backward) {
                return Err(Error::Orientation(labels[start]));
            }
            backward
        };
        for (arc, t, h) in path {
            ends[arc] = Some([t, h]);
        }
    }
    Ok(ends.into_iter().map(|e| e.unwrap()).collect())
}

fn count_components(crossings: &[[usize; 4]], ends: &[[Dart; 2]]) -> usize {
    let m = ends.len();
    let mut seen = vec![false; m];
    let mut comps = 0;
    for a in 0..m {
        if seen[a] {
            continue;
        }
        comps += 1;
        let mut cur = a;
        while !seen[cur] {
            seen[cur] = true;
            let next = ends[cur][1].turn(2);
            cur = crossings[next.crossing][next.slot as usize];
        }
    }
    comps
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn figure_eight_counts() {
        let d = fixtures::diagram("4_1");
        assert_eq!(d.crossing_count(), 4);
        assert_eq!(d.arc_count(), 8);
        assert_eq!(d.faces().count, 6);
        assert_eq!(d.writhe(), 0);
    }

    #[test]
    fn round_unknot_token() {
        let d = parse_pd("# unknot\nO\n").unwrap();
        assert!(d.is_round_unknot());
        assert_eq!(d.arc_count(), 1);
        assert_eq!(d.component_count(), 1);
        assert_eq!(d.writhe(), 0);
    }

    #[test]
    fn triple_label_rejected() {
        let err = parse_pd("X 1 2 1 3\nX 1 2 3 4\n").unwrap_err();
        assert!(matches!(err, Error::ArcMultiplicity { label: 1, count: 3 }));
    }

    #[test]
    fn malformed_record_rejected() {
        assert!(matches!(parse_pd("X 1 2 3\n"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(parse_pd("Y 1 2 3 4\n"), Err(Error::Parse { .. })));
    }

    #[test]
    fn disconnected_rejected() {
        // Two separate one-crossing kinks.
        let err = parse_pd("X 1 1 2 2\nX 3 3 4 4\n").unwrap_err();
        assert_eq!(err, Error::Disconnected);
    }

    #[test]
    fn trefoil_writhes() {
        assert_eq!(fixtures::diagram("3_1").writhe(), -3);
        assert_eq!(fixtures::diagram("trefoil_right").writhe(), 3);
        assert_eq!(fixtures::diagram("3_1").faces().count, 5);
    }

    #[test]
    fn pd_round_trip() {
        for name in ["3_1", "4_1", "8_19", "10_132"] {
            let d = fixtures::diagram(name);
            let again = parse_pd(&d.to_pd()).unwrap();
            assert_eq!(again.to_pd(), d.to_pd());
            assert_eq!(again, d);
        }
    }

    #[test]
    fn kinks_change_writhe() {
        let d = fixtures::diagram("4_1");
        let p = d.add_kink(1, true).unwrap();
        let n = d.add_kink(3, false).unwrap();
        assert_eq!(p.writhe(), 1);
        assert_eq!(n.writhe(), -1);
        assert_eq!(p.faces().count, 7);
        assert_eq!(Diagram::round_unknot().add_kink(1, true).unwrap().writhe(), 1);
        assert_eq!(Diagram::round_unknot().add_kink(1, false).unwrap().writhe(), -1);
    }

    #[test]
    fn reorder_preserves_writhe_and_faces() {
        let d = fixtures::diagram("8_19");
        let r = d.reorder_crossings(&[7, 6, 5, 4, 3, 2, 1, 0]).unwrap();
        assert_eq!(r.writhe(), d.writhe());
        assert_eq!(r.faces().count, d.faces().count);
        assert!(d.reorder_crossings(&[0, 0, 1, 2, 3, 4, 5, 6]).is_err());
    }
}
