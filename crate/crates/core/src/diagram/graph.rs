//! Signed plane graphs (Tait graphs) with a rotation system.

use std::fmt::Write as _;

use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct SignedEdge {
    /// `[tail, head]`; equal for a loop.
    pub ends: [usize; 2],
    /// +1 or -1.
    pub sign: i8,
}

/// An edge end: `end` 0 is the tail, 1 the head.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Dart {
    pub edge: usize,
    pub end: u8,
}

impl Dart {
    pub fn new(edge: usize, end: u8) -> Self {
        Dart { edge, end }
    }

    pub fn reverse(self) -> Self {
        Dart {
            edge: self.edge,
            end: 1 - self.end,
        }
    }
}

/// Which region of the plane is unbounded: a vertex region, or the face
/// that follows a dart counterclockwise at its vertex.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Outer {
    Vertex(usize),
    Face(Dart),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SignedPlanarGraph {
    vertex_count: usize,
    edges: Vec<SignedEdge>,
    /// Counterclockwise darts around each vertex.
    rotation: Vec<Vec<Dart>>,
    outer: Outer,
}

impl SignedPlanarGraph {
    /// Builds and validates a graph. Loops must list their tail before their
    /// head in the rotation of their vertex; this is normalized if needed.
    pub fn new(vertex_count: usize, edges: Vec<SignedEdge>, rotation: Vec<Vec<Dart>>, outer: Option<Outer>) -> Result<Self> {
        if rotation.len() != vertex_count {
            return Err(Error::Parse {
                line: 0,
                msg: format!("{} rotation lists for {} vertices", rotation.len(), vertex_count),
            });
        }
        let mut seen = vec![[false; 2]; edges.len()];
        for (v, rot) in rotation.iter().enumerate() {
            for d in rot {
                let e = edges.get(d.edge).ok_or(Error::EdgeMembership {
                    edge: d.edge + 1,
                    msg: "unknown edge in rotation".into(),
                })?;
                if e.ends[d.end as usize] != v || std::mem::replace(&mut seen[d.edge][d.end as usize], true) {
                    return Err(Error::EdgeMembership {
                        edge: d.edge + 1,
                        msg: format!("bad rotation entry at vertex {}", v + 1),
                    });
                }
            }
        }
        for (i, e) in edges.iter().enumerate() {
            if e.sign != 1 && e.sign != -1 {
                return Err(Error::EdgeMembership {
                    edge: i + 1,
                    msg: "sign must be +1 or -1".into(),
                });
            }
            if e.ends.iter().any(|&v| v >= vertex_count) || seen[i] != [true, true] {
                return Err(Error::EdgeMembership {
                    edge: i + 1,
                    msg: "edge missing from rotation".into(),
                });
            }
        }
        let outer = outer.unwrap_or(if edges.is_empty() { Outer::Vertex(0) } else { Outer::Face(Dart::new(0, 0)) });
        let mut g = SignedPlanarGraph {
            vertex_count,
            edges,
            rotation,
            outer,
        };
        g.normalize_loops();
        if g.is_connected() {
            let chi = g.vertex_count as i64 - g.edges.len() as i64 + g.face_count() as i64;
            if chi != 2 {
                return Err(Error::NotPlanar(chi));
            }
        }
        Ok(g)
    }

    fn normalize_loops(&mut self) {
        for v in 0..self.vertex_count {
            let rot = self.rotation[v].clone();
            for (i, d) in rot.iter().enumerate() {
                if d.end == 1 && self.edges[d.edge].ends[0] == v && !rot[..i].contains(&d.reverse()) {
                    // The head of this loop is listed first: swap the ends.
                    for r in self.rotation[v].iter_mut() {
                        if r.edge == d.edge {
                            *r = r.reverse();
                        }
                    }
                    if let Outer::Face(o) = &mut self.outer {
                        if o.edge == d.edge {
                            *o = o.reverse();
                        }
                    }
                }
            }
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[SignedEdge] {
        &self.edges
    }

    pub fn edge(&self, e: usize) -> SignedEdge {
        self.edges[e]
    }

    pub fn rotation(&self, v: usize) -> &[Dart] {
        &self.rotation[v]
    }

    pub fn outer(&self) -> Outer {
        self.outer
    }

    pub fn vertex_of(&self, d: Dart) -> usize {
        self.edges[d.edge].ends[d.end as usize]
    }

    pub fn positive_count(&self) -> usize {
        self.edges.iter().filter(|e| e.sign > 0).count()
    }

    /// Next dart counterclockwise at the same vertex.
    pub fn next_ccw(&self, d: Dart) -> Dart {
        let rot = &self.rotation[self.vertex_of(d)];
        let i = rot.iter().position(|&x| x == d).expect("dart in rotation");
        rot[(i + 1) % rot.len()]
    }

    pub fn prev_ccw(&self, d: Dart) -> Dart {
        let rot = &self.rotation[self.vertex_of(d)];
        let i = rot.iter().position(|&x| x == d).expect("dart in rotation");
        rot[(i + rot.len() - 1) % rot.len()]
    }

    pub fn is_connected(&self) -> bool {
        if self.vertex_count == 0 {
            return false;
        }
        let mut seen = vec![false; self.vertex_count];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for d in &self.rotation[v] {
                let w = self.vertex_of(d.reverse());
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        seen.iter().all(|&s| s)
    }

    /// Faces as orbits of darts: the corner after `d` continues at the corner
    /// after the far end of the next dart.
    pub fn face_of_darts(&self) -> (Vec<usize>, usize) {
        let m = self.edges.len();
        let idx = |d: Dart| 2 * d.edge + d.end as usize;
        let mut face = vec![usize::MAX; 2 * m];
        let mut count = 0;
        for e in 0..m {
            for end in 0..2u8 {
                let start = Dart::new(e, end);
                if face[idx(start)] != usize::MAX {
                    continue;
                }
                let mut d = start;
                while face[idx(d)] == usize::MAX {
                    face[idx(d)] = count;
                    d = self.next_ccw(d).reverse();
                }
                count += 1;
            }
        }
        (face, count)
    }

    pub fn face_count(&self) -> usize {
        if self.edges.is_empty() {
            return self.vertex_count;
        }
        let isolated = (0..self.vertex_count).filter(|&v| self.rotation[v].is_empty()).count();
        self.face_of_darts().1 + isolated
    }

    /// Renumbers edges: new edge `i` is old edge `order[i]`.
    pub fn reorder_edges(&self, order: &[usize]) -> Result<Self> {
        let m = self.edges.len();
        let mut inv = vec![usize::MAX; m];
        for (i, &o) in order.iter().enumerate() {
            if o >= m || inv[o] != usize::MAX {
                return Err(Error::BadEdgeOrder(m));
            }
            inv[o] = i;
        }
        if order.len() != m {
            return Err(Error::BadEdgeOrder(m));
        }
        let map = |d: Dart| Dart::new(inv[d.edge], d.end);
        Ok(SignedPlanarGraph {
            vertex_count: self.vertex_count,
            edges: order.iter().map(|&o| self.edges[o]).collect(),
            rotation: self.rotation.iter().map(|r| r.iter().map(|&d| map(d)).collect()).collect(),
            outer: match self.outer {
                Outer::Face(d) => Outer::Face(map(d)),
                v => v,
            },
        })
    }

    /// Text form: `V n`, then `E i u v s`, `R v e...`, and `O v k` or
    /// `O f e end`. All indices are 1-based.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "V {}", self.vertex_count);
        for (i, e) in self.edges.iter().enumerate() {
            let _ = writeln!(s, "E {} {} {} {}", i + 1, e.ends[0] + 1, e.ends[1] + 1, e.sign);
        }
        for (v, rot) in self.rotation.iter().enumerate() {
            let _ = write!(s, "R {}", v + 1);
            // Start the listing so that every loop's tail precedes its head.
            let start = (0..rot.len().max(1))
                .find(|&k| {
                    let cyc: Vec<Dart> = rot.iter().cycle().skip(k).take(rot.len()).copied().collect();
                    cyc.iter()
                        .enumerate()
                        .all(|(i, d)| d.end == 0 || self.edges[d.edge].ends[0] != v || cyc[..i].contains(&d.reverse()))
                })
                .unwrap_or(0);
            for d in rot.iter().cycle().skip(start).take(rot.len()) {
                let _ = write!(s, " {}", d.edge + 1);
            }
            s.push('\n');
        }
        match self.outer {
            Outer::Vertex(v) => {
                let _ = writeln!(s, "O v {}", v + 1);
            }
            Outer::Face(d) => {
                let _ = writeln!(s, "O f {} {}", d.edge + 1, d.end);
            }
        }
        s
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut n: Option<usize> = None;
        let mut edges: Vec<Option<SignedEdge>> = Vec::new();
        let mut rot_lines: Vec<(usize, usize, Vec<usize>)> = Vec::new();
        let mut outer = None;
        let bad = |line: usize, msg: &str| Error::Parse { line, msg: msg.to_string() };
        for (i, raw) in text.lines().enumerate() {
            let ln = i + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let toks: Vec<&str> = line.split_whitespace().collect();
            let num = |t: &str| -> Result<i64> { t.parse::<i64>().map_err(|_| bad(ln, &format!("bad number {t:?}"))) };
            let idx = |t: &str, max: usize| -> Result<usize> {
                let k = num(t)?;
                if k < 1 || k as usize > max {
                    return Err(bad(ln, &format!("index {k} out of range")));
                }
                Ok(k as usize - 1)
            };
            match toks[0] {
                "V" if toks.len() == 2 => n = Some(num(toks[1])?.max(0) as usize),
                "E" if toks.len() == 5 => {
                    let nv = n.ok_or_else(|| bad(ln, "E before V"))?;
                    let e = idx(toks[1], usize::MAX / 2)?;
                    let (u, v) = (idx(toks[2], nv)?, idx(toks[3], nv)?);
                    let s = num(toks[4])?;
                    if s != 1 && s != -1 {
                        return Err(bad(ln, "sign must be 1 or -1"));
                    }
                    if edges.len() <= e {
                        edges.resize(e + 1, None);
                    }
                    if edges[e].is_some() {
                        return Err(bad(ln, "duplicate edge index"));
                    }
                    edges[e] = Some(SignedEdge { ends: [u, v], sign: s as i8 });
                }
                "R" if toks.len() >= 2 => {
                    let nv = n.ok_or_else(|| bad(ln, "R before V"))?;
                    let v = idx(toks[1], nv)?;
                    let es = toks[2..].iter().map(|t| idx(t, usize::MAX / 2)).collect::<Result<Vec<_>>>()?;
                    rot_lines.push((ln, v, es));
                }
                "O" if toks.len() >= 3 => {
                    outer = Some(match (toks[1], toks.len()) {
                        ("v", 3) => Outer::Vertex(idx(toks[2], n.unwrap_or(0))?),
                        ("f", 4) => Outer::Face(Dart::new(idx(toks[2], usize::MAX / 2)?, num(toks[3])?.clamp(0, 1) as u8)),
                        _ => return Err(bad(ln, "bad outer-region record")),
                    })
                }
                _ => return Err(bad(ln, &format!("unrecognized record {line:?}"))),
            }
        }
        let n = n.ok_or_else(|| bad(0, "missing V record"))?;
        let edges: Vec<SignedEdge> = edges
            .into_iter()
            .enumerate()
            .map(|(i, e)| e.ok_or_else(|| bad(0, &format!("edge {} missing", i + 1))))
            .collect::<Result<_>>()?;
        let mut rotation = vec![Vec::new(); n];
        for (ln, v, es) in rot_lines {
            let mut used_tail = vec![false; edges.len()];
            for e in es {
                let edge = edges.get(e).ok_or_else(|| bad(ln, "unknown edge"))?;
                let end = if edge.ends == [v, v] {
                    u8::from(std::mem::replace(&mut used_tail[e], true))
                } else if edge.ends[0] == v {
                    0
                } else if edge.ends[1] == v {
                    1
                } else {
                    return Err(bad(ln, &format!("edge {} does not meet vertex {}", e + 1, v + 1)));
                };
                rotation[v].push(Dart::new(e, end));
            }
        }
        SignedPlanarGraph::new(n, edges, rotation, outer)
    }

    /// Whether a vertex bijection makes two graphs with the same edge order
    /// the same signed plane graph with the same outer region (edge
    /// directions may differ).
    pub fn same_plane_graph(&self, other: &Self) -> bool {
        if self.vertex_count != other.vertex_count || self.edges.len() != other.edges.len() {
            return false;
        }
        if self.edges.is_empty() {
            return true;
        }
        // Either every edge keeps its direction or some are flipped; decide
        // per edge from a vertex map grown along the rotation system.
        let mut map = vec![usize::MAX; self.vertex_count];
        let mut flip = vec![None; self.edges.len()];
        let e0 = 0;
        for f0 in [false, true] {
            map.iter_mut().for_each(|m| *m = usize::MAX);
            flip.iter_mut().for_each(|f| *f = None);
            if self.try_match(other, e0, f0, &mut map, &mut flip) {
                return true;
            }
        }
        false
    }

    /// An edge bijection (`map[e]` is the edge of `other`) carrying `self`
    /// onto `other` as signed graphs on the sphere, ignoring edge labels,
    /// edge directions and the unbounded region. Mirror images count.
    pub fn sphere_isomorphism(&self, other: &Self) -> Option<Vec<usize>> {
        let m = self.edges.len();
        if self.vertex_count != other.vertex_count || m != other.edges.len() || self.positive_count() != other.positive_count() {
            return None;
        }
        if m == 0 {
            return Some(Vec::new());
        }
        let idx = |d: Dart| 2 * d.edge + d.end as usize;
        let start = Dart::new(0, 0);
        for mirror in [false, true] {
            for e in 0..m {
                for end in 0..2u8 {
                    let mut map: Vec<Option<Dart>> = vec![None; 2 * m];
                    let mut stack = vec![(start, Dart::new(e, end))];
                    let mut ok = true;
                    while let Some((a, b)) = stack.pop() {
                        match map[idx(a)] {
                            Some(x) if x == b => continue,
                            Some(_) => {
                                ok = false;
                                break;
                            }
                            None => {}
                        }
                        if self.edges[a.edge].sign != other.edges[b.edge].sign {
                            ok = false;
                            break;
                        }
                        map[idx(a)] = Some(b);
                        let next = if mirror { other.prev_ccw(b) } else { other.next_ccw(b) };
                        stack.push((self.next_ccw(a), next));
                        stack.push((a.reverse(), b.reverse()));
                    }
                    if !ok || map.iter().any(|x| x.is_none()) {
                        continue;
                    }
                    let edge_map: Vec<usize> = (0..m).map(|k| map[2 * k].expect("mapped").edge).collect();
                    let mut hit = vec![false; m];
                    if edge_map.iter().all(|&x| !std::mem::replace(&mut hit[x], true)) {
                        return Some(edge_map);
                    }
                }
            }
        }
        None
    }

    fn try_match(&self, other: &Self, e0: usize, f0: bool, map: &mut [usize], flip: &mut [Option<bool>]) -> bool {
        let odart = |d: Dart, flip: &[Option<bool>]| -> Dart {
            if flip[d.edge] == Some(true) {
                d.reverse()
            } else {
                d
            }
        };
        flip[e0] = Some(f0);
        let mut queue = vec![Dart::new(e0, 0), Dart::new(e0, 1)];
        while let Some(d) = queue.pop() {
            let v = self.vertex_of(d);
            let od = odart(d, flip);
            let w = other.vertex_of(od);
            if map[v] == usize::MAX {
                if map.contains(&w) {
                    return false;
                }
                map[v] = w;
            } else if map[v] != w {
                return false;
            }
            let (rs, ro) = (&self.rotation[v], &other.rotation[w]);
            if rs.len() != ro.len() {
                return false;
            }
            let i = rs.iter().position(|&x| x == d).unwrap();
            let j = match ro.iter().position(|&x| x == od) {
                Some(j) => j,
                None => return false,
            };
            for k in 1..rs.len() {
                let a = rs[(i + k) % rs.len()];
                let b = ro[(j + k) % ro.len()];
                if a.edge != b.edge {
                    return false;
                }
                let f = a.end != b.end;
                match flip[a.edge] {
                    Some(prev) if prev != f => return false,
                    Some(_) => {}
                    None => {
                        flip[a.edge] = Some(f);
                        queue.push(a.reverse());
                    }
                }
            }
        }
        if !(self.edges.iter().zip(&other.edges).all(|(a, b)| a.sign == b.sign) && flip.iter().all(|f| f.is_some())) {
            return false;
        }
        match (self.outer, other.outer) {
            (Outer::Vertex(v), Outer::Vertex(w)) => map[v] == w,
            (Outer::Face(d), Outer::Face(e)) => {
                let (faces, _) = other.face_of_darts();
                let idx = |d: Dart| 2 * d.edge + d.end as usize;
                faces[idx(odart(d, flip))] == faces[idx(e)]
            }
            _ => false,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sphere_isomorphism_ignores_labels() {
        let g = SignedPlanarGraph::parse(FIG8).unwrap();
        let h = g.reorder_edges(&[2, 0, 3, 1]).unwrap();
        let map = g.sphere_isomorphism(&h).unwrap();
        for (e, &f) in map.iter().enumerate() {
            assert_eq!(g.edge(e).sign, h.edge(f).sign);
        }
        assert_eq!(g.sphere_isomorphism(&g), Some(vec![0, 1, 2, 3]));
    }

    const FIG8: &str = "V 3\nE 1 1 2 1\nE 2 1 3 1\nE 3 2 3 1\nE 4 1 2 1\nR 1 1 2 4\nR 2 1 4 3\nR 3 2 3\nO f 1 0\n";

    #[test]
    fn parse_and_emit_round_trip() {
        let g = SignedPlanarGraph::parse(FIG8).unwrap();
        assert_eq!(g.vertex_count(), 3);
        assert_eq!(g.edge_count(), 4);
        assert_eq!(g.face_count(), 3);
        let again = SignedPlanarGraph::parse(&g.to_text()).unwrap();
        assert_eq!(again, g);
        assert_eq!(again.to_text(), g.to_text());
    }

    #[test]
    fn non_planar_rotation_rejected() {
        // Same edges, rotation at vertex 1 swapped so faces no longer close up.
        let bad = "V 3\nE 1 1 2 1\nE 2 1 3 1\nE 3 2 3 1\nE 4 1 2 1\nR 1 1 4 2\nR 2 1 4 3\nR 3 2 3\n";
        assert!(matches!(SignedPlanarGraph::parse(bad), Err(Error::NotPlanar(_))));
    }

    #[test]
    fn loops_round_trip() {
        let text = "V 1\nE 1 1 1 -1\nE 2 1 1 1\nR 1 1 2 2 1\n";
        let g = SignedPlanarGraph::parse(text).unwrap();
        assert_eq!(g.face_count(), 3);
        assert_eq!(SignedPlanarGraph::parse(&g.to_text()).unwrap(), g);
    }

    #[test]
    fn same_plane_graph_detects_relabelled_vertices() {
        let g = SignedPlanarGraph::parse(FIG8).unwrap();
        let h = SignedPlanarGraph::parse("V 3\nE 1 2 1 1\nE 2 2 3 1\nE 3 1 3 1\nE 4 2 1 1\nR 2 1 2 4\nR 1 1 4 3\nR 3 2 3\n").unwrap();
        assert!(g.same_plane_graph(&h));
        let flipped_sign = SignedPlanarGraph::parse(&FIG8.replace("E 3 2 3 1", "E 3 2 3 -1")).unwrap();
        assert!(!g.same_plane_graph(&flipped_sign));
    }
}
