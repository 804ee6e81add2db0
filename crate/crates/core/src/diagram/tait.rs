//! Checkerboard colorings, Tait graphs and the medial construction.

use super::graph::{Dart as GDart, Outer, SignedEdge, SignedPlanarGraph};
use super::{diagram_from_combinatorics, Corner, Diagram};

/// A checkerboard coloring: `shaded[f]` for every face index of the diagram.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Coloring {
    pub shaded: Vec<bool>,
}

impl Coloring {
    pub fn complement(&self) -> Coloring {
        Coloring {
            shaded: self.shaded.iter().map(|s| !s).collect(),
        }
    }

    pub fn shaded_count(&self) -> usize {
        self.shaded.iter().filter(|&&s| s).count()
    }

    pub fn unshaded_count(&self) -> usize {
        self.shaded.len() - self.shaded_count()
    }
}

/// Both colorings; the first leaves the unbounded face unshaded.
pub fn checkerboard(d: &Diagram) -> (Coloring, Coloring) {
    let faces = d.faces();
    let mut color: Vec<Option<bool>> = vec![None; faces.count];
    if d.is_round_unknot() {
        color = vec![Some(true), Some(false)];
    } else {
        // Corners k and k+1 at a crossing lie on opposite sides of an arc.
        let outer = d.outer_face(&faces);
        color[outer] = Some(false);
        let mut changed = true;
        while changed {
            changed = false;
            for c in 0..d.crossing_count() {
                for k in 0..4 {
                    let (f, g) = (faces.corner_face[c][k], faces.corner_face[c][(k + 1) % 4]);
                    if let (Some(x), None) = (color[f], color[g]) {
                        color[g] = Some(!x);
                        changed = true;
                    } else if let (None, Some(y)) = (color[f], color[g]) {
                        color[f] = Some(!y);
                        changed = true;
                    }
                }
            }
        }
    }
    let first = Coloring {
        shaded: color.into_iter().map(|c| c.expect("faces are connected")).collect(),
    };
    let second = first.complement();
    (first, second)
}

/// The shaded corner pair of a crossing: `1` for corners {1, 3} (the
/// A-smoothing joins the shaded regions, a positive edge), `0` for {0, 2}.
fn shaded_parity(faces_of: &[usize; 4], c: &Coloring) -> usize {
    if c.shaded[faces_of[1]] {
        1
    } else {
        0
    }
}

/// One vertex per shaded face, one edge per crossing in crossing order.
pub fn tait_graph(d: &Diagram, coloring: &Coloring) -> SignedPlanarGraph {
    let faces = d.faces();
    let mut vertex_of_face = vec![usize::MAX; faces.count];
    let mut n = 0;
    for (f, &s) in coloring.shaded.iter().enumerate() {
        if s {
            vertex_of_face[f] = n;
            n += 1;
        }
    }
    if d.is_round_unknot() {
        return SignedPlanarGraph::new(1, Vec::new(), vec![Vec::new()], Some(Outer::Vertex(0))).expect("single vertex");
    }
    let mut edges = Vec::with_capacity(d.crossing_count());
    let mut tail_corner = Vec::with_capacity(d.crossing_count());
    for c in 0..d.crossing_count() {
        let p = shaded_parity(&faces.corner_face[c], coloring);
        let (t, h) = (faces.corner_face[c][p], faces.corner_face[c][p + 2]);
        edges.push(SignedEdge {
            ends: [vertex_of_face[t], vertex_of_face[h]],
            sign: if p == 1 { 1 } else { -1 },
        });
        tail_corner.push(p as u8);
    }
    // Walking a face boundary keeps the face on the right, i.e. clockwise
    // around its vertex; the rotation is the reverse.
    let mut rotation = vec![Vec::new(); n];
    for corners in faces.corners(d) {
        let f = faces.face_of(corners[0]);
        if !coloring.shaded[f] {
            continue;
        }
        let v = vertex_of_face[f];
        rotation[v] = corners
            .iter()
            .rev()
            .map(|k| GDart::new(k.crossing, u8::from(k.corner != tail_corner[k.crossing])))
            .collect();
    }
    let out_face = d.outer_face(&faces);
    let outer = if coloring.shaded[out_face] {
        Outer::Vertex(vertex_of_face[out_face])
    } else {
        let k = faces.corners(d)[out_face][0];
        let t = tail_corner[k.crossing];
        Outer::Face(GDart::new(k.crossing, u8::from(k.corner != (t + 3) % 4)))
    };
    SignedPlanarGraph::new(n, edges, rotation, Some(outer)).expect("Tait graph of a diagram is plane")
}

/// For a diagram built by [`medial`] from `g`, the coloring that shades
/// the faces corresponding to vertices of `g`.
pub fn vertex_coloring(m: &Diagram, g: &SignedPlanarGraph) -> Coloring {
    let (a, b) = checkerboard(m);
    if m.is_round_unknot() {
        return a.complement();
    }
    let faces = m.faces();
    let p = if g.edge(0).sign > 0 { 1 } else { 0 };
    if a.shaded[faces.corner_face[0][p]] {
        a
    } else {
        b
    }
}

/// The coloring with more positive Tait edges; on a tie, the one that
/// leaves the unbounded face unshaded.
pub fn canonical_coloring(d: &Diagram) -> Coloring {
    let (unshaded_out, shaded_out) = checkerboard(d);
    let p1 = tait_graph(d, &unshaded_out).positive_count();
    let p2 = tait_graph(d, &shaded_out).positive_count();
    if p2 > p1 {
        shaded_out
    } else {
        unshaded_out
    }
}

/// The diagram whose Tait graph (shaded faces = vertices) is `g`. Arc
/// labels are `2e + end + 1` for the corner after each dart; the basepoint
/// is the arc labelled 1.
pub fn medial(g: &SignedPlanarGraph) -> Diagram {
    medial_with_basepoint(g, GDart::new(0, 0))
}

/// As [`medial`], with the basepoint on the arc of the corner after `base`.
pub fn medial_with_basepoint(g: &SignedPlanarGraph, base: GDart) -> Diagram {
    let m = g.edge_count();
    if m == 0 {
        return Diagram::round_unknot();
    }
    let arc = |d: GDart| 2 * d.edge + d.end as usize;
    // Slots counterclockwise: NE, NW, SW, SE with the tail to the west.
    let mut slots = vec![[0usize; 4]; m];
    for (e, slot) in slots.iter_mut().enumerate() {
        let (d0, d1) = (GDart::new(e, 0), GDart::new(e, 1));
        *slot = [arc(g.prev_ccw(d1)), arc(d0), arc(g.prev_ccw(d0)), arc(d1)];
    }
    let under_02: Vec<bool> = g.edges().iter().map(|e| e.sign > 0).collect();
    let labels: Vec<u32> = (1..=2 * m as u32).collect();
    let outer = match g.outer() {
        Outer::Vertex(v) => g.rotation(v).first().map(|d| Corner {
            crossing: d.edge,
            corner: if d.end == 0 { 1 } else { 3 },
        }),
        Outer::Face(d) => Some(Corner {
            crossing: d.edge,
            corner: if d.end == 0 { 0 } else { 2 },
        }),
    };
    diagram_from_combinatorics(slots, under_02, labels, arc(base), outer).expect("medial of a plane graph is a diagram")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn figure_eight_face_split() {
        let d = fixtures::diagram("4_1");
        let (a, b) = checkerboard(&d);
        assert_eq!((a.shaded_count(), a.unshaded_count()), (3, 3));
        assert_eq!((b.shaded_count(), b.unshaded_count()), (3, 3));
        assert_eq!(a.complement(), b);
    }

    #[test]
    fn trefoil_face_split_and_coloring() {
        let d = fixtures::diagram("3_1");
        let (a, b) = checkerboard(&d);
        let mut splits = [(a.shaded_count(), a.unshaded_count()), (b.shaded_count(), b.unshaded_count())];
        splits.sort();
        assert_eq!(splits, [(2, 3), (3, 2)]);
        let g = tait_graph(&d, &canonical_coloring(&d));
        assert_eq!(g.positive_count(), 3);
        assert_eq!(g.vertex_count(), 2);
        assert!(g.edges().iter().all(|e| e.ends[0] != e.ends[1]));
    }

    #[test]
    fn round_unknot_coloring_and_graph() {
        let d = Diagram::round_unknot();
        let (a, b) = checkerboard(&d);
        assert_eq!((a.shaded_count(), b.shaded_count()), (1, 1));
        let g = tait_graph(&d, &canonical_coloring(&d));
        assert_eq!((g.vertex_count(), g.edge_count()), (1, 0));
        assert!(medial(&g).is_round_unknot());
    }

    #[test]
    fn dual_colorings_flip_signs() {
        for name in ["3_1", "4_1", "8_19", "10_132"] {
            let d = fixtures::diagram(name);
            let (a, b) = checkerboard(&d);
            let (ga, gb) = (tait_graph(&d, &a), tait_graph(&d, &b));
            assert_eq!(ga.vertex_count() + gb.vertex_count(), d.crossing_count() + 2);
            for (x, y) in ga.edges().iter().zip(gb.edges()) {
                assert_eq!(x.sign, -y.sign);
            }
        }
    }

    #[test]
    fn medial_round_trips_fixtures() {
        for name in ["3_1", "trefoil_right", "4_1", "6_2", "8_19", "10_132", "11n34"] {
            let d = fixtures::diagram(name);
            let g = tait_graph(&d, &canonical_coloring(&d));
            let m = medial(&g);
            assert_eq!(m.crossing_count(), d.crossing_count());
            let shaded = vertex_coloring(&m, &g);
            let back = tait_graph(&m, &shaded);
            assert!(back.same_plane_graph(&g), "{name}");
        }
    }
}
