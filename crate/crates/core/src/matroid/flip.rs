use serde::{Deserialize, Serialize};

use crate::diagram::{GraphDart, Outer, SignedEdge, SignedPlanarGraph};
use crate::error::{Error, Result};
use crate::trees::enumerate_trees;

/// A move on a signed plane graph that keeps every edge and its sign.
/// Vertices are 0-based.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum FlipMove {
    /// Split the cut vertex `vertex`: the ends of `edges` there move to a new
    /// vertex (numbered last). They must be consecutive in the rotation.
    VertexSplit { vertex: usize, edges: Vec<usize> },
    /// Identify two vertices in different components; `v` is removed and
    /// later vertices shift down by one.
    VertexIdentify { u: usize, v: usize },
    /// Turn the side `edges` of the 2-separation `{u, v}` half a turn in the
    /// plane, so that its attachments at `u` and `v` are exchanged.
    TwoFlip { u: usize, v: usize, edges: Vec<usize> },
}

/// Applies a move and checks that the graphic matroid (maximal forests,
/// edge by edge) is unchanged.
pub fn apply_flip(g: &SignedPlanarGraph, mv: &FlipMove) -> Result<SignedPlanarGraph> {
    let out = match mv {
        FlipMove::VertexSplit { vertex, edges } => split(g, *vertex, edges)?,
        FlipMove::VertexIdentify { u, v } => identify(g, *u, *v)?,
        FlipMove::TwoFlip { u, v, edges } => two_flip(g, *u, *v, edges)?,
    };
    if !sphere_euler_ok(&out) {
        return Err(Error::InvalidFlip("result is not plane".into()));
    }
    if forest_bases(g)? != forest_bases(&out)? {
        return Err(Error::Internal("flip changed the graphic matroid".into()));
    }
    Ok(out)
}

fn parts(g: &SignedPlanarGraph) -> (Vec<SignedEdge>, Vec<Vec<GraphDart>>) {
    let rotation = (0..g.vertex_count()).map(|v| g.rotation(v).to_vec()).collect();
    (g.edges().to_vec(), rotation)
}

fn check_vertex(g: &SignedPlanarGraph, v: usize) -> Result<()> {
    if v >= g.vertex_count() {
        return Err(Error::InvalidFlip(format!("no vertex {}", v + 1)));
    }
    Ok(())
}

/// Position and length of the cyclic run of darts selected by `pick` in
/// `rot`, if they form one run.
fn cyclic_run(rot: &[GraphDart], pick: impl Fn(GraphDart) -> bool) -> Option<(usize, usize)> {
    let n = rot.len();
    let count = rot.iter().filter(|&&d| pick(d)).count();
    if count == 0 || count == n {
        return (count == n && n > 0).then_some((0, n));
    }
    let start = (0..n).find(|&i| pick(rot[i]) && !pick(rot[(i + n - 1) % n]))?;
    (0..count).all(|k| pick(rot[(start + k) % n])).then_some((start, count))
}

fn split(g: &SignedPlanarGraph, vertex: usize, moved: &[usize]) -> Result<SignedPlanarGraph> {
    check_vertex(g, vertex)?;
    let (mut edges, mut rotation) = parts(g);
    let rot = rotation[vertex].clone();
    let is_moved = |d: GraphDart| moved.contains(&d.edge);
    let (start, len) = cyclic_run(&rot, is_moved).ok_or_else(|| Error::InvalidFlip("split edges are not consecutive at the vertex".into()))?;
    if len == rot.len() {
        return Err(Error::InvalidFlip("split must leave edges at the vertex".into()));
    }
    let new = g.vertex_count();
    let run: Vec<GraphDart> = (0..len).map(|k| rot[(start + k) % rot.len()]).collect();
    for d in &run {
        edges[d.edge].ends[d.end as usize] = new;
    }
    rotation[vertex].retain(|d| !run.contains(d));
    rotation.push(run);
    let out = SignedPlanarGraph::new(new + 1, edges, rotation, Some(g.outer()))?;
    if component_count(&out) <= component_count(g) {
        return Err(Error::InvalidFlip(format!("vertex {} is not a cut vertex for these edges", vertex + 1)));
    }
    Ok(out)
}

fn identify(g: &SignedPlanarGraph, u: usize, v: usize) -> Result<SignedPlanarGraph> {
    check_vertex(g, u)?;
    check_vertex(g, v)?;
    let comp = components(g);
    if comp[u] == comp[v] {
        return Err(Error::InvalidFlip("identified vertices must lie in different components".into()));
    }
    let (mut edges, mut rotation) = parts(g);
    let moved = std::mem::take(&mut rotation[v]);
    rotation[u].extend(moved);
    rotation.remove(v);
    let renumber = |w: usize| match w.cmp(&v) {
        std::cmp::Ordering::Less => w,
        std::cmp::Ordering::Equal => renumber_u(u, v),
        std::cmp::Ordering::Greater => w - 1,
    };
    for e in edges.iter_mut() {
        e.ends = e.ends.map(renumber);
    }
    let outer = match g.outer() {
        Outer::Vertex(w) => Outer::Vertex(renumber(w)),
        f => f,
    };
    SignedPlanarGraph::new(g.vertex_count() - 1, edges, rotation, Some(outer))
}

fn renumber_u(u: usize, v: usize) -> usize {
    if u > v {
        u - 1
    } else {
        u
    }
}

fn two_flip(g: &SignedPlanarGraph, u: usize, v: usize, side: &[usize]) -> Result<SignedPlanarGraph> {
    check_vertex(g, u)?;
    check_vertex(g, v)?;
    if u == v || side.is_empty() || side.len() >= g.edge_count() || side.iter().any(|&e| e >= g.edge_count()) {
        return Err(Error::InvalidFlip("need two vertices and a proper set of edges".into()));
    }
    let in_side = |e: usize| side.contains(&e);
    // The side may meet the rest of the graph only at u and v.
    for w in 0..g.vertex_count() {
        if w == u || w == v {
            continue;
        }
        let kinds: Vec<bool> = g.rotation(w).iter().map(|d| in_side(d.edge)).collect();
        if kinds.contains(&true) && kinds.contains(&false) {
            return Err(Error::InvalidFlip(format!("{{{}, {}}} does not separate these edges", u + 1, v + 1)));
        }
    }
    let (mut edges, mut rotation) = parts(g);
    let runs = [u, v].map(|w| cyclic_run(g.rotation(w), |d| in_side(d.edge)));
    let (Some(ru), Some(rv)) = (runs[0], runs[1]) else {
        return Err(Error::InvalidFlip("the side must meet both vertices in one run of edges each".into()));
    };
    if ru.1 == g.rotation(u).len() || rv.1 == g.rotation(v).len() {
        return Err(Error::InvalidFlip("the other side must also meet both vertices".into()));
    }
    let take = |w: usize, (start, len): (usize, usize)| -> Vec<GraphDart> {
        let rot = g.rotation(w);
        (0..len).map(|k| rot[(start + k) % rot.len()]).collect()
    };
    let (at_u, at_v) = (take(u, ru), take(v, rv));
    let rebuild = |w: usize, (start, len): (usize, usize), insert: &[GraphDart]| -> Vec<GraphDart> {
        let rot = g.rotation(w);
        let mut out: Vec<GraphDart> = (len..rot.len()).map(|k| rot[(start + k) % rot.len()]).collect();
        out.extend_from_slice(insert);
        out
    };
    rotation[u] = rebuild(u, ru, &at_v);
    rotation[v] = rebuild(v, rv, &at_u);
    for &e in side {
        edges[e].ends = edges[e].ends.map(|w| {
            if w == u {
                v
            } else if w == v {
                u
            } else {
                w
            }
        });
    }
    SignedPlanarGraph::new(g.vertex_count(), edges, rotation, Some(g.outer()))
}

fn components(g: &SignedPlanarGraph) -> Vec<usize> {
    let n = g.vertex_count();
    let mut comp = vec![usize::MAX; n];
    let mut next = 0;
    for s in 0..n {
        if comp[s] != usize::MAX {
            continue;
        }
        comp[s] = next;
        let mut stack = vec![s];
        while let Some(w) = stack.pop() {
            for d in g.rotation(w) {
                let x = g.vertex_of(d.reverse());
                if comp[x] == usize::MAX {
                    comp[x] = next;
                    stack.push(x);
                }
            }
        }
        next += 1;
    }
    comp
}

fn component_count(g: &SignedPlanarGraph) -> usize {
    components(g).into_iter().max().map_or(0, |c| c + 1)
}

/// Every component is a plane graph on its own sphere.
fn sphere_euler_ok(g: &SignedPlanarGraph) -> bool {
    let chi = g.vertex_count() as i64 - g.edge_count() as i64 + g.face_count() as i64;
    chi == 2 * component_count(g) as i64
}

/// Maximal forests as edge masks, sorted.
pub fn forest_bases(g: &SignedPlanarGraph) -> Result<Vec<u64>> {
    if g.is_connected() {
        return enumerate_trees(g);
    }
    let m = g.edge_count();
    let rank = g.vertex_count() - component_count(g);
    let acyclic = |mask: u64| {
        let mut parent: Vec<usize> = (0..g.vertex_count()).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            r
        }
        (0..m).filter(|&e| mask >> e & 1 == 1).all(|e| {
            let [a, b] = g.edge(e).ends;
            let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
            parent[ra] = rb;
            ra != rb
        })
    };
    Ok((0..1u64 << m).filter(|s| s.count_ones() as usize == rank && acyclic(*s)).collect())
}

/// Edge sets of the flippable sides of a 2-separation `{u, v}`: each is one
/// piece of the graph cut at `u` and `v` that meets both.
pub fn two_flip_sides(g: &SignedPlanarGraph) -> Vec<(usize, usize, Vec<usize>)> {
    let n = g.vertex_count();
    let mut out = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            // Group the edges by the component of G - {u, v} they touch;
            // edges joining u and v directly are pieces of their own.
            let mut label = vec![usize::MAX; n];
            let mut next = 0;
            for s in 0..n {
                if s == u || s == v || label[s] != usize::MAX {
                    continue;
                }
                label[s] = next;
                let mut stack = vec![s];
                while let Some(w) = stack.pop() {
                    for d in g.rotation(w) {
                        let x = g.vertex_of(d.reverse());
                        if x != u && x != v && label[x] == usize::MAX {
                            label[x] = next;
                            stack.push(x);
                        }
                    }
                }
                next += 1;
            }
            let mut pieces: Vec<Vec<usize>> = vec![Vec::new(); next];
            for (e, edge) in g.edges().iter().enumerate() {
                match edge.ends.iter().find(|&&w| w != u && w != v) {
                    Some(&w) => pieces[label[w]].push(e),
                    None => pieces.push(vec![e]),
                }
            }
            let meets = |p: &[usize], w: usize| p.iter().any(|&e| g.edge(e).ends.contains(&w));
            let rest_meets = |p: &[usize], w: usize| (0..g.edge_count()).any(|e| !p.contains(&e) && g.edge(e).ends.contains(&w));
            for p in pieces {
                if p.len() > 1 && p.len() + 1 < g.edge_count() && meets(&p, u) && meets(&p, v) && rest_meets(&p, u) && rest_meets(&p, v) {
                    out.push((u, v, p));
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::matroid::colored_matroid;
    use crate::trees::canonical_graph;

    #[test]
    fn flips_keep_the_matroid() {
        for name in ["6_2", "8_5", "8_19", "9_42", "10_132"] {
            let g = canonical_graph(&fixtures::diagram(name));
            let m = colored_matroid(&g).unwrap();
            for (u, v, side) in two_flip_sides(&g) {
                let mv = FlipMove::TwoFlip { u, v, edges: side };
                if let Ok(h) = apply_flip(&g, &mv) {
                    assert_eq!(colored_matroid(&h).unwrap(), m, "{name}");
                }
            }
        }
    }

    #[test]
    fn symmetric_flip_gives_an_isomorphic_graph() {
        // A theta graph: three paths of length two between vertices 1 and 2.
        let text = "V 5\nE 1 1 3 1\nE 2 3 2 1\nE 3 1 4 1\nE 4 4 2 1\nE 5 1 5 1\nE 6 5 2 1\n\
                    R 1 1 3 5\nR 2 2 6 4\nR 3 1 2\nR 4 3 4\nR 5 5 6\n";
        let g = SignedPlanarGraph::parse(text).unwrap();
        let h = apply_flip(&g, &FlipMove::TwoFlip { u: 0, v: 1, edges: vec![0, 1] }).unwrap();
        assert!(g.sphere_isomorphism(&h).is_some());
    }

    #[test]
    fn split_then_identify() {
        // Two triangles sharing vertex 1.
        let text = "V 5\nE 1 1 2 1\nE 2 2 3 -1\nE 3 3 1 1\nE 4 1 4 -1\nE 5 4 5 1\nE 6 5 1 1\n\
                    R 1 1 3 4 6\nR 2 2 1\nR 3 3 2\nR 4 5 4\nR 5 6 5\n";
        let g = SignedPlanarGraph::parse(text).unwrap();
        let split = apply_flip(&g, &FlipMove::VertexSplit { vertex: 0, edges: vec![3, 5] }).unwrap();
        assert_eq!(split.vertex_count(), 6);
        assert!(!split.is_connected());
        let back = apply_flip(&split, &FlipMove::VertexIdentify { u: 2, v: 5 }).unwrap();
        assert!(back.is_connected());
        assert_eq!(colored_matroid(&back).unwrap(), colored_matroid(&g).unwrap());
    }

    #[test]
    fn bad_moves_are_rejected() {
        let g = fixtures::figure8_graph();
        for v in 0..g.vertex_count() {
            let edges: Vec<usize> = g.rotation(v).iter().take(1).map(|d| d.edge).collect();
            let r = apply_flip(&g, &FlipMove::VertexSplit { vertex: v, edges });
            assert!(matches!(r, Err(Error::InvalidFlip(_))));
        }
        assert!(matches!(apply_flip(&g, &FlipMove::VertexIdentify { u: 0, v: 1 }), Err(Error::InvalidFlip(_))));
        assert!(matches!(
            apply_flip(&g, &FlipMove::TwoFlip { u: 0, v: 0, edges: vec![0] }),
            Err(Error::InvalidFlip(_))
        ));
    }
}
