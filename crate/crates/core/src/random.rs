//! Seeded random connected signed plane graphs, for property tests and
//! probes.

use rand::Rng;

use crate::diagram::{GraphDart, Outer, SignedEdge, SignedPlanarGraph};

/// Sign choice for random edges.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Signs {
    Positive,
    Mixed,
}

/// A random connected plane graph with exactly `edges` edges (loops and
/// parallel edges allowed). Edges are added one at a time, either as a
/// pendant edge to a new vertex or inside a face between two corners on
/// its boundary.
pub fn random_plane_graph<R: Rng>(rng: &mut R, edges: usize, signs: Signs) -> SignedPlanarGraph {
    let mut list: Vec<SignedEdge> = Vec::new();
    let mut rotation: Vec<Vec<GraphDart>> = vec![Vec::new()];
    while list.len() < edges {
        let sign = match signs {
            Signs::Positive => 1,
            Signs::Mixed => {
                if rng.gen_bool(0.5) {
                    1
                } else {
                    -1
                }
            }
        };
        let e = list.len();
        let u = rng.gen_range(0..rotation.len());
        let pu = rng.gen_range(0..=rotation[u].len());
        if rotation.len() == 1 && list.is_empty() || rng.gen_bool(0.4) {
            let v = rotation.len();
            list.push(SignedEdge { ends: [u, v], sign });
            rotation[u].insert(pu, GraphDart::new(e, 0));
            rotation.push(vec![GraphDart::new(e, 1)]);
            continue;
        }
        // A chord: retry positions until the embedding stays planar.
        let v = rng.gen_range(0..rotation.len());
        let mut rot = rotation.clone();
        rot[u].insert(pu, GraphDart::new(e, 0));
        let pv = rng.gen_range(0..=rot[v].len());
        rot[v].insert(pv, GraphDart::new(e, 1));
        let mut trial = list.clone();
        trial.push(SignedEdge { ends: [u, v], sign });
        if SignedPlanarGraph::new(rot.len(), trial.clone(), rot.clone(), None).is_ok() {
            list = trial;
            rotation = rot;
        }
    }
    let n = rotation.len();
    let outer = if list.is_empty() {
        Outer::Vertex(0)
    } else {
        Outer::Face(GraphDart::new(rng.gen_range(0..list.len()), rng.gen_range(0..2)))
    };
    SignedPlanarGraph::new(n, list, rotation, Some(outer)).expect("construction keeps the graph planar")
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn graphs_are_connected_and_sized() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for k in 0..200 {
            let g = random_plane_graph(&mut rng, 1 + k % 10, Signs::Mixed);
            assert_eq!(g.edge_count(), 1 + k % 10);
            assert!(g.is_connected());
            let chi = g.vertex_count() as i64 - g.edge_count() as i64 + g.face_count() as i64;
            assert_eq!(chi, 2);
        }
    }

    #[test]
    fn seeds_reproduce() {
        let a = random_plane_graph(&mut ChaCha8Rng::seed_from_u64(3), 8, Signs::Mixed);
        let b = random_plane_graph(&mut ChaCha8Rng::seed_from_u64(3), 8, Signs::Mixed);
        assert_eq!(a, b);
    }
}
