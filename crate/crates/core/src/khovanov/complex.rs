use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use super::{loops, marker_vec, Loops};
use crate::diagram::Diagram;
use crate::poly::PolyQ;

/// An enhanced state: markers (bit set = B) and loop signs (bit set = `+`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Generator {
    pub markers: u64,
    pub signs: u64,
}

/// The Khovanov complex of a diagram, generated lazily from its states.
#[derive(Clone, Debug)]
pub struct KhComplex {
    n: usize,
    reduced: bool,
    n_plus: i64,
    n_minus: i64,
    states: Vec<Loops>,
    /// First arc of every loop, per state.
    reps: Vec<Vec<usize>>,
    /// Arcs at each crossing.
    crossing_arcs: Vec<[usize; 4]>,
    basepoint: usize,
    offsets: Vec<usize>,
}

impl KhComplex {
    pub fn new(d: &Diagram, reduced: bool) -> Self {
        let n = d.crossing_count();
        let states: Vec<Loops> = (0..1u64 << n).into_par_iter().map(|s| loops(d, &marker_vec(s, n))).collect();
        let reps = states
            .iter()
            .map(|l| {
                let mut r = vec![usize::MAX; l.count];
                for (a, &k) in l.arc_loop.iter().enumerate() {
                    if r[k] == usize::MAX {
                        r[k] = a;
                    }
                }
                r
            })
            .collect();
        let mut offsets = Vec::with_capacity(states.len() + 1);
        let mut acc = 0;
        for l in &states {
            offsets.push(acc);
            acc += 1usize << (l.count - usize::from(reduced));
        }
        offsets.push(acc);
        let (n_plus, n_minus) = d.sign_counts();
        KhComplex {
            n,
            reduced,
            n_plus: n_plus as i64,
            n_minus: n_minus as i64,
            states,
            reps,
            crossing_arcs: (0..n).map(|c| d.crossing(c)).collect(),
            basepoint: d.basepoint(),
            offsets,
        }
    }

    pub fn crossing_count(&self) -> usize {
        self.n
    }

    pub fn is_reduced(&self) -> bool {
        self.reduced
    }

    pub fn generator_count(&self) -> usize {
        *self.offsets.last().unwrap()
    }

    pub fn loop_count(&self, markers: u64) -> usize {
        self.states[markers as usize].count
    }

    pub fn loops_of(&self, markers: u64) -> &Loops {
        &self.states[markers as usize]
    }

    /// Loop of `markers` containing the basepoint.
    pub fn base_loop(&self, markers: u64) -> usize {
        self.states[markers as usize].arc_loop[self.basepoint]
    }

    /// Whether the enhanced state belongs to this complex.
    pub fn contains(&self, g: Generator) -> bool {
        (g.markers as usize) < self.states.len()
            && g.signs >> self.loop_count(g.markers) == 0
            && (!self.reduced || g.signs >> self.base_loop(g.markers) & 1 == 1)
    }

    pub fn index_of(&self, g: Generator) -> Option<usize> {
        if !self.contains(g) {
            return None;
        }
        let local = if self.reduced {
            let p = self.base_loop(g.markers);
            ((g.signs >> (p + 1)) << p) | (g.signs & ((1 << p) - 1))
        } else {
            g.signs
        };
        Some(self.offsets[g.markers as usize] + local as usize)
    }

    pub fn generator(&self, index: usize) -> Generator {
        let s = self.offsets.partition_point(|&o| o <= index) - 1;
        let local = (index - self.offsets[s]) as u64;
        let signs = if self.reduced {
            let p = self.base_loop(s as u64);
            ((local >> p) << (p + 1)) | (1 << p) | (local & ((1 << p) - 1))
        } else {
            local
        };
        Generator { markers: s as u64, signs }
    }

    /// All enhanced states with the given markers.
    pub fn generators_of_state(&self, markers: u64) -> impl Iterator<Item = Generator> + '_ {
        let s = markers as usize;
        (self.offsets[s]..self.offsets[s + 1]).map(move |i| self.generator(i))
    }

    /// `(i, j)`: `i = #B - n_-`, `j = #B - (#plus - #minus) + n_+ - 2 n_-`.
    pub fn bidegree(&self, g: Generator) -> (i64, i64) {
        let b = g.markers.count_ones() as i64;
        let k = self.loop_count(g.markers) as i64;
        let plus = g.signs.count_ones() as i64;
        let tau = plus - (k - plus);
        (b - self.n_minus, b - tau + self.n_plus - 2 * self.n_minus)
    }

    /// Sign of the edge changing crossing `c` from A to B in `markers`.
    pub fn edge_sign(markers: u64, c: usize) -> i64 {
        if (markers >> (c + 1)).count_ones() % 2 == 0 {
            1
        } else {
            -1
        }
    }

    /// Differential of one generator, restricted to marker changes at the
    /// crossings in `allowed` (a bit mask).
    pub fn differential_at(&self, g: Generator, allowed: u64) -> Vec<(Generator, i64)> {
        let mut out = Vec::new();
        for c in 0..self.n {
            if g.markers >> c & 1 == 1 || allowed >> c & 1 == 0 {
                continue;
            }
            let t = g.markers | 1 << c;
            let sign = Self::edge_sign(g.markers, c);
            let (old, new) = (&self.states[g.markers as usize], &self.states[t as usize]);
            let arcs = self.crossing_arcs[c];
            let mut old_at: Vec<usize> = arcs.iter().map(|&a| old.arc_loop[a]).collect();
            old_at.sort_unstable();
            old_at.dedup();
            let mut new_at: Vec<usize> = arcs.iter().map(|&a| new.arc_loop[a]).collect();
            new_at.sort_unstable();
            new_at.dedup();
            // Loops away from the crossing keep their signs.
            let mut base = 0u64;
            for (k, &rep) in self.reps[t as usize].iter().enumerate() {
                if new_at.contains(&k) {
                    continue;
                }
                if g.signs >> old.arc_loop[rep] & 1 == 1 {
                    base |= 1 << k;
                }
            }
            let bit = |k: usize| g.signs >> k & 1 == 1;
            let mut push = |signs: u64| out.push((Generator { markers: t, signs }, sign));
            match (old_at.len(), new_at.len()) {
                (2, 1) => {
                    let k = new_at[0];
                    match (bit(old_at[0]), bit(old_at[1])) {
                        (true, true) => {}
                        (true, false) | (false, true) => push(base | 1 << k),
                        (false, false) => push(base),
                    }
                }
                (1, 2) => {
                    let (k1, k2) = (new_at[0], new_at[1]);
                    if bit(old_at[0]) {
                        push(base | 1 << k1 | 1 << k2);
                    } else {
                        push(base | 1 << k2);
                        push(base | 1 << k1);
                    }
                }
                _ => unreachable!("a marker change merges or splits"),
            }
        }
        out
    }

    pub fn differential(&self, g: Generator) -> Vec<(Generator, i64)> {
        self.differential_at(g, u64::MAX)
    }

    /// Generators grouped by bidegree, each group in index order.
    pub fn by_bidegree(&self) -> BTreeMap<(i64, i64), Vec<Generator>> {
        let mut out: BTreeMap<(i64, i64), Vec<Generator>> = BTreeMap::new();
        for i in 0..self.generator_count() {
            let g = self.generator(i);
            out.entry(self.bidegree(g)).or_default().push(g);
        }
        out
    }

    /// Graded Euler characteristic of the chain groups.
    pub fn euler_characteristic(&self) -> PolyQ {
        let mut p = PolyQ::zero();
        for ((i, j), gens) in self.by_bidegree() {
            let sign = if i.rem_euclid(2) == 0 { 1 } else { -1 };
            p.add_term(j, (sign * gens.len() as i64).into());
        }
        p
    }
}
