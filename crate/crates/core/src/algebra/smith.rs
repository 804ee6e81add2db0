use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// A sparse integer matrix given by `(row, col, value)` triplets.
#[derive(Clone, Debug, Default)]
pub struct SparseMatrix {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<(usize, usize, i64)>,
}

impl SparseMatrix {
    pub fn new(rows: usize, cols: usize) -> Self {
        SparseMatrix {
            rows,
            cols,
            entries: Vec::new(),
        }
    }

    pub fn push(&mut self, r: usize, c: usize, v: i64) {
        if v != 0 {
            self.entries.push((r, c, v));
        }
    }
}

/// Rank and the non-unit elementary divisors (each > 1).
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Divisors {
    pub rank: usize,
    pub torsion: Vec<BigInt>,
}

/// Unit pivots are eliminated sparsely with checked `i64` arithmetic; what
/// remains is reduced densely over big integers.
pub fn elementary_divisors(m: &SparseMatrix) -> Divisors {
    let mut rows: Vec<BTreeMap<usize, i64>> = vec![BTreeMap::new(); m.rows];
    for &(r, c, v) in &m.entries {
        let e = rows[r].entry(c).or_insert(0);
        *e += v;
        if *e == 0 {
            rows[r].remove(&c);
        }
    }
    match sparse_unit_elimination(rows, m.cols) {
        Some((rank, rest)) => {
            let mut d = dense_divisors(rest);
            d.rank += rank;
            d
        }
        None => {
            // Overflow: redo everything with big integers.
            let mut dense = vec![vec![BigInt::zero(); m.cols]; m.rows];
            for &(r, c, v) in &m.entries {
                dense[r][c] += v;
            }
            dense_divisors(dense)
        }
    }
}

fn sparse_unit_elimination(mut rows: Vec<BTreeMap<usize, i64>>, ncols: usize) -> Option<(usize, Vec<Vec<BigInt>>)> {
    let mut cols: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); ncols];
    for (r, row) in rows.iter().enumerate() {
        for &c in row.keys() {
            cols[c].insert(r);
        }
    }
    let mut alive_row = vec![true; rows.len()];
    let mut rank = 0;
    loop {
        let mut progress = false;
        for c in 0..ncols {
            // Shortest row holding a unit in this column.
            let pivot = cols[c].iter().filter(|&&r| rows[r][&c].abs() == 1).min_by_key(|&&r| rows[r].len()).copied();
            let Some(p) = pivot else { continue };
            progress = true;
            rank += 1;
            let prow = std::mem::take(&mut rows[p]);
            alive_row[p] = false;
            for &k in prow.keys() {
                cols[k].remove(&p);
            }
            let pv = prow[&c];
            let others: Vec<usize> = cols[c].iter().copied().collect();
            for r in others {
                let f = rows[r][&c] * pv; // pv = ±1, so this is a / pv
                for (&k, &v) in &prow {
                    let e = rows[r].entry(k).or_insert(0);
                    let nv = e.checked_sub(f.checked_mul(v)?)?;
                    *e = nv;
                    if nv == 0 {
                        rows[r].remove(&k);
                        cols[k].remove(&r);
                    } else {
                        cols[k].insert(r);
                    }
                }
            }
            debug_assert!(cols[c].is_empty());
        }
        if !progress {
            break;
        }
    }
    let live_rows: Vec<usize> = (0..rows.len()).filter(|&r| alive_row[r] && !rows[r].is_empty()).collect();
    let live_cols: Vec<usize> = (0..ncols).filter(|&c| !cols[c].is_empty()).collect();
    let col_index: BTreeMap<usize, usize> = live_cols.iter().enumerate().map(|(i, &c)| (c, i)).collect();
    let dense = live_rows
        .iter()
        .map(|&r| {
            let mut v = vec![BigInt::zero(); live_cols.len()];
            for (&c, &x) in &rows[r] {
                v[col_index[&c]] = BigInt::from(x);
            }
            v
        })
        .collect();
    Some((rank, dense))
}

/// Diagonalizes a dense matrix by row and column operations. The diagonal
/// need not form a divisibility chain; torsion is compared after
/// [`normalize_torsion`].
fn dense_divisors(mut a: Vec<Vec<BigInt>>) -> Divisors {
    let rows = a.len();
    let cols = a.first().map_or(0, |r| r.len());
    let mut out = Divisors::default();
    let mut t = 0;
    while t < rows.min(cols) {
        // Smallest nonzero entry in the remaining block.
        let mut best: Option<(usize, usize)> = None;
        for r in t..rows {
            for c in t..cols {
                if !a[r][c].is_zero() && best.map_or(true, |(br, bc)| a[r][c].abs() < a[br][bc].abs()) {
                    best = Some((r, c));
                }
            }
        }
        let Some((br, bc)) = best else { break };
        a.swap(t, br);
        for row in a.iter_mut() {
            row.swap(t, bc);
        }
        loop {
            let p = a[t][t].clone();
            let mut clean = true;
            for r in t + 1..rows {
                if a[r][t].is_zero() {
                    continue;
                }
                let q = a[r][t].div_floor(&p);
                for c in t..cols {
                    let v = &q * &a[t][c];
                    a[r][c] -= v;
                }
                if !a[r][t].is_zero() {
                    clean = false;
                }
            }
            for c in t + 1..cols {
                if a[t][c].is_zero() {
                    continue;
                }
                let q = a[t][c].div_floor(&p);
                for r in t..rows {
                    let v = &q * &a[r][t];
                    a[r][c] -= v;
                }
                if !a[t][c].is_zero() {
                    clean = false;
                }
            }
            if clean {
                break;
            }
            // Move the smallest entry of row/column t to the pivot.
            let mut best = (t, t);
            for r in t..rows {
                if !a[r][t].is_zero() && a[r][t].abs() < a[best.0][best.1].abs() {
                    best = (r, t);
                }
            }
            for c in t..cols {
                if !a[t][c].is_zero() && a[t][c].abs() < a[best.0][best.1].abs() {
                    best = (t, c);
                }
            }
            if best.1 == t {
                a.swap(t, best.0);
            } else {
                for row in a.iter_mut() {
                    row.swap(t, best.1);
                }
            }
        }
        let p = a[t][t].abs();
        out.rank += 1;
        if !p.is_one() {
            out.torsion.push(p);
        }
        t += 1;
    }
    out
}

/// Splits torsion coefficients into sorted prime powers.
pub fn normalize_torsion(torsion: &[BigInt]) -> Vec<BigInt> {
    let mut out = Vec::new();
    for t in torsion {
        let mut n = t.abs();
        let mut p = BigInt::from(2);
        while &p * &p <= n {
            if (&n % &p).is_zero() {
                let mut q = BigInt::one();
                while (&n % &p).is_zero() {
                    n /= &p;
                    q *= &p;
                }
                out.push(q);
            }
            p += 1;
        }
        if n > BigInt::one() {
            out.push(n);
        }
    }
    out.sort();
    out
}

/// Convenience for tests: a dense `i64` matrix.
pub fn divisors_of_dense(a: &[Vec<i64>]) -> Divisors {
    let mut m = SparseMatrix::new(a.len(), a.first().map_or(0, |r| r.len()));
    for (r, row) in a.iter().enumerate() {
        for (c, &v) in row.iter().enumerate() {
            m.push(r, c, v);
        }
    }
    elementary_divisors(&m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::ToPrimitive;
    use proptest::prelude::*;

    fn torsion_of(a: &[Vec<i64>]) -> (usize, Vec<i64>) {
        let d = divisors_of_dense(a);
        (d.rank, normalize_torsion(&d.torsion).iter().map(|x| x.to_i64().unwrap()).collect())
    }

    #[test]
    fn small_examples() {
        assert_eq!(torsion_of(&[vec![2, 0], vec![0, 3]]), (2, vec![2, 3]));
        assert_eq!(torsion_of(&[vec![2, 4], vec![6, 8]]), (2, vec![2, 4]));
        assert_eq!(torsion_of(&[vec![1, 1], vec![1, 1]]), (1, vec![]));
        assert_eq!(torsion_of(&[vec![0, 0]]), (0, vec![]));
        assert_eq!(torsion_of(&[vec![12]]), (1, vec![3, 4]));
    }

    /// |det| of a square matrix via Bareiss, as an independent oracle.
    fn det(a: &[Vec<i64>]) -> BigInt {
        let n = a.len();
        let mut m: Vec<Vec<BigInt>> = a.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
        let mut prev = BigInt::one();
        let mut sign = BigInt::one();
        for p in 0..n {
            if m[p][p].is_zero() {
                match (p + 1..n).find(|&r| !m[r][p].is_zero()) {
                    Some(r) => {
                        m.swap(p, r);
                        sign = -&sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for r in p + 1..n {
                for c in p + 1..n {
                    m[r][c] = (&m[r][c] * &m[p][p] - &m[r][p] * &m[p][c]) / &prev;
                }
            }
            prev = m[p][p].clone();
        }
        (&m[n - 1][n - 1] * &sign).abs()
    }

    proptest! {
        #[test]
        fn divisor_product_is_determinant(entries in proptest::collection::vec(-6i64..7, 16)) {
            let a: Vec<Vec<i64>> = entries.chunks(4).map(|r| r.to_vec()).collect();
            let d = divisors_of_dense(&a);
            let det = det(&a);
            if det.is_zero() {
                prop_assert!(d.rank < 4);
            } else {
                prop_assert_eq!(d.rank, 4);
                let prod: BigInt = d.torsion.iter().product();
                prop_assert_eq!(prod, det);
            }
        }
    }
}
