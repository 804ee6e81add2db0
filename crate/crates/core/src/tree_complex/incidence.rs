use serde::Serialize;

use super::{CycleTable, Variant};
use crate::error::{Error, Result};
use crate::trees::{ActivityWord, Letter};

/// A nonzero entry `<∂Z_from, Z_to>`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct DirectIncidence {
    pub from: usize,
    pub from_variant: Variant,
    pub to: usize,
    pub to_variant: Variant,
    pub value: i64,
}

/// `<∂Z_1, Z_2>` in the reduced complex: the coefficient of `Z_2` when
/// `∂Z_1` is written in the basis where every fundamental cycle replaces
/// its leading summand.
pub fn direct_incidence(table: &CycleTable, t1: usize, t2: usize) -> i64 {
    let z1 = table.cycle_of(t1, Variant::Plus);
    let z2 = table.cycle_of(t2, Variant::Plus);
    table.boundary(&z1.terms).get(&z2.leading).copied().unwrap_or(0)
}

/// The plain inner product `sum_s (∂Z_1)_s (Z_2)_s` in the basis of
/// enhanced states.
pub fn inner_product(table: &CycleTable, t1: usize, t2: usize) -> i64 {
    let d = table.boundary(&table.cycle_of(t1, Variant::Plus).terms);
    table.cycle_of(t2, Variant::Plus).terms.iter().map(|(g, c)| d.get(g).map_or(0, |v| v * c)).sum()
}

/// Every nonzero direct incidence between fundamental cycles of the table.
pub fn direct_incidences(table: &CycleTable) -> Vec<DirectIncidence> {
    use rayon::prelude::*;
    let mut out: Vec<DirectIncidence> = table
        .cycles
        .par_iter()
        .flat_map_iter(|z1| {
            let d = table.boundary(&z1.terms);
            let mut hits: Vec<DirectIncidence> = d
                .iter()
                .filter_map(|(g, &value)| {
                    let z2 = &table.cycles[*table.by_leading.get(g)?];
                    Some(DirectIncidence {
                        from: z1.tree,
                        from_variant: z1.variant,
                        to: z2.tree,
                        to_variant: z2.variant,
                        value,
                    })
                })
                .collect();
            hits.sort_by_key(|h| (h.to, h.to_variant));
            hits
        })
        .collect();
    out.sort_by_key(|h| (h.from, h.from_variant, h.to, h.to_variant));
    out
}

/// Whether `w2` comes from `w1` by one of the four two-letter changes
/// `L d̄ → d D̄`, `d̄ D → L̄ d`, `ℓ̄ D → D̄ d`, `D d̄ → ℓ D̄`, the first letter
/// of each pattern sitting at the earlier position.
pub fn classify_direct(w1: &ActivityWord, w2: &ActivityWord) -> Result<bool> {
    if w1.len() != w2.len() {
        return Err(Error::LengthMismatch(w1.len(), w2.len()));
    }
    let diff: Vec<usize> = (0..w1.len()).filter(|&k| w1.0[k] != w2.0[k]).collect();
    let [i, j] = diff[..] else { return Ok(false) };
    use Letter::*;
    const PATTERNS: [[Letter; 4]; 4] = [[L, dBar, d, DBar], [dBar, D, LBar, d], [lBar, D, DBar, d], [D, dBar, l, DBar]];
    let seen = [w1.0[i], w1.0[j], w2.0[i], w2.0[j]];
    Ok(PATTERNS.contains(&seen))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> ActivityWord {
        s.parse().unwrap()
    }

    #[test]
    fn patterns() {
        assert!(classify_direct(&w("Ld'"), &w("dD'")).unwrap());
        assert!(classify_direct(&w("d'xD".replace('x', "ℓ").as_str()), &w("L'ℓd")).unwrap());
        assert!(!classify_direct(&w("Ld'"), &w("Ld'")).unwrap());
        assert!(!classify_direct(&w("Ld'D"), &w("dD'd")).unwrap());
        assert!(!classify_direct(&w("dD'"), &w("Ld'")).unwrap());
        assert!(classify_direct(&w("L"), &w("LD")).is_err());
    }
}
