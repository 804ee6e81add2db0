use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::poly::PolyA;

/// One letter of an activity word. Capitals are tree edges, lower case
/// non-tree edges; `Bar` variants are negative edges.
#[allow(non_camel_case_types)]
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Letter {
    L,
    D,
    l,
    d,
    LBar,
    DBar,
    lBar,
    dBar,
}

impl Letter {
    pub fn new(positive: bool, in_tree: bool, live: bool) -> Letter {
        use Letter::*;
        match (positive, in_tree, live) {
            (true, true, true) => L,
            (true, true, false) => D,
            (true, false, true) => l,
            (true, false, false) => d,
            (false, true, true) => LBar,
            (false, true, false) => DBar,
            (false, false, true) => lBar,
            (false, false, false) => dBar,
        }
    }

    pub fn is_positive(self) -> bool {
        matches!(self, Letter::L | Letter::D | Letter::l | Letter::d)
    }

    pub fn in_tree(self) -> bool {
        matches!(self, Letter::L | Letter::D | Letter::LBar | Letter::DBar)
    }

    pub fn is_live(self) -> bool {
        matches!(self, Letter::L | Letter::l | Letter::LBar | Letter::lBar)
    }

    /// Marker of the fundamental cycle's state: `true` for B.
    pub fn cycle_marker_is_b(self) -> bool {
        use Letter::*;
        matches!(self, L | d | DBar | lBar)
    }

    /// Smoothing of the twisted unknot: dead edges only.
    pub fn smoothing(self) -> Mark {
        use Letter::*;
        match self {
            D | dBar => Mark::A,
            d | DBar => Mark::B,
            _ => Mark::Live,
        }
    }

    /// Sign of the kept crossing in the twisted unknot, for live letters.
    pub fn twist_sign(self) -> Option<i32> {
        use Letter::*;
        match self {
            l | LBar => Some(1),
            L | lBar => Some(-1),
            _ => None,
        }
    }

    fn as_str(self) -> &'static str {
        use Letter::*;
        match self {
            L => "L",
            D => "D",
            l => "ℓ",
            d => "d",
            LBar => "L\u{304}",
            DBar => "D\u{304}",
            lBar => "ℓ\u{304}",
            dBar => "d\u{304}",
        }
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One letter per edge, in edge order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ActivityWord(pub Vec<Letter>);

impl ActivityWord {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    fn count(&self, letter: Letter) -> i64 {
        self.0.iter().filter(|&&x| x == letter).count() as i64
    }

    /// Thistlethwaite's monomial.
    pub fn monomial(&self) -> PolyA {
        use Letter::*;
        let [p, q, r, s, x, y, z, w] = [L, D, l, d, LBar, DBar, lBar, dBar].map(|c| self.count(c));
        let sign = if (p + r + x + z) % 2 == 0 { 1 } else { -1 };
        PolyA::monomial(sign, -3 * p + q + 3 * r - s + 3 * x - y - 3 * z + w)
    }

    pub fn grading_u(&self) -> i64 {
        use Letter::*;
        self.count(L) - self.count(l) - self.count(LBar) + self.count(lBar)
    }

    pub fn grading_v(&self) -> i64 {
        self.count(Letter::L) + self.count(Letter::D)
    }

    /// Tree edges as a mask.
    pub fn tree_mask(&self) -> u64 {
        self.0.iter().enumerate().filter(|(_, x)| x.in_tree()).fold(0, |m, (i, _)| m | 1 << i)
    }

    pub fn live_mask(&self) -> u64 {
        self.0.iter().enumerate().filter(|(_, x)| x.is_live()).fold(0, |m, (i, _)| m | 1 << i)
    }

    pub fn partial_smoothing(&self) -> PartialSmoothing {
        PartialSmoothing(self.0.iter().map(|x| x.smoothing()).collect())
    }

    /// Markers of the fundamental cycle's state (`true` = B).
    pub fn cycle_markers(&self) -> Vec<bool> {
        self.0.iter().map(|x| x.cycle_marker_is_b()).collect()
    }
}

impl fmt::Display for ActivityWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for x in &self.0 {
            write!(f, "{x}")?;
        }
        Ok(())
    }
}

impl Serialize for ActivityWord {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl FromStr for ActivityWord {
    type Err = Error;

    /// Accepts `ℓ` or `l`, and a combining macron or a trailing `'` for bars.
    fn from_str(s: &str) -> Result<Self> {
        let mut out: Vec<Letter> = Vec::new();
        for ch in s.chars() {
            use Letter::*;
            let bar = |x: Letter| match x {
                L => Some(LBar),
                D => Some(DBar),
                l => Some(lBar),
                d => Some(dBar),
                _ => None,
            };
            match ch {
                'L' => out.push(L),
                'D' => out.push(D),
                'l' | 'ℓ' => out.push(l),
                'd' => out.push(d),
                '\u{304}' | '\'' => {
                    let last = out.pop().and_then(bar).ok_or_else(|| Error::Parse {
                        line: 0,
                        msg: format!("misplaced bar in {s:?}"),
                    })?;
                    out.push(last);
                }
                c if c.is_whitespace() => {}
                c => {
                    return Err(Error::Parse {
                        line: 0,
                        msg: format!("bad letter {c:?} in activity word"),
                    })
                }
            }
        }
        Ok(ActivityWord(out))
    }
}

/// A marker or a live (unsmoothed) crossing.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Mark {
    A,
    B,
    Live,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PartialSmoothing(pub Vec<Mark>);

impl PartialSmoothing {
    /// `Some(true)` for B, `Some(false)` for A, `None` for live.
    pub fn as_options(&self) -> Vec<Option<bool>> {
        self.0
            .iter()
            .map(|m| match m {
                Mark::A => Some(false),
                Mark::B => Some(true),
                Mark::Live => None,
            })
            .collect()
    }

    /// The relation generating the tree order: every A of `other` is A or
    /// live here, and some A here is B in `other`.
    pub fn covers(&self, other: &PartialSmoothing) -> bool {
        let ok = self.0.iter().zip(&other.0).all(|(x, y)| *y != Mark::A || *x != Mark::B);
        let strict = self.0.iter().zip(&other.0).any(|(x, y)| *x == Mark::A && *y == Mark::B);
        ok && strict
    }
}

impl fmt::Display for PartialSmoothing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for m in &self.0 {
            f.write_str(match m {
                Mark::A => "A",
                Mark::B => "B",
                Mark::Live => "*",
            })?;
        }
        Ok(())
    }
}

impl Serialize for PartialSmoothing {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> ActivityWord {
        s.parse().unwrap()
    }

    #[test]
    fn monomials_and_gradings() {
        assert_eq!(w("LLdd").monomial(), PolyA::monomial(1, -8));
        assert_eq!(w("LdDd").monomial(), PolyA::monomial(-1, -4));
        assert_eq!(w("ℓLdD").monomial(), PolyA::one());
        assert_eq!((w("LLdd").grading_u(), w("LLdd").grading_v()), (2, 2));
        assert_eq!((w("ℓℓDD").grading_u(), w("ℓℓDD").grading_v()), (-2, 2));
        assert_eq!((w("").grading_u(), w("").grading_v()), (0, 0));
    }

    #[test]
    fn smoothings_from_words() {
        assert_eq!(w("LLdd").partial_smoothing().to_string(), "**BB");
        assert_eq!(w("LdDd").partial_smoothing().to_string(), "*BAB");
        assert_eq!(w("ℓℓDD").partial_smoothing().to_string(), "**AA");
    }

    #[test]
    fn barred_letters_parse_and_print() {
        let x = w("Ld'ℓ\u{304}D");
        assert_eq!(x.0, vec![Letter::L, Letter::dBar, Letter::lBar, Letter::D]);
        assert_eq!(w(&x.to_string()), x);
        assert!("Lx".parse::<ActivityWord>().is_err());
        assert!("'L".parse::<ActivityWord>().is_err());
    }

    #[test]
    fn capitals_are_the_tree() {
        assert_eq!(w("LdDd").tree_mask(), 0b0101);
        assert_eq!(w("LdDd").live_mask(), 0b0001);
    }
}
