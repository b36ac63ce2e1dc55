//! The Chen-Milnor recursion
//!
//! ```text
//! eta_1(a_ij)     = alpha_i
//! eta_{q+1}(a_i0) = alpha_i
//! eta_{q+1}(a_ij) = eta_q(v_ij)^-1 alpha_i eta_q(v_ij)
//! ```
//!
//! evaluated two ways: on Magnus series (polynomial cost in the number of
//! generators and monomials) and on literal free-group words (exponential
//! growth, guarded). Both take the path words `v_ij` as input so link
//! diagrams and cut-diagrams share the code.

use std::collections::HashMap;

use thiserror::Error;

use crate::gauss::{ArcId, ArcTable};
use crate::series::TruncSeries;
use crate::word::{FreeWord, Letter};

/// Default cap on the length of any word the word engine materializes.
pub const DEFAULT_WORD_GUARD: usize = 1_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("word engine guard exceeded: a word of length {needed} would exceed the limit {limit}")]
pub struct GuardExceeded {
    pub needed: usize,
    pub limit: usize,
}

/// Upper bound on word lengths for the word engine.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct WordGuard(pub usize);

impl Default for WordGuard {
    fn default() -> Self {
        WordGuard(DEFAULT_WORD_GUARD)
    }
}

impl WordGuard {
    /// The `MILNOR_GUARD` environment variable overrides the default.
    pub fn from_env() -> Self {
        std::env::var("MILNOR_GUARD")
            .ok()
            .and_then(|v| v.trim().parse().ok())
            .map(WordGuard)
            .unwrap_or_default()
    }

    fn check(&self, needed: usize) -> Result<(), GuardExceeded> {
        if needed > self.0 {
            Err(GuardExceeded {
                needed,
                limit: self.0,
            })
        } else {
            Ok(())
        }
    }
}

/// Path words `v_ij` for every generator: `paths[i][j]` is the signed
/// sequence of generators crossed on the way from generator `(i, 0)` to
/// `(i, j)`. `paths[i][0]` is empty.
pub(crate) type PathSystem = Vec<Vec<Vec<Letter<ArcId>>>>;

/// Path words of a based diagram: `v_ij = u_i1^e(i1) ... u_ij^e(ij)`.
pub(crate) fn diagram_paths(table: &ArcTable) -> PathSystem {
    table
        .components
        .iter()
        .map(|c| {
            let mut paths = vec![Vec::new()];
            let mut cur = Vec::new();
            for u in &c.unders {
                cur.push(Letter::signed(u.over_arc, u.sign.value() as i8));
                paths.push(cur.clone());
            }
            paths
        })
        .collect()
}

/// Magnus images of `eta_level` on every generator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeriesTable {
    level: usize,
    values: Vec<Vec<TruncSeries>>,
}

impl SeriesTable {
    pub fn level(&self) -> usize {
        self.level
    }

    pub fn get(&self, a: ArcId) -> &TruncSeries {
        &self.values[a.comp][a.index]
    }

    pub fn component(&self, i: usize) -> &[TruncSeries] {
        &self.values[i]
    }

    pub fn iter(&self) -> impl Iterator<Item = (ArcId, &TruncSeries)> {
        self.values.iter().enumerate().flat_map(|(i, v)| {
            v.iter()
                .enumerate()
                .map(move |(j, s)| (ArcId::new(i, j), s))
        })
    }

    /// Largest number of stored monomials in any entry.
    pub fn max_terms(&self) -> usize {
        self.values.iter().flatten().map(TruncSeries::len).max().unwrap_or(0)
    }

    pub fn total_terms(&self) -> usize {
        self.values.iter().flatten().map(TruncSeries::len).sum()
    }

    /// Evaluates a word in the generators, starting from `start`.
    pub(crate) fn eval(&self, start: TruncSeries, word: &[Letter<ArcId>], inverses: &mut InverseCache) -> TruncSeries {
        let mut acc = start;
        for l in word {
            let factor = if l.inverse {
                inverses.get(self, l.gen)
            } else {
                self.get(l.gen).with_order(acc.order())
            };
            acc = acc.mul_unchecked(&factor.with_order(acc.order()));
        }
        acc
    }
}

/// Memoized inverses of table entries.
#[derive(Default)]
pub(crate) struct InverseCache {
    cache: HashMap<ArcId, TruncSeries>,
}

impl InverseCache {
    pub(crate) fn get(&mut self, table: &SeriesTable, a: ArcId) -> TruncSeries {
        self.cache
            .entry(a)
            .or_insert_with(|| table.get(a).invert().expect("Magnus images are units"))
            .clone()
    }
}

/// Runs the series recursion up to `level`. Entries at level `m` are kept
/// to degree `m - lag`: `lag = 0` gives the exact expansion of the word
/// `eta_m(a)` up to degree `m`, `lag = 1` keeps only the degrees that are
/// determined modulo the `m`-th lower central subgroup.
pub(crate) fn series_recursion(paths: &PathSystem, level: usize, lag: usize) -> SeriesTable {
    assert!(level >= 1 && lag <= 1);
    let n = paths.len();
    let trunc = |m: usize| m - lag;
    let mut values: Vec<Vec<TruncSeries>> = paths
        .iter()
        .enumerate()
        .map(|(i, ps)| vec![TruncSeries::generator(n, trunc(1), i); ps.len()])
        .collect();
    for m in 1..level {
        let prev = SeriesTable { level: m, values };
        let mut inverses = InverseCache::default();
        let low = trunc(m);
        let high = trunc(m + 1);
        let mut next = Vec::with_capacity(n);
        for (i, ps) in paths.iter().enumerate() {
            let mut row = Vec::with_capacity(ps.len());
            row.push(TruncSeries::generator(n, high, i));
            // prefix products are reused while each path extends the last
            let mut last: &[Letter<ArcId>] = &[];
            let mut prod = TruncSeries::one(n, low);
            let mut prod_inv = TruncSeries::one(n, low);
            for path in &ps[1..] {
                if !path.starts_with(last) {
                    last = &[];
                    prod = TruncSeries::one(n, low);
                    prod_inv = TruncSeries::one(n, low);
                }
                for l in &path[last.len()..] {
                    let (f, g) = if l.inverse {
                        (inverses.get(&prev, l.gen), prev.get(l.gen).clone())
                    } else {
                        (prev.get(l.gen).clone(), inverses.get(&prev, l.gen))
                    };
                    prod = prod.mul_unchecked(&f);
                    prod_inv = g.mul_unchecked(&prod_inv);
                }
                last = path;
                // 1 + P^-1 X_i P; degrees of P above `low` cannot reach `high`
                let conj = prod_inv
                    .with_order(high)
                    .mul_var(i)
                    .mul_unchecked(&prod.with_order(high))
                    .add_constant(1);
                row.push(conj);
            }
            next.push(row);
        }
        values = next;
    }
    SeriesTable { level, values }
}

/// Literal words `eta_level(a)` for every generator, freely reduced.
///
/// The guard applies to the estimated literal length, i.e. the length the
/// recursion produces before any free reduction; that length roughly
/// doubles per level.
#[derive(Clone, Debug)]
pub struct WordTable {
    pub level: usize,
    pub words: Vec<Vec<FreeWord<usize>>>,
    /// Unreduced length of each `eta_level(a)`.
    pub literal_len: Vec<Vec<u128>>,
    /// Longest reduced word materialized on the way.
    pub peak_len: usize,
}

fn to_needed(x: u128) -> usize {
    usize::try_from(x).unwrap_or(usize::MAX)
}

impl WordTable {
    pub fn get(&self, a: ArcId) -> &FreeWord<usize> {
        &self.words[a.comp][a.index]
    }

    /// Largest unreduced length over all generators.
    pub fn peak_literal_len(&self) -> u128 {
        self.literal_len.iter().flatten().copied().max().unwrap_or(0)
    }

    fn literal_len_of(&self, word: &[Letter<ArcId>]) -> u128 {
        word.iter()
            .fold(0u128, |acc, l| acc.saturating_add(self.literal_len[l.gen.comp][l.gen.index]))
    }

    /// `eta(word)` for a word in the generators, freely reduced.
    pub fn eval(&self, word: &[Letter<ArcId>], guard: WordGuard) -> Result<FreeWord<usize>, GuardExceeded> {
        guard.check(to_needed(self.literal_len_of(word)))?;
        let mut out = FreeWord::identity();
        for l in word {
            let w = self.get(l.gen);
            if l.inverse {
                for x in w.letters().iter().rev() {
                    out.push_reducing(x.inv());
                }
            } else {
                for &x in w.letters() {
                    out.push_reducing(x);
                }
            }
        }
        Ok(out)
    }
}

pub(crate) fn word_recursion(paths: &PathSystem, level: usize, guard: WordGuard) -> Result<WordTable, GuardExceeded> {
    assert!(level >= 1);
    let mut table = WordTable {
        level: 1,
        words: paths
            .iter()
            .enumerate()
            .map(|(i, ps)| vec![FreeWord::generator(i); ps.len()])
            .collect(),
        literal_len: paths.iter().map(|ps| vec![1; ps.len()]).collect(),
        peak_len: 1,
    };
    for m in 1..level {
        let mut words = Vec::with_capacity(paths.len());
        let mut lens = Vec::with_capacity(paths.len());
        let mut peak = table.peak_len;
        for (i, ps) in paths.iter().enumerate() {
            let mut row = vec![FreeWord::generator(i)];
            let mut len_row = vec![1u128];
            for path in &ps[1..] {
                let literal = table.literal_len_of(path).saturating_mul(2).saturating_add(1);
                guard.check(to_needed(literal))?;
                let v = table.eval(path, guard)?;
                let mut w = v.inverse();
                w.push_reducing(Letter::pos(i));
                for &x in v.letters() {
                    w.push_reducing(x);
                }
                peak = peak.max(w.len()).max(v.len());
                row.push(w);
                len_row.push(literal);
            }
            words.push(row);
            lens.push(len_row);
        }
        table = WordTable {
            level: m + 1,
            words,
            literal_len: lens,
            peak_len: peak,
        };
    }
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gauss::{arc_table, BasedDiagram};
    use crate::series::magnus_expand;

    fn hopf() -> BasedDiagram {
        BasedDiagram::parse("component 1: U1+ O2+\ncomponent 2: O1+ U2+").unwrap()
    }

    #[test]
    fn level_one_is_meridians() {
        let paths = diagram_paths(&arc_table(&hopf()));
        let t = series_recursion(&paths, 1, 0);
        for (a, s) in t.iter() {
            assert_eq!(s, &TruncSeries::generator(2, 1, a.comp));
        }
    }

    #[test]
    fn hopf_level_two_conjugate() {
        let paths = diagram_paths(&arc_table(&hopf()));
        let t = series_recursion(&paths, 2, 0);
        let expected = magnus_expand(
            &FreeWord::from_letters(vec![Letter::neg(1), Letter::pos(0), Letter::pos(1)]),
            2,
            2,
        )
        .unwrap();
        assert_eq!(t.get(ArcId::new(0, 1)), &expected);
        assert_eq!(t.get(ArcId::new(0, 0)), &TruncSeries::generator(2, 2, 0));
    }

    #[test]
    fn word_engine_matches_series_engine() {
        let d = BasedDiagram::parse("component 1: O1+ U2- O3+ U1+ O2- U3+").unwrap();
        let paths = diagram_paths(&arc_table(&d));
        for q in 1..=5 {
            let words = word_recursion(&paths, q, WordGuard::default()).unwrap();
            let series = series_recursion(&paths, q, 0);
            for (a, s) in series.iter() {
                assert_eq!(&magnus_expand(words.get(a), 1, q).unwrap(), s, "arc {a:?} level {q}");
            }
        }
    }

    #[test]
    fn guard_trips() {
        let d = BasedDiagram::parse("component 1: O1+ O2+ O3+ U1+ U4- U5+ O4- U2+ O5+ U6- O6- U3+").unwrap();
        let paths = diagram_paths(&arc_table(&d));
        let err = word_recursion(&paths, 12, WordGuard::default()).unwrap_err();
        assert_eq!(err.limit, DEFAULT_WORD_GUARD);
        assert!(err.needed > DEFAULT_WORD_GUARD);
        assert!(word_recursion(&paths, 4, WordGuard::default()).is_ok());
    }
}
