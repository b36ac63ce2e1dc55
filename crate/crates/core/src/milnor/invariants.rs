use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use super::{longitude_series, EngineError};
use crate::gauss::BasedDiagram;
use crate::series::TruncSeries;

/// `mu`, `Delta` and the canonical `mu-bar` residue of one sequence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvariantRecord {
    pub seq: Vec<usize>,
    pub mu: BigInt,
    pub delta: BigInt,
    /// Least nonnegative residue of `mu` modulo `delta`, or `mu` itself
    /// when `delta = 0`.
    pub mubar: BigInt,
    /// Largest multiplicity of an index in `seq`.
    pub r: usize,
}

fn check_seq(n: usize, seq: &[usize]) -> Result<(), EngineError> {
    if seq.is_empty() {
        return Err(EngineError::EmptySequence);
    }
    if let Some(&index) = seq.iter().find(|&&i| i >= n) {
        return Err(EngineError::IndexOutOfRange { index, components: n });
    }
    Ok(())
}

/// `mu(i_1 ... i_s k)` computed from `eta_q` for a given order `q > s`.
pub fn mu_at_order(d: &BasedDiagram, seq: &[usize], q: usize) -> Result<BigInt, EngineError> {
    check_seq(d.component_count(), seq)?;
    if seq.len() == 1 {
        return Ok(BigInt::zero());
    }
    if q < seq.len() {
        return Err(EngineError::OrderTooSmall {
            min: seq.len(),
            got: q,
        });
    }
    let (k, prefix) = seq.split_last().expect("non-empty");
    let series = longitude_series(d, q)?;
    Ok(series[*k].coefficient(prefix))
}

/// `mu(I)` at the smallest admissible order, `q = |I|`.
pub fn mu(d: &BasedDiagram, seq: &[usize]) -> Result<BigInt, EngineError> {
    mu_at_order(d, seq, seq.len().max(1))
}

pub fn gcd_all<I: IntoIterator<Item = BigInt>>(values: I) -> BigInt {
    values.into_iter().fold(BigInt::zero(), |g, v| g.gcd(&v))
}

pub fn residue(mu: &BigInt, delta: &BigInt) -> BigInt {
    if delta.is_zero() {
        mu.clone()
    } else {
        mu.mod_floor(delta)
    }
}

pub fn max_multiplicity(seq: &[usize]) -> usize {
    seq.iter()
        .map(|i| seq.iter().filter(|j| *j == i).count())
        .max()
        .unwrap_or(0)
}

/// Sequences obtained from `seq` by deleting at least one index and
/// rotating cyclically, deduplicated.
pub fn delta_candidates(seq: &[usize]) -> Vec<Vec<usize>> {
    let len = seq.len();
    let mut out = BTreeSet::new();
    if len < 2 {
        return Vec::new();
    }
    let full: u64 = (1 << len) - 1;
    for mask in 1..full {
        let sub: Vec<usize> = (0..len).filter(|b| mask >> b & 1 == 1).map(|b| seq[b]).collect();
        for r in 0..sub.len() {
            let mut rot = sub.clone();
            rot.rotate_left(r);
            out.insert(rot);
        }
    }
    out.into_iter().collect()
}

/// All sequences of the given length over `0..n`, in lexicographic order.
pub fn all_sequences(n: usize, len: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|p| {
                (0..n).map(move |i| {
                    let mut q = p.clone();
                    q.push(i);
                    q
                })
            })
            .collect();
    }
    out
}

/// All `mu` values of length up to `max_len` from one evaluation of the
/// longitudes at order `q = max_len`.
#[derive(Clone, Debug)]
pub struct MilnorTable {
    components: usize,
    max_len: usize,
    longitudes: Vec<TruncSeries>,
}

impl MilnorTable {
    pub fn new(d: &BasedDiagram, max_len: usize) -> Result<Self, EngineError> {
        let q = max_len.max(1);
        Ok(MilnorTable {
            components: d.component_count(),
            max_len: q,
            longitudes: longitude_series(d, q)?,
        })
    }

    pub fn max_len(&self) -> usize {
        self.max_len
    }

    pub fn components(&self) -> usize {
        self.components
    }

    pub fn longitudes(&self) -> &[TruncSeries] {
        &self.longitudes
    }

    pub fn mu(&self, seq: &[usize]) -> Result<BigInt, EngineError> {
        check_seq(self.components, seq)?;
        if seq.len() > self.max_len {
            return Err(EngineError::OrderTooSmall {
                min: seq.len(),
                got: self.max_len,
            });
        }
        if seq.len() == 1 {
            return Ok(BigInt::zero());
        }
        let (k, prefix) = seq.split_last().expect("non-empty");
        Ok(self.longitudes[*k].coefficient(prefix))
    }

    pub fn delta(&self, seq: &[usize]) -> Result<BigInt, EngineError> {
        check_seq(self.components, seq)?;
        let mut g = BigInt::zero();
        for j in delta_candidates(seq) {
            g = g.gcd(&self.mu(&j)?);
        }
        Ok(g)
    }

    pub fn record(&self, seq: &[usize]) -> Result<InvariantRecord, EngineError> {
        if seq.len() < 2 {
            return Err(EngineError::SequenceTooShort(seq.len()));
        }
        let mu = self.mu(seq)?;
        let delta = self.delta(seq)?;
        Ok(InvariantRecord {
            seq: seq.to_vec(),
            mubar: residue(&mu, &delta),
            mu,
            delta: delta.abs(),
            r: max_multiplicity(seq),
        })
    }

    /// Records for every sequence of length `2..=max_len`.
    pub fn records(&self) -> Vec<InvariantRecord> {
        (2..=self.max_len)
            .flat_map(|len| all_sequences(self.components, len))
            .map(|s| self.record(&s).expect("sequence in range"))
            .collect()
    }

    /// Every `mu` value of length `1..=max_len`, in sequence order.
    pub fn all_mu(&self) -> Vec<(Vec<usize>, BigInt)> {
        (1..=self.max_len)
            .flat_map(|len| all_sequences(self.components, len))
            .map(|s| {
                let m = self.mu(&s).expect("sequence in range");
                (s, m)
            })
            .collect()
    }
}

/// `Delta(I)` and the `mu-bar` residue for `|I| >= 2`.
pub fn delta_and_mubar(d: &BasedDiagram, seq: &[usize]) -> Result<InvariantRecord, EngineError> {
    if seq.len() < 2 {
        return Err(EngineError::SequenceTooShort(seq.len()));
    }
    check_seq(d.component_count(), seq)?;
    MilnorTable::new(d, seq.len())?.record(seq)
}
