//! Peripheral data, the Chen-Milnor map and Milnor invariants of based
//! diagrams.
//!
//! Component indices and sequence entries are 0-based throughout the
//! library; the text formats and the CLI print them 1-based.

pub(crate) mod chen;
mod invariants;
mod presentation;

use thiserror::Error;

use crate::gauss::{arc_table, ArcId, ArcTable, BasedDiagram};
use crate::series::TruncSeries;
use crate::word::{FreeWord, Letter};

pub use chen::{GuardExceeded, SeriesTable, WordGuard, WordTable, DEFAULT_WORD_GUARD};
pub use invariants::{
    all_sequences, delta_and_mubar, delta_candidates, gcd_all, max_multiplicity, mu, mu_at_order, residue,
    InvariantRecord, MilnorTable,
};
pub use presentation::{nilpotent_presentation, Presentation};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EngineError {
    #[error("sequence index {index} out of range for {components} components")]
    IndexOutOfRange { index: usize, components: usize },
    #[error("empty sequence")]
    EmptySequence,
    #[error("sequence must have length at least 2, got {0}")]
    SequenceTooShort(usize),
    #[error("order must be at least {min}, got {got}")]
    OrderTooSmall { min: usize, got: usize },
    #[error("no arc {}_{} in this diagram", .0.comp + 1, .0.index)]
    NoSuchArc(ArcId),
    #[error(transparent)]
    Guard(#[from] GuardExceeded),
}

/// Meridian and longitude of every component.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PeripheralData {
    /// The meridian of component `i` is arc `a_i0`.
    pub meridians: Vec<ArcId>,
    /// `lambda_i = a_i0^(-w_i) u_i1^e(i1) ... u_ir^e(ir)`, freely reduced.
    pub longitudes: Vec<FreeWord<ArcId>>,
}

pub(crate) fn longitude_word(table: &ArcTable, i: usize) -> FreeWord<ArcId> {
    let c = table.component(i);
    let base = ArcId::new(i, 0);
    let mut w = FreeWord::identity();
    for _ in 0..c.writhe.unsigned_abs() {
        w.push(Letter::signed(base, if c.writhe > 0 { -1 } else { 1 }));
    }
    for u in &c.unders {
        w.push(Letter::signed(u.over_arc, u.sign.value() as i8));
    }
    w
}

pub fn longitudes(d: &BasedDiagram) -> PeripheralData {
    let table = arc_table(d);
    let n = d.component_count();
    PeripheralData {
        meridians: (0..n).map(|i| ArcId::new(i, 0)).collect(),
        longitudes: (0..n).map(|i| longitude_word(&table, i).reduced()).collect(),
    }
}

/// `E(eta_q(a))` for every arc, exact up to degree `q`.
pub fn chen_series(d: &BasedDiagram, q: usize) -> Result<SeriesTable, EngineError> {
    if q < 1 {
        return Err(EngineError::OrderTooSmall { min: 1, got: q });
    }
    let paths = chen::diagram_paths(&arc_table(d));
    Ok(chen::series_recursion(&paths, q, 0))
}

/// Literal words `eta_q(a)` for every arc.
pub fn chen_words(d: &BasedDiagram, q: usize, guard: WordGuard) -> Result<WordTable, EngineError> {
    if q < 1 {
        return Err(EngineError::OrderTooSmall { min: 1, got: q });
    }
    let paths = chen::diagram_paths(&arc_table(d));
    Ok(chen::word_recursion(&paths, q, guard)?)
}

/// The freely reduced word `eta_q(a)`.
pub fn chen_word(d: &BasedDiagram, q: usize, a: ArcId, guard: WordGuard) -> Result<FreeWord<usize>, EngineError> {
    let table = arc_table(d);
    if a.comp >= table.component_count() || a.index >= table.component(a.comp).arc_count() {
        return Err(EngineError::NoSuchArc(a));
    }
    Ok(chen_words(d, q, guard)?.get(a).clone())
}

/// Magnus series of `eta_q(lambda_k)` for every component, kept to degree
/// `q - 1` (the degrees that `eta_q` determines).
pub fn longitude_series(d: &BasedDiagram, q: usize) -> Result<Vec<TruncSeries>, EngineError> {
    if q < 1 {
        return Err(EngineError::OrderTooSmall { min: 1, got: q });
    }
    let table = arc_table(d);
    let paths = chen::diagram_paths(&table);
    let colors = chen::series_recursion(&paths, q, 1);
    let n = d.component_count();
    let mut inverses = chen::InverseCache::default();
    Ok((0..n)
        .map(|k| {
            let lambda = longitude_word(&table, k);
            colors.eval(TruncSeries::one(n, q - 1), lambda.letters(), &mut inverses)
        })
        .collect())
}

/// The literal word `eta_q(lambda_k)` for every component, freely reduced.
pub fn longitude_words(d: &BasedDiagram, q: usize, guard: WordGuard) -> Result<Vec<FreeWord<usize>>, EngineError> {
    let table = arc_table(d);
    let words = chen_words(d, q, guard)?;
    (0..d.component_count())
        .map(|k| {
            let lambda = longitude_word(&table, k);
            Ok(words.eval(lambda.letters(), guard)?)
        })
        .collect()
}

/// Fingerprint of the automorphism of `F / Gamma_q F` sending `alpha_k`
/// to the image of the last arc `a_{k r_k}`: one series per component,
/// truncated at degree `q - 1`, which is faithful on `F / Gamma_q F`.
pub fn phi_q(d: &BasedDiagram, q: usize) -> Result<Vec<TruncSeries>, EngineError> {
    if q < 1 {
        return Err(EngineError::OrderTooSmall { min: 1, got: q });
    }
    let table = arc_table(d);
    let paths = chen::diagram_paths(&table);
    let colors = chen::series_recursion(&paths, q, 1);
    Ok((0..d.component_count())
        .map(|k| colors.get(table.last_arc(k)).clone())
        .collect())
}
