//! Truncated non-commutative power series with integer coefficients and the
//! Magnus expansion of free-group words.
//!
//! A [`TruncSeries`] in variables `X_1..X_n` keeps every monomial of total
//! degree `<= order`. Coefficients are arbitrary precision.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::word::FreeWord;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SeriesError {
    #[error("series shapes differ: ({0} vars, order {1}) vs ({2} vars, order {3})")]
    ShapeMismatch(usize, usize, usize, usize),
    #[error("series is not invertible: constant coefficient is {0}, expected 1")]
    NotUnit(BigInt),
    #[error("generator index {index} outside alphabet of size {vars}")]
    LetterOutOfRange { index: usize, vars: usize },
}

/// A non-commutative monomial `X_{i1} X_{i2} ... X_{is}` stored as the
/// 0-based index sequence. Ordered by degree first, then lexicographically.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Monomial(pub Vec<u16>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn from_indices(indices: &[usize]) -> Self {
        Monomial(indices.iter().map(|&i| i as u16).collect())
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn indices(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().map(|&i| i as usize)
    }

    fn times(&self, other: &Monomial) -> Monomial {
        let mut v = Vec::with_capacity(self.0.len() + other.0.len());
        v.extend_from_slice(&self.0);
        v.extend_from_slice(&other.0);
        Monomial(v)
    }

    fn with_suffix(&self, var: u16, count: usize) -> Monomial {
        let mut v = Vec::with_capacity(self.0.len() + count);
        v.extend_from_slice(&self.0);
        v.extend(std::iter::repeat_n(var, count));
        Monomial(v)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0
            .len()
            .cmp(&other.0.len())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        for i in &self.0 {
            write!(f, "X_{}", i + 1)?;
        }
        Ok(())
    }
}

/// Integer power series in `vars` non-commuting variables, truncated above
/// total degree `order`. No zero coefficients are stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncSeries {
    vars: usize,
    order: usize,
    terms: BTreeMap<Monomial, BigInt>,
}

impl TruncSeries {
    pub fn zero(vars: usize, order: usize) -> Self {
        TruncSeries {
            vars,
            order,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(vars: usize, order: usize) -> Self {
        let mut s = Self::zero(vars, order);
        s.terms.insert(Monomial::one(), BigInt::one());
        s
    }

    /// The single variable `X_i` (0-based `i`).
    pub fn variable(vars: usize, order: usize, i: usize) -> Self {
        let mut s = Self::zero(vars, order);
        if order >= 1 {
            s.terms.insert(Monomial(vec![i as u16]), BigInt::one());
        }
        s
    }

    /// `1 + X_i`, the image of the `i`-th generator.
    pub fn generator(vars: usize, order: usize, i: usize) -> Self {
        let mut s = Self::one(vars, order);
        if order >= 1 {
            s.terms.insert(Monomial(vec![i as u16]), BigInt::one());
        }
        s
    }

    /// Builds a series from `(indices, coefficient)` pairs, dropping terms
    /// above the order and zero sums.
    pub fn from_terms<I>(vars: usize, order: usize, terms: I) -> Self
    where
        I: IntoIterator<Item = (Vec<usize>, BigInt)>,
    {
        let mut s = Self::zero(vars, order);
        for (m, c) in terms {
            if m.len() <= order {
                s.add_term(Monomial::from_indices(&m), c);
            }
        }
        s
    }

    pub fn vars(&self) -> usize {
        self.vars
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigInt)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, indices: &[usize]) -> BigInt {
        self.terms
            .get(&Monomial::from_indices(indices))
            .cloned()
            .unwrap_or_else(BigInt::zero)
    }

    pub fn constant(&self) -> BigInt {
        self.coefficient(&[])
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.constant().is_one()
    }

    /// Smallest degree `d >= 1` with a nonzero coefficient in `self - 1`;
    /// `None` when `self - 1` vanishes up to the order.
    pub fn min_nonconstant_degree(&self) -> Option<usize> {
        let c = self.constant();
        if !c.is_one() {
            return Some(0);
        }
        self.terms.keys().find(|m| m.degree() > 0).map(Monomial::degree)
    }

    fn add_term(&mut self, m: Monomial, c: BigInt) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    /// Same terms viewed at another truncation order; terms above a
    /// smaller order are dropped.
    pub fn with_order(&self, order: usize) -> Self {
        if order >= self.order {
            TruncSeries {
                vars: self.vars,
                order,
                terms: self.terms.clone(),
            }
        } else {
            self.truncated(order)
        }
    }

    /// Right multiplication by the bare variable `X_i`.
    pub(crate) fn mul_var(&self, i: usize) -> Self {
        let mut out = Self::zero(self.vars, self.order);
        for (m, c) in &self.terms {
            if m.degree() < self.order {
                out.terms.insert(m.with_suffix(i as u16, 1), c.clone());
            }
        }
        out
    }

    /// `self + c` on the constant term.
    pub(crate) fn add_constant(mut self, c: i64) -> Self {
        self.add_term(Monomial::one(), BigInt::from(c));
        self
    }

    /// Drops all monomials of degree above `order`.
    pub fn truncated(&self, order: usize) -> Self {
        TruncSeries {
            vars: self.vars,
            order: order.min(self.order),
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree() <= order)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    fn check_shape(&self, other: &Self) -> Result<(), SeriesError> {
        if self.vars != other.vars || self.order != other.order {
            return Err(SeriesError::ShapeMismatch(
                self.vars,
                self.order,
                other.vars,
                other.order,
            ));
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, SeriesError> {
        self.check_shape(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self, SeriesError> {
        self.check_shape(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c.clone());
        }
        Ok(out)
    }

    /// Truncated product `self * other`.
    pub fn try_mul(&self, other: &Self) -> Result<Self, SeriesError> {
        self.check_shape(other)?;
        Ok(self.mul_unchecked(other))
    }

    /// Product truncated at `self.order`. Terms of `other` are visited in
    /// degree order so the inner loop stops at the first overflow.
    pub(crate) fn mul_unchecked(&self, other: &Self) -> Self {
        let q = self.order;
        let mut out = Self::zero(self.vars, q);
        for (ma, ca) in &self.terms {
            let room = q - ma.degree();
            for (mb, cb) in &other.terms {
                if mb.degree() > room {
                    break;
                }
                out.add_term(ma.times(mb), ca * cb);
            }
        }
        out
    }

    /// Right multiplication by `1 + X_i` (or its inverse when `inverse`).
    pub(crate) fn mul_generator(&self, i: usize, inverse: bool) -> Self {
        let q = self.order;
        let var = i as u16;
        let mut out = self.clone();
        for (m, c) in &self.terms {
            let room = q - m.degree();
            if inverse {
                for k in 1..=room {
                    let coef = if k % 2 == 1 { -c.clone() } else { c.clone() };
                    out.add_term(m.with_suffix(var, k), coef);
                }
            } else if room >= 1 {
                out.add_term(m.with_suffix(var, 1), c.clone());
            }
        }
        out
    }

    /// Inverse of a series whose constant coefficient is 1:
    /// `(1 + h)^-1 = 1 - h + h^2 - ...` truncated.
    pub fn invert(&self) -> Result<Self, SeriesError> {
        let c = self.constant();
        if !c.is_one() {
            return Err(SeriesError::NotUnit(c));
        }
        let mut h = self.clone();
        h.terms.remove(&Monomial::one());
        let mut result = Self::one(self.vars, self.order);
        let mut power = Self::one(self.vars, self.order);
        for k in 1..=self.order {
            power = power.mul_unchecked(&h);
            if power.is_empty() {
                break;
            }
            for (m, coef) in &power.terms {
                let v = if k % 2 == 1 { -coef.clone() } else { coef.clone() };
                result.add_term(m.clone(), v);
            }
        }
        Ok(result)
    }

    /// `self^e` for a unit series; negative powers go through [`Self::invert`].
    pub fn pow(&self, e: i64) -> Result<Self, SeriesError> {
        let base = if e < 0 { self.invert()? } else { self.clone() };
        let mut out = Self::one(self.vars, self.order);
        for _ in 0..e.unsigned_abs() {
            out = out.mul_unchecked(&base);
        }
        Ok(out)
    }

    /// Canonical one-term-per-line text, `coef * X_{i1}...X_{is}`.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for (m, c) in &self.terms {
            s.push_str(&format!("{c} * {m}\n"));
        }
        s
    }
}

impl fmt::Display for TruncSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms.iter().enumerate() {
            if k == 0 {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let a = c.abs();
            match (m.degree(), a.is_one()) {
                (0, _) => write!(f, "{a}")?,
                (_, true) => write!(f, "{m}")?,
                _ => write!(f, "{a}*{m}")?,
            }
        }
        Ok(())
    }
}

/// Magnus expansion `E(w)` of a word over the meridian alphabet
/// (0-based generator indices), truncated at `order`.
pub fn magnus_expand(w: &FreeWord<usize>, vars: usize, order: usize) -> Result<TruncSeries, SeriesError> {
    let mut s = TruncSeries::one(vars, order);
    for l in w.letters() {
        if l.gen >= vars {
            return Err(SeriesError::LetterOutOfRange { index: l.gen, vars });
        }
        s = s.mul_generator(l.gen, l.inverse);
    }
    Ok(s)
}

/// Whether `w` lies in the `q`-th lower central subgroup, i.e. `E(w) - 1`
/// has no monomial of degree below `q`.
pub fn in_gamma_q(w: &FreeWord<usize>, q: usize) -> bool {
    if q <= 1 {
        return true;
    }
    let vars = w.letters().iter().map(|l| l.gen + 1).max().unwrap_or(0);
    match magnus_expand(w, vars, q - 1) {
        Ok(s) => s.is_one(),
        Err(_) => unreachable!("alphabet sized from the word"),
    }
}
