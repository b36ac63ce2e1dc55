//! Words in a free group over an arbitrary generator alphabet.

use std::fmt;

/// A generator or its inverse.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter<G> {
    pub gen: G,
    pub inverse: bool,
}

impl<G: Copy> Letter<G> {
    pub fn new(gen: G, inverse: bool) -> Self {
        Letter { gen, inverse }
    }

    pub fn pos(gen: G) -> Self {
        Letter { gen, inverse: false }
    }

    pub fn neg(gen: G) -> Self {
        Letter { gen, inverse: true }
    }

    /// Letter raised to `+1` or `-1`.
    pub fn signed(gen: G, exponent: i8) -> Self {
        Letter {
            gen,
            inverse: exponent < 0,
        }
    }

    pub fn inv(self) -> Self {
        Letter {
            gen: self.gen,
            inverse: !self.inverse,
        }
    }

    pub fn exponent(&self) -> i8 {
        if self.inverse {
            -1
        } else {
            1
        }
    }
}

/// A word in a free group. Products are literal concatenations; call
/// [`FreeWord::reduced`] to cancel adjacent inverse pairs.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FreeWord<G> {
    letters: Vec<Letter<G>>,
}

impl<G> Default for FreeWord<G> {
    fn default() -> Self {
        FreeWord {
            letters: Vec::new(),
        }
    }
}

impl<G: Copy + Eq> FreeWord<G> {
    pub fn identity() -> Self {
        Self::default()
    }

    pub fn from_letters(letters: Vec<Letter<G>>) -> Self {
        FreeWord { letters }
    }

    pub fn generator(gen: G) -> Self {
        FreeWord {
            letters: vec![Letter::pos(gen)],
        }
    }

    pub fn letters(&self) -> &[Letter<G>] {
        &self.letters
    }

    pub fn into_letters(self) -> Vec<Letter<G>> {
        self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn push(&mut self, letter: Letter<G>) {
        self.letters.push(letter);
    }

    /// Appends a letter and cancels it against the last one if they are
    /// inverse to each other. Keeps an already reduced word reduced.
    pub fn push_reducing(&mut self, letter: Letter<G>) {
        match self.letters.last() {
            Some(last) if last.gen == letter.gen && last.inverse != letter.inverse => {
                self.letters.pop();
            }
            _ => self.letters.push(letter),
        }
    }

    pub fn inverse(&self) -> Self {
        FreeWord {
            letters: self.letters.iter().rev().map(|l| l.inv()).collect(),
        }
    }

    /// Concatenation `self * other` without reduction.
    pub fn concat(&self, other: &Self) -> Self {
        let mut letters = Vec::with_capacity(self.len() + other.len());
        letters.extend_from_slice(&self.letters);
        letters.extend_from_slice(&other.letters);
        FreeWord { letters }
    }

    /// Free reduction: repeatedly cancel adjacent `x x^-1` pairs.
    pub fn reduced(&self) -> Self {
        let mut out = FreeWord {
            letters: Vec::with_capacity(self.len()),
        };
        for &l in &self.letters {
            out.push_reducing(l);
        }
        out
    }

    pub fn is_reduced(&self) -> bool {
        self.letters
            .windows(2)
            .all(|w| !(w[0].gen == w[1].gen && w[0].inverse != w[1].inverse))
    }

    /// Commutator `[x, y] = x y^-1 x^-1 y`, unreduced.
    pub fn commutator(x: &Self, y: &Self) -> Self {
        let mut letters = Vec::with_capacity(2 * (x.len() + y.len()));
        letters.extend_from_slice(&x.letters);
        letters.extend(y.letters.iter().rev().map(|l| l.inv()));
        letters.extend(x.letters.iter().rev().map(|l| l.inv()));
        letters.extend_from_slice(&y.letters);
        FreeWord { letters }
    }

    /// Replaces every letter by the image of its generator (inverted for
    /// inverse letters) and concatenates, without reduction.
    pub fn substitute<H: Copy + Eq>(&self, mut image: impl FnMut(G) -> FreeWord<H>) -> FreeWord<H> {
        let mut out = Vec::new();
        for l in &self.letters {
            let w = image(l.gen);
            if l.inverse {
                out.extend(w.letters.iter().rev().map(|x| x.inv()));
            } else {
                out.extend_from_slice(&w.letters);
            }
        }
        FreeWord { letters: out }
    }

    /// Total exponent of `gen` in the word.
    pub fn exponent_sum(&self, gen: G) -> i64 {
        self.letters
            .iter()
            .filter(|l| l.gen == gen)
            .map(|l| l.exponent() as i64)
            .sum()
    }
}

impl<G: Copy + Eq> FromIterator<Letter<G>> for FreeWord<G> {
    fn from_iter<T: IntoIterator<Item = Letter<G>>>(iter: T) -> Self {
        FreeWord {
            letters: iter.into_iter().collect(),
        }
    }
}

/// Left-normed commutator `[x1, [x2, [..., xk]]]` of single generators.
pub fn left_normed_commutator<G: Copy + Eq>(gens: &[G]) -> FreeWord<G> {
    match gens {
        [] => FreeWord::identity(),
        [g] => FreeWord::generator(*g),
        [g, rest @ ..] => FreeWord::commutator(&FreeWord::generator(*g), &left_normed_commutator(rest)),
    }
}

/// Meridian generators are written `a1, a2, ...` (1-based) with `^-1` for
/// inverses.
impl fmt::Display for FreeWord<usize> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return write!(f, "1");
        }
        for (k, l) in self.letters.iter().enumerate() {
            if k > 0 {
                write!(f, " ")?;
            }
            write!(f, "a{}", l.gen + 1)?;
            if l.inverse {
                write!(f, "^-1")?;
            }
        }
        Ok(())
    }
}
