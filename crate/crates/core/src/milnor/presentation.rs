use std::fmt;

use super::{longitude_words, EngineError, WordGuard};
use crate::gauss::BasedDiagram;
use crate::word::FreeWord;

/// `F / Gamma_q F` modulo the commutators of each meridian with the image
/// of its longitude.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Presentation {
    pub generators: usize,
    pub q: usize,
    /// `(i, eta_q(lambda_i))`; components whose longitude image is trivial
    /// contribute no relator.
    pub relators: Vec<(usize, FreeWord<usize>)>,
}

impl Presentation {
    pub fn relator_words(&self) -> Vec<FreeWord<usize>> {
        self.relators
            .iter()
            .map(|(i, w)| FreeWord::commutator(&FreeWord::generator(*i), w).reduced())
            .collect()
    }
}

pub fn nilpotent_presentation(d: &BasedDiagram, q: usize, guard: WordGuard) -> Result<Presentation, EngineError> {
    let words = longitude_words(d, q, guard)?;
    Ok(Presentation {
        generators: d.component_count(),
        q,
        relators: words
            .into_iter()
            .enumerate()
            .filter(|(_, w)| !w.is_empty())
            .collect(),
    })
}

impl fmt::Display for Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "< ")?;
        for i in 0..self.generators {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "a{}", i + 1)?;
        }
        write!(f, " | ")?;
        for (i, w) in &self.relators {
            write!(f, "[a{}, {}], ", i + 1, w)?;
        }
        write!(f, "Gamma_{} F >", self.q)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hopf_at_two() {
        let d = BasedDiagram::parse("component 1: U1+ O2+\ncomponent 2: O1+ U2+").unwrap();
        let p = nilpotent_presentation(&d, 2, WordGuard::default()).unwrap();
        assert_eq!(p.to_string(), "< a1, a2 | [a1, a2], [a2, a2^-1 a1 a2], Gamma_2 F >");
    }

    #[test]
    fn trivial_has_no_relators() {
        let p = nilpotent_presentation(&BasedDiagram::trivial(2), 3, WordGuard::default()).unwrap();
        assert_eq!(p.to_string(), "< a1, a2 | Gamma_3 F >");
    }
}
