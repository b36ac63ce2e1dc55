use rand::Rng;

use super::{BasedDiagram, Event, Sign};

/// A random welded diagram with `n` components and `crossings` crossings.
/// Each crossing picks its over and under strands and their slots
/// uniformly; every Gauss code is a valid welded diagram.
pub fn random_diagram(rng: &mut impl Rng, n: usize, crossings: usize) -> BasedDiagram {
    assert!(n >= 1, "need at least one component");
    let mut comps: Vec<Vec<Event>> = vec![Vec::new(); n];
    for id in 1..=crossings as u32 {
        let sign = if rng.gen() { Sign::Pos } else { Sign::Neg };
        let oc = rng.gen_range(0..n);
        let og = rng.gen_range(0..=comps[oc].len());
        comps[oc].insert(og, Event::over(id, sign));
        let uc = rng.gen_range(0..n);
        let ug = rng.gen_range(0..=comps[uc].len());
        comps[uc].insert(ug, Event::under(id, sign));
    }
    BasedDiagram::from_parts_unchecked(comps)
}
