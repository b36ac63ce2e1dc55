use std::fmt;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{BasedDiagram, Event, EventLoc, Role, Sign};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MoveError {
    #[error("move not applicable: {0}")]
    NotApplicable(String),
    #[error("move region contains the base point of component {}", .0 + 1)]
    BasePointInRegion(usize),
}

fn na<T>(msg: impl Into<String>) -> Result<T, MoveError> {
    Err(MoveError::NotApplicable(msg.into()))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum MoveKind {
    R1Insert,
    R1Delete,
    R2Insert,
    R2Delete,
    R3,
    Oc,
    Rebase,
    CrossingChange,
}

/// A diagram move with its location. Gaps index the slots between events
/// of a component: gap `g` sits just before event `g`, gap 0 follows the
/// base point and gap `len` precedes it.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum MoveSpec {
    /// Adds a kink: two consecutive events of a fresh crossing.
    R1Insert {
        comp: usize,
        gap: usize,
        over_first: bool,
        sign: Sign,
    },
    R1Delete {
        crossing: u32,
    },
    /// Two fresh crossings of opposite sign (`sign`, then `-sign`); the
    /// over strand receives both over events, the under strand both under
    /// events, in reverse order when `reversed`.
    R2Insert {
        over_comp: usize,
        over_gap: usize,
        under_comp: usize,
        under_gap: usize,
        sign: Sign,
        reversed: bool,
    },
    R2Delete {
        first: u32,
        second: u32,
    },
    /// Third Reidemeister move on the crossings between the top/middle,
    /// top/bottom and middle/bottom strands. Requires
    /// `sign(top_middle) == sign(top_bottom)`.
    R3 {
        top_middle: u32,
        top_bottom: u32,
        middle_bottom: u32,
    },
    /// Swaps the over events at `index` and `index + 1`.
    Oc {
        comp: usize,
        index: usize,
    },
    /// Moves the base point forward past `shift` events.
    Rebase {
        comp: usize,
        shift: usize,
    },
    CrossingChange {
        crossing: u32,
    },
}

impl MoveSpec {
    pub fn kind(&self) -> MoveKind {
        match self {
            MoveSpec::R1Insert { .. } => MoveKind::R1Insert,
            MoveSpec::R1Delete { .. } => MoveKind::R1Delete,
            MoveSpec::R2Insert { .. } => MoveKind::R2Insert,
            MoveSpec::R2Delete { .. } => MoveKind::R2Delete,
            MoveSpec::R3 { .. } => MoveKind::R3,
            MoveSpec::Oc { .. } => MoveKind::Oc,
            MoveSpec::Rebase { .. } => MoveKind::Rebase,
            MoveSpec::CrossingChange { .. } => MoveKind::CrossingChange,
        }
    }
}

impl fmt::Display for MoveSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // 1-based components, matching the text formats
        match self {
            MoveSpec::R1Insert {
                comp,
                gap,
                over_first,
                sign,
            } => write!(
                f,
                "r1+ {}@{} {} {}",
                comp + 1,
                gap,
                if *over_first { "OU" } else { "UO" },
                sign_char(*sign)
            ),
            MoveSpec::R1Delete { crossing } => write!(f, "r1- {crossing}"),
            MoveSpec::R2Insert {
                over_comp,
                over_gap,
                under_comp,
                under_gap,
                sign,
                reversed,
            } => write!(
                f,
                "r2+ over {}@{} under {}@{} {}{}",
                over_comp + 1,
                over_gap,
                under_comp + 1,
                under_gap,
                sign_char(*sign),
                if *reversed { " reversed" } else { "" }
            ),
            MoveSpec::R2Delete { first, second } => write!(f, "r2- {first} {second}"),
            MoveSpec::R3 {
                top_middle,
                top_bottom,
                middle_bottom,
            } => write!(f, "r3 {top_middle} {top_bottom} {middle_bottom}"),
            MoveSpec::Oc { comp, index } => write!(f, "oc {}@{}", comp + 1, index),
            MoveSpec::Rebase { comp, shift } => write!(f, "rebase {} +{}", comp + 1, shift),
            MoveSpec::CrossingChange { crossing } => write!(f, "cc {crossing}"),
        }
    }
}

fn sign_char(s: Sign) -> char {
    match s {
        Sign::Pos => '+',
        Sign::Neg => '-',
    }
}

/// Order of two events that must be consecutive on one component:
/// `Ok(true)` when `a` immediately precedes `b`.
fn adjacency(d: &BasedDiagram, a: EventLoc, b: EventLoc) -> Result<bool, MoveError> {
    if a.comp != b.comp {
        return na("events lie on different components");
    }
    let len = d.component(a.comp).len();
    if b.index == a.index + 1 {
        Ok(true)
    } else if a.index == b.index + 1 {
        Ok(false)
    } else if len >= 2 && (a.index + 1 == len && b.index == 0 || b.index + 1 == len && a.index == 0) {
        Err(MoveError::BasePointInRegion(a.comp))
    } else {
        na("events are not adjacent")
    }
}

fn lookup(d: &BasedDiagram, id: u32) -> Result<super::CrossingInfo, MoveError> {
    d.crossing(id)
        .ok_or_else(|| MoveError::NotApplicable(format!("no crossing {id}")))
}

fn check_gap(d: &BasedDiagram, comp: usize, gap: usize) -> Result<(), MoveError> {
    if comp >= d.component_count() {
        return na(format!("no component {}", comp + 1));
    }
    if gap > d.component(comp).len() {
        return na(format!("gap {gap} past end of component {}", comp + 1));
    }
    Ok(())
}

/// Applies a move, returning the new diagram or why the move does not fit.
pub fn apply_move(d: &BasedDiagram, m: &MoveSpec) -> Result<BasedDiagram, MoveError> {
    let mut comps: Vec<Vec<Event>> = d.components().to_vec();
    match *m {
        MoveSpec::R1Insert {
            comp,
            gap,
            over_first,
            sign,
        } => {
            check_gap(d, comp, gap)?;
            let id = d.max_crossing_id() + 1;
            let (a, b) = (Event::over(id, sign), Event::under(id, sign));
            let pair = if over_first { [a, b] } else { [b, a] };
            comps[comp].splice(gap..gap, pair);
        }
        MoveSpec::R1Delete { crossing } => {
            let c = lookup(d, crossing)?;
            adjacency(d, c.over, c.under)?;
            remove_crossings(&mut comps, &[crossing]);
        }
        MoveSpec::R2Insert {
            over_comp,
            over_gap,
            under_comp,
            under_gap,
            sign,
            reversed,
        } => {
            check_gap(d, over_comp, over_gap)?;
            check_gap(d, under_comp, under_gap)?;
            if over_comp == under_comp && over_gap == under_gap {
                return na("over and under strands share a gap");
            }
            let c1 = d.max_crossing_id() + 1;
            let c2 = c1 + 1;
            let s2 = sign.flip();
            let overs = [Event::over(c1, sign), Event::over(c2, s2)];
            let unders = if reversed {
                [Event::under(c2, s2), Event::under(c1, sign)]
            } else {
                [Event::under(c1, sign), Event::under(c2, s2)]
            };
            // insert at the later gap first so the earlier index stays valid
            if over_comp == under_comp && under_gap > over_gap {
                comps[under_comp].splice(under_gap..under_gap, unders);
                comps[over_comp].splice(over_gap..over_gap, overs);
            } else {
                comps[over_comp].splice(over_gap..over_gap, overs);
                comps[under_comp].splice(under_gap..under_gap, unders);
            }
        }
        MoveSpec::R2Delete { first, second } => {
            if first == second {
                return na("R2 needs two distinct crossings");
            }
            let a = lookup(d, first)?;
            let b = lookup(d, second)?;
            if a.sign == b.sign {
                return na("R2 crossings must have opposite signs");
            }
            adjacency(d, a.over, b.over)?;
            adjacency(d, a.under, b.under)?;
            remove_crossings(&mut comps, &[first, second]);
        }
        MoveSpec::R3 {
            top_middle,
            top_bottom,
            middle_bottom,
        } => {
            if top_middle == top_bottom || top_middle == middle_bottom || top_bottom == middle_bottom {
                return na("R3 needs three distinct crossings");
            }
            let x = lookup(d, top_middle)?;
            let y = lookup(d, top_bottom)?;
            let z = lookup(d, middle_bottom)?;
            if x.sign != y.sign {
                return na("top crossings of R3 must share a sign");
            }
            adjacency(d, x.over, y.over)?;
            let middle = adjacency(d, x.under, z.over)?;
            let bottom = adjacency(d, y.under, z.under)?;
            if middle != bottom {
                return na("middle and bottom strands are ordered inconsistently");
            }
            for (p, q) in [(x.over, y.over), (x.under, z.over), (y.under, z.under)] {
                let tmp = comps[p.comp][p.index];
                comps[p.comp][p.index] = comps[q.comp][q.index];
                comps[q.comp][q.index] = tmp;
            }
        }
        MoveSpec::Oc { comp, index } => {
            if comp >= d.component_count() || index + 1 >= d.component(comp).len() {
                return na("no adjacent event pair at that index");
            }
            let evs = &mut comps[comp];
            if evs[index].role != Role::Over || evs[index + 1].role != Role::Over {
                return na("OC swaps two over events");
            }
            evs.swap(index, index + 1);
        }
        MoveSpec::Rebase { comp, shift } => {
            if comp >= d.component_count() {
                return na(format!("no component {}", comp + 1));
            }
            let len = d.component(comp).len();
            if shift == 0 || shift >= len {
                return na("rebase shift must lie strictly between 0 and the event count");
            }
            comps[comp].rotate_left(shift);
        }
        MoveSpec::CrossingChange { crossing } => {
            lookup(d, crossing)?;
            for ev in comps.iter_mut().flatten() {
                if ev.crossing == crossing {
                    ev.role = match ev.role {
                        Role::Over => Role::Under,
                        Role::Under => Role::Over,
                    };
                    ev.sign = ev.sign.flip();
                }
            }
        }
    }
    Ok(BasedDiagram::from_parts_unchecked(comps))
}

fn remove_crossings(comps: &mut [Vec<Event>], ids: &[u32]) {
    for evs in comps.iter_mut() {
        evs.retain(|e| !ids.contains(&e.crossing));
    }
}

/// Every applicable site of a move kind with finitely many sites
/// (deletions, R3, OC, rebase, crossing change). Insertions return an
/// empty list; they are sampled directly.
pub fn enumerate_moves(d: &BasedDiagram, kind: MoveKind) -> Vec<MoveSpec> {
    let mut out = Vec::new();
    match kind {
        MoveKind::R1Insert | MoveKind::R2Insert => {}
        MoveKind::R1Delete => {
            let mut ids: Vec<_> = d.crossings().into_iter().collect();
            ids.sort_by_key(|(id, _)| *id);
            for (id, c) in ids {
                if adjacency(d, c.over, c.under).is_ok() {
                    out.push(MoveSpec::R1Delete { crossing: id });
                }
            }
        }
        MoveKind::R2Delete => {
            for evs in d.components() {
                for w in evs.windows(2) {
                    if w[0].role == Role::Over && w[1].role == Role::Over && w[0].sign != w[1].sign {
                        let m = MoveSpec::R2Delete {
                            first: w[0].crossing,
                            second: w[1].crossing,
                        };
                        if apply_move(d, &m).is_ok() {
                            out.push(m);
                        }
                    }
                }
            }
        }
        MoveKind::R3 => {
            let crossings = d.crossings();
            let mut ids: Vec<_> = crossings.keys().copied().collect();
            ids.sort_unstable();
            // middle strand pair: under(x) next to over(z)
            for evs in d.components() {
                for w in evs.windows(2) {
                    let (x, z) = match (w[0].role, w[1].role) {
                        (Role::Under, Role::Over) => (w[0].crossing, w[1].crossing),
                        (Role::Over, Role::Under) => (w[1].crossing, w[0].crossing),
                        _ => continue,
                    };
                    if x == z {
                        continue;
                    }
                    for &y in &ids {
                        if y == x || y == z || crossings[&y].sign != crossings[&x].sign {
                            continue;
                        }
                        let m = MoveSpec::R3 {
                            top_middle: x,
                            top_bottom: y,
                            middle_bottom: z,
                        };
                        if apply_move(d, &m).is_ok() {
                            out.push(m);
                        }
                    }
                }
            }
        }
        MoveKind::Oc => {
            for (comp, evs) in d.components().iter().enumerate() {
                for (index, w) in evs.windows(2).enumerate() {
                    if w[0].role == Role::Over && w[1].role == Role::Over {
                        out.push(MoveSpec::Oc { comp, index });
                    }
                }
            }
        }
        MoveKind::Rebase => {
            for (comp, evs) in d.components().iter().enumerate() {
                for shift in 1..evs.len() {
                    out.push(MoveSpec::Rebase { comp, shift });
                }
            }
        }
        MoveKind::CrossingChange => {
            let mut ids: Vec<_> = d.crossings().keys().copied().collect();
            ids.sort_unstable();
            out.extend(ids.into_iter().map(|crossing| MoveSpec::CrossingChange { crossing }));
        }
    }
    out
}

fn random_sign(rng: &mut impl Rng) -> Sign {
    if rng.gen() {
        Sign::Pos
    } else {
        Sign::Neg
    }
}

fn positions(d: &BasedDiagram) -> Vec<(usize, usize)> {
    d.components()
        .iter()
        .enumerate()
        .flat_map(|(c, evs)| (0..=evs.len()).map(move |g| (c, g)))
        .collect()
}

/// Samples one applicable move of the given kind, if any.
pub(crate) fn sample_move(d: &BasedDiagram, kind: MoveKind, rng: &mut impl Rng) -> Option<MoveSpec> {
    match kind {
        MoveKind::R1Insert => {
            let &(comp, gap) = positions(d).choose(rng)?;
            Some(MoveSpec::R1Insert {
                comp,
                gap,
                over_first: rng.gen(),
                sign: random_sign(rng),
            })
        }
        MoveKind::R2Insert => {
            let pos = positions(d);
            if pos.len() < 2 {
                return None;
            }
            let a = rng.gen_range(0..pos.len());
            let mut b = rng.gen_range(0..pos.len() - 1);
            if b >= a {
                b += 1;
            }
            Some(MoveSpec::R2Insert {
                over_comp: pos[a].0,
                over_gap: pos[a].1,
                under_comp: pos[b].0,
                under_gap: pos[b].1,
                sign: random_sign(rng),
                reversed: rng.gen(),
            })
        }
        _ => enumerate_moves(d, kind).choose(rng).cloned(),
    }
}

/// Kinds that preserve the based welded link.
pub const INVARIANT_KINDS: [MoveKind; 6] = [
    MoveKind::R1Insert,
    MoveKind::R1Delete,
    MoveKind::R2Insert,
    MoveKind::R2Delete,
    MoveKind::R3,
    MoveKind::Oc,
];

/// Applies `count` random R1/R2/R3/OC moves. At each step a kind is drawn
/// uniformly among the kinds that currently have a site, then a site of
/// that kind. Deterministic in `seed`.
pub fn random_moves(d: &BasedDiagram, count: usize, seed: u64) -> (BasedDiagram, Vec<MoveSpec>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut cur = d.clone();
    let mut trace = Vec::with_capacity(count);
    for _ in 0..count {
        let mut candidates: Vec<MoveSpec> = Vec::new();
        let mut kinds: Vec<MoveKind> = INVARIANT_KINDS.to_vec();
        // draw kinds without replacement until one has a site; R1 insertion
        // always does, so this terminates
        while candidates.is_empty() {
            let k = rng.gen_range(0..kinds.len());
            let kind = kinds.swap_remove(k);
            if let Some(m) = sample_move(&cur, kind, &mut rng) {
                candidates.push(m);
            }
        }
        let m = candidates.pop().expect("non-empty");
        cur = apply_move(&cur, &m).expect("sampled moves are applicable");
        trace.push(m);
    }
    (cur, trace)
}
