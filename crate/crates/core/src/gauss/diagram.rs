use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::GaussError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Role {
    Over,
    Under,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Sign {
    Pos,
    Neg,
}

impl Sign {
    pub fn value(self) -> i64 {
        match self {
            Sign::Pos => 1,
            Sign::Neg => -1,
        }
    }

    pub fn flip(self) -> Sign {
        match self {
            Sign::Pos => Sign::Neg,
            Sign::Neg => Sign::Pos,
        }
    }

    fn symbol(self) -> char {
        match self {
            Sign::Pos => '+',
            Sign::Neg => '-',
        }
    }
}

/// One passage of a component through a crossing.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Event {
    pub crossing: u32,
    pub role: Role,
    pub sign: Sign,
}

impl Event {
    pub fn over(crossing: u32, sign: Sign) -> Self {
        Event {
            crossing,
            role: Role::Over,
            sign,
        }
    }

    pub fn under(crossing: u32, sign: Sign) -> Self {
        Event {
            crossing,
            role: Role::Under,
            sign,
        }
    }
}

impl fmt::Display for Event {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let r = match self.role {
            Role::Over => 'O',
            Role::Under => 'U',
        };
        write!(f, "{r}{}{}", self.crossing, self.sign.symbol())
    }
}

/// Position of an event: component and index in its event list.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EventLoc {
    pub comp: usize,
    pub index: usize,
}

/// Both ends of one crossing.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CrossingInfo {
    pub over: EventLoc,
    pub under: EventLoc,
    pub sign: Sign,
}

/// A based welded link diagram in Gauss-code form. Component `i` lists its
/// crossing events in order, starting just after the base point `p_i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BasedDiagram {
    components: Vec<Vec<Event>>,
}

impl BasedDiagram {
    /// Validates that every crossing has exactly one over and one under
    /// event, carrying the same sign.
    pub fn new(components: Vec<Vec<Event>>) -> Result<Self, GaussError> {
        let mut seen: HashMap<u32, (Option<Sign>, Option<Sign>)> = HashMap::new();
        for ev in components.iter().flatten() {
            if ev.crossing == 0 {
                return Err(GaussError::ZeroCrossingId);
            }
            let slot = seen.entry(ev.crossing).or_default();
            let cell = match ev.role {
                Role::Over => &mut slot.0,
                Role::Under => &mut slot.1,
            };
            if cell.is_some() {
                return Err(GaussError::DuplicateRole {
                    crossing: ev.crossing,
                    role: ev.role,
                });
            }
            *cell = Some(ev.sign);
        }
        let mut ids: Vec<_> = seen.keys().copied().collect();
        ids.sort_unstable();
        for missing in [Role::Over, Role::Under] {
            for &id in &ids {
                let (o, u) = seen[&id];
                let absent = match missing {
                    Role::Over => o.is_none(),
                    Role::Under => u.is_none(),
                };
                if absent {
                    return Err(GaussError::Unmatched {
                        crossing: id,
                        missing,
                    });
                }
            }
        }
        for &id in &ids {
            if let (Some(a), Some(b)) = seen[&id] {
                if a != b {
                    return Err(GaussError::SignMismatch(id));
                }
            }
        }
        Ok(BasedDiagram { components })
    }

    /// Crossing-free diagram with `n` components.
    pub fn trivial(n: usize) -> Self {
        BasedDiagram {
            components: vec![Vec::new(); n],
        }
    }

    pub fn component_count(&self) -> usize {
        self.components.len()
    }

    pub fn components(&self) -> &[Vec<Event>] {
        &self.components
    }

    pub fn component(&self, i: usize) -> &[Event] {
        &self.components[i]
    }

    pub fn crossing_count(&self) -> usize {
        self.components.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn max_crossing_id(&self) -> u32 {
        self.components
            .iter()
            .flatten()
            .map(|e| e.crossing)
            .max()
            .unwrap_or(0)
    }

    pub fn crossings(&self) -> HashMap<u32, CrossingInfo> {
        let mut over = HashMap::new();
        let mut under = HashMap::new();
        for (comp, evs) in self.components.iter().enumerate() {
            for (index, ev) in evs.iter().enumerate() {
                let loc = EventLoc { comp, index };
                match ev.role {
                    Role::Over => over.insert(ev.crossing, (loc, ev.sign)),
                    Role::Under => under.insert(ev.crossing, (loc, ev.sign)),
                };
            }
        }
        over.into_iter()
            .map(|(id, (o, sign))| {
                let (u, _) = under[&id];
                (
                    id,
                    CrossingInfo {
                        over: o,
                        under: u,
                        sign,
                    },
                )
            })
            .collect()
    }

    pub fn crossing(&self, id: u32) -> Option<CrossingInfo> {
        let mut over = None;
        let mut under = None;
        let mut sign = Sign::Pos;
        for (comp, evs) in self.components.iter().enumerate() {
            for (index, ev) in evs.iter().enumerate() {
                if ev.crossing == id {
                    let loc = EventLoc { comp, index };
                    sign = ev.sign;
                    match ev.role {
                        Role::Over => over = Some(loc),
                        Role::Under => under = Some(loc),
                    }
                }
            }
        }
        Some(CrossingInfo {
            over: over?,
            under: under?,
            sign,
        })
    }

    pub fn event(&self, loc: EventLoc) -> Event {
        self.components[loc.comp][loc.index]
    }

    /// Renumbers crossings 1, 2, ... by first appearance.
    pub fn normalized(&self) -> Self {
        let mut map = HashMap::new();
        let mut next = 1u32;
        let components = self
            .components
            .iter()
            .map(|evs| {
                evs.iter()
                    .map(|ev| {
                        let id = *map.entry(ev.crossing).or_insert_with(|| {
                            next += 1;
                            next - 1
                        });
                        Event { crossing: id, ..*ev }
                    })
                    .collect()
            })
            .collect();
        BasedDiagram { components }
    }

    /// Serializes in `.gauss` form after normalization.
    pub fn to_gauss(&self) -> String {
        self.normalized().to_string()
    }

    /// Parses a `.gauss` document.
    pub fn parse(text: &str) -> Result<Self, GaussError> {
        let mut components = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let syntax = |msg: String| GaussError::Syntax {
                line: lineno + 1,
                msg,
            };
            let rest = line
                .strip_prefix("component")
                .ok_or_else(|| syntax("expected `component <i>:`".into()))?;
            let (index, tokens) = rest
                .split_once(':')
                .ok_or_else(|| syntax("missing `:` after component index".into()))?;
            let index: usize = index
                .trim()
                .parse()
                .map_err(|_| syntax(format!("bad component index `{}`", index.trim())))?;
            if index != components.len() + 1 {
                return Err(syntax(format!(
                    "component {index} out of order, expected {}",
                    components.len() + 1
                )));
            }
            let events = tokens
                .split_whitespace()
                .map(|tok| parse_token(tok).map_err(&syntax))
                .collect::<Result<Vec<_>, _>>()?;
            components.push(events);
        }
        BasedDiagram::new(components)
    }

    pub(crate) fn from_parts_unchecked(components: Vec<Vec<Event>>) -> Self {
        debug_assert!(BasedDiagram::new(components.clone()).is_ok());
        BasedDiagram { components }
    }
}

fn parse_token(tok: &str) -> Result<Event, String> {
    let mut chars = tok.chars();
    let role = match chars.next() {
        Some('O') | Some('o') => Role::Over,
        Some('U') | Some('u') => Role::Under,
        _ => return Err(format!("token `{tok}` must start with O or U")),
    };
    let body = chars.as_str();
    let (digits, sign) = match body.chars().last() {
        Some('+') => (&body[..body.len() - 1], Sign::Pos),
        Some('-') => (&body[..body.len() - 1], Sign::Neg),
        _ => return Err(format!("token `{tok}` must end with + or -")),
    };
    let crossing: u32 = digits
        .parse()
        .map_err(|_| format!("token `{tok}` has a bad crossing id"))?;
    Ok(Event {
        crossing,
        role,
        sign,
    })
}

impl fmt::Display for BasedDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, evs) in self.components.iter().enumerate() {
            write!(f, "component {}:", i + 1)?;
            for ev in evs {
                write!(f, " {ev}")?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}
