//! Based welded link diagrams as Gauss codes: parsing, arc decomposition and
//! diagram moves.
//!
//! Virtual crossings are not stored. A Gauss code already identifies all
//! diagrams related by virtual Reidemeister moves and by sliding a base
//! point through a virtual crossing, so those moves act as identities here.

mod arcs;
mod diagram;
mod moves;
mod random;

use thiserror::Error;

pub use arcs::{arc_table, ArcId, ArcTable, ComponentArcs, UnderPass};
pub use diagram::{BasedDiagram, CrossingInfo, Event, EventLoc, Role, Sign};
pub use moves::{apply_move, enumerate_moves, random_moves, MoveError, MoveKind, MoveSpec};
pub use random::random_diagram;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GaussError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("crossing id 0 is reserved")]
    ZeroCrossingId,
    #[error("crossing {crossing} lacks an {} event", role_name(*missing))]
    Unmatched { crossing: u32, missing: Role },
    #[error("crossing {0} has different signs on its over and under events")]
    SignMismatch(u32),
    #[error("crossing {crossing} has two {} events", role_name(*role))]
    DuplicateRole { crossing: u32, role: Role },
}

fn role_name(r: Role) -> &'static str {
    match r {
        Role::Over => "over",
        Role::Under => "under",
    }
}
