//! Combinatorial 2-dimensional cut-diagrams.
//!
//! Each component is a closed surface cut into regions by its arcs. An
//! arc with label `z`, front region `x` and back region `y` imposes
//! `y = z^-1 x z`; walking across it front to back counts as `+1`.
//! Regions are identified by `(component, index)`, where index 0 is the
//! based region; every other region carries a path word from the base,
//! and every component carries `2g` generator loops based at its base.

use std::collections::{BTreeMap, HashMap, VecDeque};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::gauss::{arc_table, ArcId, BasedDiagram};
use crate::milnor::chen::{self, InverseCache, PathSystem, SeriesTable};
use crate::milnor::delta_candidates;
use crate::series::TruncSeries;
use crate::word::{FreeWord, Letter};

/// A region: component and index, index 0 being the based region.
pub type RegionId = ArcId;

#[derive(Debug, Error)]
pub enum CutError {
    #[error("invalid cut document: {0}")]
    Json(#[from] serde_json::Error),
    #[error("schema violation: {0}")]
    Schema(String),
    #[error("{walk}, step {step} (arc {arc}, sign {sign:+}): {msg}")]
    Walk {
        walk: String,
        step: usize,
        arc: u64,
        sign: i8,
        msg: String,
    },
    #[error("component {comp} out of range for {components} components")]
    ComponentOutOfRange { comp: usize, components: usize },
    #[error("component {} has no loop {loop_index}", .comp + 1)]
    NoSuchLoop { comp: usize, loop_index: usize },
    #[error("sequence must have length at least {min}, got {got}")]
    SequenceTooShort { min: usize, got: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StepDoc {
    pub arc: u64,
    pub sign: i8,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RegionDoc {
    /// 1-based.
    pub comp: usize,
    pub region: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ArcDoc {
    pub id: u64,
    pub label: RegionDoc,
    pub front: RegionDoc,
    pub back: RegionDoc,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComponentDoc {
    pub genus: usize,
    pub regions: Vec<String>,
    pub base: String,
    pub loops: Vec<Vec<StepDoc>>,
}

/// The `.cutd` JSON document. Paths are keyed `"<comp>/<region>"`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CutDocument {
    pub components: Vec<ComponentDoc>,
    #[serde(default)]
    pub arcs: Vec<ArcDoc>,
    #[serde(default)]
    pub paths: BTreeMap<String, Vec<StepDoc>>,
}

/// Crossing of arc `arc` (index into the arc list) with the given sign.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Step {
    pub arc: usize,
    pub sign: i8,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CutArc {
    pub id: u64,
    pub label: RegionId,
    pub front: RegionId,
    pub back: RegionId,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CutComponent {
    pub genus: usize,
    /// Region names; index 0 is the based region.
    pub regions: Vec<String>,
    /// `paths[j]` walks from the base to region `j`; `paths[0]` is empty.
    pub paths: Vec<Vec<Step>>,
    pub loops: Vec<Vec<Step>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CutDiagram {
    pub components: Vec<CutComponent>,
    pub arcs: Vec<CutArc>,
}

fn schema(msg: impl Into<String>) -> CutError {
    CutError::Schema(msg.into())
}

pub fn parse_cut_str(text: &str) -> Result<CutDiagram, CutError> {
    parse_cut(&serde_json::from_str(text)?)
}

/// Validates a document: references, loop counts, and that every path and
/// loop is a consistent walk.
pub fn parse_cut(doc: &CutDocument) -> Result<CutDiagram, CutError> {
    let n = doc.components.len();
    let mut index: Vec<HashMap<String, usize>> = Vec::with_capacity(n);
    let mut components = Vec::with_capacity(n);
    for (i, c) in doc.components.iter().enumerate() {
        if !c.regions.contains(&c.base) {
            return Err(schema(format!("component {}: base {:?} is not a region", i + 1, c.base)));
        }
        let mut names = vec![c.base.clone()];
        names.extend(c.regions.iter().filter(|r| **r != c.base).cloned());
        let map: HashMap<String, usize> = names.iter().cloned().zip(0..).collect();
        if map.len() != c.regions.len() {
            return Err(schema(format!("component {}: repeated region name", i + 1)));
        }
        index.push(map);
        if c.loops.len() != 2 * c.genus {
            return Err(schema(format!(
                "component {}: genus {} needs {} loops, found {}",
                i + 1,
                c.genus,
                2 * c.genus,
                c.loops.len()
            )));
        }
        components.push(CutComponent {
            genus: c.genus,
            regions: names,
            paths: Vec::new(),
            loops: Vec::new(),
        });
    }
    let region = |r: &RegionDoc| -> Result<RegionId, CutError> {
        if r.comp == 0 || r.comp > n {
            return Err(schema(format!("component {} out of range", r.comp)));
        }
        index[r.comp - 1]
            .get(r.region.as_str())
            .map(|&k| ArcId::new(r.comp - 1, k))
            .ok_or_else(|| schema(format!("no region {:?} on component {}", r.region, r.comp)))
    };
    let mut arcs = Vec::with_capacity(doc.arcs.len());
    let mut by_id = HashMap::new();
    for a in &doc.arcs {
        let arc = CutArc {
            id: a.id,
            label: region(&a.label)?,
            front: region(&a.front)?,
            back: region(&a.back)?,
        };
        if arc.front.comp != arc.back.comp {
            return Err(schema(format!("arc {}: front and back lie on different components", a.id)));
        }
        if by_id.insert(a.id, arcs.len()).is_some() {
            return Err(schema(format!("repeated arc id {}", a.id)));
        }
        arcs.push(arc);
    }
    let steps = |walk: &[StepDoc], name: &str| -> Result<Vec<Step>, CutError> {
        walk.iter()
            .enumerate()
            .map(|(s, st)| {
                let bad = |msg: &str| CutError::Walk {
                    walk: name.to_string(),
                    step: s + 1,
                    arc: st.arc,
                    sign: st.sign,
                    msg: msg.to_string(),
                };
                if st.sign != 1 && st.sign != -1 {
                    return Err(bad("sign must be +1 or -1"));
                }
                let arc = *by_id.get(&st.arc).ok_or_else(|| bad("no such arc"))?;
                Ok(Step { arc, sign: st.sign })
            })
            .collect()
    };
    let mut seen_paths = vec![vec![false; 0]; n];
    for (i, c) in components.iter_mut().enumerate() {
        c.paths = vec![Vec::new(); c.regions.len()];
        seen_paths[i] = vec![false; c.regions.len()];
        seen_paths[i][0] = true;
    }
    for (key, walk) in &doc.paths {
        let (cs, rs) = key
            .split_once('/')
            .ok_or_else(|| schema(format!("path key {key:?} is not <comp>/<region>")))?;
        let comp: usize = cs.parse().map_err(|_| schema(format!("path key {key:?}: bad component")))?;
        let target = region(&RegionDoc {
            comp,
            region: rs.to_string(),
        })?;
        if target.index == 0 {
            return Err(schema(format!("path {key:?} given for a based region")));
        }
        let name = format!("path {key}");
        let walk = steps(walk, &name)?;
        check_walk(&arcs, &walk, ArcId::new(target.comp, 0), target, &name)?;
        components[target.comp].paths[target.index] = walk;
        seen_paths[target.comp][target.index] = true;
    }
    for (i, seen) in seen_paths.iter().enumerate() {
        if let Some(k) = seen.iter().position(|s| !s) {
            return Err(schema(format!(
                "no path for region {:?} of component {}",
                components[i].regions[k],
                i + 1
            )));
        }
    }
    for (i, c) in doc.components.iter().enumerate() {
        for (j, l) in c.loops.iter().enumerate() {
            let name = format!("loop {}/{}", i + 1, j + 1);
            let walk = steps(l, &name)?;
            let base = ArcId::new(i, 0);
            check_walk(&arcs, &walk, base, base, &name)?;
            components[i].loops.push(walk);
        }
    }
    Ok(CutDiagram { components, arcs })
}

fn check_walk(arcs: &[CutArc], walk: &[Step], from: RegionId, to: RegionId, name: &str) -> Result<(), CutError> {
    let mut cur = from;
    for (s, st) in walk.iter().enumerate() {
        let a = &arcs[st.arc];
        let (src, dst) = if st.sign > 0 { (a.front, a.back) } else { (a.back, a.front) };
        if src != cur {
            return Err(CutError::Walk {
                walk: name.to_string(),
                step: s + 1,
                arc: a.id,
                sign: st.sign,
                msg: format!(
                    "walk is in region {}/{} but the crossing starts from {}/{}",
                    cur.comp + 1,
                    cur.index,
                    src.comp + 1,
                    src.index
                ),
            });
        }
        cur = dst;
    }
    if cur != to {
        return Err(CutError::Walk {
            walk: name.to_string(),
            step: walk.len(),
            arc: walk.last().map_or(0, |st| arcs[st.arc].id),
            sign: walk.last().map_or(0, |st| st.sign),
            msg: format!("walk ends in region {}/{} instead of {}/{}", cur.comp + 1, cur.index, to.comp + 1, to.index),
        });
    }
    Ok(())
}

impl CutDiagram {
    pub fn component_count(&self) -> usize {
        self.components.len()
    }

    pub fn region_name(&self, r: RegionId) -> &str {
        &self.components[r.comp].regions[r.index]
    }

    /// The document form; the based region is listed first.
    pub fn to_document(&self) -> CutDocument {
        let region = |r: RegionId| RegionDoc {
            comp: r.comp + 1,
            region: self.region_name(r).to_string(),
        };
        let steps = |w: &[Step]| -> Vec<StepDoc> {
            w.iter()
                .map(|s| StepDoc {
                    arc: self.arcs[s.arc].id,
                    sign: s.sign,
                })
                .collect()
        };
        let mut paths = BTreeMap::new();
        for (i, c) in self.components.iter().enumerate() {
            for (j, p) in c.paths.iter().enumerate().skip(1) {
                paths.insert(format!("{}/{}", i + 1, c.regions[j]), steps(p));
            }
        }
        CutDocument {
            components: self
                .components
                .iter()
                .map(|c| ComponentDoc {
                    genus: c.genus,
                    regions: c.regions.clone(),
                    base: c.regions[0].clone(),
                    loops: c.loops.iter().map(|l| steps(l)).collect(),
                })
                .collect(),
            arcs: self
                .arcs
                .iter()
                .map(|a| ArcDoc {
                    id: a.id,
                    label: region(a.label),
                    front: region(a.front),
                    back: region(a.back),
                })
                .collect(),
            paths,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_document()).expect("documents serialize")
    }

    fn letters(&self, walk: &[Step]) -> Vec<Letter<RegionId>> {
        walk.iter()
            .map(|s| Letter::signed(self.arcs[s.arc].label, s.sign))
            .collect()
    }

    fn path_system(&self) -> PathSystem {
        self.components
            .iter()
            .map(|c| c.paths.iter().map(|p| self.letters(p)).collect())
            .collect()
    }

    fn loop_steps(&self, i: usize, j: usize) -> Result<&[Step], CutError> {
        let c = self.components.get(i).ok_or(CutError::ComponentOutOfRange {
            comp: i,
            components: self.component_count(),
        })?;
        c.loops
            .get(j)
            .map(Vec::as_slice)
            .ok_or(CutError::NoSuchLoop { comp: i, loop_index: j })
    }

    /// Moves the base of component `comp` to region `region`. Paths of that
    /// component are recomputed by breadth-first search and its loops are
    /// conjugated by a path from the new base to the old one.
    pub fn rebase(&self, comp: usize, region: usize) -> Result<CutDiagram, CutError> {
        let c = self.components.get(comp).ok_or(CutError::ComponentOutOfRange {
            comp,
            components: self.component_count(),
        })?;
        if region >= c.regions.len() {
            return Err(schema(format!("component {} has no region {region}", comp + 1)));
        }
        let new_base = ArcId::new(comp, region);
        let tree = self.search_paths(new_base);
        let to_old = &tree[0];
        let mut doc = self.to_document();
        let steps = |w: &[Step]| -> Vec<StepDoc> {
            w.iter()
                .map(|s| StepDoc {
                    arc: self.arcs[s.arc].id,
                    sign: s.sign,
                })
                .collect()
        };
        doc.components[comp].base = c.regions[region].clone();
        doc.paths.retain(|k, _| !k.starts_with(&format!("{}/", comp + 1)));
        for (j, p) in tree.iter().enumerate() {
            if j != region {
                doc.paths.insert(format!("{}/{}", comp + 1, c.regions[j]), steps(p));
            }
        }
        let back: Vec<Step> = to_old.iter().rev().map(|s| Step { arc: s.arc, sign: -s.sign }).collect();
        doc.components[comp].loops = c
            .loops
            .iter()
            .map(|l| {
                let mut w = to_old.clone();
                w.extend_from_slice(l);
                w.extend_from_slice(&back);
                steps(&w)
            })
            .collect();
        parse_cut(&doc)
    }

    /// Shortest walks from `start` to every region of its component.
    fn search_paths(&self, start: RegionId) -> Vec<Vec<Step>> {
        let size = self.components[start.comp].regions.len();
        let mut paths: Vec<Option<Vec<Step>>> = vec![None; size];
        paths[start.index] = Some(Vec::new());
        let mut queue = VecDeque::from([start.index]);
        while let Some(r) = queue.pop_front() {
            let here = paths[r].clone().expect("visited");
            for (k, a) in self.arcs.iter().enumerate() {
                if a.front.comp != start.comp {
                    continue;
                }
                for (src, dst, sign) in [(a.front, a.back, 1), (a.back, a.front, -1)] {
                    if src.index == r && paths[dst.index].is_none() {
                        let mut p = here.clone();
                        p.push(Step { arc: k, sign });
                        paths[dst.index] = Some(p);
                        queue.push_back(dst.index);
                    }
                }
            }
        }
        paths
            .into_iter()
            .map(|p| p.expect("regions of a valid diagram are connected to the base"))
            .collect()
    }
}

/// `w(l) = a_i0^(-w) u_1^e(1) u_2^e(2) ...`, where `w` sums the signs of
/// the crossings of `l` whose label lies on the loop's own component.
pub fn loop_word(c: &CutDiagram, i: usize, l: &[Step]) -> FreeWord<RegionId> {
    let letters = c.letters(l);
    let w: i64 = letters
        .iter()
        .filter(|x| x.gen.comp == i)
        .map(|x| x.exponent() as i64)
        .sum();
    let base = ArcId::new(i, 0);
    let mut out = FreeWord::identity();
    for _ in 0..w.unsigned_abs() {
        out.push(Letter::signed(base, if w > 0 { -1 } else { 1 }));
    }
    for x in letters {
        out.push(x);
    }
    out.reduced()
}

/// Magnus images of `eta_q` on every region, exact up to degree `q`.
pub fn chen_series_cut(c: &CutDiagram, q: usize) -> SeriesTable {
    chen::series_recursion(&c.path_system(), q.max(1), 0)
}

/// Series of `eta_q(w(l))` for every loop, kept to degree `q - 1`.
fn loop_series(c: &CutDiagram, q: usize) -> Vec<Vec<TruncSeries>> {
    let n = c.component_count();
    let colors = chen::series_recursion(&c.path_system(), q, 1);
    let mut inverses = InverseCache::default();
    c.components
        .iter()
        .enumerate()
        .map(|(i, comp)| {
            comp.loops
                .iter()
                .map(|l| colors.eval(TruncSeries::one(n, q - 1), loop_word(c, i, l).letters(), &mut inverses))
                .collect()
        })
        .collect()
}

fn check_seq(n: usize, seq: &[usize]) -> Result<(), CutError> {
    match seq.iter().find(|&&i| i >= n) {
        Some(&comp) => Err(CutError::ComponentOutOfRange { comp, components: n }),
        None => Ok(()),
    }
}

/// Coefficient of `X_{i_1} ... X_{i_s}` in `eta_q(w(l_ij))`, `q = s + 1`.
pub fn mu_loop(c: &CutDiagram, seq: &[usize], i: usize, j: usize) -> Result<BigInt, CutError> {
    if seq.is_empty() {
        return Err(CutError::SequenceTooShort { min: 1, got: 0 });
    }
    check_seq(c.component_count(), seq)?;
    c.loop_steps(i, j)?;
    Ok(loop_series(c, seq.len() + 1)[i][j].coefficient(seq))
}

/// `m`, `Delta` and `nu` of one sequence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NuRecord {
    pub seq: Vec<usize>,
    pub m: BigInt,
    pub delta: BigInt,
    pub nu: BigInt,
}

/// All loop series at one order, for `m`, `Delta` and `nu` of sequences
/// up to length `max_len`.
#[derive(Clone, Debug)]
pub struct NuTable {
    components: usize,
    max_len: usize,
    loops: Vec<Vec<TruncSeries>>,
}

impl NuTable {
    pub fn new(c: &CutDiagram, max_len: usize) -> Self {
        let q = max_len.max(1);
        NuTable {
            components: c.component_count(),
            max_len: q,
            loops: loop_series(c, q),
        }
    }

    pub fn max_len(&self) -> usize {
        self.max_len
    }

    /// `m(I i)`: gcd over the generator loops of component `i`; 0 for
    /// sequences of length one.
    pub fn m(&self, seq: &[usize]) -> Result<BigInt, CutError> {
        check_seq(self.components, seq)?;
        let Some((i, prefix)) = seq.split_last() else {
            return Err(CutError::SequenceTooShort { min: 1, got: 0 });
        };
        if seq.len() > self.max_len {
            return Err(CutError::SequenceTooShort {
                min: seq.len(),
                got: self.max_len,
            });
        }
        if prefix.is_empty() {
            return Ok(BigInt::zero());
        }
        Ok(self.loops[*i]
            .iter()
            .fold(BigInt::zero(), |g, s| g.gcd(&s.coefficient(prefix))))
    }

    pub fn record(&self, seq: &[usize]) -> Result<NuRecord, CutError> {
        if seq.len() < 2 {
            return Err(CutError::SequenceTooShort { min: 2, got: seq.len() });
        }
        let m = self.m(seq)?;
        let mut delta = BigInt::zero();
        for j in delta_candidates(seq) {
            delta = delta.gcd(&self.m(&j)?);
        }
        let nu = m.gcd(&delta);
        Ok(NuRecord {
            seq: seq.to_vec(),
            m,
            delta,
            nu,
        })
    }

    pub fn records(&self) -> Vec<NuRecord> {
        (2..=self.max_len)
            .flat_map(|len| crate::milnor::all_sequences(self.components, len))
            .map(|s| self.record(&s).expect("sequence in range"))
            .collect()
    }
}

/// `(m, Delta, nu)` of a sequence of length at least 2.
pub fn nu(c: &CutDiagram, seq: &[usize]) -> Result<NuRecord, CutError> {
    if seq.len() < 2 {
        return Err(CutError::SequenceTooShort { min: 2, got: seq.len() });
    }
    check_seq(c.component_count(), seq)?;
    NuTable::new(c, seq.len()).record(seq)
}

/// The tube of a based diagram: each component becomes a torus whose
/// regions are the arcs `a_i0 .. a_i(r-1)` (the last arc runs through the
/// base point into `a_i0`), with one cut arc per under-crossing labeled by
/// the over-arc's region. Loop 1 runs along the component and reads the
/// longitude; loop 2 is the meridian and crosses nothing.
pub fn tube_from_diagram(d: &BasedDiagram) -> CutDiagram {
    let table = arc_table(d);
    let region_of = |a: ArcId| {
        let r = table.component(a.comp).under_count();
        if a.index == r {
            ArcId::new(a.comp, 0)
        } else {
            a
        }
    };
    let mut arcs = Vec::new();
    let mut components = Vec::new();
    for (i, c) in table.components.iter().enumerate() {
        let r = c.under_count();
        let regions: Vec<String> = (0..r.max(1)).map(|j| format!("a{j}")).collect();
        let mut paths = vec![Vec::new()];
        let mut walk = Vec::new();
        for (j, u) in c.unders.iter().enumerate() {
            let before = ArcId::new(i, j);
            let after = region_of(ArcId::new(i, j + 1));
            let sign = u.sign.value() as i8;
            let (front, back) = if sign > 0 { (before, after) } else { (after, before) };
            walk.push(Step { arc: arcs.len(), sign });
            arcs.push(CutArc {
                id: arcs.len() as u64 + 1,
                label: region_of(u.over_arc),
                front,
                back,
            });
            if j + 1 < r {
                paths.push(walk.clone());
            }
        }
        components.push(CutComponent {
            genus: 1,
            regions,
            paths,
            loops: vec![walk, Vec::new()],
        });
    }
    CutDiagram { components, arcs }
}
