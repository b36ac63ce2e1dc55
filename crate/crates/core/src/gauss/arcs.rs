use super::{BasedDiagram, Role, Sign};

/// Arc `a_{comp,index}`: the stretch of a component between consecutive
/// under events, with arc 0 leaving the base point.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ArcId {
    pub comp: usize,
    pub index: usize,
}

impl ArcId {
    pub fn new(comp: usize, index: usize) -> Self {
        ArcId { comp, index }
    }
}

/// The `j`-th under passage of a component: the over-arc `u_ij` and the
/// crossing sign `eps(ij)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct UnderPass {
    pub crossing: u32,
    pub over_arc: ArcId,
    pub sign: Sign,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComponentArcs {
    /// Under passages in order; arc `j` ends at `unders[j]`.
    pub unders: Vec<UnderPass>,
    /// Sum of the signs of under passages whose over-arc lies on this
    /// component.
    pub writhe: i64,
}

impl ComponentArcs {
    /// Number of under events, `r_i`; the component has `r_i + 1` arcs.
    pub fn under_count(&self) -> usize {
        self.unders.len()
    }

    pub fn arc_count(&self) -> usize {
        self.unders.len() + 1
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ArcTable {
    pub components: Vec<ComponentArcs>,
}

impl ArcTable {
    pub fn component(&self, i: usize) -> &ComponentArcs {
        &self.components[i]
    }

    pub fn component_count(&self) -> usize {
        self.components.len()
    }

    pub fn arcs(&self) -> impl Iterator<Item = ArcId> + '_ {
        self.components
            .iter()
            .enumerate()
            .flat_map(|(c, ca)| (0..ca.arc_count()).map(move |j| ArcId::new(c, j)))
    }

    /// Last arc of component `k`, the one entering the base point.
    pub fn last_arc(&self, k: usize) -> ArcId {
        ArcId::new(k, self.components[k].under_count())
    }
}

/// Splits each component into arcs and records the over-arc and sign at
/// every under passage.
pub fn arc_table(d: &BasedDiagram) -> ArcTable {
    // arc holding each event: number of under events strictly before it
    let mut over_arc = std::collections::HashMap::new();
    for (comp, evs) in d.components().iter().enumerate() {
        let mut index = 0;
        for ev in evs {
            match ev.role {
                Role::Over => {
                    over_arc.insert(ev.crossing, ArcId::new(comp, index));
                }
                Role::Under => index += 1,
            }
        }
    }
    let components = d
        .components()
        .iter()
        .enumerate()
        .map(|(comp, evs)| {
            let unders: Vec<UnderPass> = evs
                .iter()
                .filter(|e| e.role == Role::Under)
                .map(|e| UnderPass {
                    crossing: e.crossing,
                    over_arc: over_arc[&e.crossing],
                    sign: e.sign,
                })
                .collect();
            let writhe = unders
                .iter()
                .filter(|u| u.over_arc.comp == comp)
                .map(|u| u.sign.value())
                .sum();
            ComponentArcs { unders, writhe }
        })
        .collect();
    ArcTable { components }
}
