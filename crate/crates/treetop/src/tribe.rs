//! Layered collections of pairwise disjoint subdivision witnesses of a
//! common pattern, and the calculus that refines them: thickness, flat
//! subtribes, thin-removal, pigeonhole refinement, concentration location
//! and harvesting from a host.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use thiserror::Error;

use crate::embed::{verify_witness, GraphWitness, SubdivisionSearch};
use crate::graph::VertexId;
use crate::pgraph::{end_component, PgError, Presentation};
use crate::tree::RootedTree;
use crate::Outcome;

#[derive(Debug, Error)]
pub enum TribeError {
    #[error("layer {layer}: members {a} and {b} share vertices")]
    LayerOverlap { layer: usize, a: usize, b: usize },
    #[error("layer {layer} member {member}: invalid witness: {reason}")]
    BadMember {
        layer: usize,
        member: usize,
        reason: String,
    },
    #[error("subtribe map invalid: {0}")]
    BadSubtribeMap(&'static str),
    #[error("coloring must be total: missing ({0}, {1})")]
    ColoringPartial(usize, usize),
    #[error("member ({0}, {1}) is not connected")]
    DisconnectedMember(usize, usize),
    #[error(transparent)]
    Pg(#[from] PgError),
}

/// A tribe: layers of pairwise disjoint witnesses of the shared pattern.
#[derive(Clone, Debug)]
pub struct Tribe {
    pub pattern: Arc<RootedTree>,
    pub layers: Vec<Vec<GraphWitness>>,
}

/// Witness of the subtribe relation: an injective layer map and per-layer
/// injective member maps with vertex-set containment.
#[derive(Clone, Debug, Default)]
pub struct SubtribeMap {
    /// Subtribe layer index -> parent layer index.
    pub psi: BTreeMap<usize, usize>,
    /// Per subtribe layer: member index -> parent member index.
    pub phis: BTreeMap<usize, BTreeMap<usize, usize>>,
    pub flat: bool,
}

impl Tribe {
    pub fn new(pattern: Arc<RootedTree>) -> Tribe {
        Tribe {
            pattern,
            layers: Vec::new(),
        }
    }

    /// Max layer size: the largest n this tribe is thick up to.
    pub fn thickness(&self) -> usize {
        self.layers.iter().map(|f| f.len()).max().unwrap_or(0)
    }

    pub fn members(&self) -> impl Iterator<Item = (usize, usize, &GraphWitness)> {
        self.layers
            .iter()
            .enumerate()
            .flat_map(|(li, f)| f.iter().enumerate().map(move |(mi, h)| (li, mi, h)))
    }

    /// Checks layer disjointness and witness validity against the host.
    pub fn verify(&self, host: &crate::graph::FiniteGraph) -> Result<(), TribeError> {
        for (li, layer) in self.layers.iter().enumerate() {
            let sets: Vec<BTreeSet<VertexId>> =
                layer.iter().map(|h| h.vertex_set()).collect();
            for a in 0..sets.len() {
                for b in a + 1..sets.len() {
                    if sets[a].intersection(&sets[b]).next().is_some() {
                        return Err(TribeError::LayerOverlap { layer: li, a, b });
                    }
                }
            }
            for (mi, h) in layer.iter().enumerate() {
                verify_witness(h, host).map_err(|e| TribeError::BadMember {
                    layer: li,
                    member: mi,
                    reason: e.to_string(),
                })?;
            }
        }
        Ok(())
    }
}

/// Validates a subtribe map from `sub` into `sup`.
pub fn verify_subtribe_map(sub: &Tribe, sup: &Tribe, m: &SubtribeMap) -> Result<(), TribeError> {
    let mut seen_layers = BTreeSet::new();
    for (&sl, &pl) in &m.psi {
        if sl >= sub.layers.len() || pl >= sup.layers.len() {
            return Err(TribeError::BadSubtribeMap("layer index out of range"));
        }
        if !seen_layers.insert(pl) {
            return Err(TribeError::BadSubtribeMap("psi not injective"));
        }
    }
    for (sl, layer) in sub.layers.iter().enumerate() {
        if layer.is_empty() {
            continue;
        }
        let pl = *m
            .psi
            .get(&sl)
            .ok_or(TribeError::BadSubtribeMap("psi not total"))?;
        let phi = m
            .phis
            .get(&sl)
            .ok_or(TribeError::BadSubtribeMap("phi missing"))?;
        let mut seen = BTreeSet::new();
        for (mi, h) in layer.iter().enumerate() {
            let pm = *phi
                .get(&mi)
                .ok_or(TribeError::BadSubtribeMap("phi not total"))?;
            if pm >= sup.layers[pl].len() {
                return Err(TribeError::BadSubtribeMap("member index out of range"));
            }
            if !seen.insert(pm) {
                return Err(TribeError::BadSubtribeMap("phi not injective"));
            }
            let sub_set = h.vertex_set();
            let sup_set = sup.layers[pl][pm].vertex_set();
            if !sub_set.is_subset(&sup_set) {
                return Err(TribeError::BadSubtribeMap("member not contained"));
            }
        }
    }
    Ok(())
}

/// Removes a thin subtribe: per layer of `sup`, drops the members selected
/// by the map. If some layer of `sup` has size at least n + k (the subtribe
/// bounded by k), the result keeps a layer of size at least n.
pub fn remove_thin(sup: &Tribe, sub: &Tribe, m: &SubtribeMap) -> Result<Tribe, TribeError> {
    verify_subtribe_map(sub, sup, m)?;
    let mut drop: BTreeMap<usize, BTreeSet<usize>> = BTreeMap::new();
    for (&sl, &pl) in &m.psi {
        if let Some(phi) = m.phis.get(&sl) {
            drop.entry(pl).or_default().extend(phi.values().copied());
        }
    }
    let layers = sup
        .layers
        .iter()
        .enumerate()
        .map(|(pl, layer)| {
            layer
                .iter()
                .enumerate()
                .filter(|(mi, _)| !drop.get(&pl).is_some_and(|d| d.contains(mi)))
                .map(|(_, h)| h.clone())
                .collect()
        })
        .collect();
    Ok(Tribe {
        pattern: sup.pattern.clone(),
        layers,
    })
}

/// Pigeonhole refinement: picks the majority color of a maximum layer and
/// returns the flat subtribe of members in that color, with thickness at
/// least ceil(thickness / k) for a k-coloring.
pub fn pigeonhole_refine(
    tribe: &Tribe,
    coloring: &BTreeMap<(usize, usize), u32>,
) -> Result<(u32, Tribe, SubtribeMap), TribeError> {
    for (li, mi, _) in tribe.members() {
        if !coloring.contains_key(&(li, mi)) {
            return Err(TribeError::ColoringPartial(li, mi));
        }
    }
    // majority color of the first maximum-size layer, least color on ties
    let mut best: Option<(usize, u32)> = None; // (layer, color)
    let thickness = tribe.thickness();
    for (li, layer) in tribe.layers.iter().enumerate() {
        if layer.len() != thickness {
            continue;
        }
        let mut counts: BTreeMap<u32, usize> = BTreeMap::new();
        for mi in 0..layer.len() {
            *counts.entry(coloring[&(li, mi)]).or_insert(0) += 1;
        }
        let (&c, _) = counts
            .iter()
            .max_by(|a, b| a.1.cmp(b.1).then(b.0.cmp(a.0)))
            .expect("nonempty layer");
        best = Some((li, c));
        break;
    }
    let color = best.map(|(_, c)| c).unwrap_or(0);
    let mut layers = Vec::new();
    let mut psi = BTreeMap::new();
    let mut phis = BTreeMap::new();
    for (li, layer) in tribe.layers.iter().enumerate() {
        let mut kept = Vec::new();
        let mut phi = BTreeMap::new();
        for (mi, h) in layer.iter().enumerate() {
            if coloring[&(li, mi)] == color {
                phi.insert(kept.len(), mi);
                kept.push(h.clone());
            }
        }
        psi.insert(layers.len(), li);
        phis.insert(layers.len(), phi);
        layers.push(kept);
    }
    Ok((
        color,
        Tribe {
            pattern: tribe.pattern.clone(),
            layers,
        },
        SubtribeMap {
            psi,
            phis,
            flat: true,
        },
    ))
}

/// Concentration verdict over a schedule of candidate separators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ConcentrationVerdict {
    /// Some scheduled X splits members across at least `components` many
    /// components (desk analogue of the infinitely-many-components branch).
    Splitting {
        x_index: usize,
        components: usize,
    },
    /// For every scheduled X, all but at most `max_outside` members per
    /// layer lie in the end component of X.
    Concentrated { max_outside: usize },
    /// Empty schedule or no evidence either way.
    Undetermined,
}

/// Locates concentration evidence for a tribe of connected members: per
/// scheduled X, partitions each layer by the component of the truncation
/// minus X containing each member.
pub fn locate_concentration(
    pres: &Presentation,
    tribe: &Tribe,
    schedule: &[BTreeSet<VertexId>],
    depth: u32,
    split_m: usize,
) -> Result<ConcentrationVerdict, TribeError> {
    if schedule.is_empty() {
        return Ok(ConcentrationVerdict::Undetermined);
    }
    let g = pres.truncate(depth);
    for (li, mi, h) in tribe.members() {
        let vs = h.vertex_set();
        let seed = *vs.iter().next().expect("nonempty witness");
        if !vs.is_subset(&g.component_without(seed, &BTreeSet::new())) {
            return Err(TribeError::DisconnectedMember(li, mi));
        }
    }
    let mut worst_outside = 0usize;
    for (xi, x) in schedule.iter().enumerate() {
        let inside = end_component(pres, x, depth)?;
        let mut comp_reps: Vec<BTreeSet<VertexId>> = Vec::new();
        let mut populated: BTreeSet<usize> = BTreeSet::new();
        for layer in &tribe.layers {
            let mut outside = 0usize;
            for h in layer {
                let vs = h.vertex_set();
                if vs.iter().all(|v| inside.contains(v)) {
                    continue;
                }
                outside += 1;
                if vs.iter().any(|v| x.contains(v)) {
                    continue; // meets X itself, belongs to no component
                }
                let seed = *vs.iter().next().unwrap();
                let mut found = None;
                for (ci, comp) in comp_reps.iter().enumerate() {
                    if comp.contains(&seed) {
                        found = Some(ci);
                        break;
                    }
                }
                let ci = match found {
                    Some(ci) => ci,
                    None => {
                        comp_reps.push(g.component_without(seed, x));
                        comp_reps.len() - 1
                    }
                };
                populated.insert(ci);
            }
            worst_outside = worst_outside.max(outside);
        }
        // components holding members: the end component counts when some
        // member lies fully inside it
        let mut count = populated.len();
        if tribe
            .members()
            .any(|(_, _, h)| h.vertex_set().iter().all(|v| inside.contains(v)))
        {
            count += 1;
        }
        if count >= split_m {
            return Ok(ConcentrationVerdict::Splitting {
                x_index: xi,
                components: count,
            });
        }
    }
    Ok(ConcentrationVerdict::Concentrated {
        max_outside: worst_outside,
    })
}

/// Per-layer harvest report.
#[derive(Clone, Debug)]
pub struct LayerReport {
    pub requested: usize,
    pub built: usize,
    pub budget_exhausted: bool,
}

/// Harvests a tribe from the host: for each n up to `n_max`, attempts a
/// layer of n pairwise disjoint subdivisions of the pattern in the
/// truncation, backtracking across members. Failed layers are omitted and
/// reported.
pub fn harvest_tribe(
    pres: &Presentation,
    pattern: &RootedTree,
    n_max: usize,
    depth: u32,
    budget: u64,
) -> (Tribe, Vec<LayerReport>) {
    let g = pres.truncate(depth);
    let mut tribe = Tribe::new(Arc::new(pattern.clone()));
    let mut reports = Vec::new();
    for n in 1..=n_max {
        match harvest_layer(&g, pattern, n, &BTreeSet::new(), budget) {
            Outcome::Found(layer) => {
                tribe.layers.push(layer);
                reports.push(LayerReport {
                    requested: n,
                    built: n,
                    budget_exhausted: false,
                });
            }
            Outcome::Absent => {
                reports.push(LayerReport {
                    requested: n,
                    built: 0,
                    budget_exhausted: false,
                });
            }
            Outcome::Undetermined => {
                reports.push(LayerReport {
                    requested: n,
                    built: 0,
                    budget_exhausted: true,
                });
            }
        }
    }
    (tribe, reports)
}

/// Builds `count` pairwise disjoint witnesses in `g` avoiding `forbidden`,
/// backtracking across members by advancing the earlier member's anchor.
/// Within a layer, anchors are strictly increasing, which is complete up to
/// member reordering.
pub fn harvest_layer(
    g: &crate::graph::FiniteGraph,
    pattern: &RootedTree,
    count: usize,
    forbidden: &BTreeSet<VertexId>,
    budget: u64,
) -> Outcome<Vec<GraphWitness>> {
    fn go(
        g: &crate::graph::FiniteGraph,
        pattern: &RootedTree,
        count: usize,
        forbidden: &BTreeSet<VertexId>,
        budget: &mut u64,
        min_anchor: usize,
        acc: &mut Vec<GraphWitness>,
    ) -> Outcome<()> {
        if acc.len() == count {
            return Outcome::Found(());
        }
        let mut anchor = min_anchor;
        loop {
            if *budget == 0 {
                return Outcome::Undetermined;
            }
            let mut avoid = forbidden.clone();
            for h in acc.iter() {
                avoid.extend(h.vertex_set());
            }
            let search = SubdivisionSearch::new(pattern, g)
                .budget(*budget)
                .forbid(&avoid)
                .min_anchor(anchor);
            let res = match search.run() {
                Ok(r) => r,
                Err(_) => return Outcome::Absent,
            };
            // budget bookkeeping is coarse: charge one unit per member try
            *budget = budget.saturating_sub(1);
            match res {
                Outcome::Found(w) => {
                    let next_anchor = g
                        .idx(w.branch[&pattern.root_id()])
                        .map(|i| i + 1)
                        .unwrap_or(usize::MAX);
                    acc.push(w);
                    match go(g, pattern, count, forbidden, budget, next_anchor, acc) {
                        Outcome::Found(()) => return Outcome::Found(()),
                        Outcome::Undetermined => return Outcome::Undetermined,
                        Outcome::Absent => {
                            acc.pop();
                            anchor = next_anchor;
                        }
                    }
                }
                Outcome::Absent => return Outcome::Absent,
                Outcome::Undetermined => return Outcome::Undetermined,
            }
        }
    }
    let mut acc = Vec::new();
    let mut b = budget;
    match go(g, pattern, count, forbidden, &mut b, 0, &mut acc) {
        Outcome::Found(()) => Outcome::Found(acc),
        Outcome::Absent => Outcome::Absent,
        Outcome::Undetermined => Outcome::Undetermined,
    }
}
