//! Constructive linking between families of disjoint rays: weak linking
//! after a finite set, strong linking that additionally avoids a prescribed
//! number of host subgraphs, transitioning a family along a linkage, and the
//! conversions between rays and dominating vertices.
//!
//! Postconditions define correctness: every returned linkage re-verifies
//! against the stated invariants, and hypotheses of the form "infinitely
//! many" are consumed as explicit width-k certificates, never assumed.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::flow::DisjointPaths;
use crate::graph::VertexId;
use crate::pgraph::{
    certify_domination, certify_same_end, tail_after, Presentation, RaySpec,
};
use crate::Outcome;

#[derive(Debug, Error)]
pub enum LinkError {
    #[error("ray families must have equal finite size")]
    SizeMismatch,
    #[error("family ray {0} not certified in the designated end at this depth bound")]
    NotCertified(usize),
    #[error("family rays {0} and {1} are not disjoint")]
    FamilyOverlap(usize, usize),
    #[error("ray {0} does not start at its stated vertex")]
    BadStart(usize),
    #[error("need at least {need} handles, got {got} (strong linking bound)")]
    BoundTooSmall { need: usize, got: usize },
    #[error("subgraph handles {0} and {1} overlap")]
    HandlesOverlap(usize, usize),
    #[error("handle {0} meets the avoided set X")]
    HandleMeetsX(usize),
    #[error("handle ray {0} leaves its region")]
    RayLeavesRegion(usize),
    #[error("fewer than {0} certified dominating vertices")]
    TooFewDominators(usize),
    #[error("start vertices must be distinct")]
    StartsCollide,
    #[error("vertex {0} is not a certified dominating vertex")]
    NotDominating(VertexId),
    #[error("linkage invalid: {0}")]
    Invalid(#[from] LinkageViolation),
    #[error(transparent)]
    Pg(#[from] crate::pgraph::PgError),
}

/// First violated linkage clause, for diagnostics.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum LinkageViolation {
    #[error("sigma not injective at {0}")]
    SigmaNotInjective(usize),
    #[error("sigma not total at {0}")]
    SigmaNotTotal(usize),
    #[error("path {0} empty or not a path in the host")]
    NotAPath(usize),
    #[error("path {0} does not start on the tail of its ray after X")]
    NotOnTail(usize),
    #[error("path {0} does not end on its target ray")]
    NotOnTarget(usize),
    #[error("path {0} or its onward tail meets X")]
    MeetsX(usize),
    #[error("transitioned rays {0} and {1} intersect")]
    TransitionOverlap(usize, usize),
}

/// A linkage from a ray family to another: per source index an injective
/// target assignment and a connecting path from a tail vertex of the source
/// to a vertex of the target, valid after the finite set `after`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Linkage {
    pub sigma: BTreeMap<usize, usize>,
    /// paths[i] runs from x'_i on T(R_i, X) to y_{sigma(i)} on S_{sigma(i)}.
    pub paths: Vec<Vec<VertexId>>,
    pub after: BTreeSet<VertexId>,
}

/// A host subgraph handle carrying a specified ray.
#[derive(Clone, Debug)]
pub struct RaySubgraph {
    pub region: Region,
    pub ray: RaySpec,
}

/// Vertex region of a handle: either all copies of a set of unit locals, or
/// an explicit finite set.
#[derive(Clone, Debug)]
pub enum Region {
    Locals(BTreeSet<u32>),
    Explicit(BTreeSet<VertexId>),
}

impl Region {
    pub fn contains(&self, v: VertexId) -> bool {
        match self {
            Region::Locals(ls) => matches!(v, VertexId::Unit(_, u) if ls.contains(&u)),
            Region::Explicit(s) => s.contains(&v),
        }
    }

    pub fn vertices_at(&self, depth: u32) -> BTreeSet<VertexId> {
        match self {
            Region::Locals(ls) => (0..=depth)
                .flat_map(|n| ls.iter().map(move |&u| VertexId::Unit(n, u)))
                .collect(),
            Region::Explicit(s) => s.clone(),
        }
    }

    pub fn overlaps(&self, other: &Region, depth: u32) -> bool {
        match (self, other) {
            (Region::Locals(a), Region::Locals(b)) => a.intersection(b).next().is_some(),
            _ => {
                let a = self.vertices_at(depth);
                other.vertices_at(depth).iter().any(|v| a.contains(v))
            }
        }
    }
}

/// The explicit bound for strong linking: `x_size + n^3 + a`.
pub fn strong_link_bound(n: usize, x_size: usize, a: usize) -> usize {
    x_size + n * n * n + a
}

struct FamilyView {
    /// Realized prefix of each ray strictly before its tail after X.
    prefixes: Vec<Vec<VertexId>>,
    /// Tail initial vertices x'_i.
    exits: Vec<VertexId>,
}

fn family_view(rays: &[RaySpec], x: &BTreeSet<VertexId>) -> FamilyView {
    let mut prefixes = Vec::new();
    let mut exits = Vec::new();
    for r in rays {
        let (_tail, first) = tail_after(r, x);
        let depth_hint = first.copy_index() + r.shift + r.max_offset() + 1;
        let realized = r.realize(depth_hint.max(r.start + r.shift + r.max_offset()));
        let cutoff = realized
            .iter()
            .position(|&v| v == first)
            .expect("tail initial vertex lies on the ray");
        prefixes.push(realized[..cutoff].to_vec());
        exits.push(first);
    }
    FamilyView { prefixes, exits }
}

fn check_family_disjoint(
    pres: &Presentation,
    rays: &[RaySpec],
    depth: u32,
) -> Result<(), LinkError> {
    for r in rays {
        r.validate(pres)?;
    }
    let sets: Vec<BTreeSet<VertexId>> = rays.iter().map(|r| r.vertex_set(depth)).collect();
    for i in 0..sets.len() {
        for j in i + 1..sets.len() {
            if sets[i].intersection(&sets[j]).next().is_some() {
                return Err(LinkError::FamilyOverlap(i, j));
            }
        }
    }
    Ok(())
}

fn certify_family(
    pres: &Presentation,
    rays: &[RaySpec],
    cert_k: u32,
    depth_max: u32,
) -> Result<(), LinkError> {
    let spine = pres.spine_ray();
    for (i, r) in rays.iter().enumerate() {
        if !certify_same_end(pres, r, &spine, cert_k, depth_max).is_certified() {
            return Err(LinkError::NotCertified(i));
        }
    }
    Ok(())
}

/// Core disjoint-path computation shared by the linking operations: route
/// one path per source exit onto per-target tail vertex sets, with blocked
/// vertices removed from the search graph entirely.
fn route(
    pres: &Presentation,
    exits: &[VertexId],
    target_tails: &[Vec<VertexId>],
    blocked: &BTreeSet<VertexId>,
    depth: u32,
) -> Option<(BTreeMap<usize, usize>, Vec<Vec<VertexId>>)> {
    let g = pres.truncate(depth);
    let mut dp = DisjointPaths::new(&g);
    dp.block_set(blocked);
    for &x in exits {
        let xi = g.idx(x)?;
        dp.source_group(&[xi], 1);
    }
    for tail in target_tails {
        let idxs: Vec<usize> = tail.iter().filter_map(|&v| g.idx(v)).collect();
        dp.sink_group(&idxs, 1);
    }
    let res = dp.solve(exits.len() as u32);
    if res.value as usize != exits.len() {
        return None;
    }
    let mut sigma = BTreeMap::new();
    let mut paths: Vec<Vec<VertexId>> = vec![Vec::new(); exits.len()];
    for p in &res.paths {
        let verts: Vec<VertexId> = p.iter().map(|&i| g.vertex(i)).collect();
        let i = exits.iter().position(|&x| x == verts[0])?;
        let last = *verts.last().unwrap();
        let j = target_tails.iter().position(|t| t.contains(&last))?;
        sigma.insert(i, j);
        paths[i] = verts;
    }
    if sigma.len() != exits.len() {
        return None;
    }
    Some((sigma, paths))
}

/// Weak linking: a linkage from `r_fam` to `s_fam` after `X`, found by
/// disjoint-path search on growing truncations. All rays must certify in the
/// designated end; `Undetermined` on depth exhaustion, never a wrong linkage.
pub fn weak_link(
    pres: &Presentation,
    r_fam: &[RaySpec],
    s_fam: &[RaySpec],
    x: &BTreeSet<VertexId>,
    cert_k: u32,
    depth_max: u32,
) -> Result<Outcome<Linkage>, LinkError> {
    if r_fam.len() != s_fam.len() {
        return Err(LinkError::SizeMismatch);
    }
    let n = r_fam.len();
    if n == 0 {
        return Ok(Outcome::Found(Linkage {
            sigma: BTreeMap::new(),
            paths: Vec::new(),
            after: x.clone(),
        }));
    }
    let probe_depth = depth_max.min(64);
    check_family_disjoint(pres, r_fam, probe_depth)?;
    check_family_disjoint(pres, s_fam, probe_depth)?;
    certify_family(pres, r_fam, cert_k, depth_max)?;
    certify_family(pres, s_fam, cert_k, depth_max)?;

    let rv = family_view(r_fam, x);
    let mut blocked: BTreeSet<VertexId> = x.clone();
    for p in &rv.prefixes {
        blocked.extend(p.iter().copied());
    }
    // X' = X plus the strict ray prefixes; target tails come after X'.
    let mut xprime = blocked.clone();
    xprime.extend(rv.exits.iter().copied());

    let mut depth = start_depth(r_fam, s_fam, x, n as u32);
    loop {
        let depth_now = depth.min(depth_max);
        // greedy zero-length assignments where an exit already sits on a tail
        let mut sigma: BTreeMap<usize, usize> = BTreeMap::new();
        let mut paths: Vec<Option<Vec<VertexId>>> = vec![None; n];
        let mut taken_targets: BTreeSet<usize> = BTreeSet::new();
        let mut extra_blocked: BTreeSet<VertexId> = BTreeSet::new();
        let tails_realized: Vec<Vec<VertexId>> = s_fam
            .iter()
            .map(|s| {
                let mut xp = xprime.clone();
                for &e in &rv.exits {
                    xp.remove(&e);
                }
                let (t, _) = tail_after(s, &xp);
                t.realize(depth_now)
            })
            .collect();
        for i in 0..n {
            for (j, tl) in tails_realized.iter().enumerate() {
                if !taken_targets.contains(&j) && tl.first() == Some(&rv.exits[i]) {
                    sigma.insert(i, j);
                    paths[i] = Some(vec![rv.exits[i]]);
                    taken_targets.insert(j);
                    extra_blocked.extend(tl.iter().copied());
                    break;
                }
            }
        }
        let rest: Vec<usize> = (0..n).filter(|i| paths[*i].is_none()).collect();
        let routed = if rest.is_empty() {
            Some((BTreeMap::new(), Vec::new()))
        } else {
            let exits: Vec<VertexId> = rest.iter().map(|&i| rv.exits[i]).collect();
            let open: Vec<usize> = (0..n).filter(|j| !taken_targets.contains(j)).collect();
            let target_tails: Vec<Vec<VertexId>> =
                open.iter().map(|&j| tails_realized[j].clone()).collect();
            let mut blk = blocked.clone();
            blk.extend(extra_blocked.iter().copied());
            for &i in &rest {
                blk.remove(&rv.exits[i]);
            }
            route(pres, &exits, &target_tails, &blk, depth_now).map(|(sg, ps)| {
                let sg = sg
                    .into_iter()
                    .map(|(local_i, local_j)| (rest[local_i], open[local_j]))
                    .collect::<BTreeMap<_, _>>();
                (sg, ps)
            })
        };
        if let Some((sg, ps)) = routed {
            for (local_i, &i) in rest.iter().enumerate() {
                paths[i] = Some(ps.get(local_i).cloned().unwrap_or_default());
            }
            sigma.extend(sg);
            let lk = Linkage {
                sigma,
                paths: paths.into_iter().map(|p| p.unwrap()).collect(),
                after: x.clone(),
            };
            verify_linkage(pres, r_fam, s_fam, x, &lk, depth_now)?;
            return Ok(Outcome::Found(lk));
        }
        if depth >= depth_max {
            return Ok(Outcome::Undetermined);
        }
        depth = (depth * 2).min(depth_max);
    }
}

fn start_depth(r_fam: &[RaySpec], s_fam: &[RaySpec], x: &BTreeSet<VertexId>, k: u32) -> u32 {
    let mut c = x.iter().map(|v| v.copy_index()).max().unwrap_or(0);
    for r in r_fam.iter().chain(s_fam.iter()) {
        c = c
            .max(r.start + r.max_offset())
            .max(r.prefix.iter().map(|v| v.copy_index()).max().unwrap_or(0));
    }
    c + k + 2
}

/// Strong linking: links `r_fam` onto the rays of the given disjoint
/// subgraph handles while avoiding `a` of them entirely. Returns the avoided
/// index set `A` of size `a` and a linkage after `X` whose transitioned
/// family misses every vertex of the avoided handles. The handle count must
/// meet [`strong_link_bound`].
#[allow(clippy::too_many_arguments)]
pub fn strong_link(
    pres: &Presentation,
    r_fam: &[RaySpec],
    x: &BTreeSet<VertexId>,
    a: usize,
    handles: &[RaySubgraph],
    cert_k: u32,
    depth_max: u32,
    attempts: usize,
) -> Result<Outcome<(Vec<usize>, Linkage)>, LinkError> {
    let n = r_fam.len();
    let probe_depth = depth_max.min(64);
    check_family_disjoint(pres, r_fam, probe_depth)?;
    certify_family(pres, r_fam, cert_k, depth_max)?;
    for (i, h) in handles.iter().enumerate() {
        h.ray.validate(pres)?;
        if h
            .ray
            .realize(probe_depth)
            .iter()
            .any(|&v| !h.region.contains(v))
        {
            return Err(LinkError::RayLeavesRegion(i));
        }
        if x.iter().any(|&v| h.region.contains(v)) {
            return Err(LinkError::HandleMeetsX(i));
        }
        for (j, other) in handles.iter().enumerate().skip(i + 1) {
            if h.region.overlaps(&other.region, probe_depth) {
                return Err(LinkError::HandlesOverlap(i, j));
            }
        }
    }
    let spine = pres.spine_ray();
    for (i, h) in handles.iter().enumerate() {
        if !certify_same_end(pres, &h.ray, &spine, cert_k, depth_max).is_certified() {
            return Err(LinkError::NotCertified(i));
        }
    }

    let rv = family_view(r_fam, x);
    // |X'| with the paper's inclusive prefixes X ∪ ⋃ R_i x'_i.
    let mut xprime_all: BTreeSet<VertexId> = x.clone();
    for (p, e) in rv.prefixes.iter().zip(rv.exits.iter()) {
        xprime_all.extend(p.iter().copied());
        xprime_all.insert(*e);
    }
    let need = strong_link_bound(n, xprime_all.len(), a);
    if handles.len() < need {
        return Err(LinkError::BoundTooSmall {
            need,
            got: handles.len(),
        });
    }
    if n == 0 {
        let avoided: Vec<usize> = (0..a).collect();
        return Ok(Outcome::Found((
            avoided,
            Linkage {
                sigma: BTreeMap::new(),
                paths: Vec::new(),
                after: x.clone(),
            },
        )));
    }

    let mut blocked_base: BTreeSet<VertexId> = x.clone();
    for p in &rv.prefixes {
        blocked_base.extend(p.iter().copied());
    }
    // Handles touched by the transitioned prefixes can never be avoided.
    let clean: Vec<usize> = (0..handles.len())
        .filter(|&kk| !xprime_all.iter().any(|&v| handles[kk].region.contains(v)))
        .collect();

    let mut depth = start_depth(r_fam, &[], x, n as u32).max(
        handles
            .iter()
            .map(|h| h.ray.start + h.ray.max_offset() + 4)
            .max()
            .unwrap_or(0),
    );
    loop {
        let depth_now = depth.min(depth_max);
        let mut tried = 0usize;
        for combo in combinations(&clean, a) {
            if tried >= attempts {
                break;
            }
            tried += 1;
            let mut blk = blocked_base.clone();
            for &kk in &combo {
                blk.extend(handles[kk].region.vertices_at(depth_now));
            }
            for &e in &rv.exits {
                blk.remove(&e);
            }
            let open: Vec<usize> = (0..handles.len()).filter(|j| !combo.contains(j)).collect();
            let target_tails: Vec<Vec<VertexId>> = open
                .iter()
                .map(|&j| {
                    let (t, _) = tail_after(&handles[j].ray, &xprime_all);
                    t.realize(depth_now)
                })
                .collect();
            if let Some((sg, ps)) = route(pres, &rv.exits, &target_tails, &blk, depth_now) {
                let sigma: BTreeMap<usize, usize> =
                    sg.into_iter().map(|(i, j)| (i, open[j])).collect();
                let lk = Linkage {
                    sigma,
                    paths: ps,
                    after: x.clone(),
                };
                let s_rays: Vec<RaySpec> = handles.iter().map(|h| h.ray.clone()).collect();
                verify_linkage(pres, r_fam, &s_rays, x, &lk, depth_now)?;
                // avoidance: transitioned family misses the avoided handles
                let fam = transition(pres, r_fam, &lk, &s_rays, depth_now)?;
                let mut ok = true;
                'av: for ray in &fam {
                    for v in ray.realize(depth_now) {
                        if combo.iter().any(|&kk| handles[kk].region.contains(v)) {
                            ok = false;
                            break 'av;
                        }
                    }
                }
                if ok {
                    return Ok(Outcome::Found((combo, lk)));
                }
            }
        }
        if depth >= depth_max {
            return Ok(Outcome::Undetermined);
        }
        depth = (depth * 2).min(depth_max);
    }
}

/// Lexicographic k-combinations of `pool`.
fn combinations(pool: &[usize], k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let m = pool.len();
    if k > m {
        return out;
    }
    if k == 0 {
        out.push(Vec::new());
        return out;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        out.push(idx.iter().map(|&i| pool[i]).collect());
        let mut i = k as isize - 1;
        while i >= 0 && idx[i as usize] == i as usize + m - k {
            i -= 1;
        }
        if i < 0 {
            return out;
        }
        let i = i as usize;
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Builds the transitioned family `x_i R_i x'_i P_i y_{sigma(i)} S_{sigma(i)}`
/// as ray specs, validating pairwise disjointness.
pub fn transition(
    pres: &Presentation,
    r_fam: &[RaySpec],
    lk: &Linkage,
    s_fam: &[RaySpec],
    depth: u32,
) -> Result<Vec<RaySpec>, LinkError> {
    let rv = family_view(r_fam, &lk.after);
    let mut out = Vec::new();
    for i in 0..r_fam.len() {
        let j = *lk
            .sigma
            .get(&i)
            .ok_or(LinkageViolation::SigmaNotTotal(i))?;
        let path = &lk.paths[i];
        if path.is_empty() || path[0] != rv.exits[i] {
            return Err(LinkageViolation::NotOnTail(i).into());
        }
        let y = *path.last().unwrap();
        let s_realized = s_fam[j].realize(
            depth.max(y.copy_index() + 2 * s_fam[j].shift + s_fam[j].max_offset()),
        );
        let y_pos = s_realized
            .iter()
            .position(|&v| v == y)
            .ok_or(LinkageViolation::NotOnTarget(i))?;
        let suffix = s_fam[j].suffix_from(y_pos);
        let mut prefix: Vec<VertexId> = rv.prefixes[i].clone();
        prefix.extend(path.iter().copied());
        prefix.extend(suffix.prefix.iter().skip(1).copied());
        let spec = RaySpec {
            prefix,
            start: suffix.start,
            period: suffix.period,
            shift: suffix.shift,
        };
        spec.validate(pres)
            .map_err(|_| LinkageViolation::NotAPath(i))?;
        out.push(spec);
    }
    // output family is pairwise disjoint
    let sets: Vec<BTreeSet<VertexId>> = out.iter().map(|r| r.vertex_set(depth)).collect();
    for i in 0..sets.len() {
        for j in i + 1..sets.len() {
            if sets[i].intersection(&sets[j]).next().is_some() {
                return Err(LinkageViolation::TransitionOverlap(i, j).into());
            }
        }
    }
    Ok(out)
}

/// Checks every linkage invariant verbatim: injectivity of sigma, the tail
/// and avoidance conditions of "after X", and disjointness of the
/// transitioned family.
pub fn verify_linkage(
    pres: &Presentation,
    r_fam: &[RaySpec],
    s_fam: &[RaySpec],
    x: &BTreeSet<VertexId>,
    lk: &Linkage,
    depth: u32,
) -> Result<(), LinkageViolation> {
    let mut seen_targets = BTreeSet::new();
    for (&i, &j) in &lk.sigma {
        if !seen_targets.insert(j) {
            return Err(LinkageViolation::SigmaNotInjective(i));
        }
    }
    for i in 0..r_fam.len() {
        if !lk.sigma.contains_key(&i) {
            return Err(LinkageViolation::SigmaNotTotal(i));
        }
    }
    for (i, path) in lk.paths.iter().enumerate() {
        if path.is_empty() {
            return Err(LinkageViolation::NotAPath(i));
        }
        for w in path.windows(2) {
            if !pres.adjacent(w[0], w[1]) {
                return Err(LinkageViolation::NotAPath(i));
            }
        }
        let distinct: BTreeSet<_> = path.iter().collect();
        if distinct.len() != path.len() {
            return Err(LinkageViolation::NotAPath(i));
        }
        let (tail, _) = tail_after(&r_fam[i], x);
        if !tail.vertex_set(depth).contains(&path[0]) {
            return Err(LinkageViolation::NotOnTail(i));
        }
        let j = lk.sigma[&i];
        let y = *path.last().unwrap();
        let s_realized = s_fam[j].realize(depth);
        let Some(y_pos) = s_realized.iter().position(|&v| v == y) else {
            return Err(LinkageViolation::NotOnTarget(i));
        };
        if path.iter().any(|v| x.contains(v))
            || s_realized[y_pos..].iter().any(|v| x.contains(v))
        {
            return Err(LinkageViolation::MeetsX(i));
        }
    }
    // transitioned family pairwise disjoint
    let rv = family_view(r_fam, x);
    let mut transitioned: Vec<BTreeSet<VertexId>> = Vec::new();
    for (i, path) in lk.paths.iter().enumerate() {
        let j = lk.sigma[&i];
        let mut set: BTreeSet<VertexId> = rv.prefixes[i].iter().copied().collect();
        set.extend(path.iter().copied());
        let y = *path.last().unwrap();
        let s_realized = s_fam[j].realize(depth);
        if let Some(pos) = s_realized.iter().position(|&v| v == y) {
            set.extend(s_realized[pos..].iter().copied());
        }
        transitioned.push(set);
    }
    for i in 0..transitioned.len() {
        for j in i + 1..transitioned.len() {
            if transitioned[i]
                .intersection(&transitioned[j])
                .next()
                .is_some()
            {
                return Err(LinkageViolation::TransitionOverlap(i, j));
            }
        }
    }
    Ok(())
}

/// Certified dominating vertices of the presentation: the globals that
/// certify domination at width `cert_k` against the spine.
pub fn certified_dominators(pres: &Presentation, cert_k: u32, depth_max: u32) -> Vec<VertexId> {
    let spine = pres.spine_ray();
    (0..pres.globals.len() as u32)
        .map(VertexId::Global)
        .filter(|&g| {
            certify_domination(pres, g, &spine, cert_k, depth_max)
                .map(|o| o.is_certified())
                .unwrap_or(false)
        })
        .collect()
}

/// Converts disjoint rays from `starts` into disjoint paths from the same
/// starts to distinct certified dominating vertices.
pub fn rays_to_dominating_paths(
    pres: &Presentation,
    starts: &[VertexId],
    rays: &[RaySpec],
    forbidden: &BTreeSet<VertexId>,
    cert_k: u32,
    depth_max: u32,
) -> Result<Outcome<Vec<Vec<VertexId>>>, LinkError> {
    let k = starts.len();
    if k == 0 {
        return Ok(Outcome::Found(Vec::new()));
    }
    let distinct: BTreeSet<_> = starts.iter().collect();
    if distinct.len() != k {
        return Err(LinkError::StartsCollide);
    }
    if rays.len() != k {
        return Err(LinkError::SizeMismatch);
    }
    let probe_depth = depth_max.min(64);
    check_family_disjoint(pres, rays, probe_depth)?;
    for (i, r) in rays.iter().enumerate() {
        let first = r
            .realize(r.start + r.shift + r.max_offset() + 2)
            .first()
            .copied();
        if first != Some(starts[i]) {
            return Err(LinkError::BadStart(i));
        }
    }
    certify_family(pres, rays, cert_k, depth_max)?;
    let doms = certified_dominators(pres, cert_k, depth_max);
    if doms.len() < k {
        return Err(LinkError::TooFewDominators(k));
    }
    // zero-length paths for starts that already dominate
    let mut paths: Vec<Option<Vec<VertexId>>> = vec![None; k];
    let mut used_doms: BTreeSet<VertexId> = BTreeSet::new();
    for (i, &s) in starts.iter().enumerate() {
        if doms.contains(&s) && !forbidden.contains(&s) {
            paths[i] = Some(vec![s]);
            used_doms.insert(s);
        }
    }
    let rest: Vec<usize> = (0..k).filter(|&i| paths[i].is_none()).collect();
    if rest.is_empty() {
        return Ok(Outcome::Found(
            paths.into_iter().map(|p| p.unwrap()).collect(),
        ));
    }
    let mut depth = starts
        .iter()
        .chain(forbidden.iter())
        .map(|v| v.copy_index())
        .max()
        .unwrap_or(0)
        + k as u32
        + 4;
    loop {
        let depth_now = depth.min(depth_max);
        let g = pres.truncate(depth_now);
        let mut dp = DisjointPaths::new(&g);
        let mut blk = forbidden.clone();
        blk.extend(used_doms.iter().copied());
        for &i in &rest {
            blk.remove(&starts[i]);
        }
        dp.block_set(&blk);
        for &i in &rest {
            let si = g.idx(starts[i]).ok_or(LinkError::BadStart(i))?;
            dp.source_group(&[si], 1);
        }
        let open_doms: Vec<VertexId> = doms
            .iter()
            .copied()
            .filter(|d| !used_doms.contains(d) && !forbidden.contains(d))
            .collect();
        for &d in &open_doms {
            if let Some(di) = g.idx(d) {
                dp.sink_group(&[di], 1);
            }
        }
        let res = dp.solve(rest.len() as u32);
        if res.value as usize == rest.len() {
            let mut filled = paths.clone();
            for p in &res.paths {
                let verts: Vec<VertexId> = p.iter().map(|&ix| g.vertex(ix)).collect();
                if let Some(&i) = rest.iter().find(|&&i| starts[i] == verts[0]) {
                    filled[i] = Some(verts);
                }
            }
            if filled.iter().all(|p| p.is_some()) {
                return Ok(Outcome::Found(
                    filled.into_iter().map(|p| p.unwrap()).collect(),
                ));
            }
        }
        if depth >= depth_max {
            return Ok(Outcome::Undetermined);
        }
        depth = (depth * 2).min(depth_max);
    }
}

/// Converts dominating vertices (repeats allowed) into rays to the end,
/// pairwise disjoint except at shared initial vertices. Rays are built by
/// routing onto fresh carrier rows beyond everything referenced.
pub fn dominating_to_rays(
    pres: &Presentation,
    ys: &[VertexId],
    forbidden: &BTreeSet<VertexId>,
    cert_k: u32,
    depth_max: u32,
) -> Result<Outcome<Vec<RaySpec>>, LinkError> {
    let k = ys.len();
    if k == 0 {
        return Ok(Outcome::Found(Vec::new()));
    }
    let doms = certified_dominators(pres, cert_k, depth_max);
    for &y in ys {
        if !doms.contains(&y) {
            return Err(LinkError::NotDominating(y));
        }
    }
    // carrier rows: unit locals self-linked copy to copy
    let rows: Vec<u32> = (0..pres.n_unit)
        .filter(|&u| pres.unit_links.contains(&(u, u)))
        .collect();
    let far = forbidden
        .iter()
        .chain(ys.iter())
        .map(|v| v.copy_index())
        .max()
        .unwrap_or(0)
        + 2;
    let spine = pres.spine_ray();
    let carriers: Vec<RaySpec> = rows
        .iter()
        .map(|&u| RaySpec {
            prefix: vec![],
            start: far,
            period: vec![(0, u)],
            shift: 1,
        })
        .filter(|r| {
            r.validate(pres).is_ok()
                && certify_same_end(pres, r, &spine, cert_k, depth_max).is_certified()
        })
        .take(k)
        .collect();
    if carriers.len() < k {
        return Ok(Outcome::Undetermined);
    }
    let mut mult: BTreeMap<VertexId, u32> = BTreeMap::new();
    for &y in ys {
        *mult.entry(y).or_insert(0) += 1;
    }
    let mut depth = far + k as u32 + 4;
    loop {
        let depth_now = depth.min(depth_max);
        let g = pres.truncate(depth_now);
        let mut dp = DisjointPaths::new(&g);
        let mut blk = forbidden.clone();
        for y in mult.keys() {
            blk.remove(y);
        }
        dp.block_set(&blk);
        for (&y, &c) in &mult {
            let yi = g.idx(y).ok_or(LinkError::NotDominating(y))?;
            dp.source_group(&[yi], c);
            dp.multi.push((yi, c));
        }
        let carrier_sets: Vec<Vec<VertexId>> =
            carriers.iter().map(|c| c.realize(depth_now)).collect();
        for cs in &carrier_sets {
            let verts: Vec<usize> = cs.iter().filter_map(|&v| g.idx(v)).collect();
            dp.sink_group(&verts, 1);
        }
        let res = dp.solve(k as u32);
        if res.value as usize == k {
            let mut buckets: BTreeMap<VertexId, Vec<Vec<VertexId>>> = BTreeMap::new();
            for p in &res.paths {
                let verts: Vec<VertexId> = p.iter().map(|&ix| g.vertex(ix)).collect();
                buckets.entry(verts[0]).or_default().push(verts);
            }
            let mut out = Vec::new();
            let mut ok = true;
            for &y in ys {
                let verts = buckets.get_mut(&y).and_then(|b| b.pop());
                let Some(verts) = verts else {
                    ok = false;
                    break;
                };
                let last = *verts.last().unwrap();
                let Some(cj) = carrier_sets.iter().position(|cs| cs.contains(&last)) else {
                    ok = false;
                    break;
                };
                let pos = carrier_sets[cj].iter().position(|&v| v == last).unwrap();
                let suffix = carriers[cj].suffix_from(pos);
                let mut prefix = verts.clone();
                prefix.extend(suffix.prefix.iter().skip(1).copied());
                let spec = RaySpec {
                    prefix,
                    start: suffix.start,
                    period: suffix.period,
                    shift: suffix.shift,
                };
                if spec.validate(pres).is_err() {
                    ok = false;
                    break;
                }
                out.push(spec);
            }
            if ok {
                // disjoint except at shared initial vertices
                let sets: Vec<BTreeSet<VertexId>> =
                    out.iter().map(|r| r.vertex_set(depth_now)).collect();
                let mut good = true;
                'chk: for i in 0..sets.len() {
                    for j in i + 1..sets.len() {
                        for v in sets[i].intersection(&sets[j]) {
                            if !(ys[i] == ys[j] && *v == ys[i]) {
                                good = false;
                                break 'chk;
                            }
                        }
                    }
                }
                if good {
                    return Ok(Outcome::Found(out));
                }
            }
        }
        if depth >= depth_max {
            return Ok(Outcome::Undetermined);
        }
        depth = (depth * 2).min(depth_max);
    }
}
