//! Degree-preserving edge switchings.
//!
//! Two families of switching configurations are provided, both anchored at
//! a target `r`-set `e = {v_1 < … < v_r}`:
//!
//! * variant A: an out-configuration `(e_1 = e, e_2, …, e_r)` of pairwise
//!   disjoint edges and an in-configuration `(f_1, …, f_r)` of pairwise
//!   disjoint edges with `f_i ∩ e = {v_i}`; they are related when every
//!   `e_i` meets every `f_j` in exactly one vertex.
//! * variant B: an out-configuration `(e, e_1, …, e_r)` and an
//!   in-configuration `(f_1, …, f_r, f)`; related when each `e_i ∩ f_i` has
//!   `r − 1` vertices and `f` collects the leftover vertices `e_i ∖ f_i`.
//!
//! Replacing one side of a related pair by the other preserves every vertex
//! degree, and doing it twice is the identity.

use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::Rng;
use thiserror::Error;

use crate::combinatorics::{next_permutation, permutations};
use crate::hypergraph::{EdgeKey, Hypergraph, HypergraphError, Vertex};
use crate::sampler::{self, SamplerError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SwitchError {
    #[error("configurations are anchored at different target edges")]
    TargetMismatch,
    #[error("invalid configuration: {0}")]
    InvalidConfig(&'static str),
    #[error("edge {0} to remove is not present")]
    RemoveNotPresent(EdgeKey),
    #[error("edge {0} to add is already present")]
    AddAlreadyPresent(EdgeKey),
    #[error("no d-regular r-graph exists for these parameters")]
    Infeasible,
    #[error(transparent)]
    Hypergraph(#[from] HypergraphError),
    #[error(transparent)]
    Sampler(#[from] SamplerError),
}

fn pairwise_disjoint(edges: &[EdgeKey]) -> bool {
    edges
        .iter()
        .enumerate()
        .all(|(i, a)| edges[i + 1..].iter().all(|b| a.is_disjoint(b)))
}

fn uniform_arity(edges: &[EdgeKey], r: usize) -> bool {
    edges.iter().all(|e| e.len() == r)
}

/// Variant-A out-configuration `(e_1, …, e_r)` with `e_1` the target.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct OutConfigA {
    edges: Vec<EdgeKey>,
}

impl OutConfigA {
    pub fn new(edges: Vec<EdgeKey>) -> Result<Self, SwitchError> {
        let r = edges.first().map(EdgeKey::len).unwrap_or(0);
        if r < 2 || edges.len() != r || !uniform_arity(&edges, r) {
            return Err(SwitchError::InvalidConfig("need r edges of size r"));
        }
        if !pairwise_disjoint(&edges) {
            return Err(SwitchError::InvalidConfig("out-configuration edges must be pairwise disjoint"));
        }
        Ok(OutConfigA { edges })
    }

    pub fn target(&self) -> &EdgeKey {
        &self.edges[0]
    }

    pub fn edges(&self) -> &[EdgeKey] {
        &self.edges
    }
}

/// Variant-A in-configuration `(f_1, …, f_r)` with `f_i ∩ e = {v_i}`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct InConfigA {
    target: EdgeKey,
    edges: Vec<EdgeKey>,
}

impl InConfigA {
    pub fn new(target: EdgeKey, edges: Vec<EdgeKey>) -> Result<Self, SwitchError> {
        let r = target.len();
        if r < 2 || edges.len() != r || !uniform_arity(&edges, r) {
            return Err(SwitchError::InvalidConfig("need r edges of size r"));
        }
        if !pairwise_disjoint(&edges) {
            return Err(SwitchError::InvalidConfig("in-configuration edges must be pairwise disjoint"));
        }
        for (i, f) in edges.iter().enumerate() {
            if f.intersection_size(&target) != 1 || !f.contains(target.vertices()[i]) {
                return Err(SwitchError::InvalidConfig("f_i must meet the target exactly in v_i"));
            }
        }
        Ok(InConfigA { target, edges })
    }

    pub fn target(&self) -> &EdgeKey {
        &self.target
    }

    pub fn edges(&self) -> &[EdgeKey] {
        &self.edges
    }
}

pub fn is_related_a(out: &OutConfigA, inc: &InConfigA) -> Result<bool, SwitchError> {
    if out.target() != inc.target() {
        return Err(SwitchError::TargetMismatch);
    }
    Ok(out.edges.iter().all(|e| inc.edges.iter().all(|f| e.intersection_size(f) == 1)))
}

/// The in-configuration determined by one permutation of each of
/// `e_2, …, e_r`: `f_i = {v_i} ∪ {e_k[π_k(i)]}`.
fn in_a_from_perms(out: &OutConfigA, perms: &[&[usize]]) -> InConfigA {
    let r = out.edges.len();
    let target = out.target().clone();
    let edges = (0..r)
        .map(|i| {
            let mut vs = Vec::with_capacity(r);
            vs.push(target.vertices()[i]);
            for (k, perm) in perms.iter().enumerate() {
                vs.push(out.edges[k + 1].vertices()[perm[i]]);
            }
            vs.sort_unstable();
            EdgeKey::from_sorted(vs)
        })
        .collect();
    InConfigA { target, edges }
}

/// All `(r!)^{r−1}` related in-configurations.
pub fn enumerate_related_in_a(out: &OutConfigA) -> Vec<InConfigA> {
    let r = out.edges.len();
    let perms = permutations(r);
    let mut choice = vec![0usize; r - 1];
    let mut result = Vec::new();
    loop {
        let chosen: Vec<&[usize]> = choice.iter().map(|&c| perms[c].as_slice()).collect();
        result.push(in_a_from_perms(out, &chosen));
        // odometer over (r−1) permutation indices
        let mut k = 0;
        loop {
            if k == choice.len() {
                return result;
            }
            choice[k] += 1;
            if choice[k] < perms.len() {
                break;
            }
            choice[k] = 0;
            k += 1;
        }
    }
}

/// All `((r−1)!)^r` related out-configurations.
pub fn enumerate_related_out_a(inc: &InConfigA) -> Vec<OutConfigA> {
    let r = inc.edges.len();
    let target = &inc.target;
    // others[i] = f_i ∖ {v_i}, in ascending order
    let others: Vec<Vec<Vertex>> = inc
        .edges
        .iter()
        .enumerate()
        .map(|(i, f)| f.vertices().iter().copied().filter(|&v| v != target.vertices()[i]).collect())
        .collect();
    let perms = permutations(r - 1);
    let mut choice = vec![0usize; r];
    let mut result = Vec::new();
    loop {
        let mut edges = Vec::with_capacity(r);
        edges.push(target.clone());
        for j in 0..r - 1 {
            let mut vs: Vec<Vertex> = (0..r).map(|i| others[i][perms[choice[i]][j]]).collect();
            vs.sort_unstable();
            edges.push(EdgeKey::from_sorted(vs));
        }
        result.push(OutConfigA { edges });
        let mut k = 0;
        loop {
            if k == choice.len() {
                return result;
            }
            choice[k] += 1;
            if choice[k] < perms.len() {
                break;
            }
            choice[k] = 0;
            k += 1;
        }
    }
}

/// Variant-B out-configuration `(e, e_1, …, e_r)`.
///
/// Requires `v_i ∉ e_i` and a vertex `u_i ∈ e_i ∖ e` lying in no other
/// `e_j`. The witnesses are not stored; a related in-configuration fixes
/// them as `{u_i} = e_i ∩ f`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct OutConfigB {
    target: EdgeKey,
    edges: Vec<EdgeKey>,
}

impl OutConfigB {
    pub fn new(target: EdgeKey, edges: Vec<EdgeKey>) -> Result<Self, SwitchError> {
        let r = target.len();
        if r < 2 || edges.len() != r || !uniform_arity(&edges, r) {
            return Err(SwitchError::InvalidConfig("need r edges of size r"));
        }
        for (i, ei) in edges.iter().enumerate() {
            if ei.contains(target.vertices()[i]) {
                return Err(SwitchError::InvalidConfig("v_i must not lie in e_i"));
            }
            let has_witness = ei
                .vertices()
                .iter()
                .any(|&u| !target.contains(u) && edges.iter().enumerate().all(|(j, ej)| j == i || !ej.contains(u)));
            if !has_witness {
                return Err(SwitchError::InvalidConfig("e_i needs a private vertex outside the target"));
            }
        }
        Ok(OutConfigB { target, edges })
    }

    pub fn target(&self) -> &EdgeKey {
        &self.target
    }

    pub fn edges(&self) -> &[EdgeKey] {
        &self.edges
    }

    /// `e, e_1, …, e_r` as one list.
    pub fn all_edges(&self) -> Vec<EdgeKey> {
        let mut v = Vec::with_capacity(self.edges.len() + 1);
        v.push(self.target.clone());
        v.extend(self.edges.iter().cloned());
        v
    }
}

/// Variant-B in-configuration `(f_1, …, f_r, f)`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct InConfigB {
    target: EdgeKey,
    edges: Vec<EdgeKey>,
    apex: EdgeKey,
}

impl InConfigB {
    pub fn new(target: EdgeKey, edges: Vec<EdgeKey>, apex: EdgeKey) -> Result<Self, SwitchError> {
        let r = target.len();
        if r < 2 || edges.len() != r || !uniform_arity(&edges, r) || apex.len() != r {
            return Err(SwitchError::InvalidConfig("need r + 1 edges of size r"));
        }
        for (i, fi) in edges.iter().enumerate() {
            if !fi.contains(target.vertices()[i]) {
                return Err(SwitchError::InvalidConfig("v_i must lie in f_i"));
            }
            if *fi == target {
                return Err(SwitchError::InvalidConfig("f_i must differ from the target"));
            }
            if edges[i + 1..].contains(fi) {
                return Err(SwitchError::InvalidConfig("f_i must be distinct"));
            }
            if !fi.is_disjoint(&apex) {
                return Err(SwitchError::InvalidConfig("f must be disjoint from every f_i"));
            }
        }
        Ok(InConfigB { target, edges, apex })
    }

    pub fn target(&self) -> &EdgeKey {
        &self.target
    }

    pub fn edges(&self) -> &[EdgeKey] {
        &self.edges
    }

    /// The extra edge `f`.
    pub fn apex(&self) -> &EdgeKey {
        &self.apex
    }

    /// `f_1, …, f_r, f` as one list.
    pub fn all_edges(&self) -> Vec<EdgeKey> {
        let mut v = self.edges.clone();
        v.push(self.apex.clone());
        v
    }
}

pub fn is_related_b(out: &OutConfigB, inc: &InConfigB) -> Result<bool, SwitchError> {
    if out.target != inc.target {
        return Err(SwitchError::TargetMismatch);
    }
    let r = out.target.len();
    let mut leftovers: BTreeSet<Vertex> = BTreeSet::new();
    for (ei, fi) in out.edges.iter().zip(&inc.edges) {
        if ei.intersection_size(fi) != r - 1 {
            return Ok(false);
        }
        leftovers.extend(ei.vertices().iter().copied().filter(|&v| !fi.contains(v)));
    }
    Ok(leftovers.len() == r && leftovers.iter().all(|&v| inc.apex.contains(v)))
}

/// All related in-configurations; at most `r^r`.
pub fn enumerate_related_in_b(out: &OutConfigB) -> Vec<InConfigB> {
    let r = out.target.len();
    let mut choice = vec![0usize; r];
    let mut result = Vec::new();
    loop {
        let witnesses: Vec<Vertex> = (0..r).map(|i| out.edges[i].vertices()[choice[i]]).collect();
        if let Some(inc) = in_b_from_witnesses(out, &witnesses) {
            result.push(inc);
        }
        let mut k = 0;
        loop {
            if k == r {
                return result;
            }
            choice[k] += 1;
            if choice[k] < r {
                break;
            }
            choice[k] = 0;
            k += 1;
        }
    }
}

fn in_b_from_witnesses(out: &OutConfigB, witnesses: &[Vertex]) -> Option<InConfigB> {
    let target = &out.target;
    let edges: Vec<EdgeKey> = out
        .edges
        .iter()
        .zip(witnesses)
        .enumerate()
        .map(|(i, (ei, &u))| {
            let mut vs: Vec<Vertex> = ei.vertices().iter().copied().filter(|&v| v != u).collect();
            vs.push(target.vertices()[i]);
            vs.sort_unstable();
            EdgeKey::from_sorted(vs)
        })
        .collect();
    let apex = EdgeKey::new(witnesses).ok()?;
    let inc = InConfigB::new(target.clone(), edges, apex).ok()?;
    is_related_b(out, &inc).ok()?.then_some(inc)
}

/// All `r!` related out-configurations.
pub fn enumerate_related_out_b(inc: &InConfigB) -> Vec<OutConfigB> {
    let target = &inc.target;
    let r = target.len();
    let mut order: Vec<Vertex> = inc.apex.vertices().to_vec();
    let mut result = Vec::new();
    loop {
        let edges: Vec<EdgeKey> = inc
            .edges
            .iter()
            .enumerate()
            .map(|(i, fi)| {
                let mut vs: Vec<Vertex> = fi.vertices().iter().copied().filter(|&v| v != target.vertices()[i]).collect();
                vs.push(order[i]);
                vs.sort_unstable();
                EdgeKey::from_sorted(vs)
            })
            .collect();
        if let Ok(out) = OutConfigB::new(target.clone(), edges) {
            if is_related_b(&out, inc) == Ok(true) {
                result.push(out);
            }
        }
        if !next_permutation(&mut order) {
            break;
        }
    }
    debug_assert!(result.len() <= (1..=r).product::<usize>());
    result
}

/// `ψ(G, remove, add) = (G ∖ remove) ∪ add`.
///
/// Surviving edges keep their order; added edges are appended.
pub fn apply_switch(g: &Hypergraph, remove: &[EdgeKey], add: &[EdgeKey]) -> Result<Hypergraph, SwitchError> {
    let removed: BTreeSet<&EdgeKey> = remove.iter().collect();
    for e in remove {
        if !g.contains(e) {
            return Err(SwitchError::RemoveNotPresent(e.clone()));
        }
    }
    let mut seen: BTreeSet<&EdgeKey> = BTreeSet::new();
    for e in add {
        if (g.contains(e) && !removed.contains(e)) || !seen.insert(e) {
            return Err(SwitchError::AddAlreadyPresent(e.clone()));
        }
    }
    let kept = g.edges().iter().filter(|e| !removed.contains(e)).cloned();
    Ok(Hypergraph::from_edge_keys(g.n(), g.r(), kept.chain(add.iter().cloned()))?)
}

/// Mutable edge set driving the switching chain.
#[derive(Clone, Debug)]
pub struct SwitchChain {
    n: usize,
    r: usize,
    edges: Vec<EdgeKey>,
    members: BTreeSet<EdgeKey>,
    perms: Vec<Vec<usize>>,
}

impl SwitchChain {
    pub fn new(g: &Hypergraph) -> Self {
        SwitchChain {
            n: g.n(),
            r: g.r(),
            edges: g.edges().to_vec(),
            members: g.edge_set(),
            perms: permutations(g.r()),
        }
    }

    /// One lazy step; returns whether the state changed.
    ///
    /// Proposal: `e_1` and `e_2, …, e_r` drawn independently and uniformly
    /// from the current edges, then a uniform related in-configuration.
    /// The move is taken only when the draws are pairwise disjoint and the
    /// in-configuration avoids the current edges. The proposal is
    /// symmetric, so the uniform distribution is stationary.
    pub fn step<R: Rng + ?Sized>(&mut self, rng: &mut R) -> bool {
        let m = self.edges.len();
        let r = self.r;
        if m < r {
            return false;
        }
        let picks: Vec<usize> = (0..r).map(|_| rng.gen_range(0..m)).collect();
        let chosen: Vec<EdgeKey> = picks.iter().map(|&i| self.edges[i].clone()).collect();
        if !pairwise_disjoint(&chosen) {
            return false;
        }
        let out = OutConfigA { edges: chosen };
        let perm_refs: Vec<&[usize]> = (1..r).map(|_| self.perms[rng.gen_range(0..self.perms.len())].as_slice()).collect();
        let inc = in_a_from_perms(&out, &perm_refs);
        if inc.edges.iter().any(|f| self.members.contains(f)) {
            return false;
        }
        for (&slot, f) in picks.iter().zip(&inc.edges) {
            self.members.remove(&self.edges[slot]);
            self.members.insert(f.clone());
            self.edges[slot] = f.clone();
        }
        true
    }

    pub fn run<R: Rng + ?Sized>(&mut self, steps: usize, rng: &mut R) -> usize {
        (0..steps).filter(|_| self.step(rng)).count()
    }

    pub fn to_hypergraph(&self) -> Hypergraph {
        Hypergraph::from_edge_keys(self.n, self.r, self.edges.iter().cloned()).expect("chain keeps a simple r-graph")
    }
}

/// One lazy switching step from `g`; `None` when the proposal is rejected.
pub fn random_switch_move<R: Rng + ?Sized>(g: &Hypergraph, rng: &mut R) -> Option<Hypergraph> {
    let mut chain = SwitchChain::new(g);
    chain.step(rng).then(|| chain.to_hypergraph())
}

/// Totals of the two sides of the double count: admissible out-switchings
/// summed over the class members containing `e`, and admissible
/// in-switchings summed over the members avoiding it.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GammaCount {
    pub out_total: u64,
    pub in_total: u64,
    pub with_edge: usize,
    pub without_edge: usize,
}

/// Counts both sides of the bipartite switching multigraph between the
/// members of `G_{n,d,H,H'}` that contain `e` and those that do not.
///
/// Both totals count the same multigraph edges, so they must agree.
pub fn double_count_gamma(
    n: usize,
    r: usize,
    d: usize,
    forced: &[EdgeKey],
    forbidden: &[EdgeKey],
    e: &EdgeKey,
    node_budget: u64,
) -> Result<GammaCount, SwitchError> {
    if !crate::hypergraph::regular_exists(n, r, d) {
        return Err(SwitchError::Infeasible);
    }
    if forced.contains(e) || forbidden.contains(e) {
        return Err(SwitchError::InvalidConfig("target must avoid H and H'"));
    }
    let class = sampler::enumerate_conditional(n, r, d, forced, forbidden, node_budget)?;
    let forced_set: BTreeSet<&EdgeKey> = forced.iter().collect();
    let forbidden_set: BTreeSet<&EdgeKey> = forbidden.iter().collect();
    let mut counts = GammaCount {
        out_total: 0,
        in_total: 0,
        with_edge: 0,
        without_edge: 0,
    };
    for g in &class {
        if g.contains(e) {
            counts.with_edge += 1;
            counts.out_total += count_out_switchings(g, e, &forced_set, &forbidden_set);
        } else {
            counts.without_edge += 1;
            counts.in_total += count_in_switchings(g, e, &forced_set, &forbidden_set);
        }
    }
    Ok(counts)
}

/// Triples `(G, Λ_e, Λ_ē)` with `Λ_e ⊆ G ∖ H` and `Λ_ē ⊆ Ḡ ∖ H'`.
fn count_out_switchings(g: &Hypergraph, e: &EdgeKey, forced: &BTreeSet<&EdgeKey>, forbidden: &BTreeSet<&EdgeKey>) -> u64 {
    let r = g.r();
    let pool: Vec<&EdgeKey> = g
        .edges()
        .iter()
        .filter(|f| *f != e && !forced.contains(f) && f.is_disjoint(e))
        .collect();
    let mut total = 0;
    let mut tuple: Vec<EdgeKey> = vec![e.clone()];
    ordered_disjoint_tuples(&pool, r - 1, &mut tuple, &mut |edges| {
        let out = OutConfigA { edges: edges.to_vec() };
        total += enumerate_related_in_a(&out)
            .iter()
            .filter(|inc| inc.edges.iter().all(|f| !g.contains(f) && !forbidden.contains(f)))
            .count() as u64;
    });
    total
}

/// Triples `(G, Λ_ē, Λ_e)` with `Λ_ē ⊆ G ∖ H` and `Λ_e ⊆ Ḡ ∖ H'`.
fn count_in_switchings(g: &Hypergraph, e: &EdgeKey, forced: &BTreeSet<&EdgeKey>, forbidden: &BTreeSet<&EdgeKey>) -> u64 {
    let r = g.r();
    let candidates: Vec<Vec<&EdgeKey>> = e
        .vertices()
        .iter()
        .map(|&v| {
            g.incidence(v)
                .iter()
                .map(|&i| g.edge(i))
                .filter(|f| !forced.contains(f) && f.intersection_size(e) == 1)
                .collect()
        })
        .collect();
    let mut total = 0;
    let mut chosen: Vec<EdgeKey> = Vec::with_capacity(r);
    in_tuples(&candidates, &mut chosen, &mut |fs| {
        let inc = InConfigA {
            target: e.clone(),
            edges: fs.to_vec(),
        };
        total += enumerate_related_out_a(&inc)
            .iter()
            .filter(|out| out.edges.iter().all(|h| !g.contains(h) && !forbidden.contains(h)))
            .count() as u64;
    });
    total
}

fn ordered_disjoint_tuples(pool: &[&EdgeKey], remaining: usize, tuple: &mut Vec<EdgeKey>, visit: &mut dyn FnMut(&[EdgeKey])) {
    if remaining == 0 {
        visit(tuple);
        return;
    }
    for &cand in pool {
        if tuple.iter().all(|t| t.is_disjoint(cand)) {
            tuple.push(cand.clone());
            ordered_disjoint_tuples(pool, remaining - 1, tuple, visit);
            tuple.pop();
        }
    }
}

fn in_tuples(candidates: &[Vec<&EdgeKey>], chosen: &mut Vec<EdgeKey>, visit: &mut dyn FnMut(&[EdgeKey])) {
    let i = chosen.len();
    if i == candidates.len() {
        visit(chosen);
        return;
    }
    for &cand in &candidates[i] {
        if chosen.iter().all(|c| c.is_disjoint(cand)) {
            chosen.push(cand.clone());
            in_tuples(candidates, chosen, visit);
            chosen.pop();
        }
    }
}

/// Draws a uniformly random pair of related variant-A configurations with
/// the out-side inside `g` and the in-side in its complement, trying at
/// most `attempts` proposals.
pub fn random_related_pair_a<R: Rng + ?Sized>(g: &Hypergraph, attempts: usize, rng: &mut R) -> Option<(OutConfigA, InConfigA)> {
    let r = g.r();
    let perms = permutations(r);
    let edges = g.edges();
    if edges.len() < r {
        return None;
    }
    for _ in 0..attempts {
        let chosen: Vec<EdgeKey> = (0..r).map(|_| edges.choose(rng).expect("nonempty").clone()).collect();
        if !pairwise_disjoint(&chosen) {
            continue;
        }
        let out = OutConfigA { edges: chosen };
        let perm_refs: Vec<&[usize]> = (1..r).map(|_| perms.choose(rng).expect("nonempty").as_slice()).collect();
        let inc = in_a_from_perms(&out, &perm_refs);
        if inc.edges.iter().all(|f| !g.contains(f)) {
            return Some((out, inc));
        }
    }
    None
}
