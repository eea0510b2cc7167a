//! Rooted lattice trees and the number of ways to build them edge by edge.
//!
//! A construction of a rooted tree lists its edges so that every prefix is
//! itself a tree containing the root. There are n!/∏w(e) of them, where w(e)
//! is one plus the number of edges beyond e as seen from the root.

mod family;
mod paper;
mod table;
mod target;

pub use family::{
    comb_parameters, family_weight_product, generate_comb_tree, generate_family, toy_unfolded_tree,
    validate_even_separation, FamilyMode, FamilyParams, MAX_FAMILY_EDGES,
};
pub use paper::{
    family_count_lower_bound, family_weight_bound, paper_parameters, toy_weight_chain, PaperParameters,
    WeightBound, BLOWUP_THRESHOLD, DISPLAY_THRESHOLD,
};
pub use table::{
    multiplier_rule, parity_transition, printed_table, verify_table, Parity, ParityVector, RowCheck, Transition,
};
pub use target::{target_string, TargetPattern};

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use num_bigint::BigUint;
use num_traits::One;
use rayon::prelude::*;
use rustc_hash::{FxHashMap, FxHashSet};
use serde::{Deserialize, Serialize};
use statrs::function::gamma::ln_gamma;

use crate::error::{invalid, Error, Result};
use crate::lattice::{neighbors, Edge, Site};

pub const MAX_BRUTE_FORCE_EDGES: usize = 8;

/// A finite tree of lattice edges, rooted at the origin.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootedTree {
    root: Site,
    edges: BTreeSet<Edge>,
    /// Breadth-first order from the root, with each vertex's parent.
    order: Vec<(Site, Option<Site>)>,
    parent: FxHashMap<Site, Option<Site>>,
}

#[derive(Serialize, Deserialize)]
struct TreeFile {
    root: Site,
    edges: Vec<Edge>,
}

impl RootedTree {
    pub fn from_edges(root: Site, edges: impl IntoIterator<Item = Edge>) -> Result<RootedTree> {
        if !root.is_origin() {
            return Err(invalid(format!("trees are rooted at the origin, got {root}")));
        }
        let list: Vec<Edge> = edges.into_iter().collect();
        let set: BTreeSet<Edge> = list.iter().copied().collect();
        if set.len() != list.len() {
            return Err(invalid("repeated edge in tree"));
        }
        if let Some(e) = set.iter().find(|e| e.dim() != root.dim()) {
            return Err(invalid(format!("edge {e:?} has the wrong dimension")));
        }
        let mut adj: FxHashMap<Site, Vec<Site>> = FxHashMap::default();
        for e in &set {
            adj.entry(e.a()).or_default().push(e.b());
            adj.entry(e.b()).or_default().push(e.a());
        }
        if !set.is_empty() && !adj.contains_key(&root) {
            return Err(invalid("no edge touches the root"));
        }
        let mut parent: FxHashMap<Site, Option<Site>> = FxHashMap::default();
        parent.insert(root, None);
        let mut order = vec![(root, None)];
        let mut queue = VecDeque::from([root]);
        while let Some(v) = queue.pop_front() {
            for &u in adj.get(&v).map(Vec::as_slice).unwrap_or(&[]) {
                if parent[&v] == Some(u) {
                    continue;
                }
                if parent.contains_key(&u) {
                    return Err(invalid(format!("edge set has a cycle through {u}")));
                }
                parent.insert(u, Some(v));
                order.push((u, Some(v)));
                queue.push_back(u);
            }
        }
        if order.len() != set.len() + 1 {
            return Err(invalid("edge set is not connected"));
        }
        Ok(RootedTree { root, edges: set, order, parent })
    }

    pub fn single_vertex(d: usize) -> Result<RootedTree> {
        RootedTree::from_edges(Site::origin(d)?, [])
    }

    pub fn root(&self) -> Site {
        self.root
    }

    pub fn edges(&self) -> &BTreeSet<Edge> {
        &self.edges
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn vertices(&self) -> impl Iterator<Item = Site> + '_ {
        self.order.iter().map(|(v, _)| *v)
    }

    pub fn contains(&self, s: &Site) -> bool {
        self.parent.contains_key(s)
    }

    pub fn parent(&self, s: &Site) -> Option<Site> {
        self.parent.get(s).copied().flatten()
    }

    pub fn degrees(&self) -> BTreeMap<Site, usize> {
        let mut deg: BTreeMap<Site, usize> = self.vertices().map(|v| (v, 0)).collect();
        for e in &self.edges {
            *deg.get_mut(&e.a()).unwrap() += 1;
            *deg.get_mut(&e.b()).unwrap() += 1;
        }
        deg
    }

    /// Weights in breadth-first order of the edges' far endpoints.
    fn weights_in_order(&self) -> Vec<(Edge, u64)> {
        let index: FxHashMap<Site, usize> = self.order.iter().enumerate().map(|(i, (v, _))| (*v, i)).collect();
        let mut below = vec![0u64; self.order.len()];
        for i in (1..self.order.len()).rev() {
            let (_, p) = self.order[i];
            below[index[&p.unwrap()]] += 1 + below[i];
        }
        self.order[1..]
            .iter()
            .zip(&below[1..])
            .map(|(&(v, p), &b)| (Edge::new(p.unwrap(), v).unwrap(), 1 + b))
            .collect()
    }

    pub fn edge_weights(&self) -> BTreeMap<Edge, u64> {
        self.weights_in_order().into_iter().collect()
    }

    pub fn weight_product(&self) -> BigUint {
        product(self.weights_in_order().into_iter().map(|(_, w)| BigUint::from(w)).collect())
    }

    pub fn ln_weight_product(&self) -> f64 {
        self.weights_in_order().iter().map(|&(_, w)| (w as f64).ln()).sum()
    }

    /// n!/∏w(e), exactly.
    pub fn construction_count(&self) -> BigUint {
        let n = self.len() as u64;
        product((1..=n).map(BigUint::from).collect()) / self.weight_product()
    }

    /// ln n! − Σ ln w(e), without forming either factor.
    pub fn log_construction_count(&self) -> f64 {
        ln_gamma(self.len() as f64 + 1.0) - self.ln_weight_product()
    }

    /// Count constructions by walking every one of them.
    pub fn brute_force_constructions(&self) -> Result<u64> {
        let n = self.len();
        if n > MAX_BRUTE_FORCE_EDGES {
            return Err(Error::Cap { what: "tree edges for brute force", got: n as u64, cap: MAX_BRUTE_FORCE_EDGES as u64 });
        }
        // Edge i joins order[i + 1] to its parent; parent_edge[i] is the edge
        // that must already be present, if any.
        let index: FxHashMap<Site, usize> = self.order.iter().enumerate().map(|(i, (v, _))| (*v, i)).collect();
        let parent_edge: Vec<Option<usize>> = self.order[1..]
            .iter()
            .map(|(_, p)| index[&p.unwrap()].checked_sub(1))
            .collect();
        fn walk(placed: u32, parent_edge: &[Option<usize>]) -> u64 {
            if placed.count_ones() as usize == parent_edge.len() {
                return 1;
            }
            let mut total = 0;
            for (i, pe) in parent_edge.iter().enumerate() {
                let ready = pe.is_none_or(|j| placed >> j & 1 == 1);
                if placed >> i & 1 == 0 && ready {
                    total += walk(placed | 1 << i, parent_edge);
                }
            }
            total
        }
        Ok(walk(0, &parent_edge))
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(TreeFile { root: self.root, edges: self.edges.iter().copied().collect() }).unwrap()
    }

    pub fn from_json(v: &serde_json::Value) -> Result<RootedTree> {
        let f: TreeFile = serde_json::from_value(v.clone()).map_err(|e| invalid(format!("tree file: {e}")))?;
        RootedTree::from_edges(f.root, f.edges)
    }
}

fn product(mut xs: Vec<BigUint>) -> BigUint {
    // Pairwise products keep the operands balanced.
    while xs.len() > 1 {
        xs = xs.par_chunks(2).map(|c| c.iter().product()).collect();
    }
    xs.pop().unwrap_or_else(BigUint::one)
}

/// Every rooted tree of lattice edges with at most `max_edges` edges whose
/// root is the origin, grouped by size.
pub fn tree_catalog(max_edges: usize, d: usize) -> Result<Vec<Vec<RootedTree>>> {
    if max_edges > MAX_BRUTE_FORCE_EDGES {
        return Err(Error::Cap { what: "catalog edges", got: max_edges as u64, cap: MAX_BRUTE_FORCE_EDGES as u64 });
    }
    let origin = Site::origin(d)?;
    let mut level: Vec<Vec<Edge>> = vec![vec![]];
    let mut out = vec![vec![RootedTree::single_vertex(d)?]];
    for _ in 0..max_edges {
        let next: FxHashSet<Vec<Edge>> = level
            .par_iter()
            .flat_map_iter(|edges| {
                let verts: BTreeSet<Site> = edges.iter().flat_map(|e| [e.a(), e.b()]).chain([origin]).collect();
                let mut grown = vec![];
                for &v in &verts {
                    for u in neighbors(v, d).unwrap() {
                        if !verts.contains(&u) {
                            let mut g = edges.clone();
                            g.push(Edge::new(v, u).unwrap());
                            g.sort();
                            grown.push(g);
                        }
                    }
                }
                grown
            })
            .collect();
        level = next.into_iter().collect();
        level.sort();
        out.push(level.iter().map(|e| RootedTree::from_edges(origin, e.clone())).collect::<Result<_>>()?);
    }
    Ok(out)
}
