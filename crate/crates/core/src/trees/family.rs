//! Combs, combs of combs, and their right/down "unfolded" variants.
//!
//! A level-m segment has l_m edges. For m ≥ 2 it carries a cluster every
//! `spacing` edges, counted from its base and including its far end; each
//! cluster is a level-(m−1) segment with its own clusters, turned by 90°.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use rustc_hash::FxHashSet;
use serde::{Deserialize, Serialize};

use super::RootedTree;
use crate::error::{invalid, Error, Result};
use crate::lattice::{Edge, Site};

pub const MAX_FAMILY_EDGES: u64 = 1_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FamilyMode {
    /// Every branch turns left: right, up, left, down, ...
    Folded,
    /// Branches alternate right and down, so every root-to-leaf path is monotone.
    Unfolded,
}

/// Level constants and the segment geometry derived from them.
///
/// `e[j]` is E_j for j = 0..=k+1, `l[m−1]` is the length of a level-m
/// segment for m = 1..=k+1 and `spacing[m−2]` the gap between clusters on a
/// level-m segment for m = 2..=k+1.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyParams {
    pub k: usize,
    pub e: Vec<u64>,
    pub l: Vec<u64>,
    pub spacing: Vec<u64>,
    pub mode: FamilyMode,
}

impl FamilyParams {
    /// l₁ = E₁, l_m = 4E_mE_{m−2}/E_{m−1}, spacing 4E_{m−2}.
    pub fn from_levels(e: Vec<u64>, mode: FamilyMode) -> Result<FamilyParams> {
        if e.len() < 3 {
            return Err(invalid("need at least E0, E1, E2"));
        }
        if e.contains(&0) {
            return Err(invalid("level constants must be positive"));
        }
        let k = e.len() - 2;
        let mut l = vec![e[1]];
        let mut spacing = vec![];
        for m in 2..=k + 1 {
            let num = 4u128 * e[m] as u128 * e[m - 2] as u128;
            if num % e[m - 1] as u128 != 0 {
                return Err(invalid(format!("l_{m} = 4E_{m}E_{}/E_{} is not an integer", m - 2, m - 1)));
            }
            l.push(u64::try_from(num / e[m - 1] as u128).map_err(|_| invalid("segment length overflows"))?);
            spacing.push(4 * e[m - 2]);
        }
        let p = FamilyParams { k, e, l, spacing, mode };
        p.check()?;
        Ok(p)
    }

    /// E₀ = 2, E₁ = 4 and E_j = 4^√E_{j−1}, the same recursion at a size that
    /// can be drawn. Only k ≤ 2 fits: E₄ = 4¹⁶.
    pub fn toy(k: usize, mode: FamilyMode) -> Result<FamilyParams> {
        let mut e: Vec<u64> = vec![2, 4];
        while e.len() < k + 2 {
            let root = e.last().unwrap().isqrt();
            let next = 4u64.checked_pow(root as u32).ok_or(Error::Cap { what: "toy level", got: k as u64, cap: 2 })?;
            e.push(next);
        }
        FamilyParams::from_levels(e, mode)
    }

    /// A single comb: teeth of `seg_len` every `spacing` along a spine of
    /// `segments·spacing`.
    pub fn comb(segments: u64, seg_len: u64, spacing: u64, mode: FamilyMode) -> Result<FamilyParams> {
        let p = FamilyParams {
            k: 1,
            e: vec![],
            l: vec![seg_len, segments.checked_mul(spacing).ok_or_else(|| invalid("spine overflows"))?],
            spacing: vec![spacing],
            mode,
        };
        p.check()?;
        Ok(p)
    }

    fn check(&self) -> Result<()> {
        if self.l.len() != self.k + 1 || self.spacing.len() != self.k {
            return Err(invalid("l and spacing lengths do not match k"));
        }
        if self.l.contains(&0) || self.spacing.contains(&0) {
            return Err(invalid("segment lengths and spacings must be positive"));
        }
        for (m, (&l, &s)) in self.l[1..].iter().zip(&self.spacing).enumerate() {
            if l % s != 0 {
                return Err(invalid(format!("level {} segment of {l} is not a multiple of its spacing {s}", m + 2)));
            }
        }
        Ok(())
    }

    /// Edges in a level-m cluster, m = 1..=k+1.
    fn cluster_edges(&self, m: usize) -> Option<u64> {
        if m == 1 {
            return Some(self.l[0]);
        }
        let teeth = self.l[m - 1] / self.spacing[m - 2];
        teeth.checked_mul(self.cluster_edges(m - 1)?)?.checked_add(self.l[m - 1])
    }

    pub fn edge_count(&self) -> Option<u64> {
        self.cluster_edges(self.k + 1)
    }
}

fn turn(dir: (i32, i32), mode: FamilyMode) -> (i32, i32) {
    match mode {
        FamilyMode::Folded => (-dir.1, dir.0),
        FamilyMode::Unfolded if dir == (1, 0) => (0, -1),
        FamilyMode::Unfolded => (1, 0),
    }
}

struct Drawing {
    edges: Vec<Edge>,
    seen: FxHashSet<(i32, i32)>,
}

impl Drawing {
    fn segment(&mut self, p: &FamilyParams, m: usize, base: (i32, i32), dir: (i32, i32)) -> Result<()> {
        let len = p.l[m - 1] as i32;
        let at = |t: i32| (base.0 + dir.0 * t, base.1 + dir.1 * t);
        for t in 1..=len {
            let (x, y) = at(t);
            if !self.seen.insert((x, y)) {
                return Err(invalid(format!("segments collide at ({x},{y}); clusters overlap for these parameters")));
            }
            let (u, v) = at(t - 1);
            self.edges.push(Edge::new(Site::xy(u, v), Site::xy(x, y))?);
        }
        if m >= 2 {
            let s = p.spacing[m - 2] as i32;
            for i in 1..=len / s {
                self.segment(p, m - 1, at(s * i), turn(dir, p.mode))?;
            }
        }
        Ok(())
    }
}

/// Draw the level-(k+1) cluster with its base at the origin, heading right.
pub fn generate_family(params: &FamilyParams) -> Result<RootedTree> {
    params.check()?;
    let n = params.edge_count().unwrap_or(u64::MAX);
    if n > MAX_FAMILY_EDGES {
        return Err(Error::Cap { what: "family tree edges", got: n, cap: MAX_FAMILY_EDGES });
    }
    let mut d = Drawing { edges: Vec::with_capacity(n as usize), seen: FxHashSet::default() };
    d.seen.insert((0, 0));
    d.segment(params, params.k + 1, (0, 0), (1, 0))?;
    RootedTree::from_edges(Site::xy(0, 0), d.edges)
}

/// Spine of `segments·spacing` edges along +x with a tooth of `seg_len`
/// edges going up at every multiple of `spacing`.
pub fn generate_comb_tree(segments: u64, seg_len: u64, spacing: u64) -> Result<RootedTree> {
    if segments == 0 || seg_len == 0 || spacing == 0 {
        return Err(invalid("comb parameters must be at least 1"));
    }
    generate_family(&FamilyParams::comb(segments, seg_len, spacing, FamilyMode::Folded)?)
}

/// Integer comb parameters (segments, seg_len, spacing) for a comb of about
/// n = 4^log4_n tooth edges: seg_len = ⌊(log₄n)²⌋, spacing =
/// ⌊4(log₄ seg_len)²⌋ and segments = ⌊n/seg_len⌋.
pub fn comb_parameters(log4_n: u32) -> Result<(u64, u64, u64)> {
    if !(2..=31).contains(&log4_n) {
        return Err(invalid(format!("log4 n = {log4_n} outside 2..=31")));
    }
    let n = 1u64 << (2 * log4_n);
    let seg_len = (log4_n as u64).pow(2);
    let lg = (seg_len as f64).ln() / 4f64.ln();
    let spacing = (4.0 * lg * lg + 1e-9).floor() as u64;
    Ok((n / seg_len, seg_len, spacing.max(1)))
}

/// ∏w(e) over a family tree from its parameters alone.
///
/// Edge t of a level-m segment (counting from the base) sits below the rest
/// of the segment and every cluster based at or beyond its far end.
pub fn family_weight_product(params: &FamilyParams) -> Result<BigUint> {
    params.check()?;
    if params.edge_count().is_none_or(|n| n > MAX_FAMILY_EDGES) {
        return Err(Error::Cap { what: "family tree edges", got: params.edge_count().unwrap_or(u64::MAX), cap: MAX_FAMILY_EDGES });
    }
    let mut w = (1..=params.l[0]).map(BigUint::from).product::<BigUint>();
    let mut n_sub = params.l[0];
    for m in 2..=params.k + 1 {
        let (l, s) = (params.l[m - 1], params.spacing[m - 2]);
        let teeth = l / s;
        let mut level = w.pow(teeth as u32);
        for t in 1..=l {
            let beyond = teeth - t.div_ceil(s) + 1;
            level *= 1 + (l - t) + n_sub * beyond;
        }
        w = level;
        n_sub = l + teeth * n_sub;
    }
    Ok(w)
}

/// Six edges: the root, a branch vertex two steps right, one arm continuing
/// right and one going down, each of length two. The smallest tree with a
/// degree-3 vertex whose special vertices are evenly separated.
pub fn toy_unfolded_tree() -> RootedTree {
    let p = |x, y| Site::xy(x, y);
    let edges = [
        ((0, 0), (1, 0)),
        ((1, 0), (2, 0)),
        ((2, 0), (3, 0)),
        ((3, 0), (4, 0)),
        ((2, 0), (2, -1)),
        ((2, -1), (2, -2)),
    ]
    .map(|(a, b)| Edge::new(p(a.0, a.1), p(b.0, b.1)).unwrap());
    RootedTree::from_edges(p(0, 0), edges).unwrap()
}

/// Leaves and branch vertices lie an even number of edges apart along the
/// tree, and every turn is an even number of edges from the nearest of them.
///
/// Vertices of degree other than 2 cut the tree into unbranched paths; the
/// check is that every such path has even length and that every turn on it
/// is an even distance from its ends.
pub fn validate_even_separation(t: &RootedTree) -> bool {
    let deg = t.degrees();
    let mut adj: BTreeMap<Site, Vec<Site>> = BTreeMap::new();
    for e in t.edges() {
        adj.entry(e.a()).or_default().push(e.b());
        adj.entry(e.b()).or_default().push(e.a());
    }
    for (&start, nbrs) in &adj {
        if deg[&start] == 2 {
            continue;
        }
        for &first in nbrs {
            let (mut prev, mut cur, mut len) = (start, first, 1usize);
            while deg[&cur] == 2 {
                let next = adj[&cur].iter().copied().find(|&x| x != prev).unwrap();
                let straight = next.coord(0) - cur.coord(0) == cur.coord(0) - prev.coord(0)
                    && next.coord(1) - cur.coord(1) == cur.coord(1) - prev.coord(1);
                if !straight && len % 2 == 1 {
                    return false;
                }
                (prev, cur, len) = (cur, next, len + 1);
            }
            if len % 2 == 1 {
                return false;
            }
        }
    }
    true
}
