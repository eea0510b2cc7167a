use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use rayon::prelude::*;
use serde_json::{json, Value};

use super::grid::{Cluster, Grid};
use super::Edge;
use crate::error::{invalid, Error, Result};

/// Largest orders the exhaustive enumerators accept.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct EnumerationCaps {
    pub histories_d1: usize,
    pub histories_d2: usize,
    pub sequences_d1: usize,
    pub sequences_d2: usize,
}

impl Default for EnumerationCaps {
    fn default() -> Self {
        EnumerationCaps { histories_d1: 16, histories_d2: 8, sequences_d1: 10, sequences_d2: 6 }
    }
}

impl EnumerationCaps {
    fn histories(&self, n: usize, d: usize) -> Result<()> {
        let cap = match d {
            1 => self.histories_d1,
            2 => self.histories_d2,
            _ => return Err(Error::Dimension(d)),
        };
        check_cap("history length", n, cap)
    }

    fn sequences(&self, n: usize, d: usize) -> Result<()> {
        let cap = match d {
            1 => self.sequences_d1,
            2 => self.sequences_d2,
            _ => return Err(Error::Dimension(d)),
        };
        check_cap("sequence length", n, cap)
    }
}

fn check_cap(what: &'static str, n: usize, cap: usize) -> Result<()> {
    if n > cap {
        Err(Error::Cap { what, got: n as u64, cap: cap as u64 })
    } else {
        Ok(())
    }
}

/// Number of histories and their summed perimeters, for every length up to `n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HistoryStatistics {
    pub d: usize,
    pub n: usize,
    /// `counts[l]` = number of histories of length `l` = X^l_{l+1}.
    pub counts: Vec<BigUint>,
    /// `perimeter_sums[l]` = Σ |p(L)| over histories of length `l`.
    pub perimeter_sums: Vec<BigUint>,
}

impl HistoryStatistics {
    /// Average perimeter p̄_i over histories of length i−1, for 1 ≤ i ≤ n+1.
    pub fn pbar(&self, i: usize) -> BigRational {
        assert!(i >= 1 && i <= self.n + 1, "p̄ index {i} outside 1..={}", self.n + 1);
        BigRational::new(BigInt::from(self.perimeter_sums[i - 1].clone()), BigInt::from(self.counts[i - 1].clone()))
    }
}

/// Histories of every length up to `n`, counted without visiting the leaves
/// one by one. Counts at level l+1 are enumerated children while the
/// perimeter sums at level l come from the incremental perimeter formula,
/// so `counts[l+1] == perimeter_sums[l]` is a genuine check.
pub fn history_statistics(n: usize, d: usize, caps: &EnumerationCaps) -> Result<HistoryStatistics> {
    caps.histories(n, d)?;
    let grid = Grid::new(d, n);
    let root = Cluster::at_origin(&grid);
    let mut counts = vec![0u128; n + 1];
    let mut sums = vec![0u128; n + 1];
    counts[0] = 1;
    sums[0] = root.perimeter as u128;
    if n > 0 {
        let branches: Vec<(Vec<u128>, Vec<u128>)> = root
            .perimeter_pairs()
            .into_par_iter()
            .map(|(_, v)| {
                let mut c = root.clone();
                let mut counts = vec![0u128; n + 1];
                let mut sums = vec![0u128; n + 1];
                c.add(v);
                history_walk(&mut c, 1, n, &mut counts, &mut sums);
                (counts, sums)
            })
            .collect();
        for (bc, bs) in branches {
            for l in 1..=n {
                counts[l] += bc[l];
                sums[l] += bs[l];
            }
        }
    }
    Ok(HistoryStatistics {
        d,
        n,
        counts: counts.into_iter().map(BigUint::from).collect(),
        perimeter_sums: sums.into_iter().map(BigUint::from).collect(),
    })
}

fn history_walk(c: &mut Cluster, depth: usize, n: usize, counts: &mut [u128], sums: &mut [u128]) {
    counts[depth] += 1;
    sums[depth] += c.perimeter as u128;
    if depth == n {
        return;
    }
    for (_, v) in c.perimeter_pairs() {
        if depth + 1 == n {
            counts[n] += 1;
            sums[n] += c.perimeter_with(v) as u128;
        } else {
            c.add(v);
            history_walk(c, depth + 1, n, counts, sums);
            c.pop();
        }
    }
}

/// Visit every history of length `n` once, depth first with edges in
/// canonical order. Returns the number visited, X^n_{n+1}.
pub fn enumerate_histories<F>(n: usize, d: usize, caps: &EnumerationCaps, mut visitor: F) -> Result<BigUint>
where
    F: FnMut(&[Edge]),
{
    caps.histories(n, d)?;
    let grid = Grid::new(d, n);
    let mut c = Cluster::at_origin(&grid);
    let mut path = Vec::with_capacity(n);
    let mut count = 0u128;
    visit_histories(&mut c, n, &mut path, &mut count, &mut visitor);
    Ok(BigUint::from(count))
}

fn visit_histories<F: FnMut(&[Edge])>(c: &mut Cluster, n: usize, path: &mut Vec<Edge>, count: &mut u128, visitor: &mut F) {
    if path.len() == n {
        *count += 1;
        visitor(path);
        return;
    }
    let mut children = c.perimeter_pairs();
    children.sort_unstable_by_key(|&(u, v)| c.grid.edge_key(u, v));
    for (u, v) in children {
        path.push(c.grid.edge(u, v));
        c.add(v);
        visit_histories(c, n, path, count, visitor);
        c.pop();
        path.pop();
    }
}

/// Visit every commutator sequence of length `n` (edges may repeat), depth
/// first in canonical edge order. Returns the number visited.
pub fn for_each_commutator_sequence<F>(n: usize, d: usize, caps: &EnumerationCaps, mut visitor: F) -> Result<BigUint>
where
    F: FnMut(&[Edge]),
{
    caps.sequences(n, d)?;
    let grid = Grid::new(d, n);
    let mut c = Cluster::at_origin(&grid);
    let mut path = Vec::with_capacity(n);
    let mut count = 0u128;
    visit_sequences(&mut c, n, &mut path, &mut count, &mut visitor);
    Ok(BigUint::from(count))
}

fn visit_sequences<F: FnMut(&[Edge])>(c: &mut Cluster, n: usize, path: &mut Vec<Edge>, count: &mut u128, visitor: &mut F) {
    if path.len() == n {
        *count += 1;
        visitor(path);
        return;
    }
    for (u, v) in c.touching_edges_sorted() {
        path.push(c.grid.edge(u, v));
        let grew = if !c.inside[u] {
            c.add(u);
            true
        } else if !c.inside[v] {
            c.add(v);
            true
        } else {
            false
        };
        visit_sequences(c, n, path, count, visitor);
        if grew {
            c.pop();
        }
        path.pop();
    }
}

/// X^n_j for every j together with p̄_1..p̄_n.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CountTable {
    pub n: usize,
    pub d: usize,
    pub by_animal_size: BTreeMap<usize, BigUint>,
    pub pbar: Vec<BigRational>,
}

impl CountTable {
    pub fn x(&self, j: usize) -> BigUint {
        self.by_animal_size.get(&j).cloned().unwrap_or_default()
    }

    pub fn total(&self) -> BigUint {
        self.by_animal_size.values().sum()
    }

    pub fn to_json(&self) -> Value {
        let x: serde_json::Map<String, Value> =
            self.by_animal_size.iter().map(|(j, c)| (j.to_string(), Value::String(c.to_string()))).collect();
        json!({
            "n": self.n,
            "d": self.d,
            "X": x,
            "pbar": self.pbar.iter().map(rational_string).collect::<Vec<_>>(),
        })
    }

    pub fn from_json(v: &Value) -> Result<CountTable> {
        let bad = || invalid("malformed count table");
        let n = v["n"].as_u64().ok_or_else(bad)? as usize;
        let d = v["d"].as_u64().ok_or_else(bad)? as usize;
        let mut by_animal_size = BTreeMap::new();
        for (j, c) in v["X"].as_object().ok_or_else(bad)? {
            let j: usize = j.parse().map_err(|_| bad())?;
            let c: BigUint = c.as_str().ok_or_else(bad)?.parse().map_err(|_| bad())?;
            by_animal_size.insert(j, c);
        }
        let pbar = v["pbar"]
            .as_array()
            .ok_or_else(bad)?
            .iter()
            .map(|p| p.as_str().and_then(parse_rational).ok_or_else(bad))
            .collect::<Result<_>>()?;
        Ok(CountTable { n, d, by_animal_size, pbar })
    }
}

pub(crate) fn rational_string(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

pub(crate) fn parse_rational(s: &str) -> Option<BigRational> {
    let (a, b) = s.split_once('/')?;
    let den: BigInt = b.parse().ok()?;
    if den == BigInt::from(0) {
        return None;
    }
    Some(BigRational::new(a.parse().ok()?, den))
}

/// Exact X^n_j for every animal size j.
///
/// Choosing an interior edge leaves the visited set unchanged, so those
/// choices are folded into a multiplicity instead of being walked one by one;
/// every perimeter choice is still walked.
pub fn count_sequences_by_size(n: usize, d: usize, caps: &EnumerationCaps) -> Result<CountTable> {
    caps.sequences(n, d)?;
    let pbar = if n == 0 {
        Vec::new()
    } else {
        let stats = history_statistics(n - 1, d, caps)?;
        (1..=n).map(|i| stats.pbar(i)).collect()
    };
    let grid = Grid::new(d, n);
    let root = Cluster::at_origin(&grid);
    let mut x = vec![0u128; n + 2];
    if n == 0 {
        x[1] = 1;
    } else {
        let branches: Vec<Vec<u128>> = root
            .perimeter_pairs()
            .into_par_iter()
            .map(|(_, v)| {
                let mut c = root.clone();
                let mut out = vec![0u128; n + 2];
                c.add(v);
                sequence_walk(&mut c, n - 1, 1, &mut out);
                out
            })
            .collect();
        for b in branches {
            for (acc, v) in x.iter_mut().zip(b) {
                *acc += v;
            }
        }
    }
    let by_animal_size = x
        .into_iter()
        .enumerate()
        .filter(|(_, c)| *c > 0)
        .map(|(j, c)| (j, BigUint::from(c)))
        .collect();
    Ok(CountTable { n, d, by_animal_size, pbar })
}

fn sequence_walk(c: &mut Cluster, remaining: usize, mult: u128, out: &mut [u128]) {
    let j = c.sites.len();
    if remaining == 0 {
        out[j] += mult;
        return;
    }
    if remaining == 1 {
        out[j] += mult * c.interior as u128;
        out[j + 1] += mult * c.perimeter as u128;
        return;
    }
    if c.interior > 0 {
        sequence_walk(c, remaining - 1, mult * c.interior as u128, out);
    }
    for (_, v) in c.perimeter_pairs() {
        c.add(v);
        sequence_walk(c, remaining - 1, mult, out);
        c.pop();
    }
}

/// p̄_n as an exact rational.
pub fn average_perimeter(n: usize, d: usize, caps: &EnumerationCaps) -> Result<BigRational> {
    if n == 0 {
        return Err(invalid("p̄ is indexed from 1"));
    }
    Ok(history_statistics(n - 1, d, caps)?.pbar(n))
}
