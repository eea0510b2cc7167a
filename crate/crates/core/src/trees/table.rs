//! What one more commutator with an edge does, given how often the edges
//! around it have been used.
//!
//! Edge a joins x₁ to x₂ (x₂ right of x₁, or below it). Before a is applied,
//! the operator at x₁ and x₂ depends only on the parities of a, b+c, d, e and
//! f+g. The printed table lists the 32 cases; `verify_table` recomputes each
//! from explicit commutators in both orientations.

use std::collections::VecDeque;

use rustc_hash::FxHashMap;
use serde::{Deserialize, Serialize};

use crate::lattice::{Edge, Site};
use crate::pauli::{interaction_term, string_commutator, AlphaIndex, AlphaString, PauliKey, Region};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    fn of(bit: bool) -> Parity {
        if bit {
            Parity::Odd
        } else {
            Parity::Even
        }
    }

    fn is_odd(self) -> bool {
        self == Parity::Odd
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ParityVector {
    pub a: Parity,
    pub bc: Parity,
    pub d: Parity,
    pub e: Parity,
    pub fg: Parity,
}

impl ParityVector {
    /// Bits a, bc, d, e, fg from low to high.
    fn bits(&self) -> u8 {
        [self.a, self.bc, self.d, self.e, self.fg].iter().enumerate().map(|(i, p)| (p.is_odd() as u8) << i).sum()
    }

    fn from_bits(b: u8) -> ParityVector {
        let p = |i: u8| Parity::of(b >> i & 1 == 1);
        ParityVector { a: p(0), bc: p(1), d: p(2), e: p(3), fg: p(4) }
    }
}

/// Operators at x₁ and x₂ before and after a; `None` after means the
/// commutator vanishes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Transition {
    pub x1: AlphaIndex,
    pub x2: AlphaIndex,
    pub x1_after: Option<AlphaIndex>,
    pub x2_after: Option<AlphaIndex>,
    pub multiplier: i8,
}

// Parities a, bc, d, e, fg; operators before; operators after (z = zero); multiplier.
const PRINTED: [&str; 32] = [
    "00000 00 zz 0",
    "10000 10 zz 0",
    "01000 20 32 2",
    "00100 10 zz 0",
    "00010 02 zz 0",
    "00001 01 13 -2",
    "11000 32 20 2",
    "10100 02 zz 0",
    "10010 10 zz 0",
    "10001 13 01 -2",
    "01100 30 22 2",
    "01010 22 30 2",
    "01001 21 zz 0",
    "00110 12 zz 0",
    "00101 11 03 -2",
    "00011 03 11 -2",
    "11100 22 30 2",
    "11010 30 22 2",
    "11001 33 zz 0",
    "10110 00 zz 0",
    "10101 03 11 -2",
    "10011 11 03 -2",
    "01110 32 20 2",
    "01101 31 zz 0",
    "01011 23 zz 0",
    "00111 13 01 -2",
    "11110 20 32 2",
    "11101 23 zz 0",
    "11011 31 zz 0",
    "10111 01 13 -2",
    "01111 33 zz 0",
    "11111 21 zz 0",
];

/// The table as printed, in its row order.
pub fn printed_table() -> Vec<(ParityVector, Transition)> {
    let alpha = |c: char| AlphaIndex::try_from(c.to_digit(10).unwrap() as u8).unwrap();
    let after = |c: char| (c != 'z').then(|| alpha(c));
    PRINTED
        .iter()
        .map(|row| {
            let parts: Vec<&str> = row.split(' ').collect();
            let bits = parts[0].chars().enumerate().map(|(i, c)| ((c == '1') as u8) << i).sum();
            let before: Vec<char> = parts[1].chars().collect();
            let aft: Vec<char> = parts[2].chars().collect();
            let t = Transition {
                x1: alpha(before[0]),
                x2: alpha(before[1]),
                x1_after: after(aft[0]),
                x2_after: after(aft[1]),
                multiplier: parts[3].parse().unwrap(),
            };
            (ParityVector::from_bits(bits), t)
        })
        .collect()
}

/// Table lookup.
pub fn parity_transition(p: ParityVector) -> Transition {
    printed_table().into_iter().find(|(q, _)| *q == p).map(|(_, t)| t).unwrap()
}

/// 0 when the b+c and f+g parities agree, otherwise +2 for even f+g and −2
/// for odd.
pub fn multiplier_rule(bc: Parity, fg: Parity) -> i8 {
    match (bc, fg) {
        _ if bc == fg => 0,
        (_, Parity::Even) => 2,
        _ => -2,
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct RowCheck {
    pub row: usize,
    pub parities: ParityVector,
    pub printed: Transition,
    /// Absent when no nonzero commutator sequence reaches these parities.
    pub horizontal: Option<Transition>,
    pub vertical: Option<Transition>,
    /// Edge labels applied, in order, to the starting string.
    pub witness_horizontal: Option<String>,
    pub witness_vertical: Option<String>,
    /// Computed multipliers agree with `multiplier_rule`.
    pub rule_holds: bool,
    /// Columns where a computation differs from the printed row.
    pub mismatches: Vec<String>,
    pub pass: bool,
}

/// Edge a with its neighbours b–g, laid out as in the horizontal or vertical
/// figure, inside a small region that contains the origin but not x₁ or x₂.
struct Neighborhood {
    region: Region,
    x1: Site,
    x2: Site,
    /// Labels a..g in order.
    edges: [Edge; 7],
}

impl Neighborhood {
    fn build(x1: (i32, i32), x2: (i32, i32), far: [(i32, i32); 6], region: Region) -> Neighborhood {
        let s = |p: (i32, i32)| Site::xy(p.0, p.1);
        // b, c, d touch x₁; e, f, g touch x₂.
        let ends = [x1, x1, x1, x2, x2, x2];
        let mut edges = [Edge::new(s(x1), s(x2)).unwrap(); 7];
        for i in 0..6 {
            edges[i + 1] = Edge::new(s(ends[i]), s(far[i])).unwrap();
        }
        Neighborhood { region, x1: s(x1), x2: s(x2), edges }
    }

    fn horizontal() -> Neighborhood {
        // b above x₁, c left of x₁, d below x₁; e above x₂, f right of x₂, g below x₂.
        Neighborhood::build((2, 2), (3, 2), [(2, 3), (1, 2), (2, 1), (3, 3), (4, 2), (3, 1)], Region::rect(0, 4, 0, 3).unwrap())
    }

    fn vertical() -> Neighborhood {
        // b left of x₁, c above x₁, d right of x₁; e left of x₂, f below x₂, g right of x₂.
        Neighborhood::build((2, 3), (2, 2), [(1, 3), (2, 4), (3, 3), (1, 2), (2, 1), (3, 2)], Region::rect(0, 3, 0, 4).unwrap())
    }

    fn far_sites(&self) -> Vec<Site> {
        self.edges[1..].iter().map(|e| if e.touches(&self.x1) { e.other(&self.x1) } else { e.other(&self.x2) }.unwrap()).collect()
    }
}

const LABELS: [char; 7] = ['a', 'b', 'c', 'd', 'e', 'f', 'g'];
/// Which parity bit each label toggles.
const PARITY_BIT: [u8; 7] = [0, 1, 1, 2, 3, 4, 4];

/// Shortest label sequence, with its starting string, reaching each parity
/// vector while keeping every commutator nonzero. The start is any string
/// on the six outer sites, identity at x₁ and x₂.
fn witnesses(nb: &Neighborhood) -> FxHashMap<u8, (PauliKey, Vec<usize>)> {
    let r = &nb.region;
    let hs: Vec<PauliKey> = nb.edges.iter().map(|e| r.key_of(&interaction_term(e).unwrap()).unwrap()).collect();
    let far = nb.far_sites();
    type State = (PauliKey, u8);
    let mut prev: FxHashMap<State, Option<(State, usize)>> = FxHashMap::default();
    let mut queue = VecDeque::new();
    for env in 0..4usize.pow(6) {
        let ops = far.iter().enumerate().map(|(i, s)| (*s, AlphaIndex::try_from((env >> (2 * i) & 3) as u8).unwrap()));
        let key = r.key_of(&AlphaString::new(1, ops)).unwrap();
        prev.insert((key, 0), None);
        queue.push_back((key, 0u8));
    }
    let mut found: FxHashMap<u8, State> = FxHashMap::default();
    while let Some(st) = queue.pop_front() {
        found.entry(st.1).or_insert(st);
        for (i, &h) in hs.iter().enumerate() {
            if !h.anticommutes(st.0) {
                continue;
            }
            let next = (h.xor(st.0), st.1 ^ 1 << PARITY_BIT[i]);
            if !prev.contains_key(&next) {
                prev.insert(next, Some((st, i)));
                queue.push_back(next);
            }
        }
    }
    found
        .into_iter()
        .map(|(pv, mut st)| {
            let mut labels = vec![];
            while let Some((p, i)) = prev[&st] {
                labels.push(i);
                st = p;
            }
            labels.reverse();
            (pv, (st.0, labels))
        })
        .collect()
}

fn apply_a(nb: &Neighborhood, cur: &AlphaString) -> Transition {
    let h = interaction_term(&nb.edges[0]).unwrap();
    let (x1, x2) = (cur.at(&nb.x1), cur.at(&nb.x2));
    match string_commutator(&h, cur) {
        Some(next) => {
            let m = next.coeff() / cur.coeff();
            Transition {
                x1,
                x2,
                x1_after: Some(next.at(&nb.x1)),
                x2_after: Some(next.at(&nb.x2)),
                multiplier: i8::try_from(m).unwrap(),
            }
        }
        None => Transition { x1, x2, x1_after: None, x2_after: None, multiplier: 0 },
    }
}

/// Recompute one row from its witness, if the parities are reachable.
fn compute_row(nb: &Neighborhood, found: &FxHashMap<u8, (PauliKey, Vec<usize>)>, p: ParityVector) -> Option<(Transition, String)> {
    let (start, labels) = found.get(&p.bits())?;
    let mut cur = nb.region.string_of(*start, 1);
    for &i in labels {
        cur = string_commutator(&interaction_term(&nb.edges[i]).unwrap(), &cur).expect("witness stays nonzero");
    }
    let w: Vec<String> = labels.iter().map(|&i| LABELS[i].to_string()).collect();
    Some((apply_a(nb, &cur), w.join(" ")))
}

/// Rebuild all 32 rows with explicit commutators and compare with the print.
pub fn verify_table() -> Vec<RowCheck> {
    let nbs = [Neighborhood::horizontal(), Neighborhood::vertical()];
    let found: Vec<_> = nbs.iter().map(witnesses).collect();
    printed_table()
        .into_iter()
        .enumerate()
        .map(|(i, (p, printed))| {
            let h = compute_row(&nbs[0], &found[0], p);
            let v = compute_row(&nbs[1], &found[1], p);
            let mut mismatches = vec![];
            for (name, t) in [("horizontal", &h), ("vertical", &v)] {
                let Some((t, _)) = t else {
                    mismatches.push(format!("{name} unreachable"));
                    continue;
                };
                let cols = [
                    ("x1 before", t.x1 == printed.x1),
                    ("x2 before", t.x2 == printed.x2),
                    ("x1 after", t.x1_after == printed.x1_after),
                    ("x2 after", t.x2_after == printed.x2_after),
                    ("multiplier", t.multiplier == printed.multiplier),
                ];
                mismatches.extend(cols.iter().filter(|c| !c.1).map(|c| format!("{name} {}", c.0)));
            }
            let rule = multiplier_rule(p.bc, p.fg);
            let rule_holds = [&h, &v].iter().all(|t| t.as_ref().is_some_and(|(t, _)| t.multiplier == rule));
            RowCheck {
                row: i + 1,
                parities: p,
                printed,
                horizontal: h.as_ref().map(|(t, _)| *t),
                vertical: v.as_ref().map(|(t, _)| *t),
                witness_horizontal: h.map(|(_, w)| w),
                witness_vertical: v.map(|(_, w)| w),
                rule_holds,
                pass: mismatches.is_empty(),
                mismatches,
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pauli::AlphaIndex::*;

    fn pv(bits: &str) -> ParityVector {
        ParityVector::from_bits(bits.chars().enumerate().map(|(i, c)| ((c == '1') as u8) << i).sum())
    }

    #[test]
    fn lookup_examples() {
        assert_eq!(
            parity_transition(pv("01000")),
            Transition { x1: A2, x2: Id, x1_after: Some(A3), x2_after: Some(A2), multiplier: 2 }
        );
        assert_eq!(parity_transition(pv("00000")).multiplier, 0);
        assert_eq!(
            parity_transition(pv("00001")),
            Transition { x1: Id, x2: A1, x1_after: Some(A1), x2_after: Some(A3), multiplier: -2 }
        );
    }

    #[test]
    fn printed_rows_are_distinct_and_follow_the_rule() {
        let t = printed_table();
        let mut seen: Vec<u8> = t.iter().map(|(p, _)| p.bits()).collect();
        seen.sort();
        seen.dedup();
        assert_eq!(seen.len(), 32);
        assert!(t.iter().all(|(p, r)| r.multiplier == multiplier_rule(p.bc, p.fg)));
    }

    #[test]
    fn row_three_by_one_edge() {
        let rows = verify_table();
        assert_eq!(rows[2].witness_horizontal.as_deref(), Some("b"));
        assert_eq!(rows[0].witness_horizontal.as_deref(), Some(""));
        assert!(rows[0].pass && rows[2].pass);
        assert!(rows.iter().all(|r| r.rule_holds));
    }
}
