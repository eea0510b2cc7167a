//! Sites, edges and lattice animals on ℤ^d, plus the exact counting of
//! commutator sequences and lattice-animal histories built on them.

mod bounds;
pub(crate) mod count;
mod grid;
mod sequence;

pub use bounds::{
    ln_locality_bound_1d, locality_bound_1d, locality_threshold_and_tail, z_upper_bound,
    LOCALITY_RATE, TAIL_PREFACTOR, THRESHOLD_RATE,
};
pub use count::{
    average_perimeter, count_sequences_by_size, enumerate_histories, for_each_commutator_sequence,
    history_statistics, CountTable, EnumerationCaps, HistoryStatistics,
};
pub use sequence::{animal_of, classify_sequence, EdgeSequence, SequenceClass};

use std::collections::{BTreeSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

/// A lattice point. Coordinates past the dimension are kept at zero so that
/// the derived ordering is the lexicographic order on the first `d` entries.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Site {
    c: [i32; 3],
    d: u8,
}

impl Site {
    pub fn new(coords: &[i32]) -> Result<Site> {
        let d = coords.len();
        if !(1..=3).contains(&d) {
            return Err(Error::Dimension(d));
        }
        let mut c = [0; 3];
        c[..d].copy_from_slice(coords);
        Ok(Site { c, d: d as u8 })
    }

    pub fn origin(d: usize) -> Result<Site> {
        if !(1..=3).contains(&d) {
            return Err(Error::Dimension(d));
        }
        Ok(Site { c: [0; 3], d: d as u8 })
    }

    pub const fn x(x: i32) -> Site {
        Site { c: [x, 0, 0], d: 1 }
    }

    pub const fn xy(x: i32, y: i32) -> Site {
        Site { c: [x, y, 0], d: 2 }
    }

    pub const fn xyz(x: i32, y: i32, z: i32) -> Site {
        Site { c: [x, y, z], d: 3 }
    }

    pub fn dim(&self) -> usize {
        self.d as usize
    }

    pub fn coords(&self) -> &[i32] {
        &self.c[..self.d as usize]
    }

    pub fn coord(&self, axis: usize) -> i32 {
        self.c[axis]
    }

    pub fn is_origin(&self) -> bool {
        self.c == [0, 0, 0]
    }

    pub fn l1_distance(&self, other: &Site) -> u64 {
        (0..3).map(|i| (self.c[i] as i64 - other.c[i] as i64).unsigned_abs()).sum()
    }

    pub fn shifted(&self, axis: usize, delta: i32) -> Site {
        let mut s = *self;
        s.c[axis] += delta;
        s
    }
}

impl fmt::Debug for Site {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Site {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.coords().iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

impl Serialize for Site {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.coords().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Site {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = Vec::<i32>::deserialize(d)?;
        Site::new(&v).map_err(serde::de::Error::custom)
    }
}

/// The 2d nearest neighbours of `s`, ordered +x, −x, +y, −y, +z, −z.
pub fn neighbors(s: Site, d: usize) -> Result<Vec<Site>> {
    if !(1..=3).contains(&d) {
        return Err(Error::Dimension(d));
    }
    if s.dim() != d {
        return Err(invalid(format!("site {s} is not {d}-dimensional")));
    }
    Ok((0..d).flat_map(|a| [s.shifted(a, 1), s.shifted(a, -1)]).collect())
}

/// A nearest-neighbour pair, smaller endpoint first.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Edge {
    a: Site,
    b: Site,
}

impl Edge {
    pub fn new(x: Site, y: Site) -> Result<Edge> {
        if x.d != y.d || x.l1_distance(&y) != 1 {
            return Err(invalid(format!("{x} and {y} are not nearest neighbours")));
        }
        Ok(if x < y { Edge { a: x, b: y } } else { Edge { a: y, b: x } })
    }

    pub fn a(&self) -> Site {
        self.a
    }

    pub fn b(&self) -> Site {
        self.b
    }

    pub fn dim(&self) -> usize {
        self.a.dim()
    }

    /// The coordinate axis the edge runs along.
    pub fn axis(&self) -> usize {
        (0..3).find(|&i| self.a.c[i] != self.b.c[i]).unwrap()
    }

    pub fn touches(&self, s: &Site) -> bool {
        self.a == *s || self.b == *s
    }

    /// The endpoint that is not `s`, if `s` is an endpoint.
    pub fn other(&self, s: &Site) -> Option<Site> {
        if self.a == *s {
            Some(self.b)
        } else if self.b == *s {
            Some(self.a)
        } else {
            None
        }
    }
}

impl fmt::Debug for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{},{}}}", self.a, self.b)
    }
}

impl Serialize for Edge {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        (self.a, self.b).serialize(s)
    }
}

impl<'de> Deserialize<'de> for Edge {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let (x, y) = <(Site, Site)>::deserialize(d)?;
        Edge::new(x, y).map_err(serde::de::Error::custom)
    }
}

/// A finite connected set of sites.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LatticeAnimal {
    sites: BTreeSet<Site>,
}

impl LatticeAnimal {
    pub fn new(sites: impl IntoIterator<Item = Site>) -> Result<LatticeAnimal> {
        let sites: BTreeSet<Site> = sites.into_iter().collect();
        let Some(first) = sites.iter().next().copied() else {
            return Err(invalid("empty lattice animal"));
        };
        let d = first.dim();
        if sites.iter().any(|s| s.dim() != d) {
            return Err(invalid("mixed dimensions in lattice animal"));
        }
        let mut seen = BTreeSet::from([first]);
        let mut queue = VecDeque::from([first]);
        while let Some(s) = queue.pop_front() {
            for t in neighbors(s, d)? {
                if sites.contains(&t) && seen.insert(t) {
                    queue.push_back(t);
                }
            }
        }
        if seen.len() != sites.len() {
            return Err(invalid("lattice animal is not connected"));
        }
        Ok(LatticeAnimal { sites })
    }

    pub fn origin(d: usize) -> Result<LatticeAnimal> {
        Ok(LatticeAnimal { sites: BTreeSet::from([Site::origin(d)?]) })
    }

    pub fn sites(&self) -> &BTreeSet<Site> {
        &self.sites
    }

    pub fn len(&self) -> usize {
        self.sites.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn dim(&self) -> usize {
        self.sites.iter().next().unwrap().dim()
    }

    pub fn contains(&self, s: &Site) -> bool {
        self.sites.contains(s)
    }

    pub fn interior_edges(&self) -> BTreeSet<Edge> {
        let d = self.dim();
        let mut out = BTreeSet::new();
        for &s in &self.sites {
            for a in 0..d {
                let t = s.shifted(a, 1);
                if self.sites.contains(&t) {
                    out.insert(Edge { a: s, b: t });
                }
            }
        }
        out
    }

    pub fn perimeter_edges(&self) -> BTreeSet<Edge> {
        let d = self.dim();
        let mut out = BTreeSet::new();
        for &s in &self.sites {
            for t in neighbors(s, d).unwrap() {
                if !self.sites.contains(&t) {
                    out.insert(Edge::new(s, t).unwrap());
                }
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn animal(pts: &[(i32, i32)]) -> LatticeAnimal {
        LatticeAnimal::new(pts.iter().map(|&(x, y)| Site::xy(x, y))).unwrap()
    }

    #[test]
    fn neighbour_order() {
        assert_eq!(neighbors(Site::x(0), 1).unwrap(), vec![Site::x(1), Site::x(-1)]);
        assert_eq!(
            neighbors(Site::xy(2, 3), 2).unwrap(),
            vec![Site::xy(3, 3), Site::xy(1, 3), Site::xy(2, 4), Site::xy(2, 2)]
        );
        assert_eq!(neighbors(Site::xy(0, 0), 2).unwrap().len(), 4);
        assert!(neighbors(Site::xy(0, 0), 4).is_err());
    }

    #[test]
    fn edges_are_canonical() {
        let e = Edge::new(Site::xy(1, 0), Site::xy(0, 0)).unwrap();
        assert_eq!(e.a(), Site::xy(0, 0));
        assert_eq!(e.axis(), 0);
        assert!(Edge::new(Site::xy(0, 0), Site::xy(1, 1)).is_err());
        assert!(Edge::new(Site::xy(0, 0), Site::xy(0, 0)).is_err());
    }

    #[test]
    fn small_animals() {
        assert!(animal(&[(0, 0)]).interior_edges().is_empty());
        assert_eq!(animal(&[(0, 0), (1, 0)]).interior_edges().len(), 1);
        assert_eq!(animal(&[(0, 0), (1, 0), (0, 1), (1, 1)]).interior_edges().len(), 4);
        assert_eq!(animal(&[(0, 0)]).perimeter_edges().len(), 4);
        assert_eq!(animal(&[(0, 0), (1, 0)]).perimeter_edges().len(), 6);
        assert_eq!(animal(&[(0, 0), (1, 0), (2, 0)]).perimeter_edges().len(), 8);
        assert_eq!(animal(&[(0, 0), (1, 0), (1, 1)]).perimeter_edges().len(), 8);
        assert!(LatticeAnimal::new([Site::xy(0, 0), Site::xy(2, 0)]).is_err());
        assert!(LatticeAnimal::new([]).is_err());
    }

    #[test]
    fn site_json() {
        let s: Site = serde_json::from_str("[2,-3]").unwrap();
        assert_eq!(s, Site::xy(2, -3));
        assert_eq!(serde_json::to_string(&s).unwrap(), "[2,-3]");
        let e: Edge = serde_json::from_str("[[1,0],[0,0]]").unwrap();
        assert_eq!(serde_json::to_string(&e).unwrap(), "[[0,0],[1,0]]");
    }
}
