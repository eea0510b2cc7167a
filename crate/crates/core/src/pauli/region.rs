use std::fmt;

use serde::{Deserialize, Serialize};

use super::{interaction_term, AlphaIndex, AlphaString};
use crate::error::{invalid, Error, Result};
use crate::lattice::{Edge, Site};

/// An alpha string without its coefficient: bit k of `x`/`z` belongs to the
/// k-th site of the region.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PauliKey {
    pub x: u64,
    pub z: u64,
}

impl PauliKey {
    pub const IDENTITY: PauliKey = PauliKey { x: 0, z: 0 };

    #[inline]
    pub fn anticommutes(self, o: PauliKey) -> bool {
        ((self.x & o.z).count_ones() + (o.x & self.z).count_ones()) & 1 == 1
    }

    /// self·o = sign · (self ^ o).
    #[inline]
    pub fn mul_sign(self, o: PauliKey) -> i32 {
        1 - 2 * ((self.x & o.z).count_ones() & 1) as i32
    }

    #[inline]
    pub fn xor(self, o: PauliKey) -> PauliKey {
        PauliKey { x: self.x ^ o.x, z: self.z ^ o.z }
    }

    pub fn at(self, k: usize) -> AlphaIndex {
        AlphaIndex::from_bits(self.x >> k & 1 == 1, self.z >> k & 1 == 1)
    }

    pub fn support_mask(self) -> u64 {
        self.x | self.z
    }

    pub fn weight(self) -> u32 {
        self.support_mask().count_ones()
    }
}

/// A rectangle of ℤ^d (d = 1 or 2) containing the origin.
///
/// Sites are numbered row-major: index = (y − y₀)·width + (x − x₀). The dense
/// oracle uses the same order, first site as the most significant tensor factor.
#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RegionSpec", into = "RegionSpec")]
pub struct Region {
    d: usize,
    lo: [i32; 2],
    hi: [i32; 2],
    edges: Vec<Edge>,
    terms: Vec<PauliKey>,
}

#[derive(Serialize, Deserialize)]
struct RegionSpec {
    lo: Vec<i32>,
    hi: Vec<i32>,
}

impl TryFrom<RegionSpec> for Region {
    type Error = Error;
    fn try_from(r: RegionSpec) -> Result<Region> {
        match (r.lo.as_slice(), r.hi.as_slice()) {
            ([a], [b]) => Region::chain(*a, *b),
            ([a, c], [b, d]) => Region::rect(*a, *b, *c, *d),
            _ => Err(invalid("region corners must both have length 1 or 2")),
        }
    }
}

impl From<Region> for RegionSpec {
    fn from(r: Region) -> RegionSpec {
        RegionSpec { lo: r.lo[..r.d].to_vec(), hi: r.hi[..r.d].to_vec() }
    }
}

pub const MAX_REGION_SITES: usize = 64;

impl Region {
    /// The chain x₀..=x₁.
    pub fn chain(x0: i32, x1: i32) -> Result<Region> {
        Region::build(1, [x0, 0], [x1, 0])
    }

    /// The rectangle [x₀, x₁] × [y₀, y₁].
    pub fn rect(x0: i32, x1: i32, y0: i32, y1: i32) -> Result<Region> {
        Region::build(2, [x0, y0], [x1, y1])
    }

    /// A rectangle `width` × `height` whose lower-left corner is the origin.
    pub fn with_origin_corner(width: i32, height: i32) -> Result<Region> {
        Region::rect(0, width - 1, 0, height - 1)
    }

    fn build(d: usize, lo: [i32; 2], hi: [i32; 2]) -> Result<Region> {
        if (0..d).any(|i| lo[i] > 0 || hi[i] < 0) {
            return Err(invalid(format!("region {lo:?}..{hi:?} does not contain the origin")));
        }
        let n: i64 = (0..d).map(|i| (hi[i] - lo[i] + 1) as i64).product();
        if n as usize > MAX_REGION_SITES {
            return Err(Error::Cap { what: "region sites", got: n as u64, cap: MAX_REGION_SITES as u64 });
        }
        let mut r = Region { d, lo, hi, edges: Vec::new(), terms: Vec::new() };
        let mut edges = Vec::new();
        for k in 0..r.num_sites() {
            let s = r.site(k);
            for axis in 0..d {
                let t = s.shifted(axis, 1);
                if r.contains(&t) {
                    edges.push(Edge::new(s, t).unwrap());
                }
            }
        }
        edges.sort();
        r.terms = edges.iter().map(|e| r.key_of(&interaction_term(e).unwrap()).unwrap()).collect();
        r.edges = edges;
        Ok(r)
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn width(&self) -> usize {
        (self.hi[0] - self.lo[0] + 1) as usize
    }

    pub fn height(&self) -> usize {
        if self.d == 1 {
            1
        } else {
            (self.hi[1] - self.lo[1] + 1) as usize
        }
    }

    pub fn num_sites(&self) -> usize {
        self.width() * self.height()
    }

    pub fn contains(&self, s: &Site) -> bool {
        s.dim() == self.d && (0..self.d).all(|i| (self.lo[i]..=self.hi[i]).contains(&s.coord(i)))
    }

    pub fn index(&self, s: &Site) -> Option<usize> {
        if !self.contains(s) {
            return None;
        }
        let x = (s.coord(0) - self.lo[0]) as usize;
        let y = if self.d == 1 { 0 } else { (s.coord(1) - self.lo[1]) as usize };
        Some(y * self.width() + x)
    }

    pub fn site(&self, k: usize) -> Site {
        let (x, y) = ((k % self.width()) as i32 + self.lo[0], (k / self.width()) as i32 + self.lo[1]);
        if self.d == 1 {
            Site::x(x)
        } else {
            Site::xy(x, y)
        }
    }

    pub fn sites(&self) -> impl Iterator<Item = Site> + '_ {
        (0..self.num_sites()).map(|k| self.site(k))
    }

    /// Edges with both endpoints inside, in canonical order.
    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    /// Packed interaction terms, parallel to `edges()`.
    pub fn interaction_keys(&self) -> &[PauliKey] {
        &self.terms
    }

    pub fn key_of(&self, s: &AlphaString) -> Result<PauliKey> {
        let mut key = PauliKey::default();
        for (site, a) in s.support() {
            let k = self.index(site).ok_or_else(|| Error::OutsideRegion(site.to_string()))?;
            let (x, z) = a.bits();
            key.x |= (x as u64) << k;
            key.z |= (z as u64) << k;
        }
        Ok(key)
    }

    pub fn string_of(&self, key: PauliKey, coeff: impl Into<num_bigint::BigInt>) -> AlphaString {
        AlphaString::new(coeff, (0..self.num_sites()).map(|k| (self.site(k), key.at(k))))
    }

    /// Alpha indices in site order, e.g. "0213".
    pub fn key_string(&self, key: PauliKey) -> String {
        (0..self.num_sites()).map(|k| key.at(k).digit()).collect()
    }

    pub fn parse_key(&self, f: &str) -> Result<PauliKey> {
        if f.len() != self.num_sites() {
            return Err(invalid(format!("pattern {f:?} has {} digits, region has {} sites", f.len(), self.num_sites())));
        }
        let mut key = PauliKey::default();
        for (k, ch) in f.chars().enumerate() {
            let a = ch
                .to_digit(10)
                .and_then(|v| AlphaIndex::try_from(v as u8).ok())
                .ok_or_else(|| invalid(format!("bad alpha digit {ch:?}")))?;
            let (x, z) = a.bits();
            key.x |= (x as u64) << k;
            key.z |= (z as u64) << k;
        }
        Ok(key)
    }
}

impl fmt::Debug for Region {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.d == 1 {
            write!(f, "Region[{}..={}]", self.lo[0], self.hi[0])
        } else {
            write!(f, "Region[{}..={}]x[{}..={}]", self.lo[0], self.hi[0], self.lo[1], self.hi[1])
        }
    }
}
