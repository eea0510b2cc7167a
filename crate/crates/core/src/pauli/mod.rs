//! Exact operator algebra in the alpha basis {𝟙, σ₃, σ₁, σ₃σ₁}.
//!
//! Every alpha string is a signed product of single-site alphas, so products
//! and commutators of strings stay strings with integer coefficients and the
//! iterated commutators of the nearest-neighbour Hamiltonian can be kept
//! exactly.

mod census;
mod operator;
mod region;

pub use census::{sign_census, SignCensus};
pub use operator::{
    apply_commutant, apply_commutant_with_budget, coefficient_of, hs_norm_lower_bound, iterated_commutant,
    iterated_commutant_with_budget, series_partial_sum, ComplexOperator, PauliOperator, SeriesResult,
    DEFAULT_TERM_BUDGET,
};
pub use region::{PauliKey, Region};

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::lattice::{Edge, EdgeSequence, Site};

/// α₀ = 𝟙, α₁ = σ₃, α₂ = σ₁, α₃ = σ₃σ₁ = [[0,1],[−1,0]].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "u8", try_from = "u8")]
pub enum AlphaIndex {
    Id = 0,
    A1 = 1,
    A2 = 2,
    A3 = 3,
}

impl AlphaIndex {
    pub const ALL: [AlphaIndex; 4] = [AlphaIndex::Id, AlphaIndex::A1, AlphaIndex::A2, AlphaIndex::A3];

    /// (x, z) with the site operator equal to Z^z X^x.
    pub fn bits(self) -> (bool, bool) {
        match self {
            AlphaIndex::Id => (false, false),
            AlphaIndex::A1 => (false, true),
            AlphaIndex::A2 => (true, false),
            AlphaIndex::A3 => (true, true),
        }
    }

    pub fn from_bits(x: bool, z: bool) -> AlphaIndex {
        match (x, z) {
            (false, false) => AlphaIndex::Id,
            (false, true) => AlphaIndex::A1,
            (true, false) => AlphaIndex::A2,
            (true, true) => AlphaIndex::A3,
        }
    }

    pub fn digit(self) -> char {
        (b'0' + self as u8) as char
    }
}

impl From<AlphaIndex> for u8 {
    fn from(a: AlphaIndex) -> u8 {
        a as u8
    }
}

impl TryFrom<u8> for AlphaIndex {
    type Error = String;
    fn try_from(v: u8) -> std::result::Result<Self, String> {
        AlphaIndex::ALL.get(v as usize).copied().ok_or_else(|| format!("alpha index {v} out of range"))
    }
}

impl fmt::Display for AlphaIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AlphaIndex::Id => write!(f, "𝟙"),
            a => write!(f, "α{}", *a as u8),
        }
    }
}

/// Single-site product a·b = sign·c.
pub fn mul_alpha(a: AlphaIndex, b: AlphaIndex) -> (i8, AlphaIndex) {
    let (ax, az) = a.bits();
    let (bx, bz) = b.bits();
    let sign = if ax && bz { -1 } else { 1 };
    (sign, AlphaIndex::from_bits(ax ^ bx, az ^ bz))
}

/// A coefficient times a tensor product of alphas; identity sites are omitted.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct AlphaString {
    support: BTreeMap<Site, AlphaIndex>,
    coeff: BigInt,
}

impl AlphaString {
    pub fn new(coeff: impl Into<BigInt>, ops: impl IntoIterator<Item = (Site, AlphaIndex)>) -> AlphaString {
        let support = ops.into_iter().filter(|(_, a)| *a != AlphaIndex::Id).collect();
        AlphaString { support, coeff: coeff.into() }
    }

    pub fn single(site: Site, a: AlphaIndex) -> AlphaString {
        AlphaString::new(1, [(site, a)])
    }

    pub fn identity() -> AlphaString {
        AlphaString::new(1, [])
    }

    pub fn coeff(&self) -> &BigInt {
        &self.coeff
    }

    pub fn with_coeff(mut self, c: impl Into<BigInt>) -> AlphaString {
        self.coeff = c.into();
        self
    }

    pub fn support(&self) -> &BTreeMap<Site, AlphaIndex> {
        &self.support
    }

    pub fn at(&self, s: &Site) -> AlphaIndex {
        self.support.get(s).copied().unwrap_or(AlphaIndex::Id)
    }

    /// Same operators, ignoring the coefficient.
    pub fn same_pattern(&self, other: &AlphaString) -> bool {
        self.support == other.support
    }

    pub fn mul(&self, other: &AlphaString) -> AlphaString {
        let mut sign = 1i8;
        let mut support = self.support.clone();
        for (s, &b) in &other.support {
            let a = self.at(s);
            let (sg, c) = mul_alpha(a, b);
            sign *= sg;
            if c == AlphaIndex::Id {
                support.remove(s);
            } else {
                support.insert(*s, c);
            }
        }
        let coeff = &self.coeff * &other.coeff * sign as i32;
        AlphaString { support, coeff }
    }

    pub fn anticommutes(&self, other: &AlphaString) -> bool {
        let mut odd = false;
        for (s, &b) in &other.support {
            let a = self.at(s);
            odd ^= a != AlphaIndex::Id && a != b;
        }
        odd
    }
}

impl fmt::Debug for AlphaString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for AlphaString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.coeff)?;
        if self.support.is_empty() {
            return write!(f, "·𝟙");
        }
        for (s, a) in &self.support {
            write!(f, "·{a}@{s}")?;
        }
        Ok(())
    }
}

/// [P, Q]: either zero or the single string 2·P·Q.
pub fn string_commutator(p: &AlphaString, q: &AlphaString) -> Option<AlphaString> {
    if p.coeff.is_zero() || q.coeff.is_zero() || !p.anticommutes(q) {
        return None;
    }
    let mut pq = p.mul(q);
    pq.coeff *= 2;
    Some(pq)
}

/// H_e = α₁ ⊗ α₂ with α₁ on the left (horizontal) or upper (vertical) site.
pub fn interaction_term(e: &Edge) -> Result<AlphaString> {
    let (first, second) = match (e.dim(), e.axis()) {
        (1, _) | (2, 0) => (e.a(), e.b()),
        (2, 1) => (e.b(), e.a()),
        (d, _) => return Err(invalid(format!("no interaction defined for {d}-dimensional edge {e:?}"))),
    };
    Ok(AlphaString::new(1, [(first, AlphaIndex::A1), (second, AlphaIndex::A2)]))
}

/// The iterated commutator [H_n, ... [H_1, A]] for exactly this edge order.
pub fn sequence_operator(seq: &EdgeSequence, a: &AlphaString) -> Result<Option<AlphaString>> {
    if !seq.is_commutator_sequence() {
        return Err(invalid("sequence_operator needs a commutator sequence"));
    }
    let origin = Site::origin(seq.dim())?;
    if a.support.keys().any(|s| *s != origin) {
        return Err(invalid("the initial operator must be supported at the origin"));
    }
    let mut cur = a.clone();
    for e in seq.edges() {
        match string_commutator(&interaction_term(e)?, &cur) {
            Some(next) => cur = next,
            None => return Ok(None),
        }
    }
    Ok(Some(cur))
}

impl AlphaString {
    pub fn is_identity(&self) -> bool {
        self.support.is_empty() && self.coeff.is_one()
    }
}
