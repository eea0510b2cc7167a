use std::collections::BTreeMap;

use num_bigint::BigInt;
use serde::Serialize;

use super::RootedTree;
use crate::error::{invalid, Result};
use crate::lattice::Site;
use crate::pauli::{AlphaIndex, AlphaString};

/// The alpha pattern every construction of a right/down tree produces.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TargetPattern {
    /// Non-identity sites only.
    pub f: BTreeMap<Site, AlphaIndex>,
    /// Edges of the source tree; the expected coefficient is 2ⁿ.
    pub n: usize,
}

impl TargetPattern {
    pub fn at(&self, s: &Site) -> AlphaIndex {
        self.f.get(s).copied().unwrap_or(AlphaIndex::Id)
    }

    /// 2ⁿ ⊗ α_f(x).
    pub fn to_alpha_string(&self) -> AlphaString {
        AlphaString::new(BigInt::from(2).pow(self.n as u32), self.f.iter().map(|(s, a)| (*s, *a)))
    }
}

/// α₃ at the root and at degree-2 vertices, α₂ at branch vertices and at the
/// other leaves, identity off the tree.
pub fn target_string(t: &RootedTree) -> Result<TargetPattern> {
    let mut f = BTreeMap::new();
    for (v, d) in t.degrees() {
        let a = match d {
            _ if v == t.root() => AlphaIndex::A3,
            2 => AlphaIndex::A3,
            1 | 3 => AlphaIndex::A2,
            0 => continue,
            _ => return Err(invalid(format!("vertex {v} has degree {d}; the pattern covers degrees 1 to 3"))),
        };
        f.insert(v, a);
    }
    Ok(TargetPattern { f, n: t.len() })
}
