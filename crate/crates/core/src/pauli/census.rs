use num_bigint::{BigInt, BigUint};
use num_traits::{Signed, Zero};
use rustc_hash::FxHashMap;

use super::{AlphaString, PauliKey, Region};
use crate::error::{invalid, Result};

/// How many edge sequences of a given length turn A into ± the target string.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SignCensus {
    pub n: usize,
    /// Sequences whose operator is a positive multiple of the target.
    pub positive: BigUint,
    pub negative: BigUint,
    /// Coefficient of the target in 𝒞ⁿ(A): 2ⁿ|c_A|(positive − negative).
    pub coefficient: BigInt,
}

/// Count, by sign, the length-`n` edge sequences in `region` whose iterated
/// commutator applied to `a` is a multiple of `target`.
///
/// Sequences with a nonzero operator are automatically commutator sequences,
/// so this is exhaustive over them. The count is a dynamic program over
/// strings; a string more than 2·(steps left) sites away from the target is
/// dropped because one commutator changes at most two sites.
pub fn sign_census(a: &AlphaString, n: usize, region: &Region, target: &AlphaString) -> Result<SignCensus> {
    if a.coeff().is_zero() {
        return Err(invalid("initial string has zero coefficient"));
    }
    let t = region.key_of(target)?;
    let hs = region.interaction_keys();
    let mut states: FxHashMap<PauliKey, (u128, u128)> = FxHashMap::default();
    let start = if a.coeff().is_positive() { (1, 0) } else { (0, 1) };
    states.insert(region.key_of(a)?, start);
    for step in 0..n {
        let left = (n - step - 1) as u32;
        let mut next: FxHashMap<PauliKey, (u128, u128)> = FxHashMap::default();
        for (&k, &(p, m)) in &states {
            for &h in hs {
                if !h.anticommutes(k) {
                    continue;
                }
                let nk = h.xor(k);
                if nk.xor(t).weight() > 2 * left {
                    continue;
                }
                let e = next.entry(nk).or_default();
                if h.mul_sign(k) > 0 {
                    e.0 += p;
                    e.1 += m;
                } else {
                    e.0 += m;
                    e.1 += p;
                }
            }
        }
        states = next;
    }
    let (p, m) = states.get(&t).copied().unwrap_or_default();
    let coefficient = BigInt::from(2).pow(n as u32) * a.coeff().abs() * (BigInt::from(p) - BigInt::from(m));
    Ok(SignCensus { n, positive: p.into(), negative: m.into(), coefficient })
}
