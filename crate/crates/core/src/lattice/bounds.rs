use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use statrs::function::gamma::ln_gamma;
use std::f64::consts::E;

use crate::error::{invalid, Result};

/// Rate constant 480e of the one-dimensional commutator bound.
pub const LOCALITY_RATE: f64 = 480.0 * E;
/// Threshold constant 480e² relating the locality radius to |z|.
pub const THRESHOLD_RATE: f64 = 480.0 * E * E;
/// Prefactor 15/2 in front of both the bound and the tail.
pub const TAIL_PREFACTOR: f64 = 7.5;

/// (2d)^{n−1} · p̄_1⋯p̄_{j−1} · j^{n−j+1}, an upper bound on X^n_j.
///
/// Zero for j > n+1. For true p̄ values the product p̄_1⋯p̄_{j−1} is the
/// integer X^{j−1}_j; for arbitrary input it is rounded up.
pub fn z_upper_bound(n: usize, j: usize, d: usize, pbar: &[BigRational]) -> Result<BigInt> {
    if n == 0 || j < 2 {
        return Err(invalid(format!("Z bound needs n ≥ 1 and j ≥ 2, got n={n}, j={j}")));
    }
    if j > n + 1 {
        return Ok(BigInt::zero());
    }
    if pbar.len() < j - 1 {
        return Err(invalid(format!("need {} p̄ values, got {}", j - 1, pbar.len())));
    }
    let prod: BigRational = pbar[..j - 1].iter().fold(BigRational::one(), |acc, p| acc * p);
    let prod = prod.numer().div_ceil(prod.denom());
    Ok(BigInt::from(2 * d).pow(n as u32 - 1) * prod * BigInt::from(j).pow((n + 1 - j) as u32))
}

/// ln of (15/2)·‖A‖·|spt A|·(480eM/ln(n+1))^n·n!. `-inf` when M or ‖A‖ is 0.
pub fn ln_locality_bound_1d(n: usize, m: f64, norm_a: f64, spt_a: u64) -> f64 {
    assert!(n >= 1, "the bound starts at n = 1");
    if m == 0.0 || norm_a == 0.0 || spt_a == 0 {
        return f64::NEG_INFINITY;
    }
    let nf = n as f64;
    (TAIL_PREFACTOR * norm_a * spt_a as f64).ln() + nf * (LOCALITY_RATE * m / (nf + 1.0).ln()).ln() + ln_gamma(nf + 1.0)
}

/// Bound on ‖𝒞ⁿ(A)‖ for a nearest-neighbour chain, evaluated through logs.
/// Overflows to infinity rather than failing.
pub fn locality_bound_1d(n: usize, m: f64, norm_a: f64, spt_a: u64) -> f64 {
    ln_locality_bound_1d(n, m, norm_a, spt_a).exp()
}

/// Whether radius `m` exceeds exp(480e²M|z|) − 1, and the tail (15/2)‖A‖|spt A|e^{−m}.
///
/// The comparison is done as ln(m+1) > 480e²M|z| so huge thresholds do not overflow.
pub fn locality_threshold_and_tail(m: u64, coupling: f64, zabs: f64, norm_a: f64, spt_a: u64) -> (bool, f64) {
    let ok = ((m as f64) + 1.0).ln() > THRESHOLD_RATE * coupling * zabs;
    (ok, TAIL_PREFACTOR * norm_a * spt_a as f64 * (-(m as f64)).exp())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<BigRational> {
        v.iter().map(|&x| BigRational::from_integer(x.into())).collect()
    }

    #[test]
    fn z_bound_examples() {
        assert_eq!(z_upper_bound(1, 2, 2, &ints(&[4])).unwrap(), BigInt::from(4));
        assert_eq!(z_upper_bound(2, 3, 2, &ints(&[4, 6])).unwrap(), BigInt::from(96));
        assert_eq!(z_upper_bound(2, 4, 2, &ints(&[4, 6])).unwrap(), BigInt::from(0));
        assert!(z_upper_bound(2, 1, 2, &ints(&[4])).is_err());
        assert!(z_upper_bound(3, 4, 2, &ints(&[4])).is_err());
    }

    #[test]
    fn locality_examples() {
        let b = locality_bound_1d(1, 1.0, 1.0, 1);
        let want = 7.5 * 480.0 * E / 2f64.ln();
        assert!((b - want).abs() < 1e-9 * want);
        assert_eq!(locality_bound_1d(2, 0.0, 1.0, 1), 0.0);
        assert!(locality_bound_1d(3, 2.0, 1.0, 1) > locality_bound_1d(3, 1.0, 1.0, 1));
        assert!(locality_bound_1d(400, 1.0, 1.0, 1).is_infinite());
    }

    #[test]
    fn threshold_examples() {
        assert!(locality_threshold_and_tail(1, 0.0, 5.0, 1.0, 1).0);
        assert!(!locality_threshold_and_tail(u64::MAX, 1.0, 1.0, 1.0, 1).0);
        let (_, tail) = locality_threshold_and_tail(10, 1.0, 1.0, 1.0, 1);
        assert!((tail - 7.5 * (-10f64).exp()).abs() < 1e-18);
    }
}
