use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use rustc_hash::FxHashMap;
use serde_json::{json, Value};

use super::{AlphaString, PauliKey, Region};
use crate::error::{invalid, Error, Result};
use crate::lattice::count::{parse_rational, rational_string};

/// Default cap on the number of stored terms.
pub const DEFAULT_TERM_BUDGET: usize = 1 << 24;

/// A sparse integer combination of alpha strings on a region, optionally
/// multiplied by one global rational scale.
#[derive(Clone, Debug, PartialEq)]
pub struct PauliOperator {
    region: Region,
    terms: FxHashMap<PauliKey, BigInt>,
    scale: BigRational,
}

impl PauliOperator {
    pub fn zero(region: &Region) -> PauliOperator {
        PauliOperator { region: region.clone(), terms: FxHashMap::default(), scale: BigRational::one() }
    }

    pub fn from_string(region: &Region, s: &AlphaString) -> Result<PauliOperator> {
        let mut op = PauliOperator::zero(region);
        op.add_term(region.key_of(s)?, s.coeff().clone());
        Ok(op)
    }

    pub fn from_strings<'a>(region: &Region, strings: impl IntoIterator<Item = &'a AlphaString>) -> Result<PauliOperator> {
        let mut op = PauliOperator::zero(region);
        for s in strings {
            op.add_term(region.key_of(s)?, s.coeff().clone());
        }
        Ok(op)
    }

    pub fn region(&self) -> &Region {
        &self.region
    }

    pub fn scale(&self) -> &BigRational {
        &self.scale
    }

    pub fn with_scale(mut self, scale: BigRational) -> PauliOperator {
        self.scale = scale;
        self
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty() || self.scale.is_zero()
    }

    pub fn add_term(&mut self, key: PauliKey, c: BigInt) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(key).or_default();
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&key);
        }
    }

    /// Unscaled integer coefficient of `key`.
    pub fn raw(&self, key: PauliKey) -> BigInt {
        self.terms.get(&key).cloned().unwrap_or_default()
    }

    /// Terms in key order, unscaled.
    pub fn sorted_terms(&self) -> Vec<(PauliKey, &BigInt)> {
        let mut v: Vec<_> = self.terms.iter().map(|(k, c)| (*k, c)).collect();
        v.sort_unstable_by_key(|t| t.0);
        v
    }

    pub fn iter(&self) -> impl Iterator<Item = (&PauliKey, &BigInt)> {
        self.terms.iter()
    }

    /// Terms as alpha strings; only meaningful when the scale is an integer.
    pub fn strings(&self) -> Vec<AlphaString> {
        self.sorted_terms().into_iter().map(|(k, c)| self.region.string_of(k, c * self.scale.numer() / self.scale.denom())).collect()
    }

    /// Move the operator onto another region that contains its support.
    pub fn reembed(&self, region: &Region) -> Result<PauliOperator> {
        if *region == self.region {
            return Ok(self.clone());
        }
        let mut out = PauliOperator::zero(region).with_scale(self.scale.clone());
        for (k, c) in &self.terms {
            let s = self.region.string_of(*k, 1);
            out.add_term(region.key_of(&s)?, c.clone());
        }
        Ok(out)
    }

    /// Largest L¹ distance from `center` to a site in the support.
    pub fn support_radius(&self, center: &crate::lattice::Site) -> u64 {
        let mask = self.terms.keys().fold(0u64, |m, k| m | k.support_mask());
        (0..self.region.num_sites())
            .filter(|&k| mask >> k & 1 == 1)
            .map(|k| self.region.site(k).l1_distance(center))
            .max()
            .unwrap_or(0)
    }

    /// Σ |c_f|·|scale|, an upper bound on the operator norm.
    pub fn l1_norm(&self) -> f64 {
        let s = self.scale.to_f64().unwrap().abs();
        self.terms.values().map(|c| c.abs().to_f64().unwrap()).sum::<f64>() * s
    }

    pub fn to_json(&self) -> Value {
        let terms: Vec<Value> = self
            .sorted_terms()
            .into_iter()
            .map(|(k, c)| json!({"f": self.region.key_string(k), "coeff": signed_decimal(c)}))
            .collect();
        let mut v = json!({"region": self.region, "terms": terms});
        if !self.scale.is_one() {
            v["scale"] = Value::String(rational_string(&self.scale));
        }
        v
    }

    pub fn from_json(v: &Value) -> Result<PauliOperator> {
        let bad = |m: &str| invalid(format!("malformed operator JSON: {m}"));
        let region: Region = serde_json::from_value(v["region"].clone()).map_err(|e| bad(&e.to_string()))?;
        let mut op = PauliOperator::zero(&region);
        for t in v["terms"].as_array().ok_or_else(|| bad("terms"))? {
            let key = region.parse_key(t["f"].as_str().ok_or_else(|| bad("f"))?)?;
            let c: BigInt = t["coeff"].as_str().ok_or_else(|| bad("coeff"))?.parse().map_err(|_| bad("coeff"))?;
            op.add_term(key, c);
        }
        if let Some(s) = v.get("scale") {
            op.scale = s.as_str().and_then(parse_rational).ok_or_else(|| bad("scale"))?;
        }
        Ok(op)
    }
}

fn signed_decimal(c: &BigInt) -> String {
    if c.is_negative() {
        c.to_string()
    } else {
        format!("+{c}")
    }
}

/// [H_Λ, op] with H_Λ the sum of interaction terms over the edges of Λ.
pub fn apply_commutant(op: &PauliOperator, region: &Region) -> Result<PauliOperator> {
    apply_commutant_with_budget(op, region, DEFAULT_TERM_BUDGET)
}

pub fn apply_commutant_with_budget(op: &PauliOperator, region: &Region, budget: usize) -> Result<PauliOperator> {
    let op = op.reembed(region)?;
    let hs = region.interaction_keys();
    // Every output key collects at most one contribution per edge, each of
    // size 2|c|; stay in i128 while that cannot overflow.
    let max_bits = op.terms.values().map(|c| c.bits()).max().unwrap_or(0);
    let headroom = 128 - 2 - (2 * hs.len() as u64).next_power_of_two().trailing_zeros() as u64;
    let terms: Vec<(PauliKey, &BigInt)> = op.terms.iter().map(|(k, c)| (*k, c)).collect();
    let out = if max_bits < headroom {
        let small: Vec<(PauliKey, i128)> = terms.iter().map(|(k, c)| (*k, c.to_i128().unwrap())).collect();
        let map = small
            .par_chunks(4096)
            .map(|chunk| {
                let mut m: FxHashMap<PauliKey, i128> = FxHashMap::default();
                for &(k, c) in chunk {
                    for &h in hs {
                        if h.anticommutes(k) {
                            *m.entry(h.xor(k)).or_default() += 2 * h.mul_sign(k) as i128 * c;
                        }
                    }
                }
                m
            })
            .reduce(FxHashMap::default, merge_small);
        map.into_iter().filter(|(_, c)| *c != 0).map(|(k, c)| (k, BigInt::from(c))).collect()
    } else {
        terms
            .par_chunks(1024)
            .map(|chunk| {
                let mut m: FxHashMap<PauliKey, BigInt> = FxHashMap::default();
                for &(k, c) in chunk {
                    for &h in hs {
                        if h.anticommutes(k) {
                            let v = c * (2 * h.mul_sign(k));
                            *m.entry(h.xor(k)).or_default() += v;
                        }
                    }
                }
                m
            })
            .reduce(FxHashMap::default, merge_big)
            .into_iter()
            .filter(|(_, c)| !c.is_zero())
            .collect()
    };
    let out = PauliOperator { region: region.clone(), terms: out, scale: op.scale.clone() };
    if out.len() > budget {
        return Err(Error::Budget { budget, order: 1 });
    }
    Ok(out)
}

fn merge_small(mut a: FxHashMap<PauliKey, i128>, b: FxHashMap<PauliKey, i128>) -> FxHashMap<PauliKey, i128> {
    if a.len() < b.len() {
        return merge_small(b, a);
    }
    for (k, c) in b {
        *a.entry(k).or_default() += c;
    }
    a
}

fn merge_big(mut a: FxHashMap<PauliKey, BigInt>, b: FxHashMap<PauliKey, BigInt>) -> FxHashMap<PauliKey, BigInt> {
    if a.len() < b.len() {
        return merge_big(b, a);
    }
    for (k, c) in b {
        *a.entry(k).or_default() += c;
    }
    a
}

/// 𝒞⁰(A), …, 𝒞ⁿ(A).
pub fn iterated_commutant(a: &PauliOperator, n: usize, region: &Region) -> Result<Vec<PauliOperator>> {
    iterated_commutant_with_budget(a, n, region, DEFAULT_TERM_BUDGET)
}

pub fn iterated_commutant_with_budget(
    a: &PauliOperator,
    n: usize,
    region: &Region,
    budget: usize,
) -> Result<Vec<PauliOperator>> {
    let mut out = vec![a.reembed(region)?];
    for order in 1..=n {
        let next = apply_commutant_with_budget(out.last().unwrap(), region, budget)
            .map_err(|e| if let Error::Budget { budget, .. } = e { Error::Budget { budget, order } } else { e })?;
        out.push(next);
    }
    Ok(out)
}

/// Coefficient of the basis string `f` (its own coefficient is ignored).
pub fn coefficient_of(op: &PauliOperator, f: &AlphaString) -> BigRational {
    match op.region.key_of(f) {
        Ok(k) => BigRational::from_integer(op.raw(k)) * &op.scale,
        Err(_) => BigRational::zero(),
    }
}

/// max_f |c_f|, a lower bound on the operator norm.
pub fn hs_norm_lower_bound(op: &PauliOperator) -> f64 {
    let m = op.terms.values().map(|c| c.abs()).max().unwrap_or_default();
    (BigRational::from_integer(m) * op.scale.abs()).to_f64().unwrap()
}

/// A combination of alpha strings with complex double coefficients.
#[derive(Clone, Debug)]
pub struct ComplexOperator {
    pub region: Region,
    pub terms: Vec<(PauliKey, Complex64)>,
}

impl ComplexOperator {
    pub fn coefficient_of(&self, f: &AlphaString) -> Complex64 {
        let Ok(k) = self.region.key_of(f) else {
            return Complex64::zero();
        };
        self.terms.binary_search_by_key(&k, |t| t.0).map(|i| self.terms[i].1).unwrap_or_default()
    }

    pub fn hs_norm_lower_bound(&self) -> f64 {
        self.terms.iter().map(|t| t.1.norm()).fold(0.0, f64::max)
    }

    /// ‖·‖_HS / ‖𝟙‖_HS, i.e. the ℓ² norm of the coefficient vector.
    pub fn normalized_hs_norm(&self) -> f64 {
        self.terms.iter().map(|t| t.1.norm_sqr()).sum::<f64>().sqrt()
    }
}

#[derive(Clone, Debug)]
pub struct SeriesResult {
    pub op: ComplexOperator,
    /// Upper bound on the norm of Σ_{n>N} (iz)ⁿ/n! 𝒞ⁿ(A).
    pub tail_bound: f64,
}

/// Σ_{n≤N} (iz)ⁿ/n! 𝒞ⁿ(A), the Taylor polynomial of e^{izH} A e^{−izH}.
///
/// The tail bound uses ‖𝒞ⁿ(A)‖ ≤ (2·#edges)ⁿ Σ|c_f|.
pub fn series_partial_sum(a: &PauliOperator, z: Complex64, n: usize, region: &Region) -> Result<SeriesResult> {
    let orders = iterated_commutant(a, n, region)?;
    let mut acc: FxHashMap<PauliKey, Neumaier> = FxHashMap::default();
    let iz = Complex64::i() * z;
    let mut w = Complex64::one() * a.scale.to_f64().unwrap();
    for (k, op) in orders.iter().enumerate() {
        if k > 0 {
            w *= iz / k as f64;
        }
        for (key, c) in &op.terms {
            acc.entry(*key).or_default().add(w * c.to_f64().unwrap());
        }
    }
    let mut terms: Vec<(PauliKey, Complex64)> =
        acc.into_iter().map(|(k, s)| (k, s.value())).filter(|t| t.1 != Complex64::zero()).collect();
    terms.sort_unstable_by_key(|t| t.0);
    let x = 2.0 * region.edges().len() as f64 * z.norm();
    let tail_bound = exp_tail(x, n) * a.reembed(region)?.l1_norm();
    Ok(SeriesResult { op: ComplexOperator { region: region.clone(), terms }, tail_bound })
}

/// Σ_{k>n} x^k/k! for x ≥ 0.
fn exp_tail(x: f64, n: usize) -> f64 {
    if x == 0.0 {
        return 0.0;
    }
    let mut term = (0..=n).fold(1.0, |t, k| if k == 0 { t } else { t * x / k as f64 });
    let mut sum = 0.0;
    let mut k = n + 1;
    loop {
        term *= x / k as f64;
        sum += term;
        if k as f64 > 2.0 * x && term < sum * 1e-17 {
            return sum;
        }
        k += 1;
    }
}

/// Compensated complex accumulator.
#[derive(Clone, Copy, Default)]
struct Neumaier {
    re: (f64, f64),
    im: (f64, f64),
}

impl Neumaier {
    fn add(&mut self, v: Complex64) {
        fn step(acc: &mut (f64, f64), x: f64) {
            let t = acc.0 + x;
            acc.1 += if acc.0.abs() >= x.abs() { (acc.0 - t) + x } else { (x - t) + acc.0 };
            acc.0 = t;
        }
        step(&mut self.re, v.re);
        step(&mut self.im, v.im);
    }

    fn value(&self) -> Complex64 {
        Complex64::new(self.re.0 + self.re.1, self.im.0 + self.im.1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::Site;
    use crate::pauli::AlphaIndex::*;

    fn a2() -> AlphaString {
        AlphaString::single(Site::xy(0, 0), A2)
    }

    #[test]
    fn first_commutant_at_origin() {
        // Only the right and lower edges anticommute with α₂ at the origin:
        // the left and upper edges put α₂ there, which commutes with it.
        let r = Region::rect(-1, 1, -1, 1).unwrap();
        let op = PauliOperator::from_string(&r, &a2()).unwrap();
        let c1 = apply_commutant(&op, &r).unwrap();
        assert_eq!(c1.len(), 2);
        assert!(c1.iter().all(|(_, c)| c.abs() == BigInt::from(2)));
        let want = AlphaString::new(1, [(Site::xy(0, 0), A3), (Site::xy(1, 0), A2)]);
        assert_eq!(coefficient_of(&c1, &want), BigRational::from_integer(2.into()));
        let a3 = PauliOperator::from_string(&r, &AlphaString::single(Site::xy(0, 0), A3)).unwrap();
        assert_eq!(apply_commutant(&a3, &r).unwrap().len(), 4);
        let id = PauliOperator::from_string(&r, &AlphaString::identity()).unwrap();
        assert!(apply_commutant(&id, &r).unwrap().is_zero());
    }

    #[test]
    fn divisibility_and_locality() {
        let r = Region::rect(-2, 2, -2, 2).unwrap();
        let op = PauliOperator::from_string(&r, &a2()).unwrap();
        let orders = iterated_commutant(&op, 5, &r).unwrap();
        for (n, o) in orders.iter().enumerate() {
            let p = BigInt::from(2).pow(n as u32);
            assert!(o.iter().all(|(_, c)| (c % &p).is_zero()));
            assert!(o.support_radius(&Site::xy(0, 0)) <= n as u64);
        }
    }

    #[test]
    fn budget_is_reported_with_order() {
        let r = Region::rect(-2, 2, -2, 2).unwrap();
        let op = PauliOperator::from_string(&r, &a2()).unwrap();
        match iterated_commutant_with_budget(&op, 6, &r, 50) {
            Err(Error::Budget { budget: 50, order }) => assert!(order >= 2),
            other => panic!("expected budget failure, got {other:?}"),
        }
    }

    #[test]
    fn outside_support_is_rejected() {
        let small = Region::rect(0, 1, 0, 0).unwrap();
        let big = Region::rect(-1, 1, -1, 1).unwrap();
        let op = PauliOperator::from_string(&big, &AlphaString::single(Site::xy(-1, 0), A1)).unwrap();
        assert!(matches!(apply_commutant(&op, &small), Err(Error::OutsideRegion(_))));
    }

    #[test]
    fn series_at_zero() {
        let r = Region::rect(0, 1, 0, 2).unwrap();
        let op = PauliOperator::from_string(&r, &a2().with_coeff(3)).unwrap();
        let s = series_partial_sum(&op, Complex64::zero(), 10, &r).unwrap();
        assert_eq!(s.tail_bound, 0.0);
        assert_eq!(s.op.terms.len(), 1);
        assert_eq!(s.op.coefficient_of(&a2()), Complex64::new(3.0, 0.0));
        assert_eq!(hs_norm_lower_bound(&op), 3.0);
        assert_eq!(s.op.hs_norm_lower_bound(), 3.0);
    }

    #[test]
    fn tail_of_exponential() {
        let x: f64 = 3.0;
        let head: f64 = (0..=4).map(|k| x.powi(k) / (1..=k).product::<i32>().max(1) as f64).sum();
        assert!((exp_tail(x, 4) - (x.exp() - head)).abs() < 1e-12);
    }

    #[test]
    fn json_roundtrip() {
        let r = Region::rect(-1, 1, -1, 1).unwrap();
        let op = PauliOperator::from_string(&r, &AlphaString::single(Site::xy(0, 0), A3)).unwrap();
        let c2 = apply_commutant(&apply_commutant(&op, &r).unwrap(), &r).unwrap();
        let v = c2.to_json();
        assert!(v["terms"][0]["coeff"].as_str().unwrap().starts_with(['+', '-']));
        assert_eq!(PauliOperator::from_json(&v).unwrap(), c2);
    }
}
