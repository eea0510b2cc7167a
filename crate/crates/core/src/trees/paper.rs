//! The counterexample family at its intended size, in log space.
//!
//! E₀ = 400, E₁ = 4²⁰ and E_k = 4^√E_{k−1}, so a_k = log₄E_k obeys
//! a_k = 2^(a_{k−1}): a₂ = 2²⁰ and every later level is a tower of twos.
//! Everything that must be compared is a multiple of E_k, so comparisons are
//! made between the multipliers, which are ordinary doubles.

use serde::Serialize;
use statrs::function::gamma::ln_gamma;

use crate::error::{invalid, Result};
use crate::tower::Tower;

/// Imaginary times beyond this make the coefficient lower bound diverge, as
/// the theorem is stated.
pub const BLOWUP_THRESHOLD: f64 = 4_398_046_511_104.0; // 4²¹
/// The final estimate (2|z|/4²¹)^n already diverges above 4²¹/2.
pub const DISPLAY_THRESHOLD: f64 = BLOWUP_THRESHOLD / 2.0;

const MAX_LEVEL: usize = 6;

fn ln4() -> f64 {
    4f64.ln()
}

/// a_j = log₄E_j for j = 0..=k.
fn log4_levels(k: usize) -> Vec<Tower> {
    let mut a = vec![Tower::from_f64(400f64.ln() / ln4()), Tower::from_f64(20.0)];
    while a.len() <= k {
        let next = a.last().unwrap().exp2();
        a.push(next);
    }
    a.truncate(k + 1);
    a
}

/// ln(E_j/E_{j+1}) and similar ratios underflow to −∞ once a level is a
/// tower; the dropped terms are smaller than 2^(−2^(2²⁰)) relative to the
/// ones kept.
fn ln4_diff(a: Tower, b: Tower) -> f64 {
    match (a.to_f64(), b.to_f64()) {
        (Some(x), Some(y)) => (x - y) * ln4(),
        (_, None) => f64::NEG_INFINITY,
        (None, Some(_)) => f64::INFINITY,
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct PaperParameters {
    pub k: usize,
    /// log₄E_j, j = 0..=k.
    pub log4_e: Vec<Tower>,
    /// log₄l_j, j = 1..=k.
    pub log4_l: Vec<Tower>,
    /// n_{k−1}/E_k = 1 + 4(E₀/E₁ + … + E_{k−2}/E_{k−1}).
    pub n_over_e: f64,
    pub log4_n: Tower,
    /// log₄E₂ = 2²⁰ as an exact integer.
    pub log4_e2: Option<u128>,
}

pub fn paper_parameters(k: usize) -> Result<PaperParameters> {
    if !(1..=MAX_LEVEL).contains(&k) {
        return Err(invalid(format!("level {k} outside 1..={MAX_LEVEL}")));
    }
    let a = log4_levels(k.max(2));
    let mut log4_l = vec![a[1]];
    for j in 2..=k {
        // l_j = 4E_jE_{j−2}/E_{j−1}.
        let rest = 1.0 + a[j - 2].to_f64().unwrap_or(f64::INFINITY) - a[j - 1].to_f64().unwrap_or(f64::INFINITY);
        log4_l.push(if rest.is_finite() { a[j].add_small(rest) } else { a[j] });
    }
    let n_over_e = 1.0 + 4.0 * (0..k.saturating_sub(1)).map(|j| ln4_diff(a[j], a[j + 1]).exp()).sum::<f64>();
    Ok(PaperParameters {
        k,
        log4_e: a[..=k].to_vec(),
        log4_l,
        n_over_e,
        log4_n: a[k].add_small(n_over_e.ln() / ln4()),
        log4_e2: a[2].exact_integer(),
    })
}

/// The closing bound on ∏w(e) over the level-k tree, as a multiple of E_k:
/// ln ∏w ≤ E_k·(ln E₁ − ½ + 12 ln 4·Σ_{j=1}^{k−2} E_j/√E_{j+1}).
#[derive(Clone, Debug, Serialize)]
pub struct WeightBound {
    pub k: usize,
    /// ln Σ E_j/√E_{j+1}; −∞ when the sum is empty.
    pub ln_series: f64,
    /// ln(E₁/√E₂).
    pub ln_first_term: f64,
    pub series_below_twice_first: bool,
    /// (ln ∏w bound)/E_k.
    pub bound_factor: f64,
    /// ln E₁ − ¼, the relaxed form e^{−E_k/4}(4²⁰)^{E_k}.
    pub relaxed_factor: f64,
    /// ln E₁ = ln 4²⁰.
    pub plain_factor: f64,
    /// (n_{k−1}/E_k)·ln 4²⁰.
    pub n_factor: f64,
    /// bound ≤ relaxed < plain < n_factor.
    pub chain_holds: bool,
    /// log₄ of ln ∏w bound.
    pub log4_ln_bound: Tower,
}

pub fn family_weight_bound(k: usize) -> Result<WeightBound> {
    if !(2..=MAX_LEVEL).contains(&k) {
        return Err(invalid(format!("level {k} outside 2..={MAX_LEVEL}")));
    }
    let a = log4_levels(k + 1);
    // ln(E_j/√E_{j+1}) = ln 4·(a_j − a_{j+1}/2).
    let term = |j: usize| match (a[j].to_f64(), a[j + 1].to_f64()) {
        (Some(x), Some(y)) => (x - y / 2.0) * ln4(),
        _ => f64::NEG_INFINITY,
    };
    let ln_first_term = term(1);
    let ln_series = log_sum_exp((1..k - 1).map(term));
    let bound_factor = 20.0 * ln4() - 0.5 + 12.0 * ln4() * ln_series.exp();
    let relaxed_factor = 20.0 * ln4() - 0.25;
    let plain_factor = 20.0 * ln4();
    let n_factor = paper_parameters(k)?.n_over_e * plain_factor;
    let series_below_twice_first = ln_series < 2f64.ln() + ln_first_term;
    Ok(WeightBound {
        k,
        ln_series,
        ln_first_term,
        series_below_twice_first,
        bound_factor,
        relaxed_factor,
        plain_factor,
        n_factor,
        chain_holds: bound_factor <= relaxed_factor && relaxed_factor < plain_factor && plain_factor < n_factor,
        log4_ln_bound: a[k].add_small(bound_factor.ln() / ln4()),
    })
}

fn log_sum_exp(xs: impl Iterator<Item = f64>) -> f64 {
    let xs: Vec<f64> = xs.collect();
    let m = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if m == f64::NEG_INFINITY {
        return m;
    }
    m + xs.iter().map(|x| (x - m).exp()).sum::<f64>().ln()
}

/// The same closing bound evaluated with small level constants `e`
/// (E₀, …, E_{k+1}), for comparison with a drawn tree of that size.
pub fn toy_weight_chain(e: &[u64]) -> Result<f64> {
    if e.len() < 3 {
        return Err(invalid("need at least E0, E1, E2"));
    }
    let k = e.len() - 1;
    let f = |j: usize| e[j] as f64;
    let series: f64 = (1..k - 1).map(|j| f(j) / f(j + 1).sqrt()).sum();
    Ok(f(k) * (f(1).ln() - 0.5 + 12.0 * ln4() * series))
}

/// ln(n!/(4²¹)ⁿ), the claimed lower bound on constructions of the unfolded tree.
pub fn family_count_lower_bound(n: u64) -> Result<f64> {
    if n == 0 {
        return Err(invalid("n must be at least 1"));
    }
    Ok(ln_gamma(n as f64 + 1.0) - n as f64 * 21.0 * ln4())
}
