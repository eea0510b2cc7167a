//! The Eden growth process and its expected perimeter.
//!
//! At each step one outside site joins the cluster, chosen with probability
//! proportional to the number of perimeter edges reaching it. Picking a
//! perimeter edge uniformly and taking its outer end does exactly that.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use rustc_hash::FxHashMap;
use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::lattice::{neighbors, Edge, LatticeAnimal, Site};

pub const MAX_EXACT_STEPS: usize = 8;

/// Reference growth exponent 1 − 1/(d(2d+5)+1) for the expected perimeter.
pub fn theorem_exponent(d: usize) -> f64 {
    1.0 - 1.0 / ((d * (2 * d + 5)) as f64 + 1.0)
}

#[derive(Clone, Debug)]
pub struct EdenState {
    d: usize,
    sites: FxHashMap<Site, ()>,
    /// Perimeter edges as (inside, outside).
    perimeter: Vec<(Site, Site)>,
    /// Positions in `perimeter` of the edges reaching each outside site.
    by_outside: FxHashMap<Site, Vec<usize>>,
    step: usize,
}

impl EdenState {
    pub fn new(d: usize) -> Result<EdenState> {
        let origin = Site::origin(d)?;
        let mut s = EdenState {
            d,
            sites: FxHashMap::default(),
            perimeter: vec![],
            by_outside: FxHashMap::default(),
            step: 0,
        };
        s.sites.insert(origin, ());
        s.push_edges(origin)?;
        Ok(s)
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn step(&self) -> usize {
        self.step
    }

    pub fn len(&self) -> usize {
        self.sites.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sites.is_empty()
    }

    pub fn contains(&self, s: &Site) -> bool {
        self.sites.contains_key(s)
    }

    pub fn perimeter_len(&self) -> usize {
        self.perimeter.len()
    }

    pub fn animal(&self) -> LatticeAnimal {
        LatticeAnimal::new(self.sites.keys().copied()).expect("Eden clusters are connected")
    }

    /// Perimeter edges grouped by their outside site.
    pub fn outside_counts(&self) -> BTreeMap<Site, usize> {
        self.by_outside.iter().map(|(s, v)| (*s, v.len())).collect()
    }

    pub fn perimeter_edges(&self) -> Vec<Edge> {
        let mut v: Vec<Edge> = self.perimeter.iter().map(|&(i, o)| Edge::new(i, o).unwrap()).collect();
        v.sort();
        v
    }

    fn push_edges(&mut self, v: Site) -> Result<()> {
        for u in neighbors(v, self.d)? {
            if !self.sites.contains_key(&u) {
                self.by_outside.entry(u).or_default().push(self.perimeter.len());
                self.perimeter.push((v, u));
            }
        }
        Ok(())
    }

    /// Move `y` inside: drop the edges reaching it, add its outward edges.
    fn absorb(&mut self, y: Site) {
        let mut gone = self.by_outside.remove(&y).unwrap_or_default();
        gone.sort_unstable_by(|a, b| b.cmp(a));
        for pos in gone {
            let last = self.perimeter.len() - 1;
            self.perimeter.swap_remove(pos);
            if pos != last {
                let moved = self.perimeter[pos].1;
                let list = self.by_outside.get_mut(&moved).unwrap();
                *list.iter_mut().find(|p| **p == last).unwrap() = pos;
            }
        }
        self.sites.insert(y, ());
        self.push_edges(y).unwrap();
        self.step += 1;
        debug_assert!(!self.step.is_power_of_two() || self.is_consistent());
    }

    /// One step of the process.
    pub fn advance<R: Rng + ?Sized>(&mut self, rng: &mut R) {
        let i = rng.random_range(0..self.perimeter.len());
        let y = self.perimeter[i].1;
        self.absorb(y);
    }

    /// Recompute the perimeter from scratch and compare.
    pub fn is_consistent(&self) -> bool {
        let mut want = vec![];
        for &v in self.sites.keys() {
            for u in neighbors(v, self.d).unwrap() {
                if !self.sites.contains_key(&u) {
                    want.push(Edge::new(v, u).unwrap());
                }
            }
        }
        want.sort();
        let index_ok = self.by_outside.iter().all(|(o, ps)| ps.iter().all(|&p| self.perimeter[p].1 == *o))
            && self.by_outside.values().map(Vec::len).sum::<usize>() == self.perimeter.len();
        index_ok && want == self.perimeter_edges() && self.step + 1 == self.sites.len()
    }
}

/// Functional form of [`EdenState::advance`].
pub fn eden_step<R: Rng + ?Sized>(mut s: EdenState, rng: &mut R) -> EdenState {
    s.advance(rng);
    s
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, serde::Deserialize)]
pub struct EdenConfig {
    pub d: usize,
    pub steps: usize,
    pub seed: u64,
    pub trials: usize,
}

impl EdenConfig {
    fn check(&self) -> Result<()> {
        if !(1..=3).contains(&self.d) {
            return Err(Error::Dimension(self.d));
        }
        if self.trials == 0 {
            return Err(invalid("trials must be at least 1"));
        }
        Ok(())
    }
}

/// Generator for one trial: ChaCha8 keyed by the seed, one stream per trial.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

/// Perimeter after each step 0..=steps of one trial.
pub fn trajectory(d: usize, steps: usize, seed: u64, trial: u64) -> Result<Vec<u64>> {
    let mut rng = trial_rng(seed, trial);
    let mut s = EdenState::new(d)?;
    let mut out = Vec::with_capacity(steps + 1);
    out.push(s.perimeter_len() as u64);
    for _ in 0..steps {
        s.advance(&mut rng);
        out.push(s.perimeter_len() as u64);
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct StepStat {
    pub step: usize,
    pub mean: f64,
    pub stderr: f64,
    pub trials: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EdenSeries {
    pub config: EdenConfig,
    pub steps: Vec<StepStat>,
}

impl EdenSeries {
    pub fn means(&self) -> Vec<f64> {
        self.steps.iter().map(|s| s.mean).collect()
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("step,mean,stderr,trials\n");
        for s in &self.steps {
            writeln!(out, "{},{},{},{}", s.step, s.mean, s.stderr, s.trials).unwrap();
        }
        out
    }
}

/// Mean and standard error of the perimeter at every step over independent
/// trials. Sums are kept in integers, so the result does not depend on how
/// trials are scheduled.
pub fn perimeter_expectation_mc(cfg: &EdenConfig) -> Result<EdenSeries> {
    cfg.check()?;
    let zero = || vec![(0u128, 0u128); cfg.steps + 1];
    let sums = (0..cfg.trials as u64)
        .into_par_iter()
        .map(|t| trajectory(cfg.d, cfg.steps, cfg.seed, t))
        .try_fold(zero, |mut acc, traj| {
            for (a, &p) in acc.iter_mut().zip(&traj?) {
                a.0 += p as u128;
                a.1 += (p as u128) * (p as u128);
            }
            Ok::<_, Error>(acc)
        })
        .try_reduce(zero, |mut a, b| {
            for (x, y) in a.iter_mut().zip(b) {
                x.0 += y.0;
                x.1 += y.1;
            }
            Ok(a)
        })?;
    let t = cfg.trials as f64;
    let steps = sums
        .iter()
        .enumerate()
        .map(|(step, &(s, ss))| {
            let mean = s as f64 / t;
            let stderr = if cfg.trials > 1 {
                // Σ(p − mean)² = ss − s²/t, formed exactly before dividing.
                let dev = (ss * cfg.trials as u128).saturating_sub(s * s) as f64 / t;
                (dev / (t - 1.0) / t).sqrt()
            } else {
                0.0
            };
            StepStat { step, mean, stderr, trials: cfg.trials }
        })
        .collect();
    Ok(EdenSeries { config: *cfg, steps })
}

/// Sites shifted so every coordinate minimum is zero, sorted.
fn canonical(sites: &[Site], d: usize) -> Vec<Site> {
    let mut lo = [i32::MAX; 3];
    for s in sites {
        for (a, l) in lo.iter_mut().enumerate().take(d) {
            *l = (*l).min(s.coord(a));
        }
    }
    let mut out: Vec<Site> = sites
        .iter()
        .map(|s| {
            let c: Vec<i32> = (0..d).map(|a| s.coord(a) - lo[a]).collect();
            Site::new(&c).unwrap()
        })
        .collect();
    out.sort();
    out
}

/// Exact expected perimeter after each step 0..=n.
///
/// The distribution over clusters, up to translation, is pushed forward one
/// step at a time with exact rational probabilities.
pub fn perimeter_expectation_exact(n: usize, d: usize) -> Result<Vec<BigRational>> {
    if n > MAX_EXACT_STEPS {
        return Err(Error::Cap { what: "exact Eden steps", got: n as u64, cap: MAX_EXACT_STEPS as u64 });
    }
    let origin = Site::origin(d)?;
    let mut dist: BTreeMap<Vec<Site>, BigRational> = BTreeMap::from([(vec![origin], BigRational::one())]);
    let mut out = vec![];
    for step in 0..=n {
        let mut expect = BigRational::zero();
        let mut next: BTreeMap<Vec<Site>, BigRational> = BTreeMap::new();
        for (cluster, p) in &dist {
            let mut reach: BTreeMap<Site, i64> = BTreeMap::new();
            for &v in cluster {
                for u in neighbors(v, d)? {
                    if cluster.binary_search(&u).is_err() {
                        *reach.entry(u).or_default() += 1;
                    }
                }
            }
            let total: i64 = reach.values().sum();
            expect += p * BigInt::from(total);
            if step == n {
                continue;
            }
            for (y, c) in reach {
                let mut grown = cluster.clone();
                grown.push(y);
                let q = p * BigRational::new(c.into(), total.into());
                *next.entry(canonical(&grown, d)).or_insert_with(BigRational::zero) += q;
            }
        }
        out.push(expect);
        dist = next;
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ExponentFit {
    pub alpha: f64,
    pub k: f64,
    /// Root-mean-square residual of ln p.
    pub residual: f64,
    /// Naive 95% interval for α from the regression standard error.
    pub alpha_low: f64,
    pub alpha_high: f64,
    pub points: usize,
}

/// Least-squares fit of ln p = ln K + α ln n over the top decade of steps,
/// where `means[n]` is the mean perimeter after n steps.
pub fn exponent_fit(means: &[f64]) -> Result<ExponentFit> {
    let last = means.len().saturating_sub(1);
    let first = (last / 10).max(1);
    let pts: Vec<(f64, f64)> = (first..=last).map(|n| (n as f64, means[n])).collect();
    if pts.len() < 10 {
        return Err(invalid(format!("need at least 10 points in the top decade, have {}", pts.len())));
    }
    if pts.iter().any(|&(_, p)| !(p > 0.0) || !p.is_finite()) {
        return Err(invalid("perimeter means must be positive and finite"));
    }
    let m = pts.len() as f64;
    let xs: Vec<f64> = pts.iter().map(|p| p.0.ln()).collect();
    let ys: Vec<f64> = pts.iter().map(|p| p.1.ln()).collect();
    let (mx, my) = (xs.iter().sum::<f64>() / m, ys.iter().sum::<f64>() / m);
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    if sxx == 0.0 {
        return Err(invalid("degenerate abscissae"));
    }
    let alpha = sxy / sxx;
    let ln_k = my - alpha * mx;
    let ssr: f64 = xs.iter().zip(&ys).map(|(x, y)| (y - ln_k - alpha * x).powi(2)).sum();
    let se = (ssr / (m - 2.0) / sxx).sqrt();
    Ok(ExponentFit {
        alpha,
        k: ln_k.exp(),
        residual: (ssr / m).sqrt(),
        alpha_low: alpha - 1.96 * se,
        alpha_high: alpha + 1.96 * se,
        points: pts.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ratio(a: i64, b: i64) -> BigRational {
        BigRational::new(a.into(), b.into())
    }

    #[test]
    fn first_steps_are_uniform() {
        let s = EdenState::new(2).unwrap();
        assert_eq!(s.perimeter_len(), 4);
        assert!(s.outside_counts().values().all(|&c| c == 1));
        let mut rng = trial_rng(1, 0);
        let s = eden_step(s, &mut rng);
        assert_eq!(s.step(), 1);
        assert_eq!(s.perimeter_len(), 6);
        assert_eq!(s.outside_counts().len(), 6);
        assert!(s.outside_counts().values().all(|&c| c == 1));
        assert!(s.is_consistent());
    }

    #[test]
    fn long_run_stays_consistent() {
        for d in 1..=3 {
            let mut rng = trial_rng(9, d as u64);
            let mut s = EdenState::new(d).unwrap();
            for _ in 0..300 {
                s.advance(&mut rng);
            }
            assert!(s.is_consistent());
            assert_eq!(s.animal().len(), 301);
        }
    }

    #[test]
    fn exact_small_steps() {
        let e = perimeter_expectation_exact(3, 2).unwrap();
        assert_eq!(e[..3], [ratio(4, 1), ratio(6, 1), ratio(8, 1)]);
        // Only the 2×2 block has perimeter 8; every other tetromino has 10.
        assert!(e[3] > ratio(8, 1) && e[3] < ratio(10, 1));
        assert_eq!(perimeter_expectation_exact(4, 1).unwrap(), vec![ratio(2, 1); 5]);
        assert!(perimeter_expectation_exact(9, 2).is_err());
    }

    #[test]
    fn mc_is_reproducible() {
        let cfg = EdenConfig { d: 2, steps: 30, seed: 5, trials: 20 };
        let a = perimeter_expectation_mc(&cfg).unwrap();
        assert_eq!(a, perimeter_expectation_mc(&cfg).unwrap());
        assert_eq!(a.steps[0].mean, 4.0);
        assert_eq!(a.steps[2].mean, 8.0);
        assert_eq!(a.steps[2].stderr, 0.0);
        assert!(a.to_csv().starts_with("step,mean,stderr,trials\n0,4,0,20\n"));
    }

    #[test]
    fn fit_on_synthetic_data() {
        let pow: Vec<f64> = (0..200).map(|n| 3.0 * (n as f64).powf(0.7)).collect();
        let f = exponent_fit(&pow).unwrap();
        assert!((f.alpha - 0.7).abs() < 1e-9 && (f.k - 3.0).abs() < 1e-8);
        let flat = exponent_fit(&[5.0; 200]).unwrap();
        assert!(flat.alpha.abs() < 1e-12);
        assert!(exponent_fit(&[1.0; 5]).is_err());
    }
}
