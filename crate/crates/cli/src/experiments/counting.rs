//! History counts, sequence tables and the one-dimensional locality bound.

use latcomm::lattice::{
    count_sequences_by_size, history_statistics, locality_bound_1d, ln_locality_bound_1d, z_upper_bound,
    EnumerationCaps, Site,
};
use latcomm::oracle::{apply_operator, operator_norm_matrix_free, MAX_DENSE_SITES};
use latcomm::pauli::{iterated_commutant, AlphaIndex, AlphaString, PauliOperator, Region};
use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::One;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::config::ExperimentConfig;
use crate::report::{big, ln_value, rational, Outcome, Table};
use crate::CliError;

#[derive(Debug, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct HistoriesParams {
    pub n: usize,
    pub d: usize,
    pub caps: EnumerationCaps,
}

impl Default for HistoriesParams {
    fn default() -> Self {
        HistoriesParams { n: 12, d: 1, caps: EnumerationCaps::default() }
    }
}

pub fn histories(cfg: &mut ExperimentConfig) -> Result<Outcome, CliError> {
    let p: HistoriesParams = cfg.typed()?;
    let stats = history_statistics(p.n, p.d, &p.caps)?;
    let mut out = Outcome::default();
    let mut table = Table::new(&["length", "count", "perimeter_sum", "pbar"]);
    let mut rows = vec![];
    for l in 0..=p.n {
        let pbar = stats.pbar(l + 1);
        rows.push(json!({
            "length": l,
            "count": big(&stats.counts[l]),
            "perimeter_sum": big(&stats.perimeter_sums[l]),
            "pbar": rational(&pbar),
        }));
        table.push(vec![l.to_string(), stats.counts[l].to_string(), stats.perimeter_sums[l].to_string(), rational(&pbar).as_str().unwrap().into()]);
    }
    let recursion = (0..p.n).filter(|&l| stats.counts[l + 1] != stats.perimeter_sums[l]).collect::<Vec<_>>();
    out.verdict("perimeter recursion", recursion.is_empty(), format!("count(l+1) = perimeter sum(l) fails at {recursion:?}"));
    let mut prod = BigRational::one();
    let mut identity_bad = vec![];
    for m in 1..=p.n {
        prod *= stats.pbar(m);
        if BigRational::from_integer(BigInt::from(stats.counts[m].clone())) != prod {
            identity_bad.push(m);
        }
    }
    out.verdict("count identity", identity_bad.is_empty(), format!("histories = product of average perimeters for n ≤ {}; failures {identity_bad:?}", p.n));
    if p.d == 1 {
        let two = BigRational::from_integer(2.into());
        let bad: Vec<usize> = (0..=p.n)
            .filter(|&l| stats.counts[l] != BigUint::from(2u32).pow(l as u32) || stats.pbar(l + 1) != two)
            .collect();
        out.verdict("one-dimensional counts", bad.is_empty(), format!("2^n histories and average perimeter 2; failures {bad:?}"));
    }
    out.results = json!({ "d": p.d, "n": p.n, "lengths": rows });
    out.table = Some(table);
    Ok(out)
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SequencesParams {
    /// (d, largest n) pairs.
    pub orders: Vec<[usize; 2]>,
    pub caps: EnumerationCaps,
}

impl Default for SequencesParams {
    fn default() -> Self {
        SequencesParams {
            orders: vec![[1, 12], [2, 7]],
            caps: EnumerationCaps { histories_d1: 16, histories_d2: 8, sequences_d1: 12, sequences_d2: 7 },
        }
    }
}

pub fn sequences(cfg: &mut ExperimentConfig) -> Result<Outcome, CliError> {
    let p: SequencesParams = cfg.typed()?;
    let mut out = Outcome::default();
    let mut table = Table::new(&["d", "n", "j", "X", "Z"]);
    let mut results = vec![];
    for &[d, nmax] in &p.orders {
        let (mut identity_bad, mut z_bad, mut checked) = (vec![], vec![], 0usize);
        for n in 1..=nmax {
            let t = count_sequences_by_size(n, d, &p.caps)?;
            let prod = t.pbar.iter().fold(BigRational::one(), |a, b| a * b);
            if BigRational::from_integer(BigInt::from(t.x(n + 1))) != prod {
                identity_bad.push(n);
            }
            let mut xs = serde_json::Map::new();
            let mut zs = serde_json::Map::new();
            for j in 2..=n + 1 {
                let z = z_upper_bound(n, j, d, &t.pbar)?;
                let x = t.x(j);
                checked += 1;
                if BigInt::from(x.clone()) > z {
                    z_bad.push((n, j));
                }
                table.push(vec![d.to_string(), n.to_string(), j.to_string(), x.to_string(), z.to_string()]);
                xs.insert(j.to_string(), big(&x));
                zs.insert(j.to_string(), Value::String(z.to_string()));
            }
            results.push(json!({
                "d": d, "n": n, "X": xs, "Z": zs,
                "pbar": t.pbar.iter().map(rational).collect::<Vec<_>>(),
            }));
        }
        out.verdict(format!("count identity d={d}"), identity_bad.is_empty(), format!("X^n_(n+1) = product of pbar for n ≤ {nmax}; failures {identity_bad:?}"));
        out.verdict(format!("Z bound d={d}"), z_bad.is_empty(), format!("{checked} (n, j) pairs checked; failures {z_bad:?}"));
    }
    out.results = json!({ "tables": results });
    out.table = Some(table);
    Ok(out)
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LocalityParams {
    pub sites: usize,
    pub n_max: usize,
}

impl Default for LocalityParams {
    fn default() -> Self {
        LocalityParams { sites: 12, n_max: 6 }
    }
}

pub fn locality_1d(cfg: &mut ExperimentConfig) -> Result<Outcome, CliError> {
    let p: LocalityParams = cfg.typed()?;
    if p.sites == 0 || p.sites > MAX_DENSE_SITES {
        return Err(CliError::Config(format!("sites must be in 1..={MAX_DENSE_SITES}")));
    }
    // The origin sits in the middle of the chain.
    let x0 = -((p.sites as i32 - 1) / 2);
    let region = Region::chain(x0, x0 + p.sites as i32 - 1)?;
    let origin = Site::x(0);
    let a = PauliOperator::from_string(&region, &AlphaString::single(origin, AlphaIndex::A2))?;
    let orders = iterated_commutant(&a, p.n_max, &region)?;
    let dim = 1usize << p.sites;
    let mut out = Outcome::default();
    let mut table = Table::new(&["n", "norm", "l1_norm", "bound", "support_radius"]);
    let mut rows = vec![];
    let (mut norm_bad, mut radius_bad) = (vec![], vec![]);
    for (n, op) in orders.iter().enumerate() {
        let est = operator_norm_matrix_free(dim, |v| apply_operator(op, v, false), |v| apply_operator(op, v, true))?;
        let radius = op.support_radius(&origin);
        if radius > n as u64 {
            radius_bad.push(n);
        }
        let (bound, ln_bound) = if n == 0 { (f64::NAN, f64::NAN) } else { (locality_bound_1d(n, 1.0, 1.0, 1), ln_locality_bound_1d(n, 1.0, 1.0, 1)) };
        if n > 0 && !(est.value <= bound && op.l1_norm() <= bound) {
            norm_bad.push(n);
        }
        table.push(vec![n.to_string(), est.value.to_string(), op.l1_norm().to_string(), bound.to_string(), radius.to_string()]);
        rows.push(json!({
            "n": n,
            "terms": op.len(),
            "norm": est.value,
            "norm_residual": est.residual,
            "l1_norm": op.l1_norm(),
            "bound": if n == 0 { Value::Null } else { ln_value(ln_bound) },
            "support_radius": radius,
        }));
    }
    out.verdict("norm below bound", norm_bad.is_empty(), format!("‖C^n(A)‖ and its coefficient sum below the bound for 1 ≤ n ≤ {}; failures {norm_bad:?}", p.n_max));
    out.verdict("support within n", radius_bad.is_empty(), format!("failures {radius_bad:?}"));
    out.results = json!({ "sites": p.sites, "region": [x0, x0 + p.sites as i32 - 1], "orders": rows });
    out.table = Some(table);
    Ok(out)
}
