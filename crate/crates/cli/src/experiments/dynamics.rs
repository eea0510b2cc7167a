//! Coefficient extraction on the unfolded tree, the imaginary-time norm scan
//! and the series-versus-exponential check.

use latcomm::lattice::{Edge, EdgeSequence, Site};
use latcomm::oracle::{crosscheck as oracle_crosscheck, evolve_dense, operator_norm, pauli_decompose, to_dense};
use latcomm::pauli::{coefficient_of, iterated_commutant, sequence_operator, sign_census, AlphaIndex, AlphaString, PauliOperator, Region};
use latcomm::trees::{target_string, toy_unfolded_tree, RootedTree, BLOWUP_THRESHOLD};
use num_bigint::{BigInt, BigUint};
use num_complex::Complex64;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::config::ExperimentConfig;
use crate::report::{big, bigint, rational, Outcome, Table};
use crate::CliError;

/// Constructions are listed one by one to check each operator.
const MAX_LISTED_CONSTRUCTIONS: u64 = 100_000;

#[derive(Debug, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BlowupParams {
    /// Tree as {"root": [0,0], "edges": [[[x,y],[x,y]], ...]}; the small
    /// unfolded tree when absent.
    pub tree: Option<Value>,
    /// [x0, x1, y0, y1].
    pub region: [i32; 4],
    pub orders: Vec<usize>,
    pub scan: bool,
    pub scan_region: [i32; 4],
    pub scan_t_max: f64,
    pub scan_step: f64,
}

impl Default for BlowupParams {
    fn default() -> Self {
        BlowupParams {
            tree: None,
            region: [0, 4, -3, 1],
            orders: vec![6, 7, 8],
            scan: true,
            scan_region: [-1, 1, -1, 1],
            scan_t_max: 2.0,
            scan_step: 0.25,
        }
    }
}

fn rect(r: [i32; 4]) -> latcomm::Result<Region> {
    Region::rect(r[0], r[1], r[2], r[3])
}

/// Every construction of `t`: orderings where each edge hangs off a built vertex.
fn constructions(t: &RootedTree) -> Vec<Vec<Edge>> {
    fn go(t: &RootedTree, built: &mut Vec<Site>, left: &mut Vec<Edge>, cur: &mut Vec<Edge>, out: &mut Vec<Vec<Edge>>) {
        if left.is_empty() {
            out.push(cur.clone());
            return;
        }
        for i in 0..left.len() {
            let e = left[i];
            let (ina, inb) = (built.contains(&e.a()), built.contains(&e.b()));
            if ina == inb {
                continue;
            }
            left.remove(i);
            built.push(if ina { e.b() } else { e.a() });
            cur.push(e);
            go(t, built, left, cur, out);
            cur.pop();
            built.pop();
            left.insert(i, e);
        }
    }
    let mut out = vec![];
    go(t, &mut vec![t.root()], &mut t.edges().iter().copied().collect(), &mut vec![], &mut out);
    out
}

pub fn blowup(cfg: &mut ExperimentConfig) -> Result<Outcome, CliError> {
    let p: BlowupParams = cfg.typed()?;
    let tree = match &p.tree {
        Some(v) => RootedTree::from_json(v)?,
        None => toy_unfolded_tree(),
    };
    let region = rect(p.region)?;
    let nj = tree.len();
    let a = AlphaString::single(Site::xy(0, 0), AlphaIndex::A2);
    let target = target_string(&tree)?.to_alpha_string();
    let count = tree.construction_count();
    let mut out = Outcome::default();

    // Each construction on its own must give +2^n B.
    if count > BigUint::from(MAX_LISTED_CONSTRUCTIONS) {
        return Err(CliError::Budget(format!("{count} constructions exceed the listing cap {MAX_LISTED_CONSTRUCTIONS}")));
    }
    let list = constructions(&tree);
    let mut wrong = 0;
    for c in &list {
        let op = sequence_operator(&EdgeSequence::new(2, c.clone())?, &a)?;
        if op.as_ref() != Some(&target) {
            wrong += 1;
        }
    }
    out.verdict("target pattern", wrong == 0 && BigUint::from(list.len()) == count, format!("{} constructions, {wrong} not equal to +2^{nj} B", list.len()));

    let mut census = vec![];
    let mut at_nj = None;
    for &n in &p.orders {
        let c = sign_census(&a, n, &region, &target)?;
        out.verdict(format!("positivity n={n}"), c.negative == BigUint::default(), format!("{} positive, {} negative sequences", c.positive, c.negative));
        if (n + nj) % 2 == 1 {
            out.verdict(format!("odd order vanishes n={n}"), c.coefficient == BigInt::default(), format!("coefficient {}", c.coefficient));
        }
        census.push(json!({ "n": n, "positive": big(&c.positive), "negative": big(&c.negative), "coefficient": bigint(&c.coefficient) }));
        if n == nj {
            at_nj = Some(c);
        }
    }
    let at_nj = match at_nj {
        Some(c) => c,
        None => sign_census(&a, nj, &region, &target)?,
    };
    let ops = iterated_commutant(&PauliOperator::from_string(&region, &a)?, nj, &region)?;
    let coeff = coefficient_of(&ops[nj], &target);
    let realizing = BigInt::from(at_nj.positive.clone()) - BigInt::from(at_nj.negative.clone());
    let predicted = BigRational::from_integer(BigInt::from(2).pow(nj as u32) * &realizing);
    out.verdict("counting identity", coeff == predicted, format!("coefficient {} = 2^{nj} × {realizing}", rational(&coeff).as_str().unwrap()));
    out.verdict("constructions bound", at_nj.positive >= count, format!("{} realizing sequences ≥ {count} constructions", at_nj.positive));

    let mut scan = vec![];
    let mut table = Table::new(&["t", "norm", "hs_lower_bound"]);
    if p.scan {
        let r = rect(p.scan_region)?;
        let ap = PauliOperator::from_string(&r, &a)?;
        let steps = (p.scan_t_max / p.scan_step).round() as usize;
        let (mut prev, mut monotone, mut hs_ok) = (0.0f64, true, true);
        for k in 0..=steps {
            let t = k as f64 * p.scan_step;
            let m = evolve_dense(&ap, Complex64::new(0.0, t), &r)?;
            let norm = operator_norm(&m)?.value;
            let hs = pauli_decompose(&m, &r)?.hs_norm_lower_bound();
            monotone &= norm >= prev;
            hs_ok &= hs <= norm + 1e-9 * norm.max(1.0);
            prev = norm;
            table.push(vec![t.to_string(), norm.to_string(), hs.to_string()]);
            scan.push(json!({ "t": t, "norm": norm, "hs_lower_bound": hs }));
        }
        out.verdict("norm nondecreasing", monotone, format!("{} points up to t = {}", steps + 1, p.scan_t_max));
        out.verdict("coefficient bound below norm", hs_ok, "max |c_f| ≤ ‖τ_it(A)‖ at every t");
    }
    out.results = json!({
        "tree": tree.to_json(),
        "target": target.to_string(),
        "constructions": big(&count),
        "census": census,
        "coefficient": rational(&coeff),
        "scan": scan,
        "blowup_threshold": BLOWUP_THRESHOLD,
    });
    out.table = Some(table);
    Ok(out)
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CrosscheckParams {
    pub region: [i32; 4],
    /// [re, im].
    pub z: [f64; 2],
    pub order: usize,
    /// Largest accepted entrywise residual, on top of the tail-bound check.
    pub tolerance: f64,
}

impl Default for CrosscheckParams {
    fn default() -> Self {
        CrosscheckParams { region: [0, 2, -1, 0], z: [0.0, 0.3], order: 40, tolerance: 1e-8 }
    }
}

pub fn crosscheck(cfg: &mut ExperimentConfig) -> Result<Outcome, CliError> {
    let p: CrosscheckParams = cfg.typed()?;
    let r = rect(p.region)?;
    let a = PauliOperator::from_string(&r, &AlphaString::single(Site::xy(0, 0), AlphaIndex::A2))?;
    let z = Complex64::new(p.z[0], p.z[1]);
    let rep = oracle_crosscheck(&a, z, &r, p.order)?;
    let mut out = Outcome::default();
    out.verdict("within tail bound", rep.pass, format!("residual {:e} ≤ tail bound {:e} + 1e-8", rep.residual, rep.tail_bound));
    out.verdict("oracle agreement", rep.residual <= p.tolerance, format!("residual {:e} ≤ {:e}", rep.residual, p.tolerance));
    let mut results = json!({ "report": rep, "sites": r.num_sites() });
    if z.im == 0.0 {
        let dim = (1u64 << r.num_sites()) as f64;
        let before = to_dense(&a, &r)?.hs_norm() / dim.sqrt();
        let after = evolve_dense(&a, z, &r)?.hs_norm() / dim.sqrt();
        out.verdict("real-time isometry", (after - before).abs() <= 1e-9, format!("normalized HS norm {after} vs {before}"));
        results["hs_norm"] = json!({ "before": before, "after": after });
    }
    out.results = results;
    Ok(out)
}
