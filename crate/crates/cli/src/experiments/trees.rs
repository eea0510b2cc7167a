//! The parity table, the construction-count formula and the tree families.

use latcomm::trees::{
    comb_parameters, family_weight_bound, family_weight_product, generate_family, paper_parameters, toy_weight_chain,
    tree_catalog, validate_even_separation, verify_table, FamilyMode, FamilyParams, Parity, ParityVector, Transition,
};
use num_bigint::BigUint;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::config::ExperimentConfig;
use crate::report::{Outcome, Table};
use crate::CliError;

#[derive(Debug, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct NoParams {}

fn parity_digits(p: &ParityVector) -> String {
    [p.a, p.bc, p.d, p.e, p.fg].iter().map(|x| if *x == Parity::Odd { '1' } else { '0' }).collect()
}

/// "x₁x₂ x₁'x₂' multiplier" with z for a vanishing commutator.
fn transition_text(t: &Transition) -> String {
    let after = |a: Option<latcomm::pauli::AlphaIndex>| a.map_or('z', |a| a.digit());
    format!("{}{} {}{} {}", t.x1.digit(), t.x2.digit(), after(t.x1_after), after(t.x2_after), t.multiplier)
}

pub fn table1(cfg: &mut ExperimentConfig) -> Result<Outcome, CliError> {
    let _: NoParams = cfg.typed()?;
    let rows = verify_table();
    let mut out = Outcome::default();
    let mut table = Table::new(&["row", "parities", "printed", "horizontal", "vertical", "pass"]);
    for r in &rows {
        let h = r.horizontal.as_ref().map_or("unreachable".into(), transition_text);
        let v = r.vertical.as_ref().map_or("unreachable".into(), transition_text);
        let detail = if r.mismatches.is_empty() {
            format!("{} reproduced", transition_text(&r.printed))
        } else {
            format!("printed {}, computed {h}; differs in {}", transition_text(&r.printed), r.mismatches.join(", "))
        };
        out.verdict(format!("row {:02}", r.row), r.pass, detail);
        table.push(vec![r.row.to_string(), parity_digits(&r.parities), transition_text(&r.printed), h, v, r.pass.to_string()]);
    }
    let rule: Vec<usize> = rows.iter().filter(|r| !r.rule_holds).map(|r| r.row).collect();
    out.verdict("multiplier rule", rule.is_empty(), format!("nonzero iff bc ≠ fg, sign (−1)^fg; failures {rule:?}"));
    out.results = json!({ "rows": rows });
    out.table = Some(table);
    Ok(out)
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct KupinParams {
    pub max_edges: usize,
    pub d: usize,
}

impl Default for KupinParams {
    fn default() -> Self {
        KupinParams { max_edges: 7, d: 2 }
    }
}

pub fn kupin(cfg: &mut ExperimentConfig) -> Result<Outcome, CliError> {
    let p: KupinParams = cfg.typed()?;
    let catalog = tree_catalog(p.max_edges, p.d)?;
    let mut out = Outcome::default();
    let mut table = Table::new(&["edges", "trees", "mismatches"]);
    let mut sizes = vec![];
    for (n, trees) in catalog.iter().enumerate() {
        let bad = trees
            .par_iter()
            .map(|t| Ok(BigUint::from(t.brute_force_constructions()?) != t.construction_count()))
            .collect::<latcomm::Result<Vec<bool>>>()?
            .into_iter()
            .filter(|&b| b)
            .count();
        out.verdict(format!("kupin n={n}"), bad == 0, format!("{} rooted trees, {bad} mismatches", trees.len()));
        table.push(vec![n.to_string(), trees.len().to_string(), bad.to_string()]);
        sizes.push(json!({ "edges": n, "trees": trees.len(), "mismatches": bad }));
    }
    out.results = json!({ "d": p.d, "sizes": sizes, "total_trees": catalog.iter().map(Vec::len).sum::<usize>() });
    out.table = Some(table);
    Ok(out)
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TreeFamilyParams {
    /// Largest level of the full-size family evaluated in log space.
    pub levels: usize,
    /// Largest level of the small drawn family.
    pub toy_levels: usize,
}

impl Default for TreeFamilyParams {
    fn default() -> Self {
        TreeFamilyParams { levels: 5, toy_levels: 2 }
    }
}

pub fn tree_family(cfg: &mut ExperimentConfig) -> Result<Outcome, CliError> {
    let p: TreeFamilyParams = cfg.typed()?;
    let mut out = Outcome::default();
    let mut table = Table::new(&["k", "bound_factor", "relaxed_factor", "plain_factor", "n_factor", "chain_holds"]);

    let params = (1..=p.levels).map(paper_parameters).collect::<latcomm::Result<Vec<_>>>()?;
    let e2 = params.first().and_then(|x| x.log4_e2);
    out.verdict("log4 E2 = 2^20", e2 == Some(1 << 20), format!("{e2:?}"));
    let mut bounds = vec![];
    for k in 2..=p.levels {
        let b = family_weight_bound(k)?;
        out.verdict(
            format!("weight chain k={k}"),
            b.chain_holds,
            format!("ln ∏w ≤ {:.12} E_k ≤ {:.12} E_k < {:.12} E_k < {:.12} E_k", b.bound_factor, b.relaxed_factor, b.plain_factor, b.n_factor),
        );
        table.push(vec![
            k.to_string(),
            b.bound_factor.to_string(),
            b.relaxed_factor.to_string(),
            b.plain_factor.to_string(),
            b.n_factor.to_string(),
            b.chain_holds.to_string(),
        ]);
        bounds.push(json!({
            "k": k,
            "ln_series": finite_or_null(b.ln_series),
            "ln_first_term": b.ln_first_term,
            "series_below_twice_first": b.series_below_twice_first,
            "bound_factor": b.bound_factor,
            "relaxed_factor": b.relaxed_factor,
            "plain_factor": b.plain_factor,
            "n_factor": b.n_factor,
            "log4_ln_bound": b.log4_ln_bound.to_string(),
        }));
    }

    let mut toys = vec![];
    for k in 1..=p.toy_levels {
        for mode in [FamilyMode::Folded, FamilyMode::Unfolded] {
            let fp = FamilyParams::toy(k, mode)?;
            let t = generate_family(&fp)?;
            let closed = family_weight_product(&fp)?;
            let name = format!("{mode:?} k={k}").to_lowercase();
            out.verdict(format!("closed-form weights {name}"), closed == t.weight_product(), "recursion equals the drawn tree");
            let even = validate_even_separation(&t);
            if mode == FamilyMode::Unfolded {
                out.verdict(format!("even separation {name}"), even, "branch points and turns at even distances");
            }
            toys.push(json!({
                "k": k,
                "mode": mode,
                "levels": fp.e,
                "segment_lengths": fp.l,
                "spacings": fp.spacing,
                "edges": t.len(),
                "ln_weight_product": t.ln_weight_product(),
                "ln_constructions": t.log_construction_count(),
                "ln_weight_chain": if fp.e.len() >= 3 { json!(toy_weight_chain(&fp.e)?) } else { json!(null) },
                "even_separation": even,
            }));
        }
    }
    let combs = [8u32, 16]
        .iter()
        .map(|&m| comb_parameters(m).map(|(s, l, g)| json!({ "log4_n": m, "segments": s, "segment_length": l, "spacing": g })))
        .collect::<latcomm::Result<Vec<_>>>()?;
    out.results = json!({
        "paper_parameters": params.iter().map(|x| json!({
            "k": x.k,
            "log4_e": x.log4_e.iter().map(|t| t.to_string()).collect::<Vec<_>>(),
            "log4_l": x.log4_l.iter().map(|t| t.to_string()).collect::<Vec<_>>(),
            "n_over_e": x.n_over_e,
            "log4_n": x.log4_n.to_string(),
        })).collect::<Vec<_>>(),
        "weight_bounds": bounds,
        "toy_families": toys,
        "combs": combs,
    });
    out.table = Some(table);
    Ok(out)
}

fn finite_or_null(x: f64) -> serde_json::Value {
    if x.is_finite() {
        json!(x)
    } else {
        serde_json::Value::Null
    }
}
