use latcomm::eden::{exponent_fit, perimeter_expectation_exact, perimeter_expectation_mc, theorem_exponent, EdenConfig};
use latcomm::lattice::{average_perimeter, EnumerationCaps};
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::config::ExperimentConfig;
use crate::report::{rational, rational_f64, Outcome};
use crate::CliError;

#[derive(Debug, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EdenParams {
    pub d: usize,
    pub steps: usize,
    pub trials: usize,
    /// Short high-statistics run compared with the exact values.
    pub check_steps: usize,
    pub check_trials: usize,
    pub exact_steps: usize,
}

impl Default for EdenParams {
    fn default() -> Self {
        EdenParams { d: 2, steps: 100_000, trials: 100, check_steps: 8, check_trials: 10_000, exact_steps: 8 }
    }
}

pub fn eden(cfg: &mut ExperimentConfig) -> Result<Outcome, CliError> {
    let p: EdenParams = cfg.typed()?;
    let seed = cfg.seed;
    let mut out = Outcome::default();
    let mut results = json!({ "seed": seed, "reference_exponent": theorem_exponent(p.d) });

    if p.d == 2 {
        let exact = perimeter_expectation_exact(p.exact_steps, 2)?;
        let small: Vec<String> = exact.iter().take(3).map(|r| r.to_string()).collect();
        out.verdict("exact steps 0-2", small == ["4", "6", "8"], format!("{small:?}"));

        let check = perimeter_expectation_mc(&EdenConfig { d: 2, steps: p.check_steps.max(2), seed, trials: p.check_trials })?;
        let off: Vec<usize> = (0..3).filter(|&i| (check.steps[i].mean - [4.0, 6.0, 8.0][i]).abs() > 3.0 * check.steps[i].stderr).collect();
        out.verdict("monte carlo steps 0-2", off.is_empty(), format!("{} trials, outside 3 standard errors at {off:?}", p.check_trials));

        // Uniform weight on histories against the Eden weight.
        let caps = EnumerationCaps::default();
        let mut rows = vec![];
        let mut first_difference = None;
        for (n, e) in exact.iter().enumerate() {
            let u = average_perimeter(n + 1, 2, &caps)?;
            if u != *e && first_difference.is_none() {
                first_difference = Some(n);
            }
            let mc = check.steps.get(n).map(|s| json!({ "mean": s.mean, "stderr": s.stderr }));
            rows.push(json!({ "step": n, "eden": rational(e), "eden_value": rational_f64(e), "uniform": rational(&u), "uniform_value": rational_f64(&u), "differ": u != *e, "monte_carlo": mc }));
        }
        out.verdict(
            "eden and uniform compared",
            rows.len() == p.exact_steps + 1,
            match first_difference {
                Some(n) => format!("first difference at step {n}"),
                None => "no difference in range".into(),
            },
        );
        results["comparison"] = json!(rows);
    }

    let series = perimeter_expectation_mc(&EdenConfig { d: p.d, steps: p.steps, seed, trials: p.trials })?;
    let fit = exponent_fit(&series.means())?;
    out.verdict("sublinear exponent", fit.alpha < 1.0, format!("alpha {:.4} (95% {:.4}..{:.4}), reference {:.4}", fit.alpha, fit.alpha_low, fit.alpha_high, theorem_exponent(p.d)));
    results["fit"] = json!(fit);
    results["final"] = json!(series.steps.last());
    out.csv = Some(series.to_csv());
    out.results = results;
    Ok(out)
}
