//! Property suites run by `submax verify`.

use serde::{Deserialize, Serialize};
use submax_core::constraint::{check_downward_closed, matroid_axiom_check, p_parameter};
use submax_core::function::properties::{
    check_monotone, check_nonneg_and_zero, check_submodular, CheckMode, CheckReport,
};
use submax_core::SimRng;

use crate::error::Result;
use crate::instance::Instance;

/// Samples used by the function checks once `n` exceeds the exhaustive cap.
pub const SAMPLED_CHECKS: usize = 20_000;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PropertyCheck {
    pub name: String,
    pub holds: bool,
    /// Informational checks do not affect the suite verdict.
    pub asserted: bool,
    pub exhaustive: bool,
    pub checked: Option<u64>,
    pub witness: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub instance: String,
    pub n: usize,
    pub checks: Vec<PropertyCheck>,
    /// Certified `p` of the constraint when it fits the cap.
    pub p_parameter: Option<f64>,
    pub pass: bool,
}

fn function_check(name: &str, asserted: bool, exhaustive: bool, r: CheckReport) -> PropertyCheck {
    PropertyCheck {
        name: name.into(),
        holds: r.holds,
        asserted,
        exhaustive,
        checked: Some(r.checked),
        witness: r.witness.map(|w| format!("{w:?}")),
    }
}

/// Non-negativity, submodularity and (informationally) monotonicity of the
/// function; downward closure and, for matroid constraints, the exchange
/// axiom. Function checks fall back to sampling from `seed` above `cap`;
/// constraint checks are skipped there.
pub fn property_suite(
    name: &str,
    instance: &Instance,
    cap: usize,
    seed: u64,
) -> Result<SuiteReport> {
    let f = instance.function()?;
    let n = instance.n;
    let exhaustive = n <= cap;
    let mode = if exhaustive {
        CheckMode::Exhaustive { cap }
    } else {
        CheckMode::Sampled {
            samples: SAMPLED_CHECKS,
            seed,
        }
    };
    let mut checks = vec![
        function_check(
            "non-negative, f(∅) = 0",
            true,
            exhaustive,
            check_nonneg_and_zero(&f, mode)?,
        ),
        function_check("submodular", true, exhaustive, check_submodular(&f, mode)?),
        function_check("monotone", false, exhaustive, check_monotone(&f, mode)?),
    ];
    let mut p = None;
    if let Some(c) = instance.constraint()? {
        if exhaustive {
            let down = check_downward_closed(&c, cap)?;
            checks.push(PropertyCheck {
                name: "downward closed".into(),
                holds: down.holds,
                asserted: true,
                exhaustive: true,
                checked: None,
                witness: down.witness.map(|w| format!("{w:?}")),
            });
            let axiom = matroid_axiom_check(&c, cap)?;
            checks.push(PropertyCheck {
                name: "matroid exchange".into(),
                holds: axiom.holds,
                asserted: c.is_matroid_family(),
                exhaustive: true,
                checked: None,
                witness: axiom.witness.map(|w| format!("{w:?}")),
            });
            p = Some(p_parameter(&c, cap)?.value());
        }
    }
    let pass = checks.iter().all(|c| c.holds || !c.asserted);
    Ok(SuiteReport {
        instance: name.into(),
        n,
        checks,
        p_parameter: p,
        pass,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UniformityReport {
    pub n: usize,
    pub samples: usize,
    pub chi_square: f64,
    pub dof: usize,
    pub critical: f64,
    pub pass: bool,
}

/// Lehmer-code rank of a permutation of `0..n`.
fn permutation_rank(perm: &[usize]) -> usize {
    let n = perm.len();
    let mut rank = 0;
    for i in 0..n {
        let smaller_after = perm[i + 1..].iter().filter(|&&x| x < perm[i]).count();
        rank = rank * (n - i) + smaller_after;
    }
    rank
}

/// Upper `1 - 0.001` quantile of χ² with `dof` degrees of freedom
/// (Wilson-Hilferty).
pub fn chi_square_critical(dof: usize) -> f64 {
    const Z: f64 = 3.090_232;
    let d = dof as f64;
    let h = 2.0 / (9.0 * d);
    d * (1.0 - h + Z * h.sqrt()).powi(3)
}

/// Pearson χ² test of `Stream::uniform` orders over all `n!` permutations.
pub fn permutation_uniformity(n: usize, samples: usize, seed: u64) -> UniformityReport {
    let cells: usize = (1..=n).product();
    let mut counts = vec![0u64; cells];
    let mut rng = SimRng::new(seed);
    for _ in 0..samples {
        let stream = submax_core::secretary::Stream::uniform(n, &mut rng);
        counts[permutation_rank(stream.order())] += 1;
    }
    let expected = samples as f64 / cells as f64;
    let chi_square = counts
        .iter()
        .map(|&c| {
            let d = c as f64 - expected;
            d * d / expected
        })
        .sum();
    let dof = cells.saturating_sub(1).max(1);
    let critical = chi_square_critical(dof);
    UniformityReport {
        n,
        samples,
        chi_square,
        dof,
        critical,
        pass: chi_square <= critical,
    }
}
