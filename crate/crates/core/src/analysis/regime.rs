//! Existence/non-existence regime from the exponents `(α, β, p)`, the data
//! support flags and the structural conditions on the kernel profiles.
//!
//! Decision order (first match wins):
//!
//! | case | condition | verdict |
//! |------|-----------|---------|
//! | a | `f ≠ 0`, `α ≤ β` | `NonexistenceAlphaLeBeta` |
//! | b | `f ≠ 0`, `α > β`, `p < α/(α−β)` | `NonexistenceIntermediate` |
//! | c | data `≠ 0`, `p < 1 + β/α` | `NonexistenceSubcritical` |
//! | d | data `≠ 0`, `p = 1 + β/α`, profile conditions, conservative | `NonexistenceCritical` |
//! | e | `α > β`, `p > α/(α−β)`, `Φ₂` moment finite, conservative | `GlobalExistenceSmallData` |
//! | f | otherwise | `Indeterminate` |

use std::fmt;

use crate::error::{invalid, Result};
use crate::profiles::ProfilePredicateReport;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Verdict {
    NonexistenceSubcritical,
    NonexistenceCritical,
    NonexistenceAlphaLeBeta,
    NonexistenceIntermediate,
    GlobalExistenceSmallData,
    Indeterminate,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

pub const TAG_SUBCRITICAL: &str = "thm2.3(i)";
pub const TAG_ALPHA_LE_BETA: &str = "thm2.3(ii)";
pub const TAG_INTERMEDIATE: &str = "thm2.3(iii)";
pub const TAG_CRITICAL: &str = "thm2.4";
pub const TAG_SMALL_DATA: &str = "thm3.4";
pub const TAG_NONE: &str = "none";

/// Condition flags consumed by the classifier.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct RegimeConditions {
    pub general1: bool,
    pub general4: bool,
    pub general2: bool,
    pub phi_integrable: bool,
    pub conservative: bool,
}

impl RegimeConditions {
    pub fn from_report(report: &ProfilePredicateReport, conservative: bool) -> Self {
        Self {
            general1: report.general1.holds,
            general4: report.general4.holds,
            general2: report.general2.holds,
            phi_integrable: report.phi_integrable.finite,
            conservative,
        }
    }

    pub fn all() -> Self {
        Self { general1: true, general4: true, general2: true, phi_integrable: true, conservative: true }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RegimeVerdict {
    pub verdict: Verdict,
    pub cited_case: &'static str,
    /// Further theorem cases that also apply.
    pub also_cited: Vec<&'static str>,
    /// Names of the flags and comparisons the verdict relied on.
    pub required_conditions: Vec<&'static str>,
    /// Set for `GlobalExistenceSmallData`: the small-data hypothesis is not
    /// decidable from exponents alone.
    pub conditional: bool,
    /// `1 + β/α`
    pub fujita_exponent: f64,
    /// `α/(α−β)` when `α > β`.
    pub intermediate_exponent: Option<f64>,
}

const EQ_TOL: f64 = 1e-12;

fn approx_eq(a: f64, b: f64) -> bool {
    (a - b).abs() <= EQ_TOL * a.abs().max(b.abs())
}

fn strictly_less(a: f64, b: f64) -> bool {
    a < b && !approx_eq(a, b)
}

pub fn classify_regime(
    alpha: f64,
    beta: f64,
    p: f64,
    phi_nonzero: bool,
    f_nonzero: bool,
    conditions: &RegimeConditions,
) -> Result<RegimeVerdict> {
    if !alpha.is_finite() || !beta.is_finite() || !p.is_finite() {
        return invalid("classifier inputs must be finite");
    }
    if !(alpha > 0.0) || !(beta > 0.0) {
        return invalid(format!("alpha and beta must be positive, got {alpha}, {beta}"));
    }
    if !(p > 1.0) {
        return invalid(format!("exponent p must exceed 1, got {p}"));
    }
    let fujita = 1.0 + beta / alpha;
    let intermediate = (alpha > beta).then(|| alpha / (alpha - beta));
    let data_nonzero = phi_nonzero || f_nonzero;
    let verdict = |verdict, cited_case, also_cited, required_conditions, conditional| RegimeVerdict {
        verdict,
        cited_case,
        also_cited,
        required_conditions,
        conditional,
        fujita_exponent: fujita,
        intermediate_exponent: intermediate,
    };

    if f_nonzero && alpha <= beta {
        return Ok(verdict(
            Verdict::NonexistenceAlphaLeBeta,
            TAG_ALPHA_LE_BETA,
            vec![],
            vec!["f_nonzero", "alpha<=beta"],
            false,
        ));
    }
    if let (true, Some(q)) = (f_nonzero, intermediate) {
        if strictly_less(p, q) {
            let also = if strictly_less(p, fujita) { vec![TAG_SUBCRITICAL] } else { vec![] };
            return Ok(verdict(
                Verdict::NonexistenceIntermediate,
                TAG_INTERMEDIATE,
                also,
                vec!["f_nonzero", "alpha>beta", "p<alpha/(alpha-beta)"],
                false,
            ));
        }
    }
    if data_nonzero && strictly_less(p, fujita) {
        return Ok(verdict(
            Verdict::NonexistenceSubcritical,
            TAG_SUBCRITICAL,
            vec![],
            vec!["data_nonzero", "p<1+beta/alpha"],
            false,
        ));
    }
    if data_nonzero
        && approx_eq(p, fujita)
        && conditions.general1
        && conditions.general4
        && conditions.general2
        && conditions.conservative
    {
        return Ok(verdict(
            Verdict::NonexistenceCritical,
            TAG_CRITICAL,
            vec![],
            vec!["data_nonzero", "p=1+beta/alpha", "general1", "general4", "general2", "conservative"],
            false,
        ));
    }
    if let Some(q) = intermediate {
        if p > q && !approx_eq(p, q) && conditions.phi_integrable && conditions.conservative {
            return Ok(verdict(
                Verdict::GlobalExistenceSmallData,
                TAG_SMALL_DATA,
                vec![],
                vec!["alpha>beta", "p>alpha/(alpha-beta)", "phi_integrable", "conservative"],
                true,
            ));
        }
    }
    Ok(verdict(Verdict::Indeterminate, TAG_NONE, vec![], vec![], false))
}
