//! One runnable check per inequality. Each check sweeps its parameters,
//! records measured left and right sides, fits the constants or slopes that
//! must stay bounded, and returns an [`InequalityReport`].
//!
//! "A ≲ B" is read as: the fitted constant exists, is finite, and stays
//! within the stated spread (or cap) over every parameter the constant may
//! not depend on. Slopes are fitted in log₂ units; a regression with
//! `R² < 0.9` makes the check inconclusive rather than passing.

mod commutator;
mod lemmas;
mod symbols;
mod wellposedness;

pub use commutator::check_commutator_decay;
pub use lemmas::{check_bernstein, check_heat_kernel, check_lin_gevrey, check_positivity};
pub use symbols::{
    check_bilinear, check_concavity, check_r_derivatives, concavity_f, concavity_g,
    in_concavity_region,
};
pub use wellposedness::check_wellposedness;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::fit::LineFit;
use crate::{Error, Result};

/// Minimum coefficient of determination for a slope verdict.
pub const MIN_R_SQUARED: f64 = 0.9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CheckId {
    Bernstein,
    GeneralizedBernstein,
    Positivity,
    HeatKernel,
    LinGevrey,
    Concavity,
    RDerivatives,
    CommutatorDecay,
    Wellposedness,
    Bilinear,
}

impl CheckId {
    pub const ALL: [CheckId; 10] = [
        CheckId::Bernstein,
        CheckId::GeneralizedBernstein,
        CheckId::Positivity,
        CheckId::HeatKernel,
        CheckId::LinGevrey,
        CheckId::Concavity,
        CheckId::RDerivatives,
        CheckId::CommutatorDecay,
        CheckId::Wellposedness,
        CheckId::Bilinear,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            CheckId::Bernstein => "bernstein",
            CheckId::GeneralizedBernstein => "generalized-bernstein",
            CheckId::Positivity => "positivity",
            CheckId::HeatKernel => "heat-kernel",
            CheckId::LinGevrey => "lin-gevrey",
            CheckId::Concavity => "concavity",
            CheckId::RDerivatives => "r-derivatives",
            CheckId::CommutatorDecay => "commutator-decay",
            CheckId::Wellposedness => "wellposedness",
            CheckId::Bilinear => "bilinear",
        }
    }
}

impl fmt::Display for CheckId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CheckId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        CheckId::ALL
            .into_iter()
            .find(|c| c.name() == s || c.name().replace('-', "_") == s)
            .ok_or_else(|| {
                Error::Config(format!(
                    "unknown check `{s}`; valid checks: {}",
                    CheckId::ALL.map(|c| c.name()).join(", ")
                ))
            })
    }
}

/// Parameters of one check run. Exponent sets not used by a check are
/// ignored by it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckConfig {
    pub check_id: CheckId,
    pub n: usize,
    pub box_length: f64,
    /// Inclusive dyadic range.
    pub j_range: (i32, i32),
    pub p: Vec<f64>,
    pub s: Vec<f64>,
    pub alpha: Vec<f64>,
    pub kappa: Vec<f64>,
    pub gamma: Vec<f64>,
    /// Ratios `|ξ|/|η| ≥ c` for the concavity scan.
    pub c: Vec<f64>,
    /// Interpolation parameters `σ ∈ [0, 1]` for the `R_{α,σ}` check.
    pub sigma: Vec<f64>,
    /// Scale separations `k − ℓ` for the `R_{α,σ}` check.
    pub separations: Vec<i32>,
    /// `(s, t, p)` triples for the commutator check.
    pub triples: Vec<[f64; 3]>,
    pub times: Vec<f64>,
    pub amplitudes: Vec<f64>,
    pub delta: f64,
    pub beta: f64,
    pub lambda: f64,
    pub dt: f64,
    pub t_end: f64,
    pub picard_depth: usize,
    pub max_order: u32,
    pub trials: usize,
    pub seed: u64,
    pub slope_slack: f64,
    pub constant_cap: f64,
    /// Evaluate pointwise powers on a 2× padded grid.
    pub padding: bool,
    /// Reject parameter sets outside the theorem's hypotheses. When off,
    /// such runs proceed and the report is tagged.
    pub enforce_hypotheses: bool,
}

impl CheckConfig {
    /// Defaults for each check, matching the sweeps the estimates are
    /// verified on.
    pub fn default_for(check_id: CheckId) -> Self {
        let base = CheckConfig {
            check_id,
            n: 64,
            box_length: std::f64::consts::TAU,
            j_range: (0, 4),
            p: vec![2.0, 4.0, 8.0],
            s: vec![0.25, 0.5, 1.0],
            alpha: vec![0.3],
            kappa: vec![0.8],
            gamma: vec![0.0],
            c: vec![],
            sigma: vec![],
            separations: vec![],
            triples: vec![],
            times: vec![],
            amplitudes: vec![],
            delta: 0.1,
            beta: 0.3,
            lambda: 1.0,
            dt: 0.01,
            t_end: 0.5,
            picard_depth: 6,
            max_order: 2,
            trials: 500,
            seed: 1,
            slope_slack: 0.2,
            constant_cap: 50.0,
            padding: false,
            enforce_hypotheses: true,
        };
        match check_id {
            CheckId::Bernstein | CheckId::GeneralizedBernstein => CheckConfig {
                n: 128,
                j_range: (0, 5),
                ..base
            },
            CheckId::Positivity => CheckConfig {
                p: vec![2.0, 4.0, 6.0],
                s: vec![0.25, 0.5, 0.9],
                trials: 200,
                ..base
            },
            CheckId::HeatKernel => CheckConfig {
                n: 128,
                j_range: (1, 5),
                p: vec![2.0, 4.0],
                kappa: vec![0.5, 0.8],
                times: vec![0.01, 0.03, 0.1, 0.3, 1.0],
                trials: 20,
                ..base
            },
            CheckId::LinGevrey => CheckConfig {
                p: vec![2.0, 4.0],
                alpha: vec![0.3],
                kappa: vec![0.8],
                gamma: vec![0.01, 0.1, 0.5],
                trials: 20,
                ..base
            },
            CheckId::Concavity => CheckConfig {
                alpha: vec![0.3, 0.5, 0.9],
                c: vec![0.5, 1.0, 2.0],
                trials: 10,
                ..base
            },
            CheckId::RDerivatives => CheckConfig {
                alpha: vec![0.3, 0.7],
                sigma: vec![0.0, 0.5, 1.0],
                separations: vec![3, 4, 5, 6, 7],
                j_range: (-1, 1),
                trials: 8,
                ..base
            },
            CheckId::CommutatorDecay => CheckConfig {
                n: 128,
                j_range: (1, 5),
                triples: vec![[1.2, 0.3, 2.0]],
                alpha: vec![0.4],
                gamma: vec![0.0, 0.1],
                trials: 50,
                ..base
            },
            CheckId::Wellposedness => CheckConfig {
                n: 128,
                p: vec![2.0],
                alpha: vec![0.4],
                kappa: vec![0.8],
                amplitudes: vec![0.01, 0.1, 1.0],
                times: vec![1.0, 0.3, 0.1, 0.03, 0.01, 1e-3, 1e-4],
                t_end: 2.0,
                trials: 1,
                ..base
            },
            CheckId::Bilinear => CheckConfig {
                n: 16,
                p: vec![4.0],
                gamma: vec![0.1],
                alpha: vec![0.5],
                trials: 50,
                ..base
            },
        }
    }
}

/// One measured instance of an inequality.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub label: String,
    pub lhs: f64,
    pub rhs: f64,
    pub ratio: f64,
}

/// A fitted quantity and its verdict against a tolerance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitRecord {
    pub name: String,
    pub value: f64,
    /// The tolerance the value was compared with, when there is one.
    pub bound: Option<f64>,
    pub residual: Option<f64>,
    pub r_squared: Option<f64>,
    pub pass: bool,
    pub inconclusive: bool,
}

impl FitRecord {
    /// `value ≤ bound` (finite).
    pub fn at_most(name: impl Into<String>, value: f64, bound: f64) -> Self {
        FitRecord {
            name: name.into(),
            value,
            bound: Some(bound),
            residual: None,
            r_squared: None,
            pass: value.is_finite() && value <= bound,
            inconclusive: false,
        }
    }

    /// `value ≥ bound`.
    pub fn at_least(name: impl Into<String>, value: f64, bound: f64) -> Self {
        FitRecord {
            pass: value.is_finite() && value >= bound,
            ..FitRecord::at_most(name, value, bound)
        }
    }

    /// A reported quantity without a verdict of its own.
    pub fn info(name: impl Into<String>, value: f64) -> Self {
        FitRecord {
            name: name.into(),
            value,
            bound: None,
            residual: None,
            r_squared: None,
            pass: true,
            inconclusive: false,
        }
    }

    /// `slope ≤ bound`, inconclusive when the fit explains too little.
    pub fn slope_at_most(name: impl Into<String>, fit: Option<LineFit>, bound: f64) -> Self {
        match fit {
            Some(f) => {
                let inconclusive = f.r_squared < MIN_R_SQUARED;
                FitRecord {
                    name: name.into(),
                    value: f.slope,
                    bound: Some(bound),
                    residual: Some(f.residual),
                    r_squared: Some(f.r_squared),
                    pass: !inconclusive && f.slope <= bound,
                    inconclusive,
                }
            }
            None => FitRecord {
                name: name.into(),
                value: f64::NAN,
                bound: Some(bound),
                residual: None,
                r_squared: None,
                pass: false,
                inconclusive: true,
            },
        }
    }

    /// `slope ≥ bound`, inconclusive when the fit explains too little.
    pub fn slope_at_least(name: impl Into<String>, fit: Option<LineFit>, bound: f64) -> Self {
        let mut r = FitRecord::slope_at_most(name, fit, bound);
        if !r.inconclusive {
            r.pass = r.value >= bound;
        }
        r
    }

    pub fn with_residual(mut self, residual: f64) -> Self {
        self.residual = Some(residual);
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    Inconclusive,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::Inconclusive => "inconclusive",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InequalityReport {
    pub check_id: CheckId,
    pub config: CheckConfig,
    pub trials: Vec<TrialRecord>,
    pub fits: Vec<FitRecord>,
    pub verdict: Verdict,
    pub notes: Vec<String>,
    pub environment: Vec<(String, String)>,
}

impl InequalityReport {
    pub fn new(config: &CheckConfig) -> Self {
        InequalityReport {
            check_id: config.check_id,
            config: config.clone(),
            trials: Vec::new(),
            fits: Vec::new(),
            verdict: Verdict::Pass,
            notes: Vec::new(),
            environment: vec![
                (
                    "crate".into(),
                    format!("sqg-core {}", env!("CARGO_PKG_VERSION")),
                ),
                ("arch".into(), std::env::consts::ARCH.into()),
                ("os".into(), std::env::consts::OS.into()),
            ],
        }
    }

    pub fn trial(&mut self, label: impl Into<String>, lhs: f64, rhs: f64) {
        self.trials.push(TrialRecord {
            label: label.into(),
            lhs,
            rhs,
            ratio: lhs / rhs,
        });
    }

    pub fn fit(&mut self, fit: FitRecord) {
        self.fits.push(fit);
    }

    pub fn note(&mut self, note: impl Into<String>) {
        self.notes.push(note.into());
    }

    /// Sets the verdict from the fits: any failure fails, otherwise any
    /// inconclusive fit makes the report inconclusive.
    pub fn finish(mut self) -> Self {
        self.verdict = if self.fits.iter().any(|f| !f.pass && !f.inconclusive) {
            Verdict::Fail
        } else if self.fits.iter().any(|f| f.inconclusive) {
            Verdict::Inconclusive
        } else {
            Verdict::Pass
        };
        self
    }

    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }

    /// Headline fit: the first failure, else the first inconclusive fit,
    /// else the first fit with a bound.
    pub fn key_fit(&self) -> Option<&FitRecord> {
        self.fits
            .iter()
            .find(|f| f.bound.is_some() && !f.pass && !f.inconclusive)
            .or_else(|| self.fits.iter().find(|f| f.inconclusive))
            .or_else(|| self.fits.iter().find(|f| f.bound.is_some()))
            .or(self.fits.first())
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    /// Summary CSV row: check id, verdict, key constant, residual.
    pub fn summary_row(&self) -> String {
        let (value, residual) = self
            .key_fit()
            .map(|f| (f.value, f.residual.unwrap_or(f64::NAN)))
            .unwrap_or((f64::NAN, f64::NAN));
        format!(
            "{},{},{:.6e},{:.6e}",
            self.check_id, self.verdict, value, residual
        )
    }
}

pub const SUMMARY_HEADER: &str = "check_id,verdict,key_constant,residual";

/// Runs the check named by `cfg.check_id`.
pub fn run_check(cfg: &CheckConfig) -> Result<InequalityReport> {
    match cfg.check_id {
        CheckId::Bernstein => check_bernstein(cfg, false),
        CheckId::GeneralizedBernstein => check_bernstein(cfg, true),
        CheckId::Positivity => check_positivity(cfg),
        CheckId::HeatKernel => check_heat_kernel(cfg),
        CheckId::LinGevrey => check_lin_gevrey(cfg),
        CheckId::Concavity => check_concavity(cfg),
        CheckId::RDerivatives => check_r_derivatives(cfg),
        CheckId::CommutatorDecay => check_commutator_decay(cfg),
        CheckId::Wellposedness => check_wellposedness(cfg),
        CheckId::Bilinear => check_bilinear(cfg),
    }
}

/// `(min, max)` of a slice, ignoring NaN.
pub(crate) fn min_max(values: impl IntoIterator<Item = f64>) -> (f64, f64) {
    values
        .into_iter()
        .filter(|v| !v.is_nan())
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), v| {
            (a.min(v), b.max(v))
        })
}

pub(crate) fn check_grid(cfg: &CheckConfig) -> Result<crate::Grid> {
    crate::Grid::new(cfg.n, cfg.box_length)
}

pub(crate) fn check_j_range(
    sys: &crate::littlewood_paley::DyadicSystem,
    cfg: &CheckConfig,
) -> Result<()> {
    let (lo, hi) = cfg.j_range;
    if lo > hi || lo < sys.j_min() || hi > sys.j_max() {
        return Err(Error::Config(format!(
            "dyadic range [{lo}, {hi}] is not resolved on a {}-grid (resolved: [{}, {}])",
            cfg.n,
            sys.j_min(),
            sys.j_max()
        )));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn check_ids_round_trip() {
        for id in CheckId::ALL {
            assert_eq!(id.name().parse::<CheckId>().unwrap(), id);
        }
        assert!("nonsense".parse::<CheckId>().is_err());
    }

    #[test]
    fn verdict_logic() {
        let cfg = CheckConfig::default_for(CheckId::Concavity);
        let mut r = InequalityReport::new(&cfg);
        r.fit(FitRecord::at_most("a", 1.0, 2.0));
        assert_eq!(r.clone().finish().verdict, Verdict::Pass);
        r.fit(FitRecord::slope_at_most("b", None, 0.0));
        assert_eq!(r.clone().finish().verdict, Verdict::Inconclusive);
        r.fit(FitRecord::at_least("c", 1.0, 2.0));
        let done = r.finish();
        assert_eq!(done.verdict, Verdict::Fail);
        assert!(done.summary_row().starts_with("concavity,fail,1.0"));
        let flat = crate::fit::fit_line(&[0.0, 1.0, 2.0], &[0.0, 0.1, -0.1]);
        assert!(FitRecord::slope_at_most("d", flat, 1.0).inconclusive);
    }
}
