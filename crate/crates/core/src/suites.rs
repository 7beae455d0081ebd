//! Named verification suites, as selected by `verify --suite`.

use std::fmt;
use std::str::FromStr;

use crate::alphapoly::{integer, rational, Alpha};
use crate::error::{param, Error, Result};
use crate::gegenbauer::{from_recurrence, GegenbauerSpec};
use crate::parallel::Execution;
use crate::quadrature::{
    normalization_audit, normalization_oracle_report, orthogonality_report, substitution_consistency_report, NormGrid,
    NormalizationAudit, QuadratureConfig,
};
use crate::verify::{self, Grid, VerificationReport};
use crate::AlphaPoly;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    All,
    Constructors,
    Ode,
    Gf,
    Identities,
    Special,
    Orthogonality,
    Normalization,
    Audit,
    NormalizationAudit,
}

impl Suite {
    pub const NAMES: [&'static str; 10] = [
        "all",
        "constructors",
        "ode",
        "gf",
        "identities",
        "special",
        "orthogonality",
        "normalization",
        "audit",
        "normalization-audit",
    ];

    const ALL: [Suite; 10] = [
        Suite::All,
        Suite::Constructors,
        Suite::Ode,
        Suite::Gf,
        Suite::Identities,
        Suite::Special,
        Suite::Orthogonality,
        Suite::Normalization,
        Suite::Audit,
        Suite::NormalizationAudit,
    ];

    pub fn name(self) -> &'static str {
        let i = Self::ALL.iter().position(|s| *s == self).unwrap();
        Self::NAMES[i]
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::NAMES
            .iter()
            .position(|n| *n == s)
            .map(|i| Self::ALL[i])
            .ok_or_else(|| param(format!("unknown suite {s:?}; expected one of {}", Self::NAMES.join(", "))))
    }
}

/// Deliberately wrong constructors for exercising the failure path.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Fault {
    /// Replaces `C_n` by `C_n + x^a` for every `n ≥ 1`.
    OdeExtraTerm,
}

#[derive(Clone, Debug)]
pub struct SuiteOptions {
    /// Grid for the exact identity suites.
    pub grid: Grid,
    pub orthogonality_grid: NormGrid,
    pub normalization_grid: NormGrid,
    pub audit_grid: NormGrid,
    pub quadrature: QuadratureConfig,
    /// Replaces every numeric tolerance when set.
    pub tolerance: Option<f64>,
    pub exec: Execution,
    pub fault: Option<Fault>,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        let alphas = |xs: &[&str]| xs.iter().map(|a| Alpha::parse(a).unwrap()).collect::<Vec<_>>();
        Self {
            grid: Grid::standard(),
            orthogonality_grid: NormGrid {
                n_max: 8,
                lambdas: vec![integer(1), integer(3)],
                alphas: alphas(&["1/2", "1"]),
            },
            normalization_grid: NormGrid {
                n_max: 6,
                lambdas: vec![integer(1), integer(3)],
                alphas: alphas(&["1/4", "1/2", "1"]),
            },
            audit_grid: NormGrid::audit_default(),
            quadrature: QuadratureConfig::default(),
            tolerance: None,
            exec: Execution::default(),
            fault: None,
        }
    }
}

impl SuiteOptions {
    fn tol(&self, default: f64) -> f64 {
        self.tolerance.unwrap_or(default)
    }
}

#[derive(Clone, Debug, Default)]
pub struct SuiteRun {
    pub reports: Vec<VerificationReport>,
    /// Present when the normalisation audit ran.
    pub audit_table: Option<NormalizationAudit>,
}

impl SuiteRun {
    pub fn blocking_failures(&self) -> usize {
        self.reports.iter().filter(|r| r.is_blocking_failure()).count()
    }

    pub fn passed(&self) -> bool {
        self.blocking_failures() == 0
    }

    fn extend(&mut self, other: SuiteRun) {
        self.reports.extend(other.reports);
        if other.audit_table.is_some() {
            self.audit_table = other.audit_table;
        }
    }
}

fn faulty_constructor(fault: Fault) -> impl Fn(&GegenbauerSpec) -> Result<AlphaPoly> + Sync + Send {
    move |spec| {
        let p = from_recurrence(spec)?;
        match fault {
            Fault::OdeExtraTerm if spec.n >= 1 => p.checked_add(&AlphaPoly::x_alpha(spec.alpha.clone())),
            Fault::OdeExtraTerm => Ok(p),
        }
    }
}

pub fn run_suite(suite: Suite, opts: &SuiteOptions) -> Result<SuiteRun> {
    let exec = opts.exec;
    let grid = &opts.grid;
    let reports = match suite {
        Suite::All => {
            let mut run = SuiteRun::default();
            for s in &Suite::ALL[1..] {
                run.extend(run_suite(*s, opts)?);
            }
            return Ok(run);
        }
        Suite::Constructors => vec![
            verify::constructor_agreement(grid, exec),
            verify::structural_properties(grid, exec),
        ],
        Suite::Ode => vec![match opts.fault {
            Some(f) => verify::ode_annihilation_with(grid, exec, faulty_constructor(f)),
            None => verify::ode_annihilation(grid, exec),
        }],
        Suite::Gf => vec![verify::generating_function_equivalence(
            &[rational(1, 2), integer(1), integer(3)],
            grid.n_max.min(10),
            exec,
        )],
        Suite::Identities => {
            let mut out = vec![verify::diff_relation_suite(grid, 3, grid.n_max.min(8), exec)];
            out.extend(verify::recurrence_suite(grid, 1, grid.n_max.saturating_sub(1).max(1), exec));
            out.push(verify::endpoint_suite(grid, exec));
            out
        }
        Suite::Special => {
            let mut out = verify::special_case_reductions(&grid.alphas, grid.n_max.min(10));
            out.push(verify::classical_evaluation(&grid.lambdas, grid.n_max, 200, opts.tol(1e-12), exec));
            out
        }
        Suite::Orthogonality => vec![
            orthogonality_report(&opts.orthogonality_grid, &opts.quadrature, opts.tol(1e-8), exec)?,
            substitution_consistency_report(&opts.normalization_grid, &opts.quadrature, opts.tol(1e-7), exec)?,
        ],
        Suite::Normalization => vec![normalization_oracle_report(
            &opts.normalization_grid,
            &opts.quadrature,
            opts.tol(1e-6),
            exec,
        )?],
        Suite::Audit => {
            let mut out = verify::ultraspherical_operator_checks(grid);
            out.push(verify::printed_series_audit(grid));
            out.push(verify::ultraspherical_rodrigues_audit(grid));
            out.extend(verify::chebyshev_diff_relation_audit(&grid.alphas, grid.n_max.min(8), 3));
            out
        }
        Suite::NormalizationAudit => {
            let audit = normalization_audit(&opts.audit_grid, &opts.quadrature, opts.tol(1e-6), exec)?;
            return Ok(SuiteRun {
                reports: audit.reports.clone(),
                audit_table: Some(audit),
            });
        }
    };
    Ok(SuiteRun {
        reports,
        audit_table: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> SuiteOptions {
        SuiteOptions {
            grid: Grid::standard().with_n_max(4),
            exec: Execution::Sequential,
            ..SuiteOptions::default()
        }
    }

    #[test]
    fn names_round_trip() {
        for name in Suite::NAMES {
            assert_eq!(name.parse::<Suite>().unwrap().name(), name);
        }
        assert!("odes".parse::<Suite>().is_err());
    }

    #[test]
    fn small_grid_all_passes() {
        let run = run_suite(Suite::All, &small()).unwrap();
        let failing: Vec<String> = run.reports.iter().filter(|r| r.is_blocking_failure()).map(|r| r.to_string()).collect();
        assert!(failing.is_empty(), "{failing:?}");
        assert!(run.reports.iter().any(|r| r.audit && !r.passed()));
        assert!(run.audit_table.is_some());
    }

    #[test]
    fn injected_fault_fails_with_witness() {
        let mut opts = small();
        opts.fault = Some(Fault::OdeExtraTerm);
        let run = run_suite(Suite::Ode, &opts).unwrap();
        assert!(!run.passed());
        let text = run.reports[0].to_string();
        assert!(text.contains("witness:"), "{text}");
    }
}
