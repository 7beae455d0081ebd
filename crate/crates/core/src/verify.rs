//! Machine checks of the identities satisfied by conformable Gegenbauer polynomials.
//!
//! Polynomial identities are checked exactly at the coefficient level; the
//! only floating-point check here is the classical-reduction evaluation at
//! `α = 1`. Every check produces a [`VerificationReport`]; a failing report
//! always carries a concrete witness.

use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::alphapoly::{
    factorial, integer, pochhammer, rational, to_f64, Alpha, AlphaCoeff, AlphaPoly, ExactScalar,
};
use crate::error::{param, Result};
use crate::gegenbauer::{
    chebyshev_t, chebyshev_t_rodrigues, classical_oracle, endpoint_value, from_recurrence,
    from_rodrigues, from_series, leading_coefficient, legendre, ultraspherical,
    ultraspherical_rodrigues, ultraspherical_series_as_printed, GegenbauerSpec,
    UltrasphericalSpec,
};
use crate::parallel::{self, Execution};

/// Outcome of one identity over its parameter grid.
#[derive(Clone, Debug, PartialEq)]
pub enum Status {
    ExactPass,
    NumericPass { max_residual: f64 },
    Fail { witness: String, max_residual: Option<f64> },
}

impl Status {
    pub fn label(&self) -> &'static str {
        match self {
            Status::ExactPass => "exact-pass",
            Status::NumericPass { .. } => "numeric-pass",
            Status::Fail { .. } => "fail",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(into = "ReportRecord", from = "ReportRecord")]
pub struct VerificationReport {
    pub identity: String,
    pub grid: String,
    pub status: Status,
    pub notes: Vec<String>,
    /// Audit entries document behaviour; they never decide pass or fail of a run.
    pub audit: bool,
}

#[derive(Clone, Serialize, Deserialize)]
struct ReportRecord {
    identity: String,
    grid: String,
    status: String,
    max_residual: Option<f64>,
    witness: Option<String>,
    #[serde(default)]
    notes: Vec<String>,
    #[serde(default)]
    audit: bool,
}

impl From<VerificationReport> for ReportRecord {
    fn from(r: VerificationReport) -> Self {
        let (max_residual, witness) = match &r.status {
            Status::ExactPass => (None, None),
            Status::NumericPass { max_residual } => (Some(*max_residual), None),
            Status::Fail { witness, max_residual } => (*max_residual, Some(witness.clone())),
        };
        ReportRecord {
            identity: r.identity,
            grid: r.grid,
            status: r.status.label().to_string(),
            max_residual,
            witness,
            notes: r.notes,
            audit: r.audit,
        }
    }
}

impl From<ReportRecord> for VerificationReport {
    fn from(r: ReportRecord) -> Self {
        let status = match (r.status.as_str(), r.witness) {
            ("exact-pass", _) => Status::ExactPass,
            ("numeric-pass", _) => Status::NumericPass {
                max_residual: r.max_residual.unwrap_or(0.0),
            },
            (_, witness) => Status::Fail {
                witness: witness.unwrap_or_default(),
                max_residual: r.max_residual,
            },
        };
        VerificationReport {
            identity: r.identity,
            grid: r.grid,
            status,
            notes: r.notes,
            audit: r.audit,
        }
    }
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        !matches!(self.status, Status::Fail { .. })
    }

    /// True when this report should fail a verification run.
    pub fn is_blocking_failure(&self) -> bool {
        !self.audit && !self.passed()
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.notes.push(note.into());
        self
    }

    pub fn as_audit(mut self) -> Self {
        self.audit = true;
        self
    }

    /// Combines labelled per-point outcomes. Residuals above `tolerance` fail.
    pub fn from_outcomes(
        identity: impl Into<String>,
        grid: impl Into<String>,
        outcomes: Vec<(String, Outcome)>,
        tolerance: Option<f64>,
    ) -> Self {
        let mut max: Option<(f64, String)> = None;
        let mut status = None;
        for (label, outcome) in &outcomes {
            match outcome {
                Outcome::Exact => {}
                Outcome::Residual(r) => {
                    let r = if r.is_nan() { f64::INFINITY } else { *r };
                    if max.as_ref().is_none_or(|(m, _)| r > *m) {
                        max = Some((r, label.clone()));
                    }
                }
                Outcome::Mismatch(w) => {
                    if status.is_none() {
                        status = Some(Status::Fail {
                            witness: format!("{label}: {w}"),
                            max_residual: None,
                        });
                    }
                }
            }
        }
        let status = match (status, max) {
            (Some(Status::Fail { witness, .. }), m) => Status::Fail {
                witness,
                max_residual: m.map(|(r, _)| r),
            },
            (_, None) => Status::ExactPass,
            (_, Some((r, label))) => match tolerance {
                Some(t) if r > t => Status::Fail {
                    witness: format!("{label}: residual {r:e} exceeds tolerance {t:e}"),
                    max_residual: Some(r),
                },
                _ => Status::NumericPass { max_residual: r },
            },
        };
        let mut report = Self {
            identity: identity.into(),
            grid: grid.into(),
            status,
            notes: Vec::new(),
            audit: false,
        };
        if let Some(t) = tolerance {
            report.notes.push(format!("tolerance {t:e}"));
        }
        report.notes.push(format!("{} grid points", outcomes.len()));
        report
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = match (&self.status, self.audit) {
            (Status::Fail { .. }, true) => "FLAG",
            (Status::Fail { .. }, false) => "FAIL",
            (_, true) => "NOTE",
            _ => "PASS",
        };
        write!(f, "[{tag}] {} ({})", self.identity, self.status.label())?;
        match &self.status {
            Status::NumericPass { max_residual } => write!(f, " max residual {max_residual:e}")?,
            Status::Fail { max_residual: Some(r), .. } => write!(f, " max residual {r:e}")?,
            _ => {}
        }
        writeln!(f)?;
        writeln!(f, "    grid: {}", self.grid)?;
        if let Status::Fail { witness, .. } = &self.status {
            writeln!(f, "    witness: {witness}")?;
        }
        for note in &self.notes {
            writeln!(f, "    note: {note}")?;
        }
        Ok(())
    }
}

/// Per-point result fed to [`VerificationReport::from_outcomes`].
#[derive(Clone, Debug, PartialEq)]
pub enum Outcome {
    Exact,
    Residual(f64),
    Mismatch(String),
}

impl Outcome {
    fn from_equal(lhs: &AlphaPoly, rhs: &AlphaPoly) -> Self {
        if lhs == rhs {
            Outcome::Exact
        } else {
            Outcome::Mismatch(format!("{lhs}  !=  {rhs}"))
        }
    }

    fn from_zero(residual: &AlphaPoly) -> Self {
        if residual.is_zero() {
            Outcome::Exact
        } else {
            Outcome::Mismatch(format!("nonzero residual {residual}"))
        }
    }

    fn from_result(r: Result<Outcome>) -> Self {
        r.unwrap_or_else(|e| Outcome::Mismatch(e.to_string()))
    }
}

/// Parameter sweep over degree, weight parameter and conformable order.
#[derive(Clone, Debug)]
pub struct Grid {
    pub n_max: usize,
    pub lambdas: Vec<ExactScalar>,
    pub alphas: Vec<Alpha>,
}

impl Grid {
    /// `n ≤ 12`, `λ ∈ {1/2, 1, 5/2, 3}`, `α ∈ {1/4, 1/2, 3/4, 1}`.
    pub fn standard() -> Self {
        Self {
            n_max: 12,
            lambdas: vec![rational(1, 2), integer(1), rational(5, 2), integer(3)],
            alphas: ["1/4", "1/2", "3/4", "1"]
                .iter()
                .map(|a| Alpha::parse(a).unwrap())
                .collect(),
        }
    }

    pub fn with_n_max(mut self, n_max: usize) -> Self {
        self.n_max = n_max;
        self
    }

    /// All specs with `n_min ≤ n ≤ n_max`, ordered by λ, then α, then n.
    pub fn specs_from(&self, n_min: usize) -> Vec<GegenbauerSpec> {
        let mut out = Vec::new();
        for l in &self.lambdas {
            for a in &self.alphas {
                for n in n_min..=self.n_max {
                    out.push(GegenbauerSpec::new(n, l.clone(), a.clone()));
                }
            }
        }
        out
    }

    pub fn specs(&self) -> Vec<GegenbauerSpec> {
        self.specs_from(0)
    }

    pub fn describe(&self) -> String {
        describe_grid(0, self.n_max, &self.lambdas, &self.alphas)
    }
}

fn join<T: fmt::Display>(items: &[T]) -> String {
    items.iter().map(T::to_string).collect::<Vec<_>>().join(", ")
}

fn describe_grid(n_min: usize, n_max: usize, lambdas: &[ExactScalar], alphas: &[Alpha]) -> String {
    format!(
        "{n_min} <= n <= {n_max}; lambda in {{{}}}; alpha in {{{}}}",
        join(lambdas),
        join(alphas)
    )
}

fn label(spec: &GegenbauerSpec) -> String {
    format!("n={} lambda={} alpha={}", spec.n, spec.lambda, spec.alpha)
}

fn alpha_coeff(r: ExactScalar, exponent: i32) -> AlphaCoeff {
    AlphaCoeff::monomial(r, exponent)
}

/// `(1−x^(2α))·D^αD^α p − α(2λ+1)x^α·D^α p + α²n(n+2λ)·p`.
pub fn ode_residual(p: &AlphaPoly, spec: &GegenbauerSpec) -> Result<AlphaPoly> {
    if p.alpha() != &spec.alpha {
        return Err(param(format!(
            "polynomial alpha {} does not match spec alpha {}",
            p.alpha(),
            spec.alpha
        )));
    }
    let alpha = p.alpha().clone();
    let weight = AlphaPoly::from_rationals(alpha.clone(), vec![integer(1), integer(0), integer(-1)]);
    let u = AlphaPoly::x_alpha(alpha);
    let d1 = p.d_alpha();
    let d2 = d1.d_alpha();
    let drift = integer(2) * &spec.lambda + integer(1);
    Ok(weight
        .mul_unchecked(&d2)
        .sub_unchecked(&u.mul_unchecked(&d1).scale(&alpha_coeff(drift, 1)))
        .add_unchecked(&p.scale(&alpha_coeff(spec.separation_constant(), 2))))
}

/// Which operator to apply for the `T^β` equation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum UltrasphericalOperator {
    /// `D^αD^α y − 2α(β+1)x^α D^α y + α²n(n+2β+1)y`, without a `(1−x^(2α))` factor.
    AsPrinted,
    /// The Gegenbauer operator with `λ = β + 1/2`.
    Substituted,
}

pub fn ultraspherical_ode_residual(
    p: &AlphaPoly,
    spec: &UltrasphericalSpec,
    operator: UltrasphericalOperator,
) -> Result<AlphaPoly> {
    match operator {
        UltrasphericalOperator::Substituted => ode_residual(p, &spec.to_gegenbauer()),
        UltrasphericalOperator::AsPrinted => {
            if p.alpha() != &spec.alpha {
                return Err(param("polynomial alpha does not match spec alpha"));
            }
            let u = AlphaPoly::x_alpha(p.alpha().clone());
            let d1 = p.d_alpha();
            let d2 = d1.d_alpha();
            let n = integer(spec.n as i64);
            let drift = integer(2) * (&spec.beta + integer(1));
            let eigen = &n * (&n + integer(2) * &spec.beta + integer(1));
            Ok(d2
                .sub_unchecked(&u.mul_unchecked(&d1).scale(&alpha_coeff(drift, 1)))
                .add_unchecked(&p.scale(&alpha_coeff(eigen, 2))))
        }
    }
}

/// Expands `(1 − w)^(−λ)` with `w = 2us − s²` as `Σ_j (λ)_j w^j / j!` and
/// returns the `u`-coefficients of `s^0 ..= s^max_n`.
pub fn generating_function_coeffs(lambda: &ExactScalar, max_n: usize) -> Result<Vec<Vec<ExactScalar>>> {
    if !lambda.is_positive() {
        return Err(param(format!("lambda must be positive, got {lambda}")));
    }
    // Bivariate polynomials as [s-degree][u-degree], truncated above s^max_n.
    type Bivariate = Vec<Vec<ExactScalar>>;
    let zero = || -> Bivariate { vec![vec![ExactScalar::zero(); max_n + 1]; max_n + 1] };
    let mut w = zero();
    if max_n >= 1 {
        w[1][1] = integer(2);
    }
    if max_n >= 2 {
        w[2][0] = integer(-1);
    }
    let mul = |a: &Bivariate, b: &Bivariate| -> Bivariate {
        let mut out = zero();
        for (i, row) in a.iter().enumerate() {
            for (k, c) in row.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
                for (j, brow) in b.iter().enumerate().take(max_n + 1 - i) {
                    for (l, d) in brow.iter().enumerate().take(max_n + 1 - k) {
                        if !d.is_zero() {
                            out[i + j][k + l] += c * d;
                        }
                    }
                }
            }
        }
        out
    };
    let mut total = zero();
    let mut power = zero();
    power[0][0] = integer(1);
    // w^j starts at s^j, so terms beyond j = max_n do not contribute.
    for j in 0..=max_n {
        let weight = pochhammer(lambda, j) / ExactScalar::from_integer(factorial(j as u64));
        for (trow, prow) in total.iter_mut().zip(&power) {
            for (t, p) in trow.iter_mut().zip(prow) {
                *t += &weight * p;
            }
        }
        power = mul(&power, &w);
    }
    Ok(total
        .into_iter()
        .enumerate()
        .map(|(n, mut row)| {
            row.truncate(n + 1);
            while row.len() > 1 && row.last().is_some_and(Zero::is_zero) {
                row.pop();
            }
            row
        })
        .collect())
}

fn diff_relation_outcome(spec: &GegenbauerSpec, m: usize) -> Result<Outcome> {
    if m > spec.n {
        return Err(param(format!("order m={m} exceeds degree n={}", spec.n)));
    }
    let lhs = from_series(spec)?.d_alpha_n(m);
    let shifted = GegenbauerSpec::new(spec.n - m, &spec.lambda + integer(m as i64), spec.alpha.clone());
    let factor = integer(2).pow(m as i32) * pochhammer(&spec.lambda, m);
    let rhs = from_series(&shifted)?.scale(&alpha_coeff(factor, m as i32));
    Ok(Outcome::from_equal(&lhs, &rhs))
}

/// `D^(mα) C_{αn}^{(λ)} = 2^m α^m (λ)_m C_{α(n−m)}^{(λ+m)}`, exactly.
pub fn diff_relation_check(spec: &GegenbauerSpec, m: usize) -> Result<VerificationReport> {
    let outcome = diff_relation_outcome(spec, m)?;
    Ok(VerificationReport::from_outcomes(
        "differential relation D^{m alpha} C_n = 2^m alpha^m (lambda)_m C_{n-m}^{(lambda+m)}",
        format!("{} m={m}", label(spec)),
        vec![(label(spec), outcome)],
        None,
    ))
}

fn series_or_zero(n: isize, lambda: &ExactScalar, alpha: &Alpha) -> Result<AlphaPoly> {
    if n < 0 {
        return Ok(AlphaPoly::zero(alpha.clone()));
    }
    from_series(&GegenbauerSpec::new(n as usize, lambda.clone(), alpha.clone()))
}

/// `(n+1)C_{n+1}^{(λ)} = 2λ x^α C_n^{(λ+1)} − 2λ C_{n−1}^{(λ+1)}`.
fn raising_recurrence_outcome(spec: &GegenbauerSpec) -> Result<Outcome> {
    let n = spec.n as isize;
    let (l, a) = (&spec.lambda, &spec.alpha);
    let l1 = l + integer(1);
    let u = AlphaPoly::x_alpha(a.clone());
    let two_l = integer(2) * l;
    let lhs = series_or_zero(n + 1, l, a)?.scale_rational(&integer(n as i64 + 1));
    let rhs = u
        .mul_unchecked(&series_or_zero(n, &l1, a)?)
        .sub_unchecked(&series_or_zero(n - 1, &l1, a)?)
        .scale_rational(&two_l);
    Ok(Outcome::from_equal(&lhs, &rhs))
}

/// `(n+1)C_{n+1} = 2(n+λ)x^α C_n − (n+2λ−1)C_{n−1}`.
fn three_term_recurrence_outcome(spec: &GegenbauerSpec) -> Result<Outcome> {
    let n = spec.n as isize;
    let (l, a) = (&spec.lambda, &spec.alpha);
    let nn = integer(n as i64);
    let u = AlphaPoly::x_alpha(a.clone());
    let lhs = series_or_zero(n + 1, l, a)?.scale_rational(&(&nn + integer(1)));
    let rhs = u
        .mul_unchecked(&series_or_zero(n, l, a)?)
        .scale_rational(&(integer(2) * (&nn + l)))
        .sub_unchecked(&series_or_zero(n - 1, l, a)?.scale_rational(&(&nn + integer(2) * l - integer(1))));
    Ok(Outcome::from_equal(&lhs, &rhs))
}

/// Both recurrences at one spec, with `C_{α(−1)} := 0`.
pub fn recurrence_checks(spec: &GegenbauerSpec) -> Vec<VerificationReport> {
    let grid = label(spec);
    vec![
        VerificationReport::from_outcomes(
            "raising recurrence (n+1)C_{n+1} = 2 lambda x^a C_n^{(lambda+1)} - 2 lambda C_{n-1}^{(lambda+1)}",
            grid.clone(),
            vec![(grid.clone(), Outcome::from_result(raising_recurrence_outcome(spec)))],
            None,
        ),
        VerificationReport::from_outcomes(
            "three-term recurrence (n+1)C_{n+1} = 2(n+lambda)x^a C_n - (n+2lambda-1)C_{n-1}",
            grid.clone(),
            vec![(grid, Outcome::from_result(three_term_recurrence_outcome(spec)))],
            None,
        ),
    ]
}

fn endpoint_outcome(spec: &GegenbauerSpec) -> Result<Outcome> {
    let at_one = from_series(spec)?.value_at_one();
    let expected = AlphaCoeff::rational(endpoint_value(spec.n, &spec.lambda)?);
    Ok(if at_one == expected {
        Outcome::Exact
    } else {
        Outcome::Mismatch(format!("sum of coefficients {at_one} != {expected}"))
    })
}

/// `C_{αn}^{(λ)}(1) = Γ(2λ+n)/(Γ(2λ) n!)`, compared as exact rationals.
pub fn endpoint_value_check(spec: &GegenbauerSpec) -> VerificationReport {
    VerificationReport::from_outcomes(
        "endpoint value C_n(1) = Gamma(2 lambda+n)/(Gamma(2 lambda) n!)",
        label(spec),
        vec![(label(spec), Outcome::from_result(endpoint_outcome(spec)))],
        None,
    )
}

fn sweep<F>(specs: &[GegenbauerSpec], exec: Execution, f: F) -> Vec<(String, Outcome)>
where
    F: Fn(&GegenbauerSpec) -> Result<Outcome> + Sync + Send,
{
    parallel::map(specs, exec, |s| (label(s), Outcome::from_result(f(s))))
}

/// Series, recurrence and Rodrigues constructions agree exactly.
pub fn constructor_agreement(grid: &Grid, exec: Execution) -> VerificationReport {
    let outcomes = sweep(&grid.specs(), exec, |s| {
        let series = from_series(s)?;
        let rec = from_recurrence(s)?;
        let rod = from_rodrigues(s)?;
        Ok(if series != rec {
            Outcome::Mismatch(format!("series {series} != recurrence {rec}"))
        } else if series != rod {
            Outcome::Mismatch(format!("series {series} != rodrigues {rod}"))
        } else {
            Outcome::Exact
        })
    });
    VerificationReport::from_outcomes(
        "constructor agreement: series == recurrence == rodrigues",
        grid.describe(),
        outcomes,
        None,
    )
}

/// Coefficients are rational, α-free, parity-pure and have leading term `2^n(λ)_n/n!`.
pub fn structural_properties(grid: &Grid, exec: Execution) -> VerificationReport {
    let reference = Alpha::one();
    let outcomes = sweep(&grid.specs(), exec, |s| {
        let p = from_series(s)?;
        let Some(coeffs) = p.rational_coeffs() else {
            return Ok(Outcome::Mismatch(format!("coefficients depend on alpha: {p}")));
        };
        let rod = from_rodrigues(s)?;
        let at_one = from_rodrigues(&GegenbauerSpec::new(s.n, s.lambda.clone(), reference.clone()))?;
        if rod.with_alpha(reference.clone()) != at_one {
            return Ok(Outcome::Mismatch("rodrigues coefficients vary with alpha".into()));
        }
        if let Some(k) = coeffs
            .iter()
            .enumerate()
            .find(|(k, c)| (k + s.n) % 2 == 1 && !c.is_zero())
            .map(|(k, _)| k)
        {
            return Ok(Outcome::Mismatch(format!("parity broken at x^{k}a in {p}")));
        }
        let lead = leading_coefficient(s.n, &s.lambda);
        if coeffs.last() != Some(&lead) {
            return Ok(Outcome::Mismatch(format!("leading coefficient differs from {lead} in {p}")));
        }
        Ok(Outcome::Exact)
    });
    VerificationReport::from_outcomes(
        "alpha-independent rational coefficients, parity, leading coefficient 2^n (lambda)_n / n!",
        grid.describe(),
        outcomes,
        None,
    )
}

pub fn ode_annihilation(grid: &Grid, exec: Execution) -> VerificationReport {
    ode_annihilation_with(grid, exec, from_series)
}

/// ODE check with a caller-supplied constructor (used to exercise the failure path).
pub fn ode_annihilation_with<F>(grid: &Grid, exec: Execution, build: F) -> VerificationReport
where
    F: Fn(&GegenbauerSpec) -> Result<AlphaPoly> + Sync + Send,
{
    let outcomes = sweep(&grid.specs(), exec, |s| {
        let p = build(s)?;
        Ok(Outcome::from_zero(&ode_residual(&p, s)?))
    });
    VerificationReport::from_outcomes(
        "ODE (1-x^2a) D^a D^a y - a(2 lambda+1) x^a D^a y + a^2 n(n+2 lambda) y = 0",
        grid.describe(),
        outcomes,
        None,
    )
}

/// Generating-function coefficients against the classical oracle and the series constructor.
pub fn generating_function_equivalence(lambdas: &[ExactScalar], max_n: usize, exec: Execution) -> VerificationReport {
    let per_lambda = parallel::map(lambdas, exec, |l| {
        let gf = match generating_function_coeffs(l, max_n) {
            Ok(gf) => gf,
            Err(e) => return vec![(format!("lambda={l}"), Outcome::Mismatch(e.to_string()))],
        };
        gf.iter()
            .enumerate()
            .map(|(n, coeffs)| {
                let lab = format!("n={n} lambda={l}");
                let oracle = classical_oracle(n, l);
                let series = from_series(&GegenbauerSpec::new(n, l.clone(), Alpha::one()))
                    .ok()
                    .and_then(|p| p.rational_coeffs());
                let outcome = if *coeffs != oracle {
                    Outcome::Mismatch(format!("expansion {} != oracle {}", join(coeffs), join(&oracle)))
                } else if series.as_ref() != Some(coeffs) {
                    Outcome::Mismatch(format!("expansion {} != series construction", join(coeffs)))
                } else {
                    Outcome::Exact
                };
                (lab, outcome)
            })
            .collect::<Vec<_>>()
    });
    VerificationReport::from_outcomes(
        "generating function (1 - 2us + s^2)^(-lambda) coefficients",
        format!("0 <= n <= {max_n}; lambda in {{{}}}", join(lambdas)),
        per_lambda.into_iter().flatten().collect(),
        None,
    )
}

pub fn diff_relation_suite(grid: &Grid, m_max: usize, n_max: usize, exec: Execution) -> VerificationReport {
    let mut items = Vec::new();
    for s in grid.clone().with_n_max(n_max).specs() {
        for m in 0..=m_max.min(s.n) {
            items.push((s.clone(), m));
        }
    }
    let outcomes = parallel::map(&items, exec, |(s, m)| {
        (format!("{} m={m}", label(s)), Outcome::from_result(diff_relation_outcome(s, *m)))
    });
    VerificationReport::from_outcomes(
        "differential relation D^{m alpha} C_n = 2^m alpha^m (lambda)_m C_{n-m}^{(lambda+m)}",
        format!(
            "m <= {m_max}; {}",
            describe_grid(0, n_max, &grid.lambdas, &grid.alphas)
        ),
        outcomes,
        None,
    )
}

pub fn recurrence_suite(grid: &Grid, n_min: usize, n_max: usize, exec: Execution) -> Vec<VerificationReport> {
    let specs = grid.clone().with_n_max(n_max).specs_from(n_min);
    let desc = describe_grid(n_min, n_max, &grid.lambdas, &grid.alphas);
    let raising = sweep(&specs, exec, raising_recurrence_outcome);
    let three = sweep(&specs, exec, three_term_recurrence_outcome);
    vec![
        VerificationReport::from_outcomes(
            "raising recurrence (n+1)C_{n+1} = 2 lambda x^a C_n^{(lambda+1)} - 2 lambda C_{n-1}^{(lambda+1)}",
            desc.clone(),
            raising,
            None,
        ),
        VerificationReport::from_outcomes(
            "three-term recurrence (n+1)C_{n+1} = 2(n+lambda)x^a C_n - (n+2lambda-1)C_{n-1}",
            desc,
            three,
            None,
        ),
    ]
}

pub fn endpoint_suite(grid: &Grid, exec: Execution) -> VerificationReport {
    VerificationReport::from_outcomes(
        "endpoint value C_n(1) = Gamma(2 lambda+n)/(Gamma(2 lambda) n!)",
        grid.describe(),
        sweep(&grid.specs(), exec, endpoint_outcome),
        None,
    )
}

/// Classical Legendre coefficients from Bonnet's recurrence.
fn classical_legendre(n: usize) -> Vec<ExactScalar> {
    let mut prev = vec![integer(1)];
    if n == 0 {
        return prev;
    }
    let mut cur = vec![integer(0), integer(1)];
    for k in 1..n {
        let mut next = vec![ExactScalar::zero(); k + 2];
        let d = integer(k as i64 + 1);
        for (i, c) in cur.iter().enumerate() {
            next[i + 1] += integer(2 * k as i64 + 1) * c / &d;
        }
        for (i, c) in prev.iter().enumerate() {
            next[i] -= integer(k as i64) * c / &d;
        }
        prev = std::mem::replace(&mut cur, next);
    }
    cur
}

/// Classical Chebyshev U from `U_n = Σ_k (−1)^k C(n−k, k) (2u)^(n−2k)`.
fn classical_chebyshev_u(n: usize) -> Vec<ExactScalar> {
    let mut out = vec![ExactScalar::zero(); n + 1];
    for k in 0..=n / 2 {
        let sign = if k % 2 == 0 { 1 } else { -1 };
        let b = crate::alphapoly::binomial((n - k) as u64, k as u64);
        out[n - 2 * k] = ExactScalar::from_integer(b) * integer(sign) * integer(2).pow((n - 2 * k) as i32);
    }
    out
}

/// Classical Chebyshev T from `T_n = (n/2) Σ_k (−1)^k (n−k−1)!/(k!(n−2k)!) (2u)^(n−2k)`.
fn classical_chebyshev_t(n: usize) -> Vec<ExactScalar> {
    if n == 0 {
        return vec![integer(1)];
    }
    let mut out = vec![ExactScalar::zero(); n + 1];
    for k in 0..=n / 2 {
        let sign = if k % 2 == 0 { 1 } else { -1 };
        let f = |m: usize| ExactScalar::from_integer(factorial(m as u64));
        out[n - 2 * k] = rational(n as i64, 2) * f(n - k - 1) / (f(k) * f(n - 2 * k))
            * integer(sign)
            * integer(2).pow((n - 2 * k) as i32);
    }
    out
}

fn compare_coeffs(got: Option<Vec<ExactScalar>>, want: Vec<ExactScalar>) -> Outcome {
    match got {
        Some(g) if g == want => Outcome::Exact,
        Some(g) => Outcome::Mismatch(format!("[{}] != [{}]", join(&g), join(&want))),
        None => Outcome::Mismatch("coefficients depend on alpha".into()),
    }
}

/// Legendre (`λ = 1/2`), Chebyshev U (`λ = 1`) and Chebyshev T reductions.
pub fn special_case_reductions(alphas: &[Alpha], n_max: usize) -> Vec<VerificationReport> {
    let mut legendre_out = Vec::new();
    let mut u_out = Vec::new();
    let mut t_out = Vec::new();
    for a in alphas {
        for n in 0..=n_max {
            let lab = format!("n={n} alpha={a}");
            legendre_out.push((lab.clone(), compare_coeffs(legendre(n, a).rational_coeffs(), classical_legendre(n))));
            let u = from_series(&GegenbauerSpec::new(n, integer(1), a.clone())).map(|p| p.rational_coeffs());
            u_out.push((lab.clone(), compare_coeffs(u.ok().flatten(), classical_chebyshev_u(n))));
            let t = chebyshev_t(n, a);
            let mut outcome = compare_coeffs(t.rational_coeffs(), classical_chebyshev_t(n));
            if outcome == Outcome::Exact {
                // λ = 0 ODE and the λ = 0 Rodrigues form.
                let spec0 = GegenbauerSpec::new(n, integer(0), a.clone());
                outcome = match (ode_residual(&t, &spec0), chebyshev_t_rodrigues(n, a)) {
                    (Ok(r), _) if !r.is_zero() => Outcome::Mismatch(format!("lambda=0 ODE residual {r}")),
                    (_, Ok(rod)) if rod != t => Outcome::Mismatch(format!("lambda=0 Rodrigues {rod} != {t}")),
                    (Err(e), _) | (_, Err(e)) => Outcome::Mismatch(e.to_string()),
                    _ => Outcome::Exact,
                };
            }
            t_out.push((lab, outcome));
        }
    }
    let desc = format!("0 <= n <= {n_max}; alpha in {{{}}}", join(alphas));
    vec![
        VerificationReport::from_outcomes("lambda=1/2 reduces to classical Legendre", desc.clone(), legendre_out, None),
        VerificationReport::from_outcomes("lambda=1 reduces to classical Chebyshev U", desc.clone(), u_out, None),
        VerificationReport::from_outcomes(
            "chebyshev_T equals classical Chebyshev T, solves the lambda=0 ODE and matches the lambda=0 Rodrigues form",
            desc,
            t_out,
            None,
        ),
    ]
}

/// At `α = 1`, floating evaluation against the exact classical polynomial at
/// `samples` equispaced rational points of `[−1, 1]`.
///
/// The residual is `|value − exact| / Σ_k |c_k x^k|`, i.e. relative to the
/// magnitude of the summands, which stays meaningful near roots.
pub fn classical_evaluation(lambdas: &[ExactScalar], n_max: usize, samples: usize, tolerance: f64, exec: Execution) -> VerificationReport {
    let mut items = Vec::new();
    for l in lambdas {
        for n in 0..=n_max {
            items.push((l.clone(), n));
        }
    }
    let outcomes = parallel::map(&items, exec, |(l, n)| {
        let lab = format!("n={n} lambda={l}");
        let p = match from_series(&GegenbauerSpec::new(*n, l.clone(), Alpha::one())) {
            Ok(p) => p,
            Err(e) => return (lab, Outcome::Mismatch(e.to_string())),
        };
        let oracle = classical_oracle(*n, l);
        let mut worst: f64 = 0.0;
        for i in 0..samples {
            let x = rational(2 * i as i64 - (samples as i64 - 1), samples as i64 - 1);
            let mut exact = ExactScalar::zero();
            let mut scale = ExactScalar::zero();
            let mut xk = ExactScalar::one();
            for c in &oracle {
                exact += c * &xk;
                scale += (c * &xk).abs();
                xk *= &x;
            }
            let got = p.evaluate(to_f64(&x));
            let scale = to_f64(&scale).max(f64::MIN_POSITIVE);
            worst = worst.max((got - to_f64(&exact)).abs() / scale);
        }
        (lab, Outcome::Residual(worst))
    });
    VerificationReport::from_outcomes(
        "alpha=1 evaluation matches the classical Gegenbauer polynomial",
        format!("0 <= n <= {n_max}; lambda in {{{}}}; {samples} points in [-1, 1]", join(lambdas)),
        outcomes,
        Some(tolerance),
    )
}

fn beta_specs(grid: &Grid) -> Vec<UltrasphericalSpec> {
    let mut out = Vec::new();
    for l in &grid.lambdas {
        for a in &grid.alphas {
            for n in 0..=grid.n_max {
                out.push(UltrasphericalSpec::new(n, l - rational(1, 2), a.clone()));
            }
        }
    }
    out
}

fn beta_label(s: &UltrasphericalSpec) -> String {
    format!("n={} beta={} alpha={}", s.n, s.beta, s.alpha)
}

/// `T^β` under the `λ`-substituted Gegenbauer operator (asserted) and under the
/// operator printed without the `(1−x^(2α))` factor (audit only).
pub fn ultraspherical_operator_checks(grid: &Grid) -> Vec<VerificationReport> {
    let specs = beta_specs(grid);
    let desc = format!("{} (beta = lambda - 1/2)", grid.describe());
    let mut substituted = Vec::new();
    let mut printed = Vec::new();
    let mut printed_zero = 0;
    for s in &specs {
        let lab = beta_label(s);
        let Ok(t) = ultraspherical(s) else {
            substituted.push((lab.clone(), Outcome::Mismatch("construction failed".into())));
            continue;
        };
        substituted.push((
            lab.clone(),
            Outcome::from_result(ultraspherical_ode_residual(&t, s, UltrasphericalOperator::Substituted).map(|r| Outcome::from_zero(&r))),
        ));
        let r = ultraspherical_ode_residual(&t, s, UltrasphericalOperator::AsPrinted);
        let outcome = Outcome::from_result(r.map(|r| Outcome::from_zero(&r)));
        if outcome == Outcome::Exact {
            printed_zero += 1;
        }
        printed.push((lab, outcome));
    }
    let total = printed.len();
    vec![
        VerificationReport::from_outcomes(
            "T^beta solves the Gegenbauer ODE with lambda = beta + 1/2",
            desc.clone(),
            substituted,
            None,
        ),
        VerificationReport::from_outcomes(
            "T^beta under the printed operator D^a D^a y - 2a(beta+1) x^a D^a y + a^2 n(n+2beta+1) y (no (1-x^2a) factor)",
            desc,
            printed,
            None,
        )
        .with_note(format!("annihilated at {printed_zero} of {total} points (only n <= 1 can vanish)"))
        .as_audit(),
    ]
}

/// The `T^β` series read literally (`(s−2n)!`, exponent `s−2n`) against the
/// corrected form `C^{(β+1/2)}`.
pub fn printed_series_audit(grid: &Grid) -> VerificationReport {
    let outcomes = beta_specs(grid)
        .iter()
        .map(|s| {
            let outcome = match (ultraspherical_series_as_printed(s), ultraspherical(s)) {
                (Ok(printed), Ok(fixed)) => Outcome::from_equal(&printed, &fixed),
                (Err(e), _) | (_, Err(e)) => Outcome::Mismatch(e.to_string()),
            };
            (beta_label(s), outcome)
        })
        .collect();
    VerificationReport::from_outcomes(
        "T^beta series as printed ((s-2n)!, exponent s-2n) vs corrected ((n-2s)!, exponent n-2s)",
        format!("{} (beta = lambda - 1/2)", grid.describe()),
        outcomes,
        None,
    )
    .with_note("read literally, 1/(s-2n)! vanishes for n >= 1, so the printed sum is the zero polynomial; the implementation uses the corrected form")
    .as_audit()
}

/// Measures the constant relating the `T^β` Rodrigues form to `C^{(β+1/2)}` and
/// compares it with `Γ(2β+1)/(2^β Γ(β+1))`.
pub fn ultraspherical_rodrigues_audit(grid: &Grid) -> VerificationReport {
    let mut constants = Vec::new();
    let outcomes = beta_specs(grid)
        .iter()
        .map(|s| {
            let lab = beta_label(s);
            let (Ok(scaled), Ok(series)) = (ultraspherical_rodrigues(s), ultraspherical(s)) else {
                return (lab, Outcome::Mismatch("construction failed".into()));
            };
            // The shape must be an exact rational multiple of the series polynomial.
            let ratio = match (scaled.shape.value_at_one().as_rational(), series.value_at_one().as_rational()) {
                (Some(a), Some(b)) if !b.is_zero() => a / b,
                _ => return (lab, Outcome::Mismatch("endpoint values not rational".into())),
            };
            if scaled.shape != series.scale_rational(&ratio) {
                return (lab, Outcome::Mismatch("Rodrigues shape is not proportional to the series".into()));
            }
            let measured = scaled.prefactor * to_f64(&ratio);
            let beta = to_f64(&s.beta);
            let predicted = (statrs::function::gamma::ln_gamma(2.0 * beta + 1.0)
                - statrs::function::gamma::ln_gamma(beta + 1.0)
                - beta * std::f64::consts::LN_2)
                .exp();
            if s.n == 0 {
                constants.push(format!("beta={}: measured {measured:.15} predicted {predicted:.15}", s.beta));
            }
            (lab, Outcome::Residual((measured - predicted).abs() / predicted))
        })
        .collect();
    let mut report = VerificationReport::from_outcomes(
        "T^beta Rodrigues normalisation: T^beta = Gamma(2beta+1)/(2^beta Gamma(beta+1)) C^{(beta+1/2)}",
        format!("{} (beta = lambda - 1/2)", grid.describe()),
        outcomes,
        Some(1e-12),
    )
    .with_note("the constant equals 1 only at beta = 0; the printed Rodrigues form is not the series form for other beta")
    .as_audit();
    report.notes.extend(constants);
    report
}

/// The `λ = 0` differential relation `D^(mα) C_n^{(0)} = 2^m α^m (m−1)! C_{n−m}^{(m)}`
/// under two readings of `C^{(0)}`: plain `T_n`, and the limit `(2/n) T_n`.
pub fn chebyshev_diff_relation_audit(alphas: &[Alpha], n_max: usize, m_max: usize) -> Vec<VerificationReport> {
    let mut plain = Vec::new();
    let mut scaled = Vec::new();
    for a in alphas {
        for n in 1..=n_max {
            for m in 1..=m_max.min(n) {
                let lab = format!("n={n} m={m} alpha={a}");
                let factor = integer(2).pow(m as i32) * ExactScalar::from_integer(factorial(m as u64 - 1));
                let rhs = match from_series(&GegenbauerSpec::new(n - m, integer(m as i64), a.clone())) {
                    Ok(p) => p.scale(&alpha_coeff(factor, m as i32)),
                    Err(e) => {
                        plain.push((lab.clone(), Outcome::Mismatch(e.to_string())));
                        continue;
                    }
                };
                let t = chebyshev_t(n, a);
                plain.push((lab.clone(), Outcome::from_equal(&t.d_alpha_n(m), &rhs)));
                let limit = t.scale_rational(&rational(2, n as i64));
                scaled.push((lab, Outcome::from_equal(&limit.d_alpha_n(m), &rhs)));
            }
        }
    }
    let desc = format!("1 <= m <= min(n, {m_max}); 1 <= n <= {n_max}; alpha in {{{}}}", join(alphas));
    vec![
        VerificationReport::from_outcomes("lambda=0 differential relation with C^{(0)}_n = T_n", desc.clone(), plain, None)
            .with_note("holds only where n = 2; D^a T_n = a n U_{n-1} carries n where the relation has 2")
            .as_audit(),
        VerificationReport::from_outcomes("lambda=0 differential relation with C^{(0)}_n = (2/n) T_n", desc, scaled, None)
            .with_note("limit convention lim C^{(lambda)}_n / lambda = (2/n) T_n")
            .as_audit(),
    ]
}

/// All exact identity suites over `grid`.
pub fn identity_reports(grid: &Grid, exec: Execution) -> Vec<VerificationReport> {
    let mut out = vec![
        constructor_agreement(grid, exec),
        structural_properties(grid, exec),
        ode_annihilation(grid, exec),
        generating_function_equivalence(&[rational(1, 2), integer(1), integer(3)], grid.n_max.min(10), exec),
        diff_relation_suite(grid, 3, grid.n_max.min(8), exec),
    ];
    out.extend(recurrence_suite(grid, 1, grid.n_max.saturating_sub(1).max(1), exec));
    out.push(endpoint_suite(grid, exec));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn al(s: &str) -> Alpha {
        Alpha::parse(s).unwrap()
    }

    fn ints(alpha: &Alpha, c: &[i64]) -> AlphaPoly {
        AlphaPoly::from_rationals(alpha.clone(), c.iter().map(|&v| integer(v)).collect())
    }

    fn spec(n: usize, l: ExactScalar, a: &Alpha) -> GegenbauerSpec {
        GegenbauerSpec::new(n, l, a.clone())
    }

    #[test]
    fn ode_residual_examples() {
        let a = al("1/3");
        assert!(ode_residual(&ints(&a, &[1]), &spec(0, integer(5), &a)).unwrap().is_zero());
        assert!(ode_residual(&ints(&a, &[-3, 0, 24]), &spec(2, integer(3), &a)).unwrap().is_zero());
        let r = ode_residual(&ints(&a, &[0, 1]), &spec(2, integer(3), &a)).unwrap();
        assert!(!r.is_zero());
        assert!(ode_residual(&ints(&al("1/2"), &[1]), &spec(0, integer(1), &a)).is_err());
    }

    #[test]
    fn ode_residual_by_hand() {
        // x^α with n = 2, λ = 3: −7α² x^α + 16α² x^α = 9α² x^α
        let a = al("1/3");
        let r = ode_residual(&ints(&a, &[0, 1]), &spec(2, integer(3), &a)).unwrap();
        assert_eq!(r, AlphaPoly::monomial(a, 1, AlphaCoeff::monomial(integer(9), 2)));
    }

    #[test]
    fn ultraspherical_operator_examples() {
        let a = al("1/2");
        let s0 = UltrasphericalSpec::new(0, rational(1, 2), a.clone());
        for op in [UltrasphericalOperator::AsPrinted, UltrasphericalOperator::Substituted] {
            assert!(ultraspherical_ode_residual(&ints(&a, &[1]), &s0, op).unwrap().is_zero());
        }
        let s2 = UltrasphericalSpec::new(2, rational(1, 2), a.clone());
        let t = ultraspherical(&s2).unwrap();
        assert!(ultraspherical_ode_residual(&t, &s2, UltrasphericalOperator::Substituted).unwrap().is_zero());
        // 8α² + (−24 + 32)α² u² − 8α² = 8α² u²
        let printed = ultraspherical_ode_residual(&t, &s2, UltrasphericalOperator::AsPrinted).unwrap();
        assert_eq!(printed, AlphaPoly::monomial(a, 2, AlphaCoeff::monomial(integer(8), 2)));
    }

    #[test]
    fn generating_function_examples() {
        let gf = generating_function_coeffs(&rational(1, 2), 3).unwrap();
        assert_eq!(gf[0], vec![integer(1)]);
        assert_eq!(gf[2], vec![rational(-1, 2), integer(0), rational(3, 2)]);
        let gf3 = generating_function_coeffs(&integer(3), 2).unwrap();
        assert_eq!(gf3[1], vec![integer(0), integer(6)]);
        assert!(generating_function_coeffs(&integer(0), 2).is_err());
    }

    #[test]
    fn diff_relation_examples() {
        let a = al("1/2");
        assert!(diff_relation_check(&spec(1, integer(3), &a), 1).unwrap().passed());
        assert!(diff_relation_check(&spec(7, rational(5, 2), &a), 0).unwrap().passed());
        assert!(diff_relation_check(&spec(3, integer(1), &a), 2).unwrap().passed());
        assert!(diff_relation_check(&spec(2, integer(1), &a), 3).is_err());
    }

    #[test]
    fn recurrence_examples() {
        let a = al("3/4");
        for s in [spec(1, integer(3), &a), spec(0, integer(2), &a), spec(2, integer(1), &a)] {
            for r in recurrence_checks(&s) {
                assert_eq!(r.status, Status::ExactPass, "{r}");
            }
        }
    }

    #[test]
    fn endpoint_examples() {
        let a = al("1/4");
        for n in [0, 2, 5] {
            assert_eq!(endpoint_value_check(&spec(n, integer(3), &a)).status, Status::ExactPass);
        }
    }

    #[test]
    fn failures_carry_witnesses() {
        let grid = Grid { n_max: 3, lambdas: vec![integer(1)], alphas: vec![al("1/2")] };
        let r = ode_annihilation_with(&grid, Execution::Sequential, |s| {
            Ok(AlphaPoly::x_alpha(s.alpha.clone()).pow(s.n as u32 + 1))
        });
        match &r.status {
            Status::Fail { witness, .. } => assert!(witness.contains("nonzero residual")),
            other => panic!("expected failure, got {other:?}"),
        }
        assert!(r.is_blocking_failure());
        assert!(!r.clone().as_audit().is_blocking_failure());
    }

    #[test]
    fn residual_tolerance_decides_status() {
        let outcomes = vec![("a".to_string(), Outcome::Residual(1e-9)), ("b".to_string(), Outcome::Exact)];
        let ok = VerificationReport::from_outcomes("x", "g", outcomes.clone(), Some(1e-8));
        assert_eq!(ok.status, Status::NumericPass { max_residual: 1e-9 });
        let bad = VerificationReport::from_outcomes("x", "g", outcomes, Some(1e-10));
        assert!(matches!(bad.status, Status::Fail { .. }));
    }

    #[test]
    fn report_json_uses_flat_fields() {
        let r = VerificationReport::from_outcomes("id", "grid", vec![("p".into(), Outcome::Mismatch("w".into()))], None);
        let v: serde_json::Value = serde_json::to_value(&r).unwrap();
        for key in ["identity", "grid", "status", "max_residual", "witness"] {
            assert!(v.get(key).is_some(), "{key}");
        }
        assert_eq!(v["status"], "fail");
        assert_eq!(v["witness"], "p: w");
        let back: VerificationReport = serde_json::from_value(v).unwrap();
        assert_eq!(back, r);
    }

    #[test]
    fn classical_oracles_small_cases() {
        assert_eq!(classical_chebyshev_u(2), vec![integer(-1), integer(0), integer(4)]);
        assert_eq!(classical_chebyshev_t(2), vec![integer(-1), integer(0), integer(2)]);
        assert_eq!(classical_chebyshev_t(3), vec![integer(0), integer(-3), integer(0), integer(4)]);
        assert_eq!(classical_legendre(2), vec![rational(-1, 2), integer(0), rational(3, 2)]);
    }

    #[test]
    fn chebyshev_relation_conventions() {
        let reports = chebyshev_diff_relation_audit(&[al("1/2")], 6, 3);
        assert!(!reports[0].passed());
        assert_eq!(reports[1].status, Status::ExactPass);
    }
}
