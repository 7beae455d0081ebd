//! Exact polynomials in the basis `x^(kα)` and the conformable derivative acting on them.
//!
//! A polynomial `Σ c_k x^(kα)` is stored as its coefficient sequence. Each
//! coefficient is an [`AlphaCoeff`]: a finite Laurent polynomial in the symbol
//! `α` with rational coefficients. Conformable differentiation multiplies by
//! `αk`, so keeping `α` symbolic means every identity check can demand an
//! exactly zero result, whatever numeric value of `α` the polynomial carries.
//! The numeric `α` is only used by [`AlphaPoly::evaluate`].
//!
//! # Signed-power convention
//!
//! For `x < 0` the power `x^α` is taken to be `sign(x)·|x|^α`. Under this
//! convention a polynomial supported on even `k` is even in `x` and one
//! supported on odd `k` is odd, for every `α`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{param, Error, Result};

/// Arbitrary-precision rational, always in lowest terms with positive denominator.
pub type ExactScalar = BigRational;

pub fn rational(num: i64, den: i64) -> ExactScalar {
    BigRational::new(num.into(), den.into())
}

pub fn integer(n: i64) -> ExactScalar {
    BigRational::from_integer(n.into())
}

/// Parses `"p/q"`, an integer, or a plain decimal such as `"0.75"` into an exact rational.
pub fn parse_rational(text: &str) -> Result<ExactScalar> {
    let s = text.trim();
    let bad = || param(format!("cannot parse {text:?} as a rational number"));
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p.trim().parse().map_err(|_| bad())?;
        let q: BigInt = q.trim().parse().map_err(|_| bad())?;
        if q.is_zero() {
            return Err(param(format!("zero denominator in {text:?}")));
        }
        return Ok(BigRational::new(p, q));
    }
    if let Some((int_part, frac_part)) = s.split_once('.') {
        let (negative, int_part) = match int_part.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, int_part.strip_prefix('+').unwrap_or(int_part)),
        };
        if !frac_part.chars().all(|c| c.is_ascii_digit())
            || !int_part.chars().all(|c| c.is_ascii_digit())
            || (int_part.is_empty() && frac_part.is_empty())
        {
            return Err(bad());
        }
        let digits = format!("{int_part}{frac_part}");
        let numer: BigInt = if digits.is_empty() {
            BigInt::zero()
        } else {
            digits.parse().map_err(|_| bad())?
        };
        let denom = num_traits::pow(BigInt::from(10), frac_part.len());
        let value = BigRational::new(numer, denom);
        return Ok(if negative { -value } else { value });
    }
    let n: BigInt = s.parse().map_err(|_| bad())?;
    Ok(BigRational::from_integer(n))
}

pub fn to_f64(r: &ExactScalar) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

pub fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * k)
}

pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    (0..k).fold(BigInt::one(), |acc, i| acc * (n - i) / (i + 1))
}

/// Rising factorial `(λ)_m = λ(λ+1)···(λ+m−1)`; `(λ)_0 = 1`.
pub fn pochhammer(lambda: &ExactScalar, m: usize) -> ExactScalar {
    let mut acc = ExactScalar::one();
    let mut term = lambda.clone();
    for _ in 0..m {
        acc *= &term;
        term += ExactScalar::one();
    }
    acc
}

/// The signed power `sign(x)·|x|^α`.
pub fn signed_power(x: f64, alpha: f64) -> f64 {
    if x < 0.0 {
        -(-x).powf(alpha)
    } else {
        x.powf(alpha)
    }
}

fn is_nonpositive_integer(z: f64) -> bool {
    z <= 0.0 && z.fract() == 0.0
}

/// Double-precision gamma function with explicit pole detection.
pub fn gamma(z: f64) -> Result<f64> {
    if !z.is_finite() {
        return Err(Error::Domain(format!("gamma argument {z} is not finite")));
    }
    if is_nonpositive_integer(z) {
        return Err(Error::Domain(format!("gamma has a pole at {z}")));
    }
    Ok(statrs::function::gamma::gamma(z))
}

/// Conformable gamma function `Γ^α(p) = α^((p+α−1)/α) Γ((p+α−1)/α)`.
pub fn conformable_gamma(p: f64, alpha: f64) -> Result<f64> {
    let z = (p + alpha - 1.0) / alpha;
    Ok(alpha.powf(z) * gamma(z)?)
}

/// The conformable order `α ∈ (0, 1]`, kept exactly when it was given as a rational.
#[derive(Clone, Debug)]
pub struct Alpha {
    value: f64,
    exact: Option<ExactScalar>,
}

impl Alpha {
    pub fn new(value: f64) -> Result<Self> {
        if !(value.is_finite() && value > 0.0 && value <= 1.0) {
            return Err(param(format!("alpha must lie in (0, 1], got {value}")));
        }
        Ok(Self { value, exact: None })
    }

    pub fn from_rational(r: ExactScalar) -> Result<Self> {
        if !r.is_positive() || r > ExactScalar::one() {
            return Err(param(format!("alpha must lie in (0, 1], got {r}")));
        }
        Ok(Self {
            value: to_f64(&r),
            exact: Some(r),
        })
    }

    pub fn parse(text: &str) -> Result<Self> {
        Self::from_rational(parse_rational(text)?)
    }

    pub fn one() -> Self {
        Self {
            value: 1.0,
            exact: Some(ExactScalar::one()),
        }
    }

    pub fn value(&self) -> f64 {
        self.value
    }

    pub fn exact(&self) -> Option<&ExactScalar> {
        self.exact.as_ref()
    }
}

impl PartialEq for Alpha {
    fn eq(&self, other: &Self) -> bool {
        match (&self.exact, &other.exact) {
            (Some(a), Some(b)) => a == b,
            _ => self.value == other.value,
        }
    }
}

impl fmt::Display for Alpha {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.exact {
            Some(r) => write!(f, "{r}"),
            None => write!(f, "{}", self.value),
        }
    }
}

/// A finite Laurent polynomial `Σ_e r_e α^e` in the symbol `α` with rational `r_e`.
///
/// Zero terms are never stored, so structural equality is mathematical equality.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct AlphaCoeff {
    terms: BTreeMap<i32, ExactScalar>,
}

impl AlphaCoeff {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::rational(ExactScalar::one())
    }

    pub fn rational(r: ExactScalar) -> Self {
        Self::monomial(r, 0)
    }

    /// `r·α^exponent`.
    pub fn monomial(r: ExactScalar, exponent: i32) -> Self {
        let mut terms = BTreeMap::new();
        if !r.is_zero() {
            terms.insert(exponent, r);
        }
        Self { terms }
    }

    pub fn alpha_pow(exponent: i32) -> Self {
        Self::monomial(ExactScalar::one(), exponent)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The rational value if this coefficient does not involve `α`.
    pub fn as_rational(&self) -> Option<ExactScalar> {
        match self.terms.len() {
            0 => Some(ExactScalar::zero()),
            1 => self.terms.get(&0).cloned(),
            _ => None,
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (i32, &ExactScalar)> {
        self.terms.iter().map(|(e, r)| (*e, r))
    }

    pub fn scale(&self, r: &ExactScalar) -> Self {
        if r.is_zero() {
            return Self::zero();
        }
        Self {
            terms: self.terms.iter().map(|(e, c)| (*e, c * r)).collect(),
        }
    }

    /// Multiplies by `α^exponent`.
    pub fn shift(&self, exponent: i32) -> Self {
        Self {
            terms: self.terms.iter().map(|(e, c)| (e + exponent, c.clone())).collect(),
        }
    }

    pub fn eval(&self, alpha: f64) -> f64 {
        self.terms
            .iter()
            .map(|(e, c)| to_f64(c) * alpha.powi(*e))
            .sum()
    }

    fn add_term(&mut self, exponent: i32, r: &ExactScalar) {
        if r.is_zero() {
            return;
        }
        let entry = self.terms.entry(exponent).or_insert_with(ExactScalar::zero);
        *entry += r;
        if entry.is_zero() {
            self.terms.remove(&exponent);
        }
    }
}

impl From<ExactScalar> for AlphaCoeff {
    fn from(r: ExactScalar) -> Self {
        Self::rational(r)
    }
}

impl Add for &AlphaCoeff {
    type Output = AlphaCoeff;
    fn add(self, rhs: &AlphaCoeff) -> AlphaCoeff {
        let mut out = self.clone();
        for (e, r) in &rhs.terms {
            out.add_term(*e, r);
        }
        out
    }
}

impl Sub for &AlphaCoeff {
    type Output = AlphaCoeff;
    fn sub(self, rhs: &AlphaCoeff) -> AlphaCoeff {
        let mut out = self.clone();
        for (e, r) in &rhs.terms {
            out.add_term(*e, &-r);
        }
        out
    }
}

impl Mul for &AlphaCoeff {
    type Output = AlphaCoeff;
    fn mul(self, rhs: &AlphaCoeff) -> AlphaCoeff {
        let mut out = AlphaCoeff::zero();
        for (ea, ra) in &self.terms {
            for (eb, rb) in &rhs.terms {
                out.add_term(ea + eb, &(ra * rb));
            }
        }
        out
    }
}

impl Neg for &AlphaCoeff {
    type Output = AlphaCoeff;
    fn neg(self) -> AlphaCoeff {
        AlphaCoeff {
            terms: self.terms.iter().map(|(e, r)| (*e, -r)).collect(),
        }
    }
}

fn fmt_alpha_term(f: &mut fmt::Formatter<'_>, r: &ExactScalar, e: i32) -> fmt::Result {
    match e {
        0 => write!(f, "{r}"),
        _ => {
            if r.is_one() {
            } else if *r == -ExactScalar::one() {
                write!(f, "-")?;
            } else {
                write!(f, "{r}")?;
            }
            if e == 1 {
                write!(f, "α")
            } else {
                write!(f, "α^{e}")
            }
        }
    }
}

impl fmt::Display for AlphaCoeff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.terms.len() {
            0 => write!(f, "0"),
            1 => {
                let (e, r) = self.terms.iter().next().unwrap();
                fmt_alpha_term(f, r, *e)
            }
            _ => {
                write!(f, "(")?;
                for (i, (e, r)) in self.terms.iter().enumerate() {
                    if i > 0 {
                        if r.is_negative() {
                            write!(f, " - ")?;
                            fmt_alpha_term(f, &-r, *e)?;
                            continue;
                        }
                        write!(f, " + ")?;
                    }
                    fmt_alpha_term(f, r, *e)?;
                }
                write!(f, ")")
            }
        }
    }
}

/// Exact polynomial `Σ_k coeffs[k]·x^(kα)` with trailing zero coefficients trimmed.
#[derive(Clone, Debug, PartialEq)]
pub struct AlphaPoly {
    alpha: Alpha,
    coeffs: Vec<AlphaCoeff>,
}

impl AlphaPoly {
    pub fn new(alpha: Alpha, coeffs: Vec<AlphaCoeff>) -> Self {
        let mut p = Self { alpha, coeffs };
        p.trim();
        p
    }

    pub fn from_rationals(alpha: Alpha, coeffs: Vec<ExactScalar>) -> Self {
        Self::new(alpha, coeffs.into_iter().map(AlphaCoeff::rational).collect())
    }

    pub fn zero(alpha: Alpha) -> Self {
        Self::new(alpha, Vec::new())
    }

    pub fn one(alpha: Alpha) -> Self {
        Self::constant(alpha, AlphaCoeff::one())
    }

    pub fn constant(alpha: Alpha, c: AlphaCoeff) -> Self {
        Self::new(alpha, vec![c])
    }

    /// `c·x^(kα)`.
    pub fn monomial(alpha: Alpha, k: usize, c: AlphaCoeff) -> Self {
        let mut coeffs = vec![AlphaCoeff::zero(); k + 1];
        coeffs[k] = c;
        Self::new(alpha, coeffs)
    }

    /// The basis element `x^α`.
    pub fn x_alpha(alpha: Alpha) -> Self {
        Self::monomial(alpha, 1, AlphaCoeff::one())
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(AlphaCoeff::is_zero) {
            self.coeffs.pop();
        }
    }

    pub fn alpha(&self) -> &Alpha {
        &self.alpha
    }

    pub fn coeffs(&self) -> &[AlphaCoeff] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> AlphaCoeff {
        self.coeffs.get(k).cloned().unwrap_or_default()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// The coefficients as rationals, if none of them involves `α`.
    pub fn rational_coeffs(&self) -> Option<Vec<ExactScalar>> {
        self.coeffs.iter().map(AlphaCoeff::as_rational).collect()
    }

    /// Same coefficients, different order.
    pub fn with_alpha(&self, alpha: Alpha) -> Self {
        Self {
            alpha,
            coeffs: self.coeffs.clone(),
        }
    }

    /// Conformable derivative: `x^(kα) ↦ αk·x^((k−1)α)`.
    pub fn d_alpha(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, c)| c.scale(&integer(k as i64)).shift(1))
            .collect();
        Self::new(self.alpha.clone(), coeffs)
    }

    /// `m`-fold conformable derivative.
    pub fn d_alpha_n(&self, m: usize) -> Self {
        (0..m).fold(self.clone(), |p, _| p.d_alpha())
    }

    fn check_alpha(&self, other: &Self) -> Result<()> {
        if self.alpha != other.alpha {
            return Err(param(format!(
                "mismatched alpha: {} vs {}",
                self.alpha, other.alpha
            )));
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.check_alpha(other)?;
        Ok(self.add_unchecked(other))
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.check_alpha(other)?;
        Ok(self.add_unchecked(&other.neg()))
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.check_alpha(other)?;
        Ok(self.mul_unchecked(other))
    }

    pub(crate) fn add_unchecked(&self, other: &Self) -> Self {
        let len = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..len).map(|k| &self.coeff(k) + &other.coeff(k)).collect();
        Self::new(self.alpha.clone(), coeffs)
    }

    pub(crate) fn sub_unchecked(&self, other: &Self) -> Self {
        self.add_unchecked(&other.neg())
    }

    pub(crate) fn mul_unchecked(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero(self.alpha.clone());
        }
        let mut coeffs = vec![AlphaCoeff::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] = &coeffs[i + j] + &(a * b);
            }
        }
        Self::new(self.alpha.clone(), coeffs)
    }

    pub fn neg(&self) -> Self {
        Self {
            alpha: self.alpha.clone(),
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn scale(&self, c: &AlphaCoeff) -> Self {
        Self::new(
            self.alpha.clone(),
            self.coeffs.iter().map(|a| a * c).collect(),
        )
    }

    pub fn scale_rational(&self, r: &ExactScalar) -> Self {
        Self::new(self.alpha.clone(), self.coeffs.iter().map(|a| a.scale(r)).collect())
    }

    pub fn pow(&self, n: u32) -> Self {
        (0..n).fold(Self::one(self.alpha.clone()), |acc, _| acc.mul_unchecked(self))
    }

    /// Exact value at `x^α = 1`, the sum of all coefficients.
    pub fn value_at_one(&self) -> AlphaCoeff {
        self.coeffs
            .iter()
            .fold(AlphaCoeff::zero(), |acc, c| &acc + c)
    }

    /// Evaluates at `x` using the signed-power convention `u = sign(x)|x|^α`.
    pub fn evaluate(&self, x: f64) -> f64 {
        self.evaluate_u(signed_power(x, self.alpha.value))
    }

    /// Evaluates `Σ c_k u^k` directly in the variable `u = x^α`.
    pub fn evaluate_u(&self, u: f64) -> f64 {
        let a = self.alpha.value;
        self.coeffs
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * u + c.eval(a))
    }

    /// Coefficients evaluated at the numeric `α`, lowest power first.
    pub fn float_coeffs(&self) -> Vec<f64> {
        let a = self.alpha.value;
        self.coeffs.iter().map(|c| c.eval(a)).collect()
    }
}

fn fmt_basis(f: &mut fmt::Formatter<'_>, k: usize) -> fmt::Result {
    match k {
        0 => Ok(()),
        1 => write!(f, "x^a"),
        _ => write!(f, "x^{k}a"),
    }
}

/// Terms in descending powers, e.g. `672 x^5a - 480 x^3a + 60 x^a`.
impl fmt::Display for AlphaPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let (negative, magnitude) = match c.as_rational() {
                Some(r) if r.is_negative() => (true, AlphaCoeff::rational(-r)),
                _ => (false, c.clone()),
            };
            match (first, negative) {
                (true, true) => write!(f, "-")?,
                (true, false) => {}
                (false, true) => write!(f, " - ")?,
                (false, false) => write!(f, " + ")?,
            }
            first = false;
            if k == 0 {
                write!(f, "{magnitude}")?;
            } else {
                if magnitude != AlphaCoeff::one() {
                    write!(f, "{magnitude} ")?;
                }
                fmt_basis(f, k)?;
            }
        }
        Ok(())
    }
}

/// A quotient `Γ(a_1)···Γ(a_p) / Γ(b_1)···Γ(b_q)` with rational arguments.
///
/// Reduces exactly when every non-integer numerator argument can be paired with
/// a denominator argument differing from it by an integer; each pair becomes a
/// rising factorial and integer arguments become factorials. A pole in the
/// denominator makes the quotient zero; a pole in the numerator is a domain error.
#[derive(Clone, Debug, Default)]
pub struct GammaRatio {
    numer: Vec<ExactScalar>,
    denom: Vec<ExactScalar>,
}

impl GammaRatio {
    pub fn new() -> Self {
        Self::default()
    }

    /// Multiplies by `Γ(arg)`.
    pub fn times(mut self, arg: ExactScalar) -> Self {
        self.numer.push(arg);
        self
    }

    /// Divides by `Γ(arg)`.
    pub fn over(mut self, arg: ExactScalar) -> Self {
        self.denom.push(arg);
        self
    }

    pub fn reduce(&self) -> Result<ExactScalar> {
        let is_pole = |a: &ExactScalar| a.is_integer() && !a.is_positive();
        if let Some(a) = self.numer.iter().find(|a| is_pole(a)) {
            return Err(Error::Domain(format!("gamma has a pole at {a}")));
        }
        if self.denom.iter().any(is_pole) {
            return Ok(ExactScalar::zero());
        }

        // Group by fractional part; integers form their own class.
        let mut classes: BTreeMap<ExactScalar, (Vec<ExactScalar>, Vec<ExactScalar>)> =
            BTreeMap::new();
        for a in &self.numer {
            classes.entry(a - a.floor()).or_default().0.push(a.clone());
        }
        for b in &self.denom {
            classes.entry(b - b.floor()).or_default().1.push(b.clone());
        }

        let mut value = ExactScalar::one();
        for (frac, (mut num, mut den)) in classes {
            if frac.is_zero() {
                for a in &num {
                    value *= BigRational::from_integer(factorial(int_u64(&(a - ExactScalar::one()))));
                }
                for b in &den {
                    value /= BigRational::from_integer(factorial(int_u64(&(b - ExactScalar::one()))));
                }
                continue;
            }
            if num.len() != den.len() {
                return Err(Error::Domain(format!(
                    "gamma quotient with arguments of fractional part {frac} does not reduce to a rational"
                )));
            }
            num.sort();
            den.sort();
            for (a, b) in num.iter().zip(&den) {
                let shift = a - b;
                let steps = int_u64(&shift.abs()) as usize;
                if shift.is_negative() {
                    value /= pochhammer(a, steps);
                } else {
                    value *= pochhammer(b, steps);
                }
            }
        }
        Ok(value)
    }
}

fn int_u64(r: &ExactScalar) -> u64 {
    r.to_integer().to_u64().expect("small nonnegative integer")
}
