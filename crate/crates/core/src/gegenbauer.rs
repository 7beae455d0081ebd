//! Conformable Gegenbauer polynomials `C_{αn}^{(λ)}` in the basis `x^(kα)`.
//!
//! Three independent constructions are provided: the explicit finite sum
//! ([`from_series`]), the three-term recurrence ([`from_recurrence`]) and the
//! Leibniz expansion of the Rodrigues formula ([`from_rodrigues`]). All gamma
//! quotients are reduced to exact rationals, so for rational `λ` the three
//! agree coefficient for coefficient.

use num_traits::{One, Signed, Zero};

use crate::alphapoly::{
    binomial, integer, pochhammer, rational, to_f64, Alpha, AlphaCoeff, AlphaPoly, ExactScalar,
    GammaRatio,
};
use crate::error::{param, Result};

/// Degree `n`, weight parameter `λ` and conformable order `α` of one polynomial.
#[derive(Clone, Debug, PartialEq)]
pub struct GegenbauerSpec {
    pub n: usize,
    pub lambda: ExactScalar,
    pub alpha: Alpha,
}

impl GegenbauerSpec {
    pub fn new(n: usize, lambda: ExactScalar, alpha: Alpha) -> Self {
        Self { n, lambda, alpha }
    }

    /// Eigenvalue parameter `n(n+2λ)` of the differential equation.
    pub fn separation_constant(&self) -> ExactScalar {
        let n = integer(self.n as i64);
        &n * (&n + integer(2) * &self.lambda)
    }

    fn check(&self) -> Result<()> {
        if !self.lambda.is_positive() {
            return Err(param(format!("lambda must be positive, got {}", self.lambda)));
        }
        Ok(())
    }
}

/// The `T_{αn}^β` parametrisation, related to [`GegenbauerSpec`] by `λ = β + 1/2`.
#[derive(Clone, Debug, PartialEq)]
pub struct UltrasphericalSpec {
    pub n: usize,
    pub beta: ExactScalar,
    pub alpha: Alpha,
}

impl UltrasphericalSpec {
    pub fn new(n: usize, beta: ExactScalar, alpha: Alpha) -> Self {
        Self { n, beta, alpha }
    }

    pub fn lambda(&self) -> ExactScalar {
        &self.beta + rational(1, 2)
    }

    pub fn to_gegenbauer(&self) -> GegenbauerSpec {
        GegenbauerSpec::new(self.n, self.lambda(), self.alpha.clone())
    }

    fn check(&self) -> Result<()> {
        if self.beta <= rational(-1, 2) {
            return Err(param(format!("beta must exceed -1/2, got {}", self.beta)));
        }
        Ok(())
    }
}

fn half() -> ExactScalar {
    rational(1, 2)
}

/// Explicit sum `(1/Γ(λ)) Σ_s (−1)^s Γ(λ+n−s)/(s!(n−2s)!) (2x^α)^(n−2s)`.
pub fn from_series(spec: &GegenbauerSpec) -> Result<AlphaPoly> {
    spec.check()?;
    let n = spec.n;
    let mut coeffs = vec![ExactScalar::zero(); n + 1];
    for s in 0..=n / 2 {
        let k = n - 2 * s;
        let ratio = GammaRatio::new()
            .times(&spec.lambda + integer((n - s) as i64))
            .over(spec.lambda.clone())
            .over(integer(s as i64 + 1))
            .over(integer(k as i64 + 1))
            .reduce()?;
        let sign = if s % 2 == 0 { 1 } else { -1 };
        coeffs[k] = ratio * integer(sign) * integer(2).pow(k as i32);
    }
    Ok(AlphaPoly::from_rationals(spec.alpha.clone(), coeffs))
}

/// Three-term recurrence
/// `(k+1)C_{k+1} = 2(k+λ)x^α C_k − (k+2λ−1)C_{k−1}` seeded with `C_0 = 1`, `C_1 = 2λx^α`.
pub fn from_recurrence(spec: &GegenbauerSpec) -> Result<AlphaPoly> {
    spec.check()?;
    Ok(recurrence_sequence(&spec.lambda, &spec.alpha, spec.n).pop().unwrap())
}

/// `C_0 ..= C_{n_max}` for one `λ`, by the three-term recurrence.
pub(crate) fn recurrence_sequence(lambda: &ExactScalar, alpha: &Alpha, n_max: usize) -> Vec<AlphaPoly> {
    let u = AlphaPoly::x_alpha(alpha.clone());
    let mut out = vec![AlphaPoly::one(alpha.clone())];
    if n_max == 0 {
        return out;
    }
    out.push(u.scale_rational(&(integer(2) * lambda)));
    for k in 1..n_max {
        let kk = integer(k as i64);
        let a = integer(2) * (&kk + lambda);
        let b = &kk + integer(2) * lambda - integer(1);
        let next = u
            .mul_unchecked(&out[k])
            .scale_rational(&a)
            .sub_unchecked(&out[k - 1].scale_rational(&b))
            .scale_rational(&(integer(1) / (kk + integer(1))));
        out.push(next);
    }
    out
}

/// `(1−x^(2α))^(−w) D^(nα)[(1−x^(2α))^(n+w)]`, expanded with the Leibniz rule as
/// `(−1)^n α^n Σ_k C(n,k) Γ(n+w+1)² / (Γ(w+k+1)Γ(n+w−k+1)) (x^α+1)^k (x^α−1)^(n−k)`.
pub(crate) fn rodrigues_shape(n: usize, w: &ExactScalar, alpha: &Alpha) -> Result<AlphaPoly> {
    let plus = AlphaPoly::from_rationals(alpha.clone(), vec![integer(1), integer(1)]);
    let minus = AlphaPoly::from_rationals(alpha.clone(), vec![integer(-1), integer(1)]);
    let top = w + integer(n as i64 + 1);
    let mut sum = AlphaPoly::zero(alpha.clone());
    for k in 0..=n {
        let ratio = GammaRatio::new()
            .times(top.clone())
            .times(top.clone())
            .over(w + integer(k as i64 + 1))
            .over(w + integer((n - k) as i64 + 1))
            .reduce()?;
        let weight = ExactScalar::from_integer(binomial(n as u64, k as u64)) * ratio;
        let term = plus
            .pow(k as u32)
            .mul_unchecked(&minus.pow((n - k) as u32))
            .scale_rational(&weight);
        sum = sum.add_unchecked(&term);
    }
    let sign = if n.is_multiple_of(2) { integer(1) } else { integer(-1) };
    Ok(sum.scale(&AlphaCoeff::monomial(sign, n as i32)))
}

/// Rodrigues route: `A·Q_n` with
/// `A = Γ(2λ+n)Γ(λ+1/2) / ((−2α)^n Γ(2λ) n! Γ(n+λ+1/2))`.
pub fn from_rodrigues(spec: &GegenbauerSpec) -> Result<AlphaPoly> {
    spec.check()?;
    let n = spec.n;
    let lambda = &spec.lambda;
    let shape = rodrigues_shape(n, &(lambda - half()), &spec.alpha)?;
    let gamma_part = GammaRatio::new()
        .times(integer(2) * lambda + integer(n as i64))
        .times(lambda + half())
        .over(integer(2) * lambda)
        .over(integer(n as i64 + 1))
        .over(lambda + half() + integer(n as i64))
        .reduce()?;
    let power = integer(-2).pow(n as i32);
    let a = AlphaCoeff::monomial(gamma_part / power, -(n as i32));
    Ok(shape.scale(&a))
}

/// `T_{αn}^β`: the series form with `λ = β + 1/2`.
pub fn ultraspherical(spec: &UltrasphericalSpec) -> Result<AlphaPoly> {
    spec.check()?;
    from_series(&spec.to_gegenbauer())
}

/// A polynomial times a floating-point constant that is not rational in general.
#[derive(Clone, Debug)]
pub struct ScaledPoly {
    pub prefactor: f64,
    pub shape: AlphaPoly,
}

impl ScaledPoly {
    pub fn evaluate(&self, x: f64) -> f64 {
        self.prefactor * self.shape.evaluate(x)
    }
}

/// Rodrigues form of `T_{αn}^β` with its own normalisation
/// `(−1)^n Γ(n+2β+1) / (2^(n+β) α^n n! Γ(n+β+1))`.
///
/// The exact part (sign, `α^(−n)` and the Leibniz sum) lives in `shape`; the
/// `2^β` and the gamma quotient, generally irrational, form `prefactor`.
pub fn ultraspherical_rodrigues(spec: &UltrasphericalSpec) -> Result<ScaledPoly> {
    spec.check()?;
    let n = spec.n;
    let beta = to_f64(&spec.beta);
    let shape = rodrigues_shape(n, &spec.beta, &spec.alpha)?;
    let sign = if n.is_multiple_of(2) { integer(1) } else { integer(-1) };
    let shape = shape.scale(&AlphaCoeff::monomial(sign, -(n as i32)));
    let nf = n as f64;
    let log_prefactor = statrs::function::gamma::ln_gamma(nf + 2.0 * beta + 1.0)
        - statrs::function::gamma::ln_gamma(nf + beta + 1.0)
        - statrs::function::gamma::ln_gamma(nf + 1.0)
        - (nf + beta) * std::f64::consts::LN_2;
    Ok(ScaledPoly {
        prefactor: log_prefactor.exp(),
        shape,
    })
}

/// The `T^β` series exactly as printed, with `(s−2n)!` in the denominator and
/// exponent `s−2n`. A reciprocal gamma at a pole counts as zero, which removes
/// every term once `n ≥ 1`.
pub fn ultraspherical_series_as_printed(spec: &UltrasphericalSpec) -> Result<AlphaPoly> {
    spec.check()?;
    let n = spec.n as i64;
    let mut coeffs: Vec<ExactScalar> = Vec::new();
    for s in 0..=n / 2 {
        let ratio = GammaRatio::new()
            .times(&spec.beta + integer(n - s) + half())
            .over(&spec.beta + half())
            .over(integer(s + 1))
            .over(integer(s - 2 * n + 1))
            .reduce()?;
        if ratio.is_zero() {
            continue;
        }
        let exponent = s - 2 * n;
        if exponent < 0 {
            return Err(param(format!(
                "printed series has a nonzero term with negative exponent {exponent}"
            )));
        }
        let k = exponent as usize;
        if coeffs.len() <= k {
            coeffs.resize(k + 1, ExactScalar::zero());
        }
        let sign = if s % 2 == 0 { 1 } else { -1 };
        coeffs[k] += ratio * integer(sign) * integer(2).pow(k as i32);
    }
    Ok(AlphaPoly::from_rationals(spec.alpha.clone(), coeffs))
}

/// Conformable Legendre polynomial, `λ = 1/2`.
pub fn legendre(n: usize, alpha: &Alpha) -> AlphaPoly {
    from_series(&GegenbauerSpec::new(n, half(), alpha.clone())).expect("lambda = 1/2 is valid")
}

/// Conformable Chebyshev polynomial of the first kind: the classical `T_n`
/// coefficients placed on the basis `x^(kα)`.
pub fn chebyshev_t(n: usize, alpha: &Alpha) -> AlphaPoly {
    let mut prev = vec![integer(1)];
    if n == 0 {
        return AlphaPoly::from_rationals(alpha.clone(), prev);
    }
    let mut cur = vec![integer(0), integer(1)];
    for _ in 1..n {
        let mut next = vec![ExactScalar::zero(); cur.len() + 1];
        for (k, c) in cur.iter().enumerate() {
            next[k + 1] += integer(2) * c;
        }
        for (k, c) in prev.iter().enumerate() {
            next[k] -= c;
        }
        prev = std::mem::replace(&mut cur, next);
    }
    AlphaPoly::from_rationals(alpha.clone(), cur)
}

/// The `λ = 0` Rodrigues form
/// `(−1)^n 2^n n! / (α^n (2n)!) (1−x^(2α))^(1/2) D^(nα)[(1−x^(2α))^(n−1/2)]`.
pub fn chebyshev_t_rodrigues(n: usize, alpha: &Alpha) -> Result<AlphaPoly> {
    let shape = rodrigues_shape(n, &rational(-1, 2), alpha)?;
    let sign = if n.is_multiple_of(2) { 1 } else { -1 };
    let constant = GammaRatio::new()
        .times(integer(n as i64 + 1))
        .over(integer(2 * n as i64 + 1))
        .reduce()?
        * integer(2).pow(n as i32)
        * integer(sign);
    Ok(shape.scale(&AlphaCoeff::monomial(constant, -(n as i32))))
}

/// Classical Gegenbauer coefficients in a plain variable `u`, lowest power first,
/// from `C_{k+1} = (2(k+λ)u C_k − (k+2λ−1) C_{k−1})/(k+1)`.
///
/// Kept free of [`AlphaPoly`] so it can serve as an oracle for the constructors.
pub fn classical_oracle(n: usize, lambda: &ExactScalar) -> Vec<ExactScalar> {
    let two = integer(2);
    let mut prev: Vec<ExactScalar> = vec![ExactScalar::one()];
    if n == 0 {
        return prev;
    }
    let mut cur = vec![ExactScalar::zero(), &two * lambda];
    for k in 1..n {
        let kf = integer(k as i64);
        let a = &two * (&kf + lambda);
        let b = &kf + &two * lambda - ExactScalar::one();
        let d = kf + ExactScalar::one();
        let mut next = vec![ExactScalar::zero(); k + 2];
        for (i, c) in cur.iter().enumerate() {
            next[i + 1] += &a * c / &d;
        }
        for (i, c) in prev.iter().enumerate() {
            next[i] -= &b * c / &d;
        }
        prev = std::mem::replace(&mut cur, next);
    }
    cur
}

/// `C_{αn}^{(λ)}(1) = Γ(2λ+n)/(Γ(2λ) n!)` as an exact rational.
pub fn endpoint_value(n: usize, lambda: &ExactScalar) -> Result<ExactScalar> {
    GammaRatio::new()
        .times(integer(2) * lambda + integer(n as i64))
        .over(integer(2) * lambda)
        .over(integer(n as i64 + 1))
        .reduce()
}

/// Leading coefficient `2^n (λ)_n / n!`.
pub fn leading_coefficient(n: usize, lambda: &ExactScalar) -> ExactScalar {
    integer(2).pow(n as i32) * pochhammer(lambda, n)
        / ExactScalar::from_integer(crate::alphapoly::factorial(n as u64))
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

    fn spec(n: usize, lambda: ExactScalar, alpha: &Alpha) -> GegenbauerSpec {
        GegenbauerSpec::new(n, lambda, alpha.clone())
    }

    #[test]
    fn series_examples() {
        let a = al("3/10");
        assert_eq!(from_series(&spec(0, integer(3), &a)).unwrap(), ints(&a, &[1]));
        assert_eq!(from_series(&spec(2, integer(3), &a)).unwrap(), ints(&a, &[-3, 0, 24]));
        assert_eq!(
            from_series(&spec(5, integer(3), &a)).unwrap(),
            ints(&a, &[0, 60, 0, -480, 0, 672])
        );
    }

    #[test]
    fn listed_polynomials_match_pochhammer_forms() {
        // C_0..C_5 written with Pochhammer symbols, for a non-integer λ.
        let a = al("1/2");
        let l = rational(5, 2);
        let p = |m| pochhammer(&l, m);
        let expected: Vec<Vec<ExactScalar>> = vec![
            vec![integer(1)],
            vec![integer(0), integer(2) * &l],
            vec![-l.clone(), integer(0), p(2) * integer(2)],
            vec![integer(0), -p(2) * integer(2), integer(0), p(3) * rational(4, 3)],
            // constant term is λ_2/2; with λ_2 the endpoint value would be off
            vec![p(2) / integer(2), integer(0), -p(3) * integer(2), integer(0), p(4) * rational(2, 3)],
            vec![
                integer(0),
                p(3),
                integer(0),
                -p(4) * rational(4, 3),
                integer(0),
                p(5) * rational(4, 15),
            ],
        ];
        for (n, coeffs) in expected.into_iter().enumerate() {
            let want = AlphaPoly::from_rationals(a.clone(), coeffs);
            assert_eq!(from_series(&spec(n, l.clone(), &a)).unwrap(), want, "n={n}");
        }
    }

    #[test]
    fn recurrence_examples() {
        let a = al("1/2");
        assert_eq!(from_recurrence(&spec(1, integer(3), &a)).unwrap(), ints(&a, &[0, 6]));
        assert_eq!(from_recurrence(&spec(0, rational(7, 3), &a)).unwrap(), ints(&a, &[1]));
        assert_eq!(
            from_recurrence(&spec(3, integer(3), &a)).unwrap(),
            ints(&a, &[0, -24, 0, 80])
        );
    }

    #[test]
    fn rodrigues_examples() {
        let a = al("3/4");
        assert_eq!(from_rodrigues(&spec(0, integer(2), &a)).unwrap(), ints(&a, &[1]));
        assert_eq!(from_rodrigues(&spec(2, integer(3), &a)).unwrap(), ints(&a, &[-3, 0, 24]));
        assert_eq!(
            from_rodrigues(&spec(4, integer(3), &a)).unwrap(),
            ints(&a, &[6, 0, -120, 0, 240])
        );
        assert_eq!(endpoint_value(4, &integer(3)).unwrap(), integer(126));
    }

    #[test]
    fn nonpositive_lambda_is_rejected() {
        let a = al("1/2");
        for l in [integer(0), rational(-1, 2)] {
            assert!(from_series(&spec(2, l.clone(), &a)).is_err());
            assert!(from_recurrence(&spec(2, l.clone(), &a)).is_err());
            assert!(from_rodrigues(&spec(2, l, &a)).is_err());
        }
        let bad = UltrasphericalSpec::new(1, rational(-1, 2), a);
        assert!(ultraspherical(&bad).is_err());
    }

    /// `p / (1 − u²)^times`, asserting the division is exact.
    fn divide_by_weight(p: &AlphaPoly, times: usize) -> AlphaPoly {
        let mut cur = p.clone();
        for _ in 0..times {
            let c = cur.coeffs();
            let deg = c.len() - 1;
            let mut q: Vec<AlphaCoeff> = Vec::with_capacity(deg - 1);
            for k in 0..deg - 1 {
                let prev = if k >= 2 { q[k - 2].clone() } else { AlphaCoeff::zero() };
                q.push(&c[k] + &prev);
            }
            let q = AlphaPoly::new(cur.alpha().clone(), q);
            let w = ints(cur.alpha(), &[1, 0, -1]);
            assert_eq!(q.mul_unchecked(&w), cur, "division not exact");
            cur = q;
        }
        cur
    }

    #[test]
    fn rodrigues_shape_matches_direct_differentiation() {
        // For integer weight exponent w the Rodrigues expression is a polynomial
        // computation: differentiate (1−u²)^(n+w) n times and divide by (1−u²)^w.
        let a = al("2/5");
        for w in 0..3usize {
            for n in 0..7usize {
                let weight = ints(&a, &[1, 0, -1]);
                let direct = divide_by_weight(&weight.pow((n + w) as u32).d_alpha_n(n), w);
                let shape = rodrigues_shape(n, &integer(w as i64), &a).unwrap();
                assert_eq!(shape, direct, "n={n} w={w}");
            }
        }
    }

    #[test]
    fn ultraspherical_examples() {
        let a = al("1/2");
        let t = |n, b: ExactScalar| ultraspherical(&UltrasphericalSpec::new(n, b, a.clone())).unwrap();
        assert_eq!(t(0, rational(1, 2)), ints(&a, &[1]));
        assert_eq!(t(1, rational(1, 2)), ints(&a, &[0, 2]));
        assert_eq!(
            t(2, integer(0)),
            AlphaPoly::from_rationals(a.clone(), vec![rational(-1, 2), integer(0), rational(3, 2)])
        );
    }

    #[test]
    fn ultraspherical_rodrigues_is_proportional() {
        // β = 0 makes the extra constant Γ(2β+1)/(2^β Γ(β+1)) equal to one.
        let a = al("1/2");
        for n in 0..6 {
            let s = UltrasphericalSpec::new(n, integer(0), a.clone());
            let r = ultraspherical_rodrigues(&s).unwrap();
            let c = ultraspherical(&s).unwrap();
            for x in [0.1, 0.5, 0.9, 1.0] {
                assert!((r.evaluate(x) - c.evaluate(x)).abs() < 1e-12 * (1.0 + c.evaluate(x).abs()));
            }
        }
    }

    #[test]
    fn printed_ultraspherical_series_degenerates() {
        let a = al("1/2");
        let s0 = UltrasphericalSpec::new(0, rational(1, 2), a.clone());
        assert_eq!(ultraspherical_series_as_printed(&s0).unwrap(), ints(&a, &[1]));
        for n in 1..5 {
            let s = UltrasphericalSpec::new(n, rational(1, 2), a.clone());
            assert!(ultraspherical_series_as_printed(&s).unwrap().is_zero());
        }
    }

    #[test]
    fn legendre_examples() {
        let a = al("1/3");
        assert_eq!(legendre(0, &a), ints(&a, &[1]));
        assert_eq!(legendre(1, &a), ints(&a, &[0, 1]));
        assert_eq!(
            legendre(2, &a),
            AlphaPoly::from_rationals(a.clone(), vec![rational(-1, 2), integer(0), rational(3, 2)])
        );
    }

    #[test]
    fn chebyshev_examples() {
        let a = al("1/2");
        assert_eq!(chebyshev_t(0, &a), ints(&a, &[1]));
        assert_eq!(chebyshev_t(1, &a), ints(&a, &[0, 1]));
        assert_eq!(chebyshev_t(2, &a), ints(&a, &[-1, 0, 2]));
        assert_eq!(chebyshev_t(3, &a), ints(&a, &[0, -3, 0, 4]));
    }

    #[test]
    fn chebyshev_rodrigues_agrees() {
        let a = al("3/4");
        for n in 0..10 {
            assert_eq!(chebyshev_t_rodrigues(n, &a).unwrap(), chebyshev_t(n, &a), "n={n}");
        }
    }

    #[test]
    fn classical_oracle_examples() {
        assert_eq!(classical_oracle(1, &rational(1, 2)), vec![integer(0), integer(1)]);
        assert_eq!(classical_oracle(2, &integer(1)), vec![integer(-1), integer(0), integer(4)]);
        assert_eq!(classical_oracle(2, &integer(3)), vec![integer(-3), integer(0), integer(24)]);
    }

    #[test]
    fn endpoint_and_leading_coefficient() {
        assert_eq!(endpoint_value(2, &integer(3)).unwrap(), integer(21));
        assert_eq!(endpoint_value(5, &integer(3)).unwrap(), integer(252));
        assert_eq!(leading_coefficient(5, &integer(3)), integer(672));
        assert_eq!(leading_coefficient(2, &rational(1, 2)), rational(3, 2));
    }

    #[test]
    fn separation_constant_value() {
        assert_eq!(spec(2, integer(3), &Alpha::one()).separation_constant(), integer(16));
    }
}
