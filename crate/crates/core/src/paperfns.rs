//! The concrete functions
//!
//! ```text
//! f(x)  = (1 - cos x / cos(x/2)) / x^2            f(0)  = 3/8,  0 <= x < pi
//! g(x)  = (2 - sin x / sin(x/2)) / x^2            g(0)  = 1/4
//! g1(x) = (cosh(x/2) - cos(x/2)) / x^2            g1(0) = 1/4
//! g2(x) = (cosh(x/2) + cos(x/2) - 2) / x^2        g2(0) = 0
//! ```
//!
//! as certified power series, together with closed-form evaluators that do
//! not use those series.
//!
//! `f = (1 + sec(x/2) - 2 cos(x/2)) / x^2` has nonnegative Maclaurin
//! coefficients `(|E_2k| - 2(-1)^k) / (4^k (2k)!)` at `x^(2k-2)`. `g` does not.
//! It alternates in blocks of two, but `g = g1 - g2` splits it into two
//! nonnegative series.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::numeric::{enc_pi, factorial, int, rat, Enclosure, Precision, Rational};
use crate::series::{euler_numbers, eval_std, sec_series, std_series, PowerSeries, StdKind, TailClass, TailSign};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FunctionId {
    F,
    G,
    G1,
    G2,
}

impl FunctionId {
    pub fn name(self) -> &'static str {
        match self {
            FunctionId::F => "f",
            FunctionId::G => "g",
            FunctionId::G1 => "g1",
            FunctionId::G2 => "g2",
        }
    }

    pub fn value_at_zero(self) -> Rational {
        match self {
            FunctionId::F => rat(3, 8),
            FunctionId::G | FunctionId::G1 => rat(1, 4),
            FunctionId::G2 => Rational::zero(),
        }
    }
}

impl fmt::Display for FunctionId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FunctionId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "f" => Ok(FunctionId::F),
            "g" => Ok(FunctionId::G),
            "g1" => Ok(FunctionId::G1),
            "g2" => Ok(FunctionId::G2),
            other => Err(Error::InvalidArgument(format!("unknown function {other:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PaperFunction {
    pub id: FunctionId,
    pub series: PowerSeries,
    /// Right end of the domain (pi for `f`, beta for the g family).
    pub domain_hi: Enclosure,
    pub value_at_zero: Rational,
}

/// `c_{2k-2} = (|E_2k| - 2(-1)^k) / (2^2k (2k)!)` for `k = 1..=m`, odd
/// coefficients zero.
fn f_coefficients_from_euler(order: usize) -> Result<Vec<Rational>> {
    let kmax = order / 2 + 1;
    let euler = euler_numbers(kmax)?;
    let mut coeffs = vec![Rational::zero(); order + 1];
    for k in 1..=kmax {
        let e = Rational::from_integer(euler.values()[k].clone());
        let sign_term = if k % 2 == 0 { int(2) } else { int(-2) };
        let denom = Rational::from_integer(factorial(2 * k as u64) * (BigInt::one() << (2 * k)));
        coeffs[2 * k - 2] = (e - sign_term) / denom;
    }
    Ok(coeffs)
}

/// `1 + sec(x/2) - 2 cos(x/2)`, through order `n`.
fn sec_identity_rhs(n: usize) -> Result<PowerSeries> {
    let half = rat(1, 2);
    let sec_half = sec_series(n).scale_argument(&half);
    let cos_half = std_series(StdKind::Cos, n).scale_argument(&half);
    std_series(StdKind::One, n)
        .add(&sec_half)?
        .sub(&cos_half.scalar_mul(&int(2)))
}

fn mismatch(what: &str, a: &PowerSeries, b: &PowerSeries) -> Error {
    let index = a
        .coeffs()
        .iter()
        .zip(b.coeffs())
        .position(|(x, y)| x != y)
        .unwrap_or(0);
    Error::InternalCrossCheckMismatch(format!("{what}: constructions differ at x^{index}"))
}

fn certify_nonnegative(series: PowerSeries, what: &str) -> Result<PowerSeries> {
    if let Some(k) = series.first_negative() {
        return Err(Error::InternalCrossCheckMismatch(format!(
            "{what}: coefficient x^{k} is negative"
        )));
    }
    let TailClass::Certified { majorant, .. } = series.tail().clone() else {
        return Err(Error::InternalCrossCheckMismatch(format!(
            "{what}: tail majorant lost"
        )));
    };
    Ok(series.with_tail(TailClass::Certified {
        sign: TailSign::Nonnegative,
        majorant,
    }))
}

/// The series of `f` through order `n` (`n` even, `>= 2`), built both from the
/// Euler-number formula and from series arithmetic on the secant identity.
pub fn build_f(n: usize) -> Result<PaperFunction> {
    if n < 2 || n % 2 != 0 {
        return Err(Error::InvalidArgument(format!(
            "f truncation order must be even and >= 2, got {n}"
        )));
    }
    let from_identity = sec_identity_rhs(n + 2)?.divide_by_power(2)?;
    let from_euler = f_coefficients_from_euler(n)?;
    if from_identity.coeffs() != from_euler.as_slice() {
        let euler_series = PowerSeries::from_prefix(Rational::zero(), from_euler)?;
        return Err(mismatch("f", &from_identity, &euler_series));
    }
    // every omitted c_{2k-2} is positive since |E_2k| >= 1 > 2(-1)^k only
    // fails for even k, where |E_2k| >= 5 > 2
    let series = certify_nonnegative(from_identity, "f")?;
    Ok(PaperFunction {
        id: FunctionId::F,
        series,
        domain_hi: enc_pi(Precision::default()),
        value_at_zero: rat(3, 8),
    })
}

fn half_argument(kind: StdKind, n: usize) -> PowerSeries {
    std_series(kind, n).scale_argument(&rat(1, 2))
}

/// `(g, g1, g2)` through order `n` (`n >= 4`, `n % 4 == 0`); the g family
/// lives on `[0, beta]`.
pub fn build_g_family(n: usize, beta: &Enclosure) -> Result<(PaperFunction, PaperFunction, PaperFunction)> {
    if n < 4 || n % 4 != 0 {
        return Err(Error::InvalidArgument(format!(
            "g-family truncation order must be a multiple of 4 and >= 4, got {n}"
        )));
    }
    if !beta.lo().is_positive() {
        return Err(Error::DomainViolation(format!("beta = {beta} must be positive")));
    }
    let m = n + 2;
    let cosh = half_argument(StdKind::Cosh, m);
    let cos = half_argument(StdKind::Cos, m);
    let two = std_series(StdKind::One, m).scalar_mul(&int(2));

    // cosh(x/2) -+ cos(x/2) keeps exactly the x^(4j+2) resp. x^(4j) terms of
    // 2 cosh(x/2), all positive
    let g1 = certify_nonnegative(cosh.sub(&cos)?.divide_by_power(2)?, "g1")?;
    let g2 = certify_nonnegative(cosh.add(&cos)?.sub(&two)?.divide_by_power(2)?, "g2")?;
    let g = g1.sub(&g2)?;

    // 2 - sin x / sin(x/2) = 2 - 2 cos(x/2)
    let direct = two.sub(&cos.scalar_mul(&int(2)))?.divide_by_power(2)?;
    if direct.coeffs() != g.coeffs() {
        return Err(mismatch("g", &g, &direct));
    }
    let make = |id: FunctionId, series: PowerSeries| PaperFunction {
        id,
        value_at_zero: id.value_at_zero(),
        series,
        domain_hi: beta.clone(),
    };
    Ok((
        make(FunctionId::G, g),
        make(FunctionId::G1, g1),
        make(FunctionId::G2, g2),
    ))
}

/// Builds one function by id. `beta` only matters for the g family.
pub fn build(id: FunctionId, n: usize, beta: &Enclosure) -> Result<PaperFunction> {
    match id {
        FunctionId::F => build_f(n),
        _ => {
            let (g, g1, g2) = build_g_family(n, beta)?;
            Ok(match id {
                FunctionId::G => g,
                FunctionId::G1 => g1,
                _ => g2,
            })
        }
    }
}

fn cos_at(x: &Enclosure, p: Precision) -> Result<Enclosure> {
    eval_std(StdKind::Cos, x, p)
}

/// Closed-form value at `x`, computed from tail-bounded cos/sin/cosh
/// evaluations and enclosure arithmetic; independent of the function's own
/// Maclaurin series. `domain_hi` is the right end of the allowed domain.
pub fn closed_eval(
    id: FunctionId,
    x: &Enclosure,
    domain_hi: &Enclosure,
    p: Precision,
) -> Result<Enclosure> {
    if !x.lo().is_positive() {
        return Err(Error::DomainViolation(format!("{id} closed form needs x > 0, got {x}")));
    }
    if x.hi() > domain_hi.hi() {
        return Err(Error::DomainViolation(format!(
            "{id}: {x} is beyond the domain end {domain_hi}"
        )));
    }
    let bits = p.working_bits();
    let half = x.scale(&rat(1, 2));
    let x2 = x.square();
    let numerator = match id {
        FunctionId::F => {
            let cos_half = cos_at(&half, p)?;
            if cos_half.contains_zero() {
                return Err(Error::PoleProximity(format!(
                    "cos(x/2) is not separated from 0 at x = {x}"
                )));
            }
            Enclosure::one() - cos_at(x, p)?.div(&cos_half)?
        }
        FunctionId::G => {
            let sin_half = eval_std(StdKind::Sin, &half, p)?;
            if sin_half.contains_zero() {
                return Err(Error::PoleProximity(format!(
                    "sin(x/2) is not separated from 0 at x = {x}"
                )));
            }
            Enclosure::point(int(2)) - eval_std(StdKind::Sin, x, p)?.div(&sin_half)?
        }
        FunctionId::G1 => eval_std(StdKind::Cosh, &half, p)? - cos_at(&half, p)?,
        FunctionId::G2 => {
            eval_std(StdKind::Cosh, &half, p)? + cos_at(&half, p)? - Enclosure::point(int(2))
        }
    };
    Ok(numerator.div(&x2)?.narrow(bits))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Identity {
    /// `1 - cos x / cos(x/2) = 1 + sec(x/2) - 2 cos(x/2)`
    SecIdentity,
    /// `sin x = 2 cos(x/2) sin(x/2)`
    SinRatioIdentity,
    /// `g = g1 - g2` against `(2 - 2 cos(x/2)) / x^2`
    Splitting,
}

/// Coefficientwise difference of the two sides of an identity through order
/// `n`; every entry is zero when the identity holds.
pub fn identity_check(id: Identity, n: usize) -> Result<PowerSeries> {
    let half = rat(1, 2);
    match id {
        Identity::SecIdentity => {
            let sec_half = sec_series(n).scale_argument(&half);
            let lhs = std_series(StdKind::One, n).sub(&std_series(StdKind::Cos, n).mul(&sec_half)?)?;
            lhs.sub(&sec_identity_rhs(n)?)
        }
        Identity::SinRatioIdentity => {
            let product = half_argument(StdKind::Cos, n)
                .scalar_mul(&int(2))
                .mul(&half_argument(StdKind::Sin, n))?;
            std_series(StdKind::Sin, n).sub(&product)
        }
        Identity::Splitting => {
            let m = n + 2;
            let cosh = half_argument(StdKind::Cosh, m);
            let cos = half_argument(StdKind::Cos, m);
            let two = std_series(StdKind::One, m).scalar_mul(&int(2));
            let g1 = cosh.sub(&cos)?.divide_by_power(2)?;
            let g2 = cosh.add(&cos)?.sub(&two)?.divide_by_power(2)?;
            let direct = two.sub(&cos.scalar_mul(&int(2)))?.divide_by_power(2)?;
            g1.sub(&g2)?.sub(&direct)
        }
    }
}
