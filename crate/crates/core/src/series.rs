//! Truncated power series over exact rationals.
//!
//! A [`PowerSeries`] stores `c_0 ..= c_N` exactly. Its [`TailClass`] says what
//! is known about the coefficients beyond `N`. Only trusted constructors (the
//! standard expansions here and the builders in `paperfns`) may certify a
//! tail. Arithmetic then propagates that certificate. A finite prefix never
//! certifies anything about the tail.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::numeric::{factorial, int, rat, round_up, Enclosure, Precision, Rational};

/// Upper bound for the absolute value of the coefficients:
/// `|c_k| <= A r^k / k! + B rho^k` for every `k` beyond the stored order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Majorant {
    pub factorial_scale: Rational,
    pub factorial_rate: Rational,
    pub geometric_scale: Rational,
    pub geometric_ratio: Rational,
}

impl Majorant {
    pub fn zero() -> Self {
        Self {
            factorial_scale: Rational::zero(),
            factorial_rate: Rational::zero(),
            geometric_scale: Rational::zero(),
            geometric_ratio: Rational::zero(),
        }
    }

    /// `A r^k / k!`
    pub fn factorial(scale: Rational, rate: Rational) -> Self {
        Self {
            factorial_scale: scale.abs(),
            factorial_rate: rate.abs(),
            ..Self::zero()
        }
    }

    /// `B rho^k`
    pub fn geometric(scale: Rational, ratio: Rational) -> Self {
        Self {
            geometric_scale: scale.abs(),
            geometric_ratio: ratio.abs(),
            ..Self::zero()
        }
    }

    pub fn is_zero(&self) -> bool {
        self.factorial_scale.is_zero() && self.geometric_scale.is_zero()
    }

    fn plus(&self, other: &Majorant) -> Majorant {
        Majorant {
            factorial_scale: &self.factorial_scale + &other.factorial_scale,
            factorial_rate: self.factorial_rate.clone().max(other.factorial_rate.clone()),
            geometric_scale: &self.geometric_scale + &other.geometric_scale,
            geometric_ratio: self.geometric_ratio.clone().max(other.geometric_ratio.clone()),
        }
    }

    fn times(&self, factor: &Rational) -> Majorant {
        let f = factor.abs();
        Majorant {
            factorial_scale: &self.factorial_scale * &f,
            factorial_rate: self.factorial_rate.clone(),
            geometric_scale: &self.geometric_scale * f,
            geometric_ratio: self.geometric_ratio.clone(),
        }
    }

    /// Majorant of `c_k lambda^k`.
    fn argument_scaled(&self, lambda: &Rational) -> Majorant {
        let l = lambda.abs();
        Majorant {
            factorial_scale: self.factorial_scale.clone(),
            factorial_rate: &self.factorial_rate * &l,
            geometric_scale: self.geometric_scale.clone(),
            geometric_ratio: &self.geometric_ratio * l,
        }
    }

    /// Majorant of `d_k = c_{k+m}`, using `(k+m)! >= k!`.
    fn shifted(&self, m: usize) -> Majorant {
        Majorant {
            factorial_scale: &self.factorial_scale * num_traits::pow(self.factorial_rate.clone(), m),
            factorial_rate: self.factorial_rate.clone(),
            geometric_scale: &self.geometric_scale * num_traits::pow(self.geometric_ratio.clone(), m),
            geometric_ratio: self.geometric_ratio.clone(),
        }
    }

    /// Sum of the majorant over `k > order` at `|t| <= radius`.
    fn tail_sum(&self, order: usize, radius: &Rational) -> Result<Rational> {
        let mut total = Rational::zero();
        let next = order + 1;
        if !self.factorial_scale.is_zero() {
            let rx = &self.factorial_rate * radius;
            let limit = int(next as i64 + 1);
            if rx >= limit {
                return Err(Error::RatioConditionViolated {
                    bound: radius.to_string(),
                });
            }
            // first omitted term times the geometric factor 1/(1 - rx/(N+2))
            let first = &self.factorial_scale * num_traits::pow(rx.clone(), next)
                / Rational::from_integer(factorial(next as u64));
            total += first / (Rational::one() - rx / limit);
        }
        if !self.geometric_scale.is_zero() {
            let qx = &self.geometric_ratio * radius;
            if qx >= Rational::one() {
                return Err(Error::RatioConditionViolated {
                    bound: radius.to_string(),
                });
            }
            total += &self.geometric_scale * num_traits::pow(qx.clone(), next) / (Rational::one() - qx);
        }
        Ok(total)
    }
}

/// Sign information about the omitted coefficients.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TailSign {
    /// Every omitted coefficient is `>= 0`.
    Nonnegative,
    /// Nonzero omitted coefficients alternate in sign (cos, sin).
    Alternating,
    Mixed,
}

/// What is known about the coefficients past the truncation order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TailClass {
    Certified { sign: TailSign, majorant: Majorant },
    Unknown,
}

impl TailClass {
    fn certified(sign: TailSign, majorant: Majorant) -> Self {
        TailClass::Certified { sign, majorant }
    }

    /// All omitted coefficients are zero.
    pub fn exact() -> Self {
        Self::certified(TailSign::Nonnegative, Majorant::zero())
    }

    pub fn is_certified(&self) -> bool {
        matches!(self, TailClass::Certified { .. })
    }

    pub fn is_nonnegative(&self) -> bool {
        matches!(
            self,
            TailClass::Certified {
                sign: TailSign::Nonnegative,
                ..
            }
        )
    }

    /// Short family label used in reports.
    pub fn label(&self) -> &'static str {
        match self {
            TailClass::Certified { majorant, .. } if majorant.is_zero() => "Exact",
            TailClass::Certified {
                sign: TailSign::Nonnegative,
                majorant,
            } if majorant.geometric_scale.is_zero() => "PositiveFactorial",
            TailClass::Certified {
                sign: TailSign::Nonnegative,
                ..
            } => "PositiveGeometric",
            TailClass::Certified {
                sign: TailSign::Alternating,
                ..
            } => "AlternatingFactorial",
            TailClass::Certified { .. } => "BoundedMixed",
            TailClass::Unknown => "Unknown",
        }
    }
}

/// Truncated power series `sum c_k (x - a)^k`, `k = 0..=order`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PowerSeries {
    base_point: Rational,
    coeffs: Vec<Rational>,
    tail: TailClass,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StdKind {
    Cos,
    Sin,
    Cosh,
    Sinh,
    Exp,
    One,
    X,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SeriesOp {
    Add,
    Sub,
}

impl PowerSeries {
    /// A series whose tail is not known. Evaluation of such a series is
    /// never rigorous.
    pub fn from_prefix(base_point: Rational, coeffs: Vec<Rational>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::InvalidArgument("series needs at least c_0".into()));
        }
        Ok(Self {
            base_point,
            coeffs,
            tail: TailClass::Unknown,
        })
    }

    /// An exact polynomial about 0: every coefficient past the last is zero.
    pub fn polynomial(coeffs: Vec<Rational>) -> Result<Self> {
        let mut s = Self::from_prefix(Rational::zero(), coeffs)?;
        s.tail = TailClass::exact();
        Ok(s)
    }

    pub(crate) fn with_tail(mut self, tail: TailClass) -> Self {
        self.tail = tail;
        self
    }

    pub(crate) fn rebase(mut self, base_point: Rational) -> Self {
        self.base_point = base_point;
        self
    }

    /// Same series with `c_0 .. c_{n-1}` set to zero.
    pub(crate) fn zero_prefix(&self, n: usize) -> PowerSeries {
        let mut s = self.clone();
        for c in s.coeffs.iter_mut().take(n) {
            *c = Rational::zero();
        }
        s
    }

    pub fn base_point(&self) -> &Rational {
        &self.base_point
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn tail(&self) -> &TailClass {
        &self.tail
    }

    pub fn is_exact_polynomial(&self) -> bool {
        matches!(&self.tail, TailClass::Certified { majorant, .. } if majorant.is_zero())
    }

    /// Coefficient `c_k`; beyond the stored order only known for exact
    /// polynomials (where it is zero).
    pub fn coeff(&self, k: usize) -> Option<Rational> {
        match self.coeffs.get(k) {
            Some(c) => Some(c.clone()),
            None if self.is_exact_polynomial() => Some(Rational::zero()),
            None => None,
        }
    }

    /// Lowers the truncation order to `n`, folding the dropped coefficients
    /// into the tail certificate.
    pub fn truncate(&self, n: usize) -> PowerSeries {
        if n >= self.order() {
            return self.clone();
        }
        let dropped = &self.coeffs[n + 1..];
        let tail = match &self.tail {
            TailClass::Unknown => TailClass::Unknown,
            TailClass::Certified { sign, majorant } => {
                let extra = cover_coefficients(dropped, n + 1, majorant);
                let sign = match sign {
                    TailSign::Nonnegative if dropped.iter().all(|c| !c.is_negative()) => {
                        TailSign::Nonnegative
                    }
                    _ if dropped.iter().all(Zero::is_zero) => *sign,
                    _ => TailSign::Mixed,
                };
                TailClass::certified(sign, majorant.plus(&extra))
            }
        };
        PowerSeries {
            base_point: self.base_point.clone(),
            coeffs: self.coeffs[..=n].to_vec(),
            tail,
        }
    }

    fn check_base(&self, other: &PowerSeries) -> Result<()> {
        if self.base_point != other.base_point {
            return Err(Error::BasePointMismatch);
        }
        Ok(())
    }

    pub fn add(&self, other: &PowerSeries) -> Result<PowerSeries> {
        self.combine(other, SeriesOp::Add)
    }

    pub fn sub(&self, other: &PowerSeries) -> Result<PowerSeries> {
        self.combine(other, SeriesOp::Sub)
    }

    fn combine(&self, other: &PowerSeries, op: SeriesOp) -> Result<PowerSeries> {
        self.check_base(other)?;
        let n = self.order().min(other.order());
        let (a, b) = (self.truncate(n), other.truncate(n));
        let coeffs = a
            .coeffs
            .iter()
            .zip(&b.coeffs)
            .map(|(x, y)| match op {
                SeriesOp::Add => x + y,
                SeriesOp::Sub => x - y,
            })
            .collect();
        let tail = match (&a.tail, &b.tail) {
            (
                TailClass::Certified { sign: sa, majorant: ma },
                TailClass::Certified { sign: sb, majorant: mb },
            ) => {
                let sign = if ma.is_zero() && mb.is_zero() {
                    TailSign::Nonnegative
                } else if mb.is_zero() {
                    *sa
                } else if ma.is_zero() && op == SeriesOp::Add {
                    *sb
                } else if op == SeriesOp::Add
                    && *sa == TailSign::Nonnegative
                    && *sb == TailSign::Nonnegative
                {
                    TailSign::Nonnegative
                } else {
                    TailSign::Mixed
                };
                TailClass::certified(sign, ma.plus(mb))
            }
            _ => TailClass::Unknown,
        };
        Ok(PowerSeries {
            base_point: a.base_point,
            coeffs,
            tail,
        })
    }

    pub fn scalar_mul(&self, s: &Rational) -> PowerSeries {
        let tail = match &self.tail {
            TailClass::Unknown => TailClass::Unknown,
            TailClass::Certified { .. } if s.is_zero() => TailClass::exact(),
            TailClass::Certified { sign, majorant } => {
                let sign = match sign {
                    TailSign::Nonnegative if s.is_negative() && !majorant.is_zero() => {
                        TailSign::Mixed
                    }
                    other => *other,
                };
                TailClass::certified(sign, majorant.times(s))
            }
        };
        PowerSeries {
            base_point: self.base_point.clone(),
            coeffs: self.coeffs.iter().map(|c| c * s).collect(),
            tail,
        }
    }

    /// Cauchy product truncated at the smaller order. The product's tail is
    /// not certified.
    pub fn mul(&self, other: &PowerSeries) -> Result<PowerSeries> {
        self.check_base(other)?;
        let n = self.order().min(other.order());
        let coeffs = (0..=n)
            .map(|k| {
                (0..=k).fold(Rational::zero(), |acc, j| {
                    acc + &self.coeffs[j] * &other.coeffs[k - j]
                })
            })
            .collect();
        let tail = if self.is_exact_polynomial()
            && other.is_exact_polynomial()
            && self.degree() + other.degree() <= n
        {
            TailClass::exact()
        } else {
            TailClass::Unknown
        };
        Ok(PowerSeries {
            base_point: self.base_point.clone(),
            coeffs,
            tail,
        })
    }

    /// Series `b` with `a * b = 1 + O(t^(N+1))`.
    pub fn reciprocal(&self) -> Result<PowerSeries> {
        let a0 = &self.coeffs[0];
        if a0.is_zero() {
            return Err(Error::ZeroConstantTerm);
        }
        let inv = a0.recip();
        let mut b: Vec<Rational> = Vec::with_capacity(self.coeffs.len());
        b.push(inv.clone());
        for n in 1..self.coeffs.len() {
            let s = (1..=n).fold(Rational::zero(), |acc, j| acc + &self.coeffs[j] * &b[n - j]);
            b.push(-&inv * s);
        }
        let tail = if self.order() == 0 && self.is_exact_polynomial() {
            TailClass::exact()
        } else {
            TailClass::Unknown
        };
        Ok(PowerSeries {
            base_point: self.base_point.clone(),
            coeffs: b,
            tail,
        })
    }

    /// Series of `x -> a(lambda x)`.
    pub fn scale_argument(&self, lambda: &Rational) -> PowerSeries {
        let mut power = Rational::one();
        let coeffs = self
            .coeffs
            .iter()
            .map(|c| {
                let v = c * &power;
                power *= lambda;
                v
            })
            .collect();
        let tail = match &self.tail {
            TailClass::Unknown => TailClass::Unknown,
            TailClass::Certified { .. } if lambda.is_zero() => TailClass::exact(),
            TailClass::Certified { sign, majorant } => {
                let sign = if lambda.is_negative() && *sign == TailSign::Nonnegative {
                    TailSign::Mixed
                } else {
                    *sign
                };
                TailClass::certified(sign, majorant.argument_scaled(lambda))
            }
        };
        PowerSeries {
            base_point: self.base_point.clone(),
            coeffs,
            tail,
        }
    }

    /// Divides by `(x - a)^m`; the first `m` coefficients must vanish.
    pub fn divide_by_power(&self, m: usize) -> Result<PowerSeries> {
        if m > self.order() {
            return Err(Error::OrderExceedsTruncation {
                requested: m,
                available: self.order(),
            });
        }
        if let Some(index) = self.coeffs[..m].iter().position(|c| !c.is_zero()) {
            return Err(Error::NonzeroLowOrderCoefficient { index, power: m });
        }
        let tail = match &self.tail {
            TailClass::Unknown => TailClass::Unknown,
            TailClass::Certified { sign, majorant } => {
                TailClass::certified(*sign, majorant.shifted(m))
            }
        };
        Ok(PowerSeries {
            base_point: self.base_point.clone(),
            coeffs: self.coeffs[m..].to_vec(),
            tail,
        })
    }

    /// Index of the last nonzero stored coefficient (0 for the zero series).
    pub fn degree(&self) -> usize {
        self.coeffs.iter().rposition(|c| !c.is_zero()).unwrap_or(0)
    }

    /// First index with a negative stored coefficient.
    pub fn first_negative(&self) -> Option<usize> {
        self.coeffs.iter().position(Signed::is_negative)
    }

    /// Horner evaluation of the stored partial sum only.
    pub fn eval_partial_sum(&self, x: &Enclosure, p: Precision) -> Enclosure {
        horner(&self.coeffs, &self.base_point, x, p)
    }

    /// Enclosure of the full infinite series at every point of `x`.
    pub fn eval_with_tail(&self, x: &Enclosure, p: Precision) -> Result<Enclosure> {
        let TailClass::Certified { sign, majorant } = &self.tail else {
            return Err(Error::TailBoundUnavailable);
        };
        let t = x - &Enclosure::point(self.base_point.clone());
        let partial = horner(&self.coeffs, &self.base_point, x, p);
        if majorant.is_zero() {
            return Ok(partial);
        }
        let radius = round_up(&t.mag(), p.working_bits());
        let bound = round_up(&majorant.tail_sum(self.order(), &radius)?, p.working_bits());
        let tail = if *sign == TailSign::Nonnegative && !t.lo().is_negative() {
            Enclosure::new(Rational::zero(), bound).expect("bound is nonnegative")
        } else {
            Enclosure::ball(&Rational::zero(), &bound)
        };
        Ok(partial + tail)
    }
}

/// Smallest majorant term (on top of `base`) covering `coeffs`, which sit at
/// indices `start..`.
fn cover_coefficients(coeffs: &[Rational], start: usize, base: &Majorant) -> Majorant {
    if coeffs.iter().all(Zero::is_zero) {
        return Majorant::zero();
    }
    let use_geometric = base.factorial_scale.is_zero() && !base.geometric_ratio.is_zero();
    if use_geometric {
        let rho = &base.geometric_ratio;
        let scale = coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| c.abs() / num_traits::pow(rho.clone(), start + i))
            .max()
            .unwrap_or_default();
        return Majorant::geometric(scale, rho.clone());
    }
    let rate = if base.factorial_rate.is_zero() {
        Rational::one()
    } else {
        base.factorial_rate.clone()
    };
    let scale = coeffs
        .iter()
        .enumerate()
        .map(|(i, c)| {
            let k = start + i;
            c.abs() * Rational::from_integer(factorial(k as u64)) / num_traits::pow(rate.clone(), k)
        })
        .max()
        .unwrap_or_default();
    Majorant::factorial(scale, rate)
}

/// Interval Horner scheme about `base`, narrowing each step.
pub(crate) fn horner_enc(
    coeffs: &[Enclosure],
    base: &Rational,
    x: &Enclosure,
    p: Precision,
) -> Enclosure {
    let t = x - &Enclosure::point(base.clone());
    let bits = p.working_bits();
    let mut acc = Enclosure::zero();
    for c in coeffs.iter().rev() {
        acc = (&(&acc * &t) + c).narrow(bits);
    }
    acc
}

fn horner(coeffs: &[Rational], base: &Rational, x: &Enclosure, p: Precision) -> Enclosure {
    let t = x - &Enclosure::point(base.clone());
    let bits = p.working_bits();
    let mut acc = Enclosure::zero();
    for c in coeffs.iter().rev() {
        acc = (&(&acc * &t) + &Enclosure::point(c.clone())).narrow(bits);
    }
    acc
}

pub fn series_arith(op: SeriesOp, a: &PowerSeries, b: &PowerSeries) -> Result<PowerSeries> {
    a.combine(b, op)
}

pub fn std_series(kind: StdKind, n: usize) -> PowerSeries {
    let unit_factorial = Majorant::factorial(Rational::one(), Rational::one());
    let coeffs: Vec<Rational> = (0..=n)
        .map(|k| {
            let inv_fact = Rational::new(BigInt::one(), factorial(k as u64));
            match kind {
                StdKind::Cos if k % 2 == 0 => {
                    if (k / 2) % 2 == 0 {
                        inv_fact
                    } else {
                        -inv_fact
                    }
                }
                StdKind::Sin if k % 2 == 1 => {
                    if (k / 2) % 2 == 0 {
                        inv_fact
                    } else {
                        -inv_fact
                    }
                }
                StdKind::Cosh if k % 2 == 0 => inv_fact,
                StdKind::Sinh if k % 2 == 1 => inv_fact,
                StdKind::Exp => inv_fact,
                StdKind::One if k == 0 => Rational::one(),
                StdKind::X if k == 1 => Rational::one(),
                _ => Rational::zero(),
            }
        })
        .collect();
    let tail = match kind {
        StdKind::Cos | StdKind::Sin => TailClass::certified(TailSign::Alternating, unit_factorial),
        StdKind::Cosh | StdKind::Sinh | StdKind::Exp => {
            TailClass::certified(TailSign::Nonnegative, unit_factorial)
        }
        StdKind::X if n == 0 => TailClass::certified(TailSign::Nonnegative, unit_factorial),
        StdKind::One | StdKind::X => TailClass::exact(),
    };
    PowerSeries {
        base_point: Rational::zero(),
        coeffs,
        tail,
    }
}

/// Rational upper bound for `2/pi` (0.636619...).
fn two_over_pi_upper() -> Rational {
    rat(31831, 50000)
}

/// Secant series `sum |E_2k| t^2k / (2k)!`, as the reciprocal of cos.
///
/// Tail: `|E_2k|/(2k)! = (4/pi) beta(2k+1) (2/pi)^2k` with Dirichlet
/// `beta(2k+1) <= 1`, so every coefficient is at most `(4/pi)(2/pi)^k`.
pub fn sec_series(n: usize) -> PowerSeries {
    let cos = std_series(StdKind::Cos, n);
    let sec = cos.reciprocal().expect("cos has constant term 1");
    let bound = two_over_pi_upper();
    sec.with_tail(TailClass::certified(
        TailSign::Nonnegative,
        Majorant::geometric(&bound * int(2), bound),
    ))
}

/// Absolute Euler numbers `|E_0|, |E_2|, ..., |E_2m|`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EulerTable {
    values: Vec<BigInt>,
}

impl EulerTable {
    pub fn values(&self) -> &[BigInt] {
        &self.values
    }

    /// `|E_2k|`
    pub fn get(&self, k: usize) -> Option<&BigInt> {
        self.values.get(k)
    }
}

/// `|E_2k| = (2k)! [t^2k] sec t`, for `k = 0..=m`. Fails if any product is
/// not an integer.
pub fn euler_numbers(m: usize) -> Result<EulerTable> {
    let sec = std_series(StdKind::Cos, 2 * m).reciprocal()?;
    let values = (0..=m)
        .map(|k| {
            let v = &sec.coeffs[2 * k] * Rational::from_integer(factorial(2 * k as u64));
            if v.is_integer() && v.is_positive() {
                Ok(v.to_integer())
            } else {
                Err(Error::InternalCrossCheckMismatch(format!(
                    "(2k)! sec coefficient at k = {k} is {v}, not a positive integer"
                )))
            }
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(EulerTable { values })
}

/// Tail-bounded evaluation of a standard expansion, raising the order until
/// the enclosure is well inside the precision target.
pub fn eval_std(kind: StdKind, x: &Enclosure, p: Precision) -> Result<Enclosure> {
    let target = p.target_width() / int(16);
    let mut order = 16;
    loop {
        let value = std_series(kind, order).eval_with_tail(x, p);
        match value {
            Ok(v) if v.width() <= &target * (v.mag() + Rational::one()) || order >= 2048 => {
                return Ok(v);
            }
            Err(e) if order >= 2048 => return Err(e),
            _ => order *= 2,
        }
    }
}

impl fmt::Display for PowerSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "{c}")?,
                1 => write!(f, "{c}*t")?,
                _ => write!(f, "{c}*t^{k}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O(t^{})", self.order() + 1)
    }
}
