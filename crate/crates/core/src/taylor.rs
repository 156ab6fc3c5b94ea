//! First and second Taylor approximations about the left end `a` of an
//! interval `(a, b)`, their remainders, and the double-sided ladder
//!
//! ```text
//! T_0 <= T_1 <= ... <= f <= ... <= TT_1 <= TT_0   on (a, b)
//! ```
//!
//! which holds whenever every Maclaurin coefficient of `f` is nonnegative.
//!
//! `TT_n` (the second approximation, [`SecondTaylorPoly`]) is `T_{n-1}` plus a
//! degree-`n` term whose coefficient makes the polynomial interpolate `f` at
//! `b`; `TT_0` is the constant `f(b-)`.

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::numeric::{Enclosure, Precision, Rational, Sign};
use crate::series::PowerSeries;

/// Anything that can be evaluated on an enclosure.
pub trait Approximation {
    fn base_point(&self) -> &Rational;
    fn degree(&self) -> usize;
    fn eval(&self, x: &Enclosure, p: Precision) -> Enclosure;
}

/// `T_n`: the degree-`n` truncation of the series.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FirstTaylorPoly {
    base_point: Rational,
    coeffs: Vec<Rational>,
}

impl FirstTaylorPoly {
    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }
}

impl Approximation for FirstTaylorPoly {
    fn base_point(&self) -> &Rational {
        &self.base_point
    }

    fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    fn eval(&self, x: &Enclosure, p: Precision) -> Enclosure {
        let coeffs: Vec<Enclosure> = self.coeffs.iter().cloned().map(Enclosure::point).collect();
        crate::series::horner_enc(&coeffs, &self.base_point, x, p)
    }
}

/// `TT_n`: exact `T_{n-1}` coefficients plus an enclosure-valued top
/// coefficient `R_n(b-) / (b - a)^n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SecondTaylorPoly {
    base_point: Rational,
    endpoint: Enclosure,
    low_coeffs: Vec<Rational>,
    top_coeff: Enclosure,
}

impl SecondTaylorPoly {
    pub fn endpoint(&self) -> &Enclosure {
        &self.endpoint
    }

    pub fn low_coeffs(&self) -> &[Rational] {
        &self.low_coeffs
    }

    pub fn top_coeff(&self) -> &Enclosure {
        &self.top_coeff
    }
}

impl Approximation for SecondTaylorPoly {
    fn base_point(&self) -> &Rational {
        &self.base_point
    }

    fn degree(&self) -> usize {
        self.low_coeffs.len()
    }

    fn eval(&self, x: &Enclosure, p: Precision) -> Enclosure {
        let mut coeffs: Vec<Enclosure> =
            self.low_coeffs.iter().cloned().map(Enclosure::point).collect();
        coeffs.push(self.top_coeff.clone());
        crate::series::horner_enc(&coeffs, &self.base_point, x, p)
    }
}

/// Horner evaluation of either approximation.
pub fn eval_poly<A: Approximation + ?Sized>(q: &A, x: &Enclosure, p: Precision) -> Enclosure {
    q.eval(x, p)
}

pub fn first_taylor(f: &PowerSeries, n: usize) -> Result<FirstTaylorPoly> {
    let coeffs = (0..=n)
        .map(|k| {
            f.coeff(k).ok_or(Error::OrderExceedsTruncation {
                requested: n,
                available: f.order(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(FirstTaylorPoly {
        base_point: f.base_point().clone(),
        coeffs,
    })
}

/// `sum_{j >= 0} c_{n+j} t^j`, i.e. `(f - T_{n-1}) / t^n`, with its tail
/// certificate carried along.
pub(crate) fn shifted_series(f: &PowerSeries, n: usize) -> Result<PowerSeries> {
    if n == 0 {
        return Ok(f.clone());
    }
    if n > f.order() {
        // only reachable for exact polynomials, whose shifted series is zero
        if f.is_exact_polynomial() {
            return PowerSeries::polynomial(vec![Rational::zero()])
                .map(|s| s.rebase(f.base_point().clone()));
        }
        return Err(Error::OrderExceedsTruncation {
            requested: n,
            available: f.order(),
        });
    }
    f.zero_prefix(n).divide_by_power(n)
}

fn offset(x: &Enclosure, a: &Rational) -> Enclosure {
    x - &Enclosure::point(a.clone())
}

pub fn second_taylor(
    f: &PowerSeries,
    n: usize,
    b: &Enclosure,
    p: Precision,
) -> Result<SecondTaylorPoly> {
    let a = f.base_point();
    if b.lo() <= a {
        return Err(Error::DomainViolation(format!(
            "endpoint {b} must lie strictly right of the base point {a}"
        )));
    }
    let bits = p.working_bits();
    let (low_coeffs, top_coeff) = if n == 0 {
        (Vec::new(), f.eval_with_tail(b, p)?)
    } else {
        let low = first_taylor(f, n - 1)?;
        let t = offset(b, a);
        // (f(b) - T_{n-1}(b)) / (b - a)^n two ways: plain enclosure
        // arithmetic, and the shifted series sum_j c_{n+j} (b - a)^j
        let direct = (f.eval_with_tail(b, p)? - low.eval(b, p)).div(&t.pow_int(n as i32)?)?;
        let shifted = shifted_series(f, n)?.eval_with_tail(b, p)?;
        let top = direct.intersect(&shifted).ok_or_else(|| {
            Error::InternalCrossCheckMismatch(format!(
                "top coefficient of TT_{n}: {direct} and {shifted} are disjoint"
            ))
        })?;
        (low.coeffs, top)
    };
    Ok(SecondTaylorPoly {
        base_point: a.clone(),
        endpoint: b.clone(),
        low_coeffs,
        top_coeff: top_coeff.narrow(bits),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RemainderKind {
    First,
    Second,
}

/// `R_n(x) = f(x) - T_{n-1}(x)` or `RR_n(x) = f(x) - TT_{n-1}(x)`, `n >= 1`.
pub fn remainder_eval(
    f: &PowerSeries,
    kind: RemainderKind,
    n: usize,
    b: Option<&Enclosure>,
    x: &Enclosure,
    p: Precision,
) -> Result<Enclosure> {
    if n == 0 {
        return Err(Error::InvalidArgument(
            "remainders are indexed from n = 1".into(),
        ));
    }
    let t = offset(x, f.base_point());
    let bits = p.working_bits();
    match kind {
        RemainderKind::First => {
            let tail = shifted_series(f, n)?.eval_with_tail(x, p)?;
            Ok((&t.pow_int(n as i32)? * &tail).narrow(bits))
        }
        RemainderKind::Second => {
            let b = b.ok_or_else(|| {
                Error::InvalidArgument("second remainder needs an endpoint".into())
            })?;
            let m = n - 1;
            let upper = second_taylor(f, m, b, p)?;
            let inner = shifted_series(f, m)?.eval_with_tail(x, p)? - upper.top_coeff();
            let via_shift = (&t.pow_int(m as i32)? * &inner).narrow(bits);
            let direct = f.eval_with_tail(x, p)? - upper.eval(x, p);
            Ok(via_shift.intersect(&direct).unwrap_or(via_shift))
        }
    }
}

/// Outcome of the coefficient-sign hypothesis of the ladder theorem.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Theorem2Verdict {
    /// Stored coefficients are `>= 0` and the tail is certified nonnegative.
    Certified,
    /// Stored coefficients pass, but nothing certifies the tail.
    PrefixOnlyNonnegative,
    /// First negative coefficient.
    Fails(usize),
}

pub fn check_theorem2_hypothesis(f: &PowerSeries) -> Theorem2Verdict {
    if let Some(k) = f.first_negative() {
        return Theorem2Verdict::Fails(k);
    }
    if f.tail().is_nonnegative() {
        Theorem2Verdict::Certified
    } else {
        Theorem2Verdict::PrefixOnlyNonnegative
    }
}

/// Result of one `left <= right` comparison between enclosures.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Comparison {
    Holds,
    Violated,
    Unresolved,
}

impl Comparison {
    pub fn of(left: &Enclosure, right: &Enclosure) -> Self {
        if left.certainly_le(right) {
            Comparison::Holds
        } else if left.certainly_gt(right) {
            Comparison::Violated
        } else {
            Comparison::Unresolved
        }
    }
}

/// One rung comparison of the chain at a sample point.
#[derive(Clone, Debug)]
pub struct ChainLink {
    pub left: String,
    pub right: String,
    pub outcome: Comparison,
}

/// All chain comparisons at one sample.
#[derive(Clone, Debug)]
pub struct ChainCheck {
    pub x: Enclosure,
    pub lower: Vec<Enclosure>,
    pub value: Enclosure,
    pub upper: Vec<Enclosure>,
    pub links: Vec<ChainLink>,
}

impl ChainCheck {
    pub fn worst(&self) -> Comparison {
        if self.links.iter().any(|l| l.outcome == Comparison::Violated) {
            Comparison::Violated
        } else if self.links.iter().any(|l| l.outcome == Comparison::Unresolved) {
            Comparison::Unresolved
        } else {
            Comparison::Holds
        }
    }
}

#[derive(Clone, Debug)]
pub struct Ladder {
    orders: Vec<usize>,
    lower: Vec<FirstTaylorPoly>,
    upper: Vec<SecondTaylorPoly>,
    source: PowerSeries,
    endpoint: Enclosure,
    hypothesis: Theorem2Verdict,
}

impl Ladder {
    pub fn orders(&self) -> &[usize] {
        &self.orders
    }

    pub fn lower(&self) -> &[FirstTaylorPoly] {
        &self.lower
    }

    pub fn upper(&self) -> &[SecondTaylorPoly] {
        &self.upper
    }

    pub fn source(&self) -> &PowerSeries {
        &self.source
    }

    pub fn endpoint(&self) -> &Enclosure {
        &self.endpoint
    }

    pub fn hypothesis(&self) -> Theorem2Verdict {
        self.hypothesis
    }

    /// Evaluates every rung and `f` at `x` and compares neighbours:
    /// `T_{n_0} <= ... <= T_{n_k} <= f <= TT_{n_k} <= ... <= TT_{n_0}`.
    pub fn chain_at(&self, x: &Enclosure, p: Precision) -> Result<ChainCheck> {
        let lower: Vec<Enclosure> = self.lower.iter().map(|q| q.eval(x, p)).collect();
        let upper: Vec<Enclosure> = self.upper.iter().map(|q| q.eval(x, p)).collect();
        let value = self.source.eval_with_tail(x, p)?;
        let mut links = Vec::new();
        let name_t = |i: usize| format!("T_{}", self.orders[i]);
        let name_tt = |i: usize| format!("TT_{}", self.orders[i]);
        for i in 1..lower.len() {
            links.push(ChainLink {
                left: name_t(i - 1),
                right: name_t(i),
                outcome: Comparison::of(&lower[i - 1], &lower[i]),
            });
        }
        let last = lower.len() - 1;
        links.push(ChainLink {
            left: name_t(last),
            right: "f".into(),
            outcome: Comparison::of(&lower[last], &value),
        });
        links.push(ChainLink {
            left: "f".into(),
            right: name_tt(last),
            outcome: Comparison::of(&value, &upper[last]),
        });
        for i in (1..upper.len()).rev() {
            links.push(ChainLink {
                left: name_tt(i),
                right: name_tt(i - 1),
                outcome: Comparison::of(&upper[i], &upper[i - 1]),
            });
        }
        Ok(ChainCheck {
            x: x.clone(),
            lower,
            value,
            upper,
            links,
        })
    }
}

pub fn build_ladder(
    f: &PowerSeries,
    b: &Enclosure,
    orders: &[usize],
    p: Precision,
) -> Result<Ladder> {
    let hypothesis = check_theorem2_hypothesis(f);
    if hypothesis != Theorem2Verdict::Certified {
        return Err(Error::HypothesisNotCertified(format!("{hypothesis:?}")));
    }
    if orders.is_empty() || orders.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidArgument(
            "ladder orders must be nonempty and strictly ascending".into(),
        ));
    }
    let lower = orders
        .iter()
        .map(|&n| first_taylor(f, n))
        .collect::<Result<Vec<_>>>()?;
    let upper = orders
        .iter()
        .map(|&n| second_taylor(f, n, b, p))
        .collect::<Result<Vec<_>>>()?;
    Ok(Ladder {
        orders: orders.to_vec(),
        lower,
        upper,
        source: f.clone(),
        endpoint: b.clone(),
        hypothesis,
    })
}

/// Sign agreement at one sample for the sign law
/// `sgn(TT_n - TT_{n+1}) = sgn(f(b-) - T_n(b))`.
#[derive(Clone, Debug)]
pub struct Prop1Sample {
    pub x: Enclosure,
    pub difference: Enclosure,
    pub sign: Sign,
    /// `None` when either side is indeterminate.
    pub agrees: Option<bool>,
}

#[derive(Clone, Debug)]
pub struct Prop1Report {
    pub endpoint_gap: Enclosure,
    pub endpoint_sign: Sign,
    pub samples: Vec<Prop1Sample>,
}

impl Prop1Report {
    /// No resolved sample disagrees.
    pub fn consistent(&self) -> bool {
        self.samples.iter().all(|s| s.agrees != Some(false))
    }

    pub fn indeterminate_count(&self) -> usize {
        self.samples.iter().filter(|s| s.agrees.is_none()).count()
    }
}

pub fn prop1_sign_check(
    f: &PowerSeries,
    n: usize,
    b: &Enclosure,
    samples: &[Enclosure],
    p: Precision,
) -> Result<Prop1Report> {
    let a = f.base_point();
    let tn = first_taylor(f, n)?;
    let direct = f.eval_with_tail(b, p)? - tn.eval(b, p);
    let t_b = offset(b, a);
    let via_shift = &t_b.pow_int(n as i32 + 1)? * &shifted_series(f, n + 1)?.eval_with_tail(b, p)?;
    let endpoint_gap = direct.intersect(&via_shift).unwrap_or(direct);
    let endpoint_sign = endpoint_gap.sign();

    let upper_n = second_taylor(f, n, b, p)?;
    let upper_next = second_taylor(f, n + 1, b, p)?;
    let samples = samples
        .iter()
        .map(|x| {
            if x.lo() <= a || x.hi() >= b.lo() {
                return Err(Error::DomainViolation(format!(
                    "sample {x} is not inside (a, b)"
                )));
            }
            let difference = upper_n.eval(x, p) - upper_next.eval(x, p);
            let sign = difference.sign();
            let agrees = match (sign, endpoint_sign) {
                (Sign::Indeterminate, _) | (_, Sign::Indeterminate) => None,
                (s, e) => Some(s == e),
            };
            Ok(Prop1Sample {
                x: x.clone(),
                difference,
                sign,
                agrees,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Prop1Report {
        endpoint_gap,
        endpoint_sign,
        samples,
    })
}
