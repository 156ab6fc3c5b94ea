use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use super::rational::{round_down, round_up, to_decimal_string, to_f64, Rational};
use crate::error::{Error, Result};

/// Closed interval `[lo, hi]` with exact rational endpoints that contains some
/// exact real value.
///
/// Arithmetic on enclosures is exact on the endpoints; the only place where
/// endpoints move outward is [`Enclosure::narrow`].
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Enclosure {
    lo: Rational,
    hi: Rational,
}

/// Strict sign of an enclosed value, when it can be decided.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sign {
    Negative,
    Zero,
    Positive,
    Indeterminate,
}

impl Enclosure {
    pub fn new(lo: Rational, hi: Rational) -> Result<Self> {
        if lo > hi {
            return Err(Error::InvalidArgument(format!(
                "enclosure endpoints out of order: {lo} > {hi}"
            )));
        }
        Ok(Self { lo, hi })
    }

    /// Builds `[min(a, b), max(a, b)]`.
    pub fn hull(a: Rational, b: Rational) -> Self {
        if a <= b {
            Self { lo: a, hi: b }
        } else {
            Self { lo: b, hi: a }
        }
    }

    pub fn point(value: Rational) -> Self {
        Self {
            lo: value.clone(),
            hi: value,
        }
    }

    pub fn zero() -> Self {
        Self::point(Rational::zero())
    }

    pub fn one() -> Self {
        Self::point(Rational::one())
    }

    /// `[center - radius, center + radius]`; `radius` must be nonnegative.
    pub fn ball(center: &Rational, radius: &Rational) -> Self {
        let r = radius.abs();
        Self {
            lo: center - &r,
            hi: center + &r,
        }
    }

    pub fn lo(&self) -> &Rational {
        &self.lo
    }

    pub fn hi(&self) -> &Rational {
        &self.hi
    }

    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn midpoint(&self) -> Rational {
        (&self.lo + &self.hi) / Rational::from_integer(2.into())
    }

    /// Largest absolute value of any member.
    pub fn mag(&self) -> Rational {
        let a = self.lo.abs();
        let b = self.hi.abs();
        if a > b {
            a
        } else {
            b
        }
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn contains(&self, value: &Rational) -> bool {
        &self.lo <= value && value <= &self.hi
    }

    pub fn contains_zero(&self) -> bool {
        !self.lo.is_positive() && !self.hi.is_negative()
    }

    pub fn is_subset_of(&self, other: &Enclosure) -> bool {
        other.lo <= self.lo && self.hi <= other.hi
    }

    pub fn intersects(&self, other: &Enclosure) -> bool {
        self.lo <= other.hi && other.lo <= self.hi
    }

    /// Common part of two enclosures of the same quantity.
    pub fn intersect(&self, other: &Enclosure) -> Option<Enclosure> {
        let lo = if self.lo > other.lo { &self.lo } else { &other.lo };
        let hi = if self.hi < other.hi { &self.hi } else { &other.hi };
        (lo <= hi).then(|| Enclosure {
            lo: lo.clone(),
            hi: hi.clone(),
        })
    }

    /// Smallest enclosure containing both.
    pub fn join(&self, other: &Enclosure) -> Enclosure {
        Enclosure {
            lo: self.lo.clone().min(other.lo.clone()),
            hi: self.hi.clone().max(other.hi.clone()),
        }
    }

    pub fn sign(&self) -> Sign {
        if self.lo.is_positive() {
            Sign::Positive
        } else if self.hi.is_negative() {
            Sign::Negative
        } else if self.lo.is_zero() && self.hi.is_zero() {
            Sign::Zero
        } else {
            Sign::Indeterminate
        }
    }

    /// Every member of `self` is `<=` every member of `other`.
    pub fn certainly_le(&self, other: &Enclosure) -> bool {
        self.hi <= other.lo
    }

    /// Every member of `self` is `<` every member of `other`.
    pub fn certainly_lt(&self, other: &Enclosure) -> bool {
        self.hi < other.lo
    }

    /// Some member of `self` exceeds every member of `other`'s range, i.e.
    /// `self <= other` is refuted.
    pub fn certainly_gt(&self, other: &Enclosure) -> bool {
        self.lo > other.hi
    }

    pub fn abs(&self) -> Enclosure {
        if !self.lo.is_negative() {
            self.clone()
        } else if !self.hi.is_positive() {
            -self
        } else {
            Enclosure {
                lo: Rational::zero(),
                hi: self.mag(),
            }
        }
    }

    pub fn recip(&self) -> Result<Enclosure> {
        if self.contains_zero() {
            return Err(Error::DivisionByIntervalContainingZero);
        }
        Ok(Enclosure {
            lo: self.hi.recip(),
            hi: self.lo.recip(),
        })
    }

    pub fn div(&self, other: &Enclosure) -> Result<Enclosure> {
        Ok(self * &other.recip()?)
    }

    pub fn scale(&self, factor: &Rational) -> Enclosure {
        Enclosure::hull(&self.lo * factor, &self.hi * factor)
    }

    /// Integer power; negative exponents go through [`Enclosure::recip`].
    pub fn pow_int(&self, exp: i32) -> Result<Enclosure> {
        if exp < 0 {
            return self.pow_int(-exp)?.recip();
        }
        let e = exp as usize;
        if e == 0 {
            return Ok(Enclosure::one());
        }
        let lo_p = num_traits::pow(self.lo.clone(), e);
        let hi_p = num_traits::pow(self.hi.clone(), e);
        if e % 2 == 1 || !self.lo.is_negative() {
            // monotone on the whole interval
            return Ok(Enclosure::hull(lo_p, hi_p));
        }
        if !self.hi.is_positive() {
            return Ok(Enclosure::hull(lo_p, hi_p));
        }
        Ok(Enclosure {
            lo: Rational::zero(),
            hi: lo_p.max(hi_p),
        })
    }

    pub fn square(&self) -> Enclosure {
        self.pow_int(2).expect("nonnegative exponent")
    }

    /// Rounds both endpoints outward to about `bits` significant bits when
    /// their denominators exceed `bits` bits. The result contains `self`.
    pub fn narrow(&self, bits: u64) -> Enclosure {
        Enclosure {
            lo: round_down(&self.lo, bits),
            hi: round_up(&self.hi, bits),
        }
    }

    /// Widens outward by `radius` on both sides.
    pub fn inflate(&self, radius: &Rational) -> Enclosure {
        let r = radius.abs();
        Enclosure {
            lo: &self.lo - &r,
            hi: &self.hi + &r,
        }
    }

    pub fn to_f64_mid(&self) -> f64 {
        to_f64(&self.midpoint())
    }

    pub fn to_decimal_pair(&self, digits: usize) -> (String, String) {
        (
            to_decimal_string(&self.lo, digits),
            to_decimal_string(&self.hi, digits),
        )
    }

    /// Orders by midpoint; only meaningful as a heuristic.
    pub fn cmp_mid(&self, other: &Enclosure) -> Ordering {
        self.midpoint().cmp(&other.midpoint())
    }
}

impl From<Rational> for Enclosure {
    fn from(value: Rational) -> Self {
        Enclosure::point(value)
    }
}

impl fmt::Display for Enclosure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (lo, hi) = self.to_decimal_pair(f.precision().unwrap_or(12));
        write!(f, "[{lo}, {hi}]")
    }
}

impl Neg for &Enclosure {
    type Output = Enclosure;
    fn neg(self) -> Enclosure {
        Enclosure {
            lo: -&self.hi,
            hi: -&self.lo,
        }
    }
}

impl Neg for Enclosure {
    type Output = Enclosure;
    fn neg(self) -> Enclosure {
        -&self
    }
}

impl Add for &Enclosure {
    type Output = Enclosure;
    fn add(self, rhs: &Enclosure) -> Enclosure {
        Enclosure {
            lo: &self.lo + &rhs.lo,
            hi: &self.hi + &rhs.hi,
        }
    }
}

impl Sub for &Enclosure {
    type Output = Enclosure;
    fn sub(self, rhs: &Enclosure) -> Enclosure {
        Enclosure {
            lo: &self.lo - &rhs.hi,
            hi: &self.hi - &rhs.lo,
        }
    }
}

impl Mul for &Enclosure {
    type Output = Enclosure;
    fn mul(self, rhs: &Enclosure) -> Enclosure {
        if self.is_point() {
            return rhs.scale(&self.lo);
        }
        if rhs.is_point() {
            return self.scale(&rhs.lo);
        }
        let products = [
            &self.lo * &rhs.lo,
            &self.lo * &rhs.hi,
            &self.hi * &rhs.lo,
            &self.hi * &rhs.hi,
        ];
        let lo = products.iter().min().cloned().unwrap_or_default();
        let hi = products.iter().max().cloned().unwrap_or_default();
        Enclosure { lo, hi }
    }
}

macro_rules! forward_owned {
    ($trait:ident, $method:ident) => {
        impl $trait for Enclosure {
            type Output = Enclosure;
            fn $method(self, rhs: Enclosure) -> Enclosure {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&Enclosure> for Enclosure {
            type Output = Enclosure;
            fn $method(self, rhs: &Enclosure) -> Enclosure {
                (&self).$method(rhs)
            }
        }
        impl $trait<Enclosure> for &Enclosure {
            type Output = Enclosure;
            fn $method(self, rhs: Enclosure) -> Enclosure {
                self.$method(&rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

/// Arithmetic operator selector for [`enc_arith`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EncOp {
    Add,
    Sub,
    Mul,
    Div,
    Neg,
    Abs,
    PowInt,
}

/// Second operand for [`enc_arith`].
#[derive(Clone, Debug)]
pub enum Operand {
    Enclosure(Enclosure),
    Integer(i32),
}

/// Operator-dispatched enclosure arithmetic. Unary ops ignore `b`; `PowInt`
/// requires an integer operand.
pub fn enc_arith(op: EncOp, a: &Enclosure, b: &Operand) -> Result<Enclosure> {
    let other = || match b {
        Operand::Enclosure(e) => Ok(e.clone()),
        Operand::Integer(n) => Ok(Enclosure::point(Rational::from_integer((*n).into()))),
    };
    match op {
        EncOp::Add => Ok(a + &other()?),
        EncOp::Sub => Ok(a - &other()?),
        EncOp::Mul => Ok(a * &other()?),
        EncOp::Div => a.div(&other()?),
        EncOp::Neg => Ok(-a),
        EncOp::Abs => Ok(a.abs()),
        EncOp::PowInt => match b {
            Operand::Integer(n) => a.pow_int(*n),
            Operand::Enclosure(_) => Err(Error::InvalidArgument(
                "pow_int needs an integer exponent".into(),
            )),
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::rational::{int, rat};
    use proptest::prelude::*;

    fn enc(lo: i64, hi: i64) -> Enclosure {
        Enclosure::new(int(lo), int(hi)).unwrap()
    }

    #[test]
    fn add_endpoints() {
        let r = enc_arith(EncOp::Add, &enc(1, 2), &Operand::Enclosure(enc(3, 4))).unwrap();
        assert_eq!(r, enc(4, 6));
    }

    #[test]
    fn mul_sign_cases() {
        let r = enc_arith(EncOp::Mul, &enc(-1, 1), &Operand::Enclosure(enc(-1, 1))).unwrap();
        assert_eq!(r, enc(-1, 1));
        assert_eq!(&enc(-3, -2) * &enc(4, 5), enc(-15, -8));
    }

    #[test]
    fn pow_of_half() {
        let half = Enclosure::point(rat(1, 2));
        let r = enc_arith(EncOp::PowInt, &half, &Operand::Integer(2)).unwrap();
        assert_eq!(r, Enclosure::point(rat(1, 4)));
        assert_eq!(enc(-2, 3).pow_int(2).unwrap(), enc(0, 9));
        assert_eq!(enc(-3, -2).pow_int(2).unwrap(), enc(4, 9));
        assert_eq!(enc(-2, 3).pow_int(3).unwrap(), enc(-8, 27));
        assert_eq!(enc(2, 4).pow_int(-1).unwrap(), Enclosure::new(rat(1, 4), rat(1, 2)).unwrap());
    }

    #[test]
    fn division_by_zero_interval() {
        assert_eq!(
            enc(1, 2).div(&enc(-1, 1)),
            Err(Error::DivisionByIntervalContainingZero)
        );
        assert_eq!(
            enc(1, 2).div(&enc(0, 0)),
            Err(Error::DivisionByIntervalContainingZero)
        );
        assert_eq!(
            enc(2, 4).div(&enc(2, 2)).unwrap(),
            enc(1, 2)
        );
    }

    #[test]
    fn abs_and_neg() {
        assert_eq!(enc(-3, 2).abs(), enc(0, 3));
        assert_eq!(enc(-3, -1).abs(), enc(1, 3));
        assert_eq!(-enc(1, 2), enc(-2, -1));
        assert!(enc_arith(EncOp::PowInt, &enc(1, 2), &Operand::Enclosure(enc(1, 1))).is_err());
    }

    #[test]
    fn rejects_reversed_endpoints() {
        assert!(Enclosure::new(int(2), int(1)).is_err());
    }

    #[test]
    fn narrowing_contains_original() {
        let e = Enclosure::new(rat(1, 3), rat(2, 7)).unwrap_err();
        assert!(matches!(e, Error::InvalidArgument(_)));
        let e = Enclosure::new(rat(2, 7), rat(1, 3)).unwrap();
        let n = e.narrow(16);
        assert!(e.is_subset_of(&n));
        assert!(n.width() < e.width() + rat(1, 1 << 14));
    }

    fn small_rat() -> impl Strategy<Value = Rational> {
        (-200i64..200, 1i64..50).prop_map(|(n, d)| rat(n, d))
    }

    fn small_enc() -> impl Strategy<Value = Enclosure> {
        (small_rat(), small_rat()).prop_map(|(a, b)| Enclosure::hull(a, b))
    }

    proptest! {
        #[test]
        fn point_ops_are_exact(a in small_rat(), b in small_rat()) {
            let (ea, eb) = (Enclosure::point(a.clone()), Enclosure::point(b.clone()));
            prop_assert_eq!(&ea + &eb, Enclosure::point(&a + &b));
            prop_assert_eq!(&ea - &eb, Enclosure::point(&a - &b));
            prop_assert_eq!(&ea * &eb, Enclosure::point(&a * &b));
            if !b.is_zero() {
                prop_assert_eq!(ea.div(&eb).unwrap(), Enclosure::point(&a / &b));
            }
        }

        #[test]
        fn containment_monotone(a in small_enc(), b in small_enc(), wa in 0i64..5, wb in 0i64..5) {
            let a2 = a.inflate(&int(wa));
            let b2 = b.inflate(&int(wb));
            prop_assert!((&a + &b).is_subset_of(&(&a2 + &b2)));
            prop_assert!((&a - &b).is_subset_of(&(&a2 - &b2)));
            prop_assert!((&a * &b).is_subset_of(&(&a2 * &b2)));
            prop_assert!(a.pow_int(3).unwrap().is_subset_of(&a2.pow_int(3).unwrap()));
            prop_assert!(a.pow_int(2).unwrap().is_subset_of(&a2.pow_int(2).unwrap()));
            if !b2.contains_zero() {
                prop_assert!(a.div(&b).unwrap().is_subset_of(&a2.div(&b2).unwrap()));
            }
        }

        #[test]
        fn products_contain_sampled_members(a in small_enc(), b in small_enc(), s in 0i64..=8, t in 0i64..=8) {
            // x = lo + s/8 * width lies in a, similarly y in b
            let x = a.lo() + a.width() * rat(s, 8);
            let y = b.lo() + b.width() * rat(t, 8);
            prop_assert!((&a * &b).contains(&(&x * &y)));
            prop_assert!((&a - &b).contains(&(&x - &y)));
            prop_assert!(a.abs().contains(&x.abs()));
            prop_assert!(a.pow_int(2).unwrap().contains(&(&x * &x)));
        }
    }
}
