//! Rigorous enclosures of pi, the exponential and square roots.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::enclosure::Enclosure;
use super::rational::{int, pow2, Rational};
use crate::error::{Error, Result};

/// Target output width `2^-budget` for transcendental enclosures.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Precision {
    budget: u32,
}

impl Precision {
    pub const MIN_BUDGET: u32 = 8;
    const GUARD_BITS: u64 = 48;

    pub fn new(budget: u32) -> Result<Self> {
        if budget < Self::MIN_BUDGET {
            return Err(Error::InvalidArgument(format!(
                "precision budget {budget} below minimum {}",
                Self::MIN_BUDGET
            )));
        }
        Ok(Self { budget })
    }

    pub fn budget(self) -> u32 {
        self.budget
    }

    /// Significant bits carried by intermediate results.
    pub fn working_bits(self) -> u64 {
        self.budget as u64 + Self::GUARD_BITS
    }

    /// Requested output width, `2^-budget`.
    pub fn target_width(self) -> Rational {
        pow2(-(self.budget as i64))
    }

    pub fn doubled(self) -> Self {
        Self {
            budget: self.budget * 2,
        }
    }
}

impl Default for Precision {
    fn default() -> Self {
        Self { budget: 64 }
    }
}

/// Partial sum of arctan(1/m) through `terms` terms, and the first omitted
/// term (which bounds the alternating tail).
fn arctan_inv(m: u64, terms: usize) -> (Rational, Rational) {
    let m = BigInt::from(m);
    let m2 = &m * &m;
    let mut power = m.clone();
    let mut sum = Rational::zero();
    for k in 0..terms {
        let term = Rational::new(BigInt::one(), BigInt::from(2 * k + 1) * &power);
        if k % 2 == 0 {
            sum += term;
        } else {
            sum -= term;
        }
        power *= &m2;
    }
    let omitted = Rational::new(BigInt::one(), BigInt::from(2 * terms + 1) * power);
    (sum, omitted)
}

/// Terms needed so that `scale / ((2K+1) m^(2K+1)) <= 2^-bits`.
fn arctan_terms(m: u64, bits: u64) -> usize {
    let per_term = 2.0 * (m as f64).log2();
    ((bits as f64 + 8.0) / per_term).ceil() as usize + 1
}

/// Enclosure of pi from Machin's formula `pi = 16 atan(1/5) - 4 atan(1/239)`;
/// each arctan tail is bounded by its first omitted term.
pub fn enc_pi(p: Precision) -> Enclosure {
    let bits = p.working_bits();
    let (s5, t5) = arctan_inv(5, arctan_terms(5, bits));
    let (s239, t239) = arctan_inv(239, arctan_terms(239, bits));
    let a = Enclosure::ball(&s5, &t5).scale(&int(16));
    let b = Enclosure::ball(&s239, &t239).scale(&int(4));
    (&a - &b).narrow(bits)
}

/// `e^r` for a single rational `r`.
fn exp_point(r: &Rational, bits: u64) -> Enclosure {
    if r.is_negative() {
        return exp_point(&-r, bits)
            .recip()
            .expect("e^r is positive")
            .narrow(bits);
    }
    if r.is_zero() {
        return Enclosure::one();
    }
    // halve until r <= 1, then square back
    let mut halvings = 0u32;
    let mut reduced = r.clone();
    while reduced > Rational::one() {
        reduced /= int(2);
        halvings += 1;
    }
    let local_bits = bits + 2 * halvings as u64 + 8;
    let tolerance = pow2(-(local_bits as i64));
    let mut sum = Rational::zero();
    let mut term = Rational::one();
    let mut k = 0i64;
    // with reduced <= 1 the term ratio reduced/(k+1) is <= 1/2 for k >= 1,
    // so the tail after the current term is at most twice the next one
    loop {
        sum += &term;
        k += 1;
        term = term * &reduced / int(k);
        if k >= 2 && term <= tolerance {
            break;
        }
    }
    let tail = term * int(2);
    let mut value = Enclosure::new(sum.clone(), sum + tail)
        .expect("tail is nonnegative")
        .narrow(local_bits);
    for _ in 0..halvings {
        value = value.square().narrow(local_bits);
    }
    value.narrow(bits)
}

/// Enclosure of `{e^y : y in x}`.
pub fn enc_exp(x: &Enclosure, p: Precision) -> Enclosure {
    let bits = p.working_bits();
    if x.is_point() {
        return exp_point(x.lo(), bits);
    }
    let lo = exp_point(x.lo(), bits);
    let hi = exp_point(x.hi(), bits);
    Enclosure::new(lo.lo().clone(), hi.hi().clone()).expect("exp is increasing")
}

fn exact_sqrt(y: &Rational) -> Option<Rational> {
    let n = y.numer().sqrt();
    let d = y.denom().sqrt();
    (&n * &n == *y.numer() && &d * &d == *y.denom()).then(|| Rational::new(n, d))
}

fn sqrt_point(y: &Rational, bits: u64) -> Enclosure {
    if let Some(root) = exact_sqrt(y) {
        return Enclosure::point(root);
    }
    // extra resolution for small radicands keeps the width relative
    let magnitude = y.numer().bits() as i64 - y.denom().bits() as i64;
    let k = bits as i64 + (-magnitude / 2).max(0) + 2;
    let scale = pow2(2 * k);
    let z = y * scale;
    let lo = z.floor().to_integer().sqrt();
    let hi = z.ceil().to_integer().sqrt() + BigInt::one();
    let unit = pow2(-k);
    Enclosure::new(Rational::from_integer(lo) * &unit, Rational::from_integer(hi) * unit)
        .expect("isqrt(floor z) <= isqrt(ceil z) + 1")
}

/// Enclosure of `{sqrt(y) : y in x}`.
pub fn enc_sqrt(x: &Enclosure, p: Precision) -> Result<Enclosure> {
    if x.lo().is_negative() {
        return Err(Error::NegativeOperand);
    }
    let bits = p.working_bits();
    if x.is_point() {
        return Ok(sqrt_point(x.lo(), bits));
    }
    let lo = sqrt_point(x.lo(), bits);
    let hi = sqrt_point(x.hi(), bits);
    Ok(Enclosure::new(lo.lo().clone(), hi.hi().clone()).expect("sqrt is increasing"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::rational::{decimal_prefix, parse_decimal, rat};

    fn matches_prefix(e: &Enclosure, digits: &str) -> bool {
        let (lo, hi) = decimal_prefix(digits).unwrap();
        e.intersects(&Enclosure::new(lo, hi).unwrap())
    }
    use proptest::prelude::*;

    // 50 digits of pi, from an independent high-precision computation
    const PI_50: &str = "3.14159265358979323846264338327950288419716939937510";
    // e^(pi/4), 40 digits from a high-precision reference
    const EXP_PI_4: &str = "2.193280050738015456559769659278738223462";

    fn pi_bracket() -> Enclosure {
        let pi = parse_decimal(PI_50).unwrap();
        Enclosure::ball(&pi, &parse_decimal("1e-50").unwrap())
    }

    #[test]
    fn precision_floor() {
        assert!(Precision::new(7).is_err());
        assert_eq!(Precision::new(8).unwrap().budget(), 8);
    }

    #[test]
    fn pi_at_low_precision() {
        let p16 = enc_pi(Precision::new(16).unwrap());
        let window = Enclosure::new(parse_decimal("3.14159").unwrap(), parse_decimal("3.14160").unwrap()).unwrap();
        assert!(p16.is_subset_of(&window), "{p16:.20}");
        let p8 = enc_pi(Precision::new(8).unwrap());
        assert!(matches_prefix(&p8, "3.14159265"));
    }

    #[test]
    fn pi_contains_reference_and_shrinks() {
        let reference = pi_bracket();
        for budget in [8, 16, 32, 64, 128, 160] {
            let p = Precision::new(budget).unwrap();
            let pi = enc_pi(p);
            assert!(pi.intersects(&reference), "budget {budget}");
            assert!(pi.width() <= p.target_width());
        }
        let w16 = enc_pi(Precision::new(16).unwrap()).width();
        let w32 = enc_pi(Precision::new(32).unwrap()).width();
        assert!(w32 < w16);
    }

    #[test]
    fn exp_of_zero_is_one() {
        assert_eq!(enc_exp(&Enclosure::zero(), Precision::default()), Enclosure::one());
    }

    #[test]
    fn exp_of_quarter_pi() {
        let p = Precision::new(20).unwrap();
        let quarter_pi = enc_pi(p).scale(&rat(1, 4));
        let e = enc_exp(&quarter_pi, p);
        assert!(e.contains(&parse_decimal(EXP_PI_4).unwrap()));
    }

    #[test]
    fn exp_matches_brute_force_series() {
        // oracle: 60-term partial sum of e^(3/7), exact rationals, tail < 1e-80
        let x = rat(3, 7);
        let mut sum = Rational::zero();
        let mut term = Rational::one();
        for k in 1..=60 {
            sum += &term;
            term = term * &x / int(k);
        }
        let e = enc_exp(&Enclosure::point(x), Precision::new(100).unwrap());
        assert!(e.inflate(&parse_decimal("1e-80").unwrap()).contains(&sum));
        assert!(e.width() < pow2(-100));
        let big = enc_exp(&Enclosure::point(int(5)), Precision::default());
        assert!(matches_prefix(&big, "148.4131591025766034211155800405522"));
    }

    #[test]
    fn sqrt_cases() {
        let p = Precision::new(20).unwrap();
        assert_eq!(enc_sqrt(&Enclosure::point(int(4)), p).unwrap(), Enclosure::point(int(2)));
        assert_eq!(enc_sqrt(&Enclosure::zero(), p).unwrap(), Enclosure::zero());
        assert_eq!(enc_sqrt(&Enclosure::point(rat(9, 16)), p).unwrap(), Enclosure::point(rat(3, 4)));
        let r2 = enc_sqrt(&Enclosure::point(int(2)), p).unwrap();
        assert!(matches_prefix(&r2, "1.41421356"));
        assert!(r2.width() <= p.target_width());
        assert_eq!(
            enc_sqrt(&Enclosure::new(int(-1), int(1)).unwrap(), p),
            Err(Error::NegativeOperand)
        );
    }

    #[test]
    fn sqrt_against_bisection() {
        // independent oracle: bisection on t^2 - 2 with exact rationals
        let (mut lo, mut hi) = (int(1), int(2));
        for _ in 0..90 {
            let mid = (&lo + &hi) / int(2);
            if &mid * &mid < int(2) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let r2 = enc_sqrt(&Enclosure::point(int(2)), Precision::new(80).unwrap()).unwrap();
        assert!(r2.intersects(&Enclosure::new(lo, hi).unwrap()));
    }

    proptest! {
        #[test]
        fn exp_inverse_pair_contains_one(n in -400i64..400, d in 1i64..60) {
            let a = Enclosure::point(rat(n, d));
            let p = Precision::new(40).unwrap();
            let prod = &enc_exp(&a, p) * &enc_exp(&-&a, p);
            prop_assert!(prod.contains(&Rational::one()));
        }

        #[test]
        fn sqrt_squares_back(n in 0i64..10_000, d in 1i64..500) {
            let y = rat(n, d);
            let r = enc_sqrt(&Enclosure::point(y.clone()), Precision::new(30).unwrap()).unwrap();
            prop_assert!(r.square().contains(&y));
        }
    }
}
