//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any
//! criterion fails. Reference values are computed here from independent
//! oracles (a 50-digit pi literal and a direct Euler-number recurrence)
//! rather than through the library's own constructors.

use std::process::ExitCode;
use std::time::Instant;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use twin_taylor::certify::{
    delta_constants, f_remainder_maxima, verify_statement1, verify_statement2_improvement, Endpoint, Verdict,
};
use twin_taylor::numeric::{decimal_prefix, enc_sqrt, int, parse_decimal, rat, Enclosure, Precision, Rational};
use twin_taylor::paperfns::{build_f, build_g_family, closed_eval, identity_check, Identity, PaperFunction};
use twin_taylor::series::{euler_numbers, eval_std, PowerSeries, StdKind};
use twin_taylor::taylor::{
    build_ladder, check_theorem2_hypothesis, prop1_sign_check, second_taylor, Approximation, Theorem2Verdict,
};

type Outcome = Result<String, String>;

const PI_50: &str = "3.14159265358979323846264338327950288419716939937510";

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn lib<T>(r: twin_taylor::Result<T>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

/// pi from a 50-digit literal, as a ball of radius 1e-50.
fn pi_oracle() -> Enclosure {
    Enclosure::ball(&parse_decimal(PI_50).unwrap(), &parse_decimal("1e-50").unwrap())
}

fn window(digits: &str) -> Enclosure {
    let (lo, hi) = decimal_prefix(digits).unwrap();
    Enclosure::new(lo, hi).unwrap()
}

fn binomial(n: u64, k: u64) -> BigInt {
    (0..k).fold(BigInt::one(), |acc, i| acc * (n - i) / (i + 1))
}

fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * k)
}

/// Signed Euler numbers from `sum_{j<=n} C(2n, 2j) E_2j = 0`, `E_0 = 1`.
fn euler_oracle(m: usize) -> Vec<BigInt> {
    let mut e: Vec<BigInt> = vec![BigInt::one()];
    for n in 1..=m as u64 {
        let s: BigInt = (0..n).map(|j| binomial(2 * n, 2 * j) * &e[j as usize]).sum();
        e.push(-s);
    }
    e
}

fn criterion1() -> Outcome {
    let f = lib(build_f(16))?;
    let expected = [(0, rat(3, 8)), (2, rat(1, 128)), (4, rat(7, 5120)), (6, rat(461, 3440640)), (8, rat(16841, 1238630400))];
    for (k, v) in expected {
        ensure(f.series.coeffs()[k] == v, format!("c{k} = {} != {v}", f.series.coeffs()[k]))?;
    }
    Ok("degrees 0..8 exact".into())
}

fn criterion2() -> Outcome {
    let table = lib(euler_numbers(8))?;
    let oracle = euler_oracle(8);
    let abs: Vec<BigInt> = table.values().to_vec();
    ensure(
        abs[1..=4] == [1, 5, 61, 1385].map(BigInt::from),
        format!("|E_2..E_8| = {:?}", &abs[1..=4]),
    )?;
    for k in 0..=8 {
        ensure(abs[k] == oracle[k].abs(), format!("|E_{}| differs from the recurrence", 2 * k))?;
    }
    // c_{2k-2} = (|E_2k| - 2(-1)^k) / (4^k (2k)!) against the built series
    let f = lib(build_f(14))?;
    for k in 1..=8usize {
        let sign = if k % 2 == 0 { int(2) } else { int(-2) };
        let denom = Rational::from_integer(factorial(2 * k as u64) * (BigInt::one() << (2 * k)));
        let c = (Rational::from_integer(oracle[k].abs()) - sign) / denom;
        ensure(f.series.coeffs()[2 * k - 2] == c, format!("c_{} disagrees with the Euler formula", 2 * k - 2))?;
    }
    Ok("|E_2..E_16| match recurrence; formula consistent".into())
}

fn criterion3() -> Outcome {
    let p = lib(Precision::new(80))?;
    let r = lib(verify_statement1(&Endpoint::half_pi(), p, 64))?;
    ensure(r.verdict == Verdict::Proved, format!("verdict {}", r.verdict))?;
    let upper = r.enclosure("upper").ok_or("no upper enclosure")?;
    let pi = pi_oracle();
    let oracle = Enclosure::point(int(4)).div(&pi.square()).unwrap();
    ensure(upper.intersects(&oracle), format!("upper {upper} misses 4/pi^2"))?;
    let width = upper.width();
    ensure(width < parse_decimal("1e-20").unwrap(), format!("width {width}"))?;
    Ok(format!("Proved, width {:.1e}", twin_taylor::numeric::to_f64(&width)))
}

fn criterion4() -> Outcome {
    let p = Precision::default();
    let f = lib(build_f(64))?;
    let b = Endpoint::half_pi().enclosure(p);
    let tt2 = lib(second_taylor(&f.series, 2, &b, p))?;
    let top = tt2.top_coeff();
    let pi = pi_oracle();
    let pi2 = pi.square();
    let oracle = Enclosure::point(int(16)).div(&pi2.square()).unwrap()
        - Enclosure::point(int(3)).div(&pi2.scale(&int(2))).unwrap();
    ensure(top.intersects(&oracle), format!("top {top} misses 16/pi^4 - 3/(2pi^2)"))?;
    ensure(top.width() < parse_decimal("1e-15").unwrap(), format!("width {}", top.width()))?;
    Ok(format!("top coefficient {top:.18}"))
}

fn criterion5() -> Outcome {
    let p = Precision::default();
    let tol = rat(1, 1_000_000);
    let (first, second) = lib(f_remainder_maxima(&Endpoint::half_pi(), 3, &tol, p, 64))?;
    let slack = rat(5, 100_000);
    let first_band = Enclosure::ball(&rat(1100, 100_000), &slack);
    let second_band = Enclosure::ball(&rat(315, 100_000), &slack);
    ensure(first.max_value.is_subset_of(&first_band), format!("max|R_3| = {}", first.max_value))?;
    ensure(first.argmax.intersects(&Endpoint::half_pi().enclosure(p)), format!("argmax {} misses pi/2", first.argmax))?;
    ensure(second.max_value.is_subset_of(&second_band), format!("max|RR_3| = {}", second.max_value))?;
    let argmax_band = Enclosure::ball(&rat(114909, 100_000), &rat(1, 1000));
    ensure(second.argmax.is_subset_of(&argmax_band), format!("argmax {}", second.argmax))?;
    Ok(format!(
        "max|R_3| ~ {:.6}, max|RR_3| ~ {:.6} at {:.6}",
        first.max_value.to_f64_mid(),
        second.max_value.to_f64_mid(),
        second.argmax.to_f64_mid()
    ))
}

/// `U(x) = (4/pi^2)(cosh(pi/4) - sqrt2/2) - x^2/192` and
/// `L(x) = 1/4 - (16/pi^4)(cosh(pi/4) + sqrt2/2 - 2) x^2` from the displayed
/// closed forms.
fn closed_bounds(p: Precision) -> Result<(impl Fn(&Enclosure) -> Enclosure, impl Fn(&Enclosure) -> Enclosure, Enclosure), String> {
    let pi = pi_oracle();
    let four_over_pi2 = Enclosure::point(int(4)).div(&pi.square()).unwrap();
    let cosh = lib(eval_std(StdKind::Cosh, &pi.scale(&rat(1, 4)), p))?;
    let half_sqrt2 = lib(enc_sqrt(&Enclosure::point(int(2)), p))?.scale(&rat(1, 2));
    let u0 = &four_over_pi2 * &(&cosh - &half_sqrt2);
    let k = &four_over_pi2.square() * &(&(&cosh + &half_sqrt2) - &Enclosure::point(int(2)));
    let s = &four_over_pi2 * &(Enclosure::point(int(2)) - half_sqrt2.scale(&int(2)));
    let upper = move |x: &Enclosure| u0.clone() - x.square().scale(&rat(1, 192));
    let lower = move |x: &Enclosure| Enclosure::point(rat(1, 4)) - &k * &x.square();
    Ok((lower, upper, s))
}

fn criterion6() -> Outcome {
    let p = Precision::default();
    let (d1, d2) = lib(delta_constants(p))?;
    let tiny = parse_decimal("1e-8").unwrap();
    ensure(d2.is_subset_of(&window("0.22525")), format!("delta2 {d2}"))?;
    ensure(d1.is_subset_of(&window("1.55456")), format!("delta1 {d1}"))?;
    ensure(d1.width() < tiny && d2.width() < tiny, "delta width >= 1e-8")?;
    let (lower, upper, s) = closed_bounds(p)?;
    ensure(upper(&d2).contains(&rat(1, 4)), format!("U(delta2) = {}", upper(&d2)))?;
    ensure(lower(&d1).intersects(&s), format!("L(delta1) = {} vs {s}", lower(&d1)))?;
    Ok(format!("delta1 {:.10}, delta2 {:.10}", d1.to_f64_mid(), d2.to_f64_mid()))
}

fn criterion7() -> Outcome {
    let cert = lib(verify_statement2_improvement(Precision::default(), 64, 64))?;
    for part in cert.parts() {
        ensure(part.verdict == Verdict::Proved, format!("{}: {}", part.claim_id, part.verdict))?;
    }
    Ok("(a), (b), (c) Proved".into())
}

fn random_unit(rng: &mut StdRng) -> Rational {
    rat(rng.gen_range(1..(1 << 20)), 1 << 20)
}

fn ladder_property(funcs: &[(&PaperFunction, Vec<usize>)], rng: &mut StdRng) -> Result<usize, String> {
    let mut strict = 0;
    for budget in [64, 128] {
        let p = lib(Precision::new(budget))?;
        let c = Endpoint::half_pi().enclosure(p);
        let xs: Vec<Enclosure> = (0..100).map(|_| Enclosure::point(c.lo() * random_unit(rng))).collect();
        for (func, orders) in funcs {
            let ladder = lib(build_ladder(&func.series, &c, orders, p))?;
            for x in &xs {
                let chain = lib(ladder.chain_at(x, p))?;
                let mut values: Vec<&Enclosure> = chain.lower.iter().collect();
                values.push(&chain.value);
                values.extend(chain.upper.iter().rev());
                for w in values.windows(2) {
                    // width-aware: a failure needs left.lo > right.hi
                    ensure(w[0].lo() <= w[1].hi(), format!("{} chain broken at {x}", func.id))?;
                    if w[0].certainly_le(w[1]) {
                        strict += 1;
                    }
                }
            }
        }
    }
    Ok(strict)
}

fn criterion8() -> Outcome {
    let mut rng = StdRng::seed_from_u64(0x7a11);
    let p = Precision::default();
    let pi = pi_oracle();
    let f = lib(build_f(64))?;
    let (g, g1, g2) = lib(build_g_family(64, &twin_taylor::numeric::enc_pi(p)))?;

    // (i)
    let strict = ladder_property(
        &[(&f, vec![0, 2, 4, 6, 8, 10, 12]), (&g1, vec![0, 4, 8, 12]), (&g2, vec![2, 6, 10])],
        &mut rng,
    )?;

    // (ii)
    let b = Endpoint::half_pi().enclosure(p);
    let fb = lib(f.series.eval_with_tail(&b, p))?;
    for n in 1..=8 {
        let tt = lib(second_taylor(&f.series, n, &b, p))?;
        ensure(tt.eval(&b, p).intersects(&fb), format!("TT_{n}(b) misses f(b)"))?;
    }

    // (iii)
    for trial in 0..100 {
        let degree = rng.gen_range(1..8usize);
        let coeffs: Vec<Rational> = (0..=degree)
            .map(|_| if rng.gen_bool(0.3) { Rational::zero() } else { rat(rng.gen_range(0..50), rng.gen_range(1..20)) })
            .collect();
        let series = lib(PowerSeries::polynomial(coeffs))?;
        let n = rng.gen_range(0..=degree);
        let b = Enclosure::point(rat(rng.gen_range(1..40), 10));
        let samples: Vec<Enclosure> = (0..5).map(|_| Enclosure::point(b.lo() * random_unit(&mut rng))).collect();
        let report = lib(prop1_sign_check(&series, n, &b, &samples, p))?;
        ensure(report.consistent(), format!("sign law fails on trial {trial}"))?;
    }

    // (iv)
    for id in [Identity::SecIdentity, Identity::SinRatioIdentity, Identity::Splitting] {
        let residual = lib(identity_check(id, 32))?;
        ensure(residual.coeffs().iter().all(Zero::is_zero), format!("{id:?} residual nonzero"))?;
    }

    // (v)
    let upper_end = pi.scale(&rat(4, 5));
    for func in [&f, &g, &g1, &g2] {
        for _ in 0..50 {
            let x = Enclosure::point(upper_end.lo() * random_unit(&mut rng));
            let by_series = lib(func.series.eval_with_tail(&x, p))?;
            let closed = lib(closed_eval(func.id, &x, &func.domain_hi, p))?;
            ensure(by_series.intersects(&closed), format!("{} series/closed form disjoint at {x}", func.id))?;
        }
    }
    Ok(format!("(i) {strict} strict links; (ii)-(v) hold"))
}

fn criterion9() -> Outcome {
    let (g, _, _) = lib(build_g_family(16, &Endpoint::pi_times(int(1)).enclosure(Precision::default())))?;
    match check_theorem2_hypothesis(&g.series) {
        Theorem2Verdict::Fails(k) => Ok(format!("Fails({k}) on g")),
        other => Err(format!("expected Fails, got {other:?}")),
    }
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("f-series golden coefficients", criterion1),
        ("Euler number cross-check", criterion2),
        ("two-sided constant bound for f", criterion3),
        ("TT_2 top coefficient", criterion4),
        ("remainder maxima", criterion5),
        ("delta constants", criterion6),
        ("quadratic bounds for g", criterion7),
        ("property suite", criterion8),
        ("negative control on g", criterion9),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(run).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS criterion {} ({name}): {detail} [{secs:.1}s]", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL criterion {} ({name}): {why} [{secs:.1}s]", i + 1);
            }
        }
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
