//! End-to-end certificates for the concrete inequalities: the two-sided
//! constant bounds for `f`, the full `f` ladder, remainder maxima, the two
//! crossing constants and the quadratic bounds for `g`.
//!
//! A verdict is `Proved` only when every structural hypothesis passed and
//! every required comparison separated its enclosures. Anything that does
//! not separate is retried with doubled precision and truncation (up to three
//! times) before it is reported `Indeterminate`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::{
    enc_exp, enc_pi, enc_sqrt, int, parse_rational, rat, to_fraction_string, Enclosure, Precision,
    Rational,
};
use crate::paperfns::{build_f, build_g_family, closed_eval, FunctionId, PaperFunction};
use crate::series::{eval_std, StdKind};
use crate::taylor::{
    build_ladder, first_taylor, remainder_eval, second_taylor, shifted_series, Approximation,
    Comparison, RemainderKind, Theorem2Verdict,
};

const MAX_RETRIES: usize = 3;

/// `q pi + r`, kept symbolic so exact cases such as `cos(pi/2) = 0` are
/// visible before any rounding.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Endpoint {
    pub pi_coeff: Rational,
    pub offset: Rational,
}

impl Endpoint {
    pub fn new(pi_coeff: Rational, offset: Rational) -> Self {
        Self { pi_coeff, offset }
    }

    pub fn pi_times(q: Rational) -> Self {
        Self::new(q, Rational::zero())
    }

    pub fn rational(r: Rational) -> Self {
        Self::new(Rational::zero(), r)
    }

    pub fn half_pi() -> Self {
        Self::pi_times(rat(1, 2))
    }

    pub fn enclosure(&self, p: Precision) -> Enclosure {
        if self.pi_coeff.is_zero() {
            return Enclosure::point(self.offset.clone());
        }
        (enc_pi(p).scale(&self.pi_coeff) + Enclosure::point(self.offset.clone()))
            .narrow(p.working_bits())
    }

    /// True when the point is an odd multiple of `pi/2`.
    pub fn cos_is_zero(&self) -> bool {
        self.offset.is_zero() && (&self.pi_coeff - rat(1, 2)).is_integer()
    }
}

impl fmt::Display for Endpoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let q = &self.pi_coeff;
        let r = &self.offset;
        if q.is_zero() {
            return write!(f, "{r}");
        }
        let sign = if q.is_negative() { "-" } else { "" };
        let qa = q.abs();
        let numer = if qa.numer().is_one() {
            String::new()
        } else {
            qa.numer().to_string()
        };
        write!(f, "{sign}{numer}pi")?;
        if !qa.denom().is_one() {
            write!(f, "/{}", qa.denom())?;
        }
        if r.is_positive() {
            write!(f, "+{r}")?;
        } else if r.is_negative() {
            write!(f, "-{}", r.abs())?;
        }
        Ok(())
    }
}

fn parse_pi_term(term: &str) -> Result<Rational> {
    let bad = || Error::InvalidArgument(format!("bad pi term {term:?}"));
    let (before, after) = term.split_once("pi").ok_or_else(bad)?;
    let before = before.strip_suffix('*').unwrap_or(before);
    let coeff = match before {
        "" | "+" => Rational::one(),
        "-" => -Rational::one(),
        s => parse_rational(s).map_err(|_| bad())?,
    };
    let coeff = match after {
        "" => coeff,
        s => {
            let den = s.strip_prefix('/').ok_or_else(bad)?;
            let den = parse_rational(den).map_err(|_| bad())?;
            if den.is_zero() {
                return Err(bad());
            }
            coeff / den
        }
    };
    Ok(coeff)
}

impl FromStr for Endpoint {
    type Err = Error;

    /// Accepts sums of rational and `pi` terms: `pi/2`, `3pi/4`, `3*pi/4`,
    /// `1/2`, `pi/3+1/10`, `0.75`.
    fn from_str(s: &str) -> Result<Self> {
        let text: String = s
            .chars()
            .filter(|c| !c.is_whitespace())
            .collect::<String>()
            .to_ascii_lowercase()
            .replace('π', "pi");
        if text.is_empty() {
            return Err(Error::InvalidArgument("empty endpoint".into()));
        }
        let mut terms = Vec::new();
        let mut start = 0;
        let bytes = text.as_bytes();
        for i in 1..bytes.len() {
            let prev = bytes[i - 1];
            if (bytes[i] == b'+' || bytes[i] == b'-') && prev != b'e' && prev != b'/' && prev != b'*' {
                terms.push(&text[start..i]);
                start = i;
            }
        }
        terms.push(&text[start..]);
        let mut endpoint = Endpoint::rational(Rational::zero());
        for term in terms {
            if term.contains("pi") {
                endpoint.pi_coeff += parse_pi_term(term)?;
            } else {
                let term = term.strip_prefix('+').unwrap_or(term);
                endpoint.offset += parse_rational(term)?;
            }
        }
        Ok(endpoint)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    Proved,
    ProvedNonStrictAtEndpoint,
    Indeterminate,
    Refuted,
}

impl Verdict {
    pub fn is_proved(self) -> bool {
        matches!(self, Verdict::Proved | Verdict::ProvedNonStrictAtEndpoint)
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HypothesisCheck {
    pub name: String,
    pub passed: bool,
}

/// Enclosure endpoints as `"num/den"` strings.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EnclosureRecord {
    pub lo: String,
    pub hi: String,
}

impl From<&Enclosure> for EnclosureRecord {
    fn from(e: &Enclosure) -> Self {
        Self {
            lo: to_fraction_string(e.lo()),
            hi: to_fraction_string(e.hi()),
        }
    }
}

impl EnclosureRecord {
    pub fn to_enclosure(&self) -> Result<Enclosure> {
        Enclosure::new(parse_rational(&self.lo)?, parse_rational(&self.hi)?)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateReport {
    pub claim_id: String,
    pub verdict: Verdict,
    pub hypotheses: Vec<HypothesisCheck>,
    pub enclosures: BTreeMap<String, EnclosureRecord>,
    #[serde(rename = "precision")]
    pub precision_used: u32,
    #[serde(rename = "truncation")]
    pub truncation_used: usize,
}

impl CertificateReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialises")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::InvalidArgument(format!("bad report JSON: {e}")))
    }

    pub fn enclosure(&self, name: &str) -> Option<Enclosure> {
        self.enclosures.get(name).and_then(|r| r.to_enclosure().ok())
    }

    pub fn hypothesis(&self, name: &str) -> Option<bool> {
        self.hypotheses.iter().find(|h| h.name == name).map(|h| h.passed)
    }

    pub fn all_passed(&self) -> bool {
        self.hypotheses.iter().all(|h| h.passed)
    }
}

impl fmt::Display for CertificateReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "claim      {}", self.claim_id)?;
        writeln!(f, "verdict    {}", self.verdict)?;
        writeln!(f, "precision  {}  truncation {}", self.precision_used, self.truncation_used)?;
        for h in &self.hypotheses {
            writeln!(f, "  [{}] {}", if h.passed { "ok" } else { "--" }, h.name)?;
        }
        for (name, rec) in &self.enclosures {
            match rec.to_enclosure() {
                Ok(e) => writeln!(f, "  {name:<28} {e:.15}")?,
                Err(_) => writeln!(f, "  {name:<28} [{}, {}]", rec.lo, rec.hi)?,
            }
        }
        Ok(())
    }
}

/// Collects checks and enclosures, then settles the verdict.
struct ReportBuilder {
    claim_id: String,
    checks: Vec<(String, Comparison)>,
    enclosures: BTreeMap<String, EnclosureRecord>,
}

impl ReportBuilder {
    fn new(claim_id: impl Into<String>) -> Self {
        Self {
            claim_id: claim_id.into(),
            checks: Vec::new(),
            enclosures: BTreeMap::new(),
        }
    }

    /// A structural condition: failure means "not certified", not a
    /// counterexample.
    fn require(&mut self, name: impl Into<String>, ok: bool) {
        let outcome = if ok { Comparison::Holds } else { Comparison::Unresolved };
        self.checks.push((name.into(), outcome));
    }

    fn compare(&mut self, name: impl Into<String>, outcome: Comparison) {
        self.checks.push((name.into(), outcome));
    }

    /// `left < right`, separated strictly.
    fn strictly_less(&mut self, name: impl Into<String>, left: &Enclosure, right: &Enclosure) {
        let outcome = if left.certainly_lt(right) {
            Comparison::Holds
        } else if left.lo() >= right.hi() {
            Comparison::Violated
        } else {
            Comparison::Unresolved
        };
        self.compare(name, outcome);
    }

    /// Two enclosures of the same number must overlap.
    fn agree(&mut self, name: impl Into<String>, a: &Enclosure, b: &Enclosure) {
        let outcome = if a.intersects(b) { Comparison::Holds } else { Comparison::Violated };
        self.compare(name, outcome);
    }

    fn enclose(&mut self, name: impl Into<String>, e: &Enclosure) {
        self.enclosures.insert(name.into(), e.into());
    }

    fn absorb(&mut self, prefix: &str, report: &CertificateReport) {
        for h in &report.hypotheses {
            let outcome = match (h.passed, report.verdict) {
                (true, _) => Comparison::Holds,
                (false, Verdict::Refuted) => Comparison::Violated,
                (false, _) => Comparison::Unresolved,
            };
            self.checks.push((format!("{prefix}{}", h.name), outcome));
        }
        for (name, rec) in &report.enclosures {
            self.enclosures.insert(format!("{prefix}{name}"), rec.clone());
        }
    }

    fn verdict(&self) -> Verdict {
        if self.checks.iter().any(|(_, c)| *c == Comparison::Violated) {
            Verdict::Refuted
        } else if self.checks.iter().any(|(_, c)| *c == Comparison::Unresolved) {
            Verdict::Indeterminate
        } else {
            Verdict::Proved
        }
    }

    fn finish(self, p: Precision, truncation: usize) -> CertificateReport {
        self.finish_as(None, p, truncation)
    }

    /// `proved_as` replaces `Proved` (e.g. by the non-strict endpoint form).
    fn finish_as(self, proved_as: Option<Verdict>, p: Precision, truncation: usize) -> CertificateReport {
        let mut verdict = self.verdict();
        if verdict == Verdict::Proved {
            verdict = proved_as.unwrap_or(verdict);
        }
        CertificateReport {
            claim_id: self.claim_id,
            verdict,
            hypotheses: self
                .checks
                .into_iter()
                .map(|(name, c)| HypothesisCheck {
                    name,
                    passed: c == Comparison::Holds,
                })
                .collect(),
            enclosures: self.enclosures,
            precision_used: p.budget(),
            truncation_used: truncation,
        }
    }
}

fn retryable(e: &Error) -> bool {
    matches!(
        e,
        Error::RatioConditionViolated { .. }
            | Error::DivisionByIntervalContainingZero
            | Error::NegativeOperand
            | Error::PoleProximity(_)
    )
}

/// Runs `step`, doubling precision and truncation while the outcome is
/// `Indeterminate` or a precision-limited error, at most [`MAX_RETRIES`]
/// times.
pub fn with_escalation<T>(
    p: Precision,
    truncation: usize,
    mut step: impl FnMut(Precision, usize) -> Result<T>,
    settled: impl Fn(&T) -> bool,
) -> Result<T> {
    let (mut p, mut n) = (p, truncation);
    for attempt in 0..=MAX_RETRIES {
        let last = attempt == MAX_RETRIES;
        match step(p, n) {
            Ok(out) if settled(&out) || last => return Ok(out),
            Err(e) if !retryable(&e) || last => return Err(e),
            _ => {}
        }
        p = p.doubled();
        n *= 2;
    }
    unreachable!("the final attempt always returns")
}

fn escalate_report(
    p: Precision,
    truncation: usize,
    step: impl FnMut(Precision, usize) -> Result<CertificateReport>,
) -> Result<CertificateReport> {
    with_escalation(p, truncation, step, |r| r.verdict != Verdict::Indeterminate)
}

/// `f(x)`, `g(x)`, ... as the intersection of the series enclosure and the
/// closed-form enclosure; disjoint results are an internal error.
pub fn value_at(func: &PaperFunction, x: &Enclosure, p: Precision) -> Result<Enclosure> {
    let by_series = func.series.eval_with_tail(x, p)?;
    if !x.lo().is_positive() {
        return Ok(by_series);
    }
    let closed = closed_eval(func.id, x, &func.domain_hi, p)?;
    by_series.intersect(&closed).ok_or_else(|| {
        Error::InternalCrossCheckMismatch(format!(
            "{} at {x}: series {by_series} and closed form {closed} disagree",
            func.id
        ))
    })
}

/// [`value_at`] at a symbolic endpoint; for `f` at an odd multiple of `pi/2`
/// the closed form is `1/c^2` exactly (`cos c = 0`).
pub fn value_at_endpoint(func: &PaperFunction, c: &Endpoint, p: Precision) -> Result<Enclosure> {
    let x = c.enclosure(p);
    if func.id == FunctionId::F && c.cos_is_zero() {
        let exact = x.square().recip()?.narrow(p.working_bits());
        let by_series = func.series.eval_with_tail(&x, p)?;
        return by_series.intersect(&exact).ok_or_else(|| {
            Error::InternalCrossCheckMismatch(format!("f({c}): series {by_series} misses 1/c^2 = {exact}"))
        });
    }
    value_at(func, &x, p)
}

fn check_inside_domain(c: &Enclosure, domain_hi: &Enclosure, what: &str) -> Result<()> {
    if !c.lo().is_positive() || !c.certainly_lt(domain_hi) {
        return Err(Error::DomainViolation(format!(
            "{what}: endpoint {c} must lie in (0, {domain_hi})"
        )));
    }
    Ok(())
}

fn statement1_once(c: &Endpoint, p: Precision, n: usize, endpoint_form: bool) -> Result<CertificateReport> {
    let f = build_f(n)?;
    let cx = c.enclosure(p);
    check_inside_domain(&cx, &enc_pi(p), "statement 1")?;
    let claim = if endpoint_form { "statement1.endpoint" } else { "statement1" };
    let mut r = ReportBuilder::new(claim);
    r.require(
        "theorem2_hypothesis",
        crate::taylor::check_theorem2_hypothesis(&f.series) == Theorem2Verdict::Certified,
    );
    // strictness on the open interval: some positive coefficient past x^0
    r.require(
        "strictly_increasing",
        f.series.coeffs().iter().skip(1).any(Signed::is_positive),
    );
    let lower = Enclosure::point(first_taylor(&f.series, 0)?.coeffs()[0].clone());
    r.agree("lower_is_3/8", &lower, &Enclosure::point(rat(3, 8)));
    let upper = value_at_endpoint(&f, c, p)?;
    r.strictly_less("lower<upper", &lower, &upper);
    if c.cos_is_zero() {
        let exact = cx.square().recip()?;
        r.agree("upper=1/c^2", &upper, &exact);
    }
    r.enclose("c", &cx);
    r.enclose("lower", &lower);
    r.enclose("upper", &upper);
    let proved_as = endpoint_form.then_some(Verdict::ProvedNonStrictAtEndpoint);
    Ok(r.finish_as(proved_as, p, n))
}

/// `3/8 < f(x) < f(c-)` on `(0, c)`: the order-0 ladder.
pub fn verify_statement1(c: &Endpoint, p: Precision, truncation: usize) -> Result<CertificateReport> {
    escalate_report(p, truncation, |p, n| statement1_once(c, p, n, false))
}

/// The closed form `3/8 <= f(x) <= f(c-)` on `(0, c]`, with equality at `c`.
pub fn verify_statement1_endpoint(c: &Endpoint, p: Precision, truncation: usize) -> Result<CertificateReport> {
    escalate_report(p, truncation, |p, n| statement1_once(c, p, n, true))
}

/// `grid` interior points `c i / (grid + 1)`.
fn interior_grid(c: &Enclosure, grid: usize) -> Vec<Enclosure> {
    (1..=grid)
        .map(|i| Enclosure::point(c.lo() * rat(i as i64, grid as i64 + 1)))
        .collect()
}

fn validate_orders(orders: &[usize], grid: usize, truncation: usize) -> Result<()> {
    if orders.is_empty() || orders.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidArgument("orders must be nonempty and strictly ascending".into()));
    }
    if grid < 3 {
        return Err(Error::InvalidArgument(format!("grid must be >= 3, got {grid}")));
    }
    let max = *orders.last().expect("nonempty");
    if truncation < max + 2 {
        return Err(Error::InvalidArgument(format!(
            "truncation {truncation} must be >= max order + 2 = {}",
            max + 2
        )));
    }
    Ok(())
}

fn ladder_once(
    func: &PaperFunction,
    c: &Endpoint,
    orders: &[usize],
    grid: usize,
    p: Precision,
    claim: &str,
) -> Result<ReportBuilder> {
    let cx = c.enclosure(p);
    check_inside_domain(&cx, &func.domain_hi, claim)?;
    let ladder = build_ladder(&func.series, &cx, orders, p)?;
    let mut r = ReportBuilder::new(claim);
    r.require("theorem2_hypothesis", ladder.hypothesis() == Theorem2Verdict::Certified);
    let mut link_outcomes: Vec<(String, Comparison)> = Vec::new();
    for x in interior_grid(&cx, grid) {
        let check = ladder.chain_at(&x, p)?;
        for (i, link) in check.links.iter().enumerate() {
            let name = format!("chain:{}<={}", link.left, link.right);
            if link_outcomes.len() <= i {
                link_outcomes.push((name, link.outcome));
            } else if link.outcome != Comparison::Holds && link_outcomes[i].1 != Comparison::Violated {
                link_outcomes[i].1 = link.outcome;
            }
        }
    }
    for (name, outcome) in link_outcomes {
        r.compare(name, outcome);
    }
    let fc = value_at_endpoint(func, c, p)?;
    for (n, upper) in orders.iter().zip(ladder.upper()) {
        r.agree(format!("interpolates:TT_{n}(c)=f(c)"), &upper.eval(&cx, p), &fc);
        r.enclose(format!("TT_{n}.top"), upper.top_coeff());
    }
    r.enclose("c", &cx);
    r.enclose("f(c)", &fc);
    Ok(r)
}

/// Ladder `T_{n_0} <= ... <= f <= ... <= TT_{n_0}` for any function with a
/// certified coefficient-sign hypothesis, checked at `grid` interior points.
pub fn verify_ladder(
    id: FunctionId,
    c: &Endpoint,
    orders: &[usize],
    grid: usize,
    beta: &Endpoint,
    p: Precision,
    truncation: usize,
) -> Result<CertificateReport> {
    validate_orders(orders, grid, truncation)?;
    escalate_report(p, truncation, |p, n| {
        let func = crate::paperfns::build(id, n, &beta.enclosure(p))?;
        Ok(ladder_once(&func, c, orders, grid, p, &format!("ladder.{id}"))?.finish(p, n))
    })
}

/// The full `f` chain at endpoint `c`, including the closed form of the
/// `TT_2` coefficient when `cos c = 0`.
pub fn verify_theorem3_chain(
    c: &Endpoint,
    orders: &[usize],
    grid: usize,
    p: Precision,
    truncation: usize,
) -> Result<CertificateReport> {
    validate_orders(orders, grid, truncation)?;
    if let Some(odd) = orders.iter().find(|&&n| n % 2 == 1) {
        return Err(Error::InvalidArgument(format!("f ladder orders must be even, got {odd}")));
    }
    escalate_report(p, truncation, |p, n| {
        let f = build_f(n)?;
        let mut r = ladder_once(&f, c, orders, grid, p, "theorem3")?;
        let s1 = statement1_once(c, p, n, false)?;
        r.absorb("statement1.", &s1);
        if c.cos_is_zero() && orders.contains(&2) {
            let cx = c.enclosure(p);
            let c2 = cx.square();
            // (1/c^2 - 3/8) / c^2, which is 16/pi^4 - 3/(2 pi^2) at pi/2
            let closed = (c2.recip()? - Enclosure::point(rat(3, 8))).div(&c2)?;
            let top = second_taylor(&f.series, 2, &cx, p)?.top_coeff().clone();
            r.agree("TT_2.top=closed_form", &top, &closed);
            r.enclose("TT_2.top_closed_form", &closed);
        }
        Ok(r.finish(p, n))
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MaxSearchResult {
    pub argmax: Enclosure,
    pub max_value: Enclosure,
    pub samples_used: usize,
    pub refinement_depth: usize,
}

const REMAINDER_GRID: usize = 256;

/// Maximum of `|R_n|` (first) or `|RR_n|` (second, needs `b`) over
/// `[interval.0, interval.1]`: a 256-point scan followed by golden-section
/// refinement around the best cell until the bracket is narrower than `tol`.
///
/// The location is heuristic; the value enclosure is rigorous for the final
/// bracket.
pub fn remainder_max(
    func: &PaperFunction,
    kind: RemainderKind,
    n: usize,
    b: Option<&Enclosure>,
    interval: (&Enclosure, &Enclosure),
    tol: &Rational,
    p: Precision,
) -> Result<MaxSearchResult> {
    let f = &func.series;
    let lo = interval.0.lo().clone();
    let hi = interval.1.hi().clone();
    if lo < *f.base_point() || lo >= hi {
        return Err(Error::DomainViolation(format!(
            "search interval [{lo}, {hi}] must start at or right of {}",
            f.base_point()
        )));
    }
    if !interval.1.certainly_lt(&func.domain_hi) {
        return Err(Error::DomainViolation(format!(
            "search interval end {} reaches the domain end {}",
            interval.1, func.domain_hi
        )));
    }
    if !tol.is_positive() {
        return Err(Error::InvalidArgument("tolerance must be positive".into()));
    }
    if n == 0 {
        return Err(Error::InvalidArgument("remainders are indexed from n = 1".into()));
    }
    let bits = p.working_bits();
    // R_n = t^m (S_m(x) - top) with m = n for the first remainder and
    // m = n - 1, top = TT_{n-1} coefficient for the second
    let (m, top) = match kind {
        RemainderKind::First => (n, Enclosure::zero()),
        RemainderKind::Second => {
            let b = b.ok_or_else(|| Error::InvalidArgument("second remainder needs an endpoint".into()))?;
            let upper = second_taylor(f, n - 1, b, p)?;
            (n - 1, upper.top_coeff().clone())
        }
    };
    let shifted = shifted_series(f, m)?;
    let base = Enclosure::point(f.base_point().clone());
    let abs_remainder = |x: &Enclosure| -> Result<Enclosure> {
        let t = x - &base;
        let inner = shifted.eval_with_tail(x, p)? - top.clone();
        Ok((&t.pow_int(m as i32)? * &inner).abs().narrow(bits))
    };
    let at = |x: &Rational| abs_remainder(&Enclosure::point(x.clone()));

    let span = &hi - &lo;
    let step = &span / int(REMAINDER_GRID as i64 - 1);
    let mut best = (0usize, at(&lo)?);
    for j in 1..REMAINDER_GRID {
        let x = if j + 1 == REMAINDER_GRID { hi.clone() } else { &lo + &step * int(j as i64) };
        let v = at(&x)?;
        if v.midpoint() > best.1.midpoint() {
            best = (j, v);
        }
    }
    let cell = |j: usize| -> Rational {
        if j + 1 >= REMAINDER_GRID {
            hi.clone()
        } else {
            &lo + &step * int(j as i64)
        }
    };
    let mut left = cell(best.0.saturating_sub(1));
    let mut right = cell(best.0 + 1);
    let inv_phi = rat(610, 987);
    let mut depth = 0;
    let mut samples = REMAINDER_GRID;
    while &right - &left > *tol {
        let d = crate::numeric::round_down(&(&inv_phi * (&right - &left)), 64);
        let x1 = &right - &d;
        let x2 = &left + &d;
        if at(&x1)?.midpoint() < at(&x2)?.midpoint() {
            left = x1;
        } else {
            right = x2;
        }
        depth += 1;
        samples += 2;
    }
    let argmax = Enclosure::new(left, right)?;
    let max_value = abs_remainder(&argmax)?;
    Ok(MaxSearchResult {
        argmax,
        max_value,
        samples_used: samples,
        refinement_depth: depth,
    })
}

/// Maximum of `|R_n|` and `|RR_n|` of `f` over `[0, c]`, with the second
/// remainder taken against `TT_{n-1}` at `c`.
pub fn f_remainder_maxima(
    c: &Endpoint,
    n: usize,
    tol: &Rational,
    p: Precision,
    truncation: usize,
) -> Result<(MaxSearchResult, MaxSearchResult)> {
    let f = build_f(truncation)?;
    let cx = c.enclosure(p);
    let zero = Enclosure::zero();
    let first = remainder_max(&f, RemainderKind::First, n, None, (&zero, &cx), tol, p)?;
    let second = remainder_max(&f, RemainderKind::Second, n, Some(&cx), (&zero, &cx), tol, p)?;
    Ok((first, second))
}

/// Pointwise remainder, re-exported for callers that only need a value.
pub fn remainder_at(
    func: &PaperFunction,
    kind: RemainderKind,
    n: usize,
    b: Option<&Enclosure>,
    x: &Enclosure,
    p: Precision,
) -> Result<Enclosure> {
    remainder_eval(&func.series, kind, n, b, x, p)
}

struct Constants {
    pi: Enclosure,
    sqrt2: Enclosure,
    e_quarter: Enclosure,
    e_half: Enclosure,
    e_eighth: Enclosure,
}

impl Constants {
    fn new(p: Precision) -> Result<Self> {
        let pi = enc_pi(p);
        Ok(Self {
            sqrt2: enc_sqrt(&Enclosure::point(int(2)), p)?,
            e_quarter: enc_exp(&pi.scale(&rat(1, 4)), p),
            e_half: enc_exp(&pi.scale(&rat(1, 2)), p),
            e_eighth: enc_exp(&pi.scale(&rat(1, 8)), p),
            pi,
        })
    }
}

fn delta_once(p: Precision) -> Result<(Enclosure, Enclosure)> {
    let k = Constants::new(p)?;
    let bits = p.working_bits();
    let num = |v: i64| Enclosure::point(int(v));
    let pi2 = k.pi.square();
    let sqrt3 = enc_sqrt(&num(3), p)?;
    // delta2 = 4 sqrt3 e^(-pi/8) / pi * sqrt(8 + 8 e^(pi/2) - (pi^2 + 8 sqrt2) e^(pi/4))
    let radicand2 = num(8) + k.e_half.scale(&int(8)) - &(&pi2 + &k.sqrt2.scale(&int(8))) * &k.e_quarter;
    let delta2 = (&sqrt3.scale(&int(4)) * &enc_sqrt(&radicand2, p)?)
        .div(&(&k.e_eighth * &k.pi))?
        .narrow(bits);
    // delta1 = sqrt2 pi e^(pi/8) sqrt(pi^2 + 16 sqrt2 - 32)
    //          / (8 sqrt((sqrt2 - 4) e^(pi/4) + e^(pi/2) + 1))
    let radicand_top = &pi2 + &k.sqrt2.scale(&int(16)) - num(32);
    let radicand_bottom = &(&k.sqrt2 - &num(4)) * &k.e_quarter + k.e_half.clone() + num(1);
    let top = &(&(&k.sqrt2 * &k.pi) * &k.e_eighth) * &enc_sqrt(&radicand_top, p)?;
    let delta1 = top.div(&enc_sqrt(&radicand_bottom, p)?.scale(&int(8)))?.narrow(bits);
    Ok((delta1, delta2))
}

/// `(delta1, delta2)` from their closed forms.
pub fn delta_constants(p: Precision) -> Result<(Enclosure, Enclosure)> {
    with_escalation(p, 0, |p, _| delta_once(p), |_| true)
}

/// The quadratic bounds `L(x) = 1/4 - k x^2` and `U(x) = g1(c) - x^2/192`
/// at `c = pi/2`, with `k = g2(c)/c^2`.
#[derive(Clone, Debug)]
pub struct QuadraticBounds {
    pub k: Enclosure,
    pub u0: Enclosure,
}

impl QuadraticBounds {
    pub fn lower(&self, x: &Enclosure) -> Enclosure {
        Enclosure::point(rat(1, 4)) - &self.k * &x.square()
    }

    pub fn upper(&self, x: &Enclosure) -> Enclosure {
        self.u0.clone() - x.square().scale(&rat(1, 192))
    }
}

/// Reports for the three parts and their combination.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Statement2Certificate {
    pub combined: CertificateReport,
    pub part_a: CertificateReport,
    pub part_b: CertificateReport,
    pub part_c: CertificateReport,
}

impl Statement2Certificate {
    pub fn parts(&self) -> [&CertificateReport; 3] {
        [&self.part_a, &self.part_b, &self.part_c]
    }
}

fn statement2_once(p: Precision, n: usize, grid: usize) -> Result<Statement2Certificate> {
    let bits = p.working_bits();
    let c = Endpoint::half_pi();
    let cx = c.enclosure(p);
    let pi = enc_pi(p);
    let (g, g1, g2) = build_g_family(n, &pi)?;
    let k = Constants::new(p)?;
    let four_over_pi2 = Enclosure::point(int(4)).div(&k.pi.square())?;
    let cosh_quarter = eval_std(StdKind::Cosh, &k.pi.scale(&rat(1, 4)), p)?;
    let half_sqrt2 = k.sqrt2.scale(&rat(1, 2));

    // (a) L <= g <= U on (0, c) from T_0^g1 <= g1 <= TT_0^g1 and
    //     T_2^g2 <= g2 <= TT_2^g2
    let mut a = ReportBuilder::new("statement2.a");
    let ladder1 = build_ladder(&g1.series, &cx, &[0], p)?;
    let ladder2 = build_ladder(&g2.series, &cx, &[2], p)?;
    a.require("g1.theorem2_hypothesis", ladder1.hypothesis() == Theorem2Verdict::Certified);
    a.require("g2.theorem2_hypothesis", ladder2.hypothesis() == Theorem2Verdict::Certified);
    a.require("T_0^g1=1/4", ladder1.lower()[0].coeffs() == [rat(1, 4)]);
    a.require(
        "T_2^g2=x^2/192",
        ladder2.lower()[0].coeffs() == [Rational::zero(), Rational::zero(), rat(1, 192)],
    );
    let g1c = value_at_endpoint(&g1, &c, p)?;
    let g2c = value_at_endpoint(&g2, &c, p)?;
    let u0 = ladder1.upper()[0].top_coeff().intersect(&g1c).unwrap_or(g1c.clone());
    let top2 = ladder2.upper()[0].top_coeff().clone();
    let k_closed = (&four_over_pi2 * &g2c).narrow(bits);
    let kq = top2.intersect(&k_closed).unwrap_or(top2.clone());
    a.agree("TT_2^g2.top=g2(c)/c^2", &top2, &k_closed);
    let u0_closed = &four_over_pi2 * &(&cosh_quarter - &half_sqrt2);
    let k_closed_form = &four_over_pi2.square() * &(&(&cosh_quarter + &half_sqrt2) - &Enclosure::point(int(2)));
    a.agree("U(0)=(4/pi^2)(cosh(pi/4)-sqrt2/2)", &u0, &u0_closed);
    a.agree("k=(16/pi^4)(cosh(pi/4)+sqrt2/2-2)", &kq, &k_closed_form);
    let bounds = QuadraticBounds { k: kq.clone(), u0: u0.clone() };
    let mut below = Comparison::Holds;
    let mut above = Comparison::Holds;
    let worse = |acc: Comparison, next: Comparison| match (acc, next) {
        (Comparison::Violated, _) | (_, Comparison::Violated) => Comparison::Violated,
        (Comparison::Unresolved, _) | (_, Comparison::Unresolved) => Comparison::Unresolved,
        _ => Comparison::Holds,
    };
    for x in interior_grid(&cx, grid) {
        let gx = value_at(&g, &x, p)?;
        below = worse(below, Comparison::of(&bounds.lower(&x), &gx));
        above = worse(above, Comparison::of(&gx, &bounds.upper(&x)));
    }
    a.compare(format!("grid{grid}:L<=g"), below);
    a.compare(format!("grid{grid}:g<=U"), above);
    a.enclose("g1(c)", &g1c);
    a.enclose("g2(c)", &g2c);
    a.enclose("k", &kq);
    a.enclose("U(0)", &u0);
    let part_a = a.finish(p, n);

    let (delta1, delta2) = delta_once(p)?;
    let quarter = Enclosure::point(rat(1, 4));

    // (b) U(x) - 1/4 = (r2^2 - x^2)/192 with r2^2 = 192 (g1(c) - 1/4), so
    //     U <= 1/4 exactly on [r2, c]
    let mut b = ReportBuilder::new("statement2.b");
    let r2_sq = (&u0 - &quarter).scale(&int(192));
    b.strictly_less("g1(c)>1/4", &quarter, &u0);
    b.require("U.leading_coefficient<0", true);
    let r2 = enc_sqrt(&r2_sq, p)?;
    b.strictly_less("crossing<c", &r2, &cx);
    b.agree("delta2=crossing", &delta2, &r2);
    let u_at_delta2 = bounds.upper(&delta2);
    b.agree("U(delta2)=1/4", &u_at_delta2, &quarter);
    b.enclose("delta2", &delta2);
    b.enclose("crossing", &r2);
    b.enclose("U(delta2)", &u_at_delta2);
    b.enclose("statement2.upper", &quarter);
    let part_b = b.finish(p, n);

    // (c) L(x) - s = k (r1^2 - x^2) with r1^2 = (1/4 - s)/k, so L >= s on
    //     [0, r1]
    let mut cc = ReportBuilder::new("statement2.c");
    let s = (&four_over_pi2 * &(Enclosure::point(int(2)) - k.sqrt2.clone())).narrow(bits);
    cc.strictly_less("k>0", &Enclosure::zero(), &kq);
    cc.strictly_less("s<1/4", &s, &quarter);
    let r1 = enc_sqrt(&(&quarter - &s).div(&kq)?, p)?;
    cc.strictly_less("crossing<c", &r1, &cx);
    cc.agree("delta1=crossing", &delta1, &r1);
    let l_at_delta1 = bounds.lower(&delta1);
    cc.agree("L(delta1)=(4/pi^2)(2-sqrt2)", &l_at_delta1, &s);
    cc.enclose("delta1", &delta1);
    cc.enclose("crossing", &r1);
    cc.enclose("L(delta1)", &l_at_delta1);
    cc.enclose("statement2.lower", &s);
    let part_c = cc.finish(p, n);

    let mut all = ReportBuilder::new("statement2");
    all.absorb("a.", &part_a);
    all.absorb("b.", &part_b);
    all.absorb("c.", &part_c);
    Ok(Statement2Certificate {
        combined: all.finish(p, n),
        part_a,
        part_b,
        part_c,
    })
}

/// Quadratic two-sided bounds for `g` on `(0, pi/2)` and their crossings
/// with `1/4` and `(4/pi^2)(2 - sqrt2)`.
pub fn verify_statement2_improvement(p: Precision, truncation: usize, grid: usize) -> Result<Statement2Certificate> {
    if grid < 3 {
        return Err(Error::InvalidArgument(format!("grid must be >= 3, got {grid}")));
    }
    with_escalation(
        p,
        truncation,
        |p, n| statement2_once(p, n, grid),
        |s| s.combined.verdict != Verdict::Indeterminate,
    )
}

/// One reproduced constant.
#[derive(Clone, Debug)]
pub struct ConstantRow {
    pub name: String,
    pub value: Enclosure,
    /// Printed value or expression it is compared against.
    pub reference: String,
    pub matches: bool,
}

fn prefix_match(e: &Enclosure, digits: &str) -> bool {
    crate::numeric::decimal_prefix(digits)
        .and_then(|(lo, hi)| Enclosure::new(lo, hi))
        .map(|w| e.intersects(&w))
        .unwrap_or(false)
}

/// Every published number: `f` coefficients through `x^8`, `4/pi^2`, the
/// `TT_2` coefficient, `g1(pi/2)`, `g2(pi/2)`, both deltas and both
/// remainder maxima.
pub fn paper_constants(p: Precision, truncation: usize) -> Result<Vec<ConstantRow>> {
    let mut rows = Vec::new();
    let f = build_f(truncation)?;
    let printed = [(0, "3/8"), (2, "1/128"), (4, "7/5120"), (6, "461/3440640"), (8, "16841/1238630400")];
    for (k, text) in printed {
        let value = Enclosure::point(f.series.coeffs()[k].clone());
        rows.push(ConstantRow {
            name: format!("f.c{k}"),
            matches: value == Enclosure::point(parse_rational(text)?),
            value,
            reference: text.into(),
        });
    }
    let c = Endpoint::half_pi();
    let cx = c.enclosure(p);
    let k = Constants::new(p)?;
    let four_over_pi2 = Enclosure::point(int(4)).div(&k.pi.square())?;
    let fc = value_at_endpoint(&f, &c, p)?;
    rows.push(ConstantRow {
        name: "f(pi/2)".into(),
        matches: fc.intersects(&four_over_pi2),
        value: fc,
        reference: "4/pi^2".into(),
    });
    let top = second_taylor(&f.series, 2, &cx, p)?.top_coeff().clone();
    let closed = &four_over_pi2.square() - &four_over_pi2.scale(&rat(3, 8));
    rows.push(ConstantRow {
        name: "TT_2.top".into(),
        matches: top.intersects(&closed),
        value: top,
        reference: "16/pi^4 - 3/(2pi^2)".into(),
    });
    let g_trunc = truncation.div_ceil(4) * 4;
    let (_, g1, g2) = build_g_family(g_trunc.max(4), &k.pi)?;
    let cosh_quarter = eval_std(StdKind::Cosh, &k.pi.scale(&rat(1, 4)), p)?;
    let half_sqrt2 = k.sqrt2.scale(&rat(1, 2));
    let g1c = value_at_endpoint(&g1, &c, p)?;
    let g2c = value_at_endpoint(&g2, &c, p)?;
    let g1_closed = &four_over_pi2 * &(&cosh_quarter - &half_sqrt2);
    let g2_closed = &four_over_pi2 * &(&(&cosh_quarter + &half_sqrt2) - &Enclosure::point(int(2)));
    rows.push(ConstantRow {
        name: "g1(pi/2)".into(),
        matches: g1c.intersects(&g1_closed),
        value: g1c,
        reference: "(4/pi^2)(cosh(pi/4) - sqrt2/2)".into(),
    });
    rows.push(ConstantRow {
        name: "g2(pi/2)".into(),
        matches: g2c.intersects(&g2_closed),
        value: g2c,
        reference: "(4/pi^2)(cosh(pi/4) + sqrt2/2 - 2)".into(),
    });
    let (delta1, delta2) = delta_constants(p)?;
    for (name, value, digits) in [("delta1", delta1, "1.55456"), ("delta2", delta2, "0.22525")] {
        rows.push(ConstantRow {
            name: name.into(),
            matches: prefix_match(&value, digits),
            value,
            reference: format!("{digits}..."),
        });
    }
    let tol = rat(1, 1_000_000);
    let (first, second) = f_remainder_maxima(&c, 3, &tol, p, truncation)?;
    let within = |e: &Enclosure, target: Rational| {
        let slack = rat(5, 100_000);
        (e.midpoint() - target).abs() <= slack
    };
    rows.push(ConstantRow {
        name: "max|R_3|".into(),
        matches: within(&first.max_value, rat(1100, 100_000)) && first.argmax.intersects(&cx),
        value: first.max_value,
        reference: "0.01100...".into(),
    });
    rows.push(ConstantRow {
        name: "max|RR_3|".into(),
        matches: within(&second.max_value, rat(315, 100_000)),
        value: second.max_value,
        reference: "0.00315...".into(),
    });
    rows.push(ConstantRow {
        name: "argmax|RR_3|".into(),
        matches: (second.argmax.midpoint() - rat(114909, 100_000)).abs() <= rat(1, 1000),
        value: second.argmax,
        reference: "1.14909...".into(),
    });
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::decimal_prefix;
    use crate::series::PowerSeries;

    fn p() -> Precision {
        Precision::default()
    }

    fn window(digits: &str) -> Enclosure {
        let (lo, hi) = decimal_prefix(digits).unwrap();
        Enclosure::new(lo, hi).unwrap()
    }

    #[test]
    fn endpoint_grammar() {
        let e: Endpoint = "pi/2".parse().unwrap();
        assert_eq!(e, Endpoint::half_pi());
        assert!(e.cos_is_zero());
        let e: Endpoint = "pi/3+1/10".parse().unwrap();
        assert_eq!(e, Endpoint::new(rat(1, 3), rat(1, 10)));
        assert!(!e.cos_is_zero());
        assert_eq!("3*pi/4".parse::<Endpoint>().unwrap().pi_coeff, rat(3, 4));
        assert_eq!("3pi/2".parse::<Endpoint>().unwrap().to_string(), "3pi/2");
        assert_eq!("1/2".parse::<Endpoint>().unwrap(), Endpoint::rational(rat(1, 2)));
        assert_eq!("-1/10+pi".parse::<Endpoint>().unwrap(), Endpoint::new(int(1), rat(-1, 10)));
        assert_eq!("0.25".parse::<Endpoint>().unwrap().offset, rat(1, 4));
        assert_eq!(Endpoint::new(rat(1, 3), rat(-1, 10)).to_string(), "pi/3-1/10");
        assert!("pie".parse::<Endpoint>().is_err());
        assert!("".parse::<Endpoint>().is_err());
        assert!("pi/0".parse::<Endpoint>().is_err());
    }

    #[test]
    fn statement1_at_half_pi() {
        let r = verify_statement1(&Endpoint::half_pi(), p(), 64).unwrap();
        assert_eq!(r.verdict, Verdict::Proved, "{r}");
        let upper = r.enclosure("upper").unwrap();
        let four_over_pi2 = Enclosure::point(int(4)).div(&enc_pi(p()).square()).unwrap();
        assert!(upper.intersects(&four_over_pi2));
        assert!(upper.intersects(&window("0.405284")));
        assert_eq!(r.enclosure("lower").unwrap(), Enclosure::point(rat(3, 8)));
        let end = verify_statement1_endpoint(&Endpoint::half_pi(), p(), 64).unwrap();
        assert_eq!(end.verdict, Verdict::ProvedNonStrictAtEndpoint);
    }

    #[test]
    fn statement1_at_third_pi() {
        // (1 - 1/sqrt3) / (pi^2/9) = 0.385410...
        let r = verify_statement1(&"pi/3".parse().unwrap(), p(), 64).unwrap();
        assert_eq!(r.verdict, Verdict::Proved);
        let pi = enc_pi(p());
        let inv_sqrt3 = enc_sqrt(&Enclosure::point(int(3)), p()).unwrap().recip().unwrap();
        let oracle = (Enclosure::one() - inv_sqrt3).div(&pi.square().scale(&rat(1, 9))).unwrap();
        assert!(r.enclosure("upper").unwrap().intersects(&oracle));
        assert!(r.enclosure("upper").unwrap().intersects(&window("0.385410")));
    }

    #[test]
    fn statement1_near_zero() {
        let r = verify_statement1(&Endpoint::rational(rat(1, 1000)), p(), 64).unwrap();
        assert_eq!(r.verdict, Verdict::Proved);
        let upper = r.enclosure("upper").unwrap();
        assert!(upper.lo() > &rat(3, 8));
        assert!(upper.hi() < &(rat(3, 8) + rat(1, 100_000_000)));
    }

    #[test]
    fn statement1_domain() {
        assert!(matches!(
            verify_statement1(&"pi".parse().unwrap(), p(), 64),
            Err(Error::DomainViolation(_))
        ));
        assert!(matches!(
            verify_statement1(&Endpoint::rational(int(0)), p(), 64),
            Err(Error::DomainViolation(_))
        ));
    }

    #[test]
    fn theorem3_chain_small() {
        let r = verify_theorem3_chain(&Endpoint::half_pi(), &[0, 2], 33, p(), 64).unwrap();
        assert_eq!(r.verdict, Verdict::Proved, "{r}");
        assert_eq!(r.hypothesis("TT_2.top=closed_form"), Some(true));
        assert!(verify_theorem3_chain(&Endpoint::half_pi(), &[0, 3], 33, p(), 64).is_err());
        assert!(verify_theorem3_chain(&Endpoint::half_pi(), &[2, 0], 33, p(), 64).is_err());
        assert!(verify_theorem3_chain(&Endpoint::half_pi(), &[0, 2], 2, p(), 64).is_err());
        assert!(verify_theorem3_chain(&Endpoint::half_pi(), &[0, 8], 5, p(), 8).is_err());
    }

    #[test]
    fn theorem3_single_order_agrees_with_statement1() {
        let chain = verify_theorem3_chain(&Endpoint::half_pi(), &[0], 9, p(), 64).unwrap();
        let s1 = verify_statement1(&Endpoint::half_pi(), p(), 64).unwrap();
        assert_eq!(chain.verdict, s1.verdict);
        assert_eq!(chain.enclosure("statement1.upper"), s1.enclosure("upper"));
    }

    #[test]
    fn ladder_rejects_g() {
        let r = verify_ladder(FunctionId::G, &Endpoint::half_pi(), &[0, 4], 9, &"pi".parse().unwrap(), p(), 16);
        assert!(matches!(r, Err(Error::HypothesisNotCertified(_))));
        let ok = verify_ladder(FunctionId::G1, &Endpoint::half_pi(), &[0, 4], 9, &"pi".parse().unwrap(), p(), 16)
            .unwrap();
        assert_eq!(ok.verdict, Verdict::Proved, "{ok}");
    }

    #[test]
    fn deltas() {
        let (d1, d2) = delta_constants(p()).unwrap();
        assert!(d1.is_subset_of(&window("1.55456")));
        assert!(d2.is_subset_of(&window("0.22525")));
        let (d1_32, _) = delta_constants(Precision::new(32).unwrap()).unwrap();
        assert!(d1.width() < d1_32.width());
    }

    #[test]
    fn remainder_maxima() {
        let tol = rat(1, 1_000_000);
        let (first, second) = f_remainder_maxima(&Endpoint::half_pi(), 3, &tol, p(), 64).unwrap();
        let c = Endpoint::half_pi().enclosure(p());
        assert!(first.argmax.intersects(&c));
        assert!(first.max_value.intersects(&window("0.011008")));
        assert!(second.max_value.intersects(&window("0.003151")));
        assert!(second.argmax.intersects(&window("1.1490")));
        assert!(first.refinement_depth > 0 && first.samples_used > 256);
    }

    #[test]
    fn remainder_of_polynomial_is_zero() {
        let poly = PaperFunction {
            id: FunctionId::F,
            series: PowerSeries::polynomial(vec![int(1), int(2), int(3)]).unwrap(),
            domain_hi: Enclosure::point(int(4)),
            value_at_zero: int(1),
        };
        let tol = rat(1, 1000);
        let r = remainder_max(
            &poly,
            RemainderKind::First,
            5,
            None,
            (&Enclosure::zero(), &Enclosure::point(int(1))),
            &tol,
            p(),
        )
        .unwrap();
        assert_eq!(r.max_value, Enclosure::zero());
    }

    #[test]
    fn remainder_domain() {
        let f = build_f(16).unwrap();
        let tol = rat(1, 1000);
        let beyond = Enclosure::point(int(4));
        assert!(matches!(
            remainder_max(&f, RemainderKind::First, 3, None, (&Enclosure::zero(), &beyond), &tol, p()),
            Err(Error::DomainViolation(_))
        ));
    }

    #[test]
    fn statement2_parts() {
        let cert = verify_statement2_improvement(p(), 64, 16).unwrap();
        for part in cert.parts() {
            assert_eq!(part.verdict, Verdict::Proved, "{part}");
        }
        assert_eq!(cert.combined.verdict, Verdict::Proved);
        let lower = cert.part_c.enclosure("statement2.lower").unwrap();
        assert!(lower.intersects(&window("0.237410")));
    }

    #[test]
    fn report_json_round_trip() {
        let r = verify_statement1(&Endpoint::half_pi(), p(), 32).unwrap();
        let json = r.to_json();
        let back = CertificateReport::from_json(&json).unwrap();
        assert_eq!(back, r);
        assert_eq!(back.to_json(), json);
        let v: serde_json::Value = serde_json::from_str(&json).unwrap();
        let keys: Vec<&str> = v.as_object().unwrap().keys().map(String::as_str).collect();
        assert!(keys.contains(&"precision") && keys.contains(&"truncation"));
        assert_eq!(v["verdict"], "Proved");
    }

    #[test]
    fn escalation_stops_after_three_retries() {
        let mut calls = Vec::new();
        let out = with_escalation(
            Precision::new(16).unwrap(),
            8,
            |p, n| {
                calls.push((p.budget(), n));
                Ok(0)
            },
            |_| false,
        )
        .unwrap();
        assert_eq!(out, 0);
        assert_eq!(calls, vec![(16, 8), (32, 16), (64, 32), (128, 64)]);
        let err = with_escalation(p(), 4, |_, _| Err::<(), _>(Error::NegativeOperand), |_| true);
        assert_eq!(err, Err(Error::NegativeOperand));
    }
}
