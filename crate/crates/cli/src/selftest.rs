//! Seeded identity suites with a reproducible report.

use std::fmt::Write as _;

use detcore::chio::{chio_det, chio_det_counted, chio_reduce, ChioOptions, PivotPolicy};
use detcore::dodgson::{condense_with_symbolic_entry, dodgson_det, DodgsonOptions};
use detcore::field::{eval_at, poly_gcd, rational_from_i64};
use detcore::matrix::{cyclic_shift, parse_matrix};
use detcore::oracle::{
    adjugate, cauchy_sum_along, det_definition, det_laplace, laplace_along, lemma_corner_check,
    DEFINITION_MAX_ORDER,
};
use detcore::random::{random_integer_matrix, seeded_rng};
use detcore::{Axis, BigRational, EpsPolynomial, EpsRational, Error, Field, OpCounter, Pos, SquareMatrix};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::bench::LAPLACE_MAX_ORDER;
use crate::error::{CliError, CliResult};

pub const CASES_PER_SIZE: usize = 50;
pub const MAX_SIZE: usize = 12;
pub const DEFAULT_SIZES: [usize; 5] = [1, 2, 3, 4, 5];

type Check = fn(&mut ChaCha8Rng, usize) -> Result<(), String>;

struct Suite {
    name: &'static str,
    orders: (usize, usize),
    check: Check,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuiteResult {
    pub name: &'static str,
    pub cases: usize,
    pub failures: usize,
    pub first_failure: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Report {
    pub seed: u64,
    pub sizes: Vec<usize>,
    pub suites: Vec<SuiteResult>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.suites.iter().all(|s| s.failures == 0)
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        let sizes: Vec<String> = self.sizes.iter().map(usize::to_string).collect();
        let _ = writeln!(out, "selftest seed={} sizes={}", self.seed, sizes.join(","));
        for s in &self.suites {
            let status = match (s.cases, s.failures) {
                (0, _) => "skip",
                (_, 0) => "ok",
                _ => "FAIL",
            };
            let _ = writeln!(out, "{status:<5}{:<24}{:>6} cases {:>4} failed", s.name, s.cases, s.failures);
            if let Some(f) = &s.first_failure {
                let _ = writeln!(out, "     first failure: {f}");
            }
        }
        let failed = self.suites.iter().filter(|s| s.failures > 0).count();
        let _ = writeln!(
            out,
            "{} suites, {} passed, {failed} failed",
            self.suites.len(),
            self.suites.len() - failed
        );
        out
    }
}

fn q(v: i64) -> BigRational {
    rational_from_i64(v)
}

fn matrix(rng: &mut ChaCha8Rng, n: usize, lo: i64, hi: i64) -> SquareMatrix<BigRational> {
    random_integer_matrix(rng, n, lo, hi)
}

fn rational(rng: &mut ChaCha8Rng) -> BigRational {
    BigRational::new(rng.gen_range(-30i64..=30).into(), rng.gen_range(1i64..=9).into())
}

fn polynomial(rng: &mut ChaCha8Rng, max_degree: usize) -> EpsPolynomial {
    let len = rng.gen_range(0..=max_degree + 1);
    let coeffs: Vec<i64> = (0..len).map(|_| rng.gen_range(-5..=5)).collect();
    EpsPolynomial::from_i64s(&coeffs)
}

fn eps_rational(rng: &mut ChaCha8Rng) -> EpsRational {
    let num = polynomial(rng, 3);
    let mut den = polynomial(rng, 2);
    while den.is_zero() {
        den = polynomial(rng, 2);
    }
    EpsRational::new(num, den).expect("nonzero denominator")
}

fn expect_eq<T: PartialEq + std::fmt::Debug>(what: &str, got: T, want: T) -> Result<(), String> {
    if got == want {
        Ok(())
    } else {
        Err(format!("{what}: got {got:?}, expected {want:?}"))
    }
}

fn field_axioms<F: Field>(a: &F, b: &F, c: &F) -> Result<(), String> {
    expect_eq("associative +", a.plus(&b.plus(c)), a.plus(b).plus(c))?;
    expect_eq("associative *", a.times(&b.times(c)), a.times(b).times(c))?;
    expect_eq("commutative *", a.times(b), b.times(a))?;
    expect_eq("distributive", a.times(&b.plus(c)), a.times(b).plus(&a.times(c)))?;
    expect_eq("subtraction", a.minus(b), a.plus(&b.negate()))?;
    if !b.is_zero() {
        let quotient = a.try_div(b).map_err(|e| e.to_string())?;
        expect_eq("division", quotient.times(b), a.clone())?;
        if !quotient.is_canonical() {
            return Err(format!("{quotient:?} is not canonical"));
        }
    }
    for x in [a.plus(b), a.times(b)] {
        if !x.is_canonical() {
            return Err(format!("{x:?} is not canonical"));
        }
    }
    Ok(())
}

fn rational_field(rng: &mut ChaCha8Rng, _: usize) -> Result<(), String> {
    let (a, b, c) = (rational(rng), rational(rng), rational(rng));
    field_axioms(&a, &b, &c)
}

fn epsilon_field(rng: &mut ChaCha8Rng, _: usize) -> Result<(), String> {
    let (a, b, c) = (eps_rational(rng), eps_rational(rng), eps_rational(rng));
    field_axioms(&a, &b, &c)?;
    expect_eq("compact round trip", EpsRational::parse(&a.to_compact()).ok(), Some(a.clone()))
}

fn polynomial_gcd(rng: &mut ChaCha8Rng, _: usize) -> Result<(), String> {
    let common = polynomial(rng, 3);
    let a = common.mul(&polynomial(rng, 3));
    let b = common.mul(&polynomial(rng, 3));
    if a.is_zero() && b.is_zero() {
        return expect_eq("both zero", poly_gcd(&a, &b).err(), Some(Error::BothZero));
    }
    let g = poly_gcd(&a, &b).map_err(|e| e.to_string())?;
    let divides = |p: &EpsPolynomial, d: &EpsPolynomial| p.div_rem(d).is_ok_and(|(_, r)| r.is_zero());
    if !divides(&a, &g) || !divides(&b, &g) || (!common.is_zero() && !divides(&g, &common.monic())) {
        return Err(format!("gcd({a}, {b}) = {g} fails divisibility"));
    }
    Ok(())
}

fn text_round_trip(rng: &mut ChaCha8Rng, n: usize) -> Result<(), String> {
    let a = SquareMatrix::from_fn(n, |_, _| rational(rng));
    expect_eq("parse(to_text)", parse_matrix(&a.to_text()).ok(), Some(a))
}

fn shift_sign(rng: &mut ChaCha8Rng, n: usize) -> Result<(), String> {
    let a = matrix(rng, n, -9, 9);
    let d = det_definition(&a).map_err(|e| e.to_string())?;
    for axis in [Axis::Rows, Axis::Columns] {
        let k = rng.gen_range(-(n as i64)..=n as i64);
        let (shifted, sign) = cyclic_shift(&a, axis, k);
        expect_eq("shifted determinant", det_definition(&shifted).ok(), Some(sign.apply(&d)))?;
    }
    Ok(())
}

fn definition_vs_laplace(rng: &mut ChaCha8Rng, n: usize) -> Result<(), String> {
    let a = matrix(rng, n, -9, 9);
    expect_eq("definition", det_definition(&a).ok(), Some(det_laplace(&a)))
}

fn methods_agree(rng: &mut ChaCha8Rng, n: usize) -> Result<(), String> {
    let a = matrix(rng, n, -9, 9);
    let seed = rng.gen();
    let d = dodgson_det(&a, &DodgsonOptions { seed }).map_err(|e| e.to_string())?.0;
    for policy in [PivotPolicy::MaxMagnitude, PivotPolicy::FirstNonzero] {
        let options = ChioOptions {
            policy,
            forced_pivots: Vec::new(),
        };
        let c = chio_det(&a, &options).map_err(|e| e.to_string())?.0;
        expect_eq("chio vs dodgson", c, d.clone())?;
    }
    if n <= LAPLACE_MAX_ORDER {
        expect_eq("laplace vs dodgson", det_laplace(&a), d.clone())?;
    }
    if n <= DEFINITION_MAX_ORDER {
        expect_eq("definition vs dodgson", det_definition(&a).ok(), Some(d))?;
    }
    Ok(())
}

fn laplace_lines(rng: &mut ChaCha8Rng, n: usize) -> Result<(), String> {
    let a = matrix(rng, n, -9, 9);
    let d = det_laplace(&a);
    for axis in [Axis::Rows, Axis::Columns] {
        for t in 1..=n {
            expect_eq("expansion", laplace_along(&a, axis, t).ok(), Some(d.clone()))?;
        }
    }
    Ok(())
}

fn alien_cofactors(rng: &mut ChaCha8Rng, n: usize) -> Result<(), String> {
    let a = matrix(rng, n, -9, 9);
    for axis in [Axis::Rows, Axis::Columns] {
        for k in 1..=n {
            for l in (1..=n).filter(|&l| l != k) {
                expect_eq("alien sum", cauchy_sum_along(&a, axis, k, l).ok(), Some(q(0)))?;
            }
        }
    }
    Ok(())
}

fn adjugate_power(rng: &mut ChaCha8Rng, n: usize) -> Result<(), String> {
    let a = matrix(rng, n, -9, 9);
    let adj = adjugate(&a).map_err(|e| e.to_string())?;
    expect_eq("det(adj)", det_laplace(&adj), num_power(&det_laplace(&a), n - 1))
}

fn num_power(x: &BigRational, k: usize) -> BigRational {
    (0..k).fold(q(1), |acc, _| acc * x)
}

fn corner_lemma(rng: &mut ChaCha8Rng, n: usize) -> Result<(), String> {
    let a = matrix(rng, n, -9, 9);
    let (lhs, rhs) = lemma_corner_check(&a).map_err(|e| e.to_string())?;
    expect_eq("lemma", lhs, rhs)
}

fn chio_scaling(rng: &mut ChaCha8Rng, n: usize) -> Result<(), String> {
    let a = matrix(rng, n, -9, 9);
    let d = det_laplace(&a);
    for r in 1..=n {
        for s in 1..=n {
            let pivot = a.at(r - 1, s - 1);
            if pivot.is_zero() {
                continue;
            }
            let reduced = chio_reduce(&a, Pos::new(r, s)).map_err(|e| e.to_string())?;
            expect_eq("scaled determinant", det_laplace(&reduced), num_power(pivot, n - 2) * &d)?;
        }
    }
    Ok(())
}

fn deferred_division(rng: &mut ChaCha8Rng, n: usize) -> Result<(), String> {
    let a = matrix(rng, n, -9, 9);
    let (value, trace) = chio_det(&a, &ChioOptions::default()).map_err(|e| e.to_string())?;
    expect_eq("value * divisor", value.times(&trace.divisor), trace.final_z)
}

fn symbolic_entry(rng: &mut ChaCha8Rng, n: usize) -> Result<(), String> {
    let a = matrix(rng, n, -9, 9);
    let pos = Pos::new(rng.gen_range(1..=n), rng.gen_range(1..=n));
    match condense_with_symbolic_entry(&a, pos) {
        Ok((poly, _)) => {
            let degree = poly.as_polynomial().and_then(EpsPolynomial::degree).unwrap_or(0);
            if degree > 1 {
                return Err(format!("degree {degree} at {pos}"));
            }
            let point = a.at(pos.row - 1, pos.col - 1);
            expect_eq("restored value", eval_at(&poly, point).ok(), Some(det_laplace(&a)))
        }
        Err(Error::SymbolicZeroDivisor { .. }) => Ok(()),
        Err(e) => Err(e.to_string()),
    }
}

fn repairs(rng: &mut ChaCha8Rng, n: usize) -> Result<(), String> {
    let a = matrix(rng, n, -1, 1);
    let seed = rng.gen();
    let (value, _) = dodgson_det(&a, &DodgsonOptions { seed }).map_err(|e| e.to_string())?;
    expect_eq("repaired value", value, det_laplace(&a))
}

fn stage_multiplications(rng: &mut ChaCha8Rng, n: usize) -> Result<(), String> {
    let a = matrix(rng, n, 1, 9);
    let ops = OpCounter::new();
    let (_, trace) = chio_det_counted(&a, &ChioOptions::default(), &ops).map_err(|e| e.to_string())?;
    let expected: u64 = (2..n as u64).map(|m| 2 * m * m).sum();
    expect_eq("reduction multiplications", trace.reduction_ops().muls, expected)
}

fn suites() -> Vec<Suite> {
    vec![
        Suite { name: "rational-field", orders: (1, MAX_SIZE), check: rational_field },
        Suite { name: "epsilon-field", orders: (1, MAX_SIZE), check: epsilon_field },
        Suite { name: "polynomial-gcd", orders: (1, MAX_SIZE), check: polynomial_gcd },
        Suite { name: "text-round-trip", orders: (1, MAX_SIZE), check: text_round_trip },
        Suite { name: "shift-sign", orders: (1, DEFINITION_MAX_ORDER), check: shift_sign },
        Suite { name: "definition-vs-laplace", orders: (1, 7), check: definition_vs_laplace },
        Suite { name: "methods-agree", orders: (1, MAX_SIZE), check: methods_agree },
        Suite { name: "laplace-every-line", orders: (1, 7), check: laplace_lines },
        Suite { name: "alien-cofactors", orders: (2, 7), check: alien_cofactors },
        Suite { name: "adjugate-power", orders: (2, 6), check: adjugate_power },
        Suite { name: "corner-lemma", orders: (3, 8), check: corner_lemma },
        Suite { name: "chio-scaling", orders: (3, 6), check: chio_scaling },
        Suite { name: "deferred-division", orders: (3, MAX_SIZE), check: deferred_division },
        Suite { name: "symbolic-entry", orders: (3, 9), check: symbolic_entry },
        Suite { name: "repairs-preserve-value", orders: (3, 8), check: repairs },
        Suite { name: "stage-multiplications", orders: (3, MAX_SIZE), check: stage_multiplications },
    ]
}

/// Runs every suite at every applicable size in `sizes`. Each (suite, size)
/// pair draws from its own generator stream, so results do not depend on
/// which other sizes are requested.
pub fn run_selftest(seed: u64, sizes: &[usize]) -> CliResult<Report> {
    if let Some(&bad) = sizes.iter().find(|&&n| n == 0 || n > MAX_SIZE) {
        return Err(CliError::Usage(format!("sizes must lie within 1..{MAX_SIZE}, got {bad}")));
    }
    let mut sizes = sizes.to_vec();
    sizes.sort_unstable();
    sizes.dedup();

    let mut results = Vec::new();
    for (index, suite) in suites().into_iter().enumerate() {
        let mut result = SuiteResult {
            name: suite.name,
            cases: 0,
            failures: 0,
            first_failure: None,
        };
        for &n in sizes.iter().filter(|&&n| n >= suite.orders.0 && n <= suite.orders.1) {
            let mut rng = seeded_rng(seed, ((index as u64) << 32) | n as u64);
            for case in 0..CASES_PER_SIZE {
                result.cases += 1;
                if let Err(msg) = (suite.check)(&mut rng, n) {
                    result.failures += 1;
                    result.first_failure.get_or_insert_with(|| format!("n={n} case {case}: {msg}"));
                }
            }
        }
        results.push(result);
    }
    Ok(Report {
        seed,
        sizes,
        suites: results,
    })
}

/// Parses `"1,2,5"` or `"1..5"` or a mix such as `"1..3,6"`.
pub fn parse_sizes(text: &str) -> CliResult<Vec<usize>> {
    let mut out = Vec::new();
    for part in text.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let (a, b) = crate::bench::parse_range::<usize>(part)?;
        out.extend(a..=b);
    }
    if out.is_empty() {
        return Err(CliError::Usage("no sizes given".into()));
    }
    Ok(out)
}
