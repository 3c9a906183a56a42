//! Acceptance checks. Runs without the libtest harness so every check
//! prints exactly one PASS or FAIL line; exits nonzero if any check fails.

use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use detcore::chio::{chio_det, chio_det_counted, chio_reduce, ChioOptions};
use detcore::dodgson::{condense_with_symbolic_entry, dodgson_det, DodgsonOptions, Stages};
use detcore::field::{eval_at, rational_from_i64};
use detcore::oracle::{adjugate, cauchy_sum_along, det_definition, det_laplace, det_laplace_counted, laplace_along, lemma_corner_check};
use detcore::random::{random_integer_matrix, seeded_rng};
use detcore::samples::{condensable_5x5, singular_interior_5x5};
use detcore::{Axis, BigRational, EpsPolynomial, EpsRational, Field, OpCounter, Pos, SquareMatrix};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn q(v: i64) -> BigRational {
    rational_from_i64(v)
}

fn int_matrix(rows: &[&[i64]]) -> SquareMatrix<BigRational> {
    SquareMatrix::from_rows(rows.iter().map(|r| r.iter().map(|&v| q(v)).collect()).collect()).unwrap()
}

fn check(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn random(seed: u64, stream: u64, n: usize) -> SquareMatrix<BigRational> {
    random_integer_matrix(&mut seeded_rng(seed, stream), n, -9, 9)
}

fn golden_condensation() -> Outcome {
    let a = condensable_5x5();
    let expected = [
        int_matrix(&[&[-3, -6, -2, 4], &[-7, -2, 2, -2], &[-13, -4, 3, -2], &[6, 0, -1, -6]]),
        int_matrix(&[&[12, -8, 2], &[-1, 1, -2], &[8, -4, -10]]),
        int_matrix(&[&[-2, 7], &[1, -6]]),
    ];
    let mut best = Duration::MAX;
    let mut result = None;
    for _ in 0..3 {
        let start = Instant::now();
        let r = dodgson_det(&a, &DodgsonOptions::default()).map_err(|e| e.to_string())?;
        best = best.min(start.elapsed());
        result = Some(r);
    }
    let (value, trace) = result.unwrap();
    let Stages::Exact(stages) = &trace.stages else {
        return Err("trace is symbolic".into());
    };
    for (k, m) in expected.iter().enumerate() {
        check(&stages[k + 1].matrix == m, format!("stage {} differs: {:?}", k + 1, stages[k + 1].matrix.to_text()))?;
    }
    check(!trace.repaired(), "unexpected repair")?;
    check(value == q(5), format!("value {value}"))?;
    check(best < Duration::from_millis(10), format!("took {best:?}"))?;
    Ok(format!("value 5 in {best:?}"))
}

fn symbolic_entry() -> Outcome {
    let a = singular_interior_5x5();
    let (poly, _) = condense_with_symbolic_entry(&a, Pos::new(3, 3)).map_err(|e| e.to_string())?;
    let expected = EpsRational::from_poly(EpsPolynomial::from_i64s(&[30, -15]));
    check(poly == expected, format!("polynomial {poly}"))?;
    let at_one = eval_at(&poly, &q(1)).map_err(|e| e.to_string())?;
    check(at_one == q(15), format!("value at e=1: {at_one}"))?;
    Ok(format!("{poly}, 15 at e=1"))
}

fn forced_pivot_chain() -> Outcome {
    let options = ChioOptions {
        forced_pivots: vec![Pos::new(2, 1), Pos::new(4, 4), Pos::new(2, 2)],
        ..ChioOptions::default()
    };
    let (value, trace) = chio_det(&condensable_5x5(), &options).map_err(|e| e.to_string())?;
    let expected = [
        int_matrix(&[&[-3, 0, 1, 2], &[-7, 4, -5, -1], &[-9, 5, -6, 0], &[3, -1, 1, 3]]),
        int_matrix(&[&[-15, 2, 1], &[-18, 11, -14], &[-27, 15, -18]]),
        int_matrix(&[&[-129, -39], &[27, 12]]),
    ];
    for (k, m) in expected.iter().enumerate() {
        check(&trace.stages[k + 1].matrix == m, format!("stage {} differs", k + 1))?;
    }
    check(trace.final_z == q(-495), format!("Z = {}", trace.final_z))?;
    check(trace.divisor == q(-99), format!("divisor = {}", trace.divisor))?;
    check(value == q(5), format!("value = {value}"))?;
    Ok("Z=-495 divisor=-99 value=5".into())
}

fn four_methods_agree() -> Outcome {
    let start = Instant::now();
    for i in 0..500 {
        let a = random(1, i, 5);
        let d = dodgson_det(&a, &DodgsonOptions::default()).map_err(|e| e.to_string())?.0;
        let c = chio_det(&a, &ChioOptions::default()).map_err(|e| e.to_string())?.0;
        let l = det_laplace(&a);
        let p = det_definition(&a).map_err(|e| e.to_string())?;
        check(d == c && c == l && l == p, format!("matrix {i}: {d} {c} {l} {p}"))?;
    }
    let took = start.elapsed();
    check(took < Duration::from_secs(60), format!("took {took:?}"))?;
    Ok(format!("500 matrices in {took:?}"))
}

fn corner_lemma() -> Outcome {
    for n in 3..=6 {
        for i in 0..200 {
            let (lhs, rhs) = lemma_corner_check(&random(2, (n << 16) as u64 | i, n)).map_err(|e| e.to_string())?;
            check(lhs == rhs, format!("n={n} matrix {i}"))?;
        }
    }
    Ok("800 matrices, n = 3..6".into())
}

fn scaling_identity() -> Outcome {
    let mut pivots = 0;
    for n in 3..=5usize {
        for i in 0..100 {
            let a = random(3, (n << 16) as u64 | i, n);
            let d = det_laplace(&a);
            for r in 1..=n {
                for s in 1..=n {
                    let p = a.at(r - 1, s - 1);
                    if p.is_zero() {
                        continue;
                    }
                    let reduced = chio_reduce(&a, Pos::new(r, s)).map_err(|e| e.to_string())?;
                    let scale = (0..n - 2).fold(q(1), |acc, _| acc * p);
                    check(det_laplace(&reduced) == scale * &d, format!("n={n} matrix {i} pivot ({r},{s})"))?;
                    pivots += 1;
                }
            }
        }
    }
    Ok(format!("{pivots} pivots over 300 matrices"))
}

fn classical_identities() -> Outcome {
    for n in 2..=5usize {
        for i in 0..100 {
            let a = random(4, (n << 16) as u64 | i, n);
            let d = det_laplace(&a);
            for axis in [Axis::Rows, Axis::Columns] {
                for t in 1..=n {
                    check(laplace_along(&a, axis, t).ok() == Some(d.clone()), format!("n={n} matrix {i} {axis} {t}"))?;
                    for l in (1..=n).filter(|&l| l != t) {
                        let s = cauchy_sum_along(&a, axis, t, l).map_err(|e| e.to_string())?;
                        check(s.is_zero(), format!("alien sum n={n} matrix {i}"))?;
                    }
                }
            }
            let adj = det_laplace(&adjugate(&a).map_err(|e| e.to_string())?);
            let power = (0..n - 1).fold(q(1), |acc, _| acc * &d);
            check(adj == power, format!("det(adj) n={n} matrix {i}"))?;
        }
    }
    Ok("400 matrices, n = 2..5".into())
}

fn operation_counts() -> Outcome {
    let a10 = random(5, 10, 10);
    let (_, trace) = chio_det(&a10, &ChioOptions::default()).map_err(|e| e.to_string())?;
    let stage_muls = trace.reduction_ops().muls;
    check(stage_muls == 568, format!("chio n=10: {stage_muls} stage multiplications"))?;

    let a8 = random(5, 8, 8);
    let chio_ops = OpCounter::new();
    chio_det_counted(&a8, &ChioOptions::default(), &chio_ops).map_err(|e| e.to_string())?;
    let laplace_ops = OpCounter::new();
    det_laplace_counted(&a8, &laplace_ops);
    let (c, l) = (chio_ops.counts().muls, laplace_ops.counts().muls);
    check(l > c, format!("n=8: laplace {l} vs chio {c}"))?;
    Ok(format!("n=10 stage muls 568; n=8 laplace {l} > chio {c}"))
}

fn selftest_determinism() -> Outcome {
    let run = || {
        Command::new(env!("CARGO_BIN_EXE_det"))
            .args(["selftest", "--seed", "42"])
            .output()
            .map_err(|e| e.to_string())
    };
    let (a, b) = (run()?, run()?);
    check(a.status.success(), format!("exit status {}", a.status))?;
    check(!a.stdout.is_empty() && a.stdout == b.stdout, "reports differ")?;
    Ok(format!("{} identical bytes", a.stdout.len()))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("golden condensation trace", golden_condensation),
        ("symbolic entry on singular interior", symbolic_entry),
        ("forced-pivot reduction chain", forced_pivot_chain),
        ("four methods agree on 500 matrices", four_methods_agree),
        ("corner lemma", corner_lemma),
        ("pivot scaling identity", scaling_identity),
        ("expansion, alien cofactors, adjugate", classical_identities),
        ("operation counts", operation_counts),
        ("selftest determinism", selftest_determinism),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        match f() {
            Ok(detail) => println!("PASS {} {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {} {name}: {why}", i + 1);
            }
        }
    }
    println!("{} of {} acceptance checks passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
