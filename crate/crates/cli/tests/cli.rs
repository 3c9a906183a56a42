use std::io::Write;
use std::process::{Command, Output, Stdio};

use det_cli::eval::{run_eval, EvalRequest, JsonReport, Method, OutputFormat};
use detcore::chio::chio_reduce;
use detcore::dodgson::condense_once;
use detcore::field::parse_rational;
use detcore::samples::{CONDENSABLE_5X5, SINGULAR_INTERIOR_5X5};
use detcore::{BigRational, EpsRational, Field, Pos, SquareMatrix};

fn det(args: &[&str], stdin: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_det"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(stdin.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn condensation_trace_from_stdin() {
    let o = det(&["eval", "--input", "-", "--method", "dodgson", "--trace"], CONDENSABLE_5X5);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    let chunks: Vec<&str> = out.split("=>\n").collect();
    assert_eq!(chunks.len(), 5);
    assert_eq!(chunks[1], "-3 -6 -2 4\n-7 -2 2 -2\n-13 -4 3 -2\n6 0 -1 -6\n");
    assert_eq!(chunks[2], "12 -8 2\n-1 1 -2\n8 -4 -10\n");
    assert_eq!(chunks[3], "-2 7\n1 -6\n");
    assert_eq!(chunks[4], "5\n");
}

#[test]
fn forced_pivot_trace() {
    let o = det(
        &["eval", "--input", "-", "--method", "chio", "--trace", "--forced-pivots", "2,1;4,4;2,2"],
        CONDENSABLE_5X5,
    );
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).ends_with("Z=-495 divisor=-99 value=5\n"));
}

#[test]
fn symbolic_entry_output() {
    let o = det(&["eval", "--input", "-", "--symbolic-entry", "3,3"], SINGULAR_INTERIOR_5X5);
    assert_eq!(stdout(&o), "30 - 15*e\nvalue at e=1: 15\n");
}

#[test]
fn inline_text_and_verify() {
    let o = det(&["eval", "--text", "-1 2;3 4", "--method", "laplace", "--verify"], "");
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "-10\n");
}

#[test]
fn exit_codes() {
    assert_eq!(det(&["eval", "--input", "-"], "1 2\n3\n").status.code(), Some(1));
    assert_eq!(det(&["eval", "--input", "-"], "1 x\n3 4\n").status.code(), Some(1));
    assert_eq!(det(&["eval", "--input", "/no/such/file"], "").status.code(), Some(1));
    assert_eq!(det(&["eval", "--input", "-", "--bogus"], "").status.code(), Some(1));
    assert_eq!(
        det(&["eval", "--input", "-", "--method", "laplace", "--forced-pivots", "1,1"], "1 0 0\n0 1 0\n0 0 1\n")
            .status
            .code(),
        Some(1)
    );
    assert_eq!(
        det(&["eval", "--input", "-", "--method", "chio", "--symbolic-entry", "1,1"], "1 0 0\n0 1 0\n0 0 1\n")
            .status
            .code(),
        Some(1)
    );
    assert_eq!(
        det(&["eval", "--input", "-", "--method", "chio", "--forced-pivots", "1,2"], "1 0 0\n0 1 0\n0 0 1\n")
            .status
            .code(),
        Some(1)
    );
    assert_eq!(det(&["--help"], "").status.code(), Some(0));
    assert_eq!(det(&["bench", "--out", "/no/such/dir/out.csv", "--orders", "1..2"], "").status.code(), Some(1));
    assert_eq!(det(&["bench", "--out", "/tmp/x.csv", "--orders", "1..13"], "").status.code(), Some(1));
}

#[test]
fn bench_writes_csv() {
    let dir = std::env::temp_dir().join(format!("det-bench-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("out.csv");
    let args = ["bench", "--orders", "2..4", "--samples", "2", "--entry-range", "-3..3", "--seed", "5"];
    let o = det(&[&args[..], &["--out", path.to_str().unwrap()]].concat(), "");
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let csv = std::fs::read_to_string(&path).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("method,n,sample,adds,subs,muls,divs,fallback,micros"));
    assert_eq!(lines.count(), 3 * 2 * 4);
    let again = det(&[&args[..], &["--out", path.to_str().unwrap()]].concat(), "");
    assert_eq!(stdout(&o), stdout(&again));
    std::fs::remove_dir_all(&dir).unwrap();
}

fn parse_stage<F: Field>(rows: &[Vec<String>], parse: impl Fn(&str) -> F) -> SquareMatrix<F> {
    SquareMatrix::from_rows(rows.iter().map(|r| r.iter().map(|t| parse(t)).collect()).collect()).unwrap()
}

fn replay_condensation<F: Field>(stages: &[SquareMatrix<F>]) {
    for k in 1..stages.len() {
        let prev = if k >= 2 { Some(&stages[k - 2]) } else { None };
        assert_eq!(condense_once(&stages[k - 1], prev).unwrap(), stages[k], "stage {k}");
    }
}

fn report(text: &str, method: Method, configure: impl FnOnce(&mut EvalRequest)) -> JsonReport {
    let mut req = EvalRequest::new(text, method);
    req.output = OutputFormat::Json;
    configure(&mut req);
    serde_json::from_str(&run_eval(&req).unwrap()).unwrap()
}

fn rational(t: &str) -> BigRational {
    parse_rational(t, 0).unwrap()
}

#[test]
fn json_condensation_replays() {
    let r = report(CONDENSABLE_5X5, Method::Dodgson, |_| {});
    let stages: Vec<_> = r.stages.iter().map(|s| parse_stage(s, rational)).collect();
    replay_condensation(&stages);
    assert_eq!(stages.last().unwrap().at(0, 0), &rational(&r.value));
    assert_eq!(r.epsilon_polynomial, None);
}

#[test]
fn json_symbolic_replays() {
    let r = report(SINGULAR_INTERIOR_5X5, Method::Dodgson, |req| req.symbolic_entry = Some(Pos::new(3, 3)));
    let stages: Vec<_> = r.stages.iter().map(|s| parse_stage(s, |t| EpsRational::parse(t).unwrap())).collect();
    replay_condensation(&stages);
    assert_eq!(r.epsilon_polynomial.as_deref(), Some("30-15e"));
    assert_eq!(stages.last().unwrap().at(0, 0).to_compact(), "30-15e");
    assert_eq!(r.value, "15");
}

#[test]
fn json_perturbation_replays() {
    let r = report("1 0 0 0\n0 1 0 0\n0 0 1 0\n0 0 0 1\n", Method::Dodgson, |_| {});
    assert!(!r.perturbations.is_empty());
    assert!(r.perturbations.iter().all(|p| p.mode == "add" && p.coefficient.is_some()));
    let stages: Vec<_> = r.stages.iter().map(|s| parse_stage(s, |t| EpsRational::parse(t).unwrap())).collect();
    replay_condensation(&stages);
    assert_eq!(r.value, "1");
}

#[test]
fn json_chio_replays() {
    let r = report(CONDENSABLE_5X5, Method::Chio, |req| {
        req.forced_pivots = vec![Pos::new(2, 1), Pos::new(4, 4), Pos::new(2, 2)];
    });
    let stages: Vec<_> = r.stages.iter().map(|s| parse_stage(s, rational)).collect();
    assert_eq!(r.pivots.len(), 3);
    for p in &r.pivots {
        let m = &stages[p.stage];
        assert_eq!(m.get(Pos::new(p.r, p.s)).unwrap(), &rational(&p.value));
        assert_eq!(chio_reduce(m, Pos::new(p.r, p.s)).unwrap(), stages[p.stage + 1]);
    }
    let z = stages.last().unwrap().at(0, 0).clone();
    let divisor = rational(r.divisor.as_deref().unwrap());
    assert_eq!(z, rational("-495"));
    assert_eq!(divisor, rational("-99"));
    assert_eq!(z / divisor, rational(&r.value));
}

#[test]
fn selftest_reports_every_suite() {
    let o = det(&["selftest", "--seed", "1", "--sizes", "1..3"], "");
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.starts_with("selftest seed=1 sizes=1,2,3\n"));
    assert!(out.ends_with("16 suites, 16 passed, 0 failed\n"), "{out}");
}
