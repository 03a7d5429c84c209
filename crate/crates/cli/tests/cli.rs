use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

fn semifact(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_semifact"))
        .args(args)
        .output()
        .expect("running semifact")
}

fn stdout_of(args: &[&str]) -> String {
    let out = semifact(args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn scratch(name: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR"));
    dir.join(name)
}

#[test]
fn factor_lists_in_descending_order() {
    let out = stdout_of(&["factor", "--gens", "2,3", "--n", "6", "--algo", "lex-memo", "--memo-dim", "1"]);
    assert_eq!(out, "3 0\n0 2\n");
}

#[test]
fn factor_counts() {
    let out = stdout_of(&["factor", "--gens", "13,37,38", "--n", "100000", "--algo", "dp", "--count"]);
    assert_eq!(out, "273793\n");
    let out = stdout_of(&["factor", "--gens", "2,3", "--n", "1", "--algo", "dp", "--count"]);
    assert_eq!(out, "0\n");
}

#[test]
fn list_output_is_identical_across_algorithms() {
    let cases: [(&str, &str); 4] = [("6,9,20", "120"), ("3,5,7,11", "60"), ("13,37,38,40", "400"), ("4,6", "49")];
    for (gens, n) in cases {
        let reference = stdout_of(&["factor", "--gens", gens, "--n", n, "--algo", "brute"]);
        let d = gens.split(',').count();
        for algo in ["dp", "dp-parallel-fac", "dp-parallel-elem", "lex"] {
            let out = stdout_of(&["factor", "--gens", gens, "--n", n, "--algo", algo, "--workers", "3"]);
            assert_eq!(out, reference, "{algo} on {gens} / {n}");
        }
        for k in 1..d {
            let k = k.to_string();
            let out = stdout_of(&[
                "factor", "--gens", gens, "--n", n, "--algo", "lex-memo", "--memo-dim", &k, "--workers", "2",
                "--rebalance-every", "2",
            ]);
            assert_eq!(out, reference, "lex-memo k={k} on {gens} / {n}");
        }
    }
}

#[test]
fn factor_writes_to_a_file() {
    let path = scratch("factor_out.txt");
    stdout_of(&["factor", "--gens", "6,9,20", "--n", "24", "--out", path.to_str().unwrap()]);
    assert_eq!(fs::read_to_string(path).unwrap(), "4 0 0\n1 2 0\n");
}

#[test]
fn report_prints_a_bench_row() {
    let out = stdout_of(&[
        "factor", "--gens", "13,37,38,40", "--n", "5000", "--algo", "lex-memo", "--memo-dim", "2", "--report",
    ]);
    let mut lines = out.lines();
    assert_eq!(lines.next(), Some("dim,memo_dim,element,num_results,cpu_memo_us,par_memo_us,runtime_ms"));
    let row: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(&row[..4], ["4", "2", "5000", "29601"]);
    assert_eq!(lines.next(), None);
}

#[test]
fn invalid_input_fails_with_a_diagnostic() {
    let bad: [&[&str]; 5] = [
        &["factor", "--gens", "2,x", "--n", "6"],
        &["factor", "--gens", "2,3", "--n", "6", "--algo", "lex-memo", "--memo-dim", "2"],
        &["factor", "--gens", "2,3", "--n", "6", "--algo", "lex-memo"],
        &["factor", "--gens", "2,3", "--n", "6", "--algo", "dp", "--memo-dim", "1"],
        &["factor", "--gens", "5,7", "--n", "6", "--algo", "quantum"],
    ];
    for args in bad {
        let out = semifact(args);
        assert!(!out.status.success(), "{args:?}");
        assert!(!out.stderr.is_empty(), "{args:?}");
    }
}

#[test]
fn apery_tables() {
    let out = stdout_of(&["apery", "--gens", "6,9,20"]);
    assert_eq!(out, "0:0\n1:49\n2:20\n3:9\n4:40\n5:29\nfrobenius:43\n");
    assert_eq!(stdout_of(&["apery", "--gens", "2,3"]), "0:0\n1:3\nfrobenius:1\n");
    assert_eq!(stdout_of(&["apery", "--gens", "2,4"]), "0:0\n1:unreachable\nfrobenius:none\n");
}

#[test]
fn bench_runs_spec_rows() {
    let spec = scratch("spec.csv");
    fs::write(
        &spec,
        "gens,element,algo,memo_dim,workers\n\
         \"13,37,38,40,41\",1000,lex-memo,2,2\n\
         \"13,37,38,40,41\",3000,lex-memo,2,1\n\
         \"13,37,38\",1000,lex-memo,5,1\n\
         \"13,37,38,40\",5000,dp,,\n",
    )
    .unwrap();
    let out = stdout_of(&["bench", spec.to_str().unwrap()]);
    let counts: Vec<&str> = out.lines().skip(1).map(|l| l.split(',').nth(3).unwrap()).collect();
    assert_eq!(counts, ["1920", "125780", "-1", "29601"]);
}

#[test]
fn empty_bench_spec_prints_the_header() {
    let spec = scratch("empty.csv");
    fs::write(&spec, "").unwrap();
    let out = stdout_of(&["bench", spec.to_str().unwrap()]);
    assert_eq!(out, "dim,memo_dim,element,num_results,cpu_memo_us,par_memo_us,runtime_ms\n");
}

#[test]
fn malformed_bench_spec_fails() {
    let spec = scratch("bad.csv");
    fs::write(&spec, "generators,n\n1,2\n").unwrap();
    let out = semifact(&["bench", spec.to_str().unwrap()]);
    assert!(!out.status.success());
    let out = semifact(&["bench", "/nonexistent/spec.csv"]);
    assert!(!out.status.success());
}
