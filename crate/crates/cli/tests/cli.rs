use std::path::PathBuf;
use std::process::{Command, Output};

fn golden(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_upcheck")).args(args).output().unwrap()
}

fn stdout(args: &[&str]) -> String {
    let out = run(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn scratch(name: &str, text: &str) -> String {
    let p = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name);
    std::fs::write(&p, text).unwrap();
    p.display().to_string()
}

#[test]
fn seq_toy() {
    // independent i128 recurrence: U_{i+3} = 12U_{i+2} + 6U_{i+1} + 12U_i
    let mut u: Vec<i128> = vec![1, 13, 163];
    while u.len() < 7 {
        let n = u.len();
        u.push(12 * u[n - 1] + 6 * u[n - 2] + 12 * u[n - 3]);
    }
    let want: Vec<String> = u.iter().map(|x| x.to_string()).collect();
    assert_eq!(stdout(&["seq", "--system", "toy", "-n", "6"]).trim(), want.join(" "));
}

#[test]
fn zeta_outputs() {
    assert_eq!(stdout(&["zeta", "--precision", "50"]).lines().next(), Some("660098850944665"));
    let golden_text = std::fs::read_to_string(golden("zeta50.machine")).unwrap();
    assert_eq!(stdout(&["--format", "machine", "zeta"]), golden_text);
}

#[test]
fn rep_and_val() {
    // 100 = 89 + 8 + 3
    assert_eq!(stdout(&["--system", "fib", "rep", "100"]).trim(), "1000010100");
    assert_eq!(stdout(&["--system", "fib", "val", "1000010100"]).trim(), "100");
    assert_eq!(stdout(&["--system", "fib", "rep", "3", "--padded", "6"]).trim(), "000100");
    assert_eq!(stdout(&["--system", "toy", "rep", "14"]).trim(), "1.1");
    assert_eq!(stdout(&["--system", "toy", "val", "12.0"]).trim(), "156");
}

#[test]
fn decide_congruence_fixture() {
    let dfa = golden("toy_mod3.dfa");
    let dfa = dfa.to_str().unwrap();
    let text = stdout(&["--system", "toy", "decide", "--dfa", dfa]);
    assert!(text.contains("outcome: UltimatelyPeriodic"), "{text}");
    let machine = stdout(&["--system", "toy", "--format", "machine", "decide", "--dfa", dfa]);
    assert_eq!(machine, std::fs::read_to_string(golden("decide_toy_mod3.machine")).unwrap());
    for key in ["config.period_cap=", "config.certificates=", "flags="] {
        assert!(machine.contains(key), "{key} missing");
    }
}

#[test]
fn generated_congruence_dfa_matches_golden() {
    let text = stdout(&["--system", "toy", "congruence", "-Q", "3"]);
    assert_eq!(text, std::fs::read_to_string(golden("toy_mod3.dfa")).unwrap());
}

#[test]
fn valuation_rows() {
    let text = stdout(&["--system", "ppp", "padic-val", "-p", "2", "-i", "41..60"]);
    assert_eq!(text, std::fs::read_to_string(golden("ppp_nu2_41_60.tsv")).unwrap());
    let text = stdout(&["--system", "toy", "padic-val", "-p", "3", "-i", "4"]);
    assert_eq!(text, "4\t2\n");
}

#[test]
fn repeated_runs_are_byte_identical() {
    let dfa = golden("toy_mod3.dfa");
    let dfa = dfa.to_str().unwrap();
    let cases: [&[&str]; 4] = [
        &["--system", "toy", "--format", "machine", "decide", "--dfa", dfa],
        &["--system", "toy", "--seed", "9", "oracle", "--dfa", dfa, "--sample", "20"],
        &["--system", "ppp", "lang-dfa"],
        &["--system", "toy", "--format", "machine", "bounds", "--dfa", dfa],
    ];
    for args in cases {
        assert_eq!(stdout(args), stdout(args), "{args:?}");
    }
    let a = stdout(&["--system", "toy", "--seed", "1", "oracle", "--dfa", dfa, "--sample", "20"]);
    let b = stdout(&["--system", "toy", "--seed", "2", "oracle", "--dfa", dfa, "--sample", "20"]);
    assert_ne!(a, b);
    for line in a.lines() {
        let (v, bit) = line.split_once('\t').unwrap();
        let v: u64 = v.parse().unwrap();
        assert_eq!(bit == "1", v % 3 == 0, "{line}");
    }
}

#[test]
fn oracle_prefix() {
    let dfa = golden("toy_mod3.dfa");
    let bits = stdout(&["--system", "toy", "oracle", "--dfa", dfa.to_str().unwrap(), "-n", "8"]);
    assert_eq!(bits.trim(), "100100100");
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["no-such-command"]).status.code(), Some(2));
    assert_eq!(run(&["seq"]).status.code(), Some(2), "missing --system");
    assert_eq!(run(&["--system", "nonexistent-system", "seq"]).status.code(), Some(2));

    let bad = scratch("bad.dfa", "alphabet 2\nstates 1\n");
    assert_eq!(run(&["--system", "fib", "decide", "--dfa", &bad]).status.code(), Some(3));
    let all = scratch(
        "all2.dfa",
        "alphabet 2\nstates 1\ninitial 0\naccepting 0\ntrans 0 0 0\ntrans 0 1 0\n",
    );
    let out = run(&["--system", "fib", "decide", "--dfa", &all]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("not contained"));
    let sys = scratch("bad.sys", "coefficients = 1 1\ninitial = 1 1\n");
    assert_eq!(run(&["--system", &sys, "seq"]).status.code(), Some(3));

    let c7 = scratch("c7.dfa", &stdout(&["--system", "toy", "congruence", "-Q", "7", "-r", "2"]));
    let args = ["--system", "toy", "decide", "--dfa", &c7, "--cap-period", "2"];
    let lax = run(&args);
    assert_eq!(lax.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&lax.stdout).contains("Inconclusive"));
    let mut strict = args.to_vec();
    strict.insert(0, "--strict");
    assert_eq!(run(&strict).status.code(), Some(4));
}

#[test]
fn system_files_are_accepted() {
    let path = scratch(
        "fib.sys",
        "# Fibonacci\nname = fibfile\ncoefficients = 1 1\noffset = 0\ninitial = 1 2\n",
    );
    assert_eq!(stdout(&["--system", &path, "seq", "-n", "5"]).trim(), "1 2 3 5 8 13");
}
