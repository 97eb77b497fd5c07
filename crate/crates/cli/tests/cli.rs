use std::fs;
use std::path::{Path, PathBuf};
use std::io::Write;
use std::process::{Command, Stdio};

struct Out {
    code: i32,
    stdout: String,
    stderr: String,
}

fn root() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn fixture(name: &str) -> String {
    root().join("fixtures").join(format!("{name}.lg")).display().to_string()
}

fn soficov(args: &[&str], stdin: &str) -> Out {
    let mut argv = vec!["soficov"];
    argv.extend_from_slice(args);
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = soficov::run(argv, &mut stdin.as_bytes(), &mut out, &mut err);
    Out { code, stdout: String::from_utf8(out).unwrap(), stderr: String::from_utf8(err).unwrap() }
}

const FIXTURES: &[&str] = &["ev2", "ev3", "ev4", "nr3", "nr3-krieger", "mx5", "mx5-follower", "ex1", "ex2"];

#[test]
fn krieger_dot_of_even_shift() {
    let o = soficov(&["krieger", &fixture("ev2"), "--route", "merge", "--format", "dot"], "");
    assert_eq!(o.code, 0);
    assert!(o.stdout.starts_with("digraph G {\n"));
    assert_eq!(o.stdout.matches(" -> ").count(), 5);
    assert_eq!(o.stdout.lines().filter(|l| l.ends_with("\";")).count(), 3);
}

#[test]
fn nr3_has_a_non_regular_vertex() {
    let o = soficov(&["check", &fixture("nr3"), "--property", "regular"], "");
    assert_eq!(o.code, 1);
    assert_eq!(o.stdout, "vertex a not regular\n");
}

#[test]
fn ev4_presents_the_even_shift() {
    let o = soficov(&["compare", &fixture("ev2"), &fixture("ev4"), "--mode", "language"], "");
    assert_eq!((o.code, o.stdout.as_str()), (0, "equal\n"));
}

#[test]
fn compare_isomorphic() {
    let o = soficov(&["compare", &fixture("ev2"), &fixture("ev3"), "--mode", "isomorphic"], "");
    assert_eq!((o.code, o.stdout.as_str()), (1, "not isomorphic (2 vs 3 vertices)\n"));

    let k = soficov(&["krieger", &fixture("ev2")], "");
    let o = soficov(&["compare", "-", &fixture("ev3"), "--mode", "isomorphic"], &k.stdout);
    assert_eq!(o.code, 0);
    assert_eq!(o.stdout, "isomorphic\n{a,b} -> c\n{a} -> a\n{b} -> b\n");
}

#[test]
fn language_witness_is_a_shortest_separator() {
    // the one-loop shift 1^∞ misses 0; the even shift misses nothing of length 1
    let o = soficov(&["compare", &fixture("ev2"), "-"], "x 1 x\n");
    assert_eq!(o.code, 1);
    assert_eq!(o.stdout, "not equal: word \"0\" is only in the first language\n");
    let o = soficov(&["compare", "-", &fixture("ev2"), "--format", "json"], "x 0 x\n");
    let v: serde_json::Value = serde_json::from_str(&o.stdout).unwrap();
    assert_eq!(v["witness"], "1");
    assert_eq!(v["only_in"], "second");
    // odd 0-blocks between 1s separate the full 2-shift from the even shift
    let o = soficov(&["compare", &fixture("ev2"), "-"], "x 0 x\nx 1 x\n");
    assert_eq!(o.stdout, "not equal: word \"101\" is only in the second language\n");
}

#[test]
fn periodic_counts_compare() {
    let o = soficov(&["compare", &fixture("ev2"), &fixture("ev4"), "--mode", "periodic-counts"], "");
    assert_eq!(o.code, 1);
    assert!(o.stdout.starts_with("differ at period 1: 1 vs "), "{}", o.stdout);
    let hb = soficov(&["recode", &fixture("ev2"), "--block", "3"], "");
    let o = soficov(&["compare", &fixture("ev2"), "-", "--mode", "periodic-counts"], &hb.stdout);
    assert_eq!((o.code, o.stdout.as_str()), (0, "equal up to period 8\n"));
}

#[test]
fn check_properties() {
    let cases: &[(&str, &[&str], i32, &str)] = &[
        ("ev2", &["--property", "right-resolving"], 0, "right-resolving\n"),
        ("ev2", &["--property", "irreducible"], 0, "irreducible\n"),
        ("ev2", &["--property", "regular"], 0, "all vertices regular\n"),
        ("ev4", &["--property", "follower-separated"], 1, "vertices {a,d} have equal follower sets\nvertices {b,c} have equal follower sets\n"),
        ("ev2", &["--property", "contains", "--word", "010"], 0, "word 010 in the language\n"),
        ("ev2", &["--property", "contains", "--word", "101"], 1, "word 101 not in the language\n"),
        ("ev4", &["--property", "synchronizing", "--word", "1"], 0, "word 1 is synchronizing\n"),
        ("ev2", &["--property", "synchronizing", "--word", "0"], 1, "word 0 is not synchronizing\n"),
    ];
    for (fx, flags, code, text) in cases {
        let mut args = vec!["check", &fixture(fx)].into_iter().map(String::from).collect::<Vec<_>>();
        args.extend(flags.iter().map(|s| s.to_string()));
        let argv: Vec<&str> = args.iter().map(String::as_str).collect();
        let o = soficov(&argv, "");
        assert_eq!((o.code, o.stdout.as_str()), (*code, *text), "{fx} {flags:?}: {}", o.stderr);
    }
}

#[test]
fn usage_errors_exit_2() {
    let bad: &[(&[&str], &str)] = &[
        (&["frobnicate"], ""),
        (&["krieger"], ""),
        (&["krieger", "/nonexistent.lg"], ""),
        (&["krieger", "-"], "a 0\n"),
        (&["krieger", "-"], ""),
        (&["check", "-", "--property", "contains"], "a 0 a\n"),
        (&["check", "-", "--property", "contains", "--word", "2"], "a 0 a\n"),
        (&["check", "-", "--property", "trim", "--word", "0"], "a 0 a\n"),
        (&["krieger", "-", "--route", "sideways"], "a 0 a\n"),
        (&["compare", "-", "-"], "a 0 a\n"),
        (&["check", "-", "--property", "regular", "--format", "dot"], "a 0 a\n"),
        (&["recode", "-", "--block", "0"], "a 0 a\n"),
        (&["fischer", "-"], "a 0 a\nb 1 b\n"),
    ];
    for (args, stdin) in bad {
        let o = soficov(args, stdin);
        assert_eq!(o.code, 2, "{args:?}: {}{}", o.stdout, o.stderr);
        assert!(!o.stderr.is_empty(), "{args:?}");
    }
}

#[test]
fn parse_errors_name_the_line() {
    let o = soficov(&["parse", "-"], "a 0 a\n\nb 0\n");
    assert_eq!(o.code, 2);
    assert!(o.stderr.contains("line 3"), "{}", o.stderr);
}

#[test]
fn cap_exceeded_exits_3() {
    let o = Command::new(env!("CARGO_BIN_EXE_soficov"))
        .args(["krieger", &fixture("mx5")])
        .env("SOFICOV_CAP", "2")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("exceeds cap 2"));
}

#[test]
fn non_trim_input_is_trimmed_with_a_note() {
    let o = soficov(&["krieger", "-"], "a 1 a\na 0 b\nb 0 a\nb 1 s\nt 0 a\n");
    assert_eq!(o.code, 0);
    assert!(o.stderr.contains("not trim"), "{}", o.stderr);
    assert_eq!(o.stdout, soficov(&["krieger", &fixture("ev2")], "").stdout);
}

#[test]
fn duplicate_edges_warn() {
    let o = soficov(&["parse", "-"], "a 0 a\na 0 a\n");
    assert_eq!((o.code, o.stdout.as_str()), (0, "a 0 a\n"));
    assert!(o.stderr.contains("line 2: duplicate of line 1"), "{}", o.stderr);
}

#[test]
fn json_round_trips_through_parse() {
    for fx in FIXTURES {
        let j = soficov(&["parse", &fixture(fx), "--format", "json"], "");
        let back = soficov(&["parse", "-"], &j.stdout);
        assert_eq!(back.stdout, soficov(&["parse", &fixture(fx)], "").stdout, "{fx}");
    }
}

#[test]
fn gprime_json_echoes_bounds() {
    let o = soficov(&["gprime", &fixture("ev2"), "--format", "json", "--left-bound", "3"], "");
    let v: serde_json::Value = serde_json::from_str(&o.stdout).unwrap();
    assert_eq!(v["cover"], "gprime");
    assert_eq!(v["selection"]["bounds"], serde_json::json!({"left": 3, "mid": 6, "right": 6}));
    let o = soficov(&["invariants", &fixture("ev2"), "--cover", "gprime", "--format", "json", "--max-period", "4"], "");
    let v: serde_json::Value = serde_json::from_str(&o.stdout).unwrap();
    assert_eq!(v["max_period"], 4);
    assert_eq!(v["periodic"].as_array().unwrap().len(), 4);
    assert_eq!(v["bounds"]["mid"], 6);
}

#[test]
fn output_flag_writes_a_file() {
    let dir = std::env::temp_dir().join(format!("soficov-cli-{}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    let path = dir.join("k.lg");
    let p = path.display().to_string();
    let o = soficov(&["krieger", &fixture("ev2"), "-o", &p], "");
    assert_eq!((o.code, o.stdout.as_str()), (0, ""));
    assert_eq!(fs::read_to_string(&path).unwrap(), soficov(&["krieger", &fixture("ev2")], "").stdout);
    fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn binary_reads_stdin() {
    let mut child = Command::new(env!("CARGO_BIN_EXE_soficov"))
        .args(["compare", "-", &fixture("ev4")])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(fs::read(fixture("ev2")).unwrap().as_slice()).unwrap();
    let o = child.wait_with_output().unwrap();
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(String::from_utf8_lossy(&o.stdout), "equal\n");
}

/// Every fixture through every command, checked against `tests/golden/`.
/// Set `SOFICOV_BLESS=1` to rewrite the files.
#[test]
fn golden_outputs_and_exit_codes() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden");
    let bless = std::env::var_os("SOFICOV_BLESS").is_some();
    let commands: &[(&str, &[&str])] = &[
        ("krieger", &["krieger"]),
        ("krieger-regular-part", &["krieger", "--route", "regular-part"]),
        ("fischer", &["fischer"]),
        ("gprime", &["gprime"]),
        ("follower-graph", &["follower-graph"]),
        ("underline", &["underline"]),
        ("invariants", &["invariants"]),
        ("invariants-gprime", &["invariants", "--cover", "gprime"]),
        ("regular", &["check", "--property", "regular"]),
        ("follower-separated", &["check", "--property", "follower-separated"]),
        ("predecessor-separated", &["check", "--property", "predecessor-separated"]),
        ("irreducible", &["check", "--property", "irreducible"]),
    ];
    let mut mismatches = Vec::new();
    for fx in FIXTURES {
        let mut text = String::new();
        for (name, args) in commands {
            let path = fixture(fx);
            let mut argv = vec![args[0], path.as_str()];
            argv.extend_from_slice(&args[1..]);
            let o = soficov(&argv, "");
            assert_eq!(o, soficov(&argv, ""), "{fx} {name}: not deterministic");
            let err = o.stderr.lines().next().unwrap_or("");
            text.push_str(&format!("== {name} exit {}\n{}{}", o.code, o.stdout, if err.is_empty() { String::new() } else { format!("stderr: {err}\n") }));
        }
        let file = dir.join(format!("{fx}.txt"));
        if bless {
            fs::create_dir_all(&dir).unwrap();
            fs::write(&file, &text).unwrap();
        } else if fs::read_to_string(&file).ok().as_deref() != Some(text.as_str()) {
            mismatches.push(fx.to_string());
        }
    }
    assert!(mismatches.is_empty(), "golden mismatch for {mismatches:?}");
}

impl PartialEq for Out {
    fn eq(&self, o: &Out) -> bool {
        (self.code, &self.stdout, &self.stderr) == (o.code, &o.stdout, &o.stderr)
    }
}

impl std::fmt::Debug for Out {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "exit {}\n{}{}", self.code, self.stdout, self.stderr)
    }
}
