use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

fn xcomm(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_xcomm")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("xcomm-cli-{}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn count() {
    let o = xcomm(&["count", "--rank", "3"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "54\n");
}

#[test]
fn present_plain_is_deterministic() {
    let a = xcomm(&["present", "--rank", "2", "--format", "plain"]);
    let b = xcomm(&["present", "--rank", "2", "--format", "plain"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let text = stdout(&a);
    assert_eq!(text.lines().count(), 12);
    assert!(text.starts_with("gens: a, b, ~a, ~b; rels: [a,~a],"));
    let full = stdout(&xcomm(&["present", "--rank", "2", "--full", "--format", "json"]));
    assert!(full.matches("[").count() > text.matches("[").count());
}

#[test]
fn present_from_input() {
    let p = scratch("c2.json");
    fs::write(&p, r#"{"generators":["a"],"relators":["a^2"]}"#).unwrap();
    let o = xcomm(&["present", "--input", p.to_str().unwrap()]);
    assert_eq!(stdout(&o), "gens: a, ~a; rels: a a,\n~a ~a,\n[a,~a]\n");
    let ab = xcomm(&["abelianize", "--input", p.to_str().unwrap(), "--x"]);
    assert_eq!(stdout(&ab), "Z/2 + Z/2\n");
}

#[test]
fn certify_and_verify() {
    let cert = scratch("abab.json");
    let o = xcomm(&["certify", "--rank", "2", "--word", "abab", "--emit", cert.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).contains("verified"));
    let v = xcomm(&["verify", cert.to_str().unwrap()]);
    assert_eq!(v.status.code(), Some(0));

    // Corrupt the conjugator of factor 1.
    let text = fs::read_to_string(&cert).unwrap();
    let mut lines: Vec<String> = text.lines().map(String::from).collect();
    lines[2] = lines[2].replace("\"conj\":\"", "\"conj\":\"a ");
    let bad = scratch("abab-bad.json");
    fs::write(&bad, lines.join("\n")).unwrap();
    let v = xcomm(&["verify", bad.to_str().unwrap()]);
    assert_eq!(v.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&v.stderr).contains("factor 1"));

    // A relator outside the schedule.
    let foreign = scratch("foreign.json");
    fs::write(
        &foreign,
        r#"{"target":"[a,b]","basis":{"mode":"upsilon","rank":2},"factors":[{"relator":"[a,b]","exp":1,"conj":""}]}"#,
    )
    .unwrap();
    let v = xcomm(&["verify", foreign.to_str().unwrap()]);
    assert_eq!(v.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&v.stderr).contains("factor 0"));
}

#[test]
fn certify_jobs_keep_order() {
    let args = ["certify", "--rank", "3", "--word", "abcab", "--word", "ba", "--word", "c^-1 a c a"];
    let one = xcomm(&[&args[..], &["--jobs", "1"]].concat());
    let four = xcomm(&[&args[..], &["--jobs", "4"]].concat());
    assert_eq!(one.stdout, four.stdout);
    let lines: Vec<String> = stdout(&one).lines().map(String::from).collect();
    assert!(lines[0].starts_with("a b c a b\t") && lines[1].starts_with("b a\t1 factors"));
}

#[test]
fn homomorphisms() {
    assert_eq!(stdout(&xcomm(&["rho", "--rank", "2", "--word", "a ~a^-1"])), "(a, 1, a^-1)\n");
    let j = stdout(&xcomm(&["rho", "--rank", "2", "--word", "~a", "--json"]));
    assert_eq!(j, "{\"g1\":\"1\",\"g2\":\"a\",\"g3\":\"a\",\"in_q\":true}\n");
    assert_eq!(stdout(&xcomm(&["member", "--sub", "L", "--rank", "2", "--word", "a^-1 ~a"])), "true\n");
    assert_eq!(stdout(&xcomm(&["member", "--sub", "D", "--rank", "2", "--word", "a^-1 ~a"])), "false\n");
    assert_eq!(stdout(&xcomm(&["member", "--sub", "W", "--rank", "2", "--word", "[ab,~a~b]"])), "true\n");
}

#[test]
fn ring_and_nu() {
    let r = stdout(&xcomm(&["ring", "reduce", "--rank", "2", "--word", "ba"]));
    assert_eq!(r, "{\"coeffs\":{\"\":-2,\"a\":2,\"ab\":-1,\"b\":2}}\n");
    let n = stdout(&xcomm(&["nu", "--rank", "2", "--word", "a ~a^-1"]));
    assert_eq!(n, "{\"g\":\"\",\"v\":{\"coeffs\":{\"\":1,\"a\":-1}}}\n");
    let k = stdout(&xcomm(&["nu", "--rank", "3", "--word", "[abc,~a~b~c]"]));
    assert_eq!(k, "{\"g\":\"\",\"v\":{\"coeffs\":{}}}\n");
}

#[test]
fn quotient() {
    let p = scratch("c2-x.json");
    fs::write(&p, r#"{"generators":["a","~a"],"relators":["a^2","~a^2","[a,~a]"]}"#).unwrap();
    let good = scratch("good.json");
    fs::write(&good, r#"{"a":[2,1,4,3],"~a":[3,4,1,2]}"#).unwrap();
    let o = xcomm(&["quotient", "--pres", p.to_str().unwrap(), "--assign", good.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("image order 4"));
    let bad = scratch("bad.json");
    fs::write(&bad, r#"{"a":[2,1,4,3],"~a":[2,3,4,1]}"#).unwrap();
    let o = xcomm(&["quotient", "--pres", p.to_str().unwrap(), "--assign", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn usage_errors() {
    assert_eq!(xcomm(&["bogus"]).status.code(), Some(2));
    assert_eq!(xcomm(&["count"]).status.code(), Some(2));
    assert_eq!(xcomm(&["count", "--rank", "0"]).status.code(), Some(2));
    assert_eq!(xcomm(&["rho", "--rank", "2", "--word", "q"]).status.code(), Some(2));
    assert_eq!(xcomm(&["verify", "/nonexistent/cert.json"]).status.code(), Some(2));
}
