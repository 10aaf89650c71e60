use std::process::Command;

use kmx::cli::{run, Outcome, VERBS};
use serde_json::Value;

fn kmx(args: &str) -> Outcome {
    let mut argv = vec!["kmx".to_string()];
    argv.extend(shell_split(args));
    run(argv)
}

// Single quotes group, nothing else.
fn shell_split(s: &str) -> Vec<String> {
    let mut out = Vec::new();
    for (k, part) in s.split('\'').enumerate() {
        if k % 2 == 1 {
            out.push(part.to_string());
        } else {
            out.extend(part.split_whitespace().map(str::to_string));
        }
    }
    out
}

fn json(args: &str) -> Value {
    let out = kmx(args);
    assert_eq!(out.code, 0, "{args}: {}{}", out.stdout, out.stderr);
    serde_json::from_str(&out.stdout).unwrap()
}

const HYP: &str = r#"--gcm '{"A":[[2,-2,0],[-2,2,-1],[0,-1,2]]}'"#;

#[test]
fn hyperbolic_outputs_are_exact() {
    assert_eq!(kmx(&format!("classify {HYP}")).stdout, "{\"components\":[{\"set\":[1,2,3],\"type\":\"IND\"}]}\n");
    assert_eq!(kmx(&format!("special {HYP}")).stdout, "[[],[1,2],[1,2,3]]\n");
    let o = kmx(&format!("face intersect {HYP} --left 'w=;theta=1,2' --right 'w=3;theta=1,2'"));
    assert_eq!(o.stdout, "{\"w\":\"\",\"theta\":[1,2,3]}\n");
    assert_eq!(o.code, 0);
}

#[test]
fn every_verb_runs() {
    let mon = r#"--monoid '{"rank":2,"generators":[[1,0],[1,2]]}'"#;
    let cases = [
        format!("validate {HYP}"),
        format!("classify {HYP} --set 1,2"),
        format!("special {HYP}"),
        format!("expose {HYP} --theta 1,2"),
        "realize --named A1~".to_string(),
        format!("weyl-reduce {HYP} --word '1 2 1 1'"),
        "dominant --named A2 --weight -1,2".to_string(),
        format!("face-normalize {HYP} --face 'w=1;theta=1,2'"),
        format!("face-include {HYP} --left 'w=;theta=1,2' --right 'w=;theta=1,2,3'"),
        format!("face-intersect {HYP} --left 'w=;theta=1,2' --right 'w=3;theta=1,2'"),
        format!("face-of-point {HYP} --weight 1,0,0"),
        format!("wmon-mul {HYP} --left 'w=1;theta=' --right 'w=3;theta=1,2'"),
        format!("wmon-inv {HYP} --elt 'w=3;theta=1,2;sigma=1'"),
        format!("that-mul {HYP} --left 'w=1;theta=1,2' --right 'w=3;theta=1,2'"),
        "nhat-mul --named A2 --left sigma=1 --right sigma=1".to_string(),
        format!("toric-saturate {mon}"),
        format!("toric-faces {mon}"),
        "module-weights --named A2 --lambda 1 --depth 2".to_string(),
        "module-basis --named A2 --lambda 1,1 --depth 2".to_string(),
        "ghat-eval --named A2 --lambda 1 --depth 1 --word 'X+(1;2)'".to_string(),
        "ghat-theta --named A2 --lambda 1,1 --word 'T(h1;2)'".to_string(),
        "ghat-equal --named A2 --left 'X+(1;2) X+(2;3)' --right 'X+(2;3) X+(1;2) X([1,1];6)'".to_string(),
        "ghat-cell --named A2 --word 'X-(1;1) T(h1;2)'".to_string(),
        "verify --suite 1".to_string(),
    ];
    let mut seen: Vec<String> = cases.iter().map(|c| c.split_whitespace().next().unwrap().to_string()).collect();
    seen.sort();
    let mut all: Vec<String> = VERBS.iter().map(|v| v.to_string()).collect();
    all.sort();
    assert_eq!(seen, all);
    for c in &cases {
        json(c);
        let t = kmx(&format!("{c} --text"));
        assert_eq!(t.code, 0, "{c}");
        assert!(!t.stdout.trim().is_empty() && !t.stdout.starts_with('{'), "{c}: {}", t.stdout);
    }
}

#[test]
fn small_answers() {
    assert_eq!(json("nhat-mul --named A2 --left sigma=1 --right sigma=1")["product"]["t"], serde_json::json!(["-1", "1"]));
    assert_eq!(json(&format!("weyl-reduce {HYP} --word '1 2 1 1'"))["word"], "1 2");
    assert_eq!(json("toric-saturate --monoid '{\"rank\":2,\"generators\":[[1,0],[1,2]]}'")["saturated"], false);
    assert_eq!(json("ghat-equal --named A2 --left 'X+(1;2) X+(2;3)' --right 'X+(2;3) X+(1;2) X([1,1];-6)'")["verdict"], "Distinct");
    assert_eq!(json("validate --named A1~")["rank"], 1);
}

#[test]
fn errors_are_json_with_exit_codes() {
    let o = kmx("classify --gcm '{\"A\":[[2,-1],'");
    assert_eq!(o.code, 2);
    assert_eq!(serde_json::from_str::<Value>(&o.stdout).unwrap()["error"]["kind"], "ParseError");

    let o = kmx("classify --gcm '{\"A\":[[2,-1],[-2]]}'");
    assert_eq!(o.code, 1);
    assert_eq!(serde_json::from_str::<Value>(&o.stdout).unwrap()["error"]["kind"], "NotGCM");

    let o = kmx("wmon-mul --named hyp --left 'w=1;theta=' --right 'w=2;theta=3'");
    assert_eq!(o.code, 1);
    assert_eq!(serde_json::from_str::<Value>(&o.stdout).unwrap()["error"]["kind"], "NotSpecial");

    let o = kmx("no-such-verb");
    assert_eq!(o.code, 2);
    assert!(o.stdout.is_empty() && o.stderr.contains("Usage"));

    assert_eq!(kmx("verify --suite 12").code, 2);
}

#[test]
fn depth_precedence() {
    let bin = env!("CARGO_BIN_EXE_kmx");
    let eval = |env: Option<&str>, flag: Option<&str>| {
        let mut c = Command::new(bin);
        c.args(["ghat-eval", "--named", "A2", "--lambda", "1", "--word", "X-(1;1)"]);
        if let Some(d) = flag {
            c.args(["--depth", d]);
        }
        c.env_remove("KMX_DEPTH");
        if let Some(e) = env {
            c.env("KMX_DEPTH", e);
        }
        let o = c.output().unwrap();
        (o.status.code().unwrap(), serde_json::from_slice::<Value>(&o.stdout).unwrap())
    };
    assert_eq!(eval(None, None).1["depth"], 4);
    assert_eq!(eval(Some("2"), None).1["depth"], 2);
    assert_eq!(eval(Some("2"), Some("3")).1["depth"], 3);
    let (code, v) = eval(Some("deep"), None);
    assert_eq!(code, 2);
    assert_eq!(v["error"]["kind"], "ParseError");
}
