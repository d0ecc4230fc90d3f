use std::process::Command;

fn weylforge(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_weylforge"))
        .args(args)
        .env_remove("WEYLFORGE_SEED")
        .output()
        .expect("binary runs");
    let text = |b: Vec<u8>| String::from_utf8(b).unwrap().trim_end().to_string();
    (out.status.code().unwrap(), text(out.stdout), text(out.stderr))
}

#[test]
fn eval_brackets() {
    assert_eq!(weylforge(&["eval", "PB(q, p)"]).1, "-1");
    assert_eq!(weylforge(&["eval", "MB(q, p)"]).1, "-i*hbar");
    assert_eq!(weylforge(&["eval", "PMB(t(1,0,s), t(0,1,s))"]).1, "-1");
    assert_eq!(weylforge(&["--s-value", "0", "eval", "MB(q^2, p^2)"]).1, "-4*i*hbar*q*p");
}

#[test]
fn eval_maps_and_products() {
    assert_eq!(weylforge(&["eval", "ms(q*p)"]).1, "qh*ph - 1/2*i*hbar + 1/2*i*hbar*s");
    assert_eq!(weylforge(&["eval", "msinv(qh*ph)"]).1, weylforge(&["eval", "q*p + (1/2*i - 1/2*i*s)*hbar"]).1);
    assert_eq!(weylforge(&["eval", "ph*qh"]).1, "qh*ph - i*hbar");
    assert_eq!(weylforge(&["eval", "commutator(qh, ph)"]).1, "i*hbar");
}

#[test]
fn t_command_prints_normal_form() {
    let (code, out, _) = weylforge(&["t", "1", "2", "--s", "0"]);
    assert_eq!((code, out.as_str()), (0, "qh*ph^2 - i*hbar*ph"));
    assert_eq!(weylforge(&["t", "2", "3", "--s", "1"]).1, "qh^2*ph^3");
}

#[test]
fn formats() {
    let (_, json, _) = weylforge(&["--format", "json", "eval", "q*p"]);
    let v: serde_json::Value = serde_json::from_str(&json).unwrap();
    assert_eq!(v["kind"], "phase_poly");
    assert_eq!(v["dof"], 1);
    let (_, latex, _) = weylforge(&["--format", "latex", "eval", "qh^2"]);
    assert!(latex.contains(r"\hat{q}^{2}"), "{latex}");
}

#[test]
fn multi_dof() {
    let (code, out, _) = weylforge(&["eval", "PB(q1*p2, q2)"]);
    assert_eq!((code, out.as_str()), (0, "q1"));
}

#[test]
fn evolve_oscillator() {
    let (code, out, _) =
        weylforge(&["evolve", "--observable", "qh", "--hamiltonian", "1/2*p^2 + 1/2*q^2", "--order", "2"]);
    assert_eq!(code, 0);
    assert_eq!(out, "t^0: qh\nt^1: ph\nt^2: -1/2*qh");
}

#[test]
fn check_is_deterministic() {
    let a = weylforge(&["check", "--suite", "phase", "--seed", "7"]);
    let b = weylforge(&["check", "--suite", "phase", "--seed", "7"]);
    assert_eq!(a.0, 0, "{}", a.1);
    assert_eq!(a.1, b.1);
    let v: serde_json::Value = serde_json::from_str(&a.1).unwrap();
    assert_eq!(v["seed"], 7);
}

#[test]
fn seed_environment_override() {
    let out = Command::new(env!("CARGO_BIN_EXE_weylforge"))
        .args(["check", "--suite", "scalar"])
        .env("WEYLFORGE_SEED", "99")
        .output()
        .unwrap();
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["seed"], 99);
}

#[test]
fn exit_codes_and_error_positions() {
    let (code, _, err) = weylforge(&["eval", "q + * p"]);
    assert_eq!(code, 2);
    assert!(err.contains("column 5"), "{err}");
    assert!(err.contains("    ^"), "{err}");
    let (code, _, err) = weylforge(&["eval", "q + qh"]);
    assert_eq!(code, 2);
    assert!(err.contains("cannot mix"), "{err}");
    assert_eq!(weylforge(&["eval", "foo(q)"]).0, 2);
    assert_eq!(weylforge(&["check", "--suite", "nope"]).0, 2);
    assert_eq!(weylforge(&["--dof", "0", "eval", "q"]).0, 2);
    assert_eq!(weylforge(&["--version"]).0, 0);
}
