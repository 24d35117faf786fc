use std::process::{Command, Output};

fn jacobi(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_jacobi")).args(args).env_remove("JACOBI_PREC").output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn expand_text() {
    let o = jacobi(&["expand", "theta", "--prec", "30"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(
        stdout(&o),
        "lattice A(1) t=1/2 2k=1 D=3 prec=5/4\n\
         n=1/8 l=(-1/2) c=-1\n\
         n=1/8 l=(1/2) c=1\n\
         n=9/8 l=(-3/2) c=1\n\
         n=9/8 l=(3/2) c=-1\n"
    );
}

#[test]
fn expand_json_is_stable_and_decodes() {
    let a = jacobi(&["expand", "quark(1,2)", "--prec", "48", "--json"]);
    let b = jacobi(&["expand", "quark(1,2)", "--prec", "48", "--json"]);
    assert_eq!(a.stdout, b.stdout);
    let s = jacobi_forms::series::FourierSeries::from_json(&stdout(&a)).unwrap();
    assert_eq!(s.shape.t, jacobi_forms::arith::int(7));
}

#[test]
fn ord_and_classify() {
    assert_eq!(stdout(&jacobi(&["ord", "thetaA(2)", "--prec", "48"])), "1/12\n");
    assert_eq!(stdout(&jacobi(&["classify", "quark(1,2)", "--prec", "96"])), "cusp\n");
    assert_eq!(stdout(&jacobi(&["classify", "thetaD(8)", "--prec", "48"])), "singular\n");
}

#[test]
fn precision_from_environment() {
    let o = Command::new(env!("CARGO_BIN_EXE_jacobi")).args(["ord", "thetaA(2)"]).env("JACOBI_PREC", "48").output().unwrap();
    assert_eq!(stdout(&o), "1/12\n");
}

#[test]
fn lift_rows() {
    let o = jacobi(&["lift", "theta*eta^9", "--bound", "3", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let t = jacobi_forms::hecke::LiftTable::from_json(&stdout(&o)).unwrap();
    assert!(t.asymmetries().is_empty());
    assert_eq!(t.get(1, &[1], 1), jacobi_forms::arith::int(1));
}

#[test]
fn weil_d4() {
    let o = jacobi(&["weil", "D4"]);
    let s = stdout(&o);
    assert!(s.contains("U(T) = diag(zeta_24^k), k = 0 12 12 12"), "{s}");
    assert!(s.contains("dim=2"));
    let j: serde_json::Value = serde_json::from_slice(&jacobi(&["weil", "E6", "--json"]).stdout).unwrap();
    assert_eq!(j["weil"]["order"], 3);
}

#[test]
fn decompose_d4() {
    let s = stdout(&jacobi(&["decompose", "thetaD(4)", "--prec", "48"]));
    assert!(s.starts_with("mu0: 0 + "), "{s}");
    assert!(s.contains("mu3: -1 q^0"));
}

#[test]
fn exit_codes() {
    let o = jacobi(&["expand", "quark(1,", "--prec", "3"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("offset 8"));
    assert_eq!(jacobi(&["expand", "theta"]).status.code(), Some(2));
    assert_eq!(jacobi(&["verify", "--suite", "nope"]).status.code(), Some(2));
    assert_eq!(jacobi(&["weil", "/nonexistent.json"]).status.code(), Some(2));
    assert_eq!(jacobi(&["ord", "thetaA(2) * q2(eta*eta^23)", "--prec", "24"]).status.code(), Some(3));
    assert_eq!(jacobi(&["ord", "eta", "--prec", "24"]).status.code(), Some(1));
}

#[test]
fn verify_suites() {
    let o = jacobi(&["verify", "--suite", "theta"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert_eq!(s.lines().count(), 3);
    assert!(s.lines().all(|l| l.starts_with("PASS")));
    let o = jacobi(&["verify", "--suite", "weil"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).starts_with("FAIL [11]"));
}
