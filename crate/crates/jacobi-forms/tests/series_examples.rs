use jacobi_forms::arith::{int, rat, Rational};
use jacobi_forms::forms::*;
use jacobi_forms::lattice::root;
use jacobi_forms::linalg::QMat;
use jacobi_forms::series::{Classification, FourierSeries};
use num_traits::One;

fn v(xs: &[i64]) -> Vec<Rational> {
    xs.iter().map(|x| int(*x)).collect()
}

#[test]
fn d4_relation() {
    let a = theta_d(4, 96).unwrap();
    let b = theta_d4_2(96).unwrap().add(&theta_d4_3(96).unwrap()).unwrap();
    a.agree(&b).unwrap();
    assert!(!a.is_empty());
}

#[test]
fn theta32_times_theta() {
    let lhs = theta32(240).unwrap().mul(&theta(240).unwrap()).unwrap();
    let a1 = root('A', 1).unwrap().intrinsic();
    let t2 = theta(240).unwrap().substitute(&QMat::from_ints(&[vec![2]]), a1, int(2)).unwrap();
    let rhs = eta(240).unwrap().mul(&t2).unwrap();
    assert!(lhs.prec >= 240 && rhs.prec >= 240);
    lhs.agree(&rhs).unwrap();
}

#[test]
fn ord_values() {
    for m in [2usize, 4, 6] {
        let s = theta_a(m, 120).unwrap();
        assert_eq!(s.ord().unwrap(), rat(1, 4 * (m as i64 + 1)), "A{m}");
        assert_eq!(s.classify().unwrap(), Classification::Cusp);
    }
    assert_eq!(theta_a3(2, 120).unwrap().ord().unwrap(), rat(1, 36));
    assert_eq!(sigma_a2(120).unwrap().ord().unwrap(), int(0));
    assert_eq!(sigma_a2(120).unwrap().classify().unwrap(), Classification::Singular);
    assert_eq!(theta_d(4, 120).unwrap().ord().unwrap(), int(0));
    assert_eq!(theta_a(3, 120).unwrap().classify().unwrap(), Classification::Holomorphic);
    let et = eta(120).unwrap().mul(&theta(120).unwrap()).unwrap();
    assert_eq!(et.ord().unwrap(), rat(1, 24));
}

#[test]
fn pullback_d3_is_minus_a2() {
    let d3 = theta_d(3, 96).unwrap();
    let b = QMat::from_ints(&[vec![1, 0], vec![0, 1], vec![-1, -1]]);
    let p = d3.pullback(&b).unwrap();
    p.agree(&theta_a(2, 96).unwrap().neg()).unwrap();
    let id = d3.pullback(&QMat::identity(3)).unwrap();
    id.agree(&d3).unwrap();
    let perp = d3.pullback_perp(&v(&[2, 2, 2])).unwrap();
    assert_eq!(perp.shape.lattice.det(), int(3));
    assert_eq!(perp.ord().unwrap(), theta_a(2, 96).unwrap().ord().unwrap());
}

#[test]
fn d4_perp_cusp() {
    let p = theta_d(4, 120).unwrap().pullback_perp(&v(&[4, 2, 0, 0])).unwrap();
    assert_eq!(p.classify().unwrap(), Classification::Cusp);
    assert_eq!(p.ord().unwrap(), rat(1, 20));
}

#[test]
fn quarks_agree() {
    for (a, b) in [(1i64, 1i64), (1, 2), (2, 3)] {
        let direct = quark(a, b, 120).unwrap();
        let s = sigma_a2(121).unwrap();
        let u = [2 * b, -2 * a];
        // v = G^-1 B^T u with G = I + J
        let vv = v(&[2 * u[0] - u[1], 2 * u[1] - u[0]]);
        let p = s.pullback_perp(&vv).unwrap();
        let (perp, _) = s.shape.lattice.orth_complement(&vv).unwrap();
        assert_eq!(perp.basis.col(0), v(&[a, b]));
        direct.agree(&p).unwrap();
    }
    let q12 = quark(1, 2, 240).unwrap();
    assert_eq!(q12.shape.t, int(7));
    assert_eq!(q12.classify().unwrap(), Classification::Cusp);
    q12.agree(&quark(2, 1, 240).unwrap()).unwrap();
}

#[test]
fn e8_layer() {
    let e8 = theta_e8(48).unwrap();
    assert_eq!(e8.coeff(0, &vec![0; 8]), Rational::one());
    assert_eq!(e8.terms.keys().filter(|k| k.0 == 24).count(), 240);
    assert!(e8.terms.iter().filter(|(k, _)| k.0 == 24).all(|(_, c)| c.is_one()));
    assert_eq!(e8.classify().unwrap(), Classification::Singular);
}

#[test]
fn json_roundtrip() {
    let s = sigma_a2(48).unwrap();
    let j = s.to_json();
    let back = FourierSeries::from_json(&j).unwrap();
    assert_eq!(back.to_json(), j);
}

#[test]
fn d1_theta_difference() {
    let d1 = root('D', 1).unwrap();
    let diff = lat_theta(1, 1, 1, 240).unwrap().sub(&lat_theta(1, 1, 3, 240).unwrap()).unwrap();
    // in the frame coordinate this is theta(tau, z)
    let basis_coord = diff
        .substitute(&QMat::from_ints(&[vec![2]]), d1.intrinsic(), int(1))
        .unwrap();
    let a1 = root('A', 1).unwrap().intrinsic();
    let t2 = theta(240).unwrap().substitute(&QMat::from_ints(&[vec![2]]), a1, int(2)).unwrap();
    basis_coord.agree(&t2).unwrap();
}

#[test]
fn elliptic_checks() {
    let forms = vec![
        theta(120).unwrap(),
        theta32(120).unwrap(),
        theta_d(4, 120).unwrap(),
        sigma_a2(120).unwrap(),
        quark(2, 1, 120).unwrap(),
        theta_e8(120).unwrap(),
    ];
    for f in &forms {
        let lat = &f.shape.lattice;
        for j in 0..lat.rank() {
            let x = lat.basis.col(j);
            let r = f.check_elliptic(&x).unwrap();
            assert!(r.holds, "{} {:?}", lat, r);
            let txx = &f.shape.t * lat.inner(&x, &x);
            let expect = if txx.to_integer() % 2 == 0.into() { 1 } else { -1 };
            assert_eq!(r.sign, expect);
            assert!(r.checked > 0);
        }
    }
    let mut bad = sigma_a2(120).unwrap();
    let k = bad.terms.keys().nth(3).unwrap().clone();
    *bad.terms.get_mut(&k).unwrap() += int(1);
    let x = bad.shape.lattice.basis.col(0);
    let r = bad.check_elliptic(&x).unwrap();
    assert!(!r.holds && r.witness.is_some());
}

#[test]
fn decompositions() {
    let d = theta_d(4, 96).unwrap().theta_decompose().unwrap();
    let consts: Vec<String> = d.components.iter().map(|c| format!("{:?}", c.terms.iter().map(|(k, v)| (*k, v.to_string())).collect::<Vec<_>>())).collect();
    assert_eq!(consts, vec!["[]", "[(0, \"1\")]", "[]", "[(0, \"-1\")]"]);
    let e = theta_e8(96).unwrap().theta_decompose().unwrap();
    assert_eq!(e.components.len(), 1);
    assert_eq!(e.components[0].terms.len(), 1);
    let x = theta_d2_1(96).unwrap().theta_decompose().unwrap();
    assert_eq!(x.components.len(), 4);
}
