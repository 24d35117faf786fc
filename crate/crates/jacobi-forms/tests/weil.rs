use jacobi_forms::arith::{int, rat, Rational};
use jacobi_forms::forms::{theta_d, theta_e6, theta_e8};
use jacobi_forms::lattice::root;
use jacobi_forms::weil::{eigenvector_to_series, joint_eigenvectors, weil_matrices, Cyc, CycExt, CycField, WeilPair};
use num_traits::Zero;
use std::sync::Arc;

/// `q zeta_24^k`, optionally times `1/sqrt(r)`.
fn entry(f: &Arc<CycField>, q: Rational, k24: i64, inv_sqrt: Option<i64>) -> CycExt {
    let z = Cyc::zeta(f, k24 * (f.n as i64 / 24));
    match inv_sqrt {
        None => CycExt { a: z.scale(&q), b: Cyc::zero(f), r: 1 },
        Some(r) => CycExt { a: Cyc::zero(f), b: z.scale(&(q / int(r))), r },
    }
}

fn with_r(mut e: CycExt, r: i64) -> CycExt {
    e.r = r;
    e
}

fn check_printed(w: &WeilPair, ut: &[CycExt], us: &[Vec<CycExt>]) {
    let r = w.ut[0].r;
    for (i, x) in ut.iter().enumerate() {
        assert_eq!(w.ut[i], with_r(x.clone(), r), "U(T)[{i}] of {}", w.lattice);
    }
    for i in 0..us.len() {
        for j in 0..us.len() {
            assert_eq!(w.us[i][j], with_r(us[i][j].clone(), r), "U(S)[{i}][{j}] of {}", w.lattice);
        }
    }
}

const HADAMARD: [[i64; 4]; 4] = [[1, 1, 1, 1], [1, 1, -1, -1], [1, -1, 1, -1], [1, -1, -1, 1]];

#[test]
fn d4_and_d8_printed() {
    for (m, ut, scale) in [(4, [0, 12, 12, 12], rat(-1, 2)), (8, [0, 0, 12, 0], rat(1, 2))] {
        let w = weil_matrices(&root('D', m).unwrap()).unwrap();
        assert_eq!(w.labels, vec!["mu0", "mu1", "mu2", "mu3"]);
        let f = CycField::new(w.n);
        let ut: Vec<CycExt> = ut.iter().map(|k| entry(&f, int(1), *k, None)).collect();
        let us: Vec<Vec<CycExt>> =
            HADAMARD.iter().map(|row| row.iter().map(|s| entry(&f, &scale * int(*s), 0, None)).collect()).collect();
        check_printed(&w, &ut, &us);
    }
}

#[test]
fn d9_printed() {
    let w = weil_matrices(&root('D', 9).unwrap()).unwrap();
    let f = CycField::new(w.n);
    let ut: Vec<CycExt> = [0, 3, 12, 3].iter().map(|k| entry(&f, int(1), *k, None)).collect();
    // 1, -i, -1, i as powers of zeta_24
    let m = [[0, 0, 0, 0], [0, 18, 12, 6], [0, 12, 0, 12], [0, 6, 12, 18]];
    let us: Vec<Vec<CycExt>> = m.iter().map(|row| row.iter().map(|k| entry(&f, rat(1, 2), k - 3, None)).collect()).collect();
    check_printed(&w, &ut, &us);
}

#[test]
fn e6_printed() {
    let w = weil_matrices(&root('E', 6).unwrap()).unwrap();
    assert_eq!(w.order(), 3);
    let f = CycField::new(w.n);
    let ut: Vec<CycExt> = [0, 16, 16].iter().map(|k| entry(&f, int(1), *k, None)).collect();
    // i rho^j / sqrt(3)
    let m = [[0, 0, 0], [0, 2, 1], [0, 1, 2]];
    let us: Vec<Vec<CycExt>> = m.iter().map(|row| row.iter().map(|j| entry(&f, int(1), 6 + 8 * j, Some(3))).collect()).collect();
    check_printed(&w, &ut, &us);
}

#[test]
fn unitary_and_symmetric() {
    for (c, m) in [('D', 1), ('D', 4), ('D', 5), ('D', 9), ('A', 2), ('A', 4), ('E', 6), ('E', 7), ('E', 8)] {
        let w = weil_matrices(&root(c, m).unwrap()).unwrap();
        assert!(w.is_unitary(), "{c}{m}");
        assert!(w.us_symmetric(), "{c}{m}");
    }
}

#[test]
fn d_m_periodic_mod_8() {
    let sig = |m| weil_matrices(&root('D', m).unwrap()).unwrap().signature();
    assert_eq!(sig(1), sig(9));
    assert_eq!(sig(4), sig(12));
    assert_eq!(sig(8), sig(16));
    assert_ne!(sig(4), sig(8));
}

fn joint(c: char, m: usize) -> Vec<jacobi_forms::weil::JointEigenspace> {
    joint_eigenvectors(&weil_matrices(&root(c, m).unwrap()).unwrap()).unwrap()
}

fn v(x: &[i64]) -> Vec<Rational> {
    x.iter().map(|a| int(*a)).collect()
}

#[test]
fn d4_joint_space() {
    for m in [4, 12] {
        let sp = joint('D', m);
        let trivial_t: Vec<_> = sp.iter().filter(|s| s.lambda_t != 0).collect();
        assert_eq!(trivial_t.len(), 1);
        let s = trivial_t[0];
        assert_eq!((s.lambda_t, s.lambda_s), (12, 12));
        // theta_1 - theta_3, theta_1 - theta_2, theta_2 - theta_3 span a plane
        assert_eq!(s.dim(), 2);
        for x in [[0, 1, 0, -1], [0, 1, -1, 0], [0, 0, 1, -1]] {
            assert!(s.contains(&v(&x)));
        }
    }
}

#[test]
fn d8_joint_space() {
    for m in [8, 16] {
        let sp = joint('D', m);
        let s: Vec<_> = sp.iter().filter(|s| s.dim() == 2).collect();
        assert_eq!(s.len(), 1, "D{m}");
        assert_eq!((s[0].lambda_t, s[0].lambda_s), (0, 0));
        assert!(s[0].contains(&v(&[0, 1, 0, -1])));
        assert!(s[0].contains(&v(&[1, 1, 0, 0])));
        assert_eq!(s[0].rational_basis().unwrap(), vec![v(&[1, 0, 0, 1]), v(&[0, 1, 0, -1])]);
    }
}

#[test]
fn d9_and_d1_unique_eigenvector() {
    for m in [1, 9] {
        let sp = joint('D', m);
        let hits: Vec<_> = sp.iter().filter(|s| s.contains(&v(&[0, 1, 0, -1]))).collect();
        assert_eq!(hits.len(), 1);
        assert_eq!(hits[0].dim(), 1);
        assert_eq!(hits[0].lambda_t, 3);
    }
}

#[test]
fn e6_eigenvector() {
    let sp = joint('E', 6);
    let hits: Vec<_> = sp.iter().filter(|s| s.contains(&v(&[0, 1, -1]))).collect();
    assert_eq!(hits.len(), 1);
    assert_eq!(hits[0].dim(), 1);
    assert_eq!(hits[0].lambda_t, 16);
    let s = eigenvector_to_series(&root('E', 6).unwrap(), &v(&[0, 1, -1]), 48).unwrap();
    assert_eq!(s.agree(&theta_e6(48).unwrap()), Ok(()));
    assert_eq!(s.shape.d, 16);
}

#[test]
fn eigenvectors_to_series() {
    let d4 = root('D', 4).unwrap();
    let s = eigenvector_to_series(&d4, &v(&[0, 1, 0, -1]), 48).unwrap();
    assert_eq!(s.agree(&theta_d(4, 48).unwrap()), Ok(()));
    let d8 = root('D', 8).unwrap();
    let s = eigenvector_to_series(&d8, &v(&[1, 1, 0, 0]), 48).unwrap();
    let e8 = theta_e8(48).unwrap();
    assert_eq!(s.terms, e8.terms);
    let z = eigenvector_to_series(&d4, &[Rational::zero(), Rational::zero(), Rational::zero(), Rational::zero()], 48).unwrap();
    assert!(z.is_zero());
    let dec = s.theta_decompose().unwrap();
    assert_eq!(dec.components.len(), 4);
    for (c, x) in dec.components.iter().zip(v(&[1, 1, 0, 0])) {
        assert_eq!(c.coeff(0), x);
        assert_eq!(c.terms.len(), if x.is_zero() { 0 } else { 1 });
    }
}

#[test]
fn lambda_t_matches_eta_exponent() {
    for (c, m, d) in [('D', 4, 12), ('D', 8, 0), ('D', 9, 3), ('E', 6, 16)] {
        let n = weil_matrices(&root(c, m).unwrap()).unwrap().n as i64;
        let s = theta_d_or_e(c, m);
        assert_eq!(s.shape.d, d);
        let sp = joint(c, m);
        let target = v(&[0, 1, 0, -1]);
        let ok = sp.iter().any(|e| {
            let t = if c == 'E' { v(&[0, 1, -1]) } else { target.clone() };
            e.contains(&t) && e.lambda_t == d * n / 24
        });
        assert!(ok, "{c}{m}");
    }
}

fn theta_d_or_e(c: char, m: usize) -> jacobi_forms::series::FourierSeries {
    if c == 'E' {
        theta_e6(24).unwrap()
    } else {
        theta_d(m, 24).unwrap()
    }
}
