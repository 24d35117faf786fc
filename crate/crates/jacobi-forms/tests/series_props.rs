use jacobi_forms::arith::{int, rat, Rational};
use jacobi_forms::forms::theta;
use jacobi_forms::lattice::{enumerate, root};
use jacobi_forms::linalg::QMat;
use jacobi_forms::series::FourierSeries;
use jacobi_forms::weil::weil_matrices;
use proptest::prelude::*;

/// `A^T A + I` for a small integer matrix `A`.
fn gram_strategy() -> impl Strategy<Value = QMat> {
    (2usize..=3).prop_flat_map(|n| {
        prop::collection::vec(-2i64..=2, n * n).prop_map(move |a| {
            let mut g = vec![vec![0i64; n]; n];
            for i in 0..n {
                for j in 0..n {
                    g[i][j] = (0..n).map(|k| a[k * n + i] * a[k * n + j]).sum::<i64>() + i64::from(i == j);
                }
            }
            QMat::from_ints(&g)
        })
    })
}

fn brute_force(g: &QMat, shift: &[Rational], bound: &Rational) -> Vec<(Vec<Rational>, Rational)> {
    let n = g.rows;
    // g >= I, so |y|^2 <= bound
    let r = bound.to_integer().to_string().parse::<i64>().unwrap() + 2;
    let mut out = Vec::new();
    let mut idx = vec![-r; n];
    loop {
        let y: Vec<Rational> = idx.iter().zip(shift).map(|(i, s)| int(*i) + s).collect();
        let gy = g.mul_vec(&y);
        let norm: Rational = y.iter().zip(&gy).map(|(a, b)| a * b).sum();
        if &norm <= bound {
            out.push((y, norm));
        }
        let mut k = 0;
        while k < n && idx[k] == r {
            idx[k] = -r;
            k += 1;
        }
        if k == n {
            break;
        }
        idx[k] += 1;
    }
    out.sort();
    out
}

fn a1_series(terms: &[(i64, i64, i64)], prec: i64) -> FourierSeries {
    let mut shape = theta(0).unwrap().shape;
    shape.holomorphic = false;
    let mut s = FourierSeries::empty(shape, prec, 2);
    for (n, w, c) in terms {
        s.add_term(3 + 24 * n, vec![2 * w + 1], int(*c));
    }
    s.normalize();
    s
}

fn terms_strategy() -> impl Strategy<Value = Vec<(i64, i64, i64)>> {
    prop::collection::vec((0i64..4, -3i64..3, -5i64..=5), 0..8)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn enumeration_matches_brute_force(g in gram_strategy(), s in prop::collection::vec(0i64..2, 3), b in 0i64..7) {
        let n = g.rows;
        let shift: Vec<Rational> = s[..n].iter().map(|x| rat(*x, 2)).collect();
        let bound = int(b);
        let e = enumerate(&g, &shift, &bound).unwrap();
        let mut got: Vec<(Vec<Rational>, Rational)> = e
            .points
            .iter()
            .map(|(x, nm)| (x.iter().map(|v| rat(*v, e.den)).collect(), nm.clone()))
            .collect();
        got.sort();
        prop_assert_eq!(got, brute_force(&g, &shift, &bound));
    }

    #[test]
    fn product_is_commutative_and_associative(a in terms_strategy(), b in terms_strategy(), c in terms_strategy()) {
        let (x, y, z) = (a1_series(&a, 96), a1_series(&b, 96), a1_series(&c, 96));
        let xy = x.mul(&y).unwrap();
        let yx = y.mul(&x).unwrap();
        prop_assert_eq!(&xy.terms, &yx.terms);
        prop_assert_eq!(&xy.shape.t, &yx.shape.t);
        let l = xy.mul(&z).unwrap();
        let r = x.mul(&y.mul(&z).unwrap()).unwrap();
        prop_assert_eq!(l.prec, r.prec);
        prop_assert!(l.agree(&r).is_ok());
        prop_assert_eq!(&l.shape.t, &rat(3, 2));
    }

    #[test]
    fn json_roundtrip(a in terms_strategy(), p in 0i64..200) {
        let s = a1_series(&a, p);
        let j = s.to_json();
        let back = FourierSeries::from_json(&j).unwrap();
        prop_assert_eq!(back.to_json(), j);
        prop_assert_eq!(back.terms, s.terms);
    }

    #[test]
    fn d_m_weil_data_has_period_8(m in 1usize..=8) {
        let a = weil_matrices(&root('D', m).unwrap()).unwrap();
        let b = weil_matrices(&root('D', m + 8).unwrap()).unwrap();
        prop_assert_eq!(a.signature(), b.signature());
        prop_assert_eq!(a.labels, b.labels);
    }
}
