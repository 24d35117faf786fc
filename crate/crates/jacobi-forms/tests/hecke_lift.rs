use jacobi_forms::arith::{int, rat, Rational};
use jacobi_forms::forms::{eta, theta, theta_d2_1, theta_e8, theta_ma1};
use jacobi_forms::hecke::{hecke_minus, lift_coefficient, lift_table, phi2_closed_form, LiftTable};
use jacobi_forms::series::FourierSeries;
use jacobi_forms::Error;
use num_traits::{ToPrimitive, Zero};

fn odd_vectors(total: i64) -> Vec<[i64; 4]> {
    let r = (total as f64).sqrt() as i64 + 1;
    let odd: Vec<i64> = (-r..=r).filter(|x| x.rem_euclid(2) == 1).collect();
    let mut out = Vec::new();
    for &a in &odd {
        for &b in &odd {
            for &c in &odd {
                let rest = total - a * a - b * b - c * c;
                if rest <= 0 {
                    continue;
                }
                let d = (rest as f64).sqrt().round() as i64;
                if d * d == rest && d % 2 == 1 {
                    out.push([a, b, c, d]);
                    out.push([a, b, c, -d]);
                }
            }
        }
    }
    out
}

#[test]
fn hecke_identity_for_m1() {
    let e8 = theta_e8(48).unwrap();
    let h = hecke_minus(&e8, 1).unwrap();
    assert_eq!(h.terms, e8.terms);
    assert_eq!(h.prec, e8.prec);
}

#[test]
fn hecke_gcd_precondition() {
    let s = theta_d2_1(48).unwrap();
    assert_eq!(s.shape.d, 6);
    assert!(matches!(hecke_minus(&s, 2), Err(Error::Precondition(_))));
    assert!(hecke_minus(&s, 3).is_ok());
}

#[test]
fn hecke_needs_integral_weight() {
    assert!(hecke_minus(&theta(48).unwrap(), 1).is_err());
}

#[test]
fn lift_examples() {
    let phi = theta_ma1(4, 12 * 9).unwrap();
    assert_eq!(lift_coefficient(&phi, 1, &[1, 1, 1, 1], 1, 1).unwrap(), int(1));
    assert_eq!(lift_coefficient(&phi, 3, &[3, 3, 3, 3], 3, 1).unwrap(), int(4));
    assert_eq!(lift_coefficient(&phi, 1, &[3, 1, 1, 1], 3, 1).unwrap(), int(-1));
    assert!(matches!(lift_coefficient(&phi, 3, &[1, 1, 1, 1], 5, 1), Err(Error::Precision { .. })));
    assert!(lift_coefficient(&phi, 2, &[1, 1, 1, 1], 1, 1).is_err());
}

#[test]
fn phi2_oracle_and_symmetry() {
    let phi = theta_ma1(4, 12 * 81).unwrap();
    let table = lift_table(&phi, 1, 81).unwrap();
    let mut checked = 0;
    for n in (1..=9).step_by(2) {
        for m in (1..=9).step_by(2) {
            let vs = odd_vectors(4 * n * m);
            for v in &vs {
                let c = lift_coefficient(&phi, n, v, m, 1).unwrap();
                assert_eq!(c, int(phi2_closed_form(n, v, m).unwrap()), "n={n} l={v:?} m={m}");
                assert_eq!(table.get(n, v, m), c);
                checked += 1;
            }
        }
    }
    assert!(checked > 1000);
    for ((n, w, m), c) in &table.entries {
        let l: [i64; 4] = w.clone().try_into().unwrap();
        assert_eq!(*c, int(phi2_closed_form(*n, &l, *m).unwrap()));
    }
    assert!(table.asymmetries().is_empty());
}

#[test]
fn e8_boundary_and_divisor_sum_oracle() {
    let phi = theta_e8(24 * 8).unwrap();
    let table = lift_table(&phi, 1, 8).unwrap();
    assert_eq!(table.get(1, &[0; 8], 0), int(240));
    assert_eq!(table.get(0, &[0; 8], 0), int(1));
    assert_eq!(table.get(2, &[0; 8], 0), int(2160));
    // Theta_E8 has f(n, l) = [2n = (l, l)] and E8 is unimodular
    let den = phi.den;
    // E8 as the vectors of Z^8 or (Z + 1/2)^8 with even coordinate sum
    let in_e8 = |w: &[i64], a: i64| {
        if w.iter().any(|x| (2 * x) % (den * a) != 0) {
            return false;
        }
        let u: Vec<i64> = w.iter().map(|x| 2 * x / (den * a)).collect();
        u.iter().all(|x| x.rem_euclid(2) == u[0].rem_euclid(2)) && u.iter().sum::<i64>().rem_euclid(4) == 0
    };
    let mut count = 0;
    for ((n, w, m), c) in &table.entries {
        if *m == 0 {
            continue;
        }
        let l: Vec<Rational> = w.iter().map(|x| rat(*x, den)).collect();
        let norm: Rational = l.iter().map(|x| x * x).sum();
        let mut expect = 0i64;
        if norm == int(2 * n * m) {
            for a in 1..=*n.min(m) {
                if n % a == 0 && m % a == 0 {
                    if in_e8(w, a) {
                        expect += a * a * a;
                    }
                }
            }
        }
        assert_eq!(*c, int(expect));
        count += 1;
    }
    assert!(count > 240);
    assert!(table.asymmetries().is_empty());
}

#[test]
fn delta5_first_row() {
    let phi = theta(12 * 9 + 9).unwrap().mul(&eta(12 * 9 + 9).unwrap().eta_quotient(8).unwrap()).unwrap();
    let phi = phi.truncated(12 * 9);
    assert_eq!((phi.shape.k2, phi.shape.d), (10, 12));
    let table = lift_table(&phi, 1, 9).unwrap();
    assert!(!table.entries.is_empty());
    for ((n24, w), c) in &phi.terms {
        assert_eq!(table.get(n24 / 12, w, 1), *c);
    }
    for ((n, w, m), c) in &table.entries {
        if *m == 1 {
            assert_eq!(phi.coeff(12 * n, w), *c);
        }
    }
    assert!(table.asymmetries().is_empty());
}

#[test]
fn hecke_rows_match_lift_rows() {
    let phi = theta_ma1(4, 12 * 45).unwrap();
    let table = lift_table(&phi, 1, 45).unwrap();
    for m in [1, 3, 5] {
        let h = hecke_minus(&phi, m).unwrap();
        assert_eq!(h.shape.t, rat(m, 2));
        for n in (1..=45 / m).step_by(2) {
            let layer: Vec<_> = h.terms.range((12 * n, vec![i64::MIN; 4])..=(12 * n, vec![i64::MAX; 4])).collect();
            for ((_, w), c) in &layer {
                assert_eq!(table.get(n, w, m), **c, "n={n} m={m} w={w:?}");
            }
            let row = table.entries.iter().filter(|((nn, _, mm), _)| *nn == n && *mm == m).count();
            assert_eq!(row, layer.len());
        }
    }
}

/// `V_m` from its definition `m^(k-1) sum_{ad=m} d^-k sum_{b mod d} phi((a tau + b)/d, a z)`
/// with the b-sum evaluated numerically.
fn hecke_oracle(phi: &FourierSeries, m: i64, k: i32) -> Vec<((i64, Vec<i64>), Rational)> {
    let mut acc: std::collections::BTreeMap<(i64, Vec<i64>), f64> = Default::default();
    let prec = phi.prec / m;
    for a in 1..=m {
        if m % a != 0 {
            continue;
        }
        let d = m / a;
        for ((n24, w), c) in &phi.terms {
            let n = *n24 as f64 / 24.0;
            let mut re = 0.0;
            for b in 0..d {
                re += (2.0 * std::f64::consts::PI * n * b as f64 / d as f64).cos();
            }
            let v = (m as f64).powi(k - 1) * (d as f64).powi(-k) * re * c.to_f64().unwrap();
            if v.abs() < 1e-6 {
                continue;
            }
            let key = (a * n24 / d, w.iter().map(|x| a * x).collect::<Vec<_>>());
            if a * n24 % d != 0 || key.0 > prec {
                continue;
            }
            *acc.entry(key).or_default() += v;
        }
    }
    acc.into_iter()
        .filter(|(_, v)| v.abs() > 1e-6)
        .map(|(k, v)| {
            let r = v.round();
            assert!((v - r).abs() < 1e-6);
            (k, int(r as i64))
        })
        .collect()
}

#[test]
fn hecke_matches_triple_sum_oracle() {
    let phi = theta_e8(96).unwrap();
    for m in [2, 3, 4] {
        let h = hecke_minus(&phi, m).unwrap();
        assert_eq!(h.prec, 96 / m);
        let got: Vec<_> = h.terms.iter().map(|(k, v)| (k.clone(), v.clone())).collect();
        assert_eq!(got, hecke_oracle(&phi, m, 4));
        assert!(got.iter().all(|(_, c)| !c.is_zero()));
    }
}

#[test]
fn lift_table_json_roundtrip() {
    let phi = theta_ma1(4, 12 * 25).unwrap();
    let t = lift_table(&phi, 1, 25).unwrap();
    let s = t.to_json();
    assert_eq!(LiftTable::from_json(&s).unwrap(), t);
    assert!(LiftTable::from_json("{}").is_err());
    assert!(LiftTable::from_json(&s.replace("\"Q\"", "\"q\"")).is_err());
}
