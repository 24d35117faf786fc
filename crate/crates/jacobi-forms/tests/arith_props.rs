use jacobi_forms::arith::*;
use proptest::prelude::*;

#[derive(Clone, Copy)]
struct C(f64, f64);

impl C {
    fn mul(self, o: C) -> C {
        C(self.0 * o.0 - self.1 * o.1, self.0 * o.1 + self.1 * o.0)
    }
    fn div(self, o: C) -> C {
        let n = o.0 * o.0 + o.1 * o.1;
        C((self.0 * o.0 + self.1 * o.1) / n, (self.1 * o.0 - self.0 * o.1) / n)
    }
    fn exp(self) -> C {
        let r = self.0.exp();
        C(r * self.1.cos(), r * self.1.sin())
    }
    fn sqrt(self) -> C {
        let r = (self.0 * self.0 + self.1 * self.1).sqrt().sqrt();
        let th = self.1.atan2(self.0) / 2.0;
        C(r * th.cos(), r * th.sin())
    }
}

fn eta(tau: C) -> C {
    let pi = std::f64::consts::PI;
    let q = C(0.0, 2.0 * pi).mul(tau).exp();
    let mut acc = C(0.0, pi / 12.0).mul(tau).exp();
    let mut qn = q;
    for _ in 0..4000 {
        acc = acc.mul(C(1.0 - qn.0, -qn.1));
        qn = qn.mul(q);
    }
    acc
}

fn numeric_exponent(a: i64, b: i64, c: i64, d: i64) -> f64 {
    let tau = C(0.21, 0.93);
    let num = C(a as f64, 0.0).mul(tau);
    let num = C(num.0 + b as f64, num.1);
    let den = C(c as f64 * tau.0 + d as f64, c as f64 * tau.1);
    let at = num.div(den);
    let v = eta(at).div(den.sqrt().mul(eta(tau)));
    let e = v.1.atan2(v.0) / (2.0 * std::f64::consts::PI) * 24.0;
    e.rem_euclid(24.0)
}

#[test]
fn eta_exponent_matches_numerical_transformation() {
    let mut checked = 0;
    for a in -4i64..=4 {
        for b in -4i64..=4 {
            for c in -4i64..=4 {
                for d in -4i64..=4 {
                    if a * d - b * c != 1 {
                        continue;
                    }
                    let m = Sl2::new(a, b, c, d).unwrap();
                    let e = eta_multiplier_exponent(&m) as f64;
                    let x = numeric_exponent(a, b, c, d);
                    let diff = (x - e).rem_euclid(24.0);
                    assert!(diff < 1e-6 || diff > 24.0 - 1e-6, "{m}: exact {e} numeric {x}");
                    checked += 1;
                }
            }
        }
    }
    assert!(checked > 100);
}

fn word(steps: &[(bool, i64)]) -> Sl2 {
    let mut m = Sl2::identity();
    for &(is_s, k) in steps {
        if is_s {
            m = m.mul(&Sl2::s());
        } else {
            m = m.mul(&Sl2::new(1, k, 0, 1).unwrap());
        }
    }
    m
}

fn sl2_strategy() -> impl Strategy<Value = Sl2> {
    prop::collection::vec((any::<bool>(), -5i64..=5), 0..8).prop_map(|w| word(&w))
}

const EVEN_D: [u32; 8] = [2, 4, 6, 8, 12, 24, 2, 4];

proptest! {
    #[test]
    fn even_power_is_a_character(a in sl2_strategy(), b in sl2_strategy(), i in 0usize..8) {
        let d = EVEN_D[i];
        let lhs = d * eta_multiplier_exponent(&a.mul(&b)) % 24;
        let rhs = (d * eta_multiplier_exponent(&a) + d * eta_multiplier_exponent(&b)) % 24;
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn principal_congruence_kernel(a in sl2_strategy(), k in -3i64..=3, lower in any::<bool>(), i in 0usize..6) {
        let d = EVEN_D[i] as i64;
        let q = 24 / d;
        let u = if lower { Sl2::new(1, 0, q * k, 1).unwrap() } else { Sl2::new(1, q * k, 0, 1).unwrap() };
        let g = a.mul(&u).mul(&a.inverse());
        prop_assert!(g.congruent(q, 1, 0, 0, 1));
        prop_assert_eq!((d as u32 * eta_multiplier_exponent(&g)) % 24, 0);
    }

    #[test]
    fn lift_predicates_and_independence(a in -60i64..60, i in 0usize..6) {
        let d = EVEN_D[i] as i64;
        let q = 24 / d;
        prop_assume!(num_integer::Integer::gcd(&a, &q) == 1);
        let m = sl2_lift_diag(a, q).unwrap();
        let ainv = (1..=q).find(|x| (x * a).rem_euclid(q) == 1 % q).unwrap_or(0);
        prop_assert!(m.congruent(q, ainv, 0, 0, a.rem_euclid(q)));
        // A second lift differs by an element of Gamma(Q).
        let other = m.mul(&Sl2::new(1, q, 0, 1).unwrap()).mul(&Sl2::new(1, 0, -q, 1).unwrap());
        prop_assert!(other != m);
        prop_assert!(other.congruent(q, ainv, 0, 0, a.rem_euclid(q)));
        let e1 = d as u32 * eta_multiplier_exponent(&m) % 24;
        let e2 = d as u32 * eta_multiplier_exponent(&other) % 24;
        prop_assert_eq!(e1, e2);
        let shifted = sl2_lift_diag(a + q, q).unwrap();
        prop_assert_eq!(e1, d as u32 * eta_multiplier_exponent(&shifted) % 24);
    }

    #[test]
    fn kronecker_periods(n in 1i64..5000) {
        if n % 2 == 1 {
            prop_assert_eq!(kronecker(-4, n), kronecker(-4, n + 4));
        }
        prop_assert_eq!(kronecker(12, n), kronecker(12, n + 12));
        let g4 = num_integer::Integer::gcd(&n, &4);
        prop_assert_eq!(kronecker(-4, n) == 0, g4 != 1);
        let g12 = num_integer::Integer::gcd(&n, &12);
        prop_assert_eq!(kronecker(12, n) == 0, g12 != 1);
    }

    #[test]
    fn kronecker_multiplicative(m in 1i64..300, n in 1i64..300) {
        prop_assert_eq!(kronecker(-4, m * n), kronecker(-4, m) * kronecker(-4, n));
        prop_assert_eq!(kronecker(12, m * n), kronecker(12, m) * kronecker(12, n));
    }
}
