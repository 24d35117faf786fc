//! Exact number-theoretic primitives.
//!
//! Rationals are `BigRational` (always reduced, positive denominator).
//! The eta multiplier is returned as an exponent `e` mod 24 with
//! `v_eta(A) = exp(2 pi i e / 24)`, computed from Dedekind sums:
//!
//! `v_eta(A) = exp(pi i [(a+d)/(12c) - s(d,c) - 1/4])` for `c > 0`,
//! `v_eta(T^b) = zeta_24^b`, and the principal-branch rule for `-A`.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{pre, Error, Result};

pub type Rational = BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Formats as `p` or `p/q`.
pub fn fmt_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parses `p`, `-p` or `p/q`; rejects zero denominators.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Decode(format!("bad rational {s:?}"));
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: BigInt = n.parse().map_err(|_| bad())?;
    let d: BigInt = d.parse().map_err(|_| bad())?;
    if d.is_zero() {
        return Err(bad());
    }
    Ok(Rational::new(n, d))
}

pub fn is_integer(r: &Rational) -> bool {
    r.denom().is_one()
}

/// Integer value of an integral rational as i64.
pub fn to_i64(r: &Rational) -> Option<i64> {
    if r.denom().is_one() {
        r.numer().to_i64()
    } else {
        None
    }
}

/// Least non-negative residue of `a` modulo `m > 0`.
pub fn modp(a: i64, m: i64) -> i64 {
    a.rem_euclid(m)
}

/// Reduces a rational modulo the positive integer `m` into `[0, m)`.
pub fn rat_mod(r: &Rational, m: i64) -> Rational {
    let m = int(m);
    let q = (r / &m).floor();
    r - q * m
}

/// Kronecker symbol `(a/n)` for arbitrary integers.
pub fn kronecker(a: i64, n: i64) -> i32 {
    if n == 0 {
        return if a == 1 || a == -1 { 1 } else { 0 };
    }
    let mut a = a as i128;
    let mut n = n as i128;
    let mut sign = 1i32;
    if n < 0 {
        n = -n;
        if a < 0 {
            sign = -sign;
        }
    }
    if a % 2 == 0 && n % 2 == 0 {
        return 0;
    }
    let mut v = 0;
    while n % 2 == 0 {
        n /= 2;
        v += 1;
    }
    if v % 2 == 1 {
        let r = a.rem_euclid(8);
        if r == 3 || r == 5 {
            sign = -sign;
        }
    }
    // Jacobi symbol (a/n) with n odd positive.
    a = a.rem_euclid(n);
    while a != 0 {
        while a % 2 == 0 {
            a /= 2;
            let r = n % 8;
            if r == 3 || r == 5 {
                sign = -sign;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a % 4 == 3 && n % 4 == 3 {
            sign = -sign;
        }
        a %= n;
    }
    if n == 1 {
        sign
    } else {
        0
    }
}

/// Dedekind sum `s(h, k)` for `k > 0`, computed by reciprocity.
pub fn dedekind_sum(h: &BigInt, k: &BigInt) -> Rational {
    assert!(k.is_positive(), "dedekind_sum needs k > 0");
    let g = h.gcd(k);
    let (mut h, mut k) = (h / &g, k / &g);
    let mut acc = Rational::zero();
    let mut sign = Rational::one();
    let twelve = int(12);
    let quarter = rat(1, 4);
    loop {
        h = h.mod_floor(&k);
        if h.is_zero() {
            return acc;
        }
        // s(h,k) = -s(k,h) + (h/k + k/h + 1/(hk))/12 - 1/4
        let hr = Rational::from_integer(h.clone());
        let kr = Rational::from_integer(k.clone());
        let term = (&hr / &kr + &kr / &hr + Rational::one() / (&hr * &kr)) / &twelve - &quarter;
        acc += &sign * term;
        sign = -sign;
        std::mem::swap(&mut h, &mut k);
    }
}

/// An element of SL2(Z).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Sl2 {
    pub a: BigInt,
    pub b: BigInt,
    pub c: BigInt,
    pub d: BigInt,
}

impl Sl2 {
    pub fn new(a: i64, b: i64, c: i64, d: i64) -> Result<Sl2> {
        Sl2::from_big(a.into(), b.into(), c.into(), d.into())
    }

    pub fn from_big(a: BigInt, b: BigInt, c: BigInt, d: BigInt) -> Result<Sl2> {
        if &a * &d - &b * &c != BigInt::one() {
            return pre("determinant must be 1");
        }
        Ok(Sl2 { a, b, c, d })
    }

    pub fn identity() -> Sl2 {
        Sl2::new(1, 0, 0, 1).unwrap()
    }

    pub fn t() -> Sl2 {
        Sl2::new(1, 1, 0, 1).unwrap()
    }

    pub fn s() -> Sl2 {
        Sl2::new(0, -1, 1, 0).unwrap()
    }

    pub fn mul(&self, o: &Sl2) -> Sl2 {
        Sl2 {
            a: &self.a * &o.a + &self.b * &o.c,
            b: &self.a * &o.b + &self.b * &o.d,
            c: &self.c * &o.a + &self.d * &o.c,
            d: &self.c * &o.b + &self.d * &o.d,
        }
    }

    pub fn inverse(&self) -> Sl2 {
        Sl2 { a: self.d.clone(), b: -&self.b, c: -&self.c, d: self.a.clone() }
    }

    pub fn neg(&self) -> Sl2 {
        Sl2 { a: -&self.a, b: -&self.b, c: -&self.c, d: -&self.d }
    }

    /// True when `self ≡ (a0 b0; c0 d0) mod q`.
    pub fn congruent(&self, q: i64, a0: i64, b0: i64, c0: i64, d0: i64) -> bool {
        let q = BigInt::from(q);
        let m = |x: &BigInt, y: i64| (x - BigInt::from(y)).mod_floor(&q).is_zero();
        m(&self.a, a0) && m(&self.b, b0) && m(&self.c, c0) && m(&self.d, d0)
    }
}

impl fmt::Display for Sl2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{};{},{})", self.a, self.b, self.c, self.d)
    }
}

/// Exponent `e` (mod 24) of the eta multiplier, `v_eta(A) = zeta_24^e`.
pub fn eta_multiplier_exponent(m: &Sl2) -> u32 {
    let e: BigInt = if m.c.is_positive() {
        let c = Rational::from_integer(m.c.clone());
        let ad = Rational::from_integer(&m.a + &m.d);
        let x = ad / c - int(12) * dedekind_sum(&m.d, &m.c) - int(3);
        debug_assert!(x.is_integer());
        x.to_integer()
    } else if m.c.is_negative() {
        BigInt::from(eta_multiplier_exponent(&m.neg())) + 6
    } else if m.d.is_one() {
        m.b.clone()
    } else {
        -&m.b + 18
    };
    e.mod_floor(&BigInt::from(24)).to_u32().unwrap()
}

fn inv_mod(a: i64, m: i64) -> Option<i64> {
    let g = num_integer::Integer::extended_gcd(&(a.rem_euclid(m) as i128), &(m as i128));
    if g.gcd != 1 {
        return None;
    }
    Some((g.x.rem_euclid(m as i128)) as i64)
}

/// A matrix of SL2(Z) congruent to `diag(a^-1, a)` modulo `q`.
pub fn sl2_lift_diag(a: i64, q: i64) -> Result<Sl2> {
    if q <= 0 {
        return pre("Q must be positive");
    }
    if a.gcd(&q) != 1 {
        return pre(format!("gcd({a}, {q}) != 1"));
    }
    if q == 1 {
        return Ok(Sl2::identity());
    }
    let alpha = inv_mod(a, q).unwrap();
    let q2 = q * q;
    let delta = inv_mod(alpha, q2).unwrap();
    let n = ((alpha as i128 * delta as i128 - 1) / q2 as i128) as i64;
    let beta = if n == 0 { 0 } else { q };
    Sl2::new(alpha, beta, q * n, delta)
}

/// `sigma_s(n) = sum_{d | n} d^s`.
pub fn divisor_sigma(s: u32, n: u64) -> BigInt {
    assert!(n >= 1, "divisor_sigma needs n >= 1");
    let mut acc = BigInt::zero();
    let mut d = 1u64;
    while d * d <= n {
        if n % d == 0 {
            acc += BigInt::from(d).pow(s);
            let e = n / d;
            if e != d {
                acc += BigInt::from(e).pow(s);
            }
        }
        d += 1;
    }
    acc
}

/// Bernoulli number `B_k` with `B_1 = -1/2`.
pub fn bernoulli(k: usize) -> Rational {
    let mut b: Vec<Rational> = Vec::with_capacity(k + 1);
    for m in 0..=k {
        if m == 0 {
            b.push(Rational::one());
            continue;
        }
        let mut s = Rational::zero();
        let mut binom = BigInt::one();
        for j in 0..m {
            s += Rational::from_integer(binom.clone()) * &b[j];
            binom = binom * BigInt::from(m + 1 - j) / BigInt::from(j + 1);
        }
        b.push(-s / Rational::from_integer(BigInt::from(m + 1)));
    }
    b.pop().unwrap()
}

/// A truncated q-series with exponents in units of 1/24.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QSeries {
    pub terms: BTreeMap<i64, Rational>,
    /// every key `<= prec` is present and exact
    pub prec: i64,
}

impl QSeries {
    pub fn zero(prec: i64) -> QSeries {
        QSeries { terms: BTreeMap::new(), prec }
    }

    pub fn one(prec: i64) -> QSeries {
        let mut s = QSeries::zero(prec);
        s.add_term(0, Rational::one());
        s
    }

    pub fn add_term(&mut self, k: i64, c: Rational) {
        if k > self.prec || c.is_zero() {
            return;
        }
        let e = self.terms.entry(k).or_insert_with(Rational::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&k);
        }
    }

    pub fn coeff(&self, k: i64) -> Rational {
        self.terms.get(&k).cloned().unwrap_or_else(Rational::zero)
    }

    /// Lowest key present, or `prec + 1` when the series vanishes to precision.
    pub fn min_support(&self) -> i64 {
        self.terms.keys().next().copied().unwrap_or(self.prec + 1)
    }

    pub fn truncate(&mut self, prec: i64) {
        if prec < self.prec {
            self.prec = prec;
            self.terms.retain(|k, _| *k <= prec);
        }
    }

    pub fn mul(&self, o: &QSeries) -> QSeries {
        let prec = (self.prec + o.min_support()).min(o.prec + self.min_support());
        let mut out = QSeries::zero(prec);
        for (i, a) in &self.terms {
            for (j, b) in &o.terms {
                if i + j > prec {
                    break;
                }
                out.add_term(i + j, a * b);
            }
        }
        out
    }

    pub fn add(&self, o: &QSeries) -> QSeries {
        let mut out = QSeries::zero(self.prec.min(o.prec));
        for (k, c) in self.terms.iter().chain(o.terms.iter()) {
            out.add_term(*k, c.clone());
        }
        out
    }

    pub fn scale(&self, c: &Rational) -> QSeries {
        let mut out = QSeries::zero(self.prec);
        for (k, v) in &self.terms {
            out.add_term(*k, v * c);
        }
        out
    }

    /// Key map `n24 -> c * n24`.
    pub fn q_rescale(&self, c: i64) -> Result<QSeries> {
        if c <= 0 {
            return pre("q_rescale needs c > 0");
        }
        Ok(QSeries {
            terms: self.terms.iter().map(|(k, v)| (k * c, v.clone())).collect(),
            prec: self.prec * c,
        })
    }
}

/// `E_k = 1 - (2k/B_k) sum sigma_{k-1}(n) q^n` to `n24 <= prec`.
pub fn eisenstein_q(k: i64, prec: i64) -> Result<QSeries> {
    if k < 4 || k % 2 != 0 {
        return Err(Error::UnsupportedWeight(k));
    }
    let factor = -int(2 * k) / bernoulli(k as usize);
    let mut s = QSeries::one(prec);
    let mut n = 1i64;
    while 24 * n <= prec {
        let c = Rational::from_integer(divisor_sigma((k - 1) as u32, n as u64)) * &factor;
        s.add_term(24 * n, c);
        n += 1;
    }
    Ok(s)
}

/// `prod_{n>=1} (1 - q^n)` in ordinary exponents, up to `q^m`.
fn euler_product(m: i64) -> Vec<BigInt> {
    let mut p = vec![BigInt::zero(); (m + 1).max(1) as usize];
    p[0] = BigInt::one();
    // Pentagonal number theorem.
    let mut j = 1i64;
    loop {
        let g1 = j * (3 * j - 1) / 2;
        let g2 = j * (3 * j + 1) / 2;
        if g1 > m {
            break;
        }
        let sgn = if j % 2 == 1 { -1 } else { 1 };
        p[g1 as usize] += sgn;
        if g2 <= m {
            p[g2 as usize] += sgn;
        }
        j += 1;
    }
    p
}

/// `eta(tau)^p` for any integer `p`, to `n24 <= prec`. The lowest key is `p`.
pub fn eta_power(p: i64, prec: i64) -> QSeries {
    let mut out = QSeries::zero(prec);
    if prec < p {
        return out;
    }
    let m = (prec - p) / 24;
    let base = euler_product(m);
    let len = (m + 1) as usize;
    let mut acc = vec![BigInt::zero(); len];
    acc[0] = BigInt::one();
    let factor: Vec<BigInt> = if p >= 0 {
        base
    } else {
        // Power-series inverse of the Euler product.
        let mut inv = vec![BigInt::zero(); len];
        inv[0] = BigInt::one();
        for i in 1..len {
            let mut s = BigInt::zero();
            for j in 1..=i {
                s -= &base[j] * &inv[i - j];
            }
            inv[i] = s;
        }
        inv
    };
    for _ in 0..p.unsigned_abs() {
        let mut next = vec![BigInt::zero(); len];
        for (i, a) in acc.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in factor.iter().enumerate().take(len - i) {
                if !b.is_zero() {
                    next[i + j] += a * b;
                }
            }
        }
        acc = next;
    }
    for (i, c) in acc.into_iter().enumerate() {
        out.add_term(p + 24 * i as i64, Rational::from_integer(c));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kronecker_examples() {
        assert_eq!(kronecker(-4, 5), 1);
        assert_eq!(kronecker(-4, 2), 0);
        assert_eq!(kronecker(12, 5), -1);
        assert_eq!(kronecker(-4, -1), -1);
        assert_eq!(kronecker(12, -5), kronecker(12, 5));
        assert_eq!(kronecker(-4, -3), -kronecker(-4, 3));
    }

    #[test]
    fn dedekind_sum_matches_definition() {
        fn saw(x: &Rational) -> Rational {
            if x.is_integer() {
                Rational::zero()
            } else {
                x - x.floor() - rat(1, 2)
            }
        }
        for k in 1..30i64 {
            for h in -40..40i64 {
                if h.gcd(&k) != 1 {
                    continue;
                }
                let mut s = Rational::zero();
                for r in 1..k {
                    s += saw(&rat(r, k)) * saw(&rat(h * r, k));
                }
                assert_eq!(dedekind_sum(&h.into(), &k.into()), s, "s({h},{k})");
            }
        }
    }

    #[test]
    fn eta_exponent_examples() {
        assert_eq!(eta_multiplier_exponent(&Sl2::t()), 1);
        assert_eq!(eta_multiplier_exponent(&Sl2::identity()), 0);
        assert_eq!(eta_multiplier_exponent(&Sl2::s()), 21);
    }

    #[test]
    fn lift_examples() {
        assert_eq!(sl2_lift_diag(1, 7).unwrap(), Sl2::identity());
        assert_eq!(sl2_lift_diag(5, 1).unwrap(), Sl2::identity());
        let m = sl2_lift_diag(3, 4).unwrap();
        assert!(m.congruent(4, 3, 0, 0, 3));
        assert_eq!(m, Sl2::new(3, 4, 8, 11).unwrap());
        assert!(sl2_lift_diag(2, 4).is_err());
    }

    #[test]
    fn sigma_examples() {
        assert_eq!(divisor_sigma(1, 1), 1.into());
        assert_eq!(divisor_sigma(1, 3), 4.into());
        assert_eq!(divisor_sigma(3, 2), 9.into());
    }

    #[test]
    fn bernoulli_values() {
        assert_eq!(bernoulli(4), rat(-1, 30));
        assert_eq!(bernoulli(6), rat(1, 42));
        assert_eq!(bernoulli(12), rat(-691, 2730));
    }

    #[test]
    fn eisenstein_examples() {
        let e4 = eisenstein_q(4, 72).unwrap();
        let got: Vec<_> = (0..4).map(|n| e4.coeff(24 * n)).collect();
        assert_eq!(got, vec![int(1), int(240), int(2160), int(6720)]);
        assert_eq!(eisenstein_q(6, 24).unwrap().coeff(24), int(-504));
        assert_eq!(eisenstein_q(5, 24), Err(Error::UnsupportedWeight(5)));
        assert_eq!(eisenstein_q(2, 24), Err(Error::UnsupportedWeight(2)));
    }

    #[test]
    fn eta_keys() {
        let e = eta_power(1, 130);
        let keys: Vec<_> = e.terms.iter().map(|(k, v)| (*k, v.clone())).collect();
        assert_eq!(keys, vec![(1, int(1)), (25, int(-1)), (49, int(-1)), (121, int(1))]);
        let prod = eta_power(-1, 200).mul(&eta_power(1, 200));
        assert_eq!(prod.terms.len(), 1);
        assert_eq!(prod.coeff(0), int(1));
    }

    #[test]
    fn rational_text_round_trip() {
        for s in ["0", "-3", "7/12", "-5/2"] {
            assert_eq!(fmt_rational(&parse_rational(s).unwrap()), s);
        }
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }
}
