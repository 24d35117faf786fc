//! The index raising Hecke operator and Fourier coefficients of the additive lift.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Pow, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{
    divisor_sigma, eisenstein_q, eta_multiplier_exponent, fmt_rational, int, kronecker, parse_rational,
    sl2_lift_diag, Rational,
};
use crate::error::{pre, Error, Result};
use crate::series::FourierSeries;

/// `(D, Q)` with `D` read in `1..=24` and `Q = 24 / D`, for even `D | 24`.
pub fn conductor_data(d: i64) -> Result<(i64, i64)> {
    let dd = if d.rem_euclid(24) == 0 { 24 } else { d.rem_euclid(24) };
    if dd % 2 != 0 || 24 % dd != 0 {
        return pre(format!("D = {dd} is not an even divisor of 24"));
    }
    Ok((dd, 24 / dd))
}

/// `v_eta^D(sigma_a)` as `+1` or `-1`.
pub fn multiplier_sign(d: i64, q: i64, a: i64) -> Result<i64> {
    let sigma = sl2_lift_diag(a, q)?;
    let e = eta_multiplier_exponent(&sigma) as i64;
    match (d * e).rem_euclid(24) {
        0 => Ok(1),
        12 => Ok(-1),
        x => Err(Error::Precondition(format!(
            "v_eta^{d}(sigma_{a}) = zeta_24^{x} is not rational; only real multiplier values are supported"
        ))),
    }
}

fn check_lift_source(phi: &FourierSeries) -> Result<(i64, i64, i64)> {
    if phi.shape.k2 % 2 != 0 {
        return pre("Hecke operators need integral weight");
    }
    let (d, q) = conductor_data(phi.shape.d)?;
    if q % 2 == 1 && !phi.shape.heisenberg_trivial() {
        return pre("for odd Q the lattice L(t) must be even");
    }
    Ok((phi.shape.k2 / 2, d, q))
}

fn pow_rat(a: i64, e: i64) -> Rational {
    if e >= 0 {
        Rational::from_integer(BigInt::from(a).pow(e as u32))
    } else {
        Rational::new(BigInt::one(), BigInt::from(a).pow((-e) as u32))
    }
}

fn divisors(n: i64) -> Vec<i64> {
    (1..=n).filter(|d| n % d == 0).collect()
}

/// Normalized operator `m^-1 (phi | T_-^(Q)(m))` at coefficient level.
pub fn hecke_minus(phi: &FourierSeries, m: i64) -> Result<FourierSeries> {
    if m < 1 {
        return pre("m must be >= 1");
    }
    let (k, d, q) = check_lift_source(phi)?;
    if m.gcd(&q) != 1 {
        return pre(format!("gcd(m, Q) = gcd({m}, {q}) != 1"));
    }
    let mut shape = phi.shape.clone();
    shape.t = &shape.t * int(m);
    shape.d = (d * m).rem_euclid(24);
    let prec = Integer::div_floor(&phi.prec, &m);
    let mut out = FourierSeries::empty(shape, prec, phi.den);
    for a in divisors(m) {
        let dd = m / a;
        let factor = pow_rat(a, k - 1) * int(multiplier_sign(d, q, a)?);
        for ((n24, w), c) in &phi.terms {
            if n24 % d != 0 || (n24 / d) % dd != 0 {
                continue;
            }
            let n2 = a * n24 / dd;
            if n2 > prec {
                continue;
            }
            out.add_term(n2, w.iter().map(|x| x * a).collect(), c * &factor);
        }
    }
    out.normalize();
    Ok(out)
}

struct LiftContext {
    k: i64,
    d: i64,
    q: i64,
    signs: BTreeMap<i64, Rational>,
}

impl LiftContext {
    fn new(phi: &FourierSeries, mu: i64) -> Result<LiftContext> {
        let (k, d, q) = check_lift_source(phi)?;
        if mu.gcd(&q) != 1 {
            return pre(format!("mu = {mu} is not a unit mod Q = {q}"));
        }
        Ok(LiftContext { k, d, q, signs: BTreeMap::new() })
    }

    fn factor(&mut self, a: i64) -> Result<Rational> {
        if let Some(f) = self.signs.get(&a) {
            return Ok(f.clone());
        }
        let f = pow_rat(a, self.k - 1) * int(multiplier_sign(self.d, self.q, a)?);
        self.signs.insert(a, f.clone());
        Ok(f)
    }

    fn coefficient(&mut self, phi: &FourierSeries, n: i64, w: &[i64], m: i64) -> Result<Rational> {
        let need = n * m * self.d;
        if need > phi.prec {
            return Err(Error::Precision { need, have: phi.prec });
        }
        let mut acc = Rational::zero();
        for a in divisors(n.gcd(&m)) {
            if w.iter().any(|x| x % a != 0) {
                continue;
            }
            let key: Vec<i64> = w.iter().map(|x| x / a).collect();
            let f = phi.coeff(need / (a * a), &key);
            if f.is_zero() {
                continue;
            }
            acc += self.factor(a)? * f;
        }
        Ok(acc)
    }
}

/// Coefficient of `Lift_mu(phi)` at `(n, w, m)`, `w` over the denominator of `phi`.
pub fn lift_coefficient(phi: &FourierSeries, n: i64, w: &[i64], m: i64, mu: i64) -> Result<Rational> {
    let mut ctx = LiftContext::new(phi, mu)?;
    if n < 1 || m < 1 {
        return pre("n and m must be >= 1");
    }
    let q = ctx.q;
    if (n - mu).rem_euclid(q) != 0 || (m - mu).rem_euclid(q) != 0 {
        return pre(format!("need n = m = mu mod Q, got n={n}, m={m}, mu={mu}, Q={q}"));
    }
    if w.len() != phi.shape.frame_rank() {
        return pre("key length does not match the frame rank");
    }
    ctx.coefficient(phi, n, w, m)
}

/// Fourier coefficients of `Lift_mu(phi)` with `n m <= bound`.
#[derive(Clone, Debug, PartialEq)]
pub struct LiftTable {
    pub mu: i64,
    pub q: i64,
    pub k2: i64,
    pub den: i64,
    pub bound: i64,
    /// `(n, w, m) -> c`; `m = 0` is the Eisenstein boundary row
    pub entries: BTreeMap<(i64, Vec<i64>, i64), Rational>,
}

pub fn lift_table(phi: &FourierSeries, mu: i64, bound: i64) -> Result<LiftTable> {
    let mut ctx = LiftContext::new(phi, mu)?;
    let (k, d, q) = (ctx.k, ctx.d, ctx.q);
    let r = phi.shape.frame_rank();
    let mut entries = BTreeMap::new();
    let f00 = phi.coeff(0, &vec![0; r]);
    if !f00.is_zero() {
        if d != 24 {
            return Err(Error::Inconsistent("f(0,0) != 0 with a nontrivial character".into()));
        }
        let e = eisenstein_q(k, 24 * bound)?;
        for n in 0..=bound {
            let c = e.coeff(24 * n) * &f00;
            if !c.is_zero() {
                entries.insert((n, vec![0; r], 0), c);
            }
        }
    }
    for n in 1..=bound {
        if (n - mu).rem_euclid(q) != 0 {
            continue;
        }
        for m in 1..=bound / n {
            if (m - mu).rem_euclid(q) != 0 {
                continue;
            }
            let need = n * m * d;
            if need > phi.prec {
                return Err(Error::Precision { need, have: phi.prec });
            }
            let mut cands: Vec<Vec<i64>> = Vec::new();
            for a in divisors(n.gcd(&m)) {
                let n24 = need / (a * a);
                let lo = (n24, vec![i64::MIN; r]);
                let hi = (n24, vec![i64::MAX; r]);
                for ((_, w), _) in phi.terms.range(lo..=hi) {
                    cands.push(w.iter().map(|x| x * a).collect());
                }
            }
            cands.sort();
            cands.dedup();
            for w in cands {
                let c = ctx.coefficient(phi, n, &w, m)?;
                if !c.is_zero() {
                    entries.insert((n, w, m), c);
                }
            }
        }
    }
    Ok(LiftTable { mu, q, k2: phi.shape.k2, den: phi.den, bound, entries })
}

impl LiftTable {
    pub fn get(&self, n: i64, w: &[i64], m: i64) -> Rational {
        self.entries.get(&(n, w.to_vec(), m)).cloned().unwrap_or_else(Rational::zero)
    }

    /// Entries with `m >= 1` violating `c(n,w,m) = c(m,w,n)`.
    pub fn asymmetries(&self) -> Vec<(i64, Vec<i64>, i64)> {
        self.entries
            .iter()
            .filter(|((_, _, m), _)| *m >= 1)
            .filter(|((n, w, m), c)| self.entries.get(&(*m, w.clone(), *n)) != Some(*c))
            .map(|(k, _)| k.clone())
            .collect()
    }

    fn sorted(&self) -> Vec<(&(i64, Vec<i64>, i64), &Rational)> {
        let mut v: Vec<_> = self.entries.iter().collect();
        v.sort_by(|a, b| {
            let ((n1, w1, m1), (n2, w2, m2)) = (a.0, b.0);
            (n1 * m1, n1, w1, m1).cmp(&(n2 * m2, n2, w2, m2))
        });
        v
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&LiftJson::from(self)).expect("serializable")
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(&LiftJson::from(self)).expect("serializable")
    }

    pub fn from_json(s: &str) -> Result<LiftTable> {
        let j: LiftJson = serde_json::from_str(s).map_err(|e| Error::Decode(e.to_string()))?;
        if j.q < 1 || 24 % j.q != 0 || j.den < 1 || j.mu.gcd(&j.q) != 1 {
            return Err(Error::Decode("inconsistent table header".into()));
        }
        let mut entries = BTreeMap::new();
        let mut len = None;
        for e in j.entries {
            if *len.get_or_insert(e.w.len()) != e.w.len() {
                return Err(Error::Decode("ragged keys".into()));
            }
            if e.n < 0 || e.m < 0 || (e.m >= 1 && e.n < 1) {
                return Err(Error::Decode("negative index".into()));
            }
            let c = parse_rational(&e.c).map_err(|_| Error::Decode(format!("bad rational {:?}", e.c)))?;
            if c.is_zero() {
                return Err(Error::Decode("stored zero".into()));
            }
            if entries.insert((e.n, e.w, e.m), c).is_some() {
                return Err(Error::Decode("duplicate entry".into()));
            }
        }
        Ok(LiftTable { mu: j.mu, q: j.q, k2: j.k2, den: j.den, bound: j.bound, entries })
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct EntryJson {
    n: i64,
    w: Vec<i64>,
    m: i64,
    c: String,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct LiftJson {
    mu: i64,
    #[serde(rename = "Q")]
    q: i64,
    k2: i64,
    den: i64,
    bound: i64,
    entries: Vec<EntryJson>,
}

impl From<&LiftTable> for LiftJson {
    fn from(t: &LiftTable) -> LiftJson {
        LiftJson {
            mu: t.mu,
            q: t.q,
            k2: t.k2,
            den: t.den,
            bound: t.bound,
            entries: t
                .sorted()
                .into_iter()
                .map(|((n, w, m), c)| EntryJson { n: *n, w: w.clone(), m: *m, c: fmt_rational(c) })
                .collect(),
        }
    }
}

/// `sigma_1(gcd(n, m, 2l_1, ..., 2l_4)) prod (-4 / 2l_i)` on the support
/// `n m = sum l_i^2`, zero elsewhere. `l2` holds the odd integers `2 l_i`.
pub fn phi2_closed_form(n: i64, l2: &[i64; 4], m: i64) -> Result<i64> {
    if n < 1 || m < 1 || n % 2 == 0 || m % 2 == 0 {
        return pre("n and m must be odd and positive");
    }
    if l2.iter().any(|x| x % 2 == 0) {
        return pre("every 2 l_i must be odd");
    }
    if 4 * n * m != l2.iter().map(|x| x * x).sum::<i64>() {
        return Ok(0);
    }
    let g = l2.iter().fold(n.gcd(&m), |g, x| g.gcd(x));
    let chi: i64 = l2.iter().map(|x| kronecker(-4, *x) as i64).product();
    let s: i64 = divisor_sigma(1, g as u64).try_into().unwrap();
    Ok(s * chi)
}
