//! Weil representation of a discriminant form and its joint eigenvectors.

use std::fmt;
use std::sync::Arc;

use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde_json::{json, Value};

use crate::arith::{fmt_rational, int, kronecker, rat, Rational};
use crate::error::{pre, Result};
use crate::forms::combination;
use crate::lattice::Lattice;
use crate::linalg::QMat;
use crate::series::FourierSeries;

/// Coefficients (low to high) of the cyclotomic polynomial `Phi_n`.
pub fn cyclotomic_poly(n: usize) -> Vec<i64> {
    assert!(n >= 1);
    let mut p = vec![0i64; n + 1];
    p[0] = -1;
    p[n] = 1;
    for d in 1..n {
        if n % d == 0 {
            p = poly_div_exact(&p, &cyclotomic_poly(d));
        }
    }
    p
}

fn poly_div_exact(a: &[i64], b: &[i64]) -> Vec<i64> {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    let mut q = vec![0i64; a.len() - db];
    for i in (0..q.len()).rev() {
        let c = r[i + db];
        q[i] = c;
        for (j, bj) in b.iter().enumerate() {
            r[i + j] -= c * bj;
        }
    }
    debug_assert!(r.iter().all(|x| *x == 0));
    q
}

/// `Q(zeta_n)` with reduction tables for the powers of `zeta_n`.
#[derive(Debug)]
pub struct CycField {
    pub n: usize,
    pub phi: Vec<i64>,
    powers: Vec<Vec<Rational>>,
}

impl CycField {
    pub fn new(n: usize) -> Arc<CycField> {
        let phi = cyclotomic_poly(n);
        let deg = phi.len() - 1;
        let mut powers = Vec::with_capacity(n);
        let mut cur = vec![Rational::zero(); deg];
        if deg > 0 {
            cur[0] = Rational::one();
        }
        for _ in 0..n {
            powers.push(cur.clone());
            let mut next = vec![Rational::zero(); deg];
            for i in 0..deg.saturating_sub(1) {
                next[i + 1] = cur[i].clone();
            }
            let top = cur[deg - 1].clone();
            if !top.is_zero() {
                for i in 0..deg {
                    next[i] -= &top * int(phi[i]);
                }
            }
            cur = next;
        }
        Arc::new(CycField { n, phi, powers })
    }

    pub fn degree(&self) -> usize {
        self.phi.len() - 1
    }
}

/// Element of a cyclotomic field, reduced modulo `Phi_n`.
#[derive(Clone)]
pub struct Cyc {
    pub field: Arc<CycField>,
    pub c: Vec<Rational>,
}

impl PartialEq for Cyc {
    fn eq(&self, o: &Cyc) -> bool {
        self.field.n == o.field.n && self.c == o.c
    }
}

impl fmt::Debug for Cyc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Cyc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (k, c) in self.c.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mon = match k {
                0 => String::new(),
                1 => "z".to_string(),
                _ => format!("z^{k}"),
            };
            let s = if mon.is_empty() {
                fmt_rational(c)
            } else if c.is_one() {
                mon
            } else if *c == -Rational::one() {
                format!("-{mon}")
            } else {
                format!("{}*{mon}", fmt_rational(c))
            };
            parts.push(s);
        }
        if parts.is_empty() {
            return write!(f, "0");
        }
        let mut out = parts[0].clone();
        for p in &parts[1..] {
            match p.strip_prefix('-') {
                Some(rest) => out.push_str(&format!(" - {rest}")),
                None => out.push_str(&format!(" + {p}")),
            }
        }
        write!(f, "{out}")
    }
}

impl Cyc {
    pub fn zero(f: &Arc<CycField>) -> Cyc {
        Cyc { field: f.clone(), c: vec![Rational::zero(); f.degree()] }
    }

    pub fn rational(f: &Arc<CycField>, r: Rational) -> Cyc {
        let mut z = Cyc::zero(f);
        z.c[0] = r;
        z
    }

    pub fn one(f: &Arc<CycField>) -> Cyc {
        Cyc::rational(f, Rational::one())
    }

    /// `zeta_n^k`.
    pub fn zeta(f: &Arc<CycField>, k: i64) -> Cyc {
        let i = k.rem_euclid(f.n as i64) as usize;
        Cyc { field: f.clone(), c: f.powers[i].clone() }
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(|x| x.is_zero())
    }

    pub fn to_rational(&self) -> Option<Rational> {
        if self.c.iter().skip(1).all(|x| x.is_zero()) {
            Some(self.c[0].clone())
        } else {
            None
        }
    }

    pub fn add(&self, o: &Cyc) -> Cyc {
        Cyc { field: self.field.clone(), c: self.c.iter().zip(&o.c).map(|(a, b)| a + b).collect() }
    }

    pub fn sub(&self, o: &Cyc) -> Cyc {
        Cyc { field: self.field.clone(), c: self.c.iter().zip(&o.c).map(|(a, b)| a - b).collect() }
    }

    pub fn neg(&self) -> Cyc {
        Cyc { field: self.field.clone(), c: self.c.iter().map(|a| -a).collect() }
    }

    pub fn scale(&self, r: &Rational) -> Cyc {
        Cyc { field: self.field.clone(), c: self.c.iter().map(|a| a * r).collect() }
    }

    pub fn mul(&self, o: &Cyc) -> Cyc {
        let deg = self.field.degree();
        let mut raw = vec![Rational::zero(); 2 * deg];
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.c.iter().enumerate() {
                if !b.is_zero() {
                    raw[i + j] += a * b;
                }
            }
        }
        let mut out = vec![Rational::zero(); deg];
        for (k, x) in raw.into_iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            if k < deg {
                out[k] += x;
            } else {
                for (t, p) in self.field.powers[k % self.field.n].iter().enumerate() {
                    if !p.is_zero() {
                        out[t] += &x * p;
                    }
                }
            }
        }
        Cyc { field: self.field.clone(), c: out }
    }

    /// Complex conjugation `zeta -> zeta^-1`.
    pub fn conj(&self) -> Cyc {
        let mut out = Cyc::zero(&self.field);
        for (k, a) in self.c.iter().enumerate() {
            if !a.is_zero() {
                out = out.add(&Cyc::zeta(&self.field, -(k as i64)).scale(a));
            }
        }
        out
    }

    pub fn inv(&self) -> Option<Cyc> {
        if self.is_zero() {
            return None;
        }
        let deg = self.field.degree();
        let mut m = QMat::zeros(deg, deg);
        for j in 0..deg {
            let col = self.mul(&Cyc::zeta(&self.field, j as i64));
            for i in 0..deg {
                m.set(i, j, col.c[i].clone());
            }
        }
        let inv = m.inverse()?;
        Some(Cyc { field: self.field.clone(), c: inv.col(0) })
    }

    /// Image under `Q(zeta_n) -> Q(zeta_m)` for `n | m`.
    pub fn lift(&self, target: &Arc<CycField>) -> Cyc {
        assert_eq!(target.n % self.field.n, 0);
        let step = (target.n / self.field.n) as i64;
        let mut out = Cyc::zero(target);
        for (k, a) in self.c.iter().enumerate() {
            if !a.is_zero() {
                out = out.add(&Cyc::zeta(target, k as i64 * step).scale(a));
            }
        }
        out
    }
}

fn squarefree_split(n: i64) -> (i64, i64) {
    let (mut f, mut r, mut m, mut p) = (1i64, 1i64, n, 2i64);
    while p * p <= m {
        let mut e = 0;
        while m % p == 0 {
            m /= p;
            e += 1;
        }
        f *= p.pow(e / 2);
        if e % 2 == 1 {
            r *= p;
        }
        p += 1;
    }
    (f, r * m)
}

/// `sqrt(r)` for squarefree `r > 0` inside `Q(zeta_m)`, via Gauss sums.
pub fn sqrt_in(r: i64, field: &Arc<CycField>) -> Result<Cyc> {
    let m = field.n as i64;
    let odd = if r % 2 == 0 { r / 2 } else { r };
    if r < 1 || m % (4 * odd) != 0 || (r % 2 == 0 && m % 8 != 0) {
        return pre(format!("sqrt({r}) does not lie in Q(zeta_{m})"));
    }
    let mut acc = Cyc::one(field);
    let mut rest = r;
    if rest % 2 == 0 {
        rest /= 2;
        acc = acc.mul(&Cyc::zeta(field, m / 8).add(&Cyc::zeta(field, -m / 8)));
    }
    let mut p = 3;
    while rest > 1 {
        if rest % p == 0 {
            rest /= p;
            let mut g = Cyc::zero(field);
            for x in 1..p {
                let k = kronecker(x, p) as i64;
                g = g.add(&Cyc::zeta(field, x * (m / p)).scale(&int(k)));
            }
            if p % 4 == 3 {
                g = g.mul(&Cyc::zeta(field, -m / 4));
            }
            acc = acc.mul(&g);
        }
        p += 2;
    }
    debug_assert!(acc.mul(&acc) == Cyc::rational(field, int(r)));
    Ok(acc)
}

/// `a + b sqrt(r)` with `a, b` in `Q(zeta_N)` and `r` squarefree.
#[derive(Clone, Debug, PartialEq)]
pub struct CycExt {
    pub a: Cyc,
    pub b: Cyc,
    pub r: i64,
}

impl CycExt {
    pub fn from_cyc(a: Cyc, r: i64) -> CycExt {
        let b = Cyc::zero(&a.field);
        CycExt { a, b, r }
    }

    /// `zeta_N^k * q * sqrt(|D|)^e` for `e` in `{-1, 0, 1}`.
    pub fn monomial(f: &Arc<CycField>, k: i64, q: &Rational, dabs: i64, e: i32) -> CycExt {
        let (sq, r) = squarefree_split(dabs);
        let z = Cyc::zeta(f, k);
        let (coef, rad) = match e {
            0 => (q.clone(), false),
            1 => (q * int(sq), r != 1),
            _ => (q / int(sq * r), r != 1),
        };
        if rad {
            CycExt { a: Cyc::zero(f), b: z.scale(&coef), r }
        } else {
            CycExt { a: z.scale(&coef), b: Cyc::zero(f), r }
        }
    }

    pub fn zero_like(&self) -> CycExt {
        CycExt { a: Cyc::zero(&self.a.field), b: Cyc::zero(&self.a.field), r: self.r }
    }

    pub fn add(&self, o: &CycExt) -> CycExt {
        CycExt { a: self.a.add(&o.a), b: self.b.add(&o.b), r: self.r }
    }

    pub fn mul(&self, o: &CycExt) -> CycExt {
        let rr = int(self.r);
        CycExt {
            a: self.a.mul(&o.a).add(&self.b.mul(&o.b).scale(&rr)),
            b: self.a.mul(&o.b).add(&self.b.mul(&o.a)),
            r: self.r,
        }
    }

    pub fn conj(&self) -> CycExt {
        CycExt { a: self.a.conj(), b: self.b.conj(), r: self.r }
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.b.is_zero() && self.a == Cyc::one(&self.a.field)
    }

    pub fn embed(&self, target: &Arc<CycField>, sqrt_r: &Cyc) -> Cyc {
        self.a.lift(target).add(&self.b.lift(target).mul(sqrt_r))
    }
}

impl fmt::Display for CycExt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.a.is_zero(), self.b.is_zero()) {
            (_, true) => write!(f, "{}", self.a),
            (true, false) => write!(f, "({})*s", self.b),
            _ => write!(f, "{} + ({})*s", self.a, self.b),
        }
    }
}

/// `U(T)` and `U(S)` of the Weil representation of `L^v / L`.
#[derive(Clone, Debug)]
pub struct WeilPair {
    pub lattice: String,
    pub labels: Vec<String>,
    pub rank: usize,
    /// conductor `N` of the coefficient field
    pub n: usize,
    /// `|D(L)|`
    pub dabs: i64,
    /// `U(T)` diagonal as exponents of `zeta_N`
    pub ut_exp: Vec<i64>,
    /// `U(S) = zeta_8^scalar_zeta8 |D|^(-1/2) (zeta_N^us_exp)`
    pub us_exp: Vec<Vec<i64>>,
    pub scalar_zeta8: i64,
    pub ut: Vec<CycExt>,
    pub us: Vec<Vec<CycExt>>,
}

pub fn weil_matrices(lat: &Lattice) -> Result<WeilPair> {
    if !lat.is_even() {
        return pre("the Weil representation needs an even lattice");
    }
    let disc = lat.discriminant_group()?;
    let n = 24i64.lcm(&lat.level()?) as usize;
    let field = CycField::new(n);
    let nn = int(n as i64);
    let to_exp = |x: Rational| -> i64 {
        let e = x * &nn;
        assert!(e.is_integer());
        e.to_integer().to_i64().unwrap().rem_euclid(n as i64)
    };
    let h = disc.order();
    let dabs = h as i64;
    let ut_exp: Vec<i64> = disc.norms.iter().map(|q| to_exp(q / int(2))).collect();
    let us_exp: Vec<Vec<i64>> = disc.pairings.iter().map(|row| row.iter().map(|p| to_exp(-p.clone())).collect()).collect();
    let rank = lat.rank();
    let scalar_zeta8 = (-(rank as i64)).rem_euclid(8);
    let step = n as i64 / 8;
    let one = Rational::one();
    let ut = ut_exp.iter().map(|e| CycExt::monomial(&field, *e, &one, dabs, 0)).collect();
    let us = us_exp
        .iter()
        .map(|row| row.iter().map(|e| CycExt::monomial(&field, e + scalar_zeta8 * step, &one, dabs, -1)).collect())
        .collect();
    Ok(WeilPair {
        lattice: lat.name.clone(),
        labels: disc.labels.clone(),
        rank,
        n,
        dabs,
        ut_exp,
        us_exp,
        scalar_zeta8,
        ut,
        us,
    })
}

fn ext_matmul_conj_t(a: &[Vec<CycExt>], b: &[Vec<CycExt>]) -> Vec<Vec<CycExt>> {
    let h = a.len();
    (0..h)
        .map(|i| {
            (0..h)
                .map(|j| {
                    let mut acc = a[0][0].zero_like();
                    for k in 0..h {
                        acc = acc.add(&a[i][k].mul(&b[j][k].conj()));
                    }
                    acc
                })
                .collect()
        })
        .collect()
}

fn is_identity(m: &[Vec<CycExt>]) -> bool {
    m.iter().enumerate().all(|(i, row)| row.iter().enumerate().all(|(j, x)| if i == j { x.is_one() } else { x.is_zero() }))
}

impl WeilPair {
    pub fn order(&self) -> usize {
        self.labels.len()
    }

    pub fn ut_matrix(&self) -> Vec<Vec<CycExt>> {
        let h = self.order();
        (0..h)
            .map(|i| (0..h).map(|j| if i == j { self.ut[i].clone() } else { self.ut[i].zero_like() }).collect())
            .collect()
    }

    /// `U U^* = I` for both matrices, checked exactly.
    pub fn is_unitary(&self) -> bool {
        let t = self.ut_matrix();
        is_identity(&ext_matmul_conj_t(&t, &t)) && is_identity(&ext_matmul_conj_t(&self.us, &self.us))
    }

    pub fn us_symmetric(&self) -> bool {
        let h = self.order();
        (0..h).all(|i| (0..h).all(|j| self.us[i][j] == self.us[j][i]))
    }

    /// Exponents as fractions of a full turn, independent of the conductor.
    pub fn signature(&self) -> (Vec<Rational>, Vec<Vec<Rational>>, i64, i64) {
        let n = self.n as i64;
        (
            self.ut_exp.iter().map(|e| rat(*e, n)).collect(),
            self.us_exp.iter().map(|r| r.iter().map(|e| rat(*e, n)).collect()).collect(),
            self.scalar_zeta8,
            self.dabs,
        )
    }

    pub fn to_json(&self) -> Value {
        json!({
            "lattice": self.lattice,
            "order": self.order(),
            "labels": self.labels,
            "N": self.n,
            "UT": self.ut_exp,
            "US": {"zeta8": self.scalar_zeta8, "inv_sqrt": self.dabs, "exponents": self.us_exp},
        })
    }
}

/// A joint eigenspace of `U(T)` and `U(S)`; eigenvalues as exponents of `zeta_N`.
#[derive(Clone, Debug)]
pub struct JointEigenspace {
    pub lambda_t: i64,
    pub lambda_s: i64,
    pub basis: Vec<Vec<Cyc>>,
}

impl JointEigenspace {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn rational_basis(&self) -> Option<Vec<Vec<Rational>>> {
        self.basis.iter().map(|v| v.iter().map(|x| x.to_rational()).collect()).collect()
    }

    /// Whether a rational vector lies in the span of the basis.
    pub fn contains(&self, v: &[Rational]) -> bool {
        let Some(f) = self.basis.first().and_then(|b| b.first()).map(|x| x.field.clone()) else {
            return v.iter().all(|x| x.is_zero());
        };
        let mut rows = self.basis.clone();
        rows.push(v.iter().map(|x| Cyc::rational(&f, x.clone())).collect());
        rref_cyc(&mut rows).len() == self.basis.len()
    }
}

/// In-place reduced row echelon form; returns pivot columns.
pub fn rref_cyc(rows: &mut Vec<Vec<Cyc>>) -> Vec<usize> {
    let mut pivots = Vec::new();
    let ncols = rows.first().map_or(0, |r| r.len());
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][c].inv().expect("nonzero element of a field");
        rows[r] = rows[r].iter().map(|x| x.mul(&inv)).collect();
        for i in 0..rows.len() {
            if i != r && !rows[i][c].is_zero() {
                let f = rows[i][c].clone();
                let sub: Vec<Cyc> = rows[r].iter().map(|x| x.mul(&f)).collect();
                rows[i] = rows[i].iter().zip(&sub).map(|(a, b)| a.sub(b)).collect();
            }
        }
        pivots.push(c);
        r += 1;
    }
    rows.truncate(r);
    pivots
}

fn kernel_cyc(mut rows: Vec<Vec<Cyc>>, ncols: usize, f: &Arc<CycField>) -> Vec<Vec<Cyc>> {
    let pivots = rref_cyc(&mut rows);
    let mut out = Vec::new();
    for free in (0..ncols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![Cyc::zero(f); ncols];
        v[free] = Cyc::one(f);
        for (i, p) in pivots.iter().enumerate() {
            v[*p] = rows[i][free].neg();
        }
        out.push(v);
    }
    out
}

/// Joint eigenspaces over `Q(zeta_M)`, `M = lcm(N, 8 r)`, with `sqrt(|D|)`
/// embedded through Gauss sums. Since `U(S)^8 = 1` only eighth roots of unity
/// are tried for `lambda_S`.
pub fn joint_eigenvectors(w: &WeilPair) -> Result<Vec<JointEigenspace>> {
    let h = w.order();
    let (_, r) = squarefree_split(w.dabs);
    let m = (w.n as i64).lcm(&(8 * r)) as usize;
    let big = CycField::new(m);
    let sqrt_r = sqrt_in(r, &big)?;
    let us: Vec<Vec<Cyc>> = w.us.iter().map(|row| row.iter().map(|x| x.embed(&big, &sqrt_r)).collect()).collect();
    let mut lts: Vec<i64> = w.ut_exp.clone();
    lts.sort();
    lts.dedup();
    let mut out = Vec::new();
    let nn = w.n as i64;
    for lt in lts {
        let cols: Vec<usize> = (0..h).filter(|&i| w.ut_exp[i] == lt).collect();
        for j in 0..8 {
            let ls = j * nn / 8;
            let lam = Cyc::zeta(&big, ls * (m as i64 / nn));
            let rows: Vec<Vec<Cyc>> = (0..h)
                .map(|i| cols.iter().map(|&c| if i == c { us[i][c].sub(&lam) } else { us[i][c].clone() }).collect())
                .collect();
            let ker = kernel_cyc(rows, cols.len(), &big);
            if ker.is_empty() {
                continue;
            }
            let mut basis: Vec<Vec<Cyc>> = ker
                .into_iter()
                .map(|k| {
                    let mut v = vec![Cyc::zero(&big); h];
                    for (t, &c) in cols.iter().enumerate() {
                        v[c] = k[t].clone();
                    }
                    v
                })
                .collect();
            rref_cyc(&mut basis);
            out.push(JointEigenspace { lambda_t: lt, lambda_s: ls, basis });
        }
    }
    Ok(out)
}

pub fn eigenspaces_json(w: &WeilPair, spaces: &[JointEigenspace]) -> Value {
    let field = spaces.first().and_then(|s| s.basis.first()).map(|b| b[0].field.n);
    json!({
        "weil": w.to_json(),
        "basis_field": field,
        "eigenspaces": spaces.iter().map(|s| json!({
            "lambda_t": s.lambda_t,
            "lambda_s": s.lambda_s,
            "dim": s.dim(),
            "basis": s.basis.iter().map(|v| v.iter().map(|x| x.to_string()).collect::<Vec<_>>()).collect::<Vec<_>>(),
        })).collect::<Vec<_>>(),
    })
}

/// `sum v_mu theta^L_mu`.
pub fn eigenvector_to_series(lat: &Lattice, v: &[Rational], n24: i64) -> Result<FourierSeries> {
    combination(lat, v, n24)
}

/// Exact `|D|^(1/2)` split `(f, r)` with `|D| = f^2 r`, `r` squarefree.
pub fn sqrt_split(n: i64) -> (i64, i64) {
    squarefree_split(n)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclotomic_polynomials() {
        assert_eq!(cyclotomic_poly(1), vec![-1, 1]);
        assert_eq!(cyclotomic_poly(4), vec![1, 0, 1]);
        assert_eq!(cyclotomic_poly(6), vec![1, -1, 1]);
        assert_eq!(cyclotomic_poly(8), vec![1, 0, 0, 0, 1]);
        assert_eq!(cyclotomic_poly(12), vec![1, 0, -1, 0, 1]);
        assert_eq!(cyclotomic_poly(24).len() - 1, 8);
    }

    #[test]
    fn field_arithmetic() {
        let f = CycField::new(24);
        let z = Cyc::zeta(&f, 1);
        let mut p = Cyc::one(&f);
        for _ in 0..24 {
            p = p.mul(&z);
        }
        assert_eq!(p, Cyc::one(&f));
        assert_eq!(Cyc::zeta(&f, 12), Cyc::rational(&f, int(-1)));
        let x = Cyc::zeta(&f, 5).add(&Cyc::rational(&f, rat(3, 2)));
        assert_eq!(x.mul(&x.inv().unwrap()), Cyc::one(&f));
        assert_eq!(z.conj(), Cyc::zeta(&f, -1));
    }

    #[test]
    fn square_roots() {
        let f = CycField::new(120);
        for r in [1, 2, 3, 5, 6, 15] {
            let s = sqrt_in(r, &f).unwrap();
            assert_eq!(s.mul(&s), Cyc::rational(&f, int(r)));
        }
        assert_eq!(squarefree_split(12), (2, 3));
        assert_eq!(squarefree_split(4), (2, 1));
    }
}
