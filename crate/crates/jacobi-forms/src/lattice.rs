//! Positive definite lattices inside rational Euclidean frames.
//!
//! A lattice is a frame Gram matrix `G` (the bilinear form on coordinates)
//! together with a basis matrix `B` whose columns are the basis vectors in
//! frame coordinates. Its Gram matrix is `B^T G B`.

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::arith::{int, rat, rat_mod, Rational};
use crate::error::{pre, Error, Result};
use crate::linalg::{self, form, IMat, QMat, QVec};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RootKind {
    A,
    D,
    E,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lattice {
    pub name: String,
    /// frame Gram matrix (r x r)
    pub gram: QMat,
    /// basis vectors as columns in frame coordinates (r x n0)
    pub basis: QMat,
    /// named discriminant representatives in frame coordinates, in the
    /// canonical order used downstream
    pub labels: Option<Vec<(String, QVec)>>,
}

impl fmt::Display for Lattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)
    }
}

/// Discriminant group `L^v / L` with its finite quadratic form.
#[derive(Clone, Debug)]
pub struct DiscriminantGroup {
    pub labels: Vec<String>,
    /// representatives in frame coordinates
    pub reps: Vec<QVec>,
    /// representatives in basis coordinates, reduced into `[0,1)`
    pub coords: Vec<QVec>,
    pub invariant_factors: Vec<i64>,
    /// `(mu, mu) mod 2`
    pub norms: Vec<Rational>,
    /// `(mu, nu) mod 1`
    pub pairings: Vec<Vec<Rational>>,
    lookup: HashMap<Vec<Rational>, usize>,
}

impl DiscriminantGroup {
    pub fn order(&self) -> usize {
        self.reps.len()
    }

    pub fn exponent(&self) -> i64 {
        self.invariant_factors.iter().fold(1i64, |a, b| a.lcm(b))
    }

    /// Index of the class of a vector given in basis coordinates.
    pub fn class_of_coords(&self, y: &[Rational]) -> Option<usize> {
        let key: Vec<Rational> = y.iter().map(|x| rat_mod(x, 1)).collect();
        self.lookup.get(&key).copied()
    }
}

impl Lattice {
    pub fn new(name: impl Into<String>, gram: QMat, basis: QMat) -> Result<Lattice> {
        if !gram.is_symmetric() {
            return pre("frame Gram must be symmetric");
        }
        if !linalg::is_positive_definite(&gram) {
            return pre("frame Gram must be positive definite");
        }
        if basis.rows != gram.rows {
            return pre("basis rows must match frame rank");
        }
        if basis.rank() != basis.cols {
            return pre("basis vectors must be independent");
        }
        Ok(Lattice { name: name.into(), gram, basis, labels: None })
    }

    /// Lattice with the given Gram matrix in its own basis coordinates.
    pub fn from_gram(name: impl Into<String>, gram: QMat) -> Result<Lattice> {
        let n = gram.rows;
        Lattice::new(name, gram, QMat::identity(n))
    }

    /// The rank zero lattice.
    pub fn zero() -> Lattice {
        Lattice { name: "0".into(), gram: QMat::zeros(0, 0), basis: QMat::zeros(0, 0), labels: None }
    }

    pub fn rank(&self) -> usize {
        self.basis.cols
    }

    pub fn frame_rank(&self) -> usize {
        self.gram.rows
    }

    pub fn is_full_rank(&self) -> bool {
        self.rank() == self.frame_rank()
    }

    pub fn gram_l(&self) -> QMat {
        self.basis.transpose().mul(&self.gram).mul(&self.basis)
    }

    pub fn det(&self) -> Rational {
        if self.rank() == 0 {
            return Rational::one();
        }
        self.gram_l().det()
    }

    pub fn is_integral(&self) -> bool {
        self.gram_l().is_integral()
    }

    pub fn is_even(&self) -> bool {
        let g = self.gram_l();
        g.is_integral() && (0..g.rows).all(|i| g.get(i, i).to_integer().is_even())
    }

    /// Scale `s` (gcd of all Gram entries) and norm `n` (gcd of the
    /// diagonal and `2s`), so that `s | n | 2s`.
    pub fn scale_and_norm(&self) -> Result<(i64, i64)> {
        let g = self.gram_l();
        if !g.is_integral() {
            return pre("scale and norm need an integral lattice");
        }
        let s = g.data.iter().fold(BigInt::zero(), |a, x| a.gcd(&x.to_integer()));
        let n = (0..g.rows).fold(BigInt::from(2) * &s, |a, i| a.gcd(&g.get(i, i).to_integer()));
        Ok((s.to_i64().unwrap(), n.to_i64().unwrap()))
    }

    /// Least `q > 0` such that `q (Gram)^-1` is integral with even diagonal.
    pub fn level(&self) -> Result<i64> {
        let inv = self.gram_l().inverse().ok_or_else(|| Error::Precondition("degenerate".into()))?;
        let mut q = 1i64;
        for i in 0..inv.rows {
            for j in 0..inv.cols {
                let x = inv.get(i, j);
                let d = x.denom().to_i64().unwrap();
                let need = if i == j {
                    // q x even
                    let y = x / int(2);
                    y.denom().to_i64().unwrap()
                } else {
                    d
                };
                q = q.lcm(&need);
            }
        }
        Ok(q)
    }

    /// Same basis, frame Gram scaled by `c`.
    pub fn rescale(&self, c: &Rational) -> Result<Lattice> {
        if !c.is_positive() {
            return pre("rescale needs c > 0");
        }
        if c.is_one() {
            return Ok(self.clone());
        }
        Ok(Lattice {
            name: format!("{}({})", self.name, crate::arith::fmt_rational(c)),
            gram: self.gram.scale(c),
            basis: self.basis.clone(),
            labels: None,
        })
    }

    /// Orthogonal direct sum.
    pub fn direct_sum(&self, o: &Lattice) -> Lattice {
        let name = if self.rank() == 0 {
            o.name.clone()
        } else if o.rank() == 0 {
            self.name.clone()
        } else {
            format!("{}+{}", self.name, o.name)
        };
        Lattice {
            name,
            gram: self.gram.direct_sum(&o.gram),
            basis: self.basis.direct_sum(&o.basis),
            labels: None,
        }
    }

    /// The same lattice in its own basis coordinates.
    pub fn intrinsic(&self) -> Lattice {
        let labels = self.labels.as_ref().map(|ls| {
            ls.iter().map(|(n, v)| (n.clone(), self.coords(v).expect("label in span"))).collect()
        });
        Lattice { name: self.name.clone(), gram: self.gram_l(), basis: QMat::identity(self.rank()), labels }
    }

    /// Basis coordinates of a frame vector lying in the span of the basis.
    pub fn coords(&self, v: &[Rational]) -> Option<QVec> {
        let gl = self.gram_l();
        let rhs = self.basis.transpose().mul_vec(&self.gram.mul_vec(v));
        let y = gl.inverse()?.mul_vec(&rhs);
        if self.basis.mul_vec(&y) == v {
            Some(y)
        } else {
            None
        }
    }

    pub fn contains(&self, v: &[Rational]) -> bool {
        self.coords(v).map_or(false, |y| y.iter().all(|x| x.is_integer()))
    }

    pub fn inner(&self, a: &[Rational], b: &[Rational]) -> Rational {
        form(&self.gram, a, b)
    }

    /// Discriminant group via the Smith form of the Gram matrix.
    pub fn discriminant_group(&self) -> Result<DiscriminantGroup> {
        let gl = self.gram_l();
        let m = gl.to_imat().ok_or_else(|| Error::Precondition("lattice not integral".into()))?;
        let n0 = self.rank();
        let sm = linalg::smith(&m);
        let mut factors = Vec::new();
        let mut gens: Vec<(i64, QVec)> = Vec::new();
        for i in 0..n0 {
            let s = sm.s.get(i, i);
            if s == 0 {
                return pre("degenerate lattice");
            }
            if s > 1 {
                factors.push(s as i64);
                let g: QVec = (0..n0).map(|r| rat(sm.v.get(r, i) as i64, s as i64)).collect();
                gens.push((s as i64, g));
            }
        }
        let reduce = |y: &[Rational]| -> QVec { y.iter().map(|x| rat_mod(x, 1)).collect() };
        let mut coords: Vec<QVec> = Vec::new();
        let mut labels: Vec<String> = Vec::new();
        if let Some(ls) = &self.labels {
            for (name, v) in ls {
                let y = self.coords(v).ok_or_else(|| Error::Precondition("label outside span".into()))?;
                coords.push(reduce(&y));
                labels.push(name.clone());
            }
        } else {
            // Mixed-radix enumeration of sum c_i g_i.
            let mut idx = vec![0i64; gens.len()];
            loop {
                let mut y = vec![Rational::zero(); n0];
                for (k, (_, g)) in gens.iter().enumerate() {
                    for r in 0..n0 {
                        y[r] += &g[r] * int(idx[k]);
                    }
                }
                coords.push(reduce(&y));
                labels.push(format!("mu{}", coords.len() - 1));
                let mut k = gens.len();
                loop {
                    if k == 0 {
                        break;
                    }
                    k -= 1;
                    idx[k] += 1;
                    if idx[k] < gens[k].0 {
                        break;
                    }
                    idx[k] = 0;
                    if k == 0 {
                        k = usize::MAX;
                        break;
                    }
                }
                if k == usize::MAX || gens.is_empty() {
                    break;
                }
            }
        }
        let order: i64 = factors.iter().product();
        let det = gl.det().abs();
        if int(order) != det || coords.len() as i64 != order {
            return Err(Error::Inconsistent(format!(
                "discriminant order {order}, |det| {det}, {} representatives",
                coords.len()
            )));
        }
        let mut lookup = HashMap::new();
        for (i, c) in coords.iter().enumerate() {
            if lookup.insert(c.clone(), i).is_some() {
                return Err(Error::Inconsistent("repeated discriminant class".into()));
            }
            // Each representative must lie in the dual lattice.
            let p = gl.mul_vec(c);
            if !p.iter().all(|x| x.is_integer()) {
                return Err(Error::Inconsistent("representative not in dual lattice".into()));
            }
        }
        let reps: Vec<QVec> = match &self.labels {
            Some(ls) => ls.iter().map(|(_, v)| v.clone()).collect(),
            None => coords.iter().map(|c| self.basis.mul_vec(c)).collect(),
        };
        let norms = reps.iter().map(|v| rat_mod(&self.inner(v, v), 2)).collect();
        let pairings = reps
            .iter()
            .map(|a| reps.iter().map(|b| rat_mod(&self.inner(a, b), 1)).collect())
            .collect();
        Ok(DiscriminantGroup { labels, reps, coords, invariant_factors: factors, norms, pairings, lookup })
    }

    /// `{x in L : (x, v) = 0}` with its inclusion matrix in basis coordinates.
    pub fn orth_complement(&self, v: &[Rational]) -> Result<(Lattice, QMat)> {
        if v.len() != self.frame_rank() {
            return pre("vector length must match frame rank");
        }
        let c = self.basis.transpose().mul_vec(&self.gram.mul_vec(v));
        if c.iter().all(|x| x.is_zero()) {
            return pre("orthogonal complement needs a vector not orthogonal to L");
        }
        let den = linalg::common_denominator(&c);
        let mut row = IMat::zeros(1, c.len());
        for (j, x) in c.iter().enumerate() {
            let y = (x * Rational::from_integer(den.clone())).to_integer();
            row.set(0, j, y.to_i128().ok_or_else(|| Error::Precondition("overflow".into()))?);
        }
        let k = linalg::integer_kernel(&row);
        let (h, _, r) = linalg::column_hermite(&k);
        let mut kq = QMat::zeros(self.rank(), r);
        for j in 0..r {
            for i in 0..self.rank() {
                kq.set(i, j, int(h.get(i, j) as i64));
            }
        }
        let mut basis = self.basis.mul(&kq);
        if r == 1 {
            let col = basis.col(0);
            if col.iter().find(|x| !x.is_zero()).map_or(false, |x| x.is_negative()) {
                kq = kq.scale(&int(-1));
                basis = basis.scale(&int(-1));
            }
        }
        let vs: Vec<String> = v.iter().map(crate::arith::fmt_rational).collect();
        let name = format!("perp({},{})", self.name, vs.join(","));
        let l = Lattice { name, gram: self.gram.clone(), basis, labels: None };
        Ok((l, kq))
    }

    /// All `l in shift + L` with `(l,l) <= bound`, lexicographically sorted,
    /// each with its exact norm. `shift` is in frame coordinates.
    pub fn short_vectors(&self, shift: &[Rational], bound: &Rational) -> Result<Vec<(QVec, Rational)>> {
        let y = self.coords(shift).ok_or_else(|| Error::Precondition("shift outside span".into()))?;
        let e = enumerate(&self.gram_l(), &y, bound)?;
        let den = Rational::from_integer(BigInt::from(e.den));
        let mut out: Vec<(QVec, Rational)> = e
            .points
            .iter()
            .map(|(x, n)| {
                let yv: QVec = x.iter().map(|v| Rational::from_integer(BigInt::from(*v)) / &den).collect();
                (self.basis.mul_vec(&yv), n.clone())
            })
            .collect();
        out.sort();
        Ok(out)
    }
}

/// Result of a Fincke-Pohst enumeration: points `X / den` in basis coordinates.
pub struct Enumeration {
    pub den: i64,
    pub points: Vec<(Vec<i64>, Rational)>,
}

/// Enumerates `y in shift + Z^n` with `y^T M y <= bound`.
///
/// The bounds come from the rational LDL decomposition of `M`; interval
/// endpoints are evaluated in floating point and widened, then every
/// candidate is rechecked with exact integer arithmetic.
pub fn enumerate(m: &QMat, shift: &[Rational], bound: &Rational) -> Result<Enumeration> {
    let n = m.rows;
    if bound.is_negative() {
        return pre("bound must be >= 0");
    }
    let den_b = linalg::common_denominator(shift);
    let den = den_b.to_i64().ok_or_else(|| Error::Precondition("shift denominator too large".into()))?;
    let sh: Vec<i64> = shift
        .iter()
        .map(|x| (x * Rational::from_integer(den_b.clone())).to_integer().to_i64().unwrap())
        .collect();
    if n == 0 {
        return Ok(Enumeration { den, points: vec![(vec![], Rational::zero())] });
    }
    // LDL^T: Q(y) = sum_i d_i (y_i + sum_{j>i} r_ij y_j)^2
    let mut r = QMat::identity(n);
    let mut d = vec![Rational::zero(); n];
    for i in 0..n {
        let mut s = m.get(i, i).clone();
        for k in 0..i {
            s -= r.get(k, i) * r.get(k, i) * &d[k];
        }
        if !s.is_positive() {
            return pre("Gram matrix not positive definite");
        }
        d[i] = s;
        for j in i + 1..n {
            let mut t = m.get(i, j).clone();
            for k in 0..i {
                t -= r.get(k, i) * r.get(k, j) * &d[k];
            }
            r.set(i, j, t / &d[i]);
        }
    }
    let f = |x: &Rational| x.numer().to_f64().unwrap() / x.denom().to_f64().unwrap();
    let df: Vec<f64> = d.iter().map(f).collect();
    let rf: Vec<Vec<f64>> = (0..n).map(|i| (0..n).map(|j| f(r.get(i, j))).collect()).collect();
    let sf: Vec<f64> = sh.iter().map(|&s| s as f64 / den as f64).collect();
    let bf = f(bound);
    let mden = m.denominator();
    let mi: Vec<Vec<i128>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| (m.get(i, j) * Rational::from_integer(mden.clone())).to_integer().to_i128().unwrap())
                .collect()
        })
        .collect();
    // Accept iff X^T Mi X * bden <= bnum * mden * den^2
    let mden_i = mden.to_i128().unwrap();
    let bnum = bound.numer().to_i128().unwrap();
    let bden = bound.denom().to_i128().unwrap();
    let limit = bnum * mden_i * (den as i128) * (den as i128);

    let mut points = Vec::new();
    let mut x = vec![0i64; n];
    let mut y = vec![0f64; n];
    fn rec(
        i: usize,
        rem: f64,
        x: &mut Vec<i64>,
        y: &mut Vec<f64>,
        ctx: &(&[f64], &[Vec<f64>], &[f64], f64),
        out: &mut Vec<Vec<i64>>,
    ) {
        let (df, rf, sf, tol) = *ctx;
        let n = x.len();
        let mut c = 0.0;
        for j in i + 1..n {
            c -= rf[i][j] * y[j];
        }
        let rad = (rem.max(0.0) / df[i]).sqrt() + tol;
        let lo = (c - rad - sf[i]).floor() as i64 - 1;
        let hi = (c + rad - sf[i]).ceil() as i64 + 1;
        for xi in lo..=hi {
            let yi = xi as f64 + sf[i];
            let t = df[i] * (yi - c) * (yi - c);
            if t > rem + tol * (1.0 + rem.abs()) {
                continue;
            }
            x[i] = xi;
            y[i] = yi;
            if i == 0 {
                out.push(x.clone());
            } else {
                rec(i - 1, rem - t, x, y, ctx, out);
            }
        }
    }
    let mut cands = Vec::new();
    let tol = 1e-7;
    rec(n - 1, bf, &mut x, &mut y, &(&df, &rf, &sf, tol), &mut cands);
    for xs in cands {
        let big: Vec<i128> = xs.iter().zip(&sh).map(|(&a, &s)| a as i128 * den as i128 + s as i128).collect();
        let mut q: i128 = 0;
        for i in 0..n {
            if big[i] == 0 {
                continue;
            }
            let mut row = 0i128;
            for j in 0..n {
                row += mi[i][j] * big[j];
            }
            q += big[i] * row;
        }
        if q * bden <= limit {
            let norm = Rational::new(BigInt::from(q), BigInt::from(mden_i * den as i128 * den as i128));
            points.push((big.iter().map(|&v| v as i64).collect(), norm));
        }
    }
    Ok(Enumeration { den, points })
}

fn unit(r: usize, i: usize) -> QVec {
    let mut v = vec![Rational::zero(); r];
    v[i] = Rational::one();
    v
}

/// Lattice generated by rational vectors (frame coordinates), via Hermite form.
pub fn lattice_from_generators(name: &str, gram: QMat, gens: &[QVec]) -> Result<Lattice> {
    let r = gram.rows;
    let den = gens.iter().fold(BigInt::one(), |a, g| a.lcm(&linalg::common_denominator(g)));
    let mut m = IMat::zeros(r, gens.len());
    for (j, g) in gens.iter().enumerate() {
        for i in 0..r {
            let v = (&g[i] * Rational::from_integer(den.clone())).to_integer();
            m.set(i, j, v.to_i128().unwrap());
        }
    }
    let (h, _, rank) = linalg::column_hermite(&m);
    let mut basis = QMat::zeros(r, rank);
    let dq = Rational::from_integer(den);
    for j in 0..rank {
        for i in 0..r {
            basis.set(i, j, int(h.get(i, j) as i64) / &dq);
        }
    }
    Lattice::new(name, gram, basis)
}

/// Root lattices `A_m` (in `Z^{m+1}`), `D_m` (in `Z^m`) and `E_6, E_7, E_8`
/// (inside the Euclidean model `E_8 = D_8^+`).
pub fn build_root(kind: RootKind, m: usize) -> Result<Lattice> {
    match kind {
        RootKind::A => {
            if m < 1 {
                return Err(Error::UnsupportedLattice(format!("A({m})")));
            }
            let r = m + 1;
            let mut b = QMat::zeros(r, m);
            for j in 0..m {
                b.set(j, j, int(1));
                b.set(j + 1, j, int(-1));
            }
            Lattice::new(format!("A({m})"), QMat::identity(r), b)
        }
        RootKind::D => {
            if m < 1 {
                return Err(Error::UnsupportedLattice(format!("D({m})")));
            }
            let mut b = QMat::zeros(m, m);
            if m == 1 {
                b.set(0, 0, int(2));
            } else {
                for j in 0..m - 1 {
                    b.set(j, j, int(1));
                    b.set(j + 1, j, int(-1));
                }
                b.set(m - 2, m - 1, int(1));
                b.set(m - 1, m - 1, int(1));
            }
            let mut l = Lattice::new(format!("D({m})"), QMat::identity(m), b)?;
            let half = rat(1, 2);
            let mu1 = vec![half.clone(); m];
            let mu2 = unit(m, 0);
            let mut mu3 = mu1.clone();
            mu3[m - 1] = -half;
            l.labels = Some(vec![
                ("mu0".into(), vec![Rational::zero(); m]),
                ("mu1".into(), mu1),
                ("mu2".into(), mu2),
                ("mu3".into(), mu3),
            ]);
            Ok(l)
        }
        RootKind::E => {
            let d8 = build_root(RootKind::D, 8)?;
            let mut gens: Vec<QVec> = (0..8).map(|j| d8.basis.col(j)).collect();
            gens.push(vec![rat(1, 2); 8]);
            let e8 = lattice_from_generators("E(8)", QMat::identity(8), &gens)?;
            let perp_to = |l: &Lattice, vs: &[QVec], name: &str| -> Result<Lattice> {
                let mut cur = l.clone();
                for v in vs {
                    cur = cur.orth_complement(v)?.0;
                }
                cur.name = name.into();
                Ok(cur)
            };
            let mut e7_78 = vec![Rational::zero(); 8];
            e7_78[6] = int(1);
            e7_78[7] = int(1);
            let mut e67 = vec![Rational::zero(); 8];
            e67[5] = int(1);
            e67[6] = int(-1);
            match m {
                8 => Ok(e8),
                7 => perp_to(&e8, &[e7_78], "E(7)"),
                6 => perp_to(&e8, &[e7_78, e67], "E(6)"),
                _ => Err(Error::UnsupportedLattice(format!("E({m})"))),
            }
        }
    }
}

/// Convenience constructor from a kind letter.
pub fn root(kind: char, m: usize) -> Result<Lattice> {
    match kind {
        'A' => build_root(RootKind::A, m),
        'D' => build_root(RootKind::D, m),
        'E' => build_root(RootKind::E, m),
        _ => Err(Error::UnsupportedLattice(format!("{kind}({m})"))),
    }
}
