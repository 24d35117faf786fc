//! Sparse truncated Fourier expansions of Jacobi forms.
//!
//! A term `(n24, w) -> c` stands for `c q^(n24/24) exp(2 pi i (w . z) / den)`
//! where `z` are frame coordinates. The dual vector `l` of a term satisfies
//! `G l = w / den`, so `(l, l) = (w/den)^T G^-1 (w/den)`.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::arith::{int, kronecker, rat, rat_mod, QSeries, Rational};
use crate::error::{pre, Error, Result};
use crate::lattice::{enumerate, Lattice};
use crate::linalg::{self, IMat, QMat, QVec};

pub type Key = (i64, Vec<i64>);

/// Weight, index, lattice and character data of a series.
#[derive(Clone, Debug)]
pub struct FormShape {
    pub lattice: Lattice,
    pub t: Rational,
    /// twice the weight
    pub k2: i64,
    /// exponent of the eta multiplier, in `0..24`
    pub d: i64,
    pub holomorphic: bool,
}

impl FormShape {
    pub fn new(lattice: Lattice, t: Rational, k2: i64, d: i64, holomorphic: bool) -> FormShape {
        FormShape { lattice, t, k2, d: d.rem_euclid(24), holomorphic }
    }

    /// Shape of an elliptic modular form (no abelian variables).
    pub fn modular(k2: i64, d: i64) -> FormShape {
        FormShape::new(Lattice::zero(), Rational::zero(), k2, d, true)
    }

    pub fn frame_rank(&self) -> usize {
        self.lattice.frame_rank()
    }

    /// `t G`, the quadratic form the index induces on frame coordinates.
    pub fn index_form(&self) -> QMat {
        self.lattice.gram.scale(&self.t)
    }

    /// The Heisenberg character is trivial iff `L(t)` is even.
    pub fn heisenberg_trivial(&self) -> bool {
        let g = self.lattice.gram_l().scale(&self.t);
        g.is_integral() && (0..g.rows).all(|i| g.get(i, i).to_integer().is_even())
    }

    pub fn weight(&self) -> Rational {
        rat(self.k2, 2)
    }

    /// `Q = 24 / gcd(D, 24)`.
    pub fn conductor(&self) -> i64 {
        24 / self.d.gcd(&24)
    }
}

/// Exact norm evaluation for keys of one series.
pub(crate) struct Norms {
    gi: Vec<Vec<i128>>,
    /// `(l,l) = w^T gi w / scale`
    scale: Rational,
    t: Rational,
    modular: bool,
}

impl Norms {
    pub(crate) fn new(shape: &FormShape, den: i64) -> Result<Norms> {
        let r = shape.frame_rank();
        let modular = r == 0 && shape.t.is_zero();
        if r == 0 {
            return Ok(Norms { gi: vec![], scale: Rational::one(), t: shape.t.clone(), modular });
        }
        let ginv = shape
            .lattice
            .gram
            .inverse()
            .ok_or_else(|| Error::Precondition("degenerate frame".into()))?;
        let c = ginv.denominator();
        let gi = (0..r)
            .map(|i| {
                (0..r)
                    .map(|j| (ginv.get(i, j) * Rational::from_integer(c.clone())).to_integer().to_i128().unwrap())
                    .collect()
            })
            .collect();
        let scale = Rational::from_integer(c * BigInt::from(den) * BigInt::from(den));
        Ok(Norms { gi, scale, t: shape.t.clone(), modular })
    }

    pub(crate) fn lnorm(&self, w: &[i64]) -> Rational {
        let mut s: i128 = 0;
        for (i, wi) in w.iter().enumerate() {
            if *wi == 0 {
                continue;
            }
            let mut row = 0i128;
            for (j, wj) in w.iter().enumerate() {
                row += self.gi[i][j] * *wj as i128;
            }
            s += *wi as i128 * row;
        }
        Rational::from_integer(BigInt::from(s)) / &self.scale
    }

    /// `2 n t - (l,l)`; for elliptic modular forms the q-order `n`.
    pub(crate) fn hyper(&self, n24: i64, w: &[i64]) -> Rational {
        if self.modular {
            return rat(n24, 24);
        }
        rat(n24, 12) * &self.t - self.lnorm(w)
    }
}

#[derive(Clone, Debug)]
pub struct FourierSeries {
    pub shape: FormShape,
    /// every key with `n24 <= prec` is present and exact
    pub prec: i64,
    pub den: i64,
    pub terms: BTreeMap<Key, Rational>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BasicKind {
    Theta,
    Theta32,
    Eta,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Classification {
    Singular,
    Cusp,
    Holomorphic,
    NonHolomorphic,
    Zero,
}

impl Classification {
    pub fn as_str(&self) -> &'static str {
        match self {
            Classification::Singular => "singular",
            Classification::Cusp => "cusp",
            Classification::Holomorphic => "holomorphic",
            Classification::NonHolomorphic => "non_holomorphic",
            Classification::Zero => "zero",
        }
    }
}

/// Outcome of an elliptic invariance check.
#[derive(Clone, Debug)]
pub struct EllipticCheck {
    pub holds: bool,
    pub sign: i64,
    pub checked: usize,
    pub witness: Option<Key>,
}

/// `phi = sum_mu phi_mu theta_mu`.
#[derive(Clone, Debug)]
pub struct ThetaDecomposition {
    pub labels: Vec<String>,
    pub components: Vec<QSeries>,
}

/// `c` with `G_b = c G_a` when both lattices share basis and coordinates.
fn frame_ratio(a: &Lattice, b: &Lattice) -> Option<Rational> {
    if a.basis != b.basis || a.gram.rows != b.gram.rows {
        return None;
    }
    let i = a.gram.data.iter().position(|x| !x.is_zero())?;
    let c = &b.gram.data[i] / &a.gram.data[i];
    if a.gram.scale(&c) == b.gram {
        Some(c)
    } else {
        None
    }
}

fn lcm(a: i64, b: i64) -> i64 {
    a.lcm(&b)
}

impl FourierSeries {
    pub fn empty(shape: FormShape, prec: i64, den: i64) -> FourierSeries {
        FourierSeries { shape, prec, den: den.max(1), terms: BTreeMap::new() }
    }

    /// Constant `c` as an elliptic modular form of weight 0.
    pub fn constant(c: Rational, prec: i64) -> FourierSeries {
        let mut s = FourierSeries::empty(FormShape::modular(0, 0), prec, 1);
        s.add_term(0, vec![], c);
        s
    }

    pub fn from_qseries(q: &QSeries, k2: i64, d: i64) -> FourierSeries {
        let mut s = FourierSeries::empty(FormShape::modular(k2, d), q.prec, 1);
        for (k, c) in &q.terms {
            s.add_term(*k, vec![], c.clone());
        }
        s.shape.holomorphic = q.min_support() >= 0;
        s
    }

    /// Elliptic Eisenstein series `E_k`.
    pub fn eisenstein(k: i64, prec: i64) -> Result<FourierSeries> {
        Ok(FourierSeries::from_qseries(&crate::arith::eisenstein_q(k, prec)?, 2 * k, 0))
    }

    pub fn to_qseries(&self) -> Result<QSeries> {
        if self.shape.frame_rank() != 0 {
            return pre("series has abelian variables");
        }
        let mut q = QSeries::zero(self.prec);
        for ((n, _), c) in &self.terms {
            q.add_term(*n, c.clone());
        }
        Ok(q)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, n24: i64, w: Vec<i64>, c: Rational) {
        if n24 > self.prec || c.is_zero() {
            return;
        }
        match self.terms.entry((n24, w)) {
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
        }
    }

    pub fn coeff(&self, n24: i64, w: &[i64]) -> Rational {
        self.terms.get(&(n24, w.to_vec())).cloned().unwrap_or_else(Rational::zero)
    }

    /// Lowest stored `n24`, or `prec + 1` for a series vanishing to precision.
    pub fn min_support(&self) -> i64 {
        self.terms.keys().next().map_or(self.prec + 1, |k| k.0)
    }

    pub fn truncate(&mut self, prec: i64) {
        if prec < self.prec {
            self.prec = prec;
            let cut = self.terms.split_off(&(prec + 1, vec![]));
            drop(cut);
        }
    }

    pub fn truncated(mut self, prec: i64) -> FourierSeries {
        self.truncate(prec);
        self
    }

    /// Smallest denominator representing the same functionals.
    pub fn normalize(&mut self) {
        let mut g = self.den;
        for (_, w) in self.terms.keys() {
            for x in w {
                g = g.gcd(x);
            }
            if g == 1 {
                return;
            }
        }
        if g > 1 {
            self.den /= g;
            let old = std::mem::take(&mut self.terms);
            self.terms = old.into_iter().map(|((n, w), c)| ((n, w.into_iter().map(|x| x / g).collect()), c)).collect();
        }
    }

    /// Same series over the denominator `d`, a multiple of `self.den`.
    pub fn with_den(&self, d: i64) -> FourierSeries {
        assert!(d % self.den == 0);
        let f = d / self.den;
        let terms = self.terms.iter().map(|((n, w), c)| ((*n, w.iter().map(|x| x * f).collect()), c.clone())).collect();
        FourierSeries { shape: self.shape.clone(), prec: self.prec, den: d, terms }
    }

    pub(crate) fn norms(&self) -> Result<Norms> {
        Norms::new(&self.shape, self.den)
    }

    /// `(l, l)` of a key.
    pub fn key_norm(&self, w: &[i64]) -> Result<Rational> {
        Ok(self.norms()?.lnorm(w))
    }

    /// `2 n t - (l,l)` of a key.
    pub fn hyperbolic_norm(&self, n24: i64, w: &[i64]) -> Result<Rational> {
        Ok(self.norms()?.hyper(n24, w))
    }

    /// First key violating the holomorphy conditions, if any.
    pub fn holomorphy_violation(&self) -> Result<Option<Key>> {
        let nm = self.norms()?;
        for (n, w) in self.terms.keys() {
            if *n < 0 || nm.hyper(*n, w).is_negative() {
                return Ok(Some((*n, w.clone())));
            }
        }
        Ok(None)
    }

    /// Re-derives the holomorphic flag from the support.
    pub fn reflag(&mut self) -> Result<()> {
        self.shape.holomorphic = self.holomorphy_violation()?.is_none();
        Ok(())
    }

    pub fn scale(&self, c: &Rational) -> FourierSeries {
        let mut out = FourierSeries::empty(self.shape.clone(), self.prec, self.den);
        if !c.is_zero() {
            for (k, v) in &self.terms {
                out.terms.insert(k.clone(), v * c);
            }
        }
        out
    }

    pub fn neg(&self) -> FourierSeries {
        self.scale(&int(-1))
    }

    fn check_same_space(&self, o: &FourierSeries) -> Result<()> {
        if self.shape.lattice.gram != o.shape.lattice.gram || self.shape.lattice.basis != o.shape.lattice.basis {
            return Err(Error::FrameMismatch(format!("{} vs {}", self.shape.lattice, o.shape.lattice)));
        }
        if self.shape.t != o.shape.t {
            return Err(Error::IndexMismatch(self.shape.t.to_string(), o.shape.t.to_string()));
        }
        if self.shape.k2 != o.shape.k2 || self.shape.d != o.shape.d {
            return pre(format!(
                "sum of forms of different weight/character: (2k={}, D={}) vs (2k={}, D={})",
                self.shape.k2, self.shape.d, o.shape.k2, o.shape.d
            ));
        }
        Ok(())
    }

    /// Sum of two series in the same space.
    pub fn add(&self, o: &FourierSeries) -> Result<FourierSeries> {
        self.check_same_space(o)?;
        let d = lcm(self.den, o.den);
        let a = self.with_den(d);
        let b = o.with_den(d);
        let mut out = FourierSeries::empty(self.shape.clone(), self.prec.min(o.prec), d);
        out.shape.holomorphic = self.shape.holomorphic && o.shape.holomorphic;
        for (k, c) in a.terms.into_iter().chain(b.terms) {
            out.add_term(k.0, k.1, c);
        }
        out.normalize();
        Ok(out)
    }

    pub fn sub(&self, o: &FourierSeries) -> Result<FourierSeries> {
        self.add(&o.neg())
    }

    /// Compares two series up to their common precision. Shapes must agree
    /// in index form, weight and character; lattices and names are ignored.
    pub fn agree(&self, o: &FourierSeries) -> std::result::Result<(), String> {
        if self.shape.frame_rank() != o.shape.frame_rank() {
            return Err(format!("frame ranks {} vs {}", self.shape.frame_rank(), o.shape.frame_rank()));
        }
        if self.shape.index_form() != o.shape.index_form() {
            return Err("index forms differ".into());
        }
        if self.shape.k2 != o.shape.k2 || self.shape.d != o.shape.d {
            return Err(format!(
                "(2k, D) = ({}, {}) vs ({}, {})",
                self.shape.k2, self.shape.d, o.shape.k2, o.shape.d
            ));
        }
        let p = self.prec.min(o.prec);
        let d = lcm(self.den, o.den);
        let a = self.with_den(d);
        let b = o.with_den(d);
        for (k, c) in a.terms.iter().filter(|(k, _)| k.0 <= p) {
            if b.terms.get(k) != Some(c) {
                return Err(format!("coefficient at {:?}: {} vs {:?}", k, c, b.terms.get(k).map(|x| x.to_string())));
            }
        }
        for k in b.terms.keys().filter(|k| k.0 <= p) {
            if !a.terms.contains_key(k) {
                return Err(format!("key {:?} only in right-hand side", k));
            }
        }
        Ok(())
    }

    /// Product of two series over the same abelian variables; a series
    /// without abelian variables multiplies any series.
    pub fn mul(&self, o: &FourierSeries) -> Result<FourierSeries> {
        let (sa, sb) = (&self.shape, &o.shape);
        let mut tb = sb.t.clone();
        let shape_base = if sa.frame_rank() == 0 {
            sb
        } else if sb.frame_rank() == 0 {
            sa
        } else {
            let c = frame_ratio(&sa.lattice, &sb.lattice)
                .ok_or_else(|| Error::FrameMismatch(format!("{} vs {}", sa.lattice, sb.lattice)))?;
            // same coordinates, proportional forms: express o in the frame of self
            tb = &tb * c;
            sa
        };
        let shape = FormShape::new(
            shape_base.lattice.clone(),
            &sa.t + &tb,
            sa.k2 + sb.k2,
            sa.d + sb.d,
            sa.holomorphic && sb.holomorphic,
        );
        let prec = (self.prec + o.min_support()).min(o.prec + self.min_support());
        let r = shape.frame_rank();
        let d = lcm(self.den, o.den);
        let (fa, fb) = (d / self.den, d / o.den);
        let mut acc: HashMap<Key, Rational> = HashMap::new();
        let b_terms: Vec<(&Key, &Rational)> = o.terms.iter().collect();
        for ((na, wa), ca) in &self.terms {
            for ((nb, wb), cb) in &b_terms {
                let n = na + nb;
                if n > prec {
                    break;
                }
                let w: Vec<i64> = (0..r)
                    .map(|i| wa.get(i).map_or(0, |x| x * fa) + wb.get(i).map_or(0, |x| x * fb))
                    .collect();
                let e = acc.entry((n, w)).or_insert_with(Rational::zero);
                *e += ca * *cb;
            }
        }
        let mut out = FourierSeries::empty(shape, prec, d);
        out.terms = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        out.normalize();
        Ok(out)
    }

    /// `phi(tau, z1) psi(tau, z2)` on the orthogonal sum of the lattices.
    pub fn tensor(&self, o: &FourierSeries) -> Result<FourierSeries> {
        if self.shape.t != o.shape.t {
            return Err(Error::IndexMismatch(self.shape.t.to_string(), o.shape.t.to_string()));
        }
        let lat = self.shape.lattice.direct_sum(&o.shape.lattice);
        let shape = FormShape::new(
            lat,
            self.shape.t.clone(),
            self.shape.k2 + o.shape.k2,
            self.shape.d + o.shape.d,
            self.shape.holomorphic && o.shape.holomorphic,
        );
        let prec = (self.prec + o.min_support()).min(o.prec + self.min_support());
        let d = lcm(self.den, o.den);
        let (fa, fb) = (d / self.den, d / o.den);
        let mut out = FourierSeries::empty(shape, prec, d);
        let b_terms: Vec<(&Key, &Rational)> = o.terms.iter().collect();
        for ((na, wa), ca) in &self.terms {
            for ((nb, wb), cb) in &b_terms {
                let n = na + nb;
                if n > prec {
                    break;
                }
                let w: Vec<i64> = wa.iter().map(|x| x * fa).chain(wb.iter().map(|x| x * fb)).collect();
                out.terms.insert((n, w), ca * *cb);
            }
        }
        out.normalize();
        Ok(out)
    }

    /// `n`-fold tensor power.
    pub fn tensor_power(&self, n: usize) -> Result<FourierSeries> {
        if n == 0 {
            return pre("tensor power needs n >= 1");
        }
        let mut acc = self.clone();
        for _ in 1..n {
            acc = acc.tensor(self)?;
        }
        Ok(acc)
    }

    /// `phi(tau, A z)`: `A` maps target frame coordinates to source frame
    /// coordinates. The target lattice and index must satisfy
    /// `t' G' = A^T (t G) A`.
    pub fn substitute(&self, a: &QMat, lattice: Lattice, t: Rational) -> Result<FourierSeries> {
        let r = self.shape.frame_rank();
        if a.rows != r || a.cols != lattice.frame_rank() {
            return pre(format!(
                "substitution matrix is {}x{}, expected {}x{}",
                a.rows,
                a.cols,
                r,
                lattice.frame_rank()
            ));
        }
        let want = a.transpose().mul(&self.shape.index_form()).mul(a);
        let got = lattice.gram.scale(&t);
        if want != got {
            return Err(Error::IndexMismatch(
                format!("target index form {:?}", got.data.iter().map(|x| x.to_string()).collect::<Vec<_>>()),
                format!("pulled back {:?}", want.data.iter().map(|x| x.to_string()).collect::<Vec<_>>()),
            ));
        }
        let c = a.denominator();
        let c64 = c.to_i64().ok_or_else(|| Error::NonIntegralKey("substitution denominator".into()))?;
        let ai: Vec<Vec<i64>> = (0..a.rows)
            .map(|i| {
                (0..a.cols)
                    .map(|j| (a.get(i, j) * Rational::from_integer(c.clone())).to_integer().to_i64().unwrap())
                    .collect()
            })
            .collect();
        let shape = FormShape::new(lattice, t, self.shape.k2, self.shape.d, self.shape.holomorphic);
        let mut out = FourierSeries::empty(shape, self.prec, self.den * c64);
        let mut acc: HashMap<Key, Rational> = HashMap::new();
        for ((n, w), cf) in &self.terms {
            let w2: Vec<i64> = (0..a.cols).map(|j| (0..a.rows).map(|i| ai[i][j] * w[i]).sum()).collect();
            *acc.entry((*n, w2)).or_insert_with(Rational::zero) += cf;
        }
        out.terms = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        out.normalize();
        if out.shape.holomorphic {
            if let Some((n24, w)) = out.holomorphy_violation()? {
                return Err(Error::NotHolomorphic { n24, w });
            }
        }
        Ok(out)
    }

    /// Restriction to a sublattice: `b` maps new frame coordinates into the
    /// current frame. The new frame Gram is `b^T G b` and the new lattice is
    /// the preimage of `L` under `b`.
    pub fn pullback(&self, b: &QMat) -> Result<FourierSeries> {
        let lat = &self.shape.lattice;
        let g2 = b.transpose().mul(&lat.gram).mul(b);
        let r2 = b.cols;
        let mut c = QMat::zeros(lat.rank(), r2);
        for j in 0..r2 {
            let y = lat
                .coords(&b.col(j))
                .ok_or_else(|| Error::Precondition("pullback direction outside the lattice span".into()))?;
            for i in 0..lat.rank() {
                c.set(i, j, y[i].clone());
            }
        }
        if c.rank() != r2 {
            return pre("pullback map must be injective");
        }
        // Saturated integer points of the column span of C.
        let left = c.transpose().kernel();
        let k = if left.is_empty() {
            IMat::identity(lat.rank())
        } else {
            let mut m = IMat::zeros(left.len(), lat.rank());
            for (i, v) in left.iter().enumerate() {
                let dd = Rational::from_integer(linalg::common_denominator(v));
                for j in 0..lat.rank() {
                    m.set(i, j, (&v[j] * &dd).to_integer().to_i128().unwrap());
                }
            }
            linalg::integer_kernel(&m)
        };
        let ctc_inv = c
            .transpose()
            .mul(&c)
            .inverse()
            .ok_or_else(|| Error::Precondition("pullback map must be injective".into()))?;
        let pinv = ctc_inv.mul(&c.transpose());
        let basis = pinv.mul(&k.to_qmat());
        let name = format!("pullback({})", lat.name);
        let new_lat = Lattice::new(name, g2, basis)?;
        self.substitute(b, new_lat, self.shape.t.clone())
    }

    /// Restriction to `v^perp` inside the lattice, in the intrinsic frame of
    /// the orthogonal complement.
    pub fn pullback_perp(&self, v: &[Rational]) -> Result<FourierSeries> {
        let (m, _) = self.shape.lattice.orth_complement(v)?;
        let mut out = self.pullback(&m.basis)?;
        out.shape.lattice.name = m.name;
        Ok(out)
    }

    /// Multiplication by `eta^p`; the holomorphic flag is re-derived.
    pub fn eta_quotient(&self, p: i64) -> Result<FourierSeries> {
        let m = self.min_support();
        let need = (self.prec - m + p).max(p);
        let eta = FourierSeries::from_qseries(&crate::arith::eta_power(p, need), p, p);
        let mut out = self.mul(&eta)?;
        out.reflag()?;
        Ok(out)
    }

    /// `phi(c tau)` for a series without abelian variables.
    pub fn q_rescale(&self, c: i64) -> Result<FourierSeries> {
        if self.shape.frame_rank() != 0 {
            return pre("q_rescale needs a series without abelian variables");
        }
        if c <= 0 {
            return pre("q_rescale needs c > 0");
        }
        let mut out = FourierSeries::empty(
            FormShape::new(Lattice::zero(), Rational::zero(), self.shape.k2, self.shape.d * c, self.shape.holomorphic),
            self.prec * c,
            1,
        );
        for ((n, w), v) in &self.terms {
            out.terms.insert((n * c, w.clone()), v.clone());
        }
        Ok(out)
    }

    /// `min (2 n t - (l,l))` over the stored support.
    pub fn ord(&self) -> Result<Rational> {
        if !self.shape.t.is_positive() {
            return pre("ord needs index t > 0");
        }
        let nm = self.norms()?;
        self.terms
            .keys()
            .map(|(n, w)| nm.hyper(*n, w))
            .min()
            .ok_or(Error::ZeroSeries(self.prec))
    }

    /// Verdict on the stored support (valid within `prec`).
    pub fn classify(&self) -> Result<Classification> {
        if self.terms.is_empty() {
            return Ok(Classification::Zero);
        }
        let nm = self.norms()?;
        let (mut all_zero, mut all_pos, mut all_nonneg) = (true, true, true);
        for (n, w) in self.terms.keys() {
            let h = nm.hyper(*n, w);
            let bad_n = *n < 0;
            if !h.is_zero() {
                all_zero = false;
            }
            if !h.is_positive() || bad_n {
                all_pos = false;
            }
            if h.is_negative() || bad_n {
                all_nonneg = false;
            }
        }
        Ok(if !all_nonneg {
            Classification::NonHolomorphic
        } else if all_zero {
            Classification::Singular
        } else if all_pos {
            Classification::Cusp
        } else {
            Classification::Holomorphic
        })
    }

    /// Verifies `f(n, l) = eps f(n + (l,x) + t(x,x)/2, l + t x)` with
    /// `eps = (-1)^(t (x,x))` for `x` and `-x` on all keys whose partner lies
    /// within precision.
    pub fn check_elliptic(&self, x: &[Rational]) -> Result<EllipticCheck> {
        let lat = &self.shape.lattice;
        if !lat.contains(x) {
            return Err(Error::NotInLattice(format!("{:?}", x.iter().map(|v| v.to_string()).collect::<Vec<_>>())));
        }
        let t = &self.shape.t;
        let txx = t * lat.inner(x, x);
        if !txx.is_integer() {
            return pre("t (x,x) must be integral");
        }
        let sign = if txx.to_integer().is_even() { 1 } else { -1 };
        let g = &lat.gram;
        let mut checked = 0usize;
        for s in [1i64, -1] {
            let xs: QVec = x.iter().map(|v| v * int(s)).collect();
            // n24 shift: 24 (l,x) + 12 t (x,x); w shift: den t G x
            let gx = g.mul_vec(&xs);
            let dw: Vec<Rational> = gx.iter().map(|v| v * t * int(self.den)).collect();
            if dw.iter().any(|v| !v.is_integer()) {
                return Ok(EllipticCheck { holds: false, sign, checked, witness: None });
            }
            let dw: Vec<i64> = dw.iter().map(|v| v.to_integer().to_i64().unwrap()).collect();
            let xn: Vec<Rational> = xs.iter().map(|v| v * int(24) / int(self.den)).collect();
            let xd = linalg::common_denominator(&xn).to_i64().unwrap();
            let xi: Vec<i64> =
                xn.iter().map(|v| (v * int(xd)).to_integer().to_i64().unwrap()).collect();
            let base = &txx * int(12);
            if !base.is_integer() {
                return pre("12 t (x,x) must be integral");
            }
            let base = base.to_integer().to_i64().unwrap();
            for ((n, w), c) in &self.terms {
                let lx: i64 = w.iter().zip(&xi).map(|(a, b)| a * b).sum();
                if lx % xd != 0 {
                    return Ok(EllipticCheck { holds: false, sign, checked, witness: Some((*n, w.clone())) });
                }
                let n2 = lx / xd + base + n;
                if n2 > self.prec {
                    continue;
                }
                let w2: Vec<i64> = w.iter().zip(&dw).map(|(a, b)| a + b).collect();
                let other = if n2 < 0 { Rational::zero() } else { self.coeff(n2, &w2) };
                checked += 1;
                if *c != other * int(sign) {
                    return Ok(EllipticCheck { holds: false, sign, checked, witness: Some((*n, w.clone())) });
                }
            }
        }
        Ok(EllipticCheck { holds: true, sign, checked, witness: None })
    }

    /// Splits an index-1 series over an even lattice into theta components.
    pub fn theta_decompose(&self) -> Result<ThetaDecomposition> {
        if !self.shape.t.is_one() {
            return pre("theta decomposition needs index t = 1");
        }
        let lat = &self.shape.lattice;
        if !lat.is_even() {
            return pre("theta decomposition needs an even lattice");
        }
        let disc = lat.discriminant_group()?;
        let ginv = lat.gram.inverse().ok_or_else(|| Error::Precondition("degenerate frame".into()))?;
        let glinv = lat.gram_l().inverse().ok_or_else(|| Error::Precondition("degenerate lattice".into()))?;
        let to_coords = glinv.mul(&lat.basis.transpose());
        let nm = self.norms()?;
        let mut comps: Vec<BTreeMap<i64, (Rational, Key)>> = vec![BTreeMap::new(); disc.order()];
        for ((n, w), c) in &self.terms {
            let f: QVec = w.iter().map(|x| rat(*x, self.den)).collect();
            let y = to_coords.mul_vec(&f);
            if !lat.is_full_rank() && lat.basis.mul_vec(&y) != ginv.mul_vec(&f) {
                return Err(Error::Inconsistent(format!("key {:?} outside lattice span", w)));
            }
            let mu = disc
                .class_of_coords(&y)
                .ok_or_else(|| Error::Inconsistent(format!("key {:?} not in the dual lattice", w)))?;
            let h = int(*n) - nm.lnorm(w) * int(12);
            if !h.is_integer() {
                return Err(Error::NonIntegralKey(format!("{:?}", w)));
            }
            let h = h.to_integer().to_i64().unwrap();
            match comps[mu].get(&h) {
                Some((c0, k0)) if c0 != c => {
                    return Err(Error::Inconsistent(format!(
                        "keys {:?} and {:?} share class {} and norm but have coefficients {} and {}",
                        k0,
                        (n, w),
                        disc.labels[mu],
                        c0,
                        c
                    )));
                }
                Some(_) => {}
                None => {
                    comps[mu].insert(h, (c.clone(), (*n, w.clone())));
                }
            }
        }
        let mut components = Vec::new();
        for (i, comp) in comps.into_iter().enumerate() {
            let theta = lattice_theta(lat, i, self.prec)?;
            let m = theta.min_support();
            let mut q = QSeries::zero(self.prec - m);
            for (h, (c, _)) in comp {
                q.add_term(h, c);
            }
            components.push(q);
        }
        let dec = ThetaDecomposition { labels: disc.labels.clone(), components };
        let rebuilt = dec.reconstruct(lat, self.shape.k2, self.shape.d, self.prec)?;
        self.agree(&rebuilt)
            .map_err(|e| Error::Inconsistent(format!("reconstruction differs: {e}")))?;
        Ok(dec)
    }

    /// Exact JSON form.
    pub fn to_json(&self) -> String {
        serde_json::to_string(&crate::codec::SeriesJson::from_series(self)).expect("serializable")
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(&crate::codec::SeriesJson::from_series(self)).expect("serializable")
    }

    pub fn from_json(s: &str) -> Result<FourierSeries> {
        let j: crate::codec::SeriesJson = serde_json::from_str(s).map_err(|e| Error::Decode(e.to_string()))?;
        j.into_series()
    }
}

impl ThetaDecomposition {
    /// `sum_mu phi_mu theta_mu` to precision `prec`.
    pub fn reconstruct(&self, lat: &Lattice, k2: i64, d: i64, prec: i64) -> Result<FourierSeries> {
        let mut acc: Option<FourierSeries> = None;
        for (i, comp) in self.components.iter().enumerate() {
            let theta = lattice_theta(lat, i, prec)?;
            let mut f = FourierSeries::from_qseries(comp, k2 - theta.shape.k2, d - theta.shape.d);
            f.shape.holomorphic = true;
            let mut term = f.mul(&theta)?;
            term.shape.d = d.rem_euclid(24);
            term.truncate(prec);
            acc = Some(match acc {
                None => term,
                Some(a) => {
                    let mut s = a.clone();
                    let d = lcm(s.den, term.den);
                    s = s.with_den(d);
                    for (k, c) in term.with_den(d).terms {
                        s.add_term(k.0, k.1, c);
                    }
                    s.prec = s.prec.min(term.prec);
                    s.normalize();
                    s
                }
            });
        }
        acc.ok_or_else(|| Error::Precondition("empty decomposition".into()))
    }
}

fn theta_like(kind: BasicKind, n24: i64) -> FourierSeries {
    let a1 = crate::lattice::root('A', 1).unwrap().intrinsic();
    let (lat, dd) = match kind {
        BasicKind::Theta => (a1, 3),
        _ => (a1.rescale(&int(3)).unwrap(), 1),
    };
    let shape = FormShape::new(lat, rat(1, 2), 1, dd, true);
    let mut s = FourierSeries::empty(shape, n24, 2);
    let mul = if kind == BasicKind::Theta { 3 } else { 1 };
    let modulus = if kind == BasicKind::Theta { -4 } else { 12 };
    let mut n = 0i64;
    while mul * n * n <= n24 {
        for m in if n == 0 { vec![0] } else { vec![n, -n] } {
            let k = kronecker(modulus, m);
            if k != 0 {
                s.terms.insert((mul * m * m, vec![m]), int(k as i64));
            }
        }
        n += 1;
    }
    s
}

/// `theta`, `theta_{3/2}` or `eta` to precision `n24`.
pub fn gen_basic(kind: BasicKind, n24: i64) -> Result<FourierSeries> {
    if n24 < 0 {
        return pre("precision must be >= 0");
    }
    Ok(match kind {
        BasicKind::Eta => FourierSeries::from_qseries(&crate::arith::eta_power(1, n24), 1, 1),
        _ => theta_like(kind, n24),
    })
}

/// `theta^L_mu = sum_{l in mu + L} q^((l,l)/2) exp(2 pi i (l, z))`, with `mu`
/// the index of a discriminant class.
pub fn lattice_theta(lat: &Lattice, mu: usize, n24: i64) -> Result<FourierSeries> {
    if !lat.is_even() {
        return pre("lattice theta series need an even lattice");
    }
    if !lat.is_full_rank() {
        return lattice_theta(&lat.intrinsic(), mu, n24);
    }
    let disc = lat.discriminant_group()?;
    if mu >= disc.order() {
        return pre(format!("no discriminant class {mu}"));
    }
    let y = &disc.coords[mu];
    let r = lat.frame_rank();
    let bound = rat(n24.max(0), 12);
    let e = enumerate(&lat.gram_l(), y, &bound)?;
    // functional G B X / den
    let gb = lat.gram.mul(&lat.basis).scale(&rat(1, e.den));
    let c = gb.denominator();
    let d = c.to_i64().ok_or_else(|| Error::NonIntegralKey("theta denominator".into()))?;
    let gbi: Vec<Vec<i64>> = (0..r)
        .map(|i| {
            (0..gb.cols)
                .map(|j| (gb.get(i, j) * Rational::from_integer(c.clone())).to_integer().to_i64().unwrap())
                .collect()
        })
        .collect();
    let norm_mu = lat.inner(&disc.reps[mu], &disc.reps[mu]);
    let dexp = rat_mod(&(norm_mu * int(12)), 24);
    if !dexp.is_integer() {
        return Err(Error::NonIntegralKey(format!("class {} has 12(mu,mu) not integral", disc.labels[mu])));
    }
    let shape = FormShape::new(lat.clone(), Rational::one(), r as i64, dexp.to_integer().to_i64().unwrap(), true);
    let mut s = FourierSeries::empty(shape, n24, d);
    for (x, norm) in &e.points {
        let n = norm * int(12);
        let n = n.to_integer().to_i64().unwrap();
        let w: Vec<i64> = gbi.iter().map(|row| row.iter().zip(x).map(|(a, b)| a * b).sum()).collect();
        s.add_term(n, w, Rational::one());
    }
    s.normalize();
    Ok(s)
}

/// `exp(pi i t ((x,x) + (y,y) - (x,y) + 2r))` as an exponent of `-1`, in `[0, 2)`.
pub fn heisenberg_character(lat: &Lattice, t: &Rational, x: &[Rational], y: &[Rational], r2: i64) -> Result<Rational> {
    if !lat.contains(x) || !lat.contains(y) {
        return Err(Error::NotInLattice("Heisenberg element".into()));
    }
    let xy = lat.inner(x, y);
    let memb = (int(r2) + &xy) / int(2);
    if !memb.is_integer() {
        return pre("r + (x,y)/2 must be integral");
    }
    let e = t * (lat.inner(x, x) + lat.inner(y, y) - xy + int(r2));
    Ok(rat_mod(&e, 2))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn keys(s: &FourierSeries) -> Vec<(i64, Vec<i64>, String)> {
        s.terms.iter().map(|((n, w), c)| (*n, w.clone(), c.to_string())).collect()
    }

    #[test]
    fn theta_terms() {
        let t = gen_basic(BasicKind::Theta, 30).unwrap();
        assert_eq!(t.den, 2);
        assert_eq!(
            keys(&t),
            vec![
                (3, vec![-1], "-1".into()),
                (3, vec![1], "1".into()),
                (27, vec![-3], "1".into()),
                (27, vec![3], "-1".into())
            ]
        );
        let t32 = gen_basic(BasicKind::Theta32, 30).unwrap();
        assert_eq!(
            keys(&t32),
            vec![
                (1, vec![-1], "1".into()),
                (1, vec![1], "1".into()),
                (25, vec![-5], "-1".into()),
                (25, vec![5], "-1".into())
            ]
        );
        let e = gen_basic(BasicKind::Eta, 130).unwrap();
        let ks: Vec<(i64, String)> = e.terms.iter().map(|(k, c)| (k.0, c.to_string())).collect();
        assert_eq!(
            ks,
            vec![(1, "1".into()), (25, "-1".into()), (49, "-1".into()), (121, "1".into())]
        );
    }

    #[test]
    fn theta_square_leading_layer() {
        let t = gen_basic(BasicKind::Theta, 30).unwrap();
        let sq = t.mul(&t).unwrap();
        assert_eq!(sq.coeff(6, &[1]), int(1));
        assert_eq!(sq.coeff(6, &[-1]), int(1));
        assert_eq!(sq.coeff(6, &[0]), int(-2));
        assert_eq!(sq.den, 1);
    }

    #[test]
    fn heisenberg_examples() {
        let a1 = crate::lattice::root('A', 1).unwrap().intrinsic();
        let h = rat(1, 2);
        assert_eq!(heisenberg_character(&a1, &h, &[int(1)], &[int(0)], 0).unwrap(), int(1));
        assert_eq!(heisenberg_character(&a1, &h, &[int(0)], &[int(0)], 2).unwrap(), int(1));
        let d4 = crate::lattice::root('D', 4).unwrap();
        let x = d4.basis.col(0);
        let z = vec![Rational::zero(); 4];
        assert_eq!(heisenberg_character(&d4, &int(1), &x, &z, 0).unwrap(), int(0));
        assert!(heisenberg_character(&a1, &h, &[int(1)], &[int(1)], 1).is_err());
    }

    #[test]
    fn eta_quotient_examples() {
        let e = gen_basic(BasicKind::Eta, 60).unwrap();
        let one = e.eta_quotient(-1).unwrap();
        assert_eq!(keys(&one), vec![(0, vec![], "1".into())]);
        let t = gen_basic(BasicKind::Theta, 60).unwrap();
        let q = t.eta_quotient(-1).unwrap();
        assert!(!q.shape.holomorphic);
        assert_eq!(q.hyperbolic_norm(2, &[1]).unwrap(), rat(1, 12) - rat(1, 8));
    }

    #[test]
    fn q_rescale_examples() {
        let e = gen_basic(BasicKind::Eta, 60).unwrap();
        let e2 = e.q_rescale(2).unwrap();
        assert_eq!(e2.terms.keys().map(|k| k.0).collect::<Vec<_>>(), vec![2, 50, 98]);
        assert_eq!(e.q_rescale(1).unwrap().terms, e.terms);
        assert!(gen_basic(BasicKind::Theta, 10).unwrap().q_rescale(2).is_err());
    }
}
