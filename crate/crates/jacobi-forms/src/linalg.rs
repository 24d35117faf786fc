//! Small dense exact matrices: rational (`QMat`) and integer (`IMat`) helpers,
//! Hermite and Smith normal forms.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::arith::{int, Rational};

pub type QVec = Vec<Rational>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QMat {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<Rational>,
}

impl QMat {
    pub fn zeros(rows: usize, cols: usize) -> QMat {
        QMat { rows, cols, data: vec![Rational::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> QMat {
        let mut m = QMat::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Rational::one());
        }
        m
    }

    pub fn from_ints(rows: &[Vec<i64>]) -> QMat {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        let mut m = QMat::zeros(r, c);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), c, "ragged matrix");
            for (j, v) in row.iter().enumerate() {
                m.set(i, j, int(*v));
            }
        }
        m
    }

    pub fn from_rows(rows: Vec<QVec>) -> QMat {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged matrix");
            data.extend(row);
        }
        QMat { rows: r, cols: c, data }
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_cols(cols: &[QVec], rows: usize) -> QMat {
        let mut m = QMat::zeros(rows, cols.len());
        for (j, c) in cols.iter().enumerate() {
            for i in 0..rows {
                m.set(i, j, c[i].clone());
            }
        }
        m
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Rational) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> QVec {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn col(&self, j: usize) -> QVec {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn transpose(&self) -> QMat {
        let mut m = QMat::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m.set(j, i, self.get(i, j).clone());
            }
        }
        m
    }

    pub fn mul(&self, o: &QMat) -> QMat {
        assert_eq!(self.cols, o.rows, "dimension mismatch");
        let mut m = QMat::zeros(self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..o.cols {
                    let b = o.get(k, j);
                    if !b.is_zero() {
                        let v = m.get(i, j) + a * b;
                        m.set(i, j, v);
                    }
                }
            }
        }
        m
    }

    pub fn mul_vec(&self, v: &[Rational]) -> QVec {
        assert_eq!(self.cols, v.len(), "dimension mismatch");
        (0..self.rows)
            .map(|i| {
                let mut s = Rational::zero();
                for j in 0..self.cols {
                    let a = self.get(i, j);
                    if !a.is_zero() && !v[j].is_zero() {
                        s += a * &v[j];
                    }
                }
                s
            })
            .collect()
    }

    pub fn scale(&self, c: &Rational) -> QMat {
        QMat { rows: self.rows, cols: self.cols, data: self.data.iter().map(|x| x * c).collect() }
    }

    pub fn is_symmetric(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    pub fn is_integral(&self) -> bool {
        self.data.iter().all(|x| x.is_integer())
    }

    /// Block diagonal sum.
    pub fn direct_sum(&self, o: &QMat) -> QMat {
        let mut m = QMat::zeros(self.rows + o.rows, self.cols + o.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m.set(i, j, self.get(i, j).clone());
            }
        }
        for i in 0..o.rows {
            for j in 0..o.cols {
                m.set(self.rows + i, self.cols + j, o.get(i, j).clone());
            }
        }
        m
    }

    /// Reduced row echelon form; returns the pivot columns.
    pub fn rref(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| !self.get(i, c).is_zero()) else {
                continue;
            };
            for j in 0..self.cols {
                self.data.swap(r * self.cols + j, p * self.cols + j);
            }
            let inv = Rational::one() / self.get(r, c);
            for j in 0..self.cols {
                let v = self.get(r, j) * &inv;
                self.set(r, j, v);
            }
            for i in 0..self.rows {
                if i == r || self.get(i, c).is_zero() {
                    continue;
                }
                let f = self.get(i, c).clone();
                for j in 0..self.cols {
                    let v = self.get(i, j) - &f * self.get(r, j);
                    self.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        self.clone().rref().len()
    }

    pub fn det(&self) -> Rational {
        assert_eq!(self.rows, self.cols, "det of non-square matrix");
        let n = self.rows;
        let mut a = self.clone();
        let mut det = Rational::one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&i| !a.get(i, c).is_zero()) else {
                return Rational::zero();
            };
            if p != c {
                for j in 0..n {
                    a.data.swap(c * n + j, p * n + j);
                }
                det = -det;
            }
            let piv = a.get(c, c).clone();
            det *= &piv;
            for i in c + 1..n {
                if a.get(i, c).is_zero() {
                    continue;
                }
                let f = a.get(i, c) / &piv;
                for j in c..n {
                    let v = a.get(i, j) - &f * a.get(c, j);
                    a.set(i, j, v);
                }
            }
        }
        det
    }

    pub fn inverse(&self) -> Option<QMat> {
        assert_eq!(self.rows, self.cols, "inverse of non-square matrix");
        let n = self.rows;
        let mut aug = QMat::zeros(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, n + i, Rational::one());
        }
        let piv = aug.rref();
        if piv.len() < n || piv[n - 1] != n - 1 {
            return None;
        }
        let mut inv = QMat::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                inv.set(i, j, aug.get(i, n + j).clone());
            }
        }
        Some(inv)
    }

    /// Least common multiple of entry denominators.
    pub fn denominator(&self) -> BigInt {
        self.data.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()))
    }

    pub fn to_imat(&self) -> Option<IMat> {
        let mut m = IMat::zeros(self.rows, self.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let x = self.get(i, j);
                if !x.is_integer() {
                    return None;
                }
                m.set(i, j, x.numer().to_i128()?);
            }
        }
        Some(m)
    }

    /// Basis of the right kernel `{x : A x = 0}`.
    pub fn kernel(&self) -> Vec<QVec> {
        let mut a = self.clone();
        let piv = a.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !piv.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![Rational::zero(); self.cols];
                v[f] = Rational::one();
                for (r, &p) in piv.iter().enumerate() {
                    v[p] = -a.get(r, f).clone();
                }
                v
            })
            .collect()
    }
}

pub fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter().zip(b).fold(Rational::zero(), |acc, (x, y)| acc + x * y)
}

/// Bilinear form `a^T G b`.
pub fn form(g: &QMat, a: &[Rational], b: &[Rational]) -> Rational {
    dot(a, &g.mul_vec(b))
}

/// Dense integer matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IMat {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<i128>,
}

impl IMat {
    pub fn zeros(rows: usize, cols: usize) -> IMat {
        IMat { rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(n: usize) -> IMat {
        let mut m = IMat::zeros(n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    pub fn get(&self, i: usize, j: usize) -> i128 {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: i128) {
        self.data[i * self.cols + j] = v;
    }

    pub fn to_qmat(&self) -> QMat {
        QMat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| Rational::from_integer(BigInt::from(*x))).collect(),
        }
    }

    pub fn mul(&self, o: &IMat) -> IMat {
        assert_eq!(self.cols, o.rows, "dimension mismatch");
        let mut m = IMat::zeros(self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..o.cols {
                    m.data[i * o.cols + j] += a * o.get(k, j);
                }
            }
        }
        m
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    /// col[dst] += f * col[src]
    fn add_col(&mut self, dst: usize, src: usize, f: i128) {
        for i in 0..self.rows {
            let v = self.get(i, src);
            self.data[i * self.cols + dst] += f * v;
        }
    }

    fn add_row(&mut self, dst: usize, src: usize, f: i128) {
        for j in 0..self.cols {
            let v = self.get(src, j);
            self.data[dst * self.cols + j] += f * v;
        }
    }

    fn neg_col(&mut self, c: usize) {
        for i in 0..self.rows {
            self.data[i * self.cols + c] = -self.data[i * self.cols + c];
        }
    }

    fn neg_row(&mut self, r: usize) {
        for j in 0..self.cols {
            self.data[r * self.cols + j] = -self.data[r * self.cols + j];
        }
    }
}

/// Column-style Hermite form: returns `(H, U)` with `A U = H`, `U` unimodular,
/// `H` in column echelon form (pivot rows strictly increasing, pivots positive,
/// entries left of each pivot reduced into `[0, pivot)`), zero columns last.
pub fn column_hermite(a: &IMat) -> (IMat, IMat, usize) {
    let mut h = a.clone();
    let mut u = IMat::identity(a.cols);
    let mut pc = 0;
    for r in 0..h.rows {
        if pc == h.cols {
            break;
        }
        loop {
            // Pick the smallest nonzero |entry| in row r among columns >= pc.
            let mut best: Option<usize> = None;
            for c in pc..h.cols {
                let v = h.get(r, c);
                if v != 0 && best.map_or(true, |b| v.abs() < h.get(r, b).abs()) {
                    best = Some(c);
                }
            }
            let Some(b) = best else { break };
            h.swap_cols(pc, b);
            u.swap_cols(pc, b);
            let p = h.get(r, pc);
            let mut done = true;
            for c in pc + 1..h.cols {
                let v = h.get(r, c);
                if v != 0 {
                    let f = v.div_euclid(p);
                    h.add_col(c, pc, -f);
                    u.add_col(c, pc, -f);
                    if h.get(r, c) != 0 {
                        done = false;
                    }
                }
            }
            if done {
                if h.get(r, pc) < 0 {
                    h.neg_col(pc);
                    u.neg_col(pc);
                }
                let p = h.get(r, pc);
                for c in 0..pc {
                    let f = h.get(r, c).div_euclid(p);
                    if f != 0 {
                        h.add_col(c, pc, -f);
                        u.add_col(c, pc, -f);
                    }
                }
                pc += 1;
                break;
            }
        }
    }
    (h, u, pc)
}

/// Integer kernel basis of `A` (columns of the returned matrix).
pub fn integer_kernel(a: &IMat) -> IMat {
    let (_, u, rank) = column_hermite(a);
    let k = a.cols - rank;
    let mut out = IMat::zeros(a.cols, k);
    for j in 0..k {
        for i in 0..a.cols {
            out.set(i, j, u.get(i, rank + j));
        }
    }
    out
}

/// Smith normal form `U A V = S` with diagonal `s_1 | s_2 | ...` (non-negative).
pub struct Smith {
    pub u: IMat,
    pub s: IMat,
    pub v: IMat,
}

pub fn smith(a: &IMat) -> Smith {
    let mut s = a.clone();
    let mut u = IMat::identity(a.rows);
    let mut v = IMat::identity(a.cols);
    let n = a.rows.min(a.cols);
    let mut t = 0;
    while t < n {
        // Find the smallest nonzero entry in the trailing block.
        let mut best: Option<(usize, usize)> = None;
        for i in t..s.rows {
            for j in t..s.cols {
                let x = s.get(i, j);
                if x != 0 && best.map_or(true, |(bi, bj)| x.abs() < s.get(bi, bj).abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((bi, bj)) = best else { break };
        s.swap_rows(t, bi);
        u.swap_rows(t, bi);
        s.swap_cols(t, bj);
        v.swap_cols(t, bj);
        let p = s.get(t, t);
        let mut clean = true;
        for i in t + 1..s.rows {
            let f = s.get(i, t).div_euclid(p);
            if f != 0 {
                s.add_row(i, t, -f);
                u.add_row(i, t, -f);
            }
            if s.get(i, t) != 0 {
                clean = false;
            }
        }
        for j in t + 1..s.cols {
            let f = s.get(t, j).div_euclid(p);
            if f != 0 {
                s.add_col(j, t, -f);
                v.add_col(j, t, -f);
            }
            if s.get(t, j) != 0 {
                clean = false;
            }
        }
        if !clean {
            continue;
        }
        // Enforce divisibility of the rest of the block.
        let mut fixed = false;
        'outer: for i in t + 1..s.rows {
            for j in t + 1..s.cols {
                if s.get(i, j) % p != 0 {
                    s.add_row(t, i, 1);
                    u.add_row(t, i, 1);
                    fixed = true;
                    break 'outer;
                }
            }
        }
        if fixed {
            continue;
        }
        if p < 0 {
            s.neg_row(t);
            u.neg_row(t);
        }
        t += 1;
    }
    Smith { u, s, v }
}

/// Converts a rational vector to integers after scaling by its denominator.
pub fn common_denominator(v: &[Rational]) -> BigInt {
    v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()))
}

pub fn gcd_i128(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

pub fn is_positive_definite(g: &QMat) -> bool {
    (1..=g.rows).all(|k| {
        let mut m = QMat::zeros(k, k);
        for i in 0..k {
            for j in 0..k {
                m.set(i, j, g.get(i, j).clone());
            }
        }
        m.det().is_positive()
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn imat(rows: &[Vec<i128>]) -> IMat {
        let mut m = IMat::zeros(rows.len(), rows[0].len());
        for (i, r) in rows.iter().enumerate() {
            for (j, v) in r.iter().enumerate() {
                m.set(i, j, *v);
            }
        }
        m
    }

    #[test]
    fn smith_of_d4_gram() {
        let g = imat(&[vec![2, -1, 0, 0], vec![-1, 2, -1, -1], vec![0, -1, 2, 0], vec![0, -1, 0, 2]]);
        let sm = smith(&g);
        let prod = sm.u.mul(&g).mul(&sm.v);
        assert_eq!(prod, sm.s);
        let diag: Vec<i128> = (0..4).map(|i| sm.s.get(i, i)).collect();
        assert_eq!(diag, vec![1, 1, 2, 2]);
    }

    #[test]
    fn kernel_is_primitive() {
        let a = imat(&[vec![4, 2]]);
        let k = integer_kernel(&a);
        assert_eq!(k.cols, 1);
        let (x, y) = (k.get(0, 0), k.get(1, 0));
        assert_eq!(4 * x + 2 * y, 0);
        assert_eq!(gcd_i128(x, y), 1);
    }

    #[test]
    fn inverse_and_det() {
        let m = QMat::from_ints(&[vec![2, 1], vec![1, 2]]);
        assert_eq!(m.det(), int(3));
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv), QMat::identity(2));
    }
}
