//! Named theta-products and theta series.

use num_traits::{One, Zero};

use crate::arith::{int, rat, Rational};
use crate::error::{pre, Result};
use crate::lattice::{root, Lattice};
use crate::linalg::QMat;
use crate::series::{gen_basic, lattice_theta, BasicKind, FourierSeries};

pub fn theta(n24: i64) -> Result<FourierSeries> {
    gen_basic(BasicKind::Theta, n24)
}

pub fn theta32(n24: i64) -> Result<FourierSeries> {
    gen_basic(BasicKind::Theta32, n24)
}

pub fn eta(n24: i64) -> Result<FourierSeries> {
    gen_basic(BasicKind::Eta, n24)
}

/// `theta_{mA_1}(z) = theta(z_1) ... theta(z_m)`, index 1/2.
pub fn theta_ma1(m: usize, n24: i64) -> Result<FourierSeries> {
    theta(n24)?.tensor_power(m).map(|s| s.truncated(n24))
}

/// `theta_{D_m}`: the same product read as an index 1 form on `D_m`.
pub fn theta_d(m: usize, n24: i64) -> Result<FourierSeries> {
    let lat = root('D', m)?;
    let s = theta(n24)?.tensor_power(m)?;
    s.substitute(&QMat::identity(m), lat, Rational::one()).map(|s| s.truncated(n24))
}

/// `theta_{D_m(3)}` from `theta_{3/2}`.
pub fn theta_d3(m: usize, n24: i64) -> Result<FourierSeries> {
    let lat = root('D', m)?.rescale(&int(3))?;
    let s = theta32(n24)?.tensor_power(m)?;
    s.substitute(&QMat::identity(m), lat, Rational::one()).map(|s| s.truncated(n24))
}

/// `A_m` in the coordinates of the basis `e_i - e_{m+1}`: Gram `c (I + J)`.
pub fn a_lattice(m: usize, c: i64) -> Result<Lattice> {
    if m < 1 {
        return pre("A_m needs m >= 1");
    }
    let mut g = QMat::zeros(m, m);
    for i in 0..m {
        for j in 0..m {
            g.set(i, j, int(if i == j { 2 * c } else { c }));
        }
    }
    let name = if c == 1 { format!("A({m})") } else { format!("A({m})({c})") };
    Lattice::from_gram(name, g)
}

fn a_sum_matrix(m: usize) -> QMat {
    let mut a = QMat::zeros(m + 1, m);
    for j in 0..m {
        a.set(j, j, Rational::one());
        a.set(m, j, Rational::one());
    }
    a
}

/// `theta_{A_m} = theta(z_1) ... theta(z_m) theta(z_1 + ... + z_m)`.
pub fn theta_a(m: usize, n24: i64) -> Result<FourierSeries> {
    let lat = a_lattice(m, 1)?;
    let s = theta(n24)?.tensor_power(m + 1)?;
    s.substitute(&a_sum_matrix(m), lat, Rational::one()).map(|s| s.truncated(n24))
}

/// `theta_{A_m(3)}` from `theta_{3/2}`.
pub fn theta_a3(m: usize, n24: i64) -> Result<FourierSeries> {
    let lat = a_lattice(m, 3)?;
    let s = theta32(n24)?.tensor_power(m + 1)?;
    s.substitute(&a_sum_matrix(m), lat, Rational::one()).map(|s| s.truncated(n24))
}

fn d4_variant(signs: [[i64; 4]; 4], n24: i64) -> Result<FourierSeries> {
    let mut a = QMat::zeros(4, 4);
    for (i, row) in signs.iter().enumerate() {
        for (j, s) in row.iter().enumerate() {
            a.set(i, j, rat(*s, 2));
        }
    }
    let s = theta(n24)?.tensor_power(4)?;
    s.substitute(&a, root('D', 4)?, Rational::one()).map(|s| s.truncated(n24))
}

/// `theta^{(2)}_{D_4}`: arguments `(-z1+z2+z3+z4)/2` and its sign permutations.
pub fn theta_d4_2(n24: i64) -> Result<FourierSeries> {
    d4_variant([[-1, 1, 1, 1], [1, -1, 1, 1], [1, 1, -1, 1], [1, 1, 1, -1]], n24)
}

/// `theta^{(3)}_{D_4}`: arguments `(z1+z2+z3+z4)/2`, `(z1+z2-z3-z4)/2`, ...
pub fn theta_d4_3(n24: i64) -> Result<FourierSeries> {
    d4_variant([[1, 1, 1, 1], [1, 1, -1, -1], [1, -1, -1, 1], [1, -1, 1, -1]], n24)
}

/// `theta^{(1)}_{2A_1} = theta(z1 + z2) theta(z1 - z2)`, index 1 on `2A_1`.
pub fn theta_d2_1(n24: i64) -> Result<FourierSeries> {
    let a = QMat::from_ints(&[vec![1, 1], vec![1, -1]]);
    let lat = Lattice::from_gram("2A(1)", QMat::from_ints(&[vec![2, 0], vec![0, 2]]))?;
    theta(n24)?.tensor_power(2)?.substitute(&a, lat, Rational::one()).map(|s| s.truncated(n24))
}

/// `sigma_{A_2} = theta_{A_2} / eta`.
pub fn sigma_a2(n24: i64) -> Result<FourierSeries> {
    Ok(theta_a(2, n24 + 1)?.eta_quotient(-1)?.truncated(n24))
}

/// `theta_{a,b}(z) = theta(az) theta(bz) theta((a+b)z) / eta`, index
/// `a^2 + ab + b^2` on `A_1`.
pub fn quark(a: i64, b: i64, n24: i64) -> Result<FourierSeries> {
    if a <= 0 || b <= 0 {
        return pre("quark(a, b) needs a, b >= 1");
    }
    let m = QMat::from_ints(&[vec![a], vec![b], vec![a + b]]);
    let lat = root('A', 1)?.intrinsic();
    let t = int(a * a + a * b + b * b);
    let s = theta(n24 + 1)?.tensor_power(3)?.substitute(&m, lat, t)?;
    Ok(s.eta_quotient(-1)?.truncated(n24))
}

/// `theta_{E_6} = theta_1 - theta_2`.
pub fn theta_e6(n24: i64) -> Result<FourierSeries> {
    let e6 = root('E', 6)?;
    lattice_theta(&e6, 1, n24)?.sub(&lattice_theta(&e6, 2, n24)?)
}

/// Theta series of class `i` of a root lattice; kind 0, 1, 2 for A, D, E.
pub fn lat_theta(kind: i64, m: usize, i: usize, n24: i64) -> Result<FourierSeries> {
    let c = match kind {
        0 => 'A',
        1 => 'D',
        2 => 'E',
        _ => return pre("lattice kind must be 0 (A), 1 (D) or 2 (E)"),
    };
    lattice_theta(&root(c, m)?, i, n24)
}

/// `Theta_{E_8}`.
pub fn theta_e8(n24: i64) -> Result<FourierSeries> {
    lat_theta(2, 8, 0, n24)
}

pub fn eisenstein(k: i64, n24: i64) -> Result<FourierSeries> {
    FourierSeries::eisenstein(k, n24)
}

/// `Sum v_mu theta_mu` for a rational coefficient vector.
pub fn combination(lat: &Lattice, v: &[Rational], n24: i64) -> Result<FourierSeries> {
    let disc = lat.discriminant_group()?;
    if v.len() != disc.order() {
        return pre(format!("coefficient vector has length {}, expected {}", v.len(), disc.order()));
    }
    let mut acc: Option<FourierSeries> = None;
    for (i, c) in v.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let th = lattice_theta(lat, i, n24)?.scale(c);
        acc = Some(match acc {
            None => th,
            Some(a) => a.add(&th)?,
        });
    }
    match acc {
        Some(a) => Ok(a),
        None => {
            let mut z = lattice_theta(lat, 0, n24)?;
            z.terms.clear();
            Ok(z)
        }
    }
}
