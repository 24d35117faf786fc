//! The acceptance corpus: fourteen exact checks, each reported as one outcome.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;

use crate::arith::{int, rat, Rational};
use crate::error::Result;
use crate::formlang::{eval_str, registry_expr, REGISTRY, SINGULAR_CORPUS};
use crate::forms;
use crate::hecke::{hecke_minus, lift_coefficient, lift_table, phi2_closed_form};
use crate::lattice::root;
use crate::linalg::QMat;
use crate::series::{Classification, FourierSeries};
use crate::weil::{eigenvector_to_series, joint_eigenvectors, weil_matrices, Cyc, CycExt, CycField, WeilPair};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub id: u32,
    pub title: &'static str,
    pub pass: bool,
    pub detail: String,
}

impl Outcome {
    pub fn line(&self) -> String {
        let tag = if self.pass { "PASS" } else { "FAIL" };
        format!("{tag} [{:>2}] {}: {}", self.id, self.title, self.detail)
    }
}

type Check = fn() -> std::result::Result<String, String>;

pub const CRITERIA: &[(u32, &str, Check)] = &[
    (1, "generator consistency", c01_products),
    (2, "D4 theta relation", c02_d4_relation),
    (3, "theta32 identity", c03_theta32),
    (4, "D1 theta difference", c04_d1),
    (5, "Ord table", c05_ord),
    (6, "singular-weight corpus", c06_singular),
    (7, "support congruence", c07_congruence),
    (8, "elliptic invariance", c08_elliptic),
    (9, "lifting oracle", c09_lift),
    (10, "Hecke oracle", c10_hecke),
    (11, "Weil catalogue", c11_weil),
    (12, "theta-quarks", c12_quarks),
    (13, "Heisenberg parity", c13_parity),
    (14, "pullback cusp criteria", c14_pullback),
];

/// Named subsets of the corpus.
pub const SUITES: &[(&str, &[u32])] = &[
    ("all", &[1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14]),
    ("series", &[1, 2, 3, 4, 5, 6, 7, 8]),
    ("lift", &[9, 10]),
    ("weil", &[11]),
    ("theta", &[12, 13, 14]),
];

pub fn suite(name: &str) -> Option<&'static [u32]> {
    SUITES.iter().find(|(n, _)| *n == name).map(|(_, ids)| *ids)
}

pub fn run(id: u32) -> Option<Outcome> {
    let (id, title, f) = CRITERIA.iter().find(|(i, _, _)| *i == id)?;
    let (pass, detail) = match f() {
        Ok(d) => (true, d),
        Err(d) => (false, d),
    };
    Some(Outcome { id: *id, title, pass, detail })
}

/// Runs the given criteria in parallel; results come back in input order.
pub fn run_ids(ids: &[u32]) -> Vec<Outcome> {
    ids.par_iter().filter_map(|i| run(*i)).collect()
}

pub fn run_all() -> Vec<Outcome> {
    run_ids(suite("all").unwrap())
}

type Res = std::result::Result<String, String>;

fn e<T>(r: Result<T>) -> std::result::Result<T, String> {
    r.map_err(|x| x.to_string())
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> std::result::Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn agree(a: &FourierSeries, b: &FourierSeries, what: &str) -> std::result::Result<(), String> {
    a.agree(b).map_err(|m| format!("{what}: {m}"))
}

fn ints(xs: &[i64]) -> Vec<Rational> {
    xs.iter().map(|x| int(*x)).collect()
}

/// Bivariate integer polynomial in `q` and `r`, truncated in `q`.
struct Bivariate {
    qmax: i64,
    c: BTreeMap<(i64, i64), i64>,
}

impl Bivariate {
    fn one(qmax: i64) -> Bivariate {
        Bivariate { qmax, c: BTreeMap::from([((0, 0), 1)]) }
    }

    /// Multiplies by `1 + s q^a r^b`.
    fn times_binomial(&mut self, s: i64, a: i64, b: i64) {
        if a > self.qmax {
            return;
        }
        let mut next = self.c.clone();
        for ((qa, ra), v) in &self.c {
            if qa + a <= self.qmax {
                *next.entry((qa + a, ra + b)).or_insert(0) += s * v;
            }
        }
        next.retain(|_, v| *v != 0);
        self.c = next;
    }
}

/// `-q^(1/8) r^(-1/2) prod (1 - q^(n-1) r)(1 - q^n r^-1)(1 - q^n)`, keys in
/// the `(n24, 2 * r-exponent)` convention.
fn triple_product(n24: i64) -> BTreeMap<(i64, i64), i64> {
    let qmax = (n24 - 3).div_euclid(24);
    let mut p = Bivariate::one(qmax);
    for n in 1..=qmax + 1 {
        p.times_binomial(-1, n - 1, 1);
        p.times_binomial(-1, n, -1);
        p.times_binomial(-1, n, 0);
    }
    p.c.into_iter().map(|((a, b), v)| ((3 + 24 * a, 2 * b - 1), -v)).collect()
}

/// `q^(1/24) r^(-1/2) prod (1 + q^(n-1) r)(1 + q^n r^-1)(1 - q^(2n-1) r^2)(1 - q^(2n-1) r^-2)(1 - q^n)`.
fn quintuple_product(n24: i64) -> BTreeMap<(i64, i64), i64> {
    let qmax = (n24 - 1).div_euclid(24);
    let mut p = Bivariate::one(qmax);
    for n in 1..=qmax + 1 {
        p.times_binomial(1, n - 1, 1);
        p.times_binomial(1, n, -1);
        p.times_binomial(-1, 2 * n - 1, 2);
        p.times_binomial(-1, 2 * n - 1, -2);
        p.times_binomial(-1, n, 0);
    }
    p.c.into_iter().map(|((a, b), v)| ((1 + 24 * a, 2 * b - 1), v)).collect()
}

fn as_keys(s: &FourierSeries) -> std::result::Result<BTreeMap<(i64, i64), i64>, String> {
    ensure(s.den == 2, || format!("expected denominator 2, got {}", s.den))?;
    s.terms
        .iter()
        .map(|((n, w), c)| {
            let v = c.to_integer().to_i64().filter(|_| c.is_integer()).ok_or("non-integral coefficient")?;
            Ok(((*n, w[0]), v))
        })
        .collect()
}

fn c01_products() -> Res {
    let n = 600;
    let a = as_keys(&e(forms::theta(n))?)?;
    let b = triple_product(n);
    ensure(a == b, || "theta differs from the triple product".into())?;
    let c = as_keys(&e(forms::theta32(n))?)?;
    let d = quintuple_product(n);
    ensure(c == d, || "theta32 differs from the quintuple product".into())?;
    Ok(format!("{} + {} terms equal at N24 = {n}", a.len(), c.len()))
}

fn c02_d4_relation() -> Res {
    let a = e(forms::theta_d(4, 96))?;
    let b = e(e(forms::theta_d4_2(96))?.add(&e(forms::theta_d4_3(96))?))?;
    agree(&a, &b, "theta_D4")?;
    ensure(!a.is_empty(), || "empty series".into())?;
    Ok(format!("{} terms at N24 = 96", a.len()))
}

fn theta_at_2z(n: i64) -> Result<FourierSeries> {
    let a1 = root('A', 1)?.intrinsic();
    forms::theta(n)?.substitute(&QMat::from_ints(&[vec![2]]), a1, int(2))
}

fn c03_theta32() -> Res {
    let lhs = e(e(forms::theta32(240))?.mul(&e(forms::theta(240))?))?;
    let rhs = e(e(forms::eta(240))?.mul(&e(theta_at_2z(240))?))?;
    ensure(lhs.prec >= 240 && rhs.prec >= 240, || "precision lost".into())?;
    agree(&lhs, &rhs, "theta32 theta = eta theta(2z)")?;
    Ok(format!("{} terms at N24 = 240", lhs.len()))
}

fn c04_d1() -> Res {
    let d1 = e(root('D', 1))?;
    let diff = e(e(forms::lat_theta(1, 1, 1, 240))?.sub(&e(forms::lat_theta(1, 1, 3, 240))?))?;
    let coord = e(diff.substitute(&QMat::from_ints(&[vec![2]]), d1.intrinsic(), int(1)))?;
    let t2 = e(theta_at_2z(240))?;
    agree(&coord, &t2, "theta_D1")?;
    Ok(format!("{} terms at N24 = 240", coord.len()))
}

fn c05_ord() -> Res {
    let n = 120;
    let table: Vec<(&str, Rational)> = vec![
        ("thetaA2", rat(1, 12)),
        ("thetaA4", rat(1, 20)),
        ("thetaA6", rat(1, 28)),
        ("thetaA2_3", rat(1, 36)),
        ("kappa2A4", rat(1, 60)),
        ("kappaA4A6", rat(1, 420)),
        ("sigmaA2", int(0)),
    ];
    let got: Vec<std::result::Result<Rational, String>> = table
        .par_iter()
        .map(|(name, _)| e(eval_str(registry_expr(name).unwrap(), n)).and_then(|s| e(s.ord())))
        .collect();
    let mut parts = Vec::new();
    for ((name, want), g) in table.iter().zip(got) {
        let g = g.map_err(|m| format!("{name}: {m}"))?;
        ensure(&g == want, || format!("Ord({name}) = {g}, expected {want}"))?;
        parts.push(format!("{name} {g}"));
    }
    Ok(parts.join(", "))
}

fn c06_singular() -> Res {
    let n = 48;
    let results: Vec<std::result::Result<usize, String>> = SINGULAR_CORPUS
        .par_iter()
        .map(|(name, src)| {
            let s = e(eval_str(src, n)).map_err(|m| format!("{name}: {m}"))?;
            ensure(s.shape.d.rem_euclid(24) == 0, || format!("{name}: D = {}", s.shape.d))?;
            ensure(!s.is_empty(), || format!("{name}: zero to N24 = {n}"))?;
            let c = e(s.classify())?;
            ensure(c == Classification::Singular, || format!("{name}: {} support", c.as_str()))?;
            Ok(s.len())
        })
        .collect();
    let mut total = 0;
    for r in results {
        total += r?;
    }
    Ok(format!("{} forms, {total} keys on the null cone at N24 = {n}", SINGULAR_CORPUS.len()))
}

fn c07_congruence() -> Res {
    let n = 96;
    let results: Vec<std::result::Result<usize, String>> = REGISTRY
        .par_iter()
        .map(|(name, src)| {
            let s = e(eval_str(src, n)).map_err(|m| format!("{name}: {m}"))?;
            let d = s.shape.d;
            match s.terms.keys().find(|k| (k.0 - d).rem_euclid(24) != 0) {
                Some(k) => Err(format!("{name}: key {k:?} with D = {d}")),
                None => Ok(s.len()),
            }
        })
        .collect();
    let mut total = 0;
    for r in results {
        total += r?;
    }
    Ok(format!("{} forms, {total} keys at N24 = {n}", REGISTRY.len()))
}

fn c08_elliptic() -> Res {
    let n = 120;
    let forms = vec![
        ("theta", e(forms::theta(n))?),
        ("theta32", e(forms::theta32(n))?),
        ("thetaD4", e(forms::theta_d(4, n))?),
        ("sigmaA2", e(forms::sigma_a2(n))?),
        ("quark21", e(forms::quark(2, 1, n))?),
        ("thetaE8", e(forms::theta_e8(n))?),
    ];
    let mut checked = 0;
    for (name, f) in &forms {
        let lat = &f.shape.lattice;
        for j in 0..lat.rank() {
            let x = lat.basis.col(j);
            let r = e(f.check_elliptic(&x))?;
            ensure(r.holds, || format!("{name}: basis vector {j} fails at {:?}", r.witness))?;
            let txx = &f.shape.t * lat.inner(&x, &x);
            let want = if txx.to_integer() % 2 == 0.into() { 1 } else { -1 };
            ensure(r.sign == want, || format!("{name}: sign {} for basis vector {j}", r.sign))?;
            ensure(r.checked > 0, || format!("{name}: nothing checked"))?;
            checked += r.checked;
        }
    }
    Ok(format!("{checked} coefficient pairs at N24 = {n}"))
}

/// All `l` in `(2Z+1)^4` with `(l,l) = total`, written as `2l`.
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
                let d = num_integer::Roots::sqrt(&rest);
                if d * d == rest && d % 2 == 1 {
                    out.push([a, b, c, d]);
                    out.push([a, b, c, -d]);
                }
            }
        }
    }
    out
}

fn c09_lift() -> Res {
    let phi = e(forms::theta_ma1(4, 12 * 81))?;
    let table = e(lift_table(&phi, 1, 81))?;
    let mut checked = 0;
    for n in (1..=9).step_by(2) {
        for m in (1..=9).step_by(2) {
            for v in odd_vectors(4 * n * m) {
                let c = e(lift_coefficient(&phi, n, &v, m, 1))?;
                let want = int(e(phi2_closed_form(n, &v, m))?);
                ensure(c == want, || format!("A({n}, {v:?}, {m}) = {c}, expected {want}"))?;
                ensure(table.get(n, &v, m) == c, || format!("table disagrees at ({n}, {v:?}, {m})"))?;
                checked += 1;
            }
        }
    }
    let asym = table.asymmetries();
    ensure(asym.is_empty(), || format!("{} asymmetric entries, first {:?}", asym.len(), asym[0]))?;
    Ok(format!("{checked} oracle values, {} table entries symmetric", table.entries.len()))
}

/// `m^(k-1) sum_{ad=m} d^-k sum_{b mod d} f(n, l)` placed at `(a n / d, a l)`,
/// for a series with integral `n`.
fn hecke_oracle(phi: &FourierSeries, m: i64, k: u32) -> std::result::Result<BTreeMap<(i64, Vec<i64>), Rational>, String> {
    let prec = phi.prec / m;
    let mut acc: BTreeMap<(i64, Vec<i64>), Rational> = BTreeMap::new();
    for a in (1..=m).filter(|a| m % a == 0) {
        let d = m / a;
        for ((n24, w), c) in &phi.terms {
            ensure(n24 % 24 == 0, || "oracle needs integral exponents".into())?;
            let n = n24 / 24;
            if n % d != 0 {
                continue;
            }
            let n2 = a * n24 / d;
            if n2 > prec {
                continue;
            }
            // sum_b e(nb/d) = d
            let v = c * int(m.pow(k - 1)) * int(d) / int(d.pow(k));
            *acc.entry((n2, w.iter().map(|x| a * x).collect())).or_insert_with(Rational::zero) += v;
        }
    }
    acc.retain(|_, v| !v.is_zero());
    Ok(acc)
}

fn c10_hecke() -> Res {
    let phi = e(forms::theta_e8(96))?;
    let mut sizes = Vec::new();
    for m in [2, 3, 4] {
        let h = e(hecke_minus(&phi, m))?;
        let oracle = hecke_oracle(&phi, m, 4)?;
        ensure(h.terms == oracle, || format!("V_{m} differs from the oracle"))?;
        sizes.push(format!("V{m}: {}", h.len()));
    }
    Ok(format!("{} at N24 = 96", sizes.join(", ")))
}

const HADAMARD: [[i64; 4]; 4] = [[1, 1, 1, 1], [1, 1, -1, -1], [1, -1, 1, -1], [1, -1, -1, 1]];

/// `q zeta_24^k`, optionally over `sqrt(r)`.
fn entry(f: &Arc<CycField>, q: Rational, k24: i64, inv_sqrt: Option<i64>, r: i64) -> CycExt {
    let z = Cyc::zeta(f, k24 * (f.n as i64 / 24));
    match inv_sqrt {
        None => CycExt { a: z.scale(&q), b: Cyc::zero(f), r },
        Some(s) => CycExt { a: Cyc::zero(f), b: z.scale(&(q / int(s))), r },
    }
}

fn printed_matrices(w: &WeilPair, ut: &[i64], us: &[Vec<(Rational, i64)>], inv_sqrt: Option<i64>) -> std::result::Result<(), String> {
    let f = CycField::new(w.n);
    let r = w.ut[0].r;
    for (i, k) in ut.iter().enumerate() {
        ensure(w.ut[i] == entry(&f, int(1), *k, None, r), || format!("{}: U(T)[{i}]", w.lattice))?;
    }
    for (i, row) in us.iter().enumerate() {
        for (j, (q, k)) in row.iter().enumerate() {
            let want = entry(&f, q.clone(), *k, inv_sqrt, r);
            ensure(w.us[i][j] == want, || format!("{}: U(S)[{i}][{j}] = {}", w.lattice, w.us[i][j]))?;
        }
    }
    Ok(())
}

fn c11_weil() -> Res {
    let wm = |c, m| e(root(c, m)).and_then(|l| e(weil_matrices(&l)));
    for (m, ut, scale) in [(4, [0, 12, 12, 12], rat(-1, 2)), (8, [0, 0, 12, 0], rat(1, 2))] {
        let us: Vec<Vec<(Rational, i64)>> =
            HADAMARD.iter().map(|row| row.iter().map(|s| (&scale * int(*s), 0)).collect()).collect();
        printed_matrices(&wm('D', m)?, &ut, &us, None)?;
    }
    // 1, -i, -1, i times zeta_8^-1 / 2
    let d9 = [[0, 0, 0, 0], [0, 18, 12, 6], [0, 12, 0, 12], [0, 6, 12, 18]];
    let us: Vec<Vec<(Rational, i64)>> = d9.iter().map(|row| row.iter().map(|k| (rat(1, 2), k - 3)).collect()).collect();
    printed_matrices(&wm('D', 9)?, &[0, 3, 12, 3], &us, None)?;
    // i rho^(ij) / sqrt(3)
    let e6 = [[0, 0, 0], [0, 2, 1], [0, 1, 2]];
    let us: Vec<Vec<(Rational, i64)>> = e6.iter().map(|row| row.iter().map(|j| (int(1), 6 + 8 * j)).collect()).collect();
    printed_matrices(&wm('E', 6)?, &[0, 16, 16], &us, Some(3))?;

    let cases = [('D', 4, vec![0, 1, 0, -1], 3), ('D', 8, vec![0, 1, 0, -1], 2), ('D', 9, vec![0, 1, 0, -1], 1), ('E', 6, vec![0, 1, -1], 1), ('D', 12, vec![0, 1, 0, -1], 3), ('D', 16, vec![0, 1, 0, -1], 2)];
    let mut dims = Vec::new();
    let mut bad = Vec::new();
    for (c, m, v, want) in cases {
        let spaces = e(joint_eigenvectors(&wm(c, m)?))?;
        let hit = spaces.iter().find(|s| s.contains(&ints(&v))).ok_or_else(|| format!("{c}{m}: no eigenspace contains {v:?}"))?;
        dims.push(format!("{c}{m} {}", hit.dim()));
        if hit.dim() != want {
            bad.push(format!("{c}{m} has dimension {} (expected {want})", hit.dim()));
        }
    }
    let d4 = e(root('D', 4))?;
    let s = e(eigenvector_to_series(&d4, &ints(&[0, 1, 0, -1]), 48))?;
    agree(&s, &e(forms::theta_d(4, 48))?, "D4 eigenvector")?;
    let summary = format!("printed matrices match; eigenspace dimensions {}; D4 eigenvector gives theta_D4", dims.join(", "));
    if bad.is_empty() {
        Ok(summary)
    } else {
        Err(format!("{summary}; {}", bad.join("; ")))
    }
}

fn c12_quarks() -> Res {
    let q12 = e(forms::quark(1, 2, 240))?;
    ensure(q12.shape.t == int(7), || format!("index {}", q12.shape.t))?;
    ensure(e(q12.classify())? == Classification::Cusp, || "theta_{1,2} is not cusp".into())?;
    agree(&q12, &e(forms::quark(2, 1, 240))?, "theta_{2,1}")?;
    let s = e(forms::sigma_a2(121))?;
    for (a, b) in [(1i64, 1i64), (1, 2), (2, 3)] {
        let p = e(s.pullback_perp(&frame_functional(&[2 * b, -2 * a, 0])))?;
        agree(&e(forms::quark(a, b, 120))?, &p, &format!("theta_({a},{b})"))?;
    }
    Ok("theta_{1,2} cusp of index 7; three pullbacks agree at N24 = 120".into())
}

/// For `u` in `Z^3`, the `A_2` frame vector `v` with `(x, v) = (x, u)` on
/// `A_2 = (1,1,1)^perp`; frame basis `e_i - e_3`, Gram `I + J`, scaled by 3.
pub fn frame_functional(u: &[i64; 3]) -> Vec<Rational> {
    let (f0, f1) = (u[0] - u[2], u[1] - u[2]);
    ints(&[2 * f0 - f1, 2 * f1 - f0])
}

fn c13_parity() -> Res {
    for m in 1..=8 {
        let a = e(forms::theta_ma1(m, 24))?;
        ensure(!a.shape.heisenberg_trivial(), || format!("{m}A1 reported trivial"))?;
        let d = e(forms::theta_d(m, 24))?;
        ensure(d.shape.heisenberg_trivial(), || format!("D{m} reported nontrivial"))?;
    }
    Ok("mA1 odd, D_m even for m = 1..8".into())
}

fn c14_pullback() -> Res {
    let n = 120;
    let p = e(e(forms::theta_d(4, n))?.pullback_perp(&ints(&[4, 2, 0, 0])))?;
    let c = e(p.classify())?;
    let o = e(p.ord())?;
    ensure(c == Classification::Cusp && o == rat(1, 20), || format!("D4 pullback: {} with Ord {o}", c.as_str()))?;
    let u = [0, 2, 6];
    let s = e(e(forms::sigma_a2(n))?.pullback_perp(&frame_functional(&u)))?;
    let c2 = e(s.classify())?;
    ensure(c2 == Classification::Cusp, || format!("sigma_A2 at u = {u:?}: {}", c2.as_str()))?;
    Ok(format!("D4 pullback cusp with Ord 1/20; sigma_A2 at u = {u:?} cusp with Ord {}", e(s.ord())?))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn products_start_correctly() {
        let t = triple_product(30);
        assert_eq!(t, BTreeMap::from([((3, 1), 1), ((3, -1), -1), ((27, 3), -1), ((27, -3), 1)]));
        let q = quintuple_product(30);
        assert_eq!(q, BTreeMap::from([((1, 1), 1), ((1, -1), 1), ((25, 5), -1), ((25, -5), -1)]));
    }

    #[test]
    fn suites_cover_all() {
        let mut ids: Vec<u32> = SUITES[1..].iter().flat_map(|(_, i)| i.iter().copied()).collect();
        ids.sort();
        assert_eq!(ids, suite("all").unwrap());
    }
}
