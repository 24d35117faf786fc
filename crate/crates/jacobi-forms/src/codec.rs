//! JSON encodings with exact rational strings.

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::arith::{fmt_rational, parse_rational, Rational};
use crate::error::{Error, Result};
use crate::lattice::Lattice;
use crate::linalg::QMat;
use crate::series::{FormShape, FourierSeries};

fn dec(msg: impl Into<String>) -> Error {
    Error::Decode(msg.into())
}

fn q(s: &str) -> Result<Rational> {
    parse_rational(s).map_err(|_| dec(format!("bad rational {s:?}")))
}

fn mat_to_json(m: &QMat) -> Vec<Vec<String>> {
    (0..m.rows).map(|i| m.row(i).iter().map(fmt_rational).collect()).collect()
}

fn mat_from_json(rows: &[Vec<String>], ncols: Option<usize>) -> Result<QMat> {
    let c = ncols.unwrap_or_else(|| rows.first().map_or(0, |r| r.len()));
    let mut m = QMat::zeros(rows.len(), c);
    for (i, r) in rows.iter().enumerate() {
        if r.len() != c {
            return Err(dec("ragged matrix"));
        }
        for (j, x) in r.iter().enumerate() {
            m.set(i, j, q(x)?);
        }
    }
    Ok(m)
}

#[derive(Serialize, Deserialize, Debug, Clone)]
#[serde(deny_unknown_fields)]
pub struct LabelJson {
    pub name: String,
    pub v: Vec<String>,
}

#[derive(Serialize, Deserialize, Debug, Clone)]
#[serde(deny_unknown_fields)]
pub struct LatticeJson {
    pub name: String,
    pub gram: Vec<Vec<String>>,
    pub basis: Vec<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<LabelJson>>,
}

impl LatticeJson {
    pub fn from_lattice(l: &Lattice) -> LatticeJson {
        LatticeJson {
            name: l.name.clone(),
            gram: mat_to_json(&l.gram),
            basis: mat_to_json(&l.basis),
            labels: l.labels.as_ref().map(|ls| {
                ls.iter().map(|(n, v)| LabelJson { name: n.clone(), v: v.iter().map(fmt_rational).collect() }).collect()
            }),
        }
    }

    pub fn into_lattice(self) -> Result<Lattice> {
        let r = self.gram.len();
        if r == 0 {
            if !self.basis.is_empty() {
                return Err(dec("basis of a rank 0 frame must be empty"));
            }
            let mut z = Lattice::zero();
            z.name = self.name;
            return Ok(z);
        }
        let gram = mat_from_json(&self.gram, Some(r))?;
        if self.basis.len() != r {
            return Err(dec("basis must have one row per frame coordinate"));
        }
        let basis = mat_from_json(&self.basis, None)?;
        let mut l = Lattice::new(self.name, gram, basis).map_err(|e| dec(e.to_string()))?;
        if let Some(ls) = self.labels {
            let mut out = Vec::new();
            for lj in ls {
                if lj.v.len() != r {
                    return Err(dec("label vector length"));
                }
                out.push((lj.name, lj.v.iter().map(|x| q(x)).collect::<Result<Vec<_>>>()?));
            }
            l.labels = Some(out);
            l.discriminant_group().map_err(|e| dec(e.to_string()))?;
        }
        Ok(l)
    }
}

#[derive(Serialize, Deserialize, Debug, Clone)]
#[serde(deny_unknown_fields)]
pub struct ShapeJson {
    pub lattice: LatticeJson,
    pub t: String,
    pub k2: i64,
    #[serde(rename = "D")]
    pub d: i64,
    pub holo: bool,
}

#[derive(Serialize, Deserialize, Debug, Clone)]
#[serde(deny_unknown_fields)]
pub struct TermJson {
    pub n24: i64,
    pub w: Vec<i64>,
    pub c: String,
}

#[derive(Serialize, Deserialize, Debug, Clone)]
#[serde(deny_unknown_fields)]
pub struct SeriesJson {
    pub shape: ShapeJson,
    pub prec: i64,
    pub den: i64,
    pub terms: Vec<TermJson>,
}

impl SeriesJson {
    pub fn from_series(s: &FourierSeries) -> SeriesJson {
        SeriesJson {
            shape: ShapeJson {
                lattice: LatticeJson::from_lattice(&s.shape.lattice),
                t: fmt_rational(&s.shape.t),
                k2: s.shape.k2,
                d: s.shape.d,
                holo: s.shape.holomorphic,
            },
            prec: s.prec,
            den: s.den,
            terms: s
                .terms
                .iter()
                .map(|((n, w), c)| TermJson { n24: *n, w: w.clone(), c: fmt_rational(c) })
                .collect(),
        }
    }

    /// Decodes and validates every series invariant.
    pub fn into_series(self) -> Result<FourierSeries> {
        let lattice = self.shape.lattice.into_lattice()?;
        let t = q(&self.shape.t)?;
        if t < Rational::zero() {
            return Err(dec("negative index"));
        }
        if !(0..24).contains(&self.shape.d) {
            return Err(dec("D must lie in 0..24"));
        }
        if self.den < 1 {
            return Err(dec("den must be positive"));
        }
        let r = lattice.frame_rank();
        let shape = FormShape::new(lattice, t, self.shape.k2, self.shape.d, self.shape.holo);
        let mut s = FourierSeries::empty(shape, self.prec, self.den);
        let mut last: Option<(i64, Vec<i64>)> = None;
        for tj in self.terms {
            if tj.w.len() != r {
                return Err(dec(format!("key length {} for frame rank {r}", tj.w.len())));
            }
            if tj.n24 > self.prec {
                return Err(dec(format!("key n24 = {} beyond precision {}", tj.n24, self.prec)));
            }
            if (tj.n24 - self.shape.d).rem_euclid(24) != 0 {
                return Err(dec(format!("key n24 = {} not congruent to D = {}", tj.n24, self.shape.d)));
            }
            let c = q(&tj.c)?;
            if c.is_zero() {
                return Err(dec("stored zero coefficient"));
            }
            let key = (tj.n24, tj.w);
            if let Some(prev) = &last {
                if *prev >= key {
                    return Err(dec("terms must be strictly sorted"));
                }
            }
            last = Some(key.clone());
            s.terms.insert(key, c);
        }
        if s.shape.holomorphic {
            if let Some((n24, w)) = s.holomorphy_violation()? {
                return Err(Error::NotHolomorphic { n24, w });
            }
        }
        Ok(s)
    }
}
