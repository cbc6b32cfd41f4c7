//! Matrices of the form `sum_k f_k M_k` with scalar rational functions `f_k` and
//! constant matrices `M_k`.
//!
//! Connections such as KZ are naturally of this shape. Products and brackets stay
//! factored, and a zero test only has to evaluate one scalar combination per
//! distinct coefficient pattern instead of one per matrix entry.

use std::collections::HashMap;

use num_traits::Zero;

use crate::conventions::FlatnessConvention;
use crate::error::{Error, Result};
use crate::matrix::{Mat, QMat};
use crate::rational::Q;
use crate::ratfunc::RatFunc;

#[derive(Clone, Debug)]
pub struct FactoredMat {
    n: usize,
    rank: usize,
    terms: Vec<(RatFunc, QMat)>,
}

impl FactoredMat {
    pub fn zero(n: usize, rank: usize) -> Self {
        FactoredMat {
            n,
            rank,
            terms: Vec::new(),
        }
    }

    pub fn new(n: usize, rank: usize, terms: Vec<(RatFunc, QMat)>) -> Result<Self> {
        for (f, m) in &terms {
            if f.n_vars() != n {
                return Err(Error::VarCountMismatch(f.n_vars(), n));
            }
            if m.rows() != rank || m.cols() != rank {
                return Err(Error::Shape(format!("term matrix is {}x{}, expected {rank}x{rank}", m.rows(), m.cols())));
            }
        }
        Ok(FactoredMat { n, rank, terms }.simplified())
    }

    pub fn terms(&self) -> &[(RatFunc, QMat)] {
        &self.terms
    }

    /// Merges terms with equal scalar parts and drops zero terms.
    fn simplified(self) -> Self {
        let mut out: Vec<(RatFunc, QMat)> = Vec::new();
        for (f, m) in self.terms {
            if f.is_zero() || m.is_zero() {
                continue;
            }
            if let Some(slot) = out.iter_mut().find(|(g, _)| *g == f) {
                slot.1 = slot.1.add(&m).unwrap();
            } else if let Some(slot) = out.iter_mut().find(|(_, k)| *k == m) {
                slot.0 = &slot.0 + &f;
            } else {
                out.push((f, m));
            }
        }
        out.retain(|(f, m)| !f.is_zero() && !m.is_zero());
        FactoredMat {
            n: self.n,
            rank: self.rank,
            terms: out,
        }
    }

    pub fn add(&self, other: &FactoredMat) -> FactoredMat {
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        FactoredMat {
            n: self.n,
            rank: self.rank,
            terms,
        }
        .simplified()
    }

    pub fn scale(&self, c: &Q) -> FactoredMat {
        FactoredMat {
            n: self.n,
            rank: self.rank,
            terms: self.terms.iter().map(|(f, m)| (f.scale(c), m.clone())).collect(),
        }
        .simplified()
    }

    pub fn sub(&self, other: &FactoredMat) -> FactoredMat {
        self.add(&other.scale(&-Q::from_integer(1.into())))
    }

    pub fn mul(&self, other: &FactoredMat) -> Result<FactoredMat> {
        let mut terms = Vec::with_capacity(self.terms.len() * other.terms.len());
        for (f, a) in &self.terms {
            for (g, b) in &other.terms {
                terms.push((f * g, a.mul(b)?));
            }
        }
        Ok(FactoredMat {
            n: self.n,
            rank: self.rank,
            terms,
        }
        .simplified())
    }

    pub fn commutator(&self, other: &FactoredMat) -> Result<FactoredMat> {
        // sum f_a g_b [A_a, B_b], grouped by the scalar product
        let mut terms = Vec::with_capacity(self.terms.len() * other.terms.len());
        for (f, a) in &self.terms {
            for (g, b) in &other.terms {
                let c = a.mul(b)?.sub(&b.mul(a)?)?;
                if !c.is_zero() {
                    terms.push((f * g, c));
                }
            }
        }
        Ok(FactoredMat {
            n: self.n,
            rank: self.rank,
            terms,
        }
        .simplified())
    }

    pub fn partial(&self, i: usize) -> Result<FactoredMat> {
        let terms = self
            .terms
            .iter()
            .map(|(f, m)| Ok((f.partial(i)?, m.clone())))
            .collect::<Result<Vec<_>>>()?;
        Ok(FactoredMat {
            n: self.n,
            rank: self.rank,
            terms,
        }
        .simplified())
    }

    /// Exact zero test; on failure returns an offending entry and its value.
    pub fn nonzero_entry(&self) -> Option<(usize, usize, RatFunc)> {
        let mut cache: HashMap<Vec<Q>, bool> = HashMap::new();
        for r in 0..self.rank {
            for c in 0..self.rank {
                let key: Vec<Q> = self.terms.iter().map(|(_, m)| m.get(r, c).clone()).collect();
                if key.iter().all(Zero::is_zero) {
                    continue;
                }
                let zero = *cache.entry(key.clone()).or_insert_with(|| self.combine(&key).is_zero());
                if !zero {
                    return Some((r, c, self.combine(&key)));
                }
            }
        }
        None
    }

    pub fn is_zero(&self) -> bool {
        self.nonzero_entry().is_none()
    }

    fn combine(&self, coeffs: &[Q]) -> RatFunc {
        self.terms
            .iter()
            .zip(coeffs)
            .filter(|(_, c)| !c.is_zero())
            .fold(RatFunc::zero(self.n), |acc, ((f, _), c)| &acc + &f.scale(c))
    }

    pub fn to_mat(&self) -> Mat {
        let mut out = Mat::zeros(self.n, self.rank, self.rank);
        for r in 0..self.rank {
            for c in 0..self.rank {
                let key: Vec<Q> = self.terms.iter().map(|(_, m)| m.get(r, c).clone()).collect();
                if key.iter().any(|x| !x.is_zero()) {
                    out.set(r, c, self.combine(&key));
                }
            }
        }
        out
    }
}

/// Per-pair curvature outcome of a factored connection.
#[derive(Clone, Debug)]
pub struct PairCurvature {
    pub i: usize,
    pub j: usize,
    pub curl_zero: bool,
    pub bracket_zero: bool,
    pub paper_zero: bool,
    pub standard_zero: bool,
}

/// A connection whose matrices are all factored.
#[derive(Clone, Debug)]
pub struct FactoredConnection {
    pub n: usize,
    pub rank: usize,
    pub mats: Vec<FactoredMat>,
}

impl FactoredConnection {
    pub fn curvature(&self) -> Result<Vec<PairCurvature>> {
        use rayon::prelude::*;
        let pairs: Vec<(usize, usize)> = (0..self.n).flat_map(|i| (i + 1..self.n).map(move |j| (i, j))).collect();
        pairs
            .par_iter()
            .map(|&(i, j)| {
                let curl = self.mats[j].partial(i)?.sub(&self.mats[i].partial(j)?);
                let bracket = self.mats[i].commutator(&self.mats[j])?;
                let half = Q::new(1.into(), 2.into());
                let (curl_zero, bracket_zero) = (curl.is_zero(), bracket.is_zero());
                let (paper_zero, standard_zero) = if curl_zero && bracket_zero {
                    (true, true)
                } else {
                    (
                        curl.sub(&bracket.scale(&half)).is_zero(),
                        curl.add(&bracket).is_zero(),
                    )
                };
                Ok(PairCurvature {
                    i,
                    j,
                    curl_zero,
                    bracket_zero,
                    paper_zero,
                    standard_zero,
                })
            })
            .collect()
    }

    pub fn is_flat(&self, convention: FlatnessConvention) -> Result<bool> {
        Ok(self.curvature()?.iter().all(|p| match convention {
            FlatnessConvention::Paper => p.paper_zero,
            FlatnessConvention::Standard => p.standard_zero,
        }))
    }

    pub fn to_mats(&self) -> Vec<Mat> {
        self.mats.iter().map(FactoredMat::to_mat).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    #[test]
    fn factored_product_matches_dense() {
        let n = 3;
        let a = QMat::from_rows(vec![vec![q(0), q(1)], vec![q(2), q(0)]]).unwrap();
        let b = QMat::from_rows(vec![vec![q(1), q(0)], vec![q(0), q(-1)]]).unwrap();
        let f = RatFunc::diff_pow(n, 0, 1, -1).unwrap();
        let g = RatFunc::diff_pow(n, 1, 2, -1).unwrap();
        let x = FactoredMat::new(n, 2, vec![(f.clone(), a.clone()), (g.clone(), b.clone())]).unwrap();
        let y = FactoredMat::new(n, 2, vec![(g, a)]).unwrap();
        let dense = x.to_mat().commutator(&y.to_mat()).unwrap();
        assert_eq!(x.commutator(&y).unwrap().to_mat(), dense);
        assert_eq!(x.mul(&y).unwrap().to_mat(), x.to_mat().mul(&y.to_mat()).unwrap());
        assert_eq!(x.partial(1).unwrap().to_mat(), x.to_mat().partial(1).unwrap());
    }

    #[test]
    fn zero_test_uses_partial_fractions() {
        // 1/((z0-z1)(z0-z2)) + 1/((z1-z0)(z1-z2)) + 1/((z2-z0)(z2-z1)) = 0
        let n = 3;
        let u = |i, j| RatFunc::diff_pow(n, i, j, -1).unwrap();
        let id = QMat::identity(2);
        let m = FactoredMat::new(
            n,
            2,
            vec![
                (&u(0, 1) * &u(0, 2), id.clone()),
                (&u(1, 0) * &u(1, 2), id.clone()),
                (&u(2, 0) * &u(2, 1), id),
            ],
        )
        .unwrap();
        assert!(m.is_zero());
    }
}
