//! Homogeneous connections on free graded modules over the configuration-space
//! ring.
//!
//! A connection of rank `r` in `n` variables is stored as matrices `E_1..E_n`
//! acting on coordinate columns: `nabla(a) = da + sum_i E_i a dz_i`.

use num_traits::Zero;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::conventions::FlatnessConvention;
use crate::cooperad::{cocompose, Layout};
use crate::error::{parse_err, Error, Result};
use crate::matrix::Mat;
use crate::rational::{parse_q, q, q_to_string, Q};
use crate::ratfunc::RatFunc;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Connection {
    n: usize,
    rank: usize,
    basis_degrees: Vec<Q>,
    mats: Vec<Mat>,
}

/// Curl and bracket parts of the curvature for one pair `i < j`.
#[derive(Clone, Debug)]
pub struct CurvaturePart {
    pub i: usize,
    pub j: usize,
    pub curl: Mat,
    pub bracket: Mat,
}

/// Outcome of a flatness check; `witness` names the first failing pair.
#[derive(Clone, Debug)]
pub struct Flatness {
    pub flat: bool,
    pub witness: Option<(usize, usize, Mat)>,
}

impl Connection {
    pub fn new(n: usize, basis_degrees: Vec<Q>, mats: Vec<Mat>) -> Result<Self> {
        let rank = basis_degrees.len();
        if mats.len() != n {
            return Err(Error::Shape(format!("expected {n} matrices, found {}", mats.len())));
        }
        for (i, m) in mats.iter().enumerate() {
            if m.rows() != rank || m.cols() != rank {
                return Err(Error::Shape(format!("E_{} is {}x{}, expected {rank}x{rank}", i + 1, m.rows(), m.cols())));
            }
            if m.n_vars() != n {
                return Err(Error::VarCountMismatch(m.n_vars(), n));
            }
        }
        Ok(Connection {
            n,
            rank,
            basis_degrees,
            mats,
        })
    }

    pub fn zero(n: usize, rank: usize) -> Self {
        Connection {
            n,
            rank,
            basis_degrees: vec![Q::zero(); rank],
            mats: vec![Mat::zeros(n, rank, rank); n],
        }
    }

    /// Rank-1 connection `a * sum_{i<j} dlog(z_i - z_j)` over the given pairs.
    pub fn abelian_dlog(n: usize, pairs: &[(usize, usize)], a: &Q) -> Result<Self> {
        let mut comps = vec![RatFunc::zero(n); n];
        for &(i, j) in pairs {
            let inv = RatFunc::diff_pow(n, i, j, -1)?.scale(a);
            comps[i] = &comps[i] + &inv;
            comps[j] = &comps[j] - &inv;
        }
        let mats = comps.iter().map(|f| Mat::scalar(1, f)).collect();
        Connection::new(n, vec![Q::zero()], mats)
    }

    pub fn n_vars(&self) -> usize {
        self.n
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn basis_degrees(&self) -> &[Q] {
        &self.basis_degrees
    }

    pub fn matrices(&self) -> &[Mat] {
        &self.mats
    }

    pub fn matrix(&self, i: usize) -> &Mat {
        &self.mats[i]
    }

    pub fn with_basis_degrees(mut self, degrees: Vec<Q>) -> Result<Self> {
        if degrees.len() != self.rank {
            return Err(Error::Shape("basis degree count differs from rank".into()));
        }
        self.basis_degrees = degrees;
        Ok(self)
    }

    pub fn add(&self, other: &Connection) -> Result<Connection> {
        self.same_shape(other)?;
        let mats = self.mats.iter().zip(&other.mats).map(|(a, b)| a.add(b)).collect::<Result<_>>()?;
        Connection::new(self.n, self.basis_degrees.clone(), mats)
    }

    pub fn sub(&self, other: &Connection) -> Result<Connection> {
        self.same_shape(other)?;
        let mats = self.mats.iter().zip(&other.mats).map(|(a, b)| a.sub(b)).collect::<Result<_>>()?;
        Connection::new(self.n, self.basis_degrees.clone(), mats)
    }

    fn same_shape(&self, other: &Connection) -> Result<()> {
        if self.n != other.n || self.rank != other.rank {
            return Err(Error::Shape(format!(
                "rank {} in {} variables vs rank {} in {} variables",
                self.rank, self.n, other.rank, other.n
            )));
        }
        Ok(())
    }

    /// Checks that each entry `(E_i)_{ab}` is homogeneous of degree `d_b - d_a - 1`.
    /// Returns the first offending `(i, a, b)`.
    pub fn homogeneity_violation(&self) -> Option<(usize, usize, usize)> {
        for (i, m) in self.mats.iter().enumerate() {
            for a in 0..self.rank {
                for b in 0..self.rank {
                    let f = m.get(a, b);
                    if f.is_zero() {
                        continue;
                    }
                    let want = &self.basis_degrees[b] - &self.basis_degrees[a] - q(1);
                    match f.degree() {
                        Some(d) if Q::from_integer(d.into()) == want => {}
                        _ => return Some((i, a, b)),
                    }
                }
            }
        }
        None
    }

    /// Curl and bracket parts for every pair `i < j`.
    pub fn curvature(&self) -> Result<Vec<CurvaturePart>> {
        let pairs: Vec<(usize, usize)> = (0..self.n).flat_map(|i| (i + 1..self.n).map(move |j| (i, j))).collect();
        pairs
            .par_iter()
            .map(|&(i, j)| {
                let curl = self.mats[j].partial(i)?.sub(&self.mats[i].partial(j)?)?;
                let bracket = self.mats[i].commutator(&self.mats[j])?;
                Ok(CurvaturePart { i, j, curl, bracket })
            })
            .collect()
    }

    pub fn is_flat(&self, convention: FlatnessConvention) -> Result<Flatness> {
        for part in self.curvature()? {
            let total = match convention {
                FlatnessConvention::Paper => part.curl.sub(&part.bracket.scale(&Q::new(1.into(), 2.into())))?,
                FlatnessConvention::Standard => part.curl.add(&part.bracket)?,
            };
            if !total.is_zero() {
                return Ok(Flatness {
                    flat: false,
                    witness: Some((part.i, part.j, total)),
                });
            }
        }
        Ok(Flatness {
            flat: true,
            witness: None,
        })
    }

    /// True when flat under at least one convention.
    pub fn is_flat_any(&self) -> Result<bool> {
        Ok(self.is_flat(FlatnessConvention::Standard)?.flat || self.is_flat(FlatnessConvention::Paper)?.flat)
    }

    /// `sum_i z_i E_i`.
    pub fn euler_contraction(&self) -> Mat {
        let mut acc = Mat::zeros(self.n, self.rank, self.rank);
        for (i, m) in self.mats.iter().enumerate() {
            acc = acc.add(&m.scale_by(&RatFunc::var(self.n, i))).unwrap();
        }
        acc
    }

    /// The scalar function `k` with `sum_i z_i (E_i - ref_i) = k Id`, if the
    /// contraction is scalar at all.
    pub fn degree_function(&self, reference: Option<&Connection>) -> Result<Option<RatFunc>> {
        let diff = match reference {
            Some(r) => self.sub(r)?,
            None => self.clone(),
        };
        let m = diff.euler_contraction();
        if self.rank == 0 {
            return Ok(Some(RatFunc::zero(self.n)));
        }
        let k = m.get(0, 0).clone();
        for a in 0..self.rank {
            for b in 0..self.rank {
                let want = if a == b { &k } else { &RatFunc::zero(self.n) };
                if m.get(a, b) != want {
                    return Ok(None);
                }
            }
        }
        Ok(Some(k))
    }

    /// The degree of a flat connection relative to `reference` (default: the
    /// trivial connection). `None` when the Euler contraction is not a constant
    /// multiple of the identity.
    pub fn degree(&self, reference: Option<&Connection>) -> Result<Option<Q>> {
        for c in std::iter::once(self).chain(reference) {
            if !c.is_flat_any()? {
                let (i, j, _) = c.is_flat(FlatnessConvention::Standard)?.witness.unwrap();
                return Err(Error::NotFlat(i, j));
            }
        }
        Ok(self.degree_function(reference)?.and_then(|k| k.as_constant()))
    }

    /// `g^{-1} E_i g + g^{-1} d_i g`.
    pub fn gauge_transform(&self, g: &GaugeMap) -> Result<Connection> {
        if g.matrix().rows() != self.rank || g.matrix().n_vars() != self.n {
            return Err(Error::Shape("gauge map does not match the connection".into()));
        }
        let gi = g.inverse()?;
        let mats = (0..self.n)
            .into_par_iter()
            .map(|i| {
                let conj = gi.mul(&self.mats[i])?.mul(g.matrix())?;
                conj.add(&gi.mul(&g.matrix().partial(i)?)?)
            })
            .collect::<Result<Vec<_>>>()?;
        Connection::new(self.n, self.basis_degrees.clone(), mats)
    }

    /// True when `other` is exactly the gauge transform of `self` by `g`.
    pub fn same_monodromy(&self, other: &Connection, g: &GaugeMap) -> Result<bool> {
        if self.same_shape(other).is_err() {
            return Ok(false);
        }
        Ok(&self.gauge_transform(g)? == other)
    }

    /// Pushforward along a variable map `z_v -> z_{map[v]}` into `m` variables.
    /// Covers permutations (`m = n`) and co-augmentations.
    pub fn pushforward(&self, map: &[usize], m: usize) -> Result<Connection> {
        if map.len() != self.n {
            return Err(Error::VarCountMismatch(map.len(), self.n));
        }
        let mut mats = vec![Mat::zeros(m, self.rank, self.rank); m];
        for (v, e) in self.mats.iter().enumerate() {
            mats[map[v]] = e.relabel(map, m)?;
        }
        Connection::new(m, self.basis_degrees.clone(), mats)
    }

    /// Pushforward along the structure map of a partition, truncated at `order`.
    pub fn pushforward_structure(&self, partition: &[usize], order: i64) -> Result<TruncConnection> {
        let layout = Layout::new(partition);
        if layout.n_inner() != self.n {
            return Err(Error::PartitionMismatch(format!("{:?} for {} variables", partition, self.n)));
        }
        let total = layout.total();
        let dt = self
            .mats
            .par_iter()
            .map(|e| e.try_map(|f| Ok(cocompose(f, partition, order)?.value().clone())))
            .collect::<Result<Vec<_>>>()?;
        let mut dz = vec![Mat::zeros(total, self.rank, self.rank); layout.n_outer()];
        for (leaf, m) in dt.iter().enumerate() {
            let b = layout.block_of(leaf);
            dz[b] = dz[b].add(m)?;
        }
        Ok(TruncConnection {
            layout,
            order,
            rank: self.rank,
            dt,
            dz,
        })
    }

    pub fn to_json(&self) -> Value {
        json!({
            "n": self.n,
            "rank": self.rank,
            "basis_degrees": self.basis_degrees.iter().map(q_to_string).collect::<Vec<_>>(),
            "E": self.mats.iter().map(Mat::to_json).collect::<Vec<_>>(),
        })
    }

    pub fn from_json(v: &Value, path: &str) -> Result<Connection> {
        let n = v
            .get("n")
            .and_then(Value::as_u64)
            .ok_or_else(|| parse_err(format!("{path}.n"), "expected a non-negative integer"))? as usize;
        let rank = v
            .get("rank")
            .and_then(Value::as_u64)
            .ok_or_else(|| parse_err(format!("{path}.rank"), "expected a non-negative integer"))? as usize;
        let degs = match v.get("basis_degrees") {
            None => vec![Q::zero(); rank],
            Some(d) => {
                let arr = d
                    .as_array()
                    .ok_or_else(|| parse_err(format!("{path}.basis_degrees"), "expected an array"))?;
                arr.iter()
                    .enumerate()
                    .map(|(k, x)| {
                        let p = format!("{path}.basis_degrees[{k}]");
                        let s = x.as_str().ok_or_else(|| parse_err(&p, "expected a rational string"))?;
                        parse_q(s).map_err(|_| parse_err(&p, format!("not an exact rational: {s}")))
                    })
                    .collect::<Result<Vec<_>>>()?
            }
        };
        if degs.len() != rank {
            return Err(parse_err(format!("{path}.basis_degrees"), "length differs from rank"));
        }
        let es = v
            .get("E")
            .and_then(Value::as_array)
            .ok_or_else(|| parse_err(format!("{path}.E"), "expected an array of matrices"))?;
        let mats = es
            .iter()
            .enumerate()
            .map(|(i, m)| Mat::from_json(m, n, &format!("{path}.E[{i}]")))
            .collect::<Result<Vec<_>>>()?;
        Connection::new(n, degs, mats).map_err(|e| parse_err(path, e.to_string()))
    }
}

/// Kronecker-sum connection over juxtaposed variable blocks.
pub fn tensor_conn(parts: &[Connection]) -> Result<Connection> {
    let n: usize = parts.iter().map(Connection::n_vars).sum();
    let ranks: Vec<usize> = parts.iter().map(Connection::rank).collect();
    let rank: usize = ranks.iter().product();
    let mut degrees = vec![Q::zero()];
    for p in parts {
        degrees = degrees
            .iter()
            .flat_map(|a| p.basis_degrees.iter().map(move |b| a + b))
            .collect();
    }
    let mut mats = Vec::with_capacity(n);
    let mut offset = 0;
    for (k, p) in parts.iter().enumerate() {
        let map: Vec<usize> = (0..p.n).map(|v| offset + v).collect();
        for e in &p.mats {
            let e = e.relabel(&map, n)?;
            let mut acc = Mat::identity(n, 1);
            for (l, &r) in ranks.iter().enumerate() {
                let f = if l == k { e.clone() } else { Mat::identity(n, r) };
                acc = acc.kron(&f)?;
            }
            mats.push(acc);
        }
        offset += p.n;
    }
    Connection::new(n, degrees, mats).map(|c| Connection { rank, ..c })
}

/// An invertible matrix over the ring, homogeneous of a declared degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GaugeMap {
    g: Mat,
    degree: Q,
}

impl GaugeMap {
    /// Validates that the determinant is a unit.
    pub fn new(g: Mat, degree: Q) -> Result<Self> {
        if g.rows() != g.cols() {
            return Err(Error::NotInvertible);
        }
        if !g.determinant()?.is_unit() {
            return Err(Error::NotInvertible);
        }
        Ok(GaugeMap { g, degree })
    }

    /// `(z_i - z_j)^m * Id`.
    pub fn diagonal_power(n: usize, rank: usize, i: usize, j: usize, m: i64) -> Result<Self> {
        let f = RatFunc::diff_pow(n, i, j, m)?;
        GaugeMap::new(Mat::scalar(rank, &f), q(m))
    }

    pub fn identity(n: usize, rank: usize) -> Self {
        GaugeMap {
            g: Mat::identity(n, rank),
            degree: Q::zero(),
        }
    }

    pub fn matrix(&self) -> &Mat {
        &self.g
    }

    pub fn degree(&self) -> &Q {
        &self.degree
    }

    pub fn inverse(&self) -> Result<Mat> {
        self.g.inverse()
    }

    pub fn inverse_map(&self) -> Result<GaugeMap> {
        Ok(GaugeMap {
            g: self.g.inverse()?,
            degree: -&self.degree,
        })
    }

    /// Checks entry degrees against `degree + d_b - d_a` for basis degrees `d`.
    pub fn is_homogeneous(&self, basis_degrees: &[Q]) -> bool {
        let r = self.g.rows();
        (0..r).all(|a| {
            (0..r).all(|b| {
                let f = self.g.get(a, b);
                f.is_zero()
                    || f.degree().map(|d| Q::from_integer(d.into()))
                        == Some(&self.degree + &basis_degrees[b] - &basis_degrees[a])
            })
        })
    }

    pub fn to_json(&self) -> Value {
        json!({ "degree": q_to_string(&self.degree), "g": self.g.to_json() })
    }

    pub fn from_json(v: &Value, n: usize, path: &str) -> Result<GaugeMap> {
        let degree = v
            .get("degree")
            .and_then(Value::as_str)
            .ok_or_else(|| parse_err(format!("{path}.degree"), "expected a rational string"))?;
        let degree = parse_q(degree).map_err(|_| parse_err(format!("{path}.degree"), "not an exact rational"))?;
        let g = Mat::from_json(
            v.get("g").ok_or_else(|| parse_err(format!("{path}.g"), "missing"))?,
            n,
            &format!("{path}.g"),
        )?;
        GaugeMap::new(g, degree).map_err(|e| parse_err(path, e.to_string()))
    }
}

/// Structure-map pushforward: matrices along `dt_{ij}` (one per leaf) and along
/// `dz_i` (one per block), over the layout variables, truncated in `t`-degree.
#[derive(Clone, Debug)]
pub struct TruncConnection {
    pub layout: Layout,
    pub order: i64,
    pub rank: usize,
    pub dt: Vec<Mat>,
    pub dz: Vec<Mat>,
}

impl TruncConnection {
    /// The `t`-degree-0 part of the `dz` components, when it involves no `t`
    /// variable, as a connection in the outer variables.
    pub fn outer_connection(&self) -> Result<Connection> {
        let mask = self.layout.mask();
        let inner = self.layout.n_inner();
        let n = self.layout.n_outer();
        let mats = self
            .dz
            .iter()
            .map(|m| {
                m.try_map(|f| {
                    let f0 = f.masked_components(&mask)?.remove(&0).unwrap_or_else(|| RatFunc::zero(f.n_vars()));
                    let uses_t = f0.numerator().terms().keys().any(|e| e[..inner].iter().any(|&x| x > 0))
                        || f0.denominator().keys().any(|&(i, _)| i < inner);
                    if uses_t {
                        return Err(Error::UnsupportedSubstitution("order-0 part depends on inner variables".into()));
                    }
                    project_outer(&f0, inner, n)
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Connection::new(n, vec![Q::zero(); self.rank], mats)
    }
}

fn project_outer(f: &RatFunc, inner: usize, n: usize) -> Result<RatFunc> {
    let num = crate::poly::Poly::from_terms(
        n,
        f.numerator().terms().iter().map(|(e, c)| (e[inner..].to_vec(), c.clone())),
    );
    RatFunc::new(num, f.denominator().iter().map(|(&(i, j), &m)| ((i - inner, j - inner), m)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::conventions::FlatnessConvention::{Paper, Standard};
    use crate::rational::qf;

    #[test]
    fn zero_connection_is_flat() {
        let c = Connection::zero(3, 2);
        for part in c.curvature().unwrap() {
            assert!(part.curl.is_zero() && part.bracket.is_zero());
        }
        assert!(c.is_flat(Paper).unwrap().flat);
        assert!(c.is_flat(Standard).unwrap().flat);
    }

    #[test]
    fn curl_sign_and_witness() {
        let n = 2;
        let c = Connection::new(
            n,
            vec![q(0)],
            vec![Mat::scalar(1, &RatFunc::var(n, 1)), Mat::zeros(n, 1, 1)],
        )
        .unwrap();
        let parts = c.curvature().unwrap();
        assert_eq!(parts[0].curl.get(0, 0), &RatFunc::constant(n, q(-1)));
        assert!(parts[0].bracket.is_zero());
        let f = c.is_flat(Standard).unwrap();
        assert!(!f.flat);
        assert_eq!((f.witness.as_ref().unwrap().0, f.witness.as_ref().unwrap().1), (0, 1));
        assert!(matches!(c.degree(None), Err(Error::NotFlat(0, 1))));
    }

    #[test]
    fn abelian_dlog_curvature_vanishes() {
        let c = Connection::abelian_dlog(2, &[(0, 1)], &qf(3, 7)).unwrap();
        let parts = c.curvature().unwrap();
        assert!(parts[0].curl.is_zero() && parts[0].bracket.is_zero());
    }

    #[test]
    fn degree_of_dlog_sum() {
        for n in 2..5 {
            let pairs: Vec<_> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
            let a = qf(2, 5);
            let c = Connection::abelian_dlog(n, &pairs, &a).unwrap();
            let k = c.degree(None).unwrap().unwrap();
            assert_eq!(k, &a * q((n * (n - 1) / 2) as i64));
            let kf = c.degree_function(None).unwrap().unwrap();
            assert!(kf.as_constant().is_some() && kf.numerator().len() <= 1);
            assert_eq!(c.degree(Some(&c)).unwrap(), Some(q(0)));
        }
    }

    #[test]
    fn gauge_by_diagonal_power() {
        for m in [-2i64, 1, 3] {
            let g = GaugeMap::diagonal_power(2, 1, 0, 1, m).unwrap();
            let e = Connection::zero(2, 1).gauge_transform(&g).unwrap();
            let expect = Connection::abelian_dlog(2, &[(0, 1)], &q(m)).unwrap();
            assert_eq!(e, expect);
            assert!(e.is_flat(Standard).unwrap().flat);
            assert_eq!(e.degree(None).unwrap(), Some(q(m)));
        }
    }

    #[test]
    fn gauge_round_trip_and_identity() {
        let c = Connection::abelian_dlog(3, &[(0, 1), (1, 2)], &qf(1, 3)).unwrap();
        let g = GaugeMap::diagonal_power(3, 1, 0, 2, 2).unwrap();
        assert_eq!(c.gauge_transform(&GaugeMap::identity(3, 1)).unwrap(), c);
        let back = c.gauge_transform(&g).unwrap().gauge_transform(&g.inverse_map().unwrap()).unwrap();
        assert_eq!(back, c);
        assert!(c.same_monodromy(&c.gauge_transform(&g).unwrap(), &g).unwrap());
    }

    #[test]
    fn same_monodromy_examples() {
        let n = 2;
        let e = Connection::abelian_dlog(n, &[(0, 1)], &qf(1, 2)).unwrap();
        let f = e.add(&Connection::abelian_dlog(n, &[(0, 1)], &q(1)).unwrap()).unwrap();
        let g = GaugeMap::diagonal_power(n, 1, 0, 1, 1).unwrap();
        assert!(e.same_monodromy(&f, &g).unwrap());
        // z_1 dz_1 is not dlog of a unit
        let bad = Connection::new(n, vec![q(0)], vec![Mat::scalar(1, &RatFunc::var(n, 0)), Mat::zeros(n, 1, 1)]).unwrap();
        let f2 = e.add(&bad).unwrap();
        for m in -3..=3 {
            let g = GaugeMap::diagonal_power(n, 1, 0, 1, m).unwrap();
            assert!(!e.same_monodromy(&f2, &g).unwrap());
        }
    }

    #[test]
    fn singular_gauge_rejected() {
        let g = Mat::scalar(1, &RatFunc::var(2, 0));
        assert!(matches!(GaugeMap::new(g, q(1)), Err(Error::NotInvertible)));
    }

    #[test]
    fn tensor_degrees_add() {
        let a = Connection::abelian_dlog(2, &[(0, 1)], &qf(1, 4)).unwrap();
        let b = Connection::abelian_dlog(2, &[(0, 1)], &qf(2, 3)).unwrap();
        let t = tensor_conn(&[a.clone(), b]).unwrap();
        assert_eq!(t.n_vars(), 4);
        assert!(t.is_flat(Standard).unwrap().flat);
        assert_eq!(t.degree(None).unwrap(), Some(qf(1, 4) + qf(2, 3)));
        let z = Connection::zero(0, 1);
        assert_eq!(tensor_conn(&[a.clone(), z]).unwrap(), a);
    }

    #[test]
    fn permutation_pushforward_is_an_action() {
        let c = Connection::abelian_dlog(3, &[(0, 1)], &q(1)).unwrap();
        let s = [1, 2, 0];
        let t = [2, 0, 1];
        let st: Vec<usize> = (0..3).map(|v| t[s[v]]).collect();
        let lhs = c.pushforward(&s, 3).unwrap().pushforward(&t, 3).unwrap();
        assert_eq!(lhs, c.pushforward(&st, 3).unwrap());
        assert_eq!(c.pushforward(&[0, 1, 2], 3).unwrap(), c);
    }

    #[test]
    fn structure_pushforward_order_zero() {
        let c = Connection::abelian_dlog(3, &[(0, 2)], &qf(1, 2)).unwrap();
        let t = c.pushforward_structure(&[2, 1], 0).unwrap();
        let outer = t.outer_connection().unwrap();
        assert_eq!(outer, Connection::abelian_dlog(2, &[(0, 1)], &qf(1, 2)).unwrap());
    }

    #[test]
    fn json_round_trip() {
        let c = Connection::abelian_dlog(3, &[(0, 1), (0, 2)], &qf(-1, 3)).unwrap();
        let back = Connection::from_json(&c.to_json(), "$").unwrap();
        assert_eq!(back, c);
    }
}
