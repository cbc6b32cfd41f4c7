//! The Knizhnik-Zamolodchikov connection and the WZW label data built from it.
//!
//! For representations `L(l_1)..L(l_n)` and level `k` the connection matrices are
//!
//! ```text
//! E_l = -1/(k + h) * sum_{p != l} Omega_{lp} / (z_l - z_p)
//! ```
//!
//! with `Omega_{lp}` the Killing-dual Casimir insertion. On a channel
//! `Hom_g(L(l_1) (x) .. (x) L(l_n), L(l_inf))` it acts by precomposition.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, RwLock};

use num_traits::Zero;
use serde_json::{json, Value};

use crate::connection::Connection;
use crate::error::{parse_err, Error, Result};
use crate::factored::{FactoredConnection, FactoredMat};
use crate::lie::{casimir_eigenvalue, casimir_pair, invariant_maps, LieAlgebra, Rep};
use crate::matrix::QMat;
use crate::rational::{parse_q, q, q_to_string, Q};
use crate::ratfunc::RatFunc;

pub struct KzData {
    alg: LieAlgebra,
    weights: Vec<u32>,
    reps: Vec<Rep>,
    level: Q,
    omegas: BTreeMap<(usize, usize), QMat>,
    factored: FactoredConnection,
}

/// A channel: the invariant-map basis and the connection induced on it.
#[derive(Clone, Debug)]
pub struct Channel {
    pub output: u32,
    pub basis: Vec<QMat>,
    /// `F_b o Omega_{lp} = sum_a X[a][b] F_a` for `l < p`.
    pub omega_action: BTreeMap<(usize, usize), QMat>,
    pub connection: Connection,
}

impl Channel {
    pub fn rank(&self) -> usize {
        self.basis.len()
    }
}

/// `-1/(k + h)`, or an error at the critical level.
pub fn kz_coefficient(alg: &LieAlgebra, level: &Q) -> Result<Q> {
    let s = level + alg.h_dual();
    if s.is_zero() {
        return Err(Error::SingularLevel);
    }
    Ok(-s.recip())
}

/// KZ data for `sl_2` irreducibles of the given highest weights.
pub fn kz_build(alg: &LieAlgebra, weights: &[u32], level: &Q) -> Result<KzData> {
    let reps = weights.iter().map(|&m| Rep::sl2_irrep(alg, m)).collect::<Result<Vec<_>>>()?;
    KzData::from_reps(alg, weights.to_vec(), reps, level)
}

impl KzData {
    pub fn from_reps(alg: &LieAlgebra, weights: Vec<u32>, reps: Vec<Rep>, level: &Q) -> Result<Self> {
        let c = kz_coefficient(alg, level)?;
        let n = reps.len();
        let rank: usize = reps.iter().map(Rep::dim).product();
        let mut omegas = BTreeMap::new();
        for l in 0..n {
            for p in l + 1..n {
                omegas.insert((l, p), casimir_pair(alg, &reps, l, p)?);
            }
        }
        let mats = (0..n)
            .map(|l| {
                let terms = (0..n)
                    .filter(|&p| p != l)
                    .map(|p| {
                        let om = omegas[&(l.min(p), l.max(p))].clone();
                        (RatFunc::diff_pow(n, l, p, -1).unwrap().scale(&c), om)
                    })
                    .collect();
                FactoredMat::new(n, rank, terms)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(KzData {
            alg: alg.clone(),
            weights,
            reps,
            level: level.clone(),
            omegas,
            factored: FactoredConnection { n, rank, mats },
        })
    }

    pub fn algebra(&self) -> &LieAlgebra {
        &self.alg
    }

    pub fn weights(&self) -> &[u32] {
        &self.weights
    }

    pub fn reps(&self) -> &[Rep] {
        &self.reps
    }

    pub fn level(&self) -> &Q {
        &self.level
    }

    pub fn n(&self) -> usize {
        self.reps.len()
    }

    pub fn omega(&self, l: usize, p: usize) -> &QMat {
        &self.omegas[&(l.min(p), l.max(p))]
    }

    pub fn factored(&self) -> &FactoredConnection {
        &self.factored
    }

    /// The connection on the full tensor product.
    pub fn full_connection(&self) -> Connection {
        let n = self.n();
        Connection::new(n, vec![Q::zero(); self.factored.rank], self.factored.to_mats()).expect("consistent shapes")
    }

    /// Restriction to `Hom_g((x) L(l_i), target)`.
    pub fn restrict_to(&self, output: u32, target: &Rep) -> Result<Channel> {
        let n = self.n();
        let basis = invariant_maps(&self.alg, &self.reps, target)?;
        let r = basis.len();
        let c = kz_coefficient(&self.alg, &self.level)?;
        let mut omega_action = BTreeMap::new();
        if r > 0 {
            let (dt, ds) = (basis[0].rows(), basis[0].cols());
            let mut a = QMat::zeros(dt * ds, r);
            for (b, f) in basis.iter().enumerate() {
                for i in 0..dt {
                    for j in 0..ds {
                        a.set(i * ds + j, b, f.get(i, j).clone());
                    }
                }
            }
            for (&(l, p), om) in &self.omegas {
                let mut rhs = QMat::zeros(dt * ds, r);
                for (b, f) in basis.iter().enumerate() {
                    let g = f.mul(om)?;
                    for i in 0..dt {
                        for j in 0..ds {
                            rhs.set(i * ds + j, b, g.get(i, j).clone());
                        }
                    }
                }
                let x = a.solve(&rhs).ok_or_else(|| {
                    Error::Incomplete(format!("Omega_({},{}) does not preserve the invariant maps", l + 1, p + 1))
                })?;
                omega_action.insert((l, p), x);
            }
        }
        let mats = (0..n)
            .map(|l| {
                let terms = (0..n)
                    .filter(|&p| p != l && r > 0)
                    .map(|p| {
                        let x = omega_action[&(l.min(p), l.max(p))].clone();
                        (RatFunc::diff_pow(n, l, p, -1).unwrap().scale(&c), x)
                    })
                    .collect();
                Ok(FactoredMat::new(n, r, terms)?.to_mat())
            })
            .collect::<Result<Vec<_>>>()?;
        let connection = Connection::new(n, vec![Q::zero(); r], mats)?;
        Ok(Channel {
            output,
            basis,
            omega_action,
            connection,
        })
    }

    /// Restriction to the `sl_2` channel of highest weight `output`.
    pub fn restrict(&self, output: u32) -> Result<Channel> {
        let target = Rep::sl2_irrep(&self.alg, output)?;
        self.restrict_to(output, &target)
    }

    /// The output weights with a nonzero channel.
    pub fn channels(&self) -> Vec<u32> {
        let total: u32 = self.weights.iter().sum();
        (0..=total).filter(|&m| (total - m) % 2 == 0).filter(|&m| self.restrict(m).map_or(false, |c| c.rank() > 0)).collect()
    }

    /// `C(l) / (2 (k + h))`.
    pub fn alpha(&self, m: u32) -> Result<Q> {
        alpha(&self.alg, &self.level, m)
    }

    /// Computed degree of the channel connection and the Casimir prediction
    /// `(sum C(l_i) - C(l_inf)) / (2 (k + h))`; errors when they differ.
    pub fn degree_identity(&self, output: u32) -> Result<(Q, Q)> {
        let ch = self.restrict(output)?;
        if ch.rank() == 0 {
            return Err(Error::Incomplete(format!("channel {output} is empty")));
        }
        let computed = ch
            .connection
            .degree(None)?
            .ok_or_else(|| Error::NotHomogeneous("Euler contraction is not scalar".into()))?;
        let mut predicted = -self.alpha(output)?;
        for &m in &self.weights {
            predicted += self.alpha(m)?;
        }
        if computed != predicted {
            return Err(Error::DegreeIdentity {
                computed: q_to_string(&computed),
                predicted: q_to_string(&predicted),
            });
        }
        Ok((computed, predicted))
    }

    pub fn to_json(&self) -> Value {
        json!({
            "algebra": self.alg.name(),
            "weights": self.weights,
            "level": q_to_string(&self.level),
            "connection": self.full_connection().to_json(),
        })
    }

    /// Rebuilds from metadata; a stored connection must match the rebuilt one.
    pub fn from_json(v: &Value, path: &str) -> Result<KzData> {
        let name = v
            .get("algebra")
            .and_then(Value::as_str)
            .ok_or_else(|| parse_err(format!("{path}.algebra"), "expected an algebra name"))?;
        let alg = LieAlgebra::by_name(name).map_err(|e| parse_err(format!("{path}.algebra"), e.to_string()))?;
        let weights: Vec<u32> = v
            .get("weights")
            .and_then(Value::as_array)
            .and_then(|a| a.iter().map(|x| x.as_u64().map(|x| x as u32)).collect())
            .ok_or_else(|| parse_err(format!("{path}.weights"), "expected an array of highest weights"))?;
        let level = v
            .get("level")
            .and_then(Value::as_str)
            .ok_or_else(|| parse_err(format!("{path}.level"), "expected a rational string"))?;
        let level = parse_q(level).map_err(|_| parse_err(format!("{path}.level"), "not an exact rational"))?;
        let kz = kz_build(&alg, &weights, &level)?;
        if let Some(c) = v.get("connection") {
            let stored = Connection::from_json(c, &format!("{path}.connection"))?;
            if stored != kz.full_connection() {
                return Err(parse_err(format!("{path}.connection"), "does not match the KZ connection for this metadata"));
            }
        }
        Ok(kz)
    }
}

/// `C(m) / (2 (k + h))` for the `sl_2` irreducible of highest weight `m`.
pub fn alpha(alg: &LieAlgebra, level: &Q, m: u32) -> Result<Q> {
    let s = level + alg.h_dual();
    if s.is_zero() {
        return Err(Error::SingularLevel);
    }
    let c = casimir_eigenvalue(alg, &Rep::sl2_irrep(alg, m)?)?;
    Ok(c / (q(2) * s))
}

/// The matrix sending `e_{i_1} (x) .. (x) e_{i_n}` to the basis vector whose
/// factor at `sigma[v]` is `e_{i_v}`.
pub fn tensor_permutation(dims: &[usize], sigma: &[usize]) -> QMat {
    let n = dims.len();
    let mut new_dims = vec![0; n];
    for v in 0..n {
        new_dims[sigma[v]] = dims[v];
    }
    let total: usize = dims.iter().product();
    let mut p = QMat::zeros(total, total);
    let mut idx = vec![0usize; n];
    for flat in 0..total {
        let mut rest = flat;
        for v in (0..n).rev() {
            idx[v] = rest % dims[v];
            rest /= dims[v];
        }
        let mut j = 0;
        let mut new_idx = vec![0; n];
        for v in 0..n {
            new_idx[sigma[v]] = idx[v];
        }
        for v in 0..n {
            j = j * new_dims[v] + new_idx[v];
        }
        p.set(j, flat, q(1));
    }
    p
}

/// Labelled channel data for `sl_2` at a fixed level, computed on demand and cached.
pub struct WzwInstance {
    alg: LieAlgebra,
    level: Q,
    labels: Vec<u32>,
    max_inputs: usize,
    cache: RwLock<HashMap<(Vec<u32>, u32), Arc<Channel>>>,
}

impl WzwInstance {
    /// `labels` are highest weights; the trivial label 0 is always included.
    pub fn new(alg: &LieAlgebra, labels: &[u32], level: &Q, max_inputs: usize) -> Result<Self> {
        kz_coefficient(alg, level)?;
        let mut labels = labels.to_vec();
        labels.push(0);
        labels.sort_unstable();
        labels.dedup();
        Ok(WzwInstance {
            alg: alg.clone(),
            level: level.clone(),
            labels,
            max_inputs,
            cache: RwLock::new(HashMap::new()),
        })
    }

    pub fn algebra(&self) -> &LieAlgebra {
        &self.alg
    }

    pub fn level(&self) -> &Q {
        &self.level
    }

    pub fn labels(&self) -> &[u32] {
        &self.labels
    }

    pub fn max_inputs(&self) -> usize {
        self.max_inputs
    }

    pub fn alpha(&self, m: u32) -> Result<Q> {
        alpha(&self.alg, &self.level, m)
    }

    /// The channel `(inputs; output)`, for any weights (not only the primary labels).
    pub fn channel(&self, inputs: &[u32], output: u32) -> Result<Arc<Channel>> {
        let key = (inputs.to_vec(), output);
        if let Some(c) = self.cache.read().unwrap().get(&key) {
            return Ok(c.clone());
        }
        let kz = kz_build(&self.alg, inputs, &self.level)?;
        let ch = Arc::new(kz.restrict(output)?);
        self.cache.write().unwrap().insert(key, ch.clone());
        Ok(ch)
    }

    /// All tuples over the primary labels with `1..=max_inputs` inputs.
    pub fn primary_tuples(&self) -> Vec<(Vec<u32>, u32)> {
        let mut out = Vec::new();
        let mut frontier: Vec<Vec<u32>> = vec![vec![]];
        for _ in 0..self.max_inputs {
            frontier = frontier
                .iter()
                .flat_map(|t| {
                    self.labels.iter().map(move |&l| {
                        let mut t = t.clone();
                        t.push(l);
                        t
                    })
                })
                .collect();
            for t in &frontier {
                for &o in &self.labels {
                    out.push((t.clone(), o));
                }
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::conventions::FlatnessConvention::{Paper, Standard};
    use crate::matrix::Mat;
    use crate::rational::qf;

    fn sl2() -> LieAlgebra {
        LieAlgebra::sl2()
    }

    #[test]
    fn one_point_is_trivial() {
        let kz = kz_build(&sl2(), &[2], &q(1)).unwrap();
        assert!(kz.full_connection().matrix(0).is_zero());
    }

    #[test]
    fn two_spin_halves_full() {
        let g = sl2();
        let k = q(3);
        let kz = kz_build(&g, &[1, 1], &k).unwrap();
        let e = kz.full_connection();
        let om = casimir_pair(&g, kz.reps(), 0, 1).unwrap();
        let expect = om.to_rat(2).scale_by(&RatFunc::diff_pow(2, 0, 1, -1).unwrap()).scale(&-(q(1) / (k + q(2))));
        assert_eq!(e.matrix(0), &expect);
        assert_eq!(e.matrix(1), &expect.scale(&q(-1)));
    }

    #[test]
    fn critical_level_is_rejected() {
        assert!(matches!(kz_build(&sl2(), &[1, 1], &q(-2)), Err(Error::SingularLevel)));
    }

    #[test]
    fn three_spin_halves_flat_both_ways() {
        let kz = kz_build(&sl2(), &[1, 1, 1], &q(1)).unwrap();
        for p in kz.factored().curvature().unwrap() {
            assert!(p.curl_zero && p.bracket_zero);
        }
        let dense = kz.full_connection();
        assert!(dense.is_flat(Paper).unwrap().flat);
        assert!(dense.is_flat(Standard).unwrap().flat);
    }

    #[test]
    fn spin_half_channels() {
        let g = sl2();
        let k = q(1);
        let kz = kz_build(&g, &[1, 1], &k).unwrap();
        let singlet = kz.restrict(0).unwrap();
        assert_eq!(singlet.rank(), 1);
        let a = qf(3, 8) / (&k + q(2));
        assert_eq!(singlet.connection, Connection::abelian_dlog(2, &[(0, 1)], &a).unwrap());
        let triplet = kz.restrict(2).unwrap();
        let a = -qf(1, 8) / (&k + q(2));
        assert_eq!(triplet.connection, Connection::abelian_dlog(2, &[(0, 1)], &a).unwrap());
        assert_eq!(kz.restrict(1).unwrap().rank(), 0);
        assert_eq!(kz.channels(), vec![0, 2]);
    }

    #[test]
    fn degree_identity_values() {
        let g = sl2();
        let kz = kz_build(&g, &[1, 1], &q(1)).unwrap();
        assert_eq!(kz.degree_identity(0).unwrap(), (qf(1, 8), qf(1, 8)));
        assert_eq!(kz.degree_identity(2).unwrap(), (qf(-1, 24), qf(-1, 24)));
        let triv = kz_build(&g, &[0, 0, 0], &q(1)).unwrap();
        assert_eq!(triv.degree_identity(0).unwrap().0, q(0));
    }

    #[test]
    fn three_point_channel_has_rank_two() {
        let kz = kz_build(&sl2(), &[1, 1, 1], &q(1)).unwrap();
        let ch = kz.restrict(1).unwrap();
        assert_eq!(ch.rank(), 2);
        for (i, j) in [(0, 1), (0, 2), (1, 2)] {
            let has_pole = ch.connection.matrix(i).entries().any(|f| f.denominator().contains_key(&(i.min(j), i.max(j))));
            assert!(has_pole);
        }
        assert!(ch.connection.is_flat(Standard).unwrap().flat);
    }

    #[test]
    fn permutation_equivariance() {
        let g = sl2();
        let w = [1u32, 2, 1];
        let sigma = [2usize, 0, 1];
        let kz = kz_build(&g, &w, &q(1)).unwrap();
        let mut w2 = [0u32; 3];
        for v in 0..3 {
            w2[sigma[v]] = w[v];
        }
        let kz2 = kz_build(&g, &w2, &q(1)).unwrap();
        let dims: Vec<usize> = w.iter().map(|&m| m as usize + 1).collect();
        let p = tensor_permutation(&dims, &sigma).to_rat(3);
        let pi = p.transpose();
        let pushed = kz.full_connection().pushforward(&sigma, 3).unwrap();
        for v in 0..3 {
            let conj = p.mul(pushed.matrix(v)).unwrap().mul(&pi).unwrap();
            assert_eq!(&conj, kz2.full_connection().matrix(v));
        }
    }

    #[test]
    fn trivial_insertion_is_coaugmentation() {
        let g = sl2();
        let small = kz_build(&g, &[1, 1], &q(2)).unwrap().full_connection();
        let big = kz_build(&g, &[1, 0, 1], &q(2)).unwrap().full_connection();
        assert_eq!(small.pushforward(&[0, 2], 3).unwrap(), big);
    }

    #[test]
    fn wzw_single_label_tuples() {
        let w = WzwInstance::new(&sl2(), &[1], &q(1), 3).unwrap();
        assert_eq!(w.alpha(0).unwrap(), q(0));
        let same = w.channel(&[1], 1).unwrap();
        assert_eq!(same.rank(), 1);
        assert!(same.connection.matrix(0).is_zero());
        assert_eq!(w.channel(&[1], 0).unwrap().rank(), 0);
        assert_eq!(w.primary_tuples().len(), 2 * (2 + 4 + 8));
    }

    #[test]
    fn json_round_trip() {
        let kz = kz_build(&sl2(), &[1, 1], &q(1)).unwrap();
        let back = KzData::from_json(&kz.to_json(), "$").unwrap();
        assert_eq!(back.full_connection(), kz.full_connection());
        let mut bad = kz.to_json();
        bad["connection"]["E"][0] = Mat::zeros(2, 4, 4).to_json();
        assert!(KzData::from_json(&bad, "$").is_err());
    }
}
