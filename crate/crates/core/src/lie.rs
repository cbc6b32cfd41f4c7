//! Finite-dimensional Lie algebras over `Q` given by structure constants, their
//! Killing forms, explicit representations and Casimir insertions.

use num_traits::{One, Zero};
use serde_json::{json, Value};

use crate::error::{parse_err, Error, Result};
use crate::matrix::QMat;
use crate::rational::{parse_q, q, q_to_string, Q};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LieAlgebra {
    name: String,
    dim: usize,
    /// `c[i][j][k]` with `[x_i, x_j] = sum_k c[i][j][k] x_k`.
    c: Vec<Vec<Vec<Q>>>,
    killing: QMat,
    /// Row `i` holds the coordinates of the dual element `g^i`.
    dual: QMat,
    h_dual: Q,
}

impl LieAlgebra {
    /// `sl_2` with basis `(e, f, h)`.
    pub fn sl2() -> Self {
        let z = || vec![vec![Q::zero(); 3]; 3];
        let mut c = vec![z(), z(), z()];
        let (e, f, h) = (0, 1, 2);
        c[e][f][h] = q(1);
        c[f][e][h] = q(-1);
        c[h][e][e] = q(2);
        c[e][h][e] = q(-2);
        c[h][f][f] = q(-2);
        c[f][h][f] = q(2);
        LieAlgebra::from_structure_constants("sl2", c, q(2)).expect("sl2 is simple")
    }

    pub fn by_name(name: &str) -> Result<Self> {
        match name {
            "sl2" => Ok(LieAlgebra::sl2()),
            other => Err(Error::InvalidLieAlgebra(format!("unknown algebra '{other}'; only sl2 is built in"))),
        }
    }

    /// Validates antisymmetry and the Jacobi identity, then computes the
    /// Killing form and its dual basis.
    pub fn from_structure_constants(name: &str, c: Vec<Vec<Vec<Q>>>, h_dual: Q) -> Result<Self> {
        let d = c.len();
        if c.iter().any(|r| r.len() != d || r.iter().any(|v| v.len() != d)) {
            return Err(Error::InvalidLieAlgebra("structure constants must be d x d x d".into()));
        }
        for i in 0..d {
            for j in 0..d {
                for k in 0..d {
                    if c[i][j][k] != -c[j][i][k].clone() {
                        return Err(Error::InvalidLieAlgebra(format!("antisymmetry fails at ({i},{j},{k})")));
                    }
                }
            }
        }
        // [x_i,[x_j,x_k]] + [x_j,[x_k,x_i]] + [x_k,[x_i,x_j]] = 0
        for i in 0..d {
            for j in 0..d {
                for k in 0..d {
                    for m in 0..d {
                        let mut s = Q::zero();
                        for l in 0..d {
                            s += &c[j][k][l] * &c[i][l][m] + &c[k][i][l] * &c[j][l][m] + &c[i][j][l] * &c[k][l][m];
                        }
                        if !s.is_zero() {
                            return Err(Error::InvalidLieAlgebra(format!("Jacobi identity fails at ({i},{j},{k})")));
                        }
                    }
                }
            }
        }
        let ad: Vec<QMat> = (0..d)
            .map(|i| {
                let mut m = QMat::zeros(d, d);
                for j in 0..d {
                    for k in 0..d {
                        m.set(k, j, c[i][j][k].clone());
                    }
                }
                m
            })
            .collect();
        let mut killing = QMat::zeros(d, d);
        for i in 0..d {
            for j in 0..d {
                killing.set(i, j, trace(&ad[i].mul(&ad[j])?));
            }
        }
        let dual = killing.inverse().ok_or(Error::NotSemisimple)?;
        Ok(LieAlgebra {
            name: name.to_string(),
            dim: d,
            c,
            killing,
            dual,
            h_dual,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn structure_constants(&self) -> &[Vec<Vec<Q>>] {
        &self.c
    }

    pub fn killing(&self) -> &QMat {
        &self.killing
    }

    /// Coordinates of `g^i` in the basis: `K(g^i, x_j) = delta_ij`.
    pub fn dual_basis(&self) -> &QMat {
        &self.dual
    }

    pub fn h_dual(&self) -> &Q {
        &self.h_dual
    }

    pub fn to_json(&self) -> Value {
        let c: Vec<Vec<Vec<String>>> = self
            .c
            .iter()
            .map(|r| r.iter().map(|v| v.iter().map(q_to_string).collect()).collect())
            .collect();
        json!({ "name": self.name, "h_dual": q_to_string(&self.h_dual), "structure_constants": c })
    }

    pub fn from_json(v: &Value, path: &str) -> Result<Self> {
        let name = v.get("name").and_then(Value::as_str).unwrap_or("custom");
        let h = v
            .get("h_dual")
            .and_then(Value::as_str)
            .ok_or_else(|| parse_err(format!("{path}.h_dual"), "expected a rational string"))?;
        let h = parse_q(h).map_err(|_| parse_err(format!("{path}.h_dual"), "not an exact rational"))?;
        let arr = v
            .get("structure_constants")
            .and_then(Value::as_array)
            .ok_or_else(|| parse_err(format!("{path}.structure_constants"), "expected a rank-3 array"))?;
        let mut c = Vec::new();
        for (i, m) in arr.iter().enumerate() {
            let p = format!("{path}.structure_constants[{i}]");
            c.push(QMat::from_json(m, &p).map(|m| {
                (0..m.rows()).map(|j| (0..m.cols()).map(|k| m.get(j, k).clone()).collect()).collect()
            })?);
        }
        LieAlgebra::from_structure_constants(name, c, h).map_err(|e| parse_err(path, e.to_string()))
    }
}

fn trace(m: &QMat) -> Q {
    (0..m.rows()).map(|i| m.get(i, i).clone()).sum()
}

/// A representation given by one matrix per basis element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rep {
    label: String,
    mats: Vec<QMat>,
}

impl Rep {
    /// Checks `rho[x_i, x_j] = [rho x_i, rho x_j]`.
    pub fn new(alg: &LieAlgebra, label: &str, mats: Vec<QMat>) -> Result<Self> {
        if mats.len() != alg.dim() {
            return Err(Error::Shape(format!("expected {} matrices, found {}", alg.dim(), mats.len())));
        }
        let d = mats.first().map_or(0, QMat::rows);
        if mats.iter().any(|m| m.rows() != d || m.cols() != d) {
            return Err(Error::Shape("representation matrices must be square of one size".into()));
        }
        for i in 0..alg.dim() {
            for j in 0..alg.dim() {
                let lhs = mats[i].mul(&mats[j])?.sub(&mats[j].mul(&mats[i])?)?;
                let mut rhs = QMat::zeros(d, d);
                for (k, m) in mats.iter().enumerate() {
                    let c = &alg.c[i][j][k];
                    if !c.is_zero() {
                        rhs = rhs.add(&m.scale(c))?;
                    }
                }
                if lhs != rhs {
                    return Err(Error::InvalidLieAlgebra(format!("representation '{label}' fails the bracket at ({i},{j})")));
                }
            }
        }
        Ok(Rep {
            label: label.to_string(),
            mats,
        })
    }

    /// The `sl_2` irreducible of highest weight `m` (spin `m/2`) on `v_0..v_m`:
    /// `h v_k = (m-2k) v_k`, `f v_k = v_{k+1}`, `e v_k = k(m-k+1) v_{k-1}`.
    pub fn sl2_irrep(alg: &LieAlgebra, m: u32) -> Result<Self> {
        let d = m as usize + 1;
        let (mut e, mut f, mut h) = (QMat::zeros(d, d), QMat::zeros(d, d), QMat::zeros(d, d));
        for k in 0..d {
            h.set(k, k, q(m as i64 - 2 * k as i64));
            if k + 1 < d {
                f.set(k + 1, k, Q::one());
            }
            if k > 0 {
                e.set(k - 1, k, q((k as i64) * (m as i64 - k as i64 + 1)));
            }
        }
        Rep::new(alg, &spin_label(m), vec![e, f, h])
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn dim(&self) -> usize {
        self.mats.first().map_or(0, QMat::rows)
    }

    pub fn matrices(&self) -> &[QMat] {
        &self.mats
    }

    /// `rho(v)` for `v` given by coordinates.
    pub fn act(&self, coords: &[Q]) -> QMat {
        let d = self.dim();
        let mut out = QMat::zeros(d, d);
        for (c, m) in coords.iter().zip(&self.mats) {
            if !c.is_zero() {
                out = out.add(&m.scale(c)).unwrap();
            }
        }
        out
    }

    /// `rho(g^i)` for each dual basis element.
    pub fn dual_matrices(&self, alg: &LieAlgebra) -> Vec<QMat> {
        (0..alg.dim())
            .map(|i| {
                let row: Vec<Q> = (0..alg.dim()).map(|k| alg.dual.get(i, k).clone()).collect();
                self.act(&row)
            })
            .collect()
    }

    /// `sum_i rho(g^i) rho(x_i)`.
    pub fn casimir_operator(&self, alg: &LieAlgebra) -> QMat {
        let d = self.dim();
        let mut out = QMat::zeros(d, d);
        for (gi, xi) in self.dual_matrices(alg).iter().zip(&self.mats) {
            out = out.add(&gi.mul(xi).unwrap()).unwrap();
        }
        out
    }

    pub fn to_json(&self) -> Value {
        json!({ "label": self.label, "matrices": self.mats.iter().map(QMat::to_json).collect::<Vec<_>>() })
    }

    pub fn from_json(alg: &LieAlgebra, v: &Value, path: &str) -> Result<Self> {
        let label = v.get("label").and_then(Value::as_str).unwrap_or("rep");
        let arr = v
            .get("matrices")
            .and_then(Value::as_array)
            .ok_or_else(|| parse_err(format!("{path}.matrices"), "expected an array of matrices"))?;
        let mats = arr
            .iter()
            .enumerate()
            .map(|(i, m)| QMat::from_json(m, &format!("{path}.matrices[{i}]")))
            .collect::<Result<Vec<_>>>()?;
        Rep::new(alg, label, mats).map_err(|e| parse_err(path, e.to_string()))
    }
}

/// Label of the spin `m/2` irreducible, e.g. `"1/2"` or `"1"`.
pub fn spin_label(m: u32) -> String {
    q_to_string(&Q::new((m as i64).into(), 2.into()))
}

/// The scalar by which the Casimir acts on an irreducible representation.
pub fn casimir_eigenvalue(alg: &LieAlgebra, rep: &Rep) -> Result<Q> {
    if invariant_maps(alg, std::slice::from_ref(rep), rep)?.len() != 1 {
        return Err(Error::NotIrreducible);
    }
    let c = rep.casimir_operator(alg);
    let d = rep.dim();
    if d == 0 {
        return Err(Error::NotIrreducible);
    }
    let k = c.get(0, 0).clone();
    if c != QMat::identity(d).scale(&k) {
        return Err(Error::NotIrreducible);
    }
    Ok(k)
}

/// `Id (x) .. (x) A (at slot) (x) .. (x) Id`.
pub fn embed(dims: &[usize], slot: usize, a: &QMat) -> QMat {
    let mut acc = QMat::identity(1);
    for (l, &d) in dims.iter().enumerate() {
        acc = if l == slot { acc.kron(a) } else { acc.kron(&QMat::identity(d)) };
    }
    acc
}

/// `Omega_{lp} = sum_i rho_l(g^i) (x) rho_p(x_i)` on the full tensor product.
pub fn casimir_pair(alg: &LieAlgebra, reps: &[Rep], l: usize, p: usize) -> Result<QMat> {
    let n = reps.len();
    if l >= n {
        return Err(Error::IndexOutOfRange { index: l, n });
    }
    if p >= n {
        return Err(Error::IndexOutOfRange { index: p, n });
    }
    if l == p {
        return Err(Error::Shape("casimir_pair needs two distinct factors".into()));
    }
    let dims: Vec<usize> = reps.iter().map(Rep::dim).collect();
    let duals = reps[l].dual_matrices(alg);
    let total: usize = dims.iter().product();
    let mut out = QMat::zeros(total, total);
    for (gi, xi) in duals.iter().zip(reps[p].matrices()) {
        out = out.add(&embed(&dims, l, gi).mul(&embed(&dims, p, xi))?)?;
    }
    Ok(out)
}

/// `rho_{(x)}(x_i) = sum_l Id (x) .. rho_l(x_i) .. (x) Id`.
pub fn tensor_action(reps: &[Rep], i: usize) -> QMat {
    let dims: Vec<usize> = reps.iter().map(Rep::dim).collect();
    let total: usize = dims.iter().product();
    let mut out = QMat::zeros(total, total);
    for (l, r) in reps.iter().enumerate() {
        out = out.add(&embed(&dims, l, &r.matrices()[i])).unwrap();
    }
    out
}

fn is_diagonal(m: &QMat) -> bool {
    (0..m.rows()).all(|i| (0..m.cols()).all(|j| i == j || m.get(i, j).is_zero()))
}

/// A basis of `Hom_g(V_1 (x) .. (x) V_n, W)`, each map a `dim W x prod dim V_i` matrix.
pub fn invariant_maps(alg: &LieAlgebra, sources: &[Rep], target: &Rep) -> Result<Vec<QMat>> {
    let src: Vec<QMat> = (0..alg.dim())
        .map(|i| {
            if sources.is_empty() {
                QMat::zeros(1, 1)
            } else {
                tensor_action(sources, i)
            }
        })
        .collect();
    let dt = target.dim();
    let ds = src[0].rows();
    // unknowns F[a][b]; diagonal generators force weights to match
    let mut alive: Vec<(usize, usize)> = (0..dt).flat_map(|a| (0..ds).map(move |b| (a, b))).collect();
    for i in 0..alg.dim() {
        let (t, s) = (&target.matrices()[i], &src[i]);
        if is_diagonal(t) && is_diagonal(s) {
            alive.retain(|&(a, b)| t.get(a, a) == s.get(b, b));
        }
    }
    let index: std::collections::HashMap<(usize, usize), usize> =
        alive.iter().enumerate().map(|(k, &ab)| (ab, k)).collect();
    let mut rows: Vec<Vec<Q>> = Vec::new();
    for i in 0..alg.dim() {
        let (t, s) = (&target.matrices()[i], &src[i]);
        if is_diagonal(t) && is_diagonal(s) {
            continue;
        }
        // (T F - F S)_{ab} = sum_c T_ac F_cb - sum_c F_ac S_cb
        for a in 0..dt {
            for b in 0..ds {
                let mut row = vec![Q::zero(); alive.len()];
                let mut nonzero = false;
                for c in 0..dt {
                    let tc = t.get(a, c);
                    if !tc.is_zero() {
                        if let Some(&k) = index.get(&(c, b)) {
                            row[k] += tc;
                            nonzero = true;
                        }
                    }
                }
                for c in 0..ds {
                    let sc = s.get(c, b);
                    if !sc.is_zero() {
                        if let Some(&k) = index.get(&(a, c)) {
                            row[k] -= sc;
                            nonzero = true;
                        }
                    }
                }
                if nonzero && row.iter().any(|x| !x.is_zero()) {
                    rows.push(row);
                }
            }
        }
    }
    let kernel = if rows.is_empty() {
        QMat::identity(alive.len())
    } else {
        QMat::from_rows(rows)?.kernel()
    };
    let mut out = Vec::with_capacity(kernel.cols());
    for col in 0..kernel.cols() {
        let mut f = QMat::zeros(dt, ds);
        for (k, &(a, b)) in alive.iter().enumerate() {
            f.set(a, b, kernel.get(k, col).clone());
        }
        out.push(f);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::qf;

    fn spins(alg: &LieAlgebra, ms: &[u32]) -> Vec<Rep> {
        ms.iter().map(|&m| Rep::sl2_irrep(alg, m).unwrap()).collect()
    }

    #[test]
    fn sl2_killing_and_dual() {
        let g = LieAlgebra::sl2();
        let k = g.killing();
        assert_eq!(k.get(2, 2), &q(8));
        assert_eq!(k.get(0, 1), &q(4));
        assert_eq!(k.get(1, 0), &q(4));
        for (i, j) in [(0, 0), (1, 1), (0, 2), (2, 0), (1, 2), (2, 1)] {
            assert!(k.get(i, j).is_zero());
        }
        let d = g.dual_basis();
        assert_eq!(d.get(0, 1), &qf(1, 4)); // e* = f/4
        assert_eq!(d.get(1, 0), &qf(1, 4)); // f* = e/4
        assert_eq!(d.get(2, 2), &qf(1, 8)); // h* = h/8
        assert_eq!(d.mul(k).unwrap(), QMat::identity(3));
    }

    #[test]
    fn jacobi_violation_is_rejected() {
        let g = LieAlgebra::sl2();
        let mut c = g.structure_constants().to_vec();
        // [e, f] = h + e
        c[0][1][0] = q(1);
        c[1][0][0] = q(-1);
        assert!(matches!(
            LieAlgebra::from_structure_constants("bad", c, q(2)),
            Err(Error::InvalidLieAlgebra(_))
        ));
    }

    #[test]
    fn abelian_algebra_is_not_semisimple() {
        let c = vec![vec![vec![Q::zero(); 2]; 2]; 2];
        assert!(matches!(LieAlgebra::from_structure_constants("ab", c, q(0)), Err(Error::NotSemisimple)));
    }

    #[test]
    fn casimir_values() {
        let g = LieAlgebra::sl2();
        for (m, c) in [(0, q(0)), (1, qf(3, 8)), (2, q(1)), (3, qf(15, 8))] {
            let r = Rep::sl2_irrep(&g, m).unwrap();
            assert_eq!(casimir_eigenvalue(&g, &r).unwrap(), c);
            let j = Q::new((m as i64).into(), 2.into());
            assert_eq!(c, &j * (&j + q(1)) / q(2));
        }
    }

    #[test]
    fn reducible_rep_is_detected() {
        let g = LieAlgebra::sl2();
        let r = spins(&g, &[1, 1]);
        let mats: Vec<QMat> = (0..3).map(|i| tensor_action(&r, i)).collect();
        let v = Rep::new(&g, "1/2x1/2", mats).unwrap();
        assert!(matches!(casimir_eigenvalue(&g, &v), Err(Error::NotIrreducible)));
    }

    #[test]
    fn two_spin_halves() {
        let g = LieAlgebra::sl2();
        let r = spins(&g, &[1, 1]);
        let o = casimir_pair(&g, &r, 0, 1).unwrap();
        assert_eq!(o, casimir_pair(&g, &r, 1, 0).unwrap());
        let half = qf(3, 8);
        let triplet = (q(1) - q(2) * &half) / q(2);
        let singlet = (q(0) - q(2) * &half) / q(2);
        // (O - t)(O - s) = 0 with multiplicities 3 and 1
        let id = QMat::identity(4);
        let p = o.sub(&id.scale(&triplet)).unwrap().mul(&o.sub(&id.scale(&singlet)).unwrap()).unwrap();
        assert!(p.is_zero());
        let tr: Q = (0..4).map(|i| o.get(i, i).clone()).sum();
        assert_eq!(tr, q(3) * triplet + singlet);
    }

    #[test]
    fn omega_is_invariant() {
        let g = LieAlgebra::sl2();
        let r = spins(&g, &[1, 2]);
        let o = casimir_pair(&g, &r, 0, 1).unwrap();
        for i in 0..3 {
            let x = tensor_action(&r, i);
            assert!(x.mul(&o).unwrap().sub(&o.mul(&x).unwrap()).unwrap().is_zero());
        }
    }

    #[test]
    fn infinitesimal_braid_relations() {
        let g = LieAlgebra::sl2();
        for ms in [[1u32, 1, 1, 1], [1, 2, 3, 1]] {
            let r = spins(&g, &ms);
            let om = |a, b| casimir_pair(&g, &r, a, b).unwrap();
            let comm = |a: &QMat, b: &QMat| a.mul(b).unwrap().sub(&b.mul(a).unwrap()).unwrap();
            for (i, j, k) in [(0, 1, 2), (1, 2, 3), (0, 2, 3)] {
                assert!(comm(&om(i, j), &om(i, k).add(&om(j, k)).unwrap()).is_zero());
            }
            assert!(comm(&om(0, 1), &om(2, 3)).is_zero());
        }
    }

    #[test]
    fn invariant_map_dimensions() {
        let g = LieAlgebra::sl2();
        let s = |m| Rep::sl2_irrep(&g, m).unwrap();
        assert_eq!(invariant_maps(&g, &[s(1), s(1)], &s(0)).unwrap().len(), 1);
        assert_eq!(invariant_maps(&g, &[s(1)], &s(1)).unwrap().len(), 1);
        assert_eq!(invariant_maps(&g, &[s(1), s(1)], &s(1)).unwrap().len(), 0);
        assert_eq!(invariant_maps(&g, &[s(2), s(2), s(2), s(2)], &s(0)).unwrap().len(), 3);
        let f = &invariant_maps(&g, &[s(1), s(1)], &s(2)).unwrap()[0];
        for i in 0..3 {
            let lhs = s(2).matrices()[i].mul(f).unwrap();
            let rhs = f.mul(&tensor_action(&[s(1), s(1)], i)).unwrap();
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn json_round_trip() {
        let g = LieAlgebra::sl2();
        assert_eq!(LieAlgebra::from_json(&g.to_json(), "$").unwrap(), g);
        let r = Rep::sl2_irrep(&g, 2).unwrap();
        assert_eq!(Rep::from_json(&g, &r.to_json(), "$").unwrap(), r);
    }
}
