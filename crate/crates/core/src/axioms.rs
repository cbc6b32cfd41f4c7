//! Verifiers for pre-tree algebras, tree-functor axioms, pre-tree-algebra maps
//! and isomorphisms of tree functors, over finite [`TreeFunctorData`].
//!
//! The verifiers only read the stored data; nothing is recomputed from Lie
//! theory. Each report lists one line per check family, naming the first
//! offending tuple on failure.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::connection::{tensor_conn, Connection, GaugeMap};
use crate::conventions::DEGREE_SIGN;
use crate::cooperad::{cocompose, coaugment, Layout};
use crate::error::{Error, Result};
use crate::kz::tensor_permutation;
use crate::matrix::{Mat, QMat};
use crate::rational::{parse_q, q, q_to_string, Q};
use crate::ratfunc::RatFunc;
use crate::tree::{compositions, Decomposition, TreeFunctorData, Tuple};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    Unverified,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Unverified => "UNVERIFIED",
        }
    }
}

#[derive(Clone, Debug)]
pub struct Check {
    pub name: String,
    pub status: Status,
    pub detail: String,
}

impl Check {
    fn from_outcome(name: &str, checked: usize, failure: Option<String>) -> Check {
        match failure {
            Some(detail) => Check {
                name: name.into(),
                status: Status::Fail,
                detail,
            },
            None => Check {
                name: name.into(),
                status: Status::Pass,
                detail: format!("{checked} checked"),
            },
        }
    }
}

#[derive(Clone, Debug)]
pub struct Report {
    pub kind: String,
    pub order: i64,
    pub checks: Vec<Check>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.status != Status::Fail)
    }

    pub fn status(&self) -> Status {
        if !self.passed() {
            Status::Fail
        } else if self.checks.iter().any(|c| c.status == Status::Unverified) {
            Status::Unverified
        } else {
            Status::Pass
        }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "kind": self.kind,
            "order": self.order,
            "status": self.status().as_str(),
            "checks": self.checks.iter().map(|c| json!({
                "name": c.name,
                "status": c.status.as_str(),
                "detail": c.detail,
            })).collect::<Vec<_>>(),
        })
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} at order {}: {}", self.kind, self.order, self.status().as_str())?;
        for c in &self.checks {
            writeln!(f, "  {:<10} {}: {}", c.status.as_str(), c.name, c.detail)?;
        }
        Ok(())
    }
}

fn expected_degree(data: &TreeFunctorData, t: &Tuple) -> Result<Q> {
    let a = |l: &u32| {
        data.alpha
            .get(l)
            .cloned()
            .ok_or_else(|| Error::Incomplete(format!("no alpha for label {l}")))
    };
    let mut d = a(&t.output)?;
    for l in &t.inputs {
        d -= a(l)?;
    }
    Ok(d * q(DEGREE_SIGN))
}

fn rank_or_zero(data: &TreeFunctorData, t: &Tuple) -> usize {
    data.tuples.get(t).map_or(0, |d| d.rank)
}

fn decomposition<'a>(data: &'a TreeFunctorData, t: &Tuple, partition: &[usize]) -> Result<&'a Decomposition> {
    data.get(t)?
        .decomposition(partition)
        .ok_or_else(|| Error::Incomplete(format!("no decomposition of {t} along {partition:?}")))
}

/// Ranks of the inner factors and of the outer factor for one support entry.
fn factor_ranks(data: &TreeFunctorData, t: &Tuple, partition: &[usize], mu: &[u32]) -> Result<(Vec<usize>, usize)> {
    let inner = t
        .blocks(partition)
        .into_iter()
        .zip(mu)
        .map(|(b, &m)| data.rank(&Tuple::new(b, m)))
        .collect::<Result<Vec<_>>>()?;
    let outer = data.rank(&Tuple::new(mu.to_vec(), t.output))?;
    Ok((inner, outer))
}

fn kron_index(idx: &[usize], ranks: &[usize]) -> usize {
    idx.iter().zip(ranks).fold(0, |acc, (&i, &r)| acc * r + i)
}

/// All index tuples below `ranks`, last index fastest.
fn index_tuples(ranks: &[usize]) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for &r in ranks {
        out = out
            .into_iter()
            .flat_map(|p| {
                (0..r).map(move |i| {
                    let mut p = p.clone();
                    p.push(i);
                    p
                })
            })
            .collect();
    }
    out
}

/// The column of a composition isomorphism for `(mu, inner indices, outer index)`;
/// zero when `mu` is outside the support.
fn column(data: &TreeFunctorData, t: &Tuple, partition: &[usize], mu: &[u32], inner: &[usize], outer: usize) -> Result<Vec<Q>> {
    let d = decomposition(data, t, partition)?;
    let mut offset = 0;
    for s in &d.support {
        let (ir, or) = factor_ranks(data, t, partition, s)?;
        if s.as_slice() == mu {
            let mut ranks = ir.clone();
            ranks.push(or);
            let mut idx = inner.to_vec();
            idx.push(outer);
            let c = offset + kron_index(&idx, &ranks);
            if c >= d.iso.cols() {
                return Err(Error::Shape(format!("decomposition of {t} along {partition:?} has too few columns")));
            }
            return Ok((0..d.iso.rows()).map(|r| d.iso.get(r, c).clone()).collect());
        }
        offset += ir.iter().product::<usize>() * or;
    }
    Ok(vec![Q::zero(); data.rank(t)?])
}

fn add_scaled(acc: &mut [Q], c: &Q, v: &[Q]) {
    if c.is_zero() {
        return;
    }
    for (a, x) in acc.iter_mut().zip(v) {
        *a += c * x;
    }
}

fn is_identity(m: &QMat) -> bool {
    m.rows() == m.cols() && *m == QMat::identity(m.rows())
}

// ---------------------------------------------------------------------------
// pre-tree algebra

/// Composition isomorphisms (invertible, graded, counital, coassociative),
/// unit isomorphisms, and flatness and degree of every stored connection.
pub fn verify_pretree(data: &TreeFunctorData, order: i64) -> Result<Report> {
    Ok(Report {
        kind: "pretree".into(),
        order,
        checks: vec![
            check_isos(data)?,
            check_counit(data)?,
            check_coassociativity(data)?,
            check_units(data)?,
            check_connections(data)?,
        ],
    })
}

fn check_isos(data: &TreeFunctorData) -> Result<Check> {
    let mut checked = 0;
    for (t, td) in &data.tuples {
        for d in &td.decompositions {
            checked += 1;
            let where_ = format!("{t} along {:?}", d.partition);
            let mut degrees: Vec<Q> = Vec::new();
            for mu in &d.support {
                if mu.len() != d.partition.len() {
                    return Ok(Check::from_outcome("composition isomorphisms", checked, Some(format!("{where_}: support entry {mu:?} has the wrong length"))));
                }
                let parts = t
                    .blocks(&d.partition)
                    .into_iter()
                    .zip(mu)
                    .map(|(b, &m)| Tuple::new(b, m))
                    .chain(std::iter::once(Tuple::new(mu.clone(), t.output)));
                let mut block = vec![Q::zero()];
                for p in parts {
                    let bd = data.get(&p)?.connection.basis_degrees().to_vec();
                    block = block.iter().flat_map(|a| bd.iter().map(move |b| a + b)).collect();
                }
                degrees.extend(block);
            }
            if d.iso.rows() != td.rank || d.iso.cols() != degrees.len() {
                return Ok(Check::from_outcome(
                    "composition isomorphisms",
                    checked,
                    Some(format!("{where_}: matrix is {}x{}, ranks require {}x{}", d.iso.rows(), d.iso.cols(), td.rank, degrees.len())),
                ));
            }
            if td.rank > 0 && d.iso.inverse().is_none() {
                return Ok(Check::from_outcome("composition isomorphisms", checked, Some(format!("{where_}: not invertible"))));
            }
            let own = td.connection.basis_degrees();
            for r in 0..d.iso.rows() {
                for c in 0..d.iso.cols() {
                    if !d.iso.get(r, c).is_zero() && own[r] != degrees[c] {
                        return Ok(Check::from_outcome(
                            "composition isomorphisms",
                            checked,
                            Some(format!("{where_}: entry ({r},{c}) joins degrees {} and {}", q_to_string(&own[r]), q_to_string(&degrees[c]))),
                        ));
                    }
                }
            }
        }
    }
    Ok(Check::from_outcome("composition isomorphisms", checked, None))
}

fn check_counit(data: &TreeFunctorData) -> Result<Check> {
    let name = "counit (trivial partitions)";
    let mut checked = 0;
    for (t, td) in &data.tuples {
        let n = t.n();
        for d in &td.decompositions {
            let expected = if d.partition == [n] {
                vec![t.output]
            } else if d.partition.iter().all(|&m| m == 1) {
                t.inputs.clone()
            } else {
                continue;
            };
            checked += 1;
            let support_ok = if td.rank == 0 { d.support.is_empty() } else { d.support == [expected] };
            if !support_ok || !is_identity(&d.iso) {
                return Ok(Check::from_outcome(name, checked, Some(format!("{t} along {:?} is not the canonical identification", d.partition))));
            }
        }
    }
    Ok(Check::from_outcome(name, checked, None))
}

/// Nested decompositions: blocks first then the inner tuples along their
/// sub-blocks, against sub-blocks first then the intermediate tuple along the
/// block grouping.
fn check_coassociativity(data: &TreeFunctorData) -> Result<Check> {
    let name = "coassociativity";
    let mut jobs = Vec::new();
    for (t, td) in data.primary() {
        if td.rank == 0 {
            continue;
        }
        for p in compositions(t.n()) {
            let mut refinements: Vec<Vec<Vec<usize>>> = vec![vec![]];
            for &m in &p {
                let subs = compositions(m);
                refinements = refinements
                    .into_iter()
                    .flat_map(|r| {
                        subs.iter().map(move |s| {
                            let mut r = r.clone();
                            r.push(s.clone());
                            r
                        })
                    })
                    .collect();
            }
            for r in refinements {
                jobs.push((t.clone(), p.clone(), r));
            }
        }
    }
    let outcomes = jobs
        .par_iter()
        .map(|(t, p, r)| square(data, t, p, r))
        .collect::<Result<Vec<_>>>()?;
    let failure = outcomes.into_iter().flatten().next();
    Ok(Check::from_outcome(name, jobs.len(), failure))
}

fn square(data: &TreeFunctorData, t: &Tuple, blocks: &[usize], subs: &[Vec<usize>]) -> Result<Option<String>> {
    let flat: Vec<usize> = subs.iter().flatten().copied().collect();
    let grouping: Vec<usize> = subs.iter().map(Vec::len).collect();
    let block_tuples = t.blocks(blocks);
    let sub_inputs = t.blocks(&flat);
    // (mu, nu) pairs reached by either route
    let mut pairs: BTreeSet<(Vec<u32>, Vec<u32>)> = BTreeSet::new();
    for mu in &decomposition(data, t, blocks)?.support {
        let mut nus: Vec<Vec<u32>> = vec![vec![]];
        for (i, b) in block_tuples.iter().enumerate() {
            let inner = Tuple::new(b.clone(), mu[i]);
            let sup = &decomposition(data, &inner, &subs[i])?.support;
            nus = nus
                .iter()
                .flat_map(|n| {
                    sup.iter().map(move |s| {
                        let mut n = n.clone();
                        n.extend(s);
                        n
                    })
                })
                .collect();
        }
        for nu in nus {
            pairs.insert((mu.clone(), nu));
        }
    }
    for nu in &decomposition(data, t, &flat)?.support {
        let mid = Tuple::new(nu.clone(), t.output);
        for mu in &decomposition(data, &mid, &grouping)?.support {
            pairs.insert((mu.clone(), nu.clone()));
        }
    }
    for (mu, nu) in pairs {
        let nu_groups = Tuple::new(nu.clone(), 0).blocks(&grouping);
        let small: Vec<usize> = sub_inputs
            .iter()
            .zip(&nu)
            .map(|(s, &v)| rank_or_zero(data, &Tuple::new(s.clone(), v)))
            .collect();
        let mid: Vec<usize> = nu_groups
            .iter()
            .zip(&mu)
            .map(|(g, &m)| rank_or_zero(data, &Tuple::new(g.clone(), m)))
            .collect();
        let top = rank_or_zero(data, &Tuple::new(mu.clone(), t.output));
        if top == 0 || small.contains(&0) || mid.contains(&0) {
            continue;
        }
        for a in index_tuples(&small) {
            for c in index_tuples(&mid) {
                for b in 0..top {
                    // blocks first
                    let mut xs = Vec::new();
                    let mut at = 0;
                    for (i, bt) in block_tuples.iter().enumerate() {
                        let k = subs[i].len();
                        let inner = Tuple::new(bt.clone(), mu[i]);
                        xs.push(column(data, &inner, &subs[i], &nu_groups[i], &a[at..at + k], c[i])?);
                        at += k;
                    }
                    let mut left = vec![Q::zero(); data.rank(t)?];
                    let ranks: Vec<usize> = xs.iter().map(Vec::len).collect();
                    for j in index_tuples(&ranks) {
                        let coeff = j.iter().enumerate().fold(Q::one(), |acc, (i, &ji)| acc * &xs[i][ji]);
                        if !coeff.is_zero() {
                            add_scaled(&mut left, &coeff, &column(data, t, blocks, &mu, &j, b)?);
                        }
                    }
                    // sub-blocks first
                    let y = column(data, &Tuple::new(nu.clone(), t.output), &grouping, &mu, &c, b)?;
                    let mut right = vec![Q::zero(); data.rank(t)?];
                    for (dd, coeff) in y.iter().enumerate() {
                        if !coeff.is_zero() {
                            add_scaled(&mut right, coeff, &column(data, t, &flat, &nu, &a, dd)?);
                        }
                    }
                    if left != right {
                        return Ok(Some(format!(
                            "{t}: blocks {blocks:?} refined by {subs:?} differ at intermediate {mu:?} / {nu:?}"
                        )));
                    }
                }
            }
        }
    }
    Ok(None)
}

fn check_units(data: &TreeFunctorData) -> Result<Check> {
    let name = "unit isomorphisms";
    let mut checked = 0;
    for (t, td) in data.primary() {
        checked += 1;
        let fail = |msg: String| Ok(Check::from_outcome(name, checked, Some(format!("{t}: {msg}"))));
        match t.n() {
            0 => {
                let want = usize::from(t.output == data.unit);
                if td.rank != want {
                    return fail(format!("rank {} where {want} is required", td.rank));
                }
            }
            1 => {
                let want = usize::from(t.inputs[0] == t.output);
                if td.rank != want {
                    return fail(format!("rank {} where {want} is required", td.rank));
                }
            }
            _ => {}
        }
        let unit_slots: Vec<usize> = (0..t.n()).filter(|&v| t.inputs[v] == data.unit).collect();
        let listed: Vec<usize> = td.units.iter().map(|u| u.position).collect();
        if listed != unit_slots {
            return fail(format!("unit isomorphisms listed at {listed:?}, unit labels at {unit_slots:?}"));
        }
        for u in &td.units {
            let small = data.rank(&t.without(u.position))?;
            if u.iso.rows() != td.rank || u.iso.cols() != small || (td.rank > 0 && u.iso.inverse().is_none()) {
                return fail(format!("unit isomorphism at slot {} is not invertible", u.position));
            }
        }
    }
    Ok(Check::from_outcome(name, checked, None))
}

fn check_connections(data: &TreeFunctorData) -> Result<Check> {
    let name = "connections flat, homogeneous, of the label degree";
    let items: Vec<(&Tuple, &Connection)> = data
        .tuples
        .iter()
        .filter(|(_, d)| d.rank > 0)
        .map(|(t, d)| (t, &d.connection))
        .collect();
    let outcomes = items
        .par_iter()
        .map(|(t, e)| -> Result<Option<String>> {
            if let Some((i, r, c)) = e.homogeneity_violation() {
                return Ok(Some(format!("{t}: E_{i} entry ({r},{c}) is not homogeneous of the required degree")));
            }
            if !e.is_flat_any()? {
                return Ok(Some(format!("{t}: connection is not flat")));
            }
            let want = expected_degree(data, t)?;
            match e.degree(None)? {
                Some(d) if d == want => Ok(None),
                Some(d) => Ok(Some(format!("{t}: degree {} but the labels give {}", q_to_string(&d), q_to_string(&want)))),
                None => Ok(Some(format!("{t}: degree is not a scalar"))),
            }
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Check::from_outcome(name, items.len(), outcomes.into_iter().flatten().next()))
}

// ---------------------------------------------------------------------------
// tree-functor axioms

/// Axiom 1 (permutation equivariance), axiom 2 (unit insertion, gauge
/// certificates), axiom 3 (structure map against the assembled connection, up
/// to form degree `order`) and axiom 4 (one-point connections).
pub fn verify_treefunctor(data: &TreeFunctorData, order: i64) -> Result<Report> {
    Ok(Report {
        kind: "treefunctor".into(),
        order,
        checks: vec![
            check_equivariance(data)?,
            check_unit_insertion(data)?,
            check_structure(data, order)?,
            check_one_point(data)?,
        ],
    })
}

fn conjugate(e: &Connection, p: &QMat) -> Result<Connection> {
    let pinv = p.inverse().ok_or(Error::NotInvertible)?;
    let n = e.n_vars();
    let (pr, pi) = (p.to_rat(n), pinv.to_rat(n));
    let mats = e
        .matrices()
        .iter()
        .map(|m| pr.mul(m)?.mul(&pi))
        .collect::<Result<Vec<_>>>()?;
    Connection::new(n, vec![Q::zero(); p.rows()], mats)
}

fn same_matrices(a: &Connection, b: &Connection) -> bool {
    a.n_vars() == b.n_vars() && a.rank() == b.rank() && a.matrices() == b.matrices()
}

fn check_equivariance(data: &TreeFunctorData) -> Result<Check> {
    let name = "axiom 1: permutation equivariance";
    let mut checked = 0;
    for (t, td) in data.primary() {
        if td.rank == 0 {
            continue;
        }
        for (sigma, p) in &td.permutations {
            checked += 1;
            let target = t.permuted(sigma);
            let other = data.get(&target)?;
            let fail = |m: &str| Ok(Check::from_outcome(name, checked, Some(format!("{t} -> {target} by {sigma:?}: {m}"))));
            if p.rows() != other.rank || p.cols() != td.rank || p.inverse().is_none() {
                return fail("permutation isomorphism is not invertible");
            }
            let moved = conjugate(&td.connection.pushforward(sigma, t.n())?, p)?;
            if !same_matrices(&moved, &other.connection) {
                return fail("permuted connection differs from the stored one");
            }
        }
    }
    Ok(Check::from_outcome(name, checked, None))
}

fn check_unit_insertion(data: &TreeFunctorData) -> Result<Check> {
    let name = "axiom 2: unit insertion";
    let mut checked = 0;
    let mut missing = 0;
    for (t, td) in data.primary() {
        if td.rank == 0 {
            continue;
        }
        for u in &td.units {
            checked += 1;
            let small = data.get(&t.without(u.position))?;
            let positions: Vec<usize> = (0..t.n() - 1).map(|v| if v < u.position { v } else { v + 1 }).collect();
            let lifted = Connection::new(
                t.n(),
                vec![Q::zero(); small.rank],
                {
                    let mut mats = vec![Mat::zeros(t.n(), small.rank, small.rank); t.n()];
                    for (v, m) in small.connection.matrices().iter().enumerate() {
                        mats[positions[v]] = m.try_map(|f| coaugment(f, &positions, t.n()))?;
                    }
                    mats
                },
            )?;
            if u.iso.inverse().is_none() {
                return Ok(Check::from_outcome(name, checked, Some(format!("{t} slot {}: unit isomorphism is singular", u.position))));
            }
            let lifted = conjugate(&lifted, &u.iso)?;
            let Some(g) = &u.gauge else {
                missing += 1;
                continue;
            };
            let target = Connection::new(t.n(), vec![Q::zero(); td.rank], td.connection.matrices().to_vec())?;
            if !lifted.same_monodromy(&target, g)? {
                return Ok(Check::from_outcome(
                    name,
                    checked,
                    Some(format!("{t} slot {}: gauge certificate does not relate the connections", u.position)),
                ));
            }
        }
    }
    if missing > 0 {
        return Ok(Check {
            name: name.into(),
            status: Status::Unverified,
            detail: format!("{missing} of {checked} unit insertions carry no gauge certificate"),
        });
    }
    Ok(Check::from_outcome(name, checked, None))
}

fn block_diag(n: usize, blocks: &[Mat]) -> Mat {
    let size: usize = blocks.iter().map(Mat::rows).sum();
    let mut out = Mat::zeros(n, size, size);
    let mut at = 0;
    for b in blocks {
        for r in 0..b.rows() {
            for c in 0..b.cols() {
                if !b.get(r, c).is_zero() {
                    out.set(at + r, at + c, b.get(r, c).clone());
                }
            }
        }
        at += b.rows();
    }
    out
}

/// `sum_mu (x)_i E(B_i; mu_i) (x) E(mu; l_inf)` over the layout variables.
fn assembled(data: &TreeFunctorData, t: &Tuple, d: &Decomposition) -> Result<Vec<Mat>> {
    let layout = Layout::new(&d.partition);
    let total = layout.total();
    let mut per_var: Vec<Vec<Mat>> = vec![Vec::new(); total];
    for mu in &d.support {
        let mut parts: Vec<Connection> = t
            .blocks(&d.partition)
            .into_iter()
            .zip(mu)
            .map(|(b, &m)| Ok(data.get(&Tuple::new(b, m))?.connection.clone()))
            .collect::<Result<Vec<_>>>()?;
        parts.push(data.get(&Tuple::new(mu.clone(), t.output))?.connection.clone());
        let e = tensor_conn(&parts)?;
        for (v, m) in e.matrices().iter().enumerate() {
            per_var[v].push(m.clone());
        }
    }
    Ok(per_var.iter().map(|bs| block_diag(total, bs)).collect())
}

fn low_parts_vanish(m: &Mat, mask: &[bool], below: i64) -> Result<bool> {
    for f in m.entries() {
        if f.is_zero() {
            continue;
        }
        if f.masked_components(mask)?.keys().any(|&d| d < below) {
            return Ok(false);
        }
    }
    Ok(true)
}

fn check_structure(data: &TreeFunctorData, order: i64) -> Result<Check> {
    let name = "axiom 3: structure map and assembled connection";
    let jobs: Vec<(&Tuple, &Decomposition)> = data
        .primary()
        .filter(|(_, d)| d.rank > 0)
        .flat_map(|(t, td)| td.decompositions.iter().map(move |d| (t, d)))
        .collect();
    let outcomes = jobs
        .par_iter()
        .map(|(t, d)| -> Result<Option<String>> {
            let e = &data.get(t)?.connection;
            let push = e.pushforward_structure(&d.partition, order)?;
            let layout = &push.layout;
            let total = layout.total();
            let mask = layout.mask();
            let Some(dinv) = d.iso.inverse() else {
                return Ok(Some(format!("{t} along {:?}: composition isomorphism is singular", d.partition)));
            };
            let (dr, di) = (d.iso.to_rat(total), dinv.to_rat(total));
            let asm = assembled(data, t, d)?;
            let mut leaf = 0;
            for (b, &m) in d.partition.iter().enumerate() {
                for j in 0..m {
                    let want = dr.mul(&asm[layout.t(b, j)])?.mul(&di)?;
                    // a dt component has form degree one above its t-degree
                    if !low_parts_vanish(&push.dt[leaf].sub(&want)?, &mask, order - 1)? {
                        return Ok(Some(format!("{t} along {:?}: dt component of leaf {leaf} differs", d.partition)));
                    }
                    leaf += 1;
                }
                let want = dr.mul(&asm[layout.z(b)])?.mul(&di)?;
                if !low_parts_vanish(&push.dz[b].sub(&want)?, &mask, order)? {
                    return Ok(Some(format!("{t} along {:?}: dz component of block {b} differs", d.partition)));
                }
            }
            Ok(None)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Check::from_outcome(name, jobs.len(), outcomes.into_iter().flatten().next()))
}

fn check_one_point(data: &TreeFunctorData) -> Result<Check> {
    let name = "axiom 4: one-point connections";
    let mut checked = 0;
    for (t, td) in data.primary().filter(|(t, _)| t.n() == 1) {
        checked += 1;
        let want = usize::from(t.inputs[0] == t.output);
        if td.rank != want || !td.connection.matrices().iter().all(Mat::is_zero) {
            return Ok(Check::from_outcome(name, checked, Some(format!("{t}: expected the trivial rank-{want} connection"))));
        }
    }
    Ok(Check::from_outcome(name, checked, None))
}

// ---------------------------------------------------------------------------
// pre-tree-algebra maps

/// Graded-window maps `phi`: shapes and injectivity, the composition square
/// on the available window, unitality and permutation equivariance.
pub fn verify_pta(data: &TreeFunctorData, order: i64) -> Result<Report> {
    let required = order.max(1) as usize;
    let window = if data.window >= required {
        Check {
            name: "graded window".into(),
            status: Status::Pass,
            detail: format!("required window {required}, available {}", data.window),
        }
    } else {
        Check {
            name: "graded window".into(),
            status: Status::Unverified,
            detail: format!("required window {required}, available {}; the square is closed on the available pieces only", data.window),
        }
    };
    Ok(Report {
        kind: "pta".into(),
        order,
        checks: vec![
            window,
            check_phi_shapes(data)?,
            check_phi_square(data)?,
            check_phi_unit(data)?,
            check_phi_unit_insertion(data)?,
            check_phi_equivariance(data)?,
        ],
    })
}

fn v_dim(data: &TreeFunctorData, l: u32) -> Result<usize> {
    data.v_dims
        .get(&l)
        .copied()
        .ok_or_else(|| Error::Incomplete(format!("no graded piece for label {l}")))
}

fn source_dims(data: &TreeFunctorData, t: &Tuple) -> Result<Vec<usize>> {
    t.inputs.iter().map(|&l| v_dim(data, l)).collect()
}

fn flatten(m: &QMat) -> Vec<Q> {
    (0..m.rows()).flat_map(|r| (0..m.cols()).map(move |c| m.get(r, c).clone())).collect()
}

fn check_phi_shapes(data: &TreeFunctorData) -> Result<Check> {
    let name = "phi shapes and injectivity";
    let mut checked = 0;
    for (t, td) in &data.tuples {
        checked += 1;
        let rows = v_dim(data, t.output)?;
        let cols: usize = source_dims(data, t)?.iter().product();
        if td.phi.len() != td.rank || td.phi.iter().any(|m| m.rows() != rows || m.cols() != cols) {
            return Ok(Check::from_outcome(name, checked, Some(format!("{t}: expected {} maps of shape {rows}x{cols}", td.rank))));
        }
        if td.rank > 0 {
            let stacked = QMat::from_rows(td.phi.iter().map(flatten).collect())?;
            if stacked.rank() != td.rank {
                return Ok(Check::from_outcome(name, checked, Some(format!("{t}: maps are linearly dependent"))));
            }
        }
    }
    Ok(Check::from_outcome(name, checked, None))
}

fn phi_of(data: &TreeFunctorData, t: &Tuple, coords: &[Q]) -> Result<QMat> {
    let td = data.get(t)?;
    let rows = v_dim(data, t.output)?;
    let cols: usize = source_dims(data, t)?.iter().product();
    let mut out = QMat::zeros(rows, cols);
    for (c, m) in coords.iter().zip(&td.phi) {
        if !c.is_zero() {
            out = out.add(&m.scale(c))?;
        }
    }
    Ok(out)
}

fn check_phi_square(data: &TreeFunctorData) -> Result<Check> {
    let name = "phi composition square";
    let jobs: Vec<(&Tuple, &Decomposition)> = data
        .primary()
        .filter(|(_, d)| d.rank > 0)
        .flat_map(|(t, td)| td.decompositions.iter().map(move |d| (t, d)))
        .collect();
    let outcomes = jobs
        .par_iter()
        .map(|(t, d)| -> Result<Option<String>> {
            let mut col = 0;
            for mu in &d.support {
                let inner: Vec<Tuple> = t
                    .blocks(&d.partition)
                    .into_iter()
                    .zip(mu)
                    .map(|(b, &m)| Tuple::new(b, m))
                    .collect();
                let outer = Tuple::new(mu.clone(), t.output);
                let (ir, or) = factor_ranks(data, t, &d.partition, mu)?;
                for a in index_tuples(&ir) {
                    let mut k = QMat::identity(1);
                    for (it, &ai) in inner.iter().zip(&a) {
                        k = k.kron(&data.get(it)?.phi[ai]);
                    }
                    for b in 0..or {
                        let right = data.get(&outer)?.phi[b].mul(&k)?;
                        let coords: Vec<Q> = (0..d.iso.rows()).map(|r| d.iso.get(r, col).clone()).collect();
                        if phi_of(data, t, &coords)? != right {
                            return Ok(Some(format!("{t} along {:?}: square fails at intermediate {mu:?}", d.partition)));
                        }
                        col += 1;
                    }
                }
            }
            Ok(None)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Check::from_outcome(name, jobs.len(), outcomes.into_iter().flatten().next()))
}

fn check_phi_unit(data: &TreeFunctorData) -> Result<Check> {
    let name = "phi unitality";
    let mut checked = 0;
    // (l; l) maps to the identity, and (; unit) to the unit of the unit space
    let unital = |t: &Tuple| (t.n() == 1 && t.inputs[0] == t.output) || (t.n() == 0 && t.output == data.unit);
    for (t, td) in data.tuples.iter().filter(|(t, _)| unital(t)) {
        checked += 1;
        if td.rank != 1 || td.phi[0] != QMat::identity(v_dim(data, t.output)?) {
            return Ok(Check::from_outcome(name, checked, Some(format!("{t}: the basis map is not the identity"))));
        }
    }
    Ok(Check::from_outcome(name, checked, None))
}

/// Inserting the unit label leaves the maps unchanged, since the unit space
/// is one-dimensional in degree 0.
fn check_phi_unit_insertion(data: &TreeFunctorData) -> Result<Check> {
    let name = "phi unit insertion";
    let mut checked = 0;
    for (t, td) in data.primary().filter(|(_, d)| d.rank > 0) {
        for u in &td.units {
            checked += 1;
            let small = t.without(u.position);
            let sd = data.get(&small)?;
            for b in 0..sd.rank {
                let coords: Vec<Q> = (0..u.iso.rows()).map(|a| u.iso.get(a, b).clone()).collect();
                if phi_of(data, t, &coords)? != sd.phi[b] {
                    return Ok(Check::from_outcome(name, checked, Some(format!("{t} slot {}: basis map {b} of {small} does not match", u.position))));
                }
            }
        }
    }
    Ok(Check::from_outcome(name, checked, None))
}

fn check_phi_equivariance(data: &TreeFunctorData) -> Result<Check> {
    let name = "phi permutation equivariance";
    let mut checked = 0;
    for (t, td) in data.primary().filter(|(_, d)| d.rank > 0) {
        let dims = source_dims(data, t)?;
        for (sigma, p) in &td.permutations {
            checked += 1;
            let target = t.permuted(sigma);
            let pinv = tensor_permutation(&dims, sigma).transpose();
            for b in 0..td.rank {
                let coords: Vec<Q> = (0..p.rows()).map(|a| p.get(a, b).clone()).collect();
                if phi_of(data, &target, &coords)? != td.phi[b].mul(&pinv)? {
                    return Ok(Check::from_outcome(name, checked, Some(format!("{t} -> {target} by {sigma:?}: basis map {b} does not match"))));
                }
            }
        }
    }
    Ok(Check::from_outcome(name, checked, None))
}

// ---------------------------------------------------------------------------
// isomorphisms

/// Checks a proposed isomorphism `a -> b` given by one gauge map per tuple.
pub fn verify_iso(a: &TreeFunctorData, b: &TreeFunctorData, gauges: &BTreeMap<Tuple, GaugeMap>, order: i64) -> Result<Report> {
    let shape = {
        let mut bad = None;
        let mut checked = 0;
        for (t, ta) in a.primary() {
            checked += 1;
            match b.tuples.get(t) {
                Some(tb) if tb.rank == ta.rank => {}
                _ => {
                    bad = Some(format!("{t}: ranks differ"));
                    break;
                }
            }
        }
        Check::from_outcome("matching ranks", checked, bad)
    };
    Ok(Report {
        kind: "iso".into(),
        order,
        checks: vec![
            shape,
            iso_degrees(a, b, gauges)?,
            iso_gauges(a, b, gauges)?,
            iso_compatibility(a, b, gauges, order)?,
        ],
    })
}

fn gauge_for<'a>(gauges: &'a BTreeMap<Tuple, GaugeMap>, t: &Tuple) -> std::result::Result<&'a GaugeMap, String> {
    gauges.get(t).ok_or_else(|| format!("{t}: no gauge map"))
}

fn iso_degrees(a: &TreeFunctorData, b: &TreeFunctorData, gauges: &BTreeMap<Tuple, GaugeMap>) -> Result<Check> {
    let name = "degree bookkeeping";
    let mut checked = 0;
    // with no variables, a gauge map is constant and its degree is 0
    for (t, ta) in a.primary().filter(|(t, d)| d.rank > 0 && t.n() > 0) {
        checked += 1;
        let g = match gauge_for(gauges, t) {
            Ok(g) => g,
            Err(m) => return Ok(Check::from_outcome(name, checked, Some(m))),
        };
        let want = expected_degree(b, t)? - expected_degree(a, t)?;
        if *g.degree() != want {
            return Ok(Check::from_outcome(
                name,
                checked,
                Some(format!("{t}: gauge degree {} but the label shifts give {}", q_to_string(g.degree()), q_to_string(&want))),
            ));
        }
        if !g.is_homogeneous(ta.connection.basis_degrees()) {
            return Ok(Check::from_outcome(name, checked, Some(format!("{t}: gauge map is not homogeneous of its declared degree"))));
        }
    }
    Ok(Check::from_outcome(name, checked, None))
}

fn iso_gauges(a: &TreeFunctorData, b: &TreeFunctorData, gauges: &BTreeMap<Tuple, GaugeMap>) -> Result<Check> {
    let name = "gauge relation";
    let jobs: Vec<&Tuple> = a.primary().filter(|(_, d)| d.rank > 0).map(|(t, _)| t).collect();
    let outcomes = jobs
        .par_iter()
        .map(|t| -> Result<Option<String>> {
            let g = match gauge_for(gauges, t) {
                Ok(g) => g,
                Err(m) => return Ok(Some(m)),
            };
            let (ea, eb) = (&a.get(t)?.connection, &b.get(t)?.connection);
            let eb = Connection::new(eb.n_vars(), ea.basis_degrees().to_vec(), eb.matrices().to_vec())?;
            Ok((!ea.same_monodromy(&eb, g)?).then(|| format!("{t}: the gauge map does not carry one connection to the other")))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Check::from_outcome(name, jobs.len(), outcomes.into_iter().flatten().next()))
}

fn iso_compatibility(a: &TreeFunctorData, b: &TreeFunctorData, gauges: &BTreeMap<Tuple, GaugeMap>, order: i64) -> Result<Check> {
    let name = "compatibility with composition";
    let jobs: Vec<(&Tuple, &Decomposition)> = a
        .primary()
        .filter(|(_, d)| d.rank > 0)
        .flat_map(|(t, td)| td.decompositions.iter().map(move |d| (t, d)))
        .collect();
    let outcomes = jobs
        .par_iter()
        .map(|(t, da)| -> Result<Option<String>> {
            let Some(db) = b.get(t)?.decomposition(&da.partition) else {
                return Ok(Some(format!("{t}: no decomposition along {:?} in the target", da.partition)));
            };
            let layout = Layout::new(&da.partition);
            let total = layout.total();
            let mask = layout.mask();
            let mut blocks = Vec::new();
            for mu in &da.support {
                let mut acc = Mat::identity(total, 1);
                let mut offset = 0;
                for (bi, (bl, &m)) in t.blocks(&da.partition).into_iter().zip(mu).enumerate() {
                    let it = Tuple::new(bl, m);
                    let g = match gauge_for(gauges, &it) {
                        Ok(g) => g,
                        Err(msg) => return Ok(Some(msg)),
                    };
                    let map: Vec<usize> = (0..it.n()).map(|j| offset + j).collect();
                    acc = acc.kron(&g.matrix().relabel(&map, total)?)?;
                    offset += da.partition[bi];
                }
                let ot = Tuple::new(mu.clone(), t.output);
                let g = match gauge_for(gauges, &ot) {
                    Ok(g) => g,
                    Err(msg) => return Ok(Some(msg)),
                };
                let map: Vec<usize> = (0..ot.n()).map(|i| layout.z(i)).collect();
                acc = acc.kron(&g.matrix().relabel(&map, total)?)?;
                blocks.push(acc);
            }
            let prod = block_diag(total, &blocks);
            let low = prod
                .entries()
                .filter(|f| !f.is_zero())
                .filter_map(|f| f.masked_components(&mask).ok()?.keys().next().copied())
                .min()
                .unwrap_or(0);
            let g = match gauge_for(gauges, t) {
                Ok(g) => g,
                Err(msg) => return Ok(Some(msg)),
            };
            let pushed = g.matrix().try_map(|f| Ok(cocompose(f, &da.partition, low + order)?.value().clone()))?;
            let left = pushed.mul(&db.iso.to_rat(total))?;
            let right = da.iso.to_rat(total).mul(&prod)?;
            Ok((!low_parts_vanish(&left.sub(&right)?, &mask, low + order)?)
                .then(|| format!("{t} along {:?}: gauge maps do not respect the composition isomorphisms", da.partition)))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Check::from_outcome(name, jobs.len(), outcomes.into_iter().flatten().next()))
}

/// Shifts every label weight by `s` and gauges each tuple by
/// `prod_i (z_i - z_{i+1})^s`, which has degree `s (n - 1)`. Returns the shifted
/// data and the gauge maps realizing the isomorphism.
pub fn shifted(data: &TreeFunctorData, s: i64) -> Result<(TreeFunctorData, BTreeMap<Tuple, GaugeMap>)> {
    let mut out = data.clone();
    for a in out.alpha.values_mut() {
        *a += q(s);
    }
    let mut gauges = BTreeMap::new();
    let entries: Vec<(Tuple, GaugeMap, Connection)> = data
        .tuples
        .par_iter()
        .map(|(t, td)| {
            let n = t.n();
            let mut f = RatFunc::one(n);
            for i in 0..n.saturating_sub(1) {
                f = &f * &RatFunc::diff_pow(n, i, i + 1, s)?;
            }
            let g = GaugeMap::new(Mat::scalar(td.rank, &f), q(s * n.saturating_sub(1) as i64))?;
            let e = if td.rank > 0 { td.connection.gauge_transform(&g)? } else { td.connection.clone() };
            Ok((t.clone(), g, e))
        })
        .collect::<Result<Vec<_>>>()?;
    for (t, g, e) in entries {
        out.tuples.get_mut(&t).unwrap().connection = e;
        gauges.insert(t, g);
    }
    Ok((out, gauges))
}

pub fn identity_gauges(data: &TreeFunctorData) -> BTreeMap<Tuple, GaugeMap> {
    data.tuples
        .iter()
        .map(|(t, d)| (t.clone(), GaugeMap::identity(t.n(), d.rank)))
        .collect()
}

pub fn gauges_to_json(gauges: &BTreeMap<Tuple, GaugeMap>) -> Value {
    Value::Array(
        gauges
            .iter()
            .map(|(t, g)| json!({"inputs": t.inputs, "output": t.output, "gauge": g.to_json()}))
            .collect(),
    )
}

pub fn gauges_from_json(v: &Value, path: &str) -> Result<BTreeMap<Tuple, GaugeMap>> {
    let arr = v
        .as_array()
        .ok_or_else(|| crate::error::parse_err(path, "expected an array of gauge entries"))?;
    let mut out = BTreeMap::new();
    for (i, e) in arr.iter().enumerate() {
        let p = format!("{path}[{i}]");
        let inputs: Vec<u32> = e
            .get("inputs")
            .and_then(Value::as_array)
            .and_then(|a| a.iter().map(|x| x.as_u64().map(|x| x as u32)).collect())
            .ok_or_else(|| crate::error::parse_err(&p, "missing inputs"))?;
        let output = e
            .get("output")
            .and_then(Value::as_u64)
            .ok_or_else(|| crate::error::parse_err(&p, "missing output"))? as u32;
        let t = Tuple::new(inputs, output);
        let g = GaugeMap::from_json(e.get("gauge").ok_or_else(|| crate::error::parse_err(&p, "missing gauge"))?, t.n(), &format!("{p}.gauge"))?;
        out.insert(t, g);
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// mutations

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Target {
    Decomposition(usize),
    Connection(usize),
    Phi(usize),
    Permutation(usize),
    Unit(usize),
}

/// A single-entry perturbation of primary tuple data.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mutation {
    pub tuple: Tuple,
    pub target: Target,
    pub row: usize,
    pub col: usize,
}

impl fmt::Display for Mutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {:?} entry ({},{})", self.tuple, self.target, self.row, self.col)
    }
}

impl Mutation {
    /// Adds 1 to a constant entry; connection entries gain `1/(z_0 - z_1)`.
    pub fn apply(&self, data: &mut TreeFunctorData) -> Result<()> {
        let td = data
            .tuples
            .get_mut(&self.tuple)
            .ok_or_else(|| Error::Incomplete(format!("no data for tuple {}", self.tuple)))?;
        let bump = |m: &mut QMat, r: usize, c: usize| {
            let v = m.get(r, c) + Q::one();
            m.set(r, c, v);
        };
        match self.target {
            Target::Decomposition(i) => bump(&mut td.decompositions[i].iso, self.row, self.col),
            Target::Phi(i) => bump(&mut td.phi[i], self.row, self.col),
            Target::Permutation(i) => bump(&mut td.permutations[i].1, self.row, self.col),
            Target::Unit(i) => bump(&mut td.units[i].iso, self.row, self.col),
            Target::Connection(v) => {
                let n = td.connection.n_vars();
                let mut mats = td.connection.matrices().to_vec();
                let e = mats[v].get(self.row, self.col) + &RatFunc::diff_pow(n, 0, 1, -1)?;
                mats[v].set(self.row, self.col, e);
                td.connection = Connection::new(n, td.connection.basis_degrees().to_vec(), mats)?;
            }
        }
        Ok(())
    }
}

/// Every single-entry mutation of primary tuples with nonzero rank.
pub fn mutation_candidates(data: &TreeFunctorData) -> Vec<Vec<Mutation>> {
    let mut by_kind: Vec<Vec<Mutation>> = vec![Vec::new(); 5];
    let entries = |m: &QMat| -> Vec<(usize, usize)> { (0..m.rows()).flat_map(|r| (0..m.cols()).map(move |c| (r, c))).collect() };
    for (t, td) in data.primary().filter(|(_, d)| d.rank > 0) {
        let mk = |target: Target, (row, col): (usize, usize)| Mutation {
            tuple: t.clone(),
            target,
            row,
            col,
        };
        for (i, d) in td.decompositions.iter().enumerate() {
            by_kind[0].extend(entries(&d.iso).into_iter().map(|e| mk(Target::Decomposition(i), e)));
        }
        if t.n() >= 2 {
            for v in 0..t.n() {
                for r in 0..td.rank {
                    for c in 0..td.rank {
                        by_kind[1].push(mk(Target::Connection(v), (r, c)));
                    }
                }
            }
        }
        for (i, m) in td.phi.iter().enumerate() {
            by_kind[2].extend(entries(m).into_iter().map(|e| mk(Target::Phi(i), e)));
        }
        for (i, (_, m)) in td.permutations.iter().enumerate() {
            by_kind[3].extend(entries(m).into_iter().map(|e| mk(Target::Permutation(i), e)));
        }
        for (i, u) in td.units.iter().enumerate() {
            by_kind[4].extend(entries(&u.iso).into_iter().map(|e| mk(Target::Unit(i), e)));
        }
    }
    by_kind
}

/// `count` mutations drawn round-robin over the entry kinds.
pub fn sample_mutations(data: &TreeFunctorData, count: usize, seed: u64) -> Vec<Mutation> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut kinds = mutation_candidates(data);
    for k in &mut kinds {
        k.shuffle(&mut rng);
    }
    let mut out = Vec::new();
    let mut round = 0;
    while out.len() < count && kinds.iter().any(|k| round < k.len()) {
        for k in &kinds {
            if out.len() < count && round < k.len() {
                out.push(k[round].clone());
            }
        }
        round += 1;
    }
    out
}

/// Runs the pre-tree, tree-functor and map verifiers; true when any fails.
pub fn any_failure(data: &TreeFunctorData, order: i64) -> Result<bool> {
    Ok(!verify_pretree(data, order)?.passed()
        || !verify_treefunctor(data, order)?.passed()
        || !verify_pta(data, order)?.passed())
}

// ---------------------------------------------------------------------------
// rationality

/// Paths of JSON floats and of numeric-looking strings that are not exact
/// rationals in `p/q` form.
pub fn rationality_scan(v: &Value) -> Vec<String> {
    let mut bad = Vec::new();
    scan(v, "$", &mut bad);
    bad
}

fn scan(v: &Value, path: &str, bad: &mut Vec<String>) {
    match v {
        Value::Number(n) => {
            if !(n.is_i64() || n.is_u64()) {
                bad.push(format!("{path}: floating-point number {n}"));
            }
        }
        Value::String(s) => {
            let numeric = s.chars().any(|c| c.is_ascii_digit())
                && s.chars().all(|c| c.is_ascii_digit() || "+-./eE".contains(c));
            if numeric && (s.contains(['.', 'e', 'E']) || parse_q(s).is_err()) {
                bad.push(format!("{path}: \"{s}\" is not an exact rational"));
            }
        }
        Value::Array(a) => {
            for (i, x) in a.iter().enumerate() {
                scan(x, &format!("{path}[{i}]"), bad);
            }
        }
        Value::Object(m) => {
            for (k, x) in m {
                scan(x, &format!("{path}.{k}"), bad);
            }
        }
        _ => {}
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kz::WzwInstance;
    use crate::lie::LieAlgebra;

    fn wzw(max: usize) -> TreeFunctorData {
        let inst = WzwInstance::new(&LieAlgebra::sl2(), &[1], &q(1), max).unwrap();
        TreeFunctorData::wzw(&inst).unwrap()
    }

    #[test]
    fn trivial_data_passes_everything() {
        let d = TreeFunctorData::trivial(3);
        for r in [verify_pretree(&d, 2).unwrap(), verify_treefunctor(&d, 2).unwrap(), verify_pta(&d, 1).unwrap()] {
            assert_eq!(r.status(), Status::Pass, "{r}");
        }
        assert!(verify_iso(&d, &d, &identity_gauges(&d), 1).unwrap().passed());
    }

    #[test]
    fn wzw_two_point_passes() {
        let d = wzw(2);
        for r in [verify_pretree(&d, 1).unwrap(), verify_treefunctor(&d, 1).unwrap(), verify_pta(&d, 1).unwrap()] {
            assert_eq!(r.status(), Status::Pass, "{r}");
        }
    }

    #[test]
    fn zeroed_composition_fails_pretree() {
        let mut d = wzw(2);
        let t = Tuple::new(vec![1, 1], 0);
        let iso = &mut d.tuples.get_mut(&t).unwrap().decompositions[0].iso;
        *iso = QMat::zeros(iso.rows(), iso.cols());
        let r = verify_pretree(&d, 1).unwrap();
        assert!(!r.passed());
        assert!(r.to_string().contains("(1,1;0)"));
    }

    #[test]
    fn doubled_connection_fails_axiom_three() {
        let mut d = wzw(3);
        let t = Tuple::new(vec![1, 1, 1], 1);
        let td = d.tuples.get_mut(&t).unwrap();
        let mats = td.connection.matrices().iter().map(|m| m.scale(&q(2))).collect();
        td.connection = Connection::new(3, td.connection.basis_degrees().to_vec(), mats).unwrap();
        let r = verify_treefunctor(&d, 1).unwrap();
        let c = r.checks.iter().find(|c| c.name.starts_with("axiom 3")).unwrap();
        assert_eq!(c.status, Status::Fail);
    }

    #[test]
    fn doubled_phi_fails_pta() {
        let mut d = wzw(2);
        let t = Tuple::new(vec![1], 1);
        let td = d.tuples.get_mut(&t).unwrap();
        td.phi[0] = td.phi[0].scale(&q(2));
        assert!(!verify_pta(&d, 1).unwrap().passed());
    }

    #[test]
    fn missing_gauge_certificate_is_unverified() {
        let mut d = wzw(2);
        for td in d.tuples.values_mut() {
            for u in &mut td.units {
                u.gauge = None;
            }
        }
        let r = verify_treefunctor(&d, 1).unwrap();
        assert_eq!(r.status(), Status::Unverified);
    }

    #[test]
    fn shifted_data_is_isomorphic() {
        let d = wzw(2);
        let (b, g) = shifted(&d, 1).unwrap();
        let r = verify_iso(&d, &b, &g, 1).unwrap();
        assert!(r.passed(), "{r}");
        let mut wrong = b.clone();
        *wrong.alpha.get_mut(&1).unwrap() += q(1);
        let r = verify_iso(&d, &wrong, &g, 1).unwrap();
        assert_eq!(r.checks[1].status, Status::Fail);
    }

    #[test]
    fn rationality_scan_flags_floats() {
        let v = json!({"a": "1/3", "b": [1, "0.5", 2.5], "c": "sl2", "d": "1e3"});
        let bad = rationality_scan(&v);
        assert_eq!(bad.len(), 3, "{bad:?}");
    }
}
