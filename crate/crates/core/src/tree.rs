//! Finite tree-functor and pre-tree-algebra data.
//!
//! A tuple `(l_1..l_n; l_inf)` carries a free module (rank plus connection), the
//! maps `phi` of its basis elements into the graded window of the label spaces,
//! composition isomorphisms for each partition of its inputs, permutation
//! isomorphisms and unit-insertion isomorphisms.
//!
//! Composition isomorphisms map `sum_mu M(B_1; mu_1) (x) .. (x) M(B_k; mu_k) (x) M(mu; l_inf)`
//! into `M(l; l_inf)`. Columns run over the support list, then Kronecker order
//! with the inner factors first and the outer factor last.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::fs;
use std::path::Path as FsPath;

use num_traits::Zero;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::connection::{Connection, GaugeMap};
use crate::error::{parse_err, Error, Result};
use crate::kz::{tensor_permutation, WzwInstance};
use crate::matrix::QMat;
use crate::rational::{parse_q, q_to_string, Q};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Tuple {
    pub inputs: Vec<u32>,
    pub output: u32,
}

impl Tuple {
    pub fn new(inputs: Vec<u32>, output: u32) -> Self {
        Tuple { inputs, output }
    }

    pub fn n(&self) -> usize {
        self.inputs.len()
    }

    /// Input blocks of a partition.
    pub fn blocks(&self, partition: &[usize]) -> Vec<Vec<u32>> {
        let mut out = Vec::new();
        let mut at = 0;
        for &m in partition {
            out.push(self.inputs[at..at + m].to_vec());
            at += m;
        }
        out
    }

    /// `sigma . T`: the input at `v` moves to `sigma[v]`.
    pub fn permuted(&self, sigma: &[usize]) -> Tuple {
        let mut inputs = self.inputs.clone();
        for (v, &s) in sigma.iter().enumerate() {
            inputs[s] = self.inputs[v];
        }
        Tuple::new(inputs, self.output)
    }

    pub fn without(&self, p: usize) -> Tuple {
        let mut inputs = self.inputs.clone();
        inputs.remove(p);
        Tuple::new(inputs, self.output)
    }

    fn file_name(&self) -> String {
        let ins: Vec<String> = self.inputs.iter().map(u32::to_string).collect();
        format!("t_{}_to_{}.json", if ins.is_empty() { "none".into() } else { ins.join("-") }, self.output)
    }
}

impl fmt::Display for Tuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ins: Vec<String> = self.inputs.iter().map(u32::to_string).collect();
        write!(f, "({};{})", ins.join(","), self.output)
    }
}

/// Ordered compositions of `n` into positive parts.
pub fn compositions(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![];
    }
    let mut out = Vec::new();
    for mask in 0..(1u32 << (n - 1)) {
        let mut parts = Vec::new();
        let mut len = 1;
        for b in 0..n - 1 {
            if mask & (1 << b) != 0 {
                parts.push(len);
                len = 1;
            } else {
                len += 1;
            }
        }
        parts.push(len);
        out.push(parts);
    }
    out.sort();
    out
}

/// All permutations of `0..n`.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut p: Vec<usize> = (0..n).collect();
    fn rec(p: &mut Vec<usize>, k: usize, out: &mut Vec<Vec<usize>>) {
        if k == p.len() {
            out.push(p.clone());
            return;
        }
        for i in k..p.len() {
            p.swap(k, i);
            rec(p, k + 1, out);
            p.swap(k, i);
        }
    }
    rec(&mut p, 0, &mut out);
    out.sort();
    out
}

#[derive(Clone, Debug, PartialEq)]
pub struct Decomposition {
    pub partition: Vec<usize>,
    pub support: Vec<Vec<u32>>,
    pub iso: QMat,
}

#[derive(Clone, Debug, PartialEq)]
pub struct UnitIso {
    pub position: usize,
    pub iso: QMat,
    pub gauge: Option<GaugeMap>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TupleData {
    /// 0 for primary tuples, 1 for tuples reached by one composition, 2 beyond.
    pub level: u8,
    pub rank: usize,
    pub connection: Connection,
    pub phi: Vec<QMat>,
    pub decompositions: Vec<Decomposition>,
    pub permutations: Vec<(Vec<usize>, QMat)>,
    pub units: Vec<UnitIso>,
}

impl TupleData {
    pub fn decomposition(&self, partition: &[usize]) -> Option<&Decomposition> {
        self.decompositions.iter().find(|d| d.partition == partition)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TreeFunctorData {
    pub labels: Vec<u32>,
    pub unit: u32,
    pub alpha: BTreeMap<u32, Q>,
    /// Dimensions of the degree-0 pieces of the label spaces.
    pub v_dims: BTreeMap<u32, usize>,
    /// Number of graded pieces available in each label space.
    pub window: usize,
    pub max_inputs: usize,
    pub tuples: BTreeMap<Tuple, TupleData>,
}

impl TreeFunctorData {
    pub fn get(&self, t: &Tuple) -> Result<&TupleData> {
        self.tuples.get(t).ok_or_else(|| Error::Incomplete(format!("no data for tuple {t}")))
    }

    pub fn rank(&self, t: &Tuple) -> Result<usize> {
        Ok(self.get(t)?.rank)
    }

    pub fn primary(&self) -> impl Iterator<Item = (&Tuple, &TupleData)> {
        self.tuples.iter().filter(|(_, d)| d.level == 0)
    }

    /// Data over the single unit label: every module has rank 1, every
    /// connection and isomorphism is trivial.
    pub fn trivial(max_inputs: usize) -> Self {
        let mut tuples = BTreeMap::new();
        for n in 0..=max_inputs {
            let t = Tuple::new(vec![0; n], 0);
            let decompositions = compositions(n)
                .into_iter()
                .map(|p| Decomposition {
                    support: vec![vec![0; p.len()]],
                    partition: p,
                    iso: QMat::identity(1),
                })
                .collect();
            let units = (0..n)
                .map(|position| UnitIso {
                    position,
                    iso: QMat::identity(1),
                    gauge: Some(GaugeMap::identity(n, 1)),
                })
                .collect();
            tuples.insert(
                t,
                TupleData {
                    level: 0,
                    rank: 1,
                    connection: Connection::zero(n, 1),
                    phi: vec![QMat::identity(1)],
                    decompositions,
                    permutations: permutations(n).into_iter().map(|s| (s, QMat::identity(1))).collect(),
                    units,
                },
            );
        }
        TreeFunctorData {
            labels: vec![0],
            unit: 0,
            alpha: BTreeMap::from([(0, Q::zero())]),
            v_dims: BTreeMap::from([(0, 1)]),
            window: 1,
            max_inputs,
            tuples,
        }
    }

    /// Assembles the data of a WZW instance over its primary tuples, plus the
    /// tuples reachable through two levels of composition.
    pub fn wzw(inst: &WzwInstance) -> Result<Self> {
        let mut primary: BTreeSet<Tuple> = BTreeSet::new();
        for n in 0..=inst.max_inputs() {
            let mut ins: Vec<Vec<u32>> = vec![vec![]];
            for _ in 0..n {
                ins = ins
                    .iter()
                    .flat_map(|t| {
                        inst.labels().iter().map(move |&l| {
                            let mut t = t.clone();
                            t.push(l);
                            t
                        })
                    })
                    .collect();
            }
            for i in ins {
                for &o in inst.labels() {
                    primary.insert(Tuple::new(i.clone(), o));
                }
            }
        }
        let mut level: BTreeMap<Tuple, u8> = primary.iter().map(|t| (t.clone(), 0)).collect();
        let mut frontier: Vec<Tuple> = primary.into_iter().collect();
        for lvl in 1..=2u8 {
            let found: Vec<Vec<Tuple>> = frontier
                .par_iter()
                .map(|t| referenced_tuples(inst, t))
                .collect::<Result<Vec<_>>>()?;
            let mut next = Vec::new();
            for t in found.into_iter().flatten() {
                if !level.contains_key(&t) {
                    level.insert(t.clone(), lvl);
                    next.push(t);
                }
            }
            frontier = next;
        }
        let entries: Vec<(Tuple, u8)> = level.into_iter().collect();
        let built: Vec<(Tuple, TupleData)> = entries
            .par_iter()
            .map(|(t, lvl)| Ok((t.clone(), build_tuple(inst, t, *lvl)?)))
            .collect::<Result<Vec<_>>>()?;
        let all_labels: BTreeSet<u32> = built
            .iter()
            .flat_map(|(t, _)| t.inputs.iter().copied().chain(std::iter::once(t.output)))
            .collect();
        let mut alpha = BTreeMap::new();
        let mut v_dims = BTreeMap::new();
        for &l in &all_labels {
            alpha.insert(l, inst.alpha(l)?);
            v_dims.insert(l, l as usize + 1);
        }
        Ok(TreeFunctorData {
            labels: inst.labels().to_vec(),
            unit: 0,
            alpha,
            v_dims,
            window: 1,
            max_inputs: inst.max_inputs(),
            tuples: built.into_iter().collect(),
        })
    }

    pub fn write_dir(&self, dir: &FsPath) -> Result<()> {
        fs::create_dir_all(dir).map_err(|e| Error::Io(e.to_string()))?;
        let mut entries = Vec::new();
        for (t, d) in &self.tuples {
            let file = t.file_name();
            let body = json!({
                "inputs": t.inputs,
                "output": t.output,
                "rank": d.rank,
                "connection": d.connection.to_json(),
                "phi": d.phi.iter().map(QMat::to_json).collect::<Vec<_>>(),
                "decompositions": d.decompositions.iter().map(|x| json!({"partition": x.partition, "iso": x.iso.to_json()})).collect::<Vec<_>>(),
                "permutations": d.permutations.iter().map(|(s, m)| json!({"sigma": s, "iso": m.to_json()})).collect::<Vec<_>>(),
                "units": d.units.iter().map(|u| {
                    let mut v = json!({"position": u.position, "iso": u.iso.to_json()});
                    if let Some(g) = &u.gauge {
                        v["gauge"] = g.to_json();
                    }
                    v
                }).collect::<Vec<_>>(),
            });
            write_json(&dir.join(&file), &body)?;
            entries.push(json!({
                "inputs": t.inputs,
                "output": t.output,
                "level": d.level,
                "file": file,
                "supports": d.decompositions.iter().map(|x| json!({"partition": x.partition, "support": x.support})).collect::<Vec<_>>(),
            }));
        }
        let manifest = json!({
            "labels": self.labels,
            "unit": self.unit,
            "alpha": self.alpha.iter().map(|(l, a)| (l.to_string(), json!(q_to_string(a)))).collect::<serde_json::Map<_, _>>(),
            "v_dims": self.v_dims.iter().map(|(l, d)| (l.to_string(), json!(d))).collect::<serde_json::Map<_, _>>(),
            "window": self.window,
            "max_inputs": self.max_inputs,
            "tuples": entries,
        });
        write_json(&dir.join("manifest.json"), &manifest)
    }

    pub fn read_dir(dir: &FsPath) -> Result<Self> {
        let mpath = dir.join("manifest.json");
        let m = read_json(&mpath)?;
        let mp = mpath.display().to_string();
        let labels = u32_list(m.get("labels"), &format!("{mp}:labels"))?;
        let unit = m
            .get("unit")
            .and_then(Value::as_u64)
            .ok_or_else(|| parse_err(format!("{mp}:unit"), "expected a label"))? as u32;
        let mut alpha = BTreeMap::new();
        for (k, v) in m
            .get("alpha")
            .and_then(Value::as_object)
            .ok_or_else(|| parse_err(format!("{mp}:alpha"), "expected an object"))?
        {
            let p = format!("{mp}:alpha.{k}");
            let l: u32 = k.parse().map_err(|_| parse_err(&p, "label keys must be integers"))?;
            let s = v.as_str().ok_or_else(|| parse_err(&p, "expected a rational string"))?;
            alpha.insert(l, parse_q(s).map_err(|_| parse_err(&p, "not an exact rational"))?);
        }
        let mut v_dims = BTreeMap::new();
        for (k, v) in m
            .get("v_dims")
            .and_then(Value::as_object)
            .ok_or_else(|| parse_err(format!("{mp}:v_dims"), "expected an object"))?
        {
            let p = format!("{mp}:v_dims.{k}");
            let l: u32 = k.parse().map_err(|_| parse_err(&p, "label keys must be integers"))?;
            v_dims.insert(l, v.as_u64().ok_or_else(|| parse_err(&p, "expected a dimension"))? as usize);
        }
        let window = m.get("window").and_then(Value::as_u64).unwrap_or(1) as usize;
        let max_inputs = m.get("max_inputs").and_then(Value::as_u64).unwrap_or(0) as usize;
        let entries = m
            .get("tuples")
            .and_then(Value::as_array)
            .ok_or_else(|| parse_err(format!("{mp}:tuples"), "expected an array"))?;
        let mut tuples = BTreeMap::new();
        for (k, e) in entries.iter().enumerate() {
            let p = format!("{mp}:tuples[{k}]");
            let t = Tuple::new(
                u32_list(e.get("inputs"), &format!("{p}.inputs"))?,
                e.get("output").and_then(Value::as_u64).ok_or_else(|| parse_err(&p, "missing output"))? as u32,
            );
            let level = e.get("level").and_then(Value::as_u64).unwrap_or(0) as u8;
            let file = e
                .get("file")
                .and_then(Value::as_str)
                .ok_or_else(|| parse_err(&p, "missing file"))?;
            let mut supports: BTreeMap<Vec<usize>, Vec<Vec<u32>>> = BTreeMap::new();
            for (j, s) in e.get("supports").and_then(Value::as_array).into_iter().flatten().enumerate() {
                let sp = format!("{p}.supports[{j}]");
                let part = usize_list(s.get("partition"), &format!("{sp}.partition"))?;
                let sup = s
                    .get("support")
                    .and_then(Value::as_array)
                    .ok_or_else(|| parse_err(&sp, "missing support"))?
                    .iter()
                    .enumerate()
                    .map(|(i, x)| u32_list(Some(x), &format!("{sp}.support[{i}]")))
                    .collect::<Result<Vec<_>>>()?;
                supports.insert(part, sup);
            }
            let data = read_tuple_file(&dir.join(file), &t, level, &supports)?;
            tuples.insert(t, data);
        }
        Ok(TreeFunctorData {
            labels,
            unit,
            alpha,
            v_dims,
            window,
            max_inputs,
            tuples,
        })
    }
}

fn write_json(path: &FsPath, v: &Value) -> Result<()> {
    let mut s = serde_json::to_string_pretty(v).map_err(|e| Error::Io(e.to_string()))?;
    s.push('\n');
    fs::write(path, s).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

pub fn read_json(path: &FsPath) -> Result<Value> {
    let s = fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&s).map_err(|e| {
        parse_err(
            format!("{}:{}:{}", path.display(), e.line(), e.column()),
            e.to_string(),
        )
    })
}

fn u32_list(v: Option<&Value>, path: &str) -> Result<Vec<u32>> {
    v.and_then(Value::as_array)
        .and_then(|a| a.iter().map(|x| x.as_u64().map(|x| x as u32)).collect())
        .ok_or_else(|| parse_err(path, "expected an array of non-negative integers"))
}

fn usize_list(v: Option<&Value>, path: &str) -> Result<Vec<usize>> {
    u32_list(v, path).map(|v| v.into_iter().map(|x| x as usize).collect())
}

fn read_tuple_file(
    path: &FsPath,
    t: &Tuple,
    level: u8,
    supports: &BTreeMap<Vec<usize>, Vec<Vec<u32>>>,
) -> Result<TupleData> {
    let v = read_json(path)?;
    let p = path.display().to_string();
    let rank = v
        .get("rank")
        .and_then(Value::as_u64)
        .ok_or_else(|| parse_err(format!("{p}:rank"), "expected an integer"))? as usize;
    let connection = Connection::from_json(
        v.get("connection").ok_or_else(|| parse_err(&p, "missing connection"))?,
        &format!("{p}:connection"),
    )?;
    if connection.rank() != rank || connection.n_vars() != t.n() {
        return Err(parse_err(format!("{p}:connection"), "shape differs from the tuple"));
    }
    let qmats = |key: &str| -> Result<Vec<Value>> {
        Ok(v.get(key).and_then(Value::as_array).cloned().unwrap_or_default())
    };
    let phi = qmats("phi")?
        .iter()
        .enumerate()
        .map(|(i, m)| QMat::from_json(m, &format!("{p}:phi[{i}]")))
        .collect::<Result<Vec<_>>>()?;
    let mut decompositions = Vec::new();
    for (i, d) in qmats("decompositions")?.iter().enumerate() {
        let dp = format!("{p}:decompositions[{i}]");
        let partition = usize_list(d.get("partition"), &format!("{dp}.partition"))?;
        let iso = QMat::from_json(d.get("iso").ok_or_else(|| parse_err(&dp, "missing iso"))?, &format!("{dp}.iso"))?;
        let support = supports
            .get(&partition)
            .cloned()
            .ok_or_else(|| parse_err(&dp, "manifest lists no support for this partition"))?;
        decompositions.push(Decomposition {
            partition,
            support,
            iso,
        });
    }
    let mut permutations = Vec::new();
    for (i, d) in qmats("permutations")?.iter().enumerate() {
        let dp = format!("{p}:permutations[{i}]");
        let sigma = usize_list(d.get("sigma"), &format!("{dp}.sigma"))?;
        let iso = QMat::from_json(d.get("iso").ok_or_else(|| parse_err(&dp, "missing iso"))?, &format!("{dp}.iso"))?;
        permutations.push((sigma, iso));
    }
    let mut units = Vec::new();
    for (i, d) in qmats("units")?.iter().enumerate() {
        let dp = format!("{p}:units[{i}]");
        let position = d
            .get("position")
            .and_then(Value::as_u64)
            .ok_or_else(|| parse_err(&dp, "missing position"))? as usize;
        let iso = QMat::from_json(d.get("iso").ok_or_else(|| parse_err(&dp, "missing iso"))?, &format!("{dp}.iso"))?;
        let gauge = match d.get("gauge") {
            Some(g) => Some(GaugeMap::from_json(g, t.n(), &format!("{dp}.gauge"))?),
            None => None,
        };
        units.push(UnitIso { position, iso, gauge });
    }
    Ok(TupleData {
        level,
        rank,
        connection,
        phi,
        decompositions,
        permutations,
        units,
    })
}

/// Weights `m` with `Hom((x) L(w_i), L(m)) != 0` (Clebsch-Gordan range).
fn reachable(inst: &WzwInstance, inputs: &[u32]) -> Result<Vec<u32>> {
    let total: u32 = inputs.iter().sum();
    let mut out = Vec::new();
    for m in 0..=total {
        if (total - m) % 2 == 0 && inst.channel(inputs, m)?.rank() > 0 {
            out.push(m);
        }
    }
    Ok(out)
}

/// Intermediate label tuples `mu` with every factor nonzero.
fn support(inst: &WzwInstance, t: &Tuple, partition: &[usize]) -> Result<Vec<Vec<u32>>> {
    let mut choices: Vec<Vec<u32>> = vec![vec![]];
    for b in t.blocks(partition) {
        let r = reachable(inst, &b)?;
        choices = choices
            .iter()
            .flat_map(|c| {
                r.iter().map(move |&m| {
                    let mut c = c.clone();
                    c.push(m);
                    c
                })
            })
            .collect();
    }
    let mut out = Vec::new();
    for mu in choices {
        if inst.channel(&mu, t.output)?.rank() > 0 {
            out.push(mu);
        }
    }
    Ok(out)
}

fn referenced_tuples(inst: &WzwInstance, t: &Tuple) -> Result<Vec<Tuple>> {
    let mut out = Vec::new();
    for p in compositions(t.n()) {
        let blocks = t.blocks(&p);
        for mu in support(inst, t, &p)? {
            out.push(Tuple::new(mu.clone(), t.output));
            for (b, &m) in blocks.iter().zip(&mu) {
                out.push(Tuple::new(b.clone(), m));
            }
        }
    }
    for (v, &l) in t.inputs.iter().enumerate() {
        if l == 0 {
            out.push(t.without(v));
        }
    }
    Ok(out)
}

/// Coordinates of each `targets[c]` in the basis `basis` (matrices of one shape).
fn coordinates(basis: &[QMat], targets: &[QMat]) -> Result<QMat> {
    let r = basis.len();
    if r == 0 {
        return Ok(QMat::zeros(0, targets.len()));
    }
    let (dt, ds) = (basis[0].rows(), basis[0].cols());
    let mut a = QMat::zeros(dt * ds, r);
    let mut b = QMat::zeros(dt * ds, targets.len());
    for (k, f) in basis.iter().enumerate() {
        for i in 0..dt {
            for j in 0..ds {
                a.set(i * ds + j, k, f.get(i, j).clone());
            }
        }
    }
    for (k, f) in targets.iter().enumerate() {
        for i in 0..dt {
            for j in 0..ds {
                b.set(i * ds + j, k, f.get(i, j).clone());
            }
        }
    }
    a.solve(&b)
        .ok_or_else(|| Error::Incomplete("a composite map is not in the span of the invariant maps".into()))
}

fn build_tuple(inst: &WzwInstance, t: &Tuple, level: u8) -> Result<TupleData> {
    let ch = inst.channel(&t.inputs, t.output)?;
    let rank = ch.rank();
    let mut decompositions = Vec::new();
    let mut permutations_out = Vec::new();
    let mut units = Vec::new();
    if level < 2 {
        for p in compositions(t.n()) {
            let sup = support(inst, t, &p)?;
            let mut composites = Vec::new();
            for mu in &sup {
                let inner: Vec<_> = t
                    .blocks(&p)
                    .iter()
                    .zip(mu)
                    .map(|(b, &m)| inst.channel(b, m))
                    .collect::<Result<Vec<_>>>()?;
                let outer = inst.channel(mu, t.output)?;
                // Kronecker order: inner_1 slowest, outer fastest
                let mut combos: Vec<QMat> = vec![QMat::identity(1)];
                for ich in &inner {
                    combos = combos.iter().flat_map(|c| ich.basis.iter().map(move |f| c.kron(f))).collect();
                }
                for c in &combos {
                    for g in &outer.basis {
                        composites.push(g.mul(c)?);
                    }
                }
            }
            let iso = coordinates(&ch.basis, &composites)?;
            decompositions.push(Decomposition {
                partition: p,
                support: sup,
                iso,
            });
        }
    }
    if level == 0 {
        let dims: Vec<usize> = t.inputs.iter().map(|&m| m as usize + 1).collect();
        for sigma in permutations(t.n()) {
            let target = t.permuted(&sigma);
            let other = inst.channel(&target.inputs, target.output)?;
            let pinv = tensor_permutation(&dims, &sigma).transpose();
            let moved = ch.basis.iter().map(|f| f.mul(&pinv)).collect::<Result<Vec<_>>>()?;
            permutations_out.push((sigma, coordinates(&other.basis, &moved)?));
        }
        for (v, &l) in t.inputs.iter().enumerate() {
            if l != 0 {
                continue;
            }
            let small = inst.channel(&t.without(v).inputs, t.output)?;
            // the trivial factor is one-dimensional, so the maps have the same matrices
            let iso = coordinates(&ch.basis, &small.basis)?;
            units.push(UnitIso {
                position: v,
                iso,
                gauge: Some(GaugeMap::identity(t.n(), rank)),
            });
        }
    }
    Ok(TupleData {
        level,
        rank,
        connection: ch.connection.clone(),
        phi: ch.basis.clone(),
        decompositions,
        permutations: permutations_out,
        units,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::LieAlgebra;
    use crate::rational::q;

    #[test]
    fn compositions_and_permutations() {
        assert_eq!(compositions(3), vec![vec![1, 1, 1], vec![1, 2], vec![2, 1], vec![3]]);
        assert_eq!(permutations(3).len(), 6);
        assert!(compositions(0).is_empty());
    }

    #[test]
    fn wzw_two_point_data() {
        let inst = WzwInstance::new(&LieAlgebra::sl2(), &[1], &q(1), 2).unwrap();
        let data = TreeFunctorData::wzw(&inst).unwrap();
        let t = Tuple::new(vec![1, 1], 0);
        let d = data.get(&t).unwrap();
        assert_eq!(d.level, 0);
        assert_eq!(d.rank, 1);
        assert_eq!(d.decompositions.len(), 2);
        assert!(!data.tuples.contains_key(&Tuple::new(vec![1, 1], 2)));
        let three = TreeFunctorData::wzw(&WzwInstance::new(&LieAlgebra::sl2(), &[1], &q(1), 3).unwrap()).unwrap();
        // spin 1 enters as an intermediate label of (1,1,1;1)
        assert_eq!(three.get(&Tuple::new(vec![1, 1], 2)).unwrap().level, 1);
        assert_eq!(data.rank(&Tuple::new(vec![], 0)).unwrap(), 1);
        assert_eq!(data.rank(&Tuple::new(vec![], 1)).unwrap(), 0);
    }

    #[test]
    fn directory_round_trip() {
        let inst = WzwInstance::new(&LieAlgebra::sl2(), &[1], &q(1), 2).unwrap();
        let data = TreeFunctorData::wzw(&inst).unwrap();
        let dir = tempfile::tempdir().unwrap();
        data.write_dir(dir.path()).unwrap();
        let back = TreeFunctorData::read_dir(dir.path()).unwrap();
        assert_eq!(back, data);
    }
}
