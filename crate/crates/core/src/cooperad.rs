//! Co-composition of the configuration-space co-operad, truncated in the inner
//! variables.
//!
//! For a partition `(m_1..m_n)` the structure map substitutes
//! `z_{ij} = t_{ij} + z_i`. Differences inside one block stay exact; inverse
//! differences across blocks are expanded in increasing powers of the `t`s:
//!
//! ```text
//! (t_ij - t_i'j' + z_i - z_i')^{-1} = sum_m (-1)^m (t_ij - t_i'j')^m (z_i - z_i')^{-m-1}
//! ```
//!
//! A [`TruncTensor`] stores its value as one [`RatFunc`] over the `t` variables
//! (block-major) followed by `z_1..z_n`. Block-internal denominators live in the
//! `t` part and outer denominators in the `z` part, so the value is canonically
//! an element of `(M(m_1) (x) .. (x) M(m_n)) (x) M(n)` and the `t`-degree of each
//! numerator monomial is well defined.

use std::collections::{BTreeMap, HashMap};

use num_traits::{One, Zero};
use serde_json::{json, Value};

use crate::error::{parse_err, Error, Result};
use crate::poly::{Exponents, Poly};
use crate::rational::{binomial, Q};
use crate::ratfunc::{Pair, RatFunc};

/// Where an old variable goes under a splitting substitution.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VarImage {
    /// `x -> s + w`, with `s` a graded (expanded) variable and `w` ungraded.
    Split { s: usize, w: usize },
    /// `x -> p`, an ungraded variable.
    Keep(usize),
}

impl VarImage {
    fn graded(self) -> Option<usize> {
        match self {
            VarImage::Split { s, .. } => Some(s),
            VarImage::Keep(_) => None,
        }
    }
    fn ungraded(self) -> usize {
        match self {
            VarImage::Split { w, .. } => w,
            VarImage::Keep(p) => p,
        }
    }
}

/// Substitutes `x_a = S_a + U_a` and expands in the graded parts `S`, exact up
/// to graded degree `order` (inclusive). `mask` marks graded output variables.
pub fn expand_substitution(f: &RatFunc, images: &[VarImage], n_out: usize, mask: &[bool], order: i64) -> Result<RatFunc> {
    expand_windowed(f, images, n_out, mask, order, &[])
}

/// As [`expand_substitution`], additionally dropping every term whose degree in
/// `windows[i].0` exceeds `windows[i].1`.
fn expand_windowed(
    f: &RatFunc,
    images: &[VarImage],
    n_out: usize,
    mask: &[bool],
    order: i64,
    windows: &[(&[bool], i64)],
) -> Result<RatFunc> {
    if images.len() != f.n_vars() {
        return Err(Error::VarCountMismatch(images.len(), f.n_vars()));
    }
    if mask.len() != n_out {
        return Err(Error::VarCountMismatch(mask.len(), n_out));
    }
    for im in images {
        if let Some(s) = im.graded() {
            if s >= n_out || !mask[s] {
                return Err(Error::UnsupportedSubstitution("graded image must be a masked variable".into()));
            }
        }
        let u = im.ungraded();
        if u >= n_out || mask[u] {
            return Err(Error::UnsupportedSubstitution("ungraded image must be an unmasked variable".into()));
        }
    }
    if f.is_zero() {
        return Ok(RatFunc::zero(n_out));
    }

    let mut exact_neg: Vec<(Pair, u32)> = Vec::new();
    let mut plain: Vec<(Pair, u32)> = Vec::new();
    let mut expand: Vec<(usize, usize, usize, usize, u32)> = Vec::new();
    for (&(a, b), &m) in f.denominator() {
        let (ia, ib) = (images[a], images[b]);
        if ia.ungraded() == ib.ungraded() {
            // pure graded difference
            let (sa, sb) = (ia.graded().unwrap(), ib.graded().unwrap());
            exact_neg.push(((sa, sb), m));
        } else if ia.graded().is_none() && ib.graded().is_none() {
            plain.push(((ia.ungraded(), ib.ungraded()), m));
        } else {
            expand.push((
                ia.graded().unwrap_or(usize::MAX),
                ib.graded().unwrap_or(usize::MAX),
                ia.ungraded(),
                ib.ungraded(),
                m,
            ));
        }
    }
    let deficit: i64 = exact_neg.iter().map(|(_, m)| *m as i64).sum();
    let work = order + deficit;
    if work < 0 {
        return Ok(RatFunc::zero(n_out));
    }
    let gdeg = |e: &[u32]| -> i64 { e.iter().zip(mask).filter(|(_, &m)| m).map(|(&x, _)| x as i64).sum() };
    let masked = |e: &[u32], w: &[bool]| -> i64 { e.iter().zip(w).filter(|(_, &m)| m).map(|(&x, _)| x as i64).sum() };
    // a window bound on monomials, shifted by the fixed denominators
    // a window bound on monomials, shifted by the fixed denominators; windows
    // that cut a fixed pair or touch an expanded pair are skipped
    let fixed: Vec<(Pair, u32)> = plain.iter().chain(&exact_neg).copied().collect();
    let bounds: Vec<(&[bool], i64)> = windows
        .iter()
        .filter(|(w, _)| fixed.iter().all(|&((i, j), _)| w[i] == w[j]))
        .filter(|(w, _)| expand.iter().all(|&(_, _, ua, ub, _)| !w[ua] && !w[ub]))
        .map(|&(w, b)| {
            let den: i64 = fixed.iter().filter(|((i, _), _)| w[*i]).map(|(_, m)| *m as i64).sum();
            (w, b + den)
        })
        .collect();
    let keep = |e: &[u32]| gdeg(e) <= work && bounds.iter().all(|&(w, b)| masked(e, w) <= b);

    // numerator: prod_a (S_a + U_a)^{e_a}, truncated at graded degree `work`
    let mut cache: BTreeMap<(usize, u32), Poly> = BTreeMap::new();
    let mut num = Poly::zero(n_out);
    for (e, c) in f.numerator().terms() {
        let mut t = Poly::constant(n_out, c.clone());
        for (a, &x) in e.iter().enumerate() {
            if x == 0 {
                continue;
            }
            let p = cache.entry((a, x)).or_insert_with(|| power_of_image(images[a], x, n_out, work, mask));
            t = t.mul_filtered(p, |e| keep(e));
        }
        num = num.add(&t);
    }
    // Expanded factors stay symbolic: a term carries a monomial and, per distinct
    // ungraded pair, the power of `(U_a - U_b)^{-1}`. One normalization at the end.
    let mut slots: Vec<Pair> = Vec::new();
    let mut slot_of = Vec::with_capacity(expand.len());
    for &(_, _, ua, ub, _) in &expand {
        let key = (ua.min(ub), ua.max(ub));
        let i = slots.iter().position(|&p| p == key).unwrap_or_else(|| {
            slots.push(key);
            slots.len() - 1
        });
        slot_of.push((i, ua > ub));
    }
    let ns = slots.len();
    let mut acc: HashMap<(Exponents, Vec<u32>), Q> = num
        .terms()
        .iter()
        .map(|(e, c)| ((e.clone(), vec![0; ns]), c.clone()))
        .collect();
    for (j, &(sa, sb, _, _, m)) in expand.iter().enumerate() {
        let (slot, flipped) = slot_of[j];
        let mut series = symbolic_series(n_out, sa, sb, m, work as u32);
        if flipped {
            for (_, k, c) in series.iter_mut() {
                if (m + *k) % 2 == 1 {
                    *c = -c.clone();
                }
            }
        }
        let mut next: HashMap<(Exponents, Vec<u32>), Q> = HashMap::new();
        for ((e, d), c) in &acc {
            let base = gdeg(e);
            for (se, k, sc) in &series {
                if base + *k as i64 > work {
                    continue;
                }
                let exps: Exponents = e.iter().zip(se).map(|(x, y)| x + y).collect();
                if !keep(&exps) {
                    continue;
                }
                let mut dp = d.clone();
                dp[slot] += m + k;
                let cell = next.entry((exps, dp)).or_insert_with(Q::zero);
                *cell += c * sc;
            }
        }
        next.retain(|_, c| !c.is_zero());
        acc = next;
    }
    // common denominator over the slots
    let mut top = vec![0u32; ns];
    for (_, d) in acc.keys() {
        for (t, &x) in top.iter_mut().zip(d) {
            *t = (*t).max(x);
        }
    }
    let mut groups: HashMap<Vec<u32>, Vec<(Exponents, Q)>> = HashMap::new();
    for ((e, d), c) in acc {
        groups.entry(d).or_default().push((e, c));
    }
    let mut sum: HashMap<Exponents, Q> = HashMap::new();
    for (d, terms) in groups {
        let mut lift = Poly::one(n_out);
        for (&(ua, ub), (&x, &t)) in slots.iter().zip(d.iter().zip(&top)) {
            lift = lift.mul_diff_pow(ua, ub, t - x);
        }
        for (e, c) in &terms {
            for (le, lc) in lift.terms() {
                let exps: Exponents = e.iter().zip(le).map(|(x, y)| x + y).collect();
                *sum.entry(exps).or_insert_with(Q::zero) += c * lc;
            }
        }
    }
    let total = Poly::from_terms(n_out, sum);
    let mut den = plain;
    den.extend(exact_neg);
    den.extend(slots.iter().zip(&top).filter(|(_, &t)| t > 0).map(|(&p, &t)| (p, t)));
    RatFunc::new(total, den)?.truncate_masked(mask, order)
}

/// Terms `(exponents, k, coefficient)` of `sum_k (-1)^k C(m+k-1, k) (S_a - S_b)^k`
/// for `k <= max`; the matching denominator power is `m + k`.
fn symbolic_series(n: usize, sa: usize, sb: usize, m: u32, max: u32) -> Vec<(Exponents, u32, Q)> {
    let mut out = Vec::new();
    for k in 0..=max {
        let mut c = binomial(m + k - 1, k);
        if k % 2 == 1 {
            c = -c;
        }
        match (sa != usize::MAX, sb != usize::MAX) {
            (false, false) => {
                if k == 0 {
                    out.push((vec![0; n], 0, c));
                }
            }
            (true, false) | (false, true) => {
                let (v, sign) = if sa != usize::MAX { (sa, Q::one()) } else { (sb, -Q::one()) };
                let mut e = vec![0; n];
                e[v] = k;
                let s = if k % 2 == 1 { sign } else { Q::one() };
                out.push((e, k, &c * &s));
            }
            (true, true) => {
                for i in 0..=k {
                    let mut e = vec![0; n];
                    e[sa] = k - i;
                    e[sb] = i;
                    let mut b = binomial(k, i);
                    if i % 2 == 1 {
                        b = -b;
                    }
                    out.push((e, k, &c * &b));
                }
            }
        }
    }
    out
}

/// `(S + U)^x` truncated at graded degree `max`.
fn power_of_image(im: VarImage, x: u32, n: usize, max: i64, _mask: &[bool]) -> Poly {
    match im {
        VarImage::Keep(p) => {
            let mut e = vec![0; n];
            e[p] = x;
            Poly::monomial(n, e, Q::one())
        }
        VarImage::Split { s, w } => {
            let mut out = Poly::zero(n);
            for k in 0..=x.min(max.max(0) as u32) {
                let mut e = vec![0; n];
                e[s] = k;
                e[w] += x - k;
                out.add_term(e, binomial(x, k));
            }
            out
        }
    }
}

/// `(S_a - S_b + U_a - U_b)^{-m}` up to graded degree `max`, where a missing
/// graded part is encoded as `usize::MAX`.
fn inverse_power_series(n: usize, sa: usize, sb: usize, ua: usize, ub: usize, m: u32, max: u32) -> RatFunc {
    // sum_k (-1)^k C(m+k-1, k) (S_a - S_b)^k (U_a - U_b)^{-m-k}
    let mut s_diff = Poly::zero(n);
    if sa != usize::MAX {
        s_diff = s_diff.add(&Poly::var(n, sa));
    }
    if sb != usize::MAX {
        s_diff = s_diff.sub(&Poly::var(n, sb));
    }
    let mut out = RatFunc::zero(n);
    let mut s_pow = Poly::one(n);
    for k in 0..=max {
        let mut c = binomial(m + k - 1, k);
        if k % 2 == 1 {
            c = -c;
        }
        let term = RatFunc::new(s_pow.scale(&c), [((ua, ub), m + k)]).expect("distinct ungraded variables");
        out = &out + &term;
        s_pow = s_pow.mul(&s_diff);
    }
    out
}

/// Index bookkeeping for the variables of a truncated tensor.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Layout {
    partition: Vec<usize>,
    offsets: Vec<usize>,
    inner: usize,
}

impl Layout {
    pub fn new(partition: &[usize]) -> Self {
        let mut offsets = Vec::with_capacity(partition.len());
        let mut acc = 0;
        for &m in partition {
            offsets.push(acc);
            acc += m;
        }
        Layout {
            partition: partition.to_vec(),
            offsets,
            inner: acc,
        }
    }

    pub fn partition(&self) -> &[usize] {
        &self.partition
    }

    pub fn n_inner(&self) -> usize {
        self.inner
    }

    pub fn n_outer(&self) -> usize {
        self.partition.len()
    }

    pub fn total(&self) -> usize {
        self.inner + self.partition.len()
    }

    /// Index of `t_{block, j}`.
    pub fn t(&self, block: usize, j: usize) -> usize {
        self.offsets[block] + j
    }

    /// Index of `z_block`.
    pub fn z(&self, block: usize) -> usize {
        self.inner + block
    }

    /// Block of the leaf with flat index `leaf`.
    pub fn block_of(&self, leaf: usize) -> usize {
        self.offsets.iter().rposition(|&o| o <= leaf).unwrap()
    }

    pub fn mask(&self) -> Vec<bool> {
        (0..self.total()).map(|v| v < self.inner).collect()
    }

    /// The structure-map images `z_{ij} -> t_{ij} + z_i` for each leaf.
    pub fn structure_images(&self) -> Vec<VarImage> {
        (0..self.inner)
            .map(|leaf| VarImage::Split {
                s: leaf,
                w: self.z(self.block_of(leaf)),
            })
            .collect()
    }
}

/// A truncation-order-bounded element of `(M(m_1) (x) .. (x) M(m_n)) (x)^ M(n)`.
///
/// Every stored term has `t`-degree at most `order`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncTensor {
    layout: Layout,
    order: i64,
    value: RatFunc,
}

impl TruncTensor {
    /// Wraps and truncates a value over the layout's variables.
    pub fn new(partition: &[usize], order: i64, value: RatFunc) -> Result<Self> {
        let layout = Layout::new(partition);
        if value.n_vars() != layout.total() {
            return Err(Error::VarCountMismatch(value.n_vars(), layout.total()));
        }
        for &(i, j) in value.denominator().keys() {
            let inner_i = i < layout.inner;
            let inner_j = j < layout.inner;
            if inner_i != inner_j || (inner_i && layout.block_of(i) != layout.block_of(j)) {
                return Err(Error::PartitionMismatch(format!(
                    "denominator factor ({}, {}) is not block-internal",
                    i, j
                )));
            }
        }
        let value = value.truncate_masked(&layout.mask(), order)?;
        Ok(TruncTensor { layout, order, value })
    }

    pub fn zero(partition: &[usize], order: i64) -> Self {
        let layout = Layout::new(partition);
        let value = RatFunc::zero(layout.total());
        TruncTensor { layout, order, value }
    }

    pub fn one(partition: &[usize], order: i64) -> Self {
        let layout = Layout::new(partition);
        let value = if order >= 0 { RatFunc::one(layout.total()) } else { RatFunc::zero(layout.total()) };
        TruncTensor { layout, order, value }
    }

    /// `1 (x) .. (x) 1 (x) g`.
    pub fn from_outer(partition: &[usize], order: i64, g: &RatFunc) -> Result<Self> {
        let layout = Layout::new(partition);
        let map: Vec<usize> = (0..layout.n_outer()).map(|i| layout.z(i)).collect();
        TruncTensor::new(partition, order, g.relabel(&map, layout.total())?)
    }

    /// `1 (x) .. f (at block) .. (x) 1`.
    pub fn from_inner(partition: &[usize], order: i64, block: usize, f: &RatFunc) -> Result<Self> {
        let layout = Layout::new(partition);
        if block >= partition.len() || f.n_vars() != partition[block] {
            return Err(Error::PartitionMismatch(format!("inner factor for block {block}")));
        }
        let map: Vec<usize> = (0..partition[block]).map(|j| layout.t(block, j)).collect();
        TruncTensor::new(partition, order, f.relabel(&map, layout.total())?)
    }

    pub fn partition(&self) -> &[usize] {
        &self.layout.partition
    }

    pub fn layout(&self) -> &Layout {
        &self.layout
    }

    pub fn order(&self) -> i64 {
        self.order
    }

    pub fn value(&self) -> &RatFunc {
        &self.value
    }

    pub fn is_zero(&self) -> bool {
        self.value.is_zero()
    }

    /// Components keyed by `t`-degree.
    pub fn components(&self) -> BTreeMap<i64, RatFunc> {
        self.value.masked_components(&self.layout.mask()).expect("bihomogeneous by construction")
    }

    pub fn low_degree(&self) -> Option<i64> {
        self.components().keys().next().copied()
    }

    fn check_partition(&self, other: &TruncTensor) -> Result<()> {
        if self.layout != other.layout {
            return Err(Error::PartitionMismatch(format!(
                "{:?} vs {:?}",
                self.layout.partition, other.layout.partition
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &TruncTensor) -> Result<TruncTensor> {
        self.check_partition(other)?;
        let order = self.order.min(other.order);
        let value = (&self.value + &other.value).truncate_masked(&self.layout.mask(), order)?;
        Ok(TruncTensor {
            layout: self.layout.clone(),
            order,
            value,
        })
    }

    pub fn neg(&self) -> TruncTensor {
        TruncTensor {
            layout: self.layout.clone(),
            order: self.order,
            value: -&self.value,
        }
    }

    pub fn sub(&self, other: &TruncTensor) -> Result<TruncTensor> {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &Q) -> TruncTensor {
        TruncTensor {
            layout: self.layout.clone(),
            order: self.order,
            value: self.value.scale(c),
        }
    }

    /// Product, truncated at the smaller order. When a factor has components of
    /// negative degree the valid order of the product drops accordingly.
    pub fn mul(&self, other: &TruncTensor) -> Result<TruncTensor> {
        self.check_partition(other)?;
        let mut order = self.order.min(other.order);
        if let Some(lo) = other.low_degree() {
            order = order.min(self.order + lo);
        }
        if let Some(lo) = self.low_degree() {
            order = order.min(other.order + lo);
        }
        let value = self.value.mul_truncated(&other.value, &self.layout.mask(), order)?;
        Ok(TruncTensor {
            layout: self.layout.clone(),
            order,
            value,
        })
    }

    pub fn truncate(&self, order: i64) -> TruncTensor {
        let order = order.min(self.order);
        TruncTensor {
            layout: self.layout.clone(),
            order,
            value: self.value.truncate_masked(&self.layout.mask(), order).unwrap(),
        }
    }

    /// True when every component of `t`-degree below `n` agrees.
    pub fn agrees_below(&self, other: &TruncTensor, n: i64) -> Result<bool> {
        self.check_partition(other)?;
        let diff = &self.value - &other.value;
        let comps = diff.masked_components(&self.layout.mask())?;
        Ok(comps.keys().all(|&d| d >= n))
    }

    /// Splits the value into basic tensors `(f_1 (x) .. (x) f_n) (x) g`, grouped by
    /// inner monomial.
    pub fn basic_terms(&self) -> Vec<(Vec<RatFunc>, RatFunc)> {
        let l = &self.layout;
        let total = l.total();
        let mut groups: BTreeMap<Vec<u32>, Poly> = BTreeMap::new();
        for (e, c) in self.value.numerator().terms() {
            let mut outer = vec![0; l.n_outer()];
            outer.copy_from_slice(&e[l.inner..]);
            groups
                .entry(e[..l.inner].to_vec())
                .or_insert_with(|| Poly::zero(l.n_outer()))
                .add_term(outer, c.clone());
        }
        let mut out = Vec::new();
        for (inner_e, outer_num) in groups {
            let mut inner = Vec::new();
            for (b, &m) in l.partition.iter().enumerate() {
                let exps: Vec<u32> = (0..m).map(|j| inner_e[l.t(b, j)]).collect();
                let den: Vec<(Pair, u32)> = self
                    .value
                    .denominator()
                    .iter()
                    .filter(|((i, _), _)| *i < l.inner && l.block_of(*i) == b)
                    .map(|(&(i, j), &k)| ((i - l.offsets[b], j - l.offsets[b]), k))
                    .collect();
                inner.push(RatFunc::new(Poly::monomial(m, exps, Q::one()), den).unwrap());
            }
            let den: Vec<(Pair, u32)> = self
                .value
                .denominator()
                .iter()
                .filter(|((i, _), _)| *i >= l.inner)
                .map(|(&(i, j), &k)| ((i - l.inner, j - l.inner), k))
                .collect();
            out.push((inner, RatFunc::new(outer_num, den).unwrap()));
        }
        debug_assert!(out.iter().all(|(i, _)| i.iter().all(|f| f.n_vars() <= total)));
        out
    }

    pub fn to_json(&self) -> Value {
        let terms: Vec<Value> = self
            .basic_terms()
            .into_iter()
            .map(|(inner, outer)| {
                json!({
                    "inner": inner.iter().map(RatFunc::to_json).collect::<Vec<_>>(),
                    "outer": outer.to_json(),
                })
            })
            .collect();
        json!({ "partition": self.layout.partition, "order": self.order, "terms": terms })
    }

    pub fn from_json(v: &Value, path: &str) -> Result<TruncTensor> {
        let partition: Vec<usize> = v
            .get("partition")
            .and_then(Value::as_array)
            .and_then(|a| a.iter().map(|x| x.as_u64().map(|x| x as usize)).collect())
            .ok_or_else(|| parse_err(format!("{path}.partition"), "expected an array of sizes"))?;
        let order = v
            .get("order")
            .and_then(Value::as_i64)
            .ok_or_else(|| parse_err(format!("{path}.order"), "expected an integer"))?;
        let terms = v
            .get("terms")
            .and_then(Value::as_array)
            .ok_or_else(|| parse_err(format!("{path}.terms"), "expected an array"))?;
        let layout = Layout::new(&partition);
        let mut value = RatFunc::zero(layout.total());
        for (k, t) in terms.iter().enumerate() {
            let p = format!("{path}.terms[{k}]");
            let inner = t
                .get("inner")
                .and_then(Value::as_array)
                .filter(|a| a.len() == partition.len())
                .ok_or_else(|| parse_err(&p, "expected one inner factor per block"))?;
            let outer = t.get("outer").ok_or_else(|| parse_err(&p, "missing outer"))?;
            let mut term = RatFunc::from_json(outer, &format!("{p}.outer"))?
                .relabel(&(0..layout.n_outer()).map(|i| layout.z(i)).collect::<Vec<_>>(), layout.total())?;
            for (b, f) in inner.iter().enumerate() {
                let f = RatFunc::from_json(f, &format!("{p}.inner[{b}]"))?;
                if f.n_vars() != partition[b] {
                    return Err(parse_err(&p, format!("inner factor {b} has wrong variable count")));
                }
                let map: Vec<usize> = (0..partition[b]).map(|j| layout.t(b, j)).collect();
                term = &term * &f.relabel(&map, layout.total())?;
            }
            value = &value + &term;
        }
        TruncTensor::new(&partition, order, value).map_err(|e| parse_err(path, e.to_string()))
    }
}

/// Expansion of `(t_{ij} + z_i - t_{i'j'} - z_{i'})^{-1}` up to `t`-degree `order`.
pub fn expand_inverse(partition: &[usize], a: (usize, usize), b: (usize, usize), order: i64) -> Result<TruncTensor> {
    let layout = Layout::new(partition);
    for &(blk, j) in &[a, b] {
        if blk >= partition.len() || j >= partition[blk] {
            return Err(Error::PartitionMismatch(format!("no variable t_({blk},{j})")));
        }
    }
    if a.0 == b.0 {
        return Err(Error::SameBlock(a.0));
    }
    if order < 0 {
        return Ok(TruncTensor::zero(partition, order));
    }
    let v = inverse_power_series(
        layout.total(),
        layout.t(a.0, a.1),
        layout.t(b.0, b.1),
        layout.z(a.0),
        layout.z(b.0),
        1,
        order as u32,
    );
    TruncTensor::new(partition, order, v)
}

/// The co-operad structure map applied to `f`, exact up to `t`-degree `order`.
pub fn cocompose(f: &RatFunc, partition: &[usize], order: i64) -> Result<TruncTensor> {
    let layout = Layout::new(partition);
    if layout.n_inner() != f.n_vars() || partition.iter().any(|&m| m == 0) {
        return Err(Error::PartitionMismatch(format!(
            "partition {:?} does not split {} variables",
            partition,
            f.n_vars()
        )));
    }
    let v = expand_substitution(f, &layout.structure_images(), layout.total(), &layout.mask(), order)?;
    TruncTensor::new(partition, order, v)
}

/// Co-augmentation `M(n - i) -> M(n)`: old variable `v` goes to slot `positions[v]`.
pub fn coaugment(f: &RatFunc, positions: &[usize], n: usize) -> Result<RatFunc> {
    if positions.len() != f.n_vars() {
        return Err(Error::VarCountMismatch(positions.len(), f.n_vars()));
    }
    f.relabel(positions, n)
}

/// A two-level refinement: `sub_blocks[i]` lists the sub-block sizes inside block `i`.
#[derive(Clone, Debug)]
pub struct Refinement {
    pub sub_blocks: Vec<Vec<usize>>,
}

impl Refinement {
    pub fn block_sizes(&self) -> Vec<usize> {
        self.sub_blocks.iter().map(|b| b.iter().sum()).collect()
    }
    pub fn flat_sub_blocks(&self) -> Vec<usize> {
        self.sub_blocks.iter().flatten().copied().collect()
    }
    pub fn leaves(&self) -> usize {
        self.block_sizes().iter().sum()
    }
}

/// Output of both iterated co-compositions over variables `(s | w | z)`:
/// `s` per leaf, `w` per sub-block, `z` per block.
pub struct IteratedPair {
    pub via_blocks: RatFunc,
    pub via_sub_blocks: RatFunc,
    pub n_leaves: usize,
    pub n_sub_blocks: usize,
}

/// Computes the two iterated co-compositions of `f` along a refinement and
/// restricts both to the window `s`-degree <= `order`, `(s + w)`-degree <= `order`.
pub fn iterated_cocompositions(f: &RatFunc, refinement: &Refinement, order: i64) -> Result<IteratedPair> {
    let blocks = refinement.block_sizes();
    let subs = refinement.flat_sub_blocks();
    let leaves = refinement.leaves();
    let k = subs.len();
    let n = blocks.len();
    let total = leaves + k + n;
    let s_mask: Vec<bool> = (0..total).map(|v| v < leaves).collect();
    let w_mask: Vec<bool> = (0..total).map(|v| v >= leaves && v < leaves + k).collect();
    let sw_mask: Vec<bool> = (0..total).map(|v| v < leaves + k).collect();
    let slack = f.denominator().values().map(|&m| m as i64).sum::<i64>();

    // sub-block index of each leaf, block index of each sub-block
    let mut leaf_sub = Vec::with_capacity(leaves);
    for (sb, &m) in subs.iter().enumerate() {
        leaf_sub.extend(std::iter::repeat(sb).take(m));
    }
    let mut sub_block = Vec::with_capacity(k);
    for (b, s) in refinement.sub_blocks.iter().enumerate() {
        sub_block.extend(std::iter::repeat(b).take(s.len()));
    }

    // Route 1: blocks first, then split each block's t-variables into sub-blocks.
    let first = cocompose(f, &blocks, order)?;
    let images: Vec<VarImage> = (0..leaves)
        .map(|leaf| VarImage::Split {
            s: leaf,
            w: leaves + leaf_sub[leaf],
        })
        .chain((0..n).map(|b| VarImage::Keep(leaves + k + b)))
        .collect();
    let windows: [(&[bool], i64); 2] = [(&s_mask, order), (&sw_mask, order)];
    let via_blocks = expand_windowed(first.value(), &images, total, &s_mask, order, &windows)?;

    // Route 2: sub-blocks first, then split the sub-block coordinates into blocks.
    let second = cocompose(f, &subs, order)?;
    let images: Vec<VarImage> = (0..leaves)
        .map(|leaf| VarImage::Keep(leaf))
        .chain((0..k).map(|sb| VarImage::Split {
            s: leaves + sb,
            w: leaves + k + sub_block[sb],
        }))
        .collect();
    // one t-degree at a time, so each piece carries only its own pole order
    let mut via_sub_blocks = RatFunc::zero(total);
    for (_, g) in second.value().masked_components(&s_mask[..second.value().n_vars()])? {
        via_sub_blocks = &via_sub_blocks + &expand_windowed(&g, &images, total, &w_mask, order + slack, &windows)?;
    }

    let window = |g: &RatFunc| -> Result<RatFunc> { g.truncate_masked(&s_mask, order)?.truncate_masked(&sw_mask, order) };
    Ok(IteratedPair {
        via_blocks: window(&via_blocks)?,
        via_sub_blocks: window(&via_sub_blocks)?,
        n_leaves: leaves,
        n_sub_blocks: k,
    })
}

/// Cocomposing into singleton blocks and keeping the `t`-degree-0 part returns `f`.
pub fn counit_holds(f: &RatFunc, order: i64) -> Result<bool> {
    let n = f.n_vars();
    let t = cocompose(f, &vec![1; n], order)?;
    let zero_part = t.components().remove(&0).unwrap_or_else(|| RatFunc::zero(2 * n));
    let back: Vec<usize> = (0..n).map(|i| n + i).collect();
    Ok(zero_part == f.relabel(&back, 2 * n)?)
}


#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    #[test]
    fn same_block_difference_is_exact() {
        // f = z11 - z12, partition (2)
        let f = &RatFunc::var(2, 0) - &RatFunc::var(2, 1);
        assert!(cocompose(&f, &[2], 0).unwrap().is_zero());
        for n in 1..4 {
            let t = cocompose(&f, &[2], n).unwrap();
            let l = t.layout();
            let expect = &RatFunc::var(3, l.t(0, 0)) - &RatFunc::var(3, l.t(0, 1));
            assert_eq!(t.value(), &expect);
        }
    }

    #[test]
    fn expand_inverse_same_block_is_error() {
        assert!(matches!(expand_inverse(&[2, 1], (0, 0), (0, 1), 2), Err(Error::SameBlock(0))));
    }

    #[test]
    fn truncate_to_zero_keeps_leading_term() {
        let e = expand_inverse(&[1, 1], (0, 0), (1, 0), 2).unwrap();
        let lead = e.truncate(0);
        let expect = RatFunc::diff_pow(4, 2, 3, -1).unwrap();
        assert_eq!(lead.value(), &expect);
        assert_eq!(lead.order(), 0);
    }

    #[test]
    fn multiplicative_unit() {
        let e = expand_inverse(&[1, 1], (0, 0), (1, 0), 3).unwrap();
        let one = TruncTensor::one(&[1, 1], 3);
        assert_eq!(e.mul(&one).unwrap(), e);
    }

    #[test]
    fn coaugmentation() {
        let c = RatFunc::constant(0, q(5));
        assert_eq!(coaugment(&c, &[], 3).unwrap(), RatFunc::constant(3, q(5)));
        let f = RatFunc::diff_pow(2, 0, 1, -1).unwrap();
        assert_eq!(coaugment(&f, &[1, 2], 3).unwrap(), RatFunc::diff_pow(3, 1, 2, -1).unwrap());
        assert!(matches!(coaugment(&f, &[1, 1], 3), Err(Error::NonInjective)));
    }

    #[test]
    fn partition_mismatch() {
        let f = RatFunc::var(3, 0);
        assert!(matches!(cocompose(&f, &[1, 1], 1), Err(Error::PartitionMismatch(_))));
    }

    #[test]
    fn json_round_trip() {
        let f = &RatFunc::diff_pow(3, 0, 1, -1).unwrap() * &RatFunc::diff_pow(3, 1, 2, -2).unwrap();
        let t = cocompose(&f, &[2, 1], 2).unwrap();
        let v = t.to_json();
        let back = TruncTensor::from_json(&v, "$").unwrap();
        assert_eq!(back, t);
        assert_eq!(back.to_json().to_string(), v.to_string());
    }

    fn t(l: &Layout, b: usize, j: usize) -> RatFunc {
        RatFunc::var(l.total(), l.t(b, j))
    }
    fn z(l: &Layout, b: usize) -> RatFunc {
        RatFunc::var(l.total(), l.z(b))
    }

    #[test]
    fn inverse_expansion_orders_zero_and_one() {
        let p = [1, 1];
        let l = Layout::new(&p);
        let inv_z = RatFunc::diff_pow(l.total(), l.z(0), l.z(1), -1).unwrap();
        let e0 = expand_inverse(&p, (0, 0), (1, 0), 0).unwrap();
        assert_eq!(e0.value(), &inv_z);
        let e1 = expand_inverse(&p, (0, 0), (1, 0), 1).unwrap();
        let dt = &t(&l, 0, 0) - &t(&l, 1, 0);
        let expect = &inv_z - &(&dt * &inv_z.pow(2));
        assert_eq!(e1.value(), &expect);
    }

    #[test]
    fn expansion_inverts_the_difference() {
        let p = [1, 1];
        let l = Layout::new(&p);
        let n = 3;
        let e = expand_inverse(&p, (0, 0), (1, 0), n).unwrap();
        let d = &(&t(&l, 0, 0) + &z(&l, 0)) - &(&t(&l, 1, 0) + &z(&l, 1));
        let d = TruncTensor::new(&p, n, d).unwrap();
        assert_eq!(e.mul(&d).unwrap(), TruncTensor::one(&p, n));
    }

    #[test]
    fn cocompose_inverse_difference_matches_expansion() {
        let f = RatFunc::diff_pow(3, 0, 2, -1).unwrap();
        for n in 0..4 {
            let c = cocompose(&f, &[2, 1], n).unwrap();
            assert_eq!(c, expand_inverse(&[2, 1], (0, 0), (1, 0), n).unwrap());
        }
    }

    #[test]
    fn cocomposition_is_multiplicative() {
        let n = 3;
        let p = [2, 2];
        let f = RatFunc::diff_pow(4, 0, 2, -1).unwrap();
        let g = &RatFunc::diff_pow(4, 1, 3, -2).unwrap() * &RatFunc::diff_pow(4, 0, 1, -1).unwrap();
        let fg = cocompose(&(&f * &g), &p, n).unwrap();
        let prod = cocompose(&f, &p, n + 3).unwrap().mul(&cocompose(&g, &p, n + 3).unwrap()).unwrap();
        assert!(prod.order() >= n);
        assert_eq!(fg, prod.truncate(n));
    }

    #[test]
    fn counit() {
        let f = &RatFunc::diff_pow(3, 0, 1, -2).unwrap() * &(&RatFunc::var(3, 2) + &RatFunc::var(3, 0));
        for n in 0..3 {
            assert!(counit_holds(&f, n).unwrap());
        }
    }

    #[test]
    fn grading_is_preserved() {
        // a homogeneous input of degree d gives total degree d in every piece
        let f = &RatFunc::diff_pow(4, 0, 3, -1).unwrap() * &RatFunc::diff_pow(4, 1, 2, -1).unwrap();
        let c = cocompose(&f, &[2, 2], 2).unwrap();
        assert_eq!(c.value().degree(), Some(-2));
        for (k, comp) in c.components() {
            assert!(k <= 2);
            assert_eq!(comp.degree(), Some(-2));
        }
    }

    #[test]
    fn coassociativity() {
        let f = &RatFunc::diff_pow(4, 0, 2, -1).unwrap() * &RatFunc::diff_pow(4, 1, 3, -1).unwrap();
        let r = Refinement {
            sub_blocks: vec![vec![1, 1], vec![2]],
        };
        for n in 0..3 {
            let pair = iterated_cocompositions(&f, &r, n).unwrap();
            assert_eq!(pair.via_blocks, pair.via_sub_blocks, "order {n}");
            assert!(!pair.via_blocks.is_zero());
        }
    }
}
