//! The graded ring of rational functions on ordered configuration space.
//!
//! An element is a polynomial numerator over a product of diagonal factors
//! `(z_i - z_j)^m` with `i < j`. The canonical form has no denominator factor
//! dividing the numerator; equality is structural equality of canonical forms.
//!
//! Grading: `deg f = k` when `f(lz) = l^k f(z)` (total degree). The analytic
//! convention that assigns degree `-k` instead is exposed only through
//! [`crate::conventions::DEGREE_SIGN`].

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use num_traits::{One, Zero};
use serde_json::{json, Value};

use crate::error::{parse_err, Error, Result};
use crate::poly::{Exponents, Poly};
use crate::rational::{parse_q, q_to_string, Q};

pub type Pair = (usize, usize);

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RatFunc {
    num: Poly,
    den: BTreeMap<Pair, u32>,
}

fn check_pair(n: usize, i: usize, j: usize) -> Result<()> {
    for x in [i, j] {
        if x >= n {
            return Err(Error::IndexOutOfRange { index: x, n });
        }
    }
    if i == j {
        return Err(Error::Pole(i, j));
    }
    Ok(())
}

impl RatFunc {
    /// Builds and normalizes `num / prod (z_i - z_j)^m`.
    ///
    /// Pairs with `i > j` are accepted and reoriented (each flip contributes a sign).
    pub fn new(num: Poly, den: impl IntoIterator<Item = (Pair, u32)>) -> Result<Self> {
        let n = num.n_vars();
        let mut num = num;
        let mut d: BTreeMap<Pair, u32> = BTreeMap::new();
        for ((i, j), m) in den {
            check_pair(n, i, j)?;
            let key = if i < j {
                (i, j)
            } else {
                if m % 2 == 1 {
                    num = num.neg();
                }
                (j, i)
            };
            *d.entry(key).or_insert(0) += m;
        }
        Ok(RatFunc::from_parts(num, d))
    }

    fn from_parts(num: Poly, den: BTreeMap<Pair, u32>) -> Self {
        let mut r = RatFunc { num, den };
        r.normalize();
        r
    }

    fn normalize(&mut self) {
        if self.num.is_zero() {
            self.den.clear();
            return;
        }
        let pairs: Vec<Pair> = self.den.keys().copied().collect();
        for (i, j) in pairs {
            let m = self.den.get_mut(&(i, j)).unwrap();
            while *m > 0 {
                match self.num.div_diff(i, j) {
                    Some(q) => {
                        self.num = q;
                        *m -= 1;
                    }
                    None => break,
                }
            }
        }
        self.den.retain(|_, m| *m > 0);
    }

    pub fn zero(n: usize) -> Self {
        RatFunc {
            num: Poly::zero(n),
            den: BTreeMap::new(),
        }
    }

    pub fn one(n: usize) -> Self {
        RatFunc::constant(n, Q::one())
    }

    pub fn constant(n: usize, c: Q) -> Self {
        RatFunc {
            num: Poly::constant(n, c),
            den: BTreeMap::new(),
        }
    }

    pub fn from_poly(p: Poly) -> Self {
        RatFunc {
            num: p,
            den: BTreeMap::new(),
        }
    }

    pub fn var(n: usize, i: usize) -> Self {
        RatFunc::from_poly(Poly::var(n, i))
    }

    /// `(z_i - z_j)^e` for any integer `e`.
    pub fn diff_pow(n: usize, i: usize, j: usize, e: i64) -> Result<Self> {
        check_pair(n, i, j)?;
        if e >= 0 {
            Ok(RatFunc::from_poly(Poly::one(n).mul_diff_pow(i, j, e as u32)))
        } else {
            RatFunc::new(Poly::one(n), [((i, j), (-e) as u32)])
        }
    }

    /// `d log(z_i - z_j)` coefficient along `z_k`.
    pub fn dlog_coeff(n: usize, i: usize, j: usize, k: usize) -> Result<Self> {
        let inv = RatFunc::diff_pow(n, i, j, -1)?;
        Ok(if k == i {
            inv
        } else if k == j {
            -inv
        } else {
            RatFunc::zero(n)
        })
    }

    pub fn n_vars(&self) -> usize {
        self.num.n_vars()
    }

    pub fn numerator(&self) -> &Poly {
        &self.num
    }

    pub fn denominator(&self) -> &BTreeMap<Pair, u32> {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.den.is_empty() && self.num.as_constant().map_or(false, |c| c.is_one())
    }

    pub fn as_constant(&self) -> Option<Q> {
        if self.den.is_empty() {
            self.num.as_constant()
        } else {
            None
        }
    }

    pub fn coefficients(&self) -> impl Iterator<Item = &Q> {
        self.num.coefficients()
    }

    fn same_n(&self, other: &RatFunc) -> Result<()> {
        if self.n_vars() != other.n_vars() {
            return Err(Error::VarCountMismatch(self.n_vars(), other.n_vars()));
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &RatFunc) -> Result<RatFunc> {
        self.same_n(other)?;
        if self.is_zero() {
            return Ok(other.clone());
        }
        if other.is_zero() {
            return Ok(self.clone());
        }
        let mut den = self.den.clone();
        for (k, &m) in &other.den {
            let e = den.entry(*k).or_insert(0);
            *e = (*e).max(m);
        }
        let lift = |f: &RatFunc| {
            let mut p = f.num.clone();
            for (&(i, j), &m) in &den {
                let have = f.den.get(&(i, j)).copied().unwrap_or(0);
                p = p.mul_diff_pow(i, j, m - have);
            }
            p
        };
        let num = lift(self).add(&lift(other));
        Ok(RatFunc::from_parts(num, den))
    }

    pub fn checked_mul(&self, other: &RatFunc) -> Result<RatFunc> {
        self.same_n(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(RatFunc::zero(self.n_vars()));
        }
        let mut den = self.den.clone();
        for (k, &m) in &other.den {
            *den.entry(*k).or_insert(0) += m;
        }
        Ok(RatFunc::from_parts(self.num.mul(&other.num), den))
    }

    pub fn scale(&self, c: &Q) -> RatFunc {
        if c.is_zero() {
            return RatFunc::zero(self.n_vars());
        }
        RatFunc {
            num: self.num.scale(c),
            den: self.den.clone(),
        }
    }

    pub fn pow(&self, k: u32) -> RatFunc {
        let mut acc = RatFunc::one(self.n_vars());
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// Exact partial derivative along `z_i`.
    pub fn partial(&self, i: usize) -> Result<RatFunc> {
        let n = self.n_vars();
        if i >= n {
            return Err(Error::IndexOutOfRange { index: i, n });
        }
        // d(P/D) = P'/D - P/D * sum m_ab (d_ia - d_ib) / (z_a - z_b)
        let mut out = RatFunc {
            num: self.num.partial(i),
            den: self.den.clone(),
        };
        out.normalize();
        for (&(a, b), &m) in &self.den {
            let sign = if a == i {
                1
            } else if b == i {
                -1
            } else {
                continue;
            };
            let mut den = self.den.clone();
            *den.get_mut(&(a, b)).unwrap() += 1;
            let term = RatFunc::from_parts(self.num.scale(&Q::from_integer((-(sign * m as i64)).into())), den);
            out = &out + &term;
        }
        Ok(out)
    }

    /// The Euler operator `sum_i z_i d_i f`.
    pub fn euler(&self) -> RatFunc {
        let n = self.n_vars();
        let mut acc = RatFunc::zero(n);
        for i in 0..n {
            acc = &acc + &(&RatFunc::var(n, i) * &self.partial(i).expect("index in range"));
        }
        acc
    }

    /// Grading degree, if the function is homogeneous. Zero has no degree.
    pub fn degree(&self) -> Option<i64> {
        let (lo, hi) = self.num.total_degree_range()?;
        (lo == hi).then(|| lo as i64 - self.den_degree())
    }

    fn den_degree(&self) -> i64 {
        self.den.values().map(|&m| m as i64).sum()
    }

    /// Decomposition into homogeneous components, keyed by degree.
    pub fn homogeneous_components(&self) -> BTreeMap<i64, RatFunc> {
        let dd = self.den_degree();
        self.num
            .homogeneous_components()
            .into_iter()
            .map(|(d, p)| (d as i64 - dd, RatFunc::from_parts(p, self.den.clone())))
            .collect()
    }

    /// Solves `sum z_i d_i f = k f` for a scalar `k` by comparing one coefficient,
    /// then confirms the identity exactly. Independent of [`RatFunc::degree`].
    pub fn euler_degree(&self) -> Result<Option<Q>> {
        if self.is_zero() {
            return Err(Error::UndefinedDegree);
        }
        let e = self.euler();
        if e.is_zero() {
            return Ok(Some(Q::zero()));
        }
        // Both sides over the common denominator of f.
        let lifted = {
            let mut p = e.num.clone();
            let mut den = e.den.clone();
            for (&(i, j), &m) in &self.den {
                let have = den.get(&(i, j)).copied().unwrap_or(0);
                if m > have {
                    p = p.mul_diff_pow(i, j, m - have);
                    den.insert((i, j), m);
                }
            }
            (p, den)
        };
        if lifted.1 != self.den {
            return Ok(None);
        }
        let (lead_e, lead_c) = self.num.terms().iter().next().unwrap();
        let k = match lifted.0.terms().get(lead_e) {
            Some(c) => c / lead_c,
            None => return Ok(None),
        };
        Ok((e == self.scale(&k)).then_some(k))
    }

    /// Returns `(c, exponents)` if this is a unit `c * prod (z_i - z_j)^e`.
    pub fn as_unit(&self) -> Option<(Q, BTreeMap<Pair, i64>)> {
        if self.is_zero() {
            return None;
        }
        let n = self.n_vars();
        let mut num = self.num.clone();
        let mut exps: BTreeMap<Pair, i64> = self.den.iter().map(|(&k, &m)| (k, -(m as i64))).collect();
        for i in 0..n {
            for j in i + 1..n {
                while let Some(q) = num.div_diff(i, j) {
                    num = q;
                    *exps.entry((i, j)).or_insert(0) += 1;
                }
            }
        }
        exps.retain(|_, e| *e != 0);
        let c = num.as_constant()?;
        Some((c, exps))
    }

    pub fn is_unit(&self) -> bool {
        self.as_unit().is_some()
    }

    /// Multiplicative inverse; only units of the ring are invertible.
    pub fn inverse(&self) -> Option<RatFunc> {
        let (c, exps) = self.as_unit()?;
        let n = self.n_vars();
        let mut acc = RatFunc::constant(n, Q::one() / c);
        for ((i, j), e) in exps {
            acc = &acc * &RatFunc::diff_pow(n, i, j, -e).ok()?;
        }
        Some(acc)
    }

    /// Relabels variables injectively into a space of `m` variables.
    pub fn relabel(&self, map: &[usize], m: usize) -> Result<RatFunc> {
        if map.len() != self.n_vars() {
            return Err(Error::VarCountMismatch(map.len(), self.n_vars()));
        }
        let mut seen = vec![false; m];
        for &v in map {
            if v >= m {
                return Err(Error::IndexOutOfRange { index: v, n: m });
            }
            if std::mem::replace(&mut seen[v], true) {
                return Err(Error::NonInjective);
            }
        }
        let num = self.num.relabel(map, m);
        let den: Vec<(Pair, u32)> = self.den.iter().map(|(&(i, j), &e)| ((map[i], map[j]), e)).collect();
        RatFunc::new(num, den)
    }

    /// Substitutes `z_v := images[v]`; every diagonal factor must map to a unit.
    pub fn subst(&self, images: &[RatFunc]) -> Result<RatFunc> {
        if images.len() != self.n_vars() {
            return Err(Error::VarCountMismatch(images.len(), self.n_vars()));
        }
        let m = match images.first() {
            Some(f) => f.n_vars(),
            None => return Ok(self.clone()),
        };
        if images.iter().any(|f| f.n_vars() != m) {
            return Err(Error::UnsupportedSubstitution("images over different variable counts".into()));
        }
        let mut powers: Vec<Vec<RatFunc>> = images.iter().map(|f| vec![RatFunc::one(m), f.clone()]).collect();
        let mut acc = RatFunc::zero(m);
        for (e, c) in self.num.terms() {
            let mut t = RatFunc::constant(m, c.clone());
            for (v, &x) in e.iter().enumerate() {
                let x = x as usize;
                while powers[v].len() <= x {
                    let next = &powers[v][powers[v].len() - 1] * &images[v];
                    powers[v].push(next);
                }
                t = &t * &powers[v][x];
            }
            acc = &acc + &t;
        }
        for (&(i, j), &e) in &self.den {
            let d = &images[i] - &images[j];
            if d.is_zero() {
                return Err(Error::UnsupportedSubstitution(format!(
                    "factor (z{} - z{}) maps to zero",
                    i + 1,
                    j + 1
                )));
            }
            let inv = d.inverse().ok_or_else(|| {
                Error::UnsupportedSubstitution(format!(
                    "factor (z{} - z{}) maps to a non-unit {}",
                    i + 1,
                    j + 1,
                    d
                ))
            })?;
            acc = &acc * &inv.pow(e);
        }
        Ok(acc)
    }

    pub fn eval(&self, point: &[Complex64]) -> Result<Complex64> {
        if point.len() != self.n_vars() {
            return Err(Error::VarCountMismatch(point.len(), self.n_vars()));
        }
        let mut den = Complex64::new(1.0, 0.0);
        for (&(i, j), &m) in &self.den {
            let d = point[i] - point[j];
            if d == Complex64::new(0.0, 0.0) {
                return Err(Error::Pole(i, j));
            }
            den *= d.powu(m);
        }
        Ok(self.num.eval_c64(point) / den)
    }

    // ---- degree bookkeeping with respect to a subset of variables ----

    fn check_mask(&self, mask: &[bool]) -> Result<()> {
        if mask.len() != self.n_vars() {
            return Err(Error::VarCountMismatch(mask.len(), self.n_vars()));
        }
        for &(i, j) in self.den.keys() {
            if mask[i] != mask[j] {
                return Err(Error::UnsupportedSubstitution(format!(
                    "factor (z{} - z{}) mixes graded and ungraded variables",
                    i + 1,
                    j + 1
                )));
            }
        }
        Ok(())
    }

    fn masked_den_degree(&self, mask: &[bool]) -> i64 {
        self.den.iter().filter(|((i, _), _)| mask[*i]).map(|(_, &m)| m as i64).sum()
    }

    /// Keeps the part of degree at most `max` in the masked variables.
    pub fn truncate_masked(&self, mask: &[bool], max: i64) -> Result<RatFunc> {
        self.check_mask(mask)?;
        let dd = self.masked_den_degree(mask);
        let keep = |e: &[u32]| masked_sum(e, mask) - dd <= max;
        Ok(RatFunc::from_parts(self.num.filter(keep), self.den.clone()))
    }

    /// Components by degree in the masked variables.
    pub fn masked_components(&self, mask: &[bool]) -> Result<BTreeMap<i64, RatFunc>> {
        self.check_mask(mask)?;
        let dd = self.masked_den_degree(mask);
        let mut parts: BTreeMap<i64, Vec<(Exponents, Q)>> = BTreeMap::new();
        for (e, c) in self.num.terms() {
            parts.entry(masked_sum(e, mask) - dd).or_default().push((e.clone(), c.clone()));
        }
        let n = self.n_vars();
        Ok(parts
            .into_iter()
            .map(|(d, ts)| (d, RatFunc::from_parts(Poly::from_terms(n, ts), self.den.clone())))
            .filter(|(_, f)| !f.is_zero())
            .collect())
    }

    /// Product dropping everything of masked degree above `max`.
    pub fn mul_truncated(&self, other: &RatFunc, mask: &[bool], max: i64) -> Result<RatFunc> {
        self.same_n(other)?;
        self.check_mask(mask)?;
        other.check_mask(mask)?;
        let dd = self.masked_den_degree(mask) + other.masked_den_degree(mask);
        let num = self.num.mul_filtered(&other.num, |e| masked_sum(e, mask) - dd <= max);
        let mut den = self.den.clone();
        for (k, &m) in &other.den {
            *den.entry(*k).or_insert(0) += m;
        }
        Ok(RatFunc::from_parts(num, den))
    }

    pub fn to_json(&self) -> Value {
        let num: Vec<Value> = self
            .num
            .terms()
            .iter()
            .map(|(e, c)| json!([q_to_string(c), e]))
            .collect();
        let den: Vec<Value> = self.den.iter().map(|(&(i, j), &m)| json!([i, j, m])).collect();
        json!({ "n": self.n_vars(), "num": num, "den": den })
    }

    pub fn from_json(v: &Value, path: &str) -> Result<RatFunc> {
        let obj = v.as_object().ok_or_else(|| parse_err(path, "expected an object"))?;
        let n = obj
            .get("n")
            .and_then(Value::as_u64)
            .ok_or_else(|| parse_err(format!("{path}.n"), "expected a nonnegative integer"))? as usize;
        let mut num = Poly::zero(n);
        let terms = obj
            .get("num")
            .and_then(Value::as_array)
            .ok_or_else(|| parse_err(format!("{path}.num"), "expected an array"))?;
        for (t, term) in terms.iter().enumerate() {
            let p = format!("{path}.num[{t}]");
            let arr = term.as_array().filter(|a| a.len() == 2).ok_or_else(|| parse_err(&p, "expected [coef, exps]"))?;
            let c = arr[0].as_str().ok_or_else(|| parse_err(&p, "coefficient must be a string"))?;
            let c = parse_q(c).map_err(|_| parse_err(&p, format!("bad rational {c:?}")))?;
            let exps: Option<Vec<u32>> = arr[1]
                .as_array()
                .map(|a| a.iter().map(|x| x.as_u64().map(|x| x as u32)).collect())
                .unwrap_or(None);
            let exps = exps.filter(|e| e.len() == n).ok_or_else(|| parse_err(&p, format!("expected {n} exponents")))?;
            num.add_term(exps, c);
        }
        let mut den = Vec::new();
        let dens = obj
            .get("den")
            .and_then(Value::as_array)
            .ok_or_else(|| parse_err(format!("{path}.den"), "expected an array"))?;
        for (t, d) in dens.iter().enumerate() {
            let p = format!("{path}.den[{t}]");
            let arr: Option<Vec<u64>> = d.as_array().map(|a| a.iter().map(Value::as_u64).collect()).unwrap_or(None);
            let arr = arr.filter(|a| a.len() == 3).ok_or_else(|| parse_err(&p, "expected [i, j, m]"))?;
            let (i, j) = (arr[0] as usize, arr[1] as usize);
            if i >= j || j >= n {
                return Err(parse_err(&p, "expected 0 <= i < j < n"));
            }
            den.push(((i, j), arr[2] as u32));
        }
        RatFunc::new(num, den).map_err(|e| parse_err(path, e.to_string()))
    }
}

fn masked_sum(e: &[u32], mask: &[bool]) -> i64 {
    e.iter().zip(mask).filter(|(_, &m)| m).map(|(&x, _)| x as i64).sum()
}

impl<'a> Add<&'a RatFunc> for &'a RatFunc {
    type Output = RatFunc;
    fn add(self, rhs: &RatFunc) -> RatFunc {
        self.checked_add(rhs).expect("RatFunc add: variable count mismatch")
    }
}

impl<'a> Sub<&'a RatFunc> for &'a RatFunc {
    type Output = RatFunc;
    fn sub(self, rhs: &RatFunc) -> RatFunc {
        self.checked_add(&-rhs).expect("RatFunc sub: variable count mismatch")
    }
}

impl<'a> Mul<&'a RatFunc> for &'a RatFunc {
    type Output = RatFunc;
    fn mul(self, rhs: &RatFunc) -> RatFunc {
        self.checked_mul(rhs).expect("RatFunc mul: variable count mismatch")
    }
}

impl Neg for &RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        RatFunc {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }
}

impl Neg for RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        -&self
    }
}

fn fmt_poly(p: &Poly, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if p.is_zero() {
        return write!(f, "0");
    }
    let mut first = true;
    for (e, c) in p.terms().iter().rev() {
        let s = q_to_string(c);
        let (neg, s) = match s.strip_prefix('-') {
            Some(r) => (true, r.to_string()),
            None => (false, s),
        };
        if first {
            if neg {
                write!(f, "-")?;
            }
        } else {
            write!(f, " {} ", if neg { "-" } else { "+" })?;
        }
        first = false;
        let mono: Vec<String> = e
            .iter()
            .enumerate()
            .filter(|(_, &x)| x > 0)
            .map(|(v, &x)| if x == 1 { format!("z{v}") } else { format!("z{v}^{x}") })
            .collect();
        match (s.as_str(), mono.is_empty()) {
            (_, true) => write!(f, "{s}")?,
            ("1", false) => write!(f, "{}", mono.join("*"))?,
            (_, false) => write!(f, "{s}*{}", mono.join("*"))?,
        }
    }
    Ok(())
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_empty() {
            return fmt_poly(&self.num, f);
        }
        write!(f, "(")?;
        fmt_poly(&self.num, f)?;
        write!(f, ")/(")?;
        let parts: Vec<String> = self
            .den
            .iter()
            .map(|(&(i, j), &m)| {
                if m == 1 {
                    format!("(z{i}-z{j})")
                } else {
                    format!("(z{i}-z{j})^{m}")
                }
            })
            .collect();
        write!(f, "{})", parts.join("*"))
    }
}

/// An element of the module of Kähler differentials: coefficients of `dz_0..dz_{n-1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OneForm {
    components: Vec<RatFunc>,
}

impl OneForm {
    pub fn new(components: Vec<RatFunc>) -> Result<Self> {
        let n = components.len();
        if let Some(f) = components.iter().find(|f| f.n_vars() != n) {
            return Err(Error::VarCountMismatch(f.n_vars(), n));
        }
        Ok(OneForm { components })
    }

    /// The universal differential `df`.
    pub fn differential(f: &RatFunc) -> OneForm {
        OneForm {
            components: (0..f.n_vars()).map(|i| f.partial(i).unwrap()).collect(),
        }
    }

    pub fn components(&self) -> &[RatFunc] {
        &self.components
    }

    /// Contraction with the Euler vector field, `sum z_i a_i`.
    pub fn euler_contraction(&self) -> RatFunc {
        let n = self.components.len();
        self.components
            .iter()
            .enumerate()
            .fold(RatFunc::zero(n), |acc, (i, a)| &acc + &(&RatFunc::var(n, i) * a))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{q, qf};

    fn z(n: usize, i: usize) -> RatFunc {
        RatFunc::var(n, i)
    }

    #[test]
    fn inverse_pair_cancels() {
        let d = &z(2, 0) - &z(2, 1);
        let inv = RatFunc::diff_pow(2, 0, 1, -1).unwrap();
        assert!((&d * &inv).is_one());
        assert_eq!(&d + &RatFunc::zero(2), d);
        assert_eq!((&z(2, 0) * &z(2, 1)).degree(), Some(2));
    }

    #[test]
    fn mismatched_vars_error() {
        assert!(matches!(z(2, 0).checked_add(&z(3, 0)), Err(Error::VarCountMismatch(2, 3))));
        assert!(z(2, 0).partial(2).is_err());
    }

    #[test]
    fn partial_derivatives() {
        let inv = RatFunc::diff_pow(2, 0, 1, -1).unwrap();
        assert_eq!(inv.partial(0).unwrap(), -RatFunc::diff_pow(2, 0, 1, -2).unwrap());
        assert!(RatFunc::constant(2, q(3)).partial(0).unwrap().is_zero());
        assert_eq!((&z(2, 0) * &z(2, 1)).partial(1).unwrap(), z(2, 0));
    }

    #[test]
    fn euler_degrees() {
        let inv = RatFunc::diff_pow(2, 0, 1, -1).unwrap();
        assert_eq!(inv.euler_degree().unwrap(), Some(q(-1)));
        let f = &(&z(2, 0) * &z(2, 0)) * &z(2, 1);
        assert_eq!(f.euler_degree().unwrap(), Some(q(3)));
        let g = &z(2, 0) + &(&z(2, 0) * &z(2, 1));
        assert_eq!(g.euler_degree().unwrap(), None);
        assert_eq!(g.degree(), None);
        assert!(matches!(RatFunc::zero(2).euler_degree(), Err(Error::UndefinedDegree)));
    }

    #[test]
    fn substitutions() {
        let inv = RatFunc::diff_pow(2, 0, 1, -1).unwrap();
        // swap
        assert_eq!(inv.subst(&[z(2, 1), z(2, 0)]).unwrap(), -&inv);
        assert_eq!(inv.relabel(&[1, 0], 2).unwrap(), -&inv);
        // translation by a constant
        let c = RatFunc::constant(2, qf(7, 3));
        assert_eq!(inv.subst(&[&z(2, 0) + &c, &z(2, 1) + &c]).unwrap(), inv);
        // relabel z1 -> z2
        assert_eq!(z(1, 0).relabel(&[1], 2).unwrap(), z(2, 1));
        // off-diagonal pole
        let bad = inv.subst(&[z(2, 0), RatFunc::zero(2)]);
        assert!(matches!(bad, Err(Error::UnsupportedSubstitution(_))));
    }

    #[test]
    fn evaluation() {
        let inv = RatFunc::diff_pow(2, 0, 1, -1).unwrap();
        let p = [Complex64::new(2.0, 0.0), Complex64::new(1.0, 0.0)];
        assert_eq!(inv.eval(&p).unwrap(), Complex64::new(1.0, 0.0));
        let p = [Complex64::new(2.0, 0.0), Complex64::new(3.0, 0.0)];
        assert_eq!((&z(2, 0) * &z(2, 1)).eval(&p).unwrap(), Complex64::new(6.0, 0.0));
        let p = [Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0)];
        assert!(matches!(inv.eval(&p), Err(Error::Pole(0, 1))));
    }

    #[test]
    fn units_and_inverses() {
        let u = &RatFunc::diff_pow(3, 0, 1, 2).unwrap() * &RatFunc::diff_pow(3, 1, 2, -1).unwrap();
        let u = u.scale(&q(-3));
        assert!((&u * &u.inverse().unwrap()).is_one());
        assert!(z(2, 0).inverse().is_none());
    }

    #[test]
    fn json_round_trip() {
        let f = &RatFunc::diff_pow(3, 0, 2, -2).unwrap() * &(&z(3, 1) + &RatFunc::constant(3, qf(1, 2)));
        let v = f.to_json();
        let g = RatFunc::from_json(&v, "$").unwrap();
        assert_eq!(f, g);
        assert_eq!(v.to_string(), g.to_json().to_string());
    }
}
