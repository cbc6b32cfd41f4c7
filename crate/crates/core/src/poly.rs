//! Sparse multivariate polynomials with exact rational coefficients.
//!
//! Terms are kept in a `BTreeMap` keyed by exponent vectors so iteration order,
//! and therefore every printed or serialized form, is deterministic.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::rational::{binomial, Q};

pub type Exponents = Vec<u32>;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Poly {
    n: usize,
    terms: BTreeMap<Exponents, Q>,
}

impl Poly {
    pub fn zero(n: usize) -> Self {
        Poly {
            n,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(n: usize, c: Q) -> Self {
        let mut p = Poly::zero(n);
        if !c.is_zero() {
            p.terms.insert(vec![0; n], c);
        }
        p
    }

    pub fn one(n: usize) -> Self {
        Poly::constant(n, Q::one())
    }

    pub fn var(n: usize, i: usize) -> Self {
        let mut e = vec![0; n];
        e[i] = 1;
        Poly::monomial(n, e, Q::one())
    }

    pub fn monomial(n: usize, exps: Exponents, c: Q) -> Self {
        debug_assert_eq!(exps.len(), n);
        let mut p = Poly::zero(n);
        if !c.is_zero() {
            p.terms.insert(exps, c);
        }
        p
    }

    /// `z_i - z_j`
    pub fn diff(n: usize, i: usize, j: usize) -> Self {
        let mut p = Poly::var(n, i);
        p.add_term(
            {
                let mut e = vec![0; n];
                e[j] = 1;
                e
            },
            -Q::one(),
        );
        p
    }

    pub fn from_terms(n: usize, terms: impl IntoIterator<Item = (Exponents, Q)>) -> Self {
        let mut p = Poly::zero(n);
        for (e, c) in terms {
            p.add_term(e, c);
        }
        p
    }

    pub fn n_vars(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> &BTreeMap<Exponents, Q> {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// The constant value, if this polynomial has no non-constant terms.
    pub fn as_constant(&self) -> Option<Q> {
        match self.terms.len() {
            0 => Some(Q::zero()),
            1 => {
                let (e, c) = self.terms.iter().next().unwrap();
                e.iter().all(|&x| x == 0).then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn add_term(&mut self, exps: Exponents, c: Q) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(exps) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add(&self, other: &Poly) -> Poly {
        debug_assert_eq!(self.n, other.n);
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Poly {
        Poly {
            n: self.n,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }

    pub fn scale(&self, s: &Q) -> Poly {
        if s.is_zero() {
            return Poly::zero(self.n);
        }
        Poly {
            n: self.n,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), c * s)).collect(),
        }
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        self.mul_filtered(other, |_| true)
    }

    /// Product keeping only monomials accepted by `keep`.
    pub fn mul_filtered(&self, other: &Poly, keep: impl Fn(&[u32]) -> bool) -> Poly {
        debug_assert_eq!(self.n, other.n);
        let mut out = Poly::zero(self.n);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e: Exponents = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                if keep(&e) {
                    out.add_term(e, ca * cb);
                }
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> Poly {
        let mut acc = Poly::one(self.n);
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn filter(&self, keep: impl Fn(&[u32]) -> bool) -> Poly {
        Poly {
            n: self.n,
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| keep(e))
                .map(|(e, c)| (e.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn total_degree_range(&self) -> Option<(u32, u32)> {
        let mut it = self.terms.keys().map(|e| e.iter().sum::<u32>());
        let first = it.next()?;
        Some(it.fold((first, first), |(lo, hi), d| (lo.min(d), hi.max(d))))
    }

    /// Homogeneous components keyed by total degree.
    pub fn homogeneous_components(&self) -> BTreeMap<u32, Poly> {
        let mut out: BTreeMap<u32, Poly> = BTreeMap::new();
        for (e, c) in &self.terms {
            let d = e.iter().sum();
            out.entry(d)
                .or_insert_with(|| Poly::zero(self.n))
                .terms
                .insert(e.clone(), c.clone());
        }
        out
    }

    pub fn partial(&self, i: usize) -> Poly {
        let mut out = Poly::zero(self.n);
        for (e, c) in &self.terms {
            if e[i] > 0 {
                let mut f = e.clone();
                f[i] -= 1;
                out.add_term(f, c * Q::from_integer(e[i].into()));
            }
        }
        out
    }

    /// Substitutes `z_i := z_j`.
    pub fn identify(&self, i: usize, j: usize) -> Poly {
        let mut out = Poly::zero(self.n);
        for (e, c) in &self.terms {
            let mut f = e.clone();
            f[j] += f[i];
            f[i] = 0;
            out.add_term(f, c.clone());
        }
        out
    }

    pub fn divisible_by_diff(&self, i: usize, j: usize) -> bool {
        self.identify(i, j).is_zero()
    }

    /// Exact quotient by `z_i - z_j`, or `None` if it does not divide.
    ///
    /// Uses `z_i^e = (z_i - z_j) * sum_{k<e} z_i^{e-1-k} z_j^k + z_j^e` termwise.
    pub fn div_diff(&self, i: usize, j: usize) -> Option<Poly> {
        if !self.divisible_by_diff(i, j) {
            return None;
        }
        let mut out = Poly::zero(self.n);
        for (e, c) in &self.terms {
            let ei = e[i];
            for k in 0..ei {
                let mut f = e.clone();
                f[i] = ei - 1 - k;
                f[j] += k;
                out.add_term(f, c.clone());
            }
        }
        Some(out)
    }

    /// Multiplies by `(z_i - z_j)^k`.
    pub fn mul_diff_pow(&self, i: usize, j: usize, k: u32) -> Poly {
        if k == 0 {
            return self.clone();
        }
        // binomial expansion of (z_i - z_j)^k
        let mut d = Poly::zero(self.n);
        for a in 0..=k {
            let mut e = vec![0; self.n];
            e[i] = a;
            e[j] = k - a;
            let mut c = binomial(k, a);
            if (k - a) % 2 == 1 {
                c = -c;
            }
            d.add_term(e, c);
        }
        self.mul(&d)
    }

    /// Re-indexes variables: old variable `v` becomes `map[v]` in a space of `m` variables.
    pub fn relabel(&self, map: &[usize], m: usize) -> Poly {
        let mut out = Poly::zero(m);
        for (e, c) in &self.terms {
            let mut f = vec![0; m];
            for (v, &x) in e.iter().enumerate() {
                f[map[v]] += x;
            }
            out.add_term(f, c.clone());
        }
        out
    }

    /// Embeds into a larger variable space, old variable `v` at `offset + v`.
    pub fn embed(&self, m: usize, offset: usize) -> Poly {
        let map: Vec<usize> = (0..self.n).map(|v| v + offset).collect();
        self.relabel(&map, m)
    }

    pub fn eval_c64(&self, point: &[num_complex::Complex64]) -> num_complex::Complex64 {
        use crate::rational::q_to_f64;
        let mut acc = num_complex::Complex64::new(0.0, 0.0);
        for (e, c) in &self.terms {
            let mut m = num_complex::Complex64::new(1.0, 0.0);
            for (v, &x) in e.iter().enumerate() {
                if x > 0 {
                    m *= point[v].powu(x);
                }
            }
            acc += m * q_to_f64(c);
        }
        acc
    }

    pub fn coefficients(&self) -> impl Iterator<Item = &Q> {
        self.terms.values()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    #[test]
    fn division_by_difference() {
        let n = 3;
        let p = Poly::diff(n, 0, 1).mul(&Poly::var(n, 2).add(&Poly::var(n, 0)));
        let quo = p.div_diff(0, 1).unwrap();
        assert_eq!(quo, Poly::var(n, 2).add(&Poly::var(n, 0)));
        assert!(Poly::var(n, 0).div_diff(0, 1).is_none());
    }

    #[test]
    fn diff_powers() {
        let n = 2;
        let a = Poly::diff(n, 0, 1).pow(3);
        assert_eq!(Poly::one(n).mul_diff_pow(0, 1, 3), a);
        assert_eq!(a.identify(0, 1), Poly::zero(n));
    }

    #[test]
    fn partials() {
        let n = 2;
        let p = Poly::var(n, 0).mul(&Poly::var(n, 1));
        assert_eq!(p.partial(1), Poly::var(n, 0));
        assert!(Poly::constant(n, q(5)).partial(0).is_zero());
    }
}
