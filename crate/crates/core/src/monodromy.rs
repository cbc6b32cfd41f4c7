//! Parallel transport, residues along diagonals and a pole-order probe.
//!
//! Transport is the only floating-point code in the crate. It integrates
//! `Y' = -(sum_i E_i(z(s)) z_i'(s)) Y`, `Y(0) = Id`, segment by segment with an
//! adaptive Dormand-Prince 5(4) pair, so the columns of `Y` are parallel sections.

use std::collections::BTreeMap;

use nalgebra::DMatrix;
use num_complex::Complex64;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::connection::Connection;
use crate::conventions::TRANSPORT_SIGN;
use crate::error::{parse_err, Error, Result};
use crate::matrix::{Mat, QMat};
use crate::rational::{q, q_to_f64, q_to_string, Q};
use crate::ratfunc::RatFunc;

pub type C64 = Complex64;
pub type CMat = DMatrix<C64>;

/// Default minimum distance to any diagonal.
pub const POLE_GUARD: f64 = 1e-6;

const SAFETY: f64 = 0.9;
const MIN_FACTOR: f64 = 0.2;
const MAX_FACTOR: f64 = 5.0;
const MIN_STEP: f64 = 1e-14;

/// A piecewise-linear path in `C^n`.
#[derive(Clone, Debug, PartialEq)]
pub struct Path {
    points: Vec<Vec<C64>>,
}

impl Path {
    /// Checks that waypoints are distinct and every segment stays at least
    /// `guard` away from each diagonal.
    pub fn new(points: Vec<Vec<C64>>, guard: f64) -> Result<Self> {
        let n = points.first().map_or(0, Vec::len);
        if points.len() < 2 {
            return Err(Error::Shape("a path needs at least two points".into()));
        }
        if points.iter().any(|p| p.len() != n) {
            return Err(Error::Shape("all waypoints need the same number of coordinates".into()));
        }
        for (s, w) in points.windows(2).enumerate() {
            if w[0] == w[1] {
                return Err(Error::Shape(format!("waypoints {s} and {} coincide", s + 1)));
            }
            for i in 0..n {
                for j in i + 1..n {
                    let p = w[0][i] - w[0][j];
                    let d = (w[1][i] - w[1][j]) - p;
                    if segment_distance(p, d) < guard {
                        return Err(Error::PathOnDiagonal(i, j));
                    }
                }
            }
        }
        Ok(Path { points })
    }

    pub fn points(&self) -> &[Vec<C64>] {
        &self.points
    }

    pub fn n(&self) -> usize {
        self.points[0].len()
    }

    pub fn is_closed(&self) -> bool {
        self.points.first() == self.points.last()
    }

    pub fn reversed(&self) -> Path {
        let mut points = self.points.clone();
        points.reverse();
        Path { points }
    }

    /// This path followed by `other`; the endpoints must agree.
    pub fn then(&self, other: &Path) -> Result<Path> {
        if self.points.last() != other.points.first() {
            return Err(Error::Shape("paths do not connect".into()));
        }
        let mut points = self.points.clone();
        points.extend(other.points[1..].iter().cloned());
        Ok(Path { points })
    }

    /// `z_i` circles `z_j` counterclockwise `windings` times on a `sides`-gon of
    /// radius `radius` (default: 1/8 of the distance from `z_j` to the nearest
    /// other coordinate). Starts and ends at `base`, which must have `z_i` at
    /// distance `radius` from `z_j` or is moved there first.
    pub fn auto_loop(base: &[C64], i: usize, j: usize, radius: Option<f64>, sides: usize, windings: u32) -> Result<Path> {
        let n = base.len();
        if i >= n || j >= n || i == j {
            return Err(Error::IndexOutOfRange { index: i.max(j), n });
        }
        let eps = match radius {
            Some(r) => r,
            None => {
                let d = (0..n)
                    .filter(|&k| k != i && k != j)
                    .map(|k| (base[k] - base[j]).norm())
                    .fold(f64::INFINITY, f64::min);
                let d = if d.is_finite() { d } else { (base[i] - base[j]).norm().max(1.0) };
                d / 8.0
            }
        };
        let centre = base[j];
        let start = base[i] - centre;
        let theta0 = if start.norm() > 0.0 { start.arg() } else { 0.0 };
        let mut points = Vec::new();
        let on_circle = |t: f64| {
            let mut p = base.to_vec();
            p[i] = centre + C64::from_polar(eps, t);
            p
        };
        let needs_spoke = (start.norm() - eps).abs() > 1e-15;
        if needs_spoke {
            points.push(base.to_vec());
        }
        let total = sides * windings as usize;
        for k in 0..=total {
            points.push(on_circle(theta0 + std::f64::consts::TAU * k as f64 / sides as f64));
        }
        if needs_spoke {
            points.push(base.to_vec());
        }
        Path::new(points, POLE_GUARD.min(eps / 4.0))
    }

    pub fn to_json(&self) -> Value {
        json!({ "points": self.points.iter().map(|p| p.iter().map(|c| json!([c.re, c.im])).collect::<Vec<_>>()).collect::<Vec<_>>() })
    }

    pub fn from_json(v: &Value, path: &str) -> Result<Path> {
        let pts = v
            .get("points")
            .and_then(Value::as_array)
            .ok_or_else(|| parse_err(format!("{path}.points"), "expected an array of points"))?;
        let mut points = Vec::new();
        for (k, p) in pts.iter().enumerate() {
            let here = format!("{path}.points[{k}]");
            let coords = p.as_array().ok_or_else(|| parse_err(&here, "expected an array of [re, im] pairs"))?;
            let mut pt = Vec::new();
            for (c, z) in coords.iter().enumerate() {
                let pair = z
                    .as_array()
                    .filter(|a| a.len() == 2)
                    .and_then(|a| Some(C64::new(a[0].as_f64()?, a[1].as_f64()?)))
                    .ok_or_else(|| parse_err(format!("{here}[{c}]"), "expected [re, im]"))?;
                pt.push(pair);
            }
            points.push(pt);
        }
        Path::new(points, POLE_GUARD).map_err(|e| parse_err(path, e.to_string()))
    }
}

/// Minimum of `|p + s d|` over `s` in `[0, 1]`.
fn segment_distance(p: C64, d: C64) -> f64 {
    let dd = d.norm_sqr();
    let s = if dd == 0.0 { 0.0 } else { (-(p.conj() * d).re / dd).clamp(0.0, 1.0) };
    (p + d * s).norm()
}

/// A rational function compiled to floating point.
#[derive(Clone, Debug)]
struct CompiledRat {
    terms: Vec<(f64, Vec<(usize, u32)>)>,
    den: Vec<(usize, usize, i32)>,
}

impl CompiledRat {
    fn new(f: &RatFunc) -> Self {
        let terms = f
            .numerator()
            .terms()
            .iter()
            .map(|(e, c)| {
                let vars = e.iter().enumerate().filter(|(_, &x)| x > 0).map(|(v, &x)| (v, x)).collect();
                (q_to_f64(c), vars)
            })
            .collect();
        let den = f.denominator().iter().map(|(&(i, j), &m)| (i, j, m as i32)).collect();
        CompiledRat { terms, den }
    }

    fn eval(&self, z: &[C64]) -> C64 {
        let mut num = C64::zero();
        for (c, vars) in &self.terms {
            let mut m = C64::new(*c, 0.0);
            for &(v, x) in vars {
                m *= z[v].powu(x);
            }
            num += m;
        }
        for &(i, j, m) in &self.den {
            num /= (z[i] - z[j]).powi(m);
        }
        num
    }
}

/// Floating-point evaluator for `sum_i E_i(z) dz_i`.
#[derive(Clone, Debug)]
pub struct Evaluator {
    n: usize,
    rank: usize,
    entries: Vec<Vec<(usize, usize, CompiledRat)>>,
}

impl Evaluator {
    pub fn new(e: &Connection) -> Self {
        let entries = e
            .matrices()
            .iter()
            .map(|m| {
                let mut v = Vec::new();
                for a in 0..m.rows() {
                    for b in 0..m.cols() {
                        let f = m.get(a, b);
                        if !f.is_zero() {
                            v.push((a, b, CompiledRat::new(f)));
                        }
                    }
                }
                v
            })
            .collect();
        Evaluator {
            n: e.n_vars(),
            rank: e.rank(),
            entries,
        }
    }

    pub fn form(&self, z: &[C64], dz: &[C64]) -> CMat {
        let mut out = CMat::zeros(self.rank, self.rank);
        for i in 0..self.n {
            if dz[i] == C64::zero() {
                continue;
            }
            for (a, b, f) in &self.entries[i] {
                out[(*a, *b)] += f.eval(z) * dz[i];
            }
        }
        out
    }
}

/// A transport matrix with integration statistics.
#[derive(Clone, Debug)]
pub struct MonodromyResult {
    pub matrix: CMat,
    pub steps: usize,
    pub rejected: usize,
    pub error_estimate: f64,
}

impl MonodromyResult {
    pub fn to_json(&self) -> Value {
        json!({
            "matrix": cmat_json(&self.matrix),
            "steps": self.steps,
            "rejected": self.rejected,
            "error_estimate": self.error_estimate,
        })
    }
}

pub fn cmat_json(m: &CMat) -> Value {
    json!((0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| json!([m[(i, j)].re, m[(i, j)].im])).collect::<Vec<_>>())
        .collect::<Vec<_>>())
}

// Dormand-Prince 5(4) tableau
const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
const B5: [f64; 7] = [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0, 0.0];
const B4: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

/// Transport along `path` with local error tolerance `tol`.
pub fn transport(e: &Connection, path: &Path, tol: f64) -> Result<MonodromyResult> {
    transport_with(&Evaluator::new(e), path, tol, POLE_GUARD)
}

pub fn transport_with(ev: &Evaluator, path: &Path, tol: f64, guard: f64) -> Result<MonodromyResult> {
    if path.n() != ev.n {
        return Err(Error::VarCountMismatch(path.n(), ev.n));
    }
    if !(tol > 0.0) {
        return Err(Error::Shape("tolerance must be positive".into()));
    }
    let r = ev.rank;
    let mut y = CMat::identity(r, r);
    let mut steps = 0;
    let mut rejected = 0;
    let mut err_total = 0.0;
    for (seg, w) in path.points.windows(2).enumerate() {
        let (p0, p1) = (&w[0], &w[1]);
        let dz: Vec<C64> = p0.iter().zip(p1).map(|(a, b)| b - a).collect();
        let at = |s: f64| -> Result<CMat> {
            let z: Vec<C64> = p0.iter().zip(&dz).map(|(a, d)| a + d * s).collect();
            for i in 0..z.len() {
                for j in i + 1..z.len() {
                    if (z[i] - z[j]).norm() < guard {
                        return Err(Error::PoleProximity { segment: seg });
                    }
                }
            }
            Ok(ev.form(&z, &dz) * C64::new(TRANSPORT_SIGN, 0.0))
        };
        let mut s = 0.0;
        let mut h: f64 = 0.05;
        let mut k1 = &at(0.0)? * &y;
        while s < 1.0 {
            h = h.min(1.0 - s);
            if h < MIN_STEP {
                return Err(Error::PoleProximity { segment: seg });
            }
            let mut ks: Vec<CMat> = vec![k1.clone()];
            for stage in 1..7 {
                let mut yi = y.clone();
                for (l, kl) in ks.iter().enumerate() {
                    let a = A[stage][l];
                    if a != 0.0 {
                        yi += kl * C64::new(h * a, 0.0);
                    }
                }
                ks.push(&at(s + C[stage] * h)? * &yi);
            }
            let mut y5 = y.clone();
            let mut diff = CMat::zeros(r, r);
            for (l, kl) in ks.iter().enumerate() {
                if B5[l] != 0.0 {
                    y5 += kl * C64::new(h * B5[l], 0.0);
                }
                let d = B5[l] - B4[l];
                if d != 0.0 {
                    diff += kl * C64::new(h * d, 0.0);
                }
            }
            let scale = 1.0 + y.iter().chain(y5.iter()).map(|c| c.norm()).fold(0.0, f64::max);
            let err = diff.iter().map(|c| c.norm()).fold(0.0, f64::max) / (tol * scale);
            if err <= 1.0 {
                s += h;
                y = y5;
                k1 = ks.pop().unwrap();
                steps += 1;
                err_total += err * tol * scale;
            } else {
                rejected += 1;
            }
            let factor = if err == 0.0 { MAX_FACTOR } else { (SAFETY * err.powf(-0.2)).clamp(MIN_FACTOR, MAX_FACTOR) };
            h *= factor;
        }
    }
    Ok(MonodromyResult {
        matrix: y,
        steps,
        rejected,
        error_estimate: err_total,
    })
}

/// Coefficient of `(z_i - z_j)^{-1}` in `E_i`, restricted to `z_i = z_j`.
#[derive(Clone, Debug)]
pub struct Residue {
    pub pair: (usize, usize),
    pub pole_order: u32,
    pub matrix: Mat,
}

impl Residue {
    pub fn constant(&self) -> Option<QMat> {
        self.matrix.as_constant()
    }
}

pub fn residue(e: &Connection, i: usize, j: usize) -> Result<Residue> {
    let n = e.n_vars();
    if i >= n || j >= n {
        return Err(Error::IndexOutOfRange { index: i.max(j), n });
    }
    if i == j {
        return Err(Error::SameBlock(i));
    }
    let key = (i.min(j), i.max(j));
    let m = e.matrix(i);
    let mut order = 0;
    let mut out = Mat::zeros(n, m.rows(), m.cols());
    for a in 0..m.rows() {
        for b in 0..m.cols() {
            let f = m.get(a, b);
            let k = f.denominator().get(&key).copied().unwrap_or(0);
            order = order.max(k);
            if k == 0 {
                continue;
            }
            out.set(a, b, laurent_coefficient(f, i, j, k)?);
        }
    }
    Ok(Residue {
        pair: (i, j),
        pole_order: order,
        matrix: out,
    })
}

/// For `f = P / ((z_i - z_j)^k D')`: `(1/(k-1)!) d_i^{k-1} (P/D')` at `z_i = z_j`.
fn laurent_coefficient(f: &RatFunc, i: usize, j: usize, k: u32) -> Result<RatFunc> {
    let n = f.n_vars();
    let key = (i.min(j), i.max(j));
    let rest: Vec<_> = f.denominator().iter().filter(|(p, _)| **p != key).map(|(&p, &m)| (p, m)).collect();
    let mut g = RatFunc::new(f.numerator().clone(), rest)?;
    // f = (z_i - z_j)^{-k} g with sign when the stored factor is (z_j - z_i)
    if i > j && k % 2 == 1 {
        g = -&g;
    }
    let mut fact = Q::one();
    for t in 1..k {
        g = g.partial(i)?;
        fact *= q(t as i64);
    }
    let images: Vec<RatFunc> = (0..n).map(|v| RatFunc::var(n, if v == i { j } else { v })).collect();
    Ok(g.subst(&images)?.scale(&fact.recip()))
}

/// A univariate rational function `c * N(u) / prod (u - r)^m` over `Q`.
#[derive(Clone, Debug, PartialEq)]
struct UniRat {
    num: Vec<Q>,
    roots: BTreeMap<Q, u32>,
}

impl UniRat {
    fn zero() -> Self {
        UniRat {
            num: vec![],
            roots: BTreeMap::new(),
        }
    }

    fn is_zero(&self) -> bool {
        self.num.is_empty()
    }

    fn trim(mut v: Vec<Q>) -> Vec<Q> {
        while v.last().map_or(false, Zero::is_zero) {
            v.pop();
        }
        v
    }

    fn mul_poly(a: &[Q], b: &[Q]) -> Vec<Q> {
        if a.is_empty() || b.is_empty() {
            return vec![];
        }
        let mut out = vec![Q::zero(); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            for (j, y) in b.iter().enumerate() {
                out[i + j] += x * y;
            }
        }
        Self::trim(out)
    }

    fn add_poly(a: &[Q], b: &[Q]) -> Vec<Q> {
        let mut out = vec![Q::zero(); a.len().max(b.len())];
        for (i, x) in a.iter().enumerate() {
            out[i] += x;
        }
        for (i, x) in b.iter().enumerate() {
            out[i] += x;
        }
        Self::trim(out)
    }

    fn linear_pow(r: &Q, m: u32) -> Vec<Q> {
        let mut out = vec![Q::one()];
        for _ in 0..m {
            out = Self::mul_poly(&out, &[-r.clone(), Q::one()]);
        }
        out
    }

    fn add(&self, other: &UniRat) -> UniRat {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let mut roots = self.roots.clone();
        for (r, &m) in &other.roots {
            let e = roots.entry(r.clone()).or_insert(0);
            *e = (*e).max(m);
        }
        let lift = |u: &UniRat| {
            let mut p = u.num.clone();
            for (r, &m) in &roots {
                let have = u.roots.get(r).copied().unwrap_or(0);
                p = Self::mul_poly(&p, &Self::linear_pow(r, m - have));
            }
            p
        };
        UniRat {
            num: Self::add_poly(&lift(self), &lift(other)),
            roots,
        }
        .reduced()
    }

    /// Cancels common factors `(u - r)`.
    fn reduced(mut self) -> UniRat {
        if self.num.is_empty() {
            return UniRat::zero();
        }
        let roots: Vec<Q> = self.roots.keys().cloned().collect();
        for r in roots {
            while self.roots[&r] > 0 {
                match divide_linear(&self.num, &r) {
                    Some(q) => {
                        self.num = q;
                        *self.roots.get_mut(&r).unwrap() -= 1;
                    }
                    None => break,
                }
            }
            if self.roots[&r] == 0 {
                self.roots.remove(&r);
            }
        }
        self
    }

    fn order_at_infinity(&self) -> u32 {
        if self.is_zero() {
            return 0;
        }
        let deg_den: i64 = self.roots.values().map(|&m| m as i64).sum();
        let d = self.num.len() as i64 - 1 - deg_den + 2;
        d.max(0) as u32
    }
}

/// Exact quotient by `(u - r)`, if it divides.
fn divide_linear(p: &[Q], r: &Q) -> Option<Vec<Q>> {
    if p.is_empty() {
        return Some(vec![]);
    }
    let mut out = vec![Q::zero(); p.len() - 1];
    let mut carry = Q::zero();
    for k in (0..p.len()).rev() {
        let v = &p[k] + &carry * r;
        if k == 0 {
            return v.is_zero().then_some(out);
        }
        out[k - 1] = v.clone();
        carry = v;
    }
    unreachable!()
}

/// Restricts `f` to the line `z = a + u b`; `None` when the line lies in a
/// diagonal that `f` has a pole along.
fn restrict_to_line(f: &RatFunc, a: &[Q], b: &[Q]) -> Option<UniRat> {
    let mut num = vec![];
    for (e, c) in f.numerator().terms() {
        let mut t = vec![c.clone()];
        for (v, &x) in e.iter().enumerate() {
            for _ in 0..x {
                t = UniRat::mul_poly(&t, &UniRat::trim(vec![a[v].clone(), b[v].clone()]));
            }
        }
        num = UniRat::add_poly(&num, &t);
    }
    let mut roots = BTreeMap::new();
    let mut scale = Q::one();
    for (&(i, j), &m) in f.denominator() {
        let (da, db) = (&a[i] - &a[j], &b[i] - &b[j]);
        if db.is_zero() {
            if da.is_zero() {
                return None;
            }
            for _ in 0..m {
                scale /= &da;
            }
        } else {
            // da + u db = db (u - r)
            let r = -(&da / &db);
            *roots.entry(r).or_insert(0) += m;
            for _ in 0..m {
                scale /= &db;
            }
        }
    }
    let num = num.into_iter().map(|c| c * &scale).collect();
    Some(UniRat { num: UniRat::trim(num), roots }.reduced())
}

/// Pole orders of the pulled-back connection form on one line.
#[derive(Clone, Debug)]
pub struct LineReport {
    pub a: Vec<Q>,
    pub b: Vec<Q>,
    pub finite_poles: Vec<(Q, u32)>,
    pub order_at_infinity: u32,
}

impl LineReport {
    pub fn max_order(&self) -> u32 {
        self.finite_poles.iter().map(|p| p.1).max().unwrap_or(0).max(self.order_at_infinity)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "a": self.a.iter().map(q_to_string).collect::<Vec<_>>(),
            "b": self.b.iter().map(q_to_string).collect::<Vec<_>>(),
            "finite_poles": self.finite_poles.iter().map(|(r, m)| json!([q_to_string(r), m])).collect::<Vec<_>>(),
            "order_at_infinity": self.order_at_infinity,
        })
    }
}

#[derive(Clone, Debug)]
pub struct RegularityReport {
    pub lines: Vec<LineReport>,
    pub pass: bool,
}

impl RegularityReport {
    /// The line with the largest pole order.
    pub fn worst(&self) -> Option<&LineReport> {
        self.lines.iter().max_by_key(|l| l.max_order())
    }

    pub fn to_json(&self) -> Value {
        json!({
            "verdict": if self.pass { "PASS" } else { "FAIL" },
            "samples": self.lines.len(),
            "max_order": self.lines.iter().map(LineReport::max_order).max().unwrap_or(0),
            "worst_line": self.worst().map(LineReport::to_json),
        })
    }
}

fn random_q<R: Rng>(rng: &mut R) -> Q {
    Q::new(rng.gen_range(-12i64..=12).into(), rng.gen_range(1i64..=5).into())
}

/// Pulls the connection back to `samples` random lines `z = a + u b` and
/// reports pole orders at finite points and at infinity. PASS iff all are `<= 1`.
pub fn regularity_probe(e: &Connection, samples: usize, seed: u64) -> Result<RegularityReport> {
    let n = e.n_vars();
    let r = e.rank();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut lines = Vec::with_capacity(samples);
    let mut attempts = 0;
    while lines.len() < samples {
        attempts += 1;
        if attempts > 100 * samples.max(1) {
            return Err(Error::Incomplete("could not sample lines off the diagonals".into()));
        }
        let a: Vec<Q> = (0..n).map(|_| random_q(&mut rng)).collect();
        let b: Vec<Q> = (0..n).map(|_| random_q(&mut rng)).collect();
        let mut entries = vec![UniRat::zero(); r * r];
        let mut ok = true;
        'outer: for (i, m) in e.matrices().iter().enumerate() {
            if b[i].is_zero() {
                continue;
            }
            for x in 0..r {
                for y in 0..r {
                    let f = m.get(x, y);
                    if f.is_zero() {
                        continue;
                    }
                    let Some(g) = restrict_to_line(f, &a, &b) else {
                        ok = false;
                        break 'outer;
                    };
                    let g = UniRat {
                        num: g.num.iter().map(|c| c * &b[i]).collect(),
                        roots: g.roots,
                    };
                    entries[x * r + y] = entries[x * r + y].add(&g);
                }
            }
        }
        if !ok {
            continue;
        }
        let mut poles: BTreeMap<Q, u32> = BTreeMap::new();
        let mut inf = 0;
        for ent in &entries {
            for (root, &m) in &ent.roots {
                let p = poles.entry(root.clone()).or_insert(0);
                *p = (*p).max(m);
            }
            inf = inf.max(ent.order_at_infinity());
        }
        lines.push(LineReport {
            a,
            b,
            finite_poles: poles.into_iter().collect(),
            order_at_infinity: inf,
        });
    }
    let pass = lines.iter().all(|l| l.max_order() <= 1);
    Ok(RegularityReport { lines, pass })
}

/// Eigenvalues of a complex matrix.
pub fn eigenvalues(m: &CMat) -> Vec<C64> {
    if m.nrows() == 0 {
        return vec![];
    }
    m.clone().schur().eigenvalues().map(|v| v.iter().copied().collect()).unwrap_or_default()
}

pub fn qmat_to_c(m: &QMat) -> CMat {
    CMat::from_fn(m.rows(), m.cols(), |i, j| C64::new(q_to_f64(m.get(i, j)), 0.0))
}

/// Comparison of loop monodromy with `exp(TRANSPORT_SIGN * 2 pi i sigma)`.
#[derive(Clone, Debug)]
pub struct MonodromyComparison {
    pub residue_eigenvalues: Vec<C64>,
    pub predicted: Vec<C64>,
    pub monodromy_eigenvalues: Vec<C64>,
    pub max_mismatch: f64,
    pub transport: MonodromyResult,
}

impl MonodromyComparison {
    pub fn to_json(&self) -> Value {
        let c = |v: &[C64]| v.iter().map(|z| json!([z.re, z.im])).collect::<Vec<_>>();
        json!({
            "residue_eigenvalues": c(&self.residue_eigenvalues),
            "predicted": c(&self.predicted),
            "monodromy_eigenvalues": c(&self.monodromy_eigenvalues),
            "max_mismatch": self.max_mismatch,
            "transport": self.transport.to_json(),
        })
    }
}

/// Smallest max-distance matching of two equally long lists.
pub fn match_eigenvalues(a: &[C64], b: &[C64]) -> f64 {
    if a.len() != b.len() {
        return f64::INFINITY;
    }
    let n = a.len();
    if n == 0 {
        return 0.0;
    }
    let mut best = f64::INFINITY;
    let mut perm: Vec<usize> = (0..n).collect();
    permute(&mut perm, 0, &mut |p| {
        let d = (0..n).map(|k| (a[k] - b[p[k]]).norm()).fold(0.0, f64::max);
        best = best.min(d);
    });
    best
}

fn permute(p: &mut Vec<usize>, k: usize, f: &mut impl FnMut(&[usize])) {
    if k == p.len() {
        f(p);
        return;
    }
    for i in k..p.len() {
        p.swap(k, i);
        permute(p, k + 1, f);
        p.swap(k, i);
    }
}

/// Transports around an automatic loop of `z_i` about `z_j` and compares the
/// monodromy eigenvalues with the exponentiated residue eigenvalues.
pub fn monodromy_vs_residue(e: &Connection, i: usize, j: usize, base: &[C64], tol: f64) -> Result<MonodromyComparison> {
    let res = residue(e, i, j)?;
    let constant = res.constant().ok_or(Error::NonConstantResidue(i, j))?;
    let sigma = eigenvalues(&qmat_to_c(&constant));
    let predicted: Vec<C64> = sigma
        .iter()
        .map(|s| (C64::new(0.0, TRANSPORT_SIGN * std::f64::consts::TAU) * s).exp())
        .collect();
    let path = Path::auto_loop(base, i, j, None, 64, 1)?;
    let t = transport(e, &path, tol)?;
    let mono = eigenvalues(&t.matrix);
    let max_mismatch = match_eigenvalues(&predicted, &mono);
    Ok(MonodromyComparison {
        residue_eigenvalues: sigma,
        predicted,
        monodromy_eigenvalues: mono,
        max_mismatch,
        transport: t,
    })
}

/// Operator 2-norm bound via the Frobenius norm.
pub fn frobenius(m: &CMat) -> f64 {
    m.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kz::kz_build;
    use crate::lie::LieAlgebra;
    use crate::rational::qf;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn zero_connection_has_trivial_transport() {
        let e = Connection::zero(2, 2);
        let p = Path::auto_loop(&[c(1.0, 0.0), c(0.0, 0.0)], 0, 1, None, 16, 1).unwrap();
        let t = transport(&e, &p, 1e-10).unwrap();
        assert!(frobenius(&(t.matrix - CMat::identity(2, 2))) < 1e-14);
    }

    #[test]
    fn abelian_loop_matches_power_function() {
        let a = qf(1, 3);
        let e = Connection::abelian_dlog(2, &[(0, 1)], &a).unwrap();
        let p = Path::auto_loop(&[c(0.5, 0.0), c(0.0, 0.0)], 0, 1, Some(0.5), 64, 1).unwrap();
        let t = transport(&e, &p, 1e-12).unwrap();
        let want = (c(0.0, -std::f64::consts::TAU) * (1.0 / 3.0)).exp();
        assert!((t.matrix[(0, 0)] - want).norm() < 1e-9);
        let twice = Path::auto_loop(&[c(0.5, 0.0), c(0.0, 0.0)], 0, 1, Some(0.5), 64, 2).unwrap();
        let t2 = transport(&e, &twice, 1e-12).unwrap();
        assert!((t2.matrix[(0, 0)] - want * want).norm() < 1e-9);
    }

    #[test]
    fn loop_then_reverse_is_identity() {
        let e = Connection::abelian_dlog(3, &[(0, 1), (1, 2)], &qf(2, 7)).unwrap();
        let p = Path::auto_loop(&[c(1.0, 0.0), c(0.0, 0.0), c(3.0, 1.0)], 0, 1, None, 32, 1).unwrap();
        let full = p.then(&p.reversed()).unwrap();
        let t = transport(&e, &full, 1e-12).unwrap();
        assert!(frobenius(&(t.matrix - CMat::identity(1, 1))) < 1e-8);
    }

    #[test]
    fn diagonal_paths_are_rejected() {
        let p = Path::new(vec![vec![c(-1.0, 0.0), c(0.0, 0.0)], vec![c(1.0, 0.0), c(0.0, 0.0)]], POLE_GUARD);
        assert!(matches!(p, Err(Error::PathOnDiagonal(0, 1))));
    }

    #[test]
    fn residues() {
        let e = Connection::abelian_dlog(2, &[(0, 1)], &qf(1, 3)).unwrap();
        let r = residue(&e, 0, 1).unwrap();
        assert_eq!(r.pole_order, 1);
        assert_eq!(r.constant().unwrap(), QMat::from_rows(vec![vec![qf(1, 3)]]).unwrap());
        // z_2's coefficient is -a/(z_1 - z_2) = a/(z_2 - z_1)
        assert_eq!(residue(&e, 1, 0).unwrap().constant().unwrap().get(0, 0), &qf(1, 3));

        let g = LieAlgebra::sl2();
        let kz = kz_build(&g, &[1, 1, 2], &q(1)).unwrap();
        let full = kz.full_connection();
        let r = residue(&full, 0, 2).unwrap();
        assert_eq!(r.pole_order, 1);
        assert_eq!(r.constant().unwrap(), kz.omega(0, 2).scale(&-qf(1, 3)));

        let sq = RatFunc::diff_pow(2, 0, 1, -2).unwrap();
        let bad = Connection::new(2, vec![q(0)], vec![Mat::scalar(1, &sq), Mat::scalar(1, &-&sq)]).unwrap();
        assert_eq!(residue(&bad, 0, 1).unwrap().pole_order, 2);
    }

    #[test]
    fn higher_order_laurent_coefficient() {
        // z_1 / (z_1 - z_2)^2 = 1/(z_1 - z_2) + z_2/(z_1 - z_2)^2
        let n = 2;
        let f = &RatFunc::var(n, 0) * &RatFunc::diff_pow(n, 0, 1, -2).unwrap();
        let e = Connection::new(n, vec![q(0)], vec![Mat::scalar(1, &f), Mat::zeros(n, 1, 1)]).unwrap();
        let r = residue(&e, 0, 1).unwrap();
        assert_eq!(r.pole_order, 2);
        assert_eq!(r.matrix.get(0, 0), &RatFunc::one(n));
    }

    #[test]
    fn regularity() {
        let e = Connection::abelian_dlog(3, &[(0, 1), (0, 2), (1, 2)], &qf(1, 2)).unwrap();
        let rep = regularity_probe(&e, 16, 7).unwrap();
        assert!(rep.pass);
        assert!(rep.lines.iter().all(|l| l.max_order() == 1));

        let sq = RatFunc::diff_pow(2, 0, 1, -2).unwrap();
        let bad = Connection::new(2, vec![q(0)], vec![Mat::scalar(1, &sq), Mat::scalar(1, &-&sq)]).unwrap();
        let rep = regularity_probe(&bad, 8, 7).unwrap();
        assert!(!rep.pass);
        assert_eq!(rep.worst().unwrap().max_order(), 2);

        let kz = kz_build(&LieAlgebra::sl2(), &[1, 1, 1], &q(1)).unwrap();
        assert!(regularity_probe(&kz.full_connection(), 8, 1).unwrap().pass);
    }

    #[test]
    fn kz_singlet_monodromy() {
        let kz = kz_build(&LieAlgebra::sl2(), &[1, 1], &q(1)).unwrap();
        let ch = kz.restrict(0).unwrap();
        let cmp = monodromy_vs_residue(&ch.connection, 0, 1, &[c(1.0, 0.0), c(0.0, 0.0)], 1e-12).unwrap();
        assert!((cmp.residue_eigenvalues[0] - c(1.0 / 8.0, 0.0)).norm() < 1e-15);
        assert!(cmp.max_mismatch < 1e-8, "{}", cmp.max_mismatch);
    }

    #[test]
    fn laurent_identity_for_linear_division() {
        assert_eq!(divide_linear(&[q(-2), q(1)], &q(2)), Some(vec![q(1)]));
        assert_eq!(divide_linear(&[q(1), q(1)], &q(2)), None);
    }
}
