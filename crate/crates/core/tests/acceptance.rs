//! Acceptance run: one PASS/FAIL line per criterion. Exits nonzero if any fails.

use std::time::{Duration, Instant};

use num_complex::Complex64 as C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

use treealg::axioms::{gauges_to_json, rationality_scan, sample_mutations, shifted, verify_pretree, verify_pta, verify_treefunctor};
use treealg::cli::{run, DEFAULT_SEED};
use treealg::connection::Connection;
use treealg::cooperad::{cocompose, iterated_cocompositions, Refinement};
use treealg::kz::{kz_build, WzwInstance};
use treealg::lie::LieAlgebra;
use treealg::matrix::Mat;
use treealg::monodromy::{frobenius, monodromy_vs_residue, regularity_probe, transport, Path, POLE_GUARD};
use treealg::poly::Poly;
use treealg::rational::{q, qf};
use treealg::tree::TreeFunctorData;
use treealg::RatFunc;

const EULER_BUDGET: Duration = Duration::from_secs(10);
const COASSOC_BUDGET: Duration = Duration::from_secs(30);
const FLAT_BUDGET: Duration = Duration::from_secs(60);
const ABELIAN_BUDGET: Duration = Duration::from_secs(1);
const AXIOM_BUDGET: Duration = Duration::from_secs(120);
const ABELIAN_TOL: f64 = 1e-9;
const TRANSPORT_TOL: f64 = 1e-12;
const RESIDUE_TOL: f64 = 1e-8;
const REGULARITY_LINES: usize = 64;

type Outcome = Result<String, String>;

fn timed(budget: Duration, f: impl FnOnce() -> Outcome) -> Outcome {
    let start = Instant::now();
    let detail = f()?;
    let took = start.elapsed();
    if took > budget {
        return Err(format!("{detail}; took {:.2} s, budget {} s", took.as_secs_f64(), budget.as_secs()));
    }
    Ok(format!("{detail}; {:.2} s", took.as_secs_f64()))
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn random_homogeneous(rng: &mut ChaCha8Rng) -> (RatFunc, i64) {
    let n = rng.gen_range(2..=4usize);
    let k = rng.gen_range(-6..=6i64);
    let den_degree = rng.gen_range(k.min(0).abs()..=6);
    let mut den = Vec::new();
    for _ in 0..den_degree {
        let i = rng.gen_range(0..n);
        let mut j = rng.gen_range(0..n - 1);
        if j >= i {
            j += 1;
        }
        den.push(((i, j), 1u32));
    }
    let num_degree = (k + den_degree) as u32;
    let mut num = Poly::zero(n);
    for _ in 0..rng.gen_range(1..=4) {
        let mut e = vec![0u32; n];
        for _ in 0..num_degree {
            e[rng.gen_range(0..n)] += 1;
        }
        num.add_term(e, qf(rng.gen_range(-9..=9), rng.gen_range(1..=4)));
    }
    if num.is_zero() {
        num = Poly::monomial(n, {
            let mut e = vec![0; n];
            e[0] = num_degree;
            e
        }, q(1));
    }
    (RatFunc::new(num, den).unwrap(), k)
}

fn criterion_1() -> Outcome {
    timed(EULER_BUDGET, || {
        let mut rng = ChaCha8Rng::seed_from_u64(DEFAULT_SEED);
        for s in 0..1000 {
            let (f, k) = random_homogeneous(&mut rng);
            if f.euler() != f.scale(&q(k)) {
                return Err(format!("sample {s}: Euler identity fails for degree {k}"));
            }
        }
        Ok("1000 random homogeneous functions, n <= 4, |k| <= 6".into())
    })
}

fn spanning_inputs(n: usize) -> Vec<RatFunc> {
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    let mut dens: Vec<Vec<u32>> = vec![vec![]];
    for _ in &pairs {
        dens = dens
            .into_iter()
            .flat_map(|d| {
                (0..=3u32).map(move |e| {
                    let mut d = d.clone();
                    d.push(e);
                    d
                })
            })
            .collect();
    }
    let mut out = Vec::new();
    for d in dens.into_iter().filter(|d| d.iter().sum::<u32>() <= 3) {
        let den: Vec<_> = pairs.iter().zip(&d).filter(|(_, &e)| e > 0).map(|(&p, &e)| (p, e)).collect();
        let mut nums = vec![Poly::one(n)];
        nums.extend((0..n).map(|i| Poly::var(n, i)));
        for num in nums {
            out.push(RatFunc::new(num, den.clone()).unwrap());
        }
    }
    out
}

fn criterion_2() -> Outcome {
    timed(COASSOC_BUDGET, || {
        let refinements: Vec<Vec<Vec<usize>>> = vec![
            vec![vec![1, 1]],
            vec![vec![1], vec![1]],
            vec![vec![1, 2]],
            vec![vec![2, 1]],
            vec![vec![1, 1, 1]],
            vec![vec![1], vec![1, 1]],
            vec![vec![1, 1], vec![1]],
            vec![vec![2], vec![1]],
            vec![vec![1], vec![2]],
        ];
        let mut count = 0;
        for sub_blocks in refinements {
            let r = Refinement { sub_blocks };
            for f in spanning_inputs(r.leaves()) {
                for order in 0..=4 {
                    let p = iterated_cocompositions(&f, &r, order).map_err(err)?;
                    if p.via_blocks != p.via_sub_blocks {
                        return Err(format!("refinement {:?}, order {order}: routes differ", r.sub_blocks));
                    }
                    count += 1;
                }
            }
        }
        Ok(format!("{count} (input, refinement, order) cases"))
    })
}

fn weight_multisets(n: usize) -> Vec<Vec<u32>> {
    let mut out: Vec<Vec<u32>> = vec![vec![]];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|w| {
                let lo = w.last().copied().unwrap_or(1);
                (lo..=2).map(move |x| {
                    let mut w = w.clone();
                    w.push(x);
                    w
                })
            })
            .collect();
    }
    out
}

fn criterion_3() -> Outcome {
    timed(FLAT_BUDGET, || {
        let alg = LieAlgebra::sl2();
        let mut count = 0;
        for n in 2..=4 {
            for w in weight_multisets(n) {
                for k in [1, 2] {
                    let kz = kz_build(&alg, &w, &q(k)).map_err(err)?;
                    for p in kz.factored().curvature().map_err(err)? {
                        if !(p.curl_zero && p.bracket_zero && p.paper_zero && p.standard_zero) {
                            return Err(format!("weights {w:?}, k = {k}: pair ({},{}) not flat", p.i, p.j));
                        }
                    }
                    count += 1;
                }
            }
        }
        Ok(format!("{count} KZ connections, curl and bracket identically zero, both conventions"))
    })
}

fn criterion_4() -> Outcome {
    let alg = LieAlgebra::sl2();
    let kz = kz_build(&alg, &[1, 1], &q(1)).map_err(err)?;
    let (singlet, _) = kz.degree_identity(0).map_err(err)?;
    let (triplet, _) = kz.degree_identity(2).map_err(err)?;
    if singlet != qf(1, 8) || triplet != qf(-1, 24) {
        return Err(format!("(1/2,1/2) channels give {singlet} and {triplet}"));
    }
    let mut count = 0;
    for n in 2..=4 {
        for w in weight_multisets(n) {
            for k in [1, 2] {
                let kz = kz_build(&alg, &w, &q(k)).map_err(err)?;
                for out in kz.channels() {
                    let (c, p) = kz.degree_identity(out).map_err(err)?;
                    if c != p {
                        return Err(format!("weights {w:?}, k = {k}, channel {out}: {c} vs {p}"));
                    }
                    count += 1;
                }
            }
        }
    }
    Ok(format!("{count} channels exact; 1/8 and -1/24 reproduced"))
}

fn criterion_5() -> Outcome {
    timed(ABELIAN_BUDGET, || {
        let e = Connection::abelian_dlog(2, &[(0, 1)], &qf(1, 3)).map_err(err)?;
        let base = [C64::new(0.5, 0.0), C64::new(0.0, 0.0)];
        let path = Path::auto_loop(&base, 0, 1, Some(0.5), 64, 1).map_err(err)?;
        let t = transport(&e, &path, TRANSPORT_TOL).map_err(err)?;
        let want = (C64::new(0.0, -std::f64::consts::TAU) / 3.0).exp();
        let d = (t.matrix[(0, 0)] - want).norm();
        if d >= ABELIAN_TOL {
            return Err(format!("deviation {d:.3e}"));
        }
        Ok(format!("deviation {d:.2e} from exp(-2 pi i / 3)"))
    })
}

/// A loop of `z_1` around `z_2` through a shifted, coarser circle.
fn perturbed_loop(base: &[C64]) -> Path {
    let centre = base[1] + C64::new(0.05, -0.03);
    let r = 0.3;
    let mut pts = vec![base.to_vec()];
    let theta0 = (base[0] - centre).arg();
    for k in 0..=47 {
        let mut p = base.to_vec();
        p[0] = centre + C64::from_polar(r, theta0 + std::f64::consts::TAU * k as f64 / 47.0);
        pts.push(p);
    }
    pts.push(base.to_vec());
    Path::new(pts, POLE_GUARD).unwrap()
}

fn criterion_6() -> Outcome {
    let alg = LieAlgebra::sl2();
    let base = [C64::new(1.0, 0.0), C64::new(0.0, 0.0)];
    let mut worst: f64 = 0.0;
    let mut worst_h: f64 = 0.0;
    let mut count = 0;
    for w in weight_multisets(2) {
        let kz = kz_build(&alg, &w, &q(1)).map_err(err)?;
        for out in kz.channels() {
            let e = kz.restrict(out).map_err(err)?.connection;
            let c = monodromy_vs_residue(&e, 0, 1, &base, TRANSPORT_TOL).map_err(err)?;
            worst = worst.max(c.max_mismatch);
            let other = transport(&e, &perturbed_loop(&base), TRANSPORT_TOL).map_err(err)?;
            worst_h = worst_h.max(frobenius(&(&c.transport.matrix - &other.matrix)));
            count += 1;
        }
    }
    if worst >= RESIDUE_TOL || worst_h >= RESIDUE_TOL {
        return Err(format!("eigenvalue mismatch {worst:.3e}, loop change {worst_h:.3e}"));
    }
    Ok(format!("{count} channels; eigenvalue mismatch {worst:.2e}, perturbed loop {worst_h:.2e}"))
}

fn criterion_7() -> Outcome {
    let alg = LieAlgebra::sl2();
    let mut count = 0;
    for n in 2..=3 {
        for w in weight_multisets(n) {
            let kz = kz_build(&alg, &w, &q(1)).map_err(err)?;
            let mut conns = vec![kz.full_connection()];
            for out in kz.channels() {
                conns.push(kz.restrict(out).map_err(err)?.connection);
            }
            for e in conns {
                let r = regularity_probe(&e, REGULARITY_LINES, DEFAULT_SEED).map_err(err)?;
                if !r.pass {
                    return Err(format!("KZ weights {w:?} fails the probe"));
                }
                count += 1;
            }
        }
    }
    let f = RatFunc::diff_pow(2, 0, 1, -2).map_err(err)?;
    let control = Connection::new(2, vec![q(0)], vec![Mat::scalar(1, &f), Mat::scalar(1, &f.scale(&q(-1)))]).map_err(err)?;
    if regularity_probe(&control, REGULARITY_LINES, DEFAULT_SEED).map_err(err)?.pass {
        return Err("the order-2 control passes".into());
    }
    Ok(format!("{count} KZ connections PASS on {REGULARITY_LINES} lines; order-2 control FAILS"))
}

fn criterion_8() -> Outcome {
    timed(AXIOM_BUDGET, || {
        let inst = WzwInstance::new(&LieAlgebra::sl2(), &[1], &q(1), 3).map_err(err)?;
        let data = TreeFunctorData::wzw(&inst).map_err(err)?;
        for order in 0..=1 {
            for r in [
                verify_pretree(&data, order).map_err(err)?,
                verify_treefunctor(&data, order).map_err(err)?,
                verify_pta(&data, order).map_err(err)?,
            ] {
                if !r.passed() || r.status() != treealg::axioms::Status::Pass {
                    return Err(format!("unmutated data: {r}"));
                }
            }
        }
        let tmp = tempfile::tempdir().map_err(err)?;
        let mutations = sample_mutations(&data, 20, DEFAULT_SEED);
        for (i, m) in mutations.iter().enumerate() {
            let mut x = data.clone();
            m.apply(&mut x).map_err(err)?;
            let dir = tmp.path().join(format!("m{i}"));
            x.write_dir(&dir).map_err(err)?;
            let d = dir.to_str().unwrap();
            let caught = ["pretree", "treefunctor", "pta"].iter().any(|k| {
                let code = run(["treealg", "verify", k, d, "--order", "1"]);
                code == 1
            });
            if !caught {
                return Err(format!("mutation {m} not caught"));
            }
        }
        Ok(format!("instance passes at orders 0 and 1; {} mutations caught with exit 1", mutations.len()))
    })
}

fn criterion_9() -> Outcome {
    let alg = LieAlgebra::sl2();
    let mut docs: Vec<(String, Value)> = Vec::new();
    let kz = kz_build(&alg, &[1, 1, 2], &qf(3, 2)).map_err(err)?;
    docs.push(("kz".into(), kz.to_json()));
    for out in kz.channels() {
        docs.push((format!("channel {out}"), kz.restrict(out).map_err(err)?.connection.to_json()));
    }
    let f = &RatFunc::diff_pow(3, 0, 2, -2).map_err(err)? * &RatFunc::var(3, 1).scale(&qf(-5, 7));
    docs.push(("function".into(), f.to_json()));
    docs.push(("cocomposition".into(), cocompose(&f, &[2, 1], 3).map_err(err)?.to_json()));
    let inst = WzwInstance::new(&alg, &[1], &q(1), 2).map_err(err)?;
    let data = TreeFunctorData::wzw(&inst).map_err(err)?;
    let (_, gauges) = shifted(&data, 1).map_err(err)?;
    docs.push(("gauges".into(), gauges_to_json(&gauges)));
    let tmp = tempfile::tempdir().map_err(err)?;
    data.write_dir(tmp.path()).map_err(err)?;
    for entry in std::fs::read_dir(tmp.path()).map_err(err)? {
        let p = entry.map_err(err)?.path();
        let v: Value = serde_json::from_str(&std::fs::read_to_string(&p).map_err(err)?).map_err(err)?;
        docs.push((p.display().to_string(), v));
    }
    for (name, v) in &docs {
        if let Some(bad) = rationality_scan(v).first() {
            return Err(format!("{name}: {bad}"));
        }
    }
    Ok(format!("{} serialized artifacts, all numbers exact rationals", docs.len()))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("Euler/grading suite", criterion_1),
        ("co-operad coassociativity", criterion_2),
        ("KZ flatness", criterion_3),
        ("degree identity", criterion_4),
        ("abelian monodromy", criterion_5),
        ("monodromy and residue", criterion_6),
        ("regularity probe", criterion_7),
        ("axiom verifier", criterion_8),
        ("rationality scan", criterion_9),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        match f() {
            Ok(d) => println!("criterion {}: PASS {name}: {d}", i + 1),
            Err(d) => {
                failed += 1;
                println!("criterion {}: FAIL {name}: {d}", i + 1);
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
