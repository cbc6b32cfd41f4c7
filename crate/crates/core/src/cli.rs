//! Command-line driver. Every command prints a short human-readable summary
//! followed by a JSON report that embeds the sign conventions in force.
//!
//! Exit codes: 0 when all checks pass, 1 when a verification fails, 2 on
//! malformed input or usage errors.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path as FsPath, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde_json::{json, Value};

use crate::axioms::{gauges_from_json, identity_gauges, shifted, verify_iso, verify_pretree, verify_pta, verify_treefunctor, Report};
use crate::connection::{Connection, GaugeMap};
use crate::conventions::{conventions_json, FlatnessConvention};
use crate::cooperad::cocompose;
use crate::error::{Error, Result};
use crate::kz::{kz_build, KzData, WzwInstance};
use crate::lie::LieAlgebra;
use crate::monodromy::{cmat_json, monodromy_vs_residue, regularity_probe, residue, transport, Path};
use crate::rational::{parse_q, q_to_string};
use crate::ratfunc::RatFunc;
use crate::tree::{read_json, TreeFunctorData};

/// Seed used by sampling commands when `--seed` is not given.
pub const DEFAULT_SEED: u64 = 20240611;

#[derive(Parser, Debug)]
#[command(name = "treealg", version, about = "Flat connections, KZ channels, monodromy and tree-algebra axiom checks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ConventionArg {
    Paper,
    Standard,
    Both,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum VerifyKind {
    Pretree,
    Treefunctor,
    Pta,
    Iso,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Flatness of a connection, with a witness pair on failure.
    CheckFlat {
        conn: PathBuf,
        #[arg(long, value_enum, default_value = "both")]
        convention: ConventionArg,
    },
    /// Degree of a flat connection, or of one channel of a stored KZ connection.
    Degree {
        conn: PathBuf,
        /// Output weight of the channel (KZ files only).
        #[arg(long)]
        channel: Option<u32>,
        /// Reference connection (default: the trivial one).
        #[arg(long)]
        reference: Option<PathBuf>,
    },
    /// Gauge transform by a stored gauge map; with `--against`, checks the relation.
    Gauge {
        conn: PathBuf,
        #[arg(long)]
        map: PathBuf,
        #[arg(long)]
        against: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Truncated cocomposition of a stored rational function.
    Cocompose {
        func: PathBuf,
        #[arg(long, value_delimiter = ',', required = true)]
        partition: Vec<usize>,
        #[arg(long, default_value_t = 2)]
        order: i64,
    },
    /// Builds a KZ connection.
    Kz {
        #[arg(long, default_value = "sl2")]
        algebra: String,
        /// Highest weights (twice the spin for sl2).
        #[arg(long, value_delimiter = ',', required = true)]
        weights: Vec<u32>,
        #[arg(long)]
        level: String,
        #[arg(long)]
        out: PathBuf,
    },
    /// Restricts a stored KZ connection to the channel of one output weight.
    Restrict {
        conn: PathBuf,
        #[arg(long)]
        output: u32,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Parallel transport along a stored path, or around an automatic loop.
    Monodromy {
        conn: PathBuf,
        #[arg(long)]
        path: Option<PathBuf>,
        /// Loop `z_i` around `z_j`, as `i,j`.
        #[arg(long, value_delimiter = ',')]
        pair: Vec<usize>,
        /// Base point, comma-separated; each coordinate `x` or `x:y` for `x + iy`.
        #[arg(long)]
        base: Option<String>,
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
        #[arg(long, default_value_t = 1)]
        windings: u32,
    },
    /// Residue along `z_i = z_j`; with `--compare`, against loop monodromy.
    Residue {
        conn: PathBuf,
        #[arg(long, value_delimiter = ',', required = true)]
        pair: Vec<usize>,
        #[arg(long)]
        compare: bool,
        #[arg(long)]
        base: Option<String>,
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
    },
    /// Pole orders along random lines.
    Regularity {
        conn: PathBuf,
        #[arg(long, default_value_t = 64)]
        lines: usize,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
    /// Axiom verification over a data directory or a generated WZW instance.
    Verify {
        #[arg(value_enum)]
        kind: VerifyKind,
        dir: Option<PathBuf>,
        /// Target data directory (iso only).
        #[arg(long)]
        target: Option<PathBuf>,
        /// Gauge maps of the isomorphism (iso only).
        #[arg(long)]
        gauges: Option<PathBuf>,
        /// Without `--target`, compares with the data shifted by this weight.
        #[arg(long, default_value_t = 0)]
        shift: i64,
        #[arg(long, default_value_t = 1)]
        order: i64,
        /// Generate a WZW instance over these labels instead of reading `dir`.
        #[arg(long, value_delimiter = ',')]
        wzw: Vec<u32>,
        #[arg(long, default_value = "sl2")]
        algebra: String,
        #[arg(long, default_value = "1")]
        level: String,
        #[arg(long, default_value_t = 3)]
        max_inputs: usize,
        /// Write the generated data to this directory.
        #[arg(long)]
        write: Option<PathBuf>,
    },
}

/// Outcome of one command: a summary, a JSON body and whether it passed.
struct Outcome {
    summary: String,
    body: Value,
    pass: bool,
}

/// Parses `argv` (including the program name) and runs the command.
pub fn run<I, S>(argv: I) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    configure_threads();
    let name = command_name(&cli.command);
    match dispatch(cli.command) {
        Ok(o) => {
            println!("{}", o.summary.trim_end());
            let report = json!({
                "command": name,
                "status": if o.pass { "PASS" } else { "FAIL" },
                "conventions": conventions_json(),
                "result": o.body,
            });
            println!("--- report ---");
            println!("{}", serde_json::to_string_pretty(&report).unwrap());
            if o.pass {
                0
            } else {
                1
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::NotFlat(..)
        | Error::DegreeIdentity { .. }
        | Error::NotHomogeneous(..)
        | Error::NonConstantResidue(..)
        | Error::NotInvertible => 1,
        _ => 2,
    }
}

fn configure_threads() {
    if let Some(n) = std::env::var("TREEALG_THREADS").ok().and_then(|s| s.parse::<usize>().ok()) {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
    }
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::CheckFlat { .. } => "check-flat",
        Command::Degree { .. } => "degree",
        Command::Gauge { .. } => "gauge",
        Command::Cocompose { .. } => "cocompose",
        Command::Kz { .. } => "kz",
        Command::Restrict { .. } => "restrict",
        Command::Monodromy { .. } => "monodromy",
        Command::Residue { .. } => "residue",
        Command::Regularity { .. } => "regularity",
        Command::Verify { .. } => "verify",
    }
}

fn write_json(path: &FsPath, v: &Value) -> Result<()> {
    let mut s = serde_json::to_string_pretty(v).map_err(|e| Error::Io(e.to_string()))?;
    s.push('\n');
    fs::write(path, s).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

/// A connection file holds either a bare connection or KZ data.
fn load_conn(path: &FsPath) -> Result<(Connection, Option<KzData>)> {
    let v = read_json(path)?;
    let p = path.display().to_string();
    if v.get("algebra").is_some() {
        let kz = KzData::from_json(&v, &p)?;
        Ok((kz.full_connection(), Some(kz)))
    } else {
        Ok((Connection::from_json(&v, &p)?, None))
    }
}

fn parse_base(s: Option<&str>, n: usize) -> Result<Vec<Complex64>> {
    let Some(s) = s else {
        return Ok((0..n).map(|v| Complex64::new(v as f64, 0.0)).collect());
    };
    let bad = || crate::error::parse_err("--base", format!("cannot read {s:?}"));
    let pts = s
        .split(',')
        .map(|c| {
            let mut it = c.split(':');
            let re: f64 = it.next().ok_or_else(bad)?.trim().parse().map_err(|_| bad())?;
            let im: f64 = match it.next() {
                Some(x) => x.trim().parse().map_err(|_| bad())?,
                None => 0.0,
            };
            Ok(Complex64::new(re, im))
        })
        .collect::<Result<Vec<_>>>()?;
    if pts.len() != n {
        return Err(crate::error::parse_err("--base", format!("expected {n} coordinates, got {}", pts.len())));
    }
    Ok(pts)
}

fn pair_arg(pair: &[usize]) -> Result<(usize, usize)> {
    match pair {
        [i, j] => Ok((*i, *j)),
        _ => Err(crate::error::parse_err("--pair", "expected two indices i,j")),
    }
}

fn dispatch(c: Command) -> Result<Outcome> {
    match c {
        Command::CheckFlat { conn, convention } => {
            let (e, _) = load_conn(&conn)?;
            let conventions = match convention {
                ConventionArg::Paper => vec![FlatnessConvention::Paper],
                ConventionArg::Standard => vec![FlatnessConvention::Standard],
                ConventionArg::Both => vec![FlatnessConvention::Paper, FlatnessConvention::Standard],
            };
            let mut summary = String::new();
            let mut results = Vec::new();
            let mut pass = true;
            for conv in conventions {
                let f = e.is_flat(conv)?;
                pass &= f.flat;
                match &f.witness {
                    None => summary += &format!("{}: flat\n", conv.name()),
                    Some((i, j, _)) => summary += &format!("{}: NOT flat, witness pair ({i},{j})\n", conv.name()),
                }
                results.push(json!({
                    "convention": conv.name(),
                    "flat": f.flat,
                    "witness": f.witness.as_ref().map(|(i, j, m)| json!({"pair": [i, j], "curvature": m.to_json()})),
                }));
            }
            Ok(Outcome {
                summary,
                body: json!(results),
                pass,
            })
        }
        Command::Degree { conn, channel, reference } => {
            let (e, kz) = load_conn(&conn)?;
            if let Some(out) = channel {
                let kz = kz.ok_or_else(|| crate::error::parse_err(conn.display().to_string(), "--channel needs a KZ file"))?;
                let (computed, predicted) = kz.degree_identity(out)?;
                return Ok(Outcome {
                    summary: format!("{}\n", q_to_string(&computed)),
                    body: json!({"channel": out, "degree": q_to_string(&computed), "predicted": q_to_string(&predicted)}),
                    pass: computed == predicted,
                });
            }
            let r = match reference {
                Some(p) => Some(load_conn(&p)?.0),
                None => None,
            };
            let d = e.degree(r.as_ref())?;
            Ok(Outcome {
                summary: match &d {
                    Some(d) => format!("{}\n", q_to_string(d)),
                    None => "degree is not a scalar multiple of the identity\n".into(),
                },
                body: json!({"degree": d.as_ref().map(q_to_string)}),
                pass: d.is_some(),
            })
        }
        Command::Gauge { conn, map, against, out } => {
            let (e, _) = load_conn(&conn)?;
            let g = GaugeMap::from_json(&read_json(&map)?, e.n_vars(), &map.display().to_string())?;
            let f = e.gauge_transform(&g)?;
            if let Some(p) = &out {
                write_json(p, &f.to_json())?;
            }
            let (pass, summary) = match against {
                Some(p) => {
                    let other = load_conn(&p)?.0;
                    let same = e.same_monodromy(&other, &g)?;
                    (same, if same { "gauge relation holds\n".to_string() } else { "gauge relation FAILS\n".to_string() })
                }
                None => (true, "gauge transform computed\n".to_string()),
            };
            Ok(Outcome {
                summary,
                body: json!({"transformed": f.to_json(), "degree": q_to_string(g.degree())}),
                pass,
            })
        }
        Command::Cocompose { func, partition, order } => {
            let f = RatFunc::from_json(&read_json(&func)?, &func.display().to_string())?;
            let t = cocompose(&f, &partition, order)?;
            Ok(Outcome {
                summary: format!("cocomposition along {partition:?} up to t-degree {order}\n"),
                body: t.to_json(),
                pass: true,
            })
        }
        Command::Kz { algebra, weights, level, out } => {
            let alg = LieAlgebra::by_name(&algebra)?;
            let k = parse_q(&level).map_err(|_| crate::error::parse_err("--level", "not an exact rational"))?;
            let kz = kz_build(&alg, &weights, &k)?;
            write_json(&out, &kz.to_json())?;
            Ok(Outcome {
                summary: format!("wrote KZ connection for weights {weights:?} at level {level} to {}\n", out.display()),
                body: json!({"out": out.display().to_string(), "rank": kz.full_connection().rank(), "channels": kz.channels()}),
                pass: true,
            })
        }
        Command::Restrict { conn, output, out } => {
            let (_, kz) = load_conn(&conn)?;
            let kz = kz.ok_or_else(|| crate::error::parse_err(conn.display().to_string(), "restrict needs a KZ file"))?;
            let ch = kz.restrict(output)?;
            if let Some(p) = &out {
                write_json(p, &ch.connection.to_json())?;
            }
            Ok(Outcome {
                summary: format!("channel {output}: rank {}\n", ch.rank()),
                body: json!({"output": output, "rank": ch.rank(), "connection": ch.connection.to_json()}),
                pass: true,
            })
        }
        Command::Monodromy { conn, path, pair, base, tol, windings } => {
            let (e, _) = load_conn(&conn)?;
            let path = match path {
                Some(p) => Path::from_json(&read_json(&p)?, &p.display().to_string())?,
                None => {
                    let (i, j) = pair_arg(&pair)?;
                    Path::auto_loop(&parse_base(base.as_deref(), e.n_vars())?, i, j, None, 64, windings)?
                }
            };
            let r = transport(&e, &path, tol)?;
            Ok(Outcome {
                summary: format!("transport: {} steps, {} rejected, error estimate {:.3e}\n", r.steps, r.rejected, r.error_estimate),
                body: r.to_json(),
                pass: true,
            })
        }
        Command::Residue { conn, pair, compare, base, tol } => {
            let (e, _) = load_conn(&conn)?;
            let (i, j) = pair_arg(&pair)?;
            let r = residue(&e, i, j)?;
            let mut body = json!({"pair": [i, j], "pole_order": r.pole_order, "residue": r.matrix.to_json()});
            let mut summary = format!("pole order {} along z_{i} = z_{j}\n", r.pole_order);
            if compare {
                let c = monodromy_vs_residue(&e, i, j, &parse_base(base.as_deref(), e.n_vars())?, tol)?;
                summary += &format!("monodromy vs exp(residue): max eigenvalue mismatch {:.3e}\n", c.max_mismatch);
                body["comparison"] = c.to_json();
                body["monodromy"] = cmat_json(&c.transport.matrix);
            }
            Ok(Outcome { summary, body, pass: true })
        }
        Command::Regularity { conn, lines, seed } => {
            let (e, _) = load_conn(&conn)?;
            let r = regularity_probe(&e, lines, seed)?;
            let worst = r.worst().map_or(0, |l| l.max_order());
            Ok(Outcome {
                summary: format!("{} lines, seed {seed}, max pole order {worst}: {}\n", lines, if r.pass { "PASS" } else { "FAIL" }),
                body: r.to_json(),
                pass: r.pass,
            })
        }
        Command::Verify {
            kind,
            dir,
            target,
            gauges,
            shift,
            order,
            wzw,
            algebra,
            level,
            max_inputs,
            write,
        } => {
            let data = if wzw.is_empty() {
                let dir = dir.ok_or_else(|| crate::error::parse_err("verify", "give a data directory or --wzw labels"))?;
                TreeFunctorData::read_dir(&dir)?
            } else {
                let alg = LieAlgebra::by_name(&algebra)?;
                let k = parse_q(&level).map_err(|_| crate::error::parse_err("--level", "not an exact rational"))?;
                TreeFunctorData::wzw(&WzwInstance::new(&alg, &wzw, &k, max_inputs)?)?
            };
            if let Some(w) = &write {
                data.write_dir(w)?;
            }
            let report: Report = match kind {
                VerifyKind::Pretree => verify_pretree(&data, order)?,
                VerifyKind::Treefunctor => verify_treefunctor(&data, order)?,
                VerifyKind::Pta => verify_pta(&data, order)?,
                VerifyKind::Iso => {
                    let (b, g): (TreeFunctorData, BTreeMap<_, _>) = match target {
                        Some(t) => {
                            let b = TreeFunctorData::read_dir(&t)?;
                            let g = match gauges {
                                Some(p) => gauges_from_json(&read_json(&p)?, &p.display().to_string())?,
                                None => identity_gauges(&data),
                            };
                            (b, g)
                        }
                        None => shifted(&data, shift)?,
                    };
                    verify_iso(&data, &b, &g, order)?
                }
            };
            Ok(Outcome {
                summary: report.to_string(),
                body: report.to_json(),
                pass: report.passed(),
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kz_then_check_flat_and_degree() {
        let dir = tempfile::tempdir().unwrap();
        let c = dir.path().join("c.conn");
        let c = c.to_str().unwrap();
        assert_eq!(run(["treealg", "kz", "--algebra", "sl2", "--weights", "1,1", "--level", "1", "--out", c]), 0);
        assert_eq!(run(["treealg", "check-flat", c, "--convention", "both"]), 0);
        assert_eq!(run(["treealg", "degree", c, "--channel", "0"]), 0);
        assert_eq!(run(["treealg", "regularity", c, "--seed", "3"]), 0);
    }

    #[test]
    fn non_flat_exits_one_and_bad_input_two() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("nonflat.conn");
        // E_1 = z_2 dz_1 has curl -1
        let e = Connection::new(
            2,
            vec![crate::rational::q(0)],
            vec![
                crate::matrix::Mat::scalar(1, &RatFunc::var(2, 1)),
                crate::matrix::Mat::zeros(2, 1, 1),
            ],
        )
        .unwrap();
        write_json(&p, &e.to_json()).unwrap();
        assert_eq!(run(["treealg", "check-flat", p.to_str().unwrap()]), 1);
        let bad = dir.path().join("bad.conn");
        fs::write(&bad, "{\"n\": 2,").unwrap();
        assert_eq!(run(["treealg", "check-flat", bad.to_str().unwrap()]), 2);
        assert_eq!(run(["treealg", "check-flat", "--nope"]), 2);
    }
}
