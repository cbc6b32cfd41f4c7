//! Gauge transformations: a single connection gauged by a diagonal power, and
//! an isomorphism of tree-functor data whose labels all shift by a constant.

use treealg::axioms::{identity_gauges, shifted, verify_iso};
use treealg::connection::GaugeMap;
use treealg::kz::{kz_build, WzwInstance};
use treealg::lie::LieAlgebra;
use treealg::rational::{q, q_to_string};
use treealg::tree::TreeFunctorData;

fn main() -> treealg::Result<()> {
    let kz = kz_build(&LieAlgebra::sl2(), &[1, 1], &q(1))?;
    let e = kz.restrict(0)?.connection;
    let g = GaugeMap::diagonal_power(2, e.rank(), 0, 1, 1)?;
    let f = e.gauge_transform(&g)?;
    let show = |d: Option<treealg::Q>| d.map(|x| q_to_string(&x)).unwrap_or_else(|| "none".into());
    println!("channel degree {}, gauged degree {}", show(e.degree(None)?), show(f.degree(None)?));
    println!("gauge relates them: {}", e.same_monodromy(&f, &g)?);

    let inst = WzwInstance::new(&LieAlgebra::sl2(), &[1], &q(1), 2)?;
    let data = TreeFunctorData::wzw(&inst)?;
    println!("{}", verify_iso(&data, &data, &identity_gauges(&data), 1)?);

    let (moved, gauges) = shifted(&data, 1)?;
    println!("{}", verify_iso(&data, &moved, &gauges, 1)?);

    // the shifted data with the identity gauges is not an isomorphism
    let r = verify_iso(&data, &moved, &identity_gauges(&data), 1)?;
    println!("identity gauges against shifted data: {}", r.status().as_str());
    Ok(())
}
