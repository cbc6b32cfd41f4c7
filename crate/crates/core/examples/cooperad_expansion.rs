//! Co-composition of a correlation function along a partition, and the two
//! iterated co-compositions along a refinement.

use treealg::cooperad::{cocompose, counit_holds, iterated_cocompositions, Refinement};
use treealg::poly::Poly;
use treealg::RatFunc;

fn main() -> treealg::Result<()> {
    // f = 1 / ((z_0 - z_1)(z_0 - z_2)(z_1 - z_2))
    let f = RatFunc::new(Poly::one(3), vec![((0, 1), 1), ((0, 2), 1), ((1, 2), 1)])?;
    let order = 2;

    let t = cocompose(&f, &[2, 1], order)?;
    let layout = t.layout();
    println!(
        "partition (2,1): {} inner + {} outer variables, t-degree <= {order}",
        layout.n_inner(),
        layout.n_outer()
    );
    for (d, part) in t.components() {
        println!("  t-degree {d}: {part}");
    }

    println!("counit holds: {}", counit_holds(&f, order)?);

    let r = Refinement { sub_blocks: vec![vec![1], vec![1, 1]] };
    let pair = iterated_cocompositions(&f, &r, order)?;
    println!(
        "refinement {:?}: routes agree = {}",
        r.sub_blocks,
        pair.via_blocks == pair.via_sub_blocks
    );
    Ok(())
}
