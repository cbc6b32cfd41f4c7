//! Pulls connections back to random rational lines and reports pole orders.
//! KZ connections have simple poles everywhere; a 1/(z_0 - z_1)^2 term does not.

use treealg::connection::Connection;
use treealg::kz::kz_build;
use treealg::lie::LieAlgebra;
use treealg::matrix::Mat;
use treealg::monodromy::regularity_probe;
use treealg::rational::{q, q_to_string};
use treealg::RatFunc;

fn main() -> treealg::Result<()> {
    let kz = kz_build(&LieAlgebra::sl2(), &[1, 1, 1], &q(1))?;
    let report = regularity_probe(&kz.full_connection(), 64, 7)?;
    println!("KZ (1/2,1/2,1/2): regular = {} on {} lines", report.pass, report.lines.len());

    let f = RatFunc::diff_pow(2, 0, 1, -2)?;
    let g = f.scale(&q(-1));
    let bad = Connection::new(2, vec![q(0)], vec![Mat::scalar(1, &f), Mat::scalar(1, &g)])?;
    let report = regularity_probe(&bad, 64, 7)?;
    println!("dz/(z_0 - z_1)^2 form: regular = {}", report.pass);
    if let Some(line) = report.worst() {
        let a: Vec<String> = line.a.iter().map(q_to_string).collect();
        let b: Vec<String> = line.b.iter().map(q_to_string).collect();
        println!("  worst line z = ({}) + t ({}): pole order {}", a.join(", "), b.join(", "), line.max_order());
    }
    Ok(())
}
