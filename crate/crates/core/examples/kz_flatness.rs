//! Builds KZ connections for sl2 and checks flatness under both conventions.

use treealg::connection::Connection;
use treealg::conventions::FlatnessConvention;
use treealg::kz::kz_build;
use treealg::lie::LieAlgebra;
use treealg::matrix::Mat;
use treealg::poly::Poly;
use treealg::rational::q;
use treealg::RatFunc;

fn main() -> treealg::Result<()> {
    let sl2 = LieAlgebra::sl2();
    for weights in [vec![1, 1], vec![1, 1, 1], vec![1, 2, 1], vec![1, 1, 1, 1]] {
        let kz = kz_build(&sl2, &weights, &q(1))?;
        let paper = kz.factored().is_flat(FlatnessConvention::Paper)?;
        let standard = kz.factored().is_flat(FlatnessConvention::Standard)?;
        let parts = kz.factored().curvature()?;
        let dim: usize = kz.reps().iter().map(|r| r.dim()).product();
        println!(
            "weights {weights:?}: dim {dim}, {} pairs, flat (paper) {paper}, flat (standard) {standard}",
            parts.len()
        );
    }

    // a rank-one form that is not closed: E_0 = z_1 / (z_0 - z_1)^2, E_1 = 0
    let f = RatFunc::new(Poly::var(2, 1), vec![((0, 1), 2)])?;
    let bad = Connection::new(2, vec![q(0)], vec![Mat::scalar(1, &f), Mat::zeros(2, 1, 1)])?;
    let verdict = bad.is_flat(FlatnessConvention::Standard)?;
    println!("z_1/(z_0 - z_1)^2 dz_0: flat {}", verdict.flat);
    if let Some((i, j, c)) = verdict.witness {
        println!("  curvature on pair ({i},{j}): {}", c.get(0, 0));
    }
    Ok(())
}
