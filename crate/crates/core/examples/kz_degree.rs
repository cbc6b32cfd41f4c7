//! Restricts a KZ connection to its invariant channels and compares each
//! channel's Euler degree with the conformal-weight prediction.

use treealg::kz::kz_build;
use treealg::lie::{spin_label, LieAlgebra};
use treealg::rational::q;

fn main() -> treealg::Result<()> {
    let sl2 = LieAlgebra::sl2();
    let level = q(1);
    for weights in [vec![1, 1], vec![1, 1, 1, 1], vec![2, 2]] {
        let kz = kz_build(&sl2, &weights, &level)?;
        let labels: Vec<String> = weights.iter().map(|&m| spin_label(m)).collect();
        println!("inputs ({}), k = {level}", labels.join(", "));
        for out in kz.channels() {
            let ch = kz.restrict(out)?;
            let (measured, predicted) = kz.degree_identity(out)?;
            println!(
                "  -> spin {:<4} rank {}  degree {:<6} predicted {:<6} alpha {}",
                spin_label(out),
                ch.rank(),
                measured.to_string(),
                predicted.to_string(),
                kz.alpha(out)?
            );
        }
    }
    Ok(())
}
