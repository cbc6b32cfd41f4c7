//! Loop monodromy of KZ channels around z_0 = z_1, checked against the
//! exponentiated residue, and invariance under a perturbed loop.

use num_complex::Complex64 as C64;
use treealg::kz::kz_build;
use treealg::lie::{spin_label, LieAlgebra};
use treealg::monodromy::{frobenius, monodromy_vs_residue, residue, transport, Path};
use treealg::rational::q;

fn main() -> treealg::Result<()> {
    let sl2 = LieAlgebra::sl2();
    let kz = kz_build(&sl2, &[1, 1, 1], &q(1))?;
    let base = [C64::new(0.0, 0.0), C64::new(1.0, 0.0), C64::new(3.0, 0.5)];

    for out in kz.channels() {
        let ch = kz.restrict(out)?;
        let res = residue(&ch.connection, 0, 1)?;
        let cmp = monodromy_vs_residue(&ch.connection, 0, 1, &base, 1e-12)?;
        println!(
            "output spin {}: rank {}, pole order {}, eigenvalue mismatch {:.1e}",
            spin_label(out),
            ch.rank(),
            res.pole_order,
            cmp.max_mismatch
        );
        for (p, m) in cmp.predicted.iter().zip(&cmp.monodromy_eigenvalues) {
            println!("    predicted {:+.6} {:+.6}i   transported {:+.6} {:+.6}i", p.re, p.im, m.re, m.im);
        }

        // a smaller loop around the same pole gives the same matrix
        let centre = [C64::new(0.55, -0.03), C64::new(0.5, 0.0), base[2]];
        let small = Path::auto_loop(&centre, 0, 1, Some(0.3), 47, 1)?;
        let start = Path::new(vec![base.to_vec(), centre.to_vec()], 1e-6)?;
        let conj = start.then(&small)?.then(&start.reversed())?;
        let m = transport(&ch.connection, &conj, 1e-12)?;
        println!("    perturbed loop |M - M'| = {:.1e}", frobenius(&(&m.matrix - &cmp.transport.matrix)));
    }
    Ok(())
}
