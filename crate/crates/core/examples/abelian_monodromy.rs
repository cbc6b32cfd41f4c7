//! Transports the rank-one connection a dlog(z_0 - z_1) around a loop and
//! compares with exp(-2 pi i a).

use num_complex::Complex64 as C64;
use treealg::connection::Connection;
use treealg::conventions::TRANSPORT_SIGN;
use treealg::monodromy::{transport, Path};
use treealg::rational::{q_to_f64, qf};

fn main() -> treealg::Result<()> {
    let a = qf(1, 3);
    let e = Connection::abelian_dlog(2, &[(0, 1)], &a)?;
    let base = [C64::new(0.5, 0.0), C64::new(0.0, 0.0)];
    let expected = (C64::i() * TRANSPORT_SIGN * 2.0 * std::f64::consts::PI * q_to_f64(&a)).exp();

    for windings in 1..=3 {
        let path = Path::auto_loop(&base, 0, 1, Some(0.5), 64, windings)?;
        let r = transport(&e, &path, 1e-12)?;
        let m = r.matrix[(0, 0)];
        let want = expected.powu(windings);
        println!(
            "windings {windings}: M = {:.12} {:+.12}i  expected {:.12} {:+.12}i  |diff| {:.1e}  ({} steps)",
            m.re,
            m.im,
            want.re,
            want.im,
            (m - want).norm(),
            r.steps
        );
    }
    Ok(())
}
