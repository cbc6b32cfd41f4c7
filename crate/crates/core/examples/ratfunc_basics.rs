//! Arithmetic in Q[z][(z_i - z_j)^-1]: canonical forms, derivatives, grading.

use treealg::poly::Poly;
use treealg::rational::q;
use treealg::{OneForm, RatFunc};

fn main() -> treealg::Result<()> {
    let n = 3;
    // f = z_2 / ((z_0 - z_1)^2 (z_1 - z_2))
    let f = RatFunc::new(Poly::var(n, 2), vec![((0, 1), 2), ((1, 2), 1)])?;
    println!("f          = {f}");
    println!("deg f      = {:?}", f.degree());

    // (z_0 - z_1) * f cancels one power of the pole
    let g = &RatFunc::diff_pow(n, 0, 1, 1)? * &f;
    println!("(z0-z1) f  = {g}");

    // written with the pair reversed, the same function normalizes identically
    let h = RatFunc::new(Poly::var(n, 2).neg(), vec![((1, 0), 2), ((2, 1), 1)])?;
    assert_eq!(f, h);

    let df = OneForm::differential(&f);
    for (i, c) in df.components().iter().enumerate() {
        println!("d{i} f       = {c}");
    }

    // Euler: sum z_i d_i f = (deg f) f
    let e = df.euler_contraction();
    assert_eq!(e, f.scale(&q(f.degree().unwrap())));
    println!("Euler      = {e}");
    Ok(())
}
