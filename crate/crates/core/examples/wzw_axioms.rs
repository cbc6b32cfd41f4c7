//! Builds tree-functor data from sl2 WZW channels, runs the axiom verifiers,
//! then corrupts single entries and watches the verifiers catch them.

use treealg::axioms::{any_failure, sample_mutations, verify_pretree, verify_pta, verify_treefunctor};
use treealg::kz::WzwInstance;
use treealg::lie::LieAlgebra;
use treealg::rational::q;
use treealg::tree::TreeFunctorData;

fn main() -> treealg::Result<()> {
    let inst = WzwInstance::new(&LieAlgebra::sl2(), &[1], &q(1), 3)?;
    let data = TreeFunctorData::wzw(&inst)?;
    println!("{} tuples, {} primary", data.tuples.len(), data.primary().count());

    let order = 1;
    for report in [
        verify_pretree(&data, order)?,
        verify_treefunctor(&data, order)?,
        verify_pta(&data, order)?,
    ] {
        println!("{report}");
    }

    // the same data round-trips through a directory of JSON files
    let dir = std::env::temp_dir().join("treealg-wzw-example");
    data.write_dir(&dir)?;
    let back = TreeFunctorData::read_dir(&dir)?;
    println!("written to {} and read back: equal = {}", dir.display(), back.tuples == data.tuples);

    for m in sample_mutations(&data, 5, 1) {
        let mut bad = data.clone();
        m.apply(&mut bad)?;
        println!("mutation {m}: caught = {}", any_failure(&bad, order)?);
    }
    Ok(())
}
