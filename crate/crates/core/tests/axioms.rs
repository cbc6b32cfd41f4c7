use treealg::axioms::{any_failure, mutation_candidates, rationality_scan, sample_mutations, verify_pretree, verify_pta, verify_treefunctor, Status};
use treealg::kz::WzwInstance;
use treealg::lie::LieAlgebra;
use treealg::rational::q;
use treealg::tree::{TreeFunctorData, Tuple};

fn instance() -> TreeFunctorData {
    let inst = WzwInstance::new(&LieAlgebra::sl2(), &[1], &q(1), 3).unwrap();
    TreeFunctorData::wzw(&inst).unwrap()
}

#[test]
fn wzw_instance_passes_all_verifiers() {
    let d = instance();
    assert_eq!(verify_pretree(&d, 1).unwrap().status(), Status::Pass);
    assert_eq!(verify_treefunctor(&d, 1).unwrap().status(), Status::Pass);
    assert_eq!(verify_pta(&d, 1).unwrap().status(), Status::Pass);
    assert_eq!(verify_treefunctor(&d, 0).unwrap().status(), Status::Pass);
}

#[test]
fn every_single_entry_mutation_is_caught() {
    let d = instance();
    let mut missed = Vec::new();
    let mut total = 0;
    for kind in mutation_candidates(&d) {
        for m in kind {
            total += 1;
            let mut x = d.clone();
            m.apply(&mut x).unwrap();
            if !any_failure(&x, 1).unwrap() {
                missed.push(m.to_string());
            }
        }
    }
    assert!(total > 20);
    assert!(missed.is_empty(), "{} of {total} mutations missed: {missed:?}", missed.len());
}

#[test]
fn sampled_mutations_cover_every_kind() {
    let d = instance();
    let ms = sample_mutations(&d, 20, 7);
    assert_eq!(ms.len(), 20);
    assert_eq!(ms, sample_mutations(&d, 20, 7));
}

#[test]
fn permuted_connection_without_conjugation_fails_axiom_one() {
    let mut d = instance();
    let t = Tuple::new(vec![1, 1, 1], 1);
    let sigma = vec![1, 0, 2];
    let target = t.permuted(&sigma);
    let moved = d.tuples[&t].connection.pushforward(&sigma, 3).unwrap();
    assert_ne!(d.tuples[&target].connection, moved);
    d.tuples.get_mut(&target).unwrap().connection = moved;
    let r = verify_treefunctor(&d, 1).unwrap();
    assert_eq!(r.checks[0].status, Status::Fail, "{r}");
}

#[test]
fn serialized_data_is_exact() {
    let d = instance();
    let dir = tempfile::tempdir().unwrap();
    d.write_dir(dir.path()).unwrap();
    for entry in std::fs::read_dir(dir.path()).unwrap() {
        let s = std::fs::read_to_string(entry.unwrap().path()).unwrap();
        let v: serde_json::Value = serde_json::from_str(&s).unwrap();
        assert!(rationality_scan(&v).is_empty());
    }
}
