use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use topocryst::analysis::{classify_3d, dual_lattice, point_group, shortest_vectors, Class3d};
use topocryst::lattice::{parse_lattice, AnyLattice, Lattice};
use topocryst::linalg::Mat;
use topocryst::scalar::{ratio, Rational};
use topocryst::verify::{brute_force_shortest, random_box_safe_basis, random_orthogonal};

fn int_basis(d: usize) -> impl Strategy<Value = Lattice<Rational>> {
    proptest::collection::vec(-4i64..=4, d * d).prop_filter_map("singular", move |xs| {
        let rows: Vec<&[i64]> = xs.chunks(d).collect();
        let m = Mat::from_fn(d, d, |i, j| ratio(rows[j][i], 1));
        Lattice::new(m).ok()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn dual_of_dual_is_identity(l in int_basis(3)) {
        prop_assert!(dual_lattice(&dual_lattice(&l)).same_lattice(&l));
    }

    #[test]
    fn shortest_vectors_are_basis_independent(seed in any::<u64>(), d in 2usize..=3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let l = random_box_safe_basis(&mut rng, d, 6);
        let (alpha_sq, set) = brute_force_shortest(&l, 6);
        let k = shortest_vectors(&l);
        prop_assert_eq!(&k.alpha_sq, &alpha_sq);
        prop_assert_eq!(k.vectors.iter().cloned().collect::<std::collections::BTreeSet<_>>(), set);
    }

    #[test]
    fn point_group_is_a_group(l in int_basis(2)) {
        let g = point_group(&l);
        prop_assert!(g.is_group());
        prop_assert!(g.contains_central_inversion());
    }

    #[test]
    fn text_roundtrip(l in int_basis(3)) {
        match parse_lattice(&l.to_text()).unwrap() {
            AnyLattice::Exact(back) => prop_assert_eq!(back, l),
            AnyLattice::Float(_) => prop_assert!(false, "integer text parsed as float"),
        }
    }

    #[test]
    fn classification_is_similarity_invariant(seed in any::<u64>(), which in 0usize..3, s in 0.1f64..10.0) {
        let (l, class) = [(Lattice::cubic(3), Class3d::Cubic), (Lattice::bcc(), Class3d::Bcc), (Lattice::fcc(), Class3d::Fcc)][which].clone();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let q = random_orthogonal(&mut rng, 3).scale(&s);
        let moved = l.to_f64().transformed(&q).unwrap();
        prop_assert_eq!(classify_3d(&moved).unwrap().0, class);
    }

    #[test]
    fn perturbed_reference_lattices_are_not_os(
        which in 0usize..3,
        noise in proptest::collection::vec(0.02f64..0.2, 9),
        signs in proptest::collection::vec(any::<bool>(), 9),
    ) {
        let base = [Lattice::cubic(3), Lattice::bcc(), Lattice::fcc()][which].basis().to_f64();
        let delta = Mat::from_fn(3, 3, |i, j| if signs[3 * i + j] { noise[3 * i + j] } else { -noise[3 * i + j] });
        if let Ok(l) = Lattice::new(base.sub(&delta)) {
            prop_assert_eq!(classify_3d(&l).unwrap().0, Class3d::NotOs);
        }
    }
}

#[test]
fn reference_files_parse() {
    let dir = concat!(env!("CARGO_MANIFEST_DIR"), "/data");
    let read = |f: &str| std::fs::read_to_string(format!("{dir}/{f}")).unwrap();
    let AnyLattice::Exact(fcc) = parse_lattice(&read("l_d.lat")).unwrap() else { panic!() };
    assert!(fcc.same_lattice(&Lattice::fcc()));
    let AnyLattice::Exact(bcc) = parse_lattice(&read("l_dt.lat")).unwrap() else { panic!() };
    assert!(bcc.same_lattice(&Lattice::bcc()));
    let AnyLattice::Exact(z) = parse_lattice(&read("z3.lat")).unwrap() else { panic!() };
    assert!(z.same_lattice(&Lattice::cubic(3)));
}
