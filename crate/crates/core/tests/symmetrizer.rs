use fibexp::linalg::Mat2;
use fibexp::symmetrizer::{is_admissible, solve_n, symmetric_points, SeedPair};
use num_bigint::BigInt;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn seed_mat() -> impl Strategy<Value = Mat2> {
    [1i64..=20, 1i64..=20, 1i64..=20, 1i64..=20]
        .prop_map(|[a, b, c, d]| Mat2::new(a, b, c, d))
        .prop_filter("non-singular", Mat2::is_member)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn solved_n_symmetrizes_the_whole_sequence(w0 in seed_mat(), w1 in seed_mat()) {
        if let Ok(n) = solve_n(&w0, &w1) {
            let seed = SeedPair::with_symmetrizer(w0, w1, n).unwrap();
            prop_assert_eq!(symmetric_points(&seed, 16).unwrap().len(), 16);
        }
    }

    #[test]
    fn scaled_n_still_symmetrizes(w0 in seed_mat(), w1 in seed_mat(), k in -5i64..=5) {
        prop_assume!(k != 0);
        if let Ok(n) = solve_n(&w0, &w1) {
            let scaled = n.scale(&BigInt::from(k));
            prop_assert!(SeedPair::with_symmetrizer(w0, w1, scaled).is_ok());
            prop_assert!(n.is_primitive());
        }
    }
}

#[test]
fn random_seeds_are_mostly_admissible() {
    let mut rng = ChaCha8Rng::seed_from_u64(20);
    let mut draw = || Mat2::new(rng.gen_range(1..=20), rng.gen_range(1..=20), rng.gen_range(1..=20), rng.gen_range(1..=20));
    let (mut tried, mut admissible) = (0, 0);
    while tried < 2000 {
        let (w0, w1) = (draw(), draw());
        if !(w0.is_member() && w1.is_member()) {
            continue;
        }
        tried += 1;
        if is_admissible(&w0, &w1).unwrap().admissible {
            admissible += 1;
        }
    }
    eprintln!("admissible seed pairs: {admissible} / {tried}");
    assert!(admissible * 2 > tried);
}
