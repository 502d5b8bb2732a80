use fcrystal_core::simplicial::{
    cocharacter_group, component_complex, div0_lattice, h1_weight_ledger, picard_skeleton,
    random_components, DivisorPresentation, PicardSkeleton, SimplicialComponents,
};
use fcrystal_core::semilinear::IntMatrix;
use fcrystal_core::witt::WittRing;
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

fn random_presentation(seed: u64) -> DivisorPresentation {
    let mut rng = StdRng::seed_from_u64(seed);
    let m = rng.gen_range(0..=5);
    let k = rng.gen_range(0..=4);
    let mut fill = |rows: usize| {
        let mut a = IntMatrix::zeros(rows, m);
        for i in 0..rows {
            for j in 0..m {
                a[(i, j)] = rng.gen_range(-2..=2);
            }
        }
        a
    };
    let (p0, p1, ns) = (fill(k), fill(k), fill(1));
    DivisorPresentation::new(m, p0, p1, ns).unwrap()
}

proptest! {
    #[test]
    fn boundaries_compose_to_zero(seed in any::<u64>()) {
        let s = random_components(6, &mut StdRng::seed_from_u64(seed));
        let cx = component_complex(&s).unwrap();
        prop_assert!(cx.d1.checked_mul(&cx.d2).unwrap().is_zero());
    }

    #[test]
    fn cocharacters_are_free_and_image_is_a_summand(seed in any::<u64>()) {
        let s = random_components(6, &mut StdRng::seed_from_u64(seed));
        let cx = component_complex(&s).unwrap();
        let g = cocharacter_group(&s).unwrap();
        prop_assert!(g.torsion_free());
        prop_assert!(g.image_direct_summand);
        prop_assert_eq!(g.rank, cx.d2.rows() - cx.d2.rank_q() - cx.d1.rank_q());
        prop_assert_eq!(g.basis.cols(), g.rank);
        prop_assert!(cx.d2.transpose().checked_mul(&g.basis).unwrap().is_zero());
    }

    #[test]
    fn div0_rank_matches_rank_nullity(seed in any::<u64>()) {
        let d = random_presentation(seed);
        let l = div0_lattice(&d).unwrap();
        let stacked = d.p0().checked_sub(d.p1()).unwrap().stack(d.ns()).unwrap();
        prop_assert!(l.rank <= d.m());
        prop_assert_eq!(l.rank, d.m() - stacked.rank_q());
        prop_assert!(stacked.checked_mul(&l.basis).unwrap().is_zero());
    }

    #[test]
    fn ledger_total_is_the_assembled_rank(x in 0usize..4, t in 0usize..4, g in 0usize..3) {
        let r = WittRing::from_params(3, 4, 1, None).unwrap();
        let sk = PicardSkeleton { lattice_rank: x, torus_rank: t, abelian_dim: g };
        let l = h1_weight_ledger(&sk, &r).unwrap();
        prop_assert!(l.consistent());
        prop_assert_eq!((l.gr0, l.gr1, l.gr2, l.total), (t, 2 * g, x, x + t + 2 * g));
    }
}

fn faces(levels: &[&[&[usize]]]) -> Vec<Vec<Vec<usize>>> {
    levels.iter().map(|l| l.iter().map(|f| f.to_vec()).collect()).collect()
}

#[test]
fn worked_examples() {
    let trivial = SimplicialComponents::new(vec![1, 1, 1], faces(&[&[&[0], &[0]], &[&[0], &[0], &[0]]])).unwrap();
    let cx = component_complex(&trivial).unwrap();
    assert!(cx.d1.is_zero());
    assert_eq!(cx.d2, IntMatrix::from_rows(&[vec![1]]).unwrap());
    assert_eq!(cocharacter_group(&trivial).unwrap().rank, 0);

    let nodal = SimplicialComponents::new(vec![1, 2, 1], faces(&[&[&[0, 0], &[0, 0]], &[&[0], &[0], &[0]]])).unwrap();
    let cx = component_complex(&nodal).unwrap();
    assert_eq!(cx.d1, IntMatrix::from_rows(&[vec![0, 0]]).unwrap());
    assert_eq!(cx.d2, IntMatrix::from_rows(&[vec![1], vec![0]]).unwrap());
    assert_eq!(cocharacter_group(&nodal).unwrap().rank, 1);

    for m in 0..=5 {
        let d = DivisorPresentation::points_on_curve(m);
        assert_eq!(div0_lattice(&d).unwrap().rank, m.saturating_sub(1));
        let sk = picard_skeleton(&trivial, &d, 2).unwrap();
        assert_eq!((sk.lattice_rank, sk.torus_rank, sk.abelian_dim), (m.saturating_sub(1), 0, 2));
    }
    let injective = DivisorPresentation::new(
        2,
        IntMatrix::from_rows(&[vec![1, 0], vec![0, 1]]).unwrap(),
        IntMatrix::zeros(2, 2),
        IntMatrix::zeros(0, 2),
    )
    .unwrap();
    assert_eq!(div0_lattice(&injective).unwrap().rank, 0);
    let sk = picard_skeleton(&nodal, &DivisorPresentation::points_on_curve(0), 1).unwrap();
    assert_eq!((sk.lattice_rank, sk.torus_rank, sk.abelian_dim), (0, 1, 1));

    let bad = SimplicialComponents::new(vec![1, 2, 1], faces(&[&[&[0, 0], &[0, 3]], &[&[0], &[0], &[0]]]));
    assert_eq!(bad.unwrap_err().code(), "invalid-simplicial");
}
