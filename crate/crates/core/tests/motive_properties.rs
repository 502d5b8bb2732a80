use std::sync::Arc;

use fcrystal_core::blocks::{abelian_from_ap, AbelianBlock, LatticeData, TorusData};
use fcrystal_core::motive::{
    assemble, cartier_dual, check_pairing, dual_basis_map, pair, permutation_matrix, random_spec,
    tdr_dimension, torsion_height, verify_motive, OneMotiveSpec, SpecShape,
};
use fcrystal_core::semilinear::{newton_slopes, SlopeProfile, WMatrix};
use fcrystal_core::witt::WittRing;
use num_rational::Ratio;
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::SeedableRng;

const RINGS: &[(u64, u32, u32)] = &[(5, 6, 1), (3, 5, 1), (7, 4, 1), (3, 4, 2), (2, 5, 1)];

fn spec(i: usize, seed: u64) -> OneMotiveSpec {
    let (p, n, a) = RINGS[i];
    let r = WittRing::from_params(p, n, a, None).unwrap();
    let shape = SpecShape {
        max_lattice: 3,
        max_torus: 3,
        max_genus: 2,
    };
    random_spec(&r, shape, &mut StdRng::seed_from_u64(seed))
}

proptest! {
    #[test]
    fn three_rank_counts_agree(i in 0..RINGS.len(), seed in any::<u64>(), n in 1u32..5) {
        let s = spec(i, seed);
        let rank = assemble(&s).unwrap().module().rank();
        let (height, exponent) = torsion_height(&s, n);
        prop_assert_eq!(rank, height);
        prop_assert_eq!(rank, tdr_dimension(&s));
        prop_assert_eq!(exponent, u64::from(n) * height as u64);
    }

    #[test]
    fn random_specs_pass_every_item(i in 0..RINGS.len(), seed in any::<u64>()) {
        let s = spec(i, seed);
        let rep = verify_motive(&assemble(&s).unwrap());
        let failed: Vec<_> = rep.items.iter().filter(|it| !it.passed).collect();
        prop_assert!(failed.is_empty(), "{:?}", failed);
        let (x, t, g) = s.ranks();
        prop_assert_eq!(rep.graded_ranks, (x, 2 * g, t));
    }

    #[test]
    fn dual_realizes_the_twisted_dual(i in 0..RINGS.len(), seed in any::<u64>()) {
        let s = spec(i, seed);
        let (x, t, g) = s.ranks();
        let m = assemble(&s).unwrap();
        let dual = cartier_dual(&s).unwrap();
        let md = assemble(&dual).unwrap();
        let witness = permutation_matrix(s.ring(), &dual_basis_map(x, t, g));
        prop_assert!(m.module().twisted_dual().unwrap().check_isomorphism(md.module(), &witness).is_ok());
        let back = cartier_dual(&dual).unwrap();
        let mb = assemble(&back).unwrap();
        prop_assert_eq!(mb.module(), m.module());
        prop_assert_eq!(back.label(), s.label());
        let gram = pair(&m, &md).unwrap();
        prop_assert!(check_pairing(m.module(), md.module(), &gram).unwrap().passed());
    }

    #[test]
    fn rescaling_ext_by_units_is_an_isomorphism(i in 0..RINGS.len(), seed in any::<u64>(), u in 1i64..50, w in 1i64..50) {
        let s = spec(i, seed);
        let p = s.ring().p() as i64;
        prop_assume!(u % p != 0 && w % p != 0);
        let (scaled, base) = s.rescale_ext(u, w).unwrap();
        let m = assemble(&s).unwrap();
        let ms = assemble(&scaled).unwrap();
        prop_assert!(m.module().check_isomorphism(ms.module(), &base).is_ok());
    }

    #[test]
    fn slopes_ignore_the_extension(seed in any::<u64>()) {
        let r = WittRing::from_params(5, 8, 1, None).unwrap();
        let s = random_spec(&r, SpecShape::default(), &mut StdRng::seed_from_u64(seed));
        let (x, t, _) = s.ranks();
        let whole = newton_slopes(assemble(&s).unwrap().module()).unwrap();
        let mut pieces = vec![Ratio::from_integer(0); t];
        pieces.extend(std::iter::repeat_n(Ratio::from_integer(1), x));
        if s.abelian().dim() > 0 {
            pieces.extend(newton_slopes(s.abelian().crystal()).unwrap().multiset());
        }
        prop_assert_eq!(whole, SlopeProfile::from_slopes(pieces));
    }
}

fn ring(p: u64, n: u32) -> Arc<WittRing> {
    WittRing::from_params(p, n, 1, None).unwrap()
}

fn split(r: &Arc<WittRing>, x: usize, t: usize, abelian: AbelianBlock, label: &str) -> OneMotiveSpec {
    OneMotiveSpec::split(r, LatticeData::trivial(x), TorusData::trivial(t), abelian, label).unwrap()
}

#[test]
fn height_and_tdr_examples() {
    let r = ring(5, 4);
    let kummer = split(&r, 1, 1, AbelianBlock::zero(&r), "kummer");
    assert_eq!(torsion_height(&kummer, 1), (2, 2));
    assert_eq!(tdr_dimension(&kummer), 2);
    let elliptic = split(&r, 0, 0, abelian_from_ap(1, &r).unwrap(), "elliptic");
    assert_eq!(torsion_height(&elliptic, 3), (2, 6));
    assert_eq!(tdr_dimension(&elliptic), 2);
    let zero = split(&r, 0, 0, AbelianBlock::zero(&r), "zero");
    assert_eq!(torsion_height(&zero, 1), (0, 0));
    assert_eq!(tdr_dimension(&zero), 0);
}

#[test]
fn pairing_examples() {
    let r = ring(5, 4);
    let torus = split(&r, 0, 1, AbelianBlock::zero(&r), "torus");
    let m = assemble(&torus).unwrap();
    let md = assemble(&cartier_dual(&torus).unwrap()).unwrap();
    assert_eq!(cartier_dual(&torus).unwrap().ranks(), (1, 0, 0));
    assert_eq!(pair(&m, &md).unwrap(), WMatrix::from_ints(&r, &[vec![1]]).unwrap());

    let kummer = split(&r, 1, 1, AbelianBlock::zero(&r), "kummer");
    let m = assemble(&kummer).unwrap();
    let md = assemble(&cartier_dual(&kummer).unwrap()).unwrap();
    let gram = pair(&m, &md).unwrap();
    assert_eq!(gram, WMatrix::from_ints(&r, &[vec![0, 1], vec![1, 0]]).unwrap());
    assert!(check_pairing(m.module(), md.module(), &gram).unwrap().passed());

    let ss = split(&r, 0, 0, abelian_from_ap(0, &r).unwrap(), "ss");
    let m = assemble(&ss).unwrap();
    let md = assemble(&cartier_dual(&ss).unwrap()).unwrap();
    let gram = pair(&m, &md).unwrap();
    let lhs = &(&m.module().f().transpose() * &gram) * md.module().f();
    assert_eq!(lhs, gram.sigma().scale_int(5));
    assert!(pair(&m, &m).is_ok());
    assert!(pair(&assemble(&kummer).unwrap(), &m).is_err());
}
