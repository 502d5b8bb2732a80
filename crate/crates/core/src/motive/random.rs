use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::Rng;

use super::{ExtData, OneMotiveSpec};
use crate::blocks::{abelian_from_ap, AbelianBlock, LatticeData, TorusData};
use crate::semilinear::{IntMatrix, WMatrix};
use crate::witt::WittRing;

/// Upper bounds for [`random_spec`].
#[derive(Clone, Copy, Debug)]
pub struct SpecShape {
    pub max_lattice: usize,
    pub max_torus: usize,
    pub max_genus: usize,
}

impl Default for SpecShape {
    fn default() -> Self {
        SpecShape {
            max_lattice: 2,
            max_torus: 2,
            max_genus: 1,
        }
    }
}

fn signed_permutation<R: Rng + ?Sized>(n: usize, rng: &mut R) -> IntMatrix {
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    let mut m = IntMatrix::zeros(n, n);
    for (i, &j) in perm.iter().enumerate() {
        m[(i, j)] = if rng.gen_bool(0.5) { 1 } else { -1 };
    }
    m
}

fn random_matrix<R: Rng + ?Sized>(ring: &Arc<WittRing>, r: usize, c: usize, rng: &mut R) -> WMatrix {
    WMatrix::from_fn(ring, r, c, |_, _| ring.random(rng))
}

/// Random spec with signed-permutation Galois actions and random ext data.
///
/// The abelian part is a sum of random-trace blocks when `a = 1` and the
/// precision allows the slope check, and the supersingular block otherwise.
pub fn random_spec<R: Rng + ?Sized>(
    ring: &Arc<WittRing>,
    shape: SpecShape,
    rng: &mut R,
) -> OneMotiveSpec {
    let x = rng.gen_range(0..=shape.max_lattice);
    let t = rng.gen_range(0..=shape.max_torus);
    let g = rng.gen_range(0..=shape.max_genus);
    let lattice = LatticeData::new(signed_permutation(x, rng)).expect("signed permutation");
    let torus = TorusData::new(signed_permutation(t, rng)).expect("signed permutation");
    let abelian = if g == 0 {
        AbelianBlock::zero(ring)
    } else if ring.a() == 1 && ring.n() as usize > 2 * g {
        let bound = (4 * ring.p()).isqrt() as i64;
        let crystal = (0..g)
            .map(|_| {
                let ap = rng.gen_range(-bound..=bound);
                abelian_from_ap(ap, ring).expect("trace within the Weil bound").crystal().clone()
            })
            .reduce(|a, b| a.direct_sum(&b).expect("same ring and level"))
            .expect("g > 0");
        AbelianBlock::new(crystal).expect("sum of abelian blocks")
    } else {
        AbelianBlock::supersingular(ring, g)
    };
    let ext = ExtData {
        at: random_matrix(ring, t, 2 * g, rng),
        xt: random_matrix(ring, t, x, rng),
        xa: random_matrix(ring, 2 * g, x, rng),
    };
    OneMotiveSpec::new(ring, lattice, torus, abelian, ext, format!("random-{x}-{t}-{g}"))
        .expect("shapes match by construction")
}
