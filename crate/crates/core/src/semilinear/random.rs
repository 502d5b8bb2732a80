use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::Rng;

use super::matrix::WMatrix;
use super::module::FilteredFModule;
use crate::witt::WittRing;

/// Random level-1 module with weights in `{0, -1, -2}` that passes verify.
///
/// Built as a sum of rank-1 pieces `F = u·p^e` and rank-2 pieces
/// `F = [[0, -p], [1, c]]`, conjugated by a random weight-compatible base
/// change and then shuffled.
pub fn random_valid_module<R: Rng + ?Sized>(
    ring: &Arc<WittRing>,
    rank: usize,
    rng: &mut R,
) -> FilteredFModule {
    let p = ring.p() as i64;
    let mut f = WMatrix::zeros(ring, rank, rank);
    let mut v = WMatrix::zeros(ring, rank, rank);
    let mut weights = Vec::with_capacity(rank);
    let mut k = 0;
    while k < rank {
        let w = -rng.gen_range(0..=2);
        if k + 1 < rank && rng.gen_bool(0.4) {
            let c = ring.random(rng);
            let block_f = WMatrix::from_rows(
                ring,
                vec![vec![ring.zero(), ring.from_int(-p)], vec![ring.one(), c.clone()]],
            )
            .expect("2x2 block");
            let adj = WMatrix::from_rows(
                ring,
                vec![vec![c, ring.from_int(p)], vec![ring.from_int(-1), ring.zero()]],
            )
            .expect("2x2 block");
            f.set_block(k, k, &block_f);
            v.set_block(k, k, &adj.sigma_inv());
            weights.extend([w, w]);
            k += 2;
        } else {
            let u = ring.random_unit(rng);
            let e = rng.gen_range(0..=1u32);
            let pe = ring.from_int(p.pow(e));
            let pe_dual = ring.from_int(p.pow(1 - e));
            f[(k, k)] = &u * &pe;
            v[(k, k)] = &u.inverse().expect("unit").frobenius_inv() * &pe_dual;
            weights.push(w);
            k += 1;
        }
    }
    let base = FilteredFModule::new(f, Some(v), weights.clone(), 1).expect("consistent shapes");
    let mut order: Vec<usize> = (0..rank).collect();
    order.sort_by_key(|&i| weights[i]);
    // Unit-diagonal triangular matrix in weight order: preserves every W_j.
    let mut p_mat = WMatrix::identity(ring, rank);
    for (a, &i) in order.iter().enumerate() {
        p_mat[(i, i)] = ring.random_unit(rng);
        for &j in &order[a + 1..] {
            p_mat[(i, j)] = ring.random(rng);
        }
    }
    let conj = base
        .change_basis(&p_mat, weights)
        .expect("triangular matrix with unit diagonal is invertible");
    let mut perm: Vec<usize> = (0..rank).collect();
    perm.shuffle(rng);
    conj.permute(&perm).expect("valid permutation")
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    #[test]
    fn generated_modules_verify() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(11);
        for (p, n, a) in [(3, 4, 1), (5, 3, 2), (2, 5, 3)] {
            let r = WittRing::from_params(p, n, a, None).unwrap();
            for rank in 0..6 {
                let m = random_valid_module(&r, rank, &mut rng);
                assert!(m.verify().passed(), "{m:?}");
                assert_eq!(m.rank(), rank);
            }
        }
    }
}
