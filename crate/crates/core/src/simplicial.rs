//! Component complexes of truncated simplicial schemes, the cocharacter
//! group of the toric part of the Picard 1-motive, divisor lattices, and the
//! weight-graded rank ledger of `H¹`.

use std::sync::Arc;

use rand::Rng;

use crate::blocks::{AbelianBlock, LatticeData, TorusData};
use crate::error::{Error, Result};
use crate::motive::{assemble, OneMotiveSpec};
use crate::semilinear::IntMatrix;
use crate::witt::WittRing;

/// Component counts of `X_0, ..., X_k` (`k` = 2 or 3) and the face maps
/// between them: `faces[j - 1][i][c]` is `d_i` of component `c` of `X_j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplicialComponents {
    counts: Vec<usize>,
    faces: Vec<Vec<Vec<usize>>>,
}

impl SimplicialComponents {
    pub fn new(counts: Vec<usize>, faces: Vec<Vec<Vec<usize>>>) -> Result<Self> {
        if !(3..=4).contains(&counts.len()) {
            return Err(Error::InvalidSimplicial(format!(
                "expected 3 or 4 levels, got {}",
                counts.len()
            )));
        }
        if faces.len() != counts.len() - 1 {
            return Err(Error::InvalidSimplicial("one face list per level j >= 1".into()));
        }
        for (j, level) in faces.iter().enumerate() {
            let j = j + 1;
            if level.len() != j + 1 {
                return Err(Error::InvalidSimplicial(format!(
                    "level {j} needs {} face maps, got {}",
                    j + 1,
                    level.len()
                )));
            }
            for (i, map) in level.iter().enumerate() {
                if map.len() != counts[j] {
                    return Err(Error::InvalidSimplicial(format!(
                        "d_{i} on level {j} has {} entries for {} components",
                        map.len(),
                        counts[j]
                    )));
                }
                if let Some(&bad) = map.iter().find(|&&c| c >= counts[j - 1]) {
                    return Err(Error::InvalidSimplicial(format!(
                        "d_{i} on level {j} hits component {bad} of {}",
                        counts[j - 1]
                    )));
                }
            }
        }
        let s = SimplicialComponents { counts, faces };
        s.check_identities()?;
        Ok(s)
    }

    pub fn counts(&self) -> &[usize] {
        &self.counts
    }

    /// `d_i` from level `j` to level `j - 1`.
    pub fn face(&self, j: usize, i: usize) -> &[usize] {
        &self.faces[j - 1][i]
    }

    /// `d_i d_j = d_{j-1} d_i` for `i < j`, on every level where both sides
    /// are defined.
    fn check_identities(&self) -> Result<()> {
        for top in 2..self.counts.len() {
            for j in 1..=top {
                for i in 0..j {
                    for c in 0..self.counts[top] {
                        let lhs = self.face(top - 1, i)[self.face(top, j)[c]];
                        let rhs = self.face(top - 1, j - 1)[self.face(top, i)[c]];
                        if lhs != rhs {
                            return Err(Error::InvalidSimplicial(format!(
                                "d_{i} d_{j} != d_{} d_{i} on component {c} of level {top}",
                                j - 1
                            )));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// Level `k` boundary: column `c` is `Σ (-1)^i e_{d_i(c)}`.
    fn boundary(&self, k: usize) -> IntMatrix {
        let mut d = IntMatrix::zeros(self.counts[k - 1], self.counts[k]);
        for i in 0..=k {
            let sign = if i % 2 == 0 { 1 } else { -1 };
            for (c, &target) in self.face(k, i).iter().enumerate() {
                d[(target, c)] += sign;
            }
        }
        d
    }
}

/// `C_2 → C_1 → C_0` with boundaries `d1: C_1 → C_0`, `d2: C_2 → C_1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComponentComplex {
    pub d1: IntMatrix,
    pub d2: IntMatrix,
}

pub fn component_complex(s: &SimplicialComponents) -> Result<ComponentComplex> {
    let cx = ComponentComplex {
        d1: s.boundary(1),
        d2: s.boundary(2),
    };
    if !cx.d1.checked_mul(&cx.d2)?.is_zero() {
        return Err(Error::InvalidSimplicial("d1·d2 is not zero".into()));
    }
    Ok(cx)
}

/// `Ker d² / Im d¹` of the dual complex `C⁰ → C¹ → C²`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CocharacterGroup {
    pub rank: usize,
    /// Columns lift a basis of the free part to `C¹`.
    pub basis: IntMatrix,
    /// Elementary divisors greater than 1, i.e. the torsion subgroup.
    pub torsion: Vec<i64>,
    /// Every elementary divisor of `d1` equals 1.
    pub image_direct_summand: bool,
}

impl CocharacterGroup {
    pub fn torsion_free(&self) -> bool {
        self.torsion.is_empty()
    }
}

pub fn cocharacter_group(s: &SimplicialComponents) -> Result<CocharacterGroup> {
    let cx = component_complex(s)?;
    let co_d1 = cx.d1.transpose();
    let co_d2 = cx.d2.transpose();
    let c1 = co_d1.rows();
    let s2 = co_d2.smith()?;
    let r = s2.rank();
    // In the coordinates z = V⁻¹·y the kernel of d² is {z_0 = … = z_{r-1} = 0}.
    let z = s2.v_inv.checked_mul(&co_d1)?.rows_from(r);
    let sz = z.smith()?;
    let torsion: Vec<i64> = sz.invariants.iter().copied().filter(|&d| d != 1).collect();
    let rank = (c1 - r) - sz.rank();
    let free_z = sz.u_inv.cols_from(sz.rank());
    let basis = s2.v.cols_from(r).checked_mul(&free_z)?;
    let image_direct_summand = cx.d1.smith()?.invariants.iter().all(|&d| d == 1);
    Ok(CocharacterGroup {
        rank,
        basis,
        torsion,
        image_direct_summand,
    })
}

/// Divisors supported on `Y_0` with their two pullbacks to `X_1` and their
/// Néron-Severi classes; all matrices have `m` columns.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DivisorPresentation {
    m: usize,
    p0: IntMatrix,
    p1: IntMatrix,
    ns: IntMatrix,
}

impl DivisorPresentation {
    pub fn new(m: usize, p0: IntMatrix, p1: IntMatrix, ns: IntMatrix) -> Result<Self> {
        if p0.cols() != m || p1.cols() != m || ns.cols() != m {
            return Err(Error::Shape(format!("divisor matrices must have {m} columns")));
        }
        if p0.rows() != p1.rows() {
            return Err(Error::Shape("P0 and P1 must have the same number of rows".into()));
        }
        Ok(DivisorPresentation { m, p0, p1, ns })
    }

    /// `m` points on a curve with `X_1 = X_0`: identity pullbacks and the
    /// degree map.
    pub fn points_on_curve(m: usize) -> Self {
        let ones = IntMatrix::from_rows(&[vec![1; m]]).expect("one row");
        let ns = if m == 0 { IntMatrix::zeros(1, 0) } else { ones };
        DivisorPresentation {
            m,
            p0: IntMatrix::identity(m),
            p1: IntMatrix::identity(m),
            ns,
        }
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn p0(&self) -> &IntMatrix {
        &self.p0
    }

    pub fn p1(&self) -> &IntMatrix {
        &self.p1
    }

    pub fn ns(&self) -> &IntMatrix {
        &self.ns
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Div0Lattice {
    pub rank: usize,
    /// Columns form a Z-basis of `Div⁰` inside `Z^m`.
    pub basis: IntMatrix,
}

pub fn div0_lattice(d: &DivisorPresentation) -> Result<Div0Lattice> {
    let stacked = d.p0.checked_sub(&d.p1)?.stack(&d.ns)?;
    let basis = stacked.kernel()?;
    let rank = basis.cols();
    let expected = d.m - stacked.rank_q();
    if rank != expected {
        return Err(Error::Domain(format!(
            "kernel rank {rank} disagrees with rank-nullity count {expected}"
        )));
    }
    Ok(Div0Lattice { rank, basis })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PicardSkeleton {
    pub lattice_rank: usize,
    pub torus_rank: usize,
    pub abelian_dim: usize,
}

impl PicardSkeleton {
    /// Split spec with trivial actions. The abelian part defaults to the
    /// supersingular block of the given dimension.
    pub fn to_spec(
        &self,
        ring: &Arc<WittRing>,
        abelian: Option<AbelianBlock>,
        label: &str,
    ) -> Result<OneMotiveSpec> {
        let abelian = match abelian {
            Some(a) if a.dim() != self.abelian_dim => {
                return Err(Error::Shape(format!(
                    "abelian block has dimension {}, skeleton expects {}",
                    a.dim(),
                    self.abelian_dim
                )))
            }
            Some(a) => a,
            None => AbelianBlock::supersingular(ring, self.abelian_dim),
        };
        OneMotiveSpec::split(
            ring,
            LatticeData::trivial(self.lattice_rank),
            TorusData::trivial(self.torus_rank),
            abelian,
            label,
        )
    }
}

pub fn picard_skeleton(
    s: &SimplicialComponents,
    d: &DivisorPresentation,
    g: usize,
) -> Result<PicardSkeleton> {
    Ok(PicardSkeleton {
        lattice_rank: div0_lattice(d)?.rank,
        torus_rank: cocharacter_group(s)?.rank,
        abelian_dim: g,
    })
}

/// Expected ranks of the weight pieces of `H¹_crys(1)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct H1Ledger {
    pub gr0: usize,
    pub gr1: usize,
    pub gr2: usize,
    pub total: usize,
    pub assembled_rank: usize,
}

impl H1Ledger {
    pub fn consistent(&self) -> bool {
        self.total == self.assembled_rank
    }
}

pub fn h1_weight_ledger(sk: &PicardSkeleton, ring: &Arc<WittRing>) -> Result<H1Ledger> {
    let spec = sk.to_spec(ring, None, "picard")?;
    let assembled_rank = assemble(&spec)?.module().rank();
    let gr0 = sk.torus_rank;
    let gr1 = 2 * sk.abelian_dim;
    let gr2 = sk.lattice_rank;
    Ok(H1Ledger {
        gr0,
        gr1,
        gr2,
        total: gr0 + gr1 + gr2,
        assembled_rank,
    })
}

/// Random 2-truncated structure with at most `max` components per level.
pub fn random_components<R: Rng + ?Sized>(max: usize, rng: &mut R) -> SimplicialComponents {
    loop {
        let c0 = rng.gen_range(1..=max);
        let c1 = rng.gen_range(1..=max);
        let c2 = rng.gen_range(0..=max);
        let d0: Vec<usize> = (0..c1).map(|_| rng.gen_range(0..c0)).collect();
        let d1: Vec<usize> = (0..c1).map(|_| rng.gen_range(0..c0)).collect();
        // (e0, e1, e2) with d0 e1 = d0 e0, d0 e2 = d1 e0, d1 e2 = d1 e1
        let mut triples = Vec::new();
        for e0 in 0..c1 {
            for e1 in 0..c1 {
                for e2 in 0..c1 {
                    if d0[e1] == d0[e0] && d0[e2] == d1[e0] && d1[e2] == d1[e1] {
                        triples.push([e0, e1, e2]);
                    }
                }
            }
        }
        if triples.is_empty() && c2 > 0 {
            continue;
        }
        let chosen: Vec<[usize; 3]> =
            (0..c2).map(|_| triples[rng.gen_range(0..triples.len())]).collect();
        let level2 = (0..3).map(|i| chosen.iter().map(|t| t[i]).collect()).collect();
        return SimplicialComponents::new(vec![c0, c1, c2], vec![vec![d0, d1], level2])
            .expect("faces satisfy the identities by construction");
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    fn trivial() -> SimplicialComponents {
        SimplicialComponents::new(
            vec![1, 1, 1],
            vec![vec![vec![0], vec![0]], vec![vec![0], vec![0], vec![0]]],
        )
        .unwrap()
    }

    fn nodal() -> SimplicialComponents {
        SimplicialComponents::new(
            vec![1, 2, 1],
            vec![vec![vec![0, 0], vec![0, 0]], vec![vec![0], vec![0], vec![0]]],
        )
        .unwrap()
    }

    #[test]
    fn trivial_complex() {
        let cx = component_complex(&trivial()).unwrap();
        assert_eq!(cx.d1, IntMatrix::from_rows(&[vec![0]]).unwrap());
        assert_eq!(cx.d2, IntMatrix::from_rows(&[vec![1]]).unwrap());
        assert_eq!(cocharacter_group(&trivial()).unwrap().rank, 0);
    }

    #[test]
    fn nodal_complex() {
        let cx = component_complex(&nodal()).unwrap();
        assert_eq!(cx.d1, IntMatrix::from_rows(&[vec![0, 0]]).unwrap());
        assert_eq!(cx.d2, IntMatrix::from_rows(&[vec![1], vec![0]]).unwrap());
        let cg = cocharacter_group(&nodal()).unwrap();
        assert_eq!(cg.rank, 1);
        assert!(cg.torsion_free() && cg.image_direct_summand);
        // the lift lies in Ker d² = {(0, x)}
        assert_eq!(cg.basis.col(0)[0], 0);
        assert_eq!(cg.basis.col(0)[1].abs(), 1);
    }

    #[test]
    fn face_identity_violation() {
        let err = SimplicialComponents::new(
            vec![2, 1, 1],
            vec![vec![vec![0], vec![1]], vec![vec![0], vec![0], vec![0]]],
        );
        assert!(matches!(err, Err(Error::InvalidSimplicial(_))));
        let out_of_range =
            SimplicialComponents::new(vec![1, 1, 0], vec![vec![vec![1], vec![0]], vec![vec![], vec![], vec![]]]);
        assert!(matches!(out_of_range, Err(Error::InvalidSimplicial(_))));
    }

    #[test]
    fn random_structures_are_valid() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(8);
        for _ in 0..100 {
            let s = random_components(6, &mut rng);
            let cx = component_complex(&s).unwrap();
            assert!(cx.d1.checked_mul(&cx.d2).unwrap().is_zero());
            let cg = cocharacter_group(&s).unwrap();
            assert!(cg.torsion_free() && cg.image_direct_summand);
            // rank over Q by an independent count
            let co1 = cx.d1.transpose();
            let co2 = cx.d2.transpose();
            assert_eq!(cg.rank, s.counts()[1] - co2.rank_q() - co1.rank_q());
        }
    }

    #[test]
    fn divisor_lattices() {
        for m in 0..6 {
            assert_eq!(div0_lattice(&DivisorPresentation::points_on_curve(m)).unwrap().rank, m.saturating_sub(1));
        }
        let inj = DivisorPresentation::new(
            2,
            IntMatrix::from_rows(&[vec![1, 0], vec![0, 1]]).unwrap(),
            IntMatrix::zeros(2, 2),
            IntMatrix::zeros(0, 2),
        )
        .unwrap();
        assert_eq!(div0_lattice(&inj).unwrap().rank, 0);
    }

    #[test]
    fn skeletons_and_ledger() {
        let r = WittRing::from_params(5, 3, 1, None).unwrap();
        for g in 0..=3 {
            for m in 1..=5 {
                let sk = picard_skeleton(&trivial(), &DivisorPresentation::points_on_curve(m), g).unwrap();
                assert_eq!((sk.lattice_rank, sk.torus_rank, sk.abelian_dim), (m - 1, 0, g));
                let l = h1_weight_ledger(&sk, &r).unwrap();
                assert_eq!(l.total, 2 * g + m - 1);
                assert!(l.consistent());
            }
        }
        let sk = picard_skeleton(&nodal(), &DivisorPresentation::points_on_curve(0), 1).unwrap();
        assert_eq!((sk.lattice_rank, sk.torus_rank, sk.abelian_dim), (0, 1, 1));
    }
}
