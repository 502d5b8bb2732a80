//! Tate objects and the lattice, torus and abelian building blocks.
//!
//! Galois actions on character and cocharacter lattices are finite-order
//! unimodular integer matrices. The blocks use the normalization in which
//! the Tate object of weight -2 has `F = 1`:
//!
//! | block   | weight | F       | V         |
//! |---------|--------|---------|-----------|
//! | torus   | -2     | `B`     | `p·B⁻¹`   |
//! | lattice | 0      | `p·A`   | `A⁻¹`     |

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::semilinear::{newton_slopes, FilteredFModule, IntMatrix, WMatrix};
use crate::witt::WittRing;

/// Upper bound on the order searched when validating an action.
pub const ACTION_ORDER_LIMIT: u64 = 1024;

fn validate_action(action: &IntMatrix) -> Result<u64> {
    if action.rows() != action.cols() {
        return Err(Error::InvalidAction("action matrix must be square".into()));
    }
    if !action.is_unimodular() {
        return Err(Error::InvalidAction(format!(
            "action {:?} is not invertible over Z",
            action.row_vecs()
        )));
    }
    action.order(ACTION_ORDER_LIMIT).ok_or_else(|| {
        Error::InvalidAction(format!(
            "action {:?} has no finite order up to {ACTION_ORDER_LIMIT}",
            action.row_vecs()
        ))
    })
}

macro_rules! galois_lattice {
    ($name:ident, $doc:literal) => {
        #[doc = $doc]
        #[derive(Clone, Debug, PartialEq, Eq)]
        pub struct $name {
            action: IntMatrix,
            order: u64,
        }

        impl $name {
            pub fn new(action: IntMatrix) -> Result<Self> {
                let order = validate_action(&action)?;
                Ok($name { action, order })
            }

            pub fn trivial(rank: usize) -> Self {
                $name {
                    action: IntMatrix::identity(rank),
                    order: 1,
                }
            }

            pub fn rank(&self) -> usize {
                self.action.rows()
            }

            pub fn action(&self) -> &IntMatrix {
                &self.action
            }

            pub fn order(&self) -> u64 {
                self.order
            }

            /// Action on the dual lattice.
            pub fn inverse_transpose(&self) -> IntMatrix {
                self.action
                    .inverse_unimodular()
                    .expect("validated action is unimodular")
                    .transpose()
            }
        }
    };
}

galois_lattice!(LatticeData, "The étale lattice `X` with its Frobenius action.");
galois_lattice!(TorusData, "Cocharacter lattice of the torus with its Frobenius action.");

/// Abelian part: a level-1 crystal of rank `2g`, pure of weight -1, with
/// slopes symmetric under `s ↦ 1 - s`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AbelianBlock {
    dim: usize,
    crystal: FilteredFModule,
}

impl AbelianBlock {
    pub fn new(crystal: FilteredFModule) -> Result<Self> {
        let rank = crystal.rank();
        if !rank.is_multiple_of(2) {
            return Err(Error::InvalidBlock(format!("abelian crystal has odd rank {rank}")));
        }
        if crystal.level() != 1 {
            return Err(Error::InvalidBlock("abelian crystal must have level 1".into()));
        }
        if crystal.weights().iter().any(|&w| w != -1) {
            return Err(Error::InvalidBlock("abelian crystal must be pure of weight -1".into()));
        }
        let crystal = crystal.with_derived_v()?;
        if let Some(v) = crystal.verify().first() {
            return Err(Error::InvalidBlock(v.to_string()));
        }
        let slopes = newton_slopes(&crystal)?;
        if !slopes.is_symmetric(1) {
            return Err(Error::InvalidBlock(format!(
                "slopes {slopes} are not symmetric under s -> 1 - s"
            )));
        }
        Ok(AbelianBlock {
            dim: rank / 2,
            crystal,
        })
    }

    pub fn zero(ring: &Arc<WittRing>) -> Self {
        AbelianBlock {
            dim: 0,
            crystal: FilteredFModule::new(WMatrix::zeros(ring, 0, 0), Some(WMatrix::zeros(ring, 0, 0)), vec![], 1)
                .expect("empty module"),
        }
    }

    /// `g` copies of `F = [[0, -p], [1, 0]]`, valid over every `F_{p^a}`.
    pub fn supersingular(ring: &Arc<WittRing>, g: usize) -> Self {
        let p = ring.p() as i64;
        let f = WMatrix::from_ints(ring, &[vec![0, -p], vec![1, 0]]).expect("2x2");
        let v = WMatrix::from_ints(ring, &[vec![0, p], vec![-1, 0]]).expect("2x2");
        let mut big_f = WMatrix::zeros(ring, 2 * g, 2 * g);
        let mut big_v = big_f.clone();
        for i in 0..g {
            big_f.set_block(2 * i, 2 * i, &f);
            big_v.set_block(2 * i, 2 * i, &v);
        }
        AbelianBlock {
            dim: g,
            crystal: FilteredFModule::new(big_f, Some(big_v), vec![-1; 2 * g], 1)
                .expect("consistent shapes"),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn crystal(&self) -> &FilteredFModule {
        &self.crystal
    }

    /// Block of the dual abelian variety.
    pub fn dual(&self) -> Result<Self> {
        let crystal = self.crystal.twisted_dual()?;
        Ok(AbelianBlock {
            dim: self.dim,
            crystal: FilteredFModule::new(
                crystal.f().clone(),
                crystal.v().cloned(),
                vec![-1; 2 * self.dim],
                1,
            )?,
        })
    }
}

/// The Tate object of weight `-2m`. For `m >= 1`: `F = 1`, `V = p^m`, level
/// `m`; for `m <= 0`: `F = p^{1-m}`, `V = 1`, level `1 - m`.
pub fn tate(m: i32, ring: &Arc<WittRing>) -> FilteredFModule {
    let (f, v, level) = if m >= 1 {
        (0, m as u32, m as u32)
    } else {
        ((1 - m) as u32, 0, (1 - m) as u32)
    };
    let pw = |k: u32| {
        if k >= ring.n() {
            ring.zero()
        } else {
            ring.from_int(ring.p().pow(k) as i64)
        }
    };
    let f = WMatrix::scalar(ring, 1, &pw(f));
    let v = WMatrix::scalar(ring, 1, &pw(v));
    FilteredFModule::new(f, Some(v), vec![-2 * m], level).expect("rank-1 module")
}

pub fn lattice_block(d: &LatticeData, ring: &Arc<WittRing>) -> FilteredFModule {
    let a = WMatrix::from_int_matrix(ring, d.action());
    let a_inv = WMatrix::from_int_matrix(
        ring,
        &d.action().inverse_unimodular().expect("validated action"),
    );
    FilteredFModule::new(a.scale_int(ring.p() as i64), Some(a_inv), vec![0; d.rank()], 1)
        .expect("consistent shapes")
}

pub fn torus_block(d: &TorusData, ring: &Arc<WittRing>) -> FilteredFModule {
    let b = WMatrix::from_int_matrix(ring, d.action());
    let b_inv = WMatrix::from_int_matrix(
        ring,
        &d.action().inverse_unimodular().expect("validated action"),
    );
    FilteredFModule::new(b, Some(b_inv.scale_int(ring.p() as i64)), vec![-2; d.rank()], 1)
        .expect("consistent shapes")
}

/// Elliptic block with Frobenius characteristic polynomial `x² - a_p·x + q`.
///
/// Only `q = p` gives an integral `V`; larger residue fields are rejected.
pub fn abelian_from_ap(a_p: i64, ring: &Arc<WittRing>) -> Result<AbelianBlock> {
    let q = ring.residue_size();
    if (a_p as i128).pow(2) > 4 * q as i128 {
        return Err(Error::InvalidTrace { trace: a_p, q });
    }
    if ring.a() != 1 {
        return Err(Error::UnsupportedInput(format!(
            "the companion block for q = {q} has det F = q, so V = p·F⁻¹ is not integral; \
             supply an explicit crystal instead"
        )));
    }
    let q = q as i64;
    let f = WMatrix::from_ints(ring, &[vec![0, -q], vec![1, a_p]])?;
    let v = WMatrix::from_ints(ring, &[vec![a_p, q], vec![-1, 0]])?;
    AbelianBlock::new(FilteredFModule::new(f, Some(v), vec![-1, -1], 1)?)
}
