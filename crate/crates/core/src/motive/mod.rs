//! Crystalline realizations of explicitly presented 1-motives.
//!
//! The realization lives on the basis (torus, abelian, lattice) with weights
//! (-2, -1, 0). With `B`, `F_A`, `p·A` the diagonal blocks, the Frobenius is
//!
//! ```text
//!     [ B   E_AT  E_XT   ]
//! F = [ 0   F_A   F_A·Y  ]
//!     [ 0   0     p·A    ]
//! ```
//!
//! where `E_AT`, `E_XT` and `Y` are the ext blocks `AT`, `XT` and `XA` of the
//! spec. Storing the abelian-lattice coupling as `F_A·Y` makes `V` integral
//! for every choice of ext data, and `V` is given in closed form.

mod random;
mod report;

use std::sync::Arc;

pub use random::{random_spec, SpecShape};
pub use report::{
    check_pairing, pair, torsion_height, tdr_dimension, verify_motive, MotiveReport,
    PairingCheck, ReportItem,
};

use crate::blocks::{lattice_block, torus_block, AbelianBlock, LatticeData, TorusData};
use crate::error::{Error, Result};
use crate::semilinear::{FilteredFModule, WMatrix};
use crate::witt::WittRing;

/// Extension data: `at` is `t × 2g`, `xt` is `t × x`, `xa` is `2g × x`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtData {
    pub at: WMatrix,
    pub xt: WMatrix,
    pub xa: WMatrix,
}

impl ExtData {
    pub fn zero(ring: &Arc<WittRing>, t: usize, g2: usize, x: usize) -> Self {
        ExtData {
            at: WMatrix::zeros(ring, t, g2),
            xt: WMatrix::zeros(ring, t, x),
            xa: WMatrix::zeros(ring, g2, x),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.at.is_zero() && self.xt.is_zero() && self.xa.is_zero()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OneMotiveSpec {
    ring: Arc<WittRing>,
    lattice: LatticeData,
    torus: TorusData,
    abelian: AbelianBlock,
    ext: ExtData,
    label: String,
}

fn check_shape(name: &str, m: &WMatrix, rows: usize, cols: usize) -> Result<()> {
    if m.rows() != rows || m.cols() != cols {
        return Err(Error::InvalidExtension(format!(
            "ext block {name} must be {rows}x{cols}, got {}x{}",
            m.rows(),
            m.cols()
        )));
    }
    Ok(())
}

impl OneMotiveSpec {
    pub fn new(
        ring: &Arc<WittRing>,
        lattice: LatticeData,
        torus: TorusData,
        abelian: AbelianBlock,
        ext: ExtData,
        label: impl Into<String>,
    ) -> Result<Self> {
        if abelian.crystal().ring() != ring
            || [&ext.at, &ext.xt, &ext.xa].iter().any(|m| m.ring() != ring)
        {
            return Err(Error::IncompatibleRings);
        }
        let (t, g2, x) = (torus.rank(), 2 * abelian.dim(), lattice.rank());
        check_shape("AT", &ext.at, t, g2)?;
        check_shape("XT", &ext.xt, t, x)?;
        check_shape("XA", &ext.xa, g2, x)?;
        Ok(OneMotiveSpec {
            ring: Arc::clone(ring),
            lattice,
            torus,
            abelian,
            ext,
            label: label.into(),
        })
    }

    /// Spec with all ext blocks zero.
    pub fn split(
        ring: &Arc<WittRing>,
        lattice: LatticeData,
        torus: TorusData,
        abelian: AbelianBlock,
        label: impl Into<String>,
    ) -> Result<Self> {
        let ext = ExtData::zero(ring, torus.rank(), 2 * abelian.dim(), lattice.rank());
        Self::new(ring, lattice, torus, abelian, ext, label)
    }

    pub fn ring(&self) -> &Arc<WittRing> {
        &self.ring
    }

    pub fn lattice(&self) -> &LatticeData {
        &self.lattice
    }

    pub fn torus(&self) -> &TorusData {
        &self.torus
    }

    pub fn abelian(&self) -> &AbelianBlock {
        &self.abelian
    }

    pub fn ext(&self) -> &ExtData {
        &self.ext
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// `(rk X, dim T, g)`.
    pub fn ranks(&self) -> (usize, usize, usize) {
        (self.lattice.rank(), self.torus.rank(), self.abelian.dim())
    }

    /// The semi-abelian part `[0 → G]`.
    pub fn semiabelian_part(&self) -> Self {
        let (_, t, g) = self.ranks();
        let ext = ExtData {
            at: self.ext.at.clone(),
            xt: WMatrix::zeros(&self.ring, t, 0),
            xa: WMatrix::zeros(&self.ring, 2 * g, 0),
        };
        OneMotiveSpec {
            lattice: LatticeData::trivial(0),
            ext,
            label: format!("{}-G", self.label),
            ..self.clone()
        }
    }

    /// Multiplies the ext blocks by integer units: `AT` by `u`, `XA` by `w`
    /// and `XT` by `u·w`. Returns the new spec with a base change `P`
    /// realizing `assemble(new)` on the basis of `assemble(self)`.
    pub fn rescale_ext(&self, u: i64, w: i64) -> Result<(Self, WMatrix)> {
        let (uu, ww) = (self.ring.from_int(u), self.ring.from_int(w));
        if !uu.is_unit() || !ww.is_unit() {
            return Err(Error::NotUnit);
        }
        let ext = ExtData {
            at: self.ext.at.scale(&uu),
            xt: self.ext.xt.scale(&(&uu * &ww)),
            xa: self.ext.xa.scale(&ww),
        };
        let scaled = OneMotiveSpec {
            ext,
            ..self.clone()
        };
        // columns scaled by c_T = 1, c_A = u, c_X = u·w
        let (x, t, g) = self.ranks();
        let mut p = WMatrix::identity(&self.ring, t + 2 * g + x);
        for i in t..t + 2 * g {
            p[(i, i)] = uu.clone();
        }
        for i in t + 2 * g..t + 2 * g + x {
            p[(i, i)] = &uu * &ww;
        }
        Ok((scaled, p))
    }
}

/// Realization of a spec, with the spec it came from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MotiveCrystal {
    module: FilteredFModule,
    provenance: OneMotiveSpec,
}

impl MotiveCrystal {
    /// Pairs an arbitrary module with a spec, for checking hand-built data.
    pub fn from_parts(module: FilteredFModule, provenance: OneMotiveSpec) -> Result<Self> {
        if module.ring() != provenance.ring() {
            return Err(Error::IncompatibleRings);
        }
        Ok(MotiveCrystal { module, provenance })
    }

    pub fn module(&self) -> &FilteredFModule {
        &self.module
    }

    pub fn provenance(&self) -> &OneMotiveSpec {
        &self.provenance
    }
}

/// `σ(V)` of the assembled crystal, by blocks.
struct SigmaV {
    t: WMatrix,
    ta: WMatrix,
    tx: WMatrix,
    a: WMatrix,
    ax: WMatrix,
    x: WMatrix,
}

fn sigma_v(s: &OneMotiveSpec) -> SigmaV {
    let ring = &s.ring;
    let p = ring.p() as i64;
    let b_inv = WMatrix::from_int_matrix(
        ring,
        &s.torus.action().inverse_unimodular().expect("validated action"),
    );
    let x_x = WMatrix::from_int_matrix(
        ring,
        &s.lattice.action().inverse_unimodular().expect("validated action"),
    );
    let x_a = s
        .abelian
        .crystal()
        .v()
        .expect("abelian blocks always carry V")
        .sigma();
    let x_ax = (&s.ext.xa * &x_x).neg();
    let x_ta = (&(&b_inv * &s.ext.at) * &x_a).neg();
    let x_tx = &(&b_inv * &(&(&s.ext.at * &s.ext.xa) - &s.ext.xt)) * &x_x;
    SigmaV {
        t: b_inv.scale_int(p),
        ta: x_ta,
        tx: x_tx,
        a: x_a,
        ax: x_ax,
        x: x_x,
    }
}

pub fn assemble(s: &OneMotiveSpec) -> Result<MotiveCrystal> {
    let ring = &s.ring;
    let (x, t, g) = s.ranks();
    let g2 = 2 * g;
    let r = t + g2 + x;
    let f_t = torus_block(&s.torus, ring);
    let f_x = lattice_block(&s.lattice, ring);
    let f_a = s.abelian.crystal().f();
    let mut f = WMatrix::zeros(ring, r, r);
    f.set_block(0, 0, f_t.f());
    f.set_block(0, t, &s.ext.at);
    f.set_block(0, t + g2, &s.ext.xt);
    f.set_block(t, t, f_a);
    f.set_block(t, t + g2, &(f_a * &s.ext.xa));
    f.set_block(t + g2, t + g2, f_x.f());

    let sv = sigma_v(s);
    let mut xm = WMatrix::zeros(ring, r, r);
    xm.set_block(0, 0, &sv.t);
    xm.set_block(0, t, &sv.ta);
    xm.set_block(0, t + g2, &sv.tx);
    xm.set_block(t, t, &sv.a);
    xm.set_block(t, t + g2, &sv.ax);
    xm.set_block(t + g2, t + g2, &sv.x);

    let mut weights = vec![-2; t];
    weights.extend(std::iter::repeat_n(-1, g2));
    weights.extend(std::iter::repeat_n(0, x));
    let module = FilteredFModule::new(f, Some(xm.sigma_inv()), weights, 1)?;
    Ok(MotiveCrystal {
        module,
        provenance: s.clone(),
    })
}

fn dual_label(label: &str) -> String {
    match label.strip_suffix("-dual") {
        Some(base) => base.to_string(),
        None => format!("{label}-dual"),
    }
}

/// The dual 1-motive: lattice and torus exchanged with inverse-transpose
/// actions, dual abelian block, and ext data chosen so that
/// `assemble(cartier_dual(s))` is `twisted_dual(assemble(s))` on the
/// reordered basis given by [`dual_basis_map`].
pub fn cartier_dual(s: &OneMotiveSpec) -> Result<OneMotiveSpec> {
    let ring = &s.ring;
    let sv = sigma_v(s);
    let b_inv_t = s.torus.inverse_transpose();
    let lattice = LatticeData::new(b_inv_t.clone())?;
    let torus = TorusData::new(s.lattice.inverse_transpose())?;
    let abelian = s.abelian.dual()?;
    let b_inv_t = WMatrix::from_int_matrix(ring, &b_inv_t);
    let ext = ExtData {
        at: (&sv.x.transpose() * &s.ext.xa.transpose()).neg(),
        xt: sv.tx.transpose(),
        xa: (&s.ext.at.transpose() * &b_inv_t).neg(),
    };
    OneMotiveSpec::new(ring, lattice, torus, abelian, ext, dual_label(&s.label))
}

/// For each basis index of the dual realization, the index of its partner
/// in the realization with ranks `(rk X, dim T, g)`.
pub fn dual_basis_map(x: usize, t: usize, g: usize) -> Vec<usize> {
    let g2 = 2 * g;
    (t + g2..t + g2 + x).chain(t..t + g2).chain(0..t).collect()
}

/// Permutation matrix `P` with `P[map[k]][k] = 1`.
pub fn permutation_matrix(ring: &Arc<WittRing>, map: &[usize]) -> WMatrix {
    let mut p = WMatrix::zeros(ring, map.len(), map.len());
    for (k, &i) in map.iter().enumerate() {
        p[(i, k)] = ring.one();
    }
    p
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::blocks::{abelian_from_ap, tate};
    use crate::semilinear::{newton_slopes, IntMatrix, SlopeProfile};
    use num_rational::Ratio;

    fn ring(p: u64, n: u32, a: u32) -> Arc<WittRing> {
        WittRing::from_params(p, n, a, None).unwrap()
    }

    fn kummer(r: &Arc<WittRing>) -> OneMotiveSpec {
        OneMotiveSpec::split(
            r,
            LatticeData::trivial(1),
            TorusData::trivial(1),
            AbelianBlock::zero(r),
            "kummer",
        )
        .unwrap()
    }

    #[test]
    fn kummer_is_sum_of_tate_objects() {
        let r = ring(5, 4, 1);
        let m = assemble(&kummer(&r)).unwrap();
        let oracle = tate(1, &r).direct_sum(&tate(0, &r)).unwrap();
        assert_eq!(m.module(), &oracle);
        assert_eq!(newton_slopes(m.module()).unwrap(), SlopeProfile::from_ints(&[0, 1]));
    }

    #[test]
    fn lattice_torus_coupling() {
        let r = ring(3, 3, 1);
        for xv in [0, 1, 2, 7, -5, 26] {
            let mut ext = ExtData::zero(&r, 1, 0, 1);
            ext.xt[(0, 0)] = r.from_int(xv);
            let s = OneMotiveSpec::new(
                &r,
                LatticeData::trivial(1),
                TorusData::trivial(1),
                AbelianBlock::zero(&r),
                ext,
                "coupled",
            )
            .unwrap();
            let m = assemble(&s).unwrap();
            assert_eq!(m.module().f(), &WMatrix::from_ints(&r, &[vec![1, xv], vec![0, 3]]).unwrap());
            assert_eq!(
                m.module().v().unwrap(),
                &WMatrix::from_ints(&r, &[vec![3, -xv], vec![0, 1]]).unwrap()
            );
            assert!(m.module().verify().passed());
        }
    }

    #[test]
    fn rank_five_mixed_example() {
        let r = ring(5, 4, 1);
        let s = OneMotiveSpec::split(
            &r,
            LatticeData::trivial(2),
            TorusData::trivial(1),
            abelian_from_ap(0, &r).unwrap(),
            "mixed",
        )
        .unwrap();
        let r_deep = ring(5, 6, 1);
        let s_deep = OneMotiveSpec::split(
            &r_deep,
            LatticeData::trivial(2),
            TorusData::trivial(1),
            abelian_from_ap(0, &r_deep).unwrap(),
            "mixed",
        )
        .unwrap();
        let m = assemble(&s).unwrap();
        assert_eq!(m.module().rank(), 5);
        assert!(m.module().verify().passed());
        let half = Ratio::new(1, 2);
        let one = Ratio::from_integer(1);
        let zero = Ratio::from_integer(0);
        assert_eq!(
            newton_slopes(assemble(&s_deep).unwrap().module()).unwrap(),
            SlopeProfile::from_slopes([one, one, half, half, zero])
        );
    }

    #[test]
    fn dual_matches_twisted_dual_exactly() {
        let r = ring(3, 4, 1);
        let mut ext = ExtData::zero(&r, 2, 2, 1);
        for (k, e) in [&mut ext.at, &mut ext.xt, &mut ext.xa].into_iter().enumerate() {
            for i in 0..e.rows() {
                for j in 0..e.cols() {
                    e[(i, j)] = r.from_int((7 * i + 3 * j + 11 * k) as i64 + 2);
                }
            }
        }
        let rot = IntMatrix::from_rows(&[vec![0, -1], vec![1, 0]]).unwrap();
        let s = OneMotiveSpec::new(
            &r,
            LatticeData::trivial(1),
            TorusData::new(rot).unwrap(),
            abelian_from_ap(1, &r).unwrap(),
            ext,
            "mixed",
        )
        .unwrap();
        let m = assemble(&s).unwrap();
        assert!(m.module().verify().passed());
        let d = cartier_dual(&s).unwrap();
        let md = assemble(&d).unwrap();
        assert!(md.module().verify().passed());
        let twisted = m.module().twisted_dual().unwrap();
        let map = dual_basis_map(1, 2, 1);
        assert_eq!(&twisted.permute(&map).unwrap(), md.module());
        assert_eq!(
            twisted.check_isomorphism(md.module(), &permutation_matrix(&r, &map)),
            Ok(())
        );
        assert_eq!(cartier_dual(&d).unwrap(), s);
    }

    #[test]
    fn pure_torus_dualizes_to_pure_lattice() {
        let r = ring(7, 3, 1);
        let s = OneMotiveSpec::split(
            &r,
            LatticeData::trivial(0),
            TorusData::trivial(3),
            AbelianBlock::zero(&r),
            "torus",
        )
        .unwrap();
        let d = cartier_dual(&s).unwrap();
        assert_eq!(d.ranks(), (3, 0, 0));
        assert_eq!(d.label(), "torus-dual");
    }

    #[test]
    fn rescaled_ext_is_isomorphic() {
        let r = ring(5, 3, 1);
        let mut ext = ExtData::zero(&r, 1, 2, 1);
        ext.at[(0, 1)] = r.from_int(4);
        ext.xt[(0, 0)] = r.from_int(9);
        ext.xa[(1, 0)] = r.from_int(3);
        let s = OneMotiveSpec::new(
            &r,
            LatticeData::trivial(1),
            TorusData::trivial(1),
            abelian_from_ap(2, &r).unwrap(),
            ext,
            "x",
        )
        .unwrap();
        let (scaled, p) = s.rescale_ext(2, 3).unwrap();
        let m = assemble(&s).unwrap();
        let ms = assemble(&scaled).unwrap();
        assert_ne!(m.module(), ms.module());
        assert_eq!(m.module().check_isomorphism(ms.module(), &p), Ok(()));
        assert_eq!(s.rescale_ext(5, 1).unwrap_err(), Error::NotUnit);
    }

    #[test]
    fn ext_shapes_are_checked() {
        let r = ring(5, 3, 1);
        let ext = ExtData::zero(&r, 1, 0, 2);
        let err = OneMotiveSpec::new(
            &r,
            LatticeData::trivial(1),
            TorusData::trivial(1),
            AbelianBlock::zero(&r),
            ext,
            "bad",
        );
        assert!(matches!(err, Err(Error::InvalidExtension(_))));
    }
}
