use super::{assemble, cartier_dual, dual_basis_map, permutation_matrix, MotiveCrystal, OneMotiveSpec};
use crate::blocks::{lattice_block, torus_block};
use crate::error::{Error, Result};
use crate::semilinear::{FilteredFModule, WMatrix};

/// `(height, n·height)`: `M[p^n]` has order `p^{n·height}`.
pub fn torsion_height(s: &OneMotiveSpec, n: u32) -> (usize, u64) {
    let (x, t, g) = s.ranks();
    let height = x + t + 2 * g;
    (height, u64::from(n) * height as u64)
}

/// Dimension of `Lie` of the universal vector extension:
/// `dim G + dim Ext(A, G_a) + rk X`.
pub fn tdr_dimension(s: &OneMotiveSpec) -> usize {
    let (x, t, g) = s.ranks();
    let dim_g = t + g;
    let ext_ga = g;
    dim_g + ext_ga + x
}

/// Gram matrix of the duality pairing between `m` and `m_dual`.
pub fn pair(m: &MotiveCrystal, m_dual: &MotiveCrystal) -> Result<WMatrix> {
    let (x, t, g) = m.provenance().ranks();
    let (dx, dt, dg) = m_dual.provenance().ranks();
    let r = m.module().rank();
    if (dx, dt, dg) != (t, x, g) || m_dual.module().rank() != r || r != x + t + 2 * g {
        return Err(Error::Shape(format!(
            "cannot pair ranks (X, T, g) = ({x}, {t}, {g}) with ({dx}, {dt}, {dg})"
        )));
    }
    Ok(permutation_matrix(m.module().ring(), &dual_basis_map(x, t, g)))
}

/// Outcome of the pairing checks. Each `Option` holds the first offending
/// entry, `None` meaning the check passed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairingCheck {
    pub perfect: bool,
    pub weight_orthogonal: Option<(usize, usize)>,
    /// `Fᵀ·G·F' = p·σ(G)`.
    pub frobenius: Option<(usize, usize)>,
    /// `Vᵀ·G·V' = p·σ⁻¹(G)`.
    pub verschiebung: Option<(usize, usize)>,
}

impl PairingCheck {
    pub fn passed(&self) -> bool {
        self.perfect
            && self.weight_orthogonal.is_none()
            && self.frobenius.is_none()
            && self.verschiebung.is_none()
    }
}

pub fn check_pairing(
    m: &FilteredFModule,
    m_dual: &FilteredFModule,
    gram: &WMatrix,
) -> Result<PairingCheck> {
    let r = m.rank();
    if m_dual.rank() != r || gram.rows() != r || gram.cols() != r {
        return Err(Error::Shape("pairing shapes do not match".into()));
    }
    let perfect = gram.det()?.is_unit();
    let weight_orthogonal = gram
        .entries()
        .find(|((a, b), e)| !e.is_zero() && m.weights()[*a] + m_dual.weights()[*b] < -2)
        .map(|(ij, _)| ij);
    let p = m.ring().p() as i64;
    let lhs = &(&m.f().transpose() * gram) * m_dual.f();
    let frobenius = lhs.first_difference(&gram.sigma().scale_int(p));
    let v = m.v_or_derived()?;
    let v_dual = m_dual.v_or_derived()?;
    let lhs = &(&v.transpose() * gram) * &v_dual;
    let verschiebung = lhs.first_difference(&gram.sigma_inv().scale_int(p));
    Ok(PairingCheck {
        perfect,
        weight_orthogonal,
        frobenius,
        verschiebung,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReportItem {
    pub id: &'static str,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MotiveReport {
    pub items: Vec<ReportItem>,
    /// Ranks of `(Gr_0, Gr_-1, Gr_-2)`.
    pub graded_ranks: (usize, usize, usize),
    pub gram: Option<WMatrix>,
}

impl MotiveReport {
    pub fn passed(&self) -> bool {
        self.items.iter().all(|i| i.passed)
    }

    pub fn item(&self, id: &str) -> Option<&ReportItem> {
        self.items.iter().find(|i| i.id == id)
    }
}

struct Items(Vec<ReportItem>);

impl Items {
    fn push(&mut self, id: &'static str, passed: bool, detail: impl Into<String>) {
        self.0.push(ReportItem {
            id,
            passed,
            detail: detail.into(),
        });
    }
}

fn indices(m: &FilteredFModule, pred: impl Fn(i32) -> bool) -> Vec<usize> {
    (0..m.rank()).filter(|&i| pred(m.weights()[i])).collect()
}

fn compare(
    piece: Result<FilteredFModule>,
    expected: &FilteredFModule,
    what: &str,
) -> (bool, String) {
    match piece {
        Ok(p) if p.rank() != expected.rank() => (
            false,
            format!("{what} has rank {}, expected {}", p.rank(), expected.rank()),
        ),
        Ok(p) if p.f() != expected.f() || p.v_or_derived().ok().as_ref() != expected.v() => {
            (false, format!("{what} differs from the expected block"))
        }
        Ok(p) => (true, format!("{what} is free of rank {}", p.rank())),
        Err(e) => (false, format!("{what}: {e}")),
    }
}

/// `det` of the restriction of `op` to the indices, as a unit check.
fn unit_on(m: &WMatrix, idx: &[usize]) -> (bool, String) {
    match m.select(idx, idx).det() {
        Ok(d) if d.is_unit() => (true, format!("determinant {d} is a unit")),
        Ok(d) => (false, format!("determinant {d} is not a unit")),
        Err(e) => (false, e.to_string()),
    }
}

/// Checks the structural properties of a realization, items `1` to `5`.
pub fn verify_motive(m: &MotiveCrystal) -> MotiveReport {
    let module = m.module();
    let spec = m.provenance();
    let ring = module.ring();
    let (x, t, g) = spec.ranks();
    let mut items = Items(Vec::new());
    let r = module.rank();

    let height = x + t + 2 * g;
    items.push(
        "1",
        r == height,
        format!("free of rank {r}; rk X + dim T + 2g = {height}"),
    );

    let w = module.weights();
    let above = w.iter().filter(|&&k| k > 0).count();
    items.push("2.a", above == 0, format!("{above} basis vectors of weight > 0"));

    let w1 = indices(module, |k| k <= -1);
    let g_part = assemble(&spec.semiabelian_part()).map(|c| c.module);
    let (ok, detail) = match g_part {
        Ok(g_mod) => compare(module.restrict(&w1), &g_mod, "W_-1"),
        Err(e) => (false, e.to_string()),
    };
    items.push("2.b", ok, detail);

    let w2 = indices(module, |k| k <= -2);
    let torus = torus_block(spec.torus(), ring);
    let (ok, detail) = compare(module.restrict(&w2), &torus, "W_-2");
    items.push("2.c", ok, detail);

    let below = w.iter().filter(|&&k| k <= -3).count();
    items.push("2.d", below == 0, format!("{below} basis vectors of weight <= -3"));

    let gr2 = indices(module, |k| k == -2);
    let gr1 = indices(module, |k| k == -1);
    let gr0 = indices(module, |k| k == 0);
    let (ok, detail) = compare(module.restrict(&gr2), &torus, "Gr_-2");
    items.push("3.a", ok, detail);
    let (ok, detail) = compare(module.restrict(&gr1), spec.abelian().crystal(), "Gr_-1");
    items.push("3.b", ok, detail);
    let lattice = lattice_block(spec.lattice(), ring);
    let (ok, detail) = compare(module.restrict(&gr0), &lattice, "Gr_0");
    items.push("3.c", ok, detail);

    let full = module.with_derived_v();
    let report = full.as_ref().map(FilteredFModule::verify);
    let (flag_ok, fv_ok, detail_a, detail_b) = match &report {
        Ok(rep) => {
            use crate::semilinear::Violation;
            let flag = rep.violations.iter().find(|v| matches!(v, Violation::Flag { .. }));
            let fv = rep.violations.iter().find(|v| !matches!(v, Violation::Flag { .. }));
            (
                flag.is_none(),
                fv.is_none(),
                flag.map_or("F and V preserve every W_j".into(), ToString::to_string),
                fv.map_or("F·V = V·F = p".into(), ToString::to_string),
            )
        }
        Err(e) => (false, false, e.to_string(), e.to_string()),
    };
    items.push("4.a", flag_ok, detail_a);
    items.push("4.b", fv_ok, detail_b);
    let (ok, detail) = match &full {
        Ok(fm) => unit_on(fm.v().expect("derived"), &gr0),
        Err(e) => (false, e.to_string()),
    };
    items.push("4.c", ok, format!("V on Gr_0: {detail}"));
    let (ok, detail) = unit_on(module.f(), &gr2);
    items.push("4.d", ok, format!("F on Gr_-2: {detail}"));

    let dual = cartier_dual(spec).and_then(|d| assemble(&d));
    let mut gram = None;
    let (ok, detail) = match dual {
        Ok(md) => match pair(m, &md) {
            Ok(gm) => {
                let check = check_pairing(module, md.module(), &gm);
                gram = Some(gm);
                match check {
                    Ok(c) if c.passed() => (true, "perfect, weight-orthogonal, F and V compatible".into()),
                    Ok(c) => (false, format!("{c:?}")),
                    Err(e) => (false, e.to_string()),
                }
            }
            Err(e) => (false, e.to_string()),
        },
        Err(e) => (false, format!("dual: {e}")),
    };
    items.push("5", ok, detail);

    MotiveReport {
        items: items.0,
        graded_ranks: (gr0.len(), gr1.len(), gr2.len()),
        gram,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::blocks::{abelian_from_ap, AbelianBlock, LatticeData, TorusData};
    use crate::witt::WittRing;
    use std::sync::Arc;

    fn ring(p: u64, n: u32) -> Arc<WittRing> {
        WittRing::from_params(p, n, 1, None).unwrap()
    }

    fn spec(r: &Arc<WittRing>, x: usize, t: usize, ap: Option<i64>) -> OneMotiveSpec {
        let ab = ap.map_or_else(|| AbelianBlock::zero(r), |a| abelian_from_ap(a, r).unwrap());
        OneMotiveSpec::split(r, LatticeData::trivial(x), TorusData::trivial(t), ab, "s").unwrap()
    }

    #[test]
    fn kummer_passes_everything() {
        let r = ring(5, 4);
        let m = assemble(&spec(&r, 1, 1, None)).unwrap();
        let rep = verify_motive(&m);
        assert!(rep.passed(), "{rep:?}");
        assert_eq!(rep.items.len(), 13);
        let anti = WMatrix::from_ints(&r, &[vec![0, 1], vec![1, 0]]).unwrap();
        assert_eq!(rep.gram, Some(anti));
    }

    #[test]
    fn mixed_rank_five() {
        let r = ring(5, 4);
        let rep = verify_motive(&assemble(&spec(&r, 2, 1, Some(0))).unwrap());
        assert!(rep.passed(), "{rep:?}");
        assert_eq!(rep.graded_ranks, (2, 2, 1));
    }

    #[test]
    fn torus_against_lattice() {
        let r = ring(3, 3);
        let s = spec(&r, 0, 1, None);
        let m = assemble(&s).unwrap();
        let md = assemble(&cartier_dual(&s).unwrap()).unwrap();
        assert_eq!(pair(&m, &md).unwrap(), WMatrix::identity(&r, 1));
    }

    #[test]
    fn broken_filtration_fails_4a() {
        let r = ring(3, 3);
        let s = spec(&r, 1, 1, None);
        let good = assemble(&s).unwrap();
        let mut f = good.module().f().clone();
        f[(1, 0)] = r.one();
        let bad = FilteredFModule::new(f, None, good.module().weights().to_vec(), 1).unwrap();
        let rep = verify_motive(&MotiveCrystal::from_parts(bad, s).unwrap());
        assert!(!rep.item("4.a").unwrap().passed);
        assert!(rep.item("1").unwrap().passed);
    }

    #[test]
    fn supersingular_pairing_at_p5() {
        let r = ring(5, 4);
        let s = spec(&r, 0, 0, Some(0));
        let m = assemble(&s).unwrap();
        let md = assemble(&cartier_dual(&s).unwrap()).unwrap();
        let gram = pair(&m, &md).unwrap();
        assert!(check_pairing(m.module(), md.module(), &gram).unwrap().passed());
    }

    #[test]
    fn heights_and_dimensions() {
        let r = ring(5, 4);
        assert_eq!(torsion_height(&spec(&r, 1, 1, None), 1), (2, 2));
        assert_eq!(torsion_height(&spec(&r, 0, 0, Some(1)), 3), (2, 6));
        assert_eq!(torsion_height(&spec(&r, 0, 0, None), 4), (0, 0));
        assert_eq!(tdr_dimension(&spec(&r, 1, 1, None)), 2);
        assert_eq!(tdr_dimension(&spec(&r, 0, 0, Some(1))), 2);
        assert_eq!(tdr_dimension(&spec(&r, 0, 0, None)), 0);
    }
}
