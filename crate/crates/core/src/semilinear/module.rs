use std::fmt;
use std::sync::Arc;

use super::matrix::{p_pow, WMatrix};
use crate::error::{Error, Result};
use crate::witt::WittRing;

/// Free `W_n(k)`-module with σ-linear `F`, optional σ⁻¹-linear `V` and an
/// increasing weight filtration split along the standard basis.
///
/// `F` acts as `v ↦ F·σ(v)` and `V` as `v ↦ V·σ⁻¹(v)` on column vectors.
/// `W_j` is spanned by the basis vectors of weight `<= j`; the basis may list
/// weights in any order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FilteredFModule {
    f: WMatrix,
    v: Option<WMatrix>,
    weights: Vec<i32>,
    level: u32,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Operator {
    F,
    V,
}

impl fmt::Display for Operator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Operator::F => "F",
            Operator::V => "V",
        })
    }
}

/// A violated module invariant, with the offending matrix entry.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    /// `op` sends basis vector `col` (weight `w_col`) to a vector with a
    /// nonzero component along `row`, of strictly larger weight.
    Flag { op: Operator, row: usize, col: usize },
    /// `F·σ(V) != p^level·Id` at the given entry.
    FrobeniusVerschiebung { row: usize, col: usize },
    /// `V·σ⁻¹(F) != p^level·Id` at the given entry.
    VerschiebungFrobenius { row: usize, col: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Flag { op, row, col } => write!(
                f,
                "{op} does not preserve the weight filtration: entry ({row}, {col}) is nonzero"
            ),
            Violation::FrobeniusVerschiebung { row, col } => {
                write!(f, "F·σ(V) differs from p^level·Id at ({row}, {col})")
            }
            Violation::VerschiebungFrobenius { row, col } => {
                write!(f, "V·σ⁻¹(F) differs from p^level·Id at ({row}, {col})")
            }
        }
    }
}

/// Outcome of [`FilteredFModule::verify`]. Violations appear in check order:
/// flag for `F`, flag for `V`, then the two `FV` identities, each scanned
/// row-major; only the first entry of each failing check is recorded.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct VerifyReport {
    pub violations: Vec<Violation>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn first(&self) -> Option<&Violation> {
        self.violations.first()
    }
}

/// Why a proposed base change is not an isomorphism.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IsoFailure {
    Shape,
    NotInvertible,
    Flag { row: usize, col: usize },
    Frobenius { row: usize, col: usize },
    Verschiebung { row: usize, col: usize },
    Level,
}

impl FilteredFModule {
    pub fn new(f: WMatrix, v: Option<WMatrix>, weights: Vec<i32>, level: u32) -> Result<Self> {
        if !f.is_square() || f.rows() != weights.len() {
            return Err(Error::Shape(format!(
                "F is {}x{} but {} weights were given",
                f.rows(),
                f.cols(),
                weights.len()
            )));
        }
        if let Some(v) = &v {
            if v.ring() != f.ring() {
                return Err(Error::IncompatibleRings);
            }
            if v.rows() != f.rows() || v.cols() != f.cols() {
                return Err(Error::Shape("F and V have different shapes".into()));
            }
        }
        if level == 0 {
            return Err(Error::InvalidParams("level must be positive".into()));
        }
        Ok(FilteredFModule {
            f,
            v,
            weights,
            level,
        })
    }

    pub fn ring(&self) -> &Arc<WittRing> {
        self.f.ring()
    }

    pub fn rank(&self) -> usize {
        self.weights.len()
    }

    pub fn f(&self) -> &WMatrix {
        &self.f
    }

    pub fn v(&self) -> Option<&WMatrix> {
        self.v.as_ref()
    }

    pub fn weights(&self) -> &[i32] {
        &self.weights
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    /// `V`, derived from `F` when absent.
    pub fn v_or_derived(&self) -> Result<WMatrix> {
        match &self.v {
            Some(v) => Ok(v.clone()),
            None => derive_verschiebung(&self.f, &self.weights, self.level),
        }
    }

    pub fn with_derived_v(&self) -> Result<Self> {
        let mut out = self.clone();
        out.v = Some(self.v_or_derived()?);
        Ok(out)
    }

    fn flag_violation(&self, m: &WMatrix, op: Operator) -> Option<Violation> {
        m.entries()
            .find(|((i, j), e)| !e.is_zero() && self.weights[*i] > self.weights[*j])
            .map(|((row, col), _)| Violation::Flag { op, row, col })
    }

    pub fn verify(&self) -> VerifyReport {
        let mut violations = Vec::new();
        violations.extend(self.flag_violation(&self.f, Operator::F));
        if let Some(v) = &self.v {
            violations.extend(self.flag_violation(v, Operator::V));
            let target = WMatrix::p_power_identity(self.ring(), self.rank(), self.level);
            if let Some((row, col)) = (&self.f * &v.sigma()).first_difference(&target) {
                violations.push(Violation::FrobeniusVerschiebung { row, col });
            }
            if let Some((row, col)) = (v * &self.f.sigma_inv()).first_difference(&target) {
                violations.push(Violation::VerschiebungFrobenius { row, col });
            }
        }
        VerifyReport { violations }
    }

    fn same_ring(&self, other: &Self) -> Result<()> {
        if self.ring() != other.ring() {
            return Err(Error::IncompatibleRings);
        }
        Ok(())
    }

    /// Basis `e_i ⊗ f_j` at index `i * other.rank() + j`.
    pub fn tensor(&self, other: &Self) -> Result<Self> {
        self.same_ring(other)?;
        let f = self.f.kron(&other.f)?;
        let v = match (&self.v, &other.v) {
            (Some(a), Some(b)) => Some(a.kron(b)?),
            _ => None,
        };
        let weights = self
            .weights
            .iter()
            .flat_map(|a| other.weights.iter().map(move |b| a + b))
            .collect();
        Self::new(f, v, weights, self.level + other.level)
    }

    pub fn direct_sum(&self, other: &Self) -> Result<Self> {
        self.same_ring(other)?;
        if self.level != other.level {
            return Err(Error::InvalidParams(format!(
                "direct sum of levels {} and {}",
                self.level, other.level
            )));
        }
        let f = self.f.block_diag(&other.f)?;
        let v = match (&self.v, &other.v) {
            (Some(a), Some(b)) => Some(a.block_diag(b)?),
            (None, None) => None,
            _ => Some(self.v_or_derived()?.block_diag(&other.v_or_derived()?)?),
        };
        let mut weights = self.weights.clone();
        weights.extend_from_slice(&other.weights);
        Self::new(f, v, weights, self.level)
    }

    /// `Hom(M, W(k)(1))` in the dual basis: `F' = σ(V)ᵀ`, `V' = σ⁻¹(F)ᵀ`,
    /// weights `-2 - w`.
    pub fn twisted_dual(&self) -> Result<Self> {
        let v = self.v_or_derived()?;
        let f_dual = v.sigma().transpose();
        let v_dual = self.f.sigma_inv().transpose();
        let weights = self.weights.iter().map(|w| -2 - w).collect();
        Self::new(f_dual, Some(v_dual), weights, self.level)
    }

    /// Module on the basis `e'_k = e_{perm[k]}`.
    pub fn permute(&self, perm: &[usize]) -> Result<Self> {
        let r = self.rank();
        let mut seen = vec![false; r];
        if perm.len() != r || perm.iter().any(|&i| i >= r || std::mem::replace(&mut seen[i], true))
        {
            return Err(Error::Shape("not a permutation of the basis".into()));
        }
        let f = self.f.select(perm, perm);
        let v = self.v.as_ref().map(|v| v.select(perm, perm));
        let weights = perm.iter().map(|&i| self.weights[i]).collect();
        Self::new(f, v, weights, self.level)
    }

    /// Module on the basis given by the columns of `p`, with the supplied
    /// weights: `F' = p⁻¹·F·σ(p)`, `V' = p⁻¹·V·σ⁻¹(p)`.
    pub fn change_basis(&self, p: &WMatrix, weights: Vec<i32>) -> Result<Self> {
        let inv = p.inverse()?;
        let f = &(&inv * &self.f) * &p.sigma();
        let v = self.v.as_ref().map(|v| &(&inv * v) * &p.sigma_inv());
        Self::new(f, v, weights, self.level)
    }

    /// Checks that the columns of `p` (coordinates in `self`'s basis) form a
    /// basis of `self` on which the structure of `other` is realized, i.e.
    /// `F·σ(p) = p·F_other`, `V·σ⁻¹(p) = p·V_other`, and `p`, `p⁻¹` respect
    /// weights.
    pub fn check_isomorphism(&self, other: &Self, p: &WMatrix) -> std::result::Result<(), IsoFailure> {
        if p.rows() != self.rank() || p.cols() != other.rank() || self.ring() != other.ring() {
            return Err(IsoFailure::Shape);
        }
        if self.level != other.level {
            return Err(IsoFailure::Level);
        }
        let inv = p.inverse().map_err(|_| IsoFailure::NotInvertible)?;
        let flag = |m: &WMatrix, w_rows: &[i32], w_cols: &[i32]| {
            m.entries()
                .find(|((i, j), e)| !e.is_zero() && w_rows[*i] > w_cols[*j])
                .map(|((row, col), _)| IsoFailure::Flag { row, col })
        };
        if let Some(e) = flag(p, &self.weights, &other.weights) {
            return Err(e);
        }
        if let Some(e) = flag(&inv, &other.weights, &self.weights) {
            return Err(e);
        }
        let lhs = &self.f * &p.sigma();
        let rhs = p * &other.f;
        if let Some((row, col)) = lhs.first_difference(&rhs) {
            return Err(IsoFailure::Frobenius { row, col });
        }
        if let (Some(v1), Some(v2)) = (&self.v, &other.v) {
            let lhs = v1 * &p.sigma_inv();
            let rhs = p * v2;
            if let Some((row, col)) = lhs.first_difference(&rhs) {
                return Err(IsoFailure::Verschiebung { row, col });
            }
        }
        Ok(())
    }

    pub fn to_ring(&self, target: &Arc<WittRing>) -> Result<Self> {
        let f = self.f.to_ring(target)?;
        let v = self.v.as_ref().map(|v| v.to_ring(target)).transpose()?;
        Self::new(f, v, self.weights.clone(), self.level)
    }

    /// Sub-quotient on the basis indices `idx` (the graded piece when `idx`
    /// is a weight class).
    pub fn restrict(&self, idx: &[usize]) -> Result<Self> {
        let f = self.f.select(idx, idx);
        let v = self.v.as_ref().map(|v| v.select(idx, idx));
        let weights = idx.iter().map(|&i| self.weights[i]).collect();
        Self::new(f, v, weights, self.level)
    }

    /// Indices of basis vectors of weight exactly `w`.
    pub fn weight_indices(&self, w: i32) -> Vec<usize> {
        (0..self.rank()).filter(|&i| self.weights[i] == w).collect()
    }
}

/// Solves `F·σ(V) = p^level·Id` for `V` through the local Smith form of `F`.
///
/// Any solution also satisfies `V·σ⁻¹(F) = p^level·Id`. When `F` is only known
/// modulo `p^n`, the solution is one of several agreeing modulo
/// `p^{n - e_max}`, where `p^{e_max}` is the largest elementary divisor.
pub fn derive_verschiebung(f: &WMatrix, weights: &[i32], level: u32) -> Result<WMatrix> {
    if !f.is_square() || weights.len() != f.rows() {
        return Err(Error::Shape("F must be square with one weight per row".into()));
    }
    let ring = f.ring();
    let r = f.rows();
    let s = f.local_smith();
    let mut diag = WMatrix::zeros(ring, r, r);
    for (i, e) in s.valuations.iter().enumerate() {
        let e = match e {
            Some(e) => *e,
            None if ring.n() > level => return Err(Error::SingularFrobenius),
            None => {
                return Err(Error::InsufficientPrecision {
                    required: level + 1,
                    actual: ring.n(),
                })
            }
        };
        if e > level {
            return Err(Error::NonIntegralVerschiebung {
                valuation: e,
                level,
            });
        }
        diag[(i, i)] = ring.from_int(p_pow(ring, level - e));
    }
    let target = WMatrix::p_power_identity(ring, r, level);
    let x = &(&s.v * &diag) * &s.u;
    let flagged = x.entries().any(|((i, j), e)| !e.is_zero() && weights[i] > weights[j]);
    if !flagged && &x * f == target {
        return Ok(x.sigma_inv());
    }
    // The SNF solution is only determined mod p^(n - e); pick the
    // representative that respects the flag and both identities.
    let slots: Vec<(usize, usize)> = (0..r)
        .flat_map(|i| (0..r).map(move |j| (i, j)))
        .filter(|&(i, j)| weights[i] <= weights[j])
        .collect();
    let mut system = WMatrix::zeros(ring, 2 * r * r, slots.len());
    let mut rhs = vec![ring.zero(); 2 * r * r];
    for (col, &(a, b)) in slots.iter().enumerate() {
        for i in 0..r {
            system[(i * r + b, col)] = f[(i, a)].clone();
            system[(r * r + a * r + i, col)] = f[(b, i)].clone();
        }
    }
    for i in 0..r {
        rhs[i * r + i] = target[(i, i)].clone();
        rhs[r * r + i * r + i] = target[(i, i)].clone();
    }
    let y = system.solve(&rhs).ok_or_else(|| {
        Error::InvalidBlock("no Verschiebung is compatible with the weight filtration".into())
    })?;
    let mut out = WMatrix::zeros(ring, r, r);
    for (&(i, j), e) in slots.iter().zip(y) {
        out[(i, j)] = e;
    }
    Ok(out.sigma_inv())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring(p: u64, n: u32, a: u32) -> Arc<WittRing> {
        WittRing::from_params(p, n, a, None).unwrap()
    }

    fn module(r: &Arc<WittRing>, f: &[Vec<i64>], v: &[Vec<i64>], w: Vec<i32>, l: u32) -> FilteredFModule {
        FilteredFModule::new(
            WMatrix::from_ints(r, f).unwrap(),
            Some(WMatrix::from_ints(r, v).unwrap()),
            w,
            l,
        )
        .unwrap()
    }

    #[test]
    fn tate_object_passes() {
        let r = ring(5, 3, 2);
        assert!(module(&r, &[vec![1]], &[vec![5]], vec![-2], 1).verify().passed());
    }

    #[test]
    fn fv_mismatch_is_reported() {
        let r = ring(3, 3, 1);
        let m = module(&r, &[vec![1]], &[vec![1]], vec![-2], 1);
        let rep = m.verify();
        assert_eq!(
            rep.first(),
            Some(&Violation::FrobeniusVerschiebung { row: 0, col: 0 })
        );
    }

    #[test]
    fn flag_rule_on_two_weights() {
        let r = ring(3, 3, 1);
        let w = vec![0, -2];
        // weight-0 vector mapped onto a weight-(-2) component: allowed
        let ok = FilteredFModule::new(
            WMatrix::from_ints(&r, &[vec![3, 0], vec![1, 1]]).unwrap(),
            None,
            w.clone(),
            1,
        )
        .unwrap();
        assert!(ok.verify().passed());
        // weight-(-2) vector acquiring a weight-0 component: not allowed
        let bad = FilteredFModule::new(
            WMatrix::from_ints(&r, &[vec![3, 1], vec![0, 1]]).unwrap(),
            None,
            w,
            1,
        )
        .unwrap();
        assert_eq!(
            bad.verify().first(),
            Some(&Violation::Flag {
                op: Operator::F,
                row: 0,
                col: 1
            })
        );
    }

    #[test]
    fn tensor_of_tate_objects() {
        let r = ring(7, 4, 1);
        let t1 = module(&r, &[vec![1]], &[vec![7]], vec![-2], 1);
        let t0 = module(&r, &[vec![7]], &[vec![1]], vec![0], 1);
        let tt = t1.tensor(&t1).unwrap();
        assert_eq!(tt.f(), &WMatrix::from_ints(&r, &[vec![1]]).unwrap());
        assert_eq!(tt.v().unwrap(), &WMatrix::from_ints(&r, &[vec![49]]).unwrap());
        assert_eq!((tt.weights(), tt.level()), (&[-4][..], 2));
        assert!(tt.verify().passed());
        let m = module(&r, &[vec![0, -7], vec![1, 0]], &[vec![0, 7], vec![-1, 0]], vec![-1, -1], 1);
        let mt = m.tensor(&t0).unwrap();
        assert_eq!(mt.f(), &m.f().scale_int(7));
        assert_eq!(mt.level(), 2);
        assert!(mt.verify().passed());
    }

    #[test]
    fn twisted_dual_swaps_tate_objects() {
        let r = ring(5, 3, 2);
        let t1 = module(&r, &[vec![1]], &[vec![5]], vec![-2], 1);
        let t0 = module(&r, &[vec![5]], &[vec![1]], vec![0], 1);
        assert_eq!(t1.twisted_dual().unwrap(), t0);
        assert_eq!(t0.twisted_dual().unwrap(), t1);
    }

    #[test]
    fn derived_v_matches_adjugate() {
        let r = ring(5, 4, 1);
        let f = WMatrix::from_ints(&r, &[vec![0, -5], vec![1, 1]]).unwrap();
        let v = derive_verschiebung(&f, &[-1, -1], 1).unwrap();
        let expected = WMatrix::from_ints(&r, &[vec![1, 5], vec![-1, 0]]).unwrap();
        // unique only modulo p^{n-1}
        assert!((&v - &expected).entries().all(|(_, e)| e.valuation().is_none_or(|k| k >= 3)));
        let m = FilteredFModule::new(f, Some(v), vec![-1, -1], 1).unwrap();
        assert!(m.verify().passed());
    }

    #[test]
    fn derived_v_respects_the_flag() {
        // torus ⊕ lattice with a coupling
        let r = ring(3, 3, 1);
        let f = WMatrix::from_ints(&r, &[vec![1, 7], vec![0, 3]]).unwrap();
        let v = derive_verschiebung(&f, &[-2, 0], 1).unwrap();
        assert!(v[(1, 0)].is_zero());
        let m = FilteredFModule::new(f, Some(v), vec![-2, 0], 1).unwrap();
        assert!(m.verify().passed());
        let x = WMatrix::from_ints(&r, &[vec![9, 0], vec![0, 1]]).unwrap();
        assert_eq!(
            derive_verschiebung(&WMatrix::from_ints(&r, &[vec![0, 1], vec![3, 0]]).unwrap(), &[0, -2], 1)
                .unwrap_err()
                .code(),
            "invalid-block"
        );
        assert!(x.solve(&[r.from_int(3), r.zero()]).is_none());
        assert_eq!(x.solve(&[r.from_int(18), r.from_int(2)]).unwrap()[1], r.from_int(2));
    }

    #[test]
    fn derive_errors() {
        let r = ring(3, 3, 1);
        let singular = WMatrix::from_ints(&r, &[vec![1, 0], vec![0, 0]]).unwrap();
        assert_eq!(derive_verschiebung(&singular, &[0, 0], 1), Err(Error::SingularFrobenius));
        let deep = WMatrix::from_ints(&r, &[vec![9]]).unwrap();
        assert_eq!(
            derive_verschiebung(&deep, &[0], 1),
            Err(Error::NonIntegralVerschiebung {
                valuation: 2,
                level: 1
            })
        );
        let r1 = ring(3, 1, 1);
        let zero = WMatrix::from_ints(&r1, &[vec![3]]).unwrap();
        assert_eq!(
            derive_verschiebung(&zero, &[0], 1),
            Err(Error::InsufficientPrecision {
                required: 2,
                actual: 1
            })
        );
    }

    #[test]
    fn permutation_isomorphism() {
        let r = ring(3, 3, 2);
        let m = module(
            &r,
            &[vec![1, 2], vec![0, 3]],
            &[vec![3, -2], vec![0, 1]],
            vec![-2, 0],
            1,
        );
        assert!(m.verify().passed());
        let q = m.permute(&[1, 0]).unwrap();
        assert!(q.verify().passed());
        let p = WMatrix::from_ints(&r, &[vec![0, 1], vec![1, 0]]).unwrap();
        assert_eq!(m.check_isomorphism(&q, &p), Ok(()));
        assert_eq!(
            m.check_isomorphism(&m, &p),
            Err(IsoFailure::Flag { row: 1, col: 0 })
        );
    }
}
