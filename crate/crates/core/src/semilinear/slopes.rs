use std::fmt;

use num_rational::Ratio;

use super::matrix::WMatrix;
use super::module::FilteredFModule;
use crate::error::{Error, Result};

/// Newton slopes with multiplicities, ascending.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SlopeProfile {
    segments: Vec<(Ratio<i64>, usize)>,
}

impl SlopeProfile {
    pub fn from_slopes(slopes: impl IntoIterator<Item = Ratio<i64>>) -> Self {
        let mut all: Vec<Ratio<i64>> = slopes.into_iter().collect();
        all.sort();
        let mut segments: Vec<(Ratio<i64>, usize)> = Vec::new();
        for s in all {
            match segments.last_mut() {
                Some((last, m)) if *last == s => *m += 1,
                _ => segments.push((s, 1)),
            }
        }
        SlopeProfile { segments }
    }

    pub fn from_ints(slopes: &[i64]) -> Self {
        Self::from_slopes(slopes.iter().map(|&s| Ratio::from_integer(s)))
    }

    /// Distinct slopes with multiplicities.
    pub fn segments(&self) -> &[(Ratio<i64>, usize)] {
        &self.segments
    }

    /// Every slope repeated by its multiplicity.
    pub fn multiset(&self) -> Vec<Ratio<i64>> {
        self.segments
            .iter()
            .flat_map(|(s, m)| std::iter::repeat_n(*s, *m))
            .collect()
    }

    pub fn rank(&self) -> usize {
        self.segments.iter().map(|(_, m)| m).sum()
    }

    pub fn sum(&self) -> Ratio<i64> {
        self.segments
            .iter()
            .map(|(s, m)| s * Ratio::from_integer(*m as i64))
            .sum()
    }

    /// Image under `s ↦ level - s`.
    pub fn reflected(&self, level: u32) -> Self {
        let l = Ratio::from_integer(i64::from(level));
        Self::from_slopes(self.multiset().into_iter().map(|s| l - s))
    }

    pub fn is_symmetric(&self, level: u32) -> bool {
        self.reflected(level) == *self
    }

    pub fn within(&self, lo: i64, hi: i64) -> bool {
        self.segments
            .iter()
            .all(|(s, _)| *s >= Ratio::from_integer(lo) && *s <= Ratio::from_integer(hi))
    }
}

impl fmt::Display for SlopeProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.multiset().iter().map(Ratio::to_string).collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

/// `F·σ(F)·…·σ^{a-1}(F)`, the matrix of the linear map `F^a`.
pub fn linearization(f: &WMatrix) -> WMatrix {
    let a = f.ring().a() as i64;
    (1..a).fold(f.clone(), |acc, i| &acc * &f.sigma_pow(i))
}

/// Lower convex hull of the points `(k, v_k)`, `v_k = None` meaning
/// "too large to matter". Returns `(slope, length)` for each segment,
/// left to right.
pub(crate) fn lower_hull(vals: &[Option<u32>]) -> Vec<(Ratio<i64>, usize)> {
    let pts: Vec<(i64, i64)> = vals
        .iter()
        .enumerate()
        .filter_map(|(k, v)| v.map(|v| (k as i64, i64::from(v))))
        .collect();
    let mut out = Vec::new();
    let mut cur = 0;
    while cur + 1 < pts.len() {
        let (x0, y0) = pts[cur];
        let mut best = cur + 1;
        for j in cur + 2..pts.len() {
            let (xb, yb) = pts[best];
            let (xj, yj) = pts[j];
            // slope(j) <= slope(best), preferring the farther point on ties
            if (yj - y0) * (xb - x0) <= (yb - y0) * (xj - x0) {
                best = j;
            }
        }
        let (x1, y1) = pts[best];
        out.push((Ratio::new(y1 - y0, x1 - x0), (x1 - x0) as usize));
        cur = best;
    }
    out
}

/// Smallest precision at which [`newton_slopes`] is defined for `m`.
pub fn required_precision(m: &FilteredFModule) -> u32 {
    m.rank() as u32 * m.level() * m.ring().a() + 1
}

/// Newton slopes of `F`, normalized by `a`.
pub fn newton_slopes(m: &FilteredFModule) -> Result<SlopeProfile> {
    let ring = m.ring();
    let required = required_precision(m);
    if ring.n() < required {
        return Err(Error::InsufficientPrecision {
            required,
            actual: ring.n(),
        });
    }
    if m.rank() == 0 {
        return Ok(SlopeProfile::from_slopes([]));
    }
    let cp = linearization(m.f()).charpoly()?;
    // cp is highest degree first; the polygon wants the constant term at 0.
    let vals: Vec<Option<u32>> = cp.iter().rev().map(|c| c.valuation()).collect();
    if vals[0].is_none() {
        return Err(Error::SingularFrobenius);
    }
    let a = i64::from(ring.a());
    let slopes = lower_hull(&vals)
        .into_iter()
        .flat_map(|(s, len)| std::iter::repeat_n(-s / a, len));
    Ok(SlopeProfile::from_slopes(slopes))
}
