use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use super::{WittElem, WittRing};
use crate::error::{Error, Result};

/// Classical Witt coordinates `(x_0, ..., x_{n-1})` over F_p.
///
/// Arithmetic goes through the ghost map `w_k = Σ_{i<=k} p^i x_i^{p^{k-i}}`
/// evaluated over Z on digit representatives, which is independent of the
/// Galois-ring representation. The two are linked by
/// `(x_i) ↦ Σ p^i τ(x_i)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WittCoords {
    p: u64,
    digits: Vec<u64>,
}

impl WittCoords {
    pub fn new(p: u64, digits: Vec<u64>) -> Result<Self> {
        if digits.iter().any(|&d| d >= p) {
            return Err(Error::Domain("Witt digits must lie in [0, p)".into()));
        }
        Ok(WittCoords { p, digits })
    }

    pub fn digits(&self) -> &[u64] {
        &self.digits
    }

    fn require_prime_field(ring: &WittRing) -> Result<()> {
        if ring.a() != 1 {
            return Err(Error::UnsupportedInput(
                "Witt coordinates are only provided for a = 1".into(),
            ));
        }
        Ok(())
    }

    /// Digits of `x` in the Teichmüller expansion `x = Σ p^i τ(x_i)`.
    pub fn from_elem(x: &WittElem) -> Result<Self> {
        let ring = x.ring();
        Self::require_prime_field(ring)?;
        let p = ring.p();
        let mut rest = x.clone();
        let mut digits = Vec::with_capacity(ring.n() as usize);
        for i in 0..ring.n() {
            let d = rest.coords()[0] % p;
            digits.push(d);
            rest = &rest - &ring.teichmuller(&[d])?;
            if i + 1 < ring.n() {
                rest = rest.div_p_pow(1)?;
            }
        }
        Ok(WittCoords { p, digits })
    }

    pub fn to_elem(&self, ring: &Arc<WittRing>) -> Result<WittElem> {
        Self::require_prime_field(ring)?;
        if ring.p() != self.p || ring.n() as usize != self.digits.len() {
            return Err(Error::IncompatibleRings);
        }
        let mut acc = ring.zero();
        let mut pi: i64 = 1;
        for &d in &self.digits {
            acc = &acc + &ring.teichmuller(&[d])?.scale(pi);
            pi = pi.saturating_mul(self.p as i64);
        }
        Ok(acc)
    }

    pub fn ghost(&self) -> Vec<BigInt> {
        let p = BigInt::from(self.p);
        (0..self.digits.len())
            .map(|k| {
                (0..=k)
                    .map(|i| {
                        let e = self.p.pow((k - i) as u32) as u32;
                        p.pow(i as u32) * BigInt::from(self.digits[i]).pow(e)
                    })
                    .sum()
            })
            .collect()
    }

    /// Recovers integer Witt components from target ghost values.
    fn from_ghost(&self, ghost: &[BigInt]) -> WittCoords {
        let p = BigInt::from(self.p);
        let mut comps: Vec<BigInt> = Vec::with_capacity(ghost.len());
        for (k, g) in ghost.iter().enumerate() {
            let mut rest = g.clone();
            for (i, s) in comps.iter().enumerate() {
                let e = self.p.pow((k - i) as u32) as u32;
                rest -= p.pow(i as u32) * s.pow(e);
            }
            let pk = p.pow(k as u32);
            debug_assert!((&rest % &pk).is_zero());
            comps.push(rest / pk);
        }
        let digits = comps
            .iter()
            .map(|s| {
                let r = ((s % &p) + &p) % &p;
                r.to_u64().expect("digit fits")
            })
            .collect();
        WittCoords { p: self.p, digits }
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.p != other.p || self.digits.len() != other.digits.len() {
            return Err(Error::IncompatibleRings);
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let g: Vec<BigInt> = self
            .ghost()
            .into_iter()
            .zip(other.ghost())
            .map(|(x, y)| x + y)
            .collect();
        Ok(self.from_ghost(&g))
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let g: Vec<BigInt> = self
            .ghost()
            .into_iter()
            .zip(other.ghost())
            .map(|(x, y)| x * y)
            .collect();
        Ok(self.from_ghost(&g))
    }

    pub fn zero(p: u64, n: u32) -> Self {
        WittCoords {
            p,
            digits: vec![0; n as usize],
        }
    }

    pub fn one(p: u64, n: u32) -> Self {
        let mut digits = vec![0; n as usize];
        if let Some(d) = digits.first_mut() {
            *d = 1;
        }
        WittCoords { p, digits }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn classical_sum_in_w2_f2() {
        let x = WittCoords::new(2, vec![1, 0]).unwrap();
        assert_eq!(x.add(&x).unwrap().digits(), &[0, 1]);
    }

    #[test]
    fn classical_product_in_w3_f2() {
        let x = WittCoords::new(2, vec![0, 1, 0]).unwrap();
        assert_eq!(x.mul(&x).unwrap().digits(), &[0, 0, 1]);
    }

    #[test]
    fn expansion_round_trip() {
        let r = WittRing::from_params(3, 3, 1, None).unwrap();
        for k in 0..27 {
            let x = r.from_int(k);
            let c = WittCoords::from_elem(&x).unwrap();
            assert_eq!(c.to_elem(&r).unwrap(), x);
        }
        assert_eq!(WittCoords::one(3, 3).to_elem(&r).unwrap(), r.one());
    }

    #[test]
    fn rejects_extension_fields() {
        let r = WittRing::from_params(3, 2, 2, None).unwrap();
        assert!(WittCoords::from_elem(&r.one()).is_err());
    }
}
